//! The detection protocol: molecular signal, molecule-to-atom force
//! conversion, background discrimination and the experiment budget.

pub mod background;
pub mod budget;
pub mod convert;
pub mod signal;

pub use background::{background_model, distinguishability, Distinguishability};
pub use budget::{per_pulse_scatter, shot_budget, BudgetInputs, BudgetReport, Regime};
pub use convert::{conversion_curve, convert_odf, ConversionOptions, ConversionResult};
pub use signal::{molecular_signal, two_ion_signal, LogicLaser, MolecularSignal, SignalOptions};
