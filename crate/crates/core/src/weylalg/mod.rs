//! Weyl quartics over the α/β-plane families, their root structure, and the
//! scalar invariants built from them.

mod calib;
mod implicit;
mod invariants;
mod quartic;
mod roots;

pub use calib::{calibrate_kappa, calibration_instances, default_calibration, CalibrationConstant};
pub use implicit::implicit_root_jet;
pub use invariants::{
    einstein_residual, obstruction_from, obstruction_residual, rps_discriminant, ricci_null_residual, Obstruction,
};
pub use quartic::{
    asd_basis, family_bivectors, quartic_from_tensor, sd_basis, weyl_quartic, weyl_quartic_jets, weyl_quartics, QuarticForm, Side,
    WeylComponents,
};
pub use roots::{root_structure, Root, RootEntry, RootList};
