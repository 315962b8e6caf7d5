//! Metric families in Walker form with the properties they are expected to
//! have, seeded random instances, and the conformal factor that makes a
//! sesqui-Walker metric two-sided.

mod builders;
mod factor;
mod instance;
mod random;

pub use builders::{
    mk_cp_example, mk_left_flat, mk_ricci_null, mk_sd2015, mk_sd_two_sided, mk_two_sided, mk_walker, SD2015_NAMES,
    SD_TWO_SIDED_NAMES,
};
pub use factor::{conformal_two_sided_factor, TwoSidedFactor};
pub use instance::{Exclusion, FamilyInstance, Provenance, Tag};
pub use random::{random_instance, random_polys, FAMILY_NAMES};
