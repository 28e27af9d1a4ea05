//! Selection machinery shared by SMS-EMOA and NSGA-III.

mod hypervolume;
mod niching;
mod sort;

pub use hypervolume::{contributions, hv_contribution, hypervolume, min_contributors};
pub use niching::{niche_select, reference_points, Niching, ReferencePointSet};
pub use sort::{fast_non_dominated_sort, FrontPartition};
