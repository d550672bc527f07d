//! Critical exponents, auxiliary bounds and per-theorem hypothesis checks.

mod bounds;
mod critical;
mod theorems;
mod verdict;

pub use bounds::{lemma45_alpha_bound, power_split_bound, Lemma45Bound};
pub use critical::{critical_alpha, CriticalExponent, MAX_BRACKET, RESIDUAL_TOL};
pub use theorems::{
    alpha_zero, check_lemma_6_1, check_theorem_3_1, check_theorem_3_2, check_theorem_4_2,
    check_theorem_4_3, check_theorem_5_1, check_theorem_5_2, check_theorem_5_4, PROVISO_START,
    SMALL_K_FLAG,
};
pub use verdict::{ConditionCheck, Conclusion, TheoremId, TheoremVerdict, VERDICT_CSV_HEADER};
