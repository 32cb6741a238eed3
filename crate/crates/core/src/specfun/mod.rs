//! Special functions used by the closed-form capacity expressions.

pub mod cache;
pub mod gamma;
pub mod hyper;
pub mod meijer;

pub use cache::{meijer_g2_cached, meijer_g_cached, tricomi_u_cached, tricomi_u_da_cached, tricomi_u_db_cached};
pub use gamma::{
    binomial, digamma, factorial, gamma, gamma_q, lngamma, lngamma_complex, rgamma, scaled_upper_gamma,
    upper_incomplete_gamma,
    EULER_GAMMA,
};
pub use hyper::{gauss_2f1, tricomi_u, tricomi_u_da, tricomi_u_da_step, tricomi_u_db, tricomi_u_db_step};
pub use meijer::{
    meijer_g, meijer_g2, meijer_g2_with, meijer_g_with, ContourPlan, ContourRule, Estimate, MeijerG2Spec,
    MeijerGSpec, MellinKernel,
};
