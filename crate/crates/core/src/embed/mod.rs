//! The embeddings: `mu` of truncated skew polynomials into matrices over
//! `R[z]/(z^t)`, the supermatrix embedding `Theta`, and the Grassmann
//! representation tower obtained by iterating `mu`.

mod mu;
mod supermatrix;
mod tower;

pub use mu::{embed_mu, embed_mu_n, mod_diff, mu_codomain, mu_preimage, mu_trace_check};
pub use supermatrix::{
    anti_part, embed_theta, embed_theta_matrix, fixed_part, is_supermatrix, random_supermatrix,
    supermatrix_closure_check, theta_preimage, SupermatrixShape,
};
pub use tower::{build_grassmann_tower, tower_apply, GrassmannTower, DEFAULT_MAX_TOWER_GENERATORS};
