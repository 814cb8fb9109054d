//! Automorphisms of the unit ball and of symmetrized ellipsoids.

mod ball;
mod ellipsoid;
mod equivariance;
mod template;

pub use ball::{
    make_moebius_aut, make_unitary_aut, unitary_residual, BallAutomorphism, BallData, CMatrix,
    SteinResiduals, POLE_GUARD, STEIN_TOL, UNITARY_TOL,
};
pub use ellipsoid::{
    ell_aut_eval, ell_aut_inverse, induce_from_ball, linear_sym_map_expanded, phi_ii_closed_form,
    EllAutKind, EllipsoidAutomorphism, InducedMap, PhiIIParams,
};
pub use equivariance::{
    check_equivariance, EquivarianceReport, Permutation, Witness, DEFAULT_SAMPLES,
    EQUIVARIANCE_TOL, SEARCH_BUDGET,
};
pub use template::{from_lemma_template, LemmaForm, LemmaTemplate};
