//! Membership tests for the affine classes, canonical coefficient extraction,
//! the Hodge transform, and the coefficient-family machinery behind the
//! characterization of ext. one affine functions.

mod canonical;
mod classify;
mod kernel;
mod spaces;
mod transform;

pub use canonical::{
    build_ext, build_ext_int, ext_int_coefficients, extract_ext_coeffs, extract_ext_int_canonical,
    extract_int_coeffs, probe_c_s, random_canonical, random_canonical_ext, split_g_h, CanonicalExt,
    CanonicalExtInt, ExtIntCoefficients, MixedTerm, SplitCase, SplitGH,
};
pub use classify::{
    falsify_convexity, is_ext_int_one_affine, is_ext_one_affine, is_int_one_affine,
    replay_convexity_witness, replay_witness, Canonical, NonConvexityWitness, Verdict, Witness,
};
pub use kernel::{
    check_orthogonality, construct_h_p, eval_f_p, f_p_symbolic, h_p_identity_holds,
    power_preimage, solve_d_kernel, CoeffFamilyD, OrthogonalityReport, RelationCheck,
};
pub use spaces::{affine_function_space, common_affine_space, normal_splitting_holds, PolynomialSpace};
pub use transform::{fix_eta, fix_xi, hodge_transform};
