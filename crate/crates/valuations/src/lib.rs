pub mod block;
pub mod hensel;
pub mod padic;
pub mod patch;
pub mod poly;
pub mod rational;
pub mod uniform;

pub use block::{
    solve_affine, solve_parametrized, transfer_modulus, verify_solution, ApproxBlock,
    BlockApproxProblem, BlockError, Margin, RationalMap, Rejection, SolutionCertificate,
    Variety, Verdict,
};
pub use hensel::{
    check_henselian_form, neighborhood_data, project_inverse, sharp_hensel_lift, HenselError,
    LiftProblem, NeighborhoodData,
};
pub use padic::{PAdic, PAdicError};
pub use patch::{eval_patch, sign_vector, PatchExpr, ValuationPoint};
pub use poly::{Poly, XPoly};
pub use rational::{is_prime, val, vp, Val, ValError};
pub use uniform::{
    ball_partition, continuity_certificate, verify_ball_partition, BallCheck, BallPart,
    BallPartition, ContinuityCheck, UniformError,
};
