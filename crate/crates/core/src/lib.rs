pub mod engine;
pub mod error;
pub mod exactlin;
pub mod lpcore;
pub mod specmodel;

pub use error::{Error, Line, ParseRationalError, Result, Which};
pub use exactlin::{rat, RatMatrix, RatVector, Rational};
pub use specmodel::{
    build_c, build_d, cross_ratio_compatible_2x2, joint_to_conditionals, validate_pair, Axis,
    ConditionalPair, JointMatrix, MarginalVector, SystemMatrices,
};
pub use lpcore::{eta_lp, joint_lp, solve, LpProblem, LpResult, LpStatus};
pub use engine::{
    check_rank_method, classify, recover_joint, recover_tau, solution_space, CompatReport,
    MethodResults, RankMethodResult, SolutionSpace, SolutionSpaceCheck, Verdict,
};
