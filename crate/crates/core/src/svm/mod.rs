//! Linear SVM duals for classification and ε-insensitive regression.
//!
//! Both problems are solved with the equality constraint that corresponds
//! to an unregularized bias. The margin is reported as `1/‖w‖` regardless.

mod model;
mod smo;

pub use model::{
    margin, predict, train_svc, train_svc_with_gram, train_svr, train_svr_with_gram, SolverParams, SvcProblem,
    SvmModel, SvrProblem, Task,
};
