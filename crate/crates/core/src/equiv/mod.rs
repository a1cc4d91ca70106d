//! Session subtyping, equivalence verdicts and the coverage scenario suite.

mod binding;
mod oracle;
mod scenario;
mod subtype;
mod suite;
mod verdict;

pub use binding::{check_binding, BindingError};
pub use oracle::{oracle_equivalent, oracle_subtype, OracleTooLarge, ORACLE_MAX_TRANSITIONS};
pub use scenario::{
    generate_scenario, generate_suite, traces_agree, Expected, Mutation, Scenario, ScenarioError, CONTROL_SIGNALS,
    MAX_LENGTH, MIN_LENGTH,
};
pub use subtype::{subtype, SubtypeResult};
pub use suite::{classify, run_suite, Classification, SuiteSummary};
pub use verdict::{equivalent, Direction, EquivalenceVerdict, Outcome};
