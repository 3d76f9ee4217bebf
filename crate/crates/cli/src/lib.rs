//! Library surface behind the `apmeas` binary: run configuration with
//! reproducible echoes, the seeded measure corpus used by the property and
//! acceptance suites, small parsers for the flag mini-languages, and the
//! acceptance criteria themselves.

pub mod acceptance;
pub mod config;
pub mod corpus;
pub mod parse;

pub use config::RunConfig;
pub use corpus::corpus;
