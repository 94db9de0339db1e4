//! File handling, report records and the benchmark harness behind the `als`
//! command.

pub mod bench;
pub mod io;
pub mod run;
