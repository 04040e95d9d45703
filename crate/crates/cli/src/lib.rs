//! Instance files, benchmark sweeps and the `cop-gambler` command line on
//! top of [`cop_gambler_core`].

pub mod bench;
pub mod cli;
pub mod instance;

pub use instance::{parse_instance, read_instance, Instance, ParseError};
