//! Data loading, synthetic instances and the `klpdhg` command-line driver
//! for the `kl-pdhg` solvers.

pub mod app;
pub mod bench;
pub mod io;
pub mod output;

pub use app::{run, Cli, Command};
pub use io::{load_dataset, Format, LoadError};
