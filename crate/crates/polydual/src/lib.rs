//! File formats, threaded search and the command-line interface on top of
//! `polydual-core`.

pub mod certificate;
pub mod cli;
pub mod parallel;
pub mod polyfile;
