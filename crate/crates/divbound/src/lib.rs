//! File formats, seeded sampling, the acceptance suite and the command-line
//! front end for [`divbound_core`].

pub mod acceptance;
pub mod cli;
pub mod io;
pub mod output;
pub mod sampling;
