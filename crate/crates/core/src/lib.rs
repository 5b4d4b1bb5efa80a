pub mod cli;
pub mod defaults;
pub mod dist;
pub mod envelope;
pub mod error;
pub mod identity;
pub mod info;
pub mod io;
pub mod lp;
pub mod region;
pub mod search;
pub mod sim;

pub use error::{Error, Result};
