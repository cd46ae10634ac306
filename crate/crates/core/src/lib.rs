pub mod algcore;
pub mod coalgcore;
pub mod error;
pub mod exactla;
pub mod families;
pub mod frobcore;
pub mod modcomod;
pub mod report;
pub mod shell;
pub mod suite;

pub use error::{Error, Result};
