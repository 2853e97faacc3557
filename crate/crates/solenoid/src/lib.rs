pub mod decision;
pub mod dynamics;
pub mod endo;
pub mod error;
pub mod exact;
pub mod nf;
pub mod odometer;
pub mod padic;
pub mod report;

pub use error::Error;
