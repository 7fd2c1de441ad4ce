//! Runtime side of the Yui head simulator: the in-process bus, the avatar
//! and operator daemons, scenario scripts, session recording and the TCP
//! bridge.

pub mod avatar;
pub mod bus;
pub mod calib;
pub mod clock;
pub mod config;
pub mod error;
pub mod link;
pub mod net;
pub mod offline;
pub mod operator;
pub mod scenario;
pub mod session;
pub mod sweep;
pub mod tables;

pub use error::{Error, Result};
