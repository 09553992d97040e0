//! Session relay between one wizard and any number of viewers.
//!
//! [`session::Session`] is the transport-free state machine, [`hub::Hub`]
//! serializes access to it, and [`server::Server`] exposes it over WebSocket.

pub mod client;
pub mod hub;
pub mod protocol;
pub mod server;
pub mod session;

pub use hub::{Connection, Hub};
pub use protocol::{ClientMessage, ServerMessage, PROTOCOL_VERSION};
pub use server::Server;
pub use session::{Session, SessionConfig};
