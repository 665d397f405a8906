pub mod curve;
pub mod scenario;
pub mod render;
pub mod session;
pub mod parse;
pub mod server;
pub mod cli;
