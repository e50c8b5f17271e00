pub mod commands;
pub mod formats;
pub mod verify;
