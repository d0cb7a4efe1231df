#![no_std]
extern crate alloc;

pub mod arrays;
pub mod constructions;
pub mod error;
pub mod gf;
pub mod golden;
pub mod linalg;
pub mod matrix;
pub mod plan;
pub mod verify;

pub use error::{Error, Result};
