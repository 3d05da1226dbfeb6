pub mod error;
pub mod field;
pub mod freegroup;
pub mod registry;
pub mod scheme;
pub mod securesum;
pub mod smallcancel;
pub mod tietze;

pub use error::{Error, Result};
pub use freegroup::{Alphabet, Letter, Word};
pub use smallcancel::Presentation;
