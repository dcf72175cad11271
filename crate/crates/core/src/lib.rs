// SPDX-License-Identifier: Apache-2.0
pub mod analysis;
pub mod auth;
pub mod cipher;
pub mod codec;
pub mod error;
pub mod field;
pub mod plane;

pub use error::{Error, Result};
