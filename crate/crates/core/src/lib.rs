pub mod error;
pub mod fourier;
pub mod gf2;
pub mod hash;
pub mod sketch;
pub mod valuations;
pub mod harness;
pub mod input;
pub mod protocol;
pub mod stream;
