pub mod field;
pub mod flow;
pub mod harmonics;
pub mod isi;
pub mod sds;
pub mod space;
