//! Toroidalization of dominant morphism germs between log-smooth surface
//! germs, in exact rational arithmetic.

pub mod algebra;
pub mod blowup;
pub mod input;
pub mod model;
pub mod principalize;
pub mod ramification;
pub mod toric2;
pub mod toroidalize;
pub mod trace;
