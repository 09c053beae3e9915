pub mod curves;
pub mod gf;
pub mod intpoly;
pub mod json;
pub mod modp;
pub mod simplicity;
pub mod survey;
pub mod zeta;
