pub mod field;
pub mod linalg;
pub mod spectral;
pub mod modstruct;
pub mod pair;
pub mod gen;
pub mod oracle;
pub mod cli;
