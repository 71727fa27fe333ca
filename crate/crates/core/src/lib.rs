pub mod field;
pub mod matrix;
pub mod singer;
pub mod forge;
pub mod verify;
pub mod complex;
pub mod cli;
