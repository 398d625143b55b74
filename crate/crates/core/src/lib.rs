pub mod finsetcat;
pub mod fsfilt;
pub mod partitions;
pub mod ratlinalg;
pub mod repdecomp;
pub mod verify;
