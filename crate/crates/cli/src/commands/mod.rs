pub mod audit;
pub mod gen;
pub mod screen;
pub mod selftest;
