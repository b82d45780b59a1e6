pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod grammars;
pub mod group;
pub mod lab;
pub mod load;
pub mod machines;
pub mod monoid;
pub mod words;
