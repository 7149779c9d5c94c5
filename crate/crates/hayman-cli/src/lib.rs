pub mod catalog;
pub mod commands;
pub mod parser;
pub mod report;
