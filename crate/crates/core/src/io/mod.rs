pub mod corpus;
pub mod parser;
pub mod printer;
pub mod report;
