pub mod document;
pub mod parser;
pub mod schema;
pub mod slice;

pub use parser::{parse_expression, print_expression, ParseError};
