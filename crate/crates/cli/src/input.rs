//! Reading input documents from files or stdin.

use std::io::Read;
use std::path::Path;

use specred::graphs::parse_edge_list;
use specred::io::{parse, parse_document, Json};
use specred::{LabeledMatrix, Scalar};

use crate::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    let io = |e: std::io::Error| Failure::new("IoError", format!("{}: {e}", path.display()));
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

pub fn read<J: Json>(path: &Path) -> Result<J, Failure> {
    Ok(parse(&read_text(path)?)?)
}

/// A labeled matrix document, or an edge list when the text is not a JSON object.
pub fn read_matrix<T: Scalar>(path: &Path) -> Result<LabeledMatrix<T>, Failure> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        Ok(LabeledMatrix::from_json(&parse_document(&text)?)?)
    } else {
        Ok(parse_edge_list(&text)?)
    }
}
