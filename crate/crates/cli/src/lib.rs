//! JSON interchange documents and SVG rendering behind the `diskcover`
//! command-line tool.

pub mod doc;
pub mod svg;
