//! On-disk JSON documents.
//!
//! Coverings travel as [`CoveringDocument`]; analysis results travel as
//! [`ReportDocument`] with a `kind` naming the payload shape. Numbers are
//! serialized in shortest-roundtrip decimal form, so parsing reproduces every
//! binary64 value bit-for-bit.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use diskcover::{Covering, Disk, Point, Rect};

/// Version tag every document carries.
pub const SCHEMA_VERSION: &str = "1";

/// Why a document failed to load.
#[derive(Debug)]
pub enum DocError {
    /// Not parseable as JSON of the expected shape.
    Parse(String),
    /// Parseable, but violating a schema invariant (version, radius, geometry).
    Schema(String),
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Parse(m) => write!(f, "malformed document: {m}"),
            DocError::Schema(m) => write!(f, "invalid document: {m}"),
        }
    }
}

impl std::error::Error for DocError {}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RectDoc {
    pub w: f64,
    pub h: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiskDoc {
    pub x: f64,
    pub y: f64,
}

/// A rectangle plus unit-disk centers, as stored on disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringDocument {
    pub schema_version: String,
    pub rect: RectDoc,
    pub disks: Vec<DiskDoc>,
    /// Always exactly `1.0`; present so the file is self-describing.
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Map<String, Value>>,
}

impl CoveringDocument {
    pub fn from_covering(c: &Covering, metadata: Option<Map<String, Value>>) -> Self {
        CoveringDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            rect: RectDoc {
                w: c.rect.width,
                h: c.rect.height,
            },
            disks: c
                .disks
                .iter()
                .map(|d| DiskDoc {
                    x: d.center.x,
                    y: d.center.y,
                })
                .collect(),
            radius: 1.0,
            metadata,
        }
    }

    /// Validate the schema invariants and build the in-memory covering.
    pub fn to_covering(&self) -> Result<Covering, DocError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocError::Schema(format!(
                "unsupported schema_version {:?} (expected {:?})",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        if self.radius != 1.0 {
            return Err(DocError::Schema(format!(
                "radius must be exactly 1.0, got {}",
                self.radius
            )));
        }
        let rect = Rect::new(self.rect.w, self.rect.h)
            .map_err(|e| DocError::Schema(e.to_string()))?;
        let disks = self
            .disks
            .iter()
            .map(|d| Disk::new(Point::new(d.x, d.y)))
            .collect();
        Covering::new(rect, disks).map_err(|e| DocError::Schema(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// Envelope for analysis outputs: `kind` names the payload shape
/// (`verdict`, `netstats`, `constants`, `minimization`, `search`).
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument<T> {
    pub schema_version: String,
    pub kind: String,
    pub payload: T,
}

impl<T: Serialize> ReportDocument<T> {
    pub fn new(kind: &str, payload: T) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            kind: kind.to_string(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use diskcover::constructions::square_chain;

    #[test]
    fn roundtrip_is_bit_exact() {
        let c = square_chain(3).unwrap().covering;
        let doc = CoveringDocument::from_covering(&c, None);
        let text = doc.to_json();
        let back = CoveringDocument::from_json(&text).unwrap();
        assert_eq!(back.rect.w.to_bits(), doc.rect.w.to_bits());
        assert_eq!(back.rect.h.to_bits(), doc.rect.h.to_bits());
        for (a, b) in back.disks.iter().zip(&doc.disks) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
        let again = back.to_covering().unwrap();
        assert_eq!(again.rect.width.to_bits(), c.rect.width.to_bits());
    }

    #[test]
    fn schema_version_is_enforced() {
        let c = square_chain(1).unwrap().covering;
        let mut doc = CoveringDocument::from_covering(&c, None);
        doc.schema_version = "2".into();
        assert!(matches!(doc.to_covering(), Err(DocError::Schema(_))));
    }

    #[test]
    fn radius_must_be_one() {
        let c = square_chain(1).unwrap().covering;
        let mut doc = CoveringDocument::from_covering(&c, None);
        doc.radius = 0.5;
        assert!(matches!(doc.to_covering(), Err(DocError::Schema(_))));
    }

    #[test]
    fn geometry_is_validated() {
        let text = r#"{"schema_version":"1","rect":{"w":-1.0,"h":2.0},"disks":[{"x":0.0,"y":0.0}],"radius":1.0}"#;
        let doc = CoveringDocument::from_json(text).unwrap();
        assert!(matches!(doc.to_covering(), Err(DocError::Schema(_))));
        let empty = r#"{"schema_version":"1","rect":{"w":1.0,"h":1.0},"disks":[],"radius":1.0}"#;
        let doc = CoveringDocument::from_json(empty).unwrap();
        assert!(matches!(doc.to_covering(), Err(DocError::Schema(_))));
        assert!(CoveringDocument::from_json("not json").is_err());
    }

    #[test]
    fn metadata_survives_roundtrip() {
        let c = square_chain(2).unwrap().covering;
        let mut meta = Map::new();
        meta.insert("construction".into(), Value::from("square-chain"));
        meta.insert("n".into(), Value::from(2));
        let doc = CoveringDocument::from_covering(&c, Some(meta));
        let back = CoveringDocument::from_json(&doc.to_json()).unwrap();
        let m = back.metadata.unwrap();
        assert_eq!(m["construction"], Value::from("square-chain"));
        assert_eq!(m["n"], Value::from(2));
    }

    #[test]
    fn report_document_shape() {
        let rep = ReportDocument::new("constants", vec![1.0, 2.0]);
        let v: Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["schema_version"], Value::from("1"));
        assert_eq!(v["kind"], Value::from("constants"));
        assert_eq!(v["payload"][1], Value::from(2.0));
    }
}
