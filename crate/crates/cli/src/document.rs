//! Input files, dispatched on their `"type"` field.
//!
//! | `type`                 | value                          |
//! |------------------------|--------------------------------|
//! | `constant_log`         | `ConstantLogConnection`        |
//! | `representation`       | `Representation`               |
//! | `poly_log_1d`          | `PolyLog1D`                    |
//! | `connection_tower`     | `ConnectionTower`              |
//! | `representation_tower` | `RepresentationTower`          |

use std::path::Path;

use rhrel::connections::{ConstantLogConnection, PolyLog1D, Representation};
use rhrel::tower::{ConnectionTower, RepresentationTower};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::failure::Failure;

#[derive(Debug, Clone)]
pub enum Document {
    Connection(ConstantLogConnection),
    Representation(Representation),
    Poly(PolyLog1D),
    ConnectionTower(ConnectionTower),
    RepresentationTower(RepresentationTower),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Connection(_) => "constant_log",
            Document::Representation(_) => "representation",
            Document::Poly(_) => "poly_log_1d",
            Document::ConnectionTower(_) => "connection_tower",
            Document::RepresentationTower(_) => "representation_tower",
        }
    }

    pub fn from_value(v: Value, path: &Path) -> Result<Document, Failure> {
        fn typed<T: DeserializeOwned>(v: Value, path: &Path) -> Result<T, Failure> {
            serde_json::from_value(v).map_err(|e| Failure::parse(path, e))
        }
        let kind = v
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Failure::usage(format!("{}: missing \"type\" field", path.display())))?
            .to_owned();
        Ok(match kind.as_str() {
            "constant_log" => Document::Connection(typed(v, path)?),
            "representation" => Document::Representation(typed(v, path)?),
            "poly_log_1d" => Document::Poly(typed(v, path)?),
            "connection_tower" => Document::ConnectionTower(typed(v, path)?),
            "representation_tower" => Document::RepresentationTower(typed(v, path)?),
            other => {
                return Err(Failure::usage(format!(
                    "{}: unknown document type {other:?}",
                    path.display()
                )))
            }
        })
    }

    pub fn load(path: &Path) -> Result<Document, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Failure::parse(path, e))?;
        Document::from_value(v, path)
    }
}
