//! Renderer-neutral scene description shared by Bloch-circle and toroid
//! panels. Serialized as `{"version": "scene/1", "primitives": [...]}` with
//! each primitive tagged by `kind`.

use std::collections::HashSet;

use serde::{Deserialize, Deserializer, Serialize};

pub const SCENE_VERSION: &str = "scene/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Xy([f64; 2]),
    Xyz([f64; 3]),
}

impl Position {
    pub fn coords(&self) -> &[f64] {
        match self {
            Position::Xy(p) => p,
            Position::Xyz(p) => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusParams {
    pub major_radius: f64,
    pub tube_radius: f64,
    /// Entanglement parameter the surface represents.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Primitive {
    Point {
        id: String,
        label: String,
        #[serde(flatten)]
        position: Position,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        style: Option<String>,
    },
    Segment {
        id: String,
        label: String,
        endpoints: [Vec<f64>; 2],
        length: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        style: Option<String>,
    },
    Polyline {
        id: String,
        label: String,
        samples: Vec<Vec<f64>>,
        closed: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        style: Option<String>,
    },
    Torus {
        id: String,
        label: String,
        params: TorusParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        style: Option<String>,
    },
    Annotation {
        id: String,
        text: String,
        anchor: Vec<f64>,
    },
}

impl Primitive {
    pub fn id(&self) -> &str {
        match self {
            Primitive::Point { id, .. }
            | Primitive::Segment { id, .. }
            | Primitive::Polyline { id, .. }
            | Primitive::Torus { id, .. }
            | Primitive::Annotation { id, .. } => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    pub version: String,
    pub primitives: Vec<Primitive>,
}

impl Default for Scene {
    fn default() -> Self {
        Scene {
            version: SCENE_VERSION.to_string(),
            primitives: Vec::new(),
        }
    }
}

// Primitives of unknown kind are dropped rather than rejected.
impl<'de> Deserialize<'de> for Scene {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            version: String,
            primitives: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(de)?;
        let primitives = raw
            .primitives
            .into_iter()
            .filter_map(|v| serde_json::from_value(v).ok())
            .collect();
        Ok(Scene {
            version: raw.version,
            primitives,
        })
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics on a duplicate id; ids are generated by this crate.
    pub fn push(&mut self, p: Primitive) {
        assert!(self.get(p.id()).is_none(), "duplicate scene id {}", p.id());
        self.primitives.push(p);
    }

    pub fn get(&self, id: &str) -> Option<&Primitive> {
        self.primitives.iter().find(|p| p.id() == id)
    }

    pub fn point(&mut self, id: &str, label: &str, position: Position, style: Option<&str>) {
        self.push(Primitive::Point {
            id: id.into(),
            label: label.into(),
            position,
            style: style.map(Into::into),
        });
    }

    /// Adds a segment whose length is the distance between its endpoints.
    pub fn segment(&mut self, id: &str, label: &str, from: &[f64], to: &[f64]) {
        let length = distance(from, to);
        self.segment_with_length(id, label, from, to, length);
    }

    pub fn segment_with_length(&mut self, id: &str, label: &str, from: &[f64], to: &[f64], length: f64) {
        self.push(Primitive::Segment {
            id: id.into(),
            label: label.into(),
            endpoints: [from.to_vec(), to.to_vec()],
            length,
            style: None,
        });
    }

    pub fn annotate(&mut self, id: &str, text: String, anchor: &[f64]) {
        self.push(Primitive::Annotation {
            id: id.into(),
            text,
            anchor: anchor.to_vec(),
        });
    }

    /// Checks id uniqueness and that every segment's stored length matches
    /// its endpoints within `tol`. Returns the offending ids.
    pub fn inconsistencies(&self, tol: f64) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut bad = Vec::new();
        for p in &self.primitives {
            if !seen.insert(p.id()) {
                bad.push(p.id().to_string());
            }
            if let Primitive::Segment {
                id,
                endpoints,
                length,
                ..
            } = p
            {
                if (distance(&endpoints[0], &endpoints[1]) - length).abs() > tol {
                    bad.push(id.clone());
                }
            }
        }
        bad
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scene serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }
}
