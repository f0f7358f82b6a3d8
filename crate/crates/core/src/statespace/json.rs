//! State-space JSON schema:
//! `{"label", "ambient_dim", "vertices": [["p/q", …]], "unit_effect": ["p/q", …]}`.

use serde::{Deserialize, Serialize};

use crate::geometry::Field;

use super::{SpaceError, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub label: String,
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub unit_effect: Vec<String>,
}

pub fn space_to_json<F: Field>(space: &StateSpace<F>) -> SpaceJson {
    SpaceJson {
        label: space.label().to_string(),
        ambient_dim: space.ambient_dim(),
        vertices: space
            .vertices()
            .iter()
            .map(|v| v.iter().map(ToString::to_string).collect())
            .collect(),
        unit_effect: space.unit_effect().iter().map(ToString::to_string).collect(),
    }
}

fn parse_vec<F: Field>(xs: &[String]) -> Result<Vec<F>, SpaceError> {
    xs.iter()
        .map(|s| F::parse_scalar(s).map_err(|e| SpaceError::Format(e.to_string())))
        .collect()
}

/// Builds and validates a space from its JSON form. Non-extremal points are
/// rejected.
pub fn space_from_json<F: Field>(json: &SpaceJson) -> Result<StateSpace<F>, SpaceError> {
    let unit = parse_vec::<F>(&json.unit_effect)?;
    if unit.len() != json.ambient_dim {
        return Err(SpaceError::Format(format!(
            "unit_effect has {} entries but ambient_dim is {}",
            unit.len(),
            json.ambient_dim
        )));
    }
    let vertices = json.vertices.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>, _>>()?;
    StateSpace::new(vertices, unit, json.label.clone())
}

pub fn parse_space_json<F: Field>(text: &str) -> Result<StateSpace<F>, SpaceError> {
    let json: SpaceJson = serde_json::from_str(text).map_err(|e| SpaceError::Format(e.to_string()))?;
    space_from_json(&json)
}
