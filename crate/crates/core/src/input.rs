//! Hand-written germ files: a small TOML document with the two pullbacks
//! and the boundary coordinates on each side.

use serde::Deserialize;
use thiserror::Error;

use crate::model::{GermInput, InputError};

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub f_y1: String,
    pub f_y2: String,
    #[serde(default)]
    pub boundary_x: Vec<String>,
    #[serde(default)]
    pub boundary_y: Vec<String>,
    pub max_steps: Option<usize>,
    pub trace: Option<String>,
    pub dot_x: Option<String>,
    pub dot_y: Option<String>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("boundary_x is nonempty but boundary_y is empty")]
    EmptyTargetBoundary,
}

impl InputSpec {
    pub fn from_toml(src: &str) -> Result<InputSpec, SpecError> {
        Ok(toml::from_str(src)?)
    }

    pub fn germ(&self) -> Result<GermInput, SpecError> {
        if !self.boundary_x.is_empty() && self.boundary_y.is_empty() {
            return Err(SpecError::EmptyTargetBoundary);
        }
        let bx: Vec<&str> = self.boundary_x.iter().map(String::as_str).collect();
        let by: Vec<&str> = self.boundary_y.iter().map(String::as_str).collect();
        Ok(GermInput::parse(&self.f_y1, &self.f_y2, &bx, &by)?)
    }
}
