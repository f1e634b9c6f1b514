use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupChoice {
    Se3,
    So3,
}

impl FromStr for GroupChoice {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "se3" => Ok(Self::Se3),
            "so3" => Ok(Self::So3),
            other => Err(BenchError::InvalidConfig(format!(
                "unknown group `{other}`"
            ))),
        }
    }
}

impl fmt::Display for GroupChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Se3 => "se3",
            Self::So3 => "so3",
        })
    }
}

/// Transport method under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeTag {
    Rk2,
    Rk4,
    Pole,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 3] = [SchemeTag::Rk2, SchemeTag::Rk4, SchemeTag::Pole];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Rk2 => "rk2",
            Self::Rk4 => "rk4",
            Self::Pole => "pole",
        }
    }

    /// Accepted interval for the fitted convergence order.
    pub fn order_band(self) -> (f64, f64) {
        match self {
            Self::Rk2 => (1.7, 2.3),
            Self::Rk4 => (3.5, 4.5),
            Self::Pole => (1.6, 2.4),
        }
    }
}

impl FromStr for SchemeTag {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk2" => Ok(Self::Rk2),
            "rk4" => Ok(Self::Rk4),
            "pole" => Ok(Self::Pole),
            other => Err(BenchError::InvalidConfig(format!(
                "unknown scheme `{other}`"
            ))),
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub group: GroupChoice,
    /// Anisotropy of the SE(3) metric. Ignored for SO(3).
    pub beta: f64,
    pub schemes: Vec<SchemeTag>,
    pub n_grid: Vec<usize>,
    pub seed: u64,
    pub reference_steps: usize,
    pub output_path: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            group: GroupChoice::Se3,
            beta: 1.5,
            schemes: SchemeTag::ALL.to_vec(),
            n_grid: geometric_grid(10, 1000, 16).expect("default grid is valid"),
            seed: 42,
            reference_steps: 2000,
            output_path: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(BenchError::InvalidConfig(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if self.schemes.is_empty() {
            return Err(BenchError::InvalidConfig("no schemes selected".into()));
        }
        if self.n_grid.is_empty() {
            return Err(BenchError::InvalidConfig("empty step grid".into()));
        }
        if self.n_grid[0] < 1 {
            return Err(BenchError::InvalidConfig("step counts must be >= 1".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::InvalidConfig(
                "step grid must be strictly increasing".into(),
            ));
        }
        let max = *self.n_grid.last().unwrap();
        if self.reference_steps < max {
            return Err(BenchError::InvalidConfig(format!(
                "reference_steps ({}) must be at least the largest grid value ({max})",
                self.reference_steps
            )));
        }
        Ok(())
    }
}

/// `count` integers spaced geometrically from `n_min` to `n_max`, inclusive.
/// Fails when rounding would produce repeated values.
pub fn geometric_grid(n_min: usize, n_max: usize, count: usize) -> Result<Vec<usize>> {
    if n_min < 1 || n_max < n_min || count < 1 {
        return Err(BenchError::InvalidConfig(format!(
            "cannot build a grid from {n_min} to {n_max} with {count} points"
        )));
    }
    if count == 1 {
        return Ok(vec![n_min]);
    }
    let ratio = n_max as f64 / n_min as f64;
    let grid: Vec<usize> = (0..count)
        .map(|k| {
            let t = k as f64 / (count - 1) as f64;
            (n_min as f64 * ratio.powf(t)).round() as usize
        })
        .collect();
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::InvalidConfig(format!(
            "{count} points between {n_min} and {n_max} collide after rounding"
        )));
    }
    Ok(grid)
}
