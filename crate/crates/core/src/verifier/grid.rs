use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::MIN_ARGUMENT;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Spacing {
    Log,
    Linear,
    /// Log-uniform draws from a seeded ChaCha8 stream.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl SampleGrid {
    pub fn new(x_min: f64, x_max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let g = SampleGrid {
            x_min,
            x_max,
            count,
            spacing,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn log(x_min: f64, x_max: f64, count: usize) -> Result<Self> {
        Self::new(x_min, x_max, count, Spacing::Log)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::Config(format!(
                "grid needs finite x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.count < 2 {
            return Err(Error::Config(format!("grid needs count >= 2, got {}", self.count)));
        }
        if self.x_min < MIN_ARGUMENT {
            return Err(Error::Config(format!(
                "grid needs x_min >= {MIN_ARGUMENT:e}, got {}",
                self.x_min
            )));
        }
        Ok(())
    }

    /// Sample abscissae in generation order (sorted for the regular spacings).
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let last = (n - 1) as f64;
        let (a, b) = (self.x_min, self.x_max);
        match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| if i + 1 == n { b } else { a + (b - a) * (i as f64 / last) })
                .collect(),
            Spacing::Log => {
                let (la, lb) = (a.ln(), b.ln());
                (0..n)
                    .map(|i| match i {
                        0 => a,
                        _ if i + 1 == n => b,
                        _ => (la + (lb - la) * (i as f64 / last)).exp(),
                    })
                    .collect()
            }
            Spacing::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (la, lb) = (a.ln(), b.ln());
                (0..n)
                    .map(|_| {
                        let u: f64 = rng.random();
                        (la + (lb - la) * u).exp().clamp(a, b)
                    })
                    .collect()
            }
        }
    }

    /// Same range and spacing with `factor` times the density.
    pub fn densified(&self, factor: usize) -> Self {
        let count = match self.spacing {
            Spacing::Random { .. } => self.count * factor,
            _ => (self.count - 1) * factor + 1,
        };
        SampleGrid { count, ..self.clone() }
    }
}

/// Union of sample grids; points are sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub parts: Vec<SampleGrid>,
}

impl Grid {
    pub fn new(parts: Vec<SampleGrid>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Config("grid needs at least one part".into()));
        }
        for p in &parts {
            p.validate()?;
        }
        Ok(Grid { parts })
    }

    /// `10⁴` log-spaced points on `[10⁻³, 10³]` plus `10³` log-uniform random
    /// points drawn with `seed`.
    pub fn standard(seed: u64) -> Self {
        Grid {
            parts: vec![
                SampleGrid {
                    x_min: 1e-3,
                    x_max: 1e3,
                    count: 10_000,
                    spacing: Spacing::Log,
                },
                SampleGrid {
                    x_min: 1e-3,
                    x_max: 1e3,
                    count: 1_000,
                    spacing: Spacing::Random { seed },
                },
            ],
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.parts.iter().flat_map(|p| p.points()).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    pub fn densified(&self, factor: usize) -> Self {
        Grid {
            parts: self.parts.iter().map(|p| p.densified(factor)).collect(),
        }
    }

    pub fn describe(&self) -> String {
        self.parts
            .iter()
            .map(|p| {
                let kind = match p.spacing {
                    Spacing::Log => "log".to_string(),
                    Spacing::Linear => "linear".to_string(),
                    Spacing::Random { seed } => format!("random(seed={seed})"),
                };
                format!("{} {kind} points on [{:e}, {:e}]", p.count, p.x_min, p.x_max)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::standard(0)
    }
}

impl From<SampleGrid> for Grid {
    fn from(g: SampleGrid) -> Self {
        Grid { parts: vec![g] }
    }
}
