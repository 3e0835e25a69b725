use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::error::{invalid_arg, Result};
use crate::matrix::Matrix;

/// Bumped whenever the built-in analog mixture changes.
pub const PAPER_ANALOG_VERSION: u32 = 1;

/// Seed used for the published analog dataset.
pub const PAPER_ANALOG_SEED: u64 = 7;

/// One mixture component. Labels follow component order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    /// Axis-aligned Gaussian with per-dimension standard deviations.
    Gaussian { n: usize, mean: Vec<f64>, std: Vec<f64> },
    /// Uniform on an axis-aligned box.
    UniformBox { n: usize, min: Vec<f64>, max: Vec<f64> },
    /// Uniform on a 2-D "L": a vertical arm of `height` and a horizontal arm
    /// of `width`, both `thickness` wide, meeting at the lower-left `corner`.
    LShape {
        n: usize,
        corner: [f64; 2],
        width: f64,
        height: f64,
        thickness: f64,
    },
}

impl Component {
    pub fn size(&self) -> usize {
        match self {
            Component::Gaussian { n, .. } | Component::UniformBox { n, .. } | Component::LShape { n, .. } => *n,
        }
    }

    fn dim(&self) -> usize {
        match self {
            Component::Gaussian { mean, .. } => mean.len(),
            Component::UniformBox { min, .. } => min.len(),
            Component::LShape { .. } => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.size() == 0 {
            return invalid_arg("component size must be at least 1");
        }
        match self {
            Component::Gaussian { mean, std, .. } => {
                if mean.is_empty() || mean.len() != std.len() {
                    return invalid_arg("gaussian mean and std must be nonempty and of equal length");
                }
                if std.iter().any(|s| !(s.is_finite() && *s > 0.0)) || mean.iter().any(|m| !m.is_finite()) {
                    return invalid_arg("invalid covariance: standard deviations must be positive and finite");
                }
            }
            Component::UniformBox { min, max, .. } => {
                if min.is_empty() || min.len() != max.len() {
                    return invalid_arg("box bounds must be nonempty and of equal length");
                }
                if min.iter().zip(max).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
                    return invalid_arg("box bounds must satisfy min < max");
                }
            }
            Component::LShape {
                corner,
                width,
                height,
                thickness,
                ..
            } => {
                let ok = corner.iter().all(|c| c.is_finite())
                    && *thickness > 0.0
                    && width > thickness
                    && height > thickness
                    && width.is_finite()
                    && height.is_finite();
                if !ok {
                    return invalid_arg("L-shape needs width, height > thickness > 0");
                }
            }
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
        match self {
            Component::Gaussian { n, mean, std } => {
                let normals: Vec<Normal<f64>> = mean
                    .iter()
                    .zip(std)
                    .map(|(&m, &s)| Normal::new(m, s).expect("validated"))
                    .collect();
                for _ in 0..*n {
                    out.extend(normals.iter().map(|d| d.sample(rng)));
                }
            }
            Component::UniformBox { n, min, max } => {
                for _ in 0..*n {
                    out.extend(min.iter().zip(max).map(|(&a, &b)| rng.random_range(a..b)));
                }
            }
            Component::LShape {
                n,
                corner,
                width,
                height,
                thickness,
            } => {
                let vertical = thickness * height;
                let horizontal = thickness * (width - thickness);
                let p_vertical = vertical / (vertical + horizontal);
                for _ in 0..*n {
                    if rng.random::<f64>() < p_vertical {
                        out.push(corner[0] + rng.random::<f64>() * thickness);
                        out.push(corner[1] + rng.random::<f64>() * height);
                    } else {
                        out.push(corner[0] + thickness + rng.random::<f64>() * (width - thickness));
                        out.push(corner[1] + rng.random::<f64>() * thickness);
                    }
                }
            }
        }
    }
}

/// A named list of components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub name: String,
    pub components: Vec<Component>,
}

impl MixtureSpec {
    /// Same layout with every component size multiplied by `factor`.
    pub fn scaled(&self, factor: usize) -> MixtureSpec {
        let mut spec = self.clone();
        for c in &mut spec.components {
            match c {
                Component::Gaussian { n, .. } | Component::UniformBox { n, .. } | Component::LShape { n, .. } => {
                    *n *= factor
                }
            }
        }
        spec.name = format!("{}-x{factor}", self.name);
        spec
    }

    pub fn total_size(&self) -> usize {
        self.components.iter().map(Component::size).sum()
    }
}

/// Samples each component in order from one seeded stream.
pub fn generate_mixture(spec: &MixtureSpec, seed: u64) -> Result<LabeledDataset> {
    let Some(first) = spec.components.first() else {
        return invalid_arg("mixture needs at least one component");
    };
    let dim = first.dim();
    for c in &spec.components {
        c.validate()?;
        if c.dim() != dim {
            return invalid_arg("all mixture components must share a dimension");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(spec.total_size() * dim);
    let mut labels = Vec::with_capacity(spec.total_size());
    for (label, c) in spec.components.iter().enumerate() {
        c.sample(&mut rng, &mut data);
        labels.extend(std::iter::repeat_n(label, c.size()));
    }
    let points = Matrix::new(labels.len(), dim, data)?;
    LabeledDataset::new(points, Some(labels), spec.name.clone())
}

/// Two-dimensional analog of the varied-density benchmark: three Gaussians
/// whose variances grow 1:4:16, an L-shaped uniform cluster and two uniform
/// clusters along the bottom.
pub fn paper_analog_spec() -> MixtureSpec {
    MixtureSpec {
        name: "paper-analog".into(),
        components: vec![
            Component::Gaussian {
                n: 370,
                mean: vec![1.05, 2.1],
                std: vec![0.05, 0.05],
            },
            Component::Gaussian {
                n: 640,
                mean: vec![1.4, 2.1],
                std: vec![0.1, 0.1],
            },
            Component::Gaussian {
                n: 450,
                mean: vec![2.25, 2.1],
                std: vec![0.2, 0.2],
            },
            Component::LShape {
                n: 760,
                corner: [0.0, 0.75],
                width: 1.2,
                height: 1.8,
                thickness: 0.2,
            },
            Component::UniformBox {
                n: 470,
                min: vec![0.3, 0.0],
                max: vec![1.3, 0.5],
            },
            Component::UniformBox {
                n: 310,
                min: vec![1.5, 0.0],
                max: vec![2.5, 0.5],
            },
        ],
    }
}
