//! Derivatives of `F`, spectra on the fixed-volume manifold and
//! classification of parameter points.
//!
//! The fixed-volume manifold through `ρ` is the level set of `det A`; its
//! tangent space is `∇det(ρ)^⊥`. Because `F` is homogeneous of degree zero,
//! `ρ·∇F = 0` while `ρ·∇det = 3 det A ≠ 0`, so a constrained stationary point
//! of `F` has `∇F = 0` (the multiplier vanishes) and the second-order test
//! reduces to the Hessian compressed onto that tangent space.

mod diff;
mod eigen;
mod reference;

pub use diff::{gradient_fd, gradient_with, hessian_fd, hessian_with, is_one_sided, DiffConfig};
pub use eigen::{symmetric_eigen, Eigen, MAX_SWEEPS};
pub use reference::ReferenceConstants;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot_n, norm_n};
use crate::selling::{det_gradient, SellingParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    InteriorStrictMin,
    StratumStrictMin,
    Saddle,
    NonStationary,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::InteriorStrictMin => "interior_strict_min",
            Classification::StratumStrictMin => "stratum_strict_min",
            Classification::Saddle => "saddle",
            Classification::NonStationary => "non_stationary",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Steps and tolerances used by [`classify_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    pub diff: DiffConfig,
    pub tol_grad: f64,
    pub tol_eig: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            diff: DiffConfig::default(),
            tol_grad: 1e-5,
            tol_eig: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryReport {
    pub point: SellingParams,
    pub gradient: [f64; 6],
    pub hessian: [[f64; 6]; 6],
    pub full_spectrum: [f64; 6],
    pub tangent_spectrum: [f64; 5],
    pub active_set: Vec<usize>,
    pub classification: Classification,
    /// Set when some derivative used a one-sided stencil (point on a
    /// stratum); smoothness across the stratum is then not asserted.
    pub one_sided: bool,
    /// A feasible tangent direction of negative curvature, if one was found.
    pub descent_direction: Option<[f64; 6]>,
}

/// Orthonormal basis of `normal^⊥` (five vectors in `R^6`).
pub fn tangent_basis(normal: &[f64; 6]) -> Result<[[f64; 6]; 5]> {
    let len = norm_n(normal);
    if len < 1e-12 {
        return Err(Error::ZeroGradient);
    }
    let n = normal.map(|x| x / len);
    let skip = (0..6)
        .max_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
        .expect("six components");

    let mut basis: Vec<[f64; 6]> = vec![n];
    for k in (0..6).filter(|&k| k != skip) {
        let mut v = [0.0; 6];
        v[k] = 1.0;
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj = dot_n(&v, b);
                for i in 0..6 {
                    v[i] -= proj * b[i];
                }
            }
        }
        let len = norm_n(&v);
        basis.push(v.map(|x| x / len));
    }
    Ok(std::array::from_fn(|k| basis[k + 1]))
}

/// Eigenpairs of `PᵀHP` for an orthonormal tangent basis `P`; eigenvectors
/// are returned in `R^6`.
fn compress(hessian: &[[f64; 6]; 6], basis: &[[f64; 6]; 5]) -> Result<([f64; 5], [[f64; 6]; 5])> {
    let hb: [[f64; 6]; 5] = basis.map(|b| std::array::from_fn(|i| dot_n(&hessian[i], &b)));
    let reduced: [[f64; 5]; 5] = std::array::from_fn(|i| std::array::from_fn(|j| dot_n(&basis[i], &hb[j])));
    let eig = symmetric_eigen(&reduced)?;
    let lifted = eig.vectors.map(|y| {
        let mut w = [0.0; 6];
        for (coef, b) in y.iter().zip(basis) {
            for i in 0..6 {
                w[i] += coef * b[i];
            }
        }
        w
    });
    Ok((eig.values, lifted))
}

/// Eigenvalues of the Hessian compressed onto `∇det(ρ)^⊥`, ascending.
pub fn tangent_spectrum(rho: &SellingParams, config: &DiffConfig) -> Result<[f64; 5]> {
    let basis = tangent_basis(&det_gradient(rho.as_array()))?;
    let hessian = hessian_fd(rho, config)?;
    Ok(compress(&hessian, &basis)?.0)
}

/// Stationarity and second-order classification of `ρ` on the closed cone
/// at fixed volume.
///
/// A point is non-stationary if an inactive gradient component exceeds
/// `tol_grad`, or an active one is below `-tol_grad` (increasing that
/// parameter from zero lowers `F`). At a stationary point a tangent spectrum
/// above `tol_eig` gives a strict minimum; a tangent eigenvalue below
/// `-tol_eig` whose eigenvector (or its negative) points into the cone gives
/// a saddle; anything else is inconclusive.
pub fn classify_point(rho: &SellingParams, config: &ClassifyConfig) -> Result<StationaryReport> {
    let gradient = gradient_fd(rho, &config.diff)?;
    let hessian = hessian_fd(rho, &config.diff)?;
    let full_spectrum = symmetric_eigen(&hessian)?.values;
    let basis = tangent_basis(&det_gradient(rho.as_array()))?;
    let (tangent_spectrum, tangent_vectors) = compress(&hessian, &basis)?;
    let active_set = rho.active_set();
    let one_sided = rho
        .as_array()
        .iter()
        .any(|&x| is_one_sided(x, config.diff.h_hess) || is_one_sided(x, config.diff.h_grad));

    let is_active = |k: usize| active_set.contains(&k);
    let non_stationary = (0..6).any(|k| {
        if is_active(k) {
            gradient[k] < -config.tol_grad
        } else {
            gradient[k].abs() > config.tol_grad
        }
    });

    let mut descent_direction = None;
    let classification = if non_stationary {
        Classification::NonStationary
    } else if tangent_spectrum.iter().all(|&l| l > config.tol_eig) {
        if active_set.is_empty() {
            Classification::InteriorStrictMin
        } else {
            Classification::StratumStrictMin
        }
    } else {
        // active components with positive slope must stay at zero
        let feasible = |w: &[f64; 6]| {
            active_set.iter().all(|&k| {
                if gradient[k] > config.tol_grad {
                    w[k].abs() <= 1e-9
                } else {
                    w[k] >= -1e-9
                }
            })
        };
        descent_direction = tangent_spectrum
            .iter()
            .zip(&tangent_vectors)
            .filter(|(&l, _)| l < -config.tol_eig)
            .flat_map(|(_, w)| [*w, w.map(|x| -x)])
            .find(|w| feasible(w));
        if descent_direction.is_some() {
            Classification::Saddle
        } else {
            Classification::Inconclusive
        }
    };

    Ok(StationaryReport {
        point: *rho,
        gradient,
        hessian,
        full_spectrum,
        tangent_spectrum,
        active_set,
        classification,
        one_sided,
        descent_direction,
    })
}
