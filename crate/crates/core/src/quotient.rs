//! The isoperimetric quotient `F = A_T / V^(2/3)` with `V = √det A`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::build_cell;
use crate::selling::SellingParams;

/// The seven `Q_* = V_*ᵀ A V_*` values and the matching `√Q_*` products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaDecomposition {
    pub q12: f64,
    pub q13: f64,
    pub q23: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q0: f64,
    /// `√Q_*` as scalar prefactor times `√(uᵀAu)`, in the order
    /// `12, 13, 23, 1, 2, 3, 0`.
    pub sqrt_terms: [f64; 7],
}

impl AreaDecomposition {
    pub fn q_values(&self) -> [f64; 7] {
        [self.q12, self.q13, self.q23, self.q1, self.q2, self.q3, self.q0]
    }
}

/// Scalar prefactor and `uᵀAu` for each representative face.
fn prefactors_and_norms(rho: &[f64; 6]) -> [(f64, f64); 7] {
    let [a, b, c, d, e, f] = *rho;
    [
        (c * d, a + b + e + f),
        (b * e, a + c + d + f),
        (a * f, b + c + d + e),
        (b * c + b * f + c * f, a + d + e),
        (a * c + a * e + c * e, b + d + f),
        (a * b + a * d + b * d, c + e + f),
        (d * e + d * f + e * f, a + b + c),
    ]
}

pub fn area_decomposition(rho: &SellingParams) -> AreaDecomposition {
    let terms = prefactors_and_norms(rho.as_array());
    let q = terms.map(|(s, n)| s * s * n);
    AreaDecomposition {
        q12: q[0],
        q13: q[1],
        q23: q[2],
        q1: q[3],
        q2: q[4],
        q3: q[5],
        q0: q[6],
        sqrt_terms: terms.map(|(s, n)| s * n.sqrt()),
    }
}

/// `F(ρ) = 2 (det A)^(-5/6) Σ √Q_*` by the closed formula.
pub fn f_closed(rho: &SellingParams) -> f64 {
    f_closed_unchecked(rho.as_array())
}

pub(crate) fn f_closed_unchecked(rho: &[f64; 6]) -> f64 {
    let sum: f64 = prefactors_and_norms(rho)
        .iter()
        .map(|&(s, n)| s * n.sqrt())
        .sum();
    let log_det = crate::selling::det_closed(rho).ln();
    2.0 * (-5.0 / 6.0 * log_det).exp() * sum
}

/// Products `ρ_i ρ_j` summed into each prefactor and the indices summed into
/// each norm, in the order of [`prefactors_and_norms`].
const FACE_TERMS: [(&[(usize, usize)], &[usize]); 7] = [
    (&[(2, 3)], &[0, 1, 4, 5]),
    (&[(1, 4)], &[0, 2, 3, 5]),
    (&[(0, 5)], &[1, 2, 3, 4]),
    (&[(1, 2), (1, 5), (2, 5)], &[0, 3, 4]),
    (&[(0, 2), (0, 4), (2, 4)], &[1, 3, 5]),
    (&[(0, 1), (0, 3), (1, 3)], &[2, 4, 5]),
    (&[(3, 4), (3, 5), (4, 5)], &[0, 1, 2]),
];

/// Exact gradient of the closed formula. Smooth wherever `det A > 0`,
/// including the boundary of the cone.
pub fn f_closed_gradient(rho: &SellingParams) -> [f64; 6] {
    let x = rho.as_array();
    let mut sum = 0.0;
    let mut d_sum = [0.0; 6];
    for (pairs, norm) in FACE_TERMS {
        let s: f64 = pairs.iter().map(|&(i, j)| x[i] * x[j]).sum();
        let n: f64 = norm.iter().map(|&i| x[i]).sum();
        let root = n.sqrt();
        sum += s * root;
        for &(i, j) in pairs {
            d_sum[i] += x[j] * root;
            d_sum[j] += x[i] * root;
        }
        if s != 0.0 {
            for &i in norm {
                d_sum[i] += s / (2.0 * root);
            }
        }
    }
    let det = crate::selling::det_closed(x);
    let d_det = crate::selling::det_gradient(x);
    let pre = 2.0 * (-5.0 / 6.0 * det.ln()).exp();
    std::array::from_fn(|k| pre * (d_sum[k] - 5.0 / 6.0 * sum * d_det[k] / det))
}

/// `F` from the explicit cell: vertices, polygon vector areas, metric face
/// areas, total area over `(det A)^(1/3)`.
pub fn f_geometric(rho: &SellingParams) -> Result<f64> {
    let cell = build_cell(rho)?;
    Ok(cell.total_area * (-rho.det().ln() / 3.0).exp())
}

/// Sphere-normalised quotient `Q = 36π / F³` (`Q = 1` for a ball).
pub fn q_from_f(f: f64) -> f64 {
    36.0 * std::f64::consts::PI / f.powi(3)
}

/// One row of the reference comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub structure: &'static str,
    pub cell: &'static str,
    pub exact: &'static str,
    pub params: SellingParams,
    pub f: f64,
    pub q: f64,
}

/// SC, FCC and BCC with their exact `F` expressions and `Q` values.
pub fn reference_table() -> [TableRow; 3] {
    let row = |structure, cell, exact, params: SellingParams| {
        let f = f_closed(&params);
        TableRow {
            structure,
            cell,
            exact,
            params,
            f,
            q: q_from_f(f),
        }
    };
    [
        row("SC", "cube", "6", SellingParams::sc()),
        row("FCC", "rhombic dodecahedron", "3*2^(5/6)", SellingParams::fcc()),
        row(
            "BCC",
            "truncated octahedron",
            "3*2^(2/3)*(1+2*sqrt(3))/4",
            SellingParams::bcc(),
        ),
    ]
}
