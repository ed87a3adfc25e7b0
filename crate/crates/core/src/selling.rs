//! Selling parameters, the Gram matrix they induce, and the `S4` action that
//! relabels the obtuse superbase.
//!
//! Components are always stored in the order
//! `(ρ01, ρ02, ρ03, ρ12, ρ13, ρ23) = (a, b, c, d, e, f)`: component `k` sits
//! on edge [`EDGES`]`[k]` of the complete graph on `{0, 1, 2, 3}`.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edges of `K4` in storage order.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Relative tolerance under which a component counts as zero (stratum membership).
pub const ZERO_TOL: f64 = 1e-12;

/// Storage index of the edge `{i, j}`, `i != j`.
pub const fn edge_index(i: usize, j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("edge_index: vertices must be distinct and < 4"),
    }
}

/// Six non-negative Selling parameters describing a nondegenerate lattice.
///
/// Construction checks that every component is finite and non-negative and
/// that `det A(ρ) > 0`. Boundary points (some components zero) are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 6]", into = "[f64; 6]")]
pub struct SellingParams([f64; 6]);

impl SellingParams {
    pub fn new(values: [f64; 6]) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeParameter { index, value });
            }
        }
        let det = det_closed(&values);
        let scale = trace_scale(&values);
        if !(det > 1e-14 * scale.powi(3)) || det <= 0.0 {
            return Err(Error::DegenerateCell { det });
        }
        Ok(Self(values))
    }

    /// Body-centred cubic: all six parameters equal to one.
    pub const fn bcc() -> Self {
        Self([1.0; 6])
    }

    /// Face-centred cubic, `(0, 1, 1, 1, 1, 0)`.
    pub const fn fcc() -> Self {
        Self([0.0, 1.0, 1.0, 1.0, 1.0, 0.0])
    }

    /// Simple cubic, `(1, 1, 1, 0, 0, 0)`.
    pub const fn sc() -> Self {
        Self([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
    }

    pub fn as_array(&self) -> &[f64; 6] {
        &self.0
    }

    pub fn to_array(self) -> [f64; 6] {
        self.0
    }

    pub fn a(&self) -> f64 {
        self.0[0]
    }
    pub fn b(&self) -> f64 {
        self.0[1]
    }
    pub fn c(&self) -> f64 {
        self.0[2]
    }
    pub fn d(&self) -> f64 {
        self.0[3]
    }
    pub fn e(&self) -> f64 {
        self.0[4]
    }
    pub fn f(&self) -> f64 {
        self.0[5]
    }

    /// `det A(ρ)` by the closed polynomial.
    pub fn det(&self) -> f64 {
        det_closed(&self.0)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_component(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// `t·ρ` for `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.0.map(|x| x * t))
    }

    /// Indices of the components that vanish, i.e. the stratum the point lies on.
    pub fn active_set(&self) -> Vec<usize> {
        let tol = ZERO_TOL * self.max_component();
        (0..6).filter(|&k| self.0[k].abs() <= tol).collect()
    }
}

impl TryFrom<[f64; 6]> for SellingParams {
    type Error = Error;

    fn try_from(values: [f64; 6]) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SellingParams> for [f64; 6] {
    fn from(p: SellingParams) -> Self {
        p.0
    }
}

impl std::ops::Index<usize> for SellingParams {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl fmt::Display for SellingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Parses `"a,b,c,d,e,f"`.
impl FromStr for SellingParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::Parse(format!(
                "expected 6 comma-separated values, got {}",
                parts.len()
            )));
        }
        let mut values = [0.0; 6];
        for (slot, part) in values.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("`{part}`: {e}")))?;
        }
        Self::new(values)
    }
}

fn trace_scale(rho: &[f64; 6]) -> f64 {
    // trace A = 2 Σρ
    2.0 * rho.iter().sum::<f64>() / 3.0
}

/// `det A(ρ)` as the 16-monomial symmetric polynomial. Accepts any input,
/// including points where the determinant vanishes.
pub fn det_closed(rho: &[f64; 6]) -> f64 {
    let [a, b, c, d, e, f] = *rho;
    a * b * c
        + a * b * e
        + a * b * f
        + a * c * d
        + a * c * f
        + a * d * e
        + a * d * f
        + a * e * f
        + b * c * d
        + b * c * e
        + b * d * e
        + b * d * f
        + b * e * f
        + c * d * e
        + c * d * f
        + c * e * f
}

/// Exact partial derivatives of [`det_closed`].
pub fn det_gradient(rho: &[f64; 6]) -> [f64; 6] {
    let [a, b, c, d, e, f] = *rho;
    [
        b * c + b * e + b * f + c * d + c * f + d * e + d * f + e * f,
        a * c + a * e + a * f + c * d + c * e + d * e + d * f + e * f,
        a * b + a * d + a * f + b * d + b * e + d * e + d * f + e * f,
        a * c + a * e + a * f + b * c + b * e + b * f + c * e + c * f,
        a * b + a * d + a * f + b * c + b * d + b * f + c * d + c * f,
        a * b + a * c + a * d + a * e + b * d + b * e + c * d + c * e,
    ]
}

/// Symmetric positive-definite Gram matrix `A(ρ)` with its Cholesky factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix {
    diag: [f64; 3],
    /// Off-diagonal entries at (1,2), (1,3), (2,3).
    off: [f64; 3],
    det: f64,
    cholesky_upper: [[f64; 3]; 3],
}

impl GramMatrix {
    /// Entry `(i, j)`, zero-based.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (k, l) if k == l => self.diag[k],
            (0, 1) => self.off[0],
            (0, 2) => self.off[1],
            (1, 2) => self.off[2],
            _ => panic!("GramMatrix index out of range"),
        }
    }

    pub fn to_array(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.entry(i, j);
            }
        }
        m
    }

    /// Determinant from the closed polynomial.
    pub fn det(&self) -> f64 {
        self.det
    }

    /// Upper-triangular `R` with positive diagonal and `RᵀR = A`.
    pub fn cholesky_upper(&self) -> &[[f64; 3]; 3] {
        &self.cholesky_upper
    }

    /// Leading principal minors of orders 1, 2, 3.
    pub fn leading_minors(&self) -> [f64; 3] {
        let m1 = self.diag[0];
        let m2 = self.diag[0] * self.diag[1] - self.off[0] * self.off[0];
        [m1, m2, det3(&self.to_array())]
    }
}

/// Builds `A(ρ)` and validates positive definiteness by leading minors.
pub fn gram_matrix(rho: &SellingParams) -> Result<GramMatrix> {
    let [a, b, c, d, e, f] = *rho.as_array();
    let diag = [a + d + e, b + d + f, c + e + f];
    let off = [-d, -e, -f];
    let mut g = GramMatrix {
        diag,
        off,
        det: det_closed(rho.as_array()),
        cholesky_upper: [[0.0; 3]; 3],
    };
    let s = (diag[0] + diag[1] + diag[2]) / 3.0;
    for (k, &minor) in g.leading_minors().iter().enumerate() {
        let order = k + 1;
        if !(minor > 1e-14 * s.powi(order as i32)) {
            return Err(Error::NotPositiveDefinite { order, value: minor });
        }
    }
    g.cholesky_upper = cholesky_upper(&g.to_array());
    Ok(g)
}

fn cholesky_upper(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        let s: f64 = (0..i).map(|k| r[k][i] * r[k][i]).sum();
        r[i][i] = (m[i][i] - s).sqrt();
        for j in i + 1..3 {
            let s: f64 = (0..i).map(|k| r[k][i] * r[k][j]).sum();
            r[i][j] = (m[i][j] - s) / r[i][i];
        }
    }
    r
}

/// Cofactor expansion of a 3×3 determinant.
pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of the assembled matrix by cofactor expansion; an independent
/// check on [`det_closed`].
pub fn det_direct(gram: &GramMatrix) -> f64 {
    det3(&gram.to_array())
}

/// An element of `S4`, stored as the images of `0, 1, 2, 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: [u8; 4],
}

impl Permutation {
    pub fn new(images: [u8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i as usize] = true;
        }
        Ok(Self { images })
    }

    pub const fn identity() -> Self {
        Self { images: [0, 1, 2, 3] }
    }

    pub fn images(&self) -> [u8; 4] {
        self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// All 24 permutations in lexicographic order of their images.
    pub fn all() -> impl Iterator<Item = Permutation> {
        S4_TABLE.iter().map(|(p, _)| *p)
    }

    /// Storage map of the induced edge action: `(σ·ρ)[k] = ρ[edge_map()[k]]`.
    pub fn edge_map(&self) -> [usize; 6] {
        S4_TABLE[self.rank()].1
    }

    /// Lexicographic rank in `0..24` (Lehmer code).
    fn rank(&self) -> usize {
        let mut rank = 0;
        for i in 0..4 {
            let smaller_later = (i + 1..4)
                .filter(|&j| self.images[j] < self.images[i])
                .count();
            rank = rank * (4 - i) + smaller_later;
        }
        rank
    }
}

static S4_TABLE: LazyLock<Vec<(Permutation, [usize; 6])>> = LazyLock::new(|| {
    let mut table = Vec::with_capacity(24);
    for i0 in 0..4u8 {
        for i1 in 0..4u8 {
            for i2 in 0..4u8 {
                for i3 in 0..4u8 {
                    if let Ok(p) = Permutation::new([i0, i1, i2, i3]) {
                        let map = EDGES.map(|(i, j)| edge_index(p.apply(i), p.apply(j)));
                        table.push((p, map));
                    }
                }
            }
        }
    }
    table
});

/// Applies `σ` to a raw component vector: the entry on edge `{i, j}` of the
/// result is the input entry on edge `{σ(i), σ(j)}`.
pub fn permute_edges<T: Copy>(sigma: &Permutation, values: &[T; 6]) -> [T; 6] {
    let map = sigma.edge_map();
    map.map(|k| values[k])
}

/// `σ·ρ`. Determinant and `F` are invariant under this action.
pub fn s4_apply(sigma: &Permutation, rho: &SellingParams) -> SellingParams {
    SellingParams(permute_edges(sigma, rho.as_array()))
}

/// Lexicographically smallest element of the `S4` orbit of a component vector.
pub fn canonical_array(values: &[f64; 6]) -> [f64; 6] {
    Permutation::all()
        .map(|p| permute_edges(&p, values))
        .min_by(|x, y| {
            x.iter()
                .zip(y)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("S4 is non-empty")
}

/// Lexicographically smallest element of the 24-element orbit of `ρ`.
pub fn canonical_representative(rho: &SellingParams) -> SellingParams {
    SellingParams(canonical_array(rho.as_array()))
}
