//! Two-value Selling patterns and their `S4` orbit classes, the reduction of
//! the opposite orbit to one variable `u = p/q`, and the restricted
//! functionals on the rhombic-dodecahedron (`a = f = 0`) and box
//! (`d = e = f = 0`) strata.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::quotient::f_closed;
use crate::selling::{canonical_array, SellingParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassName {
    /// one edge carries `p`
    C,
    /// two disjoint edges
    O,
    /// two adjacent edges
    A,
    /// three edges at a common vertex
    S,
    /// three edges of a triangle
    T,
    /// three edges of a path
    P,
}

impl ClassName {
    pub const ALL: [ClassName; 6] = [
        ClassName::C,
        ClassName::O,
        ClassName::A,
        ClassName::S,
        ClassName::T,
        ClassName::P,
    ];

    /// Representative mask, `true` on the edges that carry `p`.
    pub fn representative(self) -> [bool; 6] {
        let m = |bits: [u8; 6]| bits.map(|b| b == 1);
        match self {
            ClassName::C => m([1, 0, 0, 0, 0, 0]),
            ClassName::O => m([1, 0, 0, 0, 0, 1]),
            ClassName::A => m([1, 1, 0, 0, 0, 0]),
            ClassName::S => m([1, 1, 1, 0, 0, 0]),
            ClassName::T => m([1, 1, 0, 1, 0, 0]),
            ClassName::P => m([1, 0, 0, 1, 0, 1]),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::C => "C",
            ClassName::O => "O",
            ClassName::A => "A",
            ClassName::S => "S",
            ClassName::T => "T",
            ClassName::P => "P",
        }
    }
}

impl std::str::FromStr for ClassName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassName::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown orbit class `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub name: ClassName,
    /// Number of `p`-edges.
    pub weight: usize,
    pub representative: [bool; 6],
    pub orbit_size: usize,
    /// Every mask in the orbit.
    pub members: Vec<[bool; 6]>,
}

fn mask_key(mask: &[bool; 6]) -> [u64; 6] {
    // canonical form of the 0/1 vector; lexicographic minimum, so compare as integers
    canonical_array(&mask.map(|b| if b { 1.0 } else { 0.0 })).map(|x| x as u64)
}

/// Enumerates all masks of weight 1, 2, 3 and groups them into `S4` orbits.
pub fn enumerate_two_value_orbits() -> Vec<OrbitClass> {
    let mut groups: BTreeMap<(usize, [u64; 6]), Vec<[bool; 6]>> = BTreeMap::new();
    for bits in 0u8..64 {
        let weight = bits.count_ones() as usize;
        if !(1..=3).contains(&weight) {
            continue;
        }
        let mask: [bool; 6] = std::array::from_fn(|k| bits & (1 << (5 - k)) != 0);
        groups.entry((weight, mask_key(&mask))).or_default().push(mask);
    }

    let mut classes: Vec<OrbitClass> = groups
        .into_iter()
        .map(|((weight, key), members)| {
            let name = ClassName::ALL
                .into_iter()
                .find(|c| mask_key(&c.representative()) == key)
                .expect("every two-value orbit has a named representative");
            OrbitClass {
                name,
                weight,
                representative: name.representative(),
                orbit_size: members.len(),
                members,
            }
        })
        .collect();
    classes.sort_by_key(|c| c.name);
    classes
}

/// The pattern with `p` on the class's `p`-edges and `q` elsewhere.
pub fn family_params(class: ClassName, p: f64, q: f64) -> Result<SellingParams> {
    SellingParams::new(class.representative().map(|on| if on { p } else { q }))
}

/// `F` on the class representative.
pub fn family_f(class: ClassName, p: f64, q: f64) -> Result<f64> {
    family_params(class, p, q).map(|rho| f_closed(&rho))
}

/// `H(u) = u² + √2 √(1+u) + 2(1+2u) √(u+2)`.
pub fn h(u: f64) -> f64 {
    u * u + std::f64::consts::SQRT_2 * (1.0 + u).sqrt() + 2.0 * (1.0 + 2.0 * u) * (u + 2.0).sqrt()
}

pub fn h1(u: f64) -> f64 {
    2.0 * u + std::f64::consts::SQRT_2 / (2.0 * (1.0 + u).sqrt()) + (9.0 + 6.0 * u) / (u + 2.0).sqrt()
}

pub fn h2(u: f64) -> f64 {
    2.0 - std::f64::consts::SQRT_2 / (4.0 * (1.0 + u).powf(1.5))
        + 3.0 * (2.0 * u + 5.0) / (2.0 * (u + 2.0).powf(1.5))
}

pub fn h3(u: f64) -> f64 {
    3.0 * std::f64::consts::SQRT_2 / (8.0 * (1.0 + u).powf(2.5))
        - 3.0 * (2.0 * u + 7.0) / (4.0 * (u + 2.0).powf(2.5))
}

/// `ψ(u) = 3(1+u) H'(u) − 5 H(u)`; `F̃'` has the sign of `ψ`.
pub fn psi(u: f64) -> f64 {
    3.0 * (1.0 + u) * h1(u) - 5.0 * h(u)
}

/// `ψ'(u) = 3(1+u) H''(u) − 2 H'(u)`.
pub fn psi1(u: f64) -> f64 {
    3.0 * (1.0 + u) * h2(u) - 2.0 * h1(u)
}

/// `ψ''(u) = 2 + 7√2 / (8 (u+1)^(3/2)) − ¾ (2u² + 9u + 1) / (u+2)^(5/2)`.
pub fn psi2(u: f64) -> f64 {
    2.0 + 7.0 * std::f64::consts::SQRT_2 / (8.0 * (u + 1.0).powf(1.5))
        - 0.75 * (2.0 * u * u + 9.0 * u + 1.0) / (u + 2.0).powf(2.5)
}

/// Lower bound `2 − 15 / (8√2)` on `ψ''` over `u ≥ 0`.
pub fn psi2_lower_bound() -> f64 {
    2.0 - 15.0 / (8.0 * std::f64::consts::SQRT_2)
}

/// `F̃(u) = 2^(1/3) H(u) / (1+u)^(5/3) = F(u, 1, 1, 1, 1, u)`.
pub fn tilde_f(u: f64) -> f64 {
    2f64.cbrt() * h(u) / (1.0 + u).powf(5.0 / 3.0)
}

/// `F̃'(u) = (2^(1/3)/3) ψ(u) (1+u)^(-8/3)`.
pub fn tilde_f_prime(u: f64) -> f64 {
    2f64.cbrt() / 3.0 * psi(u) * (1.0 + u).powf(-8.0 / 3.0)
}

/// Grid for the opposite-orbit scan, `u ∈ [0, u_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub u_max: f64,
    pub step: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            u_max: 50.0,
            step: 1e-3,
        }
    }
}

impl ScanGrid {
    pub fn samples(&self) -> Vec<f64> {
        let n = (self.u_max / self.step).round() as usize;
        (0..=n).map(|k| k as f64 * self.u_max / n as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub samples: usize,
    pub u_max: f64,
    pub step: f64,
    pub psi_at_0: f64,
    pub psi_at_1: f64,
    /// Recorded only; positive in practice.
    pub psi_prime_at_1: f64,
    pub min_psi2: f64,
    pub psi2_bound: f64,
    pub argmin_u: f64,
    pub min_tilde_f: f64,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    u: f64,
    psi: f64,
    psi2: f64,
    tilde_f: f64,
}

/// Checks on a grid that `F̃` decreases on `(0, 1)` and increases on
/// `(1, u_max]`: the sign of `ψ`, the lower bound on `ψ''`, the location of
/// the minimum of `F̃`, and agreement between the sign of a finite-difference
/// derivative of `F̃` and the sign of `ψ`.
pub fn verify_opposite_monotonicity(grid: &ScanGrid) -> Result<MonotonicityReport> {
    if !(grid.step > 0.0 && grid.step <= 1e-3) || !(grid.u_max > 1.0) {
        return Err(Error::Domain(format!(
            "scan grid needs 0 < step ≤ 1e-3 and u_max > 1, got step {} u_max {}",
            grid.step, grid.u_max
        )));
    }
    let us = grid.samples();
    let samples: Vec<Sample> = us
        .par_iter()
        .map(|&u| Sample {
            u,
            psi: psi(u),
            psi2: psi2(u),
            tilde_f: tilde_f(u),
        })
        .collect();

    let half = grid.step / 2.0;
    let bound = psi2_lower_bound();
    let mut min_psi2 = f64::INFINITY;
    let mut best = samples[0];
    for s in &samples {
        let at_one = (s.u - 1.0).abs() < half;
        if s.u > 0.0 && s.u < 1.0 && !at_one && !(s.psi < 0.0) {
            return Err(Error::AssertionFailure { check: "psi < 0 on (0,1)", u: s.u });
        }
        if s.u > 1.0 && !at_one && !(s.psi > 0.0) {
            return Err(Error::AssertionFailure { check: "psi > 0 on (1,u_max]", u: s.u });
        }
        if !(s.psi2 >= bound) {
            return Err(Error::AssertionFailure { check: "psi'' lower bound", u: s.u });
        }
        min_psi2 = min_psi2.min(s.psi2);
        if s.tilde_f < best.tilde_f {
            best = *s;
        }
    }
    let nearest_one = samples
        .iter()
        .min_by(|x, y| (x.u - 1.0).abs().total_cmp(&(y.u - 1.0).abs()))
        .expect("non-empty grid");
    if best.u != nearest_one.u {
        return Err(Error::AssertionFailure { check: "argmin of tilde F at u = 1", u: best.u });
    }

    // sign of a central difference of F̃ against the sign of ψ
    let h = 1e-6;
    let mismatch = samples.par_iter().find_first(|s| {
        if s.u <= 0.0 || s.u >= grid.u_max || (s.u - 1.0).abs() < half {
            return false;
        }
        let fd = (tilde_f(s.u + h) - tilde_f(s.u - h)) / (2.0 * h);
        fd.signum() != s.psi.signum()
    });
    if let Some(s) = mismatch {
        return Err(Error::AssertionFailure { check: "sign F~' = sign psi", u: s.u });
    }

    Ok(MonotonicityReport {
        samples: samples.len(),
        u_max: grid.u_max,
        step: grid.step,
        psi_at_0: psi(0.0),
        psi_at_1: psi(1.0),
        psi_prime_at_1: psi1(1.0),
        min_psi2,
        psi2_bound: bound,
        argmin_u: best.u,
        min_tilde_f: best.tilde_f,
    })
}

/// CSV scan of a class along `p = u, q = 1`.
///
/// Header `u,H,psi,tildeF,F_check`, 12 significant digits. `H`, `psi` and
/// `tildeF` belong to the opposite orbit and are left empty for other
/// classes; `F_check` is empty where the pattern is degenerate.
pub fn scan_csv(class: ClassName, u_min: f64, u_max: f64, steps: usize) -> Result<String> {
    if !(u_min >= 0.0) || !(u_max > u_min) || steps == 0 {
        return Err(Error::Domain(format!(
            "need 0 ≤ u_min < u_max and steps ≥ 1, got {u_min}, {u_max}, {steps}"
        )));
    }
    let rows: Vec<String> = (0..=steps)
        .into_par_iter()
        .map(|k| {
            let u = u_min + (u_max - u_min) * k as f64 / steps as f64;
            let check = family_f(class, u, 1.0).map(|f| format_sig(f, 12)).unwrap_or_default();
            if class == ClassName::O {
                format!(
                    "{},{},{},{},{}",
                    format_sig(u, 12),
                    format_sig(h(u), 12),
                    format_sig(psi(u), 12),
                    format_sig(tilde_f(u), 12),
                    check
                )
            } else {
                format!("{},,,,{}", format_sig(u, 12), check)
            }
        })
        .collect();
    let mut out = String::from("u,H,psi,tildeF,F_check\n");
    for r in rows {
        let _ = writeln!(out, "{r}");
    }
    Ok(out)
}

/// `F(0, b, c, d, e, 0)`: the rhombic-dodecahedron stratum.
pub fn f_rd(b: f64, c: f64, d: f64, e: f64) -> Result<f64> {
    SellingParams::new([0.0, b, c, d, e, 0.0]).map(|rho| f_closed(&rho))
}

/// Exact Hessian of [`f_rd`] at `(1, 1, 1, 1)`: `(3·2^(5/6)/64)(4I − J)`.
pub fn rd_hessian_at_ones() -> [[f64; 4]; 4] {
    let pre = 3.0 * 2f64.powf(5.0 / 6.0) / 64.0;
    std::array::from_fn(|i| std::array::from_fn(|j| pre * if i == j { 3.0 } else { -1.0 }))
}

/// `F(a, b, c, 0, 0, 0) = 2(√a·bc + a√b·c + ab√c) / (abc)^(5/6)`.
pub fn f_box(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::Domain(format!("box edges must be positive, got ({a}, {b}, {c})")));
    }
    let num = a.sqrt() * b * c + a * b.sqrt() * c + a * b * c.sqrt();
    Ok(2.0 * num / (a * b * c).powf(5.0 / 6.0))
}

/// Exact Hessian of [`f_box`] at `(1, 1, 1)`: `(1/6)(3I − J)`.
pub fn box_hessian_at_ones() -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 2.0 / 6.0 } else { -1.0 / 6.0 }))
}
