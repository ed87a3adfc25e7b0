//! Finite-difference gradients and Hessians.
//!
//! Components closer to zero than their step use second-order forward
//! stencils so that no stencil point leaves the non-negative cone.

use crate::error::{Error, Result};
use crate::quotient::f_closed;
use crate::selling::SellingParams;

/// Base steps; the step for component `i` is `base · max(1, |x_i|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub h_grad: f64,
    pub h_hess: f64,
}

impl Default for DiffConfig {
    fn default() -> Self {
        // ~eps^(1/3) and ~eps^(1/4)
        Self {
            h_grad: 6e-6,
            h_hess: 1.2e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stencil {
    Central,
    Forward,
}

impl Stencil {
    fn choose(x: f64, h: f64) -> Self {
        if x < h {
            Stencil::Forward
        } else {
            Stencil::Central
        }
    }

    /// First-derivative nodes (multiples of h) and weights.
    fn first(self) -> &'static [(f64, f64)] {
        match self {
            Stencil::Central => &[(-1.0, -0.5), (1.0, 0.5)],
            Stencil::Forward => &[(0.0, -1.5), (1.0, 2.0), (2.0, -0.5)],
        }
    }

    /// Second-derivative nodes and weights.
    fn second(self) -> &'static [(f64, f64)] {
        match self {
            Stencil::Central => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
            Stencil::Forward => &[(0.0, 2.0), (1.0, -5.0), (2.0, 4.0), (3.0, -1.0)],
        }
    }
}

fn steps<const N: usize>(x: &[f64; N], base: f64) -> [f64; N] {
    x.map(|xi| base * xi.abs().max(1.0))
}

/// True when component `i` is differentiated one-sidedly at this step size.
pub fn is_one_sided(x: f64, base: f64) -> bool {
    Stencil::choose(x, base * x.abs().max(1.0)) == Stencil::Forward
}

/// Gradient of an arbitrary function on `R^N_{≥0}`.
pub fn gradient_with<const N: usize, F>(f: F, x: &[f64; N], base: f64) -> Result<[f64; N]>
where
    F: Fn(&[f64; N]) -> Result<f64>,
{
    let h = steps(x, base);
    let mut g = [0.0; N];
    for i in 0..N {
        let stencil = Stencil::choose(x[i], h[i]);
        let mut acc = 0.0;
        for &(node, w) in stencil.first() {
            let mut p = *x;
            p[i] += node * h[i];
            acc += w * f(&p)?;
        }
        g[i] = acc / h[i];
    }
    Ok(g)
}

/// Symmetrised Hessian of an arbitrary function on `R^N_{≥0}`.
pub fn hessian_with<const N: usize, F>(f: F, x: &[f64; N], base: f64) -> Result<[[f64; N]; N]>
where
    F: Fn(&[f64; N]) -> Result<f64>,
{
    let h = steps(x, base);
    let stencils: [Stencil; N] = std::array::from_fn(|i| Stencil::choose(x[i], h[i]));
    let mut m = [[0.0; N]; N];
    for i in 0..N {
        let mut acc = 0.0;
        for &(node, w) in stencils[i].second() {
            let mut p = *x;
            p[i] += node * h[i];
            acc += w * f(&p)?;
        }
        m[i][i] = acc / (h[i] * h[i]);

        for j in i + 1..N {
            let mut acc = 0.0;
            for &(ni, wi) in stencils[i].first() {
                for &(nj, wj) in stencils[j].first() {
                    let mut p = *x;
                    p[i] += ni * h[i];
                    p[j] += nj * h[j];
                    acc += wi * wj * f(&p)?;
                }
            }
            m[i][j] = acc / (h[i] * h[j]);
        }
    }
    for i in 0..N {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    Ok(m)
}

fn f_at(p: &[f64; 6]) -> Result<f64> {
    SellingParams::new(*p)
        .map(|s| f_closed(&s))
        .map_err(|_| Error::DegenerateStencil { point: *p })
}

/// `∇F(ρ)` by finite differences.
pub fn gradient_fd(rho: &SellingParams, config: &DiffConfig) -> Result<[f64; 6]> {
    gradient_with(f_at, rho.as_array(), config.h_grad)
}

/// `∇²F(ρ)` by finite differences, symmetrised.
pub fn hessian_fd(rho: &SellingParams, config: &DiffConfig) -> Result<[[f64; 6]; 6]> {
    hessian_with(f_at, rho.as_array(), config.h_hess)
}
