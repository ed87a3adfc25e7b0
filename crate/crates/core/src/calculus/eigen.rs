//! Cyclic Jacobi eigensolver for small symmetric matrices.

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order; `vectors[k]` is the unit eigenvector of
/// `values[k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[f64; N]; N],
}

/// Diagonalises a symmetric matrix by cyclic Jacobi rotations until every
/// off-diagonal entry is at most `1e-13 · ‖M‖_F`.
pub fn symmetric_eigen<const N: usize>(m: &[[f64; N]; N]) -> Result<Eigen<N>> {
    let mut a = *m;
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let frob = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-13 * frob;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].abs())
            .fold(0.0, f64::max);
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    Ok(Eigen {
        values: order.map(|i| a[i][i]),
        vectors: order.map(|i| std::array::from_fn(|k| v[k][i])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn identity() {
        let mut m = [[0.0; 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        assert_eq!(symmetric_eigen(&m).unwrap().values, [1.0; 6]);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(symmetric_eigen(&[[0.0; 3]; 3]).unwrap().values, [0.0; 3]);
    }

    #[test]
    fn two_by_two() {
        let e = symmetric_eigen(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        assert_relative_eq!(e.values[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(e.values[1], 3.0, epsilon = 1e-15);
        let v = e.vectors[1];
        assert_relative_eq!(v[0].abs(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(v[0], v[1], epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn matches_nalgebra(entries in proptest::array::uniform21(-5f64..5.0)) {
            let mut m = [[0.0; 6]; 6];
            let mut k = 0;
            for i in 0..6 {
                for j in i..6 {
                    m[i][j] = entries[k];
                    m[j][i] = entries[k];
                    k += 1;
                }
            }
            let e = symmetric_eigen(&m).unwrap();
            let nm = nalgebra::Matrix6::from_fn(|i, j| m[i][j]);
            let mut reference: Vec<f64> = nm.symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            for (x, y) in e.values.iter().zip(&reference) {
                prop_assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()));
            }
            // M v = λ v and orthonormality
            for a in 0..6 {
                let v = e.vectors[a];
                for i in 0..6 {
                    let mv: f64 = (0..6).map(|j| m[i][j] * v[j]).sum();
                    prop_assert!((mv - e.values[a] * v[i]).abs() <= 1e-10 * 20.0);
                }
                for b in 0..6 {
                    let d: f64 = (0..6).map(|i| v[i] * e.vectors[b][i]).sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    prop_assert!((d - expect).abs() <= 1e-12);
                }
            }
        }
    }
}
