//! Exact values at the BCC, FCC and SC points.

use serde::{Deserialize, Serialize};

/// Closed-form constants for the three reference lattices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceConstants {
    pub f_bcc: f64,
    pub f_fcc: f64,
    pub f_sc: f64,
    /// `(α, β, δ)`; the BCC Hessian is `2^(2/3)/768` times the pattern with
    /// `α` on the diagonal, `δ` on antipodal edge pairs and `β` elsewhere.
    pub bcc_hessian_entries: (f64, f64, f64),
    pub bcc_hessian_prefactor: f64,
    pub bcc_spectrum: [f64; 6],
    pub fcc_spectrum: [f64; 6],
    /// Value of `∂F/∂d = ∂F/∂e = ∂F/∂f` at SC: `-4 + 2√2`.
    pub sc_gradient_value: f64,
    pub fcc_negative_direction: [f64; 6],
}

impl ReferenceConstants {
    pub fn exact() -> Self {
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let c23 = 2f64.powf(2.0 / 3.0);
        let c56 = 2f64.powf(5.0 / 6.0);
        let bcc_small = c23 * (25.0 - 12.0 * s3) / 128.0;
        let bcc_large = c23 * (-3.0 + 4.0 * s3) / 32.0;
        let fcc_mid = 3.0 / 16.0 * c56;
        Self {
            f_bcc: 3.0 * (1.0 + 2.0 * s3) / 4f64.powf(2.0 / 3.0),
            f_fcc: 3.0 * c56,
            f_sc: 6.0,
            bcc_hessian_entries: (14.0 + 24.0 * s3, -25.0 + 12.0 * s3, 86.0 - 72.0 * s3),
            bcc_hessian_prefactor: c23 / 768.0,
            bcc_spectrum: [0.0, bcc_small, bcc_small, bcc_large, bcc_large, bcc_large],
            fcc_spectrum: [
                -c56 / 48.0 * (41.0 - 24.0 * s2),
                0.0,
                fcc_mid,
                fcc_mid,
                fcc_mid,
                c56 / 48.0 * (69.0 - 24.0 * s2),
            ],
            sc_gradient_value: -4.0 + 2.0 * s2,
            fcc_negative_direction: [1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        }
    }

    pub fn bcc_hessian(&self) -> [[f64; 6]; 6] {
        let (alpha, beta, delta) = self.bcc_hessian_entries;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let raw = if i == j {
                    alpha
                } else if i + j == 5 {
                    delta
                } else {
                    beta
                };
                raw * self.bcc_hessian_prefactor
            })
        })
    }

    pub fn fcc_hessian(&self) -> [[f64; 6]; 6] {
        let s2 = 2f64.sqrt();
        let pre = 2f64.powf(5.0 / 6.0) / 192.0;
        let mut m = [[0.0; 6]; 6];
        m[0][0] = 56.0;
        m[5][5] = 56.0;
        m[0][5] = 96.0 * s2 - 220.0;
        m[5][0] = m[0][5];
        for i in 1..5 {
            for j in 1..5 {
                m[i][j] = if i == j { 27.0 } else { -9.0 };
            }
        }
        m.map(|row| row.map(|x| x * pre))
    }
}
