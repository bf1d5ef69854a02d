use serde::Serialize;

use super::MomentSequence;
use crate::eigen::symmetric_eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// Minimum eigenvalue above which a Hankel matrix counts as PSD.
pub const PSD_TOLERANCE: f64 = -1e-10;

/// `Delta_k(i, j) = gamma_{i+j}` for `0 <= i, j <= k`.
pub fn hankel_matrix(g: &MomentSequence, k: usize) -> Result<SymmetricMatrix> {
    if g.values.len() < 2 * k + 1 {
        return Err(Error::arg(format!(
            "Hankel matrix of order {} needs moments up to {}, have {}",
            k + 1,
            2 * k,
            g.max_k()
        )));
    }
    Ok(SymmetricMatrix::from_upper_fn(k + 1, |i, j| g.values[i + j]))
}

#[derive(Clone, Debug, Serialize)]
pub struct HankelReport {
    pub k: usize,
    /// `det Delta_0, .., det Delta_k` (leading principal minors).
    pub leading_minors: Vec<f64>,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

pub fn hankel_report(g: &MomentSequence, k: usize) -> Result<HankelReport> {
    let h = hankel_matrix(g, k)?;
    let leading_minors = (0..=k).map(|r| determinant(&h, r + 1)).collect();
    let min_eigenvalue = symmetric_eigenvalues(&h)?[0];
    Ok(HankelReport {
        k,
        leading_minors,
        min_eigenvalue,
        psd: min_eigenvalue >= PSD_TOLERANCE,
    })
}

/// Determinant of the leading `size x size` block by partial pivoting.
fn determinant(m: &SymmetricMatrix, size: usize) -> f64 {
    let mut a: Vec<Vec<f64>> = (0..size).map(|i| m.row(i)[..size].to_vec()).collect();
    let mut det = 1.0;
    for c in 0..size {
        let pivot = (c..size)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        if a[pivot][c] == 0.0 {
            return 0.0;
        }
        if pivot != c {
            a.swap(pivot, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..size {
            let factor = a[r][c] / a[c][c];
            for col in c..size {
                a[r][col] -= factor * a[c][col];
            }
        }
    }
    det
}
