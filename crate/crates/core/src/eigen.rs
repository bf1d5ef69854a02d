//! Eigenvalues of dense real symmetric matrices.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration with Wilkinson-style shifts. Only the upper triangle is touched
//! during the reduction, and the rank-two update of one step is fused with
//! the matrix-vector product of the next, so each trailing row is streamed
//! through once per step.

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// QL sweeps allowed per eigenvalue before reporting failure.
pub const MAX_SWEEPS: usize = 60;

/// All eigenvalues, ascending.
pub fn symmetric_eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = m.order();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(m);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Reduces `m` to a symmetric tridiagonal matrix with the same spectrum.
///
/// Returns the diagonal `d` (length n) and the off-diagonal `e` of length n
/// whose last entry is zero.
pub fn tridiagonalize(m: &SymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.order();
    let mut a = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 1 {
        d[0] = a[0];
        return (d, e);
    }

    // Pending rank-two update (v, w) on the trailing block starting at `start`:
    // A <- A - v w^T - w v^T.
    let mut pending: Option<(usize, Vec<f64>, Vec<f64>)> = None;

    for k in 0..n - 2 {
        if let Some((start, v, w)) = &pending {
            apply_row(&mut a, n, k, *start, v, w);
        }
        d[k] = a[k * n + k];

        let x = &a[k * n + k + 1..(k + 1) * n];
        let x0 = x[0];
        let norm_sq: f64 = x.iter().map(|t| t * t).sum();
        let norm = norm_sq.sqrt();
        let reflector = if norm == 0.0 {
            None
        } else {
            let alpha = if x0 >= 0.0 { -norm } else { norm };
            let vtv = 2.0 * (norm_sq + x0.abs() * norm);
            if vtv == 0.0 {
                None
            } else {
                let mut v = x.to_vec();
                v[0] -= alpha;
                Some((alpha, v, 2.0 / vtv))
            }
        };

        let mlen = n - k - 1;
        let mut p = vec![0.0; mlen];
        for r in 0..mlen {
            let i = k + 1 + r;
            if let Some((start, v, w)) = &pending {
                apply_row(&mut a, n, i, *start, v, w);
            }
            if let Some((_, v, _)) = &reflector {
                let row = &a[i * n + i..(i + 1) * n];
                let vr = v[r];
                let tail = &v[r..];
                let mut acc = row[0] * vr;
                for ((pc, &u), &vc) in p[r + 1..].iter_mut().zip(&row[1..]).zip(&tail[1..]) {
                    acc += u * vc;
                    *pc += u * vr;
                }
                p[r] += acc;
            }
        }

        match reflector {
            Some((alpha, v, tau)) => {
                e[k] = alpha;
                for pc in p.iter_mut() {
                    *pc *= tau;
                }
                let ptv: f64 = p.iter().zip(&v).map(|(a, b)| a * b).sum();
                let half = 0.5 * tau * ptv;
                let w: Vec<f64> = p.iter().zip(&v).map(|(pc, vc)| pc - half * vc).collect();
                pending = Some((k + 1, v, w));
            }
            None => {
                e[k] = x0;
                pending = None;
            }
        }
    }

    // The pending update already reached rows n-2 and n-1 inside the last
    // fused pass, except for the one produced by that pass itself.
    if let Some((start, v, w)) = &pending {
        apply_row(&mut a, n, n - 2, *start, v, w);
        apply_row(&mut a, n, n - 1, *start, v, w);
    }
    d[n - 2] = a[(n - 2) * n + n - 2];
    e[n - 2] = a[(n - 2) * n + n - 1];
    d[n - 1] = a[(n - 1) * n + n - 1];
    e[n - 1] = 0.0;
    (d, e)
}

/// Applies `A <- A - v w^T - w v^T` to the upper part of row `i`.
#[inline]
fn apply_row(a: &mut [f64], n: usize, i: usize, start: usize, v: &[f64], w: &[f64]) {
    let r = i - start;
    let (vr, wr) = (v[r], w[r]);
    let row = &mut a[i * n + i..(i + 1) * n];
    for ((x, &vc), &wc) in row.iter_mut().zip(&v[r..]).zip(&w[r..]) {
        *x -= vr * wc + wr * vc;
    }
}

/// Implicit QL on a symmetric tridiagonal matrix; `d` is overwritten with the
/// eigenvalues (unsorted). `e[i]` couples `i` and `i + 1`.
pub fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    // Off-diagonals below eps * ||T|| are dropped even next to tiny diagonal
    // entries; large null spaces otherwise never deflate.
    let tnorm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd.max(tnorm) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: MAX_SWEEPS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
