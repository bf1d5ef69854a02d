//! Spectra, empirical spectral distributions and the perturbation
//! inequalities used to pass from centred to general entry laws.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::symmetric_eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// Sorted eigenvalues of a symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigs: Vec<f64>,
}

impl Spectrum {
    /// Wraps raw eigenvalues, sorting them ascending.
    pub fn new(mut eigs: Vec<f64>) -> Result<Self> {
        if eigs.iter().any(|x| !x.is_finite()) {
            return Err(Error::arg("spectrum contains non-finite values"));
        }
        eigs.sort_by(|a, b| a.total_cmp(b));
        Ok(Spectrum { eigs })
    }

    pub fn eigs(&self) -> &[f64] {
        &self.eigs
    }

    pub fn order(&self) -> usize {
        self.eigs.len()
    }

    pub fn min(&self) -> Option<f64> {
        self.eigs.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigs.last().copied()
    }

    /// One `eigenvalue` column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["eigenvalue"])?;
        for x in &self.eigs {
            w.write_record([format!("{x:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn eigenvalues_sym(m: &SymmetricMatrix) -> Result<Spectrum> {
    Ok(Spectrum {
        eigs: symmetric_eigenvalues(m)?,
    })
}

/// Right-continuous step function with mass `1/n` at every eigenvalue.
#[derive(Clone, Debug)]
pub struct EmpiricalCdf {
    points: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `#{lambda <= x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.partition_point(|&p| p <= x) as f64 / self.points.len() as f64
    }

    /// Left limit `#{lambda < x} / n`.
    pub fn eval_left(&self, x: f64) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.partition_point(|&p| p < x) as f64 / self.points.len() as f64
    }
}

pub fn esd(s: &Spectrum) -> EmpiricalCdf {
    EmpiricalCdf {
        points: s.eigs.clone(),
    }
}

/// `n^{-1} sum lambda_j^k`.
pub fn empirical_moment(s: &Spectrum, k: u32) -> f64 {
    if s.eigs.is_empty() {
        return 0.0;
    }
    let k = k as i32;
    s.eigs.iter().map(|x| x.powi(k)).sum::<f64>() / s.eigs.len() as f64
}

/// `n^{-1} sum (lambda_j - z)^{-1}` for `Im z > 0`.
pub fn stieltjes_empirical(s: &Spectrum, z: Complex64) -> Result<Complex64> {
    require_upper_half_plane(z)?;
    let n = s.eigs.len() as f64;
    let sum: Complex64 = s.eigs.iter().map(|&x| (Complex64::new(x, 0.0) - z).inv()).sum();
    Ok(sum / n)
}

pub(crate) fn require_upper_half_plane(z: Complex64) -> Result<()> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("Im z must be positive, got z = {z}")))
    }
}

/// Sup distance between the ESD and a continuous CDF `g`.
///
/// Evaluated at every jump point using both one-sided values of the step
/// function, which is exact when `g` is continuous.
pub fn ks_distance(f: &EmpiricalCdf, g: impl Fn(f64) -> f64) -> f64 {
    let pts = &f.points;
    let n = pts.len() as f64;
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < pts.len() {
        let x = pts[i];
        let mut j = i;
        while j < pts.len() && pts[j] == x {
            j += 1;
        }
        let gx = g(x);
        best = best.max((i as f64 / n - gx).abs()).max((j as f64 / n - gx).abs());
        i = j;
    }
    best
}

/// Sup norm of the difference of two ESDs, evaluated on the merged jump set.
pub fn esd_sup_distance(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    let (xa, xb) = (&a.eigs, &b.eigs);
    let n = xa.len() as f64;
    let (mut i, mut j) = (0usize, 0usize);
    let mut best: f64 = 0.0;
    // Between consecutive merged points both step functions are constant, so
    // checking the right-continuous value at each point covers every left
    // limit as well.
    while i < xa.len() || j < xb.len() {
        let x = match (xa.get(i), xb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 - j as f64).abs() / n);
    }
    Ok(best)
}

/// Number of singular values above `1e-10 * n * max|entry|`.
pub fn numeric_rank(m: &SymmetricMatrix) -> Result<usize> {
    let cutoff = 1e-10 * m.order() as f64 * m.max_abs();
    if m.max_abs() == 0.0 {
        return Ok(0);
    }
    Ok(singular_values(m)?.iter().filter(|&&s| s > cutoff).count())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `||F_U - F_V|| <= rank(U - V) / n`.
pub fn check_rank_inequality(u: &SymmetricMatrix, v: &SymmetricMatrix) -> Result<InequalityCheck> {
    let diff = u.sub(v)?;
    let lhs = esd_sup_distance(&eigenvalues_sym(u)?, &eigenvalues_sym(v)?)?;
    let rhs = numeric_rank(&diff)? as f64 / u.order() as f64;
    Ok(InequalityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// `|S_A(z) - S_{A+D}(z)| <= Im(z)^{-2} ||D||_1` with the induced 1-norm.
pub fn check_stieltjes_perturbation(
    a: &SymmetricMatrix,
    d: &SymmetricMatrix,
    z: Complex64,
) -> Result<InequalityCheck> {
    require_upper_half_plane(z)?;
    let perturbed = a.add(d)?;
    let s0 = stieltjes_empirical(&eigenvalues_sym(a)?, z)?;
    let s1 = stieltjes_empirical(&eigenvalues_sym(&perturbed)?, z)?;
    let lhs = (s0 - s1).norm();
    let rhs = d.norm_one() / (z.im * z.im);
    Ok(InequalityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// Singular values, nonincreasing. For symmetric input these are `|lambda|`.
pub fn singular_values(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let mut s: Vec<f64> = symmetric_eigenvalues(m)?.into_iter().map(f64::abs).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}
