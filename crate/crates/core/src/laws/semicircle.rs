use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::require_upper_half_plane;

/// Semicircle law on `[-R, R]` with density `2/(pi R^2) sqrt(R^2 - x^2)`.
///
/// Its variance is `R^2 / 4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemicircleLaw {
    radius: f64,
}

impl SemicircleLaw {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::arg(format!("semicircle radius must be positive, got {radius}")));
        }
        Ok(SemicircleLaw { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn density(&self, x: f64) -> f64 {
        let r = self.radius;
        if x.abs() >= r {
            0.0
        } else {
            2.0 / (PI * r * r) * (r * r - x * x).sqrt()
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let r = self.radius;
        if x <= -r {
            return 0.0;
        }
        if x >= r {
            return 1.0;
        }
        let u = x / r;
        (0.5 + (u * (1.0 - u * u).sqrt() + u.asin()) / PI).clamp(0.0, 1.0)
    }

    /// `E|X| = 4R / (3 pi)`.
    pub fn abs_mean(&self) -> f64 {
        4.0 * self.radius / (3.0 * PI)
    }

    /// Zero for odd `k`; `C_{k/2} (R/2)^k` for even `k`.
    pub fn moment(&self, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        catalan_f64(k / 2) * (self.radius / 2.0).powi(k as i32)
    }

    /// Root of `(R^2/4) S^2 + z S + 1 = 0` in the upper half plane, which is
    /// the branch with `S(z) ~ -1/z` at infinity.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64> {
        require_upper_half_plane(z)?;
        let v = self.radius * self.radius / 4.0;
        let disc = (z * z - 4.0 * v).sqrt();
        // Pair the larger-magnitude combination with the product of roots
        // 1/v to avoid cancellation when |z| >> R.
        let q = if (z + disc).norm() >= (z - disc).norm() {
            -(z + disc) / 2.0
        } else {
            -(z - disc) / 2.0
        };
        let (a, b) = (q / v, q.inv());
        Ok(if a.im >= b.im { a } else { b })
    }
}

fn catalan_f64(k: u32) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * 2.0 * (2 * i + 1) as f64 / (i + 2) as f64;
    }
    c
}

pub fn semicircle_density(x: f64, radius: f64) -> Result<f64> {
    Ok(SemicircleLaw::new(radius)?.density(x))
}

pub fn semicircle_cdf(x: f64, radius: f64) -> Result<f64> {
    Ok(SemicircleLaw::new(radius)?.cdf(x))
}

pub fn semicircle_abs_mean(radius: f64) -> Result<f64> {
    Ok(SemicircleLaw::new(radius)?.abs_mean())
}

pub fn semicircle_moment(k: u32, radius: f64) -> Result<f64> {
    Ok(SemicircleLaw::new(radius)?.moment(k))
}

pub fn semicircle_stieltjes(z: Complex64, radius: f64) -> Result<Complex64> {
    SemicircleLaw::new(radius)?.stieltjes(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson on `x = R sin(theta)`, where the semicircle weight
    /// becomes the smooth `(2/pi) cos^2(theta)`.
    fn integrate_against_density(r: f64, f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let steps = 20_000;
        let h = (hi - lo) / steps as f64;
        let g = |t: f64| f(r * t.sin()) * 2.0 / PI * t.cos().powi(2);
        let mut acc = g(lo) + g(hi);
        for s in 1..steps {
            let w = if s % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * g(lo + s as f64 * h);
        }
        acc * h / 3.0
    }

    fn full(r: f64, f: impl Fn(f64) -> f64) -> f64 {
        integrate_against_density(r, f, -PI / 2.0, PI / 2.0)
    }

    #[test]
    fn cdf_anchor_points() {
        for r in [0.5, 1.0, 3.0] {
            let s = SemicircleLaw::new(r).unwrap();
            assert!((s.cdf(0.0) - 0.5).abs() < 1e-15);
            assert_eq!(s.cdf(-r), 0.0);
            assert_eq!(s.cdf(r), 1.0);
            assert_eq!(s.cdf(-2.0 * r), 0.0);
        }
        assert!(SemicircleLaw::new(0.0).is_err());
        assert!(semicircle_cdf(0.0, -1.0).is_err());
    }

    #[test]
    fn cdf_is_nondecreasing_and_matches_density_integral() {
        let s = SemicircleLaw::new(1.3).unwrap();
        let mut prev = 0.0;
        for i in 0..=400 {
            let x = -1.5 + 3.0 * i as f64 / 400.0;
            let c = s.cdf(x);
            assert!(c >= prev);
            prev = c;
        }
        // Trapezoid in x against the closed form at a few points.
        let x1 = 0.4;
        let steps = 200_000;
        let h = (x1 + 1.3) / steps as f64;
        let mut acc = 0.5 * (s.density(-1.3) + s.density(x1));
        for i in 1..steps {
            acc += s.density(-1.3 + i as f64 * h);
        }
        assert!((acc * h - s.cdf(x1)).abs() < 1e-6);
    }

    #[test]
    fn density_integrates_to_one_and_moments_match_quadrature() {
        for r in [0.7, 1.0, 2.0] {
            assert!((full(r, |_| 1.0) - 1.0).abs() < 1e-10);
            let s = SemicircleLaw::new(r).unwrap();
            for k in 0..=8u32 {
                let q = full(r, |x| x.powi(k as i32));
                assert!((q - s.moment(k)).abs() < 1e-10, "k={k} r={r}");
            }
            assert!((s.moment(2) - r * r / 4.0).abs() < 1e-15);
            assert!((s.moment(4) - r.powi(4) / 8.0).abs() < 1e-15);
            let abs = 2.0 * integrate_against_density(r, |x| x.abs(), 0.0, PI / 2.0);
            assert!((abs - s.abs_mean()).abs() < 1e-10);
            assert!((s.abs_mean() - 4.0 * r / (3.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn stieltjes_matches_quadrature_and_asymptotics() {
        let s = SemicircleLaw::new(1.0).unwrap();
        let z = Complex64::new(0.0, 1.0);
        let steps = 20_000;
        let (lo, hi) = (-PI / 2.0, PI / 2.0);
        let h = (hi - lo) / steps as f64;
        let g = |t: f64| (Complex64::new(t.sin(), 0.0) - z).inv() * (2.0 / PI * t.cos().powi(2));
        let mut acc = g(lo) + g(hi);
        for k in 1..steps {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += g(lo + k as f64 * h) * w;
        }
        let quad = acc * (h / 3.0);
        assert!((quad - s.stieltjes(z).unwrap()).norm() < 1e-8);

        let big = Complex64::new(0.0, 1e6);
        let v = s.stieltjes(big).unwrap();
        assert!((v - (-big.inv())).norm() < 1e-12 * big.inv().norm() * 10.0);

        for re in [-3.0, -1.0, -0.2, 0.0, 0.5, 1.0, 4.0] {
            for im in [1e-3, 0.1, 1.0, 10.0] {
                assert!(s.stieltjes(Complex64::new(re, im)).unwrap().im > 0.0);
            }
        }
        assert!(s.stieltjes(Complex64::new(0.0, 0.0)).is_err());
    }
}
