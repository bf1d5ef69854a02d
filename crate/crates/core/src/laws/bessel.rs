//! Power series for `J_1` and `I_1` and the pseudo characteristic function of
//! the two-part `F_1 = 0` moment sequence.
//!
//! `J_1` alternates with terms reaching `e^x`-sized magnitudes before the
//! sum settles near `O(1)`, so the series is accumulated in 320-bit fixed
//! point. `I_1` has positive terms and the same routine serves it.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const FRAC_BITS: u32 = 320;

/// Grid spacing used by [`find_negativity_witness`].
pub const WITNESS_GRID_STEP: f64 = 1e-2;

/// `sum_j s^j (x/2)^{2j} / (2 j! (j+1)!)` with `s = -1` for `J_1(x)/x` and
/// `s = +1` for `I_1(x)/x`. Terms are added until they fall below `1e-16`
/// of the running sum.
fn bessel_ratio_series(x: f64, alternating: bool) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let (mantissa, exponent) = decompose(x.abs());
    // q = (x/2)^2 = mantissa^2 * 2^(2 exponent - 2)
    let q_num = BigInt::from(mantissa) * BigInt::from(mantissa);
    let q_shift = 2 * exponent - 2;

    let mut term = BigInt::from(1u8) << (FRAC_BITS - 1); // 1/2
    let mut sum = term.clone();
    let mut j: u64 = 0;
    loop {
        j += 1;
        term *= &q_num;
        term = if q_shift >= 0 {
            term << q_shift as usize
        } else {
            term >> (-q_shift) as usize
        };
        term /= BigInt::from(j * (j + 1));
        if alternating {
            term = -term;
        }
        sum += &term;
        if term.is_zero() {
            break;
        }
        // Past the peak of the term sequence, stop once terms are negligible.
        let past_peak = (j as f64) * (j as f64 + 1.0) > x * x / 4.0;
        if past_peak && below_relative(&term, &sum, 1e-16) {
            break;
        }
    }
    fixed_to_f64(&sum)
}

fn below_relative(term: &BigInt, sum: &BigInt, rel: f64) -> bool {
    let t = term.abs().to_f64().unwrap_or(f64::INFINITY);
    let s = sum.abs().to_f64().unwrap_or(f64::INFINITY);
    t <= rel * s
}

fn fixed_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(FRAC_BITS as i32))
}

/// `x = mantissa * 2^exponent` with an integer mantissa.
fn decompose(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    x * bessel_ratio_series(x, true)
}

pub fn bessel_i1(x: f64) -> f64 {
    x * bessel_ratio_series(x, false)
}

fn check_nuhat(nuhat: f64, sigma: f64) -> Result<()> {
    if !(nuhat > 0.0 && nuhat < 0.5f64.sqrt()) {
        return Err(Error::arg(format!("nuhat must lie in (0, sqrt(1/2)), got {nuhat}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::arg(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

/// `(2 + 1/nuhat^2) J_1(s)/s + (2 - 1/nuhat^2) I_1(s)/s` with
/// `s = nuhat sigma t`. Equals 2 at `t = 0`.
pub fn pseudo_char_unnormalised(t: f64, nuhat: f64, sigma: f64) -> Result<f64> {
    check_nuhat(nuhat, sigma)?;
    let s = nuhat * sigma * t;
    let inv = 1.0 / (nuhat * nuhat);
    Ok((2.0 + inv) * bessel_ratio_series(s, true) + (2.0 - inv) * bessel_ratio_series(s, false))
}

/// [`pseudo_char_unnormalised`] scaled to value 1 at `t = 0`, which a genuine
/// characteristic function must have. A value below `-1` is a violation of
/// `|f(t)| <= 1`.
pub fn pseudo_char(t: f64, nuhat: f64, sigma: f64) -> Result<f64> {
    Ok(0.5 * pseudo_char_unnormalised(t, nuhat, sigma)?)
}

/// Smallest grid point `t` in `(0, t_max]` with `pseudo_char(t) < -1`.
pub fn find_negativity_witness(nuhat: f64, sigma: f64, t_max: f64) -> Result<Option<f64>> {
    check_nuhat(nuhat, sigma)?;
    let limit = 60.0 / (nuhat * sigma);
    if !(t_max > 0.0 && t_max <= limit) {
        return Err(Error::arg(format!(
            "t_max must lie in (0, {limit}], got {t_max}"
        )));
    }
    let steps = (t_max / WITNESS_GRID_STEP).floor() as u64;
    for s in 1..=steps {
        let t = s as f64 * WITNESS_GRID_STEP;
        if pseudo_char(t, nuhat, sigma)? < -1.0 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit references from an arbitrary-precision library.
    const J1_REF: [(f64, &str); 3] = [
        (1.0, "0.4400505857449335159596822037189149131274"),
        (5.0, "-0.3275791375914652220377343219101691327608"),
        (10.0, "0.04347274616886143666974876802585928830627"),
    ];
    const I1_REF: [(f64, &str); 3] = [
        (1.0, "0.5651591039924850272076960276098633073289"),
        (5.0, "24.33564214245052719914305045176000846056"),
        (10.0, "2670.988303701254654341031966772152549146"),
    ];

    #[test]
    fn series_match_reference_values() {
        for (t, r) in J1_REF {
            let r: f64 = r.parse().unwrap();
            assert!((bessel_j1(t) - r).abs() <= 1e-12 * r.abs().max(1.0), "J1({t})");
        }
        for (t, r) in I1_REF {
            let r: f64 = r.parse().unwrap();
            assert!((bessel_i1(t) - r).abs() <= 1e-12 * r.abs(), "I1({t})");
        }
    }

    #[test]
    fn j1_large_argument_survives_cancellation() {
        // J1(50) = -0.097511828125175137661... (reference value).
        assert!((bessel_j1(50.0) + 0.097_511_828_125_175_14).abs() < 1e-12);
        assert!((bessel_j1(-1.0) + bessel_j1(1.0)).abs() < 1e-16);
    }

    #[test]
    fn small_argument_limits() {
        assert_eq!(bessel_ratio_series(0.0, true), 0.5);
        assert!((bessel_j1(1e-8) / 1e-8 - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 1..200 {
            let v = bessel_i1(i as f64 * 0.1);
            assert!(v > prev);
            prev = v;
        }
        assert!((pseudo_char(1e-9, 0.5, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((pseudo_char(0.0, 0.3, 2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn witness_for_unbalanced_parts() {
        // nu1 = 0.9: nuhat = 0.09^{1/4}.
        let nuhat = 0.09f64.powf(0.25);
        assert!((nuhat - 0.5477).abs() < 1e-4);
        let t = find_negativity_witness(nuhat, 1.0, 60.0).unwrap().unwrap();
        assert!(pseudo_char(t, nuhat, 1.0).unwrap() < -1.0);
        assert!(pseudo_char(t - WITNESS_GRID_STEP, nuhat, 1.0).unwrap() >= -1.0);
    }

    #[test]
    fn argument_validation() {
        assert!(pseudo_char(1.0, 0.8, 1.0).is_err());
        assert!(pseudo_char(1.0, 0.0, 1.0).is_err());
        assert!(find_negativity_witness(0.5, 1.0, 1000.0).is_err());
        assert!(find_negativity_witness(0.5, 1.0, -1.0).is_err());
    }
}
