use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `T_k = (2k)! / (k! (k+1)!)`, via the exact binomial `C(2k, k) / (k+1)`.
pub fn catalan(k: u32) -> BigUint {
    let mut binom = BigUint::one();
    for i in 0..k {
        binom = binom * BigUint::from(2 * k - i) / BigUint::from(i + 1);
    }
    binom / BigUint::from(k + 1)
}

/// `T_0 .. T_k` from `T_k = sum_{i<k} T_i T_{k-1-i}`.
pub fn catalan_by_recursion(k: u32) -> Vec<BigUint> {
    let mut t = vec![BigUint::one()];
    for j in 1..=k as usize {
        let next = (0..j).map(|i| &t[i] * &t[j - 1 - i]).sum();
        t.push(next);
    }
    t
}

/// `f(m, sigma1, sigma2) = sqrt((sigma1^2 + (m-1) sigma2^2) / m)`.
pub fn mixing_radius(m: usize, sigma1_sq: f64, sigma2_sq: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::arg(format!("mixing radius needs m >= 2, got {m}")));
    }
    if !(sigma1_sq >= 0.0 && sigma2_sq > 0.0) {
        return Err(Error::arg("need sigma1^2 >= 0 and sigma2^2 > 0"));
    }
    Ok(((sigma1_sq + (m as f64 - 1.0) * sigma2_sq) / m as f64).sqrt())
}

/// `k! / (2^k (k/2)! (k/2+1)!)` for even `k`, i.e. `T_{k/2} / 2^k`.
fn catalan_over_pow2(k: u32) -> BigRational {
    BigRational::new(
        BigInt::from(catalan(k / 2)),
        BigInt::from(BigUint::one() << k as usize),
    )
}

fn rational_pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Limit moment with balanced parts: `T_{k/2} 2^{-k} f(m, sigma1, sigma2)^k`.
pub fn gamma_main(k: u32, m: usize, sigma1_sq: f64, sigma2_sq: f64) -> Result<f64> {
    let f = mixing_radius(m, sigma1_sq, sigma2_sq)?;
    if k % 2 == 1 {
        return Ok(0.0);
    }
    Ok(catalan_over_pow2(k).to_f64().unwrap_or(f64::NAN) * f.powi(k as i32))
}

/// Exact form of [`gamma_main`], expanding `f^k = ((s1 + (m-1) s2)/m)^{k/2}`.
pub fn gamma_main_exact(
    k: u32,
    m: usize,
    sigma1_sq: &BigRational,
    sigma2_sq: &BigRational,
) -> Result<BigRational> {
    if m < 2 {
        return Err(Error::arg(format!("m >= 2 required, got {m}")));
    }
    if k % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let m_big = BigRational::from_integer(BigInt::from(m));
    let f_sq = (sigma1_sq + (&m_big - BigRational::one()) * sigma2_sq) / m_big;
    Ok(catalan_over_pow2(k) * rational_pow(&f_sq, k / 2))
}

/// Limit moment when every part is vanishingly small: radius `sigma2`.
pub fn gamma_uniform(k: u32, sigma2_sq: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    catalan_over_pow2(k).to_f64().unwrap_or(f64::NAN) * sigma2_sq.powi((k / 2) as i32)
}

pub fn gamma_uniform_exact(k: u32, sigma2_sq: &BigRational) -> BigRational {
    if k % 2 == 1 {
        return BigRational::zero();
    }
    catalan_over_pow2(k) * rational_pow(sigma2_sq, k / 2)
}

/// Closed-form bipartite `F_1 = 0` limit moments for the
/// two-part case, with `nuhat = (nu1 nu2)^{1/4}`.
///
/// These values are kept for comparison only; the walk oracle
/// [`crate::walks::limit_gamma_walks`] gives the actual limits.
pub fn gamma_bipartite_printed(k: u32, nu1: f64, nu2: f64, sigma2_sq: f64) -> Result<f64> {
    check_two_fractions(nu1, nu2)?;
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let nuhat = (nu1 * nu2).powf(0.25);
    let sigma2 = sigma2_sq.sqrt();
    let base = catalan_over_pow2(k).to_f64().unwrap_or(f64::NAN)
        * nuhat.powi(k as i32)
        * sigma2.powi(k as i32);
    Ok(if k % 4 == 0 { 2.0 * base } else { base / (nuhat * nuhat) })
}

fn check_two_fractions(nu1: f64, nu2: f64) -> Result<()> {
    if !(nu1 > 0.0 && nu1 < 1.0 && nu2 > 0.0 && nu2 < 1.0) || (nu1 + nu2 - 1.0).abs() > 1e-12 {
        return Err(Error::arg(format!(
            "need nu1 + nu2 = 1 with both in (0, 1), got ({nu1}, {nu2})"
        )));
    }
    Ok(())
}

/// `gamma_2`, `gamma_4`, `gamma_6` (for `j = 1, 2, 3`) of the `m >= 3` case
/// with `F_1 = 0`, `sigma_2 = 1` and `nu_2 = .. = nu_m`, in closed form.
pub fn gamma_proposition_printed(j: u32, m: usize, nu1: f64, nu2: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::arg(format!("m >= 3 required, got {m}")));
    }
    let mm = m as f64;
    if !(nu1 > 0.0 && nu2 > 0.0) || (nu1 + (mm - 1.0) * nu2 - 1.0).abs() > 1e-12 {
        return Err(Error::arg(format!(
            "need nu1 + (m-1) nu2 = 1, got nu1={nu1}, nu2={nu2}, m={m}"
        )));
    }
    let a = (mm - 1.0) * nu2; // total mass of the small parts
    let b = 1.0 - nu2;
    let c = (mm - 2.0) * nu2;
    let v = match j {
        1 => 0.25 * (nu1 * a + a * b),
        2 => 2.0 / 16.0 * (nu1 * a * b + a * nu1 * a + a * c * b),
        3 => {
            5.0 / 64.0
                * (nu1 * a * nu1 * a
                    + nu1 * a * c * b
                    + a * nu1 * a * b
                    + a * c * nu1 * a
                    + a * c * c * b)
        }
        _ => return Err(Error::arg(format!("j must be 1, 2 or 3, got {j}"))),
    };
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    MainTheorem,
    UniformCase,
    BipartitePrinted,
    PropositionPrinted,
    WalkOracle,
    Empirical,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::MainTheorem => "main_theorem",
            Provenance::UniformCase => "uniform_case",
            Provenance::BipartitePrinted => "bipartite_printed",
            Provenance::PropositionPrinted => "proposition_printed",
            Provenance::WalkOracle => "walk_oracle",
            Provenance::Empirical => "empirical",
        }
    }
}

/// `gamma_0 .. gamma_L` tagged with where the numbers came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Self {
        MomentSequence { values, provenance }
    }

    /// Evaluates `f(k)` for `k = 0 ..= max_k`.
    pub fn try_from_fn(
        max_k: u32,
        provenance: Provenance,
        f: impl Fn(u32) -> Result<f64>,
    ) -> Result<Self> {
        let values = (0..=max_k).map(f).collect::<Result<Vec<_>>>()?;
        Ok(MomentSequence { values, provenance })
    }

    pub fn max_k(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    /// Rows `k,gamma,provenance`.
    pub fn write_csv<W: Write>(sequences: &[&MomentSequence], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "gamma", "provenance"])?;
        for seq in sequences {
            for (k, g) in seq.values.iter().enumerate() {
                w.write_record([k.to_string(), format!("{g:.17e}"), seq.provenance.as_str().into()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
