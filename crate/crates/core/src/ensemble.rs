//! Partitions, bounded entry laws and the block-partitioned ensemble `A_n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::rng::{Domain, EntryStream};

/// Partition of `{0, .., n-1}` into consecutive parts `V_1, .., V_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    n: usize,
    sizes: Vec<usize>,
    labels: Vec<u32>,
}

impl PartitionSpec {
    pub fn from_sizes(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidPartition("at least one part is required".into()));
        }
        if let Some(k) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!("part {k} is empty")));
        }
        let n = sizes.iter().sum();
        let mut labels = Vec::with_capacity(n);
        for (k, &s) in sizes.iter().enumerate() {
            labels.extend(std::iter::repeat(k as u32).take(s));
        }
        Ok(PartitionSpec { n, sizes, labels })
    }

    /// `n` parts of size one: every pair of distinct vertices is a cross pair.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::from_sizes(vec![1; n])
    }

    /// Equal parts of the given size; `n` must be a multiple of it.
    pub fn uniform_parts(n: usize, part_size: usize) -> Result<Self> {
        if part_size == 0 || n % part_size != 0 {
            return Err(Error::InvalidPartition(format!(
                "{n} is not a positive multiple of part size {part_size}"
            )));
        }
        Self::from_sizes(vec![part_size; n / part_size])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_parts(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn fractions(&self) -> Vec<f64> {
        self.sizes.iter().map(|&s| s as f64 / self.n as f64).collect()
    }

    /// Exact fractions `|V_k| / n`.
    pub fn exact_fractions(&self) -> Vec<BigRational> {
        self.sizes
            .iter()
            .map(|&s| BigRational::new(BigInt::from(s), BigInt::from(self.n)))
            .collect()
    }

    #[inline]
    pub fn part_of(&self, i: usize) -> usize {
        self.labels[i] as usize
    }

    #[inline]
    pub fn same_part(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// Index range occupied by part `k`.
    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..k].iter().sum();
        start..start + self.sizes[k]
    }

    pub fn is_balanced(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] == w[1])
    }
}

/// Splits `n` according to `fractions`.
///
/// Each part first receives `floor(n * fraction)`; the leftover units go to the
/// lowest-indexed parts, one each.
pub fn make_partition(n: usize, fractions: &[f64]) -> Result<PartitionSpec> {
    if n == 0 {
        return Err(Error::InvalidPartition("n must be positive".into()));
    }
    if fractions.is_empty() {
        return Err(Error::InvalidPartition("no fractions given".into()));
    }
    if let Some(k) = fractions.iter().position(|f| !(f.is_finite() && *f > 0.0)) {
        return Err(Error::InvalidPartition(format!(
            "fraction {k} must be positive, got {}",
            fractions[k]
        )));
    }
    let total: f64 = fractions.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPartition(format!(
            "fractions sum to {total}, expected 1"
        )));
    }
    // Absorb representation error such as 10 * 0.3 = 2.9999999999999996.
    let mut sizes: Vec<usize> = fractions
        .iter()
        .map(|f| (n as f64 * f + 1e-9).floor() as usize)
        .collect();
    let assigned: usize = sizes.iter().sum();
    if assigned > n {
        return Err(Error::InvalidPartition("fractions overshoot n".into()));
    }
    let leftover = n - assigned;
    if leftover > sizes.len() {
        return Err(Error::InvalidPartition("rounding leftover exceeds part count".into()));
    }
    for s in sizes.iter_mut().take(leftover) {
        *s += 1;
    }
    PartitionSpec::from_sizes(sizes)
}

/// A bounded scalar distribution with exact raw moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum EntryLaw {
    ConstantZero,
    Rademacher,
    /// 1 with probability `p`, else 0.
    Bernoulli { p: f64 },
    /// `a` with probability `q`, else `b`.
    TwoPoint { a: f64, b: f64, q: f64 },
    UniformInterval { lo: f64, hi: f64 },
}

impl EntryLaw {
    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            EntryLaw::ConstantZero | EntryLaw::Rademacher => Ok(()),
            EntryLaw::Bernoulli { p } if finite(&[p]) && (0.0..=1.0).contains(&p) => Ok(()),
            EntryLaw::Bernoulli { p } => Err(Error::InvalidLaw(format!("bernoulli p={p}"))),
            EntryLaw::TwoPoint { a, b, q } if finite(&[a, b, q]) && (0.0..=1.0).contains(&q) => {
                Ok(())
            }
            EntryLaw::TwoPoint { a, b, q } => Err(Error::InvalidLaw(format!(
                "two_point a={a} b={b} q={q}"
            ))),
            EntryLaw::UniformInterval { lo, hi } if finite(&[lo, hi]) && lo < hi => Ok(()),
            EntryLaw::UniformInterval { lo, hi } => Err(Error::InvalidLaw(format!(
                "uniform_interval needs lo < hi, got [{lo}, {hi}]"
            ))),
        }
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.raw_moment(2) - m * m
    }

    /// `sup |support|`.
    pub fn bound(&self) -> f64 {
        match *self {
            EntryLaw::ConstantZero => 0.0,
            EntryLaw::Rademacher => 1.0,
            EntryLaw::Bernoulli { p } => {
                if p > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            EntryLaw::TwoPoint { a, b, q } => {
                let ma = if q > 0.0 { a.abs() } else { 0.0 };
                let mb = if q < 1.0 { b.abs() } else { 0.0 };
                ma.max(mb)
            }
            EntryLaw::UniformInterval { lo, hi } => lo.abs().max(hi.abs()),
        }
    }

    pub fn is_zero_mean(&self) -> bool {
        self.raw_moment_exact(1).is_zero()
    }

    pub fn raw_moment(&self, k: u32) -> f64 {
        let k = k as i32;
        match *self {
            EntryLaw::ConstantZero => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            EntryLaw::Rademacher => {
                if k % 2 == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            EntryLaw::Bernoulli { p } => {
                if k == 0 {
                    1.0
                } else {
                    p
                }
            }
            EntryLaw::TwoPoint { a, b, q } => q * a.powi(k) + (1.0 - q) * b.powi(k),
            EntryLaw::UniformInterval { lo, hi } => {
                (hi.powi(k + 1) - lo.powi(k + 1)) / ((k + 1) as f64 * (hi - lo))
            }
        }
    }

    /// `E[X^k]` as an exact rational; float parameters are read at their
    /// exact binary values.
    pub fn raw_moment_exact(&self, k: u32) -> BigRational {
        let exact = |x: f64| BigRational::from_float(x).expect("finite law parameter");
        if k == 0 {
            return BigRational::one();
        }
        match *self {
            EntryLaw::ConstantZero => BigRational::zero(),
            EntryLaw::Rademacher => {
                if k % 2 == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
            EntryLaw::Bernoulli { p } => exact(p),
            EntryLaw::TwoPoint { a, b, q } => {
                let q = exact(q);
                let one_minus_q = BigRational::one() - &q;
                q * pow(&exact(a), k) + one_minus_q * pow(&exact(b), k)
            }
            EntryLaw::UniformInterval { lo, hi } => {
                let (lo, hi) = (exact(lo), exact(hi));
                let num = pow(&hi, k + 1) - pow(&lo, k + 1);
                let den = BigRational::from_integer(BigInt::from(k + 1)) * (hi - lo);
                num / den
            }
        }
    }

    /// Maps a uniform draw `u` in `[0, 1)` to a sample.
    #[inline]
    pub fn sample(&self, u: f64) -> f64 {
        match *self {
            EntryLaw::ConstantZero => 0.0,
            EntryLaw::Rademacher => {
                if u < 0.5 {
                    -1.0
                } else {
                    1.0
                }
            }
            EntryLaw::Bernoulli { p } => {
                if u < p {
                    1.0
                } else {
                    0.0
                }
            }
            EntryLaw::TwoPoint { a, b, q } => {
                if u < q {
                    a
                } else {
                    b
                }
            }
            EntryLaw::UniformInterval { lo, hi } => lo + (hi - lo) * u,
        }
    }

    /// Whether `x` lies in the support.
    pub fn supports(&self, x: f64) -> bool {
        match *self {
            EntryLaw::ConstantZero => x == 0.0,
            EntryLaw::Rademacher => x == 1.0 || x == -1.0,
            EntryLaw::Bernoulli { .. } => x == 0.0 || x == 1.0,
            EntryLaw::TwoPoint { a, b, .. } => x == a || x == b,
            EntryLaw::UniformInterval { lo, hi } => (lo..=hi).contains(&x),
        }
    }
}

fn pow(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Full description of the random matrix `A_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleSpecRepr", into = "EnsembleSpecRepr")]
pub struct EnsembleSpec {
    pub partition: PartitionSpec,
    /// Law of `a_ij` when `i` and `j` share a part, diagonal included.
    pub law_intra: EntryLaw,
    /// Law of `a_ij` across parts.
    pub law_cross: EntryLaw,
    pub seed: u64,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleSpecRepr {
    n: usize,
    fractions: Vec<f64>,
    law_intra: EntryLaw,
    law_cross: EntryLaw,
    #[serde(default)]
    seed: u64,
}

impl TryFrom<EnsembleSpecRepr> for EnsembleSpec {
    type Error = Error;

    fn try_from(r: EnsembleSpecRepr) -> Result<Self> {
        EnsembleSpec::new(make_partition(r.n, &r.fractions)?, r.law_intra, r.law_cross, r.seed)
    }
}

impl From<EnsembleSpec> for EnsembleSpecRepr {
    fn from(s: EnsembleSpec) -> Self {
        EnsembleSpecRepr {
            n: s.partition.n(),
            fractions: s.partition.fractions(),
            law_intra: s.law_intra,
            law_cross: s.law_cross,
            seed: s.seed,
        }
    }
}

impl EnsembleSpec {
    pub fn new(
        partition: PartitionSpec,
        law_intra: EntryLaw,
        law_cross: EntryLaw,
        seed: u64,
    ) -> Result<Self> {
        law_intra.validate()?;
        law_cross.validate()?;
        Ok(EnsembleSpec {
            partition,
            law_intra,
            law_cross,
            seed,
        })
    }

    /// Classical Wigner case: one part, one law everywhere.
    pub fn wigner(n: usize, law: EntryLaw, seed: u64) -> Result<Self> {
        Self::new(PartitionSpec::from_sizes(vec![n])?, law.clone(), law, seed)
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    #[inline]
    pub fn law_for(&self, i: usize, j: usize) -> &EntryLaw {
        if self.partition.same_part(i, j) {
            &self.law_intra
        } else {
            &self.law_cross
        }
    }

    pub fn bound(&self) -> f64 {
        self.law_intra.bound().max(self.law_cross.bound())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        EnsembleSpec {
            seed,
            ..self.clone()
        }
    }
}

/// Draws `A_n` for the given replicate. Pure in `(spec, replicate)`.
pub fn sample_matrix(spec: &EnsembleSpec, replicate: u64) -> SymmetricMatrix {
    let n = spec.n();
    let stream = EntryStream::new(Domain::MatrixEntries, spec.seed, replicate);
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        let mut cursor = stream.cursor(i, i);
        for j in i..n {
            let u = cursor.next_uniform();
            m.set(i, j, spec.law_for(i, j).sample(u));
        }
    }
    m
}

/// `B_n = A_n / (2 sqrt(n))`.
pub fn scale_matrix(a: &SymmetricMatrix) -> SymmetricMatrix {
    a.scaled(1.0 / (2.0 * (a.order() as f64).sqrt()))
}

/// Centred versions of `B_n` used to pass from mean-zero laws to general ones.
#[derive(Clone, Debug)]
pub struct Centralized {
    /// `(A - (mu1 - mu2) H' - mu2 J) / (2 sqrt n)`.
    pub c_prime: SymmetricMatrix,
    /// `C' - (mu1 - mu2) H'' / (2 sqrt n)`; every entry has mean zero.
    pub c_double_prime: SymmetricMatrix,
    /// `(mu1 - mu2) H'' / (2 sqrt n)`, block diagonal on the small parts.
    pub d: SymmetricMatrix,
    /// Parts with size above the threshold.
    pub large_parts: Vec<usize>,
}

/// Parts larger than `size_threshold` play the role of parts of diverging size.
pub fn centralize(
    spec: &EnsembleSpec,
    a: &SymmetricMatrix,
    size_threshold: usize,
) -> Result<Centralized> {
    if size_threshold < 1 {
        return Err(Error::arg("size threshold must be at least 1"));
    }
    let n = spec.n();
    if a.order() != n {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: n,
        });
    }
    let part = &spec.partition;
    let large: Vec<bool> = part.sizes().iter().map(|&s| s > size_threshold).collect();
    let mu1 = spec.law_intra.mean();
    let mu2 = spec.law_cross.mean();
    let delta = mu1 - mu2;
    let scale = 1.0 / (2.0 * (n as f64).sqrt());

    let mut c_prime = SymmetricMatrix::zeros(n);
    let mut c_double_prime = SymmetricMatrix::zeros(n);
    let mut d = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let (h1, h2) = if part.same_part(i, j) {
                if large[part.part_of(i)] {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                }
            } else {
                (0.0, 0.0)
            };
            let cp = (a.get(i, j) - delta * h1 - mu2) * scale;
            let dij = delta * h2 * scale;
            c_prime.set(i, j, cp);
            d.set(i, j, dij);
            c_double_prime.set(i, j, cp - dij);
        }
    }
    Ok(Centralized {
        c_prime,
        c_double_prime,
        d,
        large_parts: large
            .iter()
            .enumerate()
            .filter_map(|(k, &l)| l.then_some(k))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;

    #[test]
    fn partition_examples() {
        assert_eq!(make_partition(4, &[0.5, 0.5]).unwrap().sizes(), &[2, 2]);
        assert_eq!(make_partition(5, &[0.5, 0.5]).unwrap().sizes(), &[3, 2]);
        assert_eq!(make_partition(10, &[0.8, 0.1, 0.1]).unwrap().sizes(), &[8, 1, 1]);
        assert_eq!(make_partition(10, &[0.3, 0.7]).unwrap().sizes(), &[3, 7]);
    }

    #[test]
    fn partition_errors() {
        assert!(make_partition(4, &[0.5, 0.4]).is_err());
        assert!(make_partition(2, &[0.9, 0.05, 0.05]).is_err());
        assert!(make_partition(4, &[]).is_err());
        assert!(make_partition(4, &[1.5, -0.5]).is_err());
    }

    #[test]
    fn part_of_is_consistent_with_sizes() {
        let p = PartitionSpec::from_sizes(vec![3, 1, 2]).unwrap();
        let parts: Vec<_> = (0..6).map(|i| p.part_of(i)).collect();
        assert_eq!(parts, vec![0, 0, 0, 1, 2, 2]);
        assert_eq!(p.range(2), 4..6);
    }

    #[test]
    fn raw_moments_match_definitions() {
        let laws = [
            EntryLaw::ConstantZero,
            EntryLaw::Rademacher,
            EntryLaw::Bernoulli { p: 0.3 },
            EntryLaw::TwoPoint { a: -2.0, b: 0.5, q: 0.2 },
            EntryLaw::UniformInterval { lo: -1.0, hi: 1.0 },
        ];
        for law in &laws {
            assert_eq!(law.raw_moment(0), 1.0);
            let var = law.raw_moment(2) - law.mean().powi(2);
            assert!((var - law.variance()).abs() < 1e-15);
            for k in 0..6 {
                let exact = law.raw_moment_exact(k);
                let approx = num_traits::ToPrimitive::to_f64(&exact).unwrap();
                assert!((approx - law.raw_moment(k)).abs() < 1e-14, "{law:?} k={k}");
            }
        }
        let u = EntryLaw::UniformInterval { lo: -1.0, hi: 1.0 };
        assert_eq!(
            u.raw_moment_exact(2),
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
    }

    #[test]
    fn empirical_entry_statistics_within_four_standard_errors() {
        let laws = [
            EntryLaw::Rademacher,
            EntryLaw::Bernoulli { p: 0.2 },
            EntryLaw::TwoPoint { a: 3.0, b: -1.0, q: 0.25 },
            EntryLaw::UniformInterval { lo: -1.0, hi: 2.0 },
        ];
        let stream = EntryStream::new(Domain::MatrixEntries, 99, 0);
        let draws = 100_000;
        for law in &laws {
            let xs: Vec<f64> = (0..draws)
                .map(|t| law.sample(stream.uniform(t / 400, t % 400)))
                .collect();
            let mean = xs.iter().sum::<f64>() / draws as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
            let m4 = law.raw_moment(4) - 4.0 * law.raw_moment(3) * law.mean()
                + 6.0 * law.raw_moment(2) * law.mean().powi(2)
                - 3.0 * law.mean().powi(4);
            let se_mean = (law.variance() / draws as f64).sqrt();
            // Second term: bias from estimating the mean, dominant when X^2 is constant.
            let se_var = ((m4 - law.variance().powi(2)) / draws as f64).sqrt()
                + law.variance() / draws as f64;
            assert!((mean - law.mean()).abs() < 4.0 * se_mean, "{law:?} mean {mean}");
            assert!((var - law.variance()).abs() < 4.0 * se_var, "{law:?} var {var}");
            assert!(xs.iter().all(|&x| law.supports(x)));
        }
    }

    #[test]
    fn zero_laws_give_zero_matrix() {
        let spec = EnsembleSpec::new(
            PartitionSpec::from_sizes(vec![3, 2]).unwrap(),
            EntryLaw::ConstantZero,
            EntryLaw::ConstantZero,
            1,
        )
        .unwrap();
        assert_eq!(sample_matrix(&spec, 0), SymmetricMatrix::zeros(5));
    }

    #[test]
    fn supports_and_symmetry_per_block() {
        let spec = EnsembleSpec::new(
            PartitionSpec::from_sizes(vec![4, 3, 5]).unwrap(),
            EntryLaw::UniformInterval { lo: -1.0, hi: 1.0 },
            EntryLaw::Rademacher,
            17,
        )
        .unwrap();
        let a = sample_matrix(&spec, 2);
        assert!(a.is_symmetric());
        for i in 0..12 {
            for j in 0..12 {
                assert!(spec.law_for(i, j).supports(a.get(i, j)));
            }
        }
        assert!(a.max_abs() <= spec.bound());
        assert_eq!(a, sample_matrix(&spec, 2));
        assert_ne!(a, sample_matrix(&spec, 3));
    }

    #[test]
    fn scale_examples() {
        let a = SymmetricMatrix::from_upper_fn(4, |_, _| 1.0);
        assert_eq!(scale_matrix(&a).get(1, 3), 0.25);
        assert_eq!(scale_matrix(&SymmetricMatrix::zeros(3)), SymmetricMatrix::zeros(3));
        assert_eq!(scale_matrix(&SymmetricMatrix::diagonal(&[3.0])).get(0, 0), 1.5);
    }

    #[test]
    fn centralize_centered_laws_is_identity() {
        let spec = EnsembleSpec::new(
            PartitionSpec::from_sizes(vec![3, 3]).unwrap(),
            EntryLaw::UniformInterval { lo: -1.0, hi: 1.0 },
            EntryLaw::Rademacher,
            5,
        )
        .unwrap();
        let a = sample_matrix(&spec, 0);
        let b = scale_matrix(&a);
        let c = centralize(&spec, &a, 2).unwrap();
        assert_eq!(c.c_prime, b);
        assert_eq!(c.c_double_prime, b);
        assert_eq!(c.d, SymmetricMatrix::zeros(6));
        assert!(centralize(&spec, &a, 0).is_err());
    }

    #[test]
    fn centralize_single_large_part_has_no_small_correction() {
        let spec = EnsembleSpec::new(
            PartitionSpec::from_sizes(vec![6]).unwrap(),
            EntryLaw::Bernoulli { p: 0.3 },
            EntryLaw::Rademacher,
            5,
        )
        .unwrap();
        let a = sample_matrix(&spec, 0);
        let c = centralize(&spec, &a, 2).unwrap();
        assert_eq!(c.c_prime, c.c_double_prime);
        assert_eq!(c.large_parts, vec![0]);
        // mu2 = 0 so C' = (A - 0.3 J) / (2 sqrt 6).
        let s = 1.0 / (2.0 * 6f64.sqrt());
        assert!((c.c_prime.get(1, 4) - (a.get(1, 4) - 0.3) * s).abs() < 1e-15);
    }

    #[test]
    fn centralize_small_parts_difference_is_scaled_h() {
        let spec = EnsembleSpec::new(
            PartitionSpec::from_sizes(vec![2, 2, 1, 2]).unwrap(),
            EntryLaw::TwoPoint { a: 1.0, b: 1.0, q: 0.5 },
            EntryLaw::Rademacher,
            5,
        )
        .unwrap();
        let a = sample_matrix(&spec, 0);
        let c = centralize(&spec, &a, 5).unwrap();
        let n = 7;
        let s = 1.0 / (2.0 * (n as f64).sqrt());
        let diff = c.c_prime.sub(&c.c_double_prime).unwrap();
        for i in 0..n {
            for j in 0..n {
                let h = if spec.partition.same_part(i, j) { 1.0 } else { 0.0 };
                assert!((diff.get(i, j) - h * s).abs() < 1e-15);
            }
        }
        assert!(c.large_parts.is_empty());
    }

    #[test]
    fn json_round_trip_and_law_tags() {
        let text = r#"{"n": 10, "fractions": [0.5, 0.5],
            "law_intra": {"kind": "uniform_interval", "params": {"lo": -1.0, "hi": 1.0}},
            "law_cross": {"kind": "rademacher"}, "seed": 42}"#;
        let spec: EnsembleSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.partition.sizes(), &[5, 5]);
        assert_eq!(spec.law_cross, EntryLaw::Rademacher);
        let back: EnsembleSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);

        let bad = r#"{"n": 10, "fractions": [0.5, 0.5],
            "law_intra": {"kind": "bernoulli", "params": {"p": 1.5}},
            "law_cross": {"kind": "rademacher"}, "seed": 1}"#;
        assert!(serde_json::from_str::<EnsembleSpec>(bad).is_err());
    }

    #[test]
    fn trial_rng_index_range() {
        let mut r = TrialRng::new(3);
        for _ in 0..100 {
            let k = r.index(2, 5);
            assert!((2..5).contains(&k));
        }
    }
}
