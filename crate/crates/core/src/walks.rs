//! Exact closed-walk oracles for the moment method.
//!
//! A closed walk `(i_1, i_2)(i_2, i_3) .. (i_k, i_1)` is reduced to its
//! *shape*: the index sequence relabelled by first occurrence, so `(7, 3, 7, 2)`
//! becomes `(1, 2, 1, 3)`. Everything here is computed with exact integers and
//! rationals and serves as ground truth for the floating-point formulas.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};

pub const MAX_SHAPE_LEN: usize = 12;
pub const MAX_TRACE_N: usize = 8;
pub const MAX_TRACE_K: usize = 6;
pub const MAX_LIMIT_K: u32 = 10;
pub const MAX_LIMIT_PARTS: usize = 6;

/// Canonical closed walk: labels `1..=v` appear in first-use order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WalkShape {
    labels: Vec<u8>,
}

/// Unordered vertex pair (loops allowed) to number of traversals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMultiplicity(BTreeMap<(u8, u8), usize>);

impl EdgeMultiplicity {
    pub fn iter(&self) -> impl Iterator<Item = (&(u8, u8), &usize)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// True when no edge is traversed exactly once.
    pub fn all_repeated(&self) -> bool {
        self.0.values().all(|&c| c >= 2)
    }
}

impl WalkShape {
    /// Canonicalises an arbitrary index sequence.
    pub fn canonical<T: Copy + Eq>(seq: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let labels = seq
            .iter()
            .map(|x| match seen.iter().position(|s| s == x) {
                Some(p) => (p + 1) as u8,
                None => {
                    seen.push(*x);
                    seen.len() as u8
                }
            })
            .collect();
        WalkShape { labels }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of distinct labels.
    pub fn order(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn edges(&self) -> EdgeMultiplicity {
        let k = self.labels.len();
        let mut map = BTreeMap::new();
        for t in 0..k {
            let (a, b) = (self.labels[t], self.labels[(t + 1) % k]);
            *map.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        EdgeMultiplicity(map)
    }

    /// Good under mean-zero laws: every edge is traversed at least twice.
    pub fn is_good_zero_mean(&self) -> bool {
        self.edges().all_repeated()
    }

    pub fn dashed(&self) -> String {
        self.labels
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

fn check_shape_bounds(k: usize, v: usize) -> Result<()> {
    if !(1 <= v && v <= k && k <= MAX_SHAPE_LEN) {
        return Err(Error::arg(format!(
            "need 1 <= v <= k <= {MAX_SHAPE_LEN}, got k={k}, v={v}"
        )));
    }
    Ok(())
}

/// Every canonical closed sequence of length `k` using exactly `v` labels,
/// before any goodness filtering.
pub fn enumerate_shapes(k: usize, v: usize) -> Result<Vec<WalkShape>> {
    check_shape_bounds(k, v)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    grow(k, v, &mut cur, 0, &mut out);
    Ok(out)
}

fn grow(k: usize, v: usize, cur: &mut Vec<u8>, max: usize, out: &mut Vec<WalkShape>) {
    let remaining = k - cur.len();
    if remaining == 0 {
        if max == v {
            out.push(WalkShape { labels: cur.clone() });
        }
        return;
    }
    // Not enough room left to introduce the missing labels.
    if v - max > remaining {
        return;
    }
    let top = if max < v { max + 1 } else { max };
    for label in 1..=top {
        cur.push(label as u8);
        grow(k, v, cur, max.max(label), out);
        cur.pop();
    }
}

/// `g(v, k)`: shapes whose expected entry product can be nonzero.
///
/// With `zero_mean`, shapes with an edge of multiplicity one are dropped.
/// Without it every shape counts, since a generic law with nonzero mean has
/// all raw moments nonzero.
pub fn good_shape_count(k: usize, v: usize, zero_mean: bool) -> Result<u64> {
    let shapes = enumerate_shapes(k, v)?;
    Ok(if zero_mean {
        shapes.iter().filter(|s| s.is_good_zero_mean()).count() as u64
    } else {
        shapes.len() as u64
    })
}

/// `W_{v,k,n} = n (n-1) .. (n-v+1) g(v, k)`.
pub fn count_good_walks(v: usize, k: usize, n: usize, zero_mean: bool) -> Result<BigUint> {
    let g = good_shape_count(k, v, zero_mean)?;
    Ok(falling_factorial(n, v) * BigUint::from(g))
}

pub fn falling_factorial(n: usize, v: usize) -> BigUint {
    if v > n {
        return BigUint::zero();
    }
    (0..v).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i))
}

/// `E[sum_{i_1..i_k} a_{i_1 i_2} .. a_{i_k i_1}]`, split by walk order.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceMoment {
    pub k: usize,
    pub n: usize,
    /// `by_order[v]` sums over index tuples with exactly `v` distinct values.
    pub by_order: Vec<BigRational>,
}

impl TraceMoment {
    pub fn walk_sum(&self) -> BigRational {
        self.by_order.iter().cloned().sum()
    }

    /// `E M_{k,n} = 2^{-k} n^{-1-k/2} * walk_sum` when this is rational
    /// (even `k`, a perfect-square `n`, or a zero sum).
    pub fn exact(&self) -> Option<BigRational> {
        self.scale_exact().map(|s| s * self.walk_sum())
    }

    pub fn to_f64(&self) -> f64 {
        self.scale_f64() * self.walk_sum().to_f64().unwrap_or(f64::NAN)
    }

    /// `S_{v,k,n}` as a float.
    pub fn order_term_f64(&self, v: usize) -> f64 {
        self.scale_f64() * self.by_order[v].to_f64().unwrap_or(f64::NAN)
    }

    pub fn order_term_exact(&self, v: usize) -> Option<BigRational> {
        self.scale_exact().map(|s| s * &self.by_order[v])
    }

    fn scale_f64(&self) -> f64 {
        2f64.powi(-(self.k as i32)) * (self.n as f64).powf(-1.0 - self.k as f64 / 2.0)
    }

    fn scale_exact(&self) -> Option<BigRational> {
        let two_k = BigInt::one() << self.k;
        let n = BigInt::from(self.n);
        // n^{1 + k/2} = n^{(k+2)/2}; for odd k it needs sqrt(n).
        let denom_n = if self.k % 2 == 0 {
            Some(num_traits::pow(n, (self.k + 2) / 2))
        } else {
            let root = self.n.sqrt();
            (root * root == self.n).then(|| num_traits::pow(BigInt::from(root), self.k + 2))
        };
        match denom_n {
            Some(d) => Some(BigRational::new(BigInt::one(), two_k * d)),
            None if self.walk_sum().is_zero() => Some(BigRational::zero()),
            None => None,
        }
    }
}

/// Exact `E[M_{k,n}]` by summing the expected product over all `n^k` index
/// tuples. Tuples are grouped by the multiset of `(block, multiplicity)`
/// pairs of their edges so each distinct product is formed once.
pub fn exact_expected_trace_moment(spec: &EnsembleSpec, k: usize) -> Result<TraceMoment> {
    let n = spec.n();
    if n > MAX_TRACE_N || k > MAX_TRACE_K || k == 0 {
        return Err(Error::arg(format!(
            "exact trace moments need 1 <= k <= {MAX_TRACE_K} and n <= {MAX_TRACE_N}, got k={k}, n={n}"
        )));
    }
    let part = &spec.partition;
    // key: (order, sorted (intra, multiplicity) list)
    let mut groups: HashMap<(usize, Vec<(bool, u8)>), u64> = HashMap::new();
    let mut idx = vec![0usize; k];
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(k);
    loop {
        edges.clear();
        for t in 0..k {
            let (a, b) = (idx[t], idx[(t + 1) % k]);
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        let mut key: Vec<(bool, u8)> = Vec::with_capacity(k);
        let mut t = 0;
        while t < k {
            let mut u = t;
            while u < k && edges[u] == edges[t] {
                u += 1;
            }
            let (a, b) = edges[t];
            key.push((part.same_part(a, b), (u - t) as u8));
            t = u;
        }
        key.sort_unstable();
        let mut distinct = idx.clone();
        distinct.sort_unstable();
        distinct.dedup();
        *groups.entry((distinct.len(), key)).or_insert(0) += 1;

        // odometer
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(collect_trace(spec, k, groups));
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn collect_trace(
    spec: &EnsembleSpec,
    k: usize,
    groups: HashMap<(usize, Vec<(bool, u8)>), u64>,
) -> TraceMoment {
    let mut moments: HashMap<(bool, u8), BigRational> = HashMap::new();
    let mut by_order = vec![BigRational::zero(); k + 1];
    // Deterministic order for the exact sum (the result is exact either way).
    let mut entries: Vec<_> = groups.into_iter().collect();
    entries.sort();
    for ((order, key), count) in entries {
        let mut prod = BigRational::from_integer(BigInt::from(count));
        for &(intra, mult) in &key {
            let m = moments.entry((intra, mult)).or_insert_with(|| {
                let law = if intra { &spec.law_intra } else { &spec.law_cross };
                law.raw_moment_exact(mult as u32)
            });
            if m.is_zero() {
                prod.set_zero();
                break;
            }
            prod *= &*m;
        }
        by_order[order] += prod;
    }
    TraceMoment {
        k,
        n: spec.n(),
        by_order,
    }
}

/// Exact limit of `E M_{k,n}` for mean-zero laws when part `p` occupies a
/// fraction `fractions[p]` of the vertices.
///
/// Only shapes of order `k/2 + 1` survive; each is a tree walk crossing every
/// edge twice. For each shape the labels are assigned to parts, weighted by
/// the product of the fractions, and every edge contributes `sigma1^2` inside
/// a part (0 when `zero_intra`) or `sigma2^2` across parts.
pub fn limit_gamma_walks(
    fractions: &[BigRational],
    sigma1_sq: &BigRational,
    sigma2_sq: &BigRational,
    k: u32,
    zero_intra: bool,
) -> Result<BigRational> {
    if k % 2 == 1 {
        return Err(Error::arg(format!("limit moments are computed for even k, got {k}")));
    }
    if k > MAX_LIMIT_K {
        return Err(Error::arg(format!("k <= {MAX_LIMIT_K} required, got {k}")));
    }
    if fractions.is_empty() || fractions.len() > MAX_LIMIT_PARTS {
        return Err(Error::arg(format!(
            "between 1 and {MAX_LIMIT_PARTS} fractions required, got {}",
            fractions.len()
        )));
    }
    let total: BigRational = fractions.iter().cloned().sum();
    if total != BigRational::one() || fractions.iter().any(|f| *f <= BigRational::zero()) {
        return Err(Error::arg("fractions must be positive and sum to exactly 1"));
    }
    if k == 0 {
        return Ok(BigRational::one());
    }
    let intra = if zero_intra {
        BigRational::zero()
    } else {
        sigma1_sq.clone()
    };
    let v = (k / 2 + 1) as usize;
    let mut sum = BigRational::zero();
    for shape in enumerate_shapes(k as usize, v)?.iter().filter(|s| s.is_good_zero_mean()) {
        sum += tree_assignment_sum(shape, fractions, &intra, sigma2_sq);
    }
    Ok(sum / BigRational::from_integer(BigInt::one() << k as usize))
}

/// `sum over part assignments c of prod_labels nu_{c(l)} prod_edges w(c(a), c(b))`
/// for a shape whose distinct edges form a tree, by message passing from the
/// leaves towards label 1.
fn tree_assignment_sum(
    shape: &WalkShape,
    fractions: &[BigRational],
    intra: &BigRational,
    cross: &BigRational,
) -> BigRational {
    let v = shape.order();
    let mut adj = vec![Vec::new(); v + 1];
    for (&(a, b), _) in shape.edges().iter() {
        debug_assert_ne!(a, b, "tree walks have no loops");
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    debug_assert_eq!(shape.edges().len(), v - 1, "good shapes of order k/2+1 are trees");
    let m = fractions.len();
    let message = |child: &[BigRational], p: usize| -> BigRational {
        (0..m)
            .map(|q| {
                let w = if p == q { intra } else { cross };
                w * &child[q]
            })
            .sum()
    };
    // Iterative post-order from label 1.
    fn visit(
        node: usize,
        parent: usize,
        adj: &[Vec<usize>],
        fractions: &[BigRational],
        message: &dyn Fn(&[BigRational], usize) -> BigRational,
    ) -> Vec<BigRational> {
        let children: Vec<Vec<BigRational>> = adj[node]
            .iter()
            .filter(|&&c| c != parent)
            .map(|&c| visit(c, node, adj, fractions, message))
            .collect();
        (0..fractions.len())
            .map(|p| {
                children
                    .iter()
                    .fold(fractions[p].clone(), |acc, ch| acc * message(ch, p))
            })
            .collect()
    }
    visit(1, 0, &adj, fractions, &message).into_iter().sum()
}

/// Reads `f64` fractions at their exact binary values, then rescales so the
/// total is exactly one. Use [`exact_fraction`] for hand-written ratios.
pub fn fractions_from_f64(fractions: &[f64]) -> Result<Vec<BigRational>> {
    let exact: Vec<BigRational> = fractions
        .iter()
        .map(|&f| {
            BigRational::from_float(f)
                .filter(|r| *r > BigRational::zero())
                .ok_or_else(|| Error::arg(format!("invalid fraction {f}")))
        })
        .collect::<Result<_>>()?;
    let total: BigRational = exact.iter().cloned().sum();
    Ok(exact.into_iter().map(|f| f / &total).collect())
}

/// `num / den` as an exact rational.
pub fn exact_fraction(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact decimal value of a float, for rational sigma inputs.
pub fn exact_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::arg(format!("non-finite value {x}")))
}

/// Rows `k,v,shape` with dash-separated labels.
pub fn write_shapes_csv<W: Write>(shapes: &[WalkShape], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "v", "shape"])?;
    for s in shapes {
        w.write_record([s.len().to_string(), s.order().to_string(), s.dashed()])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `k,n,value_num,value_den`; moments that are not rational are skipped.
pub fn write_oracle_csv<W: Write>(results: &[TraceMoment], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "n", "value_num", "value_den"])?;
    for r in results {
        if let Some(x) = r.exact() {
            w.write_record([
                r.k.to_string(),
                r.n.to_string(),
                x.numer().to_string(),
                x.denom().to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
