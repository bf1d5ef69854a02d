//! Random graphs on complete multipartite hosts and their energy.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::ensemble::PartitionSpec;
use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::rng::{Domain, EntryStream};
use crate::spectral::{singular_values, InequalityCheck};

/// Adjacency matrix of a simple graph whose edges only join distinct parts.
#[derive(Clone, Debug)]
pub struct GraphSample {
    pub adjacency: SymmetricMatrix,
    pub partition: PartitionSpec,
    pub p: f64,
}

impl GraphSample {
    pub fn n(&self) -> usize {
        self.adjacency.order()
    }

    /// Edges `(u, v)` with `u < v`, 0-based.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            let row = self.adjacency.row(i);
            out.extend((i + 1..n).filter(|&j| row[j] != 0.0).map(|j| (i, j)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!("edge probability must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Each cross-part pair is an edge with probability `p`; pairs inside a part
/// and loops never are. Singleton parts give `G_n(p)`.
pub fn sample_graph(
    partition: &PartitionSpec,
    p: f64,
    seed: u64,
    replicate: u64,
) -> Result<GraphSample> {
    check_probability(p)?;
    let n = partition.n();
    let stream = EntryStream::new(Domain::GraphEdges, seed, replicate);
    let mut adjacency = SymmetricMatrix::zeros(n);
    for i in 0..n {
        let mut cursor = stream.cursor(i, i + 1);
        for j in i + 1..n {
            let u = cursor.next_uniform();
            if !partition.same_part(i, j) && u < p {
                adjacency.set(i, j, 1.0);
            }
        }
    }
    Ok(GraphSample {
        adjacency,
        partition: partition.clone(),
        p,
    })
}

/// Sum of singular values.
pub fn matrix_energy(m: &SymmetricMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// `E(G) = sum |lambda_i|`.
pub fn graph_energy(g: &GraphSample) -> Result<f64> {
    matrix_energy(&g.adjacency)
}

/// `(8 / 3pi) n^{3/2} sqrt(c)` for a variance-like factor `c`.
fn leading_energy(n: usize, c: f64) -> f64 {
    8.0 / (3.0 * PI) * (n as f64).powf(1.5) * c.sqrt()
}

fn check_open_probability(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::arg(format!("edge probability must lie in (0, 1), got {p}")));
    }
    Ok(())
}

pub fn predicted_energy_gnp(n: usize, p: f64) -> Result<f64> {
    check_open_probability(p)?;
    Ok(leading_energy(n, p * (1.0 - p)))
}

pub fn predicted_energy_multipartite(n: usize, m: usize, p: f64) -> Result<f64> {
    check_open_probability(p)?;
    if m < 2 {
        return Err(Error::arg(format!("a multipartite host needs m >= 2, got {m}")));
    }
    let mf = m as f64;
    Ok(leading_energy(n, (mf - 1.0) / mf * p * (1.0 - p)))
}

/// Leading-order prediction for a host: complete graph for singleton
/// parts, the balanced formula for equal parts, none otherwise.
pub fn default_prediction(partition: &PartitionSpec, p: f64) -> Option<f64> {
    let n = partition.n();
    if partition.num_parts() == n {
        predicted_energy_gnp(n, p).ok()
    } else if partition.is_balanced() {
        predicted_energy_multipartite(n, partition.num_parts(), p).ok()
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyBounds {
    pub lower: f64,
    pub upper: f64,
    /// `sum nu_i^{3/2}` over the large parts.
    pub large_mass: f64,
}

/// Sandwich `(1 -+ sum nu_i^{3/2}) n^{3/2} (8 / 3pi) sqrt(p (1 - p))`.
pub fn energy_bounds_unbalanced(
    n: usize,
    fractions: &[f64],
    large_parts: &[usize],
    p: f64,
) -> Result<EnergyBounds> {
    check_probability(p)?;
    if fractions.iter().any(|&f| !(f > 0.0)) {
        return Err(Error::arg("fractions must be positive"));
    }
    let total: f64 = fractions.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::arg(format!("fractions must sum to 1, got {total}")));
    }
    check_large_parts(large_parts, fractions.len())?;
    let large_mass: f64 = large_parts.iter().map(|&i| fractions[i].powf(1.5)).sum();
    let base = leading_energy(n, p * (1.0 - p));
    Ok(EnergyBounds {
        lower: (1.0 - large_mass) * base,
        upper: (1.0 + large_mass) * base,
        large_mass,
    })
}

fn check_large_parts(large_parts: &[usize], num_parts: usize) -> Result<()> {
    let mut seen = vec![false; num_parts];
    for &i in large_parts {
        if i >= num_parts {
            return Err(Error::arg(format!("part index {i} out of range for {num_parts} parts")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::arg(format!("part index {i} listed twice")));
        }
    }
    Ok(())
}

/// `sum s(X) + sum s(Y) >= sum s(X + Y)`, relative slack `1e-9`.
pub fn kyfan_check(x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<InequalityCheck> {
    let z = x.add(y)?;
    let lhs = matrix_energy(x)? + matrix_energy(y)?;
    let rhs = matrix_energy(&z)?;
    let scale = lhs.max(rhs).max(1.0);
    Ok(InequalityCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9 * scale,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub p: f64,
    pub large_parts: Vec<usize>,
    pub energy_a: f64,
    pub energy_x_prime: f64,
    pub energy_d: f64,
    /// `E(A) + E(D) >= E(X')`.
    pub lower: InequalityCheck,
    /// `E(X') + E(D) >= E(A)`.
    pub upper: InequalityCheck,
    /// `D` vanishes outside the diagonal blocks of the large parts.
    pub d_block_diagonal: bool,
    pub holds: bool,
}

/// `X'` equals `A` across parts and is an independent `G_q(p)` inside each
/// large part; `D = X' - A`.
pub fn energy_decomposition_check(
    partition: &PartitionSpec,
    large_parts: &[usize],
    p: f64,
    seed: u64,
) -> Result<DecompositionReport> {
    check_large_parts(large_parts, partition.num_parts())?;
    let g = sample_graph(partition, p, seed, 0)?;
    let a = &g.adjacency;
    let n = g.n();
    let mut is_large = vec![false; partition.num_parts()];
    for &i in large_parts {
        is_large[i] = true;
    }

    let fill = EntryStream::new(Domain::GraphFill, seed, 0);
    let mut x_prime = a.clone();
    for &s in large_parts {
        let range = partition.range(s);
        for i in range.clone() {
            let mut cursor = fill.cursor(i, i + 1);
            for j in i + 1..range.end {
                if cursor.next_uniform() < p {
                    x_prime.set(i, j, 1.0);
                }
            }
        }
    }
    let d = x_prime.sub(a)?;
    let mut d_block_diagonal = true;
    for i in 0..n {
        for j in 0..n {
            let inside = partition.same_part(i, j) && is_large[partition.part_of(i)] && i != j;
            if !inside && d.get(i, j) != 0.0 {
                d_block_diagonal = false;
            }
        }
    }

    let lower = kyfan_check(a, &d)?;
    let upper = kyfan_check(&x_prime, &d.scaled(-1.0))?;
    Ok(DecompositionReport {
        n,
        p,
        large_parts: large_parts.to_vec(),
        energy_a: matrix_energy(a)?,
        energy_x_prime: matrix_energy(&x_prime)?,
        energy_d: matrix_energy(&d)?,
        holds: lower.holds && upper.holds && d_block_diagonal,
        lower,
        upper,
        d_block_diagonal,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub n: usize,
    pub p: f64,
    pub m: usize,
    pub replicate: u64,
    pub energy: f64,
    pub normalized: f64,
    pub prediction: Option<f64>,
    pub rel_dev: Option<f64>,
}

impl EnergyEstimate {
    pub fn new(g: &GraphSample, replicate: u64, energy: f64, prediction: Option<f64>) -> Self {
        let n = g.n();
        EnergyEstimate {
            n,
            p: g.p,
            m: g.partition.num_parts(),
            replicate,
            energy,
            normalized: energy / (n as f64).powf(1.5),
            prediction,
            rel_dev: prediction.map(|q| (energy - q) / q),
        }
    }
}

/// Samples a graph and compares its energy with [`default_prediction`].
pub fn estimate_energy(
    partition: &PartitionSpec,
    p: f64,
    seed: u64,
    replicate: u64,
) -> Result<EnergyEstimate> {
    let g = sample_graph(partition, p, seed, replicate)?;
    let e = graph_energy(&g)?;
    Ok(EnergyEstimate::new(&g, replicate, e, default_prediction(partition, p)))
}

/// Edge list `u,v`, 1-based.
pub fn write_edges_csv<W: Write>(g: &GraphSample, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["u", "v"])?;
    for (u, v) in g.edges() {
        w.write_record([(u + 1).to_string(), (v + 1).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.17e}")).unwrap_or_default()
}

pub fn write_energy_csv<W: Write>(rows: &[EnergyEstimate], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "p", "m", "replicate", "energy", "normalized", "prediction", "rel_dev"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.p.to_string(),
            r.m.to_string(),
            r.replicate.to_string(),
            format!("{:.17e}", r.energy),
            format!("{:.17e}", r.normalized),
            opt(r.prediction),
            opt(r.rel_dev),
        ])?;
    }
    w.flush()?;
    Ok(())
}
