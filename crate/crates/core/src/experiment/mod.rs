//! Config-driven experiment runner.
//!
//! Every run writes `report.json` next to kind-specific CSV tables. Replicates
//! are processed in parallel, but results are gathered in replicate order and
//! reduced sequentially, so output files do not depend on the thread count.

mod config;
mod output;

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use config::{
    CharFnConfig, EnsembleConfig, ExperimentConfig, ExperimentKind, GraphConfig, HankelConfig,
    WalksConfig,
};
pub use output::OutputDir;

use crate::ensemble::{sample_matrix, scale_matrix, EnsembleSpec};
use crate::error::{Error, Result};
use crate::graphenergy::{
    energy_bounds_unbalanced, energy_decomposition_check, estimate_energy, sample_graph,
    write_edges_csv, write_energy_csv, DecompositionReport, EnergyBounds, EnergyEstimate,
};
use crate::laws::{
    catalan, find_negativity_witness, gamma_bipartite_printed, gamma_main, gamma_proposition_printed,
    gamma_uniform, hankel_report, mixing_radius, pseudo_char, pseudo_char_unnormalised, HankelReport,
    MomentSequence, Provenance, SemicircleLaw,
};
use crate::spectral::{eigenvalues_sym, empirical_moment, esd, ks_distance, stieltjes_empirical, Spectrum};
use crate::walks::{
    enumerate_shapes, exact_expected_trace_moment, exact_f64, limit_gamma_walks, write_oracle_csv,
    write_shapes_csv, MAX_LIMIT_K, MAX_LIMIT_PARTS, MAX_TRACE_K, MAX_TRACE_N,
};

pub const VERSION: &str = concat!("rmtlab ", env!("CARGO_PKG_VERSION"));

/// Largest walk length whose shapes are written out one per row.
const SHAPES_CSV_MAX_K: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub kind: ExperimentKind,
    pub version: &'static str,
    pub seed: u64,
    pub replicates: usize,
    pub config: ExperimentConfig,
    pub wall_clock_seconds: f64,
    pub results: serde_json::Value,
    pub files: Vec<String>,
}

/// Runs the experiment named by `config.kind` and writes its files into `out`.
/// On error every file written so far is removed again.
pub fn run_experiment(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    config.validate()?;
    let kind = config.kind()?;
    let start = Instant::now();
    let mut dir = OutputDir::create(out)?;
    let results = match kind {
        ExperimentKind::Esd => to_value(run_esd(config, &mut dir)?),
        ExperimentKind::Moments => to_value(run_moments(config, &mut dir)?),
        ExperimentKind::Stieltjes => to_value(run_stieltjes(config, &mut dir)?),
        ExperimentKind::Walks => to_value(run_walks(config, &mut dir)?),
        ExperimentKind::Hankel => to_value(run_hankel(config, &mut dir)?),
        ExperimentKind::Charfn => to_value(run_charfn(config, &mut dir)?),
        ExperimentKind::Energy => to_value(run_energy(config, &mut dir)?),
        ExperimentKind::Decomposition => to_value(run_decomposition(config, &mut dir)?),
    }?;
    let mut files = dir.files();
    files.push("report.json".into());
    let report = RunReport {
        kind,
        version: VERSION,
        seed: config.seed,
        replicates: config.replicates,
        config: config.clone(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        results,
        files,
    };
    dir.write_with("report.json", |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)?;
        Ok(())
    })?;
    dir.commit();
    Ok(report)
}

fn to_value<T: Serialize>(x: T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(x)?)
}

/// Semicircle radius expected for the ensemble, when a known limit applies:
/// one part, vanishing parts (largest fraction at most 1%), or equal parts.
pub fn predicted_radius(spec: &EnsembleSpec) -> Option<f64> {
    let fractions = spec.partition.fractions();
    let m = fractions.len();
    let s1 = spec.law_intra.variance();
    let s2 = spec.law_cross.variance();
    let r = if m == 1 {
        s1.sqrt()
    } else if fractions.iter().cloned().fold(0.0, f64::max) <= 0.01 {
        s2.sqrt()
    } else if spec.partition.is_balanced() {
        mixing_radius(m, s1, s2).ok()?
    } else {
        return None;
    };
    (r > 0.0).then_some(r)
}

/// Limit moment sequences `gamma_0 ..= gamma_max_k` that apply to the
/// ensemble. Empty unless both laws have mean zero.
pub fn theoretical_sequences(spec: &EnsembleSpec, max_k: u32) -> Result<Vec<MomentSequence>> {
    let mut out = Vec::new();
    if !(spec.law_intra.is_zero_mean() && spec.law_cross.is_zero_mean()) {
        return Ok(out);
    }
    let fractions = spec.partition.fractions();
    let m = fractions.len();
    let s1 = spec.law_intra.variance();
    let s2 = spec.law_cross.variance();
    if m == 1 {
        out.push(MomentSequence::try_from_fn(max_k, Provenance::UniformCase, |k| {
            Ok(gamma_uniform(k, s1))
        })?);
    } else if fractions.iter().cloned().fold(0.0, f64::max) <= 0.01 {
        out.push(MomentSequence::try_from_fn(max_k, Provenance::UniformCase, |k| {
            Ok(gamma_uniform(k, s2))
        })?);
    } else if spec.partition.is_balanced() {
        out.push(MomentSequence::try_from_fn(max_k, Provenance::MainTheorem, |k| {
            gamma_main(k, m, s1, s2)
        })?);
    }
    if m <= MAX_LIMIT_PARTS && max_k <= MAX_LIMIT_K {
        let exact = spec.partition.exact_fractions();
        let (e1, e2) = (exact_f64(s1)?, exact_f64(s2)?);
        out.push(MomentSequence::try_from_fn(max_k, Provenance::WalkOracle, |k| {
            if k % 2 == 1 {
                return Ok(0.0);
            }
            let g = limit_gamma_walks(&exact, &e1, &e2, k, false)?;
            Ok(num_traits::ToPrimitive::to_f64(&g).unwrap_or(f64::NAN))
        })?);
    }
    if s1 == 0.0 && m == 2 {
        out.push(MomentSequence::try_from_fn(max_k, Provenance::BipartitePrinted, |k| {
            gamma_bipartite_printed(k, fractions[0], fractions[1], s2)
        })?);
    }
    let equal_tail = fractions[1..].windows(2).all(|w| w[0] == w[1]);
    if s1 == 0.0 && s2 == 1.0 && m >= 3 && equal_tail {
        let top = max_k.min(6);
        out.push(MomentSequence::try_from_fn(top, Provenance::PropositionPrinted, |k| match k {
            0 => Ok(1.0),
            k if k % 2 == 1 => Ok(0.0),
            k => gamma_proposition_printed(k / 2, m, fractions[0], fractions[1]),
        })?);
    }
    Ok(out)
}

fn replicate_spectra(spec: &EnsembleSpec, replicates: usize) -> Result<Vec<Spectrum>> {
    (0..replicates as u64)
        .into_par_iter()
        .map(|r| eigenvalues_sym(&scale_matrix(&sample_matrix(spec, r))))
        .collect()
}

/// Equal-width bins; values outside the range are not counted, but the
/// density still divides by the full spectrum size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub total: usize,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.width();
        let lo = self.lo + i as f64 * w;
        let hi = if i + 1 == self.bins() { self.hi } else { self.lo + (i + 1) as f64 * w };
        (lo, hi)
    }

    pub fn center(&self, i: usize) -> f64 {
        let (a, b) = self.bin_edges(i);
        0.5 * (a + b)
    }

    pub fn density(&self, i: usize) -> f64 {
        self.counts[i] as f64 / (self.total as f64 * self.width())
    }

    /// Rows `bin_lo,bin_hi,count,density`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_lo", "bin_hi", "count", "density"])?;
        for i in 0..self.bins() {
            let (a, b) = self.bin_edges(i);
            w.write_record([
                format!("{a:.17e}"),
                format!("{b:.17e}"),
                self.counts[i].to_string(),
                format!("{:.17e}", self.density(i)),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn histogram(s: &Spectrum, bins: usize, range: Option<(f64, f64)>) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::arg(format!("at least two bins required, got {bins}")));
    }
    let (lo, hi) = match range {
        Some((lo, hi)) if lo < hi => (lo, hi),
        Some((lo, hi)) => return Err(Error::arg(format!("empty range [{lo}, {hi}]"))),
        None => {
            let (lo, hi) = (
                s.min().ok_or_else(|| Error::arg("empty spectrum"))?,
                s.max().ok_or_else(|| Error::arg("empty spectrum"))?,
            );
            if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        }
    };
    if s.order() == 0 {
        return Err(Error::arg("empty spectrum"));
    }
    let mut counts = vec![0u64; bins];
    let width = (hi - lo) / bins as f64;
    for &x in s.eigs() {
        if x < lo || x > hi {
            continue;
        }
        let b = (((x - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    Ok(Histogram {
        lo,
        hi,
        counts,
        total: s.order(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EsdReplicate {
    pub replicate: u64,
    pub ks: Option<f64>,
    pub m2: f64,
    pub m4: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EsdResults {
    pub n: usize,
    pub predicted_radius: Option<f64>,
    pub per_replicate: Vec<EsdReplicate>,
    pub mean_ks: Option<f64>,
    /// Largest `|histogram density - semicircle density|` at bin centres.
    pub max_density_deviation: Option<f64>,
}

fn run_esd(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<EsdResults> {
    let spec = config.ensemble()?.spec(config.seed)?;
    let spectra = replicate_spectra(&spec, config.replicates)?;
    let radius = predicted_radius(&spec);
    let law = radius.map(SemicircleLaw::new).transpose()?;
    let per_replicate: Vec<EsdReplicate> = spectra
        .iter()
        .enumerate()
        .map(|(r, s)| EsdReplicate {
            replicate: r as u64,
            ks: law.as_ref().map(|l| ks_distance(&esd(s), |x| l.cdf(x))),
            m2: empirical_moment(s, 2),
            m4: empirical_moment(s, 4),
            min: s.min().unwrap_or(f64::NAN),
            max: s.max().unwrap_or(f64::NAN),
        })
        .collect();
    let pooled = Spectrum::new(spectra.iter().flat_map(|s| s.eigs().iter().copied()).collect())?;
    let hist = histogram(&pooled, config.bins, config.range.map(|[a, b]| (a, b)))?;
    let max_density_deviation = law.as_ref().map(|l| {
        (0..hist.bins())
            .map(|i| (hist.density(i) - l.density(hist.center(i))).abs())
            .fold(0.0, f64::max)
    });
    dir.write_with("eigenvalues.csv", |w| spectra[0].write_csv(w))?;
    dir.write_with("histogram.csv", |w| hist.write_csv(w))?;
    let mean_ks = law
        .is_some()
        .then(|| per_replicate.iter().filter_map(|r| r.ks).sum::<f64>() / per_replicate.len() as f64);
    Ok(EsdResults {
        n: spec.n(),
        predicted_radius: radius,
        per_replicate,
        mean_ks,
        max_density_deviation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentComparison {
    pub k: u32,
    pub provenance: Provenance,
    pub theory: f64,
    pub empirical: f64,
    pub rel_dev: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub k: u32,
    pub closed_form: Provenance,
    pub closed_form_value: f64,
    pub oracle_value: f64,
    pub empirical: f64,
    pub mismatch: bool,
    /// The empirical mean is closer to the oracle than to the closed form.
    pub empirical_sides_with_oracle: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentResults {
    pub n: usize,
    pub empirical_mean: Vec<f64>,
    pub standard_error: Vec<f64>,
    pub comparisons: Vec<MomentComparison>,
    pub discrepancies: Vec<Discrepancy>,
}

fn run_moments(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<MomentResults> {
    let spec = config.ensemble()?.spec(config.seed)?;
    let max_k = config.max_k;
    let spectra = replicate_spectra(&spec, config.replicates)?;
    let table: Vec<Vec<f64>> = spectra
        .iter()
        .map(|s| (0..=max_k).map(|k| empirical_moment(s, k)).collect())
        .collect();
    let reps = table.len() as f64;
    let mean: Vec<f64> = (0..=max_k as usize)
        .map(|k| table.iter().map(|row| row[k]).sum::<f64>() / reps)
        .collect();
    let standard_error: Vec<f64> = (0..=max_k as usize)
        .map(|k| {
            if table.len() < 2 {
                return f64::NAN;
            }
            let var = table.iter().map(|row| (row[k] - mean[k]).powi(2)).sum::<f64>() / (reps - 1.0);
            (var / reps).sqrt()
        })
        .collect();
    let theory = theoretical_sequences(&spec, max_k)?;
    let mut comparisons = Vec::new();
    for seq in &theory {
        for (k, &g) in seq.values.iter().enumerate() {
            comparisons.push(MomentComparison {
                k: k as u32,
                provenance: seq.provenance,
                theory: g,
                empirical: mean[k],
                rel_dev: (g != 0.0).then(|| (mean[k] - g) / g),
            });
        }
    }
    let oracle = theory.iter().find(|s| s.provenance == Provenance::WalkOracle);
    let closed = theory.iter().filter(|s| {
        matches!(s.provenance, Provenance::BipartitePrinted | Provenance::PropositionPrinted)
    });
    let mut discrepancies = Vec::new();
    if let Some(oracle) = oracle {
        for p in closed {
            for k in (2..=p.max_k()).step_by(2) {
                let (pv, ov) = (p.values[k], oracle.values[k]);
                discrepancies.push(Discrepancy {
                    k: k as u32,
                    closed_form: p.provenance,
                    closed_form_value: pv,
                    oracle_value: ov,
                    empirical: mean[k],
                    mismatch: (pv - ov).abs() > 1e-9 * ov.abs().max(1e-300),
                    empirical_sides_with_oracle: (mean[k] - ov).abs() < (mean[k] - pv).abs(),
                });
            }
        }
    }
    let empirical = MomentSequence::new(mean.clone(), Provenance::Empirical);
    let mut all: Vec<&MomentSequence> = vec![&empirical];
    all.extend(theory.iter());
    dir.write_with("moments.csv", |w| MomentSequence::write_csv(&all, w))?;
    dir.write_with("moments_by_replicate.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["replicate", "k", "value"])?;
        for (r, row) in table.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                c.write_record([r.to_string(), k.to_string(), format!("{v:.17e}")])?;
            }
        }
        c.flush()?;
        Ok(())
    })?;
    Ok(MomentResults {
        n: spec.n(),
        empirical_mean: mean,
        standard_error,
        comparisons,
        discrepancies,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StieltjesPoint {
    pub z: [f64; 2],
    pub empirical: [f64; 2],
    pub predicted: Option<[f64; 2]>,
    pub abs_diff: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StieltjesResults {
    pub n: usize,
    pub predicted_radius: Option<f64>,
    pub points: Vec<StieltjesPoint>,
}

fn run_stieltjes(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<StieltjesResults> {
    let spec = config.ensemble()?.spec(config.seed)?;
    let spectra = replicate_spectra(&spec, config.replicates)?;
    let radius = predicted_radius(&spec);
    let law = radius.map(SemicircleLaw::new).transpose()?;
    let mut points = Vec::new();
    for &[re, im] in &config.z_grid {
        let z = Complex64::new(re, im);
        let mut acc = Complex64::new(0.0, 0.0);
        for s in &spectra {
            acc += stieltjes_empirical(s, z)?;
        }
        let emp = acc / spectra.len() as f64;
        let pred = law.as_ref().map(|l| l.stieltjes(z)).transpose()?;
        points.push(StieltjesPoint {
            z: [re, im],
            empirical: [emp.re, emp.im],
            predicted: pred.map(|p| [p.re, p.im]),
            abs_diff: pred.map(|p| (p - emp).norm()),
        });
    }
    dir.write_with("stieltjes.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["re", "im", "empirical_re", "empirical_im", "predicted_re", "predicted_im", "abs_diff"])?;
        let f = |x: Option<f64>| x.map(|v| format!("{v:.17e}")).unwrap_or_default();
        for p in &points {
            c.write_record([
                format!("{:.17e}", p.z[0]),
                format!("{:.17e}", p.z[1]),
                format!("{:.17e}", p.empirical[0]),
                format!("{:.17e}", p.empirical[1]),
                f(p.predicted.map(|q| q[0])),
                f(p.predicted.map(|q| q[1])),
                f(p.abs_diff),
            ])?;
        }
        c.flush()?;
        Ok(())
    })?;
    Ok(StieltjesResults {
        n: spec.n(),
        predicted_radius: radius,
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkCountRow {
    pub k: usize,
    pub v: usize,
    pub shapes: u64,
    pub good_shapes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalanRow {
    pub k: usize,
    pub good_tree_shapes: u64,
    pub catalan: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub k: usize,
    pub n: usize,
    pub value: f64,
    pub exact: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkResults {
    pub counts: Vec<WalkCountRow>,
    pub catalan_identity: Vec<CatalanRow>,
    pub oracle: Vec<OracleRow>,
}

fn run_walks(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<WalkResults> {
    let k_max = config.walks.as_ref().map_or(4, |w| w.k);
    let mut counts = Vec::new();
    let mut longest = Vec::new();
    for k in 1..=k_max {
        for v in 1..=k {
            let shapes = enumerate_shapes(k, v)?;
            let good = shapes.iter().filter(|s| s.is_good_zero_mean()).count() as u64;
            counts.push(WalkCountRow {
                k,
                v,
                shapes: shapes.len() as u64,
                good_shapes: good,
            });
            if k == k_max && k <= SHAPES_CSV_MAX_K {
                longest.extend(shapes);
            }
        }
    }
    let catalan_identity = counts
        .iter()
        .filter(|r| r.k % 2 == 0 && r.v == r.k / 2 + 1)
        .map(|r| {
            let t = catalan((r.k / 2) as u32);
            CatalanRow {
                k: r.k,
                good_tree_shapes: r.good_shapes,
                equal: t == r.good_shapes.into(),
                catalan: t.to_string(),
            }
        })
        .collect();
    dir.write_with("walks.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["k", "v", "shapes", "good_shapes"])?;
        for r in &counts {
            c.write_record([r.k, r.v, r.shapes as usize, r.good_shapes as usize].map(|x| x.to_string()))?;
        }
        c.flush()?;
        Ok(())
    })?;
    if !longest.is_empty() {
        dir.write_with("shapes.csv", |w| write_shapes_csv(&longest, w))?;
    }
    let mut oracle = Vec::new();
    if let Some(e) = &config.ensemble {
        let spec = e.spec(config.seed)?;
        if spec.n() <= MAX_TRACE_N {
            let moments = (1..=k_max.min(MAX_TRACE_K))
                .map(|k| exact_expected_trace_moment(&spec, k))
                .collect::<Result<Vec<_>>>()?;
            oracle = moments
                .iter()
                .map(|t| OracleRow {
                    k: t.k,
                    n: t.n,
                    value: t.to_f64(),
                    exact: t.exact().map(|x| x.to_string()),
                })
                .collect();
            dir.write_with("oracle.csv", |w| write_oracle_csv(&moments, w))?;
        }
    }
    Ok(WalkResults {
        counts,
        catalan_identity,
        oracle,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HankelEntry {
    pub provenance: Provenance,
    pub report: HankelReport,
    /// Sign of the largest leading minor: -1, 0 or 1.
    pub top_minor_sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct HankelResults {
    pub k: usize,
    pub entries: Vec<HankelEntry>,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn run_hankel(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<HankelResults> {
    let spec = config.ensemble()?.spec(config.seed)?;
    let k = config.hankel.as_ref().map_or(3, |h| h.k);
    let sequences = theoretical_sequences(&spec, 2 * k as u32)?;
    let mut entries = Vec::new();
    for seq in sequences.iter().filter(|s| s.max_k() >= 2 * k) {
        let report = hankel_report(seq, k)?;
        entries.push(HankelEntry {
            provenance: seq.provenance,
            top_minor_sign: sign(report.leading_minors[k]),
            report,
        });
    }
    dir.write_with("hankel.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["provenance", "order", "minor"])?;
        for e in &entries {
            for (r, d) in e.report.leading_minors.iter().enumerate() {
                c.write_record([e.provenance.as_str().to_string(), r.to_string(), format!("{d:.17e}")])?;
            }
        }
        c.flush()?;
        Ok(())
    })?;
    Ok(HankelResults { k, entries })
}

#[derive(Clone, Debug, Serialize)]
pub struct CharFnResults {
    pub nuhat: f64,
    pub sigma: f64,
    pub t_max: f64,
    pub witness: Option<f64>,
    pub witness_value: Option<f64>,
    pub minimum: f64,
}

fn run_charfn(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<CharFnResults> {
    let c = config
        .charfn
        .as_ref()
        .ok_or_else(|| Error::config("charfn", "missing section"))?;
    let nuhat = c.nuhat_sq.sqrt();
    let steps = (c.t_max / c.t_step).floor() as usize;
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = i as f64 * c.t_step;
        rows.push((t, pseudo_char(t, nuhat, c.sigma)?, pseudo_char_unnormalised(t, nuhat, c.sigma)?));
    }
    let witness = find_negativity_witness(nuhat, c.sigma, c.t_max)?;
    let witness_value = witness.map(|t| pseudo_char(t, nuhat, c.sigma)).transpose()?;
    dir.write_with("charfn.csv", |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "value", "unnormalised"])?;
        for (t, v, d) in &rows {
            out.write_record([format!("{t:.17e}"), format!("{v:.17e}"), format!("{d:.17e}")])?;
        }
        out.flush()?;
        Ok(())
    })?;
    Ok(CharFnResults {
        nuhat,
        sigma: c.sigma,
        t_max: c.t_max,
        witness,
        witness_value,
        minimum: rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EnergyResults {
    pub n: usize,
    pub p: f64,
    pub m: usize,
    pub estimates: Vec<EnergyEstimate>,
    pub mean_normalized: f64,
    pub sd_normalized: Option<f64>,
    pub predicted_normalized: Option<f64>,
    pub rel_dev_of_mean: Option<f64>,
}

fn run_energy(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<EnergyResults> {
    let g = config.graph()?;
    let partition = g.partition()?;
    let estimates: Vec<EnergyEstimate> = (0..config.replicates as u64)
        .into_par_iter()
        .map(|r| estimate_energy(&partition, g.p, config.seed, r))
        .collect::<Result<_>>()?;
    let reps = estimates.len() as f64;
    let mean = estimates.iter().map(|e| e.normalized).sum::<f64>() / reps;
    let sd = (estimates.len() > 1).then(|| {
        (estimates.iter().map(|e| (e.normalized - mean).powi(2)).sum::<f64>() / (reps - 1.0)).sqrt()
    });
    let n = partition.n();
    let predicted = estimates[0].prediction.map(|q| q / (n as f64).powf(1.5));
    dir.write_with("energy.csv", |w| write_energy_csv(&estimates, w))?;
    let first = sample_graph(&partition, g.p, config.seed, 0)?;
    dir.write_with("edges.csv", |w| write_edges_csv(&first, w))?;
    Ok(EnergyResults {
        n,
        p: g.p,
        m: partition.num_parts(),
        mean_normalized: mean,
        sd_normalized: sd,
        rel_dev_of_mean: predicted.map(|q| (mean - q) / q),
        predicted_normalized: predicted,
        estimates,
    })
}

/// Multiplicative slack on the energy sandwich for finite `n`.
pub const SANDWICH_SLACK: f64 = 0.1;

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionResults {
    pub check: DecompositionReport,
    pub bounds: Option<EnergyBounds>,
    /// `lower (1 - slack) <= E(A) <= upper (1 + slack)`.
    pub within_bounds: Option<bool>,
}

fn run_decomposition(config: &ExperimentConfig, dir: &mut OutputDir) -> Result<DecompositionResults> {
    let g = config.graph()?;
    let partition = g.partition()?;
    let check = energy_decomposition_check(&partition, &g.large_parts, g.p, config.seed)?;
    let bounds = if g.large_parts.is_empty() {
        None
    } else {
        Some(energy_bounds_unbalanced(partition.n(), &partition.fractions(), &g.large_parts, g.p)?)
    };
    let within_bounds = bounds.map(|b| {
        check.energy_a >= b.lower * (1.0 - SANDWICH_SLACK) && check.energy_a <= b.upper * (1.0 + SANDWICH_SLACK)
    });
    dir.write_with("decomposition.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["energy_a", "energy_x_prime", "energy_d", "lower", "upper", "chain_holds"])?;
        let f = |x: Option<f64>| x.map(|v| format!("{v:.17e}")).unwrap_or_default();
        c.write_record([
            format!("{:.17e}", check.energy_a),
            format!("{:.17e}", check.energy_x_prime),
            format!("{:.17e}", check.energy_d),
            f(bounds.map(|b| b.lower)),
            f(bounds.map(|b| b.upper)),
            check.holds.to_string(),
        ])?;
        c.flush()?;
        Ok(())
    })?;
    Ok(DecompositionResults {
        check,
        bounds,
        within_bounds,
    })
}
