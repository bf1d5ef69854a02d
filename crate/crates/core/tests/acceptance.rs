//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p rmtlab-core --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use rmtlab::ensemble::{make_partition, sample_matrix, scale_matrix};
use rmtlab::experiment::{run_experiment, theoretical_sequences, ExperimentConfig, ExperimentKind};
use rmtlab::graphenergy::{
    energy_bounds_unbalanced, energy_decomposition_check, estimate_energy, kyfan_check,
    predicted_energy_gnp, predicted_energy_multipartite,
};
use rmtlab::laws::{
    catalan_by_recursion, find_negativity_witness, gamma_bipartite_printed, gamma_main_exact,
    gamma_proposition_printed, hankel_report, pseudo_char, semicircle_cdf, MomentSequence, Provenance,
};
use rmtlab::rng::TrialRng;
use rmtlab::spectral::{
    check_rank_inequality, check_stieltjes_perturbation, eigenvalues_sym, empirical_moment, esd,
    ks_distance,
};
use rmtlab::walks::{exact_expected_trace_moment, exact_fraction, good_shape_count, limit_gamma_walks};
use rmtlab::{EnsembleSpec, EntryLaw, PartitionSpec, SymmetricMatrix};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn r(n: i64, d: i64) -> BigRational {
    exact_fraction(n, d)
}

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn rademacher_wigner(n: usize, seed: u64) -> EnsembleSpec {
    EnsembleSpec::wigner(n, EntryLaw::Rademacher, seed).unwrap()
}

fn uniform_pm1() -> EntryLaw {
    EntryLaw::UniformInterval { lo: -1.0, hi: 1.0 }
}

fn spectrum_of(spec: &EnsembleSpec, replicate: u64) -> rmtlab::Spectrum {
    eigenvalues_sym(&scale_matrix(&sample_matrix(spec, replicate))).unwrap()
}

fn c01_catalan() -> Outcome {
    let start = Instant::now();
    let rec = catalan_by_recursion(20);
    let mut ok = rec.len() == 21;
    for k in 0..=20u32 {
        let closed = factorial(2 * k) / (factorial(k) * factorial(k + 1));
        ok &= rec[k as usize] == closed;
    }
    let t = start.elapsed();
    outcome(
        ok && within(Duration::from_secs(1), t),
        format!("k <= 20 exact, T_20 = {}, {:.3} s", rec[20], t.as_secs_f64()),
    )
}

fn c02_good_walks() -> Outcome {
    let start = Instant::now();
    let expect = [(2, 2, 1), (3, 4, 2), (4, 6, 5), (5, 8, 14)];
    let got: Vec<u64> = expect
        .iter()
        .map(|&(v, k, _)| good_shape_count(k, v, true).unwrap())
        .collect();
    let ok = expect.iter().zip(&got).all(|(e, g)| e.2 == *g);
    let t = start.elapsed();
    outcome(
        ok && within(Duration::from_secs(30), t),
        format!("g(2,2), g(3,4), g(4,6), g(5,8) = {got:?}, {:.3} s", t.as_secs_f64()),
    )
}

fn c03_oracle_vs_monte_carlo() -> Outcome {
    let start = Instant::now();
    let n = 6;
    let reps = 10_000u64;
    let half = PartitionSpec::from_sizes(vec![3, 3]).unwrap();
    let ensembles = [
        ("wigner", rademacher_wigner(n, 31)),
        (
            "bipartite_uniform",
            EnsembleSpec::new(half.clone(), uniform_pm1(), EntryLaw::Rademacher, 32).unwrap(),
        ),
        (
            "bipartite_zero",
            EnsembleSpec::new(half, EntryLaw::ConstantZero, EntryLaw::Rademacher, 33).unwrap(),
        ),
    ];
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut deterministic = 0;
    for (_, spec) in &ensembles {
        let samples: Vec<[f64; 4]> = (0..reps)
            .map(|rep| {
                let s = spectrum_of(spec, rep);
                [1, 2, 3, 4].map(|k| empirical_moment(&s, k))
            })
            .collect();
        for k in 1..=4usize {
            let exact = exact_expected_trace_moment(spec, k).unwrap().to_f64();
            let xs: Vec<f64> = samples.iter().map(|row| row[k - 1]).collect();
            let mean = xs.iter().sum::<f64>() / reps as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
            let se = (var / reps as f64).sqrt();
            // Some moments do not vary at all (Rademacher M2 = 1/4); their
            // standard error is rounding noise.
            if se < 1e-12 {
                deterministic += 1;
                ok &= (mean - exact).abs() <= 1e-12;
            } else {
                worst = worst.max((mean - exact).abs() / se);
                ok &= (mean - exact).abs() <= 4.0 * se;
            }
        }
    }
    let t = start.elapsed();
    outcome(
        ok && within(Duration::from_secs(120), t),
        format!(
            "3 ensembles x k = 1..4, worst |z| = {worst:.2} (limit 4), {deterministic} constant moments exact to 1e-12, {:.1} s",
            t.as_secs_f64()
        ),
    )
}

fn ks_against(spec: &EnsembleSpec, radius: f64) -> (f64, rmtlab::Spectrum) {
    let s = spectrum_of(spec, 0);
    let ks = ks_distance(&esd(&s), |x| semicircle_cdf(x, radius).unwrap());
    (ks, s)
}

fn c04_wigner() -> Outcome {
    let start = Instant::now();
    let (ks, s) = ks_against(&rademacher_wigner(2000, 41), 1.0);
    let m2 = empirical_moment(&s, 2);
    let m4 = empirical_moment(&s, 4);
    let t = start.elapsed();
    let ok = ks < 0.05
        && (m2 - 0.25).abs() < 0.0125
        && (m4 - 0.125).abs() < 0.0125
        && within(Duration::from_secs(60), t);
    outcome(ok, format!("n = 2000: KS = {ks:.4}, M2 = {m2:.5}, M4 = {m4:.5}, {:.1} s", t.as_secs_f64()))
}

fn c05_balanced_bipartite() -> Outcome {
    let part = make_partition(2000, &[0.5, 0.5]).unwrap();
    let spec = EnsembleSpec::new(part, uniform_pm1(), EntryLaw::Rademacher, 51).unwrap();
    let radius = (2.0f64 / 3.0).sqrt();
    let (ks, _) = ks_against(&spec, radius);
    outcome(ks < 0.05, format!("n = 2000, radius sqrt(2/3): KS = {ks:.4}"))
}

fn c06_vanishing_parts() -> Outcome {
    let part = PartitionSpec::uniform_parts(2000, 2).unwrap();
    let spec = EnsembleSpec::new(part, uniform_pm1(), EntryLaw::Rademacher, 61).unwrap();
    let (ks, _) = ks_against(&spec, 1.0);
    outcome(ks < 0.05, format!("n = 2000, 1000 parts of size 2, radius 1: KS = {ks:.4}"))
}

fn c07_limit_cross_check() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    for m in 2..=5usize {
        let fr = vec![r(1, m as i64); m];
        for (s1, s2) in [(r(1, 3), r(1, 1)), (r(0, 1), r(1, 1)), (r(2, 5), r(7, 3))] {
            for k in [2u32, 4, 6, 8] {
                let w = limit_gamma_walks(&fr, &s1, &s2, k, false).unwrap();
                ok &= w == gamma_main_exact(k, m, &s1, &s2).unwrap();
                checked += 1;
            }
        }
    }
    let general = [
        vec![r(4, 5), r(1, 5)],
        vec![r(1, 2), r(1, 3), r(1, 6)],
        vec![r(3, 5), r(1, 10), r(1, 10), r(1, 10), r(1, 10)],
        vec![r(7, 10), r(1, 10), r(1, 10), r(1, 10)],
    ];
    let s2 = r(1, 1);
    for fr in &general {
        let w = limit_gamma_walks(fr, &BigRational::one(), &s2, 2, true).unwrap();
        let sum_sq: BigRational = fr.iter().map(|f| f * f).sum();
        let expect = (BigRational::one() - sum_sq) * &s2 / r(4, 1);
        ok &= w == expect;
        // Closed-form equal-tail gamma_2 = (nu1 a + a b) / 4 with a = (m-1) nu2, b = 1 - nu2.
        let tail_equal = fr[1..].windows(2).all(|x| x[0] == x[1]);
        if fr.len() >= 3 && tail_equal {
            let m = fr.len();
            let a = r(m as i64 - 1, 1) * &fr[1];
            let b = BigRational::one() - &fr[1];
            let closed = (&fr[0] * &a + &a * &b) / r(4, 1);
            ok &= closed == w;
            let float = gamma_proposition_printed(1, m, fr[0].to_f64().unwrap(), fr[1].to_f64().unwrap()).unwrap();
            ok &= (float - w.to_f64().unwrap()).abs() < 1e-15;
        }
        checked += 1;
    }
    outcome(ok, format!("{checked} exact rational identities"))
}

fn c08_discrepancy_ledger() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_json(
        r#"{"seed": 81, "replicates": 1, "max_k": 4,
            "ensemble": {"n": 2000, "fractions": [0.8, 0.2],
                         "law_intra": {"kind": "constant_zero"},
                         "law_cross": {"kind": "rademacher"}}}"#,
    )
    .unwrap();
    let cfg = ExperimentConfig {
        kind: Some(ExperimentKind::Moments),
        ..cfg
    };
    let report = run_experiment(&cfg, dir.path()).unwrap();
    let res = &report.results;
    let oracle_exact = [
        (2usize, limit_gamma_walks(&[r(4, 5), r(1, 5)], &BigRational::zero(), &BigRational::one(), 2, true).unwrap()),
        (4usize, limit_gamma_walks(&[r(4, 5), r(1, 5)], &BigRational::zero(), &BigRational::one(), 4, true).unwrap()),
    ];
    let mut ok = oracle_exact[0].1 == r(2, 25) && oracle_exact[1].1 == r(1, 50);
    let closed = [
        gamma_bipartite_printed(2, 0.8, 0.2, 1.0).unwrap(),
        gamma_bipartite_printed(4, 0.8, 0.2, 1.0).unwrap(),
    ];
    ok &= (closed[0] - 0.25).abs() < 1e-12 && (closed[1] - 0.04).abs() < 1e-12;
    let mut parts = Vec::new();
    for (k, exact) in &oracle_exact {
        let d = res["discrepancies"]
            .as_array()
            .into_iter()
            .flatten()
            .find(|d| d["k"] == *k as u64 && d["closed_form"] == "bipartite_printed");
        let Some(d) = d else {
            return outcome(false, format!("no discrepancy row recorded for k = {k}"));
        };
        let closed_form_value = d["closed_form_value"].as_f64().unwrap();
        let oracle = exact.to_f64().unwrap();
        let emp = res["empirical_mean"][*k].as_f64().unwrap();
        let near_oracle = (emp - oracle).abs() <= 0.1 * oracle;
        let near_closed = (emp - closed_form_value).abs() <= 0.1 * closed_form_value;
        ok &= d["mismatch"] == true
            && (d["oracle_value"].as_f64().unwrap() - oracle).abs() < 1e-15
            && (closed_form_value - closed[k / 2 - 1]).abs() < 1e-15
            && near_oracle
            && !near_closed;
        parts.push(format!("M{k} = {emp:.5} vs oracle {oracle} / closed {closed_form_value:.2}"));
    }
    outcome(ok, format!("mismatch flagged; {}", parts.join("; ")))
}

fn c09_hankel() -> Outcome {
    let mut rng = TrialRng::new(91);
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for _ in 0..10 {
        let m = rng.index(1, 7);
        let s1 = rng.range(0.0, 2.0);
        let s2 = rng.range(0.1, 2.0);
        let seq = MomentSequence::try_from_fn(10, Provenance::MainTheorem, |k| {
            if m == 1 {
                Ok(rmtlab::laws::gamma_uniform(k, s1))
            } else {
                rmtlab::laws::gamma_main(k, m, s1, s2)
            }
        })
        .unwrap();
        for k in 1..=5 {
            let h = hankel_report(&seq, k).unwrap();
            ok &= h.psd;
            worst = worst.min(h.min_eigenvalue);
        }
    }
    let part = make_partition(1000, &[0.8, 0.1, 0.1]).unwrap();
    let spec = EnsembleSpec::new(part, EntryLaw::ConstantZero, EntryLaw::Rademacher, 0).unwrap();
    let seqs = theoretical_sequences(&spec, 6).unwrap();
    let det3 = |p: Provenance| {
        seqs.iter()
            .find(|s| s.provenance == p)
            .map(|s| hankel_report(s, 3).unwrap().leading_minors[3])
    };
    let (Some(closed), Some(oracle)) = (det3(Provenance::PropositionPrinted), det3(Provenance::WalkOracle)) else {
        return outcome(false, "missing sequence for m = 3");
    };
    let sign = |x: f64| if x < 0.0 { "negative" } else if x > 0.0 { "positive" } else { "zero" };
    outcome(
        ok,
        format!(
            "mixing-formula sequences PSD (min eigenvalue {worst:.2e}); m = 3, nu1 = 0.8: det D3 closed = {closed:.3e} ({}), oracle = {oracle:.3e} ({})",
            sign(closed),
            sign(oracle)
        ),
    )
}

fn c10_negativity() -> Outcome {
    let start = Instant::now();
    let nuhat = 0.3f64.sqrt();
    let w = find_negativity_witness(nuhat, 1.0, 60.0).unwrap();
    let t = start.elapsed();
    match w {
        Some(x) => {
            let v = pseudo_char(x, nuhat, 1.0).unwrap();
            outcome(
                x <= 60.0 && v < -1.0 && within(Duration::from_secs(1), t),
                format!("t = {x:.2}, value = {v:.5}, {:.3} s", t.as_secs_f64()),
            )
        }
        None => outcome(false, "no witness found"),
    }
}

fn random_symmetric(rng: &mut TrialRng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_upper_fn(n, |_, _| rng.range(-1.0, 1.0))
}

fn c11_inequalities() -> Outcome {
    let mut rng = TrialRng::new(111);
    let mut violations = [0usize; 3];
    for _ in 0..50 {
        let n = rng.index(5, 60);
        // Rank: V differs from U in a few rows and columns.
        let u = random_symmetric(&mut rng, n);
        let mut v = u.clone();
        let touched = rng.index(0, 4);
        for _ in 0..touched {
            let i = rng.index(0, n);
            for j in 0..n {
                v.set(i, j, rng.range(-2.0, 2.0));
            }
        }
        if !check_rank_inequality(&u, &v).unwrap().holds {
            violations[0] += 1;
        }
        // Stieltjes perturbation.
        let a = random_symmetric(&mut rng, n);
        let scale = rng.range(0.0, 0.5);
        let d = SymmetricMatrix::from_upper_fn(n, |_, _| if rng.uniform() < 0.2 { rng.range(-scale, scale) } else { 0.0 });
        let z = num_complex::Complex64::new(rng.range(-3.0, 3.0), rng.range(0.05, 2.0));
        if !check_stieltjes_perturbation(&a, &d, z).unwrap().holds {
            violations[1] += 1;
        }
        // Ky Fan.
        let x = random_symmetric(&mut rng, n);
        let y = random_symmetric(&mut rng, n).scaled(rng.range(0.0, 3.0));
        if !kyfan_check(&x, &y).unwrap().holds {
            violations[2] += 1;
        }
    }
    outcome(
        violations == [0, 0, 0],
        format!("50 trials each; violations rank/stieltjes/kyfan = {violations:?}"),
    )
}

fn c12_concentration() -> Outcome {
    let vars: Vec<f64> = [50usize, 100, 200]
        .iter()
        .map(|&n| {
            let spec = rademacher_wigner(n, 120 + n as u64);
            let xs: Vec<f64> = (0..200).map(|rep| empirical_moment(&spectrum_of(&spec, rep), 4)).collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
        })
        .collect();
    let ratios = [vars[0] / vars[1], vars[1] / vars[2]];
    outcome(
        ratios.iter().all(|&q| q >= 2.5),
        format!("Var M4 = {:.3e}, {:.3e}, {:.3e}; ratios {:.2}, {:.2}", vars[0], vars[1], vars[2], ratios[0], ratios[1]),
    )
}

fn mean_normalized(partition: &PartitionSpec, p: f64, seed: u64) -> f64 {
    let xs: Vec<f64> = (0..5).map(|rep| estimate_energy(partition, p, seed, rep).unwrap().normalized).collect();
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn c13_energy() -> Outcome {
    let start = Instant::now();
    let n = 1500;
    let scale = (n as f64).powf(1.5);
    let complete = PartitionSpec::singletons(n).unwrap();
    let bipartite = make_partition(n, &[0.5, 0.5]).unwrap();
    let cases = [
        ("G(1/2)", mean_normalized(&complete, 0.5, 131), 4.0 / (3.0 * PI)),
        ("G(0.2)", mean_normalized(&complete, 0.2, 132), 8.0 / (3.0 * PI) * 0.4),
        ("G_2(1/2)", mean_normalized(&bipartite, 0.5, 133), 8.0 / (3.0 * PI) * (1.0f64 / 8.0).sqrt()),
    ];
    // The library predictions must be the same closed forms.
    let mut ok = (predicted_energy_gnp(n, 0.5).unwrap() / scale - cases[0].2).abs() < 1e-12
        && (predicted_energy_gnp(n, 0.2).unwrap() / scale - cases[1].2).abs() < 1e-12
        && (predicted_energy_multipartite(n, 2, 0.5).unwrap() / scale - cases[2].2).abs() < 1e-12;
    let mut parts = Vec::new();
    for (name, got, target) in &cases {
        let dev = (got - target) / target;
        ok &= dev.abs() <= 0.05;
        parts.push(format!("{name} {got:.4} vs {target:.4} ({:+.1}%)", 100.0 * dev));
    }
    let t = start.elapsed();
    ok &= within(Duration::from_secs(300), t);
    outcome(ok, format!("{}, {:.1} s", parts.join("; "), t.as_secs_f64()))
}

fn c14_unbalanced_energy() -> Outcome {
    let n = 1200;
    let fractions = [0.6, 0.2, 0.2];
    let part = make_partition(n, &fractions).unwrap();
    let large = [0, 1, 2];
    let report = energy_decomposition_check(&part, &large, 0.5, 141).unwrap();
    let bounds = energy_bounds_unbalanced(n, &fractions, &large, 0.5).unwrap();
    let (lo, hi) = (bounds.lower * 0.9, bounds.upper * 1.1);
    let e = report.energy_a;
    let ok = e >= lo && e <= hi && report.holds && report.d_block_diagonal;
    outcome(
        ok,
        format!(
            "E(A) = {e:.1} in [{lo:.1}, {hi:.1}]; chain E(A)+E(D) = {:.1} >= E(X') = {:.1}, E(X')+E(D) = {:.1} >= E(A)",
            report.lower.lhs, report.lower.rhs, report.upper.lhs
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("catalan recursion equals closed form", c01_catalan),
        ("good-walk counts equal Catalan numbers", c02_good_walks),
        ("exact finite-n moments match Monte Carlo", c03_oracle_vs_monte_carlo),
        ("Wigner ESD and moments at n = 2000", c04_wigner),
        ("balanced bipartite ESD", c05_balanced_bipartite),
        ("vanishing parts ESD", c06_vanishing_parts),
        ("walk limits equal closed forms", c07_limit_cross_check),
        ("two-part discrepancy recorded, data side with oracle", c08_discrepancy_ledger),
        ("Hankel sanity and determinant signs", c09_hankel),
        ("pseudo characteristic function negativity", c10_negativity),
        ("perturbation inequality suites", c11_inequalities),
        ("fourth-moment concentration", c12_concentration),
        ("random graph energy", c13_energy),
        ("unbalanced energy sandwich and decomposition", c14_unbalanced_energy),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!(
        "acceptance: {}/{} passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
