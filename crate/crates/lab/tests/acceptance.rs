//! Acceptance suite. Runs every criterion in sequence (so the runtime bounds
//! are measured without contention), prints one PASS/FAIL line each, and
//! exits non-zero if any criterion fails.

use std::f64::consts::LN_10;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use ctm_core::calibrators::TwoLevel;
use ctm_core::conformal::pvalues_with_taus;
use ctm_core::engines::sleeper_chooser;
use ctm_core::model::generate_seeded;
use ctm_core::oracles::{inf_likelihood_ratio_trajectory, likelihood_ratio_trajectory};
use ctm_core::rng::{derive_seed, Stream};
use ctm_core::{conformal, BinarySequence, ExperimentConfig, PValueSequence, Process};
use ctm_lab::stats::{correlation, ks_uniform, mean, median, std_dev};
use ctm_lab::sweep::{sweep_seeds, SweepTable};
use ctm_lab::validate::validate_martingale;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_secs: f64) -> bool {
    elapsed.as_secs_f64() < limit_secs
}

// 1. unit integral of f_{a,b} on the G = 100 grid
fn calibrator_normalization() -> Outcome {
    let start = Instant::now();
    let cells = 10_000;
    let h = 1.0 / cells as f64;
    let mut worst_exact = 0f64;
    let mut worst_quad = 0f64;
    for i in 1..100 {
        for j in 1..100 {
            let f = TwoLevel::new(i as f64 / 100.0, j as f64 / 100.0).unwrap();
            worst_exact = worst_exact.max((f.integral() - 1.0).abs());
            let quad: f64 = (0..cells).map(|c| f.evaluate((c as f64 + 0.5) * h)).sum::<f64>() * h;
            worst_quad = worst_quad.max((quad - 1.0).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_exact <= 1e-12 && worst_quad <= 1e-6 && within(elapsed, 1.0),
        format!("max analytic error {worst_exact:.1e}, max midpoint-rule error {worst_quad:.1e}, {elapsed:.2?}"),
    )
}

// 2. closed-form p-values against counting, all binary sequences up to length 10
fn pvalue_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut stream = Stream::new(0, 1);
    let taus: Vec<f64> = (0..10).map(|_| stream.uniform()).collect();
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for len in 1..=10usize {
        for mask in 0u32..(1 << len) {
            let obs: Vec<u8> = (0..len).map(|i| ((mask >> i) & 1) as u8).collect();
            let seq = BinarySequence::new(obs.clone()).unwrap();
            let p = pvalues_with_taus(&seq, taus[..len].to_vec()).unwrap();
            for n in 1..=len {
                let current = obs[n - 1];
                let greater = obs[..n].iter().filter(|&&x| x > current).count();
                let ties = obs[..n].iter().filter(|&&x| x == current).count();
                let generic = (greater as f64 + taus[n - 1] * ties as f64) / n as f64;
                checked += 1;
                if generic.to_bits() != p.pvalues[n - 1].to_bits() {
                    mismatches += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && within(elapsed, 10.0),
        format!("{checked} p-values, {mismatches} mismatches, {elapsed:.2?}"),
    )
}

// 3. pooled p-values under IID data are uniform
fn uniformity_under_iid() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, pi) in [0.1, 0.25, 0.5].into_iter().enumerate() {
        let mut pooled = Vec::with_capacity(200 * 500);
        let mut firsts = Vec::new();
        let mut seconds = Vec::new();
        for run in 0..200u64 {
            let seed = derive_seed(1000 + k as u64, run);
            let config = ExperimentConfig {
                pi0: pi,
                pi1: pi,
                n_total: 500,
                n_pre: 500,
                seed,
                ..ExperimentConfig::default()
            };
            let seq = generate_seeded(&config).unwrap();
            let p = conformal::pvalue_sequence_seeded(&seq, seed).unwrap();
            for w in p.pvalues.windows(2).step_by(2) {
                firsts.push(w[0]);
                seconds.push(w[1]);
            }
            pooled.extend(p.pvalues);
        }
        let ks = ks_uniform(&pooled);
        let corr = correlation(&firsts, &seconds);
        let corr_se = 1.0 / (firsts.len() as f64).sqrt();
        pass &= ks.p_value > 0.01 && corr.abs() <= 3.0 * corr_se;
        parts.push(format!(
            "pi={pi}: KS D={:.4} p={:.3}, lag-1 corr {corr:+.4} (3SE {:.4})",
            ks.statistic,
            ks.p_value,
            3.0 * corr_se
        ));
    }
    let elapsed = start.elapsed();
    outcome(pass && within(elapsed, 30.0), format!("{}; {elapsed:.2?}", parts.join("; ")))
}

// 4. E[S_n] = 1 for the three genuine martingales
fn martingale_property() -> Outcome {
    let start = Instant::now();
    let paper = ExperimentConfig::default();
    let small_grid = ExperimentConfig {
        grid_size: 10,
        share_rate: 0.01,
        ..paper
    };
    let runs = [
        validate_martingale(Process::SimpleJumper, 0.5, 100, 100_000, 1, &paper),
        validate_martingale(Process::SleeperChooser, 0.25, 20, 10_000, 2, &small_grid),
        validate_martingale(Process::OptimalCtm, 0.25, 5100, 10_000, 3, &paper),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for r in runs {
        let r = r.unwrap();
        pass &= r.pass;
        parts.push(format!("{} mean {:.4} ± {:.4} (SE)", r.engine, r.mean, r.std_error));
    }
    // log10 of prod_n E[f_n(U)^2], the second moment of optimal_ctm's S_N
    let second_moment: f64 = (5001..=5100)
        .map(|n| {
            let f = ctm_core::calibrators::optimal_betting(n, &paper).unwrap();
            let (lo, up) = f.levels();
            let t = f.threshold();
            (t * lo * lo + (1.0 - t) * up * up).log10()
        })
        .sum();
    let elapsed = start.elapsed();
    outcome(
        pass && within(elapsed, 120.0),
        format!(
            "{}; optimal_ctm E[S_N^2] = 10^{second_moment:.1}; {elapsed:.2?}",
            parts.join("; ")
        ),
    )
}

fn grid_cell_factor(a: f64, b: f64, p: f64) -> f64 {
    if p <= a {
        b / a
    } else {
        (1.0 - b) / (1.0 - a)
    }
}

/// Capital of the Markov-chain mixture: sleep (factor 1) at step 1, activate
/// at step t >= 2 with probability (1-R)^(t-2) R into a uniform grid cell.
fn markov_mixture(p: &[f64], r: f64, g: usize) -> f64 {
    let n = p.len();
    let grid: Vec<f64> = (1..g).map(|i| i as f64 / g as f64).collect();
    let cell_weight = 1.0 / (grid.len() * grid.len()) as f64;
    let mut total = (1.0 - r).powi(n as i32 - 1);
    for t in 2..=n {
        let activation = (1.0 - r).powi(t as i32 - 2) * r;
        for &a in &grid {
            for &b in &grid {
                let product: f64 = p[t - 1..].iter().map(|&x| grid_cell_factor(a, b, x)).product();
                total += activation * cell_weight * product;
            }
        }
    }
    total
}

// 5. Sleeper/Chooser equals the grid mixture over the sleeping Markov chain
fn sleeper_chooser_mixture() -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    let mut cases = 0;
    for g in [2, 3] {
        for r in [0.1, 0.5] {
            for seed in 0..50u64 {
                let mut s = Stream::new(seed, 2);
                let len = 1 + (seed % 8) as usize;
                let mut p: Vec<f64> = (0..len).map(|_| s.uniform()).collect();
                if seed % 7 == 0 {
                    p[0] = 1.0 / g as f64;
                }
                let engine = sleeper_chooser(
                    &PValueSequence {
                        pvalues: p.clone(),
                        taus: p.clone(),
                    },
                    r,
                    g,
                )
                .unwrap();
                for n in 1..=len {
                    let oracle = markov_mixture(&p[..n], r, g);
                    let got = 10f64.powf(engine.log10_values[n - 1]);
                    worst = worst.max(((got - oracle) / oracle).abs());
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && within(elapsed, 10.0),
        format!("{cases} prefixes, max relative error {worst:.2e}, {elapsed:.2?}"),
    )
}

// 6. oracle magnitudes at the paper's scale
fn oracle_magnitudes() -> Outcome {
    let start = Instant::now();
    let config = ExperimentConfig::default();
    let seeds = 200u64;
    let mut lr = Vec::new();
    let mut inf = Vec::new();
    for seed in 0..seeds {
        let c = ExperimentConfig { seed, ..config };
        let seq = generate_seeded(&c).unwrap();
        lr.push(likelihood_ratio_trajectory(&seq, &c).unwrap().final_log10());
        inf.push(inf_likelihood_ratio_trajectory(&seq, &c).unwrap().final_log10());
    }
    let lr_center = 5000.0 * (0.4 * 4f64.ln() + 0.6 * (0.6f64 / 0.9).ln()) / LN_10;
    let h = |p: f64| p * p.ln() + (1.0 - p) * (1.0 - p).ln();
    let inf_center = (5000.0 * h(0.1) + 5000.0 * h(0.4) - 10_000.0 * h(0.25)) / LN_10;
    let se = |xs: &[f64]| std_dev(xs) / (xs.len() as f64).sqrt();
    let (lr_mean, lr_se) = (mean(&lr), se(&lr));
    let (inf_mean, inf_se, inf_sd) = (mean(&inf), se(&inf), std_dev(&inf));
    let paper_seed0 = 258.93;
    let pass = (lr_mean - lr_center).abs() <= 3.0 * lr_se
        && (inf_mean - inf_center).abs() <= 3.0 * inf_se
        && (paper_seed0 - inf_mean).abs() <= 2.0 * inf_sd;
    let elapsed = start.elapsed();
    outcome(
        pass && within(elapsed, 30.0),
        format!(
            "{seeds} seeds: lr mean {lr_mean:.2} (center {lr_center:.2}, 3SE {:.2}); inf_lr mean {inf_mean:.2} \
             (center {inf_center:.2}, 3SE {:.2}); reference 258.93 is {:.2} sd from the mean; {elapsed:.2?}",
            3.0 * lr_se,
            3.0 * inf_se,
            (paper_seed0 - inf_mean).abs() / inf_sd
        ),
    )
}

fn differences(table: &SweepTable, a: Process, b: Process) -> Vec<f64> {
    let xa = table.column(a).unwrap();
    let xb = table.column(b).unwrap();
    xa.iter().zip(&xb).map(|(x, y)| x - y).collect()
}

// 7. inf_lr > pseudo_ctm > optimal_ctm at the paper's scale
fn conformal_vs_oracle_ordering(table: &SweepTable) -> Outcome {
    let gap = differences(table, Process::InfLikelihoodRatio, Process::PseudoCtm);
    let lift = differences(table, Process::PseudoCtm, Process::OptimalCtm);
    let gap_median = median(&gap);
    let share = lift.iter().filter(|&&d| d >= 0.0).count() as f64 / lift.len() as f64;
    outcome(
        gap_median >= 1.0 && share >= 0.7,
        format!(
            "{} seeds: median(inf_lr - pseudo_ctm) = {gap_median:.3} (needs >= 1), pseudo_ctm >= optimal_ctm in {:.0}% \
             (needs >= 70%), median(pseudo_ctm - optimal_ctm) = {:.3}; reference finals 255.84 / 256.89",
            gap.len(),
            100.0 * share,
            median(&lift)
        ),
    )
}

// 8. Sleeper/Chooser at R = 0.001, G = 100
fn sleeper_chooser_at_scale(table: &SweepTable) -> Outcome {
    let sc = table.column(Process::SleeperChooser).unwrap();
    let gap = differences(table, Process::InfLikelihoodRatio, Process::SleeperChooser);
    let below_oracle = gap.iter().all(|&d| d >= 0.0);

    let config = ExperimentConfig::default();
    let seq = generate_seeded(&config).unwrap();
    let p = conformal::pvalue_sequence_seeded(&seq, config.seed).unwrap();
    let start = Instant::now();
    let t = sleeper_chooser(&p, config.share_rate, config.grid_size).unwrap();
    let elapsed = start.elapsed();
    let pass = median(&sc) >= 150.0 && below_oracle && within(elapsed, 5.0) && t.len() == 10_000;
    outcome(
        pass,
        format!(
            "{} seeds: median final {:.2} (needs >= 150), below inf_lr in every seed: {below_oracle}; \
             single run {elapsed:.2?}; reference 194.89",
            sc.len(),
            median(&sc)
        ),
    )
}

// 9. Simple Jumper at J = 0.01
fn simple_jumper_at_scale(table: &SweepTable) -> Outcome {
    let sj = table.column(Process::SimpleJumper).unwrap();
    let share = sj.iter().filter(|&&v| v > 2.0).count() as f64 / sj.len() as f64;
    outcome(
        share >= 0.9,
        format!(
            "{} seeds: final > 100 in {:.0}% (needs >= 90%), median log10 final {:.2}",
            sj.len(),
            100.0 * share,
            median(&sj)
        ),
    )
}

// 10. repeated `simulate` runs are byte-identical
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let output = Command::new(env!("CARGO_BIN_EXE_ctm-lab"))
            .args(["simulate", "--seed", "17", "--out-dir", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(output.status.success());
        out
    };
    let a = run("a");
    let b = run("b");
    let mut names: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let identical = names
        .iter()
        .all(|n| fs::read(a.join(n)).unwrap() == fs::read(b.join(n)).unwrap());
    outcome(
        identical && names.len() == 7,
        format!("{} files compared, identical: {identical}", names.len()),
    )
}

fn main() {
    let paper_sweep = sweep_seeds(&ExperimentConfig::default(), &(0..20).collect::<Vec<_>>(), &Process::ALL)
        .expect("paper-scale sweep");

    let criteria: Vec<Criterion> = vec![
        ("C1 calibrator normalization", Box::new(calibrator_normalization)),
        ("C2 p-value oracle equivalence", Box::new(pvalue_oracle_equivalence)),
        ("C3 uniformity under IID", Box::new(uniformity_under_iid)),
        ("C4 martingale property", Box::new(martingale_property)),
        ("C5 Sleeper/Chooser = grid mixture", Box::new(sleeper_chooser_mixture)),
        ("C6 oracle magnitudes", Box::new(oracle_magnitudes)),
        ("C7 conformal-vs-oracle ordering", Box::new(|| conformal_vs_oracle_ordering(&paper_sweep))),
        ("C8 Sleeper/Chooser at paper config", Box::new(|| sleeper_chooser_at_scale(&paper_sweep))),
        ("C9 Simple Jumper at paper config", Box::new(|| simple_jumper_at_scale(&paper_sweep))),
        ("C10 determinism", Box::new(determinism)),
    ];

    let mut failures = 0;
    for (name, check) in &criteria {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
