//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::process::Command;
use std::time::{Duration, Instant};

use hcran_core::channel::{draw_channel, CVec};
use hcran_core::precoding::{compute_sinr, mrt_precoder, zf_with_nulling};
use hcran_core::{run_drop, run_sweep, FronthaulParams, LinkReport, Mode, ScenarioConfig, SweepResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const IQ_EXAMPLE_TOL: f64 = 1e-12;
const IDENTITY_PAIRS: usize = 1000;
const SWEEP_COUNTS: [usize; 5] = [0, 10, 20, 30, 40];
const SWEEP_DROPS: usize = 100;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);
const AFFINE_TOL: f64 = 1e-9;
const PRECODER_INSTANCES: usize = 1000;
const LEAKAGE_TOL: f64 = 1e-9;
const POWER_TOL: f64 = 1e-9;
const RANDOM_DIRECTIONS: usize = 1000;
const MRT_SLACK: f64 = 1e-12;
const ORACLE_INSTANCES: u64 = 5;
const ORACLE_TOL: f64 = 1e-9;
const BOUNDARY_DROPS: usize = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    oracle::relative_error(a, b)
}

fn iq_example() -> Outcome {
    let got = FronthaulParams::default().r_iq(64);
    let err = rel(got, 78.6432e9);
    Outcome::new(err <= IQ_EXAMPLE_TOL, format!("r_iq(64) = {got:.6e} b/s, rel err {err:.1e}"))
}

fn le_csi_identity() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let mut mismatches = 0;
    for i in 0..IDENTITY_PAIRS {
        let m = rng.gen_range(1..=1024);
        let k = rng.gen_range(1..=64);
        // Half the pairs use the default slot rate, half an explicit shared one.
        let p = if i % 2 == 0 {
            FronthaulParams::default()
        } else {
            let f = rng.gen_range(1e2..1e7);
            FronthaulParams {
                f_pre: Some(f),
                f_csi: Some(f),
                ..FronthaulParams::default()
            }
        };
        if p.r_le_csi(m, k) != p.r_precoder(m, k) {
            mismatches += 1;
        }
    }
    Outcome::new(mismatches == 0, format!("{IDENTITY_PAIRS} pairs, {mismatches} mismatches"))
}

fn sweep_properties(sweep: &SweepResult, elapsed: Duration) -> Outcome {
    let mut issues = Vec::new();
    let points = &sweep.points;
    let fc = |i: usize| points[i].mode(Mode::Fc).fronthaul.mean;

    // (a) affine through the end points
    let (n0, n1) = (points[0].n_small as f64, points[points.len() - 1].n_small as f64);
    let slope = (fc(points.len() - 1) - fc(0)) / (n1 - n0);
    for (i, p) in points.iter().enumerate() {
        let line = fc(0) + slope * (p.n_small as f64 - n0);
        if rel(fc(i), line) > AFFINE_TOL {
            issues.push(format!("(a) FC not affine at n_small={}", p.n_small));
        }
    }

    // (b) fronthaul ordering. With no small RRH the hybrid policy has only
    // the pinned macro, so PC-Hybrid coincides with PC-Cent there.
    let mut equal_at_zero = false;
    for p in points {
        let f = |m| p.mode(m).fronthaul.mean;
        let cent_vs_hybrid = if p.n_small == 0 {
            equal_at_zero = f(Mode::PcCent) == f(Mode::PcHybrid);
            equal_at_zero
        } else {
            f(Mode::PcCent) > f(Mode::PcHybrid)
        };
        if !(f(Mode::Fc) > f(Mode::PcCent) && cent_vs_hybrid && f(Mode::PcHybrid) >= f(Mode::PcDist)) {
            issues.push(format!("(b) fronthaul ordering broken at n_small={}", p.n_small));
        }
    }

    // (c) sum-rate ordering, slack of the larger CI half-width
    for p in points {
        let below = |lo: Mode, hi: Mode| {
            let (a, b) = (&p.mode(lo).sum_rate, &p.mode(hi).sum_rate);
            a.mean <= b.mean + a.ci95.max(b.ci95)
        };
        if !(below(Mode::PcDist, Mode::PcHybrid) && below(Mode::PcHybrid, Mode::PcCent)) {
            issues.push(format!("(c) sum-rate ordering broken at n_small={}", p.n_small));
        }
    }

    // (d) non-decreasing curves
    for mode in Mode::ALL {
        for w in points.windows(2) {
            let (a, b) = (&w[0].mode(mode).sum_rate, &w[1].mode(mode).sum_rate);
            if b.mean < a.mean - a.ci95.max(b.ci95) {
                issues.push(format!("(d) {} decreases from n_small={} to {}", mode.name(), w[0].n_small, w[1].n_small));
            }
        }
    }

    if elapsed > SWEEP_BUDGET {
        issues.push(format!("runtime {:.1}s over budget", elapsed.as_secs_f64()));
    }
    if sweep.skipped_drops() > 0 {
        issues.push(format!("{} drops skipped", sweep.skipped_drops()));
    }

    let detail = if issues.is_empty() {
        format!(
            "{} points x {} drops in {:.1}s; FC = {:.4e} + {:.4e} n_small; Cent = Hybrid at n_small=0: {}",
            points.len(),
            SWEEP_DROPS,
            elapsed.as_secs_f64(),
            fc(0),
            slope,
            equal_at_zero
        )
    } else {
        issues.join("; ")
    };
    Outcome::new(issues.is_empty(), detail)
}

fn precoder_invariants() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let mut tested = 0;
    let mut rejected = 0;
    let mut worst_leak = 0.0f64;
    let mut worst_power = 0.0f64;
    let mut mrt_losses = 0;
    while tested < PRECODER_INSTANCES {
        let m = rng.gen_range(1..=8);
        let k = rng.gen_range(1..=m);
        let v = rng.gen_range(0..=m - k);
        let p: f64 = rng.gen_range(0.01..100.0);
        let hs: Vec<CVec> = (0..k + v).map(|_| draw_channel(m, rng.gen_range(1e-3..1.0), &mut rng)).collect();
        let (served, victims) = hs.split_at(k);
        let w = match zf_with_nulling(served, victims, p) {
            Ok(w) => w,
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        tested += 1;

        worst_power = worst_power.max(rel(w.norm_squared(), p));
        for (j, col) in w.column_iter().enumerate() {
            worst_power = worst_power.max(rel(col.norm_squared(), p / k as f64));
            for (_, h) in hs.iter().enumerate().filter(|&(i, _)| i != j) {
                worst_leak = worst_leak.max(h.dotc(&col).norm() / (h.norm() * col.norm()));
            }
        }

        let mrt = mrt_precoder(served, p).expect("non-zero channels");
        worst_power = worst_power.max(rel(mrt.norm_squared(), p));
        for (j, h) in served.iter().enumerate() {
            let col = mrt.column(j);
            let best = h.dotc(&col).norm() / col.norm();
            for _ in 0..RANDOM_DIRECTIONS {
                let u = draw_channel(m, 1.0, &mut rng);
                let u = u.unscale(u.norm());
                if h.dotc(&u).norm() > best * (1.0 + MRT_SLACK) {
                    mrt_losses += 1;
                }
            }
        }
    }
    let pass = worst_leak < LEAKAGE_TOL && worst_power <= POWER_TOL && mrt_losses == 0;
    Outcome::new(
        pass,
        format!(
            "{tested} instances ({rejected} ill-conditioned redrawn); max leakage {worst_leak:.1e}, \
             max power err {worst_power:.1e}, MRT beaten {mrt_losses} times"
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut count_mismatch = false;
    for i in 0..ORACLE_INSTANCES {
        let inst = oracle::micro_instance(5000 + i, i as u8);
        let expected = oracle::brute_force_sinr(&inst.h, &inst.columns, inst.noise);
        let got = compute_sinr(&inst.precoders, &inst.channels, inst.noise);
        if got.len() != expected.len() || got.iter().zip(&expected).any(|(g, e)| g.0 != e.0) {
            count_mismatch = true;
            continue;
        }
        for (g, e) in got.iter().zip(&expected) {
            worst = worst.max(rel(g.1, e.1));
        }
        let report = LinkReport::evaluate(&inst.topology, &inst.precoders, &inst.channels, 20e6, 4.0 / 14.0, None);
        worst = worst.max(rel(report.sum_rate, oracle::brute_force_sum_rate(&expected, 20e6, 4.0 / 14.0)));
    }
    Outcome::new(
        !count_mismatch && worst <= ORACLE_TOL,
        format!("{ORACLE_INSTANCES} micro-instances, max rel err {worst:.1e}"),
    )
}

fn architecture_equivalence(sweep: &SweepResult) -> Outcome {
    let differing = sweep
        .drops
        .iter()
        .filter(|d| d.mode(Mode::Fc).sum_rate.to_bits() != d.mode(Mode::PcCent).sum_rate.to_bits())
        .count();
    Outcome::new(
        differing == 0 && !sweep.drops.is_empty(),
        format!("{} drops, {differing} differ", sweep.drops.len()),
    )
}

fn boundary_collapse() -> Outcome {
    let mut failures = Vec::new();
    let mut pinned_small_match = true;
    for i in 0..BOUNDARY_DROPS {
        let n_small = SWEEP_COUNTS[1 + i % (SWEEP_COUNTS.len() - 1)];
        let mut cfg = ScenarioConfig {
            master_seed: 7,
            ..ScenarioConfig::default()
        };

        cfg.hybrid_threshold_db = f64::NEG_INFINITY;
        let d = run_drop(&cfg, n_small, i).expect("drop");
        if !d.mode(Mode::PcHybrid).same_outcome(d.mode(Mode::PcCent)) {
            failures.push(format!("-inf drop {i}"));
        }

        cfg.hybrid_threshold_db = f64::INFINITY;
        let pinned = run_drop(&cfg, n_small, i).expect("drop");
        let (h, dist) = (pinned.mode(Mode::PcHybrid), pinned.mode(Mode::PcDist));
        pinned_small_match &= h.rrhs[1..].iter().zip(&dist.rrhs[1..]).all(|(a, b)| a.fronthaul == b.fronthaul);

        cfg.policy.macro_always_centralized = false;
        let d = run_drop(&cfg, n_small, i).expect("drop");
        if !d.mode(Mode::PcHybrid).same_outcome(d.mode(Mode::PcDist)) {
            failures.push(format!("+inf drop {i}"));
        }
    }
    let pass = failures.is_empty() && pinned_small_match;
    let detail = if pass {
        format!(
            "{BOUNDARY_DROPS} drops: -inf == PC-Cent, +inf (macro unpinned) == PC-Dist; \
             pinned macro leaves small-RRH fronthaul equal to PC-Dist"
        )
    } else {
        format!("mismatches: {:?}, pinned small-RRH match: {pinned_small_match}", failures)
    };
    Outcome::new(pass, detail)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let counts = SWEEP_COUNTS.map(|n| n.to_string()).join(",");
    let run = |threads: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(format!("t{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_hcran-sim"))
            .env("HCRAN_SIM_THREADS", threads)
            .args(["--small-rrhs", &counts, "--drops", &SWEEP_DROPS.to_string(), "--seed", "0", "--quiet"])
            .arg("--out")
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("exit status {status}"));
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    match (run("1"), run("4")) {
        (Ok(a), Ok(b)) => {
            let rows = a.iter().filter(|&&c| c == b'\n').count();
            Outcome::new(a == b, format!("HCRAN_SIM_THREADS=1 vs 4: {} bytes, {rows} lines, identical: {}", a.len(), a == b))
        }
        (a, b) => Outcome::new(false, format!("run failed: {:?} / {:?}", a.err(), b.err())),
    }
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut report = |name: &'static str, o: Outcome| {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((name, o));
    };

    report("1 IQ rate worked example", iq_example());
    report("2 LE-CSI rate equals precoder rate", le_csi_identity());

    let cfg = ScenarioConfig {
        small_rrh_counts: SWEEP_COUNTS.to_vec(),
        drops: SWEEP_DROPS,
        ..ScenarioConfig::default()
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().expect("thread pool");
    let start = Instant::now();
    let sweep = pool.install(|| run_sweep(&cfg)).expect("default sweep");
    let elapsed = start.elapsed();

    report("3 sweep qualitative properties", sweep_properties(&sweep, elapsed));
    report("4 precoder invariants", precoder_invariants());
    report("5 SINR oracle equivalence", oracle_equivalence());
    report("6 FC and PC-Cent sum-rate equality", architecture_equivalence(&sweep));
    report("7 hybrid threshold boundaries", boundary_collapse());
    report("8 thread-count determinism", determinism());

    let failed = results.iter().filter(|(_, o)| !o.pass).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
