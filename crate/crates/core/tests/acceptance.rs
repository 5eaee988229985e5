//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one verdict line; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gabor_pou::discrete::{self, DiscreteWindow};
use gabor_pou::gabor::{self, DualPair};
use gabor_pou::lattice::{self, LatticeMatrix};
use gabor_pou::partition::{self, GalleryExample, PartitionError, PouEvaluator, PouProblem};
use gabor_pou::rng;
use gabor_pou::trigpoly::MultiIndex;
use gabor_pou::Complex64;
use rand::Rng;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn idx(v: &[i64]) -> MultiIndex {
    MultiIndex(v.to_vec())
}

fn fig1() -> LatticeMatrix {
    "0.5,0;-0.5,0.5".parse().unwrap()
}

fn criterion_1(out: &mut Outcome) {
    let mut worst_coeff: f64 = 0.0;
    let mut worst_numeric: f64 = 0.0;
    for n in 2..=5u64 {
        for d in 1..=3usize {
            let p = partition::max_smooth_poly(n, d);
            let report = partition::check_pou_coeff(&p, n).unwrap();
            worst_coeff = worst_coeff.max(report.max_residual);
            out.check(report.pass, format!("coefficient check N={n} d={d}"));
            let numeric = partition::check_pou_numeric(&PouEvaluator::from(p), n, 1000);
            worst_numeric = worst_numeric.max(numeric);
            out.check(numeric <= 1e-10, format!("numeric residual {numeric:e} at N={n} d={d}"));
        }
    }
    out.note(format!("max coeff residual {worst_coeff:.1e}, max numeric {worst_numeric:.1e}"));
}

fn criterion_2(out: &mut Outcome) {
    for n in 2..=4u64 {
        for d in 1..=2usize {
            let p = partition::max_smooth_poly(n, d);
            let order = partition::smoothness_order(&p, n).unwrap();
            out.check(order == 2 * n as u32 - 2, format!("order {order} at N={n} d={d}"));
            let over = partition::factor_out_sin(&p, n, 2 * n as u32 - 1);
            out.check(
                matches!(over, Err(PartitionError::NotDivisible(_))),
                format!("factor_out_sin at L=2N-1 did not fail for N={n} d={d}"),
            );
        }
    }
}

fn criterion_3(out: &mut Outcome) {
    let prob = PouProblem::new(2, 2, 2, 2).unwrap();
    let sol = partition::solve_pou(&prob, true).unwrap();
    let dim = sol.dimension();
    out.check(dim == 1, format!("family dimension {dim}, expected 1"));

    // (a00, a-1,0, a-1,-1, a0,-1, a0,-2) and their mirror partners.
    let order = [[0, 0], [-1, 0], [-1, -1], [0, -1], [0, -2]];
    let mirror = |k: &[i64; 2]| [-k[0] - 2, -k[1] - 2];
    let spread = |vals: [f64; 5]| -> Vec<(MultiIndex, Complex64)> {
        let mut m = BTreeMap::new();
        for (k, v) in order.iter().zip(vals) {
            m.insert(idx(k), c(v));
            m.insert(idx(&mirror(k)), c(v));
        }
        m.into_iter().collect()
    };
    let particular = sol.system.vector_from(&spread([0.0, 0.0, 1.0, 0.0, 0.0]));
    let direction = sol.system.vector_from(&spread([0.0, 0.5, 0.5, 0.5, 1.0]));
    let r_part = sol.system.residual(&particular).unwrap();
    let r_dir = sol.system.homogeneous_residual(&direction).unwrap();
    out.check(r_part <= 1e-12, format!("particular residual {r_part:e}"));
    out.check(r_dir <= 1e-12, format!("direction residual {r_dir:e}"));
    out.note(format!(
        "dimension {dim}, rank {}, particular residual {r_part:.1e}, direction residual {r_dir:.1e}",
        sol.solution.rank
    ));

    let member = sol.coefficient_vector(&vec![0.0; dim]);
    let gap = member
        .iter()
        .zip(&particular)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.check(gap <= 1e-12, format!("t = 0 member differs from particular by {gap:e}"));

    let p = sol.window_poly(&vec![0.0; dim]).unwrap();
    let mut rng = rng::seeded(rng::DEFAULT_SEED);
    let mut worst: f64 = 0.0;
    for x in rng::unit_cube_points(&mut rng, 2, 100) {
        let x: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let closed = (PI * x[0] / 2.0).sin().powi(2) * (PI * x[1] / 2.0).sin().powi(2);
        worst = worst.max((p.eval(&x) - closed).norm());
    }
    out.check(worst <= 1e-12, format!("closed form mismatch {worst:e}"));
}

fn criterion_4(out: &mut Outcome) {
    for l in 1..=4u32 {
        for d in 1..=2usize {
            let p = partition::fixed_support_poly(l, d);
            let report = partition::check_pou_coeff(&p, 2).unwrap();
            out.check(report.pass, format!("coefficient check L={l} d={d}"));
            let order = partition::smoothness_order(&p, 2).unwrap();
            out.check(order == 2 * l, format!("order {order} at L={l} d={d}"));
        }
    }
}

fn random_matrix(rng: &mut rng::CheckRng, d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

fn criterion_5(out: &mut Outcome) {
    out.check(lattice::support_condition(&fig1(), 2).pass, "figure matrix rejected");

    for eps in [0.01, 0.5] {
        let s = (1.0 + eps) / 4.0;
        let b = LatticeMatrix::new(vec![vec![s, s], vec![s, -s]]).unwrap();
        let r = lattice::support_condition(&b, 2);
        out.check(
            !r.pass && r.witness == Some(idx(&[1, 0])),
            format!("eps={eps}: verdict {} witness {:?}", r.pass, r.witness),
        );
    }

    for a in [1.0, 10.0, 100.0] {
        let b = LatticeMatrix::new(vec![vec![0.5, 0.0], vec![-0.5 * a, 0.5]]).unwrap();
        out.check(b.spectral_norm() >= a / 2.0, format!("a={a}: norm {}", b.spectral_norm()));
        out.check(lattice::support_condition(&b, 2).pass, format!("a={a}: rejected"));
    }

    for eps in [0.25, 1e-4] {
        let b = lattice::scaling_counterexample(eps).unwrap();
        out.check((b.det() - eps).abs() <= 1e-12, format!("eps={eps}: det {}", b.det()));
        out.check(!lattice::support_condition(&b, 2).pass, format!("eps={eps}: accepted"));
    }

    let mut rng = rng::seeded(rng::DEFAULT_SEED);
    for _ in 0..100 {
        let d = rng.gen_range(1..=3usize);
        let n = rng.gen_range(1..=4u64);
        let diag: Vec<f64> = (0..d)
            .map(|_| {
                let v: f64 = rng.gen_range(0.05..2.0 / n as f64);
                if rng.gen_bool(0.5) { v } else { -v }
            })
            .collect();
        let b = LatticeMatrix::diagonal(&diag).unwrap();
        let expected = b.spectral_norm() <= 1.0 / n as f64;
        let got = lattice::support_condition(&b, n).pass;
        out.check(got == expected, format!("diagonal {diag:?}, N={n}: {got} vs {expected}"));
    }

    let mut checked = 0;
    while checked < 200 {
        let d = rng.gen_range(1..=3usize);
        let n = rng.gen_range(1..=4u64);
        let rows = random_matrix(&mut rng, d);
        let Ok(raw) = LatticeMatrix::new(rows.clone()) else { continue };
        let bound = 1.0 / ((d as f64).sqrt() * n as f64);
        let t = bound / raw.spectral_norm() * rng.gen_range(0.1..1.0);
        let Ok(b) = LatticeMatrix::new(
            rows.iter().map(|r| r.iter().map(|v| v * t).collect()).collect(),
        ) else {
            continue;
        };
        checked += 1;
        out.check(lattice::norm_sufficient(&b, n), format!("scaled matrix {b} not norm-sufficient"));
        out.check(lattice::support_condition(&b, n).pass, format!("{b} with N={n} rejected"));
    }
}

fn criterion_6(out: &mut Outcome) {
    let mut worst: f64 = 0.0;
    for n in 2..=4u64 {
        for d in 1..=2usize {
            let b = LatticeMatrix::scalar(d, 1.0 / n as f64).unwrap();
            let k = gabor::tight_window(n, d, &b).unwrap();
            let pair = DualPair::new(k.clone(), k, b).unwrap();
            let r = gabor::verify_duality(&pair, gabor::DEFAULT_PROBES);
            worst = worst.max(r.max_residual);
            out.check(r.max_residual <= 1e-10, format!("tight N={n} d={d}: {:e}", r.max_residual));
        }
    }

    let pair = gabor::fixed_support_pair(3, 2, &fig1()).unwrap();
    let r = gabor::verify_duality(&pair, gabor::DEFAULT_PROBES);
    worst = worst.max(r.max_residual);
    out.check(r.max_residual <= 1e-10, format!("figure pair: {:e}", r.max_residual));

    let b = LatticeMatrix::scalar(2, 0.5).unwrap();
    let (g, h) = gabor::phase_factorization(2, 2, 1, 2, true).unwrap();
    let pair = gabor::build_pair(&g, &h, 1, 2, &b).unwrap();
    let r = gabor::verify_duality(&pair, gabor::DEFAULT_PROBES);
    worst = worst.max(r.max_residual);
    out.check(r.max_residual <= 1e-10, format!("phase pair: {:e}", r.max_residual));

    let broken = DualPair::new(pair.analysis().clone(), pair.synthesis().scaled(2.0), b.clone()).unwrap();
    let r = gabor::verify_duality(&broken, gabor::DEFAULT_PROBES);
    out.check(
        r.max_residual >= b.abs_det() / 2.0,
        format!("corrupted pair residual only {:e}", r.max_residual),
    );
    out.note(format!("max residual {worst:.1e}, corrupted {:.3}", r.max_residual));
}

/// `(1/R) Σ_{m=0}^{qR−1} Σ_n ⟨f, c_{m,n}⟩ d_{m,n}` in one dimension with
/// modulation `e^{2πi m j/q}`, every modulation index listed explicitly.
fn brute_force_1d(f: &DiscreteWindow, cw: &DiscreteWindow, dw: &DiscreteWindow, q: i64) -> BTreeMap<i64, Complex64> {
    let reps = 3;
    let get = |w: &DiscreteWindow, j: i64| w.get(&idx(&[j]));
    let phase = |m: i64, j: i64| Complex64::cis(2.0 * PI * (m * j) as f64 / q as f64);
    let fs: Vec<i64> = f.support().map(|j| j.0[0]).collect();
    let (lo, hi) = (fs.iter().min().copied().unwrap_or(0), fs.iter().max().copied().unwrap_or(0));
    let mut out = BTreeMap::new();
    for j in lo - 10..=hi + 10 {
        let mut total = Complex64::new(0.0, 0.0);
        for m in 0..q * reps {
            for n in lo - 10..=hi + 10 {
                let mut inner = Complex64::new(0.0, 0.0);
                for &l in &fs {
                    inner += get(f, l) * (phase(m, l) * get(cw, l - n)).conj();
                }
                total += inner * phase(m, j) * get(dw, j - n);
            }
        }
        out.insert(j, total / reps as f64);
    }
    out
}

fn criterion_7(out: &mut Outcome) {
    for d in 1..=2usize {
        let b = LatticeMatrix::scalar(d, 0.5).unwrap();
        let w = discrete::sample_window(&gabor::tight_window(2, d, &b).unwrap());
        let single = w.len() == 1 && w.get(&idx(&vec![1; d])).norm() > 0.0;
        out.check(single, format!("d={d}: sampled tight window has {} points", w.len()));
        let r = discrete::verify_discrete_duality(&w, &w, &b, 2).unwrap();
        // d = 2 has scale exactly 1/2; d = 1 carries the rounding of √(1/2).
        let bound = if d == 2 { 0.0 } else { 1e-15 };
        out.check(r.max_residual <= bound, format!("d={d}: trivial residual {:e}", r.max_residual));
    }

    let b = LatticeMatrix::scalar(1, 0.25).unwrap();
    let (g, h) = gabor::phase_factorization(1, 4, 1, 1, false).unwrap();
    let pair = gabor::build_pair(&g, &h, 1, 4, &b).unwrap();
    let cw = discrete::sample_window(pair.analysis());
    let dw = discrete::sample_window(pair.synthesis());
    let r = discrete::verify_discrete_duality(&cw, &dw, &b, 4).unwrap();
    out.check(r.max_residual <= 1e-12, format!("sampled pair residual {:e}", r.max_residual));
    let mut worst: f64 = 0.0;
    let mut rng = rng::seeded(rng::DEFAULT_SEED);
    for _ in 0..20 {
        let pts: Vec<_> = (0..16)
            .map(|j| (idx(&[j]), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let f = DiscreteWindow::from_points(1, pts).unwrap();
        let rec = discrete::reconstruct(&f, &cw, &dw, &b, 4).unwrap();
        worst = worst.max(rec.max_error);
    }
    out.check(worst <= 1e-10, format!("reconstruction error {worst:e}"));

    let b = LatticeMatrix::scalar(1, 0.5).unwrap();
    let sampled = discrete::discrete_tight_window(2, 1, &b).unwrap();
    let two_point_c = DiscreteWindow::from_points(1, [(idx(&[0]), c(1.0)), (idx(&[1]), Complex64::new(0.0, 0.5))]).unwrap();
    let two_point_d = DiscreteWindow::from_points(1, [(idx(&[0]), c(0.3)), (idx(&[1]), Complex64::new(0.0, 0.4))]).unwrap();
    let mut oracle_gap: f64 = 0.0;
    for (cw, dw) in [(&sampled, &sampled), (&two_point_c, &two_point_d)] {
        let pts: Vec<_> = (0..6)
            .map(|j| (idx(&[j]), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let f = DiscreteWindow::from_points(1, pts).unwrap();
        let rec = discrete::reconstruct(&f, cw, dw, &b, 2).unwrap();
        for (j, v) in brute_force_1d(&f, cw, dw, 2) {
            oracle_gap = oracle_gap.max((rec.signal.get(&idx(&[j])) - v).norm());
        }
    }
    out.check(oracle_gap <= 1e-12, format!("brute-force oracle gap {oracle_gap:e}"));
    out.note(format!("reconstruction error {worst:.1e}, oracle gap {oracle_gap:.1e}"));
}

fn criterion_8(out: &mut Outcome) {
    let cases: Vec<(GalleryExample, &str, partition::ScalarFn)> = vec![
        (GalleryExample::ThreeTerm, "x", Arc::new(|x: f64| c(x))),
        (GalleryExample::ThreeTerm, "sin(pi x)", Arc::new(|x: f64| c((PI * x).sin()))),
        (GalleryExample::FiveTerm, "x(x-2)", Arc::new(|x: f64| c(x * (x - 2.0)))),
    ];
    let mut rng = rng::seeded(rng::DEFAULT_SEED);
    let mut worst: f64 = 0.0;
    for (ex, name, f) in &cases {
        let p = partition::gallery(*ex, f.clone());
        for _ in 0..5 {
            let y = [rng.gen_range(0.0..2.0)];
            let r = partition::qj_fourier_check(&p, 2, 0, &y, 4, partition::default_quad_points(4)).unwrap();
            let c0 = (r.coefficient(0).unwrap() - 0.5).norm();
            let c2 = r.coefficient(2).unwrap().norm().max(r.coefficient(-2).unwrap().norm());
            worst = worst.max(c0).max(c2);
            out.check(c0 <= 1e-8 && c2 <= 1e-8, format!("{ex:?} f={name} y={y:?}: c0 dev {c0:e}, c2 {c2:e}"));
        }
    }
    let p = partition::gallery(GalleryExample::FiveTerm, cases[2].2.clone());
    let mut edge: f64 = 0.0;
    for i in 0..32 {
        let t = 2.0 * i as f64 / 31.0;
        for x in [[0.0, t], [2.0, t], [t, 0.0], [t, 2.0]] {
            edge = edge.max(p.eval(&x).norm());
        }
    }
    out.check(edge <= 1e-12, format!("boundary value {edge:e}"));
    out.note(format!("max coefficient deviation {worst:.1e}, boundary {edge:.1e}"));
}

type Criterion = (&'static str, fn(&mut Outcome), Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 max-smooth partitions", criterion_1, Duration::from_secs(5)),
        ("2 smoothness order", criterion_2, Duration::from_secs(2)),
        ("3 constraint family K=N=d=L=2", criterion_3, Duration::from_secs(1)),
        ("4 fixed-support partitions", criterion_4, Duration::from_secs(2)),
        ("5 lattice conditions", criterion_5, Duration::from_secs(5)),
        ("6 continuous duality", criterion_6, Duration::from_secs(10)),
        ("7 discrete duality and reconstruction", criterion_7, Duration::from_secs(5)),
        ("8 general evaluators", criterion_8, Duration::from_secs(2)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let mut out = Outcome::new();
        let start = Instant::now();
        run(&mut out);
        let elapsed = start.elapsed();
        out.check(elapsed <= budget, format!("took {elapsed:?}, budget {budget:?}"));
        let verdict = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {name}: {verdict} ({:.3}s)", elapsed.as_secs_f64());
        if !out.notes.is_empty() {
            line.push_str(&format!("; {}", out.notes.join("; ")));
        }
        if !out.failures.is_empty() {
            failed += 1;
            let shown: Vec<&str> = out.failures.iter().take(4).map(String::as_str).collect();
            line.push_str(&format!("; failed: {}", shown.join(" | ")));
        }
        println!("{line}");
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
