use std::f64::consts::PI;

use gabor_pou::discrete::{self, DiscreteGaborSystem, DiscreteWindow};
use gabor_pou::gabor::{self, DualPair};
use gabor_pou::lattice::{self, LatticeMatrix};
use gabor_pou::linalg::{self, DenseMatrix};
use gabor_pou::partition::{self, PouEvaluator, PouProblem};
use gabor_pou::trigpoly::{MultiIndex, TrigPoly};
use gabor_pou::Complex64;
use proptest::prelude::*;

fn poly_strategy(dim: usize, denom: u64) -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(-3i64..=3, dim),
            -1.0f64..1.0,
            -1.0f64..1.0,
        ),
        0..6,
    )
    .prop_map(move |terms| {
        TrigPoly::from_terms(
            dim,
            denom,
            terms
                .into_iter()
                .map(|(k, re, im)| (MultiIndex(k), Complex64::new(re, im))),
        )
    })
}

fn two_polys() -> impl Strategy<Value = (TrigPoly, TrigPoly, Vec<f64>)> {
    (1usize..=3, 1u64..=4).prop_flat_map(|(dim, denom)| {
        (
            poly_strategy(dim, denom),
            poly_strategy(dim, denom),
            prop::collection::vec(-3.0f64..3.0, dim),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_and_sum_agree_with_pointwise((p, q, x) in two_polys()) {
        let prod = p.mul(&q).unwrap().eval(&x);
        prop_assert!((prod - p.eval(&x) * q.eval(&x)).norm() < 1e-12);
        let sum = p.add(&q).unwrap().eval(&x);
        prop_assert!((sum - p.eval(&x) - q.eval(&x)).norm() < 1e-12);
        prop_assert!((p.conj().eval(&x) - p.eval(&x).conj()).norm() < 1e-12);
    }

    #[test]
    fn rebase_preserves_values((p, _q, x) in two_polys(), factor in 1u64..=3) {
        let r = p.rebase(p.denom() * factor).unwrap();
        prop_assert!((r.eval(&x) - p.eval(&x)).norm() < 1e-12);
        prop_assert_eq!(r.coarsen(p.denom()).unwrap(), p);
    }

    #[test]
    fn division_undoes_multiplication((p, _q, _x) in two_polys(), axis_seed in 0usize..3) {
        let axis = axis_seed % p.dim();
        let back = p.mul_z_minus_one(axis).unwrap().divide_z_minus_one(axis).unwrap();
        prop_assert!(back.max_coeff_diff(&p).unwrap() < 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact((p, _q, _x) in two_polys()) {
        let text = serde_json::to_string(&p).unwrap();
        let back: TrigPoly = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn factor_and_assemble_are_inverse(n in 2u64..=4, d in 1usize..=2, l_seed in 1u32..=6) {
        let p = partition::max_smooth_poly(n, d);
        let l = 1 + (l_seed - 1) % (2 * n as u32 - 2);
        let a = partition::factor_out_sin(&p, n, l).unwrap();
        let prob = PouProblem::new(n as u32 - 1, n, l, d).unwrap();
        let back = partition::assemble_window_poly(&a, &prob).unwrap();
        prop_assert!(back.max_coeff_diff(&p).unwrap() < 1e-12);
    }

    #[test]
    fn solved_families_are_partitions(k in 1u32..=3, n in 2u64..=3, l_seed in 1u32..=6, symmetry: bool, t in -1.0f64..1.0) {
        let l = 1 + (l_seed - 1) % (2 * k);
        let prob = PouProblem::new(k, n, l, 1).unwrap();
        if let Ok(sol) = partition::solve_pou(&prob, symmetry) {
            let coords = vec![t; sol.dimension()];
            let p = sol.window_poly(&coords).unwrap();
            prop_assert!(partition::check_pou_coeff(&p, n).unwrap().pass);
            prop_assert!(partition::smoothness_order(&p, n).unwrap() >= l);
            let numeric = partition::check_pou_numeric(&PouEvaluator::from(p), n, 50);
            prop_assert!(numeric < 1e-10);
        }
    }

    #[test]
    fn affine_solutions_solve_the_system(
        rows in 1usize..=4,
        cols in 1usize..=4,
        seed in prop::collection::vec(-2i32..=2, 16),
        x in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let entries: Vec<Complex64> = (0..rows * cols).map(|i| Complex64::new(seed[i] as f64, 0.0)).collect();
        let a = DenseMatrix::new(rows, cols, entries).unwrap();
        let x: Vec<Complex64> = x[..cols].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let b = a.mul_vec(&x).unwrap();
        let sol = linalg::solve_affine(&a, &b).unwrap();
        let ax = a.mul_vec(&sol.particular).unwrap();
        for (u, v) in ax.iter().zip(&b) {
            prop_assert!((u - v).norm() < 1e-10);
        }
        prop_assert_eq!(sol.rank + sol.dimension(), cols);
        for (i, u) in sol.nullspace_basis.iter().enumerate() {
            for w in a.mul_vec(u).unwrap() {
                prop_assert!(w.norm() < 1e-10);
            }
            for (j, v) in sol.nullspace_basis.iter().enumerate() {
                let ip: Complex64 = u.iter().zip(v).map(|(p, q)| p.conj() * q).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sharp_is_an_involution(entries in prop::collection::vec(-2.0f64..2.0, 9), d in 1usize..=3) {
        let rows: Vec<Vec<f64>> = (0..d).map(|i| entries[i * d..(i + 1) * d].to_vec()).collect();
        let Ok(b) = LatticeMatrix::new(rows) else { return Ok(()) };
        prop_assume!(b.abs_det() > 1e-3);
        let back = b.sharp().sharp();
        for i in 0..d {
            for j in 0..d {
                prop_assert!((back.entry(i, j) - b.entry(i, j)).abs() < 1e-10 * (1.0 + b.entry(i, j).abs()) / b.abs_det());
            }
        }
        prop_assert!((b.sharp().det() * b.det() - 1.0).abs() < 1e-10 / b.abs_det());
        prop_assert!(b.sharp_defect() < 1e-10 / b.abs_det());
    }

    #[test]
    fn support_condition_matches_brute_force(
        entries in prop::collection::vec(-1.0f64..1.0, 4),
        n in 1u64..=3,
    ) {
        let rows = vec![entries[..2].to_vec(), entries[2..].to_vec()];
        let det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
        prop_assume!(det.abs() > 0.05);
        let b = LatticeMatrix::new(rows.clone()).unwrap();
        // (Bᵀ)⁻¹ in closed form.
        let sharp = [
            [rows[1][1] / det, -rows[1][0] / det],
            [-rows[0][1] / det, rows[0][0] / det],
        ];
        let r = ((2f64).sqrt() * n as f64 * b.spectral_norm()).ceil() as i64 + 2;
        let mut violated = false;
        for i in -r..=r {
            for j in -r..=r {
                if i == 0 && j == 0 {
                    continue;
                }
                let y0 = sharp[0][0] * i as f64 + sharp[0][1] * j as f64;
                let y1 = sharp[1][0] * i as f64 + sharp[1][1] * j as f64;
                if y0.abs().max(y1.abs()) < n as f64 - 1e-12 {
                    violated = true;
                }
            }
        }
        let report = lattice::support_condition(&b, n);
        prop_assert_eq!(report.pass, !violated);
        if let Some(w) = report.witness {
            let img = b.sharp_apply(&w.0);
            prop_assert!(img.iter().all(|v| v.abs() < n as f64));
        }
        if lattice::norm_sufficient(&b, n) {
            prop_assert!(report.pass);
        }
    }

    #[test]
    fn coset_reps_form_a_transversal(m in prop::collection::vec(-3i64..=3, 4)) {
        let det = m[0] * m[3] - m[1] * m[2];
        prop_assume!(det != 0);
        let binv = vec![vec![m[0] as f64, m[1] as f64], vec![m[2] as f64, m[3] as f64]];
        let reps = lattice::coset_reps(&binv).unwrap();
        prop_assert_eq!(reps.len(), det.unsigned_abs() as usize);
        // j ≡ j′ iff Binv⁻¹(j − j′) is integral.
        let congruent = |a: &[i64], b: &[i64]| {
            let (u, v) = ((a[0] - b[0]) as f64, (a[1] - b[1]) as f64);
            let s0 = (m[3] as f64 * u - m[1] as f64 * v) / det as f64;
            let s1 = (-(m[2] as f64) * u + m[0] as f64 * v) / det as f64;
            (s0 - s0.round()).abs() < 1e-9 && (s1 - s1.round()).abs() < 1e-9
        };
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                prop_assert!(!congruent(&a.0, &b.0));
            }
        }
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                prop_assert!(reps.iter().any(|r| congruent(&[x, y], &r.0)));
            }
        }
    }

    #[test]
    fn characters_form_a_group(m in prop::collection::vec(-3i64..=3, 4)) {
        let det = m[0] * m[3] - m[1] * m[2];
        prop_assume!(det != 0 && det.abs() <= 12);
        // B = (Binv)⁻¹ for an integer Binv.
        let d = det as f64;
        let b = LatticeMatrix::new(vec![
            vec![m[3] as f64 / d, -m[1] as f64 / d],
            vec![-m[2] as f64 / d, m[0] as f64 / d],
        ]).unwrap();
        let chars = discrete::modulation_characters(&b).unwrap();
        prop_assert_eq!(chars.len(), det.unsigned_abs() as usize);
        let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| {
            let t = (x - y).rem_euclid(1.0);
            !(1e-9..=1.0 - 1e-9).contains(&t)
        });
        for (i, a) in chars.iter().enumerate() {
            for b in &chars[i + 1..] {
                prop_assert!(!same(a, b));
            }
            for b in &chars {
                let s: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                prop_assert!(chars.iter().any(|c| same(c, &s)));
            }
        }
    }
}

fn random_valid_lattice(seed: u64, n: u64) -> LatticeMatrix {
    use rand::Rng;
    let mut rng = gabor_pou::rng::seeded(seed);
    loop {
        let rows: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..2).map(|_| rng.gen_range(-0.6..0.6)).collect())
            .collect();
        if let Ok(b) = LatticeMatrix::new(rows) {
            if b.abs_det() > 0.02 && lattice::support_condition(&b, n).pass {
                return b;
            }
        }
    }
}

#[test]
fn figure_pair_is_dual_for_other_valid_lattices() {
    for seed in 0..5 {
        let b = random_valid_lattice(seed, 2);
        let pair = gabor::fixed_support_pair(3, 2, &b).unwrap();
        let r = gabor::verify_duality(&pair, 40);
        assert!(r.max_residual <= 1e-10, "{b}: {r:?}");
    }
}

#[test]
fn windows_are_continuous_at_the_boundary() {
    let b = LatticeMatrix::scalar(2, 1.0 / 3.0).unwrap();
    let windows = [
        gabor::tight_window(3, 2, &b).unwrap(),
        gabor::fixed_support_pair(2, 2, &LatticeMatrix::scalar(2, 0.5).unwrap()).unwrap().synthesis().clone(),
    ];
    let mut rng = gabor_pou::rng::seeded(7);
    use rand::Rng;
    for w in &windows {
        let n = w.n() as f64;
        for _ in 0..1000 {
            let delta: f64 = rng.gen_range(0.0..1e-6);
            let t: f64 = rng.gen_range(0.0..n);
            let edge = if rng.gen_bool(0.5) { delta } else { n - delta };
            let x = if rng.gen_bool(0.5) { [edge, t] } else { [t, edge] };
            assert!(w.eval(&x).norm() < 1e-4, "{x:?}");
        }
    }
}

#[test]
fn diagonal_tight_windows_are_tensor_products() {
    let b2 = LatticeMatrix::diagonal(&[1.0 / 3.0, 0.25]).unwrap();
    let w = gabor::tight_window(3, 2, &b2).unwrap();
    let w1 = gabor::tight_window(3, 1, &LatticeMatrix::scalar(1, 1.0 / 3.0).unwrap()).unwrap();
    let w2 = gabor::tight_window(3, 1, &LatticeMatrix::scalar(1, 0.25).unwrap()).unwrap();
    for x in [[0.4, 2.2], [1.5, 0.1], [2.9, 2.9]] {
        let prod = w1.eval(&x[..1]) * w2.eval(&x[1..]);
        assert!((w.eval(&x) - prod).norm() < 1e-14);
    }
}

#[test]
fn sampling_transfers_duality() {
    let cases: Vec<DualPair> = vec![
        gabor::fixed_support_pair(3, 2, &"0.5,0;-0.5,0.5".parse().unwrap()).unwrap(),
        gabor::fixed_support_pair(2, 1, &LatticeMatrix::scalar(1, 0.5).unwrap()).unwrap(),
        {
            let b = LatticeMatrix::scalar(1, 0.25).unwrap();
            let (g, h) = gabor::phase_factorization(1, 4, 1, 1, false).unwrap();
            gabor::build_pair(&g, &h, 1, 4, &b).unwrap()
        },
        {
            let b = LatticeMatrix::scalar(1, 1.0 / 3.0).unwrap();
            let k = gabor::tight_window(3, 1, &b).unwrap();
            DualPair::new(k.clone(), k, b).unwrap()
        },
    ];
    for pair in &cases {
        assert!(gabor::verify_duality(pair, 30).max_residual <= 1e-10);
        let c = discrete::sample_window(pair.analysis());
        let d = discrete::sample_window(pair.synthesis());
        let r = discrete::verify_discrete_duality(&c, &d, pair.lattice(), pair.analysis().n()).unwrap();
        assert!(r.max_residual <= 1e-10, "{r:?}");
    }
}

#[test]
fn tight_windows_satisfy_parseval() {
    use rand::Rng;
    let mut rng = gabor_pou::rng::seeded(11);
    for (n, d, b) in [
        (4u64, 1usize, LatticeMatrix::scalar(1, 0.25).unwrap()),
        (3, 2, LatticeMatrix::scalar(2, 1.0 / 3.0).unwrap()),
    ] {
        let k = discrete::discrete_tight_window(n, d, &b).unwrap();
        let system = DiscreteGaborSystem::new(k, b).unwrap();
        for _ in 0..5 {
            let pts: Vec<_> = gabor_pou::trigpoly::index_box(d, 0, 5)
                .map(|j| (j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
                .collect();
            let f = DiscreteWindow::from_points(d, pts).unwrap();
            let energy: f64 = system.analyze(&f).iter().map(|c| c.value.norm_sqr()).sum();
            assert!((energy - f.norm_sqr()).abs() <= 1e-9 * f.norm_sqr());
        }
    }
}

#[test]
fn reconstruction_is_exact_for_random_signals() {
    use rand::Rng;
    let b: LatticeMatrix = "0.5,0;-0.5,0.5".parse().unwrap();
    let pair = gabor::fixed_support_pair(2, 2, &b).unwrap();
    let c = discrete::sample_window(pair.analysis());
    let d = discrete::sample_window(pair.synthesis());
    let mut rng = gabor_pou::rng::seeded(3);
    for _ in 0..20 {
        let mut pts = Vec::new();
        for j in gabor_pou::trigpoly::index_box(2, -2, 3) {
            if rng.gen_bool(0.6) {
                pts.push((j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
            }
        }
        let f = DiscreteWindow::from_points(2, pts).unwrap();
        let r = discrete::reconstruct(&f, &c, &d, &b, 2).unwrap();
        assert!(r.max_error <= 1e-10);
    }
}

#[test]
fn sine_power_matches_direct_evaluation() {
    for n in 1..=5u64 {
        for m in 0..=6u32 {
            let p = gabor_pou::trigpoly::sin_power_expand(n, m);
            for x in [0.13, 0.77, 1.9, 3.3] {
                let want = (PI * x / n as f64).sin().powi(m as i32);
                assert!((p.eval(&[x]).re - want).abs() < 1e-13);
                assert!(p.eval(&[x]).im.abs() < 1e-13);
            }
        }
    }
}
