//! Samples a continuous dual pair at the integers and reconstructs a random
//! finite signal from its discrete Gabor coefficients.

use gabor_pou::discrete::{self, DiscreteGaborSystem};
use gabor_pou::gabor;
use gabor_pou::lattice::LatticeMatrix;
use gabor_pou::trigpoly::index_box;
use gabor_pou::Complex64;
use rand::Rng;

fn main() {
    let sheared: LatticeMatrix = "0.5,0;-0.5,0.5".parse().unwrap();
    let quarter = LatticeMatrix::scalar(1, 0.25).unwrap();
    let (g, h) = gabor::phase_factorization(1, 4, 1, 1, false).unwrap();
    let pairs = [
        ("fixed-support pair, d=2", gabor::fixed_support_pair(2, 2, &sheared).unwrap(), 2),
        ("phase pair N=4, d=1", gabor::build_pair(&g, &h, 1, 4, &quarter).unwrap(), 4),
    ];
    let mut rng = gabor_pou::rng::seeded(gabor_pou::rng::DEFAULT_SEED);
    for (label, pair, n) in &pairs {
        let b = pair.lattice();
        let c = discrete::sample_window(pair.analysis());
        let d = discrete::sample_window(pair.synthesis());
        let report = discrete::verify_discrete_duality(&c, &d, b, *n).unwrap();
        println!(
            "{label}: {} and {} sample points, duality residual {:.1e}, {} shifts off the integer grid",
            c.len(),
            d.len(),
            report.max_residual,
            report.non_integer_shifts
        );
        let dim = b.dim();
        let points: Vec<_> = index_box(dim, 0, 5)
            .map(|j| (j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let f = discrete::DiscreteWindow::from_points(dim, points).unwrap();
        let r = discrete::reconstruct(&f, &c, &d, b, *n).unwrap();
        println!(
            "  signal of {} points: {} characters, {} translations, max error {:.1e}",
            f.len(),
            r.characters,
            r.translations,
            r.max_error
        );
    }

    // With a tight window the coefficients preserve energy.
    let n4 = LatticeMatrix::scalar(1, 0.25).unwrap();
    let k = discrete::discrete_tight_window(4, 1, &n4).unwrap();
    let system = DiscreteGaborSystem::new(k, n4).unwrap();
    let f = discrete::DiscreteWindow::from_points(
        1,
        index_box(1, 0, 9).map(|j| (j, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))),
    )
    .unwrap();
    let energy: f64 = system.analyze(&f).iter().map(|c| c.value.norm_sqr()).sum();
    println!("tight system: ‖f‖² = {:.12}, Σ|coeff|² = {energy:.12}", f.norm_sqr());
}
