//! Tight Gabor windows √|det B|·∏sin^{N-1}(πx_j/N) and their duality residuals.

use gabor_pou::gabor::{self, DualPair};
use gabor_pou::lattice::LatticeMatrix;

fn main() {
    for d in 1..=2usize {
        for n in 2..=4u64 {
            let b = LatticeMatrix::scalar(d, 1.0 / n as f64).unwrap();
            let w = gabor::tight_window(n, d, &b).unwrap();
            let pair = DualPair::new(w.clone(), w, b).unwrap();
            let r = gabor::verify_duality(&pair, 100);
            println!(
                "d={d} N={n}: {} overlapping shifts, residual at 0 {:.1e}, off 0 {:.1e}",
                r.shifts.len(),
                r.residual_at_zero,
                r.max_off_zero
            );
        }
    }

    // A non-diagonal lattice works as long as the support condition holds.
    let b: LatticeMatrix = "0.5,0;-0.5,0.5".parse().unwrap();
    let w = gabor::tight_window(2, 2, &b).unwrap();
    let r = gabor::verify_duality(&DualPair::new(w.clone(), w, b).unwrap(), 100);
    println!("sheared lattice: pass={} residual {:.1e}", r.pass, r.max_residual);

    // Lattices that are too coarse are rejected with a witness.
    let coarse = LatticeMatrix::scalar(2, 0.6).unwrap();
    match gabor::tight_window(2, 2, &coarse) {
        Ok(_) => println!("unexpected: coarse lattice accepted"),
        Err(e) => println!("coarse lattice: {e}"),
    }
}
