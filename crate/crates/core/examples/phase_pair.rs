//! Dual pairs from a complex factorization G·H of the quotient polynomial:
//! G = ∏e^{2πi x_j M/N} and H the matching particular solution.

use gabor_pou::gabor;
use gabor_pou::lattice::LatticeMatrix;

fn main() {
    for (n, m, k, d, b) in [
        (2u64, 1u32, 2u32, 1usize, "0.5"),
        (2, 1, 2, 2, "0.5,0;0,0.5"),
        (4, 1, 1, 1, "0.25"),
        (3, 1, 2, 1, "0.3"),
    ] {
        let b: LatticeMatrix = b.parse().unwrap();
        let (g, h) = match gabor::phase_factorization(k, n, m, d, false) {
            Ok(f) => f,
            Err(e) => {
                println!("N={n} M={m} K={k} d={d}: {e}");
                continue;
            }
        };
        match gabor::build_pair(&g, &h, m, n, &b) {
            Ok(pair) => {
                let r = gabor::verify_duality(&pair, 100);
                println!(
                    "N={n} M={m} K={k} d={d}: H has {} terms, duality residual {:.1e}",
                    h.support_len(),
                    r.max_residual
                );
            }
            Err(e) => println!("N={n} M={m} K={k} d={d}: {e}"),
        }
    }
}
