//! Builds the maximally smooth partition of unity for a few N and checks it
//! both on the coefficients and at random points.

use gabor_pou::partition::{self, PouEvaluator};

fn main() {
    for n in 2..=5u64 {
        let p = partition::max_smooth_poly(n, 2);
        let coeff = partition::check_pou_coeff(&p, n).expect("denominator matches N");
        let numeric = partition::check_pou_numeric(&PouEvaluator::from(p.clone()), n, 500);
        println!(
            "N={n}: {} terms, c0 = {:.6}, coefficient residual {:.1e}, numeric residual {:.1e}",
            p.support_len(),
            p.coeff(&gabor_pou::trigpoly::MultiIndex::zeros(2)).re,
            coeff.max_residual,
            numeric
        );
    }

    let p = partition::max_smooth_poly(3, 1);
    println!("\nN=3, d=1 coefficients:");
    for (k, c) in p.terms() {
        println!("  k={k:>4}  {:+.6}", c.re);
    }
}
