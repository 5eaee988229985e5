//! Smoothness of cut-off partitions, read off from the power of
//! sin(πx/N) that divides the polynomial.

use gabor_pou::partition;

fn main() {
    println!("maximally smooth, frequencies in [-(N-1), N-1]:");
    for n in 2..=6u64 {
        let p = partition::max_smooth_poly(n, 1);
        let order = partition::smoothness_order(&p, n).unwrap();
        println!("  N={n}: divisible by sin^{order}, cut-off is C^{}", order - 1);
    }

    println!("fixed support [0,2]:");
    for l in 1..=5u32 {
        let p = partition::fixed_support_poly(l, 1);
        let order = partition::smoothness_order(&p, 2).unwrap();
        println!("  L={l}: {} terms, divisible by sin^{order}", p.support_len());
    }

    // Dividing out the sine factor and multiplying it back is lossless.
    let p = partition::max_smooth_poly(4, 2);
    let a = partition::factor_out_sin(&p, 4, 6).unwrap();
    let prob = partition::PouProblem::new(3, 4, 6, 2).unwrap();
    let back = partition::assemble_window_poly(&a, &prob).unwrap();
    println!("round trip through the quotient: {:.1e}", back.max_coeff_diff(&p).unwrap());
}
