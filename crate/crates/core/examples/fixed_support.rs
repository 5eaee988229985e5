//! Partitions of unity supported on [0,2]^d with growing smoothness.

use gabor_pou::partition::{self, PouEvaluator};

fn main() {
    for d in 1..=2usize {
        for l in 1..=4u32 {
            let p = partition::fixed_support_poly(l, d);
            let coeff = partition::check_pou_coeff(&p, 2).unwrap();
            let numeric = partition::check_pou_numeric(&PouEvaluator::from(p.clone()), 2, 300);
            let order = partition::smoothness_order(&p, 2).unwrap();
            println!(
                "d={d} L={l}: {:>3} terms, pass={}, numeric {:.1e}, smoothness order {order}",
                p.support_len(),
                coeff.pass,
                numeric
            );
        }
    }

    let p = partition::fixed_support_poly(3, 1);
    println!("\nL=3 profile on [0,2]:");
    for i in 0..=8 {
        let x = i as f64 * 0.25;
        println!("  {x:.2}  {:.6}", p.eval(&[x]).re);
    }
}
