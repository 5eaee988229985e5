//! Partitions of unity given only as point evaluators, tested through the
//! Fourier coefficients of their partial periodizations.

use std::f64::consts::PI;
use std::sync::Arc;

use gabor_pou::partition::{self, GalleryExample, ScalarFn};
use gabor_pou::Complex64;

fn main() {
    let cases: Vec<(GalleryExample, &str, ScalarFn)> = vec![
        (GalleryExample::ThreeTerm, "f(x) = x", Arc::new(|x| Complex64::new(x, 0.0))),
        (GalleryExample::ThreeTerm, "f(x) = sin(πx)", Arc::new(|x| Complex64::new((PI * x).sin(), 0.0))),
        (GalleryExample::FiveTerm, "f(x) = x(x-2)", Arc::new(|x| Complex64::new(x * (x - 2.0), 0.0))),
    ];
    for (example, label, f) in cases {
        let p = partition::gallery(example, f);
        let numeric = partition::check_pou_numeric(&p, 2, 500);
        print!("{example:?} with {label}: pointwise residual {numeric:.1e}");
        for y in [0.1, 0.55] {
            let r = partition::qj_fourier_check(&p, 2, 0, &[y], 4, partition::default_quad_points(4)).unwrap();
            print!("; y={y}: c0 off by {:.1e}, c±2 up to {:.1e}", r.c0_deviation, r.lattice_max);
        }
        println!();
    }

    // The five-term example vanishes on the boundary of [0,2]^2 when f does.
    let p = partition::gallery(GalleryExample::FiveTerm, Arc::new(|x| Complex64::new(x * (x - 2.0), 0.0)));
    let edge = (0..=16)
        .flat_map(|i| {
            let t = i as f64 / 8.0;
            [[0.0, t], [2.0, t], [t, 0.0], [t, 2.0]]
        })
        .map(|x| p.eval(&x).norm())
        .fold(0.0, f64::max);
    println!("five-term example on the boundary: max |P| = {edge:.1e}");
}
