//! Solves the linear system for the quotient coefficients of a smooth
//! partition of unity and prints the solution family.
//!
//! Usage: constraint_solve [K N L d]

use gabor_pou::partition::{self, PouProblem};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let [k, n, l, d] = match args.as_slice() {
        [k, n, l, d] => [*k, *n, *l, *d],
        _ => [2, 2, 2, 2],
    };
    let prob = PouProblem::new(k as u32, n, l as u32, d as usize).expect("valid parameters");
    for symmetry in [false, true] {
        match partition::solve_pou(&prob, symmetry) {
            Ok(sol) => {
                let particular = sol.system.residual(&sol.solution.particular).unwrap();
                println!(
                    "symmetry={symmetry}: {} unknowns, {} equations, rank {}, family dimension {}, residual {:.1e}",
                    sol.index_box.len(),
                    sol.system.equations.len(),
                    sol.solution.rank,
                    sol.dimension(),
                    particular
                );
                let p = sol.window_poly(&vec![0.0; sol.dimension()]).unwrap();
                let order = partition::smoothness_order(&p, n).unwrap();
                println!("  member at the origin has {} terms and smoothness order {order}", p.support_len());
                for (idx, c) in sol.residual_poly(&vec![0.0; sol.dimension()]).terms() {
                    println!("  a{idx} = {:+.6}{:+.6}i", c.re, c.im);
                }
            }
            Err(e) => println!("symmetry={symmetry}: {e}"),
        }
    }
}
