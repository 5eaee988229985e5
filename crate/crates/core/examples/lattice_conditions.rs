//! Support condition for translation lattices: which B keep the shifted
//! supports of a window on [0,N]^d from overlapping badly.

use gabor_pou::lattice::{self, LatticeMatrix};

fn show(label: &str, b: &LatticeMatrix, n: u64) {
    let r = lattice::support_condition(b, n);
    let witness = match (&r.witness, &r.witness_image) {
        (Some(w), Some(img)) => format!(", witness {w} -> {img:.3?}"),
        _ => String::new(),
    };
    println!(
        "{label:<28} N={n} |B|={:.3} norm bound {}: {}{witness}",
        r.spectral_norm,
        if lattice::norm_sufficient(b, n) { "met" } else { "not met" },
        if r.pass { "holds" } else { "fails" },
    );
}

fn main() {
    show("I/2", &LatticeMatrix::scalar(2, 0.5).unwrap(), 2);
    show("shear, large norm", &"0.5,0;-50,0.5".parse().unwrap(), 2);
    show("rotated, slightly too big", &"0.3,0.3;0.3,-0.3".parse().unwrap(), 2);
    show("sheared lower triangle", &"0.5,0;-0.5,0.5".parse().unwrap(), 2);
    for eps in [0.5, 0.01, 1e-4] {
        let b = lattice::scaling_counterexample(eps).unwrap();
        show(&format!("det {eps:e}"), &b, 2);
    }

    // Coset representatives of Z^2 / Binv Z^2 index the modulations.
    let binv = vec![vec![2.0, 0.0], vec![2.0, 2.0]];
    let reps = lattice::coset_reps(&binv).unwrap();
    let list: Vec<String> = reps.iter().map(|r| r.to_string()).collect();
    println!("\ncoset representatives for [[2,0],[2,2]]: {}", list.join(" "));
}
