//! Writes value tables for the fixed-support dual pair (L = 3, d = 2) on
//! the sheared lattice, one CSV per window.
//!
//! Usage: window_tables [output-dir]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use gabor_pou::gabor;
use gabor_pou::lattice::LatticeMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;
    let b: LatticeMatrix = "0.5,0;-0.5,0.5".parse()?;
    let pair = gabor::fixed_support_pair(3, 2, &b)?;
    let report = gabor::verify_duality(&pair, 100);
    println!("duality residual {:.1e} over {} shifts", report.max_residual, report.shifts.len());

    for (name, w) in [("g", pair.analysis()), ("h", pair.synthesis())] {
        let rows = gabor::sample_window_grid(w, 0.05)?;
        let peak = rows.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
        let path = dir.join(format!("window_{name}.csv"));
        gabor::write_grid_csv(&rows, 2, BufWriter::new(File::create(&path)?))?;
        println!("{}: {} rows, peak {peak:.4}", path.display(), rows.len());
    }
    Ok(())
}
