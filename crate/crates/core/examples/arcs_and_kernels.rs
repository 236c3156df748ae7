// Arcs on the unit circle, their dilations, and the three kernels.
//
// ```text
// cargo run -p carleson --example arcs_and_kernels
// ```

use std::f64::consts::PI;

use carleson::{box_contains, log_chord, log_kernel, repr_kernel, Arc, ArcSet, DiskPoint, KernelPoint};

pub fn run_example() -> anyhow::Result<()> {
    // two arcs 0.5 apart merge once each side grows by 0.25
    let set = ArcSet::new(vec![Arc::new(0.0, 0.5)?, Arc::new(1.0, 0.5)?])?;
    let grown = set.dilate(0.25)?;
    println!("{} arcs, total length {:.4}", set.len(), set.total_length());
    println!("dilated by 0.25: {} arc(s), total length {:.4}", grown.len(), grown.total_length());
    assert_eq!(grown.len(), 1);

    let z = DiskPoint::from_polar(0.95, 0.1)?;
    let arc = Arc::new(0.0, 0.2)?;
    println!("0.95 e^(0.1 i) in S(I) for |I| = 0.2: {}", box_contains(&arc, &z));

    println!("log_chord(pi) = {:.15} (ln 2 = {:.15})", log_chord(PI)?, 2f64.ln());
    let w = DiskPoint::from_polar(0.5, 2.0)?;
    println!("L(w, z) = {:.12}", log_kernel(w, z)?);
    println!("L(boundary 0, z) = {:.12}", log_kernel(KernelPoint::Boundary(0.0), z)?);
    let k = repr_kernel(&z, &w);
    println!("k(z, w) = {:.12} {:+.12} i", k.re, k.im);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
