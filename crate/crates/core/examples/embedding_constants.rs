// Embedding constants of a finite measure: Perron bound, Schur bound and the
// exact dual norm, with the one-box supremum for comparison.

use carleson::{embedding_report, one_box_sup, AtomicMeasure, DiskPoint, Gauge};

pub fn run_example() -> anyhow::Result<()> {
    let atoms = (0..32).map(|k| {
        let r = 1.0 - 0.5f64.powi(1 + k % 8);
        (DiskPoint::from_polar(r, 0.2 * k as f64).unwrap(), 1.0 / 32.0)
    });
    let mu = AtomicMeasure::from_pairs(atoms)?;
    let report = embedding_report(&mu)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    assert!(report.perron_bound <= report.schur_bound + 1e-9);

    let sup = one_box_sup(&mu, &Gauge::log(std::f64::consts::E)?, 16)?;
    println!("one-box sup for log(e): {:.6} at {:?}", sup.value, sup.witness);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
