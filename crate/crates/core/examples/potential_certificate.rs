// Certifying bounded potentials from the one-box constant when the gauge
// passes the integral test.

use carleson::{potential_certificate, AtomicMeasure, DiskPoint, Gauge};

pub fn run_example() -> anyhow::Result<()> {
    let phi: Gauge = "loglog:a=10,alpha=2".parse()?;
    let mu = AtomicMeasure::from_pairs((1..=12).map(|j| {
        let r = 1.0 - 0.5f64.powi(j);
        (DiskPoint::from_polar(r, 0.0).unwrap(), 0.05)
    }))?;
    let cert = potential_certificate(&mu, &phi, 16, 32)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    assert!(cert.pass);

    // log(e) fails the integral test, so no certificate is issued
    let refused = potential_certificate(&mu, &"log:e".parse()?, 16, 32);
    println!("log:e -> {}", refused.unwrap_err());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
