// Atomic measures: box masses, JSON round trip, and the layer-cake
// representation of the potential.

use carleson::{potential, Arc, ArcSet, AtomicMeasure, DiskPoint};

pub fn run_example() -> anyhow::Result<()> {
    let mu = AtomicMeasure::from_pairs([
        (DiskPoint::from_polar(0.9, 0.0)?, 0.5),
        (DiskPoint::from_polar(0.99, 0.05)?, 0.25),
        (DiskPoint::from_polar(0.3, 3.0)?, 1.0),
    ])?;
    let text = mu.to_json()?;
    assert_eq!(AtomicMeasure::from_json(&text)?, mu);

    let arc = Arc::new(0.0, 0.2)?;
    println!("total mass {:.3}", mu.total_mass());
    println!("mu(S(I)) for |I| = 0.2 at 0: {:.3}", mu.box_mass_arc(&arc));
    println!("mu over the union box: {:.3}", mu.box_mass(&ArcSet::single(arc)));

    let w = DiskPoint::from_polar(0.95, 0.02)?;
    let direct = potential(&mu, w);
    let profile = mu.fubini_profile(w);
    println!("potential {direct:.15}");
    println!("layer cake {:.15}", profile.integral());
    let mut out = Vec::new();
    profile.write_csv(&mut out)?;
    print!("{}", String::from_utf8(out)?);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
