// A radial measure whose potential diverges doubly logarithmically at 1
// although its box masses stay within `1 / log(1/|I|)`.

use carleson::constructions::{radial_discrete_potential, radial_measure};
use carleson::{onearc_necessity_profile, radial_potential};

pub fn run_example() -> anyhow::Result<()> {
    for k in [2, 4, 8, 12] {
        let p = radial_potential(1.0 - 10f64.powi(-k))?;
        println!("P(1 - 1e-{k}) = {:.10}  (+- {:.1e})", p.value, p.error_estimate);
    }
    let mu = radial_measure(2000)?;
    for w in [0.5, 0.9, 0.99] {
        println!("w = {w}: closed {:.6}  discrete {:.6}", radial_potential(w)?.value, radial_discrete_potential(&mu, w)?);
    }
    for point in onearc_necessity_profile(&mu, 20)?.iter().step_by(4) {
        println!("|I| = {:.3e}: mu(S(I)) log(1/|I|) = {:.6}", point.length, point.value);
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
