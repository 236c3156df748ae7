// Logarithmic capacity of arc unions by energy minimization.
//
// A single arc of length `l` has capacity `1 / log(2 / sin(l / 4))` with
// this kernel; the full circle gives `1 / log 2`.

use carleson::{capacity, Arc, ArcSet};

pub fn run_example() -> anyhow::Result<()> {
    let circle = capacity(&ArcSet::full_circle(), 512)?;
    println!("circle: {:.12} (1/ln 2 = {:.12})", circle.capacity, 1.0 / 2f64.ln());
    for len in [1e-1, 1e-2, 1e-4] {
        let est = capacity(&ArcSet::single(Arc::new(0.0, len)?), 512)?;
        let exact = 1.0 / (2.0 / (len / 4.0).sin()).ln();
        println!("arc {len:e}: {:.10} exact {exact:.10} converged {}", est.capacity, est.converged);
    }
    let pair = ArcSet::new(vec![Arc::new(0.0, 0.3)?, Arc::new(3.0, 0.3)?])?;
    let est = capacity(&pair, 256)?;
    println!("two arcs: {:.10}; history {:?}", est.capacity, est.history);
    let mut out = Vec::new();
    est.weights.write_csv(&mut out)?;
    println!("equilibrium weights: {} cells, total {:.12}", est.weights.cells.len(), est.weights.total());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
