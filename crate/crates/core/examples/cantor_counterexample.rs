// Generalized Cantor sets and the counterexample measure for `phi = log(e)`:
// every one-box ratio stays below 8 while `mu(union S(I_j)) / c(union I_j)`
// grows like `(3/2)^n`.

use std::f64::consts::E;

use carleson::{cantor_surrogate, capacity, counterexample, scheme_from_gauge, Gauge, Mode};

pub fn run_example() -> anyhow::Result<()> {
    let phi = Gauge::log(E)?;
    let scheme = scheme_from_gauge(&phi, 6)?;
    let lambdas = scheme.lambdas();
    println!("lambda_n = {lambdas:?}");
    for m in 3..=5 {
        let arcs = scheme.literal_arcs(m)?;
        let qp = capacity(&arcs, 256)?.capacity;
        println!("generation {m}: {} arcs, QP {qp:.6}, surrogate {:.6}", arcs.len(), cantor_surrogate(&lambdas, m)?);
    }

    let report = counterexample(&phi, 6, 4, Mode::Surrogate)?;
    let mut out = Vec::new();
    report.write_csv(&mut out)?;
    print!("{}", String::from_utf8(out)?);

    let literal = counterexample(&phi, 1, 4, Mode::Literal)?;
    for notice in &literal.notices {
        println!("notice: {notice}");
    }
    if let Some(check) = &literal.onebox {
        println!("{}", serde_json::to_string(check)?);
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
