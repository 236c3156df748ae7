//! Every example under `examples/` runs to completion.

#[allow(dead_code)]
mod arcs_and_kernels {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/arcs_and_kernels.rs"));
}

#[test]
fn arcs_and_kernels_runs() {
    arcs_and_kernels::run_example().expect("arcs_and_kernels example should run");
}

#[allow(dead_code)]
mod measures_and_fubini {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/measures_and_fubini.rs"));
}

#[test]
fn measures_and_fubini_runs() {
    measures_and_fubini::run_example().expect("measures_and_fubini example should run");
}

#[allow(dead_code)]
mod gauge_integral_test {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gauge_integral_test.rs"));
}

#[test]
fn gauge_integral_test_runs() {
    gauge_integral_test::run_example().expect("gauge_integral_test example should run");
}

#[allow(dead_code)]
mod arc_capacity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/arc_capacity.rs"));
}

#[test]
fn arc_capacity_runs() {
    arc_capacity::run_example().expect("arc_capacity example should run");
}

#[allow(dead_code)]
mod embedding_constants {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/embedding_constants.rs"));
}

#[test]
fn embedding_constants_runs() {
    embedding_constants::run_example().expect("embedding_constants example should run");
}

#[allow(dead_code)]
mod cantor_counterexample {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cantor_counterexample.rs"));
}

#[test]
fn cantor_counterexample_runs() {
    cantor_counterexample::run_example().expect("cantor_counterexample example should run");
}

#[allow(dead_code)]
mod radial_divergence {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/radial_divergence.rs"));
}

#[test]
fn radial_divergence_runs() {
    radial_divergence::run_example().expect("radial_divergence example should run");
}

#[allow(dead_code)]
mod potential_certificate {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/potential_certificate.rs"));
}

#[test]
fn potential_certificate_runs() {
    potential_certificate::run_example().expect("potential_certificate example should run");
}

#[allow(dead_code)]
mod cli_harness {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli_harness.rs"));
}

#[test]
fn cli_harness_runs() {
    cli_harness::run_example().expect("cli_harness example should run");
}
