// Driving the command-line harness in-process.

pub fn run_example() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join(format!("carleson-cli-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let arcs = dir.join("arcs.json");
    std::fs::write(&arcs, r#"{"arcs": [{"center": 0.0, "length": 0.5}, {"center": 2.0, "length": 0.25}]}"#)?;
    let out = dir.join("capacity.json");
    let code = carleson::cli::run([
        "carleson",
        "capacity",
        "--arcs",
        arcs.to_str().unwrap(),
        "--resolution",
        "128",
        "--output",
        out.to_str().unwrap(),
    ]);
    println!("capacity exit code {code}");
    println!("{}", std::fs::read_to_string(&out)?);

    let code = carleson::cli::run(["carleson", "--format", "csv", "counterexample", "--generations", "3"]);
    println!("counterexample exit code {code}");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
