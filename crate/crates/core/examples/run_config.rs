// Running an experiment config programmatically, as the CLI does.

use std::path::Path;

use tangent_lab::xcli;

pub fn run_example() -> tangent_lab::Result<bool> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs/glue_check_u1.toml");
    let out = std::env::temp_dir().join("tangent-lab-run-config");
    let (outcome, artifacts) = xcli::run(&config, Some(&out), None)?;
    for c in &outcome.checks {
        println!("{:<28} {:.3e} (tolerance {:.0e}) {}", c.invariant, c.value, c.tolerance, c.pass);
    }
    println!("wrote {}", artifacts.results.display());
    Ok(outcome.pass())
}

fn main() -> tangent_lab::Result<()> {
    assert!(run_example()?);
    Ok(())
}
