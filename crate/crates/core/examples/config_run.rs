// Driving the `nvmag` commands from a configuration in code, the same
// path the binary takes.
//
//     cargo run --release --example config_run

use clap::Parser;
use nvmag::cli::{run, Cli, ExperimentConfig};

const CONFIG: &str = r#"
[physics]
species = "c13"
t2_star_us = 2.0

[protocol]
tau_us = 1.3

[sweep]
mode = "point"

[timing]
efficiency = 0.707
"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let dir = std::env::temp_dir().join(format!("nvmag-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("point.toml");
    std::fs::write(&path, toml::to_string(&cfg)?)?;

    let cli = Cli::try_parse_from([
        "nvmag",
        "sensitivity",
        "--config",
        path.to_str().unwrap_or_default(),
    ])?;
    let out = run(&cli)?;
    print!("{}", out.text);

    let json = Cli::try_parse_from(["nvmag", "signal", "--format", "json", "--seed", "3"])?;
    let out = run(&json)?;
    let v: serde_json::Value = serde_json::from_str(&out.text)?;
    println!(
        "\nsignal as JSON: {} rows, columns {}, config sha256 {}",
        v["rows"].as_array().map_or(0, Vec::len),
        v["columns"],
        v["metadata"]["config_sha256"]
    );
    std::fs::remove_dir_all(dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
