//! Drive a pipeline from a TOML string and list what it wrote.

use bentguide::config::{Command, RunConfig};
use bentguide::pipeline::{run_resolved, RunContext};

const CONFIG: &str = r#"
[profile]
kind = "poschl_teller"
nu = 0.5
alpha = 0.125

[scatter]
n_k = 16
"#;

fn main() -> bentguide::Result<()> {
    let out = std::env::temp_dir().join("bentguide-example");
    let cfg = RunConfig::from_toml(CONFIG)?.resolve(Command::Scatter, std::path::Path::new("."))?;
    let manifest = run_resolved(Command::Scatter, &cfg, &out, RunContext::default())?;
    for o in &manifest.outputs {
        println!("{:<16} {:>8} bytes  {}", o.path, o.bytes, &o.sha256[..16]);
    }
    println!(
        "{}",
        std::fs::read_to_string(out.join("summary.toml")).map_err(|e| bentguide::Error::Internal(e.to_string()))?
    );
    Ok(())
}
