//! Running an experiment config from code instead of through the binary.

use zeno_lab::experiment::{run, ExperimentConfig, RunOptions};

fn main() -> zeno_lab::Result<()> {
    let config = ExperimentConfig::from_json(
        r#"{"experiment": "spectral_report", "model": {"id": "cptp_kick_82", "q": 0.9}}"#,
    )?;
    let out = std::env::temp_dir().join("zeno-lab-example");
    let summary = run(&config, &RunOptions { out_dir: out, format: None, seed: None })?;
    println!("{}", summary.line);
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
