//! Configuration, orchestration and file outputs for the `nsp-decay-lab`
//! experiments.
//!
//! Exit codes: `0` ok, `2` configuration or parameter domain, `3` numeric
//! guard (vacuum, step size, divergence), `4` I/O or file format.

pub mod config;
pub mod error;
pub mod outputs;
pub mod run;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

pub use config::{load_config, ExperimentConfig, Kind};
pub use error::{LabError, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, EXIT_OK};
pub use run::{run_experiment, Failure, RunOutput};

use outputs::{write_atomic, write_json, write_norms};

/// Result of [`execute`]: the exit code, the output directory and, on
/// failure, the error.
pub struct Execution {
    pub exit_code: u8,
    pub out: PathBuf,
    pub error: Option<LabError>,
}

/// `--out`, then the config's `out`, then `runs/<kind>`.
pub fn output_dir(cfg: &ExperimentConfig, cli: Option<&Path>) -> PathBuf {
    cli.map(Path::to_path_buf)
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("runs").join(cfg.kind().as_str()))
}

fn failure_value(err: &LabError) -> Value {
    json!({
        "class": err.class(),
        "exit_code": err.exit_code(),
        "message": err.to_string(),
    })
}

/// Runs a loaded config and writes `manifest.json`, `config.toml`,
/// `norms.csv` and `report.json` (plus kind-specific files) under `out`.
pub fn execute_config(cfg: &ExperimentConfig, out: &Path, config_path: Option<&Path>) -> Execution {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
    let clock = Instant::now();
    let result = run_experiment(cfg, out);
    let wall = clock.elapsed().as_secs_f64();
    let mut files = vec!["manifest.json".to_string(), "config.toml".into(), "norms.csv".into(), "report.json".into()];
    let written = (|| -> Result<(Option<LabError>, Value), LabError> {
        let (error, series, report, notes) = match result {
            Ok(o) => {
                for (name, text) in &o.files {
                    write_atomic(&out.join(name), text.as_bytes())?;
                    files.push(name.clone());
                }
                if let Some(list) = o.report.get("checkpoints").and_then(Value::as_array) {
                    files.extend(list.iter().filter_map(Value::as_str).map(str::to_string));
                }
                (None, o.series, o.report, o.notes)
            }
            Err(Failure { error, series }) => {
                let report = json!({
                    "status": "failed",
                    "kind": cfg.kind().as_str(),
                    "failure": failure_value(&error),
                });
                (Some(error), *series, report, json!({}))
            }
        };
        write_norms(&out.join("norms.csv"), &series)?;
        write_json(&out.join("report.json"), &report)?;
        write_atomic(&out.join("config.toml"), cfg.to_toml()?.as_bytes())?;
        let manifest = json!({
            "tool": "nsp-decay-lab",
            "versions": {
                "nsp-decay-lab": env!("CARGO_PKG_VERSION"),
                "nsp-decay-core": nsp_decay_core::VERSION,
            },
            "kind": cfg.kind().as_str(),
            "seed": cfg.seed,
            "config_file": config_path.map(|p| p.display().to_string()),
            "config": cfg,
            "status": if error.is_some() { "failed" } else { "ok" },
            "failure": error.as_ref().map(failure_value),
            "started_unix": started,
            "wall_time_seconds": wall,
            "outputs": files,
            "notes": notes,
        });
        write_json(&out.join("manifest.json"), &manifest)?;
        Ok((error, manifest))
    })();
    match written {
        Ok((error, _)) => Execution {
            exit_code: error.as_ref().map_or(EXIT_OK, LabError::exit_code),
            out: out.to_path_buf(),
            error,
        },
        Err(e) => Execution {
            exit_code: e.exit_code(),
            out: out.to_path_buf(),
            error: Some(e),
        },
    }
}

/// Loads `config_path` and runs it; `seed` and `out` override the file.
pub fn execute(kind: Kind, config_path: &Path, out: Option<&Path>, seed: Option<u64>) -> Execution {
    let mut cfg = match load_config(config_path, Some(kind)) {
        Ok(c) => c,
        Err(e) => {
            return Execution {
                exit_code: e.exit_code(),
                out: out.map(Path::to_path_buf).unwrap_or_default(),
                error: Some(e),
            }
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = output_dir(&cfg, out);
    cfg.out = Some(dir.clone());
    execute_config(&cfg, &dir, Some(config_path))
}

/// One-line JSON description of a failure, for stderr.
pub fn failure_line(err: &LabError) -> String {
    let mut v = failure_value(err);
    v["status"] = json!("failed");
    v.to_string()
}
