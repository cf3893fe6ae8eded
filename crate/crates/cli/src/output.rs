//! Result persistence: fixed-schema CSV bodies plus a deterministic
//! metadata sidecar carrying the resolved configuration.

use crate::config::ARTIFACT_VERSION;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use sweepdec::montecarlo::FailureCurve;

pub const CURVE_CSV_HEADER: &str =
    "lattice,L,p,n_cyc,trials,failures,wilson_low,wilson_high,seed";

/// Render failure curves into the fixed CSV schema. Floats print in
/// shortest-roundtrip form, so identical runs give identical bytes.
pub fn curves_to_csv(curves: &[FailureCurve]) -> String {
    let mut out = String::from(CURVE_CSV_HEADER);
    out.push('\n');
    for curve in curves {
        for pt in &curve.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                curve.lattice,
                curve.l,
                pt.p,
                curve.n_cyc,
                pt.trials,
                pt.failures,
                pt.wilson_low,
                pt.wilson_high,
                pt.seed
            ));
        }
    }
    out
}

/// Parse a curve CSV back into failure curves (grouped by lattice, size and
/// cycle count, in first-appearance order).
pub fn curves_from_csv(text: &str) -> anyhow::Result<Vec<FailureCurve>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow::anyhow!("empty CSV"))?;
    if header.trim() != CURVE_CSV_HEADER {
        anyhow::bail!("unexpected CSV header: {header}");
    }
    let mut curves: Vec<FailureCurve> = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            anyhow::bail!("line {}: expected 9 fields, got {}", ln + 2, f.len());
        }
        let parse = |s: &str| -> anyhow::Result<f64> {
            s.parse()
                .map_err(|e| anyhow::anyhow!("line {}: bad number {s}: {e}", ln + 2))
        };
        let lattice = f[0].to_string();
        let l: u32 = f[1].parse()?;
        let p = parse(f[2])?;
        let n_cyc: u32 = f[3].parse()?;
        let point = sweepdec::montecarlo::CurvePoint {
            p,
            trials: f[4].parse()?,
            failures: f[5].parse()?,
            wilson_low: parse(f[6])?,
            wilson_high: parse(f[7])?,
            seed: f[8].parse()?,
        };
        match curves
            .iter_mut()
            .find(|c| c.lattice == lattice && c.l == l && c.n_cyc == n_cyc)
        {
            Some(c) => c.points.push(point),
            None => curves.push(FailureCurve {
                lattice,
                l,
                n_cyc,
                points: vec![point],
            }),
        }
    }
    Ok(curves)
}

pub const THRESHOLDS_CSV_HEADER: &str = "n_cyc,p_th,p_th_err";

pub fn thresholds_to_csv(points: &[(u32, f64, f64)]) -> String {
    let mut out = String::from(THRESHOLDS_CSV_HEADER);
    out.push('\n');
    for (n, p, e) in points {
        out.push_str(&format!("{n},{p},{e}\n"));
    }
    out
}

pub fn thresholds_from_csv(
    text: &str,
) -> anyhow::Result<Vec<sweepdec::montecarlo::ThresholdPoint>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow::anyhow!("empty CSV"))?;
    if header.trim() != THRESHOLDS_CSV_HEADER {
        anyhow::bail!("unexpected CSV header: {header}");
    }
    let mut out = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            anyhow::bail!("expected 3 fields, got {}", f.len());
        }
        out.push(sweepdec::montecarlo::ThresholdPoint {
            n_cyc: f[0].parse()?,
            p_th: f[1].parse()?,
            p_th_err: f[2].parse()?,
        });
    }
    Ok(out)
}

/// Reproducibility sidecar written next to every artifact.
#[derive(Debug, Serialize, Deserialize)]
pub struct MetaDoc {
    pub artifact_version: String,
    pub config_hash: String,
    pub resolved_config: serde_json::Value,
}

pub fn write_with_meta<T: Serialize>(
    path: &Path,
    body: &str,
    config: &T,
    config_hash: &str,
) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    let meta = MetaDoc {
        artifact_version: ARTIFACT_VERSION.to_string(),
        config_hash: config_hash.to_string(),
        resolved_config: serde_json::to_value(config)?,
    };
    let meta_path = path.with_extension(format!(
        "{}meta.json",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

/// A chain or syndrome stored as a cell list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellListDoc {
    pub schema_version: u32,
    pub dim: u8,
    pub cells: Vec<u32>,
}
