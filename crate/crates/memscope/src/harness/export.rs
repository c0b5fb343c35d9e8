//! Result files: records, summaries, manifests, plots.
//!
//! Every experiment writes one directory under the results root:
//!
//! ```text
//! <root>/<id>/records.csv    one row per evaluation episode, stamped
//! <root>/<id>/summary.csv    learning curve, one row per checkpoint
//! <root>/<id>/manifest.json  exact config, stamp, and config fingerprint
//! <root>/<id>/curves.svg     success-rate curve with error band
//! ```
//!
//! `records.csv` is the source of truth; `summary.csv` and `curves.svg` can
//! be regenerated from it at any time with [`regenerate_report`]. Rows carry
//! the full classification stamp so a result file remains interpretable
//! without its manifest. All files are written deterministically: the same
//! config produces byte-identical output on every rerun.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::metrics::{learning_curve, CurvePoint, SummaryStat};
use crate::harness::plot::render_curve_svg;
use crate::harness::{EvalRecord, ExperimentResult, Stamp};
use crate::memory::MemoryTaskClass;

/// Directory results land in: `$MEMSCOPE_RESULTS_DIR`, or `./results`.
pub fn results_root() -> PathBuf {
    std::env::var_os("MEMSCOPE_RESULTS_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("results"))
}

pub const RECORDS_HEADER: &str =
    "config_id,run,eval_episode,seed,success,return,K,K_eff,xi_min,xi_max,K_bar,class";

pub const SUMMARY_HEADER: &str =
    "config_id,eval_episode,success_mean,success_sem,return_mean,return_sem";

/// One parsed row of `records.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub config_id: String,
    pub run: u32,
    pub eval_episode: u32,
    pub seed: u64,
    pub success: bool,
    pub ret: f64,
    pub k: u32,
    pub k_eff: u32,
    pub xi_min: u32,
    pub xi_max: u32,
    pub k_bar: u32,
    pub class: MemoryTaskClass,
}

fn records_csv(result: &ExperimentResult) -> String {
    let s = &result.stamp;
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in &result.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            result.config.id,
            r.run,
            r.eval_episode,
            r.seed,
            u8::from(r.success),
            r.ret,
            s.k,
            s.k_eff,
            s.xi_min,
            s.xi_max,
            s.k_bar,
            s.class,
        ));
    }
    out
}

fn summary_csv(id: &str, curve: &[CurvePoint]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for p in curve {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            id, p.eval_episode, p.success.mean, p.success.sem, p.ret.mean, p.ret.sem,
        ));
    }
    out
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Manifest {
    id: String,
    fingerprint: String,
    config: crate::harness::ExperimentConfig,
    stamp: Stamp,
}

/// Write the full result directory; returns its path.
pub fn export_result(result: &ExperimentResult, root: &Path) -> Result<PathBuf> {
    let dir = root.join(&result.config.id);
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("records.csv"), records_csv(result))?;
    fs::write(
        dir.join("summary.csv"),
        summary_csv(&result.config.id, &result.curve),
    )?;
    let manifest = Manifest {
        id: result.config.id.clone(),
        fingerprint: result.config.fingerprint(),
        config: result.config.clone(),
        stamp: result.stamp.clone(),
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(dir.join("manifest.json"), json)?;
    fs::write(
        dir.join("curves.svg"),
        render_curve_svg(&result.config.id, &result.curve),
    )?;
    Ok(dir)
}

/// Parse a `records.csv`.
pub fn load_rows(path: &Path) -> Result<Vec<ResultRow>> {
    let text = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let malformed = |line: usize, detail: String| Error::MalformedResults {
        path: display.clone(),
        detail: format!("line {line}: {detail}"),
    };

    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == RECORDS_HEADER => {}
        Some((_, h)) => {
            return Err(malformed(1, format!("unexpected header '{h}'")));
        }
        None => return Err(malformed(1, "empty file".into())),
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let n = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(malformed(
                n,
                format!("expected 12 fields, got {}", fields.len()),
            ));
        }
        let uint = |name: &str, v: &str| {
            v.parse::<u32>()
                .map_err(|_| malformed(n, format!("{name}: '{v}' is not an integer")))
        };
        rows.push(ResultRow {
            config_id: fields[0].to_string(),
            run: uint("run", fields[1])?,
            eval_episode: uint("eval_episode", fields[2])?,
            seed: fields[3]
                .parse::<u64>()
                .map_err(|_| malformed(n, format!("seed: '{}' is not an integer", fields[3])))?,
            success: match fields[4] {
                "1" => true,
                "0" => false,
                v => return Err(malformed(n, format!("success: '{v}' is not 0 or 1"))),
            },
            ret: fields[5]
                .parse::<f64>()
                .map_err(|_| malformed(n, format!("return: '{}' is not a number", fields[5])))?,
            k: uint("K", fields[6])?,
            k_eff: uint("K_eff", fields[7])?,
            xi_min: uint("xi_min", fields[8])?,
            xi_max: uint("xi_max", fields[9])?,
            k_bar: uint("K_bar", fields[10])?,
            class: MemoryTaskClass::parse(fields[11])
                .ok_or_else(|| malformed(n, format!("class: unknown value '{}'", fields[11])))?,
        });
    }
    Ok(rows)
}

/// What [`regenerate_report`] hands back for display.
#[derive(Debug, Clone)]
pub struct ReportSummary {
    pub id: String,
    pub dir: PathBuf,
    pub rows: usize,
    pub runs: usize,
    pub curve: Vec<CurvePoint>,
    pub final_success: SummaryStat,
    pub final_return: SummaryStat,
    /// From the manifest, when one is present next to the records.
    pub stamp: Option<Stamp>,
}

/// Rebuild `summary.csv` and `curves.svg` for an existing result directory
/// from its `records.csv`, and return the recomputed summary.
pub fn regenerate_report(id: &str, root: &Path) -> Result<ReportSummary> {
    let dir = root.join(id);
    let records_path = dir.join("records.csv");
    if !records_path.is_file() {
        return Err(Error::NoResults(format!(
            "no records at {}",
            records_path.display()
        )));
    }
    let rows = load_rows(&records_path)?;
    if rows.is_empty() {
        return Err(Error::MalformedResults {
            path: records_path.display().to_string(),
            detail: "no data rows".into(),
        });
    }

    let records: Vec<EvalRecord> = rows
        .iter()
        .map(|r| EvalRecord {
            run: r.run,
            eval_episode: r.eval_episode,
            seed: r.seed,
            success: r.success,
            ret: r.ret,
        })
        .collect();
    let curve = learning_curve(&records);
    fs::write(dir.join("summary.csv"), summary_csv(id, &curve))?;
    fs::write(dir.join("curves.svg"), render_curve_svg(id, &curve))?;

    let stamp = fs::read_to_string(dir.join("manifest.json"))
        .ok()
        .and_then(|text| serde_json::from_str::<Manifest>(&text).ok())
        .map(|m| m.stamp);

    let mut runs: Vec<u32> = rows.iter().map(|r| r.run).collect();
    runs.sort_unstable();
    runs.dedup();
    let last = *curve.last().expect("nonempty rows give a nonempty curve");
    Ok(ReportSummary {
        id: id.to_string(),
        dir,
        rows: rows.len(),
        runs: runs.len(),
        curve,
        final_success: last.success,
        final_return: last.ret,
        stamp,
    })
}
