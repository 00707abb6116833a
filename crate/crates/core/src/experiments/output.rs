//! CSV and JSON serialization of scenario results plus the metadata sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{
    BlochRun, ConcurrenceMap, GateTable, Result, ScenarioConfig, SweepResult, HIGH_CONCURRENCE,
};

/// Significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

/// `%.12g`-style formatting, with `-0` written as `0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", CSV_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..CSV_DIGITS as i32).contains(&exp) {
        let decimals = (CSV_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn csv<I: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: I) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn bloch_csv(run: &BlochRun) -> String {
    csv(
        &["t", "x", "y", "z", "norm", "purity"],
        run.samples.iter().map(|s| {
            [s.t, s.x, s.y, s.z, s.norm, s.purity]
                .into_iter()
                .map(fmt_f64)
                .collect()
        }),
    )
}

pub fn sweep_csv(res: &SweepResult) -> String {
    let two_qubit = res.rows.first().is_some_and(|r| r.concurrence.is_some());
    let last = if two_qubit {
        "concurrence"
    } else {
        "bloch_norm"
    };
    csv(
        &["gamma_d", "gamma_r", "fidelity", "entropy", "purity", last],
        res.rows.iter().map(|r| {
            vec![
                fmt_f64(r.gamma_d),
                fmt_f64(r.gamma_r),
                fmt_f64(r.fidelity),
                fmt_f64(r.entropy),
                fmt_f64(r.purity),
                opt(if two_qubit {
                    r.concurrence
                } else {
                    r.bloch_norm
                }),
            ]
        }),
    )
}

/// Long format, one line per cell; `high` is 1 where `𝒞 ≥ 0.90`.
pub fn map_csv(map: &ConcurrenceMap) -> String {
    csv(
        &["gamma_d", "gamma_r", "concurrence", "high"],
        map.cells.iter().map(|c| {
            vec![
                fmt_f64(c.gamma_d),
                fmt_f64(c.gamma_r),
                fmt_f64(c.concurrence),
                u8::from(c.concurrence >= HIGH_CONCURRENCE).to_string(),
            ]
        }),
    )
}

pub fn gate_table_csv(table: &GateTable) -> String {
    csv(
        &[
            "gate",
            "construction",
            "max_abs_deviation",
            "canonical_deviation",
        ],
        table.gates.iter().map(|g| {
            vec![
                serde_json::to_value(g.gate)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                format!("\"{}\"", g.construction),
                fmt_f64(g.max_abs_deviation),
                fmt_f64(g.canonical_deviation),
            ]
        }),
    )
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}

/// Provenance written next to every output file as `<file>.meta.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a ScenarioConfig,
    pub wall_clock_seconds: f64,
    pub threads: usize,
}

impl<'a> RunMetadata<'a> {
    pub fn new(config: &'a ScenarioConfig, wall_clock_seconds: f64) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("SIM_VERSION"),
            config,
            wall_clock_seconds,
            threads: rayon::current_num_threads(),
        }
    }
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".meta.json");
    path.with_file_name(name)
}

/// Writes `body` to `path` (or stdout) and, for files, the metadata sidecar.
pub fn write_output(path: Option<&Path>, body: &str, meta: &RunMetadata<'_>) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, body)?;
            std::fs::write(meta_path(p), to_json(meta))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// One-line human summary for stderr.
pub fn summary_line(cfg: &ScenarioConfig, rows: usize, seconds: f64) -> String {
    format!("{}: {rows} rows in {seconds:.2}s", cfg.scenario.name())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{MapCell, ScenarioKind};

    #[test]
    fn number_format() {
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(1e-20), "1e-20");
        assert_eq!(fmt_f64(0.1 + 0.2), "0.3");
        assert_eq!(fmt_f64(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(fmt_f64(2.0 / 3.0 * 1e-5), "6.66666666667e-6");
        assert_eq!(fmt_f64(0.0001234), "0.0001234");
        assert_eq!(fmt_f64(123456789012.0), "123456789012");
        assert_eq!(fmt_f64(1.5e12), "1.5e12");
        assert_eq!(fmt_f64(0.999999999999951), "1");
    }

    #[test]
    fn map_flags_high_cells() {
        let map = ConcurrenceMap {
            gamma_d: vec![0.0],
            gamma_r: vec![0.0, 0.4],
            cells: vec![
                MapCell {
                    gamma_d: 0.0,
                    gamma_r: 0.0,
                    concurrence: 1.0,
                },
                MapCell {
                    gamma_d: 0.0,
                    gamma_r: 0.4,
                    concurrence: 0.5,
                },
            ],
        };
        assert_eq!(
            map_csv(&map),
            "gamma_d,gamma_r,concurrence,high\n0,0,1,1\n0,0.4,0.5,0\n"
        );
    }

    #[test]
    fn sidecar_path() {
        assert_eq!(
            meta_path(Path::new("/tmp/out.csv")),
            PathBuf::from("/tmp/out.csv.meta.json")
        );
    }

    #[test]
    fn metadata_echoes_config() {
        let cfg = ScenarioConfig::default_for(ScenarioKind::GateTable);
        let json = to_json(&RunMetadata::new(&cfg, 0.5));
        assert!(json.contains("\"GATE_TABLE\""));
        assert!(json.contains("\"version\""));
    }
}
