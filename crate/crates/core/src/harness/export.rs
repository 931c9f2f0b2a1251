use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::metrics::{compute_metrics, Metrics};
use crate::harness::plot::{Panel, Series};
use crate::harness::run::{RunRecord, RunRow};

pub const CSV_HEADER: &str = "t,y0,y1,y2,y3,y4,ym,ymeas,ystar,u,p,fest,dest,interval,flag";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExportFormat {
    #[default]
    Csv,
    CsvSvg,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "csv+svg" => Ok(ExportFormat::CsvSvg),
            other => Err(format!("unknown format `{other}` (expected csv or csv+svg)")),
        }
    }
}

/// Rust's `Display` for `f64` is the shortest string that parses back to
/// the same bits, so the CSV round-trips exactly.
pub fn csv_string(rows: &[RunRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let [y0, y1, y2, y3, y4] = r.y;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            y0,
            y1,
            y2,
            y3,
            y4,
            r.ym,
            r.ymeas,
            r.ystar,
            r.u,
            r.p,
            r.fest,
            r.dest,
            r.interval,
            u8::from(r.flag)
        );
    }
    out
}

pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<RunRow>> {
    let bad = |line: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        Some(h) => return Err(bad(1, format!("unexpected header `{h}`"))),
        None => return Err(bad(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let v = line
            .split(',')
            .map(|f| f.parse::<f64>().map_err(|e| bad(lineno, format!("`{f}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if v.len() != 15 {
            return Err(bad(lineno, format!("expected 15 fields, found {}", v.len())));
        }
        rows.push(RunRow {
            t: v[0],
            y: [v[1], v[2], v[3], v[4], v[5]],
            ym: v[6],
            ymeas: v[7],
            ystar: v[8],
            u: v[9],
            p: v[10],
            fest: v[11],
            dest: v[12],
            interval: v[13],
            flag: v[14] != 0.0,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<RunRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, path)
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `trace.csv`, `events.csv` and `metrics.json` into `dir`, plus
/// `states.svg`, `tracking.svg` and `control.svg` for [`ExportFormat::CsvSvg`].
/// Returns the paths written.
pub fn export(record: &RunRecord, dir: impl AsRef<Path>, format: ExportFormat) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let metrics = compute_metrics(record, &record.spec);

    let mut written = vec![write(dir.join("trace.csv"), csv_string(&record.rows))?];
    let mut events = String::from("time,amplitude\n");
    for e in &record.events {
        let _ = writeln!(events, "{},{}", e.time, e.amplitude);
    }
    written.push(write(dir.join("events.csv"), events)?);
    written.push(write(dir.join("metrics.json"), metrics_json(&metrics))?);

    if format == ExportFormat::CsvSvg {
        for (name, panel) in panels(record) {
            written.push(write(dir.join(name), panel.to_svg())?);
        }
    }
    Ok(written)
}

pub fn metrics_json(m: &Metrics) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("metrics serialize");
    s.push('\n');
    s
}

/// The three figure panels: neural states, tracking and control input.
pub fn panels(record: &RunRecord) -> [(&'static str, Panel); 3] {
    let rows = &record.rows;
    let line = |label: &str, f: &dyn Fn(&RunRow) -> f64| {
        Series::new(label, rows.iter().map(|r| (r.t, f(r))).collect())
    };
    let states = Panel::new(
        "Neural states",
        "mV",
        (0..5).map(|i| line(&format!("y{i}"), &move |r: &RunRow| r.y[i])).collect(),
    );
    let signal = record.spec.output_signal;
    let tracking = Panel::new(
        "Output and reference",
        "mV",
        vec![
            line("measured", &|r| r.ymeas),
            line("output", &move |r| r.output(signal)),
            line("reference", &|r| r.ystar),
        ],
    );
    let control = Panel::new("Stimulation", "u", vec![line("u", &|r| r.u)]);
    [("states.svg", states), ("tracking.svg", tracking), ("control.svg", control)]
}
