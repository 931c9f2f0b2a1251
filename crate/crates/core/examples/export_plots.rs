//! Runs a bundled scenario and writes the trace, events, metrics and the
//! three SVG panels. Usage: `export_plots [scenario.json] [out_dir]`.

use std::path::{Path, PathBuf};

use neuroloop::harness::{export, parse_config, run, ExportFormat};

fn main() -> neuroloop::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/scenario3c.json"));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out/plots"));
    let spec = parse_config(&config)?;
    let rec = run(&spec)?;
    for path in export(&rec, &out, ExportFormat::CsvSvg)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
