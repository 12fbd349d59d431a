use std::fs;
use std::io::Write;
use std::path::Path;

use super::config::OutputSpec;
use super::run::{RunSummary, SlotRecord};
use super::svg::render_svg;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 6] = ["t", "r", "runavg_r", "tr_q", "runavg_tr_q", "z"];
/// Extra column written when a per-slot reference utility is tracked.
pub const CSV_REFERENCE_COLUMN: &str = "r_ref";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the slot trace. Floats use Rust's shortest round-trip formatting,
/// so identical runs give identical bytes and reloading is lossless.
pub fn write_csv<W: Write>(records: &[SlotRecord], out: W) -> Result<()> {
    let with_ref = records.iter().any(|r| r.r_ref.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header = CSV_HEADER.to_vec();
    if with_ref {
        header.push(CSV_REFERENCE_COLUMN);
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.t.to_string(),
            r.r.to_string(),
            r.runavg_r.to_string(),
            r.tr_q.to_string(),
            r.runavg_tr_q.to_string(),
            opt(r.z),
        ];
        if with_ref {
            row.push(opt(r.r_ref));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::Internal(format!("flushing CSV: {e}")))?;
    Ok(())
}

pub fn csv_string(records: &[SlotRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
}

/// Parses a trace written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<SlotRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header = rdr.headers()?.clone();
    let has_ref = header.iter().any(|h| h == CSV_REFERENCE_COLUMN);
    let num = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::Config(format!("{}: bad number {s:?}", path.display())))
    };
    let opt_num = |s: Option<&str>| -> Result<Option<f64>> {
        match s {
            None | Some("") => Ok(None),
            Some(s) => num(s).map(Some),
        }
    };
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        out.push(SlotRecord {
            t: row[0]
                .parse()
                .map_err(|_| Error::Config(format!("{}: bad slot index", path.display())))?,
            r: num(&row[1])?,
            runavg_r: num(&row[2])?,
            tr_q: num(&row[3])?,
            runavg_tr_q: num(&row[4])?,
            z: opt_num(row.get(5))?,
            r_ref: if has_ref { opt_num(row.get(6))? } else { None },
        });
    }
    Ok(out)
}

fn create(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::File::create(path).map_err(|e| Error::io(path, e))
}

/// Writes whichever of CSV, summary JSON and SVG the spec names.
pub fn emit_outputs(records: &[SlotRecord], summary: &RunSummary, paths: &OutputSpec) -> Result<()> {
    if let Some(p) = &paths.csv {
        let f = create(p)?;
        write_csv(records, std::io::BufWriter::new(f)).map_err(|e| match e {
            Error::Csv(c) => Error::Config(format!("{}: {c}", p.display())),
            other => other,
        })?;
    }
    if let Some(p) = &paths.summary {
        let mut f = create(p)?;
        let text = serde_json::to_string_pretty(summary)?;
        f.write_all(text.as_bytes())
            .and_then(|_| f.write_all(b"\n"))
            .map_err(|e| Error::io(p, e))?;
    }
    if let Some(p) = &paths.svg {
        let mut f = create(p)?;
        f.write_all(render_svg(records, summary).as_bytes())
            .map_err(|e| Error::io(p, e))?;
    }
    Ok(())
}
