use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use super::{io_err, GapRow, RunError, SampleRow};
use crate::diagnostics::DiagnosticsOptions;

/// 17 significant digits: parses back to the identical `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| RunError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

fn csv_bytes(header: &[String], rows: impl Iterator<Item = Vec<String>>, path: &Path) -> Result<Vec<u8>, RunError> {
    let csv_err = |e: csv::Error| RunError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| RunError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Column names of `series.csv`.
pub fn series_header(opts: &DiagnosticsOptions, probes: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "t",
        "mass",
        "energy",
        "sup_u",
        "hN",
        "xv_h3",
        "x2v_h2",
        "xi5_sup",
        "edge_warning",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    h.extend(opts.lp_range.clone().map(|k| format!("lp_{k}")));
    h.extend((0..probes).map(|i| format!("B_probe{i}")));
    h
}

/// Writes the time series.
pub fn emit_series(rows: &[SampleRow], opts: &DiagnosticsOptions, path: &Path) -> Result<(), RunError> {
    let first = rows.first().ok_or(RunError::Empty)?;
    let header = series_header(opts, first.probe_b.len());
    let body = rows.iter().map(|row| {
        let r = &row.record;
        let mut out: Vec<String> = [r.t, r.mass, r.energy, r.sup_u, r.h_n, r.xv_h3, r.x2v_h2, r.xi5_sup]
            .iter()
            .map(|&x| format_f64(x))
            .collect();
        out.push(u8::from(r.edge_warning).to_string());
        out.extend(r.lp_profile.iter().map(|&x| format_f64(x)));
        out.extend(row.probe_b.iter().map(|&x| format_f64(x)));
        out
    });
    let bytes = csv_bytes(&header, body, path)?;
    write_atomic(path, &bytes)
}

/// Writes the dyadic gap table. An empty table still gets its header row.
pub fn emit_gaps(gaps: &[GapRow], path: &Path) -> Result<(), RunError> {
    let header: Vec<String> = ["m", "t1", "t2", "gap_w", "gap_v"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let body = gaps.iter().map(|g| {
        vec![
            g.m.to_string(),
            format_f64(g.t1),
            format_f64(g.t2),
            format_f64(g.gap_w),
            format_f64(g.gap_v),
        ]
    });
    let bytes = csv_bytes(&header, body, path)?;
    write_atomic(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::DiagnosticsRecord;

    #[test]
    fn format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, f64::MAX, 6.02214076e23, 0.0] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn one_record_two_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("series.csv");
        let rec = DiagnosticsRecord {
            t: 0.0,
            mass: 1.0,
            energy: -0.5,
            sup_u: 0.1,
            h_n: 2.0,
            xv_h3: 3.0,
            x2v_h2: 4.0,
            xi5_sup: 5.0,
            lp_profile: vec![0.25, 0.5],
            edge_warning: false,
            sobolev_order: 10.0,
        };
        let opts = DiagnosticsOptions {
            sobolev_order: 10.0,
            lp_range: 0..=1,
        };
        emit_series(
            &[SampleRow {
                record: rec,
                probe_b: vec![0.125],
            }],
            &opts,
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "t,mass,energy,sup_u,hN,xv_h3,x2v_h2,xi5_sup,edge_warning,lp_0,lp_1,B_probe0"
        );
        assert!(emit_series(&[], &opts, &path).is_err());
        assert!(emit_gaps(&[], &dir.path().join("missing/gaps.csv")).is_err());
    }
}
