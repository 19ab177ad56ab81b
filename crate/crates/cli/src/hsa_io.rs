//! HSA characterization files.
//!
//! ```text
//! # name: long
//! # rows: 8
//! # columns: 5
//! # outer_diameter_mm: 31.75
//! # wall_thickness_mm: 1.8
//! # handedness: right
//! extension_mm,rotation_deg,force_n,torque_nmm
//! 0,0,0,0
//! ...
//! ```
//!
//! One row per grid point, extension-major. Leading `# key: value` lines
//! carry the HSA spec; unknown keys are ignored and missing ones fall back to
//! the long HSA. Rows are numbered from 1 after the header in errors.

use std::path::Path;

use trsll_core::hsa::{GridLimits, GridPoint, Handedness, HsaGrid, HsaSpec};

use crate::error::{CliError, Result};
use crate::output::num;

pub const HEADER: [&str; 4] = ["extension_mm", "rotation_deg", "force_n", "torque_nmm"];

pub fn read_grid(path: &Path, limits: &GridLimits) -> Result<HsaGrid> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_grid(&text, path, limits)
}

pub fn parse_grid(text: &str, source: &Path, limits: &GridLimits) -> Result<HsaGrid> {
    let spec = parse_metadata(text, source)?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::data(format!("{}: {e}", source.display())))?
        .clone();
    if header.iter().ne(HEADER) {
        return Err(CliError::data(format!(
            "{}: header must be `{}`, found `{}`",
            source.display(),
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let row_err = |row: usize, reason: String| CliError::Row {
        path: source.to_path_buf(),
        row,
        reason,
    };
    let mut points = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let row = k + 1;
        let rec = rec.map_err(|e| row_err(row, e.to_string()))?;
        if rec.len() != HEADER.len() {
            return Err(row_err(row, format!("expected {} fields, found {}", HEADER.len(), rec.len())));
        }
        let mut v = [0.0; 4];
        for (i, field) in rec.iter().enumerate() {
            v[i] = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| row_err(row, format!("{} `{field}` is not a finite number", HEADER[i])))?;
        }
        points.push(GridPoint {
            extension: v[0],
            rotation: v[1],
            force: v[2],
            torque: v[3],
        });
    }
    if points.is_empty() {
        return Err(CliError::data(format!("{}: no data rows", source.display())));
    }
    Ok(HsaGrid::from_points(spec, &points, limits)?)
}

fn parse_metadata(text: &str, source: &Path) -> Result<HsaSpec> {
    let mut spec = HsaSpec::long();
    if let Some(stem) = source.file_stem().and_then(|s| s.to_str()) {
        spec.name = stem.to_string();
    }
    for line in text.lines().map(str::trim).take_while(|l| l.starts_with('#') || l.is_empty()) {
        let Some((key, value)) = line.trim_start_matches('#').split_once(':') else {
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let bad = || CliError::data(format!("{}: metadata `{key}` has bad value `{value}`", source.display()));
        match key {
            "name" => spec.name = value.to_string(),
            "rows" => spec.rows = value.parse().map_err(|_| bad())?,
            "columns" => spec.columns = value.parse().map_err(|_| bad())?,
            "outer_diameter_mm" => spec.outer_diameter = value.parse().map_err(|_| bad())?,
            "wall_thickness_mm" => spec.wall_thickness = value.parse().map_err(|_| bad())?,
            "handedness" => {
                spec.handedness = match value.to_ascii_lowercase().as_str() {
                    "left" => Handedness::Left,
                    "right" => Handedness::Right,
                    _ => return Err(bad()),
                }
            }
            _ => {}
        }
    }
    spec.validate()?;
    Ok(spec)
}

pub fn metadata(spec: &HsaSpec) -> Vec<(&'static str, String)> {
    let handedness = match spec.handedness {
        Handedness::Left => "left",
        Handedness::Right => "right",
    };
    vec![
        ("name", spec.name.clone()),
        ("rows", spec.rows.to_string()),
        ("columns", spec.columns.to_string()),
        ("outer_diameter_mm", spec.outer_diameter.to_string()),
        ("wall_thickness_mm", spec.wall_thickness.to_string()),
        ("handedness", handedness.to_string()),
    ]
}

/// Grid rows in file order. Values use shortest round-trip formatting so an
/// exported grid reads back bit for bit.
pub fn grid_rows(grid: &HsaGrid) -> Vec<Vec<String>> {
    grid.points()
        .map(|p| {
            vec![
                p.extension.to_string(),
                p.rotation.to_string(),
                p.force.to_string(),
                p.torque.to_string(),
            ]
        })
        .collect()
}

/// Rows at six significant digits, for plot tables.
pub fn rounded_rows(points: impl Iterator<Item = GridPoint>) -> Vec<Vec<String>> {
    points
        .map(|p| vec![num(p.extension), num(p.rotation), num(p.force), num(p.torque)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(rows: impl Fn(usize, usize) -> Option<String>) -> String {
        let mut s = String::from("# name: test\n# rows: 4\nextension_mm,rotation_deg,force_n,torque_nmm\n");
        for i in 0..7 {
            for j in 0..14 {
                if let Some(r) = rows(i, j) {
                    s.push_str(&r);
                    s.push('\n');
                }
            }
        }
        s
    }

    fn plain(i: usize, j: usize) -> Option<String> {
        let (x, p) = (5.0 * i as f64, 120.0 * j as f64 / 13.0);
        Some(format!("{x},{p},{},{}", x - p / 10.0, p * 0.2))
    }

    #[test]
    fn well_formed_grid() {
        let g = parse_grid(&file(plain), Path::new("t.csv"), &GridLimits::default()).unwrap();
        assert_eq!(g.len(), 98);
        assert_eq!(g.spec.name, "test");
        assert_eq!(g.spec.rows, 4);
        assert_eq!(g.spec.columns, 5);
    }

    #[test]
    fn malformed_row_is_named() {
        let text = file(|i, j| if i * 14 + j == 16 { Some("0,abc,1,1".into()) } else { plain(i, j) });
        let err = parse_grid(&text, Path::new("t.csv"), &GridLimits::default()).unwrap_err();
        assert!(matches!(err, CliError::Row { row: 17, .. }), "{err}");
        assert!(err.to_string().contains("row 17"));
        let text = file(|i, j| if i * 14 + j == 3 { Some("0,1,2".into()) } else { plain(i, j) });
        let err = parse_grid(&text, Path::new("t.csv"), &GridLimits::default()).unwrap_err();
        assert!(matches!(err, CliError::Row { row: 4, .. }), "{err}");
    }

    #[test]
    fn shape_errors() {
        let text = file(|i, j| if j == 13 { None } else { plain(i, j) });
        let err = parse_grid(&text, Path::new("t.csv"), &GridLimits::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let bad_header = file(plain).replace("force_n", "force");
        assert!(parse_grid(&bad_header, Path::new("t.csv"), &GridLimits::default()).is_err());
    }
}
