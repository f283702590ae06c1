use serde::Serialize;
use std::io::{self, Write};
use std::path::Path;
use tempfile::NamedTempFile;

/// One (x, y) series for `--emit-plot-data`.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: &str, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.to_string(), points }
    }
}

/// A rendered result in both formats plus its plot series.
pub struct Artifact {
    json: String,
    csv: String,
    series: Vec<Series>,
}

impl Artifact {
    pub fn new<T: Serialize>(value: &T, csv: String, series: Vec<Series>) -> Self {
        let mut json = serde_json::to_string_pretty(value).expect("reports serialize");
        json.push('\n');
        Self { json, csv, series }
    }

    pub fn write(&self, csv: bool, out: Option<&Path>, plot: Option<&Path>) -> io::Result<()> {
        let body = if csv { &self.csv } else { &self.json };
        match out {
            Some(p) => write_atomic(p, body.as_bytes())?,
            None => io::stdout().lock().write_all(body.as_bytes())?,
        }
        if let Some(p) = plot {
            let mut s = String::from("series,x,y\n");
            for series in &self.series {
                for (x, y) in &series.points {
                    s.push_str(&format!("{},{},{:.12e}\n", series.name, x, y));
                }
            }
            write_atomic(p, s.as_bytes())?;
        }
        Ok(())
    }
}

/// Writes to a temporary file next to `path` and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
