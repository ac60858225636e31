//! Output-directory plumbing shared by the subcommands: tracked file
//! writers so a failed run can remove everything it wrote, plus the
//! formatting helpers that keep re-runs byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Records every file written during one run. On failure the caller
/// removes them all, so no partial output survives.
#[derive(Debug, Default)]
pub struct OutputTracker {
    files: Vec<PathBuf>,
}

impl OutputTracker {
    pub fn new() -> Self {
        OutputTracker::default()
    }

    /// Paths written so far, in write order.
    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    /// File names relative to `dir`, for manifest sections.
    pub fn names_under(&self, dir: &Path) -> Vec<String> {
        self.files
            .iter()
            .filter_map(|path| path.strip_prefix(dir).ok())
            .map(|rel| rel.to_string_lossy().into_owned())
            .collect()
    }

    /// Records a file written by other code so cleanup covers it too.
    pub fn note_written(&mut self, path: PathBuf) {
        self.files.push(path);
    }

    /// Best-effort removal of everything written so far.
    pub fn remove_all(&self) {
        for path in &self.files {
            let _ = fs::remove_file(path);
        }
    }

    pub fn write_csv<R>(&mut self, path: &Path, header: &[&str], rows: R) -> Result<()>
    where
        R: IntoIterator<Item = Vec<String>>,
    {
        let file = fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        let mut writer = csv::Writer::from_writer(file);
        writer
            .write_record(header)
            .with_context(|| format!("writing {}", path.display()))?;
        for row in rows {
            writer
                .write_record(&row)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        writer
            .flush()
            .with_context(|| format!("flushing {}", path.display()))?;
        self.files.push(path.to_path_buf());
        Ok(())
    }

    pub fn write_text(&mut self, path: &Path, content: &str) -> Result<()> {
        fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path.to_path_buf());
        Ok(())
    }
}

/// Creates the output directory and proves it is writable by creating
/// and removing a probe file, before any stage runs.
pub fn ensure_writable_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"probe")
        .with_context(|| format!("output directory {} is not writable", dir.display()))?;
    fs::remove_file(&probe)
        .with_context(|| format!("output directory {} is not writable", dir.display()))?;
    Ok(())
}

/// Shortest round-trip decimal form, the same on every run.
pub fn fmt_f64(value: f64) -> String {
    format!("{value}")
}

pub fn fmt_bool(value: bool) -> String {
    if value { "true" } else { "false" }.to_string()
}

/// Joins multi-valued CSV cells; members never contain the separator
/// in registry identifiers, and the csv writer quotes when they do.
pub fn join_ids(ids: &[String]) -> String {
    ids.join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracker_records_and_removes() {
        let dir = tempfile::tempdir().unwrap();
        let mut tracker = OutputTracker::new();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.txt");
        tracker
            .write_csv(&a, &["x", "y"], vec![vec!["1".to_string(), "2".to_string()]])
            .unwrap();
        tracker.write_text(&b, "hello\n").unwrap();
        assert_eq!(tracker.files().len(), 2);
        assert_eq!(tracker.names_under(dir.path()), vec!["a.csv", "b.txt"]);
        assert!(a.exists() && b.exists());
        tracker.remove_all();
        assert!(!a.exists() && !b.exists());
    }

    #[test]
    fn csv_output_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let rows = || {
            vec![
                vec!["u".to_string(), "a;b".to_string()],
                vec!["v".to_string(), "needs,quoting".to_string()],
            ]
        };
        OutputTracker::new()
            .write_csv(&path, &["id", "list"], rows())
            .unwrap();
        let first = fs::read(&path).unwrap();
        OutputTracker::new()
            .write_csv(&path, &["id", "list"], rows())
            .unwrap();
        assert_eq!(first, fs::read(&path).unwrap());
        let text = String::from_utf8(first).unwrap();
        assert!(text.contains("v,\"needs,quoting\""));
    }

    #[test]
    fn float_formatting_round_trips() {
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(2.0), "2");
        let third = 1.0_f64 / 3.0;
        assert_eq!(fmt_f64(third).parse::<f64>().unwrap(), third);
    }
}
