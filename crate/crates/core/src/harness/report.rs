use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Counts of decisions per true group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionReport {
    pub name: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<usize>)>,
}

impl ConfusionReport {
    pub fn new(name: &str, title: &str, columns: Vec<String>, groups: &[String]) -> Self {
        let width = columns.len();
        ConfusionReport {
            name: name.to_string(),
            title: title.to_string(),
            columns,
            rows: groups.iter().map(|g| (g.clone(), vec![0; width])).collect(),
        }
    }

    pub fn add(&mut self, group: &str, outcome: &str) -> Result<()> {
        let col = self
            .columns
            .iter()
            .position(|c| c == outcome)
            .ok_or_else(|| Error::Config(format!("{}: no column for outcome {outcome}", self.name)))?;
        let row = self
            .rows
            .iter_mut()
            .find(|(g, _)| g == group)
            .ok_or_else(|| Error::Config(format!("{}: no row for group {group}", self.name)))?;
        row.1[col] += 1;
        Ok(())
    }

    pub fn row(&self, group: &str) -> Option<&[usize]> {
        self.rows
            .iter()
            .find(|(g, _)| g == group)
            .map(|(_, c)| c.as_slice())
    }

    pub fn count(&self, group: &str, outcome: &str) -> Option<usize> {
        let col = self.columns.iter().position(|c| c == outcome)?;
        self.row(group).map(|r| r[col])
    }

    pub fn row_total(&self, group: &str) -> Option<usize> {
        self.row(group).map(|r| r.iter().sum())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["true".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (g, counts) in &self.rows {
            let mut rec = vec![g.clone()];
            rec.extend(counts.iter().map(|c| c.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Plain-text table with right-aligned counts.
    pub fn to_text(&self) -> String {
        let first = self
            .rows
            .iter()
            .map(|(g, _)| g.chars().count())
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let digits = self
                    .rows
                    .iter()
                    .map(|(_, r)| r[k].to_string().len())
                    .max()
                    .unwrap_or(1);
                c.chars().count().max(digits)
            })
            .collect();
        let mut out = format!("{}\n", self.title);
        let _ = write!(out, "{:first$}", "");
        for (c, w) in self.columns.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
        for (g, counts) in &self.rows {
            let _ = write!(out, "{g:first$}");
            for (n, w) in counts.iter().zip(&widths) {
                let _ = write!(out, "  {n:>w$}");
            }
            out.push('\n');
        }
        out
    }
}
