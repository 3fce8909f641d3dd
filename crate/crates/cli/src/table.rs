//! Result tables and their CSV and two-column plot renderings.

use std::io::Write;

use casimir_friction::units::UnitSystem;

use crate::error::CliError;

/// Fixed-width scientific notation so identical inputs give identical bytes.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.15e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub hash: String,
    pub system: UnitSystem,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Column plotted against the first one in the two-column output.
    pub plot_column: usize,
}

impl Table {
    pub fn new(title: &str, hash: &str, system: UnitSystem, columns: Vec<String>, plot_column: usize) -> Self {
        Self {
            title: title.to_string(),
            hash: hash.to_string(),
            system,
            columns,
            rows: Vec::new(),
            plot_column,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Comment lines with the title, config hash and unit system, then the
    /// header row (units in brackets) and the data rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: "output".into(),
            source,
        };
        writeln!(out, "# casimir-friction {}", self.title).map_err(io)?;
        writeln!(out, "# config-sha256: {}", self.hash).map_err(io)?;
        writeln!(out, "# units: {}", self.system).map_err(io)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }

    /// Whitespace-separated `x y` pairs for gnuplot; rows without a value in
    /// the plotted column are skipped.
    pub fn write_plot<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: "plot".into(),
            source,
        };
        writeln!(out, "# {} {}", self.columns[0], self.columns[self.plot_column]).map_err(io)?;
        for row in &self.rows {
            let y = &row[self.plot_column];
            if !y.is_empty() {
                writeln!(out, "{} {}", row[0], y).map_err(io)?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_rows() {
        let mut t = Table::new(
            "force",
            "abc",
            UnitSystem::Natural,
            vec!["v [nat]".into(), "F [nat]".into()],
            1,
        );
        t.push(vec![fmt_num(1.0), fmt_num(-0.5)]);
        t.push(vec![fmt_num(2.0), String::new()]);
        let s = t.to_csv_string();
        assert_eq!(
            s,
            "# casimir-friction force\n# config-sha256: abc\n# units: natural (hbar = kB = 1)\n\
             v [nat],F [nat]\n1.000000000000000e0,-5.000000000000000e-1\n2.000000000000000e0,\n"
        );
        let mut plot = Vec::new();
        t.write_plot(&mut plot).unwrap();
        assert_eq!(
            String::from_utf8(plot).unwrap(),
            "# v [nat] F [nat]\n1.000000000000000e0 -5.000000000000000e-1\n"
        );
    }
}
