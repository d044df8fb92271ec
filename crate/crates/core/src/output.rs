//! CSV emission: `\n` line endings, `.` decimal point and 17 significant
//! digits for every float.

use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::series::TimeSeries;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column-oriented CSV builder.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Csv {
    body: String,
    columns: usize,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let line: Vec<&str> = header.iter().map(AsRef::as_ref).collect();
        Self {
            body: format!("{}\n", line.join(",")),
            columns: header.len(),
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        debug_assert_eq!(fields.len(), self.columns);
        let line: Vec<&str> = fields.iter().map(AsRef::as_ref).collect();
        self.body.push_str(&line.join(","));
        self.body.push('\n');
    }

    pub fn float_row(&mut self, fields: &[f64]) {
        let cells: Vec<String> = fields.iter().map(|&x| fmt_f64(x)).collect();
        self.row(&cells);
    }

    pub fn as_str(&self) -> &str {
        &self.body
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, &self.body)?;
        Ok(())
    }
}

/// `t,<name>` for a scalar series.
pub fn scalar_series_csv(series: &TimeSeries<f64>, name: &str) -> Csv {
    let mut csv = Csv::new(&["t", name]);
    for (t, &v) in series.iter() {
        csv.float_row(&[t, v]);
    }
    csv
}

/// `t,<a>,<b>` for two aligned scalar series.
pub fn paired_series_csv(
    a: &TimeSeries<f64>,
    a_name: &str,
    b: &TimeSeries<f64>,
    b_name: &str,
) -> Csv {
    let mut csv = Csv::new(&["t", a_name, b_name]);
    for ((t, &x), &y) in a.iter().zip(&b.values) {
        csv.float_row(&[t, x, y]);
    }
    csv
}

/// `t,n_0,…,n_N` for a population grid.
pub fn population_csv(series: &TimeSeries<Vec<f64>>) -> Csv {
    let mut header = vec!["t".to_string()];
    header.extend((0..series.width()).map(|i| format!("n_{i}")));
    let mut csv = Csv::new(&header);
    for (t, row) in series.iter() {
        let mut cells = Vec::with_capacity(row.len() + 1);
        cells.push(t);
        cells.extend_from_slice(row);
        csv.float_row(&cells);
    }
    csv
}
