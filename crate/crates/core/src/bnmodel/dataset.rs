//! Column-oriented table of discrete observations.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bnmodel::BnError;

/// Discrete observations stored column by column as state indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    names: Vec<String>,
    cards: Vec<usize>,
    columns: Vec<Vec<u16>>,
    rows: usize,
    /// Seed of the generator that produced the data, if any.
    pub seed: Option<u64>,
}

impl Dataset {
    pub fn new(names: Vec<String>, cards: Vec<usize>, columns: Vec<Vec<u16>>) -> Result<Self, BnError> {
        if names.len() != cards.len() || names.len() != columns.len() {
            return Err(BnError::Invalid("names, cardinalities and columns differ in length".into()));
        }
        let rows = columns.first().map_or(0, Vec::len);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(BnError::Invalid(format!("column {} has {} rows, expected {rows}", names[j], col.len())));
            }
            if cards[j] == 0 || cards[j] > u16::MAX as usize + 1 {
                return Err(BnError::Invalid(format!("column {} has cardinality {}", names[j], cards[j])));
            }
            if let Some(&bad) = col.iter().find(|&&s| s as usize >= cards[j]) {
                return Err(BnError::Invalid(format!("column {}: state {bad} out of range", names[j])));
            }
        }
        Ok(Dataset { names, cards, columns, rows, seed: None })
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cards
    }

    pub fn cardinality(&self, v: usize) -> usize {
        self.cards[v]
    }

    pub fn column(&self, v: usize) -> &[u16] {
        &self.columns[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Dataset with the columns reordered by `order`.
    pub fn select(&self, order: &[usize]) -> Dataset {
        Dataset {
            names: order.iter().map(|&v| self.names[v].clone()).collect(),
            cards: order.iter().map(|&v| self.cards[v]).collect(),
            columns: order.iter().map(|&v| self.columns[v].clone()).collect(),
            rows: self.rows,
            seed: self.seed,
        }
    }

    /// First `n` rows.
    pub fn head(&self, n: usize) -> Dataset {
        let n = n.min(self.rows);
        Dataset {
            names: self.names.clone(),
            cards: self.cards.clone(),
            columns: self.columns.iter().map(|c| c[..n].to_vec()).collect(),
            rows: n,
            seed: self.seed,
        }
    }

    /// Header line of names, then one comma-separated line of 0-based
    /// state indices per row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.names.join(","))?;
        let mut line = String::new();
        for r in 0..self.rows {
            line.clear();
            for (j, col) in self.columns.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&col[r].to_string());
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Reads the CSV layout written by [`Dataset::write_csv`]. Cardinalities
    /// are taken as one more than the largest index seen in each column.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self, BnError> {
        let mut lines = input.lines().enumerate();
        let names: Vec<String> = match lines.next() {
            Some((_, line)) => line?.trim_end_matches('\r').split(',').map(|s| s.trim().to_string()).collect(),
            None => return Err(BnError::parse(1, 1, "missing header")),
        };
        if names.iter().any(String::is_empty) {
            return Err(BnError::parse(1, 1, "empty variable name"));
        }
        let mut columns = vec![Vec::new(); names.len()];
        for (i, line) in lines {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let mut count = 0;
            let mut col_pos = 1;
            for (j, field) in line.split(',').enumerate() {
                if j >= names.len() {
                    return Err(BnError::parse(i + 1, col_pos, "too many fields"));
                }
                let v: u16 = field
                    .trim()
                    .parse()
                    .map_err(|_| BnError::parse(i + 1, col_pos, format!("invalid state index '{field}'")))?;
                columns[j].push(v);
                count += 1;
                col_pos += field.len() + 1;
            }
            if count != names.len() {
                return Err(BnError::parse(i + 1, col_pos, "too few fields"));
            }
        }
        let cards = columns
            .iter()
            .map(|c| c.iter().map(|&s| s as usize + 1).max().unwrap_or(1))
            .collect();
        Dataset::new(names, cards, columns)
    }
}
