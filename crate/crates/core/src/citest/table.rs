//! Two-way contingency tables.

use serde::{Deserialize, Serialize};

use crate::citest::CiError;
use crate::numstat::CountSeq;

/// `Kx × Ky` joint counts stored row-major (`x` indexes rows).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContingencyTable {
    kx: usize,
    ky: usize,
    counts: Vec<u64>,
}

impl ContingencyTable {
    /// All-zero table.
    pub fn zeros(kx: usize, ky: usize) -> Result<Self, CiError> {
        Self::from_counts(kx, ky, vec![0; kx * ky])
    }

    pub fn from_counts(kx: usize, ky: usize, counts: Vec<u64>) -> Result<Self, CiError> {
        if kx == 0 || ky == 0 {
            return Err(CiError::Invalid(format!("table shape {kx}x{ky}")));
        }
        if counts.len() != kx * ky {
            return Err(CiError::Invalid(format!("{} counts for a {kx}x{ky} table", counts.len())));
        }
        Ok(ContingencyTable { kx, ky, counts })
    }

    /// Builds a table from nested rows, e.g. `[[5, 5], [5, 5]]`.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self, CiError> {
        let ky = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != ky) {
            return Err(CiError::Invalid("ragged rows".into()));
        }
        let counts = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_counts(rows.len(), ky, counts)
    }

    /// Cross-tabulates paired observations.
    pub fn from_pairs(xs: &[u16], ys: &[u16], kx: usize, ky: usize) -> Result<Self, CiError> {
        if xs.len() != ys.len() {
            return Err(CiError::Invalid("observation vectors differ in length".into()));
        }
        let mut t = Self::zeros(kx, ky)?;
        for (&x, &y) in xs.iter().zip(ys) {
            let (x, y) = (x as usize, y as usize);
            if x >= kx || y >= ky {
                return Err(CiError::Invalid(format!("state ({x}, {y}) outside {kx}x{ky}")));
            }
            t.counts[x * ky + y] += 1;
        }
        Ok(t)
    }

    #[inline]
    pub fn kx(&self) -> usize {
        self.kx
    }

    #[inline]
    pub fn ky(&self) -> usize {
        self.ky
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.ky + j]
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, n: u64) {
        self.counts[i * self.ky + j] += n;
    }

    /// Row-major joint counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `n_i = Σ_j n_ij`.
    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.chunks(self.ky).map(|r| r.iter().sum()).collect()
    }

    /// `n_j = Σ_i n_ij`.
    pub fn col_sums(&self) -> Vec<u64> {
        let mut out = vec![0; self.ky];
        for row in self.counts.chunks(self.ky) {
            for (o, &c) in out.iter_mut().zip(row) {
                *o += c;
            }
        }
        out
    }

    pub fn transpose(&self) -> ContingencyTable {
        let mut counts = vec![0; self.counts.len()];
        for i in 0..self.kx {
            for j in 0..self.ky {
                counts[j * self.kx + i] = self.get(i, j);
            }
        }
        ContingencyTable { kx: self.ky, ky: self.kx, counts }
    }

    /// Joint counts as one sequence of `Kx·Ky` states.
    pub fn flattened(&self) -> CountSeq {
        CountSeq::new(self.counts.clone()).expect("non-empty table")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins() {
        let t = ContingencyTable::from_rows(&[[1, 2, 3], [4, 5, 6]]).unwrap();
        assert_eq!(t.row_sums(), vec![6, 15]);
        assert_eq!(t.col_sums(), vec![5, 7, 9]);
        assert_eq!(t.total(), 21);
        let tt = t.transpose();
        assert_eq!((tt.kx(), tt.ky()), (3, 2));
        assert_eq!(tt.get(2, 1), 6);
    }

    #[test]
    fn pairs() {
        let t = ContingencyTable::from_pairs(&[0, 1, 1], &[1, 0, 0], 2, 2).unwrap();
        assert_eq!(t.counts(), &[0, 1, 2, 0]);
        assert!(ContingencyTable::from_pairs(&[2], &[0], 2, 2).is_err());
    }

    #[test]
    fn shape_checks() {
        assert!(ContingencyTable::from_counts(0, 2, vec![]).is_err());
        assert!(ContingencyTable::from_counts(2, 2, vec![1, 2, 3]).is_err());
        assert!(ContingencyTable::from_rows(&[vec![1, 2], vec![3]]).is_err());
    }
}
