//! Incremental row echelon basis for sparse rows, used for graded pieces of ideals.
//!
//! Rows are inserted one at a time and fully reduced against the pivots found so
//! far; a nonzero remainder becomes a new pivot row with leading coefficient 1.

use crate::field::{Field, FieldElement};

/// Sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, FieldElement)>;

#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: Field,
    ncols: usize,
    pivots: Vec<Option<SparseRow>>,
    rank: usize,
}

impl SparseEchelon {
    pub fn new(field: Field, ncols: usize) -> Self {
        SparseEchelon {
            field,
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.ncols
    }

    /// Fully reduces `row`; the remainder is empty iff `row` is in the span.
    pub fn reduce(&self, row: &[(usize, FieldElement)]) -> SparseRow {
        let mut acc = vec![self.field.zero(); self.ncols];
        let mut start = self.ncols;
        for (c, v) in row {
            acc[*c] += v;
            start = start.min(*c);
        }
        for c in start..self.ncols {
            if acc[c].is_zero() {
                continue;
            }
            if let Some(prow) = &self.pivots[c] {
                let f = acc[c].clone();
                for (j, v) in prow {
                    acc[*j] -= &(&f * v);
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    pub fn contains(&self, row: &[(usize, FieldElement)]) -> bool {
        self.is_full() || self.reduce(row).is_empty()
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: &[(usize, FieldElement)]) -> bool {
        if self.is_full() {
            return false;
        }
        let rem = self.reduce(row);
        let Some((lead, lv)) = rem.first().cloned() else {
            return false;
        };
        let inv = lv.inv().expect("nonzero leading coefficient");
        let normalized = rem.into_iter().map(|(j, v)| (j, &v * &inv)).collect();
        self.pivots[lead] = Some(normalized);
        self.rank += 1;
        true
    }

    /// The stored basis rows, ordered by pivot column.
    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.pivots.iter().flatten()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivots[c].is_some()).collect()
    }
}
