//! Dense matrices over a [`Field`] with exact elimination.
//!
//! Over `F_p` everything runs as Gauss-Jordan on `u64` residues. Over the
//! rationals rows are first scaled to integers, then eliminated fraction-free
//! (Bareiss); the rank additionally has a modular shortcut, since a rank mod p
//! equal to `min(rows, cols)` already pins the rational rank.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{add_mod, inv_mod, mul_mod, Field, FieldElement};

/// Modulus for the rank shortcut over the rationals.
const SHORTCUT_PRIME: u64 = (1 << 61) - 1;

pub type Vector = Vec<FieldElement>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

/// Reduced row echelon form: `rows[i]` has a 1 in column `pivots[i]` and zeros
/// in every other pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub field: Field,
    pub cols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<Vector>,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                v[p] = -&row[free];
            }
            basis.push(v);
        }
        basis
    }

    /// Reduces `v` against the rows; the result is zero iff `v` lies in the row space.
    pub fn reduce(&self, v: &[FieldElement]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &(&f * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(FieldElement::is_zero)
    }
}

impl DenseMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::InvalidField(format!("entry {e} is not in {field}")));
        }
        Ok(DenseMatrix { field, rows, cols, entries })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from its rows. `cols` is only consulted when `rows` is empty.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vector>) -> Result<Self> {
        let ncols = rows.first().map_or(cols, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {} but row 0 has length {ncols}",
                    r.len()
                )));
            }
        }
        let nrows = rows.len();
        Self::new(field, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Result<Self> {
        let m = Self::from_rows(field, rows, columns.to_vec())?;
        Ok(m.transpose())
    }

    /// Integer matrix literal; panics on ragged input. Handy in tests.
    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, data).expect("ragged matrix literal")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        assert_eq!(v.field(), self.field, "field mismatch");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        DenseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix product; panics when the inner dimensions differ.
    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vector {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> DenseMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &FieldElement) -> DenseMatrix {
        DenseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> DenseMatrix {
        self.scale(&-self.field.one())
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &DenseMatrix) -> DenseMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Concatenates blocks left to right; all must share the row count.
    pub fn hstack(field: Field, rows: usize, blocks: &[&DenseMatrix]) -> DenseMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.entries[i * cols + offset + j] = b.get(i, j).clone();
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Concatenates blocks top to bottom; all must share the column count.
    pub fn vstack(field: Field, cols: usize, blocks: &[&DenseMatrix]) -> DenseMatrix {
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            entries.extend(b.entries.iter().cloned());
            rows += b.rows;
        }
        DenseMatrix { field, rows, cols, entries }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        DenseMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Re-reads every entry in another field (rationals reduce mod p).
    pub fn to_field(&self, field: Field) -> Result<DenseMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                FieldElement::Rational(q) => field.from_rational(q),
                FieldElement::Prime { value, modulus } => {
                    if field == Field::Prime(*modulus) {
                        Ok(e.clone())
                    } else {
                        Err(Error::InvalidField(format!(
                            "cannot lift residue {value} mod {modulus} into {field}"
                        )))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix {
            field,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.field {
            Field::Prime(p) => {
                let mut rows = self.residue_rows(p);
                rref_mod_p(&mut rows, self.cols, p).len()
            }
            Field::Rational => {
                let mut ints = self.integer_rows();
                let full = self.rows.min(self.cols);
                let mut reduced: Vec<Vec<u64>> = ints
                    .iter()
                    .map(|r| r.iter().map(|v| big_mod(v, SHORTCUT_PRIME)).collect())
                    .collect();
                if echelon_mod_p(&mut reduced, self.cols, SHORTCUT_PRIME) == full {
                    return full;
                }
                bareiss_echelon(&mut ints, self.cols).len()
            }
        }
    }

    pub fn rref(&self) -> RowEchelon {
        let field = self.field;
        match field {
            Field::Prime(p) => {
                let mut rows = self.residue_rows(p);
                let pivots = rref_mod_p(&mut rows, self.cols, p);
                let rows = rows
                    .into_iter()
                    .take(pivots.len())
                    .map(|r| {
                        r.into_iter()
                            .map(|value| FieldElement::Prime { value, modulus: p })
                            .collect()
                    })
                    .collect();
                RowEchelon {
                    field,
                    cols: self.cols,
                    pivots,
                    rows,
                }
            }
            Field::Rational => {
                let mut ints = self.integer_rows();
                let pivots = bareiss_echelon(&mut ints, self.cols);
                let rows = back_substitute(&ints[..pivots.len()], &pivots);
                RowEchelon {
                    field,
                    cols: self.cols,
                    pivots,
                    rows,
                }
            }
        }
    }

    pub fn kernel_basis(&self) -> Vec<Vector> {
        if self.rows == 0 {
            return (0..self.cols)
                .map(|j| {
                    let mut v = vec![self.field.zero(); self.cols];
                    v[j] = self.field.one();
                    v
                })
                .collect();
        }
        self.rref().kernel_basis()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.entries[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            aug.entries[i * (self.cols + 1) + self.cols] = b[i].clone();
        }
        let ech = aug.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> FieldElement {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return self.field.one();
        }
        match self.field {
            Field::Prime(p) => {
                let mut m = self.residue_rows(p);
                let mut det = 1u64;
                for col in 0..n {
                    let Some(piv) = (col..n).find(|&i| m[i][col] != 0) else {
                        return self.field.zero();
                    };
                    if piv != col {
                        m.swap(piv, col);
                        det = (p - det) % p;
                    }
                    det = mul_mod(det, m[col][col], p);
                    let inv = inv_mod(m[col][col], p);
                    for i in col + 1..n {
                        if m[i][col] == 0 {
                            continue;
                        }
                        let f = mul_mod(m[i][col], inv, p);
                        for j in col..n {
                            let t = mul_mod(f, m[col][j], p);
                            m[i][j] = add_mod(m[i][j], p - t, p);
                        }
                    }
                }
                FieldElement::Prime { value: det, modulus: p }
            }
            Field::Rational => {
                // Row scaling to integers multiplies the determinant by the scales.
                let mut scale = BigRational::one();
                let mut ints = Vec::with_capacity(n);
                for i in 0..n {
                    let (row, l) = integerize_row(self.row(i));
                    scale *= BigRational::from_integer(l);
                    ints.push(row);
                }
                let (det, _) = bareiss_det(&mut ints);
                FieldElement::Rational(BigRational::from_integer(det) / scale)
            }
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<DenseMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let id = Self::identity(self.field, n);
        let aug = Self::hstack(self.field, n, &[self, &id]);
        let ech = aug.rref();
        if ech.rank() < n || ech.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(self.field, n, n);
        for (i, row) in ech.rows.iter().enumerate() {
            for j in 0..n {
                inv.entries[i * n + j] = row[n + j].clone();
            }
        }
        Some(inv)
    }

    /// Columns of `self` at the pivot positions: a basis of the column space.
    pub fn column_space_basis(&self) -> Vec<Vector> {
        let ech = self.rref();
        ech.pivots.iter().map(|&j| self.column(j)).collect()
    }

    fn residue_rows(&self, p: u64) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|e| e.as_residue().expect("prime-field entry"))
                    .collect()
            })
            .inspect(|r: &Vec<u64>| debug_assert!(r.iter().all(|&v| v < p)))
            .collect()
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| integerize_row(self.row(i)).0).collect()
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Multiplies a rational row by the lcm of its denominators; returns the integer row and the lcm.
fn integerize_row(row: &[FieldElement]) -> (Vec<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for e in row {
        let q = e.as_rational().expect("rational entry");
        if !q.denom().is_one() {
            l = l.lcm(q.denom());
        }
    }
    let ints = row
        .iter()
        .map(|e| {
            let q = e.as_rational().expect("rational entry");
            q.numer() * (&l / q.denom())
        })
        .collect();
    (ints, l)
}

fn big_mod(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Forward elimination mod p; returns the rank. Rows are consumed in place.
fn echelon_mod_p(m: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let mut r = 0;
    for col in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(piv, r);
        let inv = inv_mod(m[r][col], p);
        for i in r + 1..m.len() {
            if m[i][col] == 0 {
                continue;
            }
            let f = mul_mod(m[i][col], inv, p);
            for j in col..cols {
                if m[r][j] != 0 {
                    let t = mul_mod(f, m[r][j], p);
                    m[i][j] = add_mod(m[i][j], p - t, p);
                }
            }
        }
        r += 1;
    }
    r
}

/// Gauss-Jordan mod p to reduced row echelon form; returns the pivot columns.
/// The first `pivots.len()` rows hold the reduced basis afterwards.
pub(crate) fn rref_mod_p(m: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(piv, r);
        let inv = inv_mod(m[r][col], p);
        for j in col..cols {
            m[r][j] = mul_mod(m[r][j], inv, p);
        }
        for i in 0..m.len() {
            if i == r || m[i][col] == 0 {
                continue;
            }
            let f = m[i][col];
            for j in col..cols {
                if m[r][j] != 0 {
                    let t = mul_mod(f, m[r][j], p);
                    m[i][j] = add_mod(m[i][j], p - t, p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Fraction-free forward elimination (Bareiss) with column skipping.
/// Returns the pivot columns; the leading rows form an integer echelon form.
fn bareiss_echelon(m: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = &pivot_row[col];
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..cols {
                let v = pv * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[col] = BigInt::zero();
        }
        prev = pv.clone();
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Determinant of a square integer matrix by Bareiss; also returns the rank.
fn bareiss_det(m: &mut [Vec<BigInt>]) -> (BigInt, usize) {
    let n = m.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return (BigInt::zero(), col);
        };
        if piv != col {
            m.swap(piv, col);
            sign = !sign;
        }
        let (head, tail) = m.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..n {
                let v = &pivot_row[col] * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot_row[col].clone();
    }
    let det = m[n - 1][n - 1].clone();
    (if sign { -det } else { det }, n)
}

/// Turns an integer echelon form into the reduced echelon form over the rationals.
fn back_substitute(echelon: &[Vec<BigInt>], pivots: &[usize]) -> Vec<Vector> {
    let mut rows: Vec<Vec<BigRational>> = echelon
        .iter()
        .zip(pivots)
        .map(|(row, &p)| {
            let lead = &row[p];
            let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            let g = if lead.is_negative() { -g } else { g };
            row.iter()
                .map(|v| BigRational::new(v / &g, lead / &g))
                .collect()
        })
        .collect();
    for i in (0..rows.len()).rev() {
        let p = pivots[i];
        let (above, rest) = rows.split_at_mut(i);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for j in p..row.len() {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
    }
    rows.into_iter()
        .map(|r| r.into_iter().map(FieldElement::Rational).collect())
        .collect()
}

/// True iff every entry of `v` is zero.
pub fn is_zero_vector(v: &[FieldElement]) -> bool {
    v.iter().all(FieldElement::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(DenseMatrix::identity(Q, 2).rank(), 2);
        assert_eq!(DenseMatrix::zeros(Q, 3, 4).rank(), 0);
        assert_eq!(DenseMatrix::from_i64(Q, &[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(DenseMatrix::identity(Q, 3).kernel_basis().is_empty());
        let k = DenseMatrix::zeros(Q, 2, 2).kernel_basis();
        assert_eq!(k, vec![vec![Q.one(), Q.zero()], vec![Q.zero(), Q.one()]]);
        let k = DenseMatrix::from_i64(Q, &[vec![1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![Q.from_i64(-1), Q.one()]]);
    }

    #[test]
    fn rational_entries() {
        let m = DenseMatrix::from_rows(
            Q,
            2,
            vec![
                vec![Q.parse("1/2").unwrap(), Q.parse("1/3").unwrap()],
                vec![Q.from_i64(3), Q.from_i64(2)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.determinant(), Q.zero());
        let m = DenseMatrix::from_rows(
            Q,
            2,
            vec![
                vec![Q.parse("1/2").unwrap(), Q.from_i64(1)],
                vec![Q.from_i64(0), Q.parse("2/3").unwrap()],
            ],
        )
        .unwrap();
        assert_eq!(m.determinant(), Q.parse("1/3").unwrap());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), DenseMatrix::identity(Q, 2));
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = DenseMatrix::from_i64(Q, &[vec![1, 1], vec![2, 2]]);
        assert!(m.solve(&[Q.one(), Q.one()]).is_none());
        let x = m.solve(&[Q.one(), Q.from_i64(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![Q.one(), Q.from_i64(2)]);
    }

    #[test]
    fn prime_field_determinant_and_inverse() {
        let f = f3();
        let m = DenseMatrix::from_i64(f, &[vec![1, 2], vec![2, 2]]);
        assert_eq!(m.determinant(), f.from_i64(-2));
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul(&m), DenseMatrix::identity(f, 2));
        assert!(DenseMatrix::from_i64(f, &[vec![1, 2], vec![2, 1]]).inverse().is_none());
    }

    #[test]
    fn modular_shortcut_is_not_fooled() {
        // Rank 2 over Q but the shortcut prime divides the 2x2 minor.
        let p = SHORTCUT_PRIME as i64;
        let m = DenseMatrix::from_i64(Q, &[vec![1, 1], vec![1, 1 + p]]);
        assert_eq!(m.rank(), 2);
        let m = DenseMatrix::from_i64(Q, &[vec![1, 1, 0], vec![1, 1 + p, 0], vec![0, 0, 0]]);
        assert_eq!(m.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(-3i64..=3, r * c))
        })
    }

    fn build(field: Field, r: usize, c: usize, v: &[i64]) -> DenseMatrix {
        DenseMatrix::new(field, r, c, v.iter().map(|&x| field.from_i64(x)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank((r, c, v) in small_matrix()) {
            for field in [Q, f3()] {
                let m = build(field, r, c, &v);
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }
        }

        #[test]
        fn kernel_vectors_are_annihilated((r, c, v) in small_matrix()) {
            for field in [Q, f3()] {
                let m = build(field, r, c, &v);
                let k = m.kernel_basis();
                prop_assert_eq!(k.len(), c - m.rank());
                for vec in &k {
                    prop_assert!(is_zero_vector(&m.mul_vec(vec)));
                }
                prop_assert_eq!(DenseMatrix::from_columns(field, c, &k).unwrap().rank(), k.len());
            }
        }

        #[test]
        fn rational_and_large_prime_ranks_agree((r, c, v) in small_matrix()) {
            let q = build(Q, r, c, &v);
            let p = build(Field::default_prime(), r, c, &v);
            prop_assert_eq!(q.rank(), p.rank());
            prop_assert_eq!(q.rref().rank(), q.rank());
        }

        #[test]
        fn determinant_matches_rank((n, v) in (1usize..5).prop_flat_map(|n| (Just(n), proptest::collection::vec(-4i64..=4, n * n)))) {
            let m = build(Q, n, n, &v);
            prop_assert_eq!(m.determinant().is_zero(), m.rank() < n);
            let mp = build(Field::default_prime(), n, n, &v);
            prop_assert_eq!(mp.to_field(Field::default_prime()).unwrap(), mp.clone());
            prop_assert_eq!(Field::default_prime().from_rational(m.determinant().as_rational().unwrap()).unwrap(), mp.determinant());
        }
    }
}
