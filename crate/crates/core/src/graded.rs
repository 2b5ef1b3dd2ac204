//! Graded pieces of the polynomial ring and of homogeneous ideals.

use std::collections::HashMap;

use crate::echelon::{SparseEchelon, SparseRow};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Exponent, HomogPoly};

/// `C(n, k)` as `usize`; 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Dimension of the degree-`degree` forms on `P^n`; zero in negative degree.
pub fn forms_dim(n: usize, degree: i64) -> usize {
    if degree < 0 {
        0
    } else {
        binomial(degree as u64 + n as u64, n as u64)
    }
}

/// All exponent vectors of total degree `degree` in `nvars` variables, in
/// graded-lex order (the largest power of the first variable first).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Exponent> {
    fn rec(i: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}

/// Monomial basis of the degree-`degree` forms on `P^n` with a reverse index.
#[derive(Clone, Debug)]
pub struct GradedPieceBasis {
    n: usize,
    degree: u32,
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl GradedPieceBasis {
    pub fn new(n: usize, degree: u32) -> Self {
        let monomials = monomials(n + 1, degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        GradedPieceBasis { n, degree, monomials, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `p` as a sparse row sorted by basis index.
    pub fn sparse_coords(&self, p: &HomogPoly) -> SparseRow {
        assert_eq!(p.n(), self.n, "ambient mismatch");
        if p.is_zero() {
            return Vec::new();
        }
        assert_eq!(p.degree(), self.degree, "degree mismatch");
        let mut row: SparseRow = p
            .terms()
            .iter()
            .map(|(e, c)| (self.index[e], c.clone()))
            .collect();
        row.sort_by_key(|(j, _)| *j);
        row
    }

    pub fn to_poly(&self, field: Field, row: &SparseRow) -> HomogPoly {
        HomogPoly::from_terms(
            field,
            self.n,
            self.degree,
            row.iter().map(|(j, c)| (self.monomials[*j].clone(), c.clone())),
        )
        .expect("basis monomials have the right degree")
    }
}

fn check_gens(gens: &[HomogPoly], n: usize, field: Field) -> Result<()> {
    for g in gens {
        if g.n() != n {
            return Err(Error::Dimension(format!("generator {g} lives in P^{}, expected P^{n}", g.n())));
        }
        if g.field() != field {
            return Err(Error::InvalidField(format!("generator {g} is over {}", g.field())));
        }
    }
    Ok(())
}

/// The degree-`degree` piece of the ideal generated by some forms.
#[derive(Clone, Debug)]
pub struct IdealPiece {
    field: Field,
    basis: GradedPieceBasis,
    echelon: SparseEchelon,
}

impl IdealPiece {
    /// Row space of the multiplication matrix: every generator times every
    /// monomial of complementary degree. Zero generators are ignored.
    pub fn new(field: Field, n: usize, gens: &[HomogPoly], degree: u32) -> Result<Self> {
        check_gens(gens, n, field)?;
        let basis = GradedPieceBasis::new(n, degree);
        let mut echelon = SparseEchelon::new(field, basis.dim());
        for g in gens.iter().filter(|g| !g.is_zero() && g.degree() <= degree) {
            for m in monomials(n + 1, degree - g.degree()) {
                if echelon.is_full() {
                    break;
                }
                echelon.insert(&basis.sparse_coords(&g.mul_monomial(&m)));
            }
        }
        Ok(IdealPiece { field, basis, echelon })
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// Dimension of the quotient, i.e. the Hilbert function value.
    pub fn codim(&self) -> usize {
        self.basis.dim() - self.echelon.rank()
    }

    pub fn is_full(&self) -> bool {
        self.echelon.is_full()
    }

    pub fn contains(&self, f: &HomogPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        if f.degree() != self.basis.degree {
            return false;
        }
        self.echelon.contains(&self.basis.sparse_coords(f))
    }

    /// Basis forms of this piece.
    pub fn basis_forms(&self) -> Vec<HomogPoly> {
        self.echelon
            .rows()
            .map(|r| self.basis.to_poly(self.field, r))
            .collect()
    }

    /// The next piece, from products of this piece with the variables plus
    /// the generators of the next degree.
    fn next(&self, gens_next: &[HomogPoly]) -> IdealPiece {
        let n = self.basis.n;
        let basis = GradedPieceBasis::new(n, self.basis.degree + 1);
        let mut echelon = SparseEchelon::new(self.field, basis.dim());
        'outer: for row in self.echelon.rows() {
            for v in 0..=n {
                if echelon.is_full() {
                    break 'outer;
                }
                let shifted: SparseRow = {
                    let mut r: SparseRow = row
                        .iter()
                        .map(|(j, c)| {
                            let mut e = self.basis.monomials[*j].clone();
                            e[v] += 1;
                            (basis.index[&e], c.clone())
                        })
                        .collect();
                    r.sort_by_key(|(j, _)| *j);
                    r
                };
                echelon.insert(&shifted);
            }
        }
        for g in gens_next.iter().filter(|g| !g.is_zero()) {
            echelon.insert(&basis.sparse_coords(g));
        }
        IdealPiece {
            field: self.field,
            basis,
            echelon,
        }
    }
}

/// Dimension of the degree-`degree` graded piece of the ideal generated by `gens`.
pub fn graded_ideal_dim(field: Field, n: usize, gens: &[HomogPoly], degree: u32) -> Result<usize> {
    Ok(IdealPiece::new(field, n, gens, degree)?.dim())
}

/// Walks the pieces `I_0, I_1, ..` of an ideal degree by degree.
#[derive(Clone, Debug)]
pub struct IdealSweep {
    gens: Vec<HomogPoly>,
    current: IdealPiece,
}

impl IdealSweep {
    pub fn new(field: Field, n: usize, gens: &[HomogPoly]) -> Result<Self> {
        check_gens(gens, n, field)?;
        let gens: Vec<HomogPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let degree0: Vec<HomogPoly> = gens.iter().filter(|g| g.degree() == 0).cloned().collect();
        let current = IdealPiece::new(field, n, &degree0, 0)?;
        Ok(IdealSweep { gens, current })
    }

    pub fn current(&self) -> &IdealPiece {
        &self.current
    }

    pub fn advance(&mut self) -> &IdealPiece {
        let d = self.current.degree() + 1;
        let next_gens: Vec<HomogPoly> = self.gens.iter().filter(|g| g.degree() == d).cloned().collect();
        self.current = self.current.next(&next_gens);
        &self.current
    }

    /// Hilbert function values `h(0..=bound)` of the quotient ring.
    pub fn hilbert_function(mut self, bound: u32) -> Vec<usize> {
        let mut h = vec![self.current.codim()];
        for _ in 0..bound {
            h.push(self.advance().codim());
        }
        h
    }

    /// First degree `<= bound` at which the piece is everything, if any.
    pub fn first_full_degree(mut self, bound: u32) -> Option<u32> {
        loop {
            if self.current.is_full() {
                return Some(self.current.degree());
            }
            if self.current.degree() >= bound {
                return None;
            }
            self.advance();
        }
    }
}

/// Growth degree of a Hilbert function read off its tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthDegree {
    /// `h` is eventually zero; the degree where it first vanishes stably.
    Empty { degree: u32 },
    /// The `dim`-th difference is a nonzero constant on the last three values.
    Dimension(usize),
    Inconclusive,
}

/// Finds the smallest `e` such that the last three entries of `Δ^e h` agree and are nonzero.
pub fn growth_degree(h: &[usize]) -> GrowthDegree {
    let len = h.len();
    if len >= 3 && h[len - 3..].iter().all(|&v| v == 0) {
        let first = (0..len).rev().take_while(|&i| h[i] == 0).last().unwrap_or(len - 1);
        return GrowthDegree::Empty { degree: first as u32 };
    }
    let mut seq: Vec<i128> = h.iter().map(|&v| v as i128).collect();
    for e in 0.. {
        if seq.len() < 3 {
            break;
        }
        let tail = &seq[seq.len() - 3..];
        if tail[0] != 0 && tail.iter().all(|&v| v == tail[0]) {
            return GrowthDegree::Dimension(e);
        }
        seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
    }
    GrowthDegree::Inconclusive
}
