//! Dense univariate polynomials: roots in the base field and characteristic polynomials.
//!
//! Coefficients are stored lowest degree first with no trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, FieldElement};
use crate::matrix::DenseMatrix;

/// Prime fields up to this size are scanned exhaustively for roots.
const SCAN_LIMIT: u64 = 4096;

/// Cap on candidate numerators/denominators in the rational root search.
const MAX_DIVISORS: usize = 20_000;

/// Trial division bound when factoring for the rational root search.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field();
        Self::new(field, vec![c])
    }

    /// `t - a`.
    pub fn linear_root(a: &FieldElement) -> Self {
        let f = a.field();
        Self::new(f, vec![-a, f.one()])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn evaluate(&self, t: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        UniPoly::new(self.field, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &FieldElement) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(self.field, out)
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &(&c * dc);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(self.field, quot), UniPoly::new(self.field, rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m);
        let mut acc = UniPoly::constant(self.field.one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

/// Distinct roots in the base field, sorted by their display form for determinism.
///
/// The second component is `false` when the search may have missed rational
/// roots (coefficients too large to factor within the trial-division bound).
pub fn roots(p: &UniPoly) -> (Vec<FieldElement>, bool) {
    if p.is_zero() {
        return (Vec::new(), false);
    }
    let (mut out, complete) = match p.field {
        Field::Prime(q) => (roots_mod_p(p, q), true),
        Field::Rational => rational_roots(p),
    };
    out.sort_by_key(|r| r.to_string());
    out.dedup();
    (out, complete)
}

fn roots_mod_p(p: &UniPoly, q: u64) -> Vec<FieldElement> {
    let field = p.field;
    if p.degree() == Some(0) {
        return Vec::new();
    }
    if q <= SCAN_LIMIT {
        return field
            .elements()
            .unwrap()
            .into_iter()
            .filter(|t| p.evaluate(t).is_zero())
            .collect();
    }
    let f = p.monic();
    let t = UniPoly::new(field, vec![field.zero(), field.one()]);
    // Product of the distinct linear factors: gcd(f, t^q - t).
    let tq = t.pow_mod(q, &f);
    let g = f.gcd(&tq.sub(&t));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    split_linear(&g, q, &mut rng, &mut out);
    out
}

fn split_linear(g: &UniPoly, q: u64, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElement>) {
    let field = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(-&g.coeffs[0]);
        }
        Some(_) => loop {
            let a = field.random(rng);
            let shifted = UniPoly::new(field, vec![a, field.one()]);
            let h = shifted
                .pow_mod((q - 1) / 2, g)
                .sub(&UniPoly::constant(field.one()));
            let d = g.gcd(&h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && Some(dd) < g.degree() {
                let (other, _) = g.div_rem(&d);
                split_linear(&d, q, rng, out);
                split_linear(&other, q, rng, out);
                return;
            }
        },
    }
}

fn rational_roots(p: &UniPoly) -> (Vec<FieldElement>, bool) {
    let field = Field::Rational;
    // Clear denominators.
    let mut l = BigInt::one();
    for c in &p.coeffs {
        l = l.lcm(c.as_rational().unwrap().denom());
    }
    let mut ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| {
            let q = c.as_rational().unwrap();
            q.numer() * (&l / q.denom())
        })
        .collect();
    let mut out = Vec::new();
    // Strip the factor t^k.
    let zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push(field.zero());
        ints.drain(..zeros);
    }
    if ints.len() <= 1 {
        return (out, true);
    }
    let (nums, c1) = divisors(&ints[0]);
    let (dens, c2) = divisors(ints.last().unwrap());
    let poly = UniPoly::new(
        field,
        ints.iter().map(|v| field.from_bigint(v)).collect(),
    );
    for a in &nums {
        for b in &dens {
            if !a.gcd(b).is_one() {
                continue;
            }
            for s in [a.clone(), -a.clone()] {
                let cand = FieldElement::Rational(BigRational::new(s, b.clone()));
                if poly.evaluate(&cand).is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    (out, c1 && c2)
}

/// Positive divisors of `|v|` (by trial division); the flag is `false` if the
/// factorization or enumeration was cut short.
fn divisors(v: &BigInt) -> (Vec<BigInt>, bool) {
    let mut rest = v.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut complete = true;
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= rest {
        if p > TRIAL_DIVISION_BOUND {
            complete = false;
            break;
        }
        let bp = BigInt::from(p);
        let mut k = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            k += 1;
        }
        if k > 0 {
            factors.push((bp, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (f, k) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut m = d.clone();
            for _ in 0..=k {
                next.push(m.clone());
                m *= &f;
            }
        }
        divs = next;
        if divs.len() > MAX_DIVISORS {
            divs.truncate(MAX_DIVISORS);
            complete = false;
            break;
        }
    }
    (divs, complete)
}

/// `det(t * id - m)` by a division-free expansion over column subsets.
pub fn characteristic_polynomial(m: &DenseMatrix) -> UniPoly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let field = m.field();
    let c = m.rows();
    assert!(c <= 20, "matrix too large for subset expansion");
    let entry = |i: usize, j: usize| -> UniPoly {
        let a = -m.get(i, j);
        if i == j {
            UniPoly::new(field, vec![a, field.one()])
        } else {
            UniPoly::new(field, vec![a])
        }
    };
    // dp[mask] = signed sum over assignments of the first popcount(mask) rows to the columns in mask.
    let mut dp: Vec<UniPoly> = vec![UniPoly::zero(field); 1 << c];
    dp[0] = UniPoly::constant(field.one());
    for mask in 0usize..(1 << c) {
        if dp[mask].is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == c {
            continue;
        }
        for col in 0..c {
            if mask & (1 << col) != 0 {
                continue;
            }
            // Sign of inserting `col` after the columns already used: parity of used columns greater than col.
            let above = (mask >> (col + 1)).count_ones();
            let mut term = dp[mask].mul(&entry(row, col));
            if above % 2 == 1 {
                term = term.scale(&-field.one());
            }
            let next = mask | (1 << col);
            dp[next] = dp[next].add(&term);
        }
    }
    dp[(1 << c) - 1].clone()
}

/// Eigenvalues of `m` lying in the base field (without multiplicity).
pub fn eigenvalues(m: &DenseMatrix) -> (Vec<FieldElement>, bool) {
    roots(&characteristic_polynomial(m))
}
