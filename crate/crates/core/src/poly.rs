//! Homogeneous polynomials in the coordinates `z0..zd, x, y` of `P^n` (`d = n - 2`),
//! matrices of them, and a small parser for the textual form.
//!
//! Exponent vectors have length `n + 1` and are indexed `z0, .., zd, x, y`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::DenseMatrix;

pub type Exponent = Vec<u32>;

/// Display name of variable `i` in `P^n`.
pub fn var_name(n: usize, i: usize) -> String {
    if i + 1 == n {
        "x".to_string()
    } else if i == n {
        "y".to_string()
    } else {
        format!("z{i}")
    }
}

/// Index of the `x` coordinate in `P^n`.
pub fn x_index(n: usize) -> usize {
    n - 1
}

/// Index of the `y` coordinate in `P^n`.
pub fn y_index(n: usize) -> usize {
    n
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    field: Field,
    n: usize,
    degree: u32,
    terms: BTreeMap<Exponent, FieldElement>,
}

impl HomogPoly {
    pub fn zero(field: Field, n: usize, degree: u32) -> Self {
        HomogPoly {
            field,
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, n: usize, c: FieldElement) -> Self {
        Self::monomial(field, n, vec![0; n + 1], c)
    }

    pub fn monomial(field: Field, n: usize, exp: Exponent, coeff: FieldElement) -> Self {
        assert_eq!(exp.len(), n + 1, "exponent length");
        let degree = exp.iter().sum();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        HomogPoly { field, n, degree, terms }
    }

    pub fn var(field: Field, n: usize, i: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[i] = 1;
        Self::monomial(field, n, e, field.one())
    }

    pub fn z(field: Field, n: usize, k: usize) -> Self {
        assert!(k + 1 < n, "z{k} is not a coordinate of P^{n}");
        Self::var(field, n, k)
    }

    pub fn x(field: Field, n: usize) -> Self {
        Self::var(field, n, x_index(n))
    }

    pub fn y(field: Field, n: usize) -> Self {
        Self::var(field, n, y_index(n))
    }

    /// Collects terms, summing repeats. Fails if some exponent has the wrong length or degree.
    pub fn from_terms(
        field: Field,
        n: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, n, degree);
        for (e, c) in terms {
            if e.len() != n + 1 {
                return Err(Error::Dimension(format!(
                    "exponent of length {} in P^{n}",
                    e.len()
                )));
            }
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(Error::NotHomogeneous(format!(
                    "term of degree {d} in a form of degree {degree}"
                )));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> FieldElement {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn check_compatible(&self, other: &HomogPoly) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.n, other.n, "ambient mismatch");
    }

    /// Sum of two forms; a zero operand adopts the other's degree.
    pub fn add(&self, other: &HomogPoly) -> HomogPoly {
        self.check_compatible(other);
        if self.is_zero() && self.degree != other.degree {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            field: self.field,
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &HomogPoly) -> HomogPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &FieldElement) -> HomogPoly {
        if s.is_zero() {
            return Self::zero(self.field, self.n, self.degree);
        }
        HomogPoly {
            field: self.field,
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        self.check_compatible(other);
        let mut out = Self::zero(self.field, self.n, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &[u32]) -> HomogPoly {
        HomogPoly {
            field: self.field,
            n: self.n,
            degree: self.degree + m.iter().sum::<u32>(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> HomogPoly {
        let mut acc = Self::constant(self.field, self.n, self.field.one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.n + 1, "point has wrong number of coordinates");
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= &x.pow(k as u64);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Drops every term containing one of `vars`, i.e. sets those variables to zero.
    pub fn set_vars_to_zero(&self, vars: &[usize]) -> HomogPoly {
        HomogPoly {
            field: self.field,
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e[v] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes a linear form for each variable (`images[i]` replaces variable `i`).
    pub fn compose_linear(&self, images: &[HomogPoly]) -> HomogPoly {
        assert_eq!(images.len(), self.n + 1);
        let target_n = images[0].n;
        let mut out = Self::zero(self.field, target_n, self.degree);
        for (e, c) in &self.terms {
            let mut t = Self::constant(self.field, target_n, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&img.pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn to_field(&self, field: Field) -> Result<HomogPoly> {
        let mut out = Self::zero(field, self.n, self.degree);
        for (e, c) in &self.terms {
            let v = match c {
                FieldElement::Rational(q) => field.from_rational(q)?,
                FieldElement::Prime { .. } if c.field() == field => c.clone(),
                _ => return Err(Error::InvalidField(format!("cannot move {c} into {field}"))),
            };
            out.add_term(e.clone(), &v);
        }
        Ok(out)
    }
}

impl fmt::Display for HomogPoly {
    /// Largest monomial first, in the grammar accepted by [`parse_poly`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let (negative, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        var_name(self.n, i)
                    } else {
                        format!("{}^{k}", var_name(self.n, i))
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses a homogeneous form in the coordinates of `P^n`.
///
/// Grammar: sums and differences of products of powers; atoms are integer or
/// `p/q` literals, the variables `z0..zd`, `x`, `y`, and parenthesized expressions.
/// The literal `0` parses as the zero form of degree 0.
pub fn parse_poly(field: Field, n: usize, text: &str) -> Result<HomogPoly> {
    let mut parser = Parser {
        field,
        n,
        chars: text.chars().collect(),
        pos: 0,
        text,
    };
    let terms = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    let degrees: std::collections::BTreeSet<u32> = terms.keys().map(|e| e.iter().sum()).collect();
    if degrees.len() > 1 {
        return Err(Error::NotHomogeneous(format!(
            "{text:?} mixes degrees {degrees:?}"
        )));
    }
    let degree = degrees.into_iter().next().unwrap_or(0);
    HomogPoly::from_terms(field, n, degree, terms)
}

type Terms = BTreeMap<Exponent, FieldElement>;

struct Parser<'a> {
    field: Field,
    n: usize,
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.text))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            if op != '+' && op != '-' {
                break;
            }
            self.pos += 1;
            let rhs = self.term()?;
            let sign = if op == '-' { -self.field.one() } else { self.field.one() };
            acc = add_terms(&acc, &rhs, &sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = mul_terms(&acc, &rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Terms> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                let t = self.unary()?;
                Ok(t.into_iter().map(|(e, c)| (e, -c)).collect())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k
                .parse()
                .map_err(|_| self.error("exponent must be a small non-negative integer"))?;
            let mut acc = self.one_terms();
            for _ in 0..k {
                acc = mul_terms(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn one_terms(&self) -> Terms {
        let mut t = Terms::new();
        t.insert(vec![0; self.n + 1], self.field.one());
        t
    }

    fn integer(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<Terms> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    lit = format!("{lit}/{den}");
                }
                let v = self.field.parse(&lit)?;
                let mut t = Terms::new();
                if !v.is_zero() {
                    t.insert(vec![0; self.n + 1], v);
                }
                Ok(t)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let idx = self.variable_index(&name).ok_or_else(|| {
                    self.pos = start;
                    self.error(&format!("unknown variable {name:?}"))
                })?;
                let mut e = vec![0; self.n + 1];
                e[idx] = 1;
                let mut t = Terms::new();
                t.insert(e, self.field.one());
                Ok(t)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }

    fn variable_index(&self, name: &str) -> Option<usize> {
        match name {
            "x" => Some(x_index(self.n)),
            "y" => Some(y_index(self.n)),
            _ => {
                let k: usize = name.strip_prefix('z')?.parse().ok()?;
                (k + 1 < self.n && name == format!("z{k}")).then_some(k)
            }
        }
    }
}

fn add_terms(a: &Terms, b: &Terms, sign: &FieldElement) -> Terms {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.remove(e).map_or_else(|| c * sign, |old| old + &(c * sign));
        if !v.is_zero() {
            out.insert(e.clone(), v);
        }
    }
    out
}

fn mul_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e: Exponent = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            let prod = c1 * c2;
            let v = out.remove(&e).map_or(prod.clone(), |old| old + &prod);
            if !v.is_zero() {
                out.insert(e, v);
            }
        }
    }
    out
}

/// Matrix of homogeneous forms sharing one ambient space; entries are stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<HomogPoly>,
}

impl PolyMatrix {
    pub fn new(field: Field, n: usize, rows: usize, cols: usize, entries: Vec<HomogPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} polynomial matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|p| p.field != field || p.n != n) {
            return Err(Error::Dimension("entry from a different ring".into()));
        }
        Ok(PolyMatrix { field, n, rows, cols, entries })
    }

    pub fn zeros(field: Field, n: usize, rows: usize, cols: usize, degree: u32) -> Self {
        PolyMatrix {
            field,
            n,
            rows,
            cols,
            entries: vec![HomogPoly::zero(field, n, degree); rows * cols],
        }
    }

    /// `sum_i M_i * l_i` for constant matrices `M_i` and linear forms `l_i`.
    pub fn linear_combination(field: Field, n: usize, rows: usize, cols: usize, parts: &[(&DenseMatrix, HomogPoly)]) -> Self {
        let mut out = Self::zeros(field, n, rows, cols, 1);
        for (m, form) in parts {
            assert_eq!(m.shape(), (rows, cols), "block shape mismatch");
            for i in 0..rows {
                for j in 0..cols {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        let e = out.get(i, j).add(&form.scale(c));
                        out.set(i, j, e);
                    }
                }
            }
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[HomogPoly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &HomogPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: HomogPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HomogPoly::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            field: self.field,
            n: self.n,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "polynomial matrix shape mismatch");
        let deg = self.entries.first().map_or(0, |p| p.degree) + other.entries.first().map_or(0, |p| p.degree);
        let mut out = Self::zeros(self.field, self.n, self.rows, other.cols, deg);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = HomogPoly::zero(self.field, self.n, deg);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> DenseMatrix {
        let entries = self.entries.iter().map(|p| p.evaluate(point)).collect();
        DenseMatrix::new(self.field, self.rows, self.cols, entries).expect("shape preserved")
    }

    pub fn set_vars_to_zero(&self, vars: &[usize]) -> PolyMatrix {
        PolyMatrix {
            field: self.field,
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.set_vars_to_zero(vars)).collect(),
        }
    }

    /// Determinant by cofactor expansion; meant for the small square blocks used here.
    pub fn determinant(&self) -> HomogPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.cols).collect();
        self.det_rec(0, &idx)
    }

    fn det_rec(&self, row: usize, cols: &[usize]) -> HomogPoly {
        if cols.is_empty() {
            return HomogPoly::constant(self.field, self.n, self.field.one());
        }
        let mut acc: Option<HomogPoly> = None;
        for (pos, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let mut term = entry.mul(&self.det_rec(row + 1, &rest));
            if pos % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
        acc.unwrap_or_else(|| {
            let deg = self.entries.first().map_or(0, |p| p.degree) * cols.len() as u32;
            HomogPoly::zero(self.field, self.n, deg)
        })
    }

    /// All `k x k` minors, rows and columns chosen in lexicographic order.
    pub fn minors(&self, k: usize) -> Vec<HomogPoly> {
        let mut out = Vec::new();
        for rs in combinations(self.rows, k) {
            for cs in combinations(self.cols, k) {
                let entries = rs
                    .iter()
                    .flat_map(|&i| cs.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| self.get(i, j).clone())
                    .collect();
                let sub = PolyMatrix::new(self.field, self.n, k, k, entries).expect("square block");
                out.push(sub.determinant());
            }
        }
        out
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}
