//! Hypercohomology of the twisted complexes `C(k)` on `P^n`, `n ≥ 2`.
//!
//! Line bundles on `P^n` only have `H^0` and `H^n`, so the first page of the
//! hypercohomology spectral sequence has two nonzero rows. A differential from
//! row `n` to row `0` would have to jump `n + 1 ≥ 3` columns, more than the
//! three-term complex spans, so `E_2 = E_∞` and
//! `ℍ^i(C(k)) = E_2^{i,0} ⊕ E_2^{i-n,n}` with `E_2^{p,q}` the row cohomology.
//! The `H^n` row is computed by Serre duality: `H^n(O(m))` is dual to the forms of
//! degree `-m-n-1`, and multiplication by a linear form is the transpose of
//! multiplication on the dual side.

use std::collections::BTreeMap;

use crate::adhm::AdhmDatum;
use crate::config::RunConfig;
use crate::echelon::{SparseEchelon, SparseRow};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{binomial, forms_dim, GradedPieceBasis};
use crate::matrix::DenseMatrix;
use crate::monad::{build_monad, degeneration_info, restrict_to_line, DegenerationInfo, MonadRep};
use crate::poly::PolyMatrix;
use crate::stability::{global_weak_stability, GlobalCheck};
use crate::variety::VarietySpec;

/// Columns of the map `cols ⊗ S_D → rows ⊗ S_{D+1}` induced by a matrix of linear forms,
/// source index `t·dim S_D + μ`, target index `s·dim S_{D+1} + ν`.
fn h0_columns(phi: &PolyMatrix, degree: i64) -> (usize, Vec<SparseRow>) {
    let n = phi.n();
    let target = GradedPieceBasis::new(n, (degree + 1).max(0) as u32);
    let nrows = phi.rows() * forms_dim(n, degree + 1);
    if degree < 0 {
        return (nrows, Vec::new());
    }
    let source = GradedPieceBasis::new(n, degree as u32);
    let tdim = target.dim();
    let mut cols = Vec::with_capacity(phi.cols() * source.dim());
    for t in 0..phi.cols() {
        for mu in source.monomials() {
            let mut col: SparseRow = Vec::new();
            for s in 0..phi.rows() {
                let entry = phi.get(s, t);
                if entry.is_zero() {
                    continue;
                }
                for (pos, coeff) in target.sparse_coords(&entry.mul_monomial(mu)) {
                    col.push((s * tdim + pos, coeff));
                }
            }
            cols.push(col);
        }
    }
    (nrows, cols)
}

fn sparse_rank(field: Field, nrows: usize, cols: &[SparseRow]) -> usize {
    let mut ech = SparseEchelon::new(field, nrows);
    for col in cols {
        if ech.is_full() {
            break;
        }
        ech.insert(col);
    }
    ech.rank()
}

fn to_dense(field: Field, nrows: usize, cols: &[SparseRow]) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, nrows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col {
            m.set(*i, j, v.clone());
        }
    }
    m
}

/// `H^0(α(k))` and `H^0(β(k))` in monomial coordinates (column convention).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMaps {
    pub alpha: DenseMatrix,
    pub beta: DenseMatrix,
}

pub fn graded_map_dims(m: &MonadRep, k: i64) -> GradedMaps {
    let (ra, ca) = h0_columns(m.alpha(), k - 1);
    let (rb, cb) = h0_columns(m.beta(), k);
    let mut alpha = to_dense(m.field(), ra, &ca);
    if ca.is_empty() {
        alpha = DenseMatrix::zeros(m.field(), ra, m.c() * forms_dim(m.n(), k - 1));
    }
    let mut beta = to_dense(m.field(), rb, &cb);
    if cb.is_empty() {
        beta = DenseMatrix::zeros(m.field(), rb, m.middle_rank() * forms_dim(m.n(), k));
    }
    GradedMaps { alpha, beta }
}

/// Dimensions and ranks of one row of the first page: `A --f--> B --g--> C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PageRow {
    pub dims: [usize; 3],
    pub rank_f: usize,
    pub rank_g: usize,
}

impl PageRow {
    /// Cohomology at the three slots `p = -1, 0, 1`.
    pub fn cohomology(&self) -> [usize; 3] {
        let [a, b, c] = self.dims;
        [a - self.rank_f, b - self.rank_f - self.rank_g, c - self.rank_g]
    }
}

/// Row `q = 0` of the first page of `C(k)`.
pub fn h0_row(m: &MonadRep, k: i64) -> PageRow {
    let n = m.n();
    let (ra, ca) = h0_columns(m.alpha(), k - 1);
    let (rb, cb) = h0_columns(m.beta(), k);
    PageRow {
        dims: [m.c() * forms_dim(n, k - 1), m.middle_rank() * forms_dim(n, k), m.c() * forms_dim(n, k + 1)],
        rank_f: sparse_rank(m.field(), ra, &ca),
        rank_g: sparse_rank(m.field(), rb, &cb),
    }
}

/// `dim H^n(O(m))` on `P^n`.
pub fn top_cohomology_dim(n: usize, m: i64) -> usize {
    forms_dim(n, -m - n as i64 - 1)
}

/// Row `q = n` of the first page of `C(k)`, via the dual multiplication maps.
pub fn hn_row(m: &MonadRep, k: i64) -> PageRow {
    let n = m.n();
    let ni = n as i64;
    let (ra, ca) = h0_columns(&m.alpha().transpose(), -k - ni - 1);
    let (rb, cb) = h0_columns(&m.beta().transpose(), -k - ni - 2);
    PageRow {
        dims: [
            m.c() * top_cohomology_dim(n, k - 1),
            m.middle_rank() * top_cohomology_dim(n, k),
            m.c() * top_cohomology_dim(n, k + 1),
        ],
        rank_f: sparse_rank(m.field(), ra, &ca),
        rank_g: sparse_rank(m.field(), rb, &cb),
    }
}

/// `ℍ^q(C(k))` for `q = -1 ..= n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercohomologyColumn {
    pub k: i64,
    /// Index `q + 1`.
    pub dims: Vec<usize>,
}

impl HypercohomologyColumn {
    pub fn get(&self, q: i64) -> usize {
        let i = q + 1;
        if i < 0 || i as usize >= self.dims.len() {
            0
        } else {
            self.dims[i as usize]
        }
    }

    /// Values for `q = 0..=n`.
    pub fn standard(&self) -> &[usize] {
        &self.dims[1..self.dims.len() - 1]
    }
}

fn require_pn(m: &MonadRep) -> Result<()> {
    if m.n() < 2 {
        return Err(Error::Unsupported(format!("hypercohomology needs n >= 2, got P^{}", m.n())));
    }
    Ok(())
}

fn require_complex(m: &MonadRep) -> Result<()> {
    if !m.composite().is_zero() {
        return Err(Error::NotAComplex("β·α is not identically zero on P^n".into()));
    }
    Ok(())
}

pub fn hypercohomology_column(m: &MonadRep, k: i64) -> Result<HypercohomologyColumn> {
    require_pn(m)?;
    require_complex(m)?;
    let n = m.n();
    let e0 = h0_row(m, k).cohomology();
    let en = hn_row(m, k).cohomology();
    let mut dims = vec![0usize; n + 3];
    for (p, v) in (-1i64..=1).zip(e0) {
        dims[(p + 1) as usize] += v;
    }
    for (p, v) in (-1i64..=1).zip(en) {
        dims[(p + n as i64 + 1) as usize] += v;
    }
    Ok(HypercohomologyColumn { k, dims })
}

/// `ℍ^q(C(k))` for `q = 0..=n`.
pub fn hypercohomology_dims(m: &MonadRep, k: i64) -> Result<Vec<usize>> {
    Ok(hypercohomology_column(m, k)?.standard().to_vec())
}

/// `χ(O(m))` on `P^n`.
pub fn euler_characteristic_line(n: usize, m: i64) -> i128 {
    let ni = n as i64;
    if m >= -ni {
        binomial((m + ni) as u64, n as u64) as i128
    } else if m <= -ni - 1 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        sign * binomial((-m - 1) as u64, n as u64) as i128
    } else {
        0
    }
}

/// `−c·χ(O(k−1)) + (2c+r)·χ(O(k)) − c·χ(O(k+1))`.
pub fn expected_euler(n: usize, c: usize, r: usize, k: i64) -> i128 {
    let (c, a) = (c as i128, (2 * c + r) as i128);
    -c * euler_characteristic_line(n, k - 1) + a * euler_characteristic_line(n, k) - c * euler_characteristic_line(n, k + 1)
}

impl HypercohomologyColumn {
    pub fn euler(&self) -> i128 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if (i as i64 - 1) % 2 == 0 { d as i128 } else { -(d as i128) })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercohomologyTable {
    pub n: usize,
    pub kmin: i64,
    pub kmax: i64,
    pub columns: Vec<HypercohomologyColumn>,
}

impl HypercohomologyTable {
    pub fn get(&self, q: i64, k: i64) -> Option<usize> {
        self.columns.iter().find(|c| c.k == k).map(|c| c.get(q))
    }

    /// Columns whose alternating sum disagrees with the Euler characteristic of the terms.
    pub fn euler_failures(&self, c: usize, r: usize) -> Vec<i64> {
        self.columns
            .iter()
            .filter(|col| col.euler() != expected_euler(self.n, c, r, col.k))
            .map(|col| col.k)
            .collect()
    }
}

pub fn hypercohomology_table(m: &MonadRep, kmin: i64, kmax: i64) -> Result<HypercohomologyTable> {
    let columns = (kmin..=kmax)
        .map(|k| hypercohomology_column(m, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(HypercohomologyTable {
        n: m.n(),
        kmin,
        kmax,
        columns,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChargeAndRank {
    pub rank: usize,
    /// `ℍ^1(C(−1))`.
    pub charge: usize,
}

pub fn charge_and_rank(m: &MonadRep) -> Result<ChargeAndRank> {
    let col = hypercohomology_column(m, -1)?;
    Ok(ChargeAndRank {
        rank: m.middle_rank() - 2 * m.c(),
        charge: col.get(1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingCheck {
    pub label: String,
    /// Smallest `n` for which the condition is part of the criterion.
    pub min_n: usize,
    pub applies: bool,
    /// Offending `(q, k, value)` entries; empty means the check passed.
    pub nonzero: Vec<(i64, i64, usize)>,
    /// Both spectral-sequence contributions vanish for dimension reasons, for every `k`.
    pub structural: bool,
}

impl VanishingCheck {
    pub fn passes(&self) -> bool {
        !self.applies || self.nonzero.is_empty()
    }
}

/// Whether both `E_2` contributions to `ℍ^q(C(k))` sit in zero groups for every datum.
fn structurally_zero(n: usize, q: i64, k: Option<i64>) -> bool {
    let ni = n as i64;
    // Row 0 contributes at p = q, row n at p = q − n; slot p ∈ {−1, 0, 1}.
    let row0 = match q {
        -1 => k.is_some_and(|k| forms_dim(n, k - 1) == 0),
        0 => k.is_some_and(|k| forms_dim(n, k) == 0),
        1 => k.is_some_and(|k| forms_dim(n, k + 1) == 0),
        _ => true,
    };
    let rown = match q - ni {
        -1 => k.is_some_and(|k| top_cohomology_dim(n, k - 1) == 0),
        0 => k.is_some_and(|k| top_cohomology_dim(n, k) == 0),
        1 => k.is_some_and(|k| top_cohomology_dim(n, k + 1) == 0),
        _ => true,
    };
    row0 && rown
}

/// The vanishing conditions characterizing instanton complexes on `P^n`.
pub fn instanton_vanishing_table(m: &MonadRep, kmin: i64, kmax: i64) -> Result<Vec<VanishingCheck>> {
    let n = m.n();
    let ni = n as i64;
    let mut out = Vec::new();
    let mut columns: BTreeMap<i64, HypercohomologyColumn> = BTreeMap::new();
    let mut check = |label: String, min_n: usize, entries: Vec<(i64, i64)>, structural: bool| -> Result<()> {
        let applies = n >= min_n;
        let mut nonzero = Vec::new();
        if applies {
            for (q, k) in entries {
                if !columns.contains_key(&k) {
                    columns.insert(k, hypercohomology_column(m, k)?);
                }
                let v = columns[&k].get(q);
                if v != 0 {
                    nonzero.push((q, k, v));
                }
            }
        }
        out.push(VanishingCheck {
            label,
            min_n,
            applies,
            nonzero,
            structural,
        });
        Ok(())
    };
    check(
        format!("H^0(C(-1)) = H^{n}(C(-{n})) = 0"),
        2,
        vec![(0, -1), (ni, -ni)],
        structurally_zero(n, 0, Some(-1)) && structurally_zero(n, ni, Some(-ni)),
    )?;
    check(
        format!("H^1(C(-2)) = H^{}(C({})) = 0", ni - 1, 1 - ni),
        3,
        vec![(1, -2), (ni - 1, 1 - ni)],
        structurally_zero(n, 1, Some(-2)) && structurally_zero(n, ni - 1, Some(1 - ni)),
    )?;
    let middle: Vec<(i64, i64)> = (2..=ni - 2).flat_map(|q| (kmin..=kmax).map(move |k| (q, k))).collect();
    check(
        if n >= 4 {
            format!("H^p(C(k)) = 0 for 2 <= p <= {}, all k (checked on [{kmin}, {kmax}])", ni - 2)
        } else {
            "H^p(C(k)) = 0 for 2 <= p <= n - 2, all k".to_string()
        },
        4,
        middle,
        (2..=ni - 2).all(|q| structurally_zero(n, q, None)),
    )?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheafKind {
    /// Globally weak stable and nondegenerate.
    InstantonSheaf,
    /// The degeneration locus of `α` has codimension at most 1.
    PerverseDegenerate,
    /// `β` fails to be surjective somewhere.
    NotWeaklyStable,
}

impl SheafKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SheafKind::InstantonSheaf => "instanton sheaf",
            SheafKind::PerverseDegenerate => "perverse instanton sheaf (degenerate)",
            SheafKind::NotWeaklyStable => "perverse instanton sheaf (not weakly stable)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: SheafKind,
    /// Set when part of the evidence is a sample or a degree bound rather than a proof.
    pub qualifier: Option<String>,
    pub degeneration: Option<DegenerationInfo>,
    pub weak_stability: GlobalCheck,
    /// `ℍ^1(C(−1))`, on `P^n` only.
    pub charge: Option<usize>,
    /// Both framing points of `ℓ` have fiber cohomology `W`.
    pub trivial_on_line: bool,
}

pub fn classify(x: &AdhmDatum, y: &VarietySpec, config: &RunConfig) -> Result<Classification> {
    let m = build_monad(x);
    let mut qualifiers = Vec::new();
    let degeneration = match degeneration_info(x, y, config.degree_bound, config.samples, config.seed) {
        Ok(info) => Some(info),
        Err(Error::Inconclusive(msg)) => {
            qualifiers.push(format!("degeneration locus undecided: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(info) = &degeneration {
        if matches!(info.locus, crate::monad::LocusEstimate::Dimension { .. }) {
            qualifiers.push(format!("locus dimension read off the Hilbert function up to degree {}", config.degree_bound));
        }
    }
    let weak_stability = global_weak_stability(x, y, config.degree_bound, config.samples, config.seed)?;
    let degenerate = degeneration.as_ref().is_some_and(|i| !i.nondegenerate);
    let kind = if degenerate {
        SheafKind::PerverseDegenerate
    } else {
        match &weak_stability {
            GlobalCheck::False { .. } => SheafKind::NotWeaklyStable,
            GlobalCheck::CertifiedTrue { .. } => SheafKind::InstantonSheaf,
            GlobalCheck::Unknown => {
                qualifiers.push(format!(
                    "surjectivity of beta is sampled, not certified up to degree {}",
                    config.degree_bound
                ));
                SheafKind::InstantonSheaf
            }
        }
    };
    let charge = if y.is_projective_space() && m.composite().is_zero() && m.n() >= 2 {
        Some(charge_and_rank(&m)?.charge)
    } else {
        None
    };
    let trivial_on_line = restrict_to_line(&m)?.framings.iter().all(|f| f.is_isomorphism);
    Ok(Classification {
        kind,
        qualifier: (!qualifiers.is_empty()).then(|| qualifiers.join("; ")),
        degeneration,
        weak_stability,
        charge,
        trivial_on_line,
    })
}
