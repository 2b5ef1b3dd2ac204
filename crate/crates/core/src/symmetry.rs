//! The `GL(V)` and framed `GL(V) × GL(W)` actions on ADHM data, and the linear
//! systems behind stabilizers, equivalences and morphisms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adhm::{c1_j_system, random_datum, AdhmBlocks, AdhmDatum, RandomMode};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::graded::binomial;
use crate::matrix::{DenseMatrix, Vector};
use crate::stability::{costabilizing_subspace_global, stabilizing_subspace_global};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    g: DenseMatrix,
    h: Option<DenseMatrix>,
}

impl GroupElement {
    pub fn new(g: DenseMatrix, h: Option<DenseMatrix>) -> Result<Self> {
        for m in std::iter::once(&g).chain(h.as_ref()) {
            if !m.is_square() {
                return Err(Error::Dimension(format!("group element block is {}x{}", m.rows(), m.cols())));
            }
            if !m.is_invertible() {
                return Err(Error::Singular);
            }
        }
        Ok(GroupElement { g, h })
    }

    pub fn identity(field: Field, c: usize) -> Self {
        GroupElement {
            g: DenseMatrix::identity(field, c),
            h: None,
        }
    }

    pub fn g(&self) -> &DenseMatrix {
        &self.g
    }

    pub fn h(&self) -> Option<&DenseMatrix> {
        self.h.as_ref()
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            g: self.g.inverse().expect("invertible by construction"),
            h: self.h.as_ref().map(|h| h.inverse().expect("invertible by construction")),
        }
    }

    /// `self · other`; a missing `h` counts as the identity.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let h = match (&self.h, &other.h) {
            (Some(a), Some(b)) => Some(a.mul(b)),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        GroupElement {
            g: self.g.mul(&other.g),
            h,
        }
    }

    /// Random invertible element; `framed` also draws `h`.
    pub fn random(field: Field, c: usize, r: Option<usize>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |k: usize| loop {
            let e = (0..k * k).map(|_| field.random(&mut rng)).collect();
            let m = DenseMatrix::new(field, k, k, e).unwrap();
            if m.is_invertible() {
                break m;
            }
        };
        let g = draw(c);
        let h = r.map(draw);
        GroupElement { g, h }
    }
}

/// `A ↦ gAg⁻¹` on all four square families, `I ↦ gIh⁻¹`, `J ↦ hJg⁻¹`.
pub fn act(e: &GroupElement, x: &AdhmDatum) -> Result<AdhmDatum> {
    let c = x.c();
    let r = x.r();
    if e.g.rows() != c || e.h.as_ref().is_some_and(|h| h.rows() != r) {
        return Err(Error::Dimension(format!(
            "group element of size {} (framing {:?}) acting on c={c}, r={r}",
            e.g.rows(),
            e.h.as_ref().map(|h| h.rows())
        )));
    }
    if e.g.field() != x.field() {
        return Err(Error::InvalidField(format!("group element over {}, datum over {}", e.g.field(), x.field())));
    }
    let gi = e.g.inverse().ok_or(Error::Singular)?;
    let (h, hi) = match &e.h {
        Some(h) => (Some(h), Some(h.inverse().ok_or(Error::Singular)?)),
        None => (None, None),
    };
    let conj = |v: &[DenseMatrix]| v.iter().map(|m| e.g.mul(m).mul(&gi)).collect::<Vec<_>>();
    let b = x.blocks();
    let blocks = AdhmBlocks {
        a: conj(&b.a),
        b: conj(&b.b),
        a_prime: conj(&b.a_prime),
        b_prime: conj(&b.b_prime),
        i: b.i
            .iter()
            .map(|m| {
                let gm = e.g.mul(m);
                match &hi {
                    Some(hi) => gm.mul(hi),
                    None => gm,
                }
            })
            .collect(),
        j: b.j
            .iter()
            .map(|m| {
                let mg = m.mul(&gi);
                match h {
                    Some(h) => h.mul(&mg),
                    None => mg,
                }
            })
            .collect(),
    };
    AdhmDatum::new(x.field(), c, r, blocks)
}

/// Linear equations in the entries of `f: V1 → V2` (row-major, first) and
/// optionally `g: W1 → W2` (row-major, after `f`).
struct Intertwiner {
    field: Field,
    c1: usize,
    c2: usize,
    r1: usize,
    r2: usize,
    with_g: bool,
    rows: Vec<Vector>,
    rhs: Vec<FieldElement>,
}

impl Intertwiner {
    fn new(field: Field, c1: usize, c2: usize, r1: usize, r2: usize, with_g: bool) -> Self {
        Intertwiner {
            field,
            c1,
            c2,
            r1,
            r2,
            with_g,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    fn nvars(&self) -> usize {
        self.c2 * self.c1 + if self.with_g { self.r2 * self.r1 } else { 0 }
    }

    fn f_var(&self, i: usize, j: usize) -> usize {
        i * self.c1 + j
    }

    fn g_var(&self, i: usize, j: usize) -> usize {
        self.c2 * self.c1 + i * self.r1 + j
    }

    fn blank(&self) -> Vector {
        vec![self.field.zero(); self.nvars()]
    }

    fn push(&mut self, row: Vector, rhs: FieldElement) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    /// `f M1 = M2 f` for square `M1` (`c1×c1`) and `M2` (`c2×c2`).
    fn commute(&mut self, m1: &DenseMatrix, m2: &DenseMatrix) {
        for i in 0..self.c2 {
            for j in 0..self.c1 {
                let mut row = self.blank();
                for l in 0..self.c1 {
                    row[self.f_var(i, l)] += m1.get(l, j);
                }
                for l in 0..self.c2 {
                    row[self.f_var(l, j)] -= m2.get(i, l);
                }
                self.push(row, self.field.zero());
            }
        }
    }

    /// `f I1 = I2 g`, or `f I1 = I2` when `g` is not a variable.
    fn framing_in(&mut self, i1: &DenseMatrix, i2: &DenseMatrix) {
        let cols = i1.cols();
        for i in 0..self.c2 {
            for w in 0..cols {
                let mut row = self.blank();
                for l in 0..self.c1 {
                    row[self.f_var(i, l)] += i1.get(l, w);
                }
                let rhs = if self.with_g {
                    for u in 0..self.r2 {
                        row[self.g_var(u, w)] -= i2.get(i, u);
                    }
                    self.field.zero()
                } else {
                    i2.get(i, w).clone()
                };
                self.push(row, rhs);
            }
        }
    }

    /// `J2 f = g J1`, or `J2 f = J1` when `g` is not a variable.
    fn framing_out(&mut self, j1: &DenseMatrix, j2: &DenseMatrix) {
        let rows = j2.rows();
        for w in 0..rows {
            for j in 0..self.c1 {
                let mut row = self.blank();
                for l in 0..self.c2 {
                    row[self.f_var(l, j)] += j2.get(w, l);
                }
                let rhs = if self.with_g {
                    for u in 0..self.r1 {
                        row[self.g_var(w, u)] -= j1.get(u, j);
                    }
                    self.field.zero()
                } else {
                    j1.get(w, j).clone()
                };
                self.push(row, rhs);
            }
        }
    }

    fn matrix(&self) -> DenseMatrix {
        if self.rows.is_empty() {
            return DenseMatrix::zeros(self.field, 0, self.nvars());
        }
        DenseMatrix::from_rows(self.field, self.nvars(), self.rows.clone()).unwrap()
    }

    fn split(&self, v: &[FieldElement]) -> (DenseMatrix, Option<DenseMatrix>) {
        let nf = self.c2 * self.c1;
        let f = DenseMatrix::new(self.field, self.c2, self.c1, v[..nf].to_vec()).unwrap();
        let g = self
            .with_g
            .then(|| DenseMatrix::new(self.field, self.r2, self.r1, v[nf..].to_vec()).unwrap());
        (f, g)
    }
}

fn intertwiner(x1: &AdhmDatum, x2: &AdhmDatum, with_g: bool, framing_terms: bool) -> Intertwiner {
    let mut sys = Intertwiner::new(x1.field(), x1.c(), x2.c(), x1.r(), x2.r(), with_g);
    let (b1, b2) = (x1.blocks(), x2.blocks());
    for k in 0..=x1.d() {
        sys.commute(&b1.a[k], &b2.a[k]);
        sys.commute(&b1.b[k], &b2.b[k]);
        sys.commute(&b1.a_prime[k], &b2.a_prime[k]);
        sys.commute(&b1.b_prime[k], &b2.b_prime[k]);
        if framing_terms {
            sys.framing_in(&b1.i[k], &b2.i[k]);
            sys.framing_out(&b1.j[k], &b2.j[k]);
        }
    }
    sys
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    /// Dimension of the affine solution set through the identity.
    pub dimension: usize,
    /// Basis of its tangent space: `δ` commuting with every block, `δI = 0`, `Jδ = 0`.
    pub lie_algebra: Vec<DenseMatrix>,
}

pub fn stabilizer_dimension(x: &AdhmDatum) -> Stabilizer {
    let c = x.c();
    let mut sys = Intertwiner::new(x.field(), c, c, x.r(), x.r(), false);
    let b = x.blocks();
    let zero_i = DenseMatrix::zeros(x.field(), c, x.r());
    let zero_j = DenseMatrix::zeros(x.field(), x.r(), c);
    for k in 0..=x.d() {
        sys.commute(&b.a[k], &b.a[k]);
        sys.commute(&b.b[k], &b.b[k]);
        sys.commute(&b.a_prime[k], &b.a_prime[k]);
        sys.commute(&b.b_prime[k], &b.b_prime[k]);
        // Homogeneous versions of gI = I and Jg = J.
        sys.framing_in(&b.i[k], &zero_i);
        sys.framing_out(&zero_j, &b.j[k]);
    }
    let kernel = sys.matrix().kernel_basis();
    Stabilizer {
        dimension: kernel.len(),
        lie_algebra: kernel.iter().map(|v| sys.split(v).0).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Found(GroupElement),
    ProvablyNone { reason: String },
    /// Solutions exist but none of the sampled ones was invertible.
    Inconclusive { solution_dim: usize, trials: usize },
}

pub const EQUIVALENCE_TRIALS: usize = 64;

/// Searches for `e` with `act(e, x1) = x2`; `framed` lets `GL(W)` act too.
pub fn find_equivalence(x1: &AdhmDatum, x2: &AdhmDatum, framed: bool, seed: u64) -> Result<Equivalence> {
    if x1.field() != x2.field() {
        return Err(Error::InvalidField(format!("{} vs {}", x1.field(), x2.field())));
    }
    if (x1.c(), x1.r(), x1.d()) != (x2.c(), x2.r(), x2.d()) {
        return Err(Error::Dimension(format!(
            "(c, r, d) = {:?} vs {:?}",
            (x1.c(), x1.r(), x1.d()),
            (x2.c(), x2.r(), x2.d())
        )));
    }
    let invariants = |x: &AdhmDatum| (stabilizing_subspace_global(x).dim(), costabilizing_subspace_global(x).dim());
    let (i1, i2) = (invariants(x1), invariants(x2));
    if i1 != i2 {
        return Ok(Equivalence::ProvablyNone {
            reason: format!("dims of (S_Y, costable subspace) differ: {i1:?} vs {i2:?}"),
        });
    }
    let sys = intertwiner(x1, x2, framed, true);
    let mat = sys.matrix();
    let kernel = mat.kernel_basis();
    let particular = if framed {
        vec![x1.field().zero(); sys.nvars()]
    } else {
        match mat.solve(&sys.rhs) {
            Some(v) => v,
            None => {
                return Ok(Equivalence::ProvablyNone {
                    reason: "the intertwining equations are inconsistent".into(),
                })
            }
        }
    };
    if framed && kernel.is_empty() {
        return Ok(Equivalence::ProvablyNone {
            reason: "only the zero pair intertwines".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = x1.field();
    for trial in 0..EQUIVALENCE_TRIALS {
        let mut v = particular.clone();
        if trial > 0 || framed {
            for b in &kernel {
                let t = field.random(&mut rng);
                for (acc, e) in v.iter_mut().zip(b) {
                    *acc += &(&t * e);
                }
            }
        }
        let (f, g) = sys.split(&v);
        if let Ok(e) = GroupElement::new(f, g) {
            debug_assert_eq!(act(&e, x1).as_ref(), Ok(x2));
            return Ok(Equivalence::Found(e));
        }
        if kernel.is_empty() {
            break;
        }
    }
    if kernel.is_empty() {
        return Ok(Equivalence::ProvablyNone {
            reason: "the unique solution of the intertwining equations is singular".into(),
        });
    }
    Ok(Equivalence::Inconclusive {
        solution_dim: kernel.len(),
        trials: EQUIVALENCE_TRIALS,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSpace {
    pub dimension: usize,
    /// Pairs `(f: V1 → V2, g: W1 → W2)`.
    pub basis: Vec<(DenseMatrix, DenseMatrix)>,
}

/// All `(f, g)` with `f A1 = A2 f` (and likewise for `B`, `A'`, `B'`), `f I1 = I2 g`, `J2 f = g J1`.
pub fn hom_space(x1: &AdhmDatum, x2: &AdhmDatum) -> Result<MorphismSpace> {
    if x1.field() != x2.field() || x1.d() != x2.d() {
        return Err(Error::Dimension(format!(
            "morphisms need the same field and d: ({}, {}) vs ({}, {})",
            x1.field(),
            x1.d(),
            x2.field(),
            x2.d()
        )));
    }
    let sys = intertwiner(x1, x2, true, true);
    let kernel = sys.matrix().kernel_basis();
    Ok(MorphismSpace {
        dimension: kernel.len(),
        basis: kernel
            .iter()
            .map(|v| {
                let (f, g) = sys.split(v);
                (f, g.expect("g is a variable"))
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianTrial {
    pub seed: u64,
    pub rank: usize,
    pub full_rank: bool,
    /// The `I_k` are linearly independent (global stability for `c = 1`).
    pub globally_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliCertificate {
    pub r: usize,
    pub d: usize,
    /// No `c = 1` globally stable solution exists (`r <= d`).
    pub empty: bool,
    pub ambient: usize,
    pub equations: usize,
    pub group_dim: usize,
    pub trials: Vec<JacobianTrial>,
    /// `ambient − equations − group_dim`.
    pub dimension: Option<i64>,
    /// `2(d+1)r − d(d−1)/2`.
    pub formula: Option<i64>,
}

impl ModuliCertificate {
    pub fn full_rank_count(&self) -> usize {
        self.trials.iter().filter(|t| t.full_rank).count()
    }
}

/// Jacobian of `I_k J_m + I_m J_k` (`k <= m`) in the unknowns `(I, J)`, at a `c = 1` datum.
pub fn c1_jacobian(x: &AdhmDatum) -> DenseMatrix {
    let field = x.field();
    let r = x.r();
    let d1 = x.d() + 1;
    // d/dJ is the J-system itself; d/dI has the same shape with J_m^t in place of I_k.
    let dj = c1_j_system(x.i(), r);
    let jt: Vec<DenseMatrix> = x.j().iter().map(|m| m.transpose()).collect();
    let di = c1_j_system(&jt, r);
    let rows = binomial(d1 as u64 + 1, 2);
    debug_assert_eq!(dj.rows(), rows);
    DenseMatrix::hstack(field, rows, &[&di, &dj])
}

pub fn moduli_dimension_certificate(field: Field, r: usize, d: usize, trials: usize, seed: u64) -> Result<ModuliCertificate> {
    let d1 = d + 1;
    let ambient = 2 * d1 * (1 + r);
    let equations = binomial(d1 as u64 + 1, 2);
    let mut cert = ModuliCertificate {
        r,
        d,
        empty: r <= d,
        ambient,
        equations,
        group_dim: 1,
        trials: Vec::new(),
        dimension: None,
        formula: None,
    };
    if cert.empty {
        return Ok(cert);
    }
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let x = random_datum(field, 1, r, d, RandomMode::PnSolutionC1, s)?;
        let rank = c1_jacobian(&x).rank();
        let stacked = DenseMatrix::vstack(field, r, &x.i().iter().collect::<Vec<_>>());
        cert.trials.push(JacobianTrial {
            seed: s,
            rank,
            full_rank: rank == equations,
            globally_stable: stacked.rank() == d1,
        });
    }
    cert.dimension = Some(ambient as i64 - equations as i64 - 1);
    let (di, ri) = (d as i64, r as i64);
    cert.formula = Some(2 * (di + 1) * ri - di * (di - 1) / 2);
    Ok(cert)
}
