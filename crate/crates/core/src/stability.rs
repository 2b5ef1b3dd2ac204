//! Invariant subspaces of ADHM data and the stability lattice.
//!
//! Subspaces of `V` are kept as reduced row echelon bases, so equality of
//! subspaces is equality of bases.

use std::collections::BTreeMap;
use std::fmt;

use crate::adhm::{evaluate, evaluate_coords, is_adhm_solution, AdhmDatum, PointDatum};
use crate::config::RunConfig;
use crate::error::Result;
use crate::field::{Field, FieldElement};
use crate::matrix::{is_zero_vector, DenseMatrix, Vector};
use crate::monad::{
    alpha_rank_drop_witnesses, beta_rank_drop_witnesses, build_monad, datum_fiber_maps, rank_drop_locus,
    EmptinessCheck,
};
use crate::variety::{PointOnY, VarietySpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    field: Field,
    ambient: usize,
    /// RREF rows; `pivots[i]` is the leading column of `vectors[i]`.
    vectors: Vec<Vector>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(field: Field, ambient: usize) -> Self {
        SubspaceBasis {
            field,
            ambient,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let id = DenseMatrix::identity(field, ambient);
        Self::span(field, ambient, id.row_vectors())
    }

    pub fn span(field: Field, ambient: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let rows: Vec<Vector> = vectors.into_iter().filter(|v| !is_zero_vector(v)).collect();
        if rows.is_empty() {
            return Self::zero(field, ambient);
        }
        let ech = DenseMatrix::from_rows(field, ambient, rows)
            .expect("vectors of the ambient length")
            .rref();
        SubspaceBasis {
            field,
            ambient,
            vectors: ech.rows,
            pivots: ech.pivots,
        }
    }

    pub fn column_space(m: &DenseMatrix) -> Self {
        Self::span(m.field(), m.rows(), m.column_vectors())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.vectors.len() == self.ambient
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the subspace.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, row) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (r, e) in rest.iter_mut().zip(row) {
                if !e.is_zero() {
                    *r -= &(c * e);
                }
            }
        }
        is_zero_vector(&rest).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[FieldElement]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &SubspaceBasis) -> bool {
        other.vectors.iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        Self::span(self.field, self.ambient, self.vectors.iter().chain(&other.vectors).cloned())
    }

    /// `{φ : φ·v = 0 for all v}`, as vectors of the dual space in the dual basis.
    pub fn annihilator(&self) -> SubspaceBasis {
        if self.is_zero() {
            return Self::full(self.field, self.ambient);
        }
        let m = DenseMatrix::from_rows(self.field, self.ambient, self.vectors.clone()).unwrap();
        Self::span(self.field, self.ambient, m.kernel_basis())
    }

    pub fn intersection(&self, other: &SubspaceBasis) -> SubspaceBasis {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    pub fn image(&self, m: &DenseMatrix) -> SubspaceBasis {
        Self::span(self.field, m.rows(), self.vectors.iter().map(|v| m.mul_vec(v)))
    }

    pub fn is_invariant(&self, op: &DenseMatrix) -> bool {
        self.vectors.iter().all(|v| self.contains_vector(&op.mul_vec(v)))
    }

    /// Matrix of `op` restricted to this (invariant) subspace in the echelon basis.
    pub fn restrict(&self, op: &DenseMatrix) -> DenseMatrix {
        let k = self.dim();
        let cols: Vec<Vector> = self
            .vectors
            .iter()
            .map(|v| self.coordinates(&op.mul_vec(v)).expect("subspace is not invariant"))
            .collect();
        DenseMatrix::from_columns(self.field, k, &cols).unwrap()
    }
}

impl fmt::Display for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, v) in self.vectors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, e) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// Smallest subspace containing `seed` and invariant under every operator.
pub fn krylov_closure(seed: &SubspaceBasis, ops: &[&DenseMatrix]) -> SubspaceBasis {
    let mut current = seed.clone();
    let mut frontier: Vec<Vector> = current.vectors.clone();
    while let Some(v) = frontier.pop() {
        if current.is_full() {
            break;
        }
        for op in ops {
            let w = op.mul_vec(&v);
            if !current.contains_vector(&w) {
                current = current.sum(&SubspaceBasis::span(current.field, current.ambient, [w.clone()]));
                frontier.push(w);
            }
        }
    }
    current
}

/// Largest subspace of `start` invariant under every operator.
pub fn largest_invariant_in(start: &SubspaceBasis, ops: &[&DenseMatrix]) -> SubspaceBasis {
    let mut current = start.clone();
    loop {
        if current.is_zero() {
            return current;
        }
        // v = Σ u_i e_i stays iff every op·v lies in current: N·op·E u = 0 with N the annihilator rows.
        let ann = current.annihilator();
        if ann.is_zero() {
            return current;
        }
        let basis = DenseMatrix::from_columns(current.field, current.ambient, &current.vectors).unwrap();
        let n_rows = DenseMatrix::from_rows(current.field, current.ambient, ann.vectors.clone()).unwrap();
        let blocks: Vec<DenseMatrix> = ops.iter().map(|op| n_rows.mul(&op.mul(&basis))).collect();
        let stacked = DenseMatrix::vstack(current.field, current.dim(), &blocks.iter().collect::<Vec<_>>());
        let kernel = stacked.kernel_basis();
        if kernel.len() == current.dim() {
            return current;
        }
        let next = SubspaceBasis::span(current.field, current.ambient, kernel.iter().map(|u| basis.mul_vec(u)));
        current = next;
    }
}

/// Whether two operators on the same space have a common eigenvector over the
/// algebraic closure: `⋂_{k,l=1}^{m-1} ker [M1^k, M2^l] ≠ 0`.
pub fn has_common_eigenvector(m1: &DenseMatrix, m2: &DenseMatrix) -> bool {
    let m = m1.rows();
    if m == 0 {
        return false;
    }
    let field = m1.field();
    let powers = |a: &DenseMatrix| {
        let mut out = Vec::new();
        let mut p = a.clone();
        for _ in 1..m {
            out.push(p.clone());
            p = p.mul(a);
        }
        out
    };
    let (p1, p2) = (powers(m1), powers(m2));
    let mut comms = Vec::new();
    for a in &p1 {
        for b in &p2 {
            comms.push(a.commutator(b));
        }
    }
    if comms.is_empty() {
        return true;
    }
    DenseMatrix::vstack(field, m, &comms.iter().collect::<Vec<_>>()).nullity() > 0
}

fn column_span_sum(field: Field, c: usize, blocks: &[DenseMatrix]) -> SubspaceBasis {
    SubspaceBasis::span(field, c, blocks.iter().flat_map(|m| m.column_vectors()))
}

fn kernel_intersection(field: Field, c: usize, blocks: &[&DenseMatrix]) -> SubspaceBasis {
    let stacked = DenseMatrix::vstack(field, c, blocks);
    SubspaceBasis::span(field, c, stacked.kernel_basis())
}

/// `S_Y`: Krylov closure of `Σ_k im I_k` under all `A_k`, `B_k`.
pub fn stabilizing_subspace_global(x: &AdhmDatum) -> SubspaceBasis {
    let seed = column_span_sum(x.field(), x.c(), x.i());
    let ops: Vec<&DenseMatrix> = x.a().iter().chain(x.b()).collect();
    krylov_closure(&seed, &ops)
}

/// `S_{Y_P}`: Krylov closure of `im I_P` under `A_P`, `B_P`.
pub fn stabilizing_subspace_at_point(x: &AdhmDatum, p: &PointOnY) -> SubspaceBasis {
    point_stabilizing_subspace(&evaluate(x, p))
}

fn point_stabilizing_subspace(pd: &PointDatum) -> SubspaceBasis {
    krylov_closure(&SubspaceBasis::column_space(&pd.i), &[&pd.a, &pd.b])
}

/// Largest subspace of `⋂ ker J_k` invariant under all `A'_k`, `B'_k`; zero iff costable.
pub fn costabilizing_subspace_global(x: &AdhmDatum) -> SubspaceBasis {
    let js: Vec<&DenseMatrix> = x.j().iter().collect();
    let start = kernel_intersection(x.field(), x.c(), &js);
    let ops: Vec<&DenseMatrix> = x.a_prime().iter().chain(x.b_prime()).collect();
    largest_invariant_in(&start, &ops)
}

pub fn costabilizing_subspace_at_point(x: &AdhmDatum, p: &PointOnY) -> SubspaceBasis {
    point_costabilizing_subspace(&evaluate(x, p))
}

fn point_costabilizing_subspace(pd: &PointDatum) -> SubspaceBasis {
    let start = kernel_intersection(pd.j.field(), pd.a.rows(), &[&pd.j]);
    largest_invariant_in(&start, &[&pd.a_prime, &pd.b_prime])
}

/// Sample-based lower bounds for `T_Y = Σ_P S_{Y_P}` and `L_Y = Σ_P im I_P`.
pub fn sampled_t_and_l(x: &AdhmDatum, points: &[PointOnY]) -> (SubspaceBasis, SubspaceBasis) {
    let zero = SubspaceBasis::zero(x.field(), x.c());
    points.iter().fold((zero.clone(), zero), |(t, l), p| {
        let pd = evaluate(x, p);
        (t.sum(&point_stabilizing_subspace(&pd)), l.sum(&SubspaceBasis::column_space(&pd.i)))
    })
}

pub fn is_stable(x: &AdhmDatum) -> bool {
    stabilizing_subspace_global(x).is_full()
}

pub fn is_costable(x: &AdhmDatum) -> bool {
    costabilizing_subspace_global(x).is_zero()
}

/// Same decision as [`is_costable`] by duality: the orthogonal complement of the Krylov
/// closure of the rows of `J` under `A'^t`, `B'^t` is the largest invariant subspace in `ker J`.
pub fn is_costable_by_duality(x: &AdhmDatum) -> bool {
    let seed = SubspaceBasis::span(x.field(), x.c(), x.j().iter().flat_map(|m| m.row_vectors()));
    let transposes: Vec<DenseMatrix> = x.a_prime().iter().chain(x.b_prime()).map(|m| m.transpose()).collect();
    let ops: Vec<&DenseMatrix> = transposes.iter().collect();
    krylov_closure(&seed, &ops).is_full()
}

/// `β_P` has rank `c`.
pub fn is_weak_stable_at(x: &AdhmDatum, p: &PointOnY) -> bool {
    datum_fiber_maps(x, p.coords()).1.rank() == x.c()
}

/// `α_P` has rank `c`.
pub fn is_weak_costable_at(x: &AdhmDatum, p: &PointOnY) -> bool {
    datum_fiber_maps(x, p.coords()).0.rank() == x.c()
}

/// `Y_P` stable: `S_{Y_P} = V`.
pub fn is_point_stable(x: &AdhmDatum, p: &PointOnY) -> bool {
    stabilizing_subspace_at_point(x, p).is_full()
}

pub fn is_point_costable(x: &AdhmDatum, p: &PointOnY) -> bool {
    costabilizing_subspace_at_point(x, p).is_zero()
}

/// `Y_P` weak stable in the sense of the definition: no invariant hyperplane containing
/// `im I_P`, over the algebraic closure. Independent of the `x`, `y` coordinates of `P`.
pub fn is_point_weak_stable(x: &AdhmDatum, p: &PointOnY) -> bool {
    point_weak_stable(&evaluate(x, p))
}

fn point_weak_stable(pd: &PointDatum) -> bool {
    // Hyperplanes ker φ ⊇ S_{Y_P} invariant under A_P, B_P are common eigenvectors of
    // A_P^t, B_P^t inside ann(S_{Y_P}), which those transposes preserve.
    let ann = point_stabilizing_subspace(pd).annihilator();
    let (at, bt) = (pd.a.transpose(), pd.b.transpose());
    !has_common_eigenvector(&ann.restrict(&at), &ann.restrict(&bt))
}

/// `Y'_P` weak costable in the sense of the definition: no common eigenline of
/// `A'_P`, `B'_P` inside `ker J_P`, over the algebraic closure.
pub fn is_point_weak_costable(x: &AdhmDatum, p: &PointOnY) -> bool {
    point_weak_costable(&evaluate(x, p))
}

fn point_weak_costable(pd: &PointDatum) -> bool {
    let k = point_costabilizing_subspace(pd);
    !has_common_eigenvector(&k.restrict(&pd.a_prime), &k.restrict(&pd.b_prime))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalCheck {
    /// The minors together with `I(Y)` fill the graded piece of this degree.
    CertifiedTrue { degree: u32 },
    False { witness: PointOnY },
    Unknown,
}

/// `β` surjective at every point of `Y`.
pub fn global_weak_stability(x: &AdhmDatum, y: &VarietySpec, degree_bound: u32, samples: usize, seed: u64) -> Result<GlobalCheck> {
    x.check_variety(y)?;
    let (points, _) = y.sample_points_upto(samples, seed);
    if let Some(w) = beta_rank_drop_witnesses(x, y, &points).into_iter().next() {
        return Ok(GlobalCheck::False { witness: w });
    }
    let m = build_monad(x);
    Ok(match rank_drop_locus(&m.beta().transpose(), x.c(), y, degree_bound)? {
        EmptinessCheck::Empty { degree } => GlobalCheck::CertifiedTrue { degree },
        EmptinessCheck::NotCertified { .. } => GlobalCheck::Unknown,
    })
}

/// `α` injective at every point of `Y`.
pub fn global_weak_costability(x: &AdhmDatum, y: &VarietySpec, degree_bound: u32, samples: usize, seed: u64) -> Result<GlobalCheck> {
    x.check_variety(y)?;
    let (points, _) = y.sample_points_upto(samples, seed);
    if let Some(w) = alpha_rank_drop_witnesses(x, y, &points).into_iter().next() {
        return Ok(GlobalCheck::False { witness: w });
    }
    let m = build_monad(x);
    Ok(match rank_drop_locus(m.alpha(), x.c(), y, degree_bound)? {
        EmptinessCheck::Empty { degree } => GlobalCheck::CertifiedTrue { degree },
        EmptinessCheck::NotCertified { .. } => GlobalCheck::Unknown,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    True,
    False,
    CertifiedTrue,
    Unknown,
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Verdict::True | Verdict::CertifiedTrue)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::CertifiedTrue => "certified_true",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlavorVerdict {
    pub verdict: Verdict,
    /// How the verdict was reached.
    pub basis: String,
    pub witness: Option<PointOnY>,
}

impl FlavorVerdict {
    fn new(verdict: Verdict, basis: impl Into<String>) -> Self {
        FlavorVerdict {
            verdict,
            basis: basis.into(),
            witness: None,
        }
    }

    fn with_witness(verdict: Verdict, basis: impl Into<String>, p: &PointOnY) -> Self {
        FlavorVerdict {
            verdict,
            basis: basis.into(),
            witness: Some(p.clone()),
        }
    }
}

/// Flavor names in report order.
pub const FLAVORS: [&str; 15] = [
    "stable",
    "costable",
    "regular",
    "locally_stable",
    "locally_weak_stable",
    "locally_costable",
    "locally_weak_costable",
    "locally_regular",
    "locally_weak_regular",
    "globally_stable",
    "globally_weak_stable",
    "globally_costable",
    "globally_weak_costable",
    "globally_regular",
    "globally_weak_regular",
];

/// `(a, b)`: flavor `a` implies flavor `b`.
pub const LATTICE: [(&str, &str); 20] = [
    ("globally_regular", "globally_stable"),
    ("globally_regular", "globally_costable"),
    ("globally_regular", "globally_weak_regular"),
    ("globally_weak_regular", "globally_weak_stable"),
    ("globally_weak_regular", "globally_weak_costable"),
    ("globally_stable", "globally_weak_stable"),
    ("globally_stable", "locally_stable"),
    ("globally_weak_stable", "locally_weak_stable"),
    ("locally_stable", "locally_weak_stable"),
    ("locally_stable", "stable"),
    ("locally_weak_stable", "stable"),
    ("globally_costable", "globally_weak_costable"),
    ("globally_costable", "locally_costable"),
    ("globally_weak_costable", "locally_weak_costable"),
    ("locally_costable", "locally_weak_costable"),
    ("locally_costable", "costable"),
    ("locally_weak_costable", "costable"),
    ("regular", "stable"),
    ("regular", "costable"),
    ("locally_regular", "locally_weak_regular"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSubspaces {
    pub point: PointOnY,
    pub s_yp: SubspaceBasis,
    pub costable_part: SubspaceBasis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub verdicts: BTreeMap<&'static str, FlavorVerdict>,
    pub solves_equation: bool,
    pub s_y: SubspaceBasis,
    /// Largest `A'`, `B'`-invariant subspace inside `⋂ ker J_k`.
    pub costable_subspace: SubspaceBasis,
    pub sampled: Vec<PointSubspaces>,
    /// Sampled lower bounds for `T_Y` and `L_Y`.
    pub t_y: SubspaceBasis,
    pub l_y: SubspaceBasis,
    pub lattice_violations: Vec<String>,
}

impl StabilityReport {
    pub fn verdict(&self, flavor: &str) -> Verdict {
        self.verdicts[flavor].verdict
    }

    /// Flavors in [`FLAVORS`] order.
    pub fn ordered(&self) -> Vec<(&'static str, &FlavorVerdict)> {
        FLAVORS.iter().map(|f| (*f, &self.verdicts[f])).collect()
    }

    /// `T_Y` (sampled) is strictly smaller than `S_Y`.
    pub fn strict_gap(&self) -> bool {
        self.t_y.dim() < self.s_y.dim()
    }
}

pub fn full_report(x: &AdhmDatum, y: &VarietySpec, config: &RunConfig) -> Result<StabilityReport> {
    x.check_variety(y)?;
    let c = x.c();
    let solves_equation = is_adhm_solution(x, y)?;
    let on_pn_solution = y.is_projective_space() && solves_equation;
    let (points, _) = y.sample_points_upto(config.samples, config.seed);
    let off_line: Vec<&PointOnY> = points.iter().filter(|p| !p.is_on_line()).collect();

    let s_y = stabilizing_subspace_global(x);
    let costable_subspace = costabilizing_subspace_global(x);
    let sampled: Vec<PointSubspaces> = off_line
        .iter()
        .map(|p| {
            let pd = evaluate(x, p);
            PointSubspaces {
                point: (*p).clone(),
                s_yp: point_stabilizing_subspace(&pd),
                costable_part: point_costabilizing_subspace(&pd),
            }
        })
        .collect();
    let off_line_owned: Vec<PointOnY> = off_line.iter().map(|p| (*p).clone()).collect();
    let (t_y, l_y) = sampled_t_and_l(x, &off_line_owned);

    let mut v: BTreeMap<&'static str, FlavorVerdict> = BTreeMap::new();
    let exact = |holds: bool, what: &str| FlavorVerdict::new(if holds { Verdict::True } else { Verdict::False }, what);
    let stable = s_y.is_full();
    let costable = costable_subspace.is_zero();
    v.insert("stable", exact(stable, "Krylov closure of im I"));
    v.insert("costable", exact(costable, "invariant-subspace fixpoint in ker J"));
    v.insert("regular", exact(stable && costable, "stable and costable"));

    // Existential flavors: a sampled point is a proof, its absence is only evidence.
    let exists = |pred: &dyn Fn(&PointDatum) -> bool, what: &str, implied_false: Option<&str>| {
        if let Some(reason) = implied_false {
            return FlavorVerdict::new(Verdict::False, reason.to_string());
        }
        match off_line.iter().find(|p| pred(&evaluate(x, p))) {
            Some(p) => FlavorVerdict::with_witness(Verdict::True, format!("{what} holds at a sampled point"), p),
            None => FlavorVerdict::new(
                Verdict::False,
                format!("{what} fails at all {} sampled points", off_line.len()),
            ),
        }
    };
    let not_stable = (!stable).then_some("not stable, and S_{Y_P} lies in S_Y");
    let not_costable = (!costable).then_some("not costable, and the pointwise fixpoint contains the global one");
    v.insert(
        "locally_stable",
        exists(&|pd| point_stabilizing_subspace(pd).is_full(), "S_{Y_P} = V", not_stable),
    );
    v.insert("locally_weak_stable", exists(&point_weak_stable, "weak stability of Y_P", None));
    v.insert(
        "locally_costable",
        exists(&|pd| point_costabilizing_subspace(pd).is_zero(), "costability of Y'_P", not_costable),
    );
    v.insert("locally_weak_costable", exists(&point_weak_costable, "weak costability of Y'_P", None));

    // Universal flavors: a sampled counterexample or an emptiness certificate.
    let gws = global_weak_stability(x, y, config.degree_bound, config.samples, config.seed)?;
    let gwc = global_weak_costability(x, y, config.degree_bound, config.samples, config.seed)?;
    let from_check = |g: &GlobalCheck, what: &str| match g {
        GlobalCheck::CertifiedTrue { degree } => FlavorVerdict::new(
            Verdict::CertifiedTrue,
            format!("{what}: degeneracy ideal full in degree {degree}"),
        ),
        GlobalCheck::False { witness } => FlavorVerdict::with_witness(Verdict::False, format!("{what} fails"), witness),
        GlobalCheck::Unknown => FlavorVerdict::new(
            Verdict::Unknown,
            format!("no witness, no certificate up to degree {}", config.degree_bound),
        ),
    };
    v.insert("globally_weak_stable", from_check(&gws, "rank of beta"));
    v.insert("globally_weak_costable", from_check(&gwc, "rank of alpha"));

    let forall = |fails: &dyn Fn(&PointDatum) -> bool, weak: &GlobalCheck, what: &str| {
        if let Some(p) = off_line.iter().find(|p| fails(&evaluate(x, p))) {
            return FlavorVerdict::with_witness(Verdict::False, format!("{what} fails at a sampled point"), p);
        }
        match weak {
            GlobalCheck::CertifiedTrue { degree } if on_pn_solution || c == 1 => FlavorVerdict::new(
                Verdict::CertifiedTrue,
                format!("weak version certified in degree {degree} and equivalent here"),
            ),
            _ => FlavorVerdict::new(Verdict::Unknown, "no sampled counterexample"),
        }
    };
    v.insert(
        "globally_stable",
        forall(&|pd| !point_stabilizing_subspace(pd).is_full(), &gws, "S_{Y_P} = V"),
    );
    v.insert(
        "globally_costable",
        forall(&|pd| !point_costabilizing_subspace(pd).is_zero(), &gwc, "pointwise costability"),
    );

    let conj = |a: &FlavorVerdict, b: &FlavorVerdict, what: &str| {
        let verdict = match (a.verdict, b.verdict) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::CertifiedTrue,
        };
        let witness = if a.verdict == Verdict::False { &a.witness } else { &b.witness };
        FlavorVerdict {
            verdict,
            basis: what.to_string(),
            witness: if verdict == Verdict::False { witness.clone() } else { None },
        }
    };
    for (name, a, b) in [
        ("locally_regular", "locally_stable", "locally_costable"),
        ("locally_weak_regular", "locally_weak_stable", "locally_weak_costable"),
        ("globally_regular", "globally_stable", "globally_costable"),
        ("globally_weak_regular", "globally_weak_stable", "globally_weak_costable"),
    ] {
        let fv = conj(&v[a], &v[b], &format!("{a} and {b}"));
        v.insert(name, fv);
    }

    let lattice_violations = propagate_lattice(&mut v);
    Ok(StabilityReport {
        verdicts: v,
        solves_equation,
        s_y,
        costable_subspace,
        sampled,
        t_y,
        l_y,
        lattice_violations,
    })
}

/// Fills `Unknown` verdicts from the implications and lists implications that the
/// computed verdicts contradict.
fn propagate_lattice(v: &mut BTreeMap<&'static str, FlavorVerdict>) -> Vec<String> {
    loop {
        let mut changed = false;
        for (a, b) in LATTICE {
            if v[a].verdict.holds() && v[b].verdict == Verdict::Unknown {
                let verdict = v[a].verdict;
                v.insert(b, FlavorVerdict::new(verdict, format!("implied by {a}")));
                changed = true;
            }
            if v[b].verdict == Verdict::False && v[a].verdict == Verdict::Unknown {
                let witness = v[b].witness.clone();
                v.insert(
                    a,
                    FlavorVerdict {
                        verdict: Verdict::False,
                        basis: format!("{b} fails"),
                        witness,
                    },
                );
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    LATTICE
        .iter()
        .filter(|(a, b)| v[a].verdict.holds() && v[b].verdict == Verdict::False)
        .map(|(a, b)| format!("{a} holds but {b} fails"))
        .collect()
}

/// `Y_P` weak stable decided both ways at one point of `P^n`: by the rank of `β` over
/// every `(x, y)` above the z-part of `p` and by the hyperplane criterion.
pub fn weak_stability_duality_holds(x: &AdhmDatum, z: &[FieldElement]) -> bool {
    let mut coords = z.to_vec();
    let field = x.field();
    coords.push(field.zero());
    coords.push(field.zero());
    let pd = evaluate_coords(x, &coords);
    let transposed = PointDatum {
        a: pd.b.transpose(),
        b: pd.a.transpose(),
        a_prime: pd.b.transpose(),
        b_prime: pd.a.transpose(),
        i: pd.j.transpose(),
        j: pd.i.transpose(),
    };
    point_weak_stable(&pd) == point_weak_costable(&transposed)
}
