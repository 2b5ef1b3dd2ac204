//! The three-term complex `V⊗O(-1) --α--> (V⊕V⊕W)⊗O --β--> V⊗O(1)` attached to a datum,
//! with `α = (A' + x; B' + y; J)` and `β = (−B − y, A + x, I)`, so that `βα = μ(X)`.

use crate::adhm::{evaluate_coords, is_adhm_solution, AdhmDatum};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::graded::{growth_degree, GrowthDegree, IdealSweep};
use crate::matrix::DenseMatrix;
use crate::poly::{x_index, y_index, HomogPoly, PolyMatrix};
use crate::univariate::eigenvalues;
use crate::variety::{DimensionEstimate, PointOnY, VarietySpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadRep {
    field: Field,
    n: usize,
    c: usize,
    r: usize,
    alpha: PolyMatrix,
    beta: PolyMatrix,
}

pub fn build_monad(x: &AdhmDatum) -> MonadRep {
    let field = x.field();
    let n = x.n();
    let (c, r) = (x.c(), x.r());
    let xv = HomogPoly::x(field, n);
    let yv = HomogPoly::y(field, n);
    let ap = x.linear_family(x.a_prime());
    let bp = x.linear_family(x.b_prime());
    let j = x.linear_family(x.j());
    let a = x.linear_family(x.a());
    let b = x.linear_family(x.b());
    let i = x.linear_family(x.i());

    let mut alpha = PolyMatrix::zeros(field, n, 2 * c + r, c, 1);
    let mut beta = PolyMatrix::zeros(field, n, c, 2 * c + r, 1);
    for s in 0..c {
        for t in 0..c {
            let diag = |p: &HomogPoly| if s == t { p.clone() } else { HomogPoly::zero(field, n, 1) };
            alpha.set(s, t, ap.get(s, t).add(&diag(&xv)));
            alpha.set(c + s, t, bp.get(s, t).add(&diag(&yv)));
            beta.set(s, t, b.get(s, t).add(&diag(&yv)).neg());
            beta.set(s, c + t, a.get(s, t).add(&diag(&xv)));
        }
        for w in 0..r {
            beta.set(s, 2 * c + w, i.get(s, w).clone());
        }
    }
    for w in 0..r {
        for t in 0..c {
            alpha.set(2 * c + w, t, j.get(w, t).clone());
        }
    }
    MonadRep {
        field,
        n,
        c,
        r,
        alpha,
        beta,
    }
}

impl MonadRep {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Rank `2c + r` of the middle term.
    pub fn middle_rank(&self) -> usize {
        2 * self.c + self.r
    }

    pub fn alpha(&self) -> &PolyMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &PolyMatrix {
        &self.beta
    }

    /// `β·α`, a `c×c` matrix of quadrics.
    pub fn composite(&self) -> PolyMatrix {
        self.beta.mul(&self.alpha)
    }
}

/// Whether `βα` vanishes modulo `I(Y)`.
pub fn verify_complex(m: &MonadRep, y: &VarietySpec) -> Result<bool> {
    if y.n() != m.n || y.field() != m.field {
        return Err(Error::Dimension(format!(
            "complex on P^{} over {} against a variety in P^{} over {}",
            m.n,
            m.field,
            y.n(),
            y.field()
        )));
    }
    let comp = m.composite();
    if comp.is_zero() {
        return Ok(true);
    }
    let piece = y.ideal_piece(2);
    Ok(comp.entries().iter().all(|e| e.is_zero() || piece.contains(e)))
}

pub fn fiber_maps(m: &MonadRep, p: &PointOnY) -> (DenseMatrix, DenseMatrix) {
    fiber_maps_at(m, p.coords())
}

pub fn fiber_maps_at(m: &MonadRep, coords: &[FieldElement]) -> (DenseMatrix, DenseMatrix) {
    (m.alpha.evaluate(coords), m.beta.evaluate(coords))
}

/// `(α_P, β_P)` straight from the blocks, without the polynomial matrices.
pub fn datum_fiber_maps(x: &AdhmDatum, coords: &[FieldElement]) -> (DenseMatrix, DenseMatrix) {
    let field = x.field();
    let n = x.n();
    let c = x.c();
    let pd = evaluate_coords(x, coords);
    let id = DenseMatrix::identity(field, c);
    let xs = id.scale(&coords[x_index(n)]);
    let ys = id.scale(&coords[y_index(n)]);
    let alpha = DenseMatrix::vstack(field, c, &[&pd.a_prime.add(&xs), &pd.b_prime.add(&ys), &pd.j]);
    let beta = DenseMatrix::hstack(field, c, &[&pd.b.add(&ys).neg(), &pd.a.add(&xs), &pd.i]);
    (alpha, beta)
}

/// `dim ker β_P − rank α_P`.
pub fn fiber_cohomology_dim(m: &MonadRep, p: &PointOnY) -> Result<usize> {
    let (alpha, beta) = fiber_maps(m, p);
    if !beta.mul(&alpha).is_zero() {
        return Err(Error::NotAComplex(format!("β_P α_P ≠ 0 at {p}")));
    }
    Ok(beta.nullity() - alpha.rank())
}

/// Points `(z : −λ : −μ)` of `Y`, with `λ` an eigenvalue of `m1` and `μ` one of `m2`.
/// These are the only points over the z-part `z` where `(m1 + x, m2 + y)`-type
/// fiber maps can drop rank.
pub fn eigen_candidates(y: &VarietySpec, z: &[FieldElement], m1: &DenseMatrix, m2: &DenseMatrix) -> Vec<PointOnY> {
    let n = y.n();
    let (l1, _) = eigenvalues(m1);
    let (l2, _) = eigenvalues(m2);
    let mut out: Vec<PointOnY> = Vec::new();
    for a in &l1 {
        for b in &l2 {
            let mut coords = z.to_vec();
            coords.push(-a);
            coords.push(-b);
            debug_assert_eq!(coords.len(), n + 1);
            if coords.iter().all(FieldElement::is_zero) || !y.contains_point(&coords) {
                continue;
            }
            let p = PointOnY::normalized(coords);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// z-parts worth probing for rank drops: those of the given points and the coordinate vectors.
pub fn probe_z_parts(y: &VarietySpec, points: &[PointOnY]) -> Vec<Vec<FieldElement>> {
    let field = y.field();
    let d = y.d();
    let mut out: Vec<Vec<FieldElement>> = Vec::new();
    let mut push = |z: Vec<FieldElement>| {
        if !z.iter().all(FieldElement::is_zero) && !out.contains(&z) {
            out.push(z);
        }
    };
    for k in 0..=d {
        let mut z = vec![field.zero(); d + 1];
        z[k] = field.one();
        push(z);
    }
    for p in points {
        push(p.z().to_vec());
    }
    out
}

/// Points of `Y` where `α_P` is not injective, found among the eigenvalue candidates.
pub fn alpha_rank_drop_witnesses(x: &AdhmDatum, y: &VarietySpec, points: &[PointOnY]) -> Vec<PointOnY> {
    let mut out = Vec::new();
    for z in probe_z_parts(y, points) {
        let pd = evaluate_coords(x, &with_zero_xy(&z));
        for p in eigen_candidates(y, &z, &pd.a_prime, &pd.b_prime) {
            let (alpha, _) = datum_fiber_maps(x, p.coords());
            if alpha.rank() < x.c() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    for p in points {
        let (alpha, _) = datum_fiber_maps(x, p.coords());
        if alpha.rank() < x.c() && !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

/// Points of `Y` where `β_P` is not surjective, found among the eigenvalue candidates.
pub fn beta_rank_drop_witnesses(x: &AdhmDatum, y: &VarietySpec, points: &[PointOnY]) -> Vec<PointOnY> {
    let mut out = Vec::new();
    for z in probe_z_parts(y, points) {
        let pd = evaluate_coords(x, &with_zero_xy(&z));
        for p in eigen_candidates(y, &z, &pd.a.transpose(), &pd.b.transpose()) {
            let (_, beta) = datum_fiber_maps(x, p.coords());
            if beta.rank() < x.c() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    for p in points {
        let (_, beta) = datum_fiber_maps(x, p.coords());
        if beta.rank() < x.c() && !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

fn with_zero_xy(z: &[FieldElement]) -> Vec<FieldElement> {
    let field = z[0].field();
    let mut v = z.to_vec();
    v.push(field.zero());
    v.push(field.zero());
    v
}

/// Outcome of deciding whether `V(minors) ∩ Y` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmptinessCheck {
    /// The ideal of minors plus `I(Y)` contains every form of this degree.
    Empty { degree: u32 },
    NotCertified { hilbert: Vec<usize> },
}

/// Emptiness of the locus where a polynomial matrix drops below full rank `k` on `Y`.
pub fn rank_drop_locus(m: &PolyMatrix, k: usize, y: &VarietySpec, degree_bound: u32) -> Result<EmptinessCheck> {
    let mut gens = m.minors(k);
    gens.retain(|g| !g.is_zero());
    gens.extend(y.nonzero_generators().cloned());
    let sweep = IdealSweep::new(y.field(), y.n(), &gens)?;
    let hilbert = sweep.clone().hilbert_function(degree_bound);
    if let Some(pos) = hilbert.iter().position(|&h| h == 0) {
        return Ok(EmptinessCheck::Empty { degree: pos as u32 });
    }
    Ok(EmptinessCheck::NotCertified { hilbert })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocusEstimate {
    Empty { degree: u32 },
    Dimension { dim: usize, codim: usize, degree_bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationInfo {
    pub locus: LocusEstimate,
    /// Sampled points where `α_P` is not injective.
    pub witnesses: Vec<PointOnY>,
    /// Codimension of the degeneration locus at least 2 (or empty).
    pub nondegenerate: bool,
}

/// Locus of points of `Y` where `α_P` is not injective.
pub fn degeneration_info(x: &AdhmDatum, y: &VarietySpec, degree_bound: u32, samples: usize, seed: u64) -> Result<DegenerationInfo> {
    x.check_variety(y)?;
    let m = build_monad(x);
    let (points, _) = y.sample_points_upto(samples, seed);
    let witnesses = alpha_rank_drop_witnesses(x, y, &points);
    let locus = match rank_drop_locus(&m.alpha, m.c, y, degree_bound)? {
        EmptinessCheck::Empty { degree } => LocusEstimate::Empty { degree },
        EmptinessCheck::NotCertified { hilbert } => {
            let locus_dim = match growth_degree(&hilbert) {
                GrowthDegree::Dimension(e) => e,
                _ => {
                    return Err(Error::Inconclusive(format!(
                        "Hilbert function of the degeneration locus undecided up to degree {degree_bound}: {hilbert:?}"
                    )))
                }
            };
            let y_dim = match y.dimension_estimate(degree_bound)? {
                DimensionEstimate::Dimension { dim, .. } => dim,
                other => return Err(Error::Inconclusive(format!("dimension of Y: {other:?}"))),
            };
            LocusEstimate::Dimension {
                dim: locus_dim,
                codim: y_dim.saturating_sub(locus_dim),
                degree_bound,
            }
        }
    };
    let nondegenerate = match &locus {
        LocusEstimate::Empty { .. } => true,
        LocusEstimate::Dimension { codim, .. } => *codim >= 2,
    };
    Ok(DegenerationInfo {
        locus,
        witnesses,
        nondegenerate,
    })
}

/// Fiber cohomology at a point of `ℓ`, compared with `W` through the projection onto the last summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFraming {
    pub point: PointOnY,
    pub cohomology_dim: usize,
    /// Rank of `ker β_P → W`; equal to `r` with kernel `im α_P` when the framing is an isomorphism.
    pub projection_rank: usize,
    pub is_isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineRestriction {
    pub alpha: PolyMatrix,
    pub beta: PolyMatrix,
    pub framings: Vec<LineFraming>,
}

/// Substitutes `z = 0` and checks the result is `(x; y; 0)`, `(−y, x, 0)`, then
/// identifies the fiber cohomology with `W` at `(0:..:1:0)` and `(0:..:0:1)`.
pub fn restrict_to_line(m: &MonadRep) -> Result<LineRestriction> {
    let field = m.field;
    let n = m.n;
    let (c, r) = (m.c, m.r);
    let zs: Vec<usize> = (0..n - 1).collect();
    let alpha = m.alpha.set_vars_to_zero(&zs);
    let beta = m.beta.set_vars_to_zero(&zs);
    let xv = HomogPoly::x(field, n);
    let yv = HomogPoly::y(field, n);
    let zero = HomogPoly::zero(field, n, 1);
    for s in 0..2 * c + r {
        for t in 0..c {
            let want_a = if s == t {
                xv.clone()
            } else if s == c + t {
                yv.clone()
            } else {
                zero.clone()
            };
            let want_b = if s == t {
                yv.neg()
            } else if s == c + t {
                xv.clone()
            } else {
                zero.clone()
            };
            if alpha.get(s, t) != &want_a || beta.get(t, s) != &want_b {
                return Err(Error::NotAComplex(format!(
                    "restriction to the line is not canonical at entry ({s}, {t})"
                )));
            }
        }
    }
    let mut framings = Vec::new();
    for which in [x_index(n), y_index(n)] {
        let mut coords = vec![field.zero(); n + 1];
        coords[which] = field.one();
        let a = alpha.evaluate(&coords);
        let b = beta.evaluate(&coords);
        let kernel = b.kernel_basis();
        let cohomology_dim = kernel.len() - a.rank();
        let proj_rows: Vec<Vec<FieldElement>> = kernel.iter().map(|v| v[2 * c..].to_vec()).collect();
        let projection_rank = if proj_rows.is_empty() {
            0
        } else {
            DenseMatrix::from_rows(field, r, proj_rows)?.rank()
        };
        // ker β_P → W is onto W with kernel im α_P iff its rank is r and dim ker β_P = r + rank α_P.
        let is_isomorphism = projection_rank == r && cohomology_dim == r;
        framings.push(LineFraming {
            point: PointOnY::normalized(coords),
            cohomology_dim,
            projection_rank,
            is_isomorphism,
        });
    }
    Ok(LineRestriction { alpha, beta, framings })
}

/// Whether `X` solves the equation on `Y`, read off the complex.
pub fn complex_matches_equation(x: &AdhmDatum, y: &VarietySpec) -> Result<bool> {
    Ok(verify_complex(&build_monad(x), y)? == is_adhm_solution(x, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adhm::{random_datum, AdhmBlocks, RandomMode};
    use crate::poly::parse_poly;

    const Q: Field = Field::Rational;

    fn s(v: i64) -> DenseMatrix {
        DenseMatrix::from_i64(Q, &[vec![v]])
    }

    fn p2_point_datum() -> AdhmDatum {
        AdhmDatum::symmetric(Q, 1, 1, vec![s(0)], vec![s(0)], vec![s(1)], vec![s(0)]).unwrap()
    }

    fn scroll() -> (AdhmDatum, VarietySpec) {
        let x = AdhmDatum::new(
            Q,
            1,
            1,
            AdhmBlocks {
                a: vec![s(1), s(0)],
                b: vec![s(0), s(1)],
                a_prime: vec![s(0), s(0)],
                b_prime: vec![s(0), s(0)],
                i: vec![DenseMatrix::zeros(Q, 1, 1); 2],
                j: vec![DenseMatrix::zeros(Q, 1, 1); 2],
            },
        )
        .unwrap();
        let y = VarietySpec::new(Q, 3, vec![parse_poly(Q, 3, "z0*y - z1*x").unwrap()]).unwrap();
        (x, y)
    }

    fn pt(y: &VarietySpec, c: &[i64]) -> PointOnY {
        PointOnY::from_i64(y, c).unwrap()
    }

    #[test]
    fn assembly_of_small_examples() {
        let m = build_monad(&p2_point_datum());
        assert_eq!(m.alpha().to_string(), "[[x], [y], [0]]");
        assert_eq!(m.beta().to_string(), "[[-y, x, z0]]");
        let (x, _) = scroll();
        let m = build_monad(&x);
        assert_eq!(m.alpha().to_string(), "[[x], [y], [0]]");
        assert_eq!(m.beta().to_string(), "[[-z1 - y, z0 + x, 0]]");
    }

    #[test]
    fn complex_condition_tracks_the_equation() {
        let (x, s) = scroll();
        let p3 = VarietySpec::projective_space(Q, 3).unwrap();
        assert!(verify_complex(&build_monad(&x), &s).unwrap());
        assert!(!verify_complex(&build_monad(&x), &p3).unwrap());
        for seed in 0..5 {
            let x = random_datum(Q, 1, 3, 1, RandomMode::PnSolutionC1, seed).unwrap();
            assert!(verify_complex(&build_monad(&x), &p3).unwrap());
            let g = random_datum(Q, 2, 1, 1, RandomMode::Generic, seed).unwrap();
            assert!(complex_matches_equation(&g, &p3).unwrap());
        }
    }

    #[test]
    fn fiber_dims_of_point_ideal() {
        let x = p2_point_datum();
        let m = build_monad(&x);
        let p2 = VarietySpec::projective_space(Q, 2).unwrap();
        assert_eq!(fiber_cohomology_dim(&m, &pt(&p2, &[1, 0, 0])).unwrap(), 2);
        assert_eq!(fiber_cohomology_dim(&m, &pt(&p2, &[2, 3, 5])).unwrap(), 1);
        assert_eq!(fiber_cohomology_dim(&m, &pt(&p2, &[0, 1, 7])).unwrap(), 1);
        let (a, b) = fiber_maps(&m, &pt(&p2, &[1, 0, 0]));
        assert_eq!(a.rank(), 0);
        assert_eq!(b.rank(), 1);
        let (a2, b2) = datum_fiber_maps(&x, pt(&p2, &[4, -1, 3]).coords());
        assert_eq!((a2, b2), fiber_maps(&m, &pt(&p2, &[4, -1, 3])));
    }

    #[test]
    fn non_complex_is_reported() {
        let (x, _) = scroll();
        let m = build_monad(&x);
        let p3 = VarietySpec::projective_space(Q, 3).unwrap();
        let err = fiber_cohomology_dim(&m, &pt(&p3, &[0, 1, 1, 0])).unwrap_err();
        assert!(matches!(err, Error::NotAComplex(_)));
    }

    #[test]
    fn scroll_is_degenerate_along_a_line() {
        let (x, s) = scroll();
        let info = degeneration_info(&x, &s, 8, 6, 1).unwrap();
        assert_eq!(
            info.locus,
            LocusEstimate::Dimension {
                dim: 1,
                codim: 1,
                degree_bound: 8
            }
        );
        assert!(!info.nondegenerate);
        assert!(!info.witnesses.is_empty());
        for w in &info.witnesses {
            assert!(w.x().is_zero() && w.y().is_zero());
        }
    }

    #[test]
    fn point_ideal_is_nondegenerate() {
        let x = p2_point_datum();
        let p2 = VarietySpec::projective_space(Q, 2).unwrap();
        let info = degeneration_info(&x, &p2, 6, 4, 0).unwrap();
        assert_eq!(
            info.locus,
            LocusEstimate::Dimension {
                dim: 0,
                codim: 2,
                degree_bound: 6
            }
        );
        assert!(info.nondegenerate);
        assert!(info.witnesses.contains(&pt(&p2, &[1, 0, 0])));
    }

    #[test]
    fn line_restriction_is_canonical_and_framed() {
        for (c, r, d, seed) in [(1, 1, 0, 0), (2, 3, 1, 1), (3, 2, 2, 2)] {
            let x = random_datum(Q, c, r, d, RandomMode::Generic, seed).unwrap();
            let lr = restrict_to_line(&build_monad(&x)).unwrap();
            assert_eq!(lr.framings.len(), 2);
            for f in &lr.framings {
                assert_eq!(f.cohomology_dim, r);
                assert!(f.is_isomorphism);
                assert_eq!(lr.beta.evaluate(f.point.coords()).rank(), c);
            }
        }
    }

    #[test]
    fn line_points_have_full_rank_fibers() {
        let x = random_datum(Q, 2, 2, 1, RandomMode::Generic, 9).unwrap();
        let m = build_monad(&x);
        let p3 = VarietySpec::projective_space(Q, 3).unwrap();
        for c in [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 2, -3]] {
            let (a, b) = fiber_maps(&m, &pt(&p3, &c));
            assert_eq!(a.rank(), 2);
            assert_eq!(b.transpose().rank(), 2);
        }
    }
}
