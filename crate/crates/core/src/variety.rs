//! The base scheme `Y ⊆ P^n`, given by homogeneous generators, with the line
//! `ℓ = {z0 = .. = zd = 0}` and the plane of linear forms `⟨z0, .., zd⟩`.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::graded::{growth_degree, GrowthDegree, IdealPiece, IdealSweep};
use crate::poly::{x_index, y_index, HomogPoly};
use crate::univariate::{roots, UniPoly};

pub const DEFAULT_DEGREE_BOUND: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    field: Field,
    n: usize,
    generators: Vec<HomogPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The generator does not vanish on the line `ℓ`.
    MissesLine,
    /// The generator has degree 1, so `Y` sits in a hyperplane.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub generator: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.kind {
            ViolationKind::MissesLine => "does not vanish on the line z0 = .. = zd = 0",
            ViolationKind::Linear => "is linear, so Y is degenerate",
        };
        write!(f, "generator {} ({}) {why}", self.index, self.generator)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionEstimate {
    /// Growth degree of the Hilbert function, stable up to `degree_bound`.
    Dimension { dim: usize, degree_bound: u32 },
    /// The ideal contains every form of degree `degree`.
    Empty { degree: u32 },
    Inconclusive { degree_bound: u32 },
}

impl VarietySpec {
    /// Structural checks only (`n ≥ 2`, matching ring); see [`VarietySpec::validate`].
    pub fn new(field: Field, n: usize, generators: Vec<HomogPoly>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidVariety(format!("ambient dimension {n} < 2")));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.n() != n || g.field() != field {
                return Err(Error::InvalidVariety(format!(
                    "generator {i} is not a form on P^{n} over {field}"
                )));
            }
        }
        Ok(VarietySpec { field, n, generators })
    }

    /// Builds and validates in one step.
    pub fn checked(field: Field, n: usize, generators: Vec<HomogPoly>) -> Result<Self> {
        let v = Self::new(field, n, generators)?;
        v.validate().map_err(|vs| {
            Error::InvalidVariety(vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })?;
        Ok(v)
    }

    pub fn projective_space(field: Field, n: usize) -> Result<Self> {
        Self::new(field, n, Vec::new())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `z` coordinates minus one.
    pub fn d(&self) -> usize {
        self.n - 2
    }

    pub fn generators(&self) -> &[HomogPoly] {
        &self.generators
    }

    pub fn nonzero_generators(&self) -> impl Iterator<Item = &HomogPoly> {
        self.generators.iter().filter(|g| !g.is_zero())
    }

    pub fn is_projective_space(&self) -> bool {
        self.nonzero_generators().next().is_none()
    }

    /// Index list of the `z` coordinates.
    pub fn z_indices(&self) -> Vec<usize> {
        (0..=self.d()).collect()
    }

    /// Checks that every generator vanishes on `ℓ` and none is linear.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let z = self.z_indices();
        let mut out = Vec::new();
        for (index, g) in self.generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if !g.set_vars_to_zero(&z).is_zero() {
                out.push(Violation {
                    index,
                    generator: g.to_string(),
                    kind: ViolationKind::MissesLine,
                });
            }
            if g.degree() == 1 {
                out.push(Violation {
                    index,
                    generator: g.to_string(),
                    kind: ViolationKind::Linear,
                });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// The degree-`degree` piece of the ideal of `Y`.
    pub fn ideal_piece(&self, degree: u32) -> IdealPiece {
        IdealPiece::new(self.field, self.n, &self.generators, degree).expect("checked at construction")
    }

    pub fn contains_in_degree(&self, f: &HomogPoly) -> bool {
        f.is_zero() || self.ideal_piece(f.degree()).contains(f)
    }

    pub fn contains_point(&self, coords: &[FieldElement]) -> bool {
        coords.len() == self.n + 1 && self.generators.iter().all(|g| g.evaluate(coords).is_zero())
    }

    /// Seeded random points of `Y`. With `count ≥ 2` the first point lies on `ℓ`
    /// and the others off it.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<PointOnY>> {
        let (out, trials) = self.sample_points_upto(count, seed);
        if out.len() < count {
            return Err(Error::SamplingExhausted {
                found: out.len(),
                wanted: count,
                trials,
            });
        }
        Ok(out)
    }

    /// Like [`sample_points`](Self::sample_points) but returns whatever the budget
    /// produced, with the number of trials spent.
    pub fn sample_points_upto(&self, count: usize, seed: u64) -> (Vec<PointOnY>, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        if count >= 2 {
            let p = self.random_line_point(&mut rng);
            seen.insert(p.coords.clone());
            out.push(p);
        }
        let budget = 10_000 * count;
        let mut trials = 0;
        while out.len() < count && trials < budget {
            trials += 1;
            for coords in self.candidate_points(&mut rng) {
                let p = PointOnY::normalized(coords);
                if p.is_on_line() || !self.contains_point(&p.coords) {
                    continue;
                }
                if seen.insert(p.coords.clone()) {
                    out.push(p);
                    if out.len() == count {
                        break;
                    }
                }
            }
        }
        (out, trials)
    }

    fn random_line_point(&self, rng: &mut ChaCha8Rng) -> PointOnY {
        let mut coords = vec![self.field.zero(); self.n + 1];
        loop {
            coords[x_index(self.n)] = self.field.random(rng);
            coords[y_index(self.n)] = self.field.random(rng);
            if !coords.iter().all(FieldElement::is_zero) {
                return PointOnY::normalized(coords);
            }
        }
    }

    /// One elimination attempt: random values for all coordinates but one, and
    /// the roots of the first generator that does not vanish identically.
    fn candidate_points(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<FieldElement>> {
        let mut coords: Vec<FieldElement> = (0..=self.n).map(|_| self.field.random(rng)).collect();
        if self.is_projective_space() {
            return vec![coords];
        }
        let v = rng.gen_range(0..=self.n);
        for g in self.nonzero_generators() {
            let restricted = restrict_to_coordinate(g, &coords, v);
            if restricted.is_zero() {
                continue;
            }
            let (rs, _) = roots(&restricted);
            return rs
                .into_iter()
                .map(|t| {
                    let mut c = coords.clone();
                    c[v] = t;
                    c
                })
                .collect();
        }
        coords[v] = self.field.random(rng);
        vec![coords]
    }

    /// Every point of `Y` over a small prime field, normalized.
    pub fn enumerate_points(&self) -> Result<Vec<PointOnY>> {
        let Field::Prime(p) = self.field else {
            return Err(Error::Unsupported("point enumeration needs a prime field".into()));
        };
        let total = (p as f64).powi(self.n as i32 + 1);
        if total > 2e6 {
            return Err(Error::Unsupported(format!("F_{p}^{} is too large to enumerate", self.n + 1)));
        }
        let elems = self.field.elements().unwrap();
        let mut out = Vec::new();
        // Normalized representatives: first nonzero coordinate equal to 1.
        for lead in 0..=self.n {
            let free = self.n - lead;
            let mut idx = vec![0usize; free];
            loop {
                let mut coords = vec![self.field.zero(); self.n + 1];
                coords[lead] = self.field.one();
                for (k, &i) in idx.iter().enumerate() {
                    coords[lead + 1 + k] = elems[i].clone();
                }
                if self.contains_point(&coords) {
                    out.push(PointOnY { coords });
                }
                let mut k = 0;
                while k < free {
                    idx[k] += 1;
                    if idx[k] < elems.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == free {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Hilbert function `h(D) = dim (S/I)_D` for `D = 0..=bound`.
    pub fn hilbert_function(&self, bound: u32) -> Vec<usize> {
        IdealSweep::new(self.field, self.n, &self.generators)
            .expect("checked at construction")
            .hilbert_function(bound)
    }

    pub fn dimension_estimate(&self, degree_bound: u32) -> Result<DimensionEstimate> {
        let max_deg = self.nonzero_generators().map(HomogPoly::degree).max().unwrap_or(0);
        if degree_bound < max_deg + 2 {
            return Err(Error::Precondition(format!(
                "degree bound {degree_bound} is below max generator degree {max_deg} + 2"
            )));
        }
        Ok(match growth_degree(&self.hilbert_function(degree_bound)) {
            GrowthDegree::Dimension(dim) => DimensionEstimate::Dimension { dim, degree_bound },
            GrowthDegree::Empty { degree } => DimensionEstimate::Empty { degree },
            GrowthDegree::Inconclusive => DimensionEstimate::Inconclusive { degree_bound },
        })
    }

    /// The same variety with coefficients moved to another field.
    pub fn to_field(&self, field: Field) -> Result<VarietySpec> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.to_field(field))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, self.n, gens)
    }
}

/// `g` as a polynomial in coordinate `v` with every other coordinate fixed.
fn restrict_to_coordinate(g: &HomogPoly, coords: &[FieldElement], v: usize) -> UniPoly {
    let field = g.field();
    let mut cs = vec![field.zero(); g.degree() as usize + 1];
    for (e, c) in g.terms() {
        let mut t = c.clone();
        for (i, &k) in e.iter().enumerate() {
            if i != v && k > 0 {
                t *= &coords[i].pow(k as u64);
            }
        }
        cs[e[v] as usize] += &t;
    }
    UniPoly::new(field, cs)
}

/// A point of `Y` given by homogeneous coordinates `(z0 : .. : zd : x : y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointOnY {
    coords: Vec<FieldElement>,
}

impl PointOnY {
    /// Checks that the coordinates are not all zero and satisfy every generator.
    pub fn new(variety: &VarietySpec, coords: Vec<FieldElement>) -> Result<Self> {
        if coords.len() != variety.n + 1 {
            return Err(Error::Dimension(format!(
                "{} coordinates for a point of P^{}",
                coords.len(),
                variety.n
            )));
        }
        if coords.iter().all(FieldElement::is_zero) {
            return Err(Error::Precondition("all coordinates are zero".into()));
        }
        if !variety.contains_point(&coords) {
            return Err(Error::Precondition("point does not lie on Y".into()));
        }
        Ok(PointOnY { coords })
    }

    /// Integer coordinates; membership is checked.
    pub fn from_i64(variety: &VarietySpec, coords: &[i64]) -> Result<Self> {
        let f = variety.field;
        Self::new(variety, coords.iter().map(|&v| f.from_i64(v)).collect())
    }

    /// Scales so that the first nonzero coordinate is 1.
    pub fn normalized(mut coords: Vec<FieldElement>) -> Self {
        if let Some(lead) = coords.iter().find(|c| !c.is_zero()).cloned() {
            let inv = lead.inv().unwrap();
            for c in &mut coords {
                *c = &*c * &inv;
            }
        }
        PointOnY { coords }
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn z(&self) -> &[FieldElement] {
        &self.coords[..self.coords.len() - 2]
    }

    pub fn x(&self) -> &FieldElement {
        &self.coords[self.coords.len() - 2]
    }

    pub fn y(&self) -> &FieldElement {
        &self.coords[self.coords.len() - 1]
    }

    /// Whether the point lies on `ℓ` (all `z` coordinates vanish).
    pub fn is_on_line(&self) -> bool {
        self.z().iter().all(FieldElement::is_zero)
    }

    /// The point with every coordinate multiplied by `s`.
    pub fn scaled(&self, s: &FieldElement) -> PointOnY {
        PointOnY {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

impl fmt::Display for PointOnY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(":"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    fn var(field: Field, n: usize, gens: &[&str]) -> VarietySpec {
        let g = gens.iter().map(|s| parse_poly(field, n, s).unwrap()).collect();
        VarietySpec::new(field, n, g).unwrap()
    }

    #[test]
    fn validation() {
        let q = Field::Rational;
        assert!(VarietySpec::projective_space(q, 3).unwrap().validate().is_ok());
        assert!(var(q, 3, &["z0*y - z1*x"]).validate().is_ok());
        let bad = var(q, 3, &["x*y"]).validate().unwrap_err();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].kind, ViolationKind::MissesLine);
        let bad = var(q, 3, &["z0"]).validate().unwrap_err();
        assert_eq!(bad[0].kind, ViolationKind::Linear);
    }

    #[test]
    fn membership() {
        let q = Field::Rational;
        let s = var(q, 3, &["z0*y - z1*x"]);
        assert!(s.contains_in_degree(&parse_poly(q, 3, "z0*y - z1*x").unwrap()));
        assert!(!s.contains_in_degree(&parse_poly(q, 3, "z0^2").unwrap()));
        let p3 = VarietySpec::projective_space(q, 3).unwrap();
        assert!(!p3.contains_in_degree(&parse_poly(q, 3, "x^2").unwrap()));
        assert!(p3.contains_in_degree(&HomogPoly::zero(q, 3, 2)));
    }

    #[test]
    fn sampling() {
        let fp = Field::default_prime();
        let s = var(fp, 3, &["z0*y - z1*x"]);
        let pts = s.sample_points(5, 1).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts[0].is_on_line());
        assert!(pts[1..].iter().all(|p| !p.is_on_line()));
        for p in &pts {
            assert!(s.contains_point(p.coords()));
        }
        let quad = var(Field::Rational, 4, &["z0*y + z1*x + z2^2"]);
        for p in quad.sample_points(3, 9).unwrap() {
            assert!(quad.contains_point(p.coords()));
        }
        let p3 = VarietySpec::projective_space(Field::Rational, 3).unwrap();
        assert_eq!(p3.sample_points(3, 2).unwrap().len(), 3);
    }

    #[test]
    fn sampling_exhaustion() {
        // P^2 over F_3 has 13 points.
        let p2 = VarietySpec::projective_space(Field::prime(3).unwrap(), 2).unwrap();
        assert_eq!(p2.enumerate_points().unwrap().len(), 13);
        assert!(matches!(
            p2.sample_points(14, 0),
            Err(Error::SamplingExhausted { .. })
        ));
    }

    #[test]
    fn dimensions() {
        let q = Field::Rational;
        for n in 2..=5 {
            let pn = VarietySpec::projective_space(q, n).unwrap();
            assert_eq!(
                pn.dimension_estimate(8).unwrap(),
                DimensionEstimate::Dimension { dim: n, degree_bound: 8 }
            );
        }
        let s = var(q, 3, &["z0*y - z1*x"]);
        assert_eq!(s.hilbert_function(4), vec![1, 4, 9, 16, 25]);
        assert!(matches!(s.dimension_estimate(8).unwrap(), DimensionEstimate::Dimension { dim: 2, .. }));
        let quad = var(q, 4, &["z0*y + z1*x + z2^2"]);
        assert!(matches!(quad.dimension_estimate(8).unwrap(), DimensionEstimate::Dimension { dim: 3, .. }));
        assert!(s.dimension_estimate(3).is_err());
    }

    proptest! {
        #[test]
        fn membership_is_monotone(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3, e in -3i64..=3) {
            let q = Field::Rational;
            let s = var(q, 3, &["z0*y - z1*x"]);
            let f = parse_poly(q, 3, "z0*y - z1*x").unwrap().mul(&parse_poly(q, 3, "z0 + x").unwrap());
            let g = parse_poly(q, 3, &format!("{a}*z0 + {b}*z1 + {c}*x + {d}*y")).unwrap();
            prop_assert!(s.contains_in_degree(&f));
            if !g.is_zero() {
                prop_assert!(s.contains_in_degree(&f.mul(&g)));
            }
            let h = parse_poly(q, 3, &format!("{e}*z0^3")).unwrap();
            prop_assert_eq!(s.contains_in_degree(&f.add(&h)), e == 0);
        }
    }
}
