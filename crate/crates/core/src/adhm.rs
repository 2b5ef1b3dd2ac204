//! ADHM data `X = ((A, B, I), (A', B', J))` with one block per coordinate `z_k`,
//! the residual of the generalized ADHM equation, and evaluation at points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::DenseMatrix;
use crate::poly::{HomogPoly, PolyMatrix};
use crate::variety::{PointOnY, VarietySpec};

/// The six families of blocks, each indexed by `k = 0..=d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdhmBlocks {
    pub a: Vec<DenseMatrix>,
    pub b: Vec<DenseMatrix>,
    pub a_prime: Vec<DenseMatrix>,
    pub b_prime: Vec<DenseMatrix>,
    pub i: Vec<DenseMatrix>,
    pub j: Vec<DenseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdhmDatum {
    field: Field,
    c: usize,
    r: usize,
    d: usize,
    blocks: AdhmBlocks,
}

/// Names of the block families, in the order used by the JSON schema.
pub const FAMILY_NAMES: [&str; 6] = ["A", "B", "Aprime", "Bprime", "I", "J"];

impl AdhmDatum {
    /// Checks that there are `d + 1` blocks per family with shapes `c×c`, `c×r`, `r×c`.
    pub fn new(field: Field, c: usize, r: usize, blocks: AdhmBlocks) -> Result<Self> {
        if c == 0 || r == 0 {
            return Err(Error::Dimension(format!("need c >= 1 and r >= 1, got c={c}, r={r}")));
        }
        let len = blocks.a.len();
        if len == 0 {
            return Err(Error::Dimension("at least one block per family is required".into()));
        }
        let families: [(&str, &Vec<DenseMatrix>, (usize, usize)); 6] = [
            ("A", &blocks.a, (c, c)),
            ("B", &blocks.b, (c, c)),
            ("Aprime", &blocks.a_prime, (c, c)),
            ("Bprime", &blocks.b_prime, (c, c)),
            ("I", &blocks.i, (c, r)),
            ("J", &blocks.j, (r, c)),
        ];
        for (name, fam, shape) in families {
            if fam.len() != len {
                return Err(Error::Dimension(format!(
                    "{name} has {} blocks, A has {len}",
                    fam.len()
                )));
            }
            for (k, m) in fam.iter().enumerate() {
                if m.shape() != shape {
                    return Err(Error::Dimension(format!(
                        "{name}[{k}] is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        shape.0,
                        shape.1
                    )));
                }
                if m.field() != field {
                    return Err(Error::InvalidField(format!("{name}[{k}] is over {}", m.field())));
                }
            }
        }
        Ok(AdhmDatum {
            field,
            c,
            r,
            d: len - 1,
            blocks,
        })
    }

    /// Datum with `A' = A` and `B' = B`, the only shape that can solve the equation on `P^n`.
    pub fn symmetric(
        field: Field,
        c: usize,
        r: usize,
        a: Vec<DenseMatrix>,
        b: Vec<DenseMatrix>,
        i: Vec<DenseMatrix>,
        j: Vec<DenseMatrix>,
    ) -> Result<Self> {
        let blocks = AdhmBlocks {
            a_prime: a.clone(),
            b_prime: b.clone(),
            a,
            b,
            i,
            j,
        };
        Self::new(field, c, r, blocks)
    }

    pub fn zero(field: Field, c: usize, r: usize, d: usize) -> Self {
        let sq = vec![DenseMatrix::zeros(field, c, c); d + 1];
        let blocks = AdhmBlocks {
            a: sq.clone(),
            b: sq.clone(),
            a_prime: sq.clone(),
            b_prime: sq,
            i: vec![DenseMatrix::zeros(field, c, r); d + 1],
            j: vec![DenseMatrix::zeros(field, r, c); d + 1],
        };
        AdhmDatum { field, c, r, d, blocks }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Ambient dimension `n = d + 2` of the matching projective space.
    pub fn n(&self) -> usize {
        self.d + 2
    }

    pub fn blocks(&self) -> &AdhmBlocks {
        &self.blocks
    }

    pub fn into_blocks(self) -> AdhmBlocks {
        self.blocks
    }

    pub fn a(&self) -> &[DenseMatrix] {
        &self.blocks.a
    }

    pub fn b(&self) -> &[DenseMatrix] {
        &self.blocks.b
    }

    pub fn a_prime(&self) -> &[DenseMatrix] {
        &self.blocks.a_prime
    }

    pub fn b_prime(&self) -> &[DenseMatrix] {
        &self.blocks.b_prime
    }

    pub fn i(&self) -> &[DenseMatrix] {
        &self.blocks.i
    }

    pub fn j(&self) -> &[DenseMatrix] {
        &self.blocks.j
    }

    /// Families in the order `A, B, A', B', I, J`.
    pub fn families(&self) -> [&[DenseMatrix]; 6] {
        [
            &self.blocks.a,
            &self.blocks.b,
            &self.blocks.a_prime,
            &self.blocks.b_prime,
            &self.blocks.i,
            &self.blocks.j,
        ]
    }

    /// Indices `k` with `A'_k != A_k` and with `B'_k != B_k`.
    pub fn prime_mismatches(&self) -> (Vec<usize>, Vec<usize>) {
        let a = (0..=self.d).filter(|&k| self.blocks.a[k] != self.blocks.a_prime[k]).collect();
        let b = (0..=self.d).filter(|&k| self.blocks.b[k] != self.blocks.b_prime[k]).collect();
        (a, b)
    }

    pub fn has_equal_primes(&self) -> bool {
        let (a, b) = self.prime_mismatches();
        a.is_empty() && b.is_empty()
    }

    pub fn to_field(&self, field: Field) -> Result<AdhmDatum> {
        let conv = |v: &[DenseMatrix]| v.iter().map(|m| m.to_field(field)).collect::<Result<Vec<_>>>();
        let blocks = AdhmBlocks {
            a: conv(&self.blocks.a)?,
            b: conv(&self.blocks.b)?,
            a_prime: conv(&self.blocks.a_prime)?,
            b_prime: conv(&self.blocks.b_prime)?,
            i: conv(&self.blocks.i)?,
            j: conv(&self.blocks.j)?,
        };
        AdhmDatum::new(field, self.c, self.r, blocks)
    }

    /// `Σ_k M_k ⊗ z_k` as a matrix of linear forms on `P^{d+2}`.
    pub fn linear_family(&self, family: &[DenseMatrix]) -> PolyMatrix {
        let n = self.n();
        let (rows, cols) = family[0].shape();
        let parts: Vec<(&DenseMatrix, HomogPoly)> = family
            .iter()
            .enumerate()
            .map(|(k, m)| (m, HomogPoly::z(self.field, n, k)))
            .collect();
        PolyMatrix::linear_combination(self.field, n, rows, cols, &parts)
    }

    pub(crate) fn check_variety(&self, y: &VarietySpec) -> Result<()> {
        if y.d() != self.d || y.field() != self.field {
            return Err(Error::Dimension(format!(
                "datum with d={} over {} against a variety in P^{} over {}",
                self.d,
                self.field,
                y.n(),
                y.field()
            )));
        }
        Ok(())
    }
}

/// The blocks of `X` evaluated at one representative of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDatum {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub a_prime: DenseMatrix,
    pub b_prime: DenseMatrix,
    pub i: DenseMatrix,
    pub j: DenseMatrix,
}

impl PointDatum {
    pub fn is_zero(&self) -> bool {
        [&self.a, &self.b, &self.a_prime, &self.b_prime, &self.i, &self.j]
            .iter()
            .all(|m| m.is_zero())
    }
}

/// `μ(X) = AB' − BA' + IJ + (B'−B)⊗x + (A−A')⊗y`, a `c×c` matrix of quadrics.
pub fn mu_residual(x: &AdhmDatum) -> PolyMatrix {
    let field = x.field;
    let n = x.n();
    let a = x.linear_family(x.a());
    let b = x.linear_family(x.b());
    let ap = x.linear_family(x.a_prime());
    let bp = x.linear_family(x.b_prime());
    let i = x.linear_family(x.i());
    let j = x.linear_family(x.j());
    let xv = HomogPoly::x(field, n);
    let yv = HomogPoly::y(field, n);
    let ab = a.mul(&bp);
    let ba = b.mul(&ap);
    let ij = i.mul(&j);
    let c = x.c;
    let mut out = PolyMatrix::zeros(field, n, c, c, 2);
    for r in 0..c {
        for s in 0..c {
            let e = ab
                .get(r, s)
                .sub(ba.get(r, s))
                .add(ij.get(r, s))
                .add(&bp.get(r, s).sub(b.get(r, s)).mul(&xv))
                .add(&a.get(r, s).sub(ap.get(r, s)).mul(&yv));
            out.set(r, s, e);
        }
    }
    out
}

/// Whether every residual entry lies in the degree-2 piece of the ideal of `Y`.
pub fn is_adhm_solution(x: &AdhmDatum, y: &VarietySpec) -> Result<bool> {
    x.check_variety(y)?;
    let mu = mu_residual(x);
    if mu.is_zero() {
        return Ok(true);
    }
    let piece = y.ideal_piece(2);
    Ok(mu.entries().iter().all(|e| piece.contains(e)))
}

/// One labeled matrix equation of the coordinate form of the equation on `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledResidual {
    pub label: String,
    /// `(k, m)` with `k <= m`: the coefficient of `z_k z_m`.
    pub indices: (usize, usize),
    pub matrix: DenseMatrix,
}

/// `[A_k, B_k] + I_k J_k` for each `k` and `[A_k, B_m] + [A_m, B_k] + I_k J_m + I_m J_k`
/// for `k < m`. These are exactly the `z_k z_m` coefficients of the residual.
pub fn pn_coordinate_equations(x: &AdhmDatum) -> Result<Vec<LabeledResidual>> {
    let (am, bm) = x.prime_mismatches();
    if !am.is_empty() || !bm.is_empty() {
        let mut parts = Vec::new();
        parts.extend(am.iter().map(|k| format!("A'_{k} != A_{k}")));
        parts.extend(bm.iter().map(|k| format!("B'_{k} != B_{k}")));
        return Err(Error::Precondition(parts.join(", ")));
    }
    let (a, b, i, j) = (x.a(), x.b(), x.i(), x.j());
    let mut out = Vec::new();
    for k in 0..=x.d {
        out.push(LabeledResidual {
            label: format!("[A{k},B{k}]+I{k}J{k}"),
            indices: (k, k),
            matrix: a[k].commutator(&b[k]).add(&i[k].mul(&j[k])),
        });
    }
    for k in 0..=x.d {
        for m in k + 1..=x.d {
            let mat = a[k]
                .commutator(&b[m])
                .add(&a[m].commutator(&b[k]))
                .add(&i[k].mul(&j[m]))
                .add(&i[m].mul(&j[k]));
            out.push(LabeledResidual {
                label: format!("[A{k},B{m}]+[A{m},B{k}]+I{k}J{m}+I{m}J{k}"),
                indices: (k, m),
                matrix: mat,
            });
        }
    }
    Ok(out)
}

/// Blocks at `P`, using its literal coordinates as the trivialization.
pub fn evaluate(x: &AdhmDatum, p: &PointOnY) -> PointDatum {
    evaluate_coords(x, p.coords())
}

pub fn evaluate_coords(x: &AdhmDatum, coords: &[FieldElement]) -> PointDatum {
    assert_eq!(coords.len(), x.n() + 1, "point has the wrong number of coordinates");
    let sum = |fam: &[DenseMatrix]| {
        let (r, c) = fam[0].shape();
        fam.iter()
            .zip(coords)
            .fold(DenseMatrix::zeros(x.field, r, c), |acc, (m, z)| {
                if z.is_zero() {
                    acc
                } else {
                    acc.add(&m.scale(z))
                }
            })
    };
    PointDatum {
        a: sum(x.a()),
        b: sum(x.b()),
        a_prime: sum(x.a_prime()),
        b_prime: sum(x.b_prime()),
        i: sum(x.i()),
        j: sum(x.j()),
    }
}

/// On `P^n` every solution has `A' = A` and `B' = B`; errors if `X` is not a solution.
pub fn on_pn_solutions_forces_prime_equality(x: &AdhmDatum) -> Result<bool> {
    let pn = VarietySpec::projective_space(x.field, x.n())?;
    if !is_adhm_solution(x, &pn)? {
        return Err(Error::Precondition("datum does not solve the equation on P^n".into()));
    }
    Ok(x.has_equal_primes())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomMode {
    /// Every block random, primes independent.
    Generic,
    /// `c = 1`: random scalars `A_k = A'_k`, `B_k = B'_k`, independent `I_k`, and `J`
    /// a random solution of the (then linear) equations on `P^n`.
    PnSolutionC1,
}

pub fn random_datum(field: Field, c: usize, r: usize, d: usize, mode: RandomMode, seed: u64) -> Result<AdhmDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_mat = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
        let entries = (0..rows * cols).map(|_| field.random(rng)).collect();
        DenseMatrix::new(field, rows, cols, entries).unwrap()
    };
    match mode {
        RandomMode::Generic => {
            let mut fam = |rows, cols| (0..=d).map(|_| rand_mat(rows, cols, &mut rng)).collect::<Vec<_>>();
            let blocks = AdhmBlocks {
                a: fam(c, c),
                b: fam(c, c),
                a_prime: fam(c, c),
                b_prime: fam(c, c),
                i: fam(c, r),
                j: fam(r, c),
            };
            AdhmDatum::new(field, c, r, blocks)
        }
        RandomMode::PnSolutionC1 => {
            if c != 1 {
                return Err(Error::Precondition(format!("pn_solution_c1 needs c = 1, got {c}")));
            }
            if r <= d {
                return Err(Error::Empty(format!(
                    "no c=1 solution with linearly independent I_k exists for r={r} <= d={d}"
                )));
            }
            let a: Vec<_> = (0..=d).map(|_| rand_mat(1, 1, &mut rng)).collect();
            let b: Vec<_> = (0..=d).map(|_| rand_mat(1, 1, &mut rng)).collect();
            let i = loop {
                let rows: Vec<DenseMatrix> = (0..=d).map(|_| rand_mat(1, r, &mut rng)).collect();
                let stacked = DenseMatrix::vstack(field, r, &rows.iter().collect::<Vec<_>>());
                if stacked.rank() == d + 1 {
                    break rows;
                }
            };
            let system = c1_j_system(&i, r);
            let kernel = system.kernel_basis();
            let mut jv = vec![field.zero(); (d + 1) * r];
            for v in &kernel {
                let t = field.random(&mut rng);
                for (acc, x) in jv.iter_mut().zip(v) {
                    *acc += &(&t * x);
                }
            }
            let j = (0..=d)
                .map(|k| DenseMatrix::new(field, r, 1, jv[k * r..(k + 1) * r].to_vec()).unwrap())
                .collect();
            AdhmDatum::symmetric(field, 1, r, a, b, i, j)
        }
    }
}

/// Linear system in the unknowns `J_k ∈ F^r` (stacked) for `c = 1`:
/// one row per pair `k <= m` encoding `I_k J_m + I_m J_k` (just `I_k J_k` when `k = m`).
pub fn c1_j_system(i: &[DenseMatrix], r: usize) -> DenseMatrix {
    let field = i[0].field();
    let d1 = i.len();
    let mut rows = Vec::new();
    for k in 0..d1 {
        for m in k..d1 {
            let mut row = vec![field.zero(); d1 * r];
            for t in 0..r {
                row[m * r + t] += i[k].get(0, t);
                if m != k {
                    row[k * r + t] += i[m].get(0, t);
                }
            }
            rows.push(row);
        }
    }
    DenseMatrix::from_rows(field, d1 * r, rows).unwrap()
}
