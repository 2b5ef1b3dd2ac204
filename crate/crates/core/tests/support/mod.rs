//! Reference implementations used only by tests. They avoid the library's
//! subspace and graded-map code paths on purpose.
#![allow(dead_code)]

use std::collections::BTreeSet;

use adhm_core::adhm::{random_datum, AdhmDatum, RandomMode};
use adhm_core::monad::MonadRep;
use adhm_core::symmetry::{act, GroupElement};
use adhm_core::{DenseMatrix, Field, FieldElement, PolyMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A subspace of `F_p^c` as the sorted set of all its vectors.
pub type VectorSet = BTreeSet<Vec<u64>>;

fn all_vectors(p: u64, c: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..c {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

fn span_set(p: u64, c: usize, gens: &[Vec<u64>]) -> VectorSet {
    let mut set: VectorSet = BTreeSet::new();
    set.insert(vec![0; c]);
    for g in gens {
        let current: Vec<Vec<u64>> = set.iter().cloned().collect();
        for v in current {
            for t in 1..p {
                let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + t * b) % p).collect();
                set.insert(w);
            }
        }
    }
    set
}

/// Every subspace of `F_p^c`, by brute force over generating triples.
pub fn all_subspaces(p: u64, c: usize) -> Vec<VectorSet> {
    let vecs = all_vectors(p, c);
    let mut seen: BTreeSet<VectorSet> = BTreeSet::new();
    let mut stack: Vec<Vec<Vec<u64>>> = vec![vec![]];
    while let Some(gens) = stack.pop() {
        let s = span_set(p, c, &gens);
        if !seen.insert(s) || gens.len() == c {
            continue;
        }
        for v in &vecs {
            let mut g = gens.clone();
            g.push(v.clone());
            stack.push(g);
        }
    }
    seen.into_iter().collect()
}

/// Dimension of a subspace given as a vector set.
pub fn set_dim(p: u64, s: &VectorSet) -> usize {
    let mut n = s.len() as u64;
    let mut d = 0;
    while n > 1 {
        n /= p;
        d += 1;
    }
    d
}

pub fn residues(m: &DenseMatrix) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.as_residue().unwrap()).collect())
        .collect()
}

fn apply(p: u64, m: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b % p).sum::<u64>() % p)
        .collect()
}

fn columns(m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn invariant(p: u64, s: &VectorSet, m: &[Vec<u64>]) -> bool {
    s.iter().all(|v| s.contains(&apply(p, m, v)))
}

/// No proper subspace contains every `im I_k` and is invariant under all `A_k`, `B_k`.
pub fn brute_stable(x: &AdhmDatum, subspaces: &[VectorSet]) -> bool {
    let p = x.field().characteristic();
    let c = x.c();
    let ops: Vec<Vec<Vec<u64>>> = x.a().iter().chain(x.b()).map(residues).collect();
    let icols: Vec<Vec<u64>> = x.i().iter().flat_map(|m| columns(&residues(m))).collect();
    !subspaces.iter().any(|s| {
        set_dim(p, s) < c && icols.iter().all(|v| s.contains(v)) && ops.iter().all(|m| invariant(p, s, m))
    })
}

/// No nonzero subspace inside every `ker J_k` is invariant under all `A'_k`, `B'_k`.
pub fn brute_costable(x: &AdhmDatum, subspaces: &[VectorSet]) -> bool {
    let p = x.field().characteristic();
    let ops: Vec<Vec<Vec<u64>>> = x.a_prime().iter().chain(x.b_prime()).map(residues).collect();
    let js: Vec<Vec<Vec<u64>>> = x.j().iter().map(residues).collect();
    !subspaces.iter().any(|s| {
        set_dim(p, s) > 0
            && s.iter().all(|v| js.iter().all(|j| apply(p, j, v).iter().all(|&e| e == 0)))
            && ops.iter().all(|m| invariant(p, s, m))
    })
}

/// Some hyperplane contains `im I_P` and is invariant under `A_P`, `B_P`.
pub fn brute_has_invariant_hyperplane(p: u64, a: &DenseMatrix, b: &DenseMatrix, i: &DenseMatrix, subspaces: &[VectorSet]) -> bool {
    let c = a.rows();
    let (a, b) = (residues(a), residues(b));
    let icols = columns(&residues(i));
    subspaces.iter().any(|s| {
        set_dim(p, s) + 1 == c && icols.iter().all(|v| s.contains(v)) && invariant(p, s, &a) && invariant(p, s, &b)
    })
}

/// Some hyperplane contains the images of `A_P + x`, `B_P + y` and `I_P`, i.e. a covector
/// kills all three blocks of `β_P` at the point with these `x`, `y`.
pub fn brute_beta_drops_rank(
    p: u64,
    a: &DenseMatrix,
    b: &DenseMatrix,
    i: &DenseMatrix,
    x: u64,
    y: u64,
    subspaces: &[VectorSet],
) -> bool {
    let c = a.rows();
    let shift = |m: &DenseMatrix, t: u64| {
        let mut r = residues(m);
        for (k, row) in r.iter_mut().enumerate() {
            row[k] = (row[k] + t) % p;
        }
        r
    };
    let mut cols = columns(&shift(a, x));
    cols.extend(columns(&shift(b, y)));
    cols.extend(columns(&residues(i)));
    subspaces
        .iter()
        .any(|s| set_dim(p, s) + 1 == c && cols.iter().all(|v| s.contains(v)))
}

/// Exponent vectors of length `nvars` with entries `>= lower` summing to `total`.
fn exponents(nvars: usize, total: i64, lower: i64) -> Vec<Vec<i64>> {
    fn rec(nvars: usize, total: i64, lower: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if nvars == 1 {
            if total >= lower {
                prefix.push(total);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let mut e = lower;
        while total - e >= lower * (nvars as i64 - 1) {
            prefix.push(e);
            rec(nvars - 1, total - e, lower, prefix, out);
            prefix.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, total, lower, &mut Vec::new(), &mut out);
    }
    out
}

fn linear_coeffs(phi: &PolyMatrix, s: usize, t: usize) -> Vec<FieldElement> {
    let nv = phi.n() + 1;
    let e = phi.get(s, t);
    (0..nv)
        .map(|j| {
            let mut mono = vec![0u32; nv];
            mono[j] = 1;
            e.coefficient(&mono)
        })
        .collect()
}

/// `cols ⊗ H^0(O(m)) → rows ⊗ H^0(O(m+1))` by explicit monomial multiplication.
pub fn direct_h0_map(phi: &PolyMatrix, m: i64) -> DenseMatrix {
    graded_map(phi, exponents(phi.n() + 1, m, 0), exponents(phi.n() + 1, m + 1, 0), |e, j| {
        let mut f = e.to_vec();
        f[j] += 1;
        Some(f)
    })
}

/// `cols ⊗ H^n(O(m)) → rows ⊗ H^n(O(m+1))` on Čech classes `x^{-a}`, `a_i >= 1`, `Σa = -m`.
pub fn cech_hn_map(phi: &PolyMatrix, m: i64) -> DenseMatrix {
    graded_map(phi, exponents(phi.n() + 1, -m, 1), exponents(phi.n() + 1, -m - 1, 1), |a, j| {
        // x_j · x^{-a} = x^{-(a - e_j)}, which is zero in H^n once an exponent reaches 0.
        let mut f = a.to_vec();
        f[j] -= 1;
        (f[j] >= 1).then_some(f)
    })
}

fn graded_map(
    phi: &PolyMatrix,
    source: Vec<Vec<i64>>,
    target: Vec<Vec<i64>>,
    step: impl Fn(&[i64], usize) -> Option<Vec<i64>>,
) -> DenseMatrix {
    let field = phi.field();
    let (sd, td) = (source.len(), target.len());
    let mut m = DenseMatrix::zeros(field, phi.rows() * td, phi.cols() * sd);
    for t in 0..phi.cols() {
        for s in 0..phi.rows() {
            let coeffs = linear_coeffs(phi, s, t);
            for (si, e) in source.iter().enumerate() {
                for (j, cj) in coeffs.iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    if let Some(f) = step(e, j) {
                        let ti = target.iter().position(|g| *g == f).unwrap();
                        let (row, col) = (s * td + ti, t * sd + si);
                        let v = m.get(row, col) + cj;
                        m.set(row, col, v);
                    }
                }
            }
        }
    }
    m
}

fn dim_h0(n: usize, m: i64) -> usize {
    exponents(n + 1, m, 0).len()
}

fn dim_hn(n: usize, m: i64) -> usize {
    exponents(n + 1, -m, 1).len()
}

/// `h^q(E(k))` for `q = 0..=n`, `E = ker β / im α`, via the two short exact sequences
/// `0 → K → (V⊕V⊕W)⊗O → V⊗O(1) → 0` and `0 → V⊗O(−1) → K → E → 0`.
/// Valid when `α` is injective and `β` surjective as sheaf maps.
pub fn les_cohomology(m: &MonadRep, k: i64) -> Vec<usize> {
    let n = m.n();
    let c = m.c();
    let mid = m.middle_rank();
    let b0 = direct_h0_map(m.beta(), k);
    let a0 = direct_h0_map(m.alpha(), k - 1);
    let bn = cech_hn_map(m.beta(), k);
    let an = cech_hn_map(m.alpha(), k - 1);
    let rank = |x: &DenseMatrix| if x.rows() == 0 || x.cols() == 0 { 0 } else { x.rank() };

    let h0_k = mid * dim_h0(n, k) - rank(&b0);
    let h1_k = c * dim_h0(n, k + 1) - rank(&b0);
    let hn_k = mid * dim_hn(n, k) - rank(&bn);
    let hn_v = c * dim_hn(n, k - 1);

    let mut h = vec![0usize; n + 1];
    h[0] = h0_k - rank(&a0);
    // H^q(K) = 0 for 2 <= q <= n-1, and H^q(V(k-1)) = 0 for 1 <= q <= n-1.
    h[1] = h1_k;
    h[n - 1] += hn_v - rank(&an);
    h[n] = hn_k - rank(&an);
    h
}

pub fn field_f3() -> Field {
    Field::prime(3).unwrap()
}

/// Sparse-ish random datum over `F_3`, so that invariant subspaces actually occur.
pub fn sparse_datum(field: Field, c: usize, r: usize, d: usize, seed: u64) -> AdhmDatum {
    let mut x = random_datum(field, c, r, d, RandomMode::Generic, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
    let mut b = x.clone().into_blocks();
    for fam in [&mut b.a, &mut b.b, &mut b.a_prime, &mut b.b_prime, &mut b.i, &mut b.j] {
        for m in fam.iter_mut() {
            if rng.gen_bool(0.4) {
                *m = DenseMatrix::zeros(field, m.rows(), m.cols());
            }
        }
    }
    x = AdhmDatum::new(field, c, r, b).unwrap();
    x
}

/// Commuting diagonal `A`, `B` with distinct eigenpairs and `J = 0`: ideal sheaves of
/// points on `P^2`, conjugated to hide the structure.
pub fn point_data(field: Field, c: usize, r: usize, seed: u64) -> AdhmDatum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pairs: Vec<(i64, i64)> = (0..c).map(|_| (rng.gen_range(-5..=5), rng.gen_range(-5..=5))).collect();
        let distinct = (0..c).all(|i| (0..i).all(|j| pairs[i] != pairs[j]));
        let i_rows: Vec<Vec<i64>> = (0..c).map(|_| (0..r).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        if !distinct || i_rows.iter().any(|row| row.iter().all(|&e| e == 0)) {
            continue;
        }
        let diag = |k: usize| {
            let rows: Vec<Vec<i64>> = (0..c)
                .map(|i| (0..c).map(|j| if i == j { if k == 0 { pairs[i].0 } else { pairs[i].1 } } else { 0 }).collect())
                .collect();
            DenseMatrix::from_i64(field, &rows)
        };
        let x = AdhmDatum::symmetric(
            field,
            c,
            r,
            vec![diag(0)],
            vec![diag(1)],
            vec![DenseMatrix::from_i64(field, &i_rows)],
            vec![DenseMatrix::zeros(field, r, c)],
        )
        .unwrap();
        let g = GroupElement::random(field, c, Some(r), seed ^ 77);
        return act(&g, &x).unwrap();
    }
}
