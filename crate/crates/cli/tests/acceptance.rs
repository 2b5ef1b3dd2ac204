//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when a criterion
//! outside `KNOWN_FAILURES` fails, or when a known failure starts passing.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::time::Instant;

use adhm_core::adhm::{
    evaluate_coords, is_adhm_solution, mu_residual, random_datum, AdhmBlocks, AdhmDatum, RandomMode,
};
use adhm_core::cohomology::{hypercohomology_column, hypercohomology_dims, hypercohomology_table, instanton_vanishing_table};
use adhm_core::config::RunConfig;
use adhm_core::monad::{build_monad, datum_fiber_maps, degeneration_info, fiber_cohomology_dim, verify_complex, LocusEstimate};
use adhm_core::poly::{parse_poly, x_index, y_index};
use adhm_core::stability::{full_report, is_costable, is_stable, sampled_t_and_l, stabilizing_subspace_at_point, SubspaceBasis};
use adhm_core::symmetry::{act, moduli_dimension_certificate, stabilizer_dimension, GroupElement};
use adhm_core::variety::{PointOnY, VarietySpec};
use adhm_core::{DenseMatrix, Field, FieldElement, PolyMatrix};
use adhm_lab::{corpus, json};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use support::*;

/// The c = 3 listing disagrees with a hand computation on the stratum p0 p1 != 0.
const KNOWN_FAILURES: &[usize] = &[3];

const Q: Field = Field::Rational;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn same_subspace(a: &SubspaceBasis, b: &SubspaceBasis) -> bool {
    a.contains(b) && b.contains(a)
}

fn span(field: Field, c: usize, rows: &[Vec<i64>]) -> SubspaceBasis {
    SubspaceBasis::span(field, c, rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()))
}

fn p_n(field: Field, n: usize) -> VarietySpec {
    VarietySpec::projective_space(field, n).unwrap()
}

fn scroll(field: Field) -> VarietySpec {
    VarietySpec::new(field, 3, vec![parse_poly(field, 3, "z0*y - z1*x").unwrap()]).unwrap()
}

fn record(name: &str) -> (VarietySpec, AdhmDatum) {
    let rec = corpus::load(name).unwrap();
    (rec.variety(Q).unwrap(), rec.datum(Q).unwrap())
}

/// `q·C` entrywise.
fn times(q: &adhm_core::HomogPoly, c: &DenseMatrix) -> Vec<adhm_core::HomogPoly> {
    c.entries().iter().map(|e| q.scale(e)).collect()
}

fn residual_is(res: &PolyMatrix, expected: &[adhm_core::HomogPoly]) -> bool {
    res.entries().len() == expected.len() && res.entries().iter().zip(expected).all(|(a, b)| a.sub(b).is_zero())
}

fn criterion_1() -> Outcome {
    let (y, x) = record("scroll");
    let q = parse_poly(Q, 3, "z0*y - z1*x").unwrap();
    let residual = residual_is(&mu_residual(&x), &times(&q, &DenseMatrix::identity(Q, 1)));
    let on_s = is_adhm_solution(&x, &y).unwrap();
    let on_p3 = is_adhm_solution(&x, &p_n(Q, 3)).unwrap();
    let config = RunConfig::default();
    let info = degeneration_info(&x, &y, config.degree_bound, 40, 1).unwrap();
    let codim = match info.locus {
        LocusEstimate::Dimension { codim, .. } => Some(codim),
        LocusEstimate::Empty { .. } => None,
    };
    let on_line = info
        .witnesses
        .iter()
        .all(|p| p.coords()[x_index(3)].is_zero() && p.coords()[y_index(3)].is_zero());
    let passed = residual && on_s && !on_p3 && codim == Some(1) && !info.witnesses.is_empty() && on_line;
    outcome(
        passed,
        format!(
            "residual = (z0*y - z1*x)C: {residual}; solution on S: {on_s}; on P^3: {on_p3}; codim {codim:?}; {} witnesses, all on x = y = 0: {on_line}",
            info.witnesses.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    let (y, x) = record("quadric");
    let q = parse_poly(Q, 4, "z0*y + z1*x + z2^2").unwrap();
    let c = x.i()[2].mul(&x.j()[2]);
    let residual = residual_is(&mu_residual(&x), &times(&q, &c));
    let on_q = is_adhm_solution(&x, &y).unwrap();
    outcome(residual && on_q, format!("residual = q*I'J': {residual}; solution on Q: {on_q}"))
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;

    // c = 2 on z0*z1 = 0.
    let (y2, x2) = record("c2_reducible");
    let n2 = span(Q, 2, &[vec![1, 1]]);
    let zero2 = SubspaceBasis::zero(Q, 2);
    for (a, b) in [(1, 3), (2, -1), (-3, 5)] {
        for (coords, expected, stratum) in [
            ([1, 0, a, b], &n2, "c=2, p1 = 0"),
            ([0, 1, a, b], &zero2, "c=2, p0 = 0"),
        ] {
            let p = PointOnY::from_i64(&y2, &coords).unwrap();
            checked += 1;
            if !same_subspace(&stabilizing_subspace_at_point(&x2, &p), expected) {
                bad.push(format!("{stratum} at {coords:?}"));
            }
        }
    }

    // c = 3 on P^3, against the listed subspaces.
    let (y3, x3) = record("c3_p3");
    let n3 = span(Q, 3, &[vec![1, 1, 0], vec![0, 0, 1]]);
    let e3 = span(Q, 3, &[vec![0, 0, 1]]);
    let d3 = span(Q, 3, &[vec![1, 1, 0]]);
    let mut generic_observed = Vec::new();
    for (p0, p1, a, b) in [(1, 1, 7, 1), (2, -3, 0, 5), (1, 4, -2, 3), (5, 2, 1, 1)] {
        for (coords, expected, stratum) in [
            ([p0, p1, a, b], &n3, "c=3, p0 p1 != 0"),
            ([0, p1, a, b], &e3, "c=3, p0 = 0"),
            ([p0, 0, a, b], &d3, "c=3, p1 = 0"),
        ] {
            let p = PointOnY::from_i64(&y3, &coords).unwrap();
            let s = stabilizing_subspace_at_point(&x3, &p);
            checked += 1;
            if !same_subspace(&s, expected) {
                bad.push(format!("{stratum} at {coords:?} (dim {})", s.dim()));
            }
            if stratum == "c=3, p0 p1 != 0" && generic_observed.is_empty() {
                generic_observed = s
                    .vectors()
                    .iter()
                    .map(|v| format!("({})", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
                    .collect();
            }
        }
    }

    // T_Y = N strictly inside S_Y = V.
    let mut t_ok = true;
    for (x, y, n, c) in [(&x2, &y2, &n2, 2usize), (&x3, &y3, &n3, 3)] {
        let points = y.sample_points(12, 5).unwrap();
        let (t, _) = sampled_t_and_l(x, &points);
        let s = adhm_core::stability::stabilizing_subspace_global(x);
        t_ok &= same_subspace(&t, n) && s.is_full() && t.dim() < c;
    }

    let passed = bad.is_empty() && t_ok;
    let mut detail = format!("{} of {checked} point subspaces differ from the listing", bad.len());
    if !bad.is_empty() {
        detail += &format!(
            " (first: {}; observed span {} there)",
            bad[0],
            generic_observed.join(", ")
        );
    }
    detail += &format!("; sampled T_Y = N strictly inside S_Y = V: {t_ok}");
    outcome(passed, detail)
}

fn perturb(x: &AdhmDatum, seed: u64) -> AdhmDatum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = x.field();
    let mut b = x.clone().into_blocks();
    let fams = [&mut b.a, &mut b.b, &mut b.a_prime, &mut b.b_prime, &mut b.i, &mut b.j];
    let fam = fams.into_iter().nth(rng.gen_range(0..6)).unwrap();
    let k = rng.gen_range(0..fam.len());
    let m = &mut fam[k];
    let (i, j) = (rng.gen_range(0..m.rows()), rng.gen_range(0..m.cols()));
    let v = m.get(i, j) + &field.one();
    m.set(i, j, v);
    AdhmDatum::new(field, x.c(), x.r(), b).unwrap()
}

/// Point data padded with zero blocks up to `d`.
fn padded_point_data(field: Field, c: usize, r: usize, d: usize, seed: u64) -> AdhmDatum {
    let x = point_data(field, c, r, seed);
    let mut b = x.into_blocks();
    for fam in [&mut b.a, &mut b.b, &mut b.a_prime, &mut b.b_prime, &mut b.i, &mut b.j] {
        let (rows, cols) = fam[0].shape();
        fam.resize(d + 1, DenseMatrix::zeros(field, rows, cols));
    }
    AdhmDatum::new(field, c, r, b).unwrap()
}

/// `A = (a, 0)`, `B = (0, a)` scalar, primes zero, random `I`, `J = 0`, conjugated:
/// the residual is `a(z0*y - z1*x)` times the identity.
fn scroll_solution(field: Field, c: usize, r: usize, seed: u64) -> AdhmDatum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DenseMatrix::identity(field, c).scale(&field.random_nonzero(&mut rng));
    let zc = DenseMatrix::zeros(field, c, c);
    let i = (0..2)
        .map(|_| DenseMatrix::new(field, c, r, (0..c * r).map(|_| field.random(&mut rng)).collect()).unwrap())
        .collect();
    let blocks = AdhmBlocks {
        a: vec![a.clone(), zc.clone()],
        b: vec![zc.clone(), a],
        a_prime: vec![zc.clone(), zc.clone()],
        b_prime: vec![zc.clone(), zc],
        i,
        j: vec![DenseMatrix::zeros(field, r, c); 2],
    };
    let x = AdhmDatum::new(field, c, r, blocks).unwrap();
    act(&GroupElement::random(field, c, Some(r), seed ^ 5), &x).unwrap()
}

fn criterion_4() -> Outcome {
    let grid: Vec<(usize, usize, usize)> = (1..=3)
        .flat_map(|c| (1..=2).flat_map(move |r| (0..=1).map(move |d| (c, r, d))))
        .collect();
    let results: Vec<(usize, usize, Vec<String>)> = grid
        .par_iter()
        .map(|&(c, r, d)| {
            let pn = p_n(Q, d + 2);
            let s = scroll(Q);
            let (mut checks, mut solutions, mut mismatches) = (0, 0, Vec::new());
            for seed in 0..200u64 {
                let base = 1000 * (c * 100 + r * 10 + d) as u64 + seed;
                let solution = || {
                    if c == 1 && r > d && seed % 2 == 0 {
                        random_datum(Q, c, r, d, RandomMode::PnSolutionC1, base).unwrap()
                    } else {
                        padded_point_data(Q, c, r, d, base)
                    }
                };
                let x = match seed % 4 {
                    1 => solution(),
                    2 => perturb(&solution(), base),
                    3 if d == 1 => scroll_solution(Q, c, r, base),
                    _ => random_datum(Q, c, r, d, RandomMode::Generic, base).unwrap(),
                };
                let mut ys = vec![&pn];
                if d == 1 {
                    ys.push(&s);
                }
                for y in ys {
                    let m = build_monad(&x);
                    let complex = verify_complex(&m, y).unwrap();
                    let sol = is_adhm_solution(&x, y).unwrap();
                    checks += 1;
                    solutions += sol as usize;
                    if complex != sol {
                        mismatches.push(format!("c={c} r={r} d={d} seed={seed} on n={}", y.n()));
                    }
                }
            }
            (checks, solutions, mismatches)
        })
        .collect();
    let checks: usize = results.iter().map(|r| r.0).sum();
    let solutions: usize = results.iter().map(|r| r.1).sum();
    let mismatches: Vec<&String> = results.iter().flat_map(|r| &r.2).collect();
    let balanced = results.iter().all(|r| r.1 > 0 && r.1 < r.0);
    outcome(
        mismatches.is_empty() && balanced,
        format!(
            "{checks} (datum, Y) pairs over {} grid points x 200 data, {solutions} solutions, {} mismatches{}; both outcomes at every grid point: {balanced}",
            grid.len(),
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

fn criterion_5() -> Outcome {
    let f3 = field_f3();
    let mut cases = 0;
    let mut mismatches = Vec::new();
    let mut classes = [0usize; 4];
    for c in 1..=3 {
        let subspaces = all_subspaces(3, c);
        for seed in 0..40u64 {
            let (r, d) = (1 + seed as usize % 2, (seed as usize / 2) % 2);
            let x = sparse_datum(f3, c, r, d, 5000 + 100 * c as u64 + seed);
            let (s, cs) = (is_stable(&x), is_costable(&x));
            cases += 1;
            classes[2 * s as usize + cs as usize] += 1;
            if s != brute_stable(&x, &subspaces) || cs != brute_costable(&x, &subspaces) {
                mismatches.push(format!("c={c} seed={seed}"));
            }
        }
    }
    outcome(
        mismatches.is_empty() && cases >= 100,
        format!(
            "{cases} data over F_3, c <= 3; (unstable/stable) x (uncostable/costable) counts {classes:?}; {} mismatches",
            mismatches.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let f3 = field_f3();
    let p3 = p_n(f3, 3);
    let points = p3.enumerate_points().unwrap();
    let (mut pointwise, mut fibers, mut drops) = (0, 0, 0);
    let mut mismatches = Vec::new();
    for c in 1..=3 {
        let subspaces = all_subspaces(3, c);
        for seed in 0..25u64 {
            let x = sparse_datum(f3, c, 1 + seed as usize % 2, 1, 7000 + 100 * c as u64 + seed);
            for p in &points {
                let coords = p.coords();
                let full = datum_fiber_maps(&x, coords).1.rank() == c;
                let pd = evaluate_coords(&x, coords);
                let x_res = coords[x_index(3)].as_residue().unwrap();
                let y_res = coords[y_index(3)].as_residue().unwrap();
                let brute = brute_beta_drops_rank(3, &pd.a, &pd.b, &pd.i, x_res, y_res, &subspaces);
                pointwise += 1;
                drops += !full as usize;
                if full == brute {
                    mismatches.push(format!("pointwise c={c} seed={seed} P={coords:?}"));
                }
            }
            // Over each z-part: beta_P onto for every (x, y) iff no invariant hyperplane contains im I_P.
            for p in points.iter().filter(|p| p.coords()[x_index(3)].is_zero() && p.coords()[y_index(3)].is_zero()) {
                let elems = f3.elements().unwrap();
                let z = &p.coords()[..2];
                let all_full = elems.iter().all(|a| {
                    elems.iter().all(|b| {
                        let coords: Vec<FieldElement> = z.iter().cloned().chain([a.clone(), b.clone()]).collect();
                        datum_fiber_maps(&x, &coords).1.rank() == c
                    })
                });
                let pd = evaluate_coords(&x, p.coords());
                let has = brute_has_invariant_hyperplane(3, &pd.a, &pd.b, &pd.i, &subspaces);
                fibers += 1;
                if all_full == has {
                    mismatches.push(format!("fiber c={c} seed={seed} z={z:?}"));
                }
            }
        }
    }
    outcome(
        mismatches.is_empty() && drops > 0,
        format!(
            "{pointwise} points of P^3(F_3) ({drops} rank drops) and {fibers} z-fibers over 75 data; {} mismatches{}",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let mut stable_corpus = 0;
    for rec in corpus::load_all().unwrap() {
        let x = rec.datum(Q).unwrap();
        if is_stable(&x) {
            stable_corpus += 1;
            let dim = stabilizer_dimension(&x).dimension;
            if dim != 0 {
                bad.push(format!("{} has stabilizer dim {dim}", rec.name));
            }
        }
    }
    let mut random = 0;
    for seed in 0..50u64 {
        let (d, r) = ((seed % 3) as usize, 1 + (seed % 3) as usize + (seed % 2) as usize);
        let x = random_datum(Q, 1, r, d, RandomMode::PnSolutionC1, 300 + seed).unwrap();
        if !is_stable(&x) {
            bad.push(format!("random seed {seed} is not stable"));
            continue;
        }
        random += 1;
        let dim = stabilizer_dimension(&x).dimension;
        if dim != 0 {
            bad.push(format!("random seed {seed} has stabilizer dim {dim}"));
        }
    }
    outcome(
        bad.is_empty() && random == 50,
        format!(
            "{stable_corpus} stable corpus data and {random} random stable c=1 data; {} with nonzero stabilizer{}",
            bad.len(),
            bad.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

/// `I_k J_m + I_m J_k` for `k < m` and `I_k J_k`, from plain vectors.
fn c1_equations(i: &[Vec<FieldElement>], j: &[Vec<FieldElement>], field: Field) -> Vec<FieldElement> {
    let dot = |u: &[FieldElement], v: &[FieldElement]| {
        u.iter().zip(v).fold(field.zero(), |acc, (a, b)| &acc + &(a * b))
    };
    let d1 = i.len();
    let mut out = Vec::new();
    for k in 0..d1 {
        for m in k..d1 {
            if k == m {
                out.push(dot(&i[k], &j[k]));
            } else {
                out.push(&dot(&i[k], &j[m]) + &dot(&i[m], &j[k]));
            }
        }
    }
    out
}

/// Jacobian of the c = 1 equations in the unknowns `(I, J)`, by polarization of the
/// quadratic map: `q(x + e) - q(x) - q(e)`.
fn independent_jacobian(x: &AdhmDatum) -> DenseMatrix {
    let field = x.field();
    let r = x.r();
    let i: Vec<Vec<FieldElement>> = x.i().iter().map(|m| m.row(0).to_vec()).collect();
    let j: Vec<Vec<FieldElement>> = x.j().iter().map(|m| m.column(0)).collect();
    let d1 = i.len();
    let base = c1_equations(&i, &j, field);
    let zero = vec![vec![field.zero(); r]; d1];
    let mut columns = Vec::new();
    for which in 0..2 {
        for k in 0..d1 {
            for t in 0..r {
                let mut e = zero.clone();
                e[k][t] = field.one();
                let (ie, je) = if which == 0 { (e.clone(), zero.clone()) } else { (zero.clone(), e.clone()) };
                let add = |a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]| -> Vec<Vec<FieldElement>> {
                    a.iter().zip(b).map(|(u, v)| u.iter().zip(v).map(|(p, q)| p + q).collect()).collect()
                };
                let shifted = c1_equations(&add(&i, &ie), &add(&j, &je), field);
                let pure = c1_equations(&ie, &je, field);
                columns.push(
                    shifted
                        .iter()
                        .zip(&base)
                        .zip(&pure)
                        .map(|((s, b), p)| &(s - b) - p)
                        .collect::<Vec<_>>(),
                );
            }
        }
    }
    DenseMatrix::from_columns(field, base.len(), &columns).unwrap()
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (d, r) in [(0usize, 1usize), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)] {
        let cert = moduli_dimension_certificate(Q, r, d, 20, 11).unwrap();
        let equations = (d + 1) * (d + 2) / 2;
        let mut full = 0;
        let mut agree = true;
        for t in &cert.trials {
            let x = random_datum(Q, 1, r, d, RandomMode::PnSolutionC1, t.seed).unwrap();
            let rank = independent_jacobian(&x).rank();
            agree &= rank == t.rank;
            full += (rank == equations) as usize;
        }
        // A_k, B_k scalars plus I_k, J_k, minus the equations and the scalar group.
        let expected = (2 * (d + 1) + 2 * (d + 1) * r) as i64 - equations as i64 - 1;
        let formula = 2 * (d as i64 + 1) * r as i64 - (d as i64) * (d as i64 - 1) / 2;
        let good = !cert.empty && full >= 19 && agree && cert.dimension == Some(expected) && expected == formula;
        ok &= good;
        notes.push(format!("(d={d},r={r}) {full}/20 dim {expected}"));
    }
    for (d, r) in [(1usize, 1usize), (2, 1), (2, 2), (3, 3)] {
        let cert = moduli_dimension_certificate(Q, r, d, 5, 11).unwrap();
        ok &= cert.empty && cert.dimension.is_none();
        notes.push(format!("(d={d},r={r}) empty: {}", cert.empty));
    }
    outcome(ok, notes.join("; "))
}

/// `χ(O(m))` on `P^n` as the polynomial `(m+1)..(m+n)/n!`.
fn chi_line(n: usize, m: i64) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for t in 1..=n as i128 {
        num *= m as i128 + t;
        den *= t;
    }
    num / den
}

fn random_pn_solutions() -> Vec<(usize, AdhmDatum)> {
    let mut out = Vec::new();
    let mut seed = 900u64;
    for n in 2..=5usize {
        let d = n - 2;
        for t in 0..25usize {
            seed += 1;
            let x = if n == 2 && t % 2 == 0 {
                point_data(Q, 1 + t % 3, 1 + t % 2, seed)
            } else {
                let r = (d + 1 + t % 2).min(4);
                random_datum(Q, 1, r, d, RandomMode::PnSolutionC1, seed).unwrap()
            };
            out.push((n, x));
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let mut data: Vec<(String, AdhmDatum)> = Vec::new();
    for rec in corpus::load_all().unwrap() {
        let y = rec.variety(Q).unwrap();
        let x = rec.datum(Q).unwrap();
        if y.is_projective_space() && is_adhm_solution(&x, &y).unwrap() {
            data.push((rec.name.clone(), x));
        }
    }
    let corpus_count = data.len();
    data.extend(random_pn_solutions().into_iter().enumerate().map(|(k, (n, x))| (format!("random #{k} on P^{n}"), x)));
    let failures: Vec<String> = data
        .par_iter()
        .filter_map(|(name, x)| {
            let m = build_monad(x);
            let n = x.n();
            let col = hypercohomology_column(&m, -1).ok()?;
            let mut why = Vec::new();
            if col.get(1) != x.c() {
                why.push(format!("H^1(C(-1)) = {}", col.get(1)));
            }
            if col.get(0) != 0 {
                why.push(format!("H^0(C(-1)) = {}", col.get(0)));
            }
            let table = hypercohomology_table(&m, -3, 3).unwrap();
            for c in &table.columns {
                let (cc, a) = (x.c() as i128, (2 * x.c() + x.r()) as i128);
                let expected = -cc * chi_line(n, c.k - 1) + a * chi_line(n, c.k) - cc * chi_line(n, c.k + 1);
                if c.euler() != expected {
                    why.push(format!("Euler at k={}", c.k));
                }
            }
            for v in instanton_vanishing_table(&m, -3, 3).unwrap() {
                if !v.passes() {
                    why.push(format!("vanishing {}", v.label));
                }
            }
            (!why.is_empty()).then(|| format!("{name}: {}", why.join(", ")))
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "{corpus_count} corpus + 100 random solutions on P^2..P^5, columns k in [-3, 3]; {} failures{}",
            failures.len(),
            failures.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

fn criterion_10() -> Outcome {
    let one = |v: i64| DenseMatrix::from_i64(Q, &[vec![v]]);
    let x = AdhmDatum::symmetric(Q, 1, 1, vec![one(0)], vec![one(0)], vec![one(1)], vec![one(0)]).unwrap();
    let m = build_monad(&x);
    let h0 = hypercohomology_dims(&m, 0).unwrap();
    let h1 = hypercohomology_dims(&m, 1).unwrap();
    let (l0, l1) = (les_cohomology(&m, 0), les_cohomology(&m, 1));
    let passed = h0 == vec![0, 0, 0] && h1[0] == 2 && h0 == l0 && h1 == l1;
    outcome(
        passed,
        format!("H(C(0)) = {h0:?} (oracle {l0:?}); H(C(1)) = {h1:?} (oracle {l1:?})"),
    )
}

fn criterion_11() -> Outcome {
    let config = RunConfig {
        samples: 10,
        ..RunConfig::default()
    };
    let failures: Vec<String> = (0..50u64)
        .into_par_iter()
        .filter_map(|seed| {
            let x = match seed % 5 {
                0 => point_data(Q, 2, 1, 40 + seed),
                1 => random_datum(Q, 1, 2, 1, RandomMode::PnSolutionC1, 40 + seed).unwrap(),
                2 => random_datum(Q, 2, 1, 0, RandomMode::Generic, 40 + seed).unwrap(),
                3 => point_data(Q, 3, 2, 40 + seed),
                _ => random_datum(Q, 1, 2, 1, RandomMode::Generic, 40 + seed).unwrap(),
            };
            let g = GroupElement::random(Q, x.c(), Some(x.r()), 4000 + seed);
            let gx = act(&g, &x).unwrap();
            let y = p_n(Q, x.n());
            let mut why = Vec::new();

            let (r1, r2) = (full_report(&x, &y, &config).unwrap(), full_report(&gx, &y, &config).unwrap());
            for (flavor, v) in r1.ordered() {
                if v.verdict != r2.verdict(flavor) {
                    why.push(format!("verdict {flavor}"));
                }
            }

            let (m1, m2) = (build_monad(&x), build_monad(&gx));
            for p in y.sample_points(10, seed).unwrap() {
                let ranks = |x: &AdhmDatum| {
                    let (a, b) = datum_fiber_maps(x, p.coords());
                    (a.rank(), b.rank())
                };
                if ranks(&x) != ranks(&gx) {
                    why.push("fiber ranks".into());
                }
                let (f1, f2) = (fiber_cohomology_dim(&m1, &p).ok(), fiber_cohomology_dim(&m2, &p).ok());
                if f1 != f2 {
                    why.push("fiber cohomology".into());
                }
            }

            match (hypercohomology_table(&m1, -2, 2), hypercohomology_table(&m2, -2, 2)) {
                (Ok(t1), Ok(t2)) if t1 == t2 => {}
                (Err(_), Err(_)) => {}
                _ => why.push("hypercohomology".into()),
            }
            (!why.is_empty()).then(|| format!("seed {seed}: {}", why.join(", ")))
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "50 (X, g.X) pairs, 10 points each, k in [-2, 2]; {} disagreements{}",
            failures.len(),
            failures.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

fn criterion_12() -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = adhm_lab::run(["adhm-lab", "examples", "--verify"], &mut out, &mut err);
    let mut trips = 0;
    let mut bad = Vec::new();
    for field in [Q, Field::prime(101).unwrap()] {
        for rec in corpus::load_all().unwrap() {
            let x = rec.datum(field).unwrap();
            let text = json::render_datum(&x);
            let back = json::parse_datum(&text, Some(field)).unwrap();
            trips += 1;
            if back != x || json::render_datum(&back) != text {
                bad.push(format!("{} datum over {field}", rec.name));
            }
            let y = rec.variety(field).unwrap();
            let text = json::render_variety(&y);
            let back = json::parse_variety(&text, Some(field)).unwrap();
            trips += 1;
            if json::render_variety(&back) != text {
                bad.push(format!("{} variety over {field}", rec.name));
            }
        }
    }
    outcome(
        code == 0 && bad.is_empty(),
        format!("examples --verify exit {code}; {trips} round trips, {} not bit-identical", bad.len()),
    )
}

fn main() {
    let criteria: Vec<(usize, fn() -> Outcome)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let results: Vec<(usize, Outcome, f64)> = criteria
        .iter()
        .map(|&(k, f)| {
            let start = Instant::now();
            let o = f();
            (k, o, start.elapsed().as_secs_f64())
        })
        .collect();
    let mut unexpected = Vec::new();
    for (k, o, secs) in &results {
        let known = KNOWN_FAILURES.contains(k);
        let tag = match (o.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected to fail)",
        };
        println!("criterion {k:>2} {tag}: {} [{secs:.1}s]", o.detail);
        if o.passed == known {
            unexpected.push(*k);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
