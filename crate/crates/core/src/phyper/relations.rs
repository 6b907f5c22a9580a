//! Linear relations among p-hypergeometric vectors: renumbering identities,
//! the μ̃ identities, and K(z)-ranks of families.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{canonical_tuples, CheckMode, Certify, Family, FamilyBatch, Master};
use crate::algebra::combinat::{binom, permutations, sort_with_sign};
use crate::algebra::matrix::Matrix;
use crate::algebra::poly::Mono;
use crate::algebra::ring::{PrimeField, Ring};
use crate::error::{KzpError, Result};
use crate::kz::{random_distinct_point, sz_bound, sz_field, PolyVector, Verdict, VerifyMode};

/// Σ c_k · F_k^{ℓ_k}; entries ≤ 0 denote the zero vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination {
    pub terms: Vec<(Family, Vec<i64>, i64)>,
}

impl Combination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, family: Family, ell: &[i64], c: i64) -> Self {
        self.terms.push((family, ell.to_vec(), c));
        self
    }

    /// Drops zero vectors, reorders ℓ using the family's symmetry and merges.
    pub fn normalized(&self) -> Combination {
        let mut acc: BTreeMap<(Family, Vec<u32>), i64> = BTreeMap::new();
        for (f, ell, c) in &self.terms {
            if ell.iter().any(|&l| l <= 0) || *c == 0 {
                continue;
            }
            let u: Vec<usize> = ell.iter().map(|&l| l as usize).collect();
            let (sorted, sign) = if f.ell_symmetric() {
                let mut s = u.clone();
                s.sort();
                (s, 1)
            } else {
                match sort_with_sign(&u) {
                    Some(x) => x,
                    None => continue,
                }
            };
            let key = (*f, sorted.iter().map(|&v| v as u32).collect());
            *acc.entry(key).or_insert(0) += c * sign as i64;
        }
        Combination {
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|((f, ell), c)| (f, ell.iter().map(|&v| v as i64).collect(), c))
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(f, ell, c)| {
                let idx: Vec<String> = ell.iter().map(|l| l.to_string()).collect();
                format!("{c}·{}^{{{}}}", f.name(), idx.join(","))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// M̃^ℓ = (−1)^{r(r−1)/2} Σ_σ sgn(σ) M̄^{ℓ+1−σ}, as a normalized combination.
pub fn renumber_tilde(ell: &[u32]) -> Combination {
    let r = ell.len();
    let global = if (r * (r.saturating_sub(1)) / 2).is_multiple_of(2) { 1 } else { -1 };
    let mut c = Combination::new();
    for (sigma, sign) in permutations(r) {
        let idx: Vec<i64> = (0..r).map(|k| ell[k] as i64 + 1 - (sigma[k] as i64 + 1)).collect();
        c = c.with(Family::BarM, &idx, global * sign as i64);
    }
    c.normalized()
}

fn batches_for(g: usize, p: PrimeField, r: usize, comb: &Combination) -> Result<Vec<(FamilyBatch, Vec<i64>)>> {
    let mut by_family: BTreeMap<Family, (Vec<Vec<u32>>, Vec<i64>)> = BTreeMap::new();
    for (f, ell, c) in &comb.terms {
        let e = by_family.entry(*f).or_default();
        e.0.push(ell.iter().map(|&l| l as u32).collect());
        e.1.push(*c);
    }
    by_family
        .into_iter()
        .map(|(f, (tuples, coeffs))| Ok((FamilyBatch::new(Master::new(f, g, p, r)?, &tuples)?, coeffs)))
        .collect()
}

/// Checks that a combination of vectors (all with the same r) vanishes.
pub fn check_linear_identity<G: rand::Rng + ?Sized>(
    g: usize,
    p: PrimeField,
    r: usize,
    comb: &Combination,
    cert: &Certify,
    rng: &mut G,
) -> Result<Verdict> {
    let comb = comb.normalized();
    if comb.terms.iter().any(|(_, ell, _)| ell.len() != r) {
        return Err(KzpError::WrongArity { expected: r, got: comb.terms.iter().map(|t| t.1.len()).find(|&l| l != r).unwrap_or(0) });
    }
    let batches = batches_for(g, p, r, &comb)?;
    let dim = Master::new(Family::N, g, p, r)?.dim();
    let cost: f64 = batches.iter().map(|(b, _)| (0..b.plans.len()).map(|k| b.symbolic_cost(k)).sum::<f64>()).sum();
    if comb.terms.is_empty() || cert.symbolic_ok(cost) {
        let layout = crate::algebra::poly::Layout::z_only(2 * g + 1);
        let mut acc = PolyVector::zero(&p, layout, dim);
        for (b, coeffs) in &batches {
            for (v, c) in b.build_symbolic().iter().zip(coeffs) {
                acc = acc.add(&v.scale(&p.reduce_i64(*c)));
            }
        }
        let passed = acc.is_zero();
        return Ok(Verdict {
            passed,
            mode: VerifyMode::Symbolic,
            points: 0,
            failure_bound: 0.0,
            detail: format!("{} {}", comb.render(), if passed { "= 0" } else { "≠ 0" }),
        });
    }
    let deg = batches.iter().flat_map(|(b, _)| b.plans.iter().map(|pl| pl.degree)).max().unwrap_or(0);
    let ext = sz_field(p, deg)?;
    let n = 2 * g + 1;
    for pt in 0..cert.points {
        let z = random_distinct_point(&ext, n, rng);
        let mut acc = vec![ext.zero(); dim];
        for (b, coeffs) in &batches {
            for (vals, c) in b.eval_tuples(&ext, &z).iter().zip(coeffs) {
                let cc = ext.from_i64(*c);
                for (a, v) in acc.iter_mut().zip(vals) {
                    ext.mul_add_assign(a, &cc, v);
                }
            }
        }
        if acc.iter().any(|a| !ext.is_zero(a)) {
            return Ok(Verdict {
                passed: false,
                mode: VerifyMode::Probabilistic,
                points: pt + 1,
                failure_bound: 0.0,
                detail: format!("{} ≠ 0 at point {pt}", comb.render()),
            });
        }
    }
    Ok(Verdict {
        passed: true,
        mode: VerifyMode::Probabilistic,
        points: cert.points,
        failure_bound: sz_bound(deg, ext.order(), cert.points),
        detail: format!("{} = 0 at {} points", comb.render(), cert.points),
    })
}

/// K(z)-rank of a set of vectors of one family.
#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub family: Family,
    pub tuples: usize,
    /// Maximum rank over the sampled points; a certain lower bound.
    pub rank: usize,
    /// F_p-span dimension of the exact coefficient vectors, when built.
    pub constant_span: Option<usize>,
    /// True when `constant_span == rank`, which certifies the rank exactly.
    pub exact: bool,
    /// Bound on the probability that the true rank exceeds `rank`.
    pub failure_bound: f64,
    pub mode: VerifyMode,
}

/// Rank over F_p(z) of the vectors of `batch`.
pub fn span_rank<G: rand::Rng + ?Sized>(batch: &FamilyBatch, cert: &Certify, rng: &mut G) -> Result<SpanReport> {
    let p = batch.master.p;
    let n = batch.master.n();
    let count = batch.plans.len();
    let deg = batch.plans.iter().map(|pl| pl.degree).max().unwrap_or(0);
    let ext = sz_field(p, deg.max(1) * count.max(1) as u32)?;
    let points = cert.points.clamp(1, 8);
    let mut rank = 0;
    for _ in 0..points {
        let z = random_distinct_point(&ext, n, rng);
        let rows = batch.eval_tuples(&ext, &z);
        let m = Matrix::from_rows(ext.clone(), rows, batch.master.dim());
        rank = rank.max(if count == 0 { 0 } else { m.rank() });
    }
    let cost: f64 = (0..count).map(|k| batch.symbolic_cost(k)).sum();
    let constant_span = if cert.mode != CheckMode::Probabilistic && cert.symbolic_ok(cost) {
        Some(constant_span(p, &batch.build_symbolic()))
    } else {
        None
    };
    let exact = constant_span == Some(rank);
    let failure_bound = if exact || rank == count {
        0.0
    } else {
        (((rank + 1) as f64 * deg as f64) / ext.order() as f64).min(1.0).powi(points as i32)
    };
    Ok(SpanReport {
        family: batch.master.family,
        tuples: count,
        rank,
        constant_span,
        exact: exact || rank == count,
        failure_bound,
        mode: if exact || rank == count { VerifyMode::Symbolic } else { VerifyMode::Probabilistic },
    })
}

/// Dimension of the F_p-span of polynomial vectors.
pub fn constant_span(p: PrimeField, vs: &[PolyVector<PrimeField>]) -> usize {
    let mut cols: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
    for v in vs {
        for (i, c) in v.coords.iter().enumerate() {
            for (m, _) in c.terms() {
                let next = cols.len();
                cols.entry((i, *m)).or_insert(next);
            }
        }
    }
    if cols.is_empty() {
        return 0;
    }
    let mut mat = Matrix::zeros(p, vs.len(), cols.len());
    for (row, v) in vs.iter().enumerate() {
        for (i, c) in v.coords.iter().enumerate() {
            for (m, a) in c.terms() {
                mat.set(row, cols[&(i, *m)], *a);
            }
        }
    }
    mat.rank()
}

/// Linear independence of {F^ℓ : 1 ≤ ℓ_1 < … < ℓ_r ≤ g}.
pub fn check_linear_independence<G: rand::Rng + ?Sized>(
    family: Family,
    g: usize,
    p: PrimeField,
    r: usize,
    cert: &Certify,
    rng: &mut G,
) -> Result<SpanReport> {
    let tuples: Vec<Vec<u32>> = canonical_tuples(Family::N, r, g as u32);
    let batch = FamilyBatch::new(Master::new(family, g, p, r)?, &tuples)?;
    span_rank(&batch, cert, rng)
}

/// A named verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Named {
    pub name: String,
    pub verdict: Verdict,
}

fn named(name: impl Into<String>, verdict: Verdict) -> Named {
    Named { name: name.into(), verdict }
}

fn tilde(ell: &[i64]) -> Combination {
    Combination::new().with(Family::TildeM, ell, 1)
}

/// The μ̃ identities at r = 2 plus the renumbering and span statements at r = 3.
pub fn tilde_m_identities<G: rand::Rng + ?Sized>(g: usize, p: PrimeField, cert: &Certify, rng: &mut G) -> Result<Vec<Named>> {
    if g < 2 {
        return Err(KzpError::InvalidParameters("the μ̃ suite needs g ≥ 2".into()));
    }
    let mut out = Vec::new();
    let gi = g as i64;
    let max = gi + 2;
    // renumbering at r = 2, with the two worked examples
    for l1 in 1..=max {
        for l2 in l1..=max {
            let mut c = renumber_tilde(&[l1 as u32, l2 as u32]);
            for t in c.terms.iter_mut() {
                t.2 = -t.2;
            }
            let c = Combination { terms: [tilde(&[l1, l2]).terms, c.terms].concat() };
            out.push(named(format!("renumbering M̃^{{{l1},{l2}}}"), check_linear_identity(g, p, 2, &c, cert, rng)?));
        }
    }
    let ex1 = tilde(&[1, 3]).with(Family::BarM, &[1, 2], 1);
    out.push(named("M̃^{1,3} = −M̄^{1,2}", check_linear_identity(g, p, 2, &ex1, cert, rng)?));
    let ex2 = tilde(&[2, 2]).with(Family::BarM, &[1, 2], -2);
    out.push(named("M̃^{2,2} = 2M̄^{1,2}", check_linear_identity(g, p, 2, &ex2, cert, rng)?));
    // (i) staircase sums
    for l1 in 1..=gi + 1 {
        for l2 in 1..=gi + 1 {
            let mut c = Combination::new().with(Family::BarM, &[l1, l2], 1);
            for k in 0..l1 {
                c = c.with(Family::TildeM, &[l1 - k, l2 + 1 + k], 1);
            }
            out.push(named(format!("staircase sum ({l1},{l2})"), check_linear_identity(g, p, 2, &c, cert, rng)?));
        }
    }
    // (ii) telescoping
    for l in 1..=gi + 1 {
        let mut a = Combination::new();
        for k in 0..l {
            a = a.with(Family::TildeM, &[l - k, l + 1 + k], 1);
        }
        out.push(named(format!("odd telescoping ℓ={l}"), check_linear_identity(g, p, 2, &a, cert, rng)?));
        let mut b = tilde(&[l, l]);
        for k in 1..l {
            b = b.with(Family::TildeM, &[l - k, l + k], 2);
        }
        out.push(named(format!("even telescoping ℓ={l}"), check_linear_identity(g, p, 2, &b, cert, rng)?));
    }
    // (iii) vanishing
    for ell in [[1, 1], [1, 2], [gi, gi + 1], [gi + 1, gi + 1], [1, gi + 3], [gi + 2, gi + 2]] {
        out.push(named(format!("M̃^{{{},{}}} = 0", ell[0], ell[1]), check_linear_identity(g, p, 2, &tilde(&ell), cert, rng)?));
    }
    // KZ at κ = −2
    let tuples = canonical_tuples(Family::TildeM, 2, g as u32 + 2);
    let batch = FamilyBatch::new(Master::new(Family::TildeM, g, p, 2)?, &tuples)?;
    for (ell, v) in tuples.iter().zip(super::verify_family(&batch, cert, rng)?) {
        out.push(named(format!("M̃^{{{},{}}} solves KZ (κ=−2)", ell[0], ell[1]), v));
    }
    Ok(out)
}

/// Result of expressing the M̄ triples through the μ̃ family by the
/// lexicographic elimination.
#[derive(Clone, Debug, Serialize)]
pub struct Elimination {
    /// Sign s with M̃^{ℓ₁,ℓ₂+1,ℓ₃+2} = s·(M̄^{ℓ₁,ℓ₂,ℓ₃} − …) in the six-term identity.
    pub six_term_sign: i64,
    pub six_term: Vec<Named>,
    /// Every M̄^ℓ, 1 ≤ ℓ₁<ℓ₂<ℓ₃ ≤ g, lies in the span of μ̃ vectors.
    pub expressible: bool,
    pub tilde_span: SpanReport,
}

fn six_term(l: [i64; 3], sign: i64) -> Combination {
    let [a, b, c] = l;
    Combination::new()
        .with(Family::TildeM, &[a, b + 1, c + 2], -1)
        .with(Family::BarM, &[a, b, c], sign)
        .with(Family::BarM, &[a, b - 1, c + 1], -sign)
        .with(Family::BarM, &[a - 1, b + 1, c], -sign)
        .with(Family::BarM, &[a - 1, b - 1, c], sign)
        .with(Family::BarM, &[a - 2, b + 1, c + 1], sign)
        .with(Family::BarM, &[a - 2, b, c + 2], -sign)
}

/// r = 3 elimination: six-term identity, expressibility and span dimension.
pub fn tilde_elimination<G: rand::Rng + ?Sized>(g: usize, p: PrimeField, cert: &Certify, rng: &mut G) -> Result<Elimination> {
    if g < 3 {
        return Err(KzpError::InvalidParameters("r = 3 elimination needs g ≥ 3".into()));
    }
    let triples = canonical_tuples(Family::BarM, 3, g as u32);
    // the sign is a property of the general renumbering formula; measure it on
    // the first triple and then check every triple with it
    let first = [triples[0][0] as i64, triples[0][1] as i64, triples[0][2] as i64];
    let sign = if check_linear_identity(g, p, 3, &six_term(first, 1), cert, rng)?.passed { 1 } else { -1 };
    let mut six = Vec::new();
    for t in &triples {
        let l = [t[0] as i64, t[1] as i64, t[2] as i64];
        six.push(named(format!("six-term ({},{},{})", l[0], l[1], l[2]), check_linear_identity(g, p, 3, &six_term(l, sign), cert, rng)?));
    }
    // span of μ̃ triples with entries ≤ 2g and joint rank with M̄ triples
    let gi = g as u32;
    let ttuples = canonical_tuples(Family::TildeM, 3, 2 * gi);
    let tb = FamilyBatch::new(Master::new(Family::TildeM, g, p, 3)?, &ttuples)?;
    let tilde_span = span_rank(&tb, cert, rng)?;
    let bb = FamilyBatch::new(Master::new(Family::BarM, g, p, 3)?, &triples)?;
    let ext = sz_field(p, tb.plans.iter().map(|pl| pl.degree).max().unwrap_or(1) * 4)?;
    let mut joint = 0;
    for _ in 0..cert.points.clamp(1, 4) {
        let z = random_distinct_point(&ext, 2 * g + 1, rng);
        let d = bb.master.dim();
        let mut rows = bb.eval_tuples(&ext, &z);
        let base = Matrix::from_rows(ext.clone(), rows.clone(), d).rank();
        rows.extend(tb.eval_tuples(&ext, &z));
        let all = Matrix::from_rows(ext.clone(), rows, d).rank();
        joint = joint.max(all - base);
    }
    let expressible = joint == 0 && six.iter().all(|n| n.verdict.passed);
    Ok(Elimination { six_term_sign: sign, six_term: six, expressible, tilde_span })
}

/// Expected dimension C(g, r).
pub fn expected_span(g: usize, r: usize) -> usize {
    binom(g as i64, r as i64) as usize
}
