//! Polynomial intertwiners between the wedge carrier ∧^r Sing[2g−1] and the
//! singular carrier Sing[2g+1−2r]: the step matrices A_k, their products
//! T^(k), the map T(z), its Shapovalov adjoint T̄(z) and the explicit r = 2
//! map T̃(z).
//!
//! Builders are generic over the ring holding z: `PolyRing` with the
//! variables as `z` gives symbolic matrices, an extension field with a random
//! point gives evaluations.

use serde::Serialize;

use crate::algebra::combinat::{permutations, sort_with_sign, SubsetIndex};
use crate::algebra::matrix::Matrix;
use crate::algebra::poly::{Layout, MultiPoly, PolyRing};
use crate::algebra::ring::{ExtField, FromRational, PrimeField, Ring};
use crate::error::{KzpError, Result};
use crate::kz::{random_distinct_point, sz_bound, sz_field, Carrier, Clearing, KZSystem, Verdict, VerifyMode};
use crate::phyper::relations::Named;
use crate::phyper::{canonical_tuples, Certify, Family, FamilyBatch, Master};
use crate::weightspace::{SingSpace, WedgeSpace};

pub(crate) fn invert<S: Ring>(s: &S, v: i64, what: &str) -> Result<S::Elem> {
    s.inv(&s.from_i64(v)).ok_or_else(|| KzpError::ExceptionalPrime {
        p: s.characteristic(),
        reason: format!("{what} = {v} is not invertible"),
    })
}

fn check_r(g: usize, r: usize) -> Result<()> {
    if r == 0 || r > g {
        return Err(KzpError::InvalidParameters(format!("need 1 ≤ r ≤ g, got r={r}, g={g}")));
    }
    Ok(())
}

/// The symbolic ring in z_1..z_n and its variables.
pub fn z_ring<R: Ring>(base: R, n: usize) -> (PolyRing<R>, Vec<MultiPoly<R>>) {
    let pr = PolyRing::new(base, Layout::z_only(n));
    let z = pr.vars();
    (pr, z)
}

/// Constant matrix viewed over the polynomial ring.
pub fn lift<R: Ring>(pr: &PolyRing<R>, m: &Matrix<R>) -> Matrix<PolyRing<R>> {
    let rows = (0..m.rows())
        .map(|i| m.row(i).iter().map(|c| MultiPoly::constant(pr.base.clone(), pr.layout, c.clone())).collect())
        .collect();
    Matrix::from_rows(pr.clone(), rows, m.cols())
}

/// A_k(z) = Z + KZ/(2k−2g−1).
pub fn a_matrix<S: Ring>(s: &S, z: &[S::Elem], g: usize, k: usize) -> Result<Matrix<S>> {
    let n = 2 * g + 1;
    let c = invert(s, 2 * k as i64 - 2 * g as i64 - 1, "2k−2g−1")?;
    let mut m = Matrix::zeros(s.clone(), n, n);
    for i in 0..n {
        for a in 0..n {
            let mut v = s.mul(&c, &z[a]);
            if i == a {
                v = s.add(&v, &z[a]);
            }
            m.set(i, a, v);
        }
    }
    Ok(m)
}

/// T^(0), …, T^(r−1) with T^(k) = A_k ⋯ A_1.
pub fn t_powers<S: Ring>(s: &S, z: &[S::Elem], g: usize, r: usize) -> Result<Vec<Matrix<S>>> {
    let mut out = vec![Matrix::identity(s.clone(), 2 * g + 1)];
    for k in 1..r {
        let next = a_matrix(s, z, g, k)?.mul(out.last().expect("nonempty"));
        out.push(next);
    }
    Ok(out)
}

/// (−1)^{r(r−1)/2}
pub fn global_sign(r: usize) -> i64 {
    if (r * r.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[allow(clippy::too_many_arguments)]
fn spread<S: Ring>(
    s: &S,
    mats: &[&Matrix<S>],
    set: &[usize],
    a: &mut Vec<usize>,
    acc: &S::Elem,
    idx: &SubsetIndex,
    row: &mut [S::Elem],
) {
    let j = a.len();
    if j == set.len() {
        if let Some((sorted, sign)) = sort_with_sign(a) {
            let col = idx.position(&sorted).expect("subset");
            if sign > 0 {
                s.add_assign(&mut row[col], acc);
            } else {
                row[col] = s.sub(&row[col], acc);
            }
        }
        return;
    }
    let n = mats[j].cols();
    for b in 0..n {
        if a.contains(&b) {
            continue;
        }
        let e = mats[j].get(set[j], b);
        if s.is_zero(e) {
            continue;
        }
        a.push(b);
        spread(s, mats, set, a, &s.mul(acc, e), idx, row);
        a.pop();
    }
}

/// Matrix of T(z): columns are wedge coordinates M_A, rows singular
/// coordinates N_I, both over sorted r-subsets.
pub fn build_t<S: Ring>(s: &S, z: &[S::Elem], g: usize, r: usize) -> Result<Matrix<S>> {
    check_r(g, r)?;
    let n = 2 * g + 1;
    let idx = SubsetIndex::new(n, r);
    let tp = t_powers(s, z, g, r)?;
    let sign = global_sign(r);
    let mut m = Matrix::zeros(s.clone(), idx.len(), idx.len());
    for (ri, set) in idx.iter().enumerate() {
        let mut row = vec![s.zero(); idx.len()];
        for (sigma, sg) in permutations(r) {
            let mats: Vec<&Matrix<S>> = sigma.iter().map(|&k| &tp[k]).collect();
            let coef = s.from_i64(sign * sg as i64);
            spread(s, &mats, set, &mut Vec::with_capacity(r), &coef, &idx, &mut row);
        }
        for (c, v) in row.into_iter().enumerate() {
            m.set(ri, c, v);
        }
    }
    Ok(m)
}

/// T̄(z) = π·T(z)ᵀ with π the orthogonal projector onto ∧^r Sing[2g−1]
/// (given in the same ring as `s`).
pub fn build_tbar<S: Ring>(s: &S, z: &[S::Elem], g: usize, r: usize, proj: &Matrix<S>) -> Result<Matrix<S>> {
    Ok(proj.mul(&build_t(s, z, g, r)?.transpose()))
}

/// T̃(z) at r = 2: N̄ (symmetric in its two indices) ↦ M̄.
pub fn build_ttilde_r2<S: Ring>(s: &S, z: &[S::Elem], g: usize) -> Result<Matrix<S>> {
    check_r(g, 2)?;
    let n = 2 * g + 1;
    let c = invert(s, n as i64, "2g+1")?;
    let idx = SubsetIndex::new(n, 2);
    let pos = |a: usize, b: usize| idx.position(&[a.min(b), a.max(b)]).expect("pair");
    let mut m = Matrix::zeros(s.clone(), idx.len(), idx.len());
    let add = |m: &mut Matrix<S>, r: usize, c: usize, v: S::Elem| {
        let t = s.add(m.get(r, c), &v);
        m.set(r, c, t);
    };
    for (row, pair) in idx.iter().enumerate() {
        let (i1, i2) = (pair[0], pair[1]);
        add(&mut m, row, row, s.sub(&z[i1], &z[i2]));
        for a in 0..n {
            if a != i1 {
                add(&mut m, row, pos(a, i1), s.mul(&c, &z[a]));
            }
            if a != i2 {
                add(&mut m, row, pos(a, i2), s.neg(&s.mul(&c, &z[a])));
            }
        }
    }
    Ok(m)
}

/// Basis of a carrier as the columns of an ambient matrix.
pub fn carrier_basis<R: FromRational>(ring: &R, g: usize, carrier: Carrier) -> Result<Matrix<R>> {
    let (vs, d) = match carrier {
        Carrier::Sing { r } => {
            let s = SingSpace::new(g, r)?;
            (s.basis_in(ring)?, s.ambient.dim())
        }
        Carrier::Wedge { r } => {
            let w = WedgeSpace::new(g, r)?;
            (w.basis_in(ring)?, w.ambient_dim())
        }
    };
    Ok(Matrix::from_cols(ring.clone(), &vs, d))
}

fn map_entries<R: Ring>(m: &Matrix<PolyRing<R>>, f: impl Fn(&MultiPoly<R>) -> MultiPoly<R>) -> Matrix<PolyRing<R>> {
    let rows = (0..m.rows()).map(|i| m.row(i).iter().map(&f).collect()).collect();
    Matrix::from_rows(m.ring().clone(), rows, m.cols())
}

/// Checks ∇_i^{to}∘X = X∘∇_i^{from} on the domain carrier for every i, in
/// cleared form: D_i ∂_i X − (1/κ) Σ_j E_ij (Ω^{to}_ij X − X Ω^{from}_ij).
pub fn verify_intertwining<R: FromRational>(
    base: &R,
    x: &Matrix<PolyRing<R>>,
    g: usize,
    kappa: i64,
    from: Carrier,
    to: Carrier,
) -> Result<Verdict> {
    let n = 2 * g + 1;
    let pr = x.ring().clone();
    let sf = KZSystem::new(g, kappa, from)?;
    let st = KZSystem::new(g, kappa, to)?;
    if x.rows() != st.dim() || x.cols() != sf.dim() {
        return Err(KzpError::DimensionMismatch(format!("map is {}×{}, carriers {}→{}", x.rows(), x.cols(), sf.dim(), st.dim())));
    }
    let b = lift(&pr, &carrier_basis(base, g, from)?);
    let cl = Clearing::new(base, n);
    let kinv = invert(base, kappa, "κ")?;
    let xb = x.mul(&b);
    for i in 0..n {
        let mut res = map_entries(&xb, |e| e.derivative(pr.layout.z(i)).mul(&cl.d[i]));
        for j in 0..n {
            if j == i {
                continue;
            }
            let ot = lift(&pr, &st.omega(i, j).to_matrix(base));
            let of = lift(&pr, &sf.omega(i, j).to_matrix(base));
            let comm = ot.mul(&xb).sub(&x.mul(&of.mul(&b)));
            res = res.sub(&comm.scale(&cl.e[i * n + j].scale(&kinv)));
        }
        if !res.is_zero() {
            return Ok(Verdict {
                passed: false,
                mode: VerifyMode::Symbolic,
                points: 0,
                failure_bound: 0.0,
                detail: format!("intertwining fails for ∇_{}", i + 1),
            });
        }
    }
    Ok(Verdict {
        passed: true,
        mode: VerifyMode::Symbolic,
        points: 0,
        failure_bound: 0.0,
        detail: format!("∇∘X = X∘∇ for all {n} indices at κ={kappa}"),
    })
}

/// S(T v, w) = S^∧(v, T̄ w) for all basis vectors v, w.
pub fn adjoint_identity<R: FromRational>(base: &R, t: &Matrix<PolyRing<R>>, tbar: &Matrix<PolyRing<R>>, g: usize, r: usize) -> Result<bool> {
    let pr = t.ring().clone();
    let bw = lift(&pr, &carrier_basis(base, g, Carrier::Wedge { r })?);
    let bs = lift(&pr, &carrier_basis(base, g, Carrier::Sing { r })?);
    let lhs = t.mul(&bw).transpose().mul(&bs);
    let rhs = bw.transpose().mul(&tbar.mul(&bs));
    Ok(lhs == rhs)
}

/// Every nonzero entry homogeneous of degree `d`.
pub fn is_homogeneous<R: Ring>(m: &Matrix<PolyRing<R>>, d: u32) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().all(|e| e.is_zero() || e.homogeneous_degree() == Some(d)))
}

/// Ratio a/b of leading coefficients, as a constant polynomial.
pub fn poly_ratio<R: Ring>(a: &MultiPoly<R>, b: &MultiPoly<R>) -> Option<MultiPoly<R>> {
    let (m, bc) = b.terms().first()?;
    let c = a.ring().div(&a.coeff(*m), bc)?;
    Some(MultiPoly::constant(a.ring().clone(), a.layout(), c))
}

/// Tracks a single proportionality constant c with lhs = c·rhs, fixed by the
/// first nonzero rhs coordinate seen.
#[derive(Clone, Debug)]
pub struct Proportion<S: Ring> {
    pub c: Option<S::Elem>,
}

impl<S: Ring> Default for Proportion<S> {
    fn default() -> Self {
        Proportion { c: None }
    }
}

impl<S: Ring> Proportion<S> {
    pub fn check(&mut self, s: &S, lhs: &[S::Elem], rhs: &[S::Elem], ratio: impl Fn(&S::Elem, &S::Elem) -> Option<S::Elem>) -> bool {
        if self.c.is_none() {
            if let Some(k) = rhs.iter().position(|v| !s.is_zero(v)) {
                match ratio(&lhs[k], &rhs[k]) {
                    Some(c) if !s.is_zero(&c) => self.c = Some(c),
                    _ => return false,
                }
            } else {
                return lhs.iter().all(|v| s.is_zero(v));
            }
        }
        let c = self.c.as_ref().expect("set");
        lhs.iter().zip(rhs).all(|(l, r)| *l == s.mul(c, r))
    }
}

/// Outcome of a proportionality test between two maps or two families.
#[derive(Clone, Debug, Serialize)]
pub struct ProportionReport {
    pub passed: bool,
    /// The constant, rendered in the coefficient ring.
    pub constant: Option<String>,
    pub detail: String,
}

/// T̃ = c·T̄ on Sing[2g−3] at r = 2, symbolically over `base`.
pub fn tilde_vs_bar<R: FromRational>(base: &R, g: usize) -> Result<ProportionReport> {
    let n = 2 * g + 1;
    let (pr, z) = z_ring(base.clone(), n);
    let proj = lift(&pr, &WedgeSpace::new(g, 2)?.projector(base)?);
    let tbar = build_tbar(&pr, &z, g, 2, &proj)?;
    let tt = build_ttilde_r2(&pr, &z, g)?;
    let bs = lift(&pr, &carrier_basis(base, g, Carrier::Sing { r: 2 })?);
    let lhs = tt.mul(&bs);
    let rhs = tbar.mul(&bs);
    let mut prop = Proportion::default();
    let mut passed = true;
    for j in 0..lhs.cols() {
        if !prop.check(&pr, &lhs.col(j), &rhs.col(j), poly_ratio) {
            passed = false;
            break;
        }
    }
    let constant = prop.c.as_ref().and_then(|c| c.as_constant()).map(|c| base.render(&c));
    passed &= prop.c.is_some();
    Ok(ProportionReport {
        passed,
        detail: match (&constant, passed) {
            (Some(c), true) => format!("T̃ = {c}·T̄ on Sing[2g−3]"),
            _ => "T̃ and T̄ are not proportional".into(),
        },
        constant,
    })
}

/// Rank of T̄(z)|_{Sing[2g+1−2r]} at a random point of an extension field.
pub fn tbar_rank_at<G: rand::Rng + ?Sized>(p: PrimeField, g: usize, r: usize, rng: &mut G) -> Result<usize> {
    let ext = ExtField::with_min_size(p, 1 << 16)?;
    let z = random_distinct_point(&ext, 2 * g + 1, rng);
    let proj = WedgeSpace::new(g, r)?.projector(&ext)?;
    let tbar = build_tbar(&ext, &z, g, r, &proj)?;
    let bs = carrier_basis(&ext, g, Carrier::Sing { r })?;
    Ok(tbar.mul(&bs).rank())
}

/// T(z)·M^ℓ = N^ℓ for each ℓ, symbolically when the build fits the budget,
/// otherwise at random points.
pub fn check_p_map<G: rand::Rng + ?Sized>(
    g: usize,
    p: PrimeField,
    r: usize,
    tuples: &[Vec<u32>],
    cert: &Certify,
    rng: &mut G,
) -> Result<Vec<Named>> {
    check_r(g, r)?;
    let n = 2 * g + 1;
    let mb = FamilyBatch::new(Master::new(Family::M, g, p, r)?, tuples)?;
    let nb = FamilyBatch::new(Master::new(Family::N, g, p, r)?, tuples)?;
    let name = |ell: &[u32]| format!("T(z)·M^{ell:?} = N^{ell:?}");
    let cost: f64 = (0..tuples.len()).map(|k| mb.symbolic_cost(k) + nb.symbolic_cost(k)).sum();
    if cert.symbolic_ok(cost) {
        let (pr, z) = z_ring(p, n);
        let t = build_t(&pr, &z, g, r)?;
        let ms = mb.build_symbolic();
        let ns = nb.build_symbolic();
        return Ok(tuples
            .iter()
            .zip(ms.iter().zip(&ns))
            .map(|(ell, (m, nv))| {
                let passed = t.mul_vec(&m.coords) == nv.coords;
                Named {
                    name: name(ell),
                    verdict: Verdict {
                        passed,
                        mode: VerifyMode::Symbolic,
                        points: 0,
                        failure_bound: 0.0,
                        detail: if passed { "exact polynomial identity".into() } else { "coordinates differ".into() },
                    },
                }
            })
            .collect());
    }
    let deg = mb.plans.iter().chain(&nb.plans).map(|pl| pl.degree).max().unwrap_or(0) + (r * (r - 1) / 2) as u32;
    let ext = sz_field(p, deg)?;
    let mut failed_at: Vec<Option<usize>> = vec![None; tuples.len()];
    for pt in 0..cert.points {
        let z = random_distinct_point(&ext, n, rng);
        let t = build_t(&ext, &z, g, r)?;
        let ms = mb.eval_tuples(&ext, &z);
        let ns = nb.eval_tuples(&ext, &z);
        for (k, (m, nv)) in ms.iter().zip(&ns).enumerate() {
            if failed_at[k].is_none() && t.mul_vec(m) != *nv {
                failed_at[k] = Some(pt);
            }
        }
    }
    Ok(tuples
        .iter()
        .zip(failed_at)
        .map(|(ell, f)| Named {
            name: name(ell),
            verdict: Verdict {
                passed: f.is_none(),
                mode: VerifyMode::Probabilistic,
                points: cert.points,
                failure_bound: if f.is_none() { sz_bound(deg, ext.order(), cert.points) } else { 0.0 },
                detail: match f {
                    None => format!("agrees at {} random points", cert.points),
                    Some(pt) => format!("differs at point {pt}"),
                },
            },
        })
        .collect())
}

/// M̃^ℓ = c·T̃(z)N̄^ℓ with one constant c for all ℓ (r = 2).
pub fn check_tilde_p_map<G: rand::Rng + ?Sized>(
    g: usize,
    p: PrimeField,
    tuples: &[Vec<u32>],
    cert: &Certify,
    rng: &mut G,
) -> Result<(ProportionReport, Vec<Named>)> {
    let n = 2 * g + 1;
    let tb = FamilyBatch::new(Master::new(Family::TildeM, g, p, 2)?, tuples)?;
    let bb = FamilyBatch::new(Master::new(Family::BarN, g, p, 2)?, tuples)?;
    let name = |ell: &[u32]| format!("M̃^{ell:?} = c·T̃(z)·N̄^{ell:?}");
    let cost: f64 = (0..tuples.len()).map(|k| tb.symbolic_cost(k) + bb.symbolic_cost(k)).sum();
    let mut results: Vec<(bool, String)> = Vec::new();
    let constant;
    let mode;
    let mut bound = 0.0;
    if cert.symbolic_ok(cost) {
        mode = VerifyMode::Symbolic;
        let (pr, z) = z_ring(p, n);
        let tt = build_ttilde_r2(&pr, &z, g)?;
        let mut prop = Proportion::default();
        for (mt, nb) in tb.build_symbolic().iter().zip(bb.build_symbolic()) {
            let ok = prop.check(&pr, &mt.coords, &tt.mul_vec(&nb.coords), poly_ratio);
            results.push((ok, if ok { "exact polynomial identity".into() } else { "not proportional".into() }));
        }
        constant = prop.c.as_ref().and_then(|c| c.as_constant()).map(|c| p.symmetric(c));
    } else {
        mode = VerifyMode::Probabilistic;
        let deg = tb.plans.iter().chain(&bb.plans).map(|pl| pl.degree).max().unwrap_or(0) + 1;
        let ext = sz_field(p, deg)?;
        let mut prop = Proportion::default();
        let mut fails: Vec<Option<usize>> = vec![None; tuples.len()];
        for pt in 0..cert.points {
            let z = random_distinct_point(&ext, n, rng);
            let tt = build_ttilde_r2(&ext, &z, g)?;
            let ms = tb.eval_tuples(&ext, &z);
            let ns = bb.eval_tuples(&ext, &z);
            for (k, (m, nv)) in ms.iter().zip(&ns).enumerate() {
                if fails[k].is_none() && !prop.check(&ext, m, &tt.mul_vec(nv), |a, b| ext.div(a, b)) {
                    fails[k] = Some(pt);
                }
            }
        }
        results = fails
            .into_iter()
            .map(|f| match f {
                None => (true, format!("agrees at {} random points", cert.points)),
                Some(pt) => (false, format!("not proportional at point {pt}")),
            })
            .collect();
        bound = sz_bound(deg, ext.order(), cert.points);
        // the constant must lie in the prime field
        constant = prop.c.as_ref().and_then(|c| {
            let base = c.0[0];
            (ext.embed(base) == *c).then(|| p.symmetric(base))
        });
        if prop.c.is_some() && constant.is_none() {
            for r in results.iter_mut() {
                *r = (false, "constant outside the prime field".into());
            }
        }
    }
    let all = constant.is_some() && results.iter().all(|r| r.0);
    let named = tuples
        .iter()
        .zip(results)
        .map(|(ell, (passed, detail))| Named {
            name: name(ell),
            verdict: Verdict { passed: passed && constant.is_some(), mode, points: if mode == VerifyMode::Symbolic { 0 } else { cert.points }, failure_bound: if passed { bound } else { 0.0 }, detail },
        })
        .collect();
    Ok((
        ProportionReport {
            passed: all,
            constant: constant.map(|c| c.to_string()),
            detail: match constant {
                Some(c) => format!("single constant c = {c} mod {}", p.p()),
                None => "no common nonzero constant".into(),
            },
        },
        named,
    ))
}

/// The one-step cohomology relation in characteristic p: with
/// G_a = Ψ(t,z)^m/(t−z_a), m = (p−1)/2,
/// C_i = t^k G_i − Σ_a A_k(z)_{ia} t^{k−1} G_a
/// must be the exact t-derivative (2/(2k−2g−1))·∂_t(t^k Ψ^m), so its
/// p-integrals vanish.
pub fn cohomology_relation_check(g: usize, p: PrimeField, k: usize) -> Result<Verdict> {
    let n = 2 * g + 1;
    if k == 0 {
        return Ok(Verdict { passed: true, mode: VerifyMode::Symbolic, points: 0, failure_bound: 0.0, detail: "T^(0) = identity".into() });
    }
    let l = Layout::new(1, n)?;
    let c = invert(&p, 2 * k as i64 - n as i64, "2k−2g−1")?;
    let m = (p.p() - 1) / 2;
    let t = MultiPoly::t(p, l, 0);
    let lin: Vec<MultiPoly<PrimeField>> = (0..n).map(|a| t.sub(&MultiPoly::z(p, l, a))).collect();
    let pw: Vec<MultiPoly<PrimeField>> = lin.iter().map(|f| f.pow(m)).collect();
    let mut prefix = vec![MultiPoly::one(p, l)];
    for f in &pw {
        prefix.push(prefix.last().expect("nonempty").mul(f));
    }
    let mut suffix = vec![MultiPoly::one(p, l); n + 1];
    for a in (0..n).rev() {
        suffix[a] = pw[a].mul(&suffix[a + 1]);
    }
    let psi_m = prefix[n].clone();
    let ga: Vec<MultiPoly<PrimeField>> = (0..n).map(|a| prefix[a].mul(&suffix[a + 1]).mul(&lin[a].pow(m - 1))).collect();
    let tk = t.pow(k as u32);
    let tk1 = t.pow(k as u32 - 1);
    let zs = |a: usize| MultiPoly::z(p, l, a);
    let mut weighted = MultiPoly::zero(p, l);
    for (a, g_a) in ga.iter().enumerate() {
        weighted.add_assign(&g_a.mul(&zs(a)));
    }
    let target = tk.mul(&psi_m).derivative(l.t(0)).scale(&p.mul(&c, &2));
    let top = psi_m.degree_in(l.t(0)) + k as u32;
    for (i, g_i) in ga.iter().enumerate() {
        let ci = tk.mul(g_i).sub(&tk1.mul(&g_i.mul(&zs(i)))).sub(&tk1.mul(&weighted).scale(&c));
        if ci != target {
            return Ok(Verdict {
                passed: false,
                mode: VerifyMode::Symbolic,
                points: 0,
                failure_bound: 0.0,
                detail: format!("combination for i={} is not the expected t-derivative", i + 1),
            });
        }
        for ell in 1..=(top + 1) / p.p() {
            if !ci.p_integral(&[ell])?.is_zero() {
                return Ok(Verdict {
                    passed: false,
                    mode: VerifyMode::Symbolic,
                    points: 0,
                    failure_bound: 0.0,
                    detail: format!("p-integral ℓ={ell} nonzero for i={}", i + 1),
                });
            }
        }
    }
    Ok(Verdict {
        passed: true,
        mode: VerifyMode::Symbolic,
        points: 0,
        failure_bound: 0.0,
        detail: format!("k={k}: every combination is an exact t-derivative; p-integrals vanish for ℓ ≤ {}", (top + 1) / p.p()),
    })
}

/// Default ℓ-tuples for the p-map checks: strictly increasing, entries ≤ g+1.
pub fn p_map_tuples(g: usize, r: usize) -> Vec<Vec<u32>> {
    canonical_tuples(Family::M, r, g as u32 + 1)
}

#[cfg(test)]
mod tests;
