//! Drivers that turn the solution, relation and Satake checks into report
//! entries. The curvature drivers live in `curvature`.

use crate::algebra::combinat::binom;
use crate::algebra::ring::{PrimeField, Rationals, Ring};
use crate::curvature::{point_field, poincare_element, primitive_ambient, random_point, wedge_power_map};
use crate::error::{KzpError, Result};
use crate::kz::{Carrier, Verdict, VerifyMode};
use crate::phyper::relations::{check_linear_identity, tilde_m_identities, span_rank, tilde_elimination, Combination, Named};
use crate::phyper::{build_solution, canonical_tuples, verify_family, Certify, Family, FamilyBatch, Master};
use crate::report::{merge_points, Check};
use crate::satake::{
    build_t, build_tbar, check_p_map, check_tilde_p_map, cohomology_relation_check, is_homogeneous, lift, p_map_tuples, tilde_vs_bar,
    verify_intertwining, z_ring,
};
use crate::weightspace::{sing_dimension, SingSpace, WedgeSpace};

/// Exceptional primes and degenerate points become `exceptional` entries;
/// anything else propagates.
pub fn guard(group: &str, name: &str, r: Result<Vec<Check>>) -> Result<Vec<Check>> {
    match r {
        Ok(v) => Ok(v),
        Err(e @ (KzpError::ExceptionalPrime { .. } | KzpError::DegeneratePoint(_))) => Ok(vec![Check::exceptional(group, name, e.to_string())]),
        Err(e) => Err(e),
    }
}

/// One entry summarizing several verdicts.
pub fn merge_verdicts(group: &str, name: impl Into<String>, items: &[(String, Verdict)]) -> Check {
    let bad: Vec<String> = items.iter().filter(|(_, v)| !v.passed).map(|(n, v)| format!("{n}: {}", v.detail)).collect();
    let prob: Vec<&Verdict> = items.iter().map(|(_, v)| v).filter(|v| v.mode == VerifyMode::Probabilistic).collect();
    let detail = if bad.is_empty() {
        format!("{} checked, {} symbolic, {} probabilistic", items.len(), items.len() - prob.len(), prob.len())
    } else {
        format!("failed: {}", bad.join("; "))
    };
    let mut c = Check::new(group, name, bad.is_empty(), detail);
    c.mode = Some(if prob.is_empty() { VerifyMode::Symbolic } else { VerifyMode::Probabilistic });
    if bad.is_empty() && !prob.is_empty() {
        c.failure_bound = Some(prob.iter().map(|v| v.failure_bound).fold(0.0, f64::max));
    }
    c
}

fn from_named(v: Vec<Named>) -> Vec<(String, Verdict)> {
    v.into_iter().map(|n| (n.name, n.verdict)).collect()
}

/// Every family at the requested κ (both if `None`) solves its KZ system,
/// for each r in `rs` and all canonical ℓ-tuples with entries ≤ `max`.
pub fn solutions_suite<G: rand::Rng + ?Sized>(
    g: usize,
    p: PrimeField,
    rs: &[usize],
    kappa: Option<i64>,
    max: u32,
    cert: &Certify,
    rng: &mut G,
) -> Result<Vec<Check>> {
    const GROUP: &str = "solutions";
    let mut out = Vec::new();
    for family in Family::ALL.into_iter().filter(|f| kappa.is_none_or(|k| k == f.kappa())) {
        for &r in rs {
            let name = format!("{family} solves KZ at κ={} (g={g}, r={r}, p={}, entries ≤ {max})", family.kappa(), p.p());
            let mut run = || -> Result<Vec<Check>> {
                let tuples = canonical_tuples(family, r, max);
                let batch = FamilyBatch::new(Master::new(family, g, p, r)?, &tuples)?;
                let verdicts = verify_family(&batch, cert, rng)?;
                let items: Vec<(String, Verdict)> = tuples.iter().map(|t| format!("{t:?}")).zip(verdicts).collect();
                Ok(vec![merge_verdicts(GROUP, name.clone(), &items)])
            };
            out.extend(guard(GROUP, &name, run())?);
        }
    }
    Ok(out)
}

fn bar_n(ell: &[i64]) -> Combination {
    Combination::new().with(Family::BarN, ell, 1)
}

/// Vanishing beyond the support, the g = 2 relations among N̄^{ℓ₁,ℓ₂}, the
/// span of the N̄ family, and the M̃ identities.
pub fn relations_suite<G: rand::Rng + ?Sized>(g: usize, p: PrimeField, cert: &Certify, rng: &mut G) -> Result<Vec<Check>> {
    const GROUP: &str = "relations";
    let mut out = Vec::new();
    let gl = g as u32;
    let mut nonzero = Vec::new();
    for l in gl + 1..=gl + 2 {
        if !build_solution(Family::N, g, p, 1, &[l])?.is_zero() {
            nonzero.push(l);
        }
    }
    let mut inside = Vec::new();
    for l in 1..=gl {
        if build_solution(Family::N, g, p, 1, &[l])?.is_zero() {
            inside.push(l);
        }
    }
    out.push(Check::new(
        GROUP,
        format!("N^ℓ = 0 exactly for ℓ > g (g={g}, p={})", p.p()),
        nonzero.is_empty() && inside.is_empty(),
        if nonzero.is_empty() && inside.is_empty() {
            format!("N^1..N^{g} nonzero, N^{}..N^{} zero", g + 1, g + 2)
        } else {
            format!("nonzero beyond g: {nonzero:?}; zero inside: {inside:?}")
        },
    ));
    if g == 2 {
        let rels = [
            ("N̄^{1,1} = 0", bar_n(&[1, 1])),
            ("N̄^{1,2} = 0", bar_n(&[1, 2])),
            ("N̄^{2,2} + 2N̄^{1,3} = 0", bar_n(&[2, 2]).with(Family::BarN, &[1, 3], 2)),
            ("N̄^{2,3} = 0", bar_n(&[2, 3])),
            ("N̄^{3,3} = 0", bar_n(&[3, 3])),
        ];
        for (name, comb) in rels {
            let v = check_linear_identity(g, p, 2, &comb, cert, rng)?;
            out.push(Check::from_verdict(GROUP, format!("{name} (g=2, p={})", p.p()), &v));
        }
    }
    for r in 2..g.min(4) {
        let tuples = canonical_tuples(Family::BarN, r, gl + 2);
        let batch = FamilyBatch::new(Master::new(Family::BarN, g, p, r)?, &tuples)?;
        let rep = span_rank(&batch, cert, rng)?;
        let mut c = Check::dim(GROUP, format!("dim span N̄^ℓ, entries ≤ g+2 (g={g}, r={r}, p={})", p.p()), rep.rank, binom(g as i64, r as i64) as usize);
        c.mode = Some(rep.mode);
        if rep.mode == VerifyMode::Probabilistic {
            c.failure_bound = Some(rep.failure_bound);
        }
        out.push(c);
    }
    if g >= 2 {
        let items = from_named(tilde_m_identities(g, p, cert, rng)?);
        out.push(merge_verdicts(GROUP, format!("M̃ renumbering, telescoping, boundary and KZ (g={g}, p={})", p.p()), &items));
    }
    if g == 3 {
        let el = tilde_elimination(g, p, cert, rng)?;
        out.push(merge_verdicts(GROUP, format!("six-term M̄/M̃ relations, r=3 (g=3, p={})", p.p()), &from_named(el.six_term)));
        out.push(Check::new(
            GROUP,
            format!("M̄^ℓ expressible through M̃, r=3 (g=3, p={})", p.p()),
            el.expressible,
            format!("six-term sign {}", el.six_term_sign),
        ));
        out.push(Check::dim(GROUP, format!("dim span M̃^ℓ, r=3 (g=3, p={})", p.p()), el.tilde_span.rank, 1));
    }
    Ok(out)
}

/// T(z) kills D∧∧^{r−2}Sing and maps P_r bijectively onto Sing[2g+1−2r],
/// at random points.
pub fn satake_primitive_checks<G: rand::Rng + ?Sized>(g: usize, p: PrimeField, r: usize, points: usize, rng: &mut G) -> Result<Vec<Check>> {
    const GROUP: &str = "satake";
    let ext = point_field(p)?;
    let n = 2 * g + 1;
    let target = SingSpace::new(g, r)?;
    let lower = WedgeSpace::new(g, r - 2)?.basis_in(&ext)?;
    let (mut kills, mut bij) = (Vec::new(), Vec::new());
    for _ in 0..points {
        let pt = random_point(&ext, g, rng);
        let t = build_t(&ext, &pt.z, g, r)?;
        let d = poincare_element(&ext, &pt)?;
        let wd = wedge_power_map(&ext, n, 2, &d, r - 2, 1).ok_or_else(|| KzpError::InvalidParameters("wedge degree too large".into()))?;
        let killed = lower.iter().all(|x| t.mul_vec(&wd.mul_vec(x)).iter().all(|c| ext.is_zero(c)));
        kills.push(Check::new(GROUP, format!("T(z) kills D∧∧^{{r−2}}Sing (g={g}, r={r}, p={})", p.p()), killed, format!("{} generators", lower.len())));
        let prim = primitive_ambient(&ext, &pt, r)?;
        let image = prim.image(&t);
        let in_sing = image.basis().iter().all(|v| target.contains(&ext, v));
        let want = sing_dimension(g, r);
        let ok = prim.dim() == want && image.dim() == want && in_sing;
        bij.push(Check::new(
            GROUP,
            format!("T(z) maps P_r onto Sing[2g+1−2r] bijectively (g={g}, r={r}, p={})", p.p()),
            ok,
            format!("dim P_r {}, rank {}, target dim {want}", prim.dim(), image.dim()),
        ));
    }
    Ok(vec![merge_points(&kills), merge_points(&bij)])
}

fn satake_inner<G: rand::Rng + ?Sized>(g: usize, p: PrimeField, r: usize, cert: &Certify, points: usize, rng: &mut G) -> Result<Vec<Check>> {
    const GROUP: &str = "satake";
    let n = 2 * g + 1;
    let tag = |s: &str| format!("{s} (g={g}, r={r}, p={})", p.p());
    let mut out = Vec::new();
    let (pr, z) = z_ring(p, n);
    let t = build_t(&pr, &z, g, r)?;
    let deg = (r * (r - 1) / 2) as u32;
    out.push(Check::new(GROUP, tag("T(z) entries homogeneous of degree C(r,2)"), is_homogeneous(&t, deg), format!("degree {deg}")));
    let items = from_named(check_p_map(g, p, r, &p_map_tuples(g, r), cert, rng)?);
    out.push(merge_verdicts(GROUP, tag("T(z)·M^ℓ = N^ℓ, entries ≤ g+1"), &items));
    if g <= 3 && r <= 2 {
        let v = verify_intertwining(&p, &t, g, 2, Carrier::Wedge { r }, Carrier::Sing { r })?;
        out.push(Check::from_verdict(GROUP, tag("∇∘T = T∘∇ at κ=2"), &v));
        let proj = lift(&pr, &WedgeSpace::new(g, r)?.projector(&p)?);
        let tbar = build_tbar(&pr, &z, g, r, &proj)?;
        out.push(Check::new(GROUP, tag("T̄(z) entries homogeneous of degree C(r,2)"), is_homogeneous(&tbar, deg), format!("degree {deg}")));
        let v = verify_intertwining(&p, &tbar, g, -2, Carrier::Sing { r }, Carrier::Wedge { r })?;
        out.push(Check::from_verdict(GROUP, tag("∇∘T̄ = T̄∘∇ at κ=−2"), &v));
    }
    for k in 1..r {
        let v = cohomology_relation_check(g, p, k)?;
        out.push(Check::from_verdict(GROUP, tag(&format!("one-step cohomology relation k={k}")), &v));
    }
    if r == 2 {
        let rep = tilde_vs_bar(&Rationals, g)?;
        out.push(Check::new(GROUP, format!("T̃ proportional to T̄ over ℚ (g={g}, r=2)"), rep.passed, rep.detail));
        let (rep, named) = check_tilde_p_map(g, p, &canonical_tuples(Family::TildeM, 2, g as u32 + 1), cert, rng)?;
        let mut c = merge_verdicts(GROUP, tag("M̃^ℓ = c·T̃(z)·N̄^ℓ with one constant"), &from_named(named));
        if c.passed() && !rep.passed {
            c = Check::new(GROUP, c.name, false, rep.detail);
        } else if rep.passed {
            c.detail = format!("{}; {}", c.detail, rep.detail);
        }
        out.push(c);
    }
    if r >= 2 && p.p() as usize > n {
        out.extend(satake_primitive_checks(g, p, r, points, rng)?);
    }
    Ok(out)
}

/// Satake checks at one (g, p, r).
pub fn satake_suite<G: rand::Rng + ?Sized>(g: usize, p: PrimeField, r: usize, cert: &Certify, points: usize, rng: &mut G) -> Result<Vec<Check>> {
    if r == 0 || r > g {
        return Err(KzpError::InvalidParameters(format!("need 1 ≤ r ≤ g, got r={r}, g={g}")));
    }
    let name = format!("Satake maps (g={g}, r={r}, p={})", p.p());
    guard("satake", &name, satake_inner(g, p, r, cert, points, rng))
}

