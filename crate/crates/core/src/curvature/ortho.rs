//! Shapovalov orthogonality of the κ = 2 solutions N^ℓ and the κ = −2
//! solutions N̄^m.

use crate::algebra::ring::PrimeField;
use crate::error::Result;
use crate::kz::{pairing, pairing_at, random_distinct_point, sz_bound, sz_field, VerifyMode};
use crate::phyper::{canonical_tuples, Certify, Family, FamilyBatch, Master};
use crate::report::Check;
use crate::Ring;

const GROUP: &str = "orthogonality";

/// S(N^ℓ, N̄^m) = 0 for all tuples with entries ≤ g+1, plus the negative
/// control S(N^ℓ, N^ℓ) ≠ 0 for the first nonzero ℓ.
pub fn orthogonality_suite<G: rand::Rng + ?Sized>(g: usize, p: PrimeField, r: usize, cert: &Certify, rng: &mut G) -> Result<Vec<Check>> {
    let n = 2 * g + 1;
    let lt = canonical_tuples(Family::N, r, g as u32 + 1);
    let mt = canonical_tuples(Family::BarN, r, g as u32 + 1);
    let nb = FamilyBatch::new(Master::new(Family::N, g, p, r)?, &lt)?;
    let bb = FamilyBatch::new(Master::new(Family::BarN, g, p, r)?, &mt)?;
    let label = format!("S(N^ℓ, N̄^m) = 0 for entries ≤ g+1 (g={g}, r={r}, p={})", p.p());
    let pairs = lt.len() * mt.len();
    let build: f64 = (0..lt.len()).map(|k| nb.symbolic_cost(k)).sum::<f64>() + (0..mt.len()).map(|k| bb.symbolic_cost(k)).sum::<f64>();
    let mut out = Vec::new();
    let mut symbolic = None;
    if cert.symbolic_ok(build) {
        let ns = nb.build_symbolic();
        let bs = bb.build_symbolic();
        let pair_cost: f64 = ns
            .iter()
            .flat_map(|x| bs.iter().map(move |y| x.coords.iter().zip(&y.coords).map(|(a, b)| a.len() as f64 * b.len() as f64).sum::<f64>()))
            .sum();
        if cert.symbolic_ok(build + pair_cost) {
            let bad: Vec<String> = ns
                .iter()
                .zip(&lt)
                .flat_map(|(x, l)| bs.iter().zip(&mt).filter(|(y, _)| !pairing(x, y).is_zero()).map(move |(_, m)| format!("{l:?}×{m:?}")))
                .collect();
            let mut c = Check::new(
                GROUP,
                label.clone(),
                bad.is_empty(),
                if bad.is_empty() { format!("{pairs} pairings vanish identically") } else { format!("nonzero: {}", bad.join(", ")) },
            );
            c.mode = Some(VerifyMode::Symbolic);
            symbolic = Some(c);
        }
    }
    match symbolic {
        Some(c) => out.push(c),
        None => {
            let deg = nb.plans.iter().map(|pl| pl.degree).max().unwrap_or(0) + bb.plans.iter().map(|pl| pl.degree).max().unwrap_or(0);
            let ext = sz_field(p, deg)?;
            let mut bad = Vec::new();
            for pt in 0..cert.points {
                let z = random_distinct_point(&ext, n, rng);
                let nv = nb.eval_tuples(&ext, &z);
                let bv = bb.eval_tuples(&ext, &z);
                for (x, l) in nv.iter().zip(&lt) {
                    for (y, m) in bv.iter().zip(&mt) {
                        if !ext.is_zero(&pairing_at(&ext, x, y)) {
                            bad.push(format!("{l:?}×{m:?} at point {pt}"));
                        }
                    }
                }
            }
            let mut c = Check::new(
                GROUP,
                label,
                bad.is_empty(),
                if bad.is_empty() { format!("{pairs} pairings vanish at {} random points", cert.points) } else { format!("nonzero: {}", bad.join(", ")) },
            );
            c.mode = Some(VerifyMode::Probabilistic);
            if bad.is_empty() {
                c.failure_bound = Some(sz_bound(deg, ext.order(), cert.points));
            }
            out.push(c);
        }
    }

    // negative control at a random point
    let ext = sz_field(p, 1)?;
    let z = random_distinct_point(&ext, n, rng);
    let nv = nb.eval_tuples(&ext, &z);
    let hit = nv.iter().zip(&lt).find(|(x, _)| x.iter().any(|c| !ext.is_zero(c)));
    let (ok, detail) = match hit {
        Some((x, l)) => {
            let v = pairing_at(&ext, x, x);
            (!ext.is_zero(&v), format!("S(N^{l:?}, N^{l:?}) at a random point is {}", if ext.is_zero(&v) { "zero" } else { "nonzero" }))
        }
        None => (false, "every N^ℓ vanishes".into()),
    };
    out.push(Check::new(GROUP, format!("negative control S(N^ℓ, N^ℓ) ≠ 0 (g={g}, r={r}, p={})", p.p()), ok, detail));
    Ok(out)
}
