//! Kodaira–Spencer maps on W = F¹ ⊕ H¹/F¹ with basis μ_1..μ_g, ν_1..ν_g
//! (coordinate k−1 is μ_k, g+k−1 is ν_k), and their comparison with the
//! reduced p-curvature operators in a good basis.

use super::{point_data, point_field, random_point, wedge_power_map, EvaluationPoint};
use crate::algebra::combinat::{binom, SubsetIndex};
use crate::algebra::exterior::induced_derivation;
use crate::algebra::matrix::{Matrix, Subspace};
use crate::algebra::ring::{PrimeField, Rationals, Ring};
use crate::error::{KzpError, Result};
use crate::report::{merge_points, Check};

const GROUP: &str = "kodaira-spencer";

/// KS̃_a(μ_k) = z_a^{k−1} Σ_ℓ z_a^{ℓ−1} ν_ℓ, KS̃_a(ν_k) = 0.
pub fn ks_reduced<S: Ring>(s: &S, g: usize, z: &[S::Elem]) -> Vec<Matrix<S>> {
    z.iter()
        .map(|za| {
            let pw: Vec<S::Elem> = (0..g).map(|e| s.pow(za, e as u64)).collect();
            let mut m = Matrix::zeros(s.clone(), 2 * g, 2 * g);
            for k in 0..g {
                for l in 0..g {
                    m.set(g + l, k, s.mul(&pw[k], &pw[l]));
                }
            }
            m
        })
        .collect()
}

/// KS_a = −KS̃_a/D_a.
pub fn ks_matrices<S: Ring>(s: &S, pt: &EvaluationPoint<S>) -> Result<Vec<Matrix<S>>> {
    ks_reduced(s, pt.g, &pt.z)
        .into_iter()
        .zip(&pt.d)
        .map(|(m, d)| Ok(m.scale(&s.neg(&s.inv(d).ok_or(KzpError::Singular)?))))
        .collect()
}

/// KS_a assembled from ∇_a[μ_k] = ½(Σ_{j<k} z_a^{k−1−j}[μ_j] + z_a^{k−1}[ω_a]),
/// the projection γ ↦ Σ_ℓ (γ, μ_ℓ) ν_ℓ, the isotropy (μ_j, μ_ℓ) = 0 and
/// ([ω_a], [μ_ℓ]) = −2 z_a^{ℓ−1}/D_a.
pub fn ks_from_gauss_manin<S: Ring>(s: &S, pt: &EvaluationPoint<S>) -> Result<Vec<Matrix<S>>> {
    let g = pt.g;
    let half = s.inv(&s.from_i64(2)).ok_or(KzpError::NotOddPrime(2))?;
    let mut out = Vec::new();
    for (za, da) in pt.z.iter().zip(&pt.d) {
        let dinv = s.inv(da).ok_or(KzpError::Singular)?;
        let om_mu: Vec<S::Elem> = (0..g).map(|l| s.mul(&s.from_i64(-2), &s.mul(&s.pow(za, l as u64), &dinv))).collect();
        let mut m = Matrix::zeros(s.clone(), 2 * g, 2 * g);
        for k in 1..=g {
            // the μ_j terms of ∇[μ_k] pair to zero with every μ_ℓ
            let om = s.mul(&half, &s.pow(za, (k - 1) as u64));
            for (l, c) in om_mu.iter().enumerate() {
                m.set(g + l, k - 1, s.mul(&om, c));
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// (dim ∩ ker on ∧³W, dim ∩ ker on the primitive part ker (P∧)^{g−2}),
/// P = Σ ν_k∧μ_k.
pub fn ks_wedge3_dims<S: Ring>(s: &S, g: usize, ops: &[Matrix<S>]) -> (usize, usize) {
    let d = 2 * g;
    let dim = SubsetIndex::new(d, 3).len();
    let mut stacked = Matrix::zeros(s.clone(), 0, dim);
    for op in ops {
        stacked = stacked.vstack(&induced_derivation(op, 3));
    }
    let whole = Subspace::whole(s.clone(), dim);
    let ker = whole.kernel_of(&stacked);
    let i2 = SubsetIndex::new(d, 2);
    let mut pe = vec![s.zero(); i2.len()];
    for k in 0..g {
        // ν_k∧μ_k = −μ_k∧ν_k
        pe[i2.position(&[k, g + k]).unwrap()] = s.from_i64(-1);
    }
    let prim = match wedge_power_map(s, d, 2, &pe, 3, g.saturating_sub(2)) {
        Some(m) => whole.kernel_of(&m),
        None => whole,
    };
    (ker.dim(), ker.intersect(&prim).dim())
}

/// Identification with C̃_a at `points` ext-field points (genus `g_ident`,
/// prime p), then ∧³W kernel dimensions over ℚ for genus `g3`.
pub fn ks_suite<G: rand::Rng + ?Sized>(g_ident: usize, p: PrimeField, g3: usize, points: usize, rng: &mut G) -> Result<Vec<Check>> {
    let ext = point_field(p)?;
    let mut ident = Vec::new();
    let name = format!("KS̃_a = C̃_a under μ→v, ν→w, z→z^p (g={g_ident}, p={})", p.p());
    for _ in 0..points {
        let pt = random_point(&ext, g_ident, rng);
        let zp: Vec<_> = pt.z.iter().map(|x| ext.pow(x, p.p() as u64)).collect();
        let ks = ks_reduced(&ext, g_ident, &zp);
        let ok = match point_data(&ext, p, pt) {
            Ok(data) => data.basis.ops.iter().zip(&ks).all(|(c, k)| c.sub(k).is_zero()),
            Err(e) => {
                ident.push(Check::exceptional(GROUP, name.clone(), e.to_string()));
                continue;
            }
        };
        ident.push(Check::new(GROUP, name.clone(), ok, "entrywise in the good basis"));
    }
    let mut out = vec![merge_points(&ident)];

    let q = Rationals;
    let mut gm = Vec::new();
    let mut w3 = Vec::new();
    let mut wp = Vec::new();
    let gi = g3 as i64;
    for _ in 0..points {
        let pt = random_point(&q, g3, rng);
        let ks = ks_matrices(&q, &pt)?;
        let from_gm = ks_from_gauss_manin(&q, &pt)?;
        let red = ks_reduced(&q, g3, &pt.z);
        let same = ks.iter().zip(&from_gm).all(|(a, b)| a.sub(b).is_zero());
        let null_nu = ks.iter().all(|m| (g3..2 * g3).all(|c| m.col(c).iter().all(|x| q.is_zero(x))));
        let same_rank = ks.iter().zip(&red).all(|(a, b)| a.rank() == b.rank());
        gm.push(Check::new(
            GROUP,
            format!("closed form of KS_a from the Gauss–Manin derivative (g={g3}, ℚ)"),
            same && null_nu && same_rank,
            "KS_a kills ν, matches −KS̃_a/D_a",
        ));
        let (kd, pd) = ks_wedge3_dims(&q, g3, &ks);
        w3.push(Check::dim(GROUP, format!("dim ∩ ker KS_a on ∧³W (g={g3}, ℚ)"), kd, (binom(gi, 3) + 2 * gi - 2) as usize));
        wp.push(Check::dim(GROUP, format!("dim ∩ ker KS_a on primitive ∧³W (g={g3}, ℚ)"), pd, (binom(gi, 3) + gi - 2) as usize));
    }
    out.push(merge_points(&gm));
    out.push(merge_points(&w3));
    out.push(merge_points(&wp));
    Ok(out)
}
