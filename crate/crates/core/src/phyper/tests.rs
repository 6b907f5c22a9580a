use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::relations::*;
use super::*;
use crate::algebra::ring::ExtField;
use crate::kz::{kz_apply, Clearing};
use crate::weightspace::{SingSpace, WeightSpace, WedgeSpace};

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// Literal master form in t and z, expanded term by term.
fn master_form_expanded(family: Family, g: usize, p: PrimeField, idx: &[usize]) -> MultiPoly<PrimeField> {
    let n = 2 * g + 1;
    let r = idx.len();
    let l = Layout::new(r, n).unwrap();
    let m = family.exponent(p.p());
    let t = |j| MultiPoly::t(p, l, j);
    let z = |a| MultiPoly::z(p, l, a);
    let mut prod = MultiPoly::one(p, l);
    for (j, &i) in idx.iter().enumerate() {
        let mut f = t(j).sub(&z(i)).pow(m - 1);
        for a in 0..n {
            if a != i {
                f = f.mul(&t(j).sub(&z(a)).pow(m));
            }
        }
        prod = prod.mul(&f);
    }
    let mut pre = MultiPoly::one(p, l);
    for i in 0..r {
        for j in i + 1..r {
            let h = match family {
                Family::N => t(i).sub(&t(j)),
                Family::BarN => t(i).sub(&t(j)).pow(p.p() - 1),
                Family::TildeM => t(i).pow(p.p()).sub(&t(j).pow(p.p())),
                _ => MultiPoly::one(p, l),
            };
            pre = pre.mul(&h);
        }
    }
    match family {
        Family::N => pre.mul(&prod).antisymmetrize_t(),
        Family::BarN => pre.mul(&prod).symmetrize_t(),
        _ => pre.mul(&prod.antisymmetrize_t()),
    }
}

#[test]
fn prefactor_terms() {
    assert_eq!(Family::N.prefactor(7, 2), vec![(vec![0, 1], 6), (vec![1, 0], 1)]);
    let bar = Family::BarN.prefactor(7, 2);
    assert_eq!(bar.len(), 7);
    assert!(bar.iter().all(|(e, c)| e[0] + e[1] == 6 && *c == 1));
    assert_eq!(Family::M.prefactor(7, 3), vec![(vec![0, 0, 0], 1)]);
    // Vandermonde in t^p has r! terms
    assert_eq!(Family::TildeM.prefactor(5, 3).len(), 6);
}

#[test]
fn symbolic_slice_matches_expansion() {
    let p = fp(7);
    let n = 5;
    let m = 3;
    let l = Layout::new(1, n).unwrap();
    for i in [0, 3] {
        let mut f = MultiPoly::t(p, l, 0).sub(&MultiPoly::z(p, l, i)).pow(m - 1);
        for a in 0..n {
            if a != i {
                f = f.mul(&MultiPoly::t(p, l, 0).sub(&MultiPoly::z(p, l, a)).pow(m));
            }
        }
        for e in [0, 6, 13, 14, 15] {
            let expect = f.t_coefficient(&[e]).unwrap();
            assert_eq!(symbolic_slice(p, n, m, i, e), expect, "i={i} e={e}");
            assert!(slice_size(n, m, e) >= expect.len() as f64);
        }
    }
}

#[test]
fn point_slices_match_symbolic() {
    let p = fp(11);
    let n = 5;
    let m = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z = crate::kz::random_distinct_point(&p, n, &mut rng);
    let sl = slices_at(&p, &z, m);
    for i in 0..n {
        for e in 0..n as u32 * m {
            assert_eq!(sl[i][e as usize], symbolic_slice(p, n, m, i, e).eval(&z));
        }
    }
}

#[test]
fn p_integral_of_expanded_form_g2_p7() {
    let p = fp(7);
    let form = master_form_expanded(Family::N, 2, p, &[0]);
    let c = form.p_integral(&[1]).unwrap();
    assert!(!c.is_zero());
    // ((p−1)/2)(2g+1) − 1 − (p−1) = 8
    assert_eq!(c.homogeneous_degree(), Some(8));
    let v = build_solution(Family::N, 2, p, 1, &[1]).unwrap();
    assert_eq!(v.coords[0], c);
}

#[test]
fn all_families_match_expanded_forms_r2() {
    let p = fp(5);
    let g = 2;
    let sets = WeightSpace::new(5, 2);
    for family in Family::ALL {
        for ell in [[1u32, 2], [2, 1], [2, 2], [1, 3]] {
            let v = build_solution(family, g, p, 2, &ell).unwrap();
            for k in [0, 4, 9] {
                let idx = sets.subset(k).to_vec();
                let expect = master_form_expanded(family, g, p, &idx).p_integral(&ell).unwrap();
                assert_eq!(v.coords[k], expect, "{family} ℓ={ell:?} I={idx:?}");
            }
        }
    }
}

#[test]
fn generic_point_path_equals_composition_path() {
    let p = fp(7);
    let g = 2;
    for family in [Family::N, Family::BarN, Family::TildeM] {
        let master = Master::new(family, g, p, 2).unwrap();
        let batch = FamilyBatch::new(master, &[vec![1, 2], vec![2, 3]]).unwrap();
        let ring = PolyRing::new(p, Layout::z_only(5));
        let z = ring.vars();
        let generic = batch.eval_tuples(&ring, &z);
        let sym = batch.build_symbolic();
        for (a, b) in generic.iter().zip(&sym) {
            assert_eq!(a, &b.coords, "{family}");
        }
    }
}

#[test]
fn solutions_solve_kz_symbolically_g2_p7() {
    let p = fp(7);
    let g = 2;
    let cl = Clearing::new(&p, 5);
    for family in Family::ALL {
        for r in 1..=2 {
            let master = Master::new(family, g, p, r).unwrap();
            let sys = master.kz_system().unwrap();
            for ell in canonical_tuples(family, r, 4) {
                let v = build_solution(family, g, p, r, &ell).unwrap();
                for i in 0..5 {
                    assert!(kz_apply(&sys, &cl, i, &v).unwrap().is_zero(), "{family} r={r} ℓ={ell:?} i={i}");
                }
            }
        }
    }
}

#[test]
fn partial_fractions_agree_with_cleared_form() {
    let p = fp(7);
    let cl = Clearing::new(&p, 5);
    for family in Family::ALL {
        for r in 1..=2 {
            let sys = Master::new(family, 2, p, r).unwrap().kz_system().unwrap();
            for ell in canonical_tuples(family, r, 3) {
                let v = build_solution(family, 2, p, r, &ell).unwrap();
                assert!(verify_symbolic(&sys, &v, u64::MAX).unwrap().passed, "{family} r={r} ℓ={ell:?}");
                if v.is_zero() {
                    continue;
                }
                // a solution plus z_1 z_2² in one coordinate is not a solution
                let mut w = v.clone();
                let l = w.coords[0].layout();
                let bump = MultiPoly::z(p, l, 0).mul(&MultiPoly::z(p, l, 1).pow(2));
                w.coords[1] = w.coords[1].add(&bump);
                let cleared = (0..5).any(|i| !kz_apply(&sys, &cl, i, &w).unwrap().is_zero());
                assert!(cleared);
                assert!(!verify_symbolic(&sys, &w, u64::MAX).unwrap().passed, "{family} r={r} ℓ={ell:?}");
            }
        }
    }
}

#[test]
fn wrong_kappa_is_detected() {
    let p = fp(7);
    let v = build_solution(Family::N, 2, p, 1, &[1]).unwrap();
    let sys = KZSystem::new(2, -2, Carrier::Sing { r: 1 }).unwrap();
    assert!(!verify_symbolic(&sys, &v, u64::MAX).unwrap().passed);
}

#[test]
fn pointwise_and_symbolic_verdicts_agree() {
    let p = fp(7);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let master = Master::new(Family::BarN, 2, p, 2).unwrap();
    let batch = FamilyBatch::new(master, &canonical_tuples(Family::BarN, 2, 4)).unwrap();
    let sys = master.kz_system().unwrap();
    assert!(verify_pointwise(&sys, p, &batch, 32, &mut rng).unwrap().passed);
    let wrong = KZSystem::new(2, 2, Carrier::Sing { r: 2 }).unwrap();
    let one = FamilyBatch::new(master, &[vec![1, 3]]).unwrap();
    assert!(!verify_pointwise(&wrong, p, &one, 32, &mut rng).unwrap().passed);
}

#[test]
fn verify_family_modes() {
    let p = fp(7);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let master = Master::new(Family::M, 2, p, 2).unwrap();
    let batch = FamilyBatch::new(master, &canonical_tuples(Family::M, 2, 4)).unwrap();
    for mode in [CheckMode::Symbolic, CheckMode::Probabilistic, CheckMode::Auto] {
        let cert = Certify { mode, ..Certify::default() };
        let vs = verify_family(&batch, &cert, &mut rng).unwrap();
        assert!(vs.iter().all(|v| v.passed), "{mode:?}");
        if mode == CheckMode::Probabilistic {
            assert!(vs.iter().any(|v| v.mode == VerifyMode::Probabilistic));
        }
    }
}

#[test]
fn ell_symmetry() {
    let p = fp(7);
    for family in Family::ALL {
        let a = build_solution(family, 2, p, 2, &[1, 2]).unwrap();
        let b = build_solution(family, 2, p, 2, &[2, 1]).unwrap();
        if family.ell_symmetric() {
            assert_eq!(a, b, "{family}");
        } else {
            assert_eq!(a, b.scale(&p.neg(&1)), "{family}");
        }
    }
}

#[test]
fn homogeneous_degree_formula() {
    let p = fp(7);
    for r in 1..=2usize {
        for ell in canonical_tuples(Family::N, r, 2) {
            let v = build_solution(Family::N, 2, p, r, &ell).unwrap();
            let sum: i64 = ell.iter().map(|&l| 7 * l as i64 - 1).sum();
            let expect = 3 * 5 * r as i64 + (r * (r - 1) / 2) as i64 - r as i64 - sum;
            for c in v.coords.iter().filter(|c| !c.is_zero()) {
                assert_eq!(c.homogeneous_degree(), Some(expect as u32));
            }
        }
    }
}

#[test]
fn vectors_lie_in_singular_carriers() {
    let p = fp(7);
    let ext = ExtField::with_min_size(p, 1 << 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let z = crate::kz::random_distinct_point(&ext, 5, &mut rng);
    for r in 1..=2 {
        let sing = SingSpace::new(2, r).unwrap();
        let wedge = WedgeSpace::new(2, r).unwrap();
        let wb = Subspace::span(ext.clone(), wedge.ambient_dim(), &wedge.basis_in(&ext).unwrap());
        for family in Family::ALL {
            let batch = FamilyBatch::new(Master::new(family, 2, p, r).unwrap(), &canonical_tuples(family, r, 3)).unwrap();
            for v in batch.eval_tuples(&ext, &z) {
                match family.carrier(r) {
                    Carrier::Sing { .. } => assert!(sing.contains(&ext, &v), "{family} r={r}"),
                    Carrier::Wedge { .. } => assert!(wb.contains(&v), "{family} r={r}"),
                }
            }
        }
    }
}

use crate::algebra::matrix::Subspace;

#[test]
fn n_vanishes_beyond_g() {
    let p = fp(7);
    for ell in [3u32, 4] {
        assert!(build_solution(Family::N, 2, p, 1, &[ell]).unwrap().is_zero());
    }
    assert!(!build_solution(Family::N, 2, p, 1, &[2]).unwrap().is_zero());
}

#[test]
fn bar_n_relations_g2() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cert = Certify { mode: CheckMode::Symbolic, ..Certify::default() };
    for p in [7, 11] {
        let p = fp(p);
        let id = |c: Combination| check_linear_identity(2, p, 2, &c, &cert, &mut ChaCha8Rng::seed_from_u64(0)).unwrap().passed;
        let b = |l: [i64; 2]| Combination::new().with(Family::BarN, &l, 1);
        assert!(id(b([1, 1])));
        assert!(id(b([1, 2])));
        assert!(id(b([2, 3])));
        assert!(id(b([3, 3])));
        assert!(id(b([2, 2]).with(Family::BarN, &[1, 3], 2)));
        assert!(!id(b([1, 3])));
        let span = span_rank(
            &FamilyBatch::new(Master::new(Family::BarN, 2, p, 2).unwrap(), &canonical_tuples(Family::BarN, 2, 4)).unwrap(),
            &cert,
            &mut rng,
        )
        .unwrap();
        assert_eq!(span.rank, 1);
        assert!(span.exact);
    }
}

#[test]
fn renumbering_examples_r2() {
    assert_eq!(
        renumber_tilde(&[2, 3]),
        Combination::new().with(Family::BarM, &[1, 3], 1).with(Family::BarM, &[2, 2], -1).normalized()
    );
    assert_eq!(renumber_tilde(&[1, 3]), Combination::new().with(Family::BarM, &[1, 2], -1));
    assert_eq!(renumber_tilde(&[2, 2]), Combination::new().with(Family::BarM, &[1, 2], 2));
}

#[test]
fn tilde_m_identities_g2_p7() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let res = tilde_m_identities(2, fp(7), &Certify::default(), &mut rng).unwrap();
    for n in &res {
        assert!(n.verdict.passed, "{}: {}", n.name, n.verdict.detail);
    }
    assert!(res.len() > 30);
}

#[test]
fn linear_independence_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cert = Certify::default();
    let rep = check_linear_independence(Family::N, 2, fp(7), 2, &cert, &mut rng).unwrap();
    assert_eq!(rep.rank, 1);
    let rep = check_linear_independence(Family::BarN, 2, fp(7), 1, &cert, &mut rng).unwrap();
    assert_eq!(rep.rank, 2);
    assert!(rep.exact);
}
