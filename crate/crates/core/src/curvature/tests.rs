use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::combinat::binom;
use crate::algebra::exterior::induced_derivation;
use crate::algebra::ring::Rationals;
use crate::phyper::Certify;
use crate::report::Status;
use crate::weightspace::SingSpace;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn all_pass(checks: &[crate::report::Check]) {
    for c in checks {
        assert!(c.status == Status::Pass || c.status == Status::Measured, "{} :: {}", c.name, c.detail);
    }
}

fn ints(s: &PrimeField, z: &[i64]) -> Vec<u32> {
    z.iter().map(|&x| s.from_i64(x)).collect()
}

/// t-coefficient of ∏_i (t − z_i)^e / (t − z_a), by dense expansion mod p.
fn coefficient(p: u64, z: &[i64], e: u32, a: usize, k: usize) -> u64 {
    let mut poly = vec![1u64];
    for (i, &zi) in z.iter().enumerate() {
        let reps = if i == a { e - 1 } else { e };
        for _ in 0..reps {
            let root = (p as i64 - zi.rem_euclid(p as i64)) as u64 % p;
            let mut next = vec![0u64; poly.len() + 1];
            for (j, &c) in poly.iter().enumerate() {
                next[j + 1] = (next[j + 1] + c) % p;
                next[j] = (next[j] + c * root) % p;
            }
            poly = next;
        }
    }
    poly.get(k).copied().unwrap_or(0)
}

#[test]
fn point_validation() {
    let q = Rationals;
    let z: Vec<_> = [0i64, 1, 2, 3, 4].iter().map(|&x| q.from_i64(x)).collect();
    let pt = EvaluationPoint::new(&q, 2, z.clone()).unwrap();
    assert_eq!(pt.d[0], q.from_i64(24));
    assert_eq!(pt.d[2], q.from_i64(4));
    assert!(matches!(EvaluationPoint::new(&q, 3, z.clone()), Err(KzpError::WrongArity { expected: 7, got: 5 })));
    let mut dup = z;
    dup[4] = q.from_i64(1);
    assert!(matches!(EvaluationPoint::new(&q, 2, dup), Err(KzpError::DegeneratePoint(_))));
    assert!(check_prime(2, fp(5)).is_err());
    assert!(check_prime(2, fp(7)).is_ok());
}

#[test]
fn solutions_match_coefficient_extraction() {
    let p = 13;
    let s = fp(p);
    let z = [2i64, 5, 7, 11, 3];
    let sol = solutions_at(&s, 2, s, &ints(&s, &z)).unwrap();
    for l in 1..=2usize {
        for a in 0..5 {
            let k = l * p as usize - 1;
            assert_eq!(sol.n[l - 1][a] as u64, coefficient(p, &z, (p as u32 - 1) / 2, a, k), "N^{l} at {a}");
            assert_eq!(sol.nbar[l - 1][a] as u64, coefficient(p, &z, (p as u32).div_ceil(2), a, k), "N̄^{l} at {a}");
        }
    }
}

#[test]
fn closed_formula_g1_hand_value() {
    // ∇_1^7 (e_1 − e_2) at z = (2, 3, 5), obtained by symbolic differentiation
    let s = fp(7);
    let pt = EvaluationPoint::new(&s, 1, ints(&s, &[2, 3, 5])).unwrap();
    let sol = solutions_at(&s, 1, s, &pt.z).unwrap();
    let ops = pcurv_explicit(&s, s, &pt, &sol).unwrap();
    let v = ints(&s, &[1, -1, 0]);
    assert_eq!(ops[0].full.mul_vec(&v), ints(&s, &[5, 6, 3]));
    let direct = pcurv_direct_oracle(&s, s, &pt, 0).unwrap();
    let basis = SingSpace::new(1, 1).unwrap().basis_in(&s).unwrap();
    let vb = Matrix::from_cols(s, &basis, 3);
    assert_eq!(direct, ops[0].full.mul(&vb));
}

#[test]
fn upoly_arithmetic() {
    let s = fp(11);
    let f = UPoly::<PrimeField> { c: ints(&s, &[3, 0, 2]) };
    let g = UPoly::linear(&s, &s.from_i64(4));
    let x = s.from_i64(7);
    assert_eq!(f.mul(&s, &g).eval(&s, &x), s.mul(&f.eval(&s, &x), &g.eval(&s, &x)));
    assert_eq!(f.add(&s, &g).eval(&s, &x), s.add(&f.eval(&s, &x), &g.eval(&s, &x)));
    assert_eq!(f.derivative(&s).c, ints(&s, &[0, 4]));
    assert_eq!(f.add(&s, &f.scale(&s, &s.from_i64(-1))).degree(), None);
    // x^11 has zero derivative in characteristic 11
    let mut c = vec![0u32; 12];
    c[11] = 1;
    assert_eq!(UPoly::<PrimeField> { c }.derivative(&s).degree(), None);
}

#[test]
fn oracle_agrees_with_closed_formula() {
    all_pass(&oracle_suite(2, fp(7), 1, &mut rng(3)).unwrap());
}

#[test]
fn rank_one_and_flat_kernel() {
    let p = fp(11);
    let ext = point_field(p).unwrap();
    let data = point_data(&ext, p, random_point(&ext, 3, &mut rng(5))).unwrap();
    let n = 7;
    let mut stacked = Matrix::zeros(ext.clone(), 0, n);
    for op in &data.ops {
        assert_eq!(op.normalized.rank(), 1);
        stacked = stacked.vstack(&op.normalized);
    }
    let sing = SingSpace::new(3, 1).unwrap().basis_in(&ext).unwrap();
    let v = Subspace::span(ext.clone(), n, &sing);
    let ker = v.kernel_of(&stacked);
    assert_eq!(ker.dim(), 3);
    assert!(ker.equals(&Subspace::span(ext.clone(), n, &data.solutions.n)));
}

#[test]
fn poincare_element_is_invariant() {
    let p = fp(7);
    let ext = point_field(p).unwrap();
    let data = point_data(&ext, p, random_point(&ext, 2, &mut rng(9))).unwrap();
    let d = poincare_element(&ext, &data.point).unwrap();
    let w2 = WedgeSpace::new(2, 2).unwrap().basis_in(&ext).unwrap();
    assert!(Subspace::span(ext.clone(), 10, &w2).contains(&d));
    for op in &data.ops {
        assert!(induced_derivation(&op.normalized, 2).mul_vec(&d).iter().all(|x| ext.is_zero(x)));
    }
}

#[test]
fn good_basis_normal_form() {
    let p = fp(11);
    let ext = point_field(p).unwrap();
    for g in [2usize, 3] {
        let data = point_data(&ext, p, random_point(&ext, g, &mut rng(g as u64))).unwrap();
        let gb = &data.basis;
        let (_, ww) = gb.poincare_shape(&ext).expect("ε·δ + Σ w∧w");
        assert!(ww.is_empty());
        for i in 0..g {
            assert_eq!(gb.basis.col(g + i), data.solutions.n[i]);
            for j in 0..2 * g {
                let want = if i == j { ext.one() } else { ext.zero() };
                assert_eq!(crate::kz::pairing_at(&ext, &gb.x[i], &gb.basis.col(j)), want);
            }
        }
        // C̃_a(w_j) = 0 and C̃_a(v_j) ∈ span w
        for m in &gb.ops {
            for j in 0..2 * g {
                let col = m.col(j);
                assert!(col[..g].iter().all(|x| ext.is_zero(x)));
                if j >= g {
                    assert!(col.iter().all(|x| ext.is_zero(x)));
                }
            }
        }
    }
}

#[test]
fn primitive_dimensions() {
    let p = fp(11);
    let ext = point_field(p).unwrap();
    for g in [2usize, 3] {
        let data = point_data(&ext, p, random_point(&ext, g, &mut rng(20 + g as u64))).unwrap();
        for r in 1..=g {
            let want = (binom(2 * g as i64, r as i64) - binom(2 * g as i64, r as i64 - 2)) as usize;
            assert_eq!(primitive_dim(g, r), want);
            assert_eq!(primitive_coords(&ext, &data.basis, r).unwrap().dim(), want, "g={g} r={r}");
            assert_eq!(primitive_ambient(&ext, &data.point, r).unwrap().dim(), want, "g={g} r={r}");
        }
    }
    assert_eq!(primitive_dim(2, 2), 5);
    assert!(primitive_coords(&ext, &point_data(&ext, p, random_point(&ext, 2, &mut rng(1))).unwrap().basis, 3).is_err());
}

#[test]
fn block_positions_partition() {
    for (g, r) in [(3usize, 2usize), (4, 3)] {
        let mut all: Vec<usize> = (0..=r).flat_map(|k| block_positions(g, r, k)).collect();
        all.sort();
        assert_eq!(all, (0..binom(2 * g as i64, r as i64) as usize).collect::<Vec<_>>());
        for k in 0..=r {
            let want = binom(g as i64, k as i64) * binom(g as i64, (r - k) as i64);
            assert_eq!(block_positions(g, r, k).len() as i64, want);
        }
    }
}

#[test]
fn alpha_beta_span_the_v12_kernel_g4() {
    let p = fp(11);
    let ext = point_field(p).unwrap();
    let data = point_data(&ext, p, random_point(&ext, 4, &mut rng(44))).unwrap();
    let audit = kernel_audit(&ext, &data.basis, 3, AuditOptions { primitive: false, only_k: Some(1) }).unwrap();
    let (al, be) = alpha_beta(&ext, 4);
    let span = Subspace::span(ext.clone(), audit.ops[0].cols(), &[al, be].concat());
    assert_eq!(span.dim(), 6);
    assert!(audit.block_kernels[1].equals(&span));
    assert_eq!(alpha_triple(&ext, 4).len(), 9);
}

#[test]
fn wedge_square_vanishes() {
    let p = fp(11);
    let ext = point_field(p).unwrap();
    let data = point_data(&ext, p, random_point(&ext, 3, &mut rng(8))).unwrap();
    for r in 1..=3 {
        for m in wedge_pcurv(&data.basis.ops, r) {
            assert!(m.mul(&m).is_zero(), "r={r}");
        }
    }
}

#[test]
fn kodaira_spencer_small() {
    all_pass(&ks_suite(2, fp(7), 3, 2, &mut rng(12)).unwrap());
    let q = Rationals;
    let pt = random_point(&q, 3, &mut rng(13));
    let ks = ks_matrices(&q, &pt).unwrap();
    assert_eq!(ks_wedge3_dims(&q, 3, &ks), (5, 2));
    assert_eq!(ks, ks_from_gauss_manin(&q, &pt).unwrap());
}

#[test]
fn orthogonality_r1_and_r2() {
    let cert = Certify::default();
    for r in [1usize, 2] {
        let out = orthogonality_suite(2, fp(11), r, &cert, &mut rng(r as u64)).unwrap();
        assert_eq!(out.len(), 2);
        all_pass(&out);
    }
}
