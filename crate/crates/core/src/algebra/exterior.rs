//! Exterior powers of a finite-dimensional coordinate space.
//!
//! Basis of ∧^k R^d: e_A = e_{a₁}∧…∧e_{a_k} for sorted A, lexicographic order.

use super::combinat::SubsetIndex;
use super::matrix::Matrix;
use super::ring::Ring;

/// Sign of e_A ∧ e_B relative to e_{A∪B}; `None` if A and B meet.
pub fn wedge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // count pairs (x in A, y in B) with x > y
    let mut inv = 0u32;
    let mut bb = b;
    while bb != 0 {
        let y = bb.trailing_zeros();
        bb &= bb - 1;
        inv += (a >> (y + 1)).count_ones();
    }
    Some(if inv.is_multiple_of(2) { 1 } else { -1 })
}

/// Signed mask of inserting basis vector `b` in place of `a` inside e_A.
fn replace_sign(mask: u32, a: u32, b: u32) -> Option<(u32, i32)> {
    if a == b {
        return Some((mask, 1));
    }
    if mask & (1 << b) != 0 {
        return None;
    }
    let rest = mask & !(1 << a);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let between = rest & (((1u32 << hi) - 1) & !((1u32 << (lo + 1)) - 1));
    let sign = if between.count_ones().is_multiple_of(2) { 1 } else { -1 };
    Some((rest | (1 << b), sign))
}

fn signed<R: Ring>(ring: &R, x: &R::Elem, s: i32) -> R::Elem {
    if s > 0 {
        x.clone()
    } else {
        ring.neg(x)
    }
}

/// Matrix of the derivation X(u₁∧…∧u_k) = Σ u₁∧…∧Xu_i∧…∧u_k on ∧^k.
pub fn induced_derivation<R: Ring>(x: &Matrix<R>, k: usize) -> Matrix<R> {
    let d = x.rows();
    assert_eq!(d, x.cols());
    let ring = x.ring().clone();
    let idx = SubsetIndex::new(d, k);
    let mut out = Matrix::zeros(ring.clone(), idx.len(), idx.len());
    for col in 0..idx.len() {
        let mask = idx.mask(col);
        for &a in idx.get(col) {
            for b in 0..d {
                let c = x.get(b, a);
                if ring.is_zero(c) {
                    continue;
                }
                if let Some((m2, s)) = replace_sign(mask, a as u32, b as u32) {
                    let row = idx.position_mask(m2).unwrap();
                    let v = ring.add(out.get(row, col), &signed(&ring, c, s));
                    out.set(row, col, v);
                }
            }
        }
    }
    out
}

/// Matrix of ∧^k g: e_A ↦ g e_{a₁}∧…∧g e_{a_k}; entries are k×k minors.
pub fn wedge_power<R: Ring>(g: &Matrix<R>, k: usize) -> Matrix<R> {
    let ring = g.ring().clone();
    let src = SubsetIndex::new(g.cols(), k);
    let dst = SubsetIndex::new(g.rows(), k);
    let mut out = Matrix::zeros(ring, dst.len(), src.len());
    for c in 0..src.len() {
        let sub = g.select_cols(src.get(c));
        for rr in 0..dst.len() {
            out.set(rr, c, sub.select_rows(dst.get(rr)).det());
        }
    }
    out
}

/// Coordinates of u₁∧…∧u_k in the e_A basis.
pub fn wedge_vectors<R: Ring>(ring: &R, d: usize, us: &[Vec<R::Elem>]) -> Vec<R::Elem> {
    let k = us.len();
    let idx = SubsetIndex::new(d, k);
    if k == 0 {
        return vec![ring.one()];
    }
    let m = Matrix::from_cols(ring.clone(), us, d);
    (0..idx.len()).map(|i| m.select_rows(idx.get(i)).det()).collect()
}

/// x ∧ y for x ∈ ∧^a, y ∈ ∧^b.
pub fn wedge_product<R: Ring>(ring: &R, d: usize, a: usize, x: &[R::Elem], b: usize, y: &[R::Elem]) -> Vec<R::Elem> {
    let ia = SubsetIndex::new(d, a);
    let ib = SubsetIndex::new(d, b);
    let ic = SubsetIndex::new(d, a + b);
    assert_eq!(x.len(), ia.len());
    assert_eq!(y.len(), ib.len());
    let mut out = vec![ring.zero(); ic.len()];
    for (i, xi) in x.iter().enumerate() {
        if ring.is_zero(xi) {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if ring.is_zero(yj) {
                continue;
            }
            if let Some(s) = wedge_sign(ia.mask(i), ib.mask(j)) {
                let pos = ic.position_mask(ia.mask(i) | ib.mask(j)).unwrap();
                let t = ring.mul(xi, yj);
                out[pos] = ring.add(&out[pos], &signed(ring, &t, s));
            }
        }
    }
    out
}

/// Matrix of v ↦ ω∧v from ∧^k to ∧^{k+a}, for ω ∈ ∧^a.
pub fn wedge_left_matrix<R: Ring>(ring: &R, d: usize, a: usize, omega: &[R::Elem], k: usize) -> Matrix<R> {
    let src = SubsetIndex::new(d, k);
    let dst = SubsetIndex::new(d, k + a);
    let mut cols = Vec::with_capacity(src.len());
    for j in 0..src.len() {
        let mut e = vec![ring.zero(); src.len()];
        e[j] = ring.one();
        cols.push(wedge_product(ring, d, a, omega, k, &e));
    }
    Matrix::from_cols(ring.clone(), &cols, dst.len())
}

/// Unit vector e_A in ∧^k R^d for a sorted index list.
pub fn basis_vector<R: Ring>(ring: &R, d: usize, set: &[usize]) -> Vec<R::Elem> {
    let idx = SubsetIndex::new(d, set.len());
    let mut v = vec![ring.zero(); idx.len()];
    let (sorted, s) = super::combinat::sort_with_sign(set).expect("repeated index in wedge basis vector");
    v[idx.position(&sorted).unwrap()] = ring.from_i64(s as i64);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::PrimeField;

    #[test]
    fn wedge_sign_basic() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(1));
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
        assert_eq!(wedge_sign(0b11, 0b01), None);
        // e2 ∧ e0e1 = e0e1e2 (two transpositions)
        assert_eq!(wedge_sign(0b100, 0b011), Some(1));
    }

    #[test]
    fn derivation_matches_minor_expansion_of_exponential() {
        // derivation of X equals d/dε ∧^k(1+εX) at ε=0; check with dual-free
        // identity: ∧^k(1+X) = 1 + D(X) + (higher) for nilpotent rank-one X
        let f = PrimeField::new(101).unwrap();
        let d = 4;
        let mut x = Matrix::zeros(f, d, d);
        x.set(0, 2, 3);
        x.set(1, 2, 5);
        // X² = 0 because column 2 maps into span(e0, e1) and X kills e0, e1
        let one_plus = Matrix::identity(f, d).add(&x);
        let lhs = wedge_power(&one_plus, 2);
        let der = induced_derivation(&x, 2);
        let rhs = Matrix::identity(f, 6).add(&der);
        // ∧²(1+X) = 1 + D + ∧²X and ∧²X = 0 for rank one X
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_vectors_antisymmetric() {
        let f = PrimeField::new(7).unwrap();
        let u = vec![1, 2, 0];
        let v = vec![0, 1, 3];
        let a = wedge_vectors(&f, 3, &[u.clone(), v.clone()]);
        let b = wedge_vectors(&f, 3, &[v, u]);
        assert_eq!(a, b.iter().map(|x| f.neg(x)).collect::<Vec<_>>());
    }

    #[test]
    fn wedge_product_of_basis() {
        let f = PrimeField::new(7).unwrap();
        let e1 = basis_vector(&f, 3, &[1]);
        let e0 = basis_vector(&f, 3, &[0]);
        let p = wedge_product(&f, 3, 1, &e1, 1, &e0);
        assert_eq!(p, basis_vector(&f, 3, &[1, 0]));
        assert_eq!(p, vec![6, 0, 0]);
    }
}
