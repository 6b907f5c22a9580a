//! Direct computation of C_a = ∇_a^p on the line through z⋆ in the z_a
//! direction. Only ∂/∂z_a enters, so sections are vectors of univariate
//! rational functions P(x)/D(x)^k with D(x) = ∏_{j≠a}(x − z⋆_j).

use super::{pcurv_explicit, solutions_at, EvaluationPoint};
use crate::algebra::matrix::Matrix;
use crate::algebra::ring::{Dual, ExtField, FromRational, PrimeField, Ring};
use crate::error::{KzpError, Result};
use crate::kz::{Carrier, KZSystem};
use crate::weightspace::SingSpace;

/// Dense univariate polynomial, little-endian.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<S: Ring> {
    pub c: Vec<S::Elem>,
}

impl<S: Ring> UPoly<S> {
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(x: S::Elem) -> Self {
        UPoly { c: vec![x] }
    }

    /// x − r
    pub fn linear(s: &S, r: &S::Elem) -> Self {
        UPoly { c: vec![s.neg(r), s.one()] }
    }

    fn trim(mut self, s: &S) -> Self {
        while self.c.last().is_some_and(|x| s.is_zero(x)) {
            self.c.pop();
        }
        self
    }

    pub fn add(&self, s: &S, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => s.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => s.zero(),
            })
            .collect();
        UPoly { c }.trim(s)
    }

    pub fn scale(&self, s: &S, k: &S::Elem) -> Self {
        UPoly { c: self.c.iter().map(|x| s.mul(x, k)).collect() }.trim(s)
    }

    pub fn mul(&self, s: &S, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return UPoly::zero();
        }
        let mut c = vec![s.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if s.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                s.mul_add_assign(&mut c[i + j], a, b);
            }
        }
        UPoly { c }.trim(s)
    }

    pub fn derivative(&self, s: &S) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, x)| s.mul(&s.from_i64(i as i64), x)).collect();
        UPoly { c }.trim(s)
    }

    pub fn eval(&self, s: &S, x: &S::Elem) -> S::Elem {
        self.c.iter().rev().fold(s.zero(), |acc, a| s.add(&s.mul(&acc, x), a))
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
}

fn product<S: Ring>(s: &S, roots: impl Iterator<Item = S::Elem>) -> UPoly<S> {
    roots.fold(UPoly::constant(s.one()), |acc, r| acc.mul(s, &UPoly::linear(s, &r)))
}

/// ∇_a^p applied to a section with polynomial coordinates in x = z_a (the
/// other variables fixed at z⋆), evaluated at x = z⋆_a.
pub fn pcurv_oracle_on<S: Ring>(s: &S, p: PrimeField, pt: &EvaluationPoint<S>, a: usize, init: &[UPoly<S>]) -> Result<Vec<S::Elem>> {
    let n = pt.n();
    let sys = KZSystem::new(pt.g, 2, Carrier::Sing { r: 1 })?;
    if init.len() != sys.dim() {
        return Err(KzpError::DimensionMismatch(format!("section of length {} on a space of dim {}", init.len(), sys.dim())));
    }
    let cost = (p.p() as u64).pow(2) * (n as u64 - 1) * (n as u64).pow(2);
    const BUDGET: u64 = 10_000_000;
    if cost > BUDGET {
        return Err(KzpError::BudgetExceeded { needed: cost, budget: BUDGET });
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != a).collect();
    let d = product(s, others.iter().map(|&j| pt.z[j].clone()));
    let dd = d.derivative(s);
    let e: Vec<UPoly<S>> = others.iter().map(|&j| product(s, others.iter().filter(|&&k| k != j).map(|&k| pt.z[k].clone()))).collect();
    let omegas: Vec<Matrix<S>> = others.iter().map(|&j| sys.omega(a, j).to_matrix(s)).collect();
    let half = s.inv(&s.from_i64(2)).ok_or(KzpError::NotOddPrime(2))?;
    let mut cur = init.to_vec();
    for k in 0..p.p() as i64 {
        let mk = s.from_i64(-k);
        let mut next: Vec<UPoly<S>> = cur
            .iter()
            .map(|pi| d.mul(s, &pi.derivative(s)).add(s, &dd.mul(s, pi).scale(s, &mk)))
            .collect();
        for (ej, om) in e.iter().zip(&omegas) {
            for (row, slot) in next.iter_mut().enumerate() {
                let mut acc = UPoly::zero();
                for (col, pc) in cur.iter().enumerate() {
                    let c = om.get(row, col);
                    if !s.is_zero(c) {
                        acc = acc.add(s, &pc.scale(s, c));
                    }
                }
                if !acc.c.is_empty() {
                    *slot = slot.add(s, &ej.mul(s, &acc).scale(s, &s.neg(&half)));
                }
            }
        }
        cur = next;
    }
    let za = &pt.z[a];
    let den = s.pow(&d.eval(s, za), p.p() as u64);
    let inv = s.inv(&den).ok_or_else(|| KzpError::DegeneratePoint("D_a(z) = 0".into()))?;
    Ok(cur.iter().map(|pc| s.mul(&pc.eval(s, za), &inv)).collect())
}

/// Columns C_a(b_j) for the basis b_j of V, computed by iterating ∇_a.
pub fn pcurv_direct_oracle<S: FromRational>(s: &S, p: PrimeField, pt: &EvaluationPoint<S>, a: usize) -> Result<Matrix<S>> {
    let basis = SingSpace::new(pt.g, 1)?.basis_in(s)?;
    let n = pt.n();
    let cols = basis
        .iter()
        .map(|b| {
            let init: Vec<UPoly<S>> = b.iter().map(|x| UPoly::constant(x.clone()).trim(s)).collect();
            pcurv_oracle_on(s, p, pt, a, &init)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_cols(s.clone(), &cols, n))
}

/// [∇_a, C_b] = 0 and [C_a, C_b] = 0 on V at z⋆, with ∂_a C_b obtained from
/// the closed formula over dual numbers.
pub fn commutation_check(ext: &ExtField, p: PrimeField, pt: &EvaluationPoint<ExtField>, a: usize, b: usize) -> Result<(bool, bool)> {
    let g = pt.g;
    let n = pt.n();
    let dual = Dual::new(ext.clone());
    let zd: Vec<_> = (0..n).map(|j| (pt.z[j], if j == a { ext.one() } else { ext.zero() })).collect();
    let dpt = EvaluationPoint::new(&dual, g, zd)?;
    let sol = solutions_at(&dual, g, p, &dpt.z)?;
    let ops = pcurv_explicit(&dual, p, &dpt, &sol)?;
    let part = |m: &Matrix<Dual<ExtField>>, eps: bool| {
        let rows = (0..n).map(|i| m.row(i).iter().map(|x| if eps { x.1 } else { x.0 }).collect()).collect();
        Matrix::from_rows(ext.clone(), rows, n)
    };
    let cb = part(&ops[b].full, false);
    let dcb = part(&ops[b].full, true);
    let ca = part(&ops[a].full, false);
    let sys = KZSystem::new(g, 2, Carrier::Sing { r: 1 })?;
    let half = ext.inv(&ext.from_i64(2)).ok_or(KzpError::NotOddPrime(2))?;
    let mut comm = dcb;
    for j in (0..n).filter(|&j| j != a) {
        let om = sys.omega(a, j).to_matrix(ext);
        let c = ext.mul(&half, &ext.inv(&ext.sub(&pt.z[a], &pt.z[j])).ok_or(KzpError::Singular)?);
        let br = om.mul(&cb).sub(&cb.mul(&om));
        comm = comm.sub(&br.scale(&c));
    }
    let basis = SingSpace::new(g, 1)?.basis_in(ext)?;
    let vb = Matrix::from_cols(ext.clone(), &basis, n);
    let nabla_ok = comm.mul(&vb).is_zero();
    let cc_ok = ca.mul(&cb).sub(&cb.mul(&ca)).mul(&vb).is_zero();
    Ok((nabla_ok, cc_ok))
}
