//! p-curvature of the κ = 2 KZ connection on V = Sing[2g−1] at a point.
//!
//! Everything here is fiberwise: a point z⋆ with distinct coordinates in an
//! extension of F_p, the vectors N^ℓ(z⋆), N̄^m(z⋆), the rank-one operators
//! C̃_a(v) = S(Σ z_a^{p(m−1)} N̄^m, v)·Σ z_a^{p(ℓ−1)} N^ℓ and the bases and
//! subspaces of ∧^r V built from them.

mod kernels;
mod ks;
mod oracle;
mod ortho;
mod suite;

pub use kernels::{
    alpha_beta, alpha_triple, block_positions, kernel_audit, primitive_coords, primitive_dim, wedge_pcurv, AuditOptions,
    BlockDims, KernelAudit,
};
pub use ks::{ks_from_gauss_manin, ks_matrices, ks_reduced, ks_suite, ks_wedge3_dims};
pub use oracle::{commutation_check, pcurv_direct_oracle, pcurv_oracle_on, UPoly};
pub use ortho::orthogonality_suite;
pub use suite::{block_dims, curvature_suite, kernels_suite, oracle_suite};

use serde::Serialize;

use crate::algebra::combinat::SubsetIndex;
use crate::algebra::exterior::{wedge_left_matrix, wedge_power};
use crate::algebra::matrix::{Matrix, Subspace};
use crate::algebra::ring::{ExtField, FromRational, PrimeField, Ring, Sample};
use crate::error::{KzpError, Result};
use crate::kz::random_distinct_point;
use crate::phyper::{Family, FamilyBatch, Master};
use crate::weightspace::WedgeSpace;

/// A point z⋆ together with D_a(z⋆) = ∏_{j≠a}(z⋆_a − z⋆_j).
#[derive(Clone, Debug)]
pub struct EvaluationPoint<S: Ring> {
    pub g: usize,
    pub z: Vec<S::Elem>,
    pub d: Vec<S::Elem>,
}

impl<S: Ring> EvaluationPoint<S> {
    pub fn new(s: &S, g: usize, z: Vec<S::Elem>) -> Result<Self> {
        let n = 2 * g + 1;
        if z.len() != n {
            return Err(KzpError::WrongArity { expected: n, got: z.len() });
        }
        let mut d = Vec::with_capacity(n);
        for a in 0..n {
            let mut acc = s.one();
            for j in (0..n).filter(|&j| j != a) {
                acc = s.mul(&acc, &s.sub(&z[a], &z[j]));
            }
            if s.is_zero(&acc) {
                return Err(KzpError::DegeneratePoint(format!("z_{} coincides with another coordinate", a + 1)));
            }
            d.push(acc);
        }
        Ok(EvaluationPoint { g, z, d })
    }

    pub fn n(&self) -> usize {
        2 * self.g + 1
    }
}

/// Field used for evaluation points: the smallest extension of F_p with at
/// least 2^16 elements.
pub fn point_field(p: PrimeField) -> Result<ExtField> {
    ExtField::with_min_size(p, 1 << 16)
}

pub fn random_point<S: Sample, G: rand::Rng + ?Sized>(s: &S, g: usize, rng: &mut G) -> EvaluationPoint<S> {
    let z = random_distinct_point(s, 2 * g + 1, rng);
    EvaluationPoint::new(s, g, z).expect("distinct coordinates")
}

pub fn check_prime(g: usize, p: PrimeField) -> Result<()> {
    if (p.p() as usize) <= 2 * g + 1 {
        return Err(KzpError::InvalidParameters(format!("p-curvature needs p > 2g+1, got p={}, g={g}", p.p())));
    }
    Ok(())
}

/// N^1..N^g and N̄^1..N̄^g at a point, in ambient coordinates of L^⊗n[n−2].
#[derive(Clone, Debug)]
pub struct Solutions<S: Ring> {
    pub n: Vec<Vec<S::Elem>>,
    pub nbar: Vec<Vec<S::Elem>>,
}

pub fn solutions_at<S: Ring>(s: &S, g: usize, p: PrimeField, z: &[S::Elem]) -> Result<Solutions<S>> {
    let tuples: Vec<Vec<u32>> = (1..=g as u32).map(|l| vec![l]).collect();
    let nb = FamilyBatch::new(Master::new(Family::N, g, p, 1)?, &tuples)?;
    let bb = FamilyBatch::new(Master::new(Family::BarN, g, p, 1)?, &tuples)?;
    Ok(Solutions { n: nb.eval_tuples(s, z), nbar: bb.eval_tuples(s, z) })
}

/// One p-curvature operator with its rank-one data.
#[derive(Clone, Debug)]
pub struct CurvatureOp<S: Ring> {
    pub a: usize,
    /// Σ_ℓ z_a^{p(ℓ−1)} N^ℓ
    pub k: Vec<S::Elem>,
    /// Σ_m z_a^{p(m−1)} N̄^m, read as the covector S(·, l)
    pub l: Vec<S::Elem>,
    /// C̃_a on the ambient space, K_a L_aᵀ
    pub normalized: Matrix<S>,
    /// C_a = C̃_a/(2 D_a^p); with −1/(2 D_a^p) it disagrees with ∇_a^p
    pub full: Matrix<S>,
}

impl<S: Ring> CurvatureOp<S> {
    pub fn apply_normalized(&self, s: &S, v: &[S::Elem]) -> Vec<S::Elem> {
        let mut lv = s.zero();
        for (x, y) in self.l.iter().zip(v) {
            s.mul_add_assign(&mut lv, x, y);
        }
        self.k.iter().map(|x| s.mul(x, &lv)).collect()
    }
}

fn power_sum<S: Ring>(s: &S, vs: &[Vec<S::Elem>], x: &S::Elem) -> Vec<S::Elem> {
    let mut out = vec![s.zero(); vs[0].len()];
    let mut c = s.one();
    for v in vs {
        for (o, y) in out.iter_mut().zip(v) {
            s.mul_add_assign(o, &c, y);
        }
        c = s.mul(&c, x);
    }
    out
}

/// The 2g+1 operators from the closed formula.
pub fn pcurv_explicit<S: Ring>(s: &S, p: PrimeField, pt: &EvaluationPoint<S>, sol: &Solutions<S>) -> Result<Vec<CurvatureOp<S>>> {
    check_prime(pt.g, p)?;
    let n = pt.n();
    let two = s.from_i64(2);
    (0..n)
        .map(|a| {
            let zp = s.pow(&pt.z[a], p.p() as u64);
            let k = power_sum(s, &sol.n, &zp);
            let l = power_sum(s, &sol.nbar, &zp);
            let mut m = Matrix::zeros(s.clone(), n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, s.mul(&k[i], &l[j]));
                }
            }
            let dp = s.mul(&two, &s.pow(&pt.d[a], p.p() as u64));
            let c = s.inv(&dp).ok_or_else(|| KzpError::DegeneratePoint(format!("D_{}(z) = 0", a + 1)))?;
            let full = m.scale(&c);
            Ok(CurvatureOp { a, k, l, normalized: m, full })
        })
        .collect()
}

/// The Poincaré element in ∧²(ambient), lexicographic pairs:
/// coefficient 2/(z_i − z_j)·(1/D_i + 1/D_j) on e_i∧e_j.
pub fn poincare_element<S: Ring>(s: &S, pt: &EvaluationPoint<S>) -> Result<Vec<S::Elem>> {
    let n = pt.n();
    let idx = SubsetIndex::new(n, 2);
    let inv = |x: &S::Elem| s.inv(x).ok_or_else(|| KzpError::DegeneratePoint("zero denominator in Poincaré element".into()));
    let dinv: Vec<S::Elem> = pt.d.iter().map(inv).collect::<Result<_>>()?;
    let two = s.from_i64(2);
    idx.iter()
        .map(|pair| {
            let (i, j) = (pair[0], pair[1]);
            let c = s.mul(&two, &inv(&s.sub(&pt.z[i], &pt.z[j]))?);
            Ok(s.mul(&c, &s.add(&dinv[i], &dinv[j])))
        })
        .collect()
}

/// Matrix of (ω∧)^m from ∧^r to ∧^{r+am} for ω ∈ ∧^a; `None` when the
/// target degree exceeds d.
pub fn wedge_power_map<S: Ring>(s: &S, d: usize, a: usize, omega: &[S::Elem], r: usize, m: usize) -> Option<Matrix<S>> {
    if r + a * m > d {
        return None;
    }
    let mut acc = Matrix::identity(s.clone(), SubsetIndex::new(d, r).len());
    for i in 0..m {
        acc = wedge_left_matrix(s, d, a, omega, r + a * i).mul(&acc);
    }
    Some(acc)
}

/// P_r = ker (D∧)^{g−r+1} inside ∧^r Sing[2g−1], in ambient coordinates.
pub fn primitive_ambient<S: FromRational>(s: &S, pt: &EvaluationPoint<S>, r: usize) -> Result<Subspace<S>> {
    let g = pt.g;
    let n = pt.n();
    let ws = WedgeSpace::new(g, r)?;
    let whole = Subspace::span(s.clone(), ws.ambient_dim(), &ws.basis_in(s)?);
    if r > g + 1 {
        return Ok(whole);
    }
    let d = poincare_element(s, pt)?;
    match wedge_power_map(s, n, 2, &d, r, g + 1 - r) {
        Some(m) => Ok(whole.kernel_of(&m)),
        None => Ok(whole),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisFlag {
    Preliminary,
    Good,
}

/// A basis v_1..v_g, w_1..w_g of V; coordinate index i−1 is v_i, g+i−1 is w_i.
#[derive(Clone, Debug)]
pub struct GoodBasis<S: Ring> {
    pub g: usize,
    pub flag: BasisFlag,
    /// n × 2g, columns v_1..v_g, w_1..w_g in ambient coordinates
    pub basis: Matrix<S>,
    /// x_i = S(·, N̄^i)
    pub x: Vec<Vec<S::Elem>>,
    /// D(z⋆) in ∧² coordinates of this basis
    pub poincare: Vec<S::Elem>,
    /// C̃_a in this basis
    pub ops: Vec<Matrix<S>>,
}

impl<S: Ring> GoodBasis<S> {
    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn coords(&self, u: &[S::Elem]) -> Option<Vec<S::Elem>> {
        self.basis.solve(u)
    }

    /// δ = Σ v_i∧w_i.
    pub fn delta(&self, s: &S) -> Vec<S::Elem> {
        let d = self.dim();
        let idx = SubsetIndex::new(d, 2);
        let mut out = vec![s.zero(); idx.len()];
        for i in 0..self.g {
            out[idx.position(&[i, self.g + i]).unwrap()] = s.one();
        }
        out
    }

    /// Expansion D = ε·δ + Σ_{i<j} d_ij w_i∧w_j; `None` if D has other components.
    pub fn poincare_shape(&self, s: &S) -> Option<(S::Elem, Vec<((usize, usize), S::Elem)>)> {
        let g = self.g;
        let idx = SubsetIndex::new(2 * g, 2);
        let eps = self.poincare[idx.position(&[0, g]).unwrap()].clone();
        let mut ww = Vec::new();
        for (k, pair) in idx.iter().enumerate() {
            let c = &self.poincare[k];
            let (i, j) = (pair[0], pair[1]);
            let ok = if j < g {
                s.is_zero(c)
            } else if i < g {
                if j == g + i {
                    *c == eps
                } else {
                    s.is_zero(c)
                }
            } else {
                if !s.is_zero(c) {
                    ww.push(((i - g, j - g), c.clone()));
                }
                true
            };
            if !ok {
                return None;
            }
        }
        (!s.is_zero(&eps)).then_some((eps, ww))
    }
}

fn express<S: Ring>(s: &S, basis: &Matrix<S>, x: &[Vec<S::Elem>], ops: &[CurvatureOp<S>], g: usize, pd: &[S::Elem], flag: BasisFlag) -> Result<GoodBasis<S>> {
    let d = 2 * g;
    let w2 = wedge_power(basis, 2);
    let poincare = w2.solve(pd).ok_or_else(|| KzpError::DegeneratePoint("Poincaré element outside ∧²V".into()))?;
    let mut mats = Vec::with_capacity(ops.len());
    for op in ops {
        let cols = (0..d)
            .map(|j| basis.solve(&op.apply_normalized(s, &basis.col(j))))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| KzpError::DegeneratePoint(format!("C̃_{} does not preserve V", op.a + 1)))?;
        mats.push(Matrix::from_cols(s.clone(), &cols, d));
    }
    Ok(GoodBasis { g, flag, basis: basis.clone(), x: x.to_vec(), poincare, ops: mats })
}

/// The preliminary basis: w_i = N^i, v_j solving x_i(v_j) = δ_ij inside V
/// with free coordinates set to zero.
pub fn preliminary_basis<S: Ring>(s: &S, g: usize, pt: &EvaluationPoint<S>, sol: &Solutions<S>, ops: &[CurvatureOp<S>]) -> Result<GoodBasis<S>> {
    let n = pt.n();
    let mut rows = sol.nbar.clone();
    rows.push(vec![s.one(); n]);
    let a = Matrix::from_rows(s.clone(), rows, n);
    if a.rank() != g + 1 {
        return Err(KzpError::DegeneratePoint("covectors x_i are linearly dependent".into()));
    }
    let mut cols = Vec::with_capacity(2 * g);
    for j in 0..g {
        let mut e = vec![s.zero(); g + 1];
        e[j] = s.one();
        cols.push(a.solve(&e).ok_or(KzpError::Singular)?);
    }
    cols.extend(sol.n.iter().cloned());
    let basis = Matrix::from_cols(s.clone(), &cols, n);
    if basis.rank() != 2 * g {
        return Err(KzpError::DegeneratePoint("N^1..N^g are linearly dependent".into()));
    }
    let pd = poincare_element(s, pt)?;
    express(s, &basis, &sol.nbar, ops, g, &pd, BasisFlag::Preliminary)
}

/// Correct v_i to v̄_i = v_i − Σ_{j>i} c_ij w_j so that D ∝ Σ v̄_i∧w_i.
pub fn build_good_basis<S: Ring>(s: &S, pt: &EvaluationPoint<S>, sol: &Solutions<S>, ops: &[CurvatureOp<S>]) -> Result<GoodBasis<S>> {
    let g = pt.g;
    let pre = preliminary_basis(s, g, pt, sol, ops)?;
    let (eps, ww) = pre
        .poincare_shape(s)
        .ok_or_else(|| KzpError::DegeneratePoint("Poincaré element not of the form ε·δ + Σ c w∧w".into()))?;
    let ie = s.inv(&eps).ok_or(KzpError::Singular)?;
    let mut basis = pre.basis.clone();
    let n = pt.n();
    for ((i, j), c) in ww {
        let c = s.mul(&c, &ie);
        for row in 0..n {
            let v = s.sub(basis.get(row, i), &s.mul(&c, pre.basis.get(row, g + j)));
            basis.set(row, i, v);
        }
    }
    let pd = poincare_element(s, pt)?;
    express(s, &basis, &pre.x, ops, g, &pd, BasisFlag::Good)
}

/// Everything computed at one point.
#[derive(Clone, Debug)]
pub struct PointData<S: Ring> {
    pub point: EvaluationPoint<S>,
    pub solutions: Solutions<S>,
    pub ops: Vec<CurvatureOp<S>>,
    pub basis: GoodBasis<S>,
}

pub fn point_data<S: Ring>(s: &S, p: PrimeField, point: EvaluationPoint<S>) -> Result<PointData<S>> {
    let solutions = solutions_at(s, point.g, p, &point.z)?;
    let ops = pcurv_explicit(s, p, &point, &solutions)?;
    let basis = build_good_basis(s, &point, &solutions, &ops)?;
    Ok(PointData { point, solutions, ops, basis })
}

#[cfg(test)]
mod tests;
