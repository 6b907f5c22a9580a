//! Weight subspaces of L^⊗n, singular vectors, Shapovalov forms and wedge
//! powers of Sing L^⊗n[n−2].
//!
//! Tensor positions are 0-based internally: w_J with J ⊂ {0, …, n−1}.

use num_rational::BigRational;

use crate::algebra::combinat::{binom, SubsetIndex};
use crate::algebra::exterior;
use crate::algebra::matrix::Matrix;
use crate::algebra::ring::{FromRational, Rationals, Ring};
use crate::error::{KzpError, Result};

/// L^⊗n[n−2r] with basis w_J, |J| = r, in lexicographic order.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub n: usize,
    pub r: usize,
    index: SubsetIndex,
}

impl WeightSpace {
    pub fn new(n: usize, r: usize) -> Self {
        WeightSpace { n, r, index: SubsetIndex::new(n, r) }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn index(&self) -> &SubsetIndex {
        &self.index
    }

    pub fn subset(&self, k: usize) -> &[usize] {
        self.index.get(k)
    }

    pub fn position(&self, j: &[usize]) -> Option<usize> {
        self.index.position(j)
    }

    /// e: L[n−2r] → L[n−2r+2], w_J ↦ Σ_{k∈J} w_{J∖k}.
    pub fn e_matrix<R: Ring>(&self, ring: &R) -> Matrix<R> {
        let lower = WeightSpace::new(self.n, self.r.saturating_sub(1));
        let mut m = Matrix::zeros(ring.clone(), if self.r == 0 { 0 } else { lower.dim() }, self.dim());
        if self.r == 0 {
            return m;
        }
        for c in 0..self.dim() {
            let mask = self.index.mask(c);
            for &k in self.subset(c) {
                let row = lower.index.position_mask(mask & !(1 << k)).unwrap();
                m.set(row, c, ring.add(m.get(row, c), &ring.one()));
            }
        }
        m
    }

    /// f: L[n−2r] → L[n−2r−2], w_J ↦ Σ_{k∉J} w_{J∪k}.
    pub fn f_matrix<R: Ring>(&self, ring: &R) -> Matrix<R> {
        let upper = WeightSpace::new(self.n, self.r + 1);
        let mut m = Matrix::zeros(ring.clone(), upper.dim(), self.dim());
        for c in 0..self.dim() {
            let mask = self.index.mask(c);
            for k in 0..self.n {
                if mask & (1 << k) == 0 {
                    let row = upper.index.position_mask(mask | (1 << k)).unwrap();
                    m.set(row, c, ring.one());
                }
            }
        }
        m
    }

    /// h acts by the scalar n − 2r.
    pub fn h_eigenvalue(&self) -> i64 {
        self.n as i64 - 2 * self.r as i64
    }

    /// Sparse action of P^{(i,j)}: image index of each basis vector.
    pub fn permutation_images(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.dim())
            .map(|c| {
                let m = self.index.mask(c);
                let (bi, bj) = (m >> i & 1, m >> j & 1);
                let m2 = if bi != bj { m ^ (1 << i) ^ (1 << j) } else { m };
                self.index.position_mask(m2).unwrap()
            })
            .collect()
    }

    pub fn permutation_op<R: Ring>(&self, ring: &R, i: usize, j: usize) -> Result<Matrix<R>> {
        if i == j || i >= self.n || j >= self.n {
            return Err(KzpError::IndexOutOfRange(format!("transposition ({i},{j}) on n={}", self.n)));
        }
        let mut m = Matrix::zeros(ring.clone(), self.dim(), self.dim());
        for (c, row) in self.permutation_images(i, j).into_iter().enumerate() {
            m.set(row, c, ring.one());
        }
        Ok(m)
    }
}

/// S(u, v) = Σ u_J v_J: the basis w_J is orthonormal.
pub fn shapovalov<R: Ring>(ring: &R, u: &[R::Elem], v: &[R::Elem]) -> Result<R::Elem> {
    if u.len() != v.len() {
        return Err(KzpError::DimensionMismatch(format!("{} vs {}", u.len(), v.len())));
    }
    let mut acc = ring.zero();
    for (a, b) in u.iter().zip(v) {
        ring.mul_add_assign(&mut acc, a, b);
    }
    Ok(acc)
}

/// Gram matrix [S(a_i, b_j)].
pub fn gram<R: Ring>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> Matrix<R> {
    let rows = a.iter().map(|x| b.iter().map(|y| shapovalov(ring, x, y).unwrap()).collect()).collect();
    Matrix::from_rows(ring.clone(), rows, b.len())
}

/// Expected dim Sing L^⊗(2g+1)[2g+1−2r] = C(2g, r) − C(2g, r−2).
pub fn sing_dimension(g: usize, r: usize) -> usize {
    (binom(2 * g as i64, r as i64) - binom(2 * g as i64, r as i64 - 2)) as usize
}

/// Sing L^⊗n[n−2r] = ker e, basis computed over ℚ.
#[derive(Clone, Debug)]
pub struct SingSpace {
    pub g: usize,
    pub ambient: WeightSpace,
    basis: Vec<Vec<BigRational>>,
}

impl SingSpace {
    pub fn new(g: usize, r: usize) -> Result<Self> {
        if r > g {
            return Err(KzpError::InvalidParameters(format!("r={r} exceeds g={g}")));
        }
        let ambient = WeightSpace::new(2 * g + 1, r);
        let e = ambient.e_matrix(&Rationals);
        let basis = if r == 0 { vec![vec![Rationals.one()]] } else { e.kernel() };
        Ok(SingSpace { g, ambient, basis })
    }

    pub fn r(&self) -> usize {
        self.ambient.r
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_q(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    /// Basis reduced into `ring`; an exceptional-prime error if a
    /// denominator is not invertible.
    pub fn basis_in<R: FromRational>(&self, ring: &R) -> Result<Vec<Vec<R::Elem>>> {
        map_rational_vectors(ring, &self.basis, "singular-vector basis denominator")
    }

    /// Membership test: e·v = 0.
    pub fn contains<R: Ring>(&self, ring: &R, v: &[R::Elem]) -> bool {
        if self.r() == 0 {
            return true;
        }
        self.ambient.e_matrix(ring).mul_vec(v).iter().all(|x| ring.is_zero(x))
    }
}

pub(crate) fn map_rational_vectors<R: FromRational>(ring: &R, vs: &[Vec<BigRational>], what: &str) -> Result<Vec<Vec<R::Elem>>> {
    vs.iter()
        .map(|v| {
            v.iter()
                .map(|q| {
                    ring.from_rational(q).ok_or_else(|| KzpError::ExceptionalPrime {
                        p: ring.characteristic(),
                        reason: what.to_string(),
                    })
                })
                .collect()
        })
        .collect()
}

/// ∧^r of L^⊗(2g+1)[2g−1] with basis w^I = w_{i₁}∧…∧w_{i_r} (ambient), and
/// the subspace ∧^r Sing[2g−1].
#[derive(Clone, Debug)]
pub struct WedgeSpace {
    pub g: usize,
    pub r: usize,
    index: SubsetIndex,
    sing1: SingSpace,
}

impl WedgeSpace {
    pub fn new(g: usize, r: usize) -> Result<Self> {
        let sing1 = SingSpace::new(g, 1)?;
        if r > 2 * g {
            return Err(KzpError::InvalidParameters(format!("wedge degree {r} exceeds 2g={}", 2 * g)));
        }
        Ok(WedgeSpace { g, r, index: SubsetIndex::new(2 * g + 1, r), sing1 })
    }

    pub fn n(&self) -> usize {
        2 * self.g + 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.index.len()
    }

    pub fn index(&self) -> &SubsetIndex {
        &self.index
    }

    /// C(2g, r).
    pub fn dim(&self) -> usize {
        binom(2 * self.g as i64, self.r as i64) as usize
    }

    pub fn sing1(&self) -> &SingSpace {
        &self.sing1
    }

    /// Basis of ∧^r Sing[2g−1] in ambient coordinates: wedges of r-subsets of
    /// the Sing[2g−1] basis, lexicographic.
    pub fn basis_in<R: FromRational>(&self, ring: &R) -> Result<Vec<Vec<R::Elem>>> {
        let b1 = self.sing1.basis_in(ring)?;
        let sub = SubsetIndex::new(b1.len(), self.r);
        Ok(sub
            .iter()
            .map(|s| {
                let us: Vec<Vec<R::Elem>> = s.iter().map(|&k| b1[k].clone()).collect();
                exterior::wedge_vectors(ring, self.n(), &us)
            })
            .collect())
    }

    /// Orthogonal projector onto ∧^r Sing[2g−1] (∧^r of π = I − K/n).
    pub fn projector<R: FromRational>(&self, ring: &R) -> Result<Matrix<R>> {
        let n = self.n();
        let inv_n = ring.inv(&ring.from_i64(n as i64)).ok_or_else(|| KzpError::ExceptionalPrime {
            p: ring.characteristic(),
            reason: format!("p divides 2g+1 = {n}"),
        })?;
        let mut pi = Matrix::identity(ring.clone(), n);
        for i in 0..n {
            for j in 0..n {
                let v = ring.sub(pi.get(i, j), &inv_n);
                pi.set(i, j, v);
            }
        }
        Ok(exterior::wedge_power(&pi, self.r))
    }
}

/// S^{∧r}(x, y) on ambient coordinates: the w^I are orthonormal.
pub fn wedge_shapovalov<R: Ring>(ring: &R, x: &[R::Elem], y: &[R::Elem]) -> Result<R::Elem> {
    shapovalov(ring, x, y)
}

/// S^{∧r}(a₁∧…∧a_r, b₁∧…∧b_r) = det[S(a_i, b_j)].
pub fn wedge_gram<R: Ring>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> R::Elem {
    gram(ring, a, b).det()
}
