//! KZ connections ∇_i = ∂_i − (1/κ) Σ_{j≠i} (P^{(i,j)} − 1)/(z_i − z_j) on a
//! singular carrier Sing L^⊗n[n−2r] or a wedge carrier ∧^r L^⊗n[n−2].
//!
//! Both carriers have ambient basis indexed by r-subsets of {0, …, n−1}.
//! Symbolic checks use partial fractions: Σ_j Ω_ij v/(z_i − z_j) is a
//! polynomial iff every Ω_ij v vanishes on z_i = z_j, and then ∇_i v = 0 iff
//! κ∂_i v is the sum of the exact quotients. The cleared form, multiplied by
//! D_i = ∏_{j≠i}(z_i − z_j), is kept as `kz_apply`.

use serde::Serialize;

use crate::algebra::exterior;
use crate::algebra::matrix::Matrix;
use rustc_hash::FxHashMap;

use crate::algebra::poly::{Layout, Mono, MultiPoly};
use crate::algebra::ring::{Dual, ExtElem, ExtField, PrimeField, Rationals, Ring, Sample};
use crate::error::{KzpError, Result};
use crate::weightspace::{shapovalov, WeightSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Sing { r: usize },
    Wedge { r: usize },
}

impl Carrier {
    pub fn r(&self) -> usize {
        match *self {
            Carrier::Sing { r } | Carrier::Wedge { r } => r,
        }
    }
}

/// Column-sparse integer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    pub dim: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseOp {
    pub fn to_matrix<R: Ring>(&self, ring: &R) -> Matrix<R> {
        let mut m = Matrix::zeros(ring.clone(), self.dim, self.dim);
        for (c, col) in self.cols.iter().enumerate() {
            for &(row, v) in col {
                m.set(row, c, ring.add(m.get(row, c), &ring.from_i64(v)));
            }
        }
        m
    }

    /// out += coef · (self · v)
    pub fn apply_add<R: Ring>(&self, ring: &R, v: &[R::Elem], coef: &R::Elem, out: &mut [R::Elem]) {
        for (c, col) in self.cols.iter().enumerate() {
            if ring.is_zero(&v[c]) {
                continue;
            }
            let cv = ring.mul(coef, &v[c]);
            for &(row, a) in col {
                let t = ring.mul(&cv, &ring.from_i64(a));
                ring.add_assign(&mut out[row], &t);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct KZSystem {
    pub g: usize,
    pub n: usize,
    pub kappa: i64,
    pub carrier: Carrier,
    /// Ω_{ij} = P^{(i,j)} − 1 (acting as derivation on wedge carriers), i < j.
    omega: Vec<SparseOp>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * n + b
}

impl KZSystem {
    pub fn new(g: usize, kappa: i64, carrier: Carrier) -> Result<Self> {
        if kappa != 2 && kappa != -2 {
            return Err(KzpError::InvalidParameters(format!("kappa must be ±2, got {kappa}")));
        }
        let n = 2 * g + 1;
        let r = carrier.r();
        if r > n {
            return Err(KzpError::InvalidParameters(format!("r={r} exceeds n={n}")));
        }
        let ws = WeightSpace::new(n, r);
        let dim = ws.dim();
        let empty = SparseOp { dim, cols: vec![Vec::new(); dim] };
        let mut omega = vec![empty; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let op = match carrier {
                    Carrier::Sing { .. } => {
                        let img = ws.permutation_images(i, j);
                        let cols = img
                            .iter()
                            .enumerate()
                            .map(|(c, &row)| if row == c { Vec::new() } else { vec![(row, 1), (c, -1)] })
                            .collect();
                        SparseOp { dim, cols }
                    }
                    Carrier::Wedge { .. } => {
                        let l1 = WeightSpace::new(n, 1);
                        let p = l1.permutation_op(&Rationals, i, j)?;
                        let x = p.sub(&Matrix::identity(Rationals, n));
                        let d = exterior::induced_derivation(&x, r);
                        let cols = (0..dim)
                            .map(|c| {
                                (0..dim)
                                    .filter_map(|row| {
                                        let v = d.get(row, c);
                                        (!Rationals.is_zero(v)).then(|| (row, v.to_integer().try_into().unwrap()))
                                    })
                                    .collect()
                            })
                            .collect();
                        SparseOp { dim, cols }
                    }
                };
                omega[pair_index(n, i, j)] = op;
            }
        }
        Ok(KZSystem { g, n, kappa, carrier, omega })
    }

    pub fn dim(&self) -> usize {
        self.omega[pair_index(self.n, 0, 1)].dim
    }

    pub fn omega(&self, i: usize, j: usize) -> &SparseOp {
        assert_ne!(i, j);
        &self.omega[pair_index(self.n, i, j)]
    }

    pub fn dual_system(&self) -> Self {
        KZSystem { kappa: -self.kappa, ..self.clone() }
    }

    fn inv_kappa<R: Ring>(&self, ring: &R) -> R::Elem {
        ring.inv(&ring.from_i64(self.kappa)).expect("κ = ±2 invertible in odd characteristic")
    }

    /// Residue of ∇_i at a point: ∂v − (1/κ) Σ_j Ω_ij v/(z_i − z_j).
    pub fn residual_at<R: Ring>(&self, ring: &R, i: usize, z: &[R::Elem], v: &[R::Elem], dv: &[R::Elem]) -> Option<Vec<R::Elem>> {
        let mut out = dv.to_vec();
        let k = ring.neg(&self.inv_kappa(ring));
        for j in 0..self.n {
            if j == i {
                continue;
            }
            let d = ring.inv(&ring.sub(&z[i], &z[j]))?;
            self.omega(i, j).apply_add(ring, v, &ring.mul(&k, &d), &mut out);
        }
        Some(out)
    }
}

/// A vector whose coordinates are polynomials in z.
#[derive(Clone, Debug)]
pub struct PolyVector<R: Ring> {
    pub coords: Vec<MultiPoly<R>>,
}

impl<R: Ring> PartialEq for PolyVector<R> {
    fn eq(&self, o: &Self) -> bool {
        self.coords == o.coords
    }
}

impl<R: Ring> PolyVector<R> {
    pub fn new(coords: Vec<MultiPoly<R>>) -> Self {
        PolyVector { coords }
    }

    pub fn zero(ring: &R, layout: Layout, dim: usize) -> Self {
        PolyVector { coords: vec![MultiPoly::zero(ring.clone(), layout); dim] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn term_count(&self) -> usize {
        self.coords.iter().map(|c| c.len()).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        PolyVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        PolyVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        PolyVector { coords: self.coords.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, f: &MultiPoly<R>) -> Self {
        PolyVector { coords: self.coords.iter().map(|a| a.mul(f)).collect() }
    }

    pub fn derivative(&self, v: usize) -> Self {
        PolyVector { coords: self.coords.iter().map(|a| a.derivative(v)).collect() }
    }

    pub fn degree_bound(&self) -> u32 {
        self.coords.iter().filter_map(|c| c.total_degree()).max().unwrap_or(0)
    }

    /// Apply a sparse integer operator coordinatewise.
    pub fn apply_sparse(&self, op: &SparseOp) -> Self {
        let ring = self.coords[0].ring().clone();
        let layout = self.coords[0].layout();
        let mut out = vec![MultiPoly::zero(ring.clone(), layout); op.dim];
        for (c, col) in op.cols.iter().enumerate() {
            if self.coords[c].is_zero() {
                continue;
            }
            for &(row, a) in col {
                let t = self.coords[c].scale(&ring.from_i64(a));
                out[row].add_assign(&t);
            }
        }
        PolyVector { coords: out }
    }

}

/// Things that can be evaluated at points of any ring of characteristic p.
pub trait Section {
    fn dim(&self) -> usize;
    /// Upper bound on the total degree of each coordinate.
    fn degree_bound(&self) -> u32;
    /// Coordinates at z; `embed` maps F_p residues into `s`.
    fn eval<S: Ring>(&self, s: &S, embed: &dyn Fn(u32) -> S::Elem, z: &[S::Elem]) -> Vec<S::Elem>;
}

impl Section for PolyVector<PrimeField> {
    fn dim(&self) -> usize {
        self.coords.len()
    }
    fn degree_bound(&self) -> u32 {
        PolyVector::degree_bound(self)
    }
    fn eval<S: Ring>(&self, s: &S, embed: &dyn Fn(u32) -> S::Elem, z: &[S::Elem]) -> Vec<S::Elem> {
        self.coords.iter().map(|c| c.eval_in(s, |a| embed(*a), z)).collect()
    }
}

/// z-linear forms and products used for clearing denominators.
pub struct Clearing<R: Ring> {
    /// D_i = ∏_{j≠i}(z_i − z_j)
    pub d: Vec<MultiPoly<R>>,
    /// E_{ij} = ∏_{k≠i,j}(z_i − z_k), indexed i*n+j
    pub e: Vec<MultiPoly<R>>,
}

impl<R: Ring> Clearing<R> {
    pub fn new(ring: &R, n: usize) -> Self {
        let l = Layout::z_only(n);
        let diff = |i: usize, j: usize| MultiPoly::z(ring.clone(), l, i).sub(&MultiPoly::z(ring.clone(), l, j));
        let mut d = Vec::with_capacity(n);
        let mut e = vec![MultiPoly::zero(ring.clone(), l); n * n];
        for i in 0..n {
            let mut di = MultiPoly::one(ring.clone(), l);
            for j in 0..n {
                if j != i {
                    di = di.mul(&diff(i, j));
                }
            }
            d.push(di);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let mut eij = MultiPoly::one(ring.clone(), l);
                for k in 0..n {
                    if k != i && k != j {
                        eij = eij.mul(&diff(i, k));
                    }
                }
                e[i * n + j] = eij;
            }
        }
        Clearing { d, e }
    }
}

/// D_i·∇_i v as a polynomial vector.
pub fn kz_apply<R: Ring>(sys: &KZSystem, clearing: &Clearing<R>, i: usize, v: &PolyVector<R>) -> Result<PolyVector<R>> {
    if i >= sys.n {
        return Err(KzpError::IndexOutOfRange(format!("i={i} with n={}", sys.n)));
    }
    if v.dim() != sys.dim() {
        return Err(KzpError::DimensionMismatch(format!("vector dim {} vs carrier {}", v.dim(), sys.dim())));
    }
    let ring = v.coords[0].ring().clone();
    let dv = v.derivative(i);
    let mut out = dv.mul_poly(&clearing.d[i]);
    let k = ring.neg(&sys.inv_kappa(&ring));
    for j in 0..sys.n {
        if j == i {
            continue;
        }
        let w = v.apply_sparse(sys.omega(i, j));
        if w.is_zero() {
            continue;
        }
        out = out.add(&w.mul_poly(&clearing.e[i * sys.n + j]).scale(&k));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Symbolic,
    Probabilistic,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub mode: VerifyMode,
    pub points: usize,
    /// Upper bound on the probability that a false identity passed.
    pub failure_bound: f64,
    pub detail: String,
}

/// Hash updates needed by [`verify_symbolic`].
pub fn symbolic_cost<R: Ring>(sys: &KZSystem, v: &PolyVector<R>) -> u64 {
    let n = sys.n as u64;
    let per_var = v.degree_bound() as u64 / n + 2;
    v.term_count() as u64 * n * (n - 1) * 2 * per_var
}

fn accumulate<R: Ring>(ring: &R, map: &mut FxHashMap<Mono, R::Elem>, m: Mono, c: &R::Elem) {
    let e = map.entry(m).or_insert_with(|| ring.zero());
    *e = ring.add(e, c);
}

fn first_nonzero<R: Ring>(ring: &R, maps: &[FxHashMap<Mono, R::Elem>]) -> Option<usize> {
    maps.iter().position(|m| m.values().any(|c| !ring.is_zero(c)))
}

/// Exact check of ∇_i v = 0 for every i.
pub fn verify_symbolic<R: Ring>(sys: &KZSystem, v: &PolyVector<R>, budget: u64) -> Result<Verdict> {
    if v.dim() != sys.dim() {
        return Err(KzpError::DimensionMismatch(format!("vector dim {} vs carrier {}", v.dim(), sys.dim())));
    }
    let cost = symbolic_cost(sys, v);
    if cost > budget {
        return Err(KzpError::BudgetExceeded { needed: cost, budget });
    }
    let fail = |detail: String| Verdict { passed: false, mode: VerifyMode::Symbolic, points: 0, failure_bound: 0.0, detail };
    let Some(first) = v.coords.first() else {
        return Ok(Verdict { passed: true, mode: VerifyMode::Symbolic, points: 0, failure_bound: 0.0, detail: "empty carrier".into() });
    };
    let ring = first.ring().clone();
    let layout = first.layout();
    let kappa = ring.from_i64(sys.kappa);
    let dim = sys.dim();
    for i in 0..sys.n {
        let vi = layout.z(i);
        let mut acc: Vec<FxHashMap<Mono, R::Elem>> = vec![FxHashMap::default(); dim];
        for (c, poly) in v.coords.iter().enumerate() {
            for (m, a) in poly.derivative(vi).terms() {
                accumulate(&ring, &mut acc[c], *m, &ring.mul(&kappa, a));
            }
        }
        for j in (0..sys.n).filter(|&j| j != i) {
            let vj = layout.z(j);
            let op = sys.omega(i, j);
            let mut rem: Vec<FxHashMap<Mono, R::Elem>> = vec![FxHashMap::default(); dim];
            for (c, col) in op.cols.iter().enumerate() {
                if col.is_empty() || v.coords[c].is_zero() {
                    continue;
                }
                let weights: Vec<(usize, R::Elem)> = col.iter().map(|&(row, w)| (row, ring.from_i64(w))).collect();
                for (m, a) in v.coords[c].terms() {
                    // z_i^k = (z_i − z_j) Σ_{s<k} z_i^{k−1−s} z_j^s + z_j^k
                    let k = m.exp(vi);
                    let ej = m.exp(vj);
                    let base = m.with_exp(vi, 0);
                    for (row, w) in &weights {
                        let coef = ring.mul(a, w);
                        accumulate(&ring, &mut rem[*row], base.with_exp(vj, ej + k), &coef);
                        let neg = ring.neg(&coef);
                        for s in 0..k {
                            accumulate(&ring, &mut acc[*row], base.with_exp(vi, k - 1 - s).with_exp(vj, ej + s), &neg);
                        }
                    }
                }
            }
            if let Some(row) = first_nonzero(&ring, &rem) {
                return Ok(fail(format!("Ω_{{{},{}}} v does not vanish on z_{} = z_{} (coordinate {row})", i + 1, j + 1, i + 1, j + 1)));
            }
        }
        if let Some(row) = first_nonzero(&ring, &acc) {
            return Ok(fail(format!("∇_{} residual nonzero in coordinate {row}", i + 1)));
        }
    }
    Ok(Verdict { passed: true, mode: VerifyMode::Symbolic, points: 0, failure_bound: 0.0, detail: "all residuals vanish exactly".into() })
}

/// Extension field large enough for Schwartz–Zippel with the given degree.
pub fn sz_field(p: PrimeField, degree: u32) -> Result<ExtField> {
    ExtField::with_min_size(p, (64 * degree.max(1) as u64).max(1 << 16))
}

/// A point with pairwise distinct coordinates.
pub fn random_distinct_point<S: Sample, G: rand::Rng + ?Sized>(s: &S, n: usize, rng: &mut G) -> Vec<S::Elem> {
    loop {
        let z: Vec<S::Elem> = (0..n).map(|_| s.sample(rng)).collect();
        let distinct = (0..n).all(|i| (i + 1..n).all(|j| z[i] != z[j]));
        if distinct {
            return z;
        }
    }
}

/// Σ_i λ_i ∇_i v at a point, from v(z) and the directional derivative ∂_λ v(z).
pub fn directional_residual<R: Ring>(sys: &KZSystem, ring: &R, z: &[R::Elem], lambda: &[R::Elem], v: &[R::Elem], dv: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let mut out = dv.to_vec();
    let k = ring.neg(&sys.inv_kappa(ring));
    for i in 0..sys.n {
        for j in i + 1..sys.n {
            let d = ring.inv(&ring.sub(&z[i], &z[j]))?;
            let c = ring.mul(&k, &ring.mul(&ring.sub(&lambda[i], &lambda[j]), &d));
            sys.omega(i, j).apply_add(ring, v, &c, &mut out);
        }
    }
    Some(out)
}

/// Schwartz–Zippel check of ∇_i v = 0 for all i.
///
/// `sec` may stack several vectors of the carrier's dimension; each block is
/// checked at the same points. At each point a random direction λ is drawn
/// and Σ λ_i ∇_i v is evaluated with dual numbers.
pub fn verify_pointwise<T: Section, G: rand::Rng + ?Sized>(
    sys: &KZSystem,
    p: PrimeField,
    sec: &T,
    points: usize,
    rng: &mut G,
) -> Result<Verdict> {
    let dim = sys.dim();
    if !sec.dim().is_multiple_of(dim) {
        return Err(KzpError::DimensionMismatch(format!("section dim {} vs carrier {dim}", sec.dim())));
    }
    let deg = sec.degree_bound() + (sys.n * sys.n) as u32;
    let ext = sz_field(p, deg)?;
    let dual = Dual::new(ext.clone());
    let embed = |a: u32| (ext.embed(a), ext.zero());
    for pt in 0..points {
        let z = random_distinct_point(&ext, sys.n, rng);
        let lambda: Vec<ExtElem> = (0..sys.n).map(|_| ext.sample(rng)).collect();
        let zd: Vec<(ExtElem, ExtElem)> = z.iter().zip(&lambda).map(|(x, l)| (*x, *l)).collect();
        let vals = sec.eval(&dual, &embed, &zd);
        for (b, block) in vals.chunks(dim).enumerate() {
            let v: Vec<ExtElem> = block.iter().map(|x| x.0).collect();
            let dv: Vec<ExtElem> = block.iter().map(|x| x.1).collect();
            let res = directional_residual(sys, &ext, &z, &lambda, &v, &dv).expect("distinct point");
            if res.iter().any(|x| !ext.is_zero(x)) {
                return Ok(Verdict {
                    passed: false,
                    mode: VerifyMode::Probabilistic,
                    points: pt + 1,
                    failure_bound: 0.0,
                    detail: format!("block {b}: residual nonzero at point {pt}"),
                });
            }
        }
    }
    Ok(Verdict {
        passed: true,
        mode: VerifyMode::Probabilistic,
        points,
        failure_bound: sz_bound(deg, ext.order(), points),
        detail: format!("residuals vanish at {points} points of F_{}^{}", p.p(), ext.degree()),
    })
}

/// ((deg + 1)/q)^points, the chance that a nonzero identity of degree `deg`
/// (plus one random direction) survives `points` independent samples.
pub fn sz_bound(deg: u32, q: u64, points: usize) -> f64 {
    ((deg as f64 + 1.0) / q as f64).min(1.0).powi(points as i32)
}

/// Cleared duality D_i ∂_i S(x,y) = S(D_i∇^κ x, y) + S(x, D_i∇^{−κ} y).
pub fn duality_check<R: Ring>(sys: &KZSystem, x: &PolyVector<R>, y: &PolyVector<R>) -> Result<bool> {
    let ring = x.coords[0].ring().clone();
    let clearing = Clearing::new(&ring, sys.n);
    let dual = sys.dual_system();
    let pair = |a: &PolyVector<R>, b: &PolyVector<R>| {
        let mut acc = MultiPoly::zero(ring.clone(), a.coords[0].layout());
        for (u, v) in a.coords.iter().zip(&b.coords) {
            acc.add_assign(&u.mul(v));
        }
        acc
    };
    let s = pair(x, y);
    for i in 0..sys.n {
        let lhs = s.derivative(i).mul(&clearing.d[i]);
        let rhs = pair(&kz_apply(sys, &clearing, i, x)?, y).add(&pair(x, &kz_apply(&dual, &clearing, i, y)?));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vector of rational functions with a common denominator.
#[derive(Clone, Debug)]
struct RatVec<R: Ring> {
    num: PolyVector<R>,
    den: MultiPoly<R>,
}

fn nabla_rat<R: Ring>(sys: &KZSystem, clearing: &Clearing<R>, i: usize, v: &RatVec<R>) -> RatVec<R> {
    let ring = v.den.ring().clone();
    let k = ring.neg(&sys.inv_kappa(&ring));
    // ∂(U/Q) = (U'Q − UQ')/Q²; connection term −(1/κ)Σ E_ij Ω U /(Q D_i)
    let dq = v.den.derivative(i);
    let a = v.num.derivative(i).mul_poly(&v.den).sub(&v.num.mul_poly(&dq)).mul_poly(&clearing.d[i]);
    let mut b = PolyVector::zero(&ring, v.den.layout(), v.num.dim());
    for j in 0..sys.n {
        if j != i {
            b = b.add(&v.num.apply_sparse(sys.omega(i, j)).mul_poly(&clearing.e[i * sys.n + j]));
        }
    }
    let num = a.add(&b.mul_poly(&v.den).scale(&k));
    RatVec { num, den: v.den.mul(&v.den).mul(&clearing.d[i]) }
}

/// [∇_i, ∇_j] v = 0, compared by cross-multiplication.
pub fn flatness_check<R: Ring>(sys: &KZSystem, v: &PolyVector<R>, i: usize, j: usize) -> bool {
    let ring = v.coords[0].ring().clone();
    let clearing = Clearing::new(&ring, sys.n);
    let one = MultiPoly::one(ring.clone(), v.coords[0].layout());
    let rv = RatVec { num: v.clone(), den: one };
    let a = nabla_rat(sys, &clearing, i, &nabla_rat(sys, &clearing, j, &rv));
    let b = nabla_rat(sys, &clearing, j, &nabla_rat(sys, &clearing, i, &rv));
    a.num.mul_poly(&b.den) == b.num.mul_poly(&a.den)
}

/// e·Ω_ij = Ω_ij·e between the r and r−1 singular carriers' ambient spaces.
pub fn equivariance_check(g: usize, r: usize) -> Result<bool> {
    if r == 0 {
        return Ok(true);
    }
    let q = Rationals;
    let hi = KZSystem::new(g, 2, Carrier::Sing { r })?;
    let lo = KZSystem::new(g, 2, Carrier::Sing { r: r - 1 })?;
    let ws = WeightSpace::new(2 * g + 1, r);
    let e = ws.e_matrix(&q);
    let f = WeightSpace::new(2 * g + 1, r - 1).f_matrix(&q);
    for i in 0..hi.n {
        for j in i + 1..hi.n {
            let oh = hi.omega(i, j).to_matrix(&q);
            let ol = lo.omega(i, j).to_matrix(&q);
            if e.mul(&oh) != ol.mul(&e) || f.mul(&ol) != oh.mul(&f) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// S(x, y) for polynomial vectors.
pub fn pairing<R: Ring>(x: &PolyVector<R>, y: &PolyVector<R>) -> MultiPoly<R> {
    let ring = x.coords[0].ring().clone();
    let mut acc = MultiPoly::zero(ring, x.coords[0].layout());
    for (u, v) in x.coords.iter().zip(&y.coords) {
        if !u.is_zero() && !v.is_zero() {
            acc.add_assign(&u.mul(v));
        }
    }
    acc
}

/// S at a point, for evaluated vectors.
pub fn pairing_at<R: Ring>(ring: &R, x: &[R::Elem], y: &[R::Elem]) -> R::Elem {
    shapovalov(ring, x, y).expect("equal dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random_vector(f: PrimeField, n: usize, dim: usize, seed: u64) -> PolyVector<PrimeField> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = Layout::z_only(n);
        let coords = (0..dim)
            .map(|_| {
                let mut c = MultiPoly::zero(f, l);
                for _ in 0..3 {
                    let a = rng.gen_range(0..n);
                    let b = rng.gen_range(0..n);
                    let k = f.sample(&mut rng);
                    c = c.add(&MultiPoly::z(f, l, a).mul(&MultiPoly::z(f, l, b)).scale(&k));
                }
                c
            })
            .collect();
        PolyVector::new(coords)
    }

    #[test]
    fn constant_vector_solves_weight_zero_system() {
        let f = fp(7);
        let sys = KZSystem::new(2, 2, Carrier::Sing { r: 0 }).unwrap();
        let v = PolyVector::new(vec![MultiPoly::one(f, Layout::z_only(5))]);
        let cl = Clearing::new(&f, 5);
        for i in 0..5 {
            assert!(kz_apply(&sys, &cl, i, &v).unwrap().is_zero());
        }
    }

    #[test]
    fn basis_vector_is_not_a_solution() {
        let f = fp(7);
        let sys = KZSystem::new(2, 2, Carrier::Sing { r: 1 }).unwrap();
        let l = Layout::z_only(5);
        let mut coords = vec![MultiPoly::zero(f, l); 5];
        coords[0] = MultiPoly::one(f, l);
        let v = PolyVector::new(coords);
        let verdict = verify_symbolic(&sys, &v, u64::MAX).unwrap();
        assert!(!verdict.passed);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(!verify_pointwise(&sys, f, &v, 32, &mut rng).unwrap().passed);
    }

    #[test]
    fn kz_apply_rejects_bad_index() {
        let f = fp(7);
        let sys = KZSystem::new(1, 2, Carrier::Sing { r: 1 }).unwrap();
        let v = PolyVector::zero(&f, Layout::z_only(3), 3);
        let cl = Clearing::new(&f, 3);
        assert!(kz_apply(&sys, &cl, 3, &v).is_err());
        assert!(KZSystem::new(1, 3, Carrier::Sing { r: 1 }).is_err());
    }

    #[test]
    fn flatness_on_random_sections() {
        let f = fp(101);
        for carrier in [Carrier::Sing { r: 1 }, Carrier::Sing { r: 2 }, Carrier::Wedge { r: 2 }] {
            let sys = KZSystem::new(2, -2, carrier).unwrap();
            let v = random_vector(f, 5, sys.dim(), 7);
            assert!(flatness_check(&sys, &v, 0, 3), "{carrier:?}");
            assert!(flatness_check(&sys, &v, 1, 2), "{carrier:?}");
        }
    }

    #[test]
    fn operators_commute_with_sl2() {
        for r in 1..=3 {
            assert!(equivariance_check(3, r).unwrap());
        }
    }

    #[test]
    fn duality_on_random_sections() {
        let f = fp(13);
        for carrier in [Carrier::Sing { r: 1 }, Carrier::Wedge { r: 2 }] {
            let sys = KZSystem::new(2, 2, carrier).unwrap();
            let x = random_vector(f, 5, sys.dim(), 3);
            let y = random_vector(f, 5, sys.dim(), 4);
            assert!(duality_check(&sys, &x, &y).unwrap(), "{carrier:?}");
        }
    }

    #[test]
    fn omega_preserves_singular_subspace() {
        use crate::weightspace::SingSpace;
        let q = Rationals;
        for r in 1..=2 {
            let sing = SingSpace::new(2, r).unwrap();
            let sys = KZSystem::new(2, 2, Carrier::Sing { r }).unwrap();
            for v in sing.basis_q() {
                let m = sys.omega(0, 3).to_matrix(&q);
                assert!(sing.contains(&q, &m.mul_vec(v)));
            }
        }
    }
}
