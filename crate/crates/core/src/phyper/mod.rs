//! p-hypergeometric solutions: p-integrals of the master forms
//! ν, μ, ν̄, μ̄ and μ̃ over F_p.
//!
//! Every master form is P(t)·Sym_t(∏_j f_{i_j}(t_j)) or P(t)·Ant_t(…) with
//! f_i = Ψ(t,z)^m/(t − z_i) and a prefactor P(t) in the t-variables only.
//! The coefficient of t^E in such a form is
//!
//!   Σ_{(a,c) ∈ P} c · Σ_π χ(π) ∏_k s_{i_{π(k)}}[E_k − a_k]
//!
//! where s_i[e] is the t^e coefficient of f_i. The t-expansion is never
//! formed; slices s_i[e] are computed either symbolically (bounded
//! compositions) or at a point (synthetic division of Ψ^m).

pub mod relations;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::combinat::{permutations, subsets};
use crate::algebra::poly::{Layout, Mono, MultiPoly, PolyRing};
use crate::algebra::ring::{PrimeField, Ring};
use crate::error::{KzpError, Result};
use crate::kz::{verify_pointwise, verify_symbolic, Carrier, KZSystem, PolyVector, Section, Verdict, VerifyMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// ν^{(p)}: Ant(V(t)·∏ f), exponent (p−1)/2, κ = 2, singular carrier.
    N,
    /// μ^{(p)}: Ant(∏ f), exponent (p−1)/2, κ = 2, wedge carrier.
    M,
    /// ν̄^{(p)}: Sym(∏(t_i−t_j)^{p−1}·∏ f), exponent (p+1)/2, κ = −2.
    BarN,
    /// μ̄^{(p)}: Ant(∏ f), exponent (p+1)/2, κ = −2, wedge carrier.
    BarM,
    /// μ̃^{(p)}: ∏(t_i^p − t_j^p)·Ant(∏ f), exponent (p+1)/2, κ = −2.
    TildeM,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::N, Family::M, Family::BarN, Family::BarM, Family::TildeM];

    pub fn name(self) -> &'static str {
        match self {
            Family::N => "N",
            Family::M => "M",
            Family::BarN => "barN",
            Family::BarM => "barM",
            Family::TildeM => "tildeM",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KzpError::Parse(format!("unknown family {s:?}")))
    }

    pub fn kappa(self) -> i64 {
        match self {
            Family::N | Family::M => 2,
            _ => -2,
        }
    }

    /// Exponent m of Ψ in the master form.
    pub fn exponent(self, p: u32) -> u32 {
        match self {
            Family::N | Family::M => (p - 1) / 2,
            _ => p.div_ceil(2),
        }
    }

    pub fn carrier(self, r: usize) -> Carrier {
        match self {
            Family::N | Family::BarN => Carrier::Sing { r },
            _ => Carrier::Wedge { r },
        }
    }

    /// Symmetric (rather than skew) under permutations of ℓ.
    pub fn ell_symmetric(self) -> bool {
        matches!(self, Family::BarN | Family::TildeM)
    }

    /// Whether the t-permutation sum is unsigned.
    fn t_symmetric(self) -> bool {
        matches!(self, Family::N | Family::BarN)
    }

    /// Prefactor P(t) as merged (exponent vector, coefficient mod p) pairs.
    pub fn prefactor(self, p: u32, r: usize) -> Vec<(Vec<u32>, u32)> {
        let pair: Vec<(u32, u32, i64)> = match self {
            Family::N => vec![(1, 0, 1), (0, 1, -1)],
            Family::BarN => (0..p).map(|k| (k, p - 1 - k, 1)).collect(),
            Family::TildeM => vec![(p, 0, 1), (0, p, -1)],
            Family::M | Family::BarM => Vec::new(),
        };
        let f = PrimeField::new(p as u64).expect("odd prime");
        let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        acc.insert(vec![0; r], 1);
        if pair.is_empty() {
            return acc.into_iter().collect();
        }
        for i in 0..r {
            for j in i + 1..r {
                let mut next: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
                for (e, c) in &acc {
                    for &(a, b, k) in &pair {
                        let mut e2 = e.clone();
                        e2[i] += a;
                        e2[j] += b;
                        let t = f.mul(c, &f.reduce_i64(k));
                        let slot = next.entry(e2).or_insert(0);
                        *slot = f.add(slot, &t);
                    }
                }
                next.retain(|_, c| *c != 0);
                acc = next;
            }
        }
        acc.into_iter().collect()
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by every tuple of one family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Master {
    pub family: Family,
    pub g: usize,
    pub p: PrimeField,
    pub r: usize,
}

impl Master {
    pub fn new(family: Family, g: usize, p: PrimeField, r: usize) -> Result<Self> {
        if r == 0 || r > g {
            return Err(KzpError::InvalidParameters(format!("need 1 ≤ r ≤ g, got r={r}, g={g}")));
        }
        if 2 * g + 1 > 15 {
            return Err(KzpError::TooManyVariables(2 * g + 1, 15));
        }
        Ok(Master { family, g, p, r })
    }

    pub fn n(&self) -> usize {
        2 * self.g + 1
    }

    pub fn m(&self) -> u32 {
        self.family.exponent(self.p.p())
    }

    /// t-degree of each f_i.
    pub fn top(&self) -> u32 {
        self.n() as u32 * self.m() - 1
    }

    pub fn kz_system(&self) -> Result<KZSystem> {
        KZSystem::new(self.g, self.family.kappa(), self.family.carrier(self.r))
    }

    /// Number of coordinates (ambient r-subsets).
    pub fn dim(&self) -> usize {
        crate::algebra::combinat::binom(self.n() as i64, self.r as i64) as usize
    }
}

#[derive(Clone, Debug)]
struct Node {
    x: u32,
    coeff: u32,
    children: std::ops::Range<usize>,
}

/// The prefactor terms surviving for one ℓ, as a trie on (x_1, …, x_r)
/// with x_k = E_k − a_k.
#[derive(Clone, Debug)]
pub struct TuplePlan {
    pub ell: Vec<u32>,
    levels: Vec<Vec<Node>>,
    /// Homogeneous z-degree of every coordinate.
    pub degree: u32,
}

impl TuplePlan {
    pub fn new(master: &Master, prefactor: &[(Vec<u32>, u32)], ell: &[u32]) -> Result<Self> {
        let r = master.r;
        if ell.len() != r {
            return Err(KzpError::WrongArity { expected: r, got: ell.len() });
        }
        if ell.contains(&0) {
            return Err(KzpError::InvalidParameters("ℓ entries must be positive".into()));
        }
        let p = master.p.p() as i64;
        let top = master.top() as i64;
        let e: Vec<i64> = ell.iter().map(|&l| p * l as i64 - 1).collect();
        let mut terms: Vec<(Vec<u32>, u32)> = prefactor
            .iter()
            .filter_map(|(a, c)| {
                let x: Option<Vec<u32>> = (0..r)
                    .map(|k| {
                        let v = e[k] - a[k] as i64;
                        (0..=top).contains(&v).then_some(v as u32)
                    })
                    .collect();
                x.map(|x| (x, *c))
            })
            .collect();
        terms.sort();
        let degree = terms.first().map(|(x, _)| (r as i64 * top - x.iter().map(|&v| v as i64).sum::<i64>()) as u32).unwrap_or(0);
        let mut levels: Vec<Vec<Node>> = vec![Vec::new(); r + 1];
        levels[0].push(Node { x: 0, coeff: 0, children: 0..0 });
        let mut prev: Option<&Vec<u32>> = None;
        for (x, c) in &terms {
            let start = match prev {
                None => 0,
                Some(px) => (0..r).find(|&k| px[k] != x[k]).unwrap_or(r),
            };
            for d in start..r {
                let coeff = if d + 1 == r { *c } else { 0 };
                let idx = levels[d + 1].len();
                levels[d + 1].push(Node { x: x[d], coeff, children: 0..0 });
                let parent = levels[d].last_mut().expect("parent exists");
                if parent.children.is_empty() {
                    parent.children = idx..idx + 1;
                } else {
                    parent.children.end = idx + 1;
                }
            }
            prev = Some(x);
        }
        Ok(TuplePlan { ell: ell.to_vec(), levels, degree })
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.levels[0][0].children.is_empty()
    }

    /// Distinct x-values per t-position.
    fn needed(&self, top: u32) -> Vec<bool> {
        let mut need = vec![false; top as usize + 1];
        for lvl in &self.levels[1..] {
            for node in lvl {
                need[node.x as usize] = true;
            }
        }
        need
    }
}

/// Slices s_i[e], i < n, e ≤ top, at a point z of `s`.
pub fn slices_at<S: Ring>(s: &S, z: &[S::Elem], m: u32) -> Vec<Vec<S::Elem>> {
    let n = z.len();
    let mut psi = vec![s.one()];
    for za in z {
        for _ in 0..m {
            let mut next = vec![s.zero(); psi.len() + 1];
            for (k, c) in psi.iter().enumerate() {
                s.add_assign(&mut next[k + 1], c);
                let t = s.mul(c, za);
                next[k] = s.sub(&next[k], &t);
            }
            psi = next;
        }
    }
    let d = psi.len() - 1;
    (0..n)
        .map(|i| {
            let mut q = vec![s.zero(); d];
            q[d - 1] = psi[d].clone();
            for k in (1..d).rev() {
                let t = s.mul(&z[i], &q[k]);
                q[k - 1] = s.add(&psi[k], &t);
            }
            q
        })
        .collect()
}

fn binom_table(p: PrimeField, top: u32) -> Vec<Vec<u32>> {
    let mut t = vec![vec![1u32]];
    for a in 1..=top as usize {
        let mut row = vec![1u32; a + 1];
        for b in 1..a {
            row[b] = p.add(&t[a - 1][b - 1], &t[a - 1][b]);
        }
        t.push(row);
    }
    t
}

/// s_i[e] as a polynomial in z: the t^e coefficient of
/// (t − z_i)^{m−1} ∏_{a≠i} (t − z_a)^m, by enumerating bounded compositions.
pub fn symbolic_slice(p: PrimeField, n: usize, m: u32, i: usize, e: u32) -> MultiPoly<PrimeField> {
    let layout = Layout::z_only(n);
    let top = n as u32 * m - 1;
    if e > top {
        return MultiPoly::zero(p, layout);
    }
    let deg = top - e;
    let bounds: Vec<u32> = (0..n).map(|a| if a == i { m - 1 } else { m }).collect();
    let binoms = binom_table(p, m);
    let sign = if deg.is_multiple_of(2) { 1 } else { p.p() - 1 };
    // suffix capacity for pruning
    let mut cap = vec![0u32; n + 1];
    for a in (0..n).rev() {
        cap[a] = cap[a + 1] + bounds[a];
    }
    let mut terms = Vec::new();
    let mut c = vec![0u32; n];
    fn rec(
        a: usize,
        left: u32,
        c: &mut Vec<u32>,
        bounds: &[u32],
        cap: &[u32],
        binoms: &[Vec<u32>],
        p: PrimeField,
        sign: u32,
        terms: &mut Vec<(Mono, u32)>,
    ) {
        let n = bounds.len();
        if a == n {
            if left == 0 {
                let mut coeff = sign;
                let mut mono = Mono::ONE;
                for v in 0..n {
                    coeff = p.mul(&coeff, &binoms[bounds[v] as usize][c[v] as usize]);
                    mono = mono.with_exp(v, c[v]);
                }
                if coeff != 0 {
                    terms.push((mono, coeff));
                }
            }
            return;
        }
        let lo = left.saturating_sub(cap[a + 1]);
        let hi = left.min(bounds[a]);
        for v in lo..=hi {
            c[a] = v;
            rec(a + 1, left - v, c, bounds, cap, binoms, p, sign, terms);
        }
        c[a] = 0;
    }
    if deg <= cap[0] {
        rec(0, deg, &mut c, &bounds, &cap, &binoms, p, sign, &mut terms);
    }
    MultiPoly::from_terms(p, layout, terms)
}

/// Number of bounded compositions, i.e. an upper bound on the size of s_i[e].
pub fn slice_size(n: usize, m: u32, e: u32) -> f64 {
    let top = n as u32 * m - 1;
    if e > top {
        return 0.0;
    }
    let deg = (top - e) as usize;
    let mut counts = vec![0f64; deg + 1];
    counts[0] = 1.0;
    for a in 0..n {
        let b = if a == 0 { m - 1 } else { m } as usize;
        let mut next = vec![0f64; deg + 1];
        for (k, &c) in counts.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for v in 0..=b.min(deg - k) {
                next[k + v] += c;
            }
        }
        counts = next;
    }
    counts[deg]
}

/// Encodes ordered tuples of length `len` over n symbols in base n.
fn tuple_flags(n: usize, len: usize) -> Vec<bool> {
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut seen = 0u64;
            for _ in 0..len {
                let d = code % n;
                code /= n;
                if seen & (1 << d) != 0 {
                    return false;
                }
                seen |= 1 << d;
            }
            true
        })
        .collect()
}

/// Q(J) = Σ_terms c ∏_k s[J_k][x_k] for every ordered tuple J of distinct
/// indices, encoded base n (J_1 most significant).
fn contract<S: Ring>(s: &S, plan: &TuplePlan, slices: &[Vec<S::Elem>], n: usize) -> Vec<S::Elem> {
    let r = plan.levels.len() - 1;
    let flags: Vec<Vec<bool>> = (0..=r).map(|len| tuple_flags(n, len)).collect();
    let mut below: Vec<Vec<S::Elem>> = plan.levels[r].iter().map(|node| vec![s.from_i64(node.coeff as i64)]).collect();
    for d in (0..r).rev() {
        let len = r - d;
        let sub = n.pow(len as u32 - 1);
        let mut cur = Vec::with_capacity(plan.levels[d].len());
        for node in &plan.levels[d] {
            let mut vals = vec![s.zero(); n.pow(len as u32)];
            for (code, slot) in vals.iter_mut().enumerate() {
                if !flags[len][code] {
                    continue;
                }
                let j = code / sub;
                let rest = code % sub;
                for c in node.children.clone() {
                    let child = &plan.levels[d + 1][c];
                    let a = &slices[j][child.x as usize];
                    let b = &below[c][rest];
                    if s.is_zero(a) || s.is_zero(b) {
                        continue;
                    }
                    s.mul_add_assign(slot, a, b);
                }
            }
            cur.push(vals);
        }
        below = cur;
    }
    below.pop().expect("root")
}

/// Coordinates over the sorted r-subsets from the contracted table.
fn coordinates<S: Ring>(s: &S, family: Family, q: &[S::Elem], n: usize, r: usize) -> Vec<S::Elem> {
    let perms = permutations(r);
    subsets(n, r)
        .into_iter()
        .map(|set| {
            let mut acc = s.zero();
            for (pi, sign) in &perms {
                let code = pi.iter().fold(0usize, |c, &k| c * n + set[k]);
                let v = &q[code];
                if s.is_zero(v) {
                    continue;
                }
                if *sign < 0 && !family.t_symmetric() {
                    acc = s.sub(&acc, v);
                } else {
                    s.add_assign(&mut acc, v);
                }
            }
            acc
        })
        .collect()
}

/// A family together with a list of ℓ-tuples, evaluable symbolically or at
/// points. As a [`Section`] it stacks the tuples' vectors.
#[derive(Clone, Debug)]
pub struct FamilyBatch {
    pub master: Master,
    pub plans: Vec<TuplePlan>,
}

impl FamilyBatch {
    pub fn new(master: Master, tuples: &[Vec<u32>]) -> Result<Self> {
        let pre = master.family.prefactor(master.p.p(), master.r);
        let plans = tuples.iter().map(|ell| TuplePlan::new(&master, &pre, ell)).collect::<Result<Vec<_>>>()?;
        Ok(FamilyBatch { master, plans })
    }

    pub fn tuples(&self) -> Vec<Vec<u32>> {
        self.plans.iter().map(|pl| pl.ell.clone()).collect()
    }

    /// Coordinates of every tuple at z, with slices computed once.
    pub fn eval_tuples<S: Ring>(&self, s: &S, z: &[S::Elem]) -> Vec<Vec<S::Elem>> {
        let n = self.master.n();
        let r = self.master.r;
        let dim = self.master.dim();
        if self.plans.iter().all(|pl| pl.is_structurally_zero()) {
            return vec![vec![s.zero(); dim]; self.plans.len()];
        }
        let slices = slices_at(s, z, self.master.m());
        self.plans
            .iter()
            .map(|pl| {
                if pl.is_structurally_zero() {
                    return vec![s.zero(); dim];
                }
                let q = contract(s, pl, &slices, n);
                coordinates(s, self.master.family, &q, n, r)
            })
            .collect()
    }

    /// Estimated coefficient multiplications for a symbolic build of tuple k.
    pub fn symbolic_cost(&self, k: usize) -> f64 {
        let pl = &self.plans[k];
        let n = self.master.n();
        let m = self.master.m();
        let r = self.master.r;
        let top = self.master.top();
        let mut below: Vec<(f64, u32)> = pl.levels[r].iter().map(|_| (1.0, 0)).collect();
        let mut cost = 0.0;
        for d in (0..r).rev() {
            let tuples = (0..r - d).map(|i| (n - i) as f64).product::<f64>();
            let mut cur = Vec::new();
            for node in &pl.levels[d] {
                let mut size = 0.0;
                let mut deg = 0;
                for c in node.children.clone() {
                    let child = &pl.levels[d + 1][c];
                    let sz = slice_size(n, m, child.x);
                    cost += tuples * sz * below[c].0;
                    size += sz * below[c].0;
                    deg = below[c].1 + (top - child.x);
                }
                let cap = monomial_count(n, deg);
                cur.push((size.min(cap), deg));
            }
            below = cur;
        }
        cost
    }

    /// Exact coordinates as polynomials in z.
    pub fn build_symbolic(&self) -> Vec<PolyVector<PrimeField>> {
        let p = self.master.p;
        let n = self.master.n();
        let r = self.master.r;
        let m = self.master.m();
        let top = self.master.top();
        let layout = Layout::z_only(n);
        let ring = PolyRing::new(p, layout);
        let mut need = vec![false; top as usize + 1];
        for pl in &self.plans {
            for (e, b) in pl.needed(top).into_iter().enumerate() {
                need[e] |= b;
            }
        }
        let slices: Vec<Vec<MultiPoly<PrimeField>>> = (0..n)
            .map(|i| {
                (0..=top)
                    .map(|e| if need[e as usize] { symbolic_slice(p, n, m, i, e) } else { MultiPoly::zero(p, layout) })
                    .collect()
            })
            .collect();
        self.plans
            .iter()
            .map(|pl| {
                if pl.is_structurally_zero() {
                    return PolyVector::zero(&p, layout, self.master.dim());
                }
                let q = contract(&ring, pl, &slices, n);
                PolyVector::new(coordinates(&ring, self.master.family, &q, n, r))
            })
            .collect()
    }
}

/// C(deg + n − 1, n − 1) as a float.
fn monomial_count(n: usize, deg: u32) -> f64 {
    let mut acc = 1.0;
    for i in 1..n {
        acc = acc * (deg as f64 + i as f64) / i as f64;
    }
    acc
}

impl Section for FamilyBatch {
    fn dim(&self) -> usize {
        self.master.dim() * self.plans.len()
    }

    fn degree_bound(&self) -> u32 {
        self.plans.iter().map(|pl| pl.degree).max().unwrap_or(0)
    }

    fn eval<S: Ring>(&self, s: &S, _embed: &dyn Fn(u32) -> S::Elem, z: &[S::Elem]) -> Vec<S::Elem> {
        self.eval_tuples(s, z).into_iter().flatten().collect()
    }
}

/// The solution vector for one ℓ as exact polynomials in z.
pub fn build_solution(family: Family, g: usize, p: PrimeField, r: usize, ell: &[u32]) -> Result<PolyVector<PrimeField>> {
    let master = Master::new(family, g, p, r)?;
    let batch = FamilyBatch::new(master, &[ell.to_vec()])?;
    Ok(batch.build_symbolic().pop().expect("one tuple"))
}

/// ℓ-tuples with entries in 1..=max: strictly increasing for skew families,
/// non-decreasing for symmetric ones.
pub fn canonical_tuples(family: Family, r: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(r: usize, lo: u32, max: u32, strict: bool, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            rec(r, if strict { v + 1 } else { v }, max, strict, cur, out);
            cur.pop();
        }
    }
    rec(r, 1, max, !family.ell_symmetric(), &mut cur, &mut out);
    out
}

/// How identities are certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Symbolic when the estimated cost fits the budget, else probabilistic.
    Auto,
    Symbolic,
    Probabilistic,
}

impl CheckMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(CheckMode::Auto),
            "symbolic" => Ok(CheckMode::Symbolic),
            "probabilistic" | "point" => Ok(CheckMode::Probabilistic),
            _ => Err(KzpError::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Certification settings shared by all suites.
#[derive(Clone, Copy, Debug)]
pub struct Certify {
    pub mode: CheckMode,
    /// Coefficient-multiplication budget for symbolic builds.
    pub budget: f64,
    /// Hash-update budget for exact KZ checks of built vectors.
    pub verify_budget: f64,
    pub points: usize,
}

impl Default for Certify {
    fn default() -> Self {
        Certify { mode: CheckMode::Auto, budget: 1e7, verify_budget: 1e8, points: 32 }
    }
}

impl Certify {
    pub fn symbolic_ok(&self, cost: f64) -> bool {
        match self.mode {
            CheckMode::Symbolic => true,
            CheckMode::Probabilistic => false,
            CheckMode::Auto => cost <= self.budget,
        }
    }
}

/// KZ verdict for each tuple of a batch at the family's κ.
pub fn verify_family<G: rand::Rng + ?Sized>(batch: &FamilyBatch, cert: &Certify, rng: &mut G) -> Result<Vec<Verdict>> {
    let sys = batch.master.kz_system()?;
    let mut out: Vec<Option<Verdict>> = vec![None; batch.plans.len()];
    let mut pointwise = Vec::new();
    for (k, pl) in batch.plans.iter().enumerate() {
        if pl.is_structurally_zero() {
            out[k] = Some(Verdict {
                passed: true,
                mode: VerifyMode::Symbolic,
                points: 0,
                failure_bound: 0.0,
                detail: "zero vector".into(),
            });
            continue;
        }
        let build = batch.symbolic_cost(k);
        if cert.symbolic_ok(build) {
            let single = FamilyBatch { master: batch.master, plans: vec![pl.clone()] };
            let v = single.build_symbolic().pop().expect("one tuple");
            let budget = if cert.mode == CheckMode::Symbolic { u64::MAX } else { cert.verify_budget as u64 };
            match verify_symbolic(&sys, &v, budget) {
                Ok(verdict) => {
                    out[k] = Some(verdict);
                    continue;
                }
                Err(KzpError::BudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        pointwise.push(k);
    }
    if !pointwise.is_empty() {
        let sub = FamilyBatch { master: batch.master, plans: pointwise.iter().map(|&k| batch.plans[k].clone()).collect() };
        let dim = batch.master.dim();
        // one shared run; a failing block is located by re-running per tuple
        let verdict = verify_pointwise(&sys, batch.master.p, &sub, cert.points, rng)?;
        if verdict.passed {
            for &k in &pointwise {
                out[k] = Some(verdict.clone());
            }
        } else {
            for (j, &k) in pointwise.iter().enumerate() {
                let one = FamilyBatch { master: batch.master, plans: vec![sub.plans[j].clone()] };
                debug_assert_eq!(one.dim(), dim);
                out[k] = Some(verify_pointwise(&sys, batch.master.p, &one, cert.points, rng)?);
            }
        }
    }
    Ok(out.into_iter().map(|v| v.expect("every tuple checked")).collect())
}

#[cfg(test)]
mod tests;
