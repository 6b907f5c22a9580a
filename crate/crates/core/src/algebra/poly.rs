//! Sparse multivariate polynomials in a t-block and a z-block of variables.
//!
//! Monomials are packed into a `u128`, eight bits per variable, variable 0 in
//! the most significant byte. Sorting packed monomials is therefore the
//! lexicographic order t₁ > … > t_r > z₁ > … > z_n, and all terms sharing a
//! t-prefix are contiguous.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use super::ring::{PrimeField, Ring};
use crate::error::{KzpError, Result};

pub const MAX_VARS: usize = 16;
pub const MAX_EXP: u32 = 255;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub u128);

impl Mono {
    pub const ONE: Mono = Mono(0);

    #[inline]
    fn shift(v: usize) -> u32 {
        8 * (15 - v as u32)
    }

    #[inline]
    pub fn exp(self, v: usize) -> u32 {
        ((self.0 >> Self::shift(v)) & 0xff) as u32
    }

    /// Panics if `e` exceeds [`MAX_EXP`].
    #[inline]
    pub fn with_exp(self, v: usize, e: u32) -> Mono {
        assert!(e <= MAX_EXP, "exponent {e} exceeds {MAX_EXP}");
        let s = Self::shift(v);
        Mono((self.0 & !(0xffu128 << s)) | ((e as u128) << s))
    }

    pub fn var(v: usize) -> Mono {
        Mono::ONE.with_exp(v, 1)
    }

    pub fn from_exps(exps: &[u32]) -> Result<Mono> {
        if exps.len() > MAX_VARS {
            return Err(KzpError::TooManyVariables(exps.len(), MAX_VARS));
        }
        let mut m = Mono::ONE;
        for (v, &e) in exps.iter().enumerate() {
            if e > MAX_EXP {
                return Err(KzpError::ExponentOverflow { var: v, limit: MAX_EXP });
            }
            m = m.with_exp(v, e);
        }
        Ok(m)
    }

    pub fn exps(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|v| self.exp(v)).collect()
    }

    pub fn degree(self) -> u32 {
        self.0.to_be_bytes().iter().map(|&b| b as u32).sum()
    }

    /// Product of monomials; caller guarantees no per-variable overflow.
    #[inline]
    pub fn mul_unchecked(self, o: Mono) -> Mono {
        Mono(self.0 + o.0)
    }

    pub fn checked_mul(self, o: Mono) -> Option<Mono> {
        let a = self.0.to_be_bytes();
        let b = o.0.to_be_bytes();
        for i in 0..16 {
            if a[i] as u32 + b[i] as u32 > MAX_EXP {
                return None;
            }
        }
        Some(self.mul_unchecked(o))
    }

    /// `self / o` if `o` divides `self`.
    pub fn checked_div(self, o: Mono) -> Option<Mono> {
        let a = self.0.to_be_bytes();
        let b = o.0.to_be_bytes();
        for i in 0..16 {
            if a[i] < b[i] {
                return None;
            }
        }
        Some(Mono(self.0 - o.0))
    }
}

/// Variable layout: `nt` t-variables followed by `nz` z-variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Layout {
    pub nt: usize,
    pub nz: usize,
}

impl Layout {
    pub fn new(nt: usize, nz: usize) -> Result<Self> {
        if nt + nz > MAX_VARS {
            return Err(KzpError::TooManyVariables(nt + nz, MAX_VARS));
        }
        Ok(Layout { nt, nz })
    }

    pub fn z_only(nz: usize) -> Self {
        Layout::new(0, nz).expect("z-only layout within limits")
    }

    pub fn nvars(&self) -> usize {
        self.nt + self.nz
    }

    pub fn t(&self, j: usize) -> usize {
        assert!(j < self.nt);
        j
    }

    pub fn z(&self, a: usize) -> usize {
        assert!(a < self.nz);
        self.nt + a
    }

    pub fn var_name(&self, v: usize) -> String {
        if v < self.nt {
            format!("t{}", v + 1)
        } else {
            format!("z{}", v - self.nt + 1)
        }
    }
}

/// A sparse polynomial: sorted terms, no zero coefficients.
#[derive(Clone, Debug)]
pub struct MultiPoly<R: Ring> {
    ring: R,
    layout: Layout,
    terms: Vec<(Mono, R::Elem)>,
}

impl<R: Ring> PartialEq for MultiPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.terms == other.terms
    }
}

impl<R: Ring> MultiPoly<R> {
    pub fn zero(ring: R, layout: Layout) -> Self {
        MultiPoly { ring, layout, terms: Vec::new() }
    }

    pub fn constant(ring: R, layout: Layout, c: R::Elem) -> Self {
        let terms = if ring.is_zero(&c) { Vec::new() } else { vec![(Mono::ONE, c)] };
        MultiPoly { ring, layout, terms }
    }

    pub fn one(ring: R, layout: Layout) -> Self {
        let one = ring.one();
        Self::constant(ring, layout, one)
    }

    pub fn monomial(ring: R, layout: Layout, m: Mono, c: R::Elem) -> Self {
        let terms = if ring.is_zero(&c) { Vec::new() } else { vec![(m, c)] };
        MultiPoly { ring, layout, terms }
    }

    pub fn var(ring: R, layout: Layout, v: usize) -> Self {
        assert!(v < layout.nvars());
        let one = ring.one();
        Self::monomial(ring, layout, Mono::var(v), one)
    }

    pub fn t(ring: R, layout: Layout, j: usize) -> Self {
        let v = layout.t(j);
        Self::var(ring, layout, v)
    }

    pub fn z(ring: R, layout: Layout, a: usize) -> Self {
        let v = layout.z(a);
        Self::var(ring, layout, v)
    }

    /// Build from arbitrary (possibly repeated, unsorted, zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Mono, R::Elem)>>(ring: R, layout: Layout, it: I) -> Self {
        let mut terms: Vec<(Mono, R::Elem)> = it.into_iter().collect();
        terms.sort_by_key(|a| a.0);
        let mut out: Vec<(Mono, R::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => ring.add_assign(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !ring.is_zero(c));
        MultiPoly { ring, layout, terms: out }
    }

    fn from_sorted_unchecked(ring: R, layout: Layout, terms: Vec<(Mono, R::Elem)>) -> Self {
        MultiPoly { ring, layout, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn terms(&self) -> &[(Mono, R::Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> R::Elem {
        match self.terms.binary_search_by(|t| t.0.cmp(&m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.zero(),
        }
    }

    /// The constant term's coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<R::Elem> {
        match self.terms.as_slice() {
            [] => Some(self.ring.zero()),
            [(m, c)] if *m == Mono::ONE => Some(c.clone()),
            _ => None,
        }
    }

    fn check_layout(&self, o: &Self) -> Result<()> {
        if self.layout != o.layout {
            return Err(KzpError::LayoutMismatch(format!("{:?} vs {:?}", self.layout, o.layout)));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_layout(o)?;
        Ok(self.merge(o, false))
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let r = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate { r.neg(&b[j].1) } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate { r.sub(&a[i].1, &b[j].1) } else { r.add(&a[i].1, &b[j].1) };
                if !r.is_zero(&c) {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self::from_sorted_unchecked(self.ring.clone(), self.layout, out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("layout mismatch in add")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_layout(o).expect("layout mismatch in sub");
        self.merge(o, true)
    }

    pub fn add_assign(&mut self, o: &Self) {
        if o.is_zero() {
            return;
        }
        *self = self.add(o);
    }

    pub fn sub_assign(&mut self, o: &Self) {
        if o.is_zero() {
            return;
        }
        *self = self.sub(o);
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, self.ring.neg(c))).collect();
        Self::from_sorted_unchecked(self.ring.clone(), self.layout, terms)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(self.ring.clone(), self.layout);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, self.ring.mul(a, c)))
            .filter(|(_, a)| !self.ring.is_zero(a))
            .collect();
        Self::from_sorted_unchecked(self.ring.clone(), self.layout, terms)
    }

    pub fn max_exps(&self) -> [u32; MAX_VARS] {
        let mut mx = [0u32; MAX_VARS];
        for (m, _) in &self.terms {
            let b = m.0.to_be_bytes();
            for v in 0..MAX_VARS {
                mx[v] = mx[v].max(b[v] as u32);
            }
        }
        mx
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check_layout(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.ring.clone(), self.layout));
        }
        let (ma, mb) = (self.max_exps(), o.max_exps());
        for v in 0..MAX_VARS {
            if ma[v] + mb[v] > MAX_EXP {
                return Err(KzpError::ExponentOverflow { var: v, limit: MAX_EXP });
            }
        }
        let r = &self.ring;
        if o.terms.len() == 1 || self.terms.len() == 1 {
            let (big, small) = if o.terms.len() == 1 { (self, o) } else { (o, self) };
            let (sm, sc) = &small.terms[0];
            let terms = big
                .terms
                .iter()
                .map(|(m, c)| (m.mul_unchecked(*sm), r.mul(c, sc)))
                .filter(|(_, c)| !r.is_zero(c))
                .collect();
            return Ok(Self::from_sorted_unchecked(r.clone(), self.layout, terms));
        }
        let cap = (self.terms.len() * o.terms.len()).min(1 << 22);
        let mut acc: FxHashMap<u128, R::Elem> = FxHashMap::with_capacity_and_hasher(cap, Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let key = ma.mul_unchecked(*mb).0;
                match acc.get_mut(&key) {
                    Some(slot) => r.mul_add_assign(slot, ca, cb),
                    None => {
                        acc.insert(key, r.mul(ca, cb));
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, R::Elem)> =
            acc.into_iter().filter(|(_, c)| !r.is_zero(c)).map(|(m, c)| (Mono(m), c)).collect();
        terms.sort_unstable_by_key(|a| a.0);
        Ok(Self::from_sorted_unchecked(r.clone(), self.layout, terms))
    }

    /// Panics on layout mismatch or exponent overflow; see [`Self::checked_mul`].
    pub fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("poly_mul")
    }

    pub fn mul_mono(&self, m: Mono, c: &R::Elem) -> Self {
        let mono = Self::monomial(self.ring.clone(), self.layout, m, c.clone());
        self.mul(&mono)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ring.clone(), self.layout);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Self {
        let r = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(v) > 0)
            .map(|(m, c)| {
                let e = m.exp(v);
                (m.with_exp(v, e - 1), r.mul(c, &r.from_i64(e as i64)))
            })
            .filter(|(_, c)| !r.is_zero(c))
            .collect::<Vec<_>>();
        // lowering one exponent can break the sort order only among terms that
        // differed in a lower-priority variable; re-sort to be safe
        Self::from_terms(r.clone(), self.layout, terms)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// `Some(d)` if every term has total degree d; `None` for zero or mixed.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Evaluate at a point given for every variable.
    pub fn eval(&self, point: &[R::Elem]) -> R::Elem {
        self.eval_in(&self.ring.clone(), |c| c.clone(), point)
    }

    /// Evaluate in another ring `s` after mapping coefficients with `f`.
    pub fn eval_in<S: Ring>(&self, s: &S, f: impl Fn(&R::Elem) -> S::Elem, point: &[S::Elem]) -> S::Elem {
        let n = self.layout.nvars();
        assert_eq!(point.len(), n, "evaluation point has wrong length");
        let mx = self.max_exps();
        let powers: Vec<Vec<S::Elem>> = (0..n)
            .map(|v| {
                let mut pw = Vec::with_capacity(mx[v] as usize + 1);
                pw.push(s.one());
                for e in 1..=mx[v] as usize {
                    let next = s.mul(&pw[e - 1], &point[v]);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = s.zero();
        for (m, c) in &self.terms {
            let mut t = f(c);
            for (v, pw) in powers.iter().enumerate() {
                let e = m.exp(v) as usize;
                if e > 0 {
                    t = s.mul(&t, &pw[e]);
                }
            }
            s.add_assign(&mut acc, &t);
        }
        acc
    }

    pub fn map_coeffs<S: Ring>(&self, s: S, f: impl Fn(&R::Elem) -> S::Elem) -> MultiPoly<S> {
        let terms: Vec<(Mono, S::Elem)> = self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !s.is_zero(c)).collect();
        MultiPoly::from_sorted_unchecked(s, self.layout, terms)
    }

    /// Rename variables: variable v becomes `perm[v]` in `target` layout.
    pub fn rename_vars(&self, target: Layout, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.layout.nvars());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = Mono::ONE;
            for (v, &w) in perm.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    out = out.with_exp(w, out.exp(w) + e);
                }
            }
            (out, c.clone())
        });
        Self::from_terms(self.ring.clone(), target, terms.collect::<Vec<_>>())
    }

    /// Embed a z-only polynomial into a layout with `nt` t-variables.
    pub fn with_t_block(&self, nt: usize) -> Result<Self> {
        if self.layout.nt != 0 {
            return Err(KzpError::LayoutMismatch("with_t_block expects a z-only polynomial".into()));
        }
        let target = Layout::new(nt, self.layout.nz)?;
        let perm: Vec<usize> = (0..self.layout.nvars()).map(|v| v + nt).collect();
        Ok(self.rename_vars(target, &perm))
    }

    /// Substitute t_j ↦ t_{σ(j)} for a permutation σ of the t-block.
    pub fn permute_t(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.layout.nt);
        let mut perm: Vec<usize> = (0..self.layout.nvars()).collect();
        perm[..sigma.len()].copy_from_slice(sigma);
        self.rename_vars(self.layout, &perm)
    }

    /// Σ_σ sgn(σ) f(t_σ(1), …, t_σ(r)).
    pub fn antisymmetrize_t(&self) -> Self {
        self.symmetrize_impl(true)
    }

    /// Σ_σ f(t_σ(1), …, t_σ(r)).
    pub fn symmetrize_t(&self) -> Self {
        self.symmetrize_impl(false)
    }

    fn symmetrize_impl(&self, signed: bool) -> Self {
        let r = self.layout.nt;
        let mut acc = Self::zero(self.ring.clone(), self.layout);
        for (sigma, sign) in super::combinat::permutations(r) {
            let term = self.permute_t(&sigma);
            if signed && sign < 0 {
                acc = acc.sub(&term);
            } else {
                acc = acc.add(&term);
            }
        }
        acc
    }

    /// Coefficient of t₁^{e₁}…t_r^{e_r}, as a z-only polynomial.
    pub fn t_coefficient(&self, e: &[u32]) -> Result<Self> {
        let nt = self.layout.nt;
        if e.len() != nt {
            return Err(KzpError::WrongArity { expected: nt, got: e.len() });
        }
        let mut lo = Mono::ONE;
        for (j, &ej) in e.iter().enumerate() {
            if ej > MAX_EXP {
                return Ok(Self::zero(self.ring.clone(), Layout::z_only(self.layout.nz)));
            }
            lo = lo.with_exp(j, ej);
        }
        let z_bits = 8 * self.layout.nz as u32;
        let z_mask: u128 = if z_bits == 0 { 0 } else { (u128::MAX >> (128 - z_bits)) << (8 * (16 - (nt + self.layout.nz)) as u32) };
        let hi = Mono(lo.0 | z_mask);
        let start = self.terms.partition_point(|t| t.0 < lo);
        let end = self.terms.partition_point(|t| t.0 <= hi);
        let zl = Layout::z_only(self.layout.nz);
        let shift = 8 * nt as u32;
        let terms = self.terms[start..end].iter().map(|(m, c)| (Mono(m.0 << shift), c.clone())).collect();
        Ok(Self::from_sorted_unchecked(self.ring.clone(), zl, terms))
    }

    /// Textual form `c * t1^a z2^b + …`, terms in ascending monomial order.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            s.push_str(&self.ring.render(c));
            let mut first = true;
            for v in 0..self.layout.nvars() {
                let e = m.exp(v);
                if e > 0 {
                    s.push_str(if first { " * " } else { " " });
                    first = false;
                    let _ = write!(s, "{}^{}", self.layout.var_name(v), e);
                }
            }
        }
        s
    }
}

impl MultiPoly<PrimeField> {
    /// Coefficient of t₁^{pℓ₁−1}…t_r^{pℓ_r−1}.
    pub fn p_integral(&self, ell: &[u32]) -> Result<Self> {
        let p = self.ring.p();
        if ell.len() != self.layout.nt {
            return Err(KzpError::WrongArity { expected: self.layout.nt, got: ell.len() });
        }
        if ell.contains(&0) {
            return Err(KzpError::InvalidParameters("p-integral indices must be positive".into()));
        }
        let e: Vec<u32> = ell.iter().map(|&l| p * l - 1).collect();
        self.t_coefficient(&e)
    }

    /// Parse the textual form produced by [`MultiPoly::to_text`].
    pub fn parse_text(ring: PrimeField, layout: Layout, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero(ring, layout));
        }
        let mut terms = Vec::new();
        for term in text.split(" + ") {
            let (coef, rest) = match term.split_once(" * ") {
                Some((c, r)) => (c, r),
                None => (term, ""),
            };
            let c: i64 = coef.trim().parse().map_err(|_| KzpError::Parse(format!("bad coefficient '{coef}'")))?;
            let mut m = Mono::ONE;
            for factor in rest.split_whitespace() {
                let (name, e) = factor.split_once('^').ok_or_else(|| KzpError::Parse(format!("bad factor '{factor}'")))?;
                let e: u32 = e.parse().map_err(|_| KzpError::Parse(format!("bad exponent '{factor}'")))?;
                let idx: usize = name[1..].parse().map_err(|_| KzpError::Parse(format!("bad variable '{name}'")))?;
                let v = match &name[..1] {
                    "t" if idx >= 1 && idx <= layout.nt => idx - 1,
                    "z" if idx >= 1 && idx <= layout.nz => layout.nt + idx - 1,
                    _ => return Err(KzpError::Parse(format!("unknown variable '{name}'"))),
                };
                m = m.with_exp(v, e);
            }
            terms.push((m, ring.from_i64(c)));
        }
        Ok(Self::from_terms(ring, layout, terms))
    }
}

/// Polynomials over `R` in a fixed layout, viewed as a ring.
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    pub base: R,
    pub layout: Layout,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, layout: Layout) -> Self {
        PolyRing { base, layout }
    }

    /// The variables of the layout as ring elements.
    pub fn vars(&self) -> Vec<MultiPoly<R>> {
        (0..self.layout.nvars()).map(|v| MultiPoly::var(self.base.clone(), self.layout, v)).collect()
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = MultiPoly<R>;

    fn zero(&self) -> MultiPoly<R> {
        MultiPoly::zero(self.base.clone(), self.layout)
    }
    fn one(&self) -> MultiPoly<R> {
        MultiPoly::one(self.base.clone(), self.layout)
    }
    fn from_i64(&self, v: i64) -> MultiPoly<R> {
        MultiPoly::constant(self.base.clone(), self.layout, self.base.from_i64(v))
    }
    fn add(&self, a: &MultiPoly<R>, b: &MultiPoly<R>) -> MultiPoly<R> {
        a.add(b)
    }
    fn sub(&self, a: &MultiPoly<R>, b: &MultiPoly<R>) -> MultiPoly<R> {
        a.sub(b)
    }
    fn neg(&self, a: &MultiPoly<R>) -> MultiPoly<R> {
        a.neg()
    }
    fn mul(&self, a: &MultiPoly<R>, b: &MultiPoly<R>) -> MultiPoly<R> {
        a.mul(b)
    }
    fn inv(&self, a: &MultiPoly<R>) -> Option<MultiPoly<R>> {
        let c = a.as_constant()?;
        let ci = self.base.inv(&c)?;
        Some(MultiPoly::constant(self.base.clone(), self.layout, ci))
    }
    fn is_zero(&self, a: &MultiPoly<R>) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn render(&self, a: &MultiPoly<R>) -> String {
        a.to_text()
    }
    fn add_assign(&self, acc: &mut MultiPoly<R>, b: &MultiPoly<R>) {
        acc.add_assign(b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = fp(7);
        let l = Layout::new(1, 1).unwrap();
        let t = MultiPoly::t(f, l, 0);
        let z = MultiPoly::z(f, l, 0);
        let prod = t.sub(&z).mul(&t.add(&z));
        let expect = t.mul(&t).sub(&z.mul(&z));
        assert_eq!(prod, expect);
        assert_eq!(prod.len(), 2);
    }

    #[test]
    fn multiplicative_identity() {
        let f = fp(11);
        let l = Layout::new(1, 2).unwrap();
        let a = MultiPoly::t(f, l, 0).add(&MultiPoly::z(f, l, 1).pow(3));
        assert_eq!(a.mul(&MultiPoly::one(f, l)), a);
    }

    #[test]
    fn layout_mismatch_is_an_error() {
        let f = fp(7);
        let a = MultiPoly::one(f, Layout::new(1, 1).unwrap());
        let b = MultiPoly::one(f, Layout::new(0, 2).unwrap());
        assert!(matches!(a.checked_mul(&b), Err(KzpError::LayoutMismatch(_))));
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let f = fp(7);
        let l = Layout::z_only(1);
        let z = MultiPoly::z(f, l, 0).pow(200);
        assert!(matches!(z.checked_mul(&z), Err(KzpError::ExponentOverflow { .. })));
    }

    #[test]
    fn p_integral_of_monomial() {
        let f = fp(5);
        let l = Layout::new(1, 3).unwrap();
        let t = MultiPoly::t(f, l, 0);
        let got = t.pow(4).p_integral(&[1]).unwrap();
        assert_eq!(got, MultiPoly::one(f, Layout::z_only(3)));
        assert!(t.pow(3).p_integral(&[1]).unwrap().is_zero());
    }

    #[test]
    fn p_integral_arity() {
        let f = fp(5);
        let l = Layout::new(2, 1).unwrap();
        let a = MultiPoly::one(f, l);
        assert!(matches!(a.p_integral(&[1]), Err(KzpError::WrongArity { expected: 2, got: 1 })));
    }

    #[test]
    fn antisymmetrize_examples() {
        let f = fp(7);
        let l = Layout::new(2, 0).unwrap();
        let t1 = MultiPoly::t(f, l, 0);
        let t2 = MultiPoly::t(f, l, 1);
        assert!(t1.mul(&t2).antisymmetrize_t().is_zero());
        assert_eq!(t1.antisymmetrize_t(), t1.sub(&t2));
        let expect = t1.pow(2).mul(&t2).sub(&t2.pow(2).mul(&t1));
        assert_eq!(t1.pow(2).mul(&t2).antisymmetrize_t(), expect);
        assert_eq!(t1.symmetrize_t(), t1.add(&t2));
    }

    #[test]
    fn text_round_trip() {
        let f = fp(13);
        let l = Layout::new(1, 2).unwrap();
        let a = MultiPoly::t(f, l, 0).pow(3).sub(&MultiPoly::z(f, l, 1).scale(&5)).add(&MultiPoly::one(f, l));
        let s = a.to_text();
        assert_eq!(MultiPoly::parse_text(f, l, &s).unwrap(), a);
    }

    #[test]
    fn derivative_and_eval() {
        let f = fp(101);
        let l = Layout::z_only(2);
        let x = MultiPoly::z(f, l, 0);
        let y = MultiPoly::z(f, l, 1);
        let a = x.pow(3).mul(&y).add(&y.pow(2));
        let da = a.derivative(0);
        assert_eq!(da, x.pow(2).mul(&y).scale(&3));
        assert_eq!(a.eval(&[2, 3]), (8 * 3 + 9));
    }
}
