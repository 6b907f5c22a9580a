//! Wedge extensions of C̃_a in good-basis coordinates and their kernels on
//! ∧^r V, the bidegree blocks V_{k,r−k} (k factors among v_1..v_g) and the
//! primitive parts P_{k,r−k}.

use serde::Serialize;

use super::{wedge_power_map, GoodBasis};
use crate::algebra::combinat::{binom, SubsetIndex};
use crate::algebra::exterior::{basis_vector, induced_derivation};
use crate::algebra::matrix::{Matrix, Subspace};
use crate::algebra::ring::Ring;
use crate::error::{KzpError, Result};

/// Leibniz extensions of the operators to ∧^r.
pub fn wedge_pcurv<S: Ring>(ops: &[Matrix<S>], r: usize) -> Vec<Matrix<S>> {
    ops.iter().map(|c| induced_derivation(c, r)).collect()
}

/// Positions in ∧^r K^{2g} of basis elements with exactly k factors v_i.
pub fn block_positions(g: usize, r: usize, k: usize) -> Vec<usize> {
    SubsetIndex::new(2 * g, r)
        .iter()
        .enumerate()
        .filter(|(_, set)| set.iter().filter(|&&i| i < g).count() == k)
        .map(|(i, _)| i)
        .collect()
}

/// P_r = ker (D∧)^{g−r+1} on ∧^r V for 1 ≤ r ≤ g, using D in basis coordinates.
pub fn primitive_coords<S: Ring>(s: &S, gb: &GoodBasis<S>, r: usize) -> Result<Subspace<S>> {
    let g = gb.g;
    if r == 0 || r > g {
        return Err(KzpError::InvalidParameters(format!("primitive part needs 1 ≤ r ≤ g, got r={r}")));
    }
    let whole = Subspace::whole(s.clone(), SubsetIndex::new(2 * g, r).len());
    Ok(match wedge_power_map(s, 2 * g, 2, &gb.poincare, r, g + 1 - r) {
        Some(m) => whole.kernel_of(&m),
        None => whole,
    })
}

fn restrict<S: Ring>(s: &S, sub: &Subspace<S>, pos: &[usize]) -> Subspace<S> {
    let vecs: Vec<Vec<S::Elem>> = sub.basis().iter().map(|v| pos.iter().map(|&i| v[i].clone()).collect()).collect();
    Subspace::span(s.clone(), pos.len(), &vecs)
}

fn embed<S: Ring>(s: &S, sub: &Subspace<S>, pos: &[usize], dim: usize) -> Subspace<S> {
    let vecs: Vec<Vec<S::Elem>> = sub
        .basis()
        .iter()
        .map(|v| {
            let mut out = vec![s.zero(); dim];
            for (x, &i) in v.iter().zip(pos) {
                out[i] = x.clone();
            }
            out
        })
        .collect();
    Subspace::span(s.clone(), dim, &vecs)
}

fn unit_span<S: Ring>(s: &S, dim: usize, pos: &[usize]) -> Subspace<S> {
    let vecs: Vec<Vec<S::Elem>> = pos
        .iter()
        .map(|&i| {
            let mut v = vec![s.zero(); dim];
            v[i] = s.one();
            v
        })
        .collect();
    Subspace::span(s.clone(), dim, &vecs)
}

fn stack<S: Ring>(s: &S, mats: &[Matrix<S>], cols: usize) -> Matrix<S> {
    let mut acc = Matrix::zeros(s.clone(), 0, cols);
    for m in mats {
        acc = acc.vstack(m);
    }
    acc
}

/// Dimensions on one block V_{k,r−k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDims {
    pub k: usize,
    pub block: usize,
    pub kernel: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive_kernel: Option<usize>,
}

/// Kernel data on ∧^r V; subspaces are in full ∧^r coordinates.
#[derive(Clone, Debug)]
pub struct KernelAudit<S: Ring> {
    pub g: usize,
    pub r: usize,
    pub ops: Vec<Matrix<S>>,
    /// block maps V_{k,r−k} → V_{k−1,r−k+1}, indexed [k][a] (empty for k = 0)
    pub block_maps: Vec<Vec<Matrix<S>>>,
    pub blocks: Vec<BlockDims>,
    pub block_kernels: Vec<Subspace<S>>,
    pub primitive: Option<Subspace<S>>,
    pub primitive_blocks: Vec<Subspace<S>>,
    /// true when every operator maps V_{k,r−k} into V_{k−1,r−k+1}
    pub graded: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct AuditOptions {
    /// compute primitive parts (needs r ≤ g)
    pub primitive: bool,
    /// restrict to one block
    pub only_k: Option<usize>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { primitive: true, only_k: None }
    }
}

pub fn kernel_audit<S: Ring>(s: &S, gb: &GoodBasis<S>, r: usize, opts: AuditOptions) -> Result<KernelAudit<S>> {
    let g = gb.g;
    if r == 0 || r > 2 * g {
        return Err(KzpError::InvalidParameters(format!("need 1 ≤ r ≤ 2g, got r={r}")));
    }
    let dim = SubsetIndex::new(2 * g, r).len();
    let ops = wedge_pcurv(&gb.ops, r);
    let pos: Vec<Vec<usize>> = (0..=r).map(|k| block_positions(g, r, k)).collect();
    let mut graded = true;
    for op in &ops {
        for (k, src) in pos.iter().enumerate() {
            for &c in src {
                for (kk, dst) in pos.iter().enumerate() {
                    if k == 0 || kk + 1 != k {
                        graded &= dst.iter().all(|&row| s.is_zero(op.get(row, c)));
                    }
                }
            }
        }
    }
    let primitive = if opts.primitive && r <= g { Some(primitive_coords(s, gb, r)?) } else { None };
    let wanted = |k: usize| opts.only_k.is_none_or(|o| o == k);
    let mut block_maps = Vec::new();
    let mut blocks = Vec::new();
    let mut block_kernels = Vec::new();
    let mut primitive_blocks = Vec::new();
    for k in 0..=r {
        let src = &pos[k];
        if !wanted(k) || src.is_empty() {
            block_maps.push(Vec::new());
            block_kernels.push(Subspace::zero(s.clone(), dim));
            primitive_blocks.push(Subspace::zero(s.clone(), dim));
            blocks.push(BlockDims { k, block: src.len(), kernel: 0, primitive: None, primitive_kernel: None });
            continue;
        }
        let maps: Vec<Matrix<S>> = if k == 0 {
            Vec::new()
        } else {
            ops.iter().map(|op| op.select_rows(&pos[k - 1]).select_cols(src)).collect()
        };
        let kernel_block = if k == 0 {
            Subspace::whole(s.clone(), src.len())
        } else {
            Subspace::whole(s.clone(), src.len()).kernel_of(&stack(s, &maps, src.len()))
        };
        let (pd, pk, pfull) = match &primitive {
            Some(pr) => {
                let pb = pr.intersect(&unit_span(s, dim, src));
                let pb_local = restrict(s, &pb, src);
                let pk = if k == 0 { pb_local.clone() } else { pb_local.kernel_of(&stack(s, &maps, src.len())) };
                (Some(pb.dim()), Some(pk.dim()), pb)
            }
            None => (None, None, Subspace::zero(s.clone(), dim)),
        };
        blocks.push(BlockDims { k, block: src.len(), kernel: kernel_block.dim(), primitive: pd, primitive_kernel: pk });
        block_kernels.push(embed(s, &kernel_block, src, dim));
        primitive_blocks.push(pfull);
        block_maps.push(maps);
    }
    Ok(KernelAudit { g, r, ops, block_maps, blocks, block_kernels, primitive, primitive_blocks, graded })
}

impl<S: Ring> KernelAudit<S> {
    pub fn kernel_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.kernel).sum()
    }

    pub fn primitive_kernel_dim(&self) -> Option<usize> {
        self.blocks.iter().map(|b| b.primitive_kernel).sum()
    }

    pub fn kernel(&self, s: &S) -> Subspace<S> {
        let dim = SubsetIndex::new(2 * self.g, self.r).len();
        self.block_kernels.iter().fold(Subspace::zero(s.clone(), dim), |acc, b| acc.sum(b))
    }

    /// Σ_a C̃_a(U) for U in full coordinates.
    pub fn image_sum(&self, s: &S, u: &Subspace<S>) -> Subspace<S> {
        let dim = u.ambient_dim();
        self.ops.iter().fold(Subspace::zero(s.clone(), dim), |acc, op| acc.sum(&u.image(op)))
    }

    /// ∩_a ker C̃_a on U, computed directly.
    pub fn kernel_on(&self, s: &S, u: &Subspace<S>) -> Subspace<S> {
        u.kernel_of(&stack(s, &self.ops, u.ambient_dim()))
    }
}

/// Expected dim P_r = C(2g,r) − C(2g,r−2).
pub fn primitive_dim(g: usize, r: usize) -> usize {
    (binom(2 * g as i64, r as i64) - binom(2 * g as i64, r as i64 - 2)) as usize
}

/// α_k, β_k (k = 1..g−1) in ∧³ coordinates of a basis v_1..v_g, w_1..w_g.
pub fn alpha_beta<S: Ring>(s: &S, g: usize) -> (Vec<Vec<S::Elem>>, Vec<Vec<S::Elem>>) {
    let d = 2 * g;
    let dim = SubsetIndex::new(d, 3).len();
    let term = |acc: &mut Vec<S::Elem>, v: usize, a: usize, b: usize| {
        let e = basis_vector(s, d, &[v - 1, g + a - 1, g + b - 1]);
        for (x, y) in acc.iter_mut().zip(e) {
            *x = s.add(x, &y);
        }
    };
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    for k in 1..g {
        let mut al = vec![s.zero(); dim];
        let mut be = vec![s.zero(); dim];
        for a in 1..=k {
            for b in k + 1..=g {
                term(&mut al, a + b - k - 1, a, b);
                term(&mut be, a + b - k, a, b);
            }
        }
        alphas.push(al);
        betas.push(be);
    }
    (alphas, betas)
}

/// α_{i;k1,k2} for i = 0,1,2 and 1 ≤ k1 < k2 ≤ g−1, in ∧⁴ coordinates;
/// terms whose v-index leaves 1..g are dropped.
pub fn alpha_triple<S: Ring>(s: &S, g: usize) -> Vec<Vec<S::Elem>> {
    let d = 2 * g;
    let dim = SubsetIndex::new(d, 4).len();
    let mut out = Vec::new();
    for i in 0..3usize {
        for k1 in 1..g {
            for k2 in k1 + 1..g {
                let mut v = vec![s.zero(); dim];
                for a in 1..=k1 {
                    for b in k1 + 1..=k2 {
                        for c in k2 + 1..=g {
                            let idx = (a + b + c + i) as i64 - (k1 + k2 + 2) as i64;
                            if idx < 1 || idx > g as i64 {
                                continue;
                            }
                            let e = basis_vector(s, d, &[idx as usize - 1, g + a - 1, g + b - 1, g + c - 1]);
                            for (x, y) in v.iter_mut().zip(e) {
                                *x = s.add(x, &y);
                            }
                        }
                    }
                }
                out.push(v);
            }
        }
    }
    out
}
