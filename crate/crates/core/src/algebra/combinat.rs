//! Permutations, binomials and lexicographic subset enumeration.

/// All permutations of 0..r in lexicographic order, with their signs.
pub fn permutations(r: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push((cur.clone(), perm_sign(&cur)));
        // next permutation
        let Some(i) = (1..r).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..r).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn perm_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Binomial coefficient; zero outside 0 ≤ k ≤ n.
pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// r-element subsets of {0, …, d−1} in lexicographic order.
pub fn subsets(d: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > d {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < d - r + i) else { break };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

pub fn mask_of(s: &[usize]) -> u32 {
    s.iter().fold(0u32, |m, &i| m | (1 << i))
}

/// Lexicographically ordered r-subsets of a d-set with O(1) lookup by mask.
#[derive(Clone, Debug)]
pub struct SubsetIndex {
    pub d: usize,
    pub r: usize,
    subsets: Vec<Vec<usize>>,
    masks: Vec<u32>,
    index: Vec<u32>,
}

impl SubsetIndex {
    pub fn new(d: usize, r: usize) -> Self {
        assert!(d <= 24, "subset universe too large");
        let subsets = subsets(d, r);
        let masks: Vec<u32> = subsets.iter().map(|s| mask_of(s)).collect();
        let mut index = vec![u32::MAX; 1 << d];
        for (i, &m) in masks.iter().enumerate() {
            index[m as usize] = i as u32;
        }
        SubsetIndex { d, r, subsets, masks, index }
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.subsets[i]
    }

    pub fn mask(&self, i: usize) -> u32 {
        self.masks[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.subsets.iter()
    }

    pub fn position_mask(&self, m: u32) -> Option<usize> {
        if (m as usize) >= self.index.len() {
            return None;
        }
        let i = self.index[m as usize];
        (i != u32::MAX).then_some(i as usize)
    }

    pub fn position(&self, s: &[usize]) -> Option<usize> {
        self.position_mask(mask_of(s))
    }
}

/// Sign and sorted order of a tuple of distinct indices; `None` on repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    // insertion sort counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count_and_sign_balance() {
        let ps = permutations(4);
        assert_eq!(ps.len(), 24);
        assert_eq!(ps.iter().map(|(_, s)| s).sum::<i32>(), 0);
        assert_eq!(ps[0].0, vec![0, 1, 2, 3]);
        assert_eq!(permutations(0).len(), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(7, 3), 35);
        assert_eq!(binom(4, -1), 0);
        assert_eq!(binom(4, 0), 1);
        assert_eq!(binom(3, 5), 0);
    }

    #[test]
    fn subsets_are_lexicographic() {
        let s = subsets(4, 2);
        assert_eq!(s, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(5, 0), vec![Vec::<usize>::new()]);
        let idx = SubsetIndex::new(6, 3);
        assert_eq!(idx.len(), 20);
        for i in 0..idx.len() {
            assert_eq!(idx.position(idx.get(i)), Some(i));
        }
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
        assert_eq!(sort_with_sign(&[3, 1, 3]), None);
    }
}
