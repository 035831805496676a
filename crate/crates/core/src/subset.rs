//! Bitmask subsets of a small ground set `{0, .., n-1}`.

/// Subset of the ground set, bit `i` set when element `i` is a member.
pub type Subset = u32;

pub fn full(n: usize) -> Subset {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn size(s: Subset) -> usize {
    s.count_ones() as usize
}

pub fn contains(s: Subset, i: usize) -> bool {
    (s >> i) & 1 == 1
}

pub fn elements(s: Subset) -> Vec<usize> {
    (0..32).filter(|&i| contains(s, i)).collect()
}

pub fn from_elements(elements: &[usize]) -> Subset {
    elements.iter().fold(0, |acc, &i| acc | 1 << i)
}

/// Sorts subsets lexicographically by their ascending element lists,
/// so `{0,3}` precedes `{1,2}`.
pub fn sort_lex(sets: &mut [Subset]) {
    sets.sort_by_key(|&s| elements(s));
}

/// All `k`-element subsets of `pool`, in lexicographic order of the chosen elements.
pub fn combinations<T: Clone>(pool: &[T], k: usize) -> Vec<Vec<T>> {
    let n = pool.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| pool[i].clone()).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// 1-based display form, e.g. `{1,2,4}`.
pub fn display(s: Subset) -> String {
    let inner: Vec<String> = elements(s).iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}
