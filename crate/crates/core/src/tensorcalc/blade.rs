//! Strictly increasing index sets stored as bitmasks.

pub type Mask = u32;

pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..32usize).filter(move |i| mask >> i & 1 == 1)
}

pub fn grade(mask: Mask) -> usize {
    mask.count_ones() as usize
}

pub fn bit(i: usize) -> Mask {
    1 << i
}

/// Number of elements of `mask` strictly greater than `l`.
pub fn count_above(mask: Mask, l: usize) -> usize {
    if l >= 31 {
        0
    } else {
        (mask >> (l + 1)).count_ones() as usize
    }
}

/// Number of elements of `mask` strictly smaller than `l`.
pub fn count_below(mask: Mask, l: usize) -> usize {
    (mask & ((1u32 << l) - 1)).count_ones() as usize
}

/// Parity of the shuffle that sorts the concatenation `a ++ b`, or `None` if
/// the sets overlap.
pub fn merge_sign(a: Mask, b: Mask) -> Option<usize> {
    if a & b != 0 {
        return None;
    }
    Some(bits(b).map(|y| count_above(a, y)).sum())
}

/// All masks of the given grade over `n` indices, in lexicographic order of
/// their index lists.
pub fn all_of_grade(n: usize, k: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: Mask, out: &mut Vec<Mask>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            rec(i + 1, n, k - 1, cur | bit(i), out);
        }
    }
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Sort an index list into a mask, returning the permutation parity, or
/// `None` on repeated indices.
pub fn sort_indices(idx: &[usize]) -> Option<(Mask, usize)> {
    let mut mask = 0;
    let mut parity = 0;
    for &i in idx {
        if mask & bit(i) != 0 {
            return None;
        }
        parity += count_above(mask, i);
        mask |= bit(i);
    }
    Some((mask, parity))
}

/// Lexicographic comparison key for printing.
pub fn lex_key(mask: Mask) -> Vec<usize> {
    bits(mask).collect()
}
