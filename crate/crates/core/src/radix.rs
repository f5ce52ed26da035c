//! Mixed-radix encodings. The first digit is the most significant.

/// Encodes `digits` against `radices`; digit `i` must be `< radices[i]`.
pub fn encode(digits: &[usize], radices: &[usize]) -> usize {
    debug_assert_eq!(digits.len(), radices.len());
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

pub fn decode(mut code: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        let r = radices[i];
        out[i] = code % r;
        code /= r;
    }
    out
}

pub fn decode_into(mut code: usize, radices: &[usize], out: &mut [usize]) {
    for i in (0..radices.len()).rev() {
        let r = radices[i];
        out[i] = code % r;
        code /= r;
    }
}

pub fn decode_uniform(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for i in (0..len).rev() {
        out[i] = code % base;
        code /= base;
    }
    out
}

pub fn encode_uniform(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Product of `radices`, or `None` on overflow.
pub fn volume(radices: &[usize]) -> Option<usize> {
    radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Position-wise inverse of a permutation.
pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// The function composite `q ∘ p`, i.e. `i ↦ q[p[i]]`.
pub fn compose_after(q: &[usize], p: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        assert_eq!(permutations(4).len(), 24);
    }

    proptest! {
        #[test]
        fn encode_decode_roundtrip(radices in proptest::collection::vec(1usize..5, 0..5), seed in any::<usize>()) {
            let vol = volume(&radices).unwrap();
            let code = seed % vol;
            let d = decode(code, &radices);
            prop_assert_eq!(encode(&d, &radices), code);
        }
    }
}
