//! Koszul signs of permutations of homogeneous symbols.

/// Sign (as ±1) picked up when the sequence of symbols with degrees `deg` is rearranged so that
/// position `i` of the new sequence holds old symbol `order[i]`.
pub fn koszul_sign(deg: &[i64], order: &[usize]) -> i64 {
    debug_assert_eq!(deg.len(), order.len());
    let mut odd = false;
    for i in 0..order.len() {
        let di = deg[order[i]];
        if di.rem_euclid(2) == 0 {
            continue;
        }
        for j in i + 1..order.len() {
            if order[j] < order[i] && deg[order[j]].rem_euclid(2) != 0 {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Sign of a permutation given in one-line notation (0-based).
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let ones = vec![1; perm.len()];
    koszul_sign(&ones, perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_of_odd_symbols() {
        assert_eq!(koszul_sign(&[1, 1], &[1, 0]), -1);
        assert_eq!(koszul_sign(&[1, 2], &[1, 0]), 1);
        assert_eq!(koszul_sign(&[1, 0, 1], &[2, 1, 0]), -1);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign(&[2, 1, 0]), -1);
    }
}
