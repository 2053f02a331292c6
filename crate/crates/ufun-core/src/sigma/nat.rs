//! Position arithmetic on the number line with powers of two skipped.
//!
//! The sequence construction never assigns anything at positions `2^j`
//! (`j >= 1`); those are reserved for the squaring rule. Both the table
//! generator (`u64` domain) and the analytic evaluator (`BigUint` domain)
//! need "the m-th non-power position at or after a", so both flavors live
//! here. Note that 1 is not treated as a power of two.

use num_bigint::BigUint;
use num_traits::Zero;

pub fn is_power_of_two(x: u64) -> bool {
    x >= 2 && x & (x - 1) == 0
}

/// Number of powers of two `2^j` with `j >= 1` in `[1, x]`.
fn powers_upto(x: u64) -> u64 {
    if x < 2 {
        0
    } else {
        63 - u64::from(x.leading_zeros())
    }
}

/// Number of powers of two in `[a, b]`, with `a >= 1`.
pub fn pow_count(a: u64, b: u64) -> u64 {
    if b < a {
        0
    } else {
        powers_upto(b) - powers_upto(a - 1)
    }
}

/// First non-power position strictly after `x`.
pub fn next_nonpower(x: u64) -> u64 {
    let mut y = x + 1;
    while is_power_of_two(y) {
        y += 1;
    }
    y
}

/// The `m`-th non-power position at or after `a` (`a >= 1`, `m >= 1`).
///
/// Computed as the least fixed point of `x = a + m - 1 + pow_count(a, x)`;
/// the iteration is monotone from below and stabilizes in O(log) steps.
pub fn mth_nonpower(a: u64, m: u64) -> u64 {
    debug_assert!(a >= 1 && m >= 1);
    let mut x = a + m - 1;
    loop {
        let next = a + m - 1 + pow_count(a, x);
        if next == x {
            return x;
        }
        x = next;
    }
}

pub fn is_power_of_two_big(x: &BigUint) -> bool {
    x.bits() >= 2 && x.count_ones() == 1
}

fn powers_upto_big(x: &BigUint) -> u64 {
    x.bits().saturating_sub(1)
}

/// Number of powers of two in `[a, b]`, with `a >= 1`.
pub fn pow_count_big(a: &BigUint, b: &BigUint) -> u64 {
    if b < a {
        0
    } else {
        powers_upto_big(b) - powers_upto_big(&(a - 1u8))
    }
}

pub fn next_nonpower_big(x: &BigUint) -> BigUint {
    let mut y = x + 1u8;
    while is_power_of_two_big(&y) {
        y += 1u8;
    }
    y
}

pub fn mth_nonpower_big(a: &BigUint, m: &BigUint) -> BigUint {
    debug_assert!(!a.is_zero() && !m.is_zero());
    let base = a + m - 1u8;
    let mut x = base.clone();
    loop {
        let next = &base + BigUint::from(pow_count_big(a, &x));
        if next == x {
            return x;
        }
        x = next;
    }
}

/// Integer square root (floor), for inverting triangular numbers.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    // Newton iteration from an upper bound; monotone once below it.
    let bits = 64 - n.leading_zeros() as u64;
    let mut x0 = 1u64 << ((bits + 1) / 2);
    let mut x1 = (x0 + n / x0) / 2;
    while x1 < x0 {
        x0 = x1;
        x1 = (x0 + n / x0) / 2;
    }
    x0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_predicate() {
        assert!(!is_power_of_two(1));
        assert!(is_power_of_two(2));
        assert!(!is_power_of_two(3));
        assert!(is_power_of_two(4));
        assert!(is_power_of_two(1 << 40));
        assert!(!is_power_of_two((1 << 40) + 1));
    }

    #[test]
    fn counting_powers() {
        assert_eq!(pow_count(1, 1), 0);
        assert_eq!(pow_count(1, 16), 4); // 2, 4, 8, 16
        assert_eq!(pow_count(3, 8), 2); // 4, 8
        assert_eq!(pow_count(5, 7), 0);
        assert_eq!(pow_count(56, 111), 1); // 64
        assert_eq!(pow_count(127, 253), 1); // 128
    }

    #[test]
    fn nonpower_stepping() {
        assert_eq!(next_nonpower(1), 3); // 2 skipped
        assert_eq!(next_nonpower(3), 5); // 4 skipped
        assert_eq!(next_nonpower(5), 6);
        assert_eq!(mth_nonpower(1, 1), 1);
        assert_eq!(mth_nonpower(3, 1), 3);
        assert_eq!(mth_nonpower(56, 55), 111);
        assert_eq!(mth_nonpower(23, 20), 43); // 32 skipped on the way
        assert_eq!(mth_nonpower(30, 3), 33); // 32 skipped
    }

    #[test]
    fn big_helpers_agree_with_u64() {
        for a in 1u64..200 {
            for m in 1u64..100 {
                let big = mth_nonpower_big(&BigUint::from(a), &BigUint::from(m));
                assert_eq!(big, BigUint::from(mth_nonpower(a, m)), "a={a} m={m}");
            }
        }
        for a in 1u64..300 {
            for b in a..300 {
                assert_eq!(
                    pow_count_big(&BigUint::from(a), &BigUint::from(b)),
                    pow_count(a, b)
                );
            }
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in 0u64..10_000 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n={n} r={r}");
        }
        assert_eq!(isqrt(u64::MAX), (1u64 << 32) - 1);
    }
}
