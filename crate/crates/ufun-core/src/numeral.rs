//! Exact natural numbers (starting at 1) with a symbolic fast path for
//! powers of two.
//!
//! The values this crate manipulates split into two regimes: ordinary
//! numbers that fit comfortably in memory, and towers like `2^(2^40 * 3)`
//! whose digits never fit anywhere but whose structure is trivial. A
//! [`Numeral`] is either a plain big natural or `2^e` with `e` again a
//! numeral. Canonically the symbolic form is used exactly when the exponent
//! exceeds [`POW2_EXPONENT_THRESHOLD`]; below that the digits are
//! materialized, so equality and ordering are representation-independent
//! after [`Numeral::normalize`].

use alloc::boxed::Box;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exponent bound above which a power of two stays symbolic. `2^(2^20)` is a
/// one-megabit number; anything larger is never materialized.
pub const POW2_EXPONENT_THRESHOLD: u64 = 1 << 20;

/// A natural number `>= 1`, either as explicit digits or as `2^e`.
///
/// `Pow2(e)` denotes exactly `2^e`. Since exponents are themselves numerals
/// (hence `>= 1`), the symbolic form never represents 1, and nesting
/// expresses towers such as `2^(2^(2^21))`.
#[derive(Clone, Debug)]
pub enum Numeral {
    Plain(BigUint),
    Pow2(Box<Numeral>),
}

/// Arithmetic failure on numerals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumeralError {
    /// The operation would require materializing a number beyond the plain
    /// budget (e.g. incrementing an exponent that is itself symbolic).
    MagnitudeBudget,
}

impl fmt::Display for NumeralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumeralError::MagnitudeBudget => {
                write!(f, "operation exceeds the plain-magnitude budget")
            }
        }
    }
}

/// Error produced when parsing a numeral from text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseNumeralError {
    Empty,
    Zero,
    InvalidDigit,
}

impl fmt::Display for ParseNumeralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseNumeralError::Empty => write!(f, "empty numeral"),
            ParseNumeralError::Zero => write!(f, "numerals start at 1; got 0"),
            ParseNumeralError::InvalidDigit => write!(f, "invalid digit in numeral"),
        }
    }
}

impl Numeral {
    /// Builds a numeral from a `u64`. Panics on 0: the domain starts at 1.
    pub fn from_u64(n: u64) -> Self {
        assert!(n >= 1, "numerals start at 1");
        Numeral::Plain(BigUint::from(n))
    }

    /// Builds a numeral from a big natural, normalizing. Panics on 0.
    pub fn from_biguint(n: BigUint) -> Self {
        assert!(!n.is_zero(), "numerals start at 1");
        Numeral::Plain(n).normalize()
    }

    /// Builds `2^exponent`, in canonical form.
    pub fn pow2(exponent: Numeral) -> Self {
        Numeral::Pow2(Box::new(exponent)).normalize()
    }

    pub fn one() -> Self {
        Numeral::Plain(BigUint::one())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Numeral::Plain(m) if m.is_one())
    }

    /// Canonical representation: `Pow2` exactly when the exponent exceeds
    /// the threshold, `Plain` otherwise. Value unchanged.
    pub fn normalize(self) -> Self {
        match self {
            Numeral::Plain(m) => {
                if m.count_ones() == 1 {
                    // trailing_zeros is Some for nonzero values
                    let k = m.trailing_zeros().unwrap_or(0);
                    if k > POW2_EXPONENT_THRESHOLD {
                        return Numeral::Pow2(Box::new(Numeral::from_u64(k)));
                    }
                }
                Numeral::Plain(m)
            }
            Numeral::Pow2(e) => {
                let e = e.normalize();
                match e.to_u64() {
                    Some(k) if k <= POW2_EXPONENT_THRESHOLD => {
                        Numeral::Plain(BigUint::one() << k)
                    }
                    _ => Numeral::Pow2(Box::new(e)),
                }
            }
        }
    }

    /// Total order on values, independent of representation.
    pub fn compare(&self, other: &Numeral) -> Ordering {
        match (self, other) {
            (Numeral::Plain(a), Numeral::Plain(b)) => a.cmp(b),
            (Numeral::Pow2(e1), Numeral::Pow2(e2)) => e1.compare(e2),
            (Numeral::Pow2(e), Numeral::Plain(m)) => cmp_pow2_plain(e, m),
            (Numeral::Plain(m), Numeral::Pow2(e)) => cmp_pow2_plain(e, m).reverse(),
        }
    }

    /// `a * a`. Symbolic forms square by doubling the exponent, never
    /// touching digits. Fails only on exponents nested too deep to adjust.
    pub fn square(&self) -> Result<Numeral, NumeralError> {
        match self {
            Numeral::Plain(m) => Ok(Numeral::Plain(m * m).normalize()),
            Numeral::Pow2(e) => Ok(Numeral::Pow2(Box::new(e.double()?)).normalize()),
        }
    }

    /// `2 * a`, used for exponent arithmetic.
    pub fn double(&self) -> Result<Numeral, NumeralError> {
        match self {
            Numeral::Plain(m) => Ok(Numeral::Plain(m << 1u8).normalize()),
            // 2 * 2^x = 2^(x+1)
            Numeral::Pow2(x) => Ok(Numeral::Pow2(Box::new(x.succ()?)).normalize()),
        }
    }

    /// `a + 1`.
    pub fn succ(&self) -> Result<Numeral, NumeralError> {
        match self {
            Numeral::Plain(m) => Ok(Numeral::Plain(m + 1u8).normalize()),
            // 2^e + 1 is not a power of two; it only exists in plain form,
            // which the canonical invariant (exponent above threshold) rules out.
            Numeral::Pow2(_) => Err(NumeralError::MagnitudeBudget),
        }
    }

    /// Returns `k` when the value is `2^k` with `k >= 1`; 1 itself is not
    /// counted as a power.
    pub fn as_pow2_exponent(&self) -> Option<Numeral> {
        match self {
            Numeral::Plain(m) => {
                if m.count_ones() == 1 {
                    let k = m.trailing_zeros().unwrap_or(0);
                    if k >= 1 {
                        return Some(Numeral::from_u64(k));
                    }
                }
                None
            }
            Numeral::Pow2(e) => Some((**e).clone()),
        }
    }

    /// Digits of the value when it is plain-representable.
    pub fn to_biguint(&self) -> Option<BigUint> {
        match self {
            Numeral::Plain(m) => Some(m.clone()),
            Numeral::Pow2(e) => {
                let k = e.to_u64()?;
                if k <= POW2_EXPONENT_THRESHOLD {
                    Some(BigUint::one() << k)
                } else {
                    None
                }
            }
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Numeral::Plain(m) => {
                let digits = m.to_u64_digits();
                match digits.len() {
                    0 => Some(0),
                    1 => Some(digits[0]),
                    _ => None,
                }
            }
            Numeral::Pow2(e) => {
                let k = e.to_u64()?;
                if k <= 63 {
                    Some(1u64 << k)
                } else {
                    None
                }
            }
        }
    }

    /// Bit length of the value, when it is small enough for that to be a
    /// meaningful `u64` (i.e. plain-representable).
    pub fn bits(&self) -> Option<u64> {
        match self {
            Numeral::Plain(m) => Some(m.bits()),
            Numeral::Pow2(e) => e.to_u64().and_then(|k| k.checked_add(1)),
        }
    }
}

/// Compares `2^e` against a plain `m >= 1` without materializing `2^e`.
fn cmp_pow2_plain(e: &Numeral, m: &BigUint) -> Ordering {
    let b = m.bits(); // m >= 1, so b >= 1 and 2^(b-1) <= m < 2^b
    let edge = Numeral::Plain(BigUint::from(b - 1));
    match e.compare(&edge) {
        Ordering::Less => Ordering::Less,
        Ordering::Greater => Ordering::Greater,
        Ordering::Equal => {
            if m.count_ones() == 1 {
                Ordering::Equal
            } else {
                Ordering::Less
            }
        }
    }
}

impl PartialEq for Numeral {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for Numeral {}

impl PartialOrd for Numeral {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl Ord for Numeral {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl From<u64> for Numeral {
    fn from(n: u64) -> Self {
        Numeral::from_u64(n)
    }
}

impl fmt::Display for Numeral {
    /// Plain values render as decimal digits; symbolic values render as
    /// `2^e` with the exponent rendered recursively, so output stays bounded.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Numeral::Plain(m) => write!(f, "{}", m.to_str_radix(10)),
            Numeral::Pow2(e) => write!(f, "2^{}", e),
        }
    }
}

impl FromStr for Numeral {
    type Err = ParseNumeralError;

    /// Grammar: `numeral := digits | "2^" numeral` (nestable).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseNumeralError::Empty);
        }
        if let Some(rest) = s.strip_prefix("2^") {
            let e: Numeral = rest.parse()?;
            return Ok(Numeral::pow2(e));
        }
        if !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseNumeralError::InvalidDigit);
        }
        let m = BigUint::from_str(s).map_err(|_| ParseNumeralError::InvalidDigit)?;
        if m.is_zero() {
            return Err(ParseNumeralError::Zero);
        }
        Ok(Numeral::from_biguint(m))
    }
}

/// Renders any numeral to its display form.
pub fn render(n: &Numeral) -> String {
    alloc::format!("{}", n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use core::cmp::Ordering;

    fn plain(n: u64) -> Numeral {
        Numeral::from_u64(n)
    }

    #[test]
    fn normalize_materializes_small_pow2() {
        let n = Numeral::Pow2(Box::new(plain(3))).normalize();
        assert_eq!(n, plain(8));
        assert!(matches!(n, Numeral::Plain(_)));
    }

    #[test]
    fn normalize_keeps_plain_below_threshold() {
        let n = plain(1024).normalize();
        assert!(matches!(n, Numeral::Plain(_)));
        assert_eq!(n, plain(1024));
    }

    #[test]
    fn normalize_resolves_nested_exponent() {
        // 2^(2^20): the inner exponent materializes, the outer form is at
        // the threshold so it materializes too (a one-megabit number).
        let n = Numeral::Pow2(Box::new(Numeral::Pow2(Box::new(plain(20))))).normalize();
        match &n {
            Numeral::Plain(m) => {
                assert_eq!(m.bits(), (1u64 << 20) + 1);
                assert_eq!(m.count_ones(), 1);
            }
            Numeral::Pow2(_) => panic!("2^(2^20) is exactly at the plain budget"),
        }
        // One step beyond stays symbolic.
        let big = Numeral::pow2(plain((1 << 20) + 1));
        assert!(matches!(big, Numeral::Pow2(_)));
    }

    #[test]
    fn compare_mixed_representations() {
        assert_eq!(plain(7).compare(&Numeral::pow2(plain(3))), Ordering::Less);
        assert_eq!(
            Numeral::pow2(plain(100)).compare(&Numeral::pow2(plain(100))),
            Ordering::Equal
        );
        // 2^(2^20) vastly exceeds 10^6
        let giant = Numeral::pow2(plain(1 << 20));
        assert_eq!(giant.compare(&plain(1_000_000)), Ordering::Greater);
        assert_eq!(plain(8).compare(&Numeral::pow2(plain(3))), Ordering::Equal);
    }

    #[test]
    fn compare_symbolic_against_large_plain() {
        let sym = Numeral::pow2(plain((1 << 20) + 5));
        let plain_big = Numeral::Plain((BigUint::from(1u8) << 21) - 1u8);
        assert_eq!(sym.compare(&plain_big), Ordering::Greater);
        assert_eq!(plain_big.compare(&sym), Ordering::Less);
    }

    #[test]
    fn square_examples() {
        assert_eq!(plain(4).square().unwrap(), plain(16));
        assert_eq!(plain(1).square().unwrap(), plain(1));
        let s = Numeral::pow2(plain((1 << 20) + 1000)).square().unwrap();
        assert_eq!(
            s.as_pow2_exponent().unwrap(),
            plain(2 * ((1 << 20) + 1000))
        );
    }

    #[test]
    fn as_pow2_exponent_examples() {
        assert_eq!(plain(64).as_pow2_exponent(), Some(plain(6)));
        assert_eq!(plain(1).as_pow2_exponent(), None);
        assert_eq!(plain(12).as_pow2_exponent(), None);
        let giant = Numeral::pow2(plain((1 << 20) + 7));
        assert_eq!(giant.as_pow2_exponent(), Some(plain((1 << 20) + 7)));
    }

    #[test]
    fn parse_and_render() {
        let n: Numeral = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(n.to_string(), "123456789012345678901234567890");
        let p: Numeral = "2^3".parse().unwrap();
        assert_eq!(p, plain(8));
        let nested: Numeral = "2^2^21".parse().unwrap();
        assert_eq!(nested.to_string(), "2^2097152");
        assert_eq!("0".parse::<Numeral>(), Err(ParseNumeralError::Zero));
        assert_eq!("12a".parse::<Numeral>(), Err(ParseNumeralError::InvalidDigit));
        assert_eq!("".parse::<Numeral>(), Err(ParseNumeralError::Empty));
    }

    #[test]
    fn succ_on_deep_tower_is_a_budget_error() {
        let tower = Numeral::pow2(Numeral::pow2(plain((1 << 20) + 1)));
        assert_eq!(tower.succ(), Err(NumeralError::MagnitudeBudget));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn roundtrip_decimal(n in 1u64..u64::MAX) {
                let a = plain(n);
                let s = a.to_string();
                let b: Numeral = s.parse().unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn square_exceeds_for_ge_two(n in 2u64..1_000_000_000u64) {
                let a = plain(n);
                prop_assert_eq!(a.square().unwrap().compare(&a), Ordering::Greater);
            }

            #[test]
            fn pow2_roundtrip(k in 1u64..10_000u64) {
                let p = Numeral::pow2(plain(k));
                prop_assert_eq!(p.as_pow2_exponent(), Some(plain(k)));
            }

            #[test]
            fn compare_agrees_with_u64(a in 1u64..u64::MAX, b in 1u64..u64::MAX) {
                prop_assert_eq!(plain(a).compare(&plain(b)), a.cmp(&b));
            }

            #[test]
            fn normalize_preserves_value(k in 1u64..2_000u64) {
                let raw = Numeral::Pow2(Box::new(plain(k)));
                let norm = raw.clone().normalize();
                prop_assert_eq!(raw.compare(&norm), Ordering::Equal);
                prop_assert_eq!(norm.to_biguint().unwrap(), BigUint::from(1u8) << k);
            }
        }
    }
}
