//! Factorial-type products over exact rationals.

use num_traits::One;

use crate::coeff::{int, Rational};

/// Upper (rising) factorial `a^{(n)} = a(a+1)…(a+n−1)`.
pub fn rising(a: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, t| acc * (a + int(t as i64)))
}

/// Lower (falling) factorial `a_{(n)} = a(a−1)…(a−n+1)`.
pub fn falling(a: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, t| acc * (a - int(t as i64)))
}

/// Rising factorial extended to `n = −1` by `a^{(−1)} = 1/(a−1)`.
///
/// Returns `None` for `n = −1` at `a = 1` and for `n < −1`.
pub fn rising_ext(a: &Rational, n: i64) -> Option<Rational> {
    match n {
        n if n >= 0 => Some(rising(a, n as u32)),
        -1 => {
            let d = a - Rational::one();
            if d == int(0) {
                None
            } else {
                Some(Rational::one() / d)
            }
        }
        _ => None,
    }
}

pub fn factorial(n: u32) -> Rational {
    rising(&Rational::one(), n)
}

pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return int(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}
