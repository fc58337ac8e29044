//! Exact rationals, their text form, p-adic valuations and small prime
//! utilities.
//!
//! `Rational` is `num_rational::BigRational`, which already keeps values in
//! lowest terms with a positive denominator.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parse the text form `a/b` or `a`, with an optional leading `-` (ASCII or
/// U+2212). Zero denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let (negative, body) = if let Some(rest) = trimmed.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = trimmed.strip_prefix('\u{2212}') {
        (true, rest)
    } else {
        (false, trimmed)
    };
    let bad = || Error::InvalidArgument(format!("not a rational: {text:?}"));
    let parse_digits = |s: &str| -> Result<BigInt> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (parse_digits(n)?, parse_digits(d)?),
        None => (parse_digits(body)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "zero denominator in {text:?}"
        )));
    }
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `a/b` in lowest terms, or `a` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `|num| + |den|`, the ordering key used for deterministic tie-breaks.
pub fn height(x: &Rational) -> BigInt {
    x.numer().abs() + x.denom()
}

fn int_valuation(p: &BigInt, x: &BigInt) -> i64 {
    let mut v = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        rest = q;
        v += 1;
    }
}

/// `ord_p(x)`: the exponent `v` with `x = p^v * u`, `u` a `p`-adic unit.
pub fn p_adic_valuation(p: u64, x: &Rational) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput("p-adic valuation of 0"));
    }
    let p = BigInt::from(p);
    Ok(int_valuation(&p, x.numer()) - int_valuation(&p, x.denom()))
}

/// Valuation of a nonzero integer, `None` for zero.
pub fn int_p_adic_valuation(p: u64, x: &BigInt) -> Option<i64> {
    (!x.is_zero()).then(|| int_valuation(&BigInt::from(p), x))
}

/// `v_p(s!)` via Legendre's formula `(s - digit_sum_p(s)) / (p - 1)`.
pub fn factorial_valuation(p: u64, s: u64) -> u64 {
    (s - digit_sum(p, s)) / (p - 1)
}

pub fn digit_sum(base: u64, mut s: u64) -> u64 {
    let mut total = 0;
    while s > 0 {
        total += s % base;
        s /= base;
    }
    total
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in the closed interval `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Distinct prime factors of a nonzero integer, ascending. Trial division;
/// intended for the small denominators met at desk scale.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    if n.is_zero() {
        return Err(Error::ZeroInput("prime factors of 0"));
    }
    let magnitude: BigUint = n.magnitude().clone();
    let mut rest = magnitude
        .to_u128()
        .ok_or_else(|| Error::InvalidArgument(format!("integer {n} too large to factor")))?;
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= rest {
        if rest % d == 0 {
            out.push(d as u64);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let last = u64::try_from(rest)
            .map_err(|_| Error::InvalidArgument(format!("prime factor of {n} exceeds 64 bits")))?;
        out.push(last);
    }
    Ok(out)
}

/// Reduce `x` modulo `p`; `None` when `p` divides the denominator.
pub fn reduce_mod(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(num * inv_mod(den, p) % p)
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(p_adic_valuation(2, &int(12)).unwrap(), 2);
        assert_eq!(p_adic_valuation(3, &rat(1, 6)).unwrap(), -1);
        assert_eq!(p_adic_valuation(5, &int(1)).unwrap(), 0);
        assert_eq!(p_adic_valuation(7, &int(7)).unwrap(), 1);
        assert_eq!(
            p_adic_valuation(2, &int(0)),
            Err(Error::ZeroInput("p-adic valuation of 0"))
        );
    }

    #[test]
    fn text_form() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-1/3").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("\u{2212}5/6").unwrap(), rat(-5, 6));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(format_rational(&rat(-4, 6)), "-2/3");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn legendre_matches_direct_factorial_valuation() {
        for p in [2u64, 3, 5, 7, 11] {
            let mut direct = 0u64;
            for s in 1..=200u64 {
                direct += int_p_adic_valuation(p, &BigInt::from(s)).unwrap() as u64;
                assert_eq!(factorial_valuation(p, s), direct, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn factorization_and_reduction() {
        assert_eq!(prime_factors(&BigInt::from(360)).unwrap(), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigInt::from(-97)).unwrap(), vec![97]);
        assert!(prime_factors(&BigInt::from(1)).unwrap().is_empty());
        assert_eq!(reduce_mod(&rat(1, 2), 5), Some(3));
        assert_eq!(reduce_mod(&rat(-1, 3), 7), Some(2));
        assert_eq!(reduce_mod(&rat(1, 5), 5), None);
        assert_eq!(primes_in(1, 20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
