//! Exact rational helpers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `[0!, 1!, ..., n!]`
pub fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigUint::one();
    out.push(acc.clone());
    for i in 1..=n {
        acc *= i as u64;
        out.push(acc.clone());
    }
    out
}

pub fn ratio(numer: BigUint, denom: BigUint) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_u64(numer: u64, denom: u64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The exact binary value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn to_f64(r: &BigRational) -> f64 {
    // Scale into range before dividing so huge numerators/denominators stay finite.
    let n = r.numer();
    let d = r.denom();
    let shift = (n.bits().max(d.bits())).saturating_sub(60);
    let n = n >> shift;
    let d = d >> shift;
    let nf = bigint_to_f64(&n);
    let df = bigint_to_f64(&d);
    if df == 0.0 {
        return if n.is_zero() {
            0.0
        } else if n.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    nf / df
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let (sign, digits) = x.to_u64_digits();
    let mut v = 0.0f64;
    for &d in digits.iter().rev() {
        v = v * 18446744073709551616.0 + d as f64;
    }
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

/// Decimal rendering with `sig` significant digits, rounded half away from
/// zero, computed exactly.
pub fn to_decimal(r: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return String::from("0");
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();

    // exponent e with 10^e ≤ |r| < 10^(e+1)
    let ten = BigInt::from(10u32);
    let mut e: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
    let pow = |k: i64| -> BigInt { num_traits::pow(ten.clone(), k.unsigned_abs() as usize) };
    let ge = |e: i64| -> bool {
        // |r| ≥ 10^e
        if e >= 0 {
            num >= &den * pow(e)
        } else {
            &num * pow(e) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }

    // digits = round(|r| · 10^(sig−1−e))
    let scale = sig as i64 - 1 - e;
    let (n2, d2) = if scale >= 0 {
        (&num * pow(scale), den.clone())
    } else {
        (num.clone(), &den * pow(scale))
    };
    let (q, rem) = n2.div_rem(&d2);
    let mut digits = if rem * 2 >= d2 { q + 1 } else { q };
    let mut scale = scale;
    if digits.to_string().len() > sig {
        // rounding carried into a new digit (e.g. 9.99… → 10.0…)
        digits /= 10;
        scale -= 1;
    }

    let mut s = digits.to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if scale <= 0 {
        out.push_str(&s);
        for _ in 0..(-scale) {
            out.push('0');
        }
        return out;
    }
    let scale = scale as usize;
    if s.len() <= scale {
        let mut padded = String::from("0.");
        for _ in 0..(scale - s.len()) {
            padded.push('0');
        }
        padded.push_str(&s);
        s = padded;
    } else {
        s.insert(s.len() - scale, '.');
    }
    // trim trailing zeros after the point
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    out.push_str(&s);
    out
}

/// `"p/q"`, or `"p"` for integers.
pub fn to_fraction(r: &BigRational) -> String {
    let mut s = String::new();
    if r.denom().is_one() {
        let _ = write!(s, "{}", r.numer());
    } else {
        let _ = write!(s, "{}/{}", r.numer(), r.denom());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&from_u64(33, 69), 15), "0.478260869565217");
        assert_eq!(to_decimal(&from_u64(17, 36), 5), "0.47222");
        assert_eq!(to_decimal(&from_u64(7, 17), 6), "0.411765");
        assert_eq!(to_decimal(&from_u64(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&from_u64(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&from_u64(1, 1), 15), "1");
        assert_eq!(to_decimal(&from_u64(2, 5), 15), "0.4");
        assert_eq!(to_decimal(&from_u64(999, 1000), 2), "1");
        assert_eq!(to_decimal(&from_u64(12345, 1), 3), "12300");
        assert_eq!(to_decimal(&from_u64(1, 2000), 3), "0.0005");
        assert_eq!(to_decimal(&BigRational::zero(), 15), "0");
    }

    #[test]
    fn fractions_and_floats() {
        assert_eq!(to_fraction(&from_u64(8, 20)), "2/5");
        assert_eq!(to_fraction(&from_u64(4, 2)), "2");
        assert!((to_f64(&from_u64(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(factorials(5)[5], BigUint::from(120u32));
    }
}
