//! The scalar type of the engine: arbitrary-precision reduced fractions.
//!
//! `Rat` is `num::BigRational`; its arithmetic keeps values reduced with a
//! positive denominator, which is exactly the canonical form the engine
//! serializes ("num/den" decimal strings). Values built from untrusted
//! strings are validated syntactically here and canonically where the
//! verifier requires it; large internal values are reduced through the
//! Lehmer gcd in [`crate::bigx`] rather than the quadratic built-in.

use crate::bigx;
use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rat = BigRational;

/// 2^e as an exact rational (e may be negative).
pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as u64)
    } else {
        Rat::new_raw(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

pub fn rat_from_i64(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Build a reduced rational from an arbitrary (num, den) pair using the
/// Lehmer gcd; `den` must be nonzero.
pub fn rat_from_pair(num: BigInt, den: BigInt) -> Rat {
    let (n, d) = bigx::reduce_fraction(num, den);
    Rat::new_raw(n, d)
}

/// Canonical serialization: always "num/den" with a reduced, positive
/// denominator ("0/1", "-5/3", ...).
pub fn fmt_rat(r: &Rat) -> String {
    let mut s = String::new();
    if r.numer().is_negative() {
        s.push('-');
    }
    s.push_str(&bigx::biguint_to_dec(r.numer().magnitude()));
    s.push('/');
    s.push_str(&bigx::biguint_to_dec(r.denom().magnitude()));
    s
}

/// Parse "num", "-num", "num/den" or "-num/den" (decimal digits).
///
/// The result is *not* reduced here: reduction of huge untrusted inputs is
/// deliberately deferred to the caller (see [`rat_is_reduced`]), so that a
/// verifier can decide where canonicality must be enforced. Inputs with a
/// zero or negative denominator are rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let err = |msg: &str, offset: usize| Error::Parse {
        msg: msg.to_string(),
        offset,
    };
    let (neg, rest, base) = match s.strip_prefix('-') {
        Some(r) => (true, r, 1usize),
        None => (false, s, 0usize),
    };
    let (num_s, den_s, den_off) = match rest.find('/') {
        Some(i) => (&rest[..i], Some(&rest[i + 1..]), base + i + 1),
        None => (rest, None, 0),
    };
    let num = bigx::dec_to_biguint(num_s).ok_or_else(|| err("invalid numerator digits", base))?;
    let den = match den_s {
        Some(d) => bigx::dec_to_biguint(d).ok_or_else(|| err("invalid denominator digits", den_off))?,
        None => num::BigUint::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator", den_off));
    }
    let mut n = BigInt::from(num);
    if neg {
        n = -n;
    }
    Ok(Rat::new_raw(n, BigInt::from(den)))
}

/// Whether the value is in canonical form: gcd(|num|, den) = 1, den >= 1,
/// and zero is 0/1.
pub fn rat_is_reduced(r: &Rat) -> bool {
    if r.denom().is_negative() || r.denom().is_zero() {
        return false;
    }
    if r.numer().is_zero() {
        return r.denom().is_one();
    }
    bigx::gcd_big(r.numer(), r.denom()).is_one()
}

/// Max bit length of numerator/denominator; a cheap size measure used to
/// pick kernel strategies.
pub fn rat_bits(r: &Rat) -> u64 {
    r.numer().magnitude().bits().max(r.denom().magnitude().bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["0/1", "1/2", "-5/3", "7/1", "123456789012345678901234567890/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(fmt_rat(&parse_rat("3").unwrap()), "3/1");
        assert_eq!(fmt_rat(&parse_rat("-4").unwrap()), "-4/1");
    }

    #[test]
    fn parse_rejects_malformed() {
        for s in ["", "/3", "3/", "3/0", "a/2", "1/-2", "--3", "1.5"] {
            assert!(parse_rat(s).is_err(), "{s:?} should fail");
        }
    }

    #[test]
    fn reduced_detection() {
        assert!(rat_is_reduced(&rat_from_i64(2, 4)));
        assert!(!rat_is_reduced(&Rat::new_raw(BigInt::from(2), BigInt::from(4))));
        assert!(rat_is_reduced(&Rat::zero()));
        assert!(!rat_is_reduced(&Rat::new_raw(BigInt::zero(), BigInt::from(3))));
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), rat_from_i64(8, 1));
        assert_eq!(pow2(-3), rat_from_i64(1, 8));
        assert_eq!(pow2(0), Rat::one());
    }
}
