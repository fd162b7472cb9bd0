//! Big-integer kernels that `num-bigint` does not provide at the speeds the
//! engine needs: a Lehmer-style gcd (the built-in binary gcd is quadratic in
//! a way that hurts at hundred-kilobit operands) and divide-and-conquer
//! decimal conversion in both directions.

use num::bigint::Sign;
use num::{BigInt, BigUint, Integer, One, Zero};

/// Greatest common divisor of the magnitudes, via Lehmer's algorithm with
/// 64-bit leading-word approximations. Falls back to Euclid steps when the
/// approximation makes no progress.
pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    BigInt::from(gcd_mag(a.magnitude().clone(), b.magnitude().clone()))
}

fn gcd_mag(mut a: BigUint, mut b: BigUint) -> BigUint {
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    // invariant: a >= b
    while !b.is_zero() && b.bits() > 128 {
        if a.bits() - b.bits() > 48 {
            let r = &a % &b;
            a = std::mem::replace(&mut b, r);
            continue;
        }
        let shift = a.bits() - 64;
        let ah = to_u64(&(&a >> shift));
        let bh = to_u64(&(&b >> shift));
        match lehmer_matrix(ah, bh) {
            Some((m00, m01, m10, m11, flip)) => {
                // new values are |A|a - |B|b and |D|b - |C|a, with the roles
                // of the positive/negative entries swapping each step; `flip`
                // records the final parity.
                let (na, nb) = if flip {
                    (diff(&b * m01, &a * m00), diff(&a * m10, &b * m11))
                } else {
                    (diff(&a * m00, &b * m01), diff(&b * m11, &a * m10))
                };
                a = na;
                b = nb;
                if a < b {
                    std::mem::swap(&mut a, &mut b);
                }
            }
            None => {
                let r = &a % &b;
                a = std::mem::replace(&mut b, r);
            }
        }
    }
    while !b.is_zero() {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    a
}

fn to_u64(n: &BigUint) -> u64 {
    let d = n.to_u64_digits();
    debug_assert!(d.len() <= 1);
    d.first().copied().unwrap_or(0)
}

fn diff(x: BigUint, y: BigUint) -> BigUint {
    debug_assert!(x >= y);
    x - y
}

/// One Lehmer round on the leading 64 bits. Returns magnitudes of the
/// reduction matrix entries plus the sign parity: when `flip` is false the
/// matrix is [[m00, -m01], [-m10, m11]], otherwise [[-m00, m01], [m10, -m11]].
/// None when not even one quotient is certain.
fn lehmer_matrix(x0: u64, y0: u64) -> Option<(u64, u64, u64, u64, bool)> {
    // Cofactors track cur_x = a*x0 + b*y0, cur_y = c*x0 + d*y0; the signs of
    // (a, b) and (c, d) alternate each step.
    let (mut x, mut y) = (x0 as i128, y0 as i128);
    let (mut a, mut b, mut c, mut d) = (1i128, 0i128, 0i128, 1i128);
    loop {
        // Quotient agreement test: the floor quotient must be identical under
        // the worst-case corrections in both directions.
        if y + c <= 0 || y + d <= 0 || x + a < 0 || x + b < 0 {
            break;
        }
        let q1 = (x + a) / (y + c);
        let q2 = (x + b) / (y + d);
        if q1 != q2 {
            break;
        }
        let q = q1;
        let (na, nb, nc, nd) = (c, d, a - q * c, b - q * d);
        let (nx, ny) = (y, x - q * y);
        if nx < 0 || ny < 0 {
            break;
        }
        a = na;
        b = nb;
        c = nc;
        d = nd;
        x = nx;
        y = ny;
        if c.unsigned_abs() > u64::MAX as u128 || d.unsigned_abs() > u64::MAX as u128 {
            break;
        }
    }
    if b == 0 {
        return None;
    }
    let flip = a < 0 || (a == 0 && b > 0);
    let (m00, m01, m10, m11) = if flip { (-a, b, c, -d) } else { (a, -b, -c, d) };
    debug_assert!(m00 >= 0 && m01 >= 0 && m10 >= 0 && m11 >= 0);
    Some((m00 as u64, m01 as u64, m10 as u64, m11 as u64, flip))
}

/// Reduce a fraction to lowest terms with a positive denominator.
pub fn reduce_fraction(num: BigInt, den: BigInt) -> (BigInt, BigInt) {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let g = gcd_big(&num, &den);
    let (mut n, mut d) = (num / &g, den / g);
    if d.sign() == Sign::Minus {
        n = -n;
        d = -d;
    }
    (n, d)
}

const DEC_DC_THRESHOLD_BITS: u64 = 4096;

/// Decimal string of a nonnegative big integer, divide-and-conquer above a
/// small threshold.
pub fn biguint_to_dec(n: &BigUint) -> String {
    if n.bits() <= DEC_DC_THRESHOLD_BITS {
        return n.to_str_radix(10);
    }
    // powers[k] = 10^(19 * 2^k); 10^19 is the largest power of ten in u64.
    let base = BigUint::from(10_000_000_000_000_000_000u64);
    let mut powers = vec![base];
    loop {
        let last = powers.last().unwrap();
        if last > n {
            break;
        }
        let sq = last * last;
        powers.push(sq);
    }
    let k = powers.iter().rposition(|p| p <= n).unwrap();
    let (hi, lo) = n.div_rem(&powers[k]);
    let mut out = String::new();
    rec_to_dec(&hi, &powers, None, &mut out);
    rec_to_dec(&lo, &powers, Some(19 << k), &mut out);
    out
}

/// Append the decimal form of `n`, left-padded with zeros to `width` digits
/// when given (requires n < 10^width).
fn rec_to_dec(n: &BigUint, powers: &[BigUint], width: Option<usize>, out: &mut String) {
    if n.bits() <= DEC_DC_THRESHOLD_BITS {
        let s = n.to_str_radix(10);
        if let Some(w) = width {
            debug_assert!(s.len() <= w);
            for _ in s.len()..w {
                out.push('0');
            }
        }
        out.push_str(&s);
        return;
    }
    let (k, lo_width) = match width {
        // split the fixed width into (w - 19*2^k) high digits and 19*2^k low
        Some(w) => {
            let k = powers
                .iter()
                .enumerate()
                .rev()
                .map(|(k, _)| k)
                .find(|&k| 19 << k < w)
                .expect("width exceeds smallest power");
            (k, 19usize << k)
        }
        None => {
            let k = powers.iter().rposition(|p| p <= n).unwrap();
            (k, 19usize << k)
        }
    };
    let (hi, lo) = n.div_rem(&powers[k]);
    rec_to_dec(&hi, powers, width.map(|w| w - lo_width), out);
    rec_to_dec(&lo, powers, Some(lo_width), out);
}

/// Parse a decimal digit string (no sign) into a big integer,
/// divide-and-conquer above a small threshold.
pub fn dec_to_biguint(digits: &str) -> Option<BigUint> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(rec_from_dec(digits.as_bytes()))
}

fn rec_from_dec(d: &[u8]) -> BigUint {
    if d.len() <= 1024 {
        // safe: digits pre-validated
        return BigUint::parse_bytes(d, 10).unwrap();
    }
    let split = d.len() / 2;
    let (hi, lo) = d.split_at(d.len() - split);
    let hi_v = rec_from_dec(hi);
    let lo_v = rec_from_dec(lo);
    hi_v * BigUint::from(10u32).pow(split as u32) + lo_v
}

/// floor(log2(n/d)) for positive n, d; exact.
pub fn floor_log2_ratio(n: &BigUint, d: &BigUint) -> i64 {
    assert!(!n.is_zero() && !d.is_zero());
    let e = n.bits() as i64 - d.bits() as i64;
    // 2^(e-1) < n/d < 2^(e+1); decide between e-1 and e exactly.
    let cmp = if e >= 0 {
        (d << e as u64).cmp(n)
    } else {
        (&(n << (-e) as u64)).cmp(d).reverse()
    };
    match cmp {
        std::cmp::Ordering::Greater => e - 1,
        _ => e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::RandBigInt;
    use num::Signed;
    use rand::SeedableRng;

    #[test]
    fn gcd_matches_builtin_on_random_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for bits in [8u64, 63, 64, 65, 200, 1000, 5000, 20000] {
            for _ in 0..6 {
                let a = rng.gen_bigint(bits);
                let b = rng.gen_bigint(bits / 2 + 1);
                let mine = gcd_big(&a, &b);
                let theirs = a.gcd(&b);
                assert_eq!(mine, theirs, "bits={bits}");
            }
        }
    }

    #[test]
    fn gcd_structured_common_factor() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let g = rng.gen_bigint(3000).abs() + 1;
        let a = &g * rng.gen_bigint(2000);
        let b = &g * rng.gen_bigint(2500);
        assert_eq!(gcd_big(&a, &b), a.gcd(&b));
    }

    #[test]
    fn gcd_edge_cases() {
        let z = BigInt::zero();
        let five = BigInt::from(5);
        assert_eq!(gcd_big(&z, &five), five);
        assert_eq!(gcd_big(&five, &z), five);
        assert_eq!(gcd_big(&BigInt::from(-15), &BigInt::from(10)), five);
    }

    #[test]
    fn decimal_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for bits in [1u64, 64, 1000, 5000, 100_000] {
            let n = rng.gen_biguint(bits);
            let s = biguint_to_dec(&n);
            assert_eq!(s, n.to_str_radix(10));
            assert_eq!(dec_to_biguint(&s).unwrap(), n);
        }
        assert_eq!(biguint_to_dec(&BigUint::zero()), "0");
        assert!(dec_to_biguint("").is_none());
        assert!(dec_to_biguint("12a3").is_none());
    }

    #[test]
    fn floor_log2_exact() {
        for (n, d, want) in [(1u32, 1u32, 0i64), (3, 2, 0), (1, 2, -1), (8, 1, 3), (7, 8, -1), (9, 8, 0)] {
            assert_eq!(
                floor_log2_ratio(&BigUint::from(n), &BigUint::from(d)),
                want,
                "{n}/{d}"
            );
        }
    }
}
