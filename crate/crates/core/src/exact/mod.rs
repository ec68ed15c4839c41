//! Exact rational linear algebra. Everything here is decided without
//! rounding, including the characteristic and minimal polynomials.

mod charpoly;
mod linalg;
mod matrix;
mod poly;

pub use charpoly::{char_poly, min_poly, power_rank};
pub use linalg::{nullspace_exact, nullspace_of_rows, rank_exact, rank_rows, solve_exact, SolveOutcome};
pub use matrix::RationalMatrix;
pub use poly::{eval_matrix_poly, poly_divides, Polynomial};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratios whose parts overflow f64 individually.
        let (n, d) = (q.numer(), q.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses integers (`-3`), fractions (`22/7`) and finite decimals with an
/// optional exponent (`0.125`, `-1.5e-3`) into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Best rational approximation of `x` with denominator at most `max_denom`,
/// from the continued-fraction convergents.
pub fn rationalize(x: f64, max_denom: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut rest = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let limit = BigInt::from(max_denom);
    let mut best = None;
    for _ in 0..64 {
        let a = rest.floor();
        let a_int = BigInt::from(a as u64);
        let p2 = &a_int * &p1 + &p0;
        let q2 = &a_int * &q1 + &q0;
        if q2 > limit {
            break;
        }
        best = Some(Rational::new(p2.clone(), q2.clone()));
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = rest - a;
        if frac < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
        if rest > 1e15 {
            break;
        }
    }
    best.map(|b| if negative { -b } else { b })
}

/// Scales a rational vector to coprime integers whose first nonzero entry is
/// positive. The zero vector is returned unchanged.
pub fn normalize_integer(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().filter(|x| !x.is_zero()).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| Rational::from_integer(x / &gcd * &sign)).collect()
}
