//! Arbitrary-precision integer and rational arithmetic: p-adic valuations by
//! three independent routes, binomial coefficients and their edge-case
//! conventions, floored division, and Lucas reduction mod p.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// A p-adic valuation: a finite integer (negative values occur for
/// rationals) or the distinguished `+inf` reserved for the value 0.
///
/// `+inf` compares strictly greater than every finite value, and addition
/// saturates at `+inf`, so bound checks stay total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Saturating addition: anything plus `+inf` is `+inf`.
    pub fn saturating_add(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }

    /// `self - b`, keeping `+inf` fixed. Used for slack = ord - bound.
    pub fn minus(self, b: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v - b),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// Total comparison against a finite bound.
    pub fn at_least(self, b: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= b,
            Valuation::Infinite => true,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        match self.cmp(&other) {
            Ordering::Greater => other,
            _ => self,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

// JSON form: a plain integer, or the string "inf".
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(D::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// A prime modulus. Primality is established at construction with a
/// deterministic Miller-Rabin test, which is exact for all 64-bit inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime, Error> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(|e| D::Error::custom(e.to_string()))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set below is exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact exponent of `p` in `x`; `+inf` for `x = 0`.
pub fn vp_int(x: &BigInt, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p.get());
    let mut rest = x.abs();
    let mut v = 0i64;
    loop {
        let (q, rem) = rest.div_rem(&p);
        if !rem.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        rest = q;
    }
}

/// `vp(numerator) - vp(denominator)`; `+inf` for 0. Exact for any rational.
pub fn vp_rat(q: &BigRational, p: Prime) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinite;
    }
    let num = vp_int(q.numer(), p).finite().expect("nonzero numerator");
    let den = vp_int(q.denom(), p).finite().expect("nonzero denominator");
    Valuation::Finite(num - den)
}

/// Legendre's formula: `vp(n!) = sum_i floor(n / p^i)`. A fast route that
/// never materializes the factorial.
pub fn vp_factorial(n: i64, p: Prime) -> Result<i64, Error> {
    if n < 0 {
        return Err(Error::OutOfRange(format!("factorial of negative {n}")));
    }
    let p = p.get() as i64;
    let mut v = 0i64;
    let mut q = n / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    Ok(v)
}

/// Exact `C(n, k)` for integer `n >= 0`; zero when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let mut k = k as u64;
    if k > n - k {
        k = n - k;
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Generalized binomial `C(x, k)` for any integer upper argument, via the
/// falling factorial; always an integer. Zero for `k < 0`.
pub fn binom_int(x: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if x >= 0 && x >= k {
        return binom(x as u64, k);
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(x - i);
        den *= BigInt::from(i + 1);
    }
    num / den // exact: k! divides any product of k consecutive integers
}

/// `C(x, k)` for rational `x`: the falling-factorial formula for `k >= 1`,
/// 1 for `k = 0`, and 0 for `k < 0`.
pub fn binom_rat(x: &BigRational, k: i64) -> BigRational {
    if k < 0 {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - BigRational::from(BigInt::from(i));
        acc /= BigRational::from(BigInt::from(i + 1));
    }
    acc
}

/// Kummer's route to `vp(C(n, k))`: the number of carries when adding `k`
/// and `n - k` in base p.
pub fn vp_binom_kummer(n: u64, k: i64, p: Prime) -> Result<Valuation, Error> {
    if k < 0 || k as u64 > n {
        return Err(Error::OutOfRange(format!("k = {k} not in 0..={n}")));
    }
    let p = p.get();
    let mut a = k as u64;
    let mut b = n - k as u64;
    let mut carry = 0u64;
    let mut carries = 0i64;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = u64::from(s >= p);
        carries += carry as i64;
        a /= p;
        b /= p;
    }
    Ok(Valuation::Finite(carries))
}

fn binom_mod_p_digits(n: u64, k: u64, p: u64) -> u64 {
    // n, k < p here. One modular inverse at the end via Fermat.
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64 % p;
    let mut den = 1u64 % p;
    for i in 0..k {
        num = mul_mod(num, (n - i) % p, p);
        den = mul_mod(den, i + 1, p);
    }
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// Lucas' theorem: `C(n, k) mod p` as the product of digitwise binomials in
/// base p.
pub fn lucas_binom_mod_p(n: u64, k: u64, p: Prime) -> u64 {
    let p = p.get();
    let mut n = n;
    let mut k = k;
    let mut acc = 1u64 % p;
    while n > 0 || k > 0 {
        acc = mul_mod(acc, binom_mod_p_digits(n % p, k % p, p), p);
        if acc == 0 {
            return 0;
        }
        n /= p;
        k /= p;
    }
    acc
}

/// Floored integer division: the unique `q` with `q*b <= a < (q+1)*b`.
/// Rejects `b <= 0`.
pub fn floor_div(a: i64, b: i64) -> Result<i64, Error> {
    if b <= 0 {
        return Err(Error::OutOfRange(format!("floor_div divisor {b} <= 0")));
    }
    Ok(Integer::div_floor(&a, &b))
}

/// `p^e` as an i64, rejecting values that do not fit.
pub fn prime_power(p: Prime, e: u32) -> Result<i64, Error> {
    let mut acc: i64 = 1;
    for _ in 0..e {
        acc = acc
            .checked_mul(p.get() as i64)
            .filter(|&v| v > 0)
            .ok_or_else(|| Error::Overflow(format!("{p}^{e} exceeds i64")))?;
    }
    Ok(acc)
}

/// Euler totient of a prime power: `phi(p^e) = p^e - p^(e-1)`, with
/// `phi(1) = 1`.
pub fn totient_prime_power(p: Prime, e: u32) -> Result<i64, Error> {
    if e == 0 {
        return Ok(1);
    }
    let lower = prime_power(p, e - 1)?;
    lower
        .checked_mul(p.get() as i64 - 1)
        .ok_or_else(|| Error::Overflow(format!("phi({p}^{e}) exceeds i64")))
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}
