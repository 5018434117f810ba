//! Exact Bernoulli numbers and polynomials.
//!
//! Convention: `B_1 = -1/2`, so that `B_l(0) = B_l` for the polynomials
//! `B_l(x) = sum_j C(l, j) B_j x^(l-j)`. The table is produced by the
//! defining recurrence `sum_{j<=l} C(l+1, j) B_j = 0`; no floating-point
//! acceleration, since the valuation claims downstream need exactness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binom, is_prime_u64, vp_rat, Prime};
use crate::Error;

/// Bernoulli numbers `B_0 ... B_L`, computed once and then immutable.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    /// Builds the table up to index `max_index` by the recurrence
    /// `B_l = -1/(l+1) * sum_{j<l} C(l+1, j) B_j`.
    pub fn up_to(max_index: u32) -> BernoulliTable {
        let mut values: Vec<BigRational> = Vec::with_capacity(max_index as usize + 1);
        values.push(BigRational::one());
        for l in 1..=max_index as u64 {
            let mut acc = BigRational::zero();
            for (j, b) in values.iter().enumerate() {
                acc += b * BigRational::from(binom(l + 1, j as i64));
            }
            let divisor = BigRational::from(BigInt::from(l + 1));
            values.push(-acc / divisor);
        }
        BernoulliTable { values }
    }

    pub fn max_index(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    /// `B_l`. Panics if `l` exceeds the table size.
    pub fn number(&self, l: u32) -> &BigRational {
        &self.values[l as usize]
    }

    /// Exact `B_l(q) = sum_j C(l, j) B_j q^(l-j)`.
    pub fn poly_eval(&self, l: u32, q: &BigRational) -> BigRational {
        assert!(l <= self.max_index(), "table too small: B_{l}");
        let mut acc = BigRational::zero();
        let mut qpow = BigRational::one();
        // accumulate from j = l downward so q^(l-j) grows with the loop
        for j in (0..=l).rev() {
            acc += self.number(j) * BigRational::from(binom(l as u64, j as i64)) * &qpow;
            qpow *= q;
        }
        acc
    }
}

/// The integrality fact behind the Bernoulli-weight bound: for `m0` coprime
/// to `p`, the shifted value `B_l(a/m0) - B_l` is a p-adic integer. This is
/// a theorem, so the function is a test oracle: a `false` return is a bug.
pub fn shift_integrality_holds(l: u32, a: i64, m0: i64, p: Prime) -> Result<bool, Error> {
    if m0 < 1 {
        return Err(Error::OutOfRange(format!("m0 = {m0} must be >= 1")));
    }
    if m0 % p.get() as i64 == 0 {
        return Err(Error::OutOfRange(format!(
            "m0 = {m0} is divisible by p = {p}"
        )));
    }
    let table = BernoulliTable::up_to(l);
    let q = BigRational::new(BigInt::from(a), BigInt::from(m0));
    let diff = table.poly_eval(l, &q) - table.number(l);
    Ok(vp_rat(&diff, p).at_least(0))
}

/// The von Staudt-Clausen denominator: the product of the primes `q` with
/// `(q - 1) | l`. For even `l >= 2` (and for `l = 1`) this is exactly the
/// denominator of `B_l`.
pub fn staudt_clausen_denominator(l: u32) -> BigInt {
    let mut acc = BigInt::one();
    for q in 2..=(l as u64 + 1) {
        if is_prime_u64(q) && l as u64 % (q - 1) == 0 {
            acc *= BigInt::from(q);
        }
    }
    acc
}

/// Checks the table against von Staudt-Clausen: exact denominators for
/// `l = 1` and even `l`, and zero values at odd `l >= 3`.
pub fn staudt_clausen_holds(table: &BernoulliTable) -> bool {
    for l in 0..=table.max_index() {
        let b = table.number(l);
        if l >= 3 && l % 2 == 1 {
            if !b.is_zero() {
                return false;
            }
            continue;
        }
        let expected = if l == 0 {
            BigInt::one()
        } else {
            staudt_clausen_denominator(l)
        };
        if b.denom() != &expected {
            return false;
        }
        // numerator must be coprime to the denominator (lowest terms)
        if !b.numer().gcd(b.denom()).is_one() {
            return false;
        }
    }
    true
}
