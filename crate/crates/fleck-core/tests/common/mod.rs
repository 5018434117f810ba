//! Independent oracles for the integration tests. Each test target pulls
//! in only part of this module, hence the blanket dead_code allow.
#![allow(dead_code)]
//!
//! Everything here deliberately avoids the library's computation paths:
//! binomials come from a Pascal triangle built by addition, weights are
//! evaluated term by term in plain rational arithmetic (no shared
//! denominator, no memoization), and Bernoulli numbers come from the
//! explicit double-sum formula instead of the recurrence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use fleck_core::Weight;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Pascal triangle rows 0..=n, by addition only.
pub fn pascal_triangle(n: i64) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=n as usize {
        let prev = &rows[m - 1];
        let mut row = vec![BigInt::one()];
        for k in 1..m {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows
}

/// Generalized `C(x, k)` for integer `x`, dividing by `i` at each step in
/// rational arithmetic.
pub fn slow_binom_int(x: i64, k: i64) -> BigRational {
    if k < 0 {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= rat(x - i, i + 1);
    }
    acc
}

/// Bernoulli number by the explicit double sum
/// `B_m = sum_k 1/(k+1) sum_v (-1)^v C(k,v) v^m` (with `0^0 = 1`).
pub fn worpitzky_bernoulli(m: u32) -> BigRational {
    let triangle = pascal_triangle(m as i64);
    let mut acc = BigRational::zero();
    for (k, row) in triangle.iter().enumerate() {
        let mut inner = BigRational::zero();
        for (v, c) in row.iter().enumerate() {
            let term = BigRational::from(c * pow_int(v as i64, m))
                * if v % 2 == 1 { int(-1) } else { int(1) };
            inner += term;
        }
        acc += inner / int(k as i64 + 1);
    }
    acc
}

fn pow_int(base: i64, exp: u32) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..exp {
        acc *= BigInt::from(base);
    }
    acc
}

fn pow_rat(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// `B_l(q)` from Worpitzky numbers and the defining expansion.
pub fn slow_bernoulli_poly(l: u32, q: &BigRational) -> BigRational {
    let triangle = pascal_triangle(l as i64);
    let mut acc = BigRational::zero();
    for (j, c) in triangle[l as usize].iter().enumerate() {
        acc += BigRational::from(c.clone())
            * worpitzky_bernoulli(j as u32)
            * pow_rat(q, l - j as u32);
    }
    acc
}

fn floor_quot(num: i64, den: i64) -> i64 {
    num.div_euclid(den)
}

fn slow_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn slow_weight(weight: &Weight, p: u64, alpha: u32, r: i64, k: i64) -> BigRational {
    let palpha = (p as i64).pow(alpha);
    let j = floor_quot(k - r, palpha);
    match weight {
        Weight::Constant => BigRational::one(),
        Weight::PolyFloor(f) => {
            let mut acc = BigRational::zero();
            for (t, c) in f.coeffs().iter().enumerate() {
                acc += c * slow_binom_int(j, t as i64);
            }
            acc
        }
        Weight::ChooseFloor(l) => slow_binom_int(j, *l as i64),
        Weight::BernoulliArg { degree, modulus } => {
            slow_bernoulli_poly(*degree, &rat(k - r, *modulus))
        }
        Weight::PowerFloor(a) => {
            assert!(j >= 0, "oracle needs nonnegative exponents");
            BigRational::from(pow_int(*a, j as u32))
        }
        Weight::GcdPoly(f) => {
            let g = match k - r {
                0 => palpha,
                d => slow_gcd(d, palpha),
            };
            let mut acc = BigRational::zero();
            for (t, c) in f.coeffs().iter().enumerate() {
                acc += c * slow_binom_int(j, t as i64);
            }
            acc * int(g)
        }
        Weight::PowerK(b) => BigRational::from(pow_int(*b, k as u32)),
    }
}

/// Direct-summation oracle with an explicit residue-class modulus and a
/// weight anchor `r` that may differ from the class representative.
pub fn slow_alt_sum_anchored(
    p: u64,
    alpha: u32,
    class_modulus: i64,
    n: i64,
    r_weight: i64,
    r_class: i64,
    weight: &Weight,
) -> BigRational {
    let triangle = pascal_triangle(n);
    let mut acc = BigRational::zero();
    for k in 0..=n {
        if (k - r_class).rem_euclid(class_modulus) != 0 {
            continue;
        }
        let term = BigRational::from(triangle[n as usize][k as usize].clone())
            * slow_weight(weight, p, alpha, r_weight, k);
        if k % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

/// Direct-summation oracle matching the library's sum definition.
pub fn slow_alt_sum(p: u64, alpha: u32, beta: u32, n: i64, r: i64, weight: &Weight) -> BigRational {
    slow_alt_sum_anchored(p, alpha, (p as i64).pow(beta), n, r, r, weight)
}
