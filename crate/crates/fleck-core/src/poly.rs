//! Integer-valued polynomials in the binomial (Mahler) basis.
//!
//! A polynomial is stored as coefficients `c_0, ..., c_d` meaning
//! `f(x) = sum_j c_j * C(x, j)`. In this basis the hypothesis
//! "`f(a)` is a p-adic integer for every integer `a`" becomes the finitely
//! checkable condition `vp(c_j) >= 0` for all `j`, and the forward
//! difference `Df(x) = f(x+1) - f(x)` is a plain left shift.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binom_int, vp_rat, Prime};

/// Polynomial in the binomial basis, trailing zeros trimmed. The zero
/// polynomial has an empty coefficient list and degree 0 by convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IvPoly {
    coeffs: Vec<BigRational>,
}

impl IvPoly {
    pub fn zero() -> IvPoly {
        IvPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> IvPoly {
        IvPoly::from_binomial_coeffs(vec![c])
    }

    /// Canonical constructor: `coeffs[j]` multiplies `C(x, j)`.
    pub fn from_binomial_coeffs(mut coeffs: Vec<BigRational>) -> IvPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IvPoly { coeffs }
    }

    /// Converts monomial coefficients `m_0 + m_1 x + m_2 x^2 + ...` into the
    /// binomial basis via iterated forward differences: `c_j = (D^j f)(0)`.
    pub fn from_monomial_coeffs(monomial: &[BigRational]) -> IvPoly {
        let mut mono = monomial.to_vec();
        while mono.last().is_some_and(Zero::is_zero) {
            mono.pop();
        }
        if mono.is_empty() {
            return IvPoly::zero();
        }
        let eval = |x: i64| -> BigRational {
            let mut acc = BigRational::zero();
            let mut pow = BigRational::one();
            for m in &mono {
                acc += m * &pow;
                pow *= BigRational::from(BigInt::from(x));
            }
            acc
        };
        let mut values: Vec<BigRational> = (0..mono.len() as i64).map(eval).collect();
        let mut coeffs = Vec::with_capacity(values.len());
        while !values.is_empty() {
            coeffs.push(values[0].clone());
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        IvPoly::from_binomial_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.len().saturating_sub(1) as u32
    }

    /// Exact evaluation at an integer: `sum_j c_j * C(a, j)`.
    pub fn eval_int(&self, a: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c * BigRational::from(binom_int(a, j as i64));
        }
        acc
    }

    /// Mahler's criterion: `f(Z)` lies in `Z_p` iff every binomial-basis
    /// coefficient has nonnegative p-adic valuation.
    pub fn is_zp_valued(&self, p: Prime) -> bool {
        self.coeffs.iter().all(|c| vp_rat(c, p).at_least(0))
    }

    /// Index of the first coefficient with negative valuation, if any.
    pub fn first_non_integral_coeff(&self, p: Prime) -> Option<usize> {
        self.coeffs.iter().position(|c| !vp_rat(c, p).at_least(0))
    }

    /// Forward difference `Df(x) = f(x+1) - f(x)`: a left shift of the
    /// coefficient sequence.
    pub fn delta(&self) -> IvPoly {
        if self.coeffs.len() <= 1 {
            return IvPoly::zero();
        }
        IvPoly::from_binomial_coeffs(self.coeffs[1..].to_vec())
    }

}

impl fmt::Display for IvPoly {
    /// Compact bracket form of the binomial-basis coefficients, e.g. `[0,1,2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
