//! Built-in identity battery: the classical facts every bound in this crate
//! ultimately rests on, each checked exhaustively over a fixed grid. All of
//! these are theorems, so a single failure means the build is wrong.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{factorial, Prime};
use crate::bernoulli::{shift_integrality_holds, staudt_clausen_holds, BernoulliTable};
use crate::congruence::{
    chu_vandermonde_holds, delta_reduction_pair, euler_sum, telescoping_pair,
    totient_binom_pattern_holds,
};
use crate::poly::IvPoly;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sample_polys() -> Vec<IvPoly> {
    vec![
        IvPoly::constant(rat(3, 1)),
        IvPoly::from_binomial_coeffs(vec![rat(0, 1), rat(1, 1)]), // x
        IvPoly::from_binomial_coeffs(vec![rat(0, 1), rat(0, 1), rat(1, 1)]), // C(x,2)
        IvPoly::from_monomial_coeffs(&[rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]), // x^3 + 1
        IvPoly::from_binomial_coeffs(vec![rat(1, 2), rat(-2, 3), rat(5, 7)]),
    ]
}

fn sample_rationals() -> Vec<BigRational> {
    [
        (0, 1),
        (1, 1),
        (-1, 1),
        (2, 1),
        (1, 2),
        (-3, 2),
        (2, 3),
        (-5, 7),
        (7, 3),
        (11, 4),
    ]
    .iter()
    .map(|&(n, d)| rat(n, d))
    .collect()
}

fn euler_identity() -> CheckResult {
    let mut checked = 0u64;
    for n in 0..=30u32 {
        for l in 0..=n {
            let expected = if l < n {
                BigInt::zero()
            } else {
                let f = factorial(n as u64);
                if n & 1 == 1 {
                    -f
                } else {
                    f
                }
            };
            if euler_sum(n, l) != expected {
                return CheckResult {
                    name: "euler-identity",
                    passed: false,
                    detail: format!("mismatch at n = {n}, l = {l}"),
                };
            }
            checked += 1;
        }
    }
    CheckResult {
        name: "euler-identity",
        passed: true,
        detail: format!("{checked} (n, l) pairs, n <= 30"),
    }
}

fn delta_reduction_identity() -> CheckResult {
    let mut checked = 0u64;
    for f in &sample_polys() {
        for n in 1..=10i64 {
            for m in 1..=4i64 {
                for r in [-4i64, -1, 0, 1, 2, 5] {
                    let (lhs, rhs) = delta_reduction_pair(n, m, r, f).expect("preconditions met");
                    if lhs != rhs {
                        return CheckResult {
                            name: "delta-reduction-identity",
                            passed: false,
                            detail: format!("n = {n}, m = {m}, r = {r}, f = {f}"),
                        };
                    }
                    checked += 1;
                }
            }
        }
    }
    CheckResult {
        name: "delta-reduction-identity",
        passed: true,
        detail: format!("{checked} instances"),
    }
}

fn telescoping_identity() -> CheckResult {
    let mut checked = 0u64;
    for f in &sample_polys() {
        for n in 0..=10i64 {
            for m in 1..=4i64 {
                for r in [-4i64, -1, 0, 1, 2, 5] {
                    let (lhs, rhs) = telescoping_pair(n, m, r, f).expect("preconditions met");
                    if lhs != rhs {
                        return CheckResult {
                            name: "telescoping-identity",
                            passed: false,
                            detail: format!("n = {n}, m = {m}, r = {r}, f = {f}"),
                        };
                    }
                    checked += 1;
                }
            }
        }
    }
    CheckResult {
        name: "telescoping-identity",
        passed: true,
        detail: format!("{checked} instances"),
    }
}

fn totient_binom_pattern() -> CheckResult {
    for q in [2u64, 3, 5, 7] {
        let p = Prime::new(q).expect("prime");
        for alpha in 1..=3u32 {
            match totient_binom_pattern_holds(p, alpha) {
                Ok(true) => {}
                _ => {
                    return CheckResult {
                        name: "totient-binomial-pattern",
                        passed: false,
                        detail: format!("failed at p = {q}, alpha = {alpha}"),
                    }
                }
            }
        }
    }
    CheckResult {
        name: "totient-binomial-pattern",
        passed: true,
        detail: "p in {2,3,5,7}, alpha <= 3".to_string(),
    }
}

fn chu_vandermonde() -> CheckResult {
    let mut checked = 0u64;
    for x in -6..=6i64 {
        for y in -6..=6i64 {
            for n in 0..=6u32 {
                if !chu_vandermonde_holds(x, y, n) {
                    return CheckResult {
                        name: "chu-vandermonde",
                        passed: false,
                        detail: format!("x = {x}, y = {y}, n = {n}"),
                    };
                }
                checked += 1;
            }
        }
    }
    CheckResult {
        name: "chu-vandermonde",
        passed: true,
        detail: format!("{checked} triples, negatives included"),
    }
}

fn bernoulli_table() -> CheckResult {
    let table = BernoulliTable::up_to(30);
    if !staudt_clausen_holds(&table) {
        return CheckResult {
            name: "bernoulli-staudt-clausen",
            passed: false,
            detail: "denominator mismatch".to_string(),
        };
    }
    CheckResult {
        name: "bernoulli-staudt-clausen",
        passed: true,
        detail: "exact denominators up to B_30".to_string(),
    }
}

fn bernoulli_forward_difference() -> CheckResult {
    let table = BernoulliTable::up_to(12);
    for l in 1..=12u32 {
        for q in &sample_rationals() {
            let lhs = table.poly_eval(l, &(q + BigRational::one())) - table.poly_eval(l, q);
            let rhs = BigRational::from(BigInt::from(l))
                * num_traits::pow(q.clone(), (l - 1) as usize);
            if lhs != rhs {
                return CheckResult {
                    name: "bernoulli-forward-difference",
                    passed: false,
                    detail: format!("l = {l}, q = {q}"),
                };
            }
        }
    }
    CheckResult {
        name: "bernoulli-forward-difference",
        passed: true,
        detail: "B_l(q+1) - B_l(q) = l q^(l-1), l <= 12, 10 sample points".to_string(),
    }
}

fn bernoulli_reflection() -> CheckResult {
    let table = BernoulliTable::up_to(12);
    for l in 0..=12u32 {
        for q in &sample_rationals() {
            let lhs = table.poly_eval(l, &(BigRational::one() - q));
            let mut rhs = table.poly_eval(l, q);
            if l & 1 == 1 {
                rhs = -rhs;
            }
            if lhs != rhs {
                return CheckResult {
                    name: "bernoulli-reflection",
                    passed: false,
                    detail: format!("l = {l}, q = {q}"),
                };
            }
        }
    }
    CheckResult {
        name: "bernoulli-reflection",
        passed: true,
        detail: "B_l(1-q) = (-1)^l B_l(q), l <= 12, 10 sample points".to_string(),
    }
}

fn bernoulli_shift_integrality() -> CheckResult {
    let mut checked = 0u64;
    for q in [2u64, 3, 5] {
        let p = Prime::new(q).expect("prime");
        for m0 in [1i64, 2, 3, 4, 7] {
            if m0 % q as i64 == 0 {
                continue;
            }
            for l in 0..=8u32 {
                for a in -6..=6i64 {
                    match shift_integrality_holds(l, a, m0, p) {
                        Ok(true) => checked += 1,
                        _ => {
                            return CheckResult {
                                name: "bernoulli-shift-integrality",
                                passed: false,
                                detail: format!("p = {q}, l = {l}, a = {a}, m0 = {m0}"),
                            }
                        }
                    }
                }
            }
        }
    }
    CheckResult {
        name: "bernoulli-shift-integrality",
        passed: true,
        detail: format!("{checked} instances"),
    }
}

/// Runs every identity check; the CLI prints one line per entry and exits
/// nonzero if any failed.
pub fn run_selftest() -> Vec<CheckResult> {
    vec![
        euler_identity(),
        delta_reduction_identity(),
        telescoping_identity(),
        totient_binom_pattern(),
        chu_vandermonde(),
        bernoulli_table(),
        bernoulli_forward_difference(),
        bernoulli_reflection(),
        bernoulli_shift_integrality(),
    ]
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}
