//! Residue-class alternating binomial sums, the valuation lower bounds they
//! satisfy, and the classical identities those bounds rest on.
//!
//! The central object is
//!
//! ```text
//!     S = sum over 0 <= k <= n, k = r (mod p^beta)  of  C(n,k) (-1)^k w(k)
//! ```
//!
//! where the weight `w` is one of the families in [`Weight`]. For each
//! weight family there is a proven lower bound on `ord_p(S)`; [`verify`]
//! computes the sum exactly, takes its valuation, and compares.
//!
//! Summation is exact throughout: terms are accumulated as big integers
//! over a common denominator extracted from the weight, and divided out
//! once at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    binom, binom_int, floor_div, prime_power, totient_prime_power, vp_int, vp_rat, Prime,
    Valuation,
};
use crate::bernoulli::BernoulliTable;
use crate::poly::IvPoly;
use crate::Error;

/// Hard cap on `n`; a single Pascal row at this size is already ~25 MB.
pub const MAX_N: i64 = 20_000;

/// Cap on weight degree parameters, far above any meaningful grid.
pub const MAX_WEIGHT_DEGREE: u32 = 1_000;

/// Weight family of one sum. `alpha` and `r` come from the enclosing
/// [`SumSpec`]; `j` below abbreviates `floor((k - r) / p^alpha)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    /// `w(k) = 1`.
    Constant,
    /// `w(k) = f(j)` for an integer-valued polynomial `f`.
    PolyFloor(IvPoly),
    /// `w(k) = C(j, l)`.
    ChooseFloor(u32),
    /// `w(k) = B_l((k - r) / m)` for the Bernoulli polynomial `B_l`.
    BernoulliArg { degree: u32, modulus: i64 },
    /// `w(k) = a^j`. Needs `r < p^beta` so the exponent stays nonnegative.
    PowerFloor(i64),
    /// `w(k) = gcd(k - r, p^alpha) * f(j)`, with `gcd(0, p^alpha) = p^alpha`.
    GcdPoly(IvPoly),
    /// `w(k) = b^k`. The alternating `(-1)^k` stays global, so a sum of
    /// `C(n,k) * s^k` with `s = -b` is expressed by `PowerK(b)`.
    PowerK(i64),
}

impl Weight {
    /// Canonical short form used in reports and as sweep cell keys.
    pub fn label(&self) -> String {
        match self {
            Weight::Constant => "const".to_string(),
            Weight::PolyFloor(f) => format!("poly{f}"),
            Weight::ChooseFloor(l) => format!("choose({l})"),
            Weight::BernoulliArg { degree, modulus } => {
                format!("bernoulli(l={degree},m={modulus})")
            }
            Weight::PowerFloor(a) => format!("power_floor(a={a})"),
            Weight::GcdPoly(f) => format!("gcd_poly{f}"),
            Weight::PowerK(b) => format!("power(b={b})"),
        }
    }

    /// `a^j` with `a = 1` is the constant weight; normalizing here keeps the
    /// degenerate case on the same code path as every other constant sum.
    fn normalized(self) -> Weight {
        match self {
            Weight::PowerFloor(1) => Weight::Constant,
            other => other,
        }
    }
}

/// One fully specified sum instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumSpec {
    pub p: Prime,
    pub alpha: u32,
    pub beta: u32,
    pub n: i64,
    pub r: i64,
    pub weight: Weight,
}

impl SumSpec {
    pub fn new(
        p: Prime,
        alpha: u32,
        beta: u32,
        n: i64,
        r: i64,
        weight: Weight,
    ) -> Result<SumSpec, Error> {
        if beta > alpha {
            return Err(Error::OutOfRange(format!("beta = {beta} > alpha = {alpha}")));
        }
        if n < 0 {
            return Err(Error::OutOfRange(format!("n = {n} must be >= 0")));
        }
        if n > MAX_N {
            return Err(Error::OutOfRange(format!("n = {n} exceeds cap {MAX_N}")));
        }
        prime_power(p, alpha)?; // fail early on unrepresentable moduli
        match weight {
            Weight::BernoulliArg { modulus, .. } if modulus < 1 => {
                return Err(Error::OutOfRange(format!("modulus m = {modulus} must be >= 1")));
            }
            Weight::BernoulliArg { degree, .. } | Weight::ChooseFloor(degree)
                if degree > MAX_WEIGHT_DEGREE =>
            {
                return Err(Error::OutOfRange(format!(
                    "weight degree {degree} exceeds cap {MAX_WEIGHT_DEGREE}"
                )));
            }
            _ => {}
        }
        Ok(SumSpec {
            p,
            alpha,
            beta,
            n,
            r,
            weight: weight.normalized(),
        })
    }

    /// Per-sum preconditions beyond the structural invariants.
    fn validate_for_sum(&self) -> Result<(), Error> {
        if let Weight::PowerFloor(_) = self.weight {
            let pbeta = prime_power(self.p, self.beta)?;
            if self.r >= pbeta {
                return Err(Error::OutOfRange(format!(
                    "power_floor weight needs r < p^beta = {pbeta}, got r = {}",
                    self.r
                )));
            }
        }
        Ok(())
    }
}

/// Row `C(n, 0..=n)` by the multiplicative recurrence.
pub(crate) fn pascal_row(n: i64) -> Vec<BigInt> {
    debug_assert!((0..=MAX_N).contains(&n));
    let n = n as u64;
    let mut row: Vec<BigInt> = Vec::with_capacity(n as usize + 1);
    row.push(BigInt::one());
    for k in 1..=n {
        let next = &row[(k - 1) as usize] * (n - k + 1) / k;
        row.push(next);
    }
    row
}

/// Pascal triangle rows 0..=n_max, built by addition. Shared read-only by
/// sweep workers.
pub struct BinomRows {
    rows: Vec<Vec<BigInt>>,
}

impl BinomRows {
    pub fn up_to(n_max: i64) -> BinomRows {
        assert!((0..=MAX_N).contains(&n_max));
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max as usize + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=n_max as usize {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        BinomRows { rows }
    }

    pub fn row(&self, n: i64) -> &[BigInt] {
        &self.rows[n as usize]
    }

    pub fn max_n(&self) -> i64 {
        self.rows.len() as i64 - 1
    }
}

/// Memo of scaled weight values indexed by `j - jmin`.
struct JMemo {
    jmin: i64,
    vals: Vec<Option<BigInt>>,
}

impl JMemo {
    fn new(jmin: i64, jmax: i64) -> JMemo {
        let len = (jmax - jmin + 1).max(0) as usize;
        JMemo {
            jmin,
            vals: vec![None; len],
        }
    }

    fn get_or_insert_with(&mut self, j: i64, fill: impl FnOnce(i64) -> BigInt) -> &BigInt {
        let idx = (j - self.jmin) as usize;
        self.vals[idx].get_or_insert_with(|| fill(j))
    }
}

enum ScaledKind {
    Const,
    /// `D * f(j)` from binomial-basis coefficients pre-scaled by `D`.
    FloorPoly { scaled: Vec<BigInt>, memo: JMemo },
    Choose { level: i64, memo: JMemo },
    /// Horner coefficients of `D * B_l(u/m)` as a polynomial in `u = k - r`.
    Bernoulli { horner: Vec<BigInt> },
    PowerFloor { base: BigInt, memo: JMemo },
    GcdPoly { scaled: Vec<BigInt>, memo: JMemo },
    /// `b^k` walked along the residue class: multiply by `b^step` each term.
    Geometric { cur: BigInt, mult: BigInt, primed: bool },
}

/// Weight evaluator that returns `D * w(k)` as a big integer, where the
/// denominator `D` is fixed per spec. Summing integers and dividing by `D`
/// once avoids a gcd-reduction on every term.
struct ScaledWeight {
    denom: BigInt,
    palpha: i64,
    r: i64,
    kind: ScaledKind,
}

fn lcm_of_denoms(coeffs: &[BigRational]) -> BigInt {
    coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

fn scale_coeffs(coeffs: &[BigRational], denom: &BigInt) -> Vec<BigInt> {
    coeffs
        .iter()
        .map(|c| {
            let scaled = c * BigRational::from(denom.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

fn poly_scaled_value(scaled: &[BigInt], j: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for (t, s) in scaled.iter().enumerate() {
        if !s.is_zero() {
            acc += s * binom_int(j, t as i64);
        }
    }
    acc
}

impl ScaledWeight {
    fn prepare(spec: &SumSpec, palpha: i64, k0: i64, k_last: i64, step: i64) -> ScaledWeight {
        let jmin = Integer::div_floor(&(k0 - spec.r), &palpha);
        let jmax = Integer::div_floor(&(k_last - spec.r), &palpha);
        let (denom, kind) = match &spec.weight {
            Weight::Constant => (BigInt::one(), ScaledKind::Const),
            Weight::PolyFloor(f) => {
                let denom = lcm_of_denoms(f.coeffs());
                let scaled = scale_coeffs(f.coeffs(), &denom);
                (
                    denom,
                    ScaledKind::FloorPoly {
                        scaled,
                        memo: JMemo::new(jmin, jmax),
                    },
                )
            }
            Weight::ChooseFloor(l) => (
                BigInt::one(),
                ScaledKind::Choose {
                    level: *l as i64,
                    memo: JMemo::new(jmin, jmax),
                },
            ),
            Weight::BernoulliArg { degree, modulus } => {
                let l = *degree;
                let table = BernoulliTable::up_to(l);
                let db = lcm_of_denoms(
                    &(0..=l).map(|t| table.number(t).clone()).collect::<Vec<_>>(),
                );
                // D = db * m^l;  D * B_l(u/m) = sum_t C(l,t) * (db B_t) * m^t * u^(l-t)
                let m = BigInt::from(*modulus);
                let denom = &db * m.clone().pow(l);
                let mut horner = Vec::with_capacity(l as usize + 1);
                let mut mpow = BigInt::one();
                for t in 0..=l {
                    let scaled_b = table.number(t) * BigRational::from(db.clone());
                    debug_assert!(scaled_b.is_integer());
                    horner.push(binom(l as u64, t as i64) * scaled_b.to_integer() * &mpow);
                    mpow *= &m;
                }
                (denom, ScaledKind::Bernoulli { horner })
            }
            Weight::PowerFloor(a) => (
                BigInt::one(),
                ScaledKind::PowerFloor {
                    base: BigInt::from(*a),
                    memo: JMemo::new(jmin, jmax),
                },
            ),
            Weight::GcdPoly(f) => {
                let denom = lcm_of_denoms(f.coeffs());
                let scaled = scale_coeffs(f.coeffs(), &denom);
                (
                    denom,
                    ScaledKind::GcdPoly {
                        scaled,
                        memo: JMemo::new(jmin, jmax),
                    },
                )
            }
            Weight::PowerK(b) => {
                let base = BigInt::from(*b);
                let cur = num_traits::pow(base.clone(), k0 as usize);
                let mult = num_traits::pow(base, step as usize);
                (
                    BigInt::one(),
                    ScaledKind::Geometric {
                        cur,
                        mult,
                        primed: false,
                    },
                )
            }
        };
        ScaledWeight {
            denom,
            palpha,
            r: spec.r,
            kind,
        }
    }

    fn value_at(&mut self, k: i64) -> BigInt {
        let j = Integer::div_floor(&(k - self.r), &self.palpha);
        match &mut self.kind {
            ScaledKind::Const => BigInt::one(),
            ScaledKind::FloorPoly { scaled, memo } => memo
                .get_or_insert_with(j, |j| poly_scaled_value(scaled, j))
                .clone(),
            ScaledKind::Choose { level, memo } => {
                let level = *level;
                memo.get_or_insert_with(j, |j| binom_int(j, level)).clone()
            }
            ScaledKind::Bernoulli { horner } => {
                let u = BigInt::from(k - self.r);
                let mut acc = BigInt::zero();
                for h in horner.iter() {
                    acc = acc * &u + h;
                }
                acc
            }
            ScaledKind::PowerFloor { base, memo } => {
                debug_assert!(j >= 0, "negative exponent must be rejected upstream");
                let base = base.clone();
                memo.get_or_insert_with(j, |j| num_traits::pow(base, j as usize))
                    .clone()
            }
            ScaledKind::GcdPoly { scaled, memo } => {
                let g = (k - self.r).gcd(&self.palpha);
                let g = if g == 0 { self.palpha } else { g };
                memo.get_or_insert_with(j, |j| poly_scaled_value(scaled, j))
                    * BigInt::from(g)
            }
            ScaledKind::Geometric { cur, mult, primed } => {
                if *primed {
                    *cur = &*cur * &*mult;
                } else {
                    *primed = true;
                }
                cur.clone()
            }
        }
    }
}

/// Exact value of the residue-class alternating sum described by `spec`.
/// Terms with `k` outside `[0, n]` vanish by the binomial convention, so
/// the loop runs over the residue class intersected with `[0, n]`.
pub fn alt_sum(spec: &SumSpec) -> Result<BigRational, Error> {
    let row = pascal_row(spec.n);
    alt_sum_with_row(spec, &row)
}

pub(crate) fn alt_sum_with_row(spec: &SumSpec, row: &[BigInt]) -> Result<BigRational, Error> {
    debug_assert_eq!(row.len() as i64, spec.n + 1);
    spec.validate_for_sum()?;
    let step = prime_power(spec.p, spec.beta)?;
    let palpha = prime_power(spec.p, spec.alpha)?;
    let k0 = spec.r.rem_euclid(step);
    if k0 > spec.n {
        return Ok(BigRational::zero());
    }
    let k_last = k0 + (spec.n - k0) / step * step;
    let mut weight = ScaledWeight::prepare(spec, palpha, k0, k_last, step);
    let mut acc = BigInt::zero();
    let mut k = k0;
    while k <= spec.n {
        let term = &row[k as usize] * weight.value_at(k);
        if k & 1 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
        k += step;
    }
    Ok(BigRational::new(acc, weight.denom))
}

/// Kronecker delta as a plain helper; it only ever feeds bound formulas.
fn kronecker(a: u32, b: u32) -> i64 {
    i64::from(a == b)
}

/// `floor((n - p^(alpha-1) - sub) / phi(p^alpha))`.
///
/// For `alpha = 0` the term `p^(alpha-1)` is read as the exact rational
/// `1/p`, so the floor collapses to `n - sub - 1` and `phi(p^0) = 1`.
fn bound_floor(n: i64, p: Prime, alpha: u32, sub: i64) -> Result<i64, Error> {
    if alpha == 0 {
        return Ok(n - sub - 1);
    }
    let num = n - prime_power(p, alpha - 1)? - sub;
    floor_div(num, totient_prime_power(p, alpha)?)
}

/// Smallest admissible `n`: the ceiling of `p^(alpha-1)`, which is 1 when
/// `alpha = 0`.
pub fn min_n(p: Prime, alpha: u32) -> Result<i64, Error> {
    if alpha == 0 {
        Ok(1)
    } else {
        prime_power(p, alpha - 1)
    }
}

fn require_min_n(n: i64, p: Prime, alpha: u32) -> Result<(), Error> {
    let lo = min_n(p, alpha)?;
    if n < lo {
        return Err(Error::OutOfRange(format!(
            "n = {n} below p^(alpha-1) = {lo} (p = {p}, alpha = {alpha})"
        )));
    }
    Ok(())
}

/// Valuation lower bound of the general polynomial congruence for a weight
/// `f(floor((k-r)/p^alpha))` with `deg f <= l`:
///
/// ```text
///   floor((n - p^(alpha-1) - l) / phi(p^alpha)) - (l-1)*alpha - beta
/// ```
///
/// For `alpha > 1` the first `l` in the floor sharpens to the Kronecker
/// delta `d(beta,0)`.
pub fn general_bound(n: i64, p: Prime, alpha: u32, beta: u32, l: u32) -> Result<i64, Error> {
    if beta > alpha {
        return Err(Error::OutOfRange(format!("beta = {beta} > alpha = {alpha}")));
    }
    require_min_n(n, p, alpha)?;
    let sub = if alpha > 1 {
        kronecker(beta, 0)
    } else {
        l as i64
    };
    Ok(bound_floor(n, p, alpha, sub)? - (l as i64 - 1) * alpha as i64 - beta as i64)
}

/// Fleck: `floor((n-1)/(p-1))` for the mod-p alternating sum, `n >= 1`.
pub fn fleck_bound(n: i64, p: Prime) -> Result<i64, Error> {
    if n < 1 {
        return Err(Error::OutOfRange(format!("n = {n} must be >= 1")));
    }
    floor_div(n - 1, p.get() as i64 - 1)
}

/// Weisman: `floor((n - p^(alpha-1)) / phi(p^alpha))`, `n >= p^(alpha-1)`.
pub fn weisman_bound(n: i64, p: Prime, alpha: u32) -> Result<i64, Error> {
    require_min_n(n, p, alpha)?;
    bound_floor(n, p, alpha, 0)
}

/// Wan: `floor((n - l*p - 1) / (p - 1))` for the `C((k-r)/p, l)` weight,
/// `n > l*p`.
pub fn wan_bound(n: i64, p: Prime, l: u32) -> Result<i64, Error> {
    let lp = (l as i64)
        .checked_mul(p.get() as i64)
        .ok_or_else(|| Error::Overflow(format!("l*p with l = {l}, p = {p}")))?;
    if n <= lp {
        return Err(Error::OutOfRange(format!("n = {n} must exceed l*p = {lp}")));
    }
    floor_div(n - lp - 1, p.get() as i64 - 1)
}

/// Bound for the Bernoulli weight `B_l((k-r)/m)` with `alpha = ord_p(m)`:
///
/// ```text
///   floor((n - p^(alpha-1) - l*(d(alpha,0)+d(alpha,1))) / phi(p^alpha)) - l*alpha
/// ```
///
/// Holds for every `n >= 0`; it is simply very negative when `n` is small.
pub fn bernoulli_bound(n: i64, p: Prime, alpha: u32, l: u32) -> Result<i64, Error> {
    if n < 0 {
        return Err(Error::OutOfRange(format!("n = {n} must be >= 0")));
    }
    let sub = l as i64 * (kronecker(alpha, 0) + kronecker(alpha, 1));
    Ok(bound_floor(n, p, alpha, sub)? - l as i64 * alpha as i64)
}

/// Bound for the full-range sum with weight `gcd(k-r, p^alpha) * f(j)`,
/// `deg f = l`:
///
/// ```text
///   floor((n - p^(alpha-1) - l*(d(alpha,0)+d(alpha,1))) / phi(p^alpha)) - (l-1)*alpha - 1
/// ```
pub fn gcd_poly_bound(n: i64, p: Prime, alpha: u32, l: u32) -> Result<i64, Error> {
    require_min_n(n, p, alpha)?;
    let sub = l as i64 * (kronecker(alpha, 0) + kronecker(alpha, 1));
    Ok(bound_floor(n, p, alpha, sub)? - (l as i64 - 1) * alpha as i64 - 1)
}

/// Bound for the weight `a^floor((k-r)/p^alpha)` with `a = 1 (mod p^alpha)`,
/// `alpha > 1`, `r < p^beta`:
///
/// ```text
///   floor((n - p^(alpha-1) - d(beta,0)) / phi(p^alpha)) + alpha - beta
/// ```
pub fn power_floor_bound(n: i64, p: Prime, alpha: u32, beta: u32) -> Result<i64, Error> {
    if alpha <= 1 {
        return Err(Error::OutOfRange(format!("alpha = {alpha} must be > 1")));
    }
    if beta > alpha {
        return Err(Error::OutOfRange(format!("beta = {beta} > alpha = {alpha}")));
    }
    require_min_n(n, p, alpha)?;
    Ok(bound_floor(n, p, alpha, kronecker(beta, 0))? + alpha as i64 - beta as i64)
}

/// Bound for the geometric weight `b^k` (with `b = 1 (mod p)`, the global
/// sign supplying the alternation): `floor((n - p^(alpha-1)) / phi(p^alpha))`.
/// Valid for `alpha = 0` by the binomial theorem and for `alpha = 1` by the
/// classical mod-p case.
pub fn power_bound(n: i64, p: Prime, alpha: u32) -> Result<i64, Error> {
    require_min_n(n, p, alpha)?;
    bound_floor(n, p, alpha, 0)
}

/// Which valuation bound to check a sum against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// The general polynomial bound (weights `const`, `poly`, `choose`).
    General,
    Fleck,
    Weisman,
    Wan,
    /// Bernoulli-polynomial weight bound.
    Bernoulli,
    /// gcd-scaled polynomial weight bound (full-range sum).
    Gcd,
    /// `a^floor((k-r)/p^alpha)` weight bound.
    PowerFloor,
    /// `b^k` geometric weight bound.
    Power,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::General,
        BoundKind::Fleck,
        BoundKind::Weisman,
        BoundKind::Wan,
        BoundKind::Bernoulli,
        BoundKind::Gcd,
        BoundKind::PowerFloor,
        BoundKind::Power,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::General => "general",
            BoundKind::Fleck => "fleck",
            BoundKind::Weisman => "weisman",
            BoundKind::Wan => "wan",
            BoundKind::Bernoulli => "bernoulli",
            BoundKind::Gcd => "gcd",
            BoundKind::PowerFloor => "power-floor",
            BoundKind::Power => "power",
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<BoundKind, Error> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown bound kind {s:?}")))
    }
}

fn mismatch(spec: &SumSpec, kind: BoundKind) -> Error {
    Error::WeightMismatch {
        weight: spec.weight.label(),
        bound: kind.name().to_string(),
    }
}

fn require_zp_valued(f: &IvPoly, p: Prime) -> Result<(), Error> {
    match f.first_non_integral_coeff(p) {
        None => Ok(()),
        Some(index) => Err(Error::NotZpValued { p: p.get(), index }),
    }
}

/// Computes the bound selected by `kind` for `spec`, enforcing the bound's
/// preconditions (weight family, parameter congruences, ranges).
pub fn bound_for(spec: &SumSpec, kind: BoundKind) -> Result<i64, Error> {
    let (p, alpha, beta, n, r) = (spec.p, spec.alpha, spec.beta, spec.n, spec.r);
    match kind {
        BoundKind::General => {
            let l = match &spec.weight {
                Weight::Constant => 0,
                Weight::ChooseFloor(l) => *l,
                Weight::PolyFloor(f) => {
                    require_zp_valued(f, p)?;
                    f.degree()
                }
                _ => return Err(mismatch(spec, kind)),
            };
            general_bound(n, p, alpha, beta, l)
        }
        BoundKind::Fleck => {
            if spec.weight != Weight::Constant {
                return Err(mismatch(spec, kind));
            }
            if beta != 1 {
                return Err(Error::OutOfRange(format!("fleck needs beta = 1, got {beta}")));
            }
            fleck_bound(n, p)
        }
        BoundKind::Weisman => {
            if spec.weight != Weight::Constant {
                return Err(mismatch(spec, kind));
            }
            if beta != alpha {
                return Err(Error::OutOfRange(format!(
                    "weisman needs beta = alpha, got beta = {beta}, alpha = {alpha}"
                )));
            }
            weisman_bound(n, p, alpha)
        }
        BoundKind::Wan => {
            let l = match spec.weight {
                Weight::ChooseFloor(l) => l,
                _ => return Err(mismatch(spec, kind)),
            };
            if alpha != 1 || beta != 1 {
                return Err(Error::OutOfRange(format!(
                    "wan needs alpha = beta = 1, got alpha = {alpha}, beta = {beta}"
                )));
            }
            wan_bound(n, p, l)
        }
        BoundKind::Bernoulli => {
            let (l, m) = match spec.weight {
                Weight::BernoulliArg { degree, modulus } => (degree, modulus),
                _ => return Err(mismatch(spec, kind)),
            };
            if beta != alpha {
                return Err(Error::OutOfRange(format!(
                    "bernoulli bound needs beta = alpha, got beta = {beta}, alpha = {alpha}"
                )));
            }
            let vm = vp_int(&BigInt::from(m), p);
            if vm != Valuation::Finite(alpha as i64) {
                return Err(Error::OutOfRange(format!(
                    "bernoulli bound needs ord_{p}(m) = alpha = {alpha}, but ord_{p}({m}) = {vm}"
                )));
            }
            bernoulli_bound(n, p, alpha, l)
        }
        BoundKind::Gcd => {
            let f = match &spec.weight {
                Weight::GcdPoly(f) => f,
                _ => return Err(mismatch(spec, kind)),
            };
            require_zp_valued(f, p)?;
            gcd_poly_bound(n, p, alpha, f.degree())
        }
        BoundKind::PowerFloor => {
            let a = match spec.weight {
                Weight::PowerFloor(a) => a,
                // a = 1 normalizes to the constant weight
                Weight::Constant => 1,
                _ => return Err(mismatch(spec, kind)),
            };
            let palpha = prime_power(p, alpha)?;
            if (a - 1).rem_euclid(palpha) != 0 {
                return Err(Error::OutOfRange(format!(
                    "power-floor needs a = 1 (mod p^alpha = {palpha}), got a = {a}"
                )));
            }
            let pbeta = prime_power(p, beta)?;
            if r >= pbeta {
                return Err(Error::OutOfRange(format!(
                    "power-floor needs r < p^beta = {pbeta}, got r = {r}"
                )));
            }
            power_floor_bound(n, p, alpha, beta)
        }
        BoundKind::Power => {
            let b = match spec.weight {
                Weight::PowerK(b) => b,
                _ => return Err(mismatch(spec, kind)),
            };
            if (b - 1).rem_euclid(p.get() as i64) != 0 {
                return Err(Error::OutOfRange(format!(
                    "power bound needs b = 1 (mod p = {p}), got b = {b}"
                )));
            }
            if beta != alpha {
                return Err(Error::OutOfRange(format!(
                    "power bound needs beta = alpha, got beta = {beta}, alpha = {alpha}"
                )));
            }
            power_bound(n, p, alpha)
        }
    }
}

/// Outcome of checking one sum against one bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// Exact sum, as a `"num/den"` string in JSON.
    #[serde(with = "serde_rat")]
    pub sum: BigRational,
    pub ord: Valuation,
    pub bound: i64,
    pub slack: Valuation,
    pub holds: bool,
    /// True when the bound is negative, so `holds` carries no information
    /// for weights whose values are p-integral.
    pub vacuous: bool,
}

/// Serializes a `BigRational` as its exact `"num/den"` display form.
pub mod serde_rat {
    use num_rational::BigRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }
}

/// Evaluates `spec` exactly and checks its valuation against the selected
/// bound. Precondition violations surface as errors; `holds = false` in the
/// returned report means an actual counterexample to the bound.
pub fn verify(spec: &SumSpec, kind: BoundKind) -> Result<BoundReport, Error> {
    let bound = bound_for(spec, kind)?;
    let sum = match kind {
        // the gcd-weight congruence sums over the full range 0..=n; the
        // spec's beta plays no role there
        BoundKind::Gcd => {
            let mut full = spec.clone();
            full.beta = 0;
            alt_sum(&full)?
        }
        _ => alt_sum(spec)?,
    };
    Ok(finish_report(spec.p, sum, bound))
}

/// Same as [`verify`] but reusing a shared Pascal row for `spec.n`.
pub fn verify_with_row(spec: &SumSpec, kind: BoundKind, row: &[BigInt]) -> Result<BoundReport, Error> {
    let bound = bound_for(spec, kind)?;
    let sum = match kind {
        BoundKind::Gcd => {
            let mut full = spec.clone();
            full.beta = 0;
            alt_sum_with_row(&full, row)?
        }
        _ => alt_sum_with_row(spec, row)?,
    };
    Ok(finish_report(spec.p, sum, bound))
}

fn finish_report(p: Prime, sum: BigRational, bound: i64) -> BoundReport {
    let ord = vp_rat(&sum, p);
    BoundReport {
        sum,
        ord,
        bound,
        slack: ord.minus(bound),
        holds: ord.at_least(bound),
        vacuous: bound < 0,
    }
}

/// `sum over k = r (mod p^alpha), 0 <= k <= n  of  C(n,k) * b^k` for
/// `b = -1 (mod p)`. No alternating sign here: it is folded into `b`.
pub fn power_residue_sum(n: i64, r: i64, p: Prime, alpha: u32, b: i64) -> Result<BigRational, Error> {
    if (b + 1).rem_euclid(p.get() as i64) != 0 {
        return Err(Error::OutOfRange(format!(
            "base b = {b} must be = -1 (mod p = {p})"
        )));
    }
    if !(0..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} not in 0..={MAX_N}")));
    }
    require_min_n(n, p, alpha)?;
    let step = prime_power(p, alpha)?;
    let k0 = r.rem_euclid(step);
    let row = pascal_row(n);
    let base = BigInt::from(b);
    let mult = num_traits::pow(base.clone(), step as usize);
    let mut power = num_traits::pow(base, k0 as usize);
    let mut acc = BigInt::zero();
    let mut k = k0;
    while k <= n {
        acc += &row[k as usize] * &power;
        power *= &mult;
        k += step;
    }
    Ok(BigRational::from(acc))
}

/// Euler's alternating moment sum `sum_k C(n,k) (-1)^k k^l` (with the
/// convention `0^0 = 1`): equals `(-1)^n n!` when `l = n` and vanishes for
/// `0 <= l < n`.
pub fn euler_sum(n: u32, l: u32) -> BigInt {
    let row = pascal_row(n as i64);
    let mut acc = BigInt::zero();
    for (k, c) in row.iter().enumerate() {
        let term = c * num_traits::pow(BigInt::from(k), l as usize);
        if k & 1 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

/// Both sides of the reduction identity that trades the floor weight for a
/// forward difference: for `n, m >= 1` and any `r`,
///
/// ```text
///   sum_{k=0..n} C(n,k) (-1)^k f(floor((k-r)/m))
///     = sum_{k = rbar (mod m), 0 <= k <= n-1} C(n-1,k) (-1)^(k-1) Df((k-rbar)/m)
/// ```
///
/// with `rbar = r + m - 1`. Returns (lhs, rhs); equality is the identity.
pub fn delta_reduction_pair(
    n: i64,
    m: i64,
    r: i64,
    f: &IvPoly,
) -> Result<(BigRational, BigRational), Error> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} not in 1..={MAX_N}")));
    }
    if m < 1 {
        return Err(Error::OutOfRange(format!("m = {m} must be >= 1")));
    }
    let row = pascal_row(n);
    let mut lhs = BigRational::zero();
    for k in 0..=n {
        let j = Integer::div_floor(&(k - r), &m);
        let term = BigRational::from(row[k as usize].clone()) * f.eval_int(j);
        if k & 1 == 1 {
            lhs -= term;
        } else {
            lhs += term;
        }
    }
    let rbar = r + m - 1;
    let df = f.delta();
    let prev_row = pascal_row(n - 1);
    let mut rhs = BigRational::zero();
    let mut k = rbar.rem_euclid(m);
    while k < n {
        let term = BigRational::from(prev_row[k as usize].clone()) * df.eval_int((k - rbar) / m);
        // sign is (-1)^(k-1)
        if k & 1 == 1 {
            rhs += term;
        } else {
            rhs -= term;
        }
        k += m;
    }
    Ok((lhs, rhs))
}

/// Both sides of the telescoping identity for forward differences along a
/// residue class: for `m >= 1`, `n >= 0`,
///
/// ```text
///   sum_{0 <= k <= n, k = r (mod m)} Df((k-r)/m)
///     = f(floor((n-r)/m) + 1) - f(floor((-r-1)/m) + 1)
/// ```
pub fn telescoping_pair(
    n: i64,
    m: i64,
    r: i64,
    f: &IvPoly,
) -> Result<(BigRational, BigRational), Error> {
    if !(0..=MAX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} not in 0..={MAX_N}")));
    }
    if m < 1 {
        return Err(Error::OutOfRange(format!("m = {m} must be >= 1")));
    }
    let df = f.delta();
    let mut lhs = BigRational::zero();
    let mut k = r.rem_euclid(m);
    while k <= n {
        lhs += df.eval_int((k - r) / m);
        k += m;
    }
    let hi = Integer::div_floor(&(n - r), &m) + 1;
    let lo = Integer::div_floor(&(-r - 1), &m) + 1;
    let rhs = f.eval_int(hi) - f.eval_int(lo);
    Ok((lhs, rhs))
}

/// Checks the mod-p sign pattern of the binomials `C(phi(p^alpha), k)`:
/// congruent to `(-1)^k` when `p^(alpha-1) | k` and to 0 otherwise, for
/// `0 <= k <= phi(p^alpha)`. Each residue is computed both from the exact
/// binomial and through Lucas reduction; the two routes must agree.
pub fn totient_binom_pattern_holds(p: Prime, alpha: u32) -> Result<bool, Error> {
    if alpha < 1 {
        return Err(Error::OutOfRange(format!("alpha = {alpha} must be >= 1")));
    }
    let t = totient_prime_power(p, alpha)?;
    if t > MAX_N {
        return Err(Error::OutOfRange(format!("phi(p^alpha) = {t} exceeds cap {MAX_N}")));
    }
    let pm1 = prime_power(p, alpha - 1)?;
    let pp = BigInt::from(p.get());
    for k in 0..=t {
        let exact = binom(t as u64, k).mod_floor(&pp);
        let lucas = crate::arith::lucas_binom_mod_p(t as u64, k as u64, p);
        if exact != BigInt::from(lucas) {
            return Ok(false);
        }
        let expected = if k % pm1 == 0 {
            if k & 1 == 0 {
                1 % p.get()
            } else {
                p.get() - 1
            }
        } else {
            0
        };
        if lucas != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Chu-Vandermonde convolution over integer upper arguments (negatives
/// included): `sum_k C(x,k) C(y,n-k) = C(x+y,n)`.
pub fn chu_vandermonde_holds(x: i64, y: i64, n: u32) -> bool {
    let mut lhs = BigInt::zero();
    for k in 0..=n as i64 {
        lhs += binom_int(x, k) * binom_int(y, n as i64 - k);
    }
    lhs == binom_int(x + y, n as i64)
}
