//! Grid verification: instantiate a family of sums from a JSON config, check
//! every instance against the selected bound, and aggregate into a
//! deterministic report.
//!
//! Determinism contract: the report depends only on the config, never on
//! thread scheduling. Cells are evaluated independently (optionally in
//! parallel), then merged in sorted key order; within a cell, specs run in
//! a fixed (n, r) order. Specs that fail a bound's preconditions are
//! counted as skipped with a reason, never silently dropped.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{prime_power, Prime, Valuation};
use crate::congruence::{
    min_n, pascal_row, verify_with_row, BinomRows, BoundKind, SumSpec, Weight, MAX_N,
};
use crate::poly::IvPoly;
use crate::Error;

/// Largest modulus for which residue rules enumerate all residues.
const MAX_RESIDUE_ENUM: i64 = 100_000;

/// Row-table cache threshold: above this the per-spec row is recomputed,
/// trading time for memory.
const ROW_CACHE_MAX_N: i64 = 700;

/// Parses an exact rational from `"num/den"` or plain integer form.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Config(format!("bad rational {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Config(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Config(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Coefficient basis for polynomial weight descriptors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Binomial,
    Monomial,
}

pub fn poly_from_config(basis: Basis, coeffs: &[String]) -> Result<IvPoly, Error> {
    let parsed: Vec<BigRational> = coeffs
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_, _>>()?;
    Ok(match basis {
        Basis::Binomial => IvPoly::from_binomial_coeffs(parsed),
        Basis::Monomial => IvPoly::from_monomial_coeffs(&parsed),
    })
}

/// Grid-relative weight descriptor. Parameters that must track the cell
/// (the modulus of a Bernoulli weight, the congruence class of a power
/// base) are given as factors applied to `p` and `alpha` per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightDesc {
    /// Constant weight 1.
    Const,
    /// `f(floor((k-r)/p^alpha))`.
    Poly { basis: Basis, coeffs: Vec<String> },
    /// `C(floor((k-r)/p^alpha), degree)`.
    Choose { degree: u32 },
    /// `B_degree((k-r)/m)` with `m = p^alpha * m0`; cells where `p | m0`
    /// are skipped.
    Bernoulli { degree: u32, m0: i64 },
    /// `a^floor((k-r)/p^alpha)` with `a = 1 + multiplier * p^alpha`.
    PowerFloor { multiplier: i64 },
    /// `gcd(k-r, p^alpha) * f(floor((k-r)/p^alpha))`.
    GcdPoly { basis: Basis, coeffs: Vec<String> },
    /// `b^k` with `b = 1 + multiplier * p`.
    PowerK { multiplier: i64 },
}

impl WeightDesc {
    pub fn instantiate(&self, p: Prime, alpha: u32) -> Result<Weight, Error> {
        match self {
            WeightDesc::Const => Ok(Weight::Constant),
            WeightDesc::Poly { basis, coeffs } => {
                Ok(Weight::PolyFloor(poly_from_config(*basis, coeffs)?))
            }
            WeightDesc::Choose { degree } => Ok(Weight::ChooseFloor(*degree)),
            WeightDesc::Bernoulli { degree, m0 } => {
                if *m0 < 1 {
                    return Err(Error::Config(format!("bernoulli m0 = {m0} must be >= 1")));
                }
                if m0 % p.get() as i64 == 0 {
                    return Err(Error::OutOfRange(format!("m0 = {m0} divisible by p = {p}")));
                }
                let m = prime_power(p, alpha)?
                    .checked_mul(*m0)
                    .ok_or_else(|| Error::Overflow(format!("m = p^{alpha} * {m0}")))?;
                Ok(Weight::BernoulliArg {
                    degree: *degree,
                    modulus: m,
                })
            }
            WeightDesc::PowerFloor { multiplier } => {
                let a = multiplier
                    .checked_mul(prime_power(p, alpha)?)
                    .and_then(|v| v.checked_add(1))
                    .ok_or_else(|| Error::Overflow(format!("a = 1 + {multiplier} * p^{alpha}")))?;
                Ok(Weight::PowerFloor(a))
            }
            WeightDesc::GcdPoly { basis, coeffs } => {
                Ok(Weight::GcdPoly(poly_from_config(*basis, coeffs)?))
            }
            WeightDesc::PowerK { multiplier } => {
                let b = multiplier
                    .checked_mul(p.get() as i64)
                    .and_then(|v| v.checked_add(1))
                    .ok_or_else(|| Error::Overflow(format!("b = 1 + {multiplier} * p")))?;
                Ok(Weight::PowerK(b))
            }
        }
    }

    /// Label used when instantiation itself fails for a cell.
    fn fallback_label(&self) -> String {
        match self {
            WeightDesc::Const => "const".to_string(),
            WeightDesc::Poly { coeffs, .. } => format!("poly[{}]", coeffs.join(",")),
            WeightDesc::Choose { degree } => format!("choose({degree})"),
            WeightDesc::Bernoulli { degree, m0 } => format!("bernoulli(l={degree},m0={m0})"),
            WeightDesc::PowerFloor { multiplier } => format!("power_floor(c={multiplier})"),
            WeightDesc::GcdPoly { coeffs, .. } => format!("gcd_poly[{}]", coeffs.join(",")),
            WeightDesc::PowerK { multiplier } => format!("power(c={multiplier})"),
        }
    }
}

/// Which beta values to sweep for a given alpha.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaRule {
    /// `"0..alpha"`, `"alpha"`, or `"0"`.
    Named(String),
    List(Vec<u32>),
}

impl BetaRule {
    fn validate(&self) -> Result<(), Error> {
        match self {
            BetaRule::Named(s) if s == "0..alpha" || s == "alpha" || s == "0" => Ok(()),
            BetaRule::Named(s) => Err(Error::Config(format!("betas: unknown rule {s:?}"))),
            BetaRule::List(_) => Ok(()),
        }
    }

    fn betas_for(&self, alpha: u32) -> Vec<u32> {
        match self {
            BetaRule::Named(s) if s == "0..alpha" => (0..=alpha).collect(),
            BetaRule::Named(s) if s == "alpha" => vec![alpha],
            BetaRule::Named(_) => vec![0],
            BetaRule::List(v) => v.clone(),
        }
    }
}

/// Which residues r to sweep for a given (p, beta).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RRule {
    /// `"default"`: all residues mod p^beta plus the out-of-range
    /// representatives -1 and p^beta (the latter omitted for the
    /// power-floor bound, whose statement requires r < p^beta).
    /// `"residues"`: exactly the residues 0..p^beta-1.
    Named(String),
    List(Vec<i64>),
}

impl RRule {
    fn validate(&self) -> Result<(), Error> {
        match self {
            RRule::Named(s) if s == "default" || s == "residues" => Ok(()),
            RRule::Named(s) => Err(Error::Config(format!("r: unknown rule {s:?}"))),
            RRule::List(_) => Ok(()),
        }
    }

    fn r_list(&self, p: Prime, beta: u32, bound: BoundKind) -> Result<Vec<i64>, Error> {
        let enumerated = |with_extras: bool| -> Result<Vec<i64>, Error> {
            let m = prime_power(p, beta)?;
            if m > MAX_RESIDUE_ENUM {
                return Err(Error::Config(format!(
                    "r: cannot enumerate {m} residues (p = {p}, beta = {beta})"
                )));
            }
            let mut v = Vec::with_capacity(m as usize + 2);
            if with_extras {
                v.push(-1);
            }
            v.extend(0..m);
            if with_extras && bound != BoundKind::PowerFloor {
                v.push(m);
            }
            Ok(v)
        };
        match self {
            RRule::Named(s) if s == "default" => enumerated(true),
            RRule::Named(_) => enumerated(false),
            RRule::List(v) => Ok(v.clone()),
        }
    }
}

/// Declarative description of a verification grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub bound: BoundKind,
    pub primes: Vec<u64>,
    pub alphas: Vec<u32>,
    pub betas: BetaRule,
    /// Inclusive offsets `[lo, hi]` of n relative to the ceiling of
    /// `p^(alpha-1)` (clamped below at 0).
    pub n_offsets: (i64, i64),
    pub r: RRule,
    pub weights: Vec<WeightDesc>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<SweepConfig, Error> {
        let config: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (i, &pv) in self.primes.iter().enumerate() {
            Prime::new(pv).map_err(|e| Error::Config(format!("primes[{i}]: {e}")))?;
        }
        self.betas.validate()?;
        self.r.validate()?;
        let (lo, hi) = self.n_offsets;
        if lo > hi {
            return Err(Error::Config(format!("n_offsets: lo = {lo} > hi = {hi}")));
        }
        if self.weights.is_empty() {
            return Err(Error::Config("weights: empty list".to_string()));
        }
        for (i, desc) in self.weights.iter().enumerate() {
            match desc {
                WeightDesc::Poly { basis, coeffs } | WeightDesc::GcdPoly { basis, coeffs } => {
                    poly_from_config(*basis, coeffs)
                        .map_err(|e| Error::Config(format!("weights[{i}]: {e}")))?;
                }
                WeightDesc::Bernoulli { m0, .. } if *m0 < 1 => {
                    return Err(Error::Config(format!("weights[{i}]: m0 = {m0} must be >= 1")));
                }
                _ => {}
            }
        }
        // the n range must stay under the summation cap for every cell
        for &pv in &self.primes {
            let p = Prime::new(pv).expect("validated above");
            for &alpha in &self.alphas {
                let base =
                    min_n(p, alpha).map_err(|e| Error::Config(format!("alphas: {e}")))?;
                base.checked_add(hi)
                    .filter(|&n| n <= MAX_N)
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "n_offsets: n reaches past the cap {MAX_N} at p = {p}, alpha = {alpha}"
                        ))
                    })?;
            }
        }
        Ok(())
    }
}

type CellKey = (u64, u32, u32, String);

struct CellPlan {
    key: CellKey,
    p: Prime,
    alpha: u32,
    beta: u32,
    weight: Result<Weight, Error>,
    n_lo: i64,
    n_hi: i64,
    r_list: Vec<i64>,
}

fn build_plans(config: &SweepConfig) -> Result<Vec<CellPlan>, Error> {
    let mut plans = Vec::new();
    for &pv in &config.primes {
        let p = Prime::new(pv)?;
        for &alpha in &config.alphas {
            let base = min_n(p, alpha)?;
            let n_lo = (base + config.n_offsets.0).max(0);
            let n_hi = base + config.n_offsets.1;
            for beta in config.betas.betas_for(alpha) {
                // beta > alpha (possible with an explicit list) makes every
                // spec of the cell ill-formed; clamping just bounds the
                // residue enumeration used for skip counting
                let r_list = config.r.r_list(p, beta.min(alpha), config.bound)?;
                for desc in &config.weights {
                    let weight = desc.instantiate(p, alpha);
                    let label = match &weight {
                        Ok(w) => w.label(),
                        Err(_) => desc.fallback_label(),
                    };
                    plans.push(CellPlan {
                        key: (pv, alpha, beta, label),
                        p,
                        alpha,
                        beta,
                        weight,
                        n_lo,
                        n_hi,
                        r_list: r_list.clone(),
                    });
                }
            }
        }
    }
    Ok(plans)
}

/// One sum instance in report form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub p: u64,
    pub alpha: u32,
    pub beta: u32,
    pub n: i64,
    pub r: i64,
    pub weight: String,
}

impl SpecRecord {
    fn from_spec(spec: &SumSpec) -> SpecRecord {
        SpecRecord {
            p: spec.p.get(),
            alpha: spec.alpha,
            beta: spec.beta,
            n: spec.n,
            r: spec.r,
            weight: spec.weight.label(),
        }
    }
}

/// A bound failure; any occurrence rejects the build.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub spec: SpecRecord,
    pub ord: Valuation,
    pub bound: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellSummary {
    pub p: u64,
    pub alpha: u32,
    pub beta: u32,
    pub weight: String,
    pub total: u64,
    pub holds: u64,
    pub skipped: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    pub min_slack: Valuation,
    pub equality_count: u64,
    pub first_equality: Option<SpecRecord>,
}

/// Aggregated sweep result. Serialization is deterministic: cells are
/// sorted by (p, alpha, beta, weight) and all maps are ordered.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub bound: BoundKind,
    pub total: u64,
    pub holds: u64,
    pub skipped: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    pub min_slack: Valuation,
    pub equality_count: u64,
    pub violations: Vec<ViolationRecord>,
    pub cells: Vec<CellSummary>,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Flat per-cell projection; the weight column is quoted because poly
    /// labels contain commas.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("p,alpha,beta,weight,total,holds,skipped,min_slack,equality_count\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},\"{}\",{},{},{},{},{}\n",
                c.p,
                c.alpha,
                c.beta,
                c.weight,
                c.total,
                c.holds,
                c.skipped,
                c.min_slack,
                c.equality_count
            ));
        }
        out
    }
}

struct CellOutcome {
    key: CellKey,
    total: u64,
    holds: u64,
    skipped: u64,
    skip_reasons: BTreeMap<String, u64>,
    min_slack: Valuation,
    equality_count: u64,
    first_equality: Option<SpecRecord>,
    violations: Vec<ViolationRecord>,
}

impl CellOutcome {
    fn new(key: CellKey) -> CellOutcome {
        CellOutcome {
            key,
            total: 0,
            holds: 0,
            skipped: 0,
            skip_reasons: BTreeMap::new(),
            min_slack: Valuation::Infinite,
            equality_count: 0,
            first_equality: None,
            violations: Vec::new(),
        }
    }

    fn skip(&mut self, count: u64, reason: &str) {
        self.skipped += count;
        *self.skip_reasons.entry(reason.to_string()).or_insert(0) += count;
    }

    fn merge(&mut self, other: CellOutcome) {
        self.total += other.total;
        self.holds += other.holds;
        self.skipped += other.skipped;
        for (reason, count) in other.skip_reasons {
            *self.skip_reasons.entry(reason).or_insert(0) += count;
        }
        self.min_slack = self.min_slack.min(other.min_slack);
        self.equality_count += other.equality_count;
        if self.first_equality.is_none() {
            self.first_equality = other.first_equality;
        }
        self.violations.extend(other.violations);
    }
}

fn evaluate_cell(plan: &CellPlan, kind: BoundKind, rows: Option<&BinomRows>) -> CellOutcome {
    let mut out = CellOutcome::new(plan.key.clone());
    let weight = match &plan.weight {
        Ok(w) => w,
        Err(e) => {
            let n_count = (plan.n_hi - plan.n_lo + 1).max(0) as u64;
            out.skip(n_count * plan.r_list.len() as u64, e.reason_key());
            return out;
        }
    };
    for n in plan.n_lo..=plan.n_hi {
        let owned_row;
        let row: &[BigInt] = match rows {
            Some(table) if n <= table.max_n() => table.row(n),
            _ => {
                owned_row = pascal_row(n);
                &owned_row
            }
        };
        for &r in &plan.r_list {
            let spec = match SumSpec::new(plan.p, plan.alpha, plan.beta, n, r, weight.clone()) {
                Ok(spec) => spec,
                Err(e) => {
                    out.skip(1, e.reason_key());
                    continue;
                }
            };
            match verify_with_row(&spec, kind, row) {
                Err(e) => out.skip(1, e.reason_key()),
                Ok(report) => {
                    out.total += 1;
                    if report.holds {
                        out.holds += 1;
                    } else {
                        out.violations.push(ViolationRecord {
                            spec: SpecRecord::from_spec(&spec),
                            ord: report.ord,
                            bound: report.bound,
                        });
                    }
                    out.min_slack = out.min_slack.min(report.slack);
                    if report.slack == Valuation::Finite(0) {
                        out.equality_count += 1;
                        if out.first_equality.is_none() {
                            out.first_equality = Some(SpecRecord::from_spec(&spec));
                        }
                    }
                }
            }
        }
    }
    out
}

fn effective_threads(requested: usize) -> usize {
    let mut threads = if requested == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        requested
    };
    if let Some(cap) = std::env::var("FLECK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
    {
        threads = threads.min(cap);
    }
    threads.max(1)
}

/// Runs the whole grid with `threads` workers (0 = all cores; the
/// `FLECK_THREADS` environment variable caps the count either way) and
/// aggregates the outcome. The report is identical for any thread count.
pub fn run_sweep(config: &SweepConfig, threads: usize) -> Result<SweepReport, Error> {
    config.validate()?;
    let plans = build_plans(config)?;
    let n_max = plans
        .iter()
        .filter(|plan| plan.weight.is_ok())
        .map(|plan| plan.n_hi)
        .max()
        .unwrap_or(-1);
    let rows = if (0..=ROW_CACHE_MAX_N).contains(&n_max) {
        Some(BinomRows::up_to(n_max))
    } else {
        None
    };

    let threads = effective_threads(threads);
    let outcomes: Vec<CellOutcome> = if threads <= 1 || plans.len() <= 1 {
        plans
            .iter()
            .map(|plan| evaluate_cell(plan, config.bound, rows.as_ref()))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| {
            plans
                .par_iter()
                .map(|plan| evaluate_cell(plan, config.bound, rows.as_ref()))
                .collect()
        })
    };

    // merge duplicates and order cells by key
    let mut by_key: BTreeMap<CellKey, CellOutcome> = BTreeMap::new();
    for outcome in outcomes {
        match by_key.get_mut(&outcome.key) {
            Some(existing) => existing.merge(outcome),
            None => {
                by_key.insert(outcome.key.clone(), outcome);
            }
        }
    }

    let mut report = SweepReport {
        bound: config.bound,
        total: 0,
        holds: 0,
        skipped: 0,
        skip_reasons: BTreeMap::new(),
        min_slack: Valuation::Infinite,
        equality_count: 0,
        violations: Vec::new(),
        cells: Vec::with_capacity(by_key.len()),
    };
    for ((p, alpha, beta, weight), cell) in by_key {
        report.total += cell.total;
        report.holds += cell.holds;
        report.skipped += cell.skipped;
        for (reason, count) in &cell.skip_reasons {
            *report.skip_reasons.entry(reason.clone()).or_insert(0) += count;
        }
        report.min_slack = report.min_slack.min(cell.min_slack);
        report.equality_count += cell.equality_count;
        report.violations.extend(cell.violations);
        report.cells.push(CellSummary {
            p,
            alpha,
            beta,
            weight,
            total: cell.total,
            holds: cell.holds,
            skipped: cell.skipped,
            skip_reasons: cell.skip_reasons,
            min_slack: cell.min_slack,
            equality_count: cell.equality_count,
            first_equality: cell.first_equality,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fleck_config() -> SweepConfig {
        SweepConfig {
            bound: BoundKind::Fleck,
            primes: vec![3],
            alphas: vec![1],
            betas: BetaRule::Named("alpha".to_string()),
            n_offsets: (0, 19),
            r: RRule::List(vec![0, 1, 2]),
            weights: vec![WeightDesc::Const],
        }
    }

    #[test]
    fn empty_grid() {
        let config = SweepConfig {
            primes: vec![],
            ..fleck_config()
        };
        let report = run_sweep(&config, 1).unwrap();
        assert_eq!(report.total, 0);
        assert_eq!(report.skipped, 0);
        assert_eq!(report.min_slack, Valuation::Infinite);
        assert!(report.cells.is_empty());
    }

    #[test]
    fn fleck_grid_20_by_3() {
        // n in 1..=20 and r in {0,1,2}: 60 specs, all holding
        let report = run_sweep(&fleck_config(), 1).unwrap();
        assert_eq!(report.total, 60);
        assert_eq!(report.holds, 60);
        assert!(report.violations.is_empty());
        assert_eq!(report.skipped, 0);
        assert!(report.min_slack.at_least(0));
        assert_eq!(report.cells.len(), 1);
    }

    #[test]
    fn wan_grid_has_no_violations() {
        let config = SweepConfig {
            bound: BoundKind::Wan,
            primes: vec![2],
            alphas: vec![1],
            betas: BetaRule::Named("alpha".to_string()),
            n_offsets: (2, 9), // n = 3..=10 > l*p
            r: RRule::List(vec![0, 1]),
            weights: vec![WeightDesc::Choose { degree: 1 }],
        };
        let report = run_sweep(&config, 1).unwrap();
        assert_eq!(report.total, 16);
        assert!(report.violations.is_empty());
        assert!(report.min_slack.at_least(0));
    }

    #[test]
    fn skips_are_counted_with_reasons() {
        // r = p^beta = 4 violates the power-floor precondition r < p^beta
        let config = SweepConfig {
            bound: BoundKind::PowerFloor,
            primes: vec![2],
            alphas: vec![2],
            betas: BetaRule::Named("alpha".to_string()),
            n_offsets: (0, 5),
            r: RRule::List(vec![0, 4]),
            weights: vec![WeightDesc::PowerFloor { multiplier: 1 }],
        };
        let report = run_sweep(&config, 1).unwrap();
        assert_eq!(report.total, 6);
        assert_eq!(report.skipped, 6);
        assert_eq!(
            report.skip_reasons.get("precondition out of range"),
            Some(&6)
        );
        assert!(report.violations.is_empty());
    }

    #[test]
    fn bernoulli_cells_with_p_dividing_m0_skip() {
        let config = SweepConfig {
            bound: BoundKind::Bernoulli,
            primes: vec![2, 3],
            alphas: vec![1],
            betas: BetaRule::Named("alpha".to_string()),
            n_offsets: (0, 3),
            r: RRule::Named("residues".to_string()),
            weights: vec![WeightDesc::Bernoulli { degree: 2, m0: 3 }],
        };
        let report = run_sweep(&config, 1).unwrap();
        // p = 3 divides m0 = 3: that cell is skipped entirely (4 n's, 3 r's)
        assert_eq!(report.skipped, 12);
        assert_eq!(report.skip_reasons.get("precondition out of range"), Some(&12));
        // p = 2 cell ran: 4 n's, 2 residues
        assert_eq!(report.total, 8);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn default_r_rule_shape() {
        let p = Prime::new(3).unwrap();
        let rule = RRule::Named("default".to_string());
        assert_eq!(
            rule.r_list(p, 1, BoundKind::Fleck).unwrap(),
            vec![-1, 0, 1, 2, 3]
        );
        // the power-floor bound forbids r = p^beta
        assert_eq!(
            rule.r_list(p, 1, BoundKind::PowerFloor).unwrap(),
            vec![-1, 0, 1, 2]
        );
        let residues = RRule::Named("residues".to_string());
        assert_eq!(residues.r_list(p, 0, BoundKind::Fleck).unwrap(), vec![0]);
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let config = fleck_config();
        let a = run_sweep(&config, 1).unwrap().to_json();
        let b = run_sweep(&config, 1).unwrap().to_json();
        let c = run_sweep(&config, 4).unwrap().to_json();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn malformed_configs_name_the_field() {
        let bad = r#"{
            "bound": "fleck",
            "primes": [3, 4],
            "alphas": [1],
            "betas": "alpha",
            "n_offsets": [0, 5],
            "r": "default",
            "weights": [{"kind": "const"}]
        }"#;
        let err = SweepConfig::from_json(bad).unwrap_err();
        assert!(err.to_string().contains("primes[1]"), "{err}");

        let bad_rat = r#"{
            "bound": "general",
            "primes": [3],
            "alphas": [1],
            "betas": "alpha",
            "n_offsets": [0, 5],
            "r": "default",
            "weights": [{"kind": "poly", "basis": "binomial", "coeffs": ["1/0"]}]
        }"#;
        let err = SweepConfig::from_json(bad_rat).unwrap_err();
        assert!(err.to_string().contains("weights[0]"), "{err}");

        let bad_rule = r#"{
            "bound": "fleck",
            "primes": [3],
            "alphas": [1],
            "betas": "upward",
            "n_offsets": [0, 5],
            "r": "default",
            "weights": [{"kind": "const"}]
        }"#;
        let err = SweepConfig::from_json(bad_rule).unwrap_err();
        assert!(err.to_string().contains("betas"), "{err}");
    }

    #[test]
    fn csv_projection_quotes_weights() {
        let config = SweepConfig {
            bound: BoundKind::General,
            primes: vec![2],
            alphas: vec![1],
            betas: BetaRule::Named("alpha".to_string()),
            n_offsets: (0, 4),
            r: RRule::Named("residues".to_string()),
            weights: vec![WeightDesc::Poly {
                basis: Basis::Binomial,
                coeffs: vec!["1".into(), "1/7".into()],
            }],
        };
        let report = run_sweep(&config, 1).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "p,alpha,beta,weight,total,holds,skipped,min_slack,equality_count"
        );
        assert!(lines.next().unwrap().contains("\"poly[1,1/7]\""));
    }
}
