//! Property-based invariants, checked against the independent oracles in
//! `common`.

mod common;

use common::{
    int, pascal_triangle, rat, slow_alt_sum, slow_alt_sum_anchored, slow_bernoulli_poly,
    slow_binom_int, worpitzky_bernoulli,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::sample::select;

use fleck_core::arith::{
    binom, binom_int, binom_rat, floor_div, lucas_binom_mod_p, vp_binom_kummer, vp_factorial,
    vp_int, vp_rat,
};
use fleck_core::bernoulli::BernoulliTable;
use fleck_core::congruence::{
    alt_sum, chu_vandermonde_holds, delta_reduction_pair, euler_sum, min_n, power_residue_sum,
    telescoping_pair, verify,
};
use fleck_core::{BoundKind, IvPoly, Prime, SumSpec, Valuation, Weight};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn small_poly() -> impl Strategy<Value = IvPoly> {
    proptest::collection::vec(rational(), 0..=5).prop_map(IvPoly::from_binomial_coeffs)
}

/// Binomial-basis coefficients whose denominators avoid 2, 3 and 5, so the
/// polynomial is Z_p-valued for every swept prime.
fn zp_poly() -> impl Strategy<Value = IvPoly> {
    proptest::collection::vec(
        (-9i64..=9, select(vec![1i64, 7, 11, 49])).prop_map(|(n, d)| rat(n, d)),
        1..=4,
    )
    .prop_map(IvPoly::from_binomial_coeffs)
}

fn weight_strategy(p: u64, alpha: u32) -> impl Strategy<Value = Weight> {
    let palpha = (p as i64).pow(alpha);
    prop_oneof![
        Just(Weight::Constant),
        small_poly().prop_map(Weight::PolyFloor),
        (0u32..=3).prop_map(Weight::ChooseFloor),
        (0u32..=4, 1i64..=3).prop_map(move |(degree, m0)| Weight::BernoulliArg {
            degree,
            modulus: palpha * m0,
        }),
        (-2i64..=2).prop_map(move |c| Weight::PowerFloor(1 + c * palpha)),
        small_poly().prop_map(Weight::GcdPoly),
        (-6i64..=6).prop_map(Weight::PowerK),
    ]
}

fn spec_strategy() -> impl Strategy<Value = SumSpec> {
    (select(vec![2u64, 3, 5]), 0u32..=2)
        .prop_flat_map(|(p, alpha)| {
            (
                Just(p),
                Just(alpha),
                0..=alpha,
                0i64..=40,
                -10i64..=30,
                weight_strategy(p, alpha),
            )
        })
        .prop_map(|(p, alpha, beta, n, r, weight)| {
            // the power-floor weight needs r < p^beta for its exponents
            let r = if matches!(weight, Weight::PowerFloor(_)) {
                r.min((p as i64).pow(beta) - 1)
            } else {
                r
            };
            SumSpec::new(prime(p), alpha, beta, n, r, weight).unwrap()
        })
}

proptest! {
    /// vp of C(n,k) by exact factorization, Legendre subtraction, and
    /// Kummer carry counting all agree; Lucas reduction matches mod p.
    #[test]
    fn vp_routes_and_lucas_agree(
        n in 0u64..=500,
        k_seed in 0u64..=500,
        p in select(vec![2u64, 3, 5, 7]),
    ) {
        let p = prime(p);
        let k = (k_seed % (n + 1)) as i64;
        let c = binom(n, k);
        let direct = vp_int(&c, p);
        let legendre = vp_factorial(n as i64, p).unwrap()
            - vp_factorial(k, p).unwrap()
            - vp_factorial(n as i64 - k, p).unwrap();
        let kummer = vp_binom_kummer(n, k, p).unwrap();
        prop_assert_eq!(direct, Valuation::Finite(legendre));
        prop_assert_eq!(kummer, direct);
        let lucas = lucas_binom_mod_p(n, k as u64, p);
        prop_assert_eq!(BigInt::from(lucas), c.mod_floor(&BigInt::from(p.get())));
    }

    #[test]
    fn lucas_handles_k_above_n(n in 0u64..=300, k in 0u64..=300, p in select(vec![2u64, 3, 5, 7])) {
        let p = prime(p);
        let c = binom(n, k as i64);
        prop_assert_eq!(
            BigInt::from(lucas_binom_mod_p(n, k, p)),
            c.mod_floor(&BigInt::from(p.get()))
        );
    }

    #[test]
    fn vp_rat_is_a_valuation(
        q1 in nonzero_rational(),
        q2 in nonzero_rational(),
        p in select(vec![2u64, 3, 5, 7]),
    ) {
        let p = prime(p);
        prop_assert_eq!(
            vp_rat(&(&q1 * &q2), p),
            vp_rat(&q1, p).saturating_add(vp_rat(&q2, p))
        );
        let lower = vp_rat(&q1, p).min(vp_rat(&q2, p));
        prop_assert!(vp_rat(&(&q1 + &q2), p) >= lower);
    }

    #[test]
    fn binom_rat_restricted_to_integers(x in 0i64..=60, k in -3i64..=65) {
        let xq = BigRational::from(BigInt::from(x));
        prop_assert_eq!(binom_rat(&xq, k), BigRational::from(binom(x as u64, k)));
        // and the generalized integer form agrees everywhere
        prop_assert_eq!(BigRational::from(binom_int(x, k)), binom_rat(&xq, k));
    }

    #[test]
    fn binom_int_matches_slow_route(x in -40i64..=40, k in -2i64..=20) {
        prop_assert_eq!(BigRational::from(binom_int(x, k)), slow_binom_int(x, k));
    }

    #[test]
    fn floor_div_negation(a in -1000i64..=1000, b in 1i64..=100) {
        prop_assume!(a % b != 0);
        prop_assert_eq!(
            floor_div(a, b).unwrap(),
            -floor_div(-a, b).unwrap() - 1
        );
    }

    #[test]
    fn poly_delta_identity(f in small_poly(), a in -25i64..=25) {
        let lhs = f.delta().eval_int(a);
        let rhs = f.eval_int(a + 1) - f.eval_int(a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_conversion_agrees(
        mono in proptest::collection::vec(rational(), 0..=5),
        a in -15i64..=15,
    ) {
        let f = IvPoly::from_monomial_coeffs(&mono);
        let mut direct = BigRational::zero();
        let mut pow = BigRational::one();
        for m in &mono {
            direct += m * &pow;
            pow *= BigRational::from(BigInt::from(a));
        }
        prop_assert_eq!(f.eval_int(a), direct);
    }

    #[test]
    fn zp_valued_implies_integral_values(
        f in zp_poly(),
        a in -30i64..=30,
        p in select(vec![2u64, 3, 5]),
    ) {
        let p = prime(p);
        prop_assert!(f.is_zp_valued(p));
        prop_assert!(vp_rat(&f.eval_int(a), p).at_least(0));
    }

    #[test]
    fn delta_drops_degree(mut coeffs in proptest::collection::vec(rational(), 1..=4)) {
        coeffs.push(int(1)); // force a nonzero leading coefficient
        let f = IvPoly::from_binomial_coeffs(coeffs);
        prop_assert!(f.degree() >= 1);
        prop_assert_eq!(f.delta().degree(), f.degree() - 1);
    }

    /// The library's scaled-integer summation agrees exactly with the
    /// naive direct-summation oracle on every weight family.
    #[test]
    fn alt_sum_matches_oracle(spec in spec_strategy()) {
        let expected = slow_alt_sum(
            spec.p.get(),
            spec.alpha,
            spec.beta,
            spec.n,
            spec.r,
            &spec.weight,
        );
        prop_assert_eq!(alt_sum(&spec).unwrap(), expected);
    }

    /// Splitting a class mod p^beta into its p subclasses mod p^(beta+1)
    /// (weight anchor held fixed) reproduces the coarse sum.
    #[test]
    fn residue_class_decomposition(
        (p, alpha) in (select(vec![2u64, 3]), 0u32..=2),
        beta_seed in 0u32..=2,
        n in 0i64..=30,
        r in -6i64..=20,
        choose_l in 0u32..=2,
    ) {
        let beta = beta_seed.min(alpha);
        let weight = Weight::ChooseFloor(choose_l);
        let spec = SumSpec::new(prime(p), alpha, beta, n, r, weight.clone()).unwrap();
        let coarse = alt_sum(&spec).unwrap();
        let pbeta = (p as i64).pow(beta);
        let mut fine = BigRational::zero();
        for i in 0..p as i64 {
            fine += slow_alt_sum_anchored(p, alpha, pbeta * p as i64, n, r, r + i * pbeta, &weight);
        }
        prop_assert_eq!(coarse, fine);
    }

    /// Master property: the general bound is never violated by a
    /// Z_p-valued polynomial weight.
    #[test]
    fn general_bound_holds(
        (p, alpha) in (select(vec![2u64, 3, 5]), 0u32..=2),
        beta_seed in 0u32..=2,
        offset in 0i64..=25,
        r in -8i64..=30,
        f in zp_poly(),
    ) {
        let p = prime(p);
        let beta = beta_seed.min(alpha);
        let n = min_n(p, alpha).unwrap() + offset;
        let spec = SumSpec::new(p, alpha, beta, n, r, Weight::PolyFloor(f)).unwrap();
        let report = verify(&spec, BoundKind::General).unwrap();
        prop_assert!(report.holds, "ord = {}, bound = {}", report.ord, report.bound);
    }

    /// `power_residue_sum` is the PowerK weight sum with the sign folded in.
    #[test]
    fn power_residue_matches_power_weight(
        (p, alpha) in (select(vec![2u64, 3, 5, 7]), 0u32..=2),
        offset in 0i64..=30,
        r in -10i64..=30,
        c in -3i64..=3,
    ) {
        let p = prime(p);
        let b = -1 + c * p.get() as i64;
        let n = min_n(p, alpha).unwrap() + offset;
        let direct = power_residue_sum(n, r, p, alpha, b).unwrap();
        let spec = SumSpec::new(p, alpha, alpha, n, r, Weight::PowerK(-b)).unwrap();
        prop_assert_eq!(direct, alt_sum(&spec).unwrap());
    }

    #[test]
    fn delta_reduction_identity_random(
        n in 1i64..=18,
        m in 1i64..=6,
        r in -12i64..=18,
        f in small_poly(),
    ) {
        let (lhs, rhs) = delta_reduction_pair(n, m, r, &f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn telescoping_identity_random(
        n in 0i64..=18,
        m in 1i64..=6,
        r in -12i64..=18,
        f in small_poly(),
    ) {
        let (lhs, rhs) = telescoping_pair(n, m, r, &f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chu_vandermonde_random(x in -15i64..=15, y in -15i64..=15, n in 0u32..=10) {
        prop_assert!(chu_vandermonde_holds(x, y, n));
    }

    #[test]
    fn euler_identity_random(n in 0u32..=25, l_seed in 0u32..=25) {
        let l = l_seed % (n + 1);
        let expected = if l < n {
            BigInt::zero()
        } else {
            let mut f = BigInt::one();
            for i in 2..=n as u64 {
                f *= BigInt::from(i);
            }
            if n % 2 == 1 {
                -f
            } else {
                f
            }
        };
        prop_assert_eq!(euler_sum(n, l), expected);
    }

    #[test]
    fn bernoulli_poly_matches_slow_route(l in 0u32..=8, q in rational()) {
        let table = BernoulliTable::up_to(l);
        prop_assert_eq!(table.poly_eval(l, &q), slow_bernoulli_poly(l, &q));
    }
}

#[test]
fn bernoulli_numbers_match_worpitzky() {
    let table = BernoulliTable::up_to(16);
    for l in 0..=16 {
        assert_eq!(table.number(l), &worpitzky_bernoulli(l), "B_{l}");
    }
}

#[test]
fn pascal_oracle_matches_binom() {
    let triangle = pascal_triangle(40);
    for n in 0..=40i64 {
        for k in 0..=n {
            assert_eq!(triangle[n as usize][k as usize], binom(n as u64, k));
        }
    }
}
