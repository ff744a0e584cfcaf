//! Property suites: containment and refinement laws of the expression
//! catalog, soundness spot-audits of sign certificates, and the slope /
//! reduction invariants on random tuples.

use fanocert_core::bounds::{
    gamma_table, params_from, reduce_tuple, restricted_degree_by_min_formula, restricted_degrees,
    ParamMap, ReduceMode,
};
use fanocert_core::certify::{certify_tuple, Certificate, CertifyConfig};
use fanocert_core::expr::{iv_eval, ExprId, PointMap};
use fanocert_core::interval::Interval;
use fanocert_core::signcert::{certify_sign, LeafStatus, Sign, VarBox};
use fanocert_core::slopes::{slope_sequence, tail_product, total_degree};
use fanocert_core::tuple::{DegreeTuple, SingularityLevel};
use fanocert_core::num_rational::BigRational;
use fanocert_core::num_bigint::BigInt;
use proptest::collection::vec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The catalog boxes the containment and refinement laws run on.
fn catalog_boxes() -> Vec<(ExprId, Vec<(&'static str, i64, i64)>, ParamMap)> {
    let flagship = params_from(&[("M", 480), ("k", 20)]);
    let none = ParamMap::new();
    vec![
        (ExprId::Epsilon, vec![("t", 2, 24)], flagship.clone()),
        (ExprId::DlogEpsilon, vec![("t", 2, 24)], flagship.clone()),
        (ExprId::D2logEpsilon, vec![("t", 2, 24)], flagship.clone()),
        (ExprId::Ine1Lhs, vec![("t", 2, 24)], flagship.clone()),
        (ExprId::G2, vec![("M", 459, 600)], params_from(&[("k", 20)])),
        (ExprId::G3, vec![("t", 20, 200)], none.clone()),
        (ExprId::H1, vec![("t", 20, 200)], none.clone()),
        (ExprId::H2, vec![("t", 20, 200)], none.clone()),
        (ExprId::G4, vec![("s", 625, 1600), ("t", 20, 25)], none.clone()),
        (
            ExprId::G5,
            vec![("s", 700, 2000), ("t", 20, 30), ("r", 4, 8)],
            none.clone(),
        ),
        (ExprId::G6, vec![("s", 787, 2000), ("t", 20, 30)], none.clone()),
        (ExprId::G7, vec![("s", 787, 2000), ("t", 20, 30)], none.clone()),
        (ExprId::AReal, vec![("s", 480, 2000), ("t", 20, 30)], none),
    ]
}

fn box_point_map(dims: &[(&str, i64, i64)], prec: u32) -> PointMap {
    dims.iter()
        .map(|(n, lo, hi)| {
            (
                n.to_string(),
                Interval::new(
                    fanocert_core::dyadic::Dyadic::from_int(*lo),
                    fanocert_core::dyadic::Dyadic::from_int(*hi),
                    prec,
                ),
            )
        })
        .collect()
}

#[test]
fn containment_of_random_interior_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    for (expr, dims, params) in catalog_boxes() {
        let box_enc = iv_eval(expr, &box_point_map(&dims, 128), &params, 128);
        let box_enc = box_enc.unwrap_or_else(|e| panic!("box eval {:?}: {}", expr, e));
        let n_points = 1000;
        for _ in 0..n_points {
            let mut point = PointMap::new();
            for (name, lo, hi) in &dims {
                // interior rational coordinate lo + frac (hi - lo), frac in [0.02, 0.98]
                let raw: u32 = rng.gen();
                let frac = rat(raw as i64, 1i64 << 32) * rat(96, 100) + rat(2, 100);
                let x = rat(*lo, 1) + frac * rat(hi - lo, 1);
                point.insert(name.to_string(), Interval::from_rational(&x, 192));
            }
            let pt_enc = iv_eval(expr, &point, &params, 192)
                .unwrap_or_else(|e| panic!("point eval {:?}: {}", expr, e));
            assert!(
                box_enc.contains(&pt_enc),
                "{:?}: point enclosure {} escapes box enclosure {}",
                expr,
                pt_enc,
                box_enc
            );
        }
    }
}

#[test]
fn monotone_refinement_of_enclosures() {
    for (expr, dims, params) in catalog_boxes() {
        let coarse = iv_eval(expr, &box_point_map(&dims, 96), &params, 96).unwrap();
        let fine = iv_eval(expr, &box_point_map(&dims, 128), &params, 128).unwrap();
        assert!(
            fine.width() <= coarse.width(),
            "{:?}: width grew from {} to {}",
            expr,
            coarse.width(),
            fine.width()
        );
        let finer = iv_eval(expr, &box_point_map(&dims, 160), &params, 160).unwrap();
        assert!(finer.width() <= fine.width());
    }
}

#[test]
fn sign_certificate_soundness_spot_audit() {
    // certify, then densely sample the certified box for the opposite sign
    let params = params_from(&[("M", 480), ("k", 20)]);
    let box_ = VarBox::new(vec![(
        "t".to_string(),
        Interval::new(
            fanocert_core::dyadic::Dyadic::from_int(2),
            fanocert_core::dyadic::Dyadic::from_int(25).scale2(-1),
            128,
        ),
    )]);
    let cert = certify_sign(ExprId::DlogEpsilon, box_, &params, Sign::Positive, 128, 40).unwrap();
    assert!(cert.certified());
    let mut rng = ChaCha8Rng::seed_from_u64(0xa0d17);
    for leaf in &cert.leaves {
        assert_eq!(leaf.status, LeafStatus::Certified);
        let (_, iv) = &leaf.box_.dims()[0];
        let lo = iv.lo().to_rational();
        let width = iv.width().to_rational();
        for _ in 0..100 {
            let raw: u32 = rng.gen();
            let x = &lo + rat(raw as i64, 1i64 << 32) * &width;
            let pt = iv_eval(
                ExprId::DlogEpsilon,
                &fanocert_core::expr::point1("t", Interval::from_rational(&x, 160)),
                &params,
                160,
            )
            .unwrap();
            assert!(
                !pt.is_strictly_negative(),
                "opposite sign at t = {} inside a certified leaf",
                x
            );
        }
    }
}

#[test]
fn certificate_overall_is_pure_function_of_checks() {
    for s in ["25^20", "2,3,3", "5", "26^21"] {
        let cert = certify_tuple(&DegreeTuple::parse(s).unwrap(), &CertifyConfig::default()).unwrap();
        assert!(cert.recheck_overall(), "{}", s);
        assert_eq!(
            Certificate::derive_overall(cert.hypothesis_ok, &cert.checks),
            cert.overall
        );
    }
}

#[test]
fn in_hypothesis_tail_slope_bound_on_grid() {
    // for k >= 20, M >= 8 k ln k: every slope past the cutoff is at most
    // 1 + 1/floor(M/k), and the tail product stays below 4/3
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let k: u64 = rng.gen_range(20..=30);
        let d_min: u64 = rng.gen_range(29..=33);
        let degrees: Vec<u64> = (0..k).map(|_| rng.gen_range(d_min..=40)).collect();
        let d = DegreeTuple::new(degrees).unwrap();
        assert!(fanocert_core::certify::hypothesis_check(d.k(), d.m()));
        let seq = slope_sequence(&d, SingularityLevel(0)).unwrap();
        let a = d.m() / d.k();
        let cap = rat(1, 1) + rat(1, a as i64);
        for i in (seq.cutoff() + 1)..=seq.len() {
            assert!(seq.slope(i).unwrap() <= cap);
        }
        let beta = tail_product(&d, SingularityLevel(0)).unwrap();
        assert!(beta < rat(4, 3), "beta = {} for {}", beta, d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slope_product_equals_total_degree(degrees in vec(2u64..=40, 1..=30)) {
        let d = DegreeTuple::new(degrees).unwrap();
        let seq = slope_sequence(&d, SingularityLevel(0)).unwrap();
        prop_assert_eq!(seq.product(), BigRational::from_integer(total_degree(&d)));
    }

    #[test]
    fn tail_products_monotone_in_level(degrees in vec(2u64..=25, 1..=12)) {
        let d = DegreeTuple::new(degrees).unwrap();
        let beta0 = tail_product(&d, SingularityLevel(0)).unwrap();
        for l in 1..=d.k() {
            let bl = tail_product(&d, SingularityLevel(l)).unwrap();
            prop_assert!(bl <= beta0);
        }
    }

    #[test]
    fn slope_sequence_shape(degrees in vec(2u64..=25, 1..=12), l_frac in 0.0f64..=1.0) {
        let d = DegreeTuple::new(degrees).unwrap();
        let l = ((d.k() as f64) * l_frac) as u64;
        let seq = slope_sequence(&d, SingularityLevel(l)).unwrap();
        prop_assert_eq!(seq.len(), d.m() - l);
        let slopes: Vec<BigRational> = seq.iter_slopes().collect();
        for w in slopes.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        for s in &slopes {
            prop_assert!(*s > rat(1, 1) && *s <= rat(2, 1));
        }
    }

    #[test]
    fn restricted_profile_laws(degrees in vec(2u64..=25, 1..=12)) {
        let d = DegreeTuple::new(degrees).unwrap();
        let profile = restricted_degrees(&d);
        prop_assert_eq!(profile.degrees().len() as u64, d.m());
        for e in 1..=d.m() {
            prop_assert_eq!(profile.m_e(e), restricted_degree_by_min_formula(&d, e));
        }
    }

    #[test]
    fn reduction_monotonicity(degrees in vec(2u64..=25, 2..=10)) {
        let d = DegreeTuple::new(degrees).unwrap();
        let star = reduce_tuple(&d, ReduceMode::Star).unwrap();
        prop_assert_eq!(star.k(), d.k());
        prop_assert_eq!(star.m(), d.m());
        let pd = restricted_degrees(&d);
        let ps = restricted_degrees(&star);
        for e in 1..=d.m() {
            prop_assert!(pd.m_e(e).unwrap() >= ps.m_e(e).unwrap());
        }
        for l in [0, d.k() / 2, d.k()] {
            let lv = SingularityLevel(l);
            let td = gamma_table(&d, lv).unwrap();
            let ts = gamma_table(&star, lv).unwrap();
            prop_assert_eq!(td.len(), ts.len());
            for (a, b) in td.iter().zip(ts.iter()) {
                prop_assert!(a >= b);
            }
            // level monotonicity against l = 0
            let t0 = gamma_table(&d, SingularityLevel(0)).unwrap();
            for (a, b) in td.iter().zip(t0.iter()) {
                prop_assert!(a >= b);
            }
        }
    }
}

/// Random rational arithmetic chains, evaluated both in exact rational
/// arithmetic and in interval arithmetic: the exact result must lie in
/// the enclosure at every step.
#[test]
fn interval_arithmetic_contains_exact_rational_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f);
    for _ in 0..300 {
        let mut exact = rat(rng.gen_range(-50i64..=50), rng.gen_range(1i64..=13));
        let mut iv = Interval::from_rational(&exact, 96);
        for _ in 0..12 {
            let operand = rat(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=11));
            let operand_iv = Interval::from_rational(&operand, 96);
            match rng.gen_range(0..4) {
                0 => {
                    exact += &operand;
                    iv = iv.add(&operand_iv);
                }
                1 => {
                    exact -= &operand;
                    iv = iv.sub(&operand_iv);
                }
                2 => {
                    exact *= &operand;
                    iv = iv.mul(&operand_iv);
                }
                _ => {
                    // keep divisors away from zero
                    let d = &operand + rat(60, 1);
                    let d_iv = Interval::from_rational(&d, 96);
                    exact /= &d;
                    iv = iv.div(&d_iv).unwrap();
                }
            }
            assert!(
                iv.contains_rational(&exact),
                "exact value {} escaped enclosure {}",
                exact,
                iv
            );
        }
    }
}

/// Two algebraic routes to the same logarithm: ln(x y) and ln x + ln y
/// must overlap for random rational x, y.
#[test]
fn log_of_product_two_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10);
    for _ in 0..200 {
        let x = rat(rng.gen_range(1i64..=4000), rng.gen_range(1i64..=40));
        let y = rat(rng.gen_range(1i64..=4000), rng.gen_range(1i64..=40));
        let route_a = fanocert_core::interval::ln(
            &Interval::from_rational(&(&x * &y), 128),
            128,
        )
        .unwrap();
        let lx = fanocert_core::interval::ln(&Interval::from_rational(&x, 128), 128).unwrap();
        let ly = fanocert_core::interval::ln(&Interval::from_rational(&y, 128), 128).unwrap();
        let route_b = lx.add(&ly);
        assert!(
            route_a.lo() <= route_b.hi() && route_b.lo() <= route_a.hi(),
            "ln routes disjoint for {} * {}: {} vs {}",
            x,
            y,
            route_a,
            route_b
        );
    }
}

/// exp enclosures contain the exact rational powers e^(p/q) bracketed
/// through the q-th root route: exp(p/q)^q must contain e^p.
#[test]
fn exp_rational_power_route_agrees() {
    let e1 = fanocert_core::interval::euler_e(160);
    for (p, q) in [(1i64, 2u64), (3, 2), (5, 3), (7, 4), (9, 5)] {
        let x = rat(p, q as i64);
        let ex = fanocert_core::interval::exp(&Interval::from_rational(&x, 160), 160);
        let powered = ex.powi(q);
        let ep = e1.powi(p as u64);
        assert!(
            powered.lo() <= ep.hi() && ep.lo() <= powered.hi(),
            "exp({}/{})^{} disjoint from e^{}",
            p,
            q,
            q,
            p
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dyadic_decimal_strings_round_trip(mant in -1_000_000i64..=1_000_000, exp in -80i64..=20) {
        use fanocert_core::dyadic::Dyadic;
        use fanocert_core::signcert::decimal_to_rational;
        let d = Dyadic::new(BigInt::from(mant), exp);
        let s = d.to_decimal_string();
        prop_assert_eq!(decimal_to_rational(&s).unwrap(), d.to_rational());
    }

    #[test]
    fn dyadic_directed_division_brackets(num in -10_000i64..=10_000, den in 1i64..=9_999) {
        use fanocert_core::dyadic::{Dyadic, Round};
        let n = Dyadic::from_int(num);
        let d = Dyadic::from_int(den);
        let lo = n.div(&d, 48, Round::Down);
        let hi = n.div(&d, 48, Round::Up);
        let exact = rat(num, den);
        prop_assert!(lo.to_rational() <= exact && exact <= hi.to_rational());
        // bracket width bounded by the precision
        let width = hi.sub(&lo).to_rational();
        prop_assert!(width <= rat(num.abs().max(1), den) * rat(1, 1i64 << 40));
    }
}
