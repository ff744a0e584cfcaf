//! Drivers for the analytic claim catalog: the unimodality regions of
//! log epsilon, the Stirling-error comparison of beta(2) against
//! beta(3), and the positivity samples and certifications for the
//! G-functions. Each driver returns a certificate plus any bisection
//! sign certificates it produced.

use crate::bounds::{beta_closed, params_from, ParamMap};
use crate::certify::{Certificate, CheckResult, Params, Status};
use crate::error::{Error, Result};
use crate::expr::{iv_eval, point1, point2, ExprId};
use crate::interval::{self, Interval};
use crate::signcert::{certify_sign, outward_box, CertStatus, Sign, SignCertificate};
use crate::slopes::{slope_sequence, tail_product};
use crate::tuple::{DegreeTuple, SingularityLevel};
use num_bigint::BigInt;
use num_rational::BigRational;

/// A certificate together with the sign certificates behind it.
#[derive(Clone, Debug)]
pub struct AnalyticOutcome {
    pub certificate: Certificate,
    pub sign_certificates: Vec<SignCertificate>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn check(
    name: impl Into<String>,
    status: Status,
    value: impl Into<String>,
    bound: impl Into<String>,
    anchor: impl Into<String>,
) -> CheckResult {
    CheckResult {
        name: name.into(),
        l: None,
        status,
        value: value.into(),
        bound: bound.into(),
        anchor: anchor.into(),
    }
}

fn cert_status(s: CertStatus) -> Status {
    match s {
        CertStatus::Certified => Status::Pass,
        CertStatus::Inconclusive => Status::Inconclusive,
    }
}

fn sign_check(name: &str, cert: &SignCertificate, anchor: &str) -> CheckResult {
    let status = if cert.refuted() {
        Status::Fail
    } else {
        cert_status(cert.status)
    };
    check(
        name,
        status,
        format!("leaves={}", cert.leaves.len()),
        format!("sign {}", cert.claimed_sign.as_str()),
        anchor,
    )
}

fn finish(label: String, checks: Vec<CheckResult>, signs: Vec<SignCertificate>) -> AnalyticOutcome {
    // analytic claims are unconditional in the tuple hypotheses
    let overall = Certificate::derive_overall(true, &checks);
    AnalyticOutcome {
        certificate: Certificate {
            params: Params::Suite { label },
            levels: vec![],
            hypothesis_ok: true,
            checks,
            overall,
        },
        sign_certificates: signs,
    }
}

/// Tail-product bound for one tuple: beta < 4/3 together with the slope
/// bound beta_i <= 1 + 1/[M/k] past the cutoff.
pub fn lemma13_check(d: &DegreeTuple) -> Result<AnalyticOutcome> {
    let l0 = SingularityLevel(0);
    let beta = tail_product(d, l0)?;
    let seq = slope_sequence(d, l0)?;
    let a = d.m() / d.k();
    let cap = rat(1, 1) + rat(1, a as i64);
    let mut worst = rat(1, 1);
    for i in (seq.cutoff() + 1)..=seq.len() {
        let s = seq.slope(i).expect("index in range");
        if s > worst {
            worst = s;
        }
    }
    let checks = vec![
        check(
            "beta_lt_4_3",
            if beta < rat(4, 3) { Status::Pass } else { Status::Fail },
            crate::certify::fmt_rat(&beta),
            "4/3",
            "Lemma 1.3: beta < 4/3",
        ),
        check(
            "tail_slopes_le_1_plus_1_over_a",
            if worst <= cap { Status::Pass } else { Status::Fail },
            crate::certify::fmt_rat(&worst),
            crate::certify::fmt_rat(&cap),
            "Lemma 1.3 proof: beta_j <= 1 + 1/a past the cutoff",
        ),
    ];
    let hyp = crate::certify::hypothesis_check(d.k(), d.m());
    let overall = Certificate::derive_overall(hyp, &checks);
    Ok(AnalyticOutcome {
        certificate: Certificate {
            params: Params::Tuple {
                degrees: d.degrees().to_vec(),
                k: d.k(),
                m: d.m(),
            },
            levels: vec![0],
            hypothesis_ok: hyp,
            checks,
            overall,
        },
        sign_certificates: vec![],
    })
}

/// The three-region unimodality suite for log epsilon at (k, M):
/// increasing on [2, (M+k)/2k], concave on [(M+k)/2k, (M+1)/(k+1)],
/// decreasing on [(M+1)/(k+1), M/k].
pub fn lemma31_suite(k: u64, m: u64, prec: u32, max_depth: u32) -> Result<AnalyticOutcome> {
    if k < 3 {
        return Err(Error::Precondition(format!("unimodality suite needs k >= 3, got {}", k)));
    }
    if m < 3 * k {
        return Err(Error::Precondition(format!(
            "unimodality suite needs M >= 3k, got M = {}, k = {}",
            m, k
        )));
    }
    let params = params_from(&[("M", m as i64), ("k", k as i64)]);
    let two = rat(2, 1);
    let r1_hi = rat((m + k) as i64, (2 * k) as i64);
    let r2_lo = rat((m + 1) as i64, (k + 1) as i64);
    let r2_hi = rat(m as i64, k as i64);
    let regions = [
        (ExprId::DlogEpsilon, "lemma31_region1_increasing", two.clone(), r1_hi.clone(), Sign::Positive,
         "log epsilon strictly increasing on [2, (M+k)/2k]"),
        (ExprId::D2logEpsilon, "lemma31_region3_concave", r1_hi, r2_lo.clone(), Sign::Negative,
         "second derivative of log epsilon negative on the middle interval"),
        (ExprId::DlogEpsilon, "lemma31_region2_decreasing", r2_lo, r2_hi, Sign::Negative,
         "log epsilon strictly decreasing on [(M+1)/(k+1), M/k]"),
    ];
    let mut checks = Vec::new();
    let mut signs = Vec::new();
    for (expr, name, lo, hi, sign, anchor) in regions {
        let box_ = outward_box(&[("t", lo, hi)], prec);
        let cert = certify_sign(expr, box_, &params, sign, prec, max_depth)?;
        checks.push(sign_check(name, &cert, anchor));
        signs.push(cert);
    }
    let mut out = finish(format!("lemma 3.1 at k={} M={}", k, m), checks, signs);
    out.certificate.params = Params::Pair { k, m };
    Ok(out)
}

/// Outcome of the beta(2)-vs-beta(3) comparison at (k, M).
pub struct Lemma32Report {
    pub outcome: AnalyticOutcome,
    pub beta2: BigInt,
    pub beta3: BigInt,
    pub eps3: Interval,
}

/// Exact check 1.14 beta(2) < beta(3), the printed Stirling sandwich
/// 1.126 eps(3) <= beta(3) <= 1.132 eps(3), and the conclusion
/// beta(2) <= eps(3). The sandwich legs are decided against a certified
/// enclosure of eps(3); a leg whose negation is certified reports fail.
pub fn lemma32_check(k: u64, m: u64, prec: u32) -> Result<Lemma32Report> {
    if k < 2 || m < 3 * k {
        return Err(Error::Precondition(format!(
            "beta(3) needs k >= 2 and a = M/k >= 3, got k = {}, M = {}",
            k, m
        )));
    }
    let beta2 = beta_closed(k, m, 2);
    let beta3 = beta_closed(k, m, 3);
    let b2 = BigRational::from_integer(beta2.clone());
    let b3 = BigRational::from_integer(beta3.clone());
    let exact_ok = rat(57, 50) * &b2 < b3;

    let params = params_from(&[("M", m as i64), ("k", k as i64)]);
    let eps3 = iv_eval(ExprId::Epsilon, &point1("t", Interval::from_int(3, prec)), &params, prec)?;
    let e_lo = eps3.lo().to_rational();
    let e_hi = eps3.hi().to_rational();

    // 1.126 eps(3) <= beta(3)
    let lower = if rat(563, 500) * &e_hi <= b3 {
        Status::Pass
    } else if rat(563, 500) * &e_lo > b3 {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    // beta(3) <= 1.132 eps(3)
    let upper = if b3 <= rat(283, 250) * &e_lo {
        Status::Pass
    } else if b3 > rat(283, 250) * &e_hi {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    // the lemma's conclusion: beta(2) <= eps(3)
    let conclusion = if b2 <= e_lo {
        Status::Pass
    } else if b2 > e_hi {
        Status::Fail
    } else {
        Status::Inconclusive
    };

    let checks = vec![
        check(
            "lemma32_exact_114_beta2_lt_beta3",
            if exact_ok { Status::Pass } else { Status::Fail },
            format!("57/50 * {} = {}", beta2, crate::certify::fmt_rat(&(rat(57, 50) * &b2))),
            beta3.to_string(),
            "Lemma 3.2: 1.14 beta(2) < beta(3), exact",
        ),
        check(
            "lemma32_sandwich_lower",
            lower,
            format!("1.126 * eps(3) in {}", eps3),
            beta3.to_string(),
            "Lemma 3.2: 1.126 eps(3) <= beta(3)",
        ),
        check(
            "lemma32_sandwich_upper",
            upper,
            beta3.to_string(),
            format!("1.132 * eps(3) in {}", eps3),
            "Lemma 3.2: beta(3) <= 1.132 eps(3)",
        ),
        check(
            "lemma32_conclusion_beta2_le_eps3",
            conclusion,
            beta2.to_string(),
            format!("eps(3) in {}", eps3),
            "Lemma 3.2: beta(2) <= eps(3)",
        ),
    ];
    let mut out = finish(format!("lemma 3.2 at k={} M={}", k, m), checks, vec![]);
    out.certificate.params = Params::Pair { k, m };
    Ok(Lemma32Report { outcome: out, beta2, beta3, eps3 })
}

/// Default sample points for the one-parameter positivity claims.
pub const SAMPLE_TS: [u64; 5] = [20, 30, 50, 100, 200];

/// Enclosure of 8 t ln t - t.
fn curve_s(t: u64, prec: u32) -> Result<Interval> {
    let ti = Interval::from_int(t as i64, prec);
    Ok(interval::ln(&ti, prec)?.mul_int(8 * t as i64).sub(&ti))
}

/// G2(8 t ln t - t, t) > 0 at the sampled integer points.
pub fn lemma33_samples(ts: &[u64], prec: u32) -> Result<AnalyticOutcome> {
    let mut checks = Vec::new();
    for &t in ts {
        let s = curve_s(t, prec)?;
        let g2 = iv_eval(
            ExprId::G2,
            &point1("M", s),
            &params_from(&[("k", t as i64)]),
            prec,
        )?;
        let status = if g2.is_strictly_positive() {
            Status::Pass
        } else if g2.is_strictly_negative() {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        checks.push(check(
            format!("G2_positive_at_t_{}", t),
            status,
            format!("{}", g2),
            "0",
            "Lemma 3.3: G2(8t ln t - t, t) > 0",
        ));
    }
    Ok(finish("lemma 3.3 samples".to_string(), checks, vec![]))
}

/// G3 > 0 certified on [20, 200].
pub fn lemma34_certify(prec: u32, max_depth: u32) -> Result<AnalyticOutcome> {
    let box_ = outward_box(&[("t", rat(20, 1), rat(200, 1))], prec);
    let cert = certify_sign(ExprId::G3, box_, &ParamMap::new(), Sign::Positive, prec, max_depth)?;
    let checks = vec![sign_check(
        "G3_positive_on_20_200",
        &cert,
        "Lemma 3.4: G3(t) > 0 for t >= 20, certified on [20, 200]",
    )];
    Ok(finish("lemma 3.4 certification".to_string(), checks, vec![cert]))
}

/// Sampled sub-boxes of the two G4 regions: below the square
/// (8t ln t - t <= s <= t^2) and between the squares (t^2 <= s <= 4t^2).
pub const G4_BOXES: [(i64, i64, i64, i64); 7] = [
    // (t_lo, t_hi, s_lo, s_hi); s_lo sits above the curve at t_hi
    (27, 28, 719, 729),
    (30, 31, 853, 900),
    (40, 41, 1179, 1600),
    (55, 60, 1906, 3025),
    (20, 25, 625, 1600),
    (25, 40, 1600, 2500),
    (40, 60, 3600, 6400),
];

/// G4 > 0 certified on the sampled sub-boxes.
pub fn lemma35_certify(prec: u32, max_depth: u32) -> Result<AnalyticOutcome> {
    let mut checks = Vec::new();
    let mut signs = Vec::new();
    for (t_lo, t_hi, s_lo, s_hi) in G4_BOXES {
        let box_ = outward_box(
            &[("s", rat(s_lo, 1), rat(s_hi, 1)), ("t", rat(t_lo, 1), rat(t_hi, 1))],
            prec,
        );
        let cert = certify_sign(ExprId::G4, box_, &ParamMap::new(), Sign::Positive, prec, max_depth)?;
        checks.push(sign_check(
            &format!("G4_positive_t_{}_{}_s_{}_{}", t_lo, t_hi, s_lo, s_hi),
            &cert,
            "Lemma 3.5: G4(s, t) > 0, certified on a sampled sub-box",
        ));
        signs.push(cert);
    }
    Ok(finish("lemma 3.5 certification".to_string(), checks, signs))
}

/// Sampled sub-boxes above the curve for the G7 positivity claim.
pub const G7_BOXES: [(i64, i64, i64, i64); 3] = [
    (20, 30, 787, 2000),
    (30, 60, 1906, 8000),
    (20, 60, 1906, 14400),
];

/// G6(8t ln t - t, t) >= 0 at sampled t, and G7 >= 0 on sampled boxes
/// (both certified strictly positive).
pub fn prop36_suite(ts: &[u64], prec: u32, max_depth: u32) -> Result<AnalyticOutcome> {
    let mut checks = Vec::new();
    let mut signs = Vec::new();
    for &t in ts {
        let s = curve_s(t, prec)?;
        let g6 = iv_eval(
            ExprId::G6,
            &point2("s", s, "t", Interval::from_int(t as i64, prec)),
            &ParamMap::new(),
            prec,
        )?;
        let status = if g6.is_strictly_positive() {
            Status::Pass
        } else if g6.is_strictly_negative() {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        checks.push(check(
            format!("G6_nonneg_at_t_{}", t),
            status,
            format!("{}", g6),
            "0",
            "Prop 3.6: G6(8t ln t - t, t) >= 0",
        ));
    }
    for (t_lo, t_hi, s_lo, s_hi) in G7_BOXES {
        let box_ = outward_box(
            &[("s", rat(s_lo, 1), rat(s_hi, 1)), ("t", rat(t_lo, 1), rat(t_hi, 1))],
            prec,
        );
        let cert = certify_sign(ExprId::G7, box_, &ParamMap::new(), Sign::Positive, prec, max_depth)?;
        checks.push(sign_check(
            &format!("G7_nonneg_t_{}_{}_s_{}_{}", t_lo, t_hi, s_lo, s_hi),
            &cert,
            "Prop 3.6: G7(s, t) >= 0, certified on a sampled sub-box",
        ));
        signs.push(cert);
    }
    Ok(finish("prop 3.6 samples".to_string(), checks, signs))
}

/// The selectable claim suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaId {
    L13,
    L31,
    L32,
    L33Sample,
    L34,
    L35,
    L36Sample,
}

impl std::str::FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<LemmaId> {
        match s {
            "1.3" => Ok(LemmaId::L13),
            "3.1" => Ok(LemmaId::L31),
            "3.2" => Ok(LemmaId::L32),
            "3.3-sample" => Ok(LemmaId::L33Sample),
            "3.4" => Ok(LemmaId::L34),
            "3.5" => Ok(LemmaId::L35),
            "3.6-sample" => Ok(LemmaId::L36Sample),
            _ => Err(Error::Parse(format!(
                "unknown lemma '{}' (expected 1.3, 3.1, 3.2, 3.3-sample, 3.4, 3.5, 3.6-sample)",
                s
            ))),
        }
    }
}
