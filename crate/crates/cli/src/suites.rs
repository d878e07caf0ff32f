//! Named verification suites: each returns an ordered list of checks built
//! from the exact engines in the core crate.

use crate::report::Check;
use kstab_core::action::{cstar_weights, hessian_det, hessian_factors, iota, sym4, tau};
use kstab_core::chow::{deg_normal_bundle, restrict_to_e, triple, DivClass};
use kstab_core::integrate::{antiderivative, integrate};
use kstab_core::matrix::det_mpoly;
use kstab_core::mpoly::{MPoly, C, S, U, V};
use kstab_core::normal_form::{classify, verify_witness};
use kstab_core::rat::{format_rat, rat, ratio};
use kstab_core::sample::{rng, small_rat, smooth_quadric, unimodular, ChaCha8Rng};
use kstab_core::stability::{
    beta_certificate_curve_case, curve_case_report, delta_bound_generic_point, s_divisor,
    s_w2_exceptional, s_w3_point,
};
use kstab_core::zariski::{
    chamber_squares, config, dp4_restrictions, lift_through_point, surface_chambers,
    threefold_path, Surface,
};
use kstab_core::{Rat, Result};

/// Seed used by randomized suites unless overridden on the command line.
pub const DEFAULT_SEED: u64 = 17;

pub fn run(suite: &str, seed: u64) -> Result<Vec<Check>> {
    match suite {
        "core" => core_suite(seed),
        "action" => action_suite(seed),
        "classify" => classify_suite(seed),
        "chow" => Ok(chow_suite()),
        "zariski" => zariski_suite(),
        "delta" => delta_suite(),
        "all" => {
            let mut checks = core_suite(seed)?;
            checks.extend(action_suite(seed)?);
            checks.extend(classify_suite(seed)?);
            checks.extend(chow_suite());
            checks.extend(zariski_suite()?);
            checks.extend(delta_suite()?);
            Ok(checks)
        }
        other => Err(kstab_core::Error::UnknownConfig(other.into())),
    }
}

fn check_poly(name: &str, anchor: &str, expected: &MPoly, computed: &MPoly) -> Check {
    Check {
        name: name.into(),
        anchor: anchor.into(),
        expected: expected.to_string(),
        computed: computed.to_string(),
        pass: expected == computed,
    }
}

fn upoly(c0: i64, c1: i64) -> MPoly {
    &MPoly::int(c0) + &MPoly::var(U).scale(&rat(c1))
}

fn random_poly(r: &mut ChaCha8Rng) -> MPoly {
    let mut acc = MPoly::constant(small_rat(r));
    for v in [S[0], S[1], V] {
        acc = &acc + &MPoly::var(v).scale(&small_rat(r));
        acc = &acc + &(&MPoly::var(v) * &MPoly::var(S[0])).scale(&small_rat(r));
    }
    acc
}

fn nonzero_rat(r: &mut ChaCha8Rng) -> Rat {
    loop {
        let x = small_rat(r);
        if x != rat(0) {
            return x;
        }
    }
}

fn random_univariate(r: &mut ChaCha8Rng, degree: u32) -> MPoly {
    let mut acc = MPoly::var(C).pow(degree).scale(&nonzero_rat(r));
    for k in 0..degree {
        acc = &acc + &MPoly::var(C).pow(k).scale(&small_rat(r));
    }
    acc
}

fn core_suite(seed: u64) -> Result<Vec<Check>> {
    let mut r = rng(seed);
    let mut checks = Vec::new();

    let mut holds = true;
    let mut detail = String::new();
    for _ in 0..10 {
        let (p, q, w) = (random_poly(&mut r), random_poly(&mut r), random_poly(&mut r));
        if &(&p + &q) * &w != &(&p * &w) + &(&q * &w) {
            holds = false;
            detail = format!("({p}) and ({q}) against ({w})");
            break;
        }
    }
    checks.push(Check::property("ring-distributivity", "ring-ops", holds, &detail));

    let mut holds = true;
    let mut detail = String::new();
    for _ in 0..10 {
        let p = random_poly(&mut r);
        let q = &random_poly(&mut r) + &MPoly::one();
        match (&p * &q).div_exact(&q) {
            Ok(back) if back == p => {}
            _ => {
                holds = false;
                detail = format!("({p}) times ({q})");
                break;
            }
        }
    }
    checks.push(Check::property("exact-division-roundtrip", "ring-ops", holds, &detail));

    let mut holds = true;
    let mut detail = String::new();
    for _ in 0..5 {
        let f = random_univariate(&mut r, 2);
        let g = random_univariate(&mut r, 2);
        let h = random_univariate(&mut r, 2);
        let lhs = kstab_core::resultant::resultant(&(&f * &g), &h, C)?;
        let rhs = &kstab_core::resultant::resultant(&f, &h, C)? * &kstab_core::resultant::resultant(&g, &h, C)?;
        if lhs != rhs {
            holds = false;
            detail = format!("({f})({g}) against ({h})");
            break;
        }
    }
    checks.push(Check::property("resultant-multiplicativity", "resultant", holds, &detail));

    let mut holds = true;
    let mut detail = String::new();
    for _ in 0..10 {
        let p = random_poly(&mut r);
        if antiderivative(&p, V).derivative(V) != p {
            holds = false;
            detail = p.to_string();
            break;
        }
    }
    checks.push(Check::property("antiderivative-roundtrip", "integration", holds, &detail));

    let mut holds = true;
    let mut detail = String::new();
    for _ in 0..10 {
        let p = random_poly(&mut r);
        let (zero, half, one) =
            (MPoly::zero(), MPoly::constant(ratio(1, 2)), MPoly::one());
        let whole = integrate(&p, V, &zero, &one)?;
        let split = &integrate(&p, V, &zero, &half)? + &integrate(&p, V, &half, &one)?;
        if whole != split {
            holds = false;
            detail = p.to_string();
            break;
        }
    }
    checks.push(Check::property("integral-interval-additivity", "integration", holds, &detail));

    Ok(checks)
}

fn action_suite(seed: u64) -> Result<Vec<Check>> {
    let mut r = rng(seed);
    let mut checks = Vec::new();

    let mut homo = true;
    let mut unim = true;
    let mut detail = String::new();
    for _ in 0..10 {
        let g = unimodular(&mut r);
        let k = unimodular(&mut r);
        let mg = sym4(&g);
        let mk = sym4(&k);
        let mgk = sym4(&g.mul(&k));
        'entries: for i in 0..5 {
            for j in 0..5 {
                let mut acc = MPoly::zero();
                for (l, row) in mk.iter().enumerate() {
                    acc += &(&mg[i][l] * &row[j]);
                }
                if acc != mgk[i][j] {
                    homo = false;
                    detail = format!("entry ({i}, {j})");
                    break 'entries;
                }
            }
        }
        let rows: Vec<Vec<MPoly>> = mg.iter().map(|row| row.to_vec()).collect();
        if det_mpoly(&rows)? != MPoly::one() {
            unim = false;
        }
    }
    checks.push(Check::property("symmetric-power-homomorphism", "symmetric-power", homo, &detail));
    checks.push(Check::property("symmetric-power-determinant", "symmetric-power", unim, ""));

    let s: [MPoly; 6] = core::array::from_fn(|i| MPoly::var(S[i]));
    let rev = iota(&s);
    let rev_expect = [
        MPoly::var(S[4]),
        MPoly::var(S[3]),
        MPoly::var(S[2]),
        MPoly::var(S[1]),
        MPoly::var(S[0]),
        MPoly::var(S[5]),
    ];
    checks.push(Check::property("coordinate-reversal-action", "involutions", rev == rev_expect, ""));
    let sgn = tau(&s);
    let sgn_expect = [
        MPoly::var(S[0]),
        -&MPoly::var(S[1]),
        MPoly::var(S[2]),
        -&MPoly::var(S[3]),
        MPoly::var(S[4]),
        MPoly::var(S[5]),
    ];
    checks.push(Check::property("sign-involution-action", "involutions", sgn == sgn_expect, ""));
    checks.push(Check::strings(
        "torus-weights",
        "torus-weights",
        "[6, 5, 4, 3, 2, 4]".into(),
        format!("{:?}", cstar_weights()),
    ));

    let (f1, f2) = hessian_factors();
    checks.push(check_poly(
        "hessian-factorization",
        "hessian",
        &(&f1 * &f2).scale(&rat(-2)),
        &hessian_det(&s),
    ));
    let mut front = s.clone();
    front[0] = MPoly::zero();
    front[1] = MPoly::zero();
    let s2 = MPoly::var(S[2]);
    let s5 = MPoly::var(S[5]);
    let expect = &(&s5.pow(2).scale(&rat(32)) * &(&s5.scale(&rat(3)) + &s2)) * &(&s2 - &s5).pow(2);
    checks.push(check_poly("hessian-front-zero", "hessian", &expect, &hessian_det(&front)));

    Ok(checks)
}

fn classify_suite(seed: u64) -> Result<Vec<Check>> {
    let mut r = rng(seed);
    let mut checks = Vec::new();
    for i in 1..=25 {
        let s = smooth_quadric(&mut r);
        let name = format!("random-quadric-{i:02}");
        let coeffs: Vec<String> = s.iter().map(format_rat).collect();
        match classify(&s) {
            Ok(w) => {
                let in_range = (1..=5).contains(&w.label.case);
                let replayed = verify_witness(&s, &w)?;
                checks.push(Check::strings(
                    &name,
                    "classification",
                    "case 1..=5 with replayable witness".into(),
                    if in_range && replayed {
                        "case 1..=5 with replayable witness".into()
                    } else {
                        format!(
                            "case {} (replay {}) for input {}",
                            w.label.case,
                            if replayed { "ok" } else { "failed" },
                            coeffs.join(",")
                        )
                    },
                ));
            }
            Err(e) => checks.push(Check::strings(
                &name,
                "classification",
                "case 1..=5 with replayable witness".into(),
                format!("error: {e} for input {}", coeffs.join(",")),
            )),
        }
    }
    Ok(checks)
}

fn chow_suite() -> Vec<Check> {
    let h = DivClass::h();
    let e = DivClass::e();
    let hp = DivClass::hprime();
    let as_rat = |p: &MPoly| p.as_rat().expect("constant intersection number");
    vec![
        Check::rat("cube-of-ruling", "intersection-table", &rat(2), &as_rat(&triple(&h, &h, &h))),
        Check::rat("ruling-squared-times-surface", "intersection-table", &rat(0), &as_rat(&triple(&h, &h, &e))),
        Check::rat("ruling-times-surface-squared", "intersection-table", &rat(-4), &as_rat(&triple(&h, &e, &e))),
        Check::rat("cube-of-surface", "intersection-table", &rat(-10), &as_rat(&triple(&e, &e, &e))),
        Check::rat("normal-bundle-degree", "normal-bundle", &rat(10), &deg_normal_bundle()),
        Check::rat("cube-of-second-ruling", "ruling-cube", &rat(2), &as_rat(&triple(&hp, &hp, &hp))),
        {
            let restricted = restrict_to_e(&DivClass::eprime(), 6).expect("restriction at twist 6");
            Check::strings(
                "surface-restriction-at-twist-6",
                "surface-restriction",
                "section 2, fiber 8".into(),
                format!(
                    "section {}, fiber {}",
                    restricted.a.as_rat().map(|x| format_rat(&x)).unwrap_or_else(|| restricted.a.to_string()),
                    restricted.b.as_rat().map(|x| format_rat(&x)).unwrap_or_else(|| restricted.b.to_string()),
                ),
            )
        },
    ]
}

fn zariski_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let path_h = threefold_path(Surface::H)?;
    checks.push(Check::rat("sweep-threshold-hyperplane", "sweep-threshold", &ratio(3, 2), &path_h.tau));
    checks.push(check_poly(
        "hyperplane-negative-multiple",
        "negative-part",
        &upoly(-1, 1),
        &path_h.pieces[1].negative_multiple,
    ));
    let path_e = threefold_path(Surface::E)?;
    checks.push(Check::rat("sweep-threshold-exceptional", "sweep-threshold", &rat(1), &path_e.tau));
    checks.push(check_poly(
        "exceptional-negative-multiple",
        "negative-part",
        &upoly(-1, 2),
        &path_e.pieces[1].negative_multiple,
    ));

    let cfg = config("dp4-blowup")?;
    let base = config("dp4")?;
    let mut swept = Vec::new();
    for (lo, hi, coeffs) in dp4_restrictions() {
        let lifted = lift_through_point(&base, &coeffs, &MPoly::var(V))?;
        swept.push((lo.clone(), hi.clone(), surface_chambers(&lifted, &cfg, &lo, &hi)?));
    }
    checks.push(check_poly("chamber-threshold-first-piece", "chamber-threshold", &upoly(4, -2), &swept[0].2.tau));
    checks.push(check_poly("chamber-threshold-second-piece", "chamber-threshold", &upoly(6, -4), &swept[1].2.tau));
    let growth = &upoly(-3, 1) + &MPoly::var(V);
    checks.push(check_poly(
        "negative-growth-coefficient",
        "chamber-growth",
        &growth,
        &swept[0].2.chambers[1].n_coeffs[0],
    ));

    let u = MPoly::var(U);
    let v = MPoly::var(V);
    let sq1 = chamber_squares(&swept[0].2, &cfg, 4);
    let sq2 = chamber_squares(&swept[1].2, &cfg, 4);
    let want0 = &(&(&u * &u).scale(&rat(2)) - &(&v * &v)) + &upoly(14, -12);
    checks.push(check_poly("square-first-chamber", "chamber-squares", &want0, &sq1[0].0));
    let lin = |c: i64| &(&u.scale(&rat(2)) + &v) + &MPoly::int(c);
    checks.push(check_poly("square-second-chamber", "chamber-squares", &(&lin(-4) * &lin(-8)), &sq1[1].0));
    let edge = &u.scale(&rat(4)) - &MPoly::int(6);
    checks.push(check_poly("square-second-piece", "chamber-squares", &(&(&edge + &v) * &(&edge - &v)), &sq2[0].0));

    Ok(checks)
}

fn delta_suite() -> Result<Vec<Check>> {
    let sh = s_divisor(Surface::H)?;
    let se = s_divisor(Surface::E)?;
    let curve = s_w2_exceptional("dp4-blowup")?;
    let on = s_w3_point("dp4-blowup", true)?;
    let bound = delta_bound_generic_point()?.bound;
    let ord_term = curve_case_report(0)?.ord_terms[2].clone();
    let worst = beta_certificate_curve_case()?
        .iter()
        .map(|(n, _)| curve_case_report(*n).map(|r| r.total))
        .collect::<Result<Vec<Rat>>>()?
        .into_iter()
        .max()
        .expect("four twists");
    Ok(vec![
        Check::rat("s-value-hyperplane", "s-values", &ratio(51, 112), &sh.value),
        Check::rat("s-value-exceptional", "s-values", &ratio(19, 56), &se.value),
        Check::rat("curve-functional", "curve-functional", &ratio(111, 56), &curve),
        Check::rat("order-correction", "order-correction", &ratio(9, 112), &on.correction),
        Check::rat("point-functional-on-curves", "point-functional", &ratio(111, 112), &on.value),
        Check::rat("delta-generic-bound", "delta-generic", &ratio(112, 111), &bound),
        Check::rat("curve-order-term", "curve-case", &ratio(27, 224), &ord_term),
        Check::rat("curve-worst-total", "curve-case", &ratio(99, 112), &worst),
    ])
}
