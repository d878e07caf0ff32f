//! Exact stability thresholds: divisor and flag S-values, order-corrected
//! point functionals, and the closing delta and beta certificates.

use crate::chow::{restrict_to_e, triple, DivClass};
use crate::error::{Error, Result};
use crate::integrate::{integrate, integrate_iterated};
use crate::mpoly::{MPoly, U, V};
use crate::rat::{rat, Rat};
use crate::zariski::{
    chamber_squares, config, dp4_restrictions, hirzebruch_vol, lift_through_point,
    surface_chambers, threefold_path, CurveConfig, Region, Surface, SurfaceChambers,
};

/// Log discrepancy of a prime divisor on the threefold, and of a point.
pub const A_DIVISOR: i64 = 1;
/// Log discrepancy of the exceptional curve over a smooth surface point.
pub const A_BLOWUP_CURVE: i64 = 2;

/// Anticanonical degree of the threefold, from the intersection table.
pub fn anticanonical_volume() -> Rat {
    let k = DivClass::anticanonical();
    triple(&k, &k, &k).as_rat().expect("constant class has a rational cube")
}

fn prefactor() -> Rat {
    rat(1) / anticanonical_volume()
}

/// One integration interval of an S-value computation.
#[derive(Clone, Debug)]
pub struct SPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub integrand: MPoly,
    pub value: Rat,
}

/// Exact S-value of a divisor together with its complement beta = A - S.
#[derive(Clone, Debug)]
pub struct SReport {
    pub target: String,
    pub tau: Rat,
    pub pieces: Vec<SPiece>,
    pub value: Rat,
    pub beta: Rat,
}

fn s_divisor_scaled(surface: Surface, pre: &Rat) -> Result<SReport> {
    let path = threefold_path(surface)?;
    let mut pieces = Vec::new();
    let mut total = rat(0);
    for piece in &path.pieces {
        let integrand = triple(&piece.positive, &piece.positive, &piece.positive);
        let lo = MPoly::constant(piece.lo.clone());
        let hi = MPoly::constant(piece.hi.clone());
        let value = integrate(&integrand, U, &lo, &hi)?.expect_rat()?;
        total = &total + &value;
        pieces.push(SPiece { lo: piece.lo.clone(), hi: piece.hi.clone(), integrand, value });
    }
    let value = pre * &total;
    let beta = &rat(A_DIVISOR) - &value;
    let target = match surface {
        Surface::H => "hyperplane divisor",
        Surface::E => "exceptional divisor",
    };
    Ok(SReport { target: target.into(), tau: path.tau, pieces, value, beta })
}

/// S-value of one of the two swept divisors, with beta = 1 - S.
pub fn s_divisor(surface: Surface) -> Result<SReport> {
    s_divisor_scaled(surface, &prefactor())
}

/// Chamber structures of the lifted hyperplane restrictions, one per piece.
fn swept_chambers(cfg_name: &str) -> Result<(CurveConfig, Vec<SurfaceChambers>)> {
    let cfg = config(cfg_name)?;
    if cfg.names.last().map(String::as_str) != Some("G") {
        return Err(Error::UnknownConfig(cfg_name.into()));
    }
    let base = config("dp4")?;
    let mut sweeps = Vec::new();
    for (lo, hi, coeffs) in dp4_restrictions() {
        let lifted = lift_through_point(&base, &coeffs, &MPoly::var(V))?;
        sweeps.push(surface_chambers(&lifted, &cfg, &lo, &hi)?);
    }
    Ok((cfg, sweeps))
}

/// Per-chamber contributions to S(W;G), prefactor included, in sweep order.
pub fn s_w2_exceptional_parts(cfg_name: &str) -> Result<Vec<Rat>> {
    let (cfg, sweeps) = swept_chambers(cfg_name)?;
    let designated = cfg.len() - 1;
    let scale = prefactor() * rat(3);
    let mut parts = Vec::new();
    for sweep in &sweeps {
        let u_lo = MPoly::constant(sweep.u_lo.clone());
        let u_hi = MPoly::constant(sweep.u_hi.clone());
        for (chamber, (sq, _)) in sweep.chambers.iter().zip(chamber_squares(sweep, &cfg, designated)) {
            let value = integrate_iterated(
                &sq,
                &[(V, chamber.v_lo.clone(), chamber.v_hi.clone()), (U, u_lo.clone(), u_hi.clone())],
            )?
            .expect_rat()?;
            parts.push(&scale * &value);
        }
    }
    Ok(parts)
}

/// S(W;G): the swept square of the positive part over all chambers.
pub fn s_w2_exceptional(cfg_name: &str) -> Result<Rat> {
    let mut total = rat(0);
    for part in s_w2_exceptional_parts(cfg_name)? {
        total = &total + &part;
    }
    Ok(total)
}

/// An order-corrected point functional split into its two terms.
#[derive(Clone, Debug)]
pub struct PointFunctional {
    pub square_part: Rat,
    pub correction: Rat,
    pub value: Rat,
}

/// Evaluates the point functional over swept chambers: the squared pairing
/// with the designated curve plus the doubled order correction. Only the
/// shipped chamber data pins reference values; any other instantiation has
/// formula-only coverage.
pub fn point_functional(
    sweeps: &[SurfaceChambers],
    cfg: &CurveConfig,
    designated: usize,
    ord_profile: &[Vec<MPoly>],
) -> Result<PointFunctional> {
    if sweeps.len() != ord_profile.len() {
        return Err(Error::Internal("order profile does not match the sweeps".into()));
    }
    let pre = prefactor();
    let mut square_part = rat(0);
    let mut correction = rat(0);
    for (sweep, ords) in sweeps.iter().zip(ord_profile) {
        if ords.len() != sweep.chambers.len() {
            return Err(Error::Internal("order profile does not match the chambers".into()));
        }
        let u_lo = MPoly::constant(sweep.u_lo.clone());
        let u_hi = MPoly::constant(sweep.u_hi.clone());
        let squares = chamber_squares(sweep, cfg, designated);
        for ((chamber, (_, pg)), ord) in sweep.chambers.iter().zip(squares).zip(ords) {
            let layers =
                [(V, chamber.v_lo.clone(), chamber.v_hi.clone()), (U, u_lo.clone(), u_hi.clone())];
            let sq = integrate_iterated(&(&pg * &pg), &layers)?.expect_rat()?;
            square_part = &square_part + &(&(&pre * &rat(3)) * &sq);
            if !ord.is_zero() {
                let cor = integrate_iterated(&(&pg * ord), &layers)?.expect_rat()?;
                correction = &correction + &(&(&pre * &rat(6)) * &cor);
            }
        }
    }
    let value = &square_part + &correction;
    Ok(PointFunctional { square_part, correction, value })
}

/// S(W;O) for a point on the designated exceptional curve; the order term
/// is active iff the point lies on a strict-transform conic.
pub fn s_w3_point(cfg_name: &str, on_curves: bool) -> Result<PointFunctional> {
    let (cfg, sweeps) = swept_chambers(cfg_name)?;
    let designated = cfg.len() - 1;
    // A point lies on at most one conic (their strict transforms are
    // disjoint), and the configuration is symmetric in them, so the first
    // conic's multiplicity gives the order of the negative part.
    let profile: Vec<Vec<MPoly>> = sweeps
        .iter()
        .map(|sweep| {
            sweep
                .chambers
                .iter()
                .map(|chamber| {
                    if on_curves {
                        chamber.n_coeffs[0].scale(&cfg.gram[0][designated])
                    } else {
                        MPoly::zero()
                    }
                })
                .collect()
        })
        .collect();
    point_functional(&sweeps, &cfg, designated, &profile)
}

/// A labelled minimum of A/S ratios establishing a lower bound.
#[derive(Clone, Debug)]
pub struct DeltaCertificate {
    pub candidates: Vec<(String, Rat)>,
    pub bound: Rat,
}

impl DeltaCertificate {
    fn from_candidates(candidates: Vec<(String, Rat)>) -> Result<Self> {
        let bound = candidates
            .iter()
            .map(|(_, x)| x.clone())
            .min()
            .ok_or_else(|| Error::Internal("empty candidate list".into()))?;
        Ok(DeltaCertificate { candidates, bound })
    }
}

/// Lower bound for the stability threshold at a general point: the minimum
/// of the A/S ratios along the surface-curve-point flag.
pub fn delta_bound_generic_point() -> Result<DeltaCertificate> {
    let sh = s_divisor(Surface::H)?;
    let w2 = s_w2_exceptional("dp4-blowup")?;
    let off = s_w3_point("dp4-blowup", false)?.value;
    let on = s_w3_point("dp4-blowup", true)?.value;
    let worst_point = if on > off { on } else { off };
    let candidates = vec![
        ("hyperplane divisor: 1/S".to_string(), rat(A_DIVISOR) / sh.value),
        ("exceptional curve over the surface point: 2/S".to_string(), rat(A_BLOWUP_CURVE) / w2),
        ("worst point on that curve: 1/S".to_string(), rat(A_DIVISOR) / worst_point),
    ];
    DeltaCertificate::from_candidates(candidates)
}

/// Two-term bound for a section-type curve on the exceptional surface.
#[derive(Clone, Debug)]
pub struct CurveCaseReport {
    pub n: i64,
    /// Nef thresholds t(u) of the restricted sweep, one per piece.
    pub thresholds: Vec<(Rat, Rat, MPoly)>,
    /// Order terms for multiplicities 0, 1, 2 of the curve in the negative part.
    pub ord_terms: Vec<Rat>,
    /// Multiplicity of the section in the restricted negative class.
    pub max_multiplicity: Rat,
    pub volume_term: Rat,
    /// Worst-case total: volume term plus the top order term.
    pub total: Rat,
}

/// Computes the section-curve bound on the exceptional surface at twist n.
pub fn curve_case_report(n: i64) -> Result<CurveCaseReport> {
    let path = threefold_path(Surface::E)?;
    let pre = prefactor();
    let max_multiplicity = restrict_to_e(&DivClass::eprime(), n)?.a.expect_rat()?;

    let mut thresholds = Vec::new();
    let mut ord_unit = rat(0);
    let mut volume_term = rat(0);
    for piece in &path.pieces {
        let restricted = restrict_to_e(&piece.positive, n)?;
        let lo = MPoly::constant(piece.lo.clone());
        let hi = MPoly::constant(piece.hi.clone());

        let weighted = &piece.negative_multiple * &restricted.self_intersection();
        let ord_piece = integrate(&weighted, U, &lo, &hi)?.expect_rat()?;
        ord_unit = &ord_unit + &(&(&pre * &rat(3)) * &ord_piece);

        let shifted = &restricted.a - &MPoly::var(V);
        let region = Region::trapezoid(&piece.lo, &piece.hi, &MPoly::zero(), &restricted.a)?;
        let vol = hirzebruch_vol(&shifted, &restricted.b, n, &region)?;
        let layers = [(V, MPoly::zero(), restricted.a.clone()), (U, lo, hi)];
        let vol_piece = integrate_iterated(&vol, &layers)?.expect_rat()?;
        volume_term = &volume_term + &(&(&pre * &rat(3)) * &vol_piece);

        thresholds.push((piece.lo.clone(), piece.hi.clone(), restricted.a.clone()));
    }

    let ord_terms: Vec<Rat> = (0..=2i64).map(|m| &rat(m) * &ord_unit).collect();
    let total = &volume_term + &(&max_multiplicity * &ord_unit);
    Ok(CurveCaseReport { n, thresholds, ord_terms, max_multiplicity, volume_term, total })
}

/// Worst-case S bound for the section curve at twist n.
pub fn s_w2_curve_on_e(n: i64) -> Result<Rat> {
    Ok(curve_case_report(n)?.total)
}

/// Per-twist certificates: min{1/S of the divisor, 1/S of the curve}.
pub fn beta_certificate_curve_case() -> Result<Vec<(i64, DeltaCertificate)>> {
    let se = s_divisor(Surface::E)?;
    let mut out = Vec::new();
    for n in [0, 2, 4, 6] {
        let curve = s_w2_curve_on_e(n)?;
        let candidates = vec![
            ("exceptional divisor: 1/S".to_string(), rat(A_DIVISOR) / se.value.clone()),
            (format!("section curve at twist {n}: 1/S"), rat(A_DIVISOR) / curve),
        ];
        out.push((n, DeltaCertificate::from_candidates(candidates)?));
    }
    Ok(out)
}
