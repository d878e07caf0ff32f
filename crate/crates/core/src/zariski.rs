//! Exact Zariski decompositions: divisor sweeps on the threefold, curve
//! configurations on surfaces, and vertex-certified Hirzebruch volumes.

use num_traits::Zero;

use crate::chow::{check_n, curve_pair, fiber, fiber_prime, DivClass};
use crate::error::{Error, Result};
use crate::matrix::{inverse_rat, is_negative_definite, mat_vec_mpoly};
use crate::mpoly::{MPoly, U, V};
use crate::rat::{rat, ratio, Rat};

/// The two divisor directions swept on the threefold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surface {
    /// A general member of `|H|`.
    H,
    /// The exceptional divisor of the blow-up.
    E,
}

impl Surface {
    /// The divisor class swept in this direction.
    pub fn class(self) -> DivClass {
        match self {
            Surface::H => DivClass::h(),
            Surface::E => DivClass::e(),
        }
    }
}

/// One interval of a divisorial Zariski decomposition with exact endpoints.
#[derive(Clone, Debug)]
pub struct PathPiece {
    pub lo: Rat,
    pub hi: Rat,
    /// Positive part, polynomial in the sweep variable u.
    pub positive: DivClass,
    /// Coefficient of `negative_class` in the negative part.
    pub negative_multiple: MPoly,
    /// Divisor class carrying the negative part.
    pub negative_class: DivClass,
}

impl PathPiece {
    /// Negative part as a divisor class.
    pub fn negative(&self) -> DivClass {
        self.negative_class.scale(&self.negative_multiple)
    }
}

/// Zariski decomposition of `-K - uS`, valid up to the threshold `tau`.
#[derive(Clone, Debug)]
pub struct DivisorPath {
    pub pieces: Vec<PathPiece>,
    pub tau: Rat,
}

/// Reads an affine polynomial in u as `(constant, u-coefficient)`.
fn affine_u(p: &MPoly) -> Result<(Rat, Rat)> {
    let fail = || Error::NonAffine(p.clone());
    if p.degree_in(U) > 1 {
        return Err(fail());
    }
    let cu = p.coeff_of_power(U, 1).as_rat().ok_or_else(fail)?;
    let c0 = p.coeff_of_power(U, 0).as_rat().ok_or_else(fail)?;
    Ok((c0, cu))
}

/// Reads an affine polynomial in (u, v) as `(constant, u-coeff, v-coeff)`.
fn affine_uv(p: &MPoly) -> Result<(Rat, Rat, Rat)> {
    let fail = || Error::NonAffine(p.clone());
    if p.degree_in(U) > 1 || p.degree_in(V) > 1 {
        return Err(fail());
    }
    let cu = p.coeff_of_power(U, 1).as_rat().ok_or_else(fail)?;
    let rest = p.coeff_of_power(U, 0);
    let cv = rest.coeff_of_power(V, 1).as_rat().ok_or_else(fail)?;
    let c0 = rest.coeff_of_power(V, 0).as_rat().ok_or_else(fail)?;
    Ok((c0, cu, cv))
}

fn value_at_u(p: &MPoly, u: &Rat) -> Result<Rat> {
    p.eval(&[(U, u.clone())]).as_rat().ok_or_else(|| Error::NonAffine(p.clone()))
}

fn value_at_uv(p: &MPoly, u: &Rat, v: &Rat) -> Result<Rat> {
    p.eval(&[(U, u.clone()), (V, v.clone())])
        .as_rat()
        .ok_or_else(|| Error::NonAffine(p.clone()))
}

/// Decomposes `-K - uS` piecewise, deriving the breakpoint, the negative
/// part, and the threshold from the pairings with the two rulings.
pub fn threefold_path(surface: Surface) -> Result<DivisorPath> {
    let u = MPoly::var(U);
    let cls = &DivClass::anticanonical() - &surface.class().scale(&u);

    // Each ruling covers a divisor it pairs to -1 with, and the classes
    // orthogonal to it form the ray spanned by the listed collapse class.
    let rays = [
        (fiber(), DivClass::e(), DivClass::h(), fiber_prime()),
        (fiber_prime(), DivClass::eprime(), DivClass::hprime(), fiber()),
    ];

    let mut binder: Option<(usize, Rat)> = None;
    for (i, (ray, _, _, _)) in rays.iter().enumerate() {
        let (c0, cu) = affine_u(&curve_pair(&cls, ray))?;
        if c0 <= Rat::zero() {
            return Err(Error::Internal("sweep class pairs nonpositively at u = 0".into()));
        }
        if cu >= Rat::zero() {
            continue;
        }
        let root = -(c0 / cu);
        binder = Some(match binder.take() {
            None => (i, root),
            Some((bi, best)) => {
                if root == best {
                    return Err(Error::Internal("both rulings bind at the same u".into()));
                } else if root < best {
                    (i, root)
                } else {
                    (bi, best)
                }
            }
        });
    }
    let Some((bi, u1)) = binder else {
        return Err(Error::Internal("sweep class never leaves the nef cone".into()));
    };
    let (ray_b, covered, collapse, other) = &rays[bi];

    let mult = -&curve_pair(&cls, ray_b);
    let p2 = &cls - &covered.scale(&mult);
    if !curve_pair(&p2, ray_b).is_zero() {
        return Err(Error::Internal("negative part fails orthogonality".into()));
    }
    let g = curve_pair(&p2, other);
    let unit = curve_pair(collapse, other).expect_rat()?;
    if unit.is_zero() {
        return Err(Error::Internal("collapse class pairs to zero with the free ruling".into()));
    }
    if p2 != collapse.scale(&g.scale(&(rat(1) / unit))) {
        return Err(Error::Internal("positive part does not collapse onto one ray".into()));
    }

    let (g0, gu) = affine_u(&g)?;
    if gu >= Rat::zero() {
        return Err(Error::Internal("sweep class never leaves the big cone".into()));
    }
    let tau = -(g0 / gu);
    if tau <= u1 {
        return Err(Error::Internal("threshold precedes the nef boundary".into()));
    }

    for (ray, _, _, _) in &rays {
        let pairing = curve_pair(&cls, ray);
        for at in [&Rat::zero(), &u1] {
            if value_at_u(&pairing, at)? < Rat::zero() {
                return Err(Error::Internal("nef piece has a negative ruling pairing".into()));
            }
        }
    }
    for at in [&u1, &tau] {
        if value_at_u(&mult, at)? < Rat::zero() {
            return Err(Error::Internal("negative-part multiple goes negative".into()));
        }
        if value_at_u(&g, at)? < Rat::zero() {
            return Err(Error::Internal("positive part leaves the nef cone".into()));
        }
    }
    if &p2 + &covered.scale(&mult) != cls {
        return Err(Error::Internal("decomposition does not recompose".into()));
    }

    let pieces = vec![
        PathPiece {
            lo: Rat::zero(),
            hi: u1.clone(),
            positive: cls,
            negative_multiple: MPoly::zero(),
            negative_class: covered.clone(),
        },
        PathPiece {
            lo: u1,
            hi: tau.clone(),
            positive: p2,
            negative_multiple: mult,
            negative_class: covered.clone(),
        },
    ];
    Ok(DivisorPath { pieces, tau })
}

/// Named intersection data for a finite list of curves on a surface.
#[derive(Clone, Debug)]
pub struct CurveConfig {
    pub names: Vec<String>,
    pub gram: Vec<Vec<Rat>>,
    /// Which curves pass through the marked point.
    pub through_point: Vec<bool>,
}

impl CurveConfig {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Four conics through the marked point on a quartic del Pezzo surface.
fn dp4_config() -> CurveConfig {
    let rows = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]];
    CurveConfig {
        names: vec!["C1".into(), "C2".into(), "Z1".into(), "Z2".into()],
        gram: rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(),
        through_point: vec![true; 4],
    }
}

/// Blows up the marked point: strict transforms lose one pairwise incidence
/// per shared passage and the exceptional curve G meets exactly the curves
/// through the point.
pub fn blow_up_at_marked_point(base: &CurveConfig) -> CurveConfig {
    let k = base.len();
    let m: Vec<Rat> =
        base.through_point.iter().map(|&t| if t { rat(1) } else { rat(0) }).collect();
    let mut gram = vec![vec![Rat::zero(); k + 1]; k + 1];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = &base.gram[i][j] - &(&m[i] * &m[j]);
        }
        gram[i][k] = m[i].clone();
        gram[k][i] = m[i].clone();
    }
    gram[k][k] = rat(-1);
    let mut names: Vec<String> = base.names.iter().map(|n| format!("{n}~")).collect();
    names.push("G".into());
    CurveConfig { names, gram, through_point: vec![false; k + 1] }
}

/// Looks up a named curve configuration.
pub fn config(name: &str) -> Result<CurveConfig> {
    if let Some(suffix) = name.strip_prefix("hirzebruch-") {
        let n: i64 = suffix.parse().map_err(|_| Error::UnknownConfig(name.into()))?;
        check_n(n)?;
        return Ok(CurveConfig {
            names: vec!["s".into(), "f".into()],
            gram: vec![vec![rat(-n), rat(1)], vec![rat(1), rat(0)]],
            through_point: vec![false, false],
        });
    }
    match name {
        "dp4" => Ok(dp4_config()),
        "dp4-blowup" => Ok(blow_up_at_marked_point(&dp4_config())),
        _ => Err(Error::UnknownConfig(name.into())),
    }
}

/// A u-interval together with conic-basis coefficients of a surface class.
pub type RestrictionPiece = (Rat, Rat, Vec<MPoly>);

/// Conic-basis coefficients of the restricted positive parts of the
/// hyperplane sweep, one entry per path piece.
pub fn dp4_restrictions() -> Vec<RestrictionPiece> {
    let u = MPoly::var(U);
    let half = MPoly::constant(ratio(1, 2));
    let front = (&MPoly::int(3) - &u.scale(&rat(2))).scale(&ratio(1, 2));
    let late = &MPoly::int(3) - &u.scale(&rat(2));
    vec![
        (rat(0), rat(1), vec![front.clone(), front, half.clone(), half]),
        (rat(1), ratio(3, 2), vec![late.clone(), MPoly::zero(), late, MPoly::zero()]),
    ]
}

/// Pulls conic-basis coefficients through the blow-up, appending the
/// exceptional coefficient: multiplicity at the point minus the sweep v.
pub fn lift_through_point(base: &CurveConfig, coeffs: &[MPoly], v: &MPoly) -> Result<Vec<MPoly>> {
    if coeffs.len() != base.len() {
        return Err(Error::Internal("coefficient count does not match the configuration".into()));
    }
    let mut lifted = coeffs.to_vec();
    let mut exc = -v;
    for (c, &through) in coeffs.iter().zip(&base.through_point) {
        if through {
            exc += c;
        }
    }
    lifted.push(exc);
    Ok(lifted)
}

/// One v-chamber of a surface sweep: support, negative-part coefficients,
/// and positive-part coefficients in the configuration basis.
#[derive(Clone, Debug)]
pub struct Chamber {
    pub v_lo: MPoly,
    pub v_hi: MPoly,
    pub support: Vec<usize>,
    pub n_coeffs: Vec<MPoly>,
    pub p_coeffs: Vec<MPoly>,
}

/// Chamber structure of a swept class over a u-interval, ending at the
/// v-threshold where the grown support stops being contractible.
#[derive(Clone, Debug)]
pub struct SurfaceChambers {
    pub u_lo: Rat,
    pub u_hi: Rat,
    pub chambers: Vec<Chamber>,
    pub tau: MPoly,
}

fn chamber_corners(u_lo: &Rat, u_hi: &Rat, v_lo: &MPoly, v_hi: &MPoly) -> Result<Vec<(Rat, Rat)>> {
    let mut corners = Vec::new();
    for ue in [u_lo, u_hi] {
        let lo = value_at_u(v_lo, ue)?;
        let hi = value_at_u(v_hi, ue)?;
        if lo > hi {
            return Err(Error::ChamberOrder);
        }
        corners.push((ue.clone(), lo));
        corners.push((ue.clone(), hi));
    }
    Ok(corners)
}

/// Sweeps v upward from 0, growing the support at each breakpoint, and stops
/// where the candidate support loses negative definiteness.
pub fn surface_chambers(
    coeffs: &[MPoly],
    cfg: &CurveConfig,
    u_lo: &Rat,
    u_hi: &Rat,
) -> Result<SurfaceChambers> {
    let k = cfg.len();
    if coeffs.len() != k {
        return Err(Error::Internal("coefficient count does not match the configuration".into()));
    }
    if u_hi <= u_lo {
        return Err(Error::Internal("empty u-interval".into()));
    }
    let mid = (u_lo + u_hi) / rat(2);

    let cls_pair: Vec<MPoly> = (0..k)
        .map(|j| {
            let mut acc = MPoly::zero();
            for (c, row) in coeffs.iter().zip(&cfg.gram) {
                acc += &c.scale(&row[j]);
            }
            acc
        })
        .collect();
    for pairing in &cls_pair {
        affine_uv(pairing)?;
    }

    let mut supp: Vec<usize> = Vec::new();
    let mut v_start = MPoly::zero();
    let mut chambers = Vec::new();
    let tau;

    loop {
        let mut n_full = vec![MPoly::zero(); k];
        if !supp.is_empty() {
            let g_supp: Vec<Vec<Rat>> = supp
                .iter()
                .map(|&i| supp.iter().map(|&j| cfg.gram[i][j].clone()).collect())
                .collect();
            if !is_negative_definite(&g_supp)? {
                tau = v_start;
                break;
            }
            let inv = inverse_rat(&g_supp)?
                .ok_or_else(|| Error::Internal("support intersection form is singular".into()))?;
            let rhs: Vec<MPoly> = supp.iter().map(|&i| cls_pair[i].clone()).collect();
            for (&slot, poly) in supp.iter().zip(mat_vec_mpoly(&inv, &rhs)) {
                n_full[slot] = poly;
            }
        }
        let p_pair: Vec<MPoly> = (0..k)
            .map(|j| {
                let mut acc = cls_pair[j].clone();
                for (n, row) in n_full.iter().zip(&cfg.gram) {
                    acc -= &n.scale(&row[j]);
                }
                acc
            })
            .collect();

        // Breakpoint candidates: off-support pairings falling in v.
        let start_mid = value_at_u(&v_start, &mid)?;
        let mut live: Vec<(usize, MPoly, Rat)> = Vec::new();
        for (j, pairing) in p_pair.iter().enumerate() {
            if supp.contains(&j) {
                continue;
            }
            let (c0, cu, cv) = affine_uv(pairing)?;
            if cv >= Rat::zero() {
                continue;
            }
            let root = (&MPoly::constant(c0) + &MPoly::var(U).scale(&cu))
                .scale(&-(rat(1) / cv));
            let at_mid = value_at_u(&root, &mid)?;
            if at_mid > start_mid {
                live.push((j, root, at_mid));
            }
        }
        if live.is_empty() {
            return Err(Error::Internal("sweep found no further breakpoint".into()));
        }
        let best = live.iter().map(|(_, _, at)| at.clone()).min().expect("nonempty");
        let (joiners, rest): (Vec<_>, Vec<_>) =
            live.into_iter().partition(|(_, _, at)| *at == best);
        let v_hi = joiners[0].1.clone();
        if joiners.iter().any(|(_, root, _)| *root != v_hi) {
            return Err(Error::ChamberOrder);
        }
        for ue in [u_lo, u_hi] {
            let bound = value_at_u(&v_hi, ue)?;
            if bound < value_at_u(&v_start, ue)? {
                return Err(Error::ChamberOrder);
            }
            for (_, root, _) in &rest {
                if value_at_u(root, ue)? < bound {
                    return Err(Error::ChamberOrder);
                }
            }
        }

        let corners = chamber_corners(u_lo, u_hi, &v_start, &v_hi)?;
        for q in p_pair.iter().chain(n_full.iter()) {
            for (cu_, cv_) in &corners {
                if value_at_uv(q, cu_, cv_)? < Rat::zero() {
                    return Err(Error::MixedSign(q.clone()));
                }
            }
        }

        let p_coeffs: Vec<MPoly> = coeffs.iter().zip(&n_full).map(|(c, n)| c - n).collect();
        chambers.push(Chamber {
            v_lo: v_start.clone(),
            v_hi: v_hi.clone(),
            support: supp.clone(),
            n_coeffs: n_full,
            p_coeffs,
        });
        for (j, _, _) in joiners {
            supp.push(j);
        }
        supp.sort_unstable();
        v_start = v_hi;
    }
    Ok(SurfaceChambers { u_lo: u_lo.clone(), u_hi: u_hi.clone(), chambers, tau })
}

/// Squares of the positive parts and their pairings with the curve at index
/// `designated`, one pair per chamber.
pub fn chamber_squares(
    ch: &SurfaceChambers,
    cfg: &CurveConfig,
    designated: usize,
) -> Vec<(MPoly, MPoly)> {
    ch.chambers
        .iter()
        .map(|chamber| {
            let mut sq = MPoly::zero();
            let mut pg = MPoly::zero();
            for (pi, row) in chamber.p_coeffs.iter().zip(&cfg.gram) {
                pg += &pi.scale(&row[designated]);
                for (pj, gij) in chamber.p_coeffs.iter().zip(row) {
                    sq += &(pi * pj).scale(gij);
                }
            }
            (sq, pg)
        })
        .collect()
}

/// A convex region listed by its corners, for exact sign certification.
#[derive(Clone, Debug)]
pub struct Region {
    pub vertices: Vec<(Rat, Rat)>,
}

impl Region {
    /// The region `u_lo <= u <= u_hi`, `v_lo(u) <= v <= v_hi(u)` with affine
    /// bounds, represented by its four corners.
    pub fn trapezoid(u_lo: &Rat, u_hi: &Rat, v_lo: &MPoly, v_hi: &MPoly) -> Result<Region> {
        affine_u(v_lo)?;
        affine_u(v_hi)?;
        Ok(Region { vertices: chamber_corners(u_lo, u_hi, v_lo, v_hi)? })
    }
}

enum SignClass {
    NonNegative,
    NonPositive,
    Mixed,
}

/// Certifies the sign of an affine expression over a region by its corners.
fn sign_over(p: &MPoly, region: &Region) -> Result<SignClass> {
    affine_uv(p)?;
    let mut any_pos = false;
    let mut any_neg = false;
    for (u, v) in &region.vertices {
        let x = value_at_uv(p, u, v)?;
        if x > Rat::zero() {
            any_pos = true;
        }
        if x < Rat::zero() {
            any_neg = true;
        }
    }
    Ok(match (any_pos, any_neg) {
        (true, true) => SignClass::Mixed,
        (_, true) => SignClass::NonPositive,
        _ => SignClass::NonNegative,
    })
}

/// Exact volume of `a s + b f` on the Hirzebruch surface F_n, with the
/// Zariski branch certified by vertex signs over the region.
pub fn hirzebruch_vol(a: &MPoly, b: &MPoly, n: i64, region: &Region) -> Result<MPoly> {
    check_n(n)?;
    match sign_over(a, region)? {
        SignClass::Mixed => return Err(Error::MixedSign(a.clone())),
        SignClass::NonPositive => return Ok(MPoly::zero()),
        SignClass::NonNegative => {}
    }
    match sign_over(b, region)? {
        SignClass::Mixed => return Err(Error::MixedSign(b.clone())),
        SignClass::NonPositive => return Ok(MPoly::zero()),
        SignClass::NonNegative => {}
    }
    let margin = b - &a.scale(&rat(n));
    match sign_over(&margin, region)? {
        SignClass::NonNegative => Ok(&(a * b).scale(&rat(2)) - &(a * a).scale(&rat(n))),
        SignClass::NonPositive => {
            if n == 0 {
                return Ok(MPoly::zero());
            }
            Ok((b * b).scale(&ratio(1, n)))
        }
        SignClass::Mixed => Err(Error::MixedSign(margin)),
    }
}
