//! Numerical intersection theory on the blow-up of the quadric threefold
//! along the quartic rational normal curve.
//!
//! The divisor lattice is spanned by the hyperplane pullback `H` and the
//! exceptional surface `E`; curves are tracked by their pairings with that
//! basis. Coefficients are [`MPoly`] values so one-parameter families like
//! `(3-u)H - E` stay exact. Restriction to `E`, a ruled surface over the
//! curve, lands in the Neron-Severi lattice of a degree-`n` Hirzebruch
//! surface with `n` kept as a runtime parameter.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::inverse_rat;
use crate::mpoly::MPoly;
use crate::rat::{rat, Rat};

/// A divisor class `alpha*H + beta*E` with exact polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivClass {
    pub alpha: MPoly,
    pub beta: MPoly,
}

impl DivClass {
    pub fn new(alpha: MPoly, beta: MPoly) -> Self {
        DivClass { alpha, beta }
    }

    /// The hyperplane class pulled back from the quadric.
    pub fn h() -> Self {
        DivClass::new(MPoly::one(), MPoly::zero())
    }

    /// The exceptional surface of the blow-up.
    pub fn e() -> Self {
        DivClass::new(MPoly::zero(), MPoly::one())
    }

    /// The anticanonical class `3H - E`.
    pub fn anticanonical() -> Self {
        DivClass::new(MPoly::int(3), MPoly::int(-1))
    }

    /// The strict transform of the quadric's other contraction, `2H - E`.
    pub fn hprime() -> Self {
        DivClass::new(MPoly::int(2), MPoly::int(-1))
    }

    /// The exceptional class of the other contraction, `3H - 2E`.
    pub fn eprime() -> Self {
        DivClass::new(MPoly::int(3), MPoly::int(-2))
    }

    pub fn scale(&self, k: &MPoly) -> Self {
        DivClass::new(&self.alpha * k, &self.beta * k)
    }
}

impl std::ops::Add for &DivClass {
    type Output = DivClass;
    fn add(self, rhs: &DivClass) -> DivClass {
        DivClass::new(&self.alpha + &rhs.alpha, &self.beta + &rhs.beta)
    }
}

impl std::ops::Sub for &DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &DivClass) -> DivClass {
        DivClass::new(&self.alpha - &rhs.alpha, &self.beta - &rhs.beta)
    }
}

/// Trilinear extension of the intersection table
/// `H^3 = 2`, `H^2 E = 0`, `H E^2 = -4`, `E^3 = -10`.
pub fn triple(d1: &DivClass, d2: &DivClass, d3: &DivClass) -> MPoly {
    let table = |i: usize, j: usize, k: usize| -> Rat {
        match i + j + k {
            0 => rat(2),
            1 => rat(0),
            2 => rat(-4),
            3 => rat(-10),
            _ => unreachable!("indices are 0 or 1"),
        }
    };
    fn part(d: &DivClass, i: usize) -> &MPoly {
        if i == 0 {
            &d.alpha
        } else {
            &d.beta
        }
    }
    let mut acc = MPoly::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let coeff = table(i, j, k);
                if coeff.is_zero() {
                    continue;
                }
                let m = &(part(d1, i) * part(d2, j)) * part(d3, k);
                acc += &m.scale(&coeff);
            }
        }
    }
    acc
}

/// A curve class recorded by its pairings `(H . gamma, E . gamma)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    pub with_h: Rat,
    pub with_e: Rat,
}

/// The ruling `f` of the exceptional surface: `H . f = 0`, `E . f = -1`.
pub fn fiber() -> CurveClass {
    CurveClass { with_h: rat(0), with_e: rat(-1) }
}

/// The ruling contracted on the other side, derived from the mirrored
/// blow-up structure `H' . f' = 0`, `E' . f' = -1`.
pub fn fiber_prime() -> CurveClass {
    let hp = DivClass::hprime();
    let ep = DivClass::eprime();
    let constant = |p: &MPoly| p.as_rat().expect("contraction classes are constant");
    let rows = vec![
        vec![constant(&hp.alpha), constant(&hp.beta)],
        vec![constant(&ep.alpha), constant(&ep.beta)],
    ];
    let inv = inverse_rat(&rows)
        .expect("2x2 system")
        .expect("the contraction classes are independent");
    let target = [rat(0), rat(-1)];
    let x = &inv[0][0] * &target[0] + &inv[0][1] * &target[1];
    let y = &inv[1][0] * &target[0] + &inv[1][1] * &target[1];
    CurveClass { with_h: x, with_e: y }
}

/// Bilinear pairing of a divisor class with a curve class.
pub fn curve_pair(d: &DivClass, gamma: &CurveClass) -> MPoly {
    &d.alpha.scale(&gamma.with_h) + &d.beta.scale(&gamma.with_e)
}

/// Degree of the normal bundle of the quartic curve inside the quadric:
/// `2g - 2 - K_Q . C` with `g = 0`, `deg C = 4`, and `K_Q = -3` hyperplanes.
pub fn deg_normal_bundle() -> Rat {
    let genus = rat(0);
    let curve_degree = rat(4);
    let canonical_multiple = rat(-3);
    rat(2) * genus - rat(2) - canonical_multiple * curve_degree
}

pub(crate) fn check_n(n: i64) -> Result<()> {
    if matches!(n, 0 | 2 | 4 | 6) {
        Ok(())
    } else {
        Err(Error::BadSurfaceParameter(n))
    }
}

/// A class `a*s + b*f` on the degree-`n` Hirzebruch surface, with
/// `s^2 = -n`, `s . f = 1`, `f^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnClass {
    pub a: MPoly,
    pub b: MPoly,
    pub n: i64,
}

impl FnClass {
    pub fn new(a: MPoly, b: MPoly, n: i64) -> Result<Self> {
        check_n(n)?;
        Ok(FnClass { a, b, n })
    }

    /// Intersection pairing on the Hirzebruch surface.
    pub fn pair(&self, other: &FnClass) -> MPoly {
        assert_eq!(self.n, other.n, "classes live on the same surface");
        let ss = (&self.a * &other.a).scale(&rat(-self.n));
        let sf = &(&self.a * &other.b) + &(&self.b * &other.a);
        &ss + &sf
    }

    pub fn self_intersection(&self) -> MPoly {
        self.pair(self)
    }
}

/// Restriction of a divisor class to the exceptional surface.
///
/// `H` restricts to four fibers. The section coefficient of `-E` is forced
/// by the table: `((-E)|_E)^2 = E^3`, so `-E` restricts to `s + c*f` with
/// `-n + 2c = E^3`.
pub fn restrict_to_e(d: &DivClass, n: i64) -> Result<FnClass> {
    check_n(n)?;
    let e_cube = triple(&DivClass::e(), &DivClass::e(), &DivClass::e())
        .as_rat()
        .expect("the table entry is rational");
    let c = (e_cube + rat(n)) / rat(2);
    let a = -&d.beta;
    let b = &d.alpha.scale(&rat(4)) - &d.beta.scale(&c);
    FnClass::new(a, b, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{LAMBDA, MU, U};
    use crate::rat::ratio;
    use crate::sample::rng;
    use rand::Rng;

    fn upoly(c0: i64, c1: i64) -> MPoly {
        &MPoly::int(c0) + &MPoly::var(U).scale(&rat(c1))
    }

    #[test]
    fn intersection_table() {
        let h = DivClass::h();
        let e = DivClass::e();
        assert_eq!(triple(&h, &h, &h), MPoly::int(2));
        assert_eq!(triple(&h, &h, &e), MPoly::zero());
        assert_eq!(triple(&h, &e, &e), MPoly::int(-4));
        assert_eq!(triple(&e, &e, &e), MPoly::int(-10));
    }

    #[test]
    fn derived_classes_and_degrees() {
        let k = DivClass::anticanonical();
        assert_eq!(triple(&k, &k, &k), MPoly::int(28));
        let hp = DivClass::hprime();
        assert_eq!(triple(&hp, &hp, &hp), MPoly::int(2));
        let ep = DivClass::eprime();
        assert_eq!(&DivClass::h().scale(&MPoly::int(3)) - &ep, DivClass::e().scale(&MPoly::int(2)));
    }

    #[test]
    fn triple_is_symmetric_and_trilinear() {
        let mut r = rng(23);
        let sample_div = |r: &mut rand_chacha::ChaCha8Rng| {
            DivClass::new(MPoly::int(r.gen_range(-5..=5)), MPoly::int(r.gen_range(-5..=5)))
        };
        for _ in 0..20 {
            let a = sample_div(&mut r);
            let b = sample_div(&mut r);
            let c = sample_div(&mut r);
            let t = triple(&a, &b, &c);
            assert_eq!(t, triple(&b, &a, &c));
            assert_eq!(t, triple(&c, &b, &a));
            assert_eq!(t, triple(&a, &c, &b));
            let d = sample_div(&mut r);
            let sum = &a + &d;
            assert_eq!(triple(&sum, &b, &c), &t + &triple(&d, &b, &c));
            let scaled = a.scale(&MPoly::int(7));
            assert_eq!(triple(&scaled, &b, &c), t.scale(&rat(7)));
        }
    }

    #[test]
    fn ruling_pairings() {
        let f = fiber();
        let fp = fiber_prime();
        assert_eq!(fp, CurveClass { with_h: rat(1), with_e: rat(2) });
        assert_eq!(curve_pair(&DivClass::h(), &f), MPoly::zero());
        assert_eq!(curve_pair(&DivClass::e(), &f), MPoly::int(-1));
        assert_eq!(curve_pair(&DivClass::hprime(), &fp), MPoly::zero());
        assert_eq!(curve_pair(&DivClass::eprime(), &fp), MPoly::int(-1));
        let k = DivClass::anticanonical();
        assert_eq!(curve_pair(&k, &f), MPoly::one());
        assert_eq!(curve_pair(&k, &fp), MPoly::one());
        // The one-parameter family (3-u)H - E pairs to 1 with f and 1-u
        // with f'.
        let path = DivClass::new(upoly(3, -1), MPoly::int(-1));
        assert_eq!(curve_pair(&path, &f), MPoly::one());
        assert_eq!(curve_pair(&path, &fp), upoly(1, -1));
    }

    #[test]
    fn normal_bundle_degree_matches_table() {
        assert_eq!(deg_normal_bundle(), rat(10));
        let e = DivClass::e();
        assert_eq!(triple(&e, &e, &e).as_rat().unwrap(), -deg_normal_bundle());
    }

    #[test]
    fn restrictions_to_the_exceptional_surface() {
        for n in [0i64, 2, 4, 6] {
            let ep = restrict_to_e(&DivClass::eprime(), n).unwrap();
            assert_eq!(ep.a, MPoly::int(2));
            assert_eq!(ep.b, MPoly::int(n + 2));

            // 3H - (1+u)E restricts to (1+u)s + ((n+14-(10-n)u)/2)f.
            let d = DivClass::new(MPoly::int(3), -&upoly(1, 1));
            let r = restrict_to_e(&d, n).unwrap();
            assert_eq!(r.a, upoly(1, 1));
            let expected_b = &MPoly::int(n + 14).scale(&ratio(1, 2))
                - &MPoly::var(U).scale(&ratio(10 - n, 2));
            assert_eq!(r.b, expected_b);

            let hp = restrict_to_e(&DivClass::hprime(), n).unwrap();
            assert_eq!(hp.a, MPoly::one());
            assert_eq!(hp.b, MPoly::int(n + 6).scale(&ratio(1, 2)));
            assert_eq!(hp.self_intersection(), MPoly::int(6));
        }
        assert!(matches!(restrict_to_e(&DivClass::h(), 3), Err(Error::BadSurfaceParameter(3))));
        assert!(matches!(FnClass::new(MPoly::one(), MPoly::one(), 8), Err(Error::BadSurfaceParameter(8))));
    }

    #[test]
    fn restriction_matches_triple_with_e() {
        // Symbolically: both sides equal -8ab - 10b^2, independent of n.
        let a = MPoly::var(LAMBDA);
        let b = MPoly::var(MU);
        let d = DivClass::new(a.clone(), b.clone());
        let lhs = triple(&d, &d, &DivClass::e());
        let expected = &(&a * &b).scale(&rat(-8)) - &(&b * &b).scale(&rat(10));
        assert_eq!(lhs, expected);
        for n in [0i64, 2, 4, 6] {
            assert_eq!(restrict_to_e(&d, n).unwrap().self_intersection(), expected);
        }
        let mut r = rng(29);
        for _ in 0..50 {
            let d = DivClass::new(MPoly::int(r.gen_range(-9..=9)), MPoly::int(r.gen_range(-9..=9)));
            let lhs = triple(&d, &d, &DivClass::e());
            for n in [0i64, 2, 4, 6] {
                assert_eq!(restrict_to_e(&d, n).unwrap().self_intersection(), lhs);
            }
        }
    }

    #[test]
    fn hyperplane_restriction_pairs_like_the_table() {
        // H.E^2 equals the Hirzebruch pairing of the two restrictions for
        // every n, both giving -(deg C) = -4.
        let he2 = triple(&DivClass::h(), &DivClass::e(), &DivClass::e());
        for n in [0i64, 2, 4, 6] {
            let h = restrict_to_e(&DivClass::h(), n).unwrap();
            let e = restrict_to_e(&DivClass::e(), n).unwrap();
            assert_eq!(h.pair(&e), he2);
        }
    }

    #[test]
    fn fn_class_requires_matching_surfaces() {
        let a = FnClass::new(MPoly::one(), MPoly::zero(), 2).unwrap();
        assert_eq!(a.self_intersection(), MPoly::int(-2));
        let f = FnClass::new(MPoly::zero(), MPoly::one(), 2).unwrap();
        assert_eq!(a.pair(&f), MPoly::one());
        assert_eq!(f.self_intersection(), MPoly::zero());
    }
}
