//! Sylvester resultants of multivariate polynomials viewed in one variable.

use crate::error::{Error, Result};
use crate::matrix::det_mpoly;
use crate::mpoly::{MPoly, Var};

/// Sylvester matrix of `f` and `g` with respect to `v`.
pub fn sylvester_matrix(f: &MPoly, g: &MPoly, v: Var) -> Result<Vec<Vec<MPoly>>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateResultant);
    }
    let fc = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    if m == 0 && n == 0 {
        return Err(Error::DegenerateResultant);
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![MPoly::zero(); size];
        for (k, coeff) in fc.iter().enumerate() {
            row[shift + m - k] = coeff.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![MPoly::zero(); size];
        for (k, coeff) in gc.iter().enumerate() {
            row[shift + n - k] = coeff.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Resultant of `f` and `g` with respect to `v`.
///
/// If one input is constant in `v` the convention `res(f, g) = f^{deg g}`
/// (resp. `g^{deg f}`) applies; zero inputs are rejected.
pub fn resultant(f: &MPoly, g: &MPoly, v: Var) -> Result<MPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateResultant);
    }
    let m = f.degree_in(v);
    let n = g.degree_in(v);
    if m == 0 {
        return Ok(f.pow(n as u32));
    }
    if n == 0 {
        return Ok(g.pow(m as u32));
    }
    det_mpoly(&sylvester_matrix(f, g, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{B, C, U, V};
    use crate::rat::{rat, Rat};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn xv() -> MPoly {
        MPoly::var(U)
    }

    #[test]
    fn linear_pair() {
        let f = &xv() - &MPoly::var(B);
        let g = &xv() - &MPoly::var(C);
        let r = resultant(&f, &g, U).unwrap();
        assert_eq!(r, &MPoly::var(B) - &MPoly::var(C));
    }

    #[test]
    fn shared_root_gives_zero() {
        let f = &xv().pow(2) - &MPoly::int(1);
        let g = &xv() - &MPoly::int(1);
        assert!(resultant(&f, &g, U).unwrap().is_zero());
        let h = &xv() - &MPoly::int(2);
        assert_eq!(resultant(&f, &h, U).unwrap(), MPoly::int(3));
    }

    #[test]
    fn quadratic_discriminant_shape() {
        let f = MPoly::from_terms(&[(&[(U, 2)], rat(1)), (&[(U, 1), (B, 1)], rat(1)), (&[(C, 1)], rat(1))]);
        let r = resultant(&f, &f.derivative(U), U).unwrap();
        let disc = &MPoly::monomial(&[(B, 2)], rat(1)) - &MPoly::monomial(&[(C, 1)], rat(4));
        assert_eq!(r, -&disc);
    }

    #[test]
    fn constant_conventions() {
        let f = MPoly::int(5);
        let g = xv().pow(3);
        assert_eq!(resultant(&f, &g, U).unwrap(), MPoly::int(125));
        assert_eq!(resultant(&g, &f, U).unwrap(), MPoly::int(125));
        assert!(resultant(&MPoly::zero(), &g, U).is_err());
        assert_eq!(resultant(&f, &f, U).unwrap(), MPoly::one());
    }

    #[test]
    fn sylvester_shape() {
        let f = &xv().pow(2) + &MPoly::one();
        let g = &xv().pow(3) - &MPoly::var(V);
        let m = sylvester_matrix(&f, &g, U).unwrap();
        assert_eq!(m.len(), 5);
        assert!(m.iter().all(|r| r.len() == 5));
    }

    fn monic_gcd_q(f: &MPoly, g: &MPoly) -> MPoly {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let lead = b.coeff_of_power(U, b.degree_in(U)).as_rat().unwrap();
            let monic = b.scale(&(Rat::one() / lead));
            if monic.degree_in(U) == 0 {
                return MPoly::one();
            }
            let (_, r) = a.divrem_by_monic(&monic, U);
            a = monic;
            b = r;
        }
        let lead = a.coeff_of_power(U, a.degree_in(U)).as_rat().unwrap();
        a.scale(&(Rat::one() / lead))
    }

    fn arb_univar() -> impl Strategy<Value = MPoly> {
        proptest::collection::vec(-3i64..4, 1..5).prop_map(|cs| {
            let coeffs: Vec<MPoly> = cs.iter().map(|&c| MPoly::int(c)).collect();
            let p = MPoly::from_coeffs(U, &coeffs);
            if p.is_zero() {
                MPoly::one()
            } else {
                p
            }
        })
    }

    proptest! {
        #[test]
        fn resultant_is_multiplicative(f in arb_univar(), g in arb_univar(), h in arb_univar()) {
            prop_assume!(f.degree_in(U) > 0);
            let lhs = resultant(&f, &(&g * &h), U).unwrap();
            let rhs = &resultant(&f, &g, U).unwrap() * &resultant(&f, &h, U).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn resultant_vanishes_iff_common_factor(f in arb_univar(), g in arb_univar()) {
            prop_assume!(f.degree_in(U) > 0 && g.degree_in(U) > 0);
            let r = resultant(&f, &g, U).unwrap().as_rat().unwrap();
            let gcd = monic_gcd_q(&f, &g);
            prop_assert_eq!(r.is_zero(), gcd.degree_in(U) > 0);
        }
    }
}
