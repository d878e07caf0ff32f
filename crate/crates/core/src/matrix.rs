//! Exact determinants and linear solving over rationals and polynomials.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::rat::Rat;

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NonSquareMatrix);
    }
    Ok(n)
}

/// Fraction-free Bareiss determinant; every division is exact by construction.
pub fn det_mpoly(m: &[Vec<MPoly>]) -> Result<MPoly> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(MPoly::one());
    }
    let mut a: Vec<Vec<MPoly>> = m.to_vec();
    let mut sign = 1i64;
    let mut prev = MPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(MPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][k] = MPoly::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(a[n - 1][n - 1].scale(&Rat::from_integer(sign.into())))
}

/// Laplace cofactor expansion along the first row; exponential, test oracle only.
pub fn det_cofactor(m: &[Vec<MPoly>]) -> Result<MPoly> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(MPoly::one());
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = MPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly>> = (1..n)
            .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k].clone()).collect())
            .collect();
        let cof = &m[0][j] * &det_cofactor(&minor)?;
        if j % 2 == 0 {
            acc += &cof;
        } else {
            acc -= &cof;
        }
    }
    Ok(acc)
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn det_rat(m: &[Vec<Rat>]) -> Result<Rat> {
    let n = check_square(m)?;
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let pivot = match (k..n).find(|&r| !a[r][k].is_zero()) {
            Some(r) => r,
            None => return Ok(Rat::zero()),
        };
        if pivot != k {
            a.swap(k, pivot);
            det = -det;
        }
        det *= a[k][k].clone();
        let inv = Rat::one() / a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].clone() * &inv;
            for j in k..n {
                let delta = factor.clone() * a[k][j].clone();
                a[i][j] -= delta;
            }
        }
    }
    Ok(det)
}

/// Inverse of a rational matrix; `None` if singular.
pub fn inverse_rat(m: &[Vec<Rat>]) -> Result<Option<Vec<Vec<Rat>>>> {
    let n = check_square(m)?;
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for k in 0..n {
        let pivot = match (k..n).find(|&r| !a[r][k].is_zero()) {
            Some(r) => r,
            None => return Ok(None),
        };
        a.swap(k, pivot);
        inv.swap(k, pivot);
        let scale = Rat::one() / a[k][k].clone();
        for j in 0..n {
            a[k][j] *= scale.clone();
            inv[k][j] *= scale.clone();
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].clone();
            for j in 0..n {
                let da = factor.clone() * a[k][j].clone();
                a[i][j] -= da;
                let di = factor.clone() * inv[k][j].clone();
                inv[i][j] -= di;
            }
        }
    }
    Ok(Some(inv))
}

/// Applies a rational matrix to a vector of polynomials.
pub fn mat_vec_mpoly(m: &[Vec<Rat>], v: &[MPoly]) -> Vec<MPoly> {
    m.iter()
        .map(|row| {
            let mut acc = MPoly::zero();
            for (c, p) in row.iter().zip(v) {
                acc += &p.scale(c);
            }
            acc
        })
        .collect()
}

/// Leading principal minors `det(m[..k][..k])` for `k = 1..=n`.
pub fn leading_principal_minors(m: &[Vec<Rat>]) -> Result<Vec<Rat>> {
    let n = check_square(m)?;
    (1..=n)
        .map(|k| {
            let sub: Vec<Vec<Rat>> =
                (0..k).map(|i| (0..k).map(|j| m[i][j].clone()).collect()).collect();
            det_rat(&sub)
        })
        .collect()
}

/// Sylvester criterion for negative definiteness: minors alternate starting negative.
pub fn is_negative_definite(m: &[Vec<Rat>]) -> Result<bool> {
    let minors = leading_principal_minors(m)?;
    Ok(minors.iter().enumerate().all(|(i, d)| {
        if i % 2 == 0 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{X, U, V};
    use crate::rat::{rat, ratio};
    use proptest::prelude::*;

    fn rmat(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rational_determinants() {
        assert_eq!(det_rat(&rmat(&[&[2]])).unwrap(), rat(2));
        assert_eq!(det_rat(&rmat(&[&[1, 2], &[3, 4]])).unwrap(), rat(-2));
        assert_eq!(det_rat(&rmat(&[&[1, 2], &[2, 4]])).unwrap(), rat(0));
        let vandermonde = rmat(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 9]]);
        assert_eq!(det_rat(&vandermonde).unwrap(), rat(2));
    }

    #[test]
    fn symbolic_determinant_with_zero_pivot() {
        let u = MPoly::var(U);
        let v = MPoly::var(V);
        let z = MPoly::zero();
        let m = vec![
            vec![z.clone(), u.clone()],
            vec![v.clone(), z.clone()],
        ];
        assert_eq!(det_mpoly(&m).unwrap(), -&(&u * &v));
    }

    #[test]
    fn bareiss_matches_cofactor_on_generic_matrix() {
        let e = |i: usize, j: usize| {
            MPoly::monomial(&[(X[i], 1), (X[j], 1)], rat((i + 2 * j + 1) as i64))
        };
        let m: Vec<Vec<MPoly>> = (0..4)
            .map(|i| (0..4).map(|j| &e(i, j) + &MPoly::int((i * j) as i64)).collect())
            .collect();
        assert_eq!(det_mpoly(&m).unwrap(), det_cofactor(&m).unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = rmat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse_rat(&m).unwrap().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let entry: Rat = (0..3).map(|k| m[i][k].clone() * inv[k][j].clone()).sum();
                assert_eq!(entry, if i == j { rat(1) } else { rat(0) });
            }
        }
        assert!(inverse_rat(&rmat(&[&[1, 2], &[2, 4]])).unwrap().is_none());
    }

    #[test]
    fn negative_definiteness() {
        assert!(is_negative_definite(&rmat(&[&[-2, 1], &[1, -2]])).unwrap());
        assert!(!is_negative_definite(&rmat(&[&[-1, 0], &[0, 1]])).unwrap());
        assert!(!is_negative_definite(&rmat(&[&[1, 0], &[0, 1]])).unwrap());
        let minors = leading_principal_minors(&rmat(&[&[-2, 1], &[1, -2]])).unwrap();
        assert_eq!(minors, vec![rat(-2), rat(3)]);
    }

    #[test]
    fn shape_errors() {
        let bad = vec![vec![MPoly::one()], vec![MPoly::one(), MPoly::one()]];
        assert!(det_mpoly(&bad).is_err());
    }

    fn arb_rat_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
        proptest::collection::vec(
            proptest::collection::vec((-5i64..6, 1i64..4).prop_map(|(p, q)| ratio(p, q)), n),
            n,
        )
    }

    proptest! {
        #[test]
        fn determinant_is_multiplicative(a in arb_rat_matrix(3), b in arb_rat_matrix(3)) {
            let prod: Vec<Vec<Rat>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| (0..3).map(|k| a[i][k].clone() * b[k][j].clone()).sum())
                        .collect()
                })
                .collect();
            prop_assert_eq!(
                det_rat(&prod).unwrap(),
                det_rat(&a).unwrap() * det_rat(&b).unwrap()
            );
        }

        #[test]
        fn bareiss_agrees_with_rational_elimination(a in arb_rat_matrix(4)) {
            let symbolic: Vec<Vec<MPoly>> = a
                .iter()
                .map(|row| row.iter().map(|r| MPoly::constant(r.clone())).collect())
                .collect();
            prop_assert_eq!(
                det_mpoly(&symbolic).unwrap().as_rat().unwrap(),
                det_rat(&a).unwrap()
            );
        }
    }
}
