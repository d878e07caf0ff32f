//! The SL2 action on quadric sections of the quartic rational normal curve.
//!
//! Points of the ambient P^4 carry the fourth symmetric power of the
//! defining SL2 representation. The six-dimensional space of quadrics
//! through the quartic curve has the fixed basis `f0..f5` used throughout;
//! every action here is derived by substituting the symmetric-power matrix
//! into the quadratic form and re-expanding in that basis, never by
//! transcribing coefficient formulas.

use crate::error::{Error, Result};
use crate::matrix::det_mpoly;
use crate::mpoly::{MPoly, Var, X};
use crate::rat::Rat;
use num_traits::Zero;

/// Basis of the quadrics through the quartic curve.
///
/// `f5` spans the invariant line; `f0..f4` cut out the curve itself.
pub fn conic_basis() -> [MPoly; 6] {
    let x = |i: usize| MPoly::var(X[i]);
    [
        &(&x(3) * &x(3)) - &(&x(2) * &x(4)),
        &(&x(2) * &x(3)) - &(&x(1) * &x(4)),
        &(&x(2) * &x(2)) - &(&x(0) * &x(4)),
        &(&x(1) * &x(2)) - &(&x(0) * &x(3)),
        &(&x(1) * &x(1)) - &(&x(0) * &x(2)),
        &(&(&x(2) * &x(2)).scale(&Rat::from_integer(3.into()))
            - &(&x(1) * &x(3)).scale(&Rat::from_integer(4.into())))
            + &(&x(0) * &x(4)),
    ]
}

/// A 2x2 matrix of determinant one, possibly with symbolic entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2 {
    pub a: MPoly,
    pub b: MPoly,
    pub c: MPoly,
    pub d: MPoly,
}

impl Sl2 {
    /// Checks the determinant is identically one.
    pub fn new(a: MPoly, b: MPoly, c: MPoly, d: MPoly) -> Result<Self> {
        let det = &(&a * &d) - &(&b * &c);
        if det != MPoly::one() {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Sl2 { a, b, c, d })
    }

    /// Skips the determinant check, for formal identities.
    pub fn new_unchecked(a: MPoly, b: MPoly, c: MPoly, d: MPoly) -> Self {
        Sl2 { a, b, c, d }
    }

    pub fn from_rats(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Result<Self> {
        Self::new(
            MPoly::constant(a.clone()),
            MPoly::constant(b.clone()),
            MPoly::constant(c.clone()),
            MPoly::constant(d.clone()),
        )
    }

    /// Upper unipotent `(1, b; 0, 1)`.
    pub fn upper(b: &MPoly) -> Self {
        Sl2::new_unchecked(MPoly::one(), b.clone(), MPoly::zero(), MPoly::one())
    }

    /// Lower unipotent `(1, 0; c, 1)`.
    pub fn lower(c: &MPoly) -> Self {
        Sl2::new_unchecked(MPoly::one(), MPoly::zero(), c.clone(), MPoly::one())
    }

    /// Shear `(1, b; c, 1 + bc)`, unimodular for any entries.
    pub fn shear(b: &MPoly, c: &MPoly) -> Self {
        Sl2::new_unchecked(
            MPoly::one(),
            b.clone(),
            c.clone(),
            &MPoly::one() + &(b * c),
        )
    }

    /// Diagonal `(m, 0; 0, 1/m)`.
    pub fn diag(m: &Rat) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Sl2::new_unchecked(
            MPoly::constant(m.clone()),
            MPoly::zero(),
            MPoly::zero(),
            MPoly::constant(Rat::from_integer(1.into()) / m),
        ))
    }

    /// Matrix product.
    pub fn mul(&self, rhs: &Sl2) -> Sl2 {
        Sl2 {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }
}

/// Fourth symmetric power of `g`, acting on the coordinates of P^4.
///
/// Row `i` lists the expansion of `(a u + b v)^(4-i) (c u + d v)^i` in the
/// monomials `u^(4-j) v^j`, so the matrix is derived from the action on
/// binary quartics rather than written out.
pub fn sym4(g: &Sl2) -> [[MPoly; 5]; 5] {
    use crate::mpoly::{U, V};
    for entry in [&g.a, &g.b, &g.c, &g.d] {
        debug_assert!(
            !entry.vars_used().contains(&U) && !entry.vars_used().contains(&V),
            "matrix entries may not involve the binary-form variables"
        );
    }
    let row_form = |i: u32| {
        let lin_top = &(&g.a * &MPoly::var(U)) + &(&g.b * &MPoly::var(V));
        let lin_bot = &(&g.c * &MPoly::var(U)) + &(&g.d * &MPoly::var(V));
        &lin_top.pow(4 - i) * &lin_bot.pow(i)
    };
    core::array::from_fn(|i| {
        let form = row_form(i as u32);
        core::array::from_fn(|j| form.coeff_of_power(U, 4 - j).coeff_of_power(V, j))
    })
}

/// The quadratic form with coefficient vector `s` in the fixed basis.
pub fn expand(s: &[MPoly; 6]) -> MPoly {
    let basis = conic_basis();
    let mut acc = MPoly::zero();
    for (si, fi) in s.iter().zip(basis.iter()) {
        acc += &(si * fi);
    }
    acc
}

/// Coefficients of a quadratic form in the fixed basis.
///
/// Errors with the nonzero residual when the form is not in the span.
pub fn express_in_basis(q: &MPoly) -> Result<[MPoly; 6]> {
    let coeff2 = |i: usize, j: usize| {
        if i == j {
            q.coeff_of_power(X[i], 2)
        } else {
            q.coeff_of_power(X[i], 1).coeff_of_power(X[j], 1)
        }
    };
    let a0 = coeff2(3, 3);
    let a1 = coeff2(2, 3);
    let a3 = coeff2(1, 2);
    let a4 = coeff2(1, 1);
    let a5 = coeff2(1, 3).scale(&crate::rat::ratio(-1, 4));
    let a2 = &coeff2(2, 2) - &a5.scale(&crate::rat::rat(3));
    let s = [a0, a1, a2, a3, a4, a5];
    let residual = q - &expand(&s);
    if !residual.is_zero() {
        return Err(Error::NotInSpan(residual));
    }
    Ok(s)
}

/// Pullback of the coefficient vector under `g`: substitutes the symmetric
/// power of `g` into the form and re-expands. This is a right action.
pub fn pullback(s: &[MPoly; 6], g: &Sl2) -> Result<[MPoly; 6]> {
    let m = sym4(g);
    let repl: Vec<(Var, MPoly)> = X
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut acc = MPoly::zero();
            for (j, xj) in X.iter().enumerate() {
                acc += &(&m[i][j] * &MPoly::var(*xj));
            }
            (*xi, acc)
        })
        .collect();
    express_in_basis(&expand(s).subst_many(&repl))
}

/// Coefficient action of the involution reversing the coordinates.
pub fn iota(s: &[MPoly; 6]) -> [MPoly; 6] {
    let repl: Vec<(Var, MPoly)> =
        X.iter().enumerate().map(|(i, xi)| (*xi, MPoly::var(X[4 - i]))).collect();
    express_in_basis(&expand(s).subst_many(&repl))
        .expect("coordinate reversal preserves the span")
}

/// Coefficient action of the torus element scaling `x_i` by `lam^i`.
///
/// `lam` may be symbolic; the identically zero scalar is rejected.
pub fn cstar(s: &[MPoly; 6], lam: &MPoly) -> Result<[MPoly; 6]> {
    if lam.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let repl: Vec<(Var, MPoly)> = X
        .iter()
        .enumerate()
        .map(|(i, xi)| (*xi, &lam.pow(i as u32) * &MPoly::var(X[i])))
        .collect();
    express_in_basis(&expand(s).subst_many(&repl))
}

/// Coefficient action of the sign involution `x1 -> -x1, x3 -> -x3`.
pub fn tau(s: &[MPoly; 6]) -> [MPoly; 6] {
    cstar(s, &MPoly::int(-1)).expect("scalar is a unit")
}

/// Weight of each basis coefficient under [`cstar`], read off by acting
/// with a symbolic scalar on a symbolic coefficient vector.
pub fn cstar_weights() -> [usize; 6] {
    use crate::mpoly::{LAMBDA, S};
    let s: [MPoly; 6] = core::array::from_fn(|i| MPoly::var(S[i]));
    let acted = cstar(&s, &MPoly::var(LAMBDA)).expect("symbolic scalar");
    core::array::from_fn(|i| acted[i].degree_in(LAMBDA))
}

/// Determinant of the matrix of second partials of the quadratic form.
pub fn hessian_det(s: &[MPoly; 6]) -> MPoly {
    let q = expand(s);
    let rows: Vec<Vec<MPoly>> = X
        .iter()
        .map(|xi| X.iter().map(|xj| q.derivative(*xi).derivative(*xj)).collect())
        .collect();
    det_mpoly(&rows).expect("square matrix")
}

/// The two irreducible factors of the symbolic Hessian determinant, which
/// satisfies `hessian_det = -2 * F1 * F2`.
pub fn hessian_factors() -> (MPoly, MPoly) {
    use crate::mpoly::S;
    let sv = |i: usize| MPoly::var(S[i]);
    let m = |c: i64, parts: &[(usize, u32)]| {
        let mut acc = MPoly::int(c);
        for &(i, e) in parts {
            acc = &acc * &sv(i).pow(e);
        }
        acc
    };
    let f1 = [
        m(1, &[(0, 1), (4, 1)]),
        m(-1, &[(1, 1), (3, 1)]),
        m(1, &[(2, 2)]),
        m(2, &[(2, 1), (5, 1)]),
        m(-3, &[(5, 2)]),
    ]
    .into_iter()
    .fold(MPoly::zero(), |a, b| &a + &b);
    let f2 = [
        m(4, &[(0, 1), (2, 1), (4, 1)]),
        m(-1, &[(0, 1), (3, 2)]),
        m(-4, &[(0, 1), (4, 1), (5, 1)]),
        m(-1, &[(1, 2), (4, 1)]),
        m(4, &[(1, 1), (3, 1), (5, 1)]),
        m(-16, &[(2, 1), (5, 2)]),
        m(16, &[(5, 3)]),
    ]
    .into_iter()
    .fold(MPoly::zero(), |a, b| &a + &b);
    (f1, f2)
}

/// The cubic hypersurface in the coefficient space cut out by the
/// catalecticant-type determinant of the net spanned by `f0..f4`.
pub fn v3_cubic() -> MPoly {
    let x = |i: usize| MPoly::var(X[i]);
    let mut acc = &(&x(0) * &x(3)) * &x(3);
    acc -= &(&(&x(1) * &x(2)) * &x(3)).scale(&crate::rat::rat(2));
    acc -= &(&(&x(0) * &x(2)) * &x(4));
    acc += &(&(&x(1) * &x(1)) * &x(4));
    acc += &(&(&x(2) * &x(2)) * &x(2));
    acc
}

/// Membership of a point in the cubic hypersurface [`v3_cubic`].
pub fn v3_member(p: &[Rat; 5]) -> bool {
    eval_at_point(&v3_cubic(), p).is_zero()
}

/// The point of the quartic curve with parameters `(u, v)`.
pub fn c4_point(u: &Rat, v: &Rat) -> Result<[Rat; 5]> {
    if u.is_zero() && v.is_zero() {
        return Err(Error::Internal("(0, 0) is not a point of P^1".into()));
    }
    Ok(core::array::from_fn(|i| {
        let mut acc = Rat::from_integer(1.into());
        for _ in 0..(4 - i) {
            acc *= u;
        }
        for _ in 0..i {
            acc *= v;
        }
        acc
    }))
}

/// Whether a point of P^4 lies on the quartic curve.
pub fn is_on_c4(p: &[Rat; 5]) -> bool {
    conic_basis()[..5].iter().all(|f| eval_at_point(f, p).is_zero())
}

/// Whether a form in the coordinates vanishes identically on the curve,
/// tested by substituting the parametrization.
pub fn vanishes_on_c4(q: &MPoly) -> bool {
    use crate::mpoly::{U, V};
    let repl: Vec<(Var, MPoly)> = X
        .iter()
        .enumerate()
        .map(|(i, xi)| (*xi, &MPoly::var(U).pow(4 - i as u32) * &MPoly::var(V).pow(i as u32)))
        .collect();
    q.subst_many(&repl).is_zero()
}

fn eval_at_point(f: &MPoly, p: &[Rat; 5]) -> Rat {
    let binds: Vec<(Var, Rat)> = X.iter().copied().zip(p.iter().cloned()).collect();
    f.eval(&binds).as_rat().expect("point evaluation binds all variables")
}

/// Lifts a rational coefficient vector into symbolic form.
pub fn coeffs_to_mpoly(s: &[Rat; 6]) -> [MPoly; 6] {
    core::array::from_fn(|i| MPoly::constant(s[i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{B, C, LAMBDA, MU, S};
    use crate::rat::{rat, ratio};

    fn svec() -> [MPoly; 6] {
        core::array::from_fn(|i| MPoly::var(S[i]))
    }

    fn sv(i: usize) -> MPoly {
        MPoly::var(S[i])
    }

    fn rationals(v: [i64; 6]) -> [Rat; 6] {
        core::array::from_fn(|i| rat(v[i]))
    }

    #[test]
    fn sym4_matches_displayed_matrix() {
        // Formal entries: the identity holds without the determinant relation.
        let a = MPoly::var(LAMBDA);
        let b = MPoly::var(B);
        let c = MPoly::var(C);
        let d = MPoly::var(MU);
        let g = Sl2::new_unchecked(a.clone(), b.clone(), c.clone(), d.clone());
        let m = sym4(&g);
        let p = |terms: &[(i64, [u32; 4])]| {
            let mut acc = MPoly::zero();
            for &(k, [ea, eb, ec, ed]) in terms {
                let mono =
                    &(&a.pow(ea) * &b.pow(eb)) * &(&c.pow(ec) * &d.pow(ed));
                acc += &mono.scale(&rat(k));
            }
            acc
        };
        let expected = [
            [
                p(&[(1, [4, 0, 0, 0])]),
                p(&[(4, [3, 1, 0, 0])]),
                p(&[(6, [2, 2, 0, 0])]),
                p(&[(4, [1, 3, 0, 0])]),
                p(&[(1, [0, 4, 0, 0])]),
            ],
            [
                p(&[(1, [3, 0, 1, 0])]),
                p(&[(1, [3, 0, 0, 1]), (3, [2, 1, 1, 0])]),
                p(&[(3, [2, 1, 0, 1]), (3, [1, 2, 1, 0])]),
                p(&[(3, [1, 2, 0, 1]), (1, [0, 3, 1, 0])]),
                p(&[(1, [0, 3, 0, 1])]),
            ],
            [
                p(&[(1, [2, 0, 2, 0])]),
                p(&[(2, [2, 0, 1, 1]), (2, [1, 1, 2, 0])]),
                p(&[(1, [2, 0, 0, 2]), (4, [1, 1, 1, 1]), (1, [0, 2, 2, 0])]),
                p(&[(2, [1, 1, 0, 2]), (2, [0, 2, 1, 1])]),
                p(&[(1, [0, 2, 0, 2])]),
            ],
            [
                p(&[(1, [1, 0, 3, 0])]),
                p(&[(3, [1, 0, 2, 1]), (1, [0, 1, 3, 0])]),
                p(&[(3, [1, 0, 1, 2]), (3, [0, 1, 2, 1])]),
                p(&[(1, [1, 0, 0, 3]), (3, [0, 1, 1, 2])]),
                p(&[(1, [0, 1, 0, 3])]),
            ],
            [
                p(&[(1, [0, 0, 4, 0])]),
                p(&[(4, [0, 0, 3, 1])]),
                p(&[(6, [0, 0, 2, 2])]),
                p(&[(4, [0, 0, 1, 3])]),
                p(&[(1, [0, 0, 0, 4])]),
            ],
        ];
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m[i][j], expected[i][j], "entry ({i}, {j})");
            }
        }
    }

    #[test]
    fn sym4_is_multiplicative_and_unimodular() {
        let g = Sl2::from_rats(&rat(2), &rat(3), &rat(1), &rat(2)).unwrap();
        let h = Sl2::from_rats(&rat(1), &rat(-1), &rat(2), &rat(-1)).unwrap();
        let mg = sym4(&g);
        let mh = sym4(&h);
        let mgh = sym4(&g.mul(&h));
        for i in 0..5 {
            for j in 0..5 {
                let mut acc = MPoly::zero();
                for (k, row) in mh.iter().enumerate() {
                    acc += &(&mg[i][k] * &row[j]);
                }
                assert_eq!(acc, mgh[i][j]);
            }
        }
        let rows: Vec<Vec<MPoly>> = mg.iter().map(|r| r.to_vec()).collect();
        assert_eq!(det_mpoly(&rows).unwrap(), MPoly::one());
    }

    #[test]
    fn non_unimodular_rejected() {
        assert!(matches!(
            Sl2::from_rats(&rat(2), &rat(0), &rat(0), &rat(2)),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn express_roundtrip_and_span_error() {
        let s = svec();
        let q = expand(&s);
        assert_eq!(express_in_basis(&q).unwrap(), s);
        let off = &q + &(&MPoly::var(X[0]) * &MPoly::var(X[0]));
        assert!(matches!(express_in_basis(&off), Err(Error::NotInSpan(_))));
    }

    #[test]
    fn upper_unipotent_coefficient_formulas() {
        let mut s = svec();
        s[1] = MPoly::one();
        let g = Sl2::upper(&MPoly::var(B));
        let p = pullback(&s, &g).unwrap();
        let b = MPoly::var(B);
        let expect_s1 = &(&(&b.pow(3).scale(&rat(2)) * &sv(4))
            + &(&b.pow(2).scale(&rat(3)) * &sv(3)))
            + &(&(&b.scale(&rat(4)) * &sv(2)) + &MPoly::one());
        assert_eq!(p[1], expect_s1);
        assert_eq!(p[3], &sv(3) + &(&b.scale(&rat(2)) * &sv(4)));
        assert_eq!(p[4], sv(4));
    }

    #[test]
    fn lower_unipotent_full_formulas() {
        let mut s = svec();
        s[1] = MPoly::one();
        s[2] = MPoly::zero();
        s[3] = MPoly::zero();
        s[4] = MPoly::zero();
        let c = MPoly::var(C);
        let p = pullback(&s, &Sl2::lower(&c)).unwrap();
        assert_eq!(p[0], sv(0));
        assert_eq!(p[1], &(&c.scale(&rat(2)) * &sv(0)) + &MPoly::one());
        assert_eq!(
            p[2],
            &(&c.pow(2).scale(&ratio(3, 2)) * &sv(0)) + &c.scale(&ratio(3, 2))
        );
        assert_eq!(
            p[3],
            &(&c.pow(3).scale(&rat(2)) * &sv(0)) + &c.pow(2).scale(&rat(3))
        );
        assert_eq!(p[4], &(&c.pow(4) * &sv(0)) + &c.pow(3).scale(&rat(2)));
        assert_eq!(
            p[5],
            &(&(&c.pow(2).scale(&ratio(1, 2)) * &sv(0)) + &c.scale(&ratio(1, 2))) + &sv(5)
        );
    }

    #[test]
    fn involutions_and_weights() {
        let s = svec();
        let i = iota(&s);
        assert_eq!(i, [sv(4), sv(3), sv(2), sv(1), sv(0), sv(5)]);
        let t = tau(&s);
        assert_eq!(t, [sv(0), -&sv(1), sv(2), -&sv(3), sv(4), sv(5)]);
        assert_eq!(cstar_weights(), [6, 5, 4, 3, 2, 4]);
        assert!(cstar(&s, &MPoly::zero()).is_err());
    }

    #[test]
    fn pullback_is_a_right_action() {
        let s: [MPoly; 6] =
            core::array::from_fn(|i| MPoly::constant(ratio(i as i64 + 1, 3)));
        let g = Sl2::from_rats(&rat(1), &rat(2), &rat(1), &rat(3)).unwrap();
        let h = Sl2::from_rats(&rat(3), &rat(1), &rat(5), &rat(2)).unwrap();
        let two_step = pullback(&pullback(&s, &g).unwrap(), &h).unwrap();
        let one_step = pullback(&s, &g.mul(&h)).unwrap();
        assert_eq!(two_step, one_step);
    }

    #[test]
    fn hessian_factorization() {
        let s = svec();
        let (f1, f2) = hessian_factors();
        let expect = (&f1 * &f2).scale(&rat(-2));
        assert_eq!(hessian_det(&s), expect);
    }

    #[test]
    fn hessian_specialization_front_zero() {
        let mut s = svec();
        s[0] = MPoly::zero();
        s[1] = MPoly::zero();
        let det = hessian_det(&s);
        let expect = &(&sv(5).pow(2).scale(&rat(32))
            * &(&sv(5).scale(&rat(3)) + &sv(2)))
            * &(&sv(2) - &sv(5)).pow(2);
        assert_eq!(det, expect);
        assert_eq!(det.degree_in(S[3]), 0);
        assert_eq!(det.degree_in(S[4]), 0);
    }

    #[test]
    fn hessian_case_patterns() {
        let mu = MPoly::var(MU);
        let lam = MPoly::var(LAMBDA);
        let one = MPoly::one();
        let zero = MPoly::zero();
        let det1 = hessian_det(&[
            mu.clone(), zero.clone(), zero.clone(), zero.clone(), mu.clone(), one.clone(),
        ]);
        let expect1 = (&(&mu.pow(2) - &MPoly::int(3)) * &(&mu.pow(2) - &MPoly::int(4)))
            .scale(&rat(8));
        assert_eq!(det1, expect1);
        let det4 = hessian_det(&[
            one.clone(), zero.clone(), MPoly::int(3), zero.clone(), zero.clone(), lam.clone(),
        ]);
        let expect4 = (&(&lam.pow(2) * &(&lam - &MPoly::int(3)).pow(2)) * &(&lam + &one))
            .scale(&rat(96));
        assert_eq!(det4, expect4);
        for s in [
            [1, 0, 0, 0, 0, 1],
            [0, 1, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 1],
        ] {
            let det = hessian_det(&coeffs_to_mpoly(&rationals(s)));
            assert_eq!(det, MPoly::int(96), "pattern {s:?}");
        }
    }

    #[test]
    fn cubic_hypersurface_membership() {
        assert!(v3_member(&[rat(1), rat(0), rat(0), rat(0), rat(1)]));
        assert!(!v3_member(&[rat(0), rat(1), rat(1), rat(1), rat(0)]));
        assert!(vanishes_on_c4(&v3_cubic()));
    }

    #[test]
    fn quartic_curve_points() {
        let p = c4_point(&rat(2), &rat(3)).unwrap();
        assert_eq!(p, [rat(16), rat(24), rat(36), rat(54), rat(81)]);
        assert!(is_on_c4(&p));
        assert!(!is_on_c4(&[rat(1), rat(0), rat(0), rat(0), rat(1)]));
        for f in conic_basis() {
            assert!(vanishes_on_c4(&f));
        }
        assert!(c4_point(&rat(0), &rat(0)).is_err());
    }

    #[test]
    fn degeneration_scaling_pattern() {
        // The torus action contracts the front coefficients at known rates.
        let mut s = svec();
        s[3] = MPoly::zero();
        s[4] = MPoly::zero();
        s[5] = MPoly::one();
        let acted = cstar(&s, &MPoly::var(LAMBDA)).unwrap();
        let lam = MPoly::var(LAMBDA);
        assert_eq!(acted[0], &lam.pow(6) * &sv(0));
        assert_eq!(acted[1], &lam.pow(5) * &sv(1));
        assert_eq!(acted[2], &lam.pow(4) * &sv(2));
        assert_eq!(acted[5], lam.pow(4));
    }
}
