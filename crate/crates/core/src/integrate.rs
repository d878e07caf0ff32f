//! Exact definite integration of polynomials, with polynomial bounds.

use num_traits::One;

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Var};
use crate::rat::{rat, Rat};

/// Antiderivative of `p` in `v` with zero constant term.
pub fn antiderivative(p: &MPoly, v: Var) -> MPoly {
    let coeffs = p.coeffs_in(v);
    let mut lifted = vec![MPoly::zero()];
    for (k, c) in coeffs.iter().enumerate() {
        lifted.push(c.scale(&(Rat::one() / rat((k + 1) as i64))));
    }
    MPoly::from_coeffs(v, &lifted)
}

/// Definite integral of `p` in `v` from `lo` to `hi`.
///
/// Bounds may involve other variables but not `v` itself.
pub fn integrate(p: &MPoly, v: Var, lo: &MPoly, hi: &MPoly) -> Result<MPoly> {
    if lo.degree_in(v) > 0 || hi.degree_in(v) > 0 {
        return Err(Error::BoundContainsVariable);
    }
    let f = antiderivative(p, v);
    Ok(&f.substitute(v, hi) - &f.substitute(v, lo))
}

/// Iterated integral; `layers` lists `(variable, lower, upper)` innermost first.
pub fn integrate_iterated(p: &MPoly, layers: &[(Var, MPoly, MPoly)]) -> Result<MPoly> {
    let mut acc = p.clone();
    for (v, lo, hi) in layers {
        acc = integrate(&acc, *v, lo, hi)?;
    }
    Ok(acc)
}
