//! Dynamic evaluation in towers of algebraic extensions of the rationals.
//!
//! A [`Tower`] is a triangular chain of monic squarefree moduli in the
//! reserved extension variables `w0, w1, ...`; elements are polynomial
//! representatives kept reduced modulo the chain. Inversion either succeeds
//! or surfaces a nontrivial factor of some modulus as a [`Split`]; callers
//! restart their computation with the factor as a refinement hint, which is
//! the classic split-on-zero-divisor discipline. Every split strictly lowers
//! the degree of one modulus and discards no solutions, so restart loops
//! terminate.

use num_traits::One;

use crate::error::{Error, Result};
use crate::mpoly::{wvar, MPoly, Var, W_COUNT};
use crate::rat::Rat;

/// One extension step: `var` satisfies `modulus = 0`.
#[derive(Clone, Debug)]
pub struct Level {
    pub var: Var,
    pub modulus: MPoly,
}

/// A nontrivial monic factor of the modulus at `level`, found by Euclid.
#[derive(Clone, Debug)]
pub struct Split {
    pub level: usize,
    pub factor: MPoly,
}

/// Result of a tower operation: a value, or a request to refine a modulus.
#[derive(Clone, Debug)]
pub enum Eval<T> {
    Value(T),
    Split(Split),
}

impl<T> Eval<T> {
    /// Unwraps a value; converts a split into an internal error.
    ///
    /// Only for contexts where the caller has already ruled splits out.
    pub fn expect_value(self, what: &str) -> Result<T> {
        match self {
            Eval::Value(v) => Ok(v),
            Eval::Split(s) => Err(Error::Internal(format!(
                "unexpected split at level {} while {what}",
                s.level
            ))),
        }
    }
}

/// Propagates a split out of the current function.
macro_rules! try_eval {
    ($e:expr) => {
        match $e {
            Eval::Value(v) => v,
            Eval::Split(s) => return Ok(Eval::Split(s)),
        }
    };
}
pub(crate) use try_eval;

/// A tower of algebraic extensions over the rationals.
#[derive(Clone, Debug, Default)]
pub struct Tower {
    levels: Vec<Level>,
}

impl Tower {
    pub fn new() -> Self {
        Tower { levels: Vec::new() }
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Product of the degrees of all moduli.
    pub fn total_degree(&self) -> usize {
        self.levels.iter().map(|l| l.modulus.degree_in(l.var)).product()
    }

    /// Reduces by the moduli of levels below `upto`, top-down.
    ///
    /// The rational content is factored out first so the division chain works
    /// on coprime integer coefficients, and multiplied back at the end.
    fn reduce_upto(&self, p: &MPoly, upto: usize) -> MPoly {
        let content = p.content();
        let mut r = if content.is_one() {
            p.clone()
        } else {
            p.scale(&(Rat::one() / content.clone()))
        };
        for level in self.levels[..upto].iter().rev() {
            if r.degree_in(level.var) >= level.modulus.degree_in(level.var) {
                r = r.divrem_by_monic(&level.modulus, level.var).1;
            }
        }
        if content.is_one() {
            r
        } else {
            r.scale(&content)
        }
    }

    /// Canonical representative of `p` in the tower.
    pub fn reduce(&self, p: &MPoly) -> MPoly {
        self.reduce_upto(p, self.levels.len())
    }

    /// Exact zero test.
    pub fn is_zero(&self, p: &MPoly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Exact equality test.
    pub fn equal(&self, p: &MPoly, q: &MPoly) -> bool {
        self.is_zero(&(p - q))
    }

    fn level_of_var(&self, v: Var) -> Option<usize> {
        self.levels.iter().position(|l| l.var == v)
    }

    /// Highest tower level whose variable occurs in `p`, if any.
    fn top_level_in(&self, p: &MPoly) -> Option<usize> {
        p.vars_used().iter().filter_map(|&v| self.level_of_var(v)).max()
    }

    /// Multiplicative inverse of `p` in the tower.
    ///
    /// Returns a [`Split`] when Euclid exposes a zero divisor, and
    /// [`Error::DivisionByZero`] when `p` reduces to zero.
    pub fn invert(&self, p: &MPoly) -> Result<Eval<MPoly>> {
        let a = self.reduce(p);
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let level = match self.top_level_in(&a) {
            Some(l) => l,
            None => {
                let r = a.expect_rat()?;
                return Ok(Eval::Value(MPoly::constant(Rat::one() / r)));
            }
        };
        let var = self.levels[level].var;
        let modulus = self.levels[level].modulus.clone();

        // Work with the primitive part; fold its content into the answer.
        let content = a.content();
        let a = if content.is_one() {
            a
        } else {
            a.scale(&(Rat::one() / content.clone()))
        };
        let restore = |inv: MPoly| {
            if content.is_one() {
                inv
            } else {
                inv.scale(&(Rat::one() / content.clone()))
            }
        };

        // Extended Euclid in `var` over the lower tower, tracking u with
        // r == u * a modulo (modulus, lower moduli). Remainders are kept
        // primitive (their content moved onto the cofactor) to stop
        // coefficient blowup along the remainder sequence.
        let mut r0 = modulus.clone();
        let mut u0 = MPoly::zero();
        let mut r1 = a.clone();
        let mut u1 = MPoly::one();
        loop {
            r1 = self.reduce_upto(&r1, level);
            if !r1.is_zero() {
                let c = r1.content();
                if !c.is_one() {
                    let inv_c = Rat::one() / c;
                    r1 = r1.scale(&inv_c);
                    u1 = u1.scale(&inv_c);
                }
            }
            if r1.is_zero() {
                break;
            }
            let d1 = r1.degree_in(var);
            if d1 == 0 {
                // The gcd is a unit of the lower tower; finish by recursion.
                let inv = try_eval!(self.invert(&r1)?);
                return Ok(Eval::Value(restore(self.reduce(&(&u1 * &inv)))));
            }
            let lc = r1.coeff_of_power(var, d1);
            let inv_lc = try_eval!(self.invert(&lc)?);
            let r1m = self.reduce_upto(&(&r1 * &inv_lc), level);
            let u1m = self.reduce(&(&u1 * &inv_lc));
            let (q, r2) = r0.divrem_by_monic(&r1m, var);
            let u2 = self.reduce(&(&u0 - &(&q * &u1m)));
            r0 = r1m;
            u0 = u1m;
            r1 = self.reduce_upto(&r2, level);
            u1 = u2;
        }
        let d0 = r0.degree_in(var);
        debug_assert!(d0 < modulus.degree_in(var), "gcd cannot reach the modulus");
        if d0 == 0 {
            Ok(Eval::Value(restore(self.reduce(&u0))))
        } else {
            Ok(Eval::Split(Split { level, factor: r0 }))
        }
    }

    /// Inverse if `p` is a unit, `None` if `p` is zero; splits propagate.
    pub fn try_invert(&self, p: &MPoly) -> Result<Eval<Option<MPoly>>> {
        if self.is_zero(p) {
            return Ok(Eval::Value(None));
        }
        Ok(match self.invert(p)? {
            Eval::Value(inv) => Eval::Value(Some(inv)),
            Eval::Split(s) => Eval::Split(s),
        })
    }

    /// Monic gcd of `f` and `g` as polynomials in `v` over the tower.
    ///
    /// `v` must not be a tower variable; zero divisors met along the way
    /// surface as splits.
    pub fn gcd_univar(&self, f: &MPoly, g: &MPoly, v: Var) -> Result<Eval<MPoly>> {
        debug_assert!(self.level_of_var(v).is_none(), "{v} is a tower variable");
        let mut a = self.reduce(f);
        let mut b = self.reduce(g);
        if a.is_zero() && b.is_zero() {
            return Err(Error::Internal("gcd of two zero polynomials".into()));
        }
        loop {
            if b.is_zero() {
                return self.monicize(&a, v);
            }
            if b.degree_in(v) == 0 {
                // A constant: a unit forces gcd 1, a zero divisor splits.
                try_eval!(self.invert(&b)?);
                return Ok(Eval::Value(MPoly::one()));
            }
            let bm = try_eval!(self.monicize(&b, v)?);
            let (_, r) = a.divrem_by_monic(&bm, v);
            a = bm;
            b = self.reduce(&r);
            if !b.is_zero() {
                let c = b.content();
                if !c.is_one() {
                    b = b.scale(&(Rat::one() / c));
                }
            }
        }
    }

    /// Scales a nonzero polynomial in `v` to make it monic in `v`.
    fn monicize(&self, p: &MPoly, v: Var) -> Result<Eval<MPoly>> {
        let d = p.degree_in(v);
        let lc = p.coeff_of_power(v, d);
        let inv = try_eval!(self.invert(&lc)?);
        Ok(Eval::Value(self.reduce(&(p * &inv))))
    }

    /// Adjoins a root of `poly` (a polynomial in `v` over the tower).
    ///
    /// The modulus is made monic and squarefree, renamed into the next free
    /// extension variable, and checked against `hint` when one is supplied:
    /// a hint must be a factor of the computed modulus (it records a split
    /// discovered on a previous attempt) and replaces it.
    pub fn adjoin(&mut self, poly: &MPoly, v: Var, hint: Option<&MPoly>) -> Result<Eval<Var>> {
        let p = self.reduce(poly);
        if p.degree_in(v) == 0 {
            return Err(Error::Internal(format!("adjoining a root of a constant in {v}")));
        }
        let monic = try_eval!(self.monicize(&p, v)?);
        let deriv = monic.derivative(v);
        let gcd = try_eval!(self.gcd_univar(&monic, &deriv, v)?);
        let squarefree = if gcd.degree_in(v) == 0 {
            monic
        } else {
            let (q, r) = monic.divrem_by_monic(&gcd, v);
            if !self.is_zero(&r) {
                return Err(Error::Internal("gcd does not divide its input".into()));
            }
            self.reduce(&q)
        };
        if self.levels.len() >= W_COUNT {
            return Err(Error::VariablePoolExhausted);
        }
        let fresh = wvar(self.levels.len());
        let mut modulus = squarefree.substitute(v, &MPoly::var(fresh));
        if let Some(h) = hint {
            let (_, r) = modulus.divrem_by_monic(h, fresh);
            if !self.is_zero(&r) {
                return Err(Error::Internal("refinement hint does not divide the modulus".into()));
            }
            modulus = self.reduce(h);
        }
        if modulus.degree_in(fresh) == 0 {
            return Err(Error::Internal("modulus collapsed to a constant".into()));
        }
        self.levels.push(Level { var: fresh, modulus });
        Ok(Eval::Value(fresh))
    }
}
