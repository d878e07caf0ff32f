//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! All polynomials live in one fixed ambient variable space (see [`Var`]);
//! monomials are dense exponent vectors ordered lexicographically, which is a
//! genuine monomial order, so leading-term division arguments apply.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{format_rat, rat, Rat};

/// Number of variables in the ambient polynomial ring.
pub const NVARS: usize = 35;

static NAMES: [&str; NVARS] = [
    "x0", "x1", "x2", "x3", "x4", "s0", "s1", "s2", "s3", "s4", "s5", "u", "v", "b", "c",
    "lambda", "mu", "n", "t", "w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8", "w9", "w10",
    "w11", "w12", "w13", "w14", "w15",
];

/// A variable of the ambient ring, identified by its index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u8);

/// Ambient coordinates of projective 4-space.
pub const X: [Var; 5] = [Var(0), Var(1), Var(2), Var(3), Var(4)];
/// Coefficients of a quadric relative to the conic net basis.
pub const S: [Var; 6] = [Var(5), Var(6), Var(7), Var(8), Var(9), Var(10)];
/// Homogeneous parameters of the rational normal curve.
pub const U: Var = Var(11);
pub const V: Var = Var(12);
/// Unipotent group parameters.
pub const B: Var = Var(13);
pub const C: Var = Var(14);
/// Normal-form parameters.
pub const LAMBDA: Var = Var(15);
pub const MU: Var = Var(16);
/// Ruled-surface invariant.
pub const N: Var = Var(17);
/// Scaling parameter used when balancing coefficient vectors.
pub const T: Var = Var(18);

/// Index of the first extension variable `w0`.
const W_BASE: usize = 19;
/// Number of extension variables available to towers.
pub const W_COUNT: usize = NVARS - W_BASE;

/// The `i`-th extension variable `w{i}`.
pub fn wvar(i: usize) -> Var {
    assert!(i < W_COUNT, "extension variable pool exhausted");
    Var((W_BASE + i) as u8)
}

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Result<Var> {
        NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| Var(i as u8))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type Mono = Box<[u16]>;

fn mono_one() -> Mono {
    vec![0u16; NVARS].into_boxed_slice()
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| x.checked_add(y).expect("monomial degree overflow"))
        .collect()
}

fn mono_divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b.iter()).all(|(&x, &y)| x <= y)
}

fn mono_div(b: &Mono, a: &Mono) -> Mono {
    b.iter().zip(a.iter()).map(|(&y, &x)| y - x).collect()
}

fn mono_total_degree(m: &Mono) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// Sparse multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(mono_one(), r);
        }
        MPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        MPoly::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        MPoly::monomial(&[(v, 1)], Rat::one())
    }

    /// Single term `coeff * prod v_i^{e_i}`.
    pub fn monomial(powers: &[(Var, u16)], coeff: Rat) -> Self {
        if coeff.is_zero() {
            return MPoly::zero();
        }
        let mut m = mono_one();
        for &(v, e) in powers {
            m[v.index()] += e;
        }
        let mut terms = BTreeMap::new();
        terms.insert(m, coeff);
        MPoly { terms }
    }

    /// Sum of [`MPoly::monomial`] terms; convenient for literals.
    pub fn from_terms(terms: &[(&[(Var, u16)], Rat)]) -> Self {
        let mut acc = MPoly::zero();
        for (powers, coeff) in terms {
            acc += &MPoly::monomial(powers, coeff.clone());
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value if this polynomial is constant.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if mono_total_degree(m) == 0 {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The constant value, or an error naming the offending polynomial.
    pub fn expect_rat(&self) -> Result<Rat> {
        self.as_rat().ok_or_else(|| Error::NotRational(self.clone()))
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(mono_total_degree).max()
    }

    pub fn degree_in(&self, v: Var) -> usize {
        self.terms.keys().map(|m| m[v.index()] as usize).max().unwrap_or(0)
    }

    /// Variables that occur with positive exponent, ascending.
    pub fn vars_used(&self) -> Vec<Var> {
        let mut seen = [false; NVARS];
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| if s { Some(Var(i as u8)) } else { None })
            .collect()
    }

    fn insert_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, r: &Rat) -> MPoly {
        if r.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }

    /// Positive rational content: dividing by it leaves coprime integer
    /// coefficients. Returns one for the zero polynomial.
    pub fn content(&self) -> Rat {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rat::one();
        }
        Rat::new(num, den)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient of `v^k`, a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, v: Var, k: usize) -> MPoly {
        let vi = v.index();
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m[vi] as usize == k {
                let mut m2 = m.clone();
                m2[vi] = 0;
                out.insert_term(m2, c.clone());
            }
        }
        out
    }

    /// Dense coefficient list in `v`, ascending powers; empty for the zero polynomial.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.degree_in(v);
        (0..=d).map(|k| self.coeff_of_power(v, k)).collect()
    }

    /// Rebuilds `sum coeffs[k] * v^k`.
    pub fn from_coeffs(v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut acc = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            acc += &(c * &MPoly::var(v).pow(k as u32));
        }
        acc
    }

    /// Substitutes `repl` for `v`.
    pub fn substitute(&self, v: Var, repl: &MPoly) -> MPoly {
        let vi = v.index();
        let mut powers: Vec<MPoly> = vec![MPoly::one()];
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m[vi] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * repl;
                powers.push(next);
            }
            let mut m2 = m.clone();
            m2[vi] = 0;
            let base = MPoly { terms: BTreeMap::from([(m2, c.clone())]) };
            out += &(&base * &powers[e]);
        }
        out
    }

    /// Simultaneous substitution; replacements may mention the substituted variables.
    pub fn subst_many(&self, repl: &[(Var, MPoly)]) -> MPoly {
        let mut table: [Option<&MPoly>; NVARS] = [None; NVARS];
        for (v, p) in repl {
            table[v.index()] = Some(p);
        }
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            let mut residual = mono_one();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match table[i] {
                    Some(p) => term = &term * &p.pow(e as u32),
                    None => residual[i] = e,
                }
            }
            out += &(&term * &MPoly { terms: BTreeMap::from([(residual, Rat::one())]) });
        }
        out
    }

    /// Evaluates at rational values for the given variables; others stay symbolic.
    pub fn eval(&self, assign: &[(Var, Rat)]) -> MPoly {
        let repl: Vec<(Var, MPoly)> =
            assign.iter().map(|(v, r)| (*v, MPoly::constant(r.clone()))).collect();
        self.subst_many(&repl)
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let vi = v.index();
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m[vi];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[vi] = e - 1;
            out.insert_term(m2, c * rat(e as i64));
        }
        out
    }

    fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact division; errors unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Result<MPoly> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (gm, gc) = divisor.leading().unwrap();
        let gm = gm.clone();
        let gc = gc.clone();
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((fm, fc)) = rem.leading() {
            if !mono_divides(&gm, fm) {
                return Err(Error::InexactDivision(divisor.clone()));
            }
            let qm = mono_div(fm, &gm);
            let qc = fc / &gc;
            let qterm = MPoly { terms: BTreeMap::from([(qm, qc)]) };
            rem -= &(&qterm * divisor);
            quot += &qterm;
        }
        Ok(quot)
    }

    /// Long division by a polynomial monic in `v`; returns `(quotient, remainder)`.
    pub fn divrem_by_monic(&self, modulus: &MPoly, v: Var) -> (MPoly, MPoly) {
        let d = modulus.degree_in(v);
        assert!(d > 0, "modulus must have positive degree in {v}");
        debug_assert_eq!(
            modulus.coeff_of_power(v, d).as_rat(),
            Some(Rat::one()),
            "modulus must be monic in {v}"
        );
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        loop {
            let rd = rem.degree_in(v);
            if rem.is_zero() || rd < d {
                return (quot, rem);
            }
            let lead = rem.coeff_of_power(v, rd);
            let shift = &lead * &MPoly::var(v).pow((rd - d) as u32);
            rem -= &(&shift * modulus);
            quot += &shift;
        }
    }

    /// Iterates `(exponents, coefficient)` pairs in ascending lexicographic order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (&[u16], &Rat)> {
        self.terms.iter().map(|(m, c)| (m.as_ref(), c))
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.insert_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.insert_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Mono, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| {
            mono_total_degree(mb).cmp(&mono_total_degree(ma)).then_with(|| mb.cmp(ma))
        });
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (vi, &e) in m.iter().enumerate() {
                if e == 1 {
                    factors.push(NAMES[vi].to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", NAMES[vi], e));
                }
            }
            if factors.is_empty() {
                f.write_str(&format_rat(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_rat(&abs))?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;
    use proptest::prelude::*;

    fn xp(i: usize) -> MPoly {
        MPoly::var(X[i])
    }

    #[test]
    fn constants_and_vars_display() {
        assert_eq!(MPoly::zero().to_string(), "0");
        assert_eq!(MPoly::int(-3).to_string(), "-3");
        assert_eq!(MPoly::var(LAMBDA).to_string(), "lambda");
        let p = &(&xp(0) * &xp(0)) - &MPoly::monomial(&[(X[1], 1), (X[2], 1)], rat(2));
        assert_eq!(p.to_string(), "x0^2 - 2*x1*x2");
    }

    #[test]
    fn arithmetic_basics() {
        let p = &xp(0) + &MPoly::int(1);
        let q = &xp(0) - &MPoly::int(1);
        let prod = &p * &q;
        let expect = &(&xp(0) * &xp(0)) - &MPoly::one();
        assert_eq!(prod, expect);
        assert!((&prod - &prod).is_zero());
    }

    #[test]
    fn degrees() {
        let p = &(&xp(0).pow(3) * &xp(1)) + &xp(2).pow(2);
        assert_eq!(p.total_degree(), Some(4));
        assert_eq!(p.degree_in(X[0]), 3);
        assert_eq!(p.degree_in(X[1]), 1);
        assert_eq!(p.degree_in(X[3]), 0);
        assert_eq!(MPoly::zero().total_degree(), None);
    }

    #[test]
    fn coefficient_views_roundtrip() {
        let p = MPoly::from_terms(&[
            (&[(B, 3), (S[4], 1)], rat(2)),
            (&[(B, 1), (S[2], 1)], rat(4)),
            (&[(S[1], 1)], rat(1)),
        ]);
        let cs = p.coeffs_in(B);
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[0], MPoly::var(S[1]));
        assert_eq!(cs[2], MPoly::zero());
        assert_eq!(MPoly::from_coeffs(B, &cs), p);
    }

    #[test]
    fn substitution_single() {
        let p = &xp(0).pow(2) + &xp(1);
        let q = p.substitute(X[0], &(&xp(1) + &MPoly::int(1)));
        let expect = MPoly::from_terms(&[
            (&[(X[1], 2)], rat(1)),
            (&[(X[1], 1)], rat(3)),
            (&[], rat(1)),
        ]);
        assert_eq!(q, expect);
    }

    #[test]
    fn substitution_simultaneous_swaps() {
        let p = &xp(0) - &xp(1).pow(2);
        let swapped = p.subst_many(&[(X[0], xp(1)), (X[1], xp(0))]);
        assert_eq!(swapped, &xp(1) - &xp(0).pow(2));
    }

    #[test]
    fn evaluation() {
        let p = &(&xp(0) * &xp(1)) + &MPoly::int(1);
        let v = p.eval(&[(X[0], ratio(1, 2)), (X[1], rat(4))]);
        assert_eq!(v.as_rat(), Some(rat(3)));
    }

    #[test]
    fn derivative_rules() {
        let p = MPoly::from_terms(&[(&[(U, 3)], rat(1)), (&[(U, 1), (V, 2)], rat(5))]);
        let d = p.derivative(U);
        let expect = MPoly::from_terms(&[(&[(U, 2)], rat(3)), (&[(V, 2)], rat(5))]);
        assert_eq!(d, expect);
        assert!(MPoly::int(7).derivative(U).is_zero());
    }

    #[test]
    fn exact_division() {
        let p = &xp(0).pow(2) - &xp(1).pow(2);
        let d = &xp(0) - &xp(1);
        assert_eq!(p.div_exact(&d).unwrap(), &xp(0) + &xp(1));
        assert!(p.div_exact(&(&xp(0) + &MPoly::int(1))).is_err());
        assert!(p.div_exact(&MPoly::zero()).is_err());
    }

    #[test]
    fn monic_division() {
        let modulus = &xp(0).pow(2) + &MPoly::int(1);
        let p = &xp(0).pow(4) + &xp(1);
        let (q, r) = p.divrem_by_monic(&modulus, X[0]);
        assert_eq!(&(&q * &modulus) + &r, p);
        assert!(r.degree_in(X[0]) < 2);
        assert_eq!(r, &xp(1) + &MPoly::int(1));
    }

    #[test]
    fn variable_names_roundtrip() {
        for i in 0..NVARS {
            let v = Var(i as u8);
            assert_eq!(Var::from_name(v.name()).unwrap(), v);
        }
        assert!(Var::from_name("q").is_err());
        assert_eq!(wvar(0).name(), "w0");
        assert_eq!(wvar(15).name(), "w15");
    }

    fn arb_poly() -> impl Strategy<Value = MPoly> {
        let term = (0u16..3, 0u16..3, 0u16..3, -4i64..5).prop_map(|(a, b, c, k)| {
            MPoly::monomial(&[(X[0], a), (X[1], b), (X[2], c)], rat(k))
        });
        proptest::collection::vec(term, 0..6).prop_map(|ts| {
            let mut acc = MPoly::zero();
            for t in ts {
                acc += &t;
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, MPoly::zero());
            prop_assert_eq!(&a * &MPoly::one(), a.clone());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.div_exact(&b).unwrap(), a);
        }

        #[test]
        fn substitution_is_a_homomorphism(a in arb_poly(), b in arb_poly()) {
            let r = &MPoly::var(X[1]) + &MPoly::int(2);
            let lhs = (&a * &b).substitute(X[0], &r);
            let rhs = &a.substitute(X[0], &r) * &b.substitute(X[0], &r);
            prop_assert_eq!(lhs, rhs);
            let lhs = (&a + &b).substitute(X[0], &r);
            let rhs = &a.substitute(X[0], &r) + &b.substitute(X[0], &r);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
