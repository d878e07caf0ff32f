//! Normal forms of smooth quadrics through the quartic rational normal curve.
//!
//! [`classify`] moves a rational coefficient vector into one of five normal
//! forms using unipotent, torus, and coordinate-reversal moves. Root choices
//! live in an extension [`Tower`]; every branch decision is made by an exact
//! inversion, so a zero divisor can never be misread as a unit. When an
//! inversion splits a modulus the driver restarts from scratch with the
//! discovered factor as a refinement hint. Each restart strictly reduces the
//! degree of one modulus and leaves lower levels untouched, which bounds the
//! number of restarts by the (lexicographic) degree tuple of the tower.
//!
//! The emitted [`Witness`] replays against the input by applying the recorded
//! moves and comparing with the normal form projectively.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::action::{
    coeffs_to_mpoly, cstar, expand, express_in_basis, hessian_factors, iota, pullback, Sl2,
};
use crate::error::{Error, Result};
use crate::ext::{try_eval, Eval, Tower};
use crate::mpoly::{MPoly, Var, B, C, LAMBDA, S, T, X};
use crate::rat::{rat, ratio, Rat};
use crate::resultant::resultant;

const MAX_RESTARTS: usize = 64;

fn binom(n: usize, k: usize) -> Rat {
    let mut acc = rat(1);
    for i in 0..k {
        acc = acc * ratio((n - i) as i64, (i + 1) as i64);
    }
    acc
}

/// The degree-four symmetric-power matrix of `g`, reduced entrywise so that
/// powers of tower-element parameters never grow past the tower degree.
fn sym4_reduced(tower: &Tower, g: &Sl2) -> [[MPoly; 5]; 5] {
    let powers = |p: &MPoly| -> [MPoly; 5] {
        let mut out: [MPoly; 5] = core::array::from_fn(|_| MPoly::one());
        for k in 1..5 {
            out[k] = tower.reduce(&(&out[k - 1] * p));
        }
        out
    };
    let pa = powers(&g.a);
    let pb = powers(&g.b);
    let pc = powers(&g.c);
    let pd = powers(&g.d);
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let mut entry = MPoly::zero();
            for k in 0..=j.min(4 - i) {
                let l = j - k;
                if l > i {
                    continue;
                }
                let left = tower.reduce(&(&pa[4 - i - k] * &pb[k]));
                let right = tower.reduce(&(&pc[i - l] * &pd[l]));
                let coef = binom(4 - i, k) * binom(i, l);
                entry += &tower.reduce(&(&left * &right)).scale(&coef);
            }
            entry
        })
    })
}

/// Coefficient of the monomial `x_k x_l` in a quadratic form.
fn quadric_coeff(q: &MPoly, k: usize, l: usize) -> MPoly {
    if k == l {
        q.coeff_of_power(X[k], 2)
    } else {
        q.coeff_of_power(X[k], 1).coeff_of_power(X[l], 1)
    }
}

/// Pullback along `g` with reduction interleaved at every product, keeping
/// intermediate sizes bounded by the tower degree.
fn apply_act(tower: &Tower, s: &[MPoly; 6], g: &Sl2) -> Result<[MPoly; 6]> {
    let m = sym4_reduced(tower, g);
    let y: [MPoly; 5] = core::array::from_fn(|i| {
        let mut acc = MPoly::zero();
        for j in 0..5 {
            acc += &(&m[i][j] * &MPoly::var(X[j]));
        }
        acc
    });
    let q = expand(s);
    let mut image = MPoly::zero();
    for k in 0..5 {
        for l in k..5 {
            let c = quadric_coeff(&q, k, l);
            if c.is_zero() {
                continue;
            }
            let yy = tower.reduce(&(&y[k] * &y[l]));
            image += &(&tower.reduce(&c) * &yy);
        }
    }
    let mut out = express_in_basis(&image)?;
    for slot in out.iter_mut() {
        *slot = tower.reduce(slot);
    }
    Ok(out)
}

/// Applies one recorded move over a tower, with interleaved reduction.
fn apply_move(tower: &Tower, s: &[MPoly; 6], mv: &Move) -> Result<[MPoly; 6]> {
    let mut out = match mv {
        Move::Act(g) => apply_act(tower, s, g)?,
        Move::Iota => iota(s),
        Move::Scale(l) => cstar(s, l)?,
    };
    for slot in out.iter_mut() {
        *slot = tower.reduce(slot);
    }
    Ok(out)
}

/// One recorded step of a normalization chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Move {
    /// Pullback along a determinant-one matrix (entries may be tower elements).
    Act(Sl2),
    /// The coordinate reversal `x_i -> x_{4-i}`.
    Iota,
    /// The torus element scaling `x_i` by the i-th power of the scalar.
    Scale(MPoly),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Act(g) => write!(f, "act[{}; {}; {}; {}]", g.a, g.b, g.c, g.d),
            Move::Iota => write!(f, "reverse"),
            Move::Scale(l) => write!(f, "scale[{l}]"),
        }
    }
}

/// GIT status of the orbit of a normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GitStatus {
    Stable,
    Polystable,
    StrictlySemistable,
}

impl fmt::Display for GitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GitStatus::Stable => write!(f, "stable"),
            GitStatus::Polystable => write!(f, "polystable"),
            GitStatus::StrictlySemistable => write!(f, "strictly semistable"),
        }
    }
}

/// Which of the five normal-form families an input lands in, with residual
/// parameters (tower elements) where the family has moduli.
#[derive(Clone, Debug)]
pub struct CaseLabel {
    pub case: u8,
    pub lambda: Option<MPoly>,
    pub mu: Option<MPoly>,
    pub git: GitStatus,
    pub aut: &'static str,
}

/// A replayable certificate: the move chain, the extension tower interpreting
/// its coefficients, the reached normal form, and the case label.
#[derive(Clone, Debug)]
pub struct Witness {
    pub tower: Tower,
    pub moves: Vec<Move>,
    pub normal_form: [MPoly; 6],
    pub label: CaseLabel,
}

/// Output of a single public pipeline stage.
#[derive(Clone, Debug)]
pub struct Stage {
    pub tower: Tower,
    pub moves: Vec<Move>,
    pub coeffs: [MPoly; 6],
    pub settled: Option<CaseLabel>,
}

enum Flow {
    Settled(u8, Option<MPoly>, Option<MPoly>),
    Open,
}

/// Mutable state of one classification attempt.
struct Ctx<'h> {
    tower: Tower,
    hints: &'h BTreeMap<usize, MPoly>,
    moves: Vec<Move>,
    s: [MPoly; 6],
}

impl<'h> Ctx<'h> {
    fn new(start: &[Rat; 6], hints: &'h BTreeMap<usize, MPoly>) -> Self {
        Ctx { tower: Tower::new(), hints, moves: Vec::new(), s: coeffs_to_mpoly(start) }
    }

    fn reduce_coeffs(&mut self) {
        for slot in self.s.iter_mut() {
            *slot = self.tower.reduce(slot);
        }
    }

    fn try_invert(&self, p: &MPoly) -> Result<Eval<Option<MPoly>>> {
        self.tower.try_invert(p)
    }

    fn unit_inverse(&self, p: &MPoly, what: &str) -> Result<Eval<MPoly>> {
        match self.tower.invert(p) {
            Ok(ev) => Ok(ev),
            Err(Error::DivisionByZero) => {
                Err(Error::Internal(format!("unexpected zero: {what}")))
            }
            Err(e) => Err(e),
        }
    }

    /// A root of `p` (polynomial in `v` over the tower): degree one is solved
    /// in place, higher degrees adjoin a tower level, honoring hints.
    fn root_of(&mut self, p: &MPoly, v: Var) -> Result<Eval<MPoly>> {
        let p = self.tower.reduce(p);
        match p.degree_in(v) {
            0 => Err(Error::Internal("a root of a constant was requested".into())),
            1 => {
                let a1 = p.coeff_of_power(v, 1);
                let a0 = p.coeff_of_power(v, 0);
                let inv = try_eval!(self.unit_inverse(&a1, "leading coefficient of a linear equation")?);
                Ok(Eval::Value(self.tower.reduce(&-&(&a0 * &inv))))
            }
            _ => {
                let hint = self.hints.get(&self.tower.height()).cloned();
                let w = try_eval!(self.tower.adjoin(&p, v, hint.as_ref())?);
                Ok(Eval::Value(MPoly::var(w)))
            }
        }
    }

    /// Divides out the joint content of the nonzero slots, keeping the
    /// projective representative small between moves.
    fn renormalize(&mut self) {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for slot in &self.s {
            if slot.is_zero() {
                continue;
            }
            let c = slot.content();
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return;
        }
        let joint = Rat::new(num, den);
        if joint.is_one() {
            return;
        }
        let inv = Rat::one() / joint;
        for slot in self.s.iter_mut() {
            *slot = slot.scale(&inv);
        }
    }

    fn act(&mut self, g: &Sl2) -> Result<()> {
        self.s = apply_act(&self.tower, &self.s, g)?;
        self.renormalize();
        self.moves.push(Move::Act(g.clone()));
        Ok(())
    }

    fn act_iota(&mut self) {
        self.s = iota(&self.s);
        self.reduce_coeffs();
        self.renormalize();
        self.moves.push(Move::Iota);
    }

    /// Applies the torus move after certifying the scalar is a unit.
    fn act_scale(&mut self, lam: &MPoly) -> Result<Eval<()>> {
        try_eval!(self.unit_inverse(lam, "torus scalar")?);
        self.s = cstar(&self.s, lam)?;
        self.reduce_coeffs();
        self.renormalize();
        self.moves.push(Move::Scale(lam.clone()));
        Ok(Eval::Value(()))
    }

    /// Rescales the whole vector (a projective representative change, not a move).
    fn rescale(&mut self, k: &MPoly) {
        for slot in self.s.iter_mut() {
            *slot = self.tower.reduce(&(&*slot * k));
        }
    }

    /// Divides the vector by slot `i`, certified a unit, making it exactly one.
    fn normalize_by_slot(&mut self, i: usize, what: &str) -> Result<Eval<()>> {
        let inv = try_eval!(self.unit_inverse(&self.s[i].clone(), what)?);
        self.rescale(&inv);
        if self.s[i] != MPoly::one() {
            return Err(Error::Internal(format!("normalization of slot {i} failed")));
        }
        Ok(Eval::Value(()))
    }

    fn expect_zero(&self, i: usize, what: &str) -> Result<()> {
        if !self.tower.is_zero(&self.s[i]) {
            return Err(Error::Internal(format!("slot {i} should vanish {what}")));
        }
        Ok(())
    }

    fn slot_zero(&self, i: usize) -> bool {
        self.tower.is_zero(&self.s[i])
    }
}

/// Root condition for the two-parameter unipotent move on a fully general
/// coefficient vector, computed once symbolically.
///
/// Applying the lower move with parameter `c` and then the upper move with
/// parameter `b` leaves slot 3 linear and slot 1 cubic in `b`; eliminating
/// `b` from the pair yields one polynomial in `c` of degree at most nine
/// whose roots make both slots removable at once. Compared to first scaling
/// the vector into a special pattern, this keeps the extension degree of a
/// generic classification small.
#[derive(Clone, Debug)]
pub struct DirectShear {
    /// Eliminant in the lower parameter over symbolic input coefficients.
    pub root_condition: MPoly,
}

fn compute_direct_shear() -> DirectShear {
    let sym: [MPoly; 6] = core::array::from_fn(|i| MPoly::var(S[i]));
    let low = pullback(&sym, &Sl2::lower(&MPoly::var(C))).expect("span is preserved");
    let up = pullback(&low, &Sl2::upper(&MPoly::var(B))).expect("span is preserved");
    assert_eq!(up[3].degree_in(B), 1);
    assert_eq!(up[1].degree_in(B), 3);
    let lin = up[3].coeff_of_power(B, 1);
    let off = up[3].coeff_of_power(B, 0);
    let mut cleared = MPoly::zero();
    for k in 0..=3u32 {
        let term =
            &up[1].coeff_of_power(B, k as usize) * &(&(-&off).pow(k) * &lin.pow(3 - k));
        cleared += &term;
    }
    let root_condition =
        cleared.div_exact(&lin).expect("linear factor divides the cleared cubic");
    DirectShear { root_condition }
}

/// Cached symbolic direct-shear root condition.
pub fn direct_shear() -> &'static DirectShear {
    static CELL: OnceLock<DirectShear> = OnceLock::new();
    CELL.get_or_init(compute_direct_shear)
}

/// Structure constants of the two-parameter unipotent move on the pattern
/// `(1, 0, s2, 1, s4, s5)`, computed once symbolically.
#[derive(Clone, Debug)]
pub struct ShearStructure {
    /// Image of slot 1: cubic in the first shear parameter.
    pub slot1: MPoly,
    /// Image of slot 3: linear in the first shear parameter.
    pub slot3: MPoly,
    /// Image of slot 4: free of the first shear parameter.
    pub slot4: MPoly,
    /// Coefficient of the first parameter in `slot3`.
    pub lin_coeff: MPoly,
    /// Constant part of `slot3`; equals `slot3 - 2b * slot4`.
    pub offset: MPoly,
    /// Sextic whose roots make both rear slots removable when the gate is a unit.
    pub sextic: MPoly,
    /// Resultant of `slot4` and `offset`: the gate between the two rear paths.
    pub gate: MPoly,
}

fn compute_shear_structure() -> ShearStructure {
    let s2 = MPoly::var(S[2]);
    let s4 = MPoly::var(S[4]);
    let s5 = MPoly::var(S[5]);
    let pattern = [MPoly::one(), MPoly::zero(), s2, MPoly::one(), s4, s5];
    let g = Sl2::shear(&MPoly::var(B), &MPoly::var(C));
    let image = pullback(&pattern, &g).expect("the span is preserved");
    let slot1 = image[1].clone();
    let slot3 = image[3].clone();
    let slot4 = image[4].clone();
    assert_eq!(slot1.degree_in(B), 3);
    assert_eq!(slot3.degree_in(B), 1);
    assert_eq!(slot4.degree_in(B), 0);
    let lin_coeff = slot3.coeff_of_power(B, 1);
    let offset = slot3.coeff_of_power(B, 0);
    // Clear the root b = -offset/lin_coeff out of the cubic slot-1 image and
    // strip the spurious lin_coeff factor; the leftover sextic in the second
    // parameter carries the genuine root condition.
    let mut cleared = MPoly::zero();
    for k in 0..=3u32 {
        let term = &slot1.coeff_of_power(B, k as usize)
            * &(&(-&offset).pow(k) * &lin_coeff.pow(3 - k));
        cleared += &term;
    }
    let quotient = cleared.div_exact(&lin_coeff).expect("linear factor divides the cleared cubic");
    let sextic = quotient.scale(&ratio(-1, 2));
    assert_eq!(sextic.degree_in(C), 6);
    let gate = resultant(&slot4, &offset, C).expect("both gate polynomials are nonzero");
    ShearStructure { slot1, slot3, slot4, lin_coeff, offset, sextic, gate }
}

/// Cached symbolic shear structure.
pub fn shear_structure() -> &'static ShearStructure {
    static CELL: OnceLock<ShearStructure> = OnceLock::new();
    CELL.get_or_init(compute_shear_structure)
}

struct ShearInst {
    lin_coeff: MPoly,
    offset: MPoly,
    slot4: MPoly,
    sextic: MPoly,
    gate: MPoly,
}

fn instantiate_shear(cx: &Ctx) -> ShearInst {
    let st = shear_structure();
    let repl = [
        (S[2], cx.s[2].clone()),
        (S[4], cx.s[4].clone()),
        (S[5], cx.s[5].clone()),
    ];
    let sub = |p: &MPoly| cx.tower.reduce(&p.subst_many(&repl));
    ShearInst {
        lin_coeff: sub(&st.lin_coeff),
        offset: sub(&st.offset),
        slot4: sub(&st.slot4),
        sextic: sub(&st.sextic),
        gate: sub(&st.gate),
    }
}

/// Restart loop: runs `body`, folding each split into the hint map.
fn with_restarts<T>(
    mut body: impl FnMut(&BTreeMap<usize, MPoly>) -> Result<Eval<T>>,
) -> Result<T> {
    let mut hints: BTreeMap<usize, MPoly> = BTreeMap::new();
    for _ in 0..MAX_RESTARTS {
        match body(&hints)? {
            Eval::Value(v) => return Ok(v),
            Eval::Split(sp) => {
                hints.retain(|k, _| *k < sp.level);
                hints.insert(sp.level, sp.factor);
            }
        }
    }
    Err(Error::Internal("split refinement exceeded the restart budget".into()))
}

/// Rejects singular inputs, naming a vanishing factor of the Hessian.
fn require_smooth(s: &[Rat; 6]) -> Result<()> {
    let binds: Vec<(Var, Rat)> = S.iter().copied().zip(s.iter().cloned()).collect();
    let (f1, f2) = hessian_factors();
    for f in [f1, f2] {
        let value = f.eval(&binds).as_rat().expect("evaluation binds all coefficients");
        if value.is_zero() {
            return Err(Error::SingularQuadric(f.to_string()));
        }
    }
    Ok(())
}

/// Removes slot 1, or settles directly into the pencil-member normal form.
fn step_a(cx: &mut Ctx) -> Result<Eval<Flow>> {
    if cx.slot_zero(1) {
        return Ok(Eval::Value(Flow::Open));
    }
    let mid_zero = cx.slot_zero(2) && cx.slot_zero(3) && cx.slot_zero(4);
    if !mid_zero {
        let formal = pullback(&cx.s, &Sl2::upper(&MPoly::var(B)))?;
        let target = cx.tower.reduce(&formal[1]);
        let b = try_eval!(cx.root_of(&target, B)?);
        cx.act(&Sl2::upper(&b))?;
        cx.expect_zero(1, "after the unipotent move")?;
        return Ok(Eval::Value(Flow::Open));
    }
    if !cx.slot_zero(0) {
        let inv0 = try_eval!(cx.unit_inverse(&cx.s[0].clone(), "front coefficient")?);
        let c = cx.tower.reduce(&(&cx.s[1] * &inv0).scale(&ratio(-1, 2)));
        cx.act(&Sl2::lower(&c))?;
        cx.expect_zero(1, "after the opposite unipotent move")?;
        return Ok(Eval::Value(Flow::Open));
    }
    // Only slots 1 and 5 survive; scale them together and settle.
    let inv1 = try_eval!(cx.unit_inverse(&cx.s[1].clone(), "pencil slot of a smooth form")?);
    let lam = cx.tower.reduce(&(&cx.s[5] * &inv1));
    try_eval!(cx.act_scale(&lam)?);
    try_eval!(cx.normalize_by_slot(1, "pencil slot")?);
    for i in [0, 2, 3, 4] {
        cx.expect_zero(i, "in the pencil-member pattern")?;
    }
    Ok(Eval::Value(Flow::Settled(5, None, None)))
}

fn step_bcd(cx: &mut Ctx) -> Result<Eval<Flow>> {
    if try_eval!(cx.try_invert(&cx.s[3].clone())?).is_none() {
        return step_d(cx);
    }
    match try_eval!(cx.try_invert(&cx.s[0].clone())?) {
        None => reduce_front(cx),
        Some(inv0) => step_c(cx, &inv0),
    }
}

/// Centers the reversed pattern `(·, s1, ·, 0, 0, s5)`: scales slots 1 and 5
/// together, then removes slot 1 or settles into the pencil member.
fn center_rear(cx: &mut Ctx) -> Result<Eval<Flow>> {
    cx.expect_zero(3, "entering the centering step")?;
    cx.expect_zero(4, "entering the centering step")?;
    let inv1 = match try_eval!(cx.try_invert(&cx.s[1].clone())?) {
        Some(inv) => inv,
        None => return step_d(cx),
    };
    let lam = cx.tower.reduce(&(&cx.s[5] * &inv1));
    try_eval!(cx.act_scale(&lam)?);
    try_eval!(cx.normalize_by_slot(1, "odd slot")?);
    // Coordinates are now (a0, 1, a2, 0, 0, 1).
    match try_eval!(cx.try_invert(&cx.s[2].clone())?) {
        Some(inv2) => {
            let b = cx.tower.reduce(&inv2.scale(&ratio(-1, 4)));
            cx.act(&Sl2::upper(&b))?;
            cx.expect_zero(1, "after centering")?;
            cx.expect_zero(3, "after centering")?;
            cx.expect_zero(4, "after centering")?;
            step_d(cx)
        }
        None => {
            let b = cx.tower.reduce(&cx.s[0].scale(&ratio(-1, 2)));
            if !b.is_zero() {
                cx.act(&Sl2::upper(&b))?;
            }
            for i in [0, 2, 3, 4] {
                cx.expect_zero(i, "in the pencil-member pattern")?;
            }
            try_eval!(cx.normalize_by_slot(1, "pencil slot")?);
            Ok(Eval::Value(Flow::Settled(5, None, None)))
        }
    }
}

/// Handles a vanished front pair: reversing hands the rear to the centering.
fn reduce_front(cx: &mut Ctx) -> Result<Eval<Flow>> {
    cx.expect_zero(0, "entering the reversed reduction")?;
    cx.expect_zero(1, "entering the reversed reduction")?;
    cx.act_iota();
    center_rear(cx)
}

/// Scales the front pair to one via a cube root, making the shear pattern.
fn scale_front(cx: &mut Ctx, inv0: &MPoly) -> Result<Eval<()>> {
    let r = cx.tower.reduce(&(&cx.s[3] * inv0));
    let cubic = &MPoly::var(T).pow(3) - &r;
    let lam = try_eval!(cx.root_of(&cubic, T)?);
    try_eval!(cx.act_scale(&lam)?);
    try_eval!(cx.normalize_by_slot(0, "front slot")?);
    if cx.s[3] != MPoly::one() {
        return Err(Error::Internal("front scaling did not equalize slot 3".into()));
    }
    Ok(Eval::Value(()))
}

/// Kills slots 1 and 3 with a two-parameter unipotent move (gate is a unit).
fn kill_rear(cx: &mut Ctx, inst: &ShearInst) -> Result<Eval<()>> {
    let c = try_eval!(cx.root_of(&inst.sextic, C)?);
    let lin = cx.tower.reduce(&inst.lin_coeff.substitute(C, &c));
    let inv = try_eval!(cx.unit_inverse(&lin, "shear denominator away from the degenerate gate")?);
    let off = cx.tower.reduce(&inst.offset.substitute(C, &c));
    let b = cx.tower.reduce(&-&(&off * &inv));
    cx.act(&Sl2::shear(&b, &c))?;
    cx.expect_zero(1, "after the shear")?;
    cx.expect_zero(3, "after the shear")?;
    Ok(Eval::Value(()))
}

/// Gate-zero path: a common root removes slots 3 and 4 at once; reversing
/// then hands a vanished front to [`reduce_front`].
fn degenerate_rear(cx: &mut Ctx, inst: &ShearInst) -> Result<Eval<()>> {
    let g = try_eval!(cx.tower.gcd_univar(&inst.slot4, &inst.offset, C)?);
    if g.degree_in(C) == 0 {
        return Err(Error::Internal("gate vanished but the common factor is trivial".into()));
    }
    let c = try_eval!(cx.root_of(&g, C)?);
    cx.act(&Sl2::lower(&c))?;
    cx.expect_zero(3, "after the degenerate move")?;
    cx.expect_zero(4, "after the degenerate move")?;
    cx.act_iota();
    cx.expect_zero(0, "after reversing the degenerate pattern")?;
    cx.expect_zero(1, "after reversing the degenerate pattern")?;
    Ok(Eval::Value(()))
}

fn step_c(cx: &mut Ctx, inv0: &MPoly) -> Result<Eval<Flow>> {
    try_eval!(scale_front(cx, inv0)?);
    let inst = instantiate_shear(cx);
    match try_eval!(cx.try_invert(&inst.gate)?) {
        Some(_) => {
            try_eval!(kill_rear(cx, &inst)?);
            step_d(cx)
        }
        None => {
            try_eval!(degenerate_rear(cx, &inst)?);
            reduce_front(cx)
        }
    }
}

/// Final dispatch on the pattern `(s0, 0, s2, 0, s4, s5)`.
fn step_d(cx: &mut Ctx) -> Result<Eval<Flow>> {
    cx.expect_zero(1, "entering the final dispatch")?;
    cx.expect_zero(3, "entering the final dispatch")?;
    let u0 = try_eval!(cx.try_invert(&cx.s[0].clone())?);
    let u4 = try_eval!(cx.try_invert(&cx.s[4].clone())?);
    match (u0, u4) {
        (Some(inv0), Some(_)) => {
            let r = cx.tower.reduce(&(&cx.s[4] * &inv0));
            let quartic = &MPoly::var(T).pow(4) - &r;
            let lam = try_eval!(cx.root_of(&quartic, T)?);
            try_eval!(cx.act_scale(&lam)?);
            if !cx.tower.equal(&cx.s[0], &cx.s[4]) {
                return Err(Error::Internal("outer balancing failed".into()));
            }
            match try_eval!(cx.try_invert(&cx.s[2].clone())?) {
                None => {
                    try_eval!(cx.normalize_by_slot(5, "invariant slot of a smooth form")?);
                    let mu = cx.s[0].clone();
                    Ok(Eval::Value(Flow::Settled(1, None, Some(mu))))
                }
                Some(inv2) => {
                    let k = cx.tower.reduce(&inv2.scale(&rat(3)));
                    cx.rescale(&k);
                    if cx.s[2] != MPoly::int(3) {
                        return Err(Error::Internal("middle normalization failed".into()));
                    }
                    let mu = cx.s[0].clone();
                    let lam = cx.s[5].clone();
                    Ok(Eval::Value(Flow::Settled(2, Some(lam), Some(mu))))
                }
            }
        }
        (None, None) => match try_eval!(cx.try_invert(&cx.s[2].clone())?) {
            Some(inv2) => {
                let k = cx.tower.reduce(&inv2.scale(&rat(3)));
                cx.rescale(&k);
                if cx.s[2] != MPoly::int(3) {
                    return Err(Error::Internal("middle normalization failed".into()));
                }
                let lam = cx.s[5].clone();
                Ok(Eval::Value(Flow::Settled(2, Some(lam), Some(MPoly::zero()))))
            }
            None => {
                try_eval!(cx.normalize_by_slot(5, "invariant slot")?);
                Ok(Eval::Value(Flow::Settled(2, None, Some(MPoly::zero()))))
            }
        },
        (front, _) => {
            if front.is_none() {
                cx.act_iota();
                cx.expect_zero(4, "after reversing the one-sided pattern")?;
            }
            let inv0 = try_eval!(cx.unit_inverse(&cx.s[0].clone(), "front slot")?);
            match try_eval!(cx.try_invert(&cx.s[2].clone())?) {
                None => {
                    let r = cx.tower.reduce(&(&cx.s[5] * &inv0));
                    let square = &MPoly::var(T).pow(2) - &r;
                    let lam = try_eval!(cx.root_of(&square, T)?);
                    try_eval!(cx.act_scale(&lam)?);
                    try_eval!(cx.normalize_by_slot(0, "front slot")?);
                    if cx.s[5] != MPoly::one() {
                        return Err(Error::Internal("one-sided normalization failed".into()));
                    }
                    Ok(Eval::Value(Flow::Settled(3, None, None)))
                }
                Some(_) => {
                    let r = cx.tower.reduce(&(&cx.s[2] * &inv0).scale(&ratio(1, 3)));
                    let square = &MPoly::var(T).pow(2) - &r;
                    let lam = try_eval!(cx.root_of(&square, T)?);
                    try_eval!(cx.act_scale(&lam)?);
                    try_eval!(cx.normalize_by_slot(0, "front slot")?);
                    if cx.s[2] != MPoly::int(3) {
                        return Err(Error::Internal("middle normalization failed".into()));
                    }
                    let lam_param = cx.s[5].clone();
                    Ok(Eval::Value(Flow::Settled(4, Some(lam_param), None)))
                }
            }
        }
    }
}

/// GIT status and automorphism class of each normal-form family.
fn git_row(case: u8, lambda: &Option<MPoly>, mu: &Option<MPoly>) -> (GitStatus, &'static str) {
    match case {
        1 => (GitStatus::Stable, "finite"),
        2 => {
            let mu_zero = mu.as_ref().map(|m| m.is_zero()).unwrap_or(false);
            if !mu_zero {
                (GitStatus::Stable, "finite")
            } else if lambda.is_some() {
                (GitStatus::Polystable, "Gm ⋊ μ2")
            } else {
                (GitStatus::Polystable, "PGL2(C)")
            }
        }
        3 => (GitStatus::StrictlySemistable, "Ga × μ2"),
        4 => (GitStatus::StrictlySemistable, "finite"),
        5 => (GitStatus::StrictlySemistable, "finite"),
        _ => unreachable!("case labels run from 1 to 5"),
    }
}

/// Certifies the emitted form is smooth in the tower and packs the witness.
fn certify_and_build(
    mut cx: Ctx<'_>,
    case: u8,
    lambda: Option<MPoly>,
    mu: Option<MPoly>,
) -> Result<Eval<Witness>> {
    cx.reduce_coeffs();
    let repl: Vec<(Var, MPoly)> = S.iter().copied().zip(cx.s.iter().cloned()).collect();
    let (f1, f2) = hessian_factors();
    for f in [f1, f2] {
        let value = cx.tower.reduce(&f.subst_many(&repl));
        match cx.tower.invert(&value) {
            Ok(ev) => {
                try_eval!(ev);
            }
            Err(Error::DivisionByZero) => {
                return Err(Error::Internal("emitted normal form is singular".into()))
            }
            Err(e) => return Err(e),
        }
    }
    let (git, aut) = git_row(case, &lambda, &mu);
    Ok(Eval::Value(Witness {
        tower: cx.tower,
        moves: cx.moves,
        normal_form: cx.s,
        label: CaseLabel { case, lambda, mu, git, aut },
    }))
}

/// Kills slots 1 and 3 together: one lower move at a root of the eliminant,
/// then one upper move. Returns `None` on degenerate instances so the caller
/// can fall back to the staged reduction.
fn direct_kill(cx: &mut Ctx) -> Result<Eval<Option<Flow>>> {
    let repl: Vec<(Var, MPoly)> = S.iter().copied().zip(cx.s.iter().cloned()).collect();
    let w = cx.tower.reduce(&direct_shear().root_condition.subst_many(&repl));
    if w.degree_in(C) == 0 {
        return Ok(Eval::Value(None));
    }
    let c = try_eval!(cx.root_of(&w, C)?);
    cx.act(&Sl2::lower(&c))?;
    match try_eval!(cx.try_invert(&cx.s[4].clone())?) {
        Some(inv4) => {
            let b = cx.tower.reduce(&(&cx.s[3] * &inv4).scale(&ratio(-1, 2)));
            cx.act(&Sl2::upper(&b))?;
            cx.expect_zero(1, "after the direct shear")?;
            cx.expect_zero(3, "after the direct shear")?;
            Ok(Eval::Value(Some(try_eval!(step_d(cx)?))))
        }
        None => {
            // The moduli are squarefree, so the eliminant forces slot 3 to
            // vanish with slot 4 on this branch, leaving the centering shape.
            cx.expect_zero(3, "after the degenerate direct move")?;
            Ok(Eval::Value(Some(try_eval!(center_rear(cx)?))))
        }
    }
}

/// Driver dispatch: exact special patterns first, then the direct shear,
/// with the staged reduction as a fallback for degenerate eliminants.
fn drive(cx: &mut Ctx) -> Result<Eval<Flow>> {
    let z: [bool; 6] = core::array::from_fn(|i| cx.slot_zero(i));
    if z[1] && z[3] {
        return step_d(cx);
    }
    if z[1] && z[0] {
        return reduce_front(cx);
    }
    if z[3] && z[4] {
        return center_rear(cx);
    }
    if z[3] {
        cx.act_iota();
    }
    if let Some(flow) = try_eval!(direct_kill(cx)?) {
        return Ok(Eval::Value(flow));
    }
    match try_eval!(step_a(cx)?) {
        Flow::Open => step_bcd(cx),
        settled => Ok(Eval::Value(settled)),
    }
}

/// Classifies a smooth rational coefficient vector into its normal form.
pub fn classify(s: &[Rat; 6]) -> Result<Witness> {
    require_smooth(s)?;
    with_restarts(|hints| {
        let mut cx = Ctx::new(s, hints);
        match try_eval!(drive(&mut cx)?) {
            Flow::Settled(case, lambda, mu) => certify_and_build(cx, case, lambda, mu),
            Flow::Open => Err(Error::Internal("pipeline ended without a case".into())),
        }
    })
}

/// Replays a witness against an input and compares projectively.
pub fn verify_witness(input: &[Rat; 6], w: &Witness) -> Result<bool> {
    let mut cur = coeffs_to_mpoly(input);
    for mv in &w.moves {
        cur = apply_move(&w.tower, &cur, mv)?;
    }
    if cur.iter().all(|p| p.is_zero()) {
        return Ok(false);
    }
    for i in 0..6 {
        for j in (i + 1)..6 {
            let cross = &(&cur[i] * &w.normal_form[j]) - &(&cur[j] * &w.normal_form[i]);
            if !w.tower.is_zero(&cross) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Stage: removes slot 1 (settling directly when only slots 1 and 5 remain).
pub fn eliminate_s1(s: &[Rat; 6]) -> Result<Stage> {
    require_smooth(s)?;
    with_restarts(|hints| {
        let mut cx = Ctx::new(s, hints);
        let settled = match try_eval!(step_a(&mut cx)?) {
            Flow::Settled(case, lambda, mu) => {
                let (git, aut) = git_row(case, &lambda, &mu);
                Some(CaseLabel { case, lambda, mu, git, aut })
            }
            Flow::Open => None,
        };
        Ok(Eval::Value(Stage { tower: cx.tower, moves: cx.moves, coeffs: cx.s, settled }))
    })
}

/// Stage: full reduction for inputs with vanished front pair and live slot 3.
pub fn reduce_front_zero(s: &[Rat; 6]) -> Result<Witness> {
    require_smooth(s)?;
    if !s[0].is_zero() || !s[1].is_zero() || s[3].is_zero() {
        return Err(Error::PatternMismatch);
    }
    with_restarts(|hints| {
        let mut cx = Ctx::new(s, hints);
        match try_eval!(reduce_front(&mut cx)?) {
            Flow::Settled(case, lambda, mu) => certify_and_build(cx, case, lambda, mu),
            Flow::Open => Err(Error::Internal("reversed reduction ended open".into())),
        }
    })
}

/// Stage: removes slots 1 and 3 when the gate invariant is a unit.
///
/// The branch taken follows the deterministic refinement order; inputs whose
/// gate vanishes on the chosen branch are rejected with a pattern error.
pub fn eliminate_s3(s: &[Rat; 6]) -> Result<Stage> {
    require_smooth(s)?;
    if !s[1].is_zero() || s[0].is_zero() || s[3].is_zero() {
        return Err(Error::PatternMismatch);
    }
    with_restarts(|hints| {
        let mut cx = Ctx::new(s, hints);
        let inv0 = match try_eval!(cx.try_invert(&cx.s[0].clone())?) {
            Some(inv) => inv,
            None => return Err(Error::PatternMismatch),
        };
        try_eval!(scale_front(&mut cx, &inv0)?);
        let inst = instantiate_shear(&cx);
        match try_eval!(cx.try_invert(&inst.gate)?) {
            Some(_) => {
                try_eval!(kill_rear(&mut cx, &inst)?);
                Ok(Eval::Value(Stage {
                    tower: cx.tower,
                    moves: cx.moves,
                    coeffs: cx.s,
                    settled: None,
                }))
            }
            None => Err(Error::PatternMismatch),
        }
    })
}

/// Stage: the degenerate-gate companion of [`eliminate_s3`]; hands back a
/// vanished front pair ready for [`reduce_front_zero`].
pub fn h_zero_path(s: &[Rat; 6]) -> Result<Stage> {
    require_smooth(s)?;
    if !s[1].is_zero() || s[0].is_zero() || s[3].is_zero() {
        return Err(Error::PatternMismatch);
    }
    with_restarts(|hints| {
        let mut cx = Ctx::new(s, hints);
        let inv0 = match try_eval!(cx.try_invert(&cx.s[0].clone())?) {
            Some(inv) => inv,
            None => return Err(Error::PatternMismatch),
        };
        try_eval!(scale_front(&mut cx, &inv0)?);
        let inst = instantiate_shear(&cx);
        match try_eval!(cx.try_invert(&inst.gate)?) {
            Some(_) => Err(Error::PatternMismatch),
            None => {
                try_eval!(degenerate_rear(&mut cx, &inst)?);
                Ok(Eval::Value(Stage {
                    tower: cx.tower,
                    moves: cx.moves,
                    coeffs: cx.s,
                    settled: None,
                }))
            }
        }
    })
}

/// The gate invariant in the two rear coefficients, as displayed data.
///
/// The derived gate of [`shear_structure`] equals this polynomial with the
/// middle coefficient negated; the unit tests pin that relation down.
pub fn h_invariant_poly() -> MPoly {
    let s2 = MPoly::var(S[2]);
    let s4 = MPoly::var(S[4]);
    let mut acc = (&s2.pow(4) * &s4).scale(&rat(256));
    acc -= &(&s2.pow(2) * &s4.pow(2)).scale(&rat(128));
    acc += &s2.pow(3).scale(&rat(64));
    acc += &s4.pow(3).scale(&rat(16));
    acc -= &(&s2 * &s4).scale(&rat(144));
    acc -= &MPoly::int(27);
    acc
}

/// Evaluates [`h_invariant_poly`] at rational rear coefficients.
pub fn h_invariant(s2: &Rat, s4: &Rat) -> Rat {
    h_invariant_poly()
        .eval(&[(S[2], s2.clone()), (S[4], s4.clone())])
        .as_rat()
        .expect("full evaluation")
}

/// Verifies the torus degeneration of a front-loaded form: scaling the
/// coordinates regroups the form as the fourth power of the scalar times the
/// family interpolating toward the invariant member.
pub fn degeneration_identity(s: &[MPoly; 6]) -> Result<()> {
    if !s[3].is_zero() || !s[4].is_zero() || s[5] != MPoly::one() {
        return Err(Error::PatternMismatch);
    }
    let lam = MPoly::var(LAMBDA);
    let repl: Vec<(Var, MPoly)> = X
        .iter()
        .enumerate()
        .map(|(i, xi)| (*xi, &lam.pow(i as u32) * &MPoly::var(*xi)))
        .collect();
    let lhs = expand(s).subst_many(&repl);
    let family = [
        &lam.pow(2) * &s[0],
        &lam * &s[1],
        s[2].clone(),
        MPoly::zero(),
        MPoly::zero(),
        MPoly::one(),
    ];
    let rhs = &lam.pow(4) * &expand(&family);
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::Internal("degeneration identity failed".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::parse_rat;

    fn rv(v: [&str; 6]) -> [Rat; 6] {
        core::array::from_fn(|i| parse_rat(v[i]).unwrap())
    }

    fn nf_rat(w: &Witness) -> Option<[Rat; 6]> {
        let mut out: [Rat; 6] = core::array::from_fn(|_| rat(0));
        for i in 0..6 {
            out[i] = w.normal_form[i].as_rat()?;
        }
        Some(out)
    }

    #[test]
    fn pencil_member_case() {
        let s = rv(["0", "1", "0", "0", "0", "1"]);
        let w = classify(&s).unwrap();
        assert_eq!(w.label.case, 5);
        assert_eq!(w.label.git, GitStatus::StrictlySemistable);
        assert_eq!(
            nf_rat(&w).unwrap(),
            rv(["0", "1", "0", "0", "0", "1"])
        );
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn one_sided_case() {
        let s = rv(["1", "0", "0", "0", "0", "1"]);
        let w = classify(&s).unwrap();
        assert_eq!(w.label.case, 3);
        assert_eq!(w.label.git, GitStatus::StrictlySemistable);
        assert_eq!(w.label.aut, "Ga × μ2");
        assert_eq!(nf_rat(&w).unwrap(), rv(["1", "0", "0", "0", "0", "1"]));
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn balanced_case() {
        let s = rv(["1", "0", "0", "0", "1", "1"]);
        let w = classify(&s).unwrap();
        assert_eq!(w.label.case, 1);
        assert_eq!(w.label.git, GitStatus::Stable);
        assert!(w.label.mu.is_some());
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn middle_only_case_is_polystable() {
        let s = rv(["0", "0", "1", "0", "0", "-1"]);
        let w = classify(&s).unwrap();
        assert_eq!(w.label.case, 2);
        assert_eq!(w.label.git, GitStatus::Polystable);
        assert_eq!(w.label.aut, "Gm ⋊ μ2");
        assert_eq!(w.label.mu.as_ref().unwrap(), &MPoly::zero());
        assert_eq!(w.label.lambda.as_ref().unwrap(), &MPoly::int(-3));
        assert_eq!(nf_rat(&w).unwrap(), rv(["0", "0", "3", "0", "0", "-3"]));
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn invariant_member_is_polystable_with_big_automorphisms() {
        let s = rv(["0", "0", "0", "0", "0", "1"]);
        let w = classify(&s).unwrap();
        assert_eq!(w.label.case, 2);
        assert_eq!(w.label.git, GitStatus::Polystable);
        assert_eq!(w.label.aut, "PGL2(C)");
        assert!(w.label.lambda.is_none());
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn one_sided_with_middle_case() {
        let s = rv(["1", "0", "3", "0", "0", "2"]);
        let w = classify(&s).unwrap();
        assert_eq!(w.label.case, 4);
        assert_eq!(w.label.git, GitStatus::StrictlySemistable);
        assert_eq!(w.label.lambda.as_ref().unwrap(), &MPoly::int(2));
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn reversed_reduction_case() {
        let s = rv(["0", "0", "2", "1", "0", "1"]);
        let w = classify(&s).unwrap();
        assert_eq!(w.label.case, 4);
        assert_eq!(
            w.label.lambda.as_ref().unwrap().as_rat().unwrap(),
            ratio(3, 2)
        );
        assert!(verify_witness(&s, &w).unwrap());
        let direct = reduce_front_zero(&s).unwrap();
        assert_eq!(direct.label.case, 4);
    }

    #[test]
    fn degenerate_gate_fixture() {
        let s = rv(["1", "0", "-3/4", "1", "0", "1"]);
        let w = classify(&s).unwrap();
        assert!(verify_witness(&s, &w).unwrap());
        // The degenerate path applies a lower-triangular unipotent move.
        let has_lower = w.moves.iter().any(|m| match m {
            Move::Act(g) => {
                g.a == MPoly::one() && g.b.is_zero() && g.d == MPoly::one() && !g.c.is_zero()
            }
            _ => false,
        });
        assert!(has_lower, "moves: {:?}", w.moves);
        let stage = h_zero_path(&s).unwrap();
        assert!(stage.tower.is_zero(&stage.coeffs[0]));
        assert!(stage.tower.is_zero(&stage.coeffs[1]));
        assert!(eliminate_s3(&s).is_err());
    }

    #[test]
    fn unit_gate_stage() {
        let s = rv(["1", "0", "0", "1", "0", "1"]);
        let stage = eliminate_s3(&s).unwrap();
        assert!(stage.tower.is_zero(&stage.coeffs[1]));
        assert!(stage.tower.is_zero(&stage.coeffs[3]));
        assert!(stage.settled.is_none());
        assert!(h_zero_path(&s).is_err());
        let w = classify(&s).unwrap();
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn front_elimination_stage() {
        let s = rv(["1", "1", "0", "0", "0", "1"]);
        let stage = eliminate_s1(&s).unwrap();
        assert!(stage.settled.is_none());
        assert!(stage.tower.is_zero(&stage.coeffs[1]));
        let w = classify(&s).unwrap();
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn cubic_root_elimination_stage() {
        let s = rv(["0", "1", "0", "0", "1", "1"]);
        let stage = eliminate_s1(&s).unwrap();
        assert!(stage.tower.is_zero(&stage.coeffs[1]));
        assert_eq!(stage.tower.height(), 1);
        let w = classify(&s).unwrap();
        assert!(verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn classification_is_idempotent_on_rational_forms() {
        let cases: [[&str; 6]; 3] = [
            ["0", "0", "3", "0", "0", "-3"],
            ["1", "0", "0", "0", "0", "1"],
            ["0", "1", "0", "0", "0", "1"],
        ];
        for c in cases {
            let s = rv(c);
            let w1 = classify(&s).unwrap();
            let nf = nf_rat(&w1).unwrap();
            let w2 = classify(&nf).unwrap();
            assert_eq!(w1.label.case, w2.label.case);
        }
    }

    #[test]
    fn case_label_invariant_under_pullback() {
        let s = rv(["1", "0", "3", "0", "0", "2"]);
        let g = Sl2::from_rats(&rat(1), &ratio(1, 3), &rat(0), &rat(1))
            .unwrap()
            .mul(&Sl2::from_rats(&rat(1), &rat(0), &rat(2), &rat(1)).unwrap());
        let moved = pullback(&coeffs_to_mpoly(&s), &g).unwrap();
        let moved_rat: [Rat; 6] = core::array::from_fn(|i| moved[i].as_rat().unwrap());
        let w1 = classify(&s).unwrap();
        let w2 = classify(&moved_rat).unwrap();
        assert_eq!(w1.label.case, w2.label.case);
    }

    #[test]
    fn random_quadrics_classify_and_replay() {
        let mut r = crate::sample::rng(11);
        for _ in 0..3 {
            let s = crate::sample::smooth_quadric(&mut r);
            let w = classify(&s).unwrap();
            assert!((1..=5).contains(&w.label.case));
            assert!(verify_witness(&s, &w).unwrap(), "input {s:?}");
        }
    }

    #[test]
    fn tampered_witness_fails_replay() {
        let s = rv(["0", "0", "1", "0", "0", "-1"]);
        let mut w = classify(&s).unwrap();
        w.normal_form[0] = MPoly::one();
        assert!(!verify_witness(&s, &w).unwrap());
    }

    #[test]
    fn singular_inputs_rejected() {
        let err = classify(&rv(["0", "0", "1", "1", "0", "1"])).unwrap_err();
        assert!(matches!(err, Error::SingularQuadric(_)));
        assert!(classify(&rv(["0", "0", "0", "0", "0", "0"])).is_err());
    }

    #[test]
    fn reduced_action_matches_generic_pullback() {
        let tower = Tower::new();
        let g = Sl2::shear(&MPoly::var(B), &MPoly::var(C));
        let s: [MPoly; 6] = core::array::from_fn(|i| MPoly::var(S[i]));
        assert_eq!(apply_act(&tower, &s, &g).unwrap(), pullback(&s, &g).unwrap());
        let h = Sl2::from_rats(&rat(2), &ratio(1, 2), &rat(1), &ratio(3, 4)).unwrap();
        let sr = coeffs_to_mpoly(&[rat(1), rat(-2), ratio(1, 3), rat(0), rat(5), rat(-1)]);
        assert_eq!(apply_act(&tower, &sr, &h).unwrap(), pullback(&sr, &h).unwrap());
    }

    #[test]
    fn shear_structure_matches_reference_formulas() {
        let st = shear_structure();
        let s2 = MPoly::var(S[2]);
        let s4 = MPoly::var(S[4]);
        let c = MPoly::var(C);
        let lin = &(&(&c.pow(4).scale(&rat(2)) + &(&c.pow(2).scale(&rat(8)) * &s2))
            + &c.scale(&rat(4)))
            + &s4.scale(&rat(2));
        assert_eq!(st.lin_coeff, lin);
        let off = &(&c.pow(3).scale(&rat(2)) + &(&c.scale(&rat(4)) * &s2)) + &MPoly::one();
        assert_eq!(st.offset, off);
        let slot4 = &(&(&c.pow(4) + &(&c.pow(2).scale(&rat(4)) * &s2)) + &c.scale(&rat(2))) + &s4;
        assert_eq!(st.slot4, slot4);
        assert_eq!(st.lin_coeff, st.slot4.scale(&rat(2)));
        assert_eq!(st.slot3, &(&st.lin_coeff * &MPoly::var(B)) + &st.offset);
        // The gate is the displayed invariant with the middle sign flipped.
        let flipped = h_invariant_poly().substitute(S[2], &-&MPoly::var(S[2]));
        assert_eq!(st.gate, flipped);
    }

    #[test]
    fn gate_invariant_values() {
        assert_eq!(h_invariant(&rat(0), &rat(0)), rat(-27));
        assert_eq!(h_invariant(&rat(1), &rat(1)), rat(37));
    }

    #[test]
    fn direct_shear_eliminant_matches_reference() {
        let sym: [MPoly; 6] = core::array::from_fn(|i| MPoly::var(S[i]));
        let low = pullback(&sym, &Sl2::lower(&MPoly::var(C))).unwrap();
        let v3_cube = &(&low[3] * &low[3]) * &low[3];
        let mixed = (&(&low[2] * &low[3]) * &low[4]).scale(&rat(4));
        let square = (&(&low[1] * &low[4]) * &low[4]).scale(&rat(2));
        let reference = (&(&v3_cube - &mixed) + &square).scale(&rat(2));
        assert_eq!(direct_shear().root_condition, reference);
        // The three top coefficients cancel: the system generically has six
        // solutions, matching the staged path's sextic.
        assert_eq!(direct_shear().root_condition.degree_in(C), 6);
    }

    #[test]
    fn degeneration_identity_symbolic_and_rational() {
        let s: [MPoly; 6] = [
            MPoly::var(S[0]),
            MPoly::var(S[1]),
            MPoly::var(S[2]),
            MPoly::zero(),
            MPoly::zero(),
            MPoly::one(),
        ];
        degeneration_identity(&s).unwrap();
        let r = coeffs_to_mpoly(&rv(["1", "0", "0", "0", "0", "1"]));
        degeneration_identity(&r).unwrap();
        let bad = coeffs_to_mpoly(&rv(["1", "0", "0", "1", "0", "1"]));
        assert!(matches!(degeneration_identity(&bad), Err(Error::PatternMismatch)));
    }
}
