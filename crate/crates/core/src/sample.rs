//! Seeded random inputs for property suites: small rational coefficient
//! vectors, smooth quadrics, and unimodular matrices.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::action::{hessian_factors, Sl2};
use crate::mpoly::{MPoly, Var, S};
use crate::rat::{ratio, Rat};

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational with numerator in [-3, 3] and denominator in {1, 2, 3}.
pub fn small_rat(r: &mut ChaCha8Rng) -> Rat {
    let num = r.gen_range(-3i64..=3);
    let den = r.gen_range(1i64..=3);
    ratio(num, den)
}

/// A coefficient vector defining a smooth quadric (both Hessian factors
/// nonzero), drawn by rejection from small rationals.
pub fn smooth_quadric(r: &mut ChaCha8Rng) -> [Rat; 6] {
    let (f1, f2) = hessian_factors();
    loop {
        let s: [Rat; 6] = core::array::from_fn(|_| small_rat(r));
        let binds: Vec<(Var, Rat)> = S.iter().copied().zip(s.iter().cloned()).collect();
        let v1 = f1.eval(&binds).as_rat().expect("full evaluation");
        let v2 = f2.eval(&binds).as_rat().expect("full evaluation");
        if !v1.is_zero() && !v2.is_zero() {
            return s;
        }
    }
}

/// A determinant-one integer matrix: a product of two to four elementary
/// unipotent factors with small nonzero entries.
pub fn unimodular(r: &mut ChaCha8Rng) -> Sl2 {
    let count = r.gen_range(2usize..=4);
    let mut g = Sl2::from_rats(&ratio(1, 1), &ratio(0, 1), &ratio(0, 1), &ratio(1, 1))
        .expect("identity is unimodular");
    for step in 0..count {
        let mut e = r.gen_range(-2i64..=2);
        if e == 0 {
            e = 1;
        }
        let p = MPoly::constant(ratio(e, 1));
        let elem = if step % 2 == 0 { Sl2::upper(&p) } else { Sl2::lower(&p) };
        g = g.mul(&elem);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn sampling_is_deterministic() {
        let a = smooth_quadric(&mut rng(7));
        let b = smooth_quadric(&mut rng(7));
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_quadrics_are_smooth() {
        let mut r = rng(1);
        let (f1, f2) = hessian_factors();
        for _ in 0..20 {
            let s = smooth_quadric(&mut r);
            let binds: Vec<(Var, Rat)> = S.iter().copied().zip(s.iter().cloned()).collect();
            assert!(!f1.eval(&binds).as_rat().unwrap().is_zero());
            assert!(!f2.eval(&binds).as_rat().unwrap().is_zero());
        }
    }

    #[test]
    fn sampled_matrices_are_unimodular() {
        let mut r = rng(2);
        for _ in 0..20 {
            let g = unimodular(&mut r);
            let det = &(&g.a * &g.d) - &(&g.b * &g.c);
            assert_eq!(det.as_rat().unwrap(), rat(1));
        }
    }
}
