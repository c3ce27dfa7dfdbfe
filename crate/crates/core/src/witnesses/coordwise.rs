//! Coordinatewise-product witnesses, unilateral and bilateral.
//!
//! Unilateral: given exponent set A with distinguished β and direction κ
//! normalized so L_β(κ) = 1 < L_α(κ), the witness components
//! u_j = x_j + Σ_l y_l^{κ_j} (w_{l+1}···w_{n_k+l})^{−κ_j} e_{n_k+l}
//! satisfy B^{n_k}(u^β) = y exactly while the other monomials pick up a
//! positive power of the inverse weight products.
//!
//! Bilateral: a single block at n_k serves the m_0-th power; shifting also
//! drags the base point's own power to the far negative side, which is
//! returned separately (the spill) so callers can bound it in norm.

use crate::scaled::Wide;
use crate::shifts::WeightSeq;
use crate::spaces::{Seq, SpaceSpec};
use crate::witnesses::frac_pow;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// L_α(κ) = Σ_j α_j κ_j.
pub fn l_alpha(alpha: &[u32], kappa: &[f64]) -> f64 {
    alpha.iter().zip(kappa).map(|(&a, &k)| f64::from(a) * k).sum()
}

pub(crate) fn validate_index_set(a: &[Vec<u32>]) -> Result<usize> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("exponent set is empty".into()));
    }
    let d = a[0].len();
    if d == 0 {
        return Err(Error::InvalidParameter("exponent arity is zero".into()));
    }
    for alpha in a {
        if alpha.len() != d {
            return Err(Error::InvalidParameter("mixed exponent arities".into()));
        }
        if alpha.iter().all(|&x| x == 0) {
            return Err(Error::InvalidParameter("zero multi-index not allowed".into()));
        }
    }
    Ok(d)
}

/// Deterministic core of [`select_kappa_beta`]: given a direction κ0, find
/// the unique L-minimizer β (None when the argmin ties within 1e−9 relative)
/// and rescale κ so L_β(κ) = 1.
pub fn select_kappa_beta_from(a: &[Vec<u32>], kappa0: &[f64]) -> Option<(Vec<f64>, Vec<u32>)> {
    let mut best: Option<(f64, usize)> = None;
    let mut second = f64::INFINITY;
    for (i, alpha) in a.iter().enumerate() {
        let v = l_alpha(alpha, kappa0);
        match best {
            None => best = Some((v, i)),
            Some((b, _)) if v < b => {
                second = b;
                best = Some((v, i));
            }
            Some(_) => second = second.min(v),
        }
    }
    let (lb, ib) = best?;
    if a.len() > 1 && second - lb <= 1e-9 * lb.max(1.0) {
        return None;
    }
    let kappa: Vec<f64> = kappa0.iter().map(|k| k / lb).collect();
    Some((kappa, a[ib].clone()))
}

/// Sample positive directions κ0 until the L-minimizer over the exponent set
/// is unique, then normalize. Deterministic under the seed; the bounded retry
/// only trips on degenerate inputs (ties on every sampled direction).
pub fn select_kappa_beta(a: &[Vec<u32>], seed: u64) -> Result<(Vec<f64>, Vec<u32>)> {
    let d = validate_index_set(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let kappa0: Vec<f64> = (0..d).map(|_| 0.05 + 0.9 * rng.gen::<f64>()).collect();
        if let Some(found) = select_kappa_beta_from(a, &kappa0) {
            return Ok(found);
        }
    }
    Err(Error::SearchFailed("no direction separated the exponent set in 1000 draws".into()))
}

/// Inputs for the unilateral coordinatewise witness.
#[derive(Clone, Debug)]
pub struct CoordWitnessSpec {
    pub a: Vec<Vec<u32>>,
    /// Base points, one per algebra generator (arity d).
    pub x: Vec<Seq>,
    /// Target with support in [0, p].
    pub y: Seq,
    pub n_k: i64,
    pub kappa: Vec<f64>,
    pub beta: Vec<u32>,
}

impl CoordWitnessSpec {
    pub fn validate(&self) -> Result<()> {
        let d = validate_index_set(&self.a)?;
        if self.x.len() != d || self.kappa.len() != d || self.beta.len() != d {
            return Err(Error::InvalidParameter("arity mismatch between A, x, κ, β".into()));
        }
        if !self.a.iter().any(|al| al == &self.beta) {
            return Err(Error::InvalidParameter("β not in exponent set".into()));
        }
        let lb = l_alpha(&self.beta, &self.kappa);
        if (lb - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("L_β(κ) = {lb}, expected 1")));
        }
        for alpha in &self.a {
            if alpha != &self.beta && l_alpha(alpha, &self.kappa) <= 1.0 + 1e-12 {
                return Err(Error::InvalidParameter("κ does not strictly separate β".into()));
            }
        }
        let p = self.y.support_max().unwrap_or(0);
        for xj in &self.x {
            if xj.bilateral {
                return Err(Error::InvalidParameter("unilateral witness given bilateral x".into()));
            }
            if self.n_k <= xj.support_max().unwrap_or(-1) + p {
                return Err(Error::InvalidParameter("n_k too small for base-point support".into()));
            }
        }
        Ok(())
    }
}

/// Build u_j = x_j + Σ_{l=0}^p y_l^{κ_j} (w_{l+1}···w_{n_k+l})^{−κ_j} e_{n_k+l}
/// (principal branch in both factors; zero target coefficients contribute
/// nothing).
pub fn build_coordwise_witness(
    spec: &CoordWitnessSpec,
    w: &WeightSeq,
    space: &SpaceSpec,
) -> Result<Vec<Seq>> {
    spec.validate()?;
    if space.is_bilateral() || w.is_bilateral() {
        return Err(Error::InvalidParameter("unilateral construction on bilateral space".into()));
    }
    let p = spec.y.support_max().unwrap_or(0);
    if spec.n_k + p > w.horizon {
        return Err(Error::InvalidParameter(format!(
            "block end {} beyond weight horizon {}",
            spec.n_k + p,
            w.horizon
        )));
    }
    let mut out = Vec::with_capacity(spec.x.len());
    for (j, xj) in spec.x.iter().enumerate() {
        let kj = spec.kappa[j];
        let mut u = Seq::zero(w.horizon, false);
        for (i, c) in xj.support() {
            u.set(i, c);
        }
        for l in 0..=p {
            let yl = spec.y.get(l);
            if yl.is_zero() {
                continue;
            }
            let coef = frac_pow(yl, kj) * Wide::from_ln_polar(-kj * w.log_prod(l, spec.n_k + l), 0.0);
            u.set(spec.n_k + l, coef);
        }
        out.push(u);
    }
    Ok(out)
}

/// The claimed closed form of B^{n_k}(u^α) for α in the exponent set:
/// Σ_l y_l^{L_α(κ)} (w_{l+1}···w_{n_k+l})^{1−L_α(κ)} e_l (equals y at α = β).
pub fn predicted_coordwise_orbit(spec: &CoordWitnessSpec, w: &WeightSeq, alpha: &[u32]) -> Seq {
    let la = l_alpha(alpha, &spec.kappa);
    let p = spec.y.support_max().unwrap_or(0);
    let mut out = Seq::zero(w.horizon, false);
    for l in 0..=p {
        let yl = spec.y.get(l);
        if yl.is_zero() {
            continue;
        }
        let coef = frac_pow(yl, la) * Wide::from_ln_polar((1.0 - la) * w.log_prod(l, spec.n_k + l), 0.0);
        out.set(l, coef);
    }
    out
}

/// Bilateral witness and the spill its m_0-th power leaves on the negative side.
#[derive(Clone, Debug)]
pub struct BilateralWitness {
    pub u: Seq,
    /// Σ_l w_l···w_{−n_k+l+1} x_l^{m_0} e_{−n_k+l}: the exact negative-side
    /// part of B^{n_k}(u^{m_0}); B^{n_k}(u^{m_0}) = y + spill when supports
    /// separate.
    pub spill: Seq,
}

/// Build u = x + Σ_{l=−p}^p y_l^{1/m_0} (w_{l+1}···w_{n_k+l})^{−1/m_0} e_{n_k+l}
/// on a bilateral space. m_1 only bounds the verification sweep (powers
/// m_0..m_1); the block exponent is 1/m_0.
pub fn build_bilateral_witness(
    m0: u32,
    m1: u32,
    x: &Seq,
    y: &Seq,
    w: &WeightSeq,
    n_k: i64,
) -> Result<BilateralWitness> {
    if m0 < 1 || m1 < m0 {
        return Err(Error::InvalidParameter("need 1 ≤ m_0 ≤ m_1".into()));
    }
    if !w.is_bilateral() || !x.bilateral || !y.bilateral {
        return Err(Error::InvalidParameter("bilateral witness needs bilateral data".into()));
    }
    let p = y
        .support()
        .map(|(i, _)| i.abs())
        .max()
        .unwrap_or(0);
    let x_reach = x.support().map(|(i, _)| i.abs()).max().unwrap_or(-1);
    if n_k <= p + x_reach {
        return Err(Error::InvalidParameter("n_k too small for base-point support".into()));
    }
    if n_k + p > w.horizon {
        return Err(Error::InvalidParameter("block end beyond weight horizon".into()));
    }
    let inv_m0 = 1.0 / f64::from(m0);
    let mut u = Seq::zero(w.horizon, true);
    for (i, c) in x.support() {
        u.set(i, c);
    }
    for l in -p..=p {
        let yl = y.get(l);
        if yl.is_zero() {
            continue;
        }
        let coef = frac_pow(yl, inv_m0) * Wide::from_ln_polar(-inv_m0 * w.log_prod(l, n_k + l), 0.0);
        u.set(n_k + l, coef);
    }
    let mut spill = Seq::zero(w.horizon, true);
    for (l, c) in x.support() {
        if l - n_k < -w.horizon {
            return Err(Error::InvalidParameter(format!(
                "spill index {} beyond bilateral horizon {}",
                l - n_k,
                w.horizon
            )));
        }
        let coef = c.powu(m0) * Wide::from_ln_polar(w.log_prod(l - n_k, l), 0.0);
        spill.set(l - n_k, coef);
    }
    Ok(BilateralWitness { u, spill })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{power, ProductKind};
    use crate::shifts::{apply_shift, Direction, WeightKind};
    use crate::spaces::seq_from_complex;
    use num_complex::Complex64;

    fn rolewicz(h: i64) -> WeightSeq {
        WeightSeq::new(WeightKind::Rolewicz(2.0), h).unwrap()
    }

    fn rel_close(a: Wide, b: Wide, tol: f64) -> bool {
        Wide::rel_diff(a, b) < tol
    }

    #[test]
    fn kappa_beta_frozen_direction() {
        // L-values along κ0 = (1, 1.5): 1 for (1,0), 1.5 for (0,1), 2.5 for (1,1).
        let a = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let (kappa, beta) = select_kappa_beta_from(&a, &[1.0, 1.5]).unwrap();
        assert_eq!(beta, vec![1, 0]);
        assert!((kappa[0] - 1.0).abs() < 1e-15 && (kappa[1] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn kappa_beta_scalar_set_always_picks_min() {
        // d = 1: L_α(κ) = ακ, so the minimum exponent wins for every draw.
        let a = vec![vec![1], vec![2], vec![3]];
        for seed in [1u64, 42, 999] {
            let (kappa, beta) = select_kappa_beta(&a, seed).unwrap();
            assert_eq!(beta, vec![1]);
            assert!((kappa[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_beta_singleton_normalizes() {
        let a = vec![vec![2, 1]];
        let (kappa, beta) = select_kappa_beta(&a, 7).unwrap();
        assert_eq!(beta, vec![2, 1]);
        assert!((l_alpha(&beta, &kappa) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_beta_invariant_under_rescaling() {
        let a = vec![vec![2, 0, 1], vec![1, 1, 1], vec![0, 3, 0]];
        let kappa0 = [0.3, 0.7, 0.45];
        let scaled: Vec<f64> = kappa0.iter().map(|k| k * 3.0).collect();
        let (_, b1) = select_kappa_beta_from(&a, &kappa0).unwrap();
        let (_, b2) = select_kappa_beta_from(&a, &scaled).unwrap();
        assert_eq!(b1, b2);
    }

    #[test]
    fn scalar_witness_frozen_example() {
        // A = {1,2}, x = 0, y = e_0, n_k = 20 on the doubling weight:
        // u = 2^{−20} e_{20}, B^{20}u = e_0, B^{20}(u²) = 2^{−20} e_0.
        let w = rolewicz(64);
        let space = SpaceSpec::l1();
        let spec = CoordWitnessSpec {
            a: vec![vec![1], vec![2]],
            x: vec![Seq::zero(64, false)],
            y: Seq::basis(0, 64, false),
            n_k: 20,
            kappa: vec![1.0],
            beta: vec![1],
        };
        let u = build_coordwise_witness(&spec, &w, &space).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].num_nonzero(), 1);
        assert!(rel_close(u[0].get(20), Wide::from_ln_polar(-20.0 * 2f64.ln(), 0.0), 1e-13));

        let orbit1 = apply_shift(&w, &u[0], 20, Direction::Backward).unwrap();
        assert!(rel_close(orbit1.get(0), Wide::ONE, 1e-12));
        assert_eq!(orbit1.num_nonzero(), 1);

        let sq = power(&u[0], 2, ProductKind::Coordinatewise).unwrap();
        let orbit2 = apply_shift(&w, &sq, 20, Direction::Backward).unwrap();
        assert!(rel_close(orbit2.get(0), Wide::from_ln_polar(-20.0 * 2f64.ln(), 0.0), 1e-12));
    }

    #[test]
    fn zero_target_returns_base_points() {
        let w = rolewicz(40);
        let space = SpaceSpec::l1();
        let x = seq_from_complex(&[Complex64::new(0.5, -0.25), Complex64::new(0.0, 1.0)], 40);
        let spec = CoordWitnessSpec {
            a: vec![vec![1], vec![2]],
            x: vec![x.clone()],
            y: Seq::zero(40, false),
            n_k: 10,
            kappa: vec![1.0],
            beta: vec![1],
        };
        let u = build_coordwise_witness(&spec, &w, &space).unwrap();
        assert_eq!(u[0].num_nonzero(), x.num_nonzero());
        for (i, c) in x.support() {
            assert!(rel_close(u[0].get(i), c, 0.0 + 1e-15));
        }
    }

    #[test]
    fn orbit_formula_matches_shift_oracle() {
        // Full multi-index case: predictions for every α against the direct
        // power-then-shift computation.
        let w = rolewicz(200);
        let space = SpaceSpec::l1();
        let a = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let (kappa, beta) = select_kappa_beta_from(&a, &[1.0, 1.5]).unwrap();
        let x1 = seq_from_complex(&[Complex64::new(0.3, 0.1)], 200);
        let x2 = seq_from_complex(&[Complex64::new(-0.2, 0.0), Complex64::new(0.0, 0.4)], 200);
        let y = seq_from_complex(
            &[Complex64::new(1.0, -0.5), Complex64::new(0.25, 0.75), Complex64::new(-2.0, 0.125)],
            200,
        );
        let spec = CoordWitnessSpec { a: a.clone(), x: vec![x1, x2], y, n_k: 30, kappa, beta };
        let us = build_coordwise_witness(&spec, &w, &space).unwrap();
        for alpha in &a {
            let mono = crate::algebra::monomial_power(&us, alpha, ProductKind::Coordinatewise).unwrap();
            let got = apply_shift(&w, &mono, 30, Direction::Backward).unwrap();
            let want = predicted_coordwise_orbit(&spec, &w, alpha);
            // Base points sit below n_k − p and powers act per coordinate, so
            // after the shift the window [0, p] holds only block contributions.
            for l in 0..=2 {
                assert!(rel_close(got.get(l), want.get(l), 1e-9), "α={alpha:?} l={l}");
            }
        }
    }

    #[test]
    fn beta_orbit_recovers_target_exactly() {
        let w = rolewicz(120);
        let space = SpaceSpec::l1();
        let a = vec![vec![1]];
        let y = seq_from_complex(&[Complex64::new(0.5, 0.5), Complex64::new(-1.25, 2.0)], 120);
        let spec = CoordWitnessSpec {
            a,
            x: vec![Seq::zero(120, false)],
            y: y.clone(),
            n_k: 25,
            kappa: vec![1.0],
            beta: vec![1],
        };
        let us = build_coordwise_witness(&spec, &w, &space).unwrap();
        let got = apply_shift(&w, &us[0], 25, Direction::Backward).unwrap();
        for (i, c) in y.support() {
            assert!(rel_close(got.get(i), c, 1e-12));
        }
        assert_eq!(got.num_nonzero(), y.num_nonzero());
    }

    #[test]
    fn n_k_too_small_is_an_error() {
        let w = rolewicz(40);
        let space = SpaceSpec::l1();
        let mut x = Seq::zero(40, false);
        x.set(9, Wide::ONE);
        let spec = CoordWitnessSpec {
            a: vec![vec![1]],
            x: vec![x],
            y: Seq::basis(1, 40, false),
            n_k: 10,
            kappa: vec![1.0],
            beta: vec![1],
        };
        assert!(build_coordwise_witness(&spec, &w, &space).is_err());
    }

    fn inverse_example(h: i64) -> WeightSeq {
        WeightSeq::new(WeightKind::BilateralInverseExample, h).unwrap()
    }

    #[test]
    fn bilateral_no_spill_when_x_zero() {
        let w = inverse_example(80);
        let x = Seq::zero(80, true);
        let y = Seq::basis(0, 80, true);
        let wit = build_bilateral_witness(1, 2, &x, &y, &w, 30).unwrap();
        assert!(wit.spill.is_zero());
        let got = apply_shift(&w, &wit.u, 30, Direction::Backward).unwrap();
        assert!(rel_close(got.get(0), Wide::ONE, 1e-12));
        assert_eq!(got.num_nonzero(), 1);
    }

    #[test]
    fn bilateral_zero_target_keeps_base_point() {
        let w = inverse_example(80);
        let mut x = Seq::zero(80, true);
        x.set(0, Wide::new(2.0, 0.0));
        let y = Seq::zero(80, true);
        let wit = build_bilateral_witness(2, 2, &x, &y, &w, 25).unwrap();
        assert_eq!(wit.u.num_nonzero(), 1);
        assert!(rel_close(wit.u.get(0), Wide::new(2.0, 0.0), 1e-15));
        // Spill coefficient at −25: (w_0 w_{−1}···w_{−24}) x_0² = 25^{−2}·4
        // by the telescoping negative products.
        let expect = Wide::from_f64(4.0 / (25.0 * 25.0));
        assert!(rel_close(wit.spill.get(-25), expect, 1e-12));
    }

    #[test]
    fn bilateral_spill_matches_shift_oracle() {
        let w = inverse_example(100);
        let mut x = Seq::zero(100, true);
        x.set(-1, Wide::new(0.5, 0.25));
        x.set(2, Wide::new(-1.0, 1.0));
        let y = seq_from_complex(&[Complex64::new(1.0, 0.0)], 100);
        let mut yb = Seq::zero(100, true);
        for (i, c) in y.support() {
            yb.set(i, c);
        }
        yb.set(-1, Wide::new(0.0, 2.0));
        let m0 = 2;
        let wit = build_bilateral_witness(m0, 3, &x, &yb, &w, 40).unwrap();
        let powered = power(&wit.u, m0, ProductKind::Coordinatewise).unwrap();
        let orbit = apply_shift(&w, &powered, 40, Direction::Backward).unwrap();
        // Orbit = y + spill exactly: compare the negative side to the spill
        // and the [−p, p] window to the target.
        for (i, c) in wit.spill.support() {
            assert!(rel_close(orbit.get(i), c, 1e-11), "spill at {i}");
        }
        for l in -1..=1 {
            assert!(rel_close(orbit.get(l), yb.get(l), 1e-11), "target at {l}");
        }
    }
}
