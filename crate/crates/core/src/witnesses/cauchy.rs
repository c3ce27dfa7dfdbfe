//! Convolution-product (Cauchy) witnesses.
//!
//! Given a finite exponent set A ⊂ ℕ^d with lex-maximal β (write m = β_1),
//! the witness places, on top of the base points x_i, a low block carrying
//! the target, one high spike ε e_{J_k} on the first generator, and spikes
//! η_i e_{s_i} on the others. Shift amounts s are chosen so that after
//! B^N with N = mJ_k − 3p + ρ (ρ = Σ_{i≥2} β_i s_i) every monomial u^α,
//! α ≠ β, has support strictly below N and so vanishes exactly, while
//! B^N(u^β) = y + residual with the one-term residual ε^m η^β W(3p, mJ_k+ρ)
//! e_{3p} written in closed form. When m = 1 the spike is unnecessary:
//! the block sits at J_k + j, N = J_k + ρ, and the orbit hits y exactly.

use crate::scaled::Wide;
use crate::shifts::WeightSeq;
use crate::spaces::{Seq, SpaceSpec};
use crate::witnesses::coordwise::validate_index_set;
use crate::{Error, Result};

/// Lexicographically maximal element of a nonempty exponent set.
pub fn lex_max(a: &[Vec<u32>]) -> Vec<u32> {
    a.iter().max().cloned().unwrap_or_default()
}

fn max_support(x: &Seq) -> i64 {
    x.support_max().unwrap_or(-1)
}

/// Shift amounts with caller-supplied floors (0-based: floors[i] bounds
/// s_{i+1}). Indices 2..d are fixed by backward induction so any α that
/// shares the first exponent with β loses more than 3p positions; index 1
/// is the J_k threshold that kills every α with α_1 < β_1.
pub fn choose_shift_amounts_with_floors(
    a: &[Vec<u32>],
    beta: &[u32],
    p: i64,
    floors: &[i64],
) -> Result<Vec<i64>> {
    let d = validate_index_set(a)?;
    if beta.len() != d || floors.len() != d {
        return Err(Error::InvalidParameter("arity mismatch in shift-amount search".into()));
    }
    if &lex_max(a) != beta {
        return Err(Error::InvalidParameter("β must be the lex-max of the exponent set".into()));
    }
    let m = i64::from(beta[0]);
    if m < 1 {
        return Err(Error::InvalidParameter("leading exponent of β must be ≥ 1".into()));
    }
    let mut s = vec![0i64; d];
    // Backward induction over coordinates d..2. At each step the worst
    // remaining contribution of later coordinates may be negative (some
    // member can exceed β there), so it is folded into the requirement.
    for i in (1..d).rev() {
        let future_worst: i64 = (i + 1..d)
            .map(|ip| {
                a.iter()
                    .map(|al| (i64::from(beta[ip]) - i64::from(al[ip])) * s[ip])
                    .min()
                    .unwrap()
            })
            .sum();
        let mut si = floors[i];
        for al in a {
            let v = i64::from(al[i]);
            let bi = i64::from(beta[i]);
            if v < bi {
                si = si.max((3 * p - future_worst).div_euclid(bi - v) + 1);
            }
        }
        s[i] = si;
    }
    // J_k threshold: any member with a strictly smaller leading exponent
    // must lose at least one position per missing power of J_k.
    let mut s1 = floors[0];
    for al in a {
        let a1 = i64::from(al[0]);
        if a1 < m {
            let deficit: i64 =
                (1..d).map(|i| (i64::from(al[i]) - i64::from(beta[i])) * s[i]).sum();
            s1 = s1.max((3 * p + deficit).div_euclid(m - a1) + 1);
        }
    }
    s[0] = s1;
    // Exhaustive re-check of the separation property the induction targets.
    for al in a {
        if al == beta {
            continue;
        }
        let a1 = i64::from(al[0]);
        if a1 == m {
            let margin: i64 =
                (1..d).map(|i| (i64::from(beta[i]) - i64::from(al[i])) * s[i]).sum();
            if margin <= 3 * p {
                return Err(Error::SearchFailed(format!(
                    "shift amounts fail separation for {al:?}: margin {margin} ≤ {}",
                    3 * p
                )));
            }
        } else {
            let deficit: i64 =
                (1..d).map(|i| (i64::from(al[i]) - i64::from(beta[i])) * s[i]).sum();
            if (m - a1) * s[0] <= 3 * p + deficit {
                return Err(Error::SearchFailed(format!(
                    "J_k threshold fails separation for {al:?}"
                )));
            }
        }
    }
    Ok(s)
}

/// Shift amounts with the default floors s_i > 4p.
pub fn choose_shift_amounts(a: &[Vec<u32>], beta: &[u32], p: i64) -> Result<Vec<i64>> {
    let d = validate_index_set(a)?;
    choose_shift_amounts_with_floors(a, beta, p, &vec![4 * p + 1; d])
}

/// Inputs for the convolution witness at one orbit time J_k.
#[derive(Clone, Debug)]
pub struct CauchyWitnessSpec {
    pub a: Vec<Vec<u32>>,
    pub beta: Vec<u32>,
    /// s[0] is the admissibility threshold for J_k; s[1..] are the spike
    /// positions of generators 2..d.
    pub s: Vec<i64>,
    /// Spike sizes; eta[0] is unused and must be 1.
    pub eta: Vec<f64>,
    pub x: Vec<Seq>,
    /// Target with support in [0, p].
    pub y: Seq,
    pub j_k: i64,
    /// Seminorm index used to size η and ε.
    pub r: u32,
    pub p: i64,
}

impl CauchyWitnessSpec {
    pub fn validate(&self, w: &WeightSeq) -> Result<()> {
        let d = validate_index_set(&self.a)?;
        if self.beta.len() != d || self.s.len() != d || self.eta.len() != d || self.x.len() != d {
            return Err(Error::InvalidParameter("arity mismatch in witness spec".into()));
        }
        if lex_max(&self.a) != self.beta {
            return Err(Error::InvalidParameter("β must be the lex-max of the exponent set".into()));
        }
        let p = self.p;
        if p < 1 {
            return Err(Error::InvalidParameter("p must be ≥ 1 (zero-pad flat targets)".into()));
        }
        if self.y.bilateral || w.is_bilateral() {
            return Err(Error::InvalidParameter("convolution witness is unilateral".into()));
        }
        if max_support(&self.y) > p || self.y.support_min().unwrap_or(0) < 0 {
            return Err(Error::InvalidParameter("target support must lie in [0, p]".into()));
        }
        if (self.eta[0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("eta[0] must be 1 (first generator has no spike)".into()));
        }
        for (i, (&si, &ei)) in self.s.iter().zip(&self.eta).enumerate() {
            if si <= 4 * p {
                return Err(Error::InvalidParameter(format!("s_{} = {si} must exceed 4p = {}", i + 1, 4 * p)));
            }
            if !(ei > 0.0 && ei.is_finite()) {
                return Err(Error::InvalidParameter(format!("η_{} must be positive and finite", i + 1)));
            }
        }
        for (i, xi) in self.x.iter().enumerate() {
            if xi.bilateral {
                return Err(Error::InvalidParameter("base points must be unilateral".into()));
            }
            if i >= 1 && max_support(xi) + 3 * p >= self.s[i] {
                return Err(Error::InvalidParameter(format!(
                    "base point {} crowds its spike: support {} needs s > support + 3p",
                    i + 1,
                    max_support(xi)
                )));
            }
        }
        if max_support(&self.x[0]) > self.j_k - 4 * p {
            return Err(Error::InvalidParameter("first base point crowds the block: need support ≤ J_k − 4p".into()));
        }
        if self.j_k < self.s[0] || self.j_k <= 3 * p {
            return Err(Error::InvalidParameter(format!(
                "J_k = {} below admissibility threshold {}",
                self.j_k,
                self.s[0].max(3 * p + 1)
            )));
        }
        let m = i64::from(self.beta[0]);
        let rho = self.rho();
        let top = if m >= 2 { m * self.j_k + rho } else { self.j_k + p + rho };
        if top > w.horizon {
            return Err(Error::HorizonExhausted(format!(
                "witness support reaches {top} beyond weight horizon {}",
                w.horizon
            )));
        }
        // The same separation the shift-amount search enforces, re-checked
        // against the actual spec values.
        for al in &self.a {
            if al == &self.beta {
                continue;
            }
            let a1 = i64::from(al[0]);
            let diff: i64 = (1..self.s.len())
                .map(|i| (i64::from(self.beta[i]) - i64::from(al[i])) * self.s[i])
                .sum();
            let ok = if a1 == m {
                diff > 3 * p
            } else {
                (m - a1) * self.j_k > 3 * p - diff
            };
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "spec fails monomial separation at {al:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn rho(&self) -> i64 {
        (1..self.s.len()).map(|i| i64::from(self.beta[i]) * self.s[i]).sum()
    }
}

/// Witness output: components u_i, orbit time N, and the exact residual of
/// B^N(u^β) − y (a single coefficient at e_{3p}; zero when β_1 = 1).
#[derive(Clone, Debug)]
pub struct CauchyWitness {
    pub u: Vec<Seq>,
    pub n: i64,
    /// ln ε (−∞ in the β_1 = 1 branch, which needs no spike).
    pub eps_ln: f64,
    pub rho: i64,
    pub residual: Seq,
}

/// Assemble a full spec from raw data: p from the target (at least 1),
/// spike floors from the base-point supports, η_i sized so ‖η_i e_{s_i}‖_r
/// = δ/2.
pub fn prepare_cauchy_witness(
    a: &[Vec<u32>],
    x: &[Seq],
    y: &Seq,
    w: &WeightSeq,
    space: &SpaceSpec,
    r: u32,
    delta: f64,
    j_k: i64,
) -> Result<CauchyWitnessSpec> {
    let d = validate_index_set(a)?;
    if x.len() != d {
        return Err(Error::InvalidParameter("one base point per generator".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("δ must be positive".into()));
    }
    let beta = lex_max(a);
    let p = max_support(y).max(1);
    let mut floors = vec![0i64; d];
    floors[0] = (4 * p + 1).max(max_support(&x[0]) + 4 * p + 1);
    for i in 1..d {
        floors[i] = (4 * p + 1).max(max_support(&x[i]) + 3 * p + 1);
    }
    let s = choose_shift_amounts_with_floors(a, &beta, p, &floors)?;
    let mut eta = vec![1.0; d];
    for i in 1..d {
        let ln_e = space.ln_norm_e(s[i], r);
        eta[i] = 0.5 * delta * (-ln_e).exp();
        if !(eta[i] > 0.0 && eta[i].is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "η_{} not representable: ‖e_{}‖ has ln = {ln_e}",
                i + 1,
                s[i]
            )));
        }
    }
    let spec = CauchyWitnessSpec {
        a: a.to_vec(),
        beta,
        s,
        eta,
        x: x.to_vec(),
        y: y.clone(),
        j_k,
        r,
        p,
    };
    spec.validate(w)?;
    Ok(spec)
}

/// Admissible orbit times, geometrically spaced from the threshold up to
/// the horizon limit.
pub fn find_jk_candidates(
    a: &[Vec<u32>],
    x: &[Seq],
    y: &Seq,
    w: &WeightSeq,
    space: &SpaceSpec,
    r: u32,
    delta: f64,
    count: usize,
) -> Result<Vec<i64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("need at least one candidate".into()));
    }
    let d = validate_index_set(a)?;
    let beta = lex_max(a);
    let p = max_support(y).max(1);
    let mut floors = vec![0i64; d];
    floors[0] = (4 * p + 1).max(max_support(&x[0]) + 4 * p + 1);
    for i in 1..d {
        floors[i] = (4 * p + 1).max(max_support(&x[i]) + 3 * p + 1);
    }
    let s = choose_shift_amounts_with_floors(a, &beta, p, &floors)?;
    let rho: i64 = (1..d).map(|i| i64::from(beta[i]) * s[i]).sum();
    let m = i64::from(beta[0]);
    let lo = s[0].max(3 * p + 1);
    let hi = if m >= 2 { (w.horizon - rho).div_euclid(m) } else { w.horizon - rho - p };
    if hi < lo {
        return Err(Error::HorizonExhausted(format!(
            "no admissible J_k: threshold {lo} exceeds horizon limit {hi}"
        )));
    }
    let _ = (space, delta, r);
    let mut out = Vec::with_capacity(count);
    if count == 1 {
        out.push(lo);
    } else {
        let ratio = (hi as f64 / lo as f64).max(1.0);
        for i in 0..count {
            let t = i as f64 / (count - 1) as f64;
            let j = ((lo as f64) * ratio.powf(t)).round() as i64;
            out.push(j.clamp(lo, hi));
        }
        out.dedup();
    }
    Ok(out)
}

/// Build the witness at spec.j_k and its exact orbit residual.
pub fn build_cauchy_witness(
    spec: &CauchyWitnessSpec,
    w: &WeightSeq,
    space: &SpaceSpec,
) -> Result<CauchyWitness> {
    spec.validate(w)?;
    if space.is_bilateral() {
        return Err(Error::InvalidParameter("convolution witness is unilateral".into()));
    }
    let d = spec.x.len();
    let m = i64::from(spec.beta[0]);
    let p = spec.p;
    let j_k = spec.j_k;
    let rho = spec.rho();
    let ln_eta_beta: f64 =
        (1..d).filter(|&i| spec.beta[i] > 0).map(|i| f64::from(spec.beta[i]) * spec.eta[i].ln()).sum();

    let mut u = Vec::with_capacity(d);
    let mut residual = Seq::zero(w.horizon, false);
    let (n, eps_ln);
    if m >= 2 {
        n = m * j_k - 3 * p + rho;
        // ε is the geometric mean of its two log-domain constraints: large
        // enough that the block coefficients d_j stay small, small enough
        // that the spike and the residual do.
        let mf = m as f64;
        let lower = if spec.y.is_zero() {
            None
        } else {
            spec.y
                .support()
                .map(|(l, _)| {
                    (space.ln_norm_e(j_k - 3 * p + l, spec.r) - w.lam(m * j_k - 3 * p + l + rho))
                        / (2.0 * (mf - 1.0))
                })
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        };
        let upper = 0.5 * (-space.ln_norm_e(j_k, spec.r)).min(-w.lam(m * j_k + rho) / mf);
        let e_ln = lower.map_or(2.0 * upper, |lo| lo + upper);
        if !e_ln.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "log-domain underflow choosing ε: ln ε = {e_ln}"
            )));
        }
        eps_ln = e_ln;

        let mut u1 = Seq::zero(w.horizon, false);
        for (i, c) in spec.x[0].support() {
            u1.set(i, c);
        }
        for (l, yl) in spec.y.support() {
            let ln_factor = w.lam(l)
                - w.lam(m * j_k - 3 * p + l + rho)
                - (mf - 1.0) * eps_ln
                - ln_eta_beta
                - mf.ln();
            u1.set(j_k - 3 * p + l, yl * Wide::from_ln_polar(ln_factor, 0.0));
        }
        u1.set(j_k, Wide::from_ln_polar(eps_ln, 0.0));
        u.push(u1);

        let res_ln = mf * eps_ln + ln_eta_beta + w.lam(m * j_k + rho) - w.lam(3 * p);
        residual.set(3 * p, Wide::from_ln_polar(res_ln, 0.0));
    } else {
        n = j_k + rho;
        eps_ln = f64::NEG_INFINITY;
        let mut u1 = Seq::zero(w.horizon, false);
        for (i, c) in spec.x[0].support() {
            u1.set(i, c);
        }
        for (l, yl) in spec.y.support() {
            let ln_factor = w.lam(l) - w.lam(j_k + l + rho) - ln_eta_beta;
            u1.set(j_k + l, yl * Wide::from_ln_polar(ln_factor, 0.0));
        }
        u.push(u1);
    }
    for i in 1..d {
        let mut ui = Seq::zero(w.horizon, false);
        for (idx, c) in spec.x[i].support() {
            ui.set(idx, c);
        }
        ui.set(spec.s[i], Wide::from_f64(spec.eta[i]));
        u.push(ui);
    }
    Ok(CauchyWitness { u, n, eps_ln, rho, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{monomial_power, power, ProductKind};
    use crate::shifts::{apply_shift, Direction, WeightKind};
    use crate::spaces::seq_from_complex;
    use num_complex::Complex64;

    fn rolewicz(h: i64) -> WeightSeq {
        WeightSeq::new(WeightKind::Rolewicz(2.0), h).unwrap()
    }

    #[test]
    fn lex_max_picks_last_in_order() {
        assert_eq!(lex_max(&[vec![1, 1], vec![1, 0], vec![0, 1]]), vec![1, 1]);
        assert_eq!(lex_max(&[vec![1], vec![2]]), vec![2]);
        assert_eq!(lex_max(&[vec![2, 0], vec![1, 9]]), vec![2, 0]);
    }

    #[test]
    fn shift_amounts_frozen_small_family() {
        // p = 1 floors are 5; the single non-β candidate per coordinate
        // needs only ⌊3p⌋+1 = 4, so the floors bind: s = (5, 5).
        let a = vec![vec![1, 1], vec![1, 0], vec![0, 1]];
        let s = choose_shift_amounts(&a, &[1, 1], 1).unwrap();
        assert_eq!(s, vec![5, 5]);
    }

    #[test]
    fn shift_amounts_dominating_later_coordinate() {
        // (1,3) beats β = (2,1) on the tail, so the J_k threshold must climb:
        // (3p + (3−1)·5)/(2−1) + 1 = 14.
        let a = vec![vec![2, 1], vec![2, 0], vec![1, 3]];
        let s = choose_shift_amounts(&a, &[2, 1], 1).unwrap();
        assert_eq!(s, vec![14, 5]);
    }

    #[test]
    fn shift_amounts_reject_wrong_beta() {
        let a = vec![vec![1, 1], vec![2, 0]];
        assert!(choose_shift_amounts(&a, &[1, 1], 1).is_err());
    }

    #[test]
    fn scalar_witness_orbit_matches_target() {
        // A = {1, 2} on the doubling weight: B^N(u) = 0 exactly and
        // B^N(u²) = y + residual exactly, residual carried at e_{3p}.
        let w = rolewicz(256);
        let space = SpaceSpec::l1();
        let x = [Seq::zero(256, false)];
        let y = seq_from_complex(&[Complex64::new(0.0, 0.0), Complex64::new(0.5, -0.25)], 256);
        let a = vec![vec![1], vec![2]];
        let spec = prepare_cauchy_witness(&a, &x, &y, &w, &space, 1, 0.5, 20).unwrap();
        assert_eq!(spec.p, 1);
        assert_eq!(spec.s, vec![5]);
        let wit = build_cauchy_witness(&spec, &w, &space).unwrap();
        assert_eq!(wit.n, 2 * 20 - 3);
        assert_eq!(wit.rho, 0);

        let first = apply_shift(&w, &wit.u[0], wit.n, Direction::Backward).unwrap();
        assert!(first.is_zero());

        let sq = power(&wit.u[0], 2, ProductKind::Cauchy).unwrap();
        assert_eq!(sq.tail_bound, 0.0);
        let orbit = apply_shift(&w, &sq, wit.n, Direction::Backward).unwrap();
        let expect = y.add(&wit.residual);
        assert_eq!(orbit.num_nonzero(), 2);
        for (i, c) in expect.support() {
            assert!(Wide::rel_diff(orbit.get(i), c) < 1e-9, "at {i}");
        }
    }

    #[test]
    fn scalar_witness_residual_decreases() {
        let w = rolewicz(128);
        let space = SpaceSpec::l1();
        let x = [Seq::zero(128, false)];
        let y = seq_from_complex(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], 128);
        let a = vec![vec![1], vec![2]];
        let mut prev = f64::INFINITY;
        for j_k in [12, 24, 48] {
            let spec = prepare_cauchy_witness(&a, &x, &y, &w, &space, 1, 0.5, j_k).unwrap();
            let wit = build_cauchy_witness(&spec, &w, &space).unwrap();
            let sq = power(&wit.u[0], 2, ProductKind::Cauchy).unwrap();
            let orbit = apply_shift(&w, &sq, wit.n, Direction::Backward).unwrap();
            let err = space.seminorm(&orbit.sub(&y), 1).unwrap();
            let res = space.seminorm(&wit.residual, 1).unwrap();
            assert!((err - res).abs() <= 1e-12 * res.max(1.0), "orbit error equals residual norm");
            assert!(res < prev, "residual must shrink along J_k");
            prev = res;
        }
    }

    #[test]
    fn linear_branch_hits_target_exactly() {
        // β = (1, 2): no spike on the first generator, zero residual.
        let w = rolewicz(64);
        let space = SpaceSpec::l1();
        let a = vec![vec![1, 2], vec![0, 1]];
        let x = [Seq::zero(64, false), Seq::zero(64, false)];
        let y = seq_from_complex(&[Complex64::new(0.3, 0.0), Complex64::new(-1.0, 1.0)], 64);
        let spec = prepare_cauchy_witness(&a, &x, &y, &w, &space, 1, 0.5, 20).unwrap();
        assert_eq!(spec.s, vec![5, 5]);
        let wit = build_cauchy_witness(&spec, &w, &space).unwrap();
        assert_eq!(wit.n, 20 + 10);
        assert!(wit.residual.is_zero());
        assert!(wit.eps_ln == f64::NEG_INFINITY);

        let mono = monomial_power(&wit.u, &[1, 2], ProductKind::Cauchy).unwrap();
        assert_eq!(mono.tail_bound, 0.0);
        let orbit = apply_shift(&w, &mono, wit.n, Direction::Backward).unwrap();
        assert_eq!(orbit.num_nonzero(), y.num_nonzero());
        for (i, c) in y.support() {
            assert!(Wide::rel_diff(orbit.get(i), c) < 1e-12, "at {i}");
        }

        let other = monomial_power(&wit.u, &[0, 1], ProductKind::Cauchy).unwrap();
        let gone = apply_shift(&w, &other, wit.n, Direction::Backward).unwrap();
        assert!(gone.is_zero());
    }

    #[test]
    fn all_nonbeta_monomials_vanish() {
        // Five-member family with nonzero base points; every monomial except
        // β dies exactly under B^N, and β lands on y + residual.
        let w = rolewicz(128);
        let space = SpaceSpec::l1();
        let a = vec![vec![2, 1], vec![2, 0], vec![1, 3], vec![1, 0], vec![0, 2]];
        let x1 = seq_from_complex(&[Complex64::new(0.5, 0.0)], 128);
        let x2 = seq_from_complex(&[Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)], 128);
        let y = seq_from_complex(&[Complex64::new(1.0, -2.0)], 128);
        let js = find_jk_candidates(&a, &[x1.clone(), x2.clone()], &y, &w, &space, 1, 0.5, 3).unwrap();
        assert!(js.len() >= 2 && js.windows(2).all(|p| p[0] < p[1]));
        let spec =
            prepare_cauchy_witness(&a, &[x1, x2], &y, &w, &space, 1, 0.5, js[0]).unwrap();
        assert_eq!(spec.s, vec![14, 5]);
        let wit = build_cauchy_witness(&spec, &w, &space).unwrap();
        for al in &a {
            if al == &spec.beta {
                continue;
            }
            let mono = monomial_power(&wit.u, al, ProductKind::Cauchy).unwrap();
            assert_eq!(mono.tail_bound, 0.0, "within horizon for {al:?}");
            let orbit = apply_shift(&w, &mono, wit.n, Direction::Backward).unwrap();
            assert!(orbit.is_zero(), "monomial {al:?} must vanish");
        }
        let mono = monomial_power(&wit.u, &spec.beta, ProductKind::Cauchy).unwrap();
        let orbit = apply_shift(&w, &mono, wit.n, Direction::Backward).unwrap();
        let expect = y.add(&wit.residual);
        for (i, c) in expect.support() {
            assert!(Wide::rel_diff(orbit.get(i), c) < 1e-9, "at {i}");
        }
        assert_eq!(orbit.num_nonzero(), expect.num_nonzero());
    }

    #[test]
    fn crowded_base_point_is_rejected() {
        let w = rolewicz(64);
        let space = SpaceSpec::l1();
        let mut x1 = Seq::zero(64, false);
        x1.set(17, Wide::ONE);
        let y = seq_from_complex(&[Complex64::new(1.0, 0.0)], 64);
        let a = vec![vec![1], vec![2]];
        // J_k = 20, p = 1: support 17 > J_k − 4p = 16.
        assert!(prepare_cauchy_witness(&a, &[x1], &y, &w, &space, 1, 0.5, 20).is_err());
    }

    #[test]
    fn flat_target_is_padded_to_p_one() {
        let w = rolewicz(64);
        let space = SpaceSpec::l1();
        let x = [Seq::zero(64, false)];
        let y = seq_from_complex(&[Complex64::new(2.0, 0.0)], 64);
        let a = vec![vec![1], vec![2]];
        let spec = prepare_cauchy_witness(&a, &x, &y, &w, &space, 1, 0.5, 20).unwrap();
        assert_eq!(spec.p, 1);
        let wit = build_cauchy_witness(&spec, &w, &space).unwrap();
        let sq = power(&wit.u[0], 2, ProductKind::Cauchy).unwrap();
        let orbit = apply_shift(&w, &sq, wit.n, Direction::Backward).unwrap();
        assert!(Wide::rel_diff(orbit.get(0), Wide::new(2.0, 0.0)) < 1e-9);
    }

    #[test]
    fn jk_candidates_respect_horizon() {
        let w = rolewicz(100);
        let space = SpaceSpec::l1();
        let x = [Seq::zero(100, false)];
        let y = seq_from_complex(&[Complex64::new(1.0, 0.0)], 100);
        let a = vec![vec![1], vec![2]];
        let js = find_jk_candidates(&a, &x, &y, &w, &space, 1, 0.5, 4).unwrap();
        for &j in &js {
            assert!(j >= 5 && 2 * j <= 100);
        }
        let tiny = WeightSeq::new(WeightKind::Rolewicz(2.0), 8).unwrap();
        assert!(find_jk_candidates(&a, &[Seq::zero(8, false)], &y, &tiny, &space, 1, 0.5, 3).is_err());
    }
}
