//! Witnesses whose orbits return to a target along a positive-density set
//! of times.
//!
//! Coordinatewise: blocks v(Nj) = Σ_l v_l^{1/m_0} W(l, Nj+l)^{−1/m_0} e_{Nj+l}
//! are stacked at every multiple of N, so each B^{Nj} recovers v from its own
//! block (power m_0) while later blocks contribute a tail controlled by the
//! threshold N. Convolution: one block train at qj for j ∈ [cσ, dσ) plus a
//! spike ε e_{qσ} produces exact hits at every s ∈ E_σ = (m−1)qσ + q·[cσ, dσ),
//! a set whose count/max ratio stays above a fixed positive constant.

use crate::scaled::Wide;
use crate::shifts::WeightSeq;
use crate::spaces::{Seq, SpaceSpec};
use crate::witnesses::frac_pow;
use crate::{Error, Result};

fn capped_norm(space: &SpaceSpec, s: &Seq) -> Result<f64> {
    if space.single_norm() {
        space.seminorm(s, 1)
    } else {
        space.f_norm(s)
    }
}

/// Smallest scanned N ≥ p such that the worst case of
/// ‖Σ_{n≥N} Σ_{l=0}^p y(n,l) W(l, n+l)^{−1} e_{n+l}‖ over |y(n,l)| ≤ m_bound,
/// summed up to the horizon, is ≤ eps. Aligned phases make the worst case the
/// absolute-value sum, so the bound is a single norm evaluation per N.
pub fn find_tail_threshold(
    w: &WeightSeq,
    space: &SpaceSpec,
    eps: f64,
    p: i64,
    m_bound: f64,
) -> Result<i64> {
    if !(eps > 0.0) || !(m_bound > 0.0) {
        return Err(Error::InvalidParameter("need positive ε and coefficient bound".into()));
    }
    if p < 0 || p > w.horizon {
        return Err(Error::InvalidParameter("need 0 ≤ p ≤ horizon".into()));
    }
    if w.is_bilateral() || space.is_bilateral() {
        return Err(Error::InvalidParameter("tail threshold is a unilateral bound".into()));
    }
    let n_max = w.horizon - p;
    let mut worst = Seq::zero(w.horizon, false);
    for n in p..=n_max {
        for l in 0..=p {
            let add = Wide::from_ln_polar((m_bound).ln() - w.log_prod(l, n + l), 0.0);
            worst.set(n + l, worst.get(n + l) + add);
        }
    }
    for n in p..=n_max {
        if capped_norm(space, &worst)? <= eps {
            return Ok(n);
        }
        for l in 0..=p {
            let sub = Wide::from_ln_polar((m_bound).ln() - w.log_prod(l, n + l), 0.0);
            worst.set(n + l, worst.get(n + l) - sub);
        }
    }
    Err(Error::HorizonExhausted(format!(
        "no tail of [{p}, {n_max}] is bounded by {eps} at the horizon"
    )))
}

/// Coordinatewise witness with block train at N·j, j = n1 .. n1+terms−1.
#[derive(Clone, Debug)]
pub struct UfhcCoordWitness {
    pub u: Seq,
    /// Block start positions N·j actually written.
    pub blocks: Vec<i64>,
    /// Worst-case norm of requested blocks that were dropped (only nonzero
    /// when `terms` asks for more blocks than the horizon holds is an error
    /// instead; dropped means blocks beyond `terms` that still fit).
    pub tail_bound: f64,
}

/// u = x + Σ_{j=n1}^{n1+terms−1} Σ_{l=0}^p v_l^{1/m_0} W(l, Nj+l)^{−1/m_0} e_{Nj+l}.
/// Then B^{Nj}(u^{m_0}) = v + spill from later blocks, and for m_0 < m ≤ m_1
/// the same orbit times send u^m toward 0 at rate W(l, Nj+l)^{1−m/m_0}.
pub fn build_ufhc_coordwise(
    m0: u32,
    m1: u32,
    v: &Seq,
    x: &Seq,
    w: &WeightSeq,
    space: &SpaceSpec,
    n_big: i64,
    n1: i64,
    terms: usize,
) -> Result<UfhcCoordWitness> {
    if m0 < 1 || m1 < m0 {
        return Err(Error::InvalidParameter("need 1 ≤ m_0 ≤ m_1".into()));
    }
    if v.bilateral || x.bilateral || w.is_bilateral() || space.is_bilateral() {
        return Err(Error::InvalidParameter("construction is unilateral".into()));
    }
    if n1 < 1 || terms == 0 {
        return Err(Error::InvalidParameter("need n1 ≥ 1 and at least one block".into()));
    }
    let p = v.support_max().unwrap_or(0);
    if n_big <= p {
        return Err(Error::InvalidParameter(format!(
            "block spacing N = {n_big} must exceed the target degree {p}"
        )));
    }
    let x_top = x.support_max().unwrap_or(-1);
    if n_big * n1 <= x_top {
        return Err(Error::InvalidParameter(format!(
            "first block at {} must clear the base-point support {x_top}",
            n_big * n1
        )));
    }
    let last = n_big * (n1 + terms as i64 - 1);
    if last + p > w.horizon {
        return Err(Error::HorizonExhausted(format!(
            "last block ends at {} beyond horizon {}",
            last + p,
            w.horizon
        )));
    }
    let inv_m0 = 1.0 / f64::from(m0);
    let mut u = Seq::zero(w.horizon, false);
    for (i, c) in x.support() {
        u.set(i, c);
    }
    let mut blocks = Vec::with_capacity(terms);
    for t in 0..terms as i64 {
        let start = n_big * (n1 + t);
        blocks.push(start);
        for (l, vl) in v.support() {
            let coef = frac_pow(vl, inv_m0)
                * Wide::from_ln_polar(-inv_m0 * w.log_prod(l, start + l), 0.0);
            u.set(start + l, coef);
        }
    }
    // Blocks past `terms` that would still fit below the horizon are the
    // truncation error of the infinite train; bound them like the threshold
    // search does, with the block coefficients themselves.
    let mut dropped = Seq::zero(w.horizon, false);
    let mut j = n1 + terms as i64;
    while n_big * j + p <= w.horizon {
        for (l, vl) in v.support() {
            let idx = n_big * j + l;
            let add = Wide::from_ln_polar(
                inv_m0 * vl.ln_abs() - inv_m0 * w.log_prod(l, idx),
                0.0,
            );
            dropped.set(idx, dropped.get(idx) + add);
        }
        j += 1;
    }
    let tail_bound = capped_norm(space, &dropped)?;
    Ok(UfhcCoordWitness { u, blocks, tail_bound })
}

/// One row of the decay table for the return-time criterion: the worst-case
/// operator sum at lag σ, per seminorm index.
#[derive(Clone, Debug)]
pub struct CondBRow {
    pub sigma: i64,
    pub values: Vec<(u32, f64)>,
}

/// Σ_{n ≥ cσ} (w_1···w_{mσ})^{(m−1)/m} / (w_1···w_{(m−1)σ+n}) · ‖e_n‖_q,
/// summed while (m−1)σ + n stays within the horizon. Aligning phases attains
/// the sup, so the absolute-value sum is the exact worst case.
pub fn check_condition_b(
    w: &WeightSeq,
    space: &SpaceSpec,
    m: u32,
    c: f64,
    sigmas: &[i64],
    qs: &[u32],
) -> Result<Vec<CondBRow>> {
    if m < 2 {
        return Err(Error::InvalidParameter("criterion needs m ≥ 2".into()));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParameter("need 0 < c < 1".into()));
    }
    if w.is_bilateral() || space.is_bilateral() {
        return Err(Error::InvalidParameter("criterion is unilateral".into()));
    }
    let mf = f64::from(m);
    let mi = i64::from(m);
    let mut rows = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        if sigma < 1 || mi * sigma > w.horizon {
            return Err(Error::InvalidParameter(format!(
                "σ = {sigma} out of range for horizon {}",
                w.horizon
            )));
        }
        let lead = (mf - 1.0) / mf * w.lam(mi * sigma);
        let n_lo = (c * sigma as f64).ceil() as i64;
        let n_hi = w.horizon - (mi - 1) * sigma;
        let mut values = Vec::with_capacity(qs.len());
        for &q in qs {
            let mut total = Wide::ZERO;
            for n in n_lo..=n_hi {
                let ln_term = lead - w.lam((mi - 1) * sigma + n) + space.ln_norm_e(n, q);
                if ln_term.is_finite() {
                    total = total + Wide::from_ln_polar(ln_term, 0.0);
                }
            }
            values.push((q, total.to_f64()));
        }
        rows.push(CondBRow { sigma, values });
    }
    Ok(rows)
}

/// Convolution-side witness with its exact hit-time set.
#[derive(Clone, Debug)]
pub struct UfhcCauchyWitness {
    pub u: Seq,
    /// Hit times s = (m−1)qσ + qj, j = ⌈cσ⌉ .. ⌈dσ⌉−1.
    pub e_sigma: Vec<i64>,
    pub eps_ln: f64,
    /// card(E_σ) / max(E_σ) for this σ.
    pub card_ratio: f64,
    /// Limiting value (d−c)/((m−1)q + qd) the ratio approaches as σ grows.
    pub formula_ratio: f64,
}

/// u = x + Σ_{j=⌈cσ⌉}^{⌈dσ⌉−1} Σ_l d_{j,l} e_{qj+l} + ε e_{qσ} with
/// ε = W(0, mqσ)^{−1/m} and d_{j,l} = y_l / (m ε^{m−1} W(l, (m−1)qσ+qj+l)).
/// Every s ∈ E_σ then gives B^s(u^m) = y + lag echoes whose indices start at
/// q, and B^s(u^n) = 0 exactly for n < m.
pub fn build_ufhc_cauchy(
    m: u32,
    y: &Seq,
    x: &Seq,
    w: &WeightSeq,
    space: &SpaceSpec,
    c: f64,
    d: f64,
    q: i64,
    sigma: i64,
) -> Result<UfhcCauchyWitness> {
    if m < 2 {
        return Err(Error::InvalidParameter("construction needs m ≥ 2".into()));
    }
    if !(c > 0.0 && c < d && d < (1.0 + c) / 2.0) {
        return Err(Error::InvalidParameter("need 0 < c < d < (1+c)/2".into()));
    }
    if y.bilateral || x.bilateral || w.is_bilateral() || space.is_bilateral() {
        return Err(Error::InvalidParameter("construction is unilateral".into()));
    }
    let p = y.support_max().unwrap_or(-1);
    if q <= p || q < 1 {
        return Err(Error::InvalidParameter(format!("need q > target degree {p}")));
    }
    let mi = i64::from(m);
    let mf = f64::from(m);
    if mi * q * sigma > w.horizon {
        return Err(Error::HorizonExhausted(format!(
            "top power support {} beyond horizon {}",
            mi * q * sigma,
            w.horizon
        )));
    }
    let j_lo = (c * sigma as f64).ceil() as i64;
    let j_hi = (d * sigma as f64).ceil() as i64 - 1;
    if j_hi < j_lo {
        return Err(Error::InvalidParameter(format!(
            "σ = {sigma} too small: no block index in [{c}σ, {d}σ)"
        )));
    }
    let x_top = x.support_max().unwrap_or(-1);
    if x_top >= q * j_lo {
        return Err(Error::InvalidParameter(format!(
            "support separation fails at index {x_top}: base point reaches the block train at {}",
            q * j_lo
        )));
    }
    let block_top = q * j_hi + p.max(0);
    if block_top >= q * sigma {
        return Err(Error::InvalidParameter(format!(
            "support separation fails at index {block_top}: block train reaches the spike at {}",
            q * sigma
        )));
    }
    let s_min = (mi - 1) * q * sigma + q * j_lo;
    let cross_top = 2 * block_top + (mi - 2) * q * sigma;
    if cross_top >= s_min {
        return Err(Error::InvalidParameter(format!(
            "support separation fails at index {cross_top}: square of the block train reaches the hit set at {s_min}"
        )));
    }

    let eps_ln = -w.lam(mi * q * sigma) / mf;
    let mut u = Seq::zero(w.horizon, false);
    for (i, coef) in x.support() {
        u.set(i, coef);
    }
    for j in j_lo..=j_hi {
        for (l, yl) in y.support() {
            let ln_factor =
                -(mf - 1.0) * eps_ln - mf.ln() - w.log_prod(l, (mi - 1) * q * sigma + q * j + l);
            u.set(q * j + l, yl * Wide::from_ln_polar(ln_factor, 0.0));
        }
    }
    u.set(q * sigma, Wide::from_ln_polar(eps_ln, 0.0));

    let e_sigma: Vec<i64> = (j_lo..=j_hi).map(|j| (mi - 1) * q * sigma + q * j).collect();
    let card_ratio = e_sigma.len() as f64 / *e_sigma.last().unwrap() as f64;
    let formula_ratio = (d - c) / ((mf - 1.0) * q as f64 + q as f64 * d);
    Ok(UfhcCauchyWitness { u, e_sigma, eps_ln, card_ratio, formula_ratio })
}
