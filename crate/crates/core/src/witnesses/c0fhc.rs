//! Sup-norm frequent witness on block weights.
//!
//! The weight is constant 2 up to M_2 and then, across each block
//! (M_k, M_{k+1}], multiplies up to the k-th root of the preceding product,
//! so W(0, M_{k+1}) = W(0, M_k)^{1+1/k}: products crawl to infinity while the
//! weights sink to 1. Each target (v(p), m(p)) is carried by blocks on
//! B(p) = every-N(p)-th element of A(p); the threshold N(p) aggregates four
//! log-domain scans and guarantees the block coefficients are small enough
//! that all three orbit inequalities hold with room 1/p.
//!
//! All verification here is at the horizon: exact values for materialized
//! blocks, plus closed tail bounds for hypothetical blocks beyond, using
//! only that the weights are ≥ 1 and non-increasing.

use crate::densitysets::{thin_separate, DensityFamily};
use crate::scaled::Wide;
use crate::shifts::{WeightKind, WeightSeq};
use crate::spaces::{Seq, SpaceSpec};
use crate::witnesses::frac_pow;
use crate::{Error, Result};
use std::collections::HashMap;

/// Threshold report: the four components and the returned max.
#[derive(Clone, Debug)]
pub struct NrReport {
    pub n_r: i64,
    /// Smallest n with C²/W(0,n) < 1/r.
    pub n0: i64,
    /// M_{k_0+1}, where k_0 is the smallest k with C²/W(0,M_k) < 1/r.
    pub m_k0_plus_1: i64,
    /// M_{k_1}, where k_1 is the smallest k with
    /// W(M_{k−1},M_{k+1})·C/W(0,M_{k+1})^{α_0} < 1/r.
    pub m_k1: i64,
    /// Smallest n from which the coefficient-smallness sup stays < 1/r.
    pub i_threshold: i64,
    /// Sampled cross-pair inequality evaluations that were checked.
    pub ii_samples: usize,
}

fn mk_sequence(w: &WeightSeq) -> Result<&[i64]> {
    match &w.kind {
        WeightKind::MkWeight(ms) => Ok(ms),
        _ => Err(Error::InvalidParameter("threshold scan needs the block weight".into())),
    }
}

/// The coefficient-smallness quantity of target r at position (n, l):
/// |v_l|^{1/m} W(l, n+l)^{−1/(m(m+1))}.
fn smallness(v: &Seq, m: u32, w: &WeightSeq, n: i64, l: i64) -> f64 {
    let vl = v.get(l);
    if vl.is_zero() {
        return 0.0;
    }
    let mf = f64::from(m);
    (vl.ln_abs() / mf - w.log_prod(l, n + l) / (mf * (mf + 1.0))).exp()
}

/// N(r) = max of the four scan thresholds for target r (1-based index into
/// the target lists). Re-verifies the two coefficient inequalities after the
/// fact: the smallness sup exhaustively on [N(r), horizon], the cross-pair
/// bound on sampled (j, j′, l, α) with family-compatible separations.
pub fn compute_nr(
    r: usize,
    w: &WeightSeq,
    space: &SpaceSpec,
    v_seq: &[Seq],
    m_seq: &[u32],
    c_const: f64,
) -> Result<NrReport> {
    if r < 1 || r > v_seq.len() || v_seq.len() != m_seq.len() {
        return Err(Error::InvalidParameter("target index out of range".into()));
    }
    if !(c_const >= 1.0) {
        return Err(Error::InvalidParameter("coefficient bound C must be ≥ 1".into()));
    }
    if space.is_bilateral() || !space.single_norm() {
        return Err(Error::InvalidParameter("thresholds are for sup-norm sequence spaces".into()));
    }
    if m_seq.iter().any(|&m| m < 1) {
        return Err(Error::InvalidParameter("powers must be ≥ 1".into()));
    }
    let ms = mk_sequence(w)?;
    let rf = r as f64;
    let target = -rf.ln(); // thresholds compare ln-quantities against ln(1/r)
    let h = w.horizon;

    let ln_c2 = 2.0 * c_const.ln();
    let n0 = (1..=h)
        .find(|&n| ln_c2 - w.lam(n) < target)
        .ok_or_else(|| Error::HorizonExhausted(format!("C²/W(0,n) never drops below 1/{r} within horizon {h}")))?;

    let k0 = (0..ms.len())
        .find(|&k| ln_c2 - w.lam(ms[k]) < target)
        .ok_or_else(|| Error::HorizonExhausted(format!("C²/W(0,M_k) never drops below 1/{r}: block list exhausted")))?;
    let m_k0_plus_1 = *ms
        .get(k0 + 1)
        .ok_or_else(|| Error::HorizonExhausted(format!("block M_{} needed but only {} blocks materialized", k0 + 2, ms.len())))?;

    let alpha0 = 1.0 / f64::from(*m_seq[..r].iter().max().unwrap());
    let mut m_k1 = None;
    for k in 1..ms.len().saturating_sub(1) {
        let lhs = (w.lam(ms[k + 1]) - w.lam(ms[k - 1])) + c_const.ln() - alpha0 * w.lam(ms[k + 1]);
        if lhs < target {
            m_k1 = Some(ms[k]);
            break;
        }
    }
    let m_k1 = m_k1.ok_or_else(|| {
        Error::HorizonExhausted(format!("block-ratio threshold for 1/{r} not reached: block list exhausted"))
    })?;

    let v_r = &v_seq[r - 1];
    let m_r = m_seq[r - 1];
    let deg = v_r.support_max().unwrap_or(0);
    let fits = |n: i64| n + deg <= h;
    let small_ok =
        |n: i64| (0..=deg).all(|l| smallness(v_r, m_r, w, n, l) < 1.0 / rf);
    let i_threshold = (1..=h)
        .filter(|&n| fits(n))
        .find(|&n| small_ok(n))
        .ok_or_else(|| {
            Error::HorizonExhausted(format!(
                "coefficient-smallness threshold for target {r} not reached within horizon {h}"
            ))
        })?;

    let n_r = n0.max(m_k0_plus_1).max(m_k1).max(i_threshold);

    // Exhaustive re-check of the smallness inequality on [N(r), horizon].
    for n in n_r..=h {
        if fits(n) && !small_ok(n) {
            return Err(Error::SearchFailed(format!(
                "smallness re-check failed at n = {n} for target {r}"
            )));
        }
    }
    // Sampled re-check of the cross-pair inequality
    // W(l+(j−j′), j+l)·|v_l(r)|^α / W(l, j+l)^α < 1/r for pairs separated
    // like family members (gap ≥ r + s) and α down to the pairwise minimum.
    let mut ii_samples = 0usize;
    for s in 1..r {
        let m_s = m_seq[s - 1];
        let alpha_min = (1.0 / f64::from(m_r)).min(1.0 / f64::from(m_s));
        for &j in &[n_r, (n_r + h - deg) / 2, h - deg] {
            if !fits(j) || j <= n_r - 1 {
                continue;
            }
            for gap in [(r + s) as i64, j / 2, j - 1] {
                let jp = j - gap;
                if jp < 1 || gap < (r + s) as i64 {
                    continue;
                }
                for l in 0..=deg {
                    for alpha in [alpha_min, 1.0, 2.0] {
                        let vl = v_r.get(l);
                        if vl.is_zero() {
                            continue;
                        }
                        let ln_q = w.log_prod(l + gap, j + l) + alpha * vl.ln_abs()
                            - alpha * w.log_prod(l, j + l);
                        ii_samples += 1;
                        if ln_q >= target {
                            return Err(Error::SearchFailed(format!(
                                "cross-pair re-check failed at (j={j}, j′={jp}, l={l}, α={alpha})"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(NrReport { n_r, n0, m_k0_plus_1, m_k1, i_threshold, ii_samples })
}

/// Per-target verification summary at the horizon.
#[derive(Clone, Debug)]
pub struct C0Report {
    pub p: usize,
    pub conclusive: bool,
    pub reason: Option<String>,
    pub n_threshold: Option<i64>,
    pub block_count: usize,
    /// ‖u(p)‖_∞ over materialized blocks.
    pub sup_u: f64,
    /// Worst over n ∈ B(p) of ‖B^n u(p)^{m(p)} − v(p)‖_∞: exact echo sum
    /// plus the beyond-horizon tail bound.
    pub ineq1_worst: f64,
    /// Uniform-in-m bound for ‖B^n u(p)^m‖, m > m(p): worst smallness sup
    /// raised to m(p)+1; covers every block echo and every m at once.
    pub ineq2_worst: f64,
    /// Worst over n ∈ B(p), q ≠ p, m ≥ m(p) of ‖B^n u(q)^m‖_∞, via the
    /// α-monotone domination at α = m(p)/m(q), plus tail bound.
    pub ineq3_worst: f64,
    /// Every echo coefficient satisfied |v_l(q)| < W(l, n′+l), which makes
    /// the α-domination valid for all larger powers.
    pub monotone_cert: bool,
    /// Max relative gap between the closed-form orbit and the direct
    /// power-then-shift computation at the first block.
    pub oracle_rel_err: f64,
    pub passed: bool,
}

fn sup_norm(s: &Seq) -> f64 {
    s.support().map(|(_, c)| c.ln_abs().exp()).fold(0.0, f64::max)
}

/// u = Σ_p u(p) with u(p) = Σ_{n ∈ B(p)} Σ_l v_l(p)^{1/m(p)} W(l,n+l)^{−1/m(p)} e_{n+l},
/// B(p) = every N(p)-th element of A(p). Per-p reports carry the inequality
/// checks; an unreachable N(p) makes that p inconclusive, not an error.
pub fn build_c0_fhc(
    targets: &[(Seq, u32)],
    fam: &DensityFamily,
    w: &WeightSeq,
    horizon: i64,
) -> Result<(Seq, Vec<C0Report>)> {
    let ms = mk_sequence(w)?;
    if ms.is_empty() {
        return Err(Error::InvalidParameter("empty block list".into()));
    }
    if horizon > w.horizon {
        return Err(Error::InvalidParameter("witness horizon beyond weight horizon".into()));
    }
    if fam.sets.len() < targets.len() {
        return Err(Error::InvalidParameter(format!(
            "family has {} sets for {} targets",
            fam.sets.len(),
            targets.len()
        )));
    }
    let space = SpaceSpec::c0();
    let mut u = Seq::zero(horizon, false);
    if targets.is_empty() {
        return Ok((u, Vec::new()));
    }
    let c_const = targets
        .iter()
        .flat_map(|(v, _)| v.support().map(|(_, c)| c.ln_abs().exp()))
        .fold(1.0f64, f64::max);
    let v_seq: Vec<Seq> = targets.iter().map(|(v, _)| v.clone()).collect();
    let m_seq: Vec<u32> = targets.iter().map(|(_, m)| *m).collect();

    // Materialize N(p) and B(p) per target; build u(p) where possible.
    let mut n_thresholds: Vec<Option<i64>> = Vec::new();
    let mut bsets: Vec<Vec<i64>> = Vec::new();
    let mut u_ps: Vec<Option<Seq>> = Vec::new();
    let mut reasons: Vec<Option<String>> = Vec::new();
    let mut owner: HashMap<i64, usize> = HashMap::new();
    for (idx, (v, m)) in targets.iter().enumerate() {
        let p = idx + 1;
        if *m < 1 || v.bilateral {
            return Err(Error::InvalidParameter("targets must be unilateral with power ≥ 1".into()));
        }
        let deg = v.support_max().unwrap_or(0);
        match compute_nr(p, w, &space, &v_seq, &m_seq, c_const) {
            Err(e) => {
                n_thresholds.push(None);
                bsets.push(Vec::new());
                u_ps.push(None);
                reasons.push(Some(format!("{e}")));
            }
            Ok(rep) => {
                let b: Vec<i64> = thin_separate(&fam.sets[idx], rep.n_r)
                    .into_iter()
                    .filter(|&n| n + deg <= horizon)
                    .collect();
                if b.is_empty() {
                    n_thresholds.push(Some(rep.n_r));
                    bsets.push(Vec::new());
                    u_ps.push(None);
                    reasons.push(Some(format!(
                        "horizon exhausted before any block: N({p}) = {} leaves nothing below {horizon}",
                        rep.n_r
                    )));
                    continue;
                }
                let inv_m = 1.0 / f64::from(*m);
                let mut up = Seq::zero(horizon, false);
                for &n in &b {
                    for l in 0..=deg {
                        if let Some(&other) = owner.get(&(n + l)) {
                            return Err(Error::InvalidParameter(format!(
                                "block windows collide at index {}: targets {} and {p}",
                                n + l,
                                other + 1
                            )));
                        }
                        owner.insert(n + l, idx);
                    }
                    for (l, vl) in v.support() {
                        let coef = frac_pow(vl, inv_m)
                            * Wide::from_ln_polar(-inv_m * w.log_prod(l, n + l), 0.0);
                        up.set(n + l, coef);
                        u.set(n + l, coef);
                    }
                }
                n_thresholds.push(Some(rep.n_r));
                bsets.push(b);
                u_ps.push(Some(up));
                reasons.push(None);
            }
        }
    }

    // Verification passes, per conclusive p.
    let mut reports = Vec::with_capacity(targets.len());
    for (idx, (v, m)) in targets.iter().enumerate() {
        let p = idx + 1;
        let inv_p = 1.0 / p as f64;
        let Some(up) = &u_ps[idx] else {
            reports.push(C0Report {
                p,
                conclusive: false,
                reason: reasons[idx].clone(),
                n_threshold: n_thresholds[idx],
                block_count: 0,
                sup_u: 0.0,
                ineq1_worst: f64::NAN,
                ineq2_worst: f64::NAN,
                ineq3_worst: f64::NAN,
                monotone_cert: false,
                oracle_rel_err: f64::NAN,
                passed: false,
            });
            continue;
        };
        let b = &bsets[idx];
        let deg = v.support_max().unwrap_or(0);
        let mf = f64::from(*m);
        let sup_u = sup_norm(up);

        let mut ineq1_worst: f64 = 0.0;
        let mut ineq2_worst: f64 = 0.0;
        let mut ineq3_worst: f64 = 0.0;
        let mut monotone_cert = true;
        for &n in b {
            // Echo of a later block n′ of target q (power chain α = m/m(q)),
            // landing at (n′−n)+l: magnitude W(l+(n′−n), n′+l)·(|v_l|/W(l,n′+l))^α.
            let echo_ln = |vq: &Seq, n_prime: i64, l: i64, alpha: f64| -> Option<f64> {
                let vl = vq.get(l);
                if vl.is_zero() {
                    return None;
                }
                Some(
                    w.log_prod(l + (n_prime - n), n_prime + l)
                        + alpha * (vl.ln_abs() - w.log_prod(l, n_prime + l)),
                )
            };

            // Inequality 1: exact echoes from later same-target blocks, plus
            // the bound at the horizon boundary for hypothetical ones.
            let mut worst = f64::NEG_INFINITY;
            for &np in b.iter().filter(|&&np| np > n) {
                for l in 0..=deg {
                    if let Some(e) = echo_ln(v, np, l, 1.0) {
                        worst = worst.max(e);
                    }
                }
            }
            let mut tail = f64::NEG_INFINITY;
            for l in 0..=deg {
                if let Some(e) = echo_ln(v, horizon - l, l, 1.0) {
                    tail = tail.max(e);
                }
            }
            ineq1_worst = ineq1_worst.max(worst.exp() + tail.exp());

            // Inequality 2: uniform over m > m(p) via the smallness sup b(n):
            // every coefficient of B^n u(p)^m is ≤ b(n)^m ≤ b(n)^{m(p)+1}.
            let b_sup = (0..=deg).map(|l| smallness(v, *m, w, n, l)).fold(0.0, f64::max);
            ineq2_worst = ineq2_worst.max(b_sup.powf(mf + 1.0));

            // Inequality 3: foreign targets q ≠ p, all m ≥ m(p) at once via
            // the α-monotone domination at α = m(p)/m(q).
            for (qdx, (vq, mq)) in targets.iter().enumerate() {
                if qdx == idx || u_ps[qdx].is_none() {
                    continue;
                }
                let alpha = mf / f64::from(*mq);
                let degq = vq.support_max().unwrap_or(0);
                let mut worst3 = f64::NEG_INFINITY;
                for &np in bsets[qdx].iter().filter(|&&np| np > n) {
                    for l in 0..=degq {
                        let vl = vq.get(l);
                        if vl.is_zero() {
                            continue;
                        }
                        if vl.ln_abs() >= w.log_prod(l, np + l) {
                            monotone_cert = false;
                        }
                        if let Some(e) = echo_ln(vq, np, l, alpha) {
                            worst3 = worst3.max(e);
                        }
                    }
                }
                let mut tail3 = f64::NEG_INFINITY;
                for l in 0..=degq {
                    let vl = vq.get(l);
                    if vl.is_zero() {
                        continue;
                    }
                    if vl.ln_abs() >= w.log_prod(l, horizon) {
                        monotone_cert = false;
                    }
                    if let Some(e) = echo_ln(vq, horizon - l, l, alpha) {
                        tail3 = tail3.max(e);
                    }
                }
                ineq3_worst = ineq3_worst.max(worst3.exp() + tail3.exp());
            }
        }

        // Oracle pass at the first block: direct power + shift against the
        // closed form v + echoes.
        let n0 = b[0];
        let powered = crate::algebra::power(up, *m, crate::algebra::ProductKind::Coordinatewise)?;
        let orbit = crate::shifts::apply_shift(w, &powered, n0, crate::shifts::Direction::Backward)?;
        let mut expect = Seq::zero(horizon, false);
        for (l, vl) in v.support() {
            expect.set(l, vl);
        }
        for &np in b.iter().filter(|&&np| np > n0) {
            for (l, vl) in v.support() {
                let idx2 = (np - n0) + l;
                let coef = vl * Wide::from_ln_polar(-w.log_prod(l, idx2), 0.0);
                expect.set(idx2, coef);
            }
        }
        let mut oracle_rel_err: f64 = 0.0;
        for (i, c) in expect.support() {
            oracle_rel_err = oracle_rel_err.max(Wide::rel_diff(orbit.get(i), c));
        }
        if orbit.num_nonzero() != expect.num_nonzero() {
            oracle_rel_err = f64::INFINITY;
        }

        let passed = sup_u < inv_p
            && ineq1_worst < inv_p
            && ineq2_worst < inv_p
            && ineq3_worst < inv_p
            && monotone_cert
            && oracle_rel_err < 1e-9;
        reports.push(C0Report {
            p,
            conclusive: true,
            reason: None,
            n_threshold: n_thresholds[idx],
            block_count: b.len(),
            sup_u,
            ineq1_worst,
            ineq2_worst,
            ineq3_worst,
            monotone_cert,
            oracle_rel_err,
            passed,
        });
    }
    Ok((u, reports))
}
