//! Weighted backward/forward shifts and the catalog of structured weights.
//!
//! All weight products flow through cached cumulative log-sums
//! Λ(n) = Σ_{k≤n} ln w_k (with Λ extended to negative indices for bilateral
//! kinds), so that w_{a+1}···w_b = exp(Λ(b) − Λ(a)) never overflows. Raw
//! products are never formed by iterative multiplication.

use crate::scaled::Wide;
use crate::spaces::{Gamma, Seq, SpaceSpec};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum WeightKind {
    /// w_n ≡ λ with λ > 1.
    Rolewicz(f64),
    /// w_n = 1 + λ/n with λ > 0.
    OnePlusLambdaOverN(f64),
    /// w_1···w_n = exp(n^α) with α ∈ (0,1).
    ExpNAlpha(f64),
    /// w_1···w_{2n} = 2^{n−1}, w_1···w_{2n+1} = 2^{2n}; partner of the
    /// odd-doubling weighted-c0 space.
    CounterexampleOdd,
    /// Blockwise-recursive weight: w_n = 2 for n ≤ M_2, then each block
    /// (M_k, M_{k+1}] multiplies to (w_1···w_{M_k})^{1/k}.
    MkWeight(Vec<i64>),
    /// Bilateral: w_0 = 1, w_n = 2, w_{−n} = n²/(n+1)² (invertible shift
    /// whose inverse is also a shift).
    BilateralInverseExample,
    /// Explicit positive values w_1..w_len (unilateral).
    Explicit(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Backward,
    Forward,
}

/// Weight sequence with cached cumulative log-products.
#[derive(Clone, Debug)]
pub struct WeightSeq {
    pub kind: WeightKind,
    /// lam_pos[n] = Λ(n) = ln(w_1···w_n) for n = 0..=horizon.
    lam_pos: Vec<f64>,
    /// lam_neg[n] = Λ(−n) for n = 0..=horizon (bilateral kinds; empty otherwise).
    lam_neg: Vec<f64>,
    pub horizon: i64,
}

impl WeightSeq {
    pub fn new(kind: WeightKind, horizon: i64) -> Result<WeightSeq> {
        if horizon < 1 {
            return Err(Error::InvalidParameter("weight horizon must be ≥ 1".into()));
        }
        let n = (horizon + 1) as usize;
        let ln2 = std::f64::consts::LN_2;
        let mut lam_pos = vec![0.0f64; n];
        let mut lam_neg = Vec::new();
        match &kind {
            WeightKind::Rolewicz(l) => {
                if !(*l > 1.0) {
                    return Err(Error::InvalidParameter("Rolewicz weight needs λ > 1".into()));
                }
                let ln_l = l.ln();
                for k in 1..n {
                    lam_pos[k] = k as f64 * ln_l;
                }
            }
            WeightKind::OnePlusLambdaOverN(l) => {
                if !(*l > 0.0) {
                    return Err(Error::InvalidParameter("needs λ > 0".into()));
                }
                for k in 1..n {
                    lam_pos[k] = lam_pos[k - 1] + (1.0 + l / k as f64).ln();
                }
            }
            WeightKind::ExpNAlpha(a) => {
                if !(0.0 < *a && *a < 1.0) {
                    return Err(Error::InvalidParameter("needs α ∈ (0,1)".into()));
                }
                for k in 1..n {
                    lam_pos[k] = (k as f64).powf(*a);
                }
            }
            WeightKind::CounterexampleOdd => {
                // Λ(2n) = (n−1)·ln2 (n ≥ 1), Λ(2n+1) = 2n·ln2 — exact closed forms.
                for k in 1..n {
                    let k = k as i64;
                    lam_pos[k as usize] = if k % 2 == 0 {
                        (k / 2 - 1) as f64 * ln2
                    } else {
                        (k - 1) as f64 * ln2
                    };
                }
            }
            WeightKind::MkWeight(ms) => {
                build_mk(&mut lam_pos, ms, horizon)?;
            }
            WeightKind::BilateralInverseExample => {
                for k in 1..n {
                    lam_pos[k] = k as f64 * ln2;
                }
                // Λ(−n) = −Σ_{k=0}^{n−1} ln w_{−k} = 2 ln n for n ≥ 1 (telescoping),
                // with Λ(0) = 0 and ln w_0 = 0.
                lam_neg = vec![0.0f64; n];
                for k in 1..n {
                    lam_neg[k] = 2.0 * (k as f64).ln();
                }
            }
            WeightKind::Explicit(ws) => {
                if ws.len() < horizon as usize {
                    return Err(Error::InvalidParameter("explicit weights shorter than horizon".into()));
                }
                if ws.iter().any(|w| !(*w > 0.0)) {
                    return Err(Error::InvalidParameter("weights must be positive".into()));
                }
                for k in 1..n {
                    lam_pos[k] = lam_pos[k - 1] + ws[k - 1].ln();
                }
            }
        }
        Ok(WeightSeq { kind, lam_pos, lam_neg, horizon })
    }

    pub fn is_bilateral(&self) -> bool {
        !self.lam_neg.is_empty()
    }

    /// Λ(i) with w_{a+1}···w_b = exp(Λ(b) − Λ(a)) for any a ≤ b in range.
    pub fn lam(&self, i: i64) -> f64 {
        if i >= 0 {
            self.lam_pos[i as usize]
        } else {
            assert!(self.is_bilateral(), "negative index on unilateral weight");
            self.lam_neg[(-i) as usize]
        }
    }

    /// ln(w_{a+1}···w_b) for a ≤ b.
    pub fn log_prod(&self, a: i64, b: i64) -> f64 {
        assert!(a <= b, "log_prod needs a ≤ b");
        self.lam(b) - self.lam(a)
    }

    /// ln w_i.
    pub fn ln_w(&self, i: i64) -> f64 {
        self.log_prod(i - 1, i)
    }

    /// The companion space of the named example kinds, when one exists.
    pub fn companion_space(&self) -> Option<SpaceSpec> {
        match self.kind {
            WeightKind::CounterexampleOdd => Some(SpaceSpec::weighted_c0(Gamma::OddDoubling)),
            WeightKind::BilateralInverseExample => {
                Some(SpaceSpec::bilateral_weighted_c0(Gamma::AbsPlusOne))
            }
            _ => None,
        }
    }
}

/// Fill Λ for the blockwise-recursive weight. Block ends satisfy
/// Λ(M_{k+1}) = Λ(M_k)·(1 + 1/k) exactly (one multiply-add per block), and
/// the interior is linear: every weight in block k equals
/// (w_1···w_{M_k})^{1/(k(M_{k+1}−M_k))}.
fn build_mk(lam: &mut [f64], ms: &[i64], horizon: i64) -> Result<()> {
    if ms.len() < 2 {
        return Err(Error::InvalidParameter("MkWeight needs at least M_1, M_2".into()));
    }
    if ms[0] != 1 {
        return Err(Error::InvalidParameter("MkWeight requires M_1 = 1".into()));
    }
    if ms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("M_k must be strictly increasing".into()));
    }
    if *ms.last().unwrap() < horizon {
        return Err(Error::InvalidParameter(format!(
            "MkWeight M-sequence ends at {} but horizon is {horizon}",
            ms.last().unwrap()
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let m2 = ms[1];
    for i in 1..=(m2.min(horizon)) {
        lam[i as usize] = i as f64 * ln2;
    }
    let mut lam_mk = m2 as f64 * ln2; // Λ(M_k) for the running block
    for (k_idx, pair) in ms.windows(2).enumerate().skip(1) {
        let (mk, mk1) = (pair[0], pair[1]);
        let k = (k_idx + 1) as f64; // block index k ≥ 2
        let width = (mk1 - mk) as f64;
        let step = lam_mk / (k * width);
        for i in (mk + 1)..=mk1.min(horizon) {
            lam[i as usize] = lam_mk + (i - mk) as f64 * step;
        }
        let lam_next = lam_mk * (1.0 + 1.0 / k);
        if mk1 <= horizon {
            lam[mk1 as usize] = lam_next; // pin the block identity exactly
        }
        lam_mk = lam_next;
        if mk1 >= horizon {
            break;
        }
    }
    Ok(())
}

/// Apply an N-step weighted shift.
///
/// Backward: y_n = w_{n+1}···w_{n+N} x_{n+N}. Unilateral backward drops the
/// first N coordinates by definition (B e_0 = 0); bilateral backward errors
/// when mass would cross −L rather than silently truncating. Forward applies
/// F_ρ e_n = ρ_{n+1} e_{n+1} with ρ = this weight, and errors without
/// horizon headroom.
pub fn apply_shift(w: &WeightSeq, x: &Seq, steps: i64, direction: Direction) -> Result<Seq> {
    if steps < 0 {
        return Err(Error::InvalidParameter("shift steps must be ≥ 0".into()));
    }
    if x.bilateral && !w.is_bilateral() {
        return Err(Error::InvalidParameter("bilateral vector with unilateral weight".into()));
    }
    let mut out = Seq::zero(x.horizon, x.bilateral);
    out.tail_bound = x.tail_bound; // conservative: shifts here have bounded w-products over the scanned window
    match direction {
        Direction::Backward => {
            for (i, c) in x.support() {
                let target = i - steps;
                if x.bilateral {
                    if target < -x.horizon {
                        return Err(Error::HorizonExhausted(format!(
                            "backward shift pushes index {i} to {target} beyond −{}",
                            x.horizon
                        )));
                    }
                } else if target < 0 {
                    continue; // annihilated coordinates
                }
                let factor = Wide::from_ln_polar(w.log_prod(target, i), 0.0);
                out.add_assign_at(target, c * factor);
            }
        }
        Direction::Forward => {
            for (i, c) in x.support() {
                let target = i + steps;
                if target > x.horizon {
                    return Err(Error::HorizonExhausted(format!(
                        "forward shift pushes index {i} past horizon {}",
                        x.horizon
                    )));
                }
                // F^N e_i = ρ_{i+1}···ρ_{i+N} e_{i+N}
                let factor = Wide::from_ln_polar(w.log_prod(i, target), 0.0);
                out.add_assign_at(target, c * factor);
            }
        }
    }
    Ok(out)
}

/// Report row for the decay-condition scan at one offset l.
#[derive(Clone, Debug)]
pub struct OffsetGammaReport {
    pub offset: i64,
    /// (n, ln value) at each first crossing of the decade thresholds
    /// 1, 0.1, 0.01, … — the candidate subsequence n_k.
    pub crossings: Vec<(i64, f64)>,
    /// Infimum of ln value over the scan and where it was attained.
    pub ln_inf: f64,
    pub inf_at: i64,
    /// ln value at the final scanned n.
    pub ln_final: f64,
    /// Finite-horizon "tends to zero": final value below tolerance AND
    /// non-increasing over the last third of samples.
    pub tends_to_zero: bool,
}

/// Scan (w_{l+1}···w_{n+l})^{−γ} ‖e_{n+l}‖_q over n ≤ horizon per offset.
/// Everything is evaluated in log domain; raw values may underflow f64.
pub fn check_gamma_condition(
    w: &WeightSeq,
    spec: &SpaceSpec,
    gamma: f64,
    offsets: &[i64],
    q: u32,
    horizon: i64,
    tol: f64,
) -> Result<Vec<OffsetGammaReport>> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter("γ must be positive".into()));
    }
    let mut reports = Vec::new();
    for &l in offsets {
        let ln_value = |n: i64| -> f64 { -gamma * w.log_prod(l, n + l) + spec.ln_norm_e(n + l, q) };
        let ns: Vec<i64> = (1..=(horizon - l)).collect();
        let values: Vec<f64> = ns.iter().map(|&n| ln_value(n)).collect();
        let mut crossings = Vec::new();
        let mut next_threshold = 0.0f64; // ln 1
        let ln10 = std::f64::consts::LN_10;
        let mut ln_inf = f64::INFINITY;
        let mut inf_at = 0;
        for (&n, &v) in ns.iter().zip(&values) {
            if v < ln_inf {
                ln_inf = v;
                inf_at = n;
            }
            while v < next_threshold {
                crossings.push((n, v));
                next_threshold -= ln10;
            }
        }
        let ln_final = *values.last().unwrap_or(&f64::INFINITY);
        let tail_start = (values.len() * 2) / 3;
        let monotone = values[tail_start..].windows(2).all(|p| p[1] <= p[0] + 1e-12);
        let tends_to_zero = ln_final < tol.ln() && monotone;
        reports.push(OffsetGammaReport {
            offset: l,
            crossings,
            ln_inf,
            inf_at,
            ln_final,
            tends_to_zero,
        });
    }
    Ok(reports)
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub cond_c_pass: bool,
    /// max over (n,k) of ln(‖e_n‖_r‖e_k‖_r / (C‖e_{n+k}‖_q)).
    pub cond_c_worst_log_ratio: f64,
    pub window_pass: bool,
    /// max over (n,u,v) of ln of the windowed-product inequality ratio.
    pub window_worst_log_ratio: f64,
}

/// Exhaustive finite check of the regularity inequalities:
/// (a) ‖e_n‖_r‖e_k‖_r ≤ C‖e_{n+k}‖_q for all n+k ≤ horizon;
/// (b) for n ∈ [M, horizon], u < v in [n−M, n] and every choice of
///     k_j ∈ [n−M+ρ, n+ρ]: (Π_{j=1}^{v−u} w_{k_j})‖e_u‖_r ≤ C‖e_v‖_q —
///     checked at the worst case (v−u)·max ln w over the window.
pub fn verify_regularity(
    spec: &SpaceSpec,
    w: &WeightSeq,
    r: u32,
    q: u32,
    c_const: f64,
    m_window: i64,
    rho: i64,
    horizon: i64,
) -> Result<RegularityReport> {
    if r > q {
        return Err(Error::InvalidParameter("regularity check needs r ≤ q".into()));
    }
    let ln_c = c_const.ln();
    let mut worst_c = f64::NEG_INFINITY;
    for n in 0..=horizon {
        for k in 0..=(horizon - n) {
            let lhs = spec.ln_norm_e(n, r) + spec.ln_norm_e(k, r);
            let rhs = ln_c + spec.ln_norm_e(n + k, q);
            worst_c = worst_c.max(lhs - rhs);
        }
    }
    let mut worst_w = f64::NEG_INFINITY;
    for n in m_window.max(1)..=horizon {
        let win_lo = (n - m_window + rho).max(1);
        let win_hi = (n + rho).min(w.horizon);
        if win_lo > win_hi {
            continue;
        }
        let max_ln_w = (win_lo..=win_hi).map(|i| w.ln_w(i)).fold(f64::NEG_INFINITY, f64::max);
        for u in (n - m_window).max(0)..n {
            for v in (u + 1)..=n {
                let lhs = (v - u) as f64 * max_ln_w + spec.ln_norm_e(u, r);
                let rhs = ln_c + spec.ln_norm_e(v, q);
                worst_w = worst_w.max(lhs - rhs);
            }
        }
    }
    Ok(RegularityReport {
        cond_c_pass: worst_c <= 1e-12,
        cond_c_worst_log_ratio: worst_c,
        window_pass: worst_w <= 1e-12,
        window_worst_log_ratio: worst_w,
    })
}

#[derive(Clone, Debug)]
pub struct InverseExampleRow {
    pub n: i64,
    /// (ρ_{−1}···ρ_{−n})^{−1/2} ‖e_{−n}‖ — expected exactly 1.
    pub forward_value_ln: f64,
    /// w_{−1}···w_{−n} ‖e_{−n}‖ — expected exactly 1/(n+1).
    pub backward_value_ln: f64,
    pub backward_expected_ln: f64,
}

/// The invertible bilateral example: the inverse direction satisfies the
/// algebra-forcing identity exactly while the forward direction decays.
pub fn check_inverse_example(horizon: i64) -> Result<Vec<InverseExampleRow>> {
    // Λ(−(n+1)) is needed at n = horizon, hence the +1.
    let w = WeightSeq::new(WeightKind::BilateralInverseExample, horizon + 1)?;
    let space = w.companion_space().expect("named example has a space");
    let mut rows = Vec::new();
    for n in 1..=horizon {
        // ln(w_{−1}···w_{−n}) = Λ(−1) − Λ(−(n+1))
        let ln_wneg = w.lam(-1) - w.lam(-(n + 1));
        let ln_norm = space.ln_norm_e(-n, 1);
        let ln_rho_prod = -ln_wneg; // ρ = 1/w
        rows.push(InverseExampleRow {
            n,
            forward_value_ln: -0.5 * ln_rho_prod + ln_norm,
            backward_value_ln: ln_wneg + ln_norm,
            backward_expected_ln: -((n + 1) as f64).ln(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rolewicz_backward_shift_example() {
        let w = WeightSeq::new(WeightKind::Rolewicz(2.0), 16).unwrap();
        let e5 = Seq::basis(5, 16, false);
        let y = apply_shift(&w, &e5, 3, Direction::Backward).unwrap();
        assert!((y.get(2).to_f64() - 8.0).abs() < 1e-12);
        assert_eq!(y.num_nonzero(), 1);

        let e0 = Seq::basis(0, 16, false);
        assert!(apply_shift(&w, &e0, 1, Direction::Backward).unwrap().is_zero());
    }

    #[test]
    fn logw_consistency_all_kinds() {
        let kinds = vec![
            WeightKind::Rolewicz(2.0),
            WeightKind::OnePlusLambdaOverN(1.5),
            WeightKind::ExpNAlpha(0.5),
            WeightKind::CounterexampleOdd,
            WeightKind::Explicit((1..=64).map(|k| 1.0 + (k as f64).sqrt()).collect()),
        ];
        for kind in kinds {
            let w = WeightSeq::new(kind, 64).unwrap();
            for n in 1..=64 {
                let direct = w.ln_w(n);
                let via = w.log_prod(n - 1, n);
                assert!((direct - via).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn counterexample_odd_products() {
        let w = WeightSeq::new(WeightKind::CounterexampleOdd, 101).unwrap();
        let ln2 = std::f64::consts::LN_2;
        for n in 1..=50i64 {
            assert!((w.lam(2 * n) - (n - 1) as f64 * ln2).abs() < 1e-12);
            assert!((w.lam(2 * n + 1) - (2 * n) as f64 * ln2).abs() < 1e-12);
            // w_{2n} = 2^{−(n−1)}, w_{2n+1} = 2^{n+1}
            assert!((w.ln_w(2 * n) - -((n - 1) as f64) * ln2).abs() < 1e-12);
            assert!((w.ln_w(2 * n + 1) - (n + 1) as f64 * ln2).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_condition_counterexample_odd() {
        let w = WeightSeq::new(WeightKind::CounterexampleOdd, 201).unwrap();
        let space = w.companion_space().unwrap();
        // Odd indices: (w_1···w_{2n+1})^{−1/2}‖e_{2n+1}‖ = 1 identically.
        let ln2 = std::f64::consts::LN_2;
        for n in 1..=100i64 {
            let v = -0.5 * w.log_prod(0, 2 * n + 1) + space.ln_norm_e(2 * n + 1, 1);
            assert!(v.abs() < 1e-12, "odd value must be exactly 1");
            // Even indices decay like 2^{−γ(n−1)} for γ = 1.
            let ve = -1.0 * w.log_prod(0, 2 * n) + space.ln_norm_e(2 * n, 1);
            assert!((ve - -((n - 1) as f64) * ln2).abs() < 1e-12);
        }
        // Full-scan verdict: γ = 1/2 over all n does not tend to zero (odd plateau).
        let rep = check_gamma_condition(&w, &space, 0.5, &[0], 1, 200, 1e-6).unwrap();
        assert!(!rep[0].tends_to_zero);
        assert!(rep[0].ln_inf < -1.0); // even subsequence still dips
    }

    #[test]
    fn gamma_condition_rolewicz_tends_to_zero() {
        let w = WeightSeq::new(WeightKind::Rolewicz(2.0), 200).unwrap();
        let rep =
            check_gamma_condition(&w, &SpaceSpec::l1(), 1.0, &[0], 1, 200, 1e-6).unwrap();
        assert!(rep[0].tends_to_zero);
        // Crossings give the 2^{-n} < 10^{-j} subsequence.
        assert!(rep[0].crossings.len() >= 5);
    }

    #[test]
    fn mk_weight_block_identities() {
        let ms = vec![1, 4, 9, 20, 40, 80];
        let w = WeightSeq::new(WeightKind::MkWeight(ms.clone()), 80).unwrap();
        // Block identity Λ(M_{k+1}) = Λ(M_k)(1+1/k) for k ≥ 1.
        for k in 1..(ms.len() - 1) {
            let lhs = w.lam(ms[k + 1]);
            let rhs = w.lam(ms[k]) * (1.0 + 1.0 / (k + 1) as f64);
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "block {k}");
        }
        // w non-increasing overall.
        let mut prev = f64::INFINITY;
        for n in 1..=80 {
            let lw = w.ln_w(n);
            assert!(lw <= prev + 1e-12);
            prev = lw;
        }
    }

    #[test]
    fn bilateral_inverse_example_identities() {
        let rows = check_inverse_example(1000).unwrap();
        for row in &rows {
            assert!(row.forward_value_ln.abs() < 1e-12, "forward ratio at n={}", row.n);
            assert!(
                (row.backward_value_ln - row.backward_expected_ln).abs() < 1e-12,
                "backward value at n={}",
                row.n
            );
        }
    }

    #[test]
    fn bilateral_shift_errors_at_edge() {
        let w = WeightSeq::new(WeightKind::BilateralInverseExample, 8).unwrap();
        let x = Seq::basis(-8, 8, true);
        assert!(apply_shift(&w, &x, 1, Direction::Backward).is_err());
        let y = Seq::basis(8, 8, true);
        assert!(apply_shift(&w, &y, 1, Direction::Forward).is_err());
    }

    #[test]
    fn forward_backward_roundtrip_on_inverse_example() {
        let w = WeightSeq::new(WeightKind::BilateralInverseExample, 16).unwrap();
        // ρ = 1/w: build explicit reciprocal weight via log products of w.
        let x = Seq::basis(3, 16, true);
        let fwd = apply_shift(&w, &x, 2, Direction::Forward).unwrap();
        let back = apply_shift(&w, &fwd, 2, Direction::Backward).unwrap();
        // B_w^2 F_w^2 multiplies by (w_4 w_5)·(w_4 w_5)… here F uses the same w,
        // so the roundtrip factor is exp(2·logprod) — check linear consistency instead.
        assert!((back.get(3).to_f64() - (2.0 * w.log_prod(3, 5)).exp()).abs() < 1e-9);
    }

    #[test]
    fn regularity_l1_and_entire() {
        let w = WeightSeq::new(WeightKind::Rolewicz(2.0), 64).unwrap();
        let rep = verify_regularity(&SpaceSpec::l1(), &w, 1, 1, 1.0, 4, 0, 32).unwrap();
        assert!(rep.cond_c_pass);
        assert!(rep.cond_c_worst_log_ratio <= 1e-12);

        let entire = SpaceSpec::entire(4);
        let rep2 = verify_regularity(&entire, &w, 2, 2, 1.0, 4, 0, 32).unwrap();
        // r^n·r^k = r^{n+k}: exact equality, worst ratio 0.
        assert!(rep2.cond_c_pass);
        assert!(rep2.cond_c_worst_log_ratio.abs() < 1e-12);
    }
}
