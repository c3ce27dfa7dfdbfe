//! Witnesses on the space of all sequences, where convergence is
//! coordinatewise and the weight is unconstrained.
//!
//! Frequent variant: one block per orbit time n ∈ A(p) per target
//! (v(p), m(p)), with coefficients v_l(p)^{1/m(p)} W(l, n+l)^{−1/m(p)}, so
//! B^n(u^{m(p)}) equals v(p) exactly on the window [0, deg p] whenever the
//! family keeps the blocks disjoint.
//!
//! Mixed variant: the weight products W(l, n_k+l) may explode, vanish, or
//! stay bounded depending on the offset l; each offset gets the coefficient
//! shape suited to its regime, driven by a seeded dense parameter enumeration
//! (α(k), β(k), z(k)).

use crate::densitysets::DensityFamily;
use crate::scaled::Wide;
use crate::shifts::WeightSeq;
use crate::spaces::Seq;
use crate::witnesses::frac_pow;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Frequent witness: the assembled vector and, per target, the block starts
/// actually written below the horizon.
#[derive(Clone, Debug)]
pub struct OmegaFhc {
    pub u: Seq,
    pub placed: Vec<Vec<i64>>,
}

/// u = Σ_p Σ_{n ∈ A(p)} Σ_l v_l(p)^{1/m(p)} W(l, n+l)^{−1/m(p)} e_{n+l}.
/// Fails if two block windows collide — the family must separate sets p and
/// q by more than deg(p) + deg(q).
pub fn build_omega_fhc(
    targets: &[(Seq, u32)],
    fam: &DensityFamily,
    w: &WeightSeq,
    horizon: i64,
) -> Result<OmegaFhc> {
    if targets.is_empty() {
        return Err(Error::InvalidParameter("need at least one target".into()));
    }
    if fam.sets.len() < targets.len() {
        return Err(Error::InvalidParameter(format!(
            "family has {} sets for {} targets",
            fam.sets.len(),
            targets.len()
        )));
    }
    if horizon > w.horizon {
        return Err(Error::InvalidParameter("witness horizon beyond weight horizon".into()));
    }
    let mut u = Seq::zero(horizon, false);
    let mut owner: HashMap<i64, usize> = HashMap::new();
    let mut placed = Vec::with_capacity(targets.len());
    for (p_idx, (v, m)) in targets.iter().enumerate() {
        if *m < 1 {
            return Err(Error::InvalidParameter("target power must be ≥ 1".into()));
        }
        if v.bilateral {
            return Err(Error::InvalidParameter("targets must be unilateral".into()));
        }
        let deg = v.support_max().unwrap_or(0);
        let inv_m = 1.0 / f64::from(*m);
        let mut starts = Vec::new();
        for &n in &fam.sets[p_idx] {
            if n < 1 || n + deg > horizon {
                continue;
            }
            for l in 0..=deg {
                if let Some(&other) = owner.get(&(n + l)) {
                    return Err(Error::InvalidParameter(format!(
                        "block windows collide at index {}: targets {} and {}",
                        n + l,
                        other + 1,
                        p_idx + 1
                    )));
                }
                owner.insert(n + l, p_idx);
            }
            for (l, vl) in v.support() {
                let coef = frac_pow(vl, inv_m)
                    * Wide::from_ln_polar(-inv_m * w.log_prod(l, n + l), 0.0);
                u.set(n + l, coef);
            }
            starts.push(n);
        }
        if starts.is_empty() {
            return Err(Error::HorizonExhausted(format!(
                "no block of target {} fits below horizon {horizon}",
                p_idx + 1
            )));
        }
        placed.push(starts);
    }
    Ok(OmegaFhc { u, placed })
}

/// Behavior of W(l, n_k + l) along the chosen orbit times, per offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Products grow without bound: target carried at the lowest power.
    Inflate,
    /// Products vanish: target carried at the highest power.
    Deflate,
    /// Products stay pinned in a narrow band: coordinate left as a free
    /// parameter for the dense enumeration to tune.
    Bounded,
}

const INFLATE_LN: f64 = 6.907_755_278_982_137; // ln 1e3
const OSC_LN: f64 = 2.302_585_092_994_046; // ln 10

/// Mixed witness with its regime classification and parameter enumeration.
#[derive(Clone, Debug)]
pub struct OmegaMixed {
    pub x: Seq,
    /// One regime per offset 0..=deg(v_target).
    pub regimes: Vec<Regime>,
    pub n_ks: Vec<i64>,
    pub alphas: Vec<Complex64>,
    pub betas: Vec<Complex64>,
    pub zs: Vec<Vec<Complex64>>,
    pub m0: u32,
    pub m1: u32,
}

/// Exponent pair served by the mixed construction. Inflating offsets carry
/// the target at the low power, deflating ones at the high power.
pub const MIXED_M0: u32 = 1;
pub const MIXED_M1: u32 = 2;

fn dense_param(rng: &mut ChaCha8Rng, nonzero: bool) -> Complex64 {
    loop {
        let re = f64::from(rng.gen_range(-8i32..=8)) / 4.0;
        let im = f64::from(rng.gen_range(-8i32..=8)) / 4.0;
        let z = Complex64::new(re, im);
        if !nonzero || z.norm() >= 0.25 {
            return z;
        }
    }
}

/// Hypercyclic-style witness: x agrees with u_target below the block window;
/// at orbit time n_k the coefficient at offset l is shaped by the regime of
/// W(l, n+l) over the n_k grid, using the k-th parameter triple.
pub fn build_omega_hc_mixed(
    u_target: &Seq,
    v_target: &Seq,
    w: &WeightSeq,
    horizon: i64,
    seed: u64,
) -> Result<OmegaMixed> {
    if u_target.bilateral || v_target.bilateral || w.is_bilateral() {
        return Err(Error::InvalidParameter("mixed construction is unilateral".into()));
    }
    if horizon > w.horizon {
        return Err(Error::InvalidParameter("witness horizon beyond weight horizon".into()));
    }
    let p = v_target.support_max().unwrap_or(0);
    let u_top = u_target.support_max().unwrap_or(-1);
    // Even stride preserves any period-two structure in the weight; the
    // window starts past the base point and past the burn-in half.
    let stride = 2 * (p + 2);
    let lo = (u_top + p + 1).max(horizon / 2);
    let first = lo.div_euclid(stride) * stride + stride;
    let n_ks: Vec<i64> = (0..)
        .map(|k| first + k * stride)
        .take_while(|&n| n + p <= horizon)
        .collect();
    if n_ks.len() < 4 {
        return Err(Error::HorizonExhausted(format!(
            "only {} orbit times fit between {first} and {horizon}",
            n_ks.len()
        )));
    }

    let mut regimes = Vec::with_capacity(p as usize + 1);
    for l in 0..=p {
        let diffs: Vec<f64> = n_ks.iter().map(|&n| w.log_prod(l, n + l)).collect();
        let min = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let regime = if min >= INFLATE_LN {
            Regime::Inflate
        } else if max <= -INFLATE_LN {
            Regime::Deflate
        } else if max - min <= OSC_LN {
            Regime::Bounded
        } else {
            return Err(Error::SearchFailed(format!(
                "regime of offset {l} ambiguous at horizon: ln W ranges over [{min:.3}, {max:.3}]"
            )));
        };
        regimes.push(regime);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Seq::zero(horizon, false);
    for (i, c) in u_target.support() {
        x.set(i, c);
    }
    let mut alphas = Vec::with_capacity(n_ks.len());
    let mut betas = Vec::with_capacity(n_ks.len());
    let mut zs = Vec::with_capacity(n_ks.len());
    let inv_m0 = 1.0 / f64::from(MIXED_M0);
    let inv_m1 = 1.0 / f64::from(MIXED_M1);
    for &n in &n_ks {
        let alpha = dense_param(&mut rng, true);
        let beta = dense_param(&mut rng, true);
        let z: Vec<Complex64> = (0..=p).map(|_| dense_param(&mut rng, false)).collect();
        for l in 0..=p {
            let coef = match regimes[l as usize] {
                Regime::Inflate => {
                    frac_pow(v_target.get(l), inv_m0)
                        * frac_pow(Wide::from_complex(alpha), inv_m0).recip()
                        * Wide::from_ln_polar(-inv_m0 * w.log_prod(l, n + l), 0.0)
                }
                Regime::Deflate => {
                    frac_pow(v_target.get(l), inv_m1)
                        * frac_pow(Wide::from_complex(beta), inv_m1).recip()
                        * Wide::from_ln_polar(-inv_m1 * w.log_prod(l, n + l), 0.0)
                }
                Regime::Bounded => Wide::from_complex(z[l as usize]),
            };
            x.set(n + l, coef);
        }
        alphas.push(alpha);
        betas.push(beta);
        zs.push(z);
    }
    Ok(OmegaMixed { x, regimes, n_ks, alphas, betas, zs, m0: MIXED_M0, m1: MIXED_M1 })
}

/// Closed form of (B^{n_k} P(x))_l on the window, for P = c0 z^{m0} + c1 z^{m1}:
/// Σ_m c_m x_{n_k+l}^m W(l, n_k+l).
pub fn predicted_mixed_orbit(
    wit: &OmegaMixed,
    w: &WeightSeq,
    c0: Complex64,
    c1: Complex64,
    k: usize,
) -> Seq {
    let n = wit.n_ks[k];
    let p = wit.regimes.len() as i64 - 1;
    let mut out = Seq::zero(wit.x.horizon, false);
    for l in 0..=p {
        let coord = wit.x.get(n + l);
        let val = (Wide::from_complex(c0) * coord.powu(wit.m0)
            + Wide::from_complex(c1) * coord.powu(wit.m1))
            * Wide::from_ln_polar(w.log_prod(l, n + l), 0.0);
        out.set(l, val);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eval_poly, power, Poly, ProductKind};
    use crate::densitysets::{build_family_far, enforce_pairwise_gap};
    use crate::shifts::{apply_shift, Direction, WeightKind};
    use crate::spaces::seq_from_complex;

    fn rolewicz(h: i64) -> WeightSeq {
        WeightSeq::new(WeightKind::Rolewicz(2.0), h).unwrap()
    }

    #[test]
    fn fhc_orbits_exact_on_windows() {
        let h = 400i64;
        let w = rolewicz(h);
        let base = build_family_far(2, h).unwrap();
        let fam = enforce_pairwise_gap(&base, &[1.0, 2.0]).unwrap();
        let v1 = seq_from_complex(&[Complex64::new(1.0, 1.0)], h);
        let v2 = seq_from_complex(
            &[Complex64::new(0.5, 0.0), Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.25)],
            h,
        );
        let targets = vec![(v1.clone(), 1u32), (v2.clone(), 2u32)];
        let wit = build_omega_fhc(&targets, &fam, &w, h).unwrap();
        assert!(!wit.placed[0].is_empty() && !wit.placed[1].is_empty());

        for &n in wit.placed[0].iter().take(5) {
            let orbit = apply_shift(&w, &wit.u, n, Direction::Backward).unwrap();
            assert!(Wide::rel_diff(orbit.get(0), v1.get(0)) < 1e-10, "target 1 at n = {n}");
        }
        let sq = power(&wit.u, 2, ProductKind::Coordinatewise).unwrap();
        for &n in wit.placed[1].iter().take(5) {
            let orbit = apply_shift(&w, &sq, n, Direction::Backward).unwrap();
            for l in 0..=2 {
                assert!(
                    Wide::rel_diff(orbit.get(l), v2.get(l)) < 1e-10,
                    "target 2 at n = {n}, offset {l}"
                );
            }
        }
    }

    #[test]
    fn fhc_cross_power_decays_along_family() {
        // Squaring the m = 1 blocks leaves W(0,n)^{−1} at the window: the
        // doubling weight sends it to zero along the set.
        let h = 400i64;
        let w = rolewicz(h);
        let base = build_family_far(1, h).unwrap();
        let fam = enforce_pairwise_gap(&base, &[1.0]).unwrap();
        let v1 = seq_from_complex(&[Complex64::new(1.0, 0.0)], h);
        let wit = build_omega_fhc(&[(v1, 1)], &fam, &w, h).unwrap();
        let sq = power(&wit.u, 2, ProductKind::Coordinatewise).unwrap();
        let ns = &wit.placed[0];
        let early = apply_shift(&w, &sq, ns[0], Direction::Backward).unwrap();
        let late = apply_shift(&w, &sq, *ns.last().unwrap(), Direction::Backward).unwrap();
        assert!(late.get(0).ln_abs() < early.get(0).ln_abs() - 10.0);
    }

    #[test]
    fn fhc_rejects_colliding_windows() {
        // Wide targets on a family with unit gaps must collide.
        let h = 200i64;
        let w = rolewicz(h);
        let fam = build_family_far(2, h).unwrap();
        let wide: Vec<Complex64> = (0..12).map(|i| Complex64::new(1.0 + i as f64, 0.0)).collect();
        let v = seq_from_complex(&wide, h);
        let err = build_omega_fhc(&[(v.clone(), 1), (v, 1)], &fam, &w, h).unwrap_err();
        assert!(format!("{err}").contains("collide"));
    }

    fn parity_split_weight(h: usize) -> WeightSeq {
        // ln W(0, 2n) = n·ln 8 → ∞ while ln W(0, 2n+1) = −n·ln 8 → −∞.
        let lam = |k: usize| -> f64 {
            if k % 2 == 0 {
                (k / 2) as f64 * 8f64.ln()
            } else {
                -((k / 2) as f64) * 8f64.ln()
            }
        };
        let ws: Vec<f64> = (1..=h).map(|k| (lam(k) - lam(k - 1)).exp()).collect();
        WeightSeq::new(WeightKind::Explicit(ws), h as i64).unwrap()
    }

    #[test]
    fn mixed_regimes_split_by_parity() {
        let h = 256i64;
        let w = parity_split_weight(h as usize);
        // Sanity on the weight itself.
        assert!(w.lam(100) > 50.0 && w.lam(101) < -50.0);

        let v = seq_from_complex(
            &[Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.5), Complex64::new(-1.0, 2.0)],
            h,
        );
        let u0 = Seq::zero(h, false);
        let wit = build_omega_hc_mixed(&u0, &v, &w, h, 42).unwrap();
        assert_eq!(wit.regimes, vec![Regime::Inflate, Regime::Deflate, Regime::Inflate]);

        // Pick the last orbit time and the polynomial whose coefficients are
        // that step's own parameters: the window must approximate v, and the
        // shift oracle must agree with the closed form everywhere.
        let k = wit.n_ks.len() - 1;
        let (a, b) = (wit.alphas[k], wit.betas[k]);
        let p = Poly::new(1, vec![(vec![1], a), (vec![2], b)]).unwrap();
        let px = eval_poly(&p, &[wit.x.clone()], ProductKind::Coordinatewise).unwrap();
        let orbit = apply_shift(&w, &px, wit.n_ks[k], Direction::Backward).unwrap();
        let predicted = predicted_mixed_orbit(&wit, &w, a, b, k);
        for l in 0..=2 {
            assert!(
                Wide::rel_diff(orbit.get(l), predicted.get(l)) < 1e-11,
                "oracle vs closed form at {l}"
            );
            assert!(
                Wide::rel_diff(orbit.get(l), v.get(l)) < 1e-2,
                "window approximates the target at {l}"
            );
        }
    }

    #[test]
    fn mixed_bounded_regime_keeps_free_parameters() {
        let h = 128i64;
        let w = WeightSeq::new(WeightKind::Explicit(vec![1.0; h as usize]), h).unwrap();
        let v = seq_from_complex(&[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)], h);
        let u0 = Seq::zero(h, false);
        let wit = build_omega_hc_mixed(&u0, &v, &w, h, 7).unwrap();
        assert!(wit.regimes.iter().all(|r| *r == Regime::Bounded));
        for (k, &n) in wit.n_ks.iter().enumerate() {
            for l in 0..=1i64 {
                assert!(
                    Wide::rel_diff(wit.x.get(n + l), Wide::from_complex(wit.zs[k][l as usize]))
                        < 1e-15
                );
            }
        }
        // Same seed reproduces the enumeration; spread is nontrivial.
        let again = build_omega_hc_mixed(&u0, &v, &w, h, 7).unwrap();
        assert_eq!(wit.zs, again.zs);
        let distinct: std::collections::HashSet<String> =
            wit.zs.iter().flatten().map(|z| format!("{z}")).collect();
        assert!(distinct.len() >= 3);
    }

    #[test]
    fn mixed_preserves_base_point() {
        let h = 128i64;
        let w = rolewicz(h);
        let u0 = seq_from_complex(&[Complex64::new(3.0, -1.0), Complex64::new(0.0, 2.0)], h);
        let v = seq_from_complex(&[Complex64::new(1.0, 0.0)], h);
        let wit = build_omega_hc_mixed(&u0, &v, &w, h, 9).unwrap();
        for (i, c) in u0.support() {
            assert!(Wide::rel_diff(wit.x.get(i), c) < 1e-15);
        }
        assert!(wit.n_ks[0] > 1);
        assert_eq!(wit.regimes, vec![Regime::Inflate]);
    }

    #[test]
    fn mixed_ambiguous_classification_reports_offset() {
        // ln W jumps between 0 and ln 1e5 along the even grid: too wide for
        // the bounded band, not one-sided enough for either limit regime.
        let h = 256usize;
        let mut ws = vec![1.0; h];
        for k in (0..h).step_by(4) {
            // w_{4n+2} = 1e5, w_{4n+4} = 1e−5 (indices are 1-based).
            if k + 1 < h {
                ws[k + 1] = 1e5;
            }
            if k + 3 < h {
                ws[k + 3] = 1e-5;
            }
        }
        let w = WeightSeq::new(WeightKind::Explicit(ws), h as i64).unwrap();
        let v = seq_from_complex(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)], h as i64);
        let err = build_omega_hc_mixed(&Seq::zero(h as i64, false), &v, &w, h as i64, 3)
            .unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("ambiguous") && msg.contains("offset"), "{msg}");
    }
}
