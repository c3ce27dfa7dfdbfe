//! Shared acceptance battery: one callable check per headline claim the
//! library certifies, used by both the `suite` subcommand and the
//! integration harness.
//!
//! Every criterion returns a [`CriterionOutcome`]. `passed` is the check
//! itself; `conclusive` separates "verified false" from "the finite horizon
//! ran out before deciding" (exhausted scans are reported as inconclusive,
//! never as silent success); `detail` carries the measured quantities so a
//! report stays auditable without rerunning. Cross-check measurements of
//! constructed orbits against brute-force recomputation accumulate in an
//! [`OracleSample`] log that the oracle-equivalence criterion aggregates.

use crate::algebra::{
    free_generators, gen_lambdas, monomial_power, power, product, vandermonde_certificate, BSeq,
    Poly, ProductKind,
};
use crate::convolution::{
    exp_vector, phi_of_d, search_condition_e, wellbehaved_search, CondEGrid, PhiForm, PhiSpec,
};
use crate::densitysets::{
    build_family_far, compute_mk, enforce_pairwise_gap, scan_kappa, verify_family, DensityFamily,
};
use crate::scaled::Wide;
use crate::shifts::{apply_shift, check_inverse_example, Direction, WeightKind, WeightSeq};
use crate::spaces::{seq_from_complex, Gamma, Seq, SpaceSpec};
use crate::verify::{orbit_hit_density, Ball, OperatorSpec};
use crate::witnesses::{
    build_c0_fhc, build_cauchy_witness, build_coordwise_witness, build_ufhc_cauchy,
    build_ufhc_coordwise, check_condition_b, find_jk_candidates, l_alpha, lex_max,
    prepare_cauchy_witness, select_kappa_beta, CoordWitnessSpec,
};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

/// Battery-wide switches.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Shrink the heavy windows to a smoke pass; wall-clock budgets are not
    /// enforced in this mode.
    pub quick: bool,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { quick: false, seed: crate::DEFAULT_SEED }
    }
}

/// Result of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    /// False when a finite scan ran out of room before deciding either way.
    pub conclusive: bool,
    /// Measured wall clock; kept out of serialized reports so reruns with
    /// the same seed emit identical bytes.
    #[serde(skip_serializing)]
    pub millis: u64,
    /// Wall-clock ceiling for a full (non-quick) run.
    pub budget_ms: u64,
    pub detail: String,
}

/// One comparison between a constructed orbit value and its brute-force
/// recomputation (full power expansion, then single-step shifting).
#[derive(Clone, Debug, Serialize)]
pub struct OracleSample {
    pub criterion: u32,
    pub label: String,
    pub rel_err: f64,
}

/// Everything a battery run produces.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: String,
    pub seed: u64,
    pub quick: bool,
    pub outcomes: Vec<CriterionOutcome>,
    pub oracle: Vec<OracleSample>,
}

pub fn all_passed(report: &SuiteReport) -> bool {
    report.outcomes.iter().all(|o| o.passed)
}

/// Run the full battery in criterion order. Oracle samples recorded by the
/// witness criteria feed the aggregate equivalence criterion at the end.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut log: Vec<OracleSample> = Vec::new();
    let mut outcomes = Vec::with_capacity(14);
    outcomes.push(run_crit(1, "counterexample-weight-identities", 1_000, cfg, c01));
    outcomes.push(run_crit(2, "bilateral-inverse-identities", 1_000, cfg, |c| c02(c)));
    outcomes.push(run_crit(3, "coordinatewise-witness", 5_000, cfg, |c| c03(c, &mut log)));
    outcomes.push(run_crit(4, "cauchy-witness", 10_000, cfg, |c| c04(c, &mut log)));
    outcomes.push(run_crit(5, "density-family", 10_000, cfg, c05));
    outcomes.push(run_crit(6, "ufhc-coordinatewise", 5_000, cfg, |c| c06(c, &mut log)));
    outcomes.push(run_crit(7, "ufhc-cauchy", 30_000, cfg, |c| c07(c, &mut log)));
    outcomes.push(run_crit(8, "condition-b-differentiation", 10_000, cfg, c08));
    outcomes.push(run_crit(9, "block-weight-bullets", 5_000, cfg, c09));
    outcomes.push(run_crit(10, "c0-frequent-pipeline", 60_000, cfg, |c| c10(c, &mut log)));
    outcomes.push(run_crit(11, "eigen-relation", 5_000, cfg, c11));
    outcomes.push(run_crit(12, "condition-e-certificates", 10_000, cfg, c12));
    outcomes.push(run_crit(14, "free-generators", 5_000, cfg, c14));
    outcomes.push(run_crit(13, "oracle-equivalence", 60_000, cfg, |_| c13(&log)));
    outcomes.sort_by_key(|o| o.id);
    SuiteReport {
        schema_version: crate::SCHEMA_VERSION.to_string(),
        seed: cfg.seed,
        quick: cfg.quick,
        outcomes,
        oracle: log,
    }
}

fn run_crit<F>(id: u32, name: &str, budget_ms: u64, cfg: &SuiteConfig, f: F) -> CriterionOutcome
where
    F: FnOnce(&SuiteConfig) -> Result<(bool, String)>,
{
    let t = Instant::now();
    let res = f(cfg);
    let millis = t.elapsed().as_millis() as u64;
    let (mut passed, conclusive, mut detail) = match res {
        Ok((p, d)) => (p, true, d),
        Err(Error::HorizonExhausted(msg)) | Err(Error::Unsupported(msg)) => {
            (false, false, format!("inconclusive: {msg}"))
        }
        Err(e) => (false, true, format!("error: {e}")),
    };
    if !cfg.quick && millis >= budget_ms {
        passed = false;
        detail = format!("{detail}; over budget: {millis} ms >= {budget_ms} ms");
    }
    CriterionOutcome { id, name: name.into(), passed, conclusive, millis, budget_ms, detail }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

/// Relative gap between two vectors in the q-th seminorm, scaled by the
/// larger of the two norms (absolute when both vanish).
fn rel_gap(space: &SpaceSpec, q: u32, a: &Seq, b: &Seq) -> Result<f64> {
    let na = space.seminorm(a, q)?;
    let nb = space.seminorm(b, q)?;
    let nd = space.seminorm(&a.sub(b), q)?;
    let scale = na.max(nb);
    Ok(if scale > 0.0 { nd / scale } else { nd })
}

/// Brute-force orbit: `steps` successive single applications of the shift.
fn brute_backward(w: &WeightSeq, x: &Seq, steps: i64) -> Result<Seq> {
    let mut cur = x.clone();
    for _ in 0..steps {
        cur = apply_shift(w, &cur, 1, Direction::Backward)?;
    }
    Ok(cur)
}

/// Seeded finite-support vector on [0, max_idx]: complex coordinates in the
/// unit box, each kept with probability ~2/3, never identically zero.
fn random_seq(rng: &mut ChaCha8Rng, max_idx: i64, horizon: i64) -> Seq {
    let mut s = Seq::zero(horizon, false);
    let mut any = false;
    for i in 0..=max_idx {
        if rng.gen::<f64>() < 0.35 {
            continue;
        }
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        if re.abs().max(im.abs()) < 1e-3 {
            continue;
        }
        s.set(i, Wide::from_complex(Complex64::new(re, im)));
        any = true;
    }
    if !any {
        let re: f64 = 0.3 + 0.7 * rng.gen::<f64>();
        s.set(0, Wide::from_complex(Complex64::new(re, 0.0)));
    }
    s
}

/// The block pipeline shared by the block-weight and sup-norm criteria:
/// three far-apart sets with gap parameters (1, 2, 3), then the longest
/// block prefix the family horizon supports.
fn block_pipeline(horizon: i64) -> Result<(DensityFamily, Vec<i64>)> {
    let base = build_family_far(3, horizon)?;
    let fam = enforce_pairwise_gap(&base, &[1.0, 2.0, 3.0])?;
    let ms = (2..=8)
        .rev()
        .find_map(|k| compute_mk(&fam, k).ok())
        .ok_or_else(|| Error::HorizonExhausted("no block prefix fits the family horizon".into()))?;
    Ok((fam, ms))
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// 1: the odd-doubling counterexample weight satisfies its defining norm
/// identity exactly on odd indices and the geometric decay law on even ones.
fn c01(_cfg: &SuiteConfig) -> Result<(bool, String)> {
    let n_max = 50i64;
    let w = WeightSeq::new(WeightKind::CounterexampleOdd, 2 * n_max + 2)?;
    let sp = SpaceSpec::weighted_c0(Gamma::OddDoubling);
    let mut worst_odd = 0.0f64;
    for n in 0..=n_max {
        let ln_val = -0.5 * w.lam(2 * n + 1) + sp.ln_norm_e(2 * n + 1, 1);
        worst_odd = worst_odd.max(ln_val.abs());
    }
    let ln2 = std::f64::consts::LN_2;
    let mut worst_even = 0.0f64;
    for &g in &[0.25f64, 0.5, 1.0] {
        for n in 1..=n_max {
            let ln_val = -g * w.lam(2 * n) + sp.ln_norm_e(2 * n, 1);
            let expect = -g * (n - 1) as f64 * ln2;
            worst_even = worst_even.max((ln_val - expect).abs());
        }
    }
    let passed = worst_odd < 1e-12 && worst_even < 1e-12;
    Ok((
        passed,
        format!(
            "odd-index identity |ln| <= {worst_odd:.2e} for n <= {n_max}; even-index decay \
             matches 2^(-g(n-1)) to {worst_even:.2e} for g in {{1/4, 1/2, 1}}"
        ),
    ))
}

/// 2: the invertible bilateral weight satisfies the inverse-direction norm
/// identity exactly and the forward-direction decay law exactly.
fn c02(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let n = if cfg.quick { 200 } else { 1_000 };
    let rows = check_inverse_example(n)?;
    let mut worst_fwd = 0.0f64;
    let mut worst_back = 0.0f64;
    for row in &rows {
        worst_fwd = worst_fwd.max(row.forward_value_ln.abs());
        worst_back = worst_back.max((row.backward_value_ln - row.backward_expected_ln).abs());
    }
    let passed = worst_fwd < 1e-12 && worst_back < 1e-12;
    Ok((
        passed,
        format!(
            "{} rows: inverse-direction identity |ln| <= {worst_fwd:.2e}, forward value vs \
             1/(n+1) |ln gap| <= {worst_back:.2e}",
            rows.len()
        ),
    ))
}

/// 3: coordinatewise witnesses hit random targets at the first admissible
/// orbit time while every other exponent's orbit stays small.
fn c03(cfg: &SuiteConfig, log: &mut Vec<OracleSample>) -> Result<(bool, String)> {
    let sets: Vec<Vec<Vec<u32>>> = vec![
        vec![vec![1], vec![2]],
        vec![vec![1], vec![2], vec![3]],
        vec![vec![1, 0], vec![0, 1], vec![1, 1]],
    ];
    let cases = if cfg.quick { 5 } else { 20 };
    let cap = 2_000i64;
    let space = SpaceSpec::l1();
    let w = WeightSeq::new(WeightKind::Rolewicz(2.0), cap + 40)?;
    let mut max_beta_err = 0.0f64;
    let mut max_alpha_norm = 0.0f64;
    let mut max_nk = 0i64;
    let mut oracle_worst = 0.0f64;
    for (si, a) in sets.iter().enumerate() {
        // The direction kappa is the construction's free parameter: scan
        // sub-seeds until the smallest exponent gap clears 0.05, so the
        // required orbit time stays within the scan window.
        let (kappa, beta) = (0..64u64)
            .find_map(|t| {
                let seed = cfg.seed.wrapping_add(((si as u64) << 8) + t);
                let got = select_kappa_beta(a, seed).ok()?;
                let gap = a
                    .iter()
                    .filter(|al| **al != got.1)
                    .map(|al| l_alpha(al, &got.0) - 1.0)
                    .fold(f64::INFINITY, f64::min);
                (gap >= 0.05).then_some(got)
            })
            .ok_or_else(|| Error::SearchFailed("no direction separated the exponents".into()))?;
        let d = a[0].len();
        for case in 0..cases {
            let mut rng =
                ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(31).wrapping_add((si * 100 + case + 7) as u64));
            let x: Vec<Seq> = (0..d).map(|_| random_seq(&mut rng, 6, w.horizon)).collect();
            let y = random_seq(&mut rng, 4, w.horizon);
            let p = y.support_max().unwrap_or(0);
            let floor = x.iter().map(|s| s.support_max().unwrap_or(-1)).fold(0, i64::max) + p + 1;
            // Exact closed form for the non-target orbit norms: coefficient
            // y_l^{L_a} W(l, n+l)^{1-L_a} summed over the target support.
            let pred = |alpha: &[u32], n: i64| -> f64 {
                let la = l_alpha(alpha, &kappa);
                (0..=p)
                    .map(|l| {
                        let yl = y.get(l);
                        if yl.is_zero() {
                            0.0
                        } else {
                            (la * yl.ln_abs() + (1.0 - la) * w.log_prod(l, n + l)).exp()
                        }
                    })
                    .sum()
            };
            let nk = (floor..=cap)
                .find(|&n| a.iter().filter(|al| **al != beta).all(|al| pred(al, n) < 1e-6))
                .ok_or_else(|| {
                    Error::HorizonExhausted(format!("no orbit time <= {cap} clears the bound"))
                })?;
            max_nk = max_nk.max(nk);
            let spec = CoordWitnessSpec {
                a: a.clone(),
                x: x.clone(),
                y: y.clone(),
                n_k: nk,
                kappa: kappa.clone(),
                beta: beta.clone(),
            };
            let us = build_coordwise_witness(&spec, &w, &space)?;
            for alpha in a {
                let pw = monomial_power(&us, alpha, ProductKind::Coordinatewise)?;
                let orb = apply_shift(&w, &pw, nk, Direction::Backward)?;
                if *alpha == beta {
                    max_beta_err = max_beta_err.max(space.seminorm(&orb.sub(&y), 1)?);
                } else {
                    max_alpha_norm = max_alpha_norm.max(space.seminorm(&orb, 1)?);
                }
                let brute = brute_backward(&w, &pw, nk)?;
                oracle_worst = oracle_worst.max(rel_gap(&space, 1, &orb, &brute)?);
            }
        }
    }
    log.push(OracleSample {
        criterion: 3,
        label: "coordinatewise power, closed-form jump vs single steps".into(),
        rel_err: oracle_worst,
    });
    let passed = max_beta_err < 1e-9 && max_alpha_norm < 1e-6;
    Ok((
        passed,
        format!(
            "{cases} cases x 3 exponent sets: target error <= {max_beta_err:.2e} (< 1e-9), \
             non-target orbit norm <= {max_alpha_norm:.2e} (< 1e-6) at first passing time \
             (max n_k {max_nk})"
        ),
    ))
}

/// 4: convolution witnesses annihilate non-maximal exponents exactly and
/// approximate the target with residuals that shrink as the orbit time grows.
fn c04(cfg: &SuiteConfig, log: &mut Vec<OracleSample>) -> Result<(bool, String)> {
    let space = SpaceSpec::l1();
    let h = if cfg.quick { 2_000 } else { 6_000 };
    let w = WeightSeq::new(WeightKind::Rolewicz(2.0), h)?;
    let families: Vec<Vec<Vec<u32>>> =
        vec![vec![vec![1], vec![2]], vec![vec![1, 1], vec![1, 0], vec![0, 1]]];
    let delta = 1e-4;
    let mut worst_resid = 0.0f64;
    let mut decreasing = true;
    let mut zeros_ok = true;
    let mut oracle_worst = 0.0f64;
    let mut detail_resid = Vec::new();
    for (fi, a) in families.iter().enumerate() {
        let d = a[0].len();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x40 + fi as u64));
        let x: Vec<Seq> = (0..d).map(|_| random_seq(&mut rng, 2, h)).collect();
        let y = random_seq(&mut rng, 2, h);
        let beta = lex_max(a);
        let mut jks = find_jk_candidates(a, &x, &y, &w, &space, 1, delta, 3)?;
        if jks.len() < 3 {
            return Err(Error::HorizonExhausted("fewer than three distinct orbit times".into()));
        }
        // The ladder's first rung only bounds the geometry; advance it until
        // the measured residual clears the target, so the reported orbit
        // times are the ones an actual search would return.
        while jks[0] + 1 < jks[1] {
            let spec = prepare_cauchy_witness(a, &x, &y, &w, &space, 1, delta, jks[0])?;
            let wit = build_cauchy_witness(&spec, &w, &space)?;
            if space.seminorm(&wit.residual, 1)? < 1e-3 {
                break;
            }
            jks[0] += 1;
        }
        let mut prev = f64::INFINITY;
        let mut resids = Vec::new();
        for (ji, &jk) in jks.iter().enumerate() {
            let spec = prepare_cauchy_witness(a, &x, &y, &w, &space, 1, delta, jk)?;
            let wit = build_cauchy_witness(&spec, &w, &space)?;
            let resid = space.seminorm(&wit.residual, 1)?;
            worst_resid = worst_resid.max(resid);
            // An exactly-zero residual is an exact witness; equality is only
            // tolerated there, where no improvement is possible.
            if !(resid < prev || resid == 0.0) {
                decreasing = false;
            }
            prev = resid;
            resids.push(resid);
            for alpha in a.iter().filter(|al| **al != beta) {
                let pw = monomial_power(&wit.u, alpha, ProductKind::Cauchy)?;
                let sup = pw.support_max().unwrap_or(-1);
                let orb = apply_shift(&w, &pw, wit.n, Direction::Backward)?;
                let exact =
                    sup < wit.n && orb.is_zero() && orb.tail_bound == 0.0 && pw.tail_bound == 0.0;
                if !exact {
                    zeros_ok = false;
                }
                if ji == 0 {
                    // Brute path on an annihilated exponent must also vanish.
                    let brute = brute_backward(&w, &pw, wit.n)?;
                    oracle_worst = oracle_worst.max(rel_gap(&space, 1, &orb, &brute)?);
                }
            }
            if ji == 0 || ji == 2 {
                // Compare the orbits themselves (target + residual vs brute),
                // where both paths carry the same O(1) scale.
                let pwb = monomial_power(&wit.u, &beta, ProductKind::Cauchy)?;
                let brute = brute_backward(&w, &pwb, wit.n)?;
                let mut constructed = y.clone();
                for (i, c) in wit.residual.support() {
                    let cur = constructed.get(i);
                    constructed.set(i, cur + c);
                }
                oracle_worst = oracle_worst.max(rel_gap(&space, 1, &constructed, &brute)?);
            }
        }
        detail_resid.push(format!("set {}: residuals {:?} at J {:?}", fi + 1, resids, jks));
    }
    log.push(OracleSample {
        criterion: 4,
        label: "convolution power, constructed orbit vs single steps".into(),
        rel_err: oracle_worst,
    });
    let passed = worst_resid < 1e-3 && decreasing && zeros_ok;
    Ok((
        passed,
        format!(
            "non-maximal exponents exactly zero: {zeros_ok}; residual <= {worst_resid:.2e} \
             (< 1e-3), decreasing across three orbit times: {decreasing}; {}",
            detail_resid.join("; ")
        ),
    ))
}

/// 5: the far-apart density family satisfies every recorded separation
/// exactly, certifies its gap thresholds, and keeps positive lower density.
fn c05(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let horizon = if cfg.quick { 20_000 } else { 100_000 };
    let base = build_family_far(3, horizon)?;
    let fam = enforce_pairwise_gap(&base, &[1.0, 2.0, 3.0])?;
    let rep = verify_family(&fam);
    let sep_ok = rep.disjoint && rep.min_ok && rep.self_gap_ok && rep.cross_gap_ok;
    let mut kappas = Vec::new();
    let mut kappa_ok = true;
    for c in [1i64, 10, 100] {
        let e = scan_kappa(&fam.sets, c);
        kappa_ok &= e.certified && e.kappa >= 1;
        if let Some(recorded) = fam.kappa_table.get(&c) {
            kappa_ok &= *recorded == e;
        }
        kappas.push((c, e.kappa, e.certified));
    }
    let dens_ok = fam.densities.iter().all(|&d| d >= 1e-3);
    let passed = sep_ok && kappa_ok && dens_ok && rep.pass;
    Ok((
        passed,
        format!(
            "horizon {horizon}: separations exact = {sep_ok}; kappa thresholds {kappas:?} all \
             certified = {kappa_ok}; lower densities {:?} all >= 1e-3 = {dens_ok}",
            fam.densities
        ),
    ))
}

/// 6: the block-train witness enters the target ball at every scheduled
/// orbit time, giving lower density at least 1/(2N) over the window.
fn c06(cfg: &SuiteConfig, log: &mut Vec<OracleSample>) -> Result<(bool, String)> {
    let window = if cfg.quick { 2_000i64 } else { 10_000 };
    let n_big = 5i64;
    let n1 = 2i64;
    let j_max = window / n_big;
    let terms = (j_max - n1 + 1) as usize;
    let h = window + 10;
    let w = WeightSeq::new(WeightKind::Rolewicz(2.0), h)?;
    let space = SpaceSpec::l1();
    let v = Seq::basis(0, h, false);
    let x = Seq::zero(h, false);
    let wit = build_ufhc_coordwise(1, 3, &v, &x, &w, &space, n_big, n1, terms)?;
    let ball = Ball { center: v.clone(), radius: 0.2, q: 1 };
    let op = OperatorSpec::Shift(w.clone(), Direction::Backward);
    let scan = orbit_hit_density(
        &op,
        &space,
        &wit.u,
        &Poly::monomial(1),
        ProductKind::Coordinatewise,
        &[ball],
        window,
        n_big,
    )?;
    let td = &scan.targets[0];
    let mut contains_all = true;
    for (idx, &pstep) in scan.samples.iter().enumerate() {
        let j = pstep / n_big;
        if j >= n1 && j <= j_max && !td.hit_flags[idx] {
            contains_all = false;
        }
    }
    let dens_ok = td.density_min >= 0.1;
    // Oracle: cumulative single steps against fresh closed-form jumps at
    // every sampled time.
    let mut cur = wit.u.clone();
    let mut pos = 0i64;
    let mut worst = 0.0f64;
    for &pstep in &scan.samples {
        while pos < pstep {
            cur = apply_shift(&w, &cur, 1, Direction::Backward)?;
            pos += 1;
        }
        let closed = apply_shift(&w, &wit.u, pstep, Direction::Backward)?;
        worst = worst.max(rel_gap(&space, 1, &closed, &cur)?);
    }
    log.push(OracleSample {
        criterion: 6,
        label: "block-train orbit, closed-form jumps vs single steps".into(),
        rel_err: worst,
    });
    let passed = contains_all && dens_ok;
    Ok((
        passed,
        format!(
            "window {window}, stride {n_big}: every scheduled time j in [{n1}, {j_max}] hits \
             B(v, 0.2) = {contains_all}; lower density {:.4} >= 0.1 = {dens_ok} ({} hits / {} \
             sampled)",
            td.density_min,
            td.hit_count,
            scan.samples.len()
        ),
    ))
}

/// 7: the convolution hitting-time construction: the geometric criterion
/// quantity decays below 1e-4 by sigma = 60, and the full witness has exact
/// annihilation below the top power with hit-set cardinality matching the
/// predicted ratio.
fn c07(cfg: &SuiteConfig, log: &mut Vec<OracleSample>) -> Result<(bool, String)> {
    let space = SpaceSpec::l1();
    let wb = WeightSeq::new(WeightKind::Rolewicz(2.0), 4_000)?;
    let sigmas_b = [10i64, 20, 30, 40, 50, 60];
    let rows = check_condition_b(&wb, &space, 2, 0.5, &sigmas_b, &[1])?;
    let vals: Vec<f64> = rows.iter().map(|r| r.values[0].1).collect();
    let mono = vals.windows(2).all(|p| p[1] < p[0]);
    let small = *vals.last().unwrap() < 1e-4;

    let sigma = if cfg.quick { 200i64 } else { 1_000 };
    let (m, q, c, d) = (2u32, 2i64, 0.5f64, 0.7f64);
    let h = i64::from(m) * q * sigma + 200;
    let w = WeightSeq::new(WeightKind::Rolewicz(2.0), h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x70));
    let y = random_seq(&mut rng, 1, h);
    let x = Seq::zero(h, false);
    let wit = build_ufhc_cauchy(m, &y, &x, &w, &space, c, d, q, sigma)?;
    let ratio_gap = (wit.card_ratio - wit.formula_ratio).abs();
    let ratio_ok = ratio_gap <= 0.10 * wit.formula_ratio;
    let mut zeros_ok = !wit.e_sigma.is_empty();
    for &s in &wit.e_sigma {
        for n_pow in 1..m {
            let pw = power(&wit.u, n_pow, ProductKind::Cauchy)?;
            let orb = apply_shift(&w, &pw, s, Direction::Backward)?;
            if !(orb.is_zero() && orb.tail_bound == 0.0 && pw.tail_bound == 0.0) {
                zeros_ok = false;
            }
        }
    }
    // Oracle on the top power at three hit times.
    let um = power(&wit.u, m, ProductKind::Cauchy)?;
    let picks =
        [wit.e_sigma[0], wit.e_sigma[wit.e_sigma.len() / 2], *wit.e_sigma.last().unwrap()];
    let mut worst = 0.0f64;
    for &s in &picks {
        let closed = apply_shift(&w, &um, s, Direction::Backward)?;
        let brute = brute_backward(&w, &um, s)?;
        worst = worst.max(rel_gap(&space, 1, &closed, &brute)?);
    }
    log.push(OracleSample {
        criterion: 7,
        label: "hitting-time orbit, closed-form jumps vs single steps".into(),
        rel_err: worst,
    });
    let passed = mono && small && ratio_ok && zeros_ok;
    Ok((
        passed,
        format!(
            "criterion quantity decreasing over sigma {sigmas_b:?}: {mono}, final {:.2e} < 1e-4: \
             {small}; sigma = {sigma} witness: {} hit times, powers below {m} exactly zero on all \
             of them = {zeros_ok}, |card ratio - formula| = {ratio_gap:.3e} <= 10% of \
             {:.4} = {ratio_ok}",
            vals.last().unwrap(),
            wit.e_sigma.len(),
            wit.formula_ratio
        ),
    ))
}

/// 8: the same criterion quantity for the differentiation operator on the
/// entire-function space decays below 1e-6 by sigma = 200 at radii 1, 2, 4.
fn c08(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let smax = if cfg.quick { 100i64 } else { 200 };
    let h = 3 * smax + 200;
    let weights: Vec<f64> = (1..=h).map(|n| n as f64).collect();
    let w = WeightSeq::new(WeightKind::Explicit(weights), h)?;
    let space = SpaceSpec::entire(4);
    let sigmas: Vec<i64> = vec![smax / 8, smax / 4, smax / 2, 3 * smax / 4, smax];
    let mut all_mono = true;
    let mut all_small = true;
    let mut finals = Vec::new();
    for m in [2u32, 3] {
        let rows = check_condition_b(&w, &space, m, 0.5, &sigmas, &[1, 2, 4])?;
        for qi in 0..3 {
            let vals: Vec<f64> = rows.iter().map(|r| r.values[qi].1).collect();
            all_mono &= vals.windows(2).all(|p| p[1] < p[0]);
            all_small &= *vals.last().unwrap() < 1e-6;
            finals.push((m, rows[0].values[qi].0, *vals.last().unwrap()));
        }
    }
    let passed = all_mono && all_small;
    Ok((
        passed,
        format!(
            "sigma grid {sigmas:?}: strictly decreasing for every (power, radius) = {all_mono}; \
             final values {finals:?} all < 1e-6 = {all_small}"
        ),
    ))
}

/// 9: the blockwise-recursive weight satisfies its four structural bullets
/// at the sixth block boundary.
fn c09(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let fam_h = if cfg.quick { 600 } else { 600 };
    let (_fam, ms_full) = block_pipeline(fam_h)?;
    if ms_full.len() < 6 {
        return Err(Error::HorizonExhausted(format!(
            "only {} block boundaries materialize",
            ms_full.len()
        )));
    }
    let ms: Vec<i64> = ms_full[..6].to_vec();
    let h = ms[5];
    let w = WeightSeq::new(WeightKind::MkWeight(ms.clone()), h)?;
    let ln2 = std::f64::consts::LN_2;
    // (a) weights monotone non-increasing and >= 1.
    let mut mono = true;
    let mut prev = f64::INFINITY;
    for n in 1..=h {
        let lw = w.ln_w(n);
        if lw > prev + 1e-12 || lw < -1e-12 {
            mono = false;
        }
        prev = lw;
    }
    // (b) block identity: logW(M_{k+1}) = logW(M_k) (1 + 1/k).
    let mut worst_block = 0.0f64;
    for k in 2..=5usize {
        let lhs = w.lam(ms[k]);
        let rhs = w.lam(ms[k - 1]) * (1.0 + 1.0 / k as f64);
        worst_block = worst_block.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }
    // (c) product formula: logW(M_k) = M_2 ln2 * k / 2.
    let mut worst_prod = 0.0f64;
    for k in 2..=6usize {
        let expect = ms[1] as f64 * ln2 * k as f64 / 2.0;
        worst_prod = worst_prod.max((w.lam(ms[k - 1]) - expect).abs() / expect.abs().max(1.0));
    }
    // (d) ratio quantity strictly decreasing at k = 3, 4, 5.
    let ratio = |k: usize, al: f64| w.lam(ms[k]) - w.lam(ms[k - 2]) - al * w.lam(ms[k]);
    let mut ratios_ok = true;
    for &al in &[0.25f64, 0.5, 1.0] {
        let (r3, r4, r5) = (ratio(3, al), ratio(4, al), ratio(5, al));
        ratios_ok &= r3 > r4 && r4 > r5;
    }
    let passed = mono && worst_block < 1e-12 && worst_prod < 1e-12 && ratios_ok;
    Ok((
        passed,
        format!(
            "blocks {ms:?} (horizon {h}): weights monotone = {mono}; block identity rel err \
             <= {worst_block:.2e}; product formula rel err <= {worst_prod:.2e}; ratio quantity \
             decreasing at k = 3,4,5 for alpha in {{1/4, 1/2, 1}} = {ratios_ok}"
        ),
    ))
}

/// 10: the sup-norm pipeline proves its three inequalities with tail bounds
/// for the first two targets and reports the third as inconclusive.
fn c10(cfg: &SuiteConfig, log: &mut Vec<OracleSample>) -> Result<(bool, String)> {
    let fam_h = if cfg.quick { 600 } else { 600 };
    let (fam, ms) = block_pipeline(fam_h)?;
    let h = *ms.last().unwrap();
    let w = WeightSeq::new(WeightKind::MkWeight(ms), h)?;
    let targets = vec![
        (seq_from_complex(&[Complex64::new(1.0, 1.0), Complex64::new(1.0, 0.0)], h), 1u32),
        (
            seq_from_complex(
                &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), Complex64::new(0.5, 0.0)],
                h,
            ),
            1,
        ),
        (seq_from_complex(&[Complex64::new(1.0, 0.0)], h), 2),
    ];
    let (u, reports) = build_c0_fhc(&targets, &fam, &w, h)?;
    let mut ok = !u.is_zero() && reports.len() == 3;
    let mut lines = Vec::new();
    for rep in &reports[..2] {
        let bound = 1.0 / rep.p as f64;
        let ineq_ok = rep.ineq1_worst < bound && rep.ineq2_worst < bound && rep.ineq3_worst < bound;
        ok &= rep.conclusive && rep.passed && rep.monotone_cert && ineq_ok;
        lines.push(format!(
            "target {}: worsts ({:.3e}, {:.3e}, {:.3e}) < {bound} over {} scheduled times",
            rep.p, rep.ineq1_worst, rep.ineq2_worst, rep.ineq3_worst, rep.block_count
        ));
        log.push(OracleSample {
            criterion: 10,
            label: format!("sup-norm pipeline target {}", rep.p),
            rel_err: rep.oracle_rel_err,
        });
    }
    let third_inconclusive = !reports[2].conclusive && reports[2].reason.is_some();
    ok &= third_inconclusive;
    lines.push(format!(
        "target 3 inconclusive (not failed): {}",
        reports[2].reason.as_deref().unwrap_or("no reason recorded")
    ));
    Ok((ok, lines.join("; ")))
}

/// 11: applying an entire symbol through the coefficient action matches
/// multiplication by its value on every exponential eigenvector.
fn c11(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let space = SpaceSpec::entire(1);
    let l = 60i64;
    let phis = vec![
        PhiSpec::differentiation(),
        PhiSpec::new(
            PhiForm::PolyTimesExp(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
            40,
        )?,
        PhiSpec::new(PhiForm::HalfExpPlusExpIMinusQuarter, 40)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for phi in &phis {
        for _ in 0..10 {
            let lam = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let lam = if lam.norm() > 2.0 { lam / lam.norm() * 2.0 } else { lam };
            let ev = exp_vector(lam, l);
            let lhs = phi_of_d(phi, &ev)?;
            let scale = Wide::from_complex(phi.eval_closed(lam));
            let mut diff = Seq::zero(l, false);
            for (i, cf) in ev.support() {
                diff.set(i, cf * scale);
            }
            for (i, cf) in lhs.support() {
                let cur = diff.get(i);
                diff.set(i, cur + cf.scale(-1.0));
            }
            worst = worst.max(space.seminorm(&diff, 1)?);
        }
    }
    let passed = worst < 1e-8;
    Ok((
        passed,
        format!("3 symbols x 10 seeded eigenvalues at truncation {l}: worst defect {worst:.2e} < 1e-8"),
    ))
}

/// 12: the eigenvalue-geometry certificates: the worked symbol certifies on
/// the 2-pi lattice with all margins positive, and the ray search certifies
/// the decaying product symbol along the negative real direction.
fn c12(_cfg: &SuiteConfig) -> Result<(bool, String)> {
    let phi = PhiSpec::new(PhiForm::HalfExpPlusExpIMinusQuarter, 80)?;
    let grid = CondEGrid::lattice_2pi(3, 1e-6);
    let cert = search_condition_e(&phi, &[1, 2, 3], &grid)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let k = (cert.b.re / two_pi).round() as i64;
    let min_margin = cert
        .rows
        .iter()
        .map(|r| r.rhs_ln - r.lhs_ln)
        .fold(f64::INFINITY, f64::min)
        .min(cert.margin_ln);
    let lattice_ok =
        cert.m == 3 && (1..=3).contains(&k) && cert.margin_ln > 0.0 && !cert.rows.is_empty();

    let pe = PhiSpec::new(
        PhiForm::PolyTimesExp(vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]),
        40,
    )?;
    let wb = wellbehaved_search(&pe, Complex64::new(-1.0, 0.0), &[1, 2, 3])?;
    let ray_ok = wb.cert.margin_ln > 0.0 && wb.t1 < wb.t0 && wb.t0 > 0.0;
    let passed = lattice_ok && ray_ok;
    Ok((
        passed,
        format!(
            "lattice certificate at exponent m = {} with k = {k}, {} inequality rows, min ln \
             margin {min_margin:.3e}; ray certificate m = {} with threshold t0 = {:.6}, \
             chosen t1 = {:.6}, ln margin {:.3e}",
            cert.m,
            cert.rows.len(),
            wb.cert.m,
            wb.t0,
            wb.t1,
            wb.cert.margin_ln
        ),
    ))
}

/// 13: aggregate of every recorded brute-force cross-check.
fn c13(log: &[OracleSample]) -> Result<(bool, String)> {
    let need: [u32; 5] = [3, 4, 6, 7, 10];
    let missing: Vec<u32> =
        need.iter().copied().filter(|n| !log.iter().any(|s| s.criterion == *n)).collect();
    if !missing.is_empty() {
        return Err(Error::HorizonExhausted(format!(
            "no oracle samples from criteria {missing:?} (their runs did not complete)"
        )));
    }
    let worst = log.iter().map(|s| s.rel_err).fold(0.0f64, f64::max);
    let passed = worst < 1e-9;
    Ok((
        passed,
        format!(
            "{} cross-checks covering criteria {need:?}: worst relative gap {worst:.2e} < 1e-9",
            log.len()
        ),
    ))
}

/// 14: coordinatewise free generators converge to their basis vectors under
/// powers, with a multiplicative-independence certificate on the parameters.
fn c14(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let lambdas = gen_lambdas(3, cfg.seed);
    let (gap, cert_ok) = vandermonde_certificate(&lambdas, 2);
    let space = SpaceSpec::l1();
    let horizon = 40i64;
    let fg = free_generators(3, &space, &BSeq::DefaultHalving, &lambdas, horizon)?;
    let mut all_found = true;
    let mut found_at = Vec::new();
    for (i, g) in fg.generators.iter().enumerate() {
        let e = Seq::basis(i as i64, horizon, false);
        let mut cur = g.clone();
        let mut found = None;
        for p in 1..=200u32 {
            if p > 1 {
                cur = product(&cur, g, ProductKind::Coordinatewise)?;
            }
            let dist = space.seminorm(&cur.sub(&e), 1)?;
            if dist < 1e-6 {
                found = Some((p, dist));
                break;
            }
        }
        match found {
            Some((p, dist)) => found_at.push(format!("g_{}: p = {p}, dist {dist:.2e}", i + 1)),
            None => {
                all_found = false;
                found_at.push(format!("g_{}: no power <= 200 reached 1e-6", i + 1));
            }
        }
    }
    let passed = all_found && cert_ok;
    Ok((
        passed,
        format!(
            "independence certificate min monomial gap {gap:.3e} (nonzero = {cert_ok}); {}",
            found_at.join("; ")
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_passes_and_is_conclusive() {
        let cfg = SuiteConfig { quick: true, seed: crate::DEFAULT_SEED };
        let rep = run_suite(&cfg);
        assert_eq!(rep.outcomes.len(), 14);
        for o in &rep.outcomes {
            assert!(o.conclusive, "criterion {} inconclusive: {}", o.id, o.detail);
            assert!(o.passed, "criterion {} failed: {}", o.id, o.detail);
        }
        let ids: Vec<u32> = rep.outcomes.iter().map(|o| o.id).collect();
        assert_eq!(ids, (1..=14).collect::<Vec<u32>>());
        assert!(!rep.oracle.is_empty());
    }

    #[test]
    fn cheap_criteria_pass_individually() {
        let cfg = SuiteConfig::default();
        for (f, name) in [
            (c01 as fn(&SuiteConfig) -> Result<(bool, String)>, "c01"),
            (c09, "c09"),
            (c12, "c12"),
            (c14, "c14"),
        ] {
            let (passed, detail) = f(&cfg).unwrap();
            assert!(passed, "{name}: {detail}");
        }
    }

    #[test]
    fn outcome_detail_mentions_budget_when_exceeded() {
        let cfg = SuiteConfig { quick: false, seed: 1 };
        let out = run_crit(99, "sleepy", 0, &cfg, |_| Ok((true, "fine".into())));
        assert!(!out.passed);
        assert!(out.detail.contains("over budget"));
    }
}
