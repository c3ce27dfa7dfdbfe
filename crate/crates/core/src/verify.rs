//! Orbit computation, criterion-instance checking, hitting-time density
//! measurement, and deterministic report assembly.
//!
//! A criterion instance packages generators u_1..u_d, an exponent set A with
//! distinguished β, an operator T, and two seminorm balls; checking it
//! evaluates T^N(u^α) for every α and records ball memberships
//! conservatively (norm plus tail bound inside the radius). Orbit scans
//! iterate T^p(P(x)) and report hit densities per target, bracketed when
//! stride sampling leaves gaps.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{eval_poly, monomial_power, Poly, ProductKind};
use crate::convolution::{phi_of_d, PhiSpec};
use crate::shifts::{apply_shift, Direction, WeightSeq};
use crate::spaces::{Seq, SpaceSpec};
use crate::{Error, Result, SCHEMA_VERSION};

/// Operator driving the dynamics: a weighted shift or a convolution symbol.
#[derive(Clone, Debug)]
pub enum OperatorSpec {
    Shift(WeightSeq, Direction),
    Convolution(PhiSpec),
}

impl OperatorSpec {
    fn tag(&self) -> &'static str {
        match self {
            OperatorSpec::Shift(_, Direction::Backward) => "backward-shift",
            OperatorSpec::Shift(_, Direction::Forward) => "forward-shift",
            OperatorSpec::Convolution(_) => "convolution",
        }
    }
}

/// Seminorm ball ‖x − center‖_q < radius.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: Seq,
    pub radius: f64,
    pub q: u32,
}

/// One multi-exponent family check: T^N(u^β) must land in the target ball,
/// every other T^N(u^α) in the ball of `w_radius` around zero.
#[derive(Clone, Debug)]
pub struct CriterionInstance {
    pub space: SpaceSpec,
    pub a: Vec<Vec<u32>>,
    pub beta: Vec<u32>,
    pub u: Vec<Seq>,
    pub n_steps: i64,
    pub v_ball: Ball,
    pub w_radius: f64,
    pub w_q: u32,
    pub product: ProductKind,
    pub operator: OperatorSpec,
}

/// Outcome for one exponent α.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaResult {
    pub alpha: Vec<u32>,
    pub is_beta: bool,
    /// The image is identically zero with zero tail bound.
    pub exact_zero: bool,
    /// Distance to the relevant ball center (target for β, zero otherwise).
    pub norm: f64,
    pub tail_bound: f64,
    pub inside: bool,
}

/// Hit statistics for one target ball over a scanned orbit window.
#[derive(Clone, Debug, Serialize)]
pub struct TargetDensity {
    /// One flag per sampled step, aligned with `OrbitScan::samples`.
    pub hit_flags: Vec<bool>,
    pub hit_count: u64,
    /// Density over the window assuming every unsampled step misses.
    pub density_min: f64,
    /// Density over the window assuming every unsampled step hits.
    pub density_max: f64,
}

/// Orbit scan over p = 0, stride, 2·stride, … ≤ horizon_n.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitScan {
    pub horizon_n: i64,
    pub stride: i64,
    pub samples: Vec<i64>,
    pub targets: Vec<TargetDensity>,
}

/// Full evidence record; serializes to deterministic sorted-key JSON.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub schema_version: String,
    pub seed: u64,
    pub instance: String,
    pub alpha_results: Vec<AlphaResult>,
    pub orbit: Option<OrbitScan>,
    pub params: BTreeMap<String, serde_json::Value>,
    pub passed: bool,
}

impl WitnessReport {
    /// Empty skeleton: valid, serializable, nothing checked.
    pub fn skeleton(seed: u64) -> WitnessReport {
        WitnessReport {
            schema_version: SCHEMA_VERSION.to_string(),
            seed,
            instance: String::new(),
            alpha_results: Vec::new(),
            orbit: None,
            params: BTreeMap::new(),
            passed: false,
        }
    }
}

/// x − y coefficientwise, with tail bounds added conservatively.
fn sub(x: &Seq, y: &Seq) -> Seq {
    let mut out = x.clone();
    for (i, w) in y.support() {
        let cur = out.get(i);
        out.set(i, cur + w.scale(-1.0));
    }
    out.tail_bound = x.tail_bound + y.tail_bound;
    out
}

/// Conservative membership: (distance, distance + tail < radius).
fn ball_check(space: &SpaceSpec, x: &Seq, ball: &Ball) -> Result<(f64, bool)> {
    let dist = space.seminorm(&sub(x, &ball.center), ball.q)?;
    let tail = x.tail_bound + ball.center.tail_bound;
    Ok((dist, dist + tail < ball.radius))
}

/// T^N x under the declared operator. Shifts use the cached weight-product
/// closed form in a single pass; convolution symbols are applied step by
/// step after verifying the support leaves headroom for exact coefficients.
pub fn apply_operator_power(op: &OperatorSpec, x: &Seq, steps: i64) -> Result<Seq> {
    if steps < 0 {
        return Err(Error::InvalidParameter("orbit steps must be ≥ 0".into()));
    }
    match op {
        OperatorSpec::Shift(w, dir) => apply_shift(w, x, steps, *dir),
        OperatorSpec::Convolution(phi) => {
            let k = phi.k_eff() as i64;
            if x.support_max().unwrap_or(-1) > x.horizon - k {
                return Err(Error::HorizonExhausted(format!(
                    "support reaches {} but exact convolution needs {} coefficients of headroom",
                    x.support_max().unwrap_or(-1),
                    k
                )));
            }
            let mut cur = x.clone();
            for _ in 0..steps {
                cur = phi_of_d(phi, &cur)?;
            }
            Ok(cur)
        }
    }
}

fn validate_instance(inst: &CriterionInstance) -> Result<()> {
    if inst.u.is_empty() {
        return Err(Error::InvalidParameter("instance needs at least one generator".into()));
    }
    let d = inst.u.len();
    if inst.a.is_empty() || inst.a.iter().any(|al| al.len() != d) || inst.beta.len() != d {
        return Err(Error::InvalidParameter("exponent arity must match the generator count".into()));
    }
    if !inst.a.contains(&inst.beta) {
        return Err(Error::InvalidParameter("β must belong to the exponent set".into()));
    }
    if !(inst.v_ball.radius > 0.0) || !(inst.w_radius > 0.0) {
        return Err(Error::InvalidParameter("ball radii must be positive".into()));
    }
    if inst.u.iter().any(|u| u.bilateral != inst.space.is_bilateral()) {
        return Err(Error::InvalidParameter("generator sidedness must match the space".into()));
    }
    Ok(())
}

/// Evaluate T^N(u^α) for every α ∈ A and record conservative memberships.
pub fn check_instance(inst: &CriterionInstance, seed: u64) -> Result<WitnessReport> {
    validate_instance(inst)?;
    let mut alpha_results = Vec::with_capacity(inst.a.len());
    for alpha in &inst.a {
        let ua = monomial_power(&inst.u, alpha, inst.product)?;
        let img = apply_operator_power(&inst.operator, &ua, inst.n_steps)?;
        let is_beta = alpha == &inst.beta;
        let (norm, inside) = if is_beta {
            ball_check(&inst.space, &img, &inst.v_ball)?
        } else {
            let n = inst.space.seminorm(&img, inst.w_q)?;
            (n, n + img.tail_bound < inst.w_radius)
        };
        alpha_results.push(AlphaResult {
            alpha: alpha.clone(),
            is_beta,
            exact_zero: img.is_zero() && img.tail_bound == 0.0,
            norm,
            tail_bound: img.tail_bound,
            inside,
        });
    }
    let passed = alpha_results.iter().all(|r| r.inside);
    let mut params = BTreeMap::new();
    params.insert("n_steps".into(), inst.n_steps.into());
    params.insert("v_radius".into(), inst.v_ball.radius.into());
    params.insert("v_q".into(), inst.v_ball.q.into());
    params.insert("w_radius".into(), inst.w_radius.into());
    params.insert("w_q".into(), inst.w_q.into());
    params.insert("alpha_count".into(), inst.a.len().into());
    Ok(WitnessReport {
        schema_version: SCHEMA_VERSION.to_string(),
        seed,
        instance: format!(
            "A={:?}, beta={:?}, N={}, operator={}, product={:?}",
            inst.a,
            inst.beta,
            inst.n_steps,
            inst.operator.tag(),
            inst.product
        ),
        alpha_results,
        orbit: None,
        params,
        passed,
    })
}

/// Scan the orbit of P(x): compute P(x) once, then advance by `stride`
/// applications of the operator, checking every target at each sampled step.
/// Densities over the window [0, horizon_n] are exact when stride = 1 and
/// bracketed otherwise.
pub fn orbit_hit_density(
    operator: &OperatorSpec,
    space: &SpaceSpec,
    x: &Seq,
    p_poly: &Poly,
    product: ProductKind,
    targets: &[Ball],
    horizon_n: i64,
    stride: i64,
) -> Result<OrbitScan> {
    if stride < 1 || horizon_n < 0 {
        return Err(Error::InvalidParameter("need stride ≥ 1 and a nonnegative window".into()));
    }
    if targets.is_empty() {
        return Err(Error::InvalidParameter("orbit scan needs at least one target".into()));
    }
    if targets.iter().any(|t| !(t.radius > 0.0)) {
        return Err(Error::InvalidParameter("ball radii must be positive".into()));
    }
    let y0 = eval_poly(p_poly, std::slice::from_ref(x), product)?;
    let width = targets
        .iter()
        .map(|t| t.center.support_max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    if matches!(operator, OperatorSpec::Shift(_, Direction::Backward)) && !y0.bilateral {
        if horizon_n + width > y0.horizon {
            return Err(Error::HorizonExhausted(format!(
                "window {horizon_n} plus target width {width} exceeds sequence horizon {}",
                y0.horizon
            )));
        }
    }
    let mut samples = Vec::new();
    let mut flags: Vec<Vec<bool>> = vec![Vec::new(); targets.len()];
    let mut current = y0;
    let mut p = 0i64;
    loop {
        samples.push(p);
        let step_hits: Vec<bool> = targets
            .par_iter()
            .map(|t| ball_check(space, &current, t).map(|(_, inside)| inside))
            .collect::<Result<_>>()?;
        for (tf, hit) in flags.iter_mut().zip(&step_hits) {
            tf.push(*hit);
        }
        if p + stride > horizon_n {
            break;
        }
        current = apply_operator_power(operator, &current, stride)?;
        p += stride;
    }
    let window = (horizon_n + 1) as f64;
    let sampled = samples.len() as f64;
    let targets_out = flags
        .into_iter()
        .map(|hit_flags| {
            let hit_count = hit_flags.iter().filter(|&&h| h).count() as u64;
            TargetDensity {
                hit_count,
                density_min: hit_count as f64 / window,
                density_max: (hit_count as f64 + (window - sampled)) / window,
                hit_flags,
            }
        })
        .collect();
    Ok(OrbitScan { horizon_n, stride, samples, targets: targets_out })
}

/// Write the report as sorted-key JSON, plus an optional CSV of
/// (p, hit per target) rows when an orbit scan is present.
pub fn emit_report(report: &WitnessReport, path: &Path, csv_path: Option<&Path>) -> Result<()> {
    let value = serde_json::to_value(report)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    if let Some(cp) = csv_path {
        let mut csv = String::from("p");
        if let Some(orbit) = &report.orbit {
            for i in 0..orbit.targets.len() {
                csv.push_str(&format!(",hit_{i}"));
            }
            csv.push('\n');
            for (k, p) in orbit.samples.iter().enumerate() {
                csv.push_str(&p.to_string());
                for t in &orbit.targets {
                    csv.push_str(if t.hit_flags[k] { ",1" } else { ",0" });
                }
                csv.push('\n');
            }
        } else {
            csv.push('\n');
        }
        std::fs::write(cp, csv)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaled::Wide;
    use crate::shifts::WeightKind;
    use crate::spaces::{seq_from_complex, SpaceSpec};
    use crate::witnesses::{
        build_cauchy_witness, build_coordwise_witness, build_ufhc_cauchy, build_ufhc_coordwise,
        find_jk_candidates, predicted_coordwise_orbit, prepare_cauchy_witness, select_kappa_beta,
        CoordWitnessSpec,
    };
    use num_complex::Complex64;

    fn rolewicz(h: i64) -> WeightSeq {
        WeightSeq::new(WeightKind::Rolewicz(2.0), h).unwrap()
    }

    fn identity_poly() -> Poly {
        Poly::new(1, vec![(vec![1], Complex64::new(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn single_exponent_reduces_to_plain_shift_membership() {
        let w = rolewicz(64);
        let space = SpaceSpec::l1();
        let mut u = Seq::zero(64, false);
        u.set(5, Wide::new(0.25, 0.0));
        let image = apply_shift(&w, &u, 5, Direction::Backward).unwrap();
        let mut inst = CriterionInstance {
            space,
            a: vec![vec![1]],
            beta: vec![1],
            u: vec![u],
            n_steps: 5,
            v_ball: Ball { center: image.clone(), radius: 1e-9, q: 1 },
            w_radius: 1e-6,
            w_q: 1,
            product: ProductKind::Cauchy,
            operator: OperatorSpec::Shift(w, Direction::Backward),
        };
        let report = check_instance(&inst, 7).unwrap();
        assert!(report.passed, "exact center must pass");
        assert_eq!(report.alpha_results.len(), 1);
        assert!(report.alpha_results[0].norm < 1e-15);

        let mut off = image.clone();
        off.set(0, off.get(0) + Wide::new(1.0, 0.0));
        inst.v_ball.center = off;
        let report = check_instance(&inst, 7).unwrap();
        assert!(!report.passed, "misplaced center must fail");
    }

    #[test]
    fn coordinatewise_family_end_to_end() {
        let w = rolewicz(128);
        let space = SpaceSpec::l1();
        let a = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let (kappa, beta) = select_kappa_beta(&a, crate::DEFAULT_SEED).unwrap();
        let y = seq_from_complex(&[Complex64::new(2.0, 0.0), Complex64::new(0.0, -1.0)], 128);
        let spec = CoordWitnessSpec {
            a: a.clone(),
            x: vec![Seq::zero(128, false), Seq::zero(128, false)],
            y: y.clone(),
            n_k: 100,
            kappa,
            beta: beta.clone(),
        };
        let u = build_coordwise_witness(&spec, &w, &space).unwrap();
        let inst = CriterionInstance {
            space: SpaceSpec::l1(),
            a: a.clone(),
            beta,
            u,
            n_steps: 100,
            v_ball: Ball { center: y, radius: 1e-9, q: 1 },
            w_radius: 1e-6,
            w_q: 1,
            product: ProductKind::Coordinatewise,
            operator: OperatorSpec::Shift(w.clone(), Direction::Backward),
        };
        let report = check_instance(&inst, 1).unwrap();
        assert!(report.passed, "{report:?}");
        // Independent closed form for each exponent's orbit.
        let space = SpaceSpec::l1();
        for res in &report.alpha_results {
            let predicted = predicted_coordwise_orbit(&spec, &w, &res.alpha);
            if res.is_beta {
                assert!(res.norm < 1e-12);
            } else {
                let pn = space.seminorm(&predicted, 1).unwrap();
                assert!((res.norm - pn).abs() <= 1e-12 * pn.max(1.0), "{} vs {pn}", res.norm);
            }
        }
    }

    #[test]
    fn cauchy_family_flags_exact_zeros() {
        let w = rolewicz(128);
        let space = SpaceSpec::l1();
        let a = vec![vec![1, 1], vec![1, 0], vec![0, 1]];
        let x = vec![Seq::zero(128, false), Seq::zero(128, false)];
        let y = seq_from_complex(&[Complex64::new(1.0, 0.5)], 128);
        let js = find_jk_candidates(&a, &x, &y, &w, &space, 1, 0.5, 1).unwrap();
        let spec = prepare_cauchy_witness(&a, &x, &y, &w, &space, 1, 0.5, js[0]).unwrap();
        let wit = build_cauchy_witness(&spec, &w, &space).unwrap();
        let inst = CriterionInstance {
            space,
            a,
            beta: spec.beta.clone(),
            u: wit.u,
            n_steps: wit.n,
            v_ball: Ball { center: y, radius: 0.5, q: 1 },
            w_radius: 1e-9,
            w_q: 1,
            product: ProductKind::Cauchy,
            operator: OperatorSpec::Shift(w, Direction::Backward),
        };
        let report = check_instance(&inst, 3).unwrap();
        assert!(report.passed, "{report:?}");
        for res in &report.alpha_results {
            if !res.is_beta {
                assert!(res.exact_zero, "α = {:?} must vanish identically", res.alpha);
                assert_eq!(res.norm, 0.0);
            }
        }
    }

    #[test]
    fn zero_vector_orbits_inside_every_zero_ball() {
        let w = rolewicz(64);
        let space = SpaceSpec::l1();
        let zero = Seq::zero(64, false);
        let target = Ball { center: Seq::zero(64, false), radius: 1e-3, q: 1 };
        let scan = orbit_hit_density(
            &OperatorSpec::Shift(w, Direction::Backward),
            &space,
            &zero,
            &identity_poly(),
            ProductKind::Cauchy,
            &[target],
            50,
            1,
        )
        .unwrap();
        assert_eq!(scan.samples.len(), 51);
        let t = &scan.targets[0];
        assert_eq!(t.hit_count, 51);
        assert_eq!(t.density_min, 1.0);
        assert_eq!(t.density_max, 1.0);
    }

    #[test]
    fn block_witness_orbit_hits_every_block_time() {
        let w = rolewicz(1200);
        let space = SpaceSpec::l1();
        let v = seq_from_complex(&[Complex64::new(1.0, 0.0)], 1200);
        let x = Seq::zero(1200, false);
        let wit = build_ufhc_coordwise(1, 3, &v, &x, &w, &space, 5, 2, 220).unwrap();
        let scan = orbit_hit_density(
            &OperatorSpec::Shift(w, Direction::Backward),
            &space,
            &wit.u,
            &identity_poly(),
            ProductKind::Coordinatewise,
            &[Ball { center: v, radius: 0.2, q: 1 }],
            1000,
            5,
        )
        .unwrap();
        let t = &scan.targets[0];
        // Samples are p = 5k; blocks start at k = 2 and fill the window.
        for (k, &p) in scan.samples.iter().enumerate() {
            let expected = k >= 2;
            assert_eq!(t.hit_flags[k], expected, "at p = {p}");
        }
        assert!(t.density_min >= 1.0 / (2.0 * 5.0), "density {}", t.density_min);
    }

    #[test]
    fn cauchy_power_orbit_hits_progression_and_ratio_converges() {
        let w = rolewicz(200);
        let space = SpaceSpec::l1();
        let y = seq_from_complex(&[Complex64::new(1.0, 0.0)], 200);
        let x = Seq::zero(200, false);
        let wit = build_ufhc_cauchy(2, &y, &x, &w, &space, 0.2, 0.55, 2, 40).unwrap();
        let horizon_n = *wit.e_sigma.last().unwrap();
        let square = Poly::new(1, vec![(vec![2], Complex64::new(1.0, 0.0))]).unwrap();
        let scan = orbit_hit_density(
            &OperatorSpec::Shift(w, Direction::Backward),
            &space,
            &wit.u,
            &square,
            ProductKind::Cauchy,
            // Lag echoes behind the target decay like 4^{-k}, summing to 1/3.
            &[Ball { center: y, radius: 0.45, q: 1 }],
            horizon_n,
            2,
        )
        .unwrap();
        let t = &scan.targets[0];
        for &s in &wit.e_sigma {
            let k = scan.samples.iter().position(|&p| p == s).expect("progression is sampled");
            assert!(t.hit_flags[k], "orbit must hit the target at p = {s}");
        }
        // At a long horizon the combinatorial hit ratio approaches its limit.
        let big = WeightSeq::new(WeightKind::Rolewicz(2.0), 42_000).unwrap();
        let yb = seq_from_complex(&[Complex64::new(1.0, 0.0)], 42_000);
        let xb = Seq::zero(42_000, false);
        let far = build_ufhc_cauchy(2, &yb, &xb, &big, &space, 0.2, 0.55, 2, 10_000).unwrap();
        assert!(
            (far.card_ratio - far.formula_ratio).abs() <= 0.10 * far.formula_ratio,
            "{} vs {}",
            far.card_ratio,
            far.formula_ratio
        );
    }

    #[test]
    fn density_brackets_and_radius_monotonicity() {
        let w = rolewicz(64);
        let space = SpaceSpec::l1();
        // Decay faster than the weight grows so orbit norms stay bounded.
        let mut x = Seq::zero(64, false);
        for i in 0..40 {
            x.set(i, Wide::new(0.4f64.powi(i as i32), 0.0));
        }
        let center = seq_from_complex(&[Complex64::new(0.5, 0.0)], 64);
        let mk = |r: f64| Ball { center: center.clone(), radius: r, q: 1 };
        let scan = orbit_hit_density(
            &OperatorSpec::Shift(w, Direction::Backward),
            &space,
            &x,
            &identity_poly(),
            ProductKind::Cauchy,
            &[mk(0.4), mk(4.0), mk(400.0)],
            30,
            3,
        )
        .unwrap();
        assert_eq!(scan.samples.len(), 11, "30/3 + 1 sampled steps");
        for pair in scan.targets.windows(2) {
            for (small, large) in pair[0].hit_flags.iter().zip(&pair[1].hit_flags) {
                assert!(*large || !*small, "larger ball must contain smaller-ball hits");
            }
            assert!(pair[0].density_min <= pair[1].density_min);
            assert!(pair[0].density_max <= pair[1].density_max);
        }
        let t = &scan.targets[2];
        assert_eq!(t.hit_count as usize, scan.samples.len(), "huge ball catches all samples");
        let window = 31.0;
        assert!((t.density_max - t.density_min - (window - 11.0) / window).abs() < 1e-15);
    }

    #[test]
    fn closed_form_power_matches_single_steps() {
        let w = rolewicz(128);
        let mut x = Seq::zero(128, false);
        for i in 0..30 {
            x.set(40 + i, Wide::new(0.3 * (i as f64 + 1.0), -0.1 * i as f64));
        }
        let op = OperatorSpec::Shift(w.clone(), Direction::Backward);
        let jumped = apply_operator_power(&op, &x, 17).unwrap();
        let mut stepped = x;
        for _ in 0..17 {
            stepped = apply_shift(&w, &stepped, 1, Direction::Backward).unwrap();
        }
        for n in 0..=128 {
            assert!(
                Wide::rel_diff(jumped.get(n), stepped.get(n)) < 1e-9,
                "coefficient {n} disagrees between jump and steps"
            );
        }
    }

    #[test]
    fn membership_is_conservative_in_the_tail() {
        let space = SpaceSpec::l1();
        let mut x = seq_from_complex(&[Complex64::new(0.5, 0.0)], 16);
        let ball = Ball { center: Seq::zero(16, false), radius: 1.0, q: 1 };
        let (_, hit_no_tail) = ball_check(&space, &x, &ball).unwrap();
        assert!(hit_no_tail);
        x.tail_bound = 0.7;
        let (_, hit_big_tail) = ball_check(&space, &x, &ball).unwrap();
        assert!(!hit_big_tail, "tail bound must count against the radius");
        x.tail_bound = 0.3;
        let (_, hit_small_tail) = ball_check(&space, &x, &ball).unwrap();
        assert!(hit_small_tail, "pass persists under any smaller tail bound");
    }

    #[test]
    fn reports_serialize_deterministically() {
        let dir = std::env::temp_dir();
        let p1 = dir.join("verify_report_a.json");
        let p2 = dir.join("verify_report_b.json");
        let skeleton = WitnessReport::skeleton(42);
        emit_report(&skeleton, &p1, None).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&p1).unwrap()).unwrap();
        assert_eq!(parsed["schema_version"], crate::SCHEMA_VERSION);
        assert_eq!(parsed["seed"], 42);

        let w = rolewicz(32);
        let space = SpaceSpec::l1();
        let zero = Seq::zero(32, false);
        let scan = orbit_hit_density(
            &OperatorSpec::Shift(w, Direction::Backward),
            &space,
            &zero,
            &identity_poly(),
            ProductKind::Cauchy,
            &[Ball { center: Seq::zero(32, false), radius: 1.0, q: 1 }],
            10,
            3,
        )
        .unwrap();
        let mut report = WitnessReport::skeleton(42);
        report.orbit = Some(scan);
        let c1 = dir.join("verify_orbit_a.csv");
        let c2 = dir.join("verify_orbit_b.csv");
        emit_report(&report, &p1, Some(&c1)).unwrap();
        emit_report(&report, &p2, Some(&c2)).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
        let csv = std::fs::read_to_string(&c1).unwrap();
        let data_rows = csv.lines().count() - 1;
        assert_eq!(data_rows as i64, 10 / 3 + 1);
        for f in [&p1, &p2, &c1, &c2] {
            let _ = std::fs::remove_file(f);
        }
    }
}
