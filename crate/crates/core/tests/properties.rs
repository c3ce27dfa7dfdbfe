//! Randomized structural laws: metric and norm inequalities, product
//! algebra laws, shift linearity, weight log-sum consistency, selection
//! stability under rescaling, and hit-density monotonicity.

use proptest::prelude::*;

use shiftlab::algebra::{product, Poly, ProductKind};
use shiftlab::densitysets::{build_family_far, enforce_pairwise_gap, verify_family};
use shiftlab::scaled::Wide;
use shiftlab::shifts::{apply_shift, Direction, WeightKind, WeightSeq};
use shiftlab::spaces::{Gamma, Seq, SpaceSpec};
use shiftlab::verify::{orbit_hit_density, Ball, OperatorSpec};
use shiftlab::witnesses::select_kappa_beta_from;

const H: i64 = 64;
const REL: f64 = 1e-12;

type Entries = Vec<(i64, f64, f64)>;

fn entries(max_idx: i64) -> impl Strategy<Value = Entries> {
    proptest::collection::vec((0..=max_idx, -1.0..1.0f64, -1.0..1.0f64), 1..8)
}

fn seq_of(entries: &Entries) -> Seq {
    let mut s = Seq::zero(H, false);
    for &(i, re, im) in entries {
        s.add_assign_at(i, Wide::new(re, im));
    }
    s
}

/// Each space paired with the largest seminorm index it exposes.
fn spaces_with_q() -> Vec<(SpaceSpec, u32)> {
    vec![
        (SpaceSpec::l1(), 1),
        (SpaceSpec::lp(2.0), 1),
        (SpaceSpec::c0(), 1),
        (SpaceSpec::weighted_c0(Gamma::OddDoubling), 1),
        (SpaceSpec::omega(3), 3),
        (SpaceSpec::entire(3), 3),
    ]
}

fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    /// ‖x + y‖_q ≤ ‖x‖_q + ‖y‖_q and likewise for the metric norm.
    #[test]
    fn seminorms_and_metric_norm_satisfy_triangle_inequality(
        ex in entries(24),
        ey in entries(24),
    ) {
        let (x, y) = (seq_of(&ex), seq_of(&ey));
        let sum = x.add(&y);
        for (space, q_max) in spaces_with_q() {
            for q in 1..=q_max {
                let lhs = space.seminorm(&sum, q).unwrap();
                let rhs = space.seminorm(&x, q).unwrap() + space.seminorm(&y, q).unwrap();
                prop_assert!(
                    lhs <= rhs * (1.0 + REL) + 1e-300,
                    "seminorm triangle failed: {lhs} > {rhs} (q={q}, {space:?})"
                );
            }
            let lhs = space.f_norm(&sum).unwrap();
            let rhs = space.f_norm(&x).unwrap() + space.f_norm(&y).unwrap();
            prop_assert!(
                lhs <= rhs * (1.0 + REL) + 1e-300,
                "metric-norm triangle failed: {lhs} > {rhs} ({space:?})"
            );
        }
    }

    /// ‖λx‖ ≤ (|λ| + 1)‖x‖ for the metric norm.
    #[test]
    fn metric_norm_scaling_is_bounded_by_modulus_plus_one(
        ex in entries(24),
        re in -10.0..10.0f64,
        im in -10.0..10.0f64,
    ) {
        let x = seq_of(&ex);
        let lam = Wide::new(re, im);
        let modulus = (re * re + im * im).sqrt();
        let scaled = x.scale(lam);
        for (space, _) in spaces_with_q() {
            let lhs = space.f_norm(&scaled).unwrap();
            let rhs = (modulus + 1.0) * space.f_norm(&x).unwrap();
            prop_assert!(
                lhs <= rhs * (1.0 + REL) + 1e-300,
                "scaling bound failed: {lhs} > {rhs} ({space:?})"
            );
        }
    }

    /// Grading: ‖x‖_q ≤ ‖x‖_{q+1} on the multi-seminorm spaces.
    #[test]
    fn seminorms_grow_with_their_index(ex in entries(24)) {
        let x = seq_of(&ex);
        for space in [SpaceSpec::omega(4), SpaceSpec::entire(4)] {
            for q in 1..4u32 {
                let lo = space.seminorm(&x, q).unwrap();
                let hi = space.seminorm(&x, q + 1).unwrap();
                prop_assert!(
                    lo <= hi * (1.0 + REL) + 1e-300,
                    "grading failed: ‖x‖_{q} = {lo} > ‖x‖_{} = {hi} ({space:?})", q + 1
                );
            }
        }
    }

    /// ‖x·y‖_q ≤ ‖x‖_q‖y‖_q on each space under its own product.
    #[test]
    fn products_are_submultiplicative(ex in entries(24), ey in entries(24)) {
        let (x, y) = (seq_of(&ex), seq_of(&ey));
        let coord: Vec<(SpaceSpec, u32)> = vec![
            (SpaceSpec::l1(), 1),
            (SpaceSpec::lp(2.0), 1),
            (SpaceSpec::c0(), 1),
            (SpaceSpec::weighted_c0(Gamma::OddDoubling), 1),
            (SpaceSpec::weighted_c0(Gamma::AbsPlusOne), 1),
        ];
        let cauchy: Vec<(SpaceSpec, u32)> =
            vec![(SpaceSpec::l1(), 1), (SpaceSpec::entire(3), 3), (SpaceSpec::omega(3), 3)];
        for (kind, table) in
            [(ProductKind::Coordinatewise, coord), (ProductKind::Cauchy, cauchy)]
        {
            let xy = product(&x, &y, kind).unwrap();
            for (space, q_max) in table {
                for q in 1..=q_max {
                    let lhs = space.seminorm(&xy, q).unwrap();
                    let rhs =
                        space.seminorm(&x, q).unwrap() * space.seminorm(&y, q).unwrap();
                    prop_assert!(
                        lhs <= rhs * (1.0 + REL) + 1e-300,
                        "submultiplicativity failed: {lhs} > {rhs} ({kind:?}, q={q}, {space:?})"
                    );
                }
            }
        }
    }

    /// x*y = y*x, coefficient by coefficient, when nothing truncates.
    #[test]
    fn convolution_commutes(ex in entries(24), ey in entries(24)) {
        let (x, y) = (seq_of(&ex), seq_of(&ey));
        let a = product(&x, &y, ProductKind::Cauchy).unwrap();
        let b = product(&y, &x, ProductKind::Cauchy).unwrap();
        for i in 0..=H {
            prop_assert!(
                Wide::rel_diff(a.get(i), b.get(i)) <= REL,
                "commutativity failed at index {i}"
            );
        }
    }

    /// (x*y)*z = x*(y*z) on every index the truncation leaves untouched
    /// (supports are kept small enough that that is all of them).
    #[test]
    fn convolution_associates(
        ex in entries(20),
        ey in entries(20),
        ez in entries(20),
    ) {
        let (x, y, z) = (seq_of(&ex), seq_of(&ey), seq_of(&ez));
        let left =
            product(&product(&x, &y, ProductKind::Cauchy).unwrap(), &z, ProductKind::Cauchy)
                .unwrap();
        let right =
            product(&x, &product(&y, &z, ProductKind::Cauchy).unwrap(), ProductKind::Cauchy)
                .unwrap();
        for i in 0..=H {
            prop_assert!(
                Wide::rel_diff(left.get(i), right.get(i)) <= REL,
                "associativity failed at index {i}"
            );
        }
    }

    /// The cached log-sums reproduce each catalog weight's defining value:
    /// exp(Λ(n+1) − Λ(n)) = w_{n+1}, recomputed from the closed form.
    #[test]
    fn weight_log_sums_match_closed_forms(
        lam in 1.1..3.0f64,
        mu in 0.1..5.0f64,
        alpha in 0.1..0.9f64,
        explicit in proptest::collection::vec(0.2..5.0f64, H as usize),
    ) {
        let catalog: Vec<(WeightKind, Box<dyn Fn(i64) -> f64>)> = vec![
            (WeightKind::Rolewicz(lam), Box::new(move |_| lam)),
            (
                WeightKind::OnePlusLambdaOverN(mu),
                Box::new(move |n| 1.0 + mu / n as f64),
            ),
            (
                WeightKind::ExpNAlpha(alpha),
                Box::new(move |n| ((n as f64).powf(alpha) - ((n - 1) as f64).powf(alpha)).exp()),
            ),
            {
                let vals = explicit.clone();
                (
                    WeightKind::Explicit(explicit),
                    Box::new(move |n| vals[(n - 1) as usize]),
                )
            },
        ];
        for (kind, expected) in catalog {
            let w = WeightSeq::new(kind, H).unwrap();
            for n in 1..=H {
                let got = (w.lam(n) - w.lam(n - 1)).exp();
                let want = expected(n);
                prop_assert!(
                    close_rel(got, want, REL),
                    "weight mismatch at n={n}: cached {got}, closed form {want} ({:?})", w.kind
                );
            }
        }
    }

    /// Shifting is additive, bitwise, on disjointly supported inputs.
    #[test]
    fn shift_is_linear_on_disjoint_supports(
        ex in entries(12),
        ey in entries(12),
        steps in 1..8i64,
    ) {
        // Force disjointness: x lives on even indices, y on odd.
        let mut x = Seq::zero(H, false);
        for &(i, re, im) in &ex {
            x.add_assign_at(2 * i, Wide::new(re, im));
        }
        let mut y = Seq::zero(H, false);
        for &(i, re, im) in &ey {
            y.add_assign_at(2 * i + 1, Wide::new(re, im));
        }
        for kind in [WeightKind::Rolewicz(2.0), WeightKind::ExpNAlpha(0.5)] {
            let w = WeightSeq::new(kind, H).unwrap();
            let joint = apply_shift(&w, &x.add(&y), steps, Direction::Backward).unwrap();
            let split = apply_shift(&w, &x, steps, Direction::Backward)
                .unwrap()
                .add(&apply_shift(&w, &y, steps, Direction::Backward).unwrap());
            for i in 0..=H {
                prop_assert!(
                    Wide::rel_diff(joint.get(i), split.get(i)) == 0.0,
                    "linearity failed at index {i} ({:?})", w.kind
                );
            }
        }
    }

    /// The distinguished exponent is stable under positive rescaling of the
    /// seed functional.
    #[test]
    fn exponent_selection_ignores_positive_rescaling(
        raw in proptest::collection::vec(
            proptest::collection::vec(0..4u32, 2),
            2..5,
        ),
        kappa0 in proptest::collection::vec(0.05..5.0f64, 2),
        t in 0.25..4.0f64,
    ) {
        let mut a: Vec<Vec<u32>> = raw
            .into_iter()
            .filter(|v| v.iter().any(|&e| e > 0))
            .collect();
        a.sort();
        a.dedup();
        prop_assume!(a.len() >= 2);
        let scaled: Vec<f64> = kappa0.iter().map(|k| k * t).collect();
        let beta0 = select_kappa_beta_from(&a, &kappa0).map(|(_, b)| b);
        let beta1 = select_kappa_beta_from(&a, &scaled).map(|(_, b)| b);
        prop_assert_eq!(beta0, beta1, "rescaling by {} changed the selection", t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Enlarging a target ball never loses a hit.
    #[test]
    fn hit_density_is_monotone_in_radius(
        ex in entries(24),
        ec in entries(8),
        r in 0.01..2.0f64,
        extra in 0.0..2.0f64,
    ) {
        let x = seq_of(&ex);
        let center = seq_of(&ec);
        let w = WeightSeq::new(WeightKind::Rolewicz(2.0), H).unwrap();
        let op = OperatorSpec::Shift(w, Direction::Backward);
        let space = SpaceSpec::l1();
        let targets = vec![
            Ball { center: center.clone(), radius: r, q: 1 },
            Ball { center, radius: r + extra, q: 1 },
        ];
        let scan = orbit_hit_density(
            &op,
            &space,
            &x,
            &Poly::monomial(1),
            ProductKind::Coordinatewise,
            &targets,
            40,
            1,
        )
        .unwrap();
        let (small, big) = (&scan.targets[0], &scan.targets[1]);
        prop_assert!(small.hit_count <= big.hit_count);
        prop_assert!(small.density_min <= big.density_min + REL);
        for (a, b) in small.hit_flags.iter().zip(&big.hit_flags) {
            prop_assert!(!a || *b, "a hit vanished when the ball grew");
        }
    }

    /// Same parameters ⇒ identical family; every recorded certificate
    /// re-verifies.
    #[test]
    fn set_families_rebuild_identically_and_reverify(
        count in 1..4usize,
        horizon in 500..2500i64,
    ) {
        let first = build_family_far(count, horizon).unwrap();
        let second = build_family_far(count, horizon).unwrap();
        prop_assert_eq!(&first.sets, &second.sets);
        let gaps: Vec<f64> = (1..=count).map(|k| k as f64).collect();
        let fam = enforce_pairwise_gap(&first, &gaps).unwrap();
        let report = verify_family(&fam);
        prop_assert!(report.pass, "family failed re-verification: {report:?}");
    }
}
