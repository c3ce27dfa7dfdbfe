//! The two sequence-algebra products (coordinatewise, Cauchy), powers,
//! polynomial evaluation over multi-indices, and the free dense-subalgebra
//! generator construction.

use crate::scaled::Wide;
use crate::spaces::{Seq, SpaceSpec};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Coordinatewise,
    Cauchy,
}

/// Polynomial without constant term, in d variables: Σ_α c_α z^α with
/// multi-indices α ∈ ℕ0^d \ {0}. Terms are kept sorted for deterministic
/// evaluation order.
#[derive(Clone, Debug)]
pub struct Poly {
    pub d: usize,
    pub terms: BTreeMap<Vec<u32>, Complex64>,
}

impl Poly {
    pub fn new(d: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Result<Poly> {
        let mut map = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.len() != d {
                return Err(Error::InvalidParameter(format!(
                    "multi-index arity {} does not match d={}",
                    alpha.len(),
                    d
                )));
            }
            if alpha.iter().all(|&a| a == 0) {
                return Err(Error::InvalidParameter("polynomial must have no constant term".into()));
            }
            map.insert(alpha, c);
        }
        if map.is_empty() {
            return Err(Error::InvalidParameter("polynomial needs at least one term".into()));
        }
        Ok(Poly { d, terms: map })
    }

    /// Single-variable monomial z^m.
    pub fn monomial(m: u32) -> Poly {
        Poly::new(1, vec![(vec![m], Complex64::new(1.0, 0.0))]).expect("m ≥ 1")
    }

    /// The exponent set A = {α : ĉ(α) ≠ 0}.
    pub fn exponents(&self) -> Vec<Vec<u32>> {
        self.terms.keys().cloned().collect()
    }
}

/// Product of two truncated sequences under the chosen algebra product.
///
/// Cauchy output keeps every index up to the shared horizon; coefficients
/// that would land beyond it are dropped with their ℓ1 mass added to the
/// result's tail bound (conservative, since all supported norms are ≤ ℓ1
/// on the dropped block for the spaces in play).
pub fn product(x: &Seq, y: &Seq, kind: ProductKind) -> Result<Seq> {
    if x.bilateral != y.bilateral {
        return Err(Error::InvalidParameter("mixed laterality in product".into()));
    }
    match kind {
        ProductKind::Coordinatewise => {
            let horizon = x.horizon.max(y.horizon);
            let mut out = Seq::zero(horizon, x.bilateral);
            for (i, c) in x.support() {
                let d = y.get(i);
                if !d.is_zero() {
                    out.set(i, c * d);
                }
            }
            // Unknown-tail cross terms: |x_i y_i| ≤ tail_x·(sup|y|+tail_y) + tail_y·sup|x|.
            let sx = x.log2_sup().exp2();
            let sy = y.log2_sup().exp2();
            out.tail_bound = x.tail_bound * (sy + y.tail_bound) + y.tail_bound * sx;
            Ok(out)
        }
        ProductKind::Cauchy => {
            if x.bilateral {
                return Err(Error::InvalidParameter("Cauchy product requires unilateral sequences".into()));
            }
            let horizon = x.horizon.max(y.horizon);
            let xs: Vec<(i64, Wide)> = x.support().collect();
            let ys: Vec<(i64, Wide)> = y.support().collect();
            // Accumulate per output index, then sum each bucket ascending.
            let mut buckets: BTreeMap<i64, Vec<Wide>> = BTreeMap::new();
            for &(i, a) in &xs {
                for &(j, b) in &ys {
                    buckets.entry(i + j).or_default().push(a * b);
                }
            }
            let mut out = Seq::zero(horizon, false);
            let mut dropped = Wide::ZERO;
            for (n, mut terms) in buckets {
                terms.sort_by(|a, b| a.log2_abs().total_cmp(&b.log2_abs()));
                let sum = terms.into_iter().fold(Wide::ZERO, |acc, t| acc + t);
                if sum.is_zero() {
                    continue;
                }
                if n <= horizon {
                    out.set(n, sum);
                } else {
                    dropped = dropped + sum.abs();
                }
            }
            let l1x = x.l1_mass().to_f64();
            let l1y = y.l1_mass().to_f64();
            out.tail_bound = dropped.to_f64()
                + x.tail_bound * (l1y + y.tail_bound)
                + y.tail_bound * l1x;
            Ok(out)
        }
    }
}

/// x^m under the chosen product (m ≥ 1); m = 1 returns a copy.
pub fn power(x: &Seq, m: u32, kind: ProductKind) -> Result<Seq> {
    if m < 1 {
        return Err(Error::InvalidParameter("power exponent must be ≥ 1".into()));
    }
    let mut acc = x.clone();
    for _ in 1..m {
        acc = product(&acc, x, kind)?;
    }
    Ok(acc)
}

/// u^α = u_1^{α_1}···u_d^{α_d}; α = 0 entries skip their factor.
/// An all-zero α yields the product unit, which only exists for Cauchy (e_0);
/// callers never request it because Poly excludes constant terms.
pub fn monomial_power(us: &[Seq], alpha: &[u32], kind: ProductKind) -> Result<Seq> {
    assert_eq!(us.len(), alpha.len());
    let mut acc: Option<Seq> = None;
    for (u, &a) in us.iter().zip(alpha) {
        if a == 0 {
            continue;
        }
        let p = power(u, a, kind)?;
        acc = Some(match acc {
            None => p,
            Some(prev) => product(&prev, &p, kind)?,
        });
    }
    acc.ok_or_else(|| Error::InvalidParameter("zero multi-index has no product value".into()))
}

/// P(u) = Σ_α ĉ(α) u^α, evaluated in sorted multi-index order.
pub fn eval_poly(p: &Poly, us: &[Seq], kind: ProductKind) -> Result<Seq> {
    if us.len() != p.d {
        return Err(Error::InvalidParameter(format!(
            "poly arity {} but {} arguments",
            p.d,
            us.len()
        )));
    }
    let horizon = us.iter().map(|u| u.horizon).max().unwrap_or(0);
    let bilateral = us.first().map(|u| u.bilateral).unwrap_or(false);
    let mut acc = Seq::zero(horizon, bilateral);
    for (alpha, &c) in &p.terms {
        let term = monomial_power(us, alpha, kind)?;
        acc = acc.add(&term.scale(Wide::from_complex(c)));
    }
    Ok(acc)
}

/// Choice of the summable coefficient sequence b for the free-generator
/// construction. The default is flagged in reports: the construction only
/// pins b by the convergence of Σ b_n‖e_n‖_n.
#[derive(Clone, Debug)]
pub enum BSeq {
    /// b_n = 2^{-n} (1 + ‖e_n‖_n)^{-1} — artifact default.
    DefaultHalving,
    /// b_n = 2^{-n}.
    PowHalf,
    Explicit(Vec<f64>),
}

impl BSeq {
    fn ln_at(&self, n: i64, spec: &SpaceSpec) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        match self {
            BSeq::PowHalf => -(n as f64) * ln2,
            BSeq::DefaultHalving => {
                let ln_norm = spec.ln_norm_e(n, effective_q(spec, n));
                -(n as f64) * ln2 - (1.0 + ln_norm.exp()).ln()
            }
            BSeq::Explicit(v) => {
                assert!((n as usize) < v.len(), "b sequence too short");
                v[n as usize].ln()
            }
        }
    }
}

/// Seminorm index used for ‖e_n‖_n: n clamped into [1, Q].
fn effective_q(spec: &SpaceSpec, n: i64) -> u32 {
    (n.max(1) as u32).min(spec.q_count.max(1))
}

/// Outcome of the free-generator construction.
#[derive(Clone, Debug)]
pub struct FreeGenerators {
    pub generators: Vec<Seq>,
    pub lambdas: Vec<f64>,
    /// Block-minimum damping values c_n for n = 0..=horizon.
    pub c: Vec<f64>,
    /// Which b was used (the default is a free choice, so reports carry it).
    pub b_description: String,
}

/// Free generators g_n = e_n + Σ_{k≥1} λ_n^{n+k} c_{n+k} e_{n+k}, where c is
/// the blockwise minimum of b over [a_{m−1}, a_m) with a_m = a_{m−1} + m.
///
/// Requires Σ b_n‖e_n‖_n to look convergent at the horizon: the last third of
/// partial-sum increments must decay geometrically (or the final increment be
/// negligible). A divergent b (e.g. b ≡ 1 on Entire) is rejected.
pub fn free_generators(
    count: usize,
    spec: &SpaceSpec,
    b: &BSeq,
    lambdas: &[f64],
    horizon: i64,
) -> Result<FreeGenerators> {
    if lambdas.len() < count {
        return Err(Error::InvalidParameter("need one λ per generator".into()));
    }
    if lambdas.iter().any(|l| !(0.0 < *l && *l < 1.0)) {
        return Err(Error::InvalidParameter("λ_n must lie in (0,1)".into()));
    }
    if spec.is_bilateral() {
        return Err(Error::InvalidParameter("free generators need a unilateral coordinatewise space".into()));
    }
    if let BSeq::Explicit(v) = b {
        if (v.len() as i64) < horizon + 1 {
            return Err(Error::InvalidParameter("explicit b shorter than horizon".into()));
        }
    }

    // Convergence heuristic for Σ b_n ‖e_n‖_n at the horizon: the last third
    // of the increments must decay at a uniform geometric rate (or already be
    // negligible against the partial sum).
    let increments: Vec<f64> = (0..=horizon)
        .map(|n| (b.ln_at(n, spec) + spec.ln_norm_e(n, effective_q(spec, n))).exp())
        .collect();
    let total: f64 = increments.iter().sum();
    let tail_start = (increments.len() * 2) / 3;
    let tail = &increments[tail_start..];
    let worst_ratio = tail
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::INFINITY })
        .fold(0.0f64, f64::max);
    let last = *increments.last().unwrap_or(&0.0);
    let converges = total.is_finite() && (worst_ratio <= 0.95 || last <= total * 1e-3);
    if !converges {
        return Err(Error::InvalidParameter(
            "Σ b_n‖e_n‖_n does not look convergent at the horizon".into(),
        ));
    }

    // Blocks [a_{m-1}, a_m) with a_m = a_{m-1} + m; c_n = min b over n's FULL
    // block (blocks extend past the horizon; closed-form b evaluates there,
    // explicit b is capped at its own length).
    let explicit_len = match b {
        BSeq::Explicit(v) => Some(v.len() as i64),
        _ => None,
    };
    let mut c = vec![0.0f64; (horizon + 1) as usize];
    let (mut lo, mut m) = (0i64, 1i64);
    while lo <= horizon {
        let hi_analytic = lo + m;
        let hi_eval = explicit_len.map_or(hi_analytic, |len| hi_analytic.min(len));
        let block_min = (lo..hi_eval.max(lo + 1))
            .map(|n| b.ln_at(n, spec).exp())
            .fold(f64::INFINITY, f64::min);
        for n in lo..hi_analytic.min(horizon + 1) {
            c[n as usize] = block_min;
        }
        lo += m;
        m += 1;
    }

    let mut generators = Vec::with_capacity(count);
    for (n, &lambda) in lambdas.iter().enumerate().take(count) {
        let n = n as i64;
        let mut g = Seq::basis(n, horizon, false);
        let ln_lambda = lambda.ln();
        for k in 1..=(horizon - n) {
            let idx = n + k;
            let coeff = Wide::from_ln_polar(
                (n + k) as f64 * ln_lambda + c[idx as usize].ln(),
                0.0,
            );
            g.set(idx, coeff);
        }
        generators.push(g);
    }

    Ok(FreeGenerators {
        generators,
        lambdas: lambdas[..count].to_vec(),
        c,
        b_description: match b {
            BSeq::DefaultHalving => "b_n = 2^-n (1+||e_n||_n)^-1 (artifact default)".into(),
            BSeq::PowHalf => "b_n = 2^-n".into(),
            BSeq::Explicit(_) => "explicit b".into(),
        },
    })
}

/// Seeded λ sampler: uniform in (0,1). Rational multiplicative dependence has
/// probability zero; the numeric certificate below backstops the claim.
pub fn gen_lambdas(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let x: f64 = rng.gen();
            if x > 0.0 && x < 1.0 {
                break x;
            }
        })
        .collect()
}

/// Numeric multiplicative-independence certificate.
///
/// The Vandermonde determinant over the monomial values m_α = Π λ_j^{α_j}
/// (all multi-indices α with entries ≤ max_exp) factors into Π (m_α − m_{α′}),
/// so it is nonzero exactly when all those values are pairwise distinct. The
/// certificate is the smallest relative gap min |m_α − m_{α′}|/max(1,|m_α|);
/// it passes when that gap exceeds 1e−12.
pub fn vandermonde_certificate(lambdas: &[f64], max_exp: u32) -> (f64, bool) {
    let mut alphas: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..lambdas.len() {
        let mut next = Vec::new();
        for a in &alphas {
            for e in 0..=max_exp {
                let mut b = a.clone();
                b.push(e);
                next.push(b);
            }
        }
        alphas = next;
    }
    let values: Vec<f64> = alphas
        .iter()
        .map(|a| {
            a.iter()
                .zip(lambdas)
                .map(|(&e, &l)| l.powi(e as i32))
                .product()
        })
        .collect();
    let mut min_gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let scale = values[i].abs().max(values[j].abs()).max(1.0);
            min_gap = min_gap.min((values[i] - values[j]).abs() / scale);
        }
    }
    (min_gap, min_gap > 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Seq;

    fn seq(vals: &[f64]) -> Seq {
        Seq::from_f64s(0, vals, 16, false)
    }

    #[test]
    fn coordinatewise_product_example() {
        let p = product(&seq(&[1.0, 2.0]), &seq(&[3.0, 4.0]), ProductKind::Coordinatewise).unwrap();
        assert!((p.get(0).to_f64() - 3.0).abs() < 1e-15);
        assert!((p.get(1).to_f64() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn cauchy_basis_shifts() {
        let e1 = Seq::basis(1, 16, false);
        let p = product(&e1, &e1, ProductKind::Cauchy).unwrap();
        assert!(p.support().map(|(i, _)| i).eq(std::iter::once(2)));
        let e3 = power(&e1, 3, ProductKind::Cauchy).unwrap();
        assert!(e3.support().map(|(i, _)| i).eq(std::iter::once(3)));
    }

    #[test]
    fn idempotent_basis_coordinatewise() {
        let e4 = Seq::basis(4, 8, false);
        let p = product(&e4, &e4, ProductKind::Coordinatewise).unwrap();
        assert_eq!(p.get(4).to_f64(), 1.0);
        assert_eq!(p.num_nonzero(), 1);
    }

    #[test]
    fn cauchy_truncation_tracks_dropped_mass() {
        // (e_3)^2 at horizon 4 drops the coefficient at 6 with mass 1.
        let e3 = Seq::basis(3, 4, false);
        let p = product(&e3, &e3, ProductKind::Cauchy).unwrap();
        assert!(p.is_zero());
        assert!((p.tail_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cauchy_rejects_bilateral() {
        let x = Seq::basis(-1, 4, true);
        assert!(product(&x, &x, ProductKind::Cauchy).is_err());
    }

    #[test]
    fn eval_poly_examples() {
        let x = seq(&[0.0, 1.0]);
        let p = Poly::monomial(2);
        let r = eval_poly(&p, &[x], ProductKind::Cauchy).unwrap();
        assert_eq!(r.support_min(), Some(2));

        let two_var = Poly::new(
            2,
            vec![(vec![1, 1], Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let r2 = eval_poly(
            &two_var,
            &[seq(&[1.0, 2.0]), seq(&[3.0, 4.0])],
            ProductKind::Coordinatewise,
        )
        .unwrap();
        assert!((r2.get(0).to_f64() - 3.0).abs() < 1e-15);
        assert!((r2.get(1).to_f64() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn poly_rejects_constant_term() {
        assert!(Poly::new(1, vec![(vec![0], Complex64::new(1.0, 0.0))]).is_err());
    }

    #[test]
    fn free_generator_matches_direct_formula() {
        // b_n = 2^{-n}, λ_0 = 0.5, horizon 6: (g_0)_k = 0.5^k · c_k.
        let fg = free_generators(1, &SpaceSpec::l1(), &BSeq::PowHalf, &[0.5], 6).unwrap();
        let g0 = &fg.generators[0];
        assert!((g0.get(0).to_f64() - 1.0).abs() < 1e-15);
        // Blocks: a = 0,1,3,6,10 → c_0 = 1 (block {0}), c_1 = c_2 = min(2^-1,2^-2),
        // c_3..c_5 = 2^-5, c_6 = 2^-9 (block {6..9} truncated at horizon).
        let expect_c = [1.0, 0.25, 0.25, 0.03125, 0.03125, 0.03125, 2f64.powi(-9)];
        for (k, &c) in expect_c.iter().enumerate() {
            assert!((fg.c[k] - c).abs() < 1e-15, "c_{k}");
            if k >= 1 {
                let want = 0.5f64.powi(k as i32) * c;
                assert!((g0.get(k as i64).to_f64() - want).abs() < 1e-15, "g_0[{k}]");
            }
        }
    }

    #[test]
    fn free_generator_powers_approach_basis() {
        let lambdas = gen_lambdas(1, crate::DEFAULT_SEED);
        let fg = free_generators(1, &SpaceSpec::l1(), &BSeq::DefaultHalving, &lambdas, 40).unwrap();
        let sp = SpaceSpec::l1();
        let e0 = Seq::basis(0, 40, false);
        let mut dist_prev = f64::INFINITY;
        let mut ok = false;
        for p in 1..=200 {
            let gp = power(&fg.generators[0], p, ProductKind::Coordinatewise).unwrap();
            let d = sp.seminorm(&gp.sub(&e0), 1).unwrap();
            assert!(d <= dist_prev * (1.0 + 1e-12), "monotone decrease");
            dist_prev = d;
            if d < 1e-6 {
                ok = true;
                break;
            }
        }
        assert!(ok, "powers should reach the basis vector within budget");
    }

    #[test]
    fn divergent_b_rejected() {
        // b ≡ 1 on Entire with Q=2: increments ‖e_n‖_n = n-th seminorm grows.
        let b = BSeq::Explicit(vec![1.0; 21]);
        assert!(free_generators(1, &SpaceSpec::entire(3), &b, &[0.5], 20).is_err());
    }

    #[test]
    fn vandermonde_certificate_on_seeded_lambdas() {
        let l = gen_lambdas(3, crate::DEFAULT_SEED);
        let (gap, ok) = vandermonde_certificate(&l, 2);
        assert!(ok, "min monomial gap {gap} too small");
        // Degenerate λ pair must fail.
        let (_d, bad) = vandermonde_certificate(&[0.5, 0.5], 1);
        assert!(!bad);
    }
}
