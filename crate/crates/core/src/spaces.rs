//! Sequence spaces, their seminorm families, F-norms, and ball membership.
//!
//! A `Seq` is a finitely supported complex sequence on [0,L] (unilateral) or
//! [−L,L] (bilateral) with a conservative `tail_bound` for anything an
//! operation had to discard. A `SpaceSpec` says which seminorm family to use:
//!
//! - `Lp(p)`:        ‖x‖ = (Σ|x_n|^p)^(1/p), single norm
//! - `C0`:           ‖x‖ = sup|x_n|, single norm
//! - `Omega`:        ‖x‖_q = Σ_{n=0}^{q} |x_n|, q = 1..Q
//! - `Entire`:       ‖x‖_q = Σ |x_n| q^n, q = 1..Q
//! - `WeightedC0(γ)`: ‖x‖ = sup γ_n|x_n| with γ_n ≥ 1
//!
//! plus bilateral variants of the single-norm kinds. Seminorm accumulation
//! sorts magnitudes ascending before summing: witness vectors mix coefficient
//! scales spanning hundreds of orders and naive summation loses the small end.

use crate::scaled::Wide;
use crate::{Error, Result};
use num_complex::Complex64;

/// Finitely supported complex sequence with tracked support and tail bound.
#[derive(Clone, Debug)]
pub struct Seq {
    /// Index of `coeffs[0]`.
    lo: i64,
    coeffs: Vec<Wide>,
    pub bilateral: bool,
    /// Storage horizon L: indices lie in [0,L] or [−L,L].
    pub horizon: i64,
    /// Conservative norm bound on coefficients discarded beyond the horizon;
    /// 0 for exactly representable vectors.
    pub tail_bound: f64,
}

impl Seq {
    pub fn zero(horizon: i64, bilateral: bool) -> Seq {
        assert!(horizon >= 0);
        Seq { lo: 0, coeffs: Vec::new(), bilateral, horizon, tail_bound: 0.0 }
    }

    pub fn basis(n: i64, horizon: i64, bilateral: bool) -> Seq {
        let mut s = Seq::zero(horizon, bilateral);
        s.set(n, Wide::ONE);
        s
    }

    /// Unilateral vector from f64 coefficients starting at index `start`.
    pub fn from_f64s(start: i64, values: &[f64], horizon: i64, bilateral: bool) -> Seq {
        let mut s = Seq::zero(horizon, bilateral);
        for (k, &v) in values.iter().enumerate() {
            if v != 0.0 {
                s.set(start + k as i64, Wide::from_f64(v));
            }
        }
        s
    }

    pub fn in_range(&self, i: i64) -> bool {
        let min = if self.bilateral { -self.horizon } else { 0 };
        i >= min && i <= self.horizon
    }

    pub fn get(&self, i: i64) -> Wide {
        if i < self.lo || i >= self.lo + self.coeffs.len() as i64 {
            Wide::ZERO
        } else {
            self.coeffs[(i - self.lo) as usize]
        }
    }

    /// Store a coefficient. Panics outside the index range — callers decide
    /// up front (error, not truncation) when an operation would leave range.
    pub fn set(&mut self, i: i64, v: Wide) {
        assert!(
            self.in_range(i),
            "index {} outside {} horizon {}",
            i,
            if self.bilateral { "bilateral" } else { "unilateral" },
            self.horizon
        );
        if self.coeffs.is_empty() {
            self.lo = i;
            self.coeffs.push(v);
            return;
        }
        if i < self.lo {
            let pad = (self.lo - i) as usize;
            let mut fresh = vec![Wide::ZERO; pad];
            fresh.extend_from_slice(&self.coeffs);
            self.coeffs = fresh;
            self.lo = i;
        } else if i >= self.lo + self.coeffs.len() as i64 {
            self.coeffs.resize((i - self.lo + 1) as usize, Wide::ZERO);
        }
        self.coeffs[(i - self.lo) as usize] = v;
    }

    pub fn add_assign_at(&mut self, i: i64, v: Wide) {
        let cur = self.get(i);
        self.set(i, cur + v);
    }

    /// Nonzero entries in index order.
    pub fn support(&self) -> impl Iterator<Item = (i64, Wide)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.lo + k as i64, *c))
    }

    pub fn support_min(&self) -> Option<i64> {
        self.support().next().map(|(i, _)| i)
    }

    pub fn support_max(&self) -> Option<i64> {
        self.support().last().map(|(i, _)| i)
    }

    pub fn is_zero(&self) -> bool {
        self.support().next().is_none()
    }

    pub fn num_nonzero(&self) -> usize {
        self.support().count()
    }

    pub fn scale(&self, s: Wide) -> Seq {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = *c * s;
        }
        // ‖s·tail‖ ≤ |s|·tail for the norms in play (all absolutely scalable).
        out.tail_bound = self.tail_bound * s.abs().to_f64();
        out
    }

    pub fn add(&self, rhs: &Seq) -> Seq {
        assert_eq!(self.bilateral, rhs.bilateral, "mixed laterality in add");
        let mut out = self.clone();
        out.horizon = self.horizon.max(rhs.horizon);
        for (i, c) in rhs.support() {
            out.add_assign_at(i, c);
        }
        out.tail_bound = self.tail_bound + rhs.tail_bound;
        out
    }

    pub fn sub(&self, rhs: &Seq) -> Seq {
        self.add(&rhs.scale(-Wide::ONE))
    }

    /// Largest log2-magnitude over stored coefficients (−∞ if zero).
    pub fn log2_sup(&self) -> f64 {
        self.support().map(|(_, c)| c.log2_abs()).fold(f64::NEG_INFINITY, f64::max)
    }

    /// ℓ1 mass of stored coefficients as a Wide real.
    pub fn l1_mass(&self) -> Wide {
        let mut mags: Vec<Wide> = self.support().map(|(_, c)| c.abs()).collect();
        mags.sort_by(|a, b| a.log2_abs().total_cmp(&b.log2_abs()));
        mags.into_iter().fold(Wide::ZERO, |acc, m| acc + m)
    }
}

/// Positive weight sequence γ with γ_n ≥ 1, for weighted-c0 style norms.
#[derive(Clone, Debug)]
pub enum Gamma {
    /// γ ≡ 1.
    Ones,
    /// γ_{2n} = 1, γ_{2n+1} = 2^n (unilateral).
    OddDoubling,
    /// γ_n = |n| + 1 (bilateral-friendly).
    AbsPlusOne,
    /// Explicit values for indices 0..len (unilateral).
    Explicit(Vec<f64>),
}

impl Gamma {
    /// ln γ_n.
    pub fn ln_at(&self, n: i64) -> f64 {
        match self {
            Gamma::Ones => 0.0,
            Gamma::OddDoubling => {
                assert!(n >= 0, "OddDoubling gamma is unilateral");
                if n % 2 == 1 {
                    ((n - 1) / 2) as f64 * std::f64::consts::LN_2
                } else {
                    0.0
                }
            }
            Gamma::AbsPlusOne => ((n.unsigned_abs() as f64) + 1.0).ln(),
            Gamma::Explicit(v) => {
                assert!(n >= 0 && (n as usize) < v.len(), "gamma index {n} out of range");
                v[n as usize].ln()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Gamma::Explicit(v) = self {
            if v.iter().any(|&g| !(g >= 1.0)) {
                return Err(Error::InvalidParameter("weighted-c0 gamma requires γ_n ≥ 1".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum SpaceKind {
    Lp(f64),
    C0,
    Omega,
    Entire,
    WeightedC0(Gamma),
    BilateralLp(f64),
    BilateralC0,
    BilateralWeightedC0(Gamma),
}

/// Space descriptor: seminorm family plus how many seminorms are materialized
/// (`q_count`, relevant for Omega/Entire; single-norm kinds ignore it).
#[derive(Clone, Debug)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub q_count: u32,
}

/// F-norm truncation depth: Σ_{p≥1} 2^{-p} min(1,‖·‖_p) cut at p = 30; the
/// dropped tail is below double-precision noise for the target tolerances.
pub const F_NORM_P_MAX: u32 = 30;

impl SpaceSpec {
    pub fn lp(p: f64) -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::Lp(p), q_count: 1 }
    }
    pub fn l1() -> SpaceSpec {
        SpaceSpec::lp(1.0)
    }
    pub fn c0() -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::C0, q_count: 1 }
    }
    pub fn omega(q_count: u32) -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::Omega, q_count }
    }
    pub fn entire(q_count: u32) -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::Entire, q_count }
    }
    pub fn weighted_c0(gamma: Gamma) -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::WeightedC0(gamma), q_count: 1 }
    }
    pub fn bilateral_lp(p: f64) -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::BilateralLp(p), q_count: 1 }
    }
    pub fn bilateral_c0() -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::BilateralC0, q_count: 1 }
    }
    pub fn bilateral_weighted_c0(gamma: Gamma) -> SpaceSpec {
        SpaceSpec { kind: SpaceKind::BilateralWeightedC0(gamma), q_count: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_count < 1 {
            return Err(Error::InvalidParameter("seminorm count Q must be ≥ 1".into()));
        }
        match &self.kind {
            SpaceKind::Lp(p) | SpaceKind::BilateralLp(p) => {
                if !(*p >= 1.0) {
                    return Err(Error::InvalidParameter("Lp requires p ≥ 1".into()));
                }
            }
            SpaceKind::WeightedC0(g) | SpaceKind::BilateralWeightedC0(g) => g.validate()?,
            _ => {}
        }
        Ok(())
    }

    pub fn is_bilateral(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::BilateralLp(_) | SpaceKind::BilateralC0 | SpaceKind::BilateralWeightedC0(_)
        )
    }

    /// True when all seminorm indices agree (single-norm kinds).
    pub fn single_norm(&self) -> bool {
        !matches!(self.kind, SpaceKind::Omega | SpaceKind::Entire)
    }

    /// ln ‖e_n‖_q (−∞ for Omega with n > q, where e_n has zero seminorm).
    pub fn ln_norm_e(&self, n: i64, q: u32) -> f64 {
        match &self.kind {
            SpaceKind::Lp(_) | SpaceKind::BilateralLp(_) | SpaceKind::C0 | SpaceKind::BilateralC0 => 0.0,
            SpaceKind::WeightedC0(g) | SpaceKind::BilateralWeightedC0(g) => g.ln_at(n),
            SpaceKind::Omega => {
                if n <= q as i64 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            SpaceKind::Entire => n as f64 * (q as f64).ln(),
        }
    }

    fn check_q(&self, q: u32) -> Result<()> {
        if q < 1 || (!self.single_norm() && q > self.q_count) {
            return Err(Error::InvalidParameter(format!(
                "seminorm index {q} out of range 1..={}",
                self.q_count
            )));
        }
        Ok(())
    }

    fn check_laterality(&self, x: &Seq) -> Result<()> {
        if x.bilateral && !self.is_bilateral() {
            return Err(Error::InvalidParameter("bilateral vector on unilateral space".into()));
        }
        Ok(())
    }

    /// q-th seminorm as a Wide real (exact over huge exponent ranges).
    pub fn seminorm_wide(&self, x: &Seq, q: u32) -> Result<Wide> {
        self.check_q(q)?;
        self.check_laterality(x)?;
        match &self.kind {
            SpaceKind::Lp(p) | SpaceKind::BilateralLp(p) => {
                let sum = sorted_sum(x.support().map(|(_, c)| c.abs().powf(*p)));
                Ok(if sum.is_zero() { Wide::ZERO } else { sum.powf(1.0 / *p) })
            }
            SpaceKind::C0 | SpaceKind::BilateralC0 => {
                Ok(max_term(x.support().map(|(_, c)| c.abs())))
            }
            SpaceKind::WeightedC0(g) | SpaceKind::BilateralWeightedC0(g) => Ok(max_term(
                x.support().map(|(n, c)| c.abs() * Wide::from_ln_polar(g.ln_at(n), 0.0)),
            )),
            SpaceKind::Omega => Ok(sorted_sum(
                x.support().filter(|(n, _)| *n <= q as i64).map(|(_, c)| c.abs()),
            )),
            SpaceKind::Entire => {
                let lnq = (q as f64).ln();
                Ok(sorted_sum(
                    x.support().map(|(n, c)| c.abs() * Wide::from_ln_polar(n as f64 * lnq, 0.0)),
                ))
            }
        }
    }

    /// q-th seminorm as f64 (saturates outside double range).
    pub fn seminorm(&self, x: &Seq, q: u32) -> Result<f64> {
        Ok(self.seminorm_wide(x, q)?.to_f64())
    }

    /// F-norm Σ_{p=1}^{30} 2^{-p} min(1,‖x‖_p) plus the remainder estimate
    /// 2^{-30}·min(1,‖x‖_30); exact for single-norm kinds, an upper bound off
    /// by at most 2^{-30} otherwise (seminorms are monotone in q).
    pub fn f_norm(&self, x: &Seq) -> Result<f64> {
        self.check_laterality(x)?;
        if self.single_norm() {
            let s = self.seminorm(x, 1)?;
            return Ok(s.min(1.0));
        }
        let mut total = 0.0;
        let mut last = 0.0;
        for p in 1..=F_NORM_P_MAX {
            let q_eff = p.min(self.q_count);
            last = self.seminorm(x, q_eff)?.min(1.0);
            total += last / f64::powi(2.0, p as i32);
        }
        Ok(total + last / f64::powi(2.0, F_NORM_P_MAX as i32))
    }

    /// Conservative ball membership: seminorm distance plus both tail bounds
    /// must fit strictly inside the radius.
    pub fn in_ball(&self, x: &Seq, center: &Seq, radius: f64, q: u32) -> Result<bool> {
        if radius <= 0.0 {
            return Err(Error::InvalidParameter("ball radius must be positive".into()));
        }
        let d = self.seminorm(&x.sub(center), q)?;
        Ok(d + x.tail_bound + center.tail_bound < radius)
    }
}

/// Sum with magnitudes sorted ascending (cancellation-limiting order).
fn sorted_sum(terms: impl Iterator<Item = Wide>) -> Wide {
    let mut v: Vec<Wide> = terms.filter(|t| !t.is_zero()).collect();
    v.sort_by(|a, b| a.log2_abs().total_cmp(&b.log2_abs()));
    v.into_iter().fold(Wide::ZERO, |acc, t| acc + t)
}

fn max_term(terms: impl Iterator<Item = Wide>) -> Wide {
    terms.fold(Wide::ZERO, |acc, t| if t.log2_abs() > acc.log2_abs() { t } else { acc })
}

/// Convenience: complex value of a coefficient list as Seq (index 0 start).
pub fn seq_from_complex(values: &[Complex64], horizon: i64) -> Seq {
    let mut s = Seq::zero(horizon, false);
    for (k, &z) in values.iter().enumerate() {
        if z != Complex64::new(0.0, 0.0) {
            s.set(k as i64, Wide::from_complex(z));
        }
    }
    s
}
