//! Convolution operators on truncated entire functions.
//!
//! φ(D) acts coefficientwise on Taylor truncations; the exponentials E(λ)
//! are its eigenvectors with eigenvalue φ(λ). The parameter searches certify
//! the strict inequalities |φ(db+(n−d)a)| < |φ(mb)|^{d/m} needed by the
//! power-mixing construction, and the witness builder assembles
//! u(N) = Σ a_l E(γ_l) + Σ c_j E(λ_j/m) with c_j^m = b_j/φ(λ_j)^N together
//! with the exact three-way split of u^m used for verification.

use crate::scaled::Wide;
use crate::spaces::Seq;
use crate::{Error, Result};
use num_complex::Complex64;

/// Truncated entire functions are plain coefficient sequences on [0, L].
pub type EntireTrunc = Seq;

/// Double-double helpers for the Taylor-vs-closed-form cross check: the
/// series at certificate-sized arguments cancels ~10 digits, so plain f64
/// Horner cannot reach the demanded agreement.
mod dd {
    use num_complex::Complex64;

    #[derive(Clone, Copy, Debug)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    impl Dd {
        pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

        pub fn from_f64(x: f64) -> Dd {
            Dd { hi: x, lo: 0.0 }
        }

        fn quick(hi: f64, lo: f64) -> Dd {
            let s = hi + lo;
            Dd { hi: s, lo: lo - (s - hi) }
        }

        fn two_sum(a: f64, b: f64) -> Dd {
            let s = a + b;
            let bb = s - a;
            Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
        }

        fn two_prod(a: f64, b: f64) -> Dd {
            let p = a * b;
            Dd { hi: p, lo: a.mul_add(b, -p) }
        }

        pub fn add(self, o: Dd) -> Dd {
            let s = Dd::two_sum(self.hi, o.hi);
            Dd::quick(s.hi, s.lo + self.lo + o.lo)
        }

        pub fn neg(self) -> Dd {
            Dd { hi: -self.hi, lo: -self.lo }
        }

        pub fn mul(self, o: Dd) -> Dd {
            let p = Dd::two_prod(self.hi, o.hi);
            Dd::quick(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
        }

        pub fn div(self, o: Dd) -> Dd {
            let q1 = self.hi / o.hi;
            let r = self.add(o.mul(Dd::from_f64(q1)).neg());
            Dd::quick(q1, (r.hi + r.lo) / o.hi)
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }
    }

    #[derive(Clone, Copy, Debug)]
    pub struct Cdd {
        pub re: Dd,
        pub im: Dd,
    }

    impl Cdd {
        pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

        pub fn from_complex(z: Complex64) -> Cdd {
            Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
        }

        pub fn add(self, o: Cdd) -> Cdd {
            Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
        }

        pub fn mul(self, o: Cdd) -> Cdd {
            Cdd {
                re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
                im: self.re.mul(o.im).add(self.im.mul(o.re)),
            }
        }

        pub fn to_complex(self) -> Complex64 {
            Complex64::new(self.re.to_f64(), self.im.to_f64())
        }
    }
}

/// The admissible symbol shapes: a plain polynomial (covers D itself),
/// a polynomial times e^z, and the mixed ½e^z + e^{iz} − ¼ example.
#[derive(Clone, Debug)]
pub enum PhiForm {
    HalfExpPlusExpIMinusQuarter,
    PolyTimesExp(Vec<Complex64>),
    Poly(Vec<Complex64>),
}

/// Symbol φ: closed-form evaluator plus a Taylor truncation length used by
/// the coefficientwise operator action and the series cross check.
#[derive(Clone, Debug)]
pub struct PhiSpec {
    pub form: PhiForm,
    pub taylor_len: usize,
}

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl PhiSpec {
    pub fn new(form: PhiForm, taylor_len: usize) -> Result<PhiSpec> {
        let spec = PhiSpec { form, taylor_len };
        match &spec.form {
            PhiForm::Poly(p) | PhiForm::PolyTimesExp(p) => {
                if p.is_empty() || p.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                    return Err(Error::InvalidParameter("empty or non-finite symbol polynomial".into()));
                }
            }
            PhiForm::HalfExpPlusExpIMinusQuarter => {}
        }
        if spec.taylor().iter().skip(1).all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidParameter("symbol must be nonconstant".into()));
        }
        Ok(spec)
    }

    pub fn differentiation() -> PhiSpec {
        PhiSpec::new(PhiForm::Poly(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]), 1)
            .expect("D is nonconstant")
    }

    /// Highest Taylor index the spec materializes.
    pub fn k_eff(&self) -> usize {
        match &self.form {
            PhiForm::Poly(p) => p.len() - 1,
            _ => self.taylor_len,
        }
    }

    /// Taylor coefficients c_0..c_K in plain f64 precision.
    pub fn taylor(&self) -> Vec<Complex64> {
        let k = self.k_eff();
        match &self.form {
            PhiForm::Poly(p) => p.clone(),
            PhiForm::PolyTimesExp(p) => {
                let mut inv_fact = vec![1.0f64; k + 1];
                for i in 1..=k {
                    inv_fact[i] = inv_fact[i - 1] / i as f64;
                }
                (0..=k)
                    .map(|n| {
                        (0..p.len().min(n + 1)).map(|j| p[j] * inv_fact[n - j]).sum()
                    })
                    .collect()
            }
            PhiForm::HalfExpPlusExpIMinusQuarter => {
                let mut out = Vec::with_capacity(k + 1);
                let mut inv_fact = 1.0f64;
                for n in 0..=k {
                    if n > 0 {
                        inv_fact /= n as f64;
                    }
                    let i_n = Complex64::i().powu(n as u32);
                    let mut c = (Complex64::new(0.5, 0.0) + i_n) * inv_fact;
                    if n == 0 {
                        c -= 0.25;
                    }
                    out.push(c);
                }
                out
            }
        }
    }

    /// φ(z) via the closed form.
    pub fn eval_closed(&self, z: Complex64) -> Complex64 {
        match &self.form {
            PhiForm::Poly(p) => poly_eval(p, z),
            PhiForm::PolyTimesExp(p) => poly_eval(p, z) * z.exp(),
            PhiForm::HalfExpPlusExpIMinusQuarter => {
                0.5 * z.exp() + (Complex64::i() * z).exp() - 0.25
            }
        }
    }

    /// φ(z) via the Taylor series, summed in double-double precision with
    /// double-double coefficients, so the result certifies the closed form
    /// even where the series cancels heavily.
    pub fn eval_taylor(&self, z: Complex64) -> Complex64 {
        use dd::{Cdd, Dd};
        let k = self.k_eff();
        let coeffs: Vec<Cdd> = match &self.form {
            PhiForm::Poly(p) => p.iter().map(|&c| Cdd::from_complex(c)).collect(),
            PhiForm::PolyTimesExp(p) => {
                let mut fact = Dd::from_f64(1.0);
                let mut inv_fact = vec![Dd::from_f64(1.0)];
                for i in 1..=k {
                    fact = fact.mul(Dd::from_f64(i as f64));
                    inv_fact.push(Dd::from_f64(1.0).div(fact));
                }
                (0..=k)
                    .map(|n| {
                        let mut acc = Cdd::ZERO;
                        for j in 0..p.len().min(n + 1) {
                            let f = inv_fact[n - j];
                            acc = acc.add(Cdd {
                                re: f.mul(Dd::from_f64(p[j].re)),
                                im: f.mul(Dd::from_f64(p[j].im)),
                            });
                        }
                        acc
                    })
                    .collect()
            }
            PhiForm::HalfExpPlusExpIMinusQuarter => {
                let mut fact = Dd::from_f64(1.0);
                let mut out = Vec::with_capacity(k + 1);
                for n in 0..=k {
                    if n > 0 {
                        fact = fact.mul(Dd::from_f64(n as f64));
                    }
                    let i_n = Complex64::i().powu(n as u32);
                    let mut re = Dd::from_f64(0.5 + i_n.re);
                    if n == 0 {
                        re = re.add(Dd::from_f64(-0.25));
                    }
                    out.push(Cdd { re: re.div(fact), im: Dd::from_f64(i_n.im).div(fact) });
                }
                out
            }
        };
        let zdd = dd::Cdd::from_complex(z);
        let mut acc = dd::Cdd::ZERO;
        for &c in coeffs.iter().rev() {
            acc = acc.mul(zdd).add(c);
        }
        acc.to_complex()
    }
}

fn lnfact_table(n: usize) -> Vec<f64> {
    let mut t = vec![0.0f64; n + 1];
    for i in 1..=n {
        t[i] = t[i - 1] + (i as f64).ln();
    }
    t
}

/// E(λ) truncated at degree L: coefficients λ^n/n! in log-polar form.
pub fn exp_vector(lambda: Complex64, l_horizon: i64) -> Seq {
    let l = l_horizon.max(0);
    let mut out = Seq::zero(l, false);
    if lambda.norm() == 0.0 {
        out.set(0, Wide::new(1.0, 0.0));
        return out;
    }
    let lnfact = lnfact_table(l as usize);
    let (ln_mag, arg) = (lambda.norm().ln(), lambda.arg());
    for n in 0..=l {
        out.set(
            n,
            Wide::from_ln_polar(n as f64 * ln_mag - lnfact[n as usize], n as f64 * arg),
        );
    }
    out
}

/// Coefficientwise action (φ(D)f)_n = Σ_k c_k a_{n+k} (n+k)!/n!.
///
/// Only coefficients with full headroom, n ≤ L − K, are produced; the
/// incomplete window (L−K, L] is left zero. The input's tail bound carries
/// through unchanged.
pub fn phi_of_d(phi: &PhiSpec, f: &Seq) -> Result<Seq> {
    if f.bilateral {
        return Err(Error::InvalidParameter("entire truncations are unilateral".into()));
    }
    let k_eff = phi.k_eff() as i64;
    let l = f.horizon;
    if k_eff > l {
        return Err(Error::InvalidParameter(format!(
            "symbol length {k_eff} exceeds coefficient horizon {l}: no complete coefficients"
        )));
    }
    let taylor = phi.taylor();
    let lnfact = lnfact_table(l as usize);
    let mut out = Seq::zero(l, false);
    out.tail_bound = f.tail_bound;
    for n in 0..=(l - k_eff) {
        let mut acc = Wide::new(0.0, 0.0);
        for (k, &c) in taylor.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let a = f.get(n + k as i64);
            if a.is_zero() {
                continue;
            }
            let ratio = Wide::from_ln_polar(lnfact[(n + k as i64) as usize] - lnfact[n as usize], 0.0);
            acc = acc + a * Wide::from_complex(c) * ratio;
        }
        if acc.ln_abs().is_nan() {
            return Err(Error::InvalidParameter(format!("non-finite coefficient at index {n}")));
        }
        out.set(n, acc);
    }
    Ok(out)
}

/// One strict inequality of the power-mixing condition, in log modulus:
/// |φ(db+(n−d)a)| on the left against |φ(mb)|^{d/m} on the right.
#[derive(Clone, Debug)]
pub struct CondERow {
    pub n: u32,
    pub d: u32,
    pub point: Complex64,
    pub lhs_ln: f64,
    pub rhs_ln: f64,
}

/// A certified triple (m, a, b): every inequality row plus the worst margin
/// (which also accounts for ln|φ(mb)| > 0).
#[derive(Clone, Debug)]
pub struct CondECert {
    pub m: u32,
    pub a: Complex64,
    pub b: Complex64,
    pub rows: Vec<CondERow>,
    pub margin_ln: f64,
}

/// Search configuration: explicit candidate pairs and the strictness floor.
#[derive(Clone, Debug)]
pub struct CondEGrid {
    pub pairs: Vec<(Complex64, Complex64)>,
    pub margin_ln: f64,
}

impl CondEGrid {
    /// The lattice (a, b) = (2πik, 2πk), k = 1..=k_max.
    pub fn lattice_2pi(k_max: u32, margin_ln: f64) -> CondEGrid {
        let pairs = (1..=k_max)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * f64::from(k);
                (Complex64::new(0.0, t), Complex64::new(t, 0.0))
            })
            .collect();
        CondEGrid { pairs, margin_ln }
    }
}

/// Evaluate every inequality row for a fixed triple; the returned margin is
/// the minimum slack in log modulus (negative when some row fails).
fn check_triple(phi: &PhiSpec, i_set: &[u32], m: u32, a: Complex64, b: Complex64) -> (Vec<CondERow>, f64) {
    let bf = f64::from(m);
    let anchor_ln = phi.eval_closed(bf * b).norm().ln();
    let mut rows = Vec::new();
    let mut margin = anchor_ln; // needs |φ(mb)| > 1
    for &n in i_set {
        for d in 0..=n {
            if (n, d) == (m, m) {
                continue;
            }
            let point = f64::from(d) * b + f64::from(n - d) * a;
            let lhs_ln = phi.eval_closed(point).norm().ln();
            let rhs_ln = f64::from(d) / bf * anchor_ln;
            margin = margin.min(rhs_ln - lhs_ln);
            rows.push(CondERow { n, d, point, lhs_ln, rhs_ln });
        }
    }
    (rows, margin)
}

fn validated_i_set(i_set: &[u32]) -> Result<Vec<u32>> {
    if i_set.is_empty() || i_set.iter().any(|&n| n == 0) {
        return Err(Error::InvalidParameter("exponent set must be nonempty positive integers".into()));
    }
    let mut sorted = i_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// Scan the grid pairs in order and the exponents m ∈ I ascending; return
/// the first triple whose inequalities all hold with margin ≥ the floor.
pub fn search_condition_e(phi: &PhiSpec, i_set: &[u32], grid: &CondEGrid) -> Result<CondECert> {
    let sorted = validated_i_set(i_set)?;
    if grid.pairs.is_empty() {
        return Err(Error::InvalidParameter("empty search grid".into()));
    }
    for &(a, b) in &grid.pairs {
        for &m in &sorted {
            let (rows, margin) = check_triple(phi, &sorted, m, a, b);
            if margin >= grid.margin_ln {
                return Ok(CondECert { m, a, b, rows, margin_ln: margin });
            }
        }
    }
    Err(Error::HorizonExhausted(format!(
        "no certificate over {} grid pairs — budget exhausted, inconclusive",
        grid.pairs.len()
    )))
}

/// Certificate from the half-line argument, with the detected ray thresholds.
#[derive(Clone, Debug)]
pub struct WellbehavedCert {
    pub cert: CondECert,
    /// Last ray position with |φ(tv)| > 1 (refined by bisection).
    pub t0: f64,
    /// Chosen t_1 < t_0 with |φ(t_1 v)| > 1 and t_1(1 + 1/m) > t_0.
    pub t1: f64,
}

/// Certificate search for symbols that exceed modulus one somewhere on the
/// ray tv and stay ≤ 1 beyond a threshold: m = min I, b = (t_1/m)v, and a
/// scanned on the ray past the threshold.
pub fn wellbehaved_search(phi: &PhiSpec, v: Complex64, i_set: &[u32]) -> Result<WellbehavedCert> {
    let sorted = validated_i_set(i_set)?;
    if v.norm() == 0.0 {
        return Err(Error::InvalidParameter("ray direction must be nonzero".into()));
    }
    let t_max = 60.0;
    let step = 1e-3;
    let steps = (t_max / step) as usize;
    let val = |t: f64| phi.eval_closed(t * v).norm();
    let mut last_above: Option<usize> = None;
    let mut any_above = false;
    for i in 1..=steps {
        if val(i as f64 * step) > 1.0 {
            any_above = true;
            last_above = Some(i);
        }
    }
    if !any_above {
        return Err(Error::SearchFailed("|φ(tv)| never exceeds 1 on the scanned ray".into()));
    }
    let last = last_above.unwrap();
    if last >= steps - 1 {
        return Err(Error::SearchFailed("|φ(tv)| does not settle below 1 within the scanned ray".into()));
    }
    // Refine the crossing between the last > 1 sample and the next one.
    let (mut lo, mut hi) = (last as f64 * step, (last + 1) as f64 * step);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if val(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t0 = hi;

    let m = sorted[0];
    let mf = f64::from(m);
    // Any admissible t_1 works; take the one maximizing |φ(t_1 v)| so the
    // perturbation disk around mb = t_1 v downstream is as wide as possible.
    let mut t1: Option<(f64, f64)> = None;
    let mut i = 1usize;
    while (i as f64) * step < t0 {
        let t = i as f64 * step;
        if t * (1.0 + 1.0 / mf) > t0 {
            let v_abs = val(t);
            if v_abs > 1.0 && t1.is_none_or(|(_, best)| v_abs > best) {
                t1 = Some((t, v_abs));
            }
        }
        i += 1;
    }
    let (t1, _) = t1.ok_or_else(|| {
        Error::SearchFailed("no t_1 below the threshold with |φ(t_1 v)| > 1 and t_1(1+1/m) > t_0".into())
    })?;
    let b = (t1 / mf) * v;

    let a0 = t0 + 0.5;
    let eps = 0.4;
    let mut tau = a0 - eps;
    while tau <= a0 + eps {
        let a = tau * v;
        let (rows, margin) = check_triple(phi, &sorted, m, a, b);
        if margin >= 1e-9 {
            return Ok(WellbehavedCert { cert: CondECert { m, a, b, rows, margin_ln: margin }, t0, t1 });
        }
        tau += eps / 20.0;
    }
    Err(Error::SearchFailed("no a in the scanned window satisfies every inequality".into()))
}

/// Witness u(N) with its exact power split u^m = v_1 + v_2 + v_3 and the
/// eigen-propagated images T^N v_i; `target` is Σ b_j E(λ_j).
#[derive(Clone, Debug)]
pub struct ConvWitness {
    pub u: Seq,
    pub v1: Seq,
    pub v2: Seq,
    pub v3: Seq,
    pub tn_v1: Seq,
    pub tn_v2: Seq,
    pub tn_v3: Seq,
    pub target: Seq,
    pub c: Vec<Wide>,
    pub delta: f64,
}

fn add_scaled_exp(acc: &mut Seq, scalar: Wide, mu: Complex64, l: i64) {
    if scalar.is_zero() {
        return;
    }
    let e = exp_vector(mu, l);
    for (i, w) in e.support() {
        let cur = acc.get(i);
        acc.set(i, cur + scalar * w);
    }
}

/// φ(μ)^N in log-polar form.
fn eig_pow(phi: &PhiSpec, mu: Complex64, n_big: u32) -> Wide {
    let w = phi.eval_closed(mu);
    Wide::from_ln_polar(f64::from(n_big) * w.norm().ln(), f64::from(n_big) * w.arg())
}

/// Assemble u(N) from exponential combinations around the certificate.
///
/// U_combo = {(a_l, γ_l)} with γ_l near a; V_combo = {(b_j, λ_j)} with λ_j
/// near mb (collinear when there are two or more). The disk conditions —
/// |φ| > 1 near mb, strict convexity of log|φ| along the eigenvalue
/// segment, and the perturbed strict inequalities — are sampled before
/// anything is built.
pub fn build_convolution_witness(
    phi: &PhiSpec,
    i_set: &[u32],
    m: u32,
    a: Complex64,
    b: Complex64,
    u_combo: &[(Complex64, Complex64)],
    v_combo: &[(Complex64, Complex64)],
    n_big: u32,
    l_horizon: i64,
) -> Result<ConvWitness> {
    let sorted = validated_i_set(i_set)?;
    if !sorted.contains(&m) {
        return Err(Error::InvalidParameter("distinguished exponent must lie in the set".into()));
    }
    if v_combo.is_empty() {
        return Err(Error::InvalidParameter("target combination must be nonempty".into()));
    }
    if n_big < 1 || l_horizon < 4 {
        return Err(Error::InvalidParameter("need N ≥ 1 and a positive degree horizon".into()));
    }
    let mf = f64::from(m);
    let w0 = mf * b;
    let delta = u_combo
        .iter()
        .map(|&(_, g)| (g - a).norm())
        .chain(v_combo.iter().map(|&(_, lam)| (lam - w0).norm()))
        .fold(0.0f64, f64::max);

    // Disk condition: |φ| > 1 at the center, the eigenvalues, and a ring.
    let mut disk_points: Vec<Complex64> = vec![w0];
    disk_points.extend(v_combo.iter().map(|&(_, lam)| lam));
    if delta > 0.0 {
        for k in 0..16 {
            let th = std::f64::consts::TAU * f64::from(k) / 16.0;
            disk_points.push(w0 + delta * Complex64::new(th.cos(), th.sin()));
        }
    }
    for z in &disk_points {
        if phi.eval_closed(*z).norm() <= 1.0 {
            return Err(Error::SearchFailed(format!(
                "|φ| ≤ 1 at sampled point {z} of the eigenvalue disk"
            )));
        }
    }

    // Convexity along the eigenvalue segment (needed once cross terms exist).
    if v_combo.len() >= 2 {
        let (mut wa, mut wb, mut best) = (v_combo[0].1, v_combo[0].1, -1.0);
        for &(_, x) in v_combo {
            for &(_, y) in v_combo {
                if (x - y).norm() > best {
                    best = (x - y).norm();
                    wa = x;
                    wb = y;
                }
            }
        }
        if best <= 0.0 {
            return Err(Error::InvalidParameter("eigenvalues must be distinct".into()));
        }
        for &(_, lam) in v_combo {
            let cross = ((lam - wa) * (wb - wa).conj()).im.abs();
            if cross > 1e-9 * best * best {
                return Err(Error::InvalidParameter(
                    "eigenvalues must be collinear along the segment".into(),
                ));
            }
        }
        let g = |t: f64| phi.eval_closed(t * wa + (1.0 - t) * wb).norm().ln();
        let grid: Vec<f64> = (0..=20).map(|i| f64::from(i) / 20.0).collect();
        for i in 0..grid.len() {
            for j in (i + 2)..grid.len() {
                let (s, t) = (grid[i], grid[j]);
                if g(0.5 * (s + t)) >= 0.5 * (g(s) + g(t)) {
                    return Err(Error::SearchFailed(format!(
                        "log|φ| not strictly convex on the eigenvalue segment (pair t={s}, {t})"
                    )));
                }
            }
        }
    }

    // Perturbed strict inequalities at sampled tuples from the actual
    // eigenvalues/frequencies plus disk extreme points.
    let ring = |center: Complex64| -> Vec<Complex64> {
        let mut pts = vec![center];
        if delta > 0.0 {
            for k in 0..4 {
                let th = std::f64::consts::TAU * f64::from(k) / 4.0;
                pts.push(center + delta * Complex64::new(th.cos(), th.sin()));
            }
        }
        pts
    };
    let mut s_lam: Vec<Complex64> = v_combo.iter().map(|&(_, lam)| lam).collect();
    s_lam.extend(ring(w0));
    let mut s_gam: Vec<Complex64> = u_combo.iter().map(|&(_, g)| g).collect();
    s_gam.extend(ring(a));
    for &n in &sorted {
        for d in 0..=n {
            if (n, d) == (m, m) {
                continue;
            }
            let mut lam_idx = vec![0usize; d as usize];
            loop {
                let mut gam_idx = vec![0usize; (n - d) as usize];
                loop {
                    let lam_sum: Complex64 = lam_idx.iter().map(|&i| s_lam[i]).sum();
                    let gam_sum: Complex64 = gam_idx.iter().map(|&i| s_gam[i]).sum();
                    let lhs = phi.eval_closed(lam_sum / mf + gam_sum).norm().ln();
                    let rhs = lam_idx
                        .iter()
                        .map(|&i| phi.eval_closed(s_lam[i]).norm().ln())
                        .sum::<f64>()
                        / mf;
                    if lhs >= rhs {
                        return Err(Error::SearchFailed(format!(
                            "perturbed inequality fails at sampled (n, d) = ({n}, {d})"
                        )));
                    }
                    if !advance(&mut gam_idx, s_gam.len()) {
                        break;
                    }
                }
                if !advance(&mut lam_idx, s_lam.len()) {
                    break;
                }
            }
        }
    }

    // c_j from c_j^m = b_j / φ(λ_j)^N, principal branch of the m-th root.
    let nf = f64::from(n_big);
    let c: Vec<Wide> = v_combo
        .iter()
        .map(|&(bj, lam)| {
            let ph = phi.eval_closed(lam);
            Wide::from_ln_polar(
                (bj.norm().ln() - nf * ph.norm().ln()) / mf,
                (bj.arg() - nf * ph.arg()) / mf,
            )
        })
        .collect();

    let l = l_horizon;
    let mut u = Seq::zero(l, false);
    for &(al, gam) in u_combo {
        add_scaled_exp(&mut u, Wide::from_complex(al), gam, l);
    }
    for (j, &(_, lam)) in v_combo.iter().enumerate() {
        add_scaled_exp(&mut u, c[j], lam / mf, l);
    }

    let p = u_combo.len();
    let q = v_combo.len();
    let mut v1 = Seq::zero(l, false);
    let mut tn_v1 = Seq::zero(l, false);
    // Every v1 term carries at least one a_l factor, so v1 = 0 without a U-part.
    for d in 0..(if p == 0 { 0 } else { m }) {
        let binom = binomial(m, d);
        let mut j_idx = vec![0usize; d as usize];
        loop {
            let mut l_idx = vec![0usize; (m - d) as usize];
            loop {
                let mut scalar = Wide::from_f64(binom);
                let mut mu = Complex64::new(0.0, 0.0);
                for &i in &l_idx {
                    scalar = scalar * Wide::from_complex(u_combo[i].0);
                    mu += u_combo[i].1;
                }
                for &i in &j_idx {
                    scalar = scalar * c[i];
                    mu += v_combo[i].1 / mf;
                }
                add_scaled_exp(&mut v1, scalar, mu, l);
                add_scaled_exp(&mut tn_v1, scalar * eig_pow(phi, mu, n_big), mu, l);
                if !advance(&mut l_idx, p) {
                    break;
                }
            }
            if !advance(&mut j_idx, q) {
                break;
            }
        }
    }

    let mut v2 = Seq::zero(l, false);
    let mut tn_v2 = Seq::zero(l, false);
    let mut j_idx = vec![0usize; m as usize];
    loop {
        if j_idx.iter().any(|&i| i != j_idx[0]) {
            let mut scalar = Wide::from_f64(1.0);
            let mut mu = Complex64::new(0.0, 0.0);
            for &i in &j_idx {
                scalar = scalar * c[i];
                mu += v_combo[i].1 / mf;
            }
            add_scaled_exp(&mut v2, scalar, mu, l);
            add_scaled_exp(&mut tn_v2, scalar * eig_pow(phi, mu, n_big), mu, l);
        }
        if !advance(&mut j_idx, q) {
            break;
        }
    }

    let mut v3 = Seq::zero(l, false);
    let mut tn_v3 = Seq::zero(l, false);
    let mut target = Seq::zero(l, false);
    for (j, &(bj, lam)) in v_combo.iter().enumerate() {
        let cm = c[j].powu(m);
        add_scaled_exp(&mut v3, cm, lam, l);
        add_scaled_exp(&mut tn_v3, cm * eig_pow(phi, lam, n_big), lam, l);
        add_scaled_exp(&mut target, Wide::from_complex(bj), lam, l);
    }

    Ok(ConvWitness { u, v1, v2, v3, tn_v1, tn_v2, tn_v3, target, c, delta })
}

fn binomial(m: u32, d: u32) -> f64 {
    let mut out = 1.0f64;
    for i in 0..d {
        out = out * f64::from(m - i) / f64::from(i + 1);
    }
    out
}

/// Odometer increment over mixed-radix digits; false when wrapped around.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for digit in idx.iter_mut() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}
