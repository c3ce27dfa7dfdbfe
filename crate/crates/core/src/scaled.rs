//! Wide-range complex scalar: mantissa (re, im) times 2^exp.
//!
//! Witness coefficients mix magnitudes like 2^{-12000} with O(1) terms, far
//! outside f64 range. `Wide` keeps a complex mantissa normalized so
//! max(|re|,|im|) ∈ [1,2) and tracks the binary exponent separately, giving
//! ~f64 relative precision over an unbounded exponent range. Fractional
//! powers go through log-polar form and always take the principal branch.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// `(re + i·im) · 2^exp`, normalized so `max(|re|,|im|) ∈ [1,2)` unless zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wide {
    re: f64,
    im: f64,
    exp: i64,
}

/// Exponent gap beyond which the smaller addend cannot affect the sum.
/// 2^-1100 scales below the subnormal range of an O(1) mantissa.
const ADD_CUTOFF: i64 = 1100;

impl Wide {
    pub const ZERO: Wide = Wide { re: 0.0, im: 0.0, exp: 0 };
    pub const ONE: Wide = Wide { re: 1.0, im: 0.0, exp: 0 };

    pub fn new(re: f64, im: f64) -> Wide {
        Wide { re, im, exp: 0 }.normalized()
    }

    pub fn from_f64(x: f64) -> Wide {
        Wide::new(x, 0.0)
    }

    pub fn from_complex(z: Complex64) -> Wide {
        Wide::new(z.re, z.im)
    }

    /// exp(ln_mag) · e^{i·arg} without evaluating exp(ln_mag) in f64.
    pub fn from_ln_polar(ln_mag: f64, arg: f64) -> Wide {
        if ln_mag == f64::NEG_INFINITY {
            return Wide::ZERO;
        }
        Wide::from_log2_polar(ln_mag / std::f64::consts::LN_2, arg)
    }

    /// 2^(log2_mag) · e^{i·arg}.
    pub fn from_log2_polar(log2_mag: f64, arg: f64) -> Wide {
        if log2_mag == f64::NEG_INFINITY {
            return Wide::ZERO;
        }
        let e = log2_mag.floor();
        let m = (log2_mag - e).exp2(); // in [1, 2)
        Wide { re: m * arg.cos(), im: m * arg.sin(), exp: e as i64 }.normalized()
    }

    fn normalized(mut self) -> Wide {
        let m = self.re.abs().max(self.im.abs());
        if m == 0.0 {
            return Wide::ZERO;
        }
        debug_assert!(m.is_finite(), "non-finite mantissa in Wide");
        let shift = m.log2().floor() as i64;
        if shift != 0 {
            let scale = exp2i(-shift);
            self.re *= scale;
            self.im *= scale;
            self.exp += shift;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    /// log2 of the magnitude; −∞ for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.re.hypot(self.im).log2() + self.exp as f64
        }
    }

    /// Natural log of the magnitude; −∞ for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.re.hypot(self.im).ln() + self.exp as f64 * std::f64::consts::LN_2
        }
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }

    /// Magnitude as a real `Wide`.
    pub fn abs(&self) -> Wide {
        if self.is_zero() {
            Wide::ZERO
        } else {
            Wide { re: self.re.hypot(self.im), im: 0.0, exp: self.exp }.normalized()
        }
    }

    /// Collapse to f64 complex; saturates to ±inf / 0 outside f64 range.
    pub fn to_complex(&self) -> Complex64 {
        let scale = exp2i(self.exp);
        Complex64::new(self.re * scale, self.im * scale)
    }

    /// Real part as f64 (same saturation caveat as `to_complex`).
    pub fn to_f64(&self) -> f64 {
        self.re * exp2i(self.exp)
    }

    pub fn scale(&self, s: f64) -> Wide {
        Wide { re: self.re * s, im: self.im * s, exp: self.exp }.normalized()
    }

    pub fn conj(&self) -> Wide {
        Wide { re: self.re, im: -self.im, exp: self.exp }
    }

    pub fn recip(&self) -> Wide {
        assert!(!self.is_zero(), "division by zero Wide");
        let d = self.re * self.re + self.im * self.im;
        Wide { re: self.re / d, im: -self.im / d, exp: -self.exp }.normalized()
    }

    /// Integer power by repeated squaring (exact support, no branch issues).
    pub fn powu(&self, mut m: u32) -> Wide {
        let mut acc = Wide::ONE;
        let mut base = *self;
        while m > 0 {
            if m & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            m >>= 1;
        }
        acc
    }

    /// Principal-branch real power: exp(t·(ln|z| + i·Arg z)).
    /// Zero maps to zero (callers must not ask for non-positive t on zero).
    pub fn powf(&self, t: f64) -> Wide {
        if self.is_zero() {
            assert!(t > 0.0, "0^t undefined for t <= 0");
            return Wide::ZERO;
        }
        if t == 1.0 {
            return *self;
        }
        Wide::from_log2_polar(t * self.log2_abs(), t * self.arg())
    }

    /// Relative distance |a−b|/max(|a|,|b|), 0 when both are zero.
    /// Infinite-magnitude-gap cases degrade gracefully to 1.
    pub fn rel_diff(a: Wide, b: Wide) -> f64 {
        if a.is_zero() && b.is_zero() {
            return 0.0;
        }
        let diff = (a - b).log2_abs();
        let scale = a.log2_abs().max(b.log2_abs());
        (diff - scale).exp2()
    }
}

/// 2^e as f64, saturating: e > 1023 → inf, e < −1074 → 0.
fn exp2i(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else {
        f64::powi(2.0, e as i32)
    }
}

impl Add for Wide {
    type Output = Wide;
    fn add(self, rhs: Wide) -> Wide {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let d = big.exp - small.exp;
        if d > ADD_CUTOFF {
            return big;
        }
        let s = exp2i(-d);
        Wide { re: big.re + small.re * s, im: big.im + small.im * s, exp: big.exp }.normalized()
    }
}

impl Sub for Wide {
    type Output = Wide;
    fn sub(self, rhs: Wide) -> Wide {
        self + (-rhs)
    }
}

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide { re: -self.re, im: -self.im, exp: self.exp }
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, rhs: Wide) -> Wide {
        if self.is_zero() || rhs.is_zero() {
            return Wide::ZERO;
        }
        Wide {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
            exp: self.exp + rhs.exp,
        }
        .normalized()
    }
}

impl std::fmt::Display for Wide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} + {}i)*2^{}", self.re, self.im, self.exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_mul_roundtrip_small() {
        let a = Wide::new(1.5, -0.25);
        let b = Wide::new(-0.5, 2.0);
        let sum = (a + b).to_complex();
        assert!((sum - Complex64::new(1.0, 1.75)).norm() < 1e-15);
        let prod = (a * b).to_complex();
        let expect = Complex64::new(1.5, -0.25) * Complex64::new(-0.5, 2.0);
        assert!((prod - expect).norm() < 1e-15);
    }

    #[test]
    fn huge_exponent_product_stays_exact_in_log() {
        // 2^-9000 * 2^9000 = 1, far outside f64 range for the factors.
        let a = Wide::from_log2_polar(-9000.0, 0.0);
        let b = Wide::from_log2_polar(9000.0, 0.0);
        let p = a * b;
        assert!((p.to_f64() - 1.0).abs() < 1e-12);
        assert!((a.log2_abs() + 9000.0).abs() < 1e-9);
    }

    #[test]
    fn add_cutoff_keeps_dominant_term() {
        let big = Wide::from_log2_polar(2000.0, 0.0);
        let tiny = Wide::from_log2_polar(-2000.0, 0.0);
        assert_eq!(big + tiny, big);
        // Within cutoff the small term still contributes.
        // 2^2000 + 2^1999 = 2^2000·(3/2): log2 = 2000 + log2(1.5).
        let near = Wide::from_log2_polar(1999.0, 0.0);
        assert!(((big + near).log2_abs() - 2000.0 - 0.584962500721156).abs() < 1e-9);
    }

    #[test]
    fn powf_principal_branch() {
        // (-1)^(1/2) = i under the principal branch.
        let m1 = Wide::from_f64(-1.0);
        let r = m1.powf(0.5).to_complex();
        assert!((r - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        // Fractional power of a big magnitude: (2^6000)^(1/3) = 2^2000.
        let big = Wide::from_log2_polar(6000.0, 0.0);
        assert!((big.powf(1.0 / 3.0).log2_abs() - 2000.0).abs() < 1e-8);
    }

    #[test]
    fn powu_matches_powf_on_positive_reals() {
        let x = Wide::new(1.7, 0.0);
        assert!(Wide::rel_diff(x.powu(5), x.powf(5.0)) < 1e-13);
    }

    #[test]
    fn cancellation_produces_zero() {
        let a = Wide::new(3.0, 4.0);
        assert!((a - a).is_zero());
        assert_eq!((a - a).log2_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn rel_diff_scales() {
        let a = Wide::from_log2_polar(-5000.0, 0.1);
        let b = a.scale(1.0 + 1e-10);
        assert!(Wide::rel_diff(a, b) < 2e-10);
        assert!(Wide::rel_diff(a, a.scale(2.0)) > 0.4);
    }
}
