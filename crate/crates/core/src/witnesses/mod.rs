//! Witness-vector constructions.
//!
//! Each submodule builds the finitely-supported vectors whose shifted powers
//! realize a target: `coordwise` (coordinatewise products, unilateral and
//! bilateral), `cauchy` (convolution products with exact kernel annihilation),
//! `ufhc` (hitting-time families for upper-frequent orbits), `omega` (the
//! product-topology space, where every coordinate regime can be served), and
//! `c0fhc` (the sup-norm pipeline combining the block weight with far-apart
//! index families).
//!
//! Shared across submodules: a deterministic enumeration of dense targets
//! (finite-support vectors with small rational coordinates crossed with power
//! exponents) and principal-branch fractional powers of coefficients.

pub mod c0fhc;
pub mod cauchy;
pub mod coordwise;
pub mod omega;
pub mod ufhc;

pub use c0fhc::{build_c0_fhc, compute_nr, C0Report, NrReport};
pub use cauchy::{
    build_cauchy_witness, choose_shift_amounts, find_jk_candidates, lex_max, prepare_cauchy_witness,
    CauchyWitness, CauchyWitnessSpec,
};
pub use coordwise::{
    build_bilateral_witness, build_coordwise_witness, l_alpha, predicted_coordwise_orbit,
    select_kappa_beta, select_kappa_beta_from, BilateralWitness, CoordWitnessSpec,
};
pub use omega::{
    build_omega_fhc, build_omega_hc_mixed, predicted_mixed_orbit, OmegaFhc, OmegaMixed, Regime,
};
pub use ufhc::{
    build_ufhc_cauchy, build_ufhc_coordwise, check_condition_b, find_tail_threshold, CondBRow,
    UfhcCauchyWitness, UfhcCoordWitness,
};

use crate::scaled::Wide;
use crate::spaces::Seq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Principal-branch fractional power with 0^t = 0 for t > 0.
pub fn frac_pow(v: Wide, t: f64) -> Wide {
    if v.is_zero() {
        Wide::ZERO
    } else {
        v.powf(t)
    }
}

/// Deterministic dense-target enumeration: for p = 1..=count, a pair
/// (v(p), m(p)) with supp v(p) ⊆ [0, p] and m(p) ≥ 1.
///
/// The exponents follow the diagonal pairing (so every (vector index, m)
/// combination appears and m grows slowly: m(1) = m(2) = 1, m(3) = 2, …)
/// and the coordinates are quarter-integer rationals with |Re|, |Im| ≤ 1,
/// drawn from a stream keyed by (seed, vector index, p). Density in the
/// ambient space is only needed in the limit; determinism is what the
/// finite certificates consume.
pub fn dense_targets(seed: u64, count: usize, horizon: i64) -> Vec<(Seq, u32)> {
    let mut out = Vec::with_capacity(count);
    for p in 1..=count {
        // Diagonal pairing of (vector index i, exponent index j), exponent
        // ascending within each diagonal: p−1 = d(d+1)/2 + k, m = k+1, i = d−k.
        let mut d = 0usize;
        let mut rem = p - 1;
        while rem > d {
            rem -= d + 1;
            d += 1;
        }
        let m = (rem + 1) as u32;
        let i = d - rem;
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((p as u64) << 24),
        );
        let mut v = Seq::zero(horizon, false);
        for l in 0..=(p as i64) {
            let re = f64::from(rng.gen_range(-4i32..=4)) / 4.0;
            let im = f64::from(rng.gen_range(-4i32..=4)) / 4.0;
            if re != 0.0 || im != 0.0 {
                v.set(l, Wide::new(re, im));
            }
        }
        out.push((v, m));
    }
    out
}
