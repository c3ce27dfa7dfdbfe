//! Families of pairwise-disjoint subsets of ℕ with positive lower density,
//! pairwise gaps, and far separation, together with finite-horizon
//! density/separation certificates.
//!
//! All sets are strictly increasing `Vec<i64>` of positive integers; all
//! separation assertions are exact integer comparisons. Density estimates and
//! gap certificates are finite-horizon scans, never asymptotic claims.

use std::collections::BTreeMap;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KappaEntry {
    pub kappa: i64,
    /// True when some scanned pair reaches past κ, so the certificate has
    /// content at this horizon (false = the scan ran out of data first).
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct DensityFamily {
    /// Gap parameters a(p) (zero = gap condition vacuous for that set).
    pub a: Vec<f64>,
    pub sets: Vec<Vec<i64>>,
    pub horizon: i64,
    pub burn_in: i64,
    /// C → κ: every cross-set pair with max(n,n′) ≥ κ has |n−n′| ≥ C.
    pub kappa_table: BTreeMap<i64, KappaEntry>,
    /// Empirical lower densities, one per set, over [burn_in, horizon].
    pub densities: Vec<f64>,
}

pub fn default_burn_in(horizon: i64) -> i64 {
    (horizon / 100).max(100).min(horizon / 2).max(1)
}

/// Split E into two disjoint positive-density subsets by alternating index
/// runs: with u_k = k, v_k = ⌊√k⌋ and M_1 = 1, N_k = M_k+u_k, P_k = N_k+v_k,
/// Q_k = P_k+u_k, M_{k+1} = Q_k+v_k, take A = {n_j : j ∈ ∪[M_k,N_k)} and
/// B = {n_j : j ∈ ∪[P_k,Q_k)} (1-based indices into E).
pub fn split_two(e: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let len = e.len() as i64;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut m_k = 1i64;
    let mut k = 1i64;
    while m_k <= len {
        let u = k;
        let v = (k as f64).sqrt().floor() as i64;
        let n_k = m_k + u;
        let p_k = n_k + v;
        let q_k = p_k + u;
        for j in m_k..n_k.min(len + 1) {
            a.push(e[(j - 1) as usize]);
        }
        for j in p_k..q_k.min(len + 1) {
            b.push(e[(j - 1) as usize]);
        }
        m_k = q_k + v;
        k += 1;
    }
    (a, b)
}

/// Keep every `step`-th element (1-based): {n_step, n_2step, …}. Gaps and the
/// minimum scale with `step`; density drops by the same factor.
pub fn thin_separate(a: &[i64], step: i64) -> Vec<i64> {
    assert!(step >= 1, "thin step must be ≥ 1");
    a.iter()
        .skip((step - 1) as usize)
        .step_by(step as usize)
        .copied()
        .collect()
}

/// min (lower) or max (upper) over N ∈ [burn_in, horizon] of card(A∩[1,N])/N.
/// Exact: ratios are extremal just before the next element (lower) or at an
/// element (upper), plus the window endpoints.
pub fn density_estimate(a: &[i64], horizon: i64, burn_in: i64, mode: DensityMode) -> f64 {
    assert!(burn_in < horizon, "burn_in must be < horizon");
    let burn_in = burn_in.max(1);
    let in_range: Vec<i64> = a.iter().copied().filter(|&n| n >= 1 && n <= horizon).collect();
    let count_at = |n: i64| -> usize { in_range.partition_point(|&x| x <= n) };
    let ratio = |n: i64| -> f64 { count_at(n) as f64 / n as f64 };
    let mut best = ratio(burn_in);
    match mode {
        DensityMode::Lower => {
            // Candidates: N just before each element past burn_in, and N = horizon.
            for &x in &in_range {
                let n = x - 1;
                if n >= burn_in && n <= horizon {
                    best = best.min(ratio(n));
                }
            }
            best = best.min(ratio(horizon));
        }
        DensityMode::Upper => {
            for &x in &in_range {
                if x >= burn_in && x <= horizon {
                    best = best.max(ratio(x));
                }
            }
            best = best.max(ratio(horizon));
        }
    }
    best
}

/// Exact scan for the far-separation certificate: the smallest κ such that
/// every pair (n, n′) from different sets with max(n, n′) ≥ κ has
/// |n−n′| ≥ C. For each ordered pair of sets and each n, only the largest
/// n′ ≤ n in the other set needs checking (any closer n′ shares the same max).
pub fn scan_kappa(sets: &[Vec<i64>], c: i64) -> KappaEntry {
    let mut worst = 0i64; // max(n,n′) of the latest violating pair
    for (i, si) in sets.iter().enumerate() {
        for (j, sj) in sets.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut ptr = 0usize;
            for &n in si {
                while ptr < sj.len() && sj[ptr] <= n {
                    ptr += 1;
                }
                if ptr > 0 && n - sj[ptr - 1] < c {
                    worst = worst.max(n);
                }
            }
        }
    }
    let kappa = worst + 1;
    let max_elem = sets.iter().filter_map(|s| s.last()).max().copied().unwrap_or(0);
    KappaEntry { kappa, certified: kappa <= max_elem }
}

fn default_kappa_cs() -> Vec<i64> {
    vec![1, 2, 4, 8, 10, 16, 32, 64, 100, 128]
}

fn scan_kappa_table(sets: &[Vec<i64>]) -> BTreeMap<i64, KappaEntry> {
    default_kappa_cs().into_iter().map(|c| (c, scan_kappa(sets, c))).collect()
}

fn min_gap(a: &[i64]) -> Option<i64> {
    a.windows(2).map(|w| w[1] - w[0]).min()
}

/// Build `count` pairwise-disjoint positive-density subsets of [1, horizon]
/// with the far-separation property, by double induction: split ℕ, then
/// repeatedly thin the reservoir (to force self-gaps ≥ r+1) and split again.
pub fn build_family_far(count: usize, horizon: i64) -> Result<DensityFamily> {
    if count < 1 {
        return Err(Error::InvalidParameter("need count ≥ 1".into()));
    }
    if horizon < 4 {
        return Err(Error::InvalidParameter("horizon too small".into()));
    }
    let naturals: Vec<i64> = (1..=horizon).collect();
    let mut sets: Vec<Vec<i64>> = Vec::new();
    if count == 1 {
        sets.push(naturals);
    } else {
        let (a1, mut reservoir) = split_two(&naturals);
        sets.push(a1);
        for r in 2..=count {
            let e = thin_separate(&reservoir, r as i64);
            let (a_r, b_r) = split_two(&e);
            sets.push(a_r);
            reservoir = b_r;
        }
    }
    if sets.iter().any(|s| s.len() < 2) {
        return Err(Error::HorizonExhausted(format!(
            "horizon {horizon} too small to realize {count} sets non-trivially"
        )));
    }
    let burn_in = default_burn_in(horizon);
    let densities: Vec<f64> =
        sets.iter().map(|s| density_estimate(s, horizon, burn_in, DensityMode::Lower)).collect();
    let kappa_table = scan_kappa_table(&sets);
    Ok(DensityFamily { a: vec![0.0; count], sets, horizon, burn_in, kappa_table, densities })
}

fn blow_up(set: &[i64], radius: i64, horizon: i64) -> Vec<(i64, i64)> {
    // Closed intervals [n−radius, n+radius] clamped to [1, horizon], merged.
    let mut out: Vec<(i64, i64)> = Vec::new();
    for &n in set {
        let lo = (n - radius).max(1);
        let hi = (n + radius).min(horizon);
        if hi < lo {
            continue;
        }
        match out.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// True iff the mass actually removed from `pivot` by the blown-up intervals
/// stays under `bound` at every n ∈ [1, horizon]: the running ratio
/// card(pivot ∩ blowup ∩ [1,n])/n peaks exactly at removal hits.
fn removed_mass_ok(pivot: &[i64], intervals: &[(i64, i64)], bound: f64) -> bool {
    let mut hits = 0usize;
    let mut ptr = 0usize;
    for &n in pivot {
        while ptr < intervals.len() && intervals[ptr].1 < n {
            ptr += 1;
        }
        if ptr < intervals.len() && intervals[ptr].0 <= n {
            hits += 1;
            if hits as f64 / n as f64 >= bound {
                return false;
            }
        }
    }
    true
}

fn remove_intervals(pivot: &[i64], intervals: &[(i64, i64)]) -> Vec<i64> {
    let mut out = Vec::with_capacity(pivot.len());
    let mut ptr = 0usize;
    for &n in pivot {
        while ptr < intervals.len() && intervals[ptr].1 < n {
            ptr += 1;
        }
        if !(ptr < intervals.len() && intervals[ptr].0 <= n) {
            out.push(n);
        }
    }
    out
}

/// Add the pairwise-gap property to a far family: first force self-gaps
/// ≥ 2a(p) and min ≥ a(p) by thinning, then, pivoting on each set in turn,
/// thin the later sets until the mass their gap-neighborhoods remove from the
/// pivot stays below δ·2^{−(position)} (δ = the pivot's empirical lower
/// density), and prune the pivot by those neighborhoods.
pub fn enforce_pairwise_gap(fam: &DensityFamily, a: &[f64]) -> Result<DensityFamily> {
    let count = fam.sets.len();
    if a.len() != count {
        return Err(Error::InvalidParameter("gap sequence length must match set count".into()));
    }
    if a.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidParameter("gap parameters must be finite and ≥ 0".into()));
    }
    let horizon = fam.horizon;
    let burn_in = fam.burn_in;
    let mut work: Vec<Vec<i64>> = Vec::with_capacity(count);

    // Stage 1: per-set separation (the p = q case) via thinning.
    for (p, set) in fam.sets.iter().enumerate() {
        if a[p] == 0.0 {
            work.push(set.clone());
            continue;
        }
        let need_gap = 2.0 * a[p];
        let base_gap = min_gap(set).unwrap_or(1).max(1);
        let mut t = ((need_gap / base_gap as f64).ceil() as i64).max(1);
        loop {
            let cand = thin_separate(set, t);
            if cand.len() < 2 {
                return Err(Error::HorizonExhausted(format!(
                    "set {} exhausted while forcing self-gap ≥ {need_gap}",
                    p + 1
                )));
            }
            let ok = min_gap(&cand).unwrap() as f64 >= need_gap && cand[0] as f64 >= a[p];
            if ok {
                work.push(cand);
                break;
            }
            t += 1;
        }
    }

    // Stage 2: successive pivots add the cross-set gaps.
    for r in 0..count.saturating_sub(1) {
        let delta = density_estimate(&work[r], horizon, burn_in, DensityMode::Lower);
        if delta <= 0.0 {
            return Err(Error::SearchFailed(format!(
                "cannot certify positive density at horizon: pivot set {} estimates 0",
                r + 1
            )));
        }
        let mut blowups: Vec<(i64, i64)> = Vec::new();
        for q in (r + 1)..count {
            let g = a[r] + a[q];
            if g == 0.0 {
                continue; // gap requirement vacuous — no removal needed
            }
            let radius = g.floor() as i64;
            let bound = delta / 2f64.powi((q - r + 1) as i32);
            let mut t = 1i64;
            loop {
                let cand = if t == 1 { work[q].clone() } else { thin_separate(&work[q], t) };
                if cand.len() < 2 {
                    return Err(Error::SearchFailed(format!(
                        "cannot certify positive density at horizon: set {} exhausted by \
                         thinning against pivot {}",
                        q + 1,
                        r + 1
                    )));
                }
                let intervals = blow_up(&cand, radius, horizon);
                if removed_mass_ok(&work[r], &intervals, bound) {
                    work[q] = cand;
                    blowups.extend(intervals);
                    break;
                }
                t *= 2; // smallest power of two meeting the mass bound
            }
        }
        blowups.sort_unstable();
        let merged = merge_intervals(&blowups);
        work[r] = remove_intervals(&work[r], &merged);
    }

    // Exact exhaustive re-assertion of the gap property.
    for p in 0..count {
        if let Some(g) = min_gap(&work[p]) {
            assert!(g as f64 >= 2.0 * a[p], "self-gap violated for set {}", p + 1);
        }
        assert!(work[p].first().map_or(true, |&n| n as f64 >= a[p]));
        for q in (p + 1)..count {
            let need = a[p] + a[q];
            assert!(
                cross_min_gap(&work[p], &work[q]).map_or(true, |g| g as f64 >= need),
                "cross gap violated for sets {} and {}",
                p + 1,
                q + 1
            );
        }
    }

    let densities: Vec<f64> = work
        .iter()
        .map(|s| density_estimate(s, horizon, burn_in, DensityMode::Lower))
        .collect();
    if let Some(p) = densities.iter().position(|&d| d <= 0.0) {
        return Err(Error::SearchFailed(format!(
            "cannot certify positive density at horizon: set {} estimates 0 after gap removal",
            p + 1
        )));
    }
    let kappa_table = scan_kappa_table(&work);
    Ok(DensityFamily {
        a: a.to_vec(),
        sets: work,
        horizon,
        burn_in,
        kappa_table,
        densities,
    })
}

fn merge_intervals(sorted: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = Vec::new();
    for &(lo, hi) in sorted {
        match out.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Smallest |n−n′| over pairs from two disjoint sorted sets.
pub fn cross_min_gap(a: &[i64], b: &[i64]) -> Option<i64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let mut best = i64::MAX;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        best = best.min((a[i] - b[j]).abs());
        if a[i] < b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    Some(best)
}

/// Escalating separation thresholds from the far-separation certificates:
/// M_1 = 1 and M_{k+1} = the scanned κ for C = M_k, pushed up so the
/// differences M_{k+1} − M_k are positive and non-decreasing (larger κ keeps
/// the certificate valid). Errors when the scan runs out of horizon.
pub fn compute_mk(fam: &DensityFamily, k_max: usize) -> Result<Vec<i64>> {
    if k_max < 1 {
        return Err(Error::InvalidParameter("need k_max ≥ 1".into()));
    }
    let mut ms = vec![1i64];
    while ms.len() < k_max {
        let c = *ms.last().unwrap();
        let entry = scan_kappa(&fam.sets, c);
        let prev_diff = if ms.len() >= 2 { ms[ms.len() - 1] - ms[ms.len() - 2] } else { 1 };
        let next = entry.kappa.max(ms.last().unwrap() + prev_diff.max(1));
        if !entry.certified && entry.kappa > fam.horizon {
            return Err(Error::HorizonExhausted(format!(
                "separation scan for C = {c} exhausts horizon {} at k = {}",
                fam.horizon,
                ms.len() + 1
            )));
        }
        if next > fam.horizon {
            return Err(Error::HorizonExhausted(format!(
                "M_{} = {next} exceeds horizon {}",
                ms.len() + 1,
                fam.horizon
            )));
        }
        ms.push(next);
    }
    Ok(ms)
}

#[derive(Clone, Debug)]
pub struct FamilyCheckReport {
    pub disjoint: bool,
    pub min_ok: bool,
    pub self_gap_ok: bool,
    pub cross_gap_ok: bool,
    /// Worst cross pair (value p, value q, set p, set q) if any gap fails.
    pub worst_cross: Option<(i64, i64, usize, usize)>,
    /// (C, κ, certified, holds-on-rescan).
    pub kappa_checks: Vec<(i64, i64, bool, bool)>,
    pub densities: Vec<f64>,
    pub pass: bool,
}

/// Re-verify every recorded property of a family from scratch.
pub fn verify_family(fam: &DensityFamily) -> FamilyCheckReport {
    let count = fam.sets.len();
    let mut all: Vec<i64> = fam.sets.iter().flatten().copied().collect();
    let total = all.len();
    all.sort_unstable();
    all.dedup();
    let disjoint = all.len() == total;

    let mut min_ok = true;
    let mut self_gap_ok = true;
    for (p, set) in fam.sets.iter().enumerate() {
        let a_p = fam.a.get(p).copied().unwrap_or(0.0);
        if set.first().map_or(false, |&n| (n as f64) < a_p) {
            min_ok = false;
        }
        if let Some(g) = min_gap(set) {
            if (g as f64) < 2.0 * a_p {
                self_gap_ok = false;
            }
        }
    }

    let mut cross_gap_ok = true;
    let mut worst_cross = None;
    for p in 0..count {
        for q in (p + 1)..count {
            let need = fam.a.get(p).copied().unwrap_or(0.0) + fam.a.get(q).copied().unwrap_or(0.0);
            if let Some(g) = cross_min_gap(&fam.sets[p], &fam.sets[q]) {
                if (g as f64) < need {
                    cross_gap_ok = false;
                    if worst_cross.is_none() {
                        worst_cross = Some((g, need as i64, p + 1, q + 1));
                    }
                }
            }
        }
    }

    let mut kappa_checks = Vec::new();
    for (&c, entry) in &fam.kappa_table {
        let rescan = scan_kappa(&fam.sets, c);
        // The recorded κ holds iff no violation occurs at or past it.
        let holds = rescan.kappa <= entry.kappa;
        kappa_checks.push((c, entry.kappa, entry.certified, holds));
    }

    let densities: Vec<f64> = fam
        .sets
        .iter()
        .map(|s| density_estimate(s, fam.horizon, fam.burn_in, DensityMode::Lower))
        .collect();

    let pass = disjoint
        && min_ok
        && self_gap_ok
        && cross_gap_ok
        && kappa_checks.iter().all(|&(_, _, _, h)| h)
        && densities.iter().all(|&d| d > 0.0);
    FamilyCheckReport {
        disjoint,
        min_ok,
        self_gap_ok,
        cross_gap_ok,
        worst_cross,
        kappa_checks,
        densities,
        pass,
    }
}
