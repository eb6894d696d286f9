//! Inner regions (coded systematic coding, layered digital coding, a
//! separate-coding baseline) and outer-bound membership tests for sending a
//! uniform binary source with Hamming distortion over a binary symmetric
//! broadcast channel, with and without decoder side information.

use crate::channel::{bbc_member_raw, BinaryBcSpec, SideInfoSpec};
use crate::info_math::{bconv_raw, h2_inv_raw, h2_raw, h4_raw};
use crate::region::{lower_hull, pareto_reduce, DistortionPoint, Frontier, RegionError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BinaryError {
    #[error("this scheme is defined for exactly two receivers")]
    UnsupportedUsers,
    #[error("coded systematic coding needs bandwidth factor b >= 1")]
    UnsupportedBandwidth,
    #[error("outer-bound search supports at most four receivers")]
    TooManyReceivers,
    #[error("parameter {0} outside its allowed range")]
    ParamRange(f64),
    #[error("side information crossover must lie in [0, 1/2] and be degraded-ordered")]
    InvalidSideInfo,
    #[error("point has {got} coordinates, spec has {want} receivers")]
    DimensionMismatch { got: usize, want: usize },
    #[error("distortions must lie in [0, 1/2]")]
    DistortionRange,
    #[error(transparent)]
    Region(#[from] RegionError),
}

fn check_point(point: &DistortionPoint, users: usize) -> Result<(), BinaryError> {
    if point.dim() != users {
        return Err(BinaryError::DimensionMismatch { got: point.dim(), want: users });
    }
    if point.d.iter().any(|d| !(0.0..=0.5).contains(d)) {
        return Err(BinaryError::DistortionRange);
    }
    Ok(())
}

fn validate_side_info(spec: &BinaryBcSpec, si: &SideInfoSpec) -> Result<(), BinaryError> {
    if si.users() != spec.users() {
        return Err(BinaryError::DimensionMismatch { got: si.users(), want: spec.users() });
    }
    if si.beta().iter().any(|b| !(0.0..=0.5).contains(b)) {
        return Err(BinaryError::InvalidSideInfo);
    }
    Ok(())
}

/// Per-receiver point-to-point optimum `D*_k = H2^{-1}(max(0, 1 - b(1 - H2(p_k))))`.
pub fn trivial_point(spec: &BinaryBcSpec) -> DistortionPoint {
    let d = spec
        .crossover()
        .iter()
        .map(|p| h2_inv_raw((1.0 - spec.bandwidth() * (1.0 - h2_raw(*p))).max(0.0)))
        .collect();
    DistortionPoint::new(d)
}

/// Parameters of the coded-systematic scheme: quantization noises `θ` (for
/// the parity uses) and `d1` (the coarse layer), and the fine distortion
/// target `d2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CscParams {
    pub theta: f64,
    pub d1: f64,
    pub d2: f64,
}

impl CscParams {
    pub fn new(theta: f64, d1: f64, d2: f64) -> Result<Self, BinaryError> {
        for v in [theta, d1, d2] {
            if !(v.is_finite() && (0.0..=0.5).contains(&v)) {
                return Err(BinaryError::ParamRange(v));
            }
        }
        Ok(Self { theta, d1, d2 })
    }
}

/// Evaluates one coded-systematic operating point. Returns the achieved
/// `(D_1, D_2)` when the two rate constraints hold, `None` otherwise.
pub fn csc_feasible(
    params: CscParams,
    spec: &BinaryBcSpec,
) -> Result<Option<DistortionPoint>, BinaryError> {
    if spec.users() != 2 {
        return Err(BinaryError::UnsupportedUsers);
    }
    let b = spec.bandwidth();
    if b < 1.0 {
        return Err(BinaryError::UnsupportedBandwidth);
    }
    let (p1, p2) = (spec.crossover()[0], spec.crossover()[1]);
    let CscParams { theta, d1, d2 } = params;
    let r1 = 1.0 - h2_raw(bconv_raw(d1, p1)) + (b - 1.0) * (1.0 - h2_raw(bconv_raw(theta, p1)));
    let r2 = h2_raw(bconv_raw(d1, p2)) - h2_raw(p2)
        + (b - 1.0) * (h2_raw(bconv_raw(theta, p2)) - h2_raw(p2));
    let ok = 1.0 - h2_raw(bconv_raw(d1, d2)) <= r1 && 1.0 - h2_raw(d2) <= r1 + r2;
    if !ok {
        return Ok(None);
    }
    let big_d1 = bconv_raw(d1, d2).min(bconv_raw(p1, d2));
    Ok(Some(DistortionPoint::pair(big_d1, d2)))
}

// density samples of [0, 1/2), left endpoint included.
fn half_grid_exclusive(density: usize) -> Vec<f64> {
    (0..density.max(1)).map(|i| 0.5 * i as f64 / density.max(1) as f64).collect()
}

// density samples of [lo, hi], both endpoints included.
fn grid_inclusive(lo: f64, hi: f64, density: usize) -> Vec<f64> {
    if density <= 1 {
        return vec![lo];
    }
    (0..density).map(|i| lo + (hi - lo) * i as f64 / (density - 1) as f64).collect()
}

/// Sweeps `(θ, d1, d2)` over a uniform grid of `[0, 1/2)³`, collects the
/// feasible coded-systematic points, and closes them under timesharing
/// (lower convex hull).
pub fn csc_inner_frontier(spec: &BinaryBcSpec, density: usize) -> Result<Frontier, BinaryError> {
    if spec.users() != 2 {
        return Err(BinaryError::UnsupportedUsers);
    }
    let b = spec.bandwidth();
    let (p1, p2) = (spec.crossover()[0], spec.crossover()[1]);
    let grid = half_grid_exclusive(density);
    // hoist the entropy terms that do not involve d2
    let h2p2 = h2_raw(p2);
    let theta_terms: Vec<(f64, f64)> = grid
        .iter()
        .map(|&t| {
            (
                (b - 1.0) * (1.0 - h2_raw(bconv_raw(t, p1))),
                (b - 1.0) * (h2_raw(bconv_raw(t, p2)) - h2p2),
            )
        })
        .collect();
    let d1_terms: Vec<(f64, f64)> = grid
        .iter()
        .map(|&d1| (1.0 - h2_raw(bconv_raw(d1, p1)), h2_raw(bconv_raw(d1, p2)) - h2p2))
        .collect();
    let h2_d2: Vec<f64> = grid.iter().map(|&d2| h2_raw(d2)).collect();

    let mut cloud = Vec::new();
    for &(t1, t2) in &theta_terms {
        for (di, &d1) in grid.iter().enumerate() {
            let r1 = d1_terms[di].0 + t1;
            let r12 = r1 + d1_terms[di].1 + t2;
            for (fi, &d2) in grid.iter().enumerate() {
                if 1.0 - h2_raw(bconv_raw(d1, d2)) <= r1 && 1.0 - h2_d2[fi] <= r12 {
                    cloud.push(DistortionPoint::pair(
                        bconv_raw(d1, d2).min(bconv_raw(p1, d2)),
                        d2,
                    ));
                }
            }
        }
    }
    if cloud.is_empty() {
        return Ok(Frontier::empty("csc-inner"));
    }
    Ok(lower_hull(&cloud)?.with_label("csc-inner"))
}

/// Nonincreasing chain `1/2 >= τ_1 >= ... >= τ_{K-1} >= 0`; the implicit
/// endpoints are `τ_0 = 1/2` and `τ_K = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinTauChain(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct BinOuterVerdict {
    pub member: bool,
    pub worst_tau: BinTauChain,
    pub max_excess: f64,
}

fn for_each_chain(per_axis: usize, interior: usize, mut f: impl FnMut(&[f64])) {
    let values = grid_inclusive(0.0, 0.5, per_axis.max(2));
    let mut chain = vec![0.0; interior + 2];
    chain[0] = 0.5;
    fn recurse(
        values: &[f64],
        chain: &mut Vec<f64>,
        depth: usize,
        interior: usize,
        max_idx: usize,
        f: &mut impl FnMut(&[f64]),
    ) {
        if depth == interior + 1 {
            f(chain);
            return;
        }
        for idx in (0..=max_idx).rev() {
            chain[depth] = values[idx];
            recurse(values, chain, depth + 1, interior, idx, f);
        }
    }
    if interior == 0 {
        f(&chain);
    } else {
        recurse(&values, &mut chain, 1, interior, values.len() - 1, &mut f);
    }
}

fn bin_outer_per_axis(tau_grid: usize, users: usize) -> usize {
    if users <= 2 {
        tau_grid.max(2)
    } else {
        (tau_grid as f64).powf(1.0 / (users - 1) as f64).round().max(2.0) as usize
    }
}

/// Outer-bound membership: inside iff for every tau chain the rates
/// `R_k = (1/b)(H2(τ_{k-1} ⋆ D_k) - H2(τ_k ⋆ D_k))` lie in the binary
/// broadcast capacity region.
pub fn outer_member(
    point: &DistortionPoint,
    spec: &BinaryBcSpec,
    tau_grid: usize,
) -> Result<BinOuterVerdict, BinaryError> {
    let k = spec.users();
    check_point(point, k)?;
    if k > 4 {
        return Err(BinaryError::TooManyReceivers);
    }
    let b = spec.bandwidth();
    let mut rates = vec![0.0; k];
    let mut member = true;
    let mut max_excess = 0.0_f64;
    let mut worst: Vec<f64> = Vec::new();
    for_each_chain(bin_outer_per_axis(tau_grid, k), k - 1, |chain| {
        for i in 0..k {
            let r = (h2_raw(bconv_raw(chain[i], point.d[i]))
                - h2_raw(bconv_raw(chain[i + 1], point.d[i])))
                / b;
            rates[i] = r.max(0.0);
        }
        let v = bbc_member_raw(&rates, spec);
        if worst.is_empty() || v.excess > max_excess {
            max_excess = v.excess;
            worst = chain[1..k].to_vec();
        }
        member &= v.member;
    });
    Ok(BinOuterVerdict { member, worst_tau: BinTauChain(worst), max_excess })
}

/// Layered digital coding parameters: per-layer description probabilities
/// `q_i`, test-channel noises `α_i`, and the superposition split `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdcParams {
    pub q1: f64,
    pub q2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub theta: f64,
}

impl LdcParams {
    pub fn new(q1: f64, q2: f64, alpha1: f64, alpha2: f64, theta: f64) -> Result<Self, BinaryError> {
        let range_ok = (0.0..=1.0).contains(&q1)
            && (0.0..=1.0).contains(&q2)
            && (0.0..=0.5).contains(&alpha1)
            && (0.0..=0.5).contains(&alpha2)
            && (0.0..=0.5).contains(&theta);
        if !range_ok || q1 > q2 || alpha2 > alpha1 {
            return Err(BinaryError::ParamRange(q1));
        }
        Ok(Self { q1, q2, alpha1, alpha2, theta })
    }
}

// Wyner-Ziv test-channel rate H2(alpha ⋆ beta) - H2(alpha).
fn wz_rate(alpha: f64, beta: f64) -> f64 {
    h2_raw(bconv_raw(alpha, beta)) - h2_raw(alpha)
}

/// Evaluates one layered-digital-coding parameter tuple against its four
/// rate constraints; returns the achieved distortions when feasible.
pub fn ldc_point(
    params: LdcParams,
    spec: &BinaryBcSpec,
    si: &SideInfoSpec,
) -> Result<Option<DistortionPoint>, BinaryError> {
    if spec.users() != 2 {
        return Err(BinaryError::UnsupportedUsers);
    }
    validate_side_info(spec, si)?;
    let b = spec.bandwidth();
    let (p1, p2) = (spec.crossover()[0], spec.crossover()[1]);
    let (b1, b2) = (si.beta()[0], si.beta()[1]);
    let LdcParams { q1, q2, alpha1, alpha2, theta } = params;
    let r11 = q1 * wz_rate(alpha1, b1);
    let r12 = q1 * wz_rate(alpha1, b2);
    let r22 = q2 * wz_rate(alpha2, b2);
    let c1 = b * (1.0 - h2_raw(bconv_raw(theta, p1)));
    let c2 = b * (1.0 - h2_raw(bconv_raw(theta, p2)));
    let c3 = b * (1.0 - h2_raw(p2));
    let c4 = c1 + b * (h2_raw(bconv_raw(theta, p2)) - h2_raw(p2));
    let ok = r11 <= c1 && r12 <= c2 && r22 <= c3 && r11 + (r22 - r12) <= c4;
    if !ok {
        return Ok(None);
    }
    let d1 = q1 * alpha1.min(b1) + (1.0 - q1) * b1;
    let d2 = q2 * alpha2.min(b2) + (1.0 - q2) * b2;
    Ok(Some(DistortionPoint::pair(d1, d2)))
}

/// Sweeps the layered-digital-coding parameters over a constrained grid
/// (`q1 <= q2`, `alpha2 <= alpha1`) and Pareto-reduces the achieved
/// distortion pairs.
pub fn ldc_inner_frontier(
    spec: &BinaryBcSpec,
    si: &SideInfoSpec,
    density: usize,
) -> Result<Frontier, BinaryError> {
    if spec.users() != 2 {
        return Err(BinaryError::UnsupportedUsers);
    }
    validate_side_info(spec, si)?;
    let b = spec.bandwidth();
    let (p1, p2) = (spec.crossover()[0], spec.crossover()[1]);
    let (b1, b2) = (si.beta()[0], si.beta()[1]);
    let qs = grid_inclusive(0.0, 1.0, density);
    let alphas = grid_inclusive(0.0, 0.5, density);
    let thetas = grid_inclusive(0.0, 0.5, density);
    let rates1: Vec<f64> = alphas.iter().map(|&a| wz_rate(a, b1)).collect();
    let rates2: Vec<f64> = alphas.iter().map(|&a| wz_rate(a, b2)).collect();
    // D_1 depends on (q1, alpha1) only and D_2 on (q2, alpha2) only, so the
    // sweep tracks the minimal D_2 per (q1, alpha1) cell instead of
    // materializing the full feasible cloud.
    let mut best_d2 = vec![f64::INFINITY; qs.len() * alphas.len()];
    for &theta in &thetas {
        let c1 = b * (1.0 - h2_raw(bconv_raw(theta, p1)));
        let c2 = b * (1.0 - h2_raw(bconv_raw(theta, p2)));
        let c3 = b * (1.0 - h2_raw(p2));
        let c4 = c1 + b * (h2_raw(bconv_raw(theta, p2)) - h2_raw(p2));
        for (i1, &q1) in qs.iter().enumerate() {
            for a1 in 0..alphas.len() {
                let r11 = q1 * rates1[a1];
                let r12 = q1 * rates2[a1];
                if r11 > c1 || r12 > c2 {
                    continue;
                }
                let cell = i1 * alphas.len() + a1;
                for &q2 in &qs[i1..] {
                    for (a2, &alpha2) in alphas.iter().enumerate().take(a1 + 1) {
                        let r22 = q2 * rates2[a2];
                        if r22 > c3 || r11 + (r22 - r12) > c4 {
                            continue;
                        }
                        let d2 = q2 * alpha2.min(b2) + (1.0 - q2) * b2;
                        if d2 < best_d2[cell] {
                            best_d2[cell] = d2;
                        }
                    }
                }
            }
        }
    }
    let mut cloud = Vec::new();
    for (i1, &q1) in qs.iter().enumerate() {
        for (a1, &alpha1) in alphas.iter().enumerate() {
            let d2 = best_d2[i1 * alphas.len() + a1];
            if d2.is_finite() {
                let d1 = q1 * alpha1.min(b1) + (1.0 - q1) * b1;
                cloud.push(DistortionPoint::pair(d1, d2));
            }
        }
    }
    if cloud.is_empty() {
        return Err(BinaryError::Region(RegionError::Empty));
    }
    Ok(pareto_reduce(&cloud)?.with_label("ldc-inner"))
}

/// Witness for a Wyner-Ziv outer-bound acceptance: the estimator split
/// `α_k`, effective targets `D'_k = min(D_k, β_k)`, and weights
/// `η_k = (β_k - D'_k)/(β_k - α_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WzAux {
    pub alpha: Vec<f64>,
    pub eta: Vec<f64>,
    pub dprime: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WzOuterVerdict {
    pub member: bool,
    pub witness: Option<WzAux>,
}

/// Wyner-Ziv outer-bound membership: inside iff some `α` grid choice makes
/// every tau chain's rate vector feasible. Negative rate components are
/// clamped to zero (a vacuous information constraint cannot tighten the
/// bound).
pub fn wz_outer_member(
    point: &DistortionPoint,
    spec: &BinaryBcSpec,
    si: &SideInfoSpec,
    alpha_grid: usize,
    tau_grid: usize,
) -> Result<WzOuterVerdict, BinaryError> {
    let k = spec.users();
    check_point(point, k)?;
    validate_side_info(spec, si)?;
    if k > 4 {
        return Err(BinaryError::TooManyReceivers);
    }
    let b = spec.bandwidth();
    let beta = si.beta();
    let dprime: Vec<f64> = point.d.iter().zip(beta).map(|(d, bb)| d.min(*bb)).collect();
    let tau_axis = bin_outer_per_axis(tau_grid, k);
    let tau_values = grid_inclusive(0.0, 0.5, tau_axis.max(2));

    // phi_k(tau) = H2(beta_k ⋆ tau) - H4(alpha_k, beta_k, tau); the rate for
    // user k over a chain step is (eta_k/b) (phi_k(tau_k) - phi_k(tau_{k-1})).
    let alpha_axes: Vec<Vec<f64>> =
        dprime.iter().map(|dp| grid_inclusive(0.0, *dp, alpha_grid.max(1))).collect();

    let mut alpha_idx = vec![0usize; k];
    let mut rates = vec![0.0; k];
    loop {
        let alpha: Vec<f64> = alpha_idx.iter().zip(&alpha_axes).map(|(i, ax)| ax[*i]).collect();
        let eta: Vec<f64> = alpha
            .iter()
            .zip(beta)
            .zip(&dprime)
            .map(|((a, bb), dp)| if a < bb { (bb - dp) / (bb - a) } else { 0.0 })
            .collect();
        let phi: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                tau_values
                    .iter()
                    .map(|&t| h2_raw(bconv_raw(beta[i], t)) - h4_raw(alpha[i], beta[i], t))
                    .collect()
            })
            .collect();
        let phi_at = |i: usize, tau: f64| -> f64 {
            // chains are drawn from tau_values; position lookup is exact
            let idx = tau_values.iter().position(|t| *t == tau).expect("grid value");
            phi[i][idx]
        };
        let mut all_ok = true;
        for_each_chain(tau_axis, k - 1, |chain| {
            if !all_ok {
                return;
            }
            for i in 0..k {
                let r = eta[i] * (phi_at(i, chain[i + 1]) - phi_at(i, chain[i])) / b;
                rates[i] = r.max(0.0);
            }
            if !bbc_member_raw(&rates, spec).member {
                all_ok = false;
            }
        });
        if all_ok {
            return Ok(WzOuterVerdict {
                member: true,
                witness: Some(WzAux { alpha, eta, dprime }),
            });
        }
        // odometer over the alpha grid
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(WzOuterVerdict { member: false, witness: None });
            }
            alpha_idx[pos] += 1;
            if alpha_idx[pos] < alpha_axes[pos].len() {
                break;
            }
            alpha_idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Separate source/channel baseline: successive-refinement rates
/// `R_1 = (1/b)(1 - H2(D_1))`, `R_2 = (1/b)(H2(D_1) - H2(D_2))` fed into the
/// binary capacity region; sweeps `D_1` and bisects the minimal feasible
/// `D_2`.
pub fn separate_frontier(spec: &BinaryBcSpec, density: usize) -> Result<Frontier, BinaryError> {
    if spec.users() != 2 {
        return Err(BinaryError::UnsupportedUsers);
    }
    let b = spec.bandwidth();
    let d1_star = trivial_point(spec).d[0];
    let feasible = |d1: f64, d2: f64| -> bool {
        let r1 = (1.0 - h2_raw(d1)) / b;
        let r2 = (h2_raw(d1) - h2_raw(d2)).max(0.0) / b;
        bbc_member_raw(&[r1, r2], spec).member
    };
    let mut cloud = Vec::new();
    for d1 in grid_inclusive(d1_star, 0.5, density.max(2)) {
        if !feasible(d1, d1) {
            continue;
        }
        let (mut lo, mut hi) = (0.0, d1);
        if feasible(d1, 0.0) {
            cloud.push(DistortionPoint::pair(d1, 0.0));
            continue;
        }
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if feasible(d1, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        cloud.push(DistortionPoint::pair(d1, hi));
    }
    if cloud.is_empty() {
        return Err(BinaryError::Region(RegionError::Empty));
    }
    Ok(pareto_reduce(&cloud)?.with_label("separate"))
}

/// Binary Wyner-Ziv rate-distortion function for side-information crossover
/// `beta`: the lower convex envelope, on `d ∈ [0, beta]`, of
/// `g(d) = H2(d ⋆ beta) - H2(d)` joined with the zero-rate point
/// `(beta, 0)`.
#[derive(Debug, Clone)]
pub struct WzEnvelope {
    xs: Vec<f64>,
    ys: Vec<f64>,
    beta: f64,
}

impl WzEnvelope {
    const GRID: usize = 10_000;

    pub fn new(beta: f64) -> Result<Self, BinaryError> {
        if !(0.0..=0.5).contains(&beta) {
            return Err(BinaryError::ParamRange(beta));
        }
        if beta == 0.0 {
            return Ok(Self { xs: vec![0.0], ys: vec![0.0], beta });
        }
        let n = Self::GRID;
        let mut pts: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let d = beta * i as f64 / n as f64;
                (d, wz_rate(d, beta))
            })
            .collect();
        pts.push((beta, 0.0));
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
        // keep the lowest point at each abscissa, then take the lower hull
        pts.dedup_by(|next, kept| next.0 == kept.0);
        let (mut xs, mut ys): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
        for (x, y) in pts {
            while xs.len() >= 2 {
                let m = xs.len();
                let cross = (xs[m - 1] - xs[m - 2]) * (y - ys[m - 2])
                    - (ys[m - 1] - ys[m - 2]) * (x - xs[m - 2]);
                if cross <= 0.0 {
                    xs.pop();
                    ys.pop();
                } else {
                    break;
                }
            }
            xs.push(x);
            ys.push(y);
        }
        Ok(Self { xs, ys, beta })
    }

    /// Envelope value at distortion `d` (clamped to `[0, beta]`).
    pub fn rate(&self, d: f64) -> f64 {
        let d = d.clamp(0.0, self.beta);
        if self.xs.len() == 1 {
            return 0.0;
        }
        let mut lo = 0;
        let mut hi = self.xs.len() - 1;
        if d >= self.xs[hi] {
            return self.ys[hi];
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= d {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if d == self.xs[lo] {
            return self.ys[lo];
        }
        self.ys[lo] + (self.ys[hi] - self.ys[lo]) * (d - self.xs[lo]) / (self.xs[hi] - self.xs[lo])
    }

    /// Minimal distortion whose envelope rate is at most `budget`, by
    /// bisection on the nonincreasing envelope.
    pub fn inverse(&self, budget: f64) -> f64 {
        if budget <= 0.0 {
            return self.beta;
        }
        if budget >= self.rate(0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, self.beta);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.rate(mid) <= budget {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Per-receiver Wyner-Ziv optimum: the inverse of the Wyner-Ziv
/// rate-distortion envelope at rate budget `b (1 - H2(p_k))`.
pub fn wz_trivial_point(
    spec: &BinaryBcSpec,
    si: &SideInfoSpec,
) -> Result<DistortionPoint, BinaryError> {
    validate_side_info(spec, si)?;
    let d = spec
        .crossover()
        .iter()
        .zip(si.beta())
        .map(|(p, beta)| {
            let budget = spec.bandwidth() * (1.0 - h2_raw(*p));
            WzEnvelope::new(*beta).map(|e| e.inverse(budget))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(DistortionPoint::new(d))
}
