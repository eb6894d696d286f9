//! Inner and outer bounds on the distortion region for sending a Gaussian
//! source with quadratic distortion over a power-constrained Gaussian
//! broadcast channel (two-receiver closed-form inner bound, K-receiver
//! outer bound), with and without decoder side information.

use crate::channel::{gbc_member_raw, GaussianBcSpec, SideInfoSpec};
use crate::region::{pareto_reduce, DistortionPoint, Frontier, RegionError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("the closed-form inner bound is defined for exactly two receivers")]
    UnsupportedUsers,
    #[error("the closed-form inner bound excludes matched bandwidth (b = 1); use the uncoded point")]
    UnsupportedBandwidth,
    #[error("outer-bound search supports at most four receivers")]
    TooManyReceivers,
    #[error("parameter {0} outside [0, 1]")]
    ParamRange(f64),
    #[error("side information must satisfy 0 < beta_k <= source variance")]
    InvalidSideInfo,
    #[error("point has {got} coordinates, spec has {want} receivers")]
    DimensionMismatch { got: usize, want: usize },
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// Power-split parameters of the two-receiver hybrid inner bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianInnerParams {
    lambda: f64,
    gamma: f64,
}

impl GaussianInnerParams {
    pub fn new(lambda: f64, gamma: f64) -> Result<Self, GaussianError> {
        for v in [lambda, gamma] {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(GaussianError::ParamRange(v));
            }
        }
        Ok(Self { lambda, gamma })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Nonincreasing auxiliary-noise chain `τ_1 >= ... >= τ_{K-1} >= 0` used by
/// the outer bound; the implicit endpoints are `τ_0 = +∞` and `τ_K = 0`.
/// Entries may be `f64::INFINITY` (the analytic limit).
#[derive(Debug, Clone, PartialEq)]
pub struct TauChain(pub Vec<f64>);

/// Verdict of an outer-bound membership sweep. When `member` is false,
/// `worst_tau` is the chain with the most negative capacity slack.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterVerdict {
    pub member: bool,
    pub worst_tau: TauChain,
    pub min_slack: f64,
}

/// Per-receiver point-to-point optimum `D*_k = N_S / (1 + P/N_k)^b`.
pub fn trivial_point(spec: &GaussianBcSpec) -> DistortionPoint {
    let d = (0..spec.users())
        .map(|k| spec.source_var() / (1.0 + spec.power() / spec.noise()[k]).powf(spec.bandwidth()))
        .collect();
    DistortionPoint::new(d)
}

/// Distortion pair achieved by the two-receiver hybrid scheme at the given
/// power split. Defined for `b != 1`; matched bandwidth is served by the
/// uncoded point `D_k = N_S N_k / (P + N_k)` instead.
pub fn inner_point(
    params: GaussianInnerParams,
    spec: &GaussianBcSpec,
) -> Result<DistortionPoint, GaussianError> {
    if spec.users() != 2 {
        return Err(GaussianError::UnsupportedUsers);
    }
    let b = spec.bandwidth();
    if b == 1.0 {
        return Err(GaussianError::UnsupportedBandwidth);
    }
    let (l, g) = (params.lambda, params.gamma);
    let p = spec.power();
    let ns = spec.source_var();
    let (n1, n2) = (spec.noise()[0], spec.noise()[1]);
    let point = if b < 1.0 {
        let analog_gain = (l * p + n1) / (l * g * p + n1);
        let digital_base = (p + n1) / (l * p + n1);
        let e = b / (1.0 - b);
        let d1 = b * ns / analog_gain + (1.0 - b) * ns / digital_base.powf(e);
        let d2 = b * ns / analog_gain
            + (1.0 - b) * ns / (digital_base * (l * g * p + n2) / n2).powf(e);
        DistortionPoint::pair(d1, d2)
    } else {
        // surplus-bandwidth power per use for the digital layers
        let pe = b * (1.0 - g) * p / (b - 1.0);
        let common = ((pe + n1) / (l * pe + n1)).powf(b - 1.0);
        let d1 = ns / (common * (b * g * p + n1) / n1);
        let d2 = ns / (common * ((b * g * p + n2) / n2) * ((l * pe + n2) / n2).powf(b - 1.0));
        DistortionPoint::pair(d1, d2)
    };
    Ok(point)
}

/// Uniform grid in both parameters, 0 and 1 included.
fn unit_grid(density: usize) -> Vec<f64> {
    if density <= 1 {
        return vec![0.0];
    }
    (0..density).map(|i| i as f64 / (density - 1) as f64).collect()
}

/// Sweeps [`inner_point`] over a `density × density` grid of `(λ, γ)` and
/// Pareto-reduces the cloud.
pub fn inner_frontier(spec: &GaussianBcSpec, density: usize) -> Result<Frontier, GaussianError> {
    let grid = unit_grid(density);
    let mut cloud = Vec::with_capacity(grid.len() * grid.len());
    for &l in &grid {
        for &g in &grid {
            cloud.push(inner_point(GaussianInnerParams::new(l, g)?, spec)?);
        }
    }
    Ok(pareto_reduce(&cloud)?.with_label("gaussian-inner"))
}

// log2((sigma + tau) / (d + tau)), with the tau -> infinity limit 0.
fn log_gain(sigma: f64, d: f64, tau: f64) -> f64 {
    if tau.is_infinite() {
        0.0
    } else {
        ((sigma + tau) / (d + tau)).log2()
    }
}

// Sweep values for one tau axis: 0, a log-spaced interior, and the infinite
// limit. The binding tau lies near the geometric means of the distortion and
// source scales, which the log spacing resolves uniformly.
fn tau_values(ns: f64, count: usize) -> Vec<f64> {
    let interior = count.saturating_sub(2).max(1);
    let lo = 1e-9 * ns;
    let hi = 1e6 * ns;
    let ratio = (hi / lo).ln();
    let mut vals = Vec::with_capacity(interior + 2);
    vals.push(0.0);
    for i in 0..interior {
        let t = if interior == 1 { 0.5 } else { i as f64 / (interior - 1) as f64 };
        vals.push(lo * (ratio * t).exp());
    }
    vals.push(f64::INFINITY);
    vals
}

fn outer_member_with(
    sigma: &[f64],
    point: &DistortionPoint,
    spec: &GaussianBcSpec,
    tau_grid: usize,
) -> Result<OuterVerdict, GaussianError> {
    let k = spec.users();
    if point.dim() != k {
        return Err(GaussianError::DimensionMismatch { got: point.dim(), want: k });
    }
    if k > 4 {
        return Err(GaussianError::TooManyReceivers);
    }
    // distortion above the per-receiver variance bound is a vacuous
    // constraint: clamp before rate evaluation
    let d: Vec<f64> = point.d.iter().zip(sigma).map(|(d, s)| d.min(*s)).collect();
    let b = spec.bandwidth();

    let mut rates = vec![0.0; k];
    let mut min_slack = f64::INFINITY;
    let mut worst: Vec<f64> = Vec::new();
    let mut member = true;
    let mut check = |chain: &[f64]| {
        // chain = [tau_0, ..., tau_K]
        for i in 0..k {
            let r = (log_gain(sigma[i], d[i], chain[i + 1]) - log_gain(sigma[i], d[i], chain[i]))
                / (2.0 * b);
            rates[i] = r.max(0.0);
        }
        let verdict = gbc_member_raw(&rates, spec);
        if verdict.slack < min_slack {
            min_slack = verdict.slack;
            worst = chain[1..k].to_vec();
        }
        member &= verdict.member;
    };

    if k == 1 {
        check(&[f64::INFINITY, 0.0]);
    } else {
        let per_axis = if k == 2 {
            tau_grid.max(3)
        } else {
            (tau_grid as f64).powf(1.0 / (k - 1) as f64).round().max(3.0) as usize
        };
        let values = tau_values(spec.source_var(), per_axis);
        let mut chain = vec![0.0; k + 1];
        chain[0] = f64::INFINITY;
        // enumerate nonincreasing interior chains over the value set
        fn recurse(
            values: &[f64],
            chain: &mut Vec<f64>,
            depth: usize,
            k: usize,
            max_idx: usize,
            check: &mut impl FnMut(&[f64]),
        ) {
            if depth == k {
                check(chain);
                return;
            }
            for idx in 0..=max_idx {
                chain[depth] = values[idx];
                recurse(values, chain, depth + 1, k, idx, check);
            }
        }
        recurse(&values, &mut chain, 1, k, values.len() - 1, &mut check);
    }
    Ok(OuterVerdict { member, worst_tau: TauChain(worst), min_slack })
}

/// Outer-bound membership: `point` is inside iff for every tau chain the
/// induced rate vector lies in the Gaussian broadcast capacity region. A
/// finite grid can only over-accept, never over-reject.
pub fn outer_member(
    point: &DistortionPoint,
    spec: &GaussianBcSpec,
    tau_grid: usize,
) -> Result<OuterVerdict, GaussianError> {
    let sigma = vec![spec.source_var(); spec.users()];
    outer_member_with(&sigma, point, spec, tau_grid)
}

fn validate_side_info(spec: &GaussianBcSpec, si: &SideInfoSpec) -> Result<(), GaussianError> {
    if si.users() != spec.users() {
        return Err(GaussianError::DimensionMismatch { got: si.users(), want: spec.users() });
    }
    if si.beta().iter().any(|b| *b <= 0.0 || *b > spec.source_var()) {
        return Err(GaussianError::InvalidSideInfo);
    }
    Ok(())
}

/// Per-receiver Wyner-Ziv optimum `D*_k = β_k / (1 + P/N_k)^b`.
pub fn wz_trivial_point(
    spec: &GaussianBcSpec,
    si: &SideInfoSpec,
) -> Result<DistortionPoint, GaussianError> {
    validate_side_info(spec, si)?;
    let d = (0..spec.users())
        .map(|k| si.beta()[k] / (1.0 + spec.power() / spec.noise()[k]).powf(spec.bandwidth()))
        .collect();
    Ok(DistortionPoint::new(d))
}

/// Outer-bound membership with degraded side information: the conditional
/// variance `β_k` replaces the source variance in each receiver's rate.
pub fn wz_outer_member(
    point: &DistortionPoint,
    spec: &GaussianBcSpec,
    si: &SideInfoSpec,
    tau_grid: usize,
) -> Result<OuterVerdict, GaussianError> {
    validate_side_info(spec, si)?;
    outer_member_with(si.beta(), point, spec, tau_grid)
}
