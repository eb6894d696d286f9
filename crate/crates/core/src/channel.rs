//! Problem-instance specifications and capacity-region membership tests for
//! K-user degraded Gaussian and binary broadcast channels.
//!
//! Receivers are indexed `1..=K` with receiver `K` the strongest; rates are
//! in bits per channel use.

use crate::info_math::{bconv_raw, h2_raw};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("power and variances must be positive and finite")]
    InvalidParameter,
    #[error("noise variances must be nonincreasing in the receiver index")]
    NoiseOrdering,
    #[error("crossover probabilities must satisfy 1/2 >= p1 >= ... >= pK >= 0")]
    CrossoverOrdering,
    #[error("side information qualities must be nonincreasing in the receiver index")]
    SideInfoOrdering,
    #[error("at least one receiver is required")]
    Empty,
    #[error("rate vector has {got} entries, spec has {want} receivers")]
    DimensionMismatch { got: usize, want: usize },
    #[error("rates must be nonnegative and finite")]
    InvalidRate,
}

/// Power-constrained Gaussian broadcast channel `Y_k = X + W_k`, with a
/// variance-`source_var` source and `bandwidth` channel uses per source
/// sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBcSpec {
    power: f64,
    noise: Vec<f64>,
    source_var: f64,
    bandwidth: f64,
}

impl GaussianBcSpec {
    pub fn new(power: f64, noise: Vec<f64>, source_var: f64, bandwidth: f64) -> Result<Self, SpecError> {
        if noise.is_empty() {
            return Err(SpecError::Empty);
        }
        let ok = power > 0.0
            && power.is_finite()
            && source_var > 0.0
            && source_var.is_finite()
            && bandwidth > 0.0
            && bandwidth.is_finite()
            && noise.iter().all(|n| *n > 0.0 && n.is_finite());
        if !ok {
            return Err(SpecError::InvalidParameter);
        }
        if noise.windows(2).any(|w| w[0] < w[1]) {
            return Err(SpecError::NoiseOrdering);
        }
        Ok(Self { power, noise, source_var, bandwidth })
    }

    pub fn users(&self) -> usize {
        self.noise.len()
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    pub fn source_var(&self) -> f64 {
        self.source_var
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Point-to-point capacity of receiver `k` (0-based), in bits/use.
    pub fn single_user_capacity(&self, k: usize) -> f64 {
        0.5 * (1.0 + self.power / self.noise[k]).log2()
    }
}

/// Binary symmetric broadcast channel `Y_k = X ⊕ W_k` with crossover
/// probabilities `1/2 >= p_1 >= ... >= p_K >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryBcSpec {
    crossover: Vec<f64>,
    bandwidth: f64,
}

impl BinaryBcSpec {
    pub fn new(crossover: Vec<f64>, bandwidth: f64) -> Result<Self, SpecError> {
        if crossover.is_empty() {
            return Err(SpecError::Empty);
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(SpecError::InvalidParameter);
        }
        let in_range = crossover.iter().all(|p| (0.0..=0.5).contains(p));
        if !in_range || crossover.windows(2).any(|w| w[0] < w[1]) {
            return Err(SpecError::CrossoverOrdering);
        }
        Ok(Self { crossover, bandwidth })
    }

    pub fn users(&self) -> usize {
        self.crossover.len()
    }

    pub fn crossover(&self) -> &[f64] {
        &self.crossover
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Point-to-point capacity `1 - H2(p_k)` of receiver `k` (0-based).
    pub fn single_user_capacity(&self, k: usize) -> f64 {
        1.0 - h2_raw(self.crossover[k])
    }
}

/// Per-receiver side-information quality `β_1 >= β_2 >= ... >= β_K`:
/// residual variances for the Gaussian problem, crossover probabilities for
/// the binary one.
#[derive(Debug, Clone, PartialEq)]
pub struct SideInfoSpec {
    beta: Vec<f64>,
}

impl SideInfoSpec {
    pub fn new(beta: Vec<f64>) -> Result<Self, SpecError> {
        if beta.is_empty() {
            return Err(SpecError::Empty);
        }
        if beta.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(SpecError::InvalidParameter);
        }
        if beta.windows(2).any(|w| w[0] < w[1]) {
            return Err(SpecError::SideInfoOrdering);
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn users(&self) -> usize {
        self.beta.len()
    }
}

/// A vector of nonnegative per-receiver rates in bits/channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    rates: Vec<f64>,
}

impl RateVector {
    pub fn new(rates: Vec<f64>) -> Result<Self, SpecError> {
        if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(SpecError::InvalidRate);
        }
        Ok(Self { rates })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }
}

/// Verdict of a Gaussian capacity-region membership test. `slack` is the
/// remaining power budget `(P + N_1) - Σ (N_k - N_{k+1}) 2^{2 Σ_{j<=k} R_j}`;
/// negative slack means the rates are outside the region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbcVerdict {
    pub member: bool,
    pub slack: f64,
}

/// Verdict of a binary capacity-region membership test. `theta` is the full
/// greedy witness chain `θ_0 >= θ_1 >= ... >= θ_K = 0` when feasible;
/// `excess` is the largest amount by which a required entropy target
/// exceeded 1 bit (0 when feasible).
#[derive(Debug, Clone, PartialEq)]
pub struct BbcVerdict {
    pub member: bool,
    pub theta: Option<Vec<f64>>,
    pub excess: f64,
}

pub(crate) fn gbc_member_raw(rates: &[f64], spec: &GaussianBcSpec) -> GbcVerdict {
    let k = spec.users();
    let budget = spec.power + spec.noise[0];
    let mut lhs = 0.0;
    let mut cum = 0.0;
    for j in 0..k {
        cum += rates[j];
        let next = if j + 1 < k { spec.noise[j + 1] } else { 0.0 };
        lhs += (spec.noise[j] - next) * (2.0_f64).powf(2.0 * cum);
    }
    let slack = budget - lhs;
    GbcVerdict { member: slack >= -1e-9 * budget, slack }
}

/// Membership of `rates` in the Gaussian broadcast capacity region
/// `Σ_k (N_k - N_{k+1}) 2^{2 Σ_{j<=k} R_j} <= P + N_1` (with `N_{K+1} = 0`).
pub fn gbc_member(rates: &RateVector, spec: &GaussianBcSpec) -> Result<GbcVerdict, SpecError> {
    if rates.rates.len() != spec.users() {
        return Err(SpecError::DimensionMismatch { got: rates.rates.len(), want: spec.users() });
    }
    Ok(gbc_member_raw(&rates.rates, spec))
}

const BBC_TOL: f64 = 1e-10;

// Minimal theta >= lo with h2(theta ⋆ p) >= target, by bisection on the
// increasing map theta -> h2(theta ⋆ p). Returns None when even theta = 1/2
// falls short.
fn min_theta(lo: f64, p: f64, target: f64) -> Option<f64> {
    if h2_raw(bconv_raw(lo, p)) >= target {
        return Some(lo);
    }
    if target > 1.0 + BBC_TOL {
        return None;
    }
    let (mut a, mut b) = (lo, 0.5);
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        if h2_raw(bconv_raw(mid, p)) >= target {
            b = mid;
        } else {
            a = mid;
        }
    }
    Some(b)
}

pub(crate) fn bbc_member_raw(rates: &[f64], spec: &BinaryBcSpec) -> BbcVerdict {
    let k = spec.users();
    let p = &spec.crossover;
    // Greedy minimal-theta chain built upward from theta_K = 0: lowering
    // theta_{k-1} only loosens the constraint at index k-1, so the minimal
    // chain is feasible iff any chain is.
    let mut chain = vec![0.0; k + 1];
    let mut excess: f64 = 0.0;
    let mut theta = 0.0;
    for i in (0..k).rev() {
        let target = rates[i] + h2_raw(bconv_raw(theta, p[i]));
        match min_theta(theta, p[i], target) {
            Some(t) => theta = t,
            None => {
                excess = excess.max(target - 1.0);
                theta = 0.5;
            }
        }
        chain[i] = theta;
    }
    let member = excess <= BBC_TOL;
    BbcVerdict { member, theta: member.then_some(chain), excess }
}

/// Membership of `rates` in the binary broadcast capacity region: feasible
/// iff some chain `1/2 = θ_0 >= θ_1 >= ... >= θ_K = 0` satisfies
/// `R_k <= H2(θ_{k-1} ⋆ p_k) - H2(θ_k ⋆ p_k)` for every `k`.
pub fn bbc_member(rates: &RateVector, spec: &BinaryBcSpec) -> Result<BbcVerdict, SpecError> {
    if rates.rates.len() != spec.users() {
        return Err(SpecError::DimensionMismatch { got: rates.rates.len(), want: spec.users() });
    }
    Ok(bbc_member_raw(&rates.rates, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info_math::h2_inv_raw;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn fig_gauss() -> GaussianBcSpec {
        GaussianBcSpec::new(50.0, vec![10.0, 1.0], 1.0, 2.0).unwrap()
    }

    fn fig_binary() -> BinaryBcSpec {
        BinaryBcSpec::new(vec![0.18, 0.12], 2.0).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(GaussianBcSpec::new(50.0, vec![1.0, 10.0], 1.0, 2.0).is_err());
        assert!(GaussianBcSpec::new(-1.0, vec![10.0, 1.0], 1.0, 2.0).is_err());
        assert!(GaussianBcSpec::new(50.0, vec![], 1.0, 2.0).is_err());
        assert!(BinaryBcSpec::new(vec![0.12, 0.18], 1.0).is_err());
        assert!(BinaryBcSpec::new(vec![0.6, 0.1], 1.0).is_err());
        assert!(SideInfoSpec::new(vec![0.1, 0.2]).is_err());
        assert!(RateVector::new(vec![0.1, -0.2]).is_err());
    }

    #[test]
    fn gbc_zero_rates_slack_is_power() {
        let spec = fig_gauss();
        let v = gbc_member(&RateVector::new(vec![0.0, 0.0]).unwrap(), &spec).unwrap();
        assert!(v.member);
        assert_abs_diff_eq!(v.slack, 50.0, epsilon = 1e-12);
    }

    #[test]
    fn gbc_boundary_and_outside() {
        let spec = fig_gauss();
        // single-user rate at capacity: 10 * 2^{2 R1} = 60
        let r1 = 0.5 * 6.0_f64.log2();
        let v = gbc_member(&RateVector::new(vec![r1, 0.0]).unwrap(), &spec).unwrap();
        assert!(v.member);
        assert_abs_diff_eq!(v.slack, 0.0, epsilon = 1e-9);
        // 9 * 2^2.6 + 2^3.8 ≈ 68.5 > 60
        let v = gbc_member(&RateVector::new(vec![1.3, 0.6]).unwrap(), &spec).unwrap();
        assert!(!v.member);
        let lhs = 9.0 * (2.0_f64).powf(2.6) + (2.0_f64).powf(3.8);
        assert_abs_diff_eq!(v.slack, 60.0 - lhs, epsilon = 1e-9);
    }

    #[test]
    fn gbc_single_user_corner_tight_to_1e9() {
        let spec = fig_gauss();
        for k in 0..2 {
            let c = spec.single_user_capacity(k);
            let mut rates = vec![0.0, 0.0];
            rates[k] = c - 1e-9;
            assert!(gbc_member_raw(&rates, &spec).member);
            rates[k] = c + 1e-9;
            assert!(!gbc_member_raw(&rates, &spec).member);
        }
    }

    #[test]
    fn gbc_k1_degenerate() {
        let spec = GaussianBcSpec::new(50.0, vec![10.0], 1.0, 1.0).unwrap();
        let c = spec.single_user_capacity(0);
        assert!(gbc_member_raw(&[c - 1e-6], &spec).member);
        assert!(!gbc_member_raw(&[c + 1e-6], &spec).member);
    }

    #[test]
    fn bbc_zero_rates() {
        let v = bbc_member(&RateVector::new(vec![0.0, 0.0]).unwrap(), &fig_binary()).unwrap();
        assert!(v.member);
        let chain = v.theta.unwrap();
        assert_abs_diff_eq!(chain[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bbc_full_rate_to_strong_user() {
        let spec = fig_binary();
        let r2 = 1.0 - h2_raw(0.12);
        let v = bbc_member(&RateVector::new(vec![0.0, r2]).unwrap(), &spec).unwrap();
        assert!(v.member);
        let chain = v.theta.unwrap();
        // the greedy chain is forced to theta_1 = 1/2 (up to the quadratic
        // flatness of H2 at its maximum), leaving no rate for user 1
        assert_abs_diff_eq!(chain[1], 0.5, epsilon = 1e-6);
        let v = bbc_member(&RateVector::new(vec![1e-3, r2]).unwrap(), &spec).unwrap();
        assert!(!v.member);
    }

    #[test]
    fn bbc_example_infeasible_pair() {
        let spec = fig_binary();
        let v = bbc_member(&RateVector::new(vec![0.2, 0.45]).unwrap(), &spec).unwrap();
        assert!(!v.member);
        // greedy chain oracle: theta_1 solves H2(theta ⋆ 0.12) = 0.45 + H2(0.12)
        let t_conv = h2_inv_raw(0.45 + h2_raw(0.12));
        let theta1 = (t_conv - 0.12) / (1.0 - 0.24);
        assert_abs_diff_eq!(theta1, 0.388, epsilon = 2e-3);
        let cap_left = 1.0 - h2_raw(bconv_raw(theta1, 0.18));
        assert!(cap_left < 0.2 && cap_left > 0.0);
    }

    #[test]
    fn bbc_single_user_corner_tight_to_1e9() {
        let spec = fig_binary();
        for k in 0..2 {
            let c = spec.single_user_capacity(k);
            let mut rates = vec![0.0, 0.0];
            rates[k] = c - 1e-9;
            assert!(bbc_member_raw(&rates, &spec).member);
            rates[k] = c + 1e-9;
            assert!(!bbc_member_raw(&rates, &spec).member);
        }
    }

    #[test]
    fn membership_monotone_under_rate_decrease() {
        let gspec = fig_gauss();
        let bspec = fig_binary();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let r = [rng.gen::<f64>() * 1.6, rng.gen::<f64>() * 1.6];
            let smaller = [r[0] * rng.gen::<f64>(), r[1] * rng.gen::<f64>()];
            if gbc_member_raw(&r, &gspec).member {
                assert!(gbc_member_raw(&smaller, &gspec).member);
            }
            if bbc_member_raw(&r, &bspec).member {
                assert!(bbc_member_raw(&smaller, &bspec).member);
            }
        }
    }

    #[test]
    fn greedy_witness_has_nonnegative_slack() {
        let spec = fig_binary();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut feasible_seen = 0;
        for _ in 0..2000 {
            let r = [rng.gen::<f64>() * 0.5, rng.gen::<f64>() * 0.6];
            let v = bbc_member_raw(&r, &spec);
            if let Some(chain) = v.theta {
                feasible_seen += 1;
                for k in 0..2 {
                    let cap = h2_raw(bconv_raw(chain[k], spec.crossover()[k]))
                        - h2_raw(bconv_raw(chain[k + 1], spec.crossover()[k]));
                    assert!(cap - r[k] >= -1e-9, "slack {} at k={}", cap - r[k], k);
                }
            }
        }
        assert!(feasible_seen > 100);
    }

    #[test]
    fn greedy_three_user_agrees_with_exhaustive_grid() {
        let spec = BinaryBcSpec::new(vec![0.21, 0.12, 0.05], 1.0).unwrap();
        let p = spec.crossover();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let cap = |a: f64, b: f64, pk: f64| h2_raw(bconv_raw(a, pk)) - h2_raw(bconv_raw(b, pk));
        for _ in 0..300 {
            let r = [
                rng.gen::<f64>() * 0.4,
                rng.gen::<f64>() * 0.4,
                rng.gen::<f64>() * 0.6,
            ];
            let v = bbc_member_raw(&r, &spec);
            if let Some(chain) = &v.theta {
                for k in 0..3 {
                    let slack = cap(chain[k], chain[k + 1], p[k]) - r[k];
                    assert!(slack >= -1e-9, "witness slack {slack} at k={k}");
                }
            } else {
                // exhaustive theta_1 >= theta_2 grid finds no witness either
                for i in 0..60 {
                    for j in 0..=i {
                        let t1 = 0.5 * i as f64 / 59.0;
                        let t2 = 0.5 * j as f64 / 59.0;
                        let ok = r[0] <= cap(0.5, t1, p[0]) + 1e-9
                            && r[1] <= cap(t1, t2, p[1]) + 1e-9
                            && r[2] <= cap(t2, 0.0, p[2]) + 1e-9;
                        assert!(!ok, "grid witness ({t1}, {t2}) for declared-infeasible {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_agrees_with_exhaustive_theta_grid() {
        let spec = fig_binary();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut infeasible = 0;
        while infeasible < 1000 {
            let r = [rng.gen::<f64>() * 0.6, rng.gen::<f64>() * 0.8];
            if bbc_member_raw(&r, &spec).member {
                continue;
            }
            infeasible += 1;
            // 50-point exhaustive search over theta_1 must also fail
            for i in 0..50 {
                let theta1 = 0.5 * i as f64 / 49.0;
                let c1 = 1.0 - h2_raw(bconv_raw(theta1, 0.18));
                let c2 = h2_raw(bconv_raw(theta1, 0.12)) - h2_raw(0.12);
                assert!(
                    !(r[0] <= c1 + 1e-12 && r[1] <= c2 + 1e-12),
                    "grid found witness theta_1={} for declared-infeasible {:?}",
                    theta1,
                    r
                );
            }
        }
    }
}
