//! Phase-transition experiments for random-coding covering and packing at
//! rates near the mutual-information threshold.
//!
//! Codebooks of `2^{ceil(n r)}` sequences are never materialized. For the
//! i.i.d. single-layer configuration, the per-trial probability that one
//! random codeword is jointly typical with the drawn sequence factorizes
//! into binomial band probabilities (binary codeword alphabet), so the
//! chance that *some* codeword hits is exact: `1 - (1 - q)^M`. Each trial
//! draws the source side fresh and a Bernoulli outcome with that success
//! probability, which is distributionally identical to materializing the
//! codebook.

use super::HybridError;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Joint pmf of the covered pair `(S, V)`; `V` must be binary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairPmf {
    pub joint: Vec<Vec<f64>>,
}

impl PairPmf {
    pub fn new(joint: Vec<Vec<f64>>) -> Result<Self, HybridError> {
        let total: f64 = joint.iter().flatten().sum();
        if (total - 1.0).abs() > 1e-9 || joint.iter().flatten().any(|p| *p < 0.0) {
            return Err(HybridError::NotNormalized(total));
        }
        if joint.is_empty() || joint.iter().any(|r| r.len() != 2) {
            return Err(HybridError::Shape("pair pmf must be |S| x 2".into()));
        }
        Ok(Self { joint })
    }

    fn s_marginal(&self) -> Vec<f64> {
        self.joint.iter().map(|r| r[0] + r[1]).collect()
    }

    fn v_marginal_one(&self) -> f64 {
        self.joint.iter().map(|r| r[1]).sum()
    }
}

/// Joint pmf of `(U, V_0, V)` for packing; `V` must be binary. Codewords are
/// drawn from `p(v | v_0)` per symbol, independently of `U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriplePmf {
    pub joint: Vec<Vec<Vec<f64>>>,
}

impl TriplePmf {
    pub fn new(joint: Vec<Vec<Vec<f64>>>) -> Result<Self, HybridError> {
        let total: f64 = joint.iter().flatten().flatten().sum();
        if (total - 1.0).abs() > 1e-9 || joint.iter().flatten().flatten().any(|p| *p < 0.0) {
            return Err(HybridError::NotNormalized(total));
        }
        if joint.is_empty() || joint.iter().any(|u| u.iter().any(|r| r.len() != 2)) {
            return Err(HybridError::Shape("triple pmf must be |U| x |V0| x 2".into()));
        }
        Ok(Self { joint })
    }

    fn uv0_marginal(&self) -> Vec<Vec<f64>> {
        self.joint
            .iter()
            .map(|u| u.iter().map(|r| r[0] + r[1]).collect())
            .collect()
    }

    // p(V = 1 | v_0)
    fn v_given_v0(&self) -> Vec<f64> {
        let nv0 = self.joint[0].len();
        (0..nv0)
            .map(|b| {
                let mass1: f64 = self.joint.iter().map(|u| u[b][1]).sum();
                let mass: f64 = self.joint.iter().map(|u| u[b][0] + u[b][1]).sum();
                if mass > 0.0 {
                    mass1 / mass
                } else {
                    0.0
                }
            })
            .collect()
    }
}

// ln k! table up to n.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    for k in 1..=n {
        table[k] = table[k - 1] + (k as f64).ln();
    }
    table
}

// P(Binomial(n, p) in [lo, hi]) computed exactly in log space.
fn binom_band(lnf: &[f64], n: usize, p: f64, lo: i64, hi: i64) -> f64 {
    let lo = lo.max(0) as usize;
    let hi = hi.min(n as i64);
    if hi < lo as i64 {
        return 0.0;
    }
    let hi = hi as usize;
    if p <= 0.0 {
        return if lo == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if hi == n { 1.0 } else { 0.0 };
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut total = 0.0;
    for k in lo..=hi {
        let ln_term = lnf[n] - lnf[k] - lnf[n - k] + k as f64 * lp + (n - k) as f64 * lq;
        total += ln_term.exp();
    }
    total.min(1.0)
}

// Integer count band [ceil(n(p - eps p)), floor(n(p + eps p))] for one joint
// cell of probability `cell`, intersected for the complementary cell.
fn count_band(n: usize, cell1: f64, cell0: f64, group: usize, eps: f64) -> (i64, i64) {
    let nf = n as f64;
    // cell with v = 1: count k in [n p1 (1-eps), n p1 (1+eps)]
    let lo1 = nf * cell1 * (1.0 - eps);
    let hi1 = nf * cell1 * (1.0 + eps);
    // cell with v = 0: group - k in [n p0 (1-eps), n p0 (1+eps)]
    let lo0 = group as f64 - nf * cell0 * (1.0 + eps);
    let hi0 = group as f64 - nf * cell0 * (1.0 - eps);
    let lo = lo1.max(lo0);
    let hi = hi1.min(hi0);
    (((lo - 1e-9).ceil()) as i64, ((hi + 1e-9).floor()) as i64)
}

fn codebook_size(n: usize, rate: f64) -> f64 {
    let bits = (n as f64 * rate - 1e-9).ceil().max(0.0);
    (2.0_f64).powf(bits)
}

// 1 - (1 - q)^M in a numerically safe way.
fn hit_probability(q: f64, m: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    if q >= 1.0 {
        return 1.0;
    }
    // ln(1 - q) via ln_1p: q can sit far below f64 epsilon while m q is huge
    let ln_miss = m * (-q).ln_1p();
    1.0 - ln_miss.exp()
}

fn sample_categorical(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Frequency over seeded trials that some of the `2^{ceil(n rate)}`
/// codewords, drawn i.i.d. from the `V` marginal, is jointly `eps`-typical
/// with a fresh source sequence drawn from the pair's `S` marginal.
pub fn covering_experiment(
    rate: f64,
    n: usize,
    trials: usize,
    seed: u64,
    eps: f64,
    pair: &PairPmf,
) -> f64 {
    let lnf = ln_factorials(n);
    let s_marginal = pair.s_marginal();
    let pv1 = pair.v_marginal_one();
    let m = codebook_size(n, rate);
    let hits: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            // group sizes n_a = #{i : s_i = a}
            let mut groups = vec![0usize; s_marginal.len()];
            for _ in 0..n {
                groups[sample_categorical(&s_marginal, &mut rng)] += 1;
            }
            // typicality factorizes across source symbols: within group a the
            // count of v = 1 must land in an integer band, independently
            let mut q = 1.0;
            for (a, &na) in groups.iter().enumerate() {
                let (lo, hi) = count_band(n, pair.joint[a][1], pair.joint[a][0], na, eps);
                q *= binom_band(&lnf, na, pv1, lo, hi);
                if q == 0.0 {
                    break;
                }
            }
            let success = rng.gen::<f64>() < hit_probability(q, m);
            u64::from(success)
        })
        .sum();
    hits as f64 / trials.max(1) as f64
}

/// Frequency over seeded trials that some independently drawn codeword
/// (i.i.d. from `p(v | v_0)` given the drawn `v_0` sequence) is jointly
/// `eps`-typical with an independently drawn `(U, V_0)` pair.
pub fn packing_experiment(
    rate: f64,
    n: usize,
    trials: usize,
    seed: u64,
    eps: f64,
    triple: &TriplePmf,
) -> f64 {
    let lnf = ln_factorials(n);
    let uv0 = triple.uv0_marginal();
    let nv0 = triple.joint[0].len();
    let v_cond = triple.v_given_v0();
    let flat_uv0: Vec<f64> = uv0.iter().flatten().copied().collect();
    let m = codebook_size(n, rate);
    let hits: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let mut groups = vec![0usize; flat_uv0.len()];
            for _ in 0..n {
                groups[sample_categorical(&flat_uv0, &mut rng)] += 1;
            }
            let mut q = 1.0;
            for (cell, &cnt) in groups.iter().enumerate() {
                let (a, b) = (cell / nv0, cell % nv0);
                let (lo, hi) =
                    count_band(n, triple.joint[a][b][1], triple.joint[a][b][0], cnt, eps);
                q *= binom_band(&lnf, cnt, v_cond[b], lo, hi);
                if q == 0.0 {
                    break;
                }
            }
            let collision = rng.gen::<f64>() < hit_probability(q, m);
            u64::from(collision)
        })
        .sum();
    hits as f64 / trials.max(1) as f64
}

/// Pair pmf of a uniform binary source and `V = S ⊕ Bern(q)`.
pub fn bsc_pair(q: f64) -> PairPmf {
    PairPmf::new(vec![
        vec![(1.0 - q) / 2.0, q / 2.0],
        vec![q / 2.0, (1.0 - q) / 2.0],
    ])
    .expect("normalized by construction")
}

/// Triple pmf with trivial `V_0` mirroring [`bsc_pair`]: the typicality
/// target is the correlated `(U, V = U ⊕ Bern(q))` joint, while codewords
/// are drawn from the independent `V` marginal. The collision threshold is
/// the same mutual information as the covering pair.
pub fn bsc_triple(q: f64) -> TriplePmf {
    let pair = bsc_pair(q);
    let joint = pair.joint.iter().map(|row| vec![row.clone()]).collect();
    TriplePmf::new(joint).expect("normalized by construction")
}

/// On-disk JSON description of a lemma experiment: `kind` is `covering` or
/// `packing`, `rates` the ladder to sweep.
#[derive(Debug, Clone, Deserialize)]
pub struct LemmaConfigFile {
    pub kind: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub eps: f64,
    pub rates: Vec<f64>,
    pub pair: Option<Vec<Vec<f64>>>,
    pub triple: Option<Vec<Vec<Vec<f64>>>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info_math::h2_raw;

    #[test]
    fn covering_phase_transition() {
        let pair = bsc_pair(0.25);
        let info = 1.0 - h2_raw(0.25);
        let above = covering_experiment(info + 0.15, 300, 200, 1, 0.1, &pair);
        let below = covering_experiment((info - 0.15).max(0.02), 300, 200, 1, 0.1, &pair);
        assert!(above >= 0.9, "above-threshold success {above}");
        assert!(below <= 0.1, "below-threshold success {below}");
    }

    #[test]
    fn covering_single_codeword_large_eps() {
        // one codeword, independent V with matching marginal, loose slack
        let independent = PairPmf::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let f = covering_experiment(0.0, 400, 200, 5, 0.5, &independent);
        assert!(f >= 0.9, "single-sequence typicality frequency {f}");
    }

    #[test]
    fn covering_monotone_in_rate() {
        let pair = bsc_pair(0.25);
        let info = 1.0 - h2_raw(0.25);
        let ladder: Vec<f64> = (0..5).map(|i| (info - 0.2 + 0.1 * i as f64).max(0.01)).collect();
        let mut prev = -1.0;
        for r in ladder {
            let f = covering_experiment(r, 200, 80, 13, 0.12, &pair);
            assert!(f >= prev, "frequency dropped from {prev} to {f} at rate {r}");
            prev = f;
        }
    }

    #[test]
    fn packing_phase_transition() {
        let triple = bsc_triple(0.25);
        let info = 1.0 - h2_raw(0.25);
        let above = packing_experiment(info + 0.15, 300, 200, 1, 0.1, &triple);
        let below = packing_experiment((info - 0.15).max(0.02), 300, 200, 1, 0.1, &triple);
        assert!(above >= 0.9, "above-threshold collision {above}");
        assert!(below <= 0.1, "below-threshold collision {below}");
    }

    #[test]
    fn packing_degenerate_n1() {
        let triple = bsc_triple(0.25);
        let f = packing_experiment(0.5, 1, 50, 3, 0.5, &triple);
        assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn binomial_band_sanity() {
        let lnf = ln_factorials(20);
        // whole support sums to one
        let all = binom_band(&lnf, 20, 0.3, 0, 20);
        assert!((all - 1.0).abs() < 1e-12);
        let none = binom_band(&lnf, 20, 0.3, 8, 4);
        assert_eq!(none, 0.0);
        let zero_p = binom_band(&lnf, 20, 0.0, 0, 0);
        assert_eq!(zero_p, 1.0);
    }
}
