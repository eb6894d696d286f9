//! Brute-force evaluation and randomized search of the degraded-broadcast
//! inner bound over small finite alphabets. Serves as an independent check
//! on the closed-form binary bounds: every point it reports is achievable,
//! so it must land inside every outer bound.
//!
//! A candidate is a Markov chain of auxiliary variables
//! `S -> V_K -> V_{K-1} -> ... -> V_1`, a symbol map `x(v_K, s)` and
//! per-receiver estimators `ŝ_k(v_k, y_k)`. It is feasible when
//! `I(S; V_k) <= Σ_{j<=k} I(Y_j; V_j | V_{j-1})` holds for every `k`
//! (with `V_0` constant), and then achieves distortion `E d_k(S, Ŝ_k)`.

use crate::region::{pareto_reduce, DistortionPoint, Frontier, RegionError};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscreteError {
    #[error("pmf does not sum to one (got {0})")]
    NotNormalized(f64),
    #[error("pmf entries must be nonnegative and finite")]
    NegativeMass,
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("alphabet size {0} exceeds the supported cap")]
    AlphabetTooLarge(usize),
    #[error("channels are not stochastically degraded (residual {0:.2e} between users {1} and {2})")]
    NotDegraded(f64, usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("bandwidth factor {0} unsupported; only 1 and 2 are implemented")]
    UnsupportedBandwidth(u32),
    #[error(transparent)]
    Region(#[from] RegionError),
}

const SUM_TOL: f64 = 1e-12;
const BASE_ALPHABET_CAP: usize = 4;
const EXPANDED_ALPHABET_CAP: usize = 16;

/// Probability mass function over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    mass: Vec<f64>,
}

impl Pmf {
    pub fn new(mass: Vec<f64>) -> Result<Self, DiscreteError> {
        if mass.is_empty() {
            return Err(DiscreteError::EmptyAlphabet);
        }
        if mass.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(DiscreteError::NegativeMass);
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(DiscreteError::NotNormalized(total));
        }
        Ok(Self { mass })
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }
}

/// Conditional pmf as a row-stochastic matrix (row = conditioning symbol).
#[derive(Debug, Clone, PartialEq)]
pub struct CondPmf {
    rows: Vec<Vec<f64>>,
}

impl CondPmf {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, DiscreteError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(DiscreteError::EmptyAlphabet);
        }
        let width = rows[0].len();
        for row in &rows {
            if row.len() != width {
                return Err(DiscreteError::Shape("ragged conditional pmf".into()));
            }
            Pmf::new(row.clone())?;
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }
}

/// Mutual information `I(A; B)` in bits of an explicit joint matrix.
/// Zero-mass cells contribute nothing.
pub fn mutual_info(joint: &[Vec<f64>]) -> Result<f64, DiscreteError> {
    let total: f64 = joint.iter().flatten().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(DiscreteError::NotNormalized(total));
    }
    if joint.iter().flatten().any(|p| *p < 0.0) {
        return Err(DiscreteError::NegativeMass);
    }
    let rows = joint.len();
    let cols = joint[0].len();
    let mut pa = vec![0.0; rows];
    let mut pb = vec![0.0; cols];
    for (a, row) in joint.iter().enumerate() {
        for (b, p) in row.iter().enumerate() {
            pa[a] += p;
            pb[b] += p;
        }
    }
    let mut info = 0.0;
    for (a, row) in joint.iter().enumerate() {
        for (b, p) in row.iter().enumerate() {
            if *p > 1e-300 {
                info += p * (p / (pa[a] * pb[b])).log2();
            }
        }
    }
    Ok(info.max(0.0))
}

// I(A; B | C) from an explicit joint p(c, a, b); in bits.
pub(crate) fn cond_mutual_info(joint: &[Vec<Vec<f64>>]) -> f64 {
    let mut info = 0.0;
    for slab in joint {
        let pc: f64 = slab.iter().flatten().sum();
        if pc <= 1e-300 {
            continue;
        }
        let scaled: Vec<Vec<f64>> = slab.iter().map(|r| r.iter().map(|p| p / pc).collect()).collect();
        info += pc * mutual_info(&scaled).expect("conditional slice is normalized");
    }
    info.max(0.0)
}

// Euclidean projection onto the probability simplex.
fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cum += u;
        let t = (cum - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        for x in v.iter_mut() {
            *x /= s;
        }
    }
}

// Finds a row-stochastic T with strong * T ~= weak (rows indexed by the
// channel input), by projected gradient on the convex least-squares
// objective. Returns the max-abs residual of the best fit.
fn degradation_residual(strong: &CondPmf, weak: &CondPmf) -> f64 {
    let nx = strong.inputs();
    let ny_s = strong.outputs();
    let ny_w = weak.outputs();
    let mut t = vec![vec![1.0 / ny_w as f64; ny_w]; ny_s];
    // Lipschitz bound for the gradient: squared Frobenius norm of A
    let lip: f64 = strong.rows().iter().flatten().map(|a| a * a).sum::<f64>().max(1e-12);
    let step = 1.0 / lip;
    let mut residual = f64::INFINITY;
    for _ in 0..200_000 {
        // r = A t - B, grad = A^T r
        let mut grad = vec![vec![0.0; ny_w]; ny_s];
        let mut max_abs: f64 = 0.0;
        for x in 0..nx {
            for yw in 0..ny_w {
                let mut r = -weak.rows()[x][yw];
                for ys in 0..ny_s {
                    r += strong.rows()[x][ys] * t[ys][yw];
                }
                max_abs = max_abs.max(r.abs());
                for ys in 0..ny_s {
                    grad[ys][yw] += strong.rows()[x][ys] * r;
                }
            }
        }
        if max_abs < residual {
            residual = max_abs;
        }
        if residual < 1e-11 {
            break;
        }
        for (row, grow) in t.iter_mut().zip(&grad) {
            for (x, g) in row.iter_mut().zip(grow) {
                *x -= step * g;
            }
            project_simplex(row);
        }
    }
    residual
}

/// A degraded broadcast problem instance over small finite alphabets:
/// source pmf, per-receiver channels `p(y_k | x)` forming a degraded chain
/// (receiver K strongest), per-receiver distortion tables `d_k(s, ŝ)`, and
/// auxiliary alphabet sizes `|V_k|`.
#[derive(Debug, Clone)]
pub struct DbcInstance {
    source: Pmf,
    channels: Vec<CondPmf>,
    distortion: Vec<Vec<Vec<f64>>>,
    v_sizes: Vec<usize>,
}

impl DbcInstance {
    pub fn new(
        source: Pmf,
        channels: Vec<CondPmf>,
        distortion: Vec<Vec<Vec<f64>>>,
        v_sizes: Vec<usize>,
    ) -> Result<Self, DiscreteError> {
        Self::build(source, channels, distortion, v_sizes, BASE_ALPHABET_CAP)
    }

    fn build(
        source: Pmf,
        channels: Vec<CondPmf>,
        distortion: Vec<Vec<Vec<f64>>>,
        v_sizes: Vec<usize>,
        cap: usize,
    ) -> Result<Self, DiscreteError> {
        let k = channels.len();
        if k == 0 || distortion.len() != k || v_sizes.len() != k {
            return Err(DiscreteError::Shape(
                "channels, distortion tables, and V sizes must agree on the receiver count".into(),
            ));
        }
        let nx = channels[0].inputs();
        for ch in &channels {
            if ch.inputs() != nx {
                return Err(DiscreteError::Shape("channels disagree on the input alphabet".into()));
            }
        }
        for size in [source.len(), nx]
            .into_iter()
            .chain(channels.iter().map(|c| c.outputs()))
            .chain(v_sizes.iter().copied())
        {
            if size == 0 {
                return Err(DiscreteError::EmptyAlphabet);
            }
            if size > cap {
                return Err(DiscreteError::AlphabetTooLarge(size));
            }
        }
        for (kk, table) in distortion.iter().enumerate() {
            if table.len() != source.len() {
                return Err(DiscreteError::Shape(format!("distortion table {kk} rows != |S|")));
            }
            let shat = table[0].len();
            if table.iter().any(|r| r.len() != shat)
                || table.iter().flatten().any(|d| !(d.is_finite() && *d >= 0.0))
            {
                return Err(DiscreteError::Shape(format!("distortion table {kk} malformed")));
            }
        }
        // receiver k must be a stochastic degradation of receiver k+1
        for kk in 0..k.saturating_sub(1) {
            let res = degradation_residual(&channels[kk + 1], &channels[kk]);
            if res > 1e-9 {
                return Err(DiscreteError::NotDegraded(res, kk + 1, kk + 2));
            }
        }
        Ok(Self { source, channels, distortion, v_sizes })
    }

    /// Channel-supersymbol extension for integer bandwidth factors: `b = 2`
    /// replaces `X` and each `Y_k` by pairs with product transition law, so
    /// per-source-sample rates absorb the two channel uses. Alphabet
    /// products are capped at 16.
    pub fn with_bandwidth(self, b: u32) -> Result<Self, DiscreteError> {
        match b {
            1 => Ok(self),
            2 => {
                let channels = self
                    .channels
                    .iter()
                    .map(|ch| {
                        let nx = ch.inputs();
                        let ny = ch.outputs();
                        let mut rows = Vec::with_capacity(nx * nx);
                        for x1 in 0..nx {
                            for x2 in 0..nx {
                                let mut row = Vec::with_capacity(ny * ny);
                                for y1 in 0..ny {
                                    for y2 in 0..ny {
                                        row.push(ch.rows()[x1][y1] * ch.rows()[x2][y2]);
                                    }
                                }
                                rows.push(row);
                            }
                        }
                        CondPmf::new(rows)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::build(self.source, channels, self.distortion, self.v_sizes, EXPANDED_ALPHABET_CAP)
            }
            other => Err(DiscreteError::UnsupportedBandwidth(other)),
        }
    }

    pub fn users(&self) -> usize {
        self.channels.len()
    }

    pub fn source(&self) -> &Pmf {
        &self.source
    }

    pub fn channels(&self) -> &[CondPmf] {
        &self.channels
    }

    pub fn v_sizes(&self) -> &[usize] {
        &self.v_sizes
    }

    pub fn input_alphabet(&self) -> usize {
        self.channels[0].inputs()
    }

    pub fn reconstruction_alphabet(&self, k: usize) -> usize {
        self.distortion[k][0].len()
    }
}

/// A candidate coding configuration. `chain[0]` is `p(v_K | s)`; `chain[i]`
/// for `i > 0` is `p(v_{K-i} | v_{K-i+1})`. `x_map` is row-major over
/// `(v_K, s)`; `shat_maps[k]` is row-major over `(v_k, y_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DbcCandidate {
    pub chain: Vec<CondPmf>,
    pub x_map: Vec<usize>,
    pub shat_maps: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateEval {
    pub feasible: bool,
    pub distortion: DistortionPoint,
    /// Per-receiver slack `Σ_{j<=k} I(Y_j; V_j | V_{j-1}) - I(S; V_k)`.
    pub slacks: Vec<f64>,
}

// Feasibility margin mirroring the strict rate inequalities of the region.
const FEAS_MARGIN: f64 = 1e-9;
// Constraints asking for (numerically) zero information are vacuous: with
// nothing to decode, any rate budget suffices. This keeps the zero-rate
// corner and uncoded transmission inside the searched region.
const VACUOUS_INFO: f64 = 1e-12;

/// Evaluates a candidate exactly by enumerating the full joint.
pub fn eval_candidate(cand: &DbcCandidate, inst: &DbcInstance) -> Result<CandidateEval, DiscreteError> {
    let k = inst.users();
    let ns = inst.source.len();
    let nx = inst.input_alphabet();
    if cand.chain.len() != k || cand.shat_maps.len() != k {
        return Err(DiscreteError::Shape("candidate arity mismatch".into()));
    }
    // sizes[j] = |V_{j+1}| in user order 1..K
    let mut sizes = vec![0usize; k];
    sizes[k - 1] = cand.chain[0].outputs();
    for i in 1..k {
        sizes[k - 1 - i] = cand.chain[i].outputs();
    }
    for (j, (want, got)) in inst.v_sizes.iter().zip(&sizes).enumerate() {
        if want != got {
            return Err(DiscreteError::Shape(format!("V_{} size {} != {}", j + 1, got, want)));
        }
    }
    if cand.chain[0].inputs() != ns {
        return Err(DiscreteError::Shape("p(v_K|s) rows != |S|".into()));
    }
    for i in 1..k {
        if cand.chain[i].inputs() != sizes[k - i] {
            return Err(DiscreteError::Shape("chain link input mismatch".into()));
        }
    }
    if cand.x_map.len() != sizes[k - 1] * ns || cand.x_map.iter().any(|x| *x >= nx) {
        return Err(DiscreteError::Shape("x map malformed".into()));
    }
    for (j, map) in cand.shat_maps.iter().enumerate() {
        let ny = inst.channels[j].outputs();
        let nr = inst.reconstruction_alphabet(j);
        if map.len() != sizes[j] * ny || map.iter().any(|s| *s >= nr) {
            return Err(DiscreteError::Shape(format!("estimator map {j} malformed")));
        }
    }

    let joint = chain_joint(&cand.chain, &sizes, inst);
    let v_total: usize = sizes.iter().product();
    let v_of = |vidx: usize, j: usize| -> usize {
        let mut rem = vidx;
        for size in &sizes[..j] {
            rem /= size;
        }
        rem % sizes[j]
    };

    // I(S; V_k) for each receiver
    let mut info_s_vk = vec![0.0; k];
    for j in 0..k {
        let mut m = vec![vec![0.0; sizes[j]]; ns];
        for s in 0..ns {
            for vidx in 0..v_total {
                m[s][v_of(vidx, j)] += joint[s * v_total + vidx];
            }
        }
        info_s_vk[j] = mutual_info(&m)?;
    }

    // I(Y_j; V_j | V_{j-1}) via the joint p(v_{j-1}, v_j, y_j), plus the
    // achieved distortions
    let mut info_y_vj = vec![0.0; k];
    let mut dist = vec![0.0; k];
    for j in 0..k {
        let ny = inst.channels[j].outputs();
        let prev = if j == 0 { 1 } else { sizes[j - 1] };
        let mut tri = vec![vec![vec![0.0; ny]; sizes[j]]; prev];
        for s in 0..ns {
            for vidx in 0..v_total {
                let p = joint[s * v_total + vidx];
                if p <= 0.0 {
                    continue;
                }
                let x = cand.x_map[v_of(vidx, k - 1) * ns + s];
                let vj = v_of(vidx, j);
                let vp = if j == 0 { 0 } else { v_of(vidx, j - 1) };
                for y in 0..ny {
                    let py = inst.channels[j].rows()[x][y];
                    if py <= 0.0 {
                        continue;
                    }
                    tri[vp][vj][y] += p * py;
                    let shat = cand.shat_maps[j][vj * ny + y];
                    dist[j] += p * py * inst.distortion[j][s][shat];
                }
            }
        }
        info_y_vj[j] = cond_mutual_info(&tri);
    }

    let mut feasible = true;
    let mut slacks = vec![0.0; k];
    let mut cum = 0.0;
    for j in 0..k {
        cum += info_y_vj[j];
        slacks[j] = cum - info_s_vk[j];
        if info_s_vk[j] > VACUOUS_INFO && slacks[j] <= FEAS_MARGIN {
            feasible = false;
        }
    }
    Ok(CandidateEval { feasible, distortion: DistortionPoint::new(dist), slacks })
}

// Full joint p(s, v_1, ..., v_K) with the v index mixed-radix, v_1 fastest.
fn chain_joint(chain: &[CondPmf], sizes: &[usize], inst: &DbcInstance) -> Vec<f64> {
    let k = sizes.len();
    let ns = inst.source.len();
    let v_total: usize = sizes.iter().product();
    let mut joint = vec![0.0; ns * v_total];
    let mut v_syms = vec![0usize; k];
    for s in 0..ns {
        for vidx in 0..v_total {
            let mut rem = vidx;
            for (j, size) in sizes.iter().enumerate() {
                v_syms[j] = rem % size;
                rem /= size;
            }
            let mut p = inst.source.mass()[s] * chain[0].rows()[s][v_syms[k - 1]];
            for i in 1..k {
                p *= chain[i].rows()[v_syms[k - i]][v_syms[k - 1 - i]];
            }
            joint[s * v_total + vidx] = p;
        }
    }
    joint
}

// Best deterministic estimator tables given the candidate chain and x map.
fn bayes_estimators(chain: &[CondPmf], x_map: &[usize], inst: &DbcInstance) -> Vec<Vec<usize>> {
    let k = inst.users();
    let ns = inst.source.len();
    let mut sizes = vec![0usize; k];
    sizes[k - 1] = chain[0].outputs();
    for i in 1..k {
        sizes[k - 1 - i] = chain[i].outputs();
    }
    let v_total: usize = sizes.iter().product();
    let joint = chain_joint(chain, &sizes, inst);
    let v_of = |vidx: usize, j: usize| -> usize {
        let mut rem = vidx;
        for size in &sizes[..j] {
            rem /= size;
        }
        rem % sizes[j]
    };
    (0..k)
        .map(|j| {
            let ny = inst.channels[j].outputs();
            let nr = inst.reconstruction_alphabet(j);
            // posterior weight over s for each (v_j, y_j)
            let mut post = vec![vec![0.0; ns]; sizes[j] * ny];
            for s in 0..ns {
                for vidx in 0..v_total {
                    let p = joint[s * v_total + vidx];
                    if p <= 0.0 {
                        continue;
                    }
                    let x = x_map[v_of(vidx, k - 1) * ns + s];
                    let vj = v_of(vidx, j);
                    for y in 0..ny {
                        post[vj * ny + y][s] += p * inst.channels[j].rows()[x][y];
                    }
                }
            }
            post.iter()
                .map(|w| {
                    let mut best = 0;
                    let mut best_cost = f64::INFINITY;
                    for shat in 0..nr {
                        let cost: f64 = (0..ns).map(|s| w[s] * inst.distortion[j][s][shat]).sum();
                        if cost < best_cost - 1e-15 {
                            best_cost = cost;
                            best = shat;
                        }
                    }
                    best
                })
                .collect()
        })
        .collect()
}

fn sample_simplex_row(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    // Dirichlet(1, ..., 1) via normalized exponentials
    let mut row: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = row.iter().sum();
    for x in &mut row {
        *x /= s.max(1e-300);
    }
    row
}

fn constant_chain(inst: &DbcInstance) -> Vec<CondPmf> {
    let k = inst.users();
    let ns = inst.source.len();
    let point_row = |len: usize| {
        let mut r = vec![0.0; len];
        r[0] = 1.0;
        r
    };
    let mut chain = Vec::with_capacity(k);
    chain.push(CondPmf::new(vec![point_row(inst.v_sizes[k - 1]); ns]).unwrap());
    for i in 1..k {
        let from = inst.v_sizes[k - i];
        let to = inst.v_sizes[k - 1 - i];
        chain.push(CondPmf::new(vec![point_row(to); from]).unwrap());
    }
    chain
}

fn sample_chain(rng: &mut ChaCha8Rng, inst: &DbcInstance) -> Vec<CondPmf> {
    let k = inst.users();
    let ns = inst.source.len();
    let mut chain = Vec::with_capacity(k);
    let rows = (0..ns).map(|_| sample_simplex_row(rng, inst.v_sizes[k - 1])).collect();
    chain.push(CondPmf::new(rows).unwrap());
    for i in 1..k {
        let from = inst.v_sizes[k - i];
        let to = inst.v_sizes[k - 1 - i];
        let rows = (0..from).map(|_| sample_simplex_row(rng, to)).collect();
        chain.push(CondPmf::new(rows).unwrap());
    }
    chain
}

// Either every deterministic x map (when the space is small) or a seeded
// sample of them.
fn x_maps_for(inst: &DbcInstance, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let k = inst.users();
    let ns = inst.source.len();
    let nx = inst.input_alphabet();
    let cells = inst.v_sizes[k - 1] * ns;
    let total = (nx as f64).powi(cells as i32);
    if total <= 4096.0 {
        let total = total as usize;
        (0..total)
            .map(|mut code| {
                (0..cells)
                    .map(|_| {
                        let sym = code % nx;
                        code /= nx;
                        sym
                    })
                    .collect()
            })
            .collect()
    } else {
        (0..256).map(|_| (0..cells).map(|_| rng.gen_range(0..nx)).collect()).collect()
    }
}

fn candidate_from_chain(chain: Vec<CondPmf>, x_map: Vec<usize>, inst: &DbcInstance) -> DbcCandidate {
    let shat_maps = bayes_estimators(&chain, &x_map, inst);
    DbcCandidate { chain, x_map, shat_maps }
}

fn score(point: &DistortionPoint, weights: &[f64]) -> f64 {
    point.d.iter().zip(weights).map(|(d, w)| d * w).sum()
}

// Coordinatewise perturbation of the chain rows: step 0.05 halved whenever a
// full round yields no improvement, five rounds total.
fn refine(
    best: &DbcCandidate,
    inst: &DbcInstance,
    weights: &[f64],
    collected: &mut Vec<DistortionPoint>,
) -> DbcCandidate {
    let mut current = best.clone();
    let mut current_eval = match eval_candidate(&current, inst) {
        Ok(e) if e.feasible => e,
        _ => return current,
    };
    let mut step = 0.05;
    for _ in 0..5 {
        let mut improved = false;
        for link in 0..current.chain.len() {
            for row in 0..current.chain[link].inputs() {
                for coord in 0..current.chain[link].outputs() {
                    for sign in [1.0, -1.0] {
                        let mut rows = current.chain[link].rows().to_vec();
                        rows[row][coord] = (rows[row][coord] + sign * step).max(0.0);
                        let total: f64 = rows[row].iter().sum();
                        if total <= 0.0 {
                            continue;
                        }
                        for x in &mut rows[row] {
                            *x /= total;
                        }
                        let mut chain = current.chain.clone();
                        chain[link] = CondPmf::new(rows).unwrap();
                        let cand = candidate_from_chain(chain, current.x_map.clone(), inst);
                        if let Ok(eval) = eval_candidate(&cand, inst) {
                            if eval.feasible {
                                collected.push(eval.distortion.clone());
                                if score(&eval.distortion, weights)
                                    < score(&current_eval.distortion, weights) - 1e-12
                                {
                                    current = cand;
                                    current_eval = eval;
                                    improved = true;
                                }
                            }
                        }
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    current
}

/// Randomized search over candidate chains: Dirichlet row sampling with
/// deterministic per-candidate substreams, exhaustive (or seeded-sampled)
/// symbol maps, estimator tables chosen Bayes-optimally, and local
/// refinement of the best scalarized candidates. Deterministic for a fixed
/// seed regardless of thread count.
pub fn search_region(inst: &DbcInstance, budget: usize, seed: u64) -> Result<Frontier, DiscreteError> {
    let k = inst.users();
    let budget = budget.max(1);
    let weight_sets: Vec<Vec<f64>> = if k == 1 {
        vec![vec![1.0]]
    } else {
        (0..5)
            .map(|i| {
                let a = i as f64 / 4.0;
                let mut row = vec![(1.0 - a) / (k - 1) as f64; k];
                row[k - 1] = a;
                row
            })
            .collect()
    };

    struct ChainResult {
        points: Vec<DistortionPoint>,
        best: Vec<Option<(f64, DbcCandidate)>>,
    }

    let results: Vec<ChainResult> = (0..budget as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx);
            // candidate 0 is the structured baseline: a constant chain, which
            // carries the zero-rate corner and uncoded transmission
            let chain = if idx == 0 { constant_chain(inst) } else { sample_chain(&mut rng, inst) };
            let mut points = Vec::new();
            let mut best: Vec<Option<(f64, DbcCandidate)>> = vec![None; weight_sets.len()];
            for x_map in x_maps_for(inst, &mut rng) {
                let cand = candidate_from_chain(chain.clone(), x_map, inst);
                if let Ok(eval) = eval_candidate(&cand, inst) {
                    if eval.feasible {
                        for (w, slot) in weight_sets.iter().zip(best.iter_mut()) {
                            let sc = score(&eval.distortion, w);
                            if slot.as_ref().is_none_or(|(s, _)| sc < *s - 1e-15) {
                                *slot = Some((sc, cand.clone()));
                            }
                        }
                        points.push(eval.distortion);
                    }
                }
            }
            ChainResult { points, best }
        })
        .collect();

    let mut cloud: Vec<DistortionPoint> = Vec::new();
    let mut champions: Vec<Option<(f64, DbcCandidate)>> = vec![None; weight_sets.len()];
    for r in results {
        cloud.extend(r.points);
        for (slot, got) in champions.iter_mut().zip(r.best) {
            if let Some((sc, cand)) = got {
                if slot.as_ref().is_none_or(|(s, _)| sc < *s - 1e-15) {
                    *slot = Some((sc, cand));
                }
            }
        }
    }
    for (w, slot) in weight_sets.iter().zip(&champions) {
        if let Some((_, cand)) = slot {
            let refined = refine(cand, inst, w, &mut cloud);
            if let Ok(eval) = eval_candidate(&refined, inst) {
                if eval.feasible {
                    cloud.push(eval.distortion);
                }
            }
        }
    }
    if cloud.is_empty() {
        return Err(DiscreteError::Region(RegionError::Empty));
    }
    Ok(pareto_reduce(&cloud)?.with_label("discrete-inner"))
}

/// On-disk JSON description of a [`DbcInstance`]: `source` (array),
/// `channels` (array of row-stochastic matrices, weakest receiver first),
/// `distortion` (per-receiver `|S| x |Ŝ|` matrices), `sizes.v` (auxiliary
/// alphabet sizes), and an optional integer `b` (default 1).
#[derive(Debug, Clone, Deserialize)]
pub struct DbcInstanceFile {
    pub source: Vec<f64>,
    pub channels: Vec<Vec<Vec<f64>>>,
    pub distortion: Vec<Vec<Vec<f64>>>,
    pub sizes: SizesField,
    #[serde(default = "default_bandwidth")]
    pub b: u32,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SizesField {
    pub v: Vec<usize>,
}

fn default_bandwidth() -> u32 {
    1
}

impl DbcInstanceFile {
    pub fn into_instance(self) -> Result<DbcInstance, DiscreteError> {
        let source = Pmf::new(self.source)?;
        let channels = self
            .channels
            .into_iter()
            .map(CondPmf::new)
            .collect::<Result<Vec<_>, _>>()?;
        DbcInstance::new(source, channels, self.distortion, self.sizes.v)?.with_bandwidth(self.b)
    }
}

/// Uniform binary source, BSC chain, Hamming distortion.
pub fn binary_instance(crossovers: &[f64], v_sizes: Vec<usize>, b: u32) -> Result<DbcInstance, DiscreteError> {
    let source = Pmf::new(vec![0.5, 0.5])?;
    let channels = crossovers
        .iter()
        .map(|p| CondPmf::new(vec![vec![1.0 - p, *p], vec![*p, 1.0 - p]]))
        .collect::<Result<Vec<_>, _>>()?;
    let hamming = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let distortion = vec![hamming; crossovers.len()];
    DbcInstance::new(source, channels, distortion, v_sizes)?.with_bandwidth(b)
}
