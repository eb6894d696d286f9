//! Seeded Monte Carlo implementation of the layered hybrid coding scheme at
//! small blocklength: superposition random codebooks, joint-typicality
//! encoding and decoding, symbol-by-symbol analog maps, plus exact-ensemble
//! covering/packing threshold experiments ([`covering_experiment`],
//! [`packing_experiment`]).
//!
//! Trials use counter-based substreams so parallel and serial runs produce
//! identical statistics for a fixed seed.

mod lemma;

pub use lemma::{
    bsc_pair, bsc_triple, covering_experiment, packing_experiment, LemmaConfigFile, PairPmf,
    TriplePmf,
};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HybridError {
    #[error("typicality slacks must satisfy 0 < eps < eps_prime < 1")]
    InvalidTypicality,
    #[error("pmf does not sum to one (got {0})")]
    NotNormalized(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("codebook needs {0} stored sequences, above the 2^22 guard")]
    MemoryGuard(u64),
    #[error("layer parents must be earlier layers and closed under ancestry")]
    BadParents,
    #[error("decode set {0} must contain the parents of each of its layers")]
    BadDecodeSet(usize),
    #[error("sequence symbol {0} outside the alphabet")]
    BadSymbol(usize),
}

/// Total codeword sequences a codebook may store.
pub const MEMORY_GUARD: u64 = 1 << 22;

/// Encoder/decoder typicality slacks, `0 < eps < eps_prime < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypParams {
    eps: f64,
    eps_prime: f64,
}

impl TypParams {
    pub fn new(eps: f64, eps_prime: f64) -> Result<Self, HybridError> {
        if eps > 0.0 && eps < eps_prime && eps_prime < 1.0 {
            Ok(Self { eps, eps_prime })
        } else {
            Err(HybridError::InvalidTypicality)
        }
    }

    /// Default decoder slack `eps' = 2 eps`.
    pub fn with_default_margin(eps: f64) -> Result<Self, HybridError> {
        Self::new(eps, 2.0 * eps)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps_prime(&self) -> f64 {
        self.eps_prime
    }
}

/// Relative-deviation typicality: every symbol's empirical frequency stays
/// within `eps * p(a)` of `p(a)`. Symbols of zero probability must not
/// occur.
pub fn is_typical(seq: &[usize], pmf: &[f64], eps: f64) -> Result<bool, HybridError> {
    let n = seq.len().max(1) as f64;
    let mut counts = vec![0usize; pmf.len()];
    for &s in seq {
        *counts.get_mut(s).ok_or(HybridError::BadSymbol(s))? += 1;
    }
    Ok(counts
        .iter()
        .zip(pmf)
        .all(|(&c, &p)| (c as f64 / n - p).abs() <= eps * p))
}

/// One superposition layer: the layers it is conditioned on, its alphabet,
/// its codebook rate in bits/symbol, and the scheme conditional
/// `p(v_j | v_parents, s)` with rows indexed row-major by
/// `(parent symbols..., s)`, first parent most significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub parents: Vec<usize>,
    pub alphabet: usize,
    pub rate: f64,
    pub cond: Vec<Vec<f64>>,
}

/// Full description of a layered hybrid scheme: the source, the layer
/// chain, per-receiver channels and decode sets, the symbol maps, and the
/// distortion tables.
///
/// * `x_map` is row-major over `(v_1, ..., v_N, s)`, first layer most
///   significant, source symbol least significant.
/// * `shat_maps[k]` is row-major over `(v_{D_k}..., y_k)` with the decode
///   set in ascending layer order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub source: Vec<f64>,
    pub layers: Vec<LayerSpec>,
    pub channels: Vec<Vec<Vec<f64>>>,
    pub x_map: Vec<usize>,
    pub shat_maps: Vec<Vec<usize>>,
    pub decode_sets: Vec<Vec<usize>>,
    pub distortion: Vec<Vec<Vec<f64>>>,
}

const SUM_TOL: f64 = 1e-9;

fn check_pmf(p: &[f64]) -> Result<(), HybridError> {
    let total: f64 = p.iter().sum();
    if p.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || (total - 1.0).abs() > SUM_TOL {
        return Err(HybridError::NotNormalized(total));
    }
    Ok(())
}

impl SchemeSpec {
    pub fn validate(&self) -> Result<(), HybridError> {
        check_pmf(&self.source)?;
        let n_layers = self.layers.len();
        for (j, layer) in self.layers.iter().enumerate() {
            let mut parent_cells = 1usize;
            for &p in &layer.parents {
                if p >= j {
                    return Err(HybridError::BadParents);
                }
                // ancestry closure: a parent's parents are also parents
                for &pp in &self.layers[p].parents {
                    if !layer.parents.contains(&pp) {
                        return Err(HybridError::BadParents);
                    }
                }
                parent_cells *= self.layers[p].alphabet;
            }
            if layer.cond.len() != parent_cells * self.source.len() {
                return Err(HybridError::Shape(format!("layer {j} cond rows")));
            }
            for row in &layer.cond {
                if row.len() != layer.alphabet {
                    return Err(HybridError::Shape(format!("layer {j} cond width")));
                }
                check_pmf(row)?;
            }
            if !(layer.rate.is_finite() && layer.rate >= 0.0) {
                return Err(HybridError::Shape(format!("layer {j} rate")));
            }
        }
        let v_total: usize = self.layers.iter().map(|l| l.alphabet).product();
        if self.x_map.len() != v_total * self.source.len() {
            return Err(HybridError::Shape("x map size".into()));
        }
        let k = self.channels.len();
        if self.decode_sets.len() != k || self.shat_maps.len() != k || self.distortion.len() != k {
            return Err(HybridError::Shape("receiver arity".into()));
        }
        let nx = self.channels[0].len();
        if self.x_map.iter().any(|x| *x >= nx) {
            return Err(HybridError::BadSymbol(nx));
        }
        for (kk, ch) in self.channels.iter().enumerate() {
            if ch.len() != nx {
                return Err(HybridError::Shape(format!("channel {kk} inputs")));
            }
            for row in ch {
                check_pmf(row)?;
            }
            let dset = &self.decode_sets[kk];
            if dset.windows(2).any(|w| w[0] >= w[1]) {
                // ascending order pins the smallest-index decoding semantics
                return Err(HybridError::BadDecodeSet(kk));
            }
            let mut dv = 1usize;
            for &j in dset {
                if j >= n_layers {
                    return Err(HybridError::BadDecodeSet(kk));
                }
                for &p in &self.layers[j].parents {
                    if !dset.contains(&p) {
                        return Err(HybridError::BadDecodeSet(kk));
                    }
                }
                dv *= self.layers[j].alphabet;
            }
            let ny = ch[0].len();
            if self.shat_maps[kk].len() != dv * ny {
                return Err(HybridError::Shape(format!("estimator map {kk} size")));
            }
            let nr = self.distortion[kk][0].len();
            if self.shat_maps[kk].iter().any(|s| *s >= nr) {
                return Err(HybridError::BadSymbol(nr));
            }
            if self.distortion[kk].len() != self.source.len() {
                return Err(HybridError::Shape(format!("distortion table {kk}")));
            }
        }
        Ok(())
    }

    pub fn receivers(&self) -> usize {
        self.channels.len()
    }

    fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.alphabet).collect()
    }

    // Joint p(s, v_1..v_N) as a flat table indexed by s * V + v, where v is
    // row-major over the layers (first layer most significant).
    fn joint_sv(&self) -> Vec<f64> {
        let sizes = self.layer_sizes();
        let v_total: usize = sizes.iter().product();
        let ns = self.source.len();
        let mut joint = vec![0.0; ns * v_total];
        let mut v_syms = vec![0usize; sizes.len()];
        for s in 0..ns {
            for v in 0..v_total {
                decompose(v, &sizes, &mut v_syms);
                let mut p = self.source[s];
                for (j, layer) in self.layers.iter().enumerate() {
                    let row = self.cond_row_index(j, &v_syms, s);
                    p *= layer.cond[row][v_syms[j]];
                }
                joint[s * v_total + v] = p;
            }
        }
        joint
    }

    fn cond_row_index(&self, j: usize, v_syms: &[usize], s: usize) -> usize {
        let mut idx = 0usize;
        for &p in &self.layers[j].parents {
            idx = idx * self.layers[p].alphabet + v_syms[p];
        }
        idx * self.source.len() + s
    }

    fn x_of(&self, v_syms: &[usize], s: usize) -> usize {
        let sizes = self.layer_sizes();
        let mut idx = 0usize;
        for (j, &size) in sizes.iter().enumerate() {
            idx = idx * size + v_syms[j];
        }
        self.x_map[idx * self.source.len() + s]
    }

    fn shat_of(&self, k: usize, d_syms: &[usize], y: usize) -> usize {
        let dset = &self.decode_sets[k];
        let mut idx = 0usize;
        for (pos, &j) in dset.iter().enumerate() {
            idx = idx * self.layers[j].alphabet + d_syms[pos];
        }
        let ny = self.channels[k][0].len();
        self.shat_maps[k][idx * ny + y]
    }
}

// Mixed-radix decomposition, first coordinate most significant.
fn decompose(mut idx: usize, sizes: &[usize], out: &mut [usize]) {
    for j in (0..sizes.len()).rev() {
        out[j] = idx % sizes[j];
        idx /= sizes[j];
    }
}

/// Precomputed typicality targets: the joint `(S, V)` pmf used by the
/// encoder and the per-receiver joint `(V_{D_k}, Y_k)` pmfs used by the
/// decoders.
#[derive(Debug, Clone)]
pub struct SchemeTables {
    enc_joint: Vec<f64>,
    dec_joints: Vec<Vec<f64>>,
    sizes: Vec<usize>,
}

impl SchemeTables {
    pub fn new(spec: &SchemeSpec) -> Result<Self, HybridError> {
        spec.validate()?;
        let sizes = spec.layer_sizes();
        let v_total: usize = sizes.iter().product();
        let ns = spec.source.len();
        let joint = spec.joint_sv();
        // encoder joint in symbol order (s, v): index = s * v_total + v
        let enc_joint = joint.clone();
        let mut dec_joints = Vec::with_capacity(spec.receivers());
        let mut v_syms = vec![0usize; sizes.len()];
        for k in 0..spec.receivers() {
            let dset = &spec.decode_sets[k];
            let dv: usize = dset.iter().map(|&j| sizes[j]).product();
            let ny = spec.channels[k][0].len();
            let mut table = vec![0.0; dv * ny];
            for s in 0..ns {
                for v in 0..v_total {
                    let p = joint[s * v_total + v];
                    if p <= 0.0 {
                        continue;
                    }
                    decompose(v, &sizes, &mut v_syms);
                    let x = spec.x_of(&v_syms, s);
                    let mut didx = 0usize;
                    for &j in dset {
                        didx = didx * sizes[j] + v_syms[j];
                    }
                    for y in 0..ny {
                        table[didx * ny + y] += p * spec.channels[k][x][y];
                    }
                }
            }
            dec_joints.push(table);
        }
        Ok(Self { enc_joint, dec_joints, sizes })
    }
}

/// Layered random codebook: for each layer, a table of length-`n` sequences
/// indexed by (parent message tuple, own message).
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub n: usize,
    /// Number of messages per layer, `2^ceil(n r_j)`.
    pub sizes: Vec<usize>,
    layers: Vec<LayerTable>,
}

#[derive(Debug, Clone, PartialEq)]
struct LayerTable {
    parents: Vec<usize>,
    parent_cells: usize,
    own: usize,
    seqs: Vec<u8>,
}

fn message_count(n: usize, rate: f64) -> usize {
    let bits = (n as f64 * rate - 1e-9).ceil().max(0.0) as u32;
    1usize << bits
}

impl Codebook {
    fn parent_index(&self, layer: usize, m: &[usize]) -> usize {
        let mut idx = 0usize;
        for &p in &self.layers[layer].parents {
            idx = idx * self.sizes[p] + m[p];
        }
        idx
    }

    /// Symbols of layer `j`'s codeword at message vector `m`.
    pub fn codeword(&self, layer: usize, m: &[usize]) -> &[u8] {
        let lt = &self.layers[layer];
        let pidx = self.parent_index(layer, m);
        let start = (pidx * lt.own + m[layer]) * self.n;
        &lt.seqs[start..start + self.n]
    }
}

/// Draws a fresh layered codebook: layer-`j` sequences are i.i.d. per
/// symbol from the marginal `p(v_j | v_parents)` conditioned on the parent
/// codeword symbols. Deterministic given the rng state.
pub fn gen_codebook(
    spec: &SchemeSpec,
    n: usize,
    rates: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<Codebook, HybridError> {
    spec.validate()?;
    if rates.len() != spec.layers.len() {
        return Err(HybridError::Shape("rates arity".into()));
    }
    let sizes_a = spec.layer_sizes();
    let v_total: usize = sizes_a.iter().product();
    let ns = spec.source.len();
    let joint = spec.joint_sv();

    let msg_sizes: Vec<usize> = rates.iter().map(|r| message_count(n, *r)).collect();
    let mut total_seqs = 0u64;
    let mut layers = Vec::with_capacity(spec.layers.len());
    for (j, layer) in spec.layers.iter().enumerate() {
        let parent_cells: usize = layer.parents.iter().map(|&p| msg_sizes[p]).product();
        total_seqs += (parent_cells * msg_sizes[j]) as u64;
        if total_seqs > MEMORY_GUARD {
            return Err(HybridError::MemoryGuard(total_seqs));
        }
        layers.push(LayerTable {
            parents: layer.parents.clone(),
            parent_cells,
            own: msg_sizes[j],
            seqs: Vec::new(),
        });
    }

    // generation marginals p(v_j | v_parents) from the scheme joint
    let mut v_syms = vec![0usize; sizes_a.len()];
    let gen_cond: Vec<Vec<Vec<f64>>> = spec
        .layers
        .iter()
        .enumerate()
        .map(|(j, layer)| {
            let parent_sizes: Vec<usize> = layer.parents.iter().map(|&p| sizes_a[p]).collect();
            let cells: usize = parent_sizes.iter().product();
            let mut table = vec![vec![0.0; layer.alphabet]; cells];
            for s in 0..ns {
                for v in 0..v_total {
                    let p = joint[s * v_total + v];
                    if p <= 0.0 {
                        continue;
                    }
                    decompose(v, &sizes_a, &mut v_syms);
                    let mut cell = 0usize;
                    for &pp in &layer.parents {
                        cell = cell * sizes_a[pp] + v_syms[pp];
                    }
                    table[cell][v_syms[j]] += p;
                }
            }
            for row in &mut table {
                let tot: f64 = row.iter().sum();
                if tot > 0.0 {
                    for x in row.iter_mut() {
                        *x /= tot;
                    }
                } else {
                    // unreachable parent combination; any fixed row works
                    let uniform = 1.0 / row.len() as f64;
                    row.fill(uniform);
                }
            }
            table
        })
        .collect();

    let cb_sizes = msg_sizes.clone();
    let mut book = Codebook { n, sizes: cb_sizes, layers };
    for j in 0..spec.layers.len() {
        let layer = &spec.layers[j];
        let parent_sizes: Vec<usize> = layer.parents.iter().map(|&p| sizes_a[p]).collect();
        let own = book.layers[j].own;
        let parent_cells = book.layers[j].parent_cells;
        let mut seqs = vec![0u8; parent_cells * own * n];
        // enumerate parent message tuples in row-major order
        let parent_msg_sizes: Vec<usize> = layer.parents.iter().map(|&p| book.sizes[p]).collect();
        let mut parent_msgs = vec![0usize; layer.parents.len()];
        for pidx in 0..parent_cells {
            decompose(pidx, &parent_msg_sizes, &mut parent_msgs);
            // parent codeword symbols at each position
            let mut full_m = vec![0usize; spec.layers.len()];
            for (pos, &p) in layer.parents.iter().enumerate() {
                full_m[p] = parent_msgs[pos];
            }
            for m in 0..own {
                let base = (pidx * own + m) * n;
                for i in 0..n {
                    let mut cell = 0usize;
                    for (pos, &p) in layer.parents.iter().enumerate() {
                        let sym = book.codeword(p, &full_m)[i] as usize;
                        cell = cell * parent_sizes[pos] + sym;
                    }
                    let row = &gen_cond[j][cell];
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    let mut sym = row.len() - 1;
                    for (a, &pa) in row.iter().enumerate() {
                        acc += pa;
                        if u < acc {
                            sym = a;
                            break;
                        }
                    }
                    seqs[base + i] = sym as u8;
                }
            }
        }
        book.layers[j].seqs = seqs;
    }
    Ok(book)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodeResult {
    /// Chosen message vector (all components), smallest in the
    /// last-coordinate-major order; all-zeros when no vector is typical.
    pub m: Vec<usize>,
    pub hit: bool,
    /// Channel input `x_i = x(v_i(m), s_i)`.
    pub x: Vec<usize>,
}

/// Joint-typicality encoding: the smallest message vector (ordered by the
/// highest layer index first) whose codewords are jointly `eps`-typical
/// with the source sequence.
pub fn encode(
    s_seq: &[usize],
    book: &Codebook,
    spec: &SchemeSpec,
    tables: &SchemeTables,
    tp: TypParams,
) -> EncodeResult {
    let n = book.n;
    debug_assert_eq!(s_seq.len(), n);
    let n_layers = spec.layers.len();
    let sizes = &tables.sizes;
    let v_total: usize = sizes.iter().product();
    let ns = spec.source.len();
    let total_msgs: usize = book.sizes.iter().product();
    let mut m = vec![0usize; n_layers];
    let mut counts = vec![0usize; ns * v_total];
    let mut chosen: Option<Vec<usize>> = None;
    'outer: for rank in 0..total_msgs {
        // rank enumerates message vectors with m_1 fastest, so increasing
        // rank is exactly the smallest-first order keyed (m_N, ..., m_1)
        let mut rem = rank;
        for (j, &sz) in book.sizes.iter().enumerate() {
            m[j] = rem % sz;
            rem /= sz;
        }
        counts.fill(0);
        {
            let words: Vec<&[u8]> = (0..n_layers).map(|j| book.codeword(j, &m)).collect();
            for i in 0..n {
                let mut v = 0usize;
                for (j, w) in words.iter().enumerate() {
                    v = v * sizes[j] + w[i] as usize;
                }
                counts[s_seq[i] * v_total + v] += 1;
            }
        }
        let nf = n as f64;
        for (c, p) in counts.iter().zip(&tables.enc_joint) {
            if (*c as f64 / nf - p).abs() > tp.eps * p {
                continue 'outer;
            }
        }
        chosen = Some(m.clone());
        break;
    }
    let hit = chosen.is_some();
    let m = chosen.unwrap_or_else(|| vec![0usize; n_layers]);
    let words: Vec<&[u8]> = (0..n_layers).map(|j| book.codeword(j, &m)).collect();
    let mut v_syms = vec![0usize; n_layers];
    let x = (0..n)
        .map(|i| {
            for (j, w) in words.iter().enumerate() {
                v_syms[j] = w[i] as usize;
            }
            spec.x_of(&v_syms, s_seq[i])
        })
        .collect();
    EncodeResult { m, hit, x }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Recovered messages for the decode set, in ascending layer order;
    /// all-zeros when nothing is typical.
    pub m: Vec<usize>,
    pub hit: bool,
    pub shat: Vec<usize>,
}

/// Joint-typicality decoding for receiver `k`: the smallest decode-set
/// message vector whose codewords are jointly `eps'`-typical with the
/// received sequence.
pub fn decode(
    y_seq: &[usize],
    book: &Codebook,
    spec: &SchemeSpec,
    tables: &SchemeTables,
    k: usize,
    tp: TypParams,
) -> DecodeResult {
    let n = book.n;
    debug_assert_eq!(y_seq.len(), n);
    let dset = &spec.decode_sets[k];
    let sizes = &tables.sizes;
    let dv: usize = dset.iter().map(|&j| sizes[j]).product();
    let ny = spec.channels[k][0].len();
    let joint = &tables.dec_joints[k];
    let total_msgs: usize = dset.iter().map(|&j| book.sizes[j]).product();
    let mut full_m = vec![0usize; spec.layers.len()];
    let mut counts = vec![0usize; dv * ny];
    let mut chosen: Option<Vec<usize>> = None;
    'outer: for rank in 0..total_msgs {
        let mut rem = rank;
        for &j in dset {
            full_m[j] = rem % book.sizes[j];
            rem /= book.sizes[j];
        }
        counts.fill(0);
        {
            let words: Vec<&[u8]> = dset.iter().map(|&j| book.codeword(j, &full_m)).collect();
            for i in 0..n {
                let mut v = 0usize;
                for (pos, w) in words.iter().enumerate() {
                    v = v * sizes[dset[pos]] + w[i] as usize;
                }
                counts[v * ny + y_seq[i]] += 1;
            }
        }
        let nf = n as f64;
        for (c, p) in counts.iter().zip(joint) {
            if (*c as f64 / nf - p).abs() > tp.eps_prime * p {
                continue 'outer;
            }
        }
        chosen = Some(dset.iter().map(|&j| full_m[j]).collect());
        break;
    }
    let hit = chosen.is_some();
    let m = chosen.unwrap_or_else(|| vec![0usize; dset.len()]);
    for (pos, &j) in dset.iter().enumerate() {
        full_m[j] = m[pos];
    }
    let words: Vec<&[u8]> = dset.iter().map(|&j| book.codeword(j, &full_m)).collect();
    let mut d_syms = vec![0usize; dset.len()];
    let shat = (0..n)
        .map(|i| {
            for (pos, w) in words.iter().enumerate() {
                d_syms[pos] = w[i] as usize;
            }
            spec.shat_of(k, &d_syms, y_seq[i])
        })
        .collect();
    DecodeResult { m, hit, shat }
}

/// Aggregate simulation statistics. Distortions are raw averages over all
/// trials (decoding failures included); standard errors are per-receiver
/// sample standard deviations of the per-trial distortion divided by
/// `sqrt(trials)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub n: usize,
    pub trials: usize,
    pub avg_distortion: Vec<f64>,
    pub distortion_se: Vec<f64>,
    pub decode_error_rate: Vec<f64>,
    pub encode_failure_rate: f64,
}

fn sample_from(row: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    row.len() - 1
}

/// Runs `trials` independent experiments, each with a fresh codebook,
/// source sequence, and channel noise (the random-codebook average of the
/// scheme). Deterministic given `seed`, independent of thread count.
pub fn simulate(
    spec: &SchemeSpec,
    tp: TypParams,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<SimStats, HybridError> {
    let tables = SchemeTables::new(spec)?;
    let rates: Vec<f64> = spec.layers.iter().map(|l| l.rate).collect();
    // fail fast on the memory guard before spawning workers
    {
        let mut probe = ChaCha8Rng::seed_from_u64(seed);
        gen_codebook(spec, n, &rates, &mut probe)?;
    }
    let k = spec.receivers();

    struct Trial {
        dist: Vec<f64>,
        dec_err: Vec<bool>,
        enc_fail: bool,
    }

    let results: Vec<Trial> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t.wrapping_add(1));
            let book = gen_codebook(spec, n, &rates, &mut rng).expect("guard checked above");
            let s_seq: Vec<usize> = (0..n).map(|_| sample_from(&spec.source, &mut rng)).collect();
            let enc = encode(&s_seq, &book, spec, &tables, tp);
            let mut dist = vec![0.0; k];
            let mut dec_err = vec![false; k];
            for kk in 0..k {
                let y_seq: Vec<usize> = enc
                    .x
                    .iter()
                    .map(|&x| sample_from(&spec.channels[kk][x], &mut rng))
                    .collect();
                let dec = decode(&y_seq, &book, spec, &tables, kk, tp);
                // a decode error is recovering the wrong codewords; duplicate
                // codewords at a smaller index reconstruct identically
                let mut full_dec = enc.m.clone();
                for (pos, &j) in spec.decode_sets[kk].iter().enumerate() {
                    full_dec[j] = dec.m[pos];
                }
                dec_err[kk] = spec.decode_sets[kk]
                    .iter()
                    .any(|&j| book.codeword(j, &full_dec) != book.codeword(j, &enc.m));
                dist[kk] = s_seq
                    .iter()
                    .zip(&dec.shat)
                    .map(|(&s, &sh)| spec.distortion[kk][s][sh])
                    .sum::<f64>()
                    / n as f64;
            }
            Trial { dist, dec_err, enc_fail: !enc.hit }
        })
        .collect();

    let tn = trials.max(1) as f64;
    let mut avg = vec![0.0; k];
    let mut dec_rate = vec![0.0; k];
    let mut enc_fail = 0.0;
    for t in &results {
        for kk in 0..k {
            avg[kk] += t.dist[kk];
            if t.dec_err[kk] {
                dec_rate[kk] += 1.0;
            }
        }
        if t.enc_fail {
            enc_fail += 1.0;
        }
    }
    for kk in 0..k {
        avg[kk] /= tn;
        dec_rate[kk] /= tn;
    }
    enc_fail /= tn;
    let mut se = vec![0.0; k];
    if trials > 1 {
        for kk in 0..k {
            let var = results
                .iter()
                .map(|t| (t.dist[kk] - avg[kk]).powi(2))
                .sum::<f64>()
                / (tn - 1.0);
            se[kk] = (var / tn).sqrt();
        }
    }
    Ok(SimStats {
        n,
        trials,
        avg_distortion: avg,
        distortion_se: se,
        decode_error_rate: dec_rate,
        encode_failure_rate: enc_fail,
    })
}

/// On-disk JSON description of a simulation run.
#[derive(Debug, Clone, Deserialize)]
pub struct SimConfigFile {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub eps: f64,
    pub eps_prime: Option<f64>,
    pub scheme: SchemeSpec,
}

impl SimConfigFile {
    pub fn typ_params(&self) -> Result<TypParams, HybridError> {
        match self.eps_prime {
            Some(ep) => TypParams::new(self.eps, ep),
            None => TypParams::with_default_margin(self.eps),
        }
    }
}

/// Point-to-point scheme used in examples and tests: binary uniform source,
/// one layer `V = S ⊕ Bern(q)` at the given rate, `x = v`, `ŝ = v`, BSC
/// channel, Hamming distortion.
pub fn single_layer_bsc_scheme(q: f64, rate: f64, channel_p: f64) -> SchemeSpec {
    SchemeSpec {
        source: vec![0.5, 0.5],
        layers: vec![LayerSpec {
            parents: vec![],
            alphabet: 2,
            rate,
            cond: vec![vec![1.0 - q, q], vec![q, 1.0 - q]],
        }],
        channels: vec![vec![
            vec![1.0 - channel_p, channel_p],
            vec![channel_p, 1.0 - channel_p],
        ]],
        x_map: vec![0, 0, 1, 1],
        shat_maps: vec![vec![0, 0, 1, 1]],
        decode_sets: vec![vec![0]],
        distortion: vec![vec![vec![0.0, 1.0], vec![1.0, 0.0]]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn typicality_basics() {
        assert!(TypParams::new(0.2, 0.1).is_err());
        assert!(TypParams::new(0.0, 0.5).is_err());
        let all_zero = vec![0usize; 10];
        assert!(!is_typical(&all_zero, &[0.5, 0.5], 0.1).unwrap());
        // deterministic pmf matching the symbols
        assert!(is_typical(&all_zero, &[1.0, 0.0], 0.01).unwrap());
        assert!(is_typical(&[0, 3], &[0.5, 0.5], 0.1).is_err());
    }

    #[test]
    fn typicality_law_of_large_numbers() {
        // 500-symbol Bern(0.3) draws are 0.2-typical almost always
        let pmf = [0.7, 0.3];
        let mut ok = 0;
        for trial in 0..1000u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            rng.set_stream(trial);
            let seq: Vec<usize> = (0..500).map(|_| usize::from(rng.gen::<f64>() < 0.3)).collect();
            if is_typical(&seq, &pmf, 0.2).unwrap() {
                ok += 1;
            }
        }
        assert!(ok >= 990, "typicality rate {}/1000", ok);
    }

    fn p2p_spec() -> SchemeSpec {
        single_layer_bsc_scheme(0.25, 0.35, 0.1)
    }

    #[test]
    fn codebook_shapes_and_determinism() {
        let spec = p2p_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let book = gen_codebook(&spec, 8, &[0.25], &mut rng).unwrap();
        assert_eq!(book.sizes, vec![4]); // 2^ceil(8 * 0.25)
        let mut rng2 = ChaCha8Rng::seed_from_u64(5);
        let book2 = gen_codebook(&spec, 8, &[0.25], &mut rng2).unwrap();
        assert_eq!(book, book2);
        // rate-0 layer: a single codeword
        let mut rng3 = ChaCha8Rng::seed_from_u64(5);
        let book3 = gen_codebook(&spec, 8, &[0.0], &mut rng3).unwrap();
        assert_eq!(book3.sizes, vec![1]);
    }

    #[test]
    fn parentless_layer_draws_from_marginal() {
        // V = S xor Bern(0.25) has a uniform marginal; codeword symbol
        // frequencies should match it
        let spec = p2p_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let book = gen_codebook(&spec, 512, &[0.02], &mut rng).unwrap();
        let mut ones = 0usize;
        let mut total = 0usize;
        for m in 0..book.sizes[0] {
            for &sym in book.codeword(0, &[m]) {
                ones += sym as usize;
                total += 1;
            }
        }
        let freq = ones as f64 / total as f64;
        assert!((freq - 0.5).abs() < 0.05, "marginal frequency {freq}");
    }

    #[test]
    fn memory_guard_trips() {
        let spec = p2p_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let err = gen_codebook(&spec, 64, &[0.5], &mut rng);
        assert!(matches!(err, Err(HybridError::MemoryGuard(_))));
    }

    // a codebook with hand-planted codewords for index-order tests
    fn planted_book(n: usize, words: Vec<Vec<u8>>) -> Codebook {
        let own = words.len();
        let seqs = words.into_iter().flatten().collect();
        Codebook {
            n,
            sizes: vec![own],
            layers: vec![LayerTable { parents: vec![], parent_cells: 1, own, seqs }],
        }
    }

    #[test]
    fn encode_picks_smallest_typical_index() {
        let spec = p2p_spec();
        let tables = SchemeTables::new(&spec).unwrap();
        let tp = TypParams::new(0.5, 0.9).unwrap();
        let n = 8;
        let s_seq = vec![0, 0, 0, 0, 1, 1, 1, 1];
        // jointly typical with s: flip exactly a quarter in each half
        let good = [0, 0, 0, 1, 1, 1, 1, 0];
        let bad = vec![0u8; 8]; // all-zero codeword: v marginal atypical
        let mut words = vec![bad.clone(); 8];
        words[5] = good.iter().map(|&x| x as u8).collect();
        let book = planted_book(n, words);
        let enc = encode(&s_seq, &book, &spec, &tables, tp);
        assert!(enc.hit);
        assert_eq!(enc.m, vec![5]);
        // two planted candidates: the smaller index wins
        let mut words = vec![bad; 8];
        words[3] = good.iter().map(|&x| x as u8).collect();
        words[7] = good.iter().map(|&x| x as u8).collect();
        let book = planted_book(n, words);
        let enc = encode(&s_seq, &book, &spec, &tables, tp);
        assert_eq!(enc.m, vec![3]);
        // rate-0 book: always all-zeros index
        let book = planted_book(n, vec![vec![0, 1, 0, 1, 0, 1, 0, 1]]);
        let enc = encode(&s_seq, &book, &spec, &tables, tp);
        assert_eq!(enc.m, vec![0]);
    }

    #[test]
    fn decode_mirrors_encode_examples() {
        // channel crossover 1/4 keeps every joint cell representable at n = 8
        let spec = single_layer_bsc_scheme(0.25, 0.35, 0.25);
        let tables = SchemeTables::new(&spec).unwrap();
        let tp = TypParams::new(0.45, 0.9).unwrap();
        let n = 8;
        let y_seq = vec![0, 0, 0, 0, 1, 1, 1, 1];
        // one flip in each direction, balanced diagonal: pair-typical at eps'
        let near: Vec<u8> = vec![0, 0, 0, 1, 0, 1, 1, 1];
        let far = vec![0u8; 8];
        let mut words = vec![far.clone(); 8];
        words[5] = near.clone();
        let book = planted_book(n, words);
        let dec = decode(&y_seq, &book, &spec, &tables, 0, tp);
        assert!(dec.hit);
        assert_eq!(dec.m, vec![5]);
        // two planted candidates: smaller index wins
        let mut words = vec![far; 8];
        words[3] = near.clone();
        words[6] = near;
        let book = planted_book(n, words);
        let dec = decode(&y_seq, &book, &spec, &tables, 0, tp);
        assert_eq!(dec.m, vec![3]);
        // rate-0 book: all-zeros index regardless
        let book = planted_book(n, vec![vec![0, 1, 0, 1, 0, 1, 0, 1]]);
        let dec = decode(&y_seq, &book, &spec, &tables, 0, tp);
        assert_eq!(dec.m, vec![0]);
    }

    #[test]
    fn smallest_index_rule_matches_exhaustive_scan() {
        let spec = p2p_spec();
        let tables = SchemeTables::new(&spec).unwrap();
        let tp = TypParams::new(0.45, 0.9).unwrap();
        for trial in 0..30u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            rng.set_stream(trial);
            let n = 10;
            let book = gen_codebook(&spec, n, &[0.4], &mut rng).unwrap();
            let s_seq: Vec<usize> = (0..n).map(|_| usize::from(rng.gen::<bool>())).collect();
            let enc = encode(&s_seq, &book, &spec, &tables, tp);
            // exhaustive scan over all indices
            let mut best: Option<usize> = None;
            for m in 0..book.sizes[0] {
                let w = book.codeword(0, &[m]);
                let joint: Vec<usize> =
                    s_seq.iter().zip(w).map(|(&s, &v)| s * 2 + v as usize).collect();
                if is_typical(&joint, &tables.enc_joint, tp.eps()).unwrap() {
                    best = Some(m);
                    break;
                }
            }
            match best {
                Some(m) => {
                    assert!(enc.hit);
                    assert_eq!(enc.m, vec![m]);
                }
                None => assert!(!enc.hit),
            }
        }
    }

    #[test]
    fn simulate_zero_rate_matches_constant_estimator() {
        // rate 0, estimator pinned to symbol 0: distortion = P(S = 1) = 1/2
        let mut spec = p2p_spec();
        spec.layers[0].rate = 0.0;
        spec.shat_maps = vec![vec![0, 0, 0, 0]];
        let tp = TypParams::new(0.3, 0.6).unwrap();
        let stats = simulate(&spec, tp, 16, 400, 3).unwrap();
        let tol = 2.0 * stats.distortion_se[0] + 1e-9;
        assert_abs_diff_eq!(stats.avg_distortion[0], 0.5, epsilon = tol.max(0.05));
    }

    #[test]
    fn simulate_noiseless_lossless() {
        // noiseless channel, V = S, rate above 1: the encoder needs an exact
        // copy of s in the book, so distortion decays as n grows
        let mut spec = single_layer_bsc_scheme(0.0, 1.1, 0.0);
        spec.layers[0].cond = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let tp = TypParams::new(0.49, 0.98).unwrap();
        let mut prev = f64::INFINITY;
        let mut stats_last = None;
        for n in [8, 12, 16] {
            let stats = simulate(&spec, tp, n, 200, 11).unwrap();
            assert!(stats.decode_error_rate[0] <= 0.1, "n={n}: {:?}", stats);
            assert!(stats.avg_distortion[0] <= prev + 0.03);
            prev = stats.avg_distortion[0];
            stats_last = Some(stats);
        }
        assert!(prev <= 0.10, "final distortion {prev}: {:?}", stats_last);
    }

    #[test]
    fn simulate_deterministic_across_runs() {
        let spec = p2p_spec();
        let tp = TypParams::new(0.35, 0.7).unwrap();
        let a = simulate(&spec, tp, 12, 64, 9).unwrap();
        let b = simulate(&spec, tp, 12, 64, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_layer_scheme_round_trips() {
        // degraded two-user shape: layer 0 decoded by both, layer 1 only by
        // the strong user
        let spec = SchemeSpec {
            source: vec![0.5, 0.5],
            layers: vec![
                LayerSpec {
                    parents: vec![],
                    alphabet: 2,
                    rate: 0.3,
                    cond: vec![vec![0.65, 0.35], vec![0.35, 0.65]],
                },
                LayerSpec {
                    parents: vec![0],
                    alphabet: 2,
                    rate: 0.3,
                    // rows over (v0, s)
                    cond: vec![
                        vec![0.85, 0.15],
                        vec![0.25, 0.75],
                        vec![0.75, 0.25],
                        vec![0.15, 0.85],
                    ],
                },
            ],
            channels: vec![
                vec![vec![0.85, 0.15], vec![0.15, 0.85]],
                vec![vec![0.95, 0.05], vec![0.05, 0.95]],
            ],
            // x = v1 (the fine layer): row-major over (v0, v1, s)
            x_map: vec![0, 0, 1, 1, 0, 0, 1, 1],
            shat_maps: vec![
                vec![0, 0, 1, 1],             // user 1 sees v0 only: shat = v0
                vec![0, 0, 0, 0, 1, 1, 1, 1], // user 2 sees (v0, v1): shat = v0
            ],
            decode_sets: vec![vec![0], vec![0, 1]],
            distortion: vec![
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            ],
        };
        spec.validate().unwrap();
        let tp = TypParams::new(0.4, 0.8).unwrap();
        let stats = simulate(&spec, tp, 12, 64, 21).unwrap();
        assert_eq!(stats.avg_distortion.len(), 2);
        for d in &stats.avg_distortion {
            assert!(*d >= 0.0 && *d <= 1.0);
        }
    }

    // two-layer companion to the covering experiments: superposition
    // encoding succeeds above the sum-rate threshold and not below
    #[test]
    fn two_layer_covering_phase_transition() {
        fn scheme(r0: f64, r1: f64) -> SchemeSpec {
            SchemeSpec {
                source: vec![0.5, 0.5],
                layers: vec![
                    LayerSpec {
                        parents: vec![],
                        alphabet: 2,
                        rate: r0,
                        cond: vec![vec![0.7, 0.3], vec![0.3, 0.7]],
                    },
                    // V1 = S xor Bern(0.15), conditionally independent of V0
                    LayerSpec {
                        parents: vec![0],
                        alphabet: 2,
                        rate: r1,
                        cond: vec![
                            vec![0.85, 0.15],
                            vec![0.15, 0.85],
                            vec![0.85, 0.15],
                            vec![0.15, 0.85],
                        ],
                    },
                ],
                channels: vec![vec![vec![0.9, 0.1], vec![0.1, 0.9]]],
                x_map: vec![0, 0, 1, 1, 0, 0, 1, 1],
                shat_maps: vec![vec![0, 0, 1, 1]],
                decode_sets: vec![vec![0]],
                distortion: vec![vec![vec![0.0, 1.0], vec![1.0, 0.0]]],
            }
        }
        let hit_rate = |r0: f64, r1: f64| -> f64 {
            let spec = scheme(r0, r1);
            let tables = SchemeTables::new(&spec).unwrap();
            let tp = TypParams::new(0.55, 0.99).unwrap();
            let mut hits = 0;
            for t in 0..24u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(31);
                rng.set_stream(t);
                let book = gen_codebook(&spec, 31, &[r0, r1], &mut rng).unwrap();
                let s: Vec<usize> = (0..31).map(|_| usize::from(rng.gen::<bool>())).collect();
                if encode(&s, &book, &spec, &tables, tp).hit {
                    hits += 1;
                }
            }
            hits as f64 / 24.0
        };
        let ladder = [hit_rate(0.03, 0.03), hit_rate(0.12, 0.18), hit_rate(0.2, 0.3)];
        assert!(ladder[0] <= 0.1, "below threshold: {ladder:?}");
        assert!(ladder[2] >= 0.5, "above threshold: {ladder:?}");
        for w in ladder.windows(2) {
            assert!(w[1] >= w[0] - 0.05, "not increasing: {ladder:?}");
        }
    }

    #[test]
    fn decode_set_must_contain_parents() {
        let mut spec = SchemeSpec {
            source: vec![0.5, 0.5],
            layers: vec![
                LayerSpec {
                    parents: vec![],
                    alphabet: 2,
                    rate: 0.2,
                    cond: vec![vec![0.7, 0.3], vec![0.3, 0.7]],
                },
                LayerSpec {
                    parents: vec![0],
                    alphabet: 2,
                    rate: 0.2,
                    cond: vec![vec![0.6, 0.4]; 4],
                },
            ],
            channels: vec![vec![vec![0.9, 0.1], vec![0.1, 0.9]]],
            x_map: vec![0, 0, 1, 1, 0, 0, 1, 1],
            shat_maps: vec![vec![0, 0, 1, 1]],
            decode_sets: vec![vec![1]],
            distortion: vec![vec![vec![0.0, 1.0], vec![1.0, 0.0]]],
        };
        assert!(matches!(spec.validate(), Err(HybridError::BadDecodeSet(0))));
        spec.decode_sets = vec![vec![0, 1]];
        spec.shat_maps = vec![vec![0, 0, 0, 0, 1, 1, 1, 1]];
        assert!(spec.validate().is_ok());
    }
}
