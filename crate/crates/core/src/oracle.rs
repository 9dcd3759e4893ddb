//! Exact finite-`n` law of `(e(X), s(X))` for a uniformly random directed
//! graph on `n` nodes (loops allowed, `2^{n²}` graphs in total).
//!
//! Both densities depend on the adjacency matrix only through the row sums
//! `dᵢ`, which are independent `Binomial(n, 1/2)`. A dynamic program over
//! rows with state `(E, S) = (Σdᵢ, Σdᵢᵖ)` and transition weight `C(n, d)`
//! counts the graphs at every lattice point.
//!
//! Layers are stored densely in linear space. Counts stay below `2^{n²}`,
//! which fits an `f64` for every `n` the memory budget admits, so the tables
//! are integer-exact until the counts pass `2^53`; a per-layer rescale only
//! kicks in near overflow.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Resident-set ceiling for the dense DP layers.
pub const MEMORY_BUDGET_BYTES: u64 = 2 << 30;

const CACHE_MAGIC: &[u8; 8] = b"PSTARLAW";
const CACHE_VERSION: u64 = 1;
const CACHE_HEADER_LEN: usize = 32;
const RESCALE_ABOVE: f64 = 1e290;

/// Largest `n` accepted for star order `p`.
pub fn n_max(p: u32) -> u32 {
    match p {
        2 => 16,
        3 => 12,
        _ => {
            let mut n = 1;
            while layer_pair_bytes(n + 1, p).is_some_and(|b| b <= MEMORY_BUDGET_BYTES) {
                n += 1;
            }
            n
        }
    }
}

fn layer_pair_bytes(n: u32, p: u32) -> Option<u64> {
    let n = n as u64;
    let e_len = n.checked_mul(n)? + 1;
    let s_len = n.checked_pow(p + 1)? + 1;
    e_len.checked_mul(s_len)?.checked_mul(16)
}

fn check_np(n: u32, p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidParams(format!("star order p must be >= 2, got {p}")));
    }
    if n == 0 {
        return Err(Error::InvalidParams("node count n must be >= 1".into()));
    }
    let cap = n_max(p);
    if n > cap {
        return Err(Error::Resource(format!("n = {n} exceeds n_max = {cap} for p = {p}")));
    }
    Ok(())
}

fn binomials(n: u32) -> Vec<u128> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c: u128 = 1;
    for d in 0..=n as u128 {
        row.push(c);
        c = c * (n as u128 - d) / (d + 1);
    }
    row
}

fn powers(n: u32, p: u32) -> Vec<u64> {
    (0..=n as u64).map(|d| d.pow(p)).collect()
}

/// Weights of `rows` independent rows, each a sum of `n` fair bits.
#[derive(Debug, Clone)]
struct Layer {
    e_len: usize,
    s_len: usize,
    log_scale: f64,
    w: Vec<f64>,
}

impl Layer {
    fn origin() -> Self {
        Layer { e_len: 1, s_len: 1, log_scale: 0.0, w: vec![1.0] }
    }

    fn get(&self, e: u64, s: u64) -> f64 {
        let (e, s) = (e as usize, s as usize);
        if e < self.e_len && s < self.s_len {
            self.w[e * self.s_len + s]
        } else {
            0.0
        }
    }

    fn advance(&self, binom: &[f64], pow: &[u64]) -> Layer {
        let n = binom.len() - 1;
        let e_len = self.e_len + n;
        let s_len = self.s_len + pow[n] as usize;
        let mut w = vec![0.0; e_len * s_len];
        for e in 0..self.e_len {
            let src = &self.w[e * self.s_len..(e + 1) * self.s_len];
            for (s, &v) in src.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for d in 0..=n {
                    w[(e + d) * s_len + s + pow[d] as usize] += v * binom[d];
                }
            }
        }
        let mut log_scale = self.log_scale;
        let peak = w.iter().copied().fold(0.0, f64::max);
        if peak > RESCALE_ABOVE {
            w.iter_mut().for_each(|v| *v /= peak);
            log_scale += peak.ln();
        }
        Layer { e_len, s_len, log_scale, w }
    }
}

/// Runs the DP for `rows` rows of length `n`. Keeps every layer when
/// `keep_all`, otherwise only the last.
fn run_layers(n: u32, p: u32, rows: u32, keep_all: bool) -> Result<Vec<Layer>> {
    let nn = n as u64;
    let layer_bytes = |k: u64| (k * nn + 1) * (k * nn.pow(p) + 1) * 8;
    let bytes: u64 = if keep_all {
        (0..=rows as u64).map(layer_bytes).sum()
    } else {
        2 * layer_bytes(rows as u64)
    };
    if bytes > MEMORY_BUDGET_BYTES {
        return Err(Error::Resource(format!(
            "DP layers need {bytes} bytes, budget is {MEMORY_BUDGET_BYTES}"
        )));
    }
    let binom: Vec<f64> = binomials(n).into_iter().map(|c| c as f64).collect();
    let pow = powers(n, p);
    let mut layers = vec![Layer::origin()];
    for _ in 0..rows {
        let next = layers.last().unwrap().advance(&binom, &pow);
        if !keep_all {
            layers.clear();
        }
        layers.push(next);
    }
    Ok(layers)
}

/// One lattice point of a [`FiniteLaw`]: `count = exp(log_weight)` digraphs
/// have `Σdᵢ = e` and `Σdᵢᵖ = s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawEntry {
    pub e: u64,
    pub s: u64,
    pub log_weight: f64,
}

/// The exact joint law of `(E, S)` over all `2^{n²}` digraphs, as log counts
/// sorted by `(E, S)`. Only lattice points with positive count appear.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteLaw {
    n: u32,
    p: u32,
    entries: Vec<LawEntry>,
}

/// Lattice coordinates admitted by the open window
/// `E/n² ∈ (e−δ, e+δ)`, `S/n^{p+1} ∈ (s−δ, s+δ)`.
#[derive(Debug, Clone)]
struct Window {
    e_vals: Vec<u64>,
    s_vals: Vec<u64>,
}

impl Window {
    fn new(n: u32, p: u32, e: f64, s: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParams(format!("delta must be positive, got {delta}")));
        }
        if !e.is_finite() || !s.is_finite() {
            return Err(Error::InvalidParams(format!("window centre ({e}, {s}) is not finite")));
        }
        let e_den = (n as u64).pow(2);
        let s_den = (n as u64).pow(p + 1);
        let inside = |k: u64, den: u64, c: f64| {
            let x = k as f64 / den as f64;
            x > c - delta && x < c + delta
        };
        Ok(Window {
            e_vals: (0..=e_den).filter(|&k| inside(k, e_den, e)).collect(),
            s_vals: (0..=s_den).filter(|&k| inside(k, s_den, s)).collect(),
        })
    }

    fn contains(&self, e: u64, s: u64) -> bool {
        self.e_vals.binary_search(&e).is_ok() && self.s_vals.binary_search(&s).is_ok()
    }

    fn cells(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.e_vals.iter().flat_map(move |&e| self.s_vals.iter().map(move |&s| (e, s)))
    }
}

fn empty_window(n: u32, e: f64, s: f64, delta: f64) -> Error {
    Error::EmptyWindow(format!("n = {n}, (e, s) = ({e}, {s}), delta = {delta}"))
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Exact joint law of `(E, S)` for `n` nodes and star order `p`.
pub fn exact_joint_law(n: u32, p: u32) -> Result<FiniteLaw> {
    check_np(n, p)?;
    let layer = run_layers(n, p, n, false)?.pop().unwrap();
    let mut entries = Vec::new();
    for e in 0..layer.e_len {
        for s in 0..layer.s_len {
            let v = layer.w[e * layer.s_len + s];
            if v > 0.0 {
                entries.push(LawEntry { e: e as u64, s: s as u64, log_weight: v.ln() + layer.log_scale });
            }
        }
    }
    Ok(FiniteLaw { n, p, entries })
}

/// Like [`exact_joint_law`], reading from and writing to a cache file in
/// `dir`. A missing or unreadable cache file is rebuilt.
pub fn exact_joint_law_cached(n: u32, p: u32, dir: &Path) -> Result<FiniteLaw> {
    check_np(n, p)?;
    let path = FiniteLaw::cache_path(dir, n, p);
    if let Ok(law) = FiniteLaw::read_cache(&path) {
        if law.n == n && law.p == p {
            return Ok(law);
        }
    }
    let law = exact_joint_law(n, p)?;
    fs::create_dir_all(dir)?;
    law.write_cache(&path)?;
    Ok(law)
}

/// Integer counts by a sparse DP in `u128`, for `n² ≤ 127`. Independent of
/// the floating-point tables and used to check them.
pub fn exact_counts(n: u32, p: u32) -> Result<Vec<(u64, u64, u128)>> {
    if n == 0 || n * n > 127 || p < 2 {
        return Err(Error::InvalidParams(format!("exact counts need 1 <= n, n² <= 127, p >= 2; got n = {n}, p = {p}")));
    }
    let binom = binomials(n);
    let pow = powers(n, p);
    let mut layer = std::collections::BTreeMap::from([((0u64, 0u64), 1u128)]);
    for _ in 0..n {
        let mut next = std::collections::BTreeMap::new();
        for (&(e, s), &c) in &layer {
            for d in 0..=n as usize {
                *next.entry((e + d as u64, s + pow[d])).or_insert(0u128) += c * binom[d];
            }
        }
        layer = next;
    }
    Ok(layer.into_iter().map(|((e, s), c)| (e, s, c)).collect())
}

impl FiniteLaw {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn entries(&self) -> &[LawEntry] {
        &self.entries
    }

    /// Log count at `(E, S)`, `-inf` when no digraph lands there.
    pub fn log_weight(&self, e: u64, s: u64) -> f64 {
        self.entries
            .binary_search_by(|x| (x.e, x.s).cmp(&(e, s)))
            .map_or(f64::NEG_INFINITY, |i| self.entries[i].log_weight)
    }

    /// `log Σ count`, which equals `n² log 2`.
    pub fn log_total(&self) -> f64 {
        log_sum_exp(self.entries.iter().map(|x| x.log_weight))
    }

    /// Log counts of `E` alone, indexed by `E ∈ 0..=n²`.
    pub fn e_marginal(&self) -> Vec<f64> {
        let nn = (self.n * self.n) as usize;
        (0..=nn as u64)
            .map(|e| {
                let lo = self.entries.partition_point(|x| x.e < e);
                let hi = self.entries.partition_point(|x| x.e <= e);
                log_sum_exp(self.entries[lo..hi].iter().map(|x| x.log_weight))
            })
            .collect()
    }

    /// `ψ_n^δ(e, s) = n⁻² log #{X : (e(X), s(X)) in the open δ-window} − log 2`,
    /// which is `-inf` for an empty window.
    pub fn window_log_prob(&self, e: f64, s: f64, delta: f64) -> Result<f64> {
        let window = Window::new(self.n, self.p, e, s, delta)?;
        let inside = self.entries.iter().filter(|x| window.contains(x.e, x.s)).map(|x| x.log_weight);
        let lse = log_sum_exp(inside);
        let nn = (self.n * self.n) as f64;
        Ok(lse / nn - std::f64::consts::LN_2)
    }

    pub fn cache_path(dir: &Path, n: u32, p: u32) -> PathBuf {
        dir.join(format!("law-n{n}-p{p}.bin"))
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::with_capacity(CACHE_HEADER_LEN + 24 * self.entries.len());
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.n as u64).to_le_bytes());
        buf.extend_from_slice(&(self.p as u64).to_le_bytes());
        for x in &self.entries {
            buf.extend_from_slice(&x.e.to_le_bytes());
            buf.extend_from_slice(&x.s.to_le_bytes());
            buf.extend_from_slice(&x.log_weight.to_le_bytes());
        }
        let tmp = path.with_extension("tmp");
        fs::File::create(&tmp)?.write_all(&buf)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<FiniteLaw> {
        let mut buf = Vec::new();
        fs::File::open(path)?.read_to_end(&mut buf)?;
        Self::decode(&buf)
    }

    fn decode(buf: &[u8]) -> Result<FiniteLaw> {
        let word = |i: usize| u64::from_le_bytes(buf[i..i + 8].try_into().unwrap());
        if buf.len() < CACHE_HEADER_LEN || &buf[..8] != CACHE_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        if word(8) != CACHE_VERSION {
            return Err(Error::Format(format!("unsupported version {}", word(8))));
        }
        let (n, p) = (word(16), word(24));
        if n == 0 || n > u32::MAX as u64 || p < 2 || p > u32::MAX as u64 {
            return Err(Error::Format(format!("bad header n = {n}, p = {p}")));
        }
        let body = &buf[CACHE_HEADER_LEN..];
        if !body.len().is_multiple_of(24) {
            return Err(Error::Format("truncated body".into()));
        }
        let entries: Vec<LawEntry> = body
            .chunks_exact(24)
            .map(|c| LawEntry {
                e: u64::from_le_bytes(c[..8].try_into().unwrap()),
                s: u64::from_le_bytes(c[8..16].try_into().unwrap()),
                log_weight: f64::from_le_bytes(c[16..].try_into().unwrap()),
            })
            .collect();
        if entries.windows(2).any(|w| (w[0].e, w[0].s) >= (w[1].e, w[1].s)) {
            return Err(Error::Format("entries not strictly sorted".into()));
        }
        Ok(FiniteLaw { n: n as u32, p: p as u32, entries })
    }
}

/// Law of one row sum `d₁` given that `(e(X), s(X))` falls in the window.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalRowLaw {
    pub n: u32,
    /// `probabilities[d]` for `d ∈ 0..=n`.
    pub probabilities: Vec<f64>,
}

impl ConditionalRowLaw {
    /// Mass on row sums with `d/n` within `radius` of any of `centers`.
    pub fn mass_within(&self, centers: &[f64], radius: f64) -> f64 {
        let n = self.n as f64;
        self.probabilities
            .iter()
            .enumerate()
            .filter(|&(d, _)| centers.iter().any(|c| (d as f64 / n - c).abs() <= radius))
            .map(|(_, &q)| q)
            .sum()
    }

    /// True when some interior `d` is strictly below the maximum on each side.
    pub fn has_interior_dip(&self) -> bool {
        let q = &self.probabilities;
        (1..q.len().saturating_sub(1)).any(|j| {
            let left = q[..j].iter().copied().fold(0.0, f64::max);
            let right = q[j + 1..].iter().copied().fold(0.0, f64::max);
            q[j] < left && q[j] < right
        })
    }

    pub fn mean(&self) -> f64 {
        self.probabilities.iter().enumerate().map(|(d, q)| d as f64 * q).sum()
    }
}

/// Exact law of `d₁` conditioned on the open window around `(e, s)`.
pub fn conditional_row_law(n: u32, p: u32, e: f64, s: f64, delta: f64) -> Result<ConditionalRowLaw> {
    check_np(n, p)?;
    let window = Window::new(n, p, e, s, delta)?;
    let rest = run_layers(n, p, n - 1, false)?.pop().unwrap();
    let binom: Vec<f64> = binomials(n).into_iter().map(|c| c as f64).collect();
    let pow = powers(n, p);
    let mut weights = vec![0.0; n as usize + 1];
    for (ew, sw) in window.cells() {
        for (d, w) in weights.iter_mut().enumerate() {
            if ew >= d as u64 && sw >= pow[d] {
                *w += binom[d] * rest.get(ew - d as u64, sw - pow[d]);
            }
        }
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(empty_window(n, e, s, delta));
    }
    Ok(ConditionalRowLaw { n, probabilities: weights.into_iter().map(|w| w / total).collect() })
}

/// Exact sampler of row-sum vectors `(d₁, …, d_n)` conditioned on a window.
///
/// A terminal cell `(E, S)` is drawn from the window with probability
/// proportional to its count, then rows are peeled off backwards: row `k`
/// takes `d` with weight `C(n, d) · W_{k−1}(E − d, S − dᵖ)`.
#[derive(Debug, Clone)]
pub struct ConditionedSampler {
    n: u32,
    binom: Vec<f64>,
    pow: Vec<u64>,
    layers: Vec<Layer>,
    cells: Vec<(u64, u64)>,
    terminal: WeightedIndex<f64>,
}

impl ConditionedSampler {
    pub fn new(n: u32, p: u32, e: f64, s: f64, delta: f64) -> Result<Self> {
        check_np(n, p)?;
        let window = Window::new(n, p, e, s, delta)?;
        let layers = run_layers(n, p, n, true)?;
        let last = layers.last().unwrap();
        let (cells, weights): (Vec<_>, Vec<_>) = window
            .cells()
            .map(|(ce, cs)| ((ce, cs), last.get(ce, cs)))
            .filter(|&(_, w)| w > 0.0)
            .unzip();
        let terminal = WeightedIndex::new(&weights).map_err(|_| empty_window(n, e, s, delta))?;
        Ok(ConditionedSampler {
            n,
            binom: binomials(n).into_iter().map(|c| c as f64).collect(),
            pow: powers(n, p),
            layers,
            cells,
            terminal,
        })
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let (mut e, mut s) = self.cells[self.terminal.sample(rng)];
        let mut rows = vec![0u32; self.n as usize];
        for k in (1..=self.n as usize).rev() {
            let prev = &self.layers[k - 1];
            let weights: Vec<f64> = (0..=self.n as usize)
                .map(|d| {
                    if e >= d as u64 && s >= self.pow[d] {
                        self.binom[d] * prev.get(e - d as u64, s - self.pow[d])
                    } else {
                        0.0
                    }
                })
                .collect();
            let d = WeightedIndex::new(&weights).expect("reachable cell has a predecessor").sample(rng);
            rows[k - 1] = d as u32;
            e -= d as u64;
            s -= self.pow[d];
        }
        rows
    }
}

/// `count` exact conditioned samples drawn from a ChaCha8 stream seeded by `seed`.
pub fn sample_conditioned(
    n: u32,
    p: u32,
    e: f64,
    s: f64,
    delta: f64,
    seed: u64,
    count: usize,
) -> Result<Vec<Vec<u32>>> {
    if count == 0 {
        return Err(Error::InvalidParams("count must be >= 1".into()));
    }
    let sampler = ConditionedSampler::new(n, p, e, s, delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sampler.sample(&mut rng)).collect())
}

/// Default window half-width at `n`: `max(0.05, 2/n)`.
pub fn default_delta(n: u32) -> f64 {
    f64::max(0.05, 2.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(law: &FiniteLaw) -> Vec<(u64, u64, u64)> {
        law.entries().iter().map(|x| (x.e, x.s, x.log_weight.exp().round() as u64)).collect()
    }

    #[test]
    fn single_node() {
        let law = exact_joint_law(1, 2).unwrap();
        assert_eq!(counts(&law), vec![(0, 0, 1), (1, 1, 1)]);
    }

    #[test]
    fn two_nodes_square_and_cube() {
        let law = exact_joint_law(2, 2).unwrap();
        assert_eq!(counts(&law), vec![(0, 0, 1), (1, 1, 4), (2, 2, 4), (2, 4, 2), (3, 5, 4), (4, 8, 1)]);
        let cubes = exact_joint_law(2, 3).unwrap();
        let s: Vec<u64> = cubes.entries().iter().map(|x| x.s).collect();
        assert_eq!(s, vec![0, 1, 2, 8, 9, 16]);
    }

    #[test]
    fn integer_dp_agrees_with_float_tables() {
        for n in 1..=6 {
            let exact = exact_counts(n, 2).unwrap();
            let law = exact_joint_law(n, 2).unwrap();
            assert_eq!(exact.len(), law.entries().len());
            for (&(e, s, c), x) in exact.iter().zip(law.entries()) {
                assert_eq!((e, s), (x.e, x.s));
                assert!((x.log_weight - (c as f64).ln()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalization() {
        for n in 1..=10 {
            let law = exact_joint_law(n, 2).unwrap();
            let want = (n * n) as f64 * std::f64::consts::LN_2;
            assert!((law.log_total() - want).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn window_examples() {
        let law = exact_joint_law(1, 2).unwrap();
        assert_eq!(law.window_log_prob(1.0, 1.0, 0.1).unwrap(), -std::f64::consts::LN_2);
        let law = exact_joint_law(2, 2).unwrap();
        let v = law.window_log_prob(0.5, 0.25, 0.01).unwrap();
        assert!((v - (4f64.ln() / 4.0 - std::f64::consts::LN_2)).abs() < 1e-15);
        assert!((v + 0.3466).abs() < 1e-4);
        assert_eq!(law.window_log_prob(0.6, 0.9, 0.01).unwrap(), f64::NEG_INFINITY);
        assert!(law.window_log_prob(0.5, 0.25, 0.0).is_err());
    }

    #[test]
    fn row_law_examples() {
        let law = conditional_row_law(2, 2, 0.75, 0.625, 0.01).unwrap();
        assert_eq!(law.probabilities, vec![0.0, 0.5, 0.5]);
        let law = conditional_row_law(2, 2, 0.5, 0.25, 0.01).unwrap();
        assert_eq!(law.probabilities, vec![0.0, 1.0, 0.0]);
        assert!(matches!(conditional_row_law(2, 2, 0.6, 0.9, 0.01), Err(Error::EmptyWindow(_))));
    }

    #[test]
    fn sampler_unique_support_and_determinism() {
        let draws = sample_conditioned(2, 2, 0.5, 0.25, 0.01, 7, 50).unwrap();
        assert!(draws.iter().all(|d| d == &vec![1, 1]));
        let a = sample_conditioned(8, 2, 0.5, 0.3, 0.05, 42, 200).unwrap();
        let b = sample_conditioned(8, 2, 0.5, 0.3, 0.05, 42, 200).unwrap();
        assert_eq!(a, b);
        for rows in &a {
            let e: u32 = rows.iter().sum();
            let s: u32 = rows.iter().map(|d| d * d).sum();
            assert!((e as f64 / 64.0 - 0.5).abs() < 0.05 && (s as f64 / 512.0 - 0.3).abs() < 0.05);
        }
    }

    #[test]
    fn n_max_limits() {
        assert_eq!(n_max(2), 16);
        assert_eq!(n_max(3), 12);
        assert!(n_max(5) >= 2);
        assert!(matches!(exact_joint_law(17, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let fresh = exact_joint_law_cached(5, 2, dir.path()).unwrap();
        let cached = exact_joint_law_cached(5, 2, dir.path()).unwrap();
        assert_eq!(fresh, cached);
        assert_eq!(fresh, exact_joint_law(5, 2).unwrap());
        let path = FiniteLaw::cache_path(dir.path(), 5, 2);
        fs::write(&path, b"garbage").unwrap();
        assert!(matches!(FiniteLaw::read_cache(&path), Err(Error::Format(_))));
        assert_eq!(exact_joint_law_cached(5, 2, dir.path()).unwrap(), fresh);
    }
}
