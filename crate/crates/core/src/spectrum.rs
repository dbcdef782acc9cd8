//! The spectrum engine.
//!
//! A bracketing of size `k` induces a `k`-ary term function on a finite
//! groupoid, stored as a flat table of `g^k` values indexed with `x_1` most
//! significant. `s(n)` is the number of distinct tables among all bracketings
//! of size `n`.
//!
//! Since the table of `(PQ)` depends only on the tables of `P` and `Q`, the
//! distinct `n`-ary tables are exactly the distinct `combine(p, q)` for
//! `p ∈ T_k`, `q ∈ T_{n-k}`. The engine runs that layered program, keeping one
//! copy of each distinct table per arity.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::bracketing::{catalan, Bracketing};
use crate::error::{Error, Result};
use crate::groupoid::{enumerate_classes, Element, Groupoid};

pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Upper bound on the bytes of candidate tables evaluated in one parallel batch.
const BATCH_BYTES: usize = 64 << 20;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TermFunction {
    arity: usize,
    base: usize,
    values: Vec<Element>,
}

impl TermFunction {
    /// The unary identity `x_1 ↦ x_1`.
    pub fn identity(base: usize) -> Self {
        TermFunction {
            arity: 1,
            base,
            values: (0..base).map(|a| a as Element).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    /// `Σ x_i · g^(k−i)`.
    pub fn index(&self, args: &[Element]) -> Result<usize> {
        if args.len() != self.arity {
            return Err(Error::domain(format!(
                "{} arguments for a function of arity {}",
                args.len(),
                self.arity
            )));
        }
        args.iter().try_fold(0usize, |acc, &a| {
            if a as usize >= self.base {
                Err(Error::domain(format!("argument {a} outside base {}", self.base)))
            } else {
                Ok(acc * self.base + a as usize)
            }
        })
    }

    pub fn apply(&self, args: &[Element]) -> Result<Element> {
        Ok(self.values[self.index(args)?])
    }
}

/// Number of bytes of a table of the given arity, if representable.
fn table_len(base: usize, arity: usize) -> Option<usize> {
    u32::try_from(arity).ok().and_then(|a| base.checked_pow(a))
}

fn check_table_budget(base: usize, arity: usize, budget: u64) -> Result<usize> {
    match table_len(base, arity) {
        Some(len) if len as u128 <= budget as u128 => Ok(len),
        _ => Err(Error::Resource {
            arity,
            required: (base as u128).checked_pow(arity as u32).unwrap_or(u128::MAX),
            budget,
        }),
    }
}

/// Table of the term function induced by `b`, evaluated tuple by tuple.
pub fn term_table(b: &Bracketing, g: &Groupoid) -> Result<TermFunction> {
    term_table_with_budget(b, g, DEFAULT_MEMORY_BUDGET)
}

pub fn term_table_with_budget(b: &Bracketing, g: &Groupoid, budget: u64) -> Result<TermFunction> {
    let k = b.size();
    let base = g.size();
    let len = check_table_budget(base, k, budget)?;
    let mut values = Vec::with_capacity(len);
    let mut args = vec![0 as Element; k];
    for _ in 0..len {
        values.push(b.fold(&mut |i| args[i], &mut |x, y| g.op(x, y)));
        // Odometer increment, last variable fastest.
        for slot in args.iter_mut().rev() {
            *slot += 1;
            if (*slot as usize) < base {
                break;
            }
            *slot = 0;
        }
    }
    Ok(TermFunction { arity: k, base, values })
}

/// The table of `(PQ)` from the tables of `P` and `Q`:
/// `values[a·g^l + b] = p[a] ∘ q[b]`.
pub fn combine(p: &TermFunction, q: &TermFunction, g: &Groupoid) -> Result<TermFunction> {
    if p.base != q.base || p.base != g.size() {
        return Err(Error::domain(format!(
            "base mismatch: {} and {} over a groupoid of size {}",
            p.base,
            q.base,
            g.size()
        )));
    }
    Ok(combine_unchecked(p, q, g))
}

fn combine_unchecked(p: &TermFunction, q: &TermFunction, g: &Groupoid) -> TermFunction {
    let mut values = Vec::with_capacity(p.values.len() * q.values.len());
    for &a in &p.values {
        let row = g.row(a);
        values.extend(q.values.iter().map(|&b| row[b as usize]));
    }
    TermFunction {
        arity: p.arity + q.arity,
        base: p.base,
        values,
    }
}

fn table_hash(values: &[Element]) -> u64 {
    const K: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut h = (values.len() as u64).wrapping_mul(K);
    let mut chunks = values.chunks_exact(8);
    for c in &mut chunks {
        let w = u64::from_le_bytes(c.try_into().expect("8 bytes"));
        h = (h.rotate_left(5) ^ w).wrapping_mul(K);
    }
    for &b in chunks.remainder() {
        h = (h.rotate_left(5) ^ b as u64).wrapping_mul(K);
    }
    h ^ (h >> 32)
}

/// Distinct tables of one arity, in first-insertion order. Lookup by 64-bit
/// hash, confirmed by full table comparison.
#[derive(Default)]
struct Layer {
    functions: Vec<TermFunction>,
    witnesses: Vec<Bracketing>,
    index: HashMap<u64, Vec<usize>>,
}

impl Layer {
    fn insert(&mut self, hash: u64, f: TermFunction, witness: impl FnOnce() -> Option<Bracketing>) {
        let bucket = self.index.entry(hash).or_default();
        if bucket.iter().any(|&i| self.functions[i].values == f.values) {
            return;
        }
        bucket.push(self.functions.len());
        self.functions.push(f);
        if let Some(w) = witness() {
            self.witnesses.push(w);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumOptions {
    pub max_arity: usize,
    pub memory_budget: u64,
    pub parallel: bool,
    /// Keep one bracketing per distinct term function.
    pub witnesses: bool,
    /// Fill in `s(m) = 1` for all `m` past the first `n ≥ 3` with `s(n) = 1`.
    pub short_circuit: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            max_arity: 7,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            parallel: true,
            witnesses: false,
            short_circuit: true,
        }
    }
}

impl SpectrumOptions {
    pub fn up_to(max_arity: usize) -> Self {
        SpectrumOptions { max_arity, ..Default::default() }
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn with_witnesses(mut self) -> Self {
        self.witnesses = true;
        self
    }

    pub fn without_short_circuit(mut self) -> Self {
        self.short_circuit = false;
        self
    }

    pub fn with_budget(mut self, bytes: u64) -> Self {
        self.memory_budget = bytes;
        self
    }
}

/// The initial segment `s(1..=N)` of an associative spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub groupoid: Groupoid,
    /// `counts[n - 1] = s(n)`.
    pub counts: Vec<u64>,
    /// Largest `n` with `s(m) = C_{m−1}` for every `m ≤ n`.
    pub catalan_prefix: usize,
    /// Smallest `n ≥ 3` with `s(n) = 1`.
    pub stabilized_at: Option<usize>,
    /// Arities whose counts were computed rather than filled in after stabilization.
    pub computed_up_to: usize,
    /// `witnesses[n - 1]` holds one bracketing per distinct `n`-ary function,
    /// when requested.
    pub witnesses: Option<Vec<Vec<Bracketing>>>,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    s: &'a [u64],
    catalan_prefix: usize,
    stabilized_at: Option<usize>,
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumJson {
            s: &self.counts,
            catalan_prefix: self.catalan_prefix,
            stabilized_at: self.stabilized_at,
        }
        .serialize(serializer)
    }
}

impl Spectrum {
    fn from_counts(groupoid: Groupoid, counts: Vec<u64>, computed_up_to: usize) -> Self {
        let catalan_prefix = counts
            .iter()
            .enumerate()
            .take_while(|&(i, &s)| catalan(i as u32).is_ok_and(|c| c == s as u128))
            .count();
        let stabilized_at = counts
            .iter()
            .enumerate()
            .skip(2)
            .find(|&(_, &s)| s == 1)
            .map(|(i, _)| i + 1);
        Spectrum {
            groupoid,
            counts,
            catalan_prefix,
            stabilized_at,
            computed_up_to,
            witnesses: None,
        }
    }

    /// `s(n)`, 1-based.
    pub fn s(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.counts.get(i)).copied()
    }

    pub fn max_arity(&self) -> usize {
        self.counts.len()
    }

    pub fn is_catalan(&self) -> bool {
        self.catalan_prefix == self.counts.len()
    }

    /// See [`law_violations`].
    pub fn law_violations(&self) -> Vec<String> {
        law_violations(&self.counts)
    }
}

/// Checks the general laws every spectrum `s(1..=N)` obeys and describes
/// each violation: `s(1) = s(2) = 1`, `1 ≤ s(n) ≤ C_{n−1}`,
/// `s(n) ≤ Σ s(k)s(n−k)`, stabilization after the first `n ≥ 3` with
/// `s(n) = 1`, and strictness below Catalan once a count falls short.
pub fn law_violations(c: &[u64]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, &s) in c.iter().enumerate().take(2) {
        if s != 1 {
            out.push(format!("s({}) = {s}, expected 1", i + 1));
        }
    }
    let mut short_at: Option<usize> = None;
    for n in 1..=c.len() {
        let s = c[n - 1] as u128;
        let cat = catalan(n as u32 - 1).unwrap_or(u128::MAX);
        if s == 0 || s > cat {
            out.push(format!("s({n}) = {s} outside 1..=C_{} = {cat}", n - 1));
        }
        if n >= 2 {
            let bound: u128 = (1..n).map(|k| c[k - 1] as u128 * c[n - k - 1] as u128).sum();
            if s > bound {
                out.push(format!("s({n}) = {s} exceeds Σ s(k)s(n−k) = {bound}"));
            }
        }
        if let Some(n0) = short_at {
            if s >= cat {
                out.push(format!("s({n}) = C_{} although s({n0}) < C_{}", n - 1, n0 - 1));
            }
        } else if s < cat {
            short_at = Some(n);
        }
    }
    let stabilized = c.iter().enumerate().skip(2).find(|&(_, &s)| s == 1).map(|(i, _)| i + 1);
    if let Some(n0) = stabilized {
        for m in n0 + 1..=c.len() {
            if c[m - 1] != 1 {
                out.push(format!("s({n0}) = 1 but s({m}) = {}", c[m - 1]));
            }
        }
    }
    out
}

struct Engine<'a> {
    g: &'a Groupoid,
    opts: SpectrumOptions,
    layers: Vec<Layer>,
}

impl<'a> Engine<'a> {
    fn new(g: &'a Groupoid, opts: SpectrumOptions) -> Result<Self> {
        if opts.max_arity == 0 {
            return Err(Error::SizeDomain { size: 0, min: 1, max: usize::MAX });
        }
        // Worst case for arity n: C_{n−1} distinct tables of g^n bytes each.
        for n in 1..=opts.max_arity {
            let len = (g.size() as u128).checked_pow(n as u32);
            let cat = catalan(n as u32 - 1).ok();
            let required = match (len, cat) {
                (Some(l), Some(c)) => l.checked_mul(c),
                _ => None,
            };
            match required {
                Some(r) if r <= opts.memory_budget as u128 && table_len(g.size(), n).is_some() => {}
                _ => {
                    return Err(Error::Resource {
                        arity: n,
                        required: required.unwrap_or(u128::MAX),
                        budget: opts.memory_budget,
                    })
                }
            }
        }
        Ok(Engine { g, opts, layers: Vec::new() })
    }

    /// Computes the next arity and returns its count.
    fn step(&mut self) -> u64 {
        let n = self.layers.len() + 1;
        let mut layer = Layer::default();
        if n == 1 {
            let id = TermFunction::identity(self.g.size());
            let h = table_hash(&id.values);
            let w = self.opts.witnesses;
            layer.insert(h, id, || w.then(Bracketing::leaf));
            self.layers.push(layer);
            return 1;
        }
        let pairs: Vec<(usize, usize, usize)> = (1..n)
            .flat_map(|k| {
                let (lp, lq) = (&self.layers[k - 1], &self.layers[n - k - 1]);
                (0..lp.functions.len())
                    .flat_map(move |i| (0..lq.functions.len()).map(move |j| (k, i, j)))
            })
            .collect();
        let len = table_len(self.g.size(), n).expect("checked up front").max(1);
        let batch = (BATCH_BYTES / len).max(1);
        let g = self.g;
        let layers = &self.layers;
        let make = |&(k, i, j): &(usize, usize, usize)| {
            let f = combine_unchecked(
                &layers[k - 1].functions[i],
                &layers[n - k - 1].functions[j],
                g,
            );
            (table_hash(&f.values), f)
        };
        for chunk in pairs.chunks(batch) {
            let made: Vec<(u64, TermFunction)> = if self.opts.parallel {
                chunk.par_iter().map(make).collect()
            } else {
                chunk.iter().map(make).collect()
            };
            for (&(k, i, j), (h, f)) in chunk.iter().zip(made) {
                let w = self.opts.witnesses;
                layer.insert(h, f, || {
                    w.then(|| {
                        Bracketing::pair(
                            layers[k - 1].witnesses[i].clone(),
                            layers[n - k - 1].witnesses[j].clone(),
                        )
                    })
                });
            }
        }
        let count = layer.functions.len() as u64;
        self.layers.push(layer);
        count
    }
}

/// `s(1..=N)` by the layered program. Counts are identical whether or not
/// the work runs in parallel.
pub fn spectrum(g: &Groupoid, opts: SpectrumOptions) -> Result<Spectrum> {
    let mut engine = Engine::new(g, opts)?;
    let mut counts = Vec::with_capacity(opts.max_arity);
    let mut computed = 0;
    for n in 1..=opts.max_arity {
        let stable = n > 3 && counts[n - 2] == 1;
        if opts.short_circuit && stable {
            counts.push(1);
            continue;
        }
        counts.push(engine.step());
        computed = n;
    }
    let mut s = Spectrum::from_counts(g.clone(), counts, computed);
    if opts.witnesses {
        s.witnesses = Some(engine.layers.into_iter().map(|l| l.witnesses).collect());
    }
    Ok(s)
}

/// Whether `s(n) = C_{n−1}` for all `n ≤ max_arity`, stopping at the first
/// arity that falls short (later ones must then fall short too).
pub fn is_catalan_up_to(g: &Groupoid, max_arity: usize) -> Result<bool> {
    let mut engine = Engine::new(g, SpectrumOptions::up_to(max_arity))?;
    for n in 1..=max_arity {
        if engine.step() as u128 != catalan(n as u32 - 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `n ≥ 3` with `s(n) = 1`, computed in full through `max_arity`;
/// errors if some later `s(m)` differs from 1.
pub fn stabilization_check(g: &Groupoid, max_arity: usize) -> Result<Option<usize>> {
    let s = spectrum(g, SpectrumOptions::up_to(max_arity).without_short_circuit())?;
    if let Some(n) = s.stabilized_at {
        if let Some(m) = (n + 1..=max_arity).find(|&m| s.s(m) != Some(1)) {
            return Err(Error::domain(format!(
                "s({n}) = 1 but s({m}) = {}",
                s.s(m).unwrap_or_default()
            )));
        }
    }
    Ok(s.stabilized_at)
}

/// Result of running the engine over every three-element isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanTable {
    pub max_arity: usize,
    /// `(s(3), …, s(N))` of nonassociative classes → number of classes.
    pub rows: BTreeMap<Vec<u64>, usize>,
    pub associative: usize,
    pub total: usize,
}

impl ScanTable {
    /// `s3,…,sN,count` header, sorted rows, then `associative,<count>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (3..=self.max_arity).map(|n| format!("s{n}")).collect();
        out.push_str(&header.join(","));
        out.push_str(",count\n");
        for (segment, count) in &self.rows {
            for s in segment {
                out.push_str(&s.to_string());
                out.push(',');
            }
            out.push_str(&count.to_string());
            out.push('\n');
        }
        out.push_str(&format!("associative,{}\n", self.associative));
        out
    }
}

/// Spectra of all 3330 three-element classes through `max_arity`.
pub fn scan3(max_arity: usize, parallel: bool) -> Result<ScanTable> {
    scan3_with_budget(max_arity, parallel, DEFAULT_MEMORY_BUDGET)
}

pub fn scan3_with_budget(max_arity: usize, parallel: bool, memory_budget: u64) -> Result<ScanTable> {
    if max_arity < 3 {
        return Err(Error::SizeDomain { size: max_arity, min: 3, max: usize::MAX });
    }
    let classes = enumerate_classes(3)?;
    let opts = SpectrumOptions::up_to(max_arity).sequential().with_budget(memory_budget);
    let run = |g: &Groupoid| spectrum(g, opts).map(|s| s.counts);
    let spectra: Vec<Vec<u64>> = if parallel {
        classes.par_iter().map(run).collect::<Result<_>>()?
    } else {
        classes.iter().map(run).collect::<Result<_>>()?
    };
    let mut rows = BTreeMap::new();
    let mut associative = 0;
    for counts in &spectra {
        if counts[2] == 1 {
            associative += 1;
        } else {
            *rows.entry(counts[2..].to_vec()).or_insert(0) += 1;
        }
    }
    Ok(ScanTable {
        max_arity,
        rows,
        associative,
        total: classes.len(),
    })
}
