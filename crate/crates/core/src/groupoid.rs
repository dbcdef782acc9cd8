//! Finite groupoids `(n, ∘)` on `{0, …, n-1}` stored as Cayley tables with
//! `table[a][b] = a ∘ b` (row = left operand).
//!
//! Also here: the idempotent code of three-element tables, a general base-`g`
//! "full code", relabeling and transposition, canonical forms under
//! isomorphism, enumeration of isomorphism classes, generated subgroupoids,
//! and builders for the concrete operations studied in the literature on
//! associative spectra.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Element = u8;

/// Largest carrier accepted by the table representation.
pub const MAX_SIZE: usize = 256;

/// Largest carrier for which `canonical_form` tries all `g!` relabelings.
pub const MAX_CANONICAL_SIZE: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GroupoidJson", into = "GroupoidJson")]
pub struct Groupoid {
    size: usize,
    table: Vec<Element>,
}

#[derive(Serialize, Deserialize)]
struct GroupoidJson {
    size: usize,
    table: Vec<Vec<Element>>,
}

impl TryFrom<GroupoidJson> for Groupoid {
    type Error = Error;

    fn try_from(j: GroupoidJson) -> Result<Self> {
        let g = Groupoid::from_rows(j.table)?;
        if g.size != j.size {
            return Err(Error::domain(format!(
                "declared size {} but table has {} rows",
                j.size, g.size
            )));
        }
        Ok(g)
    }
}

impl From<Groupoid> for GroupoidJson {
    fn from(g: Groupoid) -> Self {
        GroupoidJson {
            size: g.size,
            table: g.rows().map(|r| r.to_vec()).collect(),
        }
    }
}

impl Groupoid {
    /// Builds from a row-major flat table of `size²` entries.
    pub fn from_flat(size: usize, table: Vec<Element>) -> Result<Self> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::SizeDomain { size, min: 1, max: MAX_SIZE });
        }
        if table.len() != size * size {
            return Err(Error::domain(format!(
                "table of size {size} needs {} entries, got {}",
                size * size,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= size) {
            return Err(Error::domain(format!("entry {bad} outside carrier of size {size}")));
        }
        Ok(Groupoid { size, table })
    }

    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::domain("Cayley table must be square"));
        }
        Self::from_flat(size, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let v = f(a, b);
                if v >= size {
                    return Err(Error::domain(format!("{a}∘{b} = {v} outside carrier")));
                }
                table.push(v as Element);
            }
        }
        Self::from_flat(size, table)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn eval(&self, a: Element, b: Element) -> Result<Element> {
        if a as usize >= self.size || b as usize >= self.size {
            return Err(Error::domain(format!(
                "element out of range for size {}: ({a}, {b})",
                self.size
            )));
        }
        Ok(self.op(a, b))
    }

    /// Unchecked `a ∘ b`; panics when an argument is outside the carrier.
    #[inline]
    pub fn op(&self, a: Element, b: Element) -> Element {
        self.table[a as usize * self.size + b as usize]
    }

    /// Row `a`, i.e. the map `b ↦ a ∘ b`.
    #[inline]
    pub fn row(&self, a: Element) -> &[Element] {
        let s = a as usize * self.size;
        &self.table[s..s + self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        self.table.chunks(self.size)
    }

    pub fn flat(&self) -> &[Element] {
        &self.table
    }

    fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size).map(|a| a as Element)
    }

    /// Direct check of `(a∘b)∘c = a∘(b∘c)` over all triples.
    pub fn is_associative(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                let ab = self.op(a, b);
                self.elements().all(|c| self.op(ab, c) == self.op(a, self.op(b, c)))
            })
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.elements().all(|a| self.op(a, a) == a)
    }

    /// Base-`g` reading of the table in row-major order, `table[0][0]` most
    /// significant.
    pub fn full_code(&self) -> Result<u128> {
        let g = self.size as u128;
        self.table.iter().try_fold(0u128, |acc, &v| {
            acc.checked_mul(g)
                .and_then(|x| x.checked_add(v as u128))
                .ok_or_else(|| Error::Range(format!("full code of a size-{} table exceeds 128 bits", self.size)))
        })
    }

    pub fn from_full_code(size: usize, code: u128) -> Result<Self> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::SizeDomain { size, min: 1, max: MAX_SIZE });
        }
        let g = size as u128;
        let mut table = vec![0 as Element; size * size];
        let mut rest = code;
        for slot in table.iter_mut().rev() {
            *slot = (rest % g) as Element;
            rest /= g;
        }
        if rest != 0 {
            return Err(Error::Range(format!("code {code} is not below {size}^{}", size * size)));
        }
        Ok(Groupoid { size, table })
    }

    /// The groupoid `H` with `H[π(a)][π(b)] = π(G[a][b])`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.size)?;
        Ok(self.relabel_unchecked(perm))
    }

    fn relabel_unchecked(&self, perm: &[usize]) -> Self {
        let g = self.size;
        let mut table = vec![0 as Element; g * g];
        for a in 0..g {
            for b in 0..g {
                table[perm[a] * g + perm[b]] = perm[self.table[a * g + b] as usize] as Element;
            }
        }
        Groupoid { size: g, table }
    }

    /// The antiisomorphic groupoid `a ∘' b = b ∘ a`.
    pub fn transpose(&self) -> Self {
        let g = self.size;
        let mut table = vec![0 as Element; g * g];
        for a in 0..g {
            for b in 0..g {
                table[a * g + b] = self.table[b * g + a];
            }
        }
        Groupoid { size: g, table }
    }

    /// The relabeling with the smallest full code (isomorphism only).
    pub fn canonical_form(&self) -> Result<Self> {
        if self.size > MAX_CANONICAL_SIZE {
            return Err(Error::SizeDomain { size: self.size, min: 1, max: MAX_CANONICAL_SIZE });
        }
        let mut best = self.clone();
        for_each_permutation(self.size, |perm| {
            let h = self.relabel_unchecked(perm);
            if h.table < best.table {
                best = h;
            }
        });
        Ok(best)
    }

    /// Canonical form under the coarser relation generated by isomorphism and
    /// antiisomorphism.
    pub fn canonical_form_with_anti(&self) -> Result<Self> {
        let a = self.canonical_form()?;
        let b = self.transpose().canonical_form()?;
        Ok(a.min(b))
    }

    /// Closure of `generators` under `∘`, relabeled onto `0..m` in increasing
    /// order of the original elements.
    pub fn subgroupoid_generated(&self, generators: &[Element]) -> Result<Subgroupoid> {
        if generators.is_empty() {
            return Err(Error::domain("generating set must be nonempty"));
        }
        if let Some(&bad) = generators.iter().find(|&&x| x as usize >= self.size) {
            return Err(Error::domain(format!("generator {bad} outside carrier")));
        }
        let mut closed: BTreeSet<Element> = generators.iter().copied().collect();
        loop {
            let mut fresh = Vec::new();
            for &a in &closed {
                for &b in &closed {
                    let c = self.op(a, b);
                    if !closed.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            closed.extend(fresh);
        }
        let embedding: Vec<Element> = closed.into_iter().collect();
        let mut index = vec![usize::MAX; self.size];
        for (i, &e) in embedding.iter().enumerate() {
            index[e as usize] = i;
        }
        let groupoid = Groupoid::from_fn(embedding.len(), |i, j| {
            index[self.op(embedding[i], embedding[j]) as usize]
        })?;
        Ok(Subgroupoid { groupoid, embedding })
    }
}

impl fmt::Debug for Groupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "Groupoid[{}]", rows.join(" | "))
    }
}

/// A generated subgroupoid together with `embedding[i]` = the element of the
/// parent carrier that `i` stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroupoid {
    pub groupoid: Groupoid,
    pub embedding: Vec<Element>,
}

fn check_permutation(perm: &[usize], size: usize) -> Result<()> {
    if perm.len() != size {
        return Err(Error::domain(format!(
            "permutation of length {} for carrier of size {size}",
            perm.len()
        )));
    }
    let mut seen = vec![false; size];
    for &p in perm {
        if p >= size || seen[p] {
            return Err(Error::domain(format!("{perm:?} is not a permutation of 0..{size}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Visits all permutations of `0..n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        visit(&perm);
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Code of an idempotent groupoid on `{0,1,2}`:
/// `(0∘1)·3⁵ + (0∘2)·3⁴ + (1∘0)·3³ + (1∘2)·3² + (2∘0)·3 + (2∘1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdempotentCode(u16);

impl IdempotentCode {
    pub const MAX: u16 = 728;

    pub fn new(value: u16) -> Result<Self> {
        if value > Self::MAX {
            return Err(Error::Range(format!("idempotent code {value} exceeds {}", Self::MAX)));
        }
        Ok(IdempotentCode(value))
    }

    pub fn value(self) -> u16 {
        self.0
    }
}

const OFF_DIAGONAL: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

pub fn encode_idempotent(g: &Groupoid) -> Result<IdempotentCode> {
    if g.size() != 3 {
        return Err(Error::domain(format!("idempotent codes need size 3, got {}", g.size())));
    }
    if !g.is_idempotent() {
        return Err(Error::domain("groupoid is not idempotent"));
    }
    let code = OFF_DIAGONAL
        .iter()
        .fold(0u16, |acc, &(a, b)| acc * 3 + g.op(a as Element, b as Element) as u16);
    IdempotentCode::new(code)
}

pub fn decode_idempotent(code: IdempotentCode) -> Groupoid {
    let mut table = vec![0, 0, 0, 0, 1, 0, 0, 0, 2];
    let mut rest = code.0;
    for &(a, b) in OFF_DIAGONAL.iter().rev() {
        table[a * 3 + b] = (rest % 3) as Element;
        rest /= 3;
    }
    Groupoid { size: 3, table }
}

/// All isomorphism-class representatives (canonical forms) of groupoids of
/// size `g ≤ 3`, sorted by full code.
pub fn enumerate_classes(g: usize) -> Result<Vec<Groupoid>> {
    if !(1..=3).contains(&g) {
        return Err(Error::SizeDomain { size: g, min: 1, max: 3 });
    }
    let total = (g as u128).pow((g * g) as u32);
    let reps: BTreeSet<Groupoid> = (0..total as u64)
        .into_par_iter()
        .map(|code| {
            Groupoid::from_full_code(g, code as u128)
                .and_then(|t| t.canonical_form())
                .expect("g ≤ 3 is within every guard")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(reps.into_iter().collect())
}

// Builders.

/// Two-element operations indexed 1 to 7: constant 1, first projection,
/// `x ∧ y`, `x + y mod 2`, `x + 1 mod 2`, NOR `x | y`, implication `x → y`.
pub fn boolean_op(id: u8) -> Result<Groupoid> {
    let rows: [[Element; 2]; 2] = match id {
        1 => [[1, 1], [1, 1]],
        2 => [[0, 0], [1, 1]],
        3 => [[0, 0], [0, 1]],
        4 => [[0, 1], [1, 0]],
        5 => [[1, 1], [0, 0]],
        6 => [[1, 0], [0, 0]],
        7 => [[1, 1], [0, 1]],
        _ => return Err(Error::domain(format!("Boolean operation id {id} not in 1..=7"))),
    };
    Groupoid::from_flat(2, rows.concat())
}

pub fn sheffer() -> Groupoid {
    boolean_op(6).expect("valid id")
}

pub fn implication() -> Groupoid {
    boolean_op(7).expect("valid id")
}

/// `0 ∗ 1 = 1`, otherwise `x ∗ y = 0`; isomorphic to implication.
pub fn star_op() -> Groupoid {
    Groupoid { size: 2, table: vec![0, 1, 0, 0] }
}

/// The four-element cross-product quotient on `{0, u, v, w}` = `{0, 1, 2, 3}`.
pub fn cross_product_c() -> Groupoid {
    Groupoid {
        size: 4,
        table: vec![
            0, 0, 0, 0, //
            0, 0, 3, 2, //
            0, 3, 0, 1, //
            0, 2, 1, 0,
        ],
    }
}

/// `i ∘ i = i + 1 mod n`, `i ∘ j = 0` otherwise.
pub fn primal_family(n: usize) -> Result<Groupoid> {
    if n < 2 {
        return Err(Error::SizeDomain { size: n, min: 2, max: MAX_SIZE });
    }
    Groupoid::from_fn(n, |i, j| if i == j { (i + 1) % n } else { 0 })
}

/// Catalog numbers of the three-element examples with displayed tables.
pub const CATALOG_EXAMPLES: [u16; 8] = [1066, 10, 405, 3242, 79, 82, 2407, 3233];

/// Three-element examples referenced by their catalog numbers.
pub fn catalog_example(code: u16) -> Result<Groupoid> {
    let rows: [[Element; 3]; 3] = match code {
        1066 => [[0, 0, 2], [0, 0, 2], [2, 2, 1]],
        10 => [[0, 0, 0], [0, 0, 0], [1, 0, 0]],
        405 => [[0, 0, 1], [0, 0, 1], [1, 1, 0]],
        3242 => [[1, 1, 1], [2, 2, 2], [0, 0, 0]],
        79 => [[0, 0, 0], [0, 1, 0], [0, 0, 1]],
        82 => [[0, 0, 0], [0, 1, 0], [0, 1, 2]],
        2407 => [[1, 0, 0], [0, 2, 0], [0, 0, 0]],
        3233 => [[1, 1, 1], [2, 2, 0], [0, 0, 0]],
        _ => {
            return Err(Error::domain(format!(
                "no table for catalog number {code}; known: {CATALOG_EXAMPLES:?}"
            )))
        }
    };
    Groupoid::from_flat(3, rows.concat())
}

/// `x + 1 mod 3` with `1 ∘ 2` changed to 0.
pub fn op_3233() -> Groupoid {
    catalog_example(3233).expect("known example")
}

/// Commutator on the dihedral group of degree `m`: element `i < m` is the
/// rotation `α^i`, element `m + j` the reflection `α^j ρ`.
pub fn dihedral_commutator(m: usize) -> Result<Groupoid> {
    if m == 0 || 2 * m > MAX_SIZE {
        return Err(Error::SizeDomain { size: m, min: 1, max: MAX_SIZE / 2 });
    }
    let md = m as i64;
    Groupoid::from_fn(2 * m, |a, b| {
        let (i, j) = ((a % m) as i64, (b % m) as i64);
        let v = match (a < m, b < m) {
            (true, true) => 0,
            (true, false) => -2 * i,
            (false, true) => 2 * j,
            (false, false) => 2 * (i - j),
        };
        v.rem_euclid(md) as usize
    })
}

/// `a ∘ b = min(a, b) − 1` if `a, b > 0`, else 0, on `{0, …, n−1}`.
pub fn min_decrement(n: usize) -> Result<Groupoid> {
    Groupoid::from_fn(n, |a, b| if a > 0 && b > 0 { a.min(b) - 1 } else { 0 })
}

/// `a ∘ b = p·a + q·b mod g`.
pub fn linear_mod(g: usize, p: u64, q: u64) -> Result<Groupoid> {
    let m = g as u64;
    Groupoid::from_fn(g, |a, b| ((p % m) * a as u64 + (q % m) * b as u64).rem_euclid(m) as usize)
}

/// `a ∘ b = a + 1 mod g`.
pub fn translation(g: usize) -> Result<Groupoid> {
    Groupoid::from_fn(g, |a, _| (a + 1) % g)
}

/// Parses a groupoid designator:
/// `id:<code>`, `fc<g>:<code>`, `siena:<code>`, `bool:<1..7>`, `sheffer`,
/// `implication`, `star`, `cross`, `dihedral:<m>`, `mindec:<n>`,
/// `primal:<n>`, `op3233`, `xplus1:<g>`, `linear:<g>:<p>:<q>`.
pub fn from_designator(designator: &str) -> Result<Groupoid> {
    let bad = |msg: &str| Error::parse(0, format!("{msg} in groupoid designator {designator:?}"));
    let mut parts = designator.trim().split(':');
    let head = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let num = |i: usize| -> Result<u64> {
        args.get(i)
            .ok_or_else(|| bad("missing argument"))?
            .parse::<u64>()
            .map_err(|_| bad("argument is not a nonnegative integer"))
    };
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(bad(&format!("expected {n} argument(s)")))
        }
    };
    let small = |v: u64| -> Result<usize> {
        usize::try_from(v).ok().filter(|&s| s <= MAX_SIZE).ok_or_else(|| bad("size too large"))
    };
    match head {
        "id" => {
            arity(1)?;
            let code = u16::try_from(num(0)?).map_err(|_| bad("code too large"))?;
            Ok(decode_idempotent(IdempotentCode::new(code)?))
        }
        "siena" => {
            arity(1)?;
            catalog_example(u16::try_from(num(0)?).map_err(|_| bad("code too large"))?)
        }
        "bool" => {
            arity(1)?;
            boolean_op(u8::try_from(num(0)?).map_err(|_| bad("id too large"))?)
        }
        "sheffer" => arity(0).map(|_| sheffer()),
        "implication" => arity(0).map(|_| implication()),
        "star" => arity(0).map(|_| star_op()),
        "cross" => arity(0).map(|_| cross_product_c()),
        "op3233" => arity(0).map(|_| op_3233()),
        "dihedral" => {
            arity(1)?;
            dihedral_commutator(small(num(0)?)?)
        }
        "mindec" => {
            arity(1)?;
            min_decrement(small(num(0)?)?)
        }
        "primal" => {
            arity(1)?;
            primal_family(small(num(0)?)?)
        }
        "xplus1" => {
            arity(1)?;
            translation(small(num(0)?)?)
        }
        "linear" => {
            arity(3)?;
            linear_mod(small(num(0)?)?, num(1)?, num(2)?)
        }
        h if h.starts_with("fc") => {
            arity(1)?;
            let g: usize = h[2..].parse().map_err(|_| bad("fc needs a size, e.g. fc3"))?;
            let code: u128 = args[0].parse().map_err(|_| bad("code is not an integer"))?;
            Groupoid::from_full_code(g, code)
        }
        _ => Err(bad("unknown designator")),
    }
}
