//! Bracketings: full binary trees with `n` leaves, i.e. the elements of the free
//! groupoid on one generator `x`.
//!
//! Leaves are numbered `1..=n` from left to right. A bracketing of size `n > 1`
//! is always printed with its outermost pair of parentheses, so `(xx)` is the
//! only bracketing of size 2 and `((x(xx))(xx))` is one of the 14 of size 5.
//!
//! Besides construction, enumeration and text conversion this module carries
//! the classical encodings of bracketings: the finite maximal prefix-free (FMPF)
//! word sets, depth / left-depth / right-depth sequences, right-parenthesis
//! positions, and the nest structure (eggs, quotients, priority).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest size accepted by [`enumerate`] and [`iter`].
pub const MAX_ENUMERATION_SIZE: usize = 25;

/// Above this size [`enumerate`] walks the lazy iterator instead of building
/// the memoized per-size lists.
const MEMO_ENUMERATION_LIMIT: usize = 16;

/// Largest `n` for which `C_n` fits in a `u128`-based computation here.
pub const MAX_CATALAN_INDEX: u32 = 60;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bracketing(Arc<Node>);

#[derive(PartialEq, Eq, Hash)]
enum Node {
    Leaf,
    Pair {
        left: Bracketing,
        right: Bracketing,
        size: usize,
    },
}

impl Bracketing {
    /// The unique bracketing `x` of size 1.
    pub fn leaf() -> Self {
        Bracketing(Arc::new(Node::Leaf))
    }

    /// The bracketing `(PQ)`.
    pub fn pair(left: Bracketing, right: Bracketing) -> Self {
        let size = left.size() + right.size();
        Bracketing(Arc::new(Node::Pair { left, right, size }))
    }

    pub fn size(&self) -> usize {
        match &*self.0 {
            Node::Leaf => 1,
            Node::Pair { size, .. } => *size,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(&*self.0, Node::Leaf)
    }

    /// The left and right factors of a non-leaf bracketing.
    pub fn factors(&self) -> Option<(&Bracketing, &Bracketing)> {
        match &*self.0 {
            Node::Leaf => None,
            Node::Pair { left, right, .. } => Some((left, right)),
        }
    }

    /// `((…((xx)x)…)x)` with `n` leaves.
    pub fn left_comb(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::SizeDomain { size: 0, min: 1, max: usize::MAX });
        }
        let mut b = Bracketing::leaf();
        for _ in 1..n {
            b = Bracketing::pair(b, Bracketing::leaf());
        }
        Ok(b)
    }

    /// `(x(x(…(xx)…)))` with `n` leaves.
    pub fn right_comb(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::SizeDomain { size: 0, min: 1, max: usize::MAX });
        }
        let mut b = Bracketing::leaf();
        for _ in 1..n {
            b = Bracketing::pair(Bracketing::leaf(), b);
        }
        Ok(b)
    }

    /// Structural fold: `leaf` receives the 0-based leaf index, `pair` combines
    /// the folded factors.
    pub fn fold<T>(&self, leaf: &mut impl FnMut(usize) -> T, pair: &mut impl FnMut(T, T) -> T) -> T {
        fn go<T>(
            b: &Bracketing,
            next: &mut usize,
            leaf: &mut impl FnMut(usize) -> T,
            pair: &mut impl FnMut(T, T) -> T,
        ) -> T {
            match b.factors() {
                None => {
                    let i = *next;
                    *next += 1;
                    leaf(i)
                }
                Some((l, r)) => {
                    let a = go(l, next, leaf, pair);
                    let b = go(r, next, leaf, pair);
                    pair(a, b)
                }
            }
        }
        let mut next = 0;
        go(self, &mut next, leaf, pair)
    }

    /// Evaluates the bracketing as an `n`-ary term on `args`.
    pub fn evaluate<T: Clone>(&self, args: &[T], mut op: impl FnMut(T, T) -> T) -> Result<T> {
        if args.len() != self.size() {
            return Err(Error::domain(format!(
                "bracketing of size {} applied to {} arguments",
                self.size(),
                args.len()
            )));
        }
        Ok(self.fold(&mut |i| args[i].clone(), &mut op))
    }

    /// Canonical text form; with `subscripts` the leaves print as `x1..xn`.
    pub fn render(&self, subscripts: bool) -> String {
        let mut out = String::with_capacity(4 * self.size());
        let mut next = 1;
        self.write_into(&mut out, subscripts, &mut next);
        out
    }

    fn write_into(&self, out: &mut String, subscripts: bool, next: &mut usize) {
        match self.factors() {
            None => {
                out.push('x');
                if subscripts {
                    out.push_str(&next.to_string());
                }
                *next += 1;
            }
            Some((l, r)) => {
                out.push('(');
                l.write_into(out, subscripts, next);
                r.write_into(out, subscripts, next);
                out.push(')');
            }
        }
    }

    /// The lexicographically listed FMPF word set assigned by
    /// `x ↦ (e)` and `(PQ) ↦ (0w_1, …, 0w_k, 1w_{k+1}, …)`.
    pub fn fmpf_words(&self) -> Vec<String> {
        match self.factors() {
            None => vec![String::new()],
            Some((l, r)) => {
                let mut words: Vec<String> =
                    l.fmpf_words().into_iter().map(|w| format!("0{w}")).collect();
                words.extend(r.fmpf_words().into_iter().map(|w| format!("1{w}")));
                words
            }
        }
    }

    /// Number of subbracketings of size ≥ 2 containing each leaf.
    pub fn depths(&self) -> Vec<u32> {
        self.fmpf_words().iter().map(|w| w.len() as u32).collect()
    }

    /// Number of subbracketings in whose left factor each leaf lies.
    pub fn left_depths(&self) -> Vec<u32> {
        self.fmpf_words()
            .iter()
            .map(|w| w.bytes().filter(|&c| c == b'0').count() as u32)
            .collect()
    }

    /// Number of subbracketings in whose right factor each leaf lies.
    pub fn right_depths(&self) -> Vec<u32> {
        self.fmpf_words()
            .iter()
            .map(|w| w.bytes().filter(|&c| c == b'1').count() as u32)
            .collect()
    }

    pub fn profile(&self) -> DepthProfile {
        let fmpf = self.fmpf_words();
        let mut depths = Vec::with_capacity(fmpf.len());
        let mut left = Vec::with_capacity(fmpf.len());
        let mut right = Vec::with_capacity(fmpf.len());
        for w in &fmpf {
            let ones = w.bytes().filter(|&c| c == b'1').count() as u32;
            depths.push(w.len() as u32);
            right.push(ones);
            left.push(w.len() as u32 - ones);
        }
        DepthProfile {
            depths,
            left_depths: left,
            right_depths: right,
            fmpf_words: fmpf,
        }
    }

    /// The right-depth sequence, which is always a zag sequence.
    pub fn zag_sequence(&self) -> ZagSequence {
        ZagSequence(self.right_depths())
    }

    /// For each `i = 1..n`, the number of `)` immediately after `x_i` in the
    /// printed form.
    pub fn right_paren_positions(&self) -> Vec<u32> {
        fn go(b: &Bracketing, out: &mut Vec<u32>) {
            if let Some((l, r)) = b.factors() {
                go(l, out);
                go(r, out);
                *out.last_mut().expect("right factor emits a leaf") += 1;
            } else {
                out.push(0);
            }
        }
        let mut out = Vec::with_capacity(self.size());
        go(self, &mut out);
        out
    }

    /// Either trivial, or one factor is `x` and the other a nest.
    pub fn is_nest(&self) -> bool {
        match self.factors() {
            None => true,
            Some((l, r)) => (l.is_leaf() && r.is_nest()) || (r.is_leaf() && l.is_nest()),
        }
    }

    /// Egg position (1-based index of the left egg) of a nontrivial nest,
    /// offset by `offset` leaves.
    fn nest_egg(&self, offset: usize) -> usize {
        let mut cur = self;
        let mut offset = offset;
        loop {
            let (l, r) = cur.factors().expect("nontrivial nest");
            if l.is_leaf() && r.is_leaf() {
                return offset + 1;
            }
            if l.is_leaf() {
                offset += 1;
                cur = r;
            } else {
                cur = l;
            }
        }
    }

    /// Egg positions of the maximal nests of this bracketing.
    pub fn egg_set(&self) -> Result<EggSet> {
        if self.is_leaf() {
            return Err(Error::domain("a bracketing of size 1 has no eggs"));
        }
        fn go(b: &Bracketing, offset: usize, out: &mut Vec<usize>) {
            if b.is_nest() {
                if !b.is_leaf() {
                    out.push(b.nest_egg(offset));
                }
            } else {
                let (l, r) = b.factors().expect("non-nest has factors");
                go(l, offset, out);
                go(r, offset + l.size(), out);
            }
        }
        let mut positions = Vec::new();
        go(self, 0, &mut positions);
        Ok(EggSet { positions })
    }

    /// The quotient obtained by replacing the egg pair `(x_i x_{i+1})` with `x`.
    pub fn collapse_egg(&self, i: usize) -> Result<Bracketing> {
        let eggs = self.egg_set()?;
        if !eggs.contains(i) {
            return Err(Error::domain(format!("{i} is not an egg position of {self}")));
        }
        fn go(b: &Bracketing, offset: usize, i: usize) -> Bracketing {
            match b.factors() {
                None => b.clone(),
                Some((l, r)) => {
                    if l.is_leaf() && r.is_leaf() && offset + 1 == i {
                        return Bracketing::leaf();
                    }
                    let ls = l.size();
                    if i <= offset + ls {
                        Bracketing::pair(go(l, offset, i), r.clone())
                    } else {
                        Bracketing::pair(l.clone(), go(r, offset + ls, i))
                    }
                }
            }
        }
        Ok(go(self, 0, i))
    }

    /// Priority and core: `pr(B) = 0` when the left factor has more than one
    /// leaf, otherwise `B = (x_1(x_2(…(x_k R)…)))` with `R` of priority 0 or
    /// size 2, giving `(k, R)`.
    pub fn priority(&self) -> Result<Priority> {
        if self.size() < 3 {
            return Err(Error::SizeDomain { size: self.size(), min: 3, max: usize::MAX });
        }
        let mut level = 0;
        let mut cur = self;
        loop {
            let (l, r) = cur.factors().expect("size >= 2");
            if !l.is_leaf() {
                if level == 0 {
                    return Ok(Priority { level: 0, core: None });
                }
                return Ok(Priority { level, core: Some(cur.clone()) });
            }
            level += 1;
            if r.size() == 2 {
                return Ok(Priority { level, core: Some(r.clone()) });
            }
            cur = r;
        }
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl fmt::Debug for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl FromStr for Bracketing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Depth data of a bracketing. JSON form:
/// `{"depths":[...],"left":[...],"right":[...],"fmpf":["00","010",...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthProfile {
    pub depths: Vec<u32>,
    #[serde(rename = "left")]
    pub left_depths: Vec<u32>,
    #[serde(rename = "right")]
    pub right_depths: Vec<u32>,
    #[serde(rename = "fmpf")]
    pub fmpf_words: Vec<String>,
}

/// A sequence with `d_1 = 0`, `d_2 = 1` and `1 ≤ d_{i+1} ≤ d_i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZagSequence(Vec<u32>);

impl ZagSequence {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NotZagSequence("empty sequence".into()));
        }
        if values[0] != 0 {
            return Err(Error::NotZagSequence(format!("d_1 = {} (must be 0)", values[0])));
        }
        if values.len() >= 2 && values[1] != 1 {
            return Err(Error::NotZagSequence(format!("d_2 = {} (must be 1)", values[1])));
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] < 1 || w[1] > w[0] + 1 {
                return Err(Error::NotZagSequence(format!(
                    "d_{} = {} after d_{} = {}",
                    i + 2,
                    w[1],
                    i + 1,
                    w[0]
                )));
            }
        }
        Ok(ZagSequence(values))
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Egg positions `i` (1-based), meaning `x_i, x_{i+1}` are the eggs of a
/// maximal nest. Sorted ascending; no two positions are consecutive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EggSet {
    positions: Vec<usize>,
}

impl EggSet {
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn contains(&self, i: usize) -> bool {
        self.positions.binary_search(&i).is_ok()
    }

    pub fn intersects(&self, other: &EggSet) -> bool {
        self.positions.iter().any(|&i| other.contains(i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Priority {
    pub level: usize,
    pub core: Option<Bracketing>,
}

/// True iff the two bracketings share an egg position.
pub fn adjacent(a: &Bracketing, b: &Bracketing) -> Result<bool> {
    if a.size() != b.size() {
        return Err(Error::domain(format!(
            "adjacency needs equal sizes, got {} and {}",
            a.size(),
            b.size()
        )));
    }
    Ok(a.egg_set()?.intersects(&b.egg_set()?))
}

/// `C_n` by the closed form `binom(2n, n) / (n + 1)`.
pub fn catalan(n: u32) -> Result<u128> {
    if n > MAX_CATALAN_INDEX {
        return Err(Error::Range(format!("C_{n} exceeds the supported index {MAX_CATALAN_INDEX}")));
    }
    // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step.
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c
            .checked_mul(2 * (2 * k + 1))
            .ok_or_else(|| Error::Range(format!("overflow computing C_{n}")))?
            / (k + 2);
    }
    Ok(c)
}

/// `C_n` by the convolution recurrence `C_n = Σ C_i C_{n-1-i}`.
pub fn catalan_by_recurrence(n: u32) -> Result<u128> {
    if n > MAX_CATALAN_INDEX {
        return Err(Error::Range(format!("C_{n} exceeds the supported index {MAX_CATALAN_INDEX}")));
    }
    let n = n as usize;
    let mut c = vec![0u128; n + 1];
    c[0] = 1;
    for m in 1..=n {
        let mut sum: u128 = 0;
        for i in 0..m {
            let term = c[i]
                .checked_mul(c[m - 1 - i])
                .ok_or_else(|| Error::Range(format!("overflow computing C_{m}")))?;
            sum = sum
                .checked_add(term)
                .ok_or_else(|| Error::Range(format!("overflow computing C_{m}")))?;
        }
        c[m] = sum;
    }
    Ok(c[n])
}

fn check_enumeration_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION_SIZE {
        return Err(Error::SizeDomain { size: n, min: 1, max: MAX_ENUMERATION_SIZE });
    }
    Ok(())
}

/// All bracketings of size `n`, ordered by left-factor size ascending, then
/// left factor order, then right factor order.
pub fn enumerate(n: usize) -> Result<Vec<Bracketing>> {
    check_enumeration_size(n)?;
    if n > MEMO_ENUMERATION_LIMIT {
        return Ok(iter(n)?.collect());
    }
    let mut by_size: Vec<Vec<Bracketing>> = vec![Vec::new(), vec![Bracketing::leaf()]];
    for m in 2..=n {
        let mut all = Vec::new();
        for k in 1..m {
            for l in &by_size[k] {
                for r in &by_size[m - k] {
                    all.push(Bracketing::pair(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(all);
    }
    Ok(by_size.swap_remove(n))
}

/// Lazy traversal of the bracketings of size `n` in the same order as
/// [`enumerate`]. State is `O(n²)`.
pub fn iter(n: usize) -> Result<BracketingIter> {
    check_enumeration_size(n)?;
    Ok(BracketingIter::new(n))
}

pub struct BracketingIter {
    n: usize,
    state: IterState,
}

enum IterState {
    Leaf { done: bool },
    Split {
        left_size: usize,
        left: Box<BracketingIter>,
        current_left: Bracketing,
        right: Box<BracketingIter>,
    },
    Done,
}

impl BracketingIter {
    fn new(n: usize) -> Self {
        if n == 1 {
            return BracketingIter { n, state: IterState::Leaf { done: false } };
        }
        let mut left = Box::new(BracketingIter::new(1));
        let current_left = left.next().expect("size 1 has one bracketing");
        BracketingIter {
            n,
            state: IterState::Split {
                left_size: 1,
                left,
                current_left,
                right: Box::new(BracketingIter::new(n - 1)),
            },
        }
    }
}

impl Iterator for BracketingIter {
    type Item = Bracketing;

    fn next(&mut self) -> Option<Bracketing> {
        let n = self.n;
        loop {
            match &mut self.state {
                IterState::Done => return None,
                IterState::Leaf { done } => {
                    if *done {
                        return None;
                    }
                    *done = true;
                    return Some(Bracketing::leaf());
                }
                IterState::Split { left_size, left, current_left, right } => {
                    if let Some(r) = right.next() {
                        return Some(Bracketing::pair(current_left.clone(), r));
                    }
                    if let Some(l) = left.next() {
                        *current_left = l;
                        **right = BracketingIter::new(n - *left_size);
                        continue;
                    }
                    let k = *left_size + 1;
                    if k == n {
                        self.state = IterState::Done;
                        return None;
                    }
                    let mut new_left = Box::new(BracketingIter::new(k));
                    let first = new_left.next().expect("nonempty");
                    self.state = IterState::Split {
                        left_size: k,
                        left: new_left,
                        current_left: first,
                        right: Box::new(BracketingIter::new(n - k)),
                    };
                }
            }
        }
    }
}

/// Parses the text form: `x` (optionally followed by a digit subscript) or
/// `(PQ)`. Whitespace is ignored; an outermost pair is required for size > 1.
pub fn parse(s: &str) -> Result<Bracketing> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let b = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(match p.src[p.pos] {
            b'x' | b'(' => Error::parse(
                p.pos,
                "trailing factor: a product of several factors needs an outermost pair of parentheses",
            ),
            b')' => Error::parse(p.pos, "unbalanced ')'"),
            _ => Error::parse(p.pos, "unexpected character"),
        });
    }
    Ok(b)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Bracketing> {
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else {
            return Err(Error::parse(self.pos, "unexpected end of input"));
        };
        match c {
            b'x' => {
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                Ok(Bracketing::leaf())
            }
            b'(' => {
                let open = self.pos;
                self.pos += 1;
                let left = self.term()?;
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b')') {
                    return Err(Error::parse(
                        self.pos,
                        format!("group opened at byte {open} has one factor, expected two"),
                    ));
                }
                let right = self.term()?;
                self.skip_ws();
                match self.src.get(self.pos) {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(Bracketing::pair(left, right))
                    }
                    Some(b'x') | Some(b'(') => Err(Error::parse(
                        self.pos,
                        format!("group opened at byte {open} has more than two factors"),
                    )),
                    Some(_) => Err(Error::parse(self.pos, "unexpected character")),
                    None => Err(Error::parse(
                        self.pos,
                        format!("unclosed '(' opened at byte {open}"),
                    )),
                }
            }
            b')' => Err(Error::parse(self.pos, "unexpected ')'")),
            _ => Err(Error::parse(self.pos, "unexpected character")),
        }
    }
}

/// Rebuilds the bracketing with the given depth sequence by splitting at the
/// prefix whose `2^{-d}` masses sum to 1/2.
pub fn from_depth_sequence(seq: &[u32]) -> Result<Bracketing> {
    const MAX_DEPTH: u32 = 120;
    if seq.is_empty() {
        return Err(Error::NotDepthSequence("empty sequence".into()));
    }
    if let Some(&d) = seq.iter().find(|&&d| d > MAX_DEPTH) {
        return Err(Error::NotDepthSequence(format!("depth {d} exceeds {MAX_DEPTH}")));
    }
    let max_depth = *seq.iter().max().expect("nonempty");
    // Masses scaled by 2^max_depth; the whole sequence must weigh exactly 1.
    let mass = |d: u32| 1u128 << (max_depth - d);
    let total: u128 = seq.iter().map(|&d| mass(d)).sum();
    if total != 1u128 << max_depth {
        return Err(Error::NotDepthSequence(format!(
            "sum of 2^-d is {total}/2^{max_depth}, not 1"
        )));
    }
    fn build(seq: &[u32], level: u32, mass: &impl Fn(u32) -> u128, max_depth: u32) -> Result<Bracketing> {
        if seq.len() == 1 {
            return if seq[0] == level {
                Ok(Bracketing::leaf())
            } else {
                Err(Error::NotDepthSequence(format!(
                    "leaf at depth {} inside a factor at depth {level}",
                    seq[0]
                )))
            };
        }
        if seq.iter().any(|&d| d <= level) {
            return Err(Error::NotDepthSequence(format!(
                "factor at depth {level} contains a leaf at depth ≤ {level}"
            )));
        }
        let half = 1u128 << (max_depth - level - 1);
        let mut acc = 0u128;
        for (i, &d) in seq.iter().enumerate() {
            acc += mass(d);
            if acc == half {
                let left = build(&seq[..=i], level + 1, mass, max_depth)?;
                let right = build(&seq[i + 1..], level + 1, mass, max_depth)?;
                return Ok(Bracketing::pair(left, right));
            }
            if acc > half {
                break;
            }
        }
        Err(Error::NotDepthSequence(format!(
            "no prefix of mass 1/2 at depth {level}"
        )))
    }
    build(seq, 0, &mass, max_depth)
}

/// The unique bracketing whose right-depth sequence is `z`.
pub fn from_zag_sequence(z: &ZagSequence) -> Bracketing {
    // Operates on a slice that is a zag sequence after subtracting `shift`.
    fn build(seq: &[u32], shift: u32) -> Bracketing {
        if seq.len() == 1 {
            return Bracketing::leaf();
        }
        // The right factor starts at the last 1.
        let k = seq
            .iter()
            .rposition(|&d| d - shift == 1)
            .expect("zag sequences of length ≥ 2 contain a 1");
        Bracketing::pair(build(&seq[..k], shift), build(&seq[k..], shift + 1))
    }
    build(z.values(), 0)
}

/// Inverse of [`Bracketing::right_paren_positions`]: leaves and right
/// parentheses read left to right form a postfix expression.
pub fn from_right_paren_positions(counts: &[u32]) -> Result<Bracketing> {
    if counts.is_empty() {
        return Err(Error::domain("empty right-parenthesis sequence"));
    }
    let mut stack: Vec<Bracketing> = Vec::with_capacity(counts.len());
    for (i, &c) in counts.iter().enumerate() {
        stack.push(Bracketing::leaf());
        for _ in 0..c {
            let (Some(r), Some(l)) = (stack.pop(), stack.pop()) else {
                return Err(Error::domain(format!("too many ')' after x_{}", i + 1)));
            };
            stack.push(Bracketing::pair(l, r));
        }
    }
    if stack.len() != 1 {
        return Err(Error::domain(format!("{} unclosed factors", stack.len())));
    }
    Ok(stack.pop().expect("one element"))
}

/// Inverse of [`Bracketing::fmpf_words`] on lexicographically listed FMPF sets.
pub fn from_fmpf_words<S: AsRef<str>>(words: &[S]) -> Result<Bracketing> {
    fn build(words: &[&str]) -> Result<Bracketing> {
        if words.len() == 1 && words[0].is_empty() {
            return Ok(Bracketing::leaf());
        }
        if words.is_empty() || words.iter().any(|w| w.is_empty()) {
            return Err(Error::domain("not a maximal prefix-free set"));
        }
        let split = words.iter().position(|w| w.starts_with('1')).unwrap_or(words.len());
        if split == 0 || split == words.len() {
            return Err(Error::domain("not a maximal prefix-free set"));
        }
        if words[..split].iter().any(|w| !w.starts_with('0'))
            || words[split..].iter().any(|w| !w.starts_with('1'))
        {
            return Err(Error::domain("words not in lexicographic order or not binary"));
        }
        let left: Vec<&str> = words[..split].iter().map(|w| &w[1..]).collect();
        let right: Vec<&str> = words[split..].iter().map(|w| &w[1..]).collect();
        Ok(Bracketing::pair(build(&left)?, build(&right)?))
    }
    let words: Vec<&str> = words.iter().map(|w| w.as_ref()).collect();
    build(&words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn b(s: &str) -> Bracketing {
        parse(s).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate(1).unwrap(), vec![Bracketing::leaf()]);
        assert_eq!(enumerate(2).unwrap(), vec![b("(xx)")]);
        assert_eq!(enumerate(3).unwrap(), vec![b("(x(xx))"), b("((xx)x)")]);
        assert_eq!(enumerate(5).unwrap().len(), 14);
        assert!(matches!(enumerate(0), Err(Error::SizeDomain { .. })));
        assert!(matches!(enumerate(26), Err(Error::SizeDomain { .. })));
    }

    #[test]
    fn lazy_iterator_matches_materialized_order() {
        for n in 1..=10 {
            let lazy: Vec<_> = iter(n).unwrap().collect();
            assert_eq!(lazy, enumerate(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0).unwrap(), 1);
        assert_eq!(catalan(5).unwrap(), 42);
        assert_eq!(catalan(6).unwrap(), 132);
        for n in 0..=MAX_CATALAN_INDEX {
            assert_eq!(catalan(n).unwrap(), catalan_by_recurrence(n).unwrap(), "C_{n}");
        }
        assert!(matches!(catalan(61), Err(Error::Range(_))));
        assert!(matches!(catalan_by_recurrence(61), Err(Error::Range(_))));
    }

    #[test]
    fn parse_examples() {
        let five = b("((x(xx))(xx))");
        let expected = Bracketing::pair(
            Bracketing::pair(
                Bracketing::leaf(),
                Bracketing::pair(Bracketing::leaf(), Bracketing::leaf()),
            ),
            Bracketing::pair(Bracketing::leaf(), Bracketing::leaf()),
        );
        assert_eq!(five, expected);
        assert_eq!(five.size(), 5);
        assert_eq!(b("x"), Bracketing::leaf());
        assert_eq!(b(" ( ( x1 x2 ) x3 ) "), b("((xx)x)"));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let cases = [
            ("(xx)x", 4),
            ("", 0),
            ("(x)", 2),
            ("(xxx)", 3),
            ("(xx", 3),
            ("(xx))", 4),
            ("(xy)", 2),
            (")", 0),
        ];
        for (s, offset) in cases {
            match parse(s) {
                Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset, "{s:?}"),
                other => panic!("{s:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn render_with_subscripts() {
        assert_eq!(Bracketing::leaf().to_string(), "x");
        assert_eq!(b("(x(xx))").render(true), "(x1(x2x3))");
        assert_eq!(b("((x(xx))(xx))").render(true), "((x1(x2x3))(x4x5))");
    }

    #[test]
    fn profile_of_size_five_example() {
        let p = b("((x(xx))(xx))").profile();
        assert_eq!(p.depths, vec![2, 3, 3, 2, 2]);
        assert_eq!(p.right_depths, vec![0, 1, 2, 1, 2]);
        assert_eq!(p.left_depths, vec![2, 2, 1, 1, 0]);
        assert_eq!(p.fmpf_words, vec!["00", "010", "011", "10", "11"]);
        assert_eq!(b("(xx)").fmpf_words(), vec!["0", "1"]);
        assert_eq!(Bracketing::leaf().fmpf_words(), vec![""]);
    }

    #[test]
    fn profile_json_shape() {
        let json = serde_json::to_string(&b("(xx)").profile()).unwrap();
        assert_eq!(json, r#"{"depths":[1,1],"left":[1,0],"right":[0,1],"fmpf":["0","1"]}"#);
    }

    #[test]
    fn depth_sequence_inverse() {
        assert_eq!(from_depth_sequence(&[2, 3, 3, 2, 2]).unwrap(), b("((x(xx))(xx))"));
        assert_eq!(from_depth_sequence(&[1, 1]).unwrap(), b("(xx)"));
        assert_eq!(from_depth_sequence(&[0]).unwrap(), Bracketing::leaf());
        assert!(matches!(from_depth_sequence(&[1, 2]), Err(Error::NotDepthSequence(_))));
        assert!(matches!(from_depth_sequence(&[]), Err(Error::NotDepthSequence(_))));
        // Weighs 1 but no valid split: the first leaf sits too shallow.
        assert!(matches!(from_depth_sequence(&[2, 1, 2]), Err(Error::NotDepthSequence(_))));
        assert!(matches!(from_depth_sequence(&[1]), Err(Error::NotDepthSequence(_))));
    }

    #[test]
    fn zag_sequence_inverse() {
        let z = ZagSequence::new(vec![0, 1, 2, 1, 2]).unwrap();
        assert_eq!(from_zag_sequence(&z), b("((x(xx))(xx))"));
        assert_eq!(from_zag_sequence(&ZagSequence::new(vec![0, 1]).unwrap()), b("(xx)"));
        assert!(ZagSequence::new(vec![1]).is_err());
        assert!(ZagSequence::new(vec![0, 2]).is_err());
        assert!(ZagSequence::new(vec![0, 1, 3]).is_err());
        assert!(ZagSequence::new(vec![0, 1, 0]).is_err());
        assert!(ZagSequence::new(vec![]).is_err());
    }

    #[test]
    fn zag_sequences_are_counted_by_catalan() {
        fn extend(seq: &mut Vec<u32>, n: usize, count: &mut u128) {
            if seq.len() == n {
                *count += 1;
                return;
            }
            let last = *seq.last().unwrap();
            for d in 1..=last + 1 {
                seq.push(d);
                extend(seq, n, count);
                seq.pop();
            }
        }
        for n in 2..=10usize {
            let mut count = 0;
            extend(&mut vec![0, 1], n, &mut count);
            assert_eq!(count, catalan(n as u32 - 1).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn right_paren_positions_examples() {
        assert_eq!(b("(xx)").right_paren_positions(), vec![0, 1]);
        assert_eq!(b("((x(xx))(xx))").right_paren_positions(), vec![0, 0, 2, 0, 2]);
        assert_eq!(from_right_paren_positions(&[0, 0, 2, 0, 2]).unwrap(), b("((x(xx))(xx))"));
        assert!(from_right_paren_positions(&[1, 0]).is_err());
        assert!(from_right_paren_positions(&[0, 0]).is_err());
    }

    #[test]
    fn fmpf_inverse_and_rejections() {
        assert_eq!(from_fmpf_words(&["00", "010", "011", "10", "11"]).unwrap(), b("((x(xx))(xx))"));
        assert!(from_fmpf_words(&["0", "10"]).is_err());
        assert!(from_fmpf_words(&["1", "0"]).is_err());
        assert!(from_fmpf_words(&["0", "1", ""]).is_err());
    }

    #[test]
    fn egg_sets() {
        assert_eq!(b("(xx)").egg_set().unwrap().positions(), &[1]);
        assert_eq!(b("((x(xx))(xx))").egg_set().unwrap().positions(), &[2, 4]);
        assert_eq!(b("((xx)(xx))").egg_set().unwrap().positions(), &[1, 3]);
        assert!(Bracketing::leaf().egg_set().is_err());
        for bb in enumerate(4).unwrap() {
            assert_eq!(bb.is_nest(), bb != b("((xx)(xx))"));
        }
    }

    #[test]
    fn adjacency() {
        assert!(adjacent(&b("(xx)"), &b("(xx)")).unwrap());
        assert!(adjacent(&b("((xx)(xx))"), &b("(x(x(xx)))")).unwrap());
        assert!(!adjacent(&b("(((xx)x)x)"), &b("(x(x(xx)))")).unwrap());
        assert!(adjacent(&b("(xx)"), &b("(x(xx))")).is_err());
    }

    #[test]
    fn collapse() {
        assert_eq!(b("(xx)").collapse_egg(1).unwrap(), Bracketing::leaf());
        assert_eq!(b("((x(xx))(xx))").collapse_egg(2).unwrap(), b("((xx)(xx))"));
        assert_eq!(b("((x(xx))(xx))").collapse_egg(4).unwrap(), b("((x(xx))x)"));
        assert!(b("((x(xx))(xx))").collapse_egg(1).is_err());
        assert!(b("((x(xx))(xx))").collapse_egg(3).is_err());
    }

    #[test]
    fn priority_examples() {
        assert_eq!(b("((xx)x)").priority().unwrap(), Priority { level: 0, core: None });
        assert_eq!(
            b("(x(x(xx)))").priority().unwrap(),
            Priority { level: 2, core: Some(b("(xx)")) }
        );
        assert_eq!(
            b("(x((xx)x))").priority().unwrap(),
            Priority { level: 1, core: Some(b("((xx)x)")) }
        );
        assert!(b("(xx)").priority().is_err());
    }

    #[test]
    fn every_priority_level_is_attained() {
        for n in 5..=8 {
            let levels: HashSet<usize> =
                enumerate(n).unwrap().iter().map(|b| b.priority().unwrap().level).collect();
            assert_eq!(levels, (0..=n - 2).collect::<HashSet<_>>(), "n = {n}");
        }
    }

    #[test]
    fn combs() {
        assert_eq!(Bracketing::left_comb(3).unwrap(), b("((xx)x)"));
        assert_eq!(Bracketing::right_comb(4).unwrap(), b("(x(x(xx)))"));
        assert!(Bracketing::left_comb(0).is_err());
    }

    #[test]
    fn evaluate_checks_arity() {
        let t = b("((xx)x)");
        assert_eq!(t.evaluate(&[10i64, 3, 2], |a, b| a - b).unwrap(), 5);
        assert!(t.evaluate(&[1i64, 2], |a, b| a - b).is_err());
    }
}
