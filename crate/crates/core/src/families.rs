//! Closed forms and symbolic normal forms for spectra of specific operations.
//!
//! Operations on infinite carriers (subtraction, means, exponentiation,
//! linear forms over roots of unity) are handled through the normal form a
//! bracketing induces, so two bracketings induce the same operation exactly
//! when their normal forms agree. Finite examples get closed-form counts
//! that serve as oracles against the spectrum engine; [`verify`] runs both
//! side by side.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::bracketing::{catalan, iter, Bracketing};
use crate::error::{Error, Result};
use crate::groupoid::{
    catalog_example, cross_product_c, decode_idempotent, dihedral_commutator, implication,
    linear_mod, min_decrement, primal_family, sheffer, translation, Groupoid, IdempotentCode,
};
use crate::spectrum::{spectrum, term_table, SpectrumOptions, DEFAULT_MEMORY_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `(−1)^d`.
    pub fn of_parity(d: u32) -> Self {
        if d.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Signs of `±x_1 ± ⋯ ± x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn plus_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == Sign::Plus).count()
    }

    /// `x_1 − x_2 + x_3 − ⋯ + x_n` with `n` odd.
    pub fn is_odd_alternating(&self) -> bool {
        self.0.len() % 2 == 1
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &s)| s == if i % 2 == 0 { Sign::Plus } else { Sign::Minus })
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.char_indices()
            .map(|(i, c)| match c {
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                _ => Err(Error::parse(i, format!("unexpected {c:?} in sign vector"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }
}

fn distinct_count<K: Hash + Eq>(n: usize, mut key: impl FnMut(&Bracketing) -> Result<K>) -> Result<u64> {
    let mut seen = HashSet::new();
    for b in iter(n)? {
        seen.insert(key(&b)?);
    }
    Ok(seen.len() as u64)
}

/// Signs of the operation induced over `a − b`: the left factor keeps its
/// signs and the right factor has all of its signs flipped.
pub fn subtraction_normal_form(b: &Bracketing) -> Result<SignVector> {
    if b.is_leaf() {
        return Err(Error::domain("subtraction normal form needs size at least 2"));
    }
    let signs = b.fold(&mut |_| vec![Sign::Plus], &mut |mut l: Vec<Sign>, r: Vec<Sign>| {
        l.extend(r.into_iter().map(Sign::flip));
        l
    });
    Ok(SignVector(signs))
}

/// Number of distinct operations induced over `a − b` by bracketings of size `n ≥ 2`.
pub fn subtraction_count(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::SizeDomain { size: n, min: 2, max: usize::MAX });
    }
    distinct_count(n, subtraction_normal_form)
}

/// Coefficients `2^(−d_i)` of the operation induced over `(a + b)/2`.
pub fn mean_coefficients(b: &Bracketing) -> Vec<BigRational> {
    b.depths()
        .into_iter()
        .map(|d| BigRational::new(BigInt::from(1), BigInt::from(1) << d as usize))
        .collect()
}

/// The height of the level at which `x_i` sits in the induced tower over
/// `a^b`, which is the right depth of `x_i`.
pub fn exponentiation_key(b: &Bracketing) -> Vec<u32> {
    b.right_depths()
}

/// Largest exponent [`power_value`] will raise to.
const MAX_EXPONENT: u64 = 1 << 24;

/// Exact value of the bracketing over `a^b` at the given positive integers.
pub fn power_value(b: &Bracketing, args: &[u32]) -> Result<BigUint> {
    let args: Vec<BigUint> = args.iter().map(|&a| BigUint::from(a)).collect();
    let mut failure = None;
    let value = b.evaluate(&args, |x: BigUint, y: BigUint| {
        match u32::try_from(&y).ok().filter(|&e| (e as u64) * x.bits() <= MAX_EXPONENT) {
            Some(e) => x.pow(e),
            None => {
                failure.get_or_insert_with(|| Error::Range(format!("power with exponent {y}")));
                BigUint::from(0u32)
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Signs of the operation induced over `−a − b`: `(−1)^(d_i)`.
pub fn complete_linear_form(b: &Bracketing) -> SignVector {
    SignVector(b.depths().into_iter().map(Sign::of_parity).collect())
}

/// The number of `+` signs is congruent to `2n − 1` modulo 3.
pub fn is_subregular(v: &SignVector) -> bool {
    let n = v.len();
    n > 0 && v.plus_count() % 3 == (2 * n - 1) % 3
}

/// Whether the complete linear operation is induced over `−a − b` by some
/// bracketing. For `n = 1` only `x_1` itself is.
pub fn is_regular_complete_linear(v: &SignVector) -> bool {
    if v.len() == 1 {
        return v.signs() == [Sign::Plus];
    }
    is_subregular(v) && !v.is_odd_alternating()
}

/// Number of regular complete linear vectors of length `n`, counted over all `2^n` sign vectors.
pub fn regular_complete_linear_count(n: usize) -> Result<u64> {
    if n == 0 || n > 30 {
        return Err(Error::SizeDomain { size: n, min: 1, max: 30 });
    }
    let count = (0u64..1 << n)
        .filter(|mask| {
            let v = (0..n)
                .map(|i| if mask >> i & 1 == 0 { Sign::Plus } else { Sign::Minus })
                .collect();
            is_regular_complete_linear(&SignVector(v))
        })
        .count();
    Ok(count as u64)
}

/// Which depth drives the coefficients of a linear operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearMode {
    /// `p·a + p·b`: coefficient `p^(d_i)` with `d_i` the depth.
    Both,
    /// `a + p·b`: coefficient `p^(d_i)` with `d_i` the right depth.
    Right,
}

impl FromStr for LinearMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(LinearMode::Both),
            "right" => Ok(LinearMode::Right),
            _ => Err(Error::parse(0, format!("linear mode must be both or right, got {s:?}"))),
        }
    }
}

/// Exponents `d_i mod k` of the coefficients `p^(d_i)`, which determine the
/// induced operation when `p` is a primitive `k`-th root of unity.
pub fn coefficient_residues(b: &Bracketing, k: u32, mode: LinearMode) -> Result<Vec<u32>> {
    if k == 0 {
        return Err(Error::domain("root of unity order must be at least 1"));
    }
    let d = match mode {
        LinearMode::Both => b.depths(),
        LinearMode::Right => b.right_depths(),
    };
    Ok(d.into_iter().map(|d| d % k).collect())
}

pub fn linear_root_of_unity_spectrum(k: u32, mode: LinearMode, n: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::domain("root of unity order must be at least 1"));
    }
    distinct_count(n, |b| coefficient_residues(b, k, mode))
}

/// Two distinct bracketings whose linear operations coincide when `p^k = 1`.
/// Sizes are `2^k + 1` for [`LinearMode::Both`] and `k + 2` for [`LinearMode::Right`].
pub fn root_of_unity_witnesses(k: u32, mode: LinearMode) -> Result<(Bracketing, Bracketing)> {
    match mode {
        LinearMode::Both => {
            if !(1..=16).contains(&k) {
                return Err(Error::SizeDomain { size: k as usize, min: 1, max: 16 });
            }
            let mut b = Bracketing::pair(Bracketing::leaf(), Bracketing::leaf());
            for _ in 1..k {
                b = Bracketing::pair(b.clone(), b);
            }
            Ok((
                Bracketing::pair(Bracketing::leaf(), b.clone()),
                Bracketing::pair(b, Bracketing::leaf()),
            ))
        }
        LinearMode::Right => {
            if k == 0 {
                return Err(Error::SizeDomain { size: 0, min: 1, max: usize::MAX });
            }
            let b = Bracketing::right_comb(k as usize + 1)?;
            Ok((Bracketing::pair(b, Bracketing::leaf()), Bracketing::right_comb(k as usize + 2)?))
        }
    }
}

/// `F_n` with `F_1 = F_2 = 1`.
pub fn fibonacci(n: u32) -> Result<u128> {
    if n > 186 {
        return Err(Error::Range(format!("F_{n} does not fit in 128 bits")));
    }
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    Ok(a)
}

/// Number of distinct egg sets among bracketings of size `n`. The single
/// bracketing of size 1 counts once.
pub fn fibonacci_egg_count(n: usize) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    distinct_count(n, |b| b.egg_set())
}

/// Spectrum of the commutator on the dihedral group of degree `2^t`, `t ≥ 3`, at `n ≥ 3`.
pub fn dihedral_closed_form(t: u32, n: usize) -> Result<u64> {
    if t < 3 {
        return Err(Error::domain(format!("exponent {t} below 3")));
    }
    if n < 3 {
        return Err(Error::domain(format!("arity {n} below 3")));
    }
    Ok(if n == 3 {
        2
    } else if n <= t as usize {
        n as u64
    } else {
        1
    })
}

/// Spectrum of the commutator on the dihedral group of any degree `m ≥ 1`.
pub fn dihedral_spectrum_closed_form(m: usize, n: usize) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(Error::domain("degree and arity must be positive"));
    }
    if n < 3 || matches!(m, 1 | 2 | 4) {
        return Ok(1);
    }
    if m.is_power_of_two() {
        return dihedral_closed_form(m.trailing_zeros(), n);
    }
    Ok(if n == 3 { 2 } else { n as u64 })
}

/// What is known about `s(k)` for [`min_decrement`] on `n` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Band {
    Exact(u128),
    Unconstrained,
}

impl Band {
    pub fn exact(self) -> Option<u128> {
        match self {
            Band::Exact(v) => Some(v),
            Band::Unconstrained => None,
        }
    }
}

/// `C_{k−1}` below the carrier size, 1 beyond `2^(n−2)`, otherwise unconstrained.
pub fn min_decrement_closed_form(n_carrier: usize, k: usize) -> Result<Band> {
    if n_carrier < 2 || k == 0 {
        return Err(Error::domain(format!("carrier {n_carrier} and arity {k} out of range")));
    }
    if k < n_carrier {
        return Ok(Band::Exact(catalan(k as u32 - 1)?));
    }
    let threshold = 1u128.checked_shl(n_carrier as u32 - 2).filter(|_| n_carrier - 2 < 127);
    Ok(match threshold {
        Some(t) if k as u128 > t => Band::Exact(1),
        _ => Band::Unconstrained,
    })
}

/// Value of the bracketing over `min(a, b) − 1` (0 if either is 0) on the
/// nonnegative integers.
pub fn min_decrement_value(b: &Bracketing, args: &[u64]) -> Result<u64> {
    b.evaluate(args, |x, y| if x > 0 && y > 0 { x.min(y) - 1 } else { 0 })
}

/// Whether `b(c) ≤ max(c_i − d_i, 0)` for every position `i`.
pub fn decrement_bound_holds(b: &Bracketing, args: &[u64]) -> Result<bool> {
    let value = min_decrement_value(b, args)?;
    Ok(args
        .iter()
        .zip(b.depths())
        .all(|(&c, d)| value <= c.saturating_sub(d as u64)))
}

/// Number of distinct left depths of `x_1` modulo `g` among bracketings of size `n`.
pub fn left_depth_translation_spectrum(g: u32, n: usize) -> Result<u64> {
    if g < 2 {
        return Err(Error::domain(format!("modulus {g} below 2")));
    }
    distinct_count(n, |b| Ok(b.left_depths()[0] % g))
}

/// Codes of the idempotent three-element operations generating minimal clones.
pub const MINIMAL_CLONE_CODES: [u16; 12] = [0, 8, 10, 11, 16, 17, 26, 33, 35, 68, 178, 624];

/// Closed-form spectrum of a minimal-clone operation at arity `n`.
pub fn minimal_clone_closed_form(code: u16, n: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::SizeDomain { size: 0, min: 1, max: usize::MAX });
    }
    let two = |e: usize| {
        1u128
            .checked_shl(e as u32)
            .filter(|_| e < 128)
            .ok_or_else(|| Error::Range(format!("2^{e}")))
    };
    match code {
        0 | 8 | 10 | 11 | 26 => Ok(1),
        16 | 17 | 33 | 178 => catalan(n as u32 - 1),
        35 | 68 => Ok(if n < 2 { 1 } else { two(n - 2)? }),
        624 => Ok(if n == 1 { 1 } else { two(n)? / 3 }),
        _ => Err(Error::UnknownFamily(format!("minclone:{code}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub memory_budget: u64,
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            memory_budget: DEFAULT_MEMORY_BUDGET,
            parallel: true,
        }
    }
}

/// Expected against computed count at one arity. Rows without an expected
/// value report what was computed and always pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub arity: usize,
    pub expected: Option<u128>,
    pub computed: u64,
    pub catalan: u128,
    pub pass: bool,
}

/// A named yes/no check beyond the per-arity rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub rows: Vec<VerifyRow>,
    pub checks: Vec<Check>,
    /// First arity whose computed count is below Catalan.
    pub non_catalan_from: Option<usize>,
    pub pass: bool,
}

impl VerifyReport {
    fn new(family: &str, rows: Vec<VerifyRow>, checks: Vec<Check>) -> Self {
        let non_catalan_from = rows
            .iter()
            .find(|r| (r.computed as u128) < r.catalan)
            .map(|r| r.arity);
        let pass = rows.iter().all(|r| r.pass) && checks.iter().all(|c| c.pass);
        VerifyReport {
            family: family.to_string(),
            rows,
            checks,
            non_catalan_from,
            pass,
        }
    }
}

fn row(arity: usize, expected: Option<u128>, computed: u64) -> Result<VerifyRow> {
    Ok(VerifyRow {
        arity,
        expected,
        computed,
        catalan: catalan(arity as u32 - 1)?,
        pass: expected.is_none_or(|e| e == computed as u128),
    })
}

fn check(name: impl Into<String>, pass: bool) -> Check {
    Check { name: name.into(), pass }
}

/// Largest arity up to `cap` the engine accepts for `g` under the budget.
fn affordable_arity(g: &Groupoid, cap: usize, budget: u64) -> usize {
    (1..=cap)
        .take_while(|&n| {
            let len = (g.size() as u128).checked_pow(n as u32);
            let cat = catalan(n as u32 - 1).ok();
            matches!((len, cat), (Some(l), Some(c)) if l.checked_mul(c).is_some_and(|r| r <= budget as u128))
        })
        .last()
        .unwrap_or(0)
}

fn engine_rows(
    g: &Groupoid,
    cap: usize,
    opts: VerifyOptions,
    mut expected: impl FnMut(usize) -> Result<Option<u128>>,
) -> Result<Vec<VerifyRow>> {
    let n = affordable_arity(g, cap, opts.memory_budget).max(1);
    let s = spectrum(
        g,
        SpectrumOptions {
            max_arity: n,
            memory_budget: opts.memory_budget,
            parallel: opts.parallel,
            witnesses: false,
            short_circuit: true,
        },
    )?;
    s.counts
        .iter()
        .enumerate()
        .map(|(i, &c)| row(i + 1, expected(i + 1)?, c))
        .collect()
}

fn oracle_rows(
    range: std::ops::RangeInclusive<usize>,
    mut expected: impl FnMut(usize) -> Result<u128>,
    mut computed: impl FnMut(usize) -> Result<u64>,
) -> Result<Vec<VerifyRow>> {
    range.map(|n| row(n, Some(expected(n)?), computed(n)?)).collect()
}

fn catalan_expected(n: usize) -> Result<Option<u128>> {
    catalan(n as u32 - 1).map(Some)
}

/// Smallest prime `q` with `k | q − 1`, and an element of order exactly `k` modulo `q`.
fn prime_with_root_of_unity(k: u32) -> (u64, u64) {
    let is_prime = |q: u64| q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d));
    let order = |p: u64, q: u64| {
        let mut x = p % q;
        let mut e = 1u64;
        while x != 1 {
            x = x * p % q;
            e += 1;
        }
        e
    };
    let q = (2u64..)
        .find(|&q| is_prime(q) && (q - 1) % k as u64 == 0)
        .expect("primes in every residue class");
    let p = (1..q).find(|&p| order(p, q) == k as u64).expect("cyclic group has every order");
    (q, p)
}

/// Runs one family: closed forms and symbolic oracles against each other or
/// against the spectrum engine. Families: `subtraction`, `mean`,
/// `exponentiation`, `crossproduct`, `sheffer`, `implication`, `xplus1:<g>`,
/// `minclone:<code>`, `fibonacci`, `dihedral:<m>`, `mindec:<n>`,
/// `linear:<k>:<both|right>`, `primal:<n>`, `op3233`.
pub fn verify(family: &str, opts: VerifyOptions) -> Result<VerifyReport> {
    let unknown = || Error::UnknownFamily(family.to_string());
    let parts: Vec<&str> = family.trim().split(':').collect();
    let num = |i: usize| -> Result<usize> {
        let s = parts.get(i).ok_or_else(unknown)?;
        s.parse()
            .map_err(|_| Error::parse(0, format!("expected a number, got {s:?} in {family:?}")))
    };
    let arity_only = |name: &str| -> Result<()> {
        if parts.len() == 1 {
            Ok(())
        } else {
            Err(Error::UnknownFamily(format!("{name} takes no parameter")))
        }
    };
    let mut checks = Vec::new();
    let rows = match parts[0] {
        "subtraction" => {
            arity_only("subtraction")?;
            oracle_rows(2..=10, |n| Ok(1 << (n - 2)), subtraction_count)?
        }
        "mean" => {
            arity_only("mean")?;
            let mut sums_to_one = true;
            let rows = oracle_rows(
                1..=10,
                |n| catalan(n as u32 - 1),
                |n| {
                    distinct_count(n, |b| {
                        let c = mean_coefficients(b);
                        let total: BigRational = c.iter().sum();
                        sums_to_one &= total == BigRational::from_integer(BigInt::from(1));
                        Ok(c)
                    })
                },
            )?;
            checks.push(check("coefficients sum to 1 for n = 1..10", sums_to_one));
            rows
        }
        "exponentiation" => {
            arity_only("exponentiation")?;
            let right = power_value(&"(x(xx))".parse()?, &[2, 3, 5])?;
            let left = power_value(&"((xx)x)".parse()?, &[2, 3, 5])?;
            checks.push(check(
                "2^(3^5) = 2^243 and (2^3)^5 = 2^15 differ",
                right == BigUint::from(1u32) << 243usize
                    && left == BigUint::from(1u32) << 15usize,
            ));
            oracle_rows(
                1..=10,
                |n| catalan(n as u32 - 1),
                |n| distinct_count(n, |b| Ok(exponentiation_key(b))),
            )?
        }
        "crossproduct" => {
            arity_only("crossproduct")?;
            engine_rows(&cross_product_c(), 7, opts, catalan_expected)?
        }
        "sheffer" => {
            arity_only("sheffer")?;
            engine_rows(&sheffer(), 8, opts, catalan_expected)?
        }
        "implication" => {
            arity_only("implication")?;
            engine_rows(&implication(), 8, opts, catalan_expected)?
        }
        "xplus1" => {
            let g = num(1)?;
            let modulus = u32::try_from(g).map_err(|_| unknown())?;
            engine_rows(&translation(g)?, 9, opts, |n| {
                left_depth_translation_spectrum(modulus, n).map(|v| Some(v as u128))
            })?
        }
        "minclone" => {
            let code = u16::try_from(num(1)?).map_err(|_| unknown())?;
            if !MINIMAL_CLONE_CODES.contains(&code) {
                return Err(unknown());
            }
            let g = decode_idempotent(IdempotentCode::new(code)?);
            let rows = engine_rows(&g, 7, opts, |n| minimal_clone_closed_form(code, n).map(Some))?;
            if code == 624 {
                let agree = rows
                    .iter()
                    .filter(|r| r.arity >= 2)
                    .all(|r| regular_complete_linear_count(r.arity).ok() == Some(r.computed));
                checks.push(check("regular complete linear vectors match the engine", agree));
            }
            rows
        }
        "fibonacci" => {
            arity_only("fibonacci")?;
            let expected = |n: usize| -> Result<u128> {
                if n <= 2 {
                    Ok(1)
                } else {
                    Ok(fibonacci(n as u32 + 1)? - 1)
                }
            };
            let rows = engine_rows(&catalog_example(79)?, 8, opts, |n| expected(n).map(Some))?;
            let eggs = (1..=8).try_fold(true, |ok, n| {
                Ok::<_, Error>(ok && fibonacci_egg_count(n)? as u128 == expected(n)?)
            })?;
            checks.push(check("egg-set counts equal F_(n+1) - 1 for n = 2..8", eggs));
            rows
        }
        "dihedral" => {
            let m = num(1)?;
            engine_rows(&dihedral_commutator(m)?, 7, opts, |n| {
                dihedral_spectrum_closed_form(m, n).map(|v| Some(v as u128))
            })?
        }
        "mindec" => {
            let n = num(1)?;
            let g = min_decrement(n)?;
            let rows = engine_rows(&g, 6, opts, |k| {
                min_decrement_closed_form(n, k).map(Band::exact)
            })?;
            let bound_size = (1..=5).take_while(|&k| n.pow(k as u32) <= 1 << 20).last().unwrap_or(1);
            let mut holds = true;
            for k in 1..=bound_size {
                for b in iter(k)? {
                    let t = term_table(&b, &g)?;
                    let depths = b.depths();
                    for (idx, &v) in t.values().iter().enumerate() {
                        let mut rest = idx;
                        for i in (0..k).rev() {
                            let c = (rest % n) as u64;
                            rest /= n;
                            holds &= v as u64 <= c.saturating_sub(depths[i] as u64);
                        }
                    }
                }
            }
            checks.push(check(
                format!("b(c) <= max(c_i - d_i, 0) on every tuple, sizes 1..={bound_size}"),
                holds,
            ));
            rows
        }
        "linear" => {
            let k = u32::try_from(num(1)?).map_err(|_| unknown())?;
            if k == 0 {
                return Err(Error::domain("root of unity order must be at least 1"));
            }
            let mode: LinearMode = parts.get(2).ok_or_else(unknown)?.parse()?;
            if parts.len() > 3 {
                return Err(unknown());
            }
            let (q, p) = prime_with_root_of_unity(k);
            let g = match mode {
                LinearMode::Both => linear_mod(q as usize, p, p)?,
                LinearMode::Right => linear_mod(q as usize, 1, p)?,
            };
            let rows = engine_rows(&g, 9, opts, |n| {
                linear_root_of_unity_spectrum(k, mode, n).map(|v| Some(v as u128))
            })?;
            if k <= 4 {
                let (b1, b2) = root_of_unity_witnesses(k, mode)?;
                checks.push(check(
                    format!("witnesses {b1} and {b2} induce the same operation"),
                    b1 != b2
                        && coefficient_residues(&b1, k, mode)? == coefficient_residues(&b2, k, mode)?,
                ));
            }
            if k == 2 && mode == LinearMode::Right {
                let ok = rows.iter().filter(|r| r.arity >= 2).all(|r| r.computed == 1 << (r.arity - 2));
                checks.push(check("counts equal 2^(n-2)", ok));
            }
            rows
        }
        "primal" => {
            let n = num(1)?;
            engine_rows(&primal_family(n)?, 6, opts, catalan_expected)?
        }
        "op3233" => {
            arity_only("op3233")?;
            engine_rows(&catalog_example(3233)?, 7, opts, |n| match n {
                6 => Ok(Some(41)),
                7 => Ok(None),
                _ => catalan_expected(n),
            })?
        }
        _ => return Err(unknown()),
    };
    Ok(VerifyReport::new(family, rows, checks))
}

/// Every family name accepted by [`verify`], with sample parameters.
pub const FAMILY_EXAMPLES: [&str; 14] = [
    "subtraction",
    "mean",
    "exponentiation",
    "crossproduct",
    "sheffer",
    "implication",
    "xplus1:3",
    "minclone:624",
    "fibonacci",
    "dihedral:8",
    "mindec:4",
    "linear:2:right",
    "primal:3",
    "op3233",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracketing::parse;

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    #[test]
    fn subtraction_examples() {
        assert_eq!(subtraction_normal_form(&parse("((xx)x)").unwrap()).unwrap(), sv("+--"));
        assert_eq!(subtraction_normal_form(&parse("(x(xx))").unwrap()).unwrap(), sv("+-+"));
        assert!(subtraction_normal_form(&Bracketing::leaf()).is_err());
        for n in 2..=8 {
            assert_eq!(subtraction_count(n).unwrap(), 1 << (n - 2));
        }
    }

    #[test]
    fn subtraction_forms_start_plus_minus() {
        for n in 2..=7 {
            for b in iter(n).unwrap() {
                let v = subtraction_normal_form(&b).unwrap();
                assert_eq!(&v.signs()[..2], &[Sign::Plus, Sign::Minus]);
            }
        }
    }

    #[test]
    fn mean_examples() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(mean_coefficients(&parse("(xx)").unwrap()), vec![r(1, 2), r(1, 2)]);
        assert_eq!(
            mean_coefficients(&parse("((x(xx))(xx))").unwrap()),
            vec![r(1, 4), r(1, 8), r(1, 8), r(1, 4), r(1, 4)]
        );
    }

    #[test]
    fn exponentiation_examples() {
        assert_eq!(exponentiation_key(&parse("(xx)").unwrap()), vec![0, 1]);
        let right = power_value(&parse("(x(xx))").unwrap(), &[2, 3, 5]).unwrap();
        let left = power_value(&parse("((xx)x)").unwrap(), &[2, 3, 5]).unwrap();
        assert_eq!(right, BigUint::from(1u32) << 243usize);
        assert_eq!(left, BigUint::from(32768u32));
        assert!(power_value(&parse("(x(x(xx)))").unwrap(), &[9, 9, 9, 9]).is_err());
    }

    #[test]
    fn complete_linear_examples() {
        assert_eq!(complete_linear_form(&parse("((xx)x)").unwrap()), sv("++-"));
        assert_eq!(complete_linear_form(&parse("(xx)").unwrap()), sv("--"));
        assert!(!is_regular_complete_linear(&sv("+-+")));
        assert!(is_regular_complete_linear(&sv("++-")));
        assert!(is_regular_complete_linear(&sv("+")));
        assert!(!is_regular_complete_linear(&sv("-")));
    }

    #[test]
    fn regular_counts_follow_floor_formula() {
        assert_eq!(regular_complete_linear_count(2).unwrap(), 1);
        for n in 3..=12 {
            assert_eq!(regular_complete_linear_count(n).unwrap(), (1u64 << n) / 3, "n = {n}");
        }
    }

    #[test]
    fn sign_vector_text() {
        assert_eq!(sv("+−-").to_string(), "+--");
        assert!(matches!("+x".parse::<SignVector>(), Err(Error::Parse { offset: 1, .. })));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(linear_root_of_unity_spectrum(1, LinearMode::Both, 5).unwrap(), 1);
        assert_eq!(linear_root_of_unity_spectrum(2, LinearMode::Right, 5).unwrap(), 8);
        assert!(linear_root_of_unity_spectrum(0, LinearMode::Right, 5).is_err());
        let (a, b) = root_of_unity_witnesses(2, LinearMode::Both).unwrap();
        assert_eq!(a.to_string(), "(x((xx)(xx)))");
        assert_eq!(b.to_string(), "(((xx)(xx))x)");
        let (a, b) = root_of_unity_witnesses(2, LinearMode::Right).unwrap();
        assert_eq!(a.to_string(), "((x(xx))x)");
        assert_eq!(b.to_string(), "(x(x(xx)))");
        assert_eq!(a.right_depths(), vec![0, 1, 2, 1]);
        assert_eq!(b.right_depths(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn fibonacci_values() {
        let f: Vec<u128> = (1..=8).map(|n| fibonacci(n).unwrap()).collect();
        assert_eq!(f, vec![1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(fibonacci_egg_count(3).unwrap(), 2);
        assert_eq!(fibonacci_egg_count(7).unwrap(), 20);
        assert!(fibonacci(187).is_err());
    }

    #[test]
    fn dihedral_examples() {
        assert_eq!(dihedral_closed_form(4, 4).unwrap(), 4);
        assert_eq!(dihedral_closed_form(3, 5).unwrap(), 1);
        assert_eq!(dihedral_closed_form(3, 3).unwrap(), 2);
        assert!(dihedral_closed_form(3, 2).is_err());
        assert!(dihedral_closed_form(2, 4).is_err());
        assert_eq!(dihedral_spectrum_closed_form(3, 7).unwrap(), 7);
        assert_eq!(dihedral_spectrum_closed_form(4, 7).unwrap(), 1);
        assert_eq!(dihedral_spectrum_closed_form(16, 4).unwrap(), 4);
    }

    #[test]
    fn min_decrement_bands() {
        assert_eq!(min_decrement_closed_form(4, 3).unwrap(), Band::Exact(2));
        assert_eq!(min_decrement_closed_form(4, 5).unwrap(), Band::Exact(1));
        assert_eq!(min_decrement_closed_form(4, 4).unwrap(), Band::Unconstrained);
        assert_eq!(min_decrement_closed_form(200, 300).unwrap(), Band::Unconstrained);
        assert!(min_decrement_closed_form(1, 3).is_err());
    }

    #[test]
    fn decrement_values() {
        let b = parse("((xx)x)").unwrap();
        assert_eq!(min_decrement_value(&b, &[5, 4, 9]).unwrap(), 2);
        assert!(decrement_bound_holds(&b, &[5, 4, 9]).unwrap());
        // The depth-plus-one point gives 1.
        let b = parse("((x(xx))(xx))").unwrap();
        let args: Vec<u64> = b.depths().iter().map(|&d| d as u64 + 1).collect();
        assert_eq!(min_decrement_value(&b, &args).unwrap(), 1);
    }

    #[test]
    fn left_depth_translation() {
        assert_eq!(left_depth_translation_spectrum(2, 5).unwrap(), 2);
        assert_eq!(left_depth_translation_spectrum(3, 3).unwrap(), 2);
        assert_eq!(left_depth_translation_spectrum(3, 6).unwrap(), 3);
        assert!(left_depth_translation_spectrum(1, 3).is_err());
    }

    #[test]
    fn minimal_clone_forms() {
        assert_eq!(minimal_clone_closed_form(624, 7).unwrap(), 42);
        assert_eq!(minimal_clone_closed_form(35, 7).unwrap(), 32);
        assert_eq!(minimal_clone_closed_form(16, 7).unwrap(), 132);
        assert_eq!(minimal_clone_closed_form(10, 7).unwrap(), 1);
        assert!(minimal_clone_closed_form(5, 3).is_err());
    }

    #[test]
    fn primes_with_roots() {
        assert_eq!(prime_with_root_of_unity(1), (2, 1));
        assert_eq!(prime_with_root_of_unity(2), (3, 2));
        assert_eq!(prime_with_root_of_unity(3), (7, 2));
        assert_eq!(prime_with_root_of_unity(4), (5, 2));
    }

    #[test]
    fn unknown_families() {
        let o = VerifyOptions::default();
        assert!(matches!(verify("nope", o), Err(Error::UnknownFamily(_))));
        assert!(matches!(verify("minclone:5", o), Err(Error::UnknownFamily(_))));
        assert!(matches!(verify("linear:2", o), Err(Error::UnknownFamily(_))));
        assert!(matches!(verify("mean:3", o), Err(Error::UnknownFamily(_))));
        assert!(matches!(verify("dihedral:x", o), Err(Error::Parse { .. })));
    }

    #[test]
    fn op3233_report_flags_non_catalan() {
        let r = verify("op3233", VerifyOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.non_catalan_from, Some(6));
        assert_eq!(r.rows[5].computed, 41);
    }
}
