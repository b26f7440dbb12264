//! The Hopf algebra of populated multi-indices.
//!
//! A multi-index `z^β = ∏ z_k^{β(k)}` records how many vertices of a tree
//! have `k` children. Forests of multi-indices are unordered collections
//! of populated multi-indices; the empty forest is the unit `z^0`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{int, Basis, GradedVector, Rational, Tensor2};
use crate::error::{Error, Result};
use crate::forests::{Forest, Tree};

/// A finitely supported exponent vector `β`, with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex {
    beta: Vec<u32>,
}

impl MultiIndex {
    pub fn new(mut beta: Vec<u32>) -> MultiIndex {
        while beta.last() == Some(&0) {
            beta.pop();
        }
        MultiIndex { beta }
    }

    /// The single variable `z_k`.
    pub fn var(k: usize) -> MultiIndex {
        let mut beta = vec![0; k + 1];
        beta[k] = 1;
        MultiIndex { beta }
    }

    pub fn get(&self, k: usize) -> u32 {
        self.beta.get(k).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.beta
    }

    pub fn is_zero(&self) -> bool {
        self.beta.is_empty()
    }

    /// Number of variables counted with multiplicity.
    pub fn size(&self) -> usize {
        self.beta.iter().map(|&b| b as usize).sum()
    }

    /// `[β] = Σ (1 − k) β(k)`.
    pub fn population(&self) -> i64 {
        self.beta.iter().enumerate().map(|(k, &b)| (1 - k as i64) * b as i64).sum()
    }

    pub fn is_populated(&self) -> bool {
        self.population() == 1
    }

    /// `S_M(z^β) = ∏ (k!)^{β(k)}`.
    pub fn symmetry(&self) -> BigInt {
        let mut s = BigInt::one();
        for (k, &b) in self.beta.iter().enumerate() {
            s *= factorial(k).pow(b);
        }
        s
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let n = self.beta.len().max(other.beta.len());
        MultiIndex::new((0..n).map(|k| self.get(k) + other.get(k)).collect())
    }

    /// `self − other`, if componentwise nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let n = self.beta.len().max(other.beta.len());
        let mut beta = Vec::with_capacity(n);
        for k in 0..n {
            beta.push(self.get(k).checked_sub(other.get(k))?);
        }
        Some(MultiIndex::new(beta))
    }

    pub fn le(&self, other: &MultiIndex) -> bool {
        (0..self.beta.len()).all(|k| self.get(k) <= other.get(k))
    }

    /// Letters in decreasing order, e.g. `z2z1z0z0`.
    pub fn shorthand(&self) -> String {
        let mut s = String::new();
        for (k, &b) in self.beta.iter().enumerate().rev() {
            for _ in 0..b {
                s.push_str(&format!("z{}", k));
            }
        }
        s
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("1");
        }
        let mut first = true;
        for (k, &b) in self.beta.iter().enumerate() {
            if b == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if b == 1 {
                write!(f, "z{}", k)?;
            } else {
                write!(f, "z{}^{}", k, b)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Basis for MultiIndex {
    fn degree(&self) -> usize {
        self.size()
    }
}

/// Unordered collection of populated multi-indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndexForest {
    entries: Vec<MultiIndex>,
}

impl MultiIndexForest {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Builds a forest, rejecting non-populated components.
    pub fn new(entries: Vec<MultiIndex>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|b| !b.is_populated()) {
            return Err(Error::NotPopulated(bad.to_string()));
        }
        Ok(Self::new_unchecked(entries))
    }

    pub(crate) fn new_unchecked(mut entries: Vec<MultiIndex>) -> Self {
        entries.sort();
        MultiIndexForest { entries }
    }

    pub fn single(b: MultiIndex) -> Result<Self> {
        Self::new(vec![b])
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    pub fn is_unit(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_components(&self) -> usize {
        self.entries.len()
    }

    pub fn size(&self) -> usize {
        self.entries.iter().map(MultiIndex::size).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut e = self.entries.clone();
        e.extend_from_slice(&other.entries);
        Self::new_unchecked(e)
    }

    /// `S_ext = ∏ r_i!` over the multiplicities of distinct components.
    pub fn symmetry_ext(&self) -> BigInt {
        let mut s = BigInt::one();
        let mut run = 0usize;
        for (i, b) in self.entries.iter().enumerate() {
            run = if i > 0 && self.entries[i - 1] == *b { run + 1 } else { 1 };
            s *= BigInt::from(run);
        }
        s
    }

    /// `S_M = ∏ r_i! S_M(β_i)^{r_i}`.
    pub fn symmetry(&self) -> BigInt {
        self.entries.iter().fold(self.symmetry_ext(), |acc, b| acc * b.symmetry())
    }

    /// Shorthand rendering, components joined by nothing.
    pub fn shorthand(&self) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        self.entries.iter().map(MultiIndex::shorthand).collect()
    }
}

impl fmt::Display for MultiIndexForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        for (i, b) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndexForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Basis for MultiIndexForest {
    fn degree(&self) -> usize {
        self.size()
    }
}

/// Linear combination of multi-index forests.
pub type MElement = GradedVector<MultiIndexForest>;
pub type MTensor = Tensor2<MultiIndexForest, MultiIndexForest>;

pub fn population(b: &MultiIndex) -> i64 {
    b.population()
}

/// Which symmetry factor [`symmetry_m`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryMode {
    Full,
    Ext,
}

pub fn symmetry_m(x: &MultiIndexForest, mode: SymmetryMode) -> BigInt {
    match mode {
        SymmetryMode::Full => x.symmetry(),
        SymmetryMode::Ext => x.symmetry_ext(),
    }
}

/// `⟨x, y⟩ = S_M(x) δ_{x,y}`, extended bilinearly.
pub fn pairing_m(a: &MElement, b: &MElement) -> Rational {
    let mut s = Rational::zero();
    for (x, c) in a.iter() {
        let d = b.coeff(x);
        if !d.is_zero() {
            s += c * d * Rational::from_integer(x.symmetry());
        }
    }
    s
}

/// `D̄ z^β = Σ_{k ≥ 1, β(k) ≥ 1} k (β(k−1) + 1) z^{β − e_k + e_{k−1}}`.
pub fn dbar(b: &MultiIndex) -> GradedVector<MultiIndex> {
    let mut out = GradedVector::zero();
    for k in 1..b.beta.len() {
        if b.beta[k] == 0 {
            continue;
        }
        let mut beta = b.beta.clone();
        beta[k] -= 1;
        beta[k - 1] += 1;
        let c = int(k as i64 * (b.get(k - 1) as i64 + 1));
        out.add_term(MultiIndex::new(beta), c);
    }
    out
}

/// `D̄` applied `n` times to a linear combination.
pub fn dbar_pow(v: &GradedVector<MultiIndex>, n: usize) -> GradedVector<MultiIndex> {
    (0..n).fold(v.clone(), |acc, _| acc.map_linear(dbar))
}

/// Populated multi-indices `γ ≠ 0` with `γ ≤ β` componentwise, sorted.
pub fn populated_submultiindices(b: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; b.beta.len()];
    fn rec(b: &MultiIndex, k: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if k == cur.len() {
            let m = MultiIndex::new(cur.clone());
            if !m.is_zero() && m.is_populated() {
                out.push(m);
            }
            return;
        }
        for e in 0..=b.beta[k] {
            cur[k] = e;
            rec(b, k + 1, cur, out);
        }
        cur[k] = 0;
    }
    rec(b, 0, &mut cur, &mut out);
    out.sort();
    out
}

fn check_populated(x: &MultiIndexForest) -> Result<()> {
    match x.entries.iter().find(|b| !b.is_populated()) {
        Some(bad) => Err(Error::NotPopulated(bad.to_string())),
        None => Ok(()),
    }
}

/// `Δ^M z^β` for a single populated multi-index.
pub fn coproduct_single(b: &MultiIndex) -> Result<MTensor> {
    if !b.is_populated() {
        return Err(Error::NotPopulated(b.to_string()));
    }
    let whole = MultiIndexForest::new_unchecked(vec![b.clone()]);
    let mut out = MTensor::zero();
    out.add_term((MultiIndexForest::unit(), whole.clone()), Rational::one());
    out.add_term((whole, MultiIndexForest::unit()), Rational::one());
    let subs = populated_submultiindices(b);
    let mut chosen = Vec::new();
    let mut err = None;
    extractions(&subs, 0, b, &mut chosen, &mut |parts, rest| {
        if err.is_some() {
            return;
        }
        let left = MultiIndexForest::new_unchecked(parts.to_vec());
        let coef = Rational::new(BigInt::one(), left.symmetry_ext());
        let right = dbar_pow(&GradedVector::basis(rest.clone()), parts.len());
        for (r, c) in right.iter() {
            if !r.is_populated() {
                err = Some(Error::Internal(format!("D̄ image {} of {} is not populated", r, rest)));
                return;
            }
            out.add_term((left.clone(), MultiIndexForest::new_unchecked(vec![r.clone()])), c * &coef);
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Visits every nonempty multiset of `subs` whose sum fits under `rest`.
fn extractions(
    subs: &[MultiIndex],
    from: usize,
    rest: &MultiIndex,
    chosen: &mut Vec<MultiIndex>,
    visit: &mut dyn FnMut(&[MultiIndex], &MultiIndex),
) {
    if !chosen.is_empty() {
        visit(chosen, rest);
    }
    for i in from..subs.len() {
        if let Some(r) = rest.checked_sub(&subs[i]) {
            chosen.push(subs[i].clone());
            extractions(subs, i, &r, chosen, visit);
            chosen.pop();
        }
    }
}

fn mtensor_mul(a: &MTensor, b: &MTensor) -> MTensor {
    a.bilinear(b, |(l1, r1), (l2, r2)| MTensor::basis((l1.mul(l2), r1.mul(r2))))
}

/// `Δ^M` on a forest of multi-indices, multiplicative over components.
pub fn coproduct_forest_m(x: &MultiIndexForest) -> Result<MTensor> {
    check_populated(x)?;
    let unit = MTensor::basis((MultiIndexForest::unit(), MultiIndexForest::unit()));
    x.entries.iter().try_fold(unit, |acc, b| Ok(mtensor_mul(&acc, &coproduct_single(b)?)))
}

pub fn coproduct_m(x: &MElement) -> Result<MTensor> {
    let mut out = MTensor::zero();
    for (f, c) in x.iter() {
        out.add_scaled(&coproduct_forest_m(f)?, c);
    }
    Ok(out)
}

/// `Δ̄^M x = Δ^M x − z^0 ⊗ x − x ⊗ z^0`.
pub fn reduced_coproduct(x: &MElement) -> Result<MTensor> {
    Ok(coproduct_m(x)?.filter(|(l, r)| !l.is_unit() && !r.is_unit()))
}

/// The part of `Δ̄^M x` with left leg of degree `m` and right leg of
/// degree `n`.
pub fn reduced_component(m: usize, n: usize, x: &MElement) -> Result<MTensor> {
    Ok(reduced_coproduct(x)?.filter(|(l, r)| l.size() == m && r.size() == n))
}

/// Unshuffle `Δ_μ`: single multi-indices are primitive.
pub fn unshuffle_m(x: &MElement) -> MTensor {
    let mut out = MTensor::zero();
    for (f, c) in x.iter() {
        let k = f.entries.len();
        for mask in 0u32..(1 << k) {
            let (mut l, mut r) = (Vec::new(), Vec::new());
            for (i, b) in f.entries.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    l.push(b.clone());
                } else {
                    r.push(b.clone());
                }
            }
            out.add_term(
                (MultiIndexForest::new_unchecked(l), MultiIndexForest::new_unchecked(r)),
                c.clone(),
            );
        }
    }
    out
}

/// Forest product of multi-index forests, extended bilinearly.
pub fn forest_product_m(a: &MElement, b: &MElement) -> MElement {
    a.bilinear(b, |x, y| MElement::basis(x.mul(y)))
}

/// Populated single multi-indices of degree `n`, sorted. They are in
/// bijection with partitions of `n − 1`.
pub fn populated_of_degree(n: usize) -> Vec<MultiIndex> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut beta = vec![0u32; n];
    fn rec(remaining: usize, max_part: usize, n: usize, beta: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if remaining == 0 {
            let parts: u32 = beta[1..].iter().sum();
            let mut b = beta.clone();
            b[0] = n as u32 - parts;
            out.push(MultiIndex::new(b));
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            beta[p] += 1;
            rec(remaining - p, p, n, beta, out);
            beta[p] -= 1;
        }
    }
    rec(n - 1, n - 1, n, &mut beta, &mut out);
    out.sort();
    out
}

/// The basis of degree-`n` forests of populated multi-indices, sorted.
pub fn basis_m(n: usize) -> Vec<MultiIndexForest> {
    let singles: Vec<MultiIndex> = (1..=n).flat_map(populated_of_degree).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(all: &[MultiIndex], from: usize, remaining: usize, stack: &mut Vec<MultiIndex>, out: &mut Vec<MultiIndexForest>) {
        if remaining == 0 {
            out.push(MultiIndexForest::new_unchecked(stack.clone()));
            return;
        }
        for i in from..all.len() {
            if all[i].size() <= remaining {
                stack.push(all[i].clone());
                rec(all, i, remaining - all[i].size(), stack, out);
                stack.pop();
            }
        }
    }
    rec(&singles, 0, n, &mut stack, &mut out);
    out.sort();
    out
}

type Transpose = BTreeMap<(MultiIndexForest, MultiIndexForest), Vec<(MultiIndexForest, Rational)>>;

fn transpose_table(n: usize) -> Result<Arc<Transpose>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<Transpose>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&n) {
        return Ok(t.clone());
    }
    let mut table = Transpose::new();
    for c in basis_m(n) {
        let sc = Rational::from_integer(c.symmetry());
        for ((a, b), k) in coproduct_forest_m(&c)?.iter() {
            let w = Rational::from_integer(a.symmetry() * b.symmetry()) / &sc;
            table.entry((a.clone(), b.clone())).or_default().push((c.clone(), k * w));
        }
    }
    let table = Arc::new(table);
    cache.lock().expect("cache lock").insert(n, table.clone());
    Ok(table)
}

/// Basis-level `a ⋆_M b`, the transpose of `Δ^M` under the `S_M` pairing.
pub fn star_m_forest(a: &MultiIndexForest, b: &MultiIndexForest) -> Result<MElement> {
    check_populated(a)?;
    check_populated(b)?;
    let table = transpose_table(a.size() + b.size())?;
    Ok(table
        .get(&(a.clone(), b.clone()))
        .map(|v| v.iter().cloned().collect())
        .unwrap_or_default())
}

pub fn star_m(a: &MElement, b: &MElement) -> Result<MElement> {
    let mut out = MElement::zero();
    for (x, c) in a.iter() {
        for (y, d) in b.iter() {
            out.add_scaled(&star_m_forest(x, y)?, &(c * d));
        }
    }
    Ok(out)
}

/// `Φ(B⁺(τ₁…τ_n)) = z_n ∏ Φ(τ_i)` for a single tree.
pub fn phi_tree(t: &Tree) -> Result<MultiIndex> {
    if t.max_label() > 1 {
        return Err(Error::Unsupported("Φ is defined for the one-letter alphabet only".into()));
    }
    fn rec(t: &Tree, beta: &mut Vec<u32>) {
        let k = t.children().len();
        if beta.len() <= k {
            beta.resize(k + 1, 0);
        }
        beta[k] += 1;
        t.children().iter().for_each(|c| rec(c, beta));
    }
    let mut beta = Vec::new();
    rec(t, &mut beta);
    Ok(MultiIndex::new(beta))
}

/// `Φ` extended multiplicatively to forests.
pub fn phi(f: &Forest) -> Result<MultiIndexForest> {
    let entries = f.trees().iter().map(phi_tree).collect::<Result<Vec<_>>>()?;
    Ok(MultiIndexForest::new_unchecked(entries))
}

/// `Φ` extended linearly.
pub fn phi_linear(x: &GradedVector<Forest>) -> Result<MElement> {
    let mut out = MElement::zero();
    for (f, c) in x.iter() {
        out.add_term(phi(f)?, c.clone());
    }
    Ok(out)
}

/// Input syntax for [`parse_mindex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notation {
    /// `z0^2 z1 z2 * z0`: components joined by `*`.
    Explicit,
    /// `z0z1z0`: letters only, segmented into populated non-increasing runs.
    Shorthand,
}

fn letters(text: &str) -> Result<Vec<(usize, u32, u32)>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if bytes[i] != b'z' {
            return Err(Error::parse(i, format!("expected 'z', found '{}'", bytes[i] as char)));
        }
        i += 1;
        let k = digits(bytes, &mut i).ok_or_else(|| Error::parse(i, "expected an index after 'z'"))?;
        let mut e = 1;
        let mut j = i;
        while j < bytes.len() && bytes[j].is_ascii_whitespace() {
            j += 1;
        }
        if j < bytes.len() && bytes[j] == b'^' {
            i = j + 1;
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            e = digits(bytes, &mut i).ok_or_else(|| Error::parse(i, "expected an exponent after '^'"))?;
        }
        out.push((start, k, e));
    }
    Ok(out)
}

fn digits(bytes: &[u8], i: &mut usize) -> Option<u32> {
    let start = *i;
    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
        *i += 1;
    }
    std::str::from_utf8(&bytes[start..*i]).ok()?.parse().ok()
}

fn monomial(letters: &[(usize, u32, u32)]) -> MultiIndex {
    let mut beta = Vec::new();
    for &(_, k, e) in letters {
        let k = k as usize;
        if beta.len() <= k {
            beta.resize(k + 1, 0);
        }
        beta[k] += e;
    }
    MultiIndex::new(beta)
}

/// Parses a single monomial `z0^2 z1 z2`, populated or not; `1` is `z^0`.
pub fn parse_multiindex(text: &str) -> Result<MultiIndex> {
    if text.trim() == "1" {
        return Ok(MultiIndex::new(Vec::new()));
    }
    let ls = letters(text)?;
    if ls.is_empty() {
        return Err(Error::parse(0, "empty input"));
    }
    Ok(monomial(&ls))
}

/// Parses a forest of multi-indices; `1` denotes the unit.
pub fn parse_mindex(text: &str, notation: Notation) -> Result<MultiIndexForest> {
    if text.trim() == "1" {
        return Ok(MultiIndexForest::unit());
    }
    match notation {
        Notation::Explicit => {
            let mut entries = Vec::new();
            let mut offset = 0;
            for part in text.split('*') {
                let ls = letters(part).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
                    other => other,
                })?;
                if ls.is_empty() {
                    return Err(Error::parse(offset, "empty component"));
                }
                entries.push(monomial(&ls));
                offset += part.len() + 1;
            }
            MultiIndexForest::new(entries)
        }
        Notation::Shorthand => {
            let ls = letters(text)?;
            if let Some(&(pos, _, _)) = ls.iter().find(|l| l.2 != 1) {
                return Err(Error::parse(pos, "exponents are not allowed in shorthand"));
            }
            if ls.is_empty() {
                return Err(Error::parse(0, "empty input"));
            }
            let segs = segmentations(&ls);
            if segs.len() != 1 {
                return Err(Error::Ambiguous { text: text.to_string(), count: segs.len() });
            }
            let entries = segs[0].iter().map(|&(a, b)| monomial(&ls[a..b])).collect();
            MultiIndexForest::new(entries)
        }
    }
}

/// All ways to cut the letters into non-increasing populated runs.
fn segmentations(ls: &[(usize, u32, u32)]) -> Vec<Vec<(usize, usize)>> {
    fn rec(ls: &[(usize, u32, u32)], from: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if from == ls.len() {
            out.push(cur.clone());
            return;
        }
        for to in from + 1..=ls.len() {
            if to - 1 > from && ls[to - 1].1 > ls[to - 2].1 {
                break;
            }
            if monomial(&ls[from..to]).is_populated() {
                cur.push((from, to));
                rec(ls, to, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(ls, 0, &mut Vec::new(), &mut out);
    out
}

/// Parses a linear combination like `3 z0^4 - 12 z0 * z1 z0` (explicit)
/// or `3z0z0z0z0 - 12z0z0z1z0` (shorthand).
pub fn parse_melement(text: &str, notation: Notation) -> Result<MElement> {
    let mut out = MElement::zero();
    for (sign, chunk, pos) in signed_chunks(text) {
        let chunk_trim = chunk.trim_start();
        let lead = chunk.len() - chunk_trim.len();
        let split = chunk_trim.find(|c: char| !(c.is_ascii_digit() || c == '/' || c.is_whitespace()));
        let (num, rest) = match split {
            Some(i) => chunk_trim.split_at(i),
            None => return Err(Error::parse(pos, "missing basis element")),
        };
        let coeff = if num.trim().is_empty() {
            Rational::one()
        } else {
            crate::algebra::parse_rational(num).ok_or_else(|| Error::parse(pos + lead, "bad coefficient"))?
        };
        let x = parse_mindex(rest, notation).map_err(|e| match e {
            Error::Parse { pos: p, msg } => Error::Parse { pos: p + pos + lead + num.len(), msg },
            other => other,
        })?;
        out.add_term(x, if sign { -coeff } else { coeff });
    }
    Ok(out)
}

/// Parses a combination of tensors `c a (x) b`, legs in the given notation.
pub fn parse_mtensor(text: &str, notation: Notation) -> Result<MTensor> {
    let mut out = MTensor::zero();
    if text.trim() == "0" {
        return Ok(out);
    }
    for (sign, chunk, pos) in signed_chunks(text) {
        let Some(mid) = chunk.find("(x)") else {
            return Err(Error::parse(pos, "expected '(x)'"));
        };
        let left = parse_melement(&chunk[..mid], notation).map_err(|e| shift(e, pos))?;
        let right = parse_mindex(&chunk[mid + 3..], notation).map_err(|e| shift(e, pos + mid + 3))?;
        let ((l, c),) = match left.iter().collect::<Vec<_>>()[..] {
            [one] => (one,),
            _ => return Err(Error::parse(pos, "expected a single left factor")),
        };
        out.add_term((l.clone(), right), if sign { -c.clone() } else { c.clone() });
    }
    Ok(out)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

pub(crate) fn signed_chunks(text: &str) -> Vec<(bool, &str, usize)> {
    let mut out = Vec::new();
    let mut neg = false;
    let mut start = 0;
    let bytes = text.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        if c == b'+' || c == b'-' {
            if !text[start..i].trim().is_empty() {
                out.push((neg, &text[start..i], start));
            }
            neg = c == b'-';
            start = i + 1;
        }
    }
    if !text[start..].trim().is_empty() {
        out.push((neg, &text[start..], start));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::forests::{parse_forest, Enumerator};

    fn mi(s: &str) -> MultiIndex {
        let f = parse_mindex(s, Notation::Explicit);
        match f {
            Ok(f) if f.num_components() == 1 => f.entries()[0].clone(),
            _ => monomial(&letters(s).unwrap()),
        }
    }

    fn mf(s: &str) -> MultiIndexForest {
        parse_mindex(s, Notation::Explicit).unwrap()
    }

    fn mt(terms: &[(&str, &str, Rational)]) -> MTensor {
        terms.iter().map(|(l, r, c)| ((mf(l), mf(r)), c.clone())).collect()
    }

    #[test]
    fn population_examples() {
        assert_eq!(mi("z0").population(), 1);
        assert_eq!(mi("z1 z0").population(), 1);
        assert_eq!(mi("z0^2 z1 z2").population(), 1);
        assert_eq!(mi("z1").population(), 0);
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(mi("z0 z1 z2").symmetry(), BigInt::from(2));
        assert_eq!(mf("z2 z0^2").symmetry(), BigInt::from(2));
        assert_eq!(mf("z0 * z0").symmetry_ext(), BigInt::from(2));
        assert_eq!(MultiIndexForest::unit().symmetry(), BigInt::from(1));
    }

    #[test]
    fn pairing_examples() {
        let e = |s: &str| MElement::basis(mf(s));
        assert_eq!(pairing_m(&e("z1 z0"), &e("z1 z0")), int(1));
        assert_eq!(pairing_m(&e("z0 * z0"), &e("z0 * z0")), int(2));
        assert_eq!(pairing_m(&e("z0"), &e("z1 z0")), int(0));
    }

    #[test]
    fn dbar_examples() {
        let expect: GradedVector<MultiIndex> = [(mi("z0^2 z2"), int(2)), (mi("z0 z1^2"), int(4))].into_iter().collect();
        assert_eq!(dbar(&mi("z0 z1 z2")), expect);
        assert_eq!(dbar(&mi("z1")), GradedVector::basis(mi("z0")));
        assert_eq!(dbar_pow(&GradedVector::basis(mi("z2")), 2), GradedVector::term(mi("z0"), int(2)));
        assert!(dbar(&mi("z0")).is_zero());
    }

    #[test]
    fn worked_coproduct() {
        let got = coproduct_forest_m(&mf("z0^2 z1 z2")).unwrap();
        let expect = mt(&[
            ("1", "z0^2 z1 z2", int(1)),
            ("z0^2 z1 z2", "1", int(1)),
            ("z0", "z0^2 z2", int(2)),
            ("z0", "z0 z1^2", int(4)),
            ("z0 z1", "z0 z1", int(2)),
            ("z0^2 z2", "z0", int(1)),
            ("z0 * z0", "z0 z1", int(3)),
            ("z0 * z0 z1", "z0", int(2)),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn small_coproducts() {
        let z0 = mf("z0");
        assert_eq!(coproduct_forest_m(&z0).unwrap(), mt(&[("1", "z0", int(1)), ("z0", "1", int(1))]));
        let r = reduced_coproduct(&MElement::basis(mf("z1 z0"))).unwrap();
        assert_eq!(r, mt(&[("z0", "z0", int(1))]));
        assert!(coproduct_forest_m(&MultiIndexForest::new_unchecked(vec![mi("z1")])).is_err());
    }

    #[test]
    fn reduced_components() {
        let e = |s: &str| MElement::basis(mf(s));
        assert_eq!(reduced_component(1, 1, &e("z0 * z0")).unwrap(), mt(&[("z0", "z0", int(2))]));
        assert_eq!(
            reduced_component(2, 2, &e("z1 z0 * z1 z0")).unwrap(),
            mt(&[("z0 * z0", "z0 * z0", int(1)), ("z1 z0", "z1 z0", int(2))])
        );
        assert_eq!(reduced_component(3, 1, &e("z3 z0^3")).unwrap(), mt(&[("z0 * z0 * z0", "z0", int(1))]));
    }

    #[test]
    fn star_examples() {
        let e = |s: &str| MElement::basis(mf(s));
        let expect: MElement = [(mf("z0 * z0"), int(1)), (mf("z1 z0"), int(1))].into_iter().collect();
        assert_eq!(star_m(&e("z0"), &e("z0")).unwrap(), expect);
        assert_eq!(star_m(&e("1"), &e("z2 z0^2")).unwrap(), e("z2 z0^2"));
        let lhs = pairing_m(&star_m(&e("z0"), &e("z1 z0")).unwrap(), &e("z2 z0^2"));
        let d = coproduct_forest_m(&mf("z2 z0^2")).unwrap();
        let rhs = d.coeff(&(mf("z0"), mf("z1 z0"))) * rat(1, 1);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, int(2));
    }

    #[test]
    fn phi_examples() {
        let p = |s: &str| phi(&parse_forest(s).unwrap()).unwrap();
        assert_eq!(p("[1:]"), mf("z0"));
        assert_eq!(p("[1:[1:]]"), mf("z1 z0"));
        assert_eq!(p("[1:[1:][1:]]"), mf("z2 z0^2"));
        let mut e = Enumerator::new(1);
        let hits = e.trees(4).iter().filter(|t| phi_tree(t).unwrap() == mi("z2 z1 z0^2")).count();
        assert_eq!(hits, 2);
        assert!(phi(&parse_forest("[2:]").unwrap()).is_err());
    }

    #[test]
    fn shorthand_examples() {
        assert_eq!(parse_mindex("z0z0z0z0", Notation::Shorthand).unwrap(), mf("z0 * z0 * z0 * z0"));
        assert_eq!(parse_mindex("z0z1z0", Notation::Shorthand).unwrap(), mf("z0 * z1 z0"));
        assert_eq!(parse_mindex("z1z1z0", Notation::Shorthand).unwrap(), mf("z1^2 z0"));
        assert!(matches!(parse_mindex("z1", Notation::Shorthand), Err(Error::Ambiguous { count: 0, .. })));
        assert!(matches!(parse_mindex("z1 * z0", Notation::Explicit), Err(Error::NotPopulated(_))));
    }

    #[test]
    fn bases() {
        let sizes: Vec<usize> = (1..=4).map(|n| basis_m(n).len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8]);
        assert_eq!(populated_of_degree(6).len(), 7);
    }

    #[test]
    fn linear_parse() {
        let v = parse_melement("3z0z0z0z0 - 12z0z0z1z0", Notation::Shorthand).unwrap();
        assert_eq!(v.coeff(&mf("z0*z0*z0*z0")), int(3));
        assert_eq!(v.coeff(&mf("z0*z0*z1 z0")), int(-12));
    }
}
