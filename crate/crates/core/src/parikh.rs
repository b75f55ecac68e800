//! Parikh vectors over an ordered alphabet.
//!
//! A Parikh vector counts the occurrences of every letter of a word. Vectors
//! of a fixed order `k` (entries summing to `k`) are enumerated in
//! colexicographic order: the last coordinate varies slowest. The rank of a
//! vector is its position in that order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letters are indices into the alphabet, `0` rendering as `a`.
pub type Letter = u8;

/// Largest supported alphabet; letters must fit in a [`Letter`].
pub const MAX_SIGMA: usize = 256;

/// `C(n, k)`, or `None` when the value does not fit in 64 bits.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Number of order-`k` Parikh vectors over `sigma` letters, `C(k+σ-1, σ-1)`.
pub fn pv_count(k: usize, sigma: usize) -> Option<u64> {
    if sigma == 0 {
        return Some(0);
    }
    binomial((k + sigma - 1) as u64, (sigma - 1) as u64)
}

/// Validated `(k, σ)` pair whose vector count fits in 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub k: usize,
    pub sigma: usize,
}

impl Shape {
    pub fn new(k: usize, sigma: usize) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::invalid("alphabet size must be at least 1"));
        }
        if sigma > MAX_SIGMA {
            return Err(Error::capacity(format!("alphabet size {sigma} exceeds the supported maximum of {MAX_SIGMA}")));
        }
        if pv_count(k, sigma).is_none() {
            return Err(Error::capacity(format!("C(k+σ-1, σ-1) for k={k}, σ={sigma} does not fit in 64 bits")));
        }
        Ok(Shape { k, sigma })
    }

    pub fn vertex_count(&self) -> u64 {
        pv_count(self.k, self.sigma).expect("validated on construction")
    }
}

/// An ordered alphabet of `size` letters.
///
/// Up to 26 letters render as `a, b, c, …`; larger alphabets render words as
/// comma-separated letter indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("alphabet size must be at least 1"));
        }
        if size > MAX_SIGMA {
            return Err(Error::capacity(format!("alphabet size {size} exceeds the supported maximum of {MAX_SIGMA}")));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn uses_indices(&self) -> bool {
        self.size > 26
    }

    pub fn render_letter(&self, letter: Letter) -> String {
        if self.uses_indices() {
            letter.to_string()
        } else {
            char::from(b'a' + letter).to_string()
        }
    }

    pub fn render(&self, word: &[Letter]) -> String {
        if self.uses_indices() {
            word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
        } else {
            word.iter().map(|&l| char::from(b'a' + l)).collect()
        }
    }

    pub fn parse(&self, text: &str) -> Result<Vec<Letter>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if self.uses_indices() {
            text.split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    let idx: usize =
                        tok.parse().map_err(|_| Error::invalid(format!("'{tok}' is not a letter index")))?;
                    self.check(idx)
                })
                .collect()
        } else {
            text.chars()
                .map(|c| {
                    if !c.is_ascii_lowercase() {
                        return Err(Error::invalid(format!(
                            "'{c}' is not a letter of the {}-letter alphabet",
                            self.size
                        )));
                    }
                    self.check((c as u8 - b'a') as usize)
                })
                .collect()
        }
    }

    fn check(&self, idx: usize) -> Result<Letter> {
        if idx >= self.size {
            Err(Error::invalid(format!(
                "letter {} is outside the {}-letter alphabet",
                if self.uses_indices() { idx.to_string() } else { char::from(b'a' + idx as u8).to_string() },
                self.size
            )))
        } else {
            Ok(idx as Letter)
        }
    }
}

/// Letter multiplicities of a word.
///
/// Ordering is colexicographic (compare the last coordinate first), which
/// for vectors of equal order coincides with rank order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParikhVector {
    counts: Vec<u32>,
}

impl ParikhVector {
    pub fn new(counts: Vec<u32>) -> Self {
        ParikhVector { counts }
    }

    pub fn zero(sigma: usize) -> Self {
        ParikhVector { counts: vec![0; sigma] }
    }

    pub fn unit(i: usize, sigma: usize) -> Self {
        let mut v = Self::zero(sigma);
        v.counts[i] = 1;
        v
    }

    /// `k · e_i`, the corner vertex of letter `i`.
    pub fn corner(i: usize, k: usize, sigma: usize) -> Self {
        let mut v = Self::zero(sigma);
        v.counts[i] = k as u32;
        v
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn sigma(&self) -> usize {
        self.counts.len()
    }

    pub fn order(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.counts[i]
    }

    /// Number of non-zero coordinates.
    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// `self - e_out + e_in`; `None` when coordinate `out` is zero.
    pub fn shifted(&self, out: usize, into: usize) -> Option<Self> {
        if self.counts[out] == 0 {
            return None;
        }
        let mut v = self.clone();
        v.counts[out] -= 1;
        v.counts[into] += 1;
        Some(v)
    }

    pub fn plus_unit(&self, i: usize) -> Self {
        let mut v = self.clone();
        v.counts[i] += 1;
        v
    }

    pub fn minus_unit(&self, i: usize) -> Option<Self> {
        if self.counts[i] == 0 {
            return None;
        }
        let mut v = self.clone();
        v.counts[i] -= 1;
        Some(v)
    }

    /// All `p - e_i + e_j` with `p_i > 0`, `i != j`, in rank order.
    pub fn neighbors(&self) -> Vec<ParikhVector> {
        let sigma = self.sigma();
        let mut out = Vec::new();
        for i in 0..sigma {
            for j in 0..sigma {
                if i != j {
                    if let Some(q) = self.shifted(i, j) {
                        out.push(q);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// The `σ` vectors `p + e_i`.
    pub fn parents(&self) -> Vec<ParikhVector> {
        let mut out: Vec<_> = (0..self.sigma()).map(|i| self.plus_unit(i)).collect();
        out.sort();
        out
    }

    /// The vectors `p - e_i` for every non-zero coordinate `i`.
    pub fn children(&self) -> Vec<ParikhVector> {
        let mut out: Vec<_> = (0..self.sigma()).filter_map(|i| self.minus_unit(i)).collect();
        out.sort();
        out
    }

    /// Graph distance in the undirected grid: `Σ max(0, p_i - q_i)`.
    pub fn distance(&self, other: &ParikhVector) -> usize {
        self.counts.iter().zip(&other.counts).map(|(&a, &b)| a.saturating_sub(b) as usize).sum()
    }

    pub fn is_neighbor(&self, other: &ParikhVector) -> bool {
        self.sigma() == other.sigma() && self.order() == other.order() && self.distance(other) == 1
    }

    /// If `other = self - e_out + e_in` with `out != in`, returns `(out, in)`.
    pub fn shift_to(&self, other: &ParikhVector) -> Option<(usize, usize)> {
        if !self.is_neighbor(other) {
            return None;
        }
        let out = (0..self.sigma()).find(|&i| self.counts[i] > other.counts[i])?;
        let into = (0..self.sigma()).find(|&i| self.counts[i] < other.counts[i])?;
        Some((out, into))
    }

    pub fn le(&self, other: &ParikhVector) -> bool {
        self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// The word listing each letter in alphabet order, repeated by its count.
    pub fn canonical_word(&self) -> Vec<Letter> {
        let mut w = Vec::with_capacity(self.order());
        for (i, &c) in self.counts.iter().enumerate() {
            w.extend(std::iter::repeat_n(i as Letter, c as usize));
        }
        w
    }
}

impl Ord for ParikhVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.counts.len().cmp(&other.counts.len()).then_with(|| self.counts.iter().rev().cmp(other.counts.iter().rev()))
    }
}

impl PartialOrd for ParikhVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for ParikhVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::invalid(format!("'{s}' is not a Parikh vector; expected e.g. (2,1,0)")))?;
        let counts = inner
            .split(',')
            .map(|tok| {
                tok.trim().parse::<u32>().map_err(|_| Error::invalid(format!("'{tok}' is not a non-negative count")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ParikhVector::new(counts))
    }
}

/// Parses a list such as `(3,0,0),(0,3,0)`.
pub fn parse_vector_list(text: &str) -> Result<Vec<ParikhVector>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let rest_trim = rest.trim_start_matches([',', ' ', ';']);
        if rest_trim.is_empty() {
            break;
        }
        let end = rest_trim.find(')').ok_or_else(|| Error::invalid(format!("unterminated vector in '{text}'")))?;
        out.push(rest_trim[..=end].parse()?);
        rest = &rest_trim[end + 1..];
    }
    if out.is_empty() {
        return Err(Error::invalid("empty vector list"));
    }
    Ok(out)
}

/// Parikh vector of `word` over a `sigma`-letter alphabet.
pub fn pv_of(word: &[Letter], sigma: usize) -> Result<ParikhVector> {
    let mut counts = vec![0u32; sigma];
    for &l in word {
        let slot = counts
            .get_mut(l as usize)
            .ok_or_else(|| Error::invalid(format!("letter index {l} is outside alphabet of size {sigma}")))?;
        *slot += 1;
    }
    Ok(ParikhVector::new(counts))
}

/// All order-`k` vectors over `sigma` letters in rank order.
pub fn enumerate_pv(k: usize, sigma: usize) -> Result<Vec<ParikhVector>> {
    let shape = Shape::new(k, sigma)?;
    let total = shape.vertex_count();
    if total > usize::MAX as u64 / 2 {
        return Err(Error::capacity(format!("{total} vectors cannot be materialized")));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u32; sigma];
    fill_colex(&mut cur, sigma, k as u32, &mut out);
    Ok(out)
}

fn fill_colex(cur: &mut [u32], len: usize, remaining: u32, out: &mut Vec<ParikhVector>) {
    if len == 1 {
        cur[0] = remaining;
        out.push(ParikhVector::new(cur.to_vec()));
        return;
    }
    for last in 0..=remaining {
        cur[len - 1] = last;
        fill_colex(cur, len - 1, remaining - last, out);
    }
    cur[len - 1] = 0;
}

/// Index of `p` within [`enumerate_pv`] for its order.
pub fn rank(p: &ParikhVector) -> u64 {
    rank_counts(&p.counts)
}

/// [`rank`] for a raw count slice.
pub fn rank_counts(counts: &[u32]) -> u64 {
    let mut rem: u64 = counts.iter().map(|&c| c as u64).sum();
    let mut r = 0u64;
    for pos in (1..counts.len()).rev() {
        let c = counts[pos] as u64;
        let pos = pos as u64;
        // vectors with a smaller entry here: Σ_{t<c} C(rem - t + pos - 1, pos - 1)
        let all = binomial(rem + pos, pos).expect("rank overflow");
        let rest = binomial(rem - c + pos, pos).expect("rank overflow");
        r += all - rest;
        rem -= c;
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(index: u64, k: usize, sigma: usize) -> Result<ParikhVector> {
    let shape = Shape::new(k, sigma)?;
    let total = shape.vertex_count();
    if index >= total {
        return Err(Error::invalid(format!(
            "rank {index} out of range: there are {total} vectors of order {k} over {sigma} letters"
        )));
    }
    let mut counts = vec![0u32; sigma];
    let mut rem = k as u64;
    let mut idx = index;
    for pos in (1..sigma).rev() {
        let mut c = 0u64;
        loop {
            let block = pv_count((rem - c) as usize, pos).expect("bounded by total");
            if idx < block {
                break;
            }
            idx -= block;
            c += 1;
        }
        counts[pos] = c as u32;
        rem -= c;
    }
    counts[0] = rem as u32;
    Ok(ParikhVector::new(counts))
}

/// Componentwise minimum.
pub fn meet(ps: &[ParikhVector]) -> Result<ParikhVector> {
    combine(ps, u32::min)
}

/// Componentwise maximum.
pub fn join(ps: &[ParikhVector]) -> Result<ParikhVector> {
    combine(ps, u32::max)
}

fn combine(ps: &[ParikhVector], f: fn(u32, u32) -> u32) -> Result<ParikhVector> {
    let (first, rest) = ps.split_first().ok_or_else(|| Error::invalid("meet/join of an empty list"))?;
    let mut counts = first.counts.clone();
    for p in rest {
        if p.sigma() != counts.len() {
            return Err(Error::invalid("vectors over different alphabets"));
        }
        for (c, &x) in counts.iter_mut().zip(&p.counts) {
            *c = f(*c, x);
        }
    }
    Ok(ParikhVector::new(counts))
}

/// A set of Parikh vectors, all of order `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParikhSet {
    pub k: usize,
    pub sigma: usize,
    pub members: BTreeSet<ParikhVector>,
    /// Set when the set was taken from a word shorter than `k`.
    #[serde(default)]
    pub short_word: bool,
}

impl ParikhSet {
    pub fn new(k: usize, sigma: usize, members: impl IntoIterator<Item = ParikhVector>) -> Result<Self> {
        let members: BTreeSet<_> = members.into_iter().collect();
        for p in &members {
            if p.sigma() != sigma {
                return Err(Error::invalid(format!("{p} has {} coordinates, expected {sigma}", p.sigma())));
            }
            if p.order() != k {
                return Err(Error::invalid(format!("{p} has order {}, expected {k}", p.order())));
            }
        }
        Ok(ParikhSet { k, sigma, members, short_word: false })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &ParikhVector) -> bool {
        self.members.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParikhVector> {
        self.members.iter()
    }
}

/// Iterator over the Parikh vectors of the length-`k` windows of a word.
///
/// Each step removes the outgoing letter and adds the incoming one.
pub struct Windows<'a> {
    word: &'a [Letter],
    k: usize,
    next: usize,
    current: ParikhVector,
}

impl<'a> Windows<'a> {
    pub fn new(word: &'a [Letter], k: usize, sigma: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("window length k must be at least 1"));
        }
        let prefix = &word[..k.min(word.len())];
        let current = pv_of(prefix, sigma)?;
        if word.len() > k {
            pv_of(&word[k..], sigma)?;
        }
        Ok(Windows { word, k, next: 0, current })
    }
}

impl Iterator for Windows<'_> {
    type Item = ParikhVector;

    fn next(&mut self) -> Option<ParikhVector> {
        let i = self.next;
        if i + self.k > self.word.len() {
            return None;
        }
        if i > 0 {
            let out = self.word[i - 1] as usize;
            let into = self.word[i + self.k - 1] as usize;
            self.current.counts[out] -= 1;
            self.current.counts[into] += 1;
        }
        self.next += 1;
        Some(self.current.clone())
    }
}

/// `Π_k(word)`: distinct Parikh vectors of all length-`k` windows.
pub fn parikh_set(word: &[Letter], k: usize, sigma: usize) -> Result<ParikhSet> {
    let members: BTreeSet<_> = Windows::new(word, k, sigma)?.collect();
    Ok(ParikhSet { k, sigma, members, short_word: word.len() < k })
}
