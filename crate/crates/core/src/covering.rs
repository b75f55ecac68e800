//! Covering words, Parikh-de-Bruijn words and universal cycles.
//!
//! A word is `k`-covering when every order-`k` Parikh vector occurs among
//! its length-`k` windows, and a Parikh-de-Bruijn (PdB) word when each
//! occurs exactly once. The excess of a covering word is how much longer it
//! is than `C(σ+k-1, k) + k - 1`, the length of a PdB word.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MAX_MATERIALIZED;
use crate::parikh::{
    binomial, enumerate_pv, parikh_set, pv_count, rank, unrank, Alphabet, Letter, ParikhVector, Shape, Windows,
};
use crate::realize::is_realizable;
use crate::search::{enumerate_covering, SearchConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub k: usize,
    pub sigma: usize,
    pub word: String,
    pub length: usize,
    pub is_covering: bool,
    pub is_pdb: bool,
    /// Only defined for covering words.
    pub excess: Option<u64>,
    pub missing: Vec<ParikhVector>,
    pub duplicated: Vec<(ParikhVector, usize)>,
}

/// `C(σ+k-1, k) + k - 1`.
pub fn pdb_length(k: usize, sigma: usize) -> Result<u64> {
    let shape = Shape::new(k, sigma)?;
    shape.vertex_count().checked_add(k as u64 - 1).ok_or_else(|| Error::capacity("PdB length overflows 64 bits"))
}

/// Minimum number of occurrences of every letter in a covering word,
/// `⌈C(σ+k-1, k-1) / k⌉`.
pub fn letter_count_bound(k: usize, sigma: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let total = binomial((sigma + k - 1) as u64, (k - 1) as u64)
        .ok_or_else(|| Error::capacity(format!("C(σ+k-1, k-1) overflows for k={k}, σ={sigma}")))?;
    Ok(total.div_ceil(k as u64))
}

fn window_counts(word: &[Letter], k: usize, sigma: usize) -> Result<Vec<u32>> {
    let n = Shape::new(k, sigma)?.vertex_count();
    if n > MAX_MATERIALIZED {
        return Err(Error::capacity(format!(
            "{n} Parikh vectors of order {k} over {sigma} letters; at most {MAX_MATERIALIZED} are tracked"
        )));
    }
    let mut counts = vec![0u32; n as usize];
    for p in Windows::new(word, k, sigma)? {
        counts[rank(&p) as usize] += 1;
    }
    Ok(counts)
}

/// Counts how often every order-`k` vector occurs among the windows of `word`.
pub fn verify(word: &[Letter], k: usize, sigma: usize) -> Result<CoverReport> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let alphabet = Alphabet::new(sigma)?;
    let counts = window_counts(word, k, sigma)?;
    let mut missing = Vec::new();
    let mut duplicated = Vec::new();
    for (r, &c) in counts.iter().enumerate() {
        match c {
            0 => missing.push(unrank(r as u64, k, sigma)?),
            1 => {}
            _ => duplicated.push((unrank(r as u64, k, sigma)?, c as usize)),
        }
    }
    let is_covering = missing.is_empty();
    let excess = if is_covering { Some(word.len() as u64 - pdb_length(k, sigma)?) } else { None };
    Ok(CoverReport {
        k,
        sigma,
        word: alphabet.render(word),
        length: word.len(),
        is_covering,
        is_pdb: is_covering && duplicated.is_empty(),
        excess,
        missing,
        duplicated,
    })
}

/// Whether `word` is `(k, σ)`-covering, without building a full report.
pub fn is_covering(word: &[Letter], k: usize, sigma: usize) -> Result<bool> {
    if k == 0 || word.len() < k {
        return Ok(false);
    }
    match pv_count(k, sigma) {
        Some(n) if n <= (word.len() - k + 1) as u64 => {}
        _ => return Ok(false),
    }
    Ok(window_counts(word, k, sigma)?.iter().all(|&c| c > 0))
}

/// All `k` for which `word` is `k`-covering.
pub fn covset(word: &[Letter], sigma: usize) -> Result<BTreeSet<usize>> {
    Alphabet::new(sigma)?;
    let mut out = BTreeSet::new();
    for k in 1..=word.len() {
        if is_covering(word, k, sigma)? {
            out.insert(k);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Exists,
    Impossible,
    Unknown,
}

/// The known result a [`Verdict`] rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    /// `σ = 1` (`a^k`) or `k = 1` (every letter once).
    Trivial,
    /// `a^k b^k` for two letters.
    BinaryFamily,
    /// `k = 2`: Eulerian walks on `K_σ` with loops; PdB iff `σ` is odd.
    EulerianParity,
    /// `k = 3`: PdB iff `σ = 3` or `3 ∤ σ`.
    OrderThreeClassification,
    /// Three letters and `k ≥ 4`: no PdB word.
    TernaryNonexistence,
    /// The letter-count bound exceeds the PdB length.
    CountingBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub k: usize,
    pub sigma: usize,
    pub pdb_length: u64,
    pub counting_bound: u64,
    pub shortest_lower_bound: u64,
    pub pdb_possible_by_bounds: bool,
    /// Whether `k` divides `C(σ+k-1, k-1)`, necessary for a universal cycle.
    pub uc_divisibility: bool,
    pub known_verdict: Verdict,
    pub verdict_reason: Option<VerdictReason>,
}

/// Lower bounds on the length of a shortest covering word and what is
/// known about existence of PdB words.
pub fn bounds(k: usize, sigma: usize) -> Result<BoundsReport> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let pdb_len = pdb_length(k, sigma)?;
    let per_letter = letter_count_bound(k, sigma)?;
    let counting =
        per_letter.checked_mul(sigma as u64).ok_or_else(|| Error::capacity("counting bound overflows 64 bits"))?;
    let column_total = binomial((sigma + k - 1) as u64, (k - 1) as u64).expect("checked above");
    let possible = pdb_len >= counting;

    use Verdict::*;
    use VerdictReason::*;
    let (verdict, reason) = if sigma == 1 || k == 1 {
        (Exists, Some(Trivial))
    } else if sigma == 2 {
        (Exists, Some(BinaryFamily))
    } else if k == 2 {
        (if sigma % 2 == 1 { Exists } else { Impossible }, Some(EulerianParity))
    } else if k == 3 {
        let ok = sigma == 3 || !sigma.is_multiple_of(3);
        (if ok { Exists } else { Impossible }, Some(OrderThreeClassification))
    } else if sigma == 3 {
        (Impossible, Some(TernaryNonexistence))
    } else if !possible {
        (Impossible, Some(CountingBound))
    } else {
        (Unknown, None)
    };

    Ok(BoundsReport {
        k,
        sigma,
        pdb_length: pdb_len,
        counting_bound: counting,
        shortest_lower_bound: pdb_len.max(counting),
        pdb_possible_by_bounds: possible,
        uc_divisibility: column_total.is_multiple_of(k as u64),
        known_verdict: verdict,
        verdict_reason: reason,
    })
}

/// Whether the cyclic windows of `word` hit every order-`k` vector exactly once.
pub fn is_universal_cycle(word: &[Letter], k: usize, sigma: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let n = Shape::new(k, sigma)?.vertex_count();
    if word.len() as u64 != n || word.is_empty() {
        return Ok(false);
    }
    let wrapped = wrap_cycle(word, k);
    Ok(verify(&wrapped, k, sigma)?.is_pdb)
}

/// Appends the first `k - 1` letters, turning a universal cycle into a
/// linear PdB word.
pub fn wrap_cycle(word: &[Letter], k: usize) -> Vec<Letter> {
    let mut out = word.to_vec();
    out.extend((0..k.saturating_sub(1)).map(|i| word[i % word.len().max(1)]));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `a^k b^k` over two letters.
    BinaryPdb,
    /// Shortest 2-covering word from an Eulerian walk on `K_σ` with loops.
    K2Eulerian,
    /// A `k`-covering word missing the order-`(k-1)` vector `(k-3,1,1,0,…)`.
    KcoverNotK1,
}

/// Builds a word of the given family and checks its defining property.
pub fn construct_family(family: Family, k: usize, sigma: usize) -> Result<Vec<Letter>> {
    match family {
        Family::BinaryPdb => {
            if sigma != 2 || k == 0 {
                return Err(Error::Unsupported(format!("binary_pdb needs σ = 2 and k ≥ 1, got k={k}, σ={sigma}")));
            }
            let w: Vec<Letter> = std::iter::repeat_n(0, k).chain(std::iter::repeat_n(1, k)).collect();
            self_check(verify(&w, k, sigma)?.is_pdb, "a^k b^k is not PdB")?;
            Ok(w)
        }
        Family::K2Eulerian => {
            if k != 2 || sigma == 0 {
                return Err(Error::Unsupported(format!("k2_eulerian needs k = 2 and σ ≥ 1, got k={k}, σ={sigma}")));
            }
            let w = k2_eulerian(sigma);
            let report = verify(&w, 2, sigma)?;
            self_check(report.is_covering, "Eulerian word is not 2-covering")?;
            self_check(w.len() as u64 == k2_shortest_length(sigma), "Eulerian word has the wrong length")?;
            Ok(w)
        }
        Family::KcoverNotK1 => {
            if sigma < 3 || k < 4 {
                return Err(Error::Unsupported(format!("kcover_not_k1 needs σ ≥ 3 and k ≥ 4, got k={k}, σ={sigma}")));
            }
            kcover_not_k1(k, sigma)
        }
    }
}

fn self_check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::SelfCheck(what.to_string()))
    }
}

/// Length of a shortest 2-covering word: `C(σ+1, 2) + 1` for odd `σ`,
/// `C(σ+1, 2) + σ/2` for even `σ`.
pub fn k2_shortest_length(sigma: usize) -> u64 {
    let base = (sigma * (sigma + 1) / 2) as u64;
    if sigma % 2 == 1 {
        base + 1
    } else {
        base + sigma as u64 / 2
    }
}

/// Eulerian trail on `K_σ` plus a loop per vertex. For even `σ`, the pairs
/// `(0,1), (2,3), …` except the last are doubled so that only `σ-2` and
/// `σ-1` keep odd degree.
fn k2_eulerian(sigma: usize) -> Vec<Letter> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for x in 0..sigma {
        for y in x..sigma {
            edges.push((x, y));
        }
    }
    let start = if sigma.is_multiple_of(2) {
        for pair in 0..sigma / 2 - 1 {
            edges.push((2 * pair, 2 * pair + 1));
        }
        sigma - 2
    } else {
        0
    };
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sigma];
    for (id, &(x, y)) in edges.iter().enumerate() {
        incident[x].push((y, id));
        if x != y {
            incident[y].push((x, id));
        }
    }
    for list in &mut incident {
        list.sort_unstable();
        list.reverse();
    }
    // Hierholzer, always taking the smallest unused edge.
    let mut used = vec![false; edges.len()];
    let mut stack = vec![start];
    let mut trail = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        while let Some(&(_, id)) = incident[v].last() {
            if used[id] {
                incident[v].pop();
            } else {
                break;
            }
        }
        match incident[v].pop() {
            Some((u, id)) => {
                used[id] = true;
                stack.push(u);
            }
            None => {
                trail.push(v as Letter);
                stack.pop();
            }
        }
    }
    trail.reverse();
    trail
}

/// The letters inserted after a copy of `x^k`, chosen so that the parents
/// of `(k-3,1,1,0,…)` are visited and left immediately.
fn splice_detour(x: Letter, k: usize) -> Vec<Letter> {
    let (a, b, c) = (0, 1, 2);
    let run = |l: Letter, n: usize| std::iter::repeat_n(l, n);
    match x {
        0 => run(b, 1).chain(run(a, k - 2)).chain(run(c, 1)).collect(),
        1 => run(a, k - 3).chain(run(b, 2)).chain(run(c, 1)).collect(),
        2 => run(a, k - 3).chain(run(c, 2)).chain(run(b, 1)).collect(),
        _ => run(b, 1).chain(run(a, k - 3)).chain(run(x, 1)).chain(run(c, 1)).collect(),
    }
}

fn kcover_not_k1(k: usize, sigma: usize) -> Result<Vec<Letter>> {
    let mut avoided = vec![0u32; sigma];
    avoided[0] = (k - 3) as u32;
    avoided[1] = 1;
    avoided[2] = 1;
    let avoided = ParikhVector::new(avoided);
    let excluded: BTreeSet<_> = avoided.parents().into_iter().collect();
    let rest: Vec<_> = enumerate_pv(k, sigma)?.into_iter().filter(|p| !excluded.contains(p)).collect();
    let base = is_realizable(&rest)?;
    let mut word =
        base.witness.ok_or_else(|| Error::SelfCheck("grid minus the avoided simplex is disconnected".into()))?;

    for x in 0..sigma as Letter {
        let at = word
            .windows(k)
            .position(|w| w.iter().all(|&l| l == x))
            .ok_or_else(|| Error::SelfCheck(format!("base word has no run of {k} copies of letter {x}")))?;
        let mut insert = splice_detour(x, k);
        insert.extend(std::iter::repeat_n(x, k));
        let end = at + k;
        word.splice(end..end, insert);
    }

    self_check(is_covering(&word, k, sigma)?, "spliced word is not k-covering")?;
    self_check(!parikh_set(&word, k - 1, sigma)?.contains(&avoided), "spliced word contains the avoided vector")?;
    Ok(word)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MincovEstimate {
    pub k: usize,
    pub sigma: usize,
    pub max_len: usize,
    /// Fewest order-`(k-1)` vectors seen in any covering word examined.
    pub numerator: Option<u64>,
    /// `C(σ+k-2, k-1)`, the number of order-`(k-1)` vectors.
    pub denominator: u64,
    pub witness: Option<String>,
    pub words_examined: u64,
    pub nodes: u64,
    /// Every covering word up to `max_len` was examined.
    pub complete: bool,
    /// Longer covering words might realize fewer vectors.
    pub estimate_only: bool,
}

impl MincovEstimate {
    pub fn value(&self) -> Option<f64> {
        self.numerator.map(|n| n as f64 / self.denominator as f64)
    }
}

/// Smallest fraction of order-`(k-1)` vectors realized by a `k`-covering
/// word of length at most `max_len`.
///
/// Only words whose letters first appear in alphabet order are examined;
/// relabeling does not change the count. For two letters or `k ≤ 3` every
/// covering word is also `(k-1)`-covering, so the value is exactly 1.
pub fn mincov_explore(cfg: &SearchConfig, max_len: usize) -> Result<MincovEstimate> {
    let (k, sigma) = (cfg.k, cfg.sigma);
    if k < 2 {
        return Err(Error::invalid("mincov needs k of at least 2"));
    }
    let denominator = Shape::new(k - 1, sigma)?.vertex_count();
    let lower = bounds(k, sigma)?.shortest_lower_bound as usize;
    let best: Mutex<Option<(u64, Vec<Letter>)>> = Mutex::new(None);
    let examined = AtomicU64::new(0);
    let visit = |w: &[Letter]| {
        examined.fetch_add(1, Ordering::Relaxed);
        let n = parikh_set(w, k - 1, sigma).expect("valid word").len() as u64;
        let mut best = best.lock().expect("poisoned");
        if best.as_ref().is_none_or(|(m, _)| n < *m) {
            *best = Some((n, w.to_vec()));
        }
    };
    let mut complete = true;
    let mut nodes = 0;
    for len in lower..=max_len {
        let e = enumerate_covering(cfg, len, &visit)?;
        nodes += e.nodes;
        if !e.complete {
            complete = false;
            break;
        }
    }
    let alphabet = Alphabet::new(sigma)?;
    let best = best.into_inner().expect("poisoned");
    Ok(MincovEstimate {
        k,
        sigma,
        max_len,
        numerator: best.as_ref().map(|(n, _)| *n),
        denominator,
        witness: best.map(|(_, w)| alphabet.render(&w)),
        words_examined: examined.into_inner(),
        nodes,
        complete,
        estimate_only: !(sigma <= 2 || k <= 3) || !complete,
    })
}
