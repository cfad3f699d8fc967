//! Binary linear codes spanned by block incidence vectors: reduced echelon
//! form, weight enumeration, minimum distance, duals and equivalence.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{translate, OrbitDesign};
use crate::bits::BitSet;
use crate::blocks::Block;
use crate::designs::iso::{search_isomorphism, Incidence, IsoOutcome, SearchOptions};
use crate::error::{Error, Result};
use crate::gf2n::FieldElem;

/// Default cap on the number of codewords enumerated exactly.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 28;
/// Default seed for randomized low-weight searches.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A binary code held as the reduced row echelon basis of its span. The
/// pivot of a row is its lowest set coordinate; every pivot column is zero
/// in all other rows and rows are sorted by pivot.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryCode {
    len: usize,
    rows: Vec<BitSet>,
}

impl fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryCode[{}, {}]", self.len, self.dim())
    }
}

/// Incremental echelon basis.
#[derive(Clone, Debug)]
struct Echelon {
    len: usize,
    rows: Vec<BitSet>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; len],
        }
    }

    fn reduce(&self, v: &mut BitSet) {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if v.contains(p) {
                v.xor_with(r);
            }
        }
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    fn push(&mut self, mut v: BitSet) -> bool {
        debug_assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        let Some(p) = v.first_one() else { return false };
        for r in self.rows.iter_mut() {
            if r.contains(p) {
                r.xor_with(&v);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    fn full(&self) -> bool {
        self.rows.len() == self.len
    }

    fn finish(self) -> BinaryCode {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.first_one());
        BinaryCode { len: self.len, rows }
    }
}

impl BinaryCode {
    /// Span of the given vectors.
    pub fn from_rows<I: IntoIterator<Item = BitSet>>(len: usize, rows: I) -> Result<BinaryCode> {
        let mut e = Echelon::new(len);
        for r in rows {
            if r.len() != len {
                return Err(Error::pre(format!("row of length {} in a length-{len} code", r.len())));
            }
            if !e.full() {
                e.push(r);
            }
        }
        Ok(e.finish())
    }

    pub fn zero(len: usize) -> BinaryCode {
        BinaryCode { len, rows: Vec::new() }
    }

    pub fn full_space(len: usize) -> BinaryCode {
        BinaryCode::from_rows(len, (0..len).map(|i| BitSet::from_indices(len, [i]))).unwrap()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.first_one().unwrap()).collect()
    }

    pub fn contains(&self, v: &BitSet) -> bool {
        let mut w = v.clone();
        for r in &self.rows {
            if w.contains(r.first_one().unwrap()) {
                w.xor_with(r);
            }
        }
        w.is_empty()
    }

    /// Orthogonal complement, from the free columns of the echelon form.
    pub fn dual(&self) -> BinaryCode {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.len];
        pivots.iter().for_each(|&p| is_pivot[p] = true);
        let rows = (0..self.len).filter(|&f| !is_pivot[f]).map(|f| {
            let mut v = BitSet::new(self.len);
            v.insert(f);
            for (r, &p) in self.rows.iter().zip(&pivots) {
                if r.contains(f) {
                    v.insert(p);
                }
            }
            v
        });
        BinaryCode::from_rows(self.len, rows).unwrap()
    }

    /// `dim = len/2` and all generator rows pairwise orthogonal.
    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.len
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| self.rows[i..].iter().all(|s| r.intersection_count(s) % 2 == 0))
    }

    /// Weight distribution by Gray-code traversal of all codewords.
    pub fn weight_enumerator(&self, budget: u64) -> Result<WeightEnumerator> {
        let k = self.dim();
        if k >= 64 || (1u64 << k) > budget {
            return Err(Error::Budget(format!("2^{k} codewords exceeds the enumeration budget {budget}")));
        }
        // split the space by the top `p` coefficient bits
        let p = k.min(8);
        let low = k - p;
        let counts = (0u64..(1 << p))
            .into_par_iter()
            .map(|prefix| {
                let mut counts = vec![0u64; self.len + 1];
                let mut cw = BitSet::new(self.len);
                for j in 0..p {
                    if prefix >> j & 1 == 1 {
                        cw.xor_with(&self.rows[low + j]);
                    }
                }
                counts[cw.count_ones()] += 1;
                for g in 1u64..(1 << low) {
                    cw.xor_with(&self.rows[g.trailing_zeros() as usize]);
                    counts[cw.count_ones()] += 1;
                }
                counts
            })
            .reduce(
                || vec![0u64; self.len + 1],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(WeightEnumerator { counts })
    }

    /// Exact minimum distance when the code is enumerable within `budget`,
    /// otherwise certified bounds.
    pub fn min_distance(&self, budget: u64, seed: u64) -> MinDistance {
        if self.dim() == 0 {
            return MinDistance::Exact(0);
        }
        if let Ok(w) = self.weight_enumerator(budget) {
            return MinDistance::Exact(w.min_nonzero_weight().unwrap());
        }
        let upper = self.random_low_weight(200, seed);
        let (lower, best) = self.brouwer_zimmermann(budget);
        let upper = upper.min(best);
        if upper <= lower {
            MinDistance::Exact(upper)
        } else {
            MinDistance::Bounds { lower, upper }
        }
    }

    /// Echelon form with pivots chosen in the given column order.
    fn systematic(&self, order: &[usize]) -> (Vec<BitSet>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == rows.len() {
                break;
            }
            let Some(i) = (r..rows.len()).find(|&i| rows[i].contains(c)) else { continue };
            rows.swap(r, i);
            let pr = rows[r].clone();
            for (j, row) in rows.iter_mut().enumerate() {
                if j != r && row.contains(c) {
                    row.xor_with(&pr);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (rows, pivots)
    }

    /// Upper bound by random information sets: each systematic generator
    /// contributes its rows and sums of row pairs.
    pub fn random_low_weight(&self, iterations: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..self.len).collect();
        let mut best = usize::MAX;
        for _ in 0..iterations {
            order.shuffle(&mut rng);
            let (rows, _) = self.systematic(&order);
            for (i, r) in rows.iter().enumerate() {
                best = best.min(r.count_ones());
                for s in &rows[i + 1..] {
                    let w: usize = r.words().iter().zip(s.words()).map(|(a, b)| (a ^ b).count_ones() as usize).sum();
                    best = best.min(w);
                }
            }
        }
        best
    }

    /// Brouwer-Zimmermann enumeration over successive information sets.
    /// Returns `(lower, best)`: every codeword has weight at least
    /// `min(lower, best)`, where `best` is the lightest codeword seen.
    pub fn brouwer_zimmermann(&self, budget: u64) -> (usize, usize) {
        let k = self.dim();
        let mut used = vec![false; self.len];
        let mut mats: Vec<(Vec<BitSet>, usize)> = Vec::new();
        loop {
            let order: Vec<usize> = (0..self.len).filter(|&c| !used[c]).chain((0..self.len).filter(|&c| used[c])).collect();
            let (rows, pivots) = self.systematic(&order);
            let fresh = pivots.iter().filter(|&&p| !used[p]).count();
            if fresh == 0 {
                break;
            }
            pivots.iter().for_each(|&p| used[p] = true);
            mats.push((rows, fresh));
        }
        let mut best = usize::MAX;
        let mut lower = 1;
        let mut spent = 0u64;
        for w in 1..=k {
            let per = binom_u64(k, w).saturating_mul(mats.len() as u64);
            if spent.saturating_add(per) > budget {
                break;
            }
            spent += per;
            for (rows, _) in &mats {
                best = best.min(min_weight_of_combinations(rows, w));
            }
            lower = mats.iter().map(|(_, r)| (w + 1).saturating_sub(k - r)).sum::<usize>().max(lower);
            if best <= lower {
                break;
            }
        }
        (lower, best)
    }

    /// Equal up to a coordinate permutation.
    pub fn equivalent(&self, other: &BinaryCode, budget: u64) -> IsoOutcome {
        codes_equivalent(self, other, budget)
    }

    /// One row per line, `'0'`/`'1'` characters, coordinate 0 first.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.extend((0..self.len).map(|i| if r.contains(i) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BinaryCode> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let len = lines.first().map_or(0, |l| l.len());
        let rows = lines
            .iter()
            .map(|l| {
                if l.len() != len || !l.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(Error::Parse(format!("bad generator row {l:?}")));
                }
                Ok(BitSet::from_indices(len, l.bytes().enumerate().filter(|(_, b)| *b == b'1').map(|(i, _)| i)))
            })
            .collect::<Result<Vec<_>>>()?;
        BinaryCode::from_rows(len, rows)
    }

    pub fn to_json(&self) -> CodeFile {
        CodeFile {
            length: self.len,
            dimension: self.dim(),
            rows: self.rows.iter().map(BitSet::to_hex).collect(),
        }
    }

    pub fn from_json(file: &CodeFile) -> Result<BinaryCode> {
        let rows = file
            .rows
            .iter()
            .map(|h| BitSet::from_hex(file.length, h).ok_or_else(|| Error::Parse(format!("bad row {h:?}"))))
            .collect::<Result<Vec<_>>>()?;
        BinaryCode::from_rows(file.length, rows)
    }
}

fn binom_u64(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i + 1) as u64)
}

/// Minimum weight over all sums of exactly `w` distinct rows.
fn min_weight_of_combinations(rows: &[BitSet], w: usize) -> usize {
    fn rec(rows: &[BitSet], start: usize, left: usize, acc: &BitSet, best: &mut usize) {
        if left == 0 {
            *best = (*best).min(acc.count_ones());
            return;
        }
        for i in start..=rows.len() - left {
            let mut next = acc.clone();
            next.xor_with(&rows[i]);
            rec(rows, i + 1, left - 1, &next, best);
        }
    }
    let mut best = usize::MAX;
    if w <= rows.len() && !rows.is_empty() {
        let len = rows[0].len();
        // parallelize over the first row of the combination
        best = (0..=rows.len() - w)
            .into_par_iter()
            .map(|i| {
                let mut b = usize::MAX;
                rec(rows, i + 1, w - 1, &rows[i], &mut b);
                b
            })
            .min()
            .unwrap_or(usize::MAX);
        let _ = len;
    }
    best
}

/// Serialized generator matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub length: usize,
    pub dimension: usize,
    pub rows: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum MinDistance {
    Exact(usize),
    /// `lower <= d <= upper`; `upper` is the weight of a codeword found.
    Bounds { lower: usize, upper: usize },
}

impl MinDistance {
    pub fn exact(&self) -> Option<usize> {
        match self {
            MinDistance::Exact(d) => Some(*d),
            MinDistance::Bounds { .. } => None,
        }
    }

    pub fn upper(&self) -> usize {
        match self {
            MinDistance::Exact(d) => *d,
            MinDistance::Bounds { upper, .. } => *upper,
        }
    }
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinDistance::Exact(d) => write!(f, "{d}"),
            MinDistance::Bounds { lower, upper } => write!(f, "{lower}..={upper}"),
        }
    }
}

/// Number of codewords of each weight `0..=len`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightEnumerator {
    counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightEnumerator { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.iter().skip(1).position(|&c| c != 0).map(|w| w + 1)
    }

    /// Nonzero entries as `weight -> count`.
    pub fn nonzero(&self) -> BTreeMap<usize, u64> {
        self.counts.iter().enumerate().filter(|(_, &c)| c != 0).map(|(w, &c)| (w, c)).collect()
    }

    /// Dual distribution `B_j = |C|^{-1} sum_i A_i K_j(i)` with Krawtchouk
    /// polynomials `K_j(i) = sum_s (-1)^s C(i,s) C(n-i,j-s)`, in exact
    /// arithmetic. Entries are `None` if a value is not a nonnegative
    /// integer, which means the input is not a code's distribution.
    pub fn macwilliams(&self) -> Vec<Option<BigInt>> {
        let n = self.counts.len() - 1;
        let binoms: Vec<Vec<BigInt>> = {
            let mut t = vec![vec![BigInt::from(1)]];
            for m in 1..=n {
                let prev = &t[m - 1];
                let mut row = vec![BigInt::from(1); m + 1];
                for r in 1..m {
                    row[r] = &prev[r - 1] + &prev[r];
                }
                t.push(row);
            }
            t
        };
        let c = |m: usize, r: usize| -> BigInt {
            if r > m {
                BigInt::from(0)
            } else {
                binoms[m][r].clone()
            }
        };
        let size: BigInt = self.counts.iter().map(|&a| BigInt::from(a)).sum();
        let support: Vec<(usize, BigInt)> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| (i, BigInt::from(a)))
            .collect();
        (0..=n)
            .into_par_iter()
            .map(|j| {
                let mut total = BigInt::from(0);
                for (i, a) in &support {
                    let mut k = BigInt::from(0);
                    for s in 0..=j.min(*i) {
                        let term = c(*i, s) * c(n - i, j - s);
                        if s % 2 == 0 {
                            k += term;
                        } else {
                            k -= term;
                        }
                    }
                    total += a * k;
                }
                let zero = BigInt::from(0);
                if &total % &size == zero && total >= zero {
                    Some(total / &size)
                } else {
                    None
                }
            })
            .collect()
    }
}

impl Serialize for WeightEnumerator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, u64> = self.nonzero().into_iter().map(|(w, c)| (w.to_string(), c)).collect();
        m.serialize(s)
    }
}

/// Span of the incidence vectors of the blocks; coordinates are field
/// elements in ascending bit order.
pub fn code_from_design(d: &OrbitDesign) -> BinaryCode {
    BinaryCode::from_rows(d.v(), d.blocks().iter().cloned()).unwrap()
}

/// Largest degree for which [`code_from_block`] streams the orbit.
pub const CODE_MAX_DEGREE: u32 = 11;

/// Same code as `code_from_design(&orbit(block))`, generated image by image
/// without materializing the orbit.
pub fn code_from_block(block: &Block) -> Result<BinaryCode> {
    let ctx = block.ctx();
    if ctx.n() > CODE_MAX_DEGREE {
        return Err(Error::Budget(format!(
            "code of an orbit at n = {} exceeds the limit n <= {CODE_MAX_DEGREE}",
            ctx.n()
        )));
    }
    let q = ctx.size();
    let mut e = Echelon::new(q);
    for a in ctx.elements().skip(1) {
        let scaled = BitSet::from_indices(q, block.iter().map(|x| ctx.mul(a, x).index()));
        for b in 0..q {
            if e.full() {
                return Ok(e.finish());
            }
            e.push(translate(&scaled, b));
        }
    }
    Ok(e.finish())
}

/// All codewords of weight exactly `w`, if there are at most `limit`.
pub fn codewords_of_weight(c: &BinaryCode, w: usize, budget: u64, limit: usize) -> Result<Vec<BitSet>> {
    let k = c.dim();
    if k >= 64 || (1u64 << k) > budget {
        return Err(Error::Budget(format!("2^{k} codewords exceeds the enumeration budget {budget}")));
    }
    let mut out = Vec::new();
    let mut cw = BitSet::new(c.len());
    if w == 0 {
        return Ok(vec![cw]);
    }
    for g in 1u64..(1 << k) {
        cw.xor_with(&c.rows[g.trailing_zeros() as usize]);
        if cw.count_ones() == w {
            out.push(cw.clone());
            if out.len() > limit {
                return Err(Error::Budget(format!("more than {limit} codewords of weight {w}")));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Permutation equivalence. Invariants are compared first; then both codes
/// are replaced by their lightest codewords (adding weights until those
/// words span the code) and the two point-word incidence structures are
/// tested for isomorphism, which is equivalent once they span.
pub fn codes_equivalent(c1: &BinaryCode, c2: &BinaryCode, budget: u64) -> IsoOutcome {
    if c1.len() != c2.len() {
        return IsoOutcome::NonIsomorphic {
            reason: format!("lengths differ: {} vs {}", c1.len(), c2.len()),
        };
    }
    if c1.dim() != c2.dim() {
        return IsoOutcome::NonIsomorphic {
            reason: format!("dimensions differ: {} vs {}", c1.dim(), c2.dim()),
        };
    }
    let (w1, w2) = match (c1.weight_enumerator(budget), c2.weight_enumerator(budget)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            return IsoOutcome::Undetermined {
                reason: "weight enumeration exceeds budget".into(),
            }
        }
    };
    if w1 != w2 {
        return IsoOutcome::NonIsomorphic {
            reason: "weight enumerators differ".into(),
        };
    }
    if c1.dim() == 0 || c1 == c2 {
        return IsoOutcome::Isomorphic {
            map: (0..c1.len() as u32).map(FieldElem::from_bits).collect(),
        };
    }
    const WORD_LIMIT: usize = 200_000;
    let mut words1 = Vec::new();
    let mut words2 = Vec::new();
    for (w, &count) in w1.counts().iter().enumerate().skip(1) {
        if count == 0 {
            continue;
        }
        if words1.len() + count as usize > WORD_LIMIT {
            return IsoOutcome::Undetermined {
                reason: format!("more than {WORD_LIMIT} low-weight codewords needed"),
            };
        }
        match (
            codewords_of_weight(c1, w, budget, WORD_LIMIT),
            codewords_of_weight(c2, w, budget, WORD_LIMIT),
        ) {
            (Ok(a), Ok(b)) => {
                words1.extend(a);
                words2.extend(b);
            }
            _ => {
                return IsoOutcome::Undetermined {
                    reason: "low-weight codeword enumeration exceeds budget".into(),
                }
            }
        }
        if BinaryCode::from_rows(c1.len(), words1.iter().cloned()).unwrap().dim() == c1.dim() {
            break;
        }
    }
    let a = Incidence::new(c1.len(), words1);
    let b = Incidence::new(c2.len(), words2);
    search_isomorphism(&a, &b, &SearchOptions::default())
}
