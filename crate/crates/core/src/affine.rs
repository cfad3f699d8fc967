//! The affine group `GA1(q) = {x -> ax + b : a != 0}` acting on subsets of
//! GF(q): images, orbits, stabilizers.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bits::BitSet;
use crate::blocks::{Block, Construction};
use crate::boolfn::{char_fn, is_semibent, support, walsh_fast};
use crate::error::{Error, Result};
use crate::gf2n::{Exponent, FieldCtx, FieldElem};
use crate::SCHEMA_VERSION;

/// `x -> ax + b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AffineMap {
    a: FieldElem,
    b: FieldElem,
}

impl AffineMap {
    pub fn new(a: FieldElem, b: FieldElem) -> Result<AffineMap> {
        if a.is_zero() {
            return Err(Error::pre("affine map needs a != 0"));
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity() -> AffineMap {
        AffineMap {
            a: FieldElem::ONE,
            b: FieldElem::ZERO,
        }
    }

    pub fn a(&self) -> FieldElem {
        self.a
    }

    pub fn b(&self) -> FieldElem {
        self.b
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        ctx.mul(self.a, x) + self.b
    }

    pub fn apply(&self, block: &Block) -> Block {
        let ctx = block.ctx();
        let img = translate(&scale(ctx, block.bitset(), self.a), self.b.index());
        Block::from_bitset(ctx, img).unwrap()
    }
}

fn scale(ctx: &FieldCtx, set: &BitSet, a: FieldElem) -> BitSet {
    let mut out = BitSet::new(set.len());
    for x in set.ones() {
        out.insert(ctx.mul_log(a, FieldElem::from_bits(x as u32)).index());
    }
    out
}

const SWAP_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Image of a set of field elements under `x -> x + b`, i.e. bit `i` moves
/// to bit `i ^ b`. Low bits of `b` permute inside each word, high bits
/// permute whole words.
pub fn translate(set: &BitSet, b: usize) -> BitSet {
    debug_assert!(b < set.len().max(1));
    let src = set.words();
    let hi = b >> 6;
    let mut out: Vec<u64> = (0..src.len()).map(|w| src[w ^ hi]).collect();
    for (s, &m) in SWAP_MASKS.iter().enumerate() {
        if b >> s & 1 == 1 {
            let sh = 1 << s;
            for w in out.iter_mut() {
                *w = ((*w & m) << sh) | ((*w >> sh) & m);
            }
        }
    }
    BitSet::from_words(set.len(), out)
}

/// A base block with its full orbit under `GA1(q)`, blocks deduplicated and
/// sorted.
#[derive(Clone, Debug)]
pub struct OrbitDesign {
    ctx: FieldCtx,
    base: Block,
    blocks: Vec<BitSet>,
    stab_order: u64,
}

impl OrbitDesign {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn base(&self) -> &Block {
        &self.base
    }

    pub fn blocks(&self) -> &[BitSet] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn stab_order(&self) -> u64 {
        self.stab_order
    }

    pub fn v(&self) -> usize {
        self.ctx.size()
    }

    pub fn k(&self) -> usize {
        self.base.size()
    }

    pub fn contains_block(&self, b: &BitSet) -> bool {
        self.blocks.binary_search(b).is_ok()
    }

    /// Builds a design from explicit blocks, checking the orbit-stabilizer
    /// relation against a direct stabilizer count of the base block.
    pub fn from_parts(base: Block, mut blocks: Vec<BitSet>) -> Result<OrbitDesign> {
        let ctx = base.ctx().clone();
        blocks.par_sort_unstable();
        blocks.dedup();
        let stab = stabilizer_order(&base);
        let group = ctx.size() as u64 * ctx.order() as u64;
        if stab * blocks.len() as u64 != group || blocks.binary_search(base.bitset()).is_err() {
            return Err(Error::Parse(format!(
                "{} blocks with stabilizer {stab} is not an orbit of the base block",
                blocks.len()
            )));
        }
        if blocks.iter().any(|b| b.len() != ctx.size() || b.count_ones() != base.size()) {
            return Err(Error::Parse("orbit blocks differ in size from the base block".into()));
        }
        Ok(OrbitDesign {
            ctx,
            base,
            blocks,
            stab_order: stab,
        })
    }
}

/// Above this degree orbits are only counted, not materialized.
pub const MATERIALIZE_MAX_DEGREE: u32 = 10;
/// Above this degree even the streaming count is refused.
pub const STREAM_MAX_DEGREE: u32 = 12;

/// All `q(q-1)` images of `block`, deduplicated by bitset equality.
pub fn orbit(block: &Block) -> OrbitDesign {
    let ctx = block.ctx().clone();
    let q = ctx.size();
    let mut blocks: Vec<BitSet> = (1..q)
        .into_par_iter()
        .flat_map_iter(|a| {
            let scaled = scale(&ctx, block.bitset(), FieldElem::from_bits(a as u32));
            let mut imgs: Vec<BitSet> = (0..q).map(|b| translate(&scaled, b)).collect();
            imgs.sort_unstable();
            imgs.dedup();
            imgs
        })
        .collect();
    blocks.par_sort_unstable();
    blocks.dedup();
    let stab_order = (q as u64 * (q as u64 - 1)) / blocks.len() as u64;
    OrbitDesign {
        ctx,
        base: block.clone(),
        blocks,
        stab_order,
    }
}

/// Like [`orbit`] but refuses degrees above [`MATERIALIZE_MAX_DEGREE`].
pub fn orbit_checked(block: &Block) -> Result<OrbitDesign> {
    let n = block.ctx().n();
    if n > MATERIALIZE_MAX_DEGREE {
        return Err(Error::Budget(format!(
            "materializing an orbit at n = {n} exceeds the limit n <= {MATERIALIZE_MAX_DEGREE}; use the streaming count"
        )));
    }
    Ok(orbit(block))
}

fn fingerprint(set: &BitSet) -> u64 {
    let mut h = DefaultHasher::new();
    set.words().hash(&mut h);
    h.finish()
}

/// Exact number of distinct images without storing them: images are sorted
/// by a 64-bit fingerprint and equal fingerprints are resolved by
/// recomputing and comparing the actual sets.
pub fn orbit_size_streaming(block: &Block) -> Result<u64> {
    let ctx = block.ctx();
    let n = ctx.n();
    if n > STREAM_MAX_DEGREE {
        return Err(Error::Budget(format!(
            "streaming orbit count at n = {n} exceeds the limit n <= {STREAM_MAX_DEGREE}"
        )));
    }
    let q = ctx.size();
    let mut keys: Vec<(u64, u32, u32)> = (1..q)
        .into_par_iter()
        .flat_map_iter(|a| {
            let scaled = scale(ctx, block.bitset(), FieldElem::from_bits(a as u32));
            (0..q)
                .map(|b| (fingerprint(&translate(&scaled, b)), a as u32, b as u32))
                .collect::<Vec<_>>()
        })
        .collect();
    keys.par_sort_unstable();
    let image = |a: u32, b: u32| translate(&scale(ctx, block.bitset(), FieldElem::from_bits(a)), b as usize);
    let mut distinct = 0u64;
    let mut i = 0;
    while i < keys.len() {
        let mut j = i + 1;
        while j < keys.len() && keys[j].0 == keys[i].0 {
            j += 1;
        }
        if j - i == 1 {
            distinct += 1;
        } else {
            let mut group: Vec<BitSet> = keys[i..j].iter().map(|&(_, a, b)| image(a, b)).collect();
            group.sort_unstable();
            group.dedup();
            distinct += group.len() as u64;
        }
        i = j;
    }
    Ok(distinct)
}

/// `|{(a, b) : aB + b = B}|` by direct scan. For each `a` only the `k`
/// translations that carry the first element of `aB` into `B` can work.
pub fn stabilizer_order(block: &Block) -> u64 {
    let ctx = block.ctx();
    let q = ctx.size();
    let target = block.bitset();
    let Some(_) = target.first_one() else {
        // the empty block is fixed by everything
        return q as u64 * (q as u64 - 1);
    };
    (1..q)
        .into_par_iter()
        .map(|a| {
            let scaled = scale(ctx, target, FieldElem::from_bits(a as u32));
            let x0 = scaled.first_one().unwrap();
            target
                .ones()
                .filter(|&y| translate(&scaled, x0 ^ y) == *target)
                .count() as u64
        })
        .sum()
}

/// Outcome of the trivial-stabilizer criterion: `f_E` semi-bent and the
/// support of its spectrum not fixed by any scaling `b` outside GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerCriterion {
    pub semibent: bool,
    pub scaling_free: bool,
    /// Both conditions hold, so the stabilizer must be trivial.
    pub holds: bool,
    /// Stabilizer order of the block by direct scan.
    pub stab_order: u64,
    /// `false` only if the criterion holds but the scan found a nontrivial
    /// stabilizer.
    pub consistent: bool,
}

/// Checks `W_B(mu) = W_E(mu^d)` for every `mu`, returning the first
/// violating `mu`.
pub fn spectral_pair_violation(block_e: &Block, d: Exponent, block_b: &Block) -> Option<FieldElem> {
    let ctx = block_b.ctx();
    let wb = walsh_fast(&char_fn(block_b));
    let we = walsh_fast(&char_fn(block_e));
    ctx.elements().find(|&mu| wb.at(mu) != we.at(ctx.pow_exp(mu, d)))
}

pub fn check_stabilizer_criterion(block_e: &Block, d: Exponent, block_b: &Block) -> Result<StabilizerCriterion> {
    let ctx = block_b.ctx();
    if block_e.ctx() != ctx {
        return Err(Error::FieldMismatch);
    }
    if let Some(mu) = spectral_pair_violation(block_e, d, block_b) {
        return Err(Error::Hypothesis(format!(
            "W_B(mu) != W_E(mu^{d}) at mu = {mu}"
        )));
    }
    let we = walsh_fast(&char_fn(block_e));
    let semibent = is_semibent(&we)?;
    let supp = support(&we);
    let scaling_free = ctx
        .non_prime_elements()
        .all(|b| supp.scaled(b) != supp);
    let holds = semibent && scaling_free;
    let stab_order = stabilizer_order(block_b);
    Ok(StabilizerCriterion {
        semibent,
        scaling_free,
        holds,
        stab_order,
        consistent: !holds || stab_order == 1,
    })
}

/// JSON form of an orbit design.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitFile {
    pub schema: String,
    pub n: u32,
    pub modulus: String,
    pub construction: String,
    pub params: Map<String, Value>,
    pub base: Vec<FieldElem>,
    pub stab_order: u64,
    pub num_blocks: u64,
    /// Membership bitsets as hex, in ascending bitset order.
    pub blocks: Vec<String>,
}

impl OrbitDesign {
    pub fn to_file(&self, construction: &Construction) -> OrbitFile {
        OrbitFile {
            schema: SCHEMA_VERSION.to_string(),
            n: self.ctx.n(),
            modulus: format!("{:#x}", self.ctx.modulus()),
            construction: construction.tag().to_string(),
            params: construction.params(),
            base: self.base.members(),
            stab_order: self.stab_order,
            num_blocks: self.blocks.len() as u64,
            blocks: self.blocks.iter().map(BitSet::to_hex).collect(),
        }
    }

    pub fn from_file(file: &OrbitFile) -> Result<OrbitDesign> {
        let modulus = FieldElem::parse_hex(&file.modulus)?.bits();
        let ctx = FieldCtx::with_modulus(file.n, modulus)?;
        let base = Block::from_elements(&ctx, file.base.iter().copied())?;
        let blocks = file
            .blocks
            .iter()
            .map(|h| BitSet::from_hex(ctx.size(), h).ok_or_else(|| Error::Parse(format!("bad block bitset {h:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let d = OrbitDesign::from_parts(base, blocks)?;
        if d.stab_order != file.stab_order || d.blocks.len() as u64 != file.num_blocks {
            return Err(Error::Parse("orbit header disagrees with its blocks".into()));
        }
        Ok(d)
    }

    /// Compact binary form, all integers little-endian:
    ///
    /// | offset | size | content                                  |
    /// |--------|------|------------------------------------------|
    /// | 0      | 8    | magic `APNORB01`                         |
    /// | 8      | 1    | n                                        |
    /// | 9      | 3    | zero                                     |
    /// | 12     | 4    | field modulus (u32)                      |
    /// | 16     | 8    | stabilizer order (u64)                   |
    /// | 24     | 8    | number of blocks m (u64)                 |
    /// | 32     | q/8  | base block                               |
    /// | ...    | q/8  | each of the m blocks, ascending          |
    ///
    /// A block is `ceil(q/8)` bytes; element `x` is bit `x % 8` of byte `x / 8`.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&[self.ctx.n() as u8, 0, 0, 0])?;
        w.write_all(&self.ctx.modulus().to_le_bytes())?;
        w.write_all(&self.stab_order.to_le_bytes())?;
        w.write_all(&(self.blocks.len() as u64).to_le_bytes())?;
        w.write_all(&self.base.bitset().to_le_bytes())?;
        for b in &self.blocks {
            w.write_all(&b.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<OrbitDesign> {
        let mut header = [0u8; 32];
        r.read_exact(&mut header)?;
        if &header[..8] != BINARY_MAGIC {
            return Err(Error::Parse("not an orbit file (bad magic)".into()));
        }
        let n = header[8] as u32;
        let modulus = u32::from_le_bytes(header[12..16].try_into().unwrap());
        let stab = u64::from_le_bytes(header[16..24].try_into().unwrap());
        let m = u64::from_le_bytes(header[24..32].try_into().unwrap());
        let ctx = FieldCtx::with_modulus(n, modulus)?;
        let width = ctx.size().div_ceil(8);
        if m > ctx.size() as u64 * ctx.order() as u64 {
            return Err(Error::Parse(format!("{m} blocks exceeds the group order")));
        }
        let mut buf = vec![0u8; width];
        r.read_exact(&mut buf)?;
        let base = Block::from_bitset(&ctx, BitSet::from_le_bytes(ctx.size(), &buf))?;
        let mut blocks = Vec::with_capacity(m as usize);
        for _ in 0..m {
            r.read_exact(&mut buf)?;
            blocks.push(BitSet::from_le_bytes(ctx.size(), &buf));
        }
        let d = OrbitDesign::from_parts(base, blocks)?;
        if d.stab_order != stab || d.blocks.len() as u64 != m {
            return Err(Error::Parse("orbit header disagrees with its blocks".into()));
        }
        Ok(d)
    }
}

pub const BINARY_MAGIC: &[u8; 8] = b"APNORB01";
