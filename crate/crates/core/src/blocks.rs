//! Base blocks: the Kasami complement block `KA(n,i)`, the APN image block
//! `AP(n,s) = {(x+1)^s + x^s}` and the oval block `OV(n,s) = {x^s + x}`,
//! together with the catalogs of APN and o-monomial exponents they use.

use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::gf2n::{gcd, Exponent, FieldCtx, FieldElem};
use crate::SCHEMA_VERSION;

/// A subset of GF(q). The bitset is authoritative; the sorted element list
/// is derived on demand.
#[derive(Clone, PartialEq, Eq)]
pub struct Block {
    ctx: FieldCtx,
    members: BitSet,
    size: usize,
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block(n={}, k={}, {:?})", self.ctx.n(), self.size, self.members)
    }
}

impl Block {
    pub fn from_bitset(ctx: &FieldCtx, members: BitSet) -> Result<Block> {
        if members.len() != ctx.size() {
            return Err(Error::pre(format!(
                "membership vector has {} bits, field has {} elements",
                members.len(),
                ctx.size()
            )));
        }
        let size = members.count_ones();
        Ok(Block {
            ctx: ctx.clone(),
            members,
            size,
        })
    }

    pub fn from_elements<I: IntoIterator<Item = FieldElem>>(ctx: &FieldCtx, elems: I) -> Result<Block> {
        let mut members = BitSet::new(ctx.size());
        for x in elems {
            ctx.elem(x.bits())?;
            members.insert(x.index());
        }
        Block::from_bitset(ctx, members)
    }

    pub fn empty(ctx: &FieldCtx) -> Block {
        Block::from_bitset(ctx, BitSet::new(ctx.size())).unwrap()
    }

    pub fn full(ctx: &FieldCtx) -> Block {
        Block::from_bitset(ctx, BitSet::full(ctx.size())).unwrap()
    }

    /// Uniformly random `k`-subset, reproducible from `seed`.
    pub fn random(ctx: &FieldCtx, k: usize, seed: u64) -> Result<Block> {
        if k > ctx.size() {
            return Err(Error::pre(format!("k = {k} exceeds q = {}", ctx.q())));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idx = sample(&mut rng, ctx.size(), k);
        Block::from_bitset(ctx, BitSet::from_indices(ctx.size(), idx.iter()))
    }

    /// `{x : Tr(x^t) = 1}`, the support set paired with several constructions.
    pub fn trace_support(ctx: &FieldCtx, t: Exponent) -> Block {
        Block::from_elements(ctx, ctx.elements().filter(|&x| ctx.trace(ctx.pow_exp(x, t)) == 1)).unwrap()
    }

    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn bitset(&self) -> &BitSet {
        &self.members
    }

    pub fn into_bitset(self) -> BitSet {
        self.members
    }

    #[inline]
    pub fn contains(&self, x: FieldElem) -> bool {
        self.members.contains(x.index())
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElem> + '_ {
        self.members.ones().map(|i| FieldElem::from_bits(i as u32))
    }

    pub fn members(&self) -> Vec<FieldElem> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Block {
        Block::from_bitset(&self.ctx, self.members.complement()).unwrap()
    }

    /// `{b * x : x in self}`.
    pub fn scaled(&self, b: FieldElem) -> Block {
        Block::from_elements(&self.ctx, self.iter().map(|x| self.ctx.mul(b, x))).unwrap()
    }
}

/// Named exponent families: the six APN power families (Niho split by
/// `n mod 4`) and the four o-monomial families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Gold,
    Kasami,
    Welch,
    /// Niho exponent for `n = 1 (mod 4)`.
    NihoA,
    /// Niho exponent for `n = 3 (mod 4)`.
    NihoB,
    Inverse,
    Dobbertin,
    TransOval,
    SegreOval,
    GlynnIOval,
    GlynnIIOval,
}

impl Family {
    pub const APN: [Family; 7] = [
        Family::Gold,
        Family::Kasami,
        Family::Welch,
        Family::NihoA,
        Family::NihoB,
        Family::Inverse,
        Family::Dobbertin,
    ];

    pub const OVAL: [Family; 4] = [
        Family::TransOval,
        Family::SegreOval,
        Family::GlynnIOval,
        Family::GlynnIIOval,
    ];

    pub fn is_oval(self) -> bool {
        Family::OVAL.contains(&self)
    }

    pub fn takes_index(self) -> bool {
        matches!(self, Family::Gold | Family::Kasami | Family::TransOval)
    }

    /// The Niho variant that applies to `n`.
    pub fn niho(n: u32) -> Family {
        if n % 4 == 3 {
            Family::NihoB
        } else {
            Family::NihoA
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Gold => "gold",
            Family::Kasami => "kasami",
            Family::Welch => "welch",
            Family::NihoA => "niho-a",
            Family::NihoB => "niho-b",
            Family::Inverse => "inverse",
            Family::Dobbertin => "dobbertin",
            Family::TransOval => "trans",
            Family::SegreOval => "segre",
            Family::GlynnIOval => "glynn-i",
            Family::GlynnIIOval => "glynn-ii",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u32>,
    /// The o-monomial is the bar companion `x^(1-s)` of the family member.
    #[serde(default)]
    pub bar: bool,
    /// Integer exponent as given by the family formula (not reduced).
    pub exponent: u64,
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

fn index_coprime(family: Family, n: u32, i: Option<u32>) -> Result<u32> {
    let i = i.ok_or_else(|| Error::pre(format!("{} needs an index i", family.name())))?;
    require(i >= 1, || format!("{}: i must be positive", family.name()))?;
    require(gcd(i as u64, n as u64) == 1, || {
        format!("{}: gcd(i, n) = gcd({i}, {n}) != 1", family.name())
    })?;
    Ok(i)
}

fn pow2(k: u32) -> Result<u64> {
    1u64.checked_shl(k)
        .filter(|_| k < 63)
        .ok_or_else(|| Error::pre(format!("2^{k} overflows the exponent range")))
}

/// Integer exponent of a catalog family for degree `n` (and index `i`
/// where the family has one). The oval families are accepted too.
pub fn apn_exponent(family: Family, n: u32, i: Option<u32>) -> Result<u64> {
    let odd = |name: &str| require(n % 2 == 1, || format!("{name} needs n odd, got n = {n}"));
    match family {
        Family::Gold => {
            let i = index_coprime(family, n, i)?;
            Ok(pow2(i)? + 1)
        }
        Family::Kasami => {
            let i = index_coprime(family, n, i)?;
            Ok(pow2(2 * i)? - pow2(i)? + 1)
        }
        Family::Welch => {
            odd("welch")?;
            Ok(pow2((n - 1) / 2)? + 3)
        }
        Family::NihoA => {
            require(n % 4 == 1, || format!("niho-a needs n = 1 mod 4, got n = {n}"))?;
            Ok(pow2((n - 1) / 2)? + pow2((n - 1) / 4)? - 1)
        }
        Family::NihoB => {
            require(n % 4 == 3, || format!("niho-b needs n = 3 mod 4, got n = {n}"))?;
            Ok(pow2((n - 1) / 2)? + pow2((3 * n - 1) / 4)? - 1)
        }
        Family::Inverse => {
            odd("inverse")?;
            Ok(pow2(n)? - 2)
        }
        Family::Dobbertin => {
            require(n.is_multiple_of(5), || format!("dobbertin needs n = 0 mod 5, got n = {n}"))?;
            let f = n / 5;
            Ok(pow2(4 * f)? + pow2(3 * f)? + pow2(2 * f)? + pow2(f)? - 1)
        }
        Family::TransOval => {
            let i = index_coprime(family, n, i)?;
            pow2(i)
        }
        Family::SegreOval => {
            odd("segre")?;
            Ok(6)
        }
        Family::GlynnIOval => {
            odd("glynn-i")?;
            Ok(3 * pow2(n.div_ceil(2))? + 4)
        }
        Family::GlynnIIOval => {
            odd("glynn-ii")?;
            if n % 4 == 1 {
                Ok(pow2(n.div_ceil(2))? + pow2((3 * n + 1) / 4)?)
            } else {
                Ok(pow2(n.div_ceil(2))? + pow2((n + 1) / 4)?)
            }
        }
    }
}

/// The bar companion `x * (x^(q-2))^s = x^(1-s)` of an o-monomial `x^s`.
pub fn ominomial_bar(s: u64, q: u64) -> u64 {
    let m = q - 1;
    (1 + m - s % m) % m
}

/// Every APN catalog exponent that applies to `n`, one entry per index
/// `1 <= i < n` for the indexed families.
pub fn apn_catalog(n: u32) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for family in Family::APN {
        if family.takes_index() {
            for i in 1..n {
                if let Ok(exponent) = apn_exponent(family, n, Some(i)) {
                    out.push(CatalogEntry {
                        family,
                        i: Some(i),
                        bar: false,
                        exponent,
                    });
                }
            }
        } else if let Ok(exponent) = apn_exponent(family, n, None) {
            out.push(CatalogEntry {
                family,
                i: None,
                bar: false,
                exponent,
            });
        }
    }
    out
}

/// The o-monomial catalog for `n`, with bar companions.
pub fn oval_catalog(n: u32) -> Vec<CatalogEntry> {
    let q = 1u64 << n;
    let mut out = Vec::new();
    let mut push = |family, i, exponent| {
        for bar in [false, true] {
            let exponent = if bar { ominomial_bar(exponent, q) } else { exponent };
            out.push(CatalogEntry {
                family,
                i,
                bar,
                exponent,
            });
        }
    };
    for i in 1..n {
        if let Ok(e) = apn_exponent(Family::TransOval, n, Some(i)) {
            push(Family::TransOval, Some(i), e);
        }
    }
    for family in [Family::SegreOval, Family::GlynnIOval, Family::GlynnIIOval] {
        if let Ok(e) = apn_exponent(family, n, None) {
            push(family, None, e);
        }
    }
    out
}

/// Differential check: every `x^s + (x+a)^s`, `a != 0`, takes each value at
/// most twice.
pub fn is_apn(ctx: &FieldCtx, s: Exponent) -> bool {
    let table = ctx.power_table(s);
    let q = ctx.size();
    (1..q).into_par_iter().all(|a| {
        let mut hits = vec![0u8; q];
        for x in 0..q {
            let v = (table[x] + table[x ^ a]).index();
            hits[v] += 1;
            if hits[v] > 2 {
                return false;
            }
        }
        true
    })
}

/// `x^s + a x` is 2-to-1 for every `a != 0`.
pub fn is_o_monomial(ctx: &FieldCtx, s: Exponent) -> bool {
    let table = ctx.power_table(s);
    ctx.elements().skip(1).collect::<Vec<_>>().par_iter().all(|&a| {
        let mut hits = vec![0u8; ctx.size()];
        ctx.elements().all(|x| {
            let v = (table[x.index()] + ctx.mul(a, x)).index();
            hits[v] += 1;
            hits[v] <= 2
        }) && hits.iter().all(|&h| h == 0 || h == 2)
    })
}

/// `KA(n,i) = GF(q) \ {((x+1)^s + x^s + 1)^(1/(2^i+1))}` with the Kasami
/// exponent `s = 2^(2i) - 2^i + 1`.
pub fn kasami_block(ctx: &FieldCtx, i: u32) -> Result<Block> {
    let n = ctx.n();
    require(n % 2 == 1, || format!("KA block needs n odd, got n = {n}"))?;
    let s = ctx.exponent_u128(apn_exponent(Family::Kasami, n, Some(i))? as u128);
    let root = ctx.exp_inverse(((1u64 << i) + 1) as i64)?;
    let table = ctx.power_table(s);
    let mut image = BitSet::new(ctx.size());
    for x in ctx.elements() {
        let v = table[(x + FieldElem::ONE).index()] + table[x.index()] + FieldElem::ONE;
        image.insert(ctx.pow_exp(v, root).index());
    }
    Block::from_bitset(ctx, image.complement())
}

/// `AP(n,s) = {(x+1)^s + x^s}`; checks `gcd(s, q-1) = 1` and that `x^s` is APN.
pub fn apn_image_block(ctx: &FieldCtx, s: Exponent) -> Result<Block> {
    require(gcd(s.value() as u64, ctx.order() as u64) == 1, || {
        format!("gcd({s}, q-1) != 1")
    })?;
    require(is_apn(ctx, s), || format!("x^{s} is not APN over GF(2^{})", ctx.n()))?;
    Ok(apn_image_block_unchecked(ctx, s))
}

/// [`apn_image_block`] without the O(q^2) APN scan, for batch runs over
/// catalog exponents.
pub fn apn_image_block_unchecked(ctx: &FieldCtx, s: Exponent) -> Block {
    let table = ctx.power_table(s);
    Block::from_elements(
        ctx,
        ctx.elements()
            .map(|x| table[(x + FieldElem::ONE).index()] + table[x.index()]),
    )
    .unwrap()
}

/// Whether `s` (mod q-1) is an o-monomial exponent of the catalog for `n`.
pub fn in_oval_catalog(ctx: &FieldCtx, s: Exponent) -> bool {
    oval_catalog(ctx.n())
        .iter()
        .any(|e| ctx.exponent_u128(e.exponent as u128) == s)
}

/// `OV(n,s) = {x^s + x}` for a catalog o-monomial `x^s`.
pub fn oval_block(ctx: &FieldCtx, s: Exponent) -> Result<Block> {
    require(in_oval_catalog(ctx, s), || {
        format!("x^{s} is not in the o-monomial catalog for n = {}", ctx.n())
    })?;
    Ok(Block::from_elements(ctx, ctx.elements().map(|x| ctx.pow_exp(x, s) + x)).unwrap())
}

/// How a block was produced; used for labels and block files.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Construction {
    Kasami { i: u32 },
    ApnImage { s: u64, family: Option<Family>, i: Option<u32> },
    Oval { s: u64, family: Option<Family>, i: Option<u32>, bar: bool },
    Random { k: usize, seed: u64 },
    Explicit,
}

impl Construction {
    pub fn tag(&self) -> &'static str {
        match self {
            Construction::Kasami { .. } => "KA",
            Construction::ApnImage { .. } => "AP",
            Construction::Oval { .. } => "OV",
            Construction::Random { .. } => "random",
            Construction::Explicit => "explicit",
        }
    }

    pub fn label(&self, n: u32) -> String {
        match self {
            Construction::Kasami { i } => format!("KA({n},{i})"),
            Construction::ApnImage { s, .. } => format!("AP({n},{s})"),
            Construction::Oval { s, .. } => format!("OV({n},{s})"),
            Construction::Random { k, seed } => format!("random({n},k={k},seed={seed})"),
            Construction::Explicit => format!("explicit({n})"),
        }
    }

    pub fn params(&self) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        match self {
            Construction::Kasami { i } => put("i", (*i).into()),
            Construction::ApnImage { s, family, i } | Construction::Oval { s, family, i, .. } => {
                put("s", (*s).into());
                if let Some(f) = family {
                    put("family", f.name().into());
                }
                if let Some(i) = i {
                    put("i", (*i).into());
                }
                if let Construction::Oval { bar, .. } = self {
                    put("bar", (*bar).into());
                }
            }
            Construction::Random { k, seed } => {
                put("k", (*k).into());
                put("seed", (*seed).into());
            }
            Construction::Explicit => {}
        }
        m
    }

    fn from_parts(tag: &str, params: &Map<String, Value>) -> Result<Construction> {
        let int = |k: &str| params.get(k).and_then(Value::as_u64);
        let need = |k: &str| int(k).ok_or_else(|| Error::Parse(format!("{tag} block needs param {k:?}")));
        let family = params
            .get("family")
            .and_then(Value::as_str)
            .and_then(|s| Family::APN.iter().chain(&Family::OVAL).copied().find(|f| f.name() == s));
        Ok(match tag {
            "KA" => Construction::Kasami { i: need("i")? as u32 },
            "AP" => Construction::ApnImage {
                s: need("s")?,
                family,
                i: int("i").map(|v| v as u32),
            },
            "OV" => Construction::Oval {
                s: need("s")?,
                family,
                i: int("i").map(|v| v as u32),
                bar: params.get("bar").and_then(Value::as_bool).unwrap_or(false),
            },
            "random" => Construction::Random {
                k: need("k")? as usize,
                seed: need("seed")?,
            },
            "explicit" => Construction::Explicit,
            other => return Err(Error::Parse(format!("unknown construction {other:?}"))),
        })
    }
}

/// A block together with its provenance.
#[derive(Clone, Debug)]
pub struct LabeledBlock {
    pub construction: Construction,
    pub block: Block,
}

impl LabeledBlock {
    pub fn label(&self) -> String {
        self.construction.label(self.block.ctx().n())
    }

    pub fn to_file(&self) -> BlockFile {
        let ctx = self.block.ctx();
        BlockFile {
            schema: SCHEMA_VERSION.to_string(),
            n: ctx.n(),
            modulus: format!("{:#x}", ctx.modulus()),
            construction: self.construction.tag().to_string(),
            params: self.construction.params(),
            members: self.block.members(),
        }
    }

    pub fn from_file(file: &BlockFile) -> Result<LabeledBlock> {
        let modulus = FieldElem::parse_hex(&file.modulus)?.bits();
        let ctx = FieldCtx::with_modulus(file.n, modulus)?;
        let block = Block::from_elements(&ctx, file.members.iter().copied())?;
        if block.size() != file.members.len() {
            return Err(Error::Parse("duplicate members in block file".into()));
        }
        Ok(LabeledBlock {
            construction: Construction::from_parts(&file.construction, &file.params)?,
            block,
        })
    }
}

/// On-disk block description: members as hex strings sorted ascending.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockFile {
    pub schema: String,
    pub n: u32,
    pub modulus: String,
    pub construction: String,
    pub params: Map<String, Value>,
    pub members: Vec<FieldElem>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32) -> FieldCtx {
        FieldCtx::new(n).unwrap()
    }

    /// Differential uniformity by the literal definition.
    fn differential_uniformity(f: &FieldCtx, s: i64) -> usize {
        let mut worst = 0;
        for a in f.elements().skip(1) {
            for b in f.elements() {
                let c = f
                    .elements()
                    .filter(|&x| f.pow(x + a, s).unwrap() + f.pow(x, s).unwrap() == b)
                    .count();
                worst = worst.max(c);
            }
        }
        worst
    }

    #[test]
    fn exponent_formulas() {
        assert_eq!(apn_exponent(Family::Gold, 5, Some(1)).unwrap(), 3);
        assert_eq!(apn_exponent(Family::Kasami, 5, Some(2)).unwrap(), 13);
        assert_eq!(apn_exponent(Family::Welch, 5, None).unwrap(), 7);
        assert_eq!(apn_exponent(Family::NihoA, 5, None).unwrap(), 5);
        assert_eq!(apn_exponent(Family::NihoB, 7, None).unwrap(), 2u64.pow(3) + 2u64.pow(5) - 1);
        assert_eq!(apn_exponent(Family::Inverse, 5, None).unwrap(), 30);
        assert_eq!(apn_exponent(Family::Dobbertin, 10, None).unwrap(), 256 + 64 + 16 + 4 - 1);
        assert_eq!(apn_exponent(Family::SegreOval, 5, None).unwrap(), 6);
        assert_eq!(apn_exponent(Family::GlynnIOval, 5, None).unwrap(), 28);
        assert_eq!(apn_exponent(Family::GlynnIIOval, 5, None).unwrap(), 24);
        assert_eq!(apn_exponent(Family::GlynnIIOval, 7, None).unwrap(), 16 + 4);
    }

    #[test]
    fn exponent_preconditions() {
        assert!(matches!(apn_exponent(Family::Gold, 4, Some(2)), Err(Error::Precondition(_))));
        assert!(apn_exponent(Family::Welch, 6, None).is_err());
        assert!(apn_exponent(Family::NihoA, 7, None).is_err());
        assert!(apn_exponent(Family::NihoB, 5, None).is_err());
        assert!(apn_exponent(Family::Dobbertin, 7, None).is_err());
        assert!(apn_exponent(Family::Kasami, 5, None).is_err());
    }

    #[test]
    fn bar_companions() {
        assert_eq!(ominomial_bar(6, 32), 26);
        assert_eq!(ominomial_bar(26, 32), 6);
        assert_eq!(ominomial_bar(28, 32), 4);
        assert_eq!(ominomial_bar(24, 32), 8);
        assert_eq!(ominomial_bar(1, 32), 0);
    }

    #[test]
    fn is_apn_matches_differential_oracle() {
        let f4 = ctx(4);
        assert_eq!(differential_uniformity(&f4, 3), 2);
        assert_eq!(differential_uniformity(&f4, 7), 4);
        assert!(is_apn(&f4, f4.exponent(3)));
        assert!(!is_apn(&f4, f4.exponent(7)));
        let f5 = ctx(5);
        for s in 1..31 {
            assert_eq!(is_apn(&f5, f5.exponent(s)), differential_uniformity(&f5, s) == 2, "s={s}");
        }
    }

    #[test]
    fn catalog_exponents_are_apn() {
        for n in [5, 7, 9] {
            let f = ctx(n);
            for e in apn_catalog(n) {
                assert!(is_apn(&f, f.exponent_u128(e.exponent as u128)), "n={n} {e:?}");
            }
        }
    }

    #[test]
    fn oval_catalog_members_are_o_monomials() {
        for n in [5, 7] {
            let f = ctx(n);
            for e in oval_catalog(n) {
                assert!(is_o_monomial(&f, f.exponent_u128(e.exponent as u128)), "n={n} {e:?}");
            }
        }
        let f = ctx(5);
        assert!(!is_o_monomial(&f, f.exponent(3)));
        let exps: std::collections::BTreeSet<u64> = oval_catalog(5)
            .iter()
            .filter(|e| e.family != Family::TransOval)
            .map(|e| e.exponent)
            .collect();
        assert_eq!(exps.into_iter().collect::<Vec<_>>(), vec![4, 6, 8, 24, 26, 28]);
    }

    #[test]
    fn kasami_blocks_have_half_size() {
        for (n, i) in [(5, 1), (5, 2), (5, 3), (5, 4), (7, 1), (7, 2), (7, 3), (9, 2)] {
            let f = ctx(n);
            let b = kasami_block(&f, i).unwrap();
            assert_eq!(b.size(), f.size() / 2, "n={n} i={i}");
        }
        assert!(kasami_block(&ctx(6), 1).is_err());
        assert!(kasami_block(&ctx(9), 3).is_err());
    }

    #[test]
    fn kasami_block_membership_by_direct_evaluation() {
        let f = ctx(5);
        let b = kasami_block(&f, 1).unwrap();
        // i = 1: s = 3, root exponent = 1/3 mod 31 = 21
        let image: std::collections::HashSet<FieldElem> = f
            .elements()
            .map(|x| {
                let v = f.pow(x + FieldElem::ONE, 3).unwrap() + f.pow(x, 3).unwrap() + FieldElem::ONE;
                f.pow(v, 21).unwrap()
            })
            .collect();
        for y in f.elements() {
            assert_eq!(b.contains(y), !image.contains(&y));
        }
    }

    #[test]
    fn gold_image_block_is_affine_coset() {
        let f = ctx(5);
        let b = apn_image_block(&f, f.exponent(3)).unwrap();
        let expected: std::collections::BTreeSet<FieldElem> =
            f.elements().map(|x| f.mul(x, x) + x + FieldElem::ONE).collect();
        assert_eq!(b.members(), expected.into_iter().collect::<Vec<_>>());
        assert_eq!(b.size(), 16);
        // closed under adding differences of its members
        let m = b.members();
        for &x in &m {
            for &y in &m {
                for &z in &m {
                    assert!(b.contains(x + y + z));
                }
            }
        }
    }

    #[test]
    fn image_blocks_have_half_size() {
        for n in [5, 7] {
            let f = ctx(n);
            for e in apn_catalog(n) {
                let s = f.exponent_u128(e.exponent as u128);
                if gcd(s.value() as u64, f.order() as u64) == 1 {
                    assert_eq!(apn_image_block(&f, s).unwrap().size(), f.size() / 2);
                }
            }
            for e in oval_catalog(n) {
                let s = f.exponent_u128(e.exponent as u128);
                assert_eq!(oval_block(&f, s).unwrap().size(), f.size() / 2);
            }
        }
        let f = ctx(5);
        assert_eq!(apn_image_block(&f, f.exponent(13)).unwrap().size(), 16);
        // every cyclotomic class mod 31 other than that of 1 is APN
        assert!(apn_image_block(&f, f.exponent(2)).is_err());
        assert!(oval_block(&f, f.exponent(3)).is_err());
    }

    #[test]
    fn block_file_round_trip() {
        let f = ctx(5);
        let lb = LabeledBlock {
            construction: Construction::Oval {
                s: 26,
                family: Some(Family::SegreOval),
                i: None,
                bar: true,
            },
            block: oval_block(&f, f.exponent(26)).unwrap(),
        };
        let js = serde_json::to_string(&lb.to_file()).unwrap();
        let back = LabeledBlock::from_file(&serde_json::from_str(&js).unwrap()).unwrap();
        assert_eq!(back.block, lb.block);
        assert_eq!(back.construction, lb.construction);
        assert_eq!(back.label(), "OV(5,26)");
    }

    #[test]
    fn random_blocks_are_reproducible() {
        let f = ctx(5);
        let a = Block::random(&f, 10, 42).unwrap();
        assert_eq!(a.size(), 10);
        assert_eq!(a, Block::random(&f, 10, 42).unwrap());
        assert!(Block::random(&f, 33, 0).is_err());
    }
}
