//! Boolean functions GF(q) -> GF(2) and their Walsh spectra with respect to
//! the trace character, `W(mu) = sum_x (-1)^(f(x) + Tr(mu x))`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::blocks::Block;
use crate::error::{Error, Result};
use crate::gf2n::{Exponent, FieldCtx, FieldElem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BooleanFn {
    ctx: FieldCtx,
    table: BitSet,
}

impl BooleanFn {
    pub fn from_table(ctx: &FieldCtx, table: BitSet) -> Result<BooleanFn> {
        if table.len() != ctx.size() {
            return Err(Error::pre(format!(
                "truth table has {} entries, field has {}",
                table.len(),
                ctx.size()
            )));
        }
        Ok(BooleanFn { ctx: ctx.clone(), table })
    }

    pub fn from_fn(ctx: &FieldCtx, mut f: impl FnMut(FieldElem) -> bool) -> BooleanFn {
        let table = BitSet::from_indices(ctx.size(), ctx.elements().filter(|&x| f(x)).map(|x| x.index()));
        BooleanFn { ctx: ctx.clone(), table }
    }

    pub fn zero(ctx: &FieldCtx) -> BooleanFn {
        BooleanFn {
            ctx: ctx.clone(),
            table: BitSet::new(ctx.size()),
        }
    }

    /// `x -> Tr(x^t)`.
    pub fn trace_monomial(ctx: &FieldCtx, t: Exponent) -> BooleanFn {
        BooleanFn::from_fn(ctx, |x| ctx.trace(ctx.pow_exp(x, t)) == 1)
    }

    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn eval(&self, x: FieldElem) -> bool {
        self.table.contains(x.index())
    }

    pub fn table(&self) -> &BitSet {
        &self.table
    }

    pub fn weight(&self) -> usize {
        self.table.count_ones()
    }

    pub fn to_hex(&self) -> String {
        self.table.to_hex()
    }

    pub fn from_hex(ctx: &FieldCtx, hex: &str) -> Result<BooleanFn> {
        let table = BitSet::from_hex(ctx.size(), hex)
            .ok_or_else(|| Error::Parse(format!("not a {}-digit truth table", ctx.size().div_ceil(4))))?;
        Ok(BooleanFn { ctx: ctx.clone(), table })
    }

    /// The set where the function is 1.
    pub fn support(&self) -> Block {
        Block::from_bitset(&self.ctx, self.table.clone()).unwrap()
    }
}

/// Indicator function of a block.
pub fn char_fn(block: &Block) -> BooleanFn {
    BooleanFn {
        ctx: block.ctx().clone(),
        table: block.bitset().clone(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WalshSpectrum {
    ctx: FieldCtx,
    coeffs: Vec<i32>,
}

impl WalshSpectrum {
    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs
    }

    #[inline]
    pub fn at(&self, mu: FieldElem) -> i32 {
        self.coeffs[mu.index()]
    }

    pub fn values(&self) -> BTreeSet<i32> {
        self.coeffs.iter().copied().collect()
    }

    /// Sum of squares; equals `q^2` for every Boolean function.
    pub fn energy(&self) -> i128 {
        self.coeffs.iter().map(|&c| (c as i128) * (c as i128)).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    field: FieldCtx,
    coeffs: Vec<i32>,
}

impl Serialize for WalshSpectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumRepr {
            field: self.ctx.clone(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WalshSpectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SpectrumRepr::deserialize(d)?;
        if r.coeffs.len() != r.field.size() {
            return Err(serde::de::Error::custom("spectrum length does not match field size"));
        }
        Ok(WalshSpectrum {
            ctx: r.field,
            coeffs: r.coeffs,
        })
    }
}

/// Literal double sum, O(q^2).
pub fn walsh_naive(f: &BooleanFn) -> WalshSpectrum {
    let ctx = &f.ctx;
    let coeffs = ctx
        .elements()
        .map(|mu| {
            ctx.elements()
                .map(|x| {
                    if f.eval(x) as u8 ^ ctx.trace(ctx.mul(mu, x)) == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .sum()
        })
        .collect();
    WalshSpectrum {
        ctx: ctx.clone(),
        coeffs,
    }
}

/// `mask[mu]` is the bit vector `w` with `Tr(mu x) = parity(w & x)`. Column
/// `k` of the bilinear form is `j -> Tr(x^(j+k))`, and `mask` is linear in
/// `mu`, so each entry is one XOR away from an earlier one.
fn trace_form_masks(ctx: &FieldCtx) -> Vec<u32> {
    let n = ctx.n();
    let col: Vec<u32> = (0..n)
        .map(|k| {
            (0..n).fold(0u32, |acc, j| {
                let v = ctx.pow(FieldElem::from_bits(2), (j + k) as i64).unwrap();
                acc | ((ctx.trace(v) as u32) << j)
            })
        })
        .collect();
    let mut mask = vec![0u32; ctx.size()];
    for mu in 1..ctx.size() {
        let low = mu.trailing_zeros();
        mask[mu] = mask[mu & (mu - 1)] ^ col[low as usize];
    }
    mask
}

/// In-place Walsh-Hadamard butterfly over the coordinate dot product.
fn hadamard_in_place(v: &mut [i32]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for chunk in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// O(q log q): standard Hadamard transform, then reindex through the trace
/// form so the character becomes `Tr(mu x)`.
pub fn walsh_fast(f: &BooleanFn) -> WalshSpectrum {
    let ctx = &f.ctx;
    let mut h: Vec<i32> = (0..ctx.size())
        .map(|x| if f.table.contains(x) { -1 } else { 1 })
        .collect();
    hadamard_in_place(&mut h);
    let coeffs = trace_form_masks(ctx).into_iter().map(|w| h[w as usize]).collect();
    WalshSpectrum {
        ctx: ctx.clone(),
        coeffs,
    }
}

/// Value set is exactly `{0, +-2^((n+1)/2)}`. Only defined for odd `n`.
pub fn is_semibent(w: &WalshSpectrum) -> Result<bool> {
    let n = w.ctx.n();
    if n.is_multiple_of(2) {
        return Err(Error::pre(format!("semi-bentness is defined for odd n, got n = {n}")));
    }
    let m = 1i32 << n.div_ceil(2);
    Ok(w.values() == BTreeSet::from([-m, 0, m]))
}

/// `{mu : W(mu) != 0}`.
pub fn support(w: &WalshSpectrum) -> Block {
    Block::from_elements(
        &w.ctx,
        w.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(mu, _)| FieldElem::from_bits(mu as u32)),
    )
    .unwrap()
}
