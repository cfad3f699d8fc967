//! Turning command-line family names into labelled base blocks.

use std::path::PathBuf;

use apndesigns::blocks::{apn_exponent, apn_image_block, kasami_block, ominomial_bar, oval_block, BlockFile};
use apndesigns::{Block, Construction, Family, FieldCtx, LabeledBlock, Result};
use clap::Args;

pub const FAMILIES: &str = "kasami, gold, welch, niho, inverse, dobbertin, ap-kasami, ap, \
oval-trans, oval-segre, oval-glynn1, oval-glynn2, oval, random";

#[derive(Args, Debug, Clone)]
pub struct BlockArgs {
    /// Block family (one of: kasami, gold, welch, niho, inverse, dobbertin,
    /// ap-kasami, ap, oval-trans, oval-segre, oval-glynn1, oval-glynn2,
    /// oval, random). Omit when --from is given.
    pub family: Option<String>,
    /// Field degree.
    #[arg(short, long)]
    pub n: Option<u32>,
    /// Family index (kasami, gold, ap-kasami, oval-trans).
    #[arg(short, long)]
    pub i: Option<u32>,
    /// Exponent for `ap` and `oval`.
    #[arg(short, long)]
    pub s: Option<u64>,
    /// Use the bar companion x^(1-s) of an oval exponent.
    #[arg(long)]
    pub bar: bool,
    /// Block size for `random`.
    #[arg(short, long)]
    pub k: Option<usize>,
    /// Seed for `random`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Field modulus in hex; the default irreducible polynomial otherwise.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Read the base block from a block file written by `block --out`.
    #[arg(long, conflicts_with = "family")]
    pub from: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> apndesigns::Error {
    apndesigns::Error::Precondition(msg.into())
}

impl BlockArgs {
    pub fn resolve(&self) -> Result<LabeledBlock> {
        if let Some(path) = &self.from {
            let text = std::fs::read_to_string(path)?;
            let file: BlockFile = serde_json::from_str(&text)?;
            return LabeledBlock::from_file(&file);
        }
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| usage(format!("a family or --from is required; families: {FAMILIES}")))?;
        let n = self.n.ok_or_else(|| usage("--n is required"))?;
        let ctx = match &self.modulus {
            Some(m) => FieldCtx::with_modulus(n, apndesigns::FieldElem::parse_hex(m)?.bits())?,
            None => FieldCtx::new(n)?,
        };
        select(&ctx, family, self)
    }
}

fn apn(ctx: &FieldCtx, family: Family, i: Option<u32>) -> Result<LabeledBlock> {
    let s = apn_exponent(family, ctx.n(), i)?;
    let block = apn_image_block(ctx, ctx.exponent_u128(s as u128))?;
    Ok(LabeledBlock {
        construction: Construction::ApnImage { s, family: Some(family), i },
        block,
    })
}

fn oval(ctx: &FieldCtx, family: Option<Family>, i: Option<u32>, s: u64, bar: bool) -> Result<LabeledBlock> {
    let s = if bar { ominomial_bar(s, ctx.size() as u64) } else { s };
    let block = oval_block(ctx, ctx.exponent_u128(s as u128))?;
    Ok(LabeledBlock {
        construction: Construction::Oval { s, family, i, bar },
        block,
    })
}

pub fn select(ctx: &FieldCtx, family: &str, a: &BlockArgs) -> Result<LabeledBlock> {
    let n = ctx.n();
    let i1 = Some(a.i.unwrap_or(1));
    let need_s = || a.s.ok_or_else(|| usage(format!("family {family} needs --s")));
    match family {
        "kasami" => {
            let i = a.i.unwrap_or(1);
            Ok(LabeledBlock {
                construction: Construction::Kasami { i },
                block: kasami_block(ctx, i)?,
            })
        }
        "gold" => apn(ctx, Family::Gold, i1),
        "ap-kasami" => apn(ctx, Family::Kasami, i1),
        "welch" => apn(ctx, Family::Welch, None),
        "niho" => apn(ctx, Family::niho(n), None),
        "inverse" => apn(ctx, Family::Inverse, None),
        "dobbertin" => apn(ctx, Family::Dobbertin, None),
        "ap" => {
            let s = need_s()?;
            Ok(LabeledBlock {
                construction: Construction::ApnImage { s, family: None, i: None },
                block: apn_image_block(ctx, ctx.exponent_u128(s as u128))?,
            })
        }
        "oval-trans" => oval(ctx, Some(Family::TransOval), i1, apn_exponent(Family::TransOval, n, i1)?, a.bar),
        "oval-segre" => oval(ctx, Some(Family::SegreOval), None, apn_exponent(Family::SegreOval, n, None)?, a.bar),
        "oval-glynn1" => oval(ctx, Some(Family::GlynnIOval), None, apn_exponent(Family::GlynnIOval, n, None)?, a.bar),
        "oval-glynn2" => oval(ctx, Some(Family::GlynnIIOval), None, apn_exponent(Family::GlynnIIOval, n, None)?, a.bar),
        "oval" => oval(ctx, None, None, need_s()?, a.bar),
        "random" => {
            let k = a.k.ok_or_else(|| usage("family random needs --k"))?;
            Ok(LabeledBlock {
                construction: Construction::Random { k, seed: a.seed },
                block: Block::random(ctx, k, a.seed)?,
            })
        }
        other => Err(usage(format!("unknown family {other:?}; families: {FAMILIES}"))),
    }
}
