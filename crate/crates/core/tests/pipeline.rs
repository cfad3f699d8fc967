//! Block -> orbit -> design -> code, each stage checked against a
//! brute-force computation that shares no code with the library.

use std::collections::BTreeSet;

use apndesigns::affine::{orbit, OrbitDesign};
use apndesigns::blocks::{apn_image_block, kasami_block, oval_block};
use apndesigns::boolfn::{char_fn, walsh_fast};
use apndesigns::codes::code_from_design;
use apndesigns::designs::verify_t_design;
use apndesigns::{Block, FieldCtx};

const MOD5: u32 = 0x25;

fn mul(mut a: u32, mut b: u32, m: u32, n: u32) -> u32 {
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> n & 1 == 1 {
            a ^= m;
        }
    }
    r
}

fn trace(x: u32, m: u32, n: u32) -> u32 {
    let (mut t, mut y) = (0, x);
    for _ in 0..n {
        t ^= y;
        y = mul(y, y, m, n);
    }
    t
}

fn members(b: &Block) -> Vec<u32> {
    b.iter().map(|x| x.bits()).collect()
}

fn naive_orbit(base: &[u32], m: u32, n: u32) -> BTreeSet<Vec<u32>> {
    let q = 1u32 << n;
    let mut out = BTreeSet::new();
    for a in 1..q {
        for c in 0..q {
            let mut img: Vec<u32> = base.iter().map(|&x| mul(a, x, m, n) ^ c).collect();
            img.sort_unstable();
            out.insert(img);
        }
    }
    out
}

fn as_sets(d: &OrbitDesign) -> BTreeSet<Vec<u32>> {
    d.blocks().iter().map(|b| b.ones().map(|i| i as u32).collect()).collect()
}

fn n5_blocks() -> Vec<Block> {
    let ctx = FieldCtx::new(5).unwrap();
    vec![
        kasami_block(&ctx, 1).unwrap(),
        kasami_block(&ctx, 2).unwrap(),
        apn_image_block(&ctx, ctx.exponent(7)).unwrap(),
        oval_block(&ctx, ctx.exponent(6)).unwrap(),
        oval_block(&ctx, ctx.exponent(28)).unwrap(),
    ]
}

#[test]
fn orbits_match_direct_images() {
    for b in n5_blocks() {
        let d = orbit(&b);
        let want = naive_orbit(&members(&b), MOD5, 5);
        assert_eq!(as_sets(&d), want);
        assert_eq!(d.stab_order() * want.len() as u64, 32 * 31);
    }
}

#[test]
fn three_designs_by_triple_counting() {
    for b in n5_blocks() {
        let d = orbit(&b);
        let sets: Vec<u64> = as_sets(&d).iter().map(|s| s.iter().fold(0u64, |acc, &x| acc | 1 << x)).collect();
        let mut counts = BTreeSet::new();
        for x in 0..32 {
            for y in x + 1..32 {
                for z in y + 1..32 {
                    let t = 1u64 << x | 1 << y | 1 << z;
                    counts.insert(sets.iter().filter(|&&s| s & t == t).count() as u64);
                }
            }
        }
        assert_eq!(counts.len(), 1);
        let lambda = *counts.iter().next().unwrap();
        let p = verify_t_design(&d, 3).unwrap().params().unwrap();
        assert_eq!(p.lambda, lambda);
    }
}

fn rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut r = r;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

#[test]
fn code_rank_and_weights() {
    for b in n5_blocks() {
        let d = orbit(&b);
        let rows: Vec<u64> = as_sets(&d).iter().map(|s| s.iter().fold(0u64, |acc, &x| acc | 1 << x)).collect();
        let c = code_from_design(&d);
        assert_eq!(c.dim(), rank(&rows));

        // every word of the span, by closure under addition
        let mut span: BTreeSet<u64> = BTreeSet::from([0]);
        for &r in &rows {
            if !span.contains(&r) {
                let new: Vec<u64> = span.iter().map(|&w| w ^ r).collect();
                span.extend(new);
            }
        }
        assert_eq!(span.len(), 1 << c.dim());
        let mut hist = vec![0u64; 33];
        for w in &span {
            hist[w.count_ones() as usize] += 1;
        }
        let we = c.weight_enumerator(1 << 22).unwrap();
        assert_eq!(we.counts(), &hist[..]);
    }
}

#[test]
fn walsh_by_definition() {
    for b in n5_blocks() {
        let mem = members(&b);
        let w = walsh_fast(&char_fn(&b));
        for mu in 0..32 {
            let s: i32 = (0..32u32)
                .map(|x| {
                    let f = mem.contains(&x) as u32;
                    if (f ^ trace(mul(mu, x, MOD5, 5), MOD5, 5)) == 0 { 1 } else { -1 }
                })
                .sum();
            assert_eq!(w.coeffs()[mu as usize], s);
        }
    }
}

#[test]
fn orbit_files_round_trip() {
    let ctx = FieldCtx::new(7).unwrap();
    let b = kasami_block(&ctx, 3).unwrap();
    let d = orbit(&b);
    let mut buf = Vec::new();
    d.write_binary(&mut buf).unwrap();
    let back = OrbitDesign::read_binary(&buf[..]).unwrap();
    assert_eq!(back.blocks(), d.blocks());
    assert_eq!(back.stab_order(), d.stab_order());

    let file = d.to_file(&apndesigns::Construction::Kasami { i: 3 });
    let text = serde_json::to_string(&file).unwrap();
    let back = OrbitDesign::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.blocks(), d.blocks());
}

#[test]
fn gold_designs_index() {
    let ctx = FieldCtx::new(5).unwrap();
    let d = orbit(&apn_image_block(&ctx, ctx.exponent(3)).unwrap());
    assert_eq!(d.stab_order(), 16);
    let sets: Vec<u64> = as_sets(&d).iter().map(|s| s.iter().fold(0u64, |acc, &x| acc | 1 << x)).collect();
    for t in [0b111u64, 1 | 1 << 9 | 1 << 30, 1 << 4 | 1 << 17 | 1 << 22] {
        assert_eq!(sets.iter().filter(|&&s| s & t == t).count(), 7);
    }
    assert_eq!(verify_t_design(&d, 3).unwrap().params().unwrap().lambda, 7);

    let ctx = FieldCtx::new(7).unwrap();
    for s in [3, 9] {
        let d = orbit(&apn_image_block(&ctx, ctx.exponent(s)).unwrap());
        let p = verify_t_design(&d, 3).unwrap().params().unwrap();
        assert_eq!((p.lambda, d.stab_order()), (31, 64));
        assert_eq!(p.lambda * d.stab_order(), 128 * 124 / 8);
    }
}
