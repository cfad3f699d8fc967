//! Root counts and trace criteria for cubics, the Kasami uniqueness
//! equation, Dobbertin's polynomials and `x^(2^i+1) + x + a`.

pub mod conjecture;

use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{apn_exponent, Family};
use crate::error::{Error, Result};
use crate::gf2n::{exp_inverse, gcd, Exponent, FieldCtx, FieldElem};

/// The monic cubic `x^3 + s1 x^2 + s2 x + s3`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CubicCoeffs {
    pub s1: FieldElem,
    pub s2: FieldElem,
    pub s3: FieldElem,
}

impl CubicCoeffs {
    pub fn new(s1: FieldElem, s2: FieldElem, s3: FieldElem) -> Self {
        CubicCoeffs { s1, s2, s3 }
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        // Horner: ((x + s1) x + s2) x + s3
        ctx.mul(ctx.mul(x + self.s1, x) + self.s2, x) + self.s3
    }

    /// `s2 + s1^2`
    pub fn delta2(&self, ctx: &FieldCtx) -> FieldElem {
        self.s2 + ctx.square(self.s1)
    }

    /// `s3 + s1 s2`
    pub fn delta3(&self, ctx: &FieldCtx) -> FieldElem {
        self.s3 + ctx.mul(self.s1, self.s2)
    }
}

/// Number of distinct roots in GF(q), by scanning every element.
pub fn cubic_root_count(ctx: &FieldCtx, c: &CubicCoeffs) -> u32 {
    ctx.elements().filter(|&x| c.eval(ctx, x).is_zero()).count() as u32
}

/// `Tr((s2 + s1^2)^3 / (s3 + s1 s2)^2 + 1) = 1`, which decides whether the
/// cubic has exactly one root. Needs `s1^2 != s2` and `s3 != s1 s2`.
pub fn cubic_unique_criterion(ctx: &FieldCtx, c: &CubicCoeffs) -> Result<bool> {
    let d2 = c.delta2(ctx);
    let d3 = c.delta3(ctx);
    if d2.is_zero() {
        return Err(Error::pre("criterion needs s1^2 != s2"));
    }
    if d3.is_zero() {
        return Err(Error::pre("criterion needs s3 != s1*s2"));
    }
    let a = ctx.div(ctx.mul(ctx.square(d2), d2), ctx.square(d3))?;
    Ok(ctx.trace(a + FieldElem::ONE) == 1)
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

/// The normalized cubic of `(u^d x + (1+u)^d)^3 + x^3 + 1` with
/// `d = (2^i+1)/3 mod q-1`, and the quantities that prove it has one root.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KasamiCubic {
    pub d: Exponent,
    pub cubic: CubicCoeffs,
    /// Roots of the normalized cubic in GF(q).
    pub count: u32,
    /// `s2 + s1^2`, equal to `u^d (1+u)^(2d) / (1+u^(3d))^2`.
    pub delta2: FieldElem,
    /// `s3 + s1 s2`, equal to `(u^(2^i) + u) / (1+u^(3d))^2`.
    pub delta3: FieldElem,
    /// `(s2 + s1^2)^3 / (s3 + s1 s2)^2`.
    pub a: FieldElem,
    /// `W = U (V+1)^2 / ((U+V)(UV+1))` with `U = u`, `V = u^(2^i)`; `A = W^2 + W`.
    pub w: FieldElem,
}

/// Expands `(u^d x + (1+u)^d)^3 + x^3 + 1`, divides by `1 + u^(3d)` and
/// counts roots. Needs `n` odd, `gcd(i, n) = 1` and `u` outside GF(2).
pub fn kasami_unique_root(ctx: &FieldCtx, i: u32, u: FieldElem) -> Result<KasamiCubic> {
    let n = ctx.n();
    require(n % 2 == 1, || format!("n must be odd, got {n}"))?;
    require(i >= 1 && gcd(i as u64, n as u64) == 1, || format!("gcd({i}, {n}) != 1"))?;
    require(!u.in_prime_field(), || format!("u = {u} lies in GF(2)"))?;
    let d = ctx.exponent_u128((ctx.exp_inverse(3)?.value() as u128) * ((1u128 << (i % n)) + 1));
    let one = FieldElem::ONE;
    let ud = ctx.pow_exp(u, d);
    let vd = ctx.pow_exp(u + one, d);
    let lead = one + ctx.mul(ctx.square(ud), ud);
    let s1 = ctx.div(ctx.mul(ctx.square(ud), vd), lead)?;
    let s2 = ctx.div(ctx.mul(ud, ctx.square(vd)), lead)?;
    let s3 = ctx.div(ctx.mul(ctx.square(vd), vd) + one, lead)?;
    let cubic = CubicCoeffs::new(s1, s2, s3);
    let delta2 = cubic.delta2(ctx);
    let delta3 = cubic.delta3(ctx);
    let a = ctx.div(ctx.mul(ctx.square(delta2), delta2), ctx.square(delta3))?;
    let (uu, vv) = (u, ctx.frobenius(u, i));
    let w = ctx.div(
        ctx.mul(uu, ctx.square(vv + one)),
        ctx.mul(uu + vv, ctx.mul(uu, vv) + one),
    )?;
    Ok(KasamiCubic {
        d,
        cubic,
        count: cubic_root_count(ctx, &cubic),
        delta2,
        delta3,
        a,
        w,
    })
}

/// `d = 1/s mod q-1` for the Kasami exponent `s = 2^(2i) - 2^i + 1`.
pub fn unique_root_exponent(ctx: &FieldCtx, i: u32) -> Result<Exponent> {
    let s = apn_exponent(Family::Kasami, ctx.n(), Some(i))?;
    Ok(ctx.exponent(exp_inverse(s % ctx.order() as u64, ctx.order() as u64)? as i64))
}

/// Roots of `(u^d x + (1+u)^d)^(2^i+1) + x^(2^i+1) + 1` where `d` is the
/// inverse of the Kasami exponent for `i`. Needs `u` outside GF(2).
pub fn unique_root_count(ctx: &FieldCtx, i: u32, d: Exponent, u: FieldElem) -> Result<u32> {
    require(!u.in_prime_field(), || format!("u = {u} lies in GF(2)"))?;
    let t = ctx.exponent_u128((1u128 << i) + 1);
    let table = ctx.power_table(t);
    let ud = ctx.pow_exp(u, d);
    let vd = ctx.pow_exp(u + FieldElem::ONE, d);
    Ok(ctx
        .elements()
        .filter(|&x| {
            let y = ctx.mul(ud, x) + vd;
            (table[y.index()] + table[x.index()] + FieldElem::ONE).is_zero()
        })
        .count() as u32)
}

/// Per-`u` root counts of the equation in [`unique_root_count`].
pub fn unique_root_profile(ctx: &FieldCtx, i: u32) -> Result<Vec<(FieldElem, u32)>> {
    let d = unique_root_exponent(ctx, i)?;
    ctx.non_prime_elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|u| unique_root_count(ctx, i, d, u).map(|c| (u, c)))
        .collect()
}

/// `i' = 1/i mod n`.
pub fn inverse_index(n: u32, i: u32) -> Result<u32> {
    require(n >= 2 && !i.is_multiple_of(n) && gcd(i as u64, n as u64) == 1, || {
        format!("gcd({i}, {n}) != 1")
    })?;
    Ok(exp_inverse((i % n) as u64, n as u64)? as u32)
}

/// `x^(2^a - 2^b)` for `a > b` as integers; zero at `x = 0`.
fn pow2_diff(ctx: &FieldCtx, x: FieldElem, a: u32, b: u32) -> FieldElem {
    if x.is_zero() {
        return x;
    }
    let n = ctx.n();
    ctx.div(ctx.frobenius(x, a % n), ctx.frobenius(x, b % n)).unwrap()
}

/// The `i'`-th terms `(A_j(x), B_j(x))` for `j = 1..=i'` by the two-term
/// recursions `A_{j+2} = x^(2^(i(j+1))) A_{j+1} + x^(2^(i(j+1)) - 2^(ij)) A_j`
/// and the same recursion for `B` on `B`.
pub fn dobbertin_sequences(ctx: &FieldCtx, i: u32, x: FieldElem, terms: u32) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let n = ctx.n();
    let mut a = vec![x, ctx.mul(ctx.frobenius(x, i % n), x)];
    let mut b = vec![FieldElem::ZERO, pow2_diff(ctx, x, i, 0)];
    for j in 1..terms.saturating_sub(1) {
        let hi = i * (j + 1);
        let lo = i * j;
        let f = ctx.frobenius(x, hi % n);
        let g = pow2_diff(ctx, x, hi, lo);
        let j = j as usize;
        a.push(ctx.mul(f, a[j]) + ctx.mul(g, a[j - 1]));
        b.push(ctx.mul(f, b[j]) + ctx.mul(g, b[j - 1]));
    }
    a.truncate(terms as usize);
    b.truncate(terms as usize);
    (a, b)
}

/// `R = A_1 + ... + A_{i'} + B_{i'}` through the recursions, for any `i'`.
pub fn dobbertin_r_recursive(ctx: &FieldCtx, i: u32, x: FieldElem) -> Result<FieldElem> {
    let ip = inverse_index(ctx.n(), i)?;
    let (a, b) = dobbertin_sequences(ctx, i, x, ip);
    Ok(a.iter().fold(b[ip as usize - 1], |acc, &t| acc + t))
}

/// Closed forms for `i' = 1, 2, 3`; `None` for larger `i'`.
pub fn dobbertin_r_closed(ctx: &FieldCtx, i: u32, x: FieldElem) -> Result<Option<FieldElem>> {
    let n = ctx.n();
    let ip = inverse_index(n, i)?;
    let fr = |k: u32| ctx.frobenius(x, k % n);
    // x^(2^i + 1), x^(2^i - 1)
    let gold = ctx.mul(fr(i), x);
    let low = pow2_diff(ctx, x, i, 0);
    Ok(match ip {
        1 => Some(x),
        2 => Some(gold + low + x),
        3 => {
            let big = fr(2 * i);
            let t1 = ctx.mul(big, gold);
            let t2 = ctx.mul(big, low);
            // x^(2^(2i) - 2^i + 1)
            let t3 = ctx.mul(pow2_diff(ctx, x, 2 * i, i), x);
            Some(t1 + t2 + t3 + gold + x)
        }
        _ => None,
    })
}

/// `R_{n,i}(x)`: closed forms for `i' <= 3`, the recursion otherwise.
pub fn dobbertin_r(ctx: &FieldCtx, i: u32, x: FieldElem) -> Result<FieldElem> {
    match dobbertin_r_closed(ctx, i, x)? {
        Some(r) => Ok(r),
        None => dobbertin_r_recursive(ctx, i, x),
    }
}

fn pa_check(ctx: &FieldCtx, i: u32, a: FieldElem) -> Result<()> {
    let n = ctx.n();
    require(!a.is_zero(), || "P_a needs a != 0".into())?;
    require(i >= 1 && i < n && gcd(i as u64, n as u64) == 1, || {
        format!("P_a needs 1 <= i < n with gcd(i, n) = 1, got i = {i}, n = {n}")
    })
}

/// Zeros of `P_a(x) = x^(2^i+1) + x + a`, by full scan.
pub fn pa_root_count(ctx: &FieldCtx, i: u32, a: FieldElem) -> Result<u32> {
    pa_check(ctx, i, a)?;
    Ok(ctx
        .elements()
        .filter(|&x| (ctx.mul(ctx.frobenius(x, i), x) + x + a).is_zero())
        .count() as u32)
}

/// `Tr(R_{n,i}(1/a) + 1) = 1`, which predicts exactly one zero of `P_a`.
pub fn pa_trace_criterion(ctx: &FieldCtx, i: u32, a: FieldElem) -> Result<bool> {
    pa_check(ctx, i, a)?;
    let r = dobbertin_r(ctx, i, ctx.inv(a)?)?;
    Ok(ctx.trace(r + FieldElem::ONE) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u32) -> FieldCtx {
        FieldCtx::new(n).unwrap()
    }

    #[test]
    fn trivial_cubics() {
        let f2 = f(2);
        let z = FieldElem::ZERO;
        assert_eq!(cubic_root_count(&f2, &CubicCoeffs::new(z, z, z)), 1);
        let f8 = f(3);
        let one = FieldElem::ONE;
        // x^3 + x + 1 splits over GF(8) since GF(8) = GF(2)[x]/(x^3+x+1)
        let c = CubicCoeffs::new(z, one, one);
        assert_eq!(cubic_root_count(&f8, &c), 3);
        assert!(!cubic_unique_criterion(&f8, &c).unwrap());
        assert!(cubic_unique_criterion(&f8, &CubicCoeffs::new(one, one, z)).is_err());
        assert!(cubic_unique_criterion(&f8, &CubicCoeffs::new(z, one, z)).is_err());
    }

    #[test]
    fn cubic_criterion_exhaustive_gf8() {
        let ctx = f(3);
        for s1 in ctx.elements() {
            for s2 in ctx.elements() {
                for s3 in ctx.elements() {
                    let c = CubicCoeffs::new(s1, s2, s3);
                    if let Ok(crit) = cubic_unique_criterion(&ctx, &c) {
                        assert_eq!(crit, cubic_root_count(&ctx, &c) == 1, "{c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn kasami_cubic_identities() {
        for (n, i) in [(5, 1), (5, 2), (7, 3)] {
            let ctx = f(n);
            for u in ctx.non_prime_elements() {
                let k = kasami_unique_root(&ctx, i, u).unwrap();
                assert_eq!(k.count, 1);
                let one = FieldElem::ONE;
                let ud = ctx.pow_exp(u, k.d);
                let lead = one + ctx.pow_exp(ud, ctx.exponent(3));
                let l2 = ctx.square(lead);
                let expected2 = ctx.div(ctx.mul(ud, ctx.square(ctx.pow_exp(u + one, k.d))), l2).unwrap();
                assert_eq!(k.delta2, expected2);
                assert_eq!(k.delta3, ctx.div(ctx.frobenius(u, i) + u, l2).unwrap());
                assert_eq!(k.a, ctx.square(k.w) + k.w);
                assert!(cubic_unique_criterion(&ctx, &k.cubic).unwrap());
            }
        }
        let ctx = f(5);
        assert!(kasami_unique_root(&ctx, 1, FieldElem::ONE).is_err());
        assert!(kasami_unique_root(&ctx, 5, FieldElem::from_bits(2)).is_err());
        assert!(kasami_unique_root(&f(4), 1, FieldElem::from_bits(2)).is_err());
    }

    #[test]
    fn inverse_indices() {
        assert_eq!(inverse_index(5, 2).unwrap(), 3);
        assert_eq!(inverse_index(7, 2).unwrap(), 4);
        assert_eq!(inverse_index(7, 1).unwrap(), 1);
        assert!(inverse_index(6, 2).is_err());
    }

    #[test]
    fn dobbertin_closed_forms_match_recursion() {
        for n in [5u32, 7, 8, 9] {
            let ctx = f(n);
            for i in 1..n {
                if gcd(i as u64, n as u64) != 1 || inverse_index(n, i).unwrap() > 3 {
                    continue;
                }
                for x in ctx.elements() {
                    assert_eq!(
                        dobbertin_r_closed(&ctx, i, x).unwrap().unwrap(),
                        dobbertin_r_recursive(&ctx, i, x).unwrap(),
                        "n={n} i={i} x={x}"
                    );
                }
            }
        }
        let ctx = f(7);
        for x in ctx.elements() {
            assert_eq!(dobbertin_r(&ctx, 1, x).unwrap(), x);
        }
    }

    #[test]
    fn pa_counts_and_criterion() {
        for n in [5u32, 7] {
            let ctx = f(n);
            for i in 1..n {
                if gcd(i as u64, n as u64) != 1 {
                    continue;
                }
                let mut total = 0;
                for a in ctx.elements().skip(1) {
                    let c = pa_root_count(&ctx, i, a).unwrap();
                    assert!(matches!(c, 0 | 1 | 3), "n={n} i={i} a={a} count={c}");
                    assert_eq!(c == 1, pa_trace_criterion(&ctx, i, a).unwrap(), "n={n} i={i} a={a}");
                    total += c;
                }
                let hit = ctx.elements().filter(|&x| !(ctx.mul(ctx.frobenius(x, i), x) + x).is_zero()).count();
                assert_eq!(total as usize, hit);
            }
        }
        assert!(pa_root_count(&f(5), 1, FieldElem::ZERO).is_err());
        assert!(pa_root_count(&f(5), 5, FieldElem::ONE).is_err());
    }

    #[test]
    fn unique_root_small() {
        let ctx = f(5);
        assert!(unique_root_profile(&ctx, 2).unwrap().iter().all(|&(_, c)| c == 1));
        assert_eq!(unique_root_profile(&ctx, 2).unwrap().len(), 30);
    }
}
