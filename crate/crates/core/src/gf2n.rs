//! Arithmetic in GF(2^n) for 2 <= n <= 16.
//!
//! Elements are polynomial-basis coefficient vectors packed into a `u32`
//! (bit `j` is the coefficient of `x^j`). Multiplication is a carry-less
//! product followed by reduction modulo the field polynomial; powers and
//! inverses go through discrete log tables built once per context.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// Lexicographically smallest irreducible polynomial of each degree
/// 2..=16, leading bit included. Index `n - 2`.
pub const DEFAULT_MODULI: [u32; 15] = [
    0x7,     // x^2 + x + 1
    0xb,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11b,   // x^8 + x^4 + x^3 + x + 1
    0x203,   // x^9 + x + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1009,  // x^12 + x^3 + 1
    0x201b,  // x^13 + x^4 + x^3 + x + 1
    0x4021,  // x^14 + x^5 + 1
    0x8003,  // x^15 + x + 1
    0x1002b, // x^16 + x^5 + x^3 + x + 1
];

/// An element of GF(2^n), stored as its polynomial-basis bit vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps raw bits without range checking; use [`FieldCtx::elem`] for
    /// untrusted input.
    #[inline]
    pub const fn from_bits(bits: u32) -> Self {
        FieldElem(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// True for 0 and 1, the elements of the prime subfield.
    #[inline]
    pub const fn in_prime_field(self) -> bool {
        self.0 <= 1
    }

    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    pub fn parse_hex(s: &str) -> Result<FieldElem> {
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        u32::from_str_radix(digits, 16)
            .map(FieldElem)
            .map_err(|e| Error::Parse(format!("bad field element {s:?}: {e}")))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

// addition in characteristic 2 is xor
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for FieldElem {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElem) {
        self.0 ^= rhs.0;
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FieldElem::parse_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// An exponent of a power map, reduced modulo `q - 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(u32);

impl Exponent {
    #[inline]
    pub const fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

struct Tables {
    n: u32,
    modulus: u32,
    q: u32,
    trace_mask: u32,
    generator: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// The field GF(2^n). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldCtx(Arc<Tables>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n && self.0.modulus == other.0.modulus
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.0.n, self.0.modulus)
    }
}

/// Carry-less product of two polynomials over GF(2).
#[inline]
pub fn clmul(a: u32, b: u32) -> u64 {
    let a = a as u64;
    let mut b = b;
    let mut r = 0u64;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    r
}

/// Remainder of `a` modulo the nonzero polynomial `m` over GF(2).
pub fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= dm {
        a ^= m << (63 - a.leading_zeros() - dm);
    }
    a
}

/// Exhaustive factor test: `poly` has no factor of degree 1..=deg/2.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let deg = 31 - poly.leading_zeros();
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for f in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(poly as u64, f as u64) == 0 {
                return false;
            }
        }
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `e` modulo `m` by the extended Euclidean algorithm.
pub fn exp_inverse(e: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::pre("modulus must be positive"));
    }
    if m == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (m as i128, (e % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NoInverse {
            e,
            m,
            gcd: r0 as u64,
        });
    }
    Ok(t0.rem_euclid(m as i128) as u64)
}

impl FieldCtx {
    /// GF(2^n) with the default modulus from [`DEFAULT_MODULI`].
    pub fn new(n: u32) -> Result<FieldCtx> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        Self::with_modulus(n, DEFAULT_MODULI[(n - MIN_DEGREE) as usize])
    }

    pub fn with_modulus(n: u32, modulus: u32) -> Result<FieldCtx> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        if modulus < 2 || 31 - modulus.leading_zeros() != n || !is_irreducible(modulus) {
            return Err(Error::NotIrreducible { n, modulus });
        }
        let q = 1u32 << n;
        let reduce = |v: u64| poly_rem(v, modulus as u64) as u32;

        let mut trace_mask = 0u32;
        for j in 0..n {
            let mut t = 1u32 << j;
            let mut acc = t;
            for _ in 1..n {
                t = reduce(clmul(t, t));
                acc ^= t;
            }
            debug_assert!(acc <= 1);
            trace_mask |= acc << j;
        }

        // the default modulus need not be primitive, so search a generator
        let order = q - 1;
        let mut exp = vec![0u16; order as usize];
        let mut log = vec![0u16; q as usize];
        let mut generator = 0;
        'search: for g in 2..q.max(3) {
            let mut x = 1u32;
            for k in 0..order {
                if k > 0 && x == 1 {
                    continue 'search;
                }
                exp[k as usize] = x as u16;
                x = reduce(clmul(x, g));
            }
            if x == 1 {
                generator = g;
                break;
            }
        }
        if n >= 2 && generator == 0 {
            // GF(4) and up always have a generator among 2..q
            unreachable!("no generator found for modulus {modulus:#x}");
        }
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u16;
        }
        Ok(FieldCtx(Arc::new(Tables {
            n,
            modulus,
            q,
            trace_mask,
            generator,
            exp,
            log,
        })))
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.0.n
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Size of the multiplicative group, `q - 1`.
    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q - 1
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.0.q as usize
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.0.modulus
    }

    pub fn generator(&self) -> FieldElem {
        FieldElem(self.0.generator)
    }

    pub fn elem(&self, bits: u32) -> Result<FieldElem> {
        if bits < self.0.q {
            Ok(FieldElem(bits))
        } else {
            Err(Error::ElementOutOfRange {
                n: self.0.n,
                value: bits,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.0.q).map(FieldElem)
    }

    /// Elements outside GF(2), the admissible `u` of the design criteria.
    pub fn non_prime_elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (2..self.0.q).map(FieldElem)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let n = self.0.n;
        let mut r = clmul(a.0, b.0);
        let m = self.0.modulus as u64;
        let mut top = 2 * n - 2;
        while top >= n {
            if (r >> top) & 1 == 1 {
                r ^= m << (top - n);
            }
            top -= 1;
        }
        FieldElem(r as u32)
    }

    /// Table-driven product; agrees with [`mul`](Self::mul).
    #[inline]
    pub fn mul_log(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = &self.0;
        let s = t.log[a.index()] as u32 + t.log[b.index()] as u32;
        let s = if s >= t.q - 1 { s - (t.q - 1) } else { s };
        FieldElem(t.exp[s as usize] as u32)
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// `a^(2^k)`.
    pub fn frobenius(&self, a: FieldElem, k: u32) -> FieldElem {
        let mut x = a;
        for _ in 0..(k % self.0.n) {
            x = self.square(x);
        }
        x
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let t = &self.0;
        let l = t.log[a.index()] as u32;
        Ok(FieldElem(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize] as u32))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul_log(a, self.inv(b)?))
    }

    /// `a^e`; `e` is reduced modulo `q - 1` when `a != 0`. `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem> {
        if a.is_zero() {
            return match e {
                0 => Ok(FieldElem::ONE),
                e if e > 0 => Ok(FieldElem::ZERO),
                _ => Err(Error::ZeroNegativePower),
            };
        }
        Ok(self.pow_nonzero(a, e.rem_euclid(self.order() as i64) as u32))
    }

    /// `a^e` for a reduced exponent. `0^0 = 1`, `0^e = 0` otherwise.
    #[inline]
    pub fn pow_exp(&self, a: FieldElem, e: Exponent) -> FieldElem {
        if a.is_zero() {
            return if e.0 == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        self.pow_nonzero(a, e.0)
    }

    #[inline]
    fn pow_nonzero(&self, a: FieldElem, e: u32) -> FieldElem {
        let t = &self.0;
        let l = t.log[a.index()] as u64 * e as u64 % (t.q as u64 - 1);
        FieldElem(t.exp[l as usize] as u32)
    }

    /// Absolute trace to GF(2).
    #[inline]
    pub fn trace(&self, a: FieldElem) -> u8 {
        ((a.0 & self.0.trace_mask).count_ones() & 1) as u8
    }

    /// Bit mask `m` with `Tr(a) = parity(a & m)`.
    pub fn trace_mask(&self) -> u32 {
        self.0.trace_mask
    }

    /// Reduces an integer exponent modulo `q - 1`.
    pub fn exponent(&self, e: i64) -> Exponent {
        Exponent(e.rem_euclid(self.order() as i64) as u32)
    }

    /// Same as [`exponent`](Self::exponent) for exponents beyond `i64`.
    pub fn exponent_u128(&self, e: u128) -> Exponent {
        Exponent((e % self.order() as u128) as u32)
    }

    /// `1/e` modulo `q - 1`.
    pub fn exp_inverse(&self, e: i64) -> Result<Exponent> {
        let m = self.order() as u64;
        let r = e.rem_euclid(m as i64) as u64;
        exp_inverse(r, m).map(|d| Exponent(d as u32))
    }

    /// Table of `x^e` for every `x`, indexed by element bits.
    pub fn power_table(&self, e: Exponent) -> Vec<FieldElem> {
        self.elements().map(|x| self.pow_exp(x, e)).collect()
    }

    /// Table of `a * x` for every `x`.
    pub fn scale_table(&self, a: FieldElem) -> Vec<FieldElem> {
        self.elements().map(|x| self.mul_log(a, x)).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CtxRepr {
    n: u32,
    modulus: String,
}

impl Serialize for FieldCtx {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CtxRepr {
            n: self.n(),
            modulus: format!("{:#x}", self.modulus()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldCtx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CtxRepr::deserialize(d)?;
        let m = FieldElem::parse_hex(&r.modulus).map_err(serde::de::Error::custom)?;
        FieldCtx::with_modulus(r.n, m.bits()).map_err(serde::de::Error::custom)
    }
}
