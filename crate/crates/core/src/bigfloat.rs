//! Software binary floating point over `BigInt` mantissas, plus complex
//! arithmetic on top of it.
//!
//! A value is `mant * 2^exp`. Every operation takes a working precision in
//! bits and truncates the result mantissa to that many bits, so relative
//! error per operation is below `2^(1-prec)`. That is all the root
//! refinement, embedding evaluation and rationalization steps need; they
//! always keep generous guard bits and finish with an exact check.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        BigFloat { mant: BigInt::from(1), exp: 0 }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        BigFloat { mant: n.clone(), exp: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        BigFloat { mant: BigInt::from(n), exp: 0 }
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 requires finite input");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        BigFloat { mant: BigInt::from(sign * mant as i64), exp }
    }

    /// Round a rational to `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let num_bits = r.numer().bits() as i64;
        let den_bits = r.denom().bits() as i64;
        // Scale so the quotient carries prec + 16 significant bits.
        let shift = prec as i64 + 16 - (num_bits - den_bits);
        let mant = if shift >= 0 {
            (r.numer() << shift as u64) / r.denom()
        } else {
            (r.numer() >> (-shift) as u64) / r.denom()
        };
        BigFloat { mant, exp: -shift }.normalized(prec)
    }

    /// The exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::from(1) << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 53).max(0);
        let top = (&self.mant >> shift as u64).to_f64().unwrap();
        let e = self.exp + shift;
        if e > 2000 {
            return if top > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2200 {
            return 0.0;
        }
        // Split the power-of-two scaling so neither factor under/overflows.
        let e1 = (e / 2) as i32;
        let e2 = (e - e / 2) as i32;
        top * 2f64.powi(e1) * 2f64.powi(e2)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    fn normalized(mut self, prec: u32) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let bits = self.mant.bits() as i64;
        let excess = bits - prec as i64;
        if excess > 0 {
            self.mant >>= excess as u64;
            self.exp += excess;
        }
        self
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return other.clone().normalized(prec);
        }
        if other.is_zero() {
            return self.clone().normalized(prec);
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let diff = hi.exp - lo.exp;
        // If the exponents are too far apart the small term is below one ulp.
        if diff > prec as i64 + 8 + (hi.mant.bits() as i64 - lo.mant.bits() as i64).abs() {
            let hi_bits = hi.mant.bits() as i64 + hi.exp;
            let lo_bits = lo.mant.bits() as i64 + lo.exp;
            if hi_bits - lo_bits > prec as i64 + 8 {
                return hi.clone().normalized(prec);
            }
        }
        let mant = (&hi.mant << diff as u64) + &lo.mant;
        BigFloat { mant, exp: lo.exp }.normalized(prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        BigFloat { mant: &self.mant * &other.mant, exp: self.exp + other.exp }.normalized(prec)
    }

    pub fn mul_i64(&self, k: i64, prec: u32) -> Self {
        BigFloat { mant: &self.mant * k, exp: self.exp }.normalized(prec)
    }

    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let scale = prec as i64 + 16 + (other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let mant = (&self.mant << scale as u64) / &other.mant;
        BigFloat { mant, exp: self.exp - other.exp - scale }.normalized(prec)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(!self.is_negative(), "BigFloat sqrt of negative value");
        if self.is_zero() {
            return Self::zero();
        }
        // Scale mantissa to ~2*(prec+16) bits with even exponent, then isqrt.
        let target = 2 * (prec as i64 + 16);
        let bits = self.mant.bits() as i64;
        let mut shift = (target - bits).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.mant << shift as u64;
        let root = scaled.sqrt();
        BigFloat { mant: root, exp: (self.exp - shift) / 2 }.normalized(prec)
    }

    /// Multiply by 2^k exactly.
    pub fn scale2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Nearest integer (ties toward +infinity; exactness is never relied on at ties).
    pub fn round_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as u64;
        }
        let shift = (-self.exp) as u64;
        let half = BigInt::from(1) << (shift - 1);
        (&self.mant + half) >> shift
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    pub fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (Sign::Minus, Sign::Plus) | (Sign::Minus, Sign::NoSign) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less
            }
            (Sign::Plus, Sign::Minus) | (Sign::NoSign, Sign::Minus) | (Sign::Plus, Sign::NoSign) => {
                return Ordering::Greater
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes via bit lengths, then exactly.
        let la = self.mant.bits() as i64 + self.exp;
        let lb = other.mant.bits() as i64 + other.exp;
        let negative = self.mant.is_negative();
        if la != lb {
            let ord = la.cmp(&lb);
            return if negative { ord.reverse() } else { ord };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }

    /// log2 of |x|, approximate; (-inf for 0 is mapped to i64::MIN).
    pub fn log2_approx(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        self.mant.bits() as i64 + self.exp
    }
}

/// Complex number with `BigFloat` components.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero() -> Self {
        BigComplex { re: BigFloat::zero(), im: BigFloat::zero() }
    }

    pub fn one() -> Self {
        BigComplex { re: BigFloat::one(), im: BigFloat::zero() }
    }

    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        BigComplex { re: BigFloat::from_f64(re), im: BigFloat::from_f64(im) }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        BigComplex { re: BigFloat::from_bigint(n), im: BigFloat::zero() }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_rational(r, prec), im: BigFloat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        BigComplex { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        BigComplex { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        BigComplex { re, im }
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        let den = o.norm_sqr(prec);
        assert!(!den.is_zero(), "BigComplex division by zero");
        let num = self.mul(&o.conj(), prec);
        BigComplex { re: num.re.div(&den, prec), im: num.im.div(&den, prec) }
    }

    pub fn norm_sqr(&self, prec: u32) -> BigFloat {
        self.re.mul(&self.re, prec).add(&self.im.mul(&self.im, prec), prec)
    }

    pub fn abs(&self, prec: u32) -> BigFloat {
        self.norm_sqr(prec).sqrt(prec)
    }

    pub fn scale(&self, s: &BigFloat, prec: u32) -> Self {
        BigComplex { re: self.re.mul(s, prec), im: self.im.mul(s, prec) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn pow_usize(&self, mut e: usize, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }
}

/// Best rational approximation with denominator at most `max_den`, via the
/// continued fraction of `x`. Returns convergents of the exact dyadic value.
pub fn rational_reconstruct(x: &BigRational, max_den: &BigInt) -> BigRational {
    let mut a = x.numer().clone();
    let mut b = x.denom().clone();
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::zero());
    let (mut p1, mut q1) = (a.div_floor(&b), BigInt::from(1));
    let mut r = &a - &p1 * &b;
    std::mem::swap(&mut a, &mut b);
    b = r;
    while !b.is_zero() {
        let q = a.div_floor(&b);
        r = &a - &q * &b;
        let p2 = &q * &p1 + &p0;
        let q2 = &q * &q1 + &q0;
        if &q2 > max_den {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        a = std::mem::replace(&mut b, r);
    }
    BigRational::new(p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 128;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn roundtrip_f64() {
        for &x in &[0.0, 1.0, -1.5, 3.141592653589793, 1e-300, -2.2e105] {
            assert_eq!(BigFloat::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn sqrt_matches_f64() {
        for &x in &[2.0, 3.0, 10.0, 1e10, 0.015625] {
            let s = BigFloat::from_f64(x).sqrt(P).to_f64();
            assert!(close(s, x.sqrt()), "{s} vs {}", x.sqrt());
        }
    }

    #[test]
    fn rational_roundtrip() {
        let r = BigRational::new(BigInt::from(-355), BigInt::from(113));
        let f = BigFloat::from_rational(&r, 200);
        let back = rational_reconstruct(&f.to_rational(), &BigInt::from(1000));
        assert_eq!(back, r);
    }

    #[test]
    fn complex_division() {
        let a = BigComplex::from_f64(3.0, 4.0);
        let b = BigComplex::from_f64(1.0, -2.0);
        let q = a.div(&b, P);
        let (re, im) = q.to_f64();
        // (3+4i)/(1-2i) = (-1 + 2i)
        assert!(close(re, -1.0) && close(im, 2.0), "{re} {im}");
    }

    proptest! {
        #[test]
        fn ops_match_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            prop_assume!(b.abs() > 1e-3);
            let (fa, fb) = (BigFloat::from_f64(a), BigFloat::from_f64(b));
            prop_assert!(close(fa.add(&fb, P).to_f64(), a + b));
            prop_assert!(close(fa.mul(&fb, P).to_f64(), a * b));
            prop_assert!(close(fa.div(&fb, P).to_f64(), a / b));
            prop_assert!(close(fa.sub(&fb, P).to_f64(), a - b));
        }

        #[test]
        fn cmp_matches_f64(a in -1e9f64..1e9, b in -1e9f64..1e9) {
            let (fa, fb) = (BigFloat::from_f64(a), BigFloat::from_f64(b));
            prop_assert_eq!(fa.cmp(&fb), a.partial_cmp(&b).unwrap());
        }
    }
}
