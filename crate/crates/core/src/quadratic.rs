//! Degree-2 machinery: fundamental discriminants, Gauss reduction of
//! positive definite forms, Heegner points, exact P1-heights of quadratic
//! fields, and the height-counting harness behind N_2(Ht < X) ~ 27/pi^2 X^2.
//!
//! The counting loop never enumerates forms: a fundamental d is counted at
//! threshold X iff some (a,b,c) with max(|a|,|b|,|c|) <= X has
//! b^2 - 4ac = d m^2, which reduces to membership of (b^2 - d m^2)/4 in the
//! set of products of two factors <= X (one bitmap, shared by all d).

use crate::{Error, Int, Result};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// Squarefree flags for 1..=n (index 0 unused).
pub fn squarefree_sieve(n: usize) -> Vec<bool> {
    let mut sf = vec![true; n + 1];
    if n >= 1 {
        sf[0] = false;
    }
    let mut p = 2usize;
    while p * p <= n {
        let q = p * p;
        let mut k = q;
        while k <= n {
            sf[k] = false;
            k += q;
        }
        p += 1;
    }
    sf
}

/// Fundamental discriminant test: d = 1 mod 4 squarefree, or d = 4D with D
/// squarefree and D = 2,3 mod 4. Excludes 0 and 1.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        return is_squarefree_i64(d);
    }
    if m == 0 {
        let q = d / 4;
        let qm = q.rem_euclid(4);
        return (qm == 2 || qm == 3) && is_squarefree_i64(q);
    }
    false
}

fn is_squarefree_i64(d: i64) -> bool {
    let n = d.unsigned_abs() as u128;
    if n == 0 {
        return false;
    }
    crate::factor::factor_u128(n).iter().all(|&(_, e)| e == 1)
}

/// Integer binary quadratic form a x^2 + b xy + c y^2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a: Int::from(a), b: Int::from(b), c: Int::from(c) }
    }

    pub fn disc(&self) -> Int {
        &self.b * &self.b - Int::from(4) * &self.a * &self.c
    }

    /// Reduction conditions for positive definite forms:
    /// |b| <= a <= c, and b >= 0 when |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        let babs = self.b.abs();
        if !(babs <= self.a && self.a <= self.c) {
            return false;
        }
        if (babs == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// Gauss reduction; requires disc < 0 and a > 0.
    pub fn reduce(&self) -> Result<QuadForm> {
        if !self.disc().is_negative() {
            return Err(Error::Unsupported("reduction implemented for definite forms only"));
        }
        if !self.a.is_positive() {
            return Err(Error::Invalid("definite reduction requires a > 0".into()));
        }
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        loop {
            // translate b into (-a, a]
            if &b > &a || b <= -&a {
                // k = round((a - b) / (2a)) such that b + 2ka in (-a, a]
                let two_a = Int::from(2) * &a;
                let k = (&a - &b).div_floor(&two_a);
                let nb = &b + Int::from(2) * &k * &a;
                let nc = &a * &k * &k + &b * &k + &c;
                b = nb;
                c = nc;
            }
            if a > c {
                let (na, nb, nc) = (c.clone(), -&b, a.clone());
                a = na;
                b = nb;
                c = nc;
                continue;
            }
            // boundary normalization
            if (b.abs() == a || a == c) && b.is_negative() {
                if -&b == a {
                    // translate by 1: b -> b + 2a = a, c unchanged
                    c = &a + &b + &c;
                    b = a.clone();
                } else {
                    // a == c: swap-negate fixes the sign
                    b = -b;
                }
                continue;
            }
            break;
        }
        Ok(QuadForm { a, b, c })
    }

    /// Heegner point (-b + sqrt(d)) / (2a) as (re, im) in f64; disc < 0.
    pub fn heegner_point(&self) -> Result<(f64, f64)> {
        let d = self.disc();
        if !d.is_negative() {
            return Err(Error::Unsupported("Heegner points require negative discriminant"));
        }
        let a = self.a.to_f64().unwrap();
        let b = self.b.to_f64().unwrap();
        let dd = d.to_f64().unwrap();
        Ok((-b / (2.0 * a), (-dd).sqrt() / (2.0 * a)))
    }

    /// Exact membership of the Heegner point in the fundamental domain
    /// re in [-1/2, 1/2), |z| > 1, or |z| = 1 with re <= 0; expressed in
    /// the form data: re = -b/2a, |z|^2 = c/a.
    pub fn point_in_fundamental_domain(&self) -> Result<bool> {
        if !self.disc().is_negative() || !self.a.is_positive() {
            return Err(Error::Unsupported("fundamental-domain test requires definite a > 0"));
        }
        // -1/2 <= -b/2a < 1/2  <=>  -a < b <= a
        let re_ok = -&self.a < self.b && self.b <= self.a;
        if !re_ok {
            return Ok(false);
        }
        if self.c > self.a {
            return Ok(true);
        }
        if self.c == self.a {
            // |z| = 1: need re <= 0, i.e. b >= 0
            return Ok(!self.b.is_negative());
        }
        Ok(false)
    }
}

/// All reduced forms of a negative discriminant (primitive ones counted by
/// h(d) when d is fundamental; imprimitive forms are excluded).
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    if d >= 0 {
        return Err(Error::Unsupported("reduced_forms requires d < 0"));
    }
    if d.rem_euclid(4) > 1 {
        return Err(Error::Invalid(format!("{d} is not a discriminant")));
    }
    let mut out = Vec::new();
    let abs_d = d.unsigned_abs() as i64;
    let mut a = 1i64;
    while 3 * a * a <= abs_d {
        let mut b = -a + 1;
        while b <= a {
            let num = (b * b - d) as i64;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a {
                    let q = QuadForm::new(a, b, c);
                    if q.is_reduced() && gcd3(a, b, c) == 1 {
                        out.push(q);
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort_by_key(|q| {
        (q.a.to_i64().unwrap(), q.b.to_i64().unwrap(), q.c.to_i64().unwrap())
    });
    Ok(out)
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// Kronecker symbol (a|n).
pub fn kronecker(mut a: i64, mut n: i64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // strip twos from n
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0, // a even
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Exact P1-height of the quadratic field of fundamental discriminant d:
/// the minimum of max(|a|,|b|,|c|) over integer forms with b^2-4ac = d m^2.
///
/// Search: candidates are max(b, |P|/a) where P = (b^2 - d m^2)/4 and a is
/// the largest divisor of |P| at most sqrt(|P|); both b and m are capped by
/// the best height found so far, seeded with the principal form.
pub fn field_height(d: i64) -> Result<u64> {
    if !is_fundamental(d) {
        return Err(Error::Invalid(format!("{d} is not a fundamental discriminant")));
    }
    // Principal form: a = 1, b = d mod 2, c = (b^2 - d)/4.
    let b0 = d.rem_euclid(2);
    let c0 = (b0 * b0 - d) / 4;
    let mut best = 1u64.max(b0.unsigned_abs()).max(c0.unsigned_abs());
    let abs_d = d.unsigned_abs();

    let mut m = 1u64;
    loop {
        let dm2 = match (m * m).checked_mul(abs_d) {
            Some(v) => v as i128,
            None => break,
        };
        // Lemma lower bounds per sign: height >= sqrt(|d| m^2 / 4) (d < 0)
        // or sqrt(d m^2 / 5) (d > 0); stop the m loop once past best.
        let lb2 = if d < 0 { dm2 / 4 } else { dm2 / 5 };
        if lb2 > (best as i128) * (best as i128) {
            break;
        }
        let dd = if d < 0 { -dm2 } else { dm2 };
        let parity = (dd.rem_euclid(2)) as u64;
        let mut b = parity as i128;
        while b <= best as i128 {
            let p4 = b * b - dd;
            debug_assert!(p4.rem_euclid(4) == 0);
            let p = p4 / 4;
            if p != 0 {
                let pa = p.unsigned_abs();
                // best a: largest divisor <= sqrt(pa); candidate height
                // max(b, pa / a); prune when even the ideal a cannot beat best.
                let s = isqrt_u128(pa);
                if (pa + best as u128 - 1) / (best as u128) <= s {
                    let lo = (pa + best as u128 - 1) / (best as u128);
                    let mut a = s;
                    while a >= lo.max(1) {
                        if pa % a == 0 {
                            let cand = (b as u64).max((pa / a) as u64);
                            if cand < best {
                                best = cand;
                            }
                            break;
                        }
                        a -= 1;
                    }
                }
            }
            b += 2;
        }
        m += 1;
    }
    Ok(best)
}

fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Bitmap of products: bit q (1 <= q <= xmax^2) set iff q = a*c with
/// 1 <= a, c <= xmax.
pub struct ProductBitmap {
    bits: Vec<u64>,
    pub xmax: u64,
}

impl ProductBitmap {
    pub fn new(xmax: u64) -> Self {
        let n = (xmax * xmax + 1) as usize;
        let mut bits = vec![0u64; n / 64 + 1];
        for a in 1..=xmax {
            for c in a..=xmax {
                let q = (a * c) as usize;
                bits[q / 64] |= 1 << (q % 64);
            }
        }
        ProductBitmap { bits, xmax }
    }

    #[inline]
    pub fn contains(&self, q: u128) -> bool {
        if q == 0 || q > (self.xmax as u128) * (self.xmax as u128) {
            return false;
        }
        let q = q as usize;
        (self.bits[q / 64] >> (q % 64)) & 1 == 1
    }
}

/// Does the field of fundamental discriminant d admit a form of height <= x?
fn height_le(d: i64, x: u64, prod: &ProductBitmap) -> bool {
    let abs_d = d.unsigned_abs();
    let x2 = (x as i128) * (x as i128);
    let mut m = 1u64;
    loop {
        let dm2 = (m as i128) * (m as i128) * (abs_d as i128);
        let lb2 = if d < 0 { dm2 * 4 } else { dm2 } ; // see below
        // height >= sqrt(|D|/4) for D < 0; >= sqrt(D/5) for D > 0.
        if d < 0 {
            if dm2 > 4 * x2 {
                break;
            }
        } else if dm2 > 5 * x2 {
            break;
        }
        let _ = lb2;
        let dd: i128 = if d < 0 { -dm2 } else { dm2 };
        let parity = dd.rem_euclid(2) as i128;
        if d < 0 {
            // P = (b^2 + |D|)/4 is increasing in b; smaller P is denser in
            // products, so scan b upward.
            let mut b = parity;
            while b <= x as i128 {
                let p = (b * b - dd) / 4;
                if p > 0 && prod.contains(p as u128) {
                    return true;
                }
                b += 2;
            }
        } else {
            // |P| = |b^2 - D|/4 is smallest near b ~ sqrt(D); scan outward.
            let center = isqrt_u128(dm2 as u128) as i128;
            let start = {
                let mut s = center.min(x as i128);
                if s.rem_euclid(2) != parity {
                    s -= 1;
                }
                s.max(parity)
            };
            let mut lo = start;
            let mut hi = start + 2;
            loop {
                let mut progressed = false;
                if lo >= parity {
                    let p = (lo * lo - dd) / 4;
                    if p != 0 && p.unsigned_abs() <= (x as u128) * (x as u128) {
                        if prod.contains(p.unsigned_abs()) {
                            return true;
                        }
                    }
                    lo -= 2;
                    progressed = true;
                }
                if hi <= x as i128 {
                    let p = (hi * hi - dd) / 4;
                    if p != 0 && p.unsigned_abs() <= (x as u128) * (x as u128) {
                        if prod.contains(p.unsigned_abs()) {
                            return true;
                        }
                    }
                    hi += 2;
                    progressed = true;
                }
                if !progressed {
                    break;
                }
            }
        }
        m += 1;
    }
    false
}

/// Counts of quadratic fields with P1-height <= x, split by discriminant
/// sign. Exact; parallelized over discriminant ranges.
pub fn count_fields_by_height(x: u64) -> Result<(u64, u64, u64)> {
    if x < 1 {
        return Err(Error::Invalid("x must be >= 1".into()));
    }
    let prod = ProductBitmap::new(x);
    let pos_limit = (5 * x * x) as usize;
    let neg_limit = (4 * x * x) as usize;
    let sf = squarefree_sieve(pos_limit.max(neg_limit).max(4));

    let is_fund = |d: i64| -> bool {
        let m = d.rem_euclid(4);
        if m == 1 {
            return sf[d.unsigned_abs() as usize];
        }
        if m == 0 {
            let q = d / 4;
            let qm = q.rem_euclid(4);
            return (qm == 2 || qm == 3) && sf[q.unsigned_abs() as usize];
        }
        false
    };

    let chunk = 65_536usize;
    let count_range = |sign: i64, limit: usize| -> u64 {
        let nchunks = limit / chunk + 1;
        (0..nchunks)
            .into_par_iter()
            .map(|ci| {
                let mut local = 0u64;
                let lo = ci * chunk + 1;
                let hi = ((ci + 1) * chunk).min(limit);
                for ad in lo..=hi {
                    let d = sign * ad as i64;
                    if d == 1 || !is_fund(d) {
                        continue;
                    }
                    if height_le(d, x, &prod) {
                        local += 1;
                    }
                }
                local
            })
            .sum()
    };

    let pos = count_range(1, pos_limit);
    let neg = count_range(-1, neg_limit);
    Ok((pos, neg, pos + neg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_examples() {
        // [PAPER] disc 5 is a real quadratic field discriminant.
        assert!(is_fundamental(5));
        // [DERIVED] direct-definition scan values from the spec.
        assert!(is_fundamental(12));
        assert!(is_fundamental(8));
        assert!(!is_fundamental(9));
        assert!(is_fundamental(-4));
        assert!(!is_fundamental(0));
        assert!(!is_fundamental(1));
        assert!(is_fundamental(-3));
        assert!(!is_fundamental(-9));
        // exhaustive small scan against the definition
        for d in -100i64..=100 {
            if d == 0 || d == 1 {
                continue;
            }
            let expected = match d.rem_euclid(4) {
                1 => is_squarefree_i64(d),
                0 => {
                    let q = d / 4;
                    is_squarefree_i64(q) && matches!(q.rem_euclid(4), 2 | 3)
                }
                _ => false,
            };
            assert_eq!(is_fundamental(d), expected, "d={d}");
        }
    }

    #[test]
    fn reduce_examples() {
        // already reduced
        let q = QuadForm::new(1, 0, 1);
        assert_eq!(q.reduce().unwrap(), q);
        // boundary rule: [2,2,3] stays (b = a requires b >= 0: satisfied)
        let q = QuadForm::new(2, 2, 3);
        assert_eq!(q.reduce().unwrap(), q);
        // [DERIVED] Gauss reduction oracle: [3,7,5] (disc -11) -> [1,1,3].
        let q = QuadForm::new(3, 7, 5).reduce().unwrap();
        assert_eq!(q, QuadForm::new(1, 1, 3));
        // idempotent + disc preserved on random definite forms
        for (a, b, c) in [(2, 3, 7), (5, -9, 11), (14, 13, 4), (3, -3, 3)] {
            let q = QuadForm::new(a, b, c);
            if !q.disc().is_negative() {
                continue;
            }
            let q = if q.a.is_positive() { q } else { QuadForm::new(-a, -b, -c) };
            let r = q.reduce().unwrap();
            assert!(r.is_reduced(), "{q:?} -> {r:?}");
            assert_eq!(r.disc(), q.disc());
            assert_eq!(r.reduce().unwrap(), r);
        }
    }

    #[test]
    fn reduced_forms_examples() {
        // [DERIVED] scans
        let f = reduced_forms(-4).unwrap();
        assert_eq!(f, vec![QuadForm::new(1, 0, 1)]);
        let f = reduced_forms(-3).unwrap();
        assert_eq!(f, vec![QuadForm::new(1, 1, 1)]);
        let f = reduced_forms(-23).unwrap();
        assert_eq!(
            f,
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, -1, 3), QuadForm::new(2, 1, 3)]
        );
    }

    #[test]
    fn heegner_examples() {
        let (re, im) = QuadForm::new(1, 0, 1).heegner_point().unwrap();
        assert!((re - 0.0).abs() < 1e-15 && (im - 1.0).abs() < 1e-15);
        let (re, im) = QuadForm::new(1, 1, 1).heegner_point().unwrap();
        assert!((re + 0.5).abs() < 1e-15 && (im - 0.75f64.sqrt()).abs() < 1e-15);
        // [2,1,3]: (-1 + sqrt(-23))/4, inside the fundamental domain
        let q = QuadForm::new(2, 1, 3);
        let (re, im) = q.heegner_point().unwrap();
        assert!((re + 0.25).abs() < 1e-15 && (im - 23f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(q.point_in_fundamental_domain().unwrap());
        // reduced iff in fundamental domain on a scan
        for d in [-4i64, -23, -47, -71] {
            for q in reduced_forms(d).unwrap() {
                assert!(q.point_in_fundamental_domain().unwrap());
            }
            // a non-reduced representative lands outside
            let q = QuadForm::new(3, 7, 5);
            assert!(!q.point_in_fundamental_domain().unwrap());
        }
    }

    #[test]
    fn field_height_examples() {
        // [PAPER] d=5: the form x^2+xy-y^2 has height 1; lower bound 1.
        assert_eq!(field_height(5).unwrap(), 1);
        // [DERIVED] d=-4: [1,0,1].
        assert_eq!(field_height(-4).unwrap(), 1);
        // [DERIVED] d=13: heights 1,2 excluded exhaustively, [1,3,-1] works.
        assert_eq!(field_height(13).unwrap(), 3);
    }

    #[test]
    fn field_height_matches_brute_force_small() {
        // brute force over all forms with height <= 12
        let hmax = 12i64;
        let mut best: std::collections::HashMap<i64, i64> = Default::default();
        for a in -hmax..=hmax {
            for b in -hmax..=hmax {
                for c in -hmax..=hmax {
                    let disc = b * b - 4 * a * c;
                    if disc == 0 {
                        continue;
                    }
                    let s = isqrt_u128(disc.unsigned_abs() as u128) as i64;
                    if disc > 0 && s * s == disc {
                        continue; // square disc: not a field
                    }
                    // kernel
                    let mut k = disc;
                    let mut m = 1i64;
                    while (m + 1) * (m + 1) <= disc.abs() {
                        m += 1;
                        if disc % (m * m) == 0 {
                            k = disc / (m * m);
                        }
                    }
                    // normalize kernel to fundamental discriminant
                    let fund = if k.rem_euclid(4) == 1 { k } else { 4 * k };
                    if fund.abs() > 200 {
                        continue;
                    }
                    let h = a.abs().max(b.abs()).max(c.abs());
                    let e = best.entry(fund).or_insert(i64::MAX);
                    if h < *e {
                        *e = h;
                    }
                }
            }
        }
        for d in -60i64..=60 {
            if !is_fundamental(d) {
                continue;
            }
            if let Some(&h) = best.get(&d) {
                if h <= 6 {
                    // brute force is definitive only well inside the box
                    assert_eq!(field_height(d).unwrap(), h as u64, "d={d}");
                }
            }
        }
    }

    #[test]
    fn height_lower_bounds_hold() {
        for d in 2i64..=500 {
            if is_fundamental(d) {
                let h = field_height(d).unwrap();
                assert!((h as i64) * (h as i64) * 5 >= d, "d={d}");
            }
            if is_fundamental(-d) {
                let h = field_height(-d).unwrap();
                assert!((h as i64) * (h as i64) * 4 >= d, "d=-{d}");
            }
        }
    }

    #[test]
    fn count_x1_matches_brute_force() {
        // [DERIVED] forms with coefficients in {-1,0,1}: disc values
        // {-4,-3,0,1,4,5}; nonsquare kernels give d in {5, -3, -4}.
        let (pos, neg, total) = count_fields_by_height(1).unwrap();
        assert_eq!((pos, neg, total), (1, 2, 3));
    }

    #[test]
    fn count_matches_field_height_small() {
        for x in [2u64, 3, 5, 8] {
            let (pos, neg, _) = count_fields_by_height(x).unwrap();
            let mut pos_expect = 0u64;
            for d in 2..=(5 * x * x) as i64 {
                if is_fundamental(d) && field_height(d).unwrap() <= x {
                    pos_expect += 1;
                }
            }
            let mut neg_expect = 0u64;
            for d in 2..=(4 * x * x) as i64 {
                if is_fundamental(-d) && field_height(-d).unwrap() <= x {
                    neg_expect += 1;
                }
            }
            assert_eq!(pos, pos_expect, "x={x}");
            assert_eq!(neg, neg_expect, "x={x}");
        }
    }

    #[test]
    fn kronecker_basics() {
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(5, 5), 0);
        // (a|p) = Euler criterion for odd primes
        for p in [3i64, 5, 7, 11, 13] {
            for a in 1..p {
                let mut e = 1i64;
                let mut b = a % p;
                let mut k = (p - 1) / 2;
                while k > 0 {
                    if k & 1 == 1 {
                        e = e * b % p;
                    }
                    b = b * b % p;
                    k >>= 1;
                }
                let euler = if e == 1 { 1 } else { -1 };
                assert_eq!(kronecker(a, p), euler, "a={a} p={p}");
            }
        }
    }
}
