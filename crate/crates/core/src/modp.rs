//! Univariate polynomial arithmetic over F_p (p < 2^31) and
//! distinct-degree factorization patterns.
//!
//! Only the multiset of factor degrees is ever needed (Dedekind cycle
//! types), so no equal-degree splitting is implemented.

use crate::{BinaryForm, Int};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Dense coefficients, lowest degree first, all reduced mod p, no trailing
/// zeros (so `len - 1` is the degree; empty = zero polynomial).
pub type PolyP = Vec<u64>;

fn trim(mut v: PolyP) -> PolyP {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn poly_from_form(f: &BinaryForm, p: u64) -> PolyP {
    // f(x, 1): coefficient of x^k is f_{n-k}.
    let n = f.degree();
    let mut out = vec![0u64; n + 1];
    for i in 0..=n {
        out[n - i] = f.coeff(i).mod_floor(&Int::from(p)).to_u64().unwrap();
    }
    trim(out)
}

pub fn deg(a: &PolyP) -> isize {
    a.len() as isize - 1
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p prime.
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub fn poly_mul(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn poly_rem(a: &PolyP, m: &PolyP, p: u64) -> PolyP {
    assert!(!m.is_empty());
    let mut r = a.clone();
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = mulmod(r[k], lead_inv, p);
        if c != 0 {
            for j in 0..=dm {
                let idx = k - dm + j;
                let sub = mulmod(c, m[j], p);
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.len() <= dm {
            break;
        }
    }
    trim(r)
}

pub fn poly_gcd(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    // monicize
    if let Some(&l) = a.last() {
        let li = inv_mod(l, p);
        for c in &mut a {
            *c = mulmod(*c, li, p);
        }
    }
    a
}

fn poly_deriv(a: &PolyP, p: u64) -> PolyP {
    let mut out: PolyP = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn powmod_x(e: u64, m: &PolyP, p: u64) -> PolyP {
    // x^e mod m
    let mut result = vec![1u64];
    let mut base = poly_rem(&vec![0, 1], m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

fn poly_pow_mod(a: &PolyP, e: u64, m: &PolyP, p: u64) -> PolyP {
    let mut result = vec![1u64];
    let mut base = poly_rem(a, m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

/// Multiset of irreducible-factor degrees of a squarefree polynomial over
/// F_p, by distinct-degree factorization. Returns `None` if the input is
/// not squarefree mod p (callers avoid such p anyway).
pub fn degree_pattern(f: &PolyP, p: u64) -> Option<Vec<usize>> {
    let n = deg(f);
    if n <= 0 {
        return None;
    }
    let d = poly_deriv(f, p);
    let g = poly_gcd(f, &d, p);
    if deg(&g) != 0 {
        return None;
    }
    let mut pattern = Vec::new();
    let mut rest = f.clone();
    // monicize rest
    let li = inv_mod(*rest.last().unwrap(), p);
    for c in &mut rest {
        *c = mulmod(*c, li, p);
    }
    let mut h = powmod_x(p, &rest, p); // x^p mod rest
    let mut d_deg = 1usize;
    while deg(&rest) >= 2 * d_deg as isize {
        // gcd(x^(p^d) - x, rest)
        let mut hm = h.clone();
        // subtract x
        if hm.len() < 2 {
            hm.resize(2, 0);
        }
        hm[1] = (hm[1] + p - 1) % p;
        let hm = trim(hm);
        let g = poly_gcd(&hm, &rest, p);
        let gd = deg(&g);
        if gd > 0 {
            for _ in 0..(gd as usize / d_deg) {
                pattern.push(d_deg);
            }
            // rest /= g  (exact division via repeated rem? do proper division)
            rest = poly_div_exact(&rest, &g, p);
            if deg(&rest) < 1 {
                break;
            }
            h = poly_rem(&h, &rest, p);
        }
        d_deg += 1;
        if deg(&rest) >= 1 {
            h = poly_pow_mod(&h, p, &rest, p);
        }
    }
    if deg(&rest) >= 1 {
        pattern.push(deg(&rest) as usize);
    }
    pattern.sort_unstable();
    Some(pattern)
}

fn poly_div_exact(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let da = deg(a);
    let db = deg(b);
    assert!(da >= db && db >= 0);
    let mut r = a.clone();
    let mut q = vec![0u64; (da - db + 1) as usize];
    let li = inv_mod(b[db as usize], p);
    for k in (0..q.len()).rev() {
        let idx = k + db as usize;
        if idx >= r.len() {
            continue;
        }
        let c = mulmod(r[idx], li, p);
        q[k] = c;
        if c != 0 {
            for j in 0..=db as usize {
                let sub = mulmod(c, b[j], p);
                r[k + j] = (r[k + j] + p - sub) % p;
            }
        }
    }
    trim(q)
}

/// Small prime list for sampling; deterministic.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let mut sieve = vec![true; (n + 1) as usize];
    let mut out = Vec::new();
    for i in 2..=n as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Primes that preserve degree and separability: p not dividing f_0 * Disc(f).
pub fn good_primes(f: &BinaryForm, count: usize) -> Vec<u64> {
    let disc = f.discriminant();
    let f0 = f.coeff(0);
    let mut out = Vec::new();
    let mut p = 2u64;
    while out.len() < count && p < 100_000 {
        let bp = Int::from(p);
        if !(f0 % &bp).is_zero() && !(&disc % &bp).is_zero() {
            out.push(p);
        }
        p = next_prime(p);
    }
    out
}

fn next_prime(p: u64) -> u64 {
    let mut q = p + 1;
    'outer: loop {
        if q < 2 {
            q = 2;
        }
        let mut d = 2;
        while d * d <= q {
            if q % d == 0 {
                q += 1;
                continue 'outer;
            }
            d += 1;
        }
        return q;
    }
}
