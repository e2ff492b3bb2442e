//! Integer factorization at desk scale: trial division plus Pollard rho
//! with deterministic Miller-Rabin. Discriminants in the sieves stay far
//! below 2^127.

use crate::Int;
use num_traits::{Signed, ToPrimitive};

fn mulmod_u128(a: u128, b: u128, m: u128) -> u128 {
    // m < 2^127 in all callers; use 256-bit by splitting.
    if let (Some(x), Some(y)) = (u64::try_from(a).ok(), u64::try_from(b).ok()) {
        if m <= u64::MAX as u128 {
            return (x as u128 * y as u128) % m;
        }
    }
    // Russian-peasant fallback.
    let mut result = 0u128;
    let mut a = a % m;
    let mut b = b;
    while b > 0 {
        if b & 1 == 1 {
            result = (result + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    result
}

fn powmod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for n < 3.3 * 10^24 with the standard base set.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mulmod_u128(x, x, n) + c) % n;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u128(diff, n);
        }
        if d != n && d != 0 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        a %= b;
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Prime factorization of `n > 0` as sorted (prime, exponent) pairs.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut push = |p: u128, out: &mut Vec<(u128, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
    }
    let mut d = 53u128;
    while d * d <= n && d < 5000 {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += 2;
    }
    // Remaining cofactor: prime, or split with rho.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

/// Largest integer a with a^2 | n (n != 0).
pub fn largest_square_divisor_u128(n: u128) -> u128 {
    let mut a = 1u128;
    for (p, e) in factor_u128(n) {
        for _ in 0..e / 2 {
            a *= p;
        }
    }
    a
}

/// Largest a with a^2 dividing |n| for a BigInt that fits u128.
pub fn largest_square_divisor(n: &Int) -> Int {
    let v = n.abs().to_u128().expect("largest_square_divisor: value exceeds u128 desk scale");
    Int::from(largest_square_divisor_u128(v))
}

/// Squarefree kernel of a nonzero integer, keeping the sign.
pub fn squarefree_kernel(n: &Int) -> Int {
    let a = largest_square_divisor(n);
    n / (&a * &a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small() {
        assert_eq!(factor_u128(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factor_u128(97), vec![(97, 1)]);
        assert_eq!(factor_u128(1), vec![]);
        let n = 1_000_003u128 * 999_983;
        let f = factor_u128(n);
        assert_eq!(f, vec![(999_983, 1), (1_000_003, 1)]);
    }

    #[test]
    fn square_divisors() {
        assert_eq!(largest_square_divisor_u128(72), 6); // 36 | 72
        assert_eq!(largest_square_divisor_u128(23), 1);
        assert_eq!(squarefree_kernel(&Int::from(-16)), Int::from(-1));
        assert_eq!(squarefree_kernel(&Int::from(-12)), Int::from(-3));
    }

    #[test]
    fn primality() {
        assert!(is_prime_u128(2_147_483_647));
        assert!(!is_prime_u128(2_147_483_649));
    }
}
