//! The Eulerian monomial basis T_n of the S_n-closure, and the bijection
//! with permutations counted by ascents.
//!
//! A monomial of degree d is an exponent vector (e_1..e_n) standing for
//! prod alpha_i^(d-e_i) beta_i^(e_i). It lies in the basis when d <= n-1
//! and for every 0 <= k <= d-1 there are i < j with e_i = k, e_j = k+1.

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub degree: u8,
    pub exps: Vec<u8>,
}

impl Monomial {
    pub fn new(degree: u8, exps: Vec<u8>) -> Self {
        debug_assert!(exps.iter().all(|&e| e <= degree));
        Monomial { degree, exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    /// The ascent-chain condition defining membership in T_n.
    pub fn in_basis(&self) -> bool {
        let d = self.degree as usize;
        let n = self.n();
        if d > n - 1 {
            return false;
        }
        for k in 0..d {
            let k = k as u8;
            let mut ok = false;
            'search: for i in 0..n {
                if self.exps[i] == k {
                    for j in i + 1..n {
                        if self.exps[j] == k + 1 {
                            ok = true;
                            break 'search;
                        }
                    }
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    /// Product of two monomials (exponents add, degrees add).
    pub fn product(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Eulerian number E(n, d): permutations of n with exactly d ascents.
/// Recurrence E(n,d) = (d+1) E(n-1,d) + (n-d) E(n-1,d-1).
pub fn eulerian_number(n: usize, d: usize) -> u128 {
    if d >= n {
        return 0;
    }
    let mut row = vec![0u128; n];
    row[0] = 1;
    for m in 2..=n {
        let mut next = vec![0u128; n];
        for k in 0..m {
            let a = if k < m - 1 { (k as u128 + 1) * row[k] } else { 0 };
            let b = if k >= 1 { (m - k) as u128 * row[k - 1] } else { 0 };
            next[k] = a + b;
        }
        row = next;
    }
    row[d]
}

/// The basis T_n ordered by (degree, lexicographic exponent vector).
/// Constructed through the ascent bijection from all n! permutations.
pub fn eulerian_basis(n: usize) -> Result<Vec<Monomial>> {
    if !(2..=8).contains(&n) {
        return Err(Error::Unsupported("eulerian_basis supports 2 <= n <= 8"));
    }
    let mut out = Vec::new();
    let mut perm: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(permutation_to_monomial(&perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out.sort();
    out.dedup();
    debug_assert_eq!(out.len(), factorial(n) as usize);
    Ok(out)
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Number of ascents of a permutation word.
pub fn ascents(perm: &[u8]) -> usize {
    perm.windows(2).filter(|w| w[0] < w[1]).count()
}

/// Inverse direction of the bijection: c_i = number of ascents appearing in
/// the word strictly before the position of the value i.
pub fn permutation_to_monomial(perm: &[u8]) -> Monomial {
    let n = perm.len();
    let mut pos = vec![0usize; n + 1];
    for (idx, &v) in perm.iter().enumerate() {
        pos[v as usize] = idx;
    }
    // ascents_before[idx] = number of ascents at positions < idx
    let mut ascents_before = vec![0u8; n];
    for idx in 1..n {
        ascents_before[idx] =
            ascents_before[idx - 1] + u8::from(perm[idx - 1] < perm[idx]);
    }
    let exps: Vec<u8> = (1..=n).map(|i| ascents_before[pos[i]]).collect();
    let degree = *exps.iter().max().unwrap();
    debug_assert_eq!(degree as usize, ascents(perm));
    Monomial::new(degree, exps)
}

/// Forward direction: values i with e_i = 0 in descending order, then those
/// with e_i = 1 in descending order, and so on.
pub fn monomial_to_permutation(m: &Monomial) -> Result<Vec<u8>> {
    if !m.in_basis() {
        return Err(Error::Invalid(format!("monomial {:?} is not in T_n", m)));
    }
    let n = m.n();
    let mut word = Vec::with_capacity(n);
    for level in 0..=m.degree {
        for i in (0..n).rev() {
            if m.exps[i] == level {
                word.push(i as u8 + 1);
            }
        }
    }
    Ok(word)
}

/// Indices (into the ordered basis) of the monomials of degree <= d.
pub fn filtration_indices(n: usize, d: usize) -> Result<Vec<usize>> {
    if d > n - 1 {
        return Err(Error::IndexOutOfRange(d));
    }
    let basis = eulerian_basis(n)?;
    Ok(basis
        .iter()
        .enumerate()
        .filter(|(_, m)| (m.degree as usize) <= d)
        .map(|(i, _)| i)
        .collect())
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: brute-force scan of all exponent vectors against
    /// the ascent-chain condition.
    fn basis_by_scan(n: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..n {
            let mut e = vec![0u8; n];
            loop {
                let m = Monomial::new(d as u8, e.clone());
                if m.in_basis() {
                    out.push(m);
                }
                // increment base-(d+1) counter
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    if e[i] < d as u8 {
                        e[i] += 1;
                        for x in e.iter_mut().take(i) {
                            *x = 0;
                        }
                        break;
                    }
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn t2_and_t3_match_scan() {
        // [DERIVED] n=2: degree sizes (1,1).
        let b2 = eulerian_basis(2).unwrap();
        assert_eq!(b2.len(), 2);
        assert_eq!(b2[0].exps, vec![0, 0]);
        assert_eq!(b2[1].exps, vec![0, 1]);
        // [DERIVED] n=3: degree sizes (1,4,1) with the stated vectors.
        let b3 = eulerian_basis(3).unwrap();
        let by_scan = basis_by_scan(3);
        assert_eq!(b3, by_scan);
        let deg1: Vec<Vec<u8>> = b3
            .iter()
            .filter(|m| m.degree == 1)
            .map(|m| m.exps.clone())
            .collect();
        assert_eq!(deg1, vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let deg2: Vec<Vec<u8>> = b3
            .iter()
            .filter(|m| m.degree == 2)
            .map(|m| m.exps.clone())
            .collect();
        assert_eq!(deg2, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn basis_matches_scan_and_counts() {
        for n in 2..=5 {
            let b = eulerian_basis(n).unwrap();
            assert_eq!(b, basis_by_scan(n), "n={n}");
            assert_eq!(b.len() as u128, factorial(n));
            for d in 0..n {
                let count = b.iter().filter(|m| m.degree as usize == d).count() as u128;
                assert_eq!(count, eulerian_number(n, d), "n={n} d={d}");
            }
        }
        // [PAPER] total count n! also for n = 6, 7.
        for n in 6..=7 {
            assert_eq!(eulerian_basis(n).unwrap().len() as u128, factorial(n));
        }
    }

    #[test]
    fn ascent_bijection_examples() {
        // [DERIVED] n=3, e=(0,1,2) -> word (1,2,3) with 2 ascents.
        let m = Monomial::new(2, vec![0, 1, 2]);
        let w = monomial_to_permutation(&m).unwrap();
        assert_eq!(w, vec![1, 2, 3]);
        assert_eq!(ascents(&w), 2);
        // [DERIVED] n=3, e=(0,0,0) -> word (3,2,1) with 0 ascents.
        let m = Monomial::new(0, vec![0, 0, 0]);
        let w = monomial_to_permutation(&m).unwrap();
        assert_eq!(w, vec![3, 2, 1]);
        assert_eq!(ascents(&w), 0);
        // not-in-basis input errors
        assert!(monomial_to_permutation(&Monomial::new(1, vec![1, 0, 0])).is_err());
    }

    #[test]
    fn bijection_roundtrip_t4() {
        for m in eulerian_basis(4).unwrap() {
            let w = monomial_to_permutation(&m).unwrap();
            assert_eq!(ascents(&w), m.degree as usize);
            assert_eq!(permutation_to_monomial(&w), m);
        }
    }

    #[test]
    fn filtration_sizes() {
        // d=0 -> {1}; n=3, d=1 -> 5; d=n-1 -> all.
        assert_eq!(filtration_indices(3, 0).unwrap().len(), 1);
        assert_eq!(filtration_indices(3, 1).unwrap().len(), 5);
        assert_eq!(filtration_indices(3, 2).unwrap().len(), 6);
        assert!(filtration_indices(3, 3).is_err());
    }

    #[test]
    fn eulerian_identities() {
        for n in 2..=7usize {
            let total: u128 = (0..n).map(|d| eulerian_number(n, d)).sum();
            assert_eq!(total, factorial(n));
            let weighted: u128 = (0..n).map(|d| d as u128 * eulerian_number(n, d)).sum();
            assert_eq!(weighted, (n as u128 - 1) * factorial(n) / 2);
            for e in 0..=5u128 {
                let lhs: u128 = (0..n)
                    .map(|d| eulerian_number(n, d) * binomial(n as u128 + e - d as u128, n as u128))
                    .sum();
                assert_eq!(lhs, (e + 1).pow(n as u32), "worpitzky n={n} e={e}");
            }
        }
    }
}
