//! Sparse multivariate polynomials with `BigInt` coefficients.
//!
//! Used for the form-independent rewrite tables (coordinates kept as
//! polynomials in the form coefficients f_0..f_n) and for expanding the
//! discriminant polynomial symbolically.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Exponent vectors index variables 0..nvars; the map keeps terms in a
/// deterministic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePoly {
    pub terms: BTreeMap<Vec<u8>, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    /// The monomial `var_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0u8; nvars];
        e[i] = 1;
        let mut p = Self::zero();
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry -= c;
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn neg(&self) -> Self {
        SparsePoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Multiply by `sign * var_i`.
    pub fn mul_var(&self, i: usize, negate: bool) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            out.terms.insert(e2, if negate { -c } else { c.clone() });
        }
        out
    }

    /// Exact division by `var_i`; panics if some term lacks the variable.
    pub fn div_var(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            assert!(e[i] >= 1, "div_var: term not divisible");
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.terms.insert(e2, c.clone());
        }
        out
    }

    pub fn eval(&self, vals: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= &vals[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Sum of absolute values of the coefficients.
    pub fn one_norm(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.terms.values() {
            acc += num_traits::Signed::abs(c);
        }
        acc
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Determinant of a square matrix of sparse polynomials by cofactor
/// expansion with memoization over column subsets of the trailing rows.
/// Adequate for the small symbolic Sylvester matrices used here.
pub fn symbolic_det(m: &[Vec<SparsePoly>]) -> SparsePoly {
    let n = m.len();
    assert!(n <= 16, "symbolic_det: matrix too large");
    let nvars = m
        .iter()
        .flat_map(|row| row.iter())
        .find_map(|p| p.terms.keys().next().map(|e| e.len()))
        .unwrap_or(0);
    let full: u16 = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
    let mut memo: std::collections::HashMap<(usize, u16), SparsePoly> =
        std::collections::HashMap::new();

    fn go(
        m: &[Vec<SparsePoly>],
        row: usize,
        cols: u16,
        nvars: usize,
        memo: &mut std::collections::HashMap<(usize, u16), SparsePoly>,
    ) -> SparsePoly {
        if cols == 0 {
            return SparsePoly::one(nvars);
        }
        if let Some(p) = memo.get(&(row, cols)) {
            return p.clone();
        }
        let mut acc = SparsePoly::zero();
        let mut parity = false;
        for j in 0..m.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let sub = go(m, row + 1, cols & !(1 << j), nvars, memo);
                let term = m[row][j].mul(&sub);
                if parity {
                    acc.sub_assign(&term);
                } else {
                    acc.add_assign(&term);
                }
            }
            parity = !parity;
        }
        memo.insert((row, cols), acc.clone());
        acc
    }

    go(m, 0, full, nvars, &mut memo)
}
