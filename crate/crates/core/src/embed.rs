//! The n! complex embeddings of S(f;Q) and the sup-norm over them.
//!
//! Row pi, column m: f_0^deg(m) * prod_i r_{pi(i)}^{e_i}, where r_1..r_n
//! are the affine roots of f(x,1). This is the evaluation forced by the
//! normalization alpha_{f,i} = 1 (i < n), alpha_{f,n} = f_0; T_n monomials
//! are degree-balanced per slot, so the distribution of f_0 across slots
//! does not matter (asserted in tests).

use crate::bigfloat::{BigComplex, BigFloat};
use crate::closure::SnElement;
use crate::eulerian::Monomial;
use crate::roots::complex_roots;
use crate::{BinaryForm, Error, Rat, Result};
use num_traits::Zero;

pub struct EmbeddingMatrix {
    pub n: usize,
    pub prec: u32,
    /// Permutations of 0..n in lexicographic order.
    pub perms: Vec<Vec<usize>>,
    /// rows[pi][c] = sigma_pi(basis monomial c).
    pub rows: Vec<Vec<BigComplex>>,
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let mut i = n - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Build the embedding matrix for the basis of the given rewrite table.
pub fn embeddings(
    f: &BinaryForm,
    basis: &[Monomial],
    precision: u32,
) -> Result<EmbeddingMatrix> {
    if f.coeff(0).is_zero() {
        return Err(Error::LeadingZero);
    }
    let n = f.degree();
    let prec = precision;
    let pts = complex_roots(f, prec)?; // also rejects Disc = 0
    let roots: Vec<BigComplex> = pts.iter().map(|p| p.affine()).collect();
    let f0 = BigComplex::from_bigint(f.coeff(0));
    // Powers r_j^k for k <= max exponent.
    let max_e = basis
        .iter()
        .flat_map(|m| m.exps.iter())
        .copied()
        .max()
        .unwrap_or(0) as usize;
    let mut powers: Vec<Vec<BigComplex>> = Vec::with_capacity(n);
    for r in &roots {
        let mut row = vec![BigComplex::one()];
        for k in 1..=max_e {
            row.push(row[k - 1].mul(r, prec));
        }
        powers.push(row);
    }
    let perms = all_permutations(n);
    let mut rows = Vec::with_capacity(perms.len());
    for pi in &perms {
        let mut row = Vec::with_capacity(basis.len());
        for m in basis {
            let mut v = f0.pow_usize(m.degree as usize, prec);
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    v = v.mul(&powers[pi[i]][e as usize], prec);
                }
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok(EmbeddingMatrix { n, prec, perms, rows })
}

impl EmbeddingMatrix {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Value of sigma_pi at an element given by rational T_n coordinates.
    pub fn eval_row(&self, row: usize, coords: &[Rat]) -> BigComplex {
        let prec = self.prec;
        let mut acc = BigComplex::zero();
        for (c, e) in coords.iter().zip(&self.rows[row]) {
            if c.is_zero() {
                continue;
            }
            let cf = BigComplex::from_rational(c, prec);
            acc = acc.add(&cf.mul(e, prec), prec);
        }
        acc
    }

    /// Direct evaluation of an arbitrary monomial under row `row`:
    /// f_0^deg * prod r_{pi(i)}^{e_i}. Requires the roots again, so the
    /// caller passes them; used by the rewriting-soundness oracle.
    pub fn eval_monomial_direct(
        &self,
        row: usize,
        m: &Monomial,
        f0: &BigComplex,
        roots: &[BigComplex],
    ) -> BigComplex {
        let prec = self.prec;
        let mut v = f0.pow_usize(m.degree as usize, prec);
        let pi = &self.perms[row];
        for (i, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                v = v.mul(&roots[pi[i]].pow_usize(e as usize, prec), prec);
            }
        }
        v
    }

    /// Sup-norm over all embeddings.
    pub fn norm(&self, v: &SnElement) -> BigFloat {
        let mut best = BigFloat::zero();
        for row in 0..self.rank() {
            let val = self.eval_row(row, &v.coords).abs(self.prec);
            if val.cmp(&best) == std::cmp::Ordering::Greater {
                best = val;
            }
        }
        best
    }
}
