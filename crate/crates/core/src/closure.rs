//! The S_n-closure S(f;Z) as a free rank-n! module over the Eulerian basis
//! T_n, with the constructive rewriting of arbitrary monomials into the
//! basis, ring arithmetic, the mu^(j) maps, and the trace-form discriminant
//! Disc(f)^(n!/2).
//!
//! Rewrite coordinates are memoized once per degree n as polynomials in the
//! form coefficients f_0..f_n, so multiplication tables for every form of
//! that degree come from substitution alone.
//!
//! The reduction step uses the identity
//!     sum_{|S| = |S_0|} m''_S = (-1)^{|S_0|} a_{|S_0|} m'
//! whose sign is forced by the definition of a_k (the symmetric-function
//! expansion of e.g. n=3, e=(1,0,0) requires -a_1); every table entry is
//! additionally validated numerically through the embedding rows in tests.

use crate::eulerian::{eulerian_basis, factorial, Monomial};
use crate::poly::SparsePoly;
use crate::{BinaryForm, Error, Int, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Form-independent rewrite table for degree n (supported for 2 <= n <= 4;
/// the polynomial memo grows too fast beyond that).
pub struct RewriteTable {
    pub n: usize,
    pub basis: Vec<Monomial>,
    basis_pos: HashMap<Monomial, usize>,
    memo: HashMap<Monomial, Vec<SparsePoly>>,
}

fn r1(e: &[u8]) -> u32 {
    e.iter().map(|&x| (x as u32) * (x as u32)).sum()
}

fn r2(e: &[u8]) -> u32 {
    let n = e.len();
    e.iter()
        .enumerate()
        .map(|(i, &x)| ((n - 1 - i) as u32) * x as u32)
        .sum()
}

/// Smallest k in 0..d-1 violating the ascent-chain condition, if any.
fn first_failing_k(m: &Monomial) -> Option<u8> {
    let n = m.n();
    'levels: for k in 0..m.degree {
        for i in 0..n {
            if m.exps[i] == k {
                for j in i + 1..n {
                    if m.exps[j] == k + 1 {
                        continue 'levels;
                    }
                }
            }
        }
        return Some(k);
    }
    None
}

fn subsets_of_size(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn go(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    go(0, n, s, &mut cur, &mut out);
    out
}

impl RewriteTable {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(Error::Unsupported("rewrite table supports 2 <= n <= 4"));
        }
        let basis = eulerian_basis(n)?;
        let basis_pos: HashMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let rank = basis.len();
        let nvars = n + 1;
        let max_deg = 2 * (n - 1);
        let mut memo: HashMap<Monomial, Vec<SparsePoly>> = HashMap::new();

        for d in 0..=max_deg as u8 {
            // All exponent vectors in {0..d}^n, processed in increasing
            // (r1, r2) order so every dependency is already present.
            let mut vectors = Vec::new();
            let mut e = vec![0u8; n];
            loop {
                vectors.push(e.clone());
                let mut i = 0;
                while i < n {
                    if e[i] < d {
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
            vectors.sort_by_key(|e| (r1(e), r2(e)));
            for e in vectors {
                let m = Monomial::new(d, e);
                let coords = if m.in_basis() {
                    let mut v = vec![SparsePoly::zero(); rank];
                    v[basis_pos[&m]] = SparsePoly::one(nvars);
                    v
                } else {
                    let k = first_failing_k(&m)
                        .expect("monomial outside T_n must have a failing level");
                    let s0: Vec<usize> =
                        (0..n).filter(|&i| m.exps[i] >= k + 1).collect();
                    let s = s0.len();
                    // m' : degree d-1, exponents reduced on S_0.
                    let mut e1 = m.exps.clone();
                    for &i in &s0 {
                        e1[i] -= 1;
                    }
                    let mprime = Monomial::new(d - 1, e1);
                    let base = memo.get(&mprime).expect("m' processed earlier (smaller degree)");
                    // (-1)^s f_s * coords(m')
                    let negate = s % 2 == 1;
                    let mut acc: Vec<SparsePoly> =
                        base.iter().map(|p| p.mul_var(s, negate)).collect();
                    // minus the sibling monomials m''_S for S != S_0.
                    let in_s0 = {
                        let mut flags = vec![false; n];
                        for &i in &s0 {
                            flags[i] = true;
                        }
                        flags
                    };
                    for subset in subsets_of_size(n, s) {
                        if subset == s0 {
                            continue;
                        }
                        let mut e2 = m.exps.clone();
                        let mut in_s = vec![false; n];
                        for &i in &subset {
                            in_s[i] = true;
                        }
                        let mut valid = true;
                        for i in 0..n {
                            match (in_s[i], in_s0[i]) {
                                (true, false) => {
                                    if e2[i] >= d {
                                        valid = false;
                                        break;
                                    }
                                    e2[i] += 1;
                                }
                                (false, true) => e2[i] -= 1,
                                _ => {}
                            }
                        }
                        debug_assert!(valid, "sibling exponents stay in range by the lemma");
                        if !valid {
                            continue;
                        }
                        let sib = Monomial::new(d, e2);
                        let sib_coords =
                            memo.get(&sib).expect("sibling precedes in (r1, r2) order");
                        for (a, b) in acc.iter_mut().zip(sib_coords) {
                            a.sub_assign(b);
                        }
                    }
                    acc
                };
                memo.insert(m, coords);
            }
        }
        Ok(RewriteTable { n, basis, basis_pos, memo })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.basis_pos.get(m).copied()
    }

    /// Symbolic T_n-coordinates of a monomial of degree <= 2(n-1).
    pub fn coords_symbolic(&self, m: &Monomial) -> Result<&Vec<SparsePoly>> {
        self.memo
            .get(m)
            .ok_or(Error::Unsupported("monomial degree exceeds 2(n-1)"))
    }

    /// Integer T_n-coordinates of a monomial image in S(f;Z).
    pub fn rewrite(&self, m: &Monomial, f: &BinaryForm) -> Result<Vec<Int>> {
        let coords = self.coords_symbolic(m)?;
        Ok(coords.iter().map(|p| p.eval(f.coeffs())).collect())
    }
}

/// Per-form closure context: the rank-n! ring with precomputed basis-pair
/// products.
pub struct ClosureCtx<'t> {
    pub table: &'t RewriteTable,
    pub form: BinaryForm,
    /// `pair[a][b]` = integer coordinates of m_a * m_b.
    pub pair: Vec<Vec<Vec<Int>>>,
}

impl<'t> ClosureCtx<'t> {
    pub fn new(table: &'t RewriteTable, form: &BinaryForm) -> Result<Self> {
        if form.degree() != table.n {
            return Err(Error::DegreeMismatch { expected: table.n, got: form.degree() });
        }
        if !form.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let rank = table.rank();
        let mut pair = vec![vec![Vec::new(); rank]; rank];
        for a in 0..rank {
            for b in 0..=a {
                let prod = table.basis[a].product(&table.basis[b]);
                let coords = table.rewrite(&prod, form)?;
                pair[a][b] = coords.clone();
                pair[b][a] = coords;
            }
        }
        Ok(ClosureCtx { table, form: form.clone(), pair })
    }

    pub fn rank(&self) -> usize {
        self.table.rank()
    }

    pub fn one(&self) -> SnElement {
        let mut coords = vec![Rat::zero(); self.rank()];
        coords[0] = Rat::one();
        SnElement { coords }
    }

    pub fn from_basis(&self, idx: usize) -> SnElement {
        let mut coords = vec![Rat::zero(); self.rank()];
        coords[idx] = Rat::one();
        SnElement { coords }
    }

    pub fn multiply(&self, u: &SnElement, v: &SnElement) -> SnElement {
        let rank = self.rank();
        let mut out = vec![Rat::zero(); rank];
        for a in 0..rank {
            if u.coords[a].is_zero() {
                continue;
            }
            for b in 0..rank {
                if v.coords[b].is_zero() {
                    continue;
                }
                let c = &u.coords[a] * &v.coords[b];
                for k in 0..rank {
                    if !self.pair[a][b][k].is_zero() {
                        out[k] += &c * Rat::from_integer(self.pair[a][b][k].clone());
                    }
                }
            }
        }
        SnElement { coords: out }
    }

    /// mu^(j)(zeta_k): 1 for k = 0, otherwise
    /// (-1)^(k-1) sum over S containing j of size k of the degree-1
    /// monomial with beta-support S, rewritten into the basis.
    pub fn mu_j(&self, j: usize, k: usize) -> Result<SnElement> {
        let n = self.table.n;
        if j < 1 || j > n || k > n - 1 {
            return Err(Error::IndexOutOfRange(j.max(k)));
        }
        if k == 0 {
            return Ok(self.one());
        }
        let rank = self.rank();
        let mut acc = vec![Int::zero(); rank];
        for subset in subsets_of_size(n, k) {
            if !subset.contains(&(j - 1)) {
                continue;
            }
            let mut e = vec![0u8; n];
            for &i in &subset {
                e[i] = 1;
            }
            let m = Monomial::new(1, e);
            let coords = self.table.rewrite(&m, &self.form)?;
            for (a, c) in acc.iter_mut().zip(coords) {
                *a += c;
            }
        }
        let negate = (k - 1) % 2 == 1;
        Ok(SnElement {
            coords: acc
                .into_iter()
                .map(|c| Rat::from_integer(if negate { -c } else { c }))
                .collect(),
        })
    }

    /// Trace of multiplication by the basis-coordinate vector `v` (integer).
    fn trace_of_mult(&self, v: &[Int]) -> Int {
        let rank = self.rank();
        let mut acc = Int::zero();
        for c in 0..rank {
            // coordinate c of v * m_c
            for a in 0..rank {
                if !v[a].is_zero() {
                    acc += &v[a] * &self.pair[a][c][c];
                }
            }
        }
        acc
    }

    /// Determinant of the n! x n! trace pairing on T_n; equals
    /// Disc(f)^(n!/2) (asserted).
    pub fn closure_disc(&self) -> Result<Int> {
        let disc = self.form.discriminant();
        if disc.is_zero() {
            return Err(Error::DegenerateDiscriminant);
        }
        let rank = self.rank();
        let mut m = vec![vec![Int::zero(); rank]; rank];
        for a in 0..rank {
            for b in 0..=a {
                let t = self.trace_of_mult(&self.pair[a][b]);
                m[a][b] = t.clone();
                m[b][a] = t;
            }
        }
        let det = crate::forms::bareiss_det(m);
        let expected = {
            let mut p = Int::one();
            for _ in 0..factorial(self.table.n) / 2 {
                p *= &disc;
            }
            p
        };
        debug_assert_eq!(det, expected, "closure trace-form determinant must be Disc^(n!/2)");
        Ok(det)
    }
}

/// Element of S(f;Q) in T_n coordinates (ordered as the table's basis).
#[derive(Clone, Debug, PartialEq)]
pub struct SnElement {
    pub coords: Vec<Rat>,
}

impl SnElement {
    pub fn from_int_coords(v: &[Int]) -> Self {
        SnElement { coords: v.iter().map(|c| Rat::from_integer(c.clone())).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &SnElement) -> SnElement {
        SnElement {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> SnElement {
        SnElement { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &[i64]) -> BinaryForm {
        BinaryForm::from_i64(v).unwrap()
    }

    fn poly_str(p: &SparsePoly) -> String {
        // crude readable form for assertions: sum of coeff*e-vector
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &p.terms {
            parts.push(format!("{c}*{e:?}"));
        }
        parts.join(" + ")
    }

    #[test]
    fn basis_monomials_are_units() {
        let t = RewriteTable::new(3).unwrap();
        for (i, m) in t.basis.iter().enumerate() {
            let coords = t.coords_symbolic(m).unwrap();
            for (k, p) in coords.iter().enumerate() {
                if k == i {
                    assert_eq!(*p, SparsePoly::one(4));
                } else {
                    assert!(p.is_zero());
                }
            }
        }
    }

    #[test]
    fn rewrite_example_n3() {
        // [DERIVED] beta_1 alpha_2 alpha_3 = -f_1 - m_(0,1,0) - m_(0,0,1):
        // forced by a_1 = -(sum of the three degree-1 monomials).
        let t = RewriteTable::new(3).unwrap();
        let m = Monomial::new(1, vec![1, 0, 0]);
        let coords = t.coords_symbolic(&m).unwrap();
        let idx_one = t.basis_index(&Monomial::new(0, vec![0, 0, 0])).unwrap();
        let idx_010 = t.basis_index(&Monomial::new(1, vec![0, 1, 0])).unwrap();
        let idx_001 = t.basis_index(&Monomial::new(1, vec![0, 0, 1])).unwrap();
        // -f_1 at the unit
        assert_eq!(poly_str(&coords[idx_one]), "-1*[0, 1, 0, 0]");
        let minus_one = SparsePoly::one(4).neg();
        assert_eq!(coords[idx_010], minus_one);
        assert_eq!(coords[idx_001], minus_one);
        // everything else zero
        for (k, p) in coords.iter().enumerate() {
            if k != idx_one && k != idx_010 && k != idx_001 {
                assert!(p.is_zero(), "unexpected coordinate {k}: {}", poly_str(p));
            }
        }
    }

    #[test]
    fn rewrite_example_n2_square() {
        // [DERIVED] n=2: m_(0,2) (degree 2) = -f_1 m_(0,1) - f_0 f_2.
        let t = RewriteTable::new(2).unwrap();
        let m = Monomial::new(2, vec![0, 2]);
        let coords = t.coords_symbolic(&m).unwrap();
        assert_eq!(poly_str(&coords[0]), "-1*[1, 0, 1]");
        assert_eq!(poly_str(&coords[1]), "-1*[0, 1, 0]");
    }

    #[test]
    fn multiply_identity_and_square() {
        let t = RewriteTable::new(2).unwrap();
        let form = f(&[1, 3, 5]);
        let ctx = ClosureCtx::new(&t, &form).unwrap();
        let one = ctx.one();
        let m01 = ctx.from_basis(1);
        assert_eq!(ctx.multiply(&one, &m01), m01);
        // m^2 = -f1 m - f0 f2 = -3 m - 5
        let sq = ctx.multiply(&m01, &m01);
        assert_eq!(sq.coords[0], Rat::from_integer(Int::from(-5)));
        assert_eq!(sq.coords[1], Rat::from_integer(Int::from(-3)));
    }

    #[test]
    fn mu_examples() {
        let t = RewriteTable::new(3).unwrap();
        let form = f(&[1, 2, -1, 3]);
        let ctx = ClosureCtx::new(&t, &form).unwrap();
        // k = 0 -> 1
        assert_eq!(ctx.mu_j(1, 0).unwrap(), ctx.one());
        // n=3, j=1, k=1: rewrite of beta_1 alpha_2 alpha_3
        let v = ctx.mu_j(1, 1).unwrap();
        let idx_one = 0usize;
        assert_eq!(v.coords[idx_one], Rat::from_integer(Int::from(-2))); // -f_1
        let idx_010 = t.basis_index(&Monomial::new(1, vec![0, 1, 0])).unwrap();
        let idx_001 = t.basis_index(&Monomial::new(1, vec![0, 0, 1])).unwrap();
        assert_eq!(v.coords[idx_010], -Rat::one());
        assert_eq!(v.coords[idx_001], -Rat::one());
    }

    #[test]
    fn mu_is_ring_hom_vs_rf_table() {
        use crate::ring::build_rf;
        let t = RewriteTable::new(3).unwrap();
        for form in [f(&[1, 0, -1, -1]), f(&[2, 1, 1, 3]), f(&[3, -2, 5, 1])] {
            if form.discriminant().is_zero() {
                continue;
            }
            let ctx = ClosureCtx::new(&t, &form).unwrap();
            let rf = build_rf(&form).unwrap();
            for j in 1..=3usize {
                let mus: Vec<SnElement> =
                    (0..3).map(|k| ctx.mu_j(j, k).unwrap()).collect();
                for a in 0..3usize {
                    for b in 0..3usize {
                        // zeta_a zeta_b in R_f
                        let mut ea = vec![Int::zero(); 3];
                        ea[a] = Int::one();
                        let mut eb = vec![Int::zero(); 3];
                        eb[b] = Int::one();
                        let prod = rf.mul_coords(&ea, &eb);
                        // mu of the product
                        let mut lhs = SnElement {
                            coords: vec![Rat::zero(); ctx.rank()],
                        };
                        for (k, c) in prod.iter().enumerate() {
                            lhs = lhs.add(&mus[k].scale(&Rat::from_integer(c.clone())));
                        }
                        let rhs = ctx.multiply(&mus[a], &mus[b]);
                        assert_eq!(lhs, rhs, "mu^{j} on zeta_{a} zeta_{b} for {form}");
                    }
                }
            }
        }
    }

    #[test]
    fn closure_disc_small() {
        // n=2: trace form det = f1^2 - 4 f0 f2 = Disc exactly.
        let t = RewriteTable::new(2).unwrap();
        for form in [f(&[1, 1, -1]), f(&[2, 3, -5]), f(&[1, 0, 1])] {
            let ctx = ClosureCtx::new(&t, &form).unwrap();
            assert_eq!(ctx.closure_disc().unwrap(), form.discriminant());
        }
        // [DERIVED] n=3 oracle: 6x6 trace determinant equals Disc^3.
        let t3 = RewriteTable::new(3).unwrap();
        for form in [f(&[1, 0, -1, -1]), f(&[1, 1, -1, 1])] {
            let ctx = ClosureCtx::new(&t3, &form).unwrap();
            let d = form.discriminant();
            assert_eq!(ctx.closure_disc().unwrap(), &d * &d * &d);
        }
    }

    #[test]
    fn ring_laws_exact_n3() {
        let t = RewriteTable::new(3).unwrap();
        let form = f(&[2, -1, 3, 1]);
        let ctx = ClosureCtx::new(&t, &form).unwrap();
        let rank = ctx.rank();
        for a in 0..rank {
            for b in 0..rank {
                let ua = ctx.from_basis(a);
                let ub = ctx.from_basis(b);
                assert_eq!(ctx.multiply(&ua, &ub), ctx.multiply(&ub, &ua));
                for c in 0..rank {
                    let uc = ctx.from_basis(c);
                    let lhs = ctx.multiply(&ctx.multiply(&ua, &ub), &uc);
                    let rhs = ctx.multiply(&ua, &ctx.multiply(&ub, &uc));
                    assert_eq!(lhs, rhs, "assoc {a} {b} {c}");
                }
            }
        }
    }
}
