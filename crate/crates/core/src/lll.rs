//! Floating-point LLL with integer transformation tracking, and the
//! successive-minima estimates for S(f;Z) under the embedding sup-norm.
//!
//! The lattice is the image of Z^(n!) under the embedding matrix, realified
//! to R^(2 n!). Classical LLL guarantees are enough: the claims being
//! tested are all coarse (within fixed dimension-dependent factors).

use crate::bigfloat::BigFloat;
use crate::closure::SnElement;
use crate::embed::EmbeddingMatrix;
use crate::{Rat, Result};
use num_traits::One;

/// LLL-reduce `basis` (rows are vectors); returns the reduced vectors and
/// the integer combinations expressing them in the original basis.
pub fn lll_reduce(mut basis: Vec<Vec<f64>>, delta: f64) -> (Vec<Vec<f64>>, Vec<Vec<i128>>) {
    let m = basis.len();
    let mut transform: Vec<Vec<i128>> = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();
    if m == 0 {
        return (basis, transform);
    }
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut ortho: Vec<Vec<f64>> = vec![vec![]; m];
    let mut mu = vec![vec![0.0f64; m]; m];
    let mut norms = vec![0.0f64; m];

    let gso = |basis: &[Vec<f64>],
               ortho: &mut Vec<Vec<f64>>,
               mu: &mut Vec<Vec<f64>>,
               norms: &mut Vec<f64>| {
        for i in 0..basis.len() {
            let mut v = basis[i].clone();
            for j in 0..i {
                let m_ij = if norms[j].abs() < 1e-300 {
                    0.0
                } else {
                    dot(&basis[i], &ortho[j]) / norms[j]
                };
                mu[i][j] = m_ij;
                for (x, y) in v.iter_mut().zip(&ortho[j]) {
                    *x -= m_ij * y;
                }
            }
            norms[i] = dot(&v, &v);
            ortho[i] = v;
        }
    };

    gso(&basis, &mut ortho, &mut mu, &mut norms);
    let mut k = 1usize;
    let mut steps = 0usize;
    while k < m && steps < 100_000 {
        steps += 1;
        // size reduction
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r.abs() >= 1.0 {
                let ri = r as i128;
                for idx in 0..basis[k].len() {
                    let t = r * basis[j][idx];
                    basis[k][idx] -= t;
                }
                for idx in 0..m {
                    transform[k][idx] -= ri * transform[j][idx];
                }
                gso(&basis, &mut ortho, &mut mu, &mut norms);
            }
        }
        // Lovasz condition
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            transform.swap(k, k - 1);
            gso(&basis, &mut ortho, &mut mu, &mut norms);
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
    }
    (basis, transform)
}

/// Two-sided successive-minima estimates of S(f;Z) under the sup-norm over
/// the embeddings: sup-norms of an LLL-reduced basis, sorted ascending.
pub fn successive_minima_estimate(emb: &EmbeddingMatrix) -> Result<Vec<f64>> {
    let rank = emb.rank();
    // Realified columns: basis vector c maps to (Re sigma_pi(m_c), Im ...).
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rank);
    for c in 0..rank {
        let mut v = Vec::with_capacity(2 * rank);
        for row in 0..rank {
            let (re, im) = emb.rows[row][c].to_f64();
            v.push(re);
            v.push(im);
        }
        basis.push(v);
    }
    let (_, transform) = lll_reduce(basis, 0.99);
    // Sup-norm (over embeddings) of each reduced vector, computed through
    // the exact coordinates for stability.
    let mut mins: Vec<f64> = transform
        .iter()
        .map(|combo| {
            let coords: Vec<Rat> = combo
                .iter()
                .map(|&c| Rat::from_integer(crate::Int::from(c)))
                .collect();
            let el = SnElement { coords };
            emb.norm(&el).to_f64()
        })
        .collect();
    mins.sort_by(f64::total_cmp);
    Ok(mins)
}

/// Product of the estimates, for Minkowski-type consistency checks.
pub fn minima_product(mins: &[f64]) -> f64 {
    mins.iter().product()
}

/// Shortest-vector sanity: for any f the element 1 has norm 1, so the first
/// minimum is at most 1; equality holds when no integer combination is
/// shorter, which the estimate reports.
pub fn first_minimum_bound() -> BigFloat {
    BigFloat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_skewed_2d_lattice() {
        // basis (1, 0), (1000000.5-ish skew): reduced vectors ~ orthogonal
        let basis = vec![vec![1.0, 0.0], vec![100_000.0, 1.0]];
        let (red, tr) = lll_reduce(basis, 0.99);
        // Shortest vector must be (1,0) and the second ~(0,1).
        let mut norms: Vec<f64> = red.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
        norms.sort_by(f64::total_cmp);
        assert!((norms[0] - 1.0).abs() < 1e-9);
        assert!(norms[1] < 2.0);
        // transform rows are unimodular-ish: det +-1
        let det = tr[0][0] * tr[1][1] - tr[0][1] * tr[1][0];
        assert_eq!(det.abs(), 1);
    }

    #[test]
    fn gaussian_lattice_minima() {
        use crate::closure::RewriteTable;
        use crate::embed::embeddings;
        // f = x^2 + y^2: S(f;Z) has embedding vectors (1, +-i): minima (1, ~1).
        let t = RewriteTable::new(2).unwrap();
        let f = crate::BinaryForm::from_i64(&[1, 0, 1]).unwrap();
        let emb = embeddings(&f, &t.basis, 96).unwrap();
        let mins = successive_minima_estimate(&emb).unwrap();
        assert_eq!(mins.len(), 2);
        assert!((mins[0] - 1.0).abs() < 1e-6, "{mins:?}");
        assert!(mins[1] <= 2.0 + 1e-6);
    }
}
