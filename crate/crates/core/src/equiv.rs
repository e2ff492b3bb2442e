//! Deciding G(Q)-equivalence of forms through cross ratios of their roots,
//! with exact certification, plus number-field isomorphism testing.
//!
//! A candidate Moebius matrix is solved from an anchor triple of roots,
//! filtered by a full root bijection at working precision, rationalized by
//! continued fractions, and verified exactly (`lambda f^gamma = g`). A
//! NotEquivalent verdict requires the bijection test to fail for every
//! anchor triple at a precision that separates the roots by a margin.

use crate::bigfloat::{rational_reconstruct, BigComplex, BigFloat};
use crate::irreducible::{is_irreducible, Irreducibility};
use crate::modp::{degree_pattern, poly_from_form};
use crate::roots::{complex_roots, ProjectivePoint};
use crate::{BinaryForm, Error, GroupElement, Int, Rat, Result};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Cross ratio (P1,P2;P3,P4) as a projective point.
pub fn cross_ratio(
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
    p4: &ProjectivePoint,
    prec: u32,
) -> Result<ProjectivePoint> {
    let pairs = [(p1, p2), (p1, p3), (p1, p4), (p2, p3), (p2, p4), (p3, p4)];
    for (a, b) in pairs {
        if a.chordal_dist(b, prec).log2_approx() < -(prec as i64) + 16 {
            return Err(Error::Invalid("cross ratio requires pairwise distinct points".into()));
        }
    }
    let cross = |a: &ProjectivePoint, b: &ProjectivePoint| -> BigComplex {
        a.alpha.mul(&b.beta, prec).sub(&b.alpha.mul(&a.beta, prec), prec)
    };
    let beta = cross(p1, p3).mul(&cross(p2, p4), prec);
    let alpha = cross(p1, p4).mul(&cross(p2, p3), prec);
    let a2 = alpha.norm_sqr(prec);
    let b2 = beta.norm_sqr(prec);
    if a2.cmp(&b2) == std::cmp::Ordering::Less {
        // |beta| > |alpha|: normalize with beta = 1
        Ok(ProjectivePoint { alpha: alpha.div(&beta, prec), beta: BigComplex::one(), prec })
    } else {
        Ok(ProjectivePoint { beta: beta.div(&alpha, prec), alpha: BigComplex::one(), prec })
    }
}

/// A verified equivalence witness: `act(element, f) = g` exactly.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub element: GroupElement,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub enum EquivOutcome {
    Equivalent(EquivalenceWitness),
    NotEquivalent,
    Inconclusive,
}

impl EquivOutcome {
    pub fn witness(&self) -> Option<&EquivalenceWitness> {
        match self {
            EquivOutcome::Equivalent(w) => Some(w),
            _ => None,
        }
    }
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivOutcome::Equivalent(_))
    }
}

/// The Moebius matrix sending three points to [0:1], [1:0], [1:1].
fn anchor_matrix(
    q1: &ProjectivePoint,
    q2: &ProjectivePoint,
    q3: &ProjectivePoint,
    prec: u32,
) -> [[BigComplex; 2]; 2] {
    // Row 1 ~ (alpha1, -beta1), row 2 ~ (alpha2, -beta2), scaled so q3 maps
    // to [1:1]: s = (a2 b3 - b2 a3) / (a1 b3 - b1 a3).
    let cross = |a: &ProjectivePoint, b: &ProjectivePoint| -> BigComplex {
        a.alpha.mul(&b.beta, prec).sub(&b.alpha.mul(&a.beta, prec), prec)
    };
    let s = cross(q2, q3).div(&cross(q1, q3), prec);
    [
        [s.mul(&q1.alpha, prec), s.mul(&q1.beta, prec).neg()],
        [q2.alpha.clone(), q2.beta.clone().neg()],
    ]
}

fn mat_mul(a: &[[BigComplex; 2]; 2], b: &[[BigComplex; 2]; 2], prec: u32) -> [[BigComplex; 2]; 2] {
    let e = |i: usize, j: usize| -> BigComplex {
        a[i][0].mul(&b[0][j], prec).add(&a[i][1].mul(&b[1][j], prec), prec)
    };
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_inv(a: &[[BigComplex; 2]; 2], prec: u32) -> [[BigComplex; 2]; 2] {
    // adjugate; projective use does not need the determinant scaling
    [
        [a[1][1].clone(), a[0][1].neg()],
        [a[1][0].neg(), a[0][0].clone()],
    ]
}

/// Apply a Moebius matrix to a projective point: [beta:alpha] |->
/// [a beta + b alpha : c beta + d alpha].
fn moebius_apply(m: &[[BigComplex; 2]; 2], p: &ProjectivePoint, prec: u32) -> ProjectivePoint {
    let beta = m[0][0].mul(&p.beta, prec).add(&m[0][1].mul(&p.alpha, prec), prec);
    let alpha = m[1][0].mul(&p.beta, prec).add(&m[1][1].mul(&p.alpha, prec), prec);
    // normalize
    let nb = beta.norm_sqr(prec);
    let na = alpha.norm_sqr(prec);
    if na.cmp(&nb) == std::cmp::Ordering::Less {
        ProjectivePoint { alpha: alpha.div(&beta, prec), beta: BigComplex::one(), prec }
    } else {
        ProjectivePoint { beta: beta.div(&alpha, prec), alpha: BigComplex::one(), prec }
    }
}

/// Exact final verification: does some rational lambda make
/// `lambda f^gamma = g`? Returns the canonical witness.
fn verify_candidate(
    f: &BinaryForm,
    g: &BinaryForm,
    gamma: &[[Int; 2]; 2],
) -> Option<GroupElement> {
    let n = f.degree();
    let det = &gamma[0][0] * &gamma[1][1] - &gamma[0][1] * &gamma[1][0];
    if det.is_zero() {
        return None;
    }
    let img = f.substitute(gamma);
    // img and g must agree up to a rational factor lambda = g_i / img_i.
    let mut lambda: Option<Rat> = None;
    for i in 0..=n {
        let (gi, hi) = (g.coeff(i), img.coeff(i));
        match (gi.is_zero(), hi.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return None,
            (false, false) => {
                let l = Rat::new(gi.clone(), hi.clone());
                match &lambda {
                    None => lambda = Some(l),
                    Some(prev) => {
                        if *prev != l {
                            return None;
                        }
                    }
                }
            }
        }
    }
    let lambda = lambda?;
    let ge = GroupElement::new(
        n,
        lambda,
        gamma.clone().map(|r| r.map(Rat::from_integer)),
    )
    .ok()?;
    // Exact re-check through the canonical element.
    let img = ge.act(f).ok()?;
    if img.to_integer_form().as_ref() == Some(g) {
        Some(ge)
    } else {
        None
    }
}

/// Decide G(Q)-equivalence of two irreducible forms of the same degree
/// n >= 3. See the module docs for the certification contract.
pub fn find_equivalence(f: &BinaryForm, g: &BinaryForm, precision: u32) -> Result<EquivOutcome> {
    let n = f.degree();
    if n != g.degree() {
        return Err(Error::DegreeMismatch { expected: n, got: g.degree() });
    }
    if n < 3 {
        return Err(Error::Unsupported(
            "equivalence for n = 2 is handled through discriminant kernels",
        ));
    }
    for h in [f, g] {
        if h.discriminant().is_zero() {
            return Err(Error::DegenerateDiscriminant);
        }
        // Content is invisible to equivalence (it folds into lambda), so
        // certify irreducibility of the primitive part.
        let (_, prim) = h.content_and_primitive()?;
        if !is_irreducible(&prim, 60)?.is_irreducible() {
            return Err(Error::Invalid("find_equivalence requires irreducible forms".into()));
        }
    }
    // Exact invariant prefilter: Disc(g)/Disc(f) must be a positive square.
    let df = f.discriminant();
    let dg = g.discriminant();
    if df.sign() != dg.sign() {
        return Ok(EquivOutcome::NotEquivalent);
    }
    if crate::factor::squarefree_kernel(&df) != crate::factor::squarefree_kernel(&dg) {
        return Ok(EquivOutcome::NotEquivalent);
    }
    equivalence_by_roots(f, g, precision, true)
}

/// Root-matching equivalence engine; also used by the sieve oracles where
/// reducible (but separable) forms are allowed, so the irreducibility check
/// lives in the public wrapper.
pub fn equivalence_by_roots(
    f: &BinaryForm,
    g: &BinaryForm,
    precision: u32,
    irreducible_inputs: bool,
) -> Result<EquivOutcome> {
    let _ = irreducible_inputs;
    let n = f.degree();
    let mut prec = precision.max(192);
    let mut inconclusive_seen = false;
    for _escalation in 0..3 {
        let rf = complex_roots(f, prec)?;
        let rg = complex_roots(g, prec)?;
        // Certified separation floor: smallest pairwise chordal distance.
        let mut min_sep = BigFloat::from_i64(4);
        for (i, a) in rf.iter().enumerate() {
            for b in rf.iter().skip(i + 1) {
                let d = a.chordal_dist(b, prec);
                if d.cmp(&min_sep) == std::cmp::Ordering::Less {
                    min_sep = d;
                }
            }
        }
        for (i, a) in rg.iter().enumerate() {
            for b in rg.iter().skip(i + 1) {
                let d = a.chordal_dist(b, prec);
                if d.cmp(&min_sep) == std::cmp::Ordering::Less {
                    min_sep = d;
                }
            }
        }
        let tolerance = min_sep.scale2(-4); // match within sep/16
        // Anchors: first three roots of g; try all ordered triples of f's roots.
        let tg = anchor_matrix(&rg[0], &rg[1], &rg[2], prec);
        let tg_inv = mat_inv(&tg, prec);
        let mut any_rationalization_failed = false;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                'triple: for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let tf = anchor_matrix(&rf[i], &rf[j], &rf[k], prec);
                    // gamma maps g-roots to f-roots: gamma = tf^{-1} tg.
                    let cand = mat_mul(&mat_inv(&tf, prec), &tg, prec);
                    let _ = &tg_inv;
                    // Filter: candidate must biject all roots of g onto roots of f.
                    let mut used = vec![false; n];
                    for q in &rg {
                        let image = moebius_apply(&cand, q, prec);
                        let mut matched = false;
                        for (idx, target) in rf.iter().enumerate() {
                            if used[idx] {
                                continue;
                            }
                            let d = image.chordal_dist(target, prec);
                            if d.cmp(&tolerance) == std::cmp::Ordering::Less {
                                used[idx] = true;
                                matched = true;
                                break;
                            }
                        }
                        if !matched {
                            continue 'triple;
                        }
                    }
                    // Rationalize: scale so the largest entry is 1, then
                    // reconstruct each entry with a growing denominator bound.
                    let mut best: Option<(usize, usize)> = None;
                    let mut best_mag = BigFloat::zero();
                    for r in 0..2 {
                        for c in 0..2 {
                            let m = cand[r][c].norm_sqr(prec);
                            if m.cmp(&best_mag) == std::cmp::Ordering::Greater {
                                best_mag = m;
                                best = Some((r, c));
                            }
                        }
                    }
                    let (br, bc) = best.unwrap();
                    let pivot = cand[br][bc].clone();
                    let scaled: Vec<BigComplex> = [
                        &cand[0][0], &cand[0][1], &cand[1][0], &cand[1][1],
                    ]
                    .iter()
                    .map(|e| e.div(&pivot, prec))
                    .collect();
                    // imaginary parts must be numerically tiny
                    let im_ok = scaled
                        .iter()
                        .all(|e| e.im.abs().log2_approx() < -(prec as i64) / 3);
                    if !im_ok {
                        continue 'triple;
                    }
                    for bound in [1_000i64, 1_000_000, 1_000_000_000] {
                        let bd = Int::from(bound);
                        let rats: Vec<Rat> = scaled
                            .iter()
                            .map(|e| rational_reconstruct(&e.re.to_rational(), &bd))
                            .collect();
                        // common denominator -> integer matrix
                        let mut den = Int::one();
                        for r in &rats {
                            den = num_integer::Integer::lcm(&den, r.denom());
                        }
                        let ints: Vec<Int> =
                            rats.iter().map(|r| r.numer() * (&den / r.denom())).collect();
                        let gamma = [
                            [ints[0].clone(), ints[1].clone()],
                            [ints[2].clone(), ints[3].clone()],
                        ];
                        if let Some(element) = verify_candidate(f, g, &gamma) {
                            return Ok(EquivOutcome::Equivalent(EquivalenceWitness {
                                element,
                                verified: true,
                            }));
                        }
                    }
                    // A bijection matched but the matrix did not rationalize:
                    // either precision is too low or the forms are conjugate
                    // by an irrational Moebius map only.
                    any_rationalization_failed = true;
                }
            }
        }
        if !any_rationalization_failed {
            // Every triple failed the bijection test with a margin of
            // sep/16 >> numeric error: certified not equivalent.
            return Ok(EquivOutcome::NotEquivalent);
        }
        inconclusive_seen = true;
        prec *= 2;
    }
    if inconclusive_seen {
        Ok(EquivOutcome::Inconclusive)
    } else {
        Ok(EquivOutcome::NotEquivalent)
    }
}

/// Field-isomorphism verdict with certificates.
#[derive(Clone, Debug)]
pub enum FieldIso {
    /// q(x) with g(q(x), 1) = 0 mod f(x,1): an explicit root embedding.
    Yes { embedding: Vec<Rat> },
    /// A prime (unramified in both) with distinct splitting patterns, or a
    /// quadratic kernel mismatch encoded as p = 0.
    No { witness_prime: u64 },
    Unknown,
}

impl FieldIso {
    pub fn is_yes(&self) -> bool {
        matches!(self, FieldIso::Yes { .. })
    }
}

/// Decide whether K_f and K_g are isomorphic. Both forms irreducible, same
/// degree. For n = 2 the squarefree discriminant kernel is a complete
/// invariant; for n >= 3 splitting patterns certify No and an exact root
/// embedding certifies Yes.
pub fn fields_isomorphic(f: &BinaryForm, g: &BinaryForm, precision: u32) -> Result<FieldIso> {
    let n = f.degree();
    if g.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, got: g.degree() });
    }
    for h in [f, g] {
        let (_, prim) = h.content_and_primitive()?;
        if !is_irreducible(&prim, 60)?.is_irreducible() {
            return Err(Error::Invalid("fields_isomorphic requires irreducible forms".into()));
        }
    }
    if n == 2 {
        let kf = crate::factor::squarefree_kernel(&f.discriminant());
        let kg = crate::factor::squarefree_kernel(&g.discriminant());
        return if kf == kg {
            // exhibit the embedding explicitly through the generic machinery
            root_embedding(f, g, precision)
        } else {
            Ok(FieldIso::No { witness_prime: 0 })
        };
    }
    // Splitting-pattern filter: for p not dividing f_0 g_0 Disc(f) Disc(g),
    // the factorization pattern equals the splitting type of p in the field.
    let df = f.discriminant();
    let dg = g.discriminant();
    let mut checked = 0usize;
    let mut p = 2u64;
    while checked < 40 {
        let bp = Int::from(p);
        let good = !(f.coeff(0) % &bp).is_zero()
            && !(g.coeff(0) % &bp).is_zero()
            && !(&df % &bp).is_zero()
            && !(&dg % &bp).is_zero();
        if good {
            let pf = degree_pattern(&poly_from_form(f, p), p);
            let pg = degree_pattern(&poly_from_form(g, p), p);
            if let (Some(a), Some(b)) = (pf, pg) {
                if a != b {
                    return Ok(FieldIso::No { witness_prime: p });
                }
                checked += 1;
            }
        }
        p = next_prime(p);
    }
    root_embedding(f, g, precision)
}

fn next_prime(p: u64) -> u64 {
    let mut q = p + 1;
    while !crate::factor::is_prime_u128(q as u128) {
        q += 1;
    }
    q
}

/// Search for an exact rational q of degree < n with g(q(x),1) = 0 mod
/// f(x,1): complex interpolation over root pairings, rationalization, exact
/// verification.
fn root_embedding(f: &BinaryForm, g: &BinaryForm, precision: u32) -> Result<FieldIso> {
    let n = f.degree();
    // Need f_0 != 0 to use the power basis of K_f; shift if needed.
    let fw = if f.coeff(0).is_zero() {
        // substitute x -> x + y (GL2(Z) move preserves the field)
        let m = [[Int::from(1), Int::from(1)], [Int::from(0), Int::from(1)]];
        f.substitute(&m)
    } else {
        f.clone()
    };
    debug_assert!(!fw.coeff(0).is_zero());
    let mut prec = precision.max(256);
    for _ in 0..3 {
        let rf = complex_roots(&fw, prec)?;
        let rg = complex_roots(g, prec)?;
        if rf.iter().any(|p| p.is_infinity()) {
            return Ok(FieldIso::Unknown);
        }
        let rfv: Vec<BigComplex> = rf.iter().map(|p| p.affine()).collect();
        // g may have an infinite root only if g_0 = 0; that root cannot be
        // hit by a polynomial embedding value, so work with finite ones and
        // require full-degree matching.
        if rg.iter().any(|p| p.is_infinity()) {
            // embed via a shifted g instead: K_g unchanged.
            let m = [[Int::from(1), Int::from(1)], [Int::from(0), Int::from(1)]];
            let g2 = g.substitute(&m);
            return root_embedding(f, &g2, precision);
        }
        let rgv: Vec<BigComplex> = rg.iter().map(|p| p.affine()).collect();
        // Try assignments tau: K_f-root i -> K_g-root tau(i) generated by
        // all bijections; n <= 5 keeps this tractable and acceptance uses
        // n <= 4.
        if n > 5 {
            return Ok(FieldIso::Unknown);
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let assignments = all_perms(&mut perm);
        // Vandermonde solve: q(rf_i) = rg_tau(i).
        for tau in &assignments {
            let coeffs = vandermonde_solve(&rfv, tau, &rgv, prec);
            // rationalize
            let mut ok = true;
            let mut rats: Vec<Rat> = Vec::with_capacity(n);
            for c in &coeffs {
                if c.im.abs().log2_approx() > -(prec as i64) / 3 {
                    ok = false;
                    break;
                }
                rats.push(rational_reconstruct(
                    &c.re.to_rational(),
                    &Int::from(1_000_000_000i64),
                ));
            }
            if !ok {
                continue;
            }
            if verify_embedding(&fw, g, &rats) {
                return Ok(FieldIso::Yes { embedding: rats });
            }
        }
        prec *= 2;
    }
    Ok(FieldIso::Unknown)
}

fn all_perms(p: &mut Vec<usize>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k % 2 == 0 {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    let k = p.len();
    heap(k, p, &mut out);
    out
}

/// Solve for q with q(rf_i) = rg_{tau(i)} by Lagrange interpolation.
fn vandermonde_solve(
    rf: &[BigComplex],
    tau: &[usize],
    rg: &[BigComplex],
    prec: u32,
) -> Vec<BigComplex> {
    let n = rf.len();
    let mut coeffs = vec![BigComplex::zero(); n];
    for i in 0..n {
        // Lagrange basis polynomial l_i(x) = prod_{j != i} (x - rf_j)/(rf_i - rf_j)
        let mut num = vec![BigComplex::one()]; // polynomial coefficients, low->high
        let mut den = BigComplex::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            // num *= (x - rf_j)
            let mut next = vec![BigComplex::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c, prec);
                next[k] = next[k].sub(&c.mul(&rf[j], prec), prec);
            }
            num = next;
            den = den.mul(&rf[i].sub(&rf[j], prec), prec);
        }
        let scale = rg[tau[i]].div(&den, prec);
        for (k, c) in num.iter().enumerate() {
            coeffs[k] = coeffs[k].add(&c.mul(&scale, prec), prec);
        }
    }
    coeffs
}

/// Exact check: g(q(x), 1) = 0 in Q[x]/(f(x,1)) (clearing the leading
/// coefficient of f through rational arithmetic).
fn verify_embedding(f: &BinaryForm, g: &BinaryForm, q: &[Rat]) -> bool {
    use crate::ring::{FieldCtx, FieldElem};
    let ctx = match FieldCtx::new(f) {
        Ok(c) => c,
        Err(_) => return false,
    };
    let n = f.degree();
    let mut qv = q.to_vec();
    qv.resize(n, Rat::zero());
    let qe = FieldElem(qv);
    // evaluate g(q, 1) = sum g_i q^(n-i)
    let mut acc = ctx.zero();
    let mut pow = ctx.one();
    let mut powers = vec![pow.clone()];
    for _ in 0..g.degree() {
        pow = ctx.mul(&pow, &qe);
        powers.push(pow.clone());
    }
    for (i, c) in g.coeffs().iter().enumerate() {
        let term = ctx.scale(&powers[g.degree() - i], &Rat::from_integer(c.clone()));
        acc = ctx.add(&acc, &term);
    }
    acc.0.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f(v: &[i64]) -> BinaryForm {
        BinaryForm::from_i64(v).unwrap()
    }

    fn pt(re_b: f64, im_b: f64, re_a: f64, im_a: f64) -> ProjectivePoint {
        ProjectivePoint {
            beta: BigComplex::from_f64(re_b, im_b),
            alpha: BigComplex::from_f64(re_a, im_a),
            prec: 128,
        }
    }

    #[test]
    fn cross_ratio_normalization_example() {
        // [PAPER] P1=[1:0], P2=[0:1], P3=[1:1] => (P1,P2;P3,P4) = P4.
        let p1 = pt(1.0, 0.0, 0.0, 0.0);
        let p2 = pt(0.0, 0.0, 1.0, 0.0);
        let p3 = pt(1.0, 0.0, 1.0, 0.0);
        let p4 = pt(0.6, 0.3, 1.0, 0.0);
        let r = cross_ratio(&p1, &p2, &p3, &p4, 128).unwrap();
        let d = r.chordal_dist(&p4, 128).to_f64();
        assert!(d < 1e-25, "{d}");
        // [DERIVED] P4 = [3:1] -> [3:1]
        let p4 = pt(3.0, 0.0, 1.0, 0.0);
        let r = cross_ratio(&p1, &p2, &p3, &p4, 128).unwrap();
        assert!(r.chordal_dist(&p4, 128).to_f64() < 1e-25);
    }

    #[test]
    fn cross_ratio_moebius_invariance() {
        let prec = 128;
        let pts = [
            pt(0.3, 0.1, 1.0, 0.0),
            pt(-1.2, 0.7, 1.0, 0.0),
            pt(0.9, -0.4, 1.0, 0.0),
            pt(2.0, 1.0, 1.0, 0.0),
        ];
        let m = [
            [BigComplex::from_f64(1.0, 0.0), BigComplex::from_f64(1.0, 0.0)],
            [BigComplex::from_f64(0.0, 0.0), BigComplex::from_f64(1.0, 0.0)],
        ];
        let moved: Vec<ProjectivePoint> =
            pts.iter().map(|p| moebius_apply(&m, p, prec)).collect();
        let r1 = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3], prec).unwrap();
        let r2 = cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3], prec).unwrap();
        assert!(r1.chordal_dist(&r2, prec).to_f64() < 1e-10);
        // coincident points rejected
        assert!(cross_ratio(&pts[0], &pts[0], &pts[2], &pts[3], prec).is_err());
    }

    #[test]
    fn identity_witness() {
        let form = f(&[1, 0, -1, -1]);
        let out = find_equivalence(&form, &form, 192).unwrap();
        let w = out.witness().expect("equivalent to itself");
        assert!(w.verified);
        assert_eq!(w.element, GroupElement::identity(3));
    }

    #[test]
    fn recovers_applied_element() {
        let form = f(&[1, 0, -1, -1]);
        let e = GroupElement::from_integers(3, Rat::one(), [[1, 1], [0, 1]]).unwrap();
        let img = e.act(&form).unwrap().to_integer_form().unwrap();
        let out = find_equivalence(&form, &img, 192).unwrap();
        let w = out.witness().expect("constructed pair must be equivalent");
        assert_eq!(w.element, e);
    }

    #[test]
    fn distinct_kernels_not_equivalent() {
        let a = f(&[1, 0, -1, -1]); // disc -23
        let b = f(&[1, 0, 0, -2]); // disc -108, kernel -3
        let out = find_equivalence(&a, &b, 192).unwrap();
        assert!(matches!(out, EquivOutcome::NotEquivalent));
    }

    #[test]
    fn same_field_nonequivalent_quartics_detected() {
        // x^4 - 2 and its cube-style relative often stay same-field; instead
        // test a certified NotEquivalent for same-kernel forms that are not
        // equivalent: f and g = f twisted by a non-square scalar on disc.
        let a = f(&[1, 0, 0, 0, -2]);
        // act by diag(1, 2): f(x, 2y) = x^4 - 32 y^4; fields Q(2^{1/4}) both.
        let b = f(&[1, 0, 0, 0, -32]);
        let out = find_equivalence(&a, &b, 192).unwrap();
        // These ARE equivalent: witness diag matrix.
        assert!(out.is_equivalent());
    }

    #[test]
    fn roundtrip_random_small_elements() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for n in [3usize, 4] {
            let mut done = 0;
            while done < 15 {
                let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-8..=8)).collect();
                let form = f(&c);
                if form.discriminant().is_zero() {
                    continue;
                }
                match is_irreducible(&form, 60) {
                    Ok(r) if r.is_irreducible() => {}
                    _ => continue,
                }
                let m = [
                    [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
                    [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
                ];
                if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0 {
                    continue;
                }
                let num = rng.gen_range(1..=3i64);
                let den = rng.gen_range(1..=3i64);
                let sign = if rng.gen() { 1 } else { -1 };
                let e = GroupElement::from_integers(
                    n,
                    Rat::new(Int::from(sign * num), Int::from(den)),
                    m,
                )
                .unwrap();
                let img = match e.act(&form).unwrap().to_integer_form() {
                    Some(i) => i,
                    None => continue,
                };
                done += 1;
                let out = find_equivalence(&form, &img, 192).unwrap();
                let w = out.witness().expect("roundtrip must find a witness");
                // witness itself is exact; it may differ from e only if the
                // class has automorphisms, but act must reproduce img.
                let check = w.element.act(&form).unwrap().to_integer_form().unwrap();
                assert_eq!(check, img);
            }
        }
    }

    #[test]
    fn witness_symmetry() {
        let form = f(&[2, 1, -3, 2]);
        let e = GroupElement::from_integers(3, Rat::one(), [[2, 1], [1, 1]]).unwrap();
        let img = e.act(&form).unwrap().to_integer_form().unwrap();
        let fwd = find_equivalence(&form, &img, 192).unwrap();
        let back = find_equivalence(&img, &form, 192).unwrap();
        let wf = fwd.witness().unwrap();
        let wb = back.witness().unwrap();
        // inverse of the forward witness must act like the backward witness
        let inv = wf.element.inverse();
        let via_inv = inv.act(&img).unwrap().to_integer_form().unwrap();
        let via_back = wb.element.act(&img).unwrap().to_integer_form().unwrap();
        assert_eq!(via_inv, form);
        assert_eq!(via_back, form);
    }

    #[test]
    fn fields_isomorphic_examples() {
        // g = f -> Yes with q(x) = x.
        let a = f(&[1, 0, -1, -1]);
        let iso = fields_isomorphic(&a, &a, 192).unwrap();
        match &iso {
            FieldIso::Yes { embedding } => {
                assert_eq!(embedding[1], Rat::one());
                assert!(embedding[0].is_zero());
            }
            other => panic!("expected Yes, got {other:?}"),
        }
        // n=2: x^2+1 vs x^2+4 both define Q(i).
        let b = f(&[1, 0, 1]);
        let c = f(&[1, 0, 4]);
        assert!(fields_isomorphic(&b, &c, 192).unwrap().is_yes());
        // disc kernels differ
        let d = f(&[1, 0, 2]);
        assert!(matches!(
            fields_isomorphic(&b, &d, 192).unwrap(),
            FieldIso::No { .. }
        ));
        // [DERIVED] Dedekind pattern mismatch for the cubic pair.
        let e1 = f(&[1, 0, -1, -1]);
        let e2 = f(&[1, 0, 0, -2]);
        assert!(matches!(
            fields_isomorphic(&e1, &e2, 192).unwrap(),
            FieldIso::No { .. }
        ));
    }
}
