//! Complex roots of binary forms as points on the projective line.
//!
//! Double-precision companion-matrix eigenvalues seed a Newton refinement
//! in software floats at the requested precision. Repeated roots are ruled
//! out exactly (discriminant check) before any numerics run.

use crate::bigfloat::{BigComplex, BigFloat};
use crate::{BinaryForm, Error, Int, Result};
use num_traits::{ToPrimitive, Zero};

/// A root `[beta : alpha]`, normalized so `max(|beta|, |alpha|) = 1` (the
/// finite representative keeps `alpha = 1` while `|beta| <= 1`).
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    pub beta: BigComplex,
    pub alpha: BigComplex,
    pub prec: u32,
}

impl ProjectivePoint {
    pub fn infinity(prec: u32) -> Self {
        ProjectivePoint { beta: BigComplex::one(), alpha: BigComplex::zero(), prec }
    }

    pub fn is_infinity(&self) -> bool {
        self.alpha.is_zero()
    }

    /// Build from an affine value, normalizing so the larger coordinate has
    /// modulus one.
    pub fn from_affine(z: BigComplex, prec: u32) -> Self {
        let a = z.norm_sqr(prec);
        if a.cmp(&BigFloat::one()) == std::cmp::Ordering::Greater {
            let inv = BigComplex::one().div(&z, prec);
            ProjectivePoint { beta: BigComplex::one(), alpha: inv, prec }
        } else {
            ProjectivePoint { beta: z, alpha: BigComplex::one(), prec }
        }
    }

    /// Affine value beta/alpha; caller must exclude the infinite point.
    pub fn affine(&self) -> BigComplex {
        self.beta.div(&self.alpha, self.prec)
    }

    /// Chordal distance |b1 a2 - b2 a1| between normalized points;
    /// comparable across finite and infinite points.
    pub fn chordal_dist(&self, other: &Self, prec: u32) -> BigFloat {
        let cross = self
            .beta
            .mul(&other.alpha, prec)
            .sub(&other.beta.mul(&self.alpha, prec), prec);
        cross.abs(prec)
    }
}

/// Evaluate the dehomogenized polynomial `p(z) = sum p_i z^(m-i)` and its
/// derivative at `z`.
fn eval_with_deriv(p: &[BigComplex], z: &BigComplex, prec: u32) -> (BigComplex, BigComplex) {
    let mut v = p[0].clone();
    let mut d = BigComplex::zero();
    for c in &p[1..] {
        d = d.mul(z, prec).add(&v, prec);
        v = v.mul(z, prec).add(c, prec);
    }
    (v, d)
}

/// Roots of `f` as projective points. Requires `Disc(f) != 0` (checked
/// exactly); returns `[1:0]` for the degree drop when `f_0 = 0`.
pub fn complex_roots(f: &BinaryForm, precision: u32) -> Result<Vec<ProjectivePoint>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.discriminant().is_zero() {
        return Err(Error::RepeatedRoots);
    }
    let n = f.degree();
    let prec = precision.max(64) + 64;
    // Disc != 0 means at most one root at infinity.
    let lead_zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    debug_assert!(lead_zeros <= 1);
    let p: Vec<&Int> = f.coeffs()[lead_zeros..].iter().collect();
    let m = p.len() - 1; // degree of the dehomogenization

    let mut points = Vec::with_capacity(n);
    if lead_zeros == 1 {
        points.push(ProjectivePoint::infinity(precision));
    }
    if m == 0 {
        return Ok(points);
    }

    // Companion matrix eigenvalues in f64 (rows: shifted identity; first
    // column: -p_{i+1}/p_0 of the monicized polynomial).
    let pf: Vec<f64> = p.iter().map(|c| c.to_f64().unwrap()).collect();
    let eig = companion_eigenvalues(&pf);

    // Newton refinement at escalating precision.
    let pc: Vec<BigComplex> = p.iter().map(|c| BigComplex::from_bigint(c)).collect();
    let height = BigFloat::from_bigint(&f.height());
    let mut escalations = 0u32;
    let mut work = prec;
    'outer: loop {
        let mut roots: Vec<BigComplex> = Vec::with_capacity(m);
        for e in &eig {
            let mut z = BigComplex::from_f64(e.0, e.1);
            let mut ok = false;
            for _ in 0..(work as usize / 8).max(24) {
                let (v, d) = eval_with_deriv(&pc, &z, work);
                if d.is_zero() {
                    break;
                }
                let step = v.div(&d, work);
                z = z.sub(&step, work);
                // Converged when the step is far below the target precision.
                let zmag = z.abs(work).log2_approx().max(0);
                if step.is_zero() || step.abs(work).log2_approx() < zmag - work as i64 + 8 {
                    ok = true;
                    break;
                }
            }
            if !ok {
                escalations += 1;
                if escalations > 4 {
                    return Err(Error::PrecisionExhausted(escalations));
                }
                work *= 2;
                continue 'outer;
            }
            roots.push(z);
        }
        // Residual check on normalized coordinates:
        // |f(beta, alpha)| <= 2^(-precision/2) * Ht(f).
        let mut pts = points.clone();
        for z in &roots {
            pts.push(ProjectivePoint::from_affine(z.clone(), precision));
        }
        let bound = height.scale2(-(precision as i64) / 2);
        let mut sep_ok = true;
        'check: for (i, a) in pts.iter().enumerate() {
            if !a.is_infinity() {
                let res = eval_form(f, &a.beta, &a.alpha, work);
                if res.abs(work).cmp(&bound) == std::cmp::Ordering::Greater {
                    sep_ok = false;
                    break 'check;
                }
            }
            for b in pts.iter().skip(i + 1) {
                // Distinctness above the precision floor.
                let d = a.chordal_dist(b, work);
                if d.log2_approx() < -(work as i64) / 2 {
                    sep_ok = false;
                    break 'check;
                }
            }
        }
        if !sep_ok {
            escalations += 1;
            if escalations > 4 {
                return Err(Error::PrecisionExhausted(escalations));
            }
            work *= 2;
            continue 'outer;
        }
        // Deterministic order: infinity first, then by (re, im) of the
        // affine value.
        pts.sort_by(|a, b| match (a.is_infinity(), b.is_infinity()) {
            (true, false) => std::cmp::Ordering::Less,
            (false, true) => std::cmp::Ordering::Greater,
            (true, true) => std::cmp::Ordering::Equal,
            _ => {
                let za = a.affine();
                let zb = b.affine();
                za.re.cmp(&zb.re).then(za.im.cmp(&zb.im))
            }
        });
        return Ok(pts);
    }
}

/// f64 eigenvalues of the companion matrix of `p_0 z^m + ... + p_m`.
fn companion_eigenvalues(p: &[f64]) -> Vec<(f64, f64)> {
    let m = p.len() - 1;
    let scale = p.iter().map(|c| c.abs()).fold(0.0f64, f64::max);
    let pn: Vec<f64> = p.iter().map(|c| c / scale).collect();
    let mut comp = nalgebra::DMatrix::<f64>::zeros(m, m);
    for i in 1..m {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..m {
        comp[(i, m - 1)] = -pn[m - i] / pn[0];
    }
    comp.complex_eigenvalues().iter().map(|e| (e.re, e.im)).collect()
}

/// Evaluate the form at complex projective coordinates.
pub fn eval_form(f: &BinaryForm, beta: &BigComplex, alpha: &BigComplex, prec: u32) -> BigComplex {
    let n = f.degree();
    let mut bpow = vec![BigComplex::one()];
    let mut apow = vec![BigComplex::one()];
    for k in 1..=n {
        bpow.push(bpow[k - 1].mul(beta, prec));
        apow.push(apow[k - 1].mul(alpha, prec));
    }
    let mut acc = BigComplex::zero();
    for i in 0..=n {
        if f.coeff(i).is_zero() {
            continue;
        }
        let t = bpow[n - i].mul(&apow[i], prec);
        acc = acc.add(&t.scale(&BigFloat::from_bigint(f.coeff(i)), prec), prec);
    }
    acc
}

/// Real roots of `f(x,1)` as f64 approximations, plus a flag for the point
/// at infinity. Used only to center search windows, never as evidence.
pub fn approx_real_roots(f: &BinaryForm) -> (Vec<f64>, bool) {
    let lead_zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    let p: Vec<f64> = f.coeffs()[lead_zeros..]
        .iter()
        .map(|c| c.to_f64().unwrap())
        .collect();
    let m = p.len() - 1;
    let mut reals = Vec::new();
    if m >= 1 {
        for e in companion_eigenvalues(&p) {
            if e.1.abs() <= 1e-7 * (1.0 + e.0.abs()) {
                reals.push(e.0);
            }
        }
    }
    (reals, lead_zeros > 0)
}

/// All complex affine roots of `f(x,1)` in f64 (degree must not drop).
pub fn approx_complex_roots(f: &BinaryForm) -> Vec<(f64, f64)> {
    let p: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap()).collect();
    companion_eigenvalues(&p)
}
