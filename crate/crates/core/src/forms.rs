//! Binary n-ic forms with exact integer coefficients, the discriminant, and
//! the (scalar, matrix) group action modulo the torus.
//!
//! A form `[f_0, ..., f_n]` is `f_0 x^n + f_1 x^{n-1} y + ... + f_n y^n`.
//! A group element is a class `[(lambda, gamma)]` with `lambda` a nonzero
//! rational and `gamma` in GL_2(Q), modulo the torus `(t^-n, diag(t,t))`;
//! it is stored canonically with `gamma` a coprime integer matrix whose
//! first nonzero entry (row-major) is positive.

use crate::poly::{symbolic_det, SparsePoly};
use crate::{Error, Int, Rat, Result};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Mutex;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm {
    coeffs: Vec<Int>,
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Int>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::Degree(coeffs.len().saturating_sub(1)));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    /// Parse a comma-separated coefficient list.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs: std::result::Result<Vec<Int>, _> =
            s.split(',').map(|t| t.trim().parse::<Int>()).collect();
        match coeffs {
            Ok(c) => Self::new(c),
            Err(e) => Err(Error::Invalid(format!("bad form '{s}': {e}"))),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Int {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Max absolute value of the coefficients.
    pub fn height(&self) -> Int {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap()
    }

    /// gcd of the coefficients (0 for the zero form).
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Split off the (positive) content: `f = c * g` with `g` primitive.
    pub fn content_and_primitive(&self) -> Result<(Int, BinaryForm)> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let c = self.content();
        let g = BinaryForm {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        };
        Ok((c, g))
    }

    pub fn neg(&self) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &Int) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Evaluate `f(x, y)` exactly.
    pub fn eval(&self, x: &Int, y: &Int) -> Int {
        // Horner in x with powers of y.
        let n = self.degree();
        let mut acc = self.coeffs[0].clone();
        let mut ypow = Int::one();
        for i in 1..=n {
            ypow *= y;
            acc = acc * x + &self.coeffs[i] * &ypow;
        }
        acc
    }

    /// Coefficients of `df/dx` as a binary form of degree n-1 (length n).
    pub fn deriv_x(&self) -> Vec<Int> {
        let n = self.degree();
        (0..n).map(|i| &self.coeffs[i] * Int::from((n - i) as u64)).collect()
    }

    /// Coefficients of `df/dy` as a binary form of degree n-1 (length n).
    pub fn deriv_y(&self) -> Vec<Int> {
        let n = self.degree();
        (1..=n).map(|i| &self.coeffs[i] * Int::from(i as u64)).collect()
    }

    /// Exact discriminant via the Sylvester resultant of the two partial
    /// derivatives, divided by `n^(n-2)` with the sign `(-1)^(n(n-1)/2)`.
    /// This route stays valid when `f_0 = 0`.
    pub fn discriminant(&self) -> Int {
        let n = self.degree();
        if self.is_zero() {
            return Int::zero();
        }
        let px = self.deriv_x();
        let py = self.deriv_y();
        let det = sylvester_det(&px, &py);
        let mut pw = Int::one();
        for _ in 0..n.saturating_sub(2) {
            pw *= Int::from(n as u64);
        }
        let (q, r) = det.div_rem(&pw);
        debug_assert!(r.is_zero(), "Sylvester determinant not divisible by n^(n-2)");
        if (n * (n - 1) / 2) % 2 == 1 {
            -q
        } else {
            q
        }
    }

    /// `f(ax+by, cx+dy)` for an integer matrix; exact integer coefficients.
    pub fn substitute(&self, m: &[[Int; 2]; 2]) -> BinaryForm {
        let n = self.degree();
        // Powers of the two linear forms (ax+by) and (cx+dy), as coefficient
        // vectors of homogeneous polynomials.
        let l1 = [m[0][0].clone(), m[0][1].clone()];
        let l2 = [m[1][0].clone(), m[1][1].clone()];
        let p1 = linear_powers(&l1, n);
        let p2 = linear_powers(&l2, n);
        let mut out = vec![Int::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            // term f_i * l1^(n-i) * l2^i
            let prod = conv(&p1[n - i], &p2[i]);
            for (k, v) in prod.iter().enumerate() {
                out[k] += &self.coeffs[i] * v;
            }
        }
        BinaryForm { coeffs: out }
    }
}

/// All powers 0..=n of a linear form `[a, b]` (meaning ax + by).
fn linear_powers(l: &[Int; 2], n: usize) -> Vec<Vec<Int>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(vec![Int::one()]);
    for k in 1..=n {
        let prev = &out[k - 1];
        let mut cur = vec![Int::zero(); k + 1];
        for (i, c) in prev.iter().enumerate() {
            cur[i] += c * &l[0];
            cur[i + 1] += c * &l[1];
        }
        out.push(cur);
    }
    out
}

fn conv(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Determinant of the Sylvester matrix of two degree-(m-1) coefficient
/// vectors of length m, by fraction-free Bareiss elimination.
fn sylvester_det(p: &[Int], q: &[Int]) -> Int {
    let m = p.len();
    debug_assert_eq!(q.len(), m);
    let size = 2 * (m - 1);
    if size == 0 {
        return Int::one();
    }
    let mut a = vec![vec![Int::zero(); size]; size];
    for r in 0..m - 1 {
        for (j, c) in p.iter().enumerate() {
            a[r][r + j] = c.clone();
        }
        for (j, c) in q.iter().enumerate() {
            a[m - 1 + r][r + j] = c.clone();
        }
    }
    bareiss_det(a)
}

/// Fraction-free determinant (Bareiss) of an integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<Int>>) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // pivot search
            let mut found = None;
            for r in k + 1..n {
                if !a[r][k].is_zero() {
                    found = Some(r);
                    break;
                }
            }
            match found {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss exact division failed");
                a[i][j] = q;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// The discriminant of the generic degree-n form as a polynomial in the
/// n+1 coefficient variables. Memoized; used for symbolic norm bounds and
/// the residue-class density scans.
pub fn disc_polynomial(n: usize) -> SparsePoly {
    static CACHE: Mutex<Vec<Option<SparsePoly>>> = Mutex::new(Vec::new());
    {
        let cache = CACHE.lock().unwrap();
        if let Some(Some(p)) = cache.get(n) {
            return p.clone();
        }
    }
    assert!((2..=8).contains(&n), "disc_polynomial: n out of range");
    let nv = n + 1;
    // Sylvester matrix of the two partials with symbolic entries.
    let m = n; // each partial has m coefficients (degree n-1)
    let size = 2 * (m - 1);
    let mut mat = vec![vec![SparsePoly::zero(); size]; size];
    for r in 0..m - 1 {
        for j in 0..m {
            // d/dx: (n-j) f_j ; d/dy: (j+1) f_{j+1}
            let mut px = SparsePoly::var(nv, j);
            px = px.mul(&SparsePoly::constant(nv, Int::from((n - j) as u64)));
            let mut py = SparsePoly::var(nv, j + 1);
            py = py.mul(&SparsePoly::constant(nv, Int::from((j + 1) as u64)));
            mat[r][r + j].add_assign(&px);
            mat[m - 1 + r][r + j].add_assign(&py);
        }
    }
    let det = symbolic_det(&mat);
    // divide by n^(n-2), apply sign
    let mut pw = Int::one();
    for _ in 0..n - 2 {
        pw *= Int::from(n as u64);
    }
    let mut out = SparsePoly::zero();
    for (e, c) in &det.terms {
        let (q, r) = c.div_rem(&pw);
        assert!(r.is_zero());
        out.terms.insert(e.clone(), q);
    }
    let disc = if (n * (n - 1) / 2) % 2 == 1 { out.neg() } else { out };
    let mut cache = CACHE.lock().unwrap();
    if cache.len() <= n {
        cache.resize(n + 1, None);
    }
    cache[n] = Some(disc.clone());
    disc
}

/// A form with rational coefficients, as produced by the group action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalForm {
    pub coeffs: Vec<Rat>,
}

impl RationalForm {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_integer_form(&self) -> Option<BinaryForm> {
        if !self.is_integral() {
            return None;
        }
        Some(BinaryForm {
            coeffs: self.coeffs.iter().map(|c| c.to_integer()).collect(),
        })
    }

    pub fn from_integer(f: &BinaryForm) -> Self {
        RationalForm {
            coeffs: f.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect(),
        }
    }

    pub fn scale(&self, l: &Rat) -> Self {
        RationalForm { coeffs: self.coeffs.iter().map(|c| c * l).collect() }
    }
}

/// Canonical class of `(lambda, gamma)` modulo the torus, for the action on
/// degree-n forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    n: usize,
    lambda: Rat,
    gamma: [[Int; 2]; 2],
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(lambda={}, gamma=[[{},{}],[{},{}]])",
            self.lambda, self.gamma[0][0], self.gamma[0][1], self.gamma[1][0], self.gamma[1][1]
        )
    }
}

impl GroupElement {
    /// Canonicalize `(lambda, gamma)` with rational entries: scale `gamma`
    /// to a coprime integer matrix with positive first nonzero entry, and
    /// absorb the scaling into `lambda` through the torus relation
    /// `(lambda, gamma) ~ (t^-n lambda, t gamma)`.
    pub fn new(n: usize, lambda: Rat, gamma: [[Rat; 2]; 2]) -> Result<Self> {
        if n < 2 {
            return Err(Error::Degree(n));
        }
        if lambda.is_zero() {
            return Err(Error::DegenerateGroupElement);
        }
        let det = &gamma[0][0] * &gamma[1][1] - &gamma[0][1] * &gamma[1][0];
        if det.is_zero() {
            return Err(Error::DegenerateGroupElement);
        }
        // Common denominator, then divide by content.
        let mut den = Int::one();
        for row in &gamma {
            for v in row {
                den = den.lcm(v.denom());
            }
        }
        let ints: Vec<Int> = gamma
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        let mut g = Int::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        // First nonzero entry positive.
        let lead_neg = ints.iter().find(|v| !v.is_zero()).unwrap().is_negative();
        let scale_num = if lead_neg { -&g } else { g.clone() };
        // gamma_canonical = (den / scale_num) * gamma, i.e. t = den/scale_num.
        let t = Rat::new(den.clone(), scale_num.clone());
        let m = |v: &Int| -> Int {
            let x = v / &g;
            if lead_neg {
                -x
            } else {
                x
            }
        };
        let canon = [[m(&ints[0]), m(&ints[1])], [m(&ints[2]), m(&ints[3])]];
        // lambda' = t^{-n} lambda
        let mut tpow = Rat::one();
        for _ in 0..n {
            tpow *= &t;
        }
        let lambda2 = lambda / tpow;
        Ok(GroupElement { n, lambda: lambda2, gamma: canon })
    }

    /// Build from integer data (already canonical up to sign/content).
    pub fn from_integers(n: usize, lambda: Rat, gamma: [[i64; 2]; 2]) -> Result<Self> {
        let g = gamma.map(|row| row.map(|v| Rat::from_integer(Int::from(v))));
        Self::new(n, lambda, g)
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            n,
            lambda: Rat::one(),
            gamma: [[Int::one(), Int::zero()], [Int::zero(), Int::one()]],
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn gamma(&self) -> &[[Int; 2]; 2] {
        &self.gamma
    }

    pub fn det(&self) -> Int {
        &self.gamma[0][0] * &self.gamma[1][1] - &self.gamma[0][1] * &self.gamma[1][0]
    }

    /// Induced group law: `act(g2, act(g1, f)) = act(g1.compose(g2), f)`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: other.n });
        }
        let a = &self.gamma;
        let b = &other.gamma;
        let prod = [
            [
                Rat::from_integer(&a[0][0] * &b[0][0] + &a[0][1] * &b[1][0]),
                Rat::from_integer(&a[0][0] * &b[0][1] + &a[0][1] * &b[1][1]),
            ],
            [
                Rat::from_integer(&a[1][0] * &b[0][0] + &a[1][1] * &b[1][0]),
                Rat::from_integer(&a[1][0] * &b[0][1] + &a[1][1] * &b[1][1]),
            ],
        ];
        GroupElement::new(self.n, &self.lambda * &other.lambda, prod)
    }

    pub fn inverse(&self) -> GroupElement {
        // (lambda, gamma)^-1 = (lambda^-1 det^-n, adj(gamma)) up to torus.
        let det = self.det();
        let adj = [
            [
                Rat::from_integer(self.gamma[1][1].clone()),
                Rat::from_integer(-&self.gamma[0][1]),
            ],
            [
                Rat::from_integer(-&self.gamma[1][0]),
                Rat::from_integer(self.gamma[0][0].clone()),
            ],
        ];
        let mut dpow = Rat::one();
        let dr = Rat::from_integer(det);
        for _ in 0..self.n {
            dpow *= &dr;
        }
        let lambda = Rat::one() / (&self.lambda * dpow);
        GroupElement::new(self.n, lambda, adj).expect("inverse of nondegenerate element")
    }

    /// `lambda * f^gamma`, exact rational coefficients.
    pub fn act(&self, f: &BinaryForm) -> Result<RationalForm> {
        if f.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: f.degree() });
        }
        let sub = f.substitute(&self.gamma);
        Ok(RationalForm::from_integer(&sub).scale(&self.lambda))
    }

    /// Action on a rational form (used for composing actions in tests).
    pub fn act_rational(&self, f: &RationalForm) -> Result<RationalForm> {
        if f.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: f.degree() });
        }
        // Clear denominators, substitute, rescale.
        let mut den = Int::one();
        for c in &f.coeffs {
            den = den.lcm(c.denom());
        }
        let ints = BinaryForm {
            coeffs: f.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect(),
        };
        let sub = ints.substitute(&self.gamma);
        let l = &self.lambda / Rat::from_integer(den);
        Ok(RationalForm::from_integer(&sub).scale(&l))
    }
}

/// Total order used by the sieve: height first, then lexicographic
/// comparison of the coefficient vectors.
pub fn form_order(a: &BinaryForm, b: &BinaryForm) -> std::cmp::Ordering {
    a.height().cmp(&b.height()).then_with(|| a.coeffs.cmp(&b.coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use rand::{Rng, SeedableRng};

    fn f(v: &[i64]) -> BinaryForm {
        BinaryForm::from_i64(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn disc_examples() {
        // [PAPER] x^2+xy-y^2 has discriminant 5.
        assert_eq!(f(&[1, 1, -1]).discriminant(), Int::from(5));
        // [DERIVED] x^3+1: resultant oracle gives -27 (classical -4p^3-27q^2).
        assert_eq!(f(&[1, 0, 0, 1]).discriminant(), Int::from(-27));
        // [TRIVIAL] homogeneity of degree 2n-2: t=2, n=2 -> 4*5.
        assert_eq!(f(&[2, 2, -2]).discriminant(), Int::from(20));
        // f_0 = 0 stays valid: xy has disc 1, x^2 y (repeated root) disc 0.
        assert_eq!(f(&[0, 1, 0]).discriminant(), Int::from(1));
        assert_eq!(f(&[0, 1, 0, 0]).discriminant(), Int::from(0));
    }

    /// Univariate resultant oracle: Disc = (-1)^(n(n-1)/2) Res(f, f') / f_0,
    /// valid when f_0 != 0. Independent of the Sylvester-of-partials route.
    fn disc_oracle(form: &BinaryForm) -> Int {
        let n = form.degree();
        assert!(!form.coeff(0).is_zero());
        let p: Vec<Int> = form.coeffs().to_vec();
        let dp: Vec<Int> = (0..n).map(|i| &p[i] * Int::from((n - i) as u64)).collect();
        // Sylvester matrix of p (deg n) and dp (deg n-1): (2n-1) x (2n-1).
        let size = 2 * n - 1;
        let mut m = vec![vec![Int::zero(); size]; size];
        for r in 0..n - 1 {
            for (j, c) in p.iter().enumerate() {
                m[r][r + j] = c.clone();
            }
        }
        for r in 0..n {
            for (j, c) in dp.iter().enumerate() {
                m[n - 1 + r][r + j] = c.clone();
            }
        }
        let det = bareiss_det(m);
        let q = det / form.coeff(0);
        if (n * (n - 1) / 2) % 2 == 1 {
            -q
        } else {
            q
        }
    }

    #[test]
    fn disc_matches_resultant_oracle_all_degrees() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in 2..=6 {
            for _ in 0..200 {
                let mut c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-9..=9)).collect();
                if c[0] == 0 {
                    c[0] = 1;
                }
                let form = f(&c);
                assert_eq!(form.discriminant(), disc_oracle(&form), "form {form}");
            }
        }
    }

    #[test]
    fn disc_polynomial_matches_direct() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..=5 {
            let poly = disc_polynomial(n);
            for _ in 0..50 {
                let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-6..=6)).collect();
                let form = f(&c);
                let vals: Vec<Int> = c.iter().map(|&x| Int::from(x)).collect();
                assert_eq!(poly.eval(&vals), form.discriminant());
            }
        }
    }

    #[test]
    fn height_and_content() {
        assert_eq!(f(&[1, 1, -1]).height(), Int::from(1));
        assert_eq!(f(&[0, 0, 0]).height(), Int::from(0));
        assert_eq!(f(&[2, -7, 3]).height(), Int::from(7));
        let (c, g) = f(&[2, 4, 6]).content_and_primitive().unwrap();
        assert_eq!(c, Int::from(2));
        assert_eq!(g, f(&[1, 2, 3]));
        let (c, g) = f(&[1, 1, -1]).content_and_primitive().unwrap();
        assert_eq!(c, Int::from(1));
        assert_eq!(g, f(&[1, 1, -1]));
        // n = 1 violates the degree contract.
        assert!(matches!(BinaryForm::from_i64(&[-3, -6]), Err(Error::Degree(1))));
    }

    #[test]
    fn act_examples() {
        let form = f(&[1, 0, 1]);
        // identity
        let id = GroupElement::identity(2);
        assert_eq!(id.act(&form).unwrap(), RationalForm::from_integer(&form));
        // unipotent: f(x+y, y) = x^2 + 2xy + 2y^2
        let g = GroupElement::from_integers(2, Rat::one(), [[1, 1], [0, 1]]).unwrap();
        let img = g.act(&form).unwrap();
        assert_eq!(img.to_integer_form().unwrap(), f(&[1, 2, 2]));
        assert_eq!(img.to_integer_form().unwrap().discriminant(), Int::from(-4));
        // torus pair acts trivially: (t^-n, diag(t,t)) with t = 3/2.
        let t = rat(3, 2);
        let tor = GroupElement::new(
            2,
            Rat::one() / (&t * &t),
            [[t.clone(), Rat::zero()], [Rat::zero(), t.clone()]],
        )
        .unwrap();
        assert_eq!(tor, GroupElement::identity(2));
        assert_eq!(tor.act(&form).unwrap(), RationalForm::from_integer(&form));
    }

    #[test]
    fn canonical_equality_dedups_torus() {
        // (1, [[2,0],[0,2]]) ~ (2^n, I) for n = 3: lambda' = 1 * (1/2)^-3? check both collapse
        let a = GroupElement::from_integers(3, Rat::one(), [[2, 0], [0, 2]]).unwrap();
        let b = GroupElement::new(
            3,
            Rat::from_i64(8).unwrap(),
            [[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disc_covariance_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 2..=5usize {
            let two = Int::from(2u32);
            for _ in 0..100 {
                let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-10..=10)).collect();
                let form = f(&c);
                let lam = rat(rng.gen_range(1..=6), rng.gen_range(1..=6))
                    * rat(if rng.gen() { 1 } else { -1 }, 1);
                let mut m;
                loop {
                    m = [
                        [rng.gen_range(-5..=5), rng.gen_range(-5..=5)],
                        [rng.gen_range(-5..=5), rng.gen_range(-5..=5)],
                    ];
                    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0 {
                        break;
                    }
                }
                let g = GroupElement::from_integers(n, lam.clone(), m).unwrap();
                let img = g.act(&form).unwrap();
                // Clear denominators to compare exactly: disc(c*h) = c^(2n-2) disc(h).
                let mut den = Int::one();
                for x in &img.coeffs {
                    den = den.lcm(x.denom());
                }
                let int_img = BinaryForm::new(
                    img.coeffs.iter().map(|x| x.numer() * (&den / x.denom())).collect(),
                )
                .unwrap();
                let mut denpow = Int::one();
                for _ in 0..2 * n - 2 {
                    denpow *= &den;
                }
                let lhs = int_img.discriminant();
                // lambda^(2n-2) det^(n(n-1)) disc(f) * den^(2n-2)
                let l = g.lambda();
                let mut lampow = Rat::one();
                for _ in 0..2 * n - 2 {
                    lampow *= l;
                }
                let mut detpow = Int::one();
                let det = g.det();
                for _ in 0..n * (n - 1) {
                    detpow *= &det;
                }
                let rhs = lampow * Rat::from_integer(detpow * form.discriminant() * denpow);
                assert!(rhs.is_integer());
                assert_eq!(lhs, rhs.to_integer(), "n={n}");
                let _ = two;
            }
        }
    }

    #[test]
    fn action_is_right_action() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-8..=8)).collect();
            let form = f(&c);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| loop {
                let m = [
                    [rng.gen_range(-4..=4), rng.gen_range(-4..=4)],
                    [rng.gen_range(-4..=4), rng.gen_range(-4..=4)],
                ];
                if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0 {
                    return GroupElement::from_integers(n, rat(rng.gen_range(1..=4), rng.gen_range(1..=4)), m)
                        .unwrap();
                }
            };
            let g1 = mk(&mut rng);
            let g2 = mk(&mut rng);
            let lhs = g2.act_rational(&g1.act(&form).unwrap()).unwrap();
            let rhs = g1.compose(&g2).unwrap().act(&form).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compose_inverse_is_identity() {
        let g = GroupElement::from_integers(3, rat(3, 7), [[2, 1], [5, 3]]).unwrap();
        assert_eq!(g.compose(&g.inverse()).unwrap(), GroupElement::identity(3));
        assert_eq!(g.inverse().compose(&g).unwrap(), GroupElement::identity(3));
    }
}
