//! Densities of the exceptional sets B(eps) and C(s), residue-class
//! discriminant densities, the sieve counting G(Q)-equivalence classes by
//! height, field counting on top of it, and asymptotic fitting.
//!
//! The class sieve is a single pass over all forms of height <= X, sharded
//! by coefficient prefix; minimality is a per-form predicate, so shards
//! are stateless and reports merge by addition.

use crate::equiv::{equivalence_by_roots, fields_isomorphic, EquivOutcome, FieldIso};
use crate::factor::{largest_square_divisor, squarefree_kernel};
use crate::forms::{disc_polynomial, BinaryForm};
use crate::irreducible::{is_irreducible, Irreducibility};
use crate::minimal::{is_minimal_representative, MinimalityContext};
use crate::{Error, Int, Rat, Result};
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// Sieve dials: B(eps) = {|Disc| < eps Ht^(2n-2)}, C(s) = {a^2 | Disc for
/// some a > s}.
#[derive(Clone, Debug)]
pub struct SievePredicates {
    pub epsilon: Rat,
    pub s: u64,
}

impl Default for SievePredicates {
    fn default() -> Self {
        // defaults chosen so B u C stays a small slice at desk scale
        SievePredicates { epsilon: Rat::new(Int::from(1), Int::from(100)), s: 10 }
    }
}

/// Exact membership in B(eps): |Disc(f)| < eps * Ht(f)^(2n-2).
pub fn in_b(f: &BinaryForm, eps: &Rat) -> bool {
    let n = f.degree();
    let disc = f.discriminant().abs();
    let mut hpow = Int::from(1);
    let h = f.height();
    for _ in 0..2 * n - 2 {
        hpow *= &h;
    }
    &disc * eps.denom() < eps.numer() * &hpow
}

/// Exact membership in C(s): the largest square divisor of Disc exceeds s
/// (the zero discriminant is divisible by every square).
pub fn in_c(f: &BinaryForm, s: u64) -> bool {
    let disc = f.discriminant();
    if disc.is_zero() {
        return true;
    }
    largest_square_divisor(&disc) > Int::from(s)
}

/// Exact fraction of residue classes f in V_n(Z/p^k Z) with p^k | Disc(f),
/// by exhaustive scan. Budget: p^(k(n+1)) <= 2^30.
pub fn density_of_divisible(n: usize, p: u64, k: u32) -> Result<Rat> {
    if k == 0 {
        return Ok(Rat::from_integer(Int::from(1)));
    }
    let modulus = p.checked_pow(k).ok_or(Error::BudgetExhausted("p^k overflows"))?;
    let count = scan_disc_divisible(n, modulus)?;
    let total = (modulus as u128).pow(n as u32 + 1);
    Ok(Rat::new(Int::from(count), Int::from(total)))
}

/// Count residue classes f in V_n(Z/m Z) with m | Disc(f).
fn scan_disc_divisible(n: usize, m: u64) -> Result<u128> {
    let total = (m as u128).checked_pow(n as u32 + 1);
    match total {
        Some(t) if t <= 1 << 30 => {}
        _ => {
            return Err(Error::BudgetExhausted(
                "residue scan budget exceeded; use the Monte Carlo mode",
            ))
        }
    }
    // compile the discriminant polynomial for u64 arithmetic mod m
    let poly = disc_polynomial(n);
    let terms: Vec<(u64, Vec<u8>)> = poly
        .terms
        .iter()
        .map(|(e, c)| {
            let cm = c.mod_floor(&Int::from(m)).to_u64().unwrap();
            (cm, e.clone())
        })
        .collect();
    let nvars = n + 1;
    let mut tuple = vec![0u64; nvars];
    let mut count = 0u128;
    loop {
        let mut acc: u128 = 0;
        for (c, e) in &terms {
            let mut t = *c as u128;
            for (i, &pw) in e.iter().enumerate() {
                for _ in 0..pw {
                    t = t * tuple[i] as u128 % m as u128;
                }
            }
            acc = (acc + t) % m as u128;
        }
        if acc == 0 {
            count += 1;
        }
        let mut i = 0;
        while i < nvars {
            tuple[i] += 1;
            if tuple[i] < m {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == nvars {
            break;
        }
    }
    Ok(count)
}

/// omega(a): fraction of residue classes f in V_n(Z/a^2 Z) with
/// a^2 | Disc(f). Multiplicative in a; assembled by CRT from prime powers
/// when the direct scan exceeds the budget.
pub fn omega(n: usize, a: u64) -> Result<Rat> {
    if a == 1 {
        return Ok(Rat::from_integer(Int::from(1)));
    }
    if let Ok(count) = scan_disc_divisible(n, a * a) {
        let total = ((a * a) as u128).pow(n as u32 + 1);
        return Ok(Rat::new(Int::from(count), Int::from(total)));
    }
    // CRT: omega(a) = prod omega(p^e)
    let mut acc = Rat::from_integer(Int::from(1));
    for (p, e) in crate::factor::factor_u128(a as u128) {
        let pe = (p as u64).pow(e);
        acc *= omega(n, pe)?;
    }
    Ok(acc)
}

/// One report row of the class sieve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountRow {
    pub x: u64,
    /// nonzero forms with Ht <= X
    pub forms: u64,
    pub primitive: u64,
    pub in_b: u64,
    pub in_c: u64,
    /// number of (height, lex)-minimal class representatives = N(X)
    pub minimal: u64,
    /// minimality verdicts that hit engineering caps (possible overcount)
    pub uncertified: u64,
    /// distinct number fields among irreducible minimal representatives
    pub fields: u64,
    /// iso tests that returned Unknown (never silently merged)
    pub unknown_iso: u64,
    /// minimal representatives in same-field groups with >= 2 classes
    pub w_violations: u64,
}

impl CountRow {
    fn add(&mut self, o: &CountRow) {
        self.forms += o.forms;
        self.primitive += o.primitive;
        self.in_b += o.in_b;
        self.in_c += o.in_c;
        self.minimal += o.minimal;
        self.uncertified += o.uncertified;
    }
}

/// Count G(Q)-equivalence classes of cubic forms with Ht <= x: enumerates
/// all forms sharded by the leading coefficient; N(X) = number of forms
/// minimal in their class. `with_fields` additionally groups the
/// irreducible minimal representatives by number field.
pub fn count_classes(
    n: usize,
    x: u64,
    preds: &SievePredicates,
    ctx: &MinimalityContext,
    with_fields: bool,
    precision: u32,
) -> Result<CountRow> {
    if n != 3 {
        return Err(Error::Unsupported("the class sieve is implemented for n = 3"));
    }
    if x == 0 {
        return Ok(CountRow::default());
    }
    let xi = x as i64;
    let width = (2 * xi + 1) as usize;
    let partials: Vec<(CountRow, Vec<BinaryForm>)> = (0..width)
        .into_par_iter()
        .map(|i0| {
            let f0 = i0 as i64 - xi;
            let mut row = CountRow::default();
            let mut reps: Vec<BinaryForm> = Vec::new();
            for f1 in -xi..=xi {
                for f2 in -xi..=xi {
                    for f3 in -xi..=xi {
                        if f0 == 0 && f1 == 0 && f2 == 0 && f3 == 0 {
                            continue;
                        }
                        tally_form(ctx, preds, &[f0, f1, f2, f3], &mut row, &mut reps, with_fields);
                    }
                }
            }
            (row, reps)
        })
        .collect();
    let mut row = CountRow { x, ..CountRow::default() };
    let mut reps: Vec<BinaryForm> = Vec::new();
    for (partial, r) in partials {
        row.add(&partial);
        reps.extend(r);
    }
    if with_fields {
        let (fields, unknown, w) = group_fields(&reps, precision)?;
        row.fields = fields;
        row.unknown_iso = unknown;
        row.w_violations = w;
    }
    Ok(row)
}

fn tally_form(
    ctx: &MinimalityContext,
    preds: &SievePredicates,
    c: &[i64; 4],
    row: &mut CountRow,
    reps: &mut Vec<BinaryForm>,
    collect: bool,
) {
    row.forms += 1;
    let g = gcd4(c);
    let primitive = g == 1;
    if primitive {
        row.primitive += 1;
    }
    let disc = disc3(c);
    let h = c.iter().map(|v| v.unsigned_abs()).max().unwrap() as i128;
    let hpow = h * h * h * h;
    let eps_n = preds.epsilon.numer().to_i128().unwrap();
    let eps_d = preds.epsilon.denom().to_i128().unwrap();
    if (disc.unsigned_abs() as i128) * eps_d < eps_n * hpow {
        row.in_b += 1;
    }
    let in_c_flag = if disc == 0 {
        true
    } else {
        crate::factor::largest_square_divisor_u128(disc.unsigned_abs() as u128) > preds.s as u128
    };
    if in_c_flag {
        row.in_c += 1;
    }
    // minimality fast paths
    if !primitive {
        return;
    }
    let lead = c.iter().find(|&&v| v != 0).unwrap();
    if *lead > 0 {
        // -f is lexicographically smaller
        return;
    }
    let form = BinaryForm::from_i64(c).unwrap();
    let outcome = match is_minimal_representative(ctx, &form) {
        Ok(out) if out.certified => Some(out.minimal),
        other => {
            // Uncapped verdicts at tiny heights are re-decided exactly by a
            // box scan; larger uncertified forms are tallied instead.
            let h = c.iter().map(|v| v.unsigned_abs()).max().unwrap();
            if h <= 4 {
                match minimal_by_box_oracle(&form) {
                    Ok(m) => Some(m),
                    Err(_) => {
                        row.uncertified += 1;
                        None
                    }
                }
            } else {
                row.uncertified += 1;
                other.ok().map(|o| o.minimal)
            }
        }
    };
    if let Some(true) = outcome {
        row.minimal += 1;
        if collect {
            reps.push(form);
        }
    }
}

/// Exact minimality for small forms: scan every strictly smaller form in
/// the height box and test equivalence with certification. Complete since
/// a smaller equivalent form has height <= Ht(f).
pub fn minimal_by_box_oracle(f: &BinaryForm) -> Result<bool> {
    let n = f.degree();
    let h = f.height().to_i64().unwrap();
    let kernel = squarefree_kernel(&f.discriminant());
    let mut coeffs = vec![-h; n + 1];
    loop {
        'body: {
            if coeffs.iter().all(|&v| v == 0) {
                break 'body;
            }
            let p = BinaryForm::new(coeffs.iter().map(|&v| Int::from(v)).collect()).unwrap();
            if crate::forms::form_order(&p, f) != std::cmp::Ordering::Less || !p.is_primitive() {
                break 'body;
            }
            if p.discriminant().is_zero() {
                break 'body;
            }
            if squarefree_kernel(&p.discriminant()) != kernel {
                break 'body;
            }
            if let EquivOutcome::Equivalent(_) = equivalence_by_roots(&p, f, 192, false)? {
                return Ok(false);
            }
        }
        let mut i = 0;
        while i <= n {
            coeffs[i] += 1;
            if coeffs[i] <= h {
                break;
            }
            coeffs[i] = -h;
            i += 1;
        }
        if i > n {
            break;
        }
    }
    Ok(true)
}

fn gcd4(c: &[i64; 4]) -> u64 {
    let mut g = 0u64;
    for &v in c {
        g = gcd_u64(g, v.unsigned_abs());
        if g == 1 {
            return 1;
        }
    }
    g
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        a %= b;
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn disc3(c: &[i64; 4]) -> i64 {
    let (a, b, cc, d) = (c[0] as i128, c[1] as i128, c[2] as i128, c[3] as i128);
    let v = 18 * a * b * cc * d - 4 * a * cc * cc * cc + b * b * cc * cc
        - 4 * b * b * b * d
        - 27 * a * a * d * d;
    v as i64
}

/// Group irreducible minimal representatives by number field. Returns
/// (field count, unknown tallies, W-count over representatives). Buckets
/// by the squarefree discriminant kernel first; exact certification runs
/// inside buckets.
fn group_fields(reps: &[BinaryForm], precision: u32) -> Result<(u64, u64, u64)> {
    let mut buckets: std::collections::BTreeMap<Int, Vec<&BinaryForm>> = Default::default();
    for f in reps {
        if f.discriminant().is_zero() {
            continue;
        }
        match is_irreducible(f, 60) {
            Ok(r) if r.is_irreducible() => {
                buckets.entry(squarefree_kernel(&f.discriminant())).or_default().push(f);
            }
            _ => continue,
        }
    }
    let results: Vec<(u64, u64, u64)> = buckets
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(_, forms)| field_groups_in_bucket(&forms, precision))
        .collect();
    let mut fields = 0;
    let mut unknown = 0;
    let mut w = 0;
    for (f, u, ww) in results {
        fields += f;
        unknown += u;
        w += ww;
    }
    Ok((fields, unknown, w))
}

fn field_groups_in_bucket(forms: &[&BinaryForm], precision: u32) -> (u64, u64, u64) {
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut unknown = 0u64;
    for (i, f) in forms.iter().enumerate() {
        let mut placed = false;
        for (rep, classes) in groups.iter_mut() {
            match fields_isomorphic(forms[*rep], f, precision) {
                Ok(FieldIso::Yes { .. }) => {
                    let mut found_class = false;
                    for &cl in classes.iter() {
                        if let Ok(EquivOutcome::Equivalent(_)) =
                            equivalence_by_roots(forms[cl], f, precision, true)
                        {
                            found_class = true;
                            break;
                        }
                    }
                    if !found_class {
                        classes.push(i);
                    }
                    placed = true;
                    break;
                }
                Ok(FieldIso::No { .. }) => {}
                _ => {
                    unknown += 1;
                }
            }
        }
        if !placed {
            groups.push((i, vec![i]));
        }
    }
    let fields = groups.len() as u64;
    let w = groups
        .iter()
        .filter(|(_, cls)| cls.len() >= 2)
        .map(|(_, cls)| cls.len() as u64)
        .sum();
    (fields, unknown, w)
}

/// Brute-force class count over the full box (oracle for small X):
/// partitions all nonzero cubic forms of height <= x by exact equivalence.
pub fn class_count_oracle(x: u64, precision: u32) -> Result<u64> {
    let xi = x as i64;
    let mut forms: Vec<BinaryForm> = Vec::new();
    for a in -xi..=xi {
        for b in -xi..=xi {
            for c in -xi..=xi {
                for d in -xi..=xi {
                    if (a, b, c, d) == (0, 0, 0, 0) {
                        continue;
                    }
                    forms.push(BinaryForm::from_i64(&[a, b, c, d]).unwrap());
                }
            }
        }
    }
    let mut degenerate_triple = false;
    let mut degenerate_double = false;
    let mut buckets: std::collections::BTreeMap<Int, Vec<BinaryForm>> = Default::default();
    for f in forms {
        let (_, p) = f.content_and_primitive().unwrap();
        if p.discriminant().is_zero() {
            match crate::minimal::cubic_degenerate_pattern(&p)? {
                crate::minimal::DegeneratePattern::TripleLine => degenerate_triple = true,
                crate::minimal::DegeneratePattern::DoubleLine => degenerate_double = true,
            }
            continue;
        }
        buckets.entry(squarefree_kernel(&p.discriminant())).or_default().push(p);
    }
    let class_counts: Vec<u64> = buckets
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(_, mut forms)| {
            forms.sort();
            forms.dedup();
            let mut reps: Vec<BinaryForm> = Vec::new();
            'next: for f in forms {
                for r in &reps {
                    if let Ok(EquivOutcome::Equivalent(_)) =
                        equivalence_by_roots(r, &f, precision, false)
                    {
                        continue 'next;
                    }
                }
                reps.push(f);
            }
            reps.len() as u64
        })
        .collect();
    let mut total: u64 = class_counts.iter().sum();
    total += u64::from(degenerate_triple) + u64::from(degenerate_double);
    Ok(total)
}

/// Least-squares plateau fit of N(X) ~ C X^(n+1) with trend diagnostics.
#[derive(Clone, Debug)]
pub struct AsymptoticFit {
    pub c: f64,
    pub ratios: Vec<(u64, f64)>,
    pub max_rel_residual: f64,
    /// positivity sanity: C >= (2^(n+1) - beta - gamma)/|G'| with measured
    /// densities and a crude upper bound for |G'|
    pub lower_bound: f64,
    pub lower_bound_ok: bool,
}

pub fn fit_asymptotic(n: usize, rows: &[CountRow], preds: &SievePredicates) -> Result<AsymptoticFit> {
    if rows.len() < 3 {
        return Err(Error::Invalid("fit requires at least 3 thresholds".into()));
    }
    if rows.iter().all(|r| r.minimal == 0) {
        return Err(Error::Invalid("fit requires nonzero counts".into()));
    }
    let pow = (n + 1) as i32;
    let ratios: Vec<(u64, f64)> =
        rows.iter().map(|r| (r.x, r.minimal as f64 / (r.x as f64).powi(pow))).collect();
    let num: f64 = rows.iter().map(|r| r.minimal as f64 * (r.x as f64).powi(pow)).sum();
    let den: f64 = rows.iter().map(|r| (r.x as f64).powi(2 * pow)).sum();
    let c = num / den;
    let max_rel_residual =
        ratios.iter().map(|(_, v)| (v - c).abs() / c).fold(0.0f64, f64::max);
    let last = rows.last().unwrap();
    let vol = (2.0 * last.x as f64 + 1.0).powi(pow);
    let beta = last.in_b as f64 / vol * 2.0f64.powi(pow);
    let gamma = last.in_c as f64 / vol * 2.0f64.powi(pow);
    let cn = MinimalityContext::derived_constant(n);
    let eps = preds.epsilon.to_f64().unwrap();
    let s = preds.s as f64;
    let gamma_u = (cn * s * s / eps).powf(1.0 / (n as f64 - 2.0));
    let g_upper =
        (2.0 * gamma_u + 1.0).powi(4) * (2.0 * (cn / eps) * s * s * gamma_u * gamma_u + 1.0);
    let lower_bound = ((2.0f64.powi(pow) - beta - gamma) / g_upper).max(0.0);
    Ok(AsymptoticFit {
        c,
        ratios,
        max_rel_residual,
        lower_bound,
        lower_bound_ok: c >= lower_bound && lower_bound >= 0.0,
    })
}

/// Monte Carlo estimate of beta(eps) = vol(B_R(eps) cap {Ht <= 1}) with a
/// seeded generator (diagnostic; exact lattice counts live in the rows).
pub fn beta_volume_mc(n: usize, eps: &Rat, samples: u64, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let poly = disc_polynomial(n);
    let epsf = eps.to_f64().unwrap();
    let mut hits = 0u64;
    for _ in 0..samples {
        let c: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        let h = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut disc = 0.0f64;
        for (e, coef) in &poly.terms {
            let mut t = coef.to_f64().unwrap();
            for (i, &pw) in e.iter().enumerate() {
                for _ in 0..pw {
                    t *= c[i];
                }
            }
            disc += t;
        }
        if disc.abs() < epsf * h.powi(2 * n as i32 - 2) {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// The W-statistic of the abstract theorem at degree n: count of
/// irreducible primitive forms of height <= x whose field is shared with a
/// non-equivalent form in the same box. Returns (W, irreducible total,
/// unknown tallies).
pub fn w_statistic(n: usize, x: u64, precision: u32) -> Result<(u64, u64, u64)> {
    let xi = x as i64;
    let mut forms: Vec<BinaryForm> = Vec::new();
    let mut coeffs = vec![-xi; n + 1];
    loop {
        if coeffs.iter().any(|&v| v != 0) {
            forms.push(BinaryForm::new(coeffs.iter().map(|&v| Int::from(v)).collect()).unwrap());
        }
        let mut i = 0;
        while i <= n {
            coeffs[i] += 1;
            if coeffs[i] <= xi {
                break;
            }
            coeffs[i] = -xi;
            i += 1;
        }
        if i > n {
            break;
        }
    }
    let irreducible: Vec<BinaryForm> = forms
        .into_par_iter()
        .filter(|f| {
            if f.is_zero() || !f.is_primitive() || f.discriminant().is_zero() {
                return false;
            }
            matches!(is_irreducible(f, 60), Ok(Irreducibility::Irreducible { .. }))
        })
        .collect();
    let total = irreducible.len() as u64;
    let mut buckets: std::collections::BTreeMap<Int, Vec<&BinaryForm>> = Default::default();
    for f in &irreducible {
        buckets.entry(squarefree_kernel(&f.discriminant())).or_default().push(f);
    }
    let results: Vec<(u64, u64)> = buckets
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(_, forms)| w_in_bucket(&forms, precision))
        .collect();
    let mut w = 0u64;
    let mut unknown = 0u64;
    for (ww, u) in results {
        w += ww;
        unknown += u;
    }
    Ok((w, total, unknown))
}

fn w_in_bucket(forms: &[&BinaryForm], precision: u32) -> (u64, u64) {
    let mut unknown = 0u64;
    // (field rep index, classes: Vec<(class rep index, member count)>)
    let mut groups: Vec<(usize, Vec<(usize, u64)>)> = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let mut placed = false;
        for (rep, classes) in groups.iter_mut() {
            match fields_isomorphic(forms[*rep], f, precision) {
                Ok(FieldIso::Yes { .. }) => {
                    let mut matched = false;
                    for (cl, count) in classes.iter_mut() {
                        if let Ok(EquivOutcome::Equivalent(_)) =
                            equivalence_by_roots(forms[*cl], f, precision, true)
                        {
                            *count += 1;
                            matched = true;
                            break;
                        }
                    }
                    if !matched {
                        classes.push((i, 1));
                    }
                    placed = true;
                    break;
                }
                Ok(FieldIso::No { .. }) => {}
                _ => {
                    unknown += 1;
                }
            }
        }
        if !placed {
            groups.push((i, vec![(i, 1)]));
        }
    }
    let w = groups
        .iter()
        .filter(|(_, cls)| cls.len() >= 2)
        .map(|(_, cls)| cls.iter().map(|(_, c)| c).sum::<u64>())
        .sum();
    (w, unknown)
}
