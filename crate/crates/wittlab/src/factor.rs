//! Univariate factorization over finite fields, with irreducibility
//! certificates for monic polynomials over the rationals and over rational
//! function fields.
//!
//! Small instances (q^deg up to a million) go through deterministic trial
//! division; larger ones use squarefree splitting, distinct-degree
//! factorization and seeded equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fld, FieldElement, FunctionField, IrredStatus, SimpleExtension};
use crate::scalar::BaseField;
use crate::unipoly::UniPoly;

/// Outcome of `poly_factor`: `lead * prod(factor^multiplicity)` equals the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lead: FieldElement,
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        let field = self.lead.parent.clone();
        let mut acc = UniPoly::constant(field, self.lead.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }
}

const TRIAL_LIMIT: u128 = 1_000_000;

/// Factors a nonzero univariate polynomial over a finite field into monic
/// irreducibles. Errors with `UnsupportedField` over infinite fields.
pub fn poly_factor(f: &UniPoly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let q = f.field.order().ok_or(Error::UnsupportedField)?;
    let (monic, lead) = f.monic();
    if monic.degree() == Some(0) || monic.is_zero() {
        return Ok(Factorization {
            lead,
            factors: vec![],
        });
    }

    let deg = monic.degree().unwrap() as u32;
    let mut factors = if q.checked_pow(deg).map_or(false, |n| n <= TRIAL_LIMIT) {
        trial_factor(&monic)
    } else {
        randomized_factor(&monic, q, seed)?
    };
    factors.sort();

    // merge duplicates and verify the contract
    let mut merged: Vec<(UniPoly, usize)> = Vec::new();
    for (p, m) in factors {
        match merged.last_mut() {
            Some((q0, m0)) if *q0 == p => *m0 += m,
            _ => merged.push((p, m)),
        }
    }
    let result = Factorization {
        lead,
        factors: merged,
    };
    debug_assert_eq!(result.expand(), *f);
    debug_assert!(result.factors.iter().all(|(p, _)| is_irreducible(p)));
    Ok(result)
}

/// Deterministic factorization by trial division with enumerated divisors.
fn trial_factor(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut d = 1usize;
    while rest.degree().map_or(false, |dr| dr >= 1) {
        if 2 * d > rest.degree().unwrap() {
            out.push((rest.clone(), 1));
            break;
        }
        for cand in enumerate_monic(&rest.field, d) {
            if out.iter().any(|(p, _)| *p == cand) {
                continue;
            }
            let mut m = 0;
            loop {
                match rest.div_exact(&cand) {
                    Some(q) => {
                        m += 1;
                        rest = q;
                    }
                    None => break,
                }
            }
            if m > 0 {
                out.push((cand, m));
            }
            if rest.degree().map_or(true, |dr| dr < 1) {
                break;
            }
        }
        d += 1;
    }
    out
}

/// Enumerates monic degree-`d` polynomials in a fixed order; reducible
/// candidates are harmless for trial division (their factors come first).
pub fn enumerate_monic(field: &Fld, d: usize) -> Vec<UniPoly> {
    let elems = field.enumerate_elements().expect("finite field");
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let mut coeffs: Vec<FieldElement> = idx.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(field.one());
        out.push(UniPoly::new(field.clone(), coeffs));
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn randomized_factor(f: &UniPoly, q: u128, seed: u64) -> Result<Vec<(UniPoly, usize)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(f) {
        for (h, d) in distinct_degree(&g, q) {
            for irr in equal_degree_split(&h, d, q, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    Ok(out)
}

/// Yun-style squarefree decomposition, valid in characteristic p via p-th
/// root extraction of derivative-free parts.
fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let p = f.field.characteristic();
    let mut out: Vec<(UniPoly, usize)> = Vec::new();
    let mut stack = vec![(f.clone(), 1usize)];
    while let Some((g, scale)) = stack.pop() {
        if g.degree().map_or(true, |d| d == 0) {
            continue;
        }
        let dg = g.derivative();
        if dg.is_zero() {
            // g is a polynomial in X^p; take the p-th root and recurse
            let root = char_root_poly(&g, p as usize);
            stack.push((root, scale * p as usize));
            continue;
        }
        let mut c = g.gcd(&dg);
        let mut w = g.div_exact(&c).unwrap();
        let mut i = 1usize;
        while w.degree().map_or(false, |d| d >= 1) {
            let y = w.gcd(&c);
            let part = w.div_exact(&y).unwrap();
            if part.degree().map_or(false, |d| d >= 1) {
                out.push((part, i * scale));
            }
            w = y.clone();
            c = c.div_exact(&y).unwrap();
            i += 1;
        }
        if c.degree().map_or(false, |d| d >= 1) {
            stack.push((c, scale * p as usize));
        }
    }
    out
}

/// p-th root of a polynomial whose exponents are all divisible by p.
fn char_root_poly(g: &UniPoly, p: usize) -> UniPoly {
    let q = g.field.order().expect("finite field");
    let e = {
        // q = p^e
        let mut e = 0u32;
        let mut t = q;
        while t > 1 {
            t /= p as u128;
            e += 1;
        }
        e
    };
    // c^(p^(e-1)) is the p-th root of c in F_q
    let root_exp = (p as u128).pow(e.saturating_sub(1));
    let mut coeffs = Vec::new();
    for (i, c) in g.coeffs.iter().enumerate() {
        if i % p == 0 {
            coeffs.push(pow_elem(c, root_exp));
        } else {
            debug_assert!(c.is_zero());
        }
    }
    UniPoly::new(g.field.clone(), coeffs)
}

fn pow_elem(c: &FieldElement, mut e: u128) -> FieldElement {
    let mut acc = c.parent.one();
    let mut base = c.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

/// X^(q^i) mod f, iterated; splits a squarefree monic f into products of
/// irreducibles of equal degree.
fn distinct_degree(f: &UniPoly, q: u128) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = UniPoly::var(f.field.clone());
    let mut xq = x.clone();
    let mut d = 0usize;
    while rest.degree().map_or(false, |dr| dr >= 1) {
        d += 1;
        if 2 * d > rest.degree().unwrap() {
            out.push((rest.clone(), rest.degree().unwrap()));
            break;
        }
        xq = pow_mod(&xq, q, &rest);
        let g = rest.gcd(&xq.sub(&x));
        if g.degree().map_or(false, |dg| dg >= 1) {
            out.push((g.clone(), d));
            rest = rest.div_exact(&g).unwrap();
            xq = xq.rem(&rest.clone().max_one());
        }
    }
    out
}

trait MaxOne {
    fn max_one(self) -> Self;
}

impl MaxOne for UniPoly {
    fn max_one(self) -> Self {
        if self.degree().map_or(true, |d| d == 0) {
            UniPoly::one(self.field.clone())
        } else {
            self
        }
    }
}

fn pow_mod(base: &UniPoly, mut e: u128, modulus: &UniPoly) -> UniPoly {
    let mut acc = UniPoly::one(base.field.clone());
    let mut b = base.rem(modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).rem(modulus);
        }
        b = b.mul(&b).rem(modulus);
        e >>= 1;
    }
    acc
}

/// Cantor-Zassenhaus equal-degree splitting of a squarefree product of
/// degree-`d` irreducibles.
fn equal_degree_split(h: &UniPoly, d: usize, q: u128, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let deg = h.degree().unwrap();
    if deg == d {
        return vec![h.monic().0];
    }
    let field = &h.field;
    loop {
        let r = random_poly(field, deg - 1, rng);
        if r.degree().is_none() {
            continue;
        }
        let g = if q % 2 == 1 {
            // r^((q^d - 1)/2) - 1 mod h
            let e = (pow_u128(q, d as u32) - 1) / 2;
            let s = pow_mod(&r, e, h);
            h.gcd(&s.sub(&UniPoly::one(field.clone())))
        } else {
            // trace map sum r^(2^i), i < d*log2(q)
            let bits = (q.trailing_zeros() as usize).max(1); // q = 2^bits
            let mut acc = r.clone().rem(h);
            let mut cur = r.clone().rem(h);
            for _ in 1..(d * bits) {
                cur = pow_mod(&cur, 2, h);
                acc = acc.add(&cur).rem(h);
            }
            h.gcd(&acc)
        };
        if let Some(dg) = g.degree() {
            if dg >= 1 && dg < deg {
                let rest = h.div_exact(&g).unwrap();
                let mut out = equal_degree_split(&g, d, q, rng);
                out.extend(equal_degree_split(&rest, d, q, rng));
                return out;
            }
        }
    }
}

fn pow_u128(base: u128, e: u32) -> u128 {
    let mut acc = 1u128;
    for _ in 0..e {
        acc = acc.checked_mul(base).expect("field size overflow");
    }
    acc
}

fn random_poly(field: &Fld, max_deg: usize, rng: &mut ChaCha8Rng) -> UniPoly {
    let elems = field.enumerate_elements().expect("finite field");
    let coeffs: Vec<FieldElement> = (0..=max_deg)
        .map(|_| elems[rng.gen_range(0..elems.len())].clone())
        .collect();
    UniPoly::new(field.clone(), coeffs)
}

/// Deterministic irreducibility test over a finite field: f is irreducible of
/// degree n iff X^(q^n) = X mod f and gcd(X^(q^(n/l)) - X, f) = 1 for every
/// prime l dividing n.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let q = match f.field.order() {
        Some(q) => q,
        None => return false,
    };
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let x = UniPoly::var(f.field.clone());
    // X^(q^n) mod f by iterating the q-power map
    let mut xq = x.clone();
    let mut powers = Vec::with_capacity(n);
    for _ in 0..n {
        xq = pow_mod(&xq, q, f);
        powers.push(xq.clone());
    }
    if powers[n - 1] != x.rem(f) {
        return false;
    }
    let mut m = n;
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for l in primes {
        let g = f.gcd(&powers[n / l - 1].sub(&x));
        if g.degree().map_or(false, |d| d >= 1) {
            return false;
        }
    }
    true
}

/// Attempts to certify irreducibility of a monic polynomial over an infinite
/// field by sound one-way reductions:
///
/// * over Q: reduction modulo a prime not dividing any denominator — an
///   irreducible monic image certifies irreducibility;
/// * over F(u_1,...,u_m): specialization of the transcendentals at base
///   points, when all coefficients are polynomial in them.
///
/// Returns `Verified` when some reduction certifies the input, `Asserted`
/// otherwise. Degree-one inputs are always `Verified`.
pub fn certify_irreducible(f: &UniPoly) -> IrredStatus {
    if f.degree() == Some(1) {
        return IrredStatus::Verified;
    }
    if f.field.order().is_some() {
        return if is_irreducible(f) {
            IrredStatus::Verified
        } else {
            IrredStatus::Asserted
        };
    }
    let fun = match &f.field {
        Fld::Fun(fun) => fun.clone(),
        Fld::Ext(_) => return IrredStatus::Asserted,
    };
    if !f.is_monic() {
        return IrredStatus::Asserted;
    }
    if fun.nvars() > 0 {
        // specialize the transcendentals; sound because the ground polynomial
        // ring is integrally closed, so monic factors stay polynomial
        if f.coeffs.iter().any(|c| {
            c.as_ratfunc().map_or(true, |rf| !rf.is_poly())
        }) {
            return IrredStatus::Asserted;
        }
        let base_fld = Fld::Fun(FunctionField::new(fun.base, &[]));
        let points: Vec<i64> = match fun.base {
            BaseField::Prime(p) => (0..p.min(8) as i64).collect(),
            BaseField::Rationals => vec![0, 1, -1, 2, -2, 3],
        };
        'point: for &c in &points {
            let mut spec_coeffs = Vec::with_capacity(f.coeffs.len());
            for coeff in &f.coeffs {
                let rf = coeff.as_ratfunc().unwrap();
                let mut poly = rf.num.clone();
                for v in 0..fun.nvars() {
                    poly = poly.subst_var(v, &fun.base.from_i64(c));
                }
                if !poly.is_constant() {
                    continue 'point;
                }
                let den = rf.den.constant_term();
                spec_coeffs.push(base_fld.from_scalar(poly.constant_term().div(&den).unwrap()));
            }
            let spec = UniPoly::new(base_fld.clone(), spec_coeffs);
            if spec.degree() != f.degree() {
                continue;
            }
            if certify_irreducible(&spec) == IrredStatus::Verified {
                return IrredStatus::Verified;
            }
        }
        return IrredStatus::Asserted;
    }
    // over Q: reduce modulo small good primes
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        if let Some(spec) = reduce_mod_p(f, p) {
            if spec.degree() == f.degree() && is_irreducible(&spec) {
                return IrredStatus::Verified;
            }
        }
    }
    IrredStatus::Asserted
}

fn reduce_mod_p(f: &UniPoly, p: u64) -> Option<UniPoly> {
    let base = BaseField::prime(p).ok()?;
    let fp = Fld::Fun(FunctionField::new(base, &[]));
    let mut coeffs = Vec::with_capacity(f.coeffs.len());
    for c in &f.coeffs {
        let r = c.as_scalar()?;
        let rat = r.as_rational()?;
        use num_traits::Zero;
        let pm = num_bigint::BigInt::from(p);
        if (rat.denom() % &pm).is_zero() {
            return None;
        }
        let num = crate::scalar::Scalar::from_bigint(&base, rat.numer());
        let den = crate::scalar::Scalar::from_bigint(&base, rat.denom());
        coeffs.push(fp.from_scalar(num.div(&den).ok()?));
    }
    Some(UniPoly::new(fp, coeffs))
}

/// Builds K[theta]/(pi), verifying irreducibility over finite ground fields
/// and recording a certificate status otherwise.
pub fn make_extension(
    ground: Arc<FunctionField>,
    gen_name: &str,
    modulus: &UniPoly,
    _seed: u64,
) -> Result<Arc<SimpleExtension>> {
    let d = modulus.degree().ok_or(Error::ZeroArgument)?;
    if d == 0 {
        return Err(Error::Invalid("modulus must have positive degree".into()));
    }
    let (monic, _) = modulus.monic();
    let ground_fld = Fld::Fun(ground.clone());
    assert_eq!(monic.field, ground_fld, "modulus must live over the ground field");
    if ground_fld.order().is_some() && !is_irreducible(&monic) {
        return Err(Error::Invalid("modulus is reducible".into()));
    }
    let status = certify_irreducible(&monic);
    let coeffs = monic.coeffs[..d]
        .iter()
        .map(|c| c.as_ratfunc().unwrap().clone())
        .collect();
    Ok(SimpleExtension::new_unchecked(
        ground, gen_name, coeffs, status,
    ))
}
