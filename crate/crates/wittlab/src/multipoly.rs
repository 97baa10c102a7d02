//! Multivariate polynomials over a base-field scalar, ordered by graded lex.
//!
//! This is the representation layer under rational-function fields: terms live
//! in a `BTreeMap` keyed by exponent vectors so that iteration order (and
//! hence every canonical form downstream) is deterministic.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{rational_content, BaseField, Scalar};

/// Exponent vector under graded-lex order: total degree first, then lex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, rhs: &Mono) -> Mono {
        Mono(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, rhs: &Mono) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| a <= b)
    }

    fn div(&self, rhs: &Mono) -> Mono {
        Mono(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A multivariate polynomial; only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPoly {
    pub base: BaseField,
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Scalar>,
}

impl MultiPoly {
    pub fn zero(base: BaseField, nvars: usize) -> MultiPoly {
        MultiPoly {
            base,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(base: BaseField, nvars: usize, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(base, nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(base: BaseField, nvars: usize) -> MultiPoly {
        let one = base.one();
        MultiPoly::constant(base, nvars, one)
    }

    pub fn var(base: BaseField, nvars: usize, idx: usize) -> MultiPoly {
        assert!(idx < nvars);
        let mut exp = vec![0u16; nvars];
        exp[idx] = 1;
        let mut p = MultiPoly::zero(base, nvars);
        p.terms.insert(Mono(exp), base.one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total() == 0)
    }

    /// The constant term, or zero.
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Mono(vec![0; self.nvars]))
            .cloned()
            .unwrap_or_else(|| self.base.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Leading (graded-lex maximal) term.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn insert_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.base, self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.base, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.base, self.nvars);
        }
        let mut out = MultiPoly::zero(self.base, self.nvars);
        for (m, t) in &self.terms {
            out.insert_term(m.clone(), t.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.base, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.base, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[var] = e - 1;
            out.insert_term(Mono(exp), c.mul(&self.base.from_i64(e as i64)));
        }
        out
    }

    /// Substitutes `var := value`, folding its powers into the coefficients.
    pub fn subst_var(&self, var: usize, value: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(self.base, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exp = m.0.clone();
            exp[var] = 0;
            out.insert_term(Mono(exp), c.mul(&value.pow(e as u64)));
        }
        out
    }

    /// Re-indexes variables into a larger ambient variable list.
    /// `map[i]` is the new index of old variable `i`.
    pub fn embed(&self, new_nvars: usize, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = MultiPoly::zero(self.base, new_nvars);
        for (m, c) in &self.terms {
            let mut exp = vec![0u16; new_nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exp[map[i]] = e;
            }
            out.terms.insert(Mono(exp), c.clone());
        }
        out
    }

    /// Collects the polynomial as univariate in `var` with coefficients that do
    /// not involve `var` (exponent zeroed out); index = power of `var`.
    pub fn coeffs_in_var(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::zero(self.base, self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut exp = m.0.clone();
            exp[var] = 0;
            out[e].insert_term(Mono(exp), c.clone());
        }
        out
    }

    fn from_coeffs_in_var(base: BaseField, nvars: usize, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(base, nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, s) in &c.terms {
                let mut exp = m.0.clone();
                exp[var] += e as u16;
                out.insert_term(Mono(exp), s.clone());
            }
        }
        out
    }

    /// Exact division; returns `None` when `rhs` does not divide `self`.
    pub fn div_exact(&self, rhs: &MultiPoly) -> Option<MultiPoly> {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.base, self.nvars);
        let (lm, lc) = {
            let (m, c) = rhs.leading().unwrap();
            (m.clone(), c.clone())
        };
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c.div(&lc).ok()?;
            let mut t = MultiPoly::zero(self.base, self.nvars);
            t.terms.insert(qm, qc);
            rem = rem.sub(&t.mul(rhs));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Normalizes to leading coefficient one; returns (monic, old leading coefficient).
    pub fn monic(&self) -> (MultiPoly, Scalar) {
        match self.leading() {
            None => (self.clone(), self.base.one()),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = lc.inv().expect("nonzero leading coefficient");
                (self.mul_scalar(&inv), lc)
            }
        }
    }


    /// Multivariate gcd, normalized monic in graded lex.
    pub fn gcd(&self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let g = gcd_inner(self, rhs);
        if g.is_zero() {
            g
        } else {
            g.monic().0
        }
    }

    pub fn map_scalars(&self, f: &mut impl FnMut(&Scalar) -> Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(self.base, self.nvars);
        for (m, c) in &self.terms {
            out.insert_term(m.clone(), f(c));
        }
        out
    }
}

fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.base, a.nvars);
    }
    // main variable: the highest-indexed variable occurring in either operand
    let var = (0..a.nvars)
        .rev()
        .find(|&v| a.degree_in(v).unwrap_or(0) > 0 || b.degree_in(v).unwrap_or(0) > 0)
        .expect("nonconstant operands");

    let ca = a.coeffs_in_var(var);
    let cb = b.coeffs_in_var(var);
    let cont_a = ca.iter().fold(MultiPoly::zero(a.base, a.nvars), |g, c| gcd_inner(&g, c));
    let cont_b = cb.iter().fold(MultiPoly::zero(a.base, a.nvars), |g, c| gcd_inner(&g, c));
    let cont = gcd_inner(&cont_a, &cont_b);

    let pp_a: Vec<MultiPoly> = ca.iter().map(|c| c.div_exact(&cont_a).unwrap()).collect();
    let pp_b: Vec<MultiPoly> = cb.iter().map(|c| c.div_exact(&cont_b).unwrap()).collect();

    let g = primitive_prs(a.base, a.nvars, var, pp_a, pp_b);
    cont.mul(&g)
}

/// Primitive polynomial remainder sequence on univariate-in-`var` polynomials
/// whose coefficients are polynomials in the remaining variables.
fn primitive_prs(
    base: BaseField,
    nvars: usize,
    var: usize,
    mut a: Vec<MultiPoly>,
    mut b: Vec<MultiPoly>,
) -> MultiPoly {
    trim(&mut a);
    trim(&mut b);
    if b.is_empty() {
        return make_primitive(base, nvars, var, &a);
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(base, nvars, var, &a, &b);
        if r.is_empty() {
            return make_primitive(base, nvars, var, &b);
        }
        let r_prim = primitive_coeffs(base, nvars, &r);
        a = b;
        b = r_prim;
    }
}

fn trim(v: &mut Vec<MultiPoly>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn primitive_coeffs(base: BaseField, nvars: usize, coeffs: &[MultiPoly]) -> Vec<MultiPoly> {
    let cont = coeffs
        .iter()
        .fold(MultiPoly::zero(base, nvars), |g, c| gcd_inner(&g, c));
    let mut out: Vec<MultiPoly> = coeffs
        .iter()
        .map(|c| c.div_exact(&cont).unwrap())
        .collect();
    // divide the whole polynomial by one common rational content so that
    // pseudo-remainder coefficients stay small; scaling must be uniform
    if base == BaseField::Rationals {
        let vals: Vec<&Scalar> = out.iter().flat_map(|c| c.terms.values()).collect();
        if !vals.is_empty() {
            let content = rational_content(&vals).expect("rational scalars");
            if !content.is_zero() && !content.is_one() {
                let inv = Scalar::Q(content.recip());
                out = out.iter().map(|c| c.mul_scalar(&inv)).collect();
            }
        }
    }
    trim(&mut out);
    out
}

fn make_primitive(base: BaseField, nvars: usize, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
    if coeffs.is_empty() {
        return MultiPoly::zero(base, nvars);
    }
    let prim = primitive_coeffs(base, nvars, coeffs);
    MultiPoly::from_coeffs_in_var(base, nvars, var, &prim)
}

/// lc(b)^(deg a - deg b + 1) * a  =  q*b + r; returns r.
fn pseudo_rem(
    base: BaseField,
    nvars: usize,
    _var: usize,
    a: &[MultiPoly],
    b: &[MultiPoly],
) -> Vec<MultiPoly> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r: Vec<MultiPoly> = a.to_vec();
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        // r := lb*r - lead * x^(dr-db) * b
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let t = lead.mul(bc);
            r[shift + i] = r[shift + i].sub(&t);
        }
        let mut rv = r;
        trim(&mut rv);
        r = rv;
        if r.is_empty() {
            break;
        }
        let _ = base;
        let _ = nvars;
    }
    r
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

impl MultiPoly {
    /// Renders with the given variable names, highest graded-lex term first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(names[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", names[i], e));
                }
            }
            let coeff = format!("{c}");
            let part = if factors.is_empty() {
                coeff
            } else if c.is_one() {
                factors.join("*")
            } else if is_minus_one(c) {
                format!("-{}", factors.join("*"))
            } else {
                format!("{}*{}", coeff, factors.join("*"))
            };
            parts.push(part);
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

fn is_minus_one(c: &Scalar) -> bool {
    match c {
        Scalar::Q(r) => *r == -BigRational::one(),
        Scalar::Fp { p, val } => *val == p - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn f5() -> BaseField {
        BaseField::prime(5).unwrap()
    }

    #[test]
    fn graded_lex_leading() {
        // x^2 beats x*y in lex after equal total degree (x index 0 first)
        let b = q();
        let x = MultiPoly::var(b, 2, 0);
        let y = MultiPoly::var(b, 2, 1);
        let p = x.mul(&x).add(&x.mul(&y));
        let (lead, _) = p.leading().unwrap();
        assert_eq!(lead.0, vec![2, 0]);
    }

    #[test]
    fn exact_division() {
        let b = f5();
        let x = MultiPoly::var(b, 2, 0);
        let y = MultiPoly::var(b, 2, 1);
        let f = x.add(&y);
        let g = x.sub(&y);
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&f).unwrap(), g);
        assert!(f.mul(&f).add(&MultiPoly::one(b, 2)).div_exact(&f).is_none());
    }

    #[test]
    fn gcd_bivariate() {
        let b = q();
        let x = MultiPoly::var(b, 2, 0);
        let y = MultiPoly::var(b, 2, 1);
        let common = x.add(&y); // x + y
        let f = common.mul(&x.sub(&y));
        let g = common.mul(&common).mul(&y);
        let got = f.gcd(&g);
        assert_eq!(got, common); // already monic
    }

    #[test]
    fn gcd_coprime() {
        let b = f5();
        let x = MultiPoly::var(b, 1, 0);
        let f = x.mul(&x).add(&MultiPoly::one(b, 1));
        let g = x.clone();
        assert_eq!(f.gcd(&g), MultiPoly::one(b, 1));
    }

    #[test]
    fn derivative_char_p() {
        let b = f5();
        let x = MultiPoly::var(b, 1, 0);
        let f = x.pow(5); // d/dx x^5 = 5x^4 = 0 in F5
        assert!(f.derivative(0).is_zero());
    }
}
