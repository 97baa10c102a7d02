//! Exact field arithmetic: prime fields, the rationals, rational function
//! fields in finitely many variables, and simple algebraic extensions.
//!
//! Elements are kept in a canonical form (reduced fraction with monic
//! denominator; extension elements reduced below the modulus degree), so
//! equality is plain representation equality.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::scalar::{BaseField, Scalar};

/// A purely transcendental field F(x_1, ..., x_m) over Q or F_p; m = 0 is the
/// base field itself.
#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionField {
    pub base: BaseField,
    pub vars: Vec<String>,
}

impl FunctionField {
    pub fn new(base: BaseField, vars: &[&str]) -> Arc<FunctionField> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut seen = std::collections::BTreeSet::new();
        for v in &names {
            assert!(seen.insert(v.clone()), "duplicate variable name {v}");
        }
        Arc::new(FunctionField { base, vars: names })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Whether the irreducibility of an extension modulus was machine-verified or
/// accepted on caller assertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrredStatus {
    Verified,
    Asserted,
}

/// K[theta]/(pi) for a monic irreducible pi over the ground field. Towers are
/// rejected by construction: the ground is always purely transcendental.
#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleExtension {
    pub ground: Arc<FunctionField>,
    pub gen_name: String,
    /// Coefficients c_0..c_{d-1} of the monic modulus pi = theta^d + sum c_i theta^i.
    pub modulus: Vec<RatFunc>,
    pub status: IrredStatus,
}

impl SimpleExtension {
    pub fn degree(&self) -> usize {
        self.modulus.len()
    }

    /// Builds the extension without checking irreducibility. Use
    /// `factor::make_extension` when verification is wanted.
    pub fn new_unchecked(
        ground: Arc<FunctionField>,
        gen_name: &str,
        modulus: Vec<RatFunc>,
        status: IrredStatus,
    ) -> Arc<SimpleExtension> {
        assert!(!modulus.is_empty(), "modulus must have degree >= 1");
        assert!(
            ground.var_index(gen_name).is_none(),
            "generator name clashes with a ground variable"
        );
        Arc::new(SimpleExtension {
            ground,
            gen_name: gen_name.to_string(),
            modulus,
            status,
        })
    }
}

/// Handle to a field: either a function field or a simple extension of one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fld {
    Fun(Arc<FunctionField>),
    Ext(Arc<SimpleExtension>),
}

/// A reduced fraction of multivariate polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFunc {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let one = MultiPoly::one(den.base, den.nvars);
            return RatFunc { num, den: one };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).unwrap();
        let mut den = den.div_exact(&g).unwrap();
        let (den_m, lc) = den.monic();
        den = den_m;
        num = num.mul_scalar(&lc.inv().unwrap());
        RatFunc { num, den }
    }

    pub fn from_poly(num: MultiPoly) -> RatFunc {
        let one = MultiPoly::one(num.base, num.nvars);
        RatFunc { num, den: one }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn mul_scalar(&self, c: &Scalar) -> RatFunc {
        RatFunc::new(self.num.mul_scalar(c), self.den.clone())
    }

    /// Quotient-rule derivative in the given ground variable.
    pub fn derivative(&self, var: usize) -> RatFunc {
        let n = self.num.derivative(var).mul(&self.den);
        let d = self.num.mul(&self.den.derivative(var));
        RatFunc::new(n.sub(&d), self.den.mul(&self.den))
    }
}

/// An element of a `Fld`, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub parent: Fld,
    pub repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Repr {
    /// Element of a function field.
    Rat(RatFunc),
    /// Element of a simple extension: coefficients of 1, theta, theta^2, ...
    /// (trailing zeros trimmed, length < extension degree).
    Ext(Vec<RatFunc>),
}

impl Fld {
    pub fn base(&self) -> BaseField {
        match self {
            Fld::Fun(f) => f.base,
            Fld::Ext(e) => e.ground.base,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.base().characteristic()
    }

    /// The underlying function field (the field itself, or the extension ground).
    pub fn ground(&self) -> &Arc<FunctionField> {
        match self {
            Fld::Fun(f) => f,
            Fld::Ext(e) => &e.ground,
        }
    }

    /// Number of elements when finite: prime fields and their extensions
    /// with no transcendental variables.
    pub fn order(&self) -> Option<u128> {
        let ground = self.ground();
        if !ground.vars.is_empty() {
            return None;
        }
        let p = match ground.base {
            BaseField::Prime(p) => p as u128,
            BaseField::Rationals => return None,
        };
        match self {
            Fld::Fun(_) => Some(p),
            Fld::Ext(e) => {
                let mut q: u128 = 1;
                for _ in 0..e.degree() {
                    q = q.checked_mul(p)?;
                }
                Some(q)
            }
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_ratfunc(RatFunc::from_poly(MultiPoly::zero(
            self.base(),
            self.ground().nvars(),
        )))
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        let ground = self.ground();
        let c = ground.base.from_i64(n);
        self.from_ratfunc(RatFunc::from_poly(MultiPoly::constant(
            ground.base,
            ground.nvars(),
            c,
        )))
    }

    pub fn from_scalar(&self, c: Scalar) -> FieldElement {
        let ground = self.ground();
        assert_eq!(c.base(), ground.base);
        self.from_ratfunc(RatFunc::from_poly(MultiPoly::constant(
            ground.base,
            ground.nvars(),
            c,
        )))
    }

    /// Lifts a ground-field fraction into this field.
    pub fn from_ratfunc(&self, rf: RatFunc) -> FieldElement {
        match self {
            Fld::Fun(_) => FieldElement {
                parent: self.clone(),
                repr: Repr::Rat(rf),
            },
            Fld::Ext(_) => {
                let coeffs = if rf.is_zero() { vec![] } else { vec![rf] };
                FieldElement {
                    parent: self.clone(),
                    repr: Repr::Ext(coeffs),
                }
            }
        }
    }

    pub fn var(&self, name: &str) -> Option<FieldElement> {
        let ground = self.ground();
        if let Some(i) = ground.var_index(name) {
            let p = MultiPoly::var(ground.base, ground.nvars(), i);
            return Some(self.from_ratfunc(RatFunc::from_poly(p)));
        }
        if let Fld::Ext(e) = self {
            if e.gen_name == name {
                return Some(self.generator());
            }
        }
        None
    }

    /// theta for an extension; panics on function fields.
    pub fn generator(&self) -> FieldElement {
        match self {
            Fld::Fun(_) => panic!("function field has no extension generator"),
            Fld::Ext(e) => {
                let ground = &e.ground;
                let zero = RatFunc::from_poly(MultiPoly::zero(ground.base, ground.nvars()));
                let one = RatFunc::from_poly(MultiPoly::one(ground.base, ground.nvars()));
                let coeffs = if e.degree() == 1 {
                    // theta = -c_0 when the modulus is linear
                    vec![e.modulus[0].neg()]
                } else {
                    vec![zero, one]
                };
                FieldElement {
                    parent: self.clone(),
                    repr: Repr::Ext(trim_ext(coeffs)),
                }
            }
        }
    }

    /// Embeds an element of the ground field into this extension.
    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        match self {
            Fld::Fun(_) => {
                assert_eq!(&x.parent, self, "embed expects the ground element");
                x.clone()
            }
            Fld::Ext(e) => match &x.repr {
                Repr::Rat(rf) => {
                    assert_eq!(x.parent.ground(), &e.ground, "ground mismatch");
                    self.from_ratfunc(rf.clone())
                }
                Repr::Ext(_) => {
                    assert_eq!(&x.parent, self, "cannot embed across extensions");
                    x.clone()
                }
            },
        }
    }

    /// All field elements, in a fixed order; only for finite fields.
    pub fn enumerate_elements(&self) -> Option<Vec<FieldElement>> {
        let ground = self.ground();
        if !ground.vars.is_empty() {
            return None;
        }
        let scalars = ground.base.enumerate()?;
        match self {
            Fld::Fun(_) => Some(scalars.into_iter().map(|s| self.from_scalar(s)).collect()),
            Fld::Ext(e) => {
                let d = e.degree();
                let mut out = Vec::new();
                let mut idx = vec![0usize; d];
                loop {
                    let coeffs: Vec<RatFunc> = idx
                        .iter()
                        .map(|&i| {
                            RatFunc::from_poly(MultiPoly::constant(
                                ground.base,
                                0,
                                scalars[i].clone(),
                            ))
                        })
                        .collect();
                    out.push(FieldElement {
                        parent: self.clone(),
                        repr: Repr::Ext(trim_ext(coeffs)),
                    });
                    let mut k = 0;
                    loop {
                        if k == d {
                            return Some(out);
                        }
                        idx[k] += 1;
                        if idx[k] < scalars.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
            }
        }
    }
}

fn trim_ext(mut v: Vec<RatFunc>) -> Vec<RatFunc> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(rf) => rf.is_zero(),
            Repr::Ext(c) => c.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        self == &self.parent.one()
    }

    fn assert_same_parent(&self, rhs: &FieldElement) {
        assert_eq!(self.parent, rhs.parent, "elements of different fields");
    }

    pub fn add(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_parent(rhs);
        match (&self.repr, &rhs.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElement {
                parent: self.parent.clone(),
                repr: Repr::Rat(a.add(b)),
            },
            (Repr::Ext(a), Repr::Ext(b)) => {
                let n = a.len().max(b.len());
                let zero = self.zero_rf();
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let x = a.get(i).unwrap_or(&zero);
                    let y = b.get(i).unwrap_or(&zero);
                    out.push(x.add(y));
                }
                FieldElement {
                    parent: self.parent.clone(),
                    repr: Repr::Ext(trim_ext(out)),
                }
            }
            _ => unreachable!("repr follows parent"),
        }
    }

    pub fn sub(&self, rhs: &FieldElement) -> FieldElement {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FieldElement {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(a.neg()),
            Repr::Ext(a) => Repr::Ext(a.iter().map(|c| c.neg()).collect()),
        };
        FieldElement {
            parent: self.parent.clone(),
            repr,
        }
    }

    pub fn mul(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_parent(rhs);
        match (&self.repr, &rhs.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElement {
                parent: self.parent.clone(),
                repr: Repr::Rat(a.mul(b)),
            },
            (Repr::Ext(a), Repr::Ext(b)) => {
                let ext = match &self.parent {
                    Fld::Ext(e) => e,
                    _ => unreachable!(),
                };
                let prod = ext_mul(ext, a, b);
                FieldElement {
                    parent: self.parent.clone(),
                    repr: Repr::Ext(prod),
                }
            }
            _ => unreachable!("repr follows parent"),
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(a.inv()?),
            Repr::Ext(a) => {
                let ext = match &self.parent {
                    Fld::Ext(e) => e,
                    _ => unreachable!(),
                };
                Repr::Ext(ext_inv(ext, a)?)
            }
        };
        Ok(FieldElement {
            parent: self.parent.clone(),
            repr,
        })
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = self.parent.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Checked addition with a `ParentMismatch` error instead of a panic.
    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        if self.parent != rhs.parent {
            return Err(Error::ParentMismatch);
        }
        Ok(self.add(rhs))
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        if self.parent != rhs.parent {
            return Err(Error::ParentMismatch);
        }
        Ok(self.mul(rhs))
    }

    fn zero_rf(&self) -> RatFunc {
        let ground = self.parent.ground();
        RatFunc::from_poly(MultiPoly::zero(ground.base, ground.nvars()))
    }

    /// The fraction when this element lies in a function field.
    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match &self.repr {
            Repr::Rat(rf) => Some(rf),
            Repr::Ext(_) => None,
        }
    }

    /// Extension coefficients padded to the extension degree.
    pub fn ext_coords(&self) -> Option<Vec<RatFunc>> {
        match (&self.parent, &self.repr) {
            (Fld::Ext(e), Repr::Ext(c)) => {
                let mut v = c.clone();
                let zero = self.zero_rf();
                v.resize(e.degree(), zero);
                Some(v)
            }
            _ => None,
        }
    }

    /// The scalar value when the element is constant.
    pub fn as_scalar(&self) -> Option<Scalar> {
        let rf = self.as_ratfunc().or_else(|| match &self.repr {
            Repr::Ext(c) if c.len() <= 1 => c.first().or(None),
            _ => None,
        })?;
        if rf.num.is_constant() && rf.den.is_constant() {
            let d = rf.den.constant_term();
            return Some(rf.num.constant_term().div(&d).unwrap());
        }
        None
    }
}

/// Reduces a raw coefficient vector modulo the (monic) extension modulus.
fn ext_reduce(ext: &SimpleExtension, mut coeffs: Vec<RatFunc>) -> Vec<RatFunc> {
    let d = ext.degree();
    while coeffs.len() > d {
        let lead = coeffs.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let k = coeffs.len() - d;
        for (i, m) in ext.modulus.iter().enumerate() {
            let t = lead.mul(m);
            coeffs[k + i] = coeffs[k + i].sub(&t);
        }
    }
    trim_ext(coeffs)
}

fn ext_mul(ext: &SimpleExtension, a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let ground = &ext.ground;
    let zero = RatFunc::from_poly(MultiPoly::zero(ground.base, ground.nvars()));
    let mut prod = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = prod[i + j].add(&x.mul(y));
        }
    }
    ext_reduce(ext, prod)
}

/// Inverse in K[theta]/(pi) by the extended Euclidean algorithm over K.
fn ext_inv(ext: &SimpleExtension, a: &[RatFunc]) -> Result<Vec<RatFunc>> {
    let ground = &ext.ground;
    let zero = || RatFunc::from_poly(MultiPoly::zero(ground.base, ground.nvars()));
    let one = || RatFunc::from_poly(MultiPoly::one(ground.base, ground.nvars()));

    // r0 = modulus (monic), r1 = a
    let mut r0: Vec<RatFunc> = ext.modulus.clone();
    r0.push(one());
    let mut r1: Vec<RatFunc> = a.to_vec();
    let mut t0 = vec![];
    let mut t1 = vec![one()];

    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1, &zero);
        let t_next = poly_sub(&t0, &poly_mul(&q, &t1, &zero), &zero);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t_next;
    }
    // r0 is a nonzero constant gcd (modulus irreducible)
    if r0.len() != 1 {
        return Err(Error::NotAUnit);
    }
    let c = r0[0].inv()?;
    Ok(ext_reduce(
        ext,
        t0.iter().map(|t| t.mul(&c)).collect::<Vec<_>>(),
    ))
}

fn poly_sub(a: &[RatFunc], b: &[RatFunc], zero: &impl Fn() -> RatFunc) -> Vec<RatFunc> {
    let n = a.len().max(b.len());
    let z = zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&z);
        let y = b.get(i).unwrap_or(&z);
        out.push(x.sub(y));
    }
    trim_ext(out)
}

fn poly_mul(a: &[RatFunc], b: &[RatFunc], zero: &impl Fn() -> RatFunc) -> Vec<RatFunc> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim_ext(out)
}

fn poly_divrem(
    a: &[RatFunc],
    b: &[RatFunc],
    zero: &impl Fn() -> RatFunc,
) -> (Vec<RatFunc>, Vec<RatFunc>) {
    assert!(!b.is_empty());
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (vec![], trim_ext(rem));
    }
    let mut quot = vec![zero(); rem.len() - b.len() + 1];
    let lead_inv = b.last().unwrap().inv().expect("nonzero leading coefficient");
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap().mul(&lead_inv);
        quot[k] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let t = c.mul(bc);
            rem[k + i] = rem[k + i].sub(&t);
        }
        rem = trim_ext(rem);
        if rem.is_empty() {
            break;
        }
        if rem.len() < b.len() {
            break;
        }
    }
    (trim_ext(quot), rem)
}

/// Trace of the multiplication-by-`a` endomorphism of L over its ground field.
pub fn trace(a: &FieldElement) -> FieldElement {
    let ext = match &a.parent {
        Fld::Ext(e) => e.clone(),
        Fld::Fun(_) => return a.clone(),
    };
    let ground_fld = Fld::Fun(ext.ground.clone());
    let d = ext.degree();
    let coords = a.ext_coords().unwrap();
    let zero = RatFunc::from_poly(MultiPoly::zero(ext.ground.base, ext.ground.nvars()));

    // accumulate the trace of the companion action: sum over j of the
    // theta^j coefficient of a * theta^j
    let mut acc = zero.clone();
    let mut cur = coords; // a * theta^0
    for j in 0..d {
        let c = cur.get(j).cloned().unwrap_or_else(|| zero.clone());
        acc = acc.add(&c);
        if j + 1 < d {
            // multiply by theta: shift and reduce
            let mut shifted = vec![zero.clone()];
            shifted.extend(cur.iter().cloned());
            cur = ext_reduce(&ext, shifted);
            cur.resize(d, zero.clone());
        }
    }
    ground_fld.from_ratfunc(acc)
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ground = self.parent.ground();
        let names: Vec<String> = ground.vars.clone();
        match &self.repr {
            Repr::Rat(rf) => write!(f, "{}", display_ratfunc(rf, &names)),
            Repr::Ext(coeffs) => {
                if coeffs.is_empty() {
                    return write!(f, "0");
                }
                let gen = match &self.parent {
                    Fld::Ext(e) => e.gen_name.clone(),
                    _ => unreachable!(),
                };
                let mut parts = Vec::new();
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let cs = display_ratfunc(c, &names);
                    let part = match i {
                        0 => cs,
                        1 if cs == "1" => gen.clone(),
                        1 => format!("({cs})*{gen}"),
                        _ if cs == "1" => format!("{gen}^{i}"),
                        _ => format!("({cs})*{gen}^{i}"),
                    };
                    parts.push(part);
                }
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

pub fn display_ratfunc(rf: &RatFunc, names: &[String]) -> String {
    let num = rf.num.display_with(names);
    if rf.den.is_constant() {
        num
    } else {
        let den = rf.den.display_with(names);
        let num_s = if rf.num.terms.len() > 1 {
            format!("({num})")
        } else {
            num
        };
        format!("{num_s}/({den})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5_field() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::prime(5).unwrap(), &[]))
    }

    fn q_t() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::Rationals, &["t"]))
    }

    #[test]
    fn inv_in_f5() {
        let k = f5_field();
        let two = k.from_i64(2);
        assert_eq!(two.inv().unwrap(), k.from_i64(3));
    }

    #[test]
    fn rational_function_inverse_law() {
        let k = q_t();
        let t = k.var("t").unwrap();
        let inv_t = t.inv().unwrap();
        assert_eq!(inv_t.mul(&t), k.one());
    }

    #[test]
    fn extension_modulus_reduction() {
        // F3[theta]/(theta^2 + 1): theta * theta = -1 = 2
        let f3 = FunctionField::new(BaseField::prime(3).unwrap(), &[]);
        let one = RatFunc::from_poly(MultiPoly::one(BaseField::prime(3).unwrap(), 0));
        let zero = RatFunc::from_poly(MultiPoly::zero(BaseField::prime(3).unwrap(), 0));
        let ext = SimpleExtension::new_unchecked(f3, "theta", vec![one, zero], IrredStatus::Asserted);
        let l = Fld::Ext(ext);
        let th = l.generator();
        assert_eq!(th.mul(&th), l.from_i64(2));
        // (theta)^-1 * theta = 1
        assert_eq!(th.inv().unwrap().mul(&th), l.one());
    }

    #[test]
    fn trace_examples() {
        // F9 = F3[theta]/(theta^2+1): trace(theta) = 0; trace(1) = 2
        let f3 = FunctionField::new(BaseField::prime(3).unwrap(), &[]);
        let one = RatFunc::from_poly(MultiPoly::one(BaseField::prime(3).unwrap(), 0));
        let zero = RatFunc::from_poly(MultiPoly::zero(BaseField::prime(3).unwrap(), 0));
        let ext = SimpleExtension::new_unchecked(
            f3.clone(),
            "theta",
            vec![one, zero],
            IrredStatus::Asserted,
        );
        let l = Fld::Ext(ext);
        let k = Fld::Fun(f3);
        assert_eq!(trace(&l.generator()), k.zero());
        assert_eq!(trace(&l.one()), k.from_i64(2));

        // Q[theta]/(theta^2 - 2): trace(3 + theta) = 6
        let q = FunctionField::new(BaseField::Rationals, &[]);
        let m2 = RatFunc::from_poly(MultiPoly::constant(
            BaseField::Rationals,
            0,
            BaseField::Rationals.from_i64(-2),
        ));
        let z = RatFunc::from_poly(MultiPoly::zero(BaseField::Rationals, 0));
        let ext = SimpleExtension::new_unchecked(q.clone(), "theta", vec![m2, z], IrredStatus::Asserted);
        let l = Fld::Ext(ext);
        let x = l.from_i64(3).add(&l.generator());
        assert_eq!(trace(&x), Fld::Fun(q).from_i64(6));
    }

    #[test]
    fn parent_mismatch_checked() {
        let a = f5_field().one();
        let b = q_t().one();
        assert_eq!(a.checked_add(&b), Err(Error::ParentMismatch));
    }

    #[test]
    fn canonical_form_uniqueness() {
        // (t^2 - 1)/(t - 1) reduces to t + 1 with monic denominator 1
        let k = q_t();
        let t = k.var("t").unwrap();
        let num = t.mul(&t).sub(&k.one());
        let den = t.sub(&k.one());
        let q1 = num.div(&den).unwrap();
        assert_eq!(q1, t.add(&k.one()));
    }
}
