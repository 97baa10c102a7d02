//! Absolute Kaehler differential forms over rational function fields and
//! their separable simple extensions.
//!
//! For the supported fields the absolute forms coincide with the forms
//! relative to the prime field (the rationals and prime fields have no
//! absolute differentials), so a degree-s form has a finite basis indexed by
//! s-element subsets of the transcendental variables. Over an extension
//! K[theta]/(pi) the generator's differential is eliminated immediately via
//! implicit differentiation of pi, keeping a single normal form.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fld, FieldElement, SimpleExtension};

/// A differential form of fixed degree; coefficients are indexed by sorted
/// lists of ground-variable indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DifferentialForm {
    pub field: Fld,
    pub degree: usize,
    pub coeffs: BTreeMap<Vec<usize>, FieldElement>,
}

impl DifferentialForm {
    pub fn zero(field: Fld, degree: usize) -> DifferentialForm {
        DifferentialForm {
            field,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A degree-zero form from a scalar.
    pub fn from_element(x: FieldElement) -> DifferentialForm {
        let mut form = DifferentialForm::zero(x.parent.clone(), 0);
        form.insert(vec![], x);
        form
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn insert(&mut self, key: Vec<usize>, val: FieldElement) {
        debug_assert_eq!(key.len(), self.degree);
        debug_assert!(key.windows(2).all(|w| w[0] < w[1]));
        if val.is_zero() {
            return;
        }
        match self.coeffs.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(val);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&val);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, key: &[usize]) -> FieldElement {
        self.coeffs
            .get(key)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, rhs: &DifferentialForm) -> DifferentialForm {
        assert_eq!(self.degree, rhs.degree, "form degrees differ");
        assert_eq!(self.field, rhs.field, "form fields differ");
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &DifferentialForm) -> DifferentialForm {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> DifferentialForm {
        DifferentialForm {
            field: self.field.clone(),
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.field.clone(), self.degree);
        for (k, v) in &self.coeffs {
            out.insert(k.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> DifferentialForm {
        self.scale(&self.field.from_i64(n))
    }

    /// Wedge product; degrees add.
    pub fn wedge(&self, rhs: &DifferentialForm) -> DifferentialForm {
        assert_eq!(self.field, rhs.field, "form fields differ");
        let mut out = DifferentialForm::zero(self.field.clone(), self.degree + rhs.degree);
        for (k1, v1) in &self.coeffs {
            for (k2, v2) in &rhs.coeffs {
                if let Some((merged, sign)) = merge_keys(k1, k2) {
                    let c = v1.mul(v2);
                    out.insert(merged, if sign { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// Exterior derivative of a form; raises the degree by one.
    pub fn d(&self) -> Result<DifferentialForm> {
        let mut out = DifferentialForm::zero(self.field.clone(), self.degree + 1);
        for (k, v) in &self.coeffs {
            let dv = exterior_d(v)?;
            let mut unit = DifferentialForm::zero(self.field.clone(), self.degree);
            unit.insert(k.clone(), self.field.one());
            out = out.add(&dv.wedge(&unit));
        }
        Ok(out)
    }
}

/// Merges two sorted index lists; `None` when they overlap, otherwise the
/// merged list and the sign (true = negative) of the sorting permutation.
fn merge_keys(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for (pos, x) in a.iter().enumerate() {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                // moving y across the tail of a
                let _ = pos;
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

/// d of a field element, as a 1-form over its parent.
pub fn exterior_d(a: &FieldElement) -> Result<DifferentialForm> {
    let parent = a.parent.clone();
    let nvars = parent.ground().nvars();
    let mut out = DifferentialForm::zero(parent.clone(), 1);
    match (&parent, &a.repr) {
        (Fld::Fun(_), crate::field::Repr::Rat(rf)) => {
            for j in 0..nvars {
                out.insert(vec![j], parent.from_ratfunc(rf.derivative(j)));
            }
        }
        (Fld::Ext(ext), crate::field::Repr::Ext(coeffs)) => {
            // partial derivatives of the coefficients
            for j in 0..nvars {
                let mut c = parent.zero();
                let theta = parent.generator();
                let mut theta_pow = parent.one();
                for rf in coeffs {
                    let dc = parent.from_ratfunc(rf.derivative(j));
                    c = c.add(&dc.mul(&theta_pow));
                    theta_pow = theta_pow.mul(&theta);
                }
                out.insert(vec![j], c);
            }
            // chain-rule part through the generator:
            // d/dtheta of sum c_i theta^i is sum i c_i theta^(i-1)
            let dtheta = generator_differential(ext, &parent)?;
            let mut dpoly_dtheta = parent.zero();
            let theta = parent.generator();
            let mut theta_pow = parent.one();
            for (i, rf) in coeffs.iter().enumerate() {
                if i >= 1 {
                    let c = parent
                        .from_ratfunc(rf.clone())
                        .mul(&parent.from_i64(i as i64));
                    dpoly_dtheta = dpoly_dtheta.add(&c.mul(&theta_pow));
                    theta_pow = theta_pow.mul(&theta);
                }
            }
            out = out.add(&dtheta.scale(&dpoly_dtheta));
        }
        _ => unreachable!("repr follows parent"),
    }
    Ok(out)
}

/// d(theta) as a 1-form over the extension, determined by the modulus:
/// pi'(theta) d(theta) + sum_j (d pi/d x_j)(theta) dx_j = 0.
pub fn generator_differential(ext: &SimpleExtension, l: &Fld) -> Result<DifferentialForm> {
    let d = ext.degree();
    let nvars = ext.ground.nvars();
    // pi'(theta): derivative in the generator variable
    let mut deriv = l.zero();
    let theta = l.generator();
    let mut theta_pow = l.one();
    let mut deriv_poly_zero = true;
    for k in 1..d {
        let c = l
            .from_ratfunc(ext.modulus[k].clone())
            .mul(&l.from_i64(k as i64));
        if !c.is_zero() {
            deriv_poly_zero = false;
        }
        deriv = deriv.add(&c.mul(&theta_pow));
        theta_pow = theta_pow.mul(&theta);
    }
    // leading monic term contributes d * theta^(d-1)
    let lead = l.from_i64(d as i64);
    if !lead.is_zero() {
        deriv_poly_zero = false;
    }
    let mut lead_pow = l.one();
    for _ in 0..d.saturating_sub(1) {
        lead_pow = lead_pow.mul(&theta);
    }
    deriv = deriv.add(&lead.mul(&lead_pow));
    if deriv_poly_zero {
        return Err(Error::InseparableExtension);
    }
    debug_assert!(!deriv.is_zero(), "modulus irreducible, derivative nonzero");
    let deriv_inv = deriv.inv()?;

    let mut out = DifferentialForm::zero(l.clone(), 1);
    for j in 0..nvars {
        // (d pi / d x_j)(theta)
        let mut c = l.zero();
        let mut tp = l.one();
        for k in 0..d {
            let dpk = l.from_ratfunc(ext.modulus[k].derivative(j));
            c = c.add(&dpk.mul(&tp));
            tp = tp.mul(&theta);
        }
        out.insert(vec![j], c.neg().mul(&deriv_inv));
    }
    Ok(out)
}

/// dlog(a) = da / a.
pub fn dlog(a: &FieldElement) -> Result<DifferentialForm> {
    if a.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(exterior_d(a)?.scale(&a.inv()?))
}

/// An element of the first infinitesimal neighborhood of the diagonal,
/// identified with a pair (scalar, 1-form).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfinitesimalElement {
    pub scalar: FieldElement,
    pub form: DifferentialForm,
}

impl InfinitesimalElement {
    pub fn zero(field: Fld) -> InfinitesimalElement {
        InfinitesimalElement {
            scalar: field.zero(),
            form: DifferentialForm::zero(field, 1),
        }
    }

    pub fn add(&self, rhs: &InfinitesimalElement) -> InfinitesimalElement {
        InfinitesimalElement {
            scalar: self.scalar.add(&rhs.scalar),
            form: self.form.add(&rhs.form),
        }
    }

    pub fn neg(&self) -> InfinitesimalElement {
        InfinitesimalElement {
            scalar: self.scalar.neg(),
            form: self.form.neg(),
        }
    }

    pub fn scale_int(&self, n: i64) -> InfinitesimalElement {
        InfinitesimalElement {
            scalar: self.scalar.mul(&self.scalar.parent.from_i64(n)),
            form: self.form.scale_int(n),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.form.is_zero()
    }
}

/// The class of the tensor a (x) b: the pair (ab, a db).
pub fn infinitesimal_from_tensor(
    a: &FieldElement,
    b: &FieldElement,
) -> Result<InfinitesimalElement> {
    Ok(InfinitesimalElement {
        scalar: a.mul(b),
        form: exterior_d(b)?.scale(a),
    })
}

/// Coefficientwise trace of a form over an extension, landing over the ground.
pub fn form_trace(omega: &DifferentialForm) -> Result<DifferentialForm> {
    let ext = match &omega.field {
        Fld::Ext(e) => e.clone(),
        Fld::Fun(_) => return Ok(omega.clone()),
    };
    // the normal form over the extension eliminated d(theta), which is only
    // defined for separable moduli
    generator_differential(&ext, &omega.field)?;
    let ground = Fld::Fun(ext.ground.clone());
    let mut out = DifferentialForm::zero(ground, omega.degree);
    for (k, v) in &omega.coeffs {
        out.insert(k.clone(), crate::field::trace(v));
    }
    Ok(out)
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vars = &self.field.ground().vars;
        let mut parts = Vec::new();
        for (k, v) in &self.coeffs {
            let basis: Vec<String> = k.iter().map(|&i| format!("d{}", vars[i])).collect();
            let vs = format!("{v}");
            let vs = if vs.contains(' ') { format!("({vs})") } else { vs };
            if basis.is_empty() {
                parts.push(vs);
            } else if vs == "1" {
                parts.push(basis.join("^"));
            } else {
                parts.push(format!("{} * {}", vs, basis.join("^")));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::make_extension;
    use crate::field::FunctionField;
    use crate::scalar::BaseField;
    use crate::unipoly::UniPoly;

    fn q_t() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::Rationals, &["t"]))
    }

    fn q_ut() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::Rationals, &["u", "t"]))
    }

    #[test]
    fn basic_derivatives() {
        let k = q_t();
        let t = k.var("t").unwrap();
        // d(t^2) = 2t dt
        let d = exterior_d(&t.mul(&t)).unwrap();
        assert_eq!(d.coeff(&[0]), k.from_i64(2).mul(&t));
        // d(constant) = 0
        assert!(exterior_d(&k.from_i64(7)).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule() {
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let a = u.mul(&t).add(&k.one());
        let b = t.mul(&t).sub(&u);
        let lhs = exterior_d(&a.mul(&b)).unwrap();
        let rhs = exterior_d(&b)
            .unwrap()
            .scale(&a)
            .add(&exterior_d(&a).unwrap().scale(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dd_is_zero() {
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let a = u.mul(&t).add(&t.mul(&t).mul(&u));
        let da = exterior_d(&a).unwrap();
        assert!(da.d().unwrap().is_zero());
    }

    #[test]
    fn steinberg_wedge_vanishes() {
        // dlog(a) ^ dlog(1-a) = 0
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let a = u.mul(&t).add(&u); // generic a
        let one_minus = k.one().sub(&a);
        let w = dlog(&a).unwrap().wedge(&dlog(&one_minus).unwrap());
        assert!(w.is_zero());
    }

    #[test]
    fn dlog_multiplicativity() {
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let a = u.add(&t);
        let sq = a.mul(&a);
        assert_eq!(dlog(&sq).unwrap(), dlog(&a).unwrap().scale_int(2));
        assert_eq!(
            dlog(&a.mul(&u)).unwrap(),
            dlog(&a).unwrap().add(&dlog(&u).unwrap())
        );
    }

    #[test]
    fn wedge_expansion() {
        // dlog(u) ^ dlog(t) = (1/(ut)) du^dt
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let w = dlog(&u).unwrap().wedge(&dlog(&t).unwrap());
        let expect = u.mul(&t).inv().unwrap();
        assert_eq!(w.coeff(&[0, 1]), expect);
        // antisymmetry
        let w2 = dlog(&t).unwrap().wedge(&dlog(&u).unwrap());
        assert_eq!(w2, w.neg());
    }

    #[test]
    fn extension_chain_rule() {
        // F3(u)[theta]/(theta^2 - u): d(theta) = (1/(2 theta)) du
        let ground = FunctionField::new(BaseField::prime(3).unwrap(), &["u"]);
        let kf = Fld::Fun(ground.clone());
        let u = kf.var("u").unwrap();
        let pi = UniPoly::new(kf.clone(), vec![u.neg(), kf.zero(), kf.one()]);
        let ext = make_extension(ground, "theta", &pi, 0).unwrap();
        let l = Fld::Ext(ext);
        let theta = l.generator();
        let dtheta = exterior_d(&theta).unwrap();
        let expect = l.from_i64(2).mul(&theta).inv().unwrap();
        assert_eq!(dtheta.coeff(&[0]), expect);
    }

    #[test]
    fn inseparable_refused() {
        // F3(u)[theta]/(theta^3 - u) is inseparable
        let ground = FunctionField::new(BaseField::prime(3).unwrap(), &["u"]);
        let kf = Fld::Fun(ground.clone());
        let u = kf.var("u").unwrap();
        let pi = UniPoly::new(kf.clone(), vec![u.neg(), kf.zero(), kf.zero(), kf.one()]);
        let ext = make_extension(ground, "theta", &pi, 0).unwrap();
        let l = Fld::Ext(ext);
        let theta = l.generator();
        assert_eq!(exterior_d(&theta), Err(Error::InseparableExtension));
    }

    #[test]
    fn tensor_pair_values() {
        let k = q_t();
        let t = k.var("t").unwrap();
        // (1, b) -> (b, db)
        let e = infinitesimal_from_tensor(&k.one(), &t).unwrap();
        assert_eq!(e.scalar, t);
        assert_eq!(e.form, exterior_d(&t).unwrap());
        // (a, 1) -> (a, 0)
        let e = infinitesimal_from_tensor(&t, &k.one()).unwrap();
        assert_eq!(e.scalar, t);
        assert!(e.form.is_zero());
    }

    #[test]
    fn exchange_relator_vanishes() {
        // (c (x) abd + abc (x) d) - (bc (x) ad + ac (x) bd) = 0
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let (a, b, c, d) = (
            u.add(&k.one()),
            t.clone(),
            u.mul(&t),
            t.add(&u),
        );
        let abd = a.mul(&b).mul(&d);
        let abc = a.mul(&b).mul(&c);
        let lhs = infinitesimal_from_tensor(&c, &abd)
            .unwrap()
            .add(&infinitesimal_from_tensor(&abc, &d).unwrap());
        let rhs = infinitesimal_from_tensor(&b.mul(&c), &a.mul(&d))
            .unwrap()
            .add(&infinitesimal_from_tensor(&a.mul(&c), &b.mul(&d)).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_of_forms() {
        // over Q(u)[theta]/(theta^2+1): trace((theta + u) dlog u) = 2u dlog u = 2 du/u * u = 2 du... in basis: 2 du * (1/u) * u
        let ground = FunctionField::new(BaseField::Rationals, &["u"]);
        let kf = Fld::Fun(ground.clone());
        let u = kf.var("u").unwrap();
        let pi = UniPoly::new(kf.clone(), vec![kf.one(), kf.zero(), kf.one()]);
        let ext = make_extension(ground, "theta", &pi, 0).unwrap();
        let l = Fld::Ext(ext);
        let coeff = l.generator().add(&l.embed(&u));
        let omega = dlog(&l.embed(&u)).unwrap().scale(&coeff);
        let traced = form_trace(&omega).unwrap();
        let expect = dlog(&u).unwrap().scale(&kf.from_i64(2).mul(&u));
        assert_eq!(traced, expect);
    }
}
