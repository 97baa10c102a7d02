//! Local analysis at places of the projective line over K: Laurent
//! expansions, valuations, regularity of differential forms, and residues.
//!
//! At a finite place pi the completed local ring is k(x)[[s]] with s = t -
//! theta for the Hensel root theta of pi, so a rational function expands by
//! substituting t = theta + s, and a form rewrites through dt = ds + d(theta)
//! with d(theta) a constant form over the residue field. At infinity the
//! substitution is t = 1/u with dt = -u^{-2} du. Both rewrites are exact ring
//! maps, so every valuation and residue below is exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::differential::{exterior_d, form_trace, generator_differential, DifferentialForm};
use crate::error::{Error, Result};
use crate::factor::make_extension;
use crate::field::{Fld, FieldElement, FunctionField};
use crate::picard::Place;
use crate::unipoly::{split_variable, RatT, UniPoly};

/// A truncated Laurent expansion at a place; `coeffs[i]` multiplies
/// s^(valuation + i) where s is the local coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub place: Place,
    pub field: Fld,
    pub valuation: i64,
    pub coeffs: Vec<FieldElement>,
    pub precision: usize,
}

/// The residue field and transition data of a place.
pub struct LocalFrame {
    pub place: Place,
    pub kx: Fld,
    pub theta: FieldElement,
    pub dtheta: DifferentialForm,
}

/// An unreduced fraction of polynomials in the local coordinate. Local
/// valuations and Laurent coefficients do not depend on the representative,
/// so no gcd is ever taken here; reduction over extension residue fields
/// would be the expensive step.
#[derive(Clone, Debug)]
pub struct LocalRat {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl LocalRat {
    fn from_poly(num: UniPoly) -> LocalRat {
        let den = UniPoly::one(num.field.clone());
        LocalRat { num, den }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &LocalRat) -> LocalRat {
        if self.den == rhs.den {
            return LocalRat {
                num: self.num.add(&rhs.num),
                den: self.den.clone(),
            };
        }
        LocalRat {
            num: self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            den: self.den.mul(&rhs.den),
        }
    }

    fn neg(&self) -> LocalRat {
        LocalRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, rhs: &LocalRat) -> LocalRat {
        LocalRat {
            num: self.num.mul(&rhs.num),
            den: self.den.mul(&rhs.den),
        }
    }
}

impl LocalFrame {
    /// Builds the frame of a place over the constant field K.
    pub fn new(k: &Fld, place: &Place, seed: u64) -> Result<LocalFrame> {
        match place {
            Place::Infinity => Ok(LocalFrame {
                place: place.clone(),
                kx: k.clone(),
                theta: k.zero(),
                dtheta: DifferentialForm::zero(k.clone(), 1),
            }),
            Place::Finite(pi) => {
                assert_eq!(&pi.field, k, "place lives over a different field");
                let d = pi.degree().ok_or(Error::ZeroArgument)?;
                if d == 1 {
                    let theta = pi.coeff(0).neg();
                    let dtheta = exterior_d(&theta)?;
                    return Ok(LocalFrame {
                        place: place.clone(),
                        kx: k.clone(),
                        theta,
                        dtheta,
                    });
                }
                if pi.derivative().is_zero() {
                    return Err(Error::InseparablePlace);
                }
                let ground = match k {
                    Fld::Fun(f) => f.clone(),
                    Fld::Ext(_) => {
                        return Err(Error::Invalid(
                            "places over extension constant fields are not supported".into(),
                        ))
                    }
                };
                let gen = fresh_name(&ground, "w");
                let ext = make_extension(ground, &gen, pi, seed)?;
                let kx = Fld::Ext(ext.clone());
                let theta = kx.generator();
                let dtheta =
                    generator_differential(&ext, &kx).map_err(|_| Error::InseparablePlace)?;
                Ok(LocalFrame {
                    place: place.clone(),
                    kx,
                    theta,
                    dtheta,
                })
            }
        }
    }

    /// Rewrites a rational function of t over K as an (unreduced) fraction in
    /// the local coordinate s over the residue field.
    pub fn localize(&self, f: &RatT) -> LocalRat {
        match &self.place {
            Place::Infinity => {
                // t = 1/u: N(t)/D(t) = rev(N)(u) u^(deg D) / (rev(D)(u) u^(deg N))
                let dn = f.num.degree().unwrap_or(0);
                let dd = f.den.degree().unwrap_or(0);
                let num = f
                    .num
                    .reverse()
                    .mul(&UniPoly::monomial(self.kx.clone(), self.kx.one(), dd));
                let den = f
                    .den
                    .reverse()
                    .mul(&UniPoly::monomial(self.kx.clone(), self.kx.one(), dn));
                LocalRat { num, den }
            }
            Place::Finite(_) => LocalRat {
                num: self.shift_poly(&f.num),
                den: self.shift_poly(&f.den),
            },
        }
    }

    fn shift_poly(&self, p: &UniPoly) -> UniPoly {
        let lifted = UniPoly::new(
            self.kx.clone(),
            p.coeffs.iter().map(|c| self.kx.embed(c)).collect(),
        );
        UniPoly::new(self.kx.clone(), lifted.taylor_at(&self.theta))
    }
}

fn fresh_name(ground: &Arc<FunctionField>, base: &str) -> String {
    let mut name = base.to_string();
    while ground.var_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// Order of vanishing of a nonzero polynomial at the local coordinate zero.
fn ord0(p: &UniPoly) -> usize {
    p.coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial")
}

/// Laurent data of a localized rational function: the valuation and the first
/// `precision` coefficients.
fn expand0(f: &LocalRat, precision: usize) -> (i64, Vec<FieldElement>) {
    assert!(!f.is_zero(), "zero function");
    let field = f.num.field.clone();
    let on = ord0(&f.num);
    let od = ord0(&f.den);
    let v = on as i64 - od as i64;
    let a: Vec<FieldElement> = f.num.coeffs[on..].to_vec();
    let b: Vec<FieldElement> = f.den.coeffs[od..].to_vec();
    let b0_inv = b[0].inv().expect("unit constant term");
    let mut out = Vec::with_capacity(precision);
    for k in 0..precision {
        let mut s = a.get(k).cloned().unwrap_or_else(|| field.zero());
        for j in 1..=k {
            if let Some(bj) = b.get(j) {
                if !bj.is_zero() {
                    s = s.sub(&bj.mul(&out[k - j]));
                }
            }
        }
        out.push(s.mul(&b0_inv));
    }
    (v, out)
}

/// The coefficient of s^k in the expansion of a localized rational function.
fn coeff_at(f: &LocalRat, k: i64) -> FieldElement {
    if f.is_zero() {
        return f.num.field.zero();
    }
    let on = ord0(&f.num) as i64;
    let od = ord0(&f.den) as i64;
    let v = on - od;
    if k < v {
        return f.num.field.zero();
    }
    let (_, coeffs) = expand0(f, (k - v + 1) as usize);
    coeffs[(k - v) as usize].clone()
}

/// s-adic valuation of a localized rational function.
fn val0(f: &LocalRat) -> i64 {
    ord0(&f.num) as i64 - ord0(&f.den) as i64
}

/// Laurent expansion of f at the place, to the requested precision.
pub fn expand_at(k: &Fld, f: &RatT, place: &Place, precision: usize, seed: u64) -> Result<LocalExpansion> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    assert!(precision >= 1, "precision must be at least 1");
    let frame = LocalFrame::new(k, place, seed)?;
    let local = frame.localize(f);
    let (v, coeffs) = expand0(&local, precision);
    Ok(LocalExpansion {
        place: place.clone(),
        field: frame.kx,
        valuation: v,
        coeffs,
        precision,
    })
}

/// Exact valuation of a nonzero rational function at a place, computed from
/// multiplicities rather than expansions.
pub fn valuation(f: &RatT, place: &Place) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match place {
        Place::Infinity => {
            Ok(f.den.degree().unwrap() as i64 - f.num.degree().unwrap() as i64)
        }
        Place::Finite(pi) => {
            let vn = f.num.multiplicity_of(pi) as i64;
            let vd = f.den.multiplicity_of(pi) as i64;
            Ok(vn - vd)
        }
    }
}

/// The local rewrite of a form at a place: the pure part (coefficients of
/// wedge products of constant-field differentials) and the part against the
/// local coordinate differential, both as exact rational functions of s.
struct LocalForm {
    pure: BTreeMap<Vec<usize>, LocalRat>,
    against_ds: BTreeMap<Vec<usize>, LocalRat>,
}

/// Localizes a formal sum of forms of a common degree. Working with the sum
/// termwise keeps every multivariate object small; the summed local data is
/// univariate in the local coordinate, where reduction is cheap.
fn localize_form_sum(
    parts: &[DifferentialForm],
    t_name: &str,
    frame: &LocalFrame,
) -> Result<LocalForm> {
    let mut acc = LocalForm {
        pure: BTreeMap::new(),
        against_ds: BTreeMap::new(),
    };
    for omega in parts {
        let one = localize_form(omega, t_name, frame)?;
        for (k, v) in one.pure {
            match acc.pure.entry(k) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() = e.get().add(&v);
                }
            }
        }
        for (k, v) in one.against_ds {
            match acc.against_ds.entry(k) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() = e.get().add(&v);
                }
            }
        }
    }
    Ok(acc)
}

fn localize_form(
    omega: &DifferentialForm,
    t_name: &str,
    frame: &LocalFrame,
) -> Result<LocalForm> {
    let big = match &omega.field {
        Fld::Fun(f) => f.clone(),
        Fld::Ext(_) => {
            return Err(Error::Invalid(
                "residues act on forms over rational function fields".into(),
            ))
        }
    };
    let t_idx = big
        .var_index(t_name)
        .ok_or_else(|| Error::Invalid(format!("no variable {t_name}")))?;
    let map_idx = |j: usize| if j < t_idx { j } else { j - 1 };

    let zero_rt = || LocalRat::from_poly(UniPoly::zero(frame.kx.clone()));
    let mut pure: BTreeMap<Vec<usize>, LocalRat> = BTreeMap::new();
    let mut against_ds: BTreeMap<Vec<usize>, LocalRat> = BTreeMap::new();
    let add_to = |m: &mut BTreeMap<Vec<usize>, LocalRat>, key: Vec<usize>, val: LocalRat| {
        let e = m.entry(key).or_insert_with(zero_rt);
        *e = e.add(&val);
    };

    // at infinity dt = -u^{-2} du
    let ds_multiplier = match &frame.place {
        Place::Infinity => {
            let u2 = UniPoly::monomial(frame.kx.clone(), frame.kx.one(), 2);
            LocalRat {
                num: UniPoly::constant(frame.kx.clone(), frame.kx.from_i64(-1)),
                den: u2,
            }
        }
        Place::Finite(_) => LocalRat::from_poly(UniPoly::one(frame.kx.clone())),
    };

    for (key, g) in &omega.coeffs {
        let (_, g_rat) = split_variable(g, t_name)?;
        let g_loc = frame.localize(&g_rat);
        if g_loc.is_zero() {
            continue;
        }
        if let Some(pos) = key.iter().position(|&j| j == t_idx) {
            // move the fiber differential to the end of the wedge
            let after = key.len() - 1 - pos;
            let negate = after % 2 == 1;
            let rest: Vec<usize> = key
                .iter()
                .filter(|&&j| j != t_idx)
                .map(|&j| map_idx(j))
                .collect();
            let signed = if negate { g_loc.neg() } else { g_loc };
            // ds part
            add_to(
                &mut against_ds,
                rest.clone(),
                signed.mul(&ds_multiplier),
            );
            // d(theta) part: a constant 1-form over the residue field
            for (tk, tc) in &frame.dtheta.coeffs {
                let j = tk[0];
                if let Some((merged, msign)) = merge_sorted(&rest, j) {
                    let c = LocalRat::from_poly(UniPoly::constant(frame.kx.clone(), tc.clone()));
                    let term = signed.mul(&c);
                    add_to(&mut pure, merged, if msign { term.neg() } else { term });
                }
            }
        } else {
            let mapped: Vec<usize> = key.iter().map(|&j| map_idx(j)).collect();
            add_to(&mut pure, mapped, g_loc);
        }
    }
    Ok(LocalForm { pure, against_ds })
}

/// Inserts `j` into a sorted key; `None` on collision, sign true = negative.
fn merge_sorted(key: &[usize], j: usize) -> Option<(Vec<usize>, bool)> {
    if key.contains(&j) {
        return None;
    }
    let after = key.iter().filter(|&&k| k > j).count();
    let mut merged = key.to_vec();
    merged.push(j);
    merged.sort_unstable();
    Some((merged, after % 2 == 1))
}

/// Whether every local coefficient of the form has nonnegative valuation at
/// the place; the fiber differential is rewritten through the local
/// coordinate first.
pub fn is_regular(
    k: &Fld,
    omega: &DifferentialForm,
    t_name: &str,
    place: &Place,
    seed: u64,
) -> Result<bool> {
    is_regular_parts(k, std::slice::from_ref(omega), t_name, place, seed)
}

/// Regularity of a formal sum of forms (the sum is taken locally).
pub fn is_regular_parts(
    k: &Fld,
    parts: &[DifferentialForm],
    t_name: &str,
    place: &Place,
    seed: u64,
) -> Result<bool> {
    let frame = LocalFrame::new(k, place, seed)?;
    let local = localize_form_sum(parts, t_name, &frame)?;
    for f in local.pure.values().chain(local.against_ds.values()) {
        if !f.is_zero() && val0(f) < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Residue of a form at a place: the s^{-1} coefficient of the part against
/// the local coordinate differential, traced down to the constant field.
pub fn residue(
    k: &Fld,
    omega: &DifferentialForm,
    t_name: &str,
    place: &Place,
    seed: u64,
) -> Result<DifferentialForm> {
    residue_parts(k, std::slice::from_ref(omega), t_name, place, seed)
}

/// Residue of a formal sum of forms of a common degree.
pub fn residue_parts(
    k: &Fld,
    parts: &[DifferentialForm],
    t_name: &str,
    place: &Place,
    seed: u64,
) -> Result<DifferentialForm> {
    assert!(!parts.is_empty(), "empty part list");
    let degree = parts[0].degree;
    assert!(degree >= 1, "residue needs a positive-degree form");
    debug_assert!(parts.iter().all(|p| p.degree == degree));
    let frame = LocalFrame::new(k, place, seed)?;
    let local = localize_form_sum(parts, t_name, &frame)?;
    let mut res = DifferentialForm::zero(frame.kx.clone(), degree - 1);
    for (key, f) in &local.against_ds {
        if f.is_zero() {
            continue;
        }
        let c = coeff_at(f, -1);
        res.insert(key.clone(), c);
    }
    form_trace(&res)
}

/// Sum of residues over the given places.
pub fn residue_sum(
    k: &Fld,
    omega: &DifferentialForm,
    t_name: &str,
    places: &[Place],
    seed: u64,
) -> Result<DifferentialForm> {
    let mut acc = DifferentialForm::zero(k.clone(), omega.degree - 1);
    for p in places {
        acc = acc.add(&residue(k, omega, t_name, p, seed)?);
    }
    Ok(acc)
}

/// Residue of g(t) dt at a simple pole through the derivative formula
/// Tr(N(theta)/D'(theta)); an independent cross-check of `residue`.
pub fn simple_pole_residue_oracle(
    k: &Fld,
    g: &RatT,
    place: &Place,
    seed: u64,
) -> Result<FieldElement> {
    let pi = match place {
        Place::Finite(pi) => pi,
        Place::Infinity => return Err(Error::Invalid("oracle handles finite places".into())),
    };
    if g.den.multiplicity_of(pi) != 1 {
        return Err(Error::Invalid("oracle needs a simple pole".into()));
    }
    let frame = LocalFrame::new(k, place, seed)?;
    let lift = |p: &UniPoly| {
        UniPoly::new(
            frame.kx.clone(),
            p.coeffs.iter().map(|c| frame.kx.embed(c)).collect(),
        )
    };
    let num = lift(&g.num).eval(&frame.theta);
    let dden = lift(&g.den.derivative()).eval(&frame.theta);
    let val = num.div(&dden)?;
    Ok(crate::field::trace(&val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseField;

    fn q() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::Rationals, &[]))
    }

    fn qt() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::Rationals, &["t"]))
    }

    fn poly(field: &Fld, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            field.clone(),
            coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    #[test]
    fn expansion_examples() {
        let k = q();
        // 1/t at t = 0: valuation -1
        let f = RatT::new(poly(&k, &[1]), poly(&k, &[0, 1]));
        let e = expand_at(&k, &f, &Place::finite(poly(&k, &[0, 1])), 3, 0).unwrap();
        assert_eq!(e.valuation, -1);
        assert_eq!(e.coeffs, vec![k.one(), k.zero(), k.zero()]);

        // t/(t-1) at (t-1): (t-1)^{-1} + 1
        let f = RatT::new(poly(&k, &[0, 1]), poly(&k, &[-1, 1]));
        let e = expand_at(&k, &f, &Place::finite(poly(&k, &[-1, 1])), 2, 0).unwrap();
        assert_eq!(e.valuation, -1);
        assert_eq!(e.coeffs, vec![k.one(), k.one()]);

        // t^2 + 1 at infinity: u^{-2} (1 + u^2)
        let f = RatT::from_poly(poly(&k, &[1, 0, 1]));
        let e = expand_at(&k, &f, &Place::Infinity, 3, 0).unwrap();
        assert_eq!(e.valuation, -2);
        assert_eq!(e.coeffs, vec![k.one(), k.zero(), k.one()]);
    }

    #[test]
    fn valuation_examples() {
        let k = q();
        // v_0(t^3/(t-1)) = 3
        let f = RatT::new(poly(&k, &[0, 0, 0, 1]), poly(&k, &[-1, 1]));
        assert_eq!(valuation(&f, &Place::finite(poly(&k, &[0, 1]))).unwrap(), 3);
        assert_eq!(valuation(&f, &Place::Infinity).unwrap(), -2);
        assert_eq!(valuation(&f, &Place::finite(poly(&k, &[-1, 1]))).unwrap(), -1);
    }

    #[test]
    fn residue_of_dlog_t() {
        // dt/t: residue 1 at 0, -1 at infinity
        let kt = qt();
        let k = q();
        let t = kt.var("t").unwrap();
        let omega = crate::differential::dlog(&t).unwrap();
        let zero_place = Place::finite(poly(&k, &[0, 1]));
        let r0 = residue(&k, &omega, "t", &zero_place, 0).unwrap();
        assert_eq!(r0.coeff(&[]), k.one());
        let rinf = residue(&k, &omega, "t", &Place::Infinity, 0).unwrap();
        assert_eq!(rinf.coeff(&[]), k.from_i64(-1));
        // and dt/t is not regular at 0
        assert!(!is_regular(&k, &omega, "t", &zero_place, 0).unwrap());
    }

    #[test]
    fn residue_with_trace_at_quadratic_place() {
        // dt/(t^2+1) over Q at the place (t^2+1): Tr(1/(2 theta)) = 0
        let kt = qt();
        let k = q();
        let t = kt.var("t").unwrap();
        let g = t.mul(&t).add(&kt.one()).inv().unwrap();
        let omega = crate::differential::exterior_d(&t).unwrap().scale(&g);
        let place = Place::finite(poly(&k, &[1, 0, 1]));
        let r = residue(&k, &omega, "t", &place, 0).unwrap();
        assert!(r.is_zero());
        // cross-check with the derivative oracle
        let grat = RatT::new(poly(&k, &[1]), poly(&k, &[1, 0, 1]));
        let o = simple_pole_residue_oracle(&k, &grat, &place, 0).unwrap();
        assert!(o.is_zero());
    }

    #[test]
    fn residue_theorem_small() {
        // g dt with g = 1/(t(t-1)): residues 1 at 0? compute: -1 at 0? check sum 0
        let kt = qt();
        let k = q();
        let t = kt.var("t").unwrap();
        let g = t.mul(&t.sub(&kt.one())).inv().unwrap();
        let omega = crate::differential::exterior_d(&t).unwrap().scale(&g);
        let places = vec![
            Place::finite(poly(&k, &[0, 1])),
            Place::finite(poly(&k, &[-1, 1])),
            Place::Infinity,
        ];
        let total = residue_sum(&k, &omega, "t", &places, 0).unwrap();
        assert!(total.is_zero());
        // individual values: -1 at 0 and +1 at 1
        let r0 = residue(&k, &omega, "t", &places[0], 0).unwrap();
        assert_eq!(r0.coeff(&[]), k.from_i64(-1));
    }

    #[test]
    fn inseparable_place_refused() {
        // t^3 - u over F3(u) has vanishing derivative
        let k = Fld::Fun(FunctionField::new(BaseField::prime(3).unwrap(), &["u"]));
        let u = k.var("u").unwrap();
        let pi = UniPoly::new(
            k.clone(),
            vec![u.neg(), k.zero(), k.zero(), k.one()],
        );
        let place = Place::finite(pi);
        let f = RatT::from_poly(UniPoly::var(k.clone()));
        assert_eq!(
            expand_at(&k, &f, &place, 2, 0).unwrap_err(),
            Error::InseparablePlace
        );
    }
}
