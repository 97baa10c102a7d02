//! Multilinear symbols with additive and multiplicative slots, the shipped
//! concrete symbols, two derived constructions, and exact relation checkers.
//!
//! A symbol here is a total evaluator on r additive slots and s unit slots
//! with values in a target admitting decidable equality. Relations are
//! checked pointwise on seeded samples; a failure carries a witness that can
//! be re-evaluated by hand.

use serde::Serialize;
use std::fmt;
use std::sync::Arc;

use crate::differential::{
    dlog, form_trace, infinitesimal_from_tensor, DifferentialForm,
    InfinitesimalElement,
};
use crate::error::{Error, Result};
use crate::field::{trace, Fld, FieldElement, SimpleExtension};
use crate::sample::{random_avoiding, random_element, random_nonzero, rng_for};

/// What a symbol evaluates to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolValue {
    Form(DifferentialForm),
    Infinitesimal(InfinitesimalElement),
}

impl SymbolValue {
    pub fn add(&self, rhs: &SymbolValue) -> SymbolValue {
        match (self, rhs) {
            (SymbolValue::Form(a), SymbolValue::Form(b)) => SymbolValue::Form(a.add(b)),
            (SymbolValue::Infinitesimal(a), SymbolValue::Infinitesimal(b)) => {
                SymbolValue::Infinitesimal(a.add(b))
            }
            _ => panic!("mismatched symbol targets"),
        }
    }

    pub fn neg(&self) -> SymbolValue {
        match self {
            SymbolValue::Form(a) => SymbolValue::Form(a.neg()),
            SymbolValue::Infinitesimal(a) => SymbolValue::Infinitesimal(a.neg()),
        }
    }

    pub fn sub(&self, rhs: &SymbolValue) -> SymbolValue {
        self.add(&rhs.neg())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SymbolValue::Form(a) => a.is_zero(),
            SymbolValue::Infinitesimal(a) => a.is_zero(),
        }
    }

    pub fn scale_int(&self, n: i64) -> SymbolValue {
        match self {
            SymbolValue::Form(a) => SymbolValue::Form(a.scale_int(n)),
            SymbolValue::Infinitesimal(a) => SymbolValue::Infinitesimal(a.scale_int(n)),
        }
    }

    /// Trace of the value down from an extension to its ground field.
    pub fn trace_down(&self) -> Result<SymbolValue> {
        match self {
            SymbolValue::Form(a) => Ok(SymbolValue::Form(form_trace(a)?)),
            SymbolValue::Infinitesimal(a) => Ok(SymbolValue::Infinitesimal(InfinitesimalElement {
                scalar: trace(&a.scalar),
                form: form_trace(&a.form)?,
            })),
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolValue::Form(a) => write!(f, "{a}"),
            SymbolValue::Infinitesimal(a) => write!(f, "({}, {})", a.scalar, a.form),
        }
    }
}

type Evaluator = Arc<dyn Fn(&Fld, &[FieldElement], &[FieldElement]) -> Result<SymbolValue> + Send + Sync>;

/// A multilinear symbol with r additive and s multiplicative slots.
#[derive(Clone)]
pub struct SymbolSpec {
    pub name: String,
    pub r: usize,
    pub s: usize,
    evaluator: Evaluator,
}

impl fmt::Debug for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolSpec")
            .field("name", &self.name)
            .field("r", &self.r)
            .field("s", &self.s)
            .finish()
    }
}

impl SymbolSpec {
    pub fn new(
        name: &str,
        r: usize,
        s: usize,
        evaluator: Evaluator,
    ) -> SymbolSpec {
        SymbolSpec {
            name: name.to_string(),
            r,
            s,
            evaluator,
        }
    }

    /// Evaluates the symbol; multiplicative-slot arguments must be nonzero.
    pub fn eval(
        &self,
        field: &Fld,
        ga_args: &[FieldElement],
        gm_args: &[FieldElement],
    ) -> Result<SymbolValue> {
        if ga_args.len() != self.r || gm_args.len() != self.s {
            return Err(Error::SlotArity);
        }
        if gm_args.iter().any(|b| b.is_zero()) {
            return Err(Error::ZeroArgument);
        }
        (self.evaluator)(field, ga_args, gm_args)
    }
}

/// (b_1,...,b_s) -> dlog(b_1) ^ ... ^ dlog(b_s).
pub fn make_differential_symbol(s: usize) -> SymbolSpec {
    SymbolSpec::new(
        "diff",
        0,
        s,
        Arc::new(move |field, _ga, gm| {
            let mut acc = DifferentialForm::from_element(field.one());
            for b in gm {
                acc = acc.wedge(&dlog(b)?);
            }
            Ok(SymbolValue::Form(acc))
        }),
    )
}

/// (a | b_1,...,b_s) -> a dlog(b_1) ^ ... ^ dlog(b_s).
pub fn make_extended_differential_symbol(s: usize) -> SymbolSpec {
    SymbolSpec::new(
        "ext-diff",
        1,
        s,
        Arc::new(move |field, ga, gm| {
            let mut acc = DifferentialForm::from_element(ga[0].clone());
            for b in gm {
                acc = acc.wedge(&dlog(b)?);
            }
            let _ = field;
            Ok(SymbolValue::Form(acc))
        }),
    )
}

/// (a, b) -> the class of a (x) b in the infinitesimal neighborhood.
pub fn make_infinitesimal_symbol() -> SymbolSpec {
    SymbolSpec::new(
        "infinitesimal",
        2,
        0,
        Arc::new(|_field, ga, _gm| {
            Ok(SymbolValue::Infinitesimal(infinitesimal_from_tensor(
                &ga[0], &ga[1],
            )?))
        }),
    )
}

/// Deliberately wrong symbol used as a negative control: (a|b) -> a*b*dlog(b)
/// is multilinear-looking but fails the paired Steinberg relation.
pub fn make_broken_symbol() -> SymbolSpec {
    SymbolSpec::new(
        "broken",
        1,
        1,
        Arc::new(|_field, ga, gm| {
            Ok(SymbolValue::Form(
                dlog(&gm[0])?.scale(&ga[0].mul(&gm[0])),
            ))
        }),
    )
}

pub fn symbol_by_name(name: &str, s: usize) -> Option<SymbolSpec> {
    match name {
        "diff" => Some(make_differential_symbol(s.max(1))),
        "ext-diff" => Some(make_extended_differential_symbol(s.max(1))),
        "infinitesimal" => Some(make_infinitesimal_symbol()),
        "broken" => Some(make_broken_symbol()),
        _ => None,
    }
}

/// Merges the first two additive slots by multiplication, giving a symbol
/// with one more additive slot.
pub fn derive_phi_a(phi: &SymbolSpec) -> Result<SymbolSpec> {
    if phi.r < 1 {
        return Err(Error::SlotArity);
    }
    let inner = phi.clone();
    Ok(SymbolSpec::new(
        &format!("{}^A", phi.name),
        phi.r + 1,
        phi.s,
        Arc::new(move |field, ga, gm| {
            let mut merged = vec![ga[0].mul(&ga[1])];
            merged.extend_from_slice(&ga[2..]);
            inner.eval(field, &merged, gm)
        }),
    ))
}

/// The diagonal restriction: one additive and one multiplicative slot are
/// filled with the same unit. Only unit arguments are evaluable.
pub struct PhiB {
    pub base: SymbolSpec,
}

/// Builds the diagonal construction from a symbol with both slot kinds.
pub fn derive_phi_b(phi: &SymbolSpec) -> Result<PhiB> {
    if phi.r < 1 || phi.s < 1 {
        return Err(Error::SlotArity);
    }
    Ok(PhiB { base: phi.clone() })
}

impl PhiB {
    /// Evaluates at (a_1,...,a_{r-1}, [[b]], c_1,...,c_{s-1}).
    pub fn eval(
        &self,
        field: &Fld,
        ga_rest: &[FieldElement],
        b: &FieldElement,
        gm_rest: &[FieldElement],
    ) -> Result<SymbolValue> {
        if b.is_zero() {
            return Err(Error::ZeroDiagonal);
        }
        let mut ga = ga_rest.to_vec();
        ga.push(b.clone());
        let mut gm = vec![b.clone()];
        gm.extend_from_slice(gm_rest);
        self.base.eval(field, &ga, &gm)
    }
}

/// Identifiers of the checkable relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationId {
    St1,
    St2,
    St2Prime,
    St3,
    Multilinearity,
    Projection,
}

impl RelationId {
    pub fn parse(s: &str) -> Option<RelationId> {
        match s {
            "st1" => Some(RelationId::St1),
            "st2" => Some(RelationId::St2),
            "st2'" | "st2p" | "st2prime" => Some(RelationId::St2Prime),
            "st3" => Some(RelationId::St3),
            "multilinearity" | "multi" => Some(RelationId::Multilinearity),
            "projection" => Some(RelationId::Projection),
            _ => None,
        }
    }

    /// Relations that assume odd or zero characteristic.
    fn char_guarded(&self) -> bool {
        matches!(self, RelationId::St2 | RelationId::St2Prime | RelationId::St3)
    }
}

/// Outcome of a relation check; an empty failure list means pass.
#[derive(Clone, Debug, Serialize)]
pub struct SteinbergReport {
    pub relation: RelationId,
    pub symbol: String,
    pub samples: usize,
    pub failures: Vec<String>,
    pub note: Option<String>,
}

impl SteinbergReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks one relation on seeded samples over the given field.
pub fn check_steinberg(
    phi: &SymbolSpec,
    relation: RelationId,
    field: &Fld,
    samples: usize,
    master_seed: u64,
) -> Result<SteinbergReport> {
    if relation.char_guarded() && field.characteristic() == 2 {
        return Ok(SteinbergReport {
            relation,
            symbol: phi.name.clone(),
            samples: 0,
            failures: vec![],
            note: Some("hypothesis excluded: characteristic 2".to_string()),
        });
    }
    let label = format!("steinberg/{}/{:?}", phi.name, relation);
    let mut failures = Vec::new();
    let zero = field.zero();
    let one = field.one();
    for i in 0..samples {
        let mut rng = rng_for(master_seed, &label, i as u64);
        let spectators_ga: Vec<FieldElement> =
            (0..phi.r).map(|_| random_element(field, &mut rng, true)).collect();
        let spectators_gm: Vec<FieldElement> =
            (0..phi.s).map(|_| random_nonzero(field, &mut rng, true)).collect();

        let defect: Option<(String, SymbolValue)> = match relation {
            RelationId::St1 => {
                if phi.s < 2 {
                    return Err(Error::SlotArity);
                }
                let a = random_avoiding(field, &mut rng, &[zero.clone(), one.clone()], true);
                let one_minus = one.sub(&a);
                let mut worst = None;
                for i1 in 0..phi.s {
                    for j1 in (i1 + 1)..phi.s {
                        let mut gm = spectators_gm.clone();
                        gm[i1] = a.clone();
                        gm[j1] = one_minus.clone();
                        let v = phi.eval(field, &spectators_ga, &gm)?;
                        if !v.is_zero() {
                            worst = Some((format!("slots ({i1},{j1}), a = {a}"), v));
                        }
                    }
                }
                worst
            }
            RelationId::St2 => {
                if phi.r < 1 || phi.s < 1 {
                    return Err(Error::SlotArity);
                }
                let a = random_avoiding(field, &mut rng, &[zero.clone(), one.clone()], true);
                let c = random_nonzero(field, &mut rng, true);
                let one_minus = one.sub(&a);
                let mut ga1 = spectators_ga.clone();
                let mut gm1 = spectators_gm.clone();
                ga1[0] = c.mul(&a);
                gm1[0] = a.clone();
                let mut ga2 = spectators_ga.clone();
                let mut gm2 = spectators_gm.clone();
                ga2[0] = c.mul(&one_minus);
                gm2[0] = one_minus.clone();
                let v = phi
                    .eval(field, &ga1, &gm1)?
                    .add(&phi.eval(field, &ga2, &gm2)?);
                if v.is_zero() {
                    None
                } else {
                    Some((format!("a = {a}, c = {c}"), v))
                }
            }
            RelationId::St2Prime => {
                if phi.r < 1 || phi.s < 1 {
                    return Err(Error::SlotArity);
                }
                let a = random_avoiding(field, &mut rng, &[zero.clone(), one.clone()], true);
                let one_minus = one.sub(&a);
                let mut ga1 = spectators_ga.clone();
                let mut gm1 = spectators_gm.clone();
                ga1[phi.r - 1] = a.clone();
                gm1[0] = a.clone();
                let mut ga2 = spectators_ga.clone();
                let mut gm2 = spectators_gm.clone();
                ga2[phi.r - 1] = one_minus.clone();
                gm2[0] = one_minus.clone();
                let v = phi
                    .eval(field, &ga1, &gm1)?
                    .add(&phi.eval(field, &ga2, &gm2)?);
                if v.is_zero() {
                    None
                } else {
                    Some((format!("a = {a}"), v))
                }
            }
            RelationId::St3 => {
                if phi.r < 2 {
                    return Err(Error::SlotArity);
                }
                // polynomial draws: the exchange identity multiplies three
                // arguments together, and products of fractions make the
                // exact reduction needlessly expensive
                let a = random_nonzero(field, &mut rng, false);
                let b = random_nonzero(field, &mut rng, false);
                let c = random_nonzero(field, &mut rng, false);
                let d = random_nonzero(field, &mut rng, false);
                let set = |x: &FieldElement, y: &FieldElement| -> Vec<FieldElement> {
                    let mut ga = spectators_ga.clone();
                    ga[0] = x.clone();
                    ga[1] = y.clone();
                    ga
                };
                let lhs = phi
                    .eval(field, &set(&b.mul(&c), &a.mul(&d)), &spectators_gm)?
                    .add(&phi.eval(field, &set(&a.mul(&c), &b.mul(&d)), &spectators_gm)?);
                let rhs = phi
                    .eval(field, &set(&c, &a.mul(&b).mul(&d)), &spectators_gm)?
                    .add(&phi.eval(
                        field,
                        &set(&a.mul(&b).mul(&c), &d),
                        &spectators_gm,
                    )?);
                let v = lhs.sub(&rhs);
                if v.is_zero() {
                    None
                } else {
                    Some((format!("a={a}, b={b}, c={c}, d={d}"), v))
                }
            }
            RelationId::Multilinearity => {
                let mut worst = None;
                for slot in 0..phi.r {
                    let x = random_element(field, &mut rng, true);
                    let y = random_element(field, &mut rng, true);
                    let mut ga_sum = spectators_ga.clone();
                    ga_sum[slot] = x.add(&y);
                    let mut ga_x = spectators_ga.clone();
                    ga_x[slot] = x.clone();
                    let mut ga_y = spectators_ga.clone();
                    ga_y[slot] = y.clone();
                    let v = phi.eval(field, &ga_sum, &spectators_gm)?.sub(
                        &phi.eval(field, &ga_x, &spectators_gm)?
                            .add(&phi.eval(field, &ga_y, &spectators_gm)?),
                    );
                    if !v.is_zero() {
                        worst = Some((format!("additive slot {slot}: x={x}, y={y}"), v));
                    }
                }
                for slot in 0..phi.s {
                    let x = random_nonzero(field, &mut rng, true);
                    let y = random_nonzero(field, &mut rng, true);
                    let mut gm_prod = spectators_gm.clone();
                    gm_prod[slot] = x.mul(&y);
                    let mut gm_x = spectators_gm.clone();
                    gm_x[slot] = x.clone();
                    let mut gm_y = spectators_gm.clone();
                    gm_y[slot] = y.clone();
                    let v = phi.eval(field, &spectators_ga, &gm_prod)?.sub(
                        &phi.eval(field, &spectators_ga, &gm_x)?
                            .add(&phi.eval(field, &spectators_ga, &gm_y)?),
                    );
                    if !v.is_zero() {
                        worst = Some((format!("unit slot {slot}: x={x}, y={y}"), v));
                    }
                }
                worst
            }
            RelationId::Projection => {
                return Err(Error::Invalid(
                    "projection checks need an extension; use check_projection_formula".into(),
                ))
            }
        };

        if let Some((args, value)) = defect {
            failures.push(format!("sample {i}: {args}; value = {value}"));
            if failures.len() >= 5 {
                break;
            }
        }
    }
    Ok(SteinbergReport {
        relation,
        symbol: phi.name.clone(),
        samples,
        failures,
        note: None,
    })
}

/// Checks the trace projection formula on each additive slot: tracing the
/// argument before evaluation agrees with tracing the value after.
pub fn check_projection_formula(
    phi: &SymbolSpec,
    ext: &Arc<SimpleExtension>,
    samples: usize,
    master_seed: u64,
) -> Result<SteinbergReport> {
    if phi.r == 0 {
        return Err(Error::UnsupportedSlot);
    }
    let l = Fld::Ext(ext.clone());
    let k = Fld::Fun(ext.ground.clone());
    let label = format!("projection/{}", phi.name);
    let mut failures = Vec::new();
    for i in 0..samples {
        let mut rng = rng_for(master_seed, &label, i as u64);
        let slot = i % phi.r;
        let ga_k: Vec<FieldElement> =
            (0..phi.r).map(|_| random_element(&k, &mut rng, true)).collect();
        let gm_k: Vec<FieldElement> =
            (0..phi.s).map(|_| random_nonzero(&k, &mut rng, true)).collect();
        // random element of L in the traced slot
        let mut coords = Vec::new();
        for _ in 0..ext.degree() {
            coords.push(random_element(&k, &mut rng, true));
        }
        let theta = l.generator();
        let mut a_l = l.zero();
        let mut pow = l.one();
        for c in coords {
            a_l = a_l.add(&l.embed(&c).mul(&pow));
            pow = pow.mul(&theta);
        }

        // left side: over K with the traced argument
        let mut ga_lhs = ga_k.clone();
        ga_lhs[slot] = trace(&a_l);
        let lhs = phi.eval(&k, &ga_lhs, &gm_k)?;

        // right side: over L, then trace the value
        let ga_l: Vec<FieldElement> = ga_k
            .iter()
            .enumerate()
            .map(|(j, x)| if j == slot { a_l.clone() } else { l.embed(x) })
            .collect();
        let gm_l: Vec<FieldElement> = gm_k.iter().map(|x| l.embed(x)).collect();
        let rhs = phi.eval(&l, &ga_l, &gm_l)?.trace_down()?;

        let v = lhs.sub(&rhs);
        if !v.is_zero() {
            failures.push(format!("sample {i}: slot {slot}; defect = {v}"));
            if failures.len() >= 5 {
                break;
            }
        }
    }
    Ok(SteinbergReport {
        relation: RelationId::Projection,
        symbol: phi.name.clone(),
        samples,
        failures,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::exterior_d;
    use crate::factor::make_extension;
    use crate::field::FunctionField;
    use crate::scalar::BaseField;
    use crate::unipoly::UniPoly;

    fn f5_ut() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::prime(5).unwrap(), &["u", "t"]))
    }

    fn q_ut() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::Rationals, &["u", "t"]))
    }

    #[test]
    fn differential_symbol_values() {
        let k = q_ut();
        let t = k.var("t").unwrap();
        let phi = make_differential_symbol(1);
        let v = phi.eval(&k, &[], &[t.clone()]).unwrap();
        match v {
            SymbolValue::Form(f) => assert_eq!(f, dlog(&t).unwrap()),
            _ => panic!(),
        }
        // (a, 1-a) -> 0 and (a, a) -> 0
        let phi2 = make_differential_symbol(2);
        let u = k.var("u").unwrap();
        let a = u.add(&t);
        let v = phi2
            .eval(&k, &[], &[a.clone(), k.one().sub(&a)])
            .unwrap();
        assert!(v.is_zero());
        let v = phi2.eval(&k, &[], &[a.clone(), a.clone()]).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn steinberg_suites_pass() {
        for field in [f5_ut(), q_ut()] {
            let diff2 = make_differential_symbol(2);
            let r = check_steinberg(&diff2, RelationId::St1, &field, 40, 7).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            let ext = make_extended_differential_symbol(1);
            let r = check_steinberg(&ext, RelationId::St2, &field, 40, 7).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            let r = check_steinberg(&ext, RelationId::St2Prime, &field, 40, 7).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            let inf = make_infinitesimal_symbol();
            let r = check_steinberg(&inf, RelationId::St3, &field, 40, 7).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            let r = check_steinberg(&inf, RelationId::Multilinearity, &field, 25, 7).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn char_two_guard() {
        let f2 = Fld::Fun(FunctionField::new(BaseField::prime(2).unwrap(), &["u", "t"]));
        let ext = make_extended_differential_symbol(1);
        let r = check_steinberg(&ext, RelationId::St2, &f2, 10, 1).unwrap();
        assert_eq!(r.samples, 0);
        assert!(r.note.as_deref().unwrap().contains("characteristic 2"));
        // ST1 is not guarded
        let diff2 = make_differential_symbol(2);
        let r = check_steinberg(&diff2, RelationId::St1, &f2, 10, 1).unwrap();
        assert_eq!(r.samples, 10);
        assert!(r.passed());
    }

    #[test]
    fn broken_symbol_fails_with_witness() {
        let k = q_ut();
        let phi = make_broken_symbol();
        let r = check_steinberg(&phi, RelationId::St2, &k, 30, 3).unwrap();
        assert!(!r.passed());
        assert!(!r.failures[0].is_empty());
    }

    #[test]
    fn phi_a_merges_slots() {
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let ext = make_extended_differential_symbol(1);
        let phi_a = derive_phi_a(&ext).unwrap();
        assert_eq!(phi_a.r, 2);
        let direct = ext.eval(&k, &[u.mul(&t)], &[t.clone()]).unwrap();
        let via = phi_a.eval(&k, &[u.clone(), t.clone()], &[t.clone()]).unwrap();
        assert_eq!(direct, via);
        // unit in the first slot
        let v1 = phi_a.eval(&k, &[k.one(), u.clone()], &[t.clone()]).unwrap();
        let v2 = ext.eval(&k, &[u.clone()], &[t.clone()]).unwrap();
        assert_eq!(v1, v2);
        // symmetric in the merged slots
        let v3 = phi_a.eval(&k, &[t.clone(), u.clone()], &[t.clone()]).unwrap();
        let v4 = phi_a.eval(&k, &[u, t.clone()], &[t]).unwrap();
        assert_eq!(v3, v4);
    }

    #[test]
    fn phi_b_diagonal_is_exterior_derivative() {
        let k = q_ut();
        let u = k.var("u").unwrap();
        let t = k.var("t").unwrap();
        let ext = make_extended_differential_symbol(1);
        let phi_b = derive_phi_b(&ext).unwrap();
        let b = u.mul(&t).add(&k.from_i64(3));
        let v = phi_b.eval(&k, &[], &b, &[]).unwrap();
        match v {
            SymbolValue::Form(f) => assert_eq!(f, exterior_d(&b).unwrap()),
            _ => panic!(),
        }
        // phi^B(1) = 0
        assert!(phi_b.eval(&k, &[], &k.one(), &[]).unwrap().is_zero());
        assert_eq!(
            phi_b.eval(&k, &[], &k.zero(), &[]),
            Err(Error::ZeroDiagonal)
        );
    }

    #[test]
    fn projection_formula_for_shipped_symbols() {
        // L = Q(u)[theta]/(theta^2 - u)
        let ground = FunctionField::new(BaseField::Rationals, &["u"]);
        let kf = Fld::Fun(ground.clone());
        let u = kf.var("u").unwrap();
        let pi = UniPoly::new(kf.clone(), vec![u.neg(), kf.zero(), kf.one()]);
        let ext = make_extension(ground, "theta", &pi, 0).unwrap();

        let phi = make_extended_differential_symbol(1);
        let r = check_projection_formula(&phi, &ext, 20, 11).unwrap();
        assert!(r.passed(), "{:?}", r.failures);

        let inf = make_infinitesimal_symbol();
        let r = check_projection_formula(&inf, &ext, 20, 11).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}
