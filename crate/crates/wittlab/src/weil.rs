//! Reciprocity data on the projective line over a constant field K: sections
//! with modulus divisors, a test function congruent to 1 along the modulus,
//! validation of the defining inequalities, and the reciprocity sum computed
//! two independent ways (weighted traces of symbol values at the zeros and
//! poles of the test function, and residues of an associated global form).

use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

use crate::differential::{dlog, exterior_d, DifferentialForm, InfinitesimalElement};
use crate::error::{Error, Result};
use crate::factor::certify_irreducible;
use crate::field::{Fld, FieldElement, IrredStatus};
use crate::local::{is_regular_parts, residue_parts, valuation, LocalFrame};
use crate::picard::{Divisor, Place};
use crate::sample::{random_nonzero, rng_for};
use crate::symbol::{SymbolSpec, SymbolValue};
use crate::unipoly::{join_rat, RatT, UniPoly};

/// Whether a section sits in an additive or a multiplicative slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotKind {
    Ga,
    Gm,
}

/// A rational function kept in factored form: unit * prod(factor^exponent).
/// Factors are monic and pairwise distinct; irreducibility is certified where
/// a sound one-way check exists and recorded as asserted otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRat {
    pub unit: FieldElement,
    pub factors: Vec<(UniPoly, i64)>,
}

impl FactoredRat {
    pub fn new(unit: FieldElement, factors: Vec<(UniPoly, i64)>) -> Result<FactoredRat> {
        if unit.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut seen = BTreeSet::new();
        for (pi, _) in &factors {
            if !pi.is_monic() || pi.degree() == Some(0) {
                return Err(Error::Invalid(
                    "factors must be monic of positive degree".into(),
                ));
            }
            if !seen.insert(pi.clone()) {
                return Err(Error::Invalid("repeated factor".into()));
            }
        }
        Ok(FactoredRat {
            unit,
            factors: factors.into_iter().filter(|(_, e)| *e != 0).collect(),
        })
    }

    pub fn constant(unit: FieldElement) -> Result<FactoredRat> {
        FactoredRat::new(unit, vec![])
    }

    pub fn value(&self) -> RatT {
        let field = self.unit.parent.clone();
        let mut num = UniPoly::constant(field.clone(), self.unit.clone());
        let mut den = UniPoly::one(field);
        for (pi, e) in &self.factors {
            if *e > 0 {
                num = num.mul(&pi.pow(*e as usize));
            } else {
                den = den.mul(&pi.pow((-e) as usize));
            }
        }
        RatT::new(num, den)
    }

    /// The full divisor, including the balancing term at infinity.
    pub fn divisor(&self) -> Divisor {
        let mut d = Divisor::zero();
        let mut deg = 0i64;
        for (pi, e) in &self.factors {
            d.insert(Place::finite(pi.clone()), *e);
            deg += e * pi.degree().unwrap() as i64;
        }
        d.insert(Place::Infinity, -deg);
        d
    }

    /// Irreducibility status of each factor.
    pub fn certificates(&self) -> Vec<(Place, IrredStatus)> {
        self.factors
            .iter()
            .map(|(pi, _)| (Place::finite(pi.clone()), certify_irreducible(pi)))
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }
}

/// One slot of a reciprocity datum.
#[derive(Clone, Debug)]
pub struct WeilSection {
    pub kind: SlotKind,
    pub value: FactoredRat,
    pub modulus: Divisor,
}

/// A reciprocity datum over K: sections with moduli and a test function
/// congruent to 1 along the total modulus.
#[derive(Clone, Debug)]
pub struct WeilDatum {
    pub constant_field: Fld,
    pub coord: String,
    pub sections: Vec<WeilSection>,
    pub f: FactoredRat,
}

impl WeilDatum {
    pub fn total_modulus(&self) -> Divisor {
        self.sections
            .iter()
            .fold(Divisor::zero(), |d, s| d.add(&s.modulus))
    }

    pub fn ga_count(&self) -> usize {
        self.sections.iter().filter(|s| s.kind == SlotKind::Ga).count()
    }

    pub fn gm_count(&self) -> usize {
        self.sections.iter().filter(|s| s.kind == SlotKind::Gm).count()
    }
}

/// A violated inequality, with the offending place.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub place: String,
    pub message: String,
}

/// Result of validating a datum against the modulus inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub trivial: bool,
    pub violations: Vec<Violation>,
    pub asserted_factors: Vec<String>,
}

/// Checks the defining inequalities of a datum placewise:
/// additive slots need modulus at least twice the polar divisor,
/// multiplicative slots at least the absolute divisor, and the test function
/// must satisfy v_x(f - 1) >= v_x(D) on the modulus support.
pub fn weil_validate(d: &WeilDatum) -> ValidationReport {
    let mut violations = Vec::new();
    let mut asserted = Vec::new();

    for (idx, s) in d.sections.iter().enumerate() {
        if !s.modulus.is_effective() {
            violations.push(Violation {
                place: "-".into(),
                message: format!("section {idx}: modulus is not effective"),
            });
        }
        let div = s.value.divisor();
        match s.kind {
            SlotKind::Ga => {
                for (place, &m) in &div.coeffs {
                    if m < 0 {
                        let need = 2 * (-m);
                        let have = s.modulus.multiplicity(place);
                        if have < need {
                            violations.push(Violation {
                                place: format!("{place}"),
                                message: format!(
                                    "section {idx}: additive modulus {have} < {need} (twice the pole order)"
                                ),
                            });
                        }
                    }
                }
            }
            SlotKind::Gm => {
                for (place, &m) in &div.coeffs {
                    let need = m.abs();
                    let have = s.modulus.multiplicity(place);
                    if have < need {
                        violations.push(Violation {
                            place: format!("{place}"),
                            message: format!(
                                "section {idx}: multiplicative modulus {have} < {need} (absolute divisor)"
                            ),
                        });
                    }
                }
            }
        }
        for (place, status) in s.value.certificates() {
            if status == IrredStatus::Asserted {
                asserted.push(format!("{place}"));
            }
        }
    }

    // congruence of the test function along the modulus
    let total = d.total_modulus();
    let fv = d.f.value();
    let one = RatT::from_poly(UniPoly::one(d.constant_field.clone()));
    let fm1 = fv.sub(&one);
    let trivial = fm1.is_zero() || d.f.is_constant();
    if !fm1.is_zero() {
        for (place, &m) in &total.coeffs {
            if m <= 0 {
                continue;
            }
            let v = valuation(&fm1, place).expect("nonzero");
            if v < m {
                violations.push(Violation {
                    place: format!("{place}"),
                    message: format!("test function: v(f - 1) = {v} < {m} along the modulus"),
                });
            }
        }
    }
    for (place, status) in d.f.certificates() {
        if status == IrredStatus::Asserted {
            asserted.push(format!("{place}"));
        }
    }

    ValidationReport {
        valid: violations.is_empty(),
        trivial,
        violations,
        asserted_factors: asserted,
    }
}

/// Evaluates a rational function at a place (image in the residue field).
fn eval_at_place(frame: &LocalFrame, rt: &RatT) -> Result<FieldElement> {
    let local = frame.localize(rt);
    let num0 = local.num.coeff(0);
    let den0 = local.den.coeff(0);
    if den0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    num0.div(&den0)
}

/// Places where the test function has zeros or poles, with multiplicities.
fn test_function_places(f: &FactoredRat) -> Vec<(Place, i64)> {
    let mut out: Vec<(Place, i64)> = Vec::new();
    for (place, &m) in &f.divisor().coeffs {
        if m != 0 {
            out.push((place.clone(), m));
        }
    }
    out
}

/// A per-place term of a reciprocity sum.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub place: Place,
    pub weight: i64,
    pub term: SymbolValue,
}

/// The weighted trace sum over the zeros and poles of the test function away
/// from the total modulus.
pub fn weil_sum_definitional(
    d: &WeilDatum,
    phi: &SymbolSpec,
    seed: u64,
) -> Result<(SymbolValue, Vec<LedgerEntry>)> {
    if phi.r != d.ga_count() || phi.s != d.gm_count() {
        return Err(Error::SlotArity);
    }
    let k = &d.constant_field;
    let modulus_support: BTreeSet<Place> = d.total_modulus().coeffs.keys().cloned().collect();
    let mut acc = zero_value(phi, k)?;
    let mut ledger = Vec::new();
    for (place, weight) in test_function_places(&d.f) {
        if modulus_support.contains(&place) {
            continue;
        }
        let frame = LocalFrame::new(k, &place, seed)?;
        let mut ga_args = Vec::new();
        let mut gm_args = Vec::new();
        for s in &d.sections {
            let v = eval_at_place(&frame, &s.value.value())?;
            match s.kind {
                SlotKind::Ga => ga_args.push(v),
                SlotKind::Gm => gm_args.push(v),
            }
        }
        let raw = phi.eval(&frame.kx, &ga_args, &gm_args)?;
        let term = raw.trace_down()?.scale_int(weight);
        acc = acc.add(&term);
        ledger.push(LedgerEntry {
            place,
            weight,
            term,
        });
    }
    Ok((acc, ledger))
}

fn zero_value(phi: &SymbolSpec, k: &Fld) -> Result<SymbolValue> {
    match phi.name.as_str() {
        "infinitesimal" => Ok(SymbolValue::Infinitesimal(InfinitesimalElement::zero(
            k.clone(),
        ))),
        _ => Ok(SymbolValue::Form(DifferentialForm::zero(k.clone(), phi.s))),
    }
}

/// Output of the residue route.
#[derive(Clone, Debug)]
pub struct ResidueRoute {
    /// Sum over places away from the modulus (the reciprocity sum).
    pub restricted: SymbolValue,
    /// Sum over every place with a possible pole, including the modulus
    /// support; zero by the residue theorem.
    pub full: SymbolValue,
    pub ledger: Vec<LedgerEntry>,
}

/// The residue-route sum: residues of a global form built from the sections
/// and dlog of the test function. Supported for the extended differential
/// and infinitesimal symbols.
pub fn weil_sum_residue(d: &WeilDatum, phi: &SymbolSpec, seed: u64) -> Result<ResidueRoute> {
    if phi.r != d.ga_count() || phi.s != d.gm_count() {
        return Err(Error::SlotArity);
    }
    let k = &d.constant_field;
    let ground = match k {
        Fld::Fun(f) => f.clone(),
        Fld::Ext(_) => return Err(Error::Invalid("constant field must be transcendental".into())),
    };
    let mut vars: Vec<&str> = ground.vars.iter().map(|v| v.as_str()).collect();
    if vars.iter().any(|v| *v == d.coord.as_str()) {
        return Err(Error::Invalid("coordinate name clashes with a variable".into()));
    }
    vars.push(&d.coord);
    let big = Fld::Fun(crate::field::FunctionField::new(ground.base, &vars));

    // the evaluation points: zeros and poles of f, of the sections, and
    // infinity, split by membership in the modulus support
    let modulus_support: BTreeSet<Place> = d.total_modulus().coeffs.keys().cloned().collect();
    let mut all_places: BTreeSet<Place> = modulus_support.clone();
    all_places.insert(Place::Infinity);
    for (p, _) in test_function_places(&d.f) {
        all_places.insert(p);
    }
    for s in &d.sections {
        for p in s.value.divisor().support() {
            all_places.insert(p.clone());
        }
    }

    let route = route_forms(d, phi, &big)?;

    let mut restricted = zero_value(phi, k)?;
    let mut full = zero_value(phi, k)?;
    let mut ledger = Vec::new();
    for place in &all_places {
        let term = match &route {
            RouteForms::Sum(parts) => {
                let res = residue_parts(k, parts, &d.coord, place, seed)?;
                SymbolValue::Form(res)
            }
            RouteForms::Pair(first, second) => {
                let r1 = residue_parts(k, first, &d.coord, place, seed)?;
                let r2 = residue_parts(k, second, &d.coord, place, seed)?;
                SymbolValue::Infinitesimal(InfinitesimalElement {
                    scalar: r1.coeff(&[]),
                    form: r2,
                })
            }
        };
        full = full.add(&term);
        if !modulus_support.contains(place) {
            restricted = restricted.add(&term);
            if !term.is_zero() {
                ledger.push(LedgerEntry {
                    place: place.clone(),
                    weight: 0,
                    term,
                });
            }
        }
    }
    Ok(ResidueRoute {
        restricted,
        full,
        ledger,
    })
}

/// The global form of the residue route, kept as a formal sum over the
/// factors of the test function so no large rational function is assembled.
enum RouteForms {
    Sum(Vec<DifferentialForm>),
    Pair(Vec<DifferentialForm>, Vec<DifferentialForm>),
}

/// dlog of a factored rational function as a list of small forms.
fn dlog_parts(big: &Fld, coord: &str, f: &FactoredRat) -> Result<Vec<DifferentialForm>> {
    let mut parts = Vec::new();
    for (pi, e) in &f.factors {
        let lifted = crate::unipoly::join_variable(big, coord, pi);
        parts.push(dlog(&lifted)?.scale_int(*e));
    }
    let unit = crate::unipoly::lift_ground(big, &f.unit);
    let du = dlog(&unit)?;
    if !du.is_zero() {
        parts.push(du);
    }
    Ok(parts)
}

fn route_forms(d: &WeilDatum, phi: &SymbolSpec, big: &Fld) -> Result<RouteForms> {
    let ga_secs: Vec<FieldElement> = d
        .sections
        .iter()
        .filter(|s| s.kind == SlotKind::Ga)
        .map(|s| join_rat(big, &d.coord, &s.value.value()))
        .collect();
    let gm_secs: Vec<FieldElement> = d
        .sections
        .iter()
        .filter(|s| s.kind == SlotKind::Gm)
        .map(|s| join_rat(big, &d.coord, &s.value.value()))
        .collect();
    let dlog_f = dlog_parts(big, &d.coord, &d.f)?;

    match phi.name.as_str() {
        "ext-diff" => {
            let mut base = DifferentialForm::from_element(ga_secs[0].clone());
            for b in &gm_secs {
                base = base.wedge(&dlog(b)?);
            }
            Ok(RouteForms::Sum(
                dlog_f.iter().map(|p| base.wedge(p)).collect(),
            ))
        }
        "infinitesimal" => {
            let (a, b) = (&ga_secs[0], &ga_secs[1]);
            let ab = a.mul(b);
            let first: Vec<DifferentialForm> = dlog_f.iter().map(|p| p.scale(&ab)).collect();
            let adb = exterior_d(b)?.scale(a);
            let second: Vec<DifferentialForm> = dlog_f.iter().map(|p| adb.wedge(p)).collect();
            Ok(RouteForms::Pair(first, second))
        }
        _ => Err(Error::Invalid(format!(
            "no residue route for symbol {}",
            phi.name
        ))),
    }
}

/// Checks regularity of the route form at every modulus place; this is the
/// local content of the reciprocity argument.
pub fn modulus_regularity(d: &WeilDatum, phi: &SymbolSpec, seed: u64) -> Result<bool> {
    let k = &d.constant_field;
    let ground = match k {
        Fld::Fun(f) => f.clone(),
        Fld::Ext(_) => return Err(Error::Invalid("constant field must be transcendental".into())),
    };
    let mut vars: Vec<&str> = ground.vars.iter().map(|v| v.as_str()).collect();
    vars.push(&d.coord);
    let big = Fld::Fun(crate::field::FunctionField::new(ground.base, &vars));
    let route = route_forms(d, phi, &big)?;

    for place in d.total_modulus().coeffs.keys() {
        let ok = match &route {
            RouteForms::Sum(parts) => is_regular_parts(k, parts, &d.coord, place, seed)?,
            RouteForms::Pair(first, second) => {
                is_regular_parts(k, first, &d.coord, place, seed)?
                    && is_regular_parts(k, second, &d.coord, place, seed)?
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both routes side by side.
#[derive(Clone, Debug)]
pub struct ReciprocityResult {
    pub definitional: SymbolValue,
    pub residue_route: ResidueRoute,
    pub definitional_ledger: Vec<LedgerEntry>,
}

pub fn check_reciprocity(d: &WeilDatum, phi: &SymbolSpec, seed: u64) -> Result<ReciprocityResult> {
    let (definitional, definitional_ledger) = weil_sum_definitional(d, phi, seed)?;
    let residue_route = weil_sum_residue(d, phi, seed)?;
    Ok(ReciprocityResult {
        definitional,
        residue_route,
        definitional_ledger,
    })
}

impl fmt::Display for LedgerEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: weight {}, term {}", self.place, self.weight, self.term)
    }
}

/// Kinds of single-inequality violations the generator can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationClass {
    GaModulusTooSmall,
    GmModulusTooSmall,
    CongruenceTooWeak,
}

/// Seeded generator of valid data for the given symbol shape over K.
///
/// The family: additive sections are polynomials in the coordinate (poles at
/// infinity only), multiplicative sections are constants of K, and the test
/// function is a ratio of certified-irreducible products of equal degree
/// whose top coefficients agree far enough to satisfy the congruence at
/// infinity.
pub fn generate_valid_data(
    k: &Fld,
    r: usize,
    s: usize,
    count: usize,
    master_seed: u64,
) -> Vec<WeilDatum> {
    assert!(r >= 1, "at least one additive section");
    let mut out = Vec::new();
    let mut attempt = 0u64;
    while out.len() < count {
        let mut rng = rng_for(master_seed, "weil-gen", attempt);
        attempt += 1;
        if attempt > (count as u64) * 400 {
            panic!("generator stalled; field too small for the requested count");
        }

        let mut sections = Vec::new();
        let mut d_inf = 0i64;
        let mut ok = true;
        for _ in 0..r {
            let deg = rand::Rng::gen_range(&mut rng, 0..=2usize);
            let value = if deg == 0 {
                FactoredRat::constant(random_nonzero(k, &mut rng, false)).unwrap()
            } else {
                let p = crate::sample::random_unipoly(k, &mut rng, deg, false);
                match factored_from_poly(&p) {
                    Some(fr) => fr,
                    None => {
                        ok = false;
                        break;
                    }
                }
            };
            let modulus = if deg == 0 {
                Divisor::zero()
            } else {
                Divisor::single(Place::Infinity, 2 * deg as i64)
            };
            d_inf += 2 * deg as i64;
            sections.push(WeilSection {
                kind: SlotKind::Ga,
                value,
                modulus,
            });
        }
        if !ok {
            continue;
        }
        for _ in 0..s {
            let c = random_nonzero(k, &mut rng, false);
            sections.push(WeilSection {
                kind: SlotKind::Gm,
                value: FactoredRat::constant(c).unwrap(),
                modulus: Divisor::zero(),
            });
        }

        let f = match build_congruent_function(k, d_inf, &mut rng) {
            Some(f) => f,
            None => continue,
        };
        let datum = WeilDatum {
            constant_field: k.clone(),
            coord: "t".to_string(),
            sections,
            f,
        };
        if weil_validate(&datum).valid {
            out.push(datum);
        }
    }
    out
}

/// A polynomial as a factored rational function, when its irreducibility (or
/// a full splitting into certified factors) can be established.
fn factored_from_poly(p: &UniPoly) -> Option<FactoredRat> {
    let (monic, lead) = p.monic();
    if monic.degree() == Some(0) {
        return FactoredRat::constant(lead).ok();
    }
    if monic.degree() == Some(1) {
        return FactoredRat::new(lead, vec![(monic, 1)]).ok();
    }
    if certify_irreducible(&monic) == IrredStatus::Verified && !monic.derivative().is_zero() {
        return FactoredRat::new(lead, vec![(monic, 1)]).ok();
    }
    None
}

/// Builds f = P/Q with P, Q certified products of equal degree whose top
/// `d_inf` coefficients agree, so that v_inf(f - 1) >= d_inf.
fn build_congruent_function(
    k: &Fld,
    d_inf: i64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<FactoredRat> {
    use rand::Rng;
    let need = d_inf.max(1) as usize; // matched coefficients below the lead
    let extra = rng.gen_range(0..=1usize);
    let n = need + extra + 1;

    // denominator: a product of certified factors of total degree n
    let q = random_certified_product(k, n, rng)?;
    let q_poly = q.value().num.clone();

    // numerator: fixed certified part A of degree n - rho_deg, adjustable
    // monic factor rho whose top coefficients are solved for
    let rho_deg = need.max(1).min(n);
    let a_part = if n - rho_deg == 0 {
        FactoredRat::constant(k.one()).unwrap()
    } else {
        random_certified_product(k, n - rho_deg, rng)?
    };
    let a_poly = a_part.value().num.clone();

    // choose free low coefficients of rho at random, then solve the top
    // need-many (below the lead) so that P = A*rho matches Q at the top
    let mut rho_coeffs: Vec<FieldElement> = (0..rho_deg)
        .map(|_| crate::sample::random_element(k, rng, false))
        .collect();
    rho_coeffs.push(k.one());
    // solve rho_{rho_deg - j} for j = 1..=min(need, rho_deg), top down
    for j in 1..=need.min(rho_deg) {
        // coefficient of T^(n-j) of A*rho equals sum over i+l = j of
        // A_{nA-i} * rho_{rho_deg-l}; the l = j term has multiplier A_{nA}=1
        let target = q_poly.coeff(n - j);
        let mut partial = k.zero();
        for i in 1..=j {
            let na = a_poly.degree().unwrap();
            if i > na {
                continue;
            }
            let l = j - i;
            if l > rho_deg {
                continue;
            }
            partial = partial.add(&a_poly.coeff(na - i).mul(&rho_coeffs[rho_deg - l]));
        }
        let solved = target.sub(&partial);
        rho_coeffs[rho_deg - j] = solved;
    }
    let rho = UniPoly::new(k.clone(), rho_coeffs);
    if rho.degree() != Some(rho_deg) {
        return None;
    }
    let rho_fr = factored_from_poly(&rho)?;

    // assemble P/Q in factored form; all factors must stay distinct
    let mut factors: Vec<(UniPoly, i64)> = Vec::new();
    let push = |pi: &UniPoly, e: i64, factors: &mut Vec<(UniPoly, i64)>| -> bool {
        for (q, qe) in factors.iter_mut() {
            if q == pi {
                *qe += e;
                return true;
            }
        }
        factors.push((pi.clone(), e));
        true
    };
    for (pi, e) in &a_part.factors {
        push(pi, *e, &mut factors);
    }
    for (pi, e) in &rho_fr.factors {
        push(pi, *e, &mut factors);
    }
    for (pi, e) in &q.factors {
        push(pi, -e, &mut factors);
    }
    let unit = a_part.unit.mul(&rho_fr.unit).div(&q.unit).ok()?;
    let f = FactoredRat::new(unit, factors.into_iter().filter(|(_, e)| *e != 0).collect()).ok()?;
    if f.is_constant() {
        return None;
    }
    // the assembled value must really be P/Q in lowest terms
    let fv = f.value();
    if fv.is_zero() {
        return None;
    }
    Some(f)
}

/// A product of certified-irreducible monic polynomials of the given total
/// degree, separable factors only.
fn random_certified_product(
    k: &Fld,
    total: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<FactoredRat> {
    use rand::Rng;
    let mut remaining = total;
    let mut factors: Vec<(UniPoly, i64)> = Vec::new();
    while remaining > 0 {
        let d = if remaining == 1 {
            1
        } else {
            rng.gen_range(1..=remaining.min(2))
        };
        let mut found = false;
        for _ in 0..30 {
            let cand = crate::sample::random_unipoly(k, rng, d, true);
            if cand.derivative().is_zero() {
                continue;
            }
            if d > 1 && certify_irreducible(&cand) != IrredStatus::Verified {
                continue;
            }
            if factors.iter().any(|(p, _)| *p == cand) {
                continue;
            }
            factors.push((cand, 1));
            found = true;
            break;
        }
        if !found {
            return None;
        }
        remaining -= d;
    }
    FactoredRat::new(k.one(), factors).ok()
}

/// Takes a valid datum and damages exactly one inequality.
pub fn damage_datum(d: &WeilDatum, class: ViolationClass) -> Option<WeilDatum> {
    let mut out = d.clone();
    match class {
        ViolationClass::GaModulusTooSmall => {
            for s in out.sections.iter_mut() {
                if s.kind == SlotKind::Ga && !s.modulus.coeffs.is_empty() {
                    let m = s.modulus.multiplicity(&Place::Infinity);
                    if m >= 2 {
                        s.modulus = Divisor::single(Place::Infinity, m / 2);
                        return Some(out);
                    }
                }
            }
            None
        }
        ViolationClass::GmModulusTooSmall => {
            for s in out.sections.iter_mut() {
                if s.kind == SlotKind::Gm {
                    // replace the constant by the coordinate itself, keeping
                    // the zero modulus: the divisor bound now fails
                    let t = UniPoly::var(d.constant_field.clone());
                    s.value = FactoredRat::new(d.constant_field.one(), vec![(t, 1)]).unwrap();
                    s.modulus = Divisor::zero();
                    return Some(out);
                }
            }
            None
        }
        ViolationClass::CongruenceTooWeak => {
            // swap the test function for one with too shallow a contact at
            // infinity; only matters when some modulus is positive there
            if d.total_modulus().multiplicity(&Place::Infinity) < 2 {
                return None;
            }
            let k = &d.constant_field;
            let t_minus = |c: i64| {
                UniPoly::new(k.clone(), vec![k.from_i64(-c), k.one()])
            };
            out.f = FactoredRat::new(
                k.one(),
                vec![(t_minus(1), 1), (t_minus(2), -1)],
            )
            .unwrap();
            Some(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FunctionField;
    use crate::scalar::BaseField;
    use crate::symbol::{make_extended_differential_symbol, make_infinitesimal_symbol};

    fn qu() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::Rationals, &["u"]))
    }

    fn poly(field: &Fld, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            field.clone(),
            coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    /// The worked example: a = t + u with modulus 2[inf], b = u constant,
    /// f = (t^2+2)/(t^2+1).
    fn worked_example() -> WeilDatum {
        let k = qu();
        let u = k.var("u").unwrap();
        let a = UniPoly::new(k.clone(), vec![u.clone(), k.one()]);
        WeilDatum {
            constant_field: k.clone(),
            coord: "t".into(),
            sections: vec![
                WeilSection {
                    kind: SlotKind::Ga,
                    value: FactoredRat::new(k.one(), vec![(a, 1)]).unwrap(),
                    modulus: Divisor::single(Place::Infinity, 2),
                },
                WeilSection {
                    kind: SlotKind::Gm,
                    value: FactoredRat::constant(u).unwrap(),
                    modulus: Divisor::zero(),
                },
            ],
            f: FactoredRat::new(
                k.one(),
                vec![(poly(&k, &[2, 0, 1]), 1), (poly(&k, &[1, 0, 1]), -1)],
            )
            .unwrap(),
        }
    }

    #[test]
    fn worked_example_validates() {
        let d = worked_example();
        let rep = weil_validate(&d);
        assert!(rep.valid, "{:?}", rep.violations);
        // shrinking the additive modulus breaks it
        let bad = damage_datum(&d, ViolationClass::GaModulusTooSmall).unwrap();
        let rep = weil_validate(&bad);
        assert!(!rep.valid);
        assert!(rep.violations[0].message.contains("twice the pole order"));
    }

    #[test]
    fn trivial_test_function_accepted() {
        let mut d = worked_example();
        d.f = FactoredRat::constant(d.constant_field.one()).unwrap();
        let rep = weil_validate(&d);
        assert!(rep.valid && rep.trivial);
        let phi = make_extended_differential_symbol(1);
        let (sum, _) = weil_sum_definitional(&d, &phi, 0).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn worked_example_reciprocity_both_routes() {
        let d = worked_example();
        let phi = make_extended_differential_symbol(1);
        let res = check_reciprocity(&d, &phi, 0).unwrap();
        assert!(res.definitional.is_zero(), "definitional = {}", res.definitional);
        assert!(res.residue_route.restricted.is_zero());
        assert!(res.residue_route.full.is_zero());
        // per-place terms are nonzero and opposite
        assert_eq!(res.definitional_ledger.len(), 2);
        assert!(!res.definitional_ledger[0].term.is_zero());
        // regularity holds along the modulus
        assert!(modulus_regularity(&d, &phi, 0).unwrap());
    }

    #[test]
    fn pinned_invalid_ga_datum_has_nonzero_sum() {
        // a = t with modulus [inf] only (needs 2), b = u, f = (t-1)/(t-2)
        let k = qu();
        let u = k.var("u").unwrap();
        let d = WeilDatum {
            constant_field: k.clone(),
            coord: "t".into(),
            sections: vec![
                WeilSection {
                    kind: SlotKind::Ga,
                    value: FactoredRat::new(k.one(), vec![(poly(&k, &[0, 1]), 1)]).unwrap(),
                    modulus: Divisor::single(Place::Infinity, 1),
                },
                WeilSection {
                    kind: SlotKind::Gm,
                    value: FactoredRat::constant(u.clone()).unwrap(),
                    modulus: Divisor::zero(),
                },
            ],
            f: FactoredRat::new(
                k.one(),
                vec![(poly(&k, &[-1, 1]), 1), (poly(&k, &[-2, 1]), -1)],
            )
            .unwrap(),
        };
        assert!(!weil_validate(&d).valid);
        let phi = make_extended_differential_symbol(1);
        let (sum, _) = weil_sum_definitional(&d, &phi, 0).unwrap();
        // 1*(1) dlog u - 1*(2) dlog u = -dlog u
        let expect = SymbolValue::Form(crate::differential::dlog(&u).unwrap().neg());
        assert_eq!(sum, expect);
    }

    #[test]
    fn infinitesimal_datum_reciprocity() {
        // a = t + u, b = t - 1 (both additive), moduli 2[inf] each,
        // f with contact 4 at infinity
        let k = qu();
        let u = k.var("u").unwrap();
        let a = UniPoly::new(k.clone(), vec![u.clone(), k.one()]);
        let f = (0..40)
            .find_map(|i| build_congruent_function(&k, 4, &mut rng_for(5, "inf-datum", i)))
            .expect("generator");
        let d = WeilDatum {
            constant_field: k.clone(),
            coord: "t".into(),
            sections: vec![
                WeilSection {
                    kind: SlotKind::Ga,
                    value: FactoredRat::new(k.one(), vec![(a, 1)]).unwrap(),
                    modulus: Divisor::single(Place::Infinity, 2),
                },
                WeilSection {
                    kind: SlotKind::Ga,
                    value: FactoredRat::new(k.one(), vec![(poly(&k, &[-1, 1]), 1)]).unwrap(),
                    modulus: Divisor::single(Place::Infinity, 2),
                },
            ],
            f,
        };
        let rep = weil_validate(&d);
        assert!(rep.valid, "{:?}", rep.violations);
        let phi = make_infinitesimal_symbol();
        let res = check_reciprocity(&d, &phi, 0).unwrap();
        assert!(res.definitional.is_zero(), "definitional = {}", res.definitional);
        assert!(res.residue_route.restricted.is_zero());
        assert!(res.residue_route.full.is_zero());
    }

    #[test]
    fn generator_produces_valid_data() {
        let k = Fld::Fun(FunctionField::new(BaseField::prime(5).unwrap(), &["u"]));
        let data = generate_valid_data(&k, 1, 1, 5, 99);
        assert_eq!(data.len(), 5);
        for d in &data {
            assert!(weil_validate(d).valid);
        }
    }
}
