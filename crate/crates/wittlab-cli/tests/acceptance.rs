//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every comparison is exact; there are no tolerances anywhere.
//!
//! Run with `cargo test -p wittlab-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use wittlab::differential::{dlog, exterior_d};
use wittlab::field::{Fld, FieldElement};
use wittlab::homotopy::{
    admissibility_newton, cube_boundary_compare, HomotopyDatum, HomotopyTarget, Verdict,
};
use wittlab::local::{residue, residue_sum, simple_pole_residue_oracle};
use wittlab::milnor::{finite_field, milnor_class, milnor_group};
use wittlab::parse::parse_field;
use wittlab::picard::{picard_to_dwitt, picard_to_gm, picard_to_witt, Place};
use wittlab::sample::{random_avoiding, random_element, random_nonzero, random_unipoly, rng_for};
use wittlab::symbol::{
    check_steinberg, derive_phi_b, make_broken_symbol, make_differential_symbol,
    make_extended_differential_symbol, make_infinitesimal_symbol, RelationId, SymbolValue,
};
use wittlab::unipoly::{join_rat, RatT, UniPoly};
use wittlab::weil::{
    check_reciprocity, damage_datum, generate_valid_data, modulus_regularity,
    weil_sum_definitional, weil_validate, ViolationClass,
};
use wittlab::witt::{
    double_teichmuller, dwitt_project_gm, dwitt_project_w, teichmuller, witt_add, witt_compose,
    witt_decompose, witt_neg, witt_scalar, WittCoords,
};

const SEED: u64 = 42;

struct Criterion(&'static str);

impl Criterion {
    fn pass(self) {
        println!("[PASS] {}", self.0);
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        if std::thread::panicking() {
            println!("[FAIL] {}", self.0);
        }
    }
}

fn coords(k: &Fld, v: &[i64]) -> WittCoords {
    WittCoords {
        ring: k.clone(),
        values: v.iter().map(|&c| k.from_i64(c)).collect(),
    }
}

#[test]
fn criterion_1_witt_algebra() {
    let c = Criterion("criterion 1: Witt round trips, group laws, and pinned identities");

    for spec in ["Fp(7)", "Q"] {
        let k = parse_field(spec).unwrap();
        for i in 0..1000u64 {
            let mut rng = rng_for(SEED, "acc1", i);
            use rand::Rng;
            let n = rng.gen_range(1..=8usize);
            let draw = |rng: &mut wittlab::sample::ChaCha8Rng| {
                let values: Vec<FieldElement> =
                    (0..n).map(|_| random_element(&k, rng, false)).collect();
                witt_compose(&WittCoords {
                    ring: k.clone(),
                    values,
                })
            };
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            let z = draw(&mut rng);
            // abelian group laws
            let xy = witt_add(&x, &y).unwrap();
            assert_eq!(xy, witt_add(&y, &x).unwrap());
            assert_eq!(
                witt_add(&xy, &z).unwrap(),
                witt_add(&x, &witt_add(&y, &z).unwrap()).unwrap()
            );
            assert!(witt_add(&x, &witt_neg(&x)).unwrap().is_identity());
            // round trips both ways
            let d = witt_decompose(&x);
            assert_eq!(witt_compose(&d), x);
            let c2 = WittCoords {
                ring: k.clone(),
                values: (0..n).map(|_| random_element(&k, &mut rng, false)).collect(),
            };
            assert_eq!(witt_decompose(&witt_compose(&c2)), c2);
        }
    }

    // pinned: [a] + [b] = (a+b, -ab) in W_2 over F_7 and Q
    for spec in ["Fp(7)", "Q"] {
        let k = parse_field(spec).unwrap();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let s = witt_add(
                    &teichmuller(&k.from_i64(a), 2),
                    &teichmuller(&k.from_i64(b), 2),
                )
                .unwrap();
                assert_eq!(witt_decompose(&s), coords(&k, &[a + b, -(a * b)]));
            }
        }
    }
    // pinned, exhaustive over F_3, F_5, F_7:
    // [alpha] + [-alpha] = (0, alpha^2) and 2 (0, a/2) = (0, a)
    for p in [3u64, 5, 7] {
        let k = parse_field(&format!("Fp({p})")).unwrap();
        for a in 0..p as i64 {
            let plus = teichmuller(&k.from_i64(a), 2);
            let minus = teichmuller(&k.from_i64(-a), 2);
            assert_eq!(
                witt_decompose(&witt_add(&plus, &minus).unwrap()),
                coords(&k, &[0, a * a])
            );
            let half = k.from_i64(a).div(&k.from_i64(2)).unwrap();
            let x = witt_compose(&WittCoords {
                ring: k.clone(),
                values: vec![k.zero(), half],
            });
            assert_eq!(witt_decompose(&witt_scalar(2, &x)), coords(&k, &[0, a]));
        }
    }
    c.pass();
}

#[test]
fn criterion_2_picard_maps() {
    let c = Criterion("criterion 2: divisor-class maps are homomorphisms with pinned images");

    let n = 4;
    for spec in ["Fp(5)", "Fp(7)", "Q"] {
        let k = parse_field(spec).unwrap();
        for i in 0..1000u64 {
            let mut rng = rng_for(SEED, "acc2", i);
            use rand::Rng;
            let df = rng.gen_range(1..=3usize);
            let dg = rng.gen_range(1..=3usize);
            let f = random_unipoly(&k, &mut rng, df, false);
            let g = random_unipoly(&k, &mut rng, dg, false);
            if f.coeff(0).is_zero() || g.coeff(0).is_zero() {
                continue;
            }
            let fg = f.mul(&g);
            // truncated-series target
            assert_eq!(
                picard_to_witt(&fg, n).unwrap(),
                witt_add(&picard_to_witt(&f, n).unwrap(), &picard_to_witt(&g, n).unwrap())
                    .unwrap()
            );
            // unit target
            assert_eq!(
                picard_to_gm(&fg).unwrap(),
                picard_to_gm(&f).unwrap().mul(&picard_to_gm(&g).unwrap())
            );
            // doubled target
            assert_eq!(
                picard_to_dwitt(&fg, n).unwrap(),
                picard_to_dwitt(&f, n)
                    .unwrap()
                    .add(&picard_to_dwitt(&g, n).unwrap())
                    .unwrap()
            );
        }
    }

    // pinned images of T - a, exhaustively over F_7
    let k7 = parse_field("Fp(7)").unwrap();
    for a in 0..7i64 {
        let f = UniPoly::new(k7.clone(), vec![k7.from_i64(-a), k7.one()]);
        assert_eq!(picard_to_witt(&f, 3).unwrap(), teichmuller(&k7.from_i64(a), 3));
        if a != 0 {
            assert_eq!(
                picard_to_dwitt(&f, 3).unwrap(),
                double_teichmuller(&k7.from_i64(a), 3).unwrap()
            );
        }
    }

    // projection-diagram commutativity on 500 random polynomials
    let mut checked = 0;
    let mut i = 0u64;
    while checked < 500 {
        let mut rng = rng_for(SEED, "acc2-proj", i);
        i += 1;
        use rand::Rng;
        let spec = ["Fp(5)", "Fp(7)", "Q"][rng.gen_range(0..3)];
        let k = parse_field(spec).unwrap();
        let deg = rng.gen_range(1..=4);
        let f = random_unipoly(&k, &mut rng, deg, false);
        if f.coeff(0).is_zero() {
            continue;
        }
        let d = picard_to_dwitt(&f, n).unwrap();
        assert_eq!(dwitt_project_w(&d), picard_to_witt(&f, n).unwrap());
        assert_eq!(dwitt_project_gm(&d), picard_to_gm(&f).unwrap());
        checked += 1;
    }
    c.pass();
}

#[test]
fn criterion_3_steinberg_suites() {
    let c = Criterion("criterion 3: Steinberg suites pass with zero failures; negative control fails");

    for spec in ["Q(u,t)", "Fp(5)(u,t)"] {
        let k = parse_field(spec).unwrap();
        // first-relation suite for the plain differential symbol
        for s in [2usize, 3] {
            let phi = make_differential_symbol(s);
            let r = check_steinberg(&phi, RelationId::St1, &k, 1000, SEED).unwrap();
            assert!(r.passed(), "{spec} diff s={s}: {:?}", r.failures.first());
        }
        // paired relations for the extended symbol
        for s in [1usize, 2] {
            let phi = make_extended_differential_symbol(s);
            for rel in [RelationId::St2, RelationId::St2Prime] {
                let r = check_steinberg(&phi, rel, &k, 1000, SEED).unwrap();
                assert!(r.passed(), "{spec} ext s={s} {rel:?}: {:?}", r.failures.first());
            }
        }
        // exchange relation for the infinitesimal symbol
        let phi = make_infinitesimal_symbol();
        let r = check_steinberg(&phi, RelationId::St3, &k, 1000, SEED).unwrap();
        assert!(r.passed(), "{spec} st3: {:?}", r.failures.first());
    }

    // a three-variable run keeps the s = 3 suite away from vacuous wedges
    let k3 = parse_field("Fp(5)(u,v,t)").unwrap();
    let phi3 = make_differential_symbol(3);
    let r = check_steinberg(&phi3, RelationId::St1, &k3, 300, SEED).unwrap();
    assert!(r.passed(), "{:?}", r.failures.first());

    // characteristic 2 reports the excluded hypothesis instead of failing
    let k2 = parse_field("Fp(2)(u,t)").unwrap();
    for rel in [RelationId::St2, RelationId::St2Prime, RelationId::St3] {
        let phi = if rel == RelationId::St3 {
            make_infinitesimal_symbol()
        } else {
            make_extended_differential_symbol(1)
        };
        let r = check_steinberg(&phi, rel, &k2, 100, SEED).unwrap();
        assert_eq!(r.samples, 0);
        assert!(r.note.as_deref().unwrap_or("").contains("characteristic 2"));
        assert!(r.passed());
    }

    // the deliberately wrong symbol produces a concrete witness, and the
    // witness re-evaluates to the hand formula c (2a - 1) da
    let kq = parse_field("Q(u,t)").unwrap();
    let broken = make_broken_symbol();
    let r = check_steinberg(&broken, RelationId::St2, &kq, 200, SEED).unwrap();
    assert!(!r.passed());
    assert!(!r.failures.is_empty());
    {
        let u = kq.var("u").unwrap();
        let a = u.clone();
        let cc = kq.from_i64(1);
        let lhs = broken
            .eval(&kq, &[cc.mul(&a)], &[a.clone()])
            .unwrap()
            .add(&broken
                .eval(&kq, &[cc.mul(&kq.one().sub(&a))], &[kq.one().sub(&a)])
                .unwrap());
        let expect = SymbolValue::Form(
            exterior_d(&a)
                .unwrap()
                .scale(&cc.mul(&kq.from_i64(2).mul(&a).sub(&kq.one()))),
        );
        assert_eq!(lhs, expect);
    }
    c.pass();
}

/// Random rational 1-form with a denominator assembled from certified
/// irreducible places of degree up to four.
fn residue_instance(
    k: &Fld,
    rng: &mut wittlab::sample::ChaCha8Rng,
) -> Option<(wittlab::differential::DifferentialForm, Vec<Place>, RatT)> {
    use rand::Rng;
    use wittlab::factor::certify_irreducible;
    use wittlab::field::IrredStatus;
    let mut den = UniPoly::one(k.clone());
    let mut places = vec![Place::Infinity];
    let factors = rng.gen_range(1..=2usize);
    for _ in 0..factors {
        let d = rng.gen_range(1..=4usize);
        let mut found = false;
        for _ in 0..20 {
            let cand = random_unipoly(k, rng, d, true);
            let _ = &cand;
            if cand.derivative().is_zero() {
                continue;
            }
            if d > 1 && certify_irreducible(&cand) != IrredStatus::Verified {
                continue;
            }
            if den.multiplicity_of(&cand) > 0 {
                continue;
            }
            den = den.mul(&cand.pow(rng.gen_range(1..=2usize)));
            places.push(Place::finite(cand));
            found = true;
            break;
        }
        if !found {
            return None;
        }
    }
    let num_deg = rng.gen_range(0..=4usize);
    let num = random_unipoly(k, rng, num_deg, false);
    if num.is_zero() {
        return None;
    }
    let g = RatT::new(num, den);
    let mut vars: Vec<&str> = k.ground().vars.iter().map(|v| v.as_str()).collect();
    vars.push("t");
    let big = Fld::Fun(wittlab::field::FunctionField::new(k.base(), &vars));
    let g_big = join_rat(&big, "t", &g);
    let t = big.var("t").unwrap();
    let omega = exterior_d(&t).ok()?.scale(&g_big);
    Some((omega, places, g))
}

#[test]
fn criterion_4_residue_calculus() {
    let c = Criterion("criterion 4: residue totality and the simple-pole trace oracle");

    // residues over all places sum to zero: 200 forms per field
    for spec in ["Q", "Fp(5)(u)"] {
        let k = parse_field(spec).unwrap();
        let mut done = 0;
        let mut i = 0u64;
        while done < 200 {
            let mut rng = rng_for(SEED, "acc4-total", i);
            i += 1;
            assert!(i < 4000, "instance generator stalled");
            if let Some((omega, places, _)) = residue_instance(&k, &mut rng) {
                let total = residue_sum(&k, &omega, "t", &places, SEED).unwrap();
                assert!(total.is_zero(), "{spec} instance {i}");
                done += 1;
            }
        }
    }

    // agreement with the independent derivative-trace formula at simple poles
    for spec in ["Q", "Fp(5)(u)"] {
        let k = parse_field(spec).unwrap();
        let mut done = 0;
        let mut i = 0u64;
        while done < 200 {
            let mut rng = rng_for(SEED, "acc4-oracle", i);
            i += 1;
            assert!(i < 4000, "oracle generator stalled");
            let Some((omega, places, g)) = residue_instance(&k, &mut rng) else {
                continue;
            };
            // pick a simple finite pole if the draw has one
            let Some(place) = places.iter().find(|p| match p {
                Place::Finite(pi) => g.den.multiplicity_of(pi) == 1,
                Place::Infinity => false,
            }) else {
                continue;
            };
            let via_form = residue(&k, &omega, "t", place, SEED).unwrap();
            let via_trace = simple_pole_residue_oracle(&k, &g, place, SEED).unwrap();
            assert_eq!(via_form.coeff(&[]), via_trace, "{spec} oracle {i}");
            done += 1;
        }
    }
    c.pass();
}

#[test]
fn criterion_5_weil_reciprocity() {
    let c = Criterion("criterion 5: reciprocity sums vanish on valid data; pinned violations do not");

    for spec in ["Fp(5)(u)", "Fp(7)(u)", "Q(u)"] {
        let k = parse_field(spec).unwrap();

        // 100 data for the one-additive-one-unit shape
        let phi = make_extended_differential_symbol(1);
        let data = generate_valid_data(&k, 1, 1, 100, SEED);
        assert_eq!(data.len(), 100);
        for (j, d) in data.iter().enumerate() {
            assert!(weil_validate(d).valid, "{spec} datum {j}");
            let res = check_reciprocity(d, &phi, SEED).unwrap();
            assert!(res.definitional.is_zero(), "{spec} datum {j} definitional");
            assert!(res.residue_route.restricted.is_zero(), "{spec} datum {j} residue");
            assert!(res.residue_route.full.is_zero(), "{spec} datum {j} full");
            assert_eq!(res.definitional, res.residue_route.restricted);
            // regularity along the modulus whenever the inequalities hold
            assert!(modulus_regularity(d, &phi, SEED).unwrap(), "{spec} datum {j} regularity");
        }

        // per-place agreement of the two routes on a subsample
        for d in data.iter().take(10) {
            let res = check_reciprocity(d, &phi, SEED).unwrap();
            for entry in &res.definitional_ledger {
                let matching = res
                    .residue_route
                    .ledger
                    .iter()
                    .find(|e| e.place == entry.place);
                match matching {
                    Some(m) => assert_eq!(m.term, entry.term, "{spec} place {}", entry.place),
                    None => assert!(entry.term.is_zero()),
                }
            }
        }

        // 20 data for the two-additive shape
        let iphi = make_infinitesimal_symbol();
        let idata = generate_valid_data(&k, 2, 0, 20, SEED ^ 1);
        for (j, d) in idata.iter().enumerate() {
            let res = check_reciprocity(d, &iphi, SEED).unwrap();
            assert!(res.definitional.is_zero(), "{spec} inf datum {j}");
            assert!(res.residue_route.full.is_zero());
            assert!(modulus_regularity(d, &iphi, SEED).unwrap());
        }

        // violation sensitivity: each class of damage invalidates a datum
        let ga_bad = data
            .iter()
            .find_map(|d| damage_datum(d, ViolationClass::GaModulusTooSmall))
            .expect("a datum with a nontrivial additive modulus");
        assert!(!weil_validate(&ga_bad).valid);
        let gm_bad = data
            .iter()
            .find_map(|d| damage_datum(d, ViolationClass::GmModulusTooSmall))
            .expect("a datum with a unit section");
        assert!(!weil_validate(&gm_bad).valid);
        let cong_bad = data
            .iter()
            .find_map(|d| damage_datum(d, ViolationClass::CongruenceTooWeak));
        if let Some(bad) = cong_bad {
            assert!(!weil_validate(&bad).valid);
        }
    }

    // pinned invalid data with hand-computed nonzero sums over Q(u)
    let k = parse_field("Q(u)").unwrap();
    let u = k.var("u").unwrap();
    let lin = |c: i64| UniPoly::new(k.clone(), vec![k.from_i64(-c), k.one()]);
    let phi = make_extended_differential_symbol(1);
    use wittlab::picard::Divisor;
    use wittlab::weil::{FactoredRat, SlotKind, WeilDatum, WeilSection};

    // additive modulus too small: a = t with modulus [inf], f = (t-1)/(t-2);
    // the weighted trace sum is -dlog(u)
    let ga_bad = WeilDatum {
        constant_field: k.clone(),
        coord: "t".into(),
        sections: vec![
            WeilSection {
                kind: SlotKind::Ga,
                value: FactoredRat::new(k.one(), vec![(UniPoly::var(k.clone()), 1)]).unwrap(),
                modulus: Divisor::single(Place::Infinity, 1),
            },
            WeilSection {
                kind: SlotKind::Gm,
                value: FactoredRat::constant(u.clone()).unwrap(),
                modulus: Divisor::zero(),
            },
        ],
        f: FactoredRat::new(k.one(), vec![(lin(1), 1), (lin(2), -1)]).unwrap(),
    };
    assert!(!weil_validate(&ga_bad).valid);
    let (sum, _) = weil_sum_definitional(&ga_bad, &phi, SEED).unwrap();
    assert_eq!(sum, SymbolValue::Form(dlog(&u).unwrap().neg()));

    // unit divisor not covered: b = t with zero modulus, f = (t-u)/(t-u-1);
    // the sum is du/(u+1)
    let t_poly = UniPoly::var(k.clone());
    let t_minus_u = UniPoly::new(k.clone(), vec![u.neg(), k.one()]);
    let t_minus_u1 = UniPoly::new(k.clone(), vec![u.add(&k.one()).neg(), k.one()]);
    let gm_bad = WeilDatum {
        constant_field: k.clone(),
        coord: "t".into(),
        sections: vec![
            WeilSection {
                kind: SlotKind::Ga,
                value: FactoredRat::constant(u.clone()).unwrap(),
                modulus: Divisor::zero(),
            },
            WeilSection {
                kind: SlotKind::Gm,
                value: FactoredRat::new(k.one(), vec![(t_poly, 1)]).unwrap(),
                modulus: Divisor::zero(),
            },
        ],
        f: FactoredRat::new(k.one(), vec![(t_minus_u, 1), (t_minus_u1, -1)]).unwrap(),
    };
    assert!(!weil_validate(&gm_bad).valid);
    let (sum, _) = weil_sum_definitional(&gm_bad, &phi, SEED).unwrap();
    let expect = dlog(&u)
        .unwrap()
        .scale(&u)
        .sub(&dlog(&u.add(&k.one())).unwrap().scale(&u));
    assert_eq!(sum, SymbolValue::Form(expect));
    assert!(!sum.is_zero());

    // congruence too weak: a = t + u with modulus 2[inf] but f only touches
    // 1 to first order at infinity; the sum is -dlog(u)
    let a_poly = UniPoly::new(k.clone(), vec![u.clone(), k.one()]);
    let cong_bad = WeilDatum {
        constant_field: k.clone(),
        coord: "t".into(),
        sections: vec![
            WeilSection {
                kind: SlotKind::Ga,
                value: FactoredRat::new(k.one(), vec![(a_poly, 1)]).unwrap(),
                modulus: Divisor::single(Place::Infinity, 2),
            },
            WeilSection {
                kind: SlotKind::Gm,
                value: FactoredRat::constant(u.clone()).unwrap(),
                modulus: Divisor::zero(),
            },
        ],
        f: FactoredRat::new(k.one(), vec![(lin(1), 1), (lin(2), -1)]).unwrap(),
    };
    assert!(!weil_validate(&cong_bad).valid);
    let (sum, _) = weil_sum_definitional(&cong_bad, &phi, SEED).unwrap();
    assert_eq!(sum, SymbolValue::Form(dlog(&u).unwrap().neg()));

    c.pass();
}

#[test]
fn criterion_6_diagonal_descent() {
    let c = Criterion("criterion 6: the diagonal construction descends to the exterior derivative");

    for spec in ["Q(u,t)", "Fp(5)(u,t)"] {
        let k = parse_field(spec).unwrap();
        let phi = make_extended_differential_symbol(1);
        let phi_b = derive_phi_b(&phi).unwrap();
        // value and base point
        assert!(phi_b.eval(&k, &[], &k.one(), &[]).unwrap().is_zero());
        for i in 0..1000u64 {
            let mut rng = rng_for(SEED, "acc6", i);
            let b = random_nonzero(&k, &mut rng, true);
            let bp = random_avoiding(&k, &mut rng, &[b.neg()], true);
            let vb = phi_b.eval(&k, &[], &b, &[]).unwrap();
            assert_eq!(vb, SymbolValue::Form(exterior_d(&b).unwrap()));
            if bp.is_zero() {
                continue;
            }
            // additivity through the descended map
            let sum = b.add(&bp);
            if sum.is_zero() {
                continue;
            }
            let vsum = phi_b.eval(&k, &[], &sum, &[]).unwrap();
            let vbp = phi_b.eval(&k, &[], &bp, &[]).unwrap();
            assert_eq!(vsum, vb.add(&vbp));
        }
        // opposite pair: the images cancel
        let alpha = k.var("u").unwrap();
        let v1 = phi_b.eval(&k, &[], &alpha, &[]).unwrap();
        let v2 = phi_b.eval(&k, &[], &alpha.neg(), &[]).unwrap();
        assert!(v1.add(&v2).is_zero());
    }
    c.pass();
}

#[test]
fn criterion_7_homotopy_families() {
    let c = Criterion("criterion 7: polygon verdicts certify the pinned families and the random corpus");

    let k = parse_field("Fp(5)").unwrap();
    let s_poly = |coeffs: &[i64]| {
        UniPoly::new(k.clone(), coeffs.iter().map(|&x| k.from_i64(x)).collect())
    };

    // T^(n+1) - S: admissible with equal boundaries for n in {1,2,3}
    for n in 1..=3usize {
        let mut coeffs = vec![s_poly(&[0, -1])];
        for _ in 0..n {
            coeffs.push(s_poly(&[0]));
        }
        coeffs.push(s_poly(&[1]));
        let h = HomotopyDatum::new(k.clone(), coeffs, HomotopyTarget::WnPlus(n)).unwrap();
        assert_eq!(admissibility_newton(&h).verdict, Verdict::Admissible);
        assert!(cube_boundary_compare(&h).unwrap().equal());
    }

    // T - S: inadmissible with unequal boundaries for n >= 1
    for n in 1..=3usize {
        let h = HomotopyDatum::new(
            k.clone(),
            vec![s_poly(&[0, -1]), s_poly(&[1])],
            HomotopyTarget::WnPlus(n),
        )
        .unwrap();
        assert_eq!(admissibility_newton(&h).verdict, Verdict::Inadmissible);
        assert!(!cube_boundary_compare(&h).unwrap().equal());
    }

    // T^2 - S T - 1: admissible with equal unit boundaries
    let h = HomotopyDatum::new(
        k.clone(),
        vec![s_poly(&[-1]), s_poly(&[0, -1]), s_poly(&[1])],
        HomotopyTarget::GmPlus,
    )
    .unwrap();
    assert_eq!(admissibility_newton(&h).verdict, Verdict::Admissible);
    assert!(cube_boundary_compare(&h).unwrap().equal());

    // random corpus: admissible verdicts never contradict the boundaries
    let mut corpus = 0;
    let mut admissible = 0;
    let mut i = 0u64;
    while corpus < 500 {
        let mut rng = rng_for(SEED, "acc7", i);
        i += 1;
        use rand::Rng;
        let dt = rng.gen_range(1..=4usize);
        let mut coeffs: Vec<UniPoly> = Vec::with_capacity(dt + 1);
        for _ in 0..dt {
            let ds = rng.gen_range(0..=3usize);
            coeffs.push(random_unipoly(&k, &mut rng, ds, false));
        }
        coeffs.push(s_poly(&[1]));
        let target = match rng.gen_range(0..3) {
            0 => HomotopyTarget::WnPlus(rng.gen_range(1..=3)),
            1 => HomotopyTarget::GmPlus,
            _ => HomotopyTarget::DnPlus(rng.gen_range(1..=3)),
        };
        let Ok(h) = HomotopyDatum::new(k.clone(), coeffs, target) else {
            continue;
        };
        corpus += 1;
        let v = admissibility_newton(&h);
        if v.verdict == Verdict::Admissible {
            admissible += 1;
            let b = cube_boundary_compare(&h).unwrap();
            assert!(b.equal(), "admissible family with unequal boundaries: {b}");
        }
    }
    assert!(admissible > 0, "corpus produced no admissible families");
    c.pass();
}

#[test]
fn criterion_8_milnor_oracle() {
    let c = Criterion("criterion 8: the brute-force K-groups of small finite fields");

    use num_bigint::BigInt;
    for q in [3u64, 4, 5, 7, 8, 9] {
        let g1 = milnor_group(q, 1).unwrap();
        assert_eq!(g1.order(), Some(BigInt::from(q - 1)), "degree 1 at q = {q}");
        let g2 = milnor_group(q, 2).unwrap();
        assert!(g2.is_trivial(), "degree 2 at q = {q}: {:?}", g2.invariant_factors);

        // relator classes land on zero
        let k = finite_field(q).unwrap();
        let units: Vec<FieldElement> = k
            .enumerate_elements()
            .unwrap()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect();
        for a in &units {
            if !a.is_one() {
                let b = k.one().sub(a);
                let cls = milnor_class(q, 2, &g2, &[a.clone(), b]).unwrap();
                assert!(cls.iter().all(|x| x == &BigInt::from(0)));
            }
            for b in &units {
                let c1 = milnor_class(q, 1, &g1, &[a.clone()]).unwrap();
                let c2 = milnor_class(q, 1, &g1, &[b.clone()]).unwrap();
                let cs = milnor_class(q, 1, &g1, &[a.mul(b)]).unwrap();
                for ((x, y), z) in c1.iter().zip(&c2).zip(&cs) {
                    let d = &g1.invariant_factors[0];
                    if d > &BigInt::from(0) {
                        assert_eq!(((x + y) % d + d) % d, ((z % d) + d) % d);
                    }
                }
            }
        }
    }
    c.pass();
}

#[test]
fn criterion_9_deterministic_reports() {
    let c = Criterion("criterion 9: equal configurations produce byte-identical reports");

    let exe = env!("CARGO_BIN_EXE_wittlab");
    let run = || {
        std::process::Command::new(exe)
            .args([
                "verify-all",
                "--seed",
                "42",
                "--field",
                "Fp(5)",
                "--samples",
                "40",
                "--out",
                "json",
            ])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    assert!(a.status.success(), "verify-all failed: {}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout, "reports differ between runs");
    assert!(!a.stdout.is_empty());
    c.pass();
}
