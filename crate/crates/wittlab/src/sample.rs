//! Deterministic seeded sampling of field elements and polynomials.
//!
//! Every checker derives one stream per (master seed, label, index), so runs
//! with equal configuration are bit-identical regardless of evaluation order.

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::field::{Fld, FieldElement};
use crate::scalar::BaseField;
use crate::unipoly::UniPoly;

/// splitmix-style mixing of a master seed, a task label and a sample index.
pub fn mix_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = master ^ h ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(master: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(master, label, index))
}

fn small_int(base: &BaseField, rng: &mut ChaCha8Rng) -> i64 {
    // rationals stay small so that products of samples do not blow up the
    // exact gcd arithmetic downstream
    match base {
        BaseField::Rationals => rng.gen_range(-4..=4),
        BaseField::Prime(p) => rng.gen_range(0..*p as i64),
    }
}

/// A small random element: a sparse polynomial in the field variables,
/// optionally divided by a nonzero sparse polynomial.
pub fn random_element(fld: &Fld, rng: &mut ChaCha8Rng, allow_fraction: bool) -> FieldElement {
    let num = random_poly_elem(fld, rng);
    if allow_fraction && rng.gen_bool(0.4) {
        loop {
            let den = random_poly_elem(fld, rng);
            if !den.is_zero() {
                return num.div(&den).unwrap();
            }
        }
    }
    num
}

fn random_poly_elem(fld: &Fld, rng: &mut ChaCha8Rng) -> FieldElement {
    let ground = fld.ground();
    let base = ground.base;
    let mut acc = fld.from_i64(small_int(&base, rng));
    let terms = rng.gen_range(0..=2);
    for _ in 0..terms {
        let mut term = fld.from_i64(small_int(&base, rng));
        if ground.nvars() > 0 {
            for _ in 0..rng.gen_range(1..=2) {
                let v = rng.gen_range(0..ground.nvars());
                let name = ground.vars[v].clone();
                term = term.mul(&fld.var(&name).unwrap());
            }
        }
        acc = acc.add(&term);
    }
    acc
}

pub fn random_nonzero(fld: &Fld, rng: &mut ChaCha8Rng, allow_fraction: bool) -> FieldElement {
    loop {
        let x = random_element(fld, rng, allow_fraction);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random element avoiding the listed values (used to dodge 0 and 1).
pub fn random_avoiding(
    fld: &Fld,
    rng: &mut ChaCha8Rng,
    avoid: &[FieldElement],
    allow_fraction: bool,
) -> FieldElement {
    loop {
        let x = random_element(fld, rng, allow_fraction);
        if !avoid.contains(&x) {
            return x;
        }
    }
}

/// Random univariate polynomial of exactly the given degree.
pub fn random_unipoly(fld: &Fld, rng: &mut ChaCha8Rng, deg: usize, monic: bool) -> UniPoly {
    let base = fld.ground().base;
    let mut coeffs: Vec<FieldElement> = (0..deg)
        .map(|_| fld.from_i64(small_int(&base, rng)))
        .collect();
    if monic {
        coeffs.push(fld.one());
    } else {
        loop {
            let lead = fld.from_i64(small_int(&base, rng));
            if !lead.is_zero() {
                coeffs.push(lead);
                break;
            }
        }
    }
    UniPoly::new(fld.clone(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FunctionField;

    #[test]
    fn deterministic_streams() {
        let k = Fld::Fun(FunctionField::new(BaseField::prime(5).unwrap(), &["u", "t"]));
        let a: Vec<FieldElement> = (0..5)
            .map(|i| random_element(&k, &mut rng_for(42, "x", i), true))
            .collect();
        let b: Vec<FieldElement> = (0..5)
            .map(|i| random_element(&k, &mut rng_for(42, "x", i), true))
            .collect();
        assert_eq!(a, b);
        let c: Vec<FieldElement> = (0..5)
            .map(|i| random_element(&k, &mut rng_for(43, "x", i), true))
            .collect();
        assert_ne!(a, c);
    }
}
