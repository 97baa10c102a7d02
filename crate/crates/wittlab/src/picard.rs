//! Places and divisors on the projective line over K, and the maps sending
//! divisor classes of truncated polynomials into W_n, the unit group, and the
//! doubled Witt group.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::factor::poly_factor;
use crate::field::FieldElement;
use crate::unipoly::UniPoly;
use crate::witt::{DoubleWitt, TruncatedPoly, WittVector};

/// A closed point of P^1 over K: a monic irreducible polynomial in the fiber
/// coordinate, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(UniPoly),
    Infinity,
}

impl Place {
    pub fn finite(pi: UniPoly) -> Place {
        assert!(pi.is_monic(), "places are monic");
        Place::Finite(pi)
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().unwrap(),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "({})", pi.display_with("t")),
            Place::Infinity => write!(f, "(inf)"),
        }
    }
}

/// A finite formal Z-combination of places.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    pub coeffs: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn single(place: Place, mult: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.insert(place, mult);
        d
    }

    pub fn insert(&mut self, place: Place, mult: i64) {
        if mult == 0 {
            return;
        }
        let entry = self.coeffs.entry(place).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            let key = self
                .coeffs
                .iter()
                .find(|(_, &v)| v == 0)
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.coeffs.remove(&k);
            }
        }
    }

    pub fn add(&self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, m) in &rhs.coeffs {
            out.insert(p.clone(), *m);
        }
        out
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            coeffs: self.coeffs.iter().map(|(p, m)| (p.clone(), -m)).collect(),
        }
    }

    pub fn multiplicity(&self, place: &Place) -> i64 {
        self.coeffs.get(place).copied().unwrap_or(0)
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&m| m >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs
            .iter()
            .map(|(p, m)| m * p.degree() as i64)
            .sum()
    }

    /// Places with nonzero multiplicity.
    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.coeffs.keys()
    }

    /// Componentwise absolute values.
    pub fn abs(&self) -> Divisor {
        Divisor {
            coeffs: self
                .coeffs
                .iter()
                .map(|(p, m)| (p.clone(), m.abs()))
                .collect(),
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, m)| format!("{m}{p}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Divisor of zeros of a nonzero polynomial, with multiplicities; with the
/// flag set, a pole term at infinity makes the total degree zero. Requires a
/// finite coefficient field (use pre-factored data otherwise).
pub fn divisor_of_poly(f: &UniPoly, include_infinity: bool, seed: u64) -> Result<Divisor> {
    if f.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if f.field.order().is_none() {
        return Err(Error::FactorizationUnavailable);
    }
    let fac = poly_factor(f, seed)?;
    let mut d = Divisor::zero();
    for (pi, m) in fac.factors {
        d.insert(Place::finite(pi), m as i64);
    }
    if include_infinity {
        d.insert(Place::Infinity, -(f.degree().unwrap() as i64));
    }
    Ok(d)
}

/// Class of div(a_d T^d + ... + a_0) in W_n: the truncated series
/// sum (a_{d-i}/a_d) T^i. The class is insensitive to unit scaling and to
/// extra factors of T, which is the implicit quotient by the zero section.
pub fn picard_to_witt(f: &UniPoly, n: usize) -> Result<WittVector> {
    let d = f.degree().ok_or(Error::ZeroArgument)?;
    let lead = f.leading().unwrap().clone();
    if lead.is_zero() {
        return Err(Error::LeadingCoefficientZero);
    }
    let lead_inv = lead.inv()?;
    let ring = f.field.clone();
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i <= d {
            coeffs.push(f.coeff(d - i).mul(&lead_inv));
        } else {
            coeffs.push(ring.zero());
        }
    }
    WittVector::from_series(TruncatedPoly::new(ring, n, coeffs))
}

/// Class of div(f) in the unit group: (-1)^d a_0 / a_d. Both endpoints of the
/// line must be avoided.
pub fn picard_to_gm(f: &UniPoly) -> Result<FieldElement> {
    let d = f.degree().ok_or(Error::ZeroArgument)?;
    let a0 = f.coeff(0);
    let ad = f.leading().unwrap().clone();
    if a0.is_zero() || ad.is_zero() {
        return Err(Error::BoundaryContact);
    }
    let sign = if d % 2 == 0 {
        f.field.one()
    } else {
        f.field.from_i64(-1)
    };
    Ok(sign.mul(&a0).mul(&ad.inv()?))
}

/// Class of div(f) in the doubled Witt group: the quadruple of the two
/// truncated expansions, the degree, and the unit class.
pub fn picard_to_dwitt(f: &UniPoly, n: usize) -> Result<DoubleWitt> {
    let d = f.degree().ok_or(Error::ZeroArgument)?;
    let a0 = f.coeff(0);
    let ad = f.leading().unwrap().clone();
    if a0.is_zero() || ad.is_zero() {
        return Err(Error::BoundaryContact);
    }
    let a0_inv = a0.inv()?;
    let ring = f.field.clone();
    let mut minus = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i <= d {
            minus.push(f.coeff(i).mul(&a0_inv));
        } else {
            minus.push(ring.zero());
        }
    }
    Ok(DoubleWitt {
        w_minus: WittVector::from_series(TruncatedPoly::new(ring.clone(), n, minus))?,
        w_plus: picard_to_witt(f, n)?,
        deg: d as i64,
        unit: picard_to_gm(f)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fld, FunctionField};
    use crate::scalar::BaseField;
    use crate::witt::{double_teichmuller, dwitt_project_gm, dwitt_project_w, teichmuller, witt_add};

    fn f5() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::prime(5).unwrap(), &[]))
    }

    fn poly(field: &Fld, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            field.clone(),
            coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    #[test]
    fn divisor_of_quadratic() {
        let k = f5();
        let f = poly(&k, &[1, 0, 1]); // t^2 + 1 = (t-2)(t-3)
        let d = divisor_of_poly(&f, false, 0).unwrap();
        assert_eq!(d.coeffs.len(), 2);
        assert!(d.is_effective());
        assert_eq!(d.degree(), 2);
        let with_inf = divisor_of_poly(&f, true, 0).unwrap();
        assert_eq!(with_inf.degree(), 0);
        assert_eq!(with_inf.multiplicity(&Place::Infinity), -2);
    }

    #[test]
    fn divisor_of_constant_is_empty() {
        let k = f5();
        let c = poly(&k, &[3]);
        assert_eq!(divisor_of_poly(&c, false, 0).unwrap(), Divisor::zero());
    }

    #[test]
    fn linear_maps_to_teichmuller() {
        let k = f5();
        for a in 0..5 {
            let f = poly(&k, &[-a, 1]); // T - a
            let w = picard_to_witt(&f, 3).unwrap();
            assert_eq!(w, teichmuller(&k.from_i64(a), 3));
        }
    }

    #[test]
    fn t_power_maps_to_identity() {
        let k = f5();
        let n = 3;
        let f = poly(&k, &[0, 0, 0, 0, 1]); // T^4 = T^(n+1)
        assert!(picard_to_witt(&f, n).unwrap().is_identity());
    }

    #[test]
    fn product_of_linears_is_witt_sum() {
        let k = f5();
        let (a, b) = (k.from_i64(2), k.from_i64(4));
        let f = poly(&k, &[-2, 1]).mul(&poly(&k, &[-4, 1]));
        let w = picard_to_witt(&f, 2).unwrap();
        let expect = witt_add(&teichmuller(&a, 2), &teichmuller(&b, 2)).unwrap();
        assert_eq!(w, expect);
    }

    #[test]
    fn gm_values() {
        let k = f5();
        // T - a -> a
        assert_eq!(picard_to_gm(&poly(&k, &[-3, 1])).unwrap(), k.from_i64(3));
        // (T-a)(T-b) -> ab
        let f = poly(&k, &[-2, 1]).mul(&poly(&k, &[-4, 1]));
        assert_eq!(picard_to_gm(&f).unwrap(), k.from_i64(8));
        // constants -> 1
        assert_eq!(picard_to_gm(&poly(&k, &[4])).unwrap(), k.one());
        // boundary contact
        assert_eq!(picard_to_gm(&poly(&k, &[0, 1])), Err(Error::BoundaryContact));
    }

    #[test]
    fn gm_kills_unit_class() {
        let k = f5();
        assert_eq!(picard_to_gm(&poly(&k, &[-1, 1])).unwrap(), k.one());
    }

    #[test]
    fn witt_class_ignores_t_factors() {
        let k = f5();
        let g = poly(&k, &[1, 2, 1]);
        let tg = g.mul(&poly(&k, &[0, 1]));
        assert_eq!(
            picard_to_witt(&g, 4).unwrap(),
            picard_to_witt(&tg, 4).unwrap()
        );
    }

    #[test]
    fn dwitt_of_linear_is_double_teichmuller() {
        let k = f5();
        let a = k.from_i64(3);
        let f = poly(&k, &[-3, 1]);
        let d = picard_to_dwitt(&f, 2).unwrap();
        assert_eq!(d, double_teichmuller(&a, 2).unwrap());
    }

    #[test]
    fn dwitt_projections_cohere() {
        let k = f5();
        let f = poly(&k, &[2, 3, 1, 1]);
        let d = picard_to_dwitt(&f, 3).unwrap();
        assert_eq!(dwitt_project_w(&d), picard_to_witt(&f, 3).unwrap());
        assert_eq!(dwitt_project_gm(&d), picard_to_gm(&f).unwrap());
    }
}
