//! Truncated big Witt vectors and their doubled variant.
//!
//! W_n(A) is the group 1 + T*A[T]/(T^(n+1)) under multiplication of truncated
//! power series. Every element factors uniquely as a product of terms
//! (1 - a_i T^i), which gives the coordinate bijection with A^n. The doubled
//! group D_n(A) = W_n(A) x W_n(A) x Z x A^* carries the componentwise law.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fld, FieldElement};

/// A polynomial truncated at T^(n+1): coefficients c_0..c_n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncatedPoly {
    pub ring: Fld,
    pub n: usize,
    pub coeffs: Vec<FieldElement>,
}

impl TruncatedPoly {
    pub fn new(ring: Fld, n: usize, mut coeffs: Vec<FieldElement>) -> TruncatedPoly {
        coeffs.truncate(n + 1);
        while coeffs.len() < n + 1 {
            coeffs.push(ring.zero());
        }
        TruncatedPoly { ring, n, coeffs }
    }

    pub fn one(ring: Fld, n: usize) -> TruncatedPoly {
        let mut coeffs = vec![ring.zero(); n + 1];
        coeffs[0] = ring.one();
        TruncatedPoly { ring, n, coeffs }
    }

    pub fn mul(&self, rhs: &TruncatedPoly) -> TruncatedPoly {
        assert_eq!(self.n, rhs.n, "truncation lengths differ");
        let mut out = vec![self.ring.zero(); self.n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > self.n {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TruncatedPoly {
            ring: self.ring.clone(),
            n: self.n,
            coeffs: out,
        }
    }

    /// Multiplicative inverse of a series with unit constant term.
    pub fn inv(&self) -> Result<TruncatedPoly> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let c0_inv = c0.inv()?;
        let mut out = vec![self.ring.zero(); self.n + 1];
        out[0] = c0_inv.clone();
        for k in 1..=self.n {
            let mut s = self.ring.zero();
            for j in 1..=k {
                s = s.add(&self.coeffs[j].mul(&out[k - j]));
            }
            out[k] = s.neg().mul(&c0_inv);
        }
        Ok(TruncatedPoly {
            ring: self.ring.clone(),
            n: self.n,
            coeffs: out,
        })
    }
}

/// An element of W_n: a truncated series with constant term 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WittVector(pub TruncatedPoly);

/// Coordinates (a_1, ..., a_n) with respect to the product expansion
/// prod (1 - a_i T^i).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WittCoords {
    pub ring: Fld,
    pub values: Vec<FieldElement>,
}

impl WittVector {
    pub fn from_series(series: TruncatedPoly) -> Result<WittVector> {
        if !series.coeffs[0].is_one() {
            return Err(Error::Invalid("constant term must be 1".into()));
        }
        Ok(WittVector(series))
    }

    pub fn identity(ring: Fld, n: usize) -> WittVector {
        WittVector(TruncatedPoly::one(ring, n))
    }

    pub fn ring(&self) -> &Fld {
        &self.0.ring
    }

    pub fn len(&self) -> usize {
        self.0.n
    }

    pub fn is_identity(&self) -> bool {
        self == &WittVector::identity(self.0.ring.clone(), self.0.n)
    }
}

/// Group law of W_n: multiplication of the underlying truncated series.
pub fn witt_add(x: &WittVector, y: &WittVector) -> Result<WittVector> {
    if x.0.n != y.0.n || x.0.ring != y.0.ring {
        return Err(Error::LengthMismatch);
    }
    Ok(WittVector(x.0.mul(&y.0)))
}

/// Inverse in W_n: the truncated inverse series.
pub fn witt_neg(x: &WittVector) -> WittVector {
    WittVector(x.0.inv().expect("constant term 1 is a unit"))
}

/// m-fold sum by binary addition chains; negative m through the inverse.
pub fn witt_scalar(m: i64, x: &WittVector) -> WittVector {
    let base = if m < 0 { witt_neg(x) } else { x.clone() };
    let mut e = m.unsigned_abs();
    let mut acc = WittVector::identity(x.0.ring.clone(), x.0.n);
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = witt_add(&acc, &b).unwrap();
        }
        b = witt_add(&b, &b).unwrap();
        e >>= 1;
    }
    acc
}

/// Extracts the unique coordinates a_i with x = prod (1 - a_i T^i),
/// greedily from i = 1 upward.
pub fn witt_decompose(x: &WittVector) -> WittCoords {
    let n = x.0.n;
    let ring = x.0.ring.clone();
    let mut cur = x.0.clone();
    let mut values = Vec::with_capacity(n);
    for i in 1..=n {
        let ai = cur.coeffs[i].neg();
        values.push(ai.clone());
        if !ai.is_zero() {
            // divide by (1 - a_i T^i), i.e. multiply by sum a_i^k T^(ik)
            let mut factor = vec![ring.zero(); n + 1];
            let mut pow = ring.one();
            let mut k = 0;
            while i * k <= n {
                factor[i * k] = pow.clone();
                pow = pow.mul(&ai);
                k += 1;
            }
            cur = cur.mul(&TruncatedPoly {
                ring: ring.clone(),
                n,
                coeffs: factor,
            });
        }
        debug_assert!(cur.coeffs[i].is_zero());
    }
    WittCoords { ring, values }
}

/// Rebuilds the series prod (1 - a_i T^i) from coordinates.
pub fn witt_compose(c: &WittCoords) -> WittVector {
    let n = c.values.len();
    let mut acc = TruncatedPoly::one(c.ring.clone(), n);
    for (idx, a) in c.values.iter().enumerate() {
        let i = idx + 1;
        if a.is_zero() {
            continue;
        }
        let mut f = vec![c.ring.zero(); n + 1];
        f[0] = c.ring.one();
        if i <= n {
            f[i] = a.neg();
        }
        acc = acc.mul(&TruncatedPoly {
            ring: c.ring.clone(),
            n,
            coeffs: f,
        });
    }
    WittVector(acc)
}

/// The Teichmueller representative [a] = 1 - aT.
pub fn teichmuller(a: &FieldElement, n: usize) -> WittVector {
    let ring = a.parent.clone();
    let mut coeffs = vec![ring.zero(); n + 1];
    coeffs[0] = ring.one();
    if n >= 1 {
        coeffs[1] = a.neg();
    }
    WittVector(TruncatedPoly { ring, n, coeffs })
}

/// An element of D_n = W_n x W_n x Z x A^*.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoubleWitt {
    pub w_minus: WittVector,
    pub w_plus: WittVector,
    pub deg: i64,
    pub unit: FieldElement,
}

impl DoubleWitt {
    pub fn identity(ring: Fld, n: usize) -> DoubleWitt {
        DoubleWitt {
            w_minus: WittVector::identity(ring.clone(), n),
            w_plus: WittVector::identity(ring.clone(), n),
            deg: 0,
            unit: ring.one(),
        }
    }

    pub fn add(&self, rhs: &DoubleWitt) -> Result<DoubleWitt> {
        Ok(DoubleWitt {
            w_minus: witt_add(&self.w_minus, &rhs.w_minus)?,
            w_plus: witt_add(&self.w_plus, &rhs.w_plus)?,
            deg: self.deg + rhs.deg,
            unit: self.unit.mul(&rhs.unit),
        })
    }

    pub fn neg(&self) -> DoubleWitt {
        DoubleWitt {
            w_minus: witt_neg(&self.w_minus),
            w_plus: witt_neg(&self.w_plus),
            deg: -self.deg,
            unit: self.unit.inv().expect("unit component"),
        }
    }
}

/// The double Teichmueller representative [[a]] = (1 - a^{-1}T, 1 - aT, 1, a).
pub fn double_teichmuller(a: &FieldElement, n: usize) -> Result<DoubleWitt> {
    if a.is_zero() {
        return Err(Error::NotAUnit);
    }
    Ok(DoubleWitt {
        w_minus: teichmuller(&a.inv()?, n),
        w_plus: teichmuller(a, n),
        deg: 1,
        unit: a.clone(),
    })
}

/// Second projection of the doubled group.
pub fn dwitt_project_w(x: &DoubleWitt) -> WittVector {
    x.w_plus.clone()
}

/// Fourth projection of the doubled group.
pub fn dwitt_project_gm(x: &DoubleWitt) -> FieldElement {
    x.unit.clone()
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.0.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{c}");
            let body = match i {
                0 => cs,
                1 if cs == "1" => "T".to_string(),
                1 => format!("{cs}*T"),
                _ if cs == "1" => format!("T^{i}"),
                _ => format!("{cs}*T^{i}"),
            };
            parts.push(body);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for WittCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.values.iter().map(|v| format!("{v}")).collect();
        write!(f, "({})", inner.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FunctionField;
    use crate::scalar::BaseField;

    fn f7() -> Fld {
        Fld::Fun(FunctionField::new(BaseField::prime(7).unwrap(), &[]))
    }

    fn coords(ring: &Fld, vals: &[i64]) -> WittCoords {
        WittCoords {
            ring: ring.clone(),
            values: vals.iter().map(|&v| ring.from_i64(v)).collect(),
        }
    }

    #[test]
    fn teichmuller_sum_coords() {
        // [a] + [b] = (a+b, -ab) in W_2
        let k = f7();
        for a in 0..7 {
            for b in 0..7 {
                let x = teichmuller(&k.from_i64(a), 2);
                let y = teichmuller(&k.from_i64(b), 2);
                let s = witt_add(&x, &y).unwrap();
                assert_eq!(witt_decompose(&s), coords(&k, &[a + b, -(a * b)]));
            }
        }
    }

    #[test]
    fn opposite_teichmuellers() {
        // [alpha] + [-alpha] = (0, alpha^2) in W_2
        let k = f7();
        for a in 0..7 {
            let x = teichmuller(&k.from_i64(a), 2);
            let y = teichmuller(&k.from_i64(-a), 2);
            let s = witt_add(&x, &y).unwrap();
            assert_eq!(witt_decompose(&s), coords(&k, &[0, a * a]));
        }
    }

    #[test]
    fn doubling_identity() {
        // 2 (0, a/2) = (0, a) whenever the characteristic is odd
        for p in [3u64, 5, 7] {
            let k = Fld::Fun(FunctionField::new(BaseField::prime(p).unwrap(), &[]));
            for a in 0..p as i64 {
                let half = k.from_i64(a).div(&k.from_i64(2)).unwrap();
                let x = witt_compose(&WittCoords {
                    ring: k.clone(),
                    values: vec![k.zero(), half],
                });
                let doubled = witt_scalar(2, &x);
                assert_eq!(witt_decompose(&doubled), coords(&k, &[0, a]));
            }
        }
    }

    #[test]
    fn neg_is_inverse_series() {
        // -[a] = 1 + aT + a^2 T^2 + ... truncated
        let k = f7();
        let a = k.from_i64(3);
        let neg = witt_neg(&teichmuller(&a, 4));
        let mut pow = k.one();
        for i in 0..=4 {
            assert_eq!(neg.0.coeffs[i], pow);
            pow = pow.mul(&a);
        }
        let x = teichmuller(&a, 4);
        assert!(witt_add(&x, &witt_neg(&x)).unwrap().is_identity());
    }

    #[test]
    fn compose_decompose_roundtrip() {
        let k = f7();
        let c = coords(&k, &[3, 0, 5, 1]);
        let w = witt_compose(&c);
        assert_eq!(witt_decompose(&w), c);
        // 1 - aT has coordinates (a, 0, ..., 0)
        let t = teichmuller(&k.from_i64(4), 3);
        assert_eq!(witt_decompose(&t), coords(&k, &[4, 0, 0]));
        // identity decomposes to zeros
        let id = WittVector::identity(k.clone(), 3);
        assert_eq!(witt_decompose(&id), coords(&k, &[0, 0, 0]));
    }

    #[test]
    fn length_zero_group_is_trivial() {
        let k = f7();
        let id = WittVector::identity(k.clone(), 0);
        assert_eq!(teichmuller(&k.from_i64(5), 0), id);
        assert!(witt_add(&id, &id).unwrap().is_identity());
    }

    #[test]
    fn double_teichmuller_components() {
        let k = f7();
        let a = k.from_i64(3);
        let d = double_teichmuller(&a, 2).unwrap();
        assert_eq!(d.w_minus, teichmuller(&a.inv().unwrap(), 2));
        assert_eq!(d.w_plus, teichmuller(&a, 2));
        assert_eq!(d.deg, 1);
        assert_eq!(d.unit, a);
        assert_eq!(dwitt_project_w(&d), teichmuller(&a, 2));
        assert_eq!(dwitt_project_gm(&d), a);
        assert!(double_teichmuller(&k.zero(), 2).is_err());
    }
}
