//! Interval-invariance testing for divisor families F(S, T): a Newton-polygon
//! admissibility verdict for the branches over S = infinity, and comparison
//! of the divisor classes at the two endpoints S = 0 and S = 1.
//!
//! The polynomial is monic in T, so poles of T along the family only occur
//! over S = infinity; the polygon of F with respect to 1/S bounds the branch
//! valuations there. When a slope's reduced denominator equals the full
//! horizontal length of its segment the branch data is exact (one totally
//! ramified place); the verdict is only issued from exact segments and is
//! `Unknown` otherwise.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fld, FieldElement};
use crate::picard::{picard_to_dwitt, picard_to_gm, picard_to_witt};
use crate::unipoly::UniPoly;
use crate::witt::{DoubleWitt, WittVector};

/// Targets of a homotopy: truncated Witt vectors, units, or the doubled group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HomotopyTarget {
    WnPlus(usize),
    GmPlus,
    DnPlus(usize),
}

impl HomotopyTarget {
    pub fn parse(s: &str) -> Option<HomotopyTarget> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("gm+") || s.eq_ignore_ascii_case("gm") {
            return Some(HomotopyTarget::GmPlus);
        }
        let (kind, rest) = s.split_at(1);
        let rest = rest.trim_end_matches('+');
        let n: usize = rest.parse().ok()?;
        match kind {
            "W" | "w" => Some(HomotopyTarget::WnPlus(n)),
            "D" | "d" => Some(HomotopyTarget::DnPlus(n)),
            _ => None,
        }
    }
}

/// A bivariate family: coefficient of T^j is a polynomial in S over K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyDatum {
    pub field: Fld,
    /// `coeffs[j]` is the S-polynomial multiplying T^j; the top entry is the
    /// constant 1 (monic in T).
    pub coeffs: Vec<UniPoly>,
    pub target: HomotopyTarget,
}

impl HomotopyDatum {
    pub fn new(field: Fld, coeffs: Vec<UniPoly>, target: HomotopyTarget) -> Result<HomotopyDatum> {
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::Invalid("the family must have positive T-degree".into()));
        }
        let lead = coeffs.last().unwrap();
        if lead.degree() != Some(0) || !lead.coeff(0).is_one() {
            return Err(Error::NotMonic);
        }
        let datum = HomotopyDatum {
            field,
            coeffs,
            target,
        };
        if matches!(
            datum.target,
            HomotopyTarget::GmPlus | HomotopyTarget::DnPlus(_)
        ) {
            // the zero section must be avoided fiberwise
            let c0 = &datum.coeffs[0];
            if c0.is_zero() || c0.degree() != Some(0) {
                return Err(Error::BoundaryContact);
            }
        }
        Ok(datum)
    }

    pub fn t_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The fiber polynomial F(s0, T).
    pub fn at_s(&self, s0: &FieldElement) -> UniPoly {
        let coeffs: Vec<FieldElement> = self.coeffs.iter().map(|c| c.eval(s0)).collect();
        UniPoly::new(self.field.clone(), coeffs)
    }
}

/// One Newton polygon segment: slope p/q in lowest terms and the branch data
/// derived from it.
#[derive(Clone, Debug, Serialize)]
pub struct SegmentReport {
    /// Valuation of T on the segment's branches, as a reduced fraction
    /// (numerator, denominator); negative means T grows at infinity.
    pub slope_num: i64,
    pub slope_den: i64,
    /// Horizontal length = number of roots counted by the segment.
    pub length: usize,
    /// Whether the segment consists of a single totally ramified branch.
    pub exact: bool,
    /// For exact segments, the branch valuations (v(S), v(T)).
    pub branch: Option<(i64, i64)>,
    /// The modulus inequality max(-v(S), 0) >= multiplier * pullback, when
    /// decidable from this segment.
    pub satisfied: Option<bool>,
}

/// Verdict of the polygon check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Admissible,
    Inadmissible,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityVerdict {
    pub verdict: Verdict,
    pub segments: Vec<SegmentReport>,
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Newton polygon of the family with respect to 1/S, evaluated against the
/// target's modulus inequality.
pub fn admissibility_newton(h: &HomotopyDatum) -> AdmissibilityVerdict {
    // point (j, v(c_j)) with v = -deg_S for nonzero coefficients
    let pts: Vec<(i64, i64)> = h
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j as i64, -(c.degree().unwrap() as i64)))
        .collect();
    // lower convex hull from left to right
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b when it lies on or above the segment a-p
            if (b.1 - a.1) * (p.0 - a.0) >= (p.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let mut segments = Vec::new();
    let mut verdict = Verdict::Admissible;
    for w in hull.windows(2) {
        let (j0, v0) = w[0];
        let (j1, v1) = w[1];
        let length = (j1 - j0) as usize;
        // roots of this segment have v(T) = (v0 - v1)/(j1 - j0)
        let num = v0 - v1;
        let den = j1 - j0;
        let g = gcd_i64(num, den);
        let (p, q) = (num / g, den / g);

        // relevance: T poles always matter; T zeros matter for the targets
        // whose modulus touches the zero section
        let relevant = if p < 0 {
            true
        } else if p > 0 {
            matches!(h.target, HomotopyTarget::GmPlus | HomotopyTarget::DnPlus(_))
        } else {
            false
        };

        if !relevant {
            segments.push(SegmentReport {
                slope_num: p,
                slope_den: q,
                length,
                exact: true,
                branch: None,
                satisfied: Some(true),
            });
            continue;
        }

        let exact = q == length as i64;
        if !exact {
            segments.push(SegmentReport {
                slope_num: p,
                slope_den: q,
                length,
                exact: false,
                branch: None,
                satisfied: None,
            });
            if verdict == Verdict::Admissible {
                verdict = Verdict::Unknown;
            }
            continue;
        }
        let v_s = -q;
        let v_t = p;
        let lhs = q; // max(-v(S), 0)
        let rhs = match h.target {
            HomotopyTarget::WnPlus(n) => (n as i64 + 1) * (-v_t).max(0),
            HomotopyTarget::GmPlus => v_t.abs(),
            HomotopyTarget::DnPlus(n) => (n as i64 + 1) * v_t.abs(),
        };
        let ok = lhs >= rhs;
        segments.push(SegmentReport {
            slope_num: p,
            slope_den: q,
            length,
            exact: true,
            branch: Some((v_s, v_t)),
            satisfied: Some(ok),
        });
        if !ok {
            verdict = Verdict::Inadmissible;
        }
    }
    AdmissibilityVerdict { verdict, segments }
}

/// The two endpoint images in the target group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryImages {
    Witt(WittVector, WittVector),
    Gm(FieldElement, FieldElement),
    DWitt(DoubleWitt, DoubleWitt),
}

impl BoundaryImages {
    pub fn equal(&self) -> bool {
        match self {
            BoundaryImages::Witt(a, b) => a == b,
            BoundaryImages::Gm(a, b) => a == b,
            BoundaryImages::DWitt(a, b) => a == b,
        }
    }
}

impl fmt::Display for BoundaryImages {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryImages::Witt(a, b) => write!(f, "{a}  vs  {b}"),
            BoundaryImages::Gm(a, b) => write!(f, "{a}  vs  {b}"),
            BoundaryImages::DWitt(a, b) => {
                write!(f, "({}, {}, {}, {})  vs  ({}, {}, {}, {})",
                    a.w_minus, a.w_plus, a.deg, a.unit,
                    b.w_minus, b.w_plus, b.deg, b.unit)
            }
        }
    }
}

/// Maps the divisors of the two endpoint fibers through the class map of the
/// target and compares them.
pub fn cube_boundary_compare(h: &HomotopyDatum) -> Result<BoundaryImages> {
    let zero = h.field.zero();
    let one = h.field.one();
    let f0 = h.at_s(&zero);
    let f1 = h.at_s(&one);
    if f0.is_zero() || f1.is_zero() {
        return Err(Error::ZeroArgument);
    }
    match h.target {
        HomotopyTarget::WnPlus(n) => {
            let a = picard_to_witt(&f0, n)?;
            let b = picard_to_witt(&f1, n)?;
            Ok(BoundaryImages::Witt(a, b))
        }
        HomotopyTarget::GmPlus => {
            let a = picard_to_gm(&f0)?;
            let b = picard_to_gm(&f1)?;
            Ok(BoundaryImages::Gm(a, b))
        }
        HomotopyTarget::DnPlus(n) => {
            let a = picard_to_dwitt(&f0, n)?;
            let b = picard_to_dwitt(&f1, n)?;
            Ok(BoundaryImages::DWitt(a, b))
        }
    }
}
