//! Univariate polynomials and rational functions over an arbitrary field
//! handle, used for the fiber coordinate of the projective line.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fld, FieldElement, FunctionField};

/// A dense univariate polynomial; `coeffs[i]` is the coefficient of `X^i`,
/// trailing zeros trimmed (empty = zero polynomial).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniPoly {
    pub field: Fld,
    pub coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: Fld, coeffs: Vec<FieldElement>) -> UniPoly {
        let mut p = UniPoly { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: Fld) -> UniPoly {
        UniPoly {
            field,
            coeffs: vec![],
        }
    }

    pub fn one(field: Fld) -> UniPoly {
        let one = field.one();
        UniPoly {
            field,
            coeffs: vec![one],
        }
    }

    pub fn constant(field: Fld, c: FieldElement) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// The monomial c * X^k.
    pub fn monomial(field: Fld, c: FieldElement, k: usize) -> UniPoly {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        UniPoly::new(field, coeffs)
    }

    pub fn var(field: Fld) -> UniPoly {
        UniPoly::monomial(field.clone(), field.one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        UniPoly::new(self.field.clone(), out)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.field.clone());
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(self.field.clone(), out)
    }

    pub fn mul_elem(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|x| x.mul(c)).collect(),
        )
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::one(self.field.clone());
        let mut base = self.clone();
        let mut exp = e;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn divrem(&self, rhs: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let drhs = rhs.degree().unwrap();
        if rem.degree().map_or(true, |d| d < drhs) {
            return (UniPoly::zero(self.field.clone()), rem);
        }
        let mut quot = vec![self.field.zero(); rem.degree().unwrap() - drhs + 1];
        let lead_inv = rhs.leading().unwrap().inv().expect("nonzero lead");
        while let Some(dr) = rem.degree() {
            if dr < drhs {
                break;
            }
            let k = dr - drhs;
            let c = rem.leading().unwrap().mul(&lead_inv);
            quot[k] = c.clone();
            for (i, bc) in rhs.coeffs.iter().enumerate() {
                let t = c.mul(bc);
                rem.coeffs[k + i] = rem.coeffs[k + i].sub(&t);
            }
            rem.trim();
        }
        (UniPoly::new(self.field.clone(), quot), rem)
    }

    pub fn div_exact(&self, rhs: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(rhs);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn rem(&self, rhs: &UniPoly) -> UniPoly {
        self.divrem(rhs).1
    }

    /// Monic gcd. Over a field with transcendental variables the computation
    /// is routed through the multivariate gcd after clearing denominators,
    /// which keeps coefficient growth under control; plain Euclid would blow
    /// up on K(u)[X].
    pub fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return if rhs.is_zero() {
                rhs.clone()
            } else {
                rhs.monic().0
            };
        }
        if rhs.is_zero() {
            return self.monic().0;
        }
        if let Fld::Fun(fun) = &self.field {
            if fun.nvars() >= 1 {
                return gcd_via_multipoly(self, rhs, fun);
            }
        }
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic().0
    }

    /// Returns (monic, leading coefficient).
    pub fn monic(&self) -> (UniPoly, FieldElement) {
        match self.leading() {
            None => (self.clone(), self.field.one()),
            Some(lc) => {
                let lc = lc.clone();
                let inv = lc.inv().expect("nonzero lead");
                (self.mul_elem(&inv), lc)
            }
        }
    }

    pub fn derivative(&self) -> UniPoly {
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&self.field.from_i64(i as i64)));
        }
        UniPoly::new(self.field.clone(), out)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Evaluates with coefficients mapped into another field first.
    pub fn eval_in(&self, target: &Fld, x: &FieldElement) -> FieldElement {
        let mut acc = target.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&target.embed(c));
        }
        acc
    }

    /// Coefficients of the expansion in powers of (X - c), low to high,
    /// computed by repeated synthetic division (valid in any characteristic).
    pub fn taylor_at(&self, c: &FieldElement) -> Vec<FieldElement> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            // synthetic division by (X - c); the last accumulator value is
            // the remainder, the earlier ones the quotient coefficients
            let mut acc = self.field.zero();
            let mut quo = Vec::with_capacity(work.len());
            for j in (0..work.len()).rev() {
                acc = work[j].add(&acc.mul(c));
                quo.push(acc.clone());
            }
            let rem = quo.pop().unwrap();
            quo.reverse();
            out.push(rem);
            work = quo;
        }
        out
    }

    /// Multiplicity of the monic irreducible `pi` in `self`.
    pub fn multiplicity_of(&self, pi: &UniPoly) -> usize {
        assert!(!self.is_zero(), "zero polynomial");
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(pi);
            if r.is_zero() {
                m += 1;
                cur = q;
            } else {
                return m;
            }
        }
    }

    /// The reversal X^deg * f(1/X); used for expansions at infinity.
    pub fn reverse(&self) -> UniPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        UniPoly::new(self.field.clone(), coeffs)
    }

    /// Squarefree part f / gcd(f, f'); complete only in characteristic zero
    /// or when no factor multiplicity is divisible by the characteristic.
    pub fn squarefree_part(&self) -> UniPoly {
        let d = self.derivative();
        if d.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&d);
        self.div_exact(&g).unwrap()
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{c}");
            let body = match i {
                0 => cs,
                1 if cs == "1" => var.to_string(),
                1 => format!("{}*{var}", wrap(&cs)),
                _ if cs == "1" => format!("{var}^{i}"),
                _ => format!("{}*{var}^{i}", wrap(&cs)),
            };
            parts.push(body);
        }
        parts.join(" + ")
    }
}

/// Clears denominators and computes the gcd inside the polynomial ring with
/// one extra variable for the fiber coordinate.
fn gcd_via_multipoly(a: &UniPoly, b: &UniPoly, fun: &Arc<FunctionField>) -> UniPoly {
    use crate::multipoly::MultiPoly;
    let n = fun.nvars();
    let field = a.field.clone();

    let clear = |p: &UniPoly| -> MultiPoly {
        // common denominator of the coefficients
        let mut common = MultiPoly::one(fun.base, n);
        for c in &p.coeffs {
            let rf = c.as_ratfunc().expect("function-field element");
            if !rf.den.is_constant() {
                let g = common.gcd(&rf.den);
                common = common.mul(&rf.den.div_exact(&g).unwrap());
            }
        }
        // embed into n+1 variables, fiber coordinate last
        let map: Vec<usize> = (0..n).collect();
        let mut out = MultiPoly::zero(fun.base, n + 1);
        for (i, c) in p.coeffs.iter().enumerate() {
            let rf = c.as_ratfunc().unwrap();
            let scaled = rf.num.mul(&common.div_exact(&rf.den).unwrap_or_else(|| {
                // denominator divides common by construction after gcd step;
                // fall back to direct multiplication with the quotient
                panic!("common denominator does not clear")
            }));
            let emb = scaled.embed(n + 1, &map);
            let mut t_pow = MultiPoly::zero(fun.base, n + 1);
            let mut exp = vec![0u16; n + 1];
            exp[n] = i as u16;
            t_pow
                .terms
                .insert(crate::multipoly::Mono(exp), fun.base.one());
            out = out.add(&emb.mul(&t_pow));
        }
        out
    };

    let ga = clear(a);
    let gb = clear(b);
    let g = ga.gcd(&gb);
    let coeffs = g.coeffs_in_var(n);
    let back: Vec<crate::field::FieldElement> = coeffs
        .iter()
        .map(|c| {
            // drop the (zeroed) fiber exponent
            let mut small = MultiPoly::zero(fun.base, n);
            for (m, s) in &c.terms {
                let exp: Vec<u16> = m.0[..n].to_vec();
                small.terms.insert(crate::multipoly::Mono(exp), s.clone());
            }
            field.from_ratfunc(crate::field::RatFunc::from_poly(small))
        })
        .collect();
    UniPoly::new(field, back).monic().0
}

fn wrap(s: &str) -> String {
    if s.contains(' ') || s.contains('+') || (s.contains('-') && s.len() > 1) || s.contains('/') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("T"))
    }
}

/// A rational function in the fiber coordinate, reduced with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatT {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatT {
    pub fn new(num: UniPoly, den: UniPoly) -> RatT {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatT {
                den: UniPoly::one(num.field.clone()),
                num,
            };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let (den_m, lc) = den.monic();
        let num = num.mul_elem(&lc.inv().unwrap());
        RatT { num, den: den_m }
    }

    pub fn from_poly(num: UniPoly) -> RatT {
        RatT {
            den: UniPoly::one(num.field.clone()),
            num,
        }
    }

    pub fn field(&self) -> &Fld {
        &self.num.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &RatT) -> RatT {
        RatT::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &RatT) -> RatT {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatT {
        RatT {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatT) -> RatT {
        RatT::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn inv(&self) -> Result<RatT> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatT::new(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<RatT> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatT::from_poly(UniPoly::one(self.field().clone()));
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

/// Moves an element of K(..., x) into a fraction of polynomials in `x` over
/// the smaller field with `x` removed. Returns the smaller field too.
pub fn split_variable(elem: &FieldElement, var_name: &str) -> Result<(Arc<FunctionField>, RatT)> {
    let fun = match &elem.parent {
        Fld::Fun(f) => f.clone(),
        Fld::Ext(_) => return Err(Error::Invalid("cannot split a variable off an extension".into())),
    };
    let var = fun
        .var_index(var_name)
        .ok_or_else(|| Error::Invalid(format!("no variable {var_name}")))?;
    let small_vars: Vec<&str> = fun
        .vars
        .iter()
        .filter(|v| v.as_str() != var_name)
        .map(|v| v.as_str())
        .collect();
    let small = FunctionField::new(fun.base, &small_vars);
    let small_fld = Fld::Fun(small.clone());
    // map from old var index (minus the split one) to new index
    let mut map = Vec::new();
    for (i, _) in fun.vars.iter().enumerate() {
        if i != var {
            map.push(i);
        }
    }
    let project = |p: &crate::multipoly::MultiPoly| -> Vec<FieldElement> {
        let by_power = p.coeffs_in_var(var);
        by_power
            .iter()
            .map(|c| {
                // c has the split variable's exponent zeroed; re-index
                let mut small_poly = crate::multipoly::MultiPoly::zero(fun.base, small.nvars());
                for (m, s) in &c.terms {
                    let mut exp = Vec::with_capacity(small.nvars());
                    for &old in &map {
                        exp.push(m.0[old]);
                    }
                    small_poly
                        .terms
                        .insert(crate::multipoly::Mono(exp), s.clone());
                }
                small_fld.from_ratfunc(crate::field::RatFunc::from_poly(small_poly))
            })
            .collect()
    };
    let rf = elem.as_ratfunc().expect("function-field element");
    let num = UniPoly::new(small_fld.clone(), project(&rf.num));
    let den = UniPoly::new(small_fld.clone(), project(&rf.den));
    Ok((small, RatT::new(num, den)))
}

/// Inverse of `split_variable`: a polynomial in `x` over K becomes an element
/// of the bigger field K(..., x). The variable must exist in `big`.
pub fn join_variable(big: &Fld, var_name: &str, poly: &UniPoly) -> FieldElement {
    let x = big.var(var_name).expect("variable exists in the big field");
    let mut acc = big.zero();
    for c in poly.coeffs.iter().rev() {
        let lifted = lift_ground(big, c);
        acc = acc.mul(&x).add(&lifted);
    }
    acc
}

/// Lifts an element of K into K(..., x) by re-indexing variables by name.
pub fn lift_ground(big: &Fld, small_elem: &FieldElement) -> FieldElement {
    let small = match &small_elem.parent {
        Fld::Fun(f) => f.clone(),
        Fld::Ext(_) => panic!("lift_ground expects a function-field element"),
    };
    let big_fun = big.ground();
    let map: Vec<usize> = small
        .vars
        .iter()
        .map(|v| big_fun.var_index(v).expect("variable present in big field"))
        .collect();
    let rf = small_elem.as_ratfunc().unwrap();
    let num = rf.num.embed(big_fun.nvars(), &map);
    let den = rf.den.embed(big_fun.nvars(), &map);
    big.from_ratfunc(crate::field::RatFunc { num, den })
}

/// Converts a rational function of the fiber coordinate into an element of
/// the joined field K(..., x).
pub fn join_rat(big: &Fld, var_name: &str, rt: &RatT) -> FieldElement {
    let n = join_variable(big, var_name, &rt.num);
    let d = join_variable(big, var_name, &rt.den);
    n.div(&d).expect("nonzero denominator")
}
