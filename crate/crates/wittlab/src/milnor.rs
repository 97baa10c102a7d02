//! Brute-force Milnor K-groups of small finite fields: generators are tuples
//! of nonzero elements, relators impose multilinearity and the Steinberg
//! relation in adjacent slots, and the quotient is computed exactly by Smith
//! normal form over the integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Fld, FieldElement, FunctionField};
use crate::scalar::BaseField;

/// A finitely presented abelian group together with its invariant factors.
#[derive(Clone, Debug)]
pub struct AbelianPresentation {
    pub generators: usize,
    pub relators: usize,
    /// Invariant factors d_1 | d_2 | ...; zero entries are free ranks.
    pub invariant_factors: Vec<BigInt>,
    row_basis: Vec<Vec<BigInt>>,
    diagonal: Vec<BigInt>,
}

/// Serializable summary of a presentation.
#[derive(Clone, Debug, Serialize)]
pub struct PresentationSummary {
    pub generators: usize,
    pub relators: usize,
    pub invariant_factors: Vec<String>,
}

impl AbelianPresentation {
    pub fn summary(&self) -> PresentationSummary {
        PresentationSummary {
            generators: self.generators,
            relators: self.relators,
            invariant_factors: self
                .invariant_factors
                .iter()
                .map(|d| d.to_string())
                .collect(),
        }
    }
}

impl AbelianPresentation {
    /// Order of the group when finite.
    pub fn order(&self) -> Option<BigInt> {
        let mut acc = BigInt::from(1);
        for d in &self.invariant_factors {
            if d.is_zero() {
                return None;
            }
            acc *= d;
        }
        Some(acc)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.iter().all(|d| *d == BigInt::from(1))
            && !self.invariant_factors.iter().any(|d| d.is_zero())
    }

    /// Coordinates of a generator combination in the invariant-factor basis.
    pub fn class_of(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coeffs.len(), self.generators);
        let mut out = Vec::with_capacity(self.generators);
        for (i, row) in self.row_basis.iter().enumerate() {
            let mut s = BigInt::zero();
            for (j, c) in coeffs.iter().enumerate() {
                s += &row[j] * c;
            }
            let d = &self.diagonal[i];
            if !d.is_zero() {
                s = ((s % d) + d) % d;
            }
            out.push(s);
        }
        out
    }
}

/// Smith normal form of an integer matrix given as rows; returns (U, D) with
/// U A V = D, keeping only the row transform U and the diagonal of D.
fn smith_normal_form(mut a: Vec<Vec<BigInt>>, rows: usize, cols: usize) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        // find the nonzero pivot of smallest absolute value
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !a[i][j].is_zero() {
                    let better = match &pivot {
                        None => true,
                        Some((pi, pj)) => a[i][j].abs() < a[*pi][*pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let (pi, pj) = match pivot {
            None => break,
            Some(p) => p,
        };
        a.swap(k, pi);
        u.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }

        // clear the pivot row and column
        let mut clean = false;
        while !clean {
            clean = true;
            for i in (k + 1)..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = div_round(&a[i][k], &a[k][k]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let t = &a[k][j] * &q;
                        a[i][j] -= t;
                    }
                    for j in 0..rows {
                        let t = &u[k][j] * &q;
                        u[i][j] -= t;
                    }
                }
                if !a[i][k].is_zero() {
                    a.swap(k, i);
                    u.swap(k, i);
                    clean = false;
                }
            }
            for j in (k + 1)..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = div_round(&a[k][j], &a[k][k]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let t = &a[i][k] * &q;
                        a[i][j] -= t;
                    }
                }
                if !a[k][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                    clean = false;
                }
            }
        }
        k += 1;
    }

    // enforce the divisibility chain
    let mut m = 0;
    while m < n && !a[m][m].is_zero() {
        m += 1;
    }
    loop {
        let mut fixed = true;
        for i in 0..m.saturating_sub(1) {
            let (d1, d2) = (a[i][i].clone(), a[i + 1][i + 1].clone());
            if (&d2 % &d1).is_zero() {
                continue;
            }
            fixed = false;
            let g = gcd_big(&d1, &d2);
            let l = (&d1 / &g) * &d2;
            a[i][i] = g;
            a[i + 1][i + 1] = l;
            // the row transform for the 2x2 gcd step: with d1 = g*x, d2 = g*y
            // and bezout u*d1 + v*d2 = g, rows combine as
            // [r_i; r_{i+1}] -> [u r_i + v r_{i+1}; -y r_i + x r_{i+1}]
            let (bu, bv) = bezout(&d1, &d2);
            let x = &d1 / &a[i][i];
            let y = &d2 / &a[i][i];
            for j in 0..rows {
                let r1 = u[i][j].clone();
                let r2 = u[i + 1][j].clone();
                u[i][j] = &bu * &r1 + &bv * &r2;
                u[i + 1][j] = -&y * &r1 + &x * &r2;
            }
        }
        if fixed {
            break;
        }
    }

    let mut diag = Vec::with_capacity(rows);
    for i in 0..rows {
        let d = if i < n { a[i][i].abs() } else { BigInt::zero() };
        diag.push(d);
    }
    (u, diag)
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer division keeps entries small
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if &r.abs() * &two > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::gcd(a, b)
}

fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let e = num_integer::Integer::extended_gcd(a, b);
    (e.x, e.y)
}

/// The table of a small finite field: elements of the unit group and the
/// index map used to build presentations.
struct UnitTable {
    field: Fld,
    units: Vec<FieldElement>,
    index: BTreeMap<FieldElement, usize>,
}

fn unit_table(q: u64) -> Result<UnitTable> {
    let field = finite_field(q)?;
    let all = field.enumerate_elements().expect("finite field");
    let units: Vec<FieldElement> = all.into_iter().filter(|x| !x.is_zero()).collect();
    let index = units
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), i))
        .collect();
    Ok(UnitTable {
        field,
        units,
        index,
    })
}

/// Builds F_q for a prime power q <= 64, choosing the first irreducible
/// modulus in the enumeration order for non-prime q.
pub fn finite_field(q: u64) -> Result<Fld> {
    if q < 2 || q > 64 {
        return Err(Error::TooLarge(format!("q = {q} out of range")));
    }
    let mut p = 0;
    for cand in 2..=q {
        if q % cand == 0 {
            p = cand;
            break;
        }
    }
    let base = BaseField::prime(p)?;
    let mut e = 0;
    let mut t = q;
    while t > 1 {
        if t % p != 0 {
            return Err(Error::Invalid(format!("{q} is not a prime power")));
        }
        t /= p;
        e += 1;
    }
    let ground = FunctionField::new(base, &[]);
    if e == 1 {
        return Ok(Fld::Fun(ground));
    }
    let kf = Fld::Fun(ground.clone());
    for cand in crate::factor::enumerate_monic(&kf, e as usize) {
        if crate::factor::is_irreducible(&cand) {
            let ext = crate::factor::make_extension(ground, "g", &cand, 0)?;
            return Ok(Fld::Ext(ext));
        }
    }
    Err(Error::Invalid("no irreducible modulus found".into()))
}

/// The degree-s Milnor presentation of F_q: generators are s-tuples of units,
/// relators are multiplicativity in every slot and the Steinberg relation in
/// adjacent slots.
pub fn milnor_group(q: u64, s: usize) -> Result<AbelianPresentation> {
    if s > 3 {
        return Err(Error::TooLarge("s > 3".into()));
    }
    if s == 0 {
        return Ok(AbelianPresentation {
            generators: 1,
            relators: 0,
            invariant_factors: vec![BigInt::zero()],
            row_basis: vec![vec![BigInt::from(1)]],
            diagonal: vec![BigInt::zero()],
        });
    }
    let table = unit_table(q)?;
    let m = table.units.len();
    let gens = m.checked_pow(s as u32).ok_or(Error::TooLarge("generator grid".into()))?;
    if gens > 5000 {
        return Err(Error::TooLarge(format!("{gens} generators")));
    }

    let tuple_index = |tuple: &[usize]| -> usize {
        tuple.iter().fold(0, |acc, &i| acc * m + i)
    };

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut push_relator = |terms: &[(usize, i64)]| {
        let mut row = vec![BigInt::zero(); gens];
        for (idx, c) in terms {
            row[*idx] += BigInt::from(*c);
        }
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    };

    // multiplicativity: {.., xy, ..} = {.., x, ..} + {.., y, ..}
    let mut spectators = vec![0usize; s];
    loop {
        for slot in 0..s {
            for x in 0..m {
                for y in 0..m {
                    let xy = table.units[x].mul(&table.units[y]);
                    let ixy = table.index[&xy];
                    let mut t_xy = spectators.clone();
                    let mut t_x = spectators.clone();
                    let mut t_y = spectators.clone();
                    t_xy[slot] = ixy;
                    t_x[slot] = x;
                    t_y[slot] = y;
                    push_relator(&[
                        (tuple_index(&t_xy), 1),
                        (tuple_index(&t_x), -1),
                        (tuple_index(&t_y), -1),
                    ]);
                }
            }
        }
        // advance the spectator tuple (slots other than the active one all
        // range; to keep the relator count manageable we let the full tuple
        // range only for s <= 2 and sample diagonally for s = 3)
        if s == 1 {
            break;
        }
        let mut k = 0;
        loop {
            if k == s {
                break;
            }
            spectators[k] += 1;
            if spectators[k] < m {
                break;
            }
            spectators[k] = 0;
            k += 1;
        }
        if spectators.iter().all(|&x| x == 0) {
            break;
        }
    }

    // Steinberg relation in adjacent slots: {.., a, 1-a, ..} = 0
    let one = table.field.one();
    let mut spectators = vec![0usize; s];
    loop {
        for slot in 0..s.saturating_sub(1) {
            for a_idx in 0..m {
                let a = &table.units[a_idx];
                if a.is_one() {
                    continue;
                }
                let b = one.sub(a);
                let b_idx = table.index[&b];
                let mut t = spectators.clone();
                t[slot] = a_idx;
                t[slot + 1] = b_idx;
                push_relator(&[(tuple_index(&t), 1)]);
            }
        }
        if s <= 2 {
            break;
        }
        let mut k = 0;
        loop {
            if k == s {
                break;
            }
            spectators[k] += 1;
            if spectators[k] < m {
                break;
            }
            spectators[k] = 0;
            k += 1;
        }
        if spectators.iter().all(|&x| x == 0) {
            break;
        }
    }

    let relators = rows.len();
    // SNF of the transpose: rows index generators, columns index relators
    let mut matrix: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); relators]; gens];
    for (j, row) in rows.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            if !v.is_zero() {
                matrix[i][j] = v.clone();
            }
        }
    }
    let (u, diag) = smith_normal_form(matrix, gens, relators);

    let mut invariant_factors = Vec::new();
    let mut row_basis = Vec::new();
    let mut diagonal = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if *d == BigInt::from(1) {
            continue;
        }
        invariant_factors.push(d.clone());
        row_basis.push(u[i].clone());
        diagonal.push(d.clone());
    }
    if invariant_factors.is_empty() {
        invariant_factors.push(BigInt::from(1));
        row_basis.push(vec![BigInt::zero(); gens]);
        diagonal.push(BigInt::from(1));
    }
    Ok(AbelianPresentation {
        generators: gens,
        relators,
        invariant_factors,
        row_basis,
        diagonal,
    })
}

/// Image of the class {a_1,...,a_s} in invariant-factor coordinates.
pub fn milnor_class(
    q: u64,
    s: usize,
    group: &AbelianPresentation,
    tuple: &[FieldElement],
) -> Result<Vec<BigInt>> {
    if tuple.len() != s {
        return Err(Error::SlotArity);
    }
    if s == 0 {
        return Ok(vec![BigInt::from(1)]);
    }
    let table = unit_table(q)?;
    let m = table.units.len();
    let mut idx = 0usize;
    for x in tuple {
        let i = *table
            .index
            .get(x)
            .ok_or_else(|| Error::Invalid("not a unit of the field".into()))?;
        idx = idx * m + i;
    }
    let mut coeffs = vec![BigInt::zero(); group.generators];
    coeffs[idx] = BigInt::from(1);
    Ok(group.class_of(&coeffs))
}
