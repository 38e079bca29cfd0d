//! Polynomial differential forms on simplices, with exact rational
//! coefficients.
//!
//! A form at level `n` lives on the n-simplex with barycentric coordinates
//! `t_0, ..., t_n`. We work in canonical coordinates: `t_0` is eliminated via
//! `t_0 = 1 - t_1 - ... - t_n` and `dt_0 = -(dt_1 + ... + dt_n)`, so every
//! form has a unique normal form and equality is literal term equality.
//!
//! Faces, degeneracies and the extension operator are all barycentric
//! substitutions followed by re-canonicalization. Integration over the
//! simplex is exact, normalized so that the standard volume form integrates
//! to 1; the Stokes identity against the alternating face sum then holds with
//! no extra sign (checked in the tests, not assumed).

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::scalar::{factorial, factorial_scalar, render_scalar, sign_pow, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormsError {
    #[error("level-0 forms have no faces")]
    LevelZero,
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },
    #[error("face {index} is nonzero; extension requires all faces to vanish")]
    FacesNotZero { index: usize },
    #[error("index {index} out of range at level {level}")]
    IndexOutOfRange { index: usize, level: usize },
}

/// One monomial: exponents of `t_1..t_n` plus a strictly increasing set of
/// `dt` indices. Coefficients live in the enclosing map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermKey {
    pub dts: Vec<u8>,
    pub exps: Vec<u16>,
}

impl TermKey {
    pub fn form_degree(&self) -> usize {
        self.dts.len()
    }

    pub fn weight(&self) -> usize {
        self.dts.len() + self.exps.iter().map(|&e| e as usize).sum::<usize>()
    }
}

/// An element of the polynomial de Rham algebra of the n-simplex.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    level: usize,
    terms: BTreeMap<TermKey, Scalar>,
}

/// An affine expression `c0 + sum lin[j] * t_{j+1}` in target coordinates;
/// used as the image of one barycentric slot under a substitution.
#[derive(Clone, Debug)]
pub struct AffineExpr {
    pub c0: Scalar,
    pub lin: Vec<Scalar>,
}

impl AffineExpr {
    fn zero(level: usize) -> Self {
        AffineExpr {
            c0: Scalar::zero(),
            lin: vec![Scalar::zero(); level],
        }
    }

    fn coordinate(level: usize, i: usize) -> Self {
        let mut a = Self::zero(level);
        a.lin[i - 1] = Scalar::one();
        a
    }

    /// `t_i + t_j` in target coordinates.
    fn coordinate_sum(level: usize, i: usize, j: usize) -> Self {
        let mut a = Self::zero(level);
        a.lin[i - 1] = Scalar::one();
        a.lin[j - 1] += Scalar::one();
        a
    }

    /// `1 - sum of all coordinates except t_skip` (pass `skip = 0` to subtract
    /// every coordinate, giving `t_0`).
    fn one_minus_all_except(level: usize, skip: usize) -> Self {
        let mut a = Self::zero(level);
        a.c0 = Scalar::one();
        for m in 1..=level {
            if m != skip {
                a.lin[m - 1] = -Scalar::one();
            }
        }
        a
    }

    fn as_zero_form(&self, level: usize) -> PolyForm {
        let mut f = PolyForm::constant(level, self.c0.clone());
        for (j, c) in self.lin.iter().enumerate() {
            if !c.is_zero() {
                f = f.add(&PolyForm::coordinate(level, j + 1).scale(c));
            }
        }
        f
    }

    fn as_one_form(&self, level: usize) -> PolyForm {
        let mut f = PolyForm::zero(level);
        for (j, c) in self.lin.iter().enumerate() {
            if !c.is_zero() {
                f = f.add(&PolyForm::coordinate_diff(level, j + 1).scale(c));
            }
        }
        f
    }
}

impl PolyForm {
    pub fn zero(level: usize) -> Self {
        PolyForm {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(level: usize, c: Scalar) -> Self {
        let mut f = Self::zero(level);
        if !c.is_zero() {
            f.terms.insert(
                TermKey {
                    dts: vec![],
                    exps: vec![0; level],
                },
                c,
            );
        }
        f
    }

    pub fn one(level: usize) -> Self {
        Self::constant(level, Scalar::one())
    }

    /// The coordinate function `t_i`, `1 <= i <= level`.
    pub fn coordinate(level: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= level);
        let mut exps = vec![0u16; level];
        exps[i - 1] = 1;
        let mut f = Self::zero(level);
        f.terms.insert(TermKey { dts: vec![], exps }, Scalar::one());
        f
    }

    /// The one-form `dt_i`, `1 <= i <= level`.
    pub fn coordinate_diff(level: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= level);
        let mut f = Self::zero(level);
        f.terms.insert(
            TermKey {
                dts: vec![i as u8],
                exps: vec![0; level],
            },
            Scalar::one(),
        );
        f
    }

    pub fn from_term(level: usize, key: TermKey, coeff: Scalar) -> Self {
        assert_eq!(key.exps.len(), level);
        let mut f = Self::zero(level);
        if !coeff.is_zero() {
            f.terms.insert(key, coeff);
        }
        f
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    fn insert(&mut self, key: TermKey, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.level, other.level);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyForm {
        let mut out = Self::zero(self.level);
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> PolyForm {
        if c.is_zero() {
            return Self::zero(self.level);
        }
        let mut out = Self::zero(self.level);
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), c * v);
        }
        out
    }

    /// Graded-commutative product (wedge on the dt factors).
    pub fn mul(&self, other: &PolyForm) -> Result<PolyForm, FormsError> {
        if self.level != other.level {
            return Err(FormsError::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        let mut out = Self::zero(self.level);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                if let Some((key, sign)) = merge_terms(k1, k2) {
                    let coeff = c1 * c2 * sign;
                    out.insert(key, coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> PolyForm {
        let mut acc = Self::one(self.level);
        for _ in 0..e {
            acc = acc.mul(self).expect("same level");
        }
        acc
    }

    /// Exterior differential; a degree +1 derivation with `d*d = 0`.
    pub fn differential(&self) -> PolyForm {
        let mut out = Self::zero(self.level);
        for (k, c) in &self.terms {
            for i in 1..=self.level {
                let e = k.exps[i - 1];
                if e == 0 || k.dts.contains(&(i as u8)) {
                    continue;
                }
                let mut exps = k.exps.clone();
                exps[i - 1] -= 1;
                let before = k.dts.iter().filter(|&&j| (j as usize) < i).count();
                let mut dts = k.dts.clone();
                let pos = dts.partition_point(|&j| (j as usize) < i);
                dts.insert(pos, i as u8);
                let coeff = c * Scalar::from_integer(e.into()) * sign_pow(before);
                out.insert(TermKey { dts, exps }, coeff);
            }
        }
        out
    }

    /// Split into homogeneous pieces by form degree.
    pub fn degree_parts(&self) -> BTreeMap<usize, PolyForm> {
        let mut parts: BTreeMap<usize, PolyForm> = BTreeMap::new();
        for (k, c) in &self.terms {
            parts
                .entry(k.form_degree())
                .or_insert_with(|| Self::zero(self.level))
                .insert(k.clone(), c.clone());
        }
        parts
    }

    pub fn is_homogeneous_of_degree(&self, p: usize) -> bool {
        self.terms.keys().all(|k| k.form_degree() == p)
    }

    pub fn max_form_degree(&self) -> usize {
        self.terms.keys().map(|k| k.form_degree()).max().unwrap_or(0)
    }

    /// Polynomial degree plus form degree, maximized over terms.
    pub fn weight(&self) -> usize {
        self.terms.keys().map(|k| k.weight()).max().unwrap_or(0)
    }

    /// Substitute each source coordinate `t_i` (1-based) by the given affine
    /// expression in target coordinates, extending multiplicatively and via
    /// `dt_i -> d(image)`.
    pub fn substitute(&self, target_level: usize, slots: &[AffineExpr]) -> PolyForm {
        assert_eq!(slots.len(), self.level);
        let mut out = PolyForm::zero(target_level);
        for (k, c) in &self.terms {
            let mut acc = PolyForm::constant(target_level, c.clone());
            for i in 1..=self.level {
                let e = k.exps[i - 1] as usize;
                if e > 0 {
                    let base = slots[i - 1].as_zero_form(target_level);
                    acc = acc.mul(&base.pow(e)).expect("same level");
                }
            }
            for &i in &k.dts {
                let dform = slots[i as usize - 1].as_one_form(target_level);
                acc = acc.mul(&dform).expect("same level");
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Face map: evaluate the i-th barycentric coordinate at zero.
    pub fn face(&self, i: usize) -> Result<PolyForm, FormsError> {
        let n = self.level;
        if n == 0 {
            return Err(FormsError::LevelZero);
        }
        if i > n {
            return Err(FormsError::IndexOutOfRange { index: i, level: n });
        }
        let target = n - 1;
        let mut slots = Vec::with_capacity(n);
        for j in 1..=n {
            let img = if j == i {
                AffineExpr::zero(target)
            } else if i == 0 && j == 1 {
                // slot 1 receives the target t_0
                AffineExpr::one_minus_all_except(target, 0)
            } else if j < i {
                AffineExpr::coordinate(target, j)
            } else {
                AffineExpr::coordinate(target, j - 1)
            };
            slots.push(img);
        }
        Ok(self.substitute(target, &slots))
    }

    /// Degeneracy map: merge barycentric coordinates `t_i` and `t_{i+1}`.
    pub fn degeneracy(&self, i: usize) -> Result<PolyForm, FormsError> {
        let n = self.level;
        if i > n {
            return Err(FormsError::IndexOutOfRange { index: i, level: n });
        }
        let target = n + 1;
        let mut slots = Vec::with_capacity(n);
        for j in 1..=n {
            let img = if i == 0 {
                AffineExpr::coordinate(target, j + 1)
            } else if j < i {
                AffineExpr::coordinate(target, j)
            } else if j == i {
                AffineExpr::coordinate_sum(target, i, i + 1)
            } else {
                AffineExpr::coordinate(target, j + 1)
            };
            slots.push(img);
        }
        Ok(self.substitute(target, &slots))
    }

    /// Alternating sum of all faces.
    pub fn boundary(&self) -> Result<PolyForm, FormsError> {
        let n = self.level;
        if n == 0 {
            return Err(FormsError::LevelZero);
        }
        let mut out = PolyForm::zero(n - 1);
        for i in 0..=n {
            out = out.add(&self.face(i)?.scale(&sign_pow(i)));
        }
        Ok(out)
    }

    /// Extension operator: given a form whose faces all vanish, produce a
    /// form one level up whose zeroth face is the input and whose remaining
    /// faces vanish.
    pub fn cone_extension(&self) -> Result<PolyForm, FormsError> {
        let n = self.level;
        for i in 0..=n {
            if n > 0 && !self.face(i)?.is_zero() {
                return Err(FormsError::FacesNotZero { index: i });
            }
        }
        let target = n + 1;
        let mut out = PolyForm::zero(target);
        for j in 1..=(n + 1) {
            let mut slots = Vec::with_capacity(n);
            for m in 1..=n {
                let img = if m == j - 1 {
                    // t_0 + t_j in target coordinates
                    AffineExpr::one_minus_all_except(target, j)
                } else {
                    AffineExpr::coordinate(target, m + 1)
                };
                slots.push(img);
            }
            let tj = PolyForm::coordinate(target, j);
            out = out.add(&tj.mul(&self.substitute(target, &slots)).expect("level"));
        }
        Ok(out)
    }

    /// Exact integral over the simplex of the top-degree component;
    /// lower-degree components integrate to zero. Normalized so the standard
    /// volume form has integral 1.
    pub fn integrate(&self) -> Scalar {
        let n = self.level;
        let full: Vec<u8> = (1..=n).map(|i| i as u8).collect();
        let mut total = Scalar::zero();
        for (k, c) in &self.terms {
            if k.dts != full {
                continue;
            }
            let sum: usize = k.exps.iter().map(|&e| e as usize).sum();
            let mut num = Scalar::one();
            for &e in &k.exps {
                num *= factorial_scalar(e as usize);
            }
            let den = Scalar::from_integer(factorial(n + sum));
            total += c * num / den;
        }
        total
    }

    /// Value of the 0-form part at the last vertex (all coordinates zero
    /// except `t_n = 1`). This is what iterated zeroth faces compute.
    pub fn eval_last_vertex(&self) -> Scalar {
        let n = self.level;
        let mut total = Scalar::zero();
        for (k, c) in &self.terms {
            if !k.dts.is_empty() {
                continue;
            }
            let supported_elsewhere =
                (0..n.saturating_sub(1)).any(|pos| k.exps[pos] != 0);
            if supported_elsewhere {
                continue;
            }
            total += c;
        }
        total
    }

    /// Contraction homotopy toward the last vertex: `d(h w) + h(d w)`
    /// equals `w` minus the constant extension of its last-vertex value.
    /// The output always vanishes at the last vertex.
    pub fn contraction_homotopy(&self) -> PolyForm {
        let n = self.level;
        let mut out = PolyForm::zero(n);
        if n == 0 {
            return out;
        }
        for (k, c) in &self.terms {
            let kk = k.dts.len();
            if kk == 0 {
                continue;
            }
            let a_last = k.exps[n - 1] as usize;
            let a_rest: usize = k.exps[..n - 1].iter().map(|&e| e as usize).sum();
            let m_exp = a_rest + kk - 1;
            // t-monomial without the last coordinate's exponent
            let mut base_exps = k.exps.clone();
            base_exps[n - 1] = 0;
            // s-integral of s^(m_exp) * (1 - s(1 - t_n))^(a_last), expanded in
            // powers of (1 - t_n); exact one-variable integration.
            let mut s_integral = PolyForm::zero(n);
            let one_minus_tn = PolyForm::one(n).sub(&PolyForm::coordinate(n, n));
            for r in 0..=a_last {
                let coeff = Scalar::from_integer(crate::scalar::binomial(a_last, r))
                    * sign_pow(r)
                    / Scalar::from_integer((m_exp + r + 1).into());
                s_integral = s_integral.add(&one_minus_tn.pow(r).scale(&coeff));
            }
            for (m, &im) in k.dts.iter().enumerate() {
                let g = if (im as usize) < n {
                    PolyForm::coordinate(n, im as usize)
                } else {
                    PolyForm::coordinate(n, n).sub(&PolyForm::one(n))
                };
                let mut dts = k.dts.clone();
                dts.retain(|&j| j != im);
                let skeleton = PolyForm::from_term(
                    n,
                    TermKey {
                        dts,
                        exps: base_exps.clone(),
                    },
                    c * sign_pow(m),
                );
                let piece = skeleton
                    .mul(&g)
                    .and_then(|f| f.mul(&s_integral))
                    .expect("same level");
                out = out.add(&piece);
            }
        }
        out
    }

    /// All monomial forms at this level with weight at most `max_weight`,
    /// in deterministic order.
    pub fn monomials(level: usize, max_weight: usize) -> Vec<PolyForm> {
        let mut keys = Vec::new();
        for mask in 0u32..(1 << level) {
            let dts: Vec<u8> = (1..=level)
                .filter(|&i| mask & (1 << (i - 1)) != 0)
                .map(|i| i as u8)
                .collect();
            if dts.len() > max_weight {
                continue;
            }
            let budget = max_weight - dts.len();
            let mut exps = vec![0u16; level];
            enumerate_exps(&mut exps, 0, budget, &mut |e: &Vec<u16>| {
                keys.push(TermKey {
                    dts: dts.clone(),
                    exps: e.clone(),
                });
            });
        }
        keys.sort();
        keys.into_iter()
            .map(|k| PolyForm::from_term(level, k, Scalar::one()))
            .collect()
    }
}

fn enumerate_exps(exps: &mut Vec<u16>, pos: usize, budget: usize, f: &mut impl FnMut(&Vec<u16>)) {
    if pos == exps.len() {
        f(exps);
        return;
    }
    for e in 0..=budget {
        exps[pos] = e as u16;
        enumerate_exps(exps, pos + 1, budget - e, f);
    }
    exps[pos] = 0;
}

/// Merge two term keys under the product; `None` when a dt index repeats.
fn merge_terms(a: &TermKey, b: &TermKey) -> Option<(TermKey, Scalar)> {
    let exps: Vec<u16> = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
    let mut inversions = 0usize;
    for &i in &a.dts {
        if b.dts.contains(&i) {
            return None;
        }
        inversions += b.dts.iter().filter(|&&j| j < i).count();
    }
    let mut dts: Vec<u8> = a.dts.iter().chain(b.dts.iter()).copied().collect();
    dts.sort_unstable();
    Some((TermKey { dts, exps }, sign_pow(inversions)))
}

/// The normalized volume form at level n: `n! dt_1 ... dt_n`.
pub fn volume_form(n: usize) -> PolyForm {
    let key = TermKey {
        dts: (1..=n).map(|i| i as u8).collect(),
        exps: vec![0; n],
    };
    PolyForm::from_term(n, key, factorial_scalar(n))
}

/// The standard primitive of the volume form, one level up: a form of
/// degree k at level k+1 whose differential is the level-(k+1) volume form
/// and whose alternating face sum is the level-k volume form.
pub fn volume_form_primitive(k: usize) -> PolyForm {
    let level = k + 1;
    let mut out = PolyForm::zero(level);
    let c = factorial_scalar(k);
    for i in 1..=level {
        let dts: Vec<u8> = (1..=level).filter(|&j| j != i).map(|j| j as u8).collect();
        let mut exps = vec![0u16; level];
        exps[i - 1] = 1;
        out = out.add(&PolyForm::from_term(
            level,
            TermKey { dts, exps },
            &c * sign_pow(i - 1),
        ));
    }
    out
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let mut factors = Vec::new();
            for (i, &e) in k.exps.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("t{}", i + 1));
                } else if e > 1 {
                    factors.push(format!("t{}^{}", i + 1, e));
                }
            }
            for &i in &k.dts {
                factors.push(format!("dt{i}"));
            }
            let (sign, mag) = if crate::scalar::is_negative(c) {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            let coeff_str = if mag.is_one() && !factors.is_empty() {
                String::new()
            } else {
                render_scalar(&mag)
            };
            let body = if coeff_str.is_empty() {
                factors.join(" ")
            } else if factors.is_empty() {
                coeff_str
            } else {
                format!("{} {}", coeff_str, factors.join(" "))
            };
            if first {
                if sign == "-" {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyForm(level {}: {})", self.level, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn t(level: usize, i: usize) -> PolyForm {
        PolyForm::coordinate(level, i)
    }

    fn dt(level: usize, i: usize) -> PolyForm {
        PolyForm::coordinate_diff(level, i)
    }

    /// Independent iterated-integration oracle for monomial integrals over
    /// the simplex: peels off one variable at a time using only binomial
    /// expansion and the one-variable power rule.
    fn monomial_integral_oracle(exps: &[usize]) -> Scalar {
        fn power_rule(a: usize, m: usize) -> Scalar {
            // integral over [0,1] of t^a (1-t)^m dt, by expansion
            let mut total = Scalar::zero();
            for r in 0..=m {
                let c = Scalar::from_integer(crate::scalar::binomial(m, r)) * sign_pow(r);
                total += c / Scalar::from_integer((a + r + 1).into());
            }
            total
        }
        match exps.split_last() {
            None => Scalar::one(),
            Some((&last, rest)) => {
                let inner_sum: usize = rest.iter().sum();
                let scaling = rest.len() + inner_sum;
                power_rule(last, scaling) * monomial_integral_oracle(rest)
            }
        }
    }

    #[test]
    fn wedge_is_graded_commutative_and_nilpotent() {
        let a = dt(2, 1);
        let b = dt(2, 2);
        assert_eq!(a.mul(&a).unwrap(), PolyForm::zero(2));
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab, ba.neg());
        let f = t(2, 1);
        assert_eq!(f.mul(&a).unwrap(), a.mul(&f).unwrap());
    }

    #[test]
    fn differential_examples() {
        // d(t1 t2) = t2 dt1 + t1 dt2
        let f = t(2, 1).mul(&t(2, 2)).unwrap();
        let expected = t(2, 2)
            .mul(&dt(2, 1))
            .unwrap()
            .add(&t(2, 1).mul(&dt(2, 2)).unwrap());
        assert_eq!(f.differential(), expected);
        // d is a derivation and squares to zero on a random-ish product
        let g = t(3, 1).pow(2).mul(&dt(3, 2)).unwrap();
        assert_eq!(g.differential().differential(), PolyForm::zero(3));
    }

    #[test]
    fn face_examples_from_level_two() {
        let f = t(2, 1);
        let d0 = f.face(0).unwrap();
        assert_eq!(d0, PolyForm::one(1).sub(&t(1, 1)));
        assert_eq!(f.face(1).unwrap(), PolyForm::zero(1));
        assert_eq!(f.face(2).unwrap(), t(1, 1));
        assert_eq!(PolyForm::one(0).face(0), Err(FormsError::LevelZero));
    }

    #[test]
    fn degeneracy_examples() {
        // s_0(t_0 dt_1) = (t_0 + t_1) dt_2 = (1 - t_2) dt_2 at level 2
        let t0 = PolyForm::one(1).sub(&t(1, 1));
        let f = t0.mul(&dt(1, 1)).unwrap();
        let s0 = f.degeneracy(0).unwrap();
        let expected = PolyForm::one(2)
            .sub(&t(2, 2))
            .mul(&dt(2, 2))
            .unwrap();
        assert_eq!(s0, expected);

        assert_eq!(dt(1, 1).degeneracy(0).unwrap(), dt(2, 2));
        assert_eq!(dt(1, 1).degeneracy(1).unwrap(), dt(2, 1).add(&dt(2, 2)));
    }

    #[test]
    fn volume_forms_and_their_identities() {
        for n in 0..=4 {
            let w = volume_form(n);
            assert_eq!(w.integrate(), qi(1), "integral of volume form, n={n}");
            if n > 0 {
                assert_eq!(w.differential(), PolyForm::zero(n));
                for i in 0..=n {
                    assert_eq!(w.face(i).unwrap(), PolyForm::zero(n - 1), "face {i}");
                }
            }
        }
        for k in 0..=3 {
            let wt = volume_form_primitive(k);
            assert_eq!(wt.differential(), volume_form(k + 1), "d primitive, k={k}");
            assert_eq!(wt.boundary().unwrap(), volume_form(k), "boundary, k={k}");
        }
    }

    #[test]
    fn integration_examples() {
        assert_eq!(t(1, 1).mul(&dt(1, 1)).unwrap().integrate(), q(1, 2));
        let f = t(2, 1)
            .mul(&t(2, 2))
            .unwrap()
            .mul(&dt(2, 1))
            .unwrap()
            .mul(&dt(2, 2))
            .unwrap();
        assert_eq!(f.integrate(), q(1, 24));
        // non-top-degree forms integrate to zero
        assert_eq!(t(2, 1).integrate(), qi(0));
    }

    #[test]
    fn integration_matches_iterated_oracle() {
        for exps in [vec![0usize], vec![3], vec![1, 1], vec![2, 1], vec![1, 2, 1]] {
            let n = exps.len();
            let mut f = volume_form(n).scale(&(Scalar::one() / factorial_scalar(n)));
            for (i, &e) in exps.iter().enumerate() {
                f = f.mul(&t(n, i + 1).pow(e)).unwrap();
            }
            assert_eq!(f.integrate(), monomial_integral_oracle(&exps), "{exps:?}");
        }
    }

    #[test]
    fn stokes_identity_small_cases() {
        // integral of d(alpha) over the simplex equals the integral of the
        // alternating face sum one level down
        let cases = vec![
            t(1, 1).pow(2),
            t(2, 1).mul(&dt(2, 2)).unwrap(),
            t(2, 2).pow(2).mul(&dt(2, 1)).unwrap(),
            t(3, 1)
                .mul(&t(3, 3))
                .unwrap()
                .mul(&dt(3, 2))
                .unwrap()
                .mul(&dt(3, 3))
                .unwrap(),
        ];
        for alpha in cases {
            let lhs = alpha.differential().integrate();
            let rhs = alpha.boundary().unwrap().integrate();
            assert_eq!(lhs, rhs, "alpha = {alpha}");
        }
    }

    #[test]
    fn cone_extension_examples() {
        // t_0 t_1 at level 1 extends to t_1 t_2 (1 + t_0) at level 2
        let t0 = PolyForm::one(1).sub(&t(1, 1));
        let w = t0.mul(&t(1, 1)).unwrap();
        let nu = w.cone_extension().unwrap();
        let t0_level2 = PolyForm::one(2).sub(&t(2, 1)).sub(&t(2, 2));
        let expected = t(2, 1)
            .mul(&t(2, 2))
            .unwrap()
            .mul(&PolyForm::one(2).add(&t0_level2))
            .unwrap();
        assert_eq!(nu, expected);
        assert_eq!(nu.face(0).unwrap(), w);
        assert_eq!(nu.face(1).unwrap(), PolyForm::zero(1));
        assert_eq!(nu.face(2).unwrap(), PolyForm::zero(1));

        for n in 1..=3 {
            let w = volume_form(n);
            let nu = w.cone_extension().unwrap();
            assert_eq!(nu.face(0).unwrap(), w);
            for i in 1..=(n + 1) {
                assert_eq!(nu.face(i).unwrap(), PolyForm::zero(n), "face {i}");
            }
        }

        assert_eq!(
            PolyForm::zero(2).cone_extension().unwrap(),
            PolyForm::zero(3)
        );

        let err = t(1, 1).cone_extension().unwrap_err();
        assert!(matches!(err, FormsError::FacesNotZero { .. }));
    }

    #[test]
    fn contraction_homotopy_identity() {
        // constants contract to zero
        assert_eq!(
            PolyForm::constant(2, qi(5)).contraction_homotopy(),
            PolyForm::zero(2)
        );
        // h(dt_1) at level 1 has d(h w) = dt_1
        let w = dt(1, 1);
        let hw = w.contraction_homotopy();
        assert_eq!(hw.differential(), w);

        // full identity d(h w) + h(d w) = w - eval(w) on a few forms
        let cases = vec![
            t(1, 1),
            t(2, 1).mul(&dt(2, 2)).unwrap(),
            t(2, 2).pow(3),
            t(3, 1).mul(&t(3, 2)).unwrap().mul(&dt(3, 3)).unwrap(),
            dt(3, 1).mul(&dt(3, 2)).unwrap(),
        ];
        for w in cases {
            let n = w.level();
            let lhs = w
                .contraction_homotopy()
                .differential()
                .add(&w.differential().contraction_homotopy());
            let rhs = w.sub(&PolyForm::constant(n, w.eval_last_vertex()));
            assert_eq!(lhs, rhs, "w = {w}");
            assert_eq!(w.contraction_homotopy().eval_last_vertex(), qi(0));
        }
    }

    #[test]
    fn eval_last_vertex_matches_iterated_zeroth_face() {
        let w = t(2, 1)
            .pow(2)
            .add(&t(2, 2).scale(&qi(3)))
            .add(&PolyForm::constant(2, q(1, 2)))
            .add(&t(2, 1).mul(&dt(2, 2)).unwrap());
        let mut reduced = w.clone();
        for _ in 0..2 {
            reduced = reduced.face(0).unwrap();
        }
        // at level 0 the remaining constant is the value
        assert_eq!(reduced.eval_last_vertex(), w.eval_last_vertex());
        assert_eq!(w.eval_last_vertex(), qi(3) + q(1, 2));
    }

    #[test]
    fn display_is_canonical() {
        let f = t(2, 1)
            .mul(&dt(2, 2))
            .unwrap()
            .scale(&q(-1, 2))
            .add(&PolyForm::one(2));
        assert_eq!(f.to_string(), "1 - 1/2 t1 dt2");
        assert_eq!(PolyForm::zero(1).to_string(), "0");
    }
}
