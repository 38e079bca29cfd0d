//! Normalized chains of the simplicial Lie algebra of degree-0 form
//! cocycles, the shuffle Lie bracket, and the exact simplex-integration
//! chain map.
//!
//! Conventions fixed here, project-wide:
//! * normalized means all faces except the zeroth vanish; the boundary is
//!   the alternating face sum, which restricts to the zeroth face;
//! * the integration map carries the sign `(-1)^(n choose 2)` at level n.
//!   This sign is forced by the chain-map identity once the level-0 map is
//!   the identity and the volume form integrates to 1; consequently
//!   `I(vol_n (x) x) = (-1)^(n choose 2) x` (see the README's sign table).

use std::collections::BTreeMap;

use num::Zero;
use thiserror::Error;

use crate::dgla::Dgla;
use crate::forms::PolyForm;
use crate::lie::LieCarrier;
use crate::linear::{solve_linear, vzero, QMatrix, QVec};
use crate::scalar::{sign_pow, Scalar};
use crate::simplicial::{LieForm, OmegaL, SimplicialError};

#[derive(Debug, Error, PartialEq)]
pub enum DoldKanError {
    #[error("element is not normalized (some positive face is nonzero)")]
    NotNormalized,
    #[error("element is not closed under the differential")]
    NotClosed,
    #[error("element is not homogeneous of total degree 0")]
    DegreeMismatch,
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// A (p,q)-shuffle: a partition of 0..p+q-1 into two increasing sequences,
/// with the sign of the associated permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShufflePair {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub sign: i8,
}

/// All (p,q)-shuffles, in lexicographic order of `mu`.
pub fn shuffles(p: usize, q: usize) -> Vec<ShufflePair> {
    let n = p + q;
    let mut out = Vec::new();
    let mut mu = Vec::with_capacity(p);
    fn rec(start: usize, remaining: usize, n: usize, mu: &mut Vec<usize>, out: &mut Vec<ShufflePair>) {
        if remaining == 0 {
            let nu: Vec<usize> = (0..n).filter(|i| !mu.contains(i)).collect();
            let inversions: usize = mu
                .iter()
                .map(|&m| nu.iter().filter(|&&v| v < m).count())
                .sum();
            out.push(ShufflePair {
                mu: mu.clone(),
                nu,
                sign: if inversions % 2 == 0 { 1 } else { -1 },
            });
            return;
        }
        for i in start..=(n - remaining) {
            mu.push(i);
            rec(i + 1, remaining - 1, n, mu, out);
            mu.pop();
        }
    }
    rec(0, p, n, &mut mu, &mut out);
    out
}

/// Apply the composite degeneracy `s_(w_k) ... s_(w_1)` (lowest index first).
pub fn degeneracy_word(xi: &LieForm, word: &[usize]) -> Result<LieForm, SimplicialError> {
    let mut cur = xi.clone();
    for &i in word {
        cur = cur.degeneracy(i)?;
    }
    Ok(cur)
}

pub fn is_normalized(xi: &LieForm) -> Result<bool, SimplicialError> {
    for i in 1..=xi.level() {
        if !xi.face(i)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A normalized degree-0 cocycle at a fixed level.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainElement {
    form: LieForm,
}

impl ChainElement {
    pub fn new(l: &Dgla, form: LieForm) -> Result<Self, DoldKanError> {
        if !form.is_homogeneous(l, 0) {
            return Err(DoldKanError::DegreeMismatch);
        }
        let carrier = OmegaL {
            algebra: l,
            level: form.level(),
        };
        if !carrier.diff(&form).is_zero() {
            return Err(DoldKanError::NotClosed);
        }
        if !is_normalized(&form)? {
            return Err(DoldKanError::NotNormalized);
        }
        Ok(ChainElement { form })
    }

    pub fn level(&self) -> usize {
        self.form.level()
    }

    pub fn form(&self) -> &LieForm {
        &self.form
    }
}

/// Projection onto normalized chains: the composite of `1 - s_(j-1) d_j`
/// for j from the level down to 1. Idempotent, the identity on normalized
/// elements, and it kills every degeneracy.
pub fn normalize(xi: &LieForm) -> Result<LieForm, SimplicialError> {
    let mut cur = xi.clone();
    for j in (1..=xi.level()).rev() {
        let corr = cur.face(j)?.degeneracy(j - 1)?;
        cur = cur.sub(&corr);
    }
    Ok(cur)
}

/// Alternating sum of all faces.
pub fn boundary(xi: &LieForm) -> Result<LieForm, SimplicialError> {
    let n = xi.level();
    let mut out = LieForm::zero(n - 1);
    for i in 0..=n {
        out = out.add(&xi.face(i)?.scale(&sign_pow(i)));
    }
    Ok(out)
}

/// The shuffle Lie bracket of normalized chains:
/// `[x, y] = sum over (p,q)-shuffles of sgn * [s_nu x, s_mu y]`.
pub fn shuffle_bracket(
    l: &Dgla,
    x: &ChainElement,
    y: &ChainElement,
) -> Result<ChainElement, DoldKanError> {
    let p = x.level();
    let q = y.level();
    let carrier = OmegaL {
        algebra: l,
        level: p + q,
    };
    let mut total = LieForm::zero(p + q);
    for sh in shuffles(p, q) {
        let sx = degeneracy_word(x.form(), &sh.nu)?;
        let sy = degeneracy_word(y.form(), &sh.mu)?;
        let term = carrier.bracket(&sx, &sy);
        let signed = if sh.sign > 0 { term } else { term.neg() };
        total = total.add(&signed);
    }
    ChainElement::new(l, total)
}

/// Sign of the integration map at level n.
pub fn integration_sign(n: usize) -> Scalar {
    sign_pow(n * (n.saturating_sub(1)) / 2)
}

/// The integration chain map: exact simplex integration of the top form
/// component, with the level sign. A quasi-isomorphism of dg Lie algebras
/// onto L.
pub fn integration_map(l: &Dgla, xi: &ChainElement) -> QVec {
    let sign = integration_sign(xi.level());
    let mut out = vzero(l.dim());
    for (b, form) in xi.form().components() {
        let v = form.integrate();
        if !v.is_zero() {
            out[b] = v * &sign;
        }
    }
    out
}

/// A finite coordinate chart on L-valued forms: all monomial/basis pairs of
/// one total degree with weight below a bound.
pub struct LieFormSpace {
    pub level: usize,
    basis: Vec<(usize, PolyForm)>,
    index: BTreeMap<(usize, String), usize>,
}

fn term_fingerprint(f: &PolyForm) -> String {
    // each basis entry is a single monomial; its display is canonical
    format!("{f}")
}

impl LieFormSpace {
    pub fn new(l: &Dgla, level: usize, max_weight: usize, total_degree: i64) -> Self {
        let monomials = PolyForm::monomials(level, max_weight);
        let mut basis = Vec::new();
        let mut index = BTreeMap::new();
        for b in 0..l.dim() {
            let want = total_degree - l.degree(b);
            if want < 0 || want > level as i64 {
                continue;
            }
            for m in &monomials {
                if m.is_homogeneous_of_degree(want as usize) {
                    index.insert((b, term_fingerprint(m)), basis.len());
                    basis.push((b, m.clone()));
                }
            }
        }
        LieFormSpace {
            level,
            basis,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, i: usize) -> LieForm {
        let (b, m) = &self.basis[i];
        LieForm::tensor(self.level, m.clone(), *b)
    }

    /// Coordinates of a form in this chart; `None` when it has terms
    /// outside the chart.
    pub fn to_coords(&self, xi: &LieForm) -> Option<QVec> {
        let mut v = vzero(self.dim());
        for (b, form) in xi.components() {
            for (key, coeff) in form.terms() {
                let single =
                    PolyForm::from_term(self.level, key.clone(), num::One::one());
                let pos = self.index.get(&(b, term_fingerprint(&single)))?;
                v[*pos] = coeff.clone();
            }
        }
        Some(v)
    }

    pub fn from_coords(&self, v: &QVec) -> LieForm {
        let mut out = LieForm::zero(self.level);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.element(i).scale(c));
            }
        }
        out
    }

    /// Matrix of a linear operation into another chart.
    pub fn matrix_to(
        &self,
        target: &LieFormSpace,
        op: impl Fn(&LieForm) -> LieForm,
    ) -> Option<QMatrix> {
        let cols: Option<Vec<QVec>> = (0..self.dim())
            .map(|i| target.to_coords(&op(&self.element(i))))
            .collect();
        Some(QMatrix::from_columns(target.dim(), &cols?))
    }
}

/// Basis of the weight-truncated space of degree-0 cocycles at one level.
pub fn cocycle_basis(l: &Dgla, level: usize, max_weight: usize) -> Vec<LieForm> {
    let source = LieFormSpace::new(l, level, max_weight, 0);
    let target = LieFormSpace::new(l, level, max_weight, 1);
    let carrier = OmegaL { algebra: l, level };
    let m = source
        .matrix_to(&target, |xi| carrier.diff(xi))
        .expect("differential preserves the weight bound");
    m.kernel_basis()
        .into_iter()
        .map(|v| source.from_coords(&v))
        .collect()
}

/// Basis of the weight-truncated normalized degree-0 cocycles at one level.
pub fn normalized_cocycle_basis(l: &Dgla, level: usize, max_weight: usize) -> Vec<LieForm> {
    let source = LieFormSpace::new(l, level, max_weight, 0);
    let d_target = LieFormSpace::new(l, level, max_weight, 1);
    let face_target = if level > 0 {
        Some(LieFormSpace::new(l, level - 1, max_weight, 0))
    } else {
        None
    };
    let carrier = OmegaL { algebra: l, level };
    let mut rows: Vec<QVec> = Vec::new();
    let d_matrix = source
        .matrix_to(&d_target, |xi| carrier.diff(xi))
        .expect("weight bound");
    for r in 0..d_matrix.rows {
        rows.push((0..d_matrix.cols).map(|c| d_matrix.get(r, c).clone()).collect());
    }
    if let Some(ft) = &face_target {
        for i in 1..=level {
            let m = source
                .matrix_to(ft, |xi| xi.face(i).expect("level positive"))
                .expect("faces lower weight");
            for r in 0..m.rows {
                rows.push((0..m.cols).map(|c| m.get(r, c).clone()).collect());
            }
        }
    }
    let stacked = QMatrix::from_rows(source.dim(), &rows);
    stacked
        .kernel_basis()
        .into_iter()
        .map(|v| source.from_coords(&v))
        .collect()
}

/// Search for a normalized cocycle one level up whose boundary is the given
/// normalized cycle, within a weight bound. Returns the explicit primitive.
pub fn boundary_primitive(
    l: &Dgla,
    delta: &LieForm,
    max_weight: usize,
) -> Option<LieForm> {
    let n = delta.level();
    let target = LieFormSpace::new(l, n, max_weight.max(delta.weight()), 0);
    let rhs = target.to_coords(delta)?;
    let candidates = normalized_cocycle_basis(l, n + 1, max_weight);
    if candidates.is_empty() {
        return None;
    }
    let cols: Option<Vec<QVec>> = candidates
        .iter()
        .map(|k| target.to_coords(&k.face(0).ok()?))
        .collect();
    let m = QMatrix::from_columns(target.dim(), &cols?);
    let sol = solve_linear(&m, &rhs).ok()??;
    let mut out = LieForm::zero(n + 1);
    for (c, k) in sol.iter().zip(&candidates) {
        if !c.is_zero() {
            out = out.add(&k.scale(c));
        }
    }
    Some(out)
}
