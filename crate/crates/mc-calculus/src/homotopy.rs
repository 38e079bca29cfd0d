//! Homotopy groups of the Maurer-Cartan space with explicit simplex
//! representatives, Samelson products via the shuffle/BCH commutator
//! formula, the Whitehead pairing as the transported Samelson product, and
//! the connecting-map identity.
//!
//! The group `pi_(k+1)` based at a Maurer-Cartan element is computed as the
//! degree `-k` cohomology of the twisted algebra; each class `[x]` is
//! realized by the simplex `tau (x) 1 - vol_(k+1) (x) x`, and the
//! fundamental group is the exponential of the degree-0 cohomology with the
//! BCH product.

use num::Zero;
use thiserror::Error;

use crate::dgla::{Dgla, DglaError};
use crate::dold_kan::{
    boundary_primitive, shuffle_bracket, ChainElement, DoldKanError,
};
use crate::forms::{volume_form, volume_form_primitive};
use crate::lie::{self, LieCarrier};
use crate::linear::{vadd, vis_zero, vscale, vzero, Cohomology, LinearError, QVec};
use crate::scalar::{factorial_scalar, sign_pow, Scalar};
use crate::simplicial::{
    constant_include, gauge_act_level, is_mc_simplex, LieForm, OmegaL, SimplicialError,
};

#[derive(Debug, Error, PartialEq)]
pub enum HomotopyError {
    #[error("base point does not satisfy the Maurer-Cartan equation")]
    NotMaurerCartan,
    #[error("element is not a homogeneous cycle")]
    NotACycle,
    #[error("element must be homogeneous of chain degree >= {0}")]
    DegreeMismatch(i64),
    #[error("precondition failed: the twisted differential of the element is nonzero")]
    PreconditionFailed,
    #[error(transparent)]
    Dgla(#[from] DglaError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    DoldKan(#[from] DoldKanError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

/// One homotopy group `pi_(k+1)` in the report.
#[derive(Clone, Debug)]
pub struct PiEntry {
    /// chain degree k; the group is `pi_(k+1)` of the Maurer-Cartan space
    pub chain_degree: usize,
    pub dim: usize,
    /// cocycles of the twisted algebra representing a basis
    pub cycle_reps: Vec<QVec>,
    /// the corresponding simplices `tau (x) 1 - vol (x) x`
    pub simplex_reps: Vec<LieForm>,
    /// every representative passes the Maurer-Cartan check
    pub reps_are_mc: bool,
}

/// Structure constants of a pairing on cohomology representatives, stored
/// as coordinates over the representative basis of the target degree.
#[derive(Clone, Debug)]
pub struct PairingTable {
    pub left_degree: usize,
    pub right_degree: usize,
    pub entries: Vec<(usize, usize, Vec<Scalar>)>,
}

#[derive(Clone, Debug)]
pub struct Pi1Report {
    pub dim: usize,
    pub cycle_reps: Vec<QVec>,
    /// BCH products of representatives, in cohomology coordinates
    pub bch_table: Vec<(usize, usize, Vec<Scalar>)>,
    /// the induced Lie bracket on degree-0 cohomology
    pub bracket_table: Vec<(usize, usize, Vec<Scalar>)>,
    /// the BCH product descends to cohomology classes (sampled)
    pub well_defined: bool,
}

#[derive(Clone, Debug)]
pub struct HomotopyReport {
    pub tau: QVec,
    pub pi1: Pi1Report,
    pub higher: Vec<PiEntry>,
    /// brackets H_p x H_q -> H_(p+q) on representatives
    pub bracket_tables: Vec<PairingTable>,
}

fn twisted_cohomology(twisted: &Dgla, chain_degree: i64) -> Cohomology {
    twisted.cochain_complex().cohomology(-chain_degree)
}

/// Homotopy groups of the Maurer-Cartan space at a base point, through
/// chain degree `k_max`.
pub fn homotopy_groups(
    l: &Dgla,
    tau: &QVec,
    k_max: usize,
) -> Result<HomotopyReport, HomotopyError> {
    if !l.is_mc(tau) {
        return Err(HomotopyError::NotMaurerCartan);
    }
    let twisted = l.twist(tau)?;

    // fundamental group: exponential of degree-0 cohomology
    let h0 = twisted_cohomology(&twisted, 0);
    let mut bch_table = Vec::new();
    let mut bracket_table = Vec::new();
    let mut well_defined = true;
    for (i, xi) in h0.representatives.iter().enumerate() {
        for (j, xj) in h0.representatives.iter().enumerate() {
            let product = twisted.bch(xi, xj)?;
            let (coords, _) = h0.decompose(&product)?;
            // independence of representatives: perturb by twisted boundaries
            for w in twisted.basis().indices_of_degree(-1) {
                let perturbed = vadd(xi, &twisted.d_vec(&twisted.basis().unit(w)));
                let (coords2, _) = h0.decompose(&twisted.bch(&perturbed, xj)?)?;
                if coords2 != coords {
                    well_defined = false;
                }
            }
            bch_table.push((i, j, coords));
            let (bracket_coords, _) =
                h0.decompose(&twisted.bracket_vec(xi, xj))?;
            bracket_table.push((i, j, bracket_coords));
        }
    }
    let pi1 = Pi1Report {
        dim: h0.dim,
        cycle_reps: h0.representatives.clone(),
        bch_table,
        bracket_table,
        well_defined,
    };

    // higher groups with explicit simplices
    let mut higher = Vec::new();
    for k in 1..=k_max {
        let h = twisted_cohomology(&twisted, k as i64);
        let mut simplex_reps = Vec::new();
        let mut reps_are_mc = true;
        for x in &h.representatives {
            let level = k + 1;
            let simplex = constant_include(l, tau, level)
                .sub(&tensor_vector(level, &volume_form(level), x));
            reps_are_mc &= is_mc_simplex(l, &simplex);
            simplex_reps.push(simplex);
        }
        higher.push(PiEntry {
            chain_degree: k,
            dim: h.dim,
            cycle_reps: h.representatives.clone(),
            simplex_reps,
            reps_are_mc,
        });
    }

    // bracket tables between positive degrees within range
    let mut bracket_tables = Vec::new();
    for p in 1..=k_max {
        for q in p..=k_max {
            if p + q > k_max {
                continue;
            }
            let hp = twisted_cohomology(&twisted, p as i64);
            let hq = twisted_cohomology(&twisted, q as i64);
            let hpq = twisted_cohomology(&twisted, (p + q) as i64);
            if hp.dim == 0 || hq.dim == 0 {
                continue;
            }
            let mut entries = Vec::new();
            for (i, x) in hp.representatives.iter().enumerate() {
                for (j, y) in hq.representatives.iter().enumerate() {
                    let (coords, _) = hpq.decompose(&twisted.bracket_vec(x, y))?;
                    entries.push((i, j, coords));
                }
            }
            bracket_tables.push(PairingTable {
                left_degree: p,
                right_degree: q,
                entries,
            });
        }
    }

    Ok(HomotopyReport {
        tau: tau.clone(),
        pi1,
        higher,
        bracket_tables,
    })
}

/// `form (x) v` for a whole vector, by linearity.
fn tensor_vector(level: usize, form: &crate::forms::PolyForm, v: &QVec) -> LieForm {
    let mut out = LieForm::zero(level);
    for (b, c) in v.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&LieForm::tensor(level, form.scale(c), b));
        }
    }
    out
}

/// Chain degree of a homogeneous nonzero vector, if at least `min`.
fn chain_degree_of(l: &Dgla, v: &QVec, min: i64) -> Result<i64, HomotopyError> {
    let mut degree = None;
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = -l.degree(i);
        match degree {
            None => degree = Some(k),
            Some(d) if d != k => return Err(HomotopyError::NotACycle),
            _ => {}
        }
    }
    let k = degree.ok_or(HomotopyError::NotACycle)?;
    if k < min {
        return Err(HomotopyError::DegreeMismatch(min));
    }
    Ok(k)
}

#[derive(Clone, Debug)]
pub struct SamelsonReport {
    pub left_degree: usize,
    pub right_degree: usize,
    /// the Curtis product, evaluated as a BCH product over shuffles
    pub curtis: LieForm,
    /// the shuffle Lie bracket of the two classes
    pub shuffle: LieForm,
    /// each BCH commutator collapses to the plain bracket
    pub higher_terms_vanish: bool,
    /// evaluating the shuffle product in reversed order gives the same value
    pub order_independent: bool,
    pub curtis_equals_shuffle: bool,
    /// the signed volume class `(-1)^(pq) vol (x) [x,y]`
    pub volume_class: LieForm,
    /// explicit primitive with boundary `curtis - volume_class`, when the
    /// difference is nonzero
    pub boundary_witness: Option<LieForm>,
    /// curtis and the signed volume class agree up to the exhibited boundary
    pub homologous: bool,
}

/// The Samelson product of two positive-degree cycles, evaluated three ways
/// and cross-checked: as the Curtis BCH product over shuffles, as the
/// shuffle Lie bracket, and against the volume representative of the
/// bracket class.
pub fn samelson(l: &Dgla, x: &QVec, y: &QVec) -> Result<SamelsonReport, HomotopyError> {
    let p = chain_degree_of(l, x, 1)? as usize;
    let q = chain_degree_of(l, y, 1)? as usize;
    if !vis_zero(&l.d_vec(x)) || !vis_zero(&l.d_vec(y)) {
        return Err(HomotopyError::NotACycle);
    }
    let xi = ChainElement::new(l, tensor_vector(p, &volume_form(p), x))?;
    let eta = ChainElement::new(l, tensor_vector(q, &volume_form(q), y))?;

    let level = p + q;
    let carrier = OmegaL { algebra: l, level };
    let shuffles = crate::dold_kan::shuffles(p, q);

    let mut higher_terms_vanish = true;
    let mut factors = Vec::new();
    for sh in &shuffles {
        let a = crate::dold_kan::degeneracy_word(xi.form(), &sh.nu)?;
        let b = crate::dold_kan::degeneracy_word(eta.form(), &sh.mu)?;
        let commutator = lie::bch_commutator(&carrier, &a, &b);
        if commutator != carrier.bracket(&a, &b) {
            higher_terms_vanish = false;
        }
        let signed = if sh.sign > 0 {
            commutator
        } else {
            lie::bch_inverse(&carrier, &commutator)
        };
        factors.push(signed);
    }
    let mut curtis = carrier.zero();
    for f in &factors {
        curtis = lie::bch(&carrier, &curtis, f);
    }
    let mut reversed = carrier.zero();
    for f in factors.iter().rev() {
        reversed = lie::bch(&carrier, &reversed, f);
    }
    let order_independent = curtis == reversed;

    let shuffle = shuffle_bracket(l, &xi, &eta)?;
    let curtis_equals_shuffle = curtis == *shuffle.form();

    let volume_class = tensor_vector(
        level,
        &volume_form(level).scale(&sign_pow(p * q)),
        &l.bracket_vec(x, y),
    );
    let difference = curtis.sub(&volume_class);
    let (boundary_witness, homologous) = if difference.is_zero() {
        (None, true)
    } else {
        let mut found = None;
        for extra in 0..=2usize {
            let bound = difference.weight() + extra;
            if let Some(prim) = boundary_primitive(l, &difference, bound) {
                let ok = prim.face(0)? == difference;
                if ok {
                    found = Some(prim);
                    break;
                }
            }
        }
        let homologous = found.is_some();
        (found, homologous)
    };

    Ok(SamelsonReport {
        left_degree: p,
        right_degree: q,
        curtis,
        shuffle: shuffle.form().clone(),
        higher_terms_vanish,
        order_independent,
        curtis_equals_shuffle,
        volume_class,
        boundary_witness,
        homologous,
    })
}

#[derive(Clone, Debug)]
pub struct ConnectingReport {
    pub gauge_transform: LieForm,
    pub expected: LieForm,
    pub holds: bool,
}

/// The connecting-map identity: the gauge action of the volume primitive
/// paired with a twisted cycle on the constant simplex produces exactly the
/// homotopy representative.
pub fn connecting_identity(
    l: &Dgla,
    tau: &QVec,
    x: &QVec,
) -> Result<ConnectingReport, HomotopyError> {
    if !l.is_mc(tau) {
        return Err(HomotopyError::NotMaurerCartan);
    }
    let k = chain_degree_of(l, x, 0)? as usize;
    if !vis_zero(&lie::twisted_diff(l, tau, x)) {
        return Err(HomotopyError::PreconditionFailed);
    }
    let level = k + 1;
    let g = tensor_vector(level, &volume_form_primitive(k), x);
    let acted = gauge_act_level(l, &g, &constant_include(l, tau, level))?;
    let expected = constant_include(l, tau, level)
        .sub(&tensor_vector(level, &volume_form(level), x));
    Ok(ConnectingReport {
        holds: acted == expected,
        gauge_transform: acted,
        expected,
    })
}

/// The Whitehead pairing, defined as the transported Samelson product: for
/// twisted cycles of chain degrees p and q it returns the representative
/// simplex of the class `(-1)^(pq) [x, y]` together with the underlying
/// Samelson data in the twisted algebra.
pub fn whitehead_product(
    l: &Dgla,
    tau: &QVec,
    x: &QVec,
    y: &QVec,
) -> Result<(LieForm, SamelsonReport), HomotopyError> {
    if !l.is_mc(tau) {
        return Err(HomotopyError::NotMaurerCartan);
    }
    let twisted = l.twist(tau)?;
    let report = samelson(&twisted, x, y)?;
    let p = report.left_degree;
    let q = report.right_degree;
    let level = p + q + 1;
    let class = vscale(&sign_pow(p * q), &l.bracket_vec(x, y));
    let simplex = constant_include(l, tau, level)
        .sub(&tensor_vector(level, &volume_form(level), &class));
    Ok((simplex, report))
}

/// Exponential of the adjoint action, `exp(ad_y) x`; a finite sum by
/// nilpotency.
pub fn exp_adjoint(l: &Dgla, y: &QVec, x: &QVec) -> QVec {
    let mut acc = x.clone();
    let mut term = x.clone();
    for m in 1..=(l.nilpotency_class() + 1) {
        term = l.bracket_vec(y, &term);
        if vis_zero(&term) {
            break;
        }
        acc = vadd(&acc, &vscale(&(Scalar::from_integer(1.into()) / factorial_scalar(m)), &term));
    }
    acc
}

#[derive(Clone, Debug)]
pub struct ActionReport {
    pub transported: LieForm,
    pub expected: LieForm,
    pub holds_exactly: bool,
    /// the induced cohomology classes also agree
    pub classes_agree: bool,
}

/// Action of the fundamental group on higher homotopy: transporting the
/// simplex representative of a degree-k class by a constant stabilizing
/// gauge element equals the representative of `exp(ad_y) x`, on the nose.
pub fn pi1_action(
    l: &Dgla,
    tau: &QVec,
    y: &QVec,
    x: &QVec,
) -> Result<ActionReport, HomotopyError> {
    if !l.is_mc(tau) {
        return Err(HomotopyError::NotMaurerCartan);
    }
    if !vis_zero(&lie::twisted_diff(l, tau, y)) {
        return Err(HomotopyError::PreconditionFailed);
    }
    let k = chain_degree_of(l, x, 1)? as usize;
    if !vis_zero(&lie::twisted_diff(l, tau, x)) {
        return Err(HomotopyError::PreconditionFailed);
    }
    let level = k + 1;
    let rep = constant_include(l, tau, level)
        .sub(&tensor_vector(level, &volume_form(level), x));
    let transported = gauge_act_level(l, &constant_include(l, y, level), &rep)?;
    let moved = exp_adjoint(l, y, x);
    let expected = constant_include(l, tau, level)
        .sub(&tensor_vector(level, &volume_form(level), &moved));
    let holds_exactly = transported == expected;

    let twisted = l.twist(tau)?;
    let h = twisted_cohomology(&twisted, k as i64);
    let classes_agree = if holds_exactly {
        true
    } else {
        let delta = constant_include(l, tau, level).sub(&transported);
        // extract the volume coefficient of the difference
        let mut coeffs = vzero(l.dim());
        for (b, form) in delta.components() {
            coeffs[b] = form.integrate();
        }
        h.decompose(&coeffs)?.0 == h.decompose(&moved)?.0
    };
    Ok(ActionReport {
        transported,
        expected,
        holds_exactly,
        classes_agree,
    })
}
