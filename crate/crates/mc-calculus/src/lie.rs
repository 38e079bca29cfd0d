//! Operations shared by every nilpotent dg Lie carrier: curvature, the
//! Baker-Campbell-Hausdorff product, the gauge action, and the constructive
//! lifting of gauge equivalences along surjections.
//!
//! A [`LieCarrier`] is anything with exact linear structure, a differential,
//! a bracket and a finite nilpotency class. Finite-dimensional algebras and
//! form-valued algebras both implement it, so the level-wise simplicial
//! operations are literally the same code as the algebra-level ones.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{One, Zero};
use thiserror::Error;

use crate::scalar::{factorial_scalar, Scalar};

pub trait LieCarrier {
    type Elt: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elt;
    fn is_zero(&self, a: &Self::Elt) -> bool;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn scale(&self, c: &Scalar, a: &Self::Elt) -> Self::Elt;
    fn diff(&self, a: &Self::Elt) -> Self::Elt;
    fn bracket(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    /// Least c such that all brackets of length > c vanish.
    fn nilpotency_class(&self) -> usize;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("precondition failed: the projected elements are not related by the given gauge")]
    PreconditionFailed,
    #[error("primitive oracle declined at filtration degree {0}")]
    OracleFailure(usize),
    #[error("lift did not close up exactly; inputs violate the hypotheses")]
    NotExact,
}

/// Curvature `d(tau) + [tau, tau]/2`; zero exactly when `tau` satisfies the
/// Maurer-Cartan equation.
pub fn curvature<C: LieCarrier>(c: &C, tau: &C::Elt) -> C::Elt {
    let half = Scalar::new(1.into(), 2.into());
    c.add(&c.diff(tau), &c.scale(&half, &c.bracket(tau, tau)))
}

pub fn is_mc<C: LieCarrier>(c: &C, tau: &C::Elt) -> bool {
    c.is_zero(&curvature(c, tau))
}

/// Twisted differential `d(x) + [tau, x]`.
pub fn twisted_diff<C: LieCarrier>(c: &C, tau: &C::Elt, x: &C::Elt) -> C::Elt {
    c.add(&c.diff(x), &c.bracket(tau, x))
}

/// One cached Dynkin term: coefficient times a left-nested bracket word in
/// the two arguments (false = first, true = second).
type BchTerm = (Scalar, Vec<bool>);

fn bch_terms(class: usize) -> Arc<Vec<BchTerm>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<BchTerm>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("bch cache poisoned");
    guard
        .entry(class)
        .or_insert_with(|| Arc::new(compute_bch_terms(class)))
        .clone()
}

/// Truncated free associative algebra on two generators: polynomials in
/// noncommuting words, used only to derive the BCH coefficients once per
/// nilpotency class.
type Ncp = HashMap<Vec<bool>, Scalar>;

fn ncp_mul(a: &Ncp, b: &Ncp, max_len: usize) -> Ncp {
    let mut out = Ncp::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.len() + wb.len() > max_len {
                continue;
            }
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let coeff = ca * cb;
            let entry = out.entry(w).or_insert_with(Scalar::zero);
            *entry += coeff;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn ncp_exp_generator(letter: bool, max_len: usize) -> Ncp {
    // exp of a single generator: sum of x^k / k!
    let mut out = Ncp::new();
    for k in 0..=max_len {
        out.insert(vec![letter; k], Scalar::one() / factorial_scalar(k));
    }
    out
}

fn compute_bch_terms(class: usize) -> Vec<BchTerm> {
    let max_len = class.max(1);
    let product = ncp_mul(
        &ncp_exp_generator(false, max_len),
        &ncp_exp_generator(true, max_len),
        max_len,
    );
    // u = product - 1, then log(1 + u) truncated
    let mut u = product;
    u.remove(&Vec::new());
    let mut log = Ncp::new();
    let mut power: Ncp = HashMap::from([(Vec::new(), Scalar::one())]);
    for k in 1..=max_len {
        power = ncp_mul(&power, &u, max_len);
        let sign = if k % 2 == 1 { Scalar::one() } else { -Scalar::one() };
        let coeff = sign / Scalar::from_integer(k.into());
        for (w, c) in &power {
            let entry = log.entry(w.clone()).or_insert_with(Scalar::zero);
            *entry += c * &coeff;
        }
    }
    log.retain(|_, v| !v.is_zero());
    // Dynkin-Specht-Wever: a homogeneous Lie element of degree n equals 1/n
    // times its left-to-right bracketing, word by word.
    let mut terms: Vec<BchTerm> = log
        .into_iter()
        .map(|(w, c)| {
            let n = w.len();
            (c / Scalar::from_integer(n.into()), w)
        })
        .collect();
    terms.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
    terms
}

/// Evaluate one left-nested bracket word on a pair of elements.
fn eval_word<C: LieCarrier>(c: &C, word: &[bool], x: &C::Elt, y: &C::Elt) -> C::Elt {
    let pick = |b: bool| if b { y.clone() } else { x.clone() };
    let mut acc = pick(word[0]);
    for &letter in &word[1..] {
        acc = c.bracket(&acc, &pick(letter));
    }
    acc
}

/// Baker-Campbell-Hausdorff product `log(exp x * exp y)`, exact because the
/// Dynkin series truncates at the nilpotency class.
pub fn bch<C: LieCarrier>(c: &C, x: &C::Elt, y: &C::Elt) -> C::Elt {
    let class = c.nilpotency_class();
    if class == 0 {
        return c.zero();
    }
    let mut acc = c.zero();
    for (coeff, word) in bch_terms(class).iter() {
        let v = eval_word(c, word, x, y);
        if !c.is_zero(&v) {
            acc = c.add(&acc, &c.scale(coeff, &v));
        }
    }
    acc
}

/// Inverse for the BCH product.
pub fn bch_inverse<C: LieCarrier>(c: &C, x: &C::Elt) -> C::Elt {
    c.scale(&-Scalar::one(), x)
}

/// Group commutator `x * y * x^-1 * y^-1` with respect to the BCH product.
pub fn bch_commutator<C: LieCarrier>(c: &C, x: &C::Elt, y: &C::Elt) -> C::Elt {
    let a = bch(c, x, y);
    let b = bch(c, &a, &bch_inverse(c, x));
    bch(c, &b, &bch_inverse(c, y))
}

/// Gauge action of a degree-0 element on a Maurer-Cartan element:
/// `x . tau = tau - sum_k ad_x^k (d_tau x) / (k+1)!`.
pub fn gauge_act<C: LieCarrier>(c: &C, x: &C::Elt, tau: &C::Elt) -> C::Elt {
    let mut result = tau.clone();
    let mut term = twisted_diff(c, tau, x);
    let mut k = 0usize;
    while !c.is_zero(&term) && k <= c.nilpotency_class() + 1 {
        let coeff = -(Scalar::one() / factorial_scalar(k + 1));
        result = c.add(&result, &c.scale(&coeff, &term));
        term = c.bracket(x, &term);
        k += 1;
    }
    result
}

/// True when `x` fixes `tau` under the gauge action.
pub fn stabilizes<C: LieCarrier>(c: &C, x: &C::Elt, tau: &C::Elt) -> bool {
    gauge_act(c, x, tau) == *tau
}

/// Constructive lifting of a gauge equivalence along a surjection.
///
/// Given carriers `L -f-> L'` with a linear `section` of `f`, Maurer-Cartan
/// elements `tau, rho` in `L`, and `y` in the gauge group of `L'` with
/// `f(tau) = y . f(rho)`, produce `x` with `tau = x . rho` and `f(x) = y`.
///
/// The induction solves one filtration degree at a time; at degree `n` the
/// `primitive_oracle` receives the current defect (a degree-1 element of the
/// n-th filtration layer of the kernel, closed modulo the next layer) and
/// must return a degree-0 primitive in the same layer of the kernel. The
/// caller guarantees the relevant cohomology vanishing by supplying a total
/// oracle; `OracleFailure` signals a violated hypothesis.
pub fn gauge_lift<L, P>(
    ambient: &L,
    quotient: &P,
    project: impl Fn(&L::Elt) -> P::Elt,
    section: impl Fn(&P::Elt) -> L::Elt,
    mut primitive_oracle: impl FnMut(usize, &L::Elt) -> Option<L::Elt>,
    tau: &L::Elt,
    rho: &L::Elt,
    y: &P::Elt,
) -> Result<L::Elt, LiftError>
where
    L: LieCarrier,
    P: LieCarrier,
{
    let projected = gauge_act(quotient, y, &project(rho));
    if projected != project(tau) {
        return Err(LiftError::PreconditionFailed);
    }
    let mut x = section(y);
    for n in 1..=ambient.nilpotency_class() {
        let defect = ambient.sub(&gauge_act(ambient, &x, rho), tau);
        if ambient.is_zero(&defect) {
            break;
        }
        let c = primitive_oracle(n, &defect).ok_or(LiftError::OracleFailure(n))?;
        x = ambient.add(&x, &c);
    }
    if gauge_act(ambient, &x, rho) != *tau {
        return Err(LiftError::NotExact);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    /// A tiny abelian carrier over Q^2 with d(e0) = e1, trivial bracket.
    struct Pair;

    impl LieCarrier for Pair {
        type Elt = [Scalar; 2];

        fn zero(&self) -> Self::Elt {
            [Scalar::zero(), Scalar::zero()]
        }
        fn is_zero(&self, a: &Self::Elt) -> bool {
            a[0].is_zero() && a[1].is_zero()
        }
        fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
            [&a[0] + &b[0], &a[1] + &b[1]]
        }
        fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
            [&a[0] - &b[0], &a[1] - &b[1]]
        }
        fn scale(&self, c: &Scalar, a: &Self::Elt) -> Self::Elt {
            [c * &a[0], c * &a[1]]
        }
        fn diff(&self, a: &Self::Elt) -> Self::Elt {
            [Scalar::zero(), a[0].clone()]
        }
        fn bracket(&self, _a: &Self::Elt, _b: &Self::Elt) -> Self::Elt {
            self.zero()
        }
        fn nilpotency_class(&self) -> usize {
            1
        }
    }

    #[test]
    fn bch_terms_match_known_coefficients() {
        // The words are linearly dependent as brackets, so only evaluated
        // combinations are canonical. In the Hall basis of degree <= 3 the
        // series is x + y + [x,y]/2 - [[x,y],x]/12 + [[x,y],y]/12.
        let terms = bch_terms(3);
        let find = |w: &[bool]| -> Scalar {
            terms
                .iter()
                .find(|(_, word)| word == w)
                .map(|(c, _)| c.clone())
                .unwrap_or_else(Scalar::zero)
        };
        assert_eq!(find(&[false]), qi(1));
        assert_eq!(find(&[true]), qi(1));
        // coefficient of [x,y]: words xy and yx evaluate to [x,y] and -[x,y]
        assert_eq!(find(&[false, true]) - find(&[true, false]), q(1, 2));
        // coefficient of [[x,y],x]: words xyx (+) and yxx (-); the words
        // xxy, yyx bracket to zero on the inside and do not contribute
        assert_eq!(
            find(&[false, true, false]) - find(&[true, false, false]),
            q(-1, 12)
        );
        // coefficient of [[x,y],y]: words xyy (+) and yxy (-)
        assert_eq!(
            find(&[false, true, true]) - find(&[true, false, true]),
            q(1, 12)
        );
        // nothing beyond the class
        assert!(terms.iter().all(|(_, w)| w.len() <= 3));
    }

    #[test]
    fn abelian_gauge_action_is_translation_by_boundaries() {
        let c = Pair;
        let tau = [Scalar::zero(), qi(3)];
        let x = [qi(2), Scalar::zero()];
        // x . tau = tau - d(x)
        assert_eq!(gauge_act(&c, &x, &tau), [Scalar::zero(), qi(1)]);
        assert!(!stabilizes(&c, &x, &tau));
        assert!(stabilizes(&c, &[Scalar::zero(), qi(5)], &tau));
    }

    #[test]
    fn gauge_lift_with_identity_projection_returns_the_given_gauge() {
        let c = Pair;
        let rho = [Scalar::zero(), qi(1)];
        let y = [qi(4), Scalar::zero()];
        let tau = gauge_act(&c, &y, &rho);
        let x = gauge_lift(
            &c,
            &c,
            |e| e.clone(),
            |e| e.clone(),
            |_, _| None,
            &tau,
            &rho,
            &y,
        )
        .unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn gauge_lift_rejects_unrelated_inputs() {
        let c = Pair;
        let rho = [Scalar::zero(), qi(1)];
        let tau = [Scalar::zero(), qi(2)];
        let err = gauge_lift(
            &c,
            &c,
            |e| e.clone(),
            |e| e.clone(),
            |_, _| None,
            &tau,
            &rho,
            &c.zero(),
        )
        .unwrap_err();
        assert_eq!(err, LiftError::PreconditionFailed);
    }
}
