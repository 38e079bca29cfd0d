//! The example-algebra corpus used by tests, the self test ledger and the
//! command line tool, plus seeded random families for fuzzing.
//!
//! Degrees below are cohomological; a chain degree k corresponds to
//! cohomological degree -k.

use rand::Rng;

use crate::dgla::{Dgla, DglaBuilder};
use crate::forms::{PolyForm, TermKey};
use crate::linear::{vzero, QVec};
use crate::scalar::{q, qi};
use crate::simplicial::LieForm;

/// Abelian algebra on `n` degree-0 generators, zero differential.
pub fn abelian_points(n: usize) -> Dgla {
    let mut b = DglaBuilder::new();
    for i in 0..n {
        let name = format!("x{}", i + 1);
        b = b.generator(&name, 0);
    }
    b.build().expect("abelian algebra is valid")
}

/// One generator of chain degree k (cohomological -k), zero differential.
pub fn k_generator(k: i64) -> Dgla {
    DglaBuilder::new()
        .generator("g", -k)
        .build()
        .expect("valid")
}

/// x (deg 0), a, b (deg 1), d(x) = a, [x, a] = b. Nilpotency class 2.
pub fn xab() -> Dgla {
    DglaBuilder::new()
        .generator("x", 0)
        .generator("a", 1)
        .generator("b", 1)
        .differential("x", &[(qi(1), "a")])
        .bracket("x", "a", &[(qi(1), "b")])
        .build()
        .expect("valid")
}

/// The Maurer-Cartan element `-a - b/2` of [`xab`].
pub fn xab_tau() -> QVec {
    let mut v = vzero(3);
    v[1] = qi(-1);
    v[2] = q(-1, 2);
    v
}

/// Heisenberg algebra: x, y, z in degree 0 with [x, y] = z.
pub fn heisenberg() -> Dgla {
    DglaBuilder::new()
        .generator("x", 0)
        .generator("y", 0)
        .generator("z", 0)
        .bracket("x", "y", &[(qi(1), "z")])
        .build()
        .expect("valid")
}

/// Filiform algebra of the given class: e1..e(c+1) in degree 0 with
/// [e1, ei] = e(i+1) for 2 <= i <= c.
pub fn filiform(class: usize) -> Dgla {
    assert!(class >= 2);
    let mut b = DglaBuilder::new();
    for i in 1..=(class + 1) {
        b = b.generator(&format!("e{i}"), 0);
    }
    for i in 2..=class {
        let left = "e1".to_string();
        let right = format!("e{i}");
        let out = format!("e{}", i + 1);
        b = b.bracket(&left, &right, &[(qi(1), &out)]);
    }
    b.build().expect("valid")
}

/// Abelian acyclic pair: c (deg 0), e (deg 1), d(c) = e.
pub fn acyclic() -> Dgla {
    DglaBuilder::new()
        .generator("c", 0)
        .generator("e", 1)
        .differential("c", &[(qi(1), "e")])
        .build()
        .expect("valid")
}

/// Abelian: r (deg 1, closed) plus the acyclic pair c -> e; the ideal
/// spanned by {c, e} is acyclic.
pub fn acyclic_with_line() -> Dgla {
    DglaBuilder::new()
        .generator("r", 1)
        .generator("c", 0)
        .generator("e", 1)
        .differential("c", &[(qi(1), "e")])
        .build()
        .expect("valid")
}

/// u, v in chain degree 1 and w = [u, v] in chain degree 2; the smallest
/// algebra with a nonzero bracket on positive chain degrees.
pub fn uvw() -> Dgla {
    DglaBuilder::new()
        .generator("u", -1)
        .generator("v", -1)
        .generator("w", -2)
        .bracket("u", "v", &[(qi(1), "w")])
        .build()
        .expect("valid")
}

/// Free 2-step algebra on u (chain 1) and v (chain 2): w = [u, v] in
/// chain degree 3.
pub fn free12() -> Dgla {
    DglaBuilder::new()
        .generator("u", -1)
        .generator("v", -2)
        .generator("w", -3)
        .bracket("u", "v", &[(qi(1), "w")])
        .build()
        .expect("valid")
}

/// m (chain 0), u, p (chain 1) with [m, u] = p: mixed degrees, zero
/// differential, nontrivial action of degree zero on chain degree one.
pub fn mup() -> Dgla {
    DglaBuilder::new()
        .generator("m", 0)
        .generator("u", -1)
        .generator("p", -1)
        .bracket("m", "u", &[(qi(1), "p")])
        .build()
        .expect("valid")
}

/// Direct sum of [`xab`] and [`uvw`] (no cross brackets): carries both a
/// nonzero Maurer-Cartan element and positive-degree cycles, so twisted
/// base points see nontrivial higher homotopy.
pub fn xab_uvw_sum() -> Dgla {
    DglaBuilder::new()
        .generator("x", 0)
        .generator("a", 1)
        .generator("b", 1)
        .generator("u", -1)
        .generator("v", -1)
        .generator("w", -2)
        .differential("x", &[(qi(1), "a")])
        .bracket("x", "a", &[(qi(1), "b")])
        .bracket("u", "v", &[(qi(1), "w")])
        .build()
        .expect("valid")
}

/// The Maurer-Cartan element `-a - b/2` inside [`xab_uvw_sum`].
pub fn xab_uvw_sum_tau() -> QVec {
    let mut v = vzero(6);
    v[1] = qi(-1);
    v[2] = q(-1, 2);
    v
}

/// Class-3 tower with positive chain degrees: m (chain 0) acts on a string
/// of chain-1 generators, [m, u1] = u2, [m, u2] = u3.
pub fn tower3() -> Dgla {
    DglaBuilder::new()
        .generator("m", 0)
        .generator("u1", -1)
        .generator("u2", -1)
        .generator("u3", -1)
        .bracket("m", "u1", &[(qi(1), "u2")])
        .bracket("m", "u2", &[(qi(1), "u3")])
        .build()
        .expect("valid")
}

/// The named corpus, in deterministic order.
pub fn named() -> Vec<(&'static str, Dgla)> {
    vec![
        ("k1", k_generator(1)),
        ("k2", k_generator(2)),
        ("k3", k_generator(3)),
        ("xab", xab()),
        ("heisenberg", heisenberg()),
        ("filiform3", filiform(3)),
        ("filiform4", filiform(4)),
        ("uvw", uvw()),
        ("free12", free12()),
        ("mup", mup()),
        ("tower3", tower3()),
        ("acyclic", acyclic()),
    ]
}

pub fn by_name(name: &str) -> Option<Dgla> {
    named()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, l)| l)
}

/// Random small rational in [-2, 2] with denominator 1 or 2.
pub fn small_scalar<R: Rng>(rng: &mut R) -> crate::Scalar {
    q(rng.gen_range(-4..=4), rng.gen_range(1..=2))
}

/// Random homogeneous vector of the given cohomological degree.
pub fn random_vector<R: Rng>(l: &Dgla, degree: i64, rng: &mut R) -> QVec {
    let mut v = vzero(l.dim());
    for i in l.basis().indices_of_degree(degree) {
        v[i] = small_scalar(rng);
    }
    v
}

/// Random member of the xab family: d(x) = alpha a + beta b,
/// [x, a] = gamma b. Valid for all parameter choices.
pub fn random_xab_family<R: Rng>(rng: &mut R) -> Dgla {
    let alpha = qi(rng.gen_range(-2..=2));
    let beta = qi(rng.gen_range(-2..=2));
    let gamma = qi(rng.gen_range(1..=2));
    DglaBuilder::new()
        .generator("x", 0)
        .generator("a", 1)
        .generator("b", 1)
        .differential("x", &[(alpha, "a"), (beta, "b")])
        .bracket("x", "a", &[(gamma, "b")])
        .build()
        .expect("family is valid for all parameters")
}

/// Random two-step algebra: three degree-0 generators, two central
/// degree-0 generators, random antisymmetric products into the center.
pub fn random_two_step<R: Rng>(rng: &mut R) -> Dgla {
    let mut b = DglaBuilder::new()
        .generator("x1", 0)
        .generator("x2", 0)
        .generator("x3", 0)
        .generator("z1", 0)
        .generator("z2", 0);
    let names = ["x1", "x2", "x3"];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let c1 = qi(rng.gen_range(-2..=2));
            let c2 = qi(rng.gen_range(-2..=2));
            b = b.bracket(names[i], names[j], &[(c1, "z1"), (c2, "z2")]);
        }
    }
    b.build().expect("two-step family is valid")
}

/// Random filiform with nonzero rescaled structure constants; class is
/// preserved.
pub fn random_filiform<R: Rng>(class: usize, rng: &mut R) -> Dgla {
    let mut b = DglaBuilder::new();
    for i in 1..=(class + 1) {
        b = b.generator(&format!("e{i}"), 0);
    }
    for i in 2..=class {
        let c = qi(if rng.gen_bool(0.5) { 1 } else { 2 });
        let right = format!("e{i}");
        let out = format!("e{}", i + 1);
        b = b.bracket("e1", &right, &[(c, &out)]);
    }
    b.build().expect("valid")
}

/// Random degree-0 group simplex with small polynomial coefficients.
pub fn random_group_simplex<R: Rng>(l: &Dgla, level: usize, rng: &mut R) -> LieForm {
    let mut out = LieForm::zero(level);
    for b in 0..l.dim() {
        let form_degree = -l.degree(b);
        if form_degree < 0 || form_degree > level as i64 {
            continue;
        }
        if rng.gen_bool(0.5) {
            continue;
        }
        let p = form_degree as usize;
        // one random monomial of the right form degree
        let mut dts: Vec<u8> = (1..=level as u8).collect();
        while dts.len() > p {
            let k = rng.gen_range(0..dts.len());
            dts.remove(k);
        }
        let mut exps = vec![0u16; level];
        if level > 0 && rng.gen_bool(0.7) {
            let slot = rng.gen_range(0..level);
            exps[slot] = rng.gen_range(1..=2);
        }
        let form = PolyForm::from_term(level, TermKey { dts, exps }, small_scalar(rng));
        out = out.add(&LieForm::tensor(level, form, b));
    }
    out
}

/// A pool of fuzzing algebras with classes 1 through 4.
pub fn fuzz_pool<R: Rng>(rng: &mut R) -> Vec<Dgla> {
    vec![
        abelian_points(2),
        acyclic_with_line(),
        random_xab_family(rng),
        random_two_step(rng),
        random_filiform(3, rng),
        random_filiform(4, rng),
        mup(),
        uvw(),
    ]
}
