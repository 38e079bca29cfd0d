//! Finite-dimensional nilpotent dg Lie algebras over the rationals.
//!
//! An algebra is given by a graded basis, a degree +1 differential, structure
//! constants for the bracket, and a filtration (by default the lower central
//! series, recomputed at construction). Nilpotency makes every series in the
//! crate a finite sum, so the gauge action, BCH product and the constructive
//! lifting procedure are all exact.
//!
//! Sign conventions (fixed crate-wide, see README): cohomological grading,
//! graded antisymmetry `[x,y] = -(-1)^{|x||y|}[y,x]`, derivation rule
//! `d[x,y] = [dx,y] + (-1)^{|x|}[x,dy]`, and the cyclic graded Jacobi
//! identity.

use std::fmt;

use num::Zero;
use thiserror::Error;

use crate::lie::{self, LieCarrier, LiftError};
use crate::linear::{
    solve_linear, vadd, vis_zero, vscale, vsub, vzero, CochainComplex, GradedBasis, LinearError,
    QMatrix, QVec, Subspace,
};
use crate::scalar::{koszul_sign, sign_pow, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum DglaError {
    #[error("element is not homogeneous of degree {expected}")]
    DegreeMismatch { expected: i64 },
    #[error("element does not satisfy the Maurer-Cartan equation")]
    NotMaurerCartan,
    #[error("bracket is not nilpotent: lower central series stabilizes at dimension {0}")]
    NotNilpotent(usize),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),
    #[error("duplicate definition: {0}")]
    DuplicateDefinition(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

/// A validated nilpotent dg Lie algebra with its filtration.
#[derive(Clone, Debug)]
pub struct Dgla {
    basis: GradedBasis,
    d: QMatrix,
    bracket: Vec<Vec<QVec>>,
    filtration: Vec<Subspace>,
    class: usize,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
    pub nilpotency_class: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &'static str, witness: Option<String>) {
        self.checks.push(CheckOutcome {
            name,
            pass: witness.is_none(),
            witness,
        });
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.checks {
            match &c.witness {
                None => out.push(format!("PASS {}", c.name)),
                Some(w) => out.push(format!("FAIL {} witness: {}", c.name, w)),
            }
        }
        if let Some(c) = self.nilpotency_class {
            out.push(format!("nilpotency class: {c}"));
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// A degree-1 solution of the Maurer-Cartan equation.
#[derive(Clone, Debug, PartialEq)]
pub struct McElement(pub QVec);

/// A degree-0 element; every such element is a gauge group member.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement(pub QVec);

impl Dgla {
    /// Construct without validation; used by the builder, the parser and the
    /// fault-injection tests. `filtration` of `None` requests the lower
    /// central series.
    pub fn new_unchecked(
        basis: GradedBasis,
        d: QMatrix,
        bracket: Vec<Vec<QVec>>,
        filtration: Option<Vec<Subspace>>,
    ) -> Result<Self, DglaError> {
        let layers = match filtration {
            Some(layers) => layers,
            None => lower_central_series(&basis, &bracket)?,
        };
        let class = layers.len();
        Ok(Dgla {
            basis,
            d,
            bracket,
            filtration: layers,
            class,
        })
    }

    /// Construct and validate; the usual entry point.
    pub fn new(
        basis: GradedBasis,
        d: QMatrix,
        bracket: Vec<Vec<QVec>>,
        filtration: Option<Vec<Subspace>>,
    ) -> Result<Self, DglaError> {
        let l = Self::new_unchecked(basis, d, bracket, filtration)?;
        let report = l.validate();
        if !report.is_valid() {
            let first = report
                .checks
                .iter()
                .find(|c| !c.pass)
                .expect("invalid report has a failing check");
            return Err(DglaError::InvalidAlgebra(format!(
                "{} ({})",
                first.name,
                first.witness.as_deref().unwrap_or("no witness")
            )));
        }
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis.degree(i)
    }

    pub fn differential_matrix(&self) -> &QMatrix {
        &self.d
    }

    pub fn nilpotency_class(&self) -> usize {
        self.class
    }

    pub fn filtration(&self) -> &[Subspace] {
        &self.filtration
    }

    /// Filtration layer `F^p` (1-based); zero beyond the class.
    pub fn filtration_layer(&self, p: usize) -> Subspace {
        if p == 0 || p > self.filtration.len() {
            if p == 0 {
                Subspace::full(self.dim())
            } else {
                Subspace::zero(self.dim())
            }
        } else {
            self.filtration[p - 1].clone()
        }
    }

    pub fn d_vec(&self, v: &QVec) -> QVec {
        self.d.apply(v).expect("vector length matches basis")
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket_vec(&self, u: &QVec, v: &QVec) -> QVec {
        let mut out = vzero(self.dim());
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                out = vadd(&out, &vscale(&c, &self.bracket[i][j]));
            }
        }
        out
    }

    pub fn is_homogeneous(&self, v: &QVec, degree: i64) -> bool {
        self.basis.is_homogeneous(v, degree)
    }

    pub fn render(&self, v: &QVec) -> String {
        self.basis.render(v)
    }

    /// The underlying cochain complex (for cohomology computations).
    pub fn cochain_complex(&self) -> CochainComplex {
        CochainComplex::new(self.basis.clone(), self.d.clone())
            .expect("validated algebra has a valid complex")
    }

    /// Full structural validation; failures are data, with witnesses.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();
        let sym = |i: usize| self.basis.symbol(i).to_string();

        // d raises degree by exactly one
        let mut witness = None;
        'ddeg: for j in 0..n {
            for i in 0..n {
                if !self.d.get(i, j).is_zero() && self.degree(i) != self.degree(j) + 1 {
                    witness = Some(format!("d({}) hits {}", sym(j), sym(i)));
                    break 'ddeg;
                }
            }
        }
        report.push("d-degree", witness);

        // d squared
        let mut witness = None;
        for j in 0..n {
            let ddj = self.d_vec(&self.d.column(j));
            if !vis_zero(&ddj) {
                witness = Some(format!("d(d({})) = {}", sym(j), self.render(&ddj)));
                break;
            }
        }
        report.push("d-squared", witness);

        // bracket degree
        let mut witness = None;
        'bdeg: for i in 0..n {
            for j in 0..n {
                let expected = self.degree(i) + self.degree(j);
                if !self.basis.is_homogeneous(&self.bracket[i][j], expected) {
                    witness = Some(format!("[{}, {}]", sym(i), sym(j)));
                    break 'bdeg;
                }
            }
        }
        report.push("bracket-degree", witness);

        // graded antisymmetry
        let mut witness = None;
        'anti: for i in 0..n {
            for j in 0..n {
                let s = koszul_sign(self.degree(i), self.degree(j));
                let lhs = vadd(
                    &self.bracket[i][j],
                    &vscale(&s, &self.bracket[j][i]),
                );
                if !vis_zero(&lhs) {
                    witness = Some(format!("({}, {})", sym(i), sym(j)));
                    break 'anti;
                }
            }
        }
        report.push("antisymmetry", witness);

        // derivation rule
        let mut witness = None;
        'der: for i in 0..n {
            for j in 0..n {
                let lhs = self.d_vec(&self.bracket[i][j]);
                let rhs = vadd(
                    &self.bracket_vec(&self.d.column(i), &self.basis.unit(j)),
                    &vscale(
                        &sign_pow((self.degree(i).rem_euclid(2)) as usize),
                        &self.bracket_vec(&self.basis.unit(i), &self.d.column(j)),
                    ),
                );
                if lhs != rhs {
                    witness = Some(format!("({}, {})", sym(i), sym(j)));
                    break 'der;
                }
            }
        }
        report.push("derivation", witness);

        // graded Jacobi, cyclic form
        let mut witness = None;
        'jac: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (di, dj, dk) = (self.degree(i), self.degree(j), self.degree(k));
                    let ei = self.basis.unit(i);
                    let ej = self.basis.unit(j);
                    let ek = self.basis.unit(k);
                    let mut total = vscale(
                        &koszul_sign(di, dk),
                        &self.bracket_vec(&ei, &self.bracket_vec(&ej, &ek)),
                    );
                    total = vadd(
                        &total,
                        &vscale(
                            &koszul_sign(dj, di),
                            &self.bracket_vec(&ej, &self.bracket_vec(&ek, &ei)),
                        ),
                    );
                    total = vadd(
                        &total,
                        &vscale(
                            &koszul_sign(dk, dj),
                            &self.bracket_vec(&ek, &self.bracket_vec(&ei, &ej)),
                        ),
                    );
                    if !vis_zero(&total) {
                        witness = Some(format!("({}, {}, {})", sym(i), sym(j), sym(k)));
                        break 'jac;
                    }
                }
            }
        }
        report.push("jacobi", witness);

        // filtration: F^1 is everything, layers nested
        let mut witness = None;
        if self.filtration.first().map(|f| f.dim()) != Some(n) && n > 0 {
            witness = Some("F^1 is not the whole space".to_string());
        } else {
            for p in 1..self.filtration.len() {
                if !self.filtration[p - 1].contains_subspace(&self.filtration[p]) {
                    witness = Some(format!("F^{} is not inside F^{}", p + 1, p));
                    break;
                }
            }
        }
        report.push("filtration-nested", witness);

        // bracket compatibility [F^p, F^q] in F^(p+q)
        let mut witness = None;
        'fb: for p in 1..=self.filtration.len() {
            for q in 1..=self.filtration.len() {
                let target = self.filtration_layer(p + q);
                for u in self.filtration_layer(p).basis() {
                    for v in self.filtration_layer(q).basis() {
                        let b = self.bracket_vec(u, v);
                        if !vis_zero(&b) && !target.contains(&b) {
                            witness = Some(format!("[F^{p}, F^{q}] escapes F^{}", p + q));
                            break 'fb;
                        }
                    }
                }
            }
        }
        report.push("filtration-bracket", witness);

        // differential preserves each layer
        let mut witness = None;
        'fd: for p in 1..=self.filtration.len() {
            let layer = self.filtration_layer(p);
            for v in layer.basis() {
                if !layer.contains(&self.d_vec(v)) {
                    witness = Some(format!("d(F^{p}) escapes F^{p}"));
                    break 'fd;
                }
            }
        }
        report.push("filtration-differential", witness);

        report.nilpotency_class = Some(self.class);
        report
    }

    /// Curvature `d(tau) + [tau,tau]/2` of a degree-1 element.
    pub fn curvature(&self, tau: &QVec) -> Result<QVec, DglaError> {
        if !self.is_homogeneous(tau, 1) {
            return Err(DglaError::DegreeMismatch { expected: 1 });
        }
        Ok(lie::curvature(self, tau))
    }

    pub fn is_mc(&self, tau: &QVec) -> bool {
        self.is_homogeneous(tau, 1) && vis_zero(&lie::curvature(self, tau))
    }

    pub fn mc_element(&self, tau: QVec) -> Result<McElement, DglaError> {
        if !self.is_homogeneous(&tau, 1) {
            return Err(DglaError::DegreeMismatch { expected: 1 });
        }
        if !vis_zero(&lie::curvature(self, &tau)) {
            return Err(DglaError::NotMaurerCartan);
        }
        Ok(McElement(tau))
    }

    pub fn gauge_element(&self, x: QVec) -> Result<GaugeElement, DglaError> {
        if !self.is_homogeneous(&x, 0) {
            return Err(DglaError::DegreeMismatch { expected: 0 });
        }
        Ok(GaugeElement(x))
    }

    /// The algebra with the same bracket and twisted differential
    /// `d + ad_tau`; the filtration and nilpotency class are unchanged.
    pub fn twist(&self, tau: &QVec) -> Result<Dgla, DglaError> {
        if !self.is_homogeneous(tau, 1) {
            return Err(DglaError::DegreeMismatch { expected: 1 });
        }
        if !vis_zero(&lie::curvature(self, tau)) {
            return Err(DglaError::NotMaurerCartan);
        }
        let n = self.dim();
        let mut d = QMatrix::zero(n, n);
        for j in 0..n {
            let col = vadd(
                &self.d.column(j),
                &self.bracket_vec(tau, &self.basis.unit(j)),
            );
            for (i, v) in col.into_iter().enumerate() {
                d.set(i, j, v);
            }
        }
        Ok(Dgla {
            basis: self.basis.clone(),
            d,
            bracket: self.bracket.clone(),
            filtration: self.filtration.clone(),
            class: self.class,
        })
    }

    /// Baker-Campbell-Hausdorff product of two degree-0 elements.
    pub fn bch(&self, x: &QVec, y: &QVec) -> Result<QVec, DglaError> {
        for v in [x, y] {
            if !self.is_homogeneous(v, 0) {
                return Err(DglaError::DegreeMismatch { expected: 0 });
            }
        }
        Ok(lie::bch(self, x, y))
    }

    /// Gauge action of a degree-0 element on a Maurer-Cartan element.
    pub fn gauge_act(&self, x: &QVec, tau: &QVec) -> Result<QVec, DglaError> {
        if !self.is_homogeneous(x, 0) {
            return Err(DglaError::DegreeMismatch { expected: 0 });
        }
        if !self.is_mc(tau) {
            return Err(DglaError::NotMaurerCartan);
        }
        Ok(lie::gauge_act(self, x, tau))
    }

    /// True iff the gauge action of `x` fixes `tau`.
    pub fn stabilizer_check(&self, x: &QVec, tau: &QVec) -> Result<bool, DglaError> {
        if !self.is_homogeneous(x, 0) {
            return Err(DglaError::DegreeMismatch { expected: 0 });
        }
        if !self.is_mc(tau) {
            return Err(DglaError::NotMaurerCartan);
        }
        Ok(lie::gauge_act(self, x, tau) == *tau)
    }

    /// The cone: the algebra on `sL + L` with `d(sx) = x - s(dx)`,
    /// `[sx, y] = s[x, y]` and `[sx, sy] = 0`, containing `L` as a
    /// sub-dg-Lie-algebra.
    pub fn cone(&self) -> Result<ConeDgla, DglaError> {
        let n = self.dim();
        let mut items: Vec<(String, i64)> = Vec::with_capacity(2 * n);
        for i in 0..n {
            items.push((format!("s{}", self.basis.symbol(i)), self.degree(i) - 1));
        }
        for i in 0..n {
            items.push((self.basis.symbol(i).to_string(), self.degree(i)));
        }
        let item_refs: Vec<(&str, i64)> =
            items.iter().map(|(s, d)| (s.as_str(), *d)).collect();
        let basis = GradedBasis::new(&item_refs).map_err(DglaError::InvalidAlgebra)?;

        let dim = 2 * n;
        let suspend = |v: &QVec| -> QVec {
            let mut out = vzero(dim);
            out[..n].clone_from_slice(v);
            out
        };
        let include = |v: &QVec| -> QVec {
            let mut out = vzero(dim);
            out[n..].clone_from_slice(v);
            out
        };

        let mut d = QMatrix::zero(dim, dim);
        for j in 0..n {
            // d(s e_j) = e_j - s(d e_j)
            let col = vsub(&include(&self.basis.unit(j)), &suspend(&self.d.column(j)));
            for (i, v) in col.into_iter().enumerate() {
                d.set(i, j, v);
            }
            // d(e_j) as in L
            let col = include(&self.d.column(j));
            for (i, v) in col.into_iter().enumerate() {
                d.set(i, j + n, v);
            }
        }

        let mut bracket = vec![vec![vzero(dim); dim]; dim];
        for i in 0..n {
            for j in 0..n {
                let b = &self.bracket[i][j];
                // [e_i, e_j]
                bracket[i + n][j + n] = include(b);
                // [s e_i, e_j] = s [e_i, e_j]
                bracket[i][j + n] = suspend(b);
                // [e_j, s e_i] by graded antisymmetry
                let sign = -koszul_sign(self.degree(j), self.degree(i) - 1);
                bracket[j + n][i] = vscale(&sign, &suspend(b));
                // [s e_i, s e_j] = 0 already
            }
        }

        let algebra = Dgla::new(basis, d, bracket, None)?;
        Ok(ConeDgla {
            algebra,
            source_dim: n,
        })
    }

    /// Lift a gauge equivalence along a surjective dg Lie map. See
    /// [`lie::gauge_lift`] for the contract of the primitive oracle.
    pub fn gauge_lift_along(
        &self,
        map: &DglaMap,
        primitive_oracle: impl FnMut(usize, &QVec) -> Option<QVec>,
        tau: &QVec,
        rho: &QVec,
        y: &QVec,
    ) -> Result<QVec, DglaError> {
        if !self.is_mc(tau) || !self.is_mc(rho) {
            return Err(DglaError::NotMaurerCartan);
        }
        if !map.target.is_homogeneous(y, 0) {
            return Err(DglaError::DegreeMismatch { expected: 0 });
        }
        let section = map.section()?;
        let x = lie::gauge_lift(
            self,
            &map.target,
            |v| map.apply(v),
            |w| section.apply(w).expect("section shape"),
            primitive_oracle,
            tau,
            rho,
            y,
        )?;
        Ok(x)
    }
}

impl LieCarrier for Dgla {
    type Elt = QVec;

    fn zero(&self) -> QVec {
        vzero(self.dim())
    }
    fn is_zero(&self, a: &QVec) -> bool {
        vis_zero(a)
    }
    fn add(&self, a: &QVec, b: &QVec) -> QVec {
        vadd(a, b)
    }
    fn sub(&self, a: &QVec, b: &QVec) -> QVec {
        vsub(a, b)
    }
    fn scale(&self, c: &Scalar, a: &QVec) -> QVec {
        vscale(c, a)
    }
    fn diff(&self, a: &QVec) -> QVec {
        self.d_vec(a)
    }
    fn bracket(&self, a: &QVec, b: &QVec) -> QVec {
        self.bracket_vec(a, b)
    }
    fn nilpotency_class(&self) -> usize {
        self.class
    }
}

/// The cone over an algebra, with bookkeeping for the two inclusions.
#[derive(Clone, Debug)]
pub struct ConeDgla {
    pub algebra: Dgla,
    source_dim: usize,
}

impl ConeDgla {
    /// Image of a vector of `L` under the inclusion `L -> cone`.
    pub fn include(&self, v: &QVec) -> QVec {
        let mut out = vzero(self.algebra.dim());
        out[self.source_dim..].clone_from_slice(v);
        out
    }

    /// Image of a vector of `L` under the suspension.
    pub fn suspend(&self, v: &QVec) -> QVec {
        let mut out = vzero(self.algebra.dim());
        out[..self.source_dim].clone_from_slice(v);
        out
    }
}

/// Lower central series of the bracket: `F^1 = L`,
/// `F^(k+1) = span [L, F^k]`. Errors when the series stabilizes above zero.
pub fn lower_central_series(
    basis: &GradedBasis,
    bracket: &[Vec<QVec>],
) -> Result<Vec<Subspace>, DglaError> {
    let n = basis.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut layers = vec![Subspace::full(n)];
    loop {
        let prev = layers.last().expect("at least F^1");
        let mut spanning = Vec::new();
        for i in 0..n {
            for w in prev.basis() {
                let mut b = vzero(n);
                for (j, c) in w.iter().enumerate() {
                    if !c.is_zero() {
                        b = vadd(&b, &vscale(c, &bracket[i][j]));
                    }
                }
                if !vis_zero(&b) {
                    spanning.push(b);
                }
            }
        }
        let next = Subspace::from_spanning(n, &spanning);
        if next.is_zero() {
            return Ok(layers);
        }
        if next.dim() == prev.dim() || layers.len() > n {
            return Err(DglaError::NotNilpotent(next.dim()));
        }
        layers.push(next);
    }
}

/// A linear map between algebras, checked to be a dg Lie morphism on demand.
#[derive(Clone, Debug)]
pub struct DglaMap {
    pub source: Dgla,
    pub target: Dgla,
    pub matrix: QMatrix,
}

impl DglaMap {
    pub fn new(source: Dgla, target: Dgla, matrix: QMatrix) -> Result<Self, DglaError> {
        if matrix.rows != target.dim() || matrix.cols != source.dim() {
            return Err(DglaError::Linear(LinearError::DimensionMismatch {
                expected: target.dim(),
                got: matrix.rows,
            }));
        }
        let map = DglaMap {
            source,
            target,
            matrix,
        };
        map.check_morphism()?;
        Ok(map)
    }

    fn check_morphism(&self) -> Result<(), DglaError> {
        let n = self.source.dim();
        for j in 0..n {
            let e = self.source.basis().unit(j);
            // degree preservation
            let fe = self.apply(&e);
            if !self
                .target
                .is_homogeneous(&fe, self.source.degree(j))
            {
                return Err(DglaError::InvalidAlgebra(format!(
                    "map does not preserve degree at {}",
                    self.source.basis().symbol(j)
                )));
            }
            // commutes with d
            let lhs = self.apply(&self.source.d_vec(&e));
            let rhs = self.target.d_vec(&fe);
            if lhs != rhs {
                return Err(DglaError::InvalidAlgebra(format!(
                    "map does not commute with d at {}",
                    self.source.basis().symbol(j)
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ei = self.source.basis().unit(i);
                let ej = self.source.basis().unit(j);
                let lhs = self.apply(&self.source.bracket_vec(&ei, &ej));
                let rhs = self
                    .target
                    .bracket_vec(&self.apply(&ei), &self.apply(&ej));
                if lhs != rhs {
                    return Err(DglaError::InvalidAlgebra(format!(
                        "map does not respect brackets at ({}, {})",
                        self.source.basis().symbol(i),
                        self.source.basis().symbol(j)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &QVec) -> QVec {
        self.matrix.apply(v).expect("shape checked at construction")
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }

    pub fn kernel_subspace(&self) -> Subspace {
        Subspace::from_spanning(self.source.dim(), &self.matrix.kernel_basis())
    }

    /// A linear section, from the first-pivot particular solutions on the
    /// target basis. Errors when the map is not surjective.
    pub fn section(&self) -> Result<QMatrix, DglaError> {
        if !self.is_surjective() {
            return Err(DglaError::NotSurjective);
        }
        let cols: Result<Vec<QVec>, DglaError> = (0..self.target.dim())
            .map(|i| {
                solve_linear(&self.matrix, &self.target.basis().unit(i))?
                    .ok_or(DglaError::NotSurjective)
            })
            .collect();
        Ok(QMatrix::from_columns(self.source.dim(), &cols?))
    }
}

/// Convenience constructor used by the corpus, tests and the file parser.
#[derive(Default)]
pub struct DglaBuilder {
    items: Vec<(String, i64)>,
    diffs: Vec<(String, Vec<(Scalar, String)>)>,
    brackets: Vec<(String, String, Vec<(Scalar, String)>)>,
    filtration: Option<Vec<Vec<String>>>,
}

impl DglaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a generator with its cohomological degree.
    pub fn generator(mut self, symbol: &str, degree: i64) -> Self {
        self.items.push((symbol.to_string(), degree));
        self
    }

    pub fn differential(mut self, symbol: &str, value: &[(Scalar, &str)]) -> Self {
        self.diffs.push((
            symbol.to_string(),
            value.iter().map(|(c, s)| (c.clone(), s.to_string())).collect(),
        ));
        self
    }

    pub fn bracket(mut self, left: &str, right: &str, value: &[(Scalar, &str)]) -> Self {
        self.brackets.push((
            left.to_string(),
            right.to_string(),
            value.iter().map(|(c, s)| (c.clone(), s.to_string())).collect(),
        ));
        self
    }

    /// Optional custom filtration layer `F^p` for `p >= 2` as a sub-basis.
    pub fn filtration_layers(mut self, layers: Vec<Vec<String>>) -> Self {
        self.filtration = Some(layers);
        self
    }

    pub fn build_unchecked(self) -> Result<Dgla, DglaError> {
        let item_refs: Vec<(&str, i64)> = self
            .items
            .iter()
            .map(|(s, d)| (s.as_str(), *d))
            .collect();
        let basis = GradedBasis::new(&item_refs)
            .map_err(DglaError::DuplicateDefinition)?;
        let n = basis.dim();

        let resolve = |sym: &str| -> Result<usize, DglaError> {
            basis
                .index_of(sym)
                .ok_or_else(|| DglaError::UnknownSymbol(sym.to_string()))
        };
        let combo = |value: &[(Scalar, String)]| -> Result<QVec, DglaError> {
            let mut v = vzero(n);
            for (c, sym) in value {
                let i = resolve(sym)?;
                v[i] += c.clone();
            }
            Ok(v)
        };

        let mut d = QMatrix::zero(n, n);
        let mut d_seen = vec![false; n];
        for (sym, value) in &self.diffs {
            let j = resolve(sym)?;
            if d_seen[j] {
                return Err(DglaError::DuplicateDefinition(format!("d {sym}")));
            }
            d_seen[j] = true;
            for (i, c) in combo(value)?.into_iter().enumerate() {
                d.set(i, j, c);
            }
        }

        let mut bracket = vec![vec![vzero(n); n]; n];
        let mut given = vec![vec![false; n]; n];
        for (ls, rs, value) in &self.brackets {
            let i = resolve(ls)?;
            let j = resolve(rs)?;
            if given[i][j] {
                return Err(DglaError::DuplicateDefinition(format!("[{ls}, {rs}]")));
            }
            let v = combo(value)?;
            given[i][j] = true;
            bracket[i][j] = v.clone();
            if i != j && !given[j][i] {
                // fill the partner by graded antisymmetry; an explicit later
                // definition overrides and validation decides
                let s = -koszul_sign(basis.degree(i), basis.degree(j));
                bracket[j][i] = vscale(&s, &v);
            }
        }
        // A later explicit definition of the partner replaces the derived one.
        for (ls, rs, value) in &self.brackets {
            let i = resolve(ls)?;
            let j = resolve(rs)?;
            if given[i][j] {
                bracket[i][j] = combo(value)?;
            }
        }

        let filtration = match &self.filtration {
            None => None,
            Some(layers) => {
                let mut subs = vec![Subspace::full(n)];
                for layer in layers {
                    let vs: Result<Vec<QVec>, DglaError> = layer
                        .iter()
                        .map(|sym| Ok(basis.unit(resolve(sym)?)))
                        .collect();
                    subs.push(Subspace::from_spanning(n, &vs?));
                }
                while subs.last().map(|s| s.is_zero()) == Some(true) {
                    subs.pop();
                }
                Some(subs)
            }
        };

        Dgla::new_unchecked(basis, d, bracket, filtration)
    }

    pub fn build(self) -> Result<Dgla, DglaError> {
        let l = self.build_unchecked()?;
        let report = l.validate();
        if !report.is_valid() {
            let first = report.checks.iter().find(|c| !c.pass).unwrap();
            return Err(DglaError::InvalidAlgebra(format!(
                "{} ({})",
                first.name,
                first.witness.as_deref().unwrap_or("no witness")
            )));
        }
        Ok(l)
    }
}

impl fmt::Display for McElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "McElement")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linear::vneg;
    use crate::scalar::{q, qi};

    #[test]
    fn abelian_validates_with_class_one() {
        let l = corpus::abelian_points(2);
        let report = l.validate();
        assert!(report.is_valid(), "{report}");
        assert_eq!(l.nilpotency_class(), 1);
        assert!(l.filtration_layer(2).is_zero());
    }

    #[test]
    fn zero_algebra_is_accepted_with_class_zero() {
        let l = DglaBuilder::new().build().unwrap();
        assert_eq!(l.dim(), 0);
        assert_eq!(l.nilpotency_class(), 0);
        assert!(l.validate().is_valid());
        assert_eq!(l.bch(&vec![], &vec![]).unwrap(), Vec::<Scalar>::new());
    }

    #[test]
    fn xab_validates_with_class_two_and_correct_series() {
        let l = corpus::xab();
        let report = l.validate();
        assert!(report.is_valid(), "{report}");
        assert_eq!(l.nilpotency_class(), 2);
        // F^2 = span{b}, F^3 = 0
        let f2 = l.filtration_layer(2);
        assert_eq!(f2.dim(), 1);
        let b = l.basis().unit(l.basis().index_of("b").unwrap());
        assert!(f2.contains(&b));
        assert!(l.filtration_layer(3).is_zero());
    }

    #[test]
    fn injected_derivation_fault_is_caught_with_witness() {
        // d(b) = a forces the derivation identity d[x,a] = [a,a] = 0 to fail
        // since [x,a] = b.
        let l = DglaBuilder::new()
            .generator("x", 0)
            .generator("a", 1)
            .generator("b", 1)
            .differential("x", &[(qi(1), "a")])
            .differential("b", &[(qi(1), "a")])
            .bracket("x", "a", &[(qi(1), "b")])
            .build_unchecked()
            .unwrap();
        let report = l.validate();
        assert!(!report.is_valid());
        let derivation = report
            .checks
            .iter()
            .find(|c| c.name == "derivation")
            .unwrap();
        assert!(!derivation.pass);
        assert_eq!(derivation.witness.as_deref(), Some("(x, a)"));
    }

    #[test]
    fn heisenberg_series_dimension() {
        let l = corpus::heisenberg();
        assert_eq!(l.nilpotency_class(), 2);
        assert_eq!(l.filtration_layer(2).dim(), 1);
    }

    #[test]
    fn non_nilpotent_bracket_is_rejected() {
        // sl2-like: [h, e] = 2e keeps F^k = span{e, ...} forever.
        let err = DglaBuilder::new()
            .generator("h", 0)
            .generator("e", 0)
            .bracket("h", "e", &[(qi(2), "e")])
            .build_unchecked()
            .unwrap_err();
        assert!(matches!(err, DglaError::NotNilpotent(_)));
    }

    #[test]
    fn curvature_examples() {
        let l = corpus::xab();
        let zero = vzero(3);
        assert_eq!(l.curvature(&zero).unwrap(), vzero(3));

        // tau = -a - 1/2 b is Maurer-Cartan: d(tau) = 0 and the bracket of
        // degree-1 elements lands in degree 2 = 0.
        let tau = corpus::xab_tau();
        assert_eq!(l.curvature(&tau).unwrap(), vzero(3));
        assert!(l.is_mc(&tau));

        // on the abelian algebra with a differential, curvature = d(tau)
        let a = corpus::acyclic();
        let c = a.basis().index_of("c").unwrap();
        let e = a.basis().index_of("e").unwrap();
        let mut tau = vzero(a.dim());
        tau[e] = qi(1);
        assert!(a.is_mc(&tau)); // e is a cocycle of degree 1
        let mut x = vzero(a.dim());
        x[c] = qi(1);
        assert!(a.curvature(&x).is_err()); // degree 0, not 1
    }

    #[test]
    fn twist_examples() {
        let l = corpus::xab();
        let zero = vzero(3);
        let twisted = l.twist(&zero).unwrap();
        assert_eq!(twisted.differential_matrix(), l.differential_matrix());

        let tau = corpus::xab_tau();
        let lt = l.twist(&tau).unwrap();
        // d_tau(x) = a + [tau, x] = a + b
        let x = l.basis().unit(0);
        let expected = {
            let mut v = vzero(3);
            v[1] = qi(1);
            v[2] = qi(1);
            v
        };
        assert_eq!(lt.d_vec(&x), expected);
        assert!(lt.validate().is_valid());
        assert_eq!(lt.nilpotency_class(), 2);

        let not_mc = l.basis().unit(0); // degree 0
        assert!(matches!(
            l.twist(&not_mc),
            Err(DglaError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn twist_composes_additively() {
        // tau' Maurer-Cartan in the twisted algebra exactly when tau + tau'
        // is Maurer-Cartan in the original; twisting twice is twisting by
        // the sum
        let l = corpus::xab_uvw_sum();
        let tau = corpus::xab_uvw_sum_tau();
        let twisted = l.twist(&tau).unwrap();
        let mut tau2 = vzero(l.dim());
        tau2[1] = qi(2); // 2a is closed of degree 1 with vanishing brackets
        assert!(twisted.is_mc(&tau2));
        assert!(l.is_mc(&vadd(&tau, &tau2)));
        let once_more = twisted.twist(&tau2).unwrap();
        let direct = l.twist(&vadd(&tau, &tau2)).unwrap();
        assert_eq!(once_more.differential_matrix(), direct.differential_matrix());
    }

    #[test]
    fn bch_frozen_values() {
        // abelian: plain sum
        let l = corpus::abelian_points(2);
        let x = l.basis().unit(0);
        let y = l.basis().unit(1);
        assert_eq!(l.bch(&x, &y).unwrap(), vadd(&x, &y));

        // class 2 (Heisenberg): x * y = x + y + [x,y]/2
        let h = corpus::heisenberg();
        let x = h.basis().unit(0);
        let y = h.basis().unit(1);
        let z = h.basis().unit(2);
        let expected = vadd(&vadd(&x, &y), &vscale(&q(1, 2), &z));
        assert_eq!(h.bch(&x, &y).unwrap(), expected);

        // group inverse
        let w = vadd(&x, &vscale(&q(2, 3), &y));
        assert!(vis_zero(&h.bch(&w, &vneg(&w)).unwrap()));

        // class 3 filiform: e1 * e2 = e1 + e2 + e3/2 + e4/12
        let f = corpus::filiform(3);
        let e1 = f.basis().unit(0);
        let e2 = f.basis().unit(1);
        let mut expected = vadd(&e1, &e2);
        expected[2] = q(1, 2);
        expected[3] = q(1, 12);
        assert_eq!(f.bch(&e1, &e2).unwrap(), expected);
    }

    #[test]
    fn bch_associativity_on_class_four() {
        let f = corpus::filiform(4);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let mut rand_vec = || -> QVec {
                (0..f.dim())
                    .map(|_| qi(rng.gen_range(-2..=2)))
                    .collect()
            };
            let (x, y, z) = (rand_vec(), rand_vec(), rand_vec());
            let left = f.bch(&f.bch(&x, &y).unwrap(), &z).unwrap();
            let right = f.bch(&x, &f.bch(&y, &z).unwrap()).unwrap();
            assert_eq!(left, right);
            assert_eq!(f.bch(&x, &f.zero()).unwrap(), x);
            assert_eq!(f.bch(&f.zero(), &x).unwrap(), x);
        }
    }

    #[test]
    fn gauge_action_examples() {
        // abelian: x . tau = tau - dx
        let a = corpus::acyclic();
        let c = a.basis().unit(a.basis().index_of("c").unwrap());
        let tau = vzero(a.dim());
        let expected = vneg(&a.d_vec(&c));
        assert_eq!(a.gauge_act(&c, &tau).unwrap(), expected);

        // xab: x . 0 = -a - b/2
        let l = corpus::xab();
        let x = l.basis().unit(0);
        assert_eq!(l.gauge_act(&x, &vzero(3)).unwrap(), corpus::xab_tau());

        // a gauge element with d_tau x = 0 acts trivially
        let tau = corpus::xab_tau();
        let fixing = vzero(3); // 0 certainly satisfies d_tau(0) = 0
        assert_eq!(l.gauge_act(&fixing, &tau).unwrap(), tau);
    }

    #[test]
    fn stabilizer_examples() {
        let l = corpus::xab();
        let x = l.basis().unit(0);
        // d(x) = a != 0, so x does not stabilize 0
        assert!(!l.stabilizer_check(&x, &vzero(3)).unwrap());
        // on the Heisenberg algebra (d = 0) every degree-0 element fixes 0
        let h = corpus::heisenberg();
        let w = vadd(&h.basis().unit(0), &h.basis().unit(2));
        assert!(h.stabilizer_check(&w, &vzero(3)).unwrap());
    }

    #[test]
    fn gauge_lift_identity_map_returns_given_gauge() {
        let l = corpus::xab();
        let id = DglaMap::new(l.clone(), l.clone(), QMatrix::identity(3)).unwrap();
        let rho = vzero(3);
        let y = l.basis().unit(0);
        let tau = l.gauge_act(&y, &rho).unwrap();
        let x = l
            .gauge_lift_along(&id, |_, _| None, &tau, &rho, &y)
            .unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn gauge_lift_through_acyclic_ideal() {
        // L = span{r; c, e}, abelian, d(c) = e. The ideal I = span{c, e} is
        // acyclic; L/I = span{r}. With rho = r, tau = r + e, y = 0 the lift
        // must return x in I with d(x) = rho - tau = -e, i.e. x = -c.
        let l = corpus::acyclic_with_line();
        let target = DglaBuilder::new().generator("r", 1).build().unwrap();
        let mut m = QMatrix::zero(1, 3);
        m.set(0, 0, qi(1)); // r -> r, c -> 0, e -> 0
        let f = DglaMap::new(l.clone(), target.clone(), m).unwrap();
        assert!(f.is_surjective());

        let rho = l.basis().unit(0);
        let tau = vadd(&rho, &l.basis().unit(2));
        let y = vzero(1);
        // oracle: solve d(x) = defect within the ideal, here globally
        let oracle = |_n: usize, defect: &QVec| -> Option<QVec> {
            solve_linear(l.differential_matrix(), defect).ok().flatten()
        };
        let x = l.gauge_lift_along(&f, oracle, &tau, &rho, &y).unwrap();
        assert_eq!(l.gauge_act(&x, &rho).unwrap(), tau);
        assert!(vis_zero(&f.apply(&x)));
        let mut expected = vzero(3);
        expected[1] = qi(-1);
        assert_eq!(x, expected);
    }

    #[test]
    fn gauge_lift_precondition_failure() {
        let l = corpus::acyclic_with_line();
        let id = DglaMap::new(l.clone(), l.clone(), QMatrix::identity(3)).unwrap();
        let rho = l.basis().unit(0);
        let tau = vscale(&qi(2), &rho);
        let err = l
            .gauge_lift_along(&id, |_, _| None, &tau, &rho, &vzero(3))
            .unwrap_err();
        assert_eq!(err, DglaError::Lift(LiftError::PreconditionFailed));
    }

    #[test]
    fn cone_of_one_abelian_generator_is_acyclic() {
        let l = corpus::abelian_points(1);
        let cone = l.cone().unwrap();
        assert!(cone.algebra.validate().is_valid());
        assert_eq!(cone.algebra.nilpotency_class(), 1);
        // d(sx) = x, so the complex is acyclic in both degrees
        let complex = cone.algebra.cochain_complex();
        assert_eq!(complex.cohomology(-1).dim, 0);
        assert_eq!(complex.cohomology(0).dim, 0);
    }

    #[test]
    fn cone_of_xab_and_degree_zero_cocycles() {
        let l = corpus::xab();
        let cone = l.cone().unwrap();
        assert!(cone.algebra.validate().is_valid());
        // d(sx) = x - sa
        let sx = cone.algebra.basis().unit(
            cone.algebra.basis().index_of("sx").unwrap(),
        );
        let expected = vsub(
            &cone.include(&l.basis().unit(0)),
            &cone.suspend(&l.basis().unit(1)),
        );
        assert_eq!(cone.algebra.d_vec(&sx), expected);

        // Z^0(cone) is linearly isomorphic to L^0 via x -> x - s(dx)
        let deg0: Vec<usize> = (0..cone.algebra.dim())
            .filter(|&i| cone.algebra.degree(i) == 0)
            .collect();
        let cols: Vec<QVec> = deg0
            .iter()
            .map(|&i| cone.algebra.d_vec(&cone.algebra.basis().unit(i)))
            .collect();
        let m = QMatrix::from_columns(cone.algebra.dim(), &cols);
        let z0_dim = m.kernel_basis().len();
        let l0_dim = l.basis().indices_of_degree(0).len();
        assert_eq!(z0_dim, l0_dim);
        for i in l.basis().indices_of_degree(0) {
            let x = l.basis().unit(i);
            let z = vsub(&cone.include(&x), &cone.suspend(&l.d_vec(&x)));
            assert!(vis_zero(&cone.algebra.d_vec(&z)));
        }
    }

    #[test]
    fn lemma_stabilizer_equivalence_fuzzed() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = corpus::filiform(3);
        for _ in 0..25 {
            let x: QVec = (0..f.dim())
                .map(|_| qi(rng.gen_range(-2..=2)))
                .collect();
            let tau = vzero(f.dim());
            let fixes = f.stabilizer_check(&x, &tau).unwrap();
            let dtau_x = lie::twisted_diff(&f, &tau, &x);
            assert_eq!(fixes, vis_zero(&dtau_x));
        }
    }
}
