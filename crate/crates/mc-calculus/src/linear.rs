//! Exact rational linear algebra: dense matrices with Gaussian elimination,
//! canonical subspaces, graded bases, and cohomology of finite cochain
//! complexes with an explicit decomposition procedure.
//!
//! Everything here is deterministic: pivots are chosen by the first-pivot
//! rule, so representatives and particular solutions are reproducible across
//! runs and platforms.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::scalar::{render_scalar, Scalar};

pub type QVec = Vec<Scalar>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinearError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a cocycle: d(z) != 0")]
    NotACocycle,
    #[error("degree {0} not present in the graded basis")]
    DegreeOutOfRange(i64),
}

pub fn vzero(n: usize) -> QVec {
    vec![Scalar::zero(); n]
}

pub fn vis_zero(v: &QVec) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vadd(a: &QVec, b: &QVec) -> QVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &QVec, b: &QVec) -> QVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vneg(a: &QVec) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn vscale(c: &Scalar, a: &QVec) -> QVec {
    a.iter().map(|x| c * x).collect()
}

/// Dense matrix over the rationals, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| render_scalar(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Build from columns; all columns must have the same length.
    pub fn from_columns(rows: usize, columns: &[QVec]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[QVec]) -> Self {
        let mut m = Self::zero(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn apply(&self, v: &QVec) -> Result<QVec, LinearError> {
        if v.len() != self.cols {
            return Err(LinearError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vzero(self.rows);
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let t = self.get(i, j) * c;
                out[i] += t;
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.get(k, j);
                    let cur = out.get(i, j) + t;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form together with the pivot columns, first-pivot
    /// rule: for each column in order, the first unused row with a nonzero
    /// entry becomes the pivot.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for j in 0..m.cols {
                    let a = m.get(row, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(row, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = Scalar::one() / m.get(row, col).clone();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j) - &factor * m.get(row, j);
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one vector per free column, deterministic order.
    pub fn kernel_basis(&self) -> Vec<QVec> {
        let (r, pivots) = self.rref();
        let pivot_of_col: BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vzero(self.cols);
            v[free] = Scalar::one();
            for (&pc, &pr) in &pivot_of_col {
                if pc < free {
                    v[pc] = -r.get(pr, free).clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Solve `map * v = target` exactly. Returns `Ok(None)` when the target is
/// not in the image. The particular solution sets all free variables to zero.
pub fn solve_linear(map: &QMatrix, target: &QVec) -> Result<Option<QVec>, LinearError> {
    if target.len() != map.rows {
        return Err(LinearError::DimensionMismatch {
            expected: map.rows,
            got: target.len(),
        });
    }
    // Augment by the target column and reduce.
    let mut aug = QMatrix::zero(map.rows, map.cols + 1);
    for i in 0..map.rows {
        for j in 0..map.cols {
            aug.set(i, j, map.get(i, j).clone());
        }
        aug.set(i, map.cols, target[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.contains(&map.cols) {
        return Ok(None);
    }
    let mut v = vzero(map.cols);
    for (row, &col) in pivots.iter().enumerate() {
        v[col] = r.get(row, map.cols).clone();
    }
    Ok(Some(v))
}

/// A subspace of Q^n in canonical form (rref basis rows), so that two equal
/// subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    rows: Vec<QVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..ambient {
            let mut v = vzero(ambient);
            v[i] = Scalar::one();
            rows.push(v);
        }
        Subspace { ambient, rows }
    }

    pub fn from_spanning(ambient: usize, vectors: &[QVec]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = QMatrix::from_rows(ambient, vectors);
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len())
            .map(|i| (0..ambient).map(|j| r.get(i, j).clone()).collect())
            .collect();
        Subspace { ambient, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.rows
    }

    pub fn contains(&self, v: &QVec) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the rref rows; membership iff the residue is zero.
        let mut w = v.clone();
        for row in &self.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !w[lead].is_zero() {
                let c = w[lead].clone();
                for j in 0..self.ambient {
                    let t = &w[j] - &c * &row[j];
                    w[j] = t;
                }
            }
        }
        vis_zero(&w)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }
}

/// A list of basis symbols with integer (cohomological) degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    symbols: Vec<String>,
    degrees: Vec<i64>,
    index: BTreeMap<String, usize>,
}

impl GradedBasis {
    pub fn new(items: &[(&str, i64)]) -> Result<Self, String> {
        let mut symbols = Vec::new();
        let mut degrees = Vec::new();
        let mut index = BTreeMap::new();
        for (sym, deg) in items {
            if index.insert(sym.to_string(), symbols.len()).is_some() {
                return Err(format!("duplicate basis symbol: {sym}"));
            }
            symbols.push(sym.to_string());
            degrees.push(*deg);
        }
        Ok(GradedBasis {
            symbols,
            degrees,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, sym: &str) -> Option<usize> {
        self.index.get(sym).copied()
    }

    pub fn indices_of_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == degree).collect()
    }

    pub fn degrees_present(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.degrees.clone();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Basis vector `e_i`.
    pub fn unit(&self, i: usize) -> QVec {
        let mut v = vzero(self.dim());
        v[i] = Scalar::one();
        v
    }

    /// True if `v` is supported on basis elements of a single degree `k`
    /// (the zero vector is homogeneous of every degree).
    pub fn is_homogeneous(&self, v: &QVec, k: i64) -> bool {
        v.iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.degrees[i] == k)
    }

    pub fn render(&self, v: &QVec) -> String {
        let mut parts = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sym = &self.symbols[i];
            let piece = if c == &Scalar::one() {
                sym.clone()
            } else if c == &(-Scalar::one()) {
                format!("-{sym}")
            } else {
                format!("{} {sym}", render_scalar(c))
            };
            parts.push(piece);
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

/// A finite cochain complex: graded basis plus a differential of degree +1.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub basis: GradedBasis,
    pub d: QMatrix,
}

impl CochainComplex {
    pub fn new(basis: GradedBasis, d: QMatrix) -> Result<Self, String> {
        let n = basis.dim();
        if d.rows != n || d.cols != n {
            return Err("differential matrix has wrong shape".into());
        }
        for j in 0..n {
            for i in 0..n {
                if !d.get(i, j).is_zero() && basis.degree(i) != basis.degree(j) + 1 {
                    return Err(format!(
                        "differential does not raise degree by 1 at d({}) -> {}",
                        basis.symbol(j),
                        basis.symbol(i)
                    ));
                }
            }
        }
        let dd = d.mul(&d);
        if !dd.is_zero() {
            return Err("d^2 != 0".into());
        }
        Ok(CochainComplex { basis, d })
    }

    pub fn differential(&self, v: &QVec) -> QVec {
        self.d.apply(v).expect("dimension checked at construction")
    }

    /// Cohomology in a single degree, with deterministic representatives and
    /// an exact decomposition procedure.
    pub fn cohomology(&self, degree: i64) -> Cohomology {
        let n = self.basis.dim();
        let idx_k = self.basis.indices_of_degree(degree);
        let idx_km1 = self.basis.indices_of_degree(degree - 1);

        // d restricted to degree k, as a map on full-space coordinates.
        let d_cols_k: Vec<QVec> = idx_k.iter().map(|&j| self.d.column(j)).collect();
        let d_k = QMatrix::from_columns(n, &d_cols_k);
        let kernel_small = d_k.kernel_basis();
        let kernel: Vec<QVec> = kernel_small
            .iter()
            .map(|kv| {
                let mut v = vzero(n);
                for (pos, &j) in idx_k.iter().enumerate() {
                    v[j] = kv[pos].clone();
                }
                v
            })
            .collect();

        let image: Vec<QVec> = idx_km1.iter().map(|&j| self.d.column(j)).collect();
        let image_space = Subspace::from_spanning(n, &image);

        // Greedy first-pivot representatives: kernel vectors independent
        // modulo the image.
        let mut reps = Vec::new();
        let mut span = image;
        let mut span_space = image_space.clone();
        for z in &kernel {
            if !span_space.contains(z) {
                reps.push(z.clone());
                span.push(z.clone());
                span_space = Subspace::from_spanning(n, &span);
            }
        }

        Cohomology {
            degree,
            dim: reps.len(),
            representatives: reps,
            complex: self.clone(),
            image_domain: idx_km1,
        }
    }
}

/// Cohomology of one degree with an exact `decompose` section.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i64,
    pub dim: usize,
    pub representatives: Vec<QVec>,
    complex: CochainComplex,
    image_domain: Vec<usize>,
}

impl Cohomology {
    /// Write a cocycle `z` as `sum coeffs[i] * rep_i + d(primitive)`.
    /// Returns the coefficients and the primitive.
    pub fn decompose(&self, z: &QVec) -> Result<(Vec<Scalar>, QVec), LinearError> {
        let n = self.complex.basis.dim();
        if z.len() != n {
            return Err(LinearError::DimensionMismatch {
                expected: n,
                got: z.len(),
            });
        }
        if !vis_zero(&self.complex.differential(z)) {
            return Err(LinearError::NotACocycle);
        }
        // Solve [reps | d restricted to degree-1] * (coeffs, c) = z.
        let mut cols: Vec<QVec> = self.representatives.clone();
        for &j in &self.image_domain {
            cols.push(self.complex.d.column(j));
        }
        let m = QMatrix::from_columns(n, &cols);
        let sol = solve_linear(&m, z)?
            .expect("cocycle must decompose over representatives and boundaries");
        let coeffs = sol[..self.dim].to_vec();
        let mut primitive = vzero(n);
        for (pos, &j) in self.image_domain.iter().enumerate() {
            primitive[j] = sol[self.dim + pos].clone();
        }
        Ok((coeffs, primitive))
    }
}
