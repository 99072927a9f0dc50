//! Exact linear algebra over cyclotomic fields.
//!
//! Row-vector convention throughout: vectors are rows, matrices act from the
//! right (`v -> v M`), the kernel of `M` is `{v : v M = 0}` and the image is
//! the row space. All basis choices are deterministic (reduced row echelon
//! pivots), so every computation is reproducible bit-for-bit.

use crate::cyclo::{lcm_order, parse_scalar, CycNum, CycloError};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("eigenvalues fall outside the candidate list (found multiplicity {found} of {dim})")]
    EigenvalueOutsideCandidates { found: usize, dim: usize },
    #[error("exterior cube needs dimension >= 3, got {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense matrix over `Q(zeta_N)`, row-major, all entries in one common order.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    order: u64,
    entries: Vec<CycNum>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, entries: Vec<CycNum>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let mut order = 1;
        for e in &entries {
            order = lcm_order(order, e.order())?;
        }
        let entries = entries
            .into_iter()
            .map(|e| e.embed(order))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Mat {
            rows,
            cols,
            order,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Parse a matrix from rows of scalar strings in the `z` syntax.
    pub fn parse(rows: &[Vec<String>], order: u64) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_scalar(s, order))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::from_rows(parsed)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_string()).collect())
            .collect()
    }

    pub fn zeros(rows: usize, cols: usize, order: u64) -> Self {
        Mat {
            rows,
            cols,
            order,
            entries: vec![CycNum::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u64) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.entries[i * n + i] = CycNum::one(order);
        }
        m
    }

    pub fn scalar(n: usize, c: &CycNum) -> Self {
        let mut m = Self::zeros(n, n, c.order());
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn at(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.entries[i * self.cols + j] = v.embed(self.order).expect("entry order unification");
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Rewrite all entries in `Q(zeta_m)`; `order` must divide `m`.
    pub fn embed(&self, m: u64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(m))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            order: m,
            entries,
        })
    }

    fn unify(&self, other: &Self) -> Result<(Self, Self)> {
        if self.order == other.order {
            return Ok((self.clone(), other.clone()));
        }
        let l = lcm_order(self.order, other.order)?;
        Ok((self.embed(l)?, other.embed(l)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("add".into()));
        }
        let (mut a, b) = self.unify(other)?;
        for (x, y) in a.entries.iter_mut().zip(&b.entries) {
            *x = &*x + y;
        }
        Ok(a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("sub".into()));
        }
        let (mut a, b) = self.unify(other)?;
        for (x, y) in a.entries.iter_mut().zip(&b.entries) {
            *x = &*x - y;
        }
        Ok(a)
    }

    pub fn neg(&self) -> Self {
        let mut m = self.clone();
        for e in m.entries.iter_mut() {
            *e = -&*e;
        }
        m
    }

    pub fn scalar_mul(&self, c: &CycNum) -> Result<Self> {
        let order = lcm_order(self.order, c.order())?;
        let mut m = self.embed(order)?;
        let c = c.embed(order)?;
        for e in m.entries.iter_mut() {
            *e = &*e * &c;
        }
        Ok(m)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.unify(other)?;
        let mut out = Mat::zeros(a.rows, b.cols, a.order);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = b.at(k, j);
                    if !bkj.is_zero() {
                        let prod = aik * bkj;
                        let cur = out.at(i, j);
                        out.entries[i * b.cols + j] = cur + &prod;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Mat::zeros(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.at(i, j).clone();
            }
        }
        out
    }

    /// `M - c*1` on a square matrix.
    pub fn sub_scalar(&self, c: &CycNum) -> Result<Self> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        self.sub(&Mat::scalar(self.rows, c).embed(self.order).unwrap_or_else(|_| Mat::scalar(self.rows, c)))
    }

    /// `M - 1` on a square matrix.
    pub fn sub_identity(&self) -> Result<Self> {
        self.sub_scalar(&CycNum::one(1))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut acc = Mat::identity(self.rows, self.order);
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Reduced row echelon form; returns (rref, pivot columns, rank).
    pub fn rref(&self) -> (Self, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if r != prow {
                for j in 0..m.cols {
                    m.entries.swap(r * m.cols + j, prow * m.cols + j);
                }
            }
            let inv = m.at(prow, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.at(prow, j) * &inv;
                m.entries[prow * m.cols + j] = v;
            }
            for r2 in 0..m.rows {
                if r2 != prow && !m.at(r2, col).is_zero() {
                    let f = m.at(r2, col).clone();
                    for j in col..m.cols {
                        let t = &f * m.at(prow, j);
                        let v = m.at(r2, j) - &t;
                        m.entries[r2 * m.cols + j] = v;
                    }
                }
            }
            pivots.push(col);
            prow += 1;
        }
        let rank = pivots.len();
        (m, pivots, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().2
    }

    pub fn det(&self) -> Result<CycNum> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = CycNum::one(m.order);
        for col in 0..n {
            let Some(r) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Ok(CycNum::zero(m.order));
            };
            if r != col {
                for j in 0..n {
                    m.entries.swap(r * n + j, col * n + j);
                }
                det = -&det;
            }
            let pivot = m.at(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for r2 in col + 1..n {
                if !m.at(r2, col).is_zero() {
                    let f = m.at(r2, col) * &inv;
                    for j in col..n {
                        let t = &f * m.at(col, j);
                        let v = m.at(r2, j) - &t;
                        m.entries[r2 * n + j] = v;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n, self.order);
        for i in 0..n {
            for j in 0..n {
                aug.entries[i * 2 * n + j] = self.at(i, j).clone();
            }
            aug.entries[i * 2 * n + n + i] = CycNum::one(self.order);
        }
        let (r, pivots, rank) = aug.rref();
        if rank < n || pivots.iter().take(n).copied().ne(0..n) {
            return Err(LinalgError::NotInvertible);
        }
        let mut out = Mat::zeros(n, n, self.order);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = r.at(i, n + j).clone();
            }
        }
        Ok(out)
    }

    /// Basis of `{v : v M = 0}` (row vectors of length rows(M)).
    pub fn kernel_basis(&self) -> Subspace {
        // v M = 0 <=> M^T v^T = 0: run column elimination through the transpose.
        let t = self.transpose();
        let (r, pivots, rank) = t.rref();
        let n = self.rows; // ambient dimension of kernel vectors
        let mut basis = Vec::new();
        let pivot_set: Vec<usize> = pivots.clone();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        for &fc in &free {
            let mut v = vec![CycNum::zero(self.order); n];
            v[fc] = CycNum::one(self.order);
            for (pi, &pc) in pivot_set.iter().enumerate() {
                v[pc] = -r.at(pi, fc);
            }
            basis.push(v);
        }
        debug_assert_eq!(basis.len(), n - rank);
        Subspace::from_rows(n, self.order, basis)
    }

    /// Row space of `M` (image under the right action `v -> v M`).
    pub fn image_basis(&self) -> Subspace {
        let rows = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        Subspace::from_rows(self.cols, self.order, rows)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over Q(zeta_{}) [", self.rows, self.cols, self.order)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Incremental row-echelon span of row vectors; used for closures and quotient
/// bookkeeping. Rows are kept echelonized with leading entry 1 at the pivot.
pub struct RowSpan {
    ambient: usize,
    order: u64,
    rows: Vec<Vec<CycNum>>, // sorted by pivot column
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(ambient: usize, order: u64) -> Self {
        RowSpan {
            ambient,
            order,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current span; the residual is zero iff contained.
    pub fn reduce(&self, v: &[CycNum]) -> Vec<CycNum> {
        let mut v: Vec<CycNum> = v
            .iter()
            .map(|e| e.embed(self.order).expect("span order"))
            .collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for j in p..self.ambient {
                    if !row[j].is_zero() {
                        let t = &f * &row[j];
                        v[j] = &v[j] - &t;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        self.reduce(v).iter().all(|e| e.is_zero())
    }

    /// Insert a vector; returns true if the span grew.
    pub fn insert(&mut self, v: &[CycNum]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero leading entry");
        for e in r.iter_mut().skip(p) {
            *e = &*e * &inv;
        }
        let idx = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(idx, p);
        self.rows.insert(idx, r);
        true
    }

    /// Snapshot as a fully reduced subspace.
    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_rows(self.ambient, self.order, self.rows.clone())
    }
}

/// A linear subspace of row vectors, stored by its reduced-row-echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    order: u64,
    basis: Vec<Vec<CycNum>>,
}

impl Subspace {
    pub fn from_rows(ambient: usize, order: u64, rows: Vec<Vec<CycNum>>) -> Self {
        let m = Mat::from_rows(if rows.is_empty() {
            vec![vec![CycNum::zero(order); ambient]]
        } else {
            rows
        })
        .expect("subspace rows")
        .embed(order)
        .expect("subspace order");
        assert_eq!(m.cols(), ambient, "ambient dimension mismatch");
        let (r, _, rank) = m.rref();
        let basis = (0..rank).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            ambient,
            order,
            basis,
        }
    }

    pub fn zero(ambient: usize, order: u64) -> Self {
        Subspace {
            ambient,
            order,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize, order: u64) -> Self {
        let id = Mat::identity(ambient, order);
        Subspace::from_rows(ambient, order, (0..ambient).map(|i| id.row(i).to_vec()).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<CycNum>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Mat {
        if self.basis.is_empty() {
            Mat::zeros(0, self.ambient, self.order)
        } else {
            Mat::from_rows(self.basis.clone()).expect("echelon basis")
        }
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        let mut span = RowSpan::new(self.ambient, self.order);
        for row in &self.basis {
            span.insert(row);
        }
        span.contains(v)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        let order = lcm_order(self.order, other.order)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.clone());
        Ok(Subspace::from_rows(self.ambient, order, rows))
    }

    /// Exact intersection, via the kernel of the stacked-basis relation.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        let order = lcm_order(self.order, other.order)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient, order));
        }
        // Rows (c | d) with c*U = d*W give intersection vectors c*U.
        let u = self.basis_matrix().embed(order)?;
        let w = other.basis_matrix().embed(order)?;
        let mut stacked_rows = Vec::new();
        for i in 0..u.rows() {
            stacked_rows.push(u.row(i).to_vec());
        }
        for i in 0..w.rows() {
            stacked_rows.push(w.row(i).iter().map(|e| -e).collect());
        }
        let stacked = Mat::from_rows(stacked_rows)?.embed(order)?;
        let ker = stacked.kernel_basis();
        let mut rows = Vec::new();
        for k in ker.basis() {
            let c = Mat::from_rows(vec![k[..u.rows()].to_vec()])?.embed(order)?;
            let v = c.mul(&u)?;
            rows.push(v.row(0).to_vec());
        }
        Ok(Subspace::from_rows(self.ambient, order, rows))
    }

    /// A matrix `C` with `self = {v : v C = 0}`; columns span the right null
    /// space of the basis matrix. Used to express membership as linear
    /// conditions on unknowns.
    pub fn annihilator(&self) -> Mat {
        let b = if self.basis.is_empty() {
            Mat::zeros(1, self.ambient, self.order)
        } else {
            self.basis_matrix()
        };
        // Right null space of B: kernel of B^T in the row convention.
        let k = b.transpose().kernel_basis();
        if k.dim() == 0 {
            return Mat::zeros(self.ambient, 0, self.order);
        }
        k.basis_matrix().transpose()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}, order {})",
            self.dim(),
            self.ambient,
            self.order
        )
    }
}

/// Jordan type of a matrix: a multiset of (eigenvalue, block length) pairs in
/// a canonical order (eigenvalue text, then length descending).
#[derive(Clone, PartialEq, Eq)]
pub struct JordanData {
    blocks: Vec<(CycNum, usize)>,
}

impl JordanData {
    pub fn new(mut blocks: Vec<(CycNum, usize)>) -> Self {
        // Embed all eigenvalues into a common cyclotomic field so that the
        // canonical block order (and hence equality) does not depend on the
        // basis each eigenvalue happened to be expressed in.
        let mut common = 1u64;
        for (ev, _) in &blocks {
            if let Ok(l) = crate::cyclo::lcm_order(common, ev.order()) {
                common = l;
            }
        }
        for (ev, _) in &mut blocks {
            if let Ok(e) = ev.embed(common) {
                *ev = e;
            }
        }
        blocks.sort_by(|a, b| {
            a.0.to_string()
                .cmp(&b.0.to_string())
                .then(b.1.cmp(&a.1))
        });
        JordanData { blocks }
    }

    pub fn blocks(&self) -> &[(CycNum, usize)] {
        &self.blocks
    }

    pub fn total_size(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl fmt::Debug for JordanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for JordanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(ev, l)| format!("J({}, {})", ev, l))
            .collect();
        write!(f, "{{{}}}", parts.join(" + "))
    }
}

/// Jordan data of an invertible matrix against a candidate eigenvalue list,
/// via the dimensions of the kernels of `(M - a)^k`. Errors if the candidates
/// do not account for the full dimension.
pub fn jordan_data(m: &Mat, candidates: &[CycNum]) -> Result<JordanData> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let mut blocks = Vec::new();
    let mut found = 0usize;
    let mut seen: Vec<CycNum> = Vec::new();
    for cand in candidates {
        if seen.iter().any(|s| s == cand) {
            continue;
        }
        seen.push(cand.clone());
        let shifted = m.sub_scalar(cand)?;
        let d1 = shifted.kernel_basis().dim();
        if d1 == 0 {
            continue;
        }
        // d[k] = dim ker (M - a)^k, with d[0] = 0; stable once d[k+1] = d[k].
        let mut dims = vec![0usize, d1];
        let mut pw = shifted.clone();
        loop {
            pw = pw.mul(&shifted)?;
            let dk = pw.kernel_basis().dim();
            let last = *dims.last().unwrap();
            dims.push(dk);
            if dk == last {
                break;
            }
        }
        let top = dims.len() - 1;
        for l in 1..=top {
            let d_next = if l + 1 < dims.len() { dims[l + 1] } else { dims[l] };
            let count = 2 * dims[l] - dims[l - 1] - d_next;
            for _ in 0..count {
                blocks.push((cand.clone(), l));
                found += l;
            }
        }
    }
    if found != n {
        return Err(LinalgError::EigenvalueOutsideCandidates { found, dim: n });
    }
    Ok(JordanData::new(blocks))
}

/// Default eigenvalue candidates for order N: all N-th roots of unity and
/// their negatives (covers the even-order case where -1 is not a power).
pub fn default_candidates(order: u64) -> Vec<CycNum> {
    let mut out = Vec::new();
    for k in 0..order {
        let z = CycNum::root_of_unity(order, k as i64).expect("order already admitted");
        let nz = z.neg();
        if !out.contains(&z) {
            out.push(z);
        }
        if !out.contains(&nz) {
            out.push(nz);
        }
    }
    out
}

pub fn kronecker(a: &Mat, b: &Mat) -> Result<Mat> {
    let order = lcm_order(a.order(), b.order())?;
    let a = a.embed(order)?;
    let b = b.embed(order)?;
    let mut out = Mat::zeros(a.rows() * b.rows(), a.cols() * b.cols(), order);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.at(i, j);
            if aij.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    let bkl = b.at(k, l);
                    if !bkl.is_zero() {
                        out.set(i * b.rows() + k, j * b.cols() + l, aij * bkl);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn direct_sum(a: &Mat, b: &Mat) -> Result<Mat> {
    let order = lcm_order(a.order(), b.order())?;
    let a = a.embed(order)?;
    let b = b.embed(order)?;
    let mut out = Mat::zeros(a.rows() + b.rows(), a.cols() + b.cols(), order);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.at(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out.set(a.rows() + i, a.cols() + j, b.at(i, j).clone());
        }
    }
    Ok(out)
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

fn det3(a: &Mat, r: (usize, usize, usize), c: (usize, usize, usize)) -> CycNum {
    let e = |i: usize, j: usize| a.at(i, j);
    let (r0, r1, r2) = r;
    let (c0, c1, c2) = c;
    let t1 = &(e(r0, c0) * e(r1, c1)) * e(r2, c2);
    let t2 = &(e(r0, c1) * e(r1, c2)) * e(r2, c0);
    let t3 = &(e(r0, c2) * e(r1, c0)) * e(r2, c1);
    let t4 = &(e(r0, c2) * e(r1, c1)) * e(r2, c0);
    let t5 = &(e(r0, c0) * e(r1, c2)) * e(r2, c1);
    let t6 = &(e(r0, c1) * e(r1, c0)) * e(r2, c2);
    &(&(&(&t1 + &t2) + &t3) - &t4) - &(&t5 + &t6)
}

/// Induced action on the third exterior power, with the lexicographic basis
/// `e_i ^ e_j ^ e_k` (i < j < k). Entry [(i,j,k), (l,m,n)] is the 3x3 minor of
/// A with rows {i,j,k} and columns {l,m,n}.
pub fn exterior_cube(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    if n < 3 {
        return Err(LinalgError::DimensionTooSmall(n));
    }
    let basis = triples(n);
    let dim = basis.len();
    let mut out = Mat::zeros(dim, dim, a.order());
    for (bi, &r) in basis.iter().enumerate() {
        for (bj, &c) in basis.iter().enumerate() {
            let d = det3(a, r, c);
            if !d.is_zero() {
                out.set(bi, bj, d);
            }
        }
    }
    Ok(out)
}

/// Search a span of vectorized n x n matrices for an invertible element.
/// Deterministic: basis vectors, then partial sums, then pseudorandom small
/// integer combinations from a fixed-seed generator (Schwartz-Zippel makes
/// failure overwhelmingly unlikely when an invertible element exists).
fn find_invertible_in_span(basis: &[Vec<CycNum>], n: usize, order: u64) -> Result<Option<Mat>> {
    if basis.is_empty() {
        return Ok(None);
    }
    let try_mat = |v: &[CycNum]| -> Option<Mat> {
        let x = mat_of_vec(v, n).ok()?;
        x.inverse().ok().map(|_| x)
    };
    for b in basis {
        if let Some(x) = try_mat(b) {
            return Ok(Some(x));
        }
    }
    let mut acc = vec![CycNum::zero(order); n * n];
    for b in basis {
        for (x, y) in acc.iter_mut().zip(b) {
            *x = &*x + y;
        }
        if let Some(x) = try_mat(&acc) {
            return Ok(Some(x));
        }
    }
    let mut state: u64 = 0x9e3779b97f4a7c15;
    for _ in 0..60 {
        let mut v = vec![CycNum::zero(order); n * n];
        for b in basis {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let c = ((state >> 33) % 7) as i64 - 3;
            if c == 0 {
                continue;
            }
            let cn = CycNum::from_integer(c).embed(order)?;
            for (x, y) in v.iter_mut().zip(b) {
                let t = &cn * y;
                *x = &*x + &t;
            }
        }
        if let Some(x) = try_mat(&v) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Row-major vectorization of a square matrix.
pub fn vec_of_mat(m: &Mat) -> Vec<CycNum> {
    m.entries.clone()
}

pub fn mat_of_vec(v: &[CycNum], n: usize) -> Result<Mat> {
    Mat::new(n, n, v.to_vec())
}

/// Solve `X S_i = T_i X` for all i and return an invertible solution if one
/// exists. The search over the solution space is deterministic: basis vectors
/// first, then partial sums, then small scaled combinations.
pub fn simultaneous_conjugator(s: &[Mat], t: &[Mat]) -> Result<Option<Mat>> {
    assert_eq!(s.len(), t.len(), "tuple lengths differ");
    if s.is_empty() {
        return Ok(None);
    }
    let n = s[0].rows();
    let mut order = 1;
    for m in s.iter().chain(t) {
        if m.rows() != n || m.cols() != n {
            return Err(LinalgError::DimensionMismatch("conjugator operands".into()));
        }
        order = lcm_order(order, m.order())?;
    }
    // One constraint row per (i, a, b): sum_c S_i[c][b] x_{a,c} - T_i[a][c] x_{c,b} = 0,
    // with unknowns x_{a,c} indexed row-major. Solutions are the kernel rows of
    // the transposed constraint matrix.
    let unknowns = n * n;
    let mut constraint_cols: Vec<Vec<CycNum>> = Vec::new();
    for (si, ti) in s.iter().zip(t) {
        let si = si.embed(order)?;
        let ti = ti.embed(order)?;
        for a in 0..n {
            for b in 0..n {
                let mut col = vec![CycNum::zero(order); unknowns];
                for c in 0..n {
                    let v = &col[a * n + c] + si.at(c, b);
                    col[a * n + c] = v;
                    let w = &col[c * n + b] - ti.at(a, c);
                    col[c * n + b] = w;
                }
                constraint_cols.push(col);
            }
        }
    }
    // Matrix with unknowns as rows: entry [u][constraint].
    let mut m = Mat::zeros(unknowns, constraint_cols.len(), order);
    for (ci, col) in constraint_cols.iter().enumerate() {
        for u in 0..unknowns {
            if !col[u].is_zero() {
                m.set(u, ci, col[u].clone());
            }
        }
    }
    let sol = m.kernel_basis();
    find_invertible_in_span(sol.basis(), n, order)
}

/// All bilinear forms `G` with `T_i^T G T_i = G`, plus nondegenerate symmetric
/// and alternating witnesses when they exist.
pub struct InvariantForms {
    pub space: Subspace,
    pub symmetric_nondegenerate: Option<Mat>,
    pub alternating_nondegenerate: Option<Mat>,
}

pub fn invariant_bilinear_forms(t: &[Mat]) -> Result<InvariantForms> {
    assert!(!t.is_empty());
    let n = t[0].rows();
    let mut order = 1;
    for m in t {
        if m.rows() != n || m.cols() != n {
            return Err(LinalgError::DimensionMismatch("form operands".into()));
        }
        order = lcm_order(order, m.order())?;
    }
    // Constraint per (i, a, b): (T_i^T G T_i - G)[a][b] = 0, i.e.
    // sum_{c,d} T_i[c][a] T_i[d][b] g_{c,d} - g_{a,b} = 0, unknowns g row-major.
    let unknowns = n * n;
    let mut cols: Vec<Vec<CycNum>> = Vec::new();
    for ti in t {
        let ti = ti.embed(order)?;
        for a in 0..n {
            for b in 0..n {
                let mut col = vec![CycNum::zero(order); unknowns];
                for c in 0..n {
                    let f1 = ti.at(c, a);
                    if f1.is_zero() {
                        continue;
                    }
                    for d in 0..n {
                        let f2 = ti.at(d, b);
                        if !f2.is_zero() {
                            let v = &col[c * n + d] + &(f1 * f2);
                            col[c * n + d] = v;
                        }
                    }
                }
                let v = &col[a * n + b] - &CycNum::one(order);
                col[a * n + b] = v;
                cols.push(col);
            }
        }
    }
    let mut m = Mat::zeros(unknowns, cols.len(), order);
    for (ci, col) in cols.iter().enumerate() {
        for u in 0..unknowns {
            if !col[u].is_zero() {
                m.set(u, ci, col[u].clone());
            }
        }
    }
    let space = m.kernel_basis();

    let symmetric_nondegenerate = nondegenerate_witness(&space, n, order, true)?;
    let alternating_nondegenerate = nondegenerate_witness(&space, n, order, false)?;
    Ok(InvariantForms {
        space,
        symmetric_nondegenerate,
        alternating_nondegenerate,
    })
}

/// Search the (anti)symmetric part of a space of vectorized matrices for an
/// invertible element; deterministic combination schedule.
fn nondegenerate_witness(
    space: &Subspace,
    n: usize,
    order: u64,
    symmetric: bool,
) -> Result<Option<Mat>> {
    // Project the constraint G = +-G^T into the space: solve within the span.
    let mut sym_rows: Vec<Vec<CycNum>> = Vec::new();
    // Parameterize candidates by the span and impose symmetry as extra
    // conditions on the coefficients.
    let k = space.dim();
    if k == 0 {
        return Ok(None);
    }
    // coeff vector c (length k): G = sum c_i B_i; condition G -+ G^T = 0 gives
    // n^2 linear conditions on c.
    let basis: Vec<Mat> = space
        .basis()
        .iter()
        .map(|v| mat_of_vec(v, n))
        .collect::<Result<_>>()?;
    let mut cond = Mat::zeros(k, n * n, order);
    for (i, b) in basis.iter().enumerate() {
        let bt = b.transpose();
        let diff = if symmetric { b.sub(&bt)? } else { b.add(&bt)? };
        for a in 0..n {
            for c in 0..n {
                cond.set(i, a * n + c, diff.at(a, c).clone());
            }
        }
    }
    let coeffs = cond.kernel_basis();
    for cv in coeffs.basis() {
        let mut g = Mat::zeros(n, n, order);
        for (ci, b) in cv.iter().zip(&basis) {
            if !ci.is_zero() {
                g = g.add(&b.scalar_mul(ci)?)?;
            }
        }
        sym_rows.push(vec_of_mat(&g));
    }
    let sym_space = Subspace::from_rows(n * n, order, sym_rows);
    find_invertible_in_span(sym_space.basis(), n, order)
}

/// Dimension of the unital matrix algebra generated by the tuple; equals n^2
/// iff the tuple acts absolutely irreducibly (Burnside).
pub fn algebra_closure_dim(t: &[Mat]) -> Result<usize> {
    assert!(!t.is_empty());
    let n = t[0].rows();
    let mut order = 1;
    for m in t {
        if m.rows() != n || m.cols() != n {
            return Err(LinalgError::DimensionMismatch("closure operands".into()));
        }
        order = lcm_order(order, m.order())?;
    }
    let gens: Vec<Mat> = t.iter().map(|m| m.embed(order)).collect::<std::result::Result<_, _>>()?;
    // Fast positive certificate: the closure dimension after reduction
    // modulo a prime p = 1 (mod order) is a lower bound for the rational
    // dimension, so reaching n^2 there settles the question exactly.
    if closure_full_mod_p(&gens, n, order) {
        return Ok(n * n);
    }
    let mut span = RowSpan::new(n * n, order);
    let mut worklist: Vec<Mat> = Vec::new();
    let id = Mat::identity(n, order);
    span.insert(&vec_of_mat(&id));
    worklist.push(id);
    while let Some(m) = worklist.pop() {
        for g in &gens {
            let prod = m.mul(g)?;
            if span.insert(&vec_of_mat(&prod)) {
                worklist.push(prod);
                if span.dim() == n * n {
                    return Ok(n * n);
                }
            }
        }
    }
    Ok(span.dim())
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A matrix tuple reduced modulo a prime p = 1 (mod order), with cyclotomic
/// generators mapped to an order-`order` element of the prime field. Returns
/// None when no suitable reduction exists (a denominator vanishes mod p).
fn reduce_mod_p(gens: &[Mat], order: u64, p: u64) -> Option<Vec<Vec<u64>>> {
    use num::bigint::BigInt;
    use num::ToPrimitive;
    // an element of exact multiplicative order `order`
    let mut omega = 0u64;
    'outer: for g in 2..p {
        let w = mod_pow(g, (p - 1) / order, p);
        let mut q = order;
        let mut fac = 2;
        let mut primes = Vec::new();
        while fac * fac <= q {
            if q % fac == 0 {
                primes.push(fac);
                while q % fac == 0 {
                    q /= fac;
                }
            }
            fac += 1;
        }
        if q > 1 {
            primes.push(q);
        }
        for f in primes {
            if mod_pow(w, order / f, p) == 1 {
                continue 'outer;
            }
        }
        omega = w;
        break;
    }
    if omega == 0 && order > 1 {
        return None;
    }
    if order == 1 {
        omega = 1;
    }
    let big_p = BigInt::from(p);
    let to_fp = |r: &crate::cyclo::Rational| -> Option<u64> {
        let num = ((r.numer() % &big_p) + &big_p) % &big_p;
        let den = ((r.denom() % &big_p) + &big_p) % &big_p;
        let den = den.to_u64()?;
        if den == 0 {
            return None;
        }
        let inv = mod_pow(den, p - 2, p);
        Some((num.to_u64()? as u128 * inv as u128 % p as u128) as u64)
    };
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let n = g.rows();
        let mut flat = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                let mut pow = 1u64;
                for c in g.at(i, j).coeffs() {
                    let v = to_fp(c)?;
                    acc = (acc + (v as u128 * pow as u128 % p as u128) as u64) % p;
                    pow = (pow as u128 * omega as u128 % p as u128) as u64;
                }
                flat[i * n + j] = acc;
            }
        }
        out.push(flat);
    }
    Some(out)
}

/// True when the generated matrix algebra is provably all of M_n: the span
/// of words in the generators reaches dimension n^2 modulo a prime.
fn closure_full_mod_p(gens: &[Mat], n: usize, order: u64) -> bool {
    let mut p = 1_000_003u64 / order * order + 1;
    let mut tried = 0;
    while tried < 4 {
        while !(p % order == 1 % order && is_prime(p)) {
            p += order;
        }
        if let Some(flat) = reduce_mod_p(gens, order, p) {
            if closure_dim_mod_p(&flat, n, p) == n * n {
                return true;
            }
            return false;
        }
        tried += 1;
        p += order;
    }
    false
}

fn closure_dim_mod_p(gens: &[Vec<u64>], n: usize, p: u64) -> usize {
    let dim = n * n;
    // reduced rows with their pivot columns
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let insert = |v: &[u64], rows: &mut Vec<Vec<u64>>, pivots: &mut Vec<usize>| -> bool {
        let mut v = v.to_vec();
        for (r, &c) in rows.iter().zip(pivots.iter()) {
            if v[c] != 0 {
                let f = v[c];
                for k in 0..dim {
                    v[k] = ((v[k] as u128 + (p as u128 - f as u128) * r[k] as u128) % p as u128)
                        as u64;
                }
            }
        }
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let inv = mod_pow(v[c], p - 2, p);
            for x in v.iter_mut() {
                *x = (*x as u128 * inv as u128 % p as u128) as u64;
            }
            rows.push(v);
            pivots.push(c);
            true
        } else {
            false
        }
    };
    let mut id = vec![0u64; dim];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    let mut worklist = vec![id.clone()];
    insert(&id, &mut rows, &mut pivots);
    while let Some(m) = worklist.pop() {
        for g in gens {
            // product of flattened n x n matrices
            let mut prod = vec![0u64; dim];
            for i in 0..n {
                for k in 0..n {
                    let a = m[i * n + k];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        prod[i * n + j] = ((prod[i * n + j] as u128
                            + a as u128 * g[k * n + j] as u128)
                            % p as u128) as u64;
                    }
                }
            }
            if insert(&prod, &mut rows, &mut pivots) {
                if rows.len() == dim {
                    return dim;
                }
                worklist.push(prod);
            }
        }
    }
    rows.len()
}

/// Coefficients `c` with `sum_i c_i rows_i = v`, if `v` lies in the span.
pub fn express_in_span(rows: &[Vec<CycNum>], v: &[CycNum], order: u64) -> Result<Option<Vec<CycNum>>> {
    let k = rows.len();
    let m = v.len();
    if k == 0 {
        return Ok(if v.iter().all(|e| e.is_zero()) {
            Some(Vec::new())
        } else {
            None
        });
    }
    // Columns are the given rows; solve the transposed system by elimination.
    let mut a = Mat::zeros(m, k + 1, order);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            a.set(j, i, e.clone());
        }
    }
    for (j, e) in v.iter().enumerate() {
        a.set(j, k, e.clone());
    }
    let (r, pivots, _) = a.rref();
    if pivots.contains(&k) {
        return Ok(None); // inconsistent
    }
    let mut c = vec![CycNum::zero(order); k];
    for (ri, &col) in pivots.iter().enumerate() {
        c[col] = r.at(ri, k).clone();
    }
    Ok(Some(c))
}

/// `{v : v T_i = v for all i}`.
pub fn common_fixed_space(t: &[Mat]) -> Result<Subspace> {
    assert!(!t.is_empty());
    let n = t[0].rows();
    let mut order = 1;
    for m in t {
        order = lcm_order(order, m.order())?;
    }
    let mut acc = Subspace::full(n, order);
    for m in t {
        let k = m.embed(order)?.sub_identity()?.kernel_basis();
        acc = acc.intersect(&k)?;
    }
    Ok(acc)
}

#[cfg(test)]
pub mod test_support {
    use super::*;
    use crate::cyclo::Rational;
    use num::BigInt;
    use rand::Rng;

    pub fn int_mat(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| CycNum::from_integer(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    pub fn zeta(n: u64, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k).unwrap()
    }

    pub fn rational_vec(vals: &[i64]) -> Vec<CycNum> {
        vals.iter().map(|&v| CycNum::from_integer(v)).collect()
    }

    pub fn diag(entries: Vec<CycNum>) -> Mat {
        let n = entries.len();
        let mut order = 1;
        for e in &entries {
            order = lcm_order(order, e.order()).unwrap();
        }
        let mut m = Mat::zeros(n, n, order);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Random small-integer matrix with entries in [-3, 3].
    pub fn random_int_mat<R: Rng>(rng: &mut R, n: usize) -> Mat {
        let entries = (0..n * n)
            .map(|_| {
                CycNum::from_rational(Rational::from_integer(BigInt::from(
                    rng.gen_range(-3i64..=3),
                )))
            })
            .collect();
        Mat::new(n, n, entries).unwrap()
    }

    /// Random invertible small-integer matrix.
    pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Mat {
        loop {
            let m = random_int_mat(rng, n);
            if m.inverse().is_ok() {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rref_examples() {
        let id = Mat::identity(3, 1);
        let (r, _, rank) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 3);
        let z = Mat::zeros(2, 2, 1);
        assert_eq!(z.rank(), 0);
        // [[1, z3], [z3^2, 1]] has rank 1: row 2 = z3^2 * row 1 since z3^2 * z3 = 1.
        let m = Mat::from_rows(vec![
            vec![CycNum::from_integer(1), zeta(3, 1)],
            vec![zeta(3, 2), CycNum::from_integer(1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_image_examples() {
        let a = diag(vec![zeta(3, 1), CycNum::from_integer(1)]);
        let k = a.sub_identity().unwrap().kernel_basis();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&rational_vec(&[0, 1])));
        assert_eq!(Mat::zeros(3, 3, 1).image_basis().dim(), 0);
        let swap = int_mat(&[&[0, 1], &[1, 0]]);
        let k = swap.sub_identity().unwrap().kernel_basis();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&rational_vec(&[1, 1])));
    }

    #[test]
    fn intersect_examples() {
        let u = Subspace::from_rows(3, 1, vec![rational_vec(&[1, 0, 0]), rational_vec(&[0, 1, 0])]);
        let w = Subspace::from_rows(3, 1, vec![rational_vec(&[0, 1, 0]), rational_vec(&[0, 0, 1])]);
        assert_eq!(u.intersect(&u).unwrap(), u);
        let i = u.intersect(&w).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&rational_vec(&[0, 1, 0])));
        let l1 = Subspace::from_rows(2, 1, vec![rational_vec(&[1, 0])]);
        let l2 = Subspace::from_rows(2, 1, vec![rational_vec(&[1, 1])]);
        assert_eq!(l1.intersect(&l2).unwrap().dim(), 0);
    }

    #[test]
    fn annihilator_cuts_out_subspace() {
        let u = Subspace::from_rows(3, 1, vec![rational_vec(&[1, 2, 0]), rational_vec(&[0, 0, 1])]);
        let c = u.annihilator();
        assert_eq!(c.cols(), 1);
        for b in u.basis() {
            let v = Mat::from_rows(vec![b.clone()]).unwrap().mul(&c).unwrap();
            assert!(v.is_zero());
        }
        let outside = Mat::from_rows(vec![rational_vec(&[0, 1, 0])]).unwrap();
        assert!(!outside.mul(&c).unwrap().is_zero());
    }

    #[test]
    fn jordan_examples() {
        let one = CycNum::from_integer(1);
        let id3 = Mat::identity(3, 1);
        let jd = jordan_data(&id3, &[one.clone()]).unwrap();
        assert_eq!(jd.blocks(), &[(one.clone(), 1), (one.clone(), 1), (one.clone(), 1)]);
        let trans = int_mat(&[&[1, 2], &[0, 1]]);
        let jd = jordan_data(&trans, &default_candidates(1)).unwrap();
        assert_eq!(jd.blocks(), &[(one.clone(), 2)]);
        // trace -2, det 1, rank(M + 1) = 1: a single block J(-1, 2).
        let m = int_mat(&[&[1, 2], &[-2, -3]]);
        let jd = jordan_data(&m, &default_candidates(1)).unwrap();
        assert_eq!(jd.blocks(), &[(CycNum::from_integer(-1), 2)]);
        // candidate set too small
        assert!(matches!(
            jordan_data(&int_mat(&[&[2]]), &default_candidates(1)),
            Err(LinalgError::EigenvalueOutsideCandidates { .. })
        ));
    }

    #[test]
    fn kronecker_examples() {
        let lam = diag(vec![zeta(3, 1)]);
        let b = int_mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(kronecker(&lam, &b).unwrap(), b.scalar_mul(&zeta(3, 1)).unwrap());
        assert_eq!(
            kronecker(&Mat::identity(2, 1), &Mat::identity(3, 1)).unwrap(),
            Mat::identity(6, 1)
        );
        // eigenvalue products under kronecker
        let a = diag(vec![zeta(3, 1), zeta(3, 2)]);
        let c = diag(vec![CycNum::from_integer(-1), CycNum::from_integer(-1)]);
        let k = kronecker(&a, &c).unwrap();
        let jd = jordan_data(&k, &default_candidates(3)).unwrap();
        let expect = JordanData::new(vec![
            (zeta(3, 1).neg(), 1),
            (zeta(3, 1).neg(), 1),
            (zeta(3, 2).neg(), 1),
            (zeta(3, 2).neg(), 1),
        ]);
        assert_eq!(jd, expect);
        // direct sum
        let ds = direct_sum(&a, &c).unwrap();
        assert_eq!(ds.rows(), 4);
        assert_eq!(ds.at(2, 2), &CycNum::from_integer(-1));
        assert!(ds.at(0, 2).is_zero());
    }

    #[test]
    fn exterior_cube_examples() {
        assert_eq!(exterior_cube(&Mat::identity(7, 1)).unwrap(), Mat::identity(35, 1));
        let c = CycNum::from_integer(5);
        let e = exterior_cube(&Mat::scalar(4, &c)).unwrap();
        assert_eq!(e, Mat::scalar(4, &CycNum::from_integer(125)));
        assert!(matches!(
            exterior_cube(&Mat::identity(2, 1)),
            Err(LinalgError::DimensionTooSmall(2))
        ));
        // det of the cube of a random 4x4 is det^3
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_invertible(&mut rng, 4);
        let d = a.det().unwrap();
        let d3 = d.mul(&d).unwrap().mul(&d).unwrap();
        assert_eq!(exterior_cube(&a).unwrap().det().unwrap(), d3);
    }

    #[test]
    fn conjugator_examples() {
        let s = vec![int_mat(&[&[1, 1], &[0, 1]])];
        assert!(simultaneous_conjugator(&s, &s).unwrap().is_some());
        let d1 = vec![int_mat(&[&[1, 0], &[0, 2]])];
        let d2 = vec![int_mat(&[&[2, 0], &[0, 1]])];
        let x = simultaneous_conjugator(&d1, &d2).unwrap().unwrap();
        let lhs = x.mul(&d1[0]).unwrap();
        let rhs = d2[0].mul(&x).unwrap();
        assert_eq!(lhs, rhs);
        let t = vec![Mat::identity(2, 1)];
        assert!(simultaneous_conjugator(&s, &t).unwrap().is_none());
    }

    #[test]
    fn invariant_form_examples() {
        let forms = invariant_bilinear_forms(&[Mat::identity(2, 1)]).unwrap();
        assert_eq!(forms.space.dim(), 4);
        assert!(forms.symmetric_nondegenerate.is_some());
        assert!(forms.alternating_nondegenerate.is_some());
        let refl = vec![int_mat(&[&[0, 1], &[1, 0]])];
        let forms = invariant_bilinear_forms(&refl).unwrap();
        let g = forms.symmetric_nondegenerate.expect("reflection is orthogonal");
        let check = refl[0].transpose().mul(&g).unwrap().mul(&refl[0]).unwrap();
        assert_eq!(check, g);
        // SL2 generators: only the alternating form survives.
        let sl2 = vec![int_mat(&[&[1, 1], &[0, 1]]), int_mat(&[&[1, 0], &[1, 1]])];
        let forms = invariant_bilinear_forms(&sl2).unwrap();
        assert_eq!(forms.space.dim(), 1);
        assert!(forms.symmetric_nondegenerate.is_none());
        let g = forms.alternating_nondegenerate.expect("symplectic form");
        let scaled = g.scalar_mul(&g.at(0, 1).inv().unwrap()).unwrap();
        assert_eq!(scaled, int_mat(&[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(algebra_closure_dim(&[Mat::identity(2, 1)]).unwrap(), 1);
        assert_eq!(
            algebra_closure_dim(&[diag(vec![
                CycNum::from_integer(1),
                CycNum::from_integer(-1)
            ])])
            .unwrap(),
            2
        );
        let t = vec![int_mat(&[&[0, 1], &[1, 0]]), diag(vec![zeta(3, 1), zeta(3, 2)])];
        assert_eq!(algebra_closure_dim(&t).unwrap(), 4);
    }

    #[test]
    fn fixed_space_examples() {
        assert_eq!(common_fixed_space(&[Mat::identity(3, 1)]).unwrap().dim(), 3);
        let f = common_fixed_space(&[diag(vec![zeta(3, 1), CycNum::from_integer(1)])]).unwrap();
        assert_eq!(f.dim(), 1);
        assert!(f.contains(&rational_vec(&[0, 1])));
        let t = vec![
            int_mat(&[&[0, 1], &[1, 0]]),
            diag(vec![CycNum::from_integer(-1), CycNum::from_integer(-1)]),
        ];
        assert_eq!(common_fixed_space(&t).unwrap().dim(), 0);
    }

    #[test]
    fn inverse_and_det() {
        let m = int_mat(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(m.det().unwrap(), CycNum::from_integer(1));
        assert!(int_mat(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn rank_nullity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_int_mat(&mut rng, 4);
            assert_eq!(m.kernel_basis().dim() + m.rank(), m.rows());
        }
    }

    #[test]
    fn jordan_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = diag(vec![
            zeta(3, 1),
            zeta(3, 1),
            CycNum::from_integer(1),
            CycNum::from_integer(-1),
        ]);
        let cands = default_candidates(3);
        let base = jordan_data(&m, &cands).unwrap();
        for _ in 0..8 {
            let p = random_invertible(&mut rng, 4);
            let conj = p.mul(&m).unwrap().mul(&p.inverse().unwrap()).unwrap();
            assert_eq!(jordan_data(&conj, &cands).unwrap(), base);
        }
    }

    #[test]
    fn exterior_cube_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let a = random_int_mat(&mut rng, 4);
            let b = random_int_mat(&mut rng, 4);
            let lhs = exterior_cube(&a.mul(&b).unwrap()).unwrap();
            let rhs = exterior_cube(&a).unwrap().mul(&exterior_cube(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn conjugator_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..5 {
            let s = vec![random_int_mat(&mut rng, 3), random_int_mat(&mut rng, 3)];
            let p = random_invertible(&mut rng, 3);
            let pinv = p.inverse().unwrap();
            let t: Vec<Mat> = s
                .iter()
                .map(|m| p.mul(m).unwrap().mul(&pinv).unwrap())
                .collect();
            let x = simultaneous_conjugator(&s, &t).unwrap().expect("conjugate tuples");
            for (si, ti) in s.iter().zip(&t) {
                assert_eq!(x.mul(si).unwrap(), ti.mul(&x).unwrap());
            }
        }
    }

    #[test]
    fn closure_full_implies_no_invariants() {
        let t = vec![int_mat(&[&[0, 1], &[1, 0]]), diag(vec![zeta(3, 1), zeta(3, 2)])];
        assert_eq!(algebra_closure_dim(&t).unwrap(), 4);
        assert_eq!(common_fixed_space(&t).unwrap().dim(), 0);
        let dual: Vec<Mat> = t
            .iter()
            .map(|m| m.inverse().unwrap().transpose())
            .collect();
        assert_eq!(common_fixed_space(&dual).unwrap().dim(), 0);
    }
}
