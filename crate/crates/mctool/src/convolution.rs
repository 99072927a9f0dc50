//! Middle convolution with rank-one local systems.
//!
//! Two independent computations of the same operation live here: the
//! closed-form block construction `mc` for a single Kummer factor, and the
//! general parabolic-cocycle engine `convolve_rank_one` that works for any
//! number of rank-one punctures by transporting braid automorphisms to an
//! action on parabolic cohomology. Their agreement on the overlap (q = 1) is
//! enforced by tests.

use crate::cyclo::{CycNum, CycloError};
use crate::linalg::{
    express_in_span, jordan_data, JordanData, LinalgError, Mat, RowSpan, Subspace,
};
use crate::tuples::{fiber_tuple, MonodromyTuple, RankOneTuple, TupleError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConvError {
    #[error("convolution parameter lambda must not be 1")]
    LambdaIsOne,
    #[error("input tuple is not irreducible with two nontrivial entries")]
    PropertyTFailed,
    #[error("input tuple has global sections (nonzero common fixed space)")]
    HasGlobalSections,
    #[error("braid index ({0}, {1}) out of range for (p, q) = ({2}, {3})")]
    IndexOutOfRange(usize, usize, usize, usize),
    #[error("engine dimension {0} disagrees with the rank formula value {1}")]
    RankMismatch(usize, i64),
    #[error("internal consistency failure: {0}")]
    InternalCheckFailed(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, ConvError>;

// ---------------------------------------------------------------------------
// Free words and braid automorphisms
// ---------------------------------------------------------------------------

/// A reduced word in the free group on generators 1..=m; letters are
/// (generator, +-1) pairs and adjacent inverse pairs are cancelled eagerly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeWord {
    letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord { letters: Vec::new() }
    }

    pub fn generator(i: usize) -> Self {
        FreeWord {
            letters: vec![(i, 1)],
        }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, letter: (usize, i8)) {
        if let Some(&last) = self.letters.last() {
            if last.0 == letter.0 && last.1 == -letter.1 {
                self.letters.pop();
                return;
            }
        }
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }

    /// `self^g = g^{-1} self g`.
    pub fn conjugate(&self, g: &Self) -> Self {
        g.inverse().concat(self).concat(g)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().concat(&b.inverse()).concat(a).concat(b)
    }

    /// Substitute each generator by its image word.
    pub fn substitute(&self, images: &[FreeWord]) -> Self {
        let mut out = FreeWord::identity();
        for &(g, e) in &self.letters {
            let img = &images[g - 1];
            let piece = if e == 1 { img.clone() } else { img.inverse() };
            out = out.concat(&piece);
        }
        out
    }

    /// Evaluate under a representation given by generator matrices (1-based).
    pub fn evaluate(&self, gens: &[Mat]) -> Result<Mat> {
        let n = gens[0].rows();
        let order = gens[0].order();
        let mut acc = Mat::identity(n, order);
        for &(g, e) in &self.letters {
            let m = if e == 1 {
                gens[g - 1].clone()
            } else {
                gens[g - 1].inverse().map_err(LinalgError::from)?
            };
            acc = acc.mul(&m).map_err(LinalgError::from)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for FreeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(g, e) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "a{}", g)?;
            } else {
                write!(f, "a{}^-1", g)?;
            }
        }
        Ok(())
    }
}

/// Generator images of a pure-braid automorphism of the free group on the
/// p + q fiber generators.
#[derive(Clone, Debug)]
pub struct BraidAuto {
    pub p: usize,
    pub q: usize,
    pub i: usize,
    pub j: usize,
    pub images: Vec<FreeWord>,
}

/// The automorphism braiding the i-th of the first p strands around the j-th
/// of the last q: with g = a_{p+j} and c = [a_i, g], generators below i and
/// above p + j are fixed, a_i -> g^{-1} a_i g, intermediate generators are
/// conjugated by c, and g -> (a_i g)^{-1} g (a_i g).
pub fn braid_auto(p: usize, q: usize, i: usize, j: usize) -> Result<BraidAuto> {
    if i < 1 || i > p || j < 1 || j > q {
        return Err(ConvError::IndexOutOfRange(i, j, p, q));
    }
    let gi = FreeWord::generator(i);
    let g = FreeWord::generator(p + j);
    let c = FreeWord::commutator(&gi, &g);
    let mut images = Vec::with_capacity(p + q);
    for k in 1..=p + q {
        let img = if k < i || k > p + j {
            FreeWord::generator(k)
        } else if k == i {
            gi.conjugate(&g)
        } else if k == p + j {
            g.conjugate(&gi.concat(&g))
        } else {
            FreeWord::generator(k).conjugate(&c)
        };
        images.push(img);
    }
    Ok(BraidAuto { p, q, i, j, images })
}

// ---------------------------------------------------------------------------
// Parabolic cocycles
// ---------------------------------------------------------------------------

/// The space of parabolic 1-cocycles of the fiber tuple, its coboundaries,
/// and a deterministic choice of lifts for a basis of the quotient.
///
/// A cocycle is stored as the row vector (d(a_1), ..., d(a_{p+q})) of its
/// generator values, concatenated into one vector of length (p+q) n.
pub struct ParabolicCocycleSpace {
    pub p: usize,
    pub q: usize,
    fiber: MonodromyTuple,
    zpar: Subspace,
    coboundaries: Subspace,
    h_basis: Vec<Vec<CycNum>>,
    cob_rows: Vec<Vec<CycNum>>,
}

impl ParabolicCocycleSpace {
    pub fn new(t1: &MonodromyTuple, r2: &RankOneTuple) -> Result<Self> {
        let p = t1.puncture_count();
        let q = r2.puncture_count();
        let fiber = fiber_tuple(t1, r2)?;
        let n = fiber.rank();
        let order = fiber.order();
        let m = p + q;
        let ambient = m * n;
        let entries = fiber.entries();

        // Suffix products S_k = C_k ... C_m (S_{m+1} = 1).
        let mut suffix = vec![Mat::identity(n, order); m + 2];
        for k in (1..=m).rev() {
            suffix[k] = entries[k - 1].mul(&suffix[k + 1]).map_err(LinalgError::from)?;
        }
        let full = suffix[1].clone();

        // Parabolic conditions as an annihilator matrix: v * cond = 0.
        let mut cond_cols: Vec<Mat> = Vec::new();
        for k in 1..=m {
            let im = entries[k - 1]
                .sub_identity()
                .map_err(LinalgError::from)?
                .image_basis();
            let ann = im.annihilator(); // n x a_k
            if ann.cols() == 0 {
                continue;
            }
            let mut col = Mat::zeros(ambient, ann.cols(), order);
            for r in 0..n {
                for c in 0..ann.cols() {
                    col.set((k - 1) * n + r, c, ann.at(r, c).clone());
                }
            }
            cond_cols.push(col);
        }
        // Full-product condition: sum_k d(a_k) S_{k+1} in Im(C_1...C_m - 1).
        let im_full = full
            .sub_identity()
            .map_err(LinalgError::from)?
            .image_basis();
        let ann = im_full.annihilator();
        if ann.cols() > 0 {
            let mut col = Mat::zeros(ambient, ann.cols(), order);
            for k in 1..=m {
                let block = suffix[k + 1].mul(&ann).map_err(LinalgError::from)?;
                for r in 0..n {
                    for c in 0..block.cols() {
                        col.set((k - 1) * n + r, c, block.at(r, c).clone());
                    }
                }
            }
            cond_cols.push(col);
        }
        let total_cols: usize = cond_cols.iter().map(|c| c.cols()).sum();
        let mut cond = Mat::zeros(ambient, total_cols, order);
        let mut off = 0;
        for c in &cond_cols {
            for r in 0..ambient {
                for j in 0..c.cols() {
                    if !c.at(r, j).is_zero() {
                        cond.set(r, off + j, c.at(r, j).clone());
                    }
                }
            }
            off += c.cols();
        }
        let zpar = cond.kernel_basis();

        // Coboundaries: rows v -> (v(1 - C_1), ..., v(1 - C_m)).
        let mut cob_rows = Vec::new();
        let id = Mat::identity(n, order);
        for vi in 0..n {
            let mut row = Vec::with_capacity(ambient);
            for k in 1..=m {
                let diff = id.sub(&entries[k - 1]).map_err(LinalgError::from)?;
                row.extend(diff.row(vi).to_vec());
            }
            cob_rows.push(row);
        }
        let coboundaries = Subspace::from_rows(ambient, order, cob_rows);
        let cob_rows: Vec<Vec<CycNum>> = coboundaries.basis().to_vec();

        // Sanity: coboundaries are parabolic cocycles.
        for row in &cob_rows {
            if !zpar.contains(row) {
                return Err(ConvError::InternalCheckFailed(
                    "coboundary outside the parabolic cocycle space".into(),
                ));
            }
        }

        // Deterministic lifts of a basis of Zpar / B: greedily keep the RREF
        // basis rows of Zpar that grow the span over the coboundaries.
        let mut span = RowSpan::new(ambient, order);
        for row in &cob_rows {
            span.insert(row);
        }
        let mut h_basis = Vec::new();
        for row in zpar.basis() {
            if span.insert(row) {
                h_basis.push(row.clone());
            }
        }

        Ok(ParabolicCocycleSpace {
            p,
            q,
            fiber,
            zpar,
            coboundaries,
            h_basis,
            cob_rows,
        })
    }

    pub fn fiber(&self) -> &MonodromyTuple {
        &self.fiber
    }

    pub fn zpar(&self) -> &Subspace {
        &self.zpar
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.coboundaries
    }

    pub fn h_dim(&self) -> usize {
        self.h_basis.len()
    }

    pub fn h_basis(&self) -> &[Vec<CycNum>] {
        &self.h_basis
    }

    fn rank(&self) -> usize {
        self.fiber.rank()
    }

    /// Generator value d(a_k) (1-based k) of a cocycle vector.
    fn value(&self, cocycle: &[CycNum], k: usize) -> Vec<CycNum> {
        let n = self.rank();
        cocycle[(k - 1) * n..k * n].to_vec()
    }

    /// Extend the cocycle to an arbitrary word via
    /// d(xy) = d(x) rho(y) + d(y) and d(x^{-1}) = -d(x) rho(x)^{-1}.
    pub fn evaluate_cocycle(&self, cocycle: &[CycNum], w: &FreeWord) -> Result<Vec<CycNum>> {
        let n = self.rank();
        let order = self.fiber.order();
        let entries = self.fiber.entries();
        let mut acc = vec![CycNum::zero(order); n];
        let mut suffix = Mat::identity(n, order);
        for &(g, e) in w.letters().iter().rev() {
            let rho = &entries[g - 1];
            let dval = if e == 1 {
                self.value(cocycle, g)
            } else {
                // -d(g) rho(g)^{-1}
                let inv = rho.inverse().map_err(LinalgError::from)?;
                let v = Mat::from_rows(vec![self.value(cocycle, g)])
                    .map_err(LinalgError::from)?
                    .mul(&inv)
                    .map_err(LinalgError::from)?;
                v.row(0).iter().map(|e| e.neg()).collect()
            };
            // acc = dval * suffix + acc
            let moved = Mat::from_rows(vec![dval])
                .map_err(LinalgError::from)?
                .mul(&suffix)
                .map_err(LinalgError::from)?;
            for (a, b) in acc.iter_mut().zip(moved.row(0)) {
                *a = a.add(b)?;
            }
            let rho_e = if e == 1 {
                rho.clone()
            } else {
                rho.inverse().map_err(LinalgError::from)?
            };
            suffix = rho_e.mul(&suffix).map_err(LinalgError::from)?;
        }
        Ok(acc)
    }

    /// Coordinates in the chosen H basis of a parabolic cocycle, modulo
    /// coboundaries.
    pub fn h_coordinates(&self, cocycle: &[CycNum]) -> Result<Vec<CycNum>> {
        let order = self.fiber.order();
        let mut rows = self.cob_rows.clone();
        rows.extend(self.h_basis.iter().cloned());
        let c = express_in_span(&rows, cocycle, order)
            .map_err(ConvError::from)?
            .ok_or_else(|| {
                ConvError::InternalCheckFailed("cocycle outside Zpar during projection".into())
            })?;
        Ok(c[self.cob_rows.len()..].to_vec())
    }

    /// The matrix (rows = H basis) of the map
    /// class -> (d([a_i, a_{p+j}]))_{i,j}, using the closed form
    /// d(a_i)(lambda_j - 1) + d(a_{p+j})(1 - A_i); blocks ordered by
    /// k = (j-1) p + i.
    pub fn twisted_evaluation(&self) -> Result<Mat> {
        let n = self.rank();
        let order = self.fiber.order();
        let p = self.p;
        let q = self.q;
        let entries = self.fiber.entries();
        let mut rows = Vec::with_capacity(self.h_dim());
        for z in &self.h_basis {
            let mut row = Vec::with_capacity(p * q * n);
            for j in 1..=q {
                for i in 1..=p {
                    let lam = entries[p + j - 1].at(0, 0).clone();
                    let lam_minus_1 = lam.sub(&CycNum::one(order))?;
                    let di = Mat::from_rows(vec![self.value(z, i)])
                        .map_err(LinalgError::from)?
                        .scalar_mul(&lam_minus_1)
                        .map_err(LinalgError::from)?;
                    let one_minus_a = Mat::identity(n, order)
                        .sub(&entries[i - 1])
                        .map_err(LinalgError::from)?;
                    let dj = Mat::from_rows(vec![self.value(z, p + j)])
                        .map_err(LinalgError::from)?
                        .mul(&one_minus_a)
                        .map_err(LinalgError::from)?;
                    let total = di.add(&dj).map_err(LinalgError::from)?;
                    row.extend(total.row(0).to_vec());
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(Mat::zeros(0, p * q * n, order));
        }
        Ok(Mat::from_rows(rows).map_err(LinalgError::from)?)
    }
}

// ---------------------------------------------------------------------------
// Closed-form middle convolution (single Kummer factor)
// ---------------------------------------------------------------------------

fn check_lambda(lam: &CycNum) -> Result<()> {
    if lam.is_one() || lam.is_zero() {
        return Err(ConvError::LambdaIsOne);
    }
    Ok(())
}

/// The block matrices D~_1, ..., D~_p on V^p: D~_i is the identity outside
/// the i-th block row, which reads
/// (lambda(A_1 - 1), ..., lambda(A_{i-1} - 1), lambda A_i, A_{i+1} - 1, ..., A_p - 1).
pub fn mc_blocks(t: &MonodromyTuple, lam: &CycNum) -> Result<Vec<Mat>> {
    check_lambda(lam)?;
    let p = t.puncture_count();
    let n = t.rank();
    let order = crate::cyclo::lcm_order(t.order(), lam.order())?;
    let lam = lam.embed(order)?;
    let entries: Vec<Mat> = t
        .entries()
        .iter()
        .map(|e| e.embed(order))
        .collect::<std::result::Result<_, _>>()?;
    let mut out = Vec::with_capacity(p);
    for i in 1..=p {
        let mut d = Mat::identity(p * n, order);
        for b in 1..=p {
            let block = if b < i {
                entries[b - 1]
                    .sub_identity()
                    .map_err(LinalgError::from)?
                    .scalar_mul(&lam)
                    .map_err(LinalgError::from)?
            } else if b == i {
                entries[b - 1].scalar_mul(&lam).map_err(LinalgError::from)?
            } else {
                entries[b - 1].sub_identity().map_err(LinalgError::from)?
            };
            for r in 0..n {
                for c in 0..n {
                    d.set((i - 1) * n + r, (b - 1) * n + c, block.at(r, c).clone());
                }
            }
        }
        out.push(d);
    }
    Ok(out)
}

/// The invariant subspace W = K n L of V^p on which the convolution acts:
/// K puts Im(A_i - 1) in the i-th block; L is the membership condition
/// {(v_1, ..., v_p) : sum_i v_i A_{i+1}...A_p in Im(A_1...A_p lambda - 1)}.
pub fn mc_space(t: &MonodromyTuple, lam: &CycNum) -> Result<Subspace> {
    check_lambda(lam)?;
    if !t.property_t()? {
        return Err(ConvError::PropertyTFailed);
    }
    let p = t.puncture_count();
    let n = t.rank();
    let order = crate::cyclo::lcm_order(t.order(), lam.order())?;
    let lam = lam.embed(order)?;
    let entries: Vec<Mat> = t
        .entries()
        .iter()
        .map(|e| e.embed(order))
        .collect::<std::result::Result<_, _>>()?;
    let ambient = p * n;

    // K = direct sum of the images of (A_i - 1).
    let mut k_rows = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        let im = a.sub_identity().map_err(LinalgError::from)?.image_basis();
        for b in im.basis() {
            let mut row = vec![CycNum::zero(order); ambient];
            row[i * n..(i + 1) * n].clone_from_slice(b);
            k_rows.push(row);
        }
    }
    let k = Subspace::from_rows(ambient, order, k_rows);

    // L: membership condition against Im(A_1...A_p lambda - 1).
    let mut suffix = vec![Mat::identity(n, order); p + 2];
    for i in (1..=p).rev() {
        suffix[i] = entries[i - 1].mul(&suffix[i + 1]).map_err(LinalgError::from)?;
    }
    let scaled = suffix[1].scalar_mul(&lam).map_err(LinalgError::from)?;
    let im = scaled
        .sub_identity()
        .map_err(LinalgError::from)?
        .image_basis();
    let ann = im.annihilator();
    let l = if ann.cols() == 0 {
        Subspace::full(ambient, order)
    } else {
        let mut cond = Mat::zeros(ambient, ann.cols(), order);
        for i in 1..=p {
            let block = suffix[i + 1].mul(&ann).map_err(LinalgError::from)?;
            for r in 0..n {
                for c in 0..block.cols() {
                    cond.set((i - 1) * n + r, c, block.at(r, c).clone());
                }
            }
        }
        cond.kernel_basis()
    };
    Ok(k.intersect(&l).map_err(LinalgError::from)?)
}

/// Middle convolution with the Kummer sheaf of parameter lambda: restrict the
/// block matrices to W and return the resulting tuple.
pub fn mc(t: &MonodromyTuple, lam: &CycNum) -> Result<MonodromyTuple> {
    let w = mc_space(t, lam)?;
    let blocks = mc_blocks(t, lam)?;
    let d = w.dim();
    let order = w.order();
    let basis = w.basis().to_vec();
    let mut out = Vec::with_capacity(blocks.len());
    for blk in &blocks {
        let mut rows = Vec::with_capacity(d);
        for b in &basis {
            let moved = Mat::from_rows(vec![b.clone()])
                .map_err(LinalgError::from)?
                .mul(&blk.embed(order).map_err(LinalgError::from)?)
                .map_err(LinalgError::from)?;
            let c = express_in_span(&basis, moved.row(0), order)?
                .ok_or_else(|| {
                    ConvError::InternalCheckFailed("block matrix does not stabilize W".into())
                })?;
            rows.push(c);
        }
        out.push(Mat::from_rows(rows).map_err(LinalgError::from)?);
    }
    Ok(MonodromyTuple::new(out)?)
}

// ---------------------------------------------------------------------------
// Rank formula and the general engine
// ---------------------------------------------------------------------------

/// Rank of the middle convolution of T1 with a rank-one tuple:
/// (p+q-1) n - sum_i dim ker(A_i - 1) - n sum_j dim ker(lambda_j - 1)
///           - dim ker(lambda_{q+1} A_{p+1} - 1).
pub fn convolution_rank(t1: &MonodromyTuple, r2: &RankOneTuple) -> Result<i64> {
    if crate::linalg::common_fixed_space(&t1.all_entries())?.dim() > 0 {
        return Err(ConvError::HasGlobalSections);
    }
    let p = t1.puncture_count() as i64;
    let q = r2.puncture_count() as i64;
    let n = t1.rank() as i64;
    let mut total = (p + q - 1) * n;
    for a in t1.entries() {
        total -= a.sub_identity().map_err(LinalgError::from)?.kernel_basis().dim() as i64;
    }
    for l in r2.scalars() {
        if l.is_one() {
            total -= n;
        }
    }
    let scaled = t1
        .infinity_entry()
        .scalar_mul(r2.infinity_scalar())
        .map_err(LinalgError::from)?;
    total -= scaled
        .sub_identity()
        .map_err(LinalgError::from)?
        .kernel_basis()
        .dim() as i64;
    Ok(total)
}

/// Middle convolution via the parabolic-cocycle engine: the output entries
/// are the actions of the braid automorphisms on parabolic H^1 of the fiber
/// tuple, indexed by k = (j-1) p + i.
pub fn convolve_rank_one(t1: &MonodromyTuple, r2: &RankOneTuple) -> Result<MonodromyTuple> {
    for l in r2.scalars() {
        check_lambda(l)?;
    }
    if !t1.property_t()? {
        return Err(ConvError::PropertyTFailed);
    }
    let space = ParabolicCocycleSpace::new(t1, r2)?;
    let h = space.h_dim();
    let expected = convolution_rank(t1, r2)?;
    if h as i64 != expected {
        return Err(ConvError::RankMismatch(h, expected));
    }
    let p = space.p;
    let q = space.q;
    let order = space.fiber().order();
    let mut entries = Vec::with_capacity(p * q);
    for j in 1..=q {
        for i in 1..=p {
            let auto = braid_auto(p, q, i, j)?;
            let mut rows = Vec::with_capacity(h);
            for z in space.h_basis() {
                // (phi . d)(a_k) = d(phi(a_k))
                let mut new_vals = Vec::with_capacity(p + q);
                for img in &auto.images {
                    new_vals.extend(space.evaluate_cocycle(z, img)?);
                }
                rows.push(space.h_coordinates(&new_vals)?);
            }
            let m = if rows.is_empty() {
                Mat::identity(0, order)
            } else {
                Mat::from_rows(rows).map_err(LinalgError::from)?
            };
            entries.push(m);
        }
    }
    Ok(MonodromyTuple::new(entries)?)
}

// ---------------------------------------------------------------------------
// Jordan predictors
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prediction {
    Jordan(JordanData),
    Inconclusive,
}

/// Predicted Jordan data of the finite output entry D_i from that of A_i:
/// J(alpha, l) != J(1,1) maps to J(alpha lambda, l') with l' = l generically,
/// l - 1 if alpha = 1, l + 1 if alpha = lambda^{-1}; the rest of the target
/// rank is filled with J(1,1).
pub fn predict_jordan_finite(jd: &JordanData, lam: &CycNum, target_rank: usize) -> Result<Prediction> {
    check_lambda(lam)?;
    let one = CycNum::one(1);
    let lam_inv = lam.inv()?;
    let mut blocks = Vec::new();
    let mut used = 0usize;
    for (alpha, l) in jd.blocks() {
        if alpha == &one && *l == 1 {
            continue;
        }
        let l2 = if alpha == &one {
            l - 1
        } else if alpha == &lam_inv {
            l + 1
        } else {
            *l
        };
        if l2 == 0 {
            continue;
        }
        blocks.push((alpha.mul(lam)?, l2));
        used += l2;
    }
    if used > target_rank {
        return Ok(Prediction::Inconclusive);
    }
    for _ in 0..target_rank - used {
        blocks.push((one.clone(), 1));
    }
    Ok(Prediction::Jordan(JordanData::new(blocks)))
}

/// Predicted Jordan data at infinity: every J(alpha, l) maps to
/// J(alpha lambda^{-1}, l') with l' = l generically, l - 1 if alpha = lambda,
/// l + 1 if alpha = 1; fills with J(lambda^{-1}, 1).
pub fn predict_jordan_infinity(
    jd: &JordanData,
    lam: &CycNum,
    target_rank: usize,
) -> Result<Prediction> {
    check_lambda(lam)?;
    let one = CycNum::one(1);
    let lam_inv = lam.inv()?;
    let mut blocks = Vec::new();
    let mut used = 0usize;
    for (alpha, l) in jd.blocks() {
        let l2 = if alpha == lam {
            l - 1
        } else if alpha == &one {
            l + 1
        } else {
            *l
        };
        if l2 == 0 {
            continue;
        }
        blocks.push((alpha.mul(&lam_inv)?, l2));
        used += l2;
    }
    if used > target_rank {
        return Ok(Prediction::Inconclusive);
    }
    for _ in 0..target_rank - used {
        blocks.push((lam_inv.clone(), 1));
    }
    Ok(Prediction::Jordan(JordanData::new(blocks)))
}

/// Jordan data of a matrix with the default root-of-unity candidates of its
/// own cyclotomic order.
pub fn entry_jordan(m: &Mat) -> Result<JordanData> {
    Ok(jordan_data(m, &crate::linalg::default_candidates(m.order()))?)
}
