//! Monodromy tuples and the operations that keep the puncture set fixed:
//! tensor, dual, twist, fiber tuple, irreducibility flag, parabolic
//! cohomology dimension and the rigidity index.

use crate::cyclo::{lcm_order, CycNum, CycloError};
use crate::linalg::{
    algebra_closure_dim, common_fixed_space, kronecker, LinalgError, Mat,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TupleError {
    #[error("tuple entries must be invertible (entry {0})")]
    NotInvertible(usize),
    #[error("tuple entries must be square of equal size")]
    SizeMismatch,
    #[error("puncture counts differ: {0} vs {1}")]
    PunctureMismatch(usize, usize),
    #[error("tuple is not absolutely irreducible")]
    NotIrreducible,
    #[error("tuple must have at least one entry")]
    Empty,
    #[error("scalar entries must be nonzero")]
    ZeroScalar,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, TupleError>;

/// A tuple (T_1, ..., T_r) of invertible matrices with the derived entry at
/// infinity T_{r+1} = (T_1 ... T_r)^{-1}, so the full product is the identity
/// by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonodromyTuple {
    entries: Vec<Mat>,
    infinity: Mat,
}

impl MonodromyTuple {
    pub fn new(entries: Vec<Mat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(TupleError::Empty);
        }
        let n = entries[0].rows();
        let mut order = 1;
        for e in &entries {
            if !e.is_square() || e.rows() != n {
                return Err(TupleError::SizeMismatch);
            }
            order = lcm_order(order, e.order())?;
        }
        let entries: Vec<Mat> = entries
            .into_iter()
            .map(|e| e.embed(order))
            .collect::<std::result::Result<_, _>>()?;
        let mut product = Mat::identity(n, order);
        for (i, e) in entries.iter().enumerate() {
            if e.inverse().is_err() {
                return Err(TupleError::NotInvertible(i));
            }
            product = product.mul(e)?;
        }
        let infinity = product.inverse().map_err(|_| TupleError::NotInvertible(0))?;
        Ok(MonodromyTuple { entries, infinity })
    }

    pub fn rank(&self) -> usize {
        self.entries[0].rows()
    }

    pub fn puncture_count(&self) -> usize {
        self.entries.len()
    }

    pub fn order(&self) -> u64 {
        self.infinity.order()
    }

    /// The finite entries T_1, ..., T_r.
    pub fn entries(&self) -> &[Mat] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Mat {
        &self.entries[i]
    }

    pub fn infinity_entry(&self) -> &Mat {
        &self.infinity
    }

    /// All r + 1 entries, infinity last.
    pub fn all_entries(&self) -> Vec<Mat> {
        let mut v = self.entries.clone();
        v.push(self.infinity.clone());
        v
    }

    /// Entrywise Kronecker product of two tuples over the same punctures.
    pub fn tensor_same_base(&self, other: &Self) -> Result<Self> {
        if self.puncture_count() != other.puncture_count() {
            return Err(TupleError::PunctureMismatch(
                self.puncture_count(),
                other.puncture_count(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| kronecker(a, b))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    /// Entrywise inverse-transpose.
    pub fn dual(&self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.inverse().map(|i| i.transpose()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    /// Entrywise scalar twist T_i -> lambda_i T_i.
    pub fn twist(&self, chi: &RankOneTuple) -> Result<Self> {
        if chi.puncture_count() != self.puncture_count() {
            return Err(TupleError::PunctureMismatch(
                self.puncture_count(),
                chi.puncture_count(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(chi.scalars())
            .map(|(e, l)| e.scalar_mul(l))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    /// Absolute irreducibility (full matrix algebra) with at least two
    /// nontrivial finite entries.
    pub fn property_t(&self) -> Result<bool> {
        let nontrivial = self
            .entries
            .iter()
            .filter(|e| !e.is_identity())
            .count();
        if nontrivial < 2 {
            return Ok(false);
        }
        let n = self.rank();
        Ok(algebra_closure_dim(&self.entries)? == n * n)
    }

    /// Dimension of parabolic H^1 by the Euler characteristic:
    /// h0 + h2 - chi with chi = (1 - r) n + sum_i dim ker(T_i - 1) over all
    /// r + 1 entries.
    pub fn parabolic_h1_dim(&self) -> Result<i64> {
        let r = self.puncture_count() as i64;
        let n = self.rank() as i64;
        let mut kernel_sum = 0i64;
        for e in self.all_entries() {
            kernel_sum += e.sub_identity()?.kernel_basis().dim() as i64;
        }
        let chi = (1 - r) * n + kernel_sum;
        let all = self.all_entries();
        let h0 = common_fixed_space(&all)?.dim() as i64;
        let dual_all = self.dual()?.all_entries();
        let h2 = common_fixed_space(&dual_all)?.dim() as i64;
        Ok(h0 + h2 - chi)
    }

    /// The tuple acting by conjugation on matrices: entries
    /// kron((T_i^{-1})^T, T_i) in the row-major vectorization.
    pub fn adjoint(&self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let it = e.inverse()?.transpose();
                kronecker(&it, e)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    /// Parabolic H^1 dimension of the adjoint tuple; zero means
    /// cohomologically rigid. Requires absolute irreducibility.
    pub fn rigidity_index(&self) -> Result<i64> {
        let n = self.rank();
        if algebra_closure_dim(&self.entries)? != n * n {
            return Err(TupleError::NotIrreducible);
        }
        self.adjoint()?.parabolic_h1_dim()
    }
}

/// A tuple of nonzero scalars (lambda_1, ..., lambda_q) with derived
/// lambda_{q+1} = (lambda_1 ... lambda_q)^{-1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankOneTuple {
    scalars: Vec<CycNum>,
    infinity: CycNum,
}

impl RankOneTuple {
    pub fn new(scalars: Vec<CycNum>) -> Result<Self> {
        if scalars.is_empty() {
            return Err(TupleError::Empty);
        }
        let mut product = CycNum::one(1);
        for s in &scalars {
            if s.is_zero() {
                return Err(TupleError::ZeroScalar);
            }
            product = product.mul(s)?;
        }
        let infinity = product.inv()?;
        Ok(RankOneTuple { scalars, infinity })
    }

    pub fn puncture_count(&self) -> usize {
        self.scalars.len()
    }

    pub fn scalars(&self) -> &[CycNum] {
        &self.scalars
    }

    pub fn infinity_scalar(&self) -> &CycNum {
        &self.infinity
    }

    /// The same data as a rank-one matrix tuple.
    pub fn as_tuple(&self) -> Result<MonodromyTuple> {
        let entries = self
            .scalars
            .iter()
            .map(|s| Mat::new(1, 1, vec![s.clone()]))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(MonodromyTuple::new(entries)?)
    }
}

/// The (p+q)-puncture tuple of the product local system on the fiber:
/// (A_1, ..., A_p, lambda_1 * 1, ..., lambda_q * 1), whose infinity entry is
/// lambda_{q+1} A_{p+1} by the product relation.
pub fn fiber_tuple(t1: &MonodromyTuple, r2: &RankOneTuple) -> Result<MonodromyTuple> {
    let n = t1.rank();
    let mut entries = t1.entries().to_vec();
    for l in r2.scalars() {
        entries.push(Mat::scalar(n, l));
    }
    MonodromyTuple::new(entries)
}

// ---------------------------------------------------------------------------
// JSON file format: {cyclotomic_order, rank, entries: [[["...", ...], ...]]}
// ---------------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
pub struct TupleFile {
    pub cyclotomic_order: u64,
    pub rank: usize,
    pub entries: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinity_entry: Option<Vec<Vec<String>>>,
}

impl TupleFile {
    pub fn from_tuple(t: &MonodromyTuple) -> Self {
        TupleFile {
            cyclotomic_order: t.order(),
            rank: t.rank(),
            entries: t.entries().iter().map(|e| e.to_strings()).collect(),
            infinity_entry: Some(t.infinity_entry().to_strings()),
        }
    }

    /// Rebuild the tuple; the infinity entry is recomputed, and checked
    /// against the stored one when present.
    pub fn into_tuple(&self) -> Result<MonodromyTuple> {
        let entries = self
            .entries
            .iter()
            .map(|rows| Mat::parse(rows, self.cyclotomic_order))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let t = MonodromyTuple::new(entries)?;
        if t.rank() != self.rank {
            return Err(TupleError::SizeMismatch);
        }
        if let Some(inf) = &self.infinity_entry {
            let stored = Mat::parse(inf, self.cyclotomic_order)?;
            if &stored != t.infinity_entry() {
                return Err(TupleError::SizeMismatch);
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::test_support::*;
    use crate::linalg::{default_candidates, invariant_bilinear_forms, jordan_data};

    fn scalar_tuple(vals: &[i64]) -> MonodromyTuple {
        RankOneTuple::new(vals.iter().map(|&v| CycNum::from_integer(v)).collect())
            .unwrap()
            .as_tuple()
            .unwrap()
    }

    /// Two reflections generating an irreducible dihedral representation.
    fn dihedral_tuple() -> MonodromyTuple {
        let a = int_mat(&[&[0, 1], &[1, 0]]);
        let b = Mat::from_rows(vec![
            vec![CycNum::zero(3), zeta(3, 1)],
            vec![zeta(3, 2), CycNum::zero(3)],
        ])
        .unwrap();
        MonodromyTuple::new(vec![a, b]).unwrap()
    }

    #[test]
    fn construction_examples() {
        let t = MonodromyTuple::new(vec![Mat::identity(2, 1), Mat::identity(2, 1)]).unwrap();
        assert!(t.infinity_entry().is_identity());
        let t = scalar_tuple(&[-1, -1]);
        assert!(t.infinity_entry().is_identity());
        let d = diag(vec![zeta(3, 1), zeta(3, 2)]);
        let swap = int_mat(&[&[0, 1], &[1, 0]]);
        let t = MonodromyTuple::new(vec![d.clone(), swap.clone()]).unwrap();
        let expected = d.mul(&swap).unwrap().inverse().unwrap();
        assert_eq!(t.infinity_entry(), &expected);
        // product relation
        let p = d
            .mul(&swap)
            .unwrap()
            .mul(t.infinity_entry())
            .unwrap();
        assert!(p.is_identity());
        // non-invertible entry rejected
        assert!(MonodromyTuple::new(vec![int_mat(&[&[1, 2], &[2, 4]])]).is_err());
    }

    #[test]
    fn tensor_examples() {
        let t = dihedral_tuple();
        let triv = scalar_tuple(&[1, 1]);
        let s = t.tensor_same_base(&triv).unwrap();
        assert_eq!(s, t);
        let a = RankOneTuple::new(vec![zeta(3, 1), zeta(3, 2)]).unwrap();
        let b = RankOneTuple::new(vec![zeta(3, 2), zeta(3, 1)]).unwrap();
        let prod = a
            .as_tuple()
            .unwrap()
            .tensor_same_base(&b.as_tuple().unwrap())
            .unwrap();
        assert!(prod.entries().iter().all(|e| e.is_identity()));
    }

    #[test]
    fn dual_examples() {
        let r = RankOneTuple::new(vec![zeta(3, 1), zeta(3, 1), zeta(3, 1)]).unwrap();
        let d = r.as_tuple().unwrap().dual().unwrap();
        for e in d.entries() {
            assert_eq!(e.at(0, 0), &zeta(3, 2));
        }
        let t = dihedral_tuple();
        assert_eq!(t.dual().unwrap().dual().unwrap(), t);
        let trans = MonodromyTuple::new(vec![int_mat(&[&[1, 1], &[0, 1]])]).unwrap();
        let dt = trans.dual().unwrap();
        assert_eq!(dt.entry(0), &int_mat(&[&[1, 0], &[-1, 1]]));
        let cands = default_candidates(1);
        assert_eq!(
            jordan_data(dt.entry(0), &cands).unwrap(),
            jordan_data(trans.entry(0), &cands).unwrap()
        );
    }

    #[test]
    fn twist_examples() {
        let t = dihedral_tuple();
        let ones = RankOneTuple::new(vec![CycNum::from_integer(1); 2]).unwrap();
        assert_eq!(t.twist(&ones).unwrap(), t);
        let chi = RankOneTuple::new(vec![
            CycNum::from_integer(-1),
            CycNum::from_integer(1),
        ])
        .unwrap();
        let tw = t.twist(&chi).unwrap();
        assert_eq!(tw.entry(0), &t.entry(0).neg());
        assert_eq!(tw.entry(1), t.entry(1));
        assert_eq!(
            tw.infinity_entry(),
            &t.infinity_entry().neg()
        );
        // determinants scale by lambda^n
        let det0 = t.entry(0).det().unwrap();
        assert_eq!(tw.entry(0).det().unwrap(), det0); // (-1)^2 = 1 in rank 2
    }

    #[test]
    fn fiber_examples() {
        let t1 = scalar_tuple(&[-1, -1]);
        let r2 = RankOneTuple::new(vec![CycNum::from_integer(-1)]).unwrap();
        let f = fiber_tuple(&t1, &r2).unwrap();
        assert_eq!(f.puncture_count(), 3);
        assert_eq!(f.infinity_entry().at(0, 0), &CycNum::from_integer(-1));
        let triv = RankOneTuple::new(vec![CycNum::from_integer(1)]).unwrap();
        let f = fiber_tuple(&dihedral_tuple(), &triv).unwrap();
        assert_eq!(f.puncture_count(), 3);
        assert!(f.entry(2).is_identity());
    }

    #[test]
    fn property_t_examples() {
        assert!(scalar_tuple(&[-1, -1]).property_t().unwrap());
        assert!(!scalar_tuple(&[-1, 1]).property_t().unwrap());
        assert!(dihedral_tuple().property_t().unwrap());
    }

    #[test]
    fn parabolic_h1_examples() {
        assert_eq!(scalar_tuple(&[1, 1]).parabolic_h1_dim().unwrap(), 0);
        assert_eq!(scalar_tuple(&[-1, -1]).parabolic_h1_dim().unwrap(), 0);
        let f = fiber_tuple(
            &scalar_tuple(&[-1, -1]),
            &RankOneTuple::new(vec![CycNum::from_integer(-1)]).unwrap(),
        )
        .unwrap();
        assert_eq!(f.parabolic_h1_dim().unwrap(), 2);
    }

    #[test]
    fn rigidity_examples() {
        // dihedral rank-2 tuples are rigid
        assert_eq!(dihedral_tuple().rigidity_index().unwrap(), 0);
        // rank-one tuples are rigid
        assert_eq!(scalar_tuple(&[-1, -1]).rigidity_index().unwrap(), 0);
        // reducible input is rejected
        let red = MonodromyTuple::new(vec![
            diag(vec![CycNum::from_integer(1), CycNum::from_integer(-1)]),
            diag(vec![CycNum::from_integer(-1), CycNum::from_integer(1)]),
        ])
        .unwrap();
        assert!(matches!(
            red.rigidity_index(),
            Err(TupleError::NotIrreducible)
        ));
    }

    #[test]
    fn dual_preserves_invariants() {
        let t = dihedral_tuple();
        assert_eq!(
            t.parabolic_h1_dim().unwrap(),
            t.dual().unwrap().parabolic_h1_dim().unwrap()
        );
        assert_eq!(
            t.rigidity_index().unwrap(),
            t.dual().unwrap().rigidity_index().unwrap()
        );
    }

    #[test]
    fn dihedral_is_orthogonal() {
        let forms = invariant_bilinear_forms(&dihedral_tuple().all_entries()).unwrap();
        assert!(forms.symmetric_nondegenerate.is_some());
    }

    #[test]
    fn json_round_trip() {
        let t = dihedral_tuple();
        let file = TupleFile::from_tuple(&t);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: TupleFile = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.into_tuple().unwrap(), t);
        // corrupted infinity entry is rejected
        let mut bad = TupleFile::from_tuple(&t);
        bad.infinity_entry = Some(Mat::identity(2, 3).to_strings());
        assert!(bad.into_tuple().is_err());
    }
}
