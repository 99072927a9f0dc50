//! Certificates about the monodromy group of a tuple: per-entry Jordan
//! reports, the numerical irreducibility criterion for convolutions, the
//! orthogonal/Lambda^3 certificate used for G2 detection, and the
//! classification of special entry shapes (transvections, homologies,
//! biperspectivities).

use crate::cyclo::CycNum;
use crate::linalg::{
    algebra_closure_dim, common_fixed_space, default_candidates, exterior_cube,
    invariant_bilinear_forms, jordan_data, JordanData, Mat,
};
use crate::tuples::{MonodromyTuple, RankOneTuple};
use crate::convolution::{ConvError, Result};

/// Jordan data of every entry, infinity last, with the default root-of-unity
/// candidates of the tuple's field.
pub fn jordan_report(t: &MonodromyTuple) -> Result<Vec<JordanData>> {
    let cands = default_candidates(t.order());
    t.all_entries()
        .iter()
        .map(|e| jordan_data(e, &cands).map_err(ConvError::from))
        .collect()
}

/// Numerical sufficient criterion for irreducibility of the convolution:
/// (p - 2) n - sum_i dim ker(A_i - 1) > 0. False means the criterion is
/// silent, not that the output is reducible.
pub fn irreducibility_criterion(t: &MonodromyTuple, r: &RankOneTuple) -> Result<bool> {
    for l in r.scalars() {
        if l.is_one() {
            return Err(ConvError::LambdaIsOne);
        }
    }
    if !t.property_t()? {
        return Err(ConvError::PropertyTFailed);
    }
    let p = t.puncture_count() as i64;
    let n = t.rank() as i64;
    let mut value = (p - 2) * n;
    for a in t.entries() {
        value -= a.sub_identity().map_err(crate::linalg::LinalgError::from)?.kernel_basis().dim() as i64;
    }
    Ok(value > 0)
}

/// The checkable parts of a G2 classification: an invariant nondegenerate
/// symmetric form, the dimension of the common fixed space on the third
/// exterior power, and absolute irreducibility. All three together are
/// consistent with monodromy inside G2 acting irreducibly on the
/// 7-dimensional representation; density itself is not asserted.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct G2Certificate {
    pub orthogonal: bool,
    pub lambda3_fixed_dim: usize,
    pub abs_irreducible: bool,
}

impl G2Certificate {
    pub fn holds(&self) -> bool {
        self.orthogonal && self.lambda3_fixed_dim >= 1 && self.abs_irreducible
    }
}

pub fn g2_certificate(t: &MonodromyTuple) -> Result<G2Certificate> {
    let all = t.all_entries();
    let forms = invariant_bilinear_forms(&all)?;
    let orthogonal = forms.symmetric_nondegenerate.is_some();
    let cubes: Vec<Mat> = all
        .iter()
        .map(|e| exterior_cube(e))
        .collect::<std::result::Result<_, _>>()?;
    let lambda3_fixed_dim = common_fixed_space(&cubes)?.dim();
    let n = t.rank();
    let abs_irreducible = algebra_closure_dim(t.entries())? == n * n;
    Ok(G2Certificate {
        orthogonal,
        lambda3_fixed_dim,
        abs_irreducible,
    })
}

/// Shape classification of a single entry, from its Jordan data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryClass {
    /// rank(M - 1) = 1 and unipotent.
    Transvection,
    /// rank(M - 1) = 1, semisimple; carries the multiplicative order of the
    /// nontrivial eigenvalue.
    Homology(u64),
    /// rank(M - 1) = 2; carries the nontrivial eigenvalue contributions.
    Biperspectivity(Vec<CycNum>),
    Semisimple,
    Other,
}

pub fn entry_class(m: &Mat) -> Result<EntryClass> {
    let jd = jordan_data(m, &default_candidates(m.order()))?;
    let one = CycNum::one(1);
    // rank(M - 1) from the Jordan data: each block J(a, l) contributes l if
    // a != 1, else l - 1.
    let mut rank_m1 = 0usize;
    let mut nontrivial: Vec<CycNum> = Vec::new();
    let mut semisimple = true;
    let mut unipotent = true;
    for (a, l) in jd.blocks() {
        if *l > 1 {
            semisimple = false;
        }
        if a != &one {
            unipotent = false;
            rank_m1 += l;
            for _ in 0..*l {
                nontrivial.push(a.clone());
            }
        } else {
            rank_m1 += l - 1;
            for _ in 0..l - 1 {
                nontrivial.push(a.clone());
            }
        }
    }
    Ok(if rank_m1 == 1 {
        if unipotent {
            EntryClass::Transvection
        } else if semisimple {
            let ord = nontrivial[0].mult_order().ok_or_else(|| {
                ConvError::InternalCheckFailed("homology eigenvalue is not a root of unity".into())
            })?;
            EntryClass::Homology(ord)
        } else {
            EntryClass::Other
        }
    } else if rank_m1 == 2 {
        EntryClass::Biperspectivity(nontrivial)
    } else if semisimple {
        EntryClass::Semisimple
    } else {
        EntryClass::Other
    })
}
