//! Exact line rank `r(p) = max_l rank p^{-1}(l)` over real lines `l`.
//!
//! Write `Q = Q^{2g} / ker p`, of dimension `q <= 4`, and let
//! `C(u, v) = Re p(u) Im p(v) - Im p(u) Re p(v)`. A subspace of `Q` maps
//! into one real line iff `C` vanishes on it, so `r = rank ker p + s` with
//! `s` the largest dimension of a `C`-isotropic subspace. Splitting
//! `C = A + B sqrt(D)` with rational alternating `A`, `B`, a subspace is
//! `C`-isotropic iff it is isotropic for both.
//!
//! * `s = q` iff `A = B = 0`.
//! * A hyperplane `H` is isotropic for a nonzero alternating form iff the
//!   form has rank 2 and `H` contains its radical. So `s = q - 1` iff every
//!   nonzero form among `A`, `B` has rank 2 and their radicals together
//!   span at most `q - 1` dimensions.
//! * Otherwise: for `q = 4`, any `x != 0` leaves a solution plane of the
//!   two conditions `A(x, .) = B(x, .) = 0`, so `s = 2`; for `q = 3`,
//!   `s = 1`. For `q <= 2` the hyperplane case always applies.
//!
//! The maximum is attained on a unique line iff `2s > q`: two different
//! maximal lines pull back to subspaces meeting only in `0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{PeriodCharacter, QVec};
use crate::error::PeriodError;
use crate::intmat;
use crate::scalar::KComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineRankResult {
    pub r: usize,
    pub witness_direction: KComplex,
    pub unique_max_line: bool,
    pub kernel_rank: usize,
    /// `dim Q` and the maximal isotropic dimension `s`.
    pub q: usize,
    pub s: usize,
    /// For `q = 4`: coefficients `(Pf A, mixed, Pf B)` of
    /// `Pf(lambda A + mu B)`; reported for inspection only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pfaffian_pencil: Option<[String; 3]>,
}

fn radical(m: &[QVec], q: usize) -> Vec<QVec> {
    intmat::nullspace_q(m, q)
}

fn is_zero_form(m: &[QVec]) -> bool {
    m.iter().flatten().all(|x| x.is_zero())
}

fn pfaffian4(m: &[QVec]) -> BigRational {
    &m[0][1] * &m[2][3] - &m[0][2] * &m[1][3] + &m[0][3] * &m[1][2]
}

pub(super) fn line_rank(p: &PeriodCharacter) -> Result<LineRankResult, PeriodError> {
    if !p.volume().is_positive() {
        return Err(PeriodError::ZeroVolume);
    }
    let n = 2 * p.genus();
    let comps = p.components();
    // Pivot basis vectors spanning Q.
    let mut piv: Vec<usize> = Vec::new();
    let mut rows: Vec<QVec> = Vec::new();
    for j in 0..n {
        rows.push(comps[j].clone());
        if intmat::rank_q(&rows, 4) > piv.len() {
            piv.push(j);
        } else {
            rows.pop();
        }
    }
    let q = piv.len();
    let kernel_rank = n - q;
    let u: Vec<&KComplex> = piv.iter().map(|&j| &p.values()[j]).collect();
    let mut a = vec![vec![BigRational::zero(); q]; q];
    let mut b = vec![vec![BigRational::zero(); q]; q];
    for i in 0..q {
        for j in 0..q {
            let c = u[i].cross(u[j]);
            a[i][j] = c.rat().clone();
            b[i][j] = c.irr().clone();
        }
    }
    let forms: Vec<&Vec<QVec>> = [&a, &b].into_iter().filter(|f| !is_zero_form(f)).collect();
    // Witness in Q-coordinates.
    let mut witness: QVec = (0..q).map(|i| BigRational::from_integer(BigInt::from((i == 0) as i64))).collect();
    let s = if forms.is_empty() {
        q
    } else {
        let rads: Vec<Vec<QVec>> = forms.iter().map(|f| radical(f, q)).collect();
        let all_rank_two = rads.iter().all(|r| q - r.len() == 2);
        let sum: Vec<QVec> = rads.iter().flatten().cloned().collect();
        let sum_dim = intmat::rank_q(&sum, q);
        if all_rank_two && sum_dim < q {
            if let Some(v) = sum.into_iter().find(|v| v.iter().any(|x| !x.is_zero())) {
                witness = v;
            }
            q - 1
        } else if q == 4 {
            2
        } else {
            1
        }
    };
    let (wint, _) = intmat::primitive_multiple(&witness);
    let mut x = vec![BigInt::zero(); n];
    for (c, &j) in wint.iter().zip(&piv) {
        x[j] = c.clone();
    }
    let w = p.evaluate_big(&x);
    let r = p.preimage_rank_of_line(&w);
    if r != kernel_rank + s {
        return Err(PeriodError::Invariant(format!(
            "line rank witness has preimage rank {r}, expected {}",
            kernel_rank + s
        )));
    }
    let pfaffian_pencil = (q == 4).then(|| {
        let pa = pfaffian4(&a);
        let pb = pfaffian4(&b);
        let sum: Vec<QVec> = (0..4).map(|i| (0..4).map(|j| &a[i][j] + &b[i][j]).collect()).collect();
        let mixed = pfaffian4(&sum) - &pa - &pb;
        [pa.to_string(), mixed.to_string(), pb.to_string()]
    });
    Ok(LineRankResult {
        r,
        witness_direction: w,
        unique_max_line: 2 * s > q,
        kernel_rank,
        q,
        s,
        pfaffian_pencil,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::hilbert_plane;
    use super::*;
    use crate::QuadReal;

    #[test]
    fn non_compact_type() {
        let p = PeriodCharacter::from_ints(3, &[(1, 0), (0, 1), (1, 0), (0, 1), (0, 0), (0, 0)]).unwrap();
        let r = p.line_rank().unwrap();
        assert_eq!(r.r, 5);
        assert_eq!((r.kernel_rank, r.q, r.s), (4, 2, 1));
    }

    #[test]
    fn gaussian_pair() {
        let p = PeriodCharacter::from_ints(2, &[(1, 0), (0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(p.line_rank().unwrap().r, 3);
    }

    #[test]
    fn hilbert_plane_lines() {
        let p = hilbert_plane(2);
        let r = p.line_rank().unwrap();
        assert_eq!(r.r, 2);
        assert!(!r.unique_max_line);
        for w in [KComplex::from_ints(1, 0), KComplex::from_ints(0, 1)] {
            let pre = p.line_preimage(&w);
            assert_eq!(pre.rank(), 2);
            assert!(crate::symplattice::restricted_gram(&pre).iter().flatten().all(|&x| x == 0));
        }
    }

    #[test]
    fn zero_volume_rejected() {
        let s = QuadReal::sqrt(2).unwrap();
        let p = PeriodCharacter::new(
            2,
            vec![KComplex::from_ints(1, 0), KComplex::new(s, QuadReal::zero()), KComplex::zero(), KComplex::zero()],
        )
        .unwrap();
        assert_eq!(p.line_rank(), Err(PeriodError::ZeroVolume));
    }
}
