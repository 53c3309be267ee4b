//! Pinchable classes and boundary components.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::ClassifyError;
use crate::intmat;
use crate::periods::PeriodCharacter;
use crate::symplattice::{self, omega_i64, Sublattice};

/// `a` is pinchable iff `p(a) = 0` and the induced character on
/// `a^perp / Z a` is Haupt.
pub fn is_pinchable(p: &PeriodCharacter, a: &[i64]) -> Result<bool, ClassifyError> {
    let g = p.genus();
    if g < 2 {
        return Err(ClassifyError::GenusTooSmall(g));
    }
    let q = symplattice::quotient_symplectic(a)?;
    if !p.evaluate(a)?.is_zero() {
        return Ok(false);
    }
    Ok(p.quotient(&q)?.is_haupt()?.haupt)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PinchableReport {
    pub kernel_rank: usize,
    pub tested: usize,
    pub all_pinchable: bool,
    /// The first non-pinchable class in the test order.
    #[serde(serialize_with = "crate::ser::opt_intvec")]
    pub witness: Option<Vec<i64>>,
    /// Symplectic basis of a rank `2g - 4` submodule of `ker p`.
    #[serde(serialize_with = "crate::ser::opt_intmat")]
    pub w: Option<Vec<Vec<i64>>>,
    pub w_tested: usize,
    pub w_all_pinchable: bool,
}

fn sign_normalize(v: &mut [i64]) {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn l1_then_desc(v: &[i64]) -> (i64, Reverse<Vec<i64>>) {
    (v.iter().map(|x| x.abs()).sum(), Reverse(v.to_vec()))
}

/// Primitive, sign-normalized combinations `sum c_i basis_i` with
/// `|c_i| <= bound`; with more than four generators only combinations with
/// at most two nonzero coefficients are formed.
fn combinations(basis: &[Vec<i64>], bound: i64) -> Result<Vec<Vec<i64>>, ClassifyError> {
    let k = basis.len();
    let n = basis.first().map_or(0, |b| b.len());
    let side = (2 * bound + 1) as usize;
    let mut out = BTreeSet::new();
    for mut idx in 0..side.pow(k as u32) {
        let mut c = vec![0i64; k];
        for x in c.iter_mut() {
            *x = (idx % side) as i64 - bound;
            idx /= side;
        }
        let nz = c.iter().filter(|&&x| x != 0).count();
        if nz == 0 || (k > 4 && nz > 2) {
            continue;
        }
        let mut v = vec![BigInt::zero(); n];
        for (ci, b) in c.iter().zip(basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += ci * y;
            }
        }
        let content = intmat::content(&v);
        let mut v = intmat::small(&v.iter().map(|x| x / &content).collect::<Vec<_>>())?;
        sign_normalize(&mut v);
        out.insert(v);
    }
    let mut out: Vec<Vec<i64>> = out.into_iter().collect();
    out.sort_by_key(|v| l1_then_desc(v));
    Ok(out)
}

pub fn pinchable_report(p: &PeriodCharacter) -> Result<PinchableReport, ClassifyError> {
    let kernel = p.kernel();
    if kernel.rank() == 0 {
        return Err(ClassifyError::EmptyKernel);
    }
    let cands = combinations(kernel.gens(), 2)?;
    let mut pinchable = Vec::new();
    let mut witness = None;
    for a in &cands {
        if is_pinchable(p, a)? {
            pinchable.push(a.clone());
        } else if witness.is_none() {
            witness = Some(a.clone());
        }
    }
    let mut report = PinchableReport {
        kernel_rank: kernel.rank(),
        tested: cands.len(),
        all_pinchable: witness.is_none(),
        witness,
        w: None,
        w_tested: 0,
        w_all_pinchable: false,
    };
    if report.all_pinchable {
        return Ok(report);
    }
    let pairs = p.genus().saturating_sub(2);
    if pairs == 0 {
        return Ok(report);
    }
    let mut w: Vec<Vec<i64>> = Vec::new();
    'pairs: while w.len() < 2 * pairs {
        let free: Vec<&Vec<i64>> = pinchable.iter().filter(|x| w.iter().all(|y| omega_i64(x, y) == 0)).collect();
        for (i, x) in free.iter().enumerate() {
            for y in &free[i + 1..] {
                let o = omega_i64(x, y);
                if o.abs() == 1 {
                    w.push(x.to_vec());
                    w.push(y.iter().map(|t| o * t).collect());
                    continue 'pairs;
                }
            }
        }
        return Ok(report);
    }
    let w_cands = combinations(&w, 1)?;
    let mut all = true;
    for a in &w_cands {
        all &= is_pinchable(p, a)?;
    }
    report.w = Some(w);
    report.w_tested = w_cands.len();
    report.w_all_pinchable = all;
    Ok(report)
}

fn check_haupt(p: &PeriodCharacter) -> Result<(), ClassifyError> {
    if p.is_haupt()?.haupt {
        Ok(())
    } else {
        Err(ClassifyError::NotHaupt)
    }
}

fn membership(p: &PeriodCharacter, v: &Sublattice) -> Result<bool, ClassifyError> {
    let g = p.genus();
    if v.genus() != g {
        return Err(ClassifyError::BadModule);
    }
    let r = v.rank();
    if r == 1 {
        let a = &v.gens()[0];
        if !symplattice::is_primitive(a) {
            return Err(ClassifyError::BadModule);
        }
        return is_pinchable(p, a);
    }
    if !r.is_multiple_of(2) || r < 2 || r > 2 * g - 2 || !symplattice::is_symplectic_submodule(v) {
        return Err(ClassifyError::BadModule);
    }
    let pv = p.restrict_to(v)?;
    let vol = pv.volume();
    if !vol.is_positive() || !(&p.volume() - &vol).is_positive() {
        return Ok(false);
    }
    if !pv.is_haupt()?.haupt {
        return Ok(false);
    }
    Ok(p.restrict_to(&symplattice::orth_complement(v))?.is_haupt()?.haupt)
}

/// Whether `V` spans a boundary component: `V = Z a` with `a` pinchable, or
/// `V + V^perp` is a `p`-admissible decomposition.
pub fn boundary_membership(p: &PeriodCharacter, v: &Sublattice) -> Result<bool, ClassifyError> {
    check_haupt(p)?;
    membership(p, v)
}

/// [`boundary_membership`] for many modules, checking the Haupt
/// precondition once.
pub fn boundary_membership_all(p: &PeriodCharacter, vs: &[Sublattice]) -> Result<Vec<bool>, ClassifyError> {
    check_haupt(p)?;
    vs.iter().map(|v| membership(p, v)).collect()
}
