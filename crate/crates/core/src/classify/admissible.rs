//! Rank-2 symplectic submodules of prescribed volume and `p`-admissible
//! splittings.

use std::cmp::Reverse;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{ClassifyError, PeriodError};
use crate::intmat::{self, QVec};
use crate::periods::{HauptReport, PeriodCharacter};
use crate::scalar::{FieldDesc, QuadReal};
use crate::symplattice::{self, omega_i64, Sublattice};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_BOUND: i64 = 3;

/// Outcome of [`find_admissible_rank2`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdmissibleWitness {
    /// `V = span{a, partner}` with `omega(a, partner) = 1`.
    Found {
        #[serde(serialize_with = "crate::ser::intvec")]
        a: Vec<i64>,
        #[serde(serialize_with = "crate::ser::intvec")]
        partner: Vec<i64>,
        volume: QuadReal,
    },
    /// Every `V` containing `a` has volume in `offset + Z generator`, and
    /// that set misses the interval.
    Obstruction { generator: QuadReal, offset: QuadReal },
}

impl AdmissibleWitness {
    pub fn sublattice(&self, g: usize) -> Option<Sublattice> {
        match self {
            AdmissibleWitness::Found { a, partner, .. } => Sublattice::new(g, vec![a.clone(), partner.clone()]).ok(),
            AdmissibleWitness::Obstruction { .. } => None,
        }
    }

    /// Exact re-verification against `p`, `a` and the open interval.
    pub fn verify(&self, p: &PeriodCharacter, a: &[i64], eps1: &QuadReal, eps2: &QuadReal) -> bool {
        let Ok(pa) = p.evaluate(a) else { return false };
        match self {
            AdmissibleWitness::Found { a: wa, partner, volume } => {
                let Ok(pb) = p.evaluate(partner) else { return false };
                wa == a
                    && omega_i64(a, partner) == 1
                    && pa.cross(&pb) == *volume
                    && eps1 < volume
                    && volume < eps2
            }
            AdmissibleWitness::Obstruction { generator, offset } => {
                if !generator.is_positive() {
                    return false;
                }
                let Ok(complete) = symplattice::symplectic_complete(a) else { return false };
                let Ok(pb) = p.evaluate(&complete[1]) else { return false };
                if pa.cross(&pb) != *offset {
                    return false;
                }
                let mut gcd = BigInt::zero();
                for e in &complete[2..] {
                    let Ok(pe) = p.evaluate(e) else { return false };
                    let Ok(k) = pa.cross(&pe).try_div(generator) else { return false };
                    if !k.is_rational() || !k.rat().is_integer() {
                        return false;
                    }
                    gcd = gcd.gcd(&k.rat().to_integer());
                }
                if !gcd.is_one() {
                    return false;
                }
                let Ok(q) = (eps1 - offset).try_div(generator) else { return false };
                let k = q.floor() + BigInt::one();
                &(offset + &generator.scale_rational(&BigRational::from_integer(k))) >= eps2
            }
        }
    }
}

struct Gen {
    val: QuadReal,
    coef: Vec<BigInt>,
}

fn scalar_err(e: crate::ScalarError) -> ClassifyError {
    ClassifyError::Period(PeriodError::Scalar(e))
}

/// Searches `V = span{a, b + e}` with `e` in the span of the completion
/// vectors orthogonal to `a` and `b`, so that `eps1 < vol(p|V) < eps2`.
/// The reachable volumes form `t0 + G` with `G` finitely generated; `G` is
/// reduced by an exact multi-term Euclidean algorithm.
pub fn find_admissible_rank2(
    p: &PeriodCharacter,
    a: &[i64],
    eps1: &QuadReal,
    eps2: &QuadReal,
    budget: u64,
) -> Result<AdmissibleWitness, ClassifyError> {
    p.field().join(eps1.field()).and_then(|f| f.join(eps2.field())).map_err(scalar_err)?;
    if eps1 >= eps2 {
        return Err(ClassifyError::EmptyInterval { eps1: eps1.to_string(), eps2: eps2.to_string() });
    }
    let complete = symplattice::symplectic_complete(a)?;
    let pa = p.evaluate(a)?;
    if pa.is_zero() {
        return Err(ClassifyError::ZeroPeriod);
    }
    let t0 = pa.cross(&p.evaluate(&complete[1])?);
    let rest = &complete[2..];
    let found = |coef: &[BigInt], volume: QuadReal| -> Result<AdmissibleWitness, ClassifyError> {
        let mut partner: Vec<BigInt> = intmat::big(&complete[1]);
        for (c, e) in coef.iter().zip(rest) {
            for (x, y) in partner.iter_mut().zip(e) {
                *x += c * y;
            }
        }
        Ok(AdmissibleWitness::Found { a: a.to_vec(), partner: intmat::small(&partner)?, volume })
    };
    let in_interval = |t: &QuadReal| eps1 < t && t < eps2;
    if in_interval(&t0) {
        return found(&vec![BigInt::zero(); rest.len()], t0);
    }
    let width = eps2 - eps1;
    let mut gens: Vec<Gen> = Vec::new();
    for (j, e) in rest.iter().enumerate() {
        let val = pa.cross(&p.evaluate(e)?);
        if val.is_zero() {
            continue;
        }
        let mut coef = vec![BigInt::zero(); rest.len()];
        coef[j] = if val.is_positive() { BigInt::one() } else { -BigInt::one() };
        gens.push(Gen { val: val.abs(), coef });
    }
    // Steps `t0 + k y` to the first point above `eps1`.
    let step_into = |y: &Gen| -> Result<Option<(Vec<BigInt>, QuadReal)>, ClassifyError> {
        let k = (eps1 - &t0).try_div(&y.val).map_err(scalar_err)?.floor() + BigInt::one();
        let t = &t0 + &y.val.scale_rational(&BigRational::from_integer(k.clone()));
        Ok(in_interval(&t).then(|| (y.coef.iter().map(|c| c * &k).collect(), t)))
    };
    let mut iterations = 0u64;
    loop {
        if gens.is_empty() {
            return Ok(AdmissibleWitness::Obstruction { generator: QuadReal::zero(), offset: t0 });
        }
        let imin = (0..gens.len()).min_by(|&i, &j| gens[i].val.cmp(&gens[j].val)).expect("nonempty");
        if gens[imin].val < width || gens.len() == 1 {
            if let Some((coef, t)) = step_into(&gens[imin])? {
                return found(&coef, t);
            }
            if gens.len() == 1 {
                let g0 = gens.pop().expect("one generator");
                return Ok(AdmissibleWitness::Obstruction { generator: g0.val, offset: t0 });
            }
            return Err(ClassifyError::Invariant("a step shorter than the interval missed it".into()));
        }
        let m = gens.swap_remove(imin);
        let mut next: Vec<Gen> = vec![];
        for mut y in gens.drain(..) {
            iterations += 1;
            if iterations > budget {
                return Err(ClassifyError::BudgetExceeded {
                    iterations: budget,
                    generators: next.len() + 1,
                    smallest: m.val.to_string(),
                });
            }
            let k = y.val.try_div(&m.val).map_err(scalar_err)?.floor();
            y.val -= &m.val.scale_rational(&BigRational::from_integer(k.clone()));
            for (c, cm) in y.coef.iter_mut().zip(&m.coef) {
                *c -= &k * cm;
            }
            if !y.val.is_zero() {
                next.push(y);
            }
        }
        next.push(m);
        gens = next;
    }
}

/// A successful `p`-admissible decomposition `V + V^perp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleSplit {
    pub v: Sublattice,
    pub complement: Sublattice,
    pub v_character: PeriodCharacter,
    pub complement_character: PeriodCharacter,
    pub v_haupt: HauptReport,
    pub complement_haupt: HauptReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeObstruction {
    pub covolume: QuadReal,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub degree: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitFailure {
    pub bound: i64,
    pub candidates_tested: usize,
    pub budget_exceeded: usize,
    /// When `p(H_1)` is a lattice every factor volume is a multiple of its
    /// covolume.
    pub lattice_obstruction: Option<LatticeObstruction>,
    pub lagrangian: Option<LagrangianReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SplitOutcome {
    Split(Box<AdmissibleSplit>),
    Failure(SplitFailure),
}

/// Primitive vectors with entries in `-bound..=bound`, first nonzero entry
/// positive, ordered by l1 norm and then lexicographically descending.
pub(crate) fn candidates(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(n as u32);
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut v = vec![0i64; n];
        for x in v.iter_mut() {
            *x = (idx % side) as i64 - bound;
            idx /= side;
        }
        match v.iter().find(|&&x| x != 0) {
            Some(&x) if x > 0 => {}
            _ => continue,
        }
        if symplattice::is_primitive(&v) {
            out.push(v);
        }
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), Reverse(v.clone())));
    out
}

pub fn admissible_split(p: &PeriodCharacter, bound: i64, budget: u64) -> Result<SplitOutcome, ClassifyError> {
    let g = p.genus();
    if g < 2 {
        return Err(ClassifyError::GenusTooSmall(g));
    }
    let vol = p.volume();
    if !vol.is_positive() {
        return Err(ClassifyError::ZeroVolume);
    }
    let zero = QuadReal::zero();
    let mut tested = 0;
    let mut budget_exceeded = 0;
    for a in candidates(2 * g, bound) {
        if p.evaluate(&a)?.is_zero() {
            continue;
        }
        tested += 1;
        let w = match find_admissible_rank2(p, &a, &zero, &vol, budget) {
            Ok(w) => w,
            Err(ClassifyError::BudgetExceeded { .. }) => {
                budget_exceeded += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let AdmissibleWitness::Found { partner, .. } = &w else { continue };
        let v = Sublattice::new(g, vec![a.clone(), partner.clone()])?;
        let complement = symplattice::orth_complement(&v);
        let v_character = p.restrict(&[a.clone(), partner.clone()])?;
        let complement_character = p.restrict_to(&complement)?;
        let v_haupt = v_character.is_haupt()?;
        let complement_haupt = complement_character.is_haupt()?;
        if v_haupt.haupt && complement_haupt.haupt {
            return Ok(SplitOutcome::Split(Box::new(AdmissibleSplit {
                v,
                complement,
                v_character,
                complement_character,
                v_haupt,
                complement_haupt,
            })));
        }
    }
    let h = p.is_haupt()?;
    let lattice_obstruction = match (h.image.covolume, h.degree) {
        (Some(covolume), Some(degree)) => Some(LatticeObstruction { covolume, degree }),
        _ => None,
    };
    let lagrangian = if g == 2 && p.is_injective() { Some(lagrangian_line_structure(p, bound)?) } else { None };
    Ok(SplitOutcome::Failure(SplitFailure {
        bound,
        candidates_tested: tested,
        budget_exceeded,
        lattice_obstruction,
        lagrangian,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LagrangianReport {
    pub lagrangian: bool,
    /// Whether multiplication by `sqrt(D)`, pulled back to `H_1(Q)`, is
    /// self-adjoint for omega.
    pub self_adjoint: bool,
    pub multiplication: Vec<Vec<String>>,
    pub bound: i64,
    #[serde(serialize_with = "crate::ser::opt_intvec")]
    pub violating_vector: Option<Vec<i64>>,
}

fn invert(m: &[QVec]) -> Option<Vec<QVec>> {
    let n = m.len();
    let aug: Vec<QVec> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    let (r, piv) = intmat::rref(aug, 2 * n);
    (piv.len() == n && piv.iter().enumerate().all(|(i, &c)| i == c)).then(|| r.iter().map(|row| row[n..].to_vec()).collect())
}

fn matmul(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    let k = b.len();
    let n = b[0].len();
    a.iter()
        .map(|row| (0..n).map(|j| (0..k).fold(BigRational::zero(), |s, t| s + &row[t] * &b[t][j])).collect())
        .collect()
}

/// For genus 2 and injective `p`, the preimage of `R p(v)` is the rational
/// plane `span{v, M v}` with `M` multiplication by `sqrt(D)`, so every line
/// preimage is Lagrangian iff `omega(v, M v) = 0` for all `v`, that is iff
/// `M^T J = J M`. A brute-force pass over `v` with entries in
/// `-bound..=bound` checks the answer; since a quadratic form is determined
/// by its values on `e_i` and `e_i + e_j`, any `bound >= 1` is conclusive.
pub fn lagrangian_line_structure(p: &PeriodCharacter, bound: i64) -> Result<LagrangianReport, ClassifyError> {
    if p.genus() != 2 {
        return Err(ClassifyError::GenusTooSmall(p.genus()));
    }
    if !p.volume().is_positive() {
        return Err(ClassifyError::ZeroVolume);
    }
    if !p.is_injective() {
        return Err(ClassifyError::NotInjective);
    }
    let FieldDesc::Quadratic(d) = p.field() else {
        return Err(ClassifyError::NotInjective);
    };
    let dq = BigRational::from_integer(d.into());
    let z = BigRational::zero;
    let o = BigRational::one;
    // Row vectors of components (r, s) map to (D s, r) in each block.
    let nmat: Vec<QVec> = vec![
        vec![z(), o(), z(), z()],
        vec![dq.clone(), z(), z(), z()],
        vec![z(), z(), z(), o()],
        vec![z(), z(), dq, z()],
    ];
    let c = p.components();
    let cinv = invert(&c).ok_or_else(|| ClassifyError::Invariant("injective character with singular components".into()))?;
    let mt = matmul(&matmul(&c, &nmat), &cinv);
    let m: Vec<QVec> = (0..4).map(|i| (0..4).map(|j| mt[j][i].clone()).collect()).collect();
    let j: Vec<QVec> = symplattice::SymplecticSpace::new(2)
        .gram()
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let self_adjoint = matmul(&mt, &j) == matmul(&j, &m);

    let mut violating_vector = None;
    for v in candidates(4, bound.max(1)) {
        let w = p.evaluate(&v)?;
        let pre = p.line_preimage(&w);
        if symplattice::restricted_gram(&pre).iter().flatten().any(|&x| x != 0) {
            violating_vector = Some(v);
            break;
        }
    }
    let lagrangian = violating_vector.is_none();
    if lagrangian != self_adjoint {
        return Err(ClassifyError::Invariant(format!(
            "self-adjointness ({self_adjoint}) disagrees with the line preimage search ({lagrangian})"
        )));
    }
    Ok(LagrangianReport {
        lagrangian,
        self_adjoint,
        multiplication: m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        bound: bound.max(1),
        violating_vector,
    })
}
