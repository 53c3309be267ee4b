//! Orbit-closure classification of period characters under `Sp(2g, Z)`,
//! admissible decompositions, pinchable classes and boundary membership.

mod admissible;
mod pinch;
mod scan;
mod walk;

pub use admissible::{
    admissible_split, find_admissible_rank2, lagrangian_line_structure, AdmissibleSplit, AdmissibleWitness,
    LagrangianReport, LatticeObstruction, SplitFailure, SplitOutcome, DEFAULT_BOUND, DEFAULT_BUDGET,
};
pub use pinch::{boundary_membership, boundary_membership_all, is_pinchable, pinchable_report, PinchableReport};
pub use scan::{boundary_scan, BoundaryScan, MAX_SCAN_VECTORS};
pub use walk::{orbit_walk, OrbitWalk, WalkRow};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::ClassifyError;
use crate::intmat::{self, QVec};
use crate::periods::PeriodCharacter;
use crate::scalar::{FieldDesc, KComplex, QuadReal};

pub(crate) fn omega_k(x: &[QuadReal], y: &[QuadReal]) -> QuadReal {
    let mut s = QuadReal::zero();
    for k in 0..x.len() / 2 {
        s += &(&x[2 * k] * &y[2 * k + 1] - &x[2 * k + 1] * &y[2 * k]);
    }
    s
}

fn galois_vec(x: &[QuadReal]) -> Vec<QuadReal> {
    x.iter().map(|v| v.galois()).collect()
}

/// One of the four pairings `omega(x, y^sigma)`, `x, y in {Re p, Im p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisPairing {
    pub x: &'static str,
    pub y: &'static str,
    pub value: QuadReal,
}

/// Orbit-closure case with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// `W` is rational; `p(H_1)` is a lattice.
    Discrete {
        lattice_basis: Vec<KComplex>,
        covolume: QuadReal,
        #[serde(serialize_with = "crate::ser::bigint")]
        degree: BigInt,
    },
    /// `W` contains exactly one rational line, spanned by `vector`, with
    /// `alpha Re p + beta Im p = vector`.
    RplusIz {
        #[serde(serialize_with = "crate::ser::intvec")]
        vector: Vec<i64>,
        alpha: QuadReal,
        beta: QuadReal,
    },
    /// `W` contains no rational vector.
    Dense {
        /// Rows of the homogeneous system in `(alpha_0, alpha_1, beta_0,
        /// beta_1)` whose only solution is zero.
        system: Vec<Vec<String>>,
        system_rank: usize,
        /// For `g = 2`, a pairing `omega(x, y^sigma) != 0`.
        #[serde(skip_serializing_if = "Option::is_none")]
        nonzero_pairing: Option<GaloisPairing>,
    },
    /// Genus 2, `W^sigma = W^perp`.
    Hilbert { d: u64, pairings: Vec<GaloisPairing> },
}

impl Classification {
    pub fn case_name(&self) -> &'static str {
        match self {
            Classification::Discrete { .. } => "DISCRETE",
            Classification::RplusIz { .. } => "RPLUS_IZ",
            Classification::Dense { .. } => "DENSE",
            Classification::Hilbert { .. } => "HILBERT",
        }
    }

    /// Re-checks the certificate against `p` with exact arithmetic.
    pub fn verify(&self, p: &PeriodCharacter) -> bool {
        let (re, im) = (p.real_part(), p.imag_part());
        match self {
            Classification::Discrete { lattice_basis, covolume, degree } => {
                let [w1, w2] = lattice_basis.as_slice() else { return false };
                let c = w1.cross(w2);
                if c.is_zero() || c.abs() != *covolume {
                    return false;
                }
                let in_lattice = p.values().iter().all(|v| {
                    // v = m w1 + n w2 with m = cross(v, w2) / cross(w1, w2), n = cross(w1, v) / cross(w1, w2)
                    let m = v.cross(w2).try_div(&c);
                    let n = w1.cross(v).try_div(&c);
                    matches!((m, n), (Ok(m), Ok(n)) if is_integer(&m) && is_integer(&n))
                });
                in_lattice && covolume.scale_rational(&BigRational::from_integer(degree.clone())) == p.volume()
            }
            Classification::RplusIz { vector, alpha, beta } => {
                crate::symplattice::is_primitive(vector)
                    && re.iter().zip(&im).zip(vector).all(|((r, i), v)| &(alpha * r) + &(beta * i) == QuadReal::from_int(*v))
            }
            Classification::Dense { system_rank, nonzero_pairing, .. } => {
                let sys = rational_line_system(p);
                *system_rank == 4
                    && intmat::rank_q(&sys, 4) == 4
                    && nonzero_pairing.as_ref().is_none_or(|np| {
                        let v = pairing(&re, &im, np.x, np.y);
                        !v.is_zero() && v == np.value
                    })
            }
            Classification::Hilbert { d, pairings } => {
                p.genus() == 2
                    && p.field() == FieldDesc::Quadratic(*d)
                    && pairings.len() == 4
                    && pairings.iter().all(|pp| pp.value.is_zero() && pairing(&re, &im, pp.x, pp.y).is_zero())
            }
        }
    }
}

fn is_integer(x: &QuadReal) -> bool {
    x.is_rational() && x.rat().is_integer()
}

fn pairing(re: &[QuadReal], im: &[QuadReal], x: &str, y: &str) -> QuadReal {
    let pick = |n: &str| if n == "re" { re } else { im };
    omega_k(pick(x), &galois_vec(pick(y)))
}

fn all_pairings(p: &PeriodCharacter) -> Vec<GaloisPairing> {
    let (re, im) = (p.real_part(), p.imag_part());
    let mut out = Vec::new();
    for x in ["re", "im"] {
        for y in ["re", "im"] {
            out.push(GaloisPairing { x, y, value: pairing(&re, &im, x, y) });
        }
    }
    out
}

/// The `2g x 4` system `alpha_0 R_1 + alpha_1 R_0 + beta_0 I_1 + beta_1 I_0
/// = 0` expressing that `alpha Re p + beta Im p` (with `alpha, beta in K`)
/// has vanishing irrational part.
fn rational_line_system(p: &PeriodCharacter) -> Vec<QVec> {
    p.values()
        .iter()
        .map(|v| vec![v.re.irr().clone(), v.re.rat().clone(), v.im.irr().clone(), v.im.rat().clone()])
        .collect()
}

pub fn classify_orbit_closure(p: &PeriodCharacter) -> Result<Classification, ClassifyError> {
    if !p.volume().is_positive() {
        return Err(ClassifyError::ZeroVolume);
    }
    let d = match p.field() {
        FieldDesc::Rational => None,
        FieldDesc::Quadratic(d) => Some(d),
    };
    let system = rational_line_system(p);
    let solutions = match d {
        None => 2,
        Some(_) => intmat::nullspace_q(&system, 4).len(),
    };
    match solutions {
        2 => {
            let h = p.is_haupt()?;
            let img = h.image;
            if !img.discrete {
                return Err(ClassifyError::Invariant("rational W but the image is not discrete".into()));
            }
            let (Some(basis), Some(covolume), Some(degree)) = (img.lattice_basis, img.covolume, h.degree) else {
                return Err(ClassifyError::Invariant("rational W without a rank-2 image lattice".into()));
            };
            Ok(Classification::Discrete { lattice_basis: basis, covolume, degree })
        }
        1 => {
            let d = d.expect("one solution only occurs over a quadratic field");
            let sol = &intmat::nullspace_q(&system, 4)[0];
            let dq = BigRational::from_integer(d.into());
            let (a0, a1, b0, b1) = (&sol[0], &sol[1], &sol[2], &sol[3]);
            let v: Vec<BigRational> = p
                .values()
                .iter()
                .map(|x| a0 * x.re.rat() + &dq * a1 * x.re.irr() + b0 * x.im.rat() + &dq * b1 * x.im.irr())
                .collect();
            let (vint, scale) = intmat::primitive_multiple(&v);
            let field = p.field();
            let alpha = QuadReal::new(a0.clone(), a1.clone(), field).scale_rational(&scale);
            let beta = QuadReal::new(b0.clone(), b1.clone(), field).scale_rational(&scale);
            Ok(Classification::RplusIz { vector: intmat::small(&vint)?, alpha, beta })
        }
        0 => {
            let pairings = all_pairings(p);
            if p.genus() == 2 && pairings.iter().all(|x| x.value.is_zero()) {
                return Ok(Classification::Hilbert { d: d.expect("irrational W"), pairings });
            }
            let nonzero_pairing =
                if p.genus() == 2 { pairings.into_iter().find(|x| !x.value.is_zero()) } else { None };
            Ok(Classification::Dense {
                system: system.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
                system_rank: 4,
                nonzero_pairing,
            })
        }
        k => Err(ClassifyError::Invariant(format!("W meets Q^2g in dimension {k}"))),
    }
}
