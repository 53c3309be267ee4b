//! Period characters `p : H_1(S_g, Z) -> C` with values in `K + iK`.

mod line_rank;

pub use line_rank::LineRankResult;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::PeriodError;
use crate::intmat::{self, QVec, ZVec};
use crate::scalar::{FieldDesc, KComplex, QuadReal};
use crate::symplattice::{self, SpMatrix, Sublattice, SymplecticQuotient};

/// Images `p(a_1), p(b_1), ..., p(a_g), p(b_g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCharacter {
    g: usize,
    #[serde(serialize_with = "ser_field")]
    field: FieldDesc,
    vals: Vec<KComplex>,
}

fn ser_field<S: Serializer>(f: &FieldDesc, s: S) -> Result<S::Ok, S::Error> {
    match f.radicand() {
        Some(d) => s.serialize_u64(d),
        None => s.serialize_str("rational"),
    }
}

impl PeriodCharacter {
    pub fn new(g: usize, vals: Vec<KComplex>) -> Result<Self, PeriodError> {
        if g == 0 {
            return Err(PeriodError::ZeroGenus);
        }
        if vals.len() != 2 * g {
            return Err(PeriodError::WrongLength { expected: 2 * g, found: vals.len() });
        }
        let mut field = FieldDesc::Rational;
        for v in &vals {
            field = field.join(v.field()?)?;
        }
        Ok(PeriodCharacter { g, field, vals })
    }

    /// Like [`PeriodCharacter::new`] but records a field even when every
    /// entry happens to be rational.
    pub fn with_field(g: usize, field: FieldDesc, vals: Vec<KComplex>) -> Result<Self, PeriodError> {
        let mut p = Self::new(g, vals)?;
        p.field = p.field.join(field)?;
        Ok(p)
    }

    /// Gaussian-integer values `(re, im)`.
    pub fn from_ints(g: usize, vals: &[(i64, i64)]) -> Result<Self, PeriodError> {
        Self::new(g, vals.iter().map(|&(r, i)| KComplex::from_ints(r, i)).collect())
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn values(&self) -> &[KComplex] {
        &self.vals
    }

    fn check_len(&self, v: &[i64]) -> Result<(), PeriodError> {
        if v.len() != 2 * self.g {
            return Err(PeriodError::Lattice(crate::LatticeError::DimensionMismatch {
                expected: 2 * self.g,
                found: v.len(),
            }));
        }
        Ok(())
    }

    pub fn evaluate(&self, v: &[i64]) -> Result<KComplex, PeriodError> {
        self.check_len(v)?;
        let mut acc = KComplex::zero();
        for (c, p) in v.iter().zip(&self.vals) {
            if *c != 0 {
                acc += &p.scale_int(*c);
            }
        }
        Ok(acc)
    }

    pub(crate) fn evaluate_big(&self, v: &[BigInt]) -> KComplex {
        let mut acc = KComplex::zero();
        for (c, p) in v.iter().zip(&self.vals) {
            if !c.is_zero() {
                let k = QuadReal::from_bigint(c.clone());
                acc += &p.scale_real(&k);
            }
        }
        acc
    }

    pub fn real_part(&self) -> Vec<QuadReal> {
        self.vals.iter().map(|v| v.re.clone()).collect()
    }

    pub fn imag_part(&self) -> Vec<QuadReal> {
        self.vals.iter().map(|v| v.im.clone()).collect()
    }

    /// `vol(p) = sum_j Im(conj(p(a_j)) p(b_j))`.
    pub fn volume(&self) -> QuadReal {
        let mut v = QuadReal::zero();
        for j in 0..self.g {
            v += &self.vals[2 * j].cross(&self.vals[2 * j + 1]);
        }
        v
    }

    /// `omega(Re p, Im p)` computed as `Re^T J Im`.
    pub fn volume_omega(&self) -> QuadReal {
        let j = symplattice::SymplecticSpace::new(self.g).gram();
        let (re, im) = (self.real_part(), self.imag_part());
        let mut v = QuadReal::zero();
        for (r, row) in j.iter().enumerate() {
            for (c, &e) in row.iter().enumerate() {
                if e != 0 {
                    v += &(&re[r] * &im[c]).scale_int(e);
                }
            }
        }
        v
    }

    /// The `2g x 4` matrix of rational components
    /// `(re.rat, re.irr, im.rat, im.irr)` of the basis values.
    pub(crate) fn components(&self) -> Vec<QVec> {
        self.vals
            .iter()
            .map(|v| vec![v.re.rat().clone(), v.re.irr().clone(), v.im.rat().clone(), v.im.irr().clone()])
            .collect()
    }

    pub(crate) fn from_components(&self, c: &[BigRational]) -> KComplex {
        KComplex::new(
            QuadReal::new(c[0].clone(), c[1].clone(), self.field),
            QuadReal::new(c[2].clone(), c[3].clone(), self.field),
        )
    }

    /// Saturated kernel `{v : p(v) = 0}`.
    pub fn kernel(&self) -> Sublattice {
        let comps = self.components();
        let rows: Vec<QVec> = (0..4).map(|k| comps.iter().map(|c| c[k].clone()).collect()).collect();
        let k = intmat::integer_kernel(&intmat::clear_denominators(&rows), 2 * self.g);
        Sublattice::from_big(self.g, &k).expect("kernel basis fits in 64 bits")
    }

    pub fn is_injective(&self) -> bool {
        intmat::rank_q(&self.components(), 4) == 2 * self.g
    }

    pub fn image_analysis(&self) -> ImageAnalysis {
        let comps = self.components();
        let zrank = intmat::rank_q(&comps, 4);
        let nonzero: Vec<&KComplex> = self.vals.iter().filter(|v| !v.is_zero()).collect();
        let rspan_dim = if nonzero.is_empty() {
            0
        } else if nonzero.iter().any(|x| nonzero.iter().any(|y| !x.cross(y).is_zero())) {
            2
        } else {
            1
        };
        let discrete = zrank <= 2 && rspan_dim == zrank;
        let mut lattice_basis = None;
        let mut covolume = None;
        if discrete && zrank > 0 {
            let den = comps.iter().flatten().fold(BigInt::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
            let dq = BigRational::from_integer(den.clone());
            let ints: Vec<ZVec> = comps.iter().map(|c| c.iter().map(|x| (x * &dq).to_integer()).collect()).collect();
            let basis: Vec<KComplex> = intmat::lattice_basis(&ints, 4)
                .iter()
                .map(|v| {
                    let c: Vec<BigRational> = v.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect();
                    self.from_components(&c)
                })
                .collect();
            if zrank == 2 {
                covolume = Some(basis[0].cross(&basis[1]).abs());
            }
            lattice_basis = Some(basis);
        }
        ImageAnalysis { zrank, rspan_dim, discrete, lattice_basis, covolume }
    }

    /// Decides the Haupt conditions by the covolume route and the kernel
    /// route and checks that both agree.
    pub fn is_haupt(&self) -> Result<HauptReport, PeriodError> {
        let volume = self.volume();
        let image = self.image_analysis();
        let kernel = self.kernel();
        let kernel_symplectic = symplattice::is_symplectic_submodule(&kernel);
        let positive = volume.is_positive();
        let (covolume_route, kernel_route) = if !positive {
            (HauptClause::NonPositiveVolume, HauptClause::NonPositiveVolume)
        } else if self.g == 1 {
            (HauptClause::Holds, HauptClause::Holds)
        } else {
            let c = match &image.covolume {
                Some(cv) if *cv == volume => HauptClause::VolumeEqualsCovolume,
                _ => HauptClause::Holds,
            };
            let k = if kernel.rank() == 2 * self.g - 2 && kernel_symplectic {
                HauptClause::SymplecticKernel
            } else {
                HauptClause::Holds
            };
            (c, k)
        };
        let haupt = covolume_route == HauptClause::Holds;
        if haupt != (kernel_route == HauptClause::Holds) {
            return Err(PeriodError::Invariant(format!(
                "Haupt routes disagree: covolume route {covolume_route:?}, kernel route {kernel_route:?}"
            )));
        }
        let degree = match (&image.covolume, positive) {
            (Some(cv), true) => {
                let q = volume.try_div(cv)?;
                if !q.is_rational() || !q.rat().is_integer() || !q.is_positive() {
                    return Err(PeriodError::Invariant(format!("vol / covolume = {q} is not a positive integer")));
                }
                Some(q.rat().to_integer())
            }
            _ => None,
        };
        Ok(HauptReport {
            haupt,
            volume,
            covolume_route,
            kernel_route,
            kernel_rank: kernel.rank(),
            kernel_symplectic,
            degree,
            image,
        })
    }

    /// `p o gamma`: `(p o gamma)(e_j) = sum_i gamma_ij p(e_i)`.
    pub fn apply_sp(&self, gamma: &SpMatrix) -> Result<Self, PeriodError> {
        if gamma.genus() != self.g {
            return Err(PeriodError::WrongLength { expected: 2 * self.g, found: 2 * gamma.genus() });
        }
        let n = 2 * self.g;
        let vals = (0..n)
            .map(|j| {
                let col: Vec<i64> = (0..n).map(|i| gamma.entry(i, j)).collect();
                self.evaluate(&col)
            })
            .collect::<Result<_, _>>()?;
        Ok(PeriodCharacter { g: self.g, field: self.field, vals })
    }

    /// Post-composition `(Re, Im) -> A (Re, Im)`.
    pub fn apply_gl2(&self, a: &[[QuadReal; 2]; 2]) -> Result<Self, PeriodError> {
        let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
        if det.is_zero() {
            return Err(PeriodError::SingularTransform);
        }
        let mut field = self.field;
        for row in a {
            for x in row {
                field = field.join(x.field())?;
            }
        }
        let vals = self
            .vals
            .iter()
            .map(|v| {
                KComplex::new(&a[0][0] * &v.re + &a[0][1] * &v.im, &a[1][0] * &v.re + &a[1][1] * &v.im)
            })
            .collect();
        Ok(PeriodCharacter { g: self.g, field, vals })
    }

    /// The character read on the vectors `basis` (a symplectic basis of
    /// some sublattice, in order `e_1, f_1, ...`).
    pub fn restrict(&self, basis: &[Vec<i64>]) -> Result<Self, PeriodError> {
        let vals = basis.iter().map(|v| self.evaluate(v)).collect::<Result<_, _>>()?;
        Ok(PeriodCharacter { g: basis.len() / 2, field: self.field, vals })
    }

    /// The restriction to a symplectic sublattice, read in a symplectic
    /// basis of it.
    pub fn restrict_to(&self, v: &Sublattice) -> Result<Self, PeriodError> {
        let basis = symplattice::symplectic_basis(v)?;
        self.restrict(&basis)
    }

    /// The induced character on `a^perp / Z a` (requires `p(a) = 0`).
    pub fn quotient(&self, q: &SymplecticQuotient) -> Result<Self, PeriodError> {
        if !self.evaluate(q.a())?.is_zero() {
            return Err(PeriodError::Invariant("quotient by a vector with nonzero period".into()));
        }
        self.restrict(q.basis())
    }

    /// Rank of `p^{-1}(R w)`.
    pub fn preimage_rank_of_line(&self, w: &KComplex) -> usize {
        2 * self.g - intmat::rank_q(&self.line_conditions(w), 2 * self.g)
    }

    /// Saturated preimage `p^{-1}(R w)`.
    pub fn line_preimage(&self, w: &KComplex) -> Sublattice {
        let rows = intmat::clear_denominators(&self.line_conditions(w));
        let k = intmat::integer_kernel(&rows, 2 * self.g);
        Sublattice::from_big(self.g, &k).expect("kernel basis fits in 64 bits")
    }

    /// The two rational conditions `Im(p(x) conj(w)) = 0`.
    fn line_conditions(&self, w: &KComplex) -> Vec<QVec> {
        let c: Vec<QuadReal> = self.vals.iter().map(|v| w.cross(v)).collect();
        vec![c.iter().map(|x| x.rat().clone()).collect(), c.iter().map(|x| x.irr().clone()).collect()]
    }

    pub fn line_rank(&self) -> Result<LineRankResult, PeriodError> {
        line_rank::line_rank(self)
    }
}

/// Image subgroup `p(H_1) <= C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageAnalysis {
    pub zrank: usize,
    pub rspan_dim: usize,
    pub discrete: bool,
    pub lattice_basis: Option<Vec<KComplex>>,
    pub covolume: Option<QuadReal>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HauptClause {
    Holds,
    NonPositiveVolume,
    /// The image is a lattice whose covolume equals the volume.
    VolumeEqualsCovolume,
    /// The kernel is symplectic of rank `2g - 2`.
    SymplecticKernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HauptReport {
    pub haupt: bool,
    pub volume: QuadReal,
    pub covolume_route: HauptClause,
    pub kernel_route: HauptClause,
    pub kernel_rank: usize,
    pub kernel_symplectic: bool,
    /// `vol / covolume` when the image is a lattice.
    #[serde(serialize_with = "crate::ser::opt_bigint")]
    pub degree: Option<BigInt>,
    pub image: ImageAnalysis,
}
