//! Integer symplectic linear algebra on `Z^{2g}` with basis
//! `(a_1, b_1, ..., a_g, b_g)` and `omega(a_i, b_i) = 1`.

use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::LatticeError;
use crate::intmat::{self, big, small, ZVec};

fn check_dim(v: &[i64], n: usize) -> Result<(), LatticeError> {
    if v.len() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, found: v.len() });
    }
    Ok(())
}

fn genus_of(v: &[i64]) -> Result<usize, LatticeError> {
    if v.is_empty() || !v.len().is_multiple_of(2) {
        return Err(LatticeError::OddDimension(v.len()));
    }
    Ok(v.len() / 2)
}

/// The standard symplectic space `Z^{2g}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticSpace {
    pub g: usize,
}

impl SymplecticSpace {
    pub fn new(g: usize) -> Self {
        SymplecticSpace { g }
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    /// Basis vector `a_i` (1-based, as in the usual notation).
    pub fn a(&self, i: usize) -> Vec<i64> {
        self.unit(2 * (i - 1))
    }

    pub fn b(&self, i: usize) -> Vec<i64> {
        self.unit(2 * (i - 1) + 1)
    }

    pub fn unit(&self, k: usize) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        v[k] = 1;
        v
    }

    /// Gram matrix `J` of omega.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let mut j = vec![vec![0; n]; n];
        for k in 0..self.g {
            j[2 * k][2 * k + 1] = 1;
            j[2 * k + 1][2 * k] = -1;
        }
        j
    }
}

pub fn omega(x: &[i64], y: &[i64]) -> Result<i64, LatticeError> {
    genus_of(x)?;
    check_dim(y, x.len())?;
    let v = omega_big(&big(x), &big(y));
    i64::try_from(v).map_err(|_| LatticeError::Overflow)
}

pub(crate) fn omega_big(x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for k in 0..x.len() / 2 {
        s += &x[2 * k] * &y[2 * k + 1] - &x[2 * k + 1] * &y[2 * k];
    }
    s
}

pub(crate) fn omega_i64(x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for k in 0..x.len() / 2 {
        s += x[2 * k] * y[2 * k + 1] - x[2 * k + 1] * y[2 * k];
    }
    s
}

pub fn is_primitive(v: &[i64]) -> bool {
    intmat::content(&big(v)).is_one()
}

fn require_primitive(v: &[i64]) -> Result<(), LatticeError> {
    if is_primitive(v) {
        Ok(())
    } else {
        Err(LatticeError::NotPrimitive(v.to_vec()))
    }
}

fn gram_form(gram: &[ZVec], x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            s += xi * &gram[i][j] * yj;
        }
    }
    s
}

/// Symplectic Gram–Schmidt: given an alternating form (Gram matrix on
/// `Z^k`) unimodular on the span of `basis`, returns `(e_1, f_1, ...)`
/// with `form(e_i, f_i) = 1` and all other pairings zero. `first`, when
/// given, becomes `e_1` and must be primitive in the span.
pub(crate) fn symplectic_basis_gram(
    gram: &[ZVec],
    basis: &[ZVec],
    first: Option<&[BigInt]>,
) -> Result<Vec<ZVec>, LatticeError> {
    let k = gram.len();
    let mut cur: Vec<ZVec> = basis.to_vec();
    let mut first = first.map(|f| f.to_vec());
    let mut out = Vec::new();
    while !cur.is_empty() {
        let given = first.is_some();
        let a = first.take().unwrap_or_else(|| cur[0].clone());
        let c: Vec<BigInt> = cur.iter().map(|v| gram_form(gram, &a, v)).collect();
        let (g, x) = intmat::ext_gcd_vec(&c);
        if !g.is_one() {
            return Err(if given {
                LatticeError::NotPrimitive(small(&a).unwrap_or_default())
            } else {
                LatticeError::NotSymplectic(format!("form content {g} on the remaining span"))
            });
        }
        let mut b = vec![BigInt::zero(); k];
        for (xj, v) in x.iter().zip(&cur) {
            for (bi, vi) in b.iter_mut().zip(v) {
                *bi += xj * vi;
            }
        }
        let projected: Vec<ZVec> = cur
            .iter()
            .map(|v| {
                let wb = gram_form(gram, v, &b);
                let wa = gram_form(gram, v, &a);
                v.iter().zip(&a).zip(&b).map(|((vi, ai), bi)| vi - &wb * ai + &wa * bi).collect()
            })
            .collect();
        cur = intmat::lattice_basis(&projected, k);
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

fn standard_gram(g: usize) -> Vec<ZVec> {
    SymplecticSpace::new(g).gram().iter().map(|r| big(r)).collect()
}

fn standard_basis(n: usize) -> Vec<ZVec> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
}

/// Completes a primitive `a` to a symplectic basis `(a, b, a_2', b_2', ...)`.
pub fn symplectic_complete(a: &[i64]) -> Result<Vec<Vec<i64>>, LatticeError> {
    let g = genus_of(a)?;
    require_primitive(a)?;
    let out = symplectic_basis_gram(&standard_gram(g), &standard_basis(2 * g), Some(&big(a)))?;
    out.iter().map(|v| small(v)).collect()
}

/// A sublattice of `Z^{2g}` given by independent generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sublattice {
    g: usize,
    #[serde(serialize_with = "crate::ser::intmat")]
    gens: Vec<Vec<i64>>,
    saturated: bool,
}

impl Sublattice {
    pub fn new(g: usize, gens: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        for v in &gens {
            check_dim(v, 2 * g)?;
        }
        let bg: Vec<ZVec> = gens.iter().map(|v| big(v)).collect();
        let rows: Vec<ZVec> = (0..2 * g).map(|i| bg.iter().map(|v| v[i].clone()).collect()).collect();
        let s = intmat::smith(&rows, gens.len());
        if s.rank() != gens.len() {
            return Err(LatticeError::DependentGenerators);
        }
        let saturated = s.divisors().iter().all(|d| d.is_one());
        Ok(Sublattice { g, gens, saturated })
    }

    /// The sublattice spanned by arbitrary (possibly dependent) vectors.
    pub fn span(g: usize, vectors: &[Vec<i64>]) -> Result<Self, LatticeError> {
        for v in vectors {
            check_dim(v, 2 * g)?;
        }
        let bg: Vec<ZVec> = vectors.iter().map(|v| big(v)).collect();
        let basis = intmat::lattice_basis(&bg, 2 * g);
        Sublattice::new(g, basis.iter().map(|v| small(v)).collect::<Result<_, _>>()?)
    }

    pub(crate) fn from_big(g: usize, basis: &[ZVec]) -> Result<Self, LatticeError> {
        Sublattice::new(g, basis.iter().map(|v| small(v)).collect::<Result<_, _>>()?)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    fn big_gens(&self) -> Vec<ZVec> {
        self.gens.iter().map(|v| big(v)).collect()
    }

    /// Whether `v` lies in the integer span.
    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != 2 * self.g {
            return false;
        }
        let mut cols = self.big_gens();
        cols.push(big(v));
        let rel = intmat::column_echelon(&cols, 2 * self.g).relations;
        match rel.as_slice() {
            [] => v.iter().all(|x| *x == 0),
            [r] => r[self.rank()].abs().is_one(),
            _ => false,
        }
    }

    /// Whether both lattices have the same integer span.
    pub fn same_span(&self, other: &Sublattice) -> bool {
        self.g == other.g
            && self.rank() == other.rank()
            && self.gens.iter().all(|v| other.contains(v))
            && other.gens.iter().all(|v| self.contains(v))
    }
}

pub fn saturate(l: &Sublattice) -> Sublattice {
    let sat = intmat::saturate(&l.big_gens(), 2 * l.g);
    Sublattice::from_big(l.g, &sat).expect("saturation basis is independent")
}

/// Gram matrix of omega on the generators of `v`.
pub fn restricted_gram(v: &Sublattice) -> Vec<Vec<i64>> {
    v.gens.iter().map(|x| v.gens.iter().map(|y| omega_i64(x, y)).collect()).collect()
}

pub(crate) fn restricted_gram_det(v: &Sublattice) -> BigInt {
    let gram: Vec<ZVec> = restricted_gram(v).iter().map(|r| big(r)).collect();
    intmat::det(&gram)
}

/// True iff the restricted form is unimodular (even rank, `|det| = 1`).
pub fn is_symplectic_submodule(v: &Sublattice) -> bool {
    v.rank().is_multiple_of(2) && restricted_gram_det(v).abs().is_one()
}

/// A symplectic basis `(e_1, f_1, ...)` of a symplectic sublattice.
pub fn symplectic_basis(v: &Sublattice) -> Result<Vec<Vec<i64>>, LatticeError> {
    if !is_symplectic_submodule(v) {
        return Err(LatticeError::NotSymplectic(restricted_gram_det(v).to_string()));
    }
    let k = v.rank();
    let gram: Vec<ZVec> = restricted_gram(v).iter().map(|r| big(r)).collect();
    let coords = symplectic_basis_gram(&gram, &standard_basis(k), None)?;
    let gens = v.big_gens();
    coords
        .iter()
        .map(|c| {
            let mut x = vec![BigInt::zero(); 2 * v.g];
            for (cj, gj) in c.iter().zip(&gens) {
                for (xi, gi) in x.iter_mut().zip(gj) {
                    *xi += cj * gi;
                }
            }
            small(&x)
        })
        .collect()
}

/// `{x : omega(x, v) = 0 for all v in V}`, saturated.
pub fn orth_complement(v: &Sublattice) -> Sublattice {
    let rows: Vec<ZVec> = v
        .gens
        .iter()
        .map(|x| (0..2 * v.g).map(|j| BigInt::from(omega_i64(x, &SymplecticSpace::new(v.g).unit(j)))).collect())
        .collect();
    let k = intmat::integer_kernel(&rows, 2 * v.g);
    Sublattice::from_big(v.g, &k).expect("kernel basis is independent")
}

/// The quotient `a^perp / Z a` presented in a symplectic basis.
#[derive(Clone, Debug, Serialize)]
pub struct SymplecticQuotient {
    g: usize,
    #[serde(serialize_with = "crate::ser::intvec")]
    a: Vec<i64>,
    /// Full symplectic basis `(a, b, e_2, f_2, ...)` of `Z^{2g}`.
    #[serde(serialize_with = "crate::ser::intmat")]
    complete: Vec<Vec<i64>>,
}

impl SymplecticQuotient {
    pub fn a(&self) -> &[i64] {
        &self.a
    }

    /// The partner `b` with `omega(a, b) = 1`.
    pub fn partner(&self) -> &[i64] {
        &self.complete[1]
    }

    /// Lifts `(e_2, f_2, ..., e_g, f_g)` of the quotient basis.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.complete[2..]
    }

    pub fn genus(&self) -> usize {
        self.g - 1
    }

    /// Coordinates of `x` (which must pair to zero with `a`) in the quotient
    /// basis.
    pub fn project(&self, x: &[i64]) -> Result<Vec<i64>, LatticeError> {
        check_dim(x, 2 * self.g)?;
        if omega_i64(x, &self.a) != 0 {
            return Err(LatticeError::NotInComplement(x.to_vec()));
        }
        let bx = big(x);
        let mut out = Vec::with_capacity(2 * self.g - 2);
        for pair in self.complete[2..].chunks(2) {
            out.push(omega_big(&bx, &big(&pair[1])));
            out.push(omega_big(&big(&pair[0]), &bx));
        }
        small(&out)
    }
}

pub fn quotient_symplectic(a: &[i64]) -> Result<SymplecticQuotient, LatticeError> {
    let g = genus_of(a)?;
    let complete = symplectic_complete(a)?;
    Ok(SymplecticQuotient { g, a: a.to_vec(), complete })
}

/// An integer matrix preserving omega. Column `j` is the image of the
/// `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpMatrix {
    #[serde(serialize_with = "crate::ser::intmat")]
    m: Vec<Vec<i64>>,
}

fn preserves_form<T>(m: &[Vec<T>], g: usize, mul: impl Fn(&T, &T) -> T, lift: impl Fn(i64) -> T) -> bool
where
    T: Clone + PartialEq + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let n = 2 * g;
    for i in 0..n {
        for j in 0..n {
            let mut s = lift(0);
            for k in 0..g {
                s = s + mul(&m[2 * k][i], &m[2 * k + 1][j]) - mul(&m[2 * k + 1][i], &m[2 * k][j]);
            }
            let want = if j == i + 1 && i % 2 == 0 {
                lift(1)
            } else if i == j + 1 && j % 2 == 0 {
                lift(-1)
            } else {
                lift(0)
            };
            if s != want {
                return false;
            }
        }
    }
    true
}

impl SpMatrix {
    pub fn new(m: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = m.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(LatticeError::OddDimension(n));
        }
        for r in &m {
            check_dim(r, n)?;
        }
        let bm: Vec<ZVec> = m.iter().map(|r| big(r)).collect();
        if !preserves_form(&bm, n / 2, |a, b| a * b, BigInt::from) {
            return Err(LatticeError::NotSymplecticMatrix);
        }
        Ok(SpMatrix { m })
    }

    pub fn identity(g: usize) -> Self {
        let n = 2 * g;
        SpMatrix { m: (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect() }
    }

    pub fn genus(&self) -> usize {
        self.m.len() / 2
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[i][j]
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>, LatticeError> {
        check_dim(v, self.m.len())?;
        let bv = big(v);
        let out: ZVec = self.m.iter().map(|r| intmat::dot(&big(r), &bv)).collect();
        small(&out)
    }

    /// `M^{-1} = -J M^T J`.
    pub fn inverse(&self) -> Self {
        let n = self.m.len();
        let j = SymplecticSpace::new(n / 2).gram();
        let mut out = vec![vec![0i64; n]; n];
        for r in 0..n {
            for c in 0..n {
                let mut s = 0i64;
                for k in 0..n {
                    for l in 0..n {
                        s += j[r][k] * self.m[l][k] * j[l][c];
                    }
                }
                out[r][c] = -s;
            }
        }
        SpMatrix { m: out }
    }

    pub fn try_mul(&self, other: &SpMatrix) -> Result<SpMatrix, LatticeError> {
        let n = self.m.len();
        check_dim(&other.m[0], n)?;
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s: i128 = 0;
                for k in 0..n {
                    s += self.m[i][k] as i128 * other.m[k][j] as i128;
                }
                out[i][j] = i64::try_from(s).map_err(|_| LatticeError::Overflow)?;
            }
        }
        Ok(SpMatrix { m: out })
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix {
            m: self.m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        }
    }
}

impl Mul for &SpMatrix {
    type Output = SpMatrix;
    fn mul(self, rhs: &SpMatrix) -> SpMatrix {
        self.try_mul(rhs).expect("symplectic product overflowed")
    }
}

/// A rational `2g x 2g` matrix, used for the rescalings `S_lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    m: Vec<Vec<BigRational>>,
}

impl QMatrix {
    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.m
    }

    pub fn is_symplectic(&self) -> bool {
        let n = self.m.len();
        n.is_multiple_of(2) && preserves_form(&self.m, n / 2, |a, b| a * b, |x| BigRational::from_integer(x.into()))
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        let n = self.m.len();
        let m = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &self.m[i][k] * &rhs.m[k][j]).sum()).collect())
            .collect();
        QMatrix { m }
    }
}

/// The transvection `D_a(x) = x + omega(x, a) a`.
pub fn transvection(a: &[i64]) -> Result<SpMatrix, LatticeError> {
    let g = genus_of(a)?;
    require_primitive(a)?;
    let sp = SymplecticSpace::new(g);
    let n = 2 * g;
    let mut m = vec![vec![0i64; n]; n];
    for j in 0..n {
        let w = omega_i64(&sp.unit(j), a);
        for i in 0..n {
            m[i][j] = (i == j) as i64 + w * a[i];
        }
    }
    SpMatrix::new(m)
}

/// Parameters of `M_{phi, alpha}`: `phi` lists `phi(a_2), phi(b_2), ...,
/// phi(a_g), phi(b_g)`.
fn heis_entries(g: usize, phi: &[BigRational], alpha: &BigRational) -> Result<Vec<Vec<BigRational>>, LatticeError> {
    if g < 2 {
        return Err(LatticeError::OddDimension(2 * g));
    }
    if phi.len() != 2 * g - 2 {
        return Err(LatticeError::DimensionMismatch { expected: 2 * g - 2, found: phi.len() });
    }
    let n = 2 * g;
    let mut m: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))).collect()).collect();
    for k in 1..g {
        let (pa, pb) = (&phi[2 * k - 2], &phi[2 * k - 1]);
        // M(a_k) = a_k + phi(a_k) a_1, M(b_k) = b_k + phi(b_k) a_1
        m[0][2 * k] = pa.clone();
        m[0][2 * k + 1] = pb.clone();
        // M(b_1) picks up phi(b_k) a_k - phi(a_k) b_k
        m[2 * k][1] = pb.clone();
        m[2 * k + 1][1] = -pa.clone();
    }
    m[0][1] = alpha.clone();
    Ok(m)
}

pub fn heis_m(g: usize, phi: &[i64], alpha: i64) -> Result<SpMatrix, LatticeError> {
    let q: Vec<BigRational> = phi.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let m = heis_entries(g, &q, &BigRational::from_integer(alpha.into()))?;
    SpMatrix::new(m.iter().map(|r| r.iter().map(|x| x.to_integer().try_into().expect("integer entries")).collect()).collect())
}

pub fn heis_m_q(g: usize, phi: &[BigRational], alpha: &BigRational) -> Result<QMatrix, LatticeError> {
    Ok(QMatrix { m: heis_entries(g, phi, alpha)? })
}

/// `S_lambda`: `a_1 -> lambda a_1`, `b_1 -> b_1 / lambda`, rest fixed.
pub fn heis_s(g: usize, lambda: &BigRational) -> Result<QMatrix, LatticeError> {
    if lambda.is_zero() {
        return Err(LatticeError::ZeroScale);
    }
    let n = 2 * g;
    let mut m: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))).collect()).collect();
    m[0][0] = lambda.clone();
    m[1][1] = lambda.recip();
    Ok(QMatrix { m })
}

/// `omega(phi, phi') = sum_k phi(a_k) phi'(b_k) - phi'(a_k) phi(b_k)`.
pub fn heis_omega(phi: &[i64], psi: &[i64]) -> i64 {
    omega_i64(phi, psi)
}

fn dual(w: &[i64]) -> Result<ZVec, LatticeError> {
    let g = genus_of(w)?;
    let bw = big(w);
    let c: Vec<BigInt> = (0..2 * g).map(|j| omega_big(&bw, &big(&SymplecticSpace::new(g).unit(j)))).collect();
    let (gcd, x) = intmat::ext_gcd_vec(&c);
    if !gcd.is_one() {
        return Err(LatticeError::NotPrimitive(w.to_vec()));
    }
    Ok(x)
}

/// Given primitive `w1`, `w4` with `omega(w1, w4) = 0`, returns `(w2, w3)`
/// with `omega(w1, w2) = omega(w2, w3) = omega(w3, w4) = 1`.
pub fn primitive_chain(w1: &[i64], w4: &[i64]) -> Result<(Vec<i64>, Vec<i64>), LatticeError> {
    let g = genus_of(w1)?;
    check_dim(w4, 2 * g)?;
    require_primitive(w1)?;
    require_primitive(w4)?;
    let (bw1, bw4) = (big(w1), big(w4));
    let o = omega_big(&bw1, &bw4);
    if !o.is_zero() {
        return Err(LatticeError::NotOrthogonal(i64::try_from(o).unwrap_or(i64::MAX)));
    }
    let b1 = dual(w1)?;
    // b4 with omega(b4, w4) = 1
    let b4: ZVec = dual(w4)?.iter().map(|x| -x).collect();
    let k = omega_big(&b1, &b4);
    let w3: ZVec = b4.iter().zip(&bw1).map(|(x, y)| x + &k * y).collect();
    let w3s = small(&w3)?;
    let b3: ZVec = dual(&w3s)?.iter().map(|x| -x).collect();
    let l = BigInt::one() - omega_big(&bw1, &b3);
    let w2: ZVec = b3.iter().zip(&b1).map(|(x, y)| x + &l * y).collect();
    Ok((small(&w2)?, w3s))
}
