//! Integer and rational matrix routines: echelon forms with unimodular
//! transforms, integer kernels, Smith normal form, determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LatticeError;

pub type ZVec = Vec<BigInt>;
pub type QVec = Vec<BigRational>;

pub fn big(v: &[i64]) -> ZVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn small(v: &[BigInt]) -> Result<Vec<i64>, LatticeError> {
    v.iter().map(|x| x.to_i64().ok_or(LatticeError::Overflow)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `s a + t b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Finds `x` with `c . x = gcd(c)`. Prefers a unit entry of `c` so the
/// answer is a signed basis vector when possible.
pub fn ext_gcd_vec(c: &[BigInt]) -> (BigInt, ZVec) {
    let n = c.len();
    if let Some(i) = c.iter().position(|x| x.abs().is_one()) {
        let mut x = vec![BigInt::zero(); n];
        x[i] = c[i].signum();
        return (BigInt::one(), x);
    }
    let mut g = BigInt::zero();
    let mut x = vec![BigInt::zero(); n];
    for i in 0..n {
        if c[i].is_zero() {
            continue;
        }
        let (g2, s, t) = ext_gcd(&g, &c[i]);
        for xj in x.iter_mut() {
            *xj *= &s;
        }
        x[i] += t;
        g = g2;
    }
    (g, x)
}

fn combine(cols: &mut [ZVec], p: usize, j: usize, m: [[BigInt; 2]; 2]) {
    // new_p = m00 col_p + m10 col_j, new_j = m01 col_p + m11 col_j
    let (cp, cj) = (cols[p].clone(), cols[j].clone());
    for k in 0..cp.len() {
        cols[p][k] = &m[0][0] * &cp[k] + &m[1][0] * &cj[k];
        cols[j][k] = &m[0][1] * &cp[k] + &m[1][1] * &cj[k];
    }
}

/// Column echelon form of the matrix whose columns are `cols` (each of
/// length `m`), tracking the unimodular column transform.
pub struct ColumnEchelon {
    /// Nonzero echelon columns: a basis of the column span.
    pub basis: Vec<ZVec>,
    /// Transform columns mapped to zero: a basis of the integer relations
    /// among the input columns.
    pub relations: Vec<ZVec>,
}

pub fn column_echelon(cols: &[ZVec], m: usize) -> ColumnEchelon {
    let n = cols.len();
    let mut a: Vec<ZVec> = cols.to_vec();
    let mut u: Vec<ZVec> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut p = 0;
    for r in 0..m {
        if p == n {
            break;
        }
        for j in p + 1..n {
            if a[j][r].is_zero() {
                continue;
            }
            let (x, y) = (a[p][r].clone(), a[j][r].clone());
            let (g, s, t) = ext_gcd(&x, &y);
            let mat = [[s, -(&y / &g)], [t, &x / &g]];
            combine(&mut a, p, j, mat.clone());
            combine(&mut u, p, j, mat);
        }
        if !a[p][r].is_zero() {
            if a[p][r].is_negative() {
                a[p].iter_mut().for_each(|e| *e = -&*e);
                u[p].iter_mut().for_each(|e| *e = -&*e);
            }
            p += 1;
        }
    }
    ColumnEchelon { basis: a[..p].to_vec(), relations: u[p..].to_vec() }
}

/// Saturated basis of `{x in Z^n : rows . x = 0}`.
pub fn integer_kernel(rows: &[ZVec], n: usize) -> Vec<ZVec> {
    let cols: Vec<ZVec> = (0..n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    let mut k = column_echelon(&cols, rows.len()).relations;
    reduce_basis(&mut k);
    k
}

/// A basis (independent vectors) of the integer span of `gens`.
pub fn lattice_basis(gens: &[ZVec], m: usize) -> Vec<ZVec> {
    let mut b = column_echelon(gens, m).basis;
    reduce_basis(&mut b);
    b
}

/// Basis of the saturation of the span of `gens` in `Z^m`.
pub fn saturate(gens: &[ZVec], m: usize) -> Vec<ZVec> {
    let s = smith(gens_as_rows(gens, m).as_slice(), gens.len());
    let r = s.rank();
    let mut out: Vec<ZVec> = (0..r).map(|i| s.p_inv.iter().map(|row| row[i].clone()).collect()).collect();
    reduce_basis(&mut out);
    out
}

fn gens_as_rows(gens: &[ZVec], m: usize) -> Vec<ZVec> {
    (0..m).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect()
}

fn norm2(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

fn normalize_sign(v: &mut [BigInt]) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v.iter_mut().for_each(|e| *e = -&*e);
    }
}

/// Pairwise size reduction; keeps the span and shortens vectors.
pub fn reduce_basis(b: &mut [ZVec]) {
    let k = b.len();
    for _ in 0..100 {
        let mut changed = false;
        for j in 0..k {
            let nj = norm2(&b[j]);
            if nj.is_zero() {
                continue;
            }
            for i in 0..k {
                if i == j {
                    continue;
                }
                let d = dot(&b[i], &b[j]);
                // mu = round(d / nj)
                let two = BigInt::from(2);
                let mu = (&two * &d + &nj).div_floor(&(&two * &nj));
                if mu.is_zero() {
                    continue;
                }
                let cand: ZVec = b[i].iter().zip(&b[j]).map(|(x, y)| x - &mu * y).collect();
                if norm2(&cand) < norm2(&b[i]) {
                    b[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for v in b.iter_mut() {
        normalize_sign(v);
    }
}

/// Smith normal form `P A Q = S` of an `m x n` matrix given by rows.
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub p: Vec<ZVec>,
    pub p_inv: Vec<ZVec>,
    pub q: Vec<ZVec>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|x| !x.is_zero()).count()
    }

    /// Nonzero elementary divisors in divisibility order.
    pub fn divisors(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|x| !x.is_zero()).cloned().collect()
    }
}

fn identity(n: usize) -> Vec<ZVec> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn smith(rows: &[ZVec], n: usize) -> Smith {
    let m = rows.len();
    let mut a = rows.to_vec();
    let mut p = identity(m);
    let mut p_inv = identity(m);
    let mut q = identity(n);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                diag.resize(m.min(n), BigInt::zero());
                return Smith { diag, p, p_inv, q };
            };
            a.swap(t, bi);
            p.swap(t, bi);
            for row in p_inv.iter_mut() {
                row.swap(t, bi);
            }
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
            let piv = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                let f = a[i][t].div_floor(&piv);
                if !f.is_zero() {
                    for j in 0..n {
                        let v = &f * &a[t][j];
                        a[i][j] -= v;
                    }
                    for j in 0..m {
                        let v = &f * &p[t][j];
                        p[i][j] -= v;
                    }
                    for row in p_inv.iter_mut() {
                        let v = &f * &row[i];
                        row[t] += v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                let f = a[t][j].div_floor(&piv);
                if !f.is_zero() {
                    for row in a.iter_mut() {
                        let v = &f * &row[t];
                        row[j] -= v;
                    }
                    for row in q.iter_mut() {
                        let v = &f * &row[t];
                        row[j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&piv)));
            if let Some(i) = bad {
                for j in 0..n {
                    let v = a[i][j].clone();
                    a[t][j] += v;
                }
                for j in 0..m {
                    let v = p[i][j].clone();
                    p[t][j] += v;
                }
                for row in p_inv.iter_mut() {
                    let v = row[t].clone();
                    row[i] -= v;
                }
                continue;
            }
            break;
        }
        if a[t][t].is_negative() {
            a[t].iter_mut().for_each(|e| *e = -&*e);
            p[t].iter_mut().for_each(|e| *e = -&*e);
            for row in p_inv.iter_mut() {
                row[t] = -&row[t];
            }
        }
        diag.push(a[t][t].clone());
    }
    diag.resize(m.min(n), BigInt::zero());
    Smith { diag, p, p_inv, q }
}

/// Determinant by fraction-free elimination.
pub fn det(m: &[ZVec]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduced row echelon form over `Q`; returns the nonzero rows and pivot
/// columns.
pub fn rref(mut rows: Vec<QVec>, n: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, i);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let v = &f * &rows[r][j];
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank_q(rows: &[QVec], n: usize) -> usize {
    rref(rows.to_vec(), n).1.len()
}

/// Basis of the rational null space `{x : rows . x = 0}`.
pub fn nullspace_q(rows: &[QVec], n: usize) -> Vec<QVec> {
    let (r, pivots) = rref(rows.to_vec(), n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction; returns it with the positive factor used.
pub fn primitive_multiple(v: &[BigRational]) -> (ZVec, BigRational) {
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: ZVec = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let c = content(&ints);
    if c.is_zero() {
        return (ints, BigRational::one());
    }
    let out: ZVec = ints.iter().map(|x| x / &c).collect();
    (out, BigRational::new(den, c))
}

/// Rows of a rational matrix rescaled to integers (each row by its own
/// denominator lcm); the integer kernel is unchanged.
pub fn clear_denominators(rows: &[QVec]) -> Vec<ZVec> {
    rows.iter()
        .map(|r| {
            let den = r.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            r.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(rows: &[&[i64]]) -> Vec<ZVec> {
        rows.iter().map(|r| big(r)).collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        let rows = zm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = integer_kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot(&rows[0], v).is_zero());
        }
        // Saturated: the SNF of the kernel basis has unit divisors.
        let s = smith(&gens_as_rows(&k, 3), 2);
        assert!(s.divisors().iter().all(|d| d.is_one()));
    }

    #[test]
    fn smith_of_diagonal_pair() {
        let s = smith(&zm(&[&[2, 0, 0, 0], &[0, 1, 0, 0]]), 4);
        assert_eq!(s.divisors(), vec![BigInt::from(1), BigInt::from(2)]);
        let s = smith(&zm(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        assert_eq!(s.divisors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let a = zm(&[&[3, 5, 7], &[2, -4, 9], &[0, 6, 6], &[1, 1, 1]]);
        let s = smith(&a, 3);
        let m = a.len();
        // P * Pinv = I
        for i in 0..m {
            for j in 0..m {
                let v: BigInt = (0..m).map(|k| &s.p[i][k] * &s.p_inv[k][j]).sum();
                assert_eq!(v, if i == j { BigInt::one() } else { BigInt::zero() });
            }
        }
        // P A Q is diagonal with the reported entries
        for i in 0..m {
            for j in 0..3 {
                let v: BigInt = (0..m)
                    .flat_map(|k| (0..3).map(move |l| (k, l)))
                    .map(|(k, l)| &s.p[i][k] * &a[k][l] * &s.q[l][j])
                    .sum();
                let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(v, expect);
            }
        }
    }

    #[test]
    fn saturation_example() {
        let gens = zm(&[&[2, 0, 0, 2], &[2, 0, 0, -2]]);
        let sat = saturate(&gens, 4);
        let mut got: Vec<Vec<i64>> = sat.iter().map(|v| small(v).unwrap()).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 0, 0, 1], vec![1, 0, 0, 0]]);
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&zm(&[&[0, 1], &[-1, 0]])), BigInt::from(1));
        assert_eq!(det(&zm(&[&[2, 3, 1], &[4, 1, 0], &[0, 5, 3]])), BigInt::from(-10));
        assert_eq!(det(&zm(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn ext_gcd_vector() {
        let c = big(&[6, 10, 15]);
        let (g, x) = ext_gcd_vec(&c);
        assert_eq!(g, BigInt::one());
        assert_eq!(dot(&c, &x), BigInt::one());
        let (_, x) = ext_gcd_vec(&big(&[4, -1, 7]));
        assert_eq!(x, big(&[0, -1, 0]));
    }
}
