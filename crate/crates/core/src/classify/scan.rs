//! Exhaustive boundary-membership scan over rank-2 symplectic sublattices
//! spanned by short vectors, in exact machine-integer arithmetic.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{ClassifyError, LatticeError};
use crate::periods::PeriodCharacter;
use crate::symplattice::omega_i64;

/// Largest box `(2N + 1)^{2g}` the scan accepts.
pub const MAX_SCAN_VECTORS: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryScan {
    pub bound: i64,
    /// Pairs `(u, v)` with `omega(u, v) = 1`, `u` sign-normalized.
    pub pairs: u64,
    /// Pairs rejected because `vol(V)` is not strictly between 0 and
    /// `vol(p)`.
    pub volume_filtered: u64,
    /// Distinct planes that reached the Haupt test on `V^perp`.
    pub planes_checked: u64,
    /// Symplectic bases `(u, v)` of the members found.
    pub members: Vec<[Vec<i64>; 2]>,
}

/// `A + B sqrt(D)` with integer `A`, `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Quad {
    a: i128,
    b: i128,
}

impl Quad {
    fn sub(self, o: Quad) -> Quad {
        Quad { a: self.a - o.a, b: self.b - o.b }
    }

    fn signum(self, d: i128) -> i128 {
        let (sa, sb) = (self.a.signum(), self.b.signum());
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        let (a2, b2d) = (self.a * self.a, self.b * self.b * d);
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }
}

type V4 = [i128; 4];

/// `Re x Im y - Im x Re y` for `(re.rat, re.irr, im.rat, im.irr)`.
fn cross(x: &V4, y: &V4, d: i128) -> Quad {
    Quad {
        a: x[0] * y[2] + d * x[1] * y[3] - x[2] * y[0] - d * x[3] * y[1],
        b: x[0] * y[3] + x[1] * y[2] - x[2] * y[1] - x[3] * y[0],
    }
}

fn wedge(x: &V4, y: &V4) -> [i128; 6] {
    let mut w = [0; 6];
    let mut k = 0;
    for s in 0..4 {
        for t in s + 1..4 {
            w[k] = x[s] * y[t] - x[t] * y[s];
            k += 1;
        }
    }
    w
}

fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

fn rank4(vs: &[V4]) -> usize {
    let mut rows: Vec<V4> = vs.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
    let mut rank = 0;
    for col in 0..4 {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, p);
        let piv = rows[rank];
        for r in rows.iter_mut().skip(rank + 1) {
            if r[col] != 0 {
                let (m, n) = (piv[col], r[col]);
                for k in 0..4 {
                    r[k] = r[k] * m - piv[k] * n;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `p` restricted to a genus `>= 2` module with image generated by
/// `t` and volume `vol` is Haupt: it fails iff the image is a lattice of
/// covolume `vol`.
fn complement_haupt(t: &[V4], vol: Quad, d: i128) -> bool {
    let zrank = rank4(t);
    if zrank != 2 {
        return true;
    }
    let mut first: Option<[i128; 6]> = None;
    let mut content = 0;
    for (i, x) in t.iter().enumerate() {
        for y in &t[i + 1..] {
            let w = wedge(x, y);
            if first.is_none() && w.iter().any(|&v| v != 0) {
                first = Some(w);
            }
            for v in w {
                if content == 1 {
                    break;
                }
                if v != 0 {
                    content = gcd(content, v);
                }
            }
        }
    }
    // Real span one-dimensional: not discrete.
    let Some(w) = first else { return true };
    let c0 = w.iter().fold(0, |g, &v| gcd(g, v));
    let b = w.map(|v| v / c0 * content);
    // (01, 02, 03, 12, 13, 23); cross(E_s, E_t) is 1 on 02, sqrt D on 03
    // and 12, D on 13.
    let mut cov = Quad { a: b[1] + d * b[4], b: b[2] + b[3] };
    if cov.signum(d) == 0 {
        return true;
    }
    if cov.signum(d) < 0 {
        cov = Quad { a: -cov.a, b: -cov.b };
    }
    cov != vol
}

fn to_i128(x: &BigInt) -> Result<i128, ClassifyError> {
    x.to_i128().filter(|v| v.abs() < 1 << 40).ok_or(ClassifyError::Lattice(LatticeError::Overflow))
}

/// Runs [`super::boundary_membership`] on every rank-2 symplectic `V`
/// spanned by vectors with entries in `{-N..N}`. Only `V` with
/// `0 < vol(V) < vol(p)` can be members; the rest are counted and skipped.
pub fn boundary_scan(p: &PeriodCharacter, bound: i64) -> Result<BoundaryScan, ClassifyError> {
    let g = p.genus();
    if g < 2 {
        return Err(ClassifyError::GenusTooSmall(g));
    }
    if !p.is_haupt()?.haupt {
        return Err(ClassifyError::NotHaupt);
    }
    let n = 2 * g;
    let side = (2 * bound + 1).max(1) as u64;
    let total = side.checked_pow(n as u32).filter(|&t| t <= MAX_SCAN_VECTORS).ok_or(ClassifyError::SearchTooLarge {
        max: MAX_SCAN_VECTORS,
    })?;
    let d = p.field().radicand().unwrap_or(1) as i128;
    let comps = p.components();
    let den = comps.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut cols: Vec<V4> = Vec::with_capacity(n);
    for c in &comps {
        let mut v = [0i128; 4];
        for k in 0..4 {
            let s = (&c[k] * num_rational::BigRational::from_integer(den.clone())).to_integer();
            v[k] = to_i128(&s)?;
        }
        cols.push(v);
    }
    let image = |x: &[i64]| -> V4 {
        let mut r = [0i128; 4];
        for (j, &c) in x.iter().enumerate() {
            if c != 0 {
                for k in 0..4 {
                    r[k] += c as i128 * cols[j][k];
                }
            }
        }
        r
    };
    let vol_p = (0..g).fold(Quad { a: 0, b: 0 }, |acc, k| {
        let c = cross(&cols[2 * k], &cols[2 * k + 1], d);
        Quad { a: acc.a + c.a, b: acc.b + c.b }
    });

    let vecs: Vec<Vec<i64>> = (0..total)
        .map(|k| {
            let mut x = k;
            (0..n)
                .map(|_| {
                    let c = (x % side) as i64 - bound;
                    x /= side;
                    c
                })
                .collect()
        })
        .collect();
    let images: Vec<V4> = vecs.iter().map(|v| image(v)).collect();
    // Vector k splits as lo + half * hi over the first and last g coordinates.
    let half = side.pow(g as u32) as usize;
    let halves = &vecs[..half];

    let mut scan = BoundaryScan { bound, pairs: 0, volume_filtered: 0, planes_checked: 0, members: Vec::new() };
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut hi: Vec<(i64, usize)> = Vec::with_capacity(half);
    for (i, u) in vecs.iter().enumerate() {
        if u.iter().find(|&&c| c != 0).is_none_or(|&c| c < 0) {
            continue;
        }
        // J u, so that omega(u, v) = <J u, v>.
        let ju: Vec<i64> = (0..n).map(|j| if j % 2 == 0 { -u[j + 1] } else { u[j - 1] }).collect();
        let dot = |w: &[i64], off: usize| -> i64 { w[..g].iter().zip(&ju[off..off + g]).map(|(a, b)| a * b).sum() };
        hi.clear();
        hi.extend(halves.iter().enumerate().map(|(m, w)| (dot(w, g), m)));
        hi.sort_unstable();
        for (l, w) in halves.iter().enumerate() {
            let target = 1 - dot(w, 0);
            let start = hi.partition_point(|&(x, _)| x < target);
            for &(x, m) in &hi[start..] {
                if x != target {
                    break;
                }
                let j = l + half * m;
                let v = &vecs[j];
                scan.pairs += 1;
                let vol_v = cross(&images[i], &images[j], d);
                let vol_c = vol_p.sub(vol_v);
                if vol_v.signum(d) <= 0 || vol_c.signum(d) <= 0 {
                    scan.volume_filtered += 1;
                    continue;
                }
                let mut pl = Vec::with_capacity(n * (n - 1) / 2);
                for s in 0..n {
                    for t in s + 1..n {
                        pl.push(u[s] * v[t] - u[t] * v[s]);
                    }
                }
                if !seen.insert(pl) {
                    continue;
                }
                scan.planes_checked += 1;
                let member = g == 2 || {
                    let t: Vec<V4> = (0..n)
                        .map(|k| {
                            let e: Vec<i64> = (0..n).map(|m| (m == k) as i64).collect();
                            let (ov, ou) = (omega_i64(&e, v) as i128, omega_i64(&e, u) as i128);
                            let mut r = cols[k];
                            for q in 0..4 {
                                r[q] += -ov * images[i][q] + ou * images[j][q];
                            }
                            r
                        })
                        .collect();
                    complement_haupt(&t, vol_c, d)
                };
                if member {
                    scan.members.push([u.clone(), v.to_vec()]);
                }
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::boundary_membership;
    use crate::periods::tests::non_compact;
    use crate::symplattice::Sublattice;

    #[test]
    fn agrees_with_membership() {
        let p = PeriodCharacter::from_ints(3, &[(1, 0), (0, 1), (1, 0), (0, 2), (1, 0), (0, 3)]).unwrap();
        let scan = boundary_scan(&p, 1).unwrap();
        assert!(scan.planes_checked > 0);
        assert!(!scan.members.is_empty());
        for [u, v] in scan.members.iter().take(50) {
            let s = Sublattice::new(3, vec![u.clone(), v.clone()]).unwrap();
            assert!(boundary_membership(&p, &s).unwrap());
        }
        let sp = crate::symplattice::SymplecticSpace::new(3);
        for (u, v) in [(sp.a(1), sp.b(1)), (sp.a(2), sp.b(2)), (sp.a(3), sp.b(3))] {
            let s = Sublattice::new(3, vec![u.clone(), v.clone()]).unwrap();
            let m = boundary_membership(&p, &s).unwrap();
            let listed = scan.members.iter().any(|[x, y]| Sublattice::new(3, vec![x.clone(), y.clone()]).unwrap().same_span(&s));
            assert_eq!(m, listed);
        }
    }

    #[test]
    fn non_compact_small_box() {
        let scan = boundary_scan(&non_compact(3), 1).unwrap();
        assert!(scan.members.is_empty());
        assert!(scan.planes_checked > 0);
    }

    #[test]
    fn limits() {
        assert!(matches!(boundary_scan(&non_compact(3), 5), Err(ClassifyError::SearchTooLarge { .. })));
        let bad = PeriodCharacter::from_ints(2, &[(1, 0), (0, 1), (0, 0), (0, 0)]).unwrap();
        assert_eq!(boundary_scan(&bad, 1), Err(ClassifyError::NotHaupt));
    }

    #[test]
    fn exhaustive_genus_two() {
        let p = crate::periods::tests::hilbert_plane(2);
        let scan = boundary_scan(&p, 1).unwrap();
        let box1: Vec<Vec<i64>> = (0..81)
            .map(|k: i64| (0..4).map(|j| (k / 3i64.pow(j)) % 3 - 1).collect())
            .filter(|v: &Vec<i64>| v.iter().any(|&c| c != 0))
            .collect();
        let mut planes: Vec<Sublattice> = Vec::new();
        for u in &box1 {
            for v in &box1 {
                if crate::symplattice::omega(u, v).unwrap() == 1 {
                    let s = Sublattice::new(2, vec![u.clone(), v.clone()]).unwrap();
                    if !planes.iter().any(|t| t.same_span(&s)) {
                        planes.push(s);
                    }
                }
            }
        }
        let mut members = 0;
        for s in &planes {
            let m = boundary_membership(&p, s).unwrap();
            let listed = scan.members.iter().any(|[x, y]| Sublattice::new(2, vec![x.clone(), y.clone()]).unwrap().same_span(s));
            assert_eq!(m, listed);
            members += m as usize;
        }
        assert_eq!(members, scan.members.len());
        assert!(members > 0);
    }
}
