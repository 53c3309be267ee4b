//! The branched cover as a polygonal complex and its integer periods.
//!
//! The base torus is the square `[0, N]^2`, `N = 2(n + 1)`, with puncture
//! `k` (0-based, left to right) at `(2k + 1, N/2)` and a vertical slit from
//! it to the top edge. Cut along its sides and the slits the torus is one
//! disk; the cover is `d` copies of it. Each edge of the disk is labelled
//! by the sheet on its negative side (below a horizontal edge, left of a
//! vertical one) and crossing it in the positive direction applies
//!
//! * `V_j` through top segment `j`, with `V_0 = sigma_v` and
//!   `V_{k+1} = S_k^-1 V_k`,
//! * `sigma_h` through the right side,
//! * `S_k = tau_{n-k}` across slit `k`, left to right.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{cover_genus, MonodromyDatum, Perm};
use crate::error::HurwitzError;
use crate::intmat;
use crate::symplattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum EdgeKind {
    /// Top segment `j` of a sheet.
    Horizontal(usize),
    /// Right side of a sheet.
    Side,
    /// Left side of slit `k`.
    Slit(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub sheet: usize,
    /// Displacement `(dx, dy)` in units of `1/N`.
    pub displacement: (i64, i64),
}

/// Darts are `2 e` (along edge `e`) and `2 e + 1` (against it).
type Dart = usize;

fn rev(d: Dart) -> Dart {
    d ^ 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverComplex {
    pub d: usize,
    pub n: usize,
    pub scale: i64,
    pub edges: Vec<Edge>,
    /// Counterclockwise boundary walk of each sheet.
    pub faces: Vec<Vec<Dart>>,
    /// Vertex of the tail and head of every edge.
    endpoints: Vec<[usize; 2]>,
    num_vertices: usize,
    #[serde(skip)]
    next_ccw: Vec<Dart>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn build_cover(md: &MonodromyDatum) -> Result<CoverComplex, HurwitzError> {
    md.validate()?;
    cover_genus(md)?;
    Ok(build_unchecked(md))
}

fn build_unchecked(md: &MonodromyDatum) -> CoverComplex {
    let (d, n) = (md.d, md.n());
    let scale = 2 * (n as i64 + 1);
    let kinds = 2 * n + 2;
    let edge = |kind: usize, s: usize| kind * d + s;
    let h = |j: usize| j;
    let side = n + 1;
    let slit = |k: usize| n + 2 + k;

    let s_perm: Vec<&Perm> = (0..n).map(|k| &md.taus[n - 1 - k]).collect();
    let mut v_perm = vec![md.sigma_v.clone()];
    for k in 0..n {
        let next = s_perm[k].inverse().then(&v_perm[k]);
        v_perm.push(next);
    }
    let v_inv: Vec<Perm> = v_perm.iter().map(|p| p.inverse()).collect();
    let s_inv: Vec<Perm> = s_perm.iter().map(|p| p.inverse()).collect();
    let h_inv = md.sigma_h.inverse();

    let mut bounds = vec![0i64];
    bounds.extend((0..n as i64).map(|k| 2 * k + 1));
    bounds.push(scale);
    let mut edges = Vec::with_capacity(kinds * d);
    for kind in 0..kinds {
        for s in 0..d {
            let (k, disp) = if kind <= n {
                (EdgeKind::Horizontal(kind), (bounds[kind + 1] - bounds[kind], 0))
            } else if kind == side {
                (EdgeKind::Side, (0, scale))
            } else {
                (EdgeKind::Slit(kind - n - 2), (0, scale / 2))
            };
            edges.push(Edge { kind: k, sheet: s, displacement: disp });
        }
    }
    let fwd = |e: usize| 2 * e;
    let bwd = |e: usize| 2 * e + 1;
    let mut faces = Vec::with_capacity(d);
    for s in 0..d {
        let mut w = Vec::with_capacity(3 * n + 4);
        for j in 0..=n {
            w.push(fwd(edge(h(j), v_inv[j].apply(s))));
        }
        w.push(fwd(edge(side, s)));
        w.push(bwd(edge(h(n), s)));
        for k in (0..n).rev() {
            w.push(bwd(edge(slit(k), s_inv[k].apply(s))));
            w.push(fwd(edge(slit(k), s)));
            w.push(bwd(edge(h(k), s)));
        }
        w.push(bwd(edge(side, h_inv.apply(s))));
        faces.push(w);
    }

    // Endpoint 2e is the tail of e, 2e + 1 its head; the tail of dart x is
    // endpoint x and its head endpoint x ^ 1.
    let mut parent: Vec<usize> = (0..2 * edges.len()).collect();
    let mut next_ccw = vec![usize::MAX; 2 * edges.len()];
    for w in &faces {
        for i in 0..w.len() {
            let (a, b) = (w[i], w[(i + 1) % w.len()]);
            let ra = find(&mut parent, rev(a));
            let rb = find(&mut parent, b);
            parent[ra] = rb;
            next_ccw[b] = rev(a);
        }
    }
    let mut ids = vec![usize::MAX; parent.len()];
    let mut num_vertices = 0;
    let mut endpoints = Vec::with_capacity(edges.len());
    for e in 0..edges.len() {
        let mut pair = [0; 2];
        for (t, slot) in pair.iter_mut().enumerate() {
            let r = find(&mut parent, 2 * e + t);
            if ids[r] == usize::MAX {
                ids[r] = num_vertices;
                num_vertices += 1;
            }
            *slot = ids[r];
        }
        endpoints.push(pair);
    }
    CoverComplex { d, n, scale, edges, faces, endpoints, num_vertices, next_ccw }
}

/// A closed walk and its edge coefficients.
#[derive(Clone, Debug)]
struct Cycle {
    walk: Vec<Dart>,
    coef: Vec<i64>,
}

impl CoverComplex {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    fn tail(&self, x: Dart) -> usize {
        self.endpoints[x / 2][x % 2]
    }

    fn head(&self, x: Dart) -> usize {
        self.endpoints[x / 2][1 - x % 2]
    }

    /// Every edge bounds one face on each side.
    fn check_closed(&self) -> Result<(), HurwitzError> {
        let mut count = vec![0u8; 2 * self.edges.len()];
        for w in &self.faces {
            for &x in w {
                count[x] += 1;
            }
        }
        if count.iter().any(|&c| c != 1) || self.next_ccw.contains(&usize::MAX) {
            return Err(HurwitzError::Invariant("the cover complex is not a closed surface".into()));
        }
        Ok(())
    }

    /// Tree-cotree generators of `H_1`.
    fn homology_generators(&self) -> Vec<Cycle> {
        let ne = self.edges.len();
        let mut in_tree = vec![false; ne];
        // Dart from each vertex towards the root.
        let mut up: Vec<Option<Dart>> = vec![None; self.num_vertices];
        let mut depth = vec![usize::MAX; self.num_vertices];
        let mut adj: Vec<Vec<Dart>> = vec![Vec::new(); self.num_vertices];
        for x in 0..2 * ne {
            adj[self.tail(x)].push(x);
        }
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &x in &adj[u] {
                let v = self.head(x);
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    up[v] = Some(rev(x));
                    in_tree[x / 2] = true;
                    queue.push_back(v);
                }
            }
        }
        let mut side_of = vec![[usize::MAX; 2]; ne];
        for (f, w) in self.faces.iter().enumerate() {
            for &x in w {
                side_of[x / 2][x % 2] = f;
            }
        }
        let mut in_cotree = vec![false; ne];
        let mut seen = vec![false; self.faces.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(f) = queue.pop_front() {
            for &x in &self.faces[f] {
                let e = x / 2;
                if in_tree[e] {
                    continue;
                }
                let g = side_of[e][1 - x % 2];
                if !seen[g] {
                    seen[g] = true;
                    in_cotree[e] = true;
                    queue.push_back(g);
                }
            }
        }
        let root_path = |mut v: usize| {
            let mut p = Vec::new();
            while let Some(x) = up[v] {
                p.push(x);
                v = self.head(x);
            }
            p
        };
        let mut out = Vec::new();
        for e in 0..ne {
            if in_tree[e] || in_cotree[e] {
                continue;
            }
            let (u, v) = (self.tail(2 * e), self.head(2 * e));
            let mut pv = root_path(v);
            let mut pu = root_path(u);
            while let (Some(a), Some(b)) = (pv.last(), pu.last()) {
                if a != b {
                    break;
                }
                pv.pop();
                pu.pop();
            }
            let mut walk = vec![2 * e];
            walk.extend(&pv);
            walk.extend(pu.iter().rev().map(|&x| rev(x)));
            let mut coef = vec![0i64; ne];
            for &x in &walk {
                coef[x / 2] += if x % 2 == 0 { 1 } else { -1 };
            }
            out.push(Cycle { walk, coef });
        }
        out
    }

    /// Algebraic intersection of the cycle `a` with the closed walk `b`:
    /// `b` is pushed to its left and the flux of `a` through it counted.
    fn intersection(&self, a: &[i64], b: &[Dart]) -> i64 {
        let mut s = 0;
        for k in 0..b.len() {
            let d_in = b[k];
            let d_out = b[(k + 1) % b.len()];
            let mut x = self.next_ccw[d_out];
            while x != rev(d_in) {
                let c = a[x / 2];
                s += if x.is_multiple_of(2) { -c } else { c };
                x = self.next_ccw[x];
            }
        }
        s
    }

    fn period(&self, coef: &[i64]) -> (i64, i64) {
        coef.iter().zip(&self.edges).fold((0, 0), |(x, y), (&c, e)| (x + c * e.displacement.0, y + c * e.displacement.1))
    }
}

/// `alpha + i beta` are the periods of the pull-back of `dz` on a
/// symplectic basis of `H_1` of the cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverPeriods {
    pub genus: usize,
    #[serde(serialize_with = "crate::ser::intvec")]
    pub alpha: Vec<i64>,
    #[serde(serialize_with = "crate::ser::intvec")]
    pub beta: Vec<i64>,
    /// Edge coefficients of the symplectic basis cycles.
    #[serde(skip)]
    pub basis: Vec<Vec<i64>>,
}

pub fn cover_period(cc: &CoverComplex) -> Result<CoverPeriods, HurwitzError> {
    cc.check_closed()?;
    let chi = cc.euler_characteristic();
    if chi != -(cc.n as i64) {
        return Err(HurwitzError::Invariant(format!("Euler characteristic {chi}, expected -{}", cc.n)));
    }
    let genus = cc.n / 2 + 1;
    let gens = cc.homology_generators();
    if gens.len() != 2 * genus {
        return Err(HurwitzError::Invariant(format!("{} homology generators for genus {genus}", gens.len())));
    }
    let k = gens.len();
    let gram: Vec<Vec<BigInt>> =
        gens.iter().map(|a| gens.iter().map(|b| BigInt::from(cc.intersection(&a.coef, &b.walk))).collect()).collect();
    for i in 0..k {
        for j in 0..k {
            if gram[i][j] != -&gram[j][i] {
                return Err(HurwitzError::Invariant("intersection form is not alternating".into()));
            }
        }
    }
    let det = intmat::det(&gram);
    if det != BigInt::from(1) {
        return Err(HurwitzError::Invariant(format!("intersection form has determinant {det}")));
    }
    let unit: Vec<Vec<BigInt>> = (0..k).map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let sb = symplattice::symplectic_basis_gram(&gram, &unit, None)?;
    let ne = cc.edges.len();
    let mut alpha = Vec::with_capacity(k);
    let mut beta = Vec::with_capacity(k);
    let mut basis = Vec::with_capacity(k);
    for v in &sb {
        let v = intmat::small(v)?;
        let mut coef = vec![0i64; ne];
        for (c, g) in v.iter().zip(&gens) {
            for (x, y) in coef.iter_mut().zip(&g.coef) {
                *x += c * y;
            }
        }
        let (re, im) = cc.period(&coef);
        if re % cc.scale != 0 || im % cc.scale != 0 {
            return Err(HurwitzError::Invariant(format!("period ({re}, {im}) is not a multiple of {}", cc.scale)));
        }
        alpha.push(re / cc.scale);
        beta.push(im / cc.scale);
        basis.push(coef);
    }
    let w = symplattice::omega_i64(&alpha, &beta);
    if w <= 0 {
        return Err(HurwitzError::NonPositivePairing(w));
    }
    if w != cc.d as i64 {
        return Err(HurwitzError::Invariant(format!("omega(alpha, beta) = {w}, expected degree {}", cc.d)));
    }
    if gram.iter().flatten().all(|x| x.is_zero()) {
        return Err(HurwitzError::Invariant("zero intersection form".into()));
    }
    Ok(CoverPeriods { genus, alpha, beta, basis })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{basic_d2, t};
    use super::*;

    #[test]
    fn torus_intersection_sign() {
        let md = MonodromyDatum::new(Perm::identity(1), Perm::identity(1), vec![]).unwrap();
        let cc = build_unchecked(&md);
        assert_eq!((cc.num_vertices(), cc.num_edges(), cc.num_faces()), (1, 2, 1));
        // Edge 0 is the horizontal side, edge 1 the vertical one.
        assert_eq!(cc.intersection(&[1, 0], &[2]), 1);
        assert_eq!(cc.intersection(&[0, 1], &[0]), -1);
        let p = cover_period(&cc).unwrap();
        assert_eq!(symplattice::omega_i64(&p.alpha, &p.beta), 1);
    }

    #[test]
    fn counts_match_riemann_hurwitz() {
        let md = basic_d2();
        let cc = build_cover(&md).unwrap();
        let (d, n) = (2, 2);
        assert_eq!(cc.num_vertices(), d + d * n + n * (d - 1));
        assert_eq!(cc.num_edges(), d * (2 * n + 2));
        assert_eq!(cc.euler_characteristic(), -2);
        let p = cover_period(&cc).unwrap();
        assert_eq!(p.genus, 2);
        assert_eq!(symplattice::omega_i64(&p.alpha, &p.beta), 2);
    }

    #[test]
    fn degree_three_example() {
        let h = Perm::from_one_based(&[2, 3, 1]).unwrap();
        let md = MonodromyDatum::new(h, Perm::identity(3), vec![t(3, 1, 2), t(3, 1, 2)]).unwrap();
        let p = cover_period(&build_cover(&md).unwrap()).unwrap();
        assert_eq!(p.genus, 2);
        assert_eq!(symplattice::omega_i64(&p.alpha, &p.beta), 3);
    }

    #[test]
    fn unbranched_cover() {
        let h = Perm::from_one_based(&[2, 3, 1]).unwrap();
        let md = MonodromyDatum::new(h, Perm::identity(3), vec![]).unwrap();
        let p = cover_period(&build_cover(&md).unwrap()).unwrap();
        assert_eq!(p.genus, 1);
        assert_eq!(symplattice::omega_i64(&p.alpha, &p.beta), 3);
    }

    #[test]
    fn invalid_datum_rejected() {
        let mut md = basic_d2();
        md.taus[0] = Perm::identity(2);
        assert!(build_cover(&md).is_err());
    }
}
