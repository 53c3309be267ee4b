//! Monodromy data of degree-`d` torus covers with `n = 2g - 2` simple branch
//! points, the covers they define and the braid-group action on them.
//!
//! Permutations act on the right: `p.then(q)` applies `p` first. The
//! punctured-torus group is `<x, y, c_1..c_n | [x, y] = c_1 ... c_n>` with
//! `[x, y] = x y x^-1 y^-1` read left to right, `x -> sigma_h`,
//! `y -> sigma_v` and `c_i -> tau_i`.
//!
//! Loop conventions for the braid generators:
//!
//! * `hurwitz_move(i)` swaps punctures `i` and `i + 1`:
//!   `(tau_i, tau_{i+1}) -> (tau_i tau_{i+1} tau_i^-1, tau_i)`.
//! * `point_push(n, A)` drags the last puncture once around the vertical
//!   direction: `sigma_v -> tau_n sigma_v`,
//!   `tau_n -> Q^-1 sigma_h tau_n sigma_h^-1 Q` with `Q = tau_1 ... tau_{n-1}`.
//! * `point_push(1, B)` drags the first puncture around the horizontal
//!   direction: `sigma_h -> tau_1^-1 sigma_h`,
//!   `tau_1 -> R sigma_v tau_1 sigma_v^-1 R^-1` with `R = tau_2 ... tau_n`.
//! * Other strands are first carried to the end (for `A`) or the front (for
//!   `B`) by Hurwitz moves, pushed, and carried back.
//!
//! ```text
//!        sigma_v
//!     +-----^-----+
//!     |  |  |  |  |      slits run from each puncture up to the top edge;
//!     |  *  *  *  |----> sigma_h
//!     |           |      c_i circles puncture n - i + 1 (right to left)
//!     +-----------+
//! ```

mod cover;
mod orbits;

pub use cover::{build_cover, cover_period, CoverComplex, CoverPeriods, EdgeKind};
pub use orbits::{enumerate_orbits, pair_signature, Enumeration, OrbitReport, PairSignature};

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::HurwitzError;

pub const MAX_CANONICAL_DEGREE: usize = 6;

/// A permutation of `0..d` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self, HurwitzError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(HurwitzError::BadPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// From 1-based one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self, HurwitzError> {
        if images.contains(&0) {
            return Err(HurwitzError::BadPermutation(images.to_vec()));
        }
        Perm::new(images.iter().map(|x| x - 1).collect())
            .map_err(|_| HurwitzError::BadPermutation(images.to_vec()))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    /// The transposition of `i` and `j` (0-based).
    pub fn transposition(d: usize, i: usize, j: usize) -> Self {
        let mut p = Perm::identity(d);
        p.0.swap(i, j);
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut out = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x] = i;
        }
        Perm(out)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Self {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    /// `pi^-1 self pi`: the same permutation after relabelling `x -> pi(x)`.
    pub fn conj(&self, pi: &Perm) -> Self {
        let mut out = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            out[pi.0[x]] = pi.0[y];
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// The moved pair when `self` is a transposition.
    pub fn as_transposition(&self) -> Option<(usize, usize)> {
        let moved: Vec<usize> = (0..self.0.len()).filter(|&i| self.0[i] != i).collect();
        match moved.as_slice() {
            &[i, j] => Some((i, j)),
            _ => None,
        }
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// All permutations of `0..d` in lexicographic order.
    pub fn all(d: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..d).collect();
        loop {
            out.push(Perm(cur.clone()));
            let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_one_based().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn product<'a>(d: usize, ps: impl IntoIterator<Item = &'a Perm>) -> Perm {
    ps.into_iter().fold(Perm::identity(d), |acc, p| acc.then(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PushDirection {
    A,
    B,
}

/// Monodromy `(sigma_h, sigma_v, tau_1, ..., tau_n)` of a degree-`d` cover.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonodromyDatum {
    pub d: usize,
    pub sigma_h: Perm,
    pub sigma_v: Perm,
    pub taus: Vec<Perm>,
}

/// JSON form with 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyJson {
    pub d: usize,
    pub taus: Vec<[usize; 2]>,
    pub sigma_h: Vec<usize>,
    pub sigma_v: Vec<usize>,
}

impl MonodromyDatum {
    pub fn new(sigma_h: Perm, sigma_v: Perm, taus: Vec<Perm>) -> Result<Self, HurwitzError> {
        let d = sigma_h.degree();
        for p in std::iter::once(&sigma_v).chain(&taus) {
            if p.degree() != d {
                return Err(HurwitzError::DegreeMismatch { expected: d, found: p.degree() });
            }
        }
        Ok(MonodromyDatum { d, sigma_h, sigma_v, taus })
    }

    pub fn n(&self) -> usize {
        self.taus.len()
    }

    pub fn from_json(j: &MonodromyJson) -> Result<Self, HurwitzError> {
        let sigma_h = Perm::from_one_based(&j.sigma_h)?;
        let sigma_v = Perm::from_one_based(&j.sigma_v)?;
        if sigma_h.degree() != j.d {
            return Err(HurwitzError::DegreeMismatch { expected: j.d, found: sigma_h.degree() });
        }
        let mut taus = Vec::with_capacity(j.taus.len());
        for (k, &[a, b]) in j.taus.iter().enumerate() {
            if a == 0 || b == 0 || a > j.d || b > j.d {
                return Err(HurwitzError::IndexOutOfRange { index: a.max(b), max: j.d });
            }
            if a == b {
                return Err(HurwitzError::NotTransposition { index: k + 1 });
            }
            taus.push(Perm::transposition(j.d, a - 1, b - 1));
        }
        MonodromyDatum::new(sigma_h, sigma_v, taus)
    }

    /// JSON form; each tau must be a transposition.
    pub fn to_json(&self) -> MonodromyJson {
        MonodromyJson {
            d: self.d,
            taus: self
                .taus
                .iter()
                .map(|t| t.as_transposition().map_or([0, 0], |(i, j)| [i + 1, j + 1]))
                .collect(),
            sigma_h: self.sigma_h.to_one_based(),
            sigma_v: self.sigma_v.to_one_based(),
        }
    }

    pub fn commutator(&self) -> Perm {
        let (h, v) = (&self.sigma_h, &self.sigma_v);
        h.then(v).then(&h.inverse()).then(&v.inverse())
    }

    pub fn tau_product(&self) -> Perm {
        product(self.d, &self.taus)
    }

    /// Checks transpositions, the relation and transitivity.
    pub fn validate(&self) -> Result<(), HurwitzError> {
        for (k, t) in self.taus.iter().enumerate() {
            if t.degree() != self.d {
                return Err(HurwitzError::DegreeMismatch { expected: self.d, found: t.degree() });
            }
            if t.as_transposition().is_none() {
                return Err(HurwitzError::NotTransposition { index: k + 1 });
            }
        }
        if self.commutator() != self.tau_product() {
            return Err(HurwitzError::RelationFails);
        }
        let gens: Vec<&Perm> = [&self.sigma_h, &self.sigma_v].into_iter().chain(&self.taus).collect();
        let mut seen = vec![false; self.d];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                for y in [g.apply(x), g.inverse().apply(x)] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            let orbit = (0..self.d).filter(|&x| seen[x]).map(|x| x + 1).collect();
            return Err(HurwitzError::NotTransitive { orbit });
        }
        Ok(())
    }

    /// Simultaneous relabelling by `pi`.
    pub fn conjugate(&self, pi: &Perm) -> Self {
        MonodromyDatum {
            d: self.d,
            sigma_h: self.sigma_h.conj(pi),
            sigma_v: self.sigma_v.conj(pi),
            taus: self.taus.iter().map(|t| t.conj(pi)).collect(),
        }
    }

    fn check_index(&self, i: usize, max: usize) -> Result<(), HurwitzError> {
        if i == 0 || i > max {
            Err(HurwitzError::IndexOutOfRange { index: i, max })
        } else {
            Ok(())
        }
    }

    /// `(tau_i, tau_{i+1}) -> (tau_i tau_{i+1} tau_i^-1, tau_i)`, 1-based.
    pub fn hurwitz_move(&self, i: usize) -> Result<Self, HurwitzError> {
        self.check_index(i, self.n().saturating_sub(1))?;
        let mut out = self.clone();
        let (c, e) = (&self.taus[i - 1], &self.taus[i]);
        out.taus[i - 1] = c.then(e).then(&c.inverse());
        out.taus[i] = c.clone();
        Ok(out)
    }

    /// Inverse of [`MonodromyDatum::hurwitz_move`]:
    /// `(c, e) -> (e, e^-1 c e)`.
    pub fn hurwitz_move_inv(&self, i: usize) -> Result<Self, HurwitzError> {
        self.check_index(i, self.n().saturating_sub(1))?;
        let mut out = self.clone();
        let (c, e) = (&self.taus[i - 1], &self.taus[i]);
        out.taus[i - 1] = e.clone();
        out.taus[i] = e.inverse().then(c).then(e);
        Ok(out)
    }

    fn push_last(&self) -> Self {
        let n = self.n();
        let q = product(self.d, &self.taus[..n - 1]);
        let h = &self.sigma_h;
        let t = &self.taus[n - 1];
        let mut out = self.clone();
        out.sigma_v = t.then(&self.sigma_v);
        out.taus[n - 1] = q.inverse().then(h).then(t).then(&h.inverse()).then(&q);
        out
    }

    fn push_first(&self) -> Self {
        let r = product(self.d, &self.taus[1..]);
        let v = &self.sigma_v;
        let t = &self.taus[0];
        let mut out = self.clone();
        out.sigma_h = t.inverse().then(&self.sigma_h);
        out.taus[0] = r.then(v).then(t).then(&v.inverse()).then(&r.inverse());
        out
    }

    /// Pushes puncture `i` (1-based) around the vertical (`A`) or
    /// horizontal (`B`) direction of the torus.
    pub fn point_push(&self, i: usize, dir: PushDirection) -> Result<Self, HurwitzError> {
        let n = self.n();
        self.check_index(i, n)?;
        let mut cur = self.clone();
        match dir {
            PushDirection::A => {
                for j in i..n {
                    cur = cur.hurwitz_move(j)?;
                }
                cur = cur.push_last();
                for j in (i..n).rev() {
                    cur = cur.hurwitz_move_inv(j)?;
                }
            }
            PushDirection::B => {
                for j in (1..i).rev() {
                    cur = cur.hurwitz_move_inv(j)?;
                }
                cur = cur.push_first();
                for j in 1..i {
                    cur = cur.hurwitz_move(j)?;
                }
            }
        }
        Ok(cur)
    }

    /// Mapping-class moves of the base torus: `(h, v) -> (h, v h)` and
    /// `(h, v) -> (h v, v)`.
    pub fn torus_twists(&self) -> [Self; 2] {
        let mut a = self.clone();
        a.sigma_v = self.sigma_v.then(&self.sigma_h);
        let mut b = self.clone();
        b.sigma_h = self.sigma_h.then(&self.sigma_v);
        [a, b]
    }

    /// Lexicographically least simultaneous conjugate.
    pub fn canonical_rep(&self) -> Result<Self, HurwitzError> {
        if self.d > MAX_CANONICAL_DEGREE {
            return Err(HurwitzError::DegreeTooLarge { d: self.d, max: MAX_CANONICAL_DEGREE });
        }
        Ok(canonical_among(self, &Perm::all(self.d)))
    }
}

pub(crate) fn canonical_among(md: &MonodromyDatum, conjugators: &[Perm]) -> MonodromyDatum {
    conjugators.iter().map(|pi| md.conjugate(pi)).min().expect("at least the identity")
}

/// Genus of the cover: `chi = -n`, so `g = n / 2 + 1`.
pub fn cover_genus(md: &MonodromyDatum) -> Result<usize, HurwitzError> {
    genus_from_branch_count(md.n())
}

pub fn genus_from_branch_count(n: usize) -> Result<usize, HurwitzError> {
    if !n.is_multiple_of(2) {
        return Err(HurwitzError::OddBranchCount(n));
    }
    Ok(n / 2 + 1)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn t(d: usize, i: usize, j: usize) -> Perm {
        Perm::transposition(d, i - 1, j - 1)
    }

    pub fn basic_d2() -> MonodromyDatum {
        MonodromyDatum::new(Perm::identity(2), Perm::identity(2), vec![t(2, 1, 2), t(2, 1, 2)]).unwrap()
    }

    #[test]
    fn perm_basics() {
        let p = Perm::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(p.then(&p.inverse()), Perm::identity(3));
        assert_eq!(p.cycle_type(), vec![3]);
        assert_eq!(Perm::all(4).len(), 24);
        assert!(Perm::from_one_based(&[1, 1]).is_err());
        let a = t(3, 1, 2);
        let b = t(3, 2, 3);
        assert_eq!(a.then(&b).apply(0), 2);
        let pi = Perm::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(a.conj(&pi), pi.inverse().then(&a).then(&pi));
    }

    #[test]
    fn validate_examples() {
        assert_eq!(basic_d2().validate(), Ok(()));
        let mut bad = basic_d2();
        bad.taus[1] = Perm::identity(2);
        assert_eq!(bad.validate(), Err(HurwitzError::NotTransposition { index: 2 }));
        let md = MonodromyDatum::new(Perm::identity(4), Perm::identity(4), vec![t(4, 1, 2), t(4, 1, 2)]).unwrap();
        assert_eq!(md.validate(), Err(HurwitzError::NotTransitive { orbit: vec![1, 2] }));
        let md = MonodromyDatum::new(Perm::identity(3), Perm::identity(3), vec![t(3, 1, 2), t(3, 2, 3)]).unwrap();
        assert_eq!(md.validate(), Err(HurwitzError::RelationFails));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_from_branch_count(2), Ok(2));
        assert_eq!(genus_from_branch_count(4), Ok(3));
        assert_eq!(genus_from_branch_count(3), Err(HurwitzError::OddBranchCount(3)));
    }

    #[test]
    fn braid_relation() {
        let h = Perm::from_one_based(&[2, 3, 1, 4]).unwrap();
        let v = Perm::identity(4);
        let md = MonodromyDatum::new(h, v, vec![t(4, 1, 2), t(4, 2, 3), t(4, 3, 4), t(4, 3, 4), t(4, 2, 3), t(4, 1, 2)])
            .unwrap();
        let x = md.hurwitz_move(1).unwrap().hurwitz_move(2).unwrap().hurwitz_move(1).unwrap();
        let y = md.hurwitz_move(2).unwrap().hurwitz_move(1).unwrap().hurwitz_move(2).unwrap();
        assert_eq!(x, y);
        assert_eq!(md.hurwitz_move(1).unwrap().hurwitz_move_inv(1).unwrap(), md);
        assert!(md.hurwitz_move(6).is_err());
    }

    #[test]
    fn push_d2_flips_sigma_v() {
        let md = basic_d2();
        let out = md.point_push(1, PushDirection::A).unwrap();
        assert_eq!(out.sigma_v, t(2, 1, 2));
        assert_eq!(out.validate(), Ok(()));
        assert_eq!(md.point_push(1, PushDirection::B).unwrap().sigma_h, t(2, 1, 2));
        assert!(md.point_push(3, PushDirection::A).is_err());
    }

    #[test]
    fn moves_preserve_validity() {
        let h = Perm::from_one_based(&[2, 3, 1]).unwrap();
        let md = MonodromyDatum::new(h, Perm::identity(3), vec![t(3, 1, 2), t(3, 1, 2)]).unwrap();
        md.validate().unwrap();
        for i in 1..=2 {
            for dir in [PushDirection::A, PushDirection::B] {
                md.point_push(i, dir).unwrap().validate().unwrap();
            }
        }
        for m in md.torus_twists() {
            m.validate().unwrap();
        }
    }

    #[test]
    fn canonical_examples() {
        let md = basic_d2();
        assert_eq!(md.canonical_rep().unwrap(), md);
        let h = Perm::from_one_based(&[2, 3, 1]).unwrap();
        let md = MonodromyDatum::new(h, Perm::identity(3), vec![t(3, 2, 3), t(3, 2, 3)]).unwrap();
        let c = md.canonical_rep().unwrap();
        assert_eq!(c.canonical_rep().unwrap(), c);
        for pi in Perm::all(3) {
            assert_eq!(md.conjugate(&pi).canonical_rep().unwrap(), c);
        }
        let big = MonodromyDatum::new(Perm::identity(7), Perm::identity(7), vec![]).unwrap();
        assert_eq!(big.canonical_rep(), Err(HurwitzError::DegreeTooLarge { d: 7, max: 6 }));
    }

    #[test]
    fn json_roundtrip() {
        let md = basic_d2();
        let j = md.to_json();
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"d":2,"taus":[[1,2],[1,2]],"sigma_h":[1,2],"sigma_v":[1,2]}"#);
        assert_eq!(MonodromyDatum::from_json(&j).unwrap(), md);
    }
}
