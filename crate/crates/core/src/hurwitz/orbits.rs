//! Orbits of monodromy data under the braid group of the torus and the
//! `Sp(2g, Z)`-invariants of their period pairs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use super::{build_cover, canonical_among, cover_period, MonodromyDatum, Perm, PushDirection, MAX_CANONICAL_DEGREE};
use crate::error::{HurwitzError, LatticeError};
use crate::intmat;
use crate::symplattice;

/// Invariants of an integer pair `(alpha, beta)` under simultaneous
/// precomposition by `Sp(2g, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PairSignature {
    pub d: i64,
    pub divisors: Vec<i64>,
    pub content: i64,
}

pub fn pair_signature(alpha: &[i64], beta: &[i64]) -> Result<PairSignature, HurwitzError> {
    if alpha.len() != beta.len() {
        return Err(LatticeError::DimensionMismatch { expected: alpha.len(), found: beta.len() }.into());
    }
    let d = symplattice::omega(alpha, beta)?;
    if d <= 0 {
        return Err(HurwitzError::NonPositivePairing(d));
    }
    let rows = vec![intmat::big(alpha), intmat::big(beta)];
    let divisors = intmat::small(&intmat::smith(&rows, alpha.len()).divisors())?;
    let mut all = intmat::big(alpha);
    all.extend(intmat::big(beta));
    let content = intmat::small(&[intmat::content(&all)])?[0];
    Ok(PairSignature { d, divisors, content })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    /// Number of conjugacy classes of tuples in the orbit.
    pub orbit_size: usize,
    /// Number of raw tuples in the orbit.
    pub raw_size: u64,
    #[serde(serialize_with = "ser_datum")]
    pub representative: MonodromyDatum,
    pub signature: PairSignature,
}

fn ser_datum<S: serde::Serializer>(md: &MonodromyDatum, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&md.to_json(), s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub d: usize,
    pub g: usize,
    pub raw_tuples: u64,
    pub classes: usize,
    pub torus_moves: bool,
    pub orbits: Vec<OrbitReport>,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One permutation per conjugacy class, with the class size.
fn class_representatives(d: usize) -> Vec<(Perm, u64)> {
    partitions(d, d)
        .into_iter()
        .map(|lambda| {
            let mut img = vec![0; d];
            let mut start = 0;
            for &len in &lambda {
                for i in 0..len {
                    img[start + i] = start + (i + 1) % len;
                }
                start += len;
            }
            let mut z = 1u64;
            for k in 1..=d {
                let m = lambda.iter().filter(|&&x| x == k).count();
                z *= (k as u64).pow(m as u32) * factorial(m);
            }
            (Perm::new(img).expect("cycle construction"), factorial(d) / z)
        })
        .collect()
}

fn neighbours(md: &MonodromyDatum, torus_moves: bool) -> Result<Vec<MonodromyDatum>, HurwitzError> {
    let n = md.n();
    let mut out = Vec::new();
    for i in 1..n {
        out.push(md.hurwitz_move(i)?);
    }
    for i in 1..=n {
        out.push(md.point_push(i, PushDirection::A)?);
        out.push(md.point_push(i, PushDirection::B)?);
    }
    if torus_moves {
        out.extend(md.torus_twists());
    }
    Ok(out)
}

/// Enumerates valid data of degree `d` with `2g - 2` branch points, groups
/// them into conjugacy classes and then into orbits of the braid group of
/// the torus (optionally together with its mapping class group), and audits
/// that the period pair signature is constant on each orbit.
pub fn enumerate_orbits(d: usize, g: usize, torus_moves: bool) -> Result<Enumeration, HurwitzError> {
    if d > MAX_CANONICAL_DEGREE {
        return Err(HurwitzError::DegreeTooLarge { d, max: MAX_CANONICAL_DEGREE });
    }
    if !(1..=3).contains(&g) || d == 0 {
        return Err(HurwitzError::GenusOutOfRange { g });
    }
    let n = 2 * g - 2;
    let all = Perm::all(d);
    let transpositions: Vec<Perm> =
        (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).map(|(i, j)| Perm::transposition(d, i, j)).collect();

    let mut raw_tuples = 0u64;
    // Full canonical form -> number of raw tuples in the class.
    let mut classes: BTreeMap<MonodromyDatum, u64> = BTreeMap::new();
    for (rep, class_size) in class_representatives(d) {
        let centralizer: Vec<Perm> = all.iter().filter(|pi| rep.conj(pi) == rep).cloned().collect();
        let mut local: BTreeSet<MonodromyDatum> = BTreeSet::new();
        for sv in &all {
            let comm = rep.then(sv).then(&rep.inverse()).then(&sv.inverse());
            let mut idx = vec![0usize; n.saturating_sub(1)];
            loop {
                let mut taus: Vec<Perm> = idx.iter().map(|&i| transpositions[i].clone()).collect();
                let ok = if n == 0 {
                    comm.is_identity()
                } else {
                    let q = taus.iter().fold(Perm::identity(d), |acc, t| acc.then(t));
                    let last = q.inverse().then(&comm);
                    let is_t = last.as_transposition().is_some();
                    taus.push(last);
                    is_t
                };
                if ok {
                    let md = MonodromyDatum::new(rep.clone(), sv.clone(), taus)?;
                    if md.validate().is_ok() {
                        raw_tuples += class_size;
                        local.insert(canonical_among(&md, &centralizer));
                    }
                }
                let Some(pos) = idx.iter().position(|&i| i + 1 < transpositions.len()) else { break };
                idx[pos] += 1;
                for x in &mut idx[..pos] {
                    *x = 0;
                }
            }
        }
        for md in local {
            let stab = centralizer.iter().filter(|pi| md.conjugate(pi) == md).count() as u64;
            let size = factorial(d) / stab;
            classes.insert(canonical_among(&md, &all), size);
        }
    }
    let total: u64 = classes.values().sum();
    if total != raw_tuples {
        return Err(HurwitzError::Invariant(format!("class sizes sum to {total}, raw count is {raw_tuples}")));
    }

    let mut visited: BTreeSet<MonodromyDatum> = BTreeSet::new();
    let mut orbits = Vec::new();
    for start in classes.keys() {
        if visited.contains(start) {
            continue;
        }
        visited.insert(start.clone());
        let mut members = vec![start.clone()];
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(md) = queue.pop_front() {
            for nb in neighbours(&md, torus_moves)? {
                let c = canonical_among(&nb, &all);
                if !classes.contains_key(&c) {
                    return Err(HurwitzError::Invariant(format!("a move left the valid set: {:?}", c.to_json())));
                }
                if visited.insert(c.clone()) {
                    members.push(c.clone());
                    queue.push_back(c);
                }
            }
        }
        members.sort();
        let mut signature: Option<PairSignature> = None;
        for m in &members {
            let p = cover_period(&build_cover(m)?)?;
            let s = pair_signature(&p.alpha, &p.beta)?;
            match &signature {
                None => signature = Some(s),
                Some(s0) if *s0 != s => {
                    return Err(HurwitzError::Invariant(format!(
                        "pair signature {s:?} differs from {s0:?} within one orbit; the point-push presentation is inconsistent"
                    )));
                }
                _ => {}
            }
        }
        orbits.push(OrbitReport {
            orbit_size: members.len(),
            raw_size: members.iter().map(|m| classes[m]).sum(),
            representative: members[0].clone(),
            signature: signature.expect("nonempty orbit"),
        });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(Enumeration { d, g, raw_tuples, classes: classes.len(), torus_moves, orbits })
}

impl PairSignature {
    pub fn from_big(alpha: &[BigInt], beta: &[BigInt]) -> Result<Self, HurwitzError> {
        pair_signature(&intmat::small(alpha)?, &intmat::small(beta)?)
    }
}
