//! Acceptance criteria 1-10. Prints one line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use common::*;
use isoperiodic::classify::{self, AdmissibleWitness, Classification};
use isoperiodic::g2flow::{self, Field, FlowState, Guards, QuadratureConfig};
use isoperiodic::hurwitz::{self, MonodromyDatum, Perm};
use isoperiodic::periods::{HauptClause, PeriodCharacter};
use isoperiodic::symplattice::{self, SpMatrix, Sublattice, SymplecticSpace};
use isoperiodic::{FieldDesc, QuadReal};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn non_compact() -> PeriodCharacter {
    PeriodCharacter::from_ints(3, &[(1, 0), (0, 1), (1, 0), (0, 1), (0, 0), (0, 0)]).unwrap()
}

fn criterion_1() -> Outcome {
    let p = non_compact();
    let sp = SymplecticSpace::new(3);
    let h = p.is_haupt().map_err(|e| e.to_string())?;
    ensure!(h.haupt, "not Haupt");
    ensure!(h.covolume_route == HauptClause::Holds && h.kernel_route == HauptClause::Holds, "routes {h:?}");
    ensure!(p.volume() == QuadReal::from_int(2), "vol {}", p.volume());
    let k = p.kernel();
    ensure!(k.rank() == 4, "kernel rank {}", k.rank());
    let gd = det(&symplattice::restricted_gram(&k));
    ensure!(gd == 4, "restricted Gram det {gd}");
    ensure!(!symplattice::is_symplectic_submodule(&k), "kernel reported unimodular");
    match classify::classify_orbit_closure(&p).map_err(|e| e.to_string())? {
        Classification::Discrete { degree, .. } => ensure!(degree == BigInt::from(2), "degree {degree}"),
        c => return Err(format!("classified {}", c.case_name())),
    }
    let lr = p.line_rank().map_err(|e| e.to_string())?;
    ensure!(lr.r == 5, "line rank {}", lr.r);
    ensure!(classify::is_pinchable(&p, &sp.a(3)).unwrap(), "a3 not pinchable");
    let a12: Vec<i64> = sp.a(1).iter().zip(sp.a(2)).map(|(x, y)| x - y).collect();
    ensure!(!classify::is_pinchable(&p, &a12).unwrap(), "a1 - a2 pinchable");

    let scan = classify::boundary_scan(&p, 2).map_err(|e| e.to_string())?;
    ensure!(scan.members.is_empty(), "member found: {:?}", scan.members[0]);
    // Independent sample through the general membership test, weighted
    // towards planes that pass the volume filter.
    let mut r = rng(1);
    let (mut sampled, mut hard) = (0, 0);
    let pairs = standard_pairs(3);
    let mut planes: Vec<(Vec<i64>, Vec<i64>)> = pairs.clone();
    while planes.len() < 150 {
        let u = random_vector(&mut r, 6, 2);
        let v = random_vector(&mut r, 6, 2);
        if omega(&u, &v) != 1 {
            continue;
        }
        let vol = p.restrict(&[u.clone(), v.clone()]).unwrap().volume();
        if vol == QuadReal::one() || planes.len().is_multiple_of(3) {
            planes.push((u, v));
        }
    }
    for (u, v) in &planes {
        let s = Sublattice::new(3, vec![u.clone(), v.clone()]).unwrap();
        ensure!(!classify::boundary_membership(&p, &s).unwrap(), "member {u:?}, {v:?}");
        sampled += 1;
        hard += (p.restrict(&[u.clone(), v.clone()]).unwrap().volume() == QuadReal::one()) as usize;
    }
    Ok(format!(
        "vol 2, ker rank 4 det 4, DISCRETE(2), r = 5; {} planes checked exactly ({} pairs volume-filtered), {sampled} sampled ({hard} with vol 1), 0 members",
        scan.planes_checked, scan.volume_filtered
    ))
}

fn hilbert_plane() -> PeriodCharacter {
    isoperiodic::io::parse_period(r#"{"g":2,"D":2,"values":[["1","0"],["0","sqrt(2)"],["sqrt(2)","0"],["0","1"]]}"#).unwrap()
}

fn criterion_2() -> Outcome {
    let p = hilbert_plane();
    match classify::classify_orbit_closure(&p).map_err(|e| e.to_string())? {
        Classification::Hilbert { d, pairings } => {
            ensure!(d == 2, "D = {d}");
            ensure!(pairings.len() == 4 && pairings.iter().all(|q| q.value == QuadReal::zero()), "{pairings:?}");
        }
        c => return Err(format!("classified {}", c.case_name())),
    }
    let ic = IntChar { g: 2, d: 2, comps: vec![[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]] };
    ensure!(ic.character() == p, "fixture mismatch");
    let all: Vec<Vec<i64>> = (0..7i64.pow(4)).map(|k| (0..4).map(|j| (k / 7i64.pow(j)) % 7 - 3).collect()).collect();
    let images: Vec<[i64; 4]> = all.iter().map(|v| ic.eval(v)).collect();
    let mut realized = BTreeSet::new();
    let mut count = 0u64;
    let mut r = rng(2);
    let mut lib_checks = 0;
    for (i, u) in all.iter().enumerate() {
        if !u.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
            continue;
        }
        for (j, v) in all.iter().enumerate() {
            if omega(u, v) != 1 {
                continue;
            }
            count += 1;
            let (a, b) = ic.cross(&images[i], &images[j]);
            ensure!(b == 1, "vol({u:?}, {v:?}) = {a} + {b} sqrt(2)");
            realized.insert(a);
            if r.gen_ratio(1, 2000) {
                let lib = p.restrict(&[u.clone(), v.clone()]).unwrap().volume();
                let f = FieldDesc::Quadratic(2);
                ensure!(lib == QuadReal::from_ints(a as i64, 1, f), "library volume {lib} on {u:?}, {v:?}");
                lib_checks += 1;
            }
        }
    }
    ensure!(realized.contains(&0) && realized.contains(&1), "realized {realized:?}");
    let eps1 = QuadReal::from_frac(1, 10);
    let eps2 = QuadReal::from_frac(2, 10);
    let a = [1, 0, 0, 0];
    let w = classify::find_admissible_rank2(&p, &a, &eps1, &eps2, classify::DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure!(matches!(w, AdmissibleWitness::Obstruction { .. }), "{w:?}");
    ensure!(w.verify(&p, &a, &eps1, &eps2), "certificate does not verify");
    Ok(format!(
        "HILBERT(2), pairings 0; {count} symplectic pairs, vol - sqrt2 in {:?}..={:?} ({} values, {lib_checks} cross-checked); obstruction verified",
        realized.first().unwrap(),
        realized.last().unwrap(),
        realized.len()
    ))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let (mut equal, mut lattice) = (0, 0);
    for _ in 0..500 {
        let case = random_lattice_case(&mut r);
        let p = case.character();
        let h = p.is_haupt().map_err(|e| format!("{case:?}: {e}"))?;
        let (vol, cov) = (case.volume_units(), case.covolume_units());
        ensure!(p.volume() == &case.scale() * &QuadReal::from_int(vol), "{case:?}: volume");
        let k = p.kernel();
        let symplectic_kernel = k.rank() == 2 * case.g - 2 && det(&symplattice::restricted_gram(&k)) == 1;
        ensure!((vol == cov) == symplectic_kernel, "{case:?}: vol {vol} covol {cov} kernel {symplectic_kernel}");
        ensure!(h.haupt == (vol != cov), "{case:?}: is_haupt {}", h.haupt);
        ensure!(h.image.covolume == Some(&case.scale() * &QuadReal::from_int(cov)), "{case:?}: covolume");
        ensure!(vol % cov == 0 && vol / cov > 0, "{case:?}: ratio");
        ensure!(h.degree == Some(BigInt::from(vol / cov)), "{case:?}: degree {:?}", h.degree);
        equal += (vol == cov) as usize;
        lattice += 1;
    }
    Ok(format!("{lattice} lattice cases, {equal} with vol = covolume, 0 exceptions"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let f = FieldDesc::Quadratic(2);
    for _ in 0..200 {
        let g = r.gen_range(2..=3);
        let p = random_int_char(&mut r, g, 2).character();
        let gamma = random_sp(&mut r, g, 6);
        ensure!(p.apply_sp(&gamma).unwrap().volume() == p.volume(), "Sp invariance");
        let a = loop {
            let m: [[QuadReal; 2]; 2] = std::array::from_fn(|_| {
                std::array::from_fn(|_| QuadReal::from_ints(r.gen_range(-2..=2), r.gen_range(-1..=1), f))
            });
            if !(&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).is_zero() {
                break m;
            }
        };
        let d = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
        ensure!(p.apply_gl2(&a).unwrap().volume() == &d * &p.volume(), "det law");
    }
    Ok("200 (p, gamma, A): vol(p o gamma) = vol(p), vol(A p) = det(A) vol(p)".into())
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut hist = [0usize; 8];
    let mut done = 0;
    while done < 200 {
        let g = r.gen_range(2..=3);
        let d = [2, 3][r.gen_range(0..2)];
        let ic = random_int_char_with(&mut r, g, d, 1, 0.5);
        let p = ic.character();
        if !p.volume().is_positive() {
            continue;
        }
        let lr = p.line_rank().map_err(|e| e.to_string())?;
        let oracle = line_rank_oracle(&ic, 2);
        ensure!(lr.r == oracle, "{ic:?}: line_rank {} oracle {oracle}", lr.r);
        ensure!(lr.r < 2 * g, "{ic:?}: r = {}", lr.r);
        ensure!(p.preimage_rank_of_line(&lr.witness_direction) == lr.r, "{ic:?}: witness");
        hist[lr.r] += 1;
        done += 1;
    }
    Ok(format!("200 characters agree with the oracle; r histogram {:?}", &hist[1..6]))
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    for _ in 0..100 {
        let g = r.gen_range(2..=3);
        let phi = random_vector(&mut r, 2 * g - 2, 3);
        let psi = random_vector(&mut r, 2 * g - 2, 3);
        let (al, be) = (r.gen_range(-4..=4), r.gen_range(-4..=4));
        let m1 = symplattice::heis_m(g, &phi, al).unwrap();
        let m2 = symplattice::heis_m(g, &psi, be).unwrap();
        let sum: Vec<i64> = phi.iter().zip(&psi).map(|(x, y)| x + y).collect();
        let m12 = symplattice::heis_m(g, &sum, al + be + symplattice::heis_omega(&phi, &psi)).unwrap();
        ensure!(&m1 * &m2 == m12, "group law g={g} phi={phi:?} psi={psi:?}");
        for m in [&m1, &m2, &m12] {
            ensure!(SpMatrix::new(m.entries().to_vec()).is_ok(), "not symplectic");
        }
        let lambda = BigRational::new(r.gen_range(1..=5).into(), r.gen_range(1..=5).into())
            * q(if r.gen_bool(0.5) { 1 } else { -1 });
        let s = symplattice::heis_s(g, &lambda).unwrap();
        let s_inv = symplattice::heis_s(g, &lambda.recip()).unwrap();
        let mq = symplattice::heis_m_q(g, &phi.iter().map(|&x| q(x)).collect::<Vec<_>>(), &q(al)).unwrap();
        let lhs = &(&s * &mq) * &s_inv;
        let lphi: Vec<BigRational> = phi.iter().map(|&x| &lambda * q(x)).collect();
        let rhs = symplattice::heis_m_q(g, &lphi, &(&lambda * &lambda * q(al))).unwrap();
        ensure!(lhs == rhs, "conjugation g={g} phi={phi:?} lambda={lambda}");
        ensure!(s.is_symplectic() && mq.is_symplectic() && rhs.is_symplectic(), "rational matrix not symplectic");
    }
    Ok("100 instances: group law and S_lambda conjugation exact, all matrices symplectic".into())
}

fn character_of_pair(alpha: &[i64], beta: &[i64]) -> PeriodCharacter {
    let g = alpha.len() / 2;
    let v: Vec<(i64, i64)> = alpha.iter().zip(beta).map(|(&a, &b)| (a, b)).collect();
    PeriodCharacter::from_ints(g, &v).unwrap()
}

fn criterion_7() -> Outcome {
    let d = 2;
    let t = Perm::transposition(d, 0, 1);
    let mut raw = Vec::new();
    for sh in Perm::all(d) {
        for sv in Perm::all(d) {
            if let Ok(md) = MonodromyDatum::new(sh.clone(), sv.clone(), vec![t.clone(), t.clone()]) {
                if md.validate().is_ok() {
                    raw.push(md);
                }
            }
        }
    }
    ensure!(raw.len() == 4, "{} raw tuples", raw.len());
    for md in &raw {
        let cp = hurwitz::cover_period(&hurwitz::build_cover(md).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(cp.genus == 2, "genus {}", cp.genus);
        ensure!(omega(&cp.alpha, &cp.beta) == 2, "omega {}", omega(&cp.alpha, &cp.beta));
        let p = character_of_pair(&cp.alpha, &cp.beta);
        ensure!(p.is_haupt().unwrap().haupt, "not Haupt");
        match classify::classify_orbit_closure(&p).unwrap() {
            Classification::Discrete { degree, .. } => ensure!(degree == BigInt::from(2), "degree {degree}"),
            c => return Err(format!("classified {}", c.case_name())),
        }
    }
    let e2 = hurwitz::enumerate_orbits(2, 2, false).map_err(|e| e.to_string())?;
    ensure!(e2.raw_tuples == 4, "enumeration counts {} raw tuples", e2.raw_tuples);
    let mut summary = vec![];
    for dd in 2..=4 {
        let e = hurwitz::enumerate_orbits(dd, 2, false).map_err(|e| e.to_string())?;
        summary.push(format!("d={dd}: {} orbits/{} classes", e.orbits.len(), e.classes));
    }
    Ok(format!("4 raw tuples, genus 2, omega 2, DISCRETE(2); BFS audits {}", summary.join(", ")))
}

fn criterion_8() -> Outcome {
    let e = hurwitz::enumerate_orbits(3, 2, false).map_err(|e| e.to_string())?;
    for o in &e.orbits {
        let cp = hurwitz::cover_period(&hurwitz::build_cover(&o.representative).unwrap()).unwrap();
        let p = character_of_pair(&cp.alpha, &cp.beta);
        ensure!(p.volume() == QuadReal::from_int(3), "vol {}", p.volume());
        ensure!(o.signature.d == 3, "d {}", o.signature.d);
    }
    Ok(format!("{} orbits over {} raw tuples, all vol 3 and d 3", e.orbits.len(), e.raw_tuples))
}

fn criterion_9() -> Outcome {
    let (g, q) = (Guards::default(), QuadratureConfig::default());
    let s = FlowState::demo();
    let good = g2flow::drift_report(Field::Isoperiodic, &s, 0.05, 1e-3, 1, &g, &q).map_err(|e| e.to_string())?;
    ensure!(good.max_relative_drift < 1e-5, "drift {:e}", good.max_relative_drift);
    let bad = g2flow::drift_report(Field::FlippedA, &s, 0.05, 1e-3, 1, &g, &q).map_err(|e| e.to_string())?;
    ensure!(bad.max_relative_drift > 1e-2, "mutant drift {:e}", bad.max_relative_drift);
    let c = g2flow::convergence_study(&s, 0.05, 0.01, &g).map_err(|e| e.to_string())?;
    ensure!((c.ratio - 16.0).abs() <= 0.3 * 16.0, "ratio {}", c.ratio);
    Ok(format!(
        "drift {:.1e}, mutant {:.1e}, error ratio {:.2} at h = 1/100",
        good.max_relative_drift, bad.max_relative_drift, c.ratio
    ))
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let mut chains = 0;
    for k in 0..200 {
        let g = 2 + k % 3;
        let n = 2 * g;
        let a = random_primitive(&mut r, n, 4);
        let basis = symplattice::symplectic_complete(&a).map_err(|e| e.to_string())?;
        ensure!(basis[0] == a, "first vector {:?} != {a:?}", basis[0]);
        ensure!(basis.len() == n, "basis length");
        for i in 0..n {
            for j in 0..n {
                let expect = if i % 2 == 0 && j == i + 1 {
                    1
                } else if j % 2 == 0 && i == j + 1 {
                    -1
                } else {
                    0
                };
                ensure!(omega(&basis[i], &basis[j]) == expect, "completion of {a:?}: omega({i},{j})");
            }
        }
        ensure!(det(&basis).abs() == 1, "not unimodular");

        let w4 = loop {
            let y = random_vector(&mut r, n, 3);
            let z = random_vector(&mut r, n, 3);
            let v: Vec<i64> = z.iter().zip(&y).map(|(zi, yi)| omega(&a, &y) * zi - omega(&a, &z) * yi).collect();
            let c = content(&v);
            if c != 0 {
                break v.iter().map(|x| x / c).collect::<Vec<i64>>();
            }
        };
        let (w2, w3) = symplattice::primitive_chain(&a, &w4).map_err(|e| format!("{a:?}, {w4:?}: {e}"))?;
        ensure!(omega(&a, &w2) == 1 && omega(&w2, &w3) == 1 && omega(&w3, &w4) == 1, "chain {a:?} {w2:?} {w3:?} {w4:?}");
        ensure!(content(&w2) == 1 && content(&w3) == 1, "chain not primitive");
        chains += 1;
    }
    Ok(format!("200 completions and {chains} chains, g in {{2, 3, 4}}"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome, u64); 10] = [
        (1, "non compact type suite", criterion_1, 5),
        (2, "genus-2 Hilbert suite", criterion_2, 30),
        (3, "Haupt equivalence", criterion_3, 0),
        (4, "volume equivariance", criterion_4, 0),
        (5, "line rank oracle", criterion_5, 0),
        (6, "Heisenberg identities", criterion_6, 0),
        (7, "Hurwitz suite", criterion_7, 60),
        (8, "bridge check", criterion_8, 0),
        (9, "g2flow drift", criterion_9, 60),
        (10, "primitive chains and completion", criterion_10, 0),
    ];
    let mut failed = 0;
    for (k, name, f, limit) in criteria {
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let dt = t0.elapsed();
        let res = match res {
            Ok(_) if limit > 0 && dt > Duration::from_secs(limit) => Err(format!("took {dt:.2?}, limit {limit} s")),
            other => other,
        };
        match res {
            Ok(msg) => println!("criterion {k:>2} PASS [{dt:.2?}] {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k:>2} FAIL [{dt:.2?}] {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
