#![allow(dead_code)]

use isoperiodic::periods::PeriodCharacter;
use isoperiodic::symplattice::{self, SpMatrix, SymplecticSpace};
use isoperiodic::{FieldDesc, KComplex, QuadReal};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

pub fn omega(x: &[i64], y: &[i64]) -> i64 {
    (0..x.len() / 2).map(|k| x[2 * k] * y[2 * k + 1] - x[2 * k + 1] * y[2 * k]).sum()
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| r.gen_range(-bound..=bound)).collect()
}

pub fn random_primitive(r: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    loop {
        let v = random_vector(r, n, bound);
        let c = content(&v);
        if c != 0 {
            return v.iter().map(|x| x / c).collect();
        }
    }
}

/// A product of `len` random transvections along short primitive vectors.
pub fn random_sp(r: &mut ChaCha8Rng, g: usize, len: usize) -> SpMatrix {
    let mut m = SpMatrix::identity(g);
    for _ in 0..len {
        let a = random_primitive(r, 2 * g, 1);
        let mut t = symplattice::transvection(&a).unwrap();
        if r.gen_bool(0.5) {
            t = t.inverse();
        }
        m = &m * &t;
    }
    m
}

/// `x + y * i * s` with `s = sqrt(radicand)` (`radicand = 1` for `s = 1`).
pub fn lattice_value(x: i64, y: i64, radicand: u64) -> KComplex {
    if radicand == 1 {
        KComplex::from_ints(x, y)
    } else {
        let f = FieldDesc::quadratic(radicand).unwrap();
        KComplex::new(QuadReal::from_int(x), QuadReal::from_ints(0, y, f))
    }
}

/// A character with image in `Z + Z i sqrt(radicand)`, given by integer
/// coordinates.
#[derive(Clone, Debug)]
pub struct LatticeCase {
    pub g: usize,
    pub radicand: u64,
    pub coords: Vec<(i64, i64)>,
}

impl LatticeCase {
    pub fn character(&self) -> PeriodCharacter {
        let vals = self.coords.iter().map(|&(x, y)| lattice_value(x, y, self.radicand)).collect();
        PeriodCharacter::new(self.g, vals).unwrap()
    }

    /// `vol / s`.
    pub fn volume_units(&self) -> i64 {
        (0..self.g)
            .map(|k| {
                let (a, b) = (self.coords[2 * k], self.coords[2 * k + 1]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum()
    }

    /// `covolume / s`: gcd of all `2 x 2` minors of the coordinate matrix.
    pub fn covolume_units(&self) -> i64 {
        let mut g = 0;
        for (i, a) in self.coords.iter().enumerate() {
            for b in &self.coords[i + 1..] {
                g = gcd(g, a.0 * b.1 - a.1 * b.0);
            }
        }
        g
    }

    pub fn scale(&self) -> QuadReal {
        if self.radicand == 1 {
            QuadReal::one()
        } else {
            QuadReal::sqrt(self.radicand).unwrap()
        }
    }
}

/// Positive-volume lattice-image characters; half of them are pulled back
/// from `(u, v, 0, ..., 0)`, where the kernel is symplectic.
pub fn random_lattice_case(r: &mut ChaCha8Rng) -> LatticeCase {
    let g = r.gen_range(2..=3);
    let radicand = [1, 1, 2, 3][r.gen_range(0..4)];
    loop {
        let coords: Vec<(i64, i64)> = if r.gen_bool(0.5) {
            let mut base = vec![(0, 0); 2 * g];
            base[0] = (r.gen_range(-3..=3), r.gen_range(-3..=3));
            base[1] = (r.gen_range(-3..=3), r.gen_range(-3..=3));
            let gamma = random_sp(r, g, 4);
            (0..2 * g)
                .map(|j| {
                    (0..2 * g).fold((0, 0), |acc, i| {
                        let c = gamma.entry(i, j);
                        (acc.0 + c * base[i].0, acc.1 + c * base[i].1)
                    })
                })
                .collect()
        } else {
            (0..2 * g).map(|_| (r.gen_range(-3..=3), r.gen_range(-3..=3))).collect()
        };
        let case = LatticeCase { g, radicand, coords };
        if case.volume_units() > 0 {
            return case;
        }
    }
}

/// Integer components `(re.rat, re.irr, im.rat, im.irr)`.
#[derive(Clone, Debug)]
pub struct IntChar {
    pub g: usize,
    pub d: u64,
    pub comps: Vec<[i64; 4]>,
}

impl IntChar {
    pub fn character(&self) -> PeriodCharacter {
        let f = FieldDesc::quadratic(self.d).unwrap();
        let vals = self
            .comps
            .iter()
            .map(|c| KComplex::new(QuadReal::from_ints(c[0], c[1], f), QuadReal::from_ints(c[2], c[3], f)))
            .collect();
        PeriodCharacter::new(self.g, vals).unwrap()
    }

    pub fn eval(&self, v: &[i64]) -> [i64; 4] {
        let mut r = [0; 4];
        for (c, x) in self.comps.iter().zip(v) {
            for k in 0..4 {
                r[k] += x * c[k];
            }
        }
        r
    }

    /// `Re x Im y - Im x Re y` as `(A, B)` with value `A + B sqrt(d)`.
    pub fn cross(&self, x: &[i64; 4], y: &[i64; 4]) -> (i128, i128) {
        let d = self.d as i128;
        let [a, b, c, e] = x.map(|t| t as i128);
        let [p, q, s, t] = y.map(|t| t as i128);
        (a * s + d * b * t - c * p - d * e * q, a * t + b * s - c * q - e * p)
    }
}

/// Random character in `Q(sqrt d) + i Q(sqrt d)` with integer components
/// in `{-B..B}`; each irrational part is nonzero with probability `irr`.
pub fn random_int_char_with(r: &mut ChaCha8Rng, g: usize, d: u64, bound: i64, irr: f64) -> IntChar {
    let comps = (0..2 * g)
        .map(|_| {
            let mut c = [0i64; 4];
            for (k, x) in c.iter_mut().enumerate() {
                if k % 2 == 0 || r.gen_bool(irr) {
                    *x = r.gen_range(-bound..=bound);
                }
            }
            c
        })
        .collect();
    IntChar { g, d, comps }
}

pub fn random_int_char(r: &mut ChaCha8Rng, g: usize, d: u64) -> IntChar {
    random_int_char_with(r, g, d, 2, 0.3)
}

/// All nonzero vectors in `{-N..N}^n` whose first nonzero entry is
/// positive.
pub fn half_box(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = 2 * bound + 1;
    let total = side.pow(n as u32);
    (0..total)
        .map(|k| (0..n).map(|j| (k / side.pow(j as u32)) % side - bound).collect::<Vec<i64>>())
        .filter(|v| v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
        .collect()
}

/// `max rank p^{-1}(R p(v))` over `v` with entries in `{-N..N}`.
pub fn line_rank_oracle(p: &IntChar, bound: i64) -> usize {
    let n = 2 * p.g;
    let mut best = 0;
    for v in half_box(n, bound) {
        let w = p.eval(&v);
        if w == [0; 4] {
            continue;
        }
        let rows: Vec<(i128, i128)> = p.comps.iter().map(|c| p.cross(c, &w)).collect();
        let rank = if rows.iter().all(|&(a, b)| a == 0 && b == 0) {
            0
        } else if rows.iter().any(|x| rows.iter().any(|y| x.0 * y.1 - x.1 * y.0 != 0)) {
            2
        } else {
            1
        };
        best = best.max(n - rank);
    }
    best
}

pub fn standard_pairs(g: usize) -> Vec<(Vec<i64>, Vec<i64>)> {
    let s = SymplecticSpace::new(g);
    (1..=g).map(|i| (s.a(i), s.b(i))).collect()
}
