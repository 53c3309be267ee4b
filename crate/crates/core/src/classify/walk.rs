//! Random walks of a period character under transvections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::ClassifyError;
use crate::periods::PeriodCharacter;
use crate::scalar::KComplex;
use crate::symplattice::{self, SpMatrix, SymplecticSpace};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkRow {
    pub step: usize,
    pub re1: f64,
    pub im1: f64,
    pub re2: f64,
    pub im2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitWalk {
    pub rows: Vec<WalkRow>,
    /// Exact first two values at every step.
    #[serde(skip)]
    pub exact: Vec<[KComplex; 2]>,
}

impl OrbitWalk {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,re1,im1,re2,im2\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{}\n", r.step, r.re1, r.im1, r.re2, r.im2));
        }
        s
    }
}

fn generators(g: usize) -> Result<Vec<SpMatrix>, ClassifyError> {
    let sp = SymplecticSpace::new(g);
    let mut dirs = Vec::new();
    for i in 1..=g {
        dirs.push(sp.a(i));
        dirs.push(sp.b(i));
        if i < g {
            dirs.push(sp.a(i).iter().zip(sp.a(i + 1)).map(|(x, y)| x - y).collect());
        }
    }
    let mut out = Vec::new();
    for d in dirs {
        let t = symplattice::transvection(&d)?;
        out.push(t.inverse());
        out.push(t);
    }
    Ok(out)
}

/// Applies `steps` transvections drawn from a seeded generator and records
/// the first two coordinates of `p o gamma` after each step.
pub fn orbit_walk(p: &PeriodCharacter, steps: usize, seed: u64) -> Result<OrbitWalk, ClassifyError> {
    if !p.volume().is_positive() {
        return Err(ClassifyError::ZeroVolume);
    }
    let gens = generators(p.genus())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = p.clone();
    let mut rows = Vec::with_capacity(steps + 1);
    let mut exact = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        if step > 0 {
            cur = cur.apply_sp(&gens[rng.gen_range(0..gens.len())])?;
        }
        let (z1, z2) = (cur.values()[0].clone(), cur.values()[1].clone());
        let (c1, c2) = (z1.to_c64(), z2.to_c64());
        rows.push(WalkRow { step, re1: c1.re, im1: c1.im, re2: c2.re, im2: c2.im });
        exact.push([z1, z2]);
    }
    Ok(OrbitWalk { rows, exact })
}
