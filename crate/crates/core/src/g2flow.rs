//! Genus-2 isoperiodic flow on `(x_1, x_2, x_3, a, b)` for the differential
//! `(a x + b) dx / sqrt(x (x - 1) (x - x_1) (x - x_2) (x - x_3))`, with
//! numerical period monitoring.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::FlowError;
use crate::intmat;
use crate::symplattice;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub x: [Complex64; 3],
    pub a: Complex64,
    pub b: Complex64,
}

impl FlowState {
    /// `x = (3, 5 + i, 7)`, `a = b = 1`.
    pub fn demo() -> Self {
        FlowState {
            x: [Complex64::new(3.0, 0.0), Complex64::new(5.0, 1.0), Complex64::new(7.0, 0.0)],
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(1.0, 0.0),
        }
    }

    fn axpy(&self, k: f64, d: &FlowState) -> FlowState {
        FlowState {
            x: [self.x[0] + d.x[0] * k, self.x[1] + d.x[1] * k, self.x[2] + d.x[2] * k],
            a: self.a + d.a * k,
            b: self.b + d.b * k,
        }
    }

    fn components(&self) -> [Complex64; 5] {
        [self.x[0], self.x[1], self.x[2], self.a, self.b]
    }

    /// The five finite branch points `0, 1, x_1, x_2, x_3`.
    pub fn branch_points(&self) -> [Complex64; 5] {
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), self.x[0], self.x[1], self.x[2]]
    }

    fn max_distance(&self, other: &FlowState) -> f64 {
        self.components().iter().zip(other.components()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Guards {
    /// Minimum distance between branch points.
    pub separation: f64,
    /// Minimum of `|a x + b|` at the branch points.
    pub denominator: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { separation: 1e-3, denominator: 1e-8 }
    }
}

pub fn check_state(s: &FlowState, guards: &Guards) -> Result<(), FlowError> {
    let all = s.components();
    if all.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(FlowError::Precondition("non-finite coordinate".into()));
    }
    let pts = s.branch_points();
    let names = ["0", "1", "x1", "x2", "x3"];
    for i in 0..5 {
        for j in i + 1..5 {
            if (pts[i] - pts[j]).norm() < guards.separation {
                return Err(FlowError::Precondition(format!("{} and {} collide", names[i], names[j])));
            }
        }
    }
    for (j, x) in s.x.iter().enumerate() {
        if (s.a * x + s.b).norm() < guards.denominator {
            return Err(FlowError::SingularDenominator { index: j + 1 });
        }
    }
    for (name, x) in [("0", 0.0), ("1", 1.0)] {
        if (s.a * x + s.b).norm() < guards.denominator {
            return Err(FlowError::Precondition(format!("a x + b vanishes at x = {name}")));
        }
    }
    Ok(())
}

/// Which vector field to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Isoperiodic,
    /// The same field with the sign of `da/dt` flipped.
    FlippedA,
}

/// `x_j' = x_j (1 - x_j) / (a x_j + b)`, `a' = -1/2`,
/// `b' = -(1/2) (1 + sum_j b (x_j - 1) / (a x_j + b))`.
pub fn vf_eval(s: &FlowState, guards: &Guards) -> Result<FlowState, FlowError> {
    vf_eval_field(Field::Isoperiodic, s, guards)
}

pub fn vf_eval_field(field: Field, s: &FlowState, guards: &Guards) -> Result<FlowState, FlowError> {
    check_state(s, guards)?;
    let one = Complex64::new(1.0, 0.0);
    let mut dx = [Complex64::new(0.0, 0.0); 3];
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, x) in s.x.iter().enumerate() {
        let den = s.a * x + s.b;
        dx[j] = x * (one - x) / den;
        sum += s.b * (x - one) / den;
    }
    let da = match field {
        Field::Isoperiodic => -0.5,
        Field::FlippedA => 0.5,
    };
    Ok(FlowState { x: dx, a: Complex64::new(da, 0.0), b: -0.5 * (one + sum) })
}

fn step_count(t: f64, h: f64) -> Result<usize, FlowError> {
    if !(h > 0.0 && t >= 0.0 && h.is_finite() && t.is_finite()) {
        return Err(FlowError::BadStep);
    }
    Ok((t / h - 1e-9).ceil().max(0.0) as usize)
}

/// Classical fourth-order Runge–Kutta with a fixed step; the step is
/// shortened to `T / ceil(T / h)` so that the run ends exactly at `T`.
pub fn integrate(s0: &FlowState, t: f64, h: f64, guards: &Guards) -> Result<Vec<FlowState>, FlowError> {
    integrate_field(Field::Isoperiodic, s0, t, h, guards)
}

pub fn integrate_field(
    field: Field,
    s0: &FlowState,
    t: f64,
    h: f64,
    guards: &Guards,
) -> Result<Vec<FlowState>, FlowError> {
    let n = step_count(t, h)?;
    check_state(s0, guards)?;
    let h = if n == 0 { 0.0 } else { t / n as f64 };
    let mut out = Vec::with_capacity(n + 1);
    out.push(*s0);
    let mut s = *s0;
    for step in 1..=n {
        let trip = |e: FlowError| FlowError::GuardTripped { step, reason: e.to_string() };
        let k1 = vf_eval_field(field, &s, guards).map_err(trip)?;
        let k2 = vf_eval_field(field, &s.axpy(h / 2.0, &k1), guards).map_err(trip)?;
        let k3 = vf_eval_field(field, &s.axpy(h / 2.0, &k2), guards).map_err(trip)?;
        let k4 = vf_eval_field(field, &s.axpy(h, &k3), guards).map_err(trip)?;
        s = s.axpy(h / 6.0, &k1).axpy(h / 3.0, &k2).axpy(h / 3.0, &k3).axpy(h / 6.0, &k4);
        check_state(&s, guards).map_err(trip)?;
        out.push(s);
    }
    Ok(out)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p2) / (k + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub nodes: usize,
    pub panels: usize,
    /// Relative tolerance for the comparison against twice the nodes;
    /// `0` disables the check.
    pub refine_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { nodes: 64, panels: 2, refine_tol: 1e-8 }
    }
}

/// Integrals of `dx / y` and `x dx / y` along twice the segment from `p` to
/// `q`, with `x = m + r sin(theta)` so that the endpoint singularities
/// cancel: the integrand becomes `x^k / (i sqrt(rest(x))) dtheta`.
fn segment(p: Complex64, q: Complex64, others: [Complex64; 3], rule: &(Vec<f64>, Vec<f64>), panels: usize) -> [Complex64; 2] {
    let m = (p + q) / 2.0;
    let r = (q - p) / 2.0;
    let i = Complex64::new(0.0, 1.0);
    let mut acc = [Complex64::new(0.0, 0.0); 2];
    let mut prev: Option<Complex64> = None;
    let width = 2.0 * FRAC_PI_2 / panels as f64;
    for k in 0..panels {
        let lo = -FRAC_PI_2 + k as f64 * width;
        for (t, wt) in rule.0.iter().zip(&rule.1) {
            let th = lo + (t + 1.0) * width / 2.0;
            let x = m + r * th.sin();
            let rest = (x - others[0]) * (x - others[1]) * (x - others[2]);
            let mut s = rest.sqrt();
            if let Some(pv) = prev {
                if (s - pv).norm() > (s + pv).norm() {
                    s = -s;
                }
            }
            prev = Some(s);
            let f = wt * width / 2.0 / (i * s);
            acc[0] += f;
            acc[1] += f * x;
        }
    }
    [acc[0] * 2.0, acc[1] * 2.0]
}

/// Periods on the cycles over the segments `(0, 1)`, `(1, x_1)`,
/// `(x_1, x_2)`, `(x_2, x_3)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodVector {
    pub cycles: [Complex64; 4],
    /// Periods of `dx / y` and `x dx / y`.
    pub basic: [[Complex64; 4]; 2],
    /// Intersection numbers of the cycles.
    pub intersection: [[i64; 4]; 4],
    /// A symplectic basis, as integer combinations of the cycles.
    pub symplectic: Vec<Vec<i64>>,
    /// Periods on the symplectic basis.
    pub symplectic_periods: Vec<Complex64>,
    /// `sum Im(conj(A_k) B_k)`.
    pub volume: f64,
    /// Relative residual of the bilinear relation between the two basic
    /// differentials.
    pub bilinear_residual: f64,
}

fn raw_periods(s: &FlowState, nodes: usize, panels: usize) -> [[Complex64; 4]; 2] {
    let rule = gauss_legendre(nodes);
    let pts = s.branch_points();
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 2];
    for c in 0..4 {
        let others: Vec<Complex64> = (0..5).filter(|&j| j != c && j != c + 1).map(|j| pts[j]).collect();
        let v = segment(pts[c], pts[c + 1], [others[0], others[1], others[2]], &rule, panels);
        out[0][c] = v[0];
        out[1][c] = v[1];
    }
    out
}

fn combine(coef: &[i64], p: &[Complex64; 4]) -> Complex64 {
    coef.iter().zip(p).map(|(&c, z)| z * c as f64).sum()
}

fn chain(signs: [i64; 3]) -> [[i64; 4]; 4] {
    let mut q = [[0i64; 4]; 4];
    for k in 0..3 {
        q[k][k + 1] = signs[k];
        q[k + 1][k] = -signs[k];
    }
    q
}

/// Decides the signs of the chain intersection pattern from the bilinear
/// relation between `dx/y` and `x dx/y` and the orientation from positive
/// volume.
fn symplectic_structure(
    basic: &[[Complex64; 4]; 2],
    cycles: &[Complex64; 4],
) -> Result<([[i64; 4]; 4], Vec<Vec<i64>>, f64, f64), FlowError> {
    let scale = basic[0].iter().map(|z| z.norm()).fold(0.0, f64::max) * basic[1].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut cands = Vec::new();
    for bits in 0..8u8 {
        let signs = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { -1 } else { 1 });
        let q = chain(signs);
        let gram: Vec<Vec<BigInt>> = q.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let unit: Vec<Vec<BigInt>> = (0..4).map(|i| (0..4).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        let sb = symplattice::symplectic_basis_gram(&gram, &unit, None).map_err(|_| FlowError::CycleBasis)?;
        let sb: Vec<Vec<i64>> = sb.iter().map(|v| intmat::small(v)).collect::<Result<_, _>>().map_err(|_| FlowError::CycleBasis)?;
        let mut rel = Complex64::new(0.0, 0.0);
        let mut vol = 0.0;
        for k in 0..2 {
            let (a, b) = (&sb[2 * k], &sb[2 * k + 1]);
            rel += combine(a, &basic[0]) * combine(b, &basic[1]) - combine(b, &basic[0]) * combine(a, &basic[1]);
            vol += (combine(a, cycles).conj() * combine(b, cycles)).im;
        }
        cands.push((rel.norm() / scale, vol, q, sb));
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    let best = cands.iter().find(|c| c.1 > 0.0).ok_or(FlowError::CycleBasis)?;
    let runner_up = cands.iter().filter(|c| c.1 > 0.0).nth(1).map_or(f64::INFINITY, |c| c.0);
    if best.0 > 1e-6 || runner_up < 1e-3 {
        return Err(FlowError::CycleBasis);
    }
    Ok((best.2, best.3.clone(), best.1, best.0))
}

pub fn numeric_periods(s: &FlowState, cfg: &QuadratureConfig, guards: &Guards) -> Result<PeriodVector, FlowError> {
    check_state(s, guards)?;
    let basic = raw_periods(s, cfg.nodes, cfg.panels);
    let periods_of = |b: &[[Complex64; 4]; 2]| -> [Complex64; 4] { [0, 1, 2, 3].map(|c| s.a * b[1][c] + s.b * b[0][c]) };
    let cycles = periods_of(&basic);
    if cfg.refine_tol > 0.0 {
        let fine = periods_of(&raw_periods(s, 2 * cfg.nodes, cfg.panels));
        for c in 0..4 {
            let change = (fine[c] - cycles[c]).norm() / cycles[c].norm();
            if !(change <= cfg.refine_tol) {
                return Err(FlowError::QuadratureDivergence { cycle: c + 1, change });
            }
        }
    }
    let (intersection, symplectic, volume, bilinear_residual) = symplectic_structure(&basic, &cycles)?;
    let symplectic_periods = symplectic.iter().map(|v| combine(v, &cycles)).collect();
    Ok(PeriodVector { cycles, basic, intersection, symplectic, symplectic_periods, volume, bilinear_residual })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub field: Field,
    pub t: f64,
    pub h: f64,
    pub steps: usize,
    pub samples: usize,
    pub max_relative_drift: f64,
    pub per_cycle: [f64; 4],
    pub initial: [Complex64; 4],
    pub final_periods: [Complex64; 4],
    #[serde(skip)]
    pub trajectory: Vec<FlowState>,
    #[serde(skip)]
    pub sampled_periods: Vec<(usize, [Complex64; 4])>,
}

impl DriftReport {
    /// `t,x1re,x1im,...,bim,P1re,...,P4im` at the sampled steps.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for name in ["x1", "x2", "x3", "a", "b", "P1", "P2", "P3", "P4"] {
            let _ = write!(s, ",{name}re,{name}im");
        }
        s.push('\n');
        let h = if self.steps == 0 { 0.0 } else { self.t / self.steps as f64 };
        for (k, p) in &self.sampled_periods {
            let st = &self.trajectory[*k];
            let _ = write!(s, "{}", *k as f64 * h);
            for z in st.components().iter().chain(p) {
                let _ = write!(s, ",{},{}", z.re, z.im);
            }
            s.push('\n');
        }
        s
    }
}

/// Integrates `field` and reports `max_j |P_j(t) - P_j(0)| / |P_j(0)|` over
/// every `every`-th step. Each cycle period is matched to the sign of its
/// previous sample, which fixes the lift of the segment along the path.
#[allow(clippy::too_many_arguments)]
pub fn drift_report(
    field: Field,
    s0: &FlowState,
    t: f64,
    h: f64,
    every: usize,
    guards: &Guards,
    cfg: &QuadratureConfig,
) -> Result<DriftReport, FlowError> {
    let traj = integrate_field(field, s0, t, h, guards)?;
    let steps = traj.len() - 1;
    let every = every.max(1);
    let p0 = numeric_periods(s0, cfg, guards)?.cycles;
    let mut prev = p0;
    let mut per_cycle = [0.0f64; 4];
    let mut sampled = vec![(0, p0)];
    let mut k = every;
    while k <= steps || (k - every < steps && k > steps) {
        let idx = k.min(steps);
        let mut p = raw_periods(&traj[idx], cfg.nodes, cfg.panels);
        let mut cur = [0, 1, 2, 3].map(|c| traj[idx].a * p[1][c] + traj[idx].b * p[0][c]);
        for c in 0..4 {
            if (cur[c] - prev[c]).norm() > (cur[c] + prev[c]).norm() {
                cur[c] = -cur[c];
                p[0][c] = -p[0][c];
                p[1][c] = -p[1][c];
            }
            per_cycle[c] = per_cycle[c].max((cur[c] - p0[c]).norm() / p0[c].norm());
        }
        prev = cur;
        sampled.push((idx, cur));
        if idx == steps {
            break;
        }
        k += every;
    }
    Ok(DriftReport {
        field,
        t,
        h,
        steps,
        samples: sampled.len(),
        max_relative_drift: per_cycle.iter().cloned().fold(0.0, f64::max),
        per_cycle,
        initial: p0,
        final_periods: prev,
        trajectory: traj,
        sampled_periods: sampled,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub t: f64,
    pub h: f64,
    /// Endpoint errors at `h` and `h / 2` against a run at `h / 8`.
    pub error_h: f64,
    pub error_half: f64,
    pub ratio: f64,
}

pub fn convergence_study(s0: &FlowState, t: f64, h: f64, guards: &Guards) -> Result<ConvergenceReport, FlowError> {
    let end = |step: f64| -> Result<FlowState, FlowError> {
        Ok(*integrate(s0, t, step, guards)?.last().expect("nonempty trajectory"))
    };
    let reference = end(h / 8.0)?;
    let error_h = end(h)?.max_distance(&reference);
    let error_half = end(h / 2.0)?.max_distance(&reference);
    Ok(ConvergenceReport { t, h, error_h, error_half, ratio: error_h / error_half })
}
