use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isoperiodic::classify::{self, AdmissibleWitness, SplitOutcome};
use isoperiodic::g2flow::{self, Field, FlowState, Guards, QuadratureConfig};
use isoperiodic::hurwitz::{self, MonodromyDatum, PushDirection};
use isoperiodic::io::{self, ParseLimits};
use isoperiodic::periods::PeriodCharacter;
use isoperiodic::scalar::parse_quadreal;
use isoperiodic::symplattice::{Sublattice, SymplecticSpace};
use isoperiodic::{ClassifyError, FlowError, HurwitzError, InputError, PeriodError};

/// Exact period-character analysis and torus-cover tools.
///
/// Structured results go to standard output as JSON; diagnostics go to
/// standard error. Exit codes: 0 success, 1 invalid input, 2 negative
/// result, 3 numeric failure.
#[derive(Parser, Debug)]
#[command(name = "isoperiodic", version)]
struct Cli {
    /// Input file, or `-` for standard input.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Print a human-readable summary followed by indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search radius for vector enumerations.
    #[arg(long, global = true)]
    bound: Option<i64>,
    /// Iteration budget for the exact Euclidean reduction.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Drift tolerance for `g2flow`; exceeding it exits with code 3.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = ParseLimits::default().max_genus)]
    max_genus: usize,
    /// Maximum length in bytes of one numeric literal.
    #[arg(long, global = true, default_value_t = ParseLimits::default().max_literal)]
    max_literal: usize,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Volume of a period character.
    Vol,
    /// Haupt test by both routes.
    Haupt,
    /// Orbit-closure classification with certificate.
    Classify,
    /// Line rank with witness direction.
    Linerank,
    /// Rank-2 symplectic submodule containing `a` with volume in (eps1, eps2).
    Admissible {
        /// Comma-separated coordinates; defaults to a_1.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eps1: String,
        #[arg(long, allow_hyphen_values = true)]
        eps2: String,
    },
    /// Pinchability of one class, or a report over short kernel classes.
    Pinchable {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// Boundary membership of one sublattice, or a scan of all rank-2
    /// symplectic sublattices with generators in the `--bound` box.
    Boundary {
        /// Generators as `x,y,...;u,v,...`.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// Search for a p-admissible decomposition.
    Split,
    /// Enumerate monodromy data and their braid orbits.
    HurwitzEnum {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        torus_moves: bool,
    },
    /// Cover complex and period pair of a monodromy datum.
    HurwitzPeriod,
    /// Checks that every move out of a datum keeps it valid and keeps its
    /// pair signature.
    HurwitzAudit {
        #[arg(long)]
        torus_moves: bool,
    },
    /// Integrate the genus-2 flow and monitor period drift.
    G2flow {
        #[arg(long, default_value_t = 0.05)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Sample the periods every this many steps.
        #[arg(long, default_value_t = 10)]
        every: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Integrate the sign-flipped field instead.
        #[arg(long)]
        mutant: bool,
        /// Gauss-Legendre nodes per panel.
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Use the demo state instead of reading one.
        #[arg(long)]
        demo: bool,
    },
    /// Random walk of the first two periods under transvections.
    OrbitWalk {
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Numeric(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<PeriodError> for Failure {
    fn from(e: PeriodError) -> Self {
        match e {
            PeriodError::Invariant(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Period(p) => p.into(),
            ClassifyError::Invariant(_) | ClassifyError::BudgetExceeded { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<HurwitzError> for Failure {
    fn from(e: HurwitzError) -> Self {
        match e {
            HurwitzError::Invariant(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<FlowError> for Failure {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::BadStep | FlowError::Precondition(_) => Failure::Input(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

struct Output {
    value: Value,
    summary: String,
    negative: bool,
    csv: Option<String>,
}

impl Output {
    fn ok(value: Value, summary: String) -> Self {
        Output { value, summary, negative: false, csv: None }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    let r = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut s)).map(|_| ())
    };
    r.map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    Ok(s)
}

fn parse_vec(s: &str, len: usize) -> Result<Vec<i64>, Failure> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("{s:?}: {e}")))?;
    if v.len() != len {
        return Err(Failure::Input(format!("{s:?}: expected {len} coordinates, found {}", v.len())));
    }
    Ok(v)
}

fn parse_q(s: &str) -> Result<isoperiodic::QuadReal, Failure> {
    parse_quadreal(s).map_err(|e| Failure::Input(e.to_string()))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let limits = ParseLimits { max_genus: cli.max_genus, max_literal: cli.max_literal };
    let period = || -> Result<PeriodCharacter, Failure> { Ok(io::parse_period_with(&read_input(&cli.input)?, &limits)?) };
    let monodromy = || -> Result<MonodromyDatum, Failure> { Ok(io::parse_monodromy(&read_input(&cli.input)?)?) };
    match &cli.verb {
        Verb::Vol => {
            let p = period()?;
            let v = p.volume();
            Ok(Output::ok(
                json!({"volume": v, "approx": v.to_f64(), "character": io::period_to_json(&p)}),
                format!("vol = {v}"),
            ))
        }
        Verb::Haupt => {
            let h = period()?.is_haupt()?;
            let summary = format!("haupt = {}, kernel rank {}", h.haupt, h.kernel_rank);
            Ok(Output::ok(to_value(&h), summary))
        }
        Verb::Classify => {
            let p = period()?;
            let c = classify::classify_orbit_closure(&p)?;
            if !c.verify(&p) {
                return Err(Failure::Numeric("the certificate does not re-verify".into()));
            }
            Ok(Output::ok(to_value(&c), format!("case {}", c.case_name())))
        }
        Verb::Linerank => {
            let lr = period()?.line_rank()?;
            Ok(Output::ok(to_value(&lr), format!("r = {} along {}", lr.r, lr.witness_direction)))
        }
        Verb::Admissible { a, eps1, eps2 } => {
            let p = period()?;
            let n = 2 * p.genus();
            let a = match a {
                Some(s) => parse_vec(s, n)?,
                None => SymplecticSpace::new(p.genus()).a(1),
            };
            let (e1, e2) = (parse_q(eps1)?, parse_q(eps2)?);
            let w = classify::find_admissible_rank2(&p, &a, &e1, &e2, cli.budget.unwrap_or(classify::DEFAULT_BUDGET))?;
            let verified = w.verify(&p, &a, &e1, &e2);
            if !verified {
                return Err(Failure::Numeric("the witness does not re-verify".into()));
            }
            let negative = matches!(w, AdmissibleWitness::Obstruction { .. });
            let summary = match &w {
                AdmissibleWitness::Found { partner, volume, .. } => format!("found partner {partner:?} with volume {volume}"),
                AdmissibleWitness::Obstruction { generator, offset } => {
                    format!("obstruction: volumes lie in {offset} + Z ({generator})")
                }
            };
            let mut value = to_value(&w);
            value["verified"] = json!(verified);
            Ok(Output { value, summary, negative, csv: None })
        }
        Verb::Pinchable { a } => {
            let p = period()?;
            match a {
                Some(s) => {
                    let a = parse_vec(s, 2 * p.genus())?;
                    let ok = classify::is_pinchable(&p, &a)?;
                    Ok(Output {
                        value: json!({"a": a, "pinchable": ok}),
                        summary: format!("{a:?} pinchable = {ok}"),
                        negative: !ok,
                        csv: None,
                    })
                }
                None => {
                    let r = classify::pinchable_report(&p)?;
                    let summary = format!("{} kernel classes tested, all pinchable = {}", r.tested, r.all_pinchable);
                    Ok(Output::ok(to_value(&r), summary))
                }
            }
        }
        Verb::Boundary { v } => {
            let p = period()?;
            let g = p.genus();
            match v {
                Some(s) => {
                    let gens = s.split(';').map(|t| parse_vec(t, 2 * g)).collect::<Result<Vec<_>, _>>()?;
                    let sub = Sublattice::new(g, gens).map_err(|e| Failure::Input(e.to_string()))?;
                    let member = classify::boundary_membership(&p, &sub)?;
                    Ok(Output {
                        value: json!({"sublattice": to_value(&sub), "member": member}),
                        summary: format!("member = {member}"),
                        negative: !member,
                        csv: None,
                    })
                }
                None => {
                    let scan = classify::boundary_scan(&p, cli.bound.unwrap_or(1))?;
                    let summary = format!(
                        "{} planes checked in the box of radius {}, {} members",
                        scan.planes_checked,
                        scan.bound,
                        scan.members.len()
                    );
                    Ok(Output::ok(to_value(&scan), summary))
                }
            }
        }
        Verb::Split => {
            let p = period()?;
            let out = classify::admissible_split(
                &p,
                cli.bound.unwrap_or(classify::DEFAULT_BOUND),
                cli.budget.unwrap_or(classify::DEFAULT_BUDGET),
            )?;
            let (negative, summary) = match &out {
                SplitOutcome::Split(s) => (false, format!("split with factor volume {}", s.v_character.volume())),
                SplitOutcome::Failure(f) => {
                    (true, format!("no split among {} candidates within bound {}", f.candidates_tested, f.bound))
                }
            };
            Ok(Output { value: to_value(&out), summary, negative, csv: None })
        }
        Verb::HurwitzEnum { d, g, torus_moves } => {
            let e = hurwitz::enumerate_orbits(*d, *g, *torus_moves)?;
            let summary = format!("{} raw tuples, {} classes, {} orbits", e.raw_tuples, e.classes, e.orbits.len());
            Ok(Output::ok(to_value(&e), summary))
        }
        Verb::HurwitzPeriod => {
            let md = monodromy()?;
            let cc = hurwitz::build_cover(&md)?;
            let cp = hurwitz::cover_period(&cc)?;
            let sig = hurwitz::pair_signature(&cp.alpha, &cp.beta)?;
            let pairs: Vec<(i64, i64)> = cp.alpha.iter().zip(&cp.beta).map(|(&x, &y)| (x, y)).collect();
            let p = PeriodCharacter::from_ints(cp.genus, &pairs)?;
            let summary = format!("genus {}, omega(alpha, beta) = {}", cp.genus, sig.d);
            Ok(Output::ok(
                json!({
                    "cells": {"vertices": cc.num_vertices(), "edges": cc.num_edges(), "faces": cc.num_faces(),
                              "euler_characteristic": cc.euler_characteristic()},
                    "periods": to_value(&cp),
                    "signature": to_value(&sig),
                    "character": io::period_to_json(&p),
                }),
                summary,
            ))
        }
        Verb::HurwitzAudit { torus_moves } => {
            let md = monodromy()?;
            let sig = |m: &MonodromyDatum| -> Result<hurwitz::PairSignature, Failure> {
                let cp = hurwitz::cover_period(&hurwitz::build_cover(m)?)?;
                Ok(hurwitz::pair_signature(&cp.alpha, &cp.beta)?)
            };
            let s0 = sig(&md)?;
            let n = md.n();
            let mut moves: Vec<(String, Result<MonodromyDatum, HurwitzError>)> = Vec::new();
            for i in 1..n {
                moves.push((format!("hurwitz {i}"), md.hurwitz_move(i)));
                moves.push((format!("hurwitz^-1 {i}"), md.hurwitz_move_inv(i)));
            }
            for i in 1..=n {
                moves.push((format!("push A {i}"), md.point_push(i, PushDirection::A)));
                moves.push((format!("push B {i}"), md.point_push(i, PushDirection::B)));
            }
            if *torus_moves {
                let [th, tv] = md.torus_twists();
                moves.push(("twist h".into(), Ok(th)));
                moves.push(("twist v".into(), Ok(tv)));
            }
            let mut failures = Vec::new();
            for (name, m) in &moves {
                let m = m.clone()?;
                if let Err(e) = m.validate() {
                    failures.push(json!({"move": name, "error": e.to_string()}));
                } else if sig(&m)? != s0 {
                    failures.push(json!({"move": name, "error": "pair signature changed"}));
                }
            }
            let consistent = failures.is_empty();
            Ok(Output {
                value: json!({
                    "genus": hurwitz::cover_genus(&md)?,
                    "signature": to_value(&s0),
                    "moves_checked": moves.len(),
                    "consistent": consistent,
                    "failures": failures,
                }),
                summary: format!("{} moves checked, consistent = {consistent}", moves.len()),
                negative: !consistent,
                csv: None,
            })
        }
        Verb::G2flow { t, h, every, format, mutant, nodes, demo } => {
            let s0 = if *demo {
                FlowState::demo()
            } else {
                serde_json::from_str(&read_input(&cli.input)?).map_err(|e| Failure::Input(format!("flow state: {e}")))?
            };
            let field = if *mutant { Field::FlippedA } else { Field::Isoperiodic };
            let cfg = QuadratureConfig { nodes: *nodes, ..QuadratureConfig::default() };
            let rep = g2flow::drift_report(field, &s0, *t, *h, *every, &Guards::default(), &cfg)?;
            if let Some(tol) = cli.tol {
                if rep.max_relative_drift > tol {
                    return Err(Failure::Numeric(format!("relative drift {:e} exceeds {tol:e}", rep.max_relative_drift)));
                }
            }
            let summary = format!("{} steps, max relative drift {:e}", rep.steps, rep.max_relative_drift);
            let csv = (*format == Format::Csv).then(|| rep.to_csv());
            Ok(Output { value: to_value(&rep), summary, negative: false, csv })
        }
        Verb::OrbitWalk { steps, format } => {
            let w = classify::orbit_walk(&period()?, *steps, cli.seed)?;
            let csv = (*format == Format::Csv).then(|| w.to_csv());
            Ok(Output { value: to_value(&w), summary: format!("{steps} steps, seed {}", cli.seed), negative: false, csv })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Some(csv) = &out.csv {
                print!("{csv}");
            } else if cli.pretty {
                println!("{}", out.summary);
                println!("{}", serde_json::to_string_pretty(&out.value).expect("json"));
            } else {
                println!("{}", out.value);
            }
            ExitCode::from(if out.negative { 2 } else { 0 })
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric failure: {m}");
            ExitCode::from(3)
        }
    }
}
