mod common;

use common::*;
use isoperiodic::classify::classify_orbit_closure;
use isoperiodic::hurwitz::{build_cover, cover_period, enumerate_orbits, pair_signature, MonodromyDatum, PushDirection};
use isoperiodic::io::{parse_period, period_to_json};
use isoperiodic::scalar::parse_quadreal;
use isoperiodic::symplattice::{self, SpMatrix};
use isoperiodic::{FieldDesc, QuadReal};
use proptest::prelude::*;
use rand::Rng;
use std::sync::OnceLock;

fn quad(a: i64, b: i64, c: i64, d: u64) -> QuadReal {
    let f = FieldDesc::quadratic(d).unwrap();
    QuadReal::from_ints(a, b, f).scale_rational(&num_rational::BigRational::new(1.into(), c.into()))
}

fn quad_strategy() -> impl Strategy<Value = QuadReal> {
    (-50i64..=50, -50i64..=50, 1i64..=12, prop::sample::select(vec![2u64, 3, 5, 6, 7])).prop_map(|(a, b, c, d)| quad(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadreal_text_round_trip(x in quad_strategy()) {
        prop_assert_eq!(parse_quadreal(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn quadreal_field_axioms(x in quad_strategy(), y in quad_strategy()) {
        let y = if y.field() == x.field() { y } else { QuadReal::from_int(3) };
        let s = x.try_add(&y).unwrap();
        prop_assert_eq!(s.try_add(&y.scale_int(-1)).unwrap(), x.clone());
        if !y.is_zero() {
            prop_assert_eq!(x.try_mul(&y).unwrap().try_div(&y).unwrap(), x.clone());
        }
        prop_assert_eq!(x.norm(), x.try_mul(&x.galois()).unwrap().rat().clone());
        let approx = x.to_f64();
        if approx.abs() > 1e-9 {
            prop_assert_eq!(x.sign() as f64, approx.signum());
        }
    }

    #[test]
    fn volume_sp_invariant_and_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(2..=3);
        let c = random_int_char(&mut r, g, 2);
        let p = c.character();
        let gamma = random_sp(&mut r, g, 5);
        prop_assert_eq!(p.apply_sp(&gamma).unwrap().volume(), p.volume());
        let k = [-3i64, -2, -1, 1, 2, 3][r.gen_range(0..6)];
        let scaled = [[QuadReal::from_int(k), QuadReal::zero()], [QuadReal::zero(), QuadReal::from_int(k)]];
        prop_assert_eq!(p.apply_gl2(&scaled).unwrap().volume(), p.volume().scale_int(k * k));
    }

    #[test]
    fn haupt_routes_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let case = random_lattice_case(&mut r);
        let h = case.character().is_haupt().unwrap();
        prop_assert_eq!(h.haupt, case.volume_units() != case.covolume_units());
        prop_assert_eq!(h.covolume_route == isoperiodic::periods::HauptClause::Holds, h.kernel_route == isoperiodic::periods::HauptClause::Holds);
    }

    #[test]
    fn classification_sp_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(2..=3);
        let d = [2, 3, 5][r.gen_range(0..3)];
        let p = random_int_char(&mut r, g, d).character();
        let gamma = random_sp(&mut r, g, 4);
        let q = p.apply_sp(&gamma).unwrap();
        match (classify_orbit_closure(&p), classify_orbit_closure(&q)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.case_name(), b.case_name());
                prop_assert!(a.verify(&p));
                prop_assert!(b.verify(&q));
            }
            (Err(a), Err(b)) => prop_assert_eq!(std::mem::discriminant(&a), std::mem::discriminant(&b)),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn line_rank_matches_box_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(2..=3);
        let d = [2, 3][r.gen_range(0..2)];
        let c = random_int_char_with(&mut r, g, d, 1, 0.5);
        let p = c.character();
        if p.volume().is_positive() {
            let lr = p.line_rank().unwrap();
            prop_assert_eq!(lr.r, line_rank_oracle(&c, 2));
        }
    }

    #[test]
    fn line_rank_matches_box_four_genus_two(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = [2, 3][r.gen_range(0..2)];
        let c = random_int_char_with(&mut r, 2, d, 2, 0.3);
        let p = c.character();
        if p.volume().is_positive() {
            let lr = p.line_rank().unwrap();
            let w = p.line_preimage(&lr.witness_direction);
            prop_assert_eq!(w.rank(), lr.r);
            let images: Vec<[i64; 4]> = w.gens().iter().map(|v| c.eval(v)).collect();
            let on_line = images.iter().find(|x| **x != [0; 4]).unwrap();
            for x in &images {
                prop_assert_eq!(c.cross(x, on_line), (0, 0));
            }
            let reach = w.gens().iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
            prop_assume!(reach <= 10);
            prop_assert_eq!(lr.r, line_rank_oracle(&c, reach.max(4)));
        }
    }

    #[test]
    fn heisenberg_group_law(
        phi in prop::collection::vec(-5i64..=5, 4),
        psi in prop::collection::vec(-5i64..=5, 4),
        al in -5i64..=5,
        be in -5i64..=5,
    ) {
        let m1 = symplattice::heis_m(3, &phi, al).unwrap();
        let m2 = symplattice::heis_m(3, &psi, be).unwrap();
        let sum: Vec<i64> = phi.iter().zip(&psi).map(|(x, y)| x + y).collect();
        let m12 = symplattice::heis_m(3, &sum, al + be + symplattice::heis_omega(&phi, &psi)).unwrap();
        prop_assert_eq!(&m1 * &m2, m12);
        prop_assert_eq!(symplattice::heis_omega(&phi, &psi), -symplattice::heis_omega(&psi, &phi));
    }

    #[test]
    fn completion_and_chain(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(2..=4);
        let a = random_primitive(&mut r, 2 * g, 6);
        let basis = symplattice::symplectic_complete(&a).unwrap();
        prop_assert_eq!(&basis[0], &a);
        for i in 0..g {
            prop_assert_eq!(omega(&basis[2 * i], &basis[2 * i + 1]), 1);
            for j in 0..g {
                if i != j {
                    prop_assert_eq!(omega(&basis[2 * i], &basis[2 * j]), 0);
                    prop_assert_eq!(omega(&basis[2 * i], &basis[2 * j + 1]), 0);
                    prop_assert_eq!(omega(&basis[2 * i + 1], &basis[2 * j + 1]), 0);
                }
            }
        }
        let w4 = basis[2 * g - 2].clone();
        let (w2, w3) = symplattice::primitive_chain(&a, &w4).unwrap();
        prop_assert_eq!((omega(&a, &w2), omega(&w2, &w3), omega(&w3, &w4)), (1, 1, 1));
    }

    #[test]
    fn transvection_is_symplectic(v in prop::collection::vec(-4i64..=4, 6)) {
        prop_assume!(content(&v) == 1);
        let t = symplattice::transvection(&v).unwrap();
        prop_assert!(SpMatrix::new(t.entries().to_vec()).is_ok());
        prop_assert_eq!(&t * &t.inverse(), SpMatrix::identity(3));
        prop_assert_eq!(t.apply(&v).unwrap(), v);
    }

    #[test]
    fn pair_signature_sp_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(2..=3);
        let (alpha, beta) = loop {
            let a = random_vector(&mut r, 2 * g, 3);
            let b = random_vector(&mut r, 2 * g, 3);
            if omega(&a, &b) > 0 {
                break (a, b);
            }
        };
        let gamma = random_sp(&mut r, g, 5);
        let s0 = pair_signature(&alpha, &beta).unwrap();
        let s1 = pair_signature(&gamma.apply(&alpha).unwrap(), &gamma.apply(&beta).unwrap()).unwrap();
        prop_assert_eq!(s0, s1);
    }

    #[test]
    fn period_json_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(1..=3);
        let d = [2, 3, 5][r.gen_range(0..3)];
        let p = random_int_char(&mut r, g, d).character();
        let text = period_to_json(&p).to_string();
        prop_assert_eq!(parse_period(&text).unwrap(), p);
    }
}

fn degree_three_reps() -> &'static [MonodromyDatum] {
    static REPS: OnceLock<Vec<MonodromyDatum>> = OnceLock::new();
    REPS.get_or_init(|| enumerate_orbits(3, 2, false).unwrap().orbits.into_iter().map(|o| o.representative).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn braid_moves_preserve_signature(which in 0usize..8, moves in prop::collection::vec((0usize..4, 0usize..2), 1..8)) {
        let reps = degree_three_reps();
        let md0 = &reps[which % reps.len()];
        let sig = |md: &MonodromyDatum| {
            let cp = cover_period(&build_cover(md).unwrap()).unwrap();
            pair_signature(&cp.alpha, &cp.beta).unwrap()
        };
        let s0 = sig(md0);
        let mut md = md0.clone();
        for (kind, i) in moves {
            let i = i % (md.n() - 1) + 1;
            md = match kind {
                0 => md.hurwitz_move(i).unwrap(),
                1 => md.hurwitz_move_inv(i).unwrap(),
                2 => md.point_push(i, PushDirection::A).unwrap(),
                _ => md.point_push(i, PushDirection::B).unwrap(),
            };
            prop_assert!(md.validate().is_ok());
        }
        prop_assert_eq!(sig(&md), s0);
        prop_assert_eq!(md.hurwitz_move(1).unwrap().hurwitz_move_inv(1).unwrap(), md);
    }
}
