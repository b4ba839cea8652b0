use liftcollapse::certificate::{build_certificate, extract_delta, DeltaOptions};
use liftcollapse::exact::{int, rat, RVector, Rational};
use liftcollapse::instances::{c3_orbit_spec, cropped_cube, knapsack_cover, library, parity, s3_orbit_spec, sts_group};
use liftcollapse::lp::{Inequality, Sense};
use liftcollapse::ls::{self, ls0_step_nonempty, step_at, Operator};
use liftcollapse::perm::{act_on_vector, reynolds_enumerated_stabilizer, reynolds_full, reynolds_stabilized, PermGroup};
use liftcollapse::polytope::{hull, HPolytope};
use liftcollapse::sa::{build_mk, check_local_consistency, sa_emptiness, SAVector};
use liftcollapse::subset::combinations;
use liftcollapse::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_unit(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=8i64);
    rat(rng.gen_range(0..=d), d)
}

fn small_instances(l: &Limits) -> Vec<(String, HPolytope, PermGroup)> {
    let mut v = vec![
        ("parity-3".to_string(), parity(3).unwrap(), PermGroup::symmetric(3)),
        ("cropped-2".to_string(), cropped_cube(2).unwrap(), PermGroup::symmetric(2)),
        ("cropped-3".to_string(), cropped_cube(3).unwrap(), PermGroup::symmetric(3)),
    ];
    for spec in [s3_orbit_spec(), c3_orbit_spec()] {
        let i = spec.build(l).unwrap();
        v.push((i.name, i.polytope, i.group));
    }
    v
}

#[test]
fn stabilizer_average_matches_enumeration() {
    let l = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut groups: Vec<PermGroup> = (2..=5).map(PermGroup::symmetric).collect();
    groups.push(sts_group(2).unwrap());
    for g in groups {
        let n = g.n();
        let degree = g.transitivity_degree(n, l.orbit_cap);
        for k in 0..degree {
            for s in combinations(n, k) {
                let x: RVector = (0..n).map(|_| rand_unit(&mut rng)).collect();
                let closed = reynolds_stabilized(&x, s, k).unwrap();
                assert_eq!(closed, reynolds_enumerated_stabilizer(&x, &g, s, l.group_cap).unwrap(), "n={n} S={s}");
            }
        }
    }
}

#[test]
fn local_consistency_matches_row_check() {
    let l = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let feasible = SAVector::level_symmetric(3, 1, &[int(1), rat(1, 2), rat(1, 8)]).unwrap();
    for (name, p, _) in small_instances(&l).into_iter().filter(|(_, p, _)| p.n() == 3) {
        let sys = build_mk(&p, 1, &l).unwrap();
        let base = sa_emptiness(&p, 1, &l).unwrap().witness;
        let (mut yes, mut no) = (0, 0);
        for trial in 0..60 {
            let mut e: RVector = (0..sys.ix.len()).map(|_| rand_unit(&mut rng)).collect();
            e[0] = int(1);
            let anchor = base.clone().unwrap_or_else(|| feasible.clone());
            let t = [int(1), rat(3, 4), rat(1, 2), int(0)][trial % 4].clone();
            let mixed: RVector =
                anchor.entries().iter().zip(&e).map(|(a, r)| &t * a + (int(1) - &t) * r).collect();
            let y = SAVector::from_entries(3, 1, mixed).unwrap();
            let rows_ok = sys.first_violated(&y).is_none();
            let lc = check_local_consistency(&y, &p, 1, &l).unwrap().holds;
            assert_eq!(rows_ok, lc, "{name}: disagreement on {y:?}");
            if rows_ok {
                yes += 1;
            } else {
                no += 1;
            }
        }
        assert!(no > 0, "{name}: no infeasible samples");
        if base.is_some() {
            assert!(yes > 0, "{name}: no feasible samples");
        }
    }
}

#[test]
fn implied_rows_do_not_change_emptiness() {
    let l = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, p, _) in small_instances(&l) {
        let rows = p.rows().to_vec();
        let mut a = vec![int(0); p.n()];
        let mut b = int(0);
        for r in &rows {
            let w = int(rng.gen_range(0..=2));
            for (ai, ri) in a.iter_mut().zip(&r.a) {
                *ai += &w * ri;
            }
            b += &w * &r.b;
        }
        let q = p.with_rows([Inequality::new(a, b)]).unwrap();
        for k in 0..=2.min(p.n()) {
            let before = sa_emptiness(&p, k, &l).unwrap().empty;
            assert_eq!(before, sa_emptiness(&q, k, &l).unwrap().empty, "{name} k={k}");
        }
    }
}

#[test]
fn witnesses_truncate_and_permute() {
    let l = Limits::default();
    for (name, p, g) in small_instances(&l) {
        for k in 1..=2.min(p.n()) {
            let d = sa_emptiness(&p, k, &l).unwrap();
            let Some(y) = d.witness else { continue };
            let lower = build_mk(&p, k - 1, &l).unwrap();
            assert!(lower.first_violated(&y.truncate(k - 1).unwrap()).is_none(), "{name} k={k}");
            for gen in g.generators() {
                let gy = y.permuted(gen).unwrap();
                assert!(d.system.first_violated(&gy).is_none(), "{name} k={k}: permuted witness");
            }
        }
    }
}

#[test]
fn step_lp_decides_closure_and_averages() {
    let l = Limits::default();
    for (name, p, g) in small_instances(&l) {
        for op in [Operator::Ls0, Operator::Ls] {
            let closure = ls::closure(&p, op, &l).unwrap();
            let step = match op {
                Operator::Ls0 => ls0_step_nonempty(&p, &l).unwrap(),
                Operator::Ls => ls::ls_step_nonempty(&p, &l).unwrap(),
            };
            let closure_nonempty = closure.is_feasible(&l.lp).unwrap().is_feasible();
            assert_eq!(closure_nonempty, !step.is_empty(), "{name} {op:?}");
            if let Some(y) = step.witness {
                let x = y.point();
                assert!(closure.contains(&x), "{name} {op:?}: witness point outside closure");
                let avg = reynolds_full(&x, &g, l.group_cap).unwrap();
                assert!(!step_at(&p, op, &avg, &l).unwrap().is_empty(), "{name} {op:?}: averaged point");
            }
        }
    }
}

#[test]
fn polytope_face_and_hull_properties() {
    let l = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, p, g) in small_instances(&l) {
        let f0 = p.intersects_all_faces(0, false, &l).unwrap().holds;
        assert_eq!(f0, p.is_feasible(&l.lp).unwrap().is_feasible(), "{name}");
        let mut prev = f0;
        for k in 1..=p.n() {
            let fk = p.intersects_all_faces(k, false, &l).unwrap().holds;
            assert!(!fk || prev, "{name}: faces do not nest at k={k}");
            prev = fk;
        }
        let v = p.vertices(&l).unwrap();
        let again = hull(&v, &l).unwrap().vertices(&l).unwrap();
        assert_eq!(v.point_set(), again.point_set(), "{name}: vertex round trip");
        for x in v.points() {
            for gen in g.generators() {
                assert!(p.contains(&act_on_vector(gen, x).unwrap()), "{name}: image of a vertex leaves P");
            }
        }
        for _ in 0..5 {
            let c: RVector = (0..p.n()).map(|_| int(rng.gen_range(-3..=3))).collect();
            let lp = p.optimize(&c, Sense::Min, &l.lp).unwrap().value.unwrap();
            let brute = v.points().iter().map(|x| liftcollapse::exact::dot(&c, x)).min().unwrap();
            assert_eq!(lp, brute, "{name}: LP optimum differs from vertex minimum");
        }
    }
}

#[test]
fn certificate_independent_of_pivot_order() {
    let l = Limits::default();
    let forward = DeltaOptions::default();
    let backward = DeltaOptions { reverse_rows: true, ..DeltaOptions::default() };
    let p = parity(5).unwrap();
    for k in 0..=2 {
        let a = build_certificate(&p, k, &forward, &l).unwrap();
        let b = build_certificate(&p, k, &backward, &l).unwrap();
        assert_eq!(a.extraction.delta, b.extraction.delta, "parity k={k}");
    }
    // on the cropped cube Delta is not unique, yet both certificates verify
    let c = cropped_cube(3).unwrap();
    for opts in [&forward, &backward] {
        let cert = build_certificate(&c, 1, opts, &l).unwrap();
        assert!(cert.checks.iter().all(|ch| ch.passed));
    }
}

#[test]
fn faces_imply_certificate_on_library() {
    let l = Limits::default();
    let mut built = 0;
    for spec in library() {
        let inst = spec.build(&l).unwrap();
        let p = &inst.polytope;
        let n = p.n();
        let integral = !p.is_integer_empty(&l).unwrap();
        let degree = inst.group.transitivity_degree(n, l.orbit_cap);
        for k in 0..degree.min(n) {
            if n > 6 && k > 1 {
                break;
            }
            if !p.intersects_all_faces(k, true, &l).unwrap().holds {
                assert!(extract_delta(p, k, &DeltaOptions::default(), &l).is_err());
                continue;
            }
            let opts = DeltaOptions {
                objective: inst.objective.clone().filter(|_| integral),
                allow_integral: integral,
                reverse_rows: false,
            };
            let cert = build_certificate(p, k, &opts, &l).unwrap_or_else(|e| panic!("{} k={k}: {e}", inst.name));
            assert!(sa_emptiness(p, k, &l).unwrap().system.first_violated(&cert.ybar).is_none());
            built += 1;
        }
    }
    assert!(built >= 10, "only {built} certificates built");
    let kc = knapsack_cover(8).unwrap();
    let opts = DeltaOptions { objective: Some(vec![int(1); 8]), allow_integral: true, reverse_rows: false };
    let c = build_certificate(&kc, 3, &opts, &l).unwrap();
    assert_eq!(c.extraction.delta, vec![rat(1, 4), rat(1, 5), int(0), int(0)]);
}
