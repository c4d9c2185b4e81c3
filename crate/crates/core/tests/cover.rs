mod common;

use common::*;
use dpgrid::cover::{
    build_cover, compose_domains, differential4, differential4_elem, domain_mults, enumerate_rect_classes, h_xi,
    h_xi_elem, j4, point_measure, rect_classes_between, rect_classes_from, CoverDiagram, MValue, Quarter,
    RectClass4,
};
use dpgrid::grid::{differential, enumerate_states, gradings, monomial_gradings, rectangles};
use dpgrid::harness::random_knots;
use dpgrid::{ChainElement, GridDiagram, GridState, Monomial, Theory};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn st(rows: &[usize]) -> GridState {
    GridState::from_rows(rows).unwrap()
}

fn o_sum(r: &RectClass4) -> i64 {
    r.o_mult.iter().map(|&v| v as i64).sum()
}

fn x_sum(r: &RectClass4) -> i64 {
    r.x_mult.iter().map(|&v| v as i64).sum()
}

#[test]
fn lifts_fill_each_row_and_column_twice() {
    for g in [u2(), t5(), t6()] {
        let c = build_cover(&g);
        let n = g.n();
        assert_eq!(c.side(), 2 * n);
        for lifts in [(0..n).map(|i| *c.o_lifts(i)).collect::<Vec<_>>(), (0..n).map(|i| *c.x_lifts(i)).collect()] {
            for line in 0..2 * n {
                assert_eq!(lifts.iter().flatten().filter(|p| p.0 == line).count(), 2);
                assert_eq!(lifts.iter().flatten().filter(|p| p.1 == line).count(), 2);
            }
        }
        for i in 0..n {
            for &p in c.o_lifts(i) {
                assert_eq!(c.project(p), (i, g.o(i)));
            }
            for &p in c.x_lifts(i) {
                assert_eq!(c.project(p), (i, g.x(i)));
            }
        }
    }
}

#[test]
fn unknot_cover_examples() {
    let c = build_cover(&u2());
    let (id, sw) = (st(&[0, 1]), st(&[1, 0]));
    let classes = enumerate_rect_classes(&c, &id, &sw);
    assert_eq!(classes.len(), 8);
    let free: Vec<_> = classes.iter().filter(|r| r.x_free()).collect();
    assert_eq!(free.len(), 2);
    assert!(free.iter().all(|r| r.w == 1 && r.h == 1 && r.m_value == MValue::Defined(0)));

    let squares = enumerate_rect_classes(&c, &sw, &sw);
    assert_eq!(squares.len(), 2);
    for r in &squares {
        assert_eq!((r.w, r.h), (2, 2));
        assert_eq!((r.o_mult.clone(), r.x_mult.clone(), r.m_value), (vec![1, 1], vec![1, 1], MValue::Undefined));
    }

    // point measure of a unit-cell lift
    let unit = free[0];
    let d = c.rect_domain(unit);
    assert_eq!(point_measure(&c, &id, &d), Quarter(2));
    assert_eq!(point_measure(&c, &sw, &d), Quarter(2));
    let base_m = rectangles(c.base(), &id, &sw).iter().find(|r| r.sw == unit.sw).unwrap().m;
    assert_eq!(base_m, 0);

    // 3 wide, 1 tall
    let wide = classes.iter().find(|r| r.w == 3 && r.h == 1).expect("3x1 class");
    assert_eq!(wide.m_value, MValue::Defined(1));
    assert_eq!(c.rect_domain(wide).m_value(&c), Some(1));

    // composite of two unit cells id → sw → id
    let back = rect_classes_between(&c, &sw, &id).into_iter().find(|r| r.w == 1 && r.h == 1).unwrap();
    let comp = compose_domains(&c, unit, &back).unwrap();
    let (o, x) = domain_mults(&c, &comp);
    // the return cell necessarily carries an X, so only one O is covered
    assert_eq!((o.iter().sum::<i32>(), x.iter().sum::<i32>()), (1, 1));
    assert_eq!(comp.m_value(&c), Some(0));

    assert!(point_measure(&c, &id, &dpgrid::cover::Domain4::zero(4, id.clone(), id.clone())) == Quarter(0));
}

#[test]
fn long_edges_meet_an_x() {
    for g in [u2(), t5()] {
        let c = build_cover(&g);
        for x in enumerate_states(&g) {
            for r in rect_classes_from(&c, &x) {
                if r.w >= g.n() || r.h >= g.n() {
                    assert!(r.x_total() >= 1);
                }
            }
        }
    }
}

fn brute_vs_fast(g: &GridDiagram, xs: &[GridState]) {
    let c = build_cover(g);
    let n = g.n();
    for x in xs {
        for y in enumerate_states(g) {
            let brute = enumerate_rect_classes(&c, x, &y);
            let mut fast = rect_classes_between(&c, x, &y);
            fast.sort();
            let mut b = brute.clone();
            b.sort();
            assert_eq!(b, fast, "{} {x} -> {y}", g.to_json());
            let expected = match x.diff_columns(&y).len() {
                0 => n,
                2 => 8,
                _ => 0,
            };
            assert_eq!(brute.len(), expected);
        }
    }
}

#[test]
fn class_enumeration_agrees_with_literal_search() {
    let g3 = GridDiagram::new(vec![0, 1, 2], vec![1, 2, 0]).unwrap();
    let g4 = GridDiagram::new(vec![0, 1, 2, 3], vec![2, 3, 1, 0]).unwrap();
    for g in [u2(), g3, g4] {
        brute_vs_fast(&g, &enumerate_states(&g));
    }
    let g = t5();
    let sample: Vec<GridState> = enumerate_states(&g).into_iter().step_by(17).collect();
    brute_vs_fast(&g, &sample);
}

#[test]
fn grading_lemma_for_every_class() {
    for g in [u2(), t5(), t6()] {
        let c = build_cover(&g);
        let n = g.n() as i64;
        for x in enumerate_states(&g) {
            let (mx, ax) = gradings(&g, &x);
            for r in rect_classes_from(&c, &x) {
                let (my, ay) = gradings(&g, &r.to4);
                let twice_m = match r.m_value {
                    MValue::Defined(m) => {
                        assert_ne!(r.from4, r.to4);
                        2 * m as i64
                    }
                    MValue::Undefined => {
                        assert_eq!(r.from4, r.to4);
                        assert!(r.x_total() >= 1);
                        2 * n - 1
                    }
                };
                assert_eq!(mx - my, 1 - 2 * o_sum(&r) + twice_m, "{} {r:?}", g.to_json());
                assert_eq!(ax - ay, x_sum(&r) - o_sum(&r));
            }
        }
    }
}

#[test]
fn short_classes_are_lifts_of_base_rectangles() {
    let g = t5();
    let c = build_cover(&g);
    for x in enumerate_states(&g) {
        for r in rect_classes_from(&c, &x) {
            if r.from4 == r.to4 {
                continue;
            }
            let base = rectangles(&g, &x, &r.to4);
            let hit = base.iter().find(|b| b.sw == r.sw && b.w == r.w && b.h == r.h);
            assert_eq!(hit.is_some(), r.w < g.n() && r.h < g.n());
            if let Some(b) = hit {
                assert_eq!(b.o_mult, r.o_mult);
                assert_eq!(b.x_mult, r.x_mult);
                assert_eq!(MValue::Defined(b.m), r.m_value);
            }
        }
    }
}

#[test]
fn point_measure_is_translation_invariant() {
    let g = t5();
    let c = build_cover(&g);
    let n = g.n();
    for x in enumerate_states(&g).iter().step_by(5) {
        for r in rect_classes_from(&c, x) {
            let d = c.rect_domain(&r);
            for w in [&r.from4, &r.to4] {
                let p = point_measure(&c, w, &d);
                for (dc, dr) in [(n, 0), (0, n), (n, n)] {
                    let t = d.translated(dc, dr);
                    assert_eq!(point_measure(&c, w, &t), p);
                    assert_eq!(domain_mults(&c, &t), domain_mults(&c, &d));
                }
            }
        }
    }
}

/// Composable pairs over T5₄ drawn from a fixed seed.
fn additivity_trials(count: usize, seed: u64) -> usize {
    let g = t5();
    let c = build_cover(&g);
    let states = enumerate_states(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < count {
        let x = states.choose(&mut rng).unwrap();
        let first: Vec<_> = rect_classes_from(&c, x).into_iter().filter(|r| r.from4 != r.to4).collect();
        let a = first.choose(&mut rng).unwrap();
        let second: Vec<_> = rect_classes_from(&c, &a.to4).into_iter().filter(|r| r.from4 != r.to4).collect();
        let b = &second[rng.gen_range(0..second.len())];
        let comp = compose_domains(&c, a, b).unwrap();
        let (ma, mb) = (a.m_value.defined().unwrap() as i64, b.m_value.defined().unwrap() as i64);
        assert_eq!(comp.m_value(&c), Some(ma + mb), "{a:?} * {b:?}");
        let (oc, xc) = domain_mults(&c, &comp);
        for i in 0..g.n() {
            assert_eq!(oc[i], (a.o_mult[i] + b.o_mult[i]) as i32);
            assert_eq!(xc[i], (a.x_mult[i] + b.x_mult[i]) as i32);
        }
        checked += 1;
    }
    checked
}

#[test]
fn point_measure_is_additive() {
    assert_eq!(additivity_trials(12_000, 4), 12_000);
}

fn u2_id_sw() -> (GridState, GridState) {
    (st(&[0, 1]), st(&[1, 0]))
}

#[test]
fn cover_differential_examples() {
    let c = build_cover(&u2());
    let (id, sw) = u2_id_sw();
    let expected: ChainElement =
        [Monomial::new(sw.clone(), vec![1, 0], 0), Monomial::new(sw.clone(), vec![0, 1], 0)].into_iter().collect();
    assert_eq!(differential4(&c, &id), expected);
    assert!(differential4(&c, &sw).is_zero());
    assert_eq!(j4(&expected), expected);
}

#[test]
fn cover_differential_squares_to_zero_and_has_degree() {
    for g in [u2(), t5(), t6()] {
        let c = build_cover(&g);
        for x in enumerate_states(&g) {
            let d = differential4(&c, &x);
            assert!(differential4_elem(&c, &d).is_zero());
            let (m, a) = gradings(&g, &x);
            for t in &d {
                assert_eq!(monomial_gradings(&g, t), (m - 1, a));
            }
        }
    }
}

#[test]
fn j4_intertwines_differentials() {
    let mut diagrams = vec![u2(), t5()];
    diagrams.extend(random_knots(6, &[3, 4, 5], 3));
    for g in &diagrams {
        let c = build_cover(g);
        for x in enumerate_states(g) {
            let gen = ChainElement::generator(x.clone(), g.n());
            assert_eq!(
                differential4_elem(&c, &j4(&gen)),
                j4(&differential(g, Theory::Bullet, &x)),
                "{} {x}",
                g.to_json()
            );
        }
    }
}

#[test]
fn h_xi_example() {
    let c = build_cover(&u2());
    let (id, sw) = u2_id_sw();
    assert!(h_xi(&c, 1, &sw).iter().any(|t| *t == Monomial::new(id.clone(), vec![0, 0], 0)));
}

fn v_homotopy_holds(c: &CoverDiagram) {
    let g = c.base();
    let n = g.n();
    for i in 0..n {
        let (a, b) = g.consecutive_pair(i);
        for x in enumerate_states(g) {
            let lhs = differential4_elem(c, &h_xi(c, i, &x)).add(&h_xi_elem(c, i, &differential4(c, &x)));
            let rhs = ChainElement::generator(x.clone(), n).times_sum_of_vars(a, b);
            assert_eq!(lhs, rhs, "{} X{i} {x}", g.to_json());
            let (m, al) = gradings(g, &x);
            for t in &h_xi(c, i, &x) {
                assert_eq!(monomial_gradings(g, t), (m - 1, al - 1));
            }
        }
    }
}

#[test]
fn consecutive_variables_are_homotopic() {
    v_homotopy_holds(&build_cover(&u2()));
    v_homotopy_holds(&build_cover(&t5()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_diagrams_satisfy_cover_identities(seed in any::<u64>(), n in 3usize..=5) {
        let g = &random_knots(1, &[n], seed)[0];
        let c = build_cover(g);
        for x in enumerate_states(g) {
            prop_assert!(differential4_elem(&c, &differential4(&c, &x)).is_zero());
            let gen = ChainElement::generator(x.clone(), n);
            prop_assert_eq!(differential4_elem(&c, &j4(&gen)), differential(g, Theory::Bullet, &x));
        }
        v_homotopy_holds(&c);
    }

    #[test]
    fn additivity_on_other_seeds(seed in any::<u64>()) {
        prop_assert_eq!(additivity_trials(200, seed), 200);
    }
}
