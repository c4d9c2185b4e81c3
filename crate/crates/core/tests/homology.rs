mod common;

use common::*;
use dpgrid::grid::{enumerate_states, gradings};
use dpgrid::harness::{run_script, MoveScript};
use dpgrid::homology::{
    binomial, compare_modules, default_window, grid_complex, homology_table, homology_table_with, induced_action,
    slice_basis, vpromotion_compare, Action, FreeComplex, HomologyTable, Route, Window,
};
use dpgrid::{Error, GridDiagram, Theory};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table(g: &GridDiagram, theory: Theory, route: Route) -> HomologyTable {
    let c = grid_complex(g, theory);
    homology_table(&c, default_window(&c), route)
}

#[test]
fn unknot_minus_is_the_u_tower() {
    let t = table(&u2(), Theory::Minus, Route::Collapsed);
    assert_eq!(t.window, Window::new(-9, 6, -4, 0));
    for (d, s) in t.window.points() {
        let expect = usize::from(d == 2 * s);
        assert_eq!(t.dim(d, s), expect, "({d}, {s})");
        // ranks are taken into the full target group, inside the window or not
        for p in 1..=3u32 {
            assert_eq!(t.u_rank(d, s, p), expect);
            assert_eq!(t.v_rank(d, s, p), 0);
        }
    }
    for k in 0..=3 {
        assert_eq!(t.dim(-2 * k, -k), 1);
    }
    assert_eq!(t.u_rank(0, 0, 1), 1);
}

#[test]
fn unknot_bullet_is_the_uv_tower() {
    let t = table(&u2(), Theory::Bullet, Route::Collapsed);
    for (d, s) in t.window.points() {
        let expect = usize::from(s <= 0 && d % 2 == 0 && d >= 2 * s);
        assert_eq!(t.dim(d, s), expect, "({d}, {s})");
        for p in 1..=3u32 {
            assert_eq!(t.v_rank(d, s, p), expect);
            assert_eq!(t.u_rank(d, s, p), expect);
        }
    }
    for k in 0..=3 {
        for m in 0..=3 {
            assert_eq!(t.dim(-2 * k + 2 * m, -k), 1);
        }
    }
}

/// The default window cut down to the top five Alexander gradings, where the
/// direct route stays cheap.
fn top_window(c: &FreeComplex) -> Window {
    let w = default_window(c);
    Window { s0: w.s1 - 4, ..w }
}

#[test]
fn routes_agree() {
    for theory in [Theory::Minus, Theory::Bullet] {
        assert_eq!(table(&u2(), theory, Route::Direct), table(&u2(), theory, Route::Collapsed), "{theory:?}");
        let c = grid_complex(&t5(), theory);
        let w = top_window(&c);
        let direct = homology_table(&c, w, Route::Direct);
        assert!(!direct.dims.is_empty());
        assert_eq!(direct, homology_table(&c, w, Route::Collapsed), "{theory:?}");
    }
}

#[test]
fn u_action_is_independent_of_the_variable() {
    let g = t5();
    for theory in [Theory::Minus, Theory::Bullet] {
        let c = grid_complex(&g, theory);
        let w = top_window(&c);
        let reference = homology_table_with(&c, w, Route::Direct, 0);
        assert!(!reference.u_ranks.is_empty());
        for i in 1..g.n() {
            assert_eq!(homology_table_with(&c, w, Route::Direct, i), reference, "V{i}");
        }
    }
}

#[test]
fn v_action_needs_v() {
    let c = grid_complex(&u2(), Theory::Minus);
    assert_eq!(induced_action(&c, Action::V, 0, 0, 1), Err(Error::VNotPresent));
    assert_eq!(induced_action(&c, Action::U(1), 0, 0, 1), Ok(1));
}

#[test]
fn slice_census_matches_closed_form() {
    for g in [u2(), t5()] {
        let n = g.n() as u64;
        let grades: Vec<(i64, i64)> = enumerate_states(&g).iter().map(|x| gradings(&g, x)).collect();
        for theory in [Theory::Minus, Theory::Bullet] {
            let c = grid_complex(&g, theory);
            for (d, s) in default_window(&c).points() {
                let mut expect = 0;
                for &(m, a) in &grades {
                    let j = a - s;
                    if j < 0 {
                        continue;
                    }
                    let shift = d - (m - 2 * j);
                    let ok = match theory {
                        Theory::Minus => shift == 0,
                        Theory::Bullet => shift >= 0 && shift % 2 == 0,
                    };
                    if ok {
                        expect += binomial(j as u64 + n - 1, n - 1) as usize;
                    }
                }
                assert_eq!(slice_basis(&c, d, s).len(), expect, "{theory:?} ({d}, {s})");
            }
        }
    }
}

#[test]
fn euler_characteristic_of_minus_slices() {
    for g in [u2(), t5()] {
        let n = g.n() as u64;
        let grades: Vec<(i64, i64)> = enumerate_states(&g).iter().map(|x| gradings(&g, x)).collect();
        let c = grid_complex(&g, Theory::Minus);
        let ((m0, m1), (a0, a1)) = c.grading_bounds().unwrap();
        let s0 = a0 - 2;
        let w = Window::new(m0 - 2 * (a1 - s0) - 1, m1 + 1, s0, a1);
        let t = homology_table(&c, w, Route::Collapsed);
        for s in s0..=a1 {
            let from_homology: i64 =
                (w.d0..=w.d1).map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * t.dim(d, s) as i64).sum();
            let from_states: i64 = grades
                .iter()
                .filter(|&&(_, a)| a >= s)
                .map(|&(m, a)| {
                    let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
                    sign * binomial((a - s) as u64 + n - 1, n - 1) as i64
                })
                .sum();
            assert_eq!(from_homology, from_states, "s = {s}");
        }
    }
}

#[test]
fn table_json_round_trip_and_order() {
    let t = table(&t5(), Theory::Bullet, Route::Collapsed);
    let v = t.to_json();
    assert_eq!(HomologyTable::from_json(&v).unwrap(), t);
    let keys: Vec<(i64, i64)> =
        v["dims"].as_array().unwrap().iter().map(|e| (e["s"].as_i64().unwrap(), e["d"].as_i64().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let csv = t.to_csv();
    assert!(csv.starts_with("kind,d,s,power,value\n"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("dim,")).count(), t.dims.len());
}

#[test]
fn compare_modules_contract() {
    let a = table(&u2(), Theory::Bullet, Route::Collapsed);
    assert!(compare_modules(&a, &a).unwrap().equal);
    let b = a.restricted(Window::new(-2, 2, -1, 0));
    assert_eq!(compare_modules(&a, &b), Err(Error::WindowMismatch));
    let mut c = a.clone();
    c.dims.insert((0, 0), 2);
    let v = compare_modules(&a, &c).unwrap();
    assert!(!v.equal);
    let d = v.first_discrepancy.unwrap();
    assert_eq!((d.kind.as_str(), d.d, d.s, d.left, d.right), ("dim", 0, 0, 1, 2));
}

#[test]
fn empty_window_gives_empty_tables() {
    let r = vpromotion_compare(&u2(), Window::empty(), Route::Collapsed);
    assert!(r.verdict.equal && r.promoted.dims.is_empty() && r.bullet.dims.is_empty());
    let empty = FreeComplex { nvars: 2, has_v: true, gens: vec![], diff: vec![] };
    assert!(homology_table(&empty, Window::new(-2, 2, -2, 2), Route::Direct).dims.is_empty());
}

#[test]
fn v_promotion_of_the_unknot_matches() {
    let g = u2();
    let w = default_window(&grid_complex(&g, Theory::Bullet));
    assert!(vpromotion_compare(&g, w, Route::Collapsed).verdict.equal);
    assert!(vpromotion_compare(&g, w, Route::Direct).verdict.equal);
}

// Recorded outcome for the trefoil: the promoted minus table agrees with the
// bullet table on the default window.
#[test]
fn v_promotion_of_the_trefoil_is_frozen() {
    let g = t5();
    let w = default_window(&grid_complex(&g, Theory::Bullet));
    let r = vpromotion_compare(&g, w, Route::Collapsed);
    assert!(r.verdict.equal, "{:?}", r.verdict);
    assert_eq!(r.bullet.dims.len(), r.promoted.dims.len());
}

#[test]
fn trefoil_invariance_under_a_script() {
    let t6_script = MoveScript::from_json(r#"[{"op":"commute_cols","i":0}]"#).unwrap();
    let end = run_script(&t6(), &t6_script).unwrap().pop().unwrap();
    assert_ne!(end, t6());
    for theory in [Theory::Minus, Theory::Bullet] {
        let (a, b) = (grid_complex(&t5(), theory), grid_complex(&end, theory));
        let w = default_window(&a).hull(&default_window(&b));
        let (ta, tb) = (homology_table(&a, w, Route::Collapsed), homology_table(&b, w, Route::Collapsed));
        assert!(compare_modules(&ta, &tb).unwrap().equal, "{theory:?}");
        assert!(!ta.u_ranks.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn tables_are_basis_independent(seed in any::<u64>()) {
        let g = t5();
        for theory in [Theory::Minus, Theory::Bullet] {
            let c = grid_complex(&g, theory);
            let mut perm: Vec<usize> = (0..c.len()).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let p = c.permuted(&perm);
            let w = top_window(&c);
            prop_assert!(p.squares_to_zero());
            for route in [Route::Direct, Route::Collapsed] {
                prop_assert_eq!(homology_table(&p, w, route), homology_table(&c, w, route));
            }
        }
    }
}
