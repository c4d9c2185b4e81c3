mod common;

use common::*;
use dpgrid::cover::{build_cover, h_xi};
use dpgrid::grid::{enumerate_states, gradings, monomial_gradings};
use dpgrid::harness::random_knots;
use dpgrid::homology::{compare_modules, default_window, grid_complex, homology_table, Route};
use dpgrid::stab::{
    cone_of_splitting, cone_promoted, d_block, destabilize, destabilize_at, e4, e4_elem, e4_inverse, h_x2_i4,
    promoted_differential, splitting, stab_homotopy, stabilization_identities, stabilize_xsw, StabHomotopy,
    Summand,
};
use dpgrid::{ChainElement, Error, GridDiagram, Theory};
use proptest::prelude::*;

#[test]
fn stabilized_unknot_splits_two_and_four() {
    let (gp, labels) = stabilize_xsw(&u2(), 0).unwrap();
    assert_eq!(gp.n(), 3);
    let sp = splitting(&gp, &labels);
    assert_eq!((sp.i_states.len(), sp.n_states.len()), (2, 4));
}

#[test]
fn trefoil_stabilizes_to_the_six_fixture() {
    assert_eq!(stabilize_xsw(&t5(), 0).unwrap().0, t6());
}

#[test]
fn labels_sit_in_the_destabilization_square() {
    let mut diagrams = vec![u2(), t5()];
    diagrams.extend(random_knots(10, &[3, 4, 5], 21));
    for g in &diagrams {
        for col in 0..g.n() {
            let (gp, l) = stabilize_xsw(g, col).unwrap();
            let np = gp.n();
            let (cx, cy) = l.c;
            // O₁ in the cell NE of c, X₂ directly south of it, X₁ directly west
            assert_eq!((l.o1, gp.o(l.o1)), (cx, cy));
            assert_eq!((l.x2, gp.x(l.x2)), (cx, (cy + np - 1) % np));
            let west = (cx + np - 1) % np;
            assert_eq!((l.x1, gp.x(l.x1)), (west, cy));
            let blank = (cy + np - 1) % np;
            assert!(gp.o(west) != blank && gp.x(west) != blank);
            assert_eq!(gp.o(l.o2), blank);
        }
    }
}

#[test]
fn destabilization_inverts_stabilization() {
    for g in random_knots(20, &[3, 4, 5, 6], 5) {
        for col in 0..g.n() {
            let (gp, labels) = stabilize_xsw(&g, col).unwrap();
            assert_eq!(destabilize(&gp, &labels).unwrap(), g);
            assert!(destabilize_at(&gp, labels.o1).is_ok());
        }
    }
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(matches!(stabilize_xsw(&u2(), 2), Err(Error::InvalidColumn(_))));
    assert!(matches!(destabilize_at(&u2(), 0), Err(Error::InvalidMove(_))));
    let (gp, labels) = stabilize_xsw(&t5(), 1).unwrap();
    let sp = splitting(&gp, &labels);
    assert_eq!(e4(&labels, &sp.n_states[0]), Err(Error::NotAnIState));
    let cp = build_cover(&gp);
    assert_eq!(h_x2_i4(&cp, &labels, &sp.i_states[0]), Err(Error::NotAnNState));
    assert_eq!(stab_homotopy(&cp, &labels, StabHomotopy::O1, &sp.n_states[0]), Err(Error::WrongSummand));
    assert_eq!(stab_homotopy(&cp, &labels, StabHomotopy::O1X2, &sp.i_states[0]), Err(Error::WrongSummand));
}

fn e4_checks(g: &GridDiagram, col: usize) {
    let (gp, labels) = stabilize_xsw(g, col).unwrap();
    let cg = build_cover(g);
    let cp = build_cover(&gp);
    let sp = splitting(&gp, &labels);
    let mut images: Vec<_> = sp.i_states.iter().map(|x| e4(&labels, x).unwrap()).collect();
    for (x, y) in sp.i_states.iter().zip(&images) {
        assert_eq!(&e4_inverse(&labels, y), x);
        let (m, a) = gradings(&gp, x);
        assert_eq!(gradings(g, y), (m + 1, a + 1));
        let lhs = e4_elem(&labels, &d_block(&cp, &labels, Summand::I, Summand::I, x).unwrap()).unwrap();
        assert_eq!(lhs, promoted_differential(&cg, &labels, y));
    }
    images.sort();
    assert_eq!(images, enumerate_states(g));
}

#[test]
fn e4_is_a_graded_bijection_and_chain_map() {
    e4_checks(&u2(), 0);
    e4_checks(&t5(), 0);
    e4_checks(&t5(), 3);
}

fn square_and_degrees(g: &GridDiagram, col: usize) {
    let (gp, labels) = stabilize_xsw(g, col).unwrap();
    let cp = build_cover(&gp);
    let sp = splitting(&gp, &labels);
    let nv = gp.n();
    for x in &sp.i_states {
        // (V₁+V₂)∘e₄ = e₄∘H_{X₂}^{I₄}∘∂_{I}^{N}
        let dn = d_block(&cp, &labels, Summand::I, Summand::N, x).unwrap();
        let rhs = e4_elem(&labels, &dn.apply(|s| h_x2_i4(&cp, &labels, s).unwrap())).unwrap();
        let lhs = ChainElement::generator(e4(&labels, x).unwrap(), nv).times_sum_of_vars(labels.o1, labels.o2);
        assert_eq!(lhs, rhs);
        let (m, a) = gradings(&gp, x);
        for t in &stab_homotopy(&cp, &labels, StabHomotopy::O1, x).unwrap() {
            assert_eq!(t.k[labels.o1], 0);
            // V₁ ↦ 1 raises the grading of the counted class by (2, 1)
            assert_eq!(monomial_gradings(&gp, t), (m + 1, a + 1));
        }
    }
    for x in &sp.n_states {
        let (m, a) = gradings(&gp, x);
        for t in &h_x2_i4(&cp, &labels, x).unwrap() {
            assert_eq!(monomial_gradings(&gp, t), (m - 1, a - 1));
            assert!(sp.i_states.contains(&t.state));
        }
        for t in &h_xi(&cp, labels.x2, x) {
            assert_eq!(monomial_gradings(&gp, t), (m - 1, a - 1));
        }
        for t in &stab_homotopy(&cp, &labels, StabHomotopy::O1X2, x).unwrap() {
            assert_eq!(t.k[labels.o1], 0);
            assert_eq!(monomial_gradings(&gp, t), (m + 1, a));
        }
    }
}

#[test]
fn commuting_square_and_map_degrees() {
    square_and_degrees(&u2(), 0);
    square_and_degrees(&u2(), 1);
    square_and_degrees(&t5(), 0);
    square_and_degrees(&t5(), 2);
}

fn identities_pass(g: &GridDiagram, col: usize) {
    let (gp, labels) = stabilize_xsw(g, col).unwrap();
    let ids = stabilization_identities(g, &gp, &labels);
    assert!(ids.len() >= 10);
    for (name, w) in ids {
        assert!(w.is_none(), "{name}: {}", w.unwrap());
    }
}

#[test]
fn splitting_identities_on_stabilized_unknot() {
    identities_pass(&u2(), 0);
    identities_pass(&u2(), 1);
}

#[test]
fn splitting_identities_on_stabilized_trefoil() {
    identities_pass(&t5(), 0);
    identities_pass(&t5(), 4);
}

#[test]
fn splitting_identities_on_stabilized_six_grid() {
    identities_pass(&t6(), 0);
}

fn cones_match(g: &GridDiagram, col: usize) {
    let (gp, labels) = stabilize_xsw(g, col).unwrap();
    let cn = cone_of_splitting(&gp, &build_cover(&gp), &labels).unwrap();
    let cpm = cone_promoted(g, &labels).unwrap();
    assert!(cn.squares_to_zero() && cpm.squares_to_zero());
    assert_eq!(cn.len(), enumerate_states(&gp).len());
    let w = default_window(&cn).hull(&default_window(&cpm));
    let tn = homology_table(&cn, w, Route::Collapsed);
    let tp = homology_table(&cpm, w, Route::Collapsed);
    let tg = homology_table(&grid_complex(g, Theory::Bullet), w, Route::Collapsed);
    assert!(compare_modules(&tn, &tp).unwrap().equal);
    assert!(compare_modules(&tn, &tg).unwrap().equal);
    let tgp = homology_table(&grid_complex(&gp, Theory::Bullet), w, Route::Collapsed);
    assert!(compare_modules(&tgp, &tg).unwrap().equal);
}

#[test]
fn cone_tables_agree_with_bullet_homology() {
    cones_match(&u2(), 0);
    cones_match(&t5(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_stabilizations_satisfy_the_identities(seed in any::<u64>(), n in 2usize..=4, col in 0usize..4) {
        let g = &random_knots(1, &[n], seed)[0];
        let col = col % n;
        let (gp, labels) = stabilize_xsw(g, col).unwrap();
        prop_assert_eq!(destabilize(&gp, &labels).unwrap(), g.clone());
        for (name, w) in stabilization_identities(g, &gp, &labels) {
            prop_assert!(w.is_none(), "{}", name);
        }
    }
}
