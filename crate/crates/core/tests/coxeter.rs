use coxcoh::corpus;
use coxcoh::coxeter::{CoxeterSystem, Gen};
use proptest::prelude::*;

fn systems() -> Vec<(&'static str, CoxeterSystem)> {
    corpus::all_systems()
}

#[test]
fn lengths_change_by_one() {
    for (name, w) in systems() {
        let ball = w.ball_or_group(5).unwrap();
        for (i, x) in ball.elements.iter().enumerate() {
            if x.length() == ball.radius && !ball.complete {
                continue;
            }
            for s in 0..w.rank() as Gen {
                let (r, l) = (ball.right[i][s as usize], ball.left[i][s as usize]);
                for j in [r, l] {
                    let j = j.unwrap_or_else(|| panic!("{name}: neighbour of {} left the ball", w.element_label(x)));
                    assert_eq!(ball.elements[j].length().abs_diff(x.length()), 1, "{name}");
                }
                assert_eq!(ball.in_right[i].contains(s), ball.elements[r.unwrap()].length() < x.length());
            }
        }
    }
}

#[test]
fn finite_groups_stabilize() {
    for (w, order) in [(corpus::z2(), 2), (corpus::s3(), 6), (corpus::klein_four(), 4), (corpus::a3(), 24), (corpus::z2_cubed(), 8)] {
        for n in [order, order + 3] {
            assert_eq!(w.ball(n).unwrap().len(), order);
        }
        let ball = w.ball(order).unwrap();
        let full: Vec<_> = ball.elements.iter().filter(|x| w.right_descents(x) == w.all_gens()).collect();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0], &w.longest_element(w.all_gens()).unwrap());
    }
}

fn word() -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(0u8..3, 0..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_forms_are_braid_invariant(raw in word(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        for w in [corpus::a3(), corpus::affine_a2(), corpus::tripod()] {
            let x = w.canonicalize_indices(&raw).unwrap();
            prop_assert_eq!(&w.canonicalize_indices(x.word()).unwrap(), &x);
            prop_assert!(w.is_reduced(x.word()));
            let shuffled = coxcoh::hecke::random_braid_walk(&w, x.word(), 12, &mut rng);
            prop_assert_eq!(w.canonicalize_indices(&shuffled).unwrap(), x);
        }
    }

    #[test]
    fn descents_of_inverse(raw in word()) {
        for w in [corpus::a3(), corpus::affine_a2(), corpus::tripod()] {
            let x = w.canonicalize_indices(&raw).unwrap();
            let rev: Vec<Gen> = x.word().iter().rev().copied().collect();
            let inv = w.canonicalize_indices(&rev).unwrap();
            prop_assert_eq!(&inv, &w.inverse(&x));
            prop_assert_eq!(w.right_descents(&x), w.left_descents(&inv));
        }
    }

    #[test]
    fn multiplication_is_associative(a in word(), b in word(), c in word()) {
        let w = corpus::affine_a2();
        let (x, y, z) = (
            w.canonicalize_indices(&a).unwrap(),
            w.canonicalize_indices(&b).unwrap(),
            w.canonicalize_indices(&c).unwrap(),
        );
        prop_assert_eq!(w.multiply(&w.multiply(&x, &y), &z), w.multiply(&x, &w.multiply(&y, &z)));
        prop_assert!(w.multiply(&x, &w.inverse(&x)).is_identity());
    }
}
