use coxcoh::corpus;
use coxcoh::coxeter::{GenSet, Side};
use coxcoh::group_ring::*;
use coxcoh::linalg::{rank, SparseVec};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn descent_bases_are_unitriangular() {
    for (name, w) in corpus::all_systems() {
        let tr = Truncation::new_or_group(&w, 5).unwrap();
        for side in [Side::Left, Side::Right] {
            let m = tr.change_of_basis(side);
            assert!(is_unitriangular(&m), "{name} {side:?}");
            assert_eq!(m.determinant().unwrap(), BigInt::from(1));
        }
    }
}

#[test]
fn symmetrizer_identities() {
    for (name, w) in corpus::all_systems() {
        let poset = w.spherical_poset().unwrap();
        for t in poset.sets() {
            let order = BigInt::from(w.parabolic_elements(t).unwrap().len());
            let (a, h) = (symmetrizer(&w, t).unwrap(), alternator(&w, t).unwrap());
            assert_eq!(multiply(&w, &a, &a), a.scale(&order), "{name}");
            assert_eq!(multiply(&w, &h, &h), h.scale(&order), "{name}");
            for s in t.iter() {
                let es = GroupRingElement::basis(w.generator(s));
                assert_eq!(multiply(&w, &a, &es), a);
                assert_eq!(multiply(&w, &es, &h), h.scale(&BigInt::from(-1)));
            }
            for u in poset.sets().filter(|u| t.is_subset(*u)) {
                let (c, d) = connecting_elements(&w, u, t).unwrap();
                assert_eq!(multiply(&w, &a, &c), symmetrizer(&w, u).unwrap(), "{name}");
                assert_eq!(multiply(&w, &d, &h), alternator(&w, u).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn filtration_meets_invariants() {
    // (F_p)^U is spanned by the b'_w with In'(w) ⊇ U and |In'(w)| >= p
    for (name, w) in corpus::all_systems() {
        let tr = Truncation::new_or_group(&w, 4).unwrap();
        let poset = w.spherical_poset().unwrap();
        for p in 0..=poset.max_cardinality() + 1 {
            let f: Vec<SparseVec> = tr.filtration(p, Side::Left).f.iter().map(|&i| tr.basis_vector(i, Side::Left)).collect();
            for u in poset.sets() {
                let inv = tr.ideal_generators(u, Side::Left);
                let both: Vec<SparseVec> = f.iter().chain(&inv).cloned().collect();
                let meet = rank(&f) + rank(&inv) - rank(&both);
                let named: Vec<SparseVec> = (0..tr.len())
                    .filter(|&i| {
                        let d = tr.descent(i, Side::Left);
                        u.is_subset(d) && d.len() >= p
                    })
                    .map(|i| tr.basis_vector(i, Side::Left))
                    .collect();
                assert_eq!(meet, named.len(), "{name} p={p} U={}", w.set_label(u));
                // named vectors lie in both
                let mut with_f = f.clone();
                with_f.extend(named.iter().cloned());
                let mut with_inv = inv.clone();
                with_inv.extend(named.iter().cloned());
                assert_eq!(rank(&with_f), rank(&f));
                assert_eq!(rank(&with_inv), rank(&inv));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_follows_descents(coeffs in prop::collection::vec(-2i64..3, 24), u in 0u64..8) {
        let w = corpus::a3();
        let tr = Truncation::new_or_group(&w, 0).unwrap();
        let u = GenSet(u);
        let mut acc = std::collections::BTreeMap::new();
        let mut expect = true;
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            expect &= u.is_subset(tr.descent(i, Side::Left));
            for (k, x) in tr.basis_vector(i, Side::Left) {
                *acc.entry(k).or_insert_with(|| BigInt::from(0)) += x * c;
            }
        }
        let v: SparseVec = acc.into_iter().filter(|(_, x)| *x != BigInt::from(0)).collect();
        let x = tr.to_element(&v);
        prop_assert_eq!(tr.invariants_membership(&x, u).unwrap(), expect);
        let back = tr.reassemble(&tr.decompose(&x, Side::Left).unwrap(), Side::Left);
        prop_assert_eq!(back, v);
    }
}
