use coxcoh::complex::SubcomplexSpec;
use coxcoh::corpus;
use coxcoh::homology::{homology, ChainComplexZ, Orientation};
use coxcoh::linalg::{rank, smith_normal_form, IntMatrix, SparseVec};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn chambers_are_contractible() {
    for (name, w) in corpus::all_systems() {
        let k = corpus::chamber(&w);
        let b = homology(&k.chain_complex());
        assert_eq!(b.betti(0), 1, "{name}");
        assert!(b.nonzero().iter().all(|d| d.degree == 0 && d.torsion.is_empty()), "{name}: {b:?}");
    }
}

#[test]
fn mirrors_nest() {
    for (name, w) in corpus::all_systems() {
        for (xname, x) in corpus::complexes(&w) {
            let sets = w.all_gens().subsets();
            for &u in &sets {
                for &v in sets.iter().filter(|v| u.is_subset(**v)) {
                    let (xu, xv) = (x.subcomplex(SubcomplexSpec::Union(u)), x.subcomplex(SubcomplexSpec::Union(v)));
                    assert!(xu.is_subset(&xv), "{name} {xname}");
                    let (iu, iv) =
                        (x.subcomplex(SubcomplexSpec::Intersection(u)), x.subcomplex(SubcomplexSpec::Intersection(v)));
                    assert!(iv.is_subset(&iu), "{name} {xname}");
                }
            }
            for c in 0..x.len() {
                for s in w.all_gens().iter() {
                    assert_eq!(x.mirror_set(c).contains(s), x.mirror_cells(s).contains(&c));
                }
            }
        }
    }
}

#[test]
fn euler_characteristics() {
    for (_, w) in corpus::all_systems() {
        for (_, x) in corpus::complexes(&w) {
            let c = x.chain_complex();
            assert_eq!(homology(&c).euler_characteristic(), c.euler_characteristic());
        }
    }
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..7, cols), rows)
}

fn columns(m: &IntMatrix) -> Vec<SparseVec> {
    m.to_sparse_columns()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_form_factors(rows in matrix(4, 5)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.determinant().unwrap().magnitude() == &1u32.into());
        prop_assert!(s.v.determinant().unwrap().magnitude() == &1u32.into());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(diag.len(), rank(&columns(&m)));
    }

    #[test]
    fn ranks_of_random_complexes(a in matrix(3, 4), b in prop::collection::vec(-3i64..4, 12)) {
        // d2 lands in ker(d1): the trailing columns of V span it
        let a = IntMatrix::from_rows(&a).unwrap();
        let s = smith_normal_form(&a);
        let r = s.diagonal().len();
        let mut d2 = IntMatrix::zeros(4, 3);
        for i in 0..4 {
            for j in 0..3 {
                let x: BigInt = (r..4).map(|k| s.v.get(i, k) * BigInt::from(b[k * 3 + j])).sum();
                d2.set(i, j, x);
            }
        }
        prop_assert!(a.mul(&d2).unwrap().is_zero());
        let c = ChainComplexZ::new(Orientation::Chain, 0, vec![3, 4, 3], vec![vec![Vec::new(); 3], columns(&a), columns(&d2)])
            .unwrap();
        let h = homology(&c);
        let (r1, r2) = (rank(&columns(&a)), rank(&columns(&d2)));
        prop_assert_eq!(r1, r);
        prop_assert_eq!(h.betti(0), 3 - r1);
        prop_assert_eq!(h.betti(1), 4 - r1 - r2);
        prop_assert_eq!(h.betti(2), 3 - r2);
        prop_assert_eq!(h.euler_characteristic(), c.euler_characteristic());
        prop_assert!(h.torsion(1).iter().all(|t| *t > BigInt::from(1)));
    }
}
