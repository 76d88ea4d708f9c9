use coxcoh::complex::SubcomplexSpec;
use coxcoh::corpus;
use coxcoh::coxeter::GenSet;
use coxcoh::equivariant::*;
use coxcoh::group_ring::Truncation;
use coxcoh::homology::{cohomology, homology};

#[test]
fn basic_construction_examples() {
    // Z/2 on an edge with one mirrored endpoint: an interval
    let w = corpus::z2();
    let k = corpus::chamber(&w);
    let tr = Truncation::new_or_group(&w, 1).unwrap();
    let u = build_u(&tr, &k, Variant::Homology).unwrap();
    assert_eq!(u.dims, vec![3, 2]);
    assert_eq!(homology(&u.chain_complex(&k)).betti_numbers(), vec![1, 0]);

    // infinite dihedral, N = 3: a path of 8 edges
    let w = corpus::infinite_dihedral();
    let k = corpus::chamber(&w);
    let tr = Truncation::new(&w, 3).unwrap();
    let u = build_u(&tr, &k, Variant::Homology).unwrap();
    assert_eq!(u.dims[1], 14);
    assert!(u.frontier_is_subcomplex());

    // S3 on K: a contractible disc with 6 chambers
    let w = corpus::s3();
    let k = corpus::chamber(&w);
    let tr = Truncation::new_or_group(&w, 0).unwrap();
    let u = build_u(&tr, &k, Variant::Homology).unwrap();
    assert_eq!(homology(&u.chain_complex(&k)).betti_numbers(), vec![1, 0, 0]);
}

#[test]
fn coefficient_complex_examples() {
    let w = corpus::tripod();
    let k = corpus::chamber(&w);
    let tr = Truncation::new(&w, 3).unwrap();
    let c = coefficient_complex(&tr, &k, Slice::Hat(GenSet::EMPTY), Variant::Cohomology).unwrap();
    assert_eq!(c.dims, vec![1, 3]);
    let leaves = k.subcomplex(SubcomplexSpec::Union(w.all_gens()));
    assert_eq!(cohomology(&c.dual().dual()), cohomology(&k.relative_complex(&leaves).unwrap()));
    let pt = corpus::point(&w);
    let whole = coefficient_complex(&tr, &pt, Slice::Whole, Variant::Cohomology).unwrap();
    assert_eq!(whole.dims, vec![tr.len()]);
}

#[test]
fn chain_identification() {
    for (name, w) in corpus::all_systems() {
        let tr = Truncation::new_or_group(&w, 4).unwrap();
        for (xname, x) in corpus::complexes(&w) {
            let r = chain_identification_check(&tr, &x).unwrap();
            assert!(r.ok, "{name} {xname}: {r:?}");
        }
    }
}

#[test]
fn formulas_on_finite_groups() {
    for (name, w) in corpus::finite_systems() {
        for (xname, x) in corpus::complexes(&w) {
            for v in [Variant::Homology, Variant::Cohomology] {
                let r = homology_formula(&w, &x, 0, v).unwrap();
                assert!(r.equal, "{name} {xname} {v:?}: {:?} vs {:?}", r.lhs, r.rhs);
            }
        }
    }
}

#[test]
fn formulas_on_infinite_groups() {
    for (name, w) in corpus::infinite_systems() {
        for (xname, x) in corpus::complexes(&w) {
            for v in [Variant::Homology, Variant::Cohomology] {
                let r = homology_formula(&w, &x, 3, v).unwrap();
                assert!(r.equal, "{name} {xname} {v:?}: {:?} vs {:?}", r.lhs, r.rhs);
            }
        }
    }
}

#[test]
fn graded_terms_agree() {
    for (name, w) in corpus::all_systems() {
        for x in [corpus::chamber(&w), corpus::point(&w)] {
            for v in [Variant::Cohomology, Variant::Homology] {
                for r in graded_terms(&w, &x, 3, v).unwrap() {
                    assert!(r.ok(), "{name} {v:?} p={}: {:#?}", r.p, r.degrees);
                }
            }
        }
    }
}

#[test]
fn point_traces_on_a3() {
    // every graded piece is a descent module; the generator traces are +-3 in the middle
    let w = corpus::a3();
    let x = corpus::point(&w);
    let r = graded_term(&w, &x, 1, 0, Variant::Cohomology).unwrap();
    let d = &r.degrees[0];
    assert_eq!(d.lhs_rank, 11);
    assert!(d.traces.iter().all(|t| t.lhs == -3 && t.rhs == -3));
}

#[test]
fn tripod_demo() {
    let r = tripod_cocycle_demo(4).unwrap();
    assert!(r.ok, "{r:?}");
    assert_eq!((r.x_on_line, r.xs_on_line), (1, 0));
}

#[test]
fn permutation_modules() {
    for (_, w) in corpus::finite_systems() {
        let reg = regular_action(&w).unwrap();
        for t in w.spherical_poset().unwrap().sets() {
            let r = permutation_module_check(&w, t, &reg).unwrap();
            assert!(r.ok, "{r:?}");
        }
    }
}

#[test]
fn projections_compose() {
    for (name, w) in corpus::all_systems() {
        let tr = Truncation::new_or_group(&w, 4).unwrap();
        for (xname, x) in corpus::complexes(&w) {
            assert!(functoriality_check(&tr, &x), "{name} {xname}");
        }
    }
}

#[test]
fn group_cohomology_of_free_products() {
    // H^1_c of the tripod's Davis complex: two classes from the base chamber
    // and one per singleton-descent element of the ball
    let w = corpus::tripod();
    let r = group_cohomology_graded(&w, 0, 3).unwrap();
    assert!(r.ok());
    assert_eq!(r.degrees.iter().find(|d| d.degree == 1).map(|d| d.lhs_rank), Some(2));
    let r = group_cohomology_graded(&w, 1, 3).unwrap();
    assert_eq!(r.degrees.iter().find(|d| d.degree == 1).map(|d| d.rhs_rank), Some(21));
    for p in 0..3 {
        for q in -1..3 {
            assert!(spectral_degeneration_check(&w, &corpus::chamber(&w), p, q, 3).unwrap());
        }
    }
}
