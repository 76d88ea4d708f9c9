//! Built-in test corpus of Coxeter systems and mirrored complexes.

use crate::complex::{davis_chamber, MirroredComplex, SubcomplexSpec};
use crate::coxeter::{CoxeterMatrix, CoxeterSystem};

fn system(gens: &[&str], m: Vec<Vec<u32>>) -> CoxeterSystem {
    CoxeterSystem::new(CoxeterMatrix::new(gens, m)).expect("corpus matrices are valid")
}

pub fn z2() -> CoxeterSystem {
    system(&["s"], vec![vec![1]])
}

pub fn s3() -> CoxeterSystem {
    system(&["s", "t"], vec![vec![1, 3], vec![3, 1]])
}

pub fn klein_four() -> CoxeterSystem {
    system(&["s", "t"], vec![vec![1, 2], vec![2, 1]])
}

pub fn a3() -> CoxeterSystem {
    system(&["s", "t", "u"], vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]])
}

/// Right-angled (Z/2)^3.
pub fn z2_cubed() -> CoxeterSystem {
    system(&["s", "t", "u"], vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]])
}

pub fn infinite_dihedral() -> CoxeterSystem {
    system(&["s", "t"], vec![vec![1, 0], vec![0, 1]])
}

/// Free product of three copies of Z/2.
pub fn tripod() -> CoxeterSystem {
    system(&["s", "t", "u"], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
}

/// Affine Weyl group of type A2.
pub fn affine_a2() -> CoxeterSystem {
    system(&["s", "t", "u"], vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]])
}

/// Right-angled system on a square: (Z/2 * Z/2) x (Z/2 * Z/2).
pub fn square() -> CoxeterSystem {
    system(
        &["a", "b", "c", "d"],
        vec![vec![1, 0, 2, 2], vec![0, 1, 2, 2], vec![2, 2, 1, 0], vec![2, 2, 0, 1]],
    )
}

pub fn finite_systems() -> Vec<(&'static str, CoxeterSystem)> {
    vec![("Z/2", z2()), ("S3", s3()), ("(Z/2)^2", klein_four()), ("A3", a3())]
}

pub fn infinite_systems() -> Vec<(&'static str, CoxeterSystem)> {
    vec![("D_inf", infinite_dihedral()), ("tripod", tripod()), ("affine A2", affine_a2())]
}

pub fn all_systems() -> Vec<(&'static str, CoxeterSystem)> {
    let mut v = finite_systems();
    v.extend(infinite_systems());
    v
}

pub fn chamber(sys: &CoxeterSystem) -> MirroredComplex {
    davis_chamber(&sys.spherical_poset().expect("corpus posets are small"), sys.generators())
}

/// A single point with empty mirrors: U is W itself.
pub fn point(sys: &CoxeterSystem) -> MirroredComplex {
    MirroredComplex::new(sys.generators().to_vec(), vec![0], &[], &vec![Vec::new(); sys.rank()]).unwrap()
}

/// The union of the mirrors of K, as a complex in its own right.
pub fn mirror_union(sys: &CoxeterSystem) -> MirroredComplex {
    let k = chamber(sys);
    let sub = k.subcomplex(SubcomplexSpec::Union(sys.all_gens()));
    k.restrict(&sub).expect("mirror union is a subcomplex")
}

/// RP² with one vertex, one edge and one 2-cell attached by degree 2; the
/// vertex is the mirror of the first generator.
pub fn projective_plane(sys: &CoxeterSystem) -> MirroredComplex {
    let mut mirrors = vec![Vec::new(); sys.rank()];
    mirrors[0] = vec![0];
    MirroredComplex::new(sys.generators().to_vec(), vec![0, 1, 2], &[(2, 1, 2)], &mirrors).unwrap()
}

/// Mirrored complexes used for cross-checks on a system.
pub fn complexes(sys: &CoxeterSystem) -> Vec<(&'static str, MirroredComplex)> {
    vec![
        ("K", chamber(sys)),
        ("point", point(sys)),
        ("mirror union", mirror_union(sys)),
        ("RP2", projective_plane(sys)),
    ]
}
