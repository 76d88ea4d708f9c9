//! End-to-end checks over the built-in corpus, one per acceptance criterion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::buildings::{ChamberSystem, Family, FoldingChoice};
use crate::corpus;
use crate::coxeter::{CoxeterSystem, GenSet, Side};
use crate::equivariant::{graded_term, graded_terms, homology_formula, tripod_cocycle_demo, GradedTermReport, Variant};
use crate::error::Result;
use crate::group_ring::{is_unitriangular, solomon_check, Truncation};
use crate::hecke::{braid_invariance_check, hecke_graded_terms, HeckeAlgebra};
use crate::linalg::{rank, IntMatrix, SparseVec};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
    /// First failing case.
    pub witness: Option<String>,
}

struct Tally {
    checks: usize,
    failures: usize,
    witness: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: 0, witness: None, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(what());
            }
        }
    }

    fn scope(&mut self, what: &str, f: impl FnOnce(&mut Tally) -> Result<()>) {
        if let Err(e) = f(self) {
            self.check(false, || format!("{what}: {e}"));
        }
    }

    fn finish(self, id: usize, name: &'static str) -> CriterionResult {
        let mut detail = format!("{} checks, {} failures", self.checks, self.failures);
        if !self.notes.is_empty() {
            detail = format!("{detail}; {}", self.notes.join("; "));
        }
        CriterionResult {
            id,
            name,
            passed: self.failures == 0 && self.checks > 0,
            checks: self.checks,
            detail,
            witness: self.witness,
        }
    }
}

fn is_unit(d: &BigInt) -> bool {
    d.is_one() || *d == -BigInt::one()
}

/// Square matrix of sparse rows in the given column order.
fn dense(rows: &[SparseVec], cols: &[usize]) -> IntMatrix {
    let pos: std::collections::HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (c, x) in r {
            if let Some(&j) = pos.get(c) {
                m.set(i, j, x.clone());
            }
        }
    }
    m
}

/// Both descent bases are unitriangular, and the coinvariant projections of
/// {b_w : In(w) ⊆ U} form a basis of A_{S−U} for every U ⊆ S.
pub fn descent_bases() -> CriterionResult {
    let mut t = Tally::new();
    for (name, w) in corpus::all_systems() {
        for n in [4, 6] {
            t.scope(name, |t| {
                let tr = Truncation::new_or_group(&w, n)?;
                for side in [Side::Left, Side::Right] {
                    let m = tr.change_of_basis(side);
                    let det = m.determinant()?;
                    t.check(is_unitriangular(&m) && det.is_one(), || format!("{name} N={n} {side:?}: det {det}"));
                }
                for u in w.all_gens().subsets() {
                    let rest = w.all_gens().difference(u);
                    let ws: Vec<usize> = (0..tr.len()).filter(|&i| tr.descent(i, Side::Right).is_subset(u)).collect();
                    let rows: Vec<SparseVec> =
                        ws.iter().map(|&i| tr.coinvariants_project(&tr.basis_vector(i, Side::Right), rest)).collect();
                    let r = rank(&rows);
                    let det = dense(&rows, &ws).determinant()?;
                    t.check(r == ws.len() && is_unit(&det), || {
                        format!("{name} N={n} U={}: rank {r} of {}, det {det}", w.set_label(u), ws.len())
                    });
                }
                Ok(())
            });
        }
    }
    t.finish(1, "descent bases and coinvariant projections")
}

/// rank(A^U) and rank(H^U) split over the descent slices above U; the
/// projections of the Ĥ^T split A_{S−U} over T ⊆ U.
pub fn partition_counts() -> CriterionResult {
    let mut t = Tally::new();
    for (name, w) in corpus::all_systems() {
        t.scope(name, |t| {
            let tr = Truncation::new_or_group(&w, 4)?;
            let poset = w.spherical_poset()?;
            let count = |side: Side, tt: GenSet| (0..tr.len()).filter(|&i| tr.descent(i, side) == tt).count();
            for u in poset.sets() {
                for side in [Side::Left, Side::Right] {
                    let r = rank(&tr.ideal_generators(u, side));
                    let sum: usize = poset.sets().filter(|&tt| u.is_subset(tt)).map(|tt| count(side, tt)).sum();
                    t.check(r == sum, || format!("{name} U={} {side:?}: rank {r}, slices {sum}", w.set_label(u)));
                }
            }
            for u in w.all_gens().subsets() {
                let rest = w.all_gens().difference(u);
                let mut all = Vec::new();
                let mut sum = 0;
                for tt in poset.sets() {
                    let rows: Vec<SparseVec> = (0..tr.len())
                        .filter(|&i| tr.descent(i, Side::Right) == tt)
                        .map(|i| tr.coinvariants_project(&tr.basis_vector(i, Side::Right), rest))
                        .collect();
                    let r = rank(&rows);
                    let expect = if tt.is_subset(u) { rows.len() } else { 0 };
                    t.check(r == expect, || format!("{name} U={} T={}: projected rank {r}", w.set_label(u), w.set_label(tt)));
                    sum += r;
                    all.extend(rows);
                }
                let total = (0..tr.len()).filter(|&i| tr.descent(i, Side::Right).is_subset(u)).count();
                t.check(rank(&all) == sum && sum == total, || format!("{name} U={}: sum {sum} vs {total}", w.set_label(u)));
            }
            Ok(())
        });
    }
    t.finish(2, "partition counts")
}

/// Direct (co)homology of U(W,X) against the assembled right-hand side.
pub fn finite_formulas() -> CriterionResult {
    let mut t = Tally::new();
    for (name, w) in corpus::finite_systems() {
        for (xname, x) in corpus::complexes(&w) {
            for v in [Variant::Homology, Variant::Cohomology] {
                t.scope(name, |t| {
                    let r = homology_formula(&w, &x, 0, v)?;
                    t.check(r.equal, || format!("{name} {xname} {v:?}: {:?} vs {:?}", r.lhs, r.rhs));
                    Ok(())
                });
            }
        }
    }
    t.finish(3, "decomposition on finite groups")
}

/// Infinite dihedral and tripod desk checks.
pub fn infinite_desk_checks() -> CriterionResult {
    let mut t = Tally::new();
    t.scope("D_inf", |t| {
        let w = corpus::infinite_dihedral();
        let k = corpus::chamber(&w);
        let mut seen = Vec::new();
        for n in [4, 6] {
            let r = homology_formula(&w, &k, n, Variant::Cohomology)?;
            let only_empty = r.pieces.iter().all(|p| p.t.is_empty() || p.relative.betti(1) == 0);
            t.check(r.equal && r.lhs.betti(1) == 1 && r.lhs.torsion(1).is_empty() && only_empty, || {
                format!("D_inf N={n}: {:?}", r.lhs)
            });
            seen.push(r.lhs);
        }
        t.check(seen[0] == seen[1], || "D_inf: H^1 changes between N and N+2".into());
        Ok(())
    });
    t.scope("tripod", |t| {
        let w = corpus::tripod();
        let k = corpus::chamber(&w);
        let r = homology_formula(&w, &k, 3, Variant::Cohomology)?;
        t.check(r.equal, || format!("tripod: {:?} vs {:?}", r.lhs, r.rhs));
        for p in &r.pieces {
            let expect = match p.t.len() {
                0 => (2, 1),
                1 => (1, 7),
                _ => (0, p.slice_count),
            };
            let got = (p.relative.betti(1), p.slice_count);
            t.check(got == expect && p.relative.torsion(1).is_empty(), || {
                format!("tripod T={}: (rank, slices) {got:?}", w.set_label(p.t))
            });
        }
        let g = graded_term(&w, &k, 0, 3, Variant::Cohomology)?;
        let d1 = g.degrees.iter().find(|d| d.degree == 1);
        t.check(d1.is_some_and(|d| d.lhs_rank == 2 && d.rhs_rank == 2), || format!("tripod p=0: {:?}", g.degrees));
        Ok(())
    });
    t.finish(4, "infinite desk checks")
}

fn graded_tables(w: &CoxeterSystem) -> Result<Vec<(&'static str, Variant, Vec<GradedTermReport>)>> {
    let mut out = Vec::new();
    for (xname, x) in corpus::complexes(w) {
        for v in [Variant::Cohomology, Variant::Homology] {
            out.push((xname, v, graded_terms(w, &x, 3, v)?));
        }
    }
    Ok(out)
}

/// Graded terms: E1 = E∞ = RHS, matching traces, sign action on the T = ∅ piece.
pub fn graded_pieces() -> CriterionResult {
    let mut t = Tally::new();
    for (name, w) in corpus::all_systems() {
        t.scope(name, |t| {
            for (xname, v, reports) in graded_tables(&w)? {
                for r in reports {
                    t.check(r.ok(), || format!("{name} {xname} {v:?} p={}: {:?}", r.p, r.degrees));
                    t.check(!w.is_finite() || r.degrees.iter().all(|d| d.lhs_rank == 0 || !d.traces.is_empty()), || {
                        format!("{name} {xname} {v:?} p={}: traces missing", r.p)
                    });
                }
            }
            let tr = Truncation::new_or_group(&w, 3)?;
            for s in w.all_gens().iter() {
                let a = tr.quotient_action(GenSet::EMPTY, s, Side::Left);
                let sign = IntMatrix::from_rows(&[vec![-1]])?;
                t.check(a.matrix == sign && a.leaking.iter().all(|l| !l), || {
                    format!("{name}: T=∅ action of {} is {:?}", w.generators()[s as usize], a.matrix)
                });
            }
            Ok(())
        });
    }
    t.finish(5, "graded terms and traces")
}

pub fn solomon() -> CriterionResult {
    let mut t = Tally::new();
    for (name, w, expect) in [("S3", corpus::s3(), vec![1, 2, 2, 1]), ("A3", corpus::a3(), Vec::new())] {
        t.scope(name, |t| {
            let r = solomon_check(&w)?;
            t.check(r.ok, || format!("{name}: {r:?}"));
            let dims: Vec<usize> = r.a_side.iter().map(|row| row.quotient_dim).collect();
            t.check(expect.is_empty() || dims == expect, || format!("{name}: dims {dims:?}"));
            t.notes.push(format!("{name} {dims:?}"));
            Ok(())
        });
    }
    t.finish(6, "descent decomposition over Q")
}

pub fn buildings() -> CriterionResult {
    let mut t = Tally::new();
    let families = [
        Family::Global,
        Family::Local(FoldingChoice::LexLeast),
        Family::Local(FoldingChoice::Seeded(1)),
        Family::Local(FoldingChoice::Seeded(2024)),
    ];
    for (name, w) in [("3x3", corpus::klein_four()), ("3x3x3", corpus::z2_cubed())] {
        t.scope(name, |t| {
            let b = ChamberSystem::spherical_building(&w, &vec![2; w.rank()])?;
            for tt in w.all_gens().subsets() {
                for fam in families {
                    let r = b.basis_bt(tt, fam)?;
                    t.check(r.ok && is_unit(&r.determinant), || format!("{name} T={} {fam:?}: {r:?}", w.set_label(tt)));
                }
            }
            for (xname, x) in corpus::complexes(&w) {
                let r = b.realize(&x, Family::Global)?;
                t.check(r.ok && r.equal, || format!("{name} {xname}: {:?} vs {:?}", r.lhs, r.rhs));
            }
            Ok(())
        });
    }
    t.scope("D_inf", |t| {
        let w = corpus::infinite_dihedral();
        let b = ChamberSystem::graph_product_ball(&w, &[2, 2], 4)?;
        for tt in w.spherical_poset()?.sets() {
            for fam in &families[1..] {
                let r = b.basis_bt(tt, *fam)?;
                t.check(r.independent && r.spanning && r.ok, || format!("D_inf T={} {fam:?}: {r:?}", w.set_label(tt)));
            }
        }
        let r = b.realize(&corpus::chamber(&w), families[1])?;
        t.check(r.ok && r.partition.iter().all(|c| c.ok), || format!("D_inf realization: {r:?}"));
        t.notes.push(format!("D_inf N=4 H^1 rank {}", r.lhs.betti(1)));
        Ok(())
    });
    t.finish(7, "building bases and realizations")
}

pub fn hecke() -> CriterionResult {
    let mut t = Tally::new();
    let grid: Vec<BigRational> = [(1, 2), (1, 1), (2, 1), (3, 1), (2, 3)]
        .iter()
        .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
        .collect();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut samples = 0;
    for (name, w) in corpus::all_systems() {
        t.scope(name, |t| {
            for q in &grid {
                let alg = HeckeAlgebra::uniform(&w, q.clone())?;
                for tt in w.spherical_poset()?.sets() {
                    let sp = alg.specials(tt)?;
                    t.check(sp.ok(), || format!("{name} q={q} T={}", w.set_label(tt)));
                }
            }
            let alg = HeckeAlgebra::uniform(&w, BigRational::one())?;
            for (xname, v, reports) in graded_tables(&w)? {
                let x = corpus::complexes(&w).into_iter().find(|(n, _)| *n == xname).expect("same corpus").1;
                let h = hecke_graded_terms(&alg, &x, 3, v)?;
                t.check(h.len() == reports.len(), || format!("{name} {xname} {v:?}: piece count"));
                for (a, b) in reports.iter().zip(&h) {
                    let za: Vec<_> = a.degrees.iter().map(|d| (d.degree, d.lhs_rank, d.rhs_rank, d.einf_rank)).collect();
                    t.check(za == b.rank_table() && b.ok(), || format!("{name} {xname} {v:?} p={}", a.p));
                }
            }
            // distinct parameters on distinct conjugacy classes
            let mut params = vec![BigRational::zero(); w.rank()];
            for (k, c) in w.conjugacy_classes().iter().enumerate() {
                for s in c.iter() {
                    params[s as usize] = BigRational::from_integer(BigInt::from(k + 2));
                }
            }
            let alg = HeckeAlgebra::new(&w, params)?;
            let r = braid_invariance_check(&alg, 150, 8, &mut rng);
            samples += r.samples;
            t.check(r.failures == 0, || format!("{name}: {r:?}"));
            Ok(())
        });
    }
    t.check(samples >= 1000, || format!("only {samples} braid shuffles"));
    t.notes.push(format!("{samples} braid shuffles"));
    t.finish(8, "Hecke deformation")
}

pub fn tripod_pairings() -> CriterionResult {
    let mut t = Tally::new();
    for n in [4, 5] {
        t.scope("tripod", |t| {
            let r = tripod_cocycle_demo(n)?;
            t.check(r.ok && r.x_on_line == 1 && r.xs_on_line == 0, || format!("N={n}: {r:?}"));
            Ok(())
        });
    }
    t.finish(9, "tripod cocycle pairings")
}

pub const CRITERIA: [fn() -> CriterionResult; 9] = [
    descent_bases,
    partition_counts,
    finite_formulas,
    infinite_desk_checks,
    graded_pieces,
    solomon,
    buildings,
    hecke,
    tripod_pairings,
];

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|f| f()).collect()
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {}. {}: {}", self.id, self.name, self.detail)?;
        if let Some(w) = &self.witness {
            write!(f, " (first failure: {w})")?;
        }
        Ok(())
    }
}
