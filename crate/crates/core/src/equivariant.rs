//! The basic construction U(W,X), coefficient systems over mirrored
//! complexes, and both sides of the (co)homology decompositions.
//!
//! Truncation: a cell (gW_{S(c)}, c) of U is kept when its minimal coset
//! representative g lies in the ball. It is *interior* when the whole coset
//! lies in the ball. Interior cells carry the compactly supported cochains;
//! the non-interior cells form a subcomplex (the frontier).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{MirroredComplex, SubcomplexSpec};
use crate::coxeter::{CoxeterSystem, Gen, GenSet, Side};
use crate::error::{Error, Result};
use crate::group_ring::Truncation;
use crate::homology::{cohomology, homology, ChainComplexZ, DegreeSummary, HomologySummary, Orientation};
use crate::linalg::{normalize_torsion, rank, IntMatrix, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Homology,
    Cohomology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UCell {
    /// Ball index of the minimal representative of the coset.
    pub rep: usize,
    /// Cell of X.
    pub cell: usize,
    pub interior: bool,
}

#[derive(Clone, Debug)]
pub struct EquivariantComplexU {
    pub radius: usize,
    pub cells: Vec<UCell>,
    pub dims: Vec<usize>,
    pub faces: Vec<Vec<(usize, i64)>>,
    pub index: HashMap<(usize, usize), usize>,
}

fn longest_lengths(sys: &CoxeterSystem) -> Result<HashMap<GenSet, usize>> {
    Ok(sys.spherical_poset()?.subsets.iter().map(|e| (e.set, e.longest.length())).collect())
}

/// Check that every mirror intersection X_T with T non-spherical is empty.
pub fn check_spherical_mirrors(sys: &CoxeterSystem, x: &MirroredComplex) -> Result<()> {
    for c in &x.cells {
        if !sys.is_finite_type(c.mirrors) {
            return Err(Error::NonSphericalMirrorIntersection(sys.set_label(c.mirrors)));
        }
    }
    Ok(())
}

/// Truncated basic construction.
pub fn build_u(tr: &Truncation, x: &MirroredComplex, variant: Variant) -> Result<EquivariantComplexU> {
    if variant == Variant::Cohomology {
        check_spherical_mirrors(tr.sys, x)?;
    }
    let longest = longest_lengths(tr.sys)?;
    let n = tr.len();
    let mut cells = Vec::new();
    let mut index = HashMap::new();
    let top = x.dimension().map_or(0, |d| d + 1);
    let mut dims = vec![0usize; top];
    for (c, cell) in x.cells.iter().enumerate() {
        let t = cell.mirrors;
        for g in 0..n {
            if !tr.ball.in_right[g].intersection(t).is_empty() {
                continue;
            }
            let interior = tr.ball.complete
                || longest.get(&t).is_some_and(|&l| tr.length(g) + l <= tr.radius());
            index.insert((g, c), cells.len());
            cells.push(UCell { rep: g, cell: c, interior });
            dims[cell.dim] += 1;
        }
    }
    let faces = cells
        .iter()
        .map(|u| {
            x.cells[u.cell]
                .faces
                .iter()
                .map(|&(d, k)| {
                    let g = tr.coset_rep(u.rep, x.cells[d].mirrors);
                    (index[&(g, d)], k)
                })
                .collect()
        })
        .collect();
    Ok(EquivariantComplexU { radius: tr.radius(), cells, dims, faces, index })
}

impl EquivariantComplexU {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn interior_count(&self) -> usize {
        self.cells.iter().filter(|c| c.interior).count()
    }

    fn chains_on(&self, x: &MirroredComplex, keep: &[bool]) -> ChainComplexZ {
        let mut pos = vec![usize::MAX; self.cells.len()];
        let mut dims = vec![0usize; self.dims.len()];
        for (i, u) in self.cells.iter().enumerate() {
            if keep[i] {
                let d = x.cells[u.cell].dim;
                pos[i] = dims[d];
                dims[d] += 1;
            }
        }
        let mut maps: Vec<Vec<SparseVec>> = dims.iter().map(|&d| Vec::with_capacity(d)).collect();
        for (i, u) in self.cells.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            let mut col: BTreeMap<usize, BigInt> = BTreeMap::new();
            for &(f, k) in &self.faces[i] {
                if keep[f] {
                    *col.entry(pos[f]).or_insert_with(BigInt::zero) += k;
                }
            }
            maps[x.cells[u.cell].dim].push(col.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        ChainComplexZ::new(Orientation::Chain, 0, dims, maps).expect("U inherits d∘d = 0")
    }

    /// Cellular chains of the closed truncation.
    pub fn chain_complex(&self, x: &MirroredComplex) -> ChainComplexZ {
        self.chains_on(x, &vec![true; self.cells.len()])
    }

    /// Chains of (U_N, frontier); its dual computes compactly supported
    /// cohomology in the limit.
    pub fn relative_to_frontier(&self, x: &MirroredComplex) -> ChainComplexZ {
        let keep: Vec<bool> = self.cells.iter().map(|c| c.interior).collect();
        self.chains_on(x, &keep)
    }

    /// Whether the frontier is closed under faces.
    pub fn frontier_is_subcomplex(&self) -> bool {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.interior)
            .all(|(i, _)| self.faces[i].iter().all(|&(f, _)| !self.cells[f].interior))
    }
}

/// Which piece of the group ring a coefficient complex is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slice {
    Whole,
    Filtration(usize),
    /// Â^T for cohomology, Ĥ^T for homology.
    Hat(GenSet),
    /// Q_<T> for cohomology, Q'_<T> for homology; isomorphic to the hat slice.
    Quotient(GenSet),
}

impl Slice {
    fn admits(&self, d: GenSet) -> bool {
        match *self {
            Slice::Whole => true,
            Slice::Filtration(p) => d.len() >= p,
            Slice::Hat(t) | Slice::Quotient(t) => d == t,
        }
    }
}

/// C^*(X; I(M)) (cohomology) or C_*(X; C(M)) (homology) in descent-basis
/// coordinates: per cell, basis {b'_w : In'(w) ⊇ S(c)} or
/// {p(b_w) : In(w) ∩ S(c) = ∅}, restricted to the slice.
pub fn coefficient_complex(tr: &Truncation, x: &MirroredComplex, slice: Slice, variant: Variant) -> Result<ChainComplexZ> {
    if variant == Variant::Cohomology {
        check_spherical_mirrors(tr.sys, x)?;
    }
    let side = match variant {
        Variant::Cohomology => Side::Left,
        Variant::Homology => Side::Right,
    };
    let live = |c: usize, w: usize| -> bool {
        let d = tr.descent(w, side);
        let m = x.cells[c].mirrors;
        let ok = match variant {
            Variant::Cohomology => m.is_subset(d),
            Variant::Homology => m.intersection(d).is_empty(),
        };
        ok && slice.admits(d)
    };
    let top = x.dimension().map_or(0, |d| d + 1);
    let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
    let mut dims = vec![0usize; top];
    let by_dim = x.cells_by_dim();
    for cs in &by_dim {
        for &c in cs {
            for w in 0..tr.len() {
                if live(c, w) {
                    let d = x.cells[c].dim;
                    pos.insert((c, w), dims[d]);
                    dims[d] += 1;
                }
            }
        }
    }
    let mut maps: Vec<Vec<SparseVec>> = dims.iter().map(|&d| vec![Vec::new(); d]).collect();
    match variant {
        Variant::Homology => {
            for (&(c, w), &p) in &pos {
                let mut col: Vec<(usize, BigInt)> = x.cells[c]
                    .faces
                    .iter()
                    .filter_map(|&(d, k)| pos.get(&(d, w)).map(|&q| (q, BigInt::from(k))))
                    .collect();
                col.sort_by_key(|(i, _)| *i);
                maps[x.cells[c].dim][p] = col;
            }
            Ok(ChainComplexZ::new(Orientation::Chain, 0, dims, maps)?)
        }
        Variant::Cohomology => {
            for (&(c, w), &p) in &pos {
                for &(d, k) in &x.cells[c].faces {
                    if let Some(&q) = pos.get(&(d, w)) {
                        maps[x.cells[d].dim][q].push((p, BigInt::from(k)));
                    }
                }
            }
            for m in maps.iter_mut() {
                for col in m.iter_mut() {
                    col.sort_by_key(|(i, _)| *i);
                }
            }
            Ok(ChainComplexZ::new(Orientation::Cochain, 0, dims, maps)?)
        }
    }
}

/// Projections Z[W/W_U] → Z[W/W_V] compose: p_{V←U'}∘p_{U'←U} = p_{V←U}
/// along every flag of faces, on every ball element.
pub fn functoriality_check(tr: &Truncation, x: &MirroredComplex) -> bool {
    for cell in &x.cells {
        let a = cell.mirrors;
        for &(d, _) in &cell.faces {
            let b = x.cells[d].mirrors;
            for &(e, _) in &x.cells[d].faces {
                let c = x.cells[e].mirrors;
                for g in 0..tr.len() {
                    let direct = tr.coset_rep(g, c);
                    let composed = tr.coset_rep(tr.coset_rep(tr.coset_rep(g, a), b), c);
                    if direct != composed {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainIdentificationReport {
    pub interior_cells: usize,
    /// Rank of the image of the interior cochains, per degree.
    pub image_ranks: Vec<usize>,
    /// dim of ⊕_c A^{S(c)} ∩ Z[ball], per degree.
    pub target_ranks: Vec<usize>,
    pub commutes: bool,
    pub ok: bool,
}

/// Compare compactly supported cochains on U_N with C^*(X; I(A)) through
/// f ↦ Σ_w f(w⁻¹c) e_w, which sends the indicator of (gW_T, c) to a_T e_{g⁻¹}.
pub fn chain_identification_check(tr: &Truncation, x: &MirroredComplex) -> Result<ChainIdentificationReport> {
    check_spherical_mirrors(tr.sys, x)?;
    let u = build_u(tr, x, Variant::Cohomology)?;
    let n = tr.len();
    let inv: Vec<Option<usize>> =
        tr.ball.elements.iter().map(|w| tr.ball.position(&tr.sys.inverse(w))).collect();
    // image of an interior cell, in coordinates c*n + i
    let phi = |k: usize| -> Result<SparseVec> {
        let uc = u.cells[k];
        let t = x.cells[uc.cell].mirrors;
        let gi = inv[uc.rep].ok_or_else(|| Error::OutOfTrustRadius("inverse outside ball".into()))?;
        let v = tr
            .special_times(gi, t, Side::Left)
            .ok_or_else(|| Error::OutOfTrustRadius("coset leaves the ball".into()))?;
        Ok(v.into_iter().map(|(i, c)| (uc.cell * n + i, c)).collect())
    };
    let mut cofaces: Vec<Vec<(usize, i64)>> = vec![Vec::new(); u.len()];
    for (i, fs) in u.faces.iter().enumerate() {
        for &(f, k) in fs {
            cofaces[f].push((i, k));
        }
    }
    let mut xcof: Vec<Vec<(usize, i64)>> = vec![Vec::new(); x.len()];
    for (c, cell) in x.cells.iter().enumerate() {
        for &(d, k) in &cell.faces {
            xcof[d].push((c, k));
        }
    }
    let top = x.dimension().map_or(0, |d| d + 1);
    let mut images: Vec<Vec<SparseVec>> = vec![Vec::new(); top];
    let mut commutes = true;
    for k in 0..u.len() {
        if !u.cells[k].interior {
            continue;
        }
        let img = phi(k)?;
        // δ then φ
        let mut lhs: BTreeMap<usize, BigInt> = BTreeMap::new();
        for &(s, c) in &cofaces[k] {
            if u.cells[s].interior {
                for (i, v) in phi(s)? {
                    *lhs.entry(i).or_insert_with(BigInt::zero) += v * c;
                }
            }
        }
        // φ then δ_X ⊗ 1
        let mut rhs: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (i, v) in &img {
            let (d, w) = (i / n, i % n);
            for &(c, s) in &xcof[d] {
                *rhs.entry(c * n + w).or_insert_with(BigInt::zero) += v * s;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        if lhs != rhs {
            commutes = false;
        }
        images[x.cells[u.cells[k].cell].dim].push(img);
    }
    let image_ranks: Vec<usize> = images.iter().map(|v| rank(v)).collect();
    let mut target_ranks = vec![0usize; top];
    for cell in &x.cells {
        target_ranks[cell.dim] += (0..n).filter(|&w| cell.mirrors.is_subset(tr.ball.in_left[w])).count();
    }
    let counts: Vec<usize> = images.iter().map(|v| v.len()).collect();
    let ok = commutes && image_ranks == target_ranks && counts == image_ranks;
    Ok(ChainIdentificationReport { interior_cells: u.interior_count(), image_ranks, target_ranks, commutes, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaPiece {
    pub t: GenSet,
    /// H_*(X, X^T) (homology) or H^*(X, X^{S−T}) (cohomology).
    pub relative: HomologySummary,
    /// Number of w in the ball with In(w) = T (resp. In'(w) = T).
    pub slice_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaReport {
    pub variant: Variant,
    pub radius: usize,
    pub lhs: HomologySummary,
    pub rhs: HomologySummary,
    pub pieces: Vec<FormulaPiece>,
    pub equal: bool,
    /// LHS agrees with the LHS at radius + 2 (always true for finite W).
    pub stable: bool,
}

pub(crate) fn relative_summary(x: &MirroredComplex, a: GenSet, variant: Variant) -> Result<HomologySummary> {
    let sub = x.subcomplex(SubcomplexSpec::Union(a));
    let rel = x.relative_complex(&sub)?;
    Ok(match variant {
        Variant::Homology => homology(&rel),
        Variant::Cohomology => cohomology(&rel),
    })
}

fn direct_side(tr: &Truncation, x: &MirroredComplex, variant: Variant) -> Result<HomologySummary> {
    let u = build_u(tr, x, variant)?;
    Ok(match variant {
        Variant::Homology => homology(&u.chain_complex(x)),
        Variant::Cohomology => cohomology(&u.relative_to_frontier(x)),
    })
}

pub(crate) fn assemble(pieces: &[FormulaPiece], top: usize) -> HomologySummary {
    let degrees = (0..top)
        .map(|i| {
            let mut betti = 0;
            let mut torsion = Vec::new();
            for p in pieces {
                betti += p.relative.betti(i as i64) * p.slice_count;
                for t in p.relative.torsion(i as i64) {
                    torsion.extend(std::iter::repeat_n(t, p.slice_count));
                }
            }
            DegreeSummary { degree: i as i64, betti, torsion: normalize_torsion(&torsion) }
        })
        .collect();
    HomologySummary { degrees }
}

/// Both sides of the decomposition of H_*(U) or H^*_c(U) at one radius.
pub fn homology_formula(sys: &CoxeterSystem, x: &MirroredComplex, radius: usize, variant: Variant) -> Result<FormulaReport> {
    let tr = Truncation::new_or_group(sys, radius)?;
    let lhs = direct_side(&tr, x, variant)?;
    let poset = sys.spherical_poset()?;
    let side = match variant {
        Variant::Homology => Side::Right,
        Variant::Cohomology => Side::Left,
    };
    let all = sys.all_gens();
    let mut pieces = Vec::new();
    for t in poset.sets() {
        let a = match variant {
            Variant::Homology => t,
            Variant::Cohomology => all.difference(t),
        };
        let slice_count = (0..tr.len()).filter(|&w| tr.descent(w, side) == t).count();
        pieces.push(FormulaPiece { t, relative: relative_summary(x, a, variant)?, slice_count });
    }
    let top = x.dimension().map_or(0, |d| d + 1);
    let rhs = assemble(&pieces, top);
    let equal = lhs == rhs;
    let stable = if tr.ball.complete {
        true
    } else {
        let bigger = Truncation::new(sys, radius + 2)?;
        direct_side(&bigger, x, variant)? == lhs
    };
    Ok(FormulaReport { variant, radius: tr.radius(), lhs, rhs, pieces, equal, stable })
}

/// A filtered complex inside an ambient complex ⊕_c Z^n, with coordinates
/// c*n + i, c a cell of X.
struct Filtered<'t, 'a> {
    tr: &'t Truncation<'a>,
    x: &'t MirroredComplex,
    variant: Variant,
    /// levels[p][k]: generators of the p-th filtration piece in degree k.
    levels: Vec<Vec<Vec<SparseVec>>>,
    /// For each X cell, the cells its coordinates map to under the differential.
    targets: Vec<Vec<(usize, i64)>>,
}

impl<'t, 'a> Filtered<'t, 'a> {
    fn new(tr: &'t Truncation<'a>, x: &'t MirroredComplex, variant: Variant) -> Result<Self> {
        let poset = tr.sys.spherical_poset()?;
        let n = tr.len();
        let top = x.dimension().map_or(0, |d| d + 1);
        let maxp = poset.max_cardinality() + 1;
        let mut targets: Vec<Vec<(usize, i64)>> = vec![Vec::new(); x.len()];
        match variant {
            Variant::Homology => {
                for (c, cell) in x.cells.iter().enumerate() {
                    targets[c] = cell.faces.clone();
                }
            }
            Variant::Cohomology => {
                for (c, cell) in x.cells.iter().enumerate() {
                    for &(d, k) in &cell.faces {
                        targets[d].push((c, k));
                    }
                }
            }
        }
        let side = match variant {
            Variant::Cohomology => Side::Left,
            Variant::Homology => Side::Right,
        };
        // ideal generators per spherical T, computed once
        let ideal: HashMap<GenSet, Vec<SparseVec>> =
            poset.sets().map(|t| (t, tr.ideal_generators(t, side))).collect();
        let mut levels = vec![vec![Vec::new(); top]; maxp + 1];
        for (p, level) in levels.iter_mut().enumerate() {
            for (c, cell) in x.cells.iter().enumerate() {
                let m = cell.mirrors;
                for t in poset.sets().filter(|t| t.len() >= p) {
                    match variant {
                        Variant::Cohomology => {
                            if !m.is_subset(t) {
                                continue;
                            }
                            for g in &ideal[&t] {
                                level[cell.dim].push(g.iter().map(|(i, v)| (c * n + i, v.clone())).collect());
                            }
                        }
                        Variant::Homology => {
                            for g in &ideal[&t] {
                                let v = tr.coinvariants_project(g, m);
                                if !v.is_empty() {
                                    level[cell.dim].push(v.into_iter().map(|(i, v)| (c * n + i, v)).collect());
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(Filtered { tr, x, variant, levels, targets })
    }

    fn n(&self) -> usize {
        self.tr.len()
    }

    fn move_coord(&self, i: usize, target: usize) -> usize {
        match self.variant {
            Variant::Cohomology => i,
            Variant::Homology => self.tr.coset_rep(i, self.x.cells[target].mirrors),
        }
    }

    fn apply_d(&self, v: &SparseVec) -> SparseVec {
        let n = self.n();
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (coord, x) in v {
            let (c, i) = (coord / n, coord % n);
            for &(t, k) in &self.targets[c] {
                let j = self.move_coord(i, t);
                *acc.entry(t * n + j).or_insert_with(BigInt::zero) += x * k;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// Action of a generator on ambient coordinates (finite W only).
    fn act(&self, s: Gen, v: &SparseVec) -> SparseVec {
        let n = self.n();
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (coord, x) in v {
            let (c, i) = (coord / n, coord % n);
            let j = match self.variant {
                Variant::Cohomology => self.tr.ball.right[i][s as usize].expect("finite group"),
                Variant::Homology => {
                    let k = self.tr.ball.left[i][s as usize].expect("finite group");
                    self.tr.coset_rep(k, self.x.cells[c].mirrors)
                }
            };
            *acc.entry(c * n + j).or_insert_with(BigInt::zero) += x;
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

}

/// A filtered chain or cochain complex, given by generators of each level
/// inside a common ambient space with a differential.
pub(crate) trait FilteredOps {
    fn levels(&self) -> &[Vec<Vec<SparseVec>>];
    fn variant(&self) -> Variant;
    fn apply_d(&self, v: &SparseVec) -> SparseVec;

    fn degrees(&self) -> usize {
        self.levels()[0].len()
    }

    fn next(&self, k: usize) -> Option<usize> {
        match self.variant() {
            Variant::Cohomology => (k + 1 < self.degrees()).then_some(k + 1),
            Variant::Homology => k.checked_sub(1),
        }
    }

    fn prev(&self, k: usize) -> Option<usize> {
        match self.variant() {
            Variant::Cohomology => k.checked_sub(1),
            Variant::Homology => (k + 1 < self.degrees()).then_some(k + 1),
        }
    }
}

impl FilteredOps for Filtered<'_, '_> {
    fn levels(&self) -> &[Vec<Vec<SparseVec>>] {
        &self.levels
    }

    fn variant(&self) -> Variant {
        self.variant
    }

    fn apply_d(&self, v: &SparseVec) -> SparseVec {
        Filtered::apply_d(self, v)
    }
}

fn concat(a: &[SparseVec], b: &[SparseVec]) -> Vec<SparseVec> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

/// dim H_k(G_p / G_{p+1}) over Q, for generator families `lv`.
pub(crate) fn e1_dim<F: FilteredOps>(f: &F, lv: &[Vec<Vec<SparseVec>>], p: usize, k: usize) -> usize {
    let g = &lv[p][k];
    let g1 = &lv[p + 1][k];
    let dg: Vec<SparseVec> = g.iter().map(|v| f.apply_d(v)).collect();
    let (kernel_part, r_next) = match f.next(k) {
        Some(nk) => {
            let g1n = &lv[p + 1][nk];
            (rank(&concat(&dg, g1n)), rank(g1n))
        }
        None => (0, 0),
    };
    let bound = match f.prev(k) {
        Some(pk) => {
            let dgp: Vec<SparseVec> = lv[p][pk].iter().map(|v| f.apply_d(v)).collect();
            rank(&concat(&dgp, g1))
        }
        None => rank(g1),
    };
    rank(g) + r_next - kernel_part - bound
}

/// dim of the image of H_k(G_p) in H_k(G_0).
pub(crate) fn image_dim<F: FilteredOps>(f: &F, p: usize, k: usize) -> usize {
    let g = &f.levels()[p][k];
    let dg: Vec<SparseVec> = g.iter().map(|v| f.apply_d(v)).collect();
    let b: Vec<SparseVec> = match f.prev(k) {
        Some(pk) => f.levels()[0][pk].iter().map(|v| f.apply_d(v)).collect(),
        None => Vec::new(),
    };
    rank(&concat(g, &b)) - rank(&dg) - rank(&b)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorTrace {
    pub generator: String,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedPiece {
    pub t: GenSet,
    pub relative: DegreeSummary,
    pub module_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedDegree {
    pub degree: usize,
    /// E_1: (co)homology of the quotient complex.
    pub lhs_rank: usize,
    /// Σ_T rank H(X, ·) × rank of the graded module.
    pub rhs_rank: usize,
    /// E_∞: successive quotient of images in the total (co)homology.
    pub einf_rank: usize,
    pub pieces: Vec<GradedPiece>,
    /// Per-generator traces; only for finite W.
    pub traces: Vec<GeneratorTrace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedTermReport {
    pub p: usize,
    pub variant: Variant,
    pub radius: usize,
    pub degrees: Vec<GradedDegree>,
    pub ranks_agree: bool,
    pub degenerates: bool,
    pub traces_agree: bool,
}

impl GradedTermReport {
    pub fn ok(&self) -> bool {
        self.ranks_agree && self.degenerates && self.traces_agree
    }
}

/// All graded pieces at once, sharing the filtered complex.
pub fn graded_terms(sys: &CoxeterSystem, x: &MirroredComplex, radius: usize, variant: Variant) -> Result<Vec<GradedTermReport>> {
    if variant == Variant::Cohomology {
        check_spherical_mirrors(sys, x)?;
    }
    let tr = Truncation::new_or_group(sys, radius)?;
    let f = Filtered::new(&tr, x, variant)?;
    let poset = sys.spherical_poset()?;
    let maxp = poset.max_cardinality() + 1;
    (0..=maxp).map(|p| graded_term_in(&f, &poset.sets().collect::<Vec<_>>(), p)).collect()
}

pub fn graded_term(sys: &CoxeterSystem, x: &MirroredComplex, p: usize, radius: usize, variant: Variant) -> Result<GradedTermReport> {
    if variant == Variant::Cohomology {
        check_spherical_mirrors(sys, x)?;
    }
    let tr = Truncation::new_or_group(sys, radius)?;
    let f = Filtered::new(&tr, x, variant)?;
    let sets: Vec<GenSet> = sys.spherical_poset()?.sets().collect();
    graded_term_in(&f, &sets, p)
}

fn graded_term_in(f: &Filtered, sets: &[GenSet], p: usize) -> Result<GradedTermReport> {
    let tr = f.tr;
    let sys = tr.sys;
    let all = sys.all_gens();
    let side = match f.variant {
        Variant::Cohomology => Side::Left,
        Variant::Homology => Side::Right,
    };
    let maxp = f.levels.len() - 1;
    let top = f.degrees();
    let finite = tr.ball.complete;
    let pieces_t: Vec<GenSet> = sets.iter().copied().filter(|t| t.len() == p).collect();
    let mut rel = HashMap::new();
    for &t in &pieces_t {
        let a = match f.variant {
            Variant::Homology => t,
            Variant::Cohomology => all.difference(t),
        };
        rel.insert(t, relative_summary(f.x, a, f.variant)?);
    }
    // module traces per (T, s)
    let mut module_trace: HashMap<(GenSet, Gen), i64> = HashMap::new();
    if finite {
        for &t in &pieces_t {
            for s in all.iter() {
                let q = tr.quotient_action(t, s, side);
                let tr_val: BigInt = (0..q.basis.len()).map(|i| q.matrix.get(i, i).clone()).sum();
                module_trace.insert((t, s), i64::try_from(tr_val).expect("small trace"));
            }
        }
    }
    let fixed_levels: Vec<Vec<Vec<Vec<SparseVec>>>> = if finite && p < maxp {
        all.iter()
            .map(|s| {
                f.levels
                    .iter()
                    .map(|lv| {
                        lv.iter()
                            .map(|gens| {
                                gens.iter()
                                    .map(|v| {
                                        let sv = f.act(s, v);
                                        let mut acc: BTreeMap<usize, BigInt> = v.iter().cloned().collect();
                                        for (i, x) in sv {
                                            *acc.entry(i).or_insert_with(BigInt::zero) += x;
                                        }
                                        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut degrees = Vec::with_capacity(top);
    for k in 0..top {
        let (lhs_rank, einf_rank) = if p < maxp {
            (e1_dim(f, &f.levels, p, k), image_dim(f, p, k) - image_dim(f, p + 1, k))
        } else {
            (0, 0)
        };
        let mut pieces = Vec::new();
        let mut rhs_rank = 0;
        for &t in &pieces_t {
            let module_rank = (0..tr.len()).filter(|&w| tr.descent(w, side) == t).count();
            let r = &rel[&t];
            let relative = DegreeSummary { degree: k as i64, betti: r.betti(k as i64), torsion: r.torsion(k as i64) };
            rhs_rank += relative.betti * module_rank;
            pieces.push(GradedPiece { t, relative, module_rank });
        }
        let mut traces = Vec::new();
        if finite && p < maxp {
            for (si, s) in all.iter().enumerate() {
                let fixed = e1_dim(f, &fixed_levels[si], p, k) as i64;
                let lhs = 2 * fixed - lhs_rank as i64;
                let rhs: i64 = pieces_t.iter().map(|&t| rel[&t].betti(k as i64) as i64 * module_trace[&(t, s)]).sum();
                traces.push(GeneratorTrace { generator: sys.generators()[s as usize].clone(), lhs, rhs });
            }
        }
        degrees.push(GradedDegree { degree: k, lhs_rank, rhs_rank, einf_rank, pieces, traces });
    }
    let ranks_agree = degrees.iter().all(|d| d.lhs_rank == d.rhs_rank);
    let degenerates = degrees.iter().all(|d| d.lhs_rank == d.einf_rank);
    let traces_agree = degrees.iter().all(|d| d.traces.iter().all(|t| t.lhs == t.rhs));
    Ok(GradedTermReport { p, variant: f.variant, radius: tr.radius(), degrees, ranks_agree, degenerates, traces_agree })
}

/// Graded pieces of H^*(W; ZW) = H^*_c(Σ), with X the Davis chamber.
pub fn group_cohomology_graded(sys: &CoxeterSystem, p: usize, radius: usize) -> Result<GradedTermReport> {
    let k = crate::complex::davis_chamber(&sys.spherical_poset()?, sys.generators());
    graded_term(sys, &k, p, radius, Variant::Cohomology)
}

/// rank E_1^{pq} = rank E_∞^{pq}, with p + q the total degree.
pub fn spectral_degeneration_check(sys: &CoxeterSystem, x: &MirroredComplex, p: usize, q: i64, radius: usize) -> Result<bool> {
    let r = graded_term(sys, x, p, radius, Variant::Cohomology)?;
    let deg = p as i64 + q;
    Ok(match r.degrees.iter().find(|d| d.degree as i64 == deg) {
        Some(d) => d.lhs_rank == d.einf_rank,
        None => true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PermutationModuleReport {
    pub t: GenSet,
    pub hom_rank: usize,
    pub invariants_rank: usize,
    pub tensor_rank: usize,
    pub coinvariants_rank: usize,
    pub ok: bool,
}

/// For a right module M of finite rank (given by generator action
/// matrices, acting on row vectors) over finite W:
/// rank Hom_W(Z(W_T\W), M) = rank M^T and rank M ⊗_W Z(W/W_T) = rank M_T.
pub fn permutation_module_check(sys: &CoxeterSystem, t: GenSet, action: &[IntMatrix]) -> Result<PermutationModuleReport> {
    if !sys.is_finite() {
        return Err(Error::NotFinite);
    }
    let tr = Truncation::new_or_group(sys, 0)?;
    let d = action.first().map_or(0, |m| m.rows);
    // x ↦ x·s, with x a row vector
    let act_col = |s: Gen, basis: usize| -> SparseVec {
        (0..d).filter(|&j| !action[s as usize].get(basis, j).is_zero()).map(|j| (j, action[s as usize].get(basis, j).clone())).collect()
    };
    // M^T: nullity of the stacked (x·s − x), s ∈ T
    let mut rows: Vec<SparseVec> = Vec::new();
    for s in t.iter() {
        for i in 0..d {
            let mut v: BTreeMap<usize, BigInt> = act_col(s, i).into_iter().collect();
            *v.entry(i).or_insert_with(BigInt::zero) -= 1;
            // row i of (A_s − I) indexes the coefficient of basis i
            rows.push(v.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
    }
    let transpose = |vs: &[SparseVec], dim: usize| -> Vec<SparseVec> {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); dim];
        for (r, v) in vs.iter().enumerate() {
            for (j, x) in v {
                cols[*j].push((r, x.clone()));
            }
        }
        cols
    };
    let invariants_rank = d - rank(&transpose(&rows, d));
    let coinvariants_rank = d - rank(&rows);
    // right cosets W_T w, indexed by minimal representative
    let n = tr.len();
    let left_rep = |i: usize| -> usize {
        let mut k = i;
        loop {
            match tr.ball.in_left[k].intersection(t).iter().next() {
                Some(s) => k = tr.ball.left[k][s as usize].unwrap(),
                None => return k,
            }
        }
    };
    let reps: Vec<usize> = (0..n).filter(|&i| left_rep(i) == i).collect();
    let rpos: HashMap<usize, usize> = reps.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let m = reps.len();
    // Hom: unknowns f(coset)_j at index coset*d + j; f(C·s) = f(C)·s
    let mut eqs: Vec<SparseVec> = Vec::new();
    for (ci, &r) in reps.iter().enumerate() {
        for s in sys.all_gens().iter() {
            let target = rpos[&left_rep(tr.ball.right[r][s as usize].unwrap())];
            for j in 0..d {
                // component j: f(target)_j − Σ_i f(C)_i A_s[i][j]
                let mut v: BTreeMap<usize, BigInt> = BTreeMap::new();
                *v.entry(target * d + j).or_insert_with(BigInt::zero) += 1;
                for i in 0..d {
                    let a = action[s as usize].get(i, j);
                    if !a.is_zero() {
                        *v.entry(ci * d + i).or_insert_with(BigInt::zero) -= a;
                    }
                }
                eqs.push(v.into_iter().filter(|(_, x)| !x.is_zero()).collect());
            }
        }
    }
    let hom_rank = m * d - rank(&transpose(&eqs, m * d));
    // tensor: M ⊗ Z(W/W_T) modulo x·s ⊗ C − x ⊗ s·C, left cosets by right reps
    let creps: Vec<usize> = (0..n).filter(|&i| tr.coset_rep(i, t) == i).collect();
    let cpos: HashMap<usize, usize> = creps.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mc = creps.len();
    let mut rels: Vec<SparseVec> = Vec::new();
    for (ci, &r) in creps.iter().enumerate() {
        for s in sys.all_gens().iter() {
            let target = cpos[&tr.coset_rep(tr.ball.left[r][s as usize].unwrap(), t)];
            for i in 0..d {
                let mut v: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (j, a) in act_col(s, i) {
                    *v.entry(ci * d + j).or_insert_with(BigInt::zero) += a;
                }
                *v.entry(target * d + i).or_insert_with(BigInt::zero) -= 1;
                rels.push(v.into_iter().filter(|(_, x)| !x.is_zero()).collect());
            }
        }
    }
    let tensor_rank = mc * d - rank(&rels);
    let ok = hom_rank == invariants_rank && tensor_rank == coinvariants_rank;
    Ok(PermutationModuleReport { t, hom_rank, invariants_rank, tensor_rank, coinvariants_rank, ok })
}

/// Right regular representation of finite W: row i of A_s has a 1 at ws.
pub fn regular_action(sys: &CoxeterSystem) -> Result<Vec<IntMatrix>> {
    let tr = Truncation::new_or_group(sys, 0)?;
    let n = tr.len();
    Ok(sys
        .all_gens()
        .iter()
        .map(|s| {
            let mut m = IntMatrix::zeros(n, n);
            for i in 0..n {
                m.set(i, tr.ball.right[i][s as usize].unwrap(), BigInt::one());
            }
            m
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct TripodDemoReport {
    pub radius: usize,
    /// Edge of K on which x is 1, named by its leaf.
    pub edge_leaf: String,
    pub s: String,
    pub x_on_line: i64,
    pub xs_on_line: i64,
    pub x_is_cocycle: bool,
    /// ∂ of the truncated line is supported on non-interior cells.
    pub line_is_interior_cycle: bool,
    /// x + x·s has value a_s at the edge, which lies in the p = 1 piece.
    pub sum_in_next_filtration: bool,
    pub line_cells: usize,
    pub ok: bool,
}

/// Cocycles x and x·s on Σ for Z/2*Z/2*Z/2 against a line through the
/// chambers of the subgroup generated by the other two generators.
pub fn tripod_cocycle_demo(radius: usize) -> Result<TripodDemoReport> {
    let sys = crate::corpus::tripod();
    let poset = sys.spherical_poset()?;
    let k = crate::complex::davis_chamber(&poset, sys.generators());
    let tr = Truncation::new(&sys, radius)?;
    let u = build_u(&tr, &k, Variant::Cohomology)?;
    let (s, t, w) = (0u8, 1u8, 2u8);
    let edge_to = |leaf: Gen| -> usize {
        (0..k.len())
            .find(|&c| {
                k.cells[c].dim == 1 && k.cells[c].faces.iter().any(|&(f, _)| k.cells[f].mirrors == GenSet::singleton(leaf))
            })
            .expect("tripod edge")
    };
    let c_t = edge_to(t);
    let c_u = edge_to(w);
    let id = 0usize;
    // x: indicator of the edge c_t in the base chamber
    let x_cell = u.index[&(id, c_t)];
    // (x·s)(σ) = x(s·σ); supported on σ = (s, c_t)
    let s_idx = tr.ball.position(&sys.generator(s)).expect("s in ball");
    let xs_cell = u.index[&(s_idx, c_t)];
    let x_val = |cell: usize| -> i64 { i64::from(cell == x_cell) };
    let xs_val = |cell: usize| -> i64 {
        let uc = u.cells[cell];
        match tr.ball.left[uc.rep][s as usize] {
            Some(m) => i64::from(tr.coset_rep(m, k.cells[uc.cell].mirrors) == id && uc.cell == c_t),
            None => 0,
        }
    };
    // the line: chambers w of <t,u>, edges c_t and c_u, oriented to form a path
    let sub = GenSet::from_gens([t, w]);
    let mut line: BTreeMap<usize, i64> = BTreeMap::new();
    let orient = |c: usize| -> i64 {
        // +1 if the edge runs from the cone point to the leaf
        let leaf = k.cells[c].faces.iter().find(|&&(f, _)| !k.cells[f].mirrors.is_empty()).unwrap();
        leaf.1
    };
    for g in 0..tr.len() {
        if !tr.ball.elements[g].word().iter().all(|&l| sub.contains(l)) {
            continue;
        }
        // crossing a leaf flips the direction of travel, so the parity of
        // the length decides which edge enters the chamber
        let (into, out) = if tr.length(g) % 2 == 0 { (c_u, c_t) } else { (c_t, c_u) };
        line.insert(u.index[&(g, out)], orient(out));
        line.insert(u.index[&(g, into)], -orient(into));
    }
    let x_on_line: i64 = line.iter().map(|(&c, &v)| x_val(c) * v).sum();
    let xs_on_line: i64 = line.iter().map(|(&c, &v)| xs_val(c) * v).sum();
    // boundary of the line
    let mut bd: BTreeMap<usize, i64> = BTreeMap::new();
    for (&c, &v) in &line {
        for &(f, kk) in &u.faces[c] {
            *bd.entry(f).or_default() += v * kk;
        }
    }
    bd.retain(|_, v| *v != 0);
    let line_is_interior_cycle = bd.keys().all(|&f| !u.cells[f].interior) && bd.len() == 2;
    // δx: X is one-dimensional, so compute the coboundary on U directly
    let x_is_cocycle = u.cells.iter().enumerate().all(|(i, c)| {
        !c.interior || k.cells[c.cell].dim < 2 || u.faces[i].iter().map(|&(f, kk)| x_val(f) * kk).sum::<i64>() == 0
    });
    // x + x·s at cell c_t: e + e_s = a_s, which is a generator of F_1 there
    let f1 = tr.ideal_generators(GenSet::singleton(s), Side::Left);
    let sum = vec![(id, BigInt::one()), (s_idx, BigInt::one())];
    let mut ech = crate::linalg::Echelon::new();
    for g in &f1 {
        ech.insert(g);
    }
    let sum_in_next_filtration = ech.contains(&sum) && xs_cell != x_cell;
    let ok = x_on_line.abs() == 1 && xs_on_line == 0 && x_is_cocycle && line_is_interior_cycle && sum_in_next_filtration;
    // normalize the sign of the line so that ⟨x, line⟩ = 1
    let sign = if x_on_line < 0 { -1 } else { 1 };
    Ok(TripodDemoReport {
        radius,
        edge_leaf: sys.generators()[t as usize].clone(),
        s: sys.generators()[s as usize].clone(),
        x_on_line: x_on_line * sign,
        xs_on_line: xs_on_line * sign,
        x_is_cocycle,
        line_is_interior_cycle,
        sum_in_next_filtration,
        line_cells: line.len(),
        ok,
    })
}
