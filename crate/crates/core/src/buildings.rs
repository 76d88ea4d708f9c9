//! Right-angled buildings of finite thickness, modelled as graph products of
//! cyclic groups Z/(q_s + 1) over the Coxeter diagram.
//!
//! A chamber is an element of the graph product in normal form: a sequence of
//! syllables (s, k) with 1 ≤ k ≤ q_s, lexicographically least among all
//! rearrangements by commuting syllables. Two chambers are s-equivalent when
//! they differ by a right factor in the s-th cyclic group, and the W-distance
//! is the type of φ⁻¹φ'.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::complex::MirroredComplex;
use crate::coxeter::{CoxeterSystem, Gen, GenSet, GroupElement};
use crate::equivariant::{assemble, check_spherical_mirrors, relative_summary, FormulaPiece, Variant};
use crate::error::{Error, Result};
use crate::homology::{cohomology, ChainComplexZ, HomologySummary, Orientation};
use crate::linalg::{IntMatrix, SparseVec};

/// Largest thickness accepted per generator.
pub const MAX_THICKNESS: u32 = 4;

pub type Syllable = (Gen, u8);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize)]
pub struct Chamber(pub Vec<Syllable>);

impl Chamber {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// How the folding map of each L_R is based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FoldingChoice {
    /// Base chamber is the least chamber of L_R in normal-form order.
    LexLeast,
    /// Base coordinates drawn pseudo-randomly per residue from a seed.
    Seeded(u64),
}

/// Which spanning family to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// g_φ for the global folding map; spherical buildings only.
    Global,
    /// f_φ built from per-residue foldings.
    Local(FoldingChoice),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildingFunction {
    /// Values indexed by chamber position.
    pub values: SparseVec,
    pub trust_radius: usize,
}

impl BuildingFunction {
    pub fn value(&self, i: usize) -> BigInt {
        self.values.iter().find(|(j, _)| *j == i).map_or_else(BigInt::zero, |(_, v)| v.clone())
    }

    pub fn support(&self) -> Vec<usize> {
        self.values.iter().filter(|(_, v)| !v.is_zero()).map(|(i, _)| *i).collect()
    }

    fn indicator(mut support: Vec<usize>, trust_radius: usize) -> Self {
        support.sort_unstable();
        support.dedup();
        BuildingFunction { values: support.into_iter().map(|i| (i, BigInt::one())).collect(), trust_radius }
    }
}

/// Ball of chambers around the identity chamber.
pub struct ChamberSystem<'a> {
    pub sys: &'a CoxeterSystem,
    pub thickness: Vec<u32>,
    pub radius: usize,
    pub chambers: Vec<Chamber>,
    index: HashMap<Chamber, usize>,
    /// The ball is the whole building.
    pub complete: bool,
}

fn parse_err<T>(msg: String) -> Result<T> {
    Err(Error::BadThickness(msg))
}

impl<'a> ChamberSystem<'a> {
    /// All chambers with at most `radius` syllables.
    pub fn graph_product_ball(sys: &'a CoxeterSystem, thickness: &[u32], radius: usize) -> Result<Self> {
        if !sys.matrix().is_right_angled() {
            return Err(Error::NotRightAngled);
        }
        if thickness.len() != sys.rank() {
            return parse_err(format!("{} values for {} generators", thickness.len(), sys.rank()));
        }
        for (s, &q) in thickness.iter().enumerate() {
            if q == 0 || q > MAX_THICKNESS {
                return parse_err(format!("q_{} = {q} outside 1..={MAX_THICKNESS}", sys.generators()[s]));
            }
        }
        let mut b = ChamberSystem {
            sys,
            thickness: thickness.to_vec(),
            radius,
            chambers: vec![Chamber::default()],
            index: HashMap::new(),
            complete: false,
        };
        b.index.insert(Chamber::default(), 0);
        let mut frontier = vec![Chamber::default()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for c in &frontier {
                for s in 0..sys.rank() as Gen {
                    for k in 1..=thickness[s as usize] {
                        let d = b.mul_syllable(c, s, k);
                        if d.len() == c.len() + 1 && !b.index.contains_key(&d) {
                            b.index.insert(d.clone(), b.chambers.len());
                            b.chambers.push(d.clone());
                            next.push(d);
                        }
                    }
                }
            }
            if b.chambers.len() > sys.max_elements() {
                return Err(Error::ResourceLimit(format!("more than {} chambers", sys.max_elements())));
            }
            if next.is_empty() {
                b.complete = true;
                break;
            }
            frontier = next;
        }
        if !b.complete && sys.is_finite() && radius >= sys.rank() {
            b.complete = true;
        }
        Ok(b)
    }

    /// Product of finite sets of sizes q_s + 1; needs every m_st = 2.
    pub fn spherical_building(sys: &'a CoxeterSystem, thickness: &[u32]) -> Result<Self> {
        let n = sys.rank() as Gen;
        for s in 0..n {
            for t in 0..n {
                if s != t && sys.order(s, t) != Some(2) {
                    return Err(Error::NotRightAngledSpherical);
                }
            }
        }
        Self::graph_product_ball(sys, thickness, sys.rank())
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn chamber(&self, i: usize) -> &Chamber {
        &self.chambers[i]
    }

    pub fn position(&self, c: &Chamber) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn length(&self, i: usize) -> usize {
        self.chambers[i].len()
    }

    pub fn label(&self, c: &Chamber) -> String {
        if c.is_empty() {
            return "1".into();
        }
        c.0.iter().map(|&(s, k)| format!("{}^{k}", self.sys.generators()[s as usize])).collect::<Vec<_>>().join(" ")
    }

    fn commutes(&self, s: Gen, t: Gen) -> bool {
        s != t && self.sys.order(s, t) == Some(2)
    }

    fn modulus(&self, s: Gen) -> u32 {
        self.thickness[s as usize] + 1
    }

    fn normalize(&self, mut rest: Vec<Syllable>) -> Chamber {
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for j in 0..rest.len() {
                let free = rest[..j].iter().all(|&(g, _)| self.commutes(g, rest[j].0));
                if free && best.is_none_or(|b| rest[j] < rest[b]) {
                    best = Some(j);
                }
            }
            out.push(rest.remove(best.expect("the first syllable is always free")));
        }
        Chamber(out)
    }

    /// c · (s, k), with k read modulo q_s + 1.
    pub fn mul_syllable(&self, c: &Chamber, s: Gen, k: u32) -> Chamber {
        let m = self.modulus(s);
        let k = k % m;
        if k == 0 {
            return c.clone();
        }
        let mut v = c.0.clone();
        for j in (0..v.len()).rev() {
            let g = v[j].0;
            if g == s {
                let nk = (v[j].1 as u32 + k) % m;
                if nk == 0 {
                    v.remove(j);
                } else {
                    v[j].1 = nk as u8;
                }
                return self.normalize(v);
            }
            if !self.commutes(g, s) {
                break;
            }
        }
        v.push((s, k as u8));
        self.normalize(v)
    }

    pub fn multiply(&self, a: &Chamber, b: &Chamber) -> Chamber {
        b.0.iter().fold(a.clone(), |acc, &(s, k)| self.mul_syllable(&acc, s, k as u32))
    }

    pub fn inverse(&self, a: &Chamber) -> Chamber {
        let v = a.0.iter().rev().map(|&(s, k)| (s, (self.modulus(s) - k as u32) as u8)).collect();
        self.normalize(v)
    }

    /// Projection of a chamber to W.
    pub fn type_of(&self, c: &Chamber) -> GroupElement {
        let word: Vec<Gen> = c.0.iter().map(|&(s, _)| s).collect();
        self.sys.canonicalize_indices(&word).expect("syllable types are generators")
    }

    pub fn w_distance(&self, a: &Chamber, b: &Chamber) -> GroupElement {
        self.type_of(&self.multiply(&self.inverse(a), b))
    }

    /// Folding map centred at `base`.
    pub fn folding(&self, base: &Chamber, c: &Chamber) -> GroupElement {
        self.w_distance(base, c)
    }

    /// Folding map centred at the identity chamber.
    pub fn pi(&self, i: usize) -> GroupElement {
        self.type_of(&self.chambers[i])
    }

    /// In(π(φ)): generators whose syllable can be moved to the end.
    pub fn descents(&self, c: &Chamber) -> GenSet {
        let v = &c.0;
        let mut d = GenSet::EMPTY;
        for j in 0..v.len() {
            if v[j + 1..].iter().all(|&(g, _)| self.commutes(g, v[j].0)) {
                d = d.with(v[j].0);
            }
        }
        d
    }

    /// Remove trailing syllables with types in `t` until none is left; the
    /// result is the shortest chamber of the T-residue. Returns the removed
    /// syllables as well.
    pub fn strip(&self, c: &Chamber, t: GenSet) -> (Chamber, Vec<Syllable>) {
        let mut v = c.0.clone();
        let mut removed = Vec::new();
        'outer: loop {
            for j in (0..v.len()).rev() {
                if t.contains(v[j].0) && v[j + 1..].iter().all(|&(g, _)| self.commutes(g, v[j].0)) {
                    removed.push(v.remove(j));
                    continue 'outer;
                }
            }
            break;
        }
        (self.normalize(v), removed)
    }

    pub fn residue_rep(&self, c: &Chamber, t: GenSet) -> Chamber {
        self.strip(c, t).0
    }

    /// All chambers of the T-residue through `c`, for spherical T.
    pub fn residue(&self, c: &Chamber, t: GenSet) -> Result<Vec<Chamber>> {
        if !self.sys.is_finite_type(t) {
            return Err(Error::NotSpherical(self.sys.set_label(t)));
        }
        let mut out = vec![c.clone()];
        for s in t.iter() {
            let mut next = Vec::new();
            for d in &out {
                for k in 0..self.modulus(s) {
                    next.push(self.mul_syllable(d, s, k));
                }
            }
            out = next;
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Positions of the chambers of a residue; fails if it leaves the ball.
    pub fn residue_positions(&self, c: &Chamber, t: GenSet) -> Result<Vec<usize>> {
        self.residue(c, t)?
            .iter()
            .map(|d| self.position(d).ok_or_else(|| Error::OutOfTrustRadius(format!("{} outside the ball", self.label(d)))))
            .collect()
    }

    /// Whether the whole T-residue with shortest chamber `rep` lies in the ball.
    pub fn residue_inside(&self, rep: &Chamber, t: GenSet) -> bool {
        self.sys.is_finite_type(t) && rep.len() + t.len() <= self.radius
    }

    /// Shortest chambers of the T-residues lying inside the ball, ordered by
    /// length and then position.
    pub fn residue_reps(&self, t: GenSet) -> Vec<usize> {
        if !self.sys.is_finite_type(t) {
            return Vec::new();
        }
        (0..self.len())
            .filter(|&i| self.descents(&self.chambers[i]).intersection(t).is_empty())
            .filter(|&i| self.residue_inside(&self.chambers[i], t))
            .collect()
    }

    /// L_R for R = Res(c, T): chambers of the residue with the longest π.
    pub fn longest_in_residue(&self, c: &Chamber, t: GenSet) -> Result<Vec<Chamber>> {
        let r = self.residue(c, t)?;
        let top = r.iter().map(|d| d.len()).max().unwrap_or(0);
        Ok(r.into_iter().filter(|d| d.len() == top).collect())
    }

    /// A spherical residue R of type U is greedy when R = Res(φ, In(π(φ)))
    /// for φ in L_R.
    pub fn is_greedy(&self, c: &Chamber, u: GenSet) -> Result<bool> {
        let l = self.longest_in_residue(c, u)?;
        Ok(self.descents(&l[0]) == u)
    }

    /// A gallery of the given type from `a` to `b`, if one exists. Only
    /// decides existence for reduced types.
    pub fn gallery(&self, a: &Chamber, b: &Chamber, word: &[Gen]) -> Option<Vec<Chamber>> {
        let mut rest = self.multiply(&self.inverse(a), b).0;
        let mut path = vec![a.clone()];
        let mut cur = a.clone();
        for &s in word {
            let j = rest.iter().position(|&(g, _)| g == s)?;
            if !rest[..j].iter().all(|&(g, _)| self.commutes(g, s)) {
                return None;
            }
            let (_, k) = rest.remove(j);
            cur = self.mul_syllable(&cur, s, k as u32);
            path.push(cur.clone());
        }
        (rest.is_empty() && &cur == b).then_some(path)
    }

    /// g_φ: characteristic function of Res(φ, Out(π(φ))).
    pub fn g_phi(&self, i: usize) -> Result<BuildingFunction> {
        if !self.complete || !self.sys.is_finite() {
            return Err(Error::NotSpherical(self.sys.set_label(self.sys.all_gens())));
        }
        let c = &self.chambers[i];
        let out = self.sys.all_gens().difference(self.descents(c));
        Ok(BuildingFunction::indicator(self.residue_positions(c, out)?, self.radius))
    }

    /// Out(π_{L_R}(φ)) in W_U for every chamber, with U = In(π(φ)).
    pub fn local_outs(&self, choice: FoldingChoice) -> Vec<GenSet> {
        let mut bases: HashMap<(Chamber, GenSet), BTreeMap<Gen, u8>> = HashMap::new();
        self.chambers
            .iter()
            .map(|c| {
                let u = self.descents(c);
                let (psi, removed) = self.strip(c, u);
                let base = bases.entry((psi.clone(), u)).or_insert_with(|| self.local_base(&psi, u, choice));
                GenSet::from_gens(removed.iter().filter(|(s, k)| base.get(s) == Some(k)).map(|(s, _)| *s))
            })
            .collect()
    }

    fn local_base(&self, psi: &Chamber, u: GenSet, choice: FoldingChoice) -> BTreeMap<Gen, u8> {
        let gens: Vec<Gen> = u.iter().collect();
        match choice {
            FoldingChoice::LexLeast => {
                let mut combos: Vec<Vec<u8>> = vec![Vec::new()];
                for &s in &gens {
                    combos = combos
                        .into_iter()
                        .flat_map(|c| {
                            (1..=self.thickness[s as usize] as u8).map(move |k| {
                                let mut c = c.clone();
                                c.push(k);
                                c
                            })
                        })
                        .collect();
                }
                let best = combos
                    .into_iter()
                    .min_by_key(|ks| {
                        gens.iter().zip(ks).fold(psi.clone(), |acc, (&s, &k)| self.mul_syllable(&acc, s, k as u32))
                    })
                    .expect("at least one combination");
                gens.into_iter().zip(best).collect()
            }
            FoldingChoice::Seeded(seed) => {
                let mut h = DefaultHasher::new();
                (seed, psi, u.0).hash(&mut h);
                let mut rng = StdRng::seed_from_u64(h.finish());
                gens.into_iter().map(|s| (s, rng.gen_range(1..=self.thickness[s as usize] as u8))).collect()
            }
        }
    }

    /// f_φ: characteristic function of Res(φ, Out(π_{L_R}(φ))).
    pub fn f_phi(&self, i: usize, choice: FoldingChoice) -> Result<BuildingFunction> {
        let out = self.local_outs(choice)[i];
        self.f_from(i, out)
    }

    fn f_from(&self, i: usize, out: GenSet) -> Result<BuildingFunction> {
        Ok(BuildingFunction::indicator(self.residue_positions(&self.chambers[i], out)?, self.radius))
    }

    /// The set O(φ) ⊇ T deciding membership of the family member of φ in B^T.
    fn family_outs(&self, family: Family) -> Result<Vec<GenSet>> {
        match family {
            Family::Global => {
                if !self.complete || !self.sys.is_finite() {
                    return Err(Error::NotSpherical(self.sys.set_label(self.sys.all_gens())));
                }
                Ok(self.chambers.iter().map(|c| self.sys.all_gens().difference(self.descents(c))).collect())
            }
            Family::Local(choice) => Ok(self.local_outs(choice)),
        }
    }

    /// B^T ∩ ball as (chamber, function) pairs.
    pub fn family(&self, t: GenSet, family: Family) -> Result<Vec<(usize, BuildingFunction)>> {
        let outs = self.family_outs(family)?;
        (0..self.len()).filter(|&i| t.is_subset(outs[i])).map(|i| Ok((i, self.f_from(i, outs[i])?))).collect()
    }

    /// Check that B^T is a Z-basis of the functions in the ball that are
    /// constant on T-residues.
    pub fn basis_bt(&self, t: GenSet, family: Family) -> Result<BasisReport> {
        let members = self.family(t, family)?;
        let reps = self.residue_reps(t);
        let mut matrix = IntMatrix::zeros(members.len(), reps.len());
        let mut constant = true;
        for (row, (_, f)) in members.iter().enumerate() {
            let mut rebuilt: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (j, &r) in reps.iter().enumerate() {
                let v = f.value(r);
                if v.is_zero() {
                    continue;
                }
                for p in self.residue_positions(&self.chambers[r], t)? {
                    *rebuilt.entry(p).or_default() += &v;
                }
                matrix.set(row, j, v);
            }
            let rebuilt: SparseVec = rebuilt.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if rebuilt != f.values {
                constant = false;
            }
        }
        let square = members.len() == reps.len();
        let determinant = if square { matrix.determinant()? } else { BigInt::zero() };
        let rank = crate::linalg::rank(&matrix.transpose().to_sparse_columns());
        // unitriangular when rows and columns share the chamber order
        let triangular = square
            && members.iter().map(|(i, _)| *i).eq(reps.iter().copied())
            && (0..reps.len()).all(|a| {
                (0..reps.len()).all(|b| {
                    let v = matrix.get(a, b);
                    if a == b {
                        v.is_one()
                    } else {
                        v.is_zero() || self.length(reps[b]) > self.length(reps[a])
                    }
                })
            });
        let independent = rank == members.len();
        let spanning = constant && square && determinant.abs().is_one();
        Ok(BasisReport {
            t,
            family,
            radius: self.radius,
            complete: self.complete,
            size: members.len(),
            residues: reps.len(),
            rank,
            determinant,
            constant_on_residues: constant,
            triangular,
            independent,
            spanning,
            ok: constant && independent && spanning,
        })
    }

    /// rank of ball-truncated A^U against Σ_{T ⊇ U} |B̂^T ∩ ball|.
    pub fn partition_counts(&self, family: Family) -> Result<Vec<PartitionRow>> {
        let outs = self.family_outs(family)?;
        let poset = self.sys.spherical_poset()?;
        let mut hat: BTreeMap<u64, usize> = BTreeMap::new();
        for o in &outs {
            *hat.entry(o.0).or_default() += 1;
        }
        Ok(poset
            .sets()
            .map(|u| {
                let pieces: Vec<(GenSet, usize)> = poset
                    .sets()
                    .filter(|t| u.is_subset(*t))
                    .map(|t| (t, hat.get(&t.0).copied().unwrap_or(0)))
                    .collect();
                let sum = pieces.iter().map(|p| p.1).sum();
                let rank = self.residue_reps(u).len();
                PartitionRow { u, rank, pieces, sum, ok: rank == sum }
            })
            .collect())
    }

    /// For T ⊆ U and every spherical U-residue R: each T-residue of the
    /// building meets L_R in a T-residue of L_R or not at all.
    pub fn residue_intersection_check(&self) -> Result<bool> {
        let poset = self.sys.spherical_poset()?;
        for u in poset.sets() {
            for r in self.residue_reps(u) {
                let l = self.longest_in_residue(&self.chambers[r], u)?;
                let lset: HashSet<&Chamber> = l.iter().collect();
                for t in u.subsets() {
                    // T-residues of L_R as a chamber system in its own right
                    let mut comp: HashMap<&Chamber, usize> = HashMap::new();
                    let mut ncomp = 0;
                    for start in &l {
                        if comp.contains_key(start) {
                            continue;
                        }
                        let mut queue = VecDeque::from([start.clone()]);
                        comp.insert(start, ncomp);
                        while let Some(c) = queue.pop_front() {
                            for s in t.iter() {
                                for k in 1..self.modulus(s) {
                                    let d = self.mul_syllable(&c, s, k);
                                    if let Some(dd) = lset.get(&d) {
                                        if !comp.contains_key(dd) {
                                            comp.insert(dd, ncomp);
                                            queue.push_back(d);
                                        }
                                    }
                                }
                            }
                        }
                        ncomp += 1;
                    }
                    // the partition of L_R cut out by T-residues of the building
                    let mut by_rep: HashMap<Chamber, HashSet<usize>> = HashMap::new();
                    let mut by_comp: HashMap<usize, HashSet<Chamber>> = HashMap::new();
                    for c in &l {
                        by_rep.entry(self.residue_rep(c, t)).or_default().insert(comp[c]);
                        by_comp.entry(comp[c]).or_default().insert(self.residue_rep(c, t));
                    }
                    if by_rep.values().any(|s| s.len() != 1) || by_comp.values().any(|s| s.len() != 1) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Cells (R, c) of the X-realization whose residue R of type S(c) lies in
    /// the ball, with cellular chains relative to the rest.
    pub fn realization(&self, x: &MirroredComplex) -> Result<Realization> {
        check_spherical_mirrors(self.sys, x)?;
        let top = x.dimension().map_or(0, |d| d + 1);
        let mut dims = vec![0usize; top];
        let mut cells = Vec::new();
        let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
        for (c, cell) in x.cells.iter().enumerate() {
            for r in self.residue_reps(cell.mirrors) {
                pos.insert((r, c), dims[cell.dim]);
                dims[cell.dim] += 1;
                cells.push((r, c));
            }
        }
        let mut maps: Vec<Vec<SparseVec>> = dims.iter().map(|&d| vec![Vec::new(); d]).collect();
        for &(r, c) in &cells {
            let cell = &x.cells[c];
            let mut col: BTreeMap<usize, BigInt> = BTreeMap::new();
            for &(f, k) in &cell.faces {
                let rep = self.residue_rep(&self.chambers[r], x.cells[f].mirrors);
                let Some(ri) = self.position(&rep) else { continue };
                if let Some(&p) = pos.get(&(ri, f)) {
                    *col.entry(p).or_default() += k;
                }
            }
            maps[cell.dim][pos[&(r, c)]] = col.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        let chains = ChainComplexZ::new(Orientation::Chain, 0, dims.clone(), maps)?;
        Ok(Realization { cells, dims, chains })
    }

    /// Cohomology of the truncated realization against the assembly
    /// ⊕_T H^*(X, X^{S−T}) ⊗ Z^{|B̂^T ∩ ball|}, plus the per-cell partition of
    /// B^{S(c)} ∩ ball into B̂^T slices.
    pub fn realize(&self, x: &MirroredComplex, family: Family) -> Result<RealizationReport> {
        let real = self.realization(x)?;
        let lhs = cohomology(&real.chains);
        let outs = self.family_outs(family)?;
        let poset = self.sys.spherical_poset()?;
        let all = self.sys.all_gens();
        let mut pieces = Vec::new();
        for t in poset.sets() {
            let slice_count = outs.iter().filter(|o| **o == t).count();
            pieces.push(FormulaPiece { t, relative: relative_summary(x, all.difference(t), Variant::Cohomology)?, slice_count });
        }
        let top = x.dimension().map_or(0, |d| d + 1);
        let rhs = assemble(&pieces, top);
        let mut partition = Vec::new();
        for (c, cell) in x.cells.iter().enumerate() {
            let m = cell.mirrors;
            let cells = real.cells.iter().filter(|(_, cc)| *cc == c).count();
            let basis = outs.iter().filter(|o| m.is_subset(**o)).count();
            let slices: usize = pieces.iter().filter(|p| m.is_subset(p.t)).map(|p| p.slice_count).sum();
            partition.push(CellPartition { cell: c, mirrors: m, cells, basis, slices, ok: cells == basis && basis == slices });
        }
        let equal = lhs == rhs;
        let ok = equal && partition.iter().all(|p| p.ok);
        Ok(RealizationReport {
            radius: self.radius,
            complete: self.complete,
            dims: real.dims,
            euler_characteristic: real.chains.euler_characteristic(),
            lhs,
            rhs,
            pieces,
            partition,
            equal,
            ok,
        })
    }
}

impl fmt::Debug for ChamberSystem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChamberSystem")
            .field("thickness", &self.thickness)
            .field("radius", &self.radius)
            .field("chambers", &self.chambers.len())
            .field("complete", &self.complete)
            .finish()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub t: GenSet,
    pub family: Family,
    pub radius: usize,
    pub complete: bool,
    /// |B^T ∩ ball|
    pub size: usize,
    /// Number of T-residues inside the ball: the rank of truncated A^T.
    pub residues: usize,
    pub rank: usize,
    /// Determinant of the coefficient matrix over residue indicators.
    #[serde(serialize_with = "crate::linalg::decimal::serialize")]
    pub determinant: BigInt,
    pub constant_on_residues: bool,
    pub triangular: bool,
    pub independent: bool,
    pub spanning: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionRow {
    pub u: GenSet,
    pub rank: usize,
    pub pieces: Vec<(GenSet, usize)>,
    pub sum: usize,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct Realization {
    /// (shortest chamber of the residue, cell of X)
    pub cells: Vec<(usize, usize)>,
    pub dims: Vec<usize>,
    pub chains: ChainComplexZ,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellPartition {
    pub cell: usize,
    pub mirrors: GenSet,
    pub cells: usize,
    pub basis: usize,
    pub slices: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationReport {
    pub radius: usize,
    pub complete: bool,
    pub dims: Vec<usize>,
    pub euler_characteristic: i64,
    pub lhs: HomologySummary,
    pub rhs: HomologySummary,
    pub pieces: Vec<FormulaPiece>,
    pub partition: Vec<CellPartition>,
    pub equal: bool,
    pub ok: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn chamber_counts() {
        let z2 = corpus::z2();
        assert_eq!(ChamberSystem::graph_product_ball(&z2, &[2], 1).unwrap().len(), 3);
        let d = corpus::infinite_dihedral();
        let b = ChamberSystem::graph_product_ball(&d, &[2, 2], 2).unwrap();
        assert_eq!(b.len(), 13);
        let k4 = corpus::klein_four();
        let b = ChamberSystem::spherical_building(&k4, &[2, 2]).unwrap();
        assert_eq!(b.len(), 9);
        assert_eq!(b.residue_reps(GenSet::singleton(0)).len(), 3);
        assert_eq!(b.residue_reps(GenSet::singleton(1)).len(), 3);
        assert!(matches!(ChamberSystem::spherical_building(&d, &[2, 2]), Err(Error::NotRightAngledSpherical)));
        assert!(matches!(ChamberSystem::graph_product_ball(&corpus::s3(), &[2, 2], 2), Err(Error::NotRightAngled)));
    }

    #[test]
    fn commuting_syllables_are_identified() {
        let k4 = corpus::klein_four();
        let b = ChamberSystem::spherical_building(&k4, &[2, 2]).unwrap();
        let st = b.mul_syllable(&b.mul_syllable(&Chamber::default(), 0, 1), 1, 2);
        let ts = b.mul_syllable(&b.mul_syllable(&Chamber::default(), 1, 2), 0, 1);
        assert_eq!(st, ts);
    }

    #[test]
    fn distance_examples() {
        let k4 = corpus::klein_four();
        let b = ChamberSystem::spherical_building(&k4, &[2, 2]).unwrap();
        let x = b.chamber(0).clone();
        let y = b.mul_syllable(&x, 0, 1);
        assert_eq!(b.w_distance(&x, &x), k4.identity());
        assert_eq!(b.w_distance(&x, &y), k4.generator(0));
        let l: Vec<_> = b.chambers.iter().filter(|c| b.type_of(c).length() == 2).collect();
        assert_eq!(l.len(), 4);
    }

    #[test]
    fn g_phi_examples() {
        let k4 = corpus::klein_four();
        let b = ChamberSystem::spherical_building(&k4, &[2, 2]).unwrap();
        assert_eq!(b.g_phi(0).unwrap().support().len(), 9);
        let s1 = b.position(&b.mul_syllable(b.chamber(0), 0, 1)).unwrap();
        let g = b.g_phi(s1).unwrap();
        assert_eq!(g.support(), b.residue_positions(b.chamber(s1), GenSet::singleton(1)).unwrap());
        assert_eq!(b.family(GenSet::singleton(0), Family::Global).unwrap().len(), 3);
    }

    #[test]
    fn f_phi_examples() {
        let d = corpus::infinite_dihedral();
        let b = ChamberSystem::graph_product_ball(&d, &[2, 2], 3).unwrap();
        assert_eq!(b.f_phi(0, FoldingChoice::LexLeast).unwrap().support(), vec![0]);
        for i in 0..b.len() {
            if b.pi(i) == d.generator(0) {
                let f = b.f_phi(i, FoldingChoice::LexLeast).unwrap();
                let class = b.residue_positions(b.chamber(i), GenSet::singleton(0)).unwrap();
                assert_eq!(class.len(), 3);
                assert!(f.support().iter().all(|p| class.contains(p)));
            }
        }
    }

    #[test]
    fn bases_on_small_buildings() {
        let k4 = corpus::klein_four();
        let b = ChamberSystem::spherical_building(&k4, &[2, 2]).unwrap();
        for t in k4.all_gens().subsets() {
            let r = b.basis_bt(t, Family::Global).unwrap();
            assert!(r.ok && r.triangular, "{r:?}");
            let r = b.basis_bt(t, Family::Local(FoldingChoice::LexLeast)).unwrap();
            assert!(r.ok, "{r:?}");
        }
        assert!(b.residue_intersection_check().unwrap());
        let d = corpus::infinite_dihedral();
        let b = ChamberSystem::graph_product_ball(&d, &[2, 2], 3).unwrap();
        for t in [GenSet::EMPTY, GenSet::singleton(0), GenSet::singleton(1)] {
            let r = b.basis_bt(t, Family::Local(FoldingChoice::LexLeast)).unwrap();
            assert!(r.ok, "{r:?}");
        }
        let r = b.basis_bt(d.all_gens(), Family::Local(FoldingChoice::LexLeast)).unwrap();
        assert_eq!((r.size, r.residues), (0, 0));
        assert!(b.partition_counts(Family::Local(FoldingChoice::LexLeast)).unwrap().iter().all(|p| p.ok));
    }

    #[test]
    fn tripod_realization() {
        // three chambers of a rank-one building glued along the mirror of an edge
        let z2 = corpus::z2();
        let b = ChamberSystem::spherical_building(&z2, &[2]).unwrap();
        let x = MirroredComplex::new(vec!["s".into()], vec![0, 0, 1], &[(2, 0, -1), (2, 1, 1)], &[vec![1]]).unwrap();
        let r = b.realize(&x, Family::Global).unwrap();
        assert_eq!(r.dims, vec![4, 3]);
        assert_eq!(r.lhs.betti_numbers(), vec![1, 0]);
        assert!(r.ok, "{r:?}");
    }
}
