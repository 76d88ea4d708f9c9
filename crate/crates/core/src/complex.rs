//! Finite regular CW complexes with mirror structures.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coxeter::{GenSet, SphericalPoset};
use crate::error::{Error, Result};
use crate::homology::{ChainComplexZ, Orientation};
use crate::linalg::SparseVec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    /// Codimension-one faces with incidence numbers.
    pub faces: Vec<(usize, i64)>,
    /// S(c): generators whose mirror contains the cell.
    pub mirrors: GenSet,
}

/// A finite complex X with mirrors X_s indexed by generator position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirroredComplex {
    pub generators: Vec<String>,
    pub cells: Vec<Cell>,
}

/// A set of cells of some ambient complex, closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    pub member: Vec<bool>,
}

impl Subcomplex {
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }
    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn contains(&self, c: usize) -> bool {
        self.member[c]
    }
    pub fn is_subset(&self, o: &Subcomplex) -> bool {
        self.member.iter().zip(&o.member).all(|(&a, &b)| !a || b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubcomplexSpec {
    /// X^U, the union of the mirrors X_s for s in U.
    Union(GenSet),
    /// X_T, the intersection of the mirrors X_s for s in T.
    Intersection(GenSet),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CellDoc {
    pub dim: usize,
}

/// Interchange format for complexes.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub cells: Vec<CellDoc>,
    #[serde(default)]
    pub incidence: Vec<(usize, usize, i64)>,
    #[serde(default)]
    pub mirrors: BTreeMap<String, Vec<usize>>,
}

impl MirroredComplex {
    /// Build and validate. `mirrors[s]` lists the cells of X_s.
    pub fn new(
        generators: Vec<String>,
        dims: Vec<usize>,
        incidence: &[(usize, usize, i64)],
        mirrors: &[Vec<usize>],
    ) -> Result<Self> {
        let n = dims.len();
        let mut cells: Vec<Cell> = dims.iter().map(|&dim| Cell { dim, faces: Vec::new(), mirrors: GenSet::EMPTY }).collect();
        for &(c, f, k) in incidence {
            if c >= n || f >= n {
                return Err(Error::BadComplex(format!("incidence ({c}, {f}) names a missing cell")));
            }
            if cells[c].dim != cells[f].dim + 1 {
                return Err(Error::BadComplex(format!("cell {f} is not a codimension-one face of {c}")));
            }
            if k != 0 {
                cells[c].faces.push((f, k));
            }
        }
        for cell in cells.iter_mut() {
            cell.faces.sort_unstable();
            let mut merged: Vec<(usize, i64)> = Vec::new();
            for &(f, k) in &cell.faces {
                match merged.last_mut() {
                    Some(last) if last.0 == f => last.1 += k,
                    _ => merged.push((f, k)),
                }
            }
            merged.retain(|x| x.1 != 0);
            cell.faces = merged;
        }
        if mirrors.len() != generators.len() {
            return Err(Error::DimensionMismatch("one mirror per generator".into()));
        }
        for (s, list) in mirrors.iter().enumerate() {
            for &c in list {
                if c >= n {
                    return Err(Error::BadComplex(format!("mirror {} names missing cell {c}", generators[s])));
                }
                cells[c].mirrors = cells[c].mirrors.with(s as u8);
            }
        }
        let x = MirroredComplex { generators, cells };
        x.validate()?;
        Ok(x)
    }

    fn validate(&self) -> Result<()> {
        for (c, cell) in self.cells.iter().enumerate() {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(f, k) in &cell.faces {
                for &(g, l) in &self.cells[f].faces {
                    *acc.entry(g).or_default() += k * l;
                }
            }
            if acc.values().any(|&x| x != 0) {
                return Err(Error::BadIncidence(c));
            }
            for &(f, _) in &cell.faces {
                if !cell.mirrors.is_subset(self.cells[f].mirrors) {
                    let s = cell.mirrors.difference(self.cells[f].mirrors).iter().next().unwrap();
                    return Err(Error::MirrorNotSubcomplex(self.generators[s as usize].clone(), c));
                }
            }
        }
        Ok(())
    }

    pub fn from_document(doc: &ComplexDocument, generators: &[String]) -> Result<Self> {
        let mut mirrors = vec![Vec::new(); generators.len()];
        for (name, cells) in &doc.mirrors {
            let s = generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            mirrors[s] = cells.clone();
        }
        let dims = doc.cells.iter().map(|c| c.dim).collect();
        Self::new(generators.to_vec(), dims, &doc.incidence, &mirrors)
    }

    pub fn from_json(text: &str, generators: &[String]) -> Result<Self> {
        let doc: ComplexDocument = serde_json::from_str(text)?;
        Self::from_document(&doc, generators)
    }

    pub fn to_document(&self) -> ComplexDocument {
        let cells = self.cells.iter().map(|c| CellDoc { dim: c.dim }).collect();
        let incidence = self
            .cells
            .iter()
            .enumerate()
            .flat_map(|(c, cell)| cell.faces.iter().map(move |&(f, k)| (c, f, k)))
            .collect();
        let mirrors = self
            .generators
            .iter()
            .enumerate()
            .map(|(s, g)| (g.clone(), self.mirror_cells(s as u8)))
            .collect();
        ComplexDocument { cells, incidence, mirrors }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("document serializes")
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn mirror_set(&self, c: usize) -> GenSet {
        self.cells[c].mirrors
    }

    pub fn mirror_cells(&self, s: u8) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.cells[c].mirrors.contains(s)).collect()
    }

    /// Cell indices of each dimension, in index order.
    pub fn cells_by_dim(&self) -> Vec<Vec<usize>> {
        let top = self.dimension().map_or(0, |d| d + 1);
        let mut out = vec![Vec::new(); top];
        for (c, cell) in self.cells.iter().enumerate() {
            out[cell.dim].push(c);
        }
        out
    }

    pub fn subcomplex(&self, spec: SubcomplexSpec) -> Subcomplex {
        let member = self
            .cells
            .iter()
            .map(|c| match spec {
                SubcomplexSpec::Union(u) => !c.mirrors.intersection(u).is_empty(),
                SubcomplexSpec::Intersection(t) => t.is_subset(c.mirrors),
            })
            .collect();
        Subcomplex { member }
    }

    /// Check that a cell set is closed under faces.
    pub fn check_subcomplex(&self, a: &Subcomplex) -> Result<()> {
        if a.member.len() != self.cells.len() {
            return Err(Error::DimensionMismatch("cell set size".into()));
        }
        for c in a.cells() {
            if let Some(&(f, _)) = self.cells[c].faces.iter().find(|(f, _)| !a.member[*f]) {
                let _ = f;
                return Err(Error::NotASubcomplex(c));
            }
        }
        Ok(())
    }

    /// Extract a subcomplex as a complex in its own right.
    pub fn restrict(&self, a: &Subcomplex) -> Result<MirroredComplex> {
        self.check_subcomplex(a)?;
        let keep: Vec<usize> = a.cells().collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let cells = keep
            .iter()
            .map(|&c| {
                let cell = &self.cells[c];
                Cell { dim: cell.dim, faces: cell.faces.iter().map(|&(f, k)| (pos[&f], k)).collect(), mirrors: cell.mirrors }
            })
            .collect();
        Ok(MirroredComplex { generators: self.generators.clone(), cells })
    }

    /// Cellular chains of (X, A), with the cells of X outside A as basis.
    pub fn relative_complex(&self, a: &Subcomplex) -> Result<ChainComplexZ> {
        self.check_subcomplex(a)?;
        let keep = Subcomplex { member: a.member.iter().map(|&m| !m).collect() };
        Ok(self.chains_on(&keep))
    }

    pub fn chain_complex(&self) -> ChainComplexZ {
        self.chains_on(&Subcomplex { member: vec![true; self.cells.len()] })
    }

    /// Chains on a set of cells, dropping faces outside the set.
    fn chains_on(&self, keep: &Subcomplex) -> ChainComplexZ {
        let top = self.dimension().map_or(0, |d| d + 1);
        let mut pos = vec![usize::MAX; self.cells.len()];
        let mut dims = vec![0usize; top];
        for c in keep.cells() {
            let d = self.cells[c].dim;
            pos[c] = dims[d];
            dims[d] += 1;
        }
        let mut maps: Vec<Vec<SparseVec>> = dims.iter().map(|&d| Vec::with_capacity(d)).collect();
        for c in keep.cells() {
            let cell = &self.cells[c];
            let mut col: SparseVec = cell
                .faces
                .iter()
                .filter(|(f, _)| keep.member[*f])
                .map(|&(f, k)| (pos[f], BigInt::from(k)))
                .filter(|(_, k)| !k.is_zero())
                .collect();
            col.sort_by_key(|(i, _)| *i);
            maps[cell.dim].push(col);
        }
        ChainComplexZ::new(Orientation::Chain, 0, dims, maps).expect("validated incidence")
    }
}

/// Davis chamber K: the order complex of the spherical poset, with
/// K_s the chains whose least element contains s.
pub fn davis_chamber(poset: &SphericalPoset, generators: &[String]) -> MirroredComplex {
    let sets: Vec<GenSet> = poset.sets().collect();
    let n = sets.len();
    // all strictly increasing chains, as index lists into `sets`
    let mut chains: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut frontier = chains.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for ch in &frontier {
            let last = sets[*ch.last().unwrap()];
            for j in 0..n {
                if sets[j] != last && last.is_subset(sets[j]) {
                    let mut c = ch.clone();
                    c.push(j);
                    next.push(c);
                }
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<Vec<usize>, usize> = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let cells = chains
        .iter()
        .map(|ch| {
            let faces = if ch.len() == 1 {
                Vec::new()
            } else {
                (0..ch.len())
                    .map(|j| {
                        let mut f = ch.clone();
                        f.remove(j);
                        (index[&f], if j % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            };
            Cell { dim: ch.len() - 1, faces, mirrors: sets[ch[0]] }
        })
        .collect();
    MirroredComplex { generators: generators.to_vec(), cells }
}
