//! Finite chain complexes of free abelian groups and their (co)homology.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{invariant_factors, rank, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Differentials lower degree.
    Chain,
    /// Differentials raise degree.
    Cochain,
}

/// Free abelian groups C_k for k in `min_degree..min_degree + dims.len()`,
/// with sparse differentials. `maps[k]` is the differential *out of* degree
/// `min_degree + k`, stored column by column: column j is the image of the
/// j-th basis element.
#[derive(Clone, Debug)]
pub struct ChainComplexZ {
    pub orientation: Orientation,
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<SparseVec>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: i64,
    pub betti: usize,
    #[serde(with = "crate::linalg::decimal_vec")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub degrees: Vec<DegreeSummary>,
}

impl HomologySummary {
    pub fn betti(&self, degree: i64) -> usize {
        self.degrees.iter().find(|d| d.degree == degree).map_or(0, |d| d.betti)
    }

    pub fn torsion(&self, degree: i64) -> Vec<BigInt> {
        self.degrees.iter().find(|d| d.degree == degree).map_or_else(Vec::new, |d| d.torsion.clone())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|d| if d.degree % 2 == 0 { d.betti as i64 } else { -(d.betti as i64) }).sum()
    }

    /// Drop trailing and leading zero degrees for comparison and display.
    pub fn nonzero(&self) -> Vec<DegreeSummary> {
        self.degrees.iter().filter(|d| d.betti > 0 || !d.torsion.is_empty()).cloned().collect()
    }
}

impl ChainComplexZ {
    /// Validates shapes and d∘d = 0.
    pub fn new(orientation: Orientation, min_degree: i64, dims: Vec<usize>, maps: Vec<Vec<SparseVec>>) -> Result<Self> {
        if maps.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!("{} maps for {} degrees", maps.len(), dims.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.len() != dims[k] {
                return Err(Error::DimensionMismatch(format!("map out of degree {k} has {} columns", m.len())));
            }
            let target = match orientation {
                Orientation::Chain => k.checked_sub(1).map_or(0, |t| dims[t]),
                Orientation::Cochain => dims.get(k + 1).copied().unwrap_or(0),
            };
            if m.iter().any(|col| col.iter().any(|(i, _)| *i >= target)) {
                return Err(Error::DimensionMismatch(format!("map out of degree {k} leaves its target")));
            }
        }
        let c = ChainComplexZ { orientation, min_degree, dims, maps };
        c.check_square_zero()?;
        Ok(c)
    }

    fn target(&self, k: usize) -> Option<usize> {
        match self.orientation {
            Orientation::Chain => k.checked_sub(1),
            Orientation::Cochain => (k + 1 < self.dims.len()).then_some(k + 1),
        }
    }

    fn apply(map: &[SparseVec], v: &SparseVec) -> SparseVec {
        let mut acc: std::collections::BTreeMap<usize, BigInt> = std::collections::BTreeMap::new();
        for (j, x) in v {
            for (i, y) in &map[*j] {
                *acc.entry(*i).or_default() += x * y;
            }
        }
        acc.into_iter().filter(|(_, x)| x != &BigInt::from(0)).collect()
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 0..self.dims.len() {
            if let Some(t) = self.target(k) {
                for col in &self.maps[k] {
                    if !Self::apply(&self.maps[t], col).is_empty() {
                        return Err(Error::NotAComplex(k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The dual complex Hom(C, Z), with transposed differentials.
    pub fn dual(&self) -> ChainComplexZ {
        let n = self.dims.len();
        let orientation = match self.orientation {
            Orientation::Chain => Orientation::Cochain,
            Orientation::Cochain => Orientation::Chain,
        };
        let mut maps: Vec<Vec<SparseVec>> = self.dims.iter().map(|&d| vec![Vec::new(); d]).collect();
        for k in 0..n {
            if let Some(t) = self.target(k) {
                // map k: C_k -> C_t ; dual goes C_t -> C_k
                for (j, col) in self.maps[k].iter().enumerate() {
                    for (i, x) in col {
                        maps[t][*i].push((j, x.clone()));
                    }
                }
            }
        }
        for m in maps.iter_mut() {
            for col in m.iter_mut() {
                col.sort_by_key(|(i, _)| *i);
            }
        }
        ChainComplexZ { orientation, min_degree: self.min_degree, dims: self.dims.clone(), maps }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if (self.min_degree + k as i64) % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// (Co)homology in the complex's own orientation.
pub fn homology(c: &ChainComplexZ) -> HomologySummary {
    let n = c.dims.len();
    let facts: Vec<(usize, Vec<BigInt>)> = c.maps.iter().map(|m| invariant_factors(m)).collect();
    let mut degrees = Vec::with_capacity(n);
    for k in 0..n {
        let out_rank = if c.target(k).is_some() { facts[k].0 } else { 0 };
        // differential into degree k
        let source = match c.orientation {
            Orientation::Chain => (k + 1 < n).then_some(k + 1),
            Orientation::Cochain => k.checked_sub(1),
        };
        let (in_rank, torsion) = match source {
            Some(s) => (facts[s].0, facts[s].1.clone()),
            None => (0, Vec::new()),
        };
        degrees.push(DegreeSummary {
            degree: c.min_degree + k as i64,
            betti: c.dims[k] - out_rank - in_rank,
            torsion,
        });
    }
    HomologySummary { degrees }
}

/// Cohomology of a chain complex, via the dual.
pub fn cohomology(c: &ChainComplexZ) -> HomologySummary {
    homology(&c.dual())
}

/// Ranks only, over Q; cheaper when torsion is not needed.
pub fn betti_over_q(c: &ChainComplexZ) -> Vec<usize> {
    let n = c.dims.len();
    let ranks: Vec<usize> = c.maps.iter().map(|m| rank(m)).collect();
    (0..n)
        .map(|k| {
            let out_rank = if c.target(k).is_some() { ranks[k] } else { 0 };
            let source = match c.orientation {
                Orientation::Chain => (k + 1 < n).then_some(k + 1),
                Orientation::Cochain => k.checked_sub(1),
            };
            c.dims[k] - out_rank - source.map_or(0, |s| ranks[s])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(i, x)| (i, BigInt::from(x))).collect()
    }

    #[test]
    fn point_and_circle() {
        let pt = ChainComplexZ::new(Orientation::Chain, 0, vec![1], vec![vec![vec![]]]).unwrap();
        assert_eq!(homology(&pt).betti_numbers(), vec![1]);
        assert_eq!(cohomology(&pt).betti_numbers(), vec![1]);
        let circle = ChainComplexZ::new(Orientation::Chain, 0, vec![1, 1], vec![vec![vec![]], vec![vec![]]]).unwrap();
        assert_eq!(homology(&circle).betti_numbers(), vec![1, 1]);
        assert_eq!(cohomology(&circle).betti_numbers(), vec![1, 1]);
    }

    #[test]
    fn projective_plane_torsion() {
        let rp2 = ChainComplexZ::new(
            Orientation::Chain,
            0,
            vec![1, 1, 1],
            vec![vec![vec![]], vec![vec![]], vec![v(&[(0, 2)])]],
        )
        .unwrap();
        let h = homology(&rp2);
        assert_eq!(h.betti_numbers(), vec![1, 0, 0]);
        assert_eq!(h.torsion(1), vec![BigInt::from(2)]);
        let c = cohomology(&rp2);
        assert_eq!(c.torsion(2), vec![BigInt::from(2)]);
        assert!(c.torsion(1).is_empty());
    }

    #[test]
    fn interval_rel_endpoints() {
        // chains of (I, ∂I): only the edge survives in degree 1
        let rel = ChainComplexZ::new(Orientation::Chain, 0, vec![0, 1], vec![vec![], vec![vec![]]]).unwrap();
        assert_eq!(cohomology(&rel).betti(1), 1);
        let interval = ChainComplexZ::new(
            Orientation::Chain,
            0,
            vec![2, 1],
            vec![vec![vec![], vec![]], vec![v(&[(0, -1), (1, 1)])]],
        )
        .unwrap();
        let h = cohomology(&interval);
        assert_eq!(h.betti_numbers(), vec![1, 0]);
        assert_eq!(h.euler_characteristic(), interval.euler_characteristic());
    }

    #[test]
    fn rejects_non_complex() {
        let bad = ChainComplexZ::new(
            Orientation::Chain,
            0,
            vec![1, 1, 1],
            vec![vec![vec![]], vec![v(&[(0, 1)])], vec![v(&[(0, 1)])]],
        );
        assert_eq!(bad.unwrap_err(), Error::NotAComplex(2));
    }
}
