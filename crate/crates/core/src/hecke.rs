//! The Hecke algebra A_q of a Coxeter system over Q, with parameters
//! constant on conjugacy classes of generators.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::complex::MirroredComplex;
use crate::coxeter::{CoxeterSystem, Gen, GenSet, GroupElement, Side};
use crate::equivariant::{check_spherical_mirrors, e1_dim, image_dim, relative_summary, FilteredOps, Variant};
use crate::error::{Error, Result};
use crate::group_ring::{GroupRingElement, Truncation};
use crate::linalg::{clear_denominators, SparseVec};

type RatVec = BTreeMap<usize, BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sign(l: usize) -> BigRational {
    rat(if l.is_multiple_of(2) { 1 } else { -1 })
}

/// Parses `3`, `-2` or `1/2`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("`{text}` is not a rational number"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Parses `s=2,t=1/2`. A generator left out takes the value given to a
/// conjugate generator; otherwise it is an error.
pub fn parse_parameters(sys: &CoxeterSystem, text: &str) -> Result<Vec<BigRational>> {
    let mut given: Vec<Option<BigRational>> = vec![None; sys.rank()];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got `{part}`")))?;
        given[sys.generator_index(name.trim())? as usize] = Some(parse_rational(value)?);
    }
    let mut q = Vec::with_capacity(sys.rank());
    for s in 0..sys.rank() as Gen {
        let class = sys.conjugacy_classes().into_iter().find(|c| c.contains(s)).expect("classes cover S");
        let v = given[s as usize].clone().or_else(|| class.iter().find_map(|t| given[t as usize].clone()));
        q.push(v.ok_or_else(|| Error::BadParameter(format!("no value for `{}`", sys.generators()[s as usize])))?);
    }
    Ok(q)
}

/// Finitely supported element Σ c_w e_w.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeckeElement {
    pub terms: BTreeMap<GroupElement, BigRational>,
    /// Coefficients are exact for lengths up to this radius; None if exact.
    pub trust_radius: Option<usize>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: GroupElement) -> Self {
        Self::from_terms([(w, BigRational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupElement, BigRational)>>(terms: I) -> Self {
        let mut x = Self::zero();
        for (w, c) in terms {
            x.add_term(w, c);
        }
        x
    }

    pub fn add_term(&mut self, w: GroupElement, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coefficient(&self, w: &GroupElement) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(|w| w.length()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        let mut x = self.clone();
        for (w, c) in &o.terms {
            x.add_term(w.clone(), c.clone());
        }
        x.trust_radius = min_trust(self.trust_radius, o.trust_radius);
        x
    }

    pub fn scale(&self, c: &BigRational) -> HeckeElement {
        let mut x = HeckeElement { terms: BTreeMap::new(), trust_radius: self.trust_radius };
        for (w, v) in &self.terms {
            x.add_term(w.clone(), v * c);
        }
        x
    }

    pub fn sub(&self, o: &HeckeElement) -> HeckeElement {
        self.add(&o.scale(&rat(-1)))
    }

    /// The group ring element with the same coefficients, read in Q W.
    pub fn from_group_ring(x: &GroupRingElement) -> Self {
        let mut h = Self::from_terms(x.terms.iter().map(|(w, c)| (w.clone(), BigRational::from_integer(c.clone()))));
        h.trust_radius = x.trust_radius;
        h
    }
}

fn min_trust(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

pub struct HeckeAlgebra<'a> {
    pub sys: &'a CoxeterSystem,
    q: Vec<BigRational>,
}

impl<'a> HeckeAlgebra<'a> {
    /// Parameters must be positive and agree on conjugate generators.
    pub fn new(sys: &'a CoxeterSystem, q: Vec<BigRational>) -> Result<Self> {
        if q.len() != sys.rank() {
            return Err(Error::BadParameter(format!("{} parameters for {} generators", q.len(), sys.rank())));
        }
        for (s, v) in q.iter().enumerate() {
            if !v.is_positive() {
                return Err(Error::BadParameter(format!("q_{} = {v} is not positive", sys.generators()[s])));
            }
        }
        for class in sys.conjugacy_classes() {
            let gens: Vec<Gen> = class.iter().collect();
            for &t in &gens[1..] {
                if q[t as usize] != q[gens[0] as usize] {
                    return Err(Error::ConjugateMismatch(
                        sys.generators()[gens[0] as usize].clone(),
                        sys.generators()[t as usize].clone(),
                    ));
                }
            }
        }
        Ok(HeckeAlgebra { sys, q })
    }

    pub fn uniform(sys: &'a CoxeterSystem, q: BigRational) -> Result<Self> {
        Self::new(sys, vec![q; sys.rank()])
    }

    pub fn parameters(&self) -> &[BigRational] {
        &self.q
    }

    pub fn q(&self, s: Gen) -> &BigRational {
        &self.q[s as usize]
    }

    pub fn q_word(&self, word: &[Gen]) -> BigRational {
        word.iter().fold(BigRational::one(), |acc, &s| acc * self.q(s))
    }

    /// q_w = q_{s_1}⋯q_{s_l} for any reduced word of w.
    pub fn q_weight(&self, w: &GroupElement) -> BigRational {
        self.q_word(w.word())
    }

    /// e_s·e_w
    pub fn gen_times(&self, s: Gen, w: &GroupElement) -> Vec<(GroupElement, BigRational)> {
        let sw = self.sys.gen_mul(s, w);
        if sw.length() > w.length() {
            vec![(sw, BigRational::one())]
        } else {
            let q = self.q(s);
            vec![(w.clone(), q - BigRational::one()), (sw, q.clone())]
        }
    }

    /// e_w·e_s
    pub fn times_gen(&self, w: &GroupElement, s: Gen) -> Vec<(GroupElement, BigRational)> {
        let ws = self.sys.mul_gen(w, s);
        if ws.length() > w.length() {
            vec![(ws, BigRational::one())]
        } else {
            let q = self.q(s);
            vec![(w.clone(), q - BigRational::one()), (ws, q.clone())]
        }
    }

    fn left_by_gen(&self, s: Gen, x: &BTreeMap<GroupElement, BigRational>) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, c) in x {
            for (v, k) in self.gen_times(s, w) {
                out.add_term(v, c * k);
            }
        }
        out
    }

    /// Product via e_u = e_{s_1}⋯e_{s_k} acting from the left.
    pub fn multiply(&self, x: &HeckeElement, y: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (u, a) in &x.terms {
            let mut cur = y.scale(a);
            for &s in u.word().iter().rev() {
                cur = self.left_by_gen(s, &cur.terms);
            }
            for (w, c) in cur.terms {
                out.add_term(w, c);
            }
        }
        let from_x = x.trust_radius.map(|r| r.saturating_sub(y.max_length()));
        let from_y = y.trust_radius.map(|r| r.saturating_sub(x.max_length()));
        out.trust_radius = min_trust(from_x, from_y);
        out
    }

    /// W_T(q) = Σ_{w ∈ W_T} q_w
    pub fn poincare(&self, t: GenSet) -> Result<BigRational> {
        Ok(self.sys.parabolic_elements(t)?.iter().map(|w| self.q_weight(w)).sum())
    }

    /// W_T(q⁻¹)
    pub fn poincare_inverse(&self, t: GenSet) -> Result<BigRational> {
        Ok(self.sys.parabolic_elements(t)?.iter().map(|w| self.q_weight(w).recip()).sum())
    }

    pub fn symmetrizer(&self, t: GenSet) -> Result<HeckeElement> {
        let p = self.poincare(t)?;
        if p.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let elems = self.sys.parabolic_elements(t)?;
        Ok(HeckeElement::from_terms(elems.into_iter().map(|w| (w, p.recip()))))
    }

    pub fn alternator(&self, t: GenSet) -> Result<HeckeElement> {
        let p = self.poincare_inverse(t)?;
        if p.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let elems = self.sys.parabolic_elements(t)?;
        Ok(HeckeElement::from_terms(elems.into_iter().map(|w| {
            let c = sign(w.length()) * self.q_weight(&w).recip() / &p;
            (w, c)
        })))
    }

    /// α(e_w) = q_w
    pub fn alpha(&self, x: &HeckeElement) -> BigRational {
        x.terms.iter().map(|(w, c)| c * self.q_weight(w)).sum()
    }

    /// β(e_w) = (−1)^{l(w)}
    pub fn beta(&self, x: &HeckeElement) -> BigRational {
        x.terms.iter().map(|(w, c)| c * sign(w.length())).sum()
    }

    pub fn specials(&self, t: GenSet) -> Result<HeckeSpecials> {
        let a = self.symmetrizer(t)?;
        let h = self.alternator(t)?;
        let poincare = self.poincare(t)?;
        let poincare_inverse = self.poincare_inverse(t)?;
        let a_idempotent = self.multiply(&a, &a) == a;
        let h_idempotent = self.multiply(&h, &h) == h;
        let numerator = a.scale(&poincare);
        let alpha_ok = self.alpha(&numerator) == poincare && self.alpha(&a).is_one() && self.beta(&h).is_one();
        Ok(HeckeSpecials { t, a, h, poincare, poincare_inverse, a_idempotent, h_idempotent, alpha_ok })
    }
}

#[derive(Clone, Debug)]
pub struct HeckeSpecials {
    pub t: GenSet,
    pub a: HeckeElement,
    pub h: HeckeElement,
    pub poincare: BigRational,
    pub poincare_inverse: BigRational,
    pub a_idempotent: bool,
    pub h_idempotent: bool,
    /// α(Σ e_w) = W_T(q), α(a_T) = 1, β(h_T) = 1.
    pub alpha_ok: bool,
}

impl HeckeSpecials {
    pub fn ok(&self) -> bool {
        self.a_idempotent && self.h_idempotent && self.alpha_ok
    }
}

/// A random walk of braid moves starting at `word`.
pub fn random_braid_walk<R: Rng>(sys: &CoxeterSystem, word: &[Gen], steps: usize, rng: &mut R) -> Vec<Gen> {
    let mut w = word.to_vec();
    for _ in 0..steps {
        let moves: Vec<Vec<Gen>> = (0..w.len().saturating_sub(1)).filter_map(|i| sys.braid_move(&w, i)).collect();
        if moves.is_empty() {
            break;
        }
        w = moves[rng.gen_range(0..moves.len())].clone();
    }
    w
}

/// A random reduced word of length at most `max_len`.
pub fn random_reduced_word<R: Rng>(sys: &CoxeterSystem, max_len: usize, rng: &mut R) -> Vec<Gen> {
    let target = rng.gen_range(0..=max_len);
    let mut w = sys.identity();
    for _ in 0..4 * target + 4 {
        if w.length() >= target {
            break;
        }
        let s = rng.gen_range(0..sys.rank()) as Gen;
        let ws = sys.mul_gen(&w, s);
        if ws.length() > w.length() {
            w = ws;
        }
    }
    w.word().to_vec()
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidReport {
    pub samples: usize,
    pub failures: usize,
    /// First failing word pair, if any.
    pub witness: Option<(Vec<String>, Vec<String>)>,
}

/// q_w computed along random braid-equivalent reduced words.
pub fn braid_invariance_check<R: Rng>(alg: &HeckeAlgebra, samples: usize, max_len: usize, rng: &mut R) -> BraidReport {
    let sys = alg.sys;
    let mut failures = 0;
    let mut witness = None;
    for _ in 0..samples {
        let word = random_reduced_word(sys, max_len, rng);
        let steps = rng.gen_range(1..=20);
        let other = random_braid_walk(sys, &word, steps, rng);
        let same = sys.canonicalize_indices(&other).ok().map(|w| w.word().to_vec())
            == sys.canonicalize_indices(&word).ok().map(|w| w.word().to_vec());
        if !same || alg.q_word(&word) != alg.q_word(&other) {
            failures += 1;
            if witness.is_none() {
                let names = |w: &[Gen]| w.iter().map(|&s| sys.generators()[s as usize].clone()).collect();
                witness = Some((names(&word), names(&other)));
            }
        }
    }
    BraidReport { samples, failures, witness }
}

/// A_q restricted to a ball of W, in ball coordinates.
pub struct HeckeTruncation<'t, 'a> {
    pub alg: &'t HeckeAlgebra<'a>,
    pub tr: &'t Truncation<'a>,
    qw: Vec<BigRational>,
    parabolic: HashMap<GenSet, Vec<GroupElement>>,
}

impl<'t, 'a> HeckeTruncation<'t, 'a> {
    pub fn new(alg: &'t HeckeAlgebra<'a>, tr: &'t Truncation<'a>) -> Result<Self> {
        let qw = tr.ball.elements.iter().map(|w| alg.q_weight(w)).collect();
        let mut parabolic = HashMap::new();
        for t in tr.sys.spherical_poset()?.sets() {
            parabolic.insert(t, tr.sys.parabolic_elements(t)?);
        }
        Ok(HeckeTruncation { alg, tr, qw, parabolic })
    }

    pub fn len(&self) -> usize {
        self.tr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tr.len() == 0
    }

    fn add(acc: &mut RatVec, i: usize, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = acc.entry(i).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            acc.remove(&i);
        }
    }

    /// v·e_s, or None if the product leaves the ball.
    pub fn right_gen(&self, v: &RatVec, s: Gen) -> Option<RatVec> {
        let mut out = RatVec::new();
        for (&i, c) in v {
            let j = self.tr.ball.right[i][s as usize]?;
            if self.tr.length(j) > self.tr.length(i) {
                Self::add(&mut out, j, c.clone());
            } else {
                let q = self.alg.q(s);
                Self::add(&mut out, i, c * (q - BigRational::one()));
                Self::add(&mut out, j, c * q);
            }
        }
        Some(out)
    }

    /// e_s·v, or None if the product leaves the ball.
    pub fn left_gen(&self, s: Gen, v: &RatVec) -> Option<RatVec> {
        let mut out = RatVec::new();
        for (&i, c) in v {
            let j = self.tr.ball.left[i][s as usize]?;
            if self.tr.length(j) > self.tr.length(i) {
                Self::add(&mut out, j, c.clone());
            } else {
                let q = self.alg.q(s);
                Self::add(&mut out, i, c * (q - BigRational::one()));
                Self::add(&mut out, j, c * q);
            }
        }
        Some(out)
    }

    /// a_T·e_w (left side) or e_w·h_T (right side) for w = w_i.
    pub fn special(&self, i: usize, t: GenSet, side: Side) -> Option<RatVec> {
        let elems = self.parabolic.get(&t)?;
        let mut out = RatVec::new();
        let start: RatVec = [(i, BigRational::one())].into_iter().collect();
        let p: BigRational = match side {
            Side::Left => elems.iter().map(|u| self.alg.q_weight(u)).sum(),
            Side::Right => elems.iter().map(|u| self.alg.q_weight(u).recip()).sum(),
        };
        for u in elems {
            let mut cur = start.clone();
            match side {
                Side::Left => {
                    for &s in u.word().iter().rev() {
                        cur = self.left_gen(s, &cur)?;
                    }
                    for (j, c) in cur {
                        Self::add(&mut out, j, c / &p);
                    }
                }
                Side::Right => {
                    for &s in u.word() {
                        cur = self.right_gen(&cur, s)?;
                    }
                    let k = sign(u.length()) * self.alg.q_weight(u).recip() / &p;
                    for (j, c) in cur {
                        Self::add(&mut out, j, c * &k);
                    }
                }
            }
        }
        Some(out)
    }

    /// b'_w = a_{In'(w)}·e_w (left) or b_w = e_w·h_{In(w)} (right).
    pub fn basis_vector(&self, i: usize, side: Side) -> RatVec {
        self.special(i, self.tr.descent(i, side), side).expect("descent cosets lie below w")
    }

    /// Basis vectors are supported on indices ≤ i with an invertible
    /// coefficient at i.
    pub fn is_triangular(&self, side: Side) -> bool {
        (0..self.len()).all(|i| {
            let v = self.basis_vector(i, side);
            v.keys().next_back() == Some(&i) && !v[&i].is_zero()
        })
    }

    /// Coordinates in the basis {b'_w} or {b_w}, by triangular solve.
    pub fn decompose(&self, v: &RatVec, side: Side) -> RatVec {
        let mut acc = v.clone();
        let mut out = RatVec::new();
        while let Some((&i, c)) = acc.iter().next_back() {
            let b = self.basis_vector(i, side);
            let k = c / &b[&i];
            for (j, x) in b {
                Self::add(&mut acc, j, -(&k * x));
            }
            out.insert(i, k);
        }
        out
    }

    /// Image of e_w in the coinvariants (A_q)_U: e_{w'u} ↦ q_u e_{w'}.
    pub fn project(&self, v: &RatVec, u: GenSet) -> RatVec {
        let mut out = RatVec::new();
        for (&i, c) in v {
            let k = self.tr.coset_rep(i, u);
            Self::add(&mut out, k, c * &self.qw[i] / &self.qw[k]);
        }
        out
    }

    /// Matrix of e_s on A_q^T/A_q^{>T} (left side, acting on the right) or
    /// H_q^T/H_q^{>T} (right side, acting on the left), in the descent basis.
    pub fn quotient_action(&self, t: GenSet, s: Gen, side: Side) -> HeckeQuotientAction {
        let valid = if self.tr.ball.complete { self.tr.radius() } else { self.tr.radius().saturating_sub(1) };
        let basis: Vec<usize> =
            (0..self.len()).filter(|&i| self.tr.descent(i, side) == t && self.tr.length(i) <= valid).collect();
        let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let n = basis.len();
        let mut matrix = vec![vec![BigRational::zero(); n]; n];
        let mut leaking = vec![false; n];
        for (j, &i) in basis.iter().enumerate() {
            let b = self.basis_vector(i, side);
            let img = match side {
                Side::Left => self.right_gen(&b, s),
                Side::Right => self.left_gen(s, &b),
            };
            let Some(img) = img else {
                leaking[j] = true;
                continue;
            };
            for (v, c) in self.decompose(&img, side) {
                if self.tr.descent(v, side) != t {
                    continue;
                }
                match pos.get(&v) {
                    Some(&r) => matrix[r][j] = c,
                    None => leaking[j] = true,
                }
            }
        }
        HeckeQuotientAction { t, s, side, basis, matrix, leaking, valid_radius: valid }
    }
}

#[derive(Clone, Debug)]
pub struct HeckeQuotientAction {
    pub t: GenSet,
    pub s: Gen,
    pub side: Side,
    pub basis: Vec<usize>,
    /// Column j is the image of the j-th basis element.
    pub matrix: Vec<Vec<BigRational>>,
    pub leaking: Vec<bool>,
    pub valid_radius: usize,
}

impl HeckeQuotientAction {
    pub fn trace(&self) -> BigRational {
        (0..self.basis.len()).map(|i| self.matrix[i][i].clone()).sum()
    }
}

/// The Hecke analogue of the filtered coefficient complex, in ambient
/// coordinates c*n + i with rational entries scaled to integers.
struct HeckeFiltered<'h, 't, 'a> {
    ht: &'h HeckeTruncation<'t, 'a>,
    x: &'h MirroredComplex,
    variant: Variant,
    levels: Vec<Vec<Vec<SparseVec>>>,
    targets: Vec<Vec<(usize, i64)>>,
}

fn shift(v: &RatVec, c: usize, n: usize) -> SparseVec {
    let r: Vec<(usize, BigRational)> = v.iter().map(|(i, x)| (c * n + i, x.clone())).collect();
    clear_denominators(&r)
}

impl<'h, 't, 'a> HeckeFiltered<'h, 't, 'a> {
    fn new(ht: &'h HeckeTruncation<'t, 'a>, x: &'h MirroredComplex, variant: Variant) -> Result<Self> {
        let tr = ht.tr;
        let poset = tr.sys.spherical_poset()?;
        let n = tr.len();
        let top = x.dimension().map_or(0, |d| d + 1);
        let maxp = poset.max_cardinality() + 1;
        let mut targets: Vec<Vec<(usize, i64)>> = vec![Vec::new(); x.len()];
        for (c, cell) in x.cells.iter().enumerate() {
            for &(d, k) in &cell.faces {
                match variant {
                    Variant::Homology => targets[c].push((d, k)),
                    Variant::Cohomology => targets[d].push((c, k)),
                }
            }
        }
        let side = match variant {
            Variant::Cohomology => Side::Left,
            Variant::Homology => Side::Right,
        };
        let ideal: HashMap<GenSet, Vec<RatVec>> = poset
            .sets()
            .map(|t| {
                let gens = (0..n)
                    .filter(|&i| t.is_subset(tr.descent(i, side)))
                    .filter_map(|i| ht.special(i, t, side))
                    .collect();
                (t, gens)
            })
            .collect();
        let mut levels = vec![vec![Vec::new(); top]; maxp + 1];
        for (p, level) in levels.iter_mut().enumerate() {
            for (c, cell) in x.cells.iter().enumerate() {
                let m = cell.mirrors;
                for t in poset.sets().filter(|t| t.len() >= p) {
                    match variant {
                        Variant::Cohomology => {
                            if m.is_subset(t) {
                                level[cell.dim].extend(ideal[&t].iter().map(|g| shift(g, c, n)));
                            }
                        }
                        Variant::Homology => {
                            for g in &ideal[&t] {
                                let v = ht.project(g, m);
                                if !v.is_empty() {
                                    level[cell.dim].push(shift(&v, c, n));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(HeckeFiltered { ht, x, variant, levels, targets })
    }

    fn n(&self) -> usize {
        self.ht.len()
    }

    fn split(&self, v: &SparseVec) -> BTreeMap<usize, RatVec> {
        let n = self.n();
        let mut by_cell: BTreeMap<usize, RatVec> = BTreeMap::new();
        for (coord, x) in v {
            by_cell.entry(coord / n).or_default().insert(coord % n, BigRational::from_integer(x.clone()));
        }
        by_cell
    }

    fn join(&self, parts: Vec<(usize, RatVec)>) -> SparseVec {
        let n = self.n();
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (c, v) in parts {
            for (i, x) in v {
                HeckeTruncation::add(&mut acc, c * n + i, x);
            }
        }
        clear_denominators(&acc.into_iter().collect::<Vec<_>>())
    }

    /// (1 + e_s)·v, the projection onto the q_s-eigenspace up to scale.
    /// Finite W only.
    fn plus_act(&self, s: Gen, v: &SparseVec) -> SparseVec {
        let mut parts = Vec::new();
        for (c, w) in self.split(v) {
            let moved = match self.variant {
                Variant::Cohomology => self.ht.right_gen(&w, s).expect("finite group"),
                Variant::Homology => {
                    let img = self.ht.left_gen(s, &w).expect("finite group");
                    self.ht.project(&img, self.x.cells[c].mirrors)
                }
            };
            parts.push((c, w));
            parts.push((c, moved));
        }
        self.join(parts)
    }
}

impl FilteredOps for HeckeFiltered<'_, '_, '_> {
    fn levels(&self) -> &[Vec<Vec<SparseVec>>] {
        &self.levels
    }

    fn variant(&self) -> Variant {
        self.variant
    }

    fn apply_d(&self, v: &SparseVec) -> SparseVec {
        let mut parts = Vec::new();
        for (c, w) in self.split(v) {
            for &(t, k) in &self.targets[c] {
                let moved = match self.variant {
                    Variant::Cohomology => w.clone(),
                    Variant::Homology => self.ht.project(&w, self.x.cells[t].mirrors),
                };
                parts.push((t, moved.into_iter().map(|(i, x)| (i, x * rat(k))).collect()));
            }
        }
        self.join(parts)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeTrace {
    pub generator: String,
    pub lhs: String,
    pub rhs: String,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeGradedDegree {
    pub degree: usize,
    pub lhs_rank: usize,
    pub rhs_rank: usize,
    pub einf_rank: usize,
    pub traces: Vec<HeckeTrace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeGradedReport {
    pub p: usize,
    pub variant: Variant,
    pub radius: usize,
    pub q: Vec<String>,
    pub degrees: Vec<HeckeGradedDegree>,
    pub ranks_agree: bool,
    pub degenerates: bool,
    pub traces_agree: bool,
}

impl HeckeGradedReport {
    pub fn ok(&self) -> bool {
        self.ranks_agree && self.degenerates && self.traces_agree
    }

    /// (degree, E_1 rank, right-hand rank, E_∞ rank) per degree.
    pub fn rank_table(&self) -> Vec<(usize, usize, usize, usize)> {
        self.degrees.iter().map(|d| (d.degree, d.lhs_rank, d.rhs_rank, d.einf_rank)).collect()
    }
}

/// Graded pieces of the filtration with coefficients in A_q, all p.
pub fn hecke_graded_terms(alg: &HeckeAlgebra, x: &MirroredComplex, radius: usize, variant: Variant) -> Result<Vec<HeckeGradedReport>> {
    if variant == Variant::Cohomology {
        check_spherical_mirrors(alg.sys, x)?;
    }
    let tr = Truncation::new_or_group(alg.sys, radius)?;
    let ht = HeckeTruncation::new(alg, &tr)?;
    let f = HeckeFiltered::new(&ht, x, variant)?;
    let maxp = f.levels.len() - 1;
    (0..=maxp).map(|p| hecke_graded_in(&f, p)).collect()
}

pub fn hecke_graded_term(alg: &HeckeAlgebra, x: &MirroredComplex, p: usize, radius: usize, variant: Variant) -> Result<HeckeGradedReport> {
    if variant == Variant::Cohomology {
        check_spherical_mirrors(alg.sys, x)?;
    }
    let tr = Truncation::new_or_group(alg.sys, radius)?;
    let ht = HeckeTruncation::new(alg, &tr)?;
    let f = HeckeFiltered::new(&ht, x, variant)?;
    hecke_graded_in(&f, p)
}

fn hecke_graded_in(f: &HeckeFiltered, p: usize) -> Result<HeckeGradedReport> {
    let ht = f.ht;
    let tr = ht.tr;
    let sys = tr.sys;
    let all = sys.all_gens();
    let side = match f.variant {
        Variant::Cohomology => Side::Left,
        Variant::Homology => Side::Right,
    };
    let maxp = f.levels.len() - 1;
    let top = f.degrees();
    let finite = tr.ball.complete;
    let pieces_t: Vec<GenSet> = sys.spherical_poset()?.sets().filter(|t| t.len() == p).collect();
    let mut rel = HashMap::new();
    for &t in &pieces_t {
        let a = match f.variant {
            Variant::Homology => t,
            Variant::Cohomology => all.difference(t),
        };
        rel.insert(t, relative_summary(f.x, a, f.variant)?);
    }
    let active = finite && p < maxp;
    let mut module_trace: HashMap<(GenSet, Gen), BigRational> = HashMap::new();
    let mut eigen_levels: Vec<Vec<Vec<Vec<SparseVec>>>> = Vec::new();
    if active {
        for &t in &pieces_t {
            for s in all.iter() {
                module_trace.insert((t, s), ht.quotient_action(t, s, side).trace());
            }
        }
        for s in all.iter() {
            eigen_levels.push(
                f.levels
                    .iter()
                    .map(|lv| lv.iter().map(|gens| gens.iter().map(|v| f.plus_act(s, v)).collect()).collect())
                    .collect(),
            );
        }
    }
    let mut degrees = Vec::with_capacity(top);
    for k in 0..top {
        let (lhs_rank, einf_rank) = if p < maxp { (e1_dim(f, &f.levels, p, k), image_dim(f, p, k) - image_dim(f, p + 1, k)) } else { (0, 0) };
        let rhs_rank: usize = pieces_t
            .iter()
            .map(|&t| rel[&t].betti(k as i64) * (0..tr.len()).filter(|&w| tr.descent(w, side) == t).count())
            .sum();
        let mut traces = Vec::new();
        if active {
            for (si, s) in all.iter().enumerate() {
                let m = e1_dim(f, &eigen_levels[si], p, k);
                let q = ht.alg.q(s);
                let lhs = q * rat(m as i64) - rat(lhs_rank as i64 - m as i64);
                let rhs: BigRational =
                    pieces_t.iter().map(|&t| rat(rel[&t].betti(k as i64) as i64) * &module_trace[&(t, s)]).sum();
                traces.push(HeckeTrace {
                    generator: sys.generators()[s as usize].clone(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    agree: lhs == rhs,
                });
            }
        }
        degrees.push(HeckeGradedDegree { degree: k, lhs_rank, rhs_rank, einf_rank, traces });
    }
    Ok(HeckeGradedReport {
        p,
        variant: f.variant,
        radius: tr.radius(),
        q: ht.alg.parameters().iter().map(|q| q.to_string()).collect(),
        ranks_agree: degrees.iter().all(|d| d.lhs_rank == d.rhs_rank),
        degenerates: degrees.iter().all(|d| d.lhs_rank == d.einf_rank),
        traces_agree: degrees.iter().all(|d| d.traces.iter().all(|t| t.agree)),
        degrees,
    })
}
