//! Coxeter systems and their word problem.
//!
//! Elements are stored as canonical reduced words: the ShortLex-least word
//! among all reduced expressions, with letters ordered by generator input
//! order. Reduced expressions of one element are connected by braid moves
//! (Matsumoto), so the braid-move closure of any reduced word yields the
//! canonical form together with both descent sets.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator index, in input order.
pub type Gen = u8;

/// Default cap on the number of elements a single enumeration may produce.
pub const DEFAULT_MAX_ELEMENTS: usize = 200_000;

/// A subset of the generating set, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug, Serialize, Deserialize)]
pub struct GenSet(pub u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(rank: usize) -> Self {
        if rank >= 64 {
            GenSet(u64::MAX)
        } else {
            GenSet((1u64 << rank) - 1)
        }
    }
    pub fn singleton(s: Gen) -> Self {
        GenSet(1u64 << s)
    }
    pub fn from_gens<I: IntoIterator<Item = Gen>>(gens: I) -> Self {
        gens.into_iter().fold(GenSet::EMPTY, |acc, s| acc.with(s))
    }
    pub fn contains(self, s: Gen) -> bool {
        self.0 >> s & 1 == 1
    }
    pub fn with(self, s: Gen) -> Self {
        GenSet(self.0 | 1u64 << s)
    }
    pub fn without(self, s: Gen) -> Self {
        GenSet(self.0 & !(1u64 << s))
    }
    pub fn union(self, o: GenSet) -> Self {
        GenSet(self.0 | o.0)
    }
    pub fn intersection(self, o: GenSet) -> Self {
        GenSet(self.0 & o.0)
    }
    pub fn difference(self, o: GenSet) -> Self {
        GenSet(self.0 & !o.0)
    }
    pub fn is_subset(self, o: GenSet) -> bool {
        self.0 & !o.0 == 0
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn iter(self) -> impl Iterator<Item = Gen> {
        (0..64u8).filter(move |&s| self.contains(s))
    }
    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Vec<GenSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = 0u64;
        loop {
            out.push(GenSet(sub));
            if sub == self.0 {
                break;
            }
            sub = (sub.wrapping_sub(self.0)) & self.0;
        }
        out
    }
    /// Order by cardinality, then lexicographically by sorted generator indices.
    pub fn graded_cmp(self, o: GenSet) -> Ordering {
        self.len()
            .cmp(&o.len())
            .then_with(|| self.iter().collect::<Vec<_>>().cmp(&o.iter().collect::<Vec<_>>()))
    }
}

/// Coxeter matrix as read from JSON; `0` encodes an infinite entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterMatrix {
    pub generators: Vec<String>,
    pub m: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    pub fn new(generators: &[&str], m: Vec<Vec<u32>>) -> Self {
        CoxeterMatrix { generators: generators.iter().map(|s| s.to_string()).collect(), m }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.generators.len();
        if n == 0 {
            return Err(Error::BadEntry("no generators".into()));
        }
        if n > 64 {
            return Err(Error::BadEntry("more than 64 generators".into()));
        }
        let mut seen = HashSet::new();
        for g in &self.generators {
            if !seen.insert(g) {
                return Err(Error::BadEntry(format!("duplicate generator `{g}`")));
            }
        }
        if self.m.len() != n || self.m.iter().any(|row| row.len() != n) {
            return Err(Error::BadEntry(format!("matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if self.m[i][i] != 1 {
                return Err(Error::BadDiagonal(i));
            }
            for j in 0..n {
                if self.m[i][j] != self.m[j][i] {
                    return Err(Error::NonSymmetric(i, j));
                }
                if i != j && self.m[i][j] == 1 {
                    return Err(Error::BadEntry(format!("m[{i}][{j}] = 1 off the diagonal")));
                }
                if i != j && self.m[i][j] > 255 {
                    return Err(Error::BadEntry(format!("m[{i}][{j}] too large")));
                }
            }
        }
        Ok(())
    }

    /// `None` for an infinite entry.
    pub fn order(&self, s: Gen, t: Gen) -> Option<u32> {
        match self.m[s as usize][t as usize] {
            0 => None,
            k => Some(k),
        }
    }

    pub fn is_right_angled(&self) -> bool {
        let n = self.generators.len();
        (0..n).all(|i| (0..n).all(|j| i == j || matches!(self.m[i][j], 0 | 2)))
    }
}

/// An element of W, stored as its canonical reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct GroupElement {
    word: Vec<Gen>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Vec::new() }
    }
    pub fn word(&self) -> &[Gen] {
        &self.word
    }
    pub fn length(&self) -> usize {
        self.word.len()
    }
    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentData {
    pub element: GroupElement,
    /// In(w): s with l(ws) < l(w).
    pub in_right: GenSet,
    /// In'(w): s with l(sw) < l(w).
    pub in_left: GenSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct SphericalSubset {
    pub set: GenSet,
    pub order: usize,
    pub longest: GroupElement,
}

/// All spherical subsets, sorted by cardinality then lexicographically.
#[derive(Clone, Debug)]
pub struct SphericalPoset {
    pub subsets: Vec<SphericalSubset>,
}

impl SphericalPoset {
    pub fn contains(&self, t: GenSet) -> bool {
        self.subsets.iter().any(|e| e.set == t)
    }
    pub fn get(&self, t: GenSet) -> Option<&SphericalSubset> {
        self.subsets.iter().find(|e| e.set == t)
    }
    pub fn sets(&self) -> impl Iterator<Item = GenSet> + '_ {
        self.subsets.iter().map(|e| e.set)
    }
    pub fn max_cardinality(&self) -> usize {
        self.subsets.iter().map(|e| e.set.len()).max().unwrap_or(0)
    }
}

#[derive(Debug)]
struct WordInfo {
    canonical: Vec<Gen>,
    right: GenSet,
    left: GenSet,
    /// For each right descent s, a reduced word of ws.
    drop_right: Vec<(Gen, Vec<Gen>)>,
    /// For each left descent s, a reduced word of sw.
    drop_left: Vec<(Gen, Vec<Gen>)>,
}

/// A Coxeter system with a memoized word problem.
#[derive(Debug)]
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    max_elements: usize,
    memo: Mutex<HashMap<Vec<Gen>, Arc<WordInfo>>>,
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix) -> Result<Self> {
        matrix.validate()?;
        Ok(CoxeterSystem { matrix, max_elements: DEFAULT_MAX_ELEMENTS, memo: Mutex::new(HashMap::new()) })
    }

    pub fn with_max_elements(mut self, cap: usize) -> Self {
        self.max_elements = cap;
        self
    }

    pub fn max_elements(&self) -> usize {
        self.max_elements
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.matrix.generators
    }

    pub fn all_gens(&self) -> GenSet {
        GenSet::full(self.rank())
    }

    pub fn order(&self, s: Gen, t: Gen) -> Option<u32> {
        self.matrix.order(s, t)
    }

    pub fn generator_index(&self, name: &str) -> Result<Gen> {
        self.matrix
            .generators
            .iter()
            .position(|g| g == name)
            .map(|i| i as Gen)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn parse_set<S: AsRef<str>>(&self, names: &[S]) -> Result<GenSet> {
        names.iter().try_fold(GenSet::EMPTY, |acc, n| Ok(acc.with(self.generator_index(n.as_ref())?)))
    }

    pub fn set_names(&self, t: GenSet) -> Vec<String> {
        t.iter().map(|s| self.matrix.generators[s as usize].clone()).collect()
    }

    pub fn set_label(&self, t: GenSet) -> String {
        format!("{{{}}}", self.set_names(t).join(","))
    }

    pub fn word_names(&self, w: &GroupElement) -> Vec<String> {
        w.word.iter().map(|&s| self.matrix.generators[s as usize].clone()).collect()
    }

    pub fn element_label(&self, w: &GroupElement) -> String {
        if w.is_identity() {
            "e".to_string()
        } else {
            self.word_names(w).join("")
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity()
    }

    pub fn generator(&self, s: Gen) -> GroupElement {
        GroupElement { word: vec![s] }
    }

    /// Apply a braid move at position `i` if one is available.
    pub fn braid_move(&self, word: &[Gen], i: usize) -> Option<Vec<Gen>> {
        let a = *word.get(i)?;
        let b = *word.get(i + 1)?;
        if a == b {
            return None;
        }
        let m = self.order(a, b)? as usize;
        if i + m > word.len() {
            return None;
        }
        for j in 0..m {
            let expect = if j % 2 == 0 { a } else { b };
            if word[i + j] != expect {
                return None;
            }
        }
        let mut out = word.to_vec();
        for j in 0..m {
            out[i + j] = if j % 2 == 0 { b } else { a };
        }
        Some(out)
    }

    /// Every word reachable from `word` by braid moves.
    pub fn braid_closure(&self, word: &[Gen]) -> Vec<Vec<Gen>> {
        let mut seen: HashSet<Vec<Gen>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                if let Some(v) = self.braid_move(&w, i) {
                    if seen.insert(v.clone()) {
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Tits' criterion: a word is reduced iff no braid-equivalent word has
    /// two equal adjacent letters.
    pub fn is_reduced(&self, word: &[Gen]) -> bool {
        self.braid_closure(word).iter().all(|w| w.windows(2).all(|p| p[0] != p[1]))
    }

    /// Info for a word already known to be reduced.
    fn info(&self, word: &[Gen]) -> Arc<WordInfo> {
        if let Some(info) = self.memo.lock().unwrap().get(word) {
            return info.clone();
        }
        let closure = self.braid_closure(word);
        let mut right = GenSet::EMPTY;
        let mut left = GenSet::EMPTY;
        let mut drop_right: Vec<(Gen, Vec<Gen>)> = Vec::new();
        let mut drop_left: Vec<(Gen, Vec<Gen>)> = Vec::new();
        for w in &closure {
            if let (Some(&first), Some(&last)) = (w.first(), w.last()) {
                if !right.contains(last) {
                    right = right.with(last);
                    drop_right.push((last, w[..w.len() - 1].to_vec()));
                }
                if !left.contains(first) {
                    left = left.with(first);
                    drop_left.push((first, w[1..].to_vec()));
                }
            }
        }
        let canonical = closure[0].clone();
        let info = Arc::new(WordInfo { canonical: canonical.clone(), right, left, drop_right, drop_left });
        let mut memo = self.memo.lock().unwrap();
        memo.insert(word.to_vec(), info.clone());
        memo.insert(canonical, info.clone());
        info
    }

    fn element_of_reduced(&self, word: &[Gen]) -> GroupElement {
        GroupElement { word: self.info(word).canonical.clone() }
    }

    /// w·s
    pub fn mul_gen(&self, w: &GroupElement, s: Gen) -> GroupElement {
        let info = self.info(&w.word);
        if info.right.contains(s) {
            let shorter = &info.drop_right.iter().find(|(g, _)| *g == s).expect("descent recorded").1;
            self.element_of_reduced(shorter)
        } else {
            let mut longer = info.canonical.clone();
            longer.push(s);
            self.element_of_reduced(&longer)
        }
    }

    /// s·w
    pub fn gen_mul(&self, s: Gen, w: &GroupElement) -> GroupElement {
        let info = self.info(&w.word);
        if info.left.contains(s) {
            let shorter = &info.drop_left.iter().find(|(g, _)| *g == s).expect("descent recorded").1;
            self.element_of_reduced(shorter)
        } else {
            let mut longer = Vec::with_capacity(info.canonical.len() + 1);
            longer.push(s);
            longer.extend_from_slice(&info.canonical);
            self.element_of_reduced(&longer)
        }
    }

    pub fn multiply(&self, u: &GroupElement, v: &GroupElement) -> GroupElement {
        v.word.iter().fold(u.clone(), |acc, &s| self.mul_gen(&acc, s))
    }

    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        let rev: Vec<Gen> = w.word.iter().rev().copied().collect();
        self.element_of_reduced(&rev)
    }

    /// Canonical form of an arbitrary word given by generator indices.
    pub fn canonicalize_indices(&self, word: &[Gen]) -> Result<GroupElement> {
        let n = self.rank();
        let mut acc = GroupElement::identity();
        for &s in word {
            if s as usize >= n {
                return Err(Error::UnknownGenerator(format!("#{s}")));
            }
            acc = self.mul_gen(&acc, s);
        }
        Ok(acc)
    }

    /// Canonical form of a word given by generator names.
    pub fn canonicalize<S: AsRef<str>>(&self, word: &[S]) -> Result<GroupElement> {
        let idx = word.iter().map(|n| self.generator_index(n.as_ref())).collect::<Result<Vec<_>>>()?;
        self.canonicalize_indices(&idx)
    }

    pub fn right_descents(&self, w: &GroupElement) -> GenSet {
        self.info(&w.word).right
    }

    pub fn left_descents(&self, w: &GroupElement) -> GenSet {
        self.info(&w.word).left
    }

    pub fn descents(&self, w: &GroupElement) -> DescentData {
        let info = self.info(&w.word);
        DescentData { element: w.clone(), in_right: info.right, in_left: info.left }
    }

    /// All reduced words of `w`.
    pub fn reduced_words(&self, w: &GroupElement) -> Vec<Vec<Gen>> {
        self.braid_closure(&w.word)
    }

    /// Minimal-length representative of the coset w·W_T.
    pub fn min_rep_right(&self, w: &GroupElement, t: GenSet) -> GroupElement {
        let mut cur = w.clone();
        loop {
            let d = self.right_descents(&cur).intersection(t);
            match d.iter().next() {
                Some(s) => cur = self.mul_gen(&cur, s),
                None => return cur,
            }
        }
    }

    /// Minimal-length representative of the coset W_T·w.
    pub fn min_rep_left(&self, t: GenSet, w: &GroupElement) -> GroupElement {
        let mut cur = w.clone();
        loop {
            let d = self.left_descents(&cur).intersection(t);
            match d.iter().next() {
                Some(s) => cur = self.gen_mul(s, &cur),
                None => return cur,
            }
        }
    }

    /// Finite-type test by classification of the connected components of the
    /// Coxeter diagram of T.
    pub fn is_finite_type(&self, t: GenSet) -> bool {
        let gens: Vec<Gen> = t.iter().collect();
        let mut seen = GenSet::EMPTY;
        for &start in &gens {
            if seen.contains(start) {
                continue;
            }
            let mut comp = vec![start];
            seen = seen.with(start);
            let mut k = 0;
            while k < comp.len() {
                let a = comp[k];
                for &b in &gens {
                    if !seen.contains(b) && self.order(a, b) != Some(2) {
                        seen = seen.with(b);
                        comp.push(b);
                    }
                }
                k += 1;
            }
            if !self.component_is_finite(&comp) {
                return false;
            }
        }
        true
    }

    fn component_is_finite(&self, comp: &[Gen]) -> bool {
        let n = comp.len();
        // edges of the diagram (m >= 3), with label; 0 marks infinity
        let mut edges: Vec<(usize, usize, u32)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                match self.order(comp[i], comp[j]) {
                    Some(2) => {}
                    Some(k) => edges.push((i, j, k)),
                    None => edges.push((i, j, 0)),
                }
            }
        }
        if edges.iter().any(|e| e.2 == 0) {
            return false;
        }
        if n <= 2 {
            return true;
        }
        if edges.len() != n - 1 {
            return false;
        }
        let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for &(i, j, k) in &edges {
            adj[i].push((j, k));
            adj[j].push((i, k));
        }
        if adj.iter().any(|a| a.len() > 3) {
            return false;
        }
        let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 3).collect();
        match branch.len() {
            0 => {
                // a path; read labels from one end
                let start = (0..n).find(|&v| adj[v].len() == 1).expect("path has an end");
                let mut labels = Vec::new();
                let (mut prev, mut cur) = (usize::MAX, start);
                loop {
                    let next = adj[cur].iter().find(|(v, _)| *v != prev);
                    match next {
                        Some(&(v, k)) => {
                            labels.push(k);
                            prev = cur;
                            cur = v;
                        }
                        None => break,
                    }
                }
                let special: Vec<(usize, u32)> =
                    labels.iter().copied().enumerate().filter(|&(_, k)| k != 3).collect();
                match special.as_slice() {
                    [] => true,
                    [(pos, 4)] => {
                        let at_end = *pos == 0 || *pos == labels.len() - 1;
                        at_end || (n == 4 && *pos == 1)
                    }
                    [(pos, 5)] => {
                        let at_end = *pos == 0 || *pos == labels.len() - 1;
                        at_end && (n == 3 || n == 4)
                    }
                    _ => false,
                }
            }
            1 => {
                if edges.iter().any(|e| e.2 != 3) {
                    return false;
                }
                let b = branch[0];
                let mut legs: Vec<usize> = adj[b]
                    .iter()
                    .map(|&(first, _)| {
                        let (mut prev, mut cur, mut len) = (b, first, 1);
                        while let Some(&(v, _)) = adj[cur].iter().find(|(v, _)| *v != prev) {
                            prev = cur;
                            cur = v;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                legs.sort_unstable();
                matches!(legs.as_slice(), [1, 1, _] | [1, 2, 2] | [1, 2, 3] | [1, 2, 4])
            }
            _ => false,
        }
    }

    /// Elements of the parabolic subgroup W_T, sorted.
    pub fn parabolic_elements(&self, t: GenSet) -> Result<Vec<GroupElement>> {
        if !self.is_finite_type(t) {
            return Err(Error::NotSpherical(self.set_label(t)));
        }
        self.enumerate(t, usize::MAX).map(|(elems, _)| elems)
    }

    /// Breadth-first enumeration of elements of W_T up to length `radius`.
    /// Returns the elements and whether the enumeration exhausted W_T.
    fn enumerate(&self, t: GenSet, radius: usize) -> Result<(Vec<GroupElement>, bool)> {
        let mut all = vec![GroupElement::identity()];
        let mut layer = vec![GroupElement::identity()];
        let mut k = 0;
        let mut complete = false;
        while k < radius {
            let mut next: HashSet<GroupElement> = HashSet::new();
            for w in &layer {
                let desc = self.right_descents(w);
                for s in t.difference(desc).iter() {
                    next.insert(self.mul_gen(w, s));
                }
            }
            if next.is_empty() {
                complete = true;
                break;
            }
            let mut next: Vec<_> = next.into_iter().collect();
            next.sort();
            if all.len() + next.len() > self.max_elements {
                return Err(Error::ResourceLimit(format!(
                    "more than {} elements at length {}",
                    self.max_elements,
                    k + 1
                )));
            }
            all.extend(next.iter().cloned());
            layer = next;
            k += 1;
        }
        if !complete && k == radius {
            // the ball is the whole group when no element of length radius has an ascent
            complete = layer.iter().all(|w| t.is_subset(self.right_descents(w)));
        }
        Ok((all, complete))
    }

    pub fn longest_element(&self, t: GenSet) -> Result<GroupElement> {
        let elems = self.parabolic_elements(t)?;
        Ok(elems.last().cloned().expect("identity present"))
    }

    pub fn spherical_poset(&self) -> Result<SphericalPoset> {
        let mut subsets = Vec::new();
        for t in self.all_gens().subsets() {
            if self.is_finite_type(t) {
                let elems = self.parabolic_elements(t)?;
                let longest = elems.last().cloned().expect("identity present");
                subsets.push(SphericalSubset { set: t, order: elems.len(), longest });
            }
        }
        subsets.sort_by(|a, b| a.set.graded_cmp(b.set));
        Ok(SphericalPoset { subsets })
    }

    pub fn ball(&self, radius: usize) -> Result<Ball> {
        let (elements, complete) = self.enumerate(self.all_gens(), radius)?;
        Ok(Ball::build(self, radius, elements, complete))
    }

    /// The ball of radius `radius`, or the whole group if W is finite and
    /// its longest element is longer than `radius`.
    pub fn ball_or_group(&self, radius: usize) -> Result<Ball> {
        if self.is_finite_type(self.all_gens()) {
            let l = self.longest_element(self.all_gens())?.length();
            self.ball(radius.max(l))
        } else {
            self.ball(radius)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.is_finite_type(self.all_gens())
    }

    /// (U,∅)-reduced (left) or (∅,U)-reduced (right) elements of the ball.
    pub fn reduced_reps(&self, u: GenSet, side: Side, radius: usize) -> Result<Vec<GroupElement>> {
        let ball = self.ball(radius)?;
        Ok(ball
            .elements
            .iter()
            .enumerate()
            .filter(|(i, _)| match side {
                Side::Left => ball.in_left[*i].intersection(u).is_empty(),
                Side::Right => ball.in_right[*i].intersection(u).is_empty(),
            })
            .map(|(_, w)| w.clone())
            .collect())
    }

    /// Partition of S into conjugacy classes: s ~ t when joined by a chain of
    /// odd finite bonds.
    pub fn conjugacy_classes(&self) -> Vec<GenSet> {
        let n = self.rank() as Gen;
        let mut classes: Vec<GenSet> = Vec::new();
        let mut seen = GenSet::EMPTY;
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            let mut class = GenSet::singleton(s);
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                for b in 0..n {
                    if !class.contains(b) && matches!(self.order(a, b), Some(k) if k % 2 == 1) {
                        class = class.with(b);
                        stack.push(b);
                    }
                }
            }
            seen = seen.union(class);
            classes.push(class);
        }
        classes
    }
}

/// All elements of length at most `radius`, sorted by (length, ShortLex),
/// with multiplication tables by generators on both sides.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: usize,
    pub elements: Vec<GroupElement>,
    pub index: HashMap<GroupElement, usize>,
    /// right[i][s] = index of w_i·s, if inside the ball.
    pub right: Vec<Vec<Option<usize>>>,
    /// left[i][s] = index of s·w_i, if inside the ball.
    pub left: Vec<Vec<Option<usize>>>,
    pub in_right: Vec<GenSet>,
    pub in_left: Vec<GenSet>,
    /// True if the ball is all of W.
    pub complete: bool,
}

impl Ball {
    fn build(sys: &CoxeterSystem, radius: usize, elements: Vec<GroupElement>, complete: bool) -> Ball {
        let index: HashMap<GroupElement, usize> =
            elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let n = sys.rank() as Gen;
        let mut right = Vec::with_capacity(elements.len());
        let mut left = Vec::with_capacity(elements.len());
        let mut in_right = Vec::with_capacity(elements.len());
        let mut in_left = Vec::with_capacity(elements.len());
        for w in &elements {
            let d = sys.descents(w);
            in_right.push(d.in_right);
            in_left.push(d.in_left);
            right.push((0..n).map(|s| index.get(&sys.mul_gen(w, s)).copied()).collect());
            left.push((0..n).map(|s| index.get(&sys.gen_mul(s, w)).copied()).collect());
        }
        Ball { radius, elements, index, right, left, in_right, in_left, complete }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, w: &GroupElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &GroupElement) -> bool {
        self.index.contains_key(w)
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(gens: &[&str], m: Vec<Vec<u32>>) -> CoxeterSystem {
        CoxeterSystem::new(CoxeterMatrix::new(gens, m)).unwrap()
    }

    fn s3() -> CoxeterSystem {
        sys(&["s", "t"], vec![vec![1, 3], vec![3, 1]])
    }

    fn dinf() -> CoxeterSystem {
        sys(&["s", "t"], vec![vec![1, 0], vec![0, 1]])
    }

    fn a3() -> CoxeterSystem {
        sys(&["s", "t", "u"], vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]])
    }

    #[test]
    fn rejects_bad_matrices() {
        let asym = CoxeterMatrix::new(&["s", "t"], vec![vec![1, 2], vec![3, 1]]);
        assert_eq!(CoxeterSystem::new(asym).unwrap_err(), Error::NonSymmetric(0, 1));
        let diag = CoxeterMatrix::new(&["s", "t"], vec![vec![2, 2], vec![2, 1]]);
        assert_eq!(CoxeterSystem::new(diag).unwrap_err(), Error::BadDiagonal(0));
        let one = CoxeterMatrix::new(&["s", "t"], vec![vec![1, 1], vec![1, 1]]);
        assert!(matches!(CoxeterSystem::new(one).unwrap_err(), Error::BadEntry(_)));
        let z2 = sys(&["s"], vec![vec![1]]);
        assert_eq!(z2.ball(5).unwrap().len(), 2);
    }

    #[test]
    fn canonical_forms() {
        let w = s3();
        assert!(w.canonicalize(&["s", "s"]).unwrap().is_identity());
        let tst = w.canonicalize(&["t", "s", "t"]).unwrap();
        assert_eq!(w.word_names(&tst), vec!["s", "t", "s"]);
        let d = dinf();
        let alt = d.canonicalize(&["s", "t", "s", "t"]).unwrap();
        assert_eq!(alt.length(), 4);
        assert_eq!(d.word_names(&alt), vec!["s", "t", "s", "t"]);
        assert_eq!(w.canonicalize(&["x"]).unwrap_err(), Error::UnknownGenerator("x".into()));
    }

    #[test]
    fn descent_examples() {
        let w = s3();
        let e = w.descents(&w.identity());
        assert!(e.in_left.is_empty() && e.in_right.is_empty());
        let st = w.canonicalize(&["s", "t"]).unwrap();
        let d = w.descents(&st);
        assert_eq!(d.in_left, GenSet::singleton(0));
        assert_eq!(d.in_right, GenSet::singleton(1));
        let sts = w.canonicalize(&["s", "t", "s"]).unwrap();
        let d = w.descents(&sts);
        assert_eq!(d.in_left, GenSet(3));
        assert_eq!(d.in_right, GenSet(3));
    }

    #[test]
    fn finite_type_classification() {
        assert!(s3().is_finite_type(GenSet::EMPTY));
        assert!(!dinf().is_finite_type(GenSet(3)));
        let a = a3();
        assert!(a.is_finite_type(GenSet(7)));
        assert_eq!(a.ball(10).unwrap().len(), 24);
        // affine A2: a triangle of 3s
        let aff = sys(&["a", "b", "c"], vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]);
        assert!(!aff.is_finite_type(GenSet(7)));
        assert!(aff.is_finite_type(GenSet(3)));
        // B3, H3, F4, D4, affine C2 (4,4)
        let b3 = sys(&["a", "b", "c"], vec![vec![1, 4, 2], vec![4, 1, 3], vec![2, 3, 1]]);
        assert!(b3.is_finite_type(GenSet(7)));
        assert_eq!(b3.spherical_poset().unwrap().get(GenSet(7)).unwrap().order, 48);
        let h3 = sys(&["a", "b", "c"], vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]]);
        assert_eq!(h3.parabolic_elements(GenSet(7)).unwrap().len(), 120);
        let c2t = sys(&["a", "b", "c"], vec![vec![1, 4, 2], vec![4, 1, 4], vec![2, 4, 1]]);
        assert!(!c2t.is_finite_type(GenSet(7)));
        let d4 = sys(
            &["a", "b", "c", "d"],
            vec![vec![1, 3, 2, 2], vec![3, 1, 3, 3], vec![2, 3, 1, 2], vec![2, 3, 2, 1]],
        );
        assert!(d4.is_finite_type(GenSet(15)));
        assert_eq!(d4.parabolic_elements(GenSet(15)).unwrap().len(), 192);
        let f4 = sys(
            &["a", "b", "c", "d"],
            vec![vec![1, 3, 2, 2], vec![3, 1, 4, 2], vec![2, 4, 1, 3], vec![2, 2, 3, 1]],
        );
        assert!(f4.is_finite_type(GenSet(15)));
        let g = sys(&["a", "b"], vec![vec![1, 7], vec![7, 1]]);
        assert!(g.is_finite_type(GenSet(3)));
    }

    #[test]
    fn spherical_posets() {
        let tripod = sys(&["s", "t", "u"], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let p = tripod.spherical_poset().unwrap();
        let sets: Vec<u64> = p.sets().map(|t| t.0).collect();
        assert_eq!(sets, vec![0, 1, 2, 4]);
        let p = dinf().spherical_poset().unwrap();
        assert_eq!(p.subsets.len(), 3);
        let p = s3().spherical_poset().unwrap();
        assert_eq!(p.subsets.len(), 4);
        assert_eq!(p.get(GenSet(3)).unwrap().order, 6);
    }

    #[test]
    fn ball_examples() {
        assert_eq!(dinf().ball(0).unwrap().len(), 1);
        let b = dinf().ball(3).unwrap();
        assert_eq!(b.len(), 7);
        let labels: Vec<String> = b.elements.iter().map(|w| dinf().element_label(w)).collect();
        assert_eq!(labels, vec!["e", "s", "t", "st", "ts", "sts", "tst"]);
        let b = s3().ball(10).unwrap();
        assert_eq!(b.len(), 6);
        assert!(b.complete);
        assert!(!dinf().ball(3).unwrap().complete);
    }

    #[test]
    fn reduced_reps_examples() {
        let w = s3();
        let all = w.reduced_reps(GenSet::EMPTY, Side::Left, 3).unwrap();
        assert_eq!(all.len(), 6);
        let left = w.reduced_reps(GenSet::singleton(0), Side::Left, 3).unwrap();
        let labels: Vec<String> = left.iter().map(|x| w.element_label(x)).collect();
        assert_eq!(labels, vec!["e", "t", "ts"]);
        let r = dinf().reduced_reps(GenSet(3), Side::Right, 2).unwrap();
        assert_eq!(r, vec![GroupElement::identity()]);
    }

    #[test]
    fn longest_elements() {
        let w = s3();
        assert!(w.longest_element(GenSet::EMPTY).unwrap().is_identity());
        let l = w.longest_element(GenSet(3)).unwrap();
        assert_eq!(w.word_names(&l), vec!["s", "t", "s"]);
        assert_eq!(w.longest_element(GenSet(1)).unwrap(), w.generator(0));
        assert!(matches!(dinf().longest_element(GenSet(3)), Err(Error::NotSpherical(_))));
    }

    #[test]
    fn finite_group_has_unique_full_descent() {
        for w in [s3(), a3()] {
            let ball = w.ball(20).unwrap();
            let full: Vec<_> = (0..ball.len()).filter(|&i| ball.in_right[i] == w.all_gens()).collect();
            assert_eq!(full.len(), 1);
            assert_eq!(ball.elements[full[0]], w.longest_element(w.all_gens()).unwrap());
        }
    }

    #[test]
    fn coset_reps() {
        let w = a3();
        let ball = w.ball(6).unwrap();
        for x in &ball.elements {
            for t in w.all_gens().subsets() {
                let r = w.min_rep_right(x, t);
                assert!(w.right_descents(&r).intersection(t).is_empty());
                let l = w.min_rep_left(t, x);
                assert!(w.left_descents(&l).intersection(t).is_empty());
            }
        }
    }

    #[test]
    fn conjugacy() {
        let classes = a3().conjugacy_classes();
        assert_eq!(classes, vec![GenSet(7)]);
        let b2 = sys(&["a", "b"], vec![vec![1, 4], vec![4, 1]]);
        assert_eq!(b2.conjugacy_classes().len(), 2);
    }
}
