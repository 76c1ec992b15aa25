//! Exact rational linear algebra: graded bases, sparse vectors and matrices,
//! deterministic elimination, and Koszul signs.
//!
//! All scalars are arbitrary-precision rationals ([`Q`]); no operation ever
//! rounds. Elimination uses a fixed pivot rule (smallest row index with a
//! nonzero entry, columns processed in insertion order) so that ranks,
//! kernels and chosen representatives are reproducible across runs.
//!
//! Degree bookkeeping deliberately does not live here: callers that work
//! with graded objects pass plain index spaces and keep track of degrees
//! themselves.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = num_rational::BigRational;

/// Integer constant as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Exact fraction `n/d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
}

/// An ordered list of named generators with degrees, indexable by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<usize>,
    by_degree: BTreeMap<usize, Vec<usize>>,
    index: BTreeMap<String, usize>,
}

impl GradedBasis {
    pub fn new<S: Into<String>>(elements: Vec<(S, usize)>) -> Result<Self, LinalgError> {
        let mut names = Vec::with_capacity(elements.len());
        let mut degrees = Vec::with_capacity(elements.len());
        let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut index = BTreeMap::new();
        for (i, (name, degree)) in elements.into_iter().enumerate() {
            let name = name.into();
            if index.insert(name.clone(), i).is_some() {
                return Err(LinalgError::DuplicateName(name));
            }
            by_degree.entry(degree).or_default().push(i);
            names.push(name);
            degrees.push(degree);
        }
        Ok(GradedBasis { names, degrees, by_degree, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Indices of the elements in a given degree, in basis order.
    pub fn in_degree(&self, degree: usize) -> &[usize] {
        self.by_degree.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim_in_degree(&self, degree: usize) -> usize {
        self.in_degree(degree).len()
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.keys().next_back().copied().unwrap_or(0)
    }

    pub fn degrees_present(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str, usize)> {
        self.names
            .iter()
            .zip(self.degrees.iter())
            .enumerate()
            .map(|(i, (n, d))| (i, n.as_str(), *d))
    }
}

/// Sparse vector over `Q`; explicit zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    dim: usize,
    entries: BTreeMap<usize, Q>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: BTreeMap::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = SparseVec::zero(dim);
        v.set(index, Q::one());
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, Q)>>(dim: usize, entries: I) -> Self {
        let mut v = SparseVec::zero(dim);
        for (i, q) in entries {
            v.add_to(i, &q);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Q {
        self.entries.get(&index).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, index: usize, value: Q) {
        assert!(index < self.dim, "index {index} out of range for dim {}", self.dim);
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn add_to(&mut self, index: usize, value: &Q) {
        assert!(index < self.dim, "index {index} out of range for dim {}", self.dim);
        if value.is_zero() {
            return;
        }
        let entry = self.entries.entry(index).or_insert_with(Q::zero);
        *entry += value;
        if entry.is_zero() {
            self.entries.remove(&index);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Q) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (i, q) in &other.entries {
            self.add_to(*i, &(q * c));
        }
    }

    pub fn scaled(&self, c: &Q) -> SparseVec {
        let mut v = SparseVec::zero(self.dim);
        v.add_scaled(self, c);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.entries.iter().map(|(i, q)| (*i, q))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Smallest index with a nonzero entry.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = Q::zero();
        for (i, q) in &self.entries {
            if let Some(p) = other.entries.get(i) {
                acc += q * p;
            }
        }
        acc
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, q) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{q}*[{i}]")?;
            first = false;
        }
        Ok(())
    }
}

/// Column-sparse matrix: a linear map given by the images of the domain
/// basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: Vec<SparseVec>,
}

/// Result of exact elimination on a map.
#[derive(Debug, Clone)]
pub struct RankDecomposition {
    pub rank: usize,
    /// Basis of the kernel, as vectors in the domain.
    pub kernel: Vec<SparseVec>,
    /// Basis of the image, as vectors in the codomain (reduced column
    /// echelon form).
    pub image: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols: vec![SparseVec::zero(rows); cols] }
    }

    pub fn from_cols(rows: usize, cols: Vec<SparseVec>) -> Self {
        for c in &cols {
            assert_eq!(c.dim(), rows, "column dimension mismatch");
        }
        SparseMat { rows, cols }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat { rows: n, cols: (0..n).map(|i| SparseVec::unit(n, i)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut SparseVec {
        &mut self.cols[j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Q) {
        self.cols[j].set(i, q);
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.cols[j].get(i)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        assert_eq!(v.dim(), self.cols.len(), "dimension mismatch");
        let mut out = SparseVec::zero(self.rows);
        for (j, q) in v.iter() {
            out.add_scaled(&self.cols[j], q);
        }
        out
    }

    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zero(self.cols.len(), self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, q) in col.iter() {
                out.cols[i].set(j, q.clone());
            }
        }
        out
    }

    pub fn compose(&self, inner: &SparseMat) -> SparseMat {
        assert_eq!(inner.rows, self.cols.len(), "dimension mismatch");
        SparseMat {
            rows: self.rows,
            cols: inner.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols.len(), other.cols.len());
        let mut out = self.clone();
        for (j, c) in other.cols.iter().enumerate() {
            out.cols[j].add_scaled(c, &Q::one());
        }
        out
    }

    pub fn scaled(&self, c: &Q) -> SparseMat {
        SparseMat { rows: self.rows, cols: self.cols.iter().map(|v| v.scaled(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    /// Exact rank, kernel basis and image basis.
    ///
    /// Columns are processed left to right; each is reduced against the
    /// pivots found so far, with the pivot of a column the smallest row
    /// index carrying a nonzero entry. Columns that reduce to zero yield
    /// kernel vectors through the tracked combination. The image basis is
    /// returned fully back-reduced, so it is canonical for the given column
    /// order.
    pub fn rank_kernel_image(&self) -> RankDecomposition {
        let n = self.cols.len();
        let mut echelon: Vec<(usize, SparseVec, SparseVec)> = Vec::new(); // (pivot, col, combo)
        let mut kernel = Vec::new();
        for j in 0..n {
            let mut col = self.cols[j].clone();
            let mut combo = SparseVec::unit(n, j);
            // reduce against existing pivots
            loop {
                let Some(lead) = col.leading_index() else { break };
                match echelon.iter().position(|(p, _, _)| *p == lead) {
                    Some(k) => {
                        let c = -col.get(lead);
                        let (_, ec, ecombo) = &echelon[k];
                        let (ec, ecombo) = (ec.clone(), ecombo.clone());
                        col.add_scaled(&ec, &c);
                        combo.add_scaled(&ecombo, &c);
                    }
                    None => break,
                }
            }
            if col.is_zero() {
                kernel.push(combo);
            } else {
                let lead = col.leading_index().unwrap();
                let inv = col.get(lead).recip();
                let col = col.scaled(&inv);
                let combo = combo.scaled(&inv);
                // back-reduce earlier columns against the new pivot
                for (_, ec, ecombo) in echelon.iter_mut() {
                    let c = -ec.get(lead);
                    if !c.is_zero() {
                        ec.add_scaled(&col, &c);
                        ecombo.add_scaled(&combo, &c);
                    }
                }
                echelon.push((lead, col, combo));
            }
        }
        RankDecomposition {
            rank: echelon.len(),
            kernel,
            image: echelon.into_iter().map(|(_, c, _)| c).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new();
        for c in &self.cols {
            elim.offer(c.entries.clone());
        }
        elim.rank()
    }
}

/// Dimension of `ambient / span(subspace)`.
pub fn quotient_dim(ambient_dim: usize, subspace: &[SparseVec]) -> Result<usize, LinalgError> {
    let mut elim = Eliminator::new();
    for v in subspace {
        if v.dim() != ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: ambient_dim, got: v.dim() });
        }
        elim.offer(v.entries.clone());
    }
    Ok(ambient_dim - elim.rank())
}

/// Koszul sign of reordering a sequence of graded elements.
///
/// `perm[i]` is the index (into `degrees`) of the element sitting at
/// position `i` after reordering. The sign is composed transposition by
/// transposition: each adjacent swap of two elements of odd degrees
/// contributes `-1`.
pub fn koszul_sign(degrees: &[usize], perm: &[usize]) -> Result<Q, LinalgError> {
    let n = degrees.len();
    if perm.len() != n {
        return Err(LinalgError::InvalidPermutation(perm.to_vec()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(LinalgError::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    // bubble-sort perm back to the identity, flipping the sign whenever two
    // odd-degree elements pass each other
    let mut arr = perm.to_vec();
    let mut negative = false;
    for i in 0..n {
        for j in (i + 1..n).rev() {
            if arr[j - 1] > arr[j] {
                if degrees[arr[j - 1]] % 2 == 1 && degrees[arr[j]] % 2 == 1 {
                    negative = !negative;
                }
                arr.swap(j - 1, j);
            }
        }
    }
    Ok(if negative { -Q::one() } else { Q::one() })
}

/// Incremental column echelon accumulator over an arbitrary ordered key
/// space.
///
/// Keys play the role of row indices; using e.g. tensor words as keys lets
/// callers run eliminations in spaces whose full basis is never
/// materialized. The pivot of a column is its smallest key, and all stored
/// columns are kept fully back-reduced (pivot entry 1, every other stored
/// column zero at that key), so reduction against the accumulator is
/// canonical for a fixed insertion order.
pub struct Eliminator<K: Ord + Clone> {
    cols: Vec<BTreeMap<K, Q>>,
    pivot_of_col: Vec<K>,
    pivots: BTreeMap<K, usize>,
    /// key -> columns with a nonzero entry at that key (kept only when
    /// back-reduction is on)
    occurrences: BTreeMap<K, Vec<usize>>,
    back_reduce: bool,
}

impl<K: Ord + Clone> Default for Eliminator<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Eliminator<K> {
    /// Fully back-reduced accumulator (canonical reductions).
    pub fn new() -> Self {
        Eliminator {
            cols: Vec::new(),
            pivot_of_col: Vec::new(),
            pivots: BTreeMap::new(),
            occurrences: BTreeMap::new(),
            back_reduce: true,
        }
    }

    /// Forward-only accumulator; cheaper when only the rank is needed.
    pub fn rank_only() -> Self {
        Eliminator { back_reduce: false, ..Eliminator::new() }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivot_of_col.iter()
    }

    pub fn has_pivot(&self, key: &K) -> bool {
        self.pivots.contains_key(key)
    }

    pub fn columns(&self) -> &[BTreeMap<K, Q>] {
        &self.cols
    }

    pub fn pivot_of(&self, col: usize) -> &K {
        &self.pivot_of_col[col]
    }

    /// Reduce `v` against the stored columns (kill every pivot key).
    ///
    /// Stored columns never carry keys below their pivot, so a single
    /// forward sweep suffices: once a key has been passed over it can no
    /// longer be reintroduced or gain a pivot.
    pub fn reduce(&self, mut v: BTreeMap<K, Q>) -> BTreeMap<K, Q> {
        let mut cursor: Option<K> = None;
        loop {
            let hit = {
                let range: Box<dyn Iterator<Item = (&K, &Q)>> = match &cursor {
                    None => Box::new(v.iter()),
                    Some(c) => Box::new(v.range((
                        std::ops::Bound::Excluded(c.clone()),
                        std::ops::Bound::Unbounded,
                    ))),
                };
                let mut found = None;
                for (k, _) in range {
                    match self.pivots.get(k) {
                        Some(&cidx) => {
                            found = Some((k.clone(), cidx, true));
                            break;
                        }
                        None => found = Some((k.clone(), 0, false)),
                    }
                }
                found
            };
            match hit {
                None => return v,
                Some((key, cidx, true)) => {
                    let coeff = v.get(&key).cloned().unwrap();
                    sub_scaled(&mut v, &self.cols[cidx], &coeff);
                    cursor = Some(key);
                }
                Some((key, _, false)) => {
                    cursor = Some(key);
                }
            }
        }
    }

    /// Reduce and, if nonzero, install `v` as a new pivot column. Returns
    /// the column index, or `None` if `v` lies in the current span.
    pub fn offer(&mut self, v: BTreeMap<K, Q>) -> Option<usize> {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return None;
        }
        let pivot = v.keys().next().cloned().unwrap();
        let lead = v.get(&pivot).cloned().unwrap();
        if !lead.is_one() {
            let inv = lead.recip();
            for q in v.values_mut() {
                *q *= &inv;
            }
        }
        let idx = self.cols.len();
        if self.back_reduce {
            let holders: Vec<usize> = self
                .occurrences
                .get(&pivot)
                .map(|v| v.clone())
                .unwrap_or_default();
            for h in holders {
                let coeff = self.cols[h].get(&pivot).cloned();
                if let Some(coeff) = coeff {
                    let mut col = std::mem::take(&mut self.cols[h]);
                    self.unindex(h, &col);
                    sub_scaled(&mut col, &v, &coeff);
                    self.index_occurrences(h, &col);
                    self.cols[h] = col;
                }
            }
            self.index_occurrences(idx, &v);
        }
        self.pivots.insert(pivot.clone(), idx);
        self.pivot_of_col.push(pivot);
        self.cols.push(v);
        Some(idx)
    }

    fn index_occurrences(&mut self, col: usize, v: &BTreeMap<K, Q>) {
        for k in v.keys() {
            self.occurrences.entry(k.clone()).or_default().push(col);
        }
    }

    fn unindex(&mut self, col: usize, v: &BTreeMap<K, Q>) {
        for k in v.keys() {
            if let Some(list) = self.occurrences.get_mut(k) {
                list.retain(|&c| c != col);
            }
        }
    }
}

/// Outcome of offering a vector to a [`TrackedEliminator`].
pub enum OfferOutcome {
    /// Installed as pivot column with this index.
    Pivot(usize),
    /// Linearly dependent; the combination over previously offered vectors
    /// (including this one, with coefficient 1) that sums to zero.
    Dependent(BTreeMap<usize, Q>),
}

/// Column echelon accumulator that remembers how each stored column is
/// composed from the offered vectors. Fully back-reduced, deterministic.
pub struct TrackedEliminator<K: Ord + Clone> {
    main: Vec<BTreeMap<K, Q>>,
    combo: Vec<BTreeMap<usize, Q>>,
    pivots: BTreeMap<K, usize>,
    pivot_of_col: Vec<K>,
    /// key -> columns with a nonzero entry at that key
    occurrences: BTreeMap<K, Vec<usize>>,
    offered: usize,
}

impl<K: Ord + Clone> Default for TrackedEliminator<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> TrackedEliminator<K> {
    pub fn new() -> Self {
        TrackedEliminator {
            main: Vec::new(),
            combo: Vec::new(),
            pivots: BTreeMap::new(),
            pivot_of_col: Vec::new(),
            occurrences: BTreeMap::new(),
            offered: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.main.len()
    }

    pub fn offered(&self) -> usize {
        self.offered
    }

    pub fn columns(&self) -> &[BTreeMap<K, Q>] {
        &self.main
    }

    pub fn pivot_of(&self, col: usize) -> &K {
        &self.pivot_of_col[col]
    }

    pub fn has_pivot(&self, key: &K) -> bool {
        self.pivots.contains_key(key)
    }

    /// Reduce `v` against the stored columns.
    pub fn reduce(&self, mut v: BTreeMap<K, Q>) -> BTreeMap<K, Q> {
        loop {
            let hit = v
                .iter()
                .find_map(|(k, _)| self.pivots.get(k).map(|&c| (k.clone(), c)));
            let Some((key, cidx)) = hit else { return v };
            let coeff = v.get(&key).cloned().unwrap();
            sub_scaled(&mut v, &self.main[cidx], &coeff);
        }
    }

    /// Offer a vector; install it or report the dependency it exposes.
    pub fn offer(&mut self, mut v: BTreeMap<K, Q>) -> OfferOutcome {
        let tag = self.offered;
        self.offered += 1;
        let mut combo: BTreeMap<usize, Q> = BTreeMap::from([(tag, Q::one())]);
        loop {
            let hit = v
                .iter()
                .find_map(|(k, _)| self.pivots.get(k).map(|&c| (k.clone(), c)));
            let Some((key, cidx)) = hit else { break };
            let coeff = v.get(&key).cloned().unwrap();
            sub_scaled(&mut v, &self.main[cidx], &coeff);
            sub_scaled(&mut combo, &self.combo[cidx], &coeff);
        }
        if v.is_empty() {
            return OfferOutcome::Dependent(combo);
        }
        let pivot = v.keys().next().cloned().unwrap();
        let lead = v.get(&pivot).cloned().unwrap();
        if !lead.is_one() {
            let inv = lead.recip();
            for q in v.values_mut() {
                *q *= &inv;
            }
            for q in combo.values_mut() {
                *q *= &inv;
            }
        }
        let holders: Vec<usize> = self.occurrences.get(&pivot).cloned().unwrap_or_default();
        for i in holders {
            let c = self.main[i].get(&pivot).cloned();
            if let Some(c) = c {
                let mut col = std::mem::take(&mut self.main[i]);
                for k in col.keys() {
                    if let Some(list) = self.occurrences.get_mut(k) {
                        list.retain(|&x| x != i);
                    }
                }
                sub_scaled(&mut col, &v, &c);
                for k in col.keys() {
                    self.occurrences.entry(k.clone()).or_default().push(i);
                }
                self.main[i] = col;
                sub_scaled(&mut self.combo[i], &combo, &c);
            }
        }
        let idx = self.main.len();
        for k in v.keys() {
            self.occurrences.entry(k.clone()).or_default().push(idx);
        }
        self.pivots.insert(pivot.clone(), idx);
        self.pivot_of_col.push(pivot);
        self.main.push(v);
        self.combo.push(combo);
        OfferOutcome::Pivot(idx)
    }

    /// Combination of the *offered* vectors equal to `v`, when `v` lies in
    /// their span.
    pub fn express(&self, v: BTreeMap<K, Q>) -> Option<BTreeMap<usize, Q>> {
        let mut v = v;
        let mut coords: BTreeMap<usize, Q> = BTreeMap::new();
        loop {
            let hit = v
                .iter()
                .find_map(|(k, _)| self.pivots.get(k).map(|&c| (k.clone(), c)));
            let Some((key, cidx)) = hit else { break };
            let coeff = v.get(&key).cloned().unwrap();
            sub_scaled(&mut v, &self.main[cidx], &coeff);
            for (j, q) in &self.combo[cidx] {
                add_term(&mut coords, *j, q * &coeff);
            }
        }
        if v.is_empty() {
            Some(coords)
        } else {
            None
        }
    }
}

/// `v -= c * w` on sparse maps.
pub fn sub_scaled<K: Ord + Clone>(v: &mut BTreeMap<K, Q>, w: &BTreeMap<K, Q>, c: &Q) {
    if c.is_zero() {
        return;
    }
    for (k, q) in w {
        let delta = q * c;
        match v.get_mut(k) {
            Some(entry) => {
                *entry -= &delta;
                if entry.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    v.insert(k.clone(), -delta);
                }
            }
        }
    }
}

/// `v += c * w` on sparse maps.
pub fn add_scaled_map<K: Ord + Clone>(v: &mut BTreeMap<K, Q>, w: &BTreeMap<K, Q>, c: &Q) {
    sub_scaled(v, w, &-c.clone());
}

/// Add a single term to a sparse map.
pub fn add_term<K: Ord + Clone>(v: &mut BTreeMap<K, Q>, key: K, q: Q) {
    if q.is_zero() {
        return;
    }
    match v.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(q);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += q;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Pretty-printer for rationals that keeps integers plain.
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse "n" or "n/d".
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: num_bigint::BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}
