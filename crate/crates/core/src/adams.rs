//! The loop-space homology page of a simply connected ring.
//!
//! The first page is the tensor algebra on reduced homology with degrees
//! lowered by one; the differential is the degree `-1` derivation whose
//! value on a letter is the transpose of the cup product twisted by
//! `J(u) = (-1)^{|u|} u` on the left factor. For formal spaces the second
//! page carries the loop-space homology, its coalgebra primitives carry the
//! rational homotopy groups, and the column index refines both by the
//! filtration by tensor length.
//!
//! Dimensions are computed without materializing the full word bases:
//! counting handles the free part and exact elimination runs only on the
//! small blocks of words whose letters have nonzero differential.
//!
//! The global sign of the differential is a convention: moving the twist
//! to the right tensor factor is a one-line change in
//! [`LoopAlgebra::from_coalgebra`] and flips nothing that is checked here,
//! since `∂² = 0` is asserted exactly either way and all reported
//! quantities are dimensions.

use std::collections::BTreeMap;

use num_traits::One;
use thiserror::Error;

use crate::coalgebra::{reduced_coproduct, HomologyCoalgebra};
use crate::linalg::{add_term, Eliminator, OfferOutcome, Q, TrackedEliminator};
use crate::ring::CohomologyRing;
use crate::word::Word;

/// Default cap on materialized words, overridable per call.
pub const DEFAULT_WORD_CAP: u128 = 2_000_000;

#[derive(Debug, Error)]
pub enum AdamsError {
    #[error("the page complex needs a simply connected ring (no degree-1 classes)")]
    NotSimplyConnected,
    #[error("degree bound {0} too small (need at least 2)")]
    BoundTooSmall(usize),
    #[error("estimated working set of {estimate} words exceeds the cap of {cap}; lower the degree bound or raise the cap")]
    ResourceLimit { estimate: u128, cap: u128 },
    #[error("the quartic homotopy sequence is stated only for b_2 = 1, got b_2 = {0}")]
    NeedsB2One(usize),
}

/// Letters and generator differential of the page complex.
#[derive(Debug, Clone)]
pub struct LoopAlgebra {
    /// (name, homology degree) per letter; all degrees >= 2.
    letters: Vec<(String, usize)>,
    /// Differential per letter: `∂(c) = Σ q · (a ⊗ b)`, sign twist folded in.
    diff: Vec<Vec<(u16, u16, Q)>>,
    supported: Vec<bool>,
}

impl LoopAlgebra {
    pub fn from_ring(ring: &CohomologyRing) -> Result<Self, AdamsError> {
        if !ring.simply_connected() {
            return Err(AdamsError::NotSimplyConnected);
        }
        let co = reduced_coproduct(ring);
        Ok(Self::from_coalgebra(&co))
    }

    pub fn from_coalgebra(co: &HomologyCoalgebra) -> Self {
        let n = co.letter_count();
        let mut letters = Vec::with_capacity(n);
        let mut diff = Vec::with_capacity(n);
        for l in 0..n {
            letters.push((co.letter_name(l).to_string(), co.letter_degree(l)));
            let mut terms: Vec<(u16, u16, Q)> = Vec::new();
            for (a, b, q) in co.coproduct(l) {
                // left factor twisted by (-1)^{homology degree}
                let sign = if co.letter_degree(*a) % 2 == 1 { -Q::one() } else { Q::one() };
                terms.push((*a as u16, *b as u16, q * sign));
            }
            diff.push(terms);
        }
        let supported = diff.iter().map(|d| !d.is_empty()).collect();
        let alg = LoopAlgebra { letters, diff, supported };
        alg.assert_d_squared_on_letters();
        alg
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_name(&self, l: u16) -> &str {
        &self.letters[l as usize].0
    }

    pub fn hom_degree(&self, l: u16) -> usize {
        self.letters[l as usize].1
    }

    pub fn reduced_degree(&self, l: u16) -> usize {
        self.letters[l as usize].1 - 1
    }

    pub fn word_hom_degree(&self, w: &Word) -> usize {
        w.letters().iter().map(|&l| self.hom_degree(l)).sum()
    }

    pub fn word_reduced_degree(&self, w: &Word) -> usize {
        self.word_hom_degree(w) - w.len()
    }

    /// The derivation extension of the letter differential.
    pub fn boundary_word(&self, w: &Word) -> BTreeMap<Word, Q> {
        let mut out = BTreeMap::new();
        let letters = w.letters();
        let mut prefix_parity = 0usize;
        for (i, &l) in letters.iter().enumerate() {
            for (a, b, q) in &self.diff[l as usize] {
                let mut nw = Word::empty();
                nw.0.extend_from_slice(&letters[..i]);
                nw.push(*a);
                nw.push(*b);
                nw.0.extend_from_slice(&letters[i + 1..]);
                let sign = if prefix_parity % 2 == 1 { -q.clone() } else { q.clone() };
                add_term(&mut out, nw, sign);
            }
            prefix_parity += self.reduced_degree(l);
        }
        out
    }

    pub fn boundary_vector(&self, v: &BTreeMap<Word, Q>) -> BTreeMap<Word, Q> {
        let mut out = BTreeMap::new();
        for (w, c) in v {
            for (nw, q) in self.boundary_word(w) {
                add_term(&mut out, nw, q * c);
            }
        }
        out
    }

    /// Reduced unshuffle coproduct of a word: all proper splittings into a
    /// subsequence and its complement, with Koszul signs in reduced degrees.
    pub fn coproduct_word(&self, w: &Word) -> Vec<(Word, Word, Q)> {
        let n = w.len();
        let letters = w.letters();
        let mut out = Vec::new();
        if n < 2 {
            return out;
        }
        for mask in 1..((1u32 << n) - 1) {
            let mut left = Word::empty();
            let mut right = Word::empty();
            let mut sign_neg = false;
            // the sign flips once for each pair i < j with i in the
            // complement, j in the subset, and both reduced degrees odd:
            // subset letters move left past earlier complement letters
            let mut subset_parity_after = vec![0usize; n];
            let mut acc = 0usize;
            for i in (0..n).rev() {
                subset_parity_after[i] = acc;
                if mask & (1 << i) != 0 {
                    acc += self.reduced_degree(letters[i]);
                }
            }
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    left.push(letters[i]);
                } else {
                    right.push(letters[i]);
                    if self.reduced_degree(letters[i]) % 2 == 1
                        && subset_parity_after[i] % 2 == 1
                    {
                        sign_neg = !sign_neg;
                    }
                }
            }
            let q = if sign_neg { -Q::one() } else { Q::one() };
            out.push((left, right, q));
        }
        out
    }

    /// `∂² = 0` checked exactly on every letter; a failure would mean the
    /// sign conventions are inconsistent, so this panics.
    fn assert_d_squared_on_letters(&self) {
        for l in 0..self.letters.len() {
            let w = Word::single(l as u16);
            let d = self.boundary_word(&w);
            let dd = self.boundary_vector(&d);
            assert!(
                dd.is_empty(),
                "differential does not square to zero on letter {} ({:?})",
                self.letters[l].0,
                dd
            );
        }
    }
}

/// Differential data of the block of words containing at least one
/// supported letter, at one bidegree.
struct SupportedBlock {
    /// Rank of the differential out of this bidegree.
    elim: TrackedEliminator<Word>,
    /// Kernel of the differential restricted to the supported span, as
    /// word vectors.
    kernel: Vec<BTreeMap<Word, Q>>,
}

/// Representatives and dual functionals of the homology at one bidegree.
struct RepData {
    dim: usize,
    reps: Vec<BTreeMap<Word, Q>>,
    /// word -> [(rep index, coefficient)]: the dual functionals, stored by
    /// their support rows. Functional `a` vanishes on boundaries and takes
    /// `δ_ab` on rep `b`.
    phi: BTreeMap<Word, Vec<(usize, Q)>>,
}

/// Cached per-ring engine for page computations.
pub struct PageEngine {
    alg: LoopAlgebra,
    counts_all: BTreeMap<(usize, usize), u128>,
    counts_unsup: BTreeMap<(usize, usize), u128>,
    blocks: BTreeMap<(usize, usize), SupportedBlock>,
    reps: BTreeMap<(usize, usize), RepData>,
}

impl PageEngine {
    pub fn new(alg: LoopAlgebra) -> Self {
        PageEngine {
            alg,
            counts_all: BTreeMap::new(),
            counts_unsup: BTreeMap::new(),
            blocks: BTreeMap::new(),
            reps: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &LoopAlgebra {
        &self.alg
    }

    /// Number of words of `s` letters and homology degree `t`.
    pub fn count(&mut self, s: usize, t: usize) -> u128 {
        self.count_impl(s, t, false)
    }

    fn count_unsupported(&mut self, s: usize, t: usize) -> u128 {
        self.count_impl(s, t, true)
    }

    fn count_impl(&mut self, s: usize, t: usize, unsup_only: bool) -> u128 {
        if s == 0 {
            return if t == 0 { 1 } else { 0 };
        }
        if t < 2 * s {
            return 0;
        }
        let key = (s, t);
        let cache = if unsup_only { &self.counts_unsup } else { &self.counts_all };
        if let Some(&c) = cache.get(&key) {
            return c;
        }
        let mut total: u128 = 0;
        for l in 0..self.alg.letter_count() {
            if unsup_only && self.alg.supported[l] {
                continue;
            }
            let d = self.alg.hom_degree(l as u16);
            if d <= t {
                total += self.count_impl(s - 1, t - d, unsup_only);
            }
        }
        let cache = if unsup_only { &mut self.counts_unsup } else { &mut self.counts_all };
        cache.insert(key, total);
        total
    }

    fn count_supported(&mut self, s: usize, t: usize) -> u128 {
        self.count(s, t) - self.count_unsupported(s, t)
    }

    /// All words at a bidegree, lexicographic in letter indices.
    pub fn words(&mut self, s: usize, t: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut prefix = Word::empty();
        self.enumerate(&mut prefix, s, t, WordFilter::All, &mut out);
        out
    }

    fn supported_words(&mut self, s: usize, t: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut prefix = Word::empty();
        self.enumerate(&mut prefix, s, t, WordFilter::NeedSupport, &mut out);
        out
    }

    fn unsupported_words(&mut self, s: usize, t: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut prefix = Word::empty();
        self.enumerate(&mut prefix, s, t, WordFilter::NoSupport, &mut out);
        out
    }

    fn enumerate(
        &mut self,
        prefix: &mut Word,
        s_rem: usize,
        t_rem: usize,
        filter: WordFilter,
        out: &mut Vec<Word>,
    ) {
        if s_rem == 0 {
            if t_rem == 0 && filter != WordFilter::NeedSupport {
                out.push(prefix.clone());
            }
            return;
        }
        for l in 0..self.alg.letter_count() {
            let sup = self.alg.supported[l];
            let d = self.alg.hom_degree(l as u16);
            if d > t_rem {
                continue;
            }
            let next_filter = match (filter, sup) {
                (WordFilter::NoSupport, true) => continue,
                (WordFilter::NeedSupport, true) => WordFilter::All,
                (f, _) => f,
            };
            let feasible = match next_filter {
                WordFilter::All => self.count(s_rem - 1, t_rem - d) > 0,
                WordFilter::NoSupport => self.count_unsupported(s_rem - 1, t_rem - d) > 0,
                WordFilter::NeedSupport => self.count_supported(s_rem - 1, t_rem - d) > 0,
            };
            if !feasible {
                continue;
            }
            prefix.push(l as u16);
            self.enumerate(prefix, s_rem - 1, t_rem - d, next_filter, out);
            prefix.0.pop();
        }
    }

    /// Rank data of the differential restricted to supported words.
    fn ensure_block(&mut self, s: usize, t: usize) {
        if self.blocks.contains_key(&(s, t)) {
            return;
        }
        let words = self.supported_words(s, t);
        let mut elim = TrackedEliminator::new();
        let mut kernel = Vec::new();
        for w in &words {
            if let OfferOutcome::Dependent(combo) = elim.offer(self.alg.boundary_word(w)) {
                let mut vec = BTreeMap::new();
                for (idx, c) in combo {
                    add_term(&mut vec, words[idx].clone(), c);
                }
                kernel.push(vec);
            }
        }
        self.blocks.insert((s, t), SupportedBlock { elim, kernel });
    }

    /// Rank of the differential out of bidegree `(s, t)`.
    pub fn rank_out(&mut self, s: usize, t: usize) -> usize {
        if s == 0 || self.count(s, t) == 0 {
            return 0;
        }
        self.ensure_block(s, t);
        self.blocks[&(s, t)].elim.rank()
    }

    /// Dimension of the page homology at `(s, t)`: cycles modulo boundaries.
    pub fn page_dim(&mut self, s: usize, t: usize) -> u128 {
        let n = self.count(s, t);
        if n == 0 {
            return 0;
        }
        let rank_out = self.rank_out(s, t) as u128;
        let rank_in = if s >= 2 { self.rank_out(s - 1, t) as u128 } else { 0 };
        n - rank_out - rank_in
    }

    /// Representatives with dual functionals at `(s, t)`.
    fn ensure_reps(&mut self, s: usize, t: usize) {
        if self.reps.contains_key(&(s, t)) {
            return;
        }
        if self.count(s, t) == 0 {
            self.reps.insert(
                (s, t),
                RepData { dim: 0, reps: Vec::new(), phi: BTreeMap::new() },
            );
            return;
        }
        if s >= 2 {
            self.ensure_block(s - 1, t);
        }
        self.ensure_block(s, t);
        let unsup = self.unsupported_words(s, t);
        let kernel: Vec<BTreeMap<Word, Q>> = self.blocks[&(s, t)].kernel.clone();
        let boundary = if s >= 2 { self.blocks.get(&(s - 1, t)) } else { None };

        let mut elim_r: Eliminator<Word> = Eliminator::new();
        for w in unsup {
            let v = BTreeMap::from([(w, Q::one())]);
            let v = match boundary {
                Some(b) => b.elim.reduce(v),
                None => v,
            };
            elim_r.offer(v);
        }
        for k in kernel {
            let v = match boundary {
                Some(b) => b.elim.reduce(k),
                None => k,
            };
            elim_r.offer(v);
        }

        let reps: Vec<BTreeMap<Word, Q>> = elim_r.columns().to_vec();
        let rep_pivot: BTreeMap<Word, usize> = (0..reps.len())
            .map(|a| (elim_r.pivot_of(a).clone(), a))
            .collect();
        // functionals: δ at the rep pivot, corrected to vanish on the
        // boundary echelon columns
        let mut phi: BTreeMap<Word, Vec<(usize, Q)>> = BTreeMap::new();
        for (w, &a) in &rep_pivot {
            phi.entry(w.clone()).or_default().push((a, Q::one()));
        }
        if let Some(b) = boundary {
            for (i, col) in b.elim.columns().iter().enumerate() {
                let q_i = b.elim.pivot_of(i).clone();
                for (word, c) in col {
                    if let Some(&a) = rep_pivot.get(word) {
                        phi.entry(q_i.clone()).or_default().push((a, -c.clone()));
                    }
                }
            }
        }
        for list in phi.values_mut() {
            list.sort_by_key(|(a, _)| *a);
        }
        let dim = reps.len();
        debug_assert_eq!(
            dim as u128,
            self.page_dim(s, t),
            "representative count must match the rank computation at ({s}, {t})"
        );
        self.reps.insert((s, t), RepData { dim, reps, phi });
    }

    /// Dimension of the primitive part of the page homology at `(s, t)`:
    /// classes killed by the reduced coproduct in homology.
    pub fn primitive_dim(&mut self, s: usize, t: usize) -> usize {
        self.ensure_reps(s, t);
        let dim = self.reps[&(s, t)].dim;
        if dim == 0 {
            return 0;
        }
        // make sure every target bidegree pair has its functionals ready
        for s1 in 1..s {
            let s2 = s - s1;
            for t1 in (2 * s1)..=(t.saturating_sub(2 * s2)) {
                let t2 = t - t1;
                if self.count(s1, t1) > 0 && self.count(s2, t2) > 0 {
                    self.ensure_reps(s1, t1);
                    self.ensure_reps(s2, t2);
                }
            }
        }

        #[derive(PartialEq, Eq, PartialOrd, Ord, Clone)]
        struct PairKey(u16, u16, u32, u16, u16, u32);

        let rep_columns: Vec<BTreeMap<Word, Q>> = self.reps[&(s, t)].reps.clone();
        let mut elim: Eliminator<PairKey> = Eliminator::rank_only();
        for rep in &rep_columns {
            // expand the coproduct of the representative
            let mut terms: BTreeMap<(Word, Word), Q> = BTreeMap::new();
            for (w, c) in rep {
                for (left, right, sign) in self.alg.coproduct_word(w) {
                    add_term(&mut terms, (left, right), &sign * c);
                }
            }
            // extract Künneth coordinates through the dual functionals
            let mut coords: BTreeMap<PairKey, Q> = BTreeMap::new();
            for ((left, right), c) in terms {
                let (s1, t1) = (left.len(), self.alg.word_hom_degree(&left));
                let (s2, t2) = (right.len(), self.alg.word_hom_degree(&right));
                let Some(d1) = self.reps.get(&(s1, t1)) else { continue };
                let Some(d2) = self.reps.get(&(s2, t2)) else { continue };
                let (Some(l1), Some(l2)) = (d1.phi.get(&left), d2.phi.get(&right)) else {
                    continue;
                };
                for (a, qa) in l1 {
                    for (b, qb) in l2 {
                        add_term(
                            &mut coords,
                            PairKey(s1 as u16, t1 as u16, *a as u32, s2 as u16, t2 as u16, *b as u32),
                            &c * qa * qb,
                        );
                    }
                }
            }
            elim.offer(coords);
        }
        dim - elim.rank()
    }

    /// Estimated number of materialized words for loop degrees `<= bound`.
    pub fn estimate_words(&mut self, bound: usize, with_reps: bool) -> u128 {
        let mut total: u128 = 0;
        for ell in 1..=bound {
            for s in 1..=ell {
                let t = ell + s;
                if with_reps {
                    // representative bases live on the full word spaces
                    total += self.count(s, t);
                }
                total += self.count_supported(s, t);
                // boundaries feeding this antidiagonal come from one loop
                // degree higher
                if s >= 2 {
                    total += self.count_supported(s - 1, t);
                }
            }
        }
        total
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum WordFilter {
    All,
    NeedSupport,
    NoSupport,
}

/// The first-page complex of a ring, truncated by total homology degree.
pub struct AdamsComplex {
    engine: PageEngine,
    t_max: usize,
}

impl AdamsComplex {
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn algebra(&self) -> &LoopAlgebra {
        self.engine.algebra()
    }

    /// Dimension of the word space at column `s`, homology degree `t`.
    pub fn e1_dim(&mut self, s: usize, t: usize) -> u128 {
        self.engine.count(s, t)
    }

    pub fn words(&mut self, s: usize, t: usize) -> Vec<Word> {
        self.engine.words(s, t)
    }

    pub fn boundary_word(&self, w: &Word) -> BTreeMap<Word, Q> {
        self.engine.algebra().boundary_word(w)
    }

    /// Total word count across all bidegrees with `t <= t_max`.
    pub fn estimate_total_words(&mut self) -> u128 {
        let mut total: u128 = 0;
        for t in 2..=self.t_max {
            for s in 1..=(t / 2) {
                total += self.engine.count(s, t);
            }
        }
        total
    }

    /// Verify `∂² = 0` on every word with `t <= t_max` by direct expansion.
    pub fn check_d_squared(&mut self) -> bool {
        for t in 2..=self.t_max {
            for s in 1..=(t / 2) {
                for w in self.engine.words(s, t) {
                    let d = self.engine.algebra().boundary_word(&w);
                    if !self.engine.algebra().boundary_vector(&d).is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Build the first page. Fails on rings with degree-1 classes.
pub fn build_e1(ring: &CohomologyRing, t_max: usize) -> Result<AdamsComplex, AdamsError> {
    if t_max < 2 {
        return Err(AdamsError::BoundTooSmall(t_max));
    }
    let alg = LoopAlgebra::from_ring(ring)?;
    Ok(AdamsComplex { engine: PageEngine::new(alg), t_max })
}

/// One bidegree of the computed second page.
#[derive(Debug, Clone)]
pub struct PageEntry {
    pub dim_e1: u128,
    pub dim_e2: usize,
    /// Chosen representative cycles (empty when the entry is zero).
    pub representatives: Vec<Vec<(Word, Q)>>,
}

/// The second page with dimensions and representatives, plus the graded
/// homotopy dimensions extracted from its primitives.
#[derive(Debug, Clone, Default)]
pub struct PageTable {
    pub t_max: usize,
    /// Keyed by `(s, t)`; only nonzero word spaces appear.
    pub entries: BTreeMap<(usize, usize), PageEntry>,
}

impl PageTable {
    /// Loop-space homology rank in degree `j`, summing the antidiagonal.
    /// Complete only when `2j <= t_max`.
    pub fn loop_rank(&self, j: usize) -> usize {
        if j == 0 {
            return 1;
        }
        self.entries
            .iter()
            .filter(|((s, t), _)| t - s == j)
            .map(|(_, e)| e.dim_e2)
            .sum()
    }
}

/// Homology of the first page at every bidegree with `t <= t_max`.
pub fn compute_e2(complex: &mut AdamsComplex) -> PageTable {
    let mut entries = BTreeMap::new();
    for t in 2..=complex.t_max {
        for s in 1..=(t / 2) {
            let n = complex.engine.count(s, t);
            if n == 0 {
                continue;
            }
            complex.engine.ensure_reps(s, t);
            let data = &complex.engine.reps[&(s, t)];
            let reps = data
                .reps
                .iter()
                .map(|m| m.iter().map(|(w, q)| (w.clone(), q.clone())).collect())
                .collect();
            entries.insert(
                (s, t),
                PageEntry { dim_e1: n, dim_e2: data.dim, representatives: reps },
            );
        }
    }
    PageTable { t_max: complex.t_max, entries }
}

/// Loop-space homology ranks in degrees `0..=bound` (dimension-only; no
/// representative bases are materialized).
pub fn loop_homology_ranks(
    ring: &CohomologyRing,
    bound: usize,
    cap: Option<u128>,
) -> Result<Vec<usize>, AdamsError> {
    let alg = LoopAlgebra::from_ring(ring)?;
    let mut engine = PageEngine::new(alg);
    let cap = cap.unwrap_or(DEFAULT_WORD_CAP);
    let estimate = engine.estimate_words(bound, false);
    if estimate > cap {
        return Err(AdamsError::ResourceLimit { estimate, cap });
    }
    let mut out = vec![0usize; bound + 1];
    out[0] = 1;
    for ell in 1..=bound {
        let mut total: u128 = 0;
        for s in 1..=ell {
            total += engine.page_dim(s, ell + s);
        }
        out[ell] = usize::try_from(total).expect("loop rank fits usize");
    }
    Ok(out)
}

/// Rational homotopy ranks with the tensor-length refinement.
#[derive(Debug, Clone, Default)]
pub struct HomotopyTable {
    pub max_degree: usize,
    /// `j -> dim π_j ⊗ Q` for `2 <= j <= max_degree`.
    pub pi: BTreeMap<usize, usize>,
    /// `(s, j) -> dim Gr^s π_j`; zero entries omitted.
    pub graded: BTreeMap<(usize, usize), usize>,
}

/// Homotopy ranks through coalgebra primitives of the second page.
///
/// The homotopy group in degree `j` corresponds to loop degree `j - 1`;
/// the page is computed on every bidegree of loop degree `< j` so the
/// primitives can be evaluated in homology, exactly.
pub fn homotopy_ranks(
    ring: &CohomologyRing,
    max_degree: usize,
    cap: Option<u128>,
) -> Result<HomotopyTable, AdamsError> {
    if max_degree < 2 {
        return Err(AdamsError::BoundTooSmall(max_degree));
    }
    let alg = LoopAlgebra::from_ring(ring)?;
    let mut engine = PageEngine::new(alg);
    let cap = cap.unwrap_or(DEFAULT_WORD_CAP);
    let estimate = engine.estimate_words(max_degree - 1, true);
    if estimate > cap {
        return Err(AdamsError::ResourceLimit { estimate, cap });
    }
    let mut table = HomotopyTable { max_degree, ..Default::default() };
    for j in 2..=max_degree {
        let ell = j - 1;
        let mut total = 0usize;
        for s in 1..=ell {
            let t = ell + s;
            if engine.count(s, t) == 0 {
                continue;
            }
            let p = engine.primitive_dim(s, t);
            if p > 0 {
                table.graded.insert((s, j), p);
            }
            total += p;
        }
        table.pi.insert(j, total);
    }
    Ok(table)
}

/// Kernel/middle/cokernel dimensions of a low-degree homotopy sequence,
/// with the transposed-cup matrix that witnesses the kernel computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiSequenceReport {
    pub kernel_dim: usize,
    pub middle_dim: usize,
    pub cokernel_dim: usize,
    pub delta_rank: usize,
    /// Entries of the witnessing map: (source class, left factor, right
    /// factor, coefficient).
    pub delta_entries: Vec<(String, String, String, Q)>,
    /// The loop-homology variant over the full tensor square, if distinct.
    pub tensor_variant: Option<(usize, usize, usize)>,
}

/// The degree-3 sequence: symmetric square of degree-2 homology modulo the
/// transposed cup product, then π_3, then degree-3 homology.
pub fn pi3_sequence(ring: &CohomologyRing) -> Result<PiSequenceReport, AdamsError> {
    if !ring.simply_connected() {
        return Err(AdamsError::NotSimplyConnected);
    }
    let co = reduced_coproduct(ring);
    let b2 = ring.betti(2);
    let b3 = ring.betti(3);
    let deg2 = co.letters_in_degree(2);
    let pos2: BTreeMap<usize, usize> = deg2.iter().enumerate().map(|(p, &l)| (l, p)).collect();
    // the coproduct of a degree-4 class lands in (2,2) and is symmetric
    let mut elim_sym: Eliminator<(usize, usize)> = Eliminator::rank_only();
    let mut elim_tensor: Eliminator<(usize, usize)> = Eliminator::rank_only();
    let mut delta_entries = Vec::new();
    for c in co.letters_in_degree(4) {
        let mut sym: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        let mut tensor: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (a, b, q) in co.coproduct(c) {
            let (Some(&pa), Some(&pb)) = (pos2.get(a), pos2.get(b)) else { continue };
            add_term(&mut tensor, (pa, pb), q.clone());
            let key = if pa <= pb { (pa, pb) } else { (pb, pa) };
            add_term(&mut sym, key, q.clone());
            delta_entries.push((
                co.letter_name(c).to_string(),
                co.letter_name(*a).to_string(),
                co.letter_name(*b).to_string(),
                q.clone(),
            ));
        }
        elim_sym.offer(sym);
        elim_tensor.offer(tensor);
    }
    let sym_dim = b2 * (b2 + 1) / 2;
    let delta_rank = elim_sym.rank();
    let kernel_dim = sym_dim - delta_rank;
    let tensor_kernel = b2 * b2 - elim_tensor.rank();
    Ok(PiSequenceReport {
        kernel_dim,
        middle_dim: kernel_dim + b3,
        cokernel_dim: b3,
        delta_rank,
        delta_entries,
        tensor_variant: Some((tensor_kernel, tensor_kernel + b3, b3)),
    })
}

/// The degree-4 sequence for rings with a single degree-2 class: middle is
/// π_4, the kernel is degree-2 ⊗ degree-3 homology modulo the transposed
/// cup product, the cokernel the primitive degree-4 homology.
pub fn pi4_sequence_b2_one(ring: &CohomologyRing) -> Result<PiSequenceReport, AdamsError> {
    if !ring.simply_connected() {
        return Err(AdamsError::NotSimplyConnected);
    }
    let b2 = ring.betti(2);
    if b2 != 1 {
        return Err(AdamsError::NeedsB2One(b2));
    }
    let co = reduced_coproduct(ring);
    let b3 = ring.betti(3);
    let deg2 = co.letters_in_degree(2);
    let deg3 = co.letters_in_degree(3);
    let pos2: BTreeMap<usize, usize> = deg2.iter().enumerate().map(|(p, &l)| (l, p)).collect();
    let pos3: BTreeMap<usize, usize> = deg3.iter().enumerate().map(|(p, &l)| (l, p)).collect();
    let mut elim: Eliminator<(usize, usize)> = Eliminator::rank_only();
    let mut delta_entries = Vec::new();
    for c in co.letters_in_degree(5) {
        let mut v: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (a, b, q) in co.coproduct(c) {
            if let (Some(&pa), Some(&pb)) = (pos2.get(a), pos3.get(b)) {
                add_term(&mut v, (pa, pb), q.clone());
                delta_entries.push((
                    co.letter_name(c).to_string(),
                    co.letter_name(*a).to_string(),
                    co.letter_name(*b).to_string(),
                    q.clone(),
                ));
            }
        }
        elim.offer(v);
    }
    let delta_rank = elim.rank();
    let kernel_dim = b2 * b3 - delta_rank;
    let cokernel_dim = co.primitive_dim(4);
    Ok(PiSequenceReport {
        kernel_dim,
        middle_dim: kernel_dim + cokernel_dim,
        cokernel_dim,
        delta_rank,
        delta_entries,
        tensor_variant: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::{ci_to_ring, CompleteIntersection};
    use crate::linalg::qi;
    use crate::ring::{
        build_product, build_projective_space, build_six_manifold, build_sphere, CubicForm,
    };

    fn quintic() -> CohomologyRing {
        ci_to_ring(&CompleteIntersection::hypersurface(3, 5).unwrap()).unwrap()
    }

    #[test]
    fn sphere_page_has_zero_differential() {
        let s3 = build_sphere(3);
        let mut complex = build_e1(&s3, 8).unwrap();
        assert!(complex.check_d_squared());
        let table = compute_e2(&mut complex);
        // one word of k letters at t = 3k, all surviving
        for k in 1..=2 {
            assert_eq!(table.entries[&(k, 3 * k)].dim_e2, 1);
        }
        let loops = loop_homology_ranks(&s3, 8, None).unwrap();
        assert_eq!(loops, vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn p2_letter_differential_sign() {
        let p2 = build_projective_space(2);
        let alg = LoopAlgebra::from_ring(&p2).unwrap();
        // the degree-4 letter maps to +(w* ⊗ w*): J is +1 on even classes
        let l_w2 = (0..2).find(|&l| alg.hom_degree(l as u16) == 4).unwrap() as u16;
        let d = alg.boundary_word(&Word::single(l_w2));
        assert_eq!(d.len(), 1);
        let (w, q) = d.iter().next().unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(q, &qi(1));
    }

    #[test]
    fn p2_loop_homology() {
        let p2 = build_projective_space(2);
        let loops = loop_homology_ranks(&p2, 5, None).unwrap();
        assert_eq!(loops, vec![1, 1, 0, 0, 1, 1]);
        // P^1 = S^2: all ones
        let p1 = build_projective_space(1);
        assert_eq!(loop_homology_ranks(&p1, 6, None).unwrap(), vec![1; 7]);
    }

    #[test]
    fn quintic_low_bidegrees() {
        let ring = quintic();
        let mut complex = build_e1(&ring, 4).unwrap();
        let table = compute_e2(&mut complex);
        assert_eq!(table.entries[&(1, 2)].dim_e2, 1);
        assert_eq!(table.entries[&(1, 3)].dim_e2, 204);
        // Δ: H4 -> H2 ⊗ H2 is injective, so the (2,4) slot dies
        assert_eq!(table.entries[&(2, 4)].dim_e2, 0);
    }

    #[test]
    fn homotopy_ranks_projective_spaces() {
        let p2 = build_projective_space(2);
        let t = homotopy_ranks(&p2, 6, None).unwrap();
        assert_eq!(t.pi[&2], 1);
        assert_eq!(t.pi[&3], 0);
        assert_eq!(t.pi[&4], 0);
        assert_eq!(t.pi[&5], 1);
        assert_eq!(t.pi[&6], 0);

        let p3 = build_projective_space(3);
        let t = homotopy_ranks(&p3, 7, None).unwrap();
        assert_eq!(t.pi[&2], 1);
        for j in 3..=6 {
            assert_eq!(t.pi[&j], 0, "pi_{j}(P^3)");
        }
        assert_eq!(t.pi[&7], 1);
    }

    #[test]
    fn homotopy_ranks_products() {
        let ring = build_product(&build_projective_space(1), &build_projective_space(2));
        let t = homotopy_ranks(&ring, 3, None).unwrap();
        assert_eq!(t.pi[&2], 2);
        assert_eq!(t.pi[&3], 1);
    }

    #[test]
    fn homotopy_ranks_quintic_low() {
        let ring = quintic();
        let t = homotopy_ranks(&ring, 3, None).unwrap();
        assert_eq!(t.pi[&2], 1);
        assert_eq!(t.pi[&3], 204);
    }

    #[test]
    fn s2_hurewicz_and_whitehead_square() {
        // S^2 rationally: π_2 and π_3 only
        let p1 = build_projective_space(1);
        let t = homotopy_ranks(&p1, 6, None).unwrap();
        assert_eq!(t.pi[&2], 1);
        assert_eq!(t.pi[&3], 1);
        for j in 4..=6 {
            assert_eq!(t.pi[&j], 0, "pi_{j}(S^2)");
        }
        // graded: π_3 sits in tensor length 2
        assert_eq!(t.graded.get(&(2, 3)), Some(&1));
    }

    #[test]
    fn pi3_sequences() {
        // quintic: (0, 204, 204)
        let r = pi3_sequence(&quintic()).unwrap();
        assert_eq!((r.kernel_dim, r.middle_dim, r.cokernel_dim), (0, 204, 204));

        // P1 x P2: (1, 1, 0)
        let ring = build_product(&build_projective_space(1), &build_projective_space(2));
        let r = pi3_sequence(&ring).unwrap();
        assert_eq!((r.kernel_dim, r.middle_dim, r.cokernel_dim), (1, 1, 0));

        // hard-Lefschetz six-manifold with b2 = 2, b3 = 2: (1, 3, 2)
        let six = build_six_manifold(2, 2, &CubicForm::diagonal(2), 0).unwrap();
        let r = pi3_sequence(&six).unwrap();
        assert_eq!((r.kernel_dim, r.middle_dim, r.cokernel_dim), (1, 3, 2));
    }

    #[test]
    fn pi3_middle_equals_homotopy_rank() {
        for ring in [
            build_projective_space(2),
            build_projective_space(3),
            build_product(&build_projective_space(1), &build_projective_space(2)),
            build_six_manifold(2, 2, &CubicForm::diagonal(2), 0).unwrap(),
            quintic(),
        ] {
            let seq = pi3_sequence(&ring).unwrap();
            let hom = homotopy_ranks(&ring, 3, None).unwrap();
            assert_eq!(seq.middle_dim, hom.pi[&3]);
        }
    }

    #[test]
    fn pi4_sequences_b2_one() {
        let r = pi4_sequence_b2_one(&quintic()).unwrap();
        assert_eq!((r.kernel_dim, r.middle_dim, r.cokernel_dim), (204, 204, 0));

        let r = pi4_sequence_b2_one(&build_projective_space(3)).unwrap();
        assert_eq!((r.kernel_dim, r.middle_dim, r.cokernel_dim), (0, 0, 0));

        let r = pi4_sequence_b2_one(&build_projective_space(2)).unwrap();
        assert_eq!(r.kernel_dim, 0);
        assert_eq!(r.cokernel_dim, 0);

        let two = build_product(&build_projective_space(1), &build_projective_space(1));
        assert!(matches!(pi4_sequence_b2_one(&two), Err(AdamsError::NeedsB2One(2))));
    }

    #[test]
    fn pi4_matches_homotopy_rank_quintic() {
        let seq = pi4_sequence_b2_one(&quintic()).unwrap();
        let hom = homotopy_ranks(&quintic(), 4, None).unwrap();
        assert_eq!(seq.middle_dim, hom.pi[&4]);
    }

    #[test]
    fn e1_low_degree_table_dimensions() {
        // the (2,5) slot is H2⊗H3 + H3⊗H2 and (2,6) is H3⊗H3 + H2⊗H4 + H4⊗H2
        let six = build_six_manifold(2, 4, &CubicForm::diagonal(2), 0).unwrap();
        let (b2, b3, b4) = (2u128, 4u128, 2u128);
        let mut complex = build_e1(&six, 6).unwrap();
        assert_eq!(complex.e1_dim(2, 5), 2 * b2 * b3);
        assert_eq!(complex.e1_dim(2, 6), b3 * b3 + 2 * b2 * b4);
        assert_eq!(complex.e1_dim(1, 6), 1);
        assert_eq!(complex.e1_dim(3, 6), b2 * b2 * b2);
    }

    #[test]
    fn d_squared_vanishes_on_small_corpus() {
        for ring in [
            build_projective_space(3),
            build_product(&build_projective_space(1), &build_projective_space(2)),
            build_six_manifold(2, 2, &CubicForm::diagonal(2), 0).unwrap(),
            build_six_manifold(3, 4, &CubicForm::diagonal(3), 0).unwrap(),
        ] {
            let mut complex = build_e1(&ring, 8).unwrap();
            assert!(complex.check_d_squared());
        }
    }

    #[test]
    fn antidiagonals_match_loop_ranks() {
        let ring = build_six_manifold(2, 2, &CubicForm::diagonal(2), 0).unwrap();
        let mut complex = build_e1(&ring, 8).unwrap();
        let table = compute_e2(&mut complex);
        let loops = loop_homology_ranks(&ring, 4, None).unwrap();
        for j in 0..=4 {
            assert_eq!(table.loop_rank(j), loops[j], "loop degree {j}");
        }
    }

    #[test]
    fn resource_guard_refuses() {
        let ring = quintic();
        match homotopy_ranks(&ring, 8, Some(10_000)) {
            Err(AdamsError::ResourceLimit { estimate, cap }) => {
                assert!(estimate > 10_000);
                assert_eq!(cap, 10_000);
            }
            other => panic!("expected resource refusal, got {other:?}"),
        }
    }

    #[test]
    fn degree_one_classes_rejected() {
        let ring = crate::ring::build_exterior(&[1, 3]).unwrap();
        assert!(matches!(build_e1(&ring, 4), Err(AdamsError::NotSimplyConnected)));
    }

    /// Milnor–Moore factorization: the loop homology series is the free
    /// graded-commutative series on the homotopy ranks.
    #[test]
    fn poincare_series_factorization() {
        for ring in [
            build_projective_space(2),
            build_projective_space(3),
            build_product(&build_projective_space(1), &build_projective_space(1)),
            build_six_manifold(2, 2, &CubicForm::diagonal(2), 0).unwrap(),
        ] {
            let bound = 6usize;
            let loops = loop_homology_ranks(&ring, bound, None).unwrap();
            let pis = homotopy_ranks(&ring, bound + 1, None).unwrap();
            // series = Π_{k odd} (1+t^k)^{π_{k+1}} Π_{k even} (1-t^k)^{-π_{k+1}}
            let mut series = vec![0i128; bound + 1];
            series[0] = 1;
            for k in 1..=bound {
                let mult = *pis.pi.get(&(k + 1)).unwrap_or(&0);
                for _ in 0..mult {
                    let mut next = series.clone();
                    if k % 2 == 1 {
                        // multiply by (1 + t^k)
                        for d in (k..=bound).rev() {
                            next[d] += series[d - k];
                        }
                        series = next;
                    } else {
                        // multiply by 1/(1 - t^k): running sum
                        for d in k..=bound {
                            next[d] += next[d - k];
                        }
                        series = next;
                    }
                }
            }
            for (j, &rank) in loops.iter().enumerate() {
                assert_eq!(series[j] as usize, rank, "degree {j} of {ring:?}");
            }
        }
    }
}
