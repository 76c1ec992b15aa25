//! Free graded DG-Lie models with quadratic differentials.
//!
//! A model is a free graded Lie algebra on generators (reduced homology
//! classes with degrees lowered by one) with a degree `-1` differential
//! whose generator values have bracket length exactly two. Elements live
//! inside the tensor algebra on the generators, with brackets expanded to
//! signed commutators `[u,v] = u⊗v - (-1)^{|u||v|} v⊗u`; membership in the
//! Lie subspace is by construction and rank computations reuse the exact
//! sparse elimination layer.
//!
//! Homology of the graded pieces gives rational homotopy (degree shifted by
//! one). Degree-0 chain derivations, their exponentials and the resulting
//! Johnson invariants are all computed exactly, as is the derivation
//! cohomology in degree 0 (the Lie algebra of self-equivalences).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coalgebra::reduced_coproduct;
use crate::linalg::{add_term, Eliminator, OfferOutcome, Q, TrackedEliminator};
use crate::ring::{CohomologyRing, CubicForm, RingError};
use crate::word::Word;

/// Element of the tensor algebra on the model generators.
pub type LieTensor = BTreeMap<Word, Q>;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("quadratic models need a simply connected ring")]
    NotSimplyConnected,
    #[error("model truncation {have} too small; this computation needs {needed}")]
    TruncationTooSmall { needed: usize, have: usize },
    #[error("derivation value on `{name}` has a term of degree {found}, expected {expected}")]
    ValueDegree { name: String, found: usize, expected: usize },
    #[error("not a Torelli input: value on `{0}` has a bracket-length-1 term")]
    NotTorelli(String),
    #[error("exponential needs a degree-0 derivation, got degree {0}")]
    ExpDegree(i64),
    #[error("exponential needs values of bracket length >= 2 (`{0}` violates this)")]
    NotFiltrationIncreasing(String),
    #[error("b3 must be even, got {0}")]
    OddB3(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Free graded Lie model with a quadratic degree `-1` differential.
#[derive(Debug, Clone)]
pub struct DgLieModel {
    /// (name, reduced degree >= 1) per generator.
    generators: Vec<(String, usize)>,
    /// Quadratic differential per generator (a 2-letter Lie tensor).
    diff: Vec<LieTensor>,
    truncation: usize,
}

impl DgLieModel {
    /// Assemble and check a model: values must be quadratic, antisymmetric
    /// under the graded swap (hence honest brackets), of the right degree,
    /// and square to zero.
    pub fn new(
        generators: Vec<(String, usize)>,
        diff: Vec<LieTensor>,
        truncation: usize,
    ) -> Self {
        assert_eq!(generators.len(), diff.len());
        let model = DgLieModel { generators, diff, truncation };
        for (g, value) in model.diff.iter().enumerate() {
            if value.is_empty() {
                continue;
            }
            let expected = model.generators[g].1 - 1;
            for w in value.keys() {
                assert_eq!(w.len(), 2, "differential of {} is not quadratic", model.name(g as u16));
                assert_eq!(
                    model.word_degree(w),
                    expected,
                    "differential of {} has the wrong degree",
                    model.name(g as u16)
                );
            }
            // graded antisymmetry = membership in the free Lie subspace
            let mut twisted: LieTensor = BTreeMap::new();
            for (w, c) in value {
                let (a, b) = (w.letters()[0], w.letters()[1]);
                let sign = if model.degree(a) % 2 == 1 && model.degree(b) % 2 == 1 {
                    -Q::one()
                } else {
                    Q::one()
                };
                add_term(&mut twisted, Word::from_slice(&[b, a]), c * sign);
            }
            for (w, c) in value {
                add_term(&mut twisted, w.clone(), c.clone());
            }
            assert!(
                twisted.is_empty(),
                "differential of {} is not a Lie element",
                model.name(g as u16)
            );
        }
        for g in 0..model.diff.len() {
            let dd = model.apply_diff(&model.diff[g]);
            assert!(dd.is_empty(), "differential does not square to zero on {}", model.name(g as u16));
        }
        model
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn name(&self, g: u16) -> &str {
        &self.generators[g as usize].0
    }

    pub fn degree(&self, g: u16) -> usize {
        self.generators[g as usize].1
    }

    pub fn generator_index(&self, name: &str) -> Option<u16> {
        self.generators.iter().position(|(n, _)| n == name).map(|i| i as u16)
    }

    pub fn generators(&self) -> impl Iterator<Item = (u16, &str, usize)> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, (n, d))| (i as u16, n.as_str(), *d))
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn differential(&self, g: u16) -> &LieTensor {
        &self.diff[g as usize]
    }

    pub fn generator_tensor(&self, g: u16) -> LieTensor {
        BTreeMap::from([(Word::single(g), Q::one())])
    }

    pub fn word_degree(&self, w: &Word) -> usize {
        w.letters().iter().map(|&l| self.degree(l)).sum()
    }

    /// `[u, v] = u⊗v - (-1)^{|u||v|} v⊗u`, extended bilinearly.
    pub fn bracket(&self, u: &LieTensor, v: &LieTensor) -> LieTensor {
        let mut out = BTreeMap::new();
        for (a, ca) in u {
            let ra = self.word_degree(a);
            for (b, cb) in v {
                let rb = self.word_degree(b);
                let c = ca * cb;
                add_term(&mut out, a.concat(b), c.clone());
                let sign = if ra % 2 == 1 && rb % 2 == 1 { c } else { -c };
                add_term(&mut out, b.concat(a), sign);
            }
        }
        out
    }

    /// The differential as a derivation of the tensor algebra.
    pub fn apply_diff(&self, u: &LieTensor) -> LieTensor {
        self.apply_generator_map(u, |g| Some(&self.diff[g as usize]), true)
    }

    /// Apply a generator-valued map extended as a (graded) derivation.
    /// `odd_operator` controls the Koszul sign over the prefix.
    fn apply_generator_map<'a, F>(&'a self, u: &LieTensor, value: F, odd_operator: bool) -> LieTensor
    where
        F: Fn(u16) -> Option<&'a LieTensor>,
    {
        let mut out = BTreeMap::new();
        for (w, c) in u {
            let letters = w.letters();
            let mut prefix_parity = 0usize;
            for (i, &l) in letters.iter().enumerate() {
                if let Some(val) = value(l) {
                    let sign_neg = odd_operator && prefix_parity % 2 == 1;
                    for (vw, vc) in val {
                        let mut nw = Word::empty();
                        nw.0.extend_from_slice(&letters[..i]);
                        nw.0.extend_from_slice(vw.letters());
                        nw.0.extend_from_slice(&letters[i + 1..]);
                        let coeff = if sign_neg { -(vc * c) } else { vc * c };
                        add_term(&mut out, nw, coeff);
                    }
                }
                prefix_parity += self.degree(l);
            }
        }
        out
    }
}

/// Quadratic model of a simply connected ring: one generator per reduced
/// homology class with the degree lowered by one; the differential of a
/// generator is the transposed cup product twisted on the left factor.
pub fn quadratic_model_from_ring(ring: &CohomologyRing) -> Result<DgLieModel, LieError> {
    if !ring.simply_connected() {
        return Err(LieError::NotSimplyConnected);
    }
    let co = reduced_coproduct(ring);
    let mut generators = Vec::new();
    let mut diff = Vec::new();
    for l in 0..co.letter_count() {
        generators.push((co.letter_name(l).to_string(), co.letter_degree(l) - 1));
        let mut value: LieTensor = BTreeMap::new();
        for (a, b, q) in co.coproduct(l) {
            let sign = if co.letter_degree(*a) % 2 == 1 { -Q::one() } else { Q::one() };
            add_term(&mut value, Word::from_slice(&[*a as u16, *b as u16]), q * sign);
        }
        diff.push(value);
    }
    let truncation = ring.real_dimension().saturating_sub(1).max(1);
    Ok(DgLieModel::new(generators, diff, truncation))
}

/// Graded dimensions of the free graded Lie algebra on generators of the
/// given reduced degrees, through `max_degree`.
///
/// Solved exactly from the tensor-algebra series: the universal envelope
/// forces `Π_{d odd} (1+t^d)^{l_d} Π_{d even} (1-t^d)^{-l_d} = 1/(1 - Σ v_d t^d)`.
pub fn free_lie_dims(gen_degrees: &[usize], max_degree: usize) -> Vec<BigInt> {
    let n = max_degree;
    let mut counts = vec![0i64; n + 1];
    for &d in gen_degrees {
        if d <= n {
            counts[d] += 1;
        }
    }
    // tensor algebra series
    let mut tensor: Vec<BigInt> = vec![BigInt::from(0); n + 1];
    tensor[0] = BigInt::from(1);
    for deg in 1..=n {
        let mut acc = BigInt::from(0);
        for d in 1..=deg {
            if counts[d] != 0 {
                acc += BigInt::from(counts[d]) * &tensor[deg - d];
            }
        }
        tensor[deg] = acc;
    }
    // peel off one degree at a time
    let mut partial: Vec<BigInt> = vec![BigInt::from(0); n + 1];
    partial[0] = BigInt::from(1);
    let mut dims = vec![BigInt::from(0); n + 1];
    for d in 1..=n {
        let l = &tensor[d] - &partial[d];
        assert!(!l.is_negative(), "free Lie dimension must be nonnegative");
        dims[d] = l.clone();
        if l.is_zero() {
            continue;
        }
        // multiply partial by (1+t^d)^l (d odd) or (1-t^d)^{-l} (d even)
        let mut factor: Vec<BigInt> = vec![BigInt::from(0); n + 1];
        let mut binom = BigInt::from(1);
        let mut k = 0usize;
        while k * d <= n {
            factor[k * d] = binom.clone();
            let next = if d % 2 == 1 {
                // C(l, k+1)
                (&binom * (&l - BigInt::from(k as i64))) / BigInt::from(k as i64 + 1)
            } else {
                // C(l+k, k+1)
                (&binom * (&l + BigInt::from(k as i64))) / BigInt::from(k as i64 + 1)
            };
            binom = next;
            k += 1;
        }
        let mut next = vec![BigInt::from(0); n + 1];
        for i in 0..=n {
            if partial[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if !factor[j].is_zero() {
                    let add = &partial[i] * &factor[j];
                    next[i + j] += add;
                }
            }
        }
        partial = next;
    }
    dims
}

/// Enumeration of generator sequences by total degree, with support
/// pruning.
struct SeqEnum {
    degrees: Vec<usize>,
    supported: Vec<bool>,
    count_all: Vec<Option<u128>>,
    count_unsup: Vec<Option<u128>>,
}

impl SeqEnum {
    fn new(model: &DgLieModel, max_degree: usize) -> Self {
        SeqEnum {
            degrees: model.generators.iter().map(|(_, d)| *d).collect(),
            supported: model.diff.iter().map(|d| !d.is_empty()).collect(),
            count_all: vec![None; max_degree + 1],
            count_unsup: vec![None; max_degree + 1],
        }
    }

    fn count(&mut self, t: usize, unsup_only: bool) -> u128 {
        if t == 0 {
            return 1;
        }
        let cached = if unsup_only { self.count_unsup[t] } else { self.count_all[t] };
        if let Some(c) = cached {
            return c;
        }
        let mut total: u128 = 0;
        for g in 0..self.degrees.len() {
            if unsup_only && self.supported[g] {
                continue;
            }
            let d = self.degrees[g];
            if d <= t {
                total += self.count(t - d, unsup_only);
            }
        }
        if unsup_only {
            self.count_unsup[t] = Some(total);
        } else {
            self.count_all[t] = Some(total);
        }
        total
    }

    fn count_supported(&mut self, t: usize) -> u128 {
        self.count(t, false) - self.count(t, true)
    }

    /// Sequences of total degree `t`; with `need_support`, only those
    /// containing a generator with nonzero differential.
    fn sequences(&mut self, t: usize, need_support: bool) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.rec(t, need_support, &mut prefix, &mut out);
        // shorter sequences first, then lexicographic
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn rec(&mut self, t_rem: usize, need: bool, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if t_rem == 0 {
            if !need {
                out.push(prefix.clone());
            }
            return;
        }
        for g in 0..self.degrees.len() {
            let d = self.degrees[g];
            if d > t_rem {
                continue;
            }
            let next_need = need && !self.supported[g];
            let feasible = if next_need {
                self.count_supported(t_rem - d) > 0
            } else {
                self.count(t_rem - d, false) > 0
            };
            if !feasible {
                continue;
            }
            prefix.push(g as u16);
            self.rec(t_rem - d, next_need, prefix, out);
            prefix.pop();
        }
    }
}

/// Left-normed bracket of a sequence, expanded in the tensor algebra.
pub fn left_normed(model: &DgLieModel, seq: &[u16]) -> LieTensor {
    let mut acc = model.generator_tensor(seq[0]);
    for &g in &seq[1..] {
        acc = model.bracket(&acc, &model.generator_tensor(g));
    }
    acc
}

/// A rank-reduced basis of one graded piece of the free Lie algebra,
/// built from left-normed bracket monomials inside the tensor algebra.
pub struct LieBasis {
    pub degree: usize,
    /// (sequence, bracket length) per basis element, in offer order.
    pub elements: Vec<(Vec<u16>, usize)>,
    tensors: Vec<LieTensor>,
    elim: TrackedEliminator<Word>,
    tag_to_pos: BTreeMap<usize, usize>,
}

impl LieBasis {
    pub fn new(model: &DgLieModel, degree: usize) -> Self {
        let mut seqs = SeqEnum::new(model, degree);
        let mut elements = Vec::new();
        let mut tensors = Vec::new();
        let mut elim = TrackedEliminator::new();
        let mut tag_to_pos = BTreeMap::new();
        for seq in seqs.sequences(degree, false) {
            let tensor = left_normed(model, &seq);
            let tag = elim.offered();
            if let OfferOutcome::Pivot(_) = elim.offer(tensor.clone()) {
                tag_to_pos.insert(tag, elements.len());
                let len = seq.len();
                elements.push((seq, len));
                tensors.push(tensor);
            }
        }
        LieBasis { degree, elements, tensors, elim, tag_to_pos }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn tensor(&self, i: usize) -> &LieTensor {
        &self.tensors[i]
    }

    /// Coordinates of a Lie tensor in this basis, if it lies in the span.
    pub fn express(&self, v: &LieTensor) -> Option<BTreeMap<usize, Q>> {
        let coords = self.elim.express(v.clone())?;
        let mut out = BTreeMap::new();
        for (tag, q) in coords {
            let pos = self.tag_to_pos.get(&tag)?;
            add_term(&mut out, *pos, q);
        }
        Some(out)
    }
}

/// Homology dimensions `H_j` of the model for `j` in `1..=max_degree`.
///
/// Dimensions of the graded pieces come from the exact series count; the
/// two boundary ranks at each degree are computed by eliminating the
/// differentials of the left-normed monomials that contain at least one
/// generator with nonzero differential (all others are cycles).
pub fn lie_homology(model: &DgLieModel, max_degree: usize) -> Result<Vec<usize>, LieError> {
    if model.truncation() < max_degree + 1 {
        return Err(LieError::TruncationTooSmall {
            needed: max_degree + 1,
            have: model.truncation(),
        });
    }
    let gen_degrees: Vec<usize> = model.generators.iter().map(|(_, d)| *d).collect();
    let dims = free_lie_dims(&gen_degrees, max_degree + 1);
    let mut ranks = vec![0usize; max_degree + 2];
    let mut seqs = SeqEnum::new(model, max_degree + 1);
    for j in 2..=max_degree + 1 {
        let mut elim: Eliminator<Word> = Eliminator::rank_only();
        for seq in seqs.sequences(j, true) {
            let tensor = left_normed(model, &seq);
            elim.offer(model.apply_diff(&tensor));
        }
        ranks[j] = elim.rank();
    }
    let mut out = vec![0usize; max_degree + 1];
    for j in 1..=max_degree {
        let l: u128 = u128::try_from(&dims[j]).expect("lie dimension fits u128");
        let h = l - ranks[j] as u128 - ranks[j + 1] as u128;
        out[j] = usize::try_from(h).expect("homology dimension fits usize");
    }
    Ok(out)
}

/// The structured six-manifold model: generators `e_i` (degree 1),
/// `z_{±k}` (degree 2), `f_i` (degree 3), `w` (degree 5), with
/// `∂f_m = Σ c(i,j,m)/2 [e_i,e_j]` and
/// `∂w = Σ_j [e_j,f_j] - Σ_{k>0} [z_k,z_{-k}]`.
pub struct SixfoldModel {
    pub model: DgLieModel,
    pub b2: usize,
    /// Half of b3.
    pub m: usize,
    pub cubic: CubicForm,
}

impl SixfoldModel {
    pub fn e(&self, i: usize) -> u16 {
        i as u16 // i from 0
    }

    /// `k` ranges over `±1..=±m`.
    pub fn z(&self, k: i64) -> u16 {
        assert!(k != 0 && k.unsigned_abs() as usize <= self.m);
        if k > 0 {
            (self.b2 + (k as usize - 1)) as u16
        } else {
            (self.b2 + self.m + ((-k) as usize - 1)) as u16
        }
    }

    pub fn f(&self, i: usize) -> u16 {
        (self.b2 + 2 * self.m + i) as u16
    }

    pub fn w(&self) -> u16 {
        (self.b2 + 2 * self.m + self.b2) as u16
    }

    pub fn z_indices(&self) -> Vec<i64> {
        (1..=self.m as i64).chain((1..=self.m as i64).map(|k| -k)).collect()
    }
}

pub fn sixfold_model(b2: usize, b3: usize, cubic: &CubicForm) -> Result<SixfoldModel, LieError> {
    if b3 % 2 != 0 {
        return Err(LieError::OddB3(b3));
    }
    if let Some(witness) = cubic.kernel_direction() {
        return Err(LieError::Ring(RingError::DegenerateCubic { witness }));
    }
    let m = b3 / 2;
    let mut generators = Vec::new();
    for i in 1..=b2 {
        generators.push((format!("e{i}"), 1));
    }
    for k in 1..=m {
        generators.push((format!("z{k}"), 2));
    }
    for k in 1..=m {
        generators.push((format!("z-{k}"), 2));
    }
    for i in 1..=b2 {
        generators.push((format!("f{i}"), 3));
    }
    generators.push(("w".to_string(), 5));

    let e = |i: usize| i as u16;
    let zp = |k: usize| (b2 + k) as u16;
    let zn = |k: usize| (b2 + m + k) as u16;
    let f = |i: usize| (b2 + 2 * m + i) as u16;

    let mut diff = vec![LieTensor::new(); generators.len()];
    for t in 0..b2 {
        // ∂f_t as a tensor: Σ_{i,j} c(i,j,t) e_i ⊗ e_j
        let mut v: LieTensor = BTreeMap::new();
        for i in 0..b2 {
            for j in 0..b2 {
                add_term(&mut v, Word::from_slice(&[e(i), e(j)]), cubic.get(i, j, t));
            }
        }
        diff[f(t) as usize] = v;
    }
    let mut dw: LieTensor = BTreeMap::new();
    for i in 0..b2 {
        // [e_i, f_i] = e f + f e (degrees 1 and 3, both odd)
        add_term(&mut dw, Word::from_slice(&[e(i), f(i)]), Q::one());
        add_term(&mut dw, Word::from_slice(&[f(i), e(i)]), Q::one());
    }
    for k in 0..m {
        // -[z_k, z_{-k}] = -z z' + z' z (degree 2, even)
        add_term(&mut dw, Word::from_slice(&[zp(k), zn(k)]), -Q::one());
        add_term(&mut dw, Word::from_slice(&[zn(k), zp(k)]), Q::one());
    }
    let w_idx = generators.len() - 1;
    diff[w_idx] = dw;

    let model = DgLieModel::new(generators, diff, 6);
    Ok(SixfoldModel { model, b2, m, cubic: cubic.clone() })
}

/// The free coefficients of a degree-0 derivation of a sixfold model:
/// `a_k^{s,t}` with `D z_k = Σ a_k^{s,t} [e_s, e_t]`, indexed by
/// `k ∈ ±1..±m` and `s, t ∈ 1..=b2`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SixfoldCoefficients {
    pub b2: usize,
    pub m: usize,
    a: BTreeMap<(i64, usize, usize), Q>,
}

impl SixfoldCoefficients {
    pub fn new(b2: usize, m: usize) -> Self {
        SixfoldCoefficients { b2, m, a: BTreeMap::new() }
    }

    pub fn set(&mut self, k: i64, s: usize, t: usize, value: Q) {
        assert!(k != 0 && k.unsigned_abs() as usize <= self.m);
        assert!((1..=self.b2).contains(&s) && (1..=self.b2).contains(&t));
        if value.is_zero() {
            self.a.remove(&(k, s, t));
        } else {
            self.a.insert((k, s, t), value);
        }
    }

    pub fn get(&self, k: i64, s: usize, t: usize) -> Q {
        self.a.get(&(k, s, t)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, usize, usize, &Q)> {
        self.a.iter().map(|((k, s, t), q)| (*k, *s, *t, q))
    }

    /// The coefficients `b_j^{i,k}` forced by the chain condition:
    /// `b_j^{i,k} = -sign(k) (a^{i,j}_{-k} + a^{j,i}_{-k})`.
    ///
    /// The sign of `k` enters through the antisymmetry of the hyperbolic
    /// `z`-pairing in the differential of the top generator; a value
    /// uniform in `k` cannot commute with the differential for all tables.
    pub fn forced_b(&self, j: usize, i: usize, k: i64) -> Q {
        let sum = self.get(-k, i, j) + self.get(-k, j, i);
        if k > 0 {
            -sum
        } else {
            sum
        }
    }
}

/// A graded derivation of a model, given by its generator values.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub degree: i64,
    values: Vec<LieTensor>,
}

impl Derivation {
    pub fn new(model: &DgLieModel, degree: i64, values: Vec<LieTensor>) -> Result<Self, LieError> {
        assert_eq!(values.len(), model.generator_count());
        for (g, v) in values.iter().enumerate() {
            let expected = model.generators[g].1 as i64 + degree;
            for w in v.keys() {
                let found = model.word_degree(w) as i64;
                if found != expected {
                    return Err(LieError::ValueDegree {
                        name: model.name(g as u16).to_string(),
                        found: found as usize,
                        expected: expected.max(0) as usize,
                    });
                }
            }
        }
        Ok(Derivation { degree, values })
    }

    pub fn zero(model: &DgLieModel, degree: i64) -> Self {
        Derivation { degree, values: vec![LieTensor::new(); model.generator_count()] }
    }

    pub fn value(&self, g: u16) -> &LieTensor {
        &self.values[g as usize]
    }

    pub fn value_mut(&mut self, g: u16) -> &mut LieTensor {
        &mut self.values[g as usize]
    }

    /// Extension to the tensor algebra by the graded Leibniz rule.
    pub fn apply(&self, model: &DgLieModel, u: &LieTensor) -> LieTensor {
        model.apply_generator_map(u, |g| Some(&self.values[g as usize]), self.degree % 2 != 0)
    }
}

/// Build the degree-0 derivation of a sixfold model from its free
/// coefficients, with the `b` values forced by the chain condition:
/// `D e = 0`, `D z_k = Σ a_k^{s,t} [e_s,e_t]`, `D f_j = Σ b_j^{i,k} [e_i,z_k]`,
/// `D w = 0`.
pub fn sixfold_derivation(six: &SixfoldModel, a: &SixfoldCoefficients) -> Derivation {
    assert_eq!(a.b2, six.b2);
    assert_eq!(a.m, six.m);
    let model = &six.model;
    let mut values = vec![LieTensor::new(); model.generator_count()];
    for k in six.z_indices() {
        let mut v = LieTensor::new();
        for s in 1..=six.b2 {
            for t in 1..=six.b2 {
                let q = a.get(k, s, t);
                if !q.is_zero() {
                    let br = model.bracket(
                        &model.generator_tensor(six.e(s - 1)),
                        &model.generator_tensor(six.e(t - 1)),
                    );
                    for (w, c) in br {
                        add_term(&mut v, w, c * &q);
                    }
                }
            }
        }
        values[six.z(k) as usize] = v;
    }
    for j in 1..=six.b2 {
        let mut v = LieTensor::new();
        for i in 1..=six.b2 {
            for k in six.z_indices() {
                let q = a.forced_b(j, i, k);
                if !q.is_zero() {
                    let br = model.bracket(
                        &model.generator_tensor(six.e(i - 1)),
                        &model.generator_tensor(six.z(k)),
                    );
                    for (w, c) in br {
                        add_term(&mut v, w, c * &q);
                    }
                }
            }
        }
        values[six.f(j - 1) as usize] = v;
    }
    Derivation::new(model, 0, values).expect("sixfold derivation degrees are consistent")
}

/// Generators where the graded commutator `[D, ∂] = D∂ - (-1)^{|D|} ∂D`
/// fails to vanish, with the offending values.
pub fn check_chain_derivation(model: &DgLieModel, d: &Derivation) -> Vec<(u16, LieTensor)> {
    let mut out = Vec::new();
    for g in 0..model.generator_count() as u16 {
        let d_dg = d.apply(model, model.differential(g));
        let dd_g = model.apply_diff(d.value(g));
        let mut r = d_dg;
        let sign = if d.degree % 2 == 0 { -Q::one() } else { Q::one() };
        for (w, c) in dd_g {
            add_term(&mut r, w, c * &sign);
        }
        if !r.is_empty() {
            out.push((g, r));
        }
    }
    out
}

/// A model endomorphism given on generators, extended multiplicatively.
#[derive(Debug, Clone)]
pub struct Automorphism {
    values: Vec<LieTensor>,
}

impl Automorphism {
    pub fn value(&self, g: u16) -> &LieTensor {
        &self.values[g as usize]
    }

    pub fn apply(&self, _model: &DgLieModel, u: &LieTensor) -> LieTensor {
        let mut out = LieTensor::new();
        for (w, c) in u {
            let mut acc: LieTensor = BTreeMap::from([(Word::empty(), c.clone())]);
            for &l in w.letters() {
                let mut next = LieTensor::new();
                for (aw, ac) in &acc {
                    for (vw, vc) in &self.values[l as usize] {
                        add_term(&mut next, aw.concat(vw), ac * vc);
                    }
                }
                acc = next;
            }
            for (aw, ac) in acc {
                add_term(&mut out, aw, ac);
            }
        }
        out
    }
}

/// `exp D = Σ D^k / k!` on generators: a finite sum because a degree-0
/// derivation with values of bracket length >= 2 strictly lengthens words,
/// and word length is bounded by the degree.
pub fn exp_derivation(model: &DgLieModel, d: &Derivation) -> Result<Automorphism, LieError> {
    if d.degree != 0 {
        return Err(LieError::ExpDegree(d.degree));
    }
    for g in 0..model.generator_count() as u16 {
        if d.value(g).keys().any(|w| w.len() < 2) {
            return Err(LieError::NotFiltrationIncreasing(model.name(g).to_string()));
        }
    }
    let mut values = Vec::new();
    for g in 0..model.generator_count() as u16 {
        let mut acc = model.generator_tensor(g);
        let mut term = d.value(g).clone();
        let mut factorial = Q::one();
        let mut k = 1u64;
        while !term.is_empty() {
            for (w, c) in &term {
                add_term(&mut acc, w.clone(), c / &factorial);
            }
            term = d.apply(model, &term);
            k += 1;
            factorial *= Q::from_integer(k.into());
        }
        values.push(acc);
    }
    Ok(Automorphism { values })
}

/// The value of the Johnson invariant: a matrix from degree-3 homology
/// (the degree-2 generators) to the symmetric square of degree-2 homology
/// modulo the transposed cup product.
#[derive(Debug, Clone)]
pub struct JohnsonInvariant {
    /// Row labels: surviving symmetric pairs `(s, t)` of degree-1
    /// generator positions, `s <= t`.
    pub quotient_keys: Vec<(usize, usize)>,
    /// One column per degree-2 generator, in generator order.
    pub columns: Vec<Vec<Q>>,
    pub z_names: Vec<String>,
    pub e_names: Vec<String>,
}

impl JohnsonInvariant {
    pub fn quotient_dim(&self) -> usize {
        self.quotient_keys.len()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(Q::is_zero))
    }
}

pub enum TorelliInput<'a> {
    Derivation(&'a Derivation),
    Automorphism(&'a Automorphism),
}

/// Extract the quadratic coefficients of a tensor over degree-1 letters as
/// symmetric-square coordinates (polynomial convention: the coefficient of
/// `e_s e_t`).
fn sym_square_coords(
    model: &DgLieModel,
    pos1: &BTreeMap<u16, usize>,
    v: &LieTensor,
) -> BTreeMap<(usize, usize), Q> {
    let mut out = BTreeMap::new();
    let _ = model;
    for (w, c) in v {
        if w.len() != 2 {
            continue;
        }
        let (a, b) = (w.letters()[0], w.letters()[1]);
        let (Some(&pa), Some(&pb)) = (pos1.get(&a), pos1.get(&b)) else { continue };
        if pa == pb {
            add_term(&mut out, (pa, pb), c / Q::from_integer(2.into()));
        } else if pa < pb {
            add_term(&mut out, (pa, pb), c.clone());
        }
        // the (pb, pa) mirror term carries the same coefficient for a Lie
        // element on odd letters, so only one order is read
    }
    out
}

/// The Johnson invariant of a Torelli derivation or automorphism: each
/// degree-2 generator value's quadratic part, reduced modulo the image of
/// the transposed cup product.
pub fn johnson_invariant(
    model: &DgLieModel,
    input: TorelliInput<'_>,
) -> Result<JohnsonInvariant, LieError> {
    // Torelli condition: trivial on generators modulo brackets
    let deviation = |g: u16| -> LieTensor {
        match &input {
            TorelliInput::Derivation(d) => d.value(g).clone(),
            TorelliInput::Automorphism(a) => {
                let mut v = a.value(g).clone();
                add_term(&mut v, Word::single(g), -Q::one());
                v
            }
        }
    };
    for g in 0..model.generator_count() as u16 {
        if deviation(g).keys().any(|w| w.len() < 2) {
            return Err(LieError::NotTorelli(model.name(g).to_string()));
        }
    }

    let gens1: Vec<u16> = model.generators().filter(|(_, _, d)| *d == 1).map(|(g, _, _)| g).collect();
    let gens2: Vec<u16> = model.generators().filter(|(_, _, d)| *d == 2).map(|(g, _, _)| g).collect();
    let gens3: Vec<u16> = model.generators().filter(|(_, _, d)| *d == 3).map(|(g, _, _)| g).collect();
    let pos1: BTreeMap<u16, usize> = gens1.iter().enumerate().map(|(p, &g)| (g, p)).collect();

    // image of the transposed cup product inside the symmetric square
    let mut elim: Eliminator<(usize, usize)> = Eliminator::new();
    for &f in &gens3 {
        elim.offer(sym_square_coords(model, &pos1, model.differential(f)));
    }
    let all_keys: Vec<(usize, usize)> = (0..gens1.len())
        .flat_map(|s| (s..gens1.len()).map(move |t| (s, t)))
        .collect();
    let quotient_keys: Vec<(usize, usize)> =
        all_keys.iter().filter(|k| !elim.has_pivot(k)).copied().collect();

    let mut columns = Vec::new();
    for &z in &gens2 {
        let coords = sym_square_coords(model, &pos1, &deviation(z));
        let reduced = elim.reduce(coords);
        columns.push(
            quotient_keys
                .iter()
                .map(|k| reduced.get(k).cloned().unwrap_or_else(Q::zero))
                .collect(),
        );
    }
    Ok(JohnsonInvariant {
        quotient_keys,
        columns,
        z_names: gens2.iter().map(|&g| model.name(g).to_string()).collect(),
        e_names: gens1.iter().map(|&g| model.name(g).to_string()).collect(),
    })
}

/// Exact dimension of the Johnson target `Hom(H_3, Sym^2 H_2 / im Δ)` of a
/// ring, with the closed-form lower bound `(b2 - 1) b2 b3 / 2`.
pub fn johnson_target_dim(ring: &CohomologyRing) -> (usize, usize) {
    let co = reduced_coproduct(ring);
    let b2 = ring.betti(2);
    let b3 = ring.betti(3);
    let deg2 = co.letters_in_degree(2);
    let pos2: BTreeMap<usize, usize> = deg2.iter().enumerate().map(|(p, &l)| (l, p)).collect();
    let mut elim: Eliminator<(usize, usize)> = Eliminator::rank_only();
    for c in co.letters_in_degree(4) {
        let mut sym: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (a, b, q) in co.coproduct(c) {
            let (Some(&pa), Some(&pb)) = (pos2.get(a), pos2.get(b)) else { continue };
            let key = if pa <= pb { (pa, pb) } else { (pb, pa) };
            add_term(&mut sym, key, q.clone());
        }
        elim.offer(sym);
    }
    let sym_dim = b2 * (b2 + 1) / 2;
    let exact = b3 * (sym_dim - elim.rank());
    let bound = if b2 == 0 { 0 } else { (b2 - 1) * b2 * b3 / 2 };
    (exact, bound)
}

/// Degree-0 derivation cohomology: chain derivations modulo `[∂, h]` for
/// degree `+1` derivations `h`. With `torelli` set, only derivations whose
/// values have bracket length >= 2 are considered (the action on homology
/// mod decomposables is trivial).
pub struct DerivationCohomology {
    pub dim: usize,
    pub basis: Vec<Derivation>,
}

pub fn derivation_cohomology_deg0(
    model: &DgLieModel,
    torelli: bool,
) -> Result<DerivationCohomology, LieError> {
    let max_gen_degree = model.generators.iter().map(|(_, d)| *d).max().unwrap_or(1);
    if model.truncation() < max_gen_degree + 1 {
        return Err(LieError::TruncationTooSmall {
            needed: max_gen_degree + 1,
            have: model.truncation(),
        });
    }
    // bases of the graded pieces needed for values and homotopies
    let mut bases: BTreeMap<usize, LieBasis> = BTreeMap::new();
    for (_, _, d) in model.generators() {
        bases.entry(d).or_insert_with(|| LieBasis::new(model, d));
        bases.entry(d + 1).or_insert_with(|| LieBasis::new(model, d + 1));
    }

    // candidate coordinates: (generator, basis element of its degree)
    let mut candidates: Vec<(u16, usize)> = Vec::new();
    for (g, _, d) in model.generators() {
        let basis = &bases[&d];
        for (i, (_, len)) in basis.elements.iter().enumerate() {
            if !torelli || *len >= 2 {
                candidates.push((g, i));
            }
        }
    }

    // chain condition: [D, ∂] = 0 on every generator; columns over
    // composite keys (generator, word)
    let single_derivation = |g: u16, tensor: &LieTensor| -> Derivation {
        let mut d = Derivation::zero(model, 0);
        *d.value_mut(g) = tensor.clone();
        d
    };
    let mut chain_elim: TrackedEliminator<(u16, Word)> = TrackedEliminator::new();
    let mut kernel: Vec<BTreeMap<usize, Q>> = Vec::new();
    for &(g, bi) in &candidates {
        let d = single_derivation(g, bases[&model.degree(g)].tensor(bi));
        let mut col: BTreeMap<(u16, Word), Q> = BTreeMap::new();
        for (target, r) in check_chain_derivation(model, &d) {
            for (w, c) in r {
                add_term(&mut col, (target, w), c);
            }
        }
        if let OfferOutcome::Dependent(combo) = chain_elim.offer(col) {
            kernel.push(combo);
        }
    }

    // homotopies: [∂, h] for single-valued degree +1 derivations
    let mut quotient: Eliminator<usize> = Eliminator::new();
    for (g, _, dg) in model.generators() {
        let hb = &bases[&(dg + 1)];
        for i in 0..hb.dim() {
            let mut h = Derivation::zero(model, 1);
            *h.value_mut(g) = hb.tensor(i).clone();
            // [∂, h] = ∂h + h∂ on each generator
            let mut coords: BTreeMap<usize, Q> = BTreeMap::new();
            for (t, _, dt) in model.generators() {
                let mut v = model.apply_diff(h.value(t));
                for (w, c) in h.apply(model, model.differential(t)) {
                    add_term(&mut v, w, c);
                }
                if v.is_empty() {
                    continue;
                }
                let expanded = bases[&dt]
                    .express(&v)
                    .expect("[∂,h] values are Lie elements of the right degree");
                for (pos, q) in expanded {
                    // map (t, pos) back to a candidate coordinate
                    let idx = candidates
                        .iter()
                        .position(|&(gg, bb)| gg == t && bb == pos)
                        .expect("homotopy image lies in the candidate space");
                    add_term(&mut coords, idx, q);
                }
            }
            quotient.offer(coords);
        }
    }

    // kernel modulo boundaries
    let mut basis = Vec::new();
    for k in &kernel {
        let reduced = quotient.reduce(k.clone());
        if quotient.offer(reduced).is_some() {
            // reconstruct the derivation from candidate coordinates
            let mut d = Derivation::zero(model, 0);
            for (idx, q) in k {
                let (g, bi) = candidates[*idx];
                let tensor = bases[&model.degree(g)].tensor(bi);
                for (w, c) in tensor {
                    add_term(d.value_mut(g), w.clone(), c * q);
                }
            }
            basis.push(d);
        }
    }
    Ok(DerivationCohomology { dim: basis.len(), basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qi, qr};
    use crate::ring::{build_product, build_projective_space, build_six_manifold, build_sphere};

    fn p2_model() -> DgLieModel {
        quadratic_model_from_ring(&build_projective_space(2)).unwrap()
    }

    #[test]
    fn p2_model_halves_the_self_bracket() {
        let model = p2_model();
        // ∂(dual of w2) = (1/2)[e, e] whose tensor is e⊗e
        let f = model.generator_index("w2").unwrap();
        let e = model.generator_index("w").unwrap();
        let d = model.differential(f);
        assert_eq!(d.len(), 1);
        assert_eq!(d.get(&Word::from_slice(&[e, e])), Some(&qi(1)));
        // and as a bracket: [e,e] = 2 e⊗e, so the coefficient is 1/2
        let ee = model.bracket(&model.generator_tensor(e), &model.generator_tensor(e));
        assert_eq!(ee.get(&Word::from_slice(&[e, e])), Some(&qi(2)));
    }

    #[test]
    fn sphere_model_has_zero_differential() {
        let model = quadratic_model_from_ring(&build_sphere(3)).unwrap();
        assert!(model.differential(0).is_empty());
        let h = lie_homology(&model.with_truncation(7), 6).unwrap();
        // one even generator of degree 2: [x,x] = 0, homology only in degree 2
        assert_eq!(h[1..], [0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn p2_homology_is_rational_homotopy() {
        let model = p2_model().with_truncation(6);
        let h = lie_homology(&model, 4).unwrap();
        // π_2..π_5 of the projective plane: 1, 0, 0, 1
        assert_eq!(h[1..], [1, 0, 0, 1]);
    }

    #[test]
    fn graded_antisymmetry_and_jacobi() {
        // random homogeneous elements in a sixfold model
        let six = sixfold_model(2, 2, &CubicForm::diagonal(2)).unwrap();
        let model = &six.model;
        let mk = |parts: &[(&[u16], i64)]| -> LieTensor {
            let mut t = LieTensor::new();
            for (w, c) in parts {
                add_term(&mut t, Word::from_slice(w), qi(*c));
            }
            t
        };
        let e1 = six.e(0);
        let z1 = six.z(1);
        let f2 = six.f(1);
        let samples = vec![
            mk(&[(&[e1], 2)]),
            mk(&[(&[z1], 1)]),
            mk(&[(&[f2], 3)]),
            model.bracket(&mk(&[(&[e1], 1)]), &mk(&[(&[z1], 1)])),
        ];
        for u in &samples {
            for v in &samples {
                let du = model.word_degree(u.keys().next().unwrap());
                let dv = model.word_degree(v.keys().next().unwrap());
                // [u,v] + (-1)^{|u||v|}[v,u] = 0
                let mut lhs = model.bracket(u, v);
                let sign = if du % 2 == 1 && dv % 2 == 1 { -Q::one() } else { Q::one() };
                for (w, c) in model.bracket(v, u) {
                    add_term(&mut lhs, w, c * &sign);
                }
                assert!(lhs.is_empty(), "antisymmetry fails");
                for t in &samples {
                    // graded Jacobi in the form
                    // [u,[v,t]] = [[u,v],t] + (-1)^{|u||v|}[v,[u,t]]
                    let lhs = model.bracket(u, &model.bracket(v, t));
                    let mut rhs = model.bracket(&model.bracket(u, v), t);
                    let sign = if du % 2 == 1 && dv % 2 == 1 { -Q::one() } else { Q::one() };
                    for (w, c) in model.bracket(v, &model.bracket(u, t)) {
                        add_term(&mut rhs, w, c * &sign);
                    }
                    assert_eq!(lhs, rhs, "Jacobi fails");
                }
            }
        }
    }

    /// Random homogeneous elements up to degree 6: antisymmetry and Jacobi
    /// as exact tensor identities.
    #[test]
    fn bracket_axioms_on_random_homogeneous_elements() {
        let six = sixfold_model(2, 4, &CubicForm::diagonal(2)).unwrap();
        let model = &six.model;
        let mut state = 0x13198a2e03707344u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        // random homogeneous element of a given degree: a rational
        // combination of left-normed monomials
        let mut random_homogeneous = |degree: usize| -> LieTensor {
            let basis = LieBasis::new(model, degree);
            let mut v = LieTensor::new();
            for i in 0..basis.dim() {
                if next() % 3 == 0 {
                    continue;
                }
                let num = (next() % 9) as i64 - 4;
                let den = (next() % 3) as i64 + 1;
                for (w, c) in basis.tensor(i) {
                    add_term(&mut v, w.clone(), c * qr(num, den));
                }
            }
            v
        };
        for _ in 0..4 {
            for (du, dv, dt) in [(1usize, 2usize, 3usize), (2, 2, 2), (1, 1, 3), (3, 2, 1)] {
                let u = random_homogeneous(du);
                let v = random_homogeneous(dv);
                let t = random_homogeneous(dt);
                if u.is_empty() || v.is_empty() || t.is_empty() {
                    continue;
                }
                // [u,v] + (-1)^{|u||v|}[v,u] = 0
                let mut anti = model.bracket(&u, &v);
                let sign = if du % 2 == 1 && dv % 2 == 1 { -Q::one() } else { Q::one() };
                for (w, c) in model.bracket(&v, &u) {
                    add_term(&mut anti, w, c * &sign);
                }
                assert!(anti.is_empty(), "antisymmetry at degrees ({du},{dv})");
                // [u,[v,t]] = [[u,v],t] + (-1)^{|u||v|}[v,[u,t]]
                let lhs = model.bracket(&u, &model.bracket(&v, &t));
                let mut rhs = model.bracket(&model.bracket(&u, &v), &t);
                for (w, c) in model.bracket(&v, &model.bracket(&u, &t)) {
                    add_term(&mut rhs, w, c * &sign);
                }
                assert_eq!(lhs, rhs, "Jacobi at degrees ({du},{dv},{dt})");
            }
        }
    }

    #[test]
    fn sixfold_differential_matches_ring_route() {
        let cubic = CubicForm::diagonal(2);
        let six = sixfold_model(2, 2, &cubic).unwrap();
        let ring = build_six_manifold(2, 2, &cubic, 0).unwrap();
        let from_ring = quadratic_model_from_ring(&ring).unwrap();
        // same generator names; compare differentials through the index map
        for (g, name, d) in six.model.generators() {
            let rg = from_ring.generator_index(name).unwrap();
            assert_eq!(d, from_ring.degree(rg), "degree of {name}");
            let translate = |t: &LieTensor| -> LieTensor {
                t.iter()
                    .map(|(w, c)| {
                        let mapped: Vec<u16> = w
                            .letters()
                            .iter()
                            .map(|&l| {
                                from_ring.generator_index(six.model.name(l)).unwrap()
                            })
                            .collect();
                        (Word::from_slice(&mapped), c.clone())
                    })
                    .collect()
            };
            assert_eq!(
                translate(six.model.differential(g)),
                from_ring.differential(rg).clone(),
                "differential of {name}"
            );
        }
    }

    #[test]
    fn witt_dims_match_explicit_bases() {
        for (b2, b3) in [(1usize, 2usize), (2, 2), (2, 4)] {
            let six = sixfold_model(b2, b3, &CubicForm::diagonal(b2)).unwrap();
            let degrees: Vec<usize> =
                six.model.generators.iter().map(|(_, d)| *d).collect();
            let dims = free_lie_dims(&degrees, 6);
            for j in 1..=6 {
                let basis = LieBasis::new(&six.model, j);
                assert_eq!(
                    BigInt::from(basis.dim()),
                    dims[j],
                    "degree {j} of sixfold({b2},{b3})"
                );
            }
        }
    }

    #[test]
    fn free_lie_dims_single_generators() {
        // one odd generator: x and [x,x] only
        assert_eq!(free_lie_dims(&[1], 5), vec![0, 1, 1, 0, 0, 0].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        // one even generator: [x,x] = 0
        assert_eq!(free_lie_dims(&[2], 6)[2..].iter().map(|b| b.clone()).collect::<Vec<_>>(), vec![BigInt::from(1), BigInt::from(0), BigInt::from(0), BigInt::from(0), BigInt::from(0)]);
    }

    #[test]
    fn sixfold_derivation_forced_b() {
        // b2 = 2, b3 = 2, a_1^{1,2} = 1: D z1 = [e1,e2],
        // D f1 = [e2, z-1], D f2 = [e1, z-1] (k = -1, so no sign flip)
        let six = sixfold_model(2, 2, &CubicForm::diagonal(2)).unwrap();
        let mut a = SixfoldCoefficients::new(2, 1);
        a.set(1, 1, 2, qi(1));
        assert_eq!(a.forced_b(1, 2, -1), qi(1));
        assert_eq!(a.forced_b(2, 1, -1), qi(1));
        let d = sixfold_derivation(&six, &a);
        let model = &six.model;
        let e1 = model.generator_tensor(six.e(0));
        let e2 = model.generator_tensor(six.e(1));
        let zm1 = model.generator_tensor(six.z(-1));
        assert_eq!(d.value(six.z(1)), &model.bracket(&e1, &e2));
        assert_eq!(d.value(six.f(0)), &model.bracket(&e2, &zm1));
        assert_eq!(d.value(six.f(1)), &model.bracket(&e1, &zm1));
        // chain condition holds everywhere
        assert!(check_chain_derivation(model, &d).is_empty());

        // mirrored table: a_{-1}^{1,2} = 1 forces the opposite sign
        let mut a2 = SixfoldCoefficients::new(2, 1);
        a2.set(-1, 1, 2, qi(1));
        assert_eq!(a2.forced_b(1, 2, 1), qi(-1));
        let d2 = sixfold_derivation(&six, &a2);
        assert!(check_chain_derivation(model, &d2).is_empty());
    }

    #[test]
    fn chain_check_catches_broken_b() {
        let six = sixfold_model(2, 2, &CubicForm::diagonal(2)).unwrap();
        let mut a = SixfoldCoefficients::new(2, 1);
        a.set(1, 1, 2, qi(1));
        let mut d = sixfold_derivation(&six, &a);
        // zero out the forced values on f: the failure appears exactly on w
        *d.value_mut(six.f(0)) = LieTensor::new();
        *d.value_mut(six.f(1)) = LieTensor::new();
        let failures = check_chain_derivation(&six.model, &d);
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].0, six.w());
    }

    #[test]
    fn differential_is_a_chain_derivation() {
        let six = sixfold_model(2, 4, &CubicForm::diagonal(2)).unwrap();
        let model = &six.model;
        let diff_values: Vec<LieTensor> =
            (0..model.generator_count() as u16).map(|g| model.differential(g).clone()).collect();
        let d = Derivation::new(model, -1, diff_values).unwrap();
        assert!(check_chain_derivation(model, &d).is_empty());
    }

    #[test]
    fn exp_of_simple_derivation() {
        let six = sixfold_model(2, 2, &CubicForm::diagonal(2)).unwrap();
        let mut a = SixfoldCoefficients::new(2, 1);
        a.set(1, 1, 2, qi(1));
        let d = sixfold_derivation(&six, &a);
        let phi = exp_derivation(&six.model, &d).unwrap();
        let model = &six.model;
        // φ(z1) = z1 + [e1,e2]; φ(e_j) = e_j
        let mut expect = model.generator_tensor(six.z(1));
        for (w, c) in model.bracket(
            &model.generator_tensor(six.e(0)),
            &model.generator_tensor(six.e(1)),
        ) {
            add_term(&mut expect, w, c);
        }
        assert_eq!(phi.value(six.z(1)), &expect);
        assert_eq!(phi.value(six.e(0)), &model.generator_tensor(six.e(0)));
        // φ commutes with the differential on every generator
        for (g, _, _) in model.generators() {
            let lhs = phi.apply(model, model.differential(g));
            let rhs = model.apply_diff(phi.value(g));
            assert_eq!(lhs, rhs, "exp does not commute with ∂ on {}", model.name(g));
        }
    }

    #[test]
    fn exp_rejects_identity_violations() {
        let six = sixfold_model(1, 2, &CubicForm::diagonal(1)).unwrap();
        let mut d = Derivation::zero(&six.model, 0);
        *d.value_mut(six.e(0)) = six.model.generator_tensor(six.e(0));
        assert!(matches!(
            exp_derivation(&six.model, &d),
            Err(LieError::NotFiltrationIncreasing(_))
        ));
    }

    #[test]
    fn johnson_invariant_of_simple_derivation() {
        // diagonal cubic on b2 = 2: im Δ is spanned by e1^2 and e2^2, so
        // the quotient is 1-dimensional, spanned by the class of e1 e2
        let six = sixfoldmodel_2_2();
        let mut a = SixfoldCoefficients::new(2, 1);
        a.set(1, 1, 2, qi(1));
        let d = sixfold_derivation(&six, &a);
        let inv = johnson_invariant(&six.model, TorelliInput::Derivation(&d)).unwrap();
        assert_eq!(inv.quotient_dim(), 1);
        assert_eq!(inv.quotient_keys, vec![(0, 1)]);
        // z1 column hits e1e2 with coefficient 1; z-1 column is zero
        assert_eq!(inv.columns[0], vec![qi(1)]);
        assert_eq!(inv.columns[1], vec![qi(0)]);
        // and exp D has the same invariant
        let phi = exp_derivation(&six.model, &d).unwrap();
        let inv2 = johnson_invariant(&six.model, TorelliInput::Automorphism(&phi)).unwrap();
        assert_eq!(inv.columns, inv2.columns);
    }

    fn sixfoldmodel_2_2() -> SixfoldModel {
        sixfold_model(2, 2, &CubicForm::diagonal(2)).unwrap()
    }

    #[test]
    fn johnson_zero_for_zero_derivation() {
        let six = sixfoldmodel_2_2();
        let d = Derivation::zero(&six.model, 0);
        let inv = johnson_invariant(&six.model, TorelliInput::Derivation(&d)).unwrap();
        assert!(inv.is_zero());
    }

    #[test]
    fn johnson_target_dims() {
        use crate::charclass::{ci_to_ring, CompleteIntersection};
        let quintic = ci_to_ring(&CompleteIntersection::hypersurface(3, 5).unwrap()).unwrap();
        assert_eq!(johnson_target_dim(&quintic), (0, 0));
        let six = build_six_manifold(2, 2, &CubicForm::diagonal(2), 0).unwrap();
        assert_eq!(johnson_target_dim(&six), (2, 2));
        let p1p2 = build_product(&build_projective_space(1), &build_projective_space(2));
        assert_eq!(johnson_target_dim(&p1p2), (0, 0));
    }

    #[test]
    fn derivation_cohomology_p2_p3() {
        for m in [2usize, 3] {
            let model = quadratic_model_from_ring(&build_projective_space(m))
                .unwrap()
                .with_truncation(2 * m);
            let full = derivation_cohomology_deg0(&model, false).unwrap();
            assert_eq!(full.dim, 1, "P^{m} full derivation cohomology");
            let torelli = derivation_cohomology_deg0(&model, true).unwrap();
            assert_eq!(torelli.dim, 0, "P^{m} Torelli derivation cohomology");
        }
    }

    #[test]
    fn derivation_cohomology_p2_scaling_shape() {
        // the surviving class scales e by α and f by 2α
        let model = p2_model().with_truncation(4);
        let coh = derivation_cohomology_deg0(&model, false).unwrap();
        assert_eq!(coh.dim, 1);
        let d = &coh.basis[0];
        let e = model.generator_index("w").unwrap();
        let f = model.generator_index("w2").unwrap();
        let alpha = d.value(e).get(&Word::single(e)).cloned().unwrap_or_else(Q::zero);
        let beta = d.value(f).get(&Word::single(f)).cloned().unwrap_or_else(Q::zero);
        assert!(!alpha.is_zero());
        assert_eq!(beta, alpha * qi(2));
    }

    #[test]
    fn quintic_homology_matches_closed_values() {
        use crate::charclass::{ci_to_ring, CompleteIntersection};
        let ring = ci_to_ring(&CompleteIntersection::hypersurface(3, 5).unwrap()).unwrap();
        let model = quadratic_model_from_ring(&ring).unwrap().with_truncation(4);
        let h = lie_homology(&model, 2).unwrap();
        assert_eq!(h[1], 1);
        assert_eq!(h[2], 204);
    }

    #[test]
    fn truncation_errors() {
        let model = p2_model().with_truncation(3);
        assert!(matches!(
            lie_homology(&model, 4),
            Err(LieError::TruncationTooSmall { needed: 5, have: 3 })
        ));
    }

    #[test]
    fn sixfold_torelli_cohomology_surjects_onto_johnson_target() {
        // the Torelli-flag derivation cohomology maps onto
        // Hom(H_3, Sym^2 H_2 / im Delta) through the Johnson invariant
        let cubic = CubicForm::diagonal(2);
        let six = sixfold_model(2, 2, &cubic).unwrap();
        let ring = build_six_manifold(2, 2, &cubic, 0).unwrap();
        let (target, _) = johnson_target_dim(&ring);
        assert_eq!(target, 2);
        let model = six.model.clone().with_truncation(6);
        let coh = derivation_cohomology_deg0(&model, true).unwrap();
        assert!(coh.dim >= target, "dim {} < target {target}", coh.dim);
        // rank of the Johnson images over the computed basis
        let mut elim: Eliminator<(usize, usize)> = Eliminator::rank_only();
        for d in &coh.basis {
            let inv = johnson_invariant(&model, TorelliInput::Derivation(d)).unwrap();
            let mut flat: BTreeMap<(usize, usize), Q> = BTreeMap::new();
            for (col, colv) in inv.columns.iter().enumerate() {
                for (row, q) in colv.iter().enumerate() {
                    if !q.is_zero() {
                        flat.insert((col, row), q.clone());
                    }
                }
            }
            elim.offer(flat);
        }
        assert_eq!(elim.rank(), target, "Johnson images span the target");
    }

    #[test]
    fn derivation_cohomology_stable_under_truncation_increase() {
        let model = p2_model();
        for trunc in [4usize, 6, 8] {
            let m = model.clone().with_truncation(trunc);
            assert_eq!(derivation_cohomology_deg0(&m, false).unwrap().dim, 1);
            assert_eq!(derivation_cohomology_deg0(&m, true).unwrap().dim, 0);
        }
    }

    #[test]
    fn random_rational_a_tables_are_chain_maps() {
        // light version of the acceptance property: a few deterministic
        // pseudo-random tables
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for (b2, b3) in [(1usize, 2usize), (2, 2), (3, 4)] {
            let six = sixfold_model(b2, b3, &CubicForm::diagonal(b2)).unwrap();
            let m = b3 / 2;
            for _ in 0..5 {
                let mut a = SixfoldCoefficients::new(b2, m);
                for k in six.z_indices() {
                    for s in 1..=b2 {
                        for t in 1..=b2 {
                            let num = (next() % 11) as i64 - 5;
                            let den = (next() % 4) as i64 + 1;
                            a.set(k, s, t, qr(num, den));
                        }
                    }
                }
                let d = sixfold_derivation(&six, &a);
                assert!(check_chain_derivation(&six.model, &d).is_empty());
            }
        }
    }
}
