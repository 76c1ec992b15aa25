//! The sl2 action of a Lefschetz class: hard Lefschetz checks, primitive
//! decomposition, polarization pairings, and the algebra of degree-0 ring
//! derivations annihilating prescribed classes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{
    add_term, qi, Eliminator, OfferOutcome, Q, SparseMat, SparseVec, TrackedEliminator,
};
use crate::ring::CohomologyRing;

#[derive(Debug, Error)]
pub enum LefschetzError {
    #[error("the ring carries no omega class")]
    NoOmega,
    #[error("hard Lefschetz fails at level {j}: multiplication by omega^{j} is not an isomorphism")]
    HardLefschetzFailure { j: usize },
    #[error("the sl2 machinery needs an even-dimensional ring, got real dimension {0}")]
    OddDimension(usize),
}

/// Operators `e` (cup with omega), `h` (weight), `f` (lowering), acting on
/// the full basis of the ring.
#[derive(Debug, Clone)]
pub struct Sl2Action {
    pub e: SparseMat,
    pub h: SparseMat,
    pub f: SparseMat,
}

impl Sl2Action {
    /// Exact check of `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let comm = |a: &SparseMat, b: &SparseMat| a.compose(b).add(&b.compose(a).scaled(&-Q::one()));
        if comm(&self.h, &self.e) != self.e.scaled(&qi(2)) {
            out.push("[h,e] != 2e".to_string());
        }
        if comm(&self.h, &self.f) != self.f.scaled(&qi(-2)) {
            out.push("[h,f] != -2f".to_string());
        }
        if comm(&self.e, &self.f) != self.h {
            out.push("[e,f] != h".to_string());
        }
        out
    }
}

fn omega_of(ring: &CohomologyRing) -> Result<SparseVec, LefschetzError> {
    ring.omega().cloned().ok_or(LefschetzError::NoOmega)
}

/// Per-level verdicts: is `omega^j : H^{n-j} -> H^{n+j}` an isomorphism?
pub fn hard_lefschetz_check(ring: &CohomologyRing) -> Result<Vec<(usize, bool)>, LefschetzError> {
    if ring.real_dimension() % 2 != 0 {
        return Err(LefschetzError::OddDimension(ring.real_dimension()));
    }
    let w = omega_of(ring)?;
    let n = ring.half_dimension();
    let mut out = Vec::new();
    for j in 0..=n {
        let dom = ring.betti(n - j);
        let cod = ring.betti(n + j);
        if dom != cod {
            out.push((j, false));
            continue;
        }
        if dom == 0 {
            out.push((j, true));
            continue;
        }
        // matrix of cup with omega^j
        let m = power_matrix(ring, &w, n - j, j);
        out.push((j, m.rank_kernel_image().rank == dom));
    }
    Ok(out)
}

/// Multiplication by `w^j` from degree `d`, in per-degree bases.
fn power_matrix(ring: &CohomologyRing, w: &SparseVec, d: usize, j: usize) -> SparseMat {
    let dom = ring.basis().in_degree(d);
    let cod = ring.basis().in_degree(d + 2 * j);
    let pos: BTreeMap<usize, usize> = cod.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut m = SparseMat::zero(cod.len(), dom.len());
    for (cj, &i) in dom.iter().enumerate() {
        let mut v = SparseVec::unit(ring.dim(), i);
        for _ in 0..j {
            v = ring.mul(w, &v);
        }
        for (t, q) in v.iter() {
            m.set(pos[&t], cj, q.clone());
        }
    }
    m
}

/// The Lefschetz decomposition: primitive subspaces `ker f ∩ H^{n-j}`
/// (computed as kernels of `omega^{j+1}`) together with exact projections.
pub struct PrimitiveDecomposition {
    n: usize,
    /// Level `j` -> basis of the primitive space in degree `n - j`.
    primitive: BTreeMap<usize, Vec<SparseVec>>,
    /// Degree -> (tags `(j, ell, idx)`, solver over the `w^ell p` basis).
    solvers: BTreeMap<usize, (Vec<(usize, usize, usize)>, TrackedEliminator<usize>)>,
}

impl PrimitiveDecomposition {
    pub fn half_dimension(&self) -> usize {
        self.n
    }

    /// Primitive basis at level `j` (degree `n - j`).
    pub fn primitive_basis(&self, j: usize) -> &[SparseVec] {
        self.primitive.get(&j).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn primitive_dim_in_degree(&self, degree: usize) -> usize {
        if degree > self.n {
            return 0;
        }
        self.primitive_basis(self.n - degree).len()
    }

    /// Coordinates of `v` in the `w^ell ∧ p` basis of its degree:
    /// `(j, ell, idx) -> coefficient`.
    pub fn decompose(&self, degree: usize, v: &SparseVec) -> Option<Vec<((usize, usize, usize), Q)>> {
        let (tags, solver) = self.solvers.get(&degree)?;
        let map: BTreeMap<usize, Q> = v.iter().map(|(i, q)| (i, q.clone())).collect();
        let coords = solver.express(map)?;
        Some(coords.into_iter().map(|(c, q)| (tags[c], q)).collect())
    }

    /// Projection of `v` in degree `d` onto the level-`ell` primitive
    /// coefficients (a vector over the primitive basis of `H_o^{d-2ell}`).
    pub fn project(&self, degree: usize, v: &SparseVec, ell: usize) -> Option<Vec<Q>> {
        let coords = self.decompose(degree, v)?;
        let j = self.n + 2 * ell - degree;
        let dim = self.primitive_basis(j).len();
        let mut out = vec![Q::zero(); dim];
        for ((jj, ll, idx), q) in coords {
            if ll == ell && jj == j {
                out[idx] = q;
            }
        }
        Some(out)
    }

}

/// Compute the primitive decomposition; requires hard Lefschetz.
pub fn primitive_decomposition(
    ring: &CohomologyRing,
) -> Result<PrimitiveDecomposition, LefschetzError> {
    for (j, ok) in hard_lefschetz_check(ring)? {
        if !ok {
            return Err(LefschetzError::HardLefschetzFailure { j });
        }
    }
    let w = omega_of(ring)?;
    let n = ring.half_dimension();
    let mut primitive: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
    for j in 0..=n {
        let d = n - j;
        if ring.betti(d) == 0 {
            continue;
        }
        // primitives = kernel of w^{j+1} out of degree n - j
        let m = power_matrix(ring, &w, d, j + 1);
        let dom = ring.basis().in_degree(d);
        let kernel = if d + 2 * (j + 1) > ring.real_dimension() {
            // the whole space is primitive
            dom.iter().map(|&i| SparseVec::unit(ring.dim(), i)).collect()
        } else {
            m.rank_kernel_image()
                .kernel
                .into_iter()
                .map(|k| {
                    let mut v = SparseVec::zero(ring.dim());
                    for (c, q) in k.iter() {
                        v.add_to(dom[c], q);
                    }
                    v
                })
                .collect::<Vec<_>>()
        };
        if !kernel.is_empty() {
            primitive.insert(j, kernel);
        }
    }
    // solvers per degree over the w^ell p spanning set
    let mut solvers = BTreeMap::new();
    for d in 0..=ring.real_dimension() {
        if ring.betti(d) == 0 {
            continue;
        }
        let mut tags = Vec::new();
        let mut solver = TrackedEliminator::new();
        let mut count = 0usize;
        for (&j, basis) in &primitive {
            // w^ell p lands in degree d when (n - j) + 2 ell = d and ell <= j
            let base_deg = n - j;
            if d < base_deg || (d - base_deg) % 2 != 0 {
                continue;
            }
            let ell = (d - base_deg) / 2;
            if ell > j {
                continue;
            }
            for (idx, p) in basis.iter().enumerate() {
                let mut v = p.clone();
                for _ in 0..ell {
                    v = ring.mul(&w, &v);
                }
                let map: BTreeMap<usize, Q> = v.iter().map(|(i, q)| (i, q.clone())).collect();
                match solver.offer(map) {
                    OfferOutcome::Pivot(_) => {
                        tags.push((j, ell, idx));
                        count += 1;
                    }
                    OfferOutcome::Dependent(_) => {
                        // the decomposition is direct under hard Lefschetz
                        unreachable!("Lefschetz decomposition failed to be direct in degree {d}");
                    }
                }
            }
        }
        if count != ring.betti(d) {
            // dimensions must add up under hard Lefschetz
            unreachable!("Lefschetz decomposition incomplete in degree {d}");
        }
        solvers.insert(d, (tags, solver));
    }
    Ok(PrimitiveDecomposition { n, primitive, solvers })
}

/// Build the sl2 action: `e` cups with omega, `h` weights degree `n + j`
/// by `j`, and `f` lowers through the primitive decomposition by
/// `f(w^ell ∧ p) = ell (j - ell + 1) w^{ell-1} ∧ p`.
pub fn build_sl2(ring: &CohomologyRing) -> Result<Sl2Action, LefschetzError> {
    let decomp = primitive_decomposition(ring)?;
    let w = omega_of(ring)?;
    let n = ring.half_dimension();
    let dim = ring.dim();

    let mut e = SparseMat::zero(dim, dim);
    let mut h = SparseMat::zero(dim, dim);
    let mut f = SparseMat::zero(dim, dim);
    for (i, _, d) in ring.basis().iter() {
        let img = ring.mul(&w, &SparseVec::unit(dim, i));
        *e.col_mut(i) = img;
        let weight = d as i64 - n as i64;
        if weight != 0 {
            h.set(i, i, Q::from_integer(weight.into()));
        }
        // f on the unit basis vector through the decomposition
        let coords = decomp
            .decompose(d, &SparseVec::unit(dim, i))
            .expect("decomposition covers every degree");
        let mut img = SparseVec::zero(dim);
        for ((j, ell, idx), q) in coords {
            if ell == 0 {
                continue;
            }
            let p = &decomp.primitive_basis(j)[idx];
            let mut v = p.clone();
            for _ in 0..(ell - 1) {
                v = ring.mul(&w, &v);
            }
            let scale = qi((ell * (j - ell + 1)) as i64) * q;
            img.add_scaled(&v, &scale);
        }
        *f.col_mut(i) = img;
    }
    let action = Sl2Action { e, h, f };
    debug_assert!(action.violations().is_empty());
    Ok(action)
}

/// Gram matrix of `(α, β) -> ∫ w^j α β` on degree `n - j`.
pub fn polarization_pairing(ring: &CohomologyRing, j: usize) -> Result<SparseMat, LefschetzError> {
    if ring.real_dimension() % 2 != 0 {
        return Err(LefschetzError::OddDimension(ring.real_dimension()));
    }
    let w = omega_of(ring)?;
    let n = ring.half_dimension();
    let d = n - j;
    let idx = ring.basis().in_degree(d);
    let mut wj = SparseVec::unit(ring.dim(), ring.unit_index());
    for _ in 0..j {
        wj = ring.mul(&w, &wj);
    }
    let mut m = SparseMat::zero(idx.len(), idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &k) in idx.iter().enumerate() {
            let prod = ring.mul(
                &wj,
                &ring.mul(&SparseVec::unit(ring.dim(), i), &SparseVec::unit(ring.dim(), k)),
            );
            let q = ring.integrate(&prod);
            if !q.is_zero() {
                m.set(a, b, q);
            }
        }
    }
    Ok(m)
}

/// Gram matrix of the polarization pairing restricted to the primitive
/// subspace at level `j`.
pub fn polarization_on_primitives(
    ring: &CohomologyRing,
    decomp: &PrimitiveDecomposition,
    j: usize,
) -> Result<SparseMat, LefschetzError> {
    let w = omega_of(ring)?;
    let basis = decomp.primitive_basis(j);
    let mut wj = SparseVec::unit(ring.dim(), ring.unit_index());
    for _ in 0..j {
        wj = ring.mul(&w, &wj);
    }
    let mut m = SparseMat::zero(basis.len(), basis.len());
    for (a, p) in basis.iter().enumerate() {
        for (b, q) in basis.iter().enumerate() {
            let val = ring.integrate(&ring.mul(&wj, &ring.mul(p, q)));
            if !val.is_zero() {
                m.set(a, b, val);
            }
        }
    }
    Ok(m)
}

/// A degree-0 derivation of the ring, stored as `(target, source) ->
/// coefficient` over basis indices (source and target in equal degrees).
pub type DerivationMatrix = BTreeMap<(usize, usize), Q>;

/// Basis of the Lie algebra of degree-0 derivations annihilating the
/// prescribed classes.
pub struct DerivationAlgebra {
    pub dim_ring: usize,
    pub basis: Vec<DerivationMatrix>,
}

impl DerivationAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_matrix(&self, i: usize) -> SparseMat {
        derivation_to_matrix(self.dim_ring, &self.basis[i])
    }

    /// Structure constants are only sensible to print for small algebras;
    /// the bracket itself is exact at any size.
    pub fn bracket(&self, a: usize, b: usize) -> SparseMat {
        let (ma, mb) = (self.to_matrix(a), self.to_matrix(b));
        ma.compose(&mb).add(&mb.compose(&ma).scaled(&-Q::one()))
    }

    /// Does the given matrix lie in the span of the basis?
    pub fn span_contains(&self, m: &DerivationMatrix) -> bool {
        let mut elim: Eliminator<(usize, usize)> = Eliminator::rank_only();
        for b in &self.basis {
            elim.offer(b.clone());
        }
        let rank = elim.rank();
        elim.offer(m.clone());
        elim.rank() == rank
    }

    /// Gram-matrix nondegeneracy of the trace form `tr(δ1 δ2)` — evidence-
    /// level reductivity data, only computed for small algebras.
    pub fn trace_form_nondegenerate(&self, cap: usize) -> Option<bool> {
        if self.dim() > cap {
            return None;
        }
        let mats: Vec<SparseMat> = (0..self.dim()).map(|i| self.to_matrix(i)).collect();
        let mut gram = SparseMat::zero(self.dim(), self.dim());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let prod = mats[i].compose(&mats[j]);
                let mut tr = Q::zero();
                for d in 0..prod.cols() {
                    tr += prod.get(d, d);
                }
                if !tr.is_zero() {
                    gram.set(i, j, tr);
                }
            }
        }
        Some(gram.rank_kernel_image().rank == self.dim())
    }
}

pub fn derivation_to_matrix(dim: usize, d: &DerivationMatrix) -> SparseMat {
    let mut m = SparseMat::zero(dim, dim);
    for ((t, s), q) in d {
        m.set(*t, *s, q.clone());
    }
    m
}

/// Solve the exact linear system for degree-0 derivations: degree
/// preservation, the Leibniz rule on every basis pair, and annihilation of
/// the fixed classes.
pub fn derivation_algebra(ring: &CohomologyRing, fixed: &[SparseVec]) -> DerivationAlgebra {
    let reduced = ring.reduced_indices();
    // unknowns x_{t,s}: value of the derivation on b_s at coordinate b_t
    let mut vars: Vec<(usize, usize)> = Vec::new();
    for &s in &reduced {
        for &t in &reduced {
            if ring.basis().degree(s) == ring.basis().degree(t) {
                vars.push((t, s));
            }
        }
    }

    // reverse product index: result coordinate -> [(p, q, coeff)]
    let mut by_result: BTreeMap<usize, Vec<(usize, usize, Q)>> = BTreeMap::new();
    for (p, q, v) in ring.nonzero_products() {
        for (r, c) in v.iter() {
            by_result.entry(r).or_default().push((p, q, c.clone()));
        }
    }

    // rows: (0, p, q, t) for Leibniz on the pair (p, q); (1, f, t, 0) for
    // fixed classes
    type RowKey = (u8, usize, usize, usize);
    let mut elim: TrackedEliminator<RowKey> = TrackedEliminator::new();
    let mut kernel: Vec<BTreeMap<usize, Q>> = Vec::new();
    for &(t, s) in &vars {
        let mut col: BTreeMap<RowKey, Q> = BTreeMap::new();
        // δ(b_p b_q) term: x_{t,s} appears with the coefficient of b_s in b_p b_q
        if let Some(list) = by_result.get(&s) {
            for (p, q, c) in list {
                add_term(&mut col, (0, *p, *q, t), c.clone());
            }
        }
        // -δ(b_p) b_q with p = s: for every q, -(b_t b_q) at rows (s, q, .)
        for &q in &reduced {
            let prod = ring.product(t, q);
            for (r, c) in prod.iter() {
                add_term(&mut col, (0, s, q, r), -c.clone());
            }
        }
        // -b_p δ(b_q) with q = s
        for &p in &reduced {
            let prod = ring.product(p, t);
            for (r, c) in prod.iter() {
                add_term(&mut col, (0, p, s, r), -c.clone());
            }
        }
        // fixed classes: δ(v)|_t = Σ_s v_s x_{t,s}
        for (fi, v) in fixed.iter().enumerate() {
            let c = v.get(s);
            if !c.is_zero() {
                add_term(&mut col, (1, fi, t, 0), c);
            }
        }
        if let OfferOutcome::Dependent(combo) = elim.offer(col) {
            kernel.push(combo);
        }
    }

    let basis = kernel
        .into_iter()
        .map(|combo| {
            let mut m: DerivationMatrix = BTreeMap::new();
            for (vi, q) in combo {
                let (t, s) = vars[vi];
                add_term(&mut m, (t, s), q);
            }
            m
        })
        .collect();
    DerivationAlgebra { dim_ring: ring.dim(), basis }
}

/// Verify the Leibniz rule for an arbitrary degree-0 matrix, directly.
pub fn is_degree_zero_derivation(ring: &CohomologyRing, m: &DerivationMatrix) -> bool {
    for ((t, s), _) in m.iter() {
        if ring.basis().degree(*t) != ring.basis().degree(*s) {
            return false;
        }
    }
    let mat = derivation_to_matrix(ring.dim(), m);
    let reduced = ring.reduced_indices();
    for &p in &reduced {
        for &q in &reduced {
            if ring.basis().degree(p) + ring.basis().degree(q) > ring.real_dimension() {
                continue;
            }
            let lhs = mat.apply(&ring.product(p, q));
            let mut rhs = ring.mul(&mat.apply(&SparseVec::unit(ring.dim(), p)), &SparseVec::unit(ring.dim(), q));
            rhs.add_scaled(
                &ring.mul(&SparseVec::unit(ring.dim(), p), &mat.apply(&SparseVec::unit(ring.dim(), q))),
                &Q::one(),
            );
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// `[δ, e] = [δ, h] = [δ, f] = 0` for every basis element; returns the
/// failures as (basis index, operator name).
pub fn sl2_commutant_check(g: &DerivationAlgebra, sl2: &Sl2Action) -> Vec<(usize, &'static str)> {
    let mut out = Vec::new();
    let comm = |a: &SparseMat, b: &SparseMat| a.compose(b).add(&b.compose(a).scaled(&-Q::one()));
    for i in 0..g.dim() {
        let m = g.to_matrix(i);
        if !comm(&m, &sl2.e).is_zero() {
            out.push((i, "e"));
        }
        if !comm(&m, &sl2.h).is_zero() {
            out.push((i, "h"));
        }
        if !comm(&m, &sl2.f).is_zero() {
            out.push((i, "f"));
        }
    }
    out
}

/// Injectivity of the restriction of the algebra to primitive
/// subspaces composed with the level projections. Returns the kernel
/// basis when it fails.
pub fn restriction_injectivity(
    g: &DerivationAlgebra,
    decomp: &PrimitiveDecomposition,
) -> (bool, Vec<DerivationMatrix>) {
    let n = decomp.half_dimension();
    let mut elim: TrackedEliminator<(usize, usize, usize, usize)> = TrackedEliminator::new();
    let mut kernel = Vec::new();
    for i in 0..g.dim() {
        let m = g.to_matrix(i);
        let mut col: BTreeMap<(usize, usize, usize, usize), Q> = BTreeMap::new();
        for (&j, basis) in decomp.primitive.iter() {
            let d = n - j;
            for (pi, p) in basis.iter().enumerate() {
                let img = m.apply(p);
                if img.is_zero() {
                    continue;
                }
                let coords = decomp.decompose(d, &img).expect("image decomposes");
                for ((jj, ll, idx), q) in coords {
                    add_term(&mut col, (j, pi, jj * 1000 + ll, idx), q);
                }
            }
        }
        if let OfferOutcome::Dependent(combo) = elim.offer(col) {
            let mut w: DerivationMatrix = BTreeMap::new();
            for (bi, q) in combo {
                for (key, c) in &g.basis[bi] {
                    add_term(&mut w, *key, c * &q);
                }
            }
            kernel.push(w);
        }
    }
    (kernel.is_empty(), kernel)
}
