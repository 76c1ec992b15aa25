//! Finite graded-commutative rational cohomology rings with Poincaré
//! duality, and builders for the standard example families.
//!
//! A ring stores a graded basis (with a single degree-0 unit), the products
//! of basis classes, an integration functional on the top degree, and
//! optional decorations: a distinguished degree-2 class `omega` and a list
//! of Pontryagin classes. Products are completed under graded commutativity
//! at construction time; full invariant checking (commutativity,
//! associativity, duality, ...) is a separate report-style pass in
//! [`CohomologyRing::validate`].

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{qi, GradedBasis, LinalgError, Q, SparseMat, SparseVec};

#[derive(Debug, Error)]
pub enum RingError {
    #[error(transparent)]
    Basis(#[from] LinalgError),
    #[error("no degree-0 unit class (expected exactly one, found {0})")]
    UnitCount(usize),
    #[error("basis degree {degree} of `{name}` exceeds the real dimension {dim}")]
    DegreeOutOfRange { name: String, degree: usize, dim: usize },
    #[error("product of `{left}` (degree {ldeg}) and `{right}` (degree {rdeg}) must be homogeneous of degree {} but has a term in degree {found}", ldeg + rdeg)]
    ProductDegree { left: String, right: String, ldeg: usize, rdeg: usize, found: usize },
    #[error("the product of `{left}` and `{right}` is defined more than once")]
    DuplicateProduct { left: String, right: String },
    #[error("no fundamental class: the integration functional is empty")]
    NoFundamentalClass,
    #[error("integration functional assigns a value to `{name}` which is not in the top degree")]
    IntegrationDegree { name: String },
    #[error("omega must be homogeneous of degree 2")]
    OmegaDegree,
    #[error("pontryagin class p_{k} must be homogeneous of degree {}", 4 * k)]
    PontryaginDegree { k: usize },
    #[error("cubic form is degenerate: the direction {witness:?} multiplies to zero with all of H^2")]
    DegenerateCubic { witness: Vec<Q> },
    #[error("exterior algebra generators must have odd degrees, got {0}")]
    EvenExteriorGenerator(usize),
    #[error("{0}")]
    Unsupported(String),
}

/// A finite graded-commutative algebra over `Q` with integration.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyRing {
    real_dimension: usize,
    basis: GradedBasis,
    unit: usize,
    /// Products of non-unit basis classes, both orders stored; zero
    /// products are absent.
    products: BTreeMap<(usize, usize), SparseVec>,
    /// Integration functional on top-degree basis classes.
    integrate: BTreeMap<usize, Q>,
    omega: Option<SparseVec>,
    pontryagin: Vec<(usize, SparseVec)>,
}

/// One failed ring invariant, with enough context to locate it.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    GradedCommutativity { left: String, right: String },
    Associativity { a: String, b: String, c: String },
    PoincareDuality { degree: usize, rank: usize, expected: usize },
    DegreeSymmetry { degree: usize },
    OmegaDegree,
    PontryaginShape { k: usize },
}

impl Violation {
    /// Stable short label, used by the CLI listing and tests.
    pub fn label(&self) -> &'static str {
        match self {
            Violation::GradedCommutativity { .. } => "graded commutativity",
            Violation::Associativity { .. } => "associativity",
            Violation::PoincareDuality { .. } => "Poincaré duality",
            Violation::DegreeSymmetry { .. } => "Betti symmetry",
            Violation::OmegaDegree => "omega degree",
            Violation::PontryaginShape { .. } => "pontryagin degree",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Violation::GradedCommutativity { left, right } => {
                format!("graded commutativity fails for {left} * {right}")
            }
            Violation::Associativity { a, b, c } => {
                format!("associativity fails on ({a} * {b}) * {c}")
            }
            Violation::PoincareDuality { degree, rank, expected } => format!(
                "Poincaré duality fails between degrees {degree} and complementary: pairing rank {rank} < {expected}"
            ),
            Violation::DegreeSymmetry { degree } => {
                format!("Betti numbers in degrees {degree} and complementary differ")
            }
            Violation::OmegaDegree => "omega is not homogeneous of degree 2".to_string(),
            Violation::PontryaginShape { k } => {
                format!("pontryagin class p_{k} is not in degree {}", 4 * k)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub simply_connected: bool,
    /// `Some(true)` iff omega is present and its top power integrates to a
    /// nonzero value.
    pub omega_top_nonzero: Option<bool>,
    /// `Some(true)` iff omega and Pontryagin classes are present and every
    /// `p_k` lies in the span of `omega^{2k}` (the hyperplane-power shape
    /// of complete intersections).
    pub pontryagin_omega_span: Option<bool>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CohomologyRing {
    /// Assemble a ring from one-sided product data.
    ///
    /// `products` may list each unordered pair in either or both orders;
    /// missing opposites are filled in using graded commutativity and
    /// doubly-listed pairs are checked against it.
    pub fn new(
        real_dimension: usize,
        basis: GradedBasis,
        products: Vec<((usize, usize), SparseVec)>,
        integrate: Vec<(usize, Q)>,
        omega: Option<SparseVec>,
        pontryagin: Vec<(usize, SparseVec)>,
    ) -> Result<Self, RingError> {
        let units = basis.in_degree(0);
        if units.len() != 1 {
            return Err(RingError::UnitCount(units.len()));
        }
        let unit = units[0];
        for (_, name, degree) in basis.iter() {
            if degree > real_dimension {
                return Err(RingError::DegreeOutOfRange {
                    name: name.to_string(),
                    degree,
                    dim: real_dimension,
                });
            }
        }

        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for ((i, j), v) in products {
            let (di, dj) = (basis.degree(i), basis.degree(j));
            for (t, _) in v.iter() {
                if basis.degree(t) != di + dj {
                    return Err(RingError::ProductDegree {
                        left: basis.name(i).to_string(),
                        right: basis.name(j).to_string(),
                        ldeg: di,
                        rdeg: dj,
                        found: basis.degree(t),
                    });
                }
            }
            if table.insert((i, j), v).is_some() {
                return Err(RingError::DuplicateProduct {
                    left: basis.name(i).to_string(),
                    right: basis.name(j).to_string(),
                });
            }
        }
        // fill in missing opposite orders under graded commutativity;
        // explicitly stored contradictions are left for validate() to report
        let keys: Vec<(usize, usize)> = table.keys().copied().collect();
        for (i, j) in keys {
            if i == j || table.contains_key(&(j, i)) {
                continue;
            }
            let sign = if basis.degree(i) % 2 == 1 && basis.degree(j) % 2 == 1 {
                -Q::one()
            } else {
                Q::one()
            };
            let flipped = table[&(i, j)].scaled(&sign);
            table.insert((j, i), flipped);
        }
        table.retain(|_, v| !v.is_zero());

        if integrate.is_empty() {
            return Err(RingError::NoFundamentalClass);
        }
        let mut int_map = BTreeMap::new();
        for (i, q) in integrate {
            if basis.degree(i) != real_dimension {
                return Err(RingError::IntegrationDegree { name: basis.name(i).to_string() });
            }
            if !q.is_zero() {
                int_map.insert(i, q);
            }
        }
        if int_map.is_empty() {
            return Err(RingError::NoFundamentalClass);
        }

        if let Some(w) = &omega {
            for (i, _) in w.iter() {
                if basis.degree(i) != 2 {
                    return Err(RingError::OmegaDegree);
                }
            }
        }
        for (k, p) in &pontryagin {
            for (i, _) in p.iter() {
                if basis.degree(i) != 4 * k {
                    return Err(RingError::PontryaginDegree { k: *k });
                }
            }
        }

        Ok(CohomologyRing {
            real_dimension,
            basis,
            unit,
            products: table,
            integrate: int_map,
            omega,
            pontryagin,
        })
    }

    pub fn real_dimension(&self) -> usize {
        self.real_dimension
    }

    /// Half the real dimension, rounded down (the complex dimension for
    /// even-dimensional rings).
    pub fn half_dimension(&self) -> usize {
        self.real_dimension / 2
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn betti(&self, degree: usize) -> usize {
        self.basis.dim_in_degree(degree)
    }

    pub fn omega(&self) -> Option<&SparseVec> {
        self.omega.as_ref()
    }

    pub fn pontryagin(&self) -> &[(usize, SparseVec)] {
        &self.pontryagin
    }

    pub fn integrate_entries(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.integrate.iter().map(|(i, q)| (*i, q))
    }

    /// Indices of reduced (positive-degree) basis classes, in basis order.
    pub fn reduced_indices(&self) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis.degree(i) > 0).collect()
    }

    pub fn simply_connected(&self) -> bool {
        self.betti(1) == 0 && (self.real_dimension < 1 || self.betti(self.real_dimension - 1) == 0)
    }

    /// Product of two basis classes.
    pub fn product(&self, i: usize, j: usize) -> SparseVec {
        if i == self.unit {
            return SparseVec::unit(self.dim(), j);
        }
        if j == self.unit {
            return SparseVec::unit(self.dim(), i);
        }
        self.products
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| SparseVec::zero(self.dim()))
    }

    /// Iterate the stored nonzero products between non-unit classes.
    pub fn nonzero_products(&self) -> impl Iterator<Item = (usize, usize, &SparseVec)> {
        self.products.iter().map(|((i, j), v)| (*i, *j, v))
    }

    /// Bilinear extension of the product to sparse vectors.
    pub fn mul(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero(self.dim());
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                out.add_scaled(&self.product(i, j), &(a * b));
            }
        }
        out
    }

    pub fn integrate(&self, v: &SparseVec) -> Q {
        let mut acc = Q::zero();
        for (i, q) in v.iter() {
            if let Some(w) = self.integrate.get(&i) {
                acc += q * w;
            }
        }
        acc
    }

    /// `∫(b_i · b_j)`.
    pub fn pairing(&self, i: usize, j: usize) -> Q {
        self.integrate(&self.product(i, j))
    }

    /// The Poincaré pairing matrix between degree `d` and its complement.
    pub fn pairing_matrix(&self, d: usize) -> SparseMat {
        let rows_idx = self.basis.in_degree(self.real_dimension - d);
        let cols_idx = self.basis.in_degree(d);
        let mut m = SparseMat::zero(rows_idx.len(), cols_idx.len());
        for (cj, &j) in cols_idx.iter().enumerate() {
            for (ri, &i) in rows_idx.iter().enumerate() {
                let q = self.pairing(j, i);
                if !q.is_zero() {
                    m.set(ri, cj, q);
                }
            }
        }
        m
    }

    /// Matrix of multiplication by `w` from degree `d` to degree `d + k`,
    /// in the per-degree bases.
    pub fn mul_by_matrix(&self, w: &SparseVec, d: usize, k: usize) -> SparseMat {
        let dom = self.basis.in_degree(d);
        let cod = self.basis.in_degree(d + k);
        let pos: BTreeMap<usize, usize> = cod.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut m = SparseMat::zero(cod.len(), dom.len());
        for (cj, &j) in dom.iter().enumerate() {
            let img = self.mul(w, &SparseVec::unit(self.dim(), j));
            for (i, q) in img.iter() {
                m.set(pos[&i], cj, q.clone());
            }
        }
        m
    }

    /// Check every ring invariant and report the failures.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n2 = self.real_dimension;

        // Betti symmetry (needed for duality pairings to be square)
        for d in 0..=n2 / 2 {
            if self.betti(d) != self.betti(n2 - d) {
                violations.push(Violation::DegreeSymmetry { degree: d });
            }
        }

        // graded commutativity of the stored table
        for ((i, j), v) in &self.products {
            if i > j {
                continue;
            }
            let sign = if self.basis.degree(*i) % 2 == 1 && self.basis.degree(*j) % 2 == 1 {
                -Q::one()
            } else {
                Q::one()
            };
            if self.product(*j, *i) != v.scaled(&sign) {
                violations.push(Violation::GradedCommutativity {
                    left: self.basis.name(*i).to_string(),
                    right: self.basis.name(*j).to_string(),
                });
            }
        }

        // associativity on all triples with total degree in range
        let idx: Vec<usize> =
            (0..self.dim()).filter(|&i| i != self.unit && self.basis.degree(i) > 0).collect();
        for &a in &idx {
            let da = self.basis.degree(a);
            for &b in &idx {
                let db = self.basis.degree(b);
                if da + db > n2 {
                    continue;
                }
                let ab = self.product(a, b);
                for &c in &idx {
                    let dc = self.basis.degree(c);
                    if da + db + dc > n2 {
                        continue;
                    }
                    let bc = self.product(b, c);
                    let left = self.mul(&ab, &SparseVec::unit(self.dim(), c));
                    let right = self.mul(&SparseVec::unit(self.dim(), a), &bc);
                    if left != right {
                        violations.push(Violation::Associativity {
                            a: self.basis.name(a).to_string(),
                            b: self.basis.name(b).to_string(),
                            c: self.basis.name(c).to_string(),
                        });
                    }
                }
            }
        }

        // Poincaré duality: each pairing must have full rank
        for d in 0..=n2 {
            let dim_d = self.betti(d);
            if dim_d == 0 || self.betti(n2 - d) != dim_d {
                continue; // symmetry violation already recorded
            }
            let rank = self.pairing_matrix(d).rank();
            if rank != dim_d {
                violations.push(Violation::PoincareDuality { degree: d, rank, expected: dim_d });
            }
        }

        if let Some(w) = &self.omega {
            if w.iter().any(|(i, _)| self.basis.degree(i) != 2) {
                violations.push(Violation::OmegaDegree);
            }
        }
        for (k, p) in &self.pontryagin {
            if p.iter().any(|(i, _)| self.basis.degree(i) != 4 * k) {
                violations.push(Violation::PontryaginShape { k: *k });
            }
        }

        let omega_top_nonzero = self.omega.as_ref().map(|w| {
            let n = n2 / 2;
            let mut p = SparseVec::unit(self.dim(), self.unit);
            for _ in 0..n {
                p = self.mul(&p, w);
            }
            !self.integrate(&p).is_zero()
        });

        let pontryagin_omega_span = match (&self.omega, self.pontryagin.is_empty()) {
            (Some(w), false) => Some(self.pontryagin.iter().all(|(k, p)| {
                let mut pow = SparseVec::unit(self.dim(), self.unit);
                for _ in 0..(2 * k) {
                    pow = self.mul(w, &pow);
                }
                let mut elim = crate::linalg::Eliminator::<usize>::rank_only();
                elim.offer(pow.iter().map(|(i, q)| (i, q.clone())).collect());
                let rank = elim.rank();
                elim.offer(p.iter().map(|(i, q)| (i, q.clone())).collect());
                elim.rank() == rank
            })),
            _ => None,
        };

        ValidationReport {
            violations,
            simply_connected: self.simply_connected(),
            omega_top_nonzero,
            pontryagin_omega_span,
        }
    }
}

/// `H^*(P^m; Q) = Q[w]/(w^{m+1})` with `∫ w^m = 1` and total Pontryagin
/// class `(1 + w^2)^{m+1}` truncated.
pub fn build_projective_space(m: usize) -> CohomologyRing {
    assert!(m >= 1, "projective space needs m >= 1");
    let mut elems: Vec<(String, usize)> = vec![("1".to_string(), 0)];
    for k in 1..=m {
        let name = if k == 1 { "w".to_string() } else { format!("w{k}") };
        elems.push((name, 2 * k));
    }
    let basis = GradedBasis::new(elems).unwrap();
    let dim = basis.len();
    let mut products = Vec::new();
    for a in 1..=m {
        for b in a..=m {
            if a + b <= m {
                products.push(((a, b), SparseVec::unit(dim, a + b)));
            }
        }
    }
    let omega = Some(SparseVec::unit(dim, 1));
    // p(P^m) = (1 + w^2)^{m+1}: p_k = binom(m+1, k) w^{2k}
    let mut pontryagin = Vec::new();
    for k in 1..=m / 2 {
        let mut c = Q::one();
        for t in 0..k {
            c = c * qi((m + 1 - t) as i64) / qi((t + 1) as i64);
        }
        pontryagin.push((k, SparseVec::from_entries(dim, [(2 * k, c)])));
    }
    CohomologyRing::new(2 * m, basis, products, vec![(m, Q::one())], omega, pontryagin).unwrap()
}

/// Rational cohomology of an n-sphere, as a (possibly degenerate) ring.
pub fn build_sphere(n: usize) -> CohomologyRing {
    assert!(n >= 2);
    let basis = GradedBasis::new(vec![("1".to_string(), 0), ("s".to_string(), n)]).unwrap();
    CohomologyRing::new(n, basis, Vec::new(), vec![(1, Q::one())], None, Vec::new()).unwrap()
}

/// Künneth product of two rings, with Koszul signs.
pub fn build_product(a: &CohomologyRing, b: &CohomologyRing) -> CohomologyRing {
    let mut elems = Vec::new();
    let mut pair_index = BTreeMap::new();
    for (i, ni, di) in a.basis().iter() {
        for (j, nj, dj) in b.basis().iter() {
            let name = match (i == a.unit_index(), j == b.unit_index()) {
                (true, true) => "1".to_string(),
                (false, true) => ni.to_string(),
                (true, false) => format!("'{nj}"),
                (false, false) => format!("{ni}*'{nj}"),
            };
            pair_index.insert((i, j), elems.len());
            elems.push((name, di + dj));
        }
    }
    let basis = GradedBasis::new(elems).unwrap();
    let dim = basis.len();
    let n2 = a.real_dimension() + b.real_dimension();

    let to_vec = |va: &SparseVec, vb: &SparseVec, sign: &Q| -> SparseVec {
        let mut out = SparseVec::zero(dim);
        for (i, qa) in va.iter() {
            for (j, qb) in vb.iter() {
                out.add_to(pair_index[&(i, j)], &(qa * qb * sign));
            }
        }
        out
    };

    let unit_pair = pair_index[&(a.unit_index(), b.unit_index())];
    let mut products = Vec::new();
    for (&(i1, j1), &p) in &pair_index {
        for (&(i2, j2), &q) in &pair_index {
            if p > q || p == unit_pair || q == unit_pair {
                continue;
            }
            let d = basis.degree(p) + basis.degree(q);
            if d > n2 {
                continue;
            }
            // (x1 ⊗ y1)(x2 ⊗ y2) = (-1)^{|y1||x2|} x1x2 ⊗ y1y2
            let sign = if b.basis().degree(j1) % 2 == 1 && a.basis().degree(i2) % 2 == 1 {
                -Q::one()
            } else {
                Q::one()
            };
            let xa = a.mul(&SparseVec::unit(a.dim(), i1), &SparseVec::unit(a.dim(), i2));
            let yb = b.mul(&SparseVec::unit(b.dim(), j1), &SparseVec::unit(b.dim(), j2));
            let v = to_vec(&xa, &yb, &sign);
            if !v.is_zero() {
                products.push(((p, q), v));
            }
        }
    }

    let mut integrate = Vec::new();
    for (i, qa) in a.integrate_entries() {
        for (j, qb) in b.integrate_entries() {
            integrate.push((pair_index[&(i, j)], qa * qb));
        }
    }

    let omega = match (a.omega(), b.omega()) {
        (Some(wa), Some(wb)) => {
            let ua = to_vec(wa, &SparseVec::unit(b.dim(), b.unit_index()), &Q::one());
            let ub = to_vec(&SparseVec::unit(a.dim(), a.unit_index()), wb, &Q::one());
            let mut w = ua;
            w.add_scaled(&ub, &Q::one());
            Some(w)
        }
        _ => None,
    };

    // p(A x B) = p(A) x p(B)
    let mut pontryagin = Vec::new();
    if !a.pontryagin().is_empty() || !b.pontryagin().is_empty() {
        let get = |r: &CohomologyRing, k: usize| -> Option<SparseVec> {
            if k == 0 {
                return Some(SparseVec::unit(r.dim(), r.unit_index()));
            }
            r.pontryagin().iter().find(|(kk, _)| *kk == k).map(|(_, v)| v.clone())
        };
        let ka_max = a.real_dimension() / 4;
        let kb_max = b.real_dimension() / 4;
        for k in 1..=(n2 / 4) {
            let mut acc = SparseVec::zero(dim);
            let mut complete = true;
            for ia in 0..=k {
                let ib = k - ia;
                if ia > ka_max || ib > kb_max {
                    continue;
                }
                match (get(a, ia), get(b, ib)) {
                    (Some(pa), Some(pb)) => acc.add_scaled(&to_vec(&pa, &pb, &Q::one()), &Q::one()),
                    _ => complete = false,
                }
            }
            if complete && !acc.is_zero() {
                pontryagin.push((k, acc));
            }
        }
    }

    CohomologyRing::new(n2, basis, products, integrate, omega, pontryagin).unwrap()
}

/// A symmetric rational 3-tensor on a b2-dimensional space, indexed from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicForm {
    b2: usize,
    coeffs: BTreeMap<(usize, usize, usize), Q>,
}

impl CubicForm {
    pub fn new(b2: usize) -> Self {
        CubicForm { b2, coeffs: BTreeMap::new() }
    }

    pub fn b2(&self) -> usize {
        self.b2
    }

    /// Cubic with `c(i,i,i) = 1` for every i (a Fermat-type form).
    pub fn diagonal(b2: usize) -> Self {
        let mut c = CubicForm::new(b2);
        for i in 0..b2 {
            c.set(i, i, i, Q::one());
        }
        c
    }

    /// Cubic adapted to the first coordinate as a Lefschetz class:
    /// `c(0,0,0) = 1` and `c(0,j,j) = 1` for `j >= 1`, so that cup with
    /// `e_1` maps H^2 isomorphically to H^4 and `e_1^3` integrates to 1.
    pub fn lefschetz(b2: usize) -> Self {
        let mut c = CubicForm::new(b2);
        c.set(0, 0, 0, Q::one());
        for j in 1..b2 {
            c.set(0, j, j, Q::one());
        }
        c
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Q) {
        assert!(i < self.b2 && j < self.b2 && k < self.b2);
        let mut key = [i, j, k];
        key.sort_unstable();
        if value.is_zero() {
            self.coeffs.remove(&(key[0], key[1], key[2]));
        } else {
            self.coeffs.insert((key[0], key[1], key[2]), value);
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Q {
        let mut key = [i, j, k];
        key.sort_unstable();
        self.coeffs.get(&(key[0], key[1], key[2])).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Q)> {
        self.coeffs.iter().map(|((i, j, k), q)| (*i, *j, *k, q))
    }

    /// A direction `u` with `c(u, ., .) = 0`, if one exists.
    pub fn kernel_direction(&self) -> Option<Vec<Q>> {
        // rows: pairs (j,k); columns: i
        let npairs = self.b2 * self.b2;
        let mut m = SparseMat::zero(npairs, self.b2);
        for i in 0..self.b2 {
            for j in 0..self.b2 {
                for k in 0..self.b2 {
                    let q = self.get(i, j, k);
                    if !q.is_zero() {
                        m.set(j * self.b2 + k, i, q);
                    }
                }
            }
        }
        let d = m.rank_kernel_image();
        d.kernel.first().map(|v| (0..self.b2).map(|i| v.get(i)).collect())
    }
}

/// Simply connected formal six-manifold ring from its cubic intersection
/// form: basis `1, e_i (deg 2), z_{±k} (deg 3), f_i (deg 4), w (deg 6)`,
/// with `e_i e_j = Σ_m c(i,j,m) f_m`, `e_i f_j = δ_ij w`, the standard
/// hyperbolic form on degree 3, and `∫w = 1`.
///
/// Degenerate cubics (a direction multiplying to zero against all of H²)
/// are rejected with the witness direction.
pub fn build_six_manifold(
    b2: usize,
    b3: usize,
    cubic: &CubicForm,
    omega_index: usize,
) -> Result<CohomologyRing, RingError> {
    assert!(b2 >= 1);
    assert_eq!(cubic.b2(), b2, "cubic form size must match b2");
    if b3 % 2 != 0 {
        return Err(RingError::Unsupported("b3 must be even".into()));
    }
    if omega_index >= b2 {
        return Err(RingError::Unsupported(format!(
            "omega index {omega_index} out of range for b2 = {b2}"
        )));
    }
    if let Some(witness) = cubic.kernel_direction() {
        return Err(RingError::DegenerateCubic { witness });
    }

    let m = b3 / 2;
    let mut elems: Vec<(String, usize)> = vec![("1".to_string(), 0)];
    for i in 1..=b2 {
        elems.push((format!("e{i}"), 2));
    }
    for k in 1..=m {
        elems.push((format!("z{k}"), 3));
    }
    for k in 1..=m {
        elems.push((format!("z-{k}"), 3));
    }
    for i in 1..=b2 {
        elems.push((format!("f{i}"), 4));
    }
    elems.push(("w".to_string(), 6));
    let basis = GradedBasis::new(elems).unwrap();
    let dim = basis.len();
    let e = |i: usize| 1 + i; // i from 0
    let zp = |k: usize| 1 + b2 + k; // k from 0
    let zn = |k: usize| 1 + b2 + m + k;
    let f = |i: usize| 1 + b2 + 2 * m + i;
    let w = dim - 1;

    let mut products = Vec::new();
    for i in 0..b2 {
        for j in i..b2 {
            let mut v = SparseVec::zero(dim);
            for t in 0..b2 {
                v.add_to(f(t), &cubic.get(i, j, t));
            }
            if !v.is_zero() {
                products.push(((e(i), e(j)), v));
            }
        }
    }
    for i in 0..b2 {
        products.push(((e(i), f(i)), SparseVec::unit(dim, w)));
    }
    for k in 0..m {
        products.push(((zp(k), zn(k)), SparseVec::unit(dim, w)));
    }

    CohomologyRing::new(
        6,
        basis,
        products,
        vec![(w, Q::one())],
        Some(SparseVec::unit(dim, e(omega_index))),
        Vec::new(),
    )
}

/// Free graded-commutative (exterior) algebra on odd-degree generators,
/// with integration against the top product. With generators of degrees
/// `1, 3, ..., 2m-1` this is the rational cohomology of the unitary group
/// U(m).
pub fn build_exterior(odd_degrees: &[usize]) -> Result<CohomologyRing, RingError> {
    for &d in odd_degrees {
        if d % 2 == 0 {
            return Err(RingError::EvenExteriorGenerator(d));
        }
    }
    let n = odd_degrees.len();
    let total: usize = odd_degrees.iter().sum();
    // basis: subsets of generators, ordered by (degree, subset bits)
    let mut subsets: Vec<u32> = (0..(1u32 << n)).collect();
    let degree_of = |s: u32| -> usize {
        (0..n).filter(|&i| s & (1 << i) != 0).map(|i| odd_degrees[i]).sum()
    };
    subsets.sort_by_key(|&s| (degree_of(s), s));
    let index_of: BTreeMap<u32, usize> =
        subsets.iter().enumerate().map(|(p, &s)| (s, p)).collect();
    let name_of = |s: u32| -> String {
        if s == 0 {
            return "1".to_string();
        }
        (0..n)
            .filter(|&i| s & (1 << i) != 0)
            .map(|i| format!("y{}", odd_degrees[i]))
            .collect::<Vec<_>>()
            .join("")
    };
    let elems: Vec<(String, usize)> =
        subsets.iter().map(|&s| (name_of(s), degree_of(s))).collect();
    let basis = GradedBasis::new(elems).unwrap();
    let dim = basis.len();

    // sign of merging two disjoint subsets: count generator transpositions
    let merge_sign = |s: u32, t: u32| -> Q {
        let mut sign = Q::one();
        for i in 0..n {
            if t & (1 << i) == 0 {
                continue;
            }
            // generator i of t must pass the generators of s above i
            let higher = s >> (i + 1);
            if (higher.count_ones() % 2) == 1 {
                sign = -sign;
            }
        }
        sign
    };

    let mut products = Vec::new();
    for (&s, &p) in &index_of {
        if s == 0 {
            continue;
        }
        for (&t, &q) in &index_of {
            if t == 0 || p > q {
                continue;
            }
            if s & t != 0 {
                continue; // repeated odd generator squares to zero
            }
            let v = SparseVec::from_entries(dim, [(index_of[&(s | t)], merge_sign(s, t))]);
            products.push(((p, q), v));
        }
    }
    let top = index_of[&((1u32 << n) - 1)];
    CohomologyRing::new(total, basis, products, vec![(top, Q::one())], None, Vec::new())
}
