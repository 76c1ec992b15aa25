//! The reduced homology coalgebra of a ring: the transpose of the cup
//! product on reduced classes, and its primitives.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg::{Q, SparseMat, SparseVec};
use crate::ring::CohomologyRing;

/// Reduced homology of a ring with its coproduct.
///
/// "Letters" are the duals of the positive-degree basis classes, in basis
/// order. The coproduct of a letter is the transpose of the multiplication
/// table: `Δ(c*) = Σ m^c_{ij} (i* ⊗ j*)` where `b_i b_j = Σ m^c_{ij} b_c`.
#[derive(Debug, Clone)]
pub struct HomologyCoalgebra {
    /// (ring basis index, homology degree, name) per letter.
    letters: Vec<(usize, usize, String)>,
    ring_to_letter: BTreeMap<usize, usize>,
    /// Per letter: the reduced coproduct as a list of `(left, right, coeff)`
    /// over letter indices, sorted.
    coproduct: Vec<Vec<(usize, usize, Q)>>,
}

impl HomologyCoalgebra {
    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_degree(&self, letter: usize) -> usize {
        self.letters[letter].1
    }

    pub fn letter_name(&self, letter: usize) -> &str {
        &self.letters[letter].2
    }

    pub fn ring_index(&self, letter: usize) -> usize {
        self.letters[letter].0
    }

    pub fn letter_of_ring_index(&self, ring_index: usize) -> Option<usize> {
        self.ring_to_letter.get(&ring_index).copied()
    }

    pub fn letters_in_degree(&self, degree: usize) -> Vec<usize> {
        (0..self.letters.len()).filter(|&l| self.letters[l].1 == degree).collect()
    }

    pub fn coproduct(&self, letter: usize) -> &[(usize, usize, Q)] {
        &self.coproduct[letter]
    }

    /// Matrix of the reduced coproduct out of degree `t`, rows indexed by
    /// ordered letter pairs `(a, b)` (row `a * L + b`).
    pub fn coproduct_matrix(&self, t: usize) -> (Vec<usize>, SparseMat) {
        let dom = self.letters_in_degree(t);
        let l = self.letter_count();
        let mut m = SparseMat::zero(l * l, dom.len());
        for (cj, &c) in dom.iter().enumerate() {
            for (a, b, q) in &self.coproduct[c] {
                m.col_mut(cj).add_to(a * l + b, q);
            }
        }
        (dom, m)
    }

    /// Kernel of the reduced coproduct in homology degree `t`, as vectors
    /// over the letters of that degree.
    pub fn primitives(&self, t: usize) -> Vec<SparseVec> {
        let (dom, m) = self.coproduct_matrix(t);
        if dom.is_empty() {
            return Vec::new();
        }
        m.rank_kernel_image().kernel
    }

    pub fn primitive_dim(&self, t: usize) -> usize {
        self.primitives(t).len()
    }
}

/// Transpose the cup product among reduced classes.
pub fn reduced_coproduct(ring: &CohomologyRing) -> HomologyCoalgebra {
    let reduced = ring.reduced_indices();
    let ring_to_letter: BTreeMap<usize, usize> =
        reduced.iter().enumerate().map(|(l, &i)| (i, l)).collect();
    let letters: Vec<(usize, usize, String)> = reduced
        .iter()
        .map(|&i| (i, ring.basis().degree(i), ring.basis().name(i).to_string()))
        .collect();
    let mut coproduct: Vec<BTreeMap<(usize, usize), Q>> = vec![BTreeMap::new(); letters.len()];
    for (i, j, v) in ring.nonzero_products() {
        let (Some(&li), Some(&lj)) = (ring_to_letter.get(&i), ring_to_letter.get(&j)) else {
            continue;
        };
        for (c, q) in v.iter() {
            if let Some(&lc) = ring_to_letter.get(&c) {
                let entry = coproduct[lc].entry((li, lj)).or_insert_with(Q::zero);
                *entry += q;
            }
        }
    }
    let coproduct = coproduct
        .into_iter()
        .map(|m| {
            m.into_iter()
                .filter(|(_, q)| !q.is_zero())
                .map(|((a, b), q)| (a, b, q))
                .collect()
        })
        .collect();
    HomologyCoalgebra { letters, ring_to_letter, coproduct }
}
