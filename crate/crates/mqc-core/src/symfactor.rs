//! Factorization of an invertible GF(2) matrix into a product of two
//! symmetric invertible matrices.
//!
//! Every invertible `B` over GF(2) can be written `B = S2 * S1` with both
//! factors symmetric and invertible. The search space is the intertwiner
//! space `{K symmetric : K B = B^T K}`: for any invertible `K` in it,
//! `(S1, S2) = (K, B K^-1)` is a valid pair, and conversely every valid
//! pair arises this way. The useful corollary (relied on by the synthesis
//! pipeline) is that `S1 * S2 = B^T` for pairs produced here.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::f2::{F2Matrix, F2Vector};

/// Which way a [`SymmetricPair`] multiplies out to its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductOrder {
    /// Target is `s1 * s2`.
    S1S2,
    /// Target is `s2 * s1`.
    S2S1,
}

/// A factorization of an invertible matrix into two symmetric invertible
/// factors, together with the order in which they multiply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPair {
    pub s1: F2Matrix,
    pub s2: F2Matrix,
    pub order: ProductOrder,
}

impl SymmetricPair {
    /// The matrix this pair factors.
    pub fn product(&self) -> F2Matrix {
        match self.order {
            ProductOrder::S1S2 => self.s1.mul(&self.s2),
            ProductOrder::S2S1 => self.s2.mul(&self.s1),
        }
    }
}

/// Error from [`factor_symmetric_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationError {
    /// The target matrix is singular, so no factorization exists.
    Singular,
    /// The randomized search over the intertwiner space found no
    /// invertible element within its sample budget. A factorization still
    /// exists; retrying with a different target conditioning (e.g. a
    /// qubit permutation) is the practical way out.
    SearchExhausted,
}

impl fmt::Display for FactorizationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorizationError::Singular => write!(f, "factorization target is singular"),
            FactorizationError::SearchExhausted => {
                write!(f, "no invertible symmetric intertwiner found within the sample budget")
            }
        }
    }
}

impl core::error::Error for FactorizationError {}

/// Index of the unknown `K_{a,b}` (with `a <= b`) in the triangular
/// enumeration used by [`intertwiner_space`].
fn tri_index(a: usize, b: usize) -> usize {
    debug_assert!(a <= b);
    b * (b + 1) / 2 + a
}

/// Basis of the space of symmetric `K` with `K B = B^T K`.
///
/// Each symmetric matrix has `n(n+1)/2` free entries; the constraint
/// `K B + B^T K = 0` is itself symmetric with a zero diagonal, so only
/// the `n(n-1)/2` strictly-upper positions contribute equations. The
/// solution space therefore always has dimension at least `n`.
pub fn intertwiner_space(b: &F2Matrix) -> Vec<F2Matrix> {
    assert!(b.is_square(), "intertwiner target must be square");
    let n = b.rows();
    let unknowns = n * (n + 1) / 2;
    let equations = n * (n - 1) / 2;
    let mut system = F2Matrix::zero(equations.max(1), unknowns);
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            // Entry (i, j) of K B + B^T K.
            for l in 0..n {
                if b.get(l, j) {
                    let idx = tri_index(i.min(l), i.max(l));
                    system.set(row, idx, !system.get(row, idx));
                }
                if b.get(l, i) {
                    let idx = tri_index(l.min(j), l.max(j));
                    system.set(row, idx, !system.get(row, idx));
                }
            }
            row += 1;
        }
    }
    system
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut k = F2Matrix::zero(n, n);
            for bb in 0..n {
                for a in 0..=bb {
                    if v.get(tri_index(a, bb)) {
                        k.set(a, bb, true);
                        k.set(bb, a, true);
                    }
                }
            }
            k
        })
        .collect()
}

/// Builds the pair `(K, B K^-1)` for an invertible intertwiner `K`, or
/// `None` if `K` is singular.
fn pair_from_intertwiner(b: &F2Matrix, k: &F2Matrix) -> Option<SymmetricPair> {
    let k_inv = k.invert().ok()?;
    let s2 = b.mul(&k_inv);
    debug_assert!(s2.is_symmetric(), "intertwiner must yield a symmetric cofactor");
    Some(SymmetricPair {
        s1: k.clone(),
        s2,
        order: ProductOrder::S2S1,
    })
}

/// Number of random intertwiner combinations sampled before giving up.
const SEARCH_SAMPLES: usize = 1024;

/// Factors an invertible `B` as `S2 * S1` with both factors symmetric
/// and invertible.
///
/// Symmetric inputs short-circuit to `(I, B)`. Otherwise the intertwiner
/// space is searched for an invertible element: first each basis vector
/// alone, then random combinations drawn from a generator seeded by the
/// content of `B`, so results are reproducible.
pub fn factor_symmetric_pair(b: &F2Matrix) -> Result<SymmetricPair, FactorizationError> {
    assert!(b.is_square(), "factorization target must be square");
    let n = b.rows();
    if b.rank() != n {
        return Err(FactorizationError::Singular);
    }
    if b.is_symmetric() {
        return Ok(SymmetricPair {
            s1: F2Matrix::identity(n),
            s2: b.clone(),
            order: ProductOrder::S2S1,
        });
    }
    let basis = intertwiner_space(b);
    for k in &basis {
        if let Some(pair) = pair_from_intertwiner(b, k) {
            return Ok(pair);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(b.content_hash());
    for _ in 0..SEARCH_SAMPLES {
        let mut k = F2Matrix::zero(n, n);
        let mut nonzero = false;
        for elem in &basis {
            if rng.gen_bool(0.5) {
                k = k.add(elem);
                nonzero = true;
            }
        }
        if !nonzero {
            continue;
        }
        if let Some(pair) = pair_from_intertwiner(b, &k) {
            return Ok(pair);
        }
    }
    Err(FactorizationError::SearchExhausted)
}

/// Deterministic core of a perturbation move: replaces `s1` by
/// `s1 + sum_{i in combo} basis[i]` and recomputes the cofactor. Returns
/// `None` when the new `s1` is singular or the cofactor loses symmetry
/// (which cannot happen if `basis` spans the correct intertwiner space,
/// but is checked rather than assumed). An empty combination returns the
/// pair unchanged.
pub fn apply_move(pair: &SymmetricPair, basis: &[F2Matrix], combo: &F2Vector) -> Option<SymmetricPair> {
    assert_eq!(combo.len(), basis.len(), "combination length must match basis");
    if combo.is_zero() {
        return Some(pair.clone());
    }
    let b = pair.product();
    let mut s1 = pair.s1.clone();
    for i in combo.iter_ones() {
        s1 = s1.add(&basis[i]);
    }
    let s1_inv = s1.invert().ok()?;
    let s2 = match pair.order {
        ProductOrder::S2S1 => b.mul(&s1_inv),
        ProductOrder::S1S2 => s1_inv.mul(&b),
    };
    if !s1.is_symmetric() || !s2.is_symmetric() {
        return None;
    }
    Some(SymmetricPair { s1, s2, order: pair.order })
}

/// One randomized neighborhood move for the discrete optimizer: always
/// toggles `basis[move_index]` and, with probability 1/4 each, any other
/// basis element. Returns `None` when the move lands on a singular `s1`.
pub fn perturb_factorization<R: Rng + ?Sized>(
    pair: &SymmetricPair,
    basis: &[F2Matrix],
    move_index: usize,
    rng: &mut R,
) -> Option<SymmetricPair> {
    assert!(move_index < basis.len(), "move index out of range");
    let mut combo = F2Vector::zero(basis.len());
    combo.set(move_index, true);
    for i in 0..basis.len() {
        if i != move_index && rng.gen_bool(0.25) {
            combo.set(i, true);
        }
    }
    apply_move(pair, basis, &combo)
}
