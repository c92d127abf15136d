//! The s/k-variable linear system of a mutation loop and its exponent form.
//!
//! Every vertex starts with one s-variable slot; each mutation at `v` adds a
//! new slot for `v` and one k-variable
//!
//! ```text
//! k_t = s_v + s'_v - sum over arrows a -> v of s_a
//! ```
//!
//! with arrow multiplicities read off the quiver state at that step. The
//! orientation-reversed companion uses outgoing arrows instead. The boundary
//! identifies each final slot with the initial slot at the same label (the
//! trailing relabel steps have already permuted the slot map), merging via
//! union-find. When the resulting `k = A s` is invertible over Q, the loop
//! weight exponent becomes a quadratic form `F(k) = k^T G k`, with grading
//! denominator `Delta` = least positive integer clearing `F` on all of `Z^T`.
//!
//! Everything here is exact rational arithmetic; no floating point.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::loops::{MutationLoop, Step};
use crate::ratmat::RatMat;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarSysError {
    /// The k = A s relation is not invertible over Q.
    Degenerate,
    NotSymmetric,
    /// Copositivity fallback is exponential in T; refuse large systems.
    TooLargeForCopositivity { t: usize },
    DeltaTooLarge,
}

impl fmt::Display for VarSysError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarSysError::Degenerate => write!(f, "loop is degenerate: k = A s is not invertible"),
            VarSysError::NotSymmetric => write!(f, "gram matrix is not symmetric"),
            VarSysError::TooLargeForCopositivity { t } => {
                write!(f, "indefinite form with {t} variables exceeds the copositivity limit (20)")
            }
            VarSysError::DeltaTooLarge => write!(f, "grading denominator exceeds u64"),
        }
    }
}

/// The linear relation `k = A s` (and `k_vee = B s`) of a loop, rows in
/// mutation order, columns indexed by the independent s-variable slots in
/// creation order.
#[derive(Clone, Debug)]
pub struct VariableSystem {
    a: RatMat,
    kvee: RatMat,
    inverse: Option<RatMat>,
}

impl VariableSystem {
    /// Assemble from explicit matrices (used for synthetic systems in tests;
    /// loops go through [`build_system`]).
    pub fn from_matrices(a: RatMat, kvee: RatMat) -> Self {
        let inverse = if a.rows() == a.cols() {
            a.inverse()
        } else {
            None
        };
        VariableSystem { a, kvee, inverse }
    }

    /// Number of k-variables (mutations).
    pub fn mutations(&self) -> usize {
        self.a.rows()
    }

    /// Number of independent s-variables after boundary identification.
    pub fn s_dim(&self) -> usize {
        self.a.cols()
    }

    pub fn a_matrix(&self) -> &RatMat {
        &self.a
    }

    pub fn kvee_matrix(&self) -> &RatMat {
        &self.kvee
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.inverse.is_some()
    }

    /// `A^{-1}` with `s = A^{-1} k`, when it exists.
    pub fn inverse(&self) -> Option<&RatMat> {
        self.inverse.as_ref()
    }
}

/// Minimal union-find with smallest-id representatives.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller id as representative so initial slots win
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Build the s/k-variable system of a loop: one row per mutation, with the
/// incidence read off the quiver state before that mutation; relabel steps
/// permute the vertex-to-slot map and create no k-variables.
pub fn build_system(lp: &MutationLoop) -> VariableSystem {
    let q0 = lp.initial_quiver();
    let n = q0.n();
    let mut cur = q0.clone();
    // slot[v-1] = current s-variable slot of vertex v; slots 0..n-1 initial
    let mut slot: Vec<usize> = (0..n).collect();
    let mut next_slot = n;
    // raw rows as slot -> coefficient maps
    let mut rows_a: Vec<BTreeMap<usize, i64>> = Vec::new();
    let mut rows_b: Vec<BTreeMap<usize, i64>> = Vec::new();

    for step in lp.steps() {
        match step {
            Step::Mutate(v) => {
                let v = *v;
                let fresh = next_slot;
                next_slot += 1;
                let mut row_a = BTreeMap::new();
                let mut row_b = BTreeMap::new();
                *row_a.entry(slot[v - 1]).or_insert(0) += 1;
                *row_a.entry(fresh).or_insert(0) += 1;
                *row_b.entry(slot[v - 1]).or_insert(0) += 1;
                *row_b.entry(fresh).or_insert(0) += 1;
                for u in 1..=n {
                    let into = cur.entry(u, v);
                    if into > 0 {
                        *row_a.entry(slot[u - 1]).or_insert(0) -= into;
                    }
                    let out = cur.entry(v, u);
                    if out > 0 {
                        *row_b.entry(slot[u - 1]).or_insert(0) -= out;
                    }
                }
                rows_a.push(row_a);
                rows_b.push(row_b);
                slot[v - 1] = fresh;
                cur = cur.mutate(v).expect("validated loop step");
            }
            Step::Relabel(sigma) => {
                cur = cur.relabel(sigma).expect("validated loop step");
                let mut moved = slot.clone();
                for v in 1..=n {
                    moved[sigma.apply(v) - 1] = slot[v - 1];
                }
                slot = moved;
            }
        }
    }

    // boundary condition: the final quiver equals q0 as a labeled matrix,
    // so the final slot at each vertex is identified with its initial slot
    let mut uf = UnionFind::new(next_slot);
    for v in 1..=n {
        uf.union(slot[v - 1], v - 1);
    }
    let mut reps: Vec<usize> = (0..next_slot).map(|s| uf.find(s)).collect();
    let mut cols: Vec<usize> = reps.clone();
    cols.sort_unstable();
    cols.dedup();
    let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    for r in &mut reps {
        *r = col_of[r];
    }

    let t = rows_a.len();
    let mut a = RatMat::zeros(t, cols.len());
    let mut b = RatMat::zeros(t, cols.len());
    for (i, (row_a, row_b)) in rows_a.iter().zip(&rows_b).enumerate() {
        for (&s, &c) in row_a {
            a[(i, reps[s])] += Rat::from_integer(c.into());
        }
        for (&s, &c) in row_b {
            b[(i, reps[s])] += Rat::from_integer(c.into());
        }
    }
    VariableSystem::from_matrices(a, b)
}

/// Positivity certificate for an exponent form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    /// All LDL^T pivots positive: F > 0 away from the origin.
    PositiveDefinite,
    /// F(k) >= bound * (sum k)^2 on the nonnegative orthant, bound > 0.
    CopositiveCertified { bound: Rat },
    Failed,
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Positivity::Failed)
    }
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Positivity::PositiveDefinite => write!(f, "positive-definite"),
            Positivity::CopositiveCertified { .. } => write!(f, "copositive-certified"),
            Positivity::Failed => write!(f, "failed"),
        }
    }
}

/// The quadratic exponent form of a loop: `F(k) = k^T G k` with symmetric
/// rational `G`, grading denominator `delta`, and a positivity certificate.
#[derive(Clone, Debug)]
pub struct ExponentForm {
    gram: RatMat,
    delta: u64,
    positivity: Positivity,
}

impl ExponentForm {
    /// Wrap a symmetric Gram matrix, computing `delta` and the certificate.
    pub fn from_gram(gram: RatMat) -> Result<Self, VarSysError> {
        if !gram.is_symmetric() {
            return Err(VarSysError::NotSymmetric);
        }
        let delta = delta_of(&gram)?;
        let positivity = certify_positive(&gram)?;
        Ok(ExponentForm {
            gram,
            delta,
            positivity,
        })
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn vars(&self) -> usize {
        self.gram.rows()
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn positivity(&self) -> &Positivity {
        &self.positivity
    }

    /// Evaluate `F(k)` at a nonnegative integer point.
    pub fn eval(&self, k: &[u64]) -> Rat {
        self.gram.quad_eval(k)
    }
}

/// Least positive integer `D` with `D * F(k)` integral for all integer `k`:
/// the lcm of the denominators of the diagonal entries and of the doubled
/// off-diagonal entries.
fn delta_of(gram: &RatMat) -> Result<u64, VarSysError> {
    let two = BigInt::from(2);
    let mut delta = BigInt::one();
    for i in 0..gram.rows() {
        delta = delta.lcm(gram[(i, i)].denom());
        for j in 0..i {
            let doubled_denom = gram[(i, j)].denom() / gram[(i, j)].denom().gcd(&two);
            delta = delta.lcm(&doubled_denom);
        }
    }
    u64::try_from(delta).map_err(|_| VarSysError::DeltaTooLarge)
}

/// Exponent form of a nondegenerate loop. The weight exponent is first read
/// off mutation by mutation as a quadratic form `H(s) = 1/2 sum_t (A_t s)(B_t s)`
/// in the s-variables, then pushed to k-space via `s = A^{-1} k`.
pub fn exponent_form(lp: &MutationLoop) -> Result<ExponentForm, VarSysError> {
    let sys = build_system(lp);
    exponent_form_of_system(&sys)
}

/// As [`exponent_form`], starting from an already-built system.
pub fn exponent_form_of_system(sys: &VariableSystem) -> Result<ExponentForm, VarSysError> {
    let a_inv = sys.inverse().ok_or(VarSysError::Degenerate)?;
    // H(s) = s^T M s with M = sym(A^T B) / 2
    let m = sys
        .a_matrix()
        .transpose()
        .mul(sys.kvee_matrix())
        .symmetrize()
        .scale(&Rat::new(BigInt::one(), BigInt::from(2)));
    let gram = a_inv.transpose().mul(&m).mul(a_inv).symmetrize();
    ExponentForm::from_gram(gram)
}

/// Three-stage positivity certificate: exact LDL^T first; otherwise minimize
/// `F` over the faces of the standard simplex by KKT solves on every
/// coordinate support and certify `F(k) >= m (sum k)^2` when the minimum `m`
/// is positive.
pub fn certify_positive(gram: &RatMat) -> Result<Positivity, VarSysError> {
    if !gram.is_symmetric() {
        return Err(VarSysError::NotSymmetric);
    }
    if gram.is_positive_definite() {
        return Ok(Positivity::PositiveDefinite);
    }
    let t = gram.rows();
    if t > 20 {
        return Err(VarSysError::TooLargeForCopositivity { t });
    }
    match simplex_min(gram) {
        Some(m) if m.is_positive() => Ok(Positivity::CopositiveCertified { bound: m }),
        _ => Ok(Positivity::Failed),
    }
}

/// Exact minimum of `k^T G k` over the standard simplex `{k >= 0, sum k = 1}`,
/// by stationarity solves on all `2^T - 1` coordinate supports. Supports
/// whose KKT system is singular, or whose solution leaves the simplex, are
/// covered by their sub-supports and skipped.
pub fn simplex_min(gram: &RatMat) -> Option<Rat> {
    let t = gram.rows();
    if t == 0 {
        return None;
    }
    let mut best: Option<Rat> = None;
    for mask in 1u64..(1u64 << t) {
        let support: Vec<usize> = (0..t).filter(|i| mask & (1 << i) != 0).collect();
        let m = support.len();
        let gs = gram.principal_submatrix(&support);
        // [ 2 G_S  -1 ] [x     ]   [0]
        // [ 1^T     0 ] [lambda] = [1]
        let mut kkt = RatMat::zeros(m + 1, m + 1);
        for i in 0..m {
            for j in 0..m {
                kkt[(i, j)] = &gs[(i, j)] * Rat::from_integer(2.into());
            }
            kkt[(i, m)] = -Rat::one();
            kkt[(m, i)] = Rat::one();
        }
        let mut rhs = RatMat::zeros(m + 1, 1);
        rhs[(m, 0)] = Rat::one();
        let Some(sol) = kkt.solve(&rhs) else {
            continue;
        };
        if (0..m).any(|i| sol[(i, 0)].is_negative()) {
            continue;
        }
        let mut value = Rat::zero();
        for i in 0..m {
            for j in 0..m {
                value += &gs[(i, j)] * &sol[(i, 0)] * &sol[(j, 0)];
            }
        }
        best = Some(match best {
            Some(b) if b <= value => b,
            _ => value,
        });
    }
    best
}
