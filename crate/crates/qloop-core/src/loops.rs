//! Mutation sequences, mutation loops, normal forms, and pentagon moves.
//!
//! A step is either a mutation at a vertex or a vertex relabeling. Any step
//! list is equivalent, under the rewriting rules
//!
//! ```text
//! (.., s1, s2, ..) ~ (.., s2 . s1, ..)
//! (.., mu_i, s, ..) ~ (.., s, mu_{s(i)}, ..)
//! (.., id, ..)      ~ (.., ..)
//! ```
//!
//! to a normal form: a plain mutation list followed by one boundary
//! permutation `phi`. A step list is a loop for a quiver `q0` when applying
//! every step lands back on `q0` as a labeled matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::quiver::{Permutation, Quiver, QuiverError};

/// One step of a generalized mutation sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Mutate(usize),
    Relabel(Permutation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopError {
    Quiver(QuiverError),
    /// The steps do not return to the initial quiver; carries the final matrix.
    NotALoop { final_matrix: Vec<Vec<i64>> },
    PositionOutOfRange { pos: usize, len: usize },
    /// Pentagon moves need a single arrow x -> y; reports what was found.
    PentagonArrow { x: usize, y: usize, bxy: i64 },
    /// Contraction needs the mutation pattern (y, x, y) at the position.
    PentagonPattern { pos: usize },
}

impl fmt::Display for LoopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopError::Quiver(e) => write!(f, "{e}"),
            LoopError::NotALoop { final_matrix } => {
                let rows: Vec<String> = final_matrix
                    .iter()
                    .map(|r| {
                        let cells: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                write!(
                    f,
                    "steps do not return to the initial quiver; final matrix {}",
                    rows.join(" ")
                )
            }
            LoopError::PositionOutOfRange { pos, len } => {
                write!(f, "position {pos} out of range for {len} mutations")
            }
            LoopError::PentagonArrow { x, y, bxy } => {
                write!(f, "pentagon move needs a single arrow {x}->{y}, found b[{x}][{y}] = {bxy}")
            }
            LoopError::PentagonPattern { pos } => {
                write!(f, "mutations at {pos}..{} do not match the (y, x, y) pattern", pos + 2)
            }
        }
    }
}

impl From<QuiverError> for LoopError {
    fn from(e: QuiverError) -> Self {
        LoopError::Quiver(e)
    }
}

/// Normal form of a step list: mutations followed by one boundary permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub mutations: Vec<usize>,
    pub phi: Permutation,
}

impl NormalForm {
    /// The normal form as a plain step list (`phi` omitted when trivial).
    pub fn as_steps(&self) -> Vec<Step> {
        let mut steps: Vec<Step> = self.mutations.iter().map(|&v| Step::Mutate(v)).collect();
        if !self.phi.is_identity() {
            steps.push(Step::Relabel(self.phi.clone()));
        }
        steps
    }
}

/// Apply one step to a quiver.
pub fn apply_step(q: &Quiver, step: &Step) -> Result<Quiver, QuiverError> {
    match step {
        Step::Mutate(v) => q.mutate(*v),
        Step::Relabel(sigma) => q.relabel(sigma),
    }
}

/// Left-to-right composition of steps.
pub fn apply_steps(q: &Quiver, steps: &[Step]) -> Result<Quiver, QuiverError> {
    let mut cur = q.clone();
    for step in steps {
        cur = apply_step(&cur, step)?;
    }
    Ok(cur)
}

/// Rewrite a step list to its normal form. All relabelings are commuted to
/// the end (each mutation index is pulled back through the permutations seen
/// so far), so the result acts identically on every quiver of size `n`.
pub fn normalize(n: usize, steps: &[Step]) -> Result<NormalForm, QuiverError> {
    let mut rho = Permutation::identity(n);
    let mut mutations = Vec::new();
    for step in steps {
        match step {
            Step::Mutate(v) => {
                if *v < 1 || *v > n {
                    return Err(QuiverError::VertexOutOfRange { vertex: *v, n });
                }
                mutations.push(rho.inverse().apply(*v));
            }
            Step::Relabel(sigma) => {
                if sigma.n() != n {
                    return Err(QuiverError::SizeMismatch {
                        expected: n,
                        got: sigma.n(),
                    });
                }
                rho = sigma.compose(&rho);
            }
        }
    }
    Ok(NormalForm {
        mutations,
        phi: rho,
    })
}

/// A validated mutation loop: an initial quiver and a step list whose
/// composition returns to it, with the normal form cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationLoop {
    q0: Quiver,
    steps: Vec<Step>,
    normal: NormalForm,
}

impl MutationLoop {
    /// Validate a step list as a loop for `q0`: the final quiver must equal
    /// `q0` as a labeled matrix.
    pub fn new(q0: Quiver, steps: Vec<Step>) -> Result<Self, LoopError> {
        let final_q = apply_steps(&q0, &steps)?;
        if final_q != q0 {
            return Err(LoopError::NotALoop {
                final_matrix: final_q.matrix(),
            });
        }
        let normal = normalize(q0.n(), &steps)?;
        debug_assert_eq!(apply_steps(&q0, &normal.as_steps()).as_ref(), Ok(&q0));
        Ok(MutationLoop { q0, steps, normal })
    }

    /// Convenience constructor from a mutation list and a boundary
    /// permutation: the step list is the mutations followed by `phi`.
    pub fn from_normal(
        q0: Quiver,
        mutations: Vec<usize>,
        phi: Permutation,
    ) -> Result<Self, LoopError> {
        let mut steps: Vec<Step> = mutations.into_iter().map(Step::Mutate).collect();
        if !phi.is_identity() {
            steps.push(Step::Relabel(phi));
        }
        Self::new(q0, steps)
    }

    pub fn initial_quiver(&self) -> &Quiver {
        &self.q0
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn normal_form(&self) -> &NormalForm {
        &self.normal
    }

    /// Number of mutations in the loop.
    pub fn mutation_count(&self) -> usize {
        self.normal.mutations.len()
    }

    /// Quiver state just before normalized mutation `pos` (0-based).
    pub fn quiver_before(&self, pos: usize) -> Result<Quiver, LoopError> {
        let m = &self.normal.mutations;
        if pos > m.len() {
            return Err(LoopError::PositionOutOfRange {
                pos,
                len: m.len(),
            });
        }
        let mut cur = self.q0.clone();
        for &v in &m[..pos] {
            cur = cur.mutate(v)?;
        }
        Ok(cur)
    }

    /// Pentagon move, expanding direction: replace the adjacent mutations
    /// `(mu_x, mu_y)` at `pos`, `pos+1` of the normal form by
    /// `(mu_y, mu_x, mu_y, (x y))`. Requires a single arrow `x -> y` in the
    /// quiver reached before `pos`. Positions index the normalized mutation
    /// list; the result is returned in normal form.
    pub fn pentagon_expand(&self, pos: usize) -> Result<MutationLoop, LoopError> {
        let m = &self.normal.mutations;
        if pos + 1 >= m.len() {
            return Err(LoopError::PositionOutOfRange {
                pos,
                len: m.len(),
            });
        }
        let (x, y) = (m[pos], m[pos + 1]);
        let q_in = self.quiver_before(pos)?;
        let bxy = q_in.entry(x, y);
        if bxy != 1 {
            return Err(LoopError::PentagonArrow { x, y, bxy });
        }
        let swap = Permutation::transposition(self.q0.n(), x, y)?;
        let mut steps: Vec<Step> = m[..pos].iter().map(|&v| Step::Mutate(v)).collect();
        steps.extend([Step::Mutate(y), Step::Mutate(x), Step::Mutate(y)]);
        steps.push(Step::Relabel(swap));
        steps.extend(m[pos + 2..].iter().map(|&v| Step::Mutate(v)));
        if !self.normal.phi.is_identity() {
            steps.push(Step::Relabel(self.normal.phi.clone()));
        }
        // renormalize so positions keep indexing a plain mutation list
        let nf = normalize(self.q0.n(), &steps)?;
        MutationLoop::from_normal(self.q0.clone(), nf.mutations, nf.phi)
    }

    /// Pentagon move, contracting direction: inverse of [`pentagon_expand`]
    /// at the same position. Requires the normalized mutations at
    /// `pos..=pos+2` to look like `(y, x, y)` with a single arrow `x -> y`
    /// in the quiver reached before `pos` (the trailing transposition of the
    /// pattern is absorbed in the boundary permutation of a normal form).
    ///
    /// [`pentagon_expand`]: MutationLoop::pentagon_expand
    pub fn pentagon_contract(&self, pos: usize) -> Result<MutationLoop, LoopError> {
        let m = &self.normal.mutations;
        if pos + 2 >= m.len() {
            return Err(LoopError::PositionOutOfRange {
                pos,
                len: m.len(),
            });
        }
        let (y, x) = (m[pos], m[pos + 1]);
        if m[pos + 2] != y || x == y {
            return Err(LoopError::PentagonPattern { pos });
        }
        let q_in = self.quiver_before(pos)?;
        let bxy = q_in.entry(x, y);
        if bxy != 1 {
            return Err(LoopError::PentagonArrow { x, y, bxy });
        }
        let swap = Permutation::transposition(self.q0.n(), x, y)?;
        let mut mutations: Vec<usize> = m[..pos].to_vec();
        mutations.extend([x, y]);
        mutations.extend(m[pos + 3..].iter().map(|&v| swap.apply(v)));
        let phi = self.normal.phi.compose(&swap);
        MutationLoop::from_normal(self.q0.clone(), mutations, phi)
    }
}
