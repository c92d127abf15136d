//! Alternating ADE quivers, their canonical mutation loops, and closed-form
//! partition series.
//!
//! Vertex numbering: A-type is the path `1..n`; D-type is the path `1..n-2`
//! with the fork vertices `n-1`, `n` attached to `n-2`; E-type is the path
//! `1..n-1` with vertex `n` attached to vertex 3. The alternating orientation
//! makes vertex 1 a source.
//!
//! For the loop that mutates all sinks and then all sources, the partition
//! series collapses to the fermionic sum `sum_k q^{C^{-1}[k]} / (q)_k` over
//! the inverse Cartan matrix. For square products `Q square Q'` mutated one
//! sign class at a time, the Gram matrix is `(C_Q (x) C_{Q'}^{-1}) / 2`, with
//! the factors swapping roles when the minus class goes first.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Signed;

use crate::lattice::{partition_series, sum_loop, SumOptions};
use crate::loops::MutationLoop;
use crate::quiver::{sign_classes, Permutation, Quiver, VertexSign};
use crate::ratmat::RatMat;
use crate::series::{pochhammer, QSeries};
use crate::varsys::ExponentForm;
use crate::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

impl fmt::Display for DynkinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinFamily::A => write!(f, "A"),
            DynkinFamily::D => write!(f, "D"),
            DynkinFamily::E => write!(f, "E"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DynkinError {
    InvalidRank { family: DynkinFamily, rank: usize },
    Unparseable(String),
    /// Square products need factors with at least one arrow.
    SquareWithA1,
}

impl fmt::Display for DynkinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinError::InvalidRank { family, rank } => {
                write!(f, "invalid rank {rank} for type {family}")
            }
            DynkinError::Unparseable(s) => write!(f, "cannot parse Dynkin type from {s:?}"),
            DynkinError::SquareWithA1 => {
                write!(f, "square products need factors of rank >= 2 (A1 has no arrows)")
            }
        }
    }
}

/// A simply-laced Dynkin type: A (rank >= 1), D (rank >= 4), E (rank 6..8).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DynkinType {
    family: DynkinFamily,
    rank: usize,
}

impl DynkinType {
    pub fn new(family: DynkinFamily, rank: usize) -> Result<Self, DynkinError> {
        let ok = match family {
            DynkinFamily::A => rank >= 1,
            DynkinFamily::D => rank >= 4,
            DynkinFamily::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(DynkinType { family, rank })
        } else {
            Err(DynkinError::InvalidRank { family, rank })
        }
    }

    pub fn family(&self) -> DynkinFamily {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Edges of the Dynkin diagram, 1-based.
    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            DynkinFamily::A => (1..n).map(|i| (i, i + 1)).collect(),
            DynkinFamily::D => {
                let mut e: Vec<(usize, usize)> = (1..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n - 1));
                e.push((n - 2, n));
                e
            }
            DynkinFamily::E => {
                let mut e: Vec<(usize, usize)> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((3, n));
                e
            }
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = DynkinError;

    /// Accepts strings like "A3", "d5", "E6" (case-insensitive).
    fn from_str(s: &str) -> Result<Self, DynkinError> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => DynkinFamily::A,
            Some('D') => DynkinFamily::D,
            Some('E') => DynkinFamily::E,
            _ => return Err(DynkinError::Unparseable(s.into())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| DynkinError::Unparseable(s.into()))?;
        DynkinType::new(family, rank)
    }
}

/// Cartan matrix and its exact inverse.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub cartan: RatMat,
    pub inverse: RatMat,
}

pub fn cartan_data(t: DynkinType) -> CartanData {
    let n = t.rank();
    let mut c = RatMat::zeros(n, n);
    for i in 0..n {
        c[(i, i)] = Rat::from_integer(2.into());
    }
    for (a, b) in t.edges() {
        c[(a - 1, b - 1)] = Rat::from_integer((-1).into());
        c[(b - 1, a - 1)] = Rat::from_integer((-1).into());
    }
    let inverse = c.inverse().expect("Cartan matrices are invertible");
    CartanData { cartan: c, inverse }
}

/// The alternating orientation of the Dynkin diagram with vertex 1 a source,
/// together with the vertex signs.
pub fn alternating_dynkin(t: DynkinType) -> (Quiver, Vec<VertexSign>) {
    let n = t.rank();
    let edges = t.edges();
    // bipartition by graph distance from vertex 1 (the diagram is a tree)
    let mut parity = vec![usize::MAX; n];
    parity[0] = 0;
    let mut frontier = vec![1usize];
    while let Some(v) = frontier.pop() {
        for &(a, b) in &edges {
            let (u, w) = (a, b);
            for (x, y) in [(u, w), (w, u)] {
                if x == v && parity[y - 1] == usize::MAX {
                    parity[y - 1] = parity[v - 1] ^ 1;
                    frontier.push(y);
                }
            }
        }
    }
    let arrows: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| if parity[a - 1] == 0 { (a, b) } else { (b, a) })
        .collect();
    let q = Quiver::from_arrows(n, &arrows).expect("tree orientation has no 2-cycles");
    let signs = q.signs().expect("bipartite orientation alternates");
    (q, signs)
}

/// The canonical loop of an alternating Dynkin quiver: mutate all sinks,
/// then all sources (ascending within each), trivial boundary.
pub fn dynkin_loop(t: DynkinType) -> MutationLoop {
    let (q, _) = alternating_dynkin(t);
    let mut mutations = q.sinks();
    mutations.extend(q.sources());
    MutationLoop::from_normal(q.clone(), mutations, Permutation::identity(q.n()))
        .expect("sinks-then-sources returns to the initial quiver")
}

/// The exponent form of the closed-form series of [`dynkin_loop`]: Gram
/// matrix the inverse Cartan matrix.
pub fn dynkin_closed_form_exponent(t: DynkinType) -> ExponentForm {
    ExponentForm::from_gram(cartan_data(t).inverse)
        .expect("inverse Cartan matrices are positive definite")
}

/// Closed-form partition series of [`dynkin_loop`]: the fermionic sum with
/// Gram matrix the inverse Cartan matrix, `sum_k q^{C^{-1}[k]} / (q)_k`.
pub fn dynkin_closed_form(t: DynkinType, cutoff: &Rat) -> QSeries {
    partition_series(&dynkin_closed_form_exponent(t), cutoff, &SumOptions::default())
        .expect("positive definite sum cannot fail")
}

/// Which sign class of the square product is mutated first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareOrder {
    PlusFirst,
    MinusFirst,
}

impl fmt::Display for SquareOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareOrder::PlusFirst => write!(f, "plus-first"),
            SquareOrder::MinusFirst => write!(f, "minus-first"),
        }
    }
}

fn square_factors(t: DynkinType, tp: DynkinType) -> Result<(Quiver, Quiver), DynkinError> {
    if t.rank() < 2 || tp.rank() < 2 {
        return Err(DynkinError::SquareWithA1);
    }
    Ok((alternating_dynkin(t).0, alternating_dynkin(tp).0))
}

/// The canonical loop of `Q square Q'`: mutate one whole sign class, then
/// the other (ascending within each), trivial boundary.
pub fn square_loop(
    t: DynkinType,
    tp: DynkinType,
    order: SquareOrder,
) -> Result<MutationLoop, DynkinError> {
    let (q, qp) = square_factors(t, tp)?;
    let sq = q.square_product(&qp).expect("alternating factors");
    let (plus, minus) = sign_classes(&q, &qp).expect("alternating factors");
    let mutations: Vec<usize> = match order {
        SquareOrder::PlusFirst => plus.iter().chain(&minus).copied().collect(),
        SquareOrder::MinusFirst => minus.iter().chain(&plus).copied().collect(),
    };
    Ok(
        MutationLoop::from_normal(sq.clone(), mutations, Permutation::identity(sq.n()))
            .expect("mutating both sign classes returns to the square product"),
    )
}

/// The exponent form of the closed-form series of [`square_loop`]: Gram
/// matrix `(C_Q (x) C_{Q'}^{-1}) / 2` for plus-first, with the tensor
/// factors exchanged for minus-first.
pub fn square_closed_form_exponent(
    t: DynkinType,
    tp: DynkinType,
    order: SquareOrder,
) -> Result<ExponentForm, DynkinError> {
    square_factors(t, tp)?;
    let cd = cartan_data(t);
    let cdp = cartan_data(tp);
    let half = Rat::new(1.into(), 2.into());
    let gram = match order {
        SquareOrder::PlusFirst => cd.cartan.kronecker(&cdp.inverse).scale(&half),
        SquareOrder::MinusFirst => cd.inverse.kronecker(&cdp.cartan).scale(&half),
    };
    Ok(ExponentForm::from_gram(gram).expect("Kronecker product of PD matrices is PD"))
}

/// Closed-form partition series of [`square_loop`].
pub fn square_closed_form(
    t: DynkinType,
    tp: DynkinType,
    order: SquareOrder,
    cutoff: &Rat,
) -> Result<QSeries, DynkinError> {
    let form = square_closed_form_exponent(t, tp, order)?;
    Ok(partition_series(&form, cutoff, &SumOptions::default())
        .expect("positive definite sum cannot fail"))
}

/// The theta-like side of the A3 identity: `sum_{n in Z} q^{3 n^2 / 4}`,
/// truncated (delta = 4).
pub fn theta_a3(cutoff: &Rat) -> QSeries {
    let mut theta = QSeries::zero(4, cutoff.clone());
    let Some(cap) = theta.cap() else {
        return theta;
    };
    theta.add_term(0, Int::from(1));
    let mut n = 1u64;
    loop {
        let e = 3 * n * n;
        if e > cap {
            return theta;
        }
        theta.add_term(e, Int::from(2));
        n += 1;
    }
}

/// Check the A3 identity `Z * (q)_M = sum_{n in Z} q^{3 n^2 / 4}` as
/// truncated series, with `M >= cutoff` so the finite Pochhammer product
/// agrees with the infinite one below the cutoff.
pub fn theta_check_a3(cutoff: &Rat) -> bool {
    let a3 = DynkinType::new(DynkinFamily::A, 3).expect("A3 is valid");
    let z = sum_loop(&dynkin_loop(a3), cutoff).expect("the A3 loop is positive");
    let m = if cutoff.is_negative() {
        0
    } else {
        u64::try_from(cutoff.ceil().to_integer()).expect("cutoff too large")
    };
    let lhs = z.mul(&pochhammer(m, 4, cutoff));
    lhs.agrees_with(&theta_a3(cutoff))
}
