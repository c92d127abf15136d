//! Quivers as skew-symmetric integer exchange matrices.
//!
//! A quiver without loops or 2-cycles on vertices `1..=n` is stored as the
//! matrix `b` with `b[i][j] = #(arrows i->j) - #(arrows j->i)`; parallel
//! arrows show up as entries of absolute value > 1, and the representation
//! forbids loops and 2-cycles by construction. Vertex indices are 1-based
//! throughout the public API, matching the usual pictures.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Error type for quiver construction and operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuiverError {
    VertexOutOfRange { vertex: usize, n: usize },
    NotSkewSymmetric { i: usize, j: usize },
    SizeMismatch { expected: usize, got: usize },
    InvalidPermutation,
    NotAlternating { vertex: usize },
    OrientedCycle,
    SelfLoop { vertex: usize },
    TwoCycle { i: usize, j: usize },
}

impl fmt::Display for QuiverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range 1..={n}")
            }
            QuiverError::NotSkewSymmetric { i, j } => {
                write!(f, "matrix is not skew-symmetric at ({i},{j})")
            }
            QuiverError::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: expected {expected}, got {got}")
            }
            QuiverError::InvalidPermutation => write!(f, "not a permutation of 1..=n"),
            QuiverError::NotAlternating { vertex } => {
                write!(f, "vertex {vertex} is neither a source nor a sink")
            }
            QuiverError::OrientedCycle => write!(f, "quiver has an oriented cycle"),
            QuiverError::SelfLoop { vertex } => write!(f, "arrow {vertex}->{vertex} is a loop"),
            QuiverError::TwoCycle { i, j } => {
                write!(f, "arrows {i}->{j} and {j}->{i} form a 2-cycle")
            }
        }
    }
}

/// Sign of a vertex in an alternating quiver: sources carry +1, sinks -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexSign {
    Source,
    Sink,
}

impl VertexSign {
    pub fn value(self) -> i64 {
        match self {
            VertexSign::Source => 1,
            VertexSign::Sink => -1,
        }
    }
}

/// A permutation of `{1..n}` in one-line notation: `image[i-1] = sigma(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    /// Build from one-line notation; the image must be exactly `{1..n}`.
    pub fn from_one_line(image: Vec<usize>) -> Result<Self, QuiverError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v < 1 || v > n || seen[v - 1] {
                return Err(QuiverError::InvalidPermutation);
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { image })
    }

    /// The transposition (x y) on `{1..n}`.
    pub fn transposition(n: usize, x: usize, y: usize) -> Result<Self, QuiverError> {
        let mut image: Vec<usize> = (1..=n).collect();
        if x < 1 || x > n {
            return Err(QuiverError::VertexOutOfRange { vertex: x, n });
        }
        if y < 1 || y > n {
            return Err(QuiverError::VertexOutOfRange { vertex: y, n });
        }
        image.swap(x - 1, y - 1);
        Ok(Permutation { image })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v - 1] = i + 1;
        }
        Permutation { image }
    }

    /// Composition `self . other`, i.e. `other` first: `(self.other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "permutation size mismatch");
        Permutation {
            image: (1..=other.n()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A quiver without loops or 2-cycles, as its exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    b: Vec<i64>, // row-major n*n, skew-symmetric
}

impl Quiver {
    /// Build from a full matrix, checking skew-symmetry (which also forces a
    /// zero diagonal).
    pub fn from_matrix(rows: Vec<Vec<i64>>) -> Result<Self, QuiverError> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(QuiverError::SizeMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for j in 0..n {
                if rows[i][j] != -rows[j][i] {
                    return Err(QuiverError::NotSkewSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Quiver {
            n,
            b: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from an arrow list `(i, j)` meaning `i -> j`. Loops are
    /// rejected, and so is a pair of opposite arrows: the matrix encoding
    /// cannot represent a 2-cycle, and mutation is undefined on them.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize)]) -> Result<Self, QuiverError> {
        let mut b = vec![0i64; n * n];
        let mut fwd = vec![false; n * n];
        for &(i, j) in arrows {
            if i < 1 || i > n {
                return Err(QuiverError::VertexOutOfRange { vertex: i, n });
            }
            if j < 1 || j > n {
                return Err(QuiverError::VertexOutOfRange { vertex: j, n });
            }
            if i == j {
                return Err(QuiverError::SelfLoop { vertex: i });
            }
            if fwd[(j - 1) * n + (i - 1)] {
                return Err(QuiverError::TwoCycle { i, j });
            }
            fwd[(i - 1) * n + (j - 1)] = true;
            b[(i - 1) * n + (j - 1)] += 1;
            b[(j - 1) * n + (i - 1)] -= 1;
        }
        Ok(Quiver { n, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix entry `b[i][j]`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.b[(i - 1) * self.n + (j - 1)]
    }

    /// Full matrix as rows (for serialization and error reports).
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.b[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Arrow list with multiplicities expanded, in row-major order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let m = self.entry(i, j);
                for _ in 0..m.max(0) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn check_vertex(&self, k: usize) -> Result<(), QuiverError> {
        if k < 1 || k > self.n {
            Err(QuiverError::VertexOutOfRange { vertex: k, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Matrix mutation at vertex `k`.
    pub fn mutate(&self, k: usize) -> Result<Quiver, QuiverError> {
        self.check_vertex(k)?;
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 1..=n {
            for j in 1..=n {
                let bij = self.entry(i, j);
                out[(i - 1) * n + (j - 1)] = if i == k || j == k {
                    -bij
                } else {
                    let bik = self.entry(i, k);
                    let bkj = self.entry(k, j);
                    let path = bik
                        .checked_mul(bkj)
                        .expect("exchange matrix entry overflow");
                    bij.checked_add(bik.signum() * path.max(0))
                        .expect("exchange matrix entry overflow")
                };
            }
        }
        Ok(Quiver { n, b: out })
    }

    /// Relabel vertices: `b'[sigma(i)][sigma(j)] = b[i][j]`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Quiver, QuiverError> {
        if sigma.n() != self.n {
            return Err(QuiverError::SizeMismatch {
                expected: self.n,
                got: sigma.n(),
            });
        }
        let n = self.n;
        let mut b = vec![0i64; n * n];
        for i in 1..=n {
            for j in 1..=n {
                b[(sigma.apply(i) - 1) * n + (sigma.apply(j) - 1)] = self.entry(i, j);
            }
        }
        Ok(Quiver { n, b })
    }

    /// The opposite quiver (all arrows reversed): `b' = -b`.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            n: self.n,
            b: self.b.iter().map(|x| -x).collect(),
        }
    }

    /// Sign of one vertex, if it is a source or a sink. Isolated vertices
    /// count as sources.
    pub fn sign_of(&self, v: usize) -> Result<Option<VertexSign>, QuiverError> {
        self.check_vertex(v)?;
        let has_in = (1..=self.n).any(|i| self.entry(i, v) > 0);
        let has_out = (1..=self.n).any(|j| self.entry(v, j) > 0);
        Ok(match (has_in, has_out) {
            (false, _) => Some(VertexSign::Source),
            (true, false) => Some(VertexSign::Sink),
            (true, true) => None,
        })
    }

    /// Per-vertex signs; errors on the first vertex that is neither a source
    /// nor a sink (i.e. when the quiver is not alternating).
    pub fn signs(&self) -> Result<Vec<VertexSign>, QuiverError> {
        (1..=self.n)
            .map(|v| {
                self.sign_of(v)?
                    .ok_or(QuiverError::NotAlternating { vertex: v })
            })
            .collect()
    }

    pub fn is_alternating(&self) -> bool {
        self.signs().is_ok()
    }

    pub fn sources(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&v| matches!(self.sign_of(v), Ok(Some(VertexSign::Source))))
            .collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&v| matches!(self.sign_of(v), Ok(Some(VertexSign::Sink))))
            .collect()
    }

    /// True iff the arrow digraph (arcs `i -> j` when `b[i][j] > 0`) has no
    /// oriented cycle.
    pub fn is_acyclic(&self) -> bool {
        // 0 = unvisited, 1 = on the DFS stack, 2 = done
        fn dfs(q: &Quiver, v: usize, color: &mut [u8]) -> bool {
            color[v] = 1;
            for w in 0..q.n {
                if q.b[v * q.n + w] > 0 {
                    match color[w] {
                        0 => {
                            if !dfs(q, w, color) {
                                return false;
                            }
                        }
                        1 => return false,
                        _ => {}
                    }
                }
            }
            color[v] = 2;
            true
        }
        let mut color = vec![0u8; self.n];
        (0..self.n).all(|v| color[v] != 0 || dfs(self, v, &mut color))
    }

    /// Tensor product on `Q0 x Q0'` with matrix `B(Q) (x) I + I (x) B(Q')`.
    /// Vertex `(i, i')` flattens to `(i-1)*n' + i'` (lexicographic). Both
    /// factors must be free of oriented cycles.
    pub fn tensor_product(&self, other: &Quiver) -> Result<Quiver, QuiverError> {
        if !self.is_acyclic() || !other.is_acyclic() {
            return Err(QuiverError::OrientedCycle);
        }
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut b = vec![0i64; n * n];
        for i in 1..=n1 {
            for ip in 1..=n2 {
                let u = (i - 1) * n2 + (ip - 1);
                for j in 1..=n1 {
                    for jp in 1..=n2 {
                        let v = (j - 1) * n2 + (jp - 1);
                        let mut val = 0;
                        if ip == jp {
                            val += self.entry(i, j);
                        }
                        if i == j {
                            val += other.entry(ip, jp);
                        }
                        b[u * n + v] = val;
                    }
                }
            }
        }
        Ok(Quiver { n, b })
    }

    /// Square product: the tensor product with all arrows reversed inside the
    /// full subquivers `{i} x Q'` for `i` a source of `Q` and `Q x {i'}` for
    /// `i'` a sink of `Q'`. Both factors must be alternating.
    pub fn square_product(&self, other: &Quiver) -> Result<Quiver, QuiverError> {
        let signs1 = self.signs()?;
        let signs2 = other.signs()?;
        let t = self.tensor_product(other)?;
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut b = t.b;
        for i in 1..=n1 {
            for ip in 1..=n2 {
                let u = (i - 1) * n2 + (ip - 1);
                for j in 1..=n1 {
                    for jp in 1..=n2 {
                        let v = (j - 1) * n2 + (jp - 1);
                        // vertical arrows sit in {i} x Q', horizontal in Q x {i'};
                        // an arrow is never in both, so at most one flip applies.
                        let flip = (i == j && signs1[i - 1] == VertexSign::Source)
                            || (ip == jp && signs2[ip - 1] == VertexSign::Sink);
                        if flip {
                            b[u * n + v] = -b[u * n + v];
                        }
                    }
                }
            }
        }
        Ok(Quiver { n, b })
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            let row: Vec<String> = (1..=self.n)
                .map(|j| alloc::format!("{}", self.entry(i, j)))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Partition of the vertices of `Q square Q'` into the two sign classes
/// `m_+` (sgn(i)sgn(i') = +1) and `m_-` (product -1), as 1-based flattened
/// indices. Both factors must be alternating.
pub fn sign_classes(q: &Quiver, qp: &Quiver) -> Result<(Vec<usize>, Vec<usize>), QuiverError> {
    let s1 = q.signs()?;
    let s2 = qp.signs()?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 1..=q.n() {
        for ip in 1..=qp.n() {
            let v = (i - 1) * qp.n() + ip;
            if s1[i - 1].value() * s2[ip - 1].value() == 1 {
                plus.push(v);
            } else {
                minus.push(v);
            }
        }
    }
    Ok((plus, minus))
}
