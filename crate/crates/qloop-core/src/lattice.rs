//! Lattice-point enumeration under `F(k) <= cutoff` and the partition
//! q-series sum.
//!
//! Two exact strategies emit the finite set `{k in N^T : F(k) <= cutoff}`,
//! each point once, in lexicographic order:
//!
//! * `PdRecursive`: LDL^T of the Gram matrix turns `F` into a sum of
//!   weighted squares, giving per-coordinate interval bounds (the classic
//!   enumeration for positive definite forms, restricted to `k >= 0`);
//! * `SimplexBound`: a certified bound `F(k) >= m (sum k)^2` confines the
//!   points to the box `sum k <= floor(sqrt(cutoff/m))`, which is then
//!   filtered by direct evaluation.
//!
//! The partition series of a form is the sum of `q^{F(k)}` times the product
//! of reciprocal Pochhammer factors over all emitted points; tail terms with
//! `F(k) > cutoff` only produce exponents beyond the cutoff (the factors
//! have constant term 1 and nonnegative exponents), so every retained
//! coefficient is exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::loops::MutationLoop;
use crate::ratmat::RatMat;
use crate::series::{PochhammerCache, QSeries};
use crate::varsys::{exponent_form, simplex_min, ExponentForm, Positivity, VarSysError};
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    PdRecursive,
    SimplexBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    VarSys(VarSysError),
    /// The positivity certificate failed; the sum would not be finite.
    PositivityFailed,
    MaxTermsExceeded { limit: u64 },
    /// pd-recursive was requested for a form that is not positive definite.
    NotPositiveDefinite,
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::VarSys(e) => write!(f, "{e}"),
            EngineError::PositivityFailed => {
                write!(f, "exponent form is not positive on the nonnegative orthant")
            }
            EngineError::MaxTermsExceeded { limit } => {
                write!(f, "lattice enumeration exceeded the {limit} point limit")
            }
            EngineError::NotPositiveDefinite => {
                write!(f, "pd-recursive enumeration needs a positive definite form")
            }
        }
    }
}

impl From<VarSysError> for EngineError {
    fn from(e: VarSysError) -> Self {
        EngineError::VarSys(e)
    }
}

/// Options for [`partition_series`] and [`sum_loop_opts`].
#[derive(Clone, Debug, Default)]
pub struct SumOptions {
    /// Enumeration strategy; `None` picks pd-recursive for positive definite
    /// forms and simplex-bound otherwise.
    pub strategy: Option<Strategy>,
    /// Abort with [`EngineError::MaxTermsExceeded`] when the point count
    /// passes this limit.
    pub max_terms: Option<u64>,
    /// Keep only points whose first coordinate is `residue` mod `modulus`;
    /// partial sums over all residues add up to the full series, which is
    /// how callers parallelize.
    pub first_residue: Option<(u64, u64)>,
}

fn pick_strategy(form: &ExponentForm, requested: Option<Strategy>) -> Result<Strategy, EngineError> {
    match requested {
        Some(Strategy::PdRecursive) => {
            if matches!(form.positivity(), Positivity::PositiveDefinite) {
                Ok(Strategy::PdRecursive)
            } else {
                Err(EngineError::NotPositiveDefinite)
            }
        }
        Some(Strategy::SimplexBound) => Ok(Strategy::SimplexBound),
        None => Ok(match form.positivity() {
            Positivity::PositiveDefinite => Strategy::PdRecursive,
            _ => Strategy::SimplexBound,
        }),
    }
}

/// Walk every `k >= 0` with `F(k) <= cutoff` in lexicographic order, calling
/// `f(k, F(k))`. `Err` from the callback aborts the walk.
fn walk<F>(
    form: &ExponentForm,
    cutoff: &Rat,
    strategy: Strategy,
    first_residue: Option<(u64, u64)>,
    f: &mut F,
) -> Result<(), EngineError>
where
    F: FnMut(&[u64], &Rat) -> Result<(), EngineError>,
{
    if !form.positivity().is_positive() {
        return Err(EngineError::PositivityFailed);
    }
    if cutoff.is_negative() {
        return Ok(());
    }
    let t = form.vars();
    if t == 0 {
        return f(&[], &Rat::zero());
    }
    match strategy {
        Strategy::PdRecursive => walk_pd(form, cutoff, first_residue, f),
        Strategy::SimplexBound => walk_simplex(form, cutoff, first_residue, f),
    }
}

fn keep_first(k1: u64, first_residue: Option<(u64, u64)>) -> bool {
    match first_residue {
        Some((r, m)) => m != 0 && k1 % m == r,
        None => true,
    }
}

fn walk_pd<F>(
    form: &ExponentForm,
    cutoff: &Rat,
    first_residue: Option<(u64, u64)>,
    f: &mut F,
) -> Result<(), EngineError>
where
    F: FnMut(&[u64], &Rat) -> Result<(), EngineError>,
{
    let t = form.vars();
    // reverse the coordinates so the recursion fixes k_1 outermost,
    // making the emission order lexicographic
    let mut rev = RatMat::zeros(t, t);
    for i in 0..t {
        for j in 0..t {
            rev[(i, j)] = form.gram()[(t - 1 - i, t - 1 - j)].clone();
        }
    }
    let fact = rev.ldlt().ok_or(EngineError::NotPositiveDefinite)?;
    if !fact.d.iter().all(|p| p.is_positive()) {
        return Err(EngineError::NotPositiveDefinite);
    }

    // F(k) = sum_i d_i (k_i + c_i)^2 with c_i = sum_{j>i} L[j][i] k_j;
    // fix coordinates from level t-1 (outermost, original k_1) down to 0
    struct Ctx<'a> {
        t: usize,
        l: &'a RatMat,
        d: &'a [Rat],
        cutoff: &'a Rat,
        first_residue: Option<(u64, u64)>,
    }

    fn descend<F>(
        ctx: &Ctx<'_>,
        point: &mut [u64],
        level: usize,
        partial: &Rat,
        f: &mut F,
    ) -> Result<(), EngineError>
    where
        F: FnMut(&[u64], &Rat) -> Result<(), EngineError>,
    {
        let mut center = Rat::zero();
        for j in level + 1..ctx.t {
            center += &ctx.l[(j, level)] * Rat::from_integer(point[j].into());
        }
        let mut k = 0u64;
        loop {
            let shifted = &center + Rat::from_integer(k.into());
            let value = partial + &ctx.d[level] * &shifted * &shifted;
            if value <= *ctx.cutoff {
                let outermost = level + 1 == ctx.t;
                if !outermost || keep_first(k, ctx.first_residue) {
                    point[level] = k;
                    if level == 0 {
                        let original: Vec<u64> =
                            (0..ctx.t).map(|i| point[ctx.t - 1 - i]).collect();
                        f(&original, &value)?;
                    } else {
                        descend(ctx, point, level - 1, &value, f)?;
                    }
                }
            } else if !shifted.is_negative() {
                return Ok(());
            }
            k += 1;
        }
    }

    let ctx = Ctx {
        t,
        l: &fact.l,
        d: &fact.d,
        cutoff,
        first_residue,
    };
    let mut point = vec![0u64; t];
    descend(&ctx, &mut point, t - 1, &Rat::zero(), f)
}

fn walk_simplex<F>(
    form: &ExponentForm,
    cutoff: &Rat,
    first_residue: Option<(u64, u64)>,
    f: &mut F,
) -> Result<(), EngineError>
where
    F: FnMut(&[u64], &Rat) -> Result<(), EngineError>,
{
    let bound = match form.positivity() {
        Positivity::CopositiveCertified { bound } => bound.clone(),
        // positive definite forms are also positive on the simplex; compute
        // the bound on demand when this strategy is forced
        Positivity::PositiveDefinite => {
            simplex_min(form.gram()).ok_or(EngineError::PositivityFailed)?
        }
        Positivity::Failed => return Err(EngineError::PositivityFailed),
    };
    if !bound.is_positive() {
        return Err(EngineError::PositivityFailed);
    }
    // sum k <= floor(sqrt(cutoff / m))
    let ratio = cutoff / &bound;
    let floor: BigInt = ratio.numer().div_floor(ratio.denom());
    let budget = u64::try_from(floor.sqrt()).expect("simplex box too large");

    let t = form.vars();
    let mut point = vec![0u64; t];
    fn descend<F>(
        form: &ExponentForm,
        cutoff: &Rat,
        first_residue: Option<(u64, u64)>,
        point: &mut Vec<u64>,
        idx: usize,
        budget: u64,
        f: &mut F,
    ) -> Result<(), EngineError>
    where
        F: FnMut(&[u64], &Rat) -> Result<(), EngineError>,
    {
        if idx == point.len() {
            let value = form.eval(point);
            if value <= *cutoff {
                f(point, &value)?;
            }
            return Ok(());
        }
        for k in 0..=budget {
            if idx == 0 && !keep_first(k, first_residue) {
                continue;
            }
            point[idx] = k;
            descend(form, cutoff, first_residue, point, idx + 1, budget - k, f)?;
        }
        point[idx] = 0;
        Ok(())
    }
    descend(form, cutoff, first_residue, &mut point, 0, budget, f)
}

/// Collect every `k in N^T` with `F(k) <= cutoff`, with its value, in
/// lexicographic order.
pub fn enumerate_lattice(
    form: &ExponentForm,
    cutoff: &Rat,
    strategy: Option<Strategy>,
) -> Result<Vec<(Vec<u64>, Rat)>, EngineError> {
    let strategy = pick_strategy(form, strategy)?;
    let mut out = Vec::new();
    walk(form, cutoff, strategy, None, &mut |k, v| {
        out.push((k.to_vec(), v.clone()));
        Ok(())
    })?;
    Ok(out)
}

/// Count the points under the cutoff, aborting past `limit`.
pub fn count_lattice_points(
    form: &ExponentForm,
    cutoff: &Rat,
    limit: Option<u64>,
) -> Result<u64, EngineError> {
    let strategy = pick_strategy(form, None)?;
    let mut count = 0u64;
    walk(form, cutoff, strategy, None, &mut |_, _| {
        count += 1;
        match limit {
            Some(l) if count > l => Err(EngineError::MaxTermsExceeded { limit: l }),
            _ => Ok(()),
        }
    })?;
    Ok(count)
}

/// The partition series of an exponent form:
/// `sum over F(k) <= cutoff of q^{F(k)} prod_t 1/(q)_{k_t}`, truncated.
pub fn partition_series(
    form: &ExponentForm,
    cutoff: &Rat,
    opts: &SumOptions,
) -> Result<QSeries, EngineError> {
    let strategy = pick_strategy(form, opts.strategy)?;
    let delta = form.delta();
    let mut series = QSeries::zero(delta, cutoff.clone());
    let mut cache = PochhammerCache::new(delta, cutoff.clone());
    let mut count = 0u64;
    walk(form, cutoff, strategy, opts.first_residue, &mut |k, value| {
        count += 1;
        if let Some(limit) = opts.max_terms {
            if count > limit {
                return Err(EngineError::MaxTermsExceeded { limit });
            }
        }
        // Delta * F(k) is an integer by the definition of Delta
        let scaled = value * Rat::from_integer(delta.into());
        debug_assert!(scaled.is_integer());
        let base = u64::try_from(scaled.to_integer()).expect("negative exponent");
        let factors = cache.inv_product(k);
        for (e, c) in factors.terms() {
            series.add_term(base + e, c.clone());
        }
        Ok(())
    })?;
    Ok(series)
}

/// The partition q-series `Z` of a mutation loop, truncated at `cutoff`.
/// The loop must be nondegenerate and positive.
pub fn sum_loop(lp: &MutationLoop, cutoff: &Rat) -> Result<QSeries, EngineError> {
    sum_loop_opts(lp, cutoff, &SumOptions::default())
}

/// As [`sum_loop`] with explicit options.
pub fn sum_loop_opts(
    lp: &MutationLoop,
    cutoff: &Rat,
    opts: &SumOptions,
) -> Result<QSeries, EngineError> {
    let form = exponent_form(lp)?;
    partition_series(&form, cutoff, opts)
}
