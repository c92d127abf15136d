//! Text and JSON emitters. Output is written by hand so it is byte-stable
//! across runs and supports arbitrarily large coefficients; stdout carries
//! only the payload, diagnostics go to stderr.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use qloop_core::{NormalForm, QSeries, Quiver, RatMat};

/// Render a quiver in the matrix form of the input schema,
/// `{"n": .., "b": [[..], ..]}`; parsing this back yields the same matrix.
pub fn quiver_json(q: &Quiver) -> String {
    let rows: Vec<String> = q
        .matrix()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("{{\"n\": {}, \"b\": [{}]}}", q.n(), rows.join(", "))
}

/// Render a series as `1 + 3 * q^(1/2) + ...`: terms in increasing exponent
/// order, with exponents written over the series' grading denominator.
pub fn series_text(z: &QSeries) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (e, c) in z.terms() {
        if e == 0 {
            parts.push(format!("{c}"));
        } else {
            parts.push(format!("{c} * q^({e}/{})", z.delta()));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Render a series as `{"delta": .., "cutoff": "p/q", "terms": [[e, c], ..]}`.
pub fn series_json(z: &QSeries) -> String {
    let mut out = String::new();
    write!(out, "{{\"delta\": {}, \"cutoff\": \"{}\", \"terms\": [", z.delta(), z.cutoff()).unwrap();
    for (i, (e, c)) in z.terms().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "[{e}, {c}]").unwrap();
    }
    out.push_str("]}");
    out
}

pub fn gram_text(g: &RatMat) -> String {
    let rows: Vec<String> = (0..g.rows())
        .map(|i| {
            let cells: Vec<String> = (0..g.cols()).map(|j| format!("{}", g[(i, j)])).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Common denominator and the corresponding integer matrix: `g = num / den`.
pub fn gram_common_denominator(g: &RatMat) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut den = BigInt::one();
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            den = den.lcm(g[(i, j)].denom());
        }
    }
    let num = (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .map(|j| (&g[(i, j)] * qloop_core::Rat::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    (num, den)
}

fn int_rows_json(rows: &[Vec<BigInt>]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", body.join(", "))
}

fn usize_list_json(xs: &[usize]) -> String {
    let cells: Vec<String> = xs.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", cells.join(", "))
}

/// The `info` payload: `{"quiver": .., "delta": .., "gram_num": ..,
/// "gram_den": .., "positivity": .., "normal_form": {"mutations": ..,
/// "phi": ..}}`.
pub fn info_json(
    quiver: &Quiver,
    delta: u64,
    gram: &RatMat,
    positivity: &str,
    normal: &NormalForm,
) -> String {
    let (num, den) = gram_common_denominator(gram);
    format!(
        "{{\"quiver\": {}, \"delta\": {delta}, \"gram_num\": {}, \"gram_den\": {den}, \"positivity\": \"{positivity}\", \"normal_form\": {{\"mutations\": {}, \"phi\": {}}}}}",
        quiver_json(quiver),
        int_rows_json(&num),
        usize_list_json(&normal.mutations),
        usize_list_json(normal.phi.one_line()),
    )
}

pub fn info_text(
    quiver: &Quiver,
    delta: u64,
    gram: &RatMat,
    positivity: &str,
    normal: &NormalForm,
) -> String {
    format!(
        "quiver: {}\ndelta: {delta}\ngram: {}\npositivity: {positivity}\nmutations: {}\nphi: {}",
        quiver_json(quiver),
        gram_text(gram),
        usize_list_json(&normal.mutations),
        usize_list_json(normal.phi.one_line()),
    )
}
