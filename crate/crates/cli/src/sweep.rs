use std::sync::Arc;

use rayon::prelude::*;

use mlp_core::{build_arrangement, build_gluing_graph, compute_space_from, is_even_square, Weight};

use crate::error::CliError;
use crate::record::ResultRecord;

pub struct Row {
    pub record: ResultRecord,
    pub failure: Option<String>,
}

fn discriminants(max: i64) -> Vec<i64> {
    (1..=max).filter(|d| d % 4 == 0 || d % 4 == 1).collect()
}

fn judge(rec: &ResultRecord) -> Option<String> {
    let w = rec.k.unsigned_abs() as usize;
    let bound = (w + 1) * rec.r_f;
    if rec.dim > bound {
        return Some(format!("dim {} exceeds (|k|+1) rF = {bound}", rec.dim));
    }
    if w == 0 {
        return (rec.dim != rec.orbit_count)
            .then(|| format!("weight-0 dim {} differs from orbit count {}", rec.dim, rec.orbit_count));
    }
    let full = rec.dim == bound;
    (full != rec.flags.even_square).then(|| {
        format!(
            "dim {} vs bound {bound} but D {} an even square",
            rec.dim,
            if rec.flags.even_square { "is" } else { "is not" }
        )
    })
}

/// Every `(D, k)` with `D <= max_disc`, ordered by `D` then by the order of
/// `weights`. Complexes are built once per `D`.
pub fn run(max_disc: i64, weights: &[Weight], jobs: Option<usize>) -> Result<Vec<Row>, CliError> {
    if max_disc < 4 {
        return Err(CliError::SweepRange(max_disc));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().expect("thread pool");
    pool.install(|| {
        let prepared = discriminants(max_disc)
            .into_par_iter()
            .map(|d| {
                let fc = Arc::new(build_arrangement(d)?);
                let g = Arc::new(build_gluing_graph(&fc));
                Ok((fc, g))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let tasks: Vec<_> = prepared
            .iter()
            .flat_map(|(fc, g)| weights.iter().map(move |&w| (fc.clone(), g.clone(), w)))
            .collect();
        Ok(tasks
            .into_par_iter()
            .map(|(fc, g, w)| {
                let record = ResultRecord::from_space(&compute_space_from(fc, g, w, false));
                let failure = judge(&record);
                Row { record, failure }
            })
            .collect())
    })
}

pub fn header() -> String {
    format!(
        "{:>4} {:>4} {:>5} {:>6} {:>6} {:>6} {:>6}  {}",
        "D", "k", "rF", "cusp", "orbits", "dim", "bound", "status"
    )
}

pub fn format_row(row: &Row) -> String {
    let r = &row.record;
    let bound = (r.k.unsigned_abs() as usize + 1) * r.r_f;
    let status = match (&row.failure, r.k == 0) {
        (Some(_), _) => "FAIL",
        (None, true) => "ok",
        (None, false) if r.dim == bound => "ok equal",
        (None, false) => "ok strict",
    };
    let tag = if is_even_square(r.disc) { " evenSquare" } else { "" };
    format!(
        "{:>4} {:>4} {:>5} {:>6} {:>6} {:>6} {:>6}  {status}{tag}",
        r.disc, r.k, r.r_f, r.cusp_faces, r.orbit_count, r.dim, bound
    )
}
