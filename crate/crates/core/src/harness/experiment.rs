//! Sweeps over a set family, one row of exact statistics per size.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use super::{gen_ap, gen_gp, gen_group_sample, gen_union_gp, seeded_rng};
use crate::budget::Budget;
use crate::degeneracy::{degenerate_image_bound, is_degenerate};
use crate::error::{Error, Result};
use crate::goodset::good_set_report;
use crate::groundset::GroundSet;
use crate::multgroup::mult_rank;
use crate::poly::{infer_nvars, parse_poly, value_histogram, SparsePoly};
use crate::rational::{self, Rational};
use crate::setarith::{doubling, productset, Mode};

/// Bumped whenever a CSV column is added, removed or reinterpreted.
pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 15] = [
    "index",
    "size_param",
    "set_size",
    "add_doubling",
    "mult_doubling",
    "mult_rank",
    "image_size",
    "energy",
    "sup_rep",
    "bad_count",
    "degenerate",
    "degenerate_bound",
    "degenerate_within_bound",
    "violations",
    "error",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `{q, …, q^N}`.
    Gp {
        #[serde(with = "rational::as_string")]
        ratio: Rational,
    },
    /// `{a, a + d, …, a + (N−1)d}`.
    Ap {
        #[serde(with = "rational::as_string")]
        start: Rational,
        #[serde(with = "rational::as_string")]
        step: Rational,
    },
    /// Union of geometric progressions of length `N`.
    UnionGp {
        #[serde(with = "rational::vec_as_strings")]
        ratios: Vec<Rational>,
    },
    /// `N` random elements of the exponent box of height `height`.
    GroupSample { primes: Vec<u64>, height: u32 },
}

impl Family {
    fn build(&self, size: usize, seed: u64, budget: &Budget) -> Result<GroundSet> {
        match self {
            Family::Gp { ratio } => gen_gp(ratio, size),
            Family::Ap { start, step } => gen_ap(start, step, size),
            Family::UnionGp { ratios } => gen_union_gp(ratios, size),
            Family::GroupSample { primes, height } => {
                gen_group_sample(primes, *height, size, seed, budget)
            }
        }
    }

    /// Structural guarantee of the family, checked on every generated set.
    fn check(&self, size: usize, a: &GroundSet) -> Result<Option<String>> {
        Ok(match self {
            Family::Gp { .. } => {
                let product = productset(a, a)?.len();
                (a.len() != size || product != 2 * size - 1).then(|| {
                    format!(
                        "GP of length {size} has |A| = {} and |A·A| = {product}",
                        a.len()
                    )
                })
            }
            Family::GroupSample { primes, .. } => {
                let r = mult_rank(a)?;
                (r > primes.len()).then(|| format!("sample has rank {r} > {}", primes.len()))
            }
            Family::Ap { .. } => (a.len() != size).then(|| format!("AP has {} elements", a.len())),
            Family::UnionGp { .. } => None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub family: Family,
    pub polynomial: String,
    /// Inferred from the polynomial text when absent.
    #[serde(default)]
    pub nvars: Option<usize>,
    pub sweep: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn polynomial(&self) -> Result<SparsePoly> {
        let n = match self.nvars {
            Some(n) => n,
            None => infer_nvars(&self.polynomial)?,
        };
        parse_poly(&self.polynomial, n)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub index: usize,
    pub size_param: usize,
    pub set_size: Option<usize>,
    #[serde(serialize_with = "opt_rational")]
    pub add_doubling: Option<Rational>,
    #[serde(serialize_with = "opt_rational")]
    pub mult_doubling: Option<Rational>,
    pub mult_rank: Option<usize>,
    pub image_size: Option<usize>,
    pub energy: Option<u64>,
    pub sup_rep: Option<u64>,
    pub bad_count: Option<u64>,
    pub degenerate: Option<bool>,
    #[serde(serialize_with = "opt_display")]
    pub degenerate_bound: Option<BigInt>,
    pub degenerate_within_bound: Option<bool>,
    pub violations: Vec<String>,
    pub error: Option<String>,
    /// Wall time; reported in JSON only so that CSV output is reproducible.
    pub elapsed_ms: u64,
}

fn opt_rational<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    opt_display(v, s)
}

fn opt_display<S: Serializer, T: ToString>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(ToString::to_string).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentReport {
    pub fn violations(&self) -> impl Iterator<Item = (&ExperimentRow, &String)> {
        self.rows
            .iter()
            .flat_map(|r| r.violations.iter().map(move |v| (r, v)))
    }

    pub fn has_violations(&self) -> bool {
        self.violations().next().is_some()
    }
}

/// Runs every sweep point. Rows are computed in parallel and reported in
/// sweep order; a failing row records its error and the run continues.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let f = cfg.polynomial()?;
    let degenerate = is_degenerate(&f)?;
    let mut rng = seeded_rng(cfg.seed);
    let seeds: Vec<u64> = cfg.sweep.iter().map(|_| rng.next_u64()).collect();
    let rows = cfg
        .sweep
        .par_iter()
        .zip(seeds.par_iter())
        .enumerate()
        .map(|(index, (&size, &seed))| {
            let start = Instant::now();
            let mut row = ExperimentRow {
                index,
                size_param: size,
                degenerate: Some(degenerate),
                ..Default::default()
            };
            if let Err(e) = fill_row(cfg, &f, degenerate, size, seed, &mut row) {
                row.error = Some(e.to_string());
            }
            row.elapsed_ms = start.elapsed().as_millis() as u64;
            row
        })
        .collect();
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        rows,
    })
}

fn fill_row(
    cfg: &ExperimentConfig,
    f: &SparsePoly,
    degenerate: bool,
    size: usize,
    seed: u64,
    row: &mut ExperimentRow,
) -> Result<()> {
    let budget = &cfg.budget;
    let a = cfg.family.build(size, seed, budget)?;
    row.set_size = Some(a.len());
    if let Some(v) = cfg.family.check(size, &a)? {
        row.violations.push(v);
    }
    row.add_doubling = Some(doubling(&a, Mode::Additive, budget)?);
    row.mult_doubling = Some(doubling(&a, Mode::Multiplicative, budget)?);

    let histogram = value_histogram(f, &a, budget)?;
    let image = histogram.counts.len();
    let energy = histogram.energy();
    row.image_size = Some(image);
    row.energy = Some(energy);
    // |F(A)|·E ≥ |A|^{2n} by Cauchy–Schwarz
    let domain = u128::from(histogram.domain_size);
    if (image as u128) * u128::from(energy) < domain * domain {
        row.violations.push(format!(
            "|image|·E = {} < |A|^(2n)",
            image as u128 * u128::from(energy)
        ));
    }

    if a.contains_zero() {
        return Ok(());
    }
    row.mult_rank = Some(mult_rank(&a)?);
    let report = good_set_report(f, &a, budget)?;
    if report.rep_counts.get(&Rational::from_integer(0.into())) != 0 {
        row.violations.push("good-set count at 0 is nonzero".into());
    }
    if u128::from(report.bad_count) > report.bad_bound {
        row.violations.push(format!(
            "bad_count {} exceeds {}",
            report.bad_count, report.bad_bound
        ));
    }
    if report.good_count() + report.bad_count != histogram.domain_size {
        row.violations
            .push("good and bad tuples do not partition Aⁿ".into());
    }
    row.sup_rep = Some(report.sup_rep);
    row.bad_count = Some(report.bad_count);

    if degenerate {
        let bound = degenerate_image_bound(f, &a, budget)?;
        if !bound.within_bound {
            row.violations.push(format!(
                "|F(A)| = {} exceeds degenerate bound {}",
                bound.measured, bound.product_bound
            ));
        }
        row.degenerate_within_bound = Some(bound.within_bound);
        row.degenerate_bound = Some(bound.product_bound);
    }
    Ok(())
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Writes the rows under the fixed [`CSV_COLUMNS`] header.
pub fn write_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in &report.rows {
        w.write_record([
            r.index.to_string(),
            r.size_param.to_string(),
            cell(&r.set_size),
            cell(&r.add_doubling),
            cell(&r.mult_doubling),
            cell(&r.mult_rank),
            cell(&r.image_size),
            cell(&r.energy),
            cell(&r.sup_rep),
            cell(&r.bad_count),
            cell(&r.degenerate),
            cell(&r.degenerate_bound),
            cell(&r.degenerate_within_bound),
            r.violations.join("; "),
            cell(&r.error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Plain-text table of a CSV written by [`write_csv`], followed by counts of
/// failed rows and violations.
pub fn summarize_csv(path: &Path) -> Result<String> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_COLUMNS {
        return Err(Error::InvalidArgument(format!(
            "{} does not have the experiment CSV header",
            path.display()
        )));
    }
    let records: Vec<csv::StringRecord> =
        reader.records().collect::<std::result::Result<_, _>>()?;
    let shown: Vec<usize> = (0..CSV_COLUMNS.len() - 2).collect();
    let mut widths: Vec<usize> = shown.iter().map(|&i| CSV_COLUMNS[i].len()).collect();
    for r in &records {
        for (w, &i) in widths.iter_mut().zip(&shown) {
            *w = (*w).max(r.get(i).unwrap_or("").len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = String::new();
    out.push_str(&line(shown.iter().map(|&i| CSV_COLUMNS[i]).collect()));
    out.push('\n');
    let (mut failed, mut violations) = (0, 0);
    for r in &records {
        out.push_str(&line(
            shown.iter().map(|&i| r.get(i).unwrap_or("")).collect(),
        ));
        out.push('\n');
        let v = r.get(CSV_COLUMNS.len() - 2).unwrap_or("");
        let e = r.get(CSV_COLUMNS.len() - 1).unwrap_or("");
        if !v.is_empty() {
            violations += v.split("; ").count();
            out.push_str(&format!("  violation: {v}\n"));
        }
        if !e.is_empty() {
            failed += 1;
            out.push_str(&format!("  error: {e}\n"));
        }
    }
    out.push_str(&format!(
        "{} rows, {failed} failed, {violations} violations\n",
        records.len()
    ));
    Ok(out)
}
