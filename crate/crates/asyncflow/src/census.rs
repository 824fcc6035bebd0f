//! Census driver: CSV rows, resumable cursor, JSON summary.
//!
//! CSV header (one row per function index, ascending):
//!
//! ```text
//! index,constant,fixed_points,weak_p,strong_p,n_transitive,p_independent,n_independent_direct,pairwise_mergeable_all
//! ```
//!
//! `index` encodes the table with `Φ(x)` in bits `n·x .. n·x + n`. Cheap
//! columns are `0`/`1` (`fixed_points` is a count). Pair columns are `1`,
//! `0` or `u` (unknown), and empty on rows outside the pair sample. At
//! `n ≤ 2` every row carries pair flags; at `n = 3` a fixed seeded sample of
//! [`PAIR_SAMPLE_SIZE`] indices does.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::ops::Range;
use std::path::Path;

use asyncflow_core::explorer::{census_range, function_count, CensusRow, CensusSummary, CheapFlags, PairFlags};
use asyncflow_core::Truth;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "index,constant,fixed_points,weak_p,strong_p,n_transitive,p_independent,n_independent_direct,pairwise_mergeable_all";

pub const PAIR_SAMPLE_SIZE: usize = 10_000;
pub const PAIR_SAMPLE_SEED: u64 = 0x5EED_CE05;

/// Indices evaluated in one batch per worker.
const CHUNK: u64 = 1 << 16;

/// Indices that receive pair flags: all of them at `n ≤ 2`, a seeded sample at `n = 3`.
pub fn pair_sample(n: u8) -> Result<PairSample> {
    let total = function_count(n)?;
    if n <= 2 {
        return Ok(PairSample::All);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SAMPLE_SEED);
    let picked = rand::seq::index::sample(&mut rng, total as usize, PAIR_SAMPLE_SIZE);
    Ok(PairSample::Some(picked.into_iter().map(|i| i as u64).collect()))
}

#[derive(Clone, Debug)]
pub enum PairSample {
    All,
    Some(BTreeSet<u64>),
    None,
}

impl PairSample {
    pub fn contains(&self, index: u64) -> bool {
        match self {
            PairSample::All => true,
            PairSample::Some(s) => s.contains(&index),
            PairSample::None => false,
        }
    }
}

fn truth_cell(t: Truth) -> &'static str {
    match t {
        Truth::True => "1",
        Truth::False => "0",
        Truth::Unknown => "u",
    }
}

pub fn format_row(row: &CensusRow) -> String {
    let c = &row.cheap;
    let b = |x: bool| if x { "1" } else { "0" };
    let mut s = format!(
        "{},{},{},{},{},{}",
        row.index,
        b(c.constant),
        c.fixed_points,
        b(c.weak_p),
        b(c.strong_p),
        b(c.n_transitive)
    );
    match &row.pairs {
        Some(p) => {
            for t in [p.p_independent, p.n_independent_direct, p.pairwise_mergeable_all] {
                s.push(',');
                s.push_str(truth_cell(t));
            }
        }
        None => s.push_str(",,,"),
    }
    s
}

pub fn parse_row(line: &str) -> Option<CensusRow> {
    let cells: Vec<&str> = line.split(',').collect();
    if cells.len() != 9 {
        return None;
    }
    let bit = |s: &str| match s {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    };
    let truth = |s: &str| match s {
        "0" => Some(Truth::False),
        "1" => Some(Truth::True),
        "u" => Some(Truth::Unknown),
        _ => None,
    };
    let cheap = CheapFlags {
        constant: bit(cells[1])?,
        fixed_points: cells[2].parse().ok()?,
        weak_p: bit(cells[3])?,
        strong_p: bit(cells[4])?,
        n_transitive: bit(cells[5])?,
    };
    let pairs = if cells[6..].iter().all(|c| c.is_empty()) {
        None
    } else {
        Some(PairFlags {
            p_independent: truth(cells[6])?,
            n_independent_direct: truth(cells[7])?,
            pairwise_mergeable_all: truth(cells[8])?,
        })
    };
    Some(CensusRow { index: cells[0].parse().ok()?, cheap, pairs })
}

/// Serializable mirror of [`CensusSummary`]; carries no timing data so two
/// runs over the same range compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub schema_version: u32,
    pub arity: u8,
    pub total_functions: u64,
    pub complete: bool,
    pub next_index: u64,
    pub functions: u64,
    pub constant: u64,
    pub with_fixed_point: u64,
    pub fixed_point_histogram: Vec<u64>,
    pub weak_p_transitive: u64,
    pub strong_p_transitive: u64,
    pub n_transitive: u64,
    pub weak_p_transitive_not_p_dependent: u64,
    pub pair_rows: u64,
    pub pair_sample_seed: Option<u64>,
    pub p_independent: u64,
    pub n_independent_direct: u64,
    pub n_independent_not_constant: u64,
    pub pairwise_mergeable_all: u64,
    pub n_transitive_not_n_dependent: u64,
    pub pair_unknown: u64,
    /// `[p-independent][has fixed point]` over pair rows, `false` first.
    pub survey: [[u64; 2]; 2],
}

impl SummaryReport {
    pub fn new(s: &CensusSummary, next_index: u64) -> Result<Self> {
        let total = function_count(s.arity)?;
        Ok(Self {
            schema_version: crate::report::SCHEMA_VERSION,
            arity: s.arity,
            total_functions: total,
            complete: next_index == total,
            next_index,
            functions: s.functions,
            constant: s.constant,
            with_fixed_point: s.with_fixed_point,
            fixed_point_histogram: s.fixed_point_histogram.clone(),
            weak_p_transitive: s.weak_p_transitive,
            strong_p_transitive: s.strong_p_transitive,
            n_transitive: s.n_transitive,
            weak_p_transitive_not_p_dependent: s.weak_p_transitive_not_p_dependent,
            pair_rows: s.pair_rows,
            pair_sample_seed: (s.arity > 2).then_some(PAIR_SAMPLE_SEED),
            p_independent: s.p_independent,
            n_independent_direct: s.n_independent_direct,
            n_independent_not_constant: s.n_independent_not_constant,
            pairwise_mergeable_all: s.pairwise_mergeable_all,
            n_transitive_not_n_dependent: s.n_transitive_not_n_dependent,
            pair_unknown: s.pair_unknown,
            survey: s.survey,
        })
    }
}

/// Evaluates `range` in chunks on up to `threads` workers and hands rows to
/// `sink` in ascending index order.
pub fn run_census(
    n: u8,
    range: Range<u64>,
    pairs: &PairSample,
    threads: usize,
    mut sink: impl FnMut(&CensusRow) -> Result<()>,
) -> Result<CensusSummary> {
    let mut summary = CensusSummary::new(n);
    let threads = threads.max(1) as u64;
    let mut start = range.start;
    while start < range.end {
        let batch_end = range.end.min(start.saturating_add(CHUNK * threads));
        let chunks: Vec<Range<u64>> =
            (start..batch_end).step_by(CHUNK as usize).map(|a| a..batch_end.min(a + CHUNK)).collect();
        let results: Vec<asyncflow_core::Result<(CensusSummary, Vec<CensusRow>)>> = if chunks.len() == 1 {
            vec![eval_chunk(n, chunks[0].clone(), pairs)]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> =
                    chunks.iter().map(|c| scope.spawn(move || eval_chunk(n, c.clone(), pairs))).collect();
                handles.into_iter().map(|h| h.join().expect("census worker panicked")).collect()
            })
        };
        for r in results {
            let (part, rows) = r?;
            for row in &rows {
                sink(row)?;
            }
            summary.merge(&part);
        }
        start = batch_end;
    }
    Ok(summary)
}

fn eval_chunk(n: u8, range: Range<u64>, pairs: &PairSample) -> asyncflow_core::Result<(CensusSummary, Vec<CensusRow>)> {
    let mut rows = Vec::with_capacity((range.end - range.start) as usize);
    let summary = census_range(n, range, |i| pairs.contains(i), |row| rows.push(*row))?;
    Ok((summary, rows))
}

/// Summary-only census over the whole function space.
pub fn census_summary(n: u8, threads: usize) -> Result<CensusSummary> {
    let total = function_count(n)?;
    let pairs = pair_sample(n)?;
    run_census(n, 0..total, &pairs, threads, |_| Ok(()))
}

/// State recovered from a partial CSV.
pub struct Resumed {
    pub summary: CensusSummary,
    pub next_index: u64,
}

/// Reads a census CSV, truncates a torn final line, validates that rows are
/// `0, 1, 2, …`, and rebuilds the summary from them.
pub fn resume_csv(path: &Path, n: u8) -> Result<Resumed> {
    let p = path.display().to_string();
    let mut file = OpenOptions::new().read(true).write(true).open(path).map_err(|e| Error::io(&p, e))?;
    let mut reader = BufReader::new(&mut file);
    let mut header = String::new();
    reader.read_line(&mut header).map_err(|e| Error::io(&p, e))?;
    if header.trim_end() != CSV_HEADER {
        return Err(Error::Usage(format!("{p}: not a census CSV (header mismatch)")));
    }
    let mut good_len = header.len() as u64;
    let mut summary = CensusSummary::new(n);
    let mut next = 0u64;
    let mut line = String::new();
    loop {
        line.clear();
        let read = reader.read_line(&mut line).map_err(|e| Error::io(&p, e))?;
        if read == 0 {
            break;
        }
        if !line.ends_with('\n') {
            break;
        }
        let Some(row) = parse_row(line.trim_end()) else {
            return Err(Error::Usage(format!("{p}: malformed row after index {next}")));
        };
        if row.index != next {
            return Err(Error::Usage(format!("{p}: expected row {next}, found {}", row.index)));
        }
        summary.add(&row);
        next += 1;
        good_len += read as u64;
    }
    drop(reader);
    file.set_len(good_len).map_err(|e| Error::io(&p, e))?;
    file.seek(SeekFrom::End(0)).map_err(|e| Error::io(&p, e))?;
    Ok(Resumed { summary, next_index: next })
}

/// Runs or resumes a census writing CSV to `csv`; stops after `limit`
/// further functions when given.
pub fn census_to_csv(n: u8, csv: &Path, resume: bool, limit: Option<u64>, threads: usize) -> Result<SummaryReport> {
    let total = function_count(n)?;
    let p = csv.display().to_string();
    let (mut summary, start, file) = if resume {
        let r = resume_csv(csv, n)?;
        let file = OpenOptions::new().append(true).open(csv).map_err(|e| Error::io(&p, e))?;
        (r.summary, r.next_index, file)
    } else {
        let mut file = File::create(csv).map_err(|e| Error::io(&p, e))?;
        writeln!(file, "{CSV_HEADER}").map_err(|e| Error::io(&p, e))?;
        (CensusSummary::new(n), 0, file)
    };
    let end = limit.map_or(total, |l| total.min(start.saturating_add(l)));
    let pairs = pair_sample(n)?;
    let mut out = BufWriter::new(file);
    let part = run_census(n, start..end, &pairs, threads, |row| {
        writeln!(out, "{}", format_row(row)).map_err(|e| Error::io(&p, e))
    })?;
    out.flush().map_err(|e| Error::io(&p, e))?;
    summary.merge(&part);
    SummaryReport::new(&summary, end)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let pairs = pair_sample(2).unwrap();
        run_census(2, 0..256, &pairs, 1, |row| {
            assert_eq!(parse_row(&format_row(row)).as_ref(), Some(row));
            Ok(())
        })
        .unwrap();
        assert_eq!(
            parse_row("1,0,0,0,0,0,,,"),
            Some(CensusRow { index: 1, cheap: CheapFlags::default(), pairs: None })
        );
        assert!(parse_row("1,0,0,0,0,0,1,,").is_none());
    }

    #[test]
    fn threads_do_not_change_the_summary() {
        let pairs = PairSample::None;
        let one = run_census(3, 0..200_000, &pairs, 1, |_| Ok(())).unwrap();
        let mut last = None;
        let three = run_census(3, 0..200_000, &pairs, 3, |row| {
            assert!(last.map_or(row.index == 0, |l: u64| row.index == l + 1));
            last = Some(row.index);
            Ok(())
        })
        .unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn sample_is_seeded() {
        let (PairSample::Some(a), PairSample::Some(b)) = (pair_sample(3).unwrap(), pair_sample(3).unwrap()) else {
            panic!()
        };
        assert_eq!(a.len(), PAIR_SAMPLE_SIZE);
        assert_eq!(a, b);
    }
}
