//! Checkpointed, resumable scan runs.
//!
//! Rows (one `u` value each, all `z` values) are computed in parallel in
//! batches but written strictly in order. A checkpoint is saved after every
//! completed row and records the row index, the byte length of the output
//! so far, and the verdict tallies. Resuming truncates the output to that
//! length and continues, so an interrupted run produces the same bytes as an
//! uninterrupted one.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CuboidSeptuple;
use crate::records::{format_scan_record, format_summary, OutputFormat, VerdictCounts, SCAN_CSV_HEADER};
use crate::search::scan::{axis, escalate, scan_rows_parallel, SearchRecord, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub bound: u64,
    pub format: OutputFormat,
    /// Index of the next `u` row to compute.
    pub next_row: usize,
    pub rows: usize,
    pub bytes_written: u64,
    pub counts: VerdictCounts,
}

impl Checkpoint {
    pub fn fresh(bound: u64, format: OutputFormat, rows: usize) -> Self {
        Self { bound, format, next_row: 0, rows, bytes_written: 0, counts: VerdictCounts::default() }
    }

    pub fn is_complete(&self) -> bool {
        self.next_row >= self.rows
    }

    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(s) => serde_json::from_str(&s)
                .map(Some)
                .map_err(|e| Error::CheckpointMismatch(format!("unreadable checkpoint {}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(self).expect("checkpoint serializes"))?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub bound: u64,
    pub workers: usize,
    pub format: OutputFormat,
    /// Stop after this many rows in this invocation, leaving the run
    /// resumable. Used to exercise interruption.
    pub max_rows: Option<usize>,
}

impl ScanConfig {
    pub fn new(bound: u64) -> Self {
        Self { bound, workers: 1, format: OutputFormat::Jsonl, max_rows: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bound < 2 {
            return Err(Error::Domain("bound must be at least 2".into()));
        }
        if self.workers < 1 {
            return Err(Error::Domain("worker count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub checkpoint: Checkpoint,
    pub completed: bool,
    /// Verified perfect cuboids reconstructed from `BOTH_SQUARE` records.
    pub discoveries: Vec<CuboidSeptuple>,
}

/// Runs (or continues) a scan, writing records to `out`. `state` is the
/// position to continue from; `on_row` is called after each row has been
/// flushed.
pub fn run_scan<W: Write>(
    cfg: &ScanConfig,
    out: &mut W,
    mut state: Checkpoint,
    mut on_row: impl FnMut(&Checkpoint) -> Result<()>,
) -> Result<ScanOutcome> {
    cfg.validate()?;
    let axis = axis(cfg.bound);
    if state.bound != cfg.bound || state.format != cfg.format || state.rows != axis.len() {
        return Err(Error::CheckpointMismatch(format!(
            "checkpoint is for bound {} ({}), run is for bound {} ({})",
            state.bound, state.format, cfg.bound, cfg.format
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;

    let mut discoveries = Vec::new();
    let write = |out: &mut W, bytes: &mut u64, line: &str| -> Result<()> {
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
        *bytes += line.len() as u64 + 1;
        Ok(())
    };

    if state.next_row == 0 && state.bytes_written == 0 && cfg.format == OutputFormat::Csv {
        write(out, &mut state.bytes_written, SCAN_CSV_HEADER)?;
    }

    let stop_at = cfg.max_rows.map_or(axis.len(), |m| (state.next_row + m).min(axis.len()));
    while state.next_row < stop_at {
        let end = (state.next_row + cfg.workers).min(stop_at);
        let batch = pool.install(|| scan_rows_parallel(&axis, state.next_row, end))?;
        for row in batch {
            for rec in &row {
                if rec.verdict == Verdict::BothSquare {
                    discoveries.push(escalate(rec)?);
                }
                state.counts.add(rec.verdict);
                write(out, &mut state.bytes_written, &format_scan_record(rec, cfg.format))?;
            }
            out.flush()?;
            state.next_row += 1;
            on_row(&state)?;
        }
    }

    let completed = state.is_complete();
    if completed {
        write(out, &mut 0, &format_summary(&state.counts))?;
        out.flush()?;
    }
    Ok(ScanOutcome { checkpoint: state, completed, discoveries })
}

/// File-backed scan with an optional checkpoint file. An existing
/// checkpoint for the same bound and format resumes the run; one for a
/// different configuration is a [`Error::CheckpointMismatch`].
pub fn run_scan_to_file(cfg: &ScanConfig, out_path: &Path, checkpoint: Option<&Path>) -> Result<ScanOutcome> {
    cfg.validate()?;
    let rows = axis(cfg.bound).len();
    let existing = match checkpoint {
        Some(p) => Checkpoint::load(p)?,
        None => None,
    };
    let state = match existing {
        Some(c) => {
            if c.bound != cfg.bound || c.format != cfg.format {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint {} was written for bound {} ({}), not {} ({})",
                    checkpoint.map(Path::display).expect("loaded from a path"),
                    c.bound,
                    c.format,
                    cfg.bound,
                    cfg.format
                )));
            }
            c
        }
        None => Checkpoint::fresh(cfg.bound, cfg.format, rows),
    };

    let file = if state.bytes_written == 0 {
        File::create(out_path)?
    } else {
        let f = OpenOptions::new().write(true).open(out_path)?;
        let len = f.metadata()?.len();
        if len < state.bytes_written {
            return Err(Error::CheckpointMismatch(format!(
                "{} has {len} bytes, checkpoint expects at least {}",
                out_path.display(),
                state.bytes_written
            )));
        }
        f.set_len(state.bytes_written)?;
        let mut f = f;
        std::io::Seek::seek(&mut f, std::io::SeekFrom::End(0))?;
        f
    };
    let mut out = BufWriter::new(file);
    let ckpt: Option<PathBuf> = checkpoint.map(Path::to_path_buf);
    run_scan(cfg, &mut out, state, |c| match &ckpt {
        Some(p) => c.save(p),
        None => Ok(()),
    })
}

/// All records of a scan, collected in memory (no checkpointing).
pub fn scan_all(bound: u64, workers: usize) -> Result<Vec<SearchRecord>> {
    let cfg = ScanConfig { bound, workers, format: OutputFormat::Jsonl, max_rows: None };
    cfg.validate()?;
    let axis = axis(bound);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let rows = pool.install(|| scan_rows_parallel(&axis, 0, axis.len()))?;
    Ok(rows.into_iter().flatten().collect())
}
