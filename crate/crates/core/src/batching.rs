//! Minibatch index streams.
//!
//! Every strategy is driven by a matrix of distinct indices drawn without
//! replacement from `0..N` whose rows are the batches. The strategies differ
//! only in when that matrix is resampled and in which order its rows are
//! visited:
//!
//! | strategy | rows | resampled            | visiting order per period |
//! |----------|------|----------------------|---------------------------|
//! | RM       | 1    | every iteration      | `0`                       |
//! | RR       | R    | every R iterations   | `0, 1, .., R-1`           |
//! | SMS      | R    | every 2R iterations  | `0, .., R-1, R-1, .., 0`  |
//! | IG       | R    | never (identity)     | `0, 1, .., R-1`           |
//! | SO       | R    | once, at the start   | `0, 1, .., R-1`           |
//!
//! With `R = ceil(N/n)` the last row may be short (`n_R < n` entries); its
//! batch then carries weight `n_R / n` so that the weighted batch gradients
//! of an epoch still sum to `(N/n) * grad F`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    RobbinsMonro,
    RandomReshuffling,
    SymmetricMinibatch,
    IncrementalGradient,
    ShuffleOnce,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::RobbinsMonro,
        Strategy::RandomReshuffling,
        Strategy::SymmetricMinibatch,
        Strategy::IncrementalGradient,
        Strategy::ShuffleOnce,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Strategy::RobbinsMonro => "rm",
            Strategy::RandomReshuffling => "rr",
            Strategy::SymmetricMinibatch => "sms",
            Strategy::IncrementalGradient => "ig",
            Strategy::ShuffleOnce => "so",
        }
    }

    /// Epochs that must run together for the strategy to be well defined.
    pub fn epochs_per_period(self) -> usize {
        match self {
            Strategy::SymmetricMinibatch => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.short_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown strategy {s:?} (expected rm|rr|sms|ig|so)")))
    }
}

/// How the short final batch of a ragged epoch is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RaggedWeighting {
    /// Weight `n_R / n`; keeps the epoch-sum identity.
    #[default]
    Proportional,
    /// Plain average over the short batch. Breaks the epoch-sum identity and
    /// exists to demonstrate the resulting loss of order.
    Unit,
}

/// `rows x cols` matrix of distinct indices into `0..N`, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl BatchMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

/// Draws the first `k` entries of a uniformly random arrangement of `pool`
/// into `pool[..k]` (partial Fisher-Yates). Any prior arrangement of `pool` is
/// fine.
#[inline]
fn partial_shuffle(pool: &mut [usize], k: usize, rng: &mut RngStream) {
    let len = pool.len();
    for j in 0..k {
        let pick = j + rng.index(len - j);
        pool.swap(j, pick);
    }
}

/// Samples an `m x n` batch matrix of distinct indices from `0..N`.
pub fn sample_batch_matrix(
    n_total: usize,
    batch_size: usize,
    rows: usize,
    rng: &mut RngStream,
) -> Result<BatchMatrix> {
    let needed = batch_size * rows;
    if batch_size == 0 || needed > n_total {
        return Err(Error::Size {
            requested: needed,
            available: n_total,
        });
    }
    let mut pool: Vec<usize> = (0..n_total).collect();
    partial_shuffle(&mut pool, needed, rng);
    pool.truncate(needed);
    Ok(BatchMatrix {
        rows,
        cols: batch_size,
        entries: pool,
    })
}

/// One minibatch: its indices and the scale applied to its mean gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Batch<'a> {
    pub indices: &'a [usize],
    pub weight: f64,
}

/// Per-iteration batch stream for one strategy.
#[derive(Debug, Clone)]
pub struct ScheduleState {
    strategy: Strategy,
    n_total: usize,
    batch_size: usize,
    batches_per_epoch: usize,
    weighting: RaggedWeighting,
    phase: usize,
    sampled: bool,
    // For RM: scratch permutation whose prefix is the current batch.
    // Otherwise: the current ordering of 0..N, split row-wise into batches.
    order: Vec<usize>,
}

impl ScheduleState {
    pub fn new(strategy: Strategy, n_total: usize, batch_size: usize) -> Result<Self> {
        if n_total == 0 || batch_size == 0 || batch_size > n_total {
            return Err(Error::Config(format!(
                "batch size {batch_size} must lie in 1..={n_total}"
            )));
        }
        Ok(Self {
            strategy,
            n_total,
            batch_size,
            batches_per_epoch: n_total.div_ceil(batch_size),
            weighting: RaggedWeighting::Proportional,
            phase: 0,
            sampled: false,
            order: (0..n_total).collect(),
        })
    }

    pub fn with_weighting(mut self, weighting: RaggedWeighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    /// `R = ceil(N / n)`.
    pub fn batches_per_epoch(&self) -> usize {
        self.batches_per_epoch
    }

    /// Iteration counter within the current resampling period.
    pub fn phase(&self) -> usize {
        self.phase
    }

    fn period(&self) -> usize {
        match self.strategy {
            Strategy::RobbinsMonro => 1,
            Strategy::SymmetricMinibatch => 2 * self.batches_per_epoch,
            _ => self.batches_per_epoch,
        }
    }

    fn row_bounds(&self, row: usize) -> (usize, usize) {
        let start = row * self.batch_size;
        (start, (start + self.batch_size).min(self.n_total))
    }

    fn resample(&mut self, rng: &mut RngStream) {
        let n = self.n_total;
        partial_shuffle(&mut self.order, n.saturating_sub(1), rng);
    }

    pub fn next_batch(&mut self, rng: &mut RngStream) -> Batch<'_> {
        let r = self.batches_per_epoch;
        let phase = self.phase;
        self.phase = (phase + 1) % self.period();

        let row = match self.strategy {
            Strategy::RobbinsMonro => {
                partial_shuffle(&mut self.order, self.batch_size, rng);
                return Batch {
                    indices: &self.order[..self.batch_size],
                    weight: 1.0,
                };
            }
            Strategy::RandomReshuffling => {
                if phase == 0 {
                    self.resample(rng);
                }
                phase
            }
            Strategy::SymmetricMinibatch => {
                if phase == 0 {
                    self.resample(rng);
                }
                if phase < r {
                    phase
                } else {
                    2 * r - 1 - phase
                }
            }
            Strategy::IncrementalGradient => phase,
            Strategy::ShuffleOnce => {
                if !self.sampled {
                    self.resample(rng);
                    self.sampled = true;
                }
                phase
            }
        };
        let (start, end) = self.row_bounds(row);
        let weight = match self.weighting {
            RaggedWeighting::Proportional => (end - start) as f64 / self.batch_size as f64,
            RaggedWeighting::Unit => 1.0,
        };
        Batch {
            indices: &self.order[start..end],
            weight,
        }
    }
}
