//! Counter-based random streams keyed by `(domain, seed, replicate, row, column)`.
//!
//! Each matrix row owns a ChaCha8 stream; column `j` is the `j`-th 64-bit word
//! of that stream. A value therefore depends only on its coordinates, never on
//! the order in which entries are visited.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Separates the streams of unrelated samplers sharing a user seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Domain {
    MatrixEntries = 1,
    GraphEdges = 2,
    GraphFill = 3,
    Trial = 4,
}

#[derive(Clone, Debug)]
pub struct EntryStream {
    key: [u8; 32],
}

impl EntryStream {
    pub fn new(domain: Domain, seed: u64, replicate: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&replicate.to_le_bytes());
        key[16] = domain as u8;
        key[24..32].copy_from_slice(b"rmtlab\0\x01");
        EntryStream { key }
    }

    /// Cursor over row `i`, positioned at column `j`.
    pub fn cursor(&self, i: usize, j: usize) -> RowCursor {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(i as u64);
        rng.set_word_pos(2 * j as u128);
        RowCursor { rng }
    }

    /// Uniform in `[0, 1)` for entry `(i, j)`; random access.
    pub fn uniform(&self, i: usize, j: usize) -> f64 {
        self.cursor(i, j).next_uniform()
    }
}

pub struct RowCursor {
    rng: ChaCha8Rng,
}

impl RowCursor {
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Plain sequential generator for randomized trials and test fixtures.
pub struct TrialRng(ChaCha8Rng);

impl TrialRng {
    pub fn new(seed: u64) -> Self {
        TrialRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `[lo, hi)`.
    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo) as u64) as usize
    }
}
