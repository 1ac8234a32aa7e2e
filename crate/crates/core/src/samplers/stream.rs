use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Source of uniform choices. Every randomised routine in this crate draws
/// through `below`, so the same code runs on a seeded stream or under an
/// exhaustive enumeration of its choice points.
pub trait Chooser {
    /// Uniform integer in `0..n`; `n >= 1`.
    fn below(&mut self, n: u64) -> u64;
}

/// Seeded ChaCha8 stream. `(master_seed, stream)` pairs give independent
/// sequences and identical pairs replay identically.
#[derive(Clone, Debug)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    master_seed: u64,
    stream: u64,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream);
        Self {
            rng,
            master_seed,
            stream,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Uniform float in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

impl Chooser for RandomStream {
    fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n >= 1);
        self.rng.random_range(0..n)
    }
}

/// Walks every sequence of choices of a randomised procedure, like an
/// odometer, and reports the probability of the current path.
///
/// ```
/// use fringe_core::samplers::{Chooser, ExhaustiveChooser};
/// let mut ex = ExhaustiveChooser::new();
/// let mut outcomes = Vec::new();
/// loop {
///     let a = ex.below(2);
///     let b = if a == 0 { ex.below(3) } else { 0 };
///     outcomes.push(((a, b), ex.path_probability()));
///     if !ex.advance() { break; }
/// }
/// assert_eq!(outcomes.len(), 4);
/// assert_eq!(outcomes[3], ((1, 0), 0.5));
/// ```
#[derive(Clone, Debug, Default)]
pub struct ExhaustiveChooser {
    path: Vec<(u64, u64)>,
    cursor: usize,
}

impl ExhaustiveChooser {
    pub fn new() -> Self {
        Self::default()
    }

    /// Moves to the next path; `false` once every path has been visited.
    pub fn advance(&mut self) -> bool {
        self.cursor = 0;
        while let Some((taken, n)) = self.path.pop() {
            if taken + 1 < n {
                self.path.push((taken + 1, n));
                return true;
            }
        }
        false
    }

    /// Probability of the path taken since the last `advance`.
    pub fn path_probability(&self) -> f64 {
        self.path[..self.cursor]
            .iter()
            .map(|&(_, n)| 1.0 / n as f64)
            .product()
    }

    /// The same probability as a `(numerator, denominator)` pair.
    pub fn path_weight(&self) -> (u64, u128) {
        (1, self.path[..self.cursor].iter().map(|&(_, n)| n as u128).product())
    }
}

impl Chooser for ExhaustiveChooser {
    fn below(&mut self, n: u64) -> u64 {
        assert!(n >= 1);
        let out = if self.cursor < self.path.len() {
            let (taken, recorded) = self.path[self.cursor];
            assert_eq!(recorded, n, "procedure is not deterministic given its choices");
            taken
        } else {
            self.path.push((0, n));
            0
        };
        self.cursor += 1;
        out
    }
}

/// Uniform in-place shuffle.
pub fn shuffle<T, C: Chooser + ?Sized>(items: &mut [T], chooser: &mut C) {
    for i in (1..items.len()).rev() {
        let j = chooser.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}
