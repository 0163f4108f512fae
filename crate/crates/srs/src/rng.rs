//! Seeded, platform-independent random number generation.
//!
//! The generator is xoshiro256++ (Blackman & Vigna), seeded through the
//! splitmix64 expander. Both algorithms are specified in terms of 64-bit
//! integer arithmetic only, so identical seeds produce identical streams on
//! every platform. Independent child streams are derived from
//! `(seed, stream index)` so that work distributed over threads stays
//! reproducible regardless of scheduling.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const TWO_POW_53: f64 = 9_007_199_254_740_992.0;

/// splitmix64 output finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn splitmix_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    mix64(*state)
}

/// Derive the key of the `index`-th child stream of a stream keyed by `key`.
///
/// Exposed so callers that only track integer seeds (e.g. config files) can
/// compute the seed a nested component will observe.
#[inline]
pub fn derive_stream_key(key: u64, index: u64) -> u64 {
    mix64(key.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// A seeded xoshiro256++ stream with derivable child streams.
#[derive(Debug, Clone)]
pub struct RandomSource {
    key: u64,
    state: [u64; 4],
}

impl RandomSource {
    /// Root stream for a 64-bit seed.
    pub fn new(seed: u64) -> Self {
        Self::from_key(seed)
    }

    fn from_key(key: u64) -> Self {
        let mut sm = key;
        let mut state = [0u64; 4];
        for word in &mut state {
            *word = splitmix_next(&mut sm);
        }
        // xoshiro cannot leave the all-zero state; unreachable for splitmix
        // output but guarded anyway.
        if state == [0; 4] {
            state[0] = GOLDEN_GAMMA;
        }
        RandomSource { key, state }
    }

    /// Key identifying this stream within the derivation tree.
    pub fn key(&self) -> u64 {
        self.key
    }

    /// Independent child stream indexed by `index`.
    ///
    /// Children of distinct `(key, index)` pairs are statistically
    /// independent streams; deriving the same index twice yields the same
    /// stream, which is what makes fan-out over threads reproducible.
    pub fn child(&self, index: u64) -> Self {
        Self::from_key(derive_stream_key(self.key, index))
    }

    /// Next 64 uniform bits.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0].wrapping_add(s[3]).rotate_left(23).wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform real strictly inside (0, 1) on a 53-bit grid.
    ///
    /// The open interval guarantees tie-break comparisons `u_k < u_0` are
    /// almost-surely strict and never degenerate at the endpoints.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / TWO_POW_53)
    }

    /// Unbiased uniform integer in `[0, n)` (Lemire's method).
    #[inline]
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let mut m = (self.next_u64() as u128).wrapping_mul(n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.next_u64() as u128).wrapping_mul(n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Fair coin.
    #[inline]
    pub fn next_bool(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}
