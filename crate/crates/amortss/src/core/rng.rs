use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible, splittable random stream.
///
/// Identical `(seed, stream_id)` pairs produce identical draw sequences;
/// distinct stream ids map to independent ChaCha streams, so parallel
/// workers can each own a child stream without coordination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn root(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derive an independent child stream. Children of distinct salts, and
    /// grandchildren through different paths, land on distinct streams.
    pub fn child(&self, salt: u64) -> Self {
        let mixed = splitmix64(self.stream_id ^ splitmix64(salt.wrapping_add(0xA5A5_5A5A_0F0F_F0F0)));
        Self {
            seed: self.seed,
            stream_id: mixed,
        }
    }

    /// Instantiate the generator at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
