//! Reproducible random streams: ChaCha8 keyed by the master seed, with the
//! replica index selecting an independent stream of the counter-based core.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId {
    pub master: u64,
    pub replica: u64,
}

impl StreamId {
    pub fn new(master: u64, replica: u64) -> Self {
        Self { master, replica }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.replica);
        rng
    }
}
