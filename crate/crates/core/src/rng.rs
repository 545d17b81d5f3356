use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Seed for every stochastic step. Identical seeds and parameters give
/// bit-identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Sub-seed for a named role. Derived by hashing, so adding roles never
    /// shifts the streams of existing ones.
    pub fn derive(self, role: &str) -> RngSeed {
        let mut h = Sha256::new();
        h.update(self.0.to_le_bytes());
        h.update(role.as_bytes());
        let digest = h.finalize();
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        RngSeed(u64::from_le_bytes(bytes))
    }

    pub fn derive_index(self, role: &str, index: u64) -> RngSeed {
        self.derive(&format!("{role}#{index}"))
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}
