//! Limited-independence hashing substrate: deterministic seed streams,
//! binary extension fields, and t-wise independent polynomial hashes.

pub mod field;
pub mod hash;
pub mod seed;

pub use field::{gf_add, gf_mul, FieldSpec};
pub use hash::{sample_kwise_hash, KWiseHash};
pub use seed::{sample_distinct_rows, SeedStream};
