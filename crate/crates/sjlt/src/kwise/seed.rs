//! Deterministic seed-derivation streams.
//!
//! Every random choice in the crate flows through a [`SeedStream`]: a bit
//! stream derived from a 64-bit master seed plus a path of integer labels
//! naming the consumer (construction, column, purpose, trial index). A
//! (master, path) pair always replays the same bits, so trials can be
//! evaluated in any order or split across threads without changing results.

const GOLDEN: u64 = 0x9e3779b97f4a7c15;
const ROOT_TWEAK: u64 = 0x6a09e667f3bcc909;
const LABEL_TWEAK: u64 = 0xd1b54a32d192ed03;

/// splitmix64 finalizer: full-avalanche 64-bit mix.
#[inline]
pub(crate) fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    x ^= x >> 31;
    x
}

#[derive(Debug, Clone)]
pub struct SeedStream {
    master: u64,
    path: Vec<u64>,
    root: u64,
    counter: u64,
    buffer: u64,
    buffer_bits: u32,
    bits_consumed: u64,
}

impl SeedStream {
    pub fn new(master: u64) -> Self {
        SeedStream {
            master,
            path: Vec::new(),
            root: mix64(master ^ ROOT_TWEAK),
            counter: 0,
            buffer: 0,
            buffer_bits: 0,
            bits_consumed: 0,
        }
    }

    pub fn with_path(master: u64, path: &[u64]) -> Self {
        let mut s = SeedStream::new(master);
        for &label in path {
            s = s.child(label);
        }
        s
    }

    /// Derives the stream for `path + [label]`, positioned at bit 0.
    pub fn child(&self, label: u64) -> Self {
        let mut path = self.path.clone();
        path.push(label);
        SeedStream {
            master: self.master,
            path,
            root: mix64(self.root ^ mix64(label ^ LABEL_TWEAK)),
            counter: 0,
            buffer: 0,
            buffer_bits: 0,
            bits_consumed: 0,
        }
    }

    /// Collapses `(master, path)` to a single 64-bit sub-seed.
    pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
        SeedStream::with_path(master, path).next_u64()
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Total bits handed out so far.
    pub fn bits_consumed(&self) -> u64 {
        self.bits_consumed
    }

    #[inline]
    fn next_block(&mut self) -> u64 {
        self.counter += 1;
        mix64(self.root.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Consumes exactly `n` bits (1 <= n <= 64), low bits first.
    pub fn next_bits(&mut self, n: u32) -> u64 {
        assert!(n >= 1 && n <= 64, "bit request must be in 1..=64");
        let out;
        if self.buffer_bits >= n {
            out = self.buffer & mask(n);
            self.buffer = shr64(self.buffer, n);
            self.buffer_bits -= n;
        } else {
            let have = self.buffer_bits;
            let need = n - have;
            let fresh = self.next_block();
            out = self.buffer | ((fresh & mask(need)) << have);
            self.buffer = shr64(fresh, need);
            self.buffer_bits = 64 - need;
        }
        self.bits_consumed += n as u64;
        out
    }

    pub fn next_u64(&mut self) -> u64 {
        self.next_bits(64)
    }

    /// Uniform value in `[0, m)` by rejection from the next power of two.
    pub fn next_below(&mut self, m: usize) -> usize {
        assert!(m >= 1);
        if m == 1 {
            return 0;
        }
        let bits = usize::BITS - (m - 1).leading_zeros();
        loop {
            let v = self.next_bits(bits) as usize;
            if v < m {
                return v;
            }
        }
    }
}

#[inline]
fn mask(n: u32) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn shr64(v: u64, n: u32) -> u64 {
    if n == 64 {
        0
    } else {
        v >> n
    }
}

/// Samples an ordered `s`-subset of `[0, k)` without replacement
/// (partial Fisher-Yates driven by the stream).
pub fn sample_distinct_rows(
    stream: &mut SeedStream,
    s: usize,
    k: usize,
) -> crate::error::Result<Vec<usize>> {
    if s > k {
        return Err(crate::error::Error::invalid(format!(
            "cannot draw {s} distinct rows from a range of {k}"
        )));
    }
    let mut arr: Vec<usize> = (0..k).collect();
    for j in 0..s {
        let idx = j + stream.next_below(k - j);
        arr.swap(j, idx);
    }
    arr.truncate(s);
    Ok(arr)
}
