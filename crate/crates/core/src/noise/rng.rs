//! Counter-based random streams.
//!
//! Every draw is a pure function of `(master_seed, stream_id, counter)`: the
//! pair `(master_seed, stream_id)` is hashed into a Philox-4x32-10 key and the
//! 128-bit counter is encrypted. Simulation code addresses draws as
//! `(step, lane, index)` so that shell `n` at step `k` sees the same numbers
//! whatever the truncation level or the thread that runs the path.

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

pub const LANE_WIENER: u32 = 0;
pub const LANE_JUMP_COUNT: u32 = 1;
pub const LANE_JUMP_TIME: u32 = 2;
pub const LANE_JUMP_MARK: u32 = 3;
/// Lane used by the sequential cursor (`next_*`).
pub const LANE_SEQUENTIAL: u32 = 0xFFFF_FFFF;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = a as u64 * b as u64;
    ((p >> 32) as u32, p as u32)
}

/// Philox-4x32 with 10 rounds.
pub fn philox4x32_10(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut ctr = counter;
    let mut key = key;
    for round in 0..10 {
        if round > 0 {
            key[0] = key[0].wrapping_add(PHILOX_W0);
            key[1] = key[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0];
    }
    ctr
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Packs a structured draw address into a 128-bit counter.
#[inline]
pub fn address(step: u64, lane: u32, index: u32) -> u128 {
    ((step as u128) << 64) | ((lane as u128) << 32) | index as u128
}

#[inline]
fn to_unit_open(hi: u32, lo: u32) -> f64 {
    let bits = (((hi as u64) << 32) | lo as u64) >> 11;
    (bits as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    counter: u128,
    key: [u32; 2],
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let k = splitmix64(master_seed ^ splitmix64(stream_id.wrapping_add(0x5851_F42D_4C95_7F2D)));
        Self { master_seed, stream_id, counter: 0, key: [k as u32, (k >> 32) as u32] }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn counter(&self) -> u128 {
        self.counter
    }

    /// Same master seed, another stream.
    pub fn with_stream(&self, stream_id: u64) -> Self {
        Self::new(self.master_seed, stream_id)
    }

    /// Derived stream for a named sub-purpose; independent of `with_stream` ids.
    pub fn derive(&self, tag: u64) -> Self {
        Self::new(self.master_seed ^ splitmix64(tag ^ 0xA076_1D64_78BD_642F), self.stream_id)
    }

    pub fn block_at(&self, counter: u128) -> [u32; 4] {
        let c = [counter as u32, (counter >> 32) as u32, (counter >> 64) as u32, (counter >> 96) as u32];
        philox4x32_10(c, self.key)
    }

    /// Two uniforms in the open interval (0, 1).
    pub fn uniforms_at(&self, counter: u128) -> (f64, f64) {
        let b = self.block_at(counter);
        (to_unit_open(b[0], b[1]), to_unit_open(b[2], b[3]))
    }

    /// Two independent standard normals (Box-Muller).
    pub fn normals_at(&self, counter: u128) -> (f64, f64) {
        let (u1, u2) = self.uniforms_at(counter);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        (r * c, r * s)
    }

    fn sequential_address(&mut self) -> u128 {
        let c = self.counter;
        self.counter += 1;
        address((c >> 32) as u64, LANE_SEQUENTIAL, c as u32)
    }

    pub fn next_uniforms(&mut self) -> (f64, f64) {
        let a = self.sequential_address();
        self.uniforms_at(a)
    }

    pub fn next_uniform(&mut self) -> f64 {
        self.next_uniforms().0
    }

    pub fn next_normals(&mut self) -> (f64, f64) {
        let a = self.sequential_address();
        self.normals_at(a)
    }

    pub fn next_normal(&mut self) -> f64 {
        self.next_normals().0
    }
}
