//! Two-dimensional Sobol sequence in Gray-code order, optionally with a
//! random linear matrix scramble and digital shift.

use rand::Rng;

const BITS: usize = 32;

/// Direction numbers for the first two dimensions of the Joe–Kuo
/// `new-joe-kuo-6.21201` table: dimension 1 is van der Corput, dimension 2
/// uses the primitive polynomial `x + 1` with `m₁ = 1`.
fn direction_numbers() -> [[u32; BITS]; 2] {
    let mut v = [[0u32; BITS]; 2];
    for k in 0..BITS {
        v[0][k] = 1 << (31 - k);
    }
    v[1][0] = 1 << 31;
    for k in 1..BITS {
        v[1][k] = v[1][k - 1] ^ (v[1][k - 1] >> 1);
    }
    v
}

/// Iterator over raw 32-bit Sobol points.
#[derive(Clone, Debug)]
pub struct Sobol2d {
    v: [[u32; BITS]; 2],
    index: u64,
    x: [u32; 2],
}

impl Sobol2d {
    /// Starts at sequence index `start` (index 0 is the origin).
    pub fn starting_at(start: u64) -> Self {
        Self::with_directions(direction_numbers(), start)
    }

    fn with_directions(v: [[u32; BITS]; 2], start: u64) -> Self {
        let gray = start ^ (start >> 1);
        let mut x = [0u32; 2];
        for k in 0..BITS {
            if (gray >> k) & 1 == 1 {
                x[0] ^= v[0][k];
                x[1] ^= v[1][k];
            }
        }
        Self { v, index: start, x }
    }

    /// Current point as integers scaled by `2³²`.
    pub fn current(&self) -> [u32; 2] {
        self.x
    }

    pub fn advance(&mut self) {
        let c = self.index.trailing_ones() as usize;
        assert!(c < BITS, "Sobol sequence exhausted");
        self.x[0] ^= self.v[0][c];
        self.x[1] ^= self.v[1][c];
        self.index += 1;
    }
}

#[inline]
pub(crate) fn to_unit(x: u32) -> f64 {
    f64::from(x) * (1.0 / 4_294_967_296.0)
}

/// `count` points in `[0, 1)²` at sequence indices `skip + 1 ..= skip + count`;
/// the all-zero point at index 0 is never returned.
pub fn sobol_2d(count: usize, skip: u64) -> Vec<[f64; 2]> {
    sobol_2d_bits(count, skip)
        .into_iter()
        .map(|[a, b]| [to_unit(a), to_unit(b)])
        .collect()
}

pub(crate) fn sobol_2d_bits(count: usize, skip: u64) -> Vec<[u32; 2]> {
    collect(Sobol2d::starting_at(skip + 1), count)
}

/// `y = L x`, with `L` a random lower-triangular binary matrix with unit
/// diagonal acting on the bits of `x` from the most significant down, so
/// every output bit mixes in the more significant input bits. Being linear
/// over GF(2), it can be applied to the direction numbers once.
fn scramble_directions<R: Rng>(v: &mut [[u32; BITS]; 2], rng: &mut R) {
    for dim in v.iter_mut() {
        let rows: [u32; BITS] = std::array::from_fn(|i| {
            let above = if i == 0 { 0 } else { u32::MAX << (BITS - i) };
            (rng.gen::<u32>() & above) | (1 << (BITS - 1 - i))
        });
        for d in dim.iter_mut() {
            let x = *d;
            *d = rows
                .iter()
                .enumerate()
                .fold(0, |y, (i, row)| y | (((row & x).count_ones() & 1) << (BITS - 1 - i)));
        }
    }
}

/// Points `1..=count` of a linearly scrambled and digitally shifted Sobol
/// sequence drawn from `rng`.
pub(crate) fn scrambled_sobol_2d_bits<R: Rng>(count: usize, rng: &mut R) -> Vec<[u32; 2]> {
    let mut v = direction_numbers();
    scramble_directions(&mut v, rng);
    let shift: [u32; 2] = [rng.gen(), rng.gen()];
    collect(Sobol2d::with_directions(v, 1), count)
        .into_iter()
        .map(|[a, b]| [a ^ shift[0], b ^ shift[1]])
        .collect()
}

fn collect(mut gen: Sobol2d, count: usize) -> Vec<[u32; 2]> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        if i > 0 {
            gen.advance();
        }
        out.push(gen.current());
    }
    out
}
