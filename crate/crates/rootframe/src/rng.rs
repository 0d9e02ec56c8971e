//! Seeded draws for separating functionals and test fixtures.
//!
//! A 64-bit splitmix state walk: tiny, dependency-free, and reproducible from
//! the seed alone. Gaussians come from the Marsaglia polar transform, which
//! needs only arithmetic, `ln` and `sqrt`.

use nalgebra::DVector;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of mantissa.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw (polar method; the spare value is discarded).
    pub fn next_gaussian(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Uniform direction on the unit sphere of `R^dim`.
    pub fn unit_vector(&mut self, dim: usize) -> DVector<f64> {
        loop {
            let v = DVector::from_fn(dim, |_, _| self.next_gaussian());
            let norm = v.norm();
            if norm > 1e-6 {
                return v / norm;
            }
        }
    }
}
