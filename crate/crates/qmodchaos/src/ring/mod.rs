//! Classical modular-arithmetic engine: the ring `R(M)` of integers modulo
//! `M`, the IIR encoder / FIR decoder pair, the zero-input oscillator, and
//! the sequence-analysis routines used by the experiment harness.
//!
//! Everything in this module is pure and exact; it is the reference oracle
//! the quantum circuits are validated against.

mod analysis;
mod io;

pub use analysis::{autocorrelation, detect_period, orbit_period, scalar_period, OrbitInfo};
pub use io::{
    format_config, format_series, parse_config, parse_series, read_config, read_series,
    write_config, write_series,
};

use thiserror::Error;

/// Unsigned residue in `[0, M-1]`.
pub type Residue = u64;

/// Errors produced by the classical ring layer.
#[derive(Debug, Error)]
pub enum RingError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("modulus {0} exceeds the supported bound of 2^32")]
    ModulusTooLarge(u64),
    #[error("residue {value} out of range for modulus {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("filter order must be at least 1")]
    ZeroOrder,
    #[error("coefficient count {coeffs} does not match initial-condition count {ics}")]
    OrderMismatch { coeffs: usize, ics: usize },
    #[error("signed value {value} outside dynamic range [{lo}, {hi}]")]
    SignedOutOfRange { value: i64, lo: i64, hi: i64 },
    #[error("series is empty")]
    EmptySeries,
    #[error("max lag {max_lag} must be smaller than series length {len}")]
    LagTooLarge { max_lag: usize, len: usize },
    #[error("autocorrelation of a constant series is undefined (zero variance)")]
    ZeroVariance,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A modulus `M >= 2`. Bounded to `2^32` so residue products never overflow
/// the `u64` they are computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

impl Modulus {
    /// Largest supported modulus.
    pub const MAX: u64 = 1 << 32;

    pub fn new(value: u64) -> Result<Self, RingError> {
        if value < 2 {
            return Err(RingError::ModulusTooSmall(value));
        }
        if value > Self::MAX {
            return Err(RingError::ModulusTooLarge(value));
        }
        Ok(Modulus(value))
    }

    /// The modulus `2^n`. Quantum circuits operate only on these.
    pub fn power_of_two(n: u32) -> Result<Self, RingError> {
        if n == 0 || n > 32 {
            return Err(RingError::ModulusTooSmall(1));
        }
        Ok(Modulus(1u64 << n))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// True iff `M = 2^n` for some `n >= 1`; the only case the quantum
    /// modules accept.
    pub fn is_power_of_two(self) -> bool {
        self.0.is_power_of_two()
    }

    /// Bit width `n` when `M = 2^n`.
    pub fn bits(self) -> Option<u32> {
        self.is_power_of_two().then(|| self.0.trailing_zeros())
    }

    fn check(self, value: Residue) -> Result<Residue, RingError> {
        if value < self.0 {
            Ok(value)
        } else {
            Err(RingError::ResidueOutOfRange {
                value,
                modulus: self.0,
            })
        }
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Filter order, modulus, coefficient vector and initial conditions: the
/// complete key material of an order-`N` modular IIR section.
///
/// Indexing convention: `initial_conditions[i-1]` holds `x[-i]`, i.e. the
/// first entry is the most recent pre-history sample. The quantum harness
/// uses the same convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    modulus: Modulus,
    coefficients: Vec<Residue>,
    initial_conditions: Vec<Residue>,
}

impl FilterConfig {
    pub fn new(
        modulus: Modulus,
        coefficients: Vec<Residue>,
        initial_conditions: Vec<Residue>,
    ) -> Result<Self, RingError> {
        if coefficients.is_empty() {
            return Err(RingError::ZeroOrder);
        }
        if coefficients.len() != initial_conditions.len() {
            return Err(RingError::OrderMismatch {
                coeffs: coefficients.len(),
                ics: initial_conditions.len(),
            });
        }
        for &c in coefficients.iter().chain(initial_conditions.iter()) {
            modulus.check(c)?;
        }
        Ok(FilterConfig {
            modulus,
            coefficients,
            initial_conditions,
        })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coefficients(&self) -> &[Residue] {
        &self.coefficients
    }

    pub fn initial_conditions(&self) -> &[Residue] {
        &self.initial_conditions
    }

    /// `x[k-i]` given the outputs `produced[0..k]` so far, falling back to
    /// the initial conditions for `k - i < 0`.
    fn history(&self, produced: &[Residue], k: usize, i: usize) -> Residue {
        if k >= i {
            produced[k - i]
        } else {
            self.initial_conditions[i - k - 1]
        }
    }
}

/// An ordered run of residues sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSeries {
    modulus: Modulus,
    samples: Vec<Residue>,
}

impl TimeSeries {
    pub fn new(modulus: Modulus, samples: Vec<Residue>) -> Result<Self, RingError> {
        for &s in &samples {
            modulus.check(s)?;
        }
        Ok(TimeSeries { modulus, samples })
    }

    pub fn zeros(modulus: Modulus, len: usize) -> Self {
        TimeSeries {
            modulus,
            samples: vec![0; len],
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn samples(&self) -> &[Residue] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// The signed dynamic range that maps bijectively onto the legitimate range
/// `[0, M-1]`: `[-(M-1)/2, (M-1)/2]` for odd `M`, `[-M/2, M/2 - 1]` for even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedRange {
    modulus: Modulus,
    lo: i64,
    hi: i64,
}

impl SignedRange {
    pub fn new(modulus: Modulus) -> Self {
        let m = modulus.value() as i64;
        let (lo, hi) = if m % 2 == 0 {
            (-m / 2, m / 2 - 1)
        } else {
            (-(m - 1) / 2, (m - 1) / 2)
        };
        SignedRange { modulus, lo, hi }
    }

    pub fn lo(self) -> i64 {
        self.lo
    }

    pub fn hi(self) -> i64 {
        self.hi
    }

    pub fn contains(self, s: i64) -> bool {
        self.lo <= s && s <= self.hi
    }
}

/// `(a + b) mod M`.
pub fn mod_add(a: Residue, b: Residue, m: Modulus) -> Result<Residue, RingError> {
    let a = m.check(a)?;
    let b = m.check(b)?;
    Ok((a + b) % m.value())
}

/// `(a - b) mod M`.
pub fn mod_sub(a: Residue, b: Residue, m: Modulus) -> Result<Residue, RingError> {
    let a = m.check(a)?;
    let b = m.check(b)?;
    Ok((a + m.value() - b) % m.value())
}

/// `(a * b) mod M`. Safe from overflow for every supported modulus because
/// `(2^32 - 1)^2 < 2^64`.
pub fn mod_mul(a: Residue, b: Residue, m: Modulus) -> Result<Residue, RingError> {
    let a = m.check(a)?;
    let b = m.check(b)?;
    Ok((a * b) % m.value())
}

/// IIR encoder: `x[k] = < u[k] + sum_i w_i x[k-i] >_M`, seeded by the
/// configured initial conditions. Output length equals input length.
pub fn encode(cfg: &FilterConfig, u: &TimeSeries) -> Result<TimeSeries, RingError> {
    if u.modulus() != cfg.modulus() {
        return Err(RingError::ModulusMismatch {
            left: cfg.modulus().value(),
            right: u.modulus().value(),
        });
    }
    let m = cfg.modulus().value();
    let mut out = Vec::with_capacity(u.len());
    for (k, &uk) in u.samples().iter().enumerate() {
        let mut acc = uk;
        for i in 1..=cfg.order() {
            let term = cfg.coefficients[i - 1] * cfg.history(&out, k, i) % m;
            acc = (acc + term) % m;
        }
        out.push(acc);
    }
    Ok(TimeSeries {
        modulus: cfg.modulus(),
        samples: out,
    })
}

/// FIR decoder: `u~[k] = < x~[k] - sum_i w_i x~[k-i] >_M`. The delay line is
/// fed by the received samples themselves; indices before the first received
/// sample fall back to the configured initial conditions, mirroring the
/// encoder, so `decode(encode(u)) == u`.
pub fn decode(cfg: &FilterConfig, x: &TimeSeries) -> Result<TimeSeries, RingError> {
    if x.modulus() != cfg.modulus() {
        return Err(RingError::ModulusMismatch {
            left: cfg.modulus().value(),
            right: x.modulus().value(),
        });
    }
    let m = cfg.modulus().value();
    let mut out = Vec::with_capacity(x.len());
    for (k, &xk) in x.samples().iter().enumerate() {
        let mut sum = 0;
        for i in 1..=cfg.order() {
            let term = cfg.coefficients[i - 1] * cfg.history(x.samples(), k, i) % m;
            sum = (sum + term) % m;
        }
        out.push((xk + m - sum) % m);
    }
    Ok(TimeSeries {
        modulus: cfg.modulus(),
        samples: out,
    })
}

/// Zero-input response of the oscillator: `length` samples of
/// `x[k] = < sum_i w_i x[k-i] >_M` driven purely by the initial conditions.
pub fn zero_input_response(cfg: &FilterConfig, length: usize) -> TimeSeries {
    let zeros = TimeSeries::zeros(cfg.modulus(), length);
    encode(cfg, &zeros).expect("zero input shares the config modulus")
}

/// Residue -> signed dynamic range. For even `M` the upper half
/// `[M/2, M-1]` maps onto `[-M/2, -1]`; for odd `M` the upper half
/// `[(M+1)/2, M-1]` maps onto `[-(M-1)/2, -1]`.
pub fn to_signed(a: Residue, m: Modulus) -> Result<i64, RingError> {
    m.check(a)?;
    let range = SignedRange::new(m);
    let a = a as i64;
    Ok(if a <= range.hi() {
        a
    } else {
        a - m.value() as i64
    })
}

/// Signed dynamic range -> residue; inverse of [`to_signed`].
pub fn from_signed(s: i64, m: Modulus) -> Result<Residue, RingError> {
    let range = SignedRange::new(m);
    if !range.contains(s) {
        return Err(RingError::SignedOutOfRange {
            value: s,
            lo: range.lo(),
            hi: range.hi(),
        });
    }
    Ok(if s >= 0 {
        s as u64
    } else {
        (s + m.value() as i64) as u64
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m16() -> Modulus {
        Modulus::new(16).unwrap()
    }

    fn cfg(m: u64, w: &[u64], ic: &[u64]) -> FilterConfig {
        FilterConfig::new(Modulus::new(m).unwrap(), w.to_vec(), ic.to_vec()).unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(2).is_ok());
        assert!(Modulus::new(Modulus::MAX).is_ok());
        assert!(Modulus::new(Modulus::MAX + 1).is_err());
        assert!(m16().is_power_of_two());
        assert_eq!(m16().bits(), Some(4));
        assert!(!Modulus::new(17).unwrap().is_power_of_two());
        assert_eq!(Modulus::new(17).unwrap().bits(), None);
        assert_eq!(Modulus::power_of_two(4).unwrap().value(), 16);
    }

    #[test]
    fn mod_add_examples() {
        assert_eq!(mod_add(13, 3, m16()).unwrap(), 0);
        assert_eq!(mod_add(0, 9, m16()).unwrap(), 9);
        assert_eq!(mod_add(15, 15, m16()).unwrap(), 14);
        assert!(mod_add(16, 0, m16()).is_err());
    }

    #[test]
    fn mod_mul_examples() {
        assert_eq!(mod_mul(3, 13, m16()).unwrap(), 7);
        assert_eq!(mod_mul(1, 11, m16()).unwrap(), 11);
        assert_eq!(mod_mul(2, 5, m16()).unwrap(), 10);
        assert!(mod_mul(3, 16, m16()).is_err());
    }

    #[test]
    fn ring_laws_exhaustive_small_moduli() {
        for mv in 2..=32u64 {
            let m = Modulus::new(mv).unwrap();
            for a in 0..mv {
                for b in 0..mv {
                    assert_eq!(
                        mod_add(a, b, m).unwrap(),
                        mod_add(b, a, m).unwrap(),
                        "add commutes mod {mv}"
                    );
                    assert_eq!(
                        mod_mul(a, b, m).unwrap(),
                        mod_mul(b, a, m).unwrap(),
                        "mul commutes mod {mv}"
                    );
                    for c in 0..mv {
                        let ab_c = mod_add(mod_add(a, b, m).unwrap(), c, m).unwrap();
                        let a_bc = mod_add(a, mod_add(b, c, m).unwrap(), m).unwrap();
                        assert_eq!(ab_c, a_bc, "add associates mod {mv}");
                        let ab_c = mod_mul(mod_mul(a, b, m).unwrap(), c, m).unwrap();
                        let a_bc = mod_mul(a, mod_mul(b, c, m).unwrap(), m).unwrap();
                        assert_eq!(ab_c, a_bc, "mul associates mod {mv}");
                        let lhs = mod_mul(a, mod_add(b, c, m).unwrap(), m).unwrap();
                        let rhs =
                            mod_add(mod_mul(a, b, m).unwrap(), mod_mul(a, c, m).unwrap(), m)
                                .unwrap();
                        assert_eq!(lhs, rhs, "mul distributes over add mod {mv}");
                    }
                }
            }
        }
    }

    #[test]
    fn encode_zero_input_first_order() {
        let cfg = cfg(16, &[3], &[13]);
        let u = TimeSeries::zeros(m16(), 4);
        let x = encode(&cfg, &u).unwrap();
        assert_eq!(x.samples(), &[7, 5, 15, 13]);
    }

    #[test]
    fn encode_zero_coefficients_is_identity() {
        let cfg = cfg(16, &[0, 0], &[5, 9]);
        let u = TimeSeries::new(m16(), vec![3, 1, 4, 1, 5]).unwrap();
        assert_eq!(encode(&cfg, &u).unwrap(), u);
    }

    #[test]
    fn encode_running_sum() {
        let cfg = cfg(16, &[1], &[0]);
        let u = TimeSeries::new(m16(), vec![1, 1, 1]).unwrap();
        assert_eq!(encode(&cfg, &u).unwrap().samples(), &[1, 2, 3]);
    }

    #[test]
    fn decode_roundtrips_first_encode_example() {
        let cfg = cfg(16, &[3], &[13]);
        let x = TimeSeries::new(m16(), vec![7, 5, 15, 13]).unwrap();
        assert_eq!(decode(&cfg, &x).unwrap().samples(), &[0, 0, 0, 0]);
    }

    #[test]
    fn decode_zero_coefficients_is_identity() {
        let cfg = cfg(16, &[0], &[7]);
        let x = TimeSeries::new(m16(), vec![8, 6, 7, 5]).unwrap();
        assert_eq!(decode(&cfg, &x).unwrap(), x);
    }

    #[test]
    fn encode_rejects_modulus_mismatch() {
        let cfg = cfg(16, &[3], &[13]);
        let u = TimeSeries::zeros(Modulus::new(17).unwrap(), 4);
        assert!(matches!(
            encode(&cfg, &u),
            Err(RingError::ModulusMismatch { .. })
        ));
        assert!(matches!(
            decode(&cfg, &u),
            Err(RingError::ModulusMismatch { .. })
        ));
    }

    // Exhaustive over the full (w, ic) key space at N = 2, M = 16, with a
    // deterministic pseudo-random input per key; N = 1 exhaustive over keys
    // crossed with every length-3 input.
    #[test]
    fn roundtrip_exhaustive_small() {
        let m = m16();
        for w in 0..16u64 {
            for ic in 0..16u64 {
                let cfg = cfg(16, &[w], &[ic]);
                for bits in 0..u32::pow(16, 3) {
                    let u = TimeSeries::new(
                        m,
                        vec![
                            (bits & 15) as u64,
                            ((bits >> 4) & 15) as u64,
                            ((bits >> 8) & 15) as u64,
                        ],
                    )
                    .unwrap();
                    let x = encode(&cfg, &u).unwrap();
                    assert_eq!(decode(&cfg, &x).unwrap(), u);
                }
            }
        }
        let mut state = 0x2545f4914f6cdd1du64;
        for key in 0..u32::pow(16, 4) {
            let w = vec![(key & 15) as u64, ((key >> 4) & 15) as u64];
            let ic = vec![((key >> 8) & 15) as u64, ((key >> 12) & 15) as u64];
            let cfg = cfg(16, &w, &ic);
            let samples: Vec<u64> = (0..6)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                    (state >> 33) & 15
                })
                .collect();
            let u = TimeSeries::new(m, samples).unwrap();
            let x = encode(&cfg, &u).unwrap();
            assert_eq!(decode(&cfg, &x).unwrap(), u);
        }
    }

    #[test]
    fn zero_input_response_matches_encode_of_zeros() {
        let cfg = cfg(16, &[3, 0, 5], &[13, 2, 9]);
        let u = TimeSeries::zeros(m16(), 40);
        assert_eq!(zero_input_response(&cfg, 40), encode(&cfg, &u).unwrap());
    }

    #[test]
    fn zero_input_response_period_four_orbit() {
        let cfg = cfg(16, &[3], &[13]);
        let x = zero_input_response(&cfg, 8);
        assert_eq!(x.samples(), &[7, 5, 15, 13, 7, 5, 15, 13]);
    }

    #[test]
    fn zero_initial_conditions_stay_at_zero() {
        let cfg = cfg(16, &[13, 0, 0, 1], &[0, 0, 0, 0]);
        assert_eq!(zero_input_response(&cfg, 16).samples(), &[0u64; 16]);
    }

    #[test]
    fn signed_mapping_examples() {
        assert_eq!(to_signed(15, m16()).unwrap(), -1);
        assert_eq!(to_signed(0, m16()).unwrap(), 0);
        assert_eq!(to_signed(7, m16()).unwrap(), 7);
        assert_eq!(to_signed(8, m16()).unwrap(), -8);
        assert_eq!(from_signed(-8, m16()).unwrap(), 8);
        assert!(from_signed(8, m16()).is_err());
        assert!(from_signed(-9, m16()).is_err());
    }

    #[test]
    fn signed_mapping_identities_exhaustive() {
        for mv in 2..=32u64 {
            let m = Modulus::new(mv).unwrap();
            let range = SignedRange::new(m);
            if mv % 2 == 0 {
                assert_eq!(range.lo(), -(mv as i64) / 2);
                assert_eq!(range.hi(), mv as i64 / 2 - 1);
            } else {
                assert_eq!(range.lo(), -((mv as i64 - 1) / 2));
                assert_eq!(range.hi(), (mv as i64 - 1) / 2);
            }
            for a in 0..mv {
                let s = to_signed(a, m).unwrap();
                assert!(range.contains(s));
                assert_eq!(from_signed(s, m).unwrap(), a);
            }
            for s in range.lo()..=range.hi() {
                assert_eq!(to_signed(from_signed(s, m).unwrap(), m).unwrap(), s);
            }
        }
    }

    #[test]
    fn filter_config_validation() {
        let m = m16();
        assert!(FilterConfig::new(m, vec![], vec![]).is_err());
        assert!(FilterConfig::new(m, vec![1, 2], vec![3]).is_err());
        assert!(FilterConfig::new(m, vec![16], vec![0]).is_err());
        assert!(FilterConfig::new(m, vec![0], vec![16]).is_err());
        let cfg = FilterConfig::new(m, vec![1, 2], vec![3, 4]).unwrap();
        assert_eq!(cfg.order(), 2);
    }
}
