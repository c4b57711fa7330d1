//! Period detection and autocorrelation for oscillator output sequences.

use super::{FilterConfig, Residue, RingError, TimeSeries};
use crate::scalar::Real;

/// Transient length and cycle length of the N-tuple state orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitInfo {
    /// Steps before the state enters its cycle.
    pub transient: usize,
    /// Length of the state cycle.
    pub period: usize,
}

/// Smallest `p >= 1` such that the tail of `x` is `p`-periodic, or `None`
/// if no repeat was observed within the series.
///
/// A candidate `p` is accepted once the `p`-periodic suffix covers at least
/// two full periods and at least half of the series. The half-series bound
/// rejects false short periods arising from accidental scalar repeats near
/// the end of the record, which do not imply a repeat of the underlying
/// recurrence state. Callers should therefore supply at least
/// `2 * (transient + period)` samples.
pub fn detect_period(x: &TimeSeries) -> Option<usize> {
    let n = x.len();
    if n < 2 {
        return None;
    }
    let reversed: Vec<Residue> = x.samples().iter().rev().copied().collect();
    let z = z_array(&reversed);
    (1..=n / 2).find(|&p| {
        let tail = p + z[p]; // length of the longest p-periodic suffix of x
        tail >= 2 * p && 2 * tail >= n
    })
}

/// Z-array: `z[i]` is the length of the longest common prefix of `s` and
/// `s[i..]`, with `z[0] = s.len()`.
fn z_array(s: &[Residue]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0usize; n];
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        if i < r {
            z[i] = z[i - l].min(r - i);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// Floyd cycle detection on the N-tuple state `(x[k-1], ..., x[k-N])` of the
/// zero-input recurrence. Scalar repeats do not imply state repeats, so the
/// orbit is tracked in state space.
pub fn orbit_period(cfg: &FilterConfig) -> OrbitInfo {
    let step = |state: &[Residue]| -> Vec<Residue> {
        let m = cfg.modulus().value();
        let mut next = 0u64;
        for (w, s) in cfg.coefficients().iter().zip(state) {
            next = (next + w * s % m) % m;
        }
        let mut out = Vec::with_capacity(state.len());
        out.push(next);
        out.extend_from_slice(&state[..state.len() - 1]);
        out
    };

    let start: Vec<Residue> = cfg.initial_conditions().to_vec();
    let mut tortoise = step(&start);
    let mut hare = step(&tortoise);
    while tortoise != hare {
        tortoise = step(&tortoise);
        hare = step(&step(&hare));
    }
    let mut transient = 0;
    let mut tortoise = start;
    while tortoise != hare {
        tortoise = step(&tortoise);
        hare = step(&hare);
        transient += 1;
    }
    let mut period = 1;
    let mut hare = step(&tortoise);
    while tortoise != hare {
        hare = step(&hare);
        period += 1;
    }
    OrbitInfo { transient, period }
}

/// Minimal eventual period of the scalar zero-input response. Always divides
/// the state-orbit period.
pub fn scalar_period(cfg: &FilterConfig) -> usize {
    let orbit = orbit_period(cfg);
    let x = super::zero_input_response(cfg, orbit.transient + 2 * orbit.period);
    let tail = &x.samples()[orbit.transient..];
    for p in 1..=orbit.period {
        if orbit.period % p == 0 && (0..tail.len() - p).all(|k| tail[k] == tail[k + p]) {
            return p;
        }
    }
    orbit.period
}

/// Normalized biased autocorrelation with the mean removed:
/// `r[l] = sum_k (x[k] - mean)(x[k+l] - mean) / sum_k (x[k] - mean)^2`
/// for `l = 0..=max_lag`, with `r[0] = 1` exactly.
pub fn autocorrelation<R: Real>(x: &TimeSeries, max_lag: usize) -> Result<Vec<R>, RingError> {
    let n = x.len();
    if n == 0 {
        return Err(RingError::EmptySeries);
    }
    if max_lag >= n {
        return Err(RingError::LagTooLarge { max_lag, len: n });
    }
    let count = R::from_usize(n).expect("series length fits the scalar");
    let values: Vec<R> = x
        .samples()
        .iter()
        .map(|&s| R::from_u64(s).expect("residue fits the scalar"))
        .collect();
    let mean = values.iter().fold(R::zero(), |a, &v| a + v) / count;
    let dev: Vec<R> = values.iter().map(|&v| v - mean).collect();
    let denom = dev.iter().fold(R::zero(), |a, &d| a + d * d);
    if denom <= R::zero() {
        return Err(RingError::ZeroVariance);
    }
    let mut r = Vec::with_capacity(max_lag + 1);
    r.push(R::one());
    for lag in 1..=max_lag {
        let num = (0..n - lag).fold(R::zero(), |a, k| a + dev[k] * dev[k + lag]);
        r.push(num / denom);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{zero_input_response, Modulus};
    use approx::assert_relative_eq;
    use std::collections::HashMap;

    fn m16() -> Modulus {
        Modulus::new(16).unwrap()
    }

    fn cfg(w: &[u64], ic: &[u64]) -> FilterConfig {
        FilterConfig::new(m16(), w.to_vec(), ic.to_vec()).unwrap()
    }

    #[test]
    fn detects_visible_repetition() {
        let x = TimeSeries::new(m16(), vec![7, 5, 15, 13, 7, 5, 15, 13]).unwrap();
        assert_eq!(detect_period(&x), Some(4));
    }

    #[test]
    fn all_zeros_have_period_one() {
        let x = TimeSeries::zeros(m16(), 8);
        assert_eq!(detect_period(&x), Some(1));
    }

    #[test]
    fn no_repeat_yields_none() {
        let x = TimeSeries::new(m16(), vec![1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert_eq!(detect_period(&x), None);
        let single = TimeSeries::new(m16(), vec![9]).unwrap();
        assert_eq!(detect_period(&single), None);
    }

    #[test]
    fn accidental_tail_repeat_is_not_a_period() {
        // 3-periodic run ending in a doubled sample: p = 1 must not win.
        let x = TimeSeries::new(m16(), vec![1, 4, 4, 1, 4, 4, 1, 4, 4, 1, 4, 4]).unwrap();
        assert_eq!(detect_period(&x), Some(3));
    }

    #[test]
    fn detects_period_after_transient() {
        let mut v = vec![9, 2, 11];
        for _ in 0..6 {
            v.extend_from_slice(&[5, 8]);
        }
        let x = TimeSeries::new(m16(), v).unwrap();
        assert_eq!(detect_period(&x), Some(2));
    }

    #[test]
    fn orbit_of_period_four_example() {
        let info = orbit_period(&cfg(&[3], &[13]));
        assert_eq!(info, OrbitInfo { transient: 0, period: 4 });
        assert_eq!(scalar_period(&cfg(&[3], &[13])), 4);
    }

    #[test]
    fn experiment_c_config_has_period_120() {
        let cfg = cfg(&[13, 0, 0, 1], &[0, 0, 0, 1]);
        let info = orbit_period(&cfg);
        assert_eq!(info.period, 120);
        assert_eq!(info.transient, 0);
        assert_eq!(scalar_period(&cfg), 120);
        let x = zero_input_response(&cfg, 480);
        assert_eq!(detect_period(&x), Some(120));
        assert_eq!(&x.samples()[..12], &[1, 13, 9, 5, 2, 7, 4, 9, 7, 2, 14, 15]);
    }

    // Brute-force state-graph oracle: walk the state tuple with a hash map
    // until it repeats, then check the detected scalar period divides the
    // orbit length.
    #[test]
    fn detected_period_divides_state_orbit_length() {
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = |bound: u64| {
            rng_state = rng_state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (rng_state >> 33) % bound
        };
        for order in 1..=4usize {
            for _ in 0..40 {
                let w: Vec<u64> = (0..order).map(|_| next(16)).collect();
                let ic: Vec<u64> = (0..order).map(|_| next(16)).collect();
                let cfg = cfg(&w, &ic);

                let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
                let mut state = ic.clone();
                let mut step_count = 0usize;
                let (transient, orbit_len) = loop {
                    if let Some(&first) = seen.get(&state) {
                        break (first, step_count - first);
                    }
                    seen.insert(state.clone(), step_count);
                    let m = 16u64;
                    let x: u64 = w
                        .iter()
                        .zip(&state)
                        .fold(0, |acc, (wi, si)| (acc + wi * si % m) % m);
                    let mut nxt = vec![x];
                    nxt.extend_from_slice(&state[..order - 1]);
                    state = nxt;
                    step_count += 1;
                };

                let info = orbit_period(&cfg);
                assert_eq!(info.transient, transient);
                assert_eq!(info.period, orbit_len);

                let len = (2 * (transient + orbit_len)).max(8);
                let x = zero_input_response(&cfg, len);
                let p = detect_period(&x).expect("orbit must repeat within the record");
                assert_eq!(
                    orbit_len % p,
                    0,
                    "scalar period {p} must divide orbit length {orbit_len} (w={w:?}, ic={ic:?})"
                );
                assert_eq!(p, scalar_period(&cfg));
            }
        }
    }

    #[test]
    fn autocorrelation_is_one_at_lag_zero() {
        let x = TimeSeries::new(m16(), vec![3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
        let r: Vec<f64> = autocorrelation(&x, 4).unwrap();
        assert_eq!(r[0], 1.0);
        assert_eq!(r.len(), 5);
    }

    #[test]
    fn alternating_series_lag_one() {
        // Biased estimator on 0,1,0,1,... of length L gives r[1] = -(L-1)/L.
        let samples: Vec<u64> = (0..100).map(|k| k % 2).collect();
        let x = TimeSeries::new(m16(), samples).unwrap();
        let r: Vec<f64> = autocorrelation(&x, 1).unwrap();
        assert_relative_eq!(r[1], -99.0 / 100.0, max_relative = 1e-12);
    }

    #[test]
    fn constant_series_is_rejected() {
        let x = TimeSeries::new(m16(), vec![5; 32]).unwrap();
        assert!(matches!(
            autocorrelation::<f64>(&x, 4),
            Err(RingError::ZeroVariance)
        ));
    }

    #[test]
    fn lag_must_be_below_length() {
        let x = TimeSeries::new(m16(), vec![1, 2, 3]).unwrap();
        assert!(matches!(
            autocorrelation::<f64>(&x, 3),
            Err(RingError::LagTooLarge { .. })
        ));
    }

    #[test]
    fn f32_and_f64_agree_on_short_series() {
        let x = TimeSeries::new(m16(), vec![1, 13, 9, 5, 2, 7, 4, 9]).unwrap();
        let r64: Vec<f64> = autocorrelation(&x, 4).unwrap();
        let r32: Vec<f32> = autocorrelation(&x, 4).unwrap();
        for (a, b) in r64.iter().zip(&r32) {
            assert_relative_eq!(*a, *b as f64, max_relative = 1e-5);
        }
    }
}
