//! Experiment harness: the single-section sweep (A), the 50-sample noisy
//! zero-input response and RMSE-vs-noise curve (B), and the period-120
//! autocorrelation study (C), with deterministic CSV emission.

use crate::qarith::{build_qmod_section, QarithError, QmodLayout};
use crate::qsim::{
    apply, measure_all_with, prepare_basis, read_register, BackendKind, Circuit, NoiseModel,
    QsimError,
};
use crate::ring::{
    self, autocorrelation, scalar_period, FilterConfig, Modulus, Residue, RingError, TimeSeries,
};
use crate::State;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::io::Write;
use thiserror::Error;

/// The paper's parameter settings, shared by experiments, CLI defaults and
/// tests.
pub mod defaults {
    /// Operand width: 4 qubits per register.
    pub const N_BITS: usize = 4;
    /// Modulus `2^4 = 16`.
    pub const MODULUS: u64 = 16;
    /// Experiment A coefficient `w = 3`.
    pub const EXP_A_W: u64 = 3;
    /// Experiment A constant section input `x_in = 13`.
    pub const EXP_A_X_IN: u64 = 13;
    /// Experiment B coefficient `w_1 = 3`.
    pub const EXP_B_W: u64 = 3;
    /// Experiment B initial condition `x_1[0] = 13`.
    pub const EXP_B_IC: u64 = 13;
    /// Experiment B sample count.
    pub const EXP_B_SAMPLES: usize = 50;
    /// Noise sweep grid `p = 0, 0.02, ..., 0.16`.
    pub const NOISE_GRID: [f64; 9] = [0.0, 0.02, 0.04, 0.06, 0.08, 0.10, 0.12, 0.14, 0.16];
    /// Runs averaged per noise level.
    pub const SWEEP_RUNS: usize = 10;
    /// Experiment C coefficients `w = (13, 0, 0, 1)`.
    pub const EXP_C_W: [u64; 4] = [13, 0, 0, 1];
    /// Expected zero-input response period for the Experiment C filter.
    pub const EXP_C_PERIOD: usize = 120;
    /// Samples spot-checked on the quantum path in Experiment C.
    pub const EXP_C_QUANTUM_SAMPLES: usize = 8;
    /// Fallback RNG seed when neither flag nor environment provides one.
    pub const SEED: u64 = 20220914;
}

/// Errors from the experiment harness.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(
        "quantum output {quantum} disagrees with classical oracle {oracle} at {context}"
    )]
    OracleMismatch {
        context: String,
        quantum: u64,
        oracle: u64,
    },
    #[error("no initial condition reached period {wanted}; best period found was {best}")]
    PeriodNotFound { wanted: usize, best: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Qarith(#[from] QarithError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One row of the Experiment A sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpARow {
    pub delay: u64,
    pub x_out: u64,
    pub oracle: u64,
}

/// One experiment run: configuration, noise level, the ideal and noisy
/// 50-sample traces and their RMSE.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config: FilterConfig,
    pub n: usize,
    pub seed: u64,
    pub p_flip: f64,
    pub samples_ideal: TimeSeries,
    pub samples_noisy: TimeSeries,
    pub rmse: f64,
}

/// Mean and standard deviation of RMSE at one noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub mean_rmse: f64,
    pub std_rmse: f64,
}

/// Noise sweep output: the summary rows plus every underlying trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub records: Vec<RunRecord>,
}

/// Experiment C output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpCResult {
    /// Initial conditions used, `ic[i-1] = x[-i]`.
    pub ic: Vec<Residue>,
    /// Number of nonzero initial conditions sharing the found period
    /// (1 when no scan was requested).
    pub ic_count: usize,
    pub period: usize,
    /// One full period of the zero-input response.
    pub series: TimeSeries,
    /// Normalized autocorrelation over one period, lags `0..period`.
    pub acf: Vec<f64>,
    /// Leading samples verified on the quantum path.
    pub quantum_checked: usize,
}

fn paper_modulus() -> Modulus {
    Modulus::new(defaults::MODULUS).expect("paper modulus is valid")
}

/// Execute one QMOD section on basis inputs and return the product register.
/// Basis inputs stay basis states, so the readout is exact.
fn qmod_once(
    circuit: &Circuit,
    w: u64,
    x_in: u64,
    delay: u64,
    backend: BackendKind,
) -> Result<u64, ExperimentError> {
    let state: State = prepare_basis(
        circuit.width(),
        circuit.layout(),
        &[("w", w), ("x_in", x_in), ("delay", delay)],
        backend,
    )?;
    let state = apply(circuit, state)?;
    let bits = state
        .sole_basis_state()
        .expect("QMOD permutes basis states");
    Ok(read_register(bits, circuit.layout(), "product")?)
}

/// Experiment A: run the `n = 4` QMOD section with `w = 3`, `x_in = 13` for
/// every delay `d = 0..15` and compare each output against the classical
/// oracle `<13 + 3d> mod 16`. Any mismatch is a hard failure.
pub fn experiment_a(backend: BackendKind) -> Result<Vec<ExpARow>, ExperimentError> {
    let m = paper_modulus();
    let layout = QmodLayout::standard(defaults::N_BITS)?;
    let circuit = build_qmod_section(&layout);
    let mut rows = Vec::with_capacity(defaults::MODULUS as usize);
    for delay in 0..defaults::MODULUS {
        let x_out = qmod_once(&circuit, defaults::EXP_A_W, defaults::EXP_A_X_IN, delay, backend)?;
        let oracle = ring::mod_add(
            defaults::EXP_A_X_IN,
            ring::mod_mul(defaults::EXP_A_W, delay, m)?,
            m,
        )?;
        if x_out != oracle {
            return Err(ExperimentError::OracleMismatch {
                context: format!("experiment A, delay {delay}"),
                quantum: x_out,
                oracle,
            });
        }
        rows.push(ExpARow {
            delay,
            x_out,
            oracle,
        });
    }
    Ok(rows)
}

/// Root mean squared error between two equal-length series, on plain
/// residue values.
pub fn rmse(ideal: &TimeSeries, noisy: &TimeSeries) -> f64 {
    assert_eq!(ideal.len(), noisy.len(), "series lengths must match");
    if ideal.is_empty() {
        return 0.0;
    }
    let sum: f64 = ideal
        .samples()
        .iter()
        .zip(noisy.samples())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    (sum / ideal.len() as f64).sqrt()
}

/// Experiment B: 50 zero-input samples of the order-1 oscillator
/// (`w_1 = 3`, `x_1[0] = 13`, `M = 16`), executed sectionwise: one QMOD
/// circuit per sample, full measurement with bit-flip noise, register reset,
/// and re-preparation with the measured value as the next delay. Noise
/// therefore propagates through the recurrence, as in the paper's diverging
/// trajectories. With `p_flip = 0` the trace is bit-identical to the
/// classical recurrence.
pub fn experiment_b(
    p_flip: f64,
    seed: u64,
    backend: BackendKind,
) -> Result<RunRecord, ExperimentError> {
    let m = paper_modulus();
    let config = FilterConfig::new(m, vec![defaults::EXP_B_W], vec![defaults::EXP_B_IC])?;
    let noise = NoiseModel::new(p_flip, seed)?;
    let layout = QmodLayout::standard(defaults::N_BITS)?;
    let circuit = build_qmod_section(&layout);

    let samples_ideal = ring::zero_input_response(&config, defaults::EXP_B_SAMPLES);

    let mut rng: ChaCha8Rng = noise.rng();
    let mut noisy = Vec::with_capacity(defaults::EXP_B_SAMPLES);
    let mut delay = defaults::EXP_B_IC;
    for _ in 0..defaults::EXP_B_SAMPLES {
        let state: State = prepare_basis(
            circuit.width(),
            circuit.layout(),
            &[("w", defaults::EXP_B_W), ("x_in", 0), ("delay", delay)],
            backend,
        )?;
        let state = apply(&circuit, state)?;
        let measured = measure_all_with(&state, noise.p_flip(), &mut rng);
        let value = read_register(measured.bits, circuit.layout(), "product")?;
        noisy.push(value);
        delay = value;
    }
    let samples_noisy = TimeSeries::new(m, noisy)?;
    let rmse = rmse(&samples_ideal, &samples_noisy);
    Ok(RunRecord {
        config,
        n: defaults::N_BITS,
        seed,
        p_flip,
        samples_ideal,
        samples_noisy,
        rmse,
    })
}

/// Mean RMSE per noise level, averaged over `runs_per_p` seeded runs with
/// seeds `base_seed..base_seed + runs_per_p`. The same seed set is reused
/// at every noise level; runs execute in parallel and the output order is
/// deterministic.
pub fn rmse_sweep(
    p_values: &[f64],
    runs_per_p: usize,
    base_seed: u64,
    backend: BackendKind,
) -> Result<SweepTable, ExperimentError> {
    assert!(runs_per_p >= 1, "at least one run per noise level");
    let jobs: Vec<(f64, u64)> = p_values
        .iter()
        .flat_map(|&p| (0..runs_per_p as u64).map(move |r| (p, base_seed + r)))
        .collect();
    let records = jobs
        .into_par_iter()
        .map(|(p, seed)| experiment_b(p, seed, backend))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let chunk = &records[i * runs_per_p..(i + 1) * runs_per_p];
            let mean = chunk.iter().map(|r| r.rmse).sum::<f64>() / runs_per_p as f64;
            let var = chunk
                .iter()
                .map(|r| (r.rmse - mean) * (r.rmse - mean))
                .sum::<f64>()
                / runs_per_p as f64;
            SweepRow {
                p,
                mean_rmse: mean,
                std_rmse: var.sqrt(),
            }
        })
        .collect();
    Ok(SweepTable { rows, records })
}

/// Least-squares coefficient of determination of `y` against `x`.
pub fn linear_r2(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mean_x) * (v - mean_x)).sum();
    let sxy: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mean_x) * (b - mean_y))
        .sum();
    let syy: f64 = y.iter().map(|v| (v - mean_y) * (v - mean_y)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let pred = slope * a + intercept;
            (b - pred) * (b - pred)
        })
        .sum();
    1.0 - ss_res / syy
}

fn exp_c_config(ic: Vec<Residue>) -> Result<FilterConfig, RingError> {
    FilterConfig::new(paper_modulus(), defaults::EXP_C_W.to_vec(), ic)
}

/// Experiment C: the order-4 oscillator with `w = (13, 0, 0, 1)`, `M = 16`.
///
/// With `ic_scan` set, nonzero initial conditions are scanned in
/// lexicographic order over `(x[-1], ..., x[-4])` and the first one whose
/// zero-input response has period exactly 120 is reported, together with
/// the number of initial conditions sharing that period. Without the scan
/// the known first hit `(0, 0, 0, 1)` is used directly.
///
/// The leading samples are recomputed on the quantum path (sectionwise QMOD
/// over the four taps) and must agree with the classical series; the
/// normalized autocorrelation is computed over one full period.
pub fn experiment_c(
    ic_scan: bool,
    backend: BackendKind,
) -> Result<ExpCResult, ExperimentError> {
    let m = defaults::MODULUS;
    let wanted = defaults::EXP_C_PERIOD;

    let (ic, ic_count) = if ic_scan {
        let mut first: Option<Vec<Residue>> = None;
        let mut count = 0usize;
        let mut best = 0usize;
        for code in 1..m.pow(4) {
            // lexicographic over (x[-1], x[-2], x[-3], x[-4])
            let ic = vec![
                code / m.pow(3),
                code / m.pow(2) % m,
                code / m % m,
                code % m,
            ];
            let period = scalar_period(&exp_c_config(ic.clone())?);
            best = best.max(period);
            if period == wanted {
                count += 1;
                if first.is_none() {
                    first = Some(ic);
                }
            }
        }
        match first {
            Some(ic) => (ic, count),
            None => return Err(ExperimentError::PeriodNotFound { wanted, best }),
        }
    } else {
        (vec![0, 0, 0, 1], 1)
    };

    let config = exp_c_config(ic.clone())?;
    let period = scalar_period(&config);
    if period != wanted {
        return Err(ExperimentError::PeriodNotFound {
            wanted,
            best: period,
        });
    }
    let series = ring::zero_input_response(&config, period);

    // Quantum spot check: each sample is one pass over the four taps,
    // section i computing <partial + w_i * x[k-i]> on a 19-qubit circuit.
    let layout = QmodLayout::standard(defaults::N_BITS)?;
    let circuit = build_qmod_section(&layout);
    let quantum_checked = defaults::EXP_C_QUANTUM_SAMPLES.min(series.len());
    let mut history = ic.clone(); // history[i-1] = x[k-i]
    for k in 0..quantum_checked {
        let mut partial = 0u64;
        for (i, &w_i) in defaults::EXP_C_W.iter().enumerate() {
            partial = qmod_once(&circuit, w_i, partial, history[i], backend)?;
        }
        let oracle = series.samples()[k];
        if partial != oracle {
            return Err(ExperimentError::OracleMismatch {
                context: format!("experiment C, sample {k}"),
                quantum: partial,
                oracle,
            });
        }
        history.rotate_right(1);
        history[0] = partial;
    }

    let acf = autocorrelation::<f64>(&series, period - 1)?;
    Ok(ExpCResult {
        ic,
        ic_count,
        period,
        series,
        acf,
        quantum_checked,
    })
}

/// `expA.csv`: one row per delay value.
pub fn write_expa_csv<W: Write>(rows: &[ExpARow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "delay,x_out,oracle,match")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.delay,
            r.x_out,
            r.oracle,
            u8::from(r.x_out == r.oracle)
        )?;
    }
    Ok(())
}

/// `expB.csv`: sample index (1-based; sample 1 is the first computed
/// output), ideal and noisy values.
pub fn write_expb_csv<W: Write>(record: &RunRecord, mut out: W) -> std::io::Result<()> {
    writeln!(out, "k,ideal,noisy")?;
    for (k, (i, n)) in record
        .samples_ideal
        .samples()
        .iter()
        .zip(record.samples_noisy.samples())
        .enumerate()
    {
        writeln!(out, "{},{},{}", k + 1, i, n)?;
    }
    Ok(())
}

/// `rmse.csv`: one row per noise level.
pub fn write_rmse_csv<W: Write>(table: &SweepTable, mut out: W) -> std::io::Result<()> {
    writeln!(out, "p,mean_rmse,std_rmse")?;
    for r in &table.rows {
        writeln!(out, "{},{},{}", r.p, r.mean_rmse, r.std_rmse)?;
    }
    Ok(())
}

/// `expC.csv`: one period of the zero-input response.
pub fn write_expc_csv<W: Write>(series: &TimeSeries, mut out: W) -> std::io::Result<()> {
    writeln!(out, "k,x")?;
    for (k, x) in series.samples().iter().enumerate() {
        writeln!(out, "{},{}", k + 1, x)?;
    }
    Ok(())
}

/// `expC_acf.csv`: normalized autocorrelation per lag.
pub fn write_expc_acf_csv<W: Write>(acf: &[f64], mut out: W) -> std::io::Result<()> {
    writeln!(out, "lag,r")?;
    for (lag, r) in acf.iter().enumerate() {
        writeln!(out, "{},{}", lag, r)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_a_matches_oracle_for_all_delays() {
        let rows = experiment_a(BackendKind::Sparse).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[0], ExpARow { delay: 0, x_out: 13, oracle: 13 });
        assert_eq!(rows[1], ExpARow { delay: 1, x_out: 0, oracle: 0 });
        assert_eq!(rows[15], ExpARow { delay: 15, x_out: 10, oracle: 10 });
    }

    #[test]
    fn experiment_b_noiseless_matches_classical_recurrence() {
        let record = experiment_b(0.0, defaults::SEED, BackendKind::Sparse).unwrap();
        assert_eq!(record.samples_noisy, record.samples_ideal);
        assert_eq!(
            &record.samples_ideal.samples()[..8],
            &[7, 5, 15, 13, 7, 5, 15, 13]
        );
        assert_eq!(record.rmse, 0.0);
    }

    #[test]
    fn experiment_b_low_noise_tracks_ideal_loosely() {
        let record = experiment_b(0.02, defaults::SEED, BackendKind::Sparse).unwrap();
        assert_eq!(record.samples_noisy.len(), 50);
        assert!(record.rmse < 8.0, "p=0.02 rmse {} should stay low", record.rmse);
    }

    #[test]
    fn experiment_b_is_seed_deterministic() {
        let a = experiment_b(0.08, 42, BackendKind::Sparse).unwrap();
        let b = experiment_b(0.08, 42, BackendKind::Sparse).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rmse_is_recomputable_from_record() {
        let record = experiment_b(0.16, 7, BackendKind::Sparse).unwrap();
        let direct = rmse(&record.samples_ideal, &record.samples_noisy);
        assert_eq!(record.rmse, direct);
    }

    #[test]
    fn sweep_has_zero_rmse_at_zero_noise() {
        let table = rmse_sweep(&[0.0, 0.08], 3, defaults::SEED, BackendKind::Sparse).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.records.len(), 6);
        assert_eq!(table.rows[0].mean_rmse, 0.0);
        assert_eq!(table.rows[0].std_rmse, 0.0);
        assert!(table.rows[1].mean_rmse > 0.0);
    }

    #[test]
    fn experiment_c_default_ic_reproduces_period() {
        let result = experiment_c(false, BackendKind::Sparse).unwrap();
        assert_eq!(result.ic, vec![0, 0, 0, 1]);
        assert_eq!(result.period, 120);
        assert_eq!(result.series.len(), 120);
        assert_eq!(
            &result.series.samples()[..12],
            &[1, 13, 9, 5, 2, 7, 4, 9, 7, 2, 14, 15]
        );
        assert_eq!(result.acf[0], 1.0);
        assert_eq!(result.quantum_checked, 8);
    }

    #[test]
    fn linear_fit_recognizes_a_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        assert!((linear_r2(&x, &y) - 1.0).abs() < 1e-12);
        let noisy_y = [1.0, 2.0, 9.0, 3.0];
        assert!(linear_r2(&x, &noisy_y) < 0.9);
    }

    #[test]
    fn csv_emission_shapes() {
        let rows = experiment_a(BackendKind::Sparse).unwrap();
        let mut buf = Vec::new();
        write_expa_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 17);
        assert!(text.starts_with("delay,x_out,oracle,match\n"));
        assert!(text.contains("1,0,0,1\n"));

        let record = experiment_b(0.0, 1, BackendKind::Sparse).unwrap();
        let mut buf = Vec::new();
        write_expb_csv(&record, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 51);
        assert!(text.starts_with("k,ideal,noisy\n1,7,7\n"));

        let table = rmse_sweep(&[0.0, 0.02], 2, 5, BackendKind::Sparse).unwrap();
        let mut buf = Vec::new();
        write_rmse_csv(&table, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }

    #[test]
    fn csv_emission_is_byte_deterministic() {
        let run = || {
            let record = experiment_b(0.1, 99, BackendKind::Sparse).unwrap();
            let mut buf = Vec::new();
            write_expb_csv(&record, &mut buf).unwrap();
            buf
        };
        assert_eq!(run(), run());
    }
}
