//! Post-processing of amplitude histories: damping fits, spectra and
//! convergence studies.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::cases::spacing;
use crate::config::{Resolution, RunConfig};
use crate::simulation::{run, RunOptions, SimulationError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("need at least {needed} local maxima in the fit window, found {found}")]
    InsufficientPeaks { found: usize, needed: usize },
    #[error("time and amplitude series differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
    #[error("series too short for a spectrum ({0} samples)")]
    TooShort(usize),
}

/// Minimum number of peaks [`fit_damping`] accepts.
pub const MIN_PEAKS: usize = 4;

/// Peaks below this are treated as numerical noise.
pub const PEAK_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DampingFit {
    /// Damping rate; the envelope behaves like `e^{-γ t}`.
    pub gamma: f64,
    /// `π / mean peak spacing` (|E| peaks twice per period).
    pub omega: f64,
    /// `(t, |E|)` of the peaks used.
    pub peaks: Vec<(f64, f64)>,
}

/// Strict local maxima of `values` with `t` in `window`, at or above [`PEAK_FLOOR`].
pub fn local_maxima(times: &[f64], values: &[f64], window: (f64, f64)) -> Vec<(f64, f64)> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| times[i] >= window.0 && times[i] <= window.1)
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1] && values[i] >= PEAK_FLOOR)
        .map(|i| (times[i], values[i]))
        .collect()
}

/// Fits `ln |E|` at the local maxima inside `window` by least squares.
pub fn fit_damping(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DampingFit, AnalysisError> {
    if times.len() != values.len() {
        return Err(AnalysisError::LengthMismatch {
            times: times.len(),
            values: values.len(),
        });
    }
    let peaks = local_maxima(times, values, window);
    if peaks.len() < MIN_PEAKS {
        return Err(AnalysisError::InsufficientPeaks {
            found: peaks.len(),
            needed: MIN_PEAKS,
        });
    }
    let n = peaks.len() as f64;
    let t_mean = peaks.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = peaks.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, a) in &peaks {
        sxy += (t - t_mean) * (a.ln() - y_mean);
        sxx += (t - t_mean) * (t - t_mean);
    }
    let spacing = (peaks[peaks.len() - 1].0 - peaks[0].0) / (n - 1.0);
    Ok(DampingFit {
        gamma: -sxy / sxx,
        omega: std::f64::consts::PI / spacing,
        peaks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    pub frequency: f64,
    pub period: f64,
    pub power: f64,
}

/// Local maxima of the power spectrum of a uniformly sampled series, strongest first.
///
/// The series is detrended (mean removed), Hann-windowed and zero-padded to
/// `pad` times its length before the transform. The zero-frequency bin is
/// never reported.
pub fn spectral_peaks(values: &[f64], dt: f64, pad: usize) -> Result<Vec<SpectralPeak>, AnalysisError> {
    let n = values.len();
    if n < 8 {
        return Err(AnalysisError::TooShort(n));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let size = n * pad.max(1);
    let mut buffer: Vec<Complex<f64>> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / (n - 1) as f64).cos();
            Complex::new((v - mean) * w, 0.0)
        })
        .collect();
    buffer.resize(size, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(size).process(&mut buffer);
    let power: Vec<f64> = buffer[..size / 2 + 1].iter().map(|c| c.norm_sqr()).collect();

    let mut peaks: Vec<SpectralPeak> = (1..power.len() - 1)
        .filter(|&i| power[i] > power[i - 1] && power[i] >= power[i + 1])
        .map(|i| {
            let frequency = i as f64 / (size as f64 * dt);
            SpectralPeak {
                frequency,
                period: 1.0 / frequency,
                power: power[i],
            }
        })
        .collect();
    peaks.sort_by(|a, b| b.power.total_cmp(&a.power));
    Ok(peaks)
}

/// [`spectral_peaks`] of the samples with `t` inside `window`, which must be
/// uniformly spaced.
pub fn dominant_periods(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<Vec<SpectralPeak>, AnalysisError> {
    if times.len() != values.len() {
        return Err(AnalysisError::LengthMismatch {
            times: times.len(),
            values: values.len(),
        });
    }
    let (t, v): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .unzip();
    if t.len() < 8 {
        return Err(AnalysisError::TooShort(t.len()));
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    spectral_peaks(&v, dt, SPECTRUM_PADDING)
}

/// Zero-padding factor used by [`dominant_periods`].
pub const SPECTRUM_PADDING: usize = 16;

/// One row of `convergence.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub t: f64,
    pub h: f64,
    /// `max_j |E_h(x_j) - E_ref(x_j)|` on the amplitude grid.
    pub err_e_inf: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ConvergenceError {
    #[error("reference resolution {reference} is coarser than study resolution {study}")]
    CoarseReference { reference: Resolution, study: Resolution },
    #[error("no study resolutions given")]
    Empty,
    #[error("run at {resolution}: {source}")]
    Run {
        resolution: Resolution,
        #[source]
        source: SimulationError,
    },
}

impl ConvergenceError {
    pub fn simulation(&self) -> Option<&SimulationError> {
        match self {
            ConvergenceError::Run { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Runs `config` at every study resolution and at the reference resolution
/// and compares the fields step by step.
pub fn convergence_study(config: &RunConfig) -> Result<Vec<ConvergenceRow>, ConvergenceError> {
    if config.study_resolutions.is_empty() {
        return Err(ConvergenceError::Empty);
    }
    let reference = config.reference_resolution;
    if let Some(&study) = config
        .study_resolutions
        .iter()
        .find(|r| r.nx > reference.nx || r.nv > reference.nv)
    {
        return Err(ConvergenceError::CoarseReference { reference, study });
    }
    let options = RunOptions {
        field_samples: true,
        skip_moments: true,
        ..Default::default()
    };
    let at = |resolution: Resolution| {
        let mut c = config.clone();
        c.nx = resolution.nx;
        c.nv = resolution.nv;
        c.snapshot_times.clear();
        run(&c, options).map_err(|source| ConvergenceError::Run { resolution, source })
    };
    let exact = at(reference)?;
    let mut rows = Vec::new();
    for &resolution in &config.study_resolutions {
        let h = spacing(config.case.domain(), resolution.nx, resolution.nv);
        let out = at(resolution)?;
        for ((d, e), e_ref) in out.diagnostics.iter().zip(&out.field_samples).zip(&exact.field_samples) {
            let err = e.iter().zip(e_ref).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            rows.push(ConvergenceRow {
                t: d.t,
                h,
                err_e_inf: err,
            });
        }
    }
    Ok(rows)
}

/// `max_{t < t_max} err(h) / max_{t < t_max} err(h')` for the two spacings
/// `h > h'` found in `rows`.
pub fn convergence_factor(rows: &[ConvergenceRow], coarse: f64, fine: f64, t_max: f64) -> f64 {
    let worst = |h: f64| {
        rows.iter()
            .filter(|r| r.h == h && r.t < t_max)
            .map(|r| r.err_e_inf)
            .fold(0.0, f64::max)
    };
    worst(coarse) / worst(fine)
}
