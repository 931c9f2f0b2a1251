//! Algebraic first-derivative estimation.
//!
//! Over a trailing window of length `T`, the slope of the best local affine
//! model is `(6/T³)∫₀ᵀ (2τ − T) y(τ) dτ`, with `τ = 0` at the oldest sample.
//! The integral is discretized once into a fixed FIR weight vector, so the
//! estimate is a dot product of the weights with the last `n` samples.
//!
//! The estimate is timestamped at the window's trailing edge. For signals
//! with curvature it equals the derivative at the window midpoint, so it
//! lags the true derivative by `T/2` (see [`DiffKernel::group_delay`]).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::quadrature::{moment, trapezoid_weights};

/// Spacing tolerance (s) between consecutive window samples.
pub const SPACING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DiffKernel {
    window_t: f64,
    fs: f64,
    weights: Vec<f64>,
}

/// Builds the differentiator weights for a window of about `window_t`
/// seconds at `fs` Hz.
///
/// The window holds `round(window_t·fs) + 1` samples, so its effective span
/// is a whole number of sample periods.
pub fn design_kernel(window_t: f64, fs: f64) -> Result<DiffKernel> {
    DiffKernel::design(window_t, fs)
}

impl DiffKernel {
    pub fn design(window_t: f64, fs: f64) -> Result<Self> {
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidWindow(format!("sampling rate must be positive, got {fs}")));
        }
        if !(window_t > 0.0 && window_t.is_finite()) {
            return Err(Error::InvalidWindow(format!("window must be positive, got {window_t}")));
        }
        let n = window_len(window_t, fs);
        if n < 4 {
            return Err(Error::InvalidWindow(format!(
                "window of {window_t} s at {fs} Hz holds {n} samples, need at least 4"
            )));
        }
        let h = 1.0 / fs;
        let span = (n - 1) as f64 * h;
        let scale = 6.0 / span.powi(3);
        let mut weights = trapezoid_weights(n, h, |tau| scale * (2.0 * tau - span));

        // zero mean, then unit first moment
        let mean = weights.iter().sum::<f64>() / n as f64;
        weights.iter_mut().for_each(|w| *w -= mean);
        let m1 = moment(&weights, h, 1);
        weights.iter_mut().for_each(|w| *w /= m1);

        Ok(Self { window_t: span, fs, weights })
    }

    /// Effective window span `(n − 1)/fs`.
    pub fn window_t(&self) -> f64 {
        self.window_t
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Oldest sample first.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Lag between the trailing edge and the instant whose derivative is
    /// actually estimated.
    pub fn group_delay(&self) -> f64 {
        0.5 * self.window_t
    }

    /// Noise gain `Σ w²`: i.i.d. input noise of variance σ² yields an
    /// estimate variance of `σ²·Σ w²`.
    pub fn noise_gain(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// Dot product with `values`, oldest first. Panics on length mismatch.
    pub fn apply<'a>(&self, values: impl IntoIterator<Item = &'a f64>) -> f64 {
        let mut n = 0;
        let mut acc = 0.0;
        for (w, v) in self.weights.iter().zip(values) {
            acc += w * v;
            n += 1;
        }
        assert_eq!(n, self.weights.len(), "sample count does not match kernel length");
        acc
    }
}

pub(crate) fn window_len(window_t: f64, fs: f64) -> usize {
    (window_t * fs).round() as usize + 1
}

/// Fixed-capacity chronological buffer of uniformly spaced `(t, value)`
/// samples. Pushing into a full window evicts the oldest sample.
#[derive(Debug, Clone)]
pub struct SampleWindow {
    capacity: usize,
    dt: f64,
    entries: VecDeque<(f64, f64)>,
}

impl SampleWindow {
    pub fn new(capacity: usize, fs: f64) -> Self {
        Self { capacity, dt: 1.0 / fs, entries: VecDeque::with_capacity(capacity) }
    }

    /// A window sized to feed `kernel`.
    pub fn for_kernel(kernel: &DiffKernel) -> Self {
        Self::new(kernel.len(), kernel.fs())
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        if let Some(&(last, _)) = self.entries.back() {
            let gap = t - last;
            if (gap - self.dt).abs() > SPACING_TOL {
                return Err(Error::InsufficientData(format!(
                    "sample at t = {t} breaks uniform spacing {} (gap {gap})",
                    self.dt
                )));
            }
        }
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back((t, value));
        Ok(())
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn spacing(&self) -> f64 {
        self.dt
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn entries(&self) -> impl ExactSizeIterator<Item = &(f64, f64)> {
        self.entries.iter()
    }

    pub fn values(&self) -> impl ExactSizeIterator<Item = &f64> {
        self.entries.iter().map(|(_, v)| v)
    }

    pub fn first_time(&self) -> Option<f64> {
        self.entries.front().map(|e| e.0)
    }

    pub fn last_time(&self) -> Option<f64> {
        self.entries.back().map(|e| e.0)
    }

    /// True when both windows hold samples at the same instants.
    pub fn aligned_with(&self, other: &SampleWindow) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| (a.0 - b.0).abs() <= SPACING_TOL)
    }
}

/// Derivative estimate at the trailing edge of a full window.
pub fn estimate_derivative(w: &SampleWindow, k: &DiffKernel) -> Result<f64> {
    if w.capacity() != k.len() || ((w.spacing() * k.fs()) - 1.0).abs() > 1e-9 {
        return Err(Error::InsufficientData(format!(
            "window ({} samples at {} s) does not match kernel ({} samples at {} Hz)",
            w.capacity(),
            w.spacing(),
            k.len(),
            k.fs()
        )));
    }
    if !w.is_full() {
        return Err(Error::InsufficientData(format!(
            "window holds {} of {} samples",
            w.len(),
            w.capacity()
        )));
    }
    Ok(k.apply(w.values()))
}

/// Streaming differentiator owning one window.
#[derive(Debug, Clone)]
pub struct Differentiator {
    kernel: DiffKernel,
    window: SampleWindow,
}

impl Differentiator {
    pub fn new(window_t: f64, fs: f64) -> Result<Self> {
        let kernel = DiffKernel::design(window_t, fs)?;
        let window = SampleWindow::for_kernel(&kernel);
        Ok(Self { kernel, window })
    }

    pub fn kernel(&self) -> &DiffKernel {
        &self.kernel
    }

    /// Feeds one sample; returns the estimate once the window is full.
    pub fn push(&mut self, t: f64, value: f64) -> Result<Option<f64>> {
        self.window.push(t, value)?;
        if self.window.is_full() {
            Ok(Some(self.kernel.apply(self.window.values())))
        } else {
            Ok(None)
        }
    }

    pub fn reset(&mut self) {
        self.window.clear();
    }
}
