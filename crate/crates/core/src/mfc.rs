//! Model-free control with a second-order ultra-local model
//! `ÿ = F + α·u`.
//!
//! `F` lumps everything the controller does not model. It is re-estimated
//! every sample from the last `τ` seconds of output and input through two
//! fixed FIR kernels, and the intelligent PD law cancels it while imposing
//! `ë + K_D·ė + K_P·e ≈ 0` on the tracking error.

use serde::{Deserialize, Serialize};

use crate::diffest::{window_len, Differentiator, SampleWindow};
use crate::error::{Error, Result};
use crate::quadrature::{correct_moments, trapezoid_weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlMode {
    /// Derivative of the error taken from the algebraic differentiator.
    Ipd,
    /// Derivative-free form acting on `Y = y + K_D ∫ y`.
    Ipd2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerConfig {
    pub alpha: f64,
    #[serde(rename = "K_P")]
    pub kp: f64,
    #[serde(rename = "K_D")]
    pub kd: f64,
    /// F-estimation window (s).
    pub tau: f64,
    pub mode: ControlMode,
    pub u_min: f64,
    pub u_max: f64,
    /// Differentiator window for `ė` in iPD mode (s).
    pub deriv_window: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0e4,
            kp: 100.0,
            kd: 20.0,
            tau: 0.04,
            mode: ControlMode::Ipd,
            u_min: -50.0,
            u_max: 50.0,
            deriv_window: 0.04,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha != 0.0 && self.alpha.is_finite()) {
            return Err(Error::invalid("alpha", "must be finite and non-zero"));
        }
        if !gains_admissible(self.kp, self.kd) {
            return Err(Error::InadmissibleGains { kp: self.kp, kd: self.kd });
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::invalid("tau", "must be positive"));
        }
        if !(self.deriv_window > 0.0 && self.deriv_window.is_finite()) {
            return Err(Error::invalid("deriv_window", "must be positive"));
        }
        if !(self.u_min < self.u_max) {
            return Err(Error::invalid("u_min", "must be below u_max"));
        }
        Ok(())
    }

    fn clamp(&self, u: f64) -> f64 {
        u.clamp(self.u_min, self.u_max)
    }
}

/// Hurwitz test for `s² + K_D·s + K_P`.
pub fn gains_admissible(kp: f64, kd: f64) -> bool {
    kp > 0.0 && kd > 0.0 && kp.is_finite() && kd.is_finite()
}

/// Reference value with its first two time derivatives.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Reference {
    pub y_star: f64,
    pub dy_star: f64,
    pub ddy_star: f64,
}

impl Reference {
    pub fn constant(value: f64) -> Self {
        Self { y_star: value, dy_star: 0.0, ddy_star: 0.0 }
    }
}

/// Weight vectors realizing both integrals of the F estimator.
///
/// `σ` runs from 0 at the oldest sample to `τ` at the current one. The
/// trapezoid weights are nudged (least-norm) so that their moments of order
/// 0..2 equal those of the continuous kernels, making the estimator exact on
/// quadratic `y` and `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct FKernel {
    tau: f64,
    fs: f64,
    y_weights: Vec<f64>,
    u_weights: Vec<f64>,
}

impl FKernel {
    pub fn design(tau: f64, fs: f64) -> Result<Self> {
        if !(tau > 0.0 && fs > 0.0 && tau.is_finite() && fs.is_finite()) {
            return Err(Error::InvalidWindow(format!("tau = {tau}, fs = {fs}")));
        }
        let n = window_len(tau, fs);
        if n < 4 {
            return Err(Error::InvalidWindow(format!(
                "tau of {tau} s at {fs} Hz holds {n} samples, need at least 4"
            )));
        }
        let h = 1.0 / fs;
        let span = (n - 1) as f64 * h;
        let t5 = span.powi(5);

        let mut y_weights =
            trapezoid_weights(n, h, |s| 60.0 / t5 * (span * span + 6.0 * s * s - 6.0 * span * s));
        correct_moments(&mut y_weights, h, &[0.0, 0.0, 2.0]);

        // normalized so that a constant input of 1 yields exactly 1
        let mut u_weights =
            trapezoid_weights(n, h, |s| 30.0 / t5 * (span - s).powi(2) * s * s);
        correct_moments(&mut u_weights, h, &[1.0, 0.5 * span, 2.0 / 7.0 * span * span]);

        Ok(Self { tau: span, fs, y_weights, u_weights })
    }

    /// Effective span `(n − 1)/fs`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.y_weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_weights.is_empty()
    }

    pub fn y_weights(&self) -> &[f64] {
        &self.y_weights
    }

    pub fn u_weights(&self) -> &[f64] {
        &self.u_weights
    }

    pub fn new_window(&self) -> SampleWindow {
        SampleWindow::new(self.len(), self.fs)
    }
}

/// Estimate of `F` at the trailing edge of two aligned windows.
pub fn f_estimate(
    y_window: &SampleWindow,
    u_window: &SampleWindow,
    alpha: f64,
    kernel: &FKernel,
) -> Result<f64> {
    for (name, w) in [("output", y_window), ("input", u_window)] {
        if w.capacity() != kernel.len() || !w.is_full() {
            return Err(Error::InsufficientData(format!(
                "{name} window holds {} of {} samples",
                w.len(),
                kernel.len()
            )));
        }
    }
    if !y_window.aligned_with(u_window) {
        return Err(Error::InsufficientData("output and input windows are not aligned".into()));
    }
    let y_term: f64 = kernel.y_weights.iter().zip(y_window.values()).map(|(w, y)| w * y).sum();
    let u_term: f64 = kernel.u_weights.iter().zip(u_window.values()).map(|(w, u)| w * u).sum();
    Ok(y_term - alpha * u_term)
}

/// Intelligent PD law, saturated to the actuator range.
pub fn ipd_control(f_est: f64, r: &Reference, e: f64, e_dot: f64, cfg: &ControllerConfig) -> f64 {
    cfg.clamp(-(f_est - r.ddy_star + cfg.kp * e + cfg.kd * e_dot) / cfg.alpha)
}

/// Derivative-free intelligent PD law. `fcal_est` is the F estimate
/// computed on the transformed output `Y`.
pub fn ipd2_control(fcal_est: f64, r: &Reference, e: f64, cfg: &ControllerConfig) -> f64 {
    cfg.clamp(-(fcal_est - r.ddy_star + cfg.kp * e + cfg.kd * r.dy_star) / cfg.alpha)
}

/// Running `Y(t) = y(t) + K_D ∫_c^t y(σ) dσ`, trapezoidal, with `c` the
/// time of the first sample.
#[derive(Debug, Clone)]
pub struct RiachyTransform {
    kd: f64,
    integral: f64,
    last: Option<(f64, f64)>,
}

impl RiachyTransform {
    pub fn new(kd: f64) -> Self {
        Self { kd, integral: 0.0, last: None }
    }

    pub fn push(&mut self, t: f64, y: f64) -> f64 {
        if let Some((t0, y0)) = self.last {
            self.integral += 0.5 * (t - t0) * (y + y0);
        }
        self.last = Some((t, y));
        y + self.kd * self.integral
    }
}

/// `Y` at the last sample of `history` (chronological `(t, y)` pairs).
pub fn riachy_transform(history: &[(f64, f64)], kd: f64) -> Option<f64> {
    let mut r = RiachyTransform::new(kd);
    history.iter().map(|&(t, y)| r.push(t, y)).last()
}

/// A crisis-free trace sampled on a uniform grid starting at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordedTrace {
    pub t0: f64,
    pub fs: f64,
    pub samples: Vec<Reference>,
}

impl RecordedTrace {
    pub fn at(&self, t: f64) -> Result<Reference> {
        let pos = ((t - self.t0) * self.fs).round();
        let end = self.t0 + (self.samples.len() as f64 - 1.0) / self.fs;
        if pos < 0.0 || pos as usize >= self.samples.len() || !pos.is_finite() {
            return Err(Error::ExhaustedReference { t, start: self.t0, end });
        }
        Ok(self.samples[pos as usize])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSource {
    Constant(f64),
    Recorded(RecordedTrace),
}

/// Reference at time `t`.
pub fn reference_generator(source: &ReferenceSource, t: f64) -> Result<Reference> {
    match source {
        ReferenceSource::Constant(v) => Ok(Reference::constant(*v)),
        ReferenceSource::Recorded(trace) => trace.at(t),
    }
}

/// What the controller computed on one sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ControlOutput {
    /// Saturated command.
    pub u: f64,
    /// `F` (iPD) or `𝓕` (iPD2) estimate; `None` until the windows fill.
    pub f_est: Option<f64>,
    pub e_dot: Option<f64>,
}

/// Per-sample controller state machine.
///
/// Every call records the measurement and the input that was applied over
/// the preceding sample period, so the estimation windows stay current even
/// while stimulation is gated off.
#[derive(Debug, Clone)]
pub struct Controller {
    cfg: ControllerConfig,
    kernel: FKernel,
    y_window: SampleWindow,
    u_window: SampleWindow,
    big_y_window: SampleWindow,
    riachy: RiachyTransform,
    e_diff: Differentiator,
}

impl Controller {
    pub fn new(cfg: ControllerConfig, fs: f64) -> Result<Self> {
        cfg.validate()?;
        let kernel = FKernel::design(cfg.tau, fs)?;
        Ok(Self {
            y_window: kernel.new_window(),
            u_window: kernel.new_window(),
            big_y_window: kernel.new_window(),
            riachy: RiachyTransform::new(cfg.kd),
            e_diff: Differentiator::new(cfg.deriv_window, fs)?,
            kernel,
            cfg,
        })
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.cfg
    }

    pub fn kernel(&self) -> &FKernel {
        &self.kernel
    }

    /// Feeds the sample at `t` and returns the command for the next period.
    /// `u_applied` is the input held over the period ending at `t`.
    pub fn update(&mut self, t: f64, y: f64, u_applied: f64, r: &Reference) -> Result<ControlOutput> {
        let e = y - r.y_star;
        let big_y = self.riachy.push(t, y);
        self.y_window.push(t, y)?;
        self.u_window.push(t, u_applied)?;
        self.big_y_window.push(t, big_y)?;
        let e_dot = self.e_diff.push(t, e)?;

        if !self.u_window.is_full() {
            return Ok(ControlOutput { u: 0.0, f_est: None, e_dot });
        }
        let out = match self.cfg.mode {
            ControlMode::Ipd => {
                let f = f_estimate(&self.y_window, &self.u_window, self.cfg.alpha, &self.kernel)?;
                match e_dot {
                    Some(de) => ControlOutput {
                        u: ipd_control(f, r, e, de, &self.cfg),
                        f_est: Some(f),
                        e_dot,
                    },
                    None => ControlOutput { u: 0.0, f_est: Some(f), e_dot },
                }
            }
            ControlMode::Ipd2 => {
                let f =
                    f_estimate(&self.big_y_window, &self.u_window, self.cfg.alpha, &self.kernel)?;
                ControlOutput { u: ipd2_control(f, r, e, &self.cfg), f_est: Some(f), e_dot }
            }
        };
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FS: f64 = 512.0;

    fn filled(kernel: &FKernel, t_end: f64, f: impl Fn(f64) -> f64) -> SampleWindow {
        let mut w = kernel.new_window();
        let n = kernel.len();
        for i in 0..n {
            let t = t_end - (n - 1 - i) as f64 / FS;
            w.push(t, f(t)).unwrap();
        }
        w
    }

    fn estimate(y: impl Fn(f64) -> f64, u: impl Fn(f64) -> f64, alpha: f64, t_end: f64) -> f64 {
        let k = FKernel::design(0.04, FS).unwrap();
        f_estimate(&filled(&k, t_end, y), &filled(&k, t_end, u), alpha, &k).unwrap()
    }

    #[test]
    fn exact_on_low_order_outputs() {
        for t_end in [0.04, 1.0, 7.3] {
            assert!(estimate(|_| 1.0, |_| 0.0, 1e4, t_end).abs() < 1e-3);
            assert!(estimate(|t| t, |_| 0.0, 1e4, t_end).abs() < 1e-3);
            let f = estimate(|t| t * t / 2.0, |_| 0.0, 1e4, t_end);
            assert!((f - 1.0).abs() < 1e-3, "{f}");
        }
    }

    #[test]
    fn constant_input_gives_minus_alpha_c() {
        for (alpha, c) in [(1e4, 1.0), (-1e5, 0.3), (2.0, -7.0)] {
            let f = estimate(|_| 0.0, |_| c, alpha, 2.0);
            assert!((f + alpha * c).abs() <= 1e-3 * (alpha * c).abs(), "{f}");
        }
    }

    #[test]
    fn exact_on_quadratic_input() {
        // ultra-local model: F = ÿ − α u, with y ≡ 0 and u quadratic
        let u = |t: f64| 0.5 - 2.0 * t + 3.0 * t * t;
        let t_end = 1.5;
        let k = FKernel::design(0.04, FS).unwrap();
        let span = k.tau();
        // (30/τ⁵)∫(τ−σ)²σ² u(t−τ+σ) dσ, integrated symbolically
        let t0 = t_end - span;
        let m0 = 1.0;
        let m1 = 0.5 * span;
        let m2 = 2.0 / 7.0 * span * span;
        let weighted = u(t0) * m0 + (-2.0 + 6.0 * t0) * m1 + 3.0 * m2;
        let f = estimate(|_| 0.0, u, 10.0, t_end);
        assert!((f + 10.0 * weighted).abs() < 1e-9 * weighted.abs().max(1.0), "{f} vs {}", -10.0 * weighted);
    }

    #[test]
    fn short_or_misaligned_windows_are_rejected() {
        let k = FKernel::design(0.04, FS).unwrap();
        let mut short = k.new_window();
        short.push(0.0, 1.0).unwrap();
        let full = filled(&k, 1.0, |_| 0.0);
        assert!(matches!(f_estimate(&short, &full, 1.0, &k), Err(Error::InsufficientData(_))));
        let shifted = filled(&k, 1.0 + 1.0 / FS, |_| 0.0);
        assert!(matches!(f_estimate(&full, &shifted, 1.0, &k), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn kernel_design_rejects_tiny_windows() {
        assert!(matches!(FKernel::design(0.004, FS), Err(Error::InvalidWindow(_))));
        assert!(matches!(FKernel::design(-1.0, FS), Err(Error::InvalidWindow(_))));
    }

    #[test]
    fn weights_depend_only_on_tau_and_fs() {
        assert_eq!(FKernel::design(0.04, FS).unwrap(), FKernel::design(0.04, FS).unwrap());
    }

    #[test]
    fn admissibility_examples() {
        assert!(gains_admissible(100.0, 20.0));
        assert!(gains_admissible(400.0, 40.0));
        assert!(!gains_admissible(-1.0, 5.0));
        assert!(!gains_admissible(1.0, 0.0));
        let cfg = ControllerConfig { kp: -5.0, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::InadmissibleGains { .. })));
    }

    #[test]
    fn ipd_arithmetic() {
        let cfg = ControllerConfig::default();
        let r = Reference::constant(0.0);
        assert_eq!(ipd_control(0.0, &r, 0.0, 0.0, &cfg), 0.0);
        assert!((ipd_control(0.0, &r, 1.0, 0.0, &cfg) + 0.01).abs() < 1e-15);
        let r = Reference { y_star: 1.0, dy_star: 0.0, ddy_star: 3.5 };
        assert_eq!(ipd_control(3.5, &r, 0.0, 0.0, &cfg), 0.0);
        let u1 = ipd_control(2.0, &r, 0.4, -1.0, &cfg);
        let u2 = ipd_control(2.0, &r, 0.4, -1.0, &ControllerConfig { alpha: 2e4, ..cfg.clone() });
        assert!((u1 - 2.0 * u2).abs() < 1e-15);
    }

    #[test]
    fn ipd2_arithmetic() {
        let cfg = ControllerConfig { mode: ControlMode::Ipd2, ..Default::default() };
        assert_eq!(ipd2_control(0.0, &Reference::constant(4.0), 0.0, &cfg), 0.0);
        let r = Reference { y_star: 0.0, dy_star: 2.0, ddy_star: 1.0 };
        let want = -(5.0 - 1.0 + 100.0 * 0.5 + 20.0 * 2.0) / 1e4;
        assert!((ipd2_control(5.0, &r, 0.5, &cfg) - want).abs() < 1e-15);
    }

    #[test]
    fn saturation_binds() {
        let cfg = ControllerConfig { u_min: -1.0, u_max: 2.0, ..Default::default() };
        let r = Reference::constant(0.0);
        assert_eq!(ipd_control(-1e9, &r, 0.0, 0.0, &cfg), 2.0);
        assert_eq!(ipd_control(1e9, &r, 0.0, 0.0, &cfg), -1.0);
        assert_eq!(ipd2_control(1e9, &r, 0.0, &cfg), -1.0);
    }

    #[test]
    fn riachy_identities() {
        let hist: Vec<(f64, f64)> = (0..100).map(|k| (k as f64 / FS, (k as f64 * 0.1).sin())).collect();
        assert_eq!(riachy_transform(&hist, 0.0), Some(hist[99].1));
        let ones: Vec<(f64, f64)> = (0..=512).map(|k| (k as f64 / FS, 1.0)).collect();
        assert!((riachy_transform(&ones, 40.0).unwrap() - 41.0).abs() < 1e-12);
        assert_eq!(riachy_transform(&[], 3.0), None);
    }

    #[test]
    fn riachy_second_derivative_by_finite_differences() {
        // Ÿ = ÿ + K_D ẏ for smooth y
        let kd = 40.0;
        let y = |t: f64| (3.0 * t).sin() + 0.2 * t * t;
        let dy = |t: f64| 3.0 * (3.0 * t).cos() + 0.4 * t;
        let ddy = |t: f64| -9.0 * (3.0 * t).sin() + 0.4;
        for (fs, tol) in [(1024.0, 2e-3), (4096.0, 2e-4)] {
            let h = 1.0 / fs;
            let mut r = RiachyTransform::new(kd);
            let big: Vec<f64> = (0..=(fs as usize)).map(|k| r.push(k as f64 * h, y(k as f64 * h))).collect();
            let k = fs as usize / 2;
            let t = k as f64 * h;
            let fd = (big[k + 1] - 2.0 * big[k] + big[k - 1]) / (h * h);
            let want = ddy(t) + kd * dy(t);
            assert!((fd - want).abs() < tol * want.abs(), "fs {fs}: {fd} vs {want}");
        }
    }

    #[test]
    fn recorded_trace_lookup_and_exhaustion() {
        let samples: Vec<Reference> =
            (0..10).map(|k| Reference { y_star: k as f64, dy_star: 1.0, ddy_star: 0.0 }).collect();
        let trace = RecordedTrace { t0: 1.0, fs: 10.0, samples: samples.clone() };
        let src = ReferenceSource::Recorded(trace);
        assert_eq!(reference_generator(&src, 1.3).unwrap(), samples[3]);
        assert_eq!(reference_generator(&src, 1.9).unwrap(), samples[9]);
        assert!(matches!(reference_generator(&src, 2.0), Err(Error::ExhaustedReference { .. })));
        assert!(matches!(reference_generator(&src, 0.9), Err(Error::ExhaustedReference { .. })));
        let c = ReferenceSource::Constant(11.0);
        for t in [0.0, 5.0, 1e6] {
            assert_eq!(reference_generator(&c, t).unwrap(), Reference { y_star: 11.0, dy_star: 0.0, ddy_star: 0.0 });
        }
    }

    /// Double integrator with drift, `ÿ = F0(t) + α0 u`, under either mode.
    fn linear_plant_run(mode: ControlMode, alpha_true: f64) -> Vec<f64> {
        let cfg = ControllerConfig { alpha: 50.0, kp: 100.0, kd: 20.0, mode, ..Default::default() };
        let mut ctl = Controller::new(cfg, FS).unwrap();
        let (mut y, mut v, mut u) = (0.0, 0.0, 0.0);
        let dt = 1.0 / FS;
        let r = Reference::constant(1.0);
        let mut err = Vec::new();
        for k in 0..(4 * FS as usize) {
            let t = k as f64 * dt;
            u = ctl.update(t, y, u, &r).unwrap().u;
            let f0 = 5.0 + 3.0 * (2.0 * t).sin();
            let acc = f0 + alpha_true * u;
            y += v * dt + 0.5 * acc * dt * dt;
            v += acc * dt;
            err.push(y - 1.0);
        }
        err
    }

    #[test]
    fn tracks_on_a_linear_plant() {
        for mode in [ControlMode::Ipd, ControlMode::Ipd2] {
            let e = linear_plant_run(mode, 50.0);
            let tail = &e[3 * FS as usize..];
            let worst = tail.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            assert!(worst < 0.02, "{mode:?}: {worst}");
        }
    }

    #[test]
    fn modes_agree_on_a_smooth_run() {
        let a = linear_plant_run(ControlMode::Ipd, 50.0);
        let b = linear_plant_run(ControlMode::Ipd2, 50.0);
        let skip = FS as usize;
        let rms = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
        let diff: Vec<f64> = a[skip..].iter().zip(&b[skip..]).map(|(x, y)| x - y).collect();
        // both near zero after the transient: compare against the step size
        assert!(rms(&diff) < 0.05, "{}", rms(&diff));
    }

    #[test]
    fn perfect_tracking_leaves_only_the_feedforward() {
        // y equal to y* keeps e = 0, so u = −(F − ÿ*)/α
        let cfg = ControllerConfig::default();
        let mut ctl = Controller::new(cfg.clone(), FS).unwrap();
        let mut last = ControlOutput::default();
        for k in 0..200 {
            let t = k as f64 / FS;
            let r = Reference { y_star: t * t / 2.0, dy_star: t, ddy_star: 1.0 };
            last = ctl.update(t, r.y_star, 0.0, &r).unwrap();
        }
        let f = last.f_est.unwrap();
        assert!((f - 1.0).abs() < 1e-3);
        assert!(last.e_dot.unwrap().abs() < 1e-9);
        assert!((last.u + (f - 1.0) / cfg.alpha).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn output_within_bounds(f in -1e6..1e6f64, e in -1e3..1e3f64, de in -1e3..1e3f64, a in prop_oneof![-1e5..-1e-3f64, 1e-3..1e5f64]) {
            let cfg = ControllerConfig { alpha: a, u_min: -3.0, u_max: 7.0, ..Default::default() };
            let r = Reference::constant(0.5);
            let u = ipd_control(f, &r, e, de, &cfg);
            prop_assert!((-3.0..=7.0).contains(&u));
            let u2 = ipd2_control(f, &r, e, &cfg);
            prop_assert!((-3.0..=7.0).contains(&u2));
        }

        #[test]
        fn estimator_is_linear(a in -10.0..10.0f64, b in -10.0..10.0f64, s in 0u64..1000) {
            let k = FKernel::design(0.04, FS).unwrap();
            let g1 = |t: f64| ((t + s as f64) * 7.0).sin();
            let g2 = |t: f64| ((t * 3.0).cos() + s as f64 * 0.01).powi(2);
            let y1 = filled(&k, 1.0, g1);
            let y2 = filled(&k, 1.0, g2);
            let y3 = filled(&k, 1.0, |t| a * g1(t) + b * g2(t));
            let u0 = filled(&k, 1.0, |_| 0.0);
            let lhs = f_estimate(&y3, &u0, 1.0, &k).unwrap();
            let rhs = a * f_estimate(&y1, &u0, 1.0, &k).unwrap() + b * f_estimate(&y2, &u0, 1.0, &k).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
