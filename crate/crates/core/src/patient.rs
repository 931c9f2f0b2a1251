//! The virtual patient: a Wendling neural-mass model with an additive
//! stimulation input `u` inside every population sigmoid, driven by an
//! excitatory pulse density `p(t)` from neighbouring areas.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::rk4_step;

/// Wave-to-pulse conversion constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SigmoidParams {
    /// Maximum firing rate (s⁻¹).
    pub v_max: f64,
    /// Firing threshold potential (mV).
    pub v0: f64,
    /// Steepness (mV⁻¹).
    pub r: f64,
}

impl Default for SigmoidParams {
    fn default() -> Self {
        Self { v_max: 5.0, v0: 6.0, r: 0.56 }
    }
}

impl SigmoidParams {
    #[inline]
    pub fn eval(&self, v: f64) -> f64 {
        sigmoid(v, self)
    }
}

/// Mean firing rate of a population whose mean membrane potential is `v`.
#[inline]
pub fn sigmoid(v: f64, sp: &SigmoidParams) -> f64 {
    sp.v_max / (1.0 + (sp.r * (sp.v0 - v)).exp())
}

/// Constants of one virtual patient.
///
/// `connectivity[i]` holds `C_{i+1}`; the model uses all seven.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PatientParams {
    /// Excitatory PSP gain `A` (mV).
    #[serde(rename = "A")]
    pub exc_gain: f64,
    /// Slow inhibitory PSP gain `B` (mV).
    #[serde(rename = "B")]
    pub slow_gain: f64,
    /// Fast inhibitory PSP gain `G` (mV).
    #[serde(rename = "G")]
    pub fast_gain: f64,
    /// Excitatory reciprocal time constant `a` (s⁻¹).
    #[serde(rename = "a")]
    pub exc_rate: f64,
    /// Slow inhibitory reciprocal time constant `b` (s⁻¹).
    #[serde(rename = "b")]
    pub slow_rate: f64,
    /// Fast inhibitory reciprocal time constant `g` (s⁻¹).
    #[serde(rename = "g")]
    pub fast_rate: f64,
    #[serde(rename = "C")]
    pub connectivity: [f64; 7],
    pub sigmoid: SigmoidParams,
}

impl Default for PatientParams {
    fn default() -> Self {
        Self::nominal()
    }
}

impl PatientParams {
    /// The reference patient: `C1 = 135` with the usual Wendling ratios.
    pub fn nominal() -> Self {
        let c1 = 135.0;
        Self {
            exc_gain: 3.25,
            slow_gain: 22.0,
            fast_gain: 20.0,
            exc_rate: 100.0,
            slow_rate: 30.0,
            fast_rate: 350.0,
            connectivity: [
                c1,
                0.8 * c1,
                0.25 * c1,
                0.25 * c1,
                0.3 * c1,
                0.1 * c1,
                0.8 * c1,
            ],
            sigmoid: SigmoidParams::default(),
        }
    }

    /// `C_i` using the 1-based numbering of the model equations.
    #[inline]
    pub fn c(&self, i: usize) -> f64 {
        self.connectivity[i - 1]
    }

    /// A different virtual patient: every connectivity constant scaled by
    /// `c_scale`, everything else untouched.
    pub fn make_patient_variant(&self, c_scale: f64) -> Result<Self> {
        if !(c_scale > 0.0 && c_scale.is_finite()) {
            return Err(Error::invalid("c_scale", format!("must be positive, got {c_scale}")));
        }
        let mut out = self.clone();
        for c in out.connectivity.iter_mut() {
            *c *= c_scale;
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("A", self.exc_gain),
            ("B", self.slow_gain),
            ("G", self.fast_gain),
            ("a", self.exc_rate),
            ("b", self.slow_rate),
            ("g", self.fast_rate),
            ("sigmoid.v_max", self.sigmoid.v_max),
            ("sigmoid.r", self.sigmoid.r),
        ];
        for (name, v) in named {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !self.sigmoid.v0.is_finite() {
            return Err(Error::invalid("sigmoid.v0", "must be finite"));
        }
        for (i, c) in self.connectivity.iter().enumerate() {
            if !(*c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "C",
                    reason: format!("C{} must be positive and finite, got {c}", i + 1),
                });
            }
        }
        Ok(())
    }
}

/// Post-synaptic potentials `y0..y4` (mV) and their time derivatives (mV/s).
///
/// The same layout doubles as the right-hand side returned by
/// [`derivatives`], where `y` then holds `dy/dt` and `dy` holds `d²y/dt²`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeuralState {
    pub y: [f64; 5],
    pub dy: [f64; 5],
}

impl NeuralState {
    pub fn to_array(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        out[..5].copy_from_slice(&self.y);
        out[5..].copy_from_slice(&self.dy);
        out
    }

    pub fn from_array(a: &[f64; 10]) -> Self {
        let mut s = Self::default();
        s.y.copy_from_slice(&a[..5]);
        s.dy.copy_from_slice(&a[5..]);
        s
    }

    pub fn is_finite(&self) -> bool {
        self.y.iter().chain(self.dy.iter()).all(|v| v.is_finite())
    }
}

/// Summed input to the pyramidal population, `y1 − y2 − y3`.
#[inline]
pub fn output_ym(s: &NeuralState) -> f64 {
    s.y[1] - s.y[2] - s.y[3]
}

/// Right-hand side of the stimulated model for stimulation `u` (mV) and
/// pulse density `p` (s⁻¹).
pub fn derivatives(s: &NeuralState, u: f64, p: f64, pp: &PatientParams) -> NeuralState {
    let sig = |v: f64| sigmoid(v, &pp.sigmoid);
    let (a, b, g) = (pp.exc_rate, pp.slow_rate, pp.fast_rate);
    let (big_a, big_b, big_g) = (pp.exc_gain, pp.slow_gain, pp.fast_gain);
    let y = &s.y;
    let dy = &s.dy;

    let s_pyr = sig(u + y[1] - y[2] - y[3]);
    let s_exc = sig(u + pp.c(1) * y[0]);
    let s_slow = sig(u + pp.c(3) * y[0]);
    let s_fast = sig(u + pp.c(5) * y[0] - y[4]);

    let ddy = [
        big_a * a * s_pyr - 2.0 * a * dy[0] - a * a * y[0],
        big_a * a * (p + pp.c(2) * s_exc) - 2.0 * a * dy[1] - a * a * y[1],
        big_b * b * pp.c(4) * s_slow - 2.0 * b * dy[2] - b * b * y[2],
        big_g * g * pp.c(7) * s_fast - 2.0 * g * dy[3] - g * g * y[3],
        big_b * b * pp.c(6) * s_slow - 2.0 * b * dy[4] - b * b * y[4],
    ];
    NeuralState { y: *dy, dy: ddy }
}

/// One RK4 step of length `dt` with `u` and `p` held constant.
pub fn step(s: &NeuralState, u: f64, p: f64, dt: f64, pp: &PatientParams) -> NeuralState {
    let x = s.to_array();
    let next = rk4_step(&x, dt, |x| derivatives(&NeuralState::from_array(x), u, p, pp).to_array());
    NeuralState::from_array(&next)
}

/// Steady states of the model for constant `u` and `p`, ordered by
/// increasing `y0`.
///
/// At rest every second-order block sits at `y_i = (gain/rate)·input_i`,
/// which collapses the system to one scalar equation in `y0`; its roots are
/// bracketed on a fine grid over `(0, A·v_max/a)` and refined by bisection.
pub fn equilibria(pp: &PatientParams, u: f64, p: f64) -> Vec<NeuralState> {
    let at = |y0: f64| rest_state(pp, u, p, y0);
    let residual = |y0: f64| {
        let s = at(y0);
        pp.exc_gain / pp.exc_rate * pp.sigmoid.eval(u + output_ym(&s)) - y0
    };
    let hi = pp.exc_gain / pp.exc_rate * pp.sigmoid.v_max;
    let grid = 4000;
    let mut roots = Vec::new();
    let mut x_prev = 0.0;
    let mut f_prev = residual(x_prev);
    for i in 1..=grid {
        let x = hi * i as f64 / grid as f64;
        let f = residual(x);
        if f_prev == 0.0 {
            roots.push(x_prev);
        } else if f_prev * f < 0.0 {
            let (mut lo, mut up, mut f_lo) = (x_prev, x, f_prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + up);
                let fm = residual(mid);
                if fm == 0.0 || up - lo < 1e-17 {
                    lo = mid;
                    up = mid;
                    break;
                }
                if (fm < 0.0) == (f_lo < 0.0) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    up = mid;
                }
            }
            roots.push(0.5 * (lo + up));
        }
        x_prev = x;
        f_prev = f;
    }
    roots.into_iter().map(at).collect()
}

fn rest_state(pp: &PatientParams, u: f64, p: f64, y0: f64) -> NeuralState {
    let sig = |v: f64| pp.sigmoid.eval(v);
    let ka = pp.exc_gain / pp.exc_rate;
    let kb = pp.slow_gain / pp.slow_rate;
    let kg = pp.fast_gain / pp.fast_rate;
    let y1 = ka * (p + pp.c(2) * sig(u + pp.c(1) * y0));
    let y2 = kb * pp.c(4) * sig(u + pp.c(3) * y0);
    let y4 = kb * pp.c(6) * sig(u + pp.c(3) * y0);
    let y3 = kg * pp.c(7) * sig(u + pp.c(5) * y0 - y4);
    NeuralState { y: [y0, y1, y2, y3, y4], dy: [0.0; 5] }
}

/// Piecewise-constant pulse density with additive Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerturbationProfile {
    /// Pulse density up to and including `switch_time` (s⁻¹).
    pub baseline: f64,
    /// Pulse density after `switch_time` (s⁻¹).
    pub elevated: f64,
    pub switch_time: f64,
    pub noise_sd: f64,
}

impl Default for PerturbationProfile {
    fn default() -> Self {
        Self { baseline: 200.0, elevated: 800.0, switch_time: 2.0, noise_sd: 10.0 }
    }
}

impl PerturbationProfile {
    pub fn constant(level: f64, noise_sd: f64) -> Self {
        Self { baseline: level, elevated: level, switch_time: f64::INFINITY, noise_sd }
    }

    #[inline]
    pub fn mean_at(&self, t: f64) -> f64 {
        if t <= self.switch_time {
            self.baseline
        } else {
            self.elevated
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::invalid("perturbation.noise_sd", "must be a finite non-negative number"));
        }
        if !(self.baseline.is_finite() && self.elevated.is_finite()) {
            return Err(Error::invalid("perturbation", "levels must be finite"));
        }
        if self.switch_time.is_nan() {
            return Err(Error::invalid("perturbation.switch_time", "must not be NaN"));
        }
        Ok(())
    }
}

/// Draws `p(t)` for one sample period. Noise-free profiles consume no
/// randomness.
pub fn perturbation<R: Rng + ?Sized>(t: f64, profile: &PerturbationProfile, rng: &mut R) -> f64 {
    let mean = profile.mean_at(t);
    if profile.noise_sd == 0.0 {
        return mean;
    }
    let noise = Normal::new(0.0, profile.noise_sd).expect("validated noise_sd");
    mean + noise.sample(rng)
}

/// A seeded stream of pulse-density samples.
#[derive(Debug, Clone)]
pub struct PerturbationSource {
    profile: PerturbationProfile,
    rng: ChaCha8Rng,
}

impl PerturbationSource {
    pub fn new(profile: PerturbationProfile, seed: u64) -> Self {
        Self { profile, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn profile(&self) -> &PerturbationProfile {
        &self.profile
    }

    pub fn sample(&mut self, t: f64) -> f64 {
        perturbation(t, &self.profile, &mut self.rng)
    }
}

/// Lowest-`y0` equilibrium at `u = 0` and the baseline pulse density, the
/// quiet background state. Falls back to the zero state if none exists.
pub fn resting_state(pp: &PatientParams, baseline: f64) -> NeuralState {
    equilibria(pp, 0.0, baseline).into_iter().next().unwrap_or_default()
}

/// Settles the patient for `duration` seconds at the baseline pulse density
/// with `u = 0`, starting from [`resting_state`].
pub fn warm_up(
    pp: &PatientParams,
    source: &mut PerturbationSource,
    duration: f64,
    fs: f64,
) -> NeuralState {
    let dt = 1.0 / fs;
    let steps = (duration * fs).round() as usize;
    let mut s = resting_state(pp, source.profile().baseline);
    // sample at t = 0 so the baseline level applies throughout
    for _ in 0..steps {
        let p = source.sample(0.0);
        s = step(&s, 0.0, p, dt, pp);
    }
    s
}
