//! Real-time seizure detection from the timing of large maxima.
//!
//! Maxima are found as hysteresis-qualified zero crossings of the
//! derivative estimate: the detector arms once the derivative exceeds
//! `upper_threshold` and fires when it next falls through
//! `lower_threshold`. A run of short intervals between consecutive maxima
//! raises the seizure flag; a run of long ones clears it.

use serde::{Deserialize, Serialize};

use crate::diffest::Differentiator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorConfig {
    /// Arm level for the derivative estimate (> 0).
    pub upper_threshold: f64,
    /// Fire level (≤ 0).
    pub lower_threshold: f64,
    /// Intervals shorter than this count towards a seizure (s).
    pub interval_threshold: f64,
    /// Consecutive qualifying intervals needed to flip the flag.
    pub persistence: u32,
    /// Minimum spacing between accepted maxima (s).
    pub refractory: f64,
    /// Differentiator window (s).
    pub window: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            upper_threshold: 60.0,
            lower_threshold: 0.0,
            interval_threshold: 0.3,
            persistence: 3,
            refractory: 0.01,
            window: 0.05,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.upper_threshold > 0.0 && self.upper_threshold.is_finite()) {
            return Err(Error::invalid("detector.upper_threshold", "must be positive"));
        }
        if !(self.lower_threshold <= 0.0 && self.lower_threshold.is_finite()) {
            return Err(Error::invalid("detector.lower_threshold", "must be non-positive"));
        }
        if self.persistence < 1 {
            return Err(Error::invalid("detector.persistence", "must be at least 1"));
        }
        if !(self.refractory >= 0.0 && self.refractory.is_finite()) {
            return Err(Error::invalid("detector.refractory", "must be non-negative"));
        }
        if !(self.interval_threshold > 0.0 && self.interval_threshold.is_finite()) {
            return Err(Error::invalid("detector.interval_threshold", "must be positive"));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(Error::invalid("detector.window", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximumEvent {
    pub time: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SeizureState {
    pub flag: bool,
    /// Time of the last flag change.
    pub since: f64,
    /// Consecutive intervals voting against the current flag.
    pub streak: u32,
}

/// One step of the arm/fire hysteresis. Returns `(fired, armed')`.
pub fn detect_maximum(d_prev: f64, d_curr: f64, armed: bool, cfg: &DetectorConfig) -> (bool, bool) {
    let armed = armed || d_curr >= cfg.upper_threshold;
    if armed && d_prev > cfg.lower_threshold && d_curr <= cfg.lower_threshold {
        (true, false)
    } else {
        (false, armed)
    }
}

/// Interval between the two most recent maxima.
pub fn interval_update(events: &[MaximumEvent]) -> Result<f64> {
    match events {
        [.., a, b] => Ok(b.time - a.time),
        _ => Err(Error::NotReady("need at least two maxima")),
    }
}

/// Symmetric persistence hysteresis on the inter-maxima interval.
/// `t` is the time of the sample that produced `interval`.
pub fn seizure_update(interval: f64, t: f64, state: SeizureState, cfg: &DetectorConfig) -> SeizureState {
    let short = interval < cfg.interval_threshold;
    if short != state.flag {
        let streak = state.streak + 1;
        if streak >= cfg.persistence {
            SeizureState { flag: short, since: t, streak: 0 }
        } else {
            SeizureState { streak, ..state }
        }
    } else {
        SeizureState { streak: 0, ..state }
    }
}

/// Everything the streaming detector produced on one sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DetectorOutput {
    pub d_est: Option<f64>,
    pub event: Option<MaximumEvent>,
    /// Latest inter-maxima interval, if at least two maxima were seen.
    pub interval: Option<f64>,
    pub flag: bool,
}

/// Differentiator, maximum finder and seizure flag for one signal.
///
/// Event times are the interpolated crossing instant minus the
/// differentiator's group delay, so they refer to the signal's own time
/// axis rather than to the moment of detection.
#[derive(Debug, Clone)]
pub struct SeizureDetector {
    cfg: DetectorConfig,
    diff: Differentiator,
    armed: bool,
    prev: Option<(f64, f64)>,
    history: Vec<(f64, f64)>,
    events: Vec<MaximumEvent>,
    state: SeizureState,
    interval: Option<f64>,
}

impl SeizureDetector {
    pub fn new(cfg: DetectorConfig, fs: f64) -> Result<Self> {
        cfg.validate()?;
        let diff = Differentiator::new(cfg.window, fs)?;
        Ok(Self {
            cfg,
            diff,
            armed: false,
            prev: None,
            history: Vec::new(),
            events: Vec::new(),
            state: SeizureState::default(),
            interval: None,
        })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.cfg
    }

    pub fn events(&self) -> &[MaximumEvent] {
        &self.events
    }

    pub fn state(&self) -> SeizureState {
        self.state
    }

    pub fn update(&mut self, t: f64, y: f64) -> Result<DetectorOutput> {
        let d = self.diff.push(t, y)?;
        // keep enough raw history to read amplitudes at delayed event times
        self.history.push((t, y));
        let keep = self.diff.kernel().len() + 2;
        if self.history.len() > 4 * keep {
            self.history.drain(..self.history.len() - keep);
        }

        let mut event = None;
        if let Some(d_curr) = d {
            if let Some((t_prev, d_prev)) = self.prev {
                let (fired, armed) = detect_maximum(d_prev, d_curr, self.armed, &self.cfg);
                self.armed = armed;
                if fired {
                    let lower = self.cfg.lower_threshold;
                    let frac = if d_prev != d_curr { (d_prev - lower) / (d_prev - d_curr) } else { 1.0 };
                    let crossing = t_prev + frac * (t - t_prev);
                    let time = crossing - self.diff.kernel().group_delay();
                    let clear = self
                        .events
                        .last()
                        .is_none_or(|last| time - last.time >= self.cfg.refractory);
                    if clear {
                        let ev = MaximumEvent { time, amplitude: self.amplitude_at(time) };
                        self.events.push(ev);
                        event = Some(ev);
                        if let Ok(iv) = interval_update(&self.events) {
                            self.interval = Some(iv);
                            self.state = seizure_update(iv, t, self.state, &self.cfg);
                        }
                    }
                }
            } else {
                self.armed = d_curr >= self.cfg.upper_threshold;
            }
            self.prev = Some((t, d_curr));
        }
        Ok(DetectorOutput { d_est: d, event, interval: self.interval, flag: self.state.flag })
    }

    fn amplitude_at(&self, time: f64) -> f64 {
        self.history
            .iter()
            .min_by(|a, b| (a.0 - time).abs().total_cmp(&(b.0 - time).abs()))
            .map(|s| s.1)
            .unwrap_or(f64::NAN)
    }
}
