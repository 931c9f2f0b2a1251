use serde::{Deserialize, Serialize};

use crate::harness::run::RunRecord;
use crate::harness::scenario::ScenarioSpec;

/// Settling time excluded from the tracking error after activation (s).
pub const SETTLING: f64 = 0.5;
/// Start of the window in which a raised flag counts as a false positive (s).
pub const FALSE_POSITIVE_START: f64 = 0.5;

/// Summary of one run. Optional entries are `None` when the run never
/// produced the underlying event (no activation, no detection).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// RMS of `y - y*` on the true output after activation plus settling.
    pub tracking_rmse: Option<f64>,
    /// Mean `|y*|` over the same samples.
    pub reference_amplitude: Option<f64>,
    /// Standard deviation of `y*` over the same samples.
    pub reference_std: Option<f64>,
    pub u_min_obs: f64,
    pub u_max_obs: f64,
    /// First flag rise after the perturbation switch, relative to it.
    pub detection_latency: Option<f64>,
    /// Flag rises on `[0.5 s, switch]`.
    pub false_positive_count: usize,
    pub activation_time: Option<f64>,
    /// Sign changes of `Δu` after activation.
    pub chattering_count: usize,
    pub event_count: usize,
    /// Peak-to-peak `y_m` over `[0, switch]`.
    pub ym_ptp_pre: Option<f64>,
    /// Peak-to-peak `y_m` from one second after the switch to the end.
    pub ym_ptp_post: Option<f64>,
}

fn ptp(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    (lo <= hi).then_some(hi - lo)
}

pub fn compute_metrics(record: &RunRecord, spec: &ScenarioSpec) -> Metrics {
    let rows = &record.rows;
    let switch = spec.perturbation.switch_time;

    let (mut u_min, mut u_max) = (0.0_f64, 0.0_f64);
    for r in rows {
        u_min = u_min.min(r.u);
        u_max = u_max.max(r.u);
    }

    let (mut tracking_rmse, mut reference_amplitude, mut reference_std) = (None, None, None);
    let mut chattering = 0;
    if let Some(t_on) = record.activation_time {
        let tracked: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.t >= t_on + SETTLING && r.ystar.is_finite())
            .map(|r| (r.output(spec.output_signal), r.ystar))
            .collect();
        if !tracked.is_empty() {
            let n = tracked.len() as f64;
            let mse = tracked.iter().map(|(y, s)| (y - s).powi(2)).sum::<f64>() / n;
            let mean = tracked.iter().map(|(_, s)| s).sum::<f64>() / n;
            let var = tracked.iter().map(|(_, s)| (s - mean).powi(2)).sum::<f64>() / n;
            tracking_rmse = Some(mse.sqrt());
            reference_amplitude = Some(tracked.iter().map(|(_, s)| s.abs()).sum::<f64>() / n);
            reference_std = Some(var.sqrt());
        }
        let du: Vec<f64> =
            rows.windows(2).filter(|w| w[0].t >= t_on).map(|w| w[1].u - w[0].u).filter(|d| *d != 0.0).collect();
        chattering = du.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    }

    let rises: Vec<f64> = rows.windows(2).filter(|w| w[1].flag && !w[0].flag).map(|w| w[1].t).collect();
    let detection_latency = rises.iter().find(|&&t| t > switch).map(|t| t - switch);
    let false_positive_count = rises.iter().filter(|&&t| (FALSE_POSITIVE_START..=switch).contains(&t)).count();

    Metrics {
        tracking_rmse,
        reference_amplitude,
        reference_std,
        u_min_obs: u_min,
        u_max_obs: u_max,
        detection_latency,
        false_positive_count,
        activation_time: record.activation_time,
        chattering_count: chattering,
        event_count: record.events.len(),
        ym_ptp_pre: ptp(rows.iter().filter(|r| r.t <= switch).map(|r| r.ym)),
        ym_ptp_post: ptp(rows.iter().filter(|r| r.t >= switch + 1.0).map(|r| r.ym)),
    }
}
