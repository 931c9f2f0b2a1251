use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::detector::{MaximumEvent, SeizureDetector};
use crate::error::{Error, Result};
use crate::harness::scenario::{OutputSignal, ReferenceSpec, ScenarioKind, ScenarioSpec};
use crate::mfc::{reference_generator, Controller, RecordedTrace, Reference, ReferenceSource};
use crate::patient::{
    derivatives, output_ym, step, warm_up, NeuralState, PatientParams, PerturbationProfile,
    PerturbationSource,
};

/// One sample of a run. Quantities that do not apply are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRow {
    pub t: f64,
    pub y: [f64; 5],
    /// True `y1 - y2 - y3`.
    pub ym: f64,
    /// Measured value of the controlled output (of `y_m` in open loop).
    pub ymeas: f64,
    pub ystar: f64,
    /// Input held over `[t, t + 1/fs)`.
    pub u: f64,
    pub p: f64,
    pub fest: f64,
    pub dest: f64,
    pub interval: f64,
    pub flag: bool,
}

impl RunRow {
    pub fn output(&self, signal: OutputSignal) -> f64 {
        match signal {
            OutputSignal::Y1 => self.y[1],
            OutputSignal::Ym => self.ym,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub spec: ScenarioSpec,
    pub rows: Vec<RunRow>,
    pub events: Vec<MaximumEvent>,
    /// First sample at which stimulation was switched on.
    pub activation_time: Option<f64>,
}

impl RunRecord {
    pub fn empty(spec: ScenarioSpec) -> Self {
        Self { spec, rows: Vec::new(), events: Vec::new(), activation_time: None }
    }
}

/// Salt that separates the measurement-noise stream from the process-noise
/// stream of the same seed.
const MEASUREMENT_STREAM: u64 = 0x6d65_6173;

fn measurement_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(MEASUREMENT_STREAM);
    rng
}

fn output_of(s: &NeuralState, signal: OutputSignal) -> (f64, f64) {
    match signal {
        OutputSignal::Y1 => (s.y[1], s.dy[1]),
        OutputSignal::Ym => (output_ym(s), s.dy[1] - s.dy[2] - s.dy[3]),
    }
}

fn check_finite(s: &NeuralState, t: f64) -> Result<()> {
    if s.is_finite() && s.y.iter().all(|v| v.abs() < 1e6) {
        Ok(())
    } else {
        Err(Error::Divergence { t, detail: format!("state left the finite range: {:?}", s.y) })
    }
}

fn start_state(spec: &ScenarioSpec, pp: &PatientParams, src: &mut PerturbationSource) -> NeuralState {
    warm_up(pp, src, spec.warmup, spec.fs)
}

/// The trajectory the patient would follow without the crisis: same seed,
/// same noise draws, pulse density held at its baseline mean, no input.
/// Returns the output, its first and second derivatives on the run's grid.
pub fn crisis_free_reference(spec: &ScenarioSpec) -> Result<RecordedTrace> {
    let pp = spec.patient_params()?;
    let profile = PerturbationProfile { elevated: spec.perturbation.baseline, ..spec.perturbation };
    let mut src = PerturbationSource::new(profile, spec.seed);
    let mut s = start_state(spec, &pp, &mut src);
    let dt = 1.0 / spec.fs;
    let mut samples = Vec::with_capacity(spec.samples());
    for k in 0..spec.samples() {
        let t = k as f64 * dt;
        let p = src.sample(t);
        let (y, dy) = output_of(&s, spec.output_signal);
        let d = derivatives(&s, 0.0, p, &pp);
        let ddy = match spec.output_signal {
            OutputSignal::Y1 => d.dy[1],
            OutputSignal::Ym => d.dy[1] - d.dy[2] - d.dy[3],
        };
        samples.push(Reference { y_star: y, dy_star: dy, ddy_star: ddy });
        s = step(&s, 0.0, p, dt, &pp);
        check_finite(&s, t + dt)?;
    }
    Ok(RecordedTrace { t0: 0.0, fs: spec.fs, samples })
}

fn reference_source(spec: &ScenarioSpec) -> Result<ReferenceSource> {
    Ok(match spec.reference {
        ReferenceSpec::Constant { value: Some(v) } => ReferenceSource::Constant(v),
        ReferenceSpec::Constant { value: None } => {
            let trace = crisis_free_reference(spec)?;
            let n = trace.samples.len().max(1) as f64;
            ReferenceSource::Constant(trace.samples.iter().map(|r| r.y_star).sum::<f64>() / n)
        }
        ReferenceSpec::Recorded => ReferenceSource::Recorded(crisis_free_reference(spec)?),
    })
}

/// Simulates with `u ≡ 0` while the detector watches `y_m`.
pub fn run_open_loop(spec: &ScenarioSpec) -> Result<RunRecord> {
    simulate(spec, false)
}

/// Detector-gated closed loop. Per sample: measure, detect, control,
/// actuate, integrate. Stimulation starts at the first raised flag and
/// stays on.
pub fn run_closed_loop(spec: &ScenarioSpec) -> Result<RunRecord> {
    simulate(spec, true)
}

/// Runs the scenario kind named in `spec`.
pub fn run(spec: &ScenarioSpec) -> Result<RunRecord> {
    match spec.scenario {
        ScenarioKind::OpenLoop => run_open_loop(spec),
        ScenarioKind::ClosedLoop => run_closed_loop(spec),
        ScenarioKind::Chirp => run_chirp_demo(spec),
    }
}

fn simulate(spec: &ScenarioSpec, closed: bool) -> Result<RunRecord> {
    spec.validate()?;
    let pp = spec.patient_params()?;
    let dt = 1.0 / spec.fs;
    let n = spec.samples();

    let mut src = PerturbationSource::new(spec.perturbation, spec.seed);
    let mut s = start_state(spec, &pp, &mut src);
    let mut detector = SeizureDetector::new(spec.detector.clone(), spec.fs)?;

    let mut controller = if closed { Some(Controller::new(spec.controller.clone(), spec.fs)?) } else { None };
    let refs = if closed { Some(reference_source(spec)?) } else { None };

    let mut noise_rng = measurement_rng(spec.seed);
    let noise = (spec.measurement_noise_sd > 0.0)
        .then(|| Normal::new(0.0, spec.measurement_noise_sd).expect("validated noise sd"));
    let mut measure = |v: f64| match &noise {
        Some(d) => v + d.sample(&mut noise_rng),
        None => v,
    };

    let mut rows = Vec::with_capacity(n);
    let mut activation = None;
    let mut u_prev = 0.0;
    for k in 0..n {
        let t = k as f64 * dt;
        let p = src.sample(t);
        let ym = output_ym(&s);
        let ym_meas = measure(ym);
        let det = detector.update(t, ym_meas)?;
        if closed && det.flag && activation.is_none() {
            activation = Some(t);
        }

        let (mut u, mut ystar, mut fest, mut ymeas) = (0.0, f64::NAN, f64::NAN, ym_meas);
        if let (Some(ctl), Some(refs)) = (controller.as_mut(), refs.as_ref()) {
            ymeas = match spec.output_signal {
                OutputSignal::Ym => ym_meas,
                OutputSignal::Y1 => measure(s.y[1]),
            };
            let r = reference_generator(refs, t)?;
            let out = ctl.update(t, ymeas, u_prev, &r)?;
            ystar = r.y_star;
            fest = out.f_est.unwrap_or(f64::NAN);
            if activation.is_some() {
                u = out.u;
            }
        }

        rows.push(RunRow {
            t,
            y: s.y,
            ym,
            ymeas,
            ystar,
            u,
            p,
            fest,
            dest: det.d_est.unwrap_or(f64::NAN),
            interval: det.interval.unwrap_or(f64::NAN),
            flag: det.flag,
        });
        s = step(&s, u, p, dt, &pp);
        check_finite(&s, t + dt)?;
        u_prev = u;
    }

    Ok(RunRecord { spec: spec.clone(), rows, events: detector.events().to_vec(), activation_time: activation })
}

/// Instantaneous frequency of the chirp grows as `2t` Hz.
pub fn chirp_signal(t: f64, offset: f64) -> f64 {
    (2.0 * std::f64::consts::PI * t * t).sin() + offset
}

pub fn chirp_derivative(t: f64) -> f64 {
    4.0 * std::f64::consts::PI * t * (2.0 * std::f64::consts::PI * t * t).cos()
}

/// Maxima of the chirp: `t = sqrt(k + 1/4)`.
pub fn chirp_maxima(duration: f64) -> Vec<f64> {
    (0..).map(|k| (k as f64 + 0.25).sqrt()).take_while(|&t| t <= duration).collect()
}

/// Differentiates and scans a noisy chirp with the spec's detector. `ym`
/// holds the clean signal, `ymeas` the noisy one.
pub fn run_chirp_demo(spec: &ScenarioSpec) -> Result<RunRecord> {
    spec.validate()?;
    let mut detector = SeizureDetector::new(spec.detector.clone(), spec.fs)?;
    let mut rng = measurement_rng(spec.seed);
    let noise = (spec.chirp.noise_sd > 0.0)
        .then(|| Normal::new(0.0, spec.chirp.noise_sd).expect("validated noise sd"));
    let nan5 = [f64::NAN; 5];
    let mut rows = Vec::with_capacity(spec.samples());
    for k in 0..spec.samples() {
        let t = k as f64 / spec.fs;
        let clean = chirp_signal(t, spec.chirp.offset);
        let y = clean + noise.as_ref().map_or(0.0, |d| d.sample(&mut rng));
        let det = detector.update(t, y)?;
        rows.push(RunRow {
            t,
            y: nan5,
            ym: clean,
            ymeas: y,
            ystar: f64::NAN,
            u: 0.0,
            p: f64::NAN,
            fest: f64::NAN,
            dest: det.d_est.unwrap_or(f64::NAN),
            interval: det.interval.unwrap_or(f64::NAN),
            flag: det.flag,
        });
    }
    Ok(RunRecord { spec: spec.clone(), rows, events: detector.events().to_vec(), activation_time: None })
}
