//! Differentiates a noisy chirp and reports the detected maxima. The time
//! between maxima shrinks as the frequency grows, which is what the
//! seizure detector keys on.

use std::path::Path;

use neuroloop::harness::{chirp_derivative, chirp_maxima, parse_config, run_chirp_demo};
use neuroloop::diffest::design_kernel;

fn main() -> neuroloop::Result<()> {
    let spec = parse_config(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/chirp.json"))?;
    let rec = run_chirp_demo(&spec)?;
    let delay = design_kernel(spec.detector.window, spec.fs)?.group_delay();

    let (mut num, mut den) = (0.0, 0.0);
    for r in rec.rows.iter().filter(|r| (0.5..=4.5).contains(&r.t)) {
        let truth = chirp_derivative(r.t - delay);
        num += (r.dest - truth).powi(2);
        den += truth * truth;
    }
    println!("noise sd {}, window {} s", spec.chirp.noise_sd, spec.detector.window);
    println!("derivative relative RMS error on [0.5, 4.5] s: {:.1}%", 100.0 * (num / den).sqrt());
    println!();
    println!("   maximum      analytic    interval");
    let analytic = chirp_maxima(spec.duration);
    let mut prev: Option<f64> = None;
    for ev in &rec.events {
        let nearest = analytic.iter().cloned().min_by(|a, b| (a - ev.time).abs().total_cmp(&(b - ev.time).abs())).unwrap();
        let iv = prev.map_or(String::from("-"), |p| format!("{:.4}", ev.time - p));
        println!("  {:8.4} s   {:8.4} s   {iv}", ev.time, nearest);
        prev = Some(ev.time);
    }
    let flag = rec.rows.iter().find(|r| r.flag).map(|r| r.t);
    println!();
    println!("flag (intervals under {} s, {} in a row) raised at {flag:?}", spec.detector.interval_threshold, spec.detector.persistence);
    Ok(())
}
