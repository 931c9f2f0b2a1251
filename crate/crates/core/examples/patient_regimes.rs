//! The virtual patient on its own: resting states, the background and
//! seizure regimes, and the three connectivity variants.

use neuroloop::patient::{equilibria, output_ym, resting_state, step, PatientParams};

fn swing(pp: &PatientParams, p: f64) -> (f64, f64) {
    let fs = 512.0;
    let mut s = resting_state(pp, 200.0);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..(8.0 * fs) as usize {
        if k as f64 >= 2.0 * fs {
            let ym = output_ym(&s);
            lo = lo.min(ym);
            hi = hi.max(ym);
        }
        s = step(&s, 0.0, p, 1.0 / fs, pp);
    }
    (lo, hi)
}

fn main() {
    let nominal = PatientParams::nominal();
    for p in [200.0, 800.0] {
        let eqs = equilibria(&nominal, 0.0, p);
        println!("p = {p}: {} equilibria, y_m at rest:", eqs.len());
        for e in &eqs {
            println!("    y_m = {:8.3} mV  (y1 = {:.3})", output_ym(e), e.y[1]);
        }
    }
    println!();
    println!("noise-free swings of y_m from the quiet state, t in [2, 8] s");
    for c in [0.9, 1.0, 1.1] {
        let pp = nominal.make_patient_variant(c).unwrap();
        let (lo200, hi200) = swing(&pp, 200.0);
        let (lo800, hi800) = swing(&pp, 800.0);
        println!(
            "  C x {c:.1}: p=200 [{lo200:7.2}, {hi200:7.2}]   p=800 [{lo800:7.2}, {hi800:7.2}]"
        );
    }
}
