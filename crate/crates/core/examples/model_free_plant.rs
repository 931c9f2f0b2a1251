//! The controller knows nothing about the plant beyond the sign and rough
//! size of the input gain. Here the plant is a double integrator with an
//! unknown drifting term and a gain twice the assumed one.

use neuroloop::mfc::{ControlMode, Controller, ControllerConfig, Reference};

fn main() -> neuroloop::Result<()> {
    let fs = 512.0;
    let cfg = ControllerConfig { alpha: 50.0, kp: 100.0, kd: 20.0, mode: ControlMode::Ipd, ..Default::default() };
    let mut ctl = Controller::new(cfg, fs)?;
    let dt = 1.0 / fs;
    let (mut y, mut v, mut u) = (0.0_f64, 0.0_f64, 0.0_f64);
    println!("    t       y*       y        u        F est");
    for k in 0..(4.0 * fs) as usize {
        let t = k as f64 * dt;
        let w = 2.0 * std::f64::consts::PI * 0.5;
        let r = Reference { y_star: (w * t).sin(), dy_star: w * (w * t).cos(), ddy_star: -w * w * (w * t).sin() };
        let out = ctl.update(t, y, u, &r)?;
        u = out.u;
        if k % 128 == 0 {
            println!("{t:5.2}  {:7.3}  {y:7.3}  {u:7.3}  {:9.3}", r.y_star, out.f_est.unwrap_or(f64::NAN));
        }
        let acc = 3.0 + 2.0 * (1.7 * t).cos() - 0.5 * v + 100.0 * u;
        y += v * dt + 0.5 * acc * dt * dt;
        v += acc * dt;
    }
    Ok(())
}
