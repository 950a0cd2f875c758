use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use areosync::controller::{radial_thrust, tangential_thrust, GainSet, RadialGainUnits};
use areosync::dynamics::{
    moon_perturbation, total_perturbation, truth_derivatives, MoonModel, PerturbationAccel,
    PlanetModel, SatelliteTruthState, ThrustCommand,
};
use areosync::sim::rk4_step;
use areosync::{DesiredOrbit64, Scenario64};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_state(rng: &mut ChaCha8Rng) -> SatelliteTruthState<f64> {
    SatelliteTruthState {
        r: rng.gen_range(1.0e7..4.0e7),
        v: rng.gen_range(-20.0..20.0),
        omega: rng.gen_range(2.0e-5..1.5e-4),
        theta: rng.gen_range(-10.0..10.0),
        mass: rng.gen_range(10.0..500.0),
    }
}

/// Moon acceleration computed in inertial Cartesian coordinates, then
/// rotated into the satellite's radial/tangential frame.
fn cartesian_moon_accel(s: &SatelliteTruthState<f64>, moon: &MoonModel<f64>, t: f64) -> (f64, f64) {
    let phase = moon.initial_phase + moon.angular_rate * t;
    let sat = [s.r * s.theta.cos(), s.r * s.theta.sin()];
    let m = [
        moon.orbit_radius * phase.cos(),
        moon.orbit_radius * phase.sin(),
    ];
    let d = [sat[0] - m[0], sat[1] - m[1]];
    let dist = d[0].hypot(d[1]);
    let k = -moon.mu / (dist * dist * dist);
    let a = [k * d[0], k * d[1]];
    let radial = [s.theta.cos(), s.theta.sin()];
    let tangential = [-s.theta.sin(), s.theta.cos()];
    (
        a[0] * radial[0] + a[1] * radial[1],
        a[0] * tangential[0] + a[1] * tangential[1],
    )
}

#[test]
fn moon_acceleration_matches_cartesian() {
    let planet = PlanetModel::<f64>::mars();
    let moons = [MoonModel::phobos(&planet), MoonModel::deimos(&planet)];
    let mut g = rng(11);
    for _ in 0..1000 {
        let s = random_state(&mut g);
        let t = g.gen_range(0.0..3.0e7);
        for moon in &moons {
            let a = moon_perturbation(&s, moon, t, 1e3).unwrap();
            let (ar, at) = cartesian_moon_accel(&s, moon, t);
            let scale = ar.hypot(at);
            assert!((a.a_r - ar).abs() <= 1e-12 * scale, "{} vs {ar}", a.a_r);
            assert!(
                (a.a_theta - at).abs() <= 1e-12 * scale,
                "{} vs {at}",
                a.a_theta
            );
        }
    }
}

#[test]
fn moon_accelerations_add() {
    let planet = PlanetModel::<f64>::mars();
    let moons = [MoonModel::phobos(&planet), MoonModel::deimos(&planet)];
    let mut g = rng(12);
    for _ in 0..200 {
        let s = random_state(&mut g);
        let t = g.gen_range(0.0..3.0e7);
        let total = total_perturbation(&s, &moons, t, 1e3).unwrap();
        let a = moon_perturbation(&s, &moons[0], t, 1e3).unwrap();
        let b = moon_perturbation(&s, &moons[1], t, 1e3).unwrap();
        assert_eq!(total, a + b);
    }
}

#[test]
fn moon_pull_is_inverse_square() {
    let planet = PlanetModel::<f64>::mars();
    let mut moon = MoonModel::about(&planet, 1e5, 1e7, 0.0).unwrap();
    moon.angular_rate = 0.0;
    let at = |r: f64| {
        let s = SatelliteTruthState {
            r,
            v: 0.0,
            omega: 0.0,
            theta: 0.0,
            mass: 1.0,
        };
        moon_perturbation(&s, &moon, 0.0, 1.0).unwrap().a_r
    };
    // outward of the moon: pulled back inwards with mu/d^2
    assert!((at(1.2e7) + 1e5 / 4e12).abs() < 1e-14 * 2.5e-8);
    assert!((at(1.4e7) * 4.0 - at(1.2e7)).abs() < 1e-14 * 2.5e-8);
    // inward of the moon: pulled outwards
    assert!(at(0.8e7) > 0.0);
}

/// Relative error measured against the largest term that enters the
/// cancellation, since the closed-loop values can be tiny.
fn rel_err(got: f64, want: f64, scale: f64) -> f64 {
    (got - want).abs() / scale.max(want.abs()).max(f64::MIN_POSITIVE)
}

#[test]
fn closed_loop_reduces_to_linear_design_model() {
    let planet = PlanetModel::<f64>::mars();
    let mut g = rng(13);
    let mut worst: f64 = 0.0;
    for n in 0..10_000 {
        let s = random_state(&mut g);
        let desired = DesiredOrbit64::new(&planet, g.gen_range(1.5e7..3.0e7)).unwrap();
        let mut gains = GainSet::<f64>::mars_example();
        gains.k_r = g.gen_range(1e-7..1e-3);
        gains.k_v = g.gen_range(1e-6..1e-2);
        gains.k_omega = g.gen_range(1e2..1e6);
        gains.radial_units = if n % 2 == 0 {
            RadialGainUnits::Force
        } else {
            RadialGainUnits::Specific
        };
        let kc = g.gen_range(1e8..1e12);
        let u = g.gen_range(-1.0..1.0);
        let cmd = ThrustCommand::new(
            radial_thrust(&planet, &s, &gains, &desired),
            tangential_thrust(&s, &gains, &desired, u, kc),
        );
        let d = truth_derivatives(&planet, &s, &cmd, &PerturbationAccel::zero()).unwrap();

        let kr = gains.radial_stiffness(s.mass);
        let kv = gains.radial_damping(s.mass);
        let dr = s.r - desired.r_d;
        let v_dot = -kv * s.v - kr * dr;
        let scale_v = (s.r * s.omega * s.omega)
            .max(planet.mu / (s.r * s.r))
            .max((kv * s.v).abs())
            .max((kr * dr).abs());
        let dw = s.omega - desired.omega_d();
        let omega_dot = -gains.k_omega / s.r * dw + u / kc;
        let scale_w = (2.0 * s.v * s.omega / s.r)
            .abs()
            .max((gains.k_omega / s.r * dw).abs())
            .max((u / kc).abs());

        assert_eq!(d.r_dot, s.v);
        assert_eq!(d.theta_dot, s.omega);
        let ev = rel_err(d.v_dot, v_dot, scale_v);
        let ew = rel_err(d.omega_dot, omega_dot, scale_w);
        worst = worst.max(ev).max(ew);
        assert!(ev < 1e-12, "radial {ev}");
        assert!(ew < 1e-12, "tangential {ew}");
    }
    eprintln!("worst closed-loop reduction error {worst:e}");
}

#[test]
fn coordination_channel_isolated() {
    let sc = Scenario64::mars_example();
    let wd = sc.desired.omega_d();
    let s = SatelliteTruthState {
        r: sc.desired.r_d,
        v: 0.0,
        omega: wd,
        theta: 0.3,
        mass: 100.0,
    };
    let u = 2.5e-4;
    let kc = 3e9;
    let tau = tangential_thrust(&s, &sc.gains, &sc.desired, u, kc);
    assert!((tau - 100.0 * sc.desired.r_d * u / kc).abs() < 1e-15);
    let d = truth_derivatives(
        &sc.planet,
        &s,
        &ThrustCommand::new(radial_thrust(&sc.planet, &s, &sc.gains, &sc.desired), tau),
        &PerturbationAccel::zero(),
    )
    .unwrap();
    assert!((d.omega_dot - u / kc).abs() < 1e-12 * (u / kc));
}

#[test]
fn radial_step_response_sign() {
    let sc = Scenario64::mars_example();
    let wd = sc.desired.omega_d();
    let s = SatelliteTruthState {
        r: sc.desired.r_d + 100.0,
        v: 0.0,
        omega: wd,
        theta: 0.0,
        mass: 100.0,
    };
    let tau = radial_thrust(&sc.planet, &s, &sc.gains, &sc.desired);
    let d = truth_derivatives(
        &sc.planet,
        &s,
        &ThrustCommand::new(tau, 0.0),
        &PerturbationAccel::zero(),
    )
    .unwrap();
    let want = -sc.gains.radial_stiffness(100.0) * 100.0;
    assert!((d.v_dot - want).abs() < 1e-12, "{} vs {want}", d.v_dot);
}

fn free_flight(
    planet: PlanetModel<f64>,
) -> impl FnMut(f64, &[f64], &mut [f64]) -> areosync::Result<()> {
    move |_, x, dx| {
        let s = SatelliteTruthState {
            r: x[0],
            v: x[1],
            omega: x[2],
            theta: x[3],
            mass: 1.0,
        };
        let d = truth_derivatives(
            &planet,
            &s,
            &ThrustCommand::zero(),
            &PerturbationAccel::zero(),
        )
        .map_err(|fault| areosync::Error::Satellite {
            sat: 0,
            t: 0.0,
            fault,
        })?;
        dx.copy_from_slice(&[d.r_dot, d.v_dot, d.omega_dot, d.theta_dot]);
        Ok(())
    }
}

#[test]
fn unforced_motion_conserves_momentum_and_energy() {
    let planet = PlanetModel::<f64>::mars();
    // mildly eccentric orbit near the target radius
    let r0 = 20_428.2e3;
    let mut x = vec![r0, 15.0, 1.02 * planet.circular_rate(r0), 0.0];
    let h = |x: &[f64]| x[0] * x[0] * x[2];
    let e = |x: &[f64]| 0.5 * (x[1] * x[1] + x[0] * x[0] * x[2] * x[2]) - planet.mu / x[0];
    let (h0, e0) = (h(&x), e(&x));
    let mut f = free_flight(planet);
    let dt = 10.0;
    for k in 0..9000 {
        x = rk4_step(&mut f, &x, k as f64 * dt, dt).unwrap();
    }
    assert!(((h(&x) - h0) / h0).abs() < 1e-11, "{}", (h(&x) - h0) / h0);
    assert!(((e(&x) - e0) / e0).abs() < 1e-11, "{}", (e(&x) - e0) / e0);
}

#[test]
fn circular_orbit_period() {
    let planet = PlanetModel::<f64>::mars();
    let r0 = 20_428.2e3;
    let w = planet.circular_rate(r0);
    let period = std::f64::consts::TAU / w;
    let steps = 10_000;
    let dt = period / steps as f64;
    let mut x = vec![r0, 0.0, w, 0.0];
    let mut f = free_flight(planet);
    for k in 0..steps {
        x = rk4_step(&mut f, &x, k as f64 * dt, dt).unwrap();
    }
    assert!((x[0] - r0).abs() < 1e-6);
    assert!((x[3] - std::f64::consts::TAU).abs() < 1e-12);
    // the mission orbit has the period of a Mars sidereal day
    assert!(
        (period / 3600.0 - 24.6229).abs() < 1e-3,
        "{}",
        period / 3600.0
    );
}
