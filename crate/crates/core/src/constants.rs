//! Built-in physical constant sets.

/// Mean Martian solar day, seconds. Used only when reporting times in Sols.
pub const SOL_S: f64 = 88_775.244;

/// Name of the built-in Mars / Phobos / Deimos constant set.
pub const MARS_EXAMPLE: &str = "mars-example";

pub mod mars {
    /// Gravitational parameter of Mars, m^3/s^2.
    pub const MU: f64 = 4.282837e13;
    /// Equatorial radius, m.
    pub const EQUATORIAL_RADIUS: f64 = 3_396.2e3;
    /// Areostationary radius, m.
    pub const AREOSTATIONARY_RADIUS: f64 = 20_428.2e3;

    pub const PHOBOS_MU: f64 = 7.161e5;
    /// Periapsis radius used as a circular orbit radius, m.
    pub const PHOBOS_RADIUS: f64 = 9_234.42e3;

    pub const DEIMOS_MU: f64 = 1.041e5;
    pub const DEIMOS_RADIUS: f64 = 23_455.50e3;
}

/// Spacecraft and controller defaults of the Mars example mission.
pub mod mission {
    pub const N_SATS: usize = 10;
    pub const SAT_MASS: f64 = 100.0;
    pub const TAU_MAX: f64 = 0.1;

    pub const K_R: f64 = 1e-5;
    pub const K_V: f64 = 1e-4;
    pub const K_OMEGA: f64 = 1e4;
    pub const KC_BAR: f64 = 1e11;
    pub const KC_FLOOR: f64 = 1e9;
    pub const KC_DECAY: f64 = 30.0;
    /// Acquisition horizon in Sols.
    pub const T_F_SOLS: f64 = 355.0;

    // Initial cluster: nominal value and half-width.
    pub const IC_R: (f64, f64) = (20_428.0e3, 0.1e3);
    pub const IC_V: (f64, f64) = (0.0, 1e-8);
    pub const IC_OMEGA: (f64, f64) = (7.0879e-5, 1e-7);
    pub const IC_THETA: (f64, f64) = (0.0, 5e-3);

    pub const DT: f64 = 10.0;
    pub const LOGGING_INTERVAL: f64 = 1000.0;
    pub const SEED: u64 = 1;
    pub const MIN_MOON_SEPARATION: f64 = 1e3;
    pub const ACQUISITION_TOL_DEG: f64 = 0.5;
}
