//! JSON scenario documents.
//!
//! Physical keys carry their unit in the name (`r_d_km`, `horizon_sols`,
//! `dt_s`, ...). Where two units are accepted for one quantity, giving both
//! is an error. Omitted keys take the value of the selected constant set.

use serde::{Deserialize, Serialize};

use crate::constants::{MARS_EXAMPLE, SOL_S};
use crate::controller::{DesiredOrbit, GainSet, RadialGainUnits, SaturationMode};
use crate::dynamics::{MoonModel, PlanetModel, SatelliteTruthState};
use crate::error::{ConfigIssue, Error};
use crate::network::LinkOutputFn;
use crate::scalar::{lit, to_f64, Scalar};
use crate::sim::{InitialConditionSpec, Scenario, Spread};

const KM: f64 = 1e3;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planet: Option<PlanetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moons: Option<Vec<MoonDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moons_enabled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sats: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sat_mass_kg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_d_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_d_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gains: Option<GainsDoc>,
    #[serde(default, rename = "tau_max_N", skip_serializing_if = "Option::is_none")]
    pub tau_max_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation_mode: Option<SaturationMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordination_enabled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_conditions: Option<InitialConditionsDoc>,
    /// Explicit per-satellite initial states; replaces sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_states: Option<Vec<StateDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_sols: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logging_interval_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_moon_separation_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acquisition_tol_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputsDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_m3ps2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equatorial_radius_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equatorial_radius_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoonDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mu_m3ps2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_radius_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_radius_m: Option<f64>,
    /// Defaults to the circular Keplerian rate about the planet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_rate_radps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_phase_rad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_phase_deg: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kc_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kc_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kc_decay: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_f_sols: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_f_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial_gain_units: Option<RadialGainUnits>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadDoc {
    pub nominal: f64,
    #[serde(default)]
    pub half_width: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_km: Option<SpreadDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_m: Option<SpreadDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_mps: Option<SpreadDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_radps: Option<SpreadDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_rad: Option<SpreadDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_deg: Option<SpreadDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub r_m: f64,
    pub v_mps: f64,
    pub omega_radps: f64,
    pub theta_rad: f64,
}

/// Artifact locations, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputsDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub trajectory_csv: String,
    pub links_csv: String,
    pub report_json: String,
    pub lyapunov_csv: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification_json: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_csv: Option<String>,
    /// Logged rows per plot row.
    pub plot_stride: usize,
}

impl Default for OutputsDoc {
    fn default() -> Self {
        Self {
            dir: None,
            trajectory_csv: "trajectory.csv".into(),
            links_csv: "links.csv".into(),
            report_json: "report.json".into(),
            lyapunov_csv: "lyapunov.csv".into(),
            certification_json: None,
            plot_csv: Some("plot.csv".into()),
            plot_stride: 10,
        }
    }
}

/// Collects validation failures instead of stopping at the first.
#[derive(Default)]
struct Issues(Vec<ConfigIssue>);

impl Issues {
    fn push(&mut self, key: impl Into<String>, message: impl Into<String>) {
        self.0.push(ConfigIssue {
            key: key.into(),
            message: message.into(),
        });
    }

    /// Value of a quantity given in one of two units, converted to SI.
    fn either(
        &mut self,
        (key_a, a, scale_a): (&str, Option<f64>, f64),
        (key_b, b, scale_b): (&str, Option<f64>, f64),
    ) -> Option<f64> {
        match (a, b) {
            (Some(_), Some(_)) => {
                self.push(key_a, format!("conflicts with `{key_b}`; give only one"));
                None
            }
            (Some(x), None) => Some(x * scale_a),
            (None, Some(x)) => Some(x * scale_b),
            (None, None) => None,
        }
    }

    fn positive(&mut self, key: &str, x: f64) -> bool {
        let ok = x.is_finite() && x > 0.0;
        if !ok {
            self.push(key, format!("must be positive and finite, got {x}"));
        }
        ok
    }

    fn non_negative(&mut self, key: &str, x: f64) -> bool {
        let ok = x.is_finite() && x >= 0.0;
        if !ok {
            self.push(key, format!("must be non-negative and finite, got {x}"));
        }
        ok
    }
}

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| {
            Error::Config(vec![ConfigIssue {
                key: unknown_key(&e).unwrap_or_else(|| "<document>".into()),
                message: e.to_string(),
            }])
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }

    pub fn outputs(&self) -> OutputsDoc {
        self.outputs.clone().unwrap_or_default()
    }

    /// Validate the document and build the scenario it describes.
    pub fn to_scenario<T: Scalar>(&self) -> Result<Scenario<T>, Error> {
        let mut is = Issues::default();
        match self.constant_set.as_deref() {
            None | Some(MARS_EXAMPLE) => {}
            Some(other) => is.push(
                "constant_set",
                format!("unknown constant set `{other}`; expected `{MARS_EXAMPLE}`"),
            ),
        }
        let base = Scenario::<f64>::mars_example();

        let mut planet = base.planet;
        if let Some(p) = &self.planet {
            if let Some(mu) = p.mu_m3ps2 {
                if is.positive("planet.mu_m3ps2", mu) {
                    planet.mu = mu;
                }
            }
            if let Some(r) = is.either(
                ("planet.equatorial_radius_km", p.equatorial_radius_km, KM),
                ("planet.equatorial_radius_m", p.equatorial_radius_m, 1.0),
            ) {
                if is.positive("planet.equatorial_radius", r) {
                    planet.equatorial_radius = r;
                }
            }
        }

        // the built-in moons follow the planet so that a custom mu stays consistent
        let mut moons = if self.planet.is_some() {
            base.moons
                .iter()
                .map(|m| {
                    MoonModel::about(&planet, m.mu, m.orbit_radius, m.initial_phase)
                        .expect("built-in moons are valid")
                })
                .collect()
        } else {
            base.moons.clone()
        };
        if let Some(docs) = &self.moons {
            moons.clear();
            for (k, m) in docs.iter().enumerate() {
                let key = |f: &str| format!("moons[{k}].{f}");
                let mu_ok = is.non_negative(&key("mu_m3ps2"), m.mu_m3ps2);
                let radius = is.either(
                    (&key("orbit_radius_km"), m.orbit_radius_km, KM),
                    (&key("orbit_radius_m"), m.orbit_radius_m, 1.0),
                );
                let phase = is
                    .either(
                        (&key("initial_phase_rad"), m.initial_phase_rad, 1.0),
                        (
                            &key("initial_phase_deg"),
                            m.initial_phase_deg,
                            1f64.to_radians(),
                        ),
                    )
                    .unwrap_or(0.0);
                let Some(radius) = radius else {
                    is.push(key("orbit_radius_km"), "orbit radius is required");
                    continue;
                };
                if !is.positive(&key("orbit_radius"), radius) || !mu_ok {
                    continue;
                }
                let mut moon = MoonModel::about(&planet, m.mu_m3ps2, radius, phase)
                    .expect("inputs checked above");
                if let Some(rate) = m.angular_rate_radps {
                    if rate.is_finite() {
                        moon.angular_rate = rate;
                    } else {
                        is.push(key("angular_rate_radps"), "must be finite");
                    }
                }
                moons.push(moon);
            }
        }

        let n_sats = self.n_sats.unwrap_or(base.n_sats);
        if n_sats < 2 {
            is.push(
                "n_sats",
                format!("a constellation needs at least 2 satellites, got {n_sats}"),
            );
        }
        let sat_mass = self.sat_mass_kg.unwrap_or(base.sat_mass);
        is.positive("sat_mass_kg", sat_mass);

        let r_d = is
            .either(("r_d_km", self.r_d_km, KM), ("r_d_m", self.r_d_m, 1.0))
            .unwrap_or(base.desired.r_d);
        is.positive("r_d", r_d);

        let mut gains = base.gains;
        if let Some(g) = &self.gains {
            for (key, value, slot) in [
                ("gains.k_r", g.k_r, &mut gains.k_r),
                ("gains.k_v", g.k_v, &mut gains.k_v),
                ("gains.k_omega", g.k_omega, &mut gains.k_omega),
                ("gains.kc_bar", g.kc_bar, &mut gains.kc_bar),
                ("gains.kc_floor", g.kc_floor, &mut gains.kc_floor),
                ("gains.kc_decay", g.kc_decay, &mut gains.kc_decay),
            ] {
                if let Some(x) = value {
                    is.positive(key, x);
                    *slot = x;
                }
            }
            if let Some(t_f) = is.either(
                ("gains.t_f_sols", g.t_f_sols, SOL_S),
                ("gains.t_f_s", g.t_f_s, 1.0),
            ) {
                is.positive("gains.t_f", t_f);
                gains.t_f = t_f;
            }
            if let Some(units) = g.radial_gain_units {
                gains.radial_units = units;
            }
        }
        if gains.kc_bar.is_finite() && gains.kc_floor > 0.0 && !(gains.kc_bar > gains.kc_floor) {
            is.push("gains.kc_bar", "must exceed gains.kc_floor");
        }

        let tau_max = self.tau_max_n.unwrap_or(base.tau_max);
        is.positive("tau_max_N", tau_max);

        let mut ic = base.ic;
        if let Some(doc) = &self.initial_conditions {
            match (doc.r_km, doc.r_m) {
                (Some(_), Some(_)) => is.push(
                    "initial_conditions.r_km",
                    "conflicts with `initial_conditions.r_m`; give only one",
                ),
                (a, b) => {
                    spread(&mut is, "initial_conditions.r_km", a, KM, &mut ic.r);
                    spread(&mut is, "initial_conditions.r_m", b, 1.0, &mut ic.r);
                }
            }
            spread(
                &mut is,
                "initial_conditions.v_mps",
                doc.v_mps,
                1.0,
                &mut ic.v,
            );
            spread(
                &mut is,
                "initial_conditions.omega_radps",
                doc.omega_radps,
                1.0,
                &mut ic.omega,
            );
            match (doc.theta_rad, doc.theta_deg) {
                (Some(_), Some(_)) => is.push(
                    "initial_conditions.theta_rad",
                    "conflicts with `initial_conditions.theta_deg`; give only one",
                ),
                (a, b) => {
                    spread(
                        &mut is,
                        "initial_conditions.theta_rad",
                        a,
                        1.0,
                        &mut ic.theta,
                    );
                    spread(
                        &mut is,
                        "initial_conditions.theta_deg",
                        b,
                        1f64.to_radians(),
                        &mut ic.theta,
                    );
                }
            }
            if ic.r.nominal - ic.r.half_width <= 0.0 {
                is.push("initial_conditions.r", "radius range must stay positive");
            }
        }

        let initial_states = self.initial_states.as_ref().map(|states| {
            if states.len() != n_sats {
                is.push(
                    "initial_states",
                    format!("expected {n_sats} entries, got {}", states.len()),
                );
            }
            states
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    is.positive(&format!("initial_states[{k}].r_m"), s.r_m);
                    for (f, x) in [
                        ("v_mps", s.v_mps),
                        ("omega_radps", s.omega_radps),
                        ("theta_rad", s.theta_rad),
                    ] {
                        if !x.is_finite() {
                            is.push(format!("initial_states[{k}].{f}"), "must be finite");
                        }
                    }
                    SatelliteTruthState {
                        r: s.r_m,
                        v: s.v_mps,
                        omega: s.omega_radps,
                        theta: s.theta_rad,
                        mass: sat_mass,
                    }
                })
                .collect::<Vec<_>>()
        });

        let dt = self.dt_s.unwrap_or(base.dt);
        let dt_ok = is.positive("dt_s", dt);
        let horizon = is
            .either(
                ("horizon_sols", self.horizon_sols, SOL_S),
                ("horizon_s", self.horizon_s, 1.0),
            )
            .unwrap_or(gains.t_f);
        if is.positive("horizon", horizon) && dt_ok && horizon < dt {
            is.push("horizon", format!("must be at least dt_s = {dt}"));
        }
        let logging_interval = self.logging_interval_s.unwrap_or(base.logging_interval);
        if is.positive("logging_interval_s", logging_interval) && dt_ok {
            let ratio = logging_interval / dt;
            if ratio < 1.0 - 1e-12 || (ratio - ratio.round()).abs() > 1e-9 * ratio {
                is.push(
                    "logging_interval_s",
                    format!("must be an integer multiple of dt_s = {dt}"),
                );
            }
        }
        let min_sep = self
            .min_moon_separation_m
            .unwrap_or(base.min_moon_separation);
        is.positive("min_moon_separation_m", min_sep);
        let tol_deg = self.acquisition_tol_deg.unwrap_or(base.acquisition_tol_deg);
        is.positive("acquisition_tol_deg", tol_deg);
        if let Some(out) = &self.outputs {
            if out.plot_stride == 0 {
                is.push("outputs.plot_stride", "must be at least 1");
            }
        }

        if !is.0.is_empty() {
            return Err(Error::Config(is.0));
        }

        let planet_t = PlanetModel {
            mu: lit(planet.mu),
            equatorial_radius: lit(planet.equatorial_radius),
        };
        let scenario = Scenario {
            desired: DesiredOrbit::new(&planet_t, lit(r_d))?,
            planet: planet_t,
            moons: moons.iter().map(cast_moon).collect(),
            moons_enabled: self.moons_enabled.unwrap_or(base.moons_enabled),
            n_sats,
            sat_mass: lit(sat_mass),
            gains: GainSet {
                k_r: lit(gains.k_r),
                k_v: lit(gains.k_v),
                k_omega: lit(gains.k_omega),
                kc_bar: lit(gains.kc_bar),
                kc_floor: lit(gains.kc_floor),
                kc_decay: lit(gains.kc_decay),
                t_f: lit(gains.t_f),
                radial_units: gains.radial_units,
            },
            tau_max: lit(tau_max),
            saturation_mode: self.saturation_mode.unwrap_or(base.saturation_mode),
            coordination_enabled: self
                .coordination_enabled
                .unwrap_or(base.coordination_enabled),
            link_output: LinkOutputFn::equal_spacing(n_sats),
            ic: InitialConditionSpec {
                r: cast_spread(ic.r),
                v: cast_spread(ic.v),
                omega: cast_spread(ic.omega),
                theta: cast_spread(ic.theta),
            },
            initial_states: initial_states.map(|v| v.iter().map(cast_state).collect()),
            dt: lit(dt),
            horizon: lit(horizon),
            logging_interval: lit(logging_interval),
            seed: self.seed.unwrap_or(base.seed),
            min_moon_separation: lit(min_sep),
            acquisition_tol_deg: lit(tol_deg),
        };
        scenario.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Error::Config(vec![ConfigIssue {
                key: name.to_string(),
                message: reason,
            }]),
            other => other,
        })?;
        Ok(scenario)
    }

    /// Fully explicit document in SI keys describing `scenario`.
    pub fn from_scenario<T: Scalar>(scenario: &Scenario<T>) -> Result<Self, Error> {
        if !matches!(scenario.link_output, LinkOutputFn::Affine { .. }) {
            return Err(Error::invalid(
                "link_output",
                "custom link outputs cannot be written to a configuration",
            ));
        }
        let f = to_f64::<T>;
        let spread = |s: Spread<T>| SpreadDoc {
            nominal: f(s.nominal),
            half_width: f(s.half_width),
        };
        let g = &scenario.gains;
        Ok(Self {
            constant_set: Some(MARS_EXAMPLE.into()),
            planet: Some(PlanetDoc {
                mu_m3ps2: Some(f(scenario.planet.mu)),
                equatorial_radius_km: None,
                equatorial_radius_m: Some(f(scenario.planet.equatorial_radius)),
            }),
            moons: Some(
                scenario
                    .moons
                    .iter()
                    .map(|m| MoonDoc {
                        name: None,
                        mu_m3ps2: f(m.mu),
                        orbit_radius_km: None,
                        orbit_radius_m: Some(f(m.orbit_radius)),
                        angular_rate_radps: Some(f(m.angular_rate)),
                        initial_phase_rad: Some(f(m.initial_phase)),
                        initial_phase_deg: None,
                    })
                    .collect(),
            ),
            moons_enabled: Some(scenario.moons_enabled),
            n_sats: Some(scenario.n_sats),
            sat_mass_kg: Some(f(scenario.sat_mass)),
            r_d_km: None,
            r_d_m: Some(f(scenario.desired.r_d)),
            gains: Some(GainsDoc {
                k_r: Some(f(g.k_r)),
                k_v: Some(f(g.k_v)),
                k_omega: Some(f(g.k_omega)),
                kc_bar: Some(f(g.kc_bar)),
                kc_floor: Some(f(g.kc_floor)),
                kc_decay: Some(f(g.kc_decay)),
                t_f_sols: None,
                t_f_s: Some(f(g.t_f)),
                radial_gain_units: Some(g.radial_units),
            }),
            tau_max_n: Some(f(scenario.tau_max)),
            saturation_mode: Some(scenario.saturation_mode),
            coordination_enabled: Some(scenario.coordination_enabled),
            initial_conditions: Some(InitialConditionsDoc {
                r_km: None,
                r_m: Some(spread(scenario.ic.r)),
                v_mps: Some(spread(scenario.ic.v)),
                omega_radps: Some(spread(scenario.ic.omega)),
                theta_rad: Some(spread(scenario.ic.theta)),
                theta_deg: None,
            }),
            initial_states: scenario.initial_states.as_ref().map(|states| {
                states
                    .iter()
                    .map(|s| StateDoc {
                        r_m: f(s.r),
                        v_mps: f(s.v),
                        omega_radps: f(s.omega),
                        theta_rad: f(s.theta),
                    })
                    .collect()
            }),
            dt_s: Some(f(scenario.dt)),
            horizon_sols: None,
            horizon_s: Some(f(scenario.horizon)),
            logging_interval_s: Some(f(scenario.logging_interval)),
            seed: Some(scenario.seed),
            min_moon_separation_m: Some(f(scenario.min_moon_separation)),
            acquisition_tol_deg: Some(f(scenario.acquisition_tol_deg)),
            outputs: None,
        })
    }
}

fn cast_spread<T: Scalar>(s: Spread<f64>) -> Spread<T> {
    Spread::new(lit(s.nominal), lit(s.half_width))
}

fn cast_moon<T: Scalar>(m: &MoonModel<f64>) -> MoonModel<T> {
    MoonModel {
        mu: lit(m.mu),
        orbit_radius: lit(m.orbit_radius),
        angular_rate: lit(m.angular_rate),
        initial_phase: lit(m.initial_phase),
    }
}

fn cast_state<T: Scalar>(s: &SatelliteTruthState<f64>) -> SatelliteTruthState<T> {
    SatelliteTruthState {
        r: lit(s.r),
        v: lit(s.v),
        omega: lit(s.omega),
        theta: lit(s.theta),
        mass: lit(s.mass),
    }
}

fn spread(is: &mut Issues, key: &str, s: Option<SpreadDoc>, scale: f64, slot: &mut Spread<f64>) {
    if let Some(s) = s {
        if !s.nominal.is_finite() {
            is.push(format!("{key}.nominal"), "must be finite");
        }
        is.non_negative(&format!("{key}.half_width"), s.half_width);
        *slot = Spread::new(s.nominal * scale, s.half_width * scale);
    }
}

/// Pull the key name out of serde's "unknown field `x`" message.
fn unknown_key(e: &serde_json::Error) -> Option<String> {
    let msg = e.to_string();
    let rest = msg.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}

/// Parse and validate a JSON configuration.
pub fn parse_config<T: Scalar>(text: &str) -> Result<Scenario<T>, Error> {
    ConfigDocument::from_json(text)?.to_scenario()
}

/// Serialize `scenario` as a configuration that parses back to it.
pub fn serialize_config<T: Scalar>(scenario: &Scenario<T>) -> Result<String, Error> {
    Ok(ConfigDocument::from_scenario(scenario)?.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn issues(text: &str) -> Vec<ConfigIssue> {
        match parse_config::<f64>(text) {
            Err(Error::Config(v)) => v,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_document_is_mars_example() {
        assert_eq!(parse_config::<f64>("{}").unwrap(), Scenario::mars_example());
        let doc = r#"{"constant_set": "mars-example"}"#;
        assert_eq!(parse_config::<f64>(doc).unwrap(), Scenario::mars_example());
    }

    #[test]
    fn unknown_key_is_named() {
        let v = issues(r#"{"r_d": 20428.2}"#);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].key, "r_d");
        let v = issues(r#"{"gains": {"kr": 1.0}}"#);
        assert_eq!(v[0].key, "kr");
    }

    #[test]
    fn negative_gain_rejected() {
        let v = issues(r#"{"gains": {"k_r": -1}}"#);
        assert_eq!(v[0].key, "gains.k_r");
        assert!(v[0].message.contains("positive"));
    }

    #[test]
    fn all_issues_reported() {
        let v = issues(r#"{"dt_s": -1, "sat_mass_kg": 0, "r_d_km": 20000, "r_d_m": 2e7}"#);
        let keys: Vec<_> = v.iter().map(|i| i.key.as_str()).collect();
        assert!(keys.contains(&"dt_s"));
        assert!(keys.contains(&"sat_mass_kg"));
        assert!(keys.contains(&"r_d_km"));
    }

    #[test]
    fn unit_suffixes_convert() {
        let a: Scenario<f64> = parse_config(r#"{"r_d_km": 20000, "horizon_sols": 2}"#).unwrap();
        let b: Scenario<f64> = parse_config(r#"{"r_d_m": 2e7, "horizon_s": 177550.488}"#).unwrap();
        assert_eq!(a.desired, b.desired);
        assert_eq!(a.horizon, b.horizon);
    }

    #[test]
    fn logging_must_be_multiple_of_dt() {
        let v = issues(r#"{"dt_s": 10, "logging_interval_s": 15}"#);
        assert_eq!(v[0].key, "logging_interval_s");
        let v = issues(r#"{"dt_s": 10, "logging_interval_s": 5}"#);
        assert_eq!(v[0].key, "logging_interval_s");
    }

    #[test]
    fn wrong_constant_set() {
        assert_eq!(
            issues(r#"{"constant_set": "earth"}"#)[0].key,
            "constant_set"
        );
    }

    #[test]
    fn round_trip() {
        let text = r#"{"n_sats": 4, "seed": 99, "moons_enabled": false,
            "moons": [{"mu_m3ps2": 1e5, "orbit_radius_km": 9000, "initial_phase_deg": 30}],
            "initial_conditions": {"theta_deg": {"nominal": 0, "half_width": 1}},
            "gains": {"radial_gain_units": "specific", "k_r": 1e-7, "k_v": 1e-6}}"#;
        let sc: Scenario<f64> = parse_config(text).unwrap();
        let again: Scenario<f64> = parse_config(&serialize_config(&sc).unwrap()).unwrap();
        assert_eq!(sc, again);
        let doc = serialize_config(&again).unwrap();
        assert_eq!(doc, serialize_config(&sc).unwrap());
    }

    #[test]
    fn custom_link_output_not_serializable() {
        let mut sc = Scenario::<f64>::mars_example();
        sc.link_output = LinkOutputFn::custom(|x| x);
        assert!(serialize_config(&sc).is_err());
    }
}
