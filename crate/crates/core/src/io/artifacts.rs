//! Output files. Every writer goes through a temporary file in the target
//! directory and renames it into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::analysis::Certification;
use crate::constants::SOL_S;
use crate::dynamics::wrap_angle;
use crate::error::Error;
use crate::scalar::{to_f64, Scalar};
use crate::sim::AcquisitionReport;
use crate::trajectory::TrajectoryLog;

pub const TRAJECTORY_HEADER: &str =
    "t_s,sat_id,r_m,v_mps,omega_radps,theta_rad,tau_r_N,tau_theta_N,u_i";
pub const LINKS_HEADER: &str = "t_s,link_id,theta_rel_rad,y_l";
pub const LYAPUNOV_HEADER: &str = "t_s,kc,kc_rate,S_total,T_total,V,V_lower,V_upper,V_dot";

/// Report keys, in output order.
pub const REPORT_KEYS: [&str; 9] = [
    "t_acq_sols",
    "t_acq_s",
    "acquired",
    "max_abs_tau_r_N",
    "max_abs_tau_theta_N",
    "final_spacing_err_deg",
    "final_omega_err_radps",
    "lyapunov_monotone",
    "saturation_events",
];

/// Paths of the files produced by one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunArtifacts {
    pub trajectory_csv: PathBuf,
    pub links_csv: PathBuf,
    pub report_json: PathBuf,
    pub lyapunov_csv: PathBuf,
    pub certification_json: Option<PathBuf>,
    pub plot_csv: Option<PathBuf>,
}

/// 17 significant digits; enough to round-trip any `f64`.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Write `contents` to `path` via a temporary sibling file and rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Error> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        // temp files are created owner-only
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(io)?;
    }
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn trajectory_csv<T: Scalar>(log: &TrajectoryLog<T>) -> String {
    let mut out = String::with_capacity(64 + log.len() * log.n_sats() * 200);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (t, sats) in log.times.iter().zip(&log.sats) {
        let t = fmt_num(to_f64(*t));
        for (i, s) in sats.iter().enumerate() {
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{},{},{},{}",
                i + 1,
                fmt_num(to_f64(s.r)),
                fmt_num(to_f64(s.v)),
                fmt_num(to_f64(s.omega)),
                fmt_num(to_f64(wrap_angle(s.theta))),
                fmt_num(to_f64(s.tau_r)),
                fmt_num(to_f64(s.tau_theta)),
                fmt_num(to_f64(s.u)),
            );
        }
    }
    out
}

pub fn links_csv<T: Scalar>(log: &TrajectoryLog<T>) -> String {
    let mut out = String::new();
    out.push_str(LINKS_HEADER);
    out.push('\n');
    for (t, links) in log.times.iter().zip(&log.links) {
        let t = fmt_num(to_f64(*t));
        for (l, s) in links.iter().enumerate() {
            let _ = writeln!(
                out,
                "{t},{},{},{}",
                l + 1,
                fmt_num(to_f64(s.theta_rel)),
                fmt_num(to_f64(s.y))
            );
        }
    }
    out
}

pub fn lyapunov_csv<T: Scalar>(log: &TrajectoryLog<T>) -> String {
    let mut out = String::new();
    out.push_str(LYAPUNOV_HEADER);
    out.push('\n');
    for k in 0..log.len() {
        let st = &log.storage[k];
        let row = [
            log.times[k],
            log.kc[k],
            log.kc_rate[k],
            st.s.iter().copied().sum(),
            st.links.iter().copied().sum(),
            st.v,
            st.v_lower,
            st.v_upper,
            log.lyapunov_rate[k],
        ]
        .map(|x| fmt_num(to_f64(x)));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Wide, downsampled table for plotting: spacings, thrusts and `V`.
pub fn plot_csv<T: Scalar>(log: &TrajectoryLog<T>, stride: usize) -> String {
    let n = log.n_sats();
    let m = log.n_links();
    let mut header = vec!["t_sols".to_string()];
    header.extend((1..=m).map(|l| format!("spacing_{l}_deg")));
    header.extend((1..=n).map(|i| format!("tau_r_{i}_N")));
    header.extend((1..=n).map(|i| format!("tau_theta_{i}_N")));
    header.push("V".into());
    let mut out = header.join(",");
    out.push('\n');
    for k in (0..log.len()).step_by(stride.max(1)) {
        let mut row = vec![fmt_num(to_f64(log.times[k]) / SOL_S)];
        row.extend(
            log.links[k]
                .iter()
                .map(|l| fmt_num(to_f64(l.theta_rel).to_degrees())),
        );
        row.extend(log.sats[k].iter().map(|s| fmt_num(to_f64(s.tau_r))));
        row.extend(log.sats[k].iter().map(|s| fmt_num(to_f64(s.tau_theta))));
        row.push(fmt_num(to_f64(log.storage[k].v)));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn report_json<T: Scalar>(report: &AcquisitionReport<T>) -> Value {
    let f = |x: T| json!(to_f64(x));
    let arr = |v: &[T]| Value::Array(v.iter().map(|&x| f(x)).collect());
    let mut map = serde_json::Map::new();
    let values = [
        json!(report.t_acq_sols().map(to_f64)),
        json!(report.t_acq.map(to_f64)),
        json!(report.acquired()),
        f(report.max_abs_tau_r),
        f(report.max_abs_tau_theta),
        arr(&report.final_spacing_err_deg),
        arr(&report.final_omega_err),
        json!(report.lyapunov_monotone),
        json!(report.saturation_events),
    ];
    for (k, v) in REPORT_KEYS.iter().zip(values) {
        map.insert((*k).to_string(), v);
    }
    Value::Object(map)
}

pub fn certification_json<T: Scalar>(
    cert: &Certification<T>,
    lyapunov_series: Option<&str>,
) -> Value {
    let f = |x: T| to_f64(x);
    json!({
        "interval_s": f(cert.interval),
        "coarse": cert.coarse,
        "samples": cert.residuals.iter().map(|r| r.step).max().map_or(0, |s| s + 1),
        "total_violations": cert.total_violations(),
        "satellite_violations": cert.satellite_violations(),
        "link_violations": cert.link_violations(),
        "subsystems": cert.summaries.iter().map(|s| json!({
            "subsystem": s.subsystem.to_string(),
            "violations": s.violations,
            "worst_slack": f(s.worst_slack),
            "c_estimate": f(s.c_estimate),
            "tolerance": f(s.tol),
        })).collect::<Vec<_>>(),
        "epsilon": cert.epsilon.as_ref().map(|e| json!({
            "min": f(e.min),
            "max": f(e.max),
            "mean": f(e.mean),
            "lower_bound": f(e.lower_bound),
        })),
        "lyapunov_series": lyapunov_series,
    })
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

pub fn write_trajectory<T: Scalar>(log: &TrajectoryLog<T>, path: &Path) -> Result<(), Error> {
    write_atomic(path, trajectory_csv(log).as_bytes())
}

pub fn write_links<T: Scalar>(log: &TrajectoryLog<T>, path: &Path) -> Result<(), Error> {
    write_atomic(path, links_csv(log).as_bytes())
}

pub fn write_lyapunov<T: Scalar>(log: &TrajectoryLog<T>, path: &Path) -> Result<(), Error> {
    write_atomic(path, lyapunov_csv(log).as_bytes())
}

pub fn write_plot<T: Scalar>(
    log: &TrajectoryLog<T>,
    stride: usize,
    path: &Path,
) -> Result<(), Error> {
    write_atomic(path, plot_csv(log, stride).as_bytes())
}

pub fn write_report<T: Scalar>(report: &AcquisitionReport<T>, path: &Path) -> Result<(), Error> {
    write_atomic(path, json_text(&report_json(report)).as_bytes())
}

pub fn write_certification<T: Scalar>(
    cert: &Certification<T>,
    lyapunov_series: Option<&str>,
    path: &Path,
) -> Result<(), Error> {
    write_atomic(
        path,
        json_text(&certification_json(cert, lyapunov_series)).as_bytes(),
    )
}
