//! Wedge geometry: opening-angle parameter, angular-shift profiles θ(r)
//! and the metric induced by the curvilinear map
//! (r, φ) ↦ (r cos(φ+θ(r)), r sin(φ+θ(r))).
//!
//! Profiles must satisfy the standing hypothesis r ↦ r θ′(r) ∈ L∞; the
//! built-ins cover the four admissible example shapes (straight, sinc,
//! sin-capped, log3). User profiles are supplied as tabulated
//! `r theta theta_prime` triples with strictly increasing r and linear
//! interpolation; `#` starts a comment. Outside the tabulated range both
//! θ′ and θ are continued linearly from the nearest endpoint.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Result, WedgeError};
use crate::exec;

/// Radius beyond which the sin-capped profile is flat: 3π/2.
pub const SIN_CAPPED_SUPPORT: f64 = 1.5 * PI;

/// Wedge parameters: opening angle 2πa with a ∈ (0, 1], plus the profile.
#[derive(Debug, Clone)]
pub struct WedgeParams {
    a: f64,
    profile: ThetaProfile,
}

impl WedgeParams {
    pub fn new(a: f64, profile: ThetaProfile) -> Result<Self> {
        validate_a(a)?;
        Ok(WedgeParams { a, profile })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn profile(&self) -> &ThetaProfile {
        &self.profile
    }
}

/// Validate the opening-angle parameter a ∈ (0, 1].
pub fn validate_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(WedgeError::validation(format!(
            "a must lie in (0,1], got {a}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
enum ProfileKind {
    Straight,
    Sinc,
    SinCapped,
    Log3,
    Tabulated {
        rs: Vec<f64>,
        thetas: Vec<f64>,
        theta_primes: Vec<f64>,
    },
}

/// Angular-shift profile θ with its derivative and the constants the
/// estimates depend on. Immutable after construction; all evaluation is
/// pure, so profiles are freely shared across threads.
#[derive(Debug, Clone)]
pub struct ThetaProfile {
    name: String,
    kind: ProfileKind,
    /// Smallest R with θ′(r) = 0 for all r ≥ R; `None` when θ′ is not
    /// compactly supported.
    support_radius: Option<f64>,
    /// C = sup_r |r θ′(r)|, a dense-sampling lower bound for built-ins
    /// with non-trivial shape, exact where the profile allows it.
    twist_bound: f64,
    /// ‖θ′‖∞; +∞ for profiles with a derivative singularity at r = 0.
    sup_theta_prime: f64,
}

impl ThetaProfile {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// θ(r); callers keep r > 0.
    pub fn theta(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::Straight => 0.0,
            ProfileKind::Sinc => {
                if r.abs() < 1e-4 {
                    1.0 - r * r / 6.0 + r.powi(4) / 120.0
                } else {
                    r.sin() / r
                }
            }
            ProfileKind::SinCapped => {
                if r <= SIN_CAPPED_SUPPORT {
                    r.sin()
                } else {
                    -1.0
                }
            }
            ProfileKind::Log3 => 3.0 * r.ln(),
            ProfileKind::Tabulated {
                rs,
                thetas,
                theta_primes,
            } => {
                // outside the table θ continues linearly with the boundary θ′
                let n = rs.len();
                if r <= rs[0] {
                    thetas[0] + theta_primes[0] * (r - rs[0])
                } else if r >= rs[n - 1] {
                    thetas[n - 1] + theta_primes[n - 1] * (r - rs[n - 1])
                } else {
                    interp_linear(rs, thetas, r)
                }
            }
        }
    }

    /// θ′(r); callers keep r > 0.
    pub fn theta_prime(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::Straight => 0.0,
            ProfileKind::Sinc => {
                if r.abs() < 1e-4 {
                    -r / 3.0 + r.powi(3) / 30.0
                } else {
                    r.cos() / r - r.sin() / (r * r)
                }
            }
            ProfileKind::SinCapped => {
                if r <= SIN_CAPPED_SUPPORT {
                    r.cos()
                } else {
                    0.0
                }
            }
            ProfileKind::Log3 => 3.0 / r,
            ProfileKind::Tabulated {
                rs, theta_primes, ..
            } => interp_linear(rs, theta_primes, r),
        }
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.support_radius.is_some()
    }

    /// C = sup |r θ′(r)| as recorded at construction.
    pub fn twist_bound(&self) -> f64 {
        self.twist_bound
    }

    /// ‖θ′‖∞ as recorded at construction.
    pub fn sup_theta_prime(&self) -> f64 {
        self.sup_theta_prime
    }

    /// Parse a tabulated profile from text (columns `r theta theta_prime`,
    /// `#` comments, strictly increasing r).
    pub fn from_table_str(name: &str, text: &str) -> Result<Self> {
        let mut rs = Vec::new();
        let mut thetas = Vec::new();
        let mut tps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(WedgeError::validation(format!(
                    "profile table line {}: expected 3 columns `r theta theta_prime`, got {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let mut vals = [0.0f64; 3];
            for (slot, col) in vals.iter_mut().zip(&cols) {
                *slot = col.parse().map_err(|_| {
                    WedgeError::validation(format!(
                        "profile table line {}: cannot parse `{col}` as a number",
                        lineno + 1
                    ))
                })?;
            }
            if !vals.iter().all(|v| v.is_finite()) {
                return Err(WedgeError::validation(format!(
                    "profile table line {}: non-finite value",
                    lineno + 1
                )));
            }
            if let Some(&prev) = rs.last() {
                if vals[0] <= prev {
                    return Err(WedgeError::validation(format!(
                        "profile table line {}: r must be strictly increasing ({} after {prev})",
                        lineno + 1,
                        vals[0]
                    )));
                }
            }
            if vals[0] <= 0.0 {
                return Err(WedgeError::validation(format!(
                    "profile table line {}: r must be positive",
                    lineno + 1
                )));
            }
            rs.push(vals[0]);
            thetas.push(vals[1]);
            tps.push(vals[2]);
        }
        if rs.len() < 2 {
            return Err(WedgeError::validation(
                "profile table needs at least two rows".to_string(),
            ));
        }
        // compactly supported iff the trailing θ′ samples vanish (the
        // profile is continued with θ′ = θ′(r_last) beyond the table)
        let support_radius = if *tps.last().unwrap() == 0.0 {
            let mut k = tps.len() - 1;
            while k > 0 && tps[k - 1] == 0.0 {
                k -= 1;
            }
            Some(rs[k])
        } else {
            None
        };
        // extrema of the interpolant: |θ′| at nodes, |r θ′| sampled inside
        // each interval (piecewise quadratic)
        let sup_tp = tps.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut c = 0.0f64;
        for w in 0..rs.len() - 1 {
            for q in 0..=16 {
                let r = rs[w] + (rs[w + 1] - rs[w]) * q as f64 / 16.0;
                let tp = interp_linear(&rs, &tps, r);
                c = c.max((r * tp).abs());
            }
        }
        Ok(ThetaProfile {
            name: name.to_string(),
            kind: ProfileKind::Tabulated {
                rs,
                thetas,
                theta_primes: tps,
            },
            support_radius,
            twist_bound: c,
            sup_theta_prime: sup_tp,
        })
    }

    /// Parse a tabulated profile from a file.
    pub fn from_table_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "table".to_string());
        Self::from_table_str(&name, &text)
    }
}

/// Piecewise-linear interpolation, clamped to the end values outside.
fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let hi = xs.partition_point(|&v| v < x);
    let lo = hi - 1;
    let t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + t * (ys[hi] - ys[lo])
}

/// Metric of the curvilinear map at radius r:
/// G = [[1 + r²θ′², r²θ′], [r²θ′, r²]], det G = r².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEval {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub det: f64,
}

/// Names of the built-in profiles, in figure order.
pub const BUILTIN_PROFILES: [&str; 4] = ["straight", "sinc", "sin-capped", "log3"];

/// Construct a built-in profile by name.
///
/// `straight` has θ ≡ 0; `sinc` is θ = sin(r)/r (bounded rθ′ but support
/// not compact); `sin-capped` is θ = sin r capped at −1 beyond 3π/2
/// (compactly supported); `log3` is θ = 3 log r (rθ′ ≡ 3, derivative
/// singular at the origin). The quasi-cylindrical/quasi-bounded shapes
/// (`linear`, `quadratic`) are rejected.
pub fn builtin_profile(name: &str) -> Result<ThetaProfile> {
    let kind = match name {
        "straight" => ProfileKind::Straight,
        "sinc" => ProfileKind::Sinc,
        "sin-capped" => ProfileKind::SinCapped,
        "log3" => ProfileKind::Log3,
        "linear" | "quadratic" => {
            return Err(WedgeError::validation(format!(
                "profile `{name}` is quasi-cylindrical/quasi-bounded (unbounded r θ′) and out of scope"
            )))
        }
        _ => {
            return Err(WedgeError::validation(format!(
                "unknown profile `{name}`; valid names: {}",
                BUILTIN_PROFILES.join(", ")
            )))
        }
    };
    let mut profile = ThetaProfile {
        name: name.to_string(),
        kind,
        support_radius: None,
        twist_bound: 0.0,
        sup_theta_prime: 0.0,
    };
    match name {
        "straight" => {
            profile.support_radius = Some(0.0);
        }
        "sinc" => {
            // rθ′ = cos r − sinc r peaks near r ≈ 2.5; θ′ decays like 1/r
            let tc = sample_constants(&profile, 500.0, 1 << 21);
            profile.twist_bound = tc.0;
            profile.sup_theta_prime = tc.1;
        }
        "sin-capped" => {
            profile.support_radius = Some(SIN_CAPPED_SUPPORT);
            let tc = sample_constants(&profile, SIN_CAPPED_SUPPORT, 1 << 21);
            profile.twist_bound = tc.0;
            profile.sup_theta_prime = 1.0; // |cos| attains 1 at r = π
        }
        "log3" => {
            profile.twist_bound = 3.0; // r θ′ ≡ 3
            profile.sup_theta_prime = f64::INFINITY; // θ′ = 3/r blows up at 0
        }
        _ => unreachable!(),
    }
    Ok(profile)
}

fn sample_constants(profile: &ThetaProfile, r_max: f64, n: usize) -> (f64, f64) {
    exec::fold_indexed(
        n,
        (0.0f64, 0.0f64),
        |k| {
            let r = (k as f64 + 1.0) * r_max / n as f64;
            let tp = profile.theta_prime(r);
            ((r * tp).abs(), tp.abs())
        },
        |a, b| (a.0.max(b.0), a.1.max(b.1)),
    )
}

/// Evaluate the induced metric at radius r > 0.
pub fn metric_at(profile: &ThetaProfile, r: f64) -> Result<MetricEval> {
    if !(r > 0.0) {
        return Err(WedgeError::validation(format!(
            "metric_at requires r > 0, got {r}"
        )));
    }
    let tp = profile.theta_prime(r);
    let r2 = r * r;
    Ok(MetricEval {
        g11: 1.0 + r2 * tp * tp,
        g12: r2 * tp,
        g22: r2,
        det: r2, // g11·g22 − g12² collapses to r² identically
    })
}

/// Dense-sampling estimates of (C, ‖θ′‖∞) over (0, r_max], together with
/// the sample spacing they were obtained at. Lower bounds that sampling
/// refines.
#[derive(Debug, Clone, Copy)]
pub struct TwistConstants {
    /// sup |r θ′(r)| over the sampled range.
    pub c: f64,
    /// sup |θ′(r)| over the sampled range.
    pub sup_theta_prime: f64,
    /// Spacing of the uniform sample grid.
    pub resolution: f64,
}

/// Estimate the twist constants of a profile by uniform dense sampling.
pub fn twist_constants(profile: &ThetaProfile, r_max: f64, n_samples: usize) -> Result<TwistConstants> {
    if n_samples < 1000 {
        return Err(WedgeError::validation(format!(
            "twist_constants needs n_samples >= 1000, got {n_samples}"
        )));
    }
    if !(r_max > 0.0) {
        return Err(WedgeError::validation("twist_constants needs r_max > 0".to_string()));
    }
    if let Some(rs) = profile.support_radius() {
        if r_max < rs {
            return Err(WedgeError::validation(format!(
                "twist_constants: r_max = {r_max} misses the support radius {rs}"
            )));
        }
    }
    let (c, sup_tp) = sample_constants(profile, r_max, n_samples);
    Ok(TwistConstants {
        c,
        sup_theta_prime: sup_tp,
        resolution: r_max / n_samples as f64,
    })
}
