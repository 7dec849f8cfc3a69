//! Spectra of the discretized self-similar operators.
//!
//! The reference operator L decouples into angular Dirichlet modes
//! sin(√ν_m φ) with ν_m = (m/(2a))² and radial oscillator modes, giving
//! the exact spectrum { n + 1/2 + m/(4a) : n ∈ ℕ, m ∈ ℕ* } with
//! eigenfunctions ρ^μ e^{−ρ²/8} L_n^μ(ρ²/4) sin(μφ), μ = √ν_m. The
//! exponent/order convention (μ = √ν_m versus μ = ν_m) is fixed by a
//! residual check against the discretized operator rather than trusted
//! typography; see [`eigenfunction_residual`].

use crate::assembly::{assemble_forms, FormMatrices, WedgeGrid};
use crate::error::{Result, WedgeError};
use crate::exec;
use crate::geometry::{validate_a, ThetaProfile};
use crate::linalg::{self, smallest_eigenpairs, CsrMatrix, EigOptions};
use crate::special::generalized_laguerre;

/// One converged discrete eigenpair.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Eigenvalue of A v = λ M v.
    pub value: f64,
    /// Mass-normalized coefficients on the grid (vᵀ M v = 1).
    pub vector: Vec<f64>,
    /// ‖A v − λ M v‖₂ / ‖v‖_M.
    pub residual: f64,
    /// Position in the ascending spectrum (0 = lowest).
    pub index: usize,
}

/// One exact mode of the reference operator L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMode {
    /// Radial quantum number n ∈ ℕ.
    pub n: u32,
    /// Angular quantum number m ∈ ℕ*.
    pub m: u32,
    pub a: f64,
    /// ν_m = (m/(2a))².
    pub nu: f64,
    /// Eigenvalue n + (1 + √ν_m)/2 = n + 1/2 + m/(4a).
    pub value: f64,
}

impl ExactMode {
    pub fn new(n: u32, m: u32, a: f64) -> Result<Self> {
        validate_a(a)?;
        if m == 0 {
            return Err(WedgeError::validation("angular quantum number m >= 1"));
        }
        let mu = m as f64 / (2.0 * a);
        Ok(ExactMode {
            n,
            m,
            a,
            nu: mu * mu,
            value: n as f64 + 0.5 + m as f64 / (4.0 * a),
        })
    }
}

/// The k smallest eigenvalues of L with multiplicity, ties ordered by
/// (m, n) ascending.
pub fn exact_spectrum(a: f64, k: usize) -> Result<Vec<ExactMode>> {
    validate_a(a)?;
    if k == 0 {
        return Err(WedgeError::validation("exact_spectrum needs k >= 1"));
    }
    // every unit step in n is available, so the k-th value cannot exceed
    // the lowest value plus k
    let v_max = 0.5 + 1.0 / (4.0 * a) + k as f64;
    let m_max = ((v_max - 0.5) * 4.0 * a).ceil() as u32 + 1;
    let n_max = v_max.ceil() as u32 + 1;
    let mut modes = Vec::new();
    for m in 1..=m_max {
        for n in 0..=n_max {
            let mode = ExactMode::new(n, m, a)?;
            if mode.value <= v_max {
                modes.push(mode);
            }
        }
    }
    modes.sort_by(|x, y| {
        x.value
            .partial_cmp(&y.value)
            .unwrap()
            .then(x.m.cmp(&y.m))
            .then(x.n.cmp(&y.n))
    });
    modes.truncate(k);
    Ok(modes)
}

/// Eigenfunction exponent/angular-frequency convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenfunctionConvention {
    /// μ = √ν_m = m/(2a): satisfies the Dirichlet condition at φ = 2πa
    /// and the eigenvalue identity; the working convention.
    SqrtNu,
    /// μ = ν_m, kept testable for the residual comparison.
    Nu,
}

/// Evaluate ρ^μ e^{−ρ²/8} L_n^μ(ρ²/4) sin(μ φ) with the requested
/// convention for μ.
pub fn exact_eigenfunction_with(
    mode: &ExactMode,
    convention: EigenfunctionConvention,
    rho: f64,
    phi: f64,
) -> Result<f64> {
    let two_pi_a = 2.0 * std::f64::consts::PI * mode.a;
    if !(phi > 0.0 && phi < two_pi_a) {
        return Err(WedgeError::validation(format!(
            "phi = {phi} outside (0, {two_pi_a})"
        )));
    }
    let mu = match convention {
        EigenfunctionConvention::SqrtNu => mode.nu.sqrt(),
        EigenfunctionConvention::Nu => mode.nu,
    };
    Ok(rho.powf(mu)
        * (-rho * rho / 8.0).exp()
        * generalized_laguerre(mode.n, mu, rho * rho / 4.0)
        * (mu * phi).sin())
}

/// Evaluate the exact eigenfunction in the verified √ν_m convention.
pub fn exact_eigenfunction(mode: &ExactMode, rho: f64, phi: f64) -> Result<f64> {
    exact_eigenfunction_with(mode, EigenfunctionConvention::SqrtNu, rho, phi)
}

/// Residual ‖L v − λ M v‖ / ‖v‖_M of the sampled eigenfunction against
/// the discretized reference operator: the check that settles the
/// exponent convention. The correct convention shrinks under refinement;
/// the other stalls at O(1).
pub fn eigenfunction_residual(
    grid: &WedgeGrid,
    mode: &ExactMode,
    convention: EigenfunctionConvention,
) -> Result<f64> {
    let straight = crate::geometry::builtin_profile("straight")?;
    let forms = assemble_forms(grid, &straight, 0.0)?;
    let v = grid.sample(|rho, phi| {
        exact_eigenfunction_with(mode, convention, rho, phi).unwrap_or(0.0)
    });
    let mut r = forms.l_mat.apply(&v);
    for i in 0..v.len() {
        r[i] -= mode.value * forms.mass[i] * v[i];
    }
    Ok(linalg::norm2(&r) / linalg::mass_dot(&v, &forms.mass, &v).sqrt())
}

/// The k lowest eigenpairs of L_s v = λ M v by shift-invert subspace
/// iteration at shift 0 (L_s is positive definite).
pub fn lowest_eigenpairs(forms: &FormMatrices, k: usize, tol: f64) -> Result<Vec<EigenResult>> {
    lowest_eigenpairs_of(&forms.l_s_mat, &forms.mass, k, tol)
}

/// Same solver exposed for any symmetric positive definite matrix in the
/// mass inner product (used for L as well as L_s).
pub fn lowest_eigenpairs_of(
    mat: &CsrMatrix,
    mass: &[f64],
    k: usize,
    tol: f64,
) -> Result<Vec<EigenResult>> {
    let opts = EigOptions::new(k).with_tol(tol);
    let pairs = smallest_eigenpairs(mat, mass, &opts)?;
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(index, p)| EigenResult {
            value: p.value,
            vector: p.vector,
            residual: p.residual,
            index,
        })
        .collect())
}

/// One point of the eigenvalue trajectory s ↦ λ₀(s).
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub s: f64,
    pub lambda0: f64,
    pub residual: f64,
}

/// Track the lowest eigenvalue of L_s along a list of s values. For
/// profiles without compact support the convergence λ₀(s) → 1/2 + 1/(4a)
/// is unproven; a warning is logged and the values are reported as-is.
/// Solves for different s run in parallel.
pub fn eigenvalue_trajectory(
    grid: &WedgeGrid,
    profile: &ThetaProfile,
    s_values: &[f64],
    tol: f64,
) -> Result<Vec<TrajectoryPoint>> {
    if s_values.is_empty() {
        return Err(WedgeError::validation("eigenvalue_trajectory: empty s list"));
    }
    if !profile.is_compactly_supported() {
        log::warn!(
            "profile `{}` has non-compact twist support; eigenvalue convergence is unproven",
            profile.name()
        );
    }
    let results: Vec<Result<TrajectoryPoint>> = exec::map_indexed(s_values.len(), |q| {
        let s = s_values[q];
        let forms = assemble_forms(grid, profile, s)?;
        let pairs = lowest_eigenpairs(&forms, 1, tol)?;
        Ok(TrajectoryPoint {
            s,
            lambda0: pairs[0].value,
            residual: pairs[0].residual,
        })
    });
    results.into_iter().collect()
}
