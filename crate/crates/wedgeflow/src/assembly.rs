//! Discretization of the half-strip U = (0, rho_max) × (0, 2πa) and
//! assembly of the quadratic forms.
//!
//! The grid is staggered in the radial direction: nodes sit at cell
//! centers ρ_i = (i − 1/2)Δρ, radial faces at i·Δρ. The face at ρ = 0
//! carries zero quadrature weight (the measure is ρ dρ dφ), so no axis
//! condition is needed; the outer boundary is either Dirichlet (a zero
//! ghost row beyond ρ = rho_max) or natural/Neumann (no face term).
//! Angular nodes are interior, φ_j = j·Δφ with Δφ = 2πa/(n_phi+1), and
//! the Dirichlet conditions at φ = 0, 2πa are zero ghosts.
//!
//! Every form is assembled from first-order face functionals
//!     g = (D_ρ v) − θ′(ρ_face) (D̄_φ v),      (radial faces)
//!     h = (D_φ v)/ρ_i,                        (angular faces)
//! squared and summed with quadrature weights, so the matrices are
//! symmetric positive semidefinite by construction, bitwise. θ′ is
//! evaluated pointwise at radial cell faces. The skew term M_s uses
//! centered angular differences at nodes, which makes it exactly
//! skew-symmetric in the mass inner product.

use crate::error::{Result, WedgeError};
use crate::exec;
use crate::geometry::{validate_a, ThetaProfile};
use crate::linalg::CsrMatrix;

use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

/// Staggered tensor-product grid on (0, rho_max) × (0, 2πa).
#[derive(Debug, Clone)]
pub struct WedgeGrid {
    a: f64,
    rho_max: f64,
    n_rho: usize,
    n_phi: usize,
    d_rho: f64,
    d_phi: f64,
    rho_nodes: Vec<f64>,
    phi_nodes: Vec<f64>,
}

impl WedgeGrid {
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }
    pub fn n_rho(&self) -> usize {
        self.n_rho
    }
    pub fn n_phi(&self) -> usize {
        self.n_phi
    }
    pub fn d_rho(&self) -> f64 {
        self.d_rho
    }
    pub fn d_phi(&self) -> f64 {
        self.d_phi
    }
    /// Radial node positions ρ_i = (i + 1/2)Δρ, i = 0..n_rho.
    pub fn rho_nodes(&self) -> &[f64] {
        &self.rho_nodes
    }
    /// Angular node positions φ_j = (j + 1)Δφ, j = 0..n_phi.
    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi_nodes
    }
    pub fn n_unknowns(&self) -> usize {
        self.n_rho * self.n_phi
    }
    /// Row-major flattening: unknown (i, j) lives at i·n_phi + j.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }
    /// Diagonal of the mass matrix: ρ_i Δρ Δφ per node.
    pub fn mass(&self) -> Vec<f64> {
        let w = self.d_rho * self.d_phi;
        let mut m = Vec::with_capacity(self.n_unknowns());
        for i in 0..self.n_rho {
            for _ in 0..self.n_phi {
                m.push(self.rho_nodes[i] * w);
            }
        }
        m
    }
    /// Sample a function of (ρ, φ) at the grid nodes, row-major.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_unknowns());
        for i in 0..self.n_rho {
            for j in 0..self.n_phi {
                v.push(f(self.rho_nodes[i], self.phi_nodes[j]));
            }
        }
        v
    }
}

/// Build the staggered grid. Structural bounds only (n_rho ≥ 2,
/// n_phi ≥ 1) so that hand-checkable tiny grids remain constructible;
/// production resolutions start around 8 × 4.
pub fn make_grid(a: f64, rho_max: f64, n_rho: usize, n_phi: usize) -> Result<WedgeGrid> {
    validate_a(a)?;
    if !(rho_max > 0.0) {
        return Err(WedgeError::validation(format!(
            "rho_max must be positive, got {rho_max}"
        )));
    }
    if n_rho < 2 || n_phi < 1 {
        return Err(WedgeError::validation(format!(
            "grid needs n_rho >= 2 and n_phi >= 1, got {n_rho} x {n_phi}"
        )));
    }
    let d_rho = rho_max / n_rho as f64;
    let d_phi = 2.0 * std::f64::consts::PI * a / (n_phi as f64 + 1.0);
    let rho_nodes = (0..n_rho).map(|i| (i as f64 + 0.5) * d_rho).collect();
    let phi_nodes = (0..n_phi).map(|j| (j as f64 + 1.0) * d_phi).collect();
    Ok(WedgeGrid {
        a,
        rho_max,
        n_rho,
        n_phi,
        d_rho,
        d_phi,
        rho_nodes,
        phi_nodes,
    })
}

/// Outer radial boundary handling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterBoundary {
    /// Zero ghost row beyond rho_max (truncated Dirichlet problem).
    Dirichlet,
    /// No face term at rho_max (natural boundary; Neumann minimizers).
    Neumann,
}

pub(crate) struct OperatorSpec<'a> {
    /// θ′ evaluated at radial face radii.
    pub twist: &'a (dyn Fn(f64) -> f64 + Sync),
    /// Coefficient of |v|² added pointwise (times the measure); receives ρ.
    pub potential: Option<&'a (dyn Fn(f64) -> f64 + Sync)>,
    pub outer: OuterBoundary,
}

/// Assemble the symmetric operator matrix for
/// ∫ [ |(∂_ρ − θ′ ∂_φ)v|² + |∂_φ v / ρ|² + V(ρ)|v|² ] ρ dρ dφ.
pub(crate) fn assemble_operator(grid: &WedgeGrid, spec: &OperatorSpec) -> CsrMatrix {
    let n_rho = grid.n_rho;
    let n_phi = grid.n_phi;
    let d_rho = grid.d_rho;
    let d_phi = grid.d_phi;
    let n = grid.n_unknowns();

    // Radial faces f = 0..n_faces-1 at ρ = (f+1)Δρ; the last face is the
    // outer boundary and is dropped for the natural condition.
    let n_faces = match spec.outer {
        OuterBoundary::Dirichlet => n_rho,
        OuterBoundary::Neumann => n_rho - 1,
    };
    let inv_dr = 1.0 / d_rho;
    let quarter_inv_dphi = 1.0 / (4.0 * d_phi);

    let radial: Vec<Vec<(usize, usize, f64)>> = exec::map_indexed(n_faces, |f| {
        let rho_f = (f as f64 + 1.0) * d_rho;
        let w = rho_f * d_rho * d_phi;
        let tp = (spec.twist)(rho_f);
        let mut trips = Vec::with_capacity(n_phi * 36);
        // stencil of the face functional: (node, coefficient)
        let mut stencil: Vec<(usize, f64)> = Vec::with_capacity(6);
        for j in 0..n_phi {
            stencil.clear();
            let add = |i: usize, jj: isize, c: f64, st: &mut Vec<(usize, f64)>| {
                // zero ghosts: angular out-of-range or radial row past the end
                if jj < 0 || jj >= n_phi as isize || i >= n_rho {
                    return;
                }
                st.push((i * n_phi + jj as usize, c));
            };
            add(f, j as isize, -inv_dr, &mut stencil);
            add(f + 1, j as isize, inv_dr, &mut stencil);
            if tp != 0.0 {
                let c = tp * quarter_inv_dphi;
                add(f, j as isize - 1, c, &mut stencil);
                add(f, j as isize + 1, -c, &mut stencil);
                add(f + 1, j as isize - 1, c, &mut stencil);
                add(f + 1, j as isize + 1, -c, &mut stencil);
            }
            for &(p, cp) in &stencil {
                for &(q, cq) in &stencil {
                    trips.push((p, q, w * cp * cq));
                }
            }
        }
        trips
    });

    // Angular faces: per node row i, faces g = 0..n_phi between the
    // Dirichlet ghosts; functional (v_{i,g} − v_{i,g−1})/Δφ at weight
    // Δρ Δφ / ρ_i, plus the pointwise potential on the diagonal.
    let angular: Vec<Vec<(usize, usize, f64)>> = exec::map_indexed(n_rho, |i| {
        let rho_i = grid.rho_nodes[i];
        let w = d_rho * d_phi / rho_i;
        let inv_dphi2 = 1.0 / (d_phi * d_phi);
        let mut trips = Vec::with_capacity(4 * n_phi + n_phi);
        for g in 0..=n_phi {
            // nodes flanking the face: j = g−1 and j = g (ghosts at ends)
            let coeff = w * inv_dphi2;
            let left = if g > 0 { Some(i * n_phi + g - 1) } else { None };
            let right = if g < n_phi { Some(i * n_phi + g) } else { None };
            if let Some(p) = right {
                trips.push((p, p, coeff));
            }
            if let Some(p) = left {
                trips.push((p, p, coeff));
            }
            if let (Some(p), Some(q)) = (left, right) {
                trips.push((p, q, -coeff));
                trips.push((q, p, -coeff));
            }
        }
        if let Some(pot) = spec.potential {
            let mass_i = rho_i * d_rho * d_phi;
            let v = pot(rho_i) * mass_i;
            for j in 0..n_phi {
                let p = i * n_phi + j;
                trips.push((p, p, v));
            }
        }
        trips
    });

    let mut all = Vec::with_capacity(
        radial.iter().map(Vec::len).sum::<usize>() + angular.iter().map(Vec::len).sum::<usize>(),
    );
    for t in radial {
        all.extend(t);
    }
    for t in angular {
        all.extend(t);
    }
    CsrMatrix::from_triplets(n, all)
}

/// Assembled matrices of the self-similar problem at time s.
#[derive(Debug, Clone)]
pub struct FormMatrices {
    /// Matrix of l_s (twisted form with the confining potential ρ²/16).
    pub l_s_mat: CsrMatrix,
    /// Matrix of l (θ′ ≡ 0), the s-independent reference form.
    pub l_mat: CsrMatrix,
    /// Skew matrix of the perturbation M_s = −(1/2) ρ θ′_s(ρ) ∂_φ in the
    /// mass inner product.
    pub m_s_mat: CsrMatrix,
    /// Diagonal quadrature weights ρ_i Δρ Δφ.
    pub mass: Vec<f64>,
    /// Self-similar time the forms were assembled at.
    pub s: f64,
}

/// Matrix of the physical transformed form
/// h[ψ] = ∫ [ |(∂_r − θ′ ∂_φ)ψ|² + |∂_φ ψ / r|² ] r dr dφ
/// on the truncated grid with outer Dirichlet condition.
pub fn assemble_h(grid: &WedgeGrid, profile: &ThetaProfile) -> CsrMatrix {
    assemble_operator(
        grid,
        &OperatorSpec {
            twist: &|r| profile.theta_prime(r),
            potential: None,
            outer: OuterBoundary::Dirichlet,
        },
    )
}

/// Rescaled twist θ′_s(ρ) = e^{s/2} θ′(e^{s/2} ρ).
pub fn rescaled_theta_prime(profile: &ThetaProfile, s: f64, rho: f64) -> f64 {
    let scale = (0.5 * s).exp();
    scale * profile.theta_prime(scale * rho)
}

/// Text of the resolution warning when the rescaled twist support has
/// shrunk below 3Δρ at time s (None when resolved or already absent).
pub(crate) fn resolution_warning(grid: &WedgeGrid, profile: &ThetaProfile, s: f64) -> Option<String> {
    let r_supp = profile.support_radius()?;
    let rescaled = (-0.5 * s).exp() * r_supp;
    if rescaled > 0.0 && rescaled < 3.0 * grid.d_rho() {
        Some(format!(
            "rescaled twist support {rescaled:.3e} at s = {s:.3} is below 3 dRho = {:.3e}; \
             L_s - L is at or below grid resolution",
            3.0 * grid.d_rho()
        ))
    } else {
        None
    }
}

/// Assemble L_s, L, M_s and the mass matrix at self-similar time s ≥ 0.
pub fn assemble_forms(grid: &WedgeGrid, profile: &ThetaProfile, s: f64) -> Result<FormMatrices> {
    if let Some(msg) = resolution_warning(grid, profile, s) {
        log::warn!("{msg}");
    }
    let (l_s_mat, m_s_mat) = assemble_ls_ms(grid, profile, s)?;
    let potential = |rho: f64| rho * rho / 16.0;
    let l_mat = assemble_operator(
        grid,
        &OperatorSpec {
            twist: &|_| 0.0,
            potential: Some(&potential),
            outer: OuterBoundary::Dirichlet,
        },
    );
    Ok(FormMatrices {
        l_s_mat,
        l_mat,
        m_s_mat,
        mass: grid.mass(),
        s,
    })
}

/// L_s and M_s alone; the time stepper rebuilds these every step while
/// the twist support is still resolved.
pub(crate) fn assemble_ls_ms(
    grid: &WedgeGrid,
    profile: &ThetaProfile,
    s: f64,
) -> Result<(CsrMatrix, CsrMatrix)> {
    if !(s >= 0.0) {
        return Err(WedgeError::validation(format!(
            "assemble_forms requires s >= 0, got {s}"
        )));
    }
    let potential = |rho: f64| rho * rho / 16.0;
    let l_s_mat = assemble_operator(
        grid,
        &OperatorSpec {
            twist: &|rho| rescaled_theta_prime(profile, s, rho),
            potential: Some(&potential),
            outer: OuterBoundary::Dirichlet,
        },
    );
    let m_s_mat = assemble_skew(grid, profile, s);
    Ok((l_s_mat, m_s_mat))
}

/// Weak-form matrix of M_s = −(1/2) ρ θ′_s(ρ) ∂_φ with centered angular
/// differences: entries come in exact ± pairs, so vᵀ M v = 0 to rounding.
fn assemble_skew(grid: &WedgeGrid, profile: &ThetaProfile, s: f64) -> CsrMatrix {
    let n_phi = grid.n_phi;
    let rows: Vec<Vec<(usize, usize, f64)>> = exec::map_indexed(grid.n_rho, |i| {
        let rho_i = grid.rho_nodes[i];
        let c = -0.5 * rho_i * rescaled_theta_prime(profile, s, rho_i);
        if c == 0.0 {
            return Vec::new();
        }
        let mass_i = rho_i * grid.d_rho * grid.d_phi;
        let x = c * mass_i / (2.0 * grid.d_phi);
        let mut trips = Vec::with_capacity(2 * n_phi);
        for j in 0..n_phi {
            let p = i * n_phi + j;
            if j + 1 < n_phi {
                trips.push((p, p + 1, x));
                trips.push((p + 1, p, -x));
            }
        }
        trips
    });
    let mut all = Vec::new();
    for t in rows {
        all.extend(t);
    }
    CsrMatrix::from_triplets(grid.n_unknowns(), all)
}

/// Sharp elementary bound on the form ratio: K = max(2, 1 + 2C²).
pub fn equivalence_constant(c: f64) -> f64 {
    (1.0 + 2.0 * c * c).max(2.0)
}

/// Measure the form equivalence l_s ≍ l on random vectors: returns the
/// (min, max) of (vᵀ L_s v)/(vᵀ L v) across `trials` seeded random v.
/// A ratio outside [1/K, K] with K = max(2, 1 + 2C²) is an invariant
/// violation and is reported with the witness vector.
pub fn form_equivalence_check(
    grid: &WedgeGrid,
    profile: &ThetaProfile,
    s: f64,
    trials: usize,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(WedgeError::validation("form_equivalence_check: trials >= 1"));
    }
    let forms = assemble_forms(grid, profile, s)?;
    let n = grid.n_unknowns();
    let k_bound = equivalence_constant(profile.twist_bound());
    let ratios: Vec<(f64, Vec<f64>)> = exec::map_indexed(trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0000 + t as u64);
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let num = forms.l_s_mat.quad_form(&v);
        let den = forms.l_mat.quad_form(&v);
        (num / den, v)
    });
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for (ratio, v) in &ratios {
        if !(*ratio >= 1.0 / k_bound && *ratio <= k_bound) {
            return Err(WedgeError::Invariant {
                message: format!(
                    "form ratio {ratio} escapes [1/K, K] with K = {k_bound} (C = {})",
                    profile.twist_bound()
                ),
                witness: Some(v.clone()),
            });
        }
        lower = lower.min(*ratio);
        upper = upper.max(*ratio);
    }
    Ok((lower, upper))
}
