//! State construction from the fifteen real coordinates.
//!
//! Pure states are images of fixed basis vectors under cascades of 2×2
//! unitary blocks; mixed states are eigenensembles `ρ = Σ μ_k |e_k⟩⟨e_k|`
//! whose eigenvectors come from the cascade and whose weights come from the
//! simplex coordinates `ν_i`. The same density matrix is also available in
//! closed form ([`closed_form_density`]), entry by entry in the bold product
//! basis; the two routes agreeing entrywise is the central correctness
//! check of the crate.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::linalg::{kron, phase, CMat, CVec, C64, ONE, ZERO};
use crate::{tol, Error, Result};

const ANGLE_SLACK: f64 = 1e-9;

/// One `(θ, ψ)` pair of a cascade block, with
/// `c = cos(θ/2)·e^{−iψ/2}` and `s = sin(θ/2)·e^{iψ/2}`.
///
/// θ is restricted to `[0, π]` (the antipodal point θ = π is admitted so
/// the chart is closed); ψ is periodic and gets wrapped into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnglePair {
    theta: f64,
    psi: f64,
}

impl AnglePair {
    pub fn new(theta: f64, psi: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NotFinite { name: "theta" });
        }
        if !psi.is_finite() {
            return Err(Error::NotFinite { name: "psi" });
        }
        if !(-ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                lo: 0.0,
                hi: PI,
            });
        }
        Ok(AnglePair {
            theta: theta.clamp(0.0, PI),
            psi: psi.rem_euclid(TAU),
        })
    }

    pub fn zero() -> Self {
        AnglePair {
            theta: 0.0,
            psi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// `c = cos(θ/2)·e^{−iψ/2}`
    pub fn c(&self) -> C64 {
        phase(-self.psi / 2.0) * (self.theta / 2.0).cos()
    }

    /// `s = sin(θ/2)·e^{iψ/2}`
    pub fn s(&self) -> C64 {
        phase(self.psi / 2.0) * (self.theta / 2.0).sin()
    }
}

/// The eigenensemble weights `μ₀ ≥ μ₁ ≥ μ₂ ≥ μ₃ ≥ 0`, `Σμ = 1`.
///
/// The ordering may be relaxed explicitly (`new_relaxed`) for analyses that
/// anchor a pure state on the smallest eigenvalue; the flag records which
/// convention produced the weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingWeights {
    mu: [f64; 4],
    hierarchical: bool,
}

impl MixingWeights {
    pub fn new(mu: [f64; 4]) -> Result<Self> {
        Self::validate_simplex(&mu)?;
        for k in 0..3 {
            if mu[k] + tol::EPS_WEIGHT < mu[k + 1] {
                return Err(Error::InvalidWeights(format!(
                    "mu[{}] = {} < mu[{}] = {} breaks the hierarchy",
                    k,
                    mu[k],
                    k + 1,
                    mu[k + 1]
                )));
            }
        }
        Ok(MixingWeights {
            mu: mu.map(|m| m.max(0.0)),
            hierarchical: true,
        })
    }

    /// Accepts any point of the probability simplex, ordering ignored.
    pub fn new_relaxed(mu: [f64; 4]) -> Result<Self> {
        Self::validate_simplex(&mu)?;
        Ok(MixingWeights {
            mu: mu.map(|m| m.max(0.0)),
            hierarchical: false,
        })
    }

    fn validate_simplex(mu: &[f64; 4]) -> Result<()> {
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::NotFinite { name: "mu" });
        }
        if let Some(&bad) = mu.iter().find(|&&m| m < -tol::EPS_WEIGHT) {
            return Err(Error::InvalidWeights(format!("negative weight {bad}")));
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(())
    }

    pub fn mu(&self) -> [f64; 4] {
        self.mu
    }

    pub fn get(&self, k: usize) -> f64 {
        self.mu[k]
    }

    pub fn hierarchical(&self) -> bool {
        self.hierarchical
    }
}

/// `ν_i = i·(μ_{i−1} − μ_i)` inverted: the weights from the simplex
/// coordinates.
pub fn nu_to_mu(nu: [f64; 3]) -> Result<MixingWeights> {
    for (i, v) in nu.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NotFinite { name: "nu" });
        }
        if !(-tol::EPS_WEIGHT..=1.0 + tol::EPS_WEIGHT).contains(v) {
            return Err(Error::OutOfRange {
                name: ["nu1", "nu2", "nu3"][i],
                value: *v,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let total = nu[0] + nu[1] + nu[2];
    if total > 1.0 + 1e-9 {
        return Err(Error::InvalidWeights(format!("nu1+nu2+nu3 = {total} > 1")));
    }
    let mu3 = (1.0 - total) / 4.0;
    let mu2 = mu3 + nu[2] / 3.0;
    let mu1 = mu2 + nu[1] / 2.0;
    let mu0 = mu1 + nu[0];
    MixingWeights::new([mu0, mu1, mu2, mu3])
}

/// Inverse of [`nu_to_mu`].
pub fn mu_to_nu(w: &MixingWeights) -> [f64; 3] {
    let m = w.mu();
    [m[0] - m[1], 2.0 * (m[1] - m[2]), 3.0 * (m[2] - m[3])]
}

/// The fifteen coordinates of a generic two-qubit mixed state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitCoords {
    local_a: AnglePair,
    local_b: AnglePair,
    zeta: f64,
    chi: f64,
    a21: AnglePair,
    a32: AnglePair,
    a0: AnglePair,
    nu: [f64; 3],
}

impl TwoQubitCoords {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        local_a: AnglePair,
        local_b: AnglePair,
        zeta: f64,
        chi: f64,
        a21: AnglePair,
        a32: AnglePair,
        a0: AnglePair,
        nu: [f64; 3],
    ) -> Result<Self> {
        if !zeta.is_finite() {
            return Err(Error::NotFinite { name: "zeta" });
        }
        if !chi.is_finite() {
            return Err(Error::NotFinite { name: "chi" });
        }
        if !(-ANGLE_SLACK..=FRAC_PI_4 + ANGLE_SLACK).contains(&chi) {
            return Err(Error::OutOfRange {
                name: "chi",
                value: chi,
                lo: 0.0,
                hi: FRAC_PI_4,
            });
        }
        nu_to_mu(nu)?; // range + hierarchy check
        Ok(TwoQubitCoords {
            local_a,
            local_b,
            zeta: zeta.rem_euclid(TAU),
            chi: chi.clamp(0.0, FRAC_PI_4),
            a21,
            a32,
            a0,
            nu,
        })
    }

    pub fn local_a(&self) -> &AnglePair {
        &self.local_a
    }

    pub fn local_b(&self) -> &AnglePair {
        &self.local_b
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Schmidt angle; `q₊ = cos χ`, `q₋ = sin χ`.
    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn a21(&self) -> &AnglePair {
        &self.a21
    }

    pub fn a32(&self) -> &AnglePair {
        &self.a32
    }

    pub fn a0(&self) -> &AnglePair {
        &self.a0
    }

    pub fn nu(&self) -> [f64; 3] {
        self.nu
    }

    /// Purity parameter of the dominant pure state, `r = cos 2χ`.
    pub fn r(&self) -> f64 {
        (2.0 * self.chi).cos()
    }

    pub fn q_plus(&self) -> f64 {
        self.chi.cos()
    }

    pub fn q_minus(&self) -> f64 {
        self.chi.sin()
    }

    pub fn weights(&self) -> MixingWeights {
        nu_to_mu(self.nu).expect("validated at construction")
    }

    /// Concurrence of the dominant pure state, `C_p = 2 q₊ q₋ = sin 2χ`.
    pub fn c_p(&self) -> f64 {
        (2.0 * self.chi).sin()
    }
}

impl Default for TwoQubitCoords {
    /// The Bell projector: all angles zero, χ = π/4, ν = (1, 0, 0).
    fn default() -> Self {
        TwoQubitCoords::new(
            AnglePair::zero(),
            AnglePair::zero(),
            0.0,
            FRAC_PI_4,
            AnglePair::zero(),
            AnglePair::zero(),
            AnglePair::zero(),
            [1.0, 0.0, 0.0],
        )
        .unwrap()
    }
}

/// Flat, unvalidated form of the coordinate set: the JSON schema consumed
/// by the CLI. Unknown keys are rejected; omitted keys fall back to the
/// Bell-projector defaults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoordsFile {
    pub theta: f64,
    pub psi: f64,
    pub theta_p: f64,
    pub psi_p: f64,
    pub zeta: f64,
    pub chi: f64,
    pub theta21: f64,
    pub psi21: f64,
    pub theta32: f64,
    pub psi32: f64,
    pub theta0: f64,
    pub psi0: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
}

impl Default for CoordsFile {
    fn default() -> Self {
        CoordsFile {
            theta: 0.0,
            psi: 0.0,
            theta_p: 0.0,
            psi_p: 0.0,
            zeta: 0.0,
            chi: FRAC_PI_4,
            theta21: 0.0,
            psi21: 0.0,
            theta32: 0.0,
            psi32: 0.0,
            theta0: 0.0,
            psi0: 0.0,
            nu1: 1.0,
            nu2: 0.0,
            nu3: 0.0,
        }
    }
}

impl CoordsFile {
    pub const KEYS: [&'static str; 15] = [
        "theta", "psi", "theta_p", "psi_p", "zeta", "chi", "theta21", "psi21", "theta32", "psi32",
        "theta0", "psi0", "nu1", "nu2", "nu3",
    ];

    /// Coordinate names that are angles in radians (everything but the ν).
    pub const ANGLE_KEYS: [&'static str; 12] = [
        "theta", "psi", "theta_p", "psi_p", "zeta", "chi", "theta21", "psi21", "theta32", "psi32",
        "theta0", "psi0",
    ];

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "theta" => self.theta,
            "psi" => self.psi,
            "theta_p" => self.theta_p,
            "psi_p" => self.psi_p,
            "zeta" => self.zeta,
            "chi" => self.chi,
            "theta21" => self.theta21,
            "psi21" => self.psi21,
            "theta32" => self.theta32,
            "psi32" => self.psi32,
            "theta0" => self.theta0,
            "psi0" => self.psi0,
            "nu1" => self.nu1,
            "nu2" => self.nu2,
            "nu3" => self.nu3,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "theta" => &mut self.theta,
            "psi" => &mut self.psi,
            "theta_p" => &mut self.theta_p,
            "psi_p" => &mut self.psi_p,
            "zeta" => &mut self.zeta,
            "chi" => &mut self.chi,
            "theta21" => &mut self.theta21,
            "psi21" => &mut self.psi21,
            "theta32" => &mut self.theta32,
            "psi32" => &mut self.psi32,
            "theta0" => &mut self.theta0,
            "psi0" => &mut self.psi0,
            "nu1" => &mut self.nu1,
            "nu2" => &mut self.nu2,
            "nu3" => &mut self.nu3,
            _ => return false,
        };
        *slot = value;
        true
    }

    pub fn build(&self) -> Result<TwoQubitCoords> {
        TwoQubitCoords::new(
            AnglePair::new(self.theta, self.psi)?,
            AnglePair::new(self.theta_p, self.psi_p)?,
            self.zeta,
            self.chi,
            AnglePair::new(self.theta21, self.psi21)?,
            AnglePair::new(self.theta32, self.psi32)?,
            AnglePair::new(self.theta0, self.psi0)?,
            [self.nu1, self.nu2, self.nu3],
        )
    }
}

impl From<&TwoQubitCoords> for CoordsFile {
    fn from(c: &TwoQubitCoords) -> Self {
        CoordsFile {
            theta: c.local_a.theta(),
            psi: c.local_a.psi(),
            theta_p: c.local_b.theta(),
            psi_p: c.local_b.psi(),
            zeta: c.zeta,
            chi: c.chi,
            theta21: c.a21.theta(),
            psi21: c.a21.psi(),
            theta32: c.a32.theta(),
            psi32: c.a32.psi(),
            theta0: c.a0.theta(),
            psi0: c.a0.psi(),
            nu1: c.nu[0],
            nu2: c.nu[1],
            nu3: c.nu[2],
        }
    }
}

/// The 2×2 cascade block `[[c, −s̄], [s, c̄]]`; maps `|0⟩ ↦ c|0⟩ + s|1⟩`.
pub fn su2(p: &AnglePair) -> CMat {
    let (c, s) = (p.c(), p.s());
    CMat::from_rows(&[&[c, -s.conj()], &[s, c.conj()]])
}

/// `(1+r)/2 |φ⟩⟨φ| + (1−r)/2 |φ⊥⟩⟨φ⊥|`, the generic one-qubit mixed state.
pub fn single_qubit_mixed(r: f64, p: &AnglePair) -> Result<CMat> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let u = su2(p);
    let phi = u.column(0);
    let phi_perp = u.column(1);
    Ok(phi
        .projector()
        .scale(C64::new((1.0 + r) / 2.0, 0.0))
        .add(&phi_perp.projector().scale(C64::new((1.0 - r) / 2.0, 0.0))))
}

/// Cascade `U_{(n−1)0} = U_{(n−1)(n−2)} ⋯ U_{10}`: block `j` carries
/// `angles[j−1]` on rows/columns `(j−1, j)`. Maps `|0⟩` to the generic
/// normalized vector with first column `(c₁₀, c₂₁s₁₀, s₂₁s₁₀, …)`.
pub fn cascade_unitary(angles: &[AnglePair], n: usize) -> Result<CMat> {
    if n < 2 {
        return Err(Error::Dimension {
            op: "cascade_unitary",
            details: format!("dimension {n} < 2"),
        });
    }
    if angles.len() != n - 1 {
        return Err(Error::Dimension {
            op: "cascade_unitary",
            details: format!(
                "need {} angle pairs for dimension {n}, got {}",
                n - 1,
                angles.len()
            ),
        });
    }
    let mut u = CMat::identity(n);
    // Right-to-left: U_{10} acts first.
    for (j, pair) in angles.iter().enumerate() {
        let block = su2(pair);
        let mut factor = CMat::identity(n);
        for a in 0..2 {
            for b in 0..2 {
                factor[(j + a, j + b)] = block[(a, b)];
            }
        }
        u = &factor * &u;
    }
    Ok(u)
}

/// Embeds a small unitary acting on `span(basis)` into the full space:
/// identity on the orthogonal complement,
/// `W = I + Σ_{ij} (u_{ij} − δ_{ij}) |bᵢ⟩⟨bⱼ|`.
///
/// This is how the tilde operators act: always on an already-rotated
/// subspace basis, never as fixed-basis matrices.
pub fn rotate_in_span(block: &CMat, basis: &[CVec]) -> CMat {
    let n = basis[0].dim();
    debug_assert_eq!(block.rows(), basis.len());
    let mut w = CMat::identity(n);
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let coeff = block[(i, j)] - if i == j { ONE } else { ZERO };
            if coeff != ZERO {
                w = w.add(&basis[i].outer(&basis[j]).scale(coeff));
            }
        }
    }
    w
}

fn validate_descending(mu: &[f64]) -> Result<()> {
    if mu.iter().any(|m| !m.is_finite() || *m < -tol::EPS_WEIGHT) {
        return Err(Error::InvalidWeights(
            "negative or non-finite weight".into(),
        ));
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
    }
    for w in mu.windows(2) {
        if w[0] + tol::EPS_WEIGHT < w[1] {
            return Err(Error::InvalidWeights("weights not descending".into()));
        }
    }
    Ok(())
}

/// Generic qutrit mixed state: eigenvectors `U₂₀|0⟩`, `Ũ₂₁U₂₀|1⟩`,
/// `Ũ₂₁U₂₀|2⟩` with `Ũ₂₁` rotating only inside `span{U₂₀|1⟩, U₂₀|2⟩}`.
pub fn qutrit_mixed(mu: &[f64; 3], u20: &[AnglePair; 2], tilde21: &AnglePair) -> Result<CMat> {
    validate_descending(mu)?;
    let u = cascade_unitary(u20, 3)?;
    let e0 = u.column(0);
    let b = [u.column(1), u.column(2)];
    let tilde = rotate_in_span(&su2(tilde21), &b);
    let e1 = tilde.mul_vec(&b[0]);
    let e2 = tilde.mul_vec(&b[1]);
    let mut rho = CMat::zeros(3, 3);
    for (w, e) in mu.iter().zip([e0, e1, e2]) {
        rho = rho.add(&e.projector().scale(C64::new(*w, 0.0)));
    }
    Ok(rho)
}

/// Generic qutetrait (four-level) mixed state.
///
/// `Ũ₃₁ = Ũ₃₂Ũ₂₁` rotates `span{U₃₀|1⟩,U₃₀|2⟩,U₃₀|3⟩}`; the outer
/// `tilde32` is a different operator again, acting on the images of
/// `|2⟩,|3⟩` under everything before it.
pub fn qutetrait_mixed(
    mu: &MixingWeights,
    u30: &[AnglePair; 3],
    tilde31: &[AnglePair; 2],
    tilde32: &AnglePair,
) -> Result<CMat> {
    let u = cascade_unitary(u30, 4)?;
    let b = [u.column(1), u.column(2), u.column(3)];
    let inner = rotate_in_span(&cascade_unitary(tilde31, 3)?, &b);
    let e1 = inner.mul_vec(&b[0]);
    let f2 = inner.mul_vec(&b[1]);
    let f3 = inner.mul_vec(&b[2]);
    let outer = rotate_in_span(&su2(tilde32), &[f2.clone(), f3.clone()]);
    let vectors = [u.column(0), e1, outer.mul_vec(&f2), outer.mul_vec(&f3)];
    let mut rho = CMat::zeros(4, 4);
    for (k, e) in vectors.iter().enumerate() {
        rho = rho.add(&e.projector().scale(C64::new(mu.get(k), 0.0)));
    }
    Ok(rho)
}

/// The generic pure two-qubit state
/// `|Ψ⟩ = q₊|φφ′⟩ + e^{iζ} q₋|φ⊥φ′⊥⟩` in the computational basis.
pub fn two_qubit_pure(local_a: &AnglePair, local_b: &AnglePair, zeta: f64, chi: f64) -> CVec {
    let ua = su2(local_a);
    let ub = su2(local_b);
    let phi_phi = ua.column(0).kron(&ub.column(0));
    let perp_perp = ua.column(1).kron(&ub.column(1));
    phi_phi
        .scale(C64::new(chi.cos(), 0.0))
        .add(&perp_perp.scale(phase(zeta) * chi.sin()))
}

/// The bold product basis
/// `|𝟎⟩ = |φφ′⟩, |𝟏⟩ = |φ⊥φ′⊥⟩, |𝟐⟩ = |φφ′⊥⟩, |𝟑⟩ = |φ⊥φ′⟩`.
#[derive(Clone, Debug)]
pub struct BoldBasis {
    vectors: [CVec; 4],
}

impl BoldBasis {
    pub fn vector(&self, k: usize) -> &CVec {
        &self.vectors[k]
    }

    /// Expresses a computational-basis operator in this basis:
    /// `σᵢⱼ = ⟨bᵢ| ρ |bⱼ⟩`.
    pub fn to_bold(&self, rho: &CMat) -> CMat {
        CMat::from_fn(4, 4, |i, j| {
            self.vectors[i].dot(&rho.mul_vec(&self.vectors[j]))
        })
    }

    /// Inverse of [`BoldBasis::to_bold`].
    pub fn from_bold(&self, rho_bold: &CMat) -> CMat {
        let mut out = CMat::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let z = rho_bold[(i, j)];
                if z != ZERO {
                    out = out.add(&self.vectors[i].outer(&self.vectors[j]).scale(z));
                }
            }
        }
        out
    }
}

pub fn bold_basis(local_a: &AnglePair, local_b: &AnglePair) -> BoldBasis {
    let ua = su2(local_a);
    let ub = su2(local_b);
    let (phi, phi_perp) = (ua.column(0), ua.column(1));
    let (phi_p, phi_p_perp) = (ub.column(0), ub.column(1));
    BoldBasis {
        vectors: [
            phi.kron(&phi_p),
            phi_perp.kron(&phi_p_perp),
            phi.kron(&phi_p_perp),
            phi_perp.kron(&phi_p),
        ],
    }
}

/// The four eigenvectors `|e₀⟩ … |e₃⟩` in the computational basis,
/// built by the operator cascade (not from the closed-form coefficients):
/// `U₂₂ = U_q (U_φ ⊗ U_{φ′})`, then `U₃₁` on the orthogonal 3-space of
/// `|e₀⟩`, then the final 2×2 rotation on the images of `|𝟐⟩, |𝟑⟩`.
pub fn ek_basis(coords: &TwoQubitCoords) -> [CVec; 4] {
    let (qp, qm) = (coords.q_plus(), coords.q_minus());
    let uloc = kron(&su2(coords.local_a()), &su2(coords.local_b()));
    let bold0 = uloc.column(0); // image of |00⟩
    let bold1 = uloc.column(3); // image of |11⟩
    let uq_block = CMat::from_rows(&[
        &[C64::new(qp, 0.0), -phase(-coords.zeta()) * qm],
        &[phase(coords.zeta()) * qm, C64::new(qp, 0.0)],
    ]);
    let u22 = &rotate_in_span(&uq_block, &[bold0, bold1]) * &uloc;

    // Identification |0⟩=|00⟩, |1⟩=|11⟩, |2⟩=|01⟩, |3⟩=|10⟩.
    let e0 = u22.column(0);
    let b = [u22.column(3), u22.column(1), u22.column(2)];
    let u31 = rotate_in_span(
        &cascade_unitary(&[*coords.a21(), *coords.a32()], 3).unwrap(),
        &b,
    );
    let e1 = u31.mul_vec(&b[0]);
    let f2 = u31.mul_vec(&b[1]);
    let f3 = u31.mul_vec(&b[2]);
    let tilde32 = rotate_in_span(&su2(coords.a0()), &[f2.clone(), f3.clone()]);
    [e0, e1, tilde32.mul_vec(&f2), tilde32.mul_vec(&f3)]
}

/// Ordered eigenvalues with their orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenEnsemble {
    weights: MixingWeights,
    vectors: [CVec; 4],
}

impl EigenEnsemble {
    pub fn new(weights: MixingWeights, vectors: [CVec; 4]) -> Result<Self> {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let g = vectors[i].dot(&vectors[j]);
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((g - target).norm());
            }
        }
        if worst > tol::EPS_ORTHO {
            return Err(Error::InvariantViolation(format!(
                "ensemble vectors are not orthonormal (Gram deviation {worst:.3e})"
            )));
        }
        Ok(EigenEnsemble { weights, vectors })
    }

    pub fn from_coords(coords: &TwoQubitCoords) -> Self {
        EigenEnsemble {
            weights: coords.weights(),
            vectors: ek_basis(coords),
        }
    }

    pub fn weights(&self) -> &MixingWeights {
        &self.weights
    }

    pub fn vector(&self, k: usize) -> &CVec {
        &self.vectors[k]
    }
}

/// `ρ = Σ μ_k |e_k⟩⟨e_k|` in the computational basis.
pub fn assemble_density(ens: &EigenEnsemble) -> CMat {
    let mut rho = CMat::zeros(4, 4);
    for k in 0..4 {
        rho = rho.add(
            &ens.vector(k)
                .projector()
                .scale(C64::new(ens.weights().get(k), 0.0)),
        );
    }
    rho
}

/// Density matrix in the computational basis, via the ensemble route.
pub fn density_from_coords(coords: &TwoQubitCoords) -> CMat {
    assemble_density(&EigenEnsemble::from_coords(coords))
}

/// The full density matrix in the bold basis, written entry by entry in
/// closed form. Hermitian by construction; must agree with the ensemble
/// route after the basis change, which is the crate's primary
/// cross-validation.
pub fn closed_form_density(coords: &TwoQubitCoords) -> CMat {
    let m = coords.weights().mu();
    let (m03, m13, m23) = (m[0] - m[3], m[1] - m[3], m[2] - m[3]);
    let mu3 = C64::new(m[3], 0.0);
    let (qp, qm) = (coords.q_plus(), coords.q_minus());
    let ezm = phase(-coords.zeta()); // e^{−iζ}
    let ezp = phase(coords.zeta()); // e^{iζ}
    let (c21, s21) = (coords.a21().c(), coords.a21().s());
    let (c32, s32) = (coords.a32().c(), coords.a32().s());
    let (c0, s0) = (coords.a0().c(), coords.a0().s());

    let c21n = c21.norm_sqr();
    let s21n = s21.norm_sqr();
    let c0n = c0.norm_sqr();

    // Components of |e₂⟩ on |𝟐⟩ and |𝟑⟩; the |e₃⟩ analogues never appear
    // because μ₃ multiplies the identity once the others are subtracted.
    let a2 = c0 * c21.conj() * c32 - s0 * s32.conj();
    let b2 = c0 * c21.conj() * s32 + s0 * c32.conj();

    let mut rho = CMat::zeros(4, 4);
    rho[(0, 0)] = C64::new(
        m03 * qp * qp + m13 * qm * qm * c21n + m23 * qm * qm * c0n * s21n,
        0.0,
    ) + mu3;
    rho[(0, 1)] = ezm * (qm * qp) * (m03 - m13 * c21n - m23 * c0n * s21n);
    rho[(0, 2)] = ezm
        * qm
        * (-C64::new(m13, 0.0) * c21 * c32.conj() * s21.conj()
            + C64::new(m23, 0.0) * c0 * s21.conj() * a2.conj());
    rho[(0, 3)] = ezm
        * qm
        * (-C64::new(m13, 0.0) * c21 * s32.conj() * s21.conj()
            + C64::new(m23, 0.0) * c0 * s21.conj() * b2.conj());
    rho[(1, 0)] = ezp * (qm * qp) * (m03 - m13 * c21n - m23 * c0n * s21n);
    rho[(1, 1)] = C64::new(
        m03 * qm * qm + m13 * qp * qp * c21n + m23 * qp * qp * c0n * s21n,
        0.0,
    ) + mu3;
    rho[(1, 2)] = C64::new(qp, 0.0)
        * (C64::new(m13, 0.0) * c21 * c32.conj() * s21.conj()
            - C64::new(m23, 0.0) * c0 * s21.conj() * a2.conj());
    rho[(1, 3)] = C64::new(qp, 0.0)
        * (C64::new(m13, 0.0) * c21 * s32.conj() * s21.conj()
            - C64::new(m23, 0.0) * c0 * s21.conj() * b2.conj());
    rho[(2, 0)] = ezp
        * qm
        * (-C64::new(m13, 0.0) * c21.conj() * c32 * s21
            + C64::new(m23, 0.0) * c0.conj() * s21 * a2);
    rho[(2, 1)] = C64::new(qp, 0.0)
        * (C64::new(m13, 0.0) * c21.conj() * c32 * s21 - C64::new(m23, 0.0) * c0.conj() * s21 * a2);
    rho[(2, 2)] = C64::new(m13 * c32.norm_sqr() * s21n + m23 * a2.norm_sqr(), 0.0) + mu3;
    rho[(2, 3)] =
        C64::new(m13 * s21n, 0.0) * c32 * s32.conj() + C64::new(m23, 0.0) * b2.conj() * a2;
    rho[(3, 0)] = ezp
        * qm
        * (-C64::new(m13, 0.0) * c21.conj() * s32 * s21
            + C64::new(m23, 0.0) * c0.conj() * s21 * b2);
    rho[(3, 1)] = C64::new(qp, 0.0)
        * (C64::new(m13, 0.0) * c21.conj() * s32 * s21 - C64::new(m23, 0.0) * c0.conj() * s21 * b2);
    rho[(3, 2)] =
        C64::new(m13 * s21n, 0.0) * c32.conj() * s32 + C64::new(m23, 0.0) * b2 * a2.conj();
    rho[(3, 3)] = C64::new(m13 * s21n * s32.norm_sqr() + m23 * b2.norm_sqr(), 0.0) + mu3;
    rho
}

/// [`closed_form_density`] expressed back in the computational basis.
pub fn closed_form_density_computational(coords: &TwoQubitCoords) -> CMat {
    bold_basis(coords.local_a(), coords.local_b()).from_bold(&closed_form_density(coords))
}
