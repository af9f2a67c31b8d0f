//! Scaled Hilbert–Schmidt geometry and generalized Werner lines.
//!
//! The scaled distance `D₂ = ‖ρ−σ‖_F / √2` gives the state space a simple
//! shape in these coordinates: the dominant eigenprojector `E_Ψ` is the
//! pure state closest to ρ, the maximally mixed state sits at `√6/4` from
//! every pure state, and along a Werner line `x·E_Φ + (1−x)/4·I` distances
//! and separability thresholds are straight-line functions of the mixing
//! coordinates.

use crate::entangle::{negativity_oracle, Branch, EntanglementReport};
use crate::linalg::{phase, CMat, CVec, C64};
use crate::parametrize::{bold_basis, two_qubit_pure, MixingWeights, TwoQubitCoords};
use crate::rng::SplitMix64;
use crate::{tol, Error, Result};

/// Scaled Hilbert–Schmidt distance `D₂(ρ, σ) = ‖ρ−σ‖_F / √2`.
pub fn hs_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    if rho.rows() != sigma.rows() || rho.cols() != sigma.cols() {
        return Err(Error::Dimension {
            op: "hs_distance",
            details: format!(
                "{}x{} vs {}x{}",
                rho.rows(),
                rho.cols(),
                sigma.rows(),
                sigma.cols()
            ),
        });
    }
    Ok(rho.sub(sigma).frobenius_norm() / std::f64::consts::SQRT_2)
}

/// Closed form of `D₂(ρ, E_Ψ)` for an eigenensemble state:
/// `√((1−μ₀)² − (μ₁μ₂ + μ₂μ₃ + μ₃μ₁))`.
pub fn hs_distance_to_dominant(w: &MixingWeights) -> f64 {
    let m = w.mu();
    let cross = m[1] * m[2] + m[2] * m[3] + m[3] * m[1];
    ((1.0 - m[0]) * (1.0 - m[0]) - cross).max(0.0).sqrt()
}

/// Samples random pure projectors and checks none of them comes closer to
/// ρ than the dominant eigenprojector `E_Ψ`. This is a falsification probe
/// of a global-minimality claim, not a proof.
pub fn closest_pure_check(coords: &TwoQubitCoords, trials: usize, rng: &mut SplitMix64) -> bool {
    let rho = crate::parametrize::density_from_coords(coords);
    let e_psi = crate::parametrize::ek_basis(coords)[0].projector();
    let d0 = hs_distance(&rho, &e_psi).expect("4x4 by construction");
    for _ in 0..trials {
        let p = random_pure_vector(rng).projector();
        let d = hs_distance(&rho, &p).expect("4x4 by construction");
        if d0 > d + tol::EPS_DIST {
            return false;
        }
    }
    true
}

/// Haar-ish random unit vector in C⁴ from normalized Gaussians.
pub fn random_pure_vector(rng: &mut SplitMix64) -> CVec {
    let v = CVec::from_iter((0..4).map(|_| C64::new(rng.normal(), rng.normal())));
    let n = v.norm();
    v.scale(C64::new(1.0 / n, 0.0))
}

/// A generalized Werner line `x·E_Φ + (1−x)/4·I` through an anchor pure
/// state `E_Φ`; admissible for `x ∈ [−1/3, 1]`.
#[derive(Clone, Copy, Debug)]
pub struct WernerSpec {
    anchor: TwoQubitCoords,
    x: f64,
}

impl WernerSpec {
    pub fn new(anchor: TwoQubitCoords, x: f64) -> Result<Self> {
        let nu = anchor.nu();
        if (nu[0] - 1.0).abs() > 1e-12 || nu[1].abs() > 1e-12 || nu[2].abs() > 1e-12 {
            return Err(Error::NotAtLimit(format!(
                "anchor must be pure, ν = ({}, {}, {})",
                nu[0], nu[1], nu[2]
            )));
        }
        if !(-1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(&x) {
            return Err(Error::OutOfRange {
                name: "x",
                value: x,
                lo: -1.0 / 3.0,
                hi: 1.0,
            });
        }
        Ok(WernerSpec { anchor, x })
    }

    /// Line point from the mixing weight `μ ∈ [0, 1/4]` (the `x ≥ 0` half).
    pub fn from_mu(anchor: TwoQubitCoords, mu: f64) -> Result<Self> {
        if !(0.0..=0.25 + 1e-12).contains(&mu) {
            return Err(Error::OutOfRange {
                name: "mu",
                value: mu,
                lo: 0.0,
                hi: 0.25,
            });
        }
        WernerSpec::new(anchor, 1.0 - 4.0 * mu)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Weight on each of the three non-anchor eigenvectors, `(1−x)/4`.
    pub fn mu(&self) -> f64 {
        (1.0 - self.x) / 4.0
    }

    /// Concurrence of the anchor pure state.
    pub fn c_p(&self) -> f64 {
        self.anchor.c_p()
    }

    pub fn anchor(&self) -> &TwoQubitCoords {
        &self.anchor
    }

    pub fn anchor_vector(&self) -> CVec {
        two_qubit_pure(
            self.anchor.local_a(),
            self.anchor.local_b(),
            self.anchor.zeta(),
            self.anchor.chi(),
        )
    }

    pub fn state(&self) -> CMat {
        werner_state(self)
    }
}

/// The density matrix `x·E_Φ + (1−x)/4·I`, constructed directly so the
/// negative-`x` segment does not have to pass through hierarchy-ordered
/// coordinates.
pub fn werner_state(spec: &WernerSpec) -> CMat {
    let anchor = spec.anchor_vector().projector();
    anchor
        .scale(C64::new(spec.x(), 0.0))
        .add(&CMat::identity(4).scale(C64::new((1.0 - spec.x()) / 4.0, 0.0)))
}

/// The broader `W_⃗μ` family: arbitrary hierarchy weights on the fixed
/// eigenvectors `|Ψ⟩, |Ψ⊥⟩, |φφ′⊥⟩, |φ⊥φ′⟩` (all mixing angles zero).
#[derive(Clone, Debug)]
pub struct GeneralizedWernerMu {
    anchor: TwoQubitCoords,
    weights: MixingWeights,
}

impl GeneralizedWernerMu {
    pub fn new(anchor: TwoQubitCoords, weights: MixingWeights) -> Result<Self> {
        for (name, pair) in [
            ("theta21", anchor.a21()),
            ("theta32", anchor.a32()),
            ("theta0", anchor.a0()),
        ] {
            if pair.theta().abs() > 1e-12 {
                return Err(Error::NotAtLimit(format!(
                    "{name} must vanish for the W family, got {}",
                    pair.theta()
                )));
            }
        }
        Ok(GeneralizedWernerMu { anchor, weights })
    }

    pub fn weights(&self) -> &MixingWeights {
        &self.weights
    }

    pub fn state(&self) -> CMat {
        let basis = bold_basis(self.anchor.local_a(), self.anchor.local_b());
        let (qp, qm) = (self.anchor.q_plus(), self.anchor.q_minus());
        let ez = phase(self.anchor.zeta());
        let psi = basis
            .vector(0)
            .scale(C64::new(qp, 0.0))
            .add(&basis.vector(1).scale(ez * qm));
        let psi_perp = basis
            .vector(0)
            .scale(-ez.conj() * qm)
            .add(&basis.vector(1).scale(C64::new(qp, 0.0)));
        let m = self.weights.mu();
        psi.projector()
            .scale(C64::new(m[0], 0.0))
            .add(&psi_perp.projector().scale(C64::new(m[1], 0.0)))
            .add(&basis.vector(2).projector().scale(C64::new(m[2], 0.0)))
            .add(&basis.vector(3).projector().scale(C64::new(m[3], 0.0)))
    }

    pub fn report(&self) -> Result<EntanglementReport> {
        werner_mu_report(&self.weights, self.anchor.c_p())
    }
}

/// Closed-form verdict for `W_⃗μ`: separable iff
/// `(μ₀−μ₁)·C_p ≤ 2√(μ₂μ₃)`; otherwise
/// negativity `√(C_p²(μ₀−μ₁)² + (μ₂−μ₃)²) − (μ₂+μ₃)` and concurrence
/// `(μ₀−μ₁)C_p − 2√(μ₂μ₃)`.
pub fn werner_mu_report(w: &MixingWeights, c_p: f64) -> Result<EntanglementReport> {
    if !w.hierarchical() {
        return Err(Error::InvalidWeights("hierarchy required".into()));
    }
    if !(-1e-12..=1.0 + 1e-12).contains(&c_p) {
        return Err(Error::OutOfRange {
            name: "c_p",
            value: c_p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let m = w.mu();
    let d01 = m[0] - m[1];
    let d23 = m[2] - m[3];
    let lead = d01 * c_p;
    if lead * lead <= 4.0 * m[2] * m[3] {
        return Ok(EntanglementReport {
            ppt_satisfied: true,
            negativity: 0.0,
            concurrence: 0.0,
            branch: Branch::WernerLine,
        });
    }
    let negativity = (lead * lead + d23 * d23).sqrt() - (m[2] + m[3]);
    let concurrence = lead - 2.0 * (m[2] * m[3]).sqrt();
    Ok(EntanglementReport {
        ppt_satisfied: negativity <= tol::EPS_SEPARABLE,
        negativity,
        concurrence,
        branch: Branch::WernerLine,
    })
}

/// Separability threshold along the equal-tail Werner line:
/// `μ* = C_p / (2(2C_p + 1))` and `ν₁* = 1 / (2C_p + 1)`.
pub fn werner_threshold(c_p: f64) -> (f64, f64) {
    let mu_star = c_p / (2.0 * (2.0 * c_p + 1.0));
    let nu1_star = 1.0 / (2.0 * c_p + 1.0);
    (mu_star, nu1_star)
}

/// Distances along the line: `D₂(W_μ, E_Ψ) = √6·μ` to the anchor and
/// `D₂(W_μ, W_{1/4}) = (√6/4)·ν₁` to the center. Both closed forms are
/// verified against the direct Frobenius computation before returning.
pub fn werner_distances(mu: f64, anchor: &TwoQubitCoords) -> Result<(f64, f64)> {
    let spec = WernerSpec::from_mu(*anchor, mu)?;
    let state = spec.state();
    let sqrt6 = 6.0f64.sqrt();
    let d_anchor = sqrt6 * mu;
    let d_center = sqrt6 / 4.0 * (1.0 - 4.0 * mu);

    let direct_anchor = hs_distance(&state, &spec.anchor_vector().projector())?;
    let center = CMat::identity(4).scale(C64::new(0.25, 0.0));
    let direct_center = hs_distance(&state, &center)?;
    if (direct_anchor - d_anchor).abs() > tol::EPS_DIST
        || (direct_center - d_center).abs() > tol::EPS_DIST
    {
        return Err(Error::InvariantViolation(format!(
            "Werner distance identities broke: anchor {direct_anchor} vs {d_anchor}, \
             center {direct_center} vs {d_center}"
        )));
    }
    Ok((d_anchor, d_center))
}

/// The inverted segment `x ∈ [−1/3, 0]`, i.e. `μ′ ∈ [1/4, 1/3]` with the
/// anchor carrying the smallest eigenvalue. Every such state is separable;
/// the returned verdict is additionally confirmed by the negativity
/// oracle on the constructed state.
pub fn inverted_werner_separable(mu_prime: f64, anchor: &TwoQubitCoords) -> Result<bool> {
    if !(0.25 - 1e-12..=1.0 / 3.0 + 1e-12).contains(&mu_prime) {
        return Err(Error::OutOfRange {
            name: "mu_prime",
            value: mu_prime,
            lo: 0.25,
            hi: 1.0 / 3.0,
        });
    }
    let spec = WernerSpec::new(*anchor, 1.0 - 4.0 * mu_prime)?;
    let neg = negativity_oracle(&spec.state())?;
    if neg > tol::EPS_SEPARABLE {
        return Err(Error::InvariantViolation(format!(
            "inverted Werner state at mu' = {mu_prime} has negativity {neg:.3e}"
        )));
    }
    Ok(true)
}

/// Projection of the closest product state onto the Werner line of an
/// anchor with purity `r`: the foot sits at `μ = (1−r)/6` and is entangled
/// exactly for `C_p = √(1−r²) > (1−r)/(1+2r)`, i.e. for every `r ∈ (0, 1)`.
///
/// The closed-form verdict is cross-checked against the negativity oracle
/// whenever the margin is clearly away from the separability boundary.
pub fn footnote_projection_check(r: f64) -> Result<(f64, bool)> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let mu_proj = (1.0 - r) / 6.0;
    let c_p = (1.0 - r * r).max(0.0).sqrt();
    let boundary = (1.0 - r) / (1.0 + 2.0 * r);
    let margin = c_p - boundary;
    let entangled = margin > 1e-12;

    if margin.abs() > 1e-6 {
        let file = crate::parametrize::CoordsFile {
            chi: r.acos() / 2.0,
            ..Default::default()
        };
        let anchor = file.build()?;
        let spec = WernerSpec::from_mu(anchor, mu_proj)?;
        let oracle_entangled = negativity_oracle(&spec.state())? > tol::EPS_SEPARABLE;
        if oracle_entangled != entangled {
            return Err(Error::InvariantViolation(format!(
                "projection verdict at r = {r} disagrees with the oracle"
            )));
        }
    }
    Ok((mu_proj, entangled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::{concurrence_wootters, slice_s21_zero};
    use crate::linalg::herm_eigen;
    use crate::parametrize::{density_from_coords, ek_basis, nu_to_mu, CoordsFile};
    use crate::verify::draws;

    fn pure_anchor(rng: &mut SplitMix64) -> TwoQubitCoords {
        draws::random_pure_coords(rng)
    }

    #[test]
    fn distance_to_self_is_zero() {
        let rho = density_from_coords(&TwoQubitCoords::default());
        assert_eq!(hs_distance(&rho, &rho).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_distance_matches_direct() {
        let mut rng = SplitMix64::new(111);
        for _ in 0..200 {
            let coords = draws::random_coords(&mut rng);
            let rho = density_from_coords(&coords);
            let e_psi = ek_basis(&coords)[0].projector();
            let direct = hs_distance(&rho, &e_psi).unwrap();
            let closed = hs_distance_to_dominant(&coords.weights());
            assert!((direct - closed).abs() < tol::EPS_DIST);
        }
    }

    #[test]
    fn product_state_sits_at_q_minus() {
        let mut rng = SplitMix64::new(113);
        for _ in 0..100 {
            let anchor = pure_anchor(&mut rng);
            let e_psi = ek_basis(&anchor)[0].projector();
            let bold = bold_basis(anchor.local_a(), anchor.local_b());
            let s_psi = bold.vector(0).projector();
            let d = hs_distance(&s_psi, &e_psi).unwrap();
            assert!((d - anchor.q_minus()).abs() < tol::EPS_DIST);
        }
    }

    #[test]
    fn closest_pure_holds_on_samples() {
        let mut rng = SplitMix64::new(127);
        for _ in 0..20 {
            let coords = draws::random_coords(&mut rng);
            assert!(closest_pure_check(&coords, 300, &mut rng));
        }
        // a pure state is at distance zero from itself
        let pure = pure_anchor(&mut rng);
        assert!(closest_pure_check(&pure, 300, &mut rng));
    }

    #[test]
    fn werner_state_limits_and_spectrum() {
        let mut rng = SplitMix64::new(131);
        let anchor = pure_anchor(&mut rng);
        let iso = WernerSpec::new(anchor, 0.0).unwrap().state();
        assert!(iso.max_abs_diff(&CMat::identity(4).scale(C64::new(0.25, 0.0))) < 1e-15);

        let pure = WernerSpec::new(anchor, 1.0).unwrap().state();
        let e_phi = WernerSpec::new(anchor, 1.0)
            .unwrap()
            .anchor_vector()
            .projector();
        assert!(pure.max_abs_diff(&e_phi) < 1e-15);

        assert!(WernerSpec::new(anchor, 1.2).is_err());
        assert!(WernerSpec::new(anchor, -0.4).is_err());

        for _ in 0..20 {
            let mu = rng.range(0.0, 0.25);
            let spec = WernerSpec::from_mu(anchor, mu).unwrap();
            let eig = herm_eigen(&spec.state()).unwrap();
            assert!((eig.values[0] - (1.0 - 3.0 * mu)).abs() < tol::EPS_EIG);
            for k in 1..4 {
                assert!((eig.values[k] - mu).abs() < tol::EPS_EIG);
            }
        }
    }

    #[test]
    fn werner_report_formulas() {
        // equal tail: N = C = ν₁C_p − (1−ν₁)/2
        let mut rng = SplitMix64::new(137);
        for _ in 0..100 {
            let nu1 = rng.range(0.5, 1.0);
            let c_p = rng.range(0.5, 1.0);
            let w = nu_to_mu([nu1, 0.0, 0.0]).unwrap();
            let rep = werner_mu_report(&w, c_p).unwrap();
            let expect = nu1 * c_p - (1.0 - nu1) / 2.0;
            if expect > 0.0 {
                assert!((rep.negativity - expect).abs() < 1e-13);
                assert!((rep.concurrence - expect).abs() < 1e-13);
                assert!((rep.negativity - ((2.0 * c_p + 1.0) * nu1 - 1.0) / 2.0).abs() < 1e-13);
            }
            // agrees with the s₂₁ = 0 slice at C_Ψ₂ = 0
            let slice = slice_s21_zero(&w, c_p, 0.0).unwrap();
            assert!((rep.negativity - slice.negativity).abs() < 1e-14);
            assert!((rep.concurrence - slice.concurrence).abs() < 1e-14);
        }

        // boundary: C_p = 1 at ν₁ = 1/3 is exactly separable
        let w = nu_to_mu([1.0 / 3.0, 0.0, 0.0]).unwrap();
        let rep = werner_mu_report(&w, 1.0).unwrap();
        assert!(rep.ppt_satisfied && rep.negativity == 0.0);
    }

    #[test]
    fn werner_report_matches_oracle() {
        let mut rng = SplitMix64::new(139);
        for _ in 0..60 {
            let anchor = pure_anchor(&mut rng);
            let w = draws::random_weights(&mut rng);
            let family = GeneralizedWernerMu::new(anchor, w).unwrap();
            let rho = family.state();
            let rep = family.report().unwrap();
            let neg = negativity_oracle(&rho).unwrap();
            let conc = concurrence_wootters(&rho).unwrap();
            assert!((rep.negativity - neg).abs() < tol::EPS_MATCH);
            assert!((rep.concurrence.max(0.0) - conc).abs() < tol::EPS_MATCH);
        }
    }

    #[test]
    fn threshold_golden_numbers() {
        let (mu, nu1) = werner_threshold(1.0);
        assert_eq!(mu, 1.0 / 6.0);
        assert_eq!(nu1, 1.0 / 3.0);
        let (mu, nu1) = werner_threshold(0.5);
        assert_eq!(mu, 0.125);
        assert_eq!(nu1, 0.5);
        let (mu, _) = werner_threshold(0.0);
        assert_eq!(mu, 0.0);
        // small-C_p limit: μ* → C_p/2
        let c = 1e-3;
        let (mu, _) = werner_threshold(c);
        assert!((mu / c - 0.5).abs() < 2.0 * c);
    }

    #[test]
    fn distance_identities_along_the_line() {
        let mut rng = SplitMix64::new(149);
        let anchor = pure_anchor(&mut rng);
        let (d_a, d_c) = werner_distances(0.25, &anchor).unwrap();
        assert!((d_a - 6.0f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(d_c.abs() < 1e-15);
        let (d_a, d_c) = werner_distances(0.0, &anchor).unwrap();
        assert!(d_a.abs() < 1e-15);
        assert!((d_c - 6.0f64.sqrt() / 4.0).abs() < 1e-15);
        for _ in 0..50 {
            // self-verifying against hs_distance internally
            werner_distances(rng.range(0.0, 0.25), &anchor).unwrap();
        }
    }

    #[test]
    fn inverted_segment_is_separable() {
        let mut rng = SplitMix64::new(151);
        let anchor = pure_anchor(&mut rng);
        assert!(inverted_werner_separable(1.0 / 3.0, &anchor).unwrap());
        assert!(inverted_werner_separable(0.25, &anchor).unwrap());
        assert!(inverted_werner_separable(0.2, &anchor).is_err());
        for _ in 0..20 {
            let mu_prime = rng.range(0.25, 1.0 / 3.0);
            assert!(inverted_werner_separable(mu_prime, &pure_anchor(&mut rng)).unwrap());
        }
    }

    #[test]
    fn relaxed_ordering_matches_direct_construction() {
        use crate::parametrize::MixingWeights;
        // On the x < 0 half of the line the anchor eigenvector carries the
        // smallest weight, so the slot-ordered weight vector is no longer
        // descending; with the ordering relaxed, the fixed-eigenvector
        // family must coincide with the direct x·E_Φ + (1−x)/4·I build.
        let mut rng = SplitMix64::new(157);
        for _ in 0..20 {
            let mu_p = rng.range(0.26, 1.0 / 3.0);
            let inverted = [1.0 - 3.0 * mu_p, mu_p, mu_p, mu_p];
            assert!(MixingWeights::new(inverted).is_err());
            let w = MixingWeights::new_relaxed(inverted).unwrap();
            assert!(!w.hierarchical());

            let anchor = pure_anchor(&mut rng);
            let family = GeneralizedWernerMu::new(anchor, w).unwrap().state();
            let direct = WernerSpec::new(anchor, 1.0 - 4.0 * mu_p).unwrap().state();
            assert!(family.max_abs_diff(&direct) < 1e-13);
            assert!(negativity_oracle(&family).unwrap() <= tol::EPS_SEPARABLE);
        }
    }

    #[test]
    fn footnote_projection_verdicts() {
        let (mu, entangled) = footnote_projection_check(0.0).unwrap();
        assert!((mu - 1.0 / 6.0).abs() < 1e-15);
        assert!(!entangled);

        let (mu, entangled) = footnote_projection_check(0.5).unwrap();
        assert!((mu - 1.0 / 12.0).abs() < 1e-15);
        assert!(entangled);
        // C_p = √3/2 must clear the boundary value 1/4
        assert!((3.0f64.sqrt() / 2.0) > 0.25);

        // the foot of the perpendicular sits at distance (1−r)/√6
        let file = CoordsFile {
            chi: 0.5f64.acos() / 2.0,
            ..Default::default()
        };
        let anchor = file.build().unwrap();
        let spec = WernerSpec::from_mu(anchor, mu).unwrap();
        let e_psi = spec.anchor_vector().projector();
        let d = hs_distance(&spec.state(), &e_psi).unwrap();
        assert!((d - 0.5 / 6.0f64.sqrt()).abs() < tol::EPS_DIST);
    }
}
