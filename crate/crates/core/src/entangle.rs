//! PPT verdicts, negativity and concurrence.
//!
//! Two independent routes are kept strictly apart. The oracle route goes
//! through the Jacobi eigensolver: negativity from the partial-transpose
//! spectrum, concurrence through the Wootters construction. The analytic
//! route evaluates the closed forms that exist on the coordinate slices
//! where one mixing parameter vanishes. The verification suites assert the
//! two agree; in reports the oracle is authoritative and a slice result is
//! attached as a cross-check.

use crate::linalg::{herm_eigen, partial_transpose, phase, sqrt_psd, CMat, CVec, Subsystem, C64};
use crate::parametrize::{ek_basis, MixingWeights, TwoQubitCoords};
use crate::{tol, Error, Result};

/// The spin-flip operator `σ_y ⊗ σ_y` in the computational basis.
pub fn sigma_yy() -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m
}

fn validate_state(op: &'static str, rho: &CMat) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::Dimension {
            op,
            details: format!("expected 4x4 state, got {}x{}", rho.rows(), rho.cols()),
        });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::InvalidState(format!("trace = {tr}")));
    }
    Ok(())
}

/// Negativity as `2·max(0, −λ_min)` of the partial transpose.
///
/// For a two-qubit state the partial transpose has at most one negative
/// eigenvalue; that structural fact is asserted rather than assumed.
pub fn negativity_oracle(rho: &CMat) -> Result<f64> {
    validate_state("negativity_oracle", rho)?;
    let pt = partial_transpose(rho, Subsystem::B)?;
    let eig = herm_eigen(&pt)?;
    let negatives = eig
        .values
        .iter()
        .filter(|&&v| v < -tol::EPS_NEG_EIG)
        .count();
    if negatives > 1 {
        return Err(Error::InvariantViolation(format!(
            "partial transpose has {negatives} negative eigenvalues: {:?}",
            eig.values
        )));
    }
    let min = eig.values.last().copied().unwrap_or(0.0);
    Ok(2.0 * (-min).max(0.0))
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with the λᵢ obtained
/// as square roots of the spectrum of the Hermitian matrix
/// `√ρ · (σ_y⊗σ_y) ρ* (σ_y⊗σ_y) · √ρ`.
///
/// Spectrum entries within [`tol::EPS_WOOTTERS_NULL`] of zero are treated
/// as exact zeros; on rank-deficient states the square root would
/// otherwise turn O(1e-16) rounding residue into O(1e-8) λ values.
pub fn concurrence_wootters(rho: &CMat) -> Result<f64> {
    validate_state("concurrence_wootters", rho)?;
    let root = sqrt_psd(rho)?;
    let yy = sigma_yy();
    let rho_tilde = &(&yy * &rho.conj()) * &yy;
    let m = &(&root * &rho_tilde) * &root;
    let eig = herm_eigen(&m)?;
    if let Some(&bad) = eig.values.iter().find(|&&v| v < -1e-9) {
        return Err(Error::InvariantViolation(format!(
            "spin-flipped product has eigenvalue {bad:.3e}"
        )));
    }
    let lam: Vec<f64> = eig
        .values
        .iter()
        .map(|&v| {
            if v.abs() < tol::EPS_WOOTTERS_NULL {
                0.0
            } else {
                v.max(0.0).sqrt()
            }
        })
        .collect();
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Concurrence of a pure state: `|⟨v*| σ_y⊗σ_y |v⟩|`.
pub fn concurrence_pure(v: &CVec) -> Result<f64> {
    if v.dim() != 4 {
        return Err(Error::Dimension {
            op: "concurrence_pure",
            details: format!("expected C^4 vector, got dimension {}", v.dim()),
        });
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > tol::EPS_MATCH {
        return Err(Error::NotNormalized { norm });
    }
    let yv = sigma_yy().mul_vec(v);
    let s: C64 = (0..4).map(|i| v[i] * yv[i]).sum();
    Ok(s.norm())
}

/// Which computation produced an [`EntanglementReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    GeneralOracle,
    S21Zero,
    C21ZeroMu23,
    WernerLine,
    Limit(LimitCase),
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::GeneralOracle => "general_oracle",
            Branch::S21Zero => "s21_zero",
            Branch::C21ZeroMu23 => "c21_zero_mu23",
            Branch::WernerLine => "werner_line",
            Branch::Limit(case) => case.name(),
        }
    }
}

/// PPT verdict with both entanglement measures.
///
/// `ppt_satisfied` holds exactly when the negativity sits at or below the
/// separability noise floor.
#[derive(Clone, Copy, Debug)]
pub struct EntanglementReport {
    pub ppt_satisfied: bool,
    pub negativity: f64,
    pub concurrence: f64,
    pub branch: Branch,
}

impl EntanglementReport {
    fn entangled(negativity: f64, concurrence: f64, branch: Branch) -> Self {
        EntanglementReport {
            ppt_satisfied: negativity <= tol::EPS_SEPARABLE,
            negativity,
            concurrence,
            branch,
        }
    }

    fn separable(branch: Branch) -> Self {
        EntanglementReport {
            ppt_satisfied: true,
            negativity: 0.0,
            concurrence: 0.0,
            branch,
        }
    }
}

/// General-path report straight from the oracles.
pub fn report_oracle(rho: &CMat) -> Result<EntanglementReport> {
    let negativity = negativity_oracle(rho)?;
    let concurrence = concurrence_wootters(rho)?;
    Ok(EntanglementReport::entangled(
        negativity,
        concurrence,
        Branch::GeneralOracle,
    ))
}

/// The seven pure-state concurrences attached to an eigenensemble.
#[derive(Clone, Copy, Debug)]
pub struct PartConcurrences {
    pub c_p: f64,
    pub c_psi1: f64,
    pub c_psi2: f64,
    pub c_psi3: f64,
    pub c_e1: f64,
    pub c_e2: f64,
    pub c_e3: f64,
}

/// Closed-form concurrences of `|Ψ⟩, |Ψ₁⟩, |Ψ₂⟩, |Ψ₃⟩` and the
/// interference results for `|e₁⟩, |e₂⟩, |e₃⟩`.
///
/// When the `Ψ₂` (or `Ψ₃`) direction degenerates to the zero vector its
/// concurrence is reported as 0.
pub fn part_concurrences(coords: &TwoQubitCoords) -> PartConcurrences {
    let c_p = coords.c_p();
    let ez = phase(coords.zeta());
    let (c21, s21) = (coords.a21().c(), coords.a21().s());
    let (c32, s32) = (coords.a32().c(), coords.a32().s());
    let (c0, s0) = (coords.a0().c(), coords.a0().s());

    let c_psi1 = coords.a32().theta().sin();

    // |e₂⟩ components on |𝟐⟩, |𝟑⟩ (conjugated form).
    let a2 = c0.conj() * c21 * c32.conj() - s0.conj() * s32;
    let b2 = c0.conj() * c21 * s32.conj() + s0.conj() * c32;
    let den2 = s0.norm_sqr() + c0.norm_sqr() * c21.norm_sqr();
    let c_psi2 = if den2 > 1e-15 {
        2.0 * (a2 * b2).norm() / den2
    } else {
        0.0
    };

    // |e₃⟩ components on |𝟐⟩, |𝟑⟩.
    let a3 = s0 * c21 * c32.conj() + c0 * s32;
    let b3 = s0 * c21 * s32.conj() - c0 * c32;
    let den3 = c0.norm_sqr() + s0.norm_sqr() * c21.norm_sqr();
    let c_psi3 = if den3 > 1e-15 {
        2.0 * (a3 * b3).norm() / den3
    } else {
        0.0
    };

    let c_e1 = (ez * c_p * c21.conj() * c21.conj() + s21.conj() * s21.conj() * c_psi1).norm();
    let c_e2 = (ez * c_p * c0.conj() * c0.conj() * s21 * s21 + (b2 * a2) * 2.0).norm();
    let c_e3 = (ez * c_p * s0 * s0 * s21 * s21 + (a3 * b3) * 2.0).norm();

    PartConcurrences {
        c_p,
        c_psi1,
        c_psi2,
        c_psi3,
        c_e1,
        c_e2,
        c_e3,
    }
}

fn check_unit_interval(name: &'static str, v: f64) -> Result<()> {
    if !(-1e-12..=1.0 + 1e-12).contains(&v) {
        return Err(Error::OutOfRange {
            name,
            value: v,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

/// Closed forms for the `s₂₁ = 0` slice (θ₂₁ = 0): PPT condition
/// `4μ₂μ₃ + (μ₂−μ₃)² C_Ψ₂² ≥ (μ₀−μ₁)² C_p²`, negativity and concurrence on
/// violation. The companion block inequality, trivially satisfied under the
/// weight hierarchy, is still checked.
pub fn slice_s21_zero(w: &MixingWeights, c_p: f64, c_psi2: f64) -> Result<EntanglementReport> {
    if !w.hierarchical() {
        return Err(Error::InvalidWeights("hierarchy required".into()));
    }
    check_unit_interval("c_p", c_p)?;
    check_unit_interval("c_psi2", c_psi2)?;
    let m = w.mu();
    let d01 = m[0] - m[1];
    let d23 = m[2] - m[3];

    // First diagonal block of the partial transpose: non-negative
    // determinant must hold identically because μ₀μ₁ ≥ (μ₂−μ₃)².
    let first = m[0] * m[1] + d01 * d01 * c_p * c_p / 4.0 - d23 * d23 * c_psi2 * c_psi2 / 4.0;
    if first < -1e-12 {
        return Err(Error::InvariantViolation(format!(
            "first block inequality fails by {first:.3e}"
        )));
    }

    let lhs = 4.0 * m[2] * m[3] + d23 * d23 * c_psi2 * c_psi2;
    let rhs = d01 * d01 * c_p * c_p;
    if rhs <= lhs {
        return Ok(EntanglementReport::separable(Branch::S21Zero));
    }
    let negativity = (rhs + d23 * d23 * (1.0 - c_psi2 * c_psi2)).sqrt() - (m[2] + m[3]);
    let concurrence = d01 * c_p - lhs.sqrt();
    Ok(EntanglementReport::entangled(
        negativity,
        concurrence,
        Branch::S21Zero,
    ))
}

/// Closed forms for the `c₂₁ = 0` slice (θ₂₁ = π) with `μ₂ = μ₃`. Two PPT
/// inequalities compete; at most one can fail, and the failing one selects
/// which negativity/concurrence pair applies.
pub fn slice_c21_zero_mu23(w: &MixingWeights, c_p: f64, c_psi1: f64) -> Result<EntanglementReport> {
    if !w.hierarchical() {
        return Err(Error::InvalidWeights("hierarchy required".into()));
    }
    check_unit_interval("c_p", c_p)?;
    check_unit_interval("c_psi1", c_psi1)?;
    let m = w.mu();
    if (m[2] - m[3]).abs() > tol::EPS_WEIGHT {
        return Err(Error::NotAtLimit(format!(
            "mu2 = {} and mu3 = {} must coincide",
            m[2], m[3]
        )));
    }
    let mu2 = m[2];
    let d02 = m[0] - mu2;
    let d12 = m[1] - mu2;

    let viol1 = d12 * d12 * c_psi1 * c_psi1 > 4.0 * m[0] * mu2 + d02 * d02 * c_p * c_p;
    let viol2 = d02 * d02 * c_p * c_p > 4.0 * m[1] * mu2 + d12 * d12 * c_psi1 * c_psi1;
    if viol1 && viol2 {
        return Err(Error::InvariantViolation(
            "both PPT inequalities violated simultaneously".into(),
        ));
    }
    let report = if viol1 {
        let negativity =
            (d12 * d12 * c_psi1 * c_psi1 + d02 * d02 * (1.0 - c_p * c_p)).sqrt() - (m[0] + mu2);
        let concurrence = d12 * c_psi1 - (d02 * d02 * c_p * c_p + 4.0 * m[0] * mu2).sqrt();
        EntanglementReport::entangled(negativity, concurrence, Branch::C21ZeroMu23)
    } else if viol2 {
        let negativity =
            (d02 * d02 * c_p * c_p + d12 * d12 * (1.0 - c_psi1 * c_psi1)).sqrt() - (m[1] + mu2);
        let concurrence = d02 * c_p - (d12 * d12 * c_psi1 * c_psi1 + 4.0 * m[1] * mu2).sqrt();
        EntanglementReport::entangled(negativity, concurrence, Branch::C21ZeroMu23)
    } else {
        EntanglementReport::separable(Branch::C21ZeroMu23)
    };
    Ok(report)
}

/// The six single-coordinate limits of the results table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitCase {
    S21,
    C21,
    S32,
    C32,
    S0,
    C0,
}

impl LimitCase {
    pub const ALL: [LimitCase; 6] = [
        LimitCase::S21,
        LimitCase::C21,
        LimitCase::S32,
        LimitCase::C32,
        LimitCase::S0,
        LimitCase::C0,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LimitCase::S21 => "s21",
            LimitCase::C21 => "c21",
            LimitCase::S32 => "s32",
            LimitCase::C32 => "c32",
            LimitCase::S0 => "s0",
            LimitCase::C0 => "c0",
        }
    }
}

/// One evaluated row of the limits table: the seven pure-state concurrences
/// plus the PPT verdict where the row defines one.
#[derive(Clone, Copy, Debug)]
pub struct LimitRow {
    pub case: LimitCase,
    pub c_e0: f64,
    pub c_psi1: f64,
    pub c_psi2: f64,
    pub c_psi3: f64,
    pub c_e1: f64,
    pub c_e2: f64,
    pub c_e3: f64,
    pub ppt: Option<bool>,
}

const LIMIT_TOL: f64 = 1e-12;

/// Evaluates the table row for `case`, using the row's cell expressions:
/// repeated cells are literal copies, primed formulas are evaluated, and
/// interference cells go through [`concurrence_pure`] on the actual
/// eigenvector. Errors unless the named coordinate is at its limit.
pub fn limit_row(coords: &TwoQubitCoords, case: LimitCase) -> Result<LimitRow> {
    use std::f64::consts::PI;
    let at = |v: f64, target: f64, what: &str| -> Result<()> {
        if (v - target).abs() > LIMIT_TOL {
            Err(Error::NotAtLimit(format!(
                "{what} must be {target}, got {v}"
            )))
        } else {
            Ok(())
        }
    };
    let c_p = coords.c_p();
    let c_psi1 = coords.a32().theta().sin();
    let m = coords.weights().mu();
    let e = ek_basis(coords);
    let pure = |k: usize| concurrence_pure(&e[k]).expect("cascade vectors are normalized");

    let c21 = coords.a21().c();
    let (c0, s0) = (coords.a0().c(), coords.a0().s());
    let c21n = c21.norm_sqr();
    let c0n = c0.norm_sqr();
    let s0n = s0.norm_sqr();
    let mu23_equal = (m[2] - m[3]).abs() <= tol::EPS_WEIGHT;
    let c21_zero = (coords.a21().theta() - PI).abs() <= LIMIT_TOL;

    let row = match case {
        LimitCase::S21 => {
            at(coords.a21().theta(), 0.0, "theta21")?;
            let parts = part_concurrences(coords);
            let c_psi2 = parts.c_psi2;
            LimitRow {
                case,
                c_e0: c_p,
                c_psi1,
                c_psi2,
                c_psi3: c_psi2,
                c_e1: c_p,
                c_e2: c_psi2,
                c_e3: c_psi2,
                ppt: {
                    let d01 = m[0] - m[1];
                    let d23 = m[2] - m[3];
                    Some(4.0 * m[2] * m[3] + d23 * d23 * c_psi2 * c_psi2 >= d01 * d01 * c_p * c_p)
                },
            }
        }
        LimitCase::C21 => {
            at(coords.a21().theta(), PI, "theta21")?;
            LimitRow {
                case,
                c_e0: c_p,
                c_psi1,
                c_psi2: c_psi1,
                c_psi3: c_psi1,
                c_e1: c_psi1,
                c_e2: pure(2),
                c_e3: pure(3),
                ppt: mu23_equal.then(|| {
                    let d02 = m[0] - m[2];
                    let d12 = m[1] - m[2];
                    let first =
                        4.0 * m[0] * m[2] + d02 * d02 * c_p * c_p >= d12 * d12 * c_psi1 * c_psi1;
                    let second =
                        4.0 * m[1] * m[2] + d12 * d12 * c_psi1 * c_psi1 >= d02 * d02 * c_p * c_p;
                    first && second
                }),
            }
        }
        LimitCase::S32 | LimitCase::C32 => {
            let target = if case == LimitCase::S32 { 0.0 } else { PI };
            at(coords.a32().theta(), target, "theta32")?;
            let prime2_den = s0n + c0n * c21n;
            let prime3_den = c0n + s0n * c21n;
            let num = 2.0 * (c0 * s0 * c21).norm();
            LimitRow {
                case,
                c_e0: c_p,
                c_psi1: 0.0,
                c_psi2: if prime2_den > 1e-15 {
                    num / prime2_den
                } else {
                    0.0
                },
                c_psi3: if prime3_den > 1e-15 {
                    num / prime3_den
                } else {
                    0.0
                },
                c_e1: c21n * c_p,
                c_e2: pure(2),
                c_e3: pure(3),
                ppt: (c_p <= LIMIT_TOL && (mu23_equal || c21_zero)).then_some(true),
            }
        }
        LimitCase::S0 => {
            at(coords.a0().theta(), 0.0, "theta0")?;
            LimitRow {
                case,
                c_e0: c_p,
                c_psi1,
                c_psi2: c_psi1,
                c_psi3: c_psi1,
                c_e1: pure(1),
                c_e2: pure(2),
                c_e3: c_psi1,
                ppt: if (m[1] - m[2]).abs() <= tol::EPS_WEIGHT {
                    let d13 = m[1] - m[3];
                    let d01 = m[0] - m[1];
                    Some(4.0 * m[1] * m[3] + d13 * d13 * c_psi1 * c_psi1 >= d01 * d01 * c_p * c_p)
                } else if c21_zero {
                    let d02 = m[0] - m[2];
                    let d13 = m[1] - m[3];
                    let first =
                        4.0 * m[0] * m[2] + d02 * d02 * c_p * c_p >= d13 * d13 * c_psi1 * c_psi1;
                    let second =
                        4.0 * m[1] * m[3] + d13 * d13 * c_psi1 * c_psi1 >= d02 * d02 * c_p * c_p;
                    Some(first && second)
                } else {
                    None
                },
            }
        }
        LimitCase::C0 => {
            at(coords.a0().theta(), PI, "theta0")?;
            LimitRow {
                case,
                c_e0: c_p,
                c_psi1,
                c_psi2: c_psi1,
                c_psi3: c_psi1,
                c_e1: pure(1),
                c_e2: c_psi1,
                c_e3: pure(3),
                ppt: if c21_zero {
                    let d03 = m[0] - m[3];
                    let d12 = m[1] - m[2];
                    let first =
                        4.0 * m[0] * m[3] + d03 * d03 * c_p * c_p >= d12 * d12 * c_psi1 * c_psi1;
                    let second =
                        4.0 * m[1] * m[2] + d12 * d12 * c_psi1 * c_psi1 >= d03 * d03 * c_p * c_p;
                    Some(first && second)
                } else {
                    None
                },
            }
        }
    };
    Ok(row)
}

/// Canonical PPT violation rule: for a PPT condition written
/// canonically as `4μ_h μ_k ≥ f`, with `shared` the term appearing on both
/// sides of the row's inequality, a violated condition yields
///
/// - negativity `√(f + (μ_h−μ_k)²) − (μ_h+μ_k)` (independent of `shared`),
/// - concurrence `√(f + shared) − √(4μ_h μ_k + shared)`,
///
/// the latter being the square root of the inequality's right-hand side
/// minus that of its left-hand side.
pub fn canonical_ppt_rule(mu_h: f64, mu_k: f64, f: f64, shared: f64) -> Result<(f64, f64)> {
    if mu_h < mu_k {
        return Err(Error::InvalidWeights(format!(
            "mu_h = {mu_h} must dominate mu_k = {mu_k}"
        )));
    }
    if mu_k < -tol::EPS_WEIGHT || shared < -tol::EPS_WEIGHT {
        return Err(Error::InvalidWeights(
            "weights and shared term must be non-negative".into(),
        ));
    }
    if 4.0 * mu_h * mu_k >= f {
        return Err(Error::PptNotViolated);
    }
    let d = mu_h - mu_k;
    let negativity = (f + d * d).sqrt() - (mu_h + mu_k);
    let concurrence = (f + shared).sqrt() - (4.0 * mu_h * mu_k + shared).sqrt();
    Ok((negativity, concurrence))
}
