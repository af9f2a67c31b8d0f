//! Seeded verification suites.
//!
//! Each suite draws random coordinate points from a per-case deterministic
//! stream, evaluates one family of closed-form claims against the
//! eigensolver oracle (or against an independent identity) and reports the
//! worst absolute error seen. A suite passes when that error stays below
//! its declared tolerance; any internal invariant violation fails it
//! outright.

use std::f64::consts::{PI, TAU};

use crate::entangle::{
    canonical_ppt_rule, concurrence_pure, concurrence_wootters, limit_row, negativity_oracle,
    part_concurrences, report_oracle, slice_c21_zero_mu23, slice_s21_zero, LimitCase,
};
use crate::geometry::{
    footnote_projection_check, hs_distance, hs_distance_to_dominant, werner_mu_report,
    werner_threshold, WernerSpec,
};
use crate::linalg::{herm_eigen, partial_transpose, CMat, Subsystem, C64};
use crate::parametrize::{bold_basis, density_from_coords, ek_basis, CoordsFile};
use crate::rng::SplitMix64;
use crate::{tol, Error, Result};

/// Coordinate draws shared by the suites and the test targets.
pub mod draws {
    use super::*;
    use crate::parametrize::{nu_to_mu, MixingWeights, TwoQubitCoords};
    use std::f64::consts::FRAC_PI_4;

    /// Uniform draw from the simplex `ν_i ∈ [0,1], Σν ≤ 1` by rejection.
    pub fn random_nu(rng: &mut SplitMix64) -> [f64; 3] {
        loop {
            let nu = [rng.uniform(), rng.uniform(), rng.uniform()];
            if nu[0] + nu[1] + nu[2] <= 1.0 {
                return nu;
            }
        }
    }

    pub fn random_weights(rng: &mut SplitMix64) -> MixingWeights {
        nu_to_mu(random_nu(rng)).expect("rejection sampling stays on the simplex")
    }

    pub fn random_file(rng: &mut SplitMix64) -> CoordsFile {
        let nu = random_nu(rng);
        CoordsFile {
            theta: rng.range(0.0, PI),
            psi: rng.range(0.0, TAU),
            theta_p: rng.range(0.0, PI),
            psi_p: rng.range(0.0, TAU),
            zeta: rng.range(0.0, TAU),
            chi: rng.range(0.0, FRAC_PI_4),
            theta21: rng.range(0.0, PI),
            psi21: rng.range(0.0, TAU),
            theta32: rng.range(0.0, PI),
            psi32: rng.range(0.0, TAU),
            theta0: rng.range(0.0, PI),
            psi0: rng.range(0.0, TAU),
            nu1: nu[0],
            nu2: nu[1],
            nu3: nu[2],
        }
    }

    pub fn random_coords(rng: &mut SplitMix64) -> TwoQubitCoords {
        random_file(rng).build().expect("draw ranges are valid")
    }

    /// Random coordinates with a post-draw adjustment (used to pin a slice).
    pub fn random_coords_with(
        rng: &mut SplitMix64,
        mutate: impl FnOnce(&mut CoordsFile),
    ) -> TwoQubitCoords {
        let mut f = random_file(rng);
        mutate(&mut f);
        f.build().expect("draw ranges are valid")
    }

    /// A pure state usable as a Werner anchor: `ν = (1,0,0)` and all
    /// mixing angles zero, random locals, phase and Schmidt angle.
    pub fn random_pure_coords(rng: &mut SplitMix64) -> TwoQubitCoords {
        random_coords_with(rng, |f| {
            f.theta21 = 0.0;
            f.psi21 = 0.0;
            f.theta32 = 0.0;
            f.psi32 = 0.0;
            f.theta0 = 0.0;
            f.psi0 = 0.0;
            f.nu1 = 1.0;
            f.nu2 = 0.0;
            f.nu3 = 0.0;
        })
    }
}

/// Result of one verification suite.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub suite: &'static str,
    pub cases_run: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

struct SuiteResult {
    cases: usize,
    max_err: f64,
}

struct Suite {
    name: &'static str,
    default_samples: usize,
    tolerance: f64,
    run: fn(u64, usize) -> Result<SuiteResult>,
}

/// Grid resolution of the interference phase scan.
const SCAN_POINTS: usize = 720;

const SUITES: &[Suite] = &[
    Suite {
        name: "closed-form-vs-ensemble",
        default_samples: 1000,
        tolerance: tol::EPS_ENTRY,
        run: suite_closed_form_vs_ensemble,
    },
    Suite {
        name: "eigenensemble-recovery",
        default_samples: 500,
        tolerance: tol::EPS_EIG,
        run: suite_eigen_recovery,
    },
    Suite {
        name: "pure-concurrences",
        default_samples: 500,
        tolerance: tol::EPS_MATCH,
        run: suite_pure_concurrences,
    },
    Suite {
        name: "interference-scan",
        default_samples: 50,
        tolerance: TAU / SCAN_POINTS as f64,
        run: suite_interference_scan,
    },
    Suite {
        name: "slice-s21",
        default_samples: 500,
        tolerance: tol::EPS_MATCH,
        run: suite_slice_s21,
    },
    Suite {
        name: "slice-c21-mu23",
        default_samples: 500,
        tolerance: tol::EPS_MATCH,
        run: suite_slice_c21,
    },
    Suite {
        name: "limit-table",
        default_samples: 200,
        tolerance: tol::EPS_MATCH,
        run: suite_limit_table,
    },
    Suite {
        name: "werner-thresholds",
        default_samples: 200,
        tolerance: tol::EPS_MATCH,
        run: suite_werner_thresholds,
    },
    Suite {
        name: "werner-bisection",
        default_samples: 12,
        tolerance: 1e-6,
        run: suite_werner_bisection,
    },
    Suite {
        name: "inverted-range",
        default_samples: 20,
        tolerance: tol::EPS_SEPARABLE,
        run: suite_inverted_range,
    },
    Suite {
        name: "geometry",
        default_samples: 500,
        tolerance: tol::EPS_DIST,
        run: suite_geometry,
    },
    Suite {
        name: "local-invariance",
        default_samples: 100,
        tolerance: tol::EPS_MATCH,
        run: suite_local_invariance,
    },
    Suite {
        name: "weighted-average",
        default_samples: 1000,
        tolerance: tol::EPS_MATCH,
        run: suite_weighted_average,
    },
    Suite {
        name: "pt-negative-count",
        default_samples: 5000,
        tolerance: tol::EPS_NEG_EIG,
        run: suite_pt_negative_count,
    },
    Suite {
        name: "closest-pure",
        default_samples: 200,
        tolerance: tol::EPS_DIST,
        run: suite_closest_pure,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

pub fn run_suite(name: &str, seed: u64, samples: Option<usize>) -> Result<VerifyOutcome> {
    let suite = SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let n = samples.unwrap_or(suite.default_samples);
    Ok(match (suite.run)(seed, n) {
        Ok(res) => VerifyOutcome {
            suite: suite.name,
            cases_run: res.cases,
            max_abs_error: res.max_err,
            tolerance: suite.tolerance,
            pass: res.max_err < suite.tolerance,
            note: None,
        },
        Err(err) => VerifyOutcome {
            suite: suite.name,
            cases_run: 0,
            max_abs_error: f64::INFINITY,
            tolerance: suite.tolerance,
            pass: false,
            note: Some(err.to_string()),
        },
    })
}

pub fn run_all(seed: u64, samples: Option<usize>) -> Vec<VerifyOutcome> {
    SUITES
        .iter()
        .map(|s| run_suite(s.name, seed, samples).expect("known suite"))
        .collect()
}

fn case_rng(seed: u64, suite: u64, case: usize) -> SplitMix64 {
    SplitMix64::stream(seed, (suite << 32) | case as u64)
}

fn track(max_err: &mut f64, err: f64) {
    if err > *max_err {
        *max_err = err;
    }
}

fn suite_closed_form_vs_ensemble(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 1, i);
        let coords = draws::random_coords(&mut rng);
        let bold = bold_basis(coords.local_a(), coords.local_b());
        let via_ensemble = bold.to_bold(&density_from_coords(&coords));
        let via_closed_form = crate::parametrize::closed_form_density(&coords);
        track(&mut max_err, via_ensemble.max_abs_diff(&via_closed_form));
    }
    Ok(SuiteResult { cases: n, max_err })
}

fn suite_eigen_recovery(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 2, i);
        let coords = draws::random_coords(&mut rng);
        let eig = herm_eigen(&density_from_coords(&coords))?;
        for (got, want) in eig.values.iter().zip(coords.weights().mu()) {
            track(&mut max_err, (got - want).abs());
        }
    }
    Ok(SuiteResult { cases: n, max_err })
}

fn suite_pure_concurrences(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 3, i);
        let coords = draws::random_coords(&mut rng);
        let parts = part_concurrences(&coords);
        let e = ek_basis(&coords);
        track(&mut max_err, (parts.c_p - concurrence_pure(&e[0])?).abs());
        track(&mut max_err, (parts.c_e1 - concurrence_pure(&e[1])?).abs());
        track(&mut max_err, (parts.c_e2 - concurrence_pure(&e[2])?).abs());
        track(&mut max_err, (parts.c_e3 - concurrence_pure(&e[3])?).abs());

        // |Ψ₁⟩ and the normalized |Ψ₂⟩, |Ψ₃⟩ against their closed forms.
        let basis = bold_basis(coords.local_a(), coords.local_b());
        let (c32, s32) = (coords.a32().c(), coords.a32().s());
        let psi1 = basis.vector(2).scale(c32).add(&basis.vector(3).scale(s32));
        track(
            &mut max_err,
            (parts.c_psi1 - concurrence_pure(&psi1)?).abs(),
        );

        let c21 = coords.a21().c();
        let (c0, s0) = (coords.a0().c(), coords.a0().s());
        let a2 = c0 * c21.conj() * c32 - s0 * s32.conj();
        let b2 = c0 * c21.conj() * s32 + s0 * c32.conj();
        let n2 = (a2.norm_sqr() + b2.norm_sqr()).sqrt();
        if n2 > 1e-6 {
            let psi2 = basis
                .vector(2)
                .scale(a2 / n2)
                .add(&basis.vector(3).scale(b2 / n2));
            track(
                &mut max_err,
                (parts.c_psi2 - concurrence_pure(&psi2)?).abs(),
            );
        }
        let a3 = -(s0.conj() * c21.conj() * c32 + c0.conj() * s32.conj());
        let b3 = -(s0.conj() * c21.conj() * s32 - c0.conj() * c32.conj());
        let n3 = (a3.norm_sqr() + b3.norm_sqr()).sqrt();
        if n3 > 1e-6 {
            let psi3 = basis
                .vector(2)
                .scale(a3 / n3)
                .add(&basis.vector(3).scale(b3 / n3));
            track(
                &mut max_err,
                (parts.c_psi3 - concurrence_pure(&psi3)?).abs(),
            );
        }

        // On projectors the two mixed-state oracles and the pure-state
        // formula are one and the same number.
        let proj = e[1].projector();
        let pure = concurrence_pure(&e[1])?;
        track(&mut max_err, (pure - concurrence_wootters(&proj)?).abs());
        track(&mut max_err, (pure - negativity_oracle(&proj)?).abs());
    }
    Ok(SuiteResult { cases: n, max_err })
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn suite_interference_scan(seed: u64, n: usize) -> Result<SuiteResult> {
    let step = TAU / SCAN_POINTS as f64;
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 4, i);
        // Keep both interference partners well away from zero so the
        // extremum is sharp on the grid.
        let file = {
            let mut f = draws::random_file(&mut rng);
            f.chi = rng.range(0.15, std::f64::consts::FRAC_PI_4 - 0.02);
            f.theta21 = rng.range(0.3, PI - 0.3);
            f.theta32 = rng.range(0.3, PI - 0.3);
            f
        };
        let (mut best_hi, mut best_lo) = (f64::NEG_INFINITY, f64::INFINITY);
        let (mut zeta_hi, mut zeta_lo) = (0.0, 0.0);
        for j in 0..SCAN_POINTS {
            let zeta = j as f64 * step;
            let mut probe = file;
            probe.zeta = zeta;
            let coords = probe.build()?;
            let c_e1 = concurrence_pure(&ek_basis(&coords)[1])?;
            if c_e1 > best_hi {
                best_hi = c_e1;
                zeta_hi = zeta;
            }
            if c_e1 < best_lo {
                best_lo = c_e1;
                zeta_lo = zeta;
            }
        }
        // extrema predicted at e^{i(2ψ₂₁+ζ)} = ±1
        let predicted_hi = (-2.0 * file.psi21).rem_euclid(TAU);
        let predicted_lo = (PI - 2.0 * file.psi21).rem_euclid(TAU);
        track(&mut max_err, circular_distance(zeta_hi, predicted_hi));
        track(&mut max_err, circular_distance(zeta_lo, predicted_lo));
    }
    Ok(SuiteResult { cases: n, max_err })
}

fn suite_slice_s21(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 5, i);
        let coords = draws::random_coords_with(&mut rng, |f| f.theta21 = 0.0);
        let parts = part_concurrences(&coords);
        let closed = slice_s21_zero(&coords.weights(), parts.c_p, parts.c_psi2)?;
        let oracle = report_oracle(&density_from_coords(&coords))?;
        track(&mut max_err, (closed.negativity - oracle.negativity).abs());
        track(
            &mut max_err,
            (closed.concurrence.max(0.0) - oracle.concurrence).abs(),
        );
    }

    // μ₂ = μ₃ sub-case: vary the angles that feed C_Ψ₂ and demand the
    // oracle outputs do not move, and negativity equals concurrence.
    let bases = 25;
    let variants = 8;
    for i in 0..bases {
        let mut rng = case_rng(seed, 6, i);
        let base = draws::random_file(&mut rng);
        let (mut lo_n, mut hi_n) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut lo_c, mut hi_c) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..variants {
            let mut f = base;
            f.theta21 = 0.0;
            f.nu3 = 0.0; // μ₂ = μ₃
            f.theta32 = rng.range(0.0, PI);
            f.psi32 = rng.range(0.0, TAU);
            f.theta0 = rng.range(0.0, PI);
            f.psi0 = rng.range(0.0, TAU);
            let coords = f.build()?;
            let rep = report_oracle(&density_from_coords(&coords))?;
            lo_n = lo_n.min(rep.negativity);
            hi_n = hi_n.max(rep.negativity);
            lo_c = lo_c.min(rep.concurrence);
            hi_c = hi_c.max(rep.concurrence);
            track(&mut max_err, (rep.negativity - rep.concurrence).abs());
        }
        track(&mut max_err, hi_n - lo_n);
        track(&mut max_err, hi_c - lo_c);
    }

    // Both measures are non-decreasing in every ν_i with the concurrences
    // held fixed: forward finite differences at interior simplex points.
    let probes = 100;
    let h = 1e-3;
    for i in 0..probes {
        let mut rng = case_rng(seed, 28, i);
        let nu = loop {
            let nu = draws::random_nu(&mut rng);
            if nu.iter().all(|v| *v >= 0.02) && nu.iter().sum::<f64>() <= 0.95 {
                break nu;
            }
        };
        let c_p = rng.range(0.0, 1.0);
        let c_psi2 = rng.range(0.0, 1.0);
        let base = slice_s21_zero(&crate::parametrize::nu_to_mu(nu)?, c_p, c_psi2)?;
        for axis in 0..3 {
            let mut stepped = nu;
            stepped[axis] += h;
            let fwd = slice_s21_zero(&crate::parametrize::nu_to_mu(stepped)?, c_p, c_psi2)?;
            track(&mut max_err, (base.negativity - fwd.negativity).max(0.0));
            track(
                &mut max_err,
                (base.concurrence.max(0.0) - fwd.concurrence.max(0.0)).max(0.0),
            );
        }
    }
    Ok(SuiteResult {
        cases: n + bases * variants + probes,
        max_err,
    })
}

fn suite_slice_c21(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 7, i);
        let coords = draws::random_coords_with(&mut rng, |f| {
            f.theta21 = PI;
            f.nu3 = 0.0; // μ₂ = μ₃
        });
        let parts = part_concurrences(&coords);
        let closed = slice_c21_zero_mu23(&coords.weights(), parts.c_p, parts.c_psi1)?;
        let oracle = report_oracle(&density_from_coords(&coords))?;
        track(&mut max_err, (closed.negativity - oracle.negativity).abs());
        track(
            &mut max_err,
            (closed.concurrence.max(0.0) - oracle.concurrence).abs(),
        );
    }

    // Extremal point μ₀ = 1/2, C_Ψ₁ = 1, μ₂ = 0: negativity (√2−1)/2.
    let w = crate::parametrize::nu_to_mu([0.0, 1.0, 0.0])?;
    let rep = slice_c21_zero_mu23(&w, 0.0, 1.0)?;
    track(
        &mut max_err,
        (rep.negativity - (2.0f64.sqrt() - 1.0) / 2.0).abs(),
    );
    Ok(SuiteResult {
        cases: n + 1,
        max_err,
    })
}

struct CanonicalIneq {
    h: usize,
    k: usize,
    f: f64,
    shared: f64,
}

/// Compares a row's canonical PPT inequalities and the violation-rule values
/// against the oracle on the actual density matrix. Verdict comparisons
/// are skipped inside a narrow boundary band where floating-point noise
/// could flip either side.
fn check_canonical(
    ineqs: &[CanonicalIneq],
    mu: &[f64; 4],
    rho: &CMat,
    max_err: &mut f64,
) -> Result<()> {
    let margin = ineqs
        .iter()
        .map(|q| 4.0 * mu[q.h] * mu[q.k] - q.f)
        .fold(f64::INFINITY, f64::min);
    if margin.abs() < 1e-9 {
        return Ok(());
    }
    let oracle = report_oracle(rho)?;
    let all_hold = ineqs.iter().all(|q| 4.0 * mu[q.h] * mu[q.k] >= q.f);
    if all_hold != oracle.ppt_satisfied {
        return Err(Error::InvariantViolation(format!(
            "PPT verdict mismatch: closed form says satisfied = {all_hold}, oracle negativity {}",
            oracle.negativity
        )));
    }
    for q in ineqs {
        if 4.0 * mu[q.h] * mu[q.k] < q.f {
            let (neg, conc) = canonical_ppt_rule(mu[q.h], mu[q.k], q.f, q.shared)?;
            track(max_err, (neg - oracle.negativity).abs());
            track(max_err, (conc.max(0.0) - oracle.concurrence).abs());
        }
    }
    Ok(())
}

fn suite_limit_table(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    let mut cases = 0;
    for (ci, case) in LimitCase::ALL.iter().enumerate() {
        for i in 0..n {
            let mut rng = case_rng(seed, 8 + ci as u64, i);
            let coords = draws::random_coords_with(&mut rng, |f| match case {
                LimitCase::S21 => f.theta21 = 0.0,
                LimitCase::C21 => {
                    f.theta21 = PI;
                    f.nu3 = 0.0;
                }
                LimitCase::S32 | LimitCase::C32 => {
                    f.theta32 = if *case == LimitCase::S32 { 0.0 } else { PI };
                    if i % 2 == 1 {
                        // the row's "satisfied" PPT sub-case
                        f.chi = 0.0;
                        if i % 4 == 1 {
                            f.nu3 = 0.0;
                        } else {
                            f.theta21 = PI;
                        }
                    }
                }
                LimitCase::S0 => {
                    f.theta0 = 0.0;
                    if i % 2 == 0 {
                        f.nu2 = 0.0; // μ₁ = μ₂
                    } else {
                        f.theta21 = PI;
                    }
                }
                LimitCase::C0 => {
                    f.theta0 = PI;
                    if i % 2 == 1 {
                        f.theta21 = PI;
                    }
                }
            });
            cases += 1;
            let row = limit_row(&coords, *case)?;
            let parts = part_concurrences(&coords);
            let e = ek_basis(&coords);

            track(&mut max_err, (row.c_e0 - parts.c_p).abs());
            track(&mut max_err, (row.c_psi1 - parts.c_psi1).abs());
            // The Ψ₂/Ψ₃ directions degenerate to the zero vector when
            // θ₂₁ = π meets θ₀ at the matching pole; the table cells only
            // speak where the states exist.
            let c21n = coords.a21().c().norm_sqr();
            let c0n = coords.a0().c().norm_sqr();
            let s0n = coords.a0().s().norm_sqr();
            if s0n + c0n * c21n > 1e-9 {
                track(&mut max_err, (row.c_psi2 - parts.c_psi2).abs());
            }
            if c0n + s0n * c21n > 1e-9 {
                track(&mut max_err, (row.c_psi3 - parts.c_psi3).abs());
            }
            track(&mut max_err, (row.c_e1 - concurrence_pure(&e[1])?).abs());
            track(&mut max_err, (row.c_e2 - concurrence_pure(&e[2])?).abs());
            track(&mut max_err, (row.c_e3 - concurrence_pure(&e[3])?).abs());

            let rho = density_from_coords(&coords);
            let m = coords.weights().mu();
            let (c_p, c_psi1, c_psi2) = (parts.c_p, parts.c_psi1, parts.c_psi2);

            // PPT cells and the canonical rule on the rows that define them.
            match case {
                LimitCase::S21 => {
                    let shared = (m[2] - m[3]).powi(2) * c_psi2 * c_psi2;
                    let f = (m[0] - m[1]).powi(2) * c_p * c_p - shared;
                    check_canonical(
                        &[CanonicalIneq {
                            h: 2,
                            k: 3,
                            f,
                            shared,
                        }],
                        &m,
                        &rho,
                        &mut max_err,
                    )?;
                }
                LimitCase::C21 => {
                    let shared1 = (m[0] - m[2]).powi(2) * c_p * c_p;
                    let shared2 = (m[1] - m[2]).powi(2) * c_psi1 * c_psi1;
                    check_canonical(
                        &[
                            CanonicalIneq {
                                h: 0,
                                k: 2,
                                f: shared2 - shared1,
                                shared: shared1,
                            },
                            CanonicalIneq {
                                h: 1,
                                k: 2,
                                f: shared1 - shared2,
                                shared: shared2,
                            },
                        ],
                        &m,
                        &rho,
                        &mut max_err,
                    )?;
                }
                LimitCase::S32 | LimitCase::C32 => {
                    if let Some(satisfied) = row.ppt {
                        // the table only pins the separable sub-case
                        if !satisfied {
                            return Err(Error::InvariantViolation(
                                "limit row must declare the state separable".into(),
                            ));
                        }
                        let neg = negativity_oracle(&rho)?;
                        track(&mut max_err, neg);
                    }
                }
                LimitCase::S0 => {
                    if (m[1] - m[2]).abs() <= tol::EPS_WEIGHT {
                        let shared = (m[1] - m[3]).powi(2) * c_psi1 * c_psi1;
                        let f = (m[0] - m[1]).powi(2) * c_p * c_p - shared;
                        check_canonical(
                            &[CanonicalIneq {
                                h: 1,
                                k: 3,
                                f,
                                shared,
                            }],
                            &m,
                            &rho,
                            &mut max_err,
                        )?;
                    } else {
                        let a = (m[0] - m[2]).powi(2) * c_p * c_p;
                        let b = (m[1] - m[3]).powi(2) * c_psi1 * c_psi1;
                        check_canonical(
                            &[
                                CanonicalIneq {
                                    h: 0,
                                    k: 2,
                                    f: b - a,
                                    shared: a,
                                },
                                CanonicalIneq {
                                    h: 1,
                                    k: 3,
                                    f: a - b,
                                    shared: b,
                                },
                            ],
                            &m,
                            &rho,
                            &mut max_err,
                        )?;
                    }
                }
                LimitCase::C0 => {
                    if (coords.a21().theta() - PI).abs() <= 1e-12 {
                        let a = (m[0] - m[3]).powi(2) * c_p * c_p;
                        let b = (m[1] - m[2]).powi(2) * c_psi1 * c_psi1;
                        check_canonical(
                            &[
                                CanonicalIneq {
                                    h: 0,
                                    k: 3,
                                    f: b - a,
                                    shared: a,
                                },
                                CanonicalIneq {
                                    h: 1,
                                    k: 2,
                                    f: a - b,
                                    shared: b,
                                },
                            ],
                            &m,
                            &rho,
                            &mut max_err,
                        )?;
                    }
                }
            }
        }
    }
    Ok(SuiteResult { cases, max_err })
}

fn suite_werner_thresholds(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;

    // Golden thresholds, exact in f64 arithmetic.
    let (mu1, nu1) = werner_threshold(1.0);
    if mu1 != 1.0 / 6.0 || nu1 != 1.0 / 3.0 {
        return Err(Error::InvariantViolation(
            "threshold at C_p = 1 is off".into(),
        ));
    }
    let (mu_half, nu_half) = werner_threshold(0.5);
    if mu_half != 0.125 || nu_half != 0.5 {
        return Err(Error::InvariantViolation(
            "threshold at C_p = 1/2 is off".into(),
        ));
    }

    // Beyond the threshold the negativity is ((2C_p+1)ν₁ − 1)/2; check the
    // closed family forms against both oracles.
    for i in 0..n {
        let mut rng = case_rng(seed, 20, i);
        let c_p = rng.range(0.05, 1.0);
        let (_, nu1_star) = werner_threshold(c_p);
        let nu1 = nu1_star + (1.0 - nu1_star) * rng.range(0.01, 1.0);
        let coords = draws::random_coords_with(&mut rng, |f| {
            f.chi = c_p.asin() / 2.0;
            f.theta21 = 0.0;
            f.theta32 = 0.0;
            f.theta0 = 0.0;
            f.nu1 = nu1;
            f.nu2 = 0.0;
            f.nu3 = 0.0;
        });
        let rho = density_from_coords(&coords);
        let expected = ((2.0 * c_p + 1.0) * nu1 - 1.0) / 2.0;
        track(&mut max_err, (negativity_oracle(&rho)? - expected).abs());
        track(&mut max_err, (concurrence_wootters(&rho)? - expected).abs());
        let rep = werner_mu_report(&coords.weights(), coords.c_p())?;
        track(&mut max_err, (rep.negativity - expected).abs());
        track(&mut max_err, (rep.concurrence - expected).abs());
    }
    Ok(SuiteResult {
        cases: n + 2,
        max_err,
    })
}

fn suite_werner_bisection(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    let mut cases = 0;
    for i in 0..n {
        let mut rng = case_rng(seed, 21, i);
        let c_p = match i {
            0 => 1.0,
            1 => 0.5,
            _ => rng.range(0.05, 1.0),
        };
        let anchor = draws::random_coords_with(&mut rng, |f| {
            f.theta21 = 0.0;
            f.psi21 = 0.0;
            f.theta32 = 0.0;
            f.psi32 = 0.0;
            f.theta0 = 0.0;
            f.psi0 = 0.0;
            f.chi = c_p.asin() / 2.0;
            f.nu1 = 1.0;
            f.nu2 = 0.0;
            f.nu3 = 0.0;
        });
        // negativity is positive below μ*, zero at and above it
        let entangled = |mu: f64| -> Result<bool> {
            let state = WernerSpec::from_mu(anchor, mu)?.state();
            Ok(negativity_oracle(&state)? > 1e-9)
        };
        let (mut lo, mut hi) = (0.0f64, 0.25f64);
        if !entangled(lo)? || entangled(hi)? {
            return Err(Error::InvariantViolation(
                "bisection bracket does not straddle the threshold".into(),
            ));
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if entangled(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (mu_star, _) = werner_threshold(c_p);
        track(&mut max_err, (0.5 * (lo + hi) - mu_star).abs());
        cases += 1;
    }
    Ok(SuiteResult { cases, max_err })
}

fn suite_inverted_range(seed: u64, n_anchors: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    let mut cases = 0;
    for i in 0..n_anchors {
        let mut rng = case_rng(seed, 22, i);
        let anchor = draws::random_pure_coords(&mut rng);
        for j in 0..50 {
            let x = -1.0 / 3.0 + j as f64 / 150.0;
            let state = WernerSpec::new(anchor, x)?.state();
            track(&mut max_err, negativity_oracle(&state)?);
            cases += 1;
        }
    }
    Ok(SuiteResult { cases, max_err })
}

fn suite_geometry(seed: u64, n: usize) -> Result<SuiteResult> {
    let sqrt6 = 6.0f64.sqrt();
    let center = CMat::identity(4).scale(C64::new(0.25, 0.0));
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 23, i);

        // closed-form distance to the dominant eigenprojector
        let coords = draws::random_coords(&mut rng);
        let rho = density_from_coords(&coords);
        let e_psi = ek_basis(&coords)[0].projector();
        let direct = hs_distance(&rho, &e_psi)?;
        track(
            &mut max_err,
            (direct - hs_distance_to_dominant(&coords.weights())).abs(),
        );

        // Werner-line identities for a random anchor and μ
        let anchor = draws::random_pure_coords(&mut rng);
        let spec = WernerSpec::from_mu(anchor, rng.range(0.0, 0.25))?;
        let state = spec.state();
        let anchor_proj = spec.anchor_vector().projector();
        track(
            &mut max_err,
            (hs_distance(&state, &anchor_proj)? - sqrt6 * spec.mu()).abs(),
        );
        track(
            &mut max_err,
            (hs_distance(&state, &center)? - sqrt6 / 4.0 * spec.x()).abs(),
        );
        track(
            &mut max_err,
            (hs_distance(&anchor_proj, &center)? - sqrt6 / 4.0).abs(),
        );

        // ν₁ measures the distance from the center: the ratio itself stays
        // pinned. Below ν₁ ~ 1e-5 the ratio saturates f64 rounding (the
        // subtraction noise in W − I/4 is ~1e-17 per entry), so the probes
        // start at 1e-4; the absolute identity above covers ν₁ → 0.
        let nu1_probes: &[f64] = if i == 0 { &[1e-4, 1e-2, 0.5] } else { &[] };
        for &nu1 in nu1_probes {
            let probe = WernerSpec::new(anchor, nu1)?;
            let d = hs_distance(&probe.state(), &center)?;
            track(&mut max_err, (d / nu1 - sqrt6 / 4.0).abs());
        }
        if spec.x() > 1e-4 {
            track(
                &mut max_err,
                (hs_distance(&state, &center)? / spec.x() - sqrt6 / 4.0).abs(),
            );
        }

        // product state at D₂ = q₋ from the entangled anchor
        let bold = bold_basis(anchor.local_a(), anchor.local_b());
        track(
            &mut max_err,
            (hs_distance(&bold.vector(0).projector(), &anchor_proj)? - anchor.q_minus()).abs(),
        );

        // footnote projection geometry
        let r = rng.range(0.0, 1.0);
        let (mu_proj, _) = footnote_projection_check(r)?;
        track(&mut max_err, (mu_proj - (1.0 - r) / 6.0).abs());
        let file = CoordsFile {
            chi: r.acos() / 2.0,
            ..CoordsFile::default()
        };
        let foot = WernerSpec::from_mu(file.build()?, mu_proj)?;
        let d_foot = hs_distance(&foot.state(), &foot.anchor_vector().projector())?;
        track(&mut max_err, (d_foot - (1.0 - r) / sqrt6).abs());
    }
    Ok(SuiteResult { cases: n, max_err })
}

fn suite_local_invariance(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    let mut cases = 0;
    for i in 0..n {
        let mut rng = case_rng(seed, 24, i);
        let base_file = draws::random_file(&mut rng);
        let base = base_file.build()?;
        let rho = density_from_coords(&base);
        let spectrum = herm_eigen(&rho)?.values;
        let rep = report_oracle(&rho)?;
        for _ in 0..5 {
            let mut f = base_file;
            f.theta = rng.range(0.0, PI);
            f.psi = rng.range(0.0, TAU);
            f.theta_p = rng.range(0.0, PI);
            f.psi_p = rng.range(0.0, TAU);
            let rotated = density_from_coords(&f.build()?);
            let spectrum_rotated = herm_eigen(&rotated)?.values;
            for (a, b) in spectrum.iter().zip(&spectrum_rotated) {
                track(&mut max_err, (a - b).abs());
            }
            let rep_rotated = report_oracle(&rotated)?;
            track(
                &mut max_err,
                (rep.negativity - rep_rotated.negativity).abs(),
            );
            track(
                &mut max_err,
                (rep.concurrence - rep_rotated.concurrence).abs(),
            );
            cases += 1;
        }
    }
    Ok(SuiteResult { cases, max_err })
}

fn suite_weighted_average(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 25, i);
        let coords = draws::random_coords(&mut rng);
        let rho = density_from_coords(&coords);
        let mixed = concurrence_wootters(&rho)?;
        let e = ek_basis(&coords);
        let mu = coords.weights().mu();
        let bound: f64 = (0..4)
            .map(|k| mu[k] * concurrence_pure(&e[k]).unwrap())
            .sum();
        track(&mut max_err, (mixed - bound).max(0.0));
    }
    Ok(SuiteResult { cases: n, max_err })
}

fn suite_pt_negative_count(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 26, i);
        let coords = draws::random_coords(&mut rng);
        let rho = density_from_coords(&coords);
        // the oracle itself asserts the single-negative-eigenvalue fact
        let neg = negativity_oracle(&rho)?;
        let pt = partial_transpose(&rho, Subsystem::B)?;
        let values = herm_eigen(&pt)?.values;
        // second-most-negative eigenvalue must be numerically zero
        let second = values[values.len() - 2];
        track(&mut max_err, (-second).max(0.0));
        // definitional consistency of the separability classification
        let min = values[values.len() - 1];
        if (neg > tol::EPS_SEPARABLE) != (min < -tol::EPS_SEPARABLE / 2.0) {
            return Err(Error::InvariantViolation(
                "negativity and PT spectrum disagree on separability".into(),
            ));
        }
    }
    Ok(SuiteResult { cases: n, max_err })
}

fn suite_closest_pure(seed: u64, n: usize) -> Result<SuiteResult> {
    let mut max_err = 0.0;
    for i in 0..n {
        let mut rng = case_rng(seed, 27, i);
        let coords = draws::random_coords(&mut rng);
        let rho = density_from_coords(&coords);
        let d0 = hs_distance(&rho, &ek_basis(&coords)[0].projector())?;
        for _ in 0..400 {
            let p = crate::geometry::random_pure_vector(&mut rng).projector();
            track(&mut max_err, (d0 - hs_distance(&rho, &p)?).max(0.0));
        }
    }
    Ok(SuiteResult { cases: n, max_err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("no-such-suite", 42, None),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn outcomes_are_deterministic() {
        let a = run_suite("eigenensemble-recovery", 42, Some(20)).unwrap();
        let b = run_suite("eigenensemble-recovery", 42, Some(20)).unwrap();
        assert_eq!(a.max_abs_error, b.max_abs_error);
        assert_eq!(a.cases_run, b.cases_run);
        let c = run_suite("eigenensemble-recovery", 43, Some(20)).unwrap();
        assert!(c.pass);
    }

    #[test]
    fn quick_pass_over_all_suites() {
        // tiny sample counts; the full counts run in the acceptance target
        for name in suite_names() {
            let out = run_suite(name, 42, Some(4)).unwrap();
            assert!(
                out.pass,
                "suite {name} failed: err {} tol {} note {:?}",
                out.max_abs_error, out.tolerance, out.note
            );
        }
    }
}
