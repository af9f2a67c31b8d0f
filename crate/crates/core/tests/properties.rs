//! Property tests for the structural invariants of the linear algebra and
//! the coordinate maps.

use proptest::prelude::*;

use qmixpar_core::linalg::{herm_eigen, kron, matmul, partial_transpose, CMat, Subsystem, C64};
use qmixpar_core::parametrize::{ek_basis, mu_to_nu, nu_to_mu, CoordsFile};
use qmixpar_core::tol;

use std::f64::consts::{FRAC_PI_4, PI, TAU};

fn mat2() -> impl Strategy<Value = CMat> {
    prop::collection::vec(-1.0f64..1.0, 8).prop_map(|v| {
        CMat::from_fn(2, 2, |i, j| {
            C64::new(v[2 * (2 * i + j)], v[2 * (2 * i + j) + 1])
        })
    })
}

fn hermitian4() -> impl Strategy<Value = CMat> {
    prop::collection::vec(-1.0f64..1.0, 32).prop_map(|v| {
        let m = CMat::from_fn(4, 4, |i, j| {
            C64::new(v[2 * (4 * i + j)], v[2 * (4 * i + j) + 1])
        });
        m.add(&m.adjoint()).scale(C64::new(0.5, 0.0))
    })
}

fn coords_file() -> impl Strategy<Value = CoordsFile> {
    (
        (0.0..PI, 0.0..TAU, 0.0..PI, 0.0..TAU),
        (0.0..TAU, 0.0..FRAC_PI_4),
        (0.0..PI, 0.0..TAU, 0.0..PI, 0.0..TAU, 0.0..PI, 0.0..TAU),
        (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
    )
        .prop_filter_map("nu outside the simplex", |(loc, qs, mix, nu)| {
            if nu.0 + nu.1 + nu.2 > 1.0 {
                return None;
            }
            Some(CoordsFile {
                theta: loc.0,
                psi: loc.1,
                theta_p: loc.2,
                psi_p: loc.3,
                zeta: qs.0,
                chi: qs.1,
                theta21: mix.0,
                psi21: mix.1,
                theta32: mix.2,
                psi32: mix.3,
                theta0: mix.4,
                psi0: mix.5,
                nu1: nu.0,
                nu2: nu.1,
                nu3: nu.2,
            })
        })
}

proptest! {
    #[test]
    fn kron_mixed_product((a, b, c, d) in (mat2(), mat2(), mat2(), mat2())) {
        let lhs = matmul(&kron(&a, &b), &kron(&c, &d)).unwrap();
        let rhs = kron(&matmul(&a, &c).unwrap(), &matmul(&b, &d).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_linear_involution(h in hermitian4(), sub in prop::bool::ANY) {
        let sub = if sub { Subsystem::A } else { Subsystem::B };
        let pt = partial_transpose(&h, sub).unwrap();
        prop_assert!((pt.trace() - h.trace()).norm() < 1e-13);
        prop_assert!(pt.hermiticity_deviation() < 1e-13);
        prop_assert!(partial_transpose(&pt, sub).unwrap().max_abs_diff(&h) == 0.0);
    }

    #[test]
    fn eigensolver_contracts(h in hermitian4()) {
        let eig = herm_eigen(&h).unwrap();
        let vtv = matmul(&eig.vectors.adjoint(), &eig.vectors).unwrap();
        prop_assert!(vtv.max_abs_diff(&CMat::identity(4)) < tol::EPS_ORTHO);
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < tol::EPS_EIG);
        let sum: f64 = eig.values.iter().sum();
        prop_assert!((sum - h.trace().re).abs() < tol::EPS_EIG);
    }

    #[test]
    fn nu_mu_round_trip(u in (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0)) {
        // map the cube onto the simplex ν₁+ν₂+ν₃ ≤ 1
        let nu = (u.0, u.1 * (1.0 - u.0), u.2 * (1.0 - u.0 - u.1 * (1.0 - u.0)));
        let w = nu_to_mu([nu.0, nu.1, nu.2]).unwrap();
        let m = w.mu();
        // hierarchy and normalization
        prop_assert!(m[0] >= m[1] && m[1] >= m[2] && m[2] >= m[3] && m[3] >= 0.0);
        prop_assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let back = mu_to_nu(&w);
        for (b, n) in back.iter().zip([nu.0, nu.1, nu.2]) {
            prop_assert!((b - n).abs() < 1e-14);
        }
    }

    #[test]
    fn eigenbasis_is_orthonormal(file in coords_file()) {
        let coords = file.build().unwrap();
        let e = ek_basis(&coords);
        for i in 0..4 {
            for j in 0..4 {
                let g = e[i].dot(&e[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - C64::new(target, 0.0)).norm() < tol::EPS_ORTHO);
            }
        }
    }
}
