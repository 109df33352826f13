//! Property tests over random group elements and cone points. The Lorentz
//! matrix is recomputed here from traces of Pauli matrices, independently of
//! the library's intertwiner construction.

use krein_photon::cone::{boost_action, section, wigner_element, ConePoint};
use krein_photon::krein::{gram, krein_pair, Frame, FrameLabel};
use krein_photon::packet::{PacketSpec, PacketTerm};
use krein_photon::sl2c::{little_group_residual, lorentz_of, minkowski_metric, pauli, SL2Element};
use krein_photon::transversal::{theta, PhasePair};
use krein_photon::{max_abs, C4, C64};
use nalgebra::Matrix4;
use proptest::prelude::*;

/// V(α)^μ_ν = ½ Re tr(σ_μ α σ_ν α*), with σ₀ = 1.
fn lorentz_by_traces(alpha: &SL2Element) -> Matrix4<f64> {
    let a = alpha.matrix();
    Matrix4::from_fn(|mu, nu| 0.5 * (pauli(mu) * a * pauli(nu) * a.adjoint()).trace().re)
}

fn element() -> impl Strategy<Value = SL2Element> {
    (
        prop::array::uniform3(1usize..=3),
        prop::array::uniform3(-3.2f64..3.2),
        prop::array::uniform2(-1.5f64..1.5),
        any::<bool>(),
    )
        .prop_map(|(axes, angles, raps, flip)| {
            let g = SL2Element::rotation(axes[0], angles[0])
                * SL2Element::boost(axes[1], raps[0])
                * SL2Element::rotation(axes[2], angles[1])
                * SL2Element::boost(axes[0], raps[1])
                * SL2Element::rotation(axes[1], angles[2]);
            if flip {
                -g
            } else {
                g
            }
        })
}

fn cone_point() -> impl Strategy<Value = ConePoint> {
    (-2.3f64..2.3, -0.999f64..0.999, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(log_r, c, az)| ConePoint::from_spherical(log_r.exp(), c.acos(), az).expect("positive radius"))
}

fn c4() -> impl Strategy<Value = C4> {
    prop::array::uniform8(-1.0f64..1.0).prop_map(|x| {
        C4::new(
            C64::new(x[0], x[1]),
            C64::new(x[2], x[3]),
            C64::new(x[4], x[5]),
            C64::new(x[6], x[7]),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn lorentz_matrix_matches_the_trace_formula(a in element()) {
        let v = lorentz_of(&a);
        let oracle = lorentz_by_traces(&a);
        prop_assert!(max_abs(&(v.matrix() - oracle)) < 1e-11 * oracle.amax().max(1.0));
    }

    #[test]
    fn lorentz_matrices_preserve_the_metric_and_compose(a in element(), b in element()) {
        let g = minkowski_metric();
        let (va, vb) = (lorentz_by_traces(&a), lorentz_by_traces(&b));
        let scale = va.amax().powi(2).max(1.0);
        prop_assert!(max_abs(&(va.transpose() * g * va - g)) < 1e-11 * scale);
        let vab = lorentz_of(&(a * b));
        prop_assert!(max_abs(&(vab.matrix() - va * vb)) < 1e-11 * scale * vb.amax());
    }

    #[test]
    fn section_carries_the_point_to_the_standard_one(p in cone_point()) {
        let v = lorentz_by_traces(&section(&p));
        let image = v * p.four_vector().to_vector();
        let pbar = nalgebra::Vector4::new(1.0, 0.0, 0.0, 1.0);
        prop_assert!(max_abs(&(image - pbar)) < 1e-12 * p.r().max(1.0));
        // B(p) is the Gram matrix of that Lorentz matrix
        let b = gram(&p);
        prop_assert!(max_abs(&(v.transpose() * v - b)) < 1e-12 * b.amax());
    }

    #[test]
    fn wigner_elements_fix_the_standard_point(a in element(), p in cone_point()) {
        let gamma = wigner_element(&a, &p).unwrap();
        let v = lorentz_of(&gamma);
        let moved = v.matrix() * nalgebra::Vector4::new(1.0, 0.0, 0.0, 1.0);
        prop_assert!(max_abs(&(moved - nalgebra::Vector4::new(1.0, 0.0, 0.0, 1.0))) < 1e-9);
        prop_assert!(little_group_residual(&gamma) < 1e-9);
    }

    #[test]
    fn lorentz_matrices_are_krein_isometries(a in element(), u in c4(), w in c4()) {
        let v = lorentz_of(&a);
        let (vu, vw) = (v.apply_c(&u), v.apply_c(&w));
        let scale = v.matrix().amax().powi(2);
        prop_assert!((krein_pair(&vu, &vw) - krein_pair(&u, &w)).norm() < 1e-11 * scale);
    }

    #[test]
    fn frame_diagonalizes_the_gram_matrix(p in cone_point()) {
        let f = Frame::at(&p).unwrap();
        let b = gram(&p);
        for l in FrameLabel::ALL {
            let w = f.get(l);
            let lam = l.eigenvalue(p.r());
            prop_assert!(max_abs(&(b * w - w * lam)) < 1e-12 * lam.max(1.0));
            prop_assert!((w.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn theta_is_a_phase_with_the_cocycle_property(a in element(), d in element(), p in cone_point()) {
        let t = theta(&a, &p).unwrap();
        prop_assert!((t.cos.powi(2) + t.sin.powi(2) - 1.0).abs() < 1e-10);
        prop_assert!(theta(&-a, &p).unwrap().distance(&t) < 1e-12);
        let q = boost_action(&a, &p).unwrap();
        let sum = t.add(&theta(&d, &q).unwrap());
        prop_assert!(theta(&(a * d), &p).unwrap().distance(&sum) < 1e-9);
    }

    #[test]
    fn rotations_about_the_third_axis_have_no_phase(angle in -6.3f64..6.3, rap in -2.0f64..2.0, p in cone_point()) {
        let zero = PhasePair::from_angle(0.0);
        prop_assert!(theta(&SL2Element::alpha_12(angle), &p).unwrap().distance(&zero) < 1e-12);
        prop_assert!(theta(&SL2Element::alpha_03(rap), &p).unwrap().distance(&zero) < 1e-12);
    }

    #[test]
    fn packet_json_round_trips(
        label in prop::sample::select(FrameLabel::ALL.to_vec()),
        dir in prop::array::uniform3(-1.0f64..1.0),
        radius in 1.0f64..5.0,
        sigma in 0.01f64..0.16,
        amp in prop::array::uniform2(-2.0f64..2.0),
    ) {
        let n = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(n > 0.1);
        let center = dir.map(|x| x * radius / n);
        let spec = PacketSpec::new(vec![PacketTerm::new(label, center, sigma, C64::new(amp[0], amp[1]))]).unwrap();
        prop_assert_eq!(PacketSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}
