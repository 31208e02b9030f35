use liegeo::geodesic::*;
use liegeo::lie::{unit, LieAlgebraPreset};
use liegeo::sampling::seeded;
use liegeo::scalar::{mat_exp, QSqrt2, EXPM_TOL};
use rand::Rng;

fn with_realization() -> Vec<LieAlgebraPreset> {
    LieAlgebraPreset::all_builtin()
        .into_iter()
        .filter(|p| p.realization.is_some())
        .collect()
}

#[test]
fn energy_is_conserved() {
    let mut rng = seeded(0);
    for p in with_realization() {
        let sys = GeodesicSystem::new(&p).unwrap();
        for _ in 0..5 {
            let mut v: Vec<f64> = (0..p.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1.0 {
                v.iter_mut().for_each(|x| *x /= norm);
            }
            let traj = sys.integrate(&v, 1.0, 1000).unwrap();
            let drift = energy_drift(&sys, &traj);
            assert!(drift < 1e-10, "{}: {drift}", p.name);
        }
    }
}

#[test]
fn fourth_order_convergence() {
    let p = LieAlgebraPreset::builtin("rxsol2").unwrap();
    let sys = GeodesicSystem::new(&p).unwrap();
    let v0 = [0.3, 0.8, 0.6];
    let end = |steps| sys.integrate(&v0, 1.0, steps).unwrap().pop().unwrap();
    let reference = end(400);
    let coarse = end(20);
    let fine = end(40);
    let e1 = coarse.g.dist(&reference.g);
    let e2 = fine.g.dist(&reference.g);
    let ratio = e1 / e2;
    assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn one_parameter_geodesics_track_the_exponential() {
    for p in with_realization() {
        let sys = GeodesicSystem::new(&p).unwrap();
        for i in 0..p.dim() {
            if !is_geodesic_oneparam(&p, &unit(p.dim(), i)).unwrap().pass {
                continue;
            }
            let mut v = vec![0.0; p.dim()];
            v[i] = 1.0;
            let end = sys.integrate(&v, 1.0, 1000).unwrap().pop().unwrap();
            let exact = mat_exp(&sys.algebra_element(&v), EXPM_TOL).unwrap();
            assert!(end.g.dist(&exact) < 1e-8, "{} {}", p.name, p.labels[i]);
        }
    }
}

#[test]
fn rxsol2_y_direction() {
    let p = LieAlgebraPreset::builtin("rxsol2").unwrap();
    let y = unit(3, 1);
    assert!(is_geodesic_oneparam(&p, &y).unwrap().pass);
    let sys = GeodesicSystem::new(&p).unwrap();
    let end = sys
        .integrate(&[0.0, 1.0, 0.0], 1.0, 1000)
        .unwrap()
        .pop()
        .unwrap();
    let exact = mat_exp(&sys.algebra_element(&[0.0, 1.0, 0.0]), EXPM_TOL).unwrap();
    assert!(end.g.dist(&exact) < 1e-8);
}

#[test]
fn non_geodesic_direction_drifts_away_from_the_exponential() {
    let p = LieAlgebraPreset::builtin("rxsol2").unwrap();
    let w = vec![
        QSqrt2::from_int(0),
        QSqrt2::from_int(1),
        QSqrt2::from_int(1),
    ];
    assert!(!is_geodesic_oneparam(&p, &w).unwrap().pass);
    let sys = GeodesicSystem::new(&p).unwrap();
    let v = [0.0, 1.0, 1.0];
    let end = sys.integrate(&v, 1.0, 1000).unwrap().pop().unwrap();
    let exact = mat_exp(&sys.algebra_element(&v), EXPM_TOL).unwrap();
    assert!(end.g.dist(&exact) > 1e-3);
}
