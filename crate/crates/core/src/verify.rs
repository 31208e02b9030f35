//! The thirteen acceptance checks, each returning report records.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_traits::Zero;
use rand::Rng;

use crate::error::Result;
use crate::geodesic::{energy_drift, is_geodesic_oneparam, GeodesicSystem};
use crate::goedel::{pullback_residual, sample_point, signature_at, ActionParams, JacobianMode};
use crate::group::{
    covering_f, covering_f_block, hom_residual, psi_on_sol2, reduce_4to3, sample_affr3,
    sample_sol2, sample_sr_coords, sr_element4, SolOrder,
};
use crate::iwasawa::{
    angle_dist, kan, nak, psi_eval, psi_inverse, pushforward_frame, verify_psiab, PsiCoords,
};
use crate::lie::{unit, LieAlgebraPreset};
use crate::metric::{
    curvature, koszul_connection, pseudo_gram_schmidt, scale_metric, signature, signature_f64,
};
use crate::report::ReportRecord;
use crate::sampling::{sample_sl2, sample_sln, seeded, SeededRng};
use crate::scalar::{mat_exp, ExactMatrix, Matrix, QSqrt2, EXPM_TOL};

pub const CRITERIA: [&str; 13] = [
    "exact curvature -2 on sl2-lorentz and so2sol2-lorentz",
    "exact curvature -1/2 on rxsol2",
    "listed covariant derivatives",
    "structure constants, Jacobi identity and realizations",
    "pseudo-orthonormal basis of the g3 metric",
    "Lorentz signature",
    "isometry action on the Goedel chart",
    "Iwasawa factorizations",
    "Psi as an NAK product",
    "one-parameter geodesics and integrator",
    "homomorphisms and coverings",
    "metric scaling laws",
    "pushforward of the sub-Riemannian frame",
];

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub records: Vec<ReportRecord>,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

fn q(s: &str) -> QSqrt2 {
    s.parse().expect("literal scalar")
}

fn preset(name: &str) -> Result<LieAlgebraPreset> {
    LieAlgebraPreset::builtin(name)
}

fn rng_for(seed: u64, id: usize) -> SeededRng {
    seeded(seed.wrapping_mul(1000).wrapping_add(id as u64))
}

/// Covariant derivatives `∇_{bᵢ} bⱼ` as stated for the three constant-curvature
/// algebras, in their bases `X, Y, Z`.
pub const LISTED_DERIVATIVES: [(&str, &str, &str, [&str; 3]); 21] = [
    ("sl2-lorentz", "X", "Y", ["0", "0", "0"]),
    ("sl2-lorentz", "Y", "Y", ["0", "0", "0"]),
    ("sl2-lorentz", "Z", "Y", ["-sqrt2", "0", "0"]),
    ("sl2-lorentz", "Y", "Z", ["sqrt2", "0", "0"]),
    ("sl2-lorentz", "X", "Z", ["0", "0", "0"]),
    ("sl2-lorentz", "X", "X", ["0", "0", "0"]),
    ("sl2-lorentz", "Z", "Z", ["0", "0", "0"]),
    ("so2sol2-lorentz", "X", "Y", ["0", "0", "sqrt2"]),
    ("so2sol2-lorentz", "Y", "Y", ["0", "0", "0"]),
    ("so2sol2-lorentz", "Z", "Y", ["-sqrt2", "0", "-2"]),
    ("so2sol2-lorentz", "Y", "Z", ["sqrt2", "0", "0"]),
    ("so2sol2-lorentz", "X", "Z", ["0", "-sqrt2", "0"]),
    ("so2sol2-lorentz", "Z", "X", ["0", "-sqrt2", "0"]),
    ("so2sol2-lorentz", "Z", "Z", ["0", "2", "0"]),
    ("rxsol2", "X", "Y", ["0", "0", "1/2*sqrt2"]),
    ("rxsol2", "Y", "Y", ["0", "0", "0"]),
    ("rxsol2", "Z", "Y", ["-1/2*sqrt2", "0", "-1"]),
    ("rxsol2", "Y", "Z", ["1/2*sqrt2", "0", "0"]),
    ("rxsol2", "X", "Z", ["0", "-1/2*sqrt2", "0"]),
    ("rxsol2", "Z", "X", ["0", "-1/2*sqrt2", "0"]),
    ("rxsol2", "Z", "Z", ["0", "1", "0"]),
];

/// Brackets `[bᵢ, bⱼ]` as printed for each preset.
pub const LISTED_BRACKETS: [(&str, &str, &str, &[&str]); 15] = [
    ("g3-goedel", "e1", "e2", &["0", "0", "-1"]),
    ("g3-goedel", "e0", "e1", &["0", "0", "0"]),
    ("g3-goedel", "e0", "e2", &["0", "0", "0"]),
    ("goedel4", "e1", "e2", &["0", "0", "-1", "0"]),
    ("goedel4", "e3", "e1", &["0", "0", "0", "0"]),
    ("sl2-natural", "f0", "f1", &["2", "0", "-4"]),
    ("sl2-natural", "f0", "f2", &["0", "1", "0"]),
    ("sl2-natural", "f1", "f2", &["0", "0", "2"]),
    ("sl2-lorentz", "X", "Y", &["0", "0", "-sqrt2"]),
    ("sl2-lorentz", "X", "Z", &["0", "sqrt2", "0"]),
    ("sl2-lorentz", "Y", "Z", &["2*sqrt2", "0", "0"]),
    ("so2sol2-lorentz", "Y", "Z", &["2*sqrt2", "0", "2"]),
    ("rxsol2", "Y", "Z", &["sqrt2", "0", "1"]),
    ("aff-r3", "e1", "e2", &["1", "0", "0"]),
    ("aff-r3", "e1", "e3", &["0", "0", "0"]),
];

fn curvature_record(name: &str, expected: &QSqrt2) -> Result<ReportRecord> {
    let p = preset(name)?;
    let rep = curvature(&p)?;
    let mut rec = ReportRecord::new("curvature").input("preset", name);
    for (i, j) in rep.pairs() {
        let label = format!("k_raw({},{})", p.labels[i], p.labels[j]);
        rec.exact(label.clone(), rep.k_raw(i, j));
        rec.check(label, rep.k_raw(i, j) == expected);
    }
    Ok(rec)
}

fn c1() -> Result<Vec<ReportRecord>> {
    Ok(vec![
        curvature_record("sl2-lorentz", &q("-2"))?,
        curvature_record("so2sol2-lorentz", &q("-2"))?,
    ])
}

fn c2() -> Result<Vec<ReportRecord>> {
    Ok(vec![curvature_record("rxsol2", &q("-1/2"))?])
}

fn index(p: &LieAlgebraPreset, label: &str) -> usize {
    p.label_index(label).expect("listed label exists")
}

fn c3() -> Result<Vec<ReportRecord>> {
    let mut rec = ReportRecord::new("connection");
    for (name, i, j, coeffs) in LISTED_DERIVATIVES {
        let p = preset(name)?;
        let got = koszul_connection(&p)?.basis_derivative(index(&p, i), index(&p, j));
        let want: Vec<QSqrt2> = coeffs.iter().map(|c| q(c)).collect();
        rec.check(format!("{name}: nabla_{i} {j}"), got == want);
    }
    Ok(vec![rec])
}

fn c4() -> Result<Vec<ReportRecord>> {
    let mut records = Vec::new();
    for p in LieAlgebraPreset::all_builtin() {
        let mut rec = ReportRecord::new("algebra check").input("preset", &p.name);
        rec.check("jacobi", p.jacobi_check().passed());
        rec.check("antisymmetry", p.constants.is_antisymmetric());
        let dev = p.realization_consistency()?;
        rec.exact("realization deviation", &dev);
        rec.check("realization", dev.is_zero());
        records.push(rec);
    }
    let mut rec = ReportRecord::new("algebra brackets");
    for (name, i, j, coeffs) in LISTED_BRACKETS {
        let p = preset(name)?;
        let got = p.constants.basis_bracket(index(&p, i), index(&p, j));
        let want: Vec<QSqrt2> = coeffs.iter().map(|c| q(c)).collect();
        rec.check(format!("{name}: [{i},{j}]"), got == want);
    }
    records.push(rec);
    Ok(records)
}

fn c5() -> Result<Vec<ReportRecord>> {
    let out = pseudo_gram_schmidt(&preset("g3-goedel")?.gram, &[0, 1, 2])?;
    let z = q("0");
    let expected = ExactMatrix::from_rows(vec![
        vec![q("1"), z.clone(), q("-sqrt2")],
        vec![z.clone(), q("1"), z.clone()],
        vec![z.clone(), z, q("sqrt2")],
    ])?;
    let mut rec = ReportRecord::new("orthonormalize").input("preset", "g3-goedel");
    rec.check("basis {e0, e1, sqrt2(e2 - e0)}", out.basis == expected);
    rec.check(
        "gram diag(1,-1,-1)",
        out.gram == ExactMatrix::diag(&[q("1"), q("-1"), q("-1")]),
    );
    Ok(vec![rec])
}

fn c6(seed: u64) -> Result<Vec<ReportRecord>> {
    let g = preset("goedel4")?.gram;
    let mut exact = ReportRecord::new("signature").input("preset", "goedel4");
    exact.check("exact (1,3)", signature(&g)? == (1, 3));
    exact.check("float (1,3)", signature_f64(&g.to_f64(), 1e-12)? == (1, 3));
    let mut rng = rng_for(seed, 6);
    let mut chart = ReportRecord::new("goedel signature")
        .input("points", 100)
        .seed(seed);
    for (label, a) in [
        ("1/2", 0.5),
        ("1/sqrt2", FRAC_1_SQRT_2),
        ("1", 1.0),
        ("2", 2.0),
    ] {
        let bad = (0..100)
            .filter(|_| {
                signature_at(&sample_point(&mut rng), a)
                    .map(|s| s != (1, 3))
                    .unwrap_or(true)
            })
            .count();
        chart.residual(format!("points without (1,3), a={label}"), bad as f64, 0.0);
    }
    Ok(vec![exact, chart])
}

fn c7(seed: u64) -> Result<Vec<ReportRecord>> {
    let mut rng = rng_for(seed, 7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = ActionParams::sample(&mut rng);
        let x = sample_point(&mut rng);
        let scale = rng.random_range(0.5..2.0);
        worst = worst.max(pullback_residual(&p, &x, scale, JacobianMode::Analytic)?);
    }
    let mut rec = ReportRecord::new("goedel pullback-check")
        .input("samples", 100)
        .seed(seed);
    rec.residual("max pullback residual", worst, 1e-12);
    Ok(vec![rec])
}

fn c8(seed: u64) -> Result<Vec<ReportRecord>> {
    let mut rng = rng_for(seed, 8);
    let (mut rk, mut ck, mut rn, mut cn) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let m = sample_sl2(&mut rng);
        let f = kan(&m)?;
        rk = rk.max(f.reconstruction_residual(&m));
        ck = ck.max(f.constraint_residual());
        let f = nak(&m)?;
        rn = rn.max(f.reconstruction_residual(&m));
        cn = cn.max(f.constraint_residual());
    }
    let (mut r3, mut c3) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let m = sample_sln(&mut rng, 3);
        let f = kan(&m)?;
        r3 = r3.max(f.reconstruction_residual(&m));
        c3 = c3.max(f.constraint_residual());
    }
    let mut rec = ReportRecord::new("iwasawa")
        .input("samples", 100)
        .seed(seed);
    rec.residual("kan reconstruction", rk, 1e-10);
    rec.residual("kan constraints", ck, 1e-12);
    rec.residual("nak reconstruction", rn, 1e-10);
    rec.residual("nak constraints", cn, 1e-12);
    rec.residual("SL(3) kan reconstruction", r3, 1e-10);
    rec.residual("SL(3) kan constraints", c3, 1e-12);
    Ok(vec![rec])
}

/// Batch check of Ψ against its NAK factors, determinant and inverse.
pub fn psi_batch(samples: usize, seed: u64) -> Result<ReportRecord> {
    let mut rng = seeded(seed);
    let (mut fac, mut det, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let c = PsiCoords::sample(&mut rng);
        fac = fac.max(verify_psiab(&c));
        let m = psi_eval(&c);
        det = det.max((m.det()? - 1.0).abs());
        let back = psi_inverse(&m)?;
        inv = inv
            .max((back.rho - c.rho).abs())
            .max((back.theta - c.theta).abs())
            .max(angle_dist(back.phi, c.phi));
    }
    let mut rec = ReportRecord::new("psi verify-nak")
        .input("samples", samples)
        .seed(seed);
    rec.residual("max |n a k - Psi|", fac, 1e-12);
    rec.residual("max |det Psi - 1|", det, 1e-12);
    rec.residual("max inverse roundtrip", inv, 1e-9);
    Ok(rec)
}

fn c9(seed: u64) -> Result<Vec<ReportRecord>> {
    Ok(vec![psi_batch(1000, seed)?])
}

fn c10(seed: u64) -> Result<Vec<ReportRecord>> {
    let p = preset("sl2-lorentz")?;
    let mut exact = ReportRecord::new("geodesic oneparam").input("preset", "sl2-lorentz");
    for (i, l) in p.labels.iter().enumerate() {
        exact.check(
            format!("nabla_{l} {l} = 0"),
            is_geodesic_oneparam(&p, &unit(3, i))?.pass,
        );
    }
    let sys = GeodesicSystem::new(&p)?;
    let x = [1.0, 0.0, 0.0];
    let traj = sys.integrate(&x, 1.0, 1000)?;
    let target = mat_exp(&sys.algebra_element(&x), EXPM_TOL)?;
    let mut numeric = ReportRecord::new("geodesic")
        .input("preset", "sl2-lorentz")
        .seed(seed);
    numeric.residual(
        "|g(1) - exp(X)|",
        traj.last().expect("nonempty").g.dist(&target),
        1e-8,
    );
    numeric.residual("energy drift along X", energy_drift(&sys, &traj), 1e-10);
    let mut rng = rng_for(seed, 10);
    let mut drift = 0.0f64;
    for _ in 0..5 {
        let v: Vec<f64> = (0..3).map(|_| rng.random_range(-0.57..0.57)).collect();
        drift = drift.max(energy_drift(&sys, &sys.integrate(&v, 1.0, 1000)?));
    }
    numeric.residual("energy drift, random v0", drift, 1e-10);
    Ok(vec![exact, numeric])
}

fn c11(seed: u64) -> Result<Vec<ReportRecord>> {
    let mut rec = ReportRecord::new("maps check")
        .input("pairs", 100)
        .seed(seed);
    for order in [SolOrder::AN, SolOrder::NA] {
        let mut rng = rng_for(seed, 11);
        let r = hom_residual(|m| psi_on_sol2(m, order), sample_sol2, 100, &mut rng)?;
        rec.residual(format!("psi {order:?}"), r, 1e-12);
    }
    let mut rng = rng_for(seed, 111);
    rec.residual(
        "covering F",
        hom_residual(covering_f_block, sample_affr3, 100, &mut rng)?,
        1e-12,
    );
    let red = |m: &Matrix| reduce_4to3(m).map(|g| g.rows);
    let sample = |r: &mut SeededRng| sr_element4(sample_sr_coords(r));
    rec.residual(
        "reduce 4->3",
        hom_residual(red, sample, 100, &mut rng)?,
        1e-12,
    );
    let (a, b) = covering_f(0.0, 0.0, TAU);
    let id = Matrix::identity(2);
    rec.residual(
        "F(0,0,2pi) = (I,I)",
        a.rows.dist(&id).max(b.rows.dist(&id)),
        1e-12,
    );
    Ok(vec![rec])
}

/// Curvature of `rxsol2` at the Gödel scale `a = 1/√2` (factor `c = a² = 1/2`)
/// next to the constant-curvature `sl2-lorentz` values. Informational only.
pub fn scale_comparison_record() -> Result<ReportRecord> {
    let rx = preset("rxsol2")?;
    let hn = curvature(&preset("sl2-lorentz")?)?;
    let mut rec = ReportRecord::new("scale comparison")
        .input("preset", "rxsol2")
        .input("a", "1/sqrt2");
    for (label, c) in [("c=1/2", q("1/2")), ("c=1/4", q("1/4"))] {
        let s = scale_metric(&rx, &c)?;
        for (i, j) in s.report.pairs() {
            let pair = format!("{},{}", rx.labels[i], rx.labels[j]);
            if let Some(k) = s.report.k_normalized(i, j) {
                rec.exact(format!("{label} K_normalized({pair})"), k);
            }
            if let Some(k) = hn.k_normalized(i, j) {
                rec.exact(format!("sl2-lorentz K_normalized({pair})"), k);
            }
        }
    }
    rec.text(
        "note",
        "c=1/4 reproduces the sl2-lorentz normalized curvature; c=1/2 (a=1/sqrt2) gives half of it",
    );
    Ok(rec)
}

fn c12() -> Result<Vec<ReportRecord>> {
    let mut records = Vec::new();
    for name in ["rxsol2", "sl2-lorentz"] {
        let p = preset(name)?;
        let base = curvature(&p)?;
        for c in [q("2"), q("1/4")] {
            let s = scale_metric(&p, &c)?;
            let inv = c.checked_inv()?;
            let mut rec = ReportRecord::new("scale")
                .input("preset", name)
                .input("c", &c);
            rec.check("connection unchanged", s.connection_unchanged);
            let raw = base
                .pairs()
                .iter()
                .all(|&(i, j)| s.report.k_raw(i, j) == &(base.k_raw(i, j) * &c));
            rec.check("k_raw scales by c", raw);
            let norm = base.pairs().iter().all(|&(i, j)| {
                match (s.report.k_normalized(i, j), base.k_normalized(i, j)) {
                    (Some(a), Some(b)) => a == &(b * &inv),
                    (None, None) => true,
                    _ => false,
                }
            });
            rec.check("K_normalized scales by 1/c", norm);
            records.push(rec);
        }
    }
    records.push(scale_comparison_record()?);
    Ok(records)
}

fn c13(seed: u64) -> Result<Vec<ReportRecord>> {
    let mut rng = rng_for(seed, 13);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        worst = worst.max(pushforward_frame(&PsiCoords::sample(&mut rng), 1e-4)?.defect);
    }
    let mut rec = ReportRecord::new("psi pushforward")
        .input("h", 1e-4)
        .input("points", 50)
        .seed(seed);
    rec.residual("max |numeric - Ad(k^-1)W1 - W2|", worst, 1e-6);
    Ok(vec![rec])
}

/// Runs criterion `id` (1–13); errors surface as a failed record.
pub fn run_criterion(id: usize, seed: u64) -> CriterionOutcome {
    let result = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(seed),
        7 => c7(seed),
        8 => c8(seed),
        9 => c9(seed),
        10 => c10(seed),
        11 => c11(seed),
        12 => c12(),
        13 => c13(seed),
        _ => Err(crate::Error::InvalidArgument(format!("no criterion {id}"))),
    };
    let records = result.unwrap_or_else(|e| {
        let mut r = ReportRecord::new("verify-all").input("criterion", id);
        r.text("error", e.to_string());
        r.check("completed", false);
        vec![r]
    });
    CriterionOutcome {
        id,
        title: CRITERIA
            .get(id.wrapping_sub(1))
            .copied()
            .unwrap_or("unknown"),
        records,
    }
}

pub fn verify_all(seed: u64) -> Vec<CriterionOutcome> {
    (1..=CRITERIA.len())
        .map(|id| run_criterion(id, seed))
        .collect()
}
