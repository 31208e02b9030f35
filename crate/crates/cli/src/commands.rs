//! One function per subcommand; each returns the records to print.

use std::path::PathBuf;

use liegeo::geodesic::{energy_drift, GeodesicSystem};
use liegeo::goedel::{self, ActionParams, ChartPoint, JacobianMode};
use liegeo::group::{
    covering_f, covering_f_block, hom_residual, psi_extended_block, psi_on_sol2, reduce_4to3,
    sample_affr3, sample_line_times_sol2, sample_sol2, sample_sr_coords, sr_element4, SolOrder,
};
use liegeo::iwasawa::{self, PsiCoords};
use liegeo::lie::LieAlgebraPreset;
use liegeo::metric::{self, koszul_connection, pseudo_gram_schmidt, scale_metric, PseudoMetric};
use liegeo::report::ReportRecord;
use liegeo::sampling::{seeded, SeededRng};
use liegeo::scalar::{parse_matrix_literal, Matrix, QSqrt2};
use liegeo::verify;
use liegeo::{Error, Result};

pub fn load(name: &Option<String>, file: &Option<PathBuf>) -> Result<LieAlgebraPreset> {
    match (name, file) {
        (Some(n), None) => LieAlgebraPreset::builtin(n),
        (None, Some(p)) => LieAlgebraPreset::load(p),
        _ => Err(Error::InvalidArgument(
            "give exactly one of --preset or --preset-file".into(),
        )),
    }
}

fn parse_floats(s: &str, n: Option<usize>, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| {
            Error::Parse(format!(
                "{what}: expected comma-separated numbers, got {s:?}"
            ))
        })?;
    if let Some(n) = n {
        if v.len() != n {
            return Err(Error::Parse(format!(
                "{what}: expected {n} numbers, got {}",
                v.len()
            )));
        }
    }
    Ok(v)
}

fn parse_point(s: &str) -> Result<ChartPoint> {
    let v = parse_floats(s, Some(4), "point")?;
    Ok([v[0], v[1], v[2], v[3]])
}

fn matrix_results(rec: &mut ReportRecord, name: &str, m: &Matrix) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            rec.float(format!("{name}[{i}][{j}]"), m[(i, j)]);
        }
    }
}

fn base(command: &str, p: &LieAlgebraPreset) -> ReportRecord {
    ReportRecord::new(command).input("preset", &p.name)
}

pub fn algebra_check(p: &LieAlgebraPreset) -> Result<Vec<ReportRecord>> {
    let mut rec = base("algebra check", p);
    let jacobi = p.jacobi_check();
    rec.text("jacobi", format!("{jacobi:?}"));
    rec.check("jacobi", jacobi.passed());
    rec.check("antisymmetry", p.constants.is_antisymmetric());
    let det = p.gram.det()?;
    rec.exact("gram determinant", &det);
    rec.check("nondegenerate", !num_is_zero(&det));
    match p.realization_consistency() {
        Ok(dev) => {
            rec.exact("realization deviation", &dev);
            rec.check("realization", num_is_zero(&dev));
        }
        Err(Error::MissingRealization(_)) => rec.text("realization", "none"),
        Err(e) => return Err(e),
    }
    Ok(vec![rec])
}

fn num_is_zero(x: &QSqrt2) -> bool {
    x == &QSqrt2::from_int(0)
}

pub fn connection(p: &LieAlgebraPreset) -> Result<Vec<ReportRecord>> {
    let conn = koszul_connection(p)?;
    let metric = PseudoMetric::new(p.gram.clone())?;
    let mut rec = base("connection", p);
    let d = p.dim();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (a, b, c) = (&p.labels[i], &p.labels[j], &p.labels[k]);
                rec.exact(format!("nabla_{a} {b} [{c}]"), conn.get(i, j, k));
            }
        }
    }
    rec.check("torsion-free", conn.is_torsion_free(&p.constants));
    rec.check("metric-compatible", conn.is_metric_compatible(&metric));
    Ok(vec![rec])
}

pub fn curvature(p: &LieAlgebraPreset, normalized: bool) -> Result<Vec<ReportRecord>> {
    let rep = metric::curvature(p)?;
    let mut rec = base("curvature", p).input("normalized", normalized);
    for (i, j) in rep.pairs() {
        let pair = format!("{},{}", p.labels[i], p.labels[j]);
        rec.exact(format!("k_raw({pair})"), rep.k_raw(i, j));
        if normalized {
            match rep.k_normalized(i, j) {
                Some(k) => rec.exact(format!("K_normalized({pair})"), k),
                None => rec.text(
                    format!("K_normalized({pair})"),
                    "undefined: zero denominator",
                ),
            }
        }
    }
    rec.check("first Bianchi identity", rep.satisfies_first_bianchi());
    rec.check("R antisymmetric", rep.is_antisymmetric());
    rec.check("k_raw symmetric", rep.k_raw_symmetric());
    Ok(vec![rec])
}

pub fn orthonormalize(p: &LieAlgebraPreset, order: Option<&str>) -> Result<Vec<ReportRecord>> {
    let order: Vec<usize> = match order {
        None => (0..p.dim()).collect(),
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("order: expected indices, got {s:?}")))?,
    };
    let out = pseudo_gram_schmidt(&p.gram, &order)?;
    let mut rec = base("orthonormalize", p).input(
        "order",
        order
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    for (c, &idx) in order.iter().enumerate() {
        for r in 0..p.dim() {
            rec.exact(format!("v{c}[{}]", p.labels[r]), &out.basis[(r, c)]);
        }
        rec.exact(
            format!("(v{c},v{c}) from {}", p.labels[idx]),
            &out.gram[(c, c)],
        );
    }
    let one = QSqrt2::from_int(1);
    let diagonal = (0..p.dim()).all(|i| {
        (0..p.dim()).all(|j| {
            let g = &out.gram[(i, j)];
            if i == j {
                g.abs() == one
            } else {
                num_is_zero(g)
            }
        })
    });
    rec.check("gram is diag(+-1)", diagonal);
    Ok(vec![rec])
}

pub fn scale(p: &LieAlgebraPreset, factor: &str) -> Result<Vec<ReportRecord>> {
    let c: QSqrt2 = factor.parse()?;
    let s = scale_metric(p, &c)?;
    let base_rep = metric::curvature(p)?;
    let inv = c.checked_inv()?;
    let mut rec = base("scale", p).input("c", &c);
    rec.exact("c", &c);
    let mut raw_ok = true;
    let mut norm_ok = true;
    for (i, j) in s.report.pairs() {
        let pair = format!("{},{}", p.labels[i], p.labels[j]);
        rec.exact(format!("k_raw({pair})"), s.report.k_raw(i, j));
        raw_ok &= s.report.k_raw(i, j) == &(base_rep.k_raw(i, j) * &c);
        match (s.report.k_normalized(i, j), base_rep.k_normalized(i, j)) {
            (Some(a), Some(b)) => {
                rec.exact(format!("K_normalized({pair})"), a);
                norm_ok &= a == &(b * &inv);
            }
            (None, None) => rec.text(
                format!("K_normalized({pair})"),
                "undefined: zero denominator",
            ),
            _ => norm_ok = false,
        }
    }
    rec.check("connection unchanged", s.connection_unchanged);
    rec.check("k_raw scales by c", raw_ok);
    rec.check("K_normalized scales by 1/c", norm_ok);
    Ok(vec![rec])
}

pub fn iwasawa(literal: &str, nak_order: bool) -> Result<Vec<ReportRecord>> {
    let m = parse_matrix_literal(literal)?;
    let f = if nak_order {
        iwasawa::nak(&m)?
    } else {
        iwasawa::kan(&m)?
    };
    let mut rec = ReportRecord::new("iwasawa")
        .input("matrix", literal)
        .input("order", if nak_order { "nak" } else { "kan" });
    matrix_results(&mut rec, "K", &f.k);
    matrix_results(&mut rec, "A", &f.a);
    matrix_results(&mut rec, "N", &f.n);
    rec.residual("reconstruction", f.reconstruction_residual(&m), 1e-10);
    rec.residual("factor constraints", f.constraint_residual(), 1e-12);
    Ok(vec![rec])
}

pub fn psi_coords(rho: Option<f64>, theta: Option<f64>, phi: Option<f64>) -> Result<PsiCoords> {
    match (rho, theta, phi) {
        (Some(r), Some(t), Some(p)) => PsiCoords::new(r, t, p),
        _ => Err(Error::InvalidArgument(
            "--rho, --theta and --phi are required".into(),
        )),
    }
}

fn coords_input(rec: ReportRecord, c: &PsiCoords) -> ReportRecord {
    rec.input("rho", c.rho)
        .input("theta", c.theta)
        .input("phi", c.phi)
}

pub fn psi_eval(c: &PsiCoords) -> Result<Vec<ReportRecord>> {
    let m = iwasawa::psi_eval(c);
    let mut rec = coords_input(ReportRecord::new("psi"), c);
    matrix_results(&mut rec, "Psi", &m);
    rec.residual("|det - 1|", (m.det()? - 1.0).abs(), 1e-12);
    rec.residual("|n a k - Psi|", iwasawa::verify_psiab(c), 1e-12);
    Ok(vec![rec])
}

pub fn psi_inverse(literal: &str) -> Result<Vec<ReportRecord>> {
    let m = parse_matrix_literal(literal)?;
    let c = iwasawa::psi_inverse(&m)?;
    let mut rec = ReportRecord::new("psi inverse").input("matrix", literal);
    rec.float("rho", c.rho);
    rec.float("theta", c.theta);
    rec.float("phi", c.phi);
    rec.residual("|Psi(inverse) - M|", iwasawa::psi_eval(&c).dist(&m), 1e-9);
    Ok(vec![rec])
}

pub fn psi_verify(samples: usize, seed: u64) -> Result<Vec<ReportRecord>> {
    Ok(vec![verify::psi_batch(samples, seed)?])
}

pub fn psi_pushforward(c: &PsiCoords, h: f64) -> Result<Vec<ReportRecord>> {
    let p = iwasawa::pushforward_frame(c, h)?;
    let mut rec = coords_input(ReportRecord::new("psi pushforward"), c).input("h", h);
    let names = ["e1bar", "e2bar", "e3bar"];
    for (v, (num, closed)) in p.numeric.iter().zip(&p.closed_form).enumerate() {
        for (k, name) in names.iter().enumerate() {
            rec.float(format!("pushed W{}[{name}]", v + 1), num[k]);
            rec.float(format!("closed W{}[{name}]", v + 1), closed[k]);
        }
    }
    rec.float("halving disagreement", p.halving_disagreement);
    rec.residual("|numeric - closed form|", p.defect, 1e-6);
    Ok(vec![rec])
}

pub fn geodesic(
    p: &LieAlgebraPreset,
    v: &str,
    t: f64,
    steps: usize,
    stride: usize,
) -> Result<Vec<ReportRecord>> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let v0 = parse_floats(v, Some(p.dim()), "v")?;
    let sys = GeodesicSystem::new(p)?;
    let traj = sys.integrate(&v0, t, steps)?;
    let mut records = Vec::new();
    for (n, s) in traj.iter().enumerate() {
        if n % stride != 0 && n != steps {
            continue;
        }
        let mut rec = base("geodesic sample", p).input("step", n);
        rec.float("t", s.t);
        matrix_results(&mut rec, "g", &s.g);
        for (k, x) in s.v.iter().enumerate() {
            rec.float(format!("v[{}]", p.labels[k]), *x);
        }
        records.push(rec);
    }
    let mut summary = base("geodesic", p)
        .input("v", v)
        .input("t", t)
        .input("steps", steps);
    summary.float("energy", sys.energy(&v0));
    summary.residual("energy drift", energy_drift(&sys, &traj), 1e-10);
    records.push(summary);
    Ok(records)
}

pub fn goedel_components(point: &str, a: f64) -> Result<Vec<ReportRecord>> {
    let x = parse_point(point)?;
    let g = goedel::metric_at(&x, a)?;
    let mut rec = ReportRecord::new("goedel components")
        .input("point", point)
        .input("a", a);
    matrix_results(&mut rec, "g", &g);
    let sig = goedel::signature_at(&x, a)?;
    rec.text("signature", format!("({},{})", sig.0, sig.1));
    rec.check("signature (1,3)", sig == (1, 3));
    Ok(vec![rec])
}

pub fn goedel_pullback(
    params: Option<&str>,
    samples: usize,
    seed: u64,
    a: f64,
    fd: bool,
) -> Result<Vec<ReportRecord>> {
    goedel::MetricField::new(a)?;
    let fixed = match params {
        Some(s) => {
            let v = parse_floats(s, Some(4), "params")?;
            Some(ActionParams {
                a: v[0],
                b: v[1],
                c: v[2],
                d: v[3],
            })
        }
        None => None,
    };
    let mode = if fd {
        JacobianMode::FiniteDifference
    } else {
        JacobianMode::Analytic
    };
    let mut rng = seeded(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p = fixed.unwrap_or_else(|| ActionParams::sample(&mut rng));
        let x = goedel::sample_point(&mut rng);
        worst = worst.max(goedel::pullback_residual(&p, &x, a, mode)?);
    }
    let mut rec = ReportRecord::new("goedel pullback-check")
        .input("params", params.unwrap_or("random"))
        .input("samples", samples)
        .input("a", a)
        .input(
            "jacobian",
            if fd { "finite-difference" } else { "analytic" },
        )
        .seed(seed);
    rec.residual(
        "max pullback residual",
        worst,
        if fd { 1e-6 } else { 1e-12 },
    );
    Ok(vec![rec])
}

pub fn goedel_christoffel(point: &str, a: f64) -> Result<Vec<ReportRecord>> {
    let x = parse_point(point)?;
    let exact = goedel::christoffel_at(&x, a)?;
    let fd = goedel::christoffel_fd(&x, a, 1e-5)?;
    let mut rec = ReportRecord::new("goedel christoffel")
        .input("point", point)
        .input("a", a);
    for k in 0..4 {
        for i in 0..4 {
            for j in i..4 {
                let g = exact.gamma[k][i][j];
                if g != 0.0 {
                    rec.float(format!("Gamma^{k}_{i}{j}"), g);
                }
            }
        }
    }
    rec.residual("finite-difference deviation", exact.max_dist(&fd), 1e-6);
    rec.check("symmetric in lower indices", exact.is_symmetric());
    Ok(vec![rec])
}

pub fn maps_check(pairs: usize, seed: u64) -> Result<Vec<ReportRecord>> {
    let mut rec = ReportRecord::new("maps check")
        .input("pairs", pairs)
        .seed(seed);
    let mut rng = seeded(seed);
    for order in [SolOrder::AN, SolOrder::NA] {
        let r = hom_residual(|m| psi_on_sol2(m, order), sample_sol2, pairs, &mut rng)?;
        rec.residual(format!("psi {order:?}"), r, 1e-12);
        let r = hom_residual(
            |m| psi_extended_block(m, order),
            sample_line_times_sol2,
            pairs,
            &mut rng,
        )?;
        rec.residual(format!("psi {order:?} on R x Sol(2)"), r, 1e-12);
    }
    rec.residual(
        "covering F",
        hom_residual(covering_f_block, sample_affr3, pairs, &mut rng)?,
        1e-12,
    );
    let red = |m: &Matrix| reduce_4to3(m).map(|g| g.rows);
    let sample = |r: &mut SeededRng| sr_element4(sample_sr_coords(r));
    rec.residual(
        "reduce 4->3",
        hom_residual(red, sample, pairs, &mut rng)?,
        1e-12,
    );
    let (a, b) = covering_f(0.0, 0.0, std::f64::consts::TAU);
    let id = Matrix::identity(2);
    rec.residual(
        "F(0,0,2pi) = (I,I)",
        a.rows.dist(&id).max(b.rows.dist(&id)),
        1e-12,
    );
    Ok(vec![rec])
}

pub fn verify_all(seed: u64) -> Vec<ReportRecord> {
    let outcomes = verify::verify_all(seed);
    let mut records = Vec::new();
    let mut summary = ReportRecord::new("verify-all").seed(seed);
    for o in outcomes {
        let pass = o.pass();
        for r in o.records {
            records.push(r.input("criterion", o.id));
        }
        summary.check(format!("{}: {}", o.id, o.title), pass);
    }
    records.push(summary);
    records
}
