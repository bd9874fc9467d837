use std::fs;
use std::sync::Arc;

use opstar::algebra::{groups, validate_seeded, AlgebraElement, StarAlgebra};
use opstar::evolution::{cayley, cayley_diagnostics, generator_check, unitary_group, DEFAULT_STEPS, ONE_GAP};
use opstar::gelfand::{bochner_measure, characters, discontinuous_character_demo, gelfand_transform, wiener_inverse};
use opstar::gelfand::{FourierElement, WienerResult};
use opstar::io::{parse_algebra, parse_element, parse_functional, parse_matrix};
use opstar::linalg::{eigenvalues, hausdorff, op_norm, vec_norm, CMatrix, C64, ONE, ZERO};
use opstar::positivity::{is_positive, parts_residuals, polar, pos_neg_parts};
use opstar::random;
use opstar::report::Check;
use opstar::spectral::{
    atoms_are_eigenvalues, bicommutant_check, commutant, fuglede_check, resolution_of_normal, resolution_report,
    spectral_integral,
};
use opstar::spectrum::{ptak, spectral_radius, spectral_radius_limit, spectrum};
use opstar::states::{gns, is_positive_functional, is_pure, universal_norm_check, EnvelopingSeminorm};
use opstar::{Error, Result};

use crate::report::{fmt_complex, fmt_real, Inputs, RunReport, Table};

/// Settings shared by every command.
pub struct Ctx {
    pub tol: f64,
    pub seed: u64,
    pub inputs: Inputs,
}

impl Ctx {
    pub fn new(tol: f64, seed: u64) -> Self {
        Ctx { tol, seed, inputs: Inputs::default() }
    }

    fn read(&mut self, label: &str, path: &str) -> Result<String> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        self.inputs.add(label, &text);
        Ok(text)
    }

    fn arg(&mut self, label: &str, value: &str) {
        self.inputs.add(label, value);
    }

    fn algebra(&mut self, path: &str) -> Result<Arc<StarAlgebra>> {
        let text = self.read("algebra", path)?;
        parse_algebra(&text, self.tol)
    }

    /// `@file` reads a matrix of the realisation; no argument picks the
    /// first generator of a matrix algebra.
    fn element(&mut self, alg: &Arc<StarAlgebra>, text: Option<&str>) -> Result<AlgebraElement> {
        match text {
            Some(t) if t.starts_with('@') => {
                let m = parse_matrix(&self.read("element", &t[1..])?)?;
                AlgebraElement::from_matrix(alg, &m)
            }
            Some(t) => {
                self.arg("element", t);
                parse_element(t, alg)
            }
            None => match alg.generators().first() {
                Some(g) => AlgebraElement::from_matrix(alg, g),
                None => Err(Error::Parse("this algebra needs an explicit element".into())),
            },
        }
    }

    fn report(&self, command: &str) -> RunReport {
        RunReport::new(command, &self.inputs, self.seed, self.tol)
    }
}

/// Matrix rows for algebras given by generators, coefficients otherwise.
fn element_table(title: &str, alg: &StarAlgebra, a: &AlgebraElement) -> Result<Table> {
    if !alg.generators().is_empty() {
        let m = a.realize()?;
        let mut headers = vec!["row".to_string()];
        headers.extend((0..m.cols()).map(|j| format!("col {j}")));
        let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
        let mut t = Table::new(title, &headers);
        for i in 0..m.rows() {
            let mut cells = vec![i.to_string()];
            cells.extend(m.row(i).iter().map(|z| fmt_complex(*z)));
            t.row(cells);
        }
        return Ok(t);
    }
    let mut t = Table::new(title, &["basis", "coefficient"]);
    for (label, z) in alg.labels().iter().zip(a.coeffs()) {
        if *z != ZERO {
            t.row(vec![label.clone(), fmt_complex(*z)]);
        }
    }
    Ok(t)
}

pub fn validate(ctx: &mut Ctx, path: &str) -> Result<RunReport> {
    let alg = ctx.algebra(path)?;
    let mut r = ctx.report("validate");
    r.info("dimension", alg.dim());
    r.info("basis", alg.labels().join(" "));
    r.info("unital", if alg.is_unital() { "yes" } else { "no" });
    r.info("commutative", if alg.is_commutative(ctx.tol) { "yes" } else { "no" });
    r.checks(&validate_seeded(&alg, ctx.seed));
    Ok(r)
}

pub fn spectrum_cmd(ctx: &mut Ctx, path: &str, element: Option<&str>, limit: u64) -> Result<RunReport> {
    let alg = ctx.algebra(path)?;
    ctx.arg("limit", &limit.to_string());
    let a = ctx.element(&alg, element)?;
    let sp = spectrum(&a)?;
    let r = spectral_radius(&a)?;
    let lim = spectral_radius_limit(&a, limit)?;
    let rs = ptak(&a)?;
    let mut rep = ctx.report("spectrum");
    rep.info("spectrum", sp.points.clone());
    rep.info("norm", a.norm());
    rep.info("r_lambda (eigenvalues)", r);
    rep.info("r_lambda (power limit)", lim.value);
    rep.info("r_sigma", rs);
    let slack = ctx.tol * (1.0 + r);
    rep.check(Check::at_most("| max|sp| - r_lambda |", (sp.max_modulus() - r).abs(), slack));
    rep.check(Check::at_least("power limit - r_lambda", lim.value - r, -slack));
    let mut t = Table::new("power norms", &["n", "|a^n|^(1/n)"]);
    for (n, v) in &lim.trace {
        t.row(vec![n.to_string(), fmt_real(*v)]);
    }
    rep.table(t);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PositivityMode {
    Sqrt,
    Polar,
    Parts,
}

pub fn positivity(ctx: &mut Ctx, path: &str, element: Option<&str>, mode: PositivityMode) -> Result<RunReport> {
    let alg = ctx.algebra(path)?;
    ctx.arg("mode", &format!("{mode:?}"));
    let a = ctx.element(&alg, element)?;
    let mut rep = ctx.report("positivity");
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let tol = ctx.tol;
    match mode {
        PositivityMode::Sqrt => {
            let v = is_positive(&a, tol)?;
            rep.info("min spectral point", v.min_point);
            rep.check(Check::at_least("min spectral point", v.min_point, -tol * scale));
            if let Some(root) = v.witness {
                let residual = root.mul(&root)?.minus(&a)?.norm();
                rep.check(Check::at_most("|r^2 - a| / |a|", residual / scale, tol));
                rep.check(Check::at_most("r hermitian", root.hermitian_residual(), tol * scale));
                let min_root = is_positive(&root, tol)?.min_point;
                rep.check(Check::at_least("min spectral point of r", min_root, -tol * scale.sqrt()));
                rep.table(element_table("square root", &alg, &root)?);
            }
        }
        PositivityMode::Polar => {
            let p = polar(&a)?;
            let recon = p.unitary_part.mul(&p.positive_part)?.minus(&a)?.norm();
            rep.check(Check::at_most("|u|a| - a| / |a|", recon / scale, tol));
            let abs_sq = p.positive_part.mul(&p.positive_part)?;
            let asa = a.adjoint().mul(&a)?;
            rep.check(Check::at_most("||a|^2 - a*a| / |a|^2", abs_sq.minus(&asa)?.norm() / (scale * scale), tol));
            if let Ok(e) = AlgebraElement::unit(&alg) {
                let u = &p.unitary_part;
                rep.check(Check::at_most("|u*u - e|", u.adjoint().mul(u)?.minus(&e)?.norm(), tol));
            }
            rep.check(Check::at_least(
                "min spectral point of |a|",
                is_positive(&p.positive_part, tol)?.min_point,
                -tol * scale,
            ));
            rep.table(element_table("unitary part", &alg, &p.unitary_part)?);
            rep.table(element_table("absolute value", &alg, &p.positive_part)?);
        }
        PositivityMode::Parts => {
            let (plus, minus) = pos_neg_parts(&a, tol)?;
            let res = parts_residuals(&a, &plus, &minus, tol)?;
            rep.check(Check::at_most("|a+ - a- - a| / |a|", res.reconstruction / scale, tol));
            rep.check(Check::at_most("|a+ a-| / |a|", res.product / scale, tol));
            rep.check(Check::at_least("min spectral point of a+", res.min_plus, -tol * scale));
            rep.check(Check::at_least("min spectral point of a-", res.min_minus, -tol * scale));
            rep.table(element_table("positive part", &alg, &plus)?);
            rep.table(element_table("negative part", &alg, &minus)?);
        }
    }
    Ok(rep)
}

pub fn gelfand(ctx: &mut Ctx, path: &str, bochner: Option<&str>) -> Result<RunReport> {
    let alg = ctx.algebra(path)?;
    let cs = characters(&alg, ctx.seed)?;
    let mut rep = ctx.report("gelfand");
    rep.info("characters", cs.len());
    rep.info("all hermitian", if cs.all_hermitian() { "yes" } else { "no" });

    let mut headers = vec!["character"];
    headers.extend(alg.labels().iter().map(String::as_str));
    let mut t = Table::new("character table", &headers);
    for (j, row) in cs.characters.iter().enumerate() {
        let mut cells = vec![format!("tau{j}")];
        cells.extend(row.iter().map(|z| fmt_complex(*z)));
        t.row(cells);
    }
    rep.table(t);

    let mut worst: f64 = 0.0;
    let mut check_one = |a: &AlgebraElement| -> Result<()> {
        let hat = gelfand_transform(a, &cs)?;
        let sup = hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let r = spectral_radius(a)?;
        worst = worst.max((sup - r).abs() / (1.0 + r));
        Ok(())
    };
    for i in 0..alg.dim() {
        check_one(&AlgebraElement::basis(&alg, i))?;
    }
    let sample = random::element(&mut random::rng(ctx.seed), &alg);
    check_one(&sample)?;
    rep.check(Check::at_most("| |a^|_inf - r_lambda(a) | / (1 + r)", worst, 1e-8));

    if let Some(file) = bochner {
        let text = ctx.read("state", file)?;
        let psi = parse_functional(&text, &alg)?;
        let mu = bochner_measure(&psi, &cs, ctx.tol)?;
        let mut back = vec![ZERO; alg.dim()];
        for (w, row) in mu.iter().zip(&cs.characters) {
            for (b, z) in back.iter_mut().zip(row) {
                *b += z * *w;
            }
        }
        let diff: Vec<C64> = back.iter().zip(psi.row()).map(|(a, b)| a - b).collect();
        rep.info("bochner weights", mu.clone());
        rep.check(Check::at_most("|sum mu tau - psi|", vec_norm(&diff), ctx.tol * (1.0 + vec_norm(psi.row()))));
        rep.check(Check::at_most("|sum mu - 1|", (mu.iter().sum::<f64>() - 1.0).abs(), ctx.tol));
    }
    Ok(rep)
}

fn wiener_report(rep: &mut RunReport, w: &WienerResult) {
    rep.info("g(0)", w.inverse.get(0));
    rep.info("min |f|", w.min_abs);
    rep.info("|g|_1", *w.partial_sums.last().unwrap_or(&0.0));
    rep.check(Check::at_most("max |f g - 1| on grid", w.max_pointwise_residual, 1e-6));
    rep.check(Check::at_most("tail l1 beyond n_out", w.tail_l1, 1e-6));
    rep.check(Check::at_most("|f * g - delta0|_1", w.convolution_residual, 1e-6));
    let mut t = Table::new("inverse coefficients", &["k", "g(k)"]);
    for (k, z) in &w.inverse.coeffs {
        if k.abs() <= 5 {
            t.row(vec![k.to_string(), fmt_complex(*z)]);
        }
    }
    rep.table(t);
}

pub fn wiener(ctx: &mut Ctx, path: &str, n_out: usize) -> Result<RunReport> {
    let text = ctx.read("coefficients", path)?;
    ctx.arg("n_out", &n_out.to_string());
    let f = FourierElement::parse(&text)?;
    let w = wiener_inverse(&f, n_out, ctx.tol)?;
    let mut rep = ctx.report("wiener");
    wiener_report(&mut rep, &w);
    rep.info("coefficients", w.inverse.coeffs.values().copied().collect::<Vec<C64>>());
    Ok(rep)
}

pub fn gns_cmd(ctx: &mut Ctx, path: &str, functional: &str) -> Result<RunReport> {
    let alg = ctx.algebra(path)?;
    let text = ctx.read("functional", functional)?;
    let phi = parse_functional(&text, &alg)?;
    let tol = ctx.tol;
    let mut rep = ctx.report("gns");
    let scale = 1.0 + phi.gram()?.frobenius_norm();
    let pos = is_positive_functional(&phi, tol)?;
    rep.check(Check::at_least("min Gram eigenvalue", pos.min_eigenvalue, -tol * scale));
    rep.check(Check::at_most("Gram hermitian residual", pos.gram_hermitian_residual, tol * scale));
    if !pos.positive {
        return Ok(rep);
    }
    let g = gns(&phi, tol)?;
    let row_scale = 1.0 + phi.row().iter().map(|z| z.norm()).sum::<f64>();
    rep.info("dim H", g.rep.space_dim());
    rep.info("gram rank", g.gram_rank);
    rep.info("variation", g.variation);
    rep.info("cyclic vector", g.cyclic_vector.clone());
    rep.check(Check::at_most("reconstruction residual", g.reconstruction_residual, tol * row_scale));
    let c2 = vec_norm(&g.cyclic_vector).powi(2);
    rep.check(Check::at_most("| |c|^2 - v |", (c2 - g.variation).abs(), tol * (1.0 + g.variation)));
    rep.check(Check::at_most("homomorphism residual", g.rep.hom_residual(), tol * row_scale));
    rep.check(Check::at_most("star residual", g.rep.star_residual(), tol * row_scale));
    if g.variation > tol {
        let p = is_pure(&phi.scale(C64::new(1.0 / g.variation, 0.0)), tol)?;
        rep.info("pure", if p.pure { "yes" } else { "no" });
        rep.info("commutant dimension", p.commutant_dim);
    }
    Ok(rep)
}

/// One matrix, or a JSON list of matrices.
fn matrices(text: &str) -> Result<Vec<CMatrix>> {
    if let Ok(m) = parse_matrix(text) {
        return Ok(vec![m]);
    }
    let list: Vec<CMatrix> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("expected a matrix or a list of matrices: {e}")))?;
    if list.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    Ok(list)
}

fn scalar_fn(name: &str) -> Option<fn(C64) -> Option<C64>> {
    let f: fn(C64) -> Option<C64> = match name {
        "exp" => |z| Some(z.exp()),
        "sqrt" => |z| Some(z.sqrt()),
        "abs" => |z| Some(C64::new(z.norm(), 0.0)),
        "conj" => |z| Some(z.conj()),
        "re" => |z| Some(C64::new(z.re, 0.0)),
        "im" => |z| Some(C64::new(z.im, 0.0)),
        "square" => |z| Some(z * z),
        "inv" => |z| (z != ZERO).then(|| ONE / z),
        "sign" => |z| Some(C64::new(if z.re > 0.0 { 1.0 } else if z.re < 0.0 { -1.0 } else { 0.0 }, 0.0)),
        _ => return None,
    };
    Some(f)
}

pub const CALCULUS_FNS: &str = "exp, sqrt, abs, conj, re, im, square, inv, sign";

pub fn spectral(ctx: &mut Ctx, path: &str, mode: &str) -> Result<RunReport> {
    let text = ctx.read("matrix", path)?;
    ctx.arg("mode", mode);
    let ms = matrices(&text)?;
    let tol = ctx.tol;
    let mut rep = ctx.report("spectral");
    let b = &ms[0];
    match mode {
        "resolution" => {
            let p = resolution_of_normal(b, tol)?;
            let mut t = Table::new("spectral resolution", &["point", "rank"]);
            for (z, q) in p.points.iter().zip(&p.projections) {
                t.row(vec![fmt_complex(*z), fmt_real(q.trace().re.round())]);
            }
            rep.table(t);
            rep.info("atoms", p.points.clone());
            for (k, q) in p.projections.iter().enumerate() {
                rep.info(format!("P{k}"), q.clone());
            }
            rep.checks(&p.validate(ctx.seed, tol));
            rep.checks(&resolution_report(b, &p, tol)?);
            rep.checks(&atoms_are_eigenvalues(b, tol)?);
        }
        "commutant" => {
            let c = commutant(&ms, tol)?;
            rep.info("dimension", c.dim());
            rep.info("star stable", if c.star_stable { "yes" } else { "no" });
            let scale = ms.iter().map(op_norm).fold(0.0, f64::max);
            let mut worst: f64 = 0.0;
            for x in &c.basis {
                for m in &ms {
                    worst = worst.max(op_norm(&x.commutator(m))).max(op_norm(&x.commutator(&m.adjoint())));
                }
            }
            rep.check(Check::at_most("max |[X, S]| over the basis", worst, tol * (1.0 + scale)));
            for (k, x) in c.basis.iter().enumerate() {
                rep.info(format!("X{k}"), x.clone());
            }
        }
        "bicommutant" => rep.checks(&bicommutant_check(&ms, tol)?),
        "fuglede" => {
            let n2 = ms.get(1).unwrap_or(b);
            rep.checks(&fuglede_check(b, n2, tol)?);
        }
        m if m.starts_with("calculus:") => {
            let name = &m["calculus:".len()..];
            let f = scalar_fn(name)
                .ok_or_else(|| Error::Parse(format!("unknown function `{name}` (expected one of {CALCULUS_FNS})")))?;
            let p = resolution_of_normal(b, tol)?;
            let fb = spectral_integral(&p, |z| f(*z))?;
            let mapped: Vec<C64> = p.points.iter().filter_map(|z| f(*z)).collect();
            let fsp = eigenvalues(&fb)?;
            let top = mapped.iter().map(|z| z.norm()).fold(0.0, f64::max);
            rep.info("f(b)", fb.clone());
            rep.info("f(sp b)", mapped.clone());
            rep.check(Check::at_most("hausdorff(sp f(b), f(sp b))", hausdorff(&fsp, &mapped), 1e-7 * (1.0 + top)));
            let comm = op_norm(&fb.commutator(b));
            rep.check(Check::at_most("|[f(b), b]|", comm, tol * (1.0 + op_norm(b)) * (1.0 + op_norm(&fb))));
            rep.check(Check::at_most("f(b) normal", fb.normal_residual(), tol * (1.0 + top * top)));
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown mode `{other}` (expected resolution, calculus:f, commutant, bicommutant or fuglede)"
            )))
        }
    }
    Ok(rep)
}

pub fn evolve(ctx: &mut Ctx, path: &str, times: &[f64], check_generator: bool) -> Result<RunReport> {
    let text = ctx.read("matrix", path)?;
    ctx.arg("times", &format!("{times:?}"));
    ctx.arg("check_generator", if check_generator { "1" } else { "0" });
    let a = parse_matrix(&text)?;
    let tol = ctx.tol;
    let u = cayley(&a, tol)?;
    let d = cayley_diagnostics(&a, &u)?;
    let mut rep = ctx.report("evolve");
    let norm = op_norm(&a);
    rep.info("cayley transform", u.clone());
    rep.check(Check::at_most("cayley unitary residual", d.unitary_residual, tol));
    rep.check(Check::at_most("cayley spectral mapping", d.spectral_mapping, tol * (1.0 + norm)));
    rep.check(Check::at_most("cayley | |nu| - 1 |", d.off_circle, tol));
    rep.check(Check::at_least("cayley distance from 1 to spectrum", d.gap_to_one, ONE_GAP));

    let path = unitary_group(&a, tol)?;
    let x = random::unit_vector(&mut random::rng(ctx.seed), a.rows());
    let span = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    rep.check(Check::at_most("unitarity residual", path.unitarity_residual(times), tol));
    rep.check(Check::at_most("group law residual", path.group_law_residual(times), tol * (1.0 + norm * span)));
    rep.check(Check::at_most("energy drift", path.energy_drift(&x, times), tol));
    let h = 1e-3;
    let bound = h * h * norm.powi(3) / 6.0 + 1e-10;
    rep.check(Check::at_most("schrodinger residual (h=1e-3)", path.schrodinger_residual(&x, times, h), bound));
    for &t in times {
        rep.info(format!("U({})", fmt_real(t)), path.at(t));
    }
    if check_generator {
        let g = generator_check(&path, &x, &DEFAULT_STEPS);
        let mut t = Table::new("generator recovery", &["h", "error", "bound"]);
        for r in &g.rows {
            t.row(vec![format!("{:e}", r.h), format!("{:.3e}", r.error), format!("{:.3e}", r.bound)]);
        }
        rep.table(t);
        rep.checks(&g.report);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Demo {
    Counterexample,
    Wiener,
    Raikov,
}

pub fn demo(ctx: &mut Ctx, which: Demo, n_max: u32) -> Result<RunReport> {
    ctx.arg("demo", &format!("{which:?}"));
    match which {
        Demo::Counterexample => {
            ctx.arg("n_max", &n_max.to_string());
            let gamma = 2.0;
            let c = discontinuous_character_demo(gamma, n_max, ctx.seed)?;
            let mut rep = ctx.report("demo counterexample");
            let mut t = Table::new(
                format!("characters of the weighted ring, gamma = {}", fmt_real(gamma)),
                &["n", "|d(-n)|", "|tau(d(-n))|", "ratio"],
            );
            for r in &c.rows {
                t.row(vec![r.n.to_string(), fmt_real(r.norm), fmt_real(r.character_abs), fmt_real(r.ratio)]);
            }
            rep.table(t);
            rep.info("gamma", gamma);
            rep.info("|d(-n)|", c.rows.iter().map(|r| r.norm).collect::<Vec<f64>>());
            rep.info("|tau(d(-n))|", c.rows.iter().map(|r| r.character_abs).collect::<Vec<f64>>());
            rep.info("max |tau(h)|/|h| over hermitian h", c.hermitian_max_ratio);
            rep.info("|d1 + d-1|", c.reference_norm);
            rep.info("max |tau(d1 + d-1)|", c.reference_character_abs);
            rep.checks(&c.checks);
            Ok(rep)
        }
        Demo::Wiener => {
            // f(t) = 2 + cos t; 1/f has coefficients (√3 − 2)^|k| / √3
            let f = FourierElement::from_pairs(&[(0, C64::new(2.0, 0.0)), (1, C64::new(0.5, 0.0)), (-1, C64::new(0.5, 0.0))])?;
            let n_out = 64;
            let w = wiener_inverse(&f, n_out, ctx.tol)?;
            let mut rep = ctx.report("demo wiener");
            wiener_report(&mut rep, &w);
            let s3 = 3f64.sqrt();
            let exact = |k: i64| (s3 - 2.0).powi(k.abs() as i32) / s3;
            let err = w.inverse.coeffs.iter().map(|(&k, z)| (z - exact(k)).norm()).fold(0.0, f64::max);
            rep.check(Check::at_most("|g(0) - 1/sqrt 3|", (w.inverse.get(0) - 1.0 / s3).norm(), 1e-8));
            rep.check(Check::at_most("max_k |g(k) - closed form|", err, 1e-8));
            Ok(rep)
        }
        Demo::Raikov => {
            let mut rep = ctx.report("demo raikov");
            let samples = 200;
            for (name, alg) in [("Z2", groups::cyclic(2)), ("Z4", groups::cyclic(4)), ("S3", groups::symmetric(3))] {
                let mut r = universal_norm_check(&alg, samples, ctx.seed, 1e-8)?;
                r.title = format!("C[{name}]");
                rep.checks(&r);
            }
            for n in [2, 3] {
                let alg = StarAlgebra::full_matrix(n);
                let semi = EnvelopingSeminorm::new(&alg, ctx.seed)?;
                let mut rng = random::rng(ctx.seed);
                let mut worst: f64 = 0.0;
                for _ in 0..20 {
                    let a = random::element(&mut rng, &alg);
                    let v = semi.eval(&a, 0)?.value;
                    worst = worst.max((v - a.norm()).abs() / a.norm());
                }
                rep.check(Check::at_most(format!("M{n}: | |a|_o - |a| | / |a|"), worst, 1e-9));
            }
            Ok(rep)
        }
    }
}
