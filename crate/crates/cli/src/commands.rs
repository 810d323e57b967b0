use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use lrn_core::classifier::{classify, enumerate_stabilizer_states, loop_entropies};
use lrn_core::ground_space::{from_logical, tc_logical_to_mes};
use lrn_core::lattice::{
    encode, mutual_information_lattice, shallow_circuit_invariance_test, verify_block_factorization,
    CircuitMode, EdgeRegion, TorusLattice,
};
use lrn_core::modular_group::{
    fibonacci_w_state, omega_sweep, orbit, projective_closure, restricted_matrices, DEFAULT_CAP,
};
use lrn_core::numerics::is_integer;
use lrn_core::{
    diagnose_lrn, modular_group, AnyonModel, ComplexVec4, GroundState, Letter, Loop, LoopLabel, ModelKind,
    ModularWord, RngSeed, TolerancePolicy, C64,
};
use serde_json::{json, Value};

use crate::amplitudes::{normalize_with_warning, parse_amplitudes, parse_columns, parse_state_or_preset};
use crate::args::{
    ClassifyArgs, EnumerateArgs, Family, GroupArgs, InvarianceArgs, LatticeArgs, LatticeRegionArgs,
    ModelArgs, OrbitArgs, SweepArgs,
};
use crate::error::{compute, input, CliError};

/// What a command produced, before formatting.
pub enum Payload {
    Json(Value),
    /// Header plus rows, usable as CSV or as a JSON list of records.
    Table { header: Vec<String>, rows: Vec<Vec<String>> },
}

pub struct Ctx<'a> {
    pub tol: TolerancePolicy,
    pub seed: RngSeed,
    pub warnings: &'a mut Vec<String>,
}

impl Ctx<'_> {
    fn unit(&mut self, v: ComplexVec4) -> Result<ComplexVec4, CliError> {
        let (u, w) = normalize_with_warning(v, self.tol.tol_norm)?;
        self.warnings.extend(w);
        Ok(u)
    }
}

fn fmt_f64(x: f64) -> String {
    // shortest round-trip representation
    format!("{x:?}")
}

pub fn cmd_classify(a: &ClassifyArgs, ctx: &mut Ctx) -> Result<Payload, CliError> {
    let model = AnyonModel::get(a.model);
    let tc = a.model == ModelKind::ToricCode;
    let (state, logical) = match (&a.alphas, &a.mes_coeffs) {
        (Some(s), None) => {
            if !tc {
                return Err(input("--alphas are toric-code logical amplitudes; use --mes-coeffs for dfib"));
            }
            let v = ctx.unit(parse_amplitudes(s)?)?;
            (from_logical(model, &v, ctx.tol.tol_norm).map_err(compute)?, Some(v))
        }
        (None, Some(s)) => {
            let basis: ModularWord = a.basis.parse().map_err(|e| input(format!("--basis: {e}")))?;
            let v = ctx.unit(parse_amplitudes(s)?)?;
            let gs = GroundState::new(a.model, basis, v, ctx.tol.tol_norm).map_err(compute)?;
            let logical = tc.then(|| tc_logical_to_mes().adjoint().apply(&gs.gamma_y_coeffs()));
            (gs, logical)
        }
        _ => return Err(input("give exactly one of --alphas or --mes-coeffs")),
    };
    let report = match a.max_word_len {
        Some(n) => diagnose_lrn(&state, n, None, &ctx.tol),
        None => {
            let g = modular_group(model).map_err(compute)?;
            diagnose_lrn(&state, 0, Some(&g), &ctx.tol)
        }
    }
    .map_err(compute)?;
    let classification = match logical {
        Some(l) => {
            let set = enumerate_stabilizer_states().map_err(compute)?;
            Some(classify(&l, &set, &ctx.tol).map_err(compute)?)
        }
        None => None,
    };
    Ok(Payload::Json(json!({
        "model": a.model,
        "basis": state.basis().symbols(),
        "gamma_y_coeffs": state.gamma_y_coeffs(),
        "lrn": report,
        "classification": classification,
    })))
}

fn parse_loops(s: &str) -> Result<Vec<(String, LoopLabel)>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<Loop>() {
            Ok(l) => Ok((l.name().to_string(), LoopLabel::Named(l))),
            Err(_) => {
                let w: ModularWord = t.parse().map_err(|e| input(format!("--loops: {e}")))?;
                let name = if w.is_empty() { "e".to_string() } else { w.symbols().concat() };
                Ok((name, LoopLabel::Word(w)))
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(input("--loops is empty"))
            } else {
                Ok(v)
            }
        })
}

pub fn cmd_sweep(a: &SweepArgs, ctx: &mut Ctx) -> Result<Payload, CliError> {
    if a.steps < 2 {
        return Err(input("--steps must be at least 2"));
    }
    if a.first >= 4 || a.second >= 4 || a.first == a.second {
        return Err(input("--first and --second must be distinct indices in 0..4"));
    }
    let loops = parse_loops(&a.loops)?;
    let start = a.start.unwrap_or(0.0);
    let stop = a.stop.unwrap_or(match a.family {
        Family::TPhase => 2.0 * PI,
        Family::TwoAmplitude => FRAC_PI_2,
    });
    if !(start.is_finite() && stop.is_finite()) {
        return Err(input("--start and --stop must be finite"));
    }
    let model = AnyonModel::get(a.model);
    let param = match a.family {
        Family::TPhase => "phase",
        Family::TwoAmplitude => "theta",
    };
    let mut header = vec![param.to_string()];
    for (name, _) in &loops {
        header.push(format!("I_{name}"));
        header.push(format!("int_{name}"));
    }
    let mut rows = Vec::with_capacity(a.steps);
    for k in 0..a.steps {
        let x = start + (stop - start) * k as f64 / (a.steps - 1) as f64;
        let mut c = [C64::new(0.0, 0.0); 4];
        match a.family {
            Family::TPhase => {
                c[a.first] = C64::new(FRAC_1_SQRT_2, 0.0);
                c[a.second] = C64::from_polar(FRAC_1_SQRT_2, x);
            }
            Family::TwoAmplitude => {
                c[a.first] = C64::new(x.cos(), 0.0);
                c[a.second] = C64::new(x.sin(), 0.0);
            }
        }
        let v = ComplexVec4::new(c);
        let gs = match a.model {
            ModelKind::ToricCode => from_logical(model, &v, ctx.tol.tol_norm),
            ModelKind::DoubledFibonacci => GroundState::in_gamma_y(a.model, v, ctx.tol.tol_norm),
        }
        .map_err(compute)?;
        let mut row = vec![fmt_f64(x)];
        for (_, l) in &loops {
            let h = gs.mutual_information(l.clone());
            row.push(fmt_f64(h));
            row.push(is_integer(h, ctx.tol.tol_integer).is_integer.to_string());
        }
        rows.push(row);
    }
    Ok(Payload::Table { header, rows })
}

pub fn cmd_group(a: &GroupArgs, ctx: &mut Ctx) -> Result<Payload, CliError> {
    let g = if a.restricted {
        if a.model != ModelKind::DoubledFibonacci {
            return Err(input("--restricted is only defined for dfib"));
        }
        let (s, t) = restricted_matrices(ctx.tol.tol_unitary).map_err(compute)?;
        projective_closure(&[(Letter::S, s), (Letter::T, t)], DEFAULT_CAP).map_err(compute)?
    } else {
        modular_group(AnyonModel::get(a.model)).map_err(compute)?
    };
    let mut v = serde_json::to_value(g.summary(a.words, a.dump_matrices))?;
    v["model"] = json!(a.model);
    v["restricted"] = json!(a.restricted);
    v["axioms_hold"] = json!(g.verify_axioms().all());
    Ok(Payload::Json(v))
}

fn parse_omega(s: &str) -> Result<Option<C64>, CliError> {
    let root = |k: u32| C64::from_polar(1.0, 2.0 * PI * k as f64 / 6.0);
    match s.trim() {
        "all" => Ok(None),
        "primitive" => Ok(Some(root(1))),
        t => {
            if let Ok(k) = t.parse::<u32>() {
                return if k < 6 {
                    Ok(Some(root(k)))
                } else {
                    Err(input("--omega root index must be in 0..6"))
                };
            }
            let parts: Vec<f64> = t
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| input(format!("--omega `{t}` is not primitive, all, k or re,im")))?;
            match parts.as_slice() {
                [re, im] if re.is_finite() && im.is_finite() && (re * re + im * im) > 0.0 => {
                    Ok(Some(C64::new(*re, *im)))
                }
                _ => Err(input(format!("--omega `{t}` is not primitive, all, k or re,im"))),
            }
        }
    }
}

pub fn cmd_orbit(a: &OrbitArgs, ctx: &mut Ctx) -> Result<Payload, CliError> {
    let g = modular_group(AnyonModel::get(a.model)).map_err(compute)?;
    let start = if a.state.trim() == "w" {
        if a.model != ModelKind::DoubledFibonacci {
            return Err(input("the w state is defined for dfib"));
        }
        match parse_omega(&a.omega)? {
            None => {
                let sweep = omega_sweep(&g, ctx.tol.tol_integer).map_err(compute)?;
                return Ok(Payload::Json(json!({ "omega_sweep": sweep })));
            }
            Some(w) => fibonacci_w_state(w),
        }
    } else {
        parse_amplitudes(&a.state)?
    };
    let start = ctx.unit(start)?;
    let orb = orbit(&start, &g, ctx.tol.tol_integer).map_err(compute)?;
    let words: Vec<Vec<&str>> = orb.words.iter().map(ModularWord::symbols).collect();
    Ok(Payload::Json(json!({
        "state": start,
        "size": orb.size,
        "all_integer_entropy": orb.all_integer_entropy,
        "states": orb.states,
        "words": words,
        "entropies": orb.entropies,
    })))
}

struct LatticeSetup {
    lat: TorusLattice,
    a: EdgeRegion,
    b: EdgeRegion,
    coeffs: ComplexVec4,
}

fn lattice_setup(r: &LatticeRegionArgs, ctx: &mut Ctx) -> Result<LatticeSetup, CliError> {
    let lat = TorusLattice::new(r.lx, r.ly).map_err(|e| input(e.to_string()))?;
    let a = EdgeRegion::column_annulus(&lat, &parse_columns(&r.region_a)?).map_err(|e| input(e.to_string()))?;
    let b = EdgeRegion::column_annulus(&lat, &parse_columns(&r.region_b)?).map_err(|e| input(e.to_string()))?;
    if !a.is_disjoint(&b) {
        return Err(input("regions A and B overlap"));
    }
    let raw = parse_state_or_preset(&r.coeffs, ctx.seed)?;
    let coeffs = ctx.unit(raw)?;
    Ok(LatticeSetup { lat, a, b, coeffs })
}

fn ground_space_mi(coeffs: &ComplexVec4, tol: &TolerancePolicy) -> Result<f64, CliError> {
    let tc = AnyonModel::get(ModelKind::ToricCode);
    Ok(from_logical(tc, coeffs, tol.tol_norm).map_err(compute)?.mutual_information(Loop::Y))
}

pub fn cmd_lattice_verify(a: &LatticeArgs, ctx: &mut Ctx) -> Result<Payload, CliError> {
    let s = lattice_setup(&a.lattice, ctx)?;
    let psi = encode(&s.lat, &s.coeffs, ctx.tol.tol_norm).map_err(compute)?;
    let mi = mutual_information_lattice(&psi, &s.a, &s.b).map_err(compute)?;
    let formula = ground_space_mi(&s.coeffs, &ctx.tol)?;
    let delta = (mi.value - formula).abs();
    let mut v = json!({
        "n_qubits": s.lat.n_qubits(),
        "coeffs": s.coeffs,
        "lattice_mi": mi.value,
        "ground_space_mi": formula,
        "delta": delta,
        "pass": delta <= ctx.tol.tol_entropy_lattice,
        "entropies": mi,
    });
    if a.factorization {
        let f = verify_block_factorization(&s.coeffs, &s.lat, &s.a, &s.b, ctx.tol.tol_norm).map_err(compute)?;
        v["block_factorization"] = serde_json::to_value(f)?;
    }
    Ok(Payload::Json(v))
}

pub fn cmd_lattice_invariance(a: &InvarianceArgs, ctx: &mut Ctx) -> Result<Payload, CliError> {
    let s = lattice_setup(&a.lattice, ctx)?;
    let psi = encode(&s.lat, &s.coeffs, ctx.tol.tol_norm).map_err(compute)?;
    let mode = if a.straddling {
        CircuitMode::Straddling
    } else {
        CircuitMode::Confined
    };
    let rep = shallow_circuit_invariance_test(&psi, &s.a, &s.b, a.depth, a.trials, ctx.seed, mode)
        .map_err(compute)?;
    let mut v = serde_json::to_value(&rep)?;
    v["ground_space_mi"] = json!(ground_space_mi(&s.coeffs, &ctx.tol)?);
    v["pass"] = json!(rep.max_delta < ctx.tol.tol_entropy_lattice);
    Ok(Payload::Json(v))
}

fn stabilizer_table() -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let set = enumerate_stabilizer_states().map_err(compute)?;
    let mut header = vec!["index".to_string()];
    for k in 0..4 {
        header.push(format!("a{k}_re"));
        header.push(format!("a{k}_im"));
    }
    header.extend(["I_gamma_x", "I_gamma_y", "I_gamma_xy", "pattern"].map(String::from));
    let rows = set
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut row = vec![i.to_string()];
            for z in s.amplitudes() {
                row.push(fmt_f64(z.re));
                row.push(fmt_f64(z.im));
            }
            let e = loop_entropies(s).as_array();
            row.extend(e.iter().map(|&h| fmt_f64(h)));
            let p: Vec<String> = e.iter().map(|h| format!("{}", h.round() as i64)).collect();
            row.push(format!("({})", p.join(",")));
            row
        })
        .collect();
    Ok((header, rows))
}

pub fn cmd_enumerate(a: &EnumerateArgs) -> Result<Payload, CliError> {
    let (header, rows) = stabilizer_table()?;
    match &a.csv {
        Some(path) => {
            std::fs::write(path, render_csv(&header, &rows)?)?;
            Ok(Payload::Json(json!({ "count": rows.len(), "csv": path })))
        }
        None => Ok(Payload::Table { header, rows }),
    }
}

pub fn cmd_model(a: &ModelArgs) -> Result<Payload, CliError> {
    let m = AnyonModel::get(a.name);
    if a.dump {
        return Ok(Payload::Json(serde_json::to_value(m.dump())?));
    }
    Ok(Payload::Json(json!({ "name": m.name(), "labels": m.labels(), "dim": m.dim() })))
}

pub fn render_csv(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| compute(e.to_string()))?;
    String::from_utf8(bytes).map_err(compute)
}

/// Table as a JSON list of records; numeric and boolean cells are typed.
pub fn table_to_json(header: &[String], rows: &[Vec<String>]) -> Value {
    let cell = |s: &str| -> Value {
        if let Ok(b) = s.parse::<bool>() {
            return json!(b);
        }
        if let Ok(i) = s.parse::<i64>() {
            return json!(i);
        }
        match s.parse::<f64>() {
            Ok(x) => json!(x),
            Err(_) => json!(s),
        }
    };
    Value::Array(
        rows.iter()
            .map(|r| {
                Value::Object(header.iter().cloned().zip(r.iter().map(|c| cell(c))).collect())
            })
            .collect(),
    )
}
