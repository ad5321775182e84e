use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kform::decomposition::{
    count_forms, decompose_all, decompose_with, default_plan, enumerate_plans, enumeration_ceiling, term_counts,
    DecompositionPlan, OddPlan,
};
use kform::forms::{assemble, forms_equivalent};
use kform::numeric::{catalog_case, ManufacturedSolution, PreparedCase, QuadratureSpec, Expr};
use kform::spectral::{
    adjoint_constraint, check_parameterization, global_relation, integral_representation, substitute_exponential,
    verify_stokes_adjoint, BoxDomain, ExponentSign, ExponentialAnsatz, ParamOutcome, Parameterization, SpinorTriple,
};
use kform::{fixtures, parse_operator, Error, Execution, Operator};

#[derive(Parser)]
#[command(name = "kform", version, about = "Fundamental forms, global relations and their numeric checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Args)]
struct OpArgs {
    /// Operator in the DSL, e.g. "axes x,t; Dt^2 - Dx^2".
    #[arg(long, conflicts_with = "op_file")]
    op: Option<String>,
    /// File holding a DSL operator or a JSON matrix grid.
    #[arg(long)]
    op_file: Option<PathBuf>,
}

#[derive(Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Explicit plan pieces as `TERM=VALUE`; `TERM` defaults to 0.
#[derive(Args)]
struct PlanArgs {
    /// Reduction path, e.g. `2=x,y,z`.
    #[arg(long)]
    path: Vec<String>,
    /// Odd axes moved to the adjoint slot, e.g. `0=x`.
    #[arg(long)]
    transfer: Vec<String>,
    /// Exchange pairs `moved:kept`, e.g. `0=x:y,z:w`.
    #[arg(long)]
    exchange: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Divergence decomposition of the concomitant.
    Decompose {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Number of fundamental forms and per-term factors.
    Count {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Every plan, verified, with an equivalence summary.
    Enumerate {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        format: FormatArg,
        /// Plan-count ceiling.
        #[arg(long, env = "KFORM_ENUM_CEILING")]
        ceiling: Option<u64>,
    },
    /// Constraint variety of the adjoint exponential solutions.
    Constraint {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        format: FormatArg,
        /// Rational parameterization to check, e.g. "s_x = 2/(l - 1/l), ...".
        #[arg(long)]
        param: Option<String>,
        /// Free variable of the parameterization.
        #[arg(long, default_value = "lambda")]
        aux: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Global relation on a box.
    GlobalRelation {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[command(flatten)]
        format: FormatArg,
        /// Exponent assignment, e.g. "s_t=-k, s_x=k"; default keeps every `s_<axis>`.
        #[arg(long)]
        spectral: Option<String>,
        /// Box such as "t=0:T, x=0:l"; default is the unit box.
        #[arg(long = "box")]
        domain: Option<String>,
        /// Integrate tangential derivatives by parts.
        #[arg(long)]
        normal_form: bool,
    },
    /// Integral representation of solutions.
    Represent {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        format: FormatArg,
        /// Emit the positive-prefactor two-dimensional layout.
        #[arg(long)]
        fokas_zyskin: bool,
    },
    /// Numeric boundary residual for an exact solution.
    Verify {
        /// Catalog entry: wave, heat, biharmonic or stokes.
        #[arg(long)]
        case: Option<String>,
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        format: FormatArg,
        /// Solution per field (repeat for systems).
        #[arg(long)]
        solution: Vec<String>,
        /// Exponent assignment for the adjoint solution.
        #[arg(long)]
        spectral: Option<String>,
        /// Values of free spectral names, e.g. "a=1.3, b=2i".
        #[arg(long)]
        point: Option<String>,
        /// Parameter values, e.g. "nu=0.5".
        #[arg(long)]
        params: Option<String>,
        /// Concrete box such as "t=0:1, x=0:2"; default is the unit box.
        #[arg(long = "box")]
        domain: Option<String>,
        /// Gauss nodes per axis.
        #[arg(long, default_value_t = 20)]
        quad: usize,
        #[arg(long, default_value_t = kform::numeric::DEFAULT_TOLERANCE)]
        tol: f64,
        /// Seed for the interior PDE pre-check.
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
    },
    /// Stokes system: decomposition, form and spinor checks.
    Stokes {
        /// Matrix JSON; defaults to the built-in Stokes operator.
        #[arg(long)]
        op_file: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IdentityCheck { .. } | Error::Unverified(_) | Error::AllPoles(_) => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

struct Report {
    json: Value,
    latex: String,
    text: String,
    ok: bool,
}

impl Report {
    fn emit(&self, f: Format) {
        let body = match f {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
            Format::Latex => self.latex.trim_end().to_string(),
            Format::Text => self.text.trim_end().to_string(),
        };
        // a closed pipe is not an error
        let _ = writeln!(std::io::stdout().lock(), "{body}");
    }
}

fn load(args: &OpArgs) -> Result<Operator, Failure> {
    let src = match (&args.op, &args.op_file) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        (None, None) => return Err(Failure::Usage("one of --op or --op-file is required".into())),
    };
    Ok(parse_operator(&src)?)
}

fn split_term(spec: &str) -> Result<(usize, &str), Failure> {
    match spec.split_once('=') {
        Some((i, body)) => {
            let i = i.trim().parse().map_err(|_| Failure::Usage(format!("bad term index in `{spec}`")))?;
            Ok((i, body))
        }
        None => Ok((0, spec)),
    }
}

fn axis_list(op: &Operator, body: &str) -> Result<Vec<usize>, Failure> {
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|a| op.space().axis_index(a).ok_or_else(|| Failure::Usage(format!("unknown axis `{a}`"))))
        .collect()
}

fn plan_from(op: &Operator, args: &PlanArgs) -> Result<DecompositionPlan, Failure> {
    let terms = op.op_terms();
    let mut plan = default_plan(op);
    let slot = |i: usize| {
        if i < terms.len() {
            Ok(i)
        } else {
            Err(Failure::Usage(format!("term {i} out of range; the operator has {} terms", terms.len())))
        }
    };
    for spec in &args.path {
        let (i, body) = split_term(spec)?;
        plan.terms[slot(i)?].path = axis_list(op, body)?;
    }
    for spec in &args.transfer {
        let (i, body) = split_term(spec)?;
        let i = slot(i)?;
        let mut transfer = axis_list(op, body)?;
        transfer.sort_unstable();
        let kept: Vec<usize> = terms[i].alpha.odd_axes().into_iter().filter(|a| !transfer.contains(a)).collect();
        let exchanges = transfer.iter().copied().zip(kept).collect();
        plan.terms[i].odd = Some(OddPlan { transfer, exchanges });
    }
    for spec in &args.exchange {
        let (i, body) = split_term(spec)?;
        let i = slot(i)?;
        let pairs = body
            .split(',')
            .map(|p| {
                let (a, b) = p.split_once(':').ok_or_else(|| Failure::Usage(format!("exchange `{p}` is not `a:b`")))?;
                Ok((axis_list(op, a)?[0], axis_list(op, b)?[0]))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        let odd = plan.terms[i].odd.get_or_insert_with(|| OddPlan { transfer: Vec::new(), exchanges: Vec::new() });
        odd.exchanges = pairs;
    }
    plan.validate(&terms)?;
    Ok(plan)
}

fn plan_json(op: &Operator, p: &DecompositionPlan) -> Value {
    let axes = &op.space().axes;
    let names = |v: &[usize]| v.iter().map(|&k| axes[k].clone()).collect::<Vec<_>>();
    Value::Array(
        p.terms
            .iter()
            .map(|t| {
                let odd = t.odd.as_ref().map(|o| {
                    json!({
                        "transfer": names(&o.transfer),
                        "exchanges": o.exchanges.iter().map(|&(a, b)| [axes[a].clone(), axes[b].clone()]).collect::<Vec<_>>(),
                    })
                });
                json!({ "alpha": t.alpha.entries(), "path": names(&t.path), "odd": odd })
            })
            .collect(),
    )
}

fn decompose_cmd(op: &Operator, plan: &DecompositionPlan) -> Result<Report, Failure> {
    let d = decompose_with(op, plan, Execution::Parallel)?;
    let form = assemble(&d)?;
    let verified = d.is_verified();
    let mut j = d.to_json();
    j["plan"] = plan_json(op, plan);
    j["form"] = form.to_json();
    Ok(Report {
        json: j,
        latex: format!("{}\n{}\n% verified: {verified}", d.to_latex(), form.to_latex()),
        text: format!("{}verified: {verified}", d.to_text()),
        ok: verified,
    })
}

fn count_cmd(op: &Operator) -> Report {
    let n = count_forms(op);
    let fields = op.field_names();
    let per: Vec<Value> = term_counts(&op.op_terms())
        .iter()
        .map(|t| {
            json!({
                "row": fields[t.row], "col": fields[t.col], "alpha": t.alpha.entries(),
                "odd_factorial": t.odd_factorial.to_string(), "sigma": t.sigma.to_string(),
            })
        })
        .collect();
    let mut text = format!("{n}\n");
    let mut rows = Vec::new();
    for t in term_counts(&op.op_terms()) {
        let alpha = t.alpha.to_string();
        text.push_str(&format!("  {alpha}: O! = {}, sigma = {}\n", t.odd_factorial, t.sigma));
        rows.push(format!("{alpha} & {} & {}", t.odd_factorial, t.sigma));
    }
    Report {
        json: json!({ "count": n.to_string(), "terms": per }),
        latex: format!(
            "N(L) = {n}\n\\begin{{tabular}}{{lll}}\n\\alpha & O_\\alpha! & \\sigma(\\alpha) \\\\\n{}\n\\end{{tabular}}",
            rows.join(" \\\\\n")
        ),
        text,
        ok: true,
    }
}

fn enumerate_cmd(op: &Operator, ceiling: u64) -> Result<Report, Failure> {
    let plans: Vec<DecompositionPlan> = match enumerate_plans(&op.op_terms(), ceiling) {
        Ok(e) => e.collect(),
        Err(Error::EnumerationCeiling { count, ceiling }) => {
            let text = format!("{count} plans exceed the ceiling of {ceiling}; not enumerated");
            return Ok(Report {
                json: json!({ "count": count, "ceiling": ceiling, "enumerated": false }),
                latex: format!("N(L) = {count}"),
                text,
                ok: true,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let mut forms = Vec::new();
    for r in decompose_all(op, &plans, Execution::Parallel) {
        forms.push(assemble(&r?)?);
    }
    // representatives of equivalence classes
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(forms.len());
    for (i, f) in forms.iter().enumerate() {
        let mut found = None;
        for (c, &r) in reps.iter().enumerate() {
            if forms_equivalent(f, &forms[r])? {
                found = Some(c);
                break;
            }
        }
        class_of.push(found.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }
    let n = forms.len() as u128;
    let mut sizes = vec![0u128; reps.len()];
    for &c in &class_of {
        sizes[c] += 1;
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let equivalent: u128 = sizes.iter().map(|s| s * s.saturating_sub(1) / 2).sum();
    let summary = format!(
        "plans: {n}\nverified: {n}\nequivalence classes: {}\nequivalent pairs: {equivalent} of {pairs}",
        reps.len()
    );
    Ok(Report {
        json: json!({
            "count": n.to_string(),
            "enumerated": true,
            "verified": n.to_string(),
            "classes": reps.len(),
            "pairs": pairs.to_string(),
            "equivalent_pairs": equivalent.to_string(),
            "plans": plans.iter().map(|p| plan_json(op, p)).collect::<Vec<_>>(),
        }),
        latex: format!("N(L) = {n},\\quad \\text{{equivalence classes}} = {}", reps.len()),
        text: summary,
        ok: reps.len() <= 1,
    })
}

fn constraint_cmd(op: &Operator, param: Option<&str>, aux: &str, samples: usize, seed: u64) -> Result<Report, Failure> {
    let cv = adjoint_constraint(op);
    let mut json = cv.to_json();
    let mut text = cv.to_text();
    let mut ok = true;
    if let Some(src) = param {
        let p = Parameterization::parse(src, aux)?;
        let out = check_parameterization(&cv, &p, samples, seed)?;
        let line = match &out {
            ParamOutcome::Pass { samples, poles } => {
                json["parameterization"] = json!({ "pass": true, "samples": samples, "poles": poles });
                format!("parameterization: pass ({samples} samples, {poles} poles skipped)")
            }
            ParamOutcome::Fail { lambda, residual } => {
                ok = false;
                json["parameterization"] = json!({ "pass": false, "lambda": lambda.to_string(), "residual": residual.to_string() });
                format!("parameterization: FAIL at {aux} = {lambda}, residual {residual}")
            }
        };
        text.push_str(&format!("\n{line}"));
    }
    Ok(Report { json, latex: cv.to_latex(), text, ok })
}

fn relation_cmd(
    op: &Operator,
    plan: &DecompositionPlan,
    spectral: Option<&str>,
    domain: Option<&str>,
    normal: bool,
) -> Result<Report, Failure> {
    let form = assemble(&decompose_with(op, plan, Execution::Parallel)?)?;
    let ansatz = match spectral {
        Some(s) => ExponentialAnsatz::parse(op.space(), &op.field_names(), s)?,
        None => ExponentialAnsatz::standard(op.space(), op.field_count(), ExponentSign::Plus),
    };
    let axes = &op.space().axes;
    let domain = match domain {
        Some(b) => BoxDomain::parse(axes, b)?,
        None => BoxDomain::unit(axes),
    };
    let mut r = global_relation(&substitute_exponential(&form, &ansatz)?, &domain)?;
    if normal {
        r = r.face_normal_form();
    }
    Ok(Report { json: r.to_json(), latex: r.to_latex(), text: r.to_text(), ok: true })
}

fn represent_cmd(op: &Operator, fz: bool) -> Result<Report, Failure> {
    let rep = integral_representation(op)?;
    let latex = if fz {
        rep.fokas_zyskin_latex().ok_or_else(|| Failure::Usage("the two-dimensional layout needs n = 2".into()))?
    } else {
        rep.to_latex()
    };
    Ok(Report { json: rep.to_json(), latex, text: rep.to_text(), ok: true })
}

fn assignments(src: Option<&str>) -> Result<HashMap<String, kform::numeric::Expr>, Failure> {
    let mut out = HashMap::new();
    for part in src.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| Failure::Usage(format!("`{part}` is not name=value")))?;
        let e = Expr::parse(value.trim(), &[], &HashMap::new())?;
        out.insert(name.trim().to_string(), e);
    }
    Ok(out)
}

struct VerifyArgs<'a> {
    case: Option<&'a str>,
    solution: &'a [String],
    spectral: Option<&'a str>,
    point: Option<&'a str>,
    params: Option<&'a str>,
    domain: Option<&'a str>,
    quad: usize,
    tol: f64,
    seed: u64,
    exec: Execution,
}

fn verify_cmd(op: Option<Operator>, a: VerifyArgs<'_>) -> Result<Report, Failure> {
    let prepared = match (a.case, op) {
        (Some(tag), None) => catalog_case(tag)?.prepare()?,
        (None, Some(op)) => {
            let spectral = a.spectral.ok_or_else(|| Failure::Usage("--spectral is required with --op".into()))?;
            let mut values: HashMap<_, _> =
                assignments(a.params)?.into_iter().map(|(k, e)| (k, e.eval(&[]))).collect();
            values.extend(assignments(a.point)?.into_iter().map(|(k, e)| (k, e.eval(&[]))));
            let sol: Vec<&str> = a.solution.iter().map(String::as_str).collect();
            PreparedCase::new(op, spectral, &sol, &values)?
        }
        (Some(_), Some(_)) => return Err(Failure::Usage("--case and --op are mutually exclusive".into())),
        (None, None) => return Err(Failure::Usage("one of --case or --op is required".into())),
    };
    let axes = prepared.op.space().axes.clone();
    let solution = if a.case.is_some() && !a.solution.is_empty() {
        let params: HashMap<_, _> =
            prepared.op.space().params.iter().cloned().zip(prepared.params()).collect();
        let sol: Vec<&str> = a.solution.iter().map(String::as_str).collect();
        ManufacturedSolution::parse(&axes, &sol, &params)?
    } else {
        prepared.solution.clone()
    };
    let domain = match a.domain {
        Some(b) => BoxDomain::parse(&axes, b)?,
        None => BoxDomain::unit(&axes),
    };
    let quad = QuadratureSpec::uniform(axes.len(), a.quad);
    let b = kform::numeric::concrete_box(&domain)?;
    let residual = kform::numeric::boundary_residual(&prepared.form, &prepared.point, &solution, &b, &quad, a.exec)?;
    let pde = kform::numeric::pde_defect(&prepared.op, &solution, &prepared.params(), &b, 50, a.seed);
    let adjoint = kform::numeric::adjoint_defect(&prepared.op, &prepared.ansatz, &prepared.point)?;
    let pass = residual.passes(a.tol);
    let ok = pass && pde <= 1e-10 && adjoint <= 1e-12;
    let faces: Vec<Value> = residual
        .faces
        .iter()
        .map(|f| json!({ "axis": axes[f.axis], "end": f.end, "re": f.value.re, "im": f.value.im }))
        .collect();
    let mut text = format!(
        "residual: {:.3e}{:+.3e}i\nscale: {:.6e}\nrelative: {:.3e}\npde defect: {pde:.3e}\nadjoint defect: {adjoint:.3e}\n",
        residual.value.re,
        residual.value.im,
        residual.scale,
        residual.relative()
    );
    text.push_str(if ok { "PASS" } else { "FAIL" });
    Ok(Report {
        json: json!({
            "case": a.case,
            "solution": solution.text,
            "nodes": a.quad,
            "tolerance": a.tol,
            "residual": { "re": residual.value.re, "im": residual.value.im },
            "scale": residual.scale,
            "relative": residual.relative(),
            "faces": faces,
            "pde_defect": pde,
            "adjoint_defect": adjoint,
            "pass": ok,
        }),
        latex: format!(
            "\\left|\\int_{{\\partial\\Omega}} \\eta\\right| / \\max(s, 1) = {:.3e}",
            residual.relative()
        ),
        text,
        ok,
    })
}

fn stokes_cmd(path: Option<&PathBuf>) -> Result<Report, Failure> {
    let src = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => fixtures::STOKES.to_string(),
    };
    let op = parse_operator(&src)?;
    let m = op.as_matrix();
    let d = decompose_with(&op, &default_plan(&op), Execution::Parallel)?;
    let form = assemble(&d)?;
    let t = SpinorTriple::symbolic();
    let vars = SpinorTriple::vars();
    let iso = t.isotropy().is_zero();
    let even = t.evenness_residual().iter().all(|p| p.is_zero());
    let rows = verify_stokes_adjoint(&t, &m)?;
    let mut row_vars = op.space().params.clone();
    row_vars.extend(vars.iter().cloned());
    let adjoint = rows.iter().all(|p| p.is_zero());
    let k: Vec<String> = t.k.iter().map(|p| p.to_text(&vars)).collect();
    let rows_text: Vec<String> = rows.iter().map(|p| p.to_text(&row_vars)).collect();
    let ok = d.is_verified() && iso && even && adjoint;
    let mut j = d.to_json();
    j["form"] = form.to_json();
    j["spinor"] = json!({ "k": k, "isotropic": iso, "even": even, "adjoint_rows": rows_text, "adjoint_solution": adjoint });
    let mut text = d.to_text();
    text.push_str(&format!(
        "verified: {}\nk = ({})\nk.k = 0: {iso}\nk(-xi) = k(xi): {even}\nadjoint rows vanish: {adjoint}",
        d.is_verified(),
        k.join(", ")
    ));
    Ok(Report { json: j, latex: format!("{}\n{}", d.to_latex(), form.to_latex()), text, ok })
}

fn run(cli: Cli) -> Result<(Report, Format), Failure> {
    Ok(match cli.command {
        Command::Decompose { op, plan, format } => {
            let op = load(&op)?;
            let plan = plan_from(&op, &plan)?;
            (decompose_cmd(&op, &plan)?, format.format)
        }
        Command::Count { op, format } => (count_cmd(&load(&op)?), format.format),
        Command::Enumerate { op, format, ceiling } => {
            (enumerate_cmd(&load(&op)?, ceiling.unwrap_or_else(enumeration_ceiling))?, format.format)
        }
        Command::Constraint { op, format, param, aux, samples, seed } => {
            (constraint_cmd(&load(&op)?, param.as_deref(), &aux, samples, seed)?, format.format)
        }
        Command::GlobalRelation { op, plan, format, spectral, domain, normal_form } => {
            let op = load(&op)?;
            let plan = plan_from(&op, &plan)?;
            (relation_cmd(&op, &plan, spectral.as_deref(), domain.as_deref(), normal_form)?, format.format)
        }
        Command::Represent { op, format, fokas_zyskin } => (represent_cmd(&load(&op)?, fokas_zyskin)?, format.format),
        Command::Verify {
            case,
            op,
            format,
            solution,
            spectral,
            point,
            params,
            domain,
            quad,
            tol,
            seed,
            sequential,
        } => {
            let op = if op.op.is_some() || op.op_file.is_some() { Some(load(&op)?) } else { None };
            let args = VerifyArgs {
                case: case.as_deref(),
                solution: &solution,
                spectral: spectral.as_deref(),
                point: point.as_deref(),
                params: params.as_deref(),
                domain: domain.as_deref(),
                quad,
                tol,
                seed,
                exec: if sequential { Execution::Sequential } else { Execution::Parallel },
            };
            (verify_cmd(op, args)?, format.format)
        }
        Command::Stokes { op_file, format } => (stokes_cmd(op_file.as_ref())?, format.format),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format)) => {
            report.emit(format);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
