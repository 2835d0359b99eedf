use std::path::{Path, PathBuf};

use abint_core::abelian::{count_real_zeros, sample_integrals, write_csv, OvalFamily};
use abint_core::algebra::{MultiPoly, Rational};
use abint_core::analytic::{
    annulus_zero_bound, count_region_partition, headline_bound, is_quasiunipotent, monodromy, normalizing_chart, operator_monodromy,
    petrov_bound, system_bound, var_arg_bound, Annulus, ContourPath, MonodromyMatrix, Solution,
};
use abint_core::derived::{invariant_slope_sampled, reduce_to_scalar, SampleSpec};
use abint_core::petrov::{basis_forms, Hamiltonian, Poly2, PolyForm};
use abint_core::picard_fuchs::{
    concrete_hamiltonian, derive_pfaffian, restrict_to_pencil, LinearODESystem, LinearODESystemJson, ODE_SCHEMA,
};
use abint_core::slits::{build_slits, is_admissible, to_svg};
use abint_core::Error;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::parse::{parse_assignments, parse_complex, parse_complex_list, parse_operator, parse_polynomial};
use crate::{CliError, RunConfig};

type C = Complex64;

#[derive(Parser, Debug)]
#[command(name = "abint", version, about = "Picard-Fuchs systems, derived operators and zero counting for Abelian integrals")]
pub struct Cli {
    /// TOML configuration file; overrides ABINT_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct HamiltonianArgs {
    /// Hamiltonian in x, y, e.g. "1/2*y^2 + x^3 - x".
    #[arg(long = "H", value_name = "POLY")]
    pub h: String,
    /// Symbolic parameters appearing in H, comma separated.
    #[arg(long, default_value = "")]
    pub symbols: String,
    /// Parameter values, e.g. "a=1/2,b=-3".
    #[arg(long, default_value = "")]
    pub params: String,
}

#[derive(Args, Debug, Clone)]
pub struct OperatorSource {
    /// Operator in t and D, e.g. "(t^2 - 1)*D^2 + t*D - 1".
    #[arg(long)]
    pub operator: Option<String>,
    /// Restricted system JSON written by `derive-pf --restrict`.
    #[arg(long)]
    pub system: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive the Pfaffian system of a Hamiltonian family.
    DerivePf {
        #[command(flatten)]
        h: HamiltonianArgs,
        /// Restrict to the pencil H = t at the given parameter values.
        #[arg(long)]
        restrict: bool,
    },
    /// Reduce a restricted system to a scalar operator.
    Reduce {
        #[arg(long = "H", value_name = "POLY")]
        h: Option<String>,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        system: Option<PathBuf>,
    },
    /// Affine and sampled invariant slope of an operator.
    Slope {
        #[arg(long)]
        operator: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 3)]
        height: i64,
    },
    /// Build a slit system for a point set.
    Slits {
        /// Comma separated complex points, e.g. "0,1,2+i".
        #[arg(long)]
        points: String,
        /// SVG output path.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 512.0)]
        size: f64,
    },
    /// Monodromy around a circle.
    Monodromy {
        #[command(flatten)]
        source: OperatorSource,
        #[arg(long, default_value = "0")]
        center: String,
        #[arg(long)]
        radius: f64,
    },
    /// Zeros of a solution in every region of the slit partition.
    Count {
        #[arg(long)]
        operator: String,
        /// Point where the initial data are given.
        #[arg(long)]
        base: String,
        /// y, y', ..., y^(k-1) at the base point.
        #[arg(long)]
        initial: String,
        /// Point set for the slits; defaults to the singular points.
        #[arg(long)]
        points: Option<String>,
    },
    /// Sample Abelian integrals over real ovals.
    Integrate {
        #[arg(long = "H", value_name = "POLY")]
        h: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        /// 1-form such as "x^2*dy - y*dx"; repeatable. Defaults to the basis forms.
        #[arg(long = "form")]
        forms: Vec<String>,
        /// Coefficients of a combination whose sign changes are counted.
        #[arg(long, allow_hyphen_values = true)]
        combination: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Zero bounds.
    #[command(subcommand)]
    Bound(BoundCommand),
}

#[derive(Subcommand, Debug)]
pub enum BoundCommand {
    /// (2k'+1)(2B+1).
    Petrov {
        #[arg(long)]
        k_prime: usize,
        #[arg(long)]
        b: f64,
    },
    /// Double exponential bound in n with constant c.
    Headline {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Bound for a Pfaffian system of given size.
    System {
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        size: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Variation of argument bound along a segment.
    VarArg {
        #[arg(long)]
        operator: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Zero bound in a concentric annulus.
    Annulus {
        #[arg(long)]
        operator: String,
        #[arg(long, default_value = "0")]
        center: String,
        #[arg(long)]
        r_in: f64,
        #[arg(long)]
        r_out: f64,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        initial: Option<String>,
    },
}

fn pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

fn symbols(list: &str) -> Vec<String> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn hamiltonian(text: &str, names: &[String]) -> Result<Hamiltonian<abint_core::algebra::RatFunc>, Error> {
    let mut vars = vec!["x", "y"];
    vars.extend(names.iter().map(String::as_str));
    Hamiltonian::from_multi(&parse_polynomial(text, &vars)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() }.into())
}

/// A restricted system from its own JSON or from a `derive-pf` report.
fn load_system(path: &Path) -> Result<LinearODESystem, CliError> {
    let v = read_json(path)?;
    let sys = if v.get("schema").and_then(Value::as_str) == Some(ODE_SCHEMA) {
        v
    } else if let Some(s) = v.pointer("/restricted/system") {
        s.clone()
    } else {
        return Err(Error::InvalidInput(format!("{} holds no restricted system", path.display())).into());
    };
    let j: LinearODESystemJson = serde_json::from_value(sys).map_err(|e| Error::InvalidInput(format!("malformed system: {e}")))?;
    Ok(LinearODESystem::from_json(&j)?)
}

fn restricted_from_h(text: &str, params: &str) -> Result<LinearODESystem, CliError> {
    let values = parse_assignments(params)?;
    let names: Vec<String> = values.keys().cloned().collect();
    let sys = derive_pfaffian(&hamiltonian(text, &names)?)?;
    Ok(restrict_to_pencil(&sys, &values)?)
}

fn system_report(ode: &LinearODESystem) -> Value {
    let text: Vec<Vec<String>> = (0..ode.dim()).map(|i| (0..ode.dim()).map(|j| ode.a.get(i, j).to_string()).collect()).collect();
    json!({
        "system": ode.to_json(),
        "a_text": text,
        "denominator_text": ode.denominator.to_string(),
    })
}

fn monodromy_report(m: &MonodromyMatrix, center: C, radius: f64, cfg: &RunConfig) -> Value {
    let q = is_quasiunipotent(&m.matrix, cfg.qu_tol, cfg.max_order, cfg.qu_mode);
    let n = m.matrix.nrows();
    let rows: Vec<Vec<[f64; 2]>> = (0..n).map(|i| (0..n).map(|j| pair(m.matrix[(i, j)])).collect()).collect();
    json!({
        "schema": "abint/monodromy/v1",
        "loop": { "center": pair(center), "radius": radius },
        "base": pair(m.base),
        "matrix": rows,
        "condition": m.condition,
        "eigenvalues": q.eigenvalues.iter().map(|&z| pair(z)).collect::<Vec<_>>(),
        "orders": q.orders,
        "quasiunipotent": q.ok,
    })
}

fn one_form(text: &str) -> Result<PolyForm<Rational>, Error> {
    let p = parse_polynomial(text, &["x", "y", "dx", "dy"])?;
    if p.degree_in("dx") > 1 || p.degree_in("dy") > 1 {
        return Err(Error::InvalidInput(format!("`{text}` is not a 1-form")));
    }
    let by_dx = p.coeffs_in("dx");
    let zero = MultiPoly::zero();
    let rest = by_dx.first().unwrap_or(&zero);
    let pdx = by_dx.get(1).unwrap_or(&zero);
    if pdx.contains_var("dy") {
        return Err(Error::InvalidInput(format!("`{text}` is not a 1-form")));
    }
    let by_dy = rest.coeffs_in("dy");
    if by_dy.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::InvalidInput(format!("`{text}` has a term without dx or dy")));
    }
    let qdy = by_dy.get(1).unwrap_or(&zero);
    Ok(PolyForm::one(Poly2::<Rational>::from_multi(pdx)?, Poly2::<Rational>::from_multi(qdy)?))
}

fn solution(base: &str, initial: &str) -> Result<Solution, Error> {
    Ok(Solution::scalar(parse_complex(base)?, parse_complex_list(initial)?))
}

pub fn run(cli: &Cli, cfg: &RunConfig) -> Result<Value, CliError> {
    match &cli.command {
        Command::DerivePf { h, restrict } => {
            let values = parse_assignments(&h.params)?;
            let mut names = symbols(&h.symbols);
            names.extend(values.keys().cloned());
            let ham = hamiltonian(&h.h, &names)?;
            let sys = derive_pfaffian(&ham)?;
            let mut out = json!({
                "schema": "abint/derive-pf/v1",
                "hamiltonian": ham.poly().to_multi().map(|p| p.to_string()),
                "pfaffian": sys.to_json(),
            });
            if *restrict {
                out["restricted"] = system_report(&restrict_to_pencil(&sys, &values)?);
            }
            Ok(out)
        }
        Command::Reduce { h, params, system } => {
            let ode = match (h, system) {
                (Some(h), None) => restricted_from_h(h, params)?,
                (None, Some(p)) => load_system(p)?,
                _ => return Err(Error::InvalidInput("give exactly one of --H and --system".into()).into()),
            };
            let d = reduce_to_scalar(&ode)?;
            Ok(json!({
                "schema": "abint/reduce/v1",
                "system_dim": ode.dim(),
                "operator": d.to_json(),
                "singular_points": d.singular_points().into_iter().map(pair).collect::<Vec<_>>(),
            }))
        }
        Command::Slope { operator, samples, seed, height } => {
            let d = parse_operator(operator)?;
            let spec = SampleSpec { samples: samples.unwrap_or(cfg.samples), seed: seed.unwrap_or(cfg.seed), height: *height };
            let r = invariant_slope_sampled(&d, &spec);
            let mut out = json!({ "schema": "abint/slope/v1", "operator": d.to_string(), "height": height });
            merge(&mut out, serde_json::to_value(&r).expect("serializable"));
            Ok(out)
        }
        Command::Slits { points, svg, size } => {
            let t = parse_complex_list(points)?;
            let s = build_slits(&t, &cfg.slit_config())?;
            let path = svg.clone().or_else(|| cfg.svg.clone()).unwrap_or_else(|| PathBuf::from("slits.svg"));
            write_file(&path, &to_svg(&s, *size))?;
            Ok(json!({
                "schema": "abint/slits/v1",
                "points": t.iter().map(|&z| pair(z)).collect::<Vec<_>>(),
                "normalized_length": s.normalized_length()?,
                "circle_lengths": s.circle_lengths()?,
                "circles": s.circles.len(),
                "admissible": is_admissible(&s),
                "svg": path.display().to_string(),
                "system": s,
            }))
        }
        Command::Monodromy { source, center, radius } => {
            let c = parse_complex(center)?;
            let lp = ContourPath::circle(c, *radius);
            let m = match (&source.operator, &source.system) {
                (Some(op), None) => operator_monodromy(&parse_operator(op)?, &lp, cfg.tol)?,
                (None, Some(p)) => monodromy(&load_system(p)?, &lp, cfg.tol)?,
                _ => return Err(Error::InvalidInput("give exactly one of --operator and --system".into()).into()),
            };
            Ok(monodromy_report(&m, c, *radius, cfg))
        }
        Command::Count { operator, base, initial, points } => {
            let d = parse_operator(operator)?;
            let t = match points {
                Some(p) => parse_complex_list(p)?,
                None => d.singular_points(),
            };
            if t.is_empty() {
                return Err(Error::InvalidInput("operator has no finite singular points; pass --points".into()).into());
            }
            let s = build_slits(&t, &cfg.slit_config())?;
            let sol = solution(base, initial)?;
            let r = count_region_partition(&d, &s, &sol, &cfg.count_config())?;
            let mut out = serde_json::to_value(&r).expect("serializable");
            out["operator"] = json!(d.to_string());
            out["points"] = json!(t.iter().map(|&z| pair(z)).collect::<Vec<_>>());
            Ok(out)
        }
        Command::Integrate { h, params, from, to, samples, forms, combination, csv } => {
            let values = parse_assignments(params)?;
            let names: Vec<String> = values.keys().cloned().collect();
            let ham = concrete_hamiltonian(&hamiltonian(h, &names)?, &values)?;
            let (forms, labels): (Vec<PolyForm<Rational>>, Vec<String>) = if forms.is_empty() {
                basis_forms(ham.n())?.iter().map(|b| (b.omega(), b.label())).unzip()
            } else {
                let fs = forms.iter().map(|f| one_form(f)).collect::<Result<Vec<_>, _>>()?;
                (fs, forms.clone())
            };
            if *samples < 2 || !(from < to) {
                return Err(Error::InvalidInput("need --from < --to and at least two samples".into()).into());
            }
            let ts: Vec<f64> = (0..*samples).map(|k| from + (to - from) * k as f64 / (*samples - 1) as f64).collect();
            let fam = OvalFamily::around_first_center(&ham)?;
            let oc = cfg.oval_config();
            let sample = sample_integrals(&ham, &fam, &forms, &ts, &oc)?;
            let mut out = json!({
                "schema": "abint/integrals/v1",
                "hamiltonian": ham.poly().to_multi().to_string(),
                "family": fam,
                "labels": labels,
                "t": sample.t,
                "values": sample.values,
                "errors": sample.errors,
            });
            if let Some(c) = combination {
                let cs: Vec<f64> = parse_complex_list(c)?.iter().map(|z| z.re).collect();
                if cs.len() != forms.len() {
                    return Err(Error::InvalidInput(format!("{} coefficients for {} forms", cs.len(), forms.len())).into());
                }
                out["zeros"] =
                    serde_json::to_value(count_real_zeros(&ham, &fam, &forms, &cs, (*from, *to), *samples, &oc)?).expect("serializable");
            }
            if let Some(path) = csv.clone().or_else(|| cfg.csv.clone()) {
                let mut buf = Vec::new();
                write_csv(&sample, &labels, &mut buf).map_err(|e| CliError::Io(e.to_string()))?;
                write_file(&path, &String::from_utf8(buf).expect("ascii"))?;
                out["csv"] = json!(path.display().to_string());
            }
            Ok(out)
        }
        Command::Bound(b) => bound(b, cfg),
    }
}

fn bound(b: &BoundCommand, cfg: &RunConfig) -> Result<Value, CliError> {
    let report = |kind: &str, v: Value| {
        let mut out = json!({ "schema": "abint/bound/v1", "kind": kind });
        merge(&mut out, v);
        out
    };
    Ok(match b {
        BoundCommand::Petrov { k_prime, b } => report(
            "petrov",
            json!({ "formula": "(2*k_prime+1)*(2*B+1)", "inputs": { "k_prime": k_prime, "B": b }, "value": petrov_bound(*k_prime, *b) }),
        ),
        BoundCommand::Headline { n, c } => report("headline", serde_json::to_value(headline_bound(*n, *c)).expect("serializable")),
        BoundCommand::System { degree, ell, m, size, c } => {
            report("system", serde_json::to_value(system_bound(*degree, *ell, *m, *size, *c)).expect("serializable"))
        }
        BoundCommand::VarArg { operator, from, to } => {
            let d = parse_operator(operator)?;
            let path = ContourPath::segment(parse_complex(from)?, parse_complex(to)?);
            let r = var_arg_bound(&d, &path, &normalizing_chart(&d, &path), cfg.c_var);
            report("var-arg", serde_json::to_value(r).expect("serializable"))
        }
        BoundCommand::Annulus { operator, center, r_in, r_out, base, initial } => {
            let d = parse_operator(operator)?;
            let a = Annulus { center: parse_complex(center)?, r_in: *r_in, r_out: *r_out };
            let sol = match (base, initial) {
                (Some(b), Some(i)) => Some(solution(b, i)?),
                (None, None) => None,
                _ => return Err(Error::InvalidInput("--base and --initial go together".into()).into()),
            };
            let r = annulus_zero_bound(&d, &a, sol.as_ref(), &cfg.count_config())?;
            report("annulus", serde_json::to_value(r).expect("serializable"))
        }
    })
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        for (k, v) in b {
            a.insert(k, v);
        }
    }
}
