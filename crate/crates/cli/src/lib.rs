//! `qheun` command line: derive, classify and analyse q-Heun type equations.
//!
//! Documents go to standard output (or `--out`), diagnostics to standard
//! error. Exit codes: 0 success, 1 verification mismatch, 2 usage or parse
//! error, 3 domain error.

pub mod doc;
pub mod error;

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qheun_core::climit::{
    classify_ode, corollary_holds, crosscheck, emit_ode, limit_coefficients, EpsilonFamily, HeunODE, LimitData,
    Preset,
};
use qheun_core::gauge::{invert_variable, FactorKind, GaugeRecord};
use qheun_core::lax::verify::derive_equation;
use qheun_core::lax::{
    build_kny, build_murata, kny_to_equation, scalar_reduce, specialize, verify_all, verify_family, Catalog,
    FamilyReport, KnyFamily, MurataFamily, SpecializeVariant,
};
use qheun_core::local::{
    char_exponents, residual_value, series_with_root, CharData, CharRoots, Location, Regularity, Scalar,
};
use qheun_core::odeheun::match_class;
use qheun_core::qdiff::{classify, newton_diagram, render_diagram, signature_string, DiagramFormat, QDiffEq};
use qheun_core::symkernel::{fmt_rational, parse_expr_free, parse_rational, QPoly, Rational, UPoly, Var};
use serde_json::{json, Value};

use doc::{BindingDocument, EquationDocument, FamilyDocument};
use error::{CliError, OrDomain};

#[derive(Parser, Debug)]
#[command(name = "qheun", version, about = "q-Heun type equations: derivation, taxonomy, local analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive a catalog equation from its Lax form.
    Derive {
        #[arg(long, value_enum)]
        catalog: CatalogArg,
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value = "paper")]
        variant: VariantArg,
        /// Apply the table gauge step (KNY families E3a, E2a, A1w8).
        #[arg(long)]
        gauge: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Print the taxonomy label of an equation document.
    Classify {
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Draw the Newton diagram.
    Polygon {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: FormatArg,
        #[arg(long)]
        out: Option<String>,
    },
    /// Apply a gauge transformation.
    Gauge {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, value_enum)]
        kind: GaugeArg,
        /// Exponent of `x^lambda`: an integer or an identifier.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Argument `a` of the factor `(a x; q)_inf` or `theta_q(a x)`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Polynomial `p(x)` of a factor with `u(qx) = p(x) u(x)`.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Divide the factor out instead of multiplying it in.
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Characteristic data at zero or infinity.
    Exponents {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value = "zero")]
        at: AtArg,
        #[arg(long)]
        bind: Option<String>,
    },
    /// Series solution by recurrence.
    Series {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long)]
        bind: String,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, value_enum, default_value = "zero")]
        at: AtArg,
        #[arg(long = "residual-at", allow_hyphen_values = true)]
        residual_at: Option<String>,
        /// Use floating point even when the exponent is rational.
        #[arg(long)]
        float: bool,
    },
    /// The q -> 1 limit of a family with `q = 1 + e`.
    Limit {
        #[arg(long = "family-file")]
        family_file: Option<String>,
        #[arg(long)]
        preset: Option<String>,
        /// Write the limit operator to this file.
        #[arg(long)]
        emit: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        crosscheck: Option<String>,
        /// Write the family document of a preset and stop.
        #[arg(long = "write-family")]
        write_family: Option<String>,
    },
    /// Compare derived equations with the printed tables.
    Verify {
        #[arg(long, value_enum)]
        catalog: Option<CatalogArg>,
        #[arg(long)]
        family: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CatalogArg {
    Murata,
    Kny,
}

impl From<CatalogArg> for Catalog {
    fn from(c: CatalogArg) -> Catalog {
        match c {
            CatalogArg::Murata => Catalog::Murata,
            CatalogArg::Kny => Catalog::Kny,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Paper,
    Alt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GaugeArg {
    Power,
    Pochhammer,
    Theta,
    Linear,
    Invert,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AtArg {
    Zero,
    Infinity,
}

/// Parse `args` (program name first) and execute. Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdin, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, CliError> {
        if path == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(CliError::usage)?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}")))
        }
    }

    fn emit(&mut self, target: Option<&str>, text: &str) -> Result<(), CliError> {
        match target {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::usage(format!("{path}: {e}"))),
            None => self.out.write_all(text.as_bytes()).map_err(CliError::usage),
        }
    }

    fn json(&mut self, target: Option<&str>, v: &impl serde::Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(v).expect("serializable");
        text.push('\n');
        self.emit(target, &text)
    }

    fn equation(&mut self, path: &str) -> Result<QDiffEq, CliError> {
        read_equation(&self.read(path)?)
    }
}

pub fn read_equation(text: &str) -> Result<QDiffEq, CliError> {
    let d: EquationDocument = serde_json::from_str(text).map_err(|e| CliError::usage(format!("equation document: {e}")))?;
    d.to_equation()
}

pub fn write_equation(eq: &QDiffEq) -> String {
    serde_json::to_string_pretty(&EquationDocument::from_equation(eq)).expect("serializable") + "\n"
}

fn execute(cmd: Command, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let mut io = Io { stdin, out };
    match cmd {
        Command::Derive {
            catalog,
            family,
            variant,
            gauge,
            out,
        } => {
            let eq = derive(catalog.into(), &family, variant, gauge)?;
            io.emit(out.as_deref(), &write_equation(&eq))
        }
        Command::Classify { input } => {
            let eq = io.equation(&input)?;
            io.json(None, &label_json(&eq))
        }
        Command::Polygon { input, format, out } => {
            let eq = io.equation(&input)?;
            let f = match format {
                FormatArg::Ascii => DiagramFormat::Ascii,
                FormatArg::Svg => DiagramFormat::Svg,
            };
            let mut text = render_diagram(&newton_diagram(&eq), f);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            io.emit(out.as_deref(), &text)
        }
        Command::Gauge {
            input,
            kind,
            lambda,
            alpha,
            poly,
            inverse,
            out,
        } => {
            let eq = io.equation(&input)?;
            let g = gauge_record(&eq, kind, lambda, alpha, poly)?;
            let g = if inverse { g.inverse() } else { g };
            let res = g.apply(&eq).domain()?;
            io.emit(out.as_deref(), &write_equation(&res))
        }
        Command::Exponents { input, at, bind } => {
            let eq = io.equation(&input)?;
            let b = match bind {
                Some(path) => Some(read_bindings(&io.read(&path)?, &eq)?),
                None => None,
            };
            io.json(None, &exponents_json(&eq, at, b.as_ref())?)
        }
        Command::Series {
            input,
            bind,
            root,
            terms,
            at,
            residual_at,
            float,
        } => {
            let eq = io.equation(&input)?;
            let b = read_bindings(&io.read(&bind)?, &eq)?;
            let x = residual_at
                .map(|s| parse_rational(&s).map_err(|e| CliError::usage(format!("--residual-at: {e}"))))
                .transpose()?;
            io.json(None, &series_json(&eq, &b, at, root, terms, x.as_ref(), float)?)
        }
        Command::Limit {
            family_file,
            preset,
            emit,
            crosscheck,
            write_family,
        } => {
            let (eq, bindings) = match (&preset, &family_file) {
                (Some(p), None) => Preset::by_name(p).map_err(CliError::usage)?.equation().domain()?,
                (None, Some(path)) => {
                    let d: FamilyDocument = serde_json::from_str(&io.read(path)?)
                        .map_err(|e| CliError::usage(format!("family document: {e}")))?;
                    d.to_parts()?
                }
                _ => return Err(CliError::usage("give exactly one of --preset and --family-file")),
            };
            if let Some(path) = write_family {
                return io.json(Some(&path), &FamilyDocument::new(&eq, &bindings));
            }
            let eps = crosscheck
                .map(|s| parse_rational(&s).map_err(|e| CliError::usage(format!("--crosscheck: {e}"))))
                .transpose()?;
            let fam = EpsilonFamily::from_equation(&eq, &bindings).domain()?;
            let (report, ode) = limit_json(&fam, eps.as_ref())?;
            if let Some(path) = emit {
                io.json(Some(&path), &ode)?;
            }
            io.json(None, &report)
        }
        Command::Verify { catalog, family } => {
            let reports = match (catalog, family) {
                (Some(c), Some(f)) => vec![verify_family(c.into(), &f).domain()?],
                (c, None) => verify_all(c.map(Into::into)).domain()?,
                (None, Some(_)) => return Err(CliError::usage("--family needs --catalog")),
            };
            let rows: Vec<Value> = reports.iter().map(report_json).collect();
            io.json(None, &rows)?;
            let bad: Vec<&str> = reports.iter().filter(|r| !r.matched).map(|r| r.family.as_str()).collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError::mismatch(format!("mismatch in {}", bad.join(", "))))
            }
        }
    }
}

pub fn derive(catalog: Catalog, family: &str, variant: VariantArg, gauge: bool) -> Result<QDiffEq, CliError> {
    match (catalog, variant) {
        (Catalog::Murata, _) if gauge => Err(CliError::usage("--gauge applies to KNY families only")),
        (Catalog::Murata, VariantArg::Paper) => derive_equation(catalog, family).map_err(CliError::usage),
        (Catalog::Murata, VariantArg::Alt) => {
            let f = MurataFamily::from_id(family).map_err(CliError::usage)?;
            let rel = scalar_reduce(&build_murata(f, &HashMap::new()).domain()?).domain()?;
            specialize(f, SpecializeVariant::Alt, &rel).domain()
        }
        (Catalog::Kny, VariantArg::Alt) => Err(CliError::usage("KNY families have no alternative specialization")),
        (Catalog::Kny, VariantArg::Paper) => {
            let f = KnyFamily::from_id(family).map_err(CliError::usage)?;
            kny_to_equation(&build_kny(f).domain()?, gauge).domain()
        }
    }
}

pub fn label_json(eq: &QDiffEq) -> Value {
    let l = classify(eq);
    json!({
        "class": l.class.to_string(),
        "variant": l.variant.map(|v| v.name()),
        "reduction": l.reduction.to_string(),
        "signature": signature_string(l.signature),
    })
}

fn gauge_record(
    eq: &QDiffEq,
    kind: GaugeArg,
    lambda: Option<String>,
    alpha: Option<String>,
    poly: Option<String>,
) -> Result<GaugeRecord, CliError> {
    let need = |v: Option<String>, flag: &str| v.ok_or_else(|| CliError::usage(format!("--kind needs --{flag}")));
    let parse = |s: &str, flag: &str| parse_expr_free(s).map_err(|e| CliError::usage(format!("--{flag}: {e}")));
    Ok(match kind {
        GaugeArg::Power => {
            let l = need(lambda, "lambda")?;
            match l.trim().parse::<i64>() {
                Ok(n) => GaugeRecord::power(n),
                Err(_) if doc::is_identifier(l.trim()) => GaugeRecord::power_symbolic(l.trim()),
                Err(_) => return Err(CliError::usage("--lambda must be an integer or an identifier")),
            }
        }
        GaugeArg::Pochhammer | GaugeArg::Theta => {
            let a = parse(&need(alpha, "alpha")?, "alpha")?;
            let k = if matches!(kind, GaugeArg::Theta) { FactorKind::Theta } else { FactorKind::Pochhammer };
            GaugeRecord::move_factor(k, a)
        }
        GaugeArg::Linear => {
            let p = parse(&need(poly, "poly")?, "poly")?;
            GaugeRecord::linear(UPoly::from_ratfun(&p, eq.var()).map_err(CliError::usage)?)
        }
        GaugeArg::Invert => GaugeRecord::invert(),
    })
}

pub fn read_bindings(text: &str, eq: &QDiffEq) -> Result<HashMap<Var, Rational>, CliError> {
    let d: BindingDocument =
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("binding document: {e}")))?;
    d.to_bindings(eq)
}

fn located(eq: &QDiffEq, at: AtArg) -> (QDiffEq, Location) {
    match at {
        AtArg::Zero => (eq.clone(), Location::Zero),
        AtArg::Infinity => (invert_variable(eq), Location::Infinity),
    }
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn exponents_json(eq: &QDiffEq, at: AtArg, b: Option<&HashMap<Var, Rational>>) -> Result<Value, CliError> {
    let loc = match at {
        AtArg::Zero => Location::Zero,
        AtArg::Infinity => Location::Infinity,
    };
    let cd: CharData = char_exponents(eq, loc).domain()?;
    let symbolic = match cd.symbolic_roots().domain()? {
        CharRoots::None => json!([]),
        CharRoots::One(r) => json!([r.to_string()]),
        CharRoots::Quadratic => Value::Null,
    };
    let mut v = json!({
        "location": format!("{loc:?}").to_lowercase(),
        "polynomial": cd.polynomial(Var::new("s")).to_string(),
        "coefficients": cd.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "regularity": match cd.regularity {
            Regularity::RegularLike => "regular",
            Regularity::IrregularLike => "irregular",
        },
        "rootCount": cd.root_count(),
        "roots": symbolic,
    });
    if let Some(b) = b {
        v["numericRoots"] = match cd.numeric_roots::<Rational>(b) {
            Ok(r) => json!(r.iter().map(fmt_rational).collect::<Vec<_>>()),
            Err(_) => json!(cd
                .numeric_roots::<Complex64>(b)
                .domain()?
                .into_iter()
                .map(complex)
                .collect::<Vec<_>>()),
        };
    }
    Ok(v)
}

fn series_in<S: Scalar>(
    eq: &QDiffEq,
    b: &HashMap<Var, Rational>,
    root: usize,
    terms: usize,
    x: Option<&Rational>,
    show: impl Fn(&S) -> Value,
) -> Result<Value, CliError> {
    let roots = char_exponents(eq, Location::Zero).domain()?.numeric_roots::<S>(b).domain()?;
    let s = roots
        .get(root)
        .cloned()
        .ok_or_else(|| CliError::domain(format!("no characteristic root with index {root} ({} roots)", roots.len())))?;
    let sol = series_with_root(eq, b, s, terms).domain()?;
    let mut v = json!({
        "s": show(&sol.s),
        "coefficients": sol.coeffs.iter().map(&show).collect::<Vec<_>>(),
    });
    if let Some(x) = x {
        let (r, scale) = residual_value(eq, b, &sol, &S::from_rational(x)).domain()?;
        v["residual"] = show(&r);
        v["relativeResidual"] = json!(if scale == 0.0 { 0.0 } else { r.magnitude() / scale });
    }
    Ok(v)
}

fn series_json(
    eq: &QDiffEq,
    b: &HashMap<Var, Rational>,
    at: AtArg,
    root: usize,
    terms: usize,
    x: Option<&Rational>,
    float: bool,
) -> Result<Value, CliError> {
    let (eq, loc) = located(eq, at);
    let exact = if float {
        None
    } else {
        match series_in::<Rational>(&eq, b, root, terms, x, |r| json!(fmt_rational(r))) {
            Ok(v) => Some(v),
            Err(_) if char_exponents(&eq, Location::Zero).domain()?.numeric_roots::<Rational>(b).is_err() => None,
            Err(e) => return Err(e),
        }
    };
    let (mode, mut v) = match exact {
        Some(v) => ("exact", v),
        None => ("float", series_in::<Complex64>(&eq, b, root, terms, x, |z| complex(*z))?),
    };
    v["mode"] = json!(mode);
    v["location"] = json!(format!("{loc:?}").to_lowercase());
    Ok(v)
}

fn poly_json(p: &QPoly) -> Value {
    json!(p.coeffs().iter().map(fmt_rational).collect::<Vec<_>>())
}

fn limits_json(b: &LimitData) -> Value {
    let arr = |a: &[Rational; 3]| a.iter().map(fmt_rational).collect::<Vec<_>>();
    json!({ "b": arr(&b.b), "b1": arr(&b.b1), "b0": arr(&b.b0) })
}

pub fn ode_json(ode: &HeunODE) -> Value {
    json!({
        "format": "qheun-ode/1",
        "convention": "c2*g'' + c1*g' + c0*g = 0, coefficients from degree 0",
        "class": ode.class.map(|c| c.id()),
        "c2": poly_json(&ode.c2),
        "c1": poly_json(&ode.c1),
        "c0": poly_json(&ode.c0),
        "gauge": ode.gauge.as_ref().map(|g| json!({
            "exact": g.exact.as_ref().map(fmt_rational),
            "approx": complex(g.approx),
        })),
        "accessory": ode.accessory.as_ref().map(fmt_rational),
        "notes": ode.notes,
    })
}

fn limit_json(fam: &EpsilonFamily, eps: Option<&Rational>) -> Result<(Value, Value), CliError> {
    let b = limit_coefficients(fam).domain()?;
    let ode = classify_ode(&emit_ode(&b).domain()?).domain()?;
    let standard = match match_class(&ode) {
        Ok(p) => json!({
            "class": p.class().id(),
            "parameters": p.named().into_iter().map(|(n, v)| (n.to_string(), json!(fmt_rational(v)))).collect::<serde_json::Map<_, _>>(),
        }),
        Err(e) => json!({ "obstruction": e.obstruction }),
    };
    let ode_v = ode_json(&ode);
    let mut report = json!({
        "limits": limits_json(&b),
        "corollary": corollary_holds(fam, &b),
        "ode": ode_v.clone(),
        "standardForm": standard,
    });
    if let Some(e) = eps {
        let dev = crosscheck(fam, e, &[0.01, 0.02, 0.05], 12).domain()?;
        report["crosscheck"] = json!({ "eps": fmt_rational(e), "deviation": dev });
    }
    Ok((report, ode_v))
}

pub fn report_json(r: &FamilyReport) -> Value {
    json!({
        "family": r.family,
        "catalog": r.catalog.id(),
        "match": r.matched,
        "accessorySign": r.accessory_sign.map(|s| s.id()),
        "accessoryMap": r.accessory_map,
        "discrepancies": r.discrepancies,
    })
}
