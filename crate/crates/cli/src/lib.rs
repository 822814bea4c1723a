//! `lc`: evaluate, differentiate and reduce expressions over the
//! infinitesimal-enriched field, and draw the classical shadow plots.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use bcontinuum::calculus::{self, CalculusError};
use bcontinuum::expr::{eval_field, Binding, EvalError};
use bcontinuum::field::ParseLcError;
use bcontinuum::rational::{self, Rational};
use bcontinuum::sequence::{self, RationalSequence, SeqError};
use bcontinuum::shadows::{self, ShadowError};
use bcontinuum::{parse, svg, Expr, FieldError, LcNumber, DEFAULT_DEPTH};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_EVAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

const DEFAULT_SAMPLES: &str = "-4,-2,-1,0,1,2,4";

#[derive(Debug, Parser)]
#[command(name = "lc", version, about = "Exact arithmetic with infinitesimals")]
struct Cli {
    /// Steps kept by reciprocals and roots [default: $LC_DEPTH or 16]
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an expression in the field
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Bindings such as `x=1+eps,y=eps^(-1)`
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Derivative at a rational point, via the standard part of the difference quotient
    Diff {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// The point, as `1` or `x=1`
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Also write the zoom plot here
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Standard part of a limited number
    Shadow {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Leading term of a number (law of homogeneity)
    Tlh {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Shadow of the ellipse whose second focus is unlimitedly far
    Conic {
        /// x0 values at which to solve for y0
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_SAMPLES)]
        samples: String,
        /// The unlimited parameter
        #[arg(long = "h", default_value = "eps^(-1)", allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Decompose a sequence and embed it in the field
    Seq {
        /// `p(n)/q(n)` or `const:pi[:digits]`
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Plot a function on the standard scale and magnified by 1/eps
    Zoom {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Write the SVG here instead of stdout
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// Failure of a command: bad input (usage) or a computation that cannot
/// be carried out (evaluation).
#[derive(Debug)]
enum Failure {
    Usage(String),
    Eval(String),
}

impl Failure {
    fn eval(e: impl fmt::Display) -> Self {
        Failure::Eval(e.to_string())
    }
}

impl From<CalculusError> for Failure {
    fn from(e: CalculusError) -> Self {
        Failure::eval(e)
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::eval(e)
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::eval(e)
    }
}

impl From<ShadowError> for Failure {
    fn from(e: ShadowError) -> Self {
        Failure::eval(e)
    }
}

impl From<SeqError> for Failure {
    fn from(e: SeqError) -> Self {
        match e {
            SeqError::Syntax(_) | SeqError::Literal(_) | SeqError::UnknownConstant(_) | SeqError::NotRationalFunction(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::eval(other),
        }
    }
}

struct Output {
    text: String,
    json: Value,
}

/// Runs one invocation. `env_depth` is the value of `LC_DEPTH`, if set.
/// Returns the process exit code.
pub fn run<I, T>(args: I, env_depth: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = resolve_depth(cli.depth, env_depth).and_then(|depth| execute(&cli.command, depth));
    match result {
        Ok(o) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&o.json).expect("json values serialize")
            } else {
                o.text
            };
            let _ = writeln!(out, "{body}");
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nUsage: lc [--depth N] [--json] <eval|diff|shadow|tlh|conic|seq|zoom> ...\nRun `lc --help` for details.");
            EXIT_USAGE
        }
        Err(Failure::Eval(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_EVAL
        }
    }
}

fn resolve_depth(flag: Option<u32>, env: Option<&str>) -> Result<u32, Failure> {
    let depth = match (flag, env) {
        (Some(d), _) => d,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("LC_DEPTH must be a positive integer, got '{s}'")))?,
        (None, None) => DEFAULT_DEPTH,
    };
    if depth == 0 {
        return Err(Failure::Usage("depth must be at least 1".into()));
    }
    Ok(depth)
}

fn parse_expr(src: &str) -> Result<Expr, Failure> {
    parse(src).map_err(|e| Failure::Usage(format!("{e}\n  {src}\n  {}^", " ".repeat(e.pos))))
}

fn parse_lc(src: &str) -> Result<LcNumber, Failure> {
    src.parse()
        .map_err(|e: ParseLcError| Failure::Usage(format!("{e}\n  {src}\n  {}^", " ".repeat(e.pos))))
}

fn parse_rational(src: &str) -> Result<Rational, Failure> {
    rational::parse_rational(src.trim()).ok_or_else(|| Failure::Usage(format!("not a rational number: '{src}'")))
}

fn parse_bindings(list: &str) -> Result<Binding, Failure> {
    let mut b = Binding::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("binding '{item}' is not of the form name=value")))?;
        b.insert(name.trim().to_string(), parse_lc(value)?);
    }
    Ok(b)
}

/// `1` or `x=1`; the name, when given, must be the expression's variable.
fn parse_point(f: &Expr, at: &str) -> Result<Rational, Failure> {
    match at.split_once('=') {
        Some((name, value)) => {
            let var = calculus::sole_variable(f)?;
            if name.trim() != var {
                return Err(Failure::Usage(format!("--at names '{}', but the variable is '{var}'", name.trim())));
            }
            parse_rational(value)
        }
        None => parse_rational(at),
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Eval(format!("cannot write {}: {e}", path.display())))
}

fn execute(cmd: &Command, depth: u32) -> Result<Output, Failure> {
    match cmd {
        Command::Eval { expr, at } => {
            let e = parse_expr(expr)?;
            let b = match at {
                Some(list) => parse_bindings(list)?,
                None => Binding::new(),
            };
            let v = eval_field(&e, &b, depth)?;
            Ok(Output {
                text: v.to_string(),
                json: json!({
                    "command": "eval",
                    "expr": e.to_string(),
                    "binding": b.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect::<serde_json::Map<_, _>>(),
                    "depth": depth,
                    "value": v.to_string(),
                }),
            })
        }
        Command::Diff { expr, at, svg: svg_path } => {
            let f = parse_expr(expr)?;
            let x0 = parse_point(&f, at)?;
            let r = calculus::derivative(&f, &x0, depth)?;
            if let Some(path) = svg_path {
                write_file(path, &svg::zoom_svg(&f, &x0, depth)?)?;
            }
            Ok(Output {
                text: format!("{}\npre_shadow = {}", r.derivative_value, r.pre_shadow),
                json: json!({
                    "command": "diff",
                    "expr": f.to_string(),
                    "at": x0.to_string(),
                    "depth": depth,
                    "derivative": r.derivative_value.to_string(),
                    "pre_shadow": r.pre_shadow.to_string(),
                }),
            })
        }
        Command::Shadow { value } => {
            let x = parse_lc(value)?;
            let s = x.shadow()?;
            Ok(Output {
                text: s.value.to_string(),
                json: json!({
                    "command": "shadow",
                    "value": x.to_string(),
                    "shadow": s.value.to_string(),
                    "residue": s.residue,
                }),
            })
        }
        Command::Tlh { value } => {
            let x = parse_lc(value)?;
            let t = x.tlh()?;
            let oc = x.order_class()?;
            Ok(Output {
                text: t.to_string(),
                json: json!({
                    "command": "tlh",
                    "value": x.to_string(),
                    "tlh": t.to_string(),
                    "order_class": oc,
                }),
            })
        }
        Command::Conic { samples, h, svg: svg_path } => {
            let h = parse_lc(h)?;
            let xs = samples
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            let state = shadows::conic_shadow(&h, &xs)?;
            let derivation = shadows::rederive_conic(&h).ok();
            if let Some(path) = svg_path {
                write_file(path, &svg::parabola_svg(&state))?;
            }
            let equation = state.equation();
            let points: Vec<String> = state.points.iter().map(|(x, y)| format!("({x},{y})")).collect();
            Ok(Output {
                text: format!("{equation}; points: {}", points.join(" ")),
                json: json!({
                    "command": "conic",
                    "H": h.to_string(),
                    "equation": equation,
                    "shadow_coeffs": state.shadow_coeffs.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    "points": state.points.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect::<Vec<_>>(),
                    "derivation_matches": derivation.map(|d| d.matches_printed),
                }),
            })
        }
        Command::Seq { literal } => {
            let s: RationalSequence = literal.parse()?;
            let dec = sequence::decompose(&s);
            let is_null = sequence::is_null(&s)?;
            let ez = sequence::eventually_zero(&s).ok();
            let embed = sequence::asymptotic_embed(&s, depth).ok();
            let terms: Vec<String> = (s.offset()..s.offset() + 5)
                .filter_map(|n| s.term(n))
                .map(|q| q.to_string())
                .collect();
            let (sp, residue) = match &dec {
                Ok(d) => (d.standard_part.to_string(), d.residue_sign.to_string()),
                Err(SeqError::Unbounded) => ("unbounded".to_string(), "none".to_string()),
                Err(e) => return Err(Failure::eval(e)),
            };
            let mut text = vec![
                format!("sequence: {s}"),
                format!("terms from n = {}: {}", s.offset(), terms.join(", ")),
                format!("standard_part: {sp}"),
                format!("residue: {residue}"),
                format!("null: {is_null}"),
            ];
            if let Some(ez) = ez {
                text.push(format!("eventually_zero: {ez}"));
            }
            text.push(format!(
                "embed: {}",
                embed.as_ref().map_or("unsupported".to_string(), |e| e.to_string())
            ));
            Ok(Output {
                text: text.join("\n"),
                json: json!({
                    "command": "seq",
                    "sequence": s.to_string(),
                    "offset": s.offset(),
                    "terms": terms,
                    "decomposition": dec.ok(),
                    "is_null": is_null,
                    "eventually_zero": ez,
                    "depth": depth,
                    "embed": embed.map(|e| e.to_string()),
                }),
            })
        }
        Command::Zoom { expr, at, svg: svg_path } => {
            let f = parse_expr(expr)?;
            let x0 = parse_point(&f, at)?;
            let samples = svg::zoom_samples(&f, &x0, &svg::zoom_offsets(), depth)?;
            let slope = svg::zoom_slope(&samples).expect("offsets include 1");
            let plot = svg::zoom_svg(&f, &x0, depth)?;
            let text = match svg_path {
                Some(path) => {
                    write_file(path, &plot)?;
                    format!("slope = {slope}")
                }
                None => plot.trim_end().to_string(),
            };
            Ok(Output {
                text,
                json: json!({
                    "command": "zoom",
                    "expr": f.to_string(),
                    "at": x0.to_string(),
                    "depth": depth,
                    "slope": slope.to_string(),
                    "samples": samples.iter().map(|(k, v)| [k.to_string(), v.to_string()]).collect::<Vec<_>>(),
                }),
            })
        }
    }
}
