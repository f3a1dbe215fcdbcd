//! Subcommands: argument definitions and handlers producing a [`Report`].

use std::path::PathBuf;

use bracketlab_core::cohoengine::{
    betti_table, build_complex, interpret_h, ComplexKind, TruncatedComplex, Window,
};
use bracketlab_core::connections::{
    curvature, curvature_vs_fn, hierarchy, hierarchy_commutator_check, vertical_complex, Connection,
};
use bracketlab_core::poisson::{
    compatible, extended_bracket, extended_bracket_oracle, involution_check, jacobi_defect,
    magri_chain, poisson_conditions, PoissonStructure,
};
use bracketlab_core::symbols::{canonical_bracket, symbol_bracket, Symbol, SymbolSpace};
use bracketlab_core::tensorcalc::{
    contract_form, contract_multi, lie_form, schouten, schouten_oracle,
};
use bracketlab_core::vvforms::{
    contract_general, contract_into_multivector, contract_vform, extract_bracket, fn_bracket,
    lie_general, nr_bracket, BracketProblem, BracketSetting, ExtractOutcome, TargetSpace,
};
use bracketlab_core::{Form, Multivector, Poly, VForm};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value as Json};

use crate::expr::Value;
use crate::workspace::{context, Workspace};
use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "bracketlab",
    version,
    about = "Exact Schouten, Frölicher–Nijenhuis and Poisson calculus on polynomial algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Comma-separated variable names, in order. Inferred (sorted by name)
    /// when neither this nor --ws is given.
    #[arg(long, global = true, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Workspace file with variables and named definitions.
    #[arg(long, global = true)]
    pub ws: Option<PathBuf>,
    /// Emit a JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add details to the text output.
    #[arg(long, short = 'v', global = true)]
    pub verbose: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Pair {
    #[arg(short = 'a')]
    pub a: String,
    #[arg(short = 'b')]
    pub b: String,
}

#[derive(Args, Debug, Clone)]
pub struct Complex {
    #[arg(short = 'P')]
    pub p: String,
    /// Coefficient degree cap of the lowest space in the window.
    #[arg(long, default_value_t = 2)]
    pub cap: u32,
    /// Inclusive range of positions, `lo..hi`.
    #[arg(long, default_value = "0..2")]
    pub window: String,
}

#[derive(Args, Debug, Clone)]
pub struct ConnectionArgs {
    /// Base variables.
    #[arg(long, value_delimiter = ',')]
    pub base: Option<Vec<String>>,
    /// Fiber variables.
    #[arg(long, value_delimiter = ',')]
    pub fiber: Option<Vec<String>>,
    /// `;`-separated vertical fields `Γ_i = Σ_α Γ_i^α @u_α`, one per base
    /// variable, so that `∇(@x_i) = @x_i + Γ_i`.
    #[arg(long)]
    pub gamma: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Schouten bracket [[A,B]] of two multivectors.
    Schouten(Pair),
    /// Frölicher–Nijenhuis bracket of two elements of D_1(Λ^*).
    Fn(Pair),
    /// Nijenhuis–Richardson bracket of two elements of D_1(Λ^*).
    Nr(Pair),
    /// Lie derivative of a form along a multivector or vector-valued form.
    Lie {
        #[arg(short = 'X')]
        x: String,
        #[arg(short = 'w')]
        w: String,
    },
    /// Inner product i_A(B).
    Contract(Pair),
    /// De Rham differential of a form.
    D {
        #[arg(short = 'e')]
        e: String,
    },
    /// Whether a bivector is Poisson.
    PoissonCheck {
        #[arg(short = 'e')]
        e: String,
    },
    /// Truncated Poisson cohomology.
    PoissonCoho(Complex),
    /// Truncated Poisson homology.
    PoissonHomo(Complex),
    /// Extended Poisson bracket of two forms.
    ExtendedBracket {
        #[arg(short = 'P')]
        p: String,
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
    },
    /// Whether two Poisson structures are compatible.
    Compatible {
        #[arg(short = 'P')]
        p: String,
        #[arg(short = 'Q')]
        q: String,
    },
    /// Magri chain P(a_s) = Q(a_{s+1}) from a seed.
    Magri {
        #[arg(short = 'P')]
        p: String,
        #[arg(short = 'Q')]
        q: String,
        #[arg(long)]
        seed: String,
        /// Number of chain elements, seed included.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Coefficient degree cap of each solve.
        #[arg(long, default_value_t = 4)]
        cap: u32,
    },
    /// Bracket of two symbols written in x and p_x.
    SymbolsBracket {
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
        /// Base variables; the symbol variables are `p_<name>`.
        #[arg(long, value_delimiter = ',')]
        base: Option<Vec<String>>,
    },
    /// Curvature of a connection against the FN self-bracket of its form.
    ConnectionCurvature(ConnectionArgs),
    /// Truncated cohomology of the vertical complex of a flat connection.
    VerticalCoho {
        #[command(flatten)]
        conn: ConnectionArgs,
        #[arg(long, default_value_t = 1)]
        cap: u32,
        #[arg(long, default_value = "0..1")]
        window: String,
    },
    /// Hierarchy X_{k+1} = i_{X_k}(R), optionally with a commuting check.
    Hierarchy {
        #[command(flatten)]
        conn: ConnectionArgs,
        /// Vertical field.
        #[arg(short = 'X')]
        x: String,
        /// Vertical vector-valued 1-form.
        #[arg(short = 'R')]
        r: String,
        /// Second vertical field; checks [X_a, Y_b] for a, b <= steps.
        #[arg(short = 'Y')]
        y: Option<String>,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
    /// Search for B with L_B = [L_A, L_B'] in a setting.
    ExtractBracket {
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
        /// `derham`, `poisson:<bivector>` or `nijenhuis:<N>`.
        #[arg(long, default_value = "derham")]
        setting: String,
        /// `natural`, `all` or a bidegree `j,i`.
        #[arg(long, default_value = "natural")]
        target: String,
        #[arg(long, default_value_t = 1)]
        cap: u32,
    },
    /// Run a file of invocations, one JSON array of arguments per line;
    /// prints one JSON object per line.
    Batch { file: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Schouten(_) => "schouten",
            Command::Fn(_) => "fn",
            Command::Nr(_) => "nr",
            Command::Lie { .. } => "lie",
            Command::Contract(_) => "contract",
            Command::D { .. } => "d",
            Command::PoissonCheck { .. } => "poisson-check",
            Command::PoissonCoho(_) => "poisson-coho",
            Command::PoissonHomo(_) => "poisson-homo",
            Command::ExtendedBracket { .. } => "extended-bracket",
            Command::Compatible { .. } => "compatible",
            Command::Magri { .. } => "magri",
            Command::SymbolsBracket { .. } => "symbols-bracket",
            Command::ConnectionCurvature(_) => "connection-curvature",
            Command::VerticalCoho { .. } => "vertical-coho",
            Command::Hierarchy { .. } => "hierarchy",
            Command::ExtractBracket { .. } => "extract-bracket",
            Command::Batch { .. } => "batch",
        }
    }
}

/// Output of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub lines: Vec<String>,
    /// Shown with `--verbose`.
    pub details: Vec<String>,
    pub data: Map<String, Json>,
    pub code: i32,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            lines: Vec::new(),
            details: Vec::new(),
            data: Map::new(),
            code: 0,
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn detail(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    fn set(&mut self, key: &str, v: Json) {
        self.data.insert(key.to_string(), v);
    }

    pub fn render(&self, json: bool, verbose: bool) -> String {
        if json {
            let mut obj = self.data.clone();
            obj.insert("schema_version".into(), json!(crate::SCHEMA_VERSION));
            obj.insert("command".into(), json!(self.command));
            obj.insert("exit_code".into(), json!(self.code));
            return format!("{}\n", Json::Object(obj));
        }
        let mut out = String::new();
        for l in self
            .lines
            .iter()
            .chain(if verbose { &self.details[..] } else { &[] })
        {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

/// Vector-valued forms of form degree 0 print as multivectors, and those
/// of multivector degree 0 as forms.
fn show(o: &VForm) -> String {
    match (o.form_degree(), o.multi_degree()) {
        (0, _) => o.as_multivector().map(|x| x.to_string()),
        (_, 0) => o.as_form().map(|w| w.to_string()),
        _ => Ok(o.to_string()),
    }
    .unwrap_or_else(|_| o.to_string())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn max_degree() -> Result<u32, CliError> {
    match std::env::var("BRACKETLAB_MAX_DEGREE") {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "BRACKETLAB_MAX_DEGREE must be a non-negative integer, got {s:?}"
            ))
        }),
        Err(_) => Ok(crate::DEFAULT_MAX_DEGREE),
    }
}

fn check_cap(cap: u32) -> Result<(), CliError> {
    let max = max_degree()?;
    if cap > max {
        return Err(CliError::Usage(format!(
            "degree cap {cap} exceeds BRACKETLAB_MAX_DEGREE = {max}"
        )));
    }
    Ok(())
}

fn parse_window(s: &str) -> Result<Window, CliError> {
    let bad = || CliError::Usage(format!("window must look like lo..hi, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (i64, i64) = (
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    );
    Window::new(lo, hi).map_err(CliError::Math)
}

/// Parsing context shared by the arguments of one command.
struct Ctx {
    ws: Workspace,
    max: u32,
}

impl Ctx {
    fn for_sources(g: &GlobalOpts, sources: &[&str]) -> Result<Self, CliError> {
        let ws = match (&g.ws, &g.vars) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "--vars and --ws are mutually exclusive".into(),
                ))
            }
            (Some(path), None) => Workspace::load(path)?,
            (None, Some(vars)) => Workspace::new(context(vars)?),
            (None, None) => Workspace::inferred(sources)?,
        };
        Ok(Ctx {
            ws,
            max: max_degree()?,
        })
    }

    fn value(&self, src: &str) -> Result<Value, CliError> {
        let v = self.ws.parse(src).map_err(|e| CliError::Parse {
            src: src.to_string(),
            err: e,
        })?;
        if v.max_coeff_degree().is_some_and(|d| d > self.max) {
            return Err(CliError::Usage(format!(
                "coefficient degree of {src:?} exceeds BRACKETLAB_MAX_DEGREE = {}",
                self.max
            )));
        }
        Ok(v)
    }

    fn multi(&self, src: &str) -> Result<Multivector, CliError> {
        self.value(src)?.into_multi().map_err(|e| arg_error(src, e))
    }

    fn bivector(&self, src: &str) -> Result<Multivector, CliError> {
        let p = self.multi(src)?;
        if p.degree() != 2 && !p.is_zero() {
            return Err(arg_error(
                src,
                format!(
                    "expected a bivector, got a multivector of degree {}",
                    p.degree()
                ),
            ));
        }
        Ok(if p.is_zero() {
            Multivector::zero(self.ws.ctx(), 2)
        } else {
            p
        })
    }

    fn form(&self, src: &str) -> Result<Form, CliError> {
        self.value(src)?.into_form().map_err(|e| arg_error(src, e))
    }

    fn poly(&self, src: &str) -> Result<Poly, CliError> {
        self.value(src)?.into_poly().map_err(|e| arg_error(src, e))
    }

    fn vform(&self, src: &str) -> Result<VForm, CliError> {
        Ok(self.value(src)?.into_vform())
    }

    fn poisson(&self, src: &str) -> Result<PoissonStructure, CliError> {
        PoissonStructure::new(self.bivector(src)?).map_err(|e| arg_error(src, e.to_string()))
    }

    fn vars_json(&self) -> Json {
        json!(self.ws.ctx().names())
    }
}

fn arg_error(src: &str, msg: impl Into<String>) -> CliError {
    CliError::Usage(format!("argument {src:?}: {}", msg.into()))
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Schouten(Pair { a, b }) => {
            let c = Ctx::for_sources(g, &[a, b])?;
            let (x, y) = (c.multi(a)?, c.multi(b)?);
            let r = schouten(&x, &y)?;
            let agrees =
                r == schouten_oracle(&x, &y)? || r.is_zero() && schouten_oracle(&x, &y)?.is_zero();
            let mut rep = Report::new("schouten");
            rep.line(format!("[[A,B]] = {r}"));
            rep.line(format!(
                "rewrite-rule route: {}",
                if agrees { "agrees" } else { "DISAGREES" }
            ));
            rep.set("vars", c.vars_json());
            rep.set("result", json!(r.to_string()));
            rep.set("degree", json!(r.degree()));
            rep.set("routes_agree", json!(agrees));
            Ok(rep)
        }
        Command::Fn(Pair { a, b }) | Command::Nr(Pair { a, b }) => {
            let c = Ctx::for_sources(g, &[a, b])?;
            let (o, op) = (c.vform(a)?, c.vform(b)?);
            let is_fn = matches!(cli.command, Command::Fn(_));
            let r = if is_fn {
                fn_bracket(&o, &op)?
            } else {
                nr_bracket(&o, &op)?
            };
            let mut rep = Report::new(cli.command.name());
            rep.line(if is_fn {
                format!("[[A,B]] = {r}")
            } else {
                format!("[A,B]^NR = {r}")
            });
            rep.set("vars", c.vars_json());
            rep.set("result", json!(r.to_string()));
            rep.set("bidegree", json!([r.form_degree(), r.multi_degree()]));
            Ok(rep)
        }
        Command::Lie { x, w } => {
            let c = Ctx::for_sources(g, &[x, w])?;
            let form = c.form(w)?;
            let r = match c.value(x)? {
                Value::VForm(o) if o.form_degree() > 0 => lie_general(&o, &form)?,
                v => lie_form(&v.into_multi().map_err(|e| arg_error(x, e))?, &form)?,
            };
            let mut rep = Report::new("lie");
            rep.line(format!("L_X(w) = {r}"));
            rep.set("vars", c.vars_json());
            rep.set("result", json!(r.to_string()));
            rep.set("degree", json!(r.degree()));
            Ok(rep)
        }
        Command::Contract(Pair { a, b }) => {
            let c = Ctx::for_sources(g, &[a, b])?;
            let r = match (c.value(a)?, c.value(b)?) {
                (Value::VForm(o), Value::VForm(op)) => Value::VForm(contract_vform(&o, &op)?),
                (Value::VForm(o), Value::Multi(x)) => {
                    Value::Multi(contract_into_multivector(&o, &x)?)
                }
                (Value::VForm(o), w) => Value::Form(contract_general(
                    &o,
                    &w.into_form().map_err(|e| arg_error(b, e))?,
                )?),
                (Value::Form(w), x) => Value::Multi(contract_multi(
                    &w,
                    &x.into_multi().map_err(|e| arg_error(b, e))?,
                )?),
                (Value::Multi(x), w) => Value::Form(contract_form(
                    &x,
                    &w.into_form().map_err(|e| arg_error(b, e))?,
                )?),
                (Value::Scalar(p), v) => match v {
                    Value::Form(w) => Value::Form(w.mul_poly(&p)),
                    Value::Multi(x) => Value::Multi(x.mul_poly(&p)),
                    Value::VForm(o) => Value::VForm(o.mul_poly(&p)),
                    Value::Scalar(q) => Value::Scalar(&p * &q),
                },
            };
            let mut rep = Report::new("contract");
            rep.line(format!("i_A(B) = {r}"));
            rep.set("vars", c.vars_json());
            rep.set("kind", json!(r.kind()));
            rep.set("result", json!(r.to_string()));
            Ok(rep)
        }
        Command::D { e } => {
            let c = Ctx::for_sources(g, &[e])?;
            let r = c.form(e)?.d();
            let mut rep = Report::new("d");
            rep.line(format!("d(e) = {r}"));
            rep.set("vars", c.vars_json());
            rep.set("result", json!(r.to_string()));
            rep.set("degree", json!(r.degree()));
            Ok(rep)
        }
        Command::PoissonCheck { e } => {
            let c = Ctx::for_sources(g, &[e])?;
            let p = c.bivector(e)?;
            let defect = jacobi_defect(&p)?;
            let cond = poisson_conditions(&p)?;
            let mut rep = Report::new("poisson-check");
            if defect.is_zero() {
                rep.line("Poisson: yes ([[P,P]] = 0)");
            } else {
                rep.line(format!("Poisson: no ([[P,P]] = {defect})"));
            }
            rep.detail(format!(
                "Jacobi identity on coordinates: {}",
                yes(cond.jacobi_on_generators)
            ));
            rep.detail(format!("[[P,P]] = 0: {}", yes(cond.schouten_vanishes)));
            rep.detail(format!(
                "[[P,[[P,.]]]] = 0 on a spanning sample: {}",
                yes(cond.cochain_square_vanishes)
            ));
            rep.set("vars", c.vars_json());
            rep.set("poisson", json!(defect.is_zero()));
            rep.set("defect", json!(defect.to_string()));
            rep.set(
                "conditions",
                json!({
                    "jacobi_on_generators": cond.jacobi_on_generators,
                    "schouten_vanishes": cond.schouten_vanishes,
                    "cochain_square_vanishes": cond.cochain_square_vanishes,
                    "agree": cond.agree(),
                }),
            );
            Ok(rep)
        }
        Command::PoissonCoho(cx) | Command::PoissonHomo(cx) => {
            let c = Ctx::for_sources(g, &[&cx.p])?;
            check_cap(cx.cap)?;
            let window = parse_window(&cx.window)?;
            let ps = c.poisson(&cx.p)?;
            let cochain = matches!(cli.command, Command::PoissonCoho(_));
            let kind = if cochain {
                ComplexKind::PoissonCochain(ps)
            } else {
                ComplexKind::PoissonChain(ps)
            };
            let complex = build_complex(kind, cx.cap, window)?;
            let mut rep = betti_report(
                cli.command.name(),
                &complex,
                if cochain { "H^" } else { "H_" },
            )?;
            rep.set("vars", c.vars_json());
            Ok(rep)
        }
        Command::ExtendedBracket { p, a, b } => {
            let c = Ctx::for_sources(g, &[p, a, b])?;
            let ps = c.poisson(p)?;
            let (w, wp) = (c.form(a)?, c.form(b)?);
            let r = extended_bracket(&ps, &w, &wp)?;
            let other = extended_bracket_oracle(&ps, &w, &wp)?;
            let agrees = r == other || r.is_zero() && other.is_zero();
            let mut rep = Report::new("extended-bracket");
            rep.line(format!("{{a,b}}_P = {r}"));
            rep.line(format!(
                "derived-bracket route: {}",
                if agrees { "agrees" } else { "DISAGREES" }
            ));
            rep.set("vars", c.vars_json());
            rep.set("result", json!(r.to_string()));
            rep.set("degree", json!(r.degree()));
            rep.set("routes_agree", json!(agrees));
            Ok(rep)
        }
        Command::Compatible { p, q } => {
            let c = Ctx::for_sources(g, &[p, q])?;
            let res = compatible(&c.poisson(p)?, &c.poisson(q)?)?;
            let mut rep = Report::new("compatible");
            if res.compatible {
                rep.line("compatible: yes ([[P,Q]] = 0)");
            } else {
                rep.line(format!("compatible: no ([[P,Q]] = {})", res.defect));
            }
            rep.set("vars", c.vars_json());
            rep.set("compatible", json!(res.compatible));
            rep.set("defect", json!(res.defect.to_string()));
            Ok(rep)
        }
        Command::Magri {
            p,
            q,
            seed,
            steps,
            cap,
        } => {
            let c = Ctx::for_sources(g, &[p, q, seed])?;
            check_cap(*cap)?;
            if *steps == 0 {
                return Err(CliError::Usage("--steps must be at least 1".into()));
            }
            let (ps, qs) = (c.poisson(p)?, c.poisson(q)?);
            let a = c.poly(seed)?;
            let (chain, complete) = magri_chain(&ps, &qs, &a, *steps, *cap)?;
            let involution = involution_check(&chain)?;
            let elems: Vec<String> = chain.elements.iter().map(|e| e.to_string()).collect();
            let mut rep = Report::new("magri");
            if complete {
                rep.line(format!("chain {}", elems.join(", ")));
            } else {
                rep.line(format!(
                    "chain {} (no solution for element {} with coefficient degree <= {cap})",
                    elems.join(", "),
                    elems.len() + 1
                ));
                rep.code = 2;
            }
            rep.line(format!("involution: {}", yes(involution)));
            rep.detail(format!(
                "recursion P(a_s) = Q(a_s+1) holds: {}",
                yes(chain.is_valid()?)
            ));
            rep.set("vars", c.vars_json());
            rep.set("chain", json!(elems));
            rep.set("complete", json!(complete));
            rep.set("involution", json!(involution));
            rep.set("cap", json!(cap));
            Ok(rep)
        }
        Command::SymbolsBracket { a, b, base } => {
            let names: Vec<String> = match (base, &g.vars, &g.ws) {
                (Some(b), _, _) | (None, Some(b), _) => b.clone(),
                (None, None, Some(path)) => Workspace::load(path)?.ctx().names().to_vec(),
                (None, None, None) => {
                    let ws = Workspace::inferred(&[a, b])?;
                    let mut n: Vec<String> = ws
                        .ctx()
                        .names()
                        .iter()
                        .map(|s| s.strip_prefix("p_").unwrap_or(s).to_string())
                        .collect();
                    n.sort();
                    n.dedup();
                    n
                }
            };
            let sp = SymbolSpace::new(&context(&names)?)?;
            let c = Ctx {
                ws: Workspace::new(sp.ext().clone()),
                max: max_degree()?,
            };
            let sa = Symbol::from_poly(&sp, c.poly(a)?).map_err(|e| arg_error(a, e.to_string()))?;
            let sb = Symbol::from_poly(&sp, c.poly(b)?).map_err(|e| arg_error(b, e.to_string()))?;
            let r = symbol_bracket(&sp, &sa, &sb)?;
            let canon = canonical_bracket(&sp, &sa, &sb)?;
            let agrees = r.poly() == canon.poly();
            let mut rep = Report::new("symbols-bracket");
            rep.line(format!("{{a,b}} = {r}"));
            rep.line(format!(
                "canonical formula: {}",
                if agrees { "agrees" } else { "DISAGREES" }
            ));
            rep.detail(format!(
                "grades: {} and {} -> {}",
                sa.grade(),
                sb.grade(),
                r.grade()
            ));
            rep.set("vars", c.vars_json());
            rep.set("result", json!(r.to_string()));
            rep.set("grade", json!(r.grade()));
            rep.set("canonical_agrees", json!(agrees));
            Ok(rep)
        }
        Command::ConnectionCurvature(args) => {
            let (c, conn) = connection(g, args)?;
            let report = curvature_vs_fn(&conn)?;
            let base = conn.base().names();
            let total = conn.total().names();
            let mut rep = Report::new("connection-curvature");
            rep.line(format!("flat: {}", yes(report.flat)));
            for k in 0..conn.m() {
                for l in k + 1..conn.m() {
                    rep.line(format!(
                        "R(@{},@{}) = {}",
                        base[k],
                        base[l],
                        curvature(&conn, k, l)?
                    ));
                }
            }
            let pairs: Vec<Json> = report
                .pairs
                .iter()
                .map(|pr| {
                    json!({
                        "x": total[pr.k], "x'": total[pr.l],
                        "twice_curvature": pr.rhs.to_string(),
                        "i_X(i_X'[[U,U]])": pr.lhs.to_string(),
                        "i_X'(i_X[[U,U]])": pr.lhs_swapped.to_string(),
                    })
                })
                .collect();
            rep.line(format!("[[U,U]] = 0: {}", yes(report.fn_square_vanishes)));
            rep.line(format!(
                "i_X'(i_X[[U,U]]) = 2R(X,X'): {}",
                yes(report.swapped_holds)
            ));
            rep.line(format!(
                "i_X(i_X'[[U,U]]) = 2R(X,X'): {}",
                yes(report.holds)
            ));
            rep.detail(format!(
                "U = {}",
                bracketlab_core::connections::connection_form(&conn)
            ));
            rep.set("vars", c.vars_json());
            rep.set("flat", json!(report.flat));
            rep.set("fn_square_vanishes", json!(report.fn_square_vanishes));
            rep.set("inner_first_identity", json!(report.swapped_holds));
            rep.set("outer_first_identity", json!(report.holds));
            rep.set("pairs", json!(pairs));
            Ok(rep)
        }
        Command::VerticalCoho {
            conn: args,
            cap,
            window,
        } => {
            check_cap(*cap)?;
            let window = parse_window(window)?;
            let (c, conn) = connection(g, args)?;
            let complex = vertical_complex(&conn, *cap, window)?;
            let mut rep = betti_report("vertical-coho", &complex, "H^")?;
            rep.set("vars", c.vars_json());
            Ok(rep)
        }
        Command::Hierarchy {
            conn: args,
            x,
            r,
            y,
            steps,
        } => {
            let (c, conn) = connection(g, args)?;
            if *steps > 16 {
                return Err(CliError::Usage("--steps is limited to 16".into()));
            }
            let xv = c.vform(x)?;
            let rv = c.vform(r)?;
            let chain = hierarchy(&conn, &xv, &rv, *steps)?;
            let mut rep = Report::new("hierarchy");
            for (k, z) in chain.iter().enumerate() {
                rep.line(format!("X_{k} = {}", show(z)));
            }
            rep.set("vars", c.vars_json());
            rep.set("chain", json!(chain.iter().map(show).collect::<Vec<_>>()));
            if let Some(y) = y {
                let yv = c.vform(y)?;
                let h = hierarchy_commutator_check(&conn, &xv, &yv, &rv, *steps, *steps, None)?;
                let all_zero = h.commutators.iter().all(|(_, _, v)| v.is_zero());
                rep.line(format!(
                    "hypotheses ([[X,R]] = [[Y,R]] = 0, [X,Y] = 0): {}",
                    yes(h.corollary_hypotheses)
                ));
                rep.line(format!(
                    "[X_a,Y_b] = 0 for a,b <= {steps}: {}",
                    yes(all_zero)
                ));
                rep.line(format!("commutator formula defect: {}", h.defect));
                rep.detail(format!(
                    "cocycles: X {}, Y {}, R {}",
                    yes(h.x_cocycle),
                    yes(h.y_cocycle),
                    yes(h.r_cocycle)
                ));
                for (a, b, v) in &h.commutators {
                    rep.detail(format!("[X_{a},Y_{b}] = {}", show(v)));
                }
                rep.set("hypotheses", json!(h.corollary_hypotheses));
                rep.set("commute", json!(all_zero));
                rep.set("defect", json!(h.defect.to_string()));
            }
            Ok(rep)
        }
        Command::ExtractBracket {
            a,
            b,
            setting,
            target,
            cap,
        } => {
            check_cap(*cap)?;
            let (kind, setting_src) = match setting.split_once(':') {
                Some((k, s)) => (k, Some(s)),
                None => (setting.as_str(), None),
            };
            let mut sources = vec![a.as_str(), b.as_str()];
            sources.extend(setting_src);
            let c = Ctx::for_sources(g, &sources)?;
            let setting = match (kind, setting_src) {
                ("derham", None) => BracketSetting::DeRham,
                ("poisson", Some(s)) => BracketSetting::Poisson(c.bivector(s)?),
                ("nijenhuis", Some(s)) => BracketSetting::Nijenhuis(c.vform(s)?),
                _ => return Err(CliError::Usage(format!("unknown setting {setting:?}"))),
            };
            let target = match target.as_str() {
                "natural" => TargetSpace::Natural,
                "all" => TargetSpace::AllWithShift,
                t => {
                    let bad = || {
                        CliError::Usage(format!("target must be natural, all or j,i; got {t:?}"))
                    };
                    let (j, i) = t.split_once(',').ok_or_else(bad)?;
                    TargetSpace::Bidegree(
                        j.trim().parse().map_err(|_| bad())?,
                        i.trim().parse().map_err(|_| bad())?,
                    )
                }
            };
            let prob = BracketProblem {
                setting,
                lhs: c.vform(a)?,
                rhs: c.vform(b)?,
                target,
                degree_cap: *cap,
            };
            let out = extract_bracket(&prob)?;
            let mut rep = Report::new("extract-bracket");
            rep.set("vars", c.vars_json());
            rep.set("cap", json!(cap));
            match &out {
                ExtractOutcome::Found {
                    components,
                    kernel_dim,
                    unknowns,
                    arguments,
                } => {
                    match out.element() {
                        Some(e) => rep.line(format!("bracket = {}", show(&e))),
                        None => {
                            rep.line("bracket components:");
                            for comp in components.iter().filter(|c| !c.is_zero()) {
                                rep.line(format!(
                                    "  [{},{}] {}",
                                    comp.form_degree(),
                                    comp.multi_degree(),
                                    show(comp)
                                ));
                            }
                        }
                    }
                    rep.line(format!("elements acting trivially: {kernel_dim}"));
                    rep.detail(format!("unknowns {unknowns}, arguments {arguments}"));
                    rep.set("found", json!(true));
                    rep.set(
                        "components",
                        json!(components.iter().map(show).collect::<Vec<_>>()),
                    );
                    rep.set("kernel_dim", json!(kernel_dim));
                }
                ExtractOutcome::NoRepresentative {
                    witness,
                    cap,
                    unknowns,
                    arguments_checked,
                } => {
                    rep.line(format!(
                        "no representative with coefficient degree <= {cap}"
                    ));
                    rep.line(format!("witness: {witness}"));
                    rep.detail(format!(
                        "unknowns {unknowns}, arguments checked {arguments_checked}"
                    ));
                    rep.set("found", json!(false));
                    rep.set("witness", json!(witness.to_string()));
                    rep.code = 2;
                }
            }
            Ok(rep)
        }
        Command::Batch { .. } => Err(CliError::Usage("batch files cannot nest".into())),
    }
}

fn betti_report(
    command: &'static str,
    complex: &TruncatedComplex,
    h: &str,
) -> Result<Report, CliError> {
    let table = betti_table(complex)?;
    let mut rep = Report::new(command);
    rep.line(format!(
        "Betti table {}",
        table
            .iter()
            .map(|(_, b)| b.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    for &(k, b) in &table {
        let hr = interpret_h(complex, k)?;
        rep.detail(format!("{h}{k}: {b} ({})", hr.label));
        for e in &hr.representatives {
            rep.detail(format!("  {e}"));
        }
    }
    rep.detail(format!(
        "compositions vanish: {}",
        yes(complex.compositions_vanish())
    ));
    rep.set("cap", json!(complex.cap));
    rep.set("window", json!([complex.window.lo, complex.window.hi]));
    rep.set(
        "betti",
        json!(table
            .iter()
            .map(|&(k, b)| json!({"position": k, "dim": b}))
            .collect::<Vec<_>>()),
    );
    rep.set(
        "dims",
        json!(complex
            .dims()
            .iter()
            .map(|&(k, d)| json!({"position": k, "dim": d}))
            .collect::<Vec<_>>()),
    );
    rep.set("compositions_vanish", json!(complex.compositions_vanish()));
    Ok(rep)
}

fn connection(g: &GlobalOpts, args: &ConnectionArgs) -> Result<(Ctx, Connection), CliError> {
    let ws = match (&args.base, &args.fiber) {
        (Some(b), Some(f)) => {
            if g.ws.is_some() || g.vars.is_some() {
                return Err(CliError::Usage(
                    "--base/--fiber cannot be combined with --vars or --ws".into(),
                ));
            }
            Workspace::new(context(&[&b[..], &f[..]].concat())?)
        }
        (None, None) => {
            let path = g.ws.as_ref().ok_or_else(|| {
                CliError::Usage("pass --base and --fiber, or a --ws with fiber_split".into())
            })?;
            Workspace::load(path)?
        }
        _ => return Err(CliError::Usage("--base and --fiber go together".into())),
    };
    let m = match (&args.base, ws.fiber_split()) {
        (Some(b), _) => b.len(),
        (None, Some((m, _))) => m,
        (None, None) => return Err(CliError::Usage("workspace has no fiber_split".into())),
    };
    let c = Ctx {
        ws,
        max: max_degree()?,
    };
    let total = c.ws.ctx().clone();
    let base = context(&total.names()[..m])?;
    let fields: Vec<&str> = args.gamma.split(';').map(str::trim).collect();
    if fields.len() != m {
        return Err(CliError::Usage(format!(
            "--gamma needs {m} fields separated by ';', got {}",
            fields.len()
        )));
    }
    let mut gamma = Vec::new();
    for src in fields {
        let x = c.multi(src)?;
        if x.degree() != 1 && !x.is_zero() {
            return Err(arg_error(src, "expected a vector field"));
        }
        let coeffs = if x.is_zero() {
            vec![Poly::zero(&total); total.n()]
        } else {
            x.field_coeffs()
        };
        if coeffs[..m].iter().any(|p| !p.is_zero()) {
            return Err(arg_error(src, "expected a vertical vector field"));
        }
        gamma.push(coeffs[m..].to_vec());
    }
    let conn = Connection::over(&base, &total, gamma)?;
    Ok((c, conn))
}
