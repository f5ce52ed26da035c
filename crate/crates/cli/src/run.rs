use std::path::Path;
use std::sync::Arc;

use dfoperad::bridge::{
    check_df_monoid, df_from_monoid, df_from_multicat, mackey_from_monoid, monoid_from_mackey, multicat_from_df,
    roundtrip_check, BridgeError, DfMonoid,
};
use dfoperad::dblcat::{
    check_lax_functor, check_pb_functoriality, check_product_preservation, BoundedSite, DblCatError, DfOperad,
};
use dfoperad::fincat::{corpus, FinCat};
use dfoperad::finset::FinSet;
use dfoperad::monoidal::{
    check_beck_chevalley, check_fibration, indexed_monoidal, tensor_witnesses, Mode, MonoidalError, TensorWitness,
};
use dfoperad::multicat::{
    check_comm_monoid, check_multicat, discrete_multicat, endomorphism_multicat, identities_only_multicat,
    terminal_multicat, CommMonoid, MulticatError, SymMulticat,
};
use dfoperad::report::{Bounds, CheckOutcome, Report};
use serde::Serialize;
use serde_json::{json, Value};

use crate::doc::{self, Loaded, SCHEMA};
use crate::emit::Rendered;
use crate::{BuildCommand, CheckCommand, Cli, CliError, Command, ExtractCommand, GenKind, ModeArg};

const DEFAULT_SITE_BOUND: usize = 4;

pub struct RunOutput {
    pub text: String,
    pub passed: bool,
}

/// Why a command stopped early: bad input, or a construction that refused
/// its input with a witness (reported as a failed check).
enum Stop {
    Error(CliError),
    Refused(Report),
    Refusal { check: String, witness: Value },
}

impl From<CliError> for Stop {
    fn from(e: CliError) -> Self {
        Stop::Error(e)
    }
}

impl From<DblCatError> for Stop {
    fn from(e: DblCatError) -> Self {
        match e {
            DblCatError::SiteClosureExceeded { .. } => Stop::Error(CliError::Config(e.to_string())),
            other => Stop::Error(CliError::Core(other.to_string())),
        }
    }
}

impl From<MulticatError> for Stop {
    fn from(e: MulticatError) -> Self {
        match e {
            MulticatError::ArityExceeded { .. } => Stop::Error(CliError::Config(e.to_string())),
            other => Stop::Error(CliError::Core(other.to_string())),
        }
    }
}

impl From<BridgeError> for Stop {
    fn from(e: BridgeError) -> Self {
        match e {
            BridgeError::CheckFailed(r) => Stop::Refused(*r),
            BridgeError::MackeyViolation { check, witness } => Stop::Refusal { check, witness },
            BridgeError::NotAProduct(s) => Stop::Refusal {
                check: "products".into(),
                witness: json!(s),
            },
            BridgeError::Multicat(m) => m.into(),
            BridgeError::Dbl(d) => d.into(),
            other => Stop::Error(CliError::Core(other.to_string())),
        }
    }
}

impl From<MonoidalError> for Stop {
    fn from(e: MonoidalError) -> Self {
        match e {
            MonoidalError::NotRepresentable { map, object } => Stop::Refusal {
                check: "representability".into(),
                witness: json!({"map": map, "object": object}),
            },
            MonoidalError::MissingLimits { diagram } => Stop::Refusal {
                check: "limits".into(),
                witness: json!({"diagram": diagram}),
            },
            MonoidalError::BCViolation(r) => Stop::Refused(r.report),
            MonoidalError::SearchBudgetExceeded { budget } => Stop::Error(CliError::Config(format!(
                "search budget of {budget} exhausted; raise --budget"
            ))),
            MonoidalError::Bridge(b) => b.into(),
            MonoidalError::Dbl(d) => d.into(),
            other => Stop::Error(CliError::Core(other.to_string())),
        }
    }
}

struct Outcome {
    reports: Vec<Report>,
    artifact: Option<Value>,
    site_bound: usize,
}

struct Runner<'a> {
    cli: &'a Cli,
    arity_bound: usize,
    /// Site bound actually used, fixed once a site is built.
    site_bound: Option<usize>,
}

pub fn run(cli: &Cli) -> Result<RunOutput, CliError> {
    let o = &cli.options;
    if o.site_bound == Some(0) || o.arity_bound == 0 || o.budget == 0 {
        return Err(CliError::Config("bounds and budget must be positive".into()));
    }
    if let Command::Gen { kind, name } = &cli.command {
        let text = generate(cli, *kind, name)?;
        return match &o.out {
            Some(path) => {
                write(path, &text)?;
                Ok(RunOutput {
                    text: String::new(),
                    passed: true,
                })
            }
            None => Ok(RunOutput { text, passed: true }),
        };
    }
    let mut r = Runner {
        cli,
        arity_bound: o.arity_bound,
        site_bound: None,
    };
    let (command, input) = describe(&cli.command);
    let outcome = match r.dispatch() {
        Ok(out) => out,
        Err(Stop::Error(e)) => return Err(e),
        Err(stop) => Outcome {
            reports: vec![r.refusal_report(stop)],
            artifact: None,
            site_bound: r.resolved(),
        },
    };
    let mut written_to = None;
    if let (Some(path), Some(a)) = (&o.out, &outcome.artifact) {
        write(path, &pretty(a))?;
        written_to = Some(path.display().to_string());
    }
    let bounds = Bounds {
        site_bound: outcome.site_bound,
        arity_bound: r.arity_bound,
    };
    let rendered = Rendered {
        command: &command,
        input: input.as_deref(),
        bounds: &bounds,
        reports: &outcome.reports,
        artifact: outcome.artifact.as_ref(),
        written_to: written_to.as_deref(),
    };
    Ok(RunOutput {
        text: rendered.emit(o.format),
        passed: rendered.passed(),
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::Cartesian => "cartesian",
        ModeArg::Cocartesian => "cocartesian",
        ModeArg::Given => "given",
    }
}

/// The command echo and input path of a report.
fn describe(c: &Command) -> (String, Option<String>) {
    let path = |p: &Path| Some(p.display().to_string());
    match c {
        Command::Check { what } => match what {
            CheckCommand::Monoid { input } => ("check monoid".into(), path(input)),
            CheckCommand::Multicat { input } => ("check multicat".into(), path(input)),
            CheckCommand::Df { input, mode } => (format!("check df --mode {}", mode_name(*mode)), path(input)),
            CheckCommand::Monoidal { input, mode, fibration } => (
                format!(
                    "check monoidal --mode {}{}",
                    mode_name(*mode),
                    if *fibration { " --fibration" } else { "" }
                ),
                path(input),
            ),
            CheckCommand::Fibration { input, mode } => {
                (format!("check fibration --mode {}", mode_name(*mode)), path(input))
            }
        },
        Command::Build {
            what: BuildCommand::Df { input, mode },
        } => (format!("build df --mode {}", mode_name(*mode)), path(input)),
        Command::Extract {
            what: ExtractCommand::Multicat { input, mode },
        } => (format!("extract multicat --mode {}", mode_name(*mode)), path(input)),
        Command::Roundtrip { input } => ("roundtrip".into(), path(input)),
        Command::Gen { kind, name } => (format!("gen {kind:?} {name}"), None),
    }
}

impl Runner<'_> {
    fn resolved(&self) -> usize {
        self.site_bound.or(self.cli.options.site_bound).unwrap_or(DEFAULT_SITE_BOUND)
    }

    fn site(&mut self, default: usize) -> Result<Arc<BoundedSite>, Stop> {
        let bound = self.cli.options.site_bound.unwrap_or(default);
        self.site_bound = Some(bound);
        Ok(Arc::new(BoundedSite::new(bound).map_err(|e| CliError::Config(e.to_string()))?))
    }

    fn refusal_report(&self, stop: Stop) -> Report {
        match stop {
            Stop::Refused(r) => r,
            Stop::Refusal { check, witness } => {
                let mut r = Report::new("refused", self.resolved(), self.arity_bound);
                let mut c = CheckOutcome::new(check);
                c.tick();
                c.fail_pinned(witness);
                r.push(c);
                r
            }
            Stop::Error(_) => unreachable!("errors are not reports"),
        }
    }

    fn dispatch(&mut self) -> Result<Outcome, Stop> {
        let cli = self.cli;
        match &cli.command {
            Command::Check { what } => match what {
                CheckCommand::Monoid { input } => self.check_monoid(doc::load(input)?),
                CheckCommand::Multicat { input } => self.check_multicat(doc::load(input)?),
                CheckCommand::Df { input, mode } => self.check_df(doc::load(input)?, *mode),
                CheckCommand::Monoidal { input, mode, fibration } => {
                    self.check_monoidal(doc::load(input)?, *mode, *fibration)
                }
                CheckCommand::Fibration { input, mode } => self.check_fibration(doc::load(input)?, *mode),
            },
            Command::Build {
                what: BuildCommand::Df { input, mode },
            } => self.build_df(doc::load(input)?, *mode),
            Command::Extract {
                what: ExtractCommand::Multicat { input, mode },
            } => self.extract(doc::load(input)?, *mode),
            Command::Roundtrip { input } => self.roundtrip(doc::load(input)?),
            Command::Gen { .. } => unreachable!("handled before dispatch"),
        }
    }

    fn done(&self, reports: Vec<Report>, artifact: Option<Value>) -> Result<Outcome, Stop> {
        Ok(Outcome {
            reports,
            artifact,
            site_bound: self.resolved(),
        })
    }

    /// The DF operad presented by a document, with the tensor witnesses of
    /// the indexed constructions.
    fn operad(&mut self, loaded: Loaded, mode: ModeArg) -> Result<(DfOperad, Option<Vec<TensorWitness>>), Stop> {
        let wrong = |msg: &str| Stop::Error(CliError::Config(msg.into()));
        match (loaded, mode) {
            (Loaded::Category(c), ModeArg::Cartesian | ModeArg::Cocartesian) => {
                let m = if mode == ModeArg::Cartesian { Mode::Products } else { Mode::Sums };
                let site = self.site(DEFAULT_SITE_BOUND)?;
                let (d, ws) = indexed_monoidal(Arc::new(c), m, site)?;
                Ok((d, Some(ws)))
            }
            (Loaded::Category(_), ModeArg::Given) => {
                Err(wrong("a category document needs --mode cartesian or --mode cocartesian"))
            }
            (_, ModeArg::Cartesian | ModeArg::Cocartesian) => {
                Err(wrong("--mode cartesian and --mode cocartesian need a category document"))
            }
            (Loaded::Multicat(m), ModeArg::Given) => {
                self.arity_bound = m.arity_bound();
                let site = self.site(m.arity_bound().min(DEFAULT_SITE_BOUND))?;
                Ok((df_from_multicat(Arc::new(m), site)?, None))
            }
            (Loaded::Monoid(m), ModeArg::Given) => {
                let site = self.site(DEFAULT_SITE_BOUND)?;
                Ok((df_from_monoid(Arc::new(mackey_from_monoid(&m, site)))?, None))
            }
            (Loaded::DfMonoid(fm), ModeArg::Given) => {
                self.fixed_site(&fm)?;
                Ok((df_from_monoid(Arc::new(fm))?, None))
            }
        }
    }

    /// A DF monoid document fixes its own site.
    fn fixed_site(&mut self, fm: &DfMonoid) -> Result<(), Stop> {
        let b = fm.site().bound();
        if let Some(s) = self.cli.options.site_bound.filter(|&s| s != b) {
            return Err(Stop::Error(CliError::Config(format!(
                "--site-bound {s} disagrees with the document's site bound {b}"
            ))));
        }
        self.site_bound = Some(b);
        Ok(())
    }

    fn monoid_reports(&mut self, m: &CommMonoid) -> Result<Vec<Report>, Stop> {
        let laws = check_comm_monoid(m);
        if !laws.passed() {
            return Ok(vec![laws]);
        }
        let site = self.site(DEFAULT_SITE_BOUND)?;
        let fm = mackey_from_monoid(m, site.clone());
        let mackey = check_df_monoid(&fm);
        let mut back = Report::new(format!("monoid round trip {}", m.name()), site.bound(), self.arity_bound);
        let mut table = CheckOutcome::new("table_reproduced");
        match monoid_from_mackey(&fm) {
            Ok(n) => {
                let (tm, tn) = (m.table(), n.table());
                for a in 0..m.order() {
                    for b in 0..m.order() {
                        table.expect(tm[a][b] == tn[a][b], || json!({"a": a, "b": b, "original": tm[a][b], "recovered": tn[a][b]}));
                    }
                }
                table.expect(m.unit() == n.unit(), || json!({"unit": m.unit(), "recovered": n.unit()}));
            }
            Err(e) => table.fail_pinned(json!(e.to_string())),
        }
        back.push(table);
        Ok(vec![laws, mackey, back])
    }

    fn check_monoid(&mut self, loaded: Loaded) -> Result<Outcome, Stop> {
        match loaded {
            Loaded::Monoid(m) => {
                let reports = self.monoid_reports(&m)?;
                self.done(reports, None)
            }
            Loaded::DfMonoid(fm) => {
                self.fixed_site(&fm)?;
                let mut r = check_df_monoid(&fm);
                if !r.passed() {
                    return self.done(vec![r], None);
                }
                if fm.site().bound() < 3 {
                    r.note("monoid recovery skipped: it needs a site of bound at least 3");
                    return self.done(vec![r], None);
                }
                let m = monoid_from_mackey(&fm)?;
                self.done(vec![r], Some(serde_json::to_value(doc::monoid_to_doc(&m)).expect("doc")))
            }
            other => Err(kind_error(&other, "a monoid or df_monoid document")),
        }
    }

    fn check_multicat(&mut self, loaded: Loaded) -> Result<Outcome, Stop> {
        match loaded {
            Loaded::Multicat(m) => {
                self.arity_bound = m.arity_bound();
                self.done(vec![check_multicat(&m)?], None)
            }
            other => Err(kind_error(&other, "a multicat document")),
        }
    }

    fn check_df(&mut self, loaded: Loaded, mode: ModeArg) -> Result<Outcome, Stop> {
        let (d, _) = self.operad(loaded, mode)?;
        let reports = vec![check_lax_functor(&d)?, check_pb_functoriality(&d)?, check_product_preservation(&d)?];
        self.done(reports, None)
    }

    fn check_monoidal(&mut self, loaded: Loaded, mode: ModeArg, fibration: bool) -> Result<Outcome, Stop> {
        let (d, built) = self.operad(loaded, mode)?;
        let budget = self.cli.options.budget;
        let found = tensor_witnesses(&d, budget)?;
        let site = d.site();
        let mut rep = Report::new(format!("representability {}", d.name()), site.bound(), self.arity_bound);
        let mut c = CheckOutcome::new("find_representing_functor");
        c.tick_n(found.len() as u64);
        rep.push(c);
        let ws = built.unwrap_or(found);
        let bc = check_beck_chevalley(&d, &ws, budget)?;
        let mut reports = vec![rep, bc.report];
        if fibration {
            reports.push(check_fibration(&d, budget)?);
        }
        self.done(reports, None)
    }

    fn check_fibration(&mut self, loaded: Loaded, mode: ModeArg) -> Result<Outcome, Stop> {
        let (d, _) = self.operad(loaded, mode)?;
        let r = check_fibration(&d, self.cli.options.budget)?;
        self.done(vec![r], None)
    }

    fn build_df(&mut self, loaded: Loaded, mode: ModeArg) -> Result<Outcome, Stop> {
        if let (Loaded::Monoid(m), ModeArg::Given) = (&loaded, mode) {
            let site = self.site(DEFAULT_SITE_BOUND)?;
            let fm = mackey_from_monoid(m, site);
            let r = check_df_monoid(&fm);
            return self.done(vec![r], Some(serde_json::to_value(doc::df_monoid_to_doc(&fm)).expect("doc")));
        }
        let (d, _) = self.operad(loaded, mode)?;
        self.done(Vec::new(), Some(summary(&d)?))
    }

    fn extract(&mut self, loaded: Loaded, mode: ModeArg) -> Result<Outcome, Stop> {
        let (d, _) = self.operad(loaded, mode)?;
        let arity = self.arity_bound.min(d.site().bound());
        self.arity_bound = arity;
        let m = multicat_from_df(&d, arity)?;
        let r = check_multicat(&m)?;
        self.done(vec![r], Some(serde_json::to_value(doc::multicat_to_doc(&m)?).expect("doc")))
    }

    fn roundtrip(&mut self, loaded: Loaded) -> Result<Outcome, Stop> {
        match loaded {
            Loaded::Multicat(m) => {
                let b = m.arity_bound();
                self.arity_bound = b;
                if let Some(s) = self.cli.options.site_bound.filter(|&s| s != b) {
                    return Err(Stop::Error(CliError::Config(format!(
                        "roundtrip compares on the site of bound {b} (the arity bound), not {s}"
                    ))));
                }
                let site = self.site(b)?;
                self.done(vec![roundtrip_check(Arc::new(m), site)?], None)
            }
            Loaded::Monoid(m) => {
                let reports = self.monoid_reports(&m)?;
                self.done(reports, None)
            }
            other => Err(kind_error(&other, "a multicat or monoid document")),
        }
    }
}

fn kind_error(got: &Loaded, want: &str) -> Stop {
    Stop::Error(CliError::Validation(format!("expected {want}, got a {} document", got.kind())))
}

/// Sizes of every category and proarrow of a DF operad.
fn summary(d: &DfOperad) -> Result<Value, Stop> {
    let site = d.site();
    let mut categories = Vec::new();
    for s in site.seeds() {
        let c = d.category(s)?;
        categories.push(json!({"set": s.name(), "objects": c.object_count(), "arrows": c.arrow_count()}));
    }
    let mut proarrows = Vec::new();
    for f in site.maps() {
        proarrows.push(json!({"map": f.to_json(), "elements": d.proarrow(f)?.total()}));
    }
    Ok(json!({
        "schema": SCHEMA,
        "kind": "df_operad_summary",
        "name": d.name(),
        "site_bound": site.bound(),
        "categories": categories,
        "proarrows": proarrows,
    }))
}

fn parse_count(name: &str, arg: &str) -> Result<usize, CliError> {
    arg.parse()
        .map_err(|_| CliError::Config(format!("`{name}` needs a number, got `{arg}`")))
}

pub fn stock_monoid(spec: &str) -> Result<CommMonoid, CliError> {
    let (head, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let n = || parse_count(head, arg);
    Ok(match head {
        "trivial" => CommMonoid::trivial(),
        "cyclic" => CommMonoid::cyclic(n()?.max(1)),
        "klein" => CommMonoid::klein_four(),
        "or" => CommMonoid::boolean_or(),
        "and" => CommMonoid::boolean_and(),
        "max" => CommMonoid::max_chain(n()?.max(1)),
        "truncated" => CommMonoid::truncated_sum(n()?.max(1)),
        "mult" => CommMonoid::cyclic_mult(n()?.max(1)),
        _ => return Err(CliError::Config(format!("unknown monoid `{spec}`"))),
    })
}

fn stock_multicat(spec: &str, arity_bound: usize) -> Result<SymMulticat, CliError> {
    let (head, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match head {
        "terminal" => terminal_multicat(arity_bound),
        "identities" => {
            let n = parse_count(head, arg)?;
            identities_only_multicat((0..n).map(|i| i.to_string()).collect(), arity_bound)
        }
        "discrete" => discrete_multicat(&stock_monoid(arg)?, arity_bound),
        "endomorphism" => endomorphism_multicat(&FinSet::canonical(parse_count(head, arg)?), arity_bound)
            .map_err(|e| CliError::Config(e.to_string()))?,
        _ => return Err(CliError::Config(format!("unknown multicategory `{spec}`"))),
    })
}

fn stock_category(spec: &str, seed: u64) -> Result<FinCat, CliError> {
    let (head, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match head {
        "terminal" => FinCat::terminal(),
        "chain" => FinCat::chain(parse_count(head, arg)?),
        "discrete" => {
            let n = parse_count(head, arg)?;
            FinCat::discrete(format!("discrete({n})"), (0..n).map(|i| i.to_string()).collect())
        }
        "random" => (*corpus::seeded_category(seed)).clone(),
        _ => return Err(CliError::Config(format!("unknown category `{spec}`"))),
    })
}

fn generate(cli: &Cli, kind: GenKind, name: &str) -> Result<String, CliError> {
    let o = &cli.options;
    Ok(match kind {
        GenKind::Monoid => pretty(&doc::monoid_to_doc(&stock_monoid(name)?)),
        GenKind::Multicat => pretty(&doc::multicat_to_doc(&stock_multicat(name, o.arity_bound)?)?),
        GenKind::Category => pretty(&doc::category_to_doc(&stock_category(name, o.seed)?)),
        GenKind::DfMonoid => {
            let bound = o.site_bound.unwrap_or(DEFAULT_SITE_BOUND);
            let site = Arc::new(BoundedSite::new(bound).map_err(|e| CliError::Config(e.to_string()))?);
            pretty(&doc::df_monoid_to_doc(&mackey_from_monoid(&stock_monoid(name)?, site)))
        }
    })
}
