use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use quiverhecke::localize::lemma18_check;
use quiverhecke::suite::{run_suites, SUITES};
use quiverhecke::{
    all_passed, eval_str, parse_poly, Check, Config, Localizer, Model, ModuleElement, QuiverSpec, TwistedOperator,
    WeylGroup,
};

#[derive(Parser)]
#[command(name = "qhecke", version, about = "Generalized quiver Hecke algebras from root data")]
struct Cli {
    /// Configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Treat every suitability warning as a failure.
    #[arg(long, global = true)]
    strict: bool,
    /// Monomial degree bound for integrality tests.
    #[arg(long, global = true)]
    degree_bound: Option<u32>,
    /// Comma-separated suites to run.
    #[arg(long, global = true, value_delimiter = ',')]
    checks: Vec<String>,
    /// Seed for sampled property checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the group, subsystem, cosets and h/q tables.
    Describe,
    /// Run check suites; exit 0 iff all pass.
    Check {
        /// Number of sampled associativity triples.
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Extract braid-defect coefficients for one component and pair.
    Braid {
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Apply an operator expression to a module element.
    Act {
        /// e.g. "s(0,1)*z(0,1)"
        #[arg(long)]
        expr: String,
        /// JSON array with one polynomial string per component.
        #[arg(long)]
        element: String,
    },
    /// Localized generators and intertwining results.
    Localize,
    /// Λ and Euler-class tables with the Euler identities.
    Euler,
    /// Emit a preset configuration.
    Preset {
        #[command(subcommand)]
        kind: PresetKind,
    },
}

#[derive(Subcommand)]
enum PresetKind {
    Nilhecke {
        label: String,
    },
    Skew {
        label: String,
    },
    Klr {
        /// Vertex names, comma-separated.
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<String>,
        /// Arrows as `p:q`, comma-separated; `p:p` is a loop.
        #[arg(long, value_delimiter = ',')]
        arrows: Vec<String>,
        /// Dimension per vertex, comma-separated.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
}

struct Report {
    config: Value,
    checks: Vec<Check>,
    timings: Map<String, Value>,
    result: Option<Value>,
}

impl Report {
    fn new(config: &Config) -> Self {
        let config = serde_json::to_value(config).expect("config serializes");
        Report { config, checks: Vec::new(), timings: Map::new(), result: None }
    }

    fn time(&mut self, name: &str, start: Instant) {
        self.timings.insert(name.to_string(), json!(start.elapsed().as_secs_f64() * 1e3));
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "config_echo": self.config,
            "checks": self.checks,
            "timings": self.timings,
        });
        if let Some(r) = &self.result {
            v["result"] = r.clone();
        }
        v
    }
}

fn word(g: &WeylGroup, w: usize) -> String {
    let wd = g.reduced_word(w);
    if wd.is_empty() {
        "e".into()
    } else {
        wd.iter().map(|s| format!("s{s}")).collect()
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let path = cli.config.as_ref().context("--config is required for this command")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Config::parse(&text)?)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => write_stdout(&format!("{text}\n")),
    }
}

/// A closed downstream pipe is not an error.
fn write_stdout(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn operator_json(model: &Model, op: &TwistedOperator) -> Value {
    let g = model.group();
    Value::Array(
        op.terms()
            .map(|(&(i, w), c)| json!({"component": i, "element": word(g, w), "coefficient": c.to_string()}))
            .collect(),
    )
}

fn describe(model: &Model) -> (String, Value) {
    let g = model.group();
    let d = g.datum();
    let nc = model.ncomponents();
    let mut s = String::new();
    s += &format!("group {} (ambient rank {}, rank {})\n", d.label(), d.ambient_rank(), d.rank());
    s += &format!("#𝕎 = {}\n", g.order());
    let phi: Vec<_> = model.sub().roots().iter().map(|&r| d.roots()[r].clone()).collect();
    s += &format!("Φ = {phi:?}\n");
    s += &format!("#W = {}\n", model.sub().order());
    s += &format!("#I = {nc}\n");
    s += "cosets (index: reduced word of x_i):\n";
    let reps: Vec<String> = (0..nc).map(|i| word(g, model.table().rep(i))).collect();
    for (i, r) in reps.iter().enumerate() {
        s += &format!("  {i}: {r}\n");
    }
    let h: Vec<Vec<usize>> = (0..nc).map(|i| (0..model.rank()).map(|t| model.h(i, t)).collect()).collect();
    let qf: Vec<Vec<String>> =
        (0..nc).map(|i| (0..model.rank()).map(|t| model.q_factor(i, t).to_string()).collect()).collect();
    let act: Vec<Vec<usize>> =
        (0..nc).map(|i| (0..model.rank()).map(|t| model.table().act_simple(i, t)).collect()).collect();
    s += "h_i(s) (rows i, columns s):\n";
    for (i, row) in h.iter().enumerate() {
        s += &format!("  {i}: {row:?}\n");
    }
    s += "q_i(s):\n";
    for (i, row) in qf.iter().enumerate() {
        s += &format!("  {i}: {}\n", row.join(" | "));
    }
    let v = json!({
        "label": d.label(),
        "order": g.order(),
        "roots": phi,
        "subgroup_order": model.sub().order(),
        "components": nc,
        "reps": reps,
        "action": act,
        "h": h,
        "q": qf,
    });
    (s, v)
}

fn associativity_sample(model: &Model, seed: u64, samples: usize) -> Check {
    let nc = model.ncomponents();
    let mut gens: Vec<(String, TwistedOperator)> = Vec::new();
    for i in 0..nc {
        gens.push((format!("1({i})"), model.unit(i)));
        for t in 0..model.nvars() {
            gens.push((format!("z({i},{})", t + 1), model.var(i, t)));
        }
        for s in 0..model.rank() {
            gens.push((format!("s({i},{s})"), model.sigma(i, s)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = Vec::new();
    for _ in 0..samples {
        let [a, b, c] = [0; 3].map(|_| rng.gen_range(0..gens.len()));
        let left = model.mul(&model.mul(&gens[a].1, &gens[b].1), &gens[c].1);
        let right = model.mul(&gens[a].1, &model.mul(&gens[b].1, &gens[c].1));
        if left != right {
            fails.push(format!(
                "({}*{})*{} != {}*({}*{})",
                gens[a].0, gens[b].0, gens[c].0, gens[a].0, gens[b].0, gens[c].0
            ));
        }
    }
    let mut check = Check::from_failures("associativity", samples, fails);
    check.details["seed"] = json!(seed);
    check
}

fn run(cli: &Cli) -> Result<bool> {
    if let Command::Preset { kind } = &cli.command {
        let config = match kind {
            PresetKind::Nilhecke { label } => quiverhecke::nilhecke(label)?,
            PresetKind::Skew { label } => quiverhecke::skew(label)?,
            PresetKind::Klr { vertices, arrows, dims } => {
                let arrows = arrows
                    .iter()
                    .map(|a| a.split_once(':').map(|(p, q)| (p.to_string(), q.to_string())))
                    .collect::<Option<Vec<_>>>()
                    .context("arrows must look like p:q")?;
                quiverhecke::klr(&QuiverSpec { vertices: vertices.clone(), arrows, dims: dims.clone() })?
            }
        };
        emit(cli, &config.to_json())?;
        return Ok(true);
    }

    let config = load_config(cli)?;
    let start = Instant::now();
    let model = config.to_model()?;
    let mut report = Report::new(&config);
    report.time("build", start);
    let degree_bound = cli.degree_bound.unwrap_or(config.options.degree_bound);
    let strict = cli.strict || config.options.strict;

    match &cli.command {
        Command::Preset { .. } => unreachable!(),
        Command::Describe => {
            let (text, v) = describe(&model);
            write_stdout(&text)?;
            report.result = Some(v);
            if cli.out.is_some() {
                emit(cli, &serde_json::to_string_pretty(&report.to_json())?)?;
            }
            return Ok(true);
        }
        Command::Check { samples } => {
            let mut names = if cli.checks.is_empty() { config.options.checks.clone() } else { cli.checks.clone() };
            let want_assoc = names.is_empty() || names.iter().any(|n| n == "associativity");
            names.retain(|n| n != "associativity");
            let only_assoc = names.is_empty() && !(cli.checks.is_empty() && config.options.checks.is_empty());
            if !only_assoc {
                for n in &names {
                    if !SUITES.contains(&n.as_str()) {
                        bail!("unknown check suite {n:?}; known: {}, associativity", SUITES.join(", "));
                    }
                }
                let run = run_suites(&config, &model, &names, degree_bound, strict)?;
                report.checks.extend(run.checks);
                for (n, ms) in run.timings {
                    report.timings.insert(n, json!(ms));
                }
            }
            if want_assoc {
                let t = Instant::now();
                report.checks.push(associativity_sample(&model, cli.seed.unwrap_or(0), *samples));
                report.time("associativity", t);
            }
        }
        Command::Braid { i, s, t } => {
            let r = model.rank();
            if *i >= model.ncomponents() || *s >= r || *t >= r || s == t {
                bail!("need i < {}, distinct s, t < {r}", model.ncomponents());
            }
            let t0 = Instant::now();
            match model.braid_defect(*i, *s, *t) {
                Ok(d) => {
                    let g = model.group();
                    let coeffs: Vec<Value> = d
                        .coefficients
                        .iter()
                        .map(|c| json!({"word": c.word, "element": word(g, c.element), "value": c.value.to_string(), "polynomial": c.value.is_polynomial()}))
                        .collect();
                    report.result = Some(json!({
                        "i": i, "s": s, "t": t, "m": d.m,
                        "coefficients": coeffs,
                        "all_polynomial": d.all_polynomial,
                        "assumption_holds": d.assumption_holds,
                    }));
                    let ok = d.all_polynomial || !d.assumption_holds;
                    let details = json!({"m": d.m, "assumption_holds": d.assumption_holds});
                    report.checks.push(if ok {
                        Check::pass("braid-defect", details)
                    } else {
                        Check::fail("braid-defect", details, "non-polynomial coefficient under the braid assumption")
                    });
                }
                Err(e) => report.checks.push(Check::fail("braid-defect", json!({}), e.to_string())),
            }
            report.time("braid", t0);
        }
        Command::Act { expr, element } => {
            let op = eval_str(expr, &model)?;
            let comps: Vec<String> =
                serde_json::from_str(element).context("--element must be a JSON array of strings")?;
            if comps.len() != model.ncomponents() {
                bail!("element has {} components, model has {}", comps.len(), model.ncomponents());
            }
            let polys = comps.iter().map(|c| parse_poly(c, model.nvars())).collect::<quiverhecke::Result<Vec<_>>>()?;
            let m = ModuleElement::from_components(polys);
            let out = model.apply_rational(&op, &m);
            let integral = out.iter().all(|c| c.is_polynomial());
            report.result = Some(json!({
                "operator": operator_json(&model, &op),
                "output": out.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }));
            report.checks.push(if integral {
                Check::pass("integral-output", json!({}))
            } else {
                Check::fail("integral-output", json!({}), "result has a non-polynomial component")
            });
        }
        Command::Localize => {
            let t0 = Instant::now();
            let l = Localizer::new(&model)?;
            let g = model.group();
            let mut mats = Vec::new();
            for i in 0..model.ncomponents() {
                for s in 0..model.rank() {
                    let m = l.localize_sigma(i, s)?;
                    let entries: Vec<Value> =
                        m.0.iter()
                            .map(|(&(x, y), c)| json!({"row": word(g, x), "col": word(g, y), "value": c.to_string()}))
                            .collect();
                    mats.push(json!({"i": i, "s": s, "entries": entries}));
                }
            }
            report.result = Some(json!({"sigma": mats}));
            report.checks.push(l.sigma_localization_check());
            report.checks.push(l.intertwining_check(degree_bound.min(3)));
            report.time("localize", t0);
        }
        Command::Euler => {
            let t0 = Instant::now();
            let l = Localizer::new(&model)?;
            let g = model.group();
            let lambda: Vec<Value> =
                (0..g.order()).map(|w| json!({"w": word(g, w), "lambda": l.lambda(w).to_string()})).collect();
            let mut eu = Vec::new();
            for x in 0..g.order() {
                for s in 0..model.rank() {
                    let (off, diag) = l.eu_zbar_s(x, s)?;
                    eu.push(json!({
                        "x": word(g, x), "s": s,
                        "off_diagonal": off.to_string(),
                        "diagonal": diag.map(|d| d.to_string()),
                    }));
                }
            }
            report.result = Some(json!({"lambda": lambda, "eu": eu}));
            report.checks.push(l.sign_and_power_check());
            report.checks.push(l.leading_term_check());
            report.checks.push(lemma18_check(g, model.sub(), true));
            report.checks.push(lemma18_check(g, model.sub(), false));
            report.time("euler", t0);
        }
    }

    emit(cli, &serde_json::to_string_pretty(&report.to_json())?)?;
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        eprintln!("FAILED {}: {}", bad.name, bad.counterexample.as_deref().unwrap_or(""));
    }
    Ok(all_passed(&report.checks))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
