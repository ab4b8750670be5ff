//! Command-line front end for `exchnet`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! process exit code: 0 on success, 1 on parse or I/O errors, 2 on invalid
//! parameters or input, 3 when a size cap is exceeded, 4 when the golden
//! battery has failures.

pub mod golden;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use exchnet::consistency::{dissociated_extendable_check, extendable_check, DissociatedExtendOptions};
use exchnet::dependence::{classify_skeleton, global_markov_check, skeleton};
use exchnet::estimation::dissociated::{dissociated_mle, DissociatedOptions};
use exchnet::estimation::ergm::{ergm_fit, ergm_log_eval, ErgmFamily, ErgmFitOptions, ErgmSpec};
use exchnet::estimation::exch::exch_mle;
use exchnet::estimation::summarized::degree_collision_classes;
use exchnet::genmodels::{
    beta_sample, er_sample, graphon_sample, graphon_z, marginal_beta_sample, BetaSpec, Graphon, MixingSpec,
    MomentMethod,
};
use exchnet::graph::enumerate_classes;
use exchnet::homcount::sigma;
use exchnet::io::{
    dependence_from_json, dependence_to_json, extendability_to_json, fit_report_to_json, joint_from_json,
    mobius_from_json, mobius_to_json, scalar_value,
};
use exchnet::scalar::ParseScalar;
use exchnet::{Error, LabeledNetwork, Rational, Scalar, UnlabeledClass};

/// Largest node count handled in exact arithmetic unless `--float` is given.
pub const EXACT_MAX_NODES: usize = 5;

/// Default tolerance for float-mode checks.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "exchnet", version, about = "Exchangeable random network analysis")]
struct Cli {
    /// Use floating point even where exact rationals are available.
    #[arg(long, global = true)]
    float: bool,
    /// Tolerance for float-mode checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subgraph counts, degrees and family statistics of a network.
    Stats { edgelist: PathBuf },
    /// Exchangeable maximum likelihood estimate of the Möbius parameters.
    Mle { edgelist: PathBuf },
    /// Maximum likelihood over dissociated exchangeable laws.
    MleDissociated {
        edgelist: PathBuf,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit an exchangeable exponential family.
    Fit { family: String, edgelist: PathBuf },
    /// Probability of a network under an exponential family.
    Eval { family: String, nu: PathBuf, edgelist: PathBuf },
    /// Check a joint law against the separation statements of a dependence graph.
    Markov { joint: PathBuf, dependence: PathBuf },
    /// Pairwise-independence skeleton of a joint law.
    Skeleton { joint: PathBuf },
    /// Whether Möbius parameters are the margin of a law on more nodes.
    Extend {
        z: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        dissociated: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw seeded networks as edge lists.
    Sample(SampleArgs),
    /// Graphon moment of one class with an error estimate.
    GraphonZ {
        /// `const:η`, `product:logistic:μ,σ`, or a grid file.
        graphon: String,
        /// Class name (`2-star`, `paw`, ...) or edge key (`1-2,1-3`).
        class: String,
        #[arg(long, default_value_t = 64)]
        r: usize,
        /// Monte Carlo with this many samples instead of quadrature.
        #[arg(long, requires = "seed")]
        mc: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Groups of classes sharing a degree distribution.
    Collisions {
        #[arg(long)]
        n: usize,
    },
    /// Run the golden-example battery.
    GoldenExamples,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(subcommand)]
    model: SampleModel,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    count: usize,
}

#[derive(Subcommand, Debug)]
enum SampleModel {
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    Beta {
        /// Comma-separated node propensities.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<f64>,
    },
    MarginalBeta {
        #[arg(long)]
        n: usize,
        /// `point:β`, `two-point:a,b,w` or `gaussian:μ,σ`.
        #[arg(long, allow_hyphen_values = true)]
        mixing: String,
    },
    Graphon {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        graphon: String,
    },
}

enum Failure {
    Core(Error),
    Io(String),
    Golden(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::Parse(_)) | Failure::Io(_) => 1,
            Failure::Core(Error::InvalidParameters(_)) | Failure::Core(Error::InvalidInput(_)) => 2,
            Failure::Core(Error::SizeCap { .. }) => 3,
            Failure::Golden(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
            Failure::Golden(k) => format!("{k} golden example(s) failed"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut text = String::new();
    let result = execute(&cli, &mut text);
    // golden failures still print their report
    if result.is_ok() || matches!(result, Err(Failure::Golden(_))) {
        let written = match &cli.output {
            Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
            None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(m) = written {
            let _ = writeln!(err, "error: {m}");
            return 1;
        }
    }
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_network(path: &Path) -> Outcome<LabeledNetwork> {
    Ok(LabeledNetwork::parse_edge_list(&read(path)?)?)
}

fn push_json(text: &mut String, v: &Value) {
    text.push_str(&serde_json::to_string_pretty(v).expect("serializable"));
    text.push('\n');
}

/// The `n` field of a JSON document, read before choosing the arithmetic.
fn json_n(text: &str) -> Outcome<usize> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    v.get("n")
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| Failure::Core(Error::Parse("missing node count \"n\"".into())))
}

impl Cli {
    fn exact(&self, n: usize) -> bool {
        !self.float && n <= EXACT_MAX_NODES
    }

    fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }
}

fn execute(cli: &Cli, text: &mut String) -> Outcome<()> {
    match &cli.command {
        Command::Stats { edgelist } => push_json(text, &stats(&read_network(edgelist)?)?),
        Command::Mle { edgelist } => {
            let x = read_network(edgelist)?;
            let z = exch_mle(&x)?;
            let class = UnlabeledClass::of(&x);
            let lik = Rational::from_u64(1) / Rational::from_u64(class.class_size(x.n()));
            let mut v = if cli.exact(x.n()) { mobius_to_json(&z) } else { mobius_to_json(&z.to_f64()) };
            v["observed_class"] = json!(class.key());
            v["likelihood"] = if cli.exact(x.n()) { scalar_value(&lik) } else { scalar_value(&lik.to_f64()) };
            push_json(text, &v);
        }
        Command::MleDissociated { edgelist, restarts, seed } => {
            let x = read_network(edgelist)?;
            let opts = DissociatedOptions { restarts: *restarts, seed: *seed, ..DissociatedOptions::default() };
            push_json(text, &fit_report_to_json(&dissociated_mle(&x, &opts)?));
        }
        Command::Fit { family, edgelist } => {
            let x = read_network(edgelist)?;
            let spec = ErgmSpec::new(ErgmFamily::parse(family)?, x.n())?;
            push_json(text, &fit_report_to_json(&ergm_fit(&spec, &x, &ErgmFitOptions::default())?));
        }
        Command::Eval { family, nu, edgelist } => {
            let x = read_network(edgelist)?;
            let spec = ErgmSpec::new(ErgmFamily::parse(family)?, x.n())?;
            let nu = parse_nu(&read(nu)?)?;
            let lp = ergm_log_eval(&spec, &nu, &x)?;
            push_json(
                text,
                &json!({
                    "family": spec.name(),
                    "n": x.n(),
                    "stats": spec.stat_names(),
                    "log_probability": scalar_value(&lp),
                    "probability": scalar_value(&lp.exp()),
                }),
            );
        }
        Command::Markov { joint, dependence } => {
            let jtext = read(joint)?;
            let dep = dependence_from_json(&read(dependence)?)?;
            let v = if cli.exact(json_n(&jtext)?) {
                markov::<Rational>(&jtext, &dep, 0.0)?
            } else {
                markov::<f64>(&jtext, &dep, cli.tol())?
            };
            push_json(text, &v);
        }
        Command::Skeleton { joint } => {
            let jtext = read(joint)?;
            let sk = if cli.exact(json_n(&jtext)?) {
                skeleton(&joint_from_json::<Rational>(&jtext, 0.0)?, 0.0)?
            } else {
                skeleton(&joint_from_json::<f64>(&jtext, cli.tol())?, cli.tol())?
            };
            push_json(
                text,
                &json!({ "skeleton": dependence_to_json(&sk), "classification": classify_skeleton(&sk).as_str() }),
            );
        }
        Command::Extend { z, m, dissociated, seed } => {
            let ztext = read(z)?;
            let v = if *dissociated {
                let mv = mobius_from_json::<f64>(&ztext)?;
                let opts = DissociatedExtendOptions { seed: *seed, ..DissociatedExtendOptions::default() };
                let mut v = extendability_to_json(&dissociated_extendable_check(&mv, *m, &opts)?);
                v["method"] = json!("dissociated");
                v
            } else {
                let mut v = if cli.exact(json_n(&ztext)?) {
                    extendability_to_json(&extendable_check(&mobius_from_json::<Rational>(&ztext)?, *m)?)
                } else {
                    extendability_to_json(&extendable_check(&mobius_from_json::<f64>(&ztext)?, *m)?)
                };
                v["method"] = json!("exchangeable");
                v
            };
            push_json(text, &v);
        }
        Command::Sample(args) => sample(args, text)?,
        Command::GraphonZ { graphon, class, r, mc, seed } => {
            let phi = parse_graphon(graphon)?;
            let u = UnlabeledClass::parse_name_or_key(class)?;
            let method = match mc {
                Some(samples) => MomentMethod::MonteCarlo { samples: *samples, seed: seed.expect("clap requires seed") },
                None => MomentMethod::Quadrature { r: *r },
            };
            let m = graphon_z(&phi, &u, &method)?;
            push_json(
                text,
                &json!({
                    "class": u.key(),
                    "name": u.name(),
                    "method": if mc.is_some() { "monte_carlo" } else { "quadrature" },
                    "value": scalar_value(&m.value),
                    "error": scalar_value(&m.error),
                    "order": m.order,
                }),
            );
        }
        Command::Collisions { n } => {
            let groups = degree_collision_classes(*n)?;
            let groups: Vec<Value> = groups
                .iter()
                .map(|g| {
                    json!({
                        "degrees": g.degrees.degree_multiset(),
                        "classes": g.classes.iter().map(|c| json!({ "class": c.key(), "name": c.name() })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            push_json(text, &json!({ "n": n, "group_count": groups.len(), "groups": groups }));
        }
        Command::GoldenExamples => {
            let items = golden::battery();
            let failed = items.iter().filter(|i| !i.passed).count();
            for item in &items {
                text.push_str(&item.line());
                text.push('\n');
            }
            text.push_str(&format!("{} passed, {failed} failed\n", items.len() - failed));
            if failed > 0 {
                return Err(Failure::Golden(failed));
            }
        }
    }
    Ok(())
}

fn stats(x: &LabeledNetwork) -> Outcome<Value> {
    let n = x.n();
    let classes = enumerate_classes(n, false)?;
    let sigmas: Vec<Value> = classes
        .iter()
        .map(|c| json!({ "class": c.key(), "name": c.name(), "edges": c.edge_count(), "sigma": sigma(c, x) }))
        .collect();
    let mut families = BTreeMap::new();
    if n >= 2 {
        for f in [ErgmFamily::FrankStrauss, ErgmFamily::SeStar, ErgmFamily::Kneser, ErgmFamily::Sem] {
            let spec = ErgmSpec::new(f, n)?;
            let vals: Vec<Value> =
                spec.stats.iter().map(|s| json!({ "stat": s.name(), "value": s.value(x) })).collect();
            families.insert(f.as_str(), vals);
        }
    }
    Ok(json!({
        "n": n,
        "edges": x.edge_count(),
        "degrees": x.degrees(),
        "degree_counts": x.degree_distribution().counts,
        "class": UnlabeledClass::of(x).key(),
        "sigma": sigmas,
        "families": families,
    }))
}

/// `[ν_1, ...]` or `{"nu": [...]}`.
fn parse_nu(text: &str) -> Outcome<Vec<f64>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let arr = match &v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("nu")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"nu\": [...]}".into()))?,
        _ => return Err(Error::Parse("expected an array of parameters".into()).into()),
    };
    Ok(arr
        .iter()
        .map(|e| match e {
            // {"stat": ..., "nu": ...} entries as written by `fit`
            Value::Object(o) => o.get("nu").and_then(Value::as_f64),
            other => other.as_f64(),
        }
        .ok_or_else(|| Error::Parse(format!("not a number: {e}"))))
        .collect::<Result<_, _>>()?)
}

fn markov<T: ParseScalar>(jtext: &str, dep: &exchnet::DependenceGraph, tol: f64) -> Outcome<Value> {
    let jt = joint_from_json::<T>(jtext, tol)?;
    let first = global_markov_check(&jt, dep, tol)?;
    Ok(json!({
        "markov": first.is_none(),
        "kind": dep.kind().as_str(),
        "first_violation": first.map(|s| json!({
            "a": dep.set_label(s.a),
            "b": dep.set_label(s.b),
            "given": dep.set_label(s.s),
        })),
    }))
}

fn parse_graphon(spec: &str) -> Outcome<Graphon> {
    if spec.starts_with("const:") || spec.starts_with("product:") {
        Ok(Graphon::parse_named(spec)?)
    } else {
        Ok(Graphon::parse_grid(&read(Path::new(spec))?)?)
    }
}

fn parse_mixing(spec: &str) -> Outcome<MixingSpec> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected kind:values, got {spec:?}")))?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
        .collect::<Result<_, _>>()?;
    let arity = |k: usize| -> Outcome<()> {
        if nums.len() == k {
            Ok(())
        } else {
            Err(Error::Parse(format!("{kind} takes {k} values, got {}", nums.len())).into())
        }
    };
    let mix = match kind {
        "point" => {
            arity(1)?;
            MixingSpec::PointMass { beta: nums[0] }
        }
        "two-point" => {
            arity(3)?;
            MixingSpec::TwoPoint { beta_a: nums[0], beta_b: nums[1], w: nums[2] }
        }
        "gaussian" => {
            arity(2)?;
            // the sample count and seed only matter for joint tables
            MixingSpec::Gaussian { mu: nums[0], sigma: nums[1], samples: 1, seed: 0 }
        }
        other => return Err(Error::Parse(format!("unknown mixing {other:?}")).into()),
    };
    mix.validate()?;
    Ok(mix)
}

/// Sample `k` is drawn from stream `k` of the seed, so a run with a larger
/// count extends a shorter one.
fn sample(args: &SampleArgs, text: &mut String) -> Outcome<()> {
    let seed = args
        .seed
        .ok_or_else(|| Error::InvalidParameters("sampling requires --seed".into()))?;
    let draw: Box<dyn Fn(u64) -> exchnet::Result<LabeledNetwork>> = match &args.model {
        SampleModel::Er { n, p } => {
            let (n, p) = (*n, *p);
            Box::new(move |k| er_sample(n, p, seed, k))
        }
        SampleModel::Beta { beta } => {
            let spec = BetaSpec::new(beta.clone())?;
            Box::new(move |k| beta_sample(&spec, seed, k))
        }
        SampleModel::MarginalBeta { n, mixing } => {
            let (n, mix) = (*n, parse_mixing(mixing)?);
            Box::new(move |k| marginal_beta_sample(n, &mix, seed, k))
        }
        SampleModel::Graphon { n, graphon } => {
            let (n, phi) = (*n, parse_graphon(graphon)?);
            Box::new(move |k| graphon_sample(&phi, n, seed, k))
        }
    };
    for k in 0..args.count {
        let x = draw(k as u64)?;
        text.push_str(&format!("# sample {k}\n"));
        text.push_str(&x.to_edge_list());
    }
    Ok(())
}
