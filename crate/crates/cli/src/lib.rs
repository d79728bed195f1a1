//! Command-line surface for `harmonic2v`: expression parsing, dispatch and
//! JSON output.

pub mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use harmonic2v::fischer::fischer_inner_product;
use harmonic2v::hypergeom::{verify_g_grid, verify_hypergeometric_identities};
use harmonic2v::pizzetti::{sphere_integrate, stiefel_monte_carlo_batch, stiefel_value, MonteCarloOptions};
use harmonic2v::random::{random_bihomogeneous, random_double_harmonic};
use harmonic2v::simplicial::decompose::{decompose_full, verify_component_orthogonality, Strategy};
use harmonic2v::simplicial::oracle::{verify_ladder, verify_master_projection};
use harmonic2v::transvector::verify_quadratic_relations;
use harmonic2v::{Dim, GaussianRational, Polynomial, Rational};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

pub use parse::{parse_poly, ParseError};

pub const SCHEMA: &str = "harmonic2v/1";

#[derive(Debug, Parser)]
#[command(name = "harmonic2v", version, about = "Exact algebra for polynomials in two vector variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a polynomial into simplicial harmonic components.
    Decompose {
        #[arg(long)]
        m: usize,
        #[arg(long, conflicts_with = "poly_file", required_unless_present = "poly_file")]
        poly: Option<String>,
        #[arg(long)]
        poly_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Direct)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Integrate over the Stiefel manifold V_2 or the unit sphere.
    Integrate {
        #[arg(long)]
        m: usize,
        #[arg(long, conflicts_with = "poly_file", required_unless_present = "poly_file")]
        poly: Option<String>,
        #[arg(long)]
        poly_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Manifold::Stiefel2)]
        manifold: Manifold,
        #[arg(long)]
        mc_samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run an exact verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        max_bidegree: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Direct,
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Manifold {
    Stiefel2,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Relations,
    Ladder,
    Appendix,
    Orthogonality,
    Pizzetti,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] harmonic2v::Error),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

/// A rendered result and the exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

impl Outcome {
    fn json(doc: &Value, exit_code: i32) -> Self {
        Outcome { output: serde_json::to_string_pretty(doc).expect("serializable"), exit_code }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Decompose { m, poly, poly_file, strategy, format } => {
            let text = source_text(poly, poly_file)?;
            decompose(&text, m, strategy, format)
        }
        Command::Integrate { m, poly, poly_file, manifold, mc_samples, seed } => {
            let text = source_text(poly, poly_file)?;
            integrate(&text, m, manifold, mc_samples, seed)
        }
        Command::Verify { suite, m, max_bidegree, seed } => verify(suite, m, max_bidegree, seed),
    }
}

fn source_text(poly: Option<String>, file: Option<PathBuf>) -> Result<String, CliError> {
    match (poly, file) {
        (Some(p), _) => Ok(p),
        (None, Some(path)) => std::fs::read_to_string(&path)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() }),
        (None, None) => Err(CliError::Usage("one of --poly or --poly-file is required".into())),
    }
}

fn rational_string(r: &Rational) -> String {
    harmonic2v::coeff::fmt_rational(r)
}

fn monomial_string(x: &[u16], u: &[u16]) -> String {
    let mut factors = Vec::new();
    for (name, exps) in [("x", x), ("u", u)] {
        for (j, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("{name}{}", j + 1)),
                _ => factors.push(format!("{name}{}^{e}", j + 1)),
            }
        }
    }
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// `[{coeff, monomial, x, u}]` in printing order.
pub fn term_list(p: &Polynomial) -> Value {
    Value::Array(
        p.terms()
            .rev()
            .map(|(mono, c)| {
                json!({
                    "coeff": c.to_string(),
                    "monomial": monomial_string(mono.xexp(), mono.uexp()),
                    "x": mono.xexp(),
                    "u": mono.uexp(),
                })
            })
            .collect(),
    )
}

fn decompose(text: &str, m: usize, strategy: StrategyArg, format: Format) -> Result<Outcome, CliError> {
    let dim = Dim::new(m)?;
    let p = parse_poly(text, dim)?;
    let strategy = match strategy {
        StrategyArg::Direct => Strategy::Direct,
        StrategyArg::Sequential => Strategy::Sequential,
    };
    let result = decompose_full(&p, strategy)?;
    let exact = result.reconstruct() == p;
    let exit_code = if exact { 0 } else { 1 };
    let check = if exact { "exact" } else { "mismatch" };
    if format == Format::Text {
        let mut lines = vec![format!("input: {p}"), format!("m: {m}")];
        for c in &result.components {
            let ix = c.component.index;
            lines.push(format!(
                "|x|^{}|u|^{} C^{} S_u^{} H[{},{}] (from ({},{}), normalizer {}): {}",
                2 * c.a,
                2 * c.b,
                ix.i,
                ix.j,
                ix.k,
                ix.l,
                c.source.0,
                c.source.1,
                rational_string(&c.component.normalizer),
                c.component.harmonic
            ));
        }
        lines.push(format!("reconstruction: {check}"));
        return Ok(Outcome { output: lines.join("\n"), exit_code });
    }
    let components: Vec<Value> = result
        .components
        .iter()
        .map(|c| {
            let ix = c.component.index;
            json!({
                "source": {"k": c.source.0, "l": c.source.1},
                "fischer": {"a": c.a, "b": c.b},
                "ladder": {"i": ix.i, "j": ix.j},
                "target": {"k": ix.k, "l": ix.l},
                "normalizer": rational_string(&c.component.normalizer),
                "expression": c.component.harmonic.to_string(),
                "harmonic": term_list(&c.component.harmonic),
            })
        })
        .collect();
    let doc = json!({
        "schema": SCHEMA,
        "command": "decompose",
        "input": text,
        "canonical_input": p.to_string(),
        "m": m,
        "strategy": match strategy { Strategy::Direct => "direct", Strategy::Sequential => "sequential" },
        "components": components,
        "reconstruction_check": check,
    });
    Ok(Outcome::json(&doc, exit_code))
}

fn integrate(text: &str, m: usize, manifold: Manifold, mc: Option<u64>, seed: u64) -> Result<Outcome, CliError> {
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "integrate",
        "input": text,
        "m": m,
        "seed": seed,
    });
    match manifold {
        Manifold::Stiefel2 => {
            let p = parse_poly(text, Dim::new(m)?)?;
            doc["manifold"] = json!("stiefel2");
            doc["value"] = json!(stiefel_value(&p)?.to_string());
            if let Some(samples) = mc {
                let est = stiefel_monte_carlo_batch(std::slice::from_ref(&p), &MonteCarloOptions::new(samples, seed))?[0];
                doc["monte_carlo"] = json!({
                    "estimate": est.estimate,
                    "stderr": est.stderr,
                    "estimate_im": est.estimate_im,
                    "stderr_im": est.stderr_im,
                    "samples": est.samples,
                });
            }
        }
        Manifold::Sphere => {
            if mc.is_some() {
                return Err(CliError::Usage("--mc-samples is only available for --manifold stiefel2".into()));
            }
            let p = parse_poly(text, Dim::classical(m)?)?;
            let v = sphere_integrate(&p)?;
            doc["manifold"] = json!("sphere");
            doc["value"] = json!(v.to_string());
            doc["coefficient"] = json!(v.coeff.to_string());
            doc["pi_power"] = json!(v.pi_power);
        }
    }
    Ok(Outcome::json(&doc, 0))
}

struct Check {
    name: String,
    parameters: Value,
    passed: bool,
    counterexample: Value,
}

impl Check {
    fn new(name: impl Into<String>, parameters: Value, passed: bool, counterexample: Value) -> Self {
        Check { name: name.into(), parameters, passed, counterexample }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({"name": self.name, "parameters": self.parameters, "passed": self.passed});
        if !self.passed {
            v["counterexample"] = self.counterexample.clone();
        }
        v
    }
}

fn bidegrees(max: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=max).flat_map(move |k| (0..=max).map(move |l| (k, l))).filter(|&(k, l)| k + l > 0)
}

fn suite_relations(dim: Dim, max: u32, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let samples: Vec<Polynomial> = bidegrees(max).map(|(k, l)| random_double_harmonic(dim, k, l, rng)).collect();
    Ok(verify_quadratic_relations(&samples)?
        .into_iter()
        .map(|r| {
            let counter: Vec<String> = r.failures.iter().map(|&i| samples[i].to_string()).collect();
            Check::new(r.relation.name(), json!({"samples": samples.len()}), r.ok(), json!({"samples": counter}))
        })
        .collect())
}

fn suite_ladder(dim: Dim, max: u32) -> Result<Vec<Check>, CliError> {
    if max == 0 {
        return Ok(vec![]);
    }
    let max_ij = max.min(2);
    let mut checks: Vec<Check> = verify_ladder(dim, (max, max), max_ij)?
        .into_iter()
        .map(|c| {
            let params = json!({"k": c.k, "l": c.l, "i": c.i, "j": c.j});
            let counter = json!({"closed_form": rational_string(&c.closed_form)});
            Check::new(format!("ladder {:?}", c.coefficient), params, c.passed, counter)
        })
        .collect();
    checks.extend(verify_master_projection(dim, (max, max), max_ij)?.into_iter().map(|c| {
        Check::new(format!("projection {:?}", c.case), json!({"k": c.k, "l": c.l}), c.passed, json!({"k": c.k, "l": c.l}))
    }));
    Ok(checks)
}

fn suite_hypergeometric(dim: Dim, max: u32, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let mut out = verify_g_grid(dim, (max, max), max)?;
    out.extend(verify_hypergeometric_identities(rng, 10)?);
    Ok(out
        .into_iter()
        .map(|c| {
            let params: Vec<String> = c.parameters.iter().map(rational_string).collect();
            Check::new(c.identity, json!(params), c.passed, json!(params))
        })
        .collect())
}

fn suite_orthogonality(dim: Dim, max: u32, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for (k, l) in bidegrees(max) {
        let p = random_bihomogeneous(dim, k, l, 3, rng);
        let result = decompose_full(&p, Strategy::Direct)?;
        let report = verify_component_orthogonality(&result)?;
        let pairs: Vec<Value> =
            report.nonzero.iter().map(|(a, b, v)| json!({"left": a, "right": b, "inner_product": v.to_string()})).collect();
        let params = json!({"k": k, "l": l, "components": result.components.len(), "pairs": report.pairs_checked});
        checks.push(Check::new("orthogonality", params, report.ok(), json!({"input": p.to_string(), "pairs": pairs})));
        let exact = result.reconstruct() == p;
        checks.push(Check::new("reconstruction", json!({"k": k, "l": l}), exact, json!({"input": p.to_string()})));
        let norm = fischer_inner_product(&p, &p)?;
        let parts: GaussianRational = result
            .components
            .iter()
            .map(|c| {
                let e = c.embedded();
                fischer_inner_product(&e, &e)
            })
            .try_fold(GaussianRational::zero(), |acc, v| v.map(|v| &acc + &v))?;
        checks.push(Check::new(
            "norm additivity",
            json!({"k": k, "l": l}),
            norm == parts,
            json!({"input": p.to_string(), "norm": norm.to_string(), "sum_of_parts": parts.to_string()}),
        ));
    }
    Ok(checks)
}

fn suite_pizzetti(dim: Dim, max: u32, seed: u64, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let one = stiefel_value(&Polynomial::one(dim))?;
    checks.push(Check::new("I2(1) = 1", json!({}), one.is_one(), json!({"value": one.to_string()})));
    let x2 = Polynomial::norm_sq_x(dim);
    let u2 = Polynomial::norm_sq_u(dim);
    let ux = Polynomial::inner_ux(dim);
    let mut polys = Vec::new();
    for (k, l) in bidegrees(max) {
        let p = random_bihomogeneous(dim, k, l, 3, rng);
        let v = stiefel_value(&p)?;
        let vx = stiefel_value(&(&x2 * &p))?;
        let vu = stiefel_value(&(&u2 * &p))?;
        let vi = stiefel_value(&(&ux * &p))?;
        let params = json!({"k": k, "l": l});
        let input = p.to_string();
        checks.push(Check::new("I2(|x|^2 p) = I2(p)", params.clone(), vx == v, json!({"input": input, "lhs": vx.to_string(), "rhs": v.to_string()})));
        checks.push(Check::new("I2(|u|^2 p) = I2(p)", params.clone(), vu == v, json!({"input": input, "lhs": vu.to_string(), "rhs": v.to_string()})));
        checks.push(Check::new("I2(<u,x> p) = 0", params, vi.is_zero(), json!({"input": input, "lhs": vi.to_string()})));
        polys.push((k, l, p, v));
    }
    let opts = MonteCarloOptions { symmetrize: true, ..MonteCarloOptions::new(200_000, seed) };
    let list: Vec<Polynomial> = polys.iter().map(|t| t.2.clone()).collect();
    let estimates = stiefel_monte_carlo_batch(&list, &opts)?;
    for ((k, l, p, v), est) in polys.iter().zip(estimates) {
        let (re, im) = v.to_f64_pair();
        let bound_re = 5.0 * est.stderr + 1e-12;
        let bound_im = 5.0 * est.stderr_im + 1e-12;
        let passed = (re - est.estimate).abs() <= bound_re && (im - est.estimate_im).abs() <= bound_im;
        checks.push(Check::new(
            "Monte Carlo within 5 stderr",
            json!({"k": k, "l": l, "samples": est.samples}),
            passed,
            json!({"input": p.to_string(), "exact": v.to_string(), "estimate": est.estimate, "stderr": est.stderr,
                   "estimate_im": est.estimate_im, "stderr_im": est.stderr_im}),
        ));
    }
    Ok(checks)
}

fn verify(suite: Suite, m: usize, max: u32, seed: u64) -> Result<Outcome, CliError> {
    let dim = Dim::new(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (name, checks) = match suite {
        Suite::Relations => ("relations", suite_relations(dim, max, &mut rng)?),
        Suite::Ladder => ("ladder", suite_ladder(dim, max)?),
        Suite::Appendix => ("appendix", suite_hypergeometric(dim, max, &mut rng)?),
        Suite::Orthogonality => ("orthogonality", suite_orthogonality(dim, max, &mut rng)?),
        Suite::Pizzetti => ("pizzetti", suite_pizzetti(dim, max, seed, &mut rng)?),
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let doc = json!({
        "schema": SCHEMA,
        "command": "verify",
        "suite": name,
        "m": m,
        "max_bidegree": max,
        "seed": seed,
        "passed": failed == 0,
        "summary": {"total": checks.len(), "failed": failed},
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::json(&doc, if failed == 0 { 0 } else { 1 }))
}
