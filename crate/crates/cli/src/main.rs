use std::fmt::Display;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hopfrough::algebra::{format_tensor, tensor_records, GradedVector, Tensor2};
use hopfrough::bck::{self, BckElement};
use hopfrough::cocycle::{self, BckHopf, CocycleSolution, GradedHopf, MindexHopf};
use hopfrough::forests::{parse_forest, parse_tree, Forest};
use hopfrough::mindex::{self, MElement, MultiIndexForest, Notation};
use hopfrough::props::{self, Suite};
use hopfrough::reference;

/// `println!` that exits quietly once stdout is closed, e.g. when piped into `head`.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

mod rde;

#[derive(Parser)]
#[command(name = "hopfrough", version, about = "Hopf algebras of trees and multi-indices, cocycles, B-series and rough paths")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Target degree for the cocycle solver and verifier.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Size bound for randomized suites and lift checks.
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    /// Tolerance for floating-point checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an element and print its canonical form.
    Expr {
        algebra: AlgebraArg,
        expr: String,
        #[arg(long)]
        shorthand: bool,
    },
    /// Coproducts.
    #[command(subcommand)]
    Coprod(Coprod),
    /// Products.
    #[command(subcommand)]
    Prod(Prod),
    /// Pairings.
    #[command(subcommand)]
    Pair(Pair),
    /// The derivation D̄ on a single multi-index, applied `power` times.
    Dbar {
        expr: String,
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// The morphism from forests to multi-indices.
    Phi { expr: String },
    #[command(subcommand)]
    /// Solve or verify the 1-cocycle equation.
    Cocycle(Cocycle),
    #[command(subcommand)]
    /// Randomized exact identity suites.
    Props(Props),
    /// Regenerate the degree ≤ 4 reduced coproduct tables and diff them.
    Tables,
    #[command(subcommand)]
    /// Rough path lifts and the B-series RDE stepper.
    Rde(Rde),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    Bck,
    M,
}

#[derive(Subcommand)]
enum Coprod {
    Bck { expr: String },
    M {
        expr: String,
        #[arg(long)]
        shorthand: bool,
    },
    /// The `(m, n)` component of the reduced multi-index coproduct.
    Reduced {
        m: usize,
        n: usize,
        expr: String,
        #[arg(long)]
        shorthand: bool,
    },
}

#[derive(Subcommand)]
enum Prod {
    /// Commutative forest product.
    Forest { a: String, b: String },
    /// Grafting of one tree onto another.
    Graft { a: String, b: String },
    /// Simultaneous grafting of a forest onto a forest.
    Sgraft { a: String, b: String },
    /// Grossman–Larson product.
    Gl { a: String, b: String },
    /// Dual product of the multi-index coproduct.
    StarM {
        a: String,
        b: String,
        #[arg(long)]
        shorthand: bool,
    },
}

#[derive(Subcommand)]
enum Pair {
    Bck { a: String, b: String },
    M {
        a: String,
        b: String,
        #[arg(long)]
        shorthand: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HopfArg {
    Mindex,
    Bck,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    /// Grafting onto a new root decorated 1 (trees only).
    Bplus,
    Zero,
    /// Multiplication by z0 (multi-indices only).
    Z0mul,
}

#[derive(Subcommand)]
enum Cocycle {
    /// Solve the cocycle equation degree by degree and print the certificate.
    Solve {
        #[arg(long, value_enum, default_value = "mindex")]
        algebra: HopfArg,
        #[arg(long, default_value_t = 1)]
        alphabet: u32,
    },
    /// Check the cocycle identity for a named map.
    Verify {
        #[arg(long, value_enum, default_value = "bck")]
        algebra: HopfArg,
        #[arg(long, value_enum, default_value = "bplus")]
        map: MapArg,
        #[arg(long, default_value_t = 1)]
        alphabet: u32,
    },
    /// Recompute the degree-4 kernels and displayed reduced coproducts.
    Kernels,
}

#[derive(Subcommand)]
enum Props {
    /// Run seeded randomized identity suites.
    Run {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: u64,
    },
}

#[derive(Subcommand)]
enum Rde {
    /// Lift a driver, step an RDE with B-series, and check the lift.
    Demo(rde::DemoArgs),
}

fn melement(text: &str, shorthand: bool) -> hopfrough::Result<MElement> {
    mindex::parse_melement(text, if shorthand { Notation::Shorthand } else { Notation::Explicit })
}

fn element_json<B: Ord + Clone + Display>(x: &GradedVector<B>) -> Value {
    Value::Array(x.iter().map(|(b, c)| json!({"basis": b.to_string(), "coeff": c.to_string()})).collect())
}

fn print_element<B: Ord + Clone + Display>(g: &Global, x: &GradedVector<B>) {
    if g.json {
        out!("{}", element_json(x));
    } else {
        out!("{}", x);
    }
}

fn print_tensor<L, R>(g: &Global, t: &Tensor2<L, R>)
where
    L: Ord + Clone + Display,
    R: Ord + Clone + Display,
{
    if g.json {
        out!("{}", serde_json::to_string(&tensor_records(t)).expect("records serialize"));
    } else {
        out!("{}", format_tensor(t));
    }
}

fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match cli.command {
        Command::Expr { algebra, expr, shorthand } => match algebra {
            AlgebraArg::Bck => {
                let x = bck::parse_element(&expr)?;
                if g.json {
                    let terms: Vec<Value> = x
                        .iter()
                        .map(|(f, c)| json!({"basis": f.to_string(), "coeff": c.to_string(), "size": f.size(), "symmetry": f.symmetry_factor().to_string()}))
                        .collect();
                    print_json(&Value::Array(terms));
                } else {
                    out!("{}", x);
                    for (f, _) in x.iter() {
                        out!("  {}: size {}, S = {}", f, f.size(), f.symmetry_factor());
                    }
                }
            }
            AlgebraArg::M => {
                let x = melement(&expr, shorthand)?;
                if g.json {
                    let terms: Vec<Value> = x
                        .iter()
                        .map(|(f, c)| json!({"basis": f.to_string(), "coeff": c.to_string(), "size": f.size(), "symmetry": f.symmetry().to_string()}))
                        .collect();
                    print_json(&Value::Array(terms));
                } else {
                    out!("{}", x);
                    for (f, _) in x.iter() {
                        out!("  {}: size {}, S = {}, shorthand {}", f, f.size(), f.symmetry(), f.shorthand());
                    }
                }
            }
        },
        Command::Coprod(c) => match c {
            Coprod::Bck { expr } => print_tensor(g, &bck::coproduct_bck(&bck::parse_element(&expr)?)),
            Coprod::M { expr, shorthand } => print_tensor(g, &mindex::coproduct_m(&melement(&expr, shorthand)?)?),
            Coprod::Reduced { m, n, expr, shorthand } => {
                print_tensor(g, &mindex::reduced_component(m, n, &melement(&expr, shorthand)?)?)
            }
        },
        Command::Prod(p) => match p {
            Prod::Forest { a, b } => {
                print_element(g, &bck::forest_product(&bck::parse_element(&a)?, &bck::parse_element(&b)?))
            }
            Prod::Graft { a, b } => print_element(g, &bck::graft(&parse_tree(&a)?, &parse_tree(&b)?)),
            Prod::Sgraft { a, b } => print_element(g, &bck::simultaneous_graft(&parse_forest(&a)?, &parse_forest(&b)?)),
            Prod::Gl { a, b } => print_element(g, &bck::gl_product(&bck::parse_element(&a)?, &bck::parse_element(&b)?)),
            Prod::StarM { a, b, shorthand } => {
                print_element(g, &mindex::star_m(&melement(&a, shorthand)?, &melement(&b, shorthand)?)?)
            }
        },
        Command::Pair(p) => {
            let v = match p {
                Pair::Bck { a, b } => bck::pairing(&bck::parse_element(&a)?, &bck::parse_element(&b)?),
                Pair::M { a, b, shorthand } => mindex::pairing_m(&melement(&a, shorthand)?, &melement(&b, shorthand)?),
            };
            if g.json {
                print_json(&json!({"pairing": v.to_string()}));
            } else {
                out!("{}", v);
            }
        }
        Command::Dbar { expr, power } => {
            let b = mindex::parse_multiindex(&expr)?;
            print_element(g, &mindex::dbar_pow(&GradedVector::basis(b), power));
        }
        Command::Phi { expr } => print_element(g, &mindex::phi_linear(&bck::parse_element(&expr)?)?),
        Command::Cocycle(c) => return cocycle_command(g, c),
        Command::Props(Props::Run { suite, cases }) => return props_command(g, &suite, cases),
        Command::Tables => {
            let checks = reference::check_tables()?;
            let ok = checks.iter().all(|c| c.matches());
            if g.json {
                let rows: Vec<Value> = checks
                    .iter()
                    .map(|c| {
                        json!({
                            "row": c.entry.label,
                            "element": c.entry.element.to_string(),
                            "m": c.entry.m,
                            "n": c.entry.n,
                            "reference": format_tensor(&c.entry.expected),
                            "computed": format_tensor(&c.computed),
                            "match": c.matches(),
                        })
                    })
                    .collect();
                print_json(&json!({"entries": rows, "all_match": ok}));
            } else {
                print!("{}", reference::table_report(&checks));
                let bad = checks.iter().filter(|c| !c.matches()).count();
                out!("{} of {} entries match", checks.len() - bad, checks.len());
            }
            return Ok(verdict(ok));
        }
        Command::Rde(Rde::Demo(args)) => return rde::demo(g, &args),
    }
    Ok(ExitCode::SUCCESS)
}

fn solution_json<B: Ord + Display>(sol: &CocycleSolution<B>) -> Value {
    json!({
        "algebra": sol.algebra,
        "max_degree": sol.max_degree,
        "reports": sol.reports(),
        "unit_survives": sol.unit_survives,
        "obstruction_degree": sol.obstruction_degree,
        "verdict": sol.verdict(),
        "witness": sol.witness.as_ref().map(|w| json!({
            "degree": w.degree,
            "target": w.target,
            "unit_form": w.unit_form.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "combination": w.combination.iter().map(|(l, c)| json!({"equation": l, "multiplier": c.to_string()})).collect::<Vec<_>>(),
        })),
    })
}

fn solve<H: GradedHopf>(g: &Global, h: &H) -> ExitCode {
    let sol = cocycle::cocycle_solve(h, g.max_degree.unwrap_or(4));
    if g.json {
        print_json(&solution_json(&sol));
    } else {
        print!("{}", cocycle::certificate(&sol));
    }
    ExitCode::SUCCESS
}

fn report_check<B: Ord + Clone + Display>(g: &Global, name: &str, check: cocycle::CocycleCheck<B>) -> ExitCode {
    if g.json {
        print_json(&json!({
            "map": name,
            "holds": check.holds,
            "counterexample": check.counterexample.as_ref().map(|(x, d)| json!({"at": x.to_string(), "defect": tensor_records(d)})),
        }));
    } else if let Some((x, d)) = &check.counterexample {
        out!("{}: cocycle identity fails at {}", name, x);
        out!("  defect: {}", format_tensor(d));
    } else {
        out!("{}: cocycle identity holds up to degree {}", name, g.max_degree.unwrap_or(5));
    }
    verdict(check.holds)
}

fn cocycle_command(g: &Global, c: Cocycle) -> Result<ExitCode> {
    match c {
        Cocycle::Solve { algebra, alphabet } => Ok(match algebra {
            HopfArg::Mindex => solve(g, &MindexHopf),
            HopfArg::Bck => solve(g, &BckHopf { alphabet }),
        }),
        Cocycle::Verify { algebra, map, alphabet } => {
            let n = g.max_degree.unwrap_or(5);
            Ok(match (algebra, map) {
                (HopfArg::Bck, MapArg::Bplus) => {
                    let l = |f: &Forest| GradedVector::basis(Forest::from(bck::bplus(1, f)));
                    report_check(g, "bplus", cocycle::verify_cocycle(&BckHopf { alphabet }, &l, n))
                }
                (HopfArg::Bck, MapArg::Zero) => {
                    let l = |_: &Forest| BckElement::zero();
                    report_check(g, "zero", cocycle::verify_cocycle(&BckHopf { alphabet }, &l, n))
                }
                (HopfArg::Mindex, MapArg::Zero) => {
                    let l = |_: &MultiIndexForest| MElement::zero();
                    report_check(g, "zero", cocycle::verify_cocycle(&MindexHopf, &l, n))
                }
                (HopfArg::Mindex, MapArg::Z0mul) => {
                    let z0 = mindex::parse_mindex("z0", Notation::Explicit)?;
                    let l = |x: &MultiIndexForest| GradedVector::basis(x.mul(&z0));
                    report_check(g, "z0mul", cocycle::verify_cocycle(&MindexHopf, &l, n))
                }
                _ => bail!("this map is not defined on the chosen algebra"),
            })
        }
        Cocycle::Kernels => {
            let r = reference::check_kernels()?;
            if g.json {
                print_json(&json!({
                    "ker31_dim": r.ker31.len(),
                    "ker31_span_equal": r.ker31_span_equal,
                    "ker31_outside": r.ker31_outside,
                    "intersection_dim": r.intersection.len(),
                    "intersection_span_equal": r.intersection_span_equal,
                    "intersection_outside": r.intersection_outside,
                    "displays": r.displays.iter().map(|d| json!({
                        "name": d.name,
                        "reference": format_tensor(&d.expected),
                        "computed": format_tensor(&d.computed),
                        "match": d.matches(),
                    })).collect::<Vec<_>>(),
                    "all_match": r.all_match(),
                }));
            } else {
                print!("{}", r.render());
            }
            Ok(verdict(r.all_match()))
        }
    }
}

fn props_command(g: &Global, suite: &str, cases: u64) -> Result<ExitCode> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let seed = g.seed.unwrap_or(0);
    let mut all_ok = true;
    let mut out = Vec::new();
    for s in suites {
        let results = props::run_suite(s, seed, cases, g.max_size.unwrap_or_else(|| s.default_max_size()))?;
        let summary = props::summarize(s, &results);
        all_ok &= summary.failed == 0;
        if g.json {
            out.push(json!({"summary": summary, "failures": results.iter().filter(|r| !r.passed).collect::<Vec<_>>()}));
        } else {
            out!("{:<12} {}/{} passed", summary.suite, summary.passed, summary.cases);
            for r in results.iter().filter(|r| !r.passed) {
                out!("  case {} (seed {}) failed: {:?}", r.case, r.seed, r.counterexample);
            }
        }
    }
    if g.json {
        print_json(&Value::Array(out));
    }
    Ok(verdict(all_ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
