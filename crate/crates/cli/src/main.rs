//! `higgs`: command-line driver for components, crystal operators, the
//! Drinfeld-side algebra, semicanonical elements and the acceptance suite.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use higgs_core::components::{enumerate_components, is_stable, strata_invariants};
use higgs_core::drinfeld::{psi_word, verify_relation, Relation};
use higgs_core::euler::{chi_word_series, ChiConfig, DEFAULT_FIELD_SIZES};
use higgs_core::loopcrystal::{crystal_graph, e_k, f_k, path_to_empty, CrystalOp, Direction};
use higgs_core::rng::Sampling;
use higgs_core::selftest::{run_all, run_criterion, DEFAULT_SEED};
use higgs_core::semicanonical::{semican_element, semican_torsion, DEFAULT_DEGREE_CAP};
use higgs_core::{GeneratorWord, HiggsError, IrrComponent, KClass};

use output::{Emitter, Format};

/// Exit status for a computation error.
const EXIT_COMPUTATION: u8 = 2;
/// Exit status for a failed acceptance run.
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "higgs", version, about = "Nilpotent Higgs sheaves on the projective line", allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Seed for all randomness.
    #[arg(long, global = true, env = "HIGGS_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Field sizes used for point counts (prime powers).
    #[arg(long, global = true, value_delimiter = ',', default_values_t = DEFAULT_FIELD_SIZES.to_vec())]
    primes: Vec<u64>,
    /// Independent samples per generic value.
    #[arg(long, global = true, default_value_t = 5)]
    trials: usize,
    /// Lowest twist / operator index of the window.
    #[arg(long, global = true, default_value_t = -4, allow_negative_numbers = true)]
    floor: i64,
    /// Extra expansion depth for truncated products.
    #[arg(long, global = true, default_value_t = 3)]
    margin: i64,
    /// Search radius for raising operators.
    #[arg(long, global = true, default_value_t = 3)]
    radius: i64,
    /// Output format (default: from the `--out` extension, else json).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

impl RunConfig {
    fn sampling(&self) -> Sampling {
        Sampling::new(self.seed, self.trials)
    }

    fn chi(&self) -> ChiConfig {
        ChiConfig { field_sizes: self.primes.clone(), sampling: self.sampling(), ..ChiConfig::default() }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Irreducible components of the global nilpotent cone.
    #[command(subcommand)]
    Components(ComponentsCmd),
    /// Loop-crystal operators and graphs.
    #[command(subcommand)]
    Crystal(CrystalCmd),
    /// The positive part of the loop algebra and the generator map.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Semicanonical basis elements.
    #[command(subcommand)]
    Semican(SemicanCmd),
    /// Generic value of a word on a component, from point counts.
    Evaluate {
        #[arg(long)]
        word: GeneratorWord,
        #[arg(long)]
        component: IrrComponent,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run only this criterion (1–10).
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum ComponentsCmd {
    /// All components of a class with twists ≥ floor.
    List {
        /// Class as `rank,degree`.
        #[arg(long, allow_hyphen_values = true)]
        class: KClassArg,
    },
    /// Generic strata invariants `(n, s)` at index `k`.
    Invariants {
        #[arg(long)]
        component: IrrComponent,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
}

#[derive(Subcommand, Debug)]
enum CrystalCmd {
    /// The crystal graph of a window of classes.
    Graph {
        #[arg(long, default_value_t = 2)]
        rank_max: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = -2)]
        deg_min: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        deg_max: i64,
        /// Operator indices `k`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0, -1])]
        ops: Vec<i64>,
        /// Keep only stable components.
        #[arg(long)]
        stable: bool,
    },
    /// Apply one operator, written `f:k` or `e:k`.
    Apply {
        #[arg(long)]
        component: IrrComponent,
        #[arg(long)]
        op: CrystalOp,
    },
    /// A path of crystal moves to the empty component.
    Path {
        #[arg(long)]
        component: IrrComponent,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Check one defining relation under the generator map.
    Verify {
        /// 1: torsion commute, 2: torsion past line, 3: line exchange.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        relation: u8,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        d2: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        n: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        l: i64,
    },
    /// Image of a word in the truncated loop algebra.
    Psi {
        #[arg(long)]
        word: GeneratorWord,
    },
}

#[derive(Subcommand, Debug)]
enum SemicanCmd {
    /// The basis of degree-`d` torsion classes.
    Torsion {
        #[arg(long)]
        d: usize,
    },
    /// The element dual to one component in its window.
    Element {
        #[arg(long)]
        component: IrrComponent,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: i64,
    },
}

/// `rank,degree`.
#[derive(Clone, Copy, Debug)]
struct KClassArg(KClass);

impl std::str::FromStr for KClassArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (r, d) = s.split_once(',').ok_or_else(|| format!("expected rank,degree, got {s:?}"))?;
        let r = r.trim().parse().map_err(|e| format!("rank: {e}"))?;
        let d = d.trim().parse().map_err(|e| format!("degree: {e}"))?;
        Ok(Self(KClass::new(r, d)))
    }
}

fn run(cli: Cli) -> Result<ExitCode, HiggsError> {
    let cfg = &cli.run;
    let out = Emitter::new(cfg.seed, cfg.format, cfg.out.clone());
    match cli.command {
        Command::Components(ComponentsCmd::List { class }) => {
            let comps = enumerate_components(class.0, cfg.floor);
            let rows: Vec<_> = comps
                .iter()
                .map(|z| json!({"component": z.to_string(), "twists": z.twists(), "lambda": z.lambda(), "stable": is_stable(z)}))
                .collect();
            out.rows(&["component", "stable"], &rows, json!({"class": [class.0.rank, class.0.degree], "floor": cfg.floor}))?;
        }
        Command::Components(ComponentsCmd::Invariants { component, k }) => {
            let inv = strata_invariants(&component, k, &cfg.sampling())?;
            out.value(json!({"component": component.to_string(), "k": inv.k, "n": inv.n, "s": inv.s}))?;
        }
        Command::Crystal(CrystalCmd::Graph { rank_max, deg_min, deg_max, ops, stable }) => {
            let classes: Vec<KClass> =
                (0..=rank_max).flat_map(|r| (deg_min..=deg_max).map(move |d| KClass::new(r, d))).collect();
            let g = crystal_graph(&classes, cfg.floor, &ops, stable, &cfg.sampling())?;
            out.graph(&g)?;
        }
        Command::Crystal(CrystalCmd::Apply { component, op }) => {
            let image = match op.dir {
                Direction::F => f_k(&component, op.k, &cfg.sampling())?,
                Direction::E => Some(e_k(&component, op.k, cfg.radius, &cfg.sampling())?),
            };
            out.value(json!({"component": component.to_string(), "op": op.to_string(), "image": image.map(|z| z.to_string())}))?;
        }
        Command::Crystal(CrystalCmd::Path { component }) => {
            let path = path_to_empty(&component, cfg.floor, &cfg.sampling())?;
            let steps: Vec<_> = path.iter().map(|(op, z)| json!({"op": op.to_string(), "component": z.to_string()})).collect();
            out.rows(&["op", "component"], &steps, json!({"start": component.to_string(), "floor": cfg.floor}))?;
        }
        Command::Algebra(AlgebraCmd::Verify { relation, d, d2, n, l }) => {
            let rel = match relation {
                1 => Relation::TorsionCommute { d, d2 },
                2 => Relation::TorsionPastLine { d, n },
                _ => Relation::LineExchange { n, l },
            };
            let ok = verify_relation(rel, cfg.floor, cfg.margin)?;
            out.text(if ok { "OK" } else { "FAIL" })?;
            if !ok {
                return Ok(ExitCode::from(EXIT_COMPUTATION));
            }
        }
        Command::Algebra(AlgebraCmd::Psi { word }) => {
            let x = psi_word(&word, cfg.floor, cfg.margin);
            out.value(json!({"word": word.to_string(), "psi": x, "text": x.to_string()}))?;
        }
        Command::Semican(SemicanCmd::Torsion { d }) => {
            let basis = semican_torsion(d, &cfg.chi())?;
            let elems: Vec<_> = basis.iter().map(|(l, f)| json!({"lambda": l, "element": f})).collect();
            out.value(json!({"d": d, "basis": elems}))?;
        }
        Command::Semican(SemicanCmd::Element { component, degree_cap }) => {
            let f = semican_element(&component, cfg.floor, degree_cap, &cfg.chi())?;
            out.value(json!({"component": component.to_string(), "floor": cfg.floor, "element": f}))?;
        }
        Command::Evaluate { word, component } => {
            let series = chi_word_series(&word, &component, &cfg.chi())?;
            out.series(&word, &component, &series)?;
        }
        Command::Selftest { only } => {
            let reports = match only {
                Some(i) => vec![run_criterion(i, cfg.seed)
                    .ok_or_else(|| HiggsError::InvalidInput(format!("no criterion {i}; choose 1–10")))?],
                None => run_all(cfg.seed, |r| eprintln!("{r}")),
            };
            out.reports(&reports)?;
            if reports.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(EXIT_ACCEPTANCE));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(HiggsError::InvalidInput(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_COMPUTATION)
        }
    }
}
