use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use entmon::catalog;
use entmon::invariants::{
    builtin_invariants_of_state, eval_contraction, parse_definitions, tangle, BuiltinInvariants,
};
use entmon::locc::{
    compare_dlocc, copy_ratio_feasibility, default_copy_invariants, slocc_bound, LoccReport,
};
use entmon::monotones::{solve_e, RankVector, SolverConfig};
use entmon::{Error, StateTensor};

const EXIT_BAD_INPUT: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

/// Entanglement monotones, local-unitary invariants and LOCC comparisons.
#[derive(Parser)]
#[command(name = "entmon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SolverArgs {
    /// Random restarts on top of the spectral start.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Stop a run once a sweep improves the objective by less than this.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate E_k for one rank vector.
    Eval {
        /// Catalog name (ghz, w, bell-prod, kempe1, kempe2, haar:D:S) or state JSON file.
        #[arg(long)]
        state: String,
        /// Comma-separated ranks, one per party.
        #[arg(long)]
        ranks: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
    /// Built-in invariants, the tangle for three qubits, and user definitions.
    Invariants {
        #[arg(long)]
        state: String,
        /// File with one contraction expression per line.
        #[arg(long)]
        defs: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Compare two states.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Largest copy count tried in `copies` mode.
        #[arg(long, default_value_t = 4)]
        cmax: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Dlocc,
    Slocc,
    Copies,
}

/// Six significant digits, trailing zeros dropped.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:?}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{x:.5e}");
    }
    let prec = (5 - mag).max(0) as usize;
    let s = format!("{x:.prec$}");
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn state_name(spec: &str, s: &StateTensor) -> String {
    s.label().unwrap_or(spec).to_string()
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Eval {
            state,
            ranks,
            solver,
            json,
        } => {
            let s = catalog::resolve(&state)?;
            let ks: RankVector = ranks.parse()?;
            let r = solve_e(&s, &ks, &solver.config())?;
            if json {
                print_json(&json!({
                    "state": state_name(&state, &s),
                    "ranks": r.ranks,
                    "value": r.value,
                    "converged": r.converged,
                    "restarts_agreeing": r.restarts_agreeing,
                    "exact": r.exact,
                    "degenerate": r.degenerate,
                }));
            } else {
                println!("{}", sig6(r.value));
                let starts = solver.restarts + 1;
                let how = if r.exact {
                    "closed form".to_string()
                } else {
                    format!("{}/{starts} starts agree", r.restarts_agreeing)
                };
                let conv = if r.converged { "converged" } else { "NOT converged" };
                eprintln!("E_({ks}) of {}: {conv}, {how}", state_name(&state, &s));
            }
            Ok(if r.converged { 0 } else { EXIT_NOT_CONVERGED })
        }
        Command::Invariants { state, defs, json } => {
            let s = catalog::resolve(&state)?;
            let defs = match defs {
                Some(path) => parse_definitions(&fs::read_to_string(&path)?)?,
                None => Vec::new(),
            };
            let mut evaluated = Vec::new();
            for (line, expr) in &defs {
                if expr.slot_count() != s.n_parties() {
                    return Err(Error::SlotArity(format!(
                        "definition on line {line} binds {} parties, state has {}",
                        expr.slot_count(),
                        s.n_parties()
                    )));
                }
                let v = eval_contraction(expr, &s)?;
                evaluated.push((line, expr, v));
            }
            let builtins: Option<BuiltinInvariants> = (s.n_parties() == 3)
                .then(|| builtin_invariants_of_state(&s))
                .transpose()?;
            let t = (s.dims() == [2, 2, 2]).then(|| tangle(&s)).transpose()?;

            if json {
                let defs_json: Vec<_> = evaluated
                    .iter()
                    .map(|(line, expr, v)| {
                        json!({
                            "line": line,
                            "expr": expr.to_string(),
                            "re": v.value.re,
                            "im": v.value.im,
                            "imag_warning": v.imag_warning,
                            "simple_form": expr.simple_form().simple,
                        })
                    })
                    .collect();
                print_json(&json!({
                    "state": state_name(&state, &s),
                    "builtins": builtins,
                    "tangle": t,
                    "definitions": defs_json,
                }));
            } else {
                if let Some(b) = &builtins {
                    for (name, v) in b.entries() {
                        println!("{name} = {}", sig6(v));
                    }
                    if b.imag_warning {
                        eprintln!("warning: a built-in had an imaginary part above 1e-9");
                    }
                }
                if let Some(t) = t {
                    println!("tangle = {}", sig6(t));
                }
                for (line, expr, v) in &evaluated {
                    let im = if v.value.im.abs() > 0.0 {
                        format!(" {:+}i", sig6(v.value.im))
                    } else {
                        String::new()
                    };
                    println!("line {line}: {expr} = {}{im}", sig6(v.value.re));
                    if v.imag_warning {
                        eprintln!("warning: line {line} has an imaginary part above 1e-9");
                    }
                }
            }
            Ok(0)
        }
        Command::Compare {
            a,
            b,
            mode,
            cmax,
            solver,
            json,
        } => {
            let sa = catalog::resolve(&a)?;
            let sb = catalog::resolve(&b)?;
            let cfg = solver.config();
            let (na, nb) = (state_name(&a, &sa), state_name(&b, &sb));
            let (report, converged) = match mode {
                Mode::Dlocc => {
                    let r = compare_dlocc(&sa, &sb, None, &cfg)?;
                    if !json {
                        for row in &r.rows {
                            println!(
                                "E{}: {na} = {}, {nb} = {}",
                                row.label,
                                sig6(row.e_a),
                                sig6(row.e_b)
                            );
                        }
                        let list = |v: &[entmon::locc::RankSpec]| {
                            if v.is_empty() {
                                "none".to_string()
                            } else {
                                v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
                            }
                        };
                        println!("{na} -> {nb} blocked by: {}", list(&r.a_to_b_blocked));
                        println!("{nb} -> {na} blocked by: {}", list(&r.b_to_a_blocked));
                        println!(
                            "{}",
                            if r.incommensurable {
                                "incommensurable"
                            } else {
                                "not incommensurable"
                            }
                        );
                    }
                    (LoccReport::from(&r), r.converged())
                }
                Mode::Slocc => {
                    let r = slocc_bound(&sa, &sb, None, &cfg)?;
                    if !json {
                        for row in &r.rows {
                            let bound = row.bound.map(sig6).unwrap_or_else(|| "unconstrained".into());
                            println!(
                                "E{}: {na} = {}, {nb} = {}, bound {bound}",
                                row.label,
                                sig6(row.e_a),
                                sig6(row.e_b)
                            );
                        }
                        match r.overall {
                            Some(p) => println!("p({na} -> {nb}) <= {}", sig6(p)),
                            None => println!("p({na} -> {nb}) unconstrained"),
                        }
                    }
                    (LoccReport::from(&r), r.converged)
                }
                Mode::Copies => {
                    let r = copy_ratio_feasibility(&sa, &sb, &default_copy_invariants(), cmax)?;
                    if !json {
                        for p in &r.invariants {
                            println!(
                                "{}: {na} = {}, {nb} = {}",
                                p.name,
                                sig6(p.value_a.re),
                                sig6(p.value_b.re)
                            );
                        }
                        if r.feasible.is_empty() {
                            println!("no feasible (C1,C2) <= ({cmax},{cmax})");
                        } else {
                            let v: Vec<String> =
                                r.feasible.iter().map(|(x, y)| format!("({x},{y})")).collect();
                            println!("feasible (C1,C2): {}", v.join(" "));
                        }
                        if !r.spot_check_pass {
                            eprintln!("warning: direct evaluation on two copies disagreed");
                        }
                    }
                    (LoccReport::from(&r), true)
                }
            };
            if json {
                print_json(&report);
            }
            Ok(if converged { 0 } else { EXIT_NOT_CONVERGED })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
    }
}
