//! The `finclear` command line. [`run`] takes explicit streams so the
//! binary and the tests share one entry point.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on input,
//! property or usage errors.

use crate::circuit::{decode, decode_circuit, PureCircuit};
use crate::claims::check_claims;
use crate::compile::{compile_instance, merge_central_debtor};
use crate::covered::{solve_covered_central, transform_all};
use crate::error::{Error, Result};
use crate::examples::mutual_insurance;
use crate::fixed_point::{default_damping, multi_start, run_polished, IterationOutcome};
use crate::io::{network_from_json, network_to_json, rates_from_csv, rates_to_csv, VarMap};
use crate::lp::Sense;
use crate::mblp::{emit_mbnlp, parse_objective, solve_exhaustive_traced};
use crate::network::{ClearingReport, FinancialNetwork, PropertyCheck};
use crate::params::{optimal_params, params_from_delta, GadgetParams};
use crate::rational::{exact_decimal_string, format_rational, parse_rational, to_decimal_string, to_f64, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "finclear", version, about = "Clearing for financial networks with debts and CDSes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct NetworkArg {
    /// Network JSON; standard input when absent or `-`.
    #[arg(long)]
    network: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct JsonFlag {
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SenseArg {
    Max,
    Min,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report non-degeneracy and the structural properties of a network.
    Check {
        #[command(flatten)]
        network: NetworkArg,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Check a rate vector against the weak eps-approximate clearing condition.
    Verify {
        #[command(flatten)]
        network: NetworkArg,
        /// Rates CSV with a `bank,rate` header.
        #[arg(long)]
        rates: PathBuf,
        #[arg(long, default_value = "0")]
        eps: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Damped fixed-point iteration with Newton polish.
    SolveIterate {
        #[command(flatten)]
        network: NetworkArg,
        #[arg(long, default_value = "1e-9")]
        eps: String,
        /// Step damping in (0, 1]; 1/2 for cyclic networks and 1 otherwise by default.
        #[arg(long)]
        damping: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Number of seeded random starts; a single run from all ones when absent.
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write rates as `p/q` plus decimal.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Exact clearing of a covered network with fully capitalized CDS debtors.
    SolveCovered {
        #[command(flatten)]
        network: NetworkArg,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Replace every covered CDS by debt and print the CDS-free network.
    TransformCovered {
        #[command(flatten)]
        network: NetworkArg,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive mixed-binary LP search on a central-CDS-debtor network.
    SolveMblp {
        #[command(flatten)]
        network: NetworkArg,
        /// Linear objective such as `2*A + 1/2*B - C`.
        #[arg(long)]
        objective: Option<String>,
        #[arg(long, value_enum, default_value = "max")]
        sense: SenseArg,
        /// Write every simplex tableau to this file.
        #[arg(long)]
        dump_tableaus: Option<PathBuf>,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Write the mixed-binary nonlinear program of a network as text.
    EmitMbnlp {
        #[command(flatten)]
        network: NetworkArg,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a Pure-Circuit instance into its gadget network.
    CompileCircuit {
        /// Circuit text; standard input when absent or `-`.
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, default_value = "2/13")]
        delta: String,
        /// Merge all CDS debtors into one central debtor.
        #[arg(long)]
        merge: bool,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the variable map as JSON.
        #[arg(long)]
        varmap_out: Option<PathBuf>,
    },
    /// Decode circuit variables from bank rates.
    Decode {
        #[command(flatten)]
        network: NetworkArg,
        /// Rates CSV with a `bank,rate` header.
        #[arg(long)]
        rates: PathBuf,
        #[arg(long, default_value = "2/13")]
        delta: String,
        /// Variable map JSON; defaults to the one embedded in the network.
        #[arg(long)]
        varmap: Option<PathBuf>,
        /// Check the decoded assignment against this circuit.
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Check the gadget claims with the interval calculus.
    CheckClaims {
        #[arg(long, default_value = "2/13")]
        delta: String,
        #[arg(long, default_value_t = 1000)]
        per_band: usize,
        #[arg(long, default_value_t = 50)]
        cross: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Print the six-bank example network for a given c in (0, 1).
    Example {
        #[arg(long, default_value = "1/4")]
        c: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// One bank of a clearing report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateJson {
    pub bank: String,
    pub rate: String,
    pub decimal: String,
    pub residual: String,
}

/// JSON form of every solver and `verify` report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClearingJson {
    pub command: String,
    pub passed: bool,
    pub eps: String,
    pub max_residual: String,
    pub max_residual_decimal: String,
    pub rates: Vec<RateJson>,
    pub pinned_violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp_solves: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<BTreeMap<String, u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyJson {
    pub holds: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub banks: usize,
    pub debts: usize,
    pub cds: usize,
    pub nondegenerate: PropertyJson,
    pub dedicated: PropertyJson,
    pub central_cds_debtor: PropertyJson,
    pub central_debtor: Option<String>,
    pub covered: PropertyJson,
    pub dependency_cycle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimJson {
    pub gate: String,
    pub number: u8,
    pub text: String,
    pub samples: usize,
    pub claimed_failures: usize,
    pub simulation_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimsJson {
    pub delta: String,
    pub epsilon: String,
    pub passed: bool,
    pub statements: Vec<ClaimJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeJson {
    pub assignment: BTreeMap<String, String>,
    pub satisfies: Option<bool>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Streams { stdin, stdout, stderr };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(io.stderr, "finclear: {e}");
            EXIT_ERROR
        }
    }
}

struct Streams<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Streams<'_> {
    fn read_source(&mut self, path: Option<&Path>) -> Result<String> {
        match path {
            Some(p) if p != Path::new("-") => Ok(std::fs::read_to_string(p)?),
            _ => {
                let mut text = String::new();
                self.stdin.read_to_string(&mut text)?;
                Ok(text)
            }
        }
    }

    fn network(&mut self, arg: &NetworkArg) -> Result<(FinancialNetwork, Option<VarMap>)> {
        let text = self.read_source(arg.network.as_deref())?;
        network_from_json(&text)
    }

    fn emit(&mut self, out: Option<&Path>, text: &str) -> Result<()> {
        match out {
            Some(p) if p != Path::new("-") => std::fs::write(p, text)?,
            _ => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("report serializes");
        writeln!(self.stdout, "{text}")?;
        Ok(())
    }
}

fn exit_for(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn decimal(x: &Rational) -> String {
    exact_decimal_string(x).unwrap_or_else(|| to_decimal_string(x, 20))
}

fn scientific(x: &Rational) -> String {
    format!("{:.6e}", to_f64(x))
}

fn delta_params(text: &str) -> Result<GadgetParams> {
    let delta = parse_rational(text)?;
    if delta == optimal_params().delta {
        return Ok(optimal_params());
    }
    params_from_delta(&delta)
}

/// JSON report for `command` from a verified clearing report.
pub fn clearing_json(command: &str, net: &FinancialNetwork, report: &ClearingReport) -> ClearingJson {
    ClearingJson {
        command: command.to_string(),
        passed: report.passed,
        eps: format_rational(&report.eps),
        max_residual: format_rational(&report.max_residual),
        max_residual_decimal: scientific(&report.max_residual),
        rates: report
            .rates
            .iter()
            .zip(&report.residuals)
            .enumerate()
            .map(|(i, (r, res))| RateJson {
                bank: net.id(i).to_string(),
                rate: format_rational(r),
                decimal: decimal(r),
                residual: format_rational(res),
            })
            .collect(),
        pinned_violations: report.pinned_violations.iter().map(|&i| net.id(i).to_string()).collect(),
        iterations: None,
        converged: None,
        start: None,
        newton_steps: None,
        passes: None,
        lp_solves: None,
        y: None,
        objective_value: None,
    }
}

fn summary(report: &ClearingReport) -> String {
    format!(
        "{}: max residual {} at eps {}",
        if report.passed { "passed" } else { "FAILED" },
        scientific(&report.max_residual),
        format_rational(&report.eps)
    )
}

fn property_json(check: &PropertyCheck) -> PropertyJson {
    PropertyJson { holds: check.holds, violations: check.violations.clone() }
}

fn dispatch(command: Command, io: &mut Streams) -> Result<i32> {
    match command {
        Command::Check { network, json } => {
            let (net, _) = io.network(&network)?;
            let ccd = net.check_central_cds_debtor();
            let report = CheckJson {
                banks: net.len(),
                debts: net.debt_count(),
                cds: net.cds_count(),
                nondegenerate: property_json(&net.check_nondegenerate()),
                dedicated: property_json(&net.check_dedicated()),
                central_cds_debtor: PropertyJson { holds: ccd.holds, violations: ccd.violations },
                central_debtor: ccd.ccd.map(|i| net.id(i).to_string()),
                covered: property_json(&net.check_covered()),
                dependency_cycle: net.has_dependency_cycle(),
            };
            if json.json {
                io.json(&report)?;
            } else {
                writeln!(io.stdout, "banks {} debts {} cds {}", report.banks, report.debts, report.cds)?;
                let rows = [
                    ("non-degenerate", &report.nondegenerate),
                    ("dedicated", &report.dedicated),
                    ("central CDS debtor", &report.central_cds_debtor),
                    ("covered", &report.covered),
                ];
                for (name, p) in rows {
                    writeln!(io.stdout, "{name}: {}", if p.holds { "yes" } else { "no" })?;
                    for v in &p.violations {
                        writeln!(io.stdout, "  {v}")?;
                    }
                }
                if let Some(c) = &report.central_debtor {
                    writeln!(io.stdout, "central debtor: {c}")?;
                }
                writeln!(io.stdout, "dependency cycle: {}", if report.dependency_cycle { "yes" } else { "no" })?;
            }
            Ok(exit_for(report.nondegenerate.holds))
        }
        Command::Verify { network, rates, eps, json } => {
            let (net, _) = io.network(&network)?;
            let r = rates_from_csv(&net, &std::fs::read_to_string(rates)?)?;
            let report = net.verify_crrv(&r, &parse_rational(&eps)?)?;
            if json.json {
                io.json(&clearing_json("verify", &net, &report))?;
            } else {
                writeln!(io.stdout, "{}", summary(&report))?;
                for (i, res) in report.residuals.iter().enumerate() {
                    if *res > report.eps && !report.trivially_solvent.contains(&i) {
                        writeln!(io.stdout, "  {}: residual {}", net.id(i), scientific(res))?;
                    }
                }
                for &i in &report.pinned_violations {
                    writeln!(io.stdout, "  {}: trivially solvent but rate is not 1", net.id(i))?;
                }
            }
            Ok(exit_for(report.passed))
        }
        Command::SolveIterate { network, eps, damping, max_iter, starts, seed, exact, json } => {
            let (net, _) = io.network(&network)?;
            let eps = parse_rational(&eps)?;
            let damping = match damping {
                Some(d) => parse_rational(&d)?,
                None => default_damping(&net),
            };
            let outcome: IterationOutcome = match starts {
                Some(n) => multi_start(&net, n, seed, &damping, max_iter, &eps)?,
                None => run_polished(&net, None, &damping, max_iter, &eps)?,
            };
            let report = &outcome.report;
            if json.json {
                let mut j = clearing_json("solve-iterate", &net, report);
                j.iterations = Some(outcome.iterations);
                j.converged = Some(outcome.converged);
                j.start = Some(outcome.start);
                j.newton_steps = Some(outcome.newton_steps);
                io.json(&j)?;
            } else {
                io.emit(None, &rates_to_csv(&net, &report.rates, exact))?;
                writeln!(
                    io.stderr,
                    "{} after {} iterations and {} Newton steps (start {})",
                    summary(report),
                    outcome.iterations,
                    outcome.newton_steps,
                    outcome.start
                )?;
            }
            Ok(exit_for(report.passed))
        }
        Command::SolveCovered { network, json } => {
            let (net, _) = io.network(&network)?;
            let solution = solve_covered_central(&net)?;
            if json.json {
                let mut j = clearing_json("solve-covered", &net, &solution.report);
                j.passes = Some(solution.passes);
                io.json(&j)?;
            } else {
                io.emit(None, &rates_to_csv(&net, &solution.report.rates, true))?;
                writeln!(io.stderr, "{} after {} passes", summary(&solution.report), solution.passes)?;
            }
            Ok(exit_for(solution.report.passed))
        }
        Command::TransformCovered { network, out } => {
            let (net, _) = io.network(&network)?;
            let transformed = transform_all(&net)?;
            io.emit(out.as_deref(), &network_to_json(&transformed, None))?;
            Ok(EXIT_OK)
        }
        Command::SolveMblp { network, objective, sense, dump_tableaus, json } => {
            let (net, _) = io.network(&network)?;
            let sense = match sense {
                SenseArg::Max => Sense::Max,
                SenseArg::Min => Sense::Min,
            };
            let objective = objective.map(|text| parse_objective(&net, &text, sense)).transpose()?;
            let solution = match dump_tableaus {
                Some(path) => {
                    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                    let s = solve_exhaustive_traced(&net, objective, Some(&mut file))?;
                    file.flush()?;
                    s
                }
                None => solve_exhaustive_traced(&net, objective, None)?,
            };
            if json.json {
                let mut j = clearing_json("solve-mblp", &net, &solution.report);
                j.lp_solves = Some(solution.lp_solves);
                j.y = Some(solution.y.iter().map(|(k, &v)| (k.clone(), u8::from(v))).collect());
                j.objective_value = solution.objective_value.as_ref().map(format_rational);
                io.json(&j)?;
            } else {
                io.emit(None, &rates_to_csv(&net, &solution.report.rates, true))?;
                let y: String = solution.y.values().map(|&v| if v { '1' } else { '0' }).collect();
                write!(io.stderr, "{} after {} LP solves, y = {y}", summary(&solution.report), solution.lp_solves)?;
                if let Some(v) = &solution.objective_value {
                    write!(io.stderr, ", objective {}", format_rational(v))?;
                }
                writeln!(io.stderr)?;
            }
            Ok(exit_for(solution.report.passed))
        }
        Command::EmitMbnlp { network, out } => {
            let (net, _) = io.network(&network)?;
            io.emit(out.as_deref(), &emit_mbnlp(&net))?;
            Ok(EXIT_OK)
        }
        Command::CompileCircuit { circuit, delta, merge, out, varmap_out } => {
            let params = delta_params(&delta)?;
            let text = io.read_source(circuit.as_deref())?;
            let (mut net, varmap) = compile_instance(&PureCircuit::parse(&text)?, &params)?;
            if merge {
                net = merge_central_debtor(&net)?;
            }
            io.emit(out.as_deref(), &network_to_json(&net, Some(&varmap)))?;
            if let Some(path) = varmap_out {
                let text = serde_json::to_string_pretty(&varmap).expect("varmap serializes");
                std::fs::write(path, text + "\n")?;
            }
            Ok(EXIT_OK)
        }
        Command::Decode { network, rates, delta, varmap, circuit, json } => {
            let (net, embedded) = io.network(&network)?;
            let varmap: VarMap = match varmap {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
                    .map_err(|e| Error::Input(format!("varmap JSON: {e}")))?,
                None => embedded.ok_or_else(|| Error::Input("network has no varmap; pass --varmap".into()))?,
            };
            let delta = parse_rational(&delta)?;
            let r = rates_from_csv(&net, &std::fs::read_to_string(rates)?)?;
            let (assignment, satisfies) = match circuit {
                Some(path) => {
                    let c = PureCircuit::parse(&std::fs::read_to_string(path)?)?;
                    let x = decode_circuit(&c, &net, &r, &varmap, &delta)?;
                    let ok = c.check_satisfies(&x)?;
                    (x, Some(ok))
                }
                None => (decode(&net, &r, &varmap, &delta)?, None),
            };
            let report = DecodeJson {
                assignment: assignment.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                satisfies,
            };
            if json.json {
                io.json(&report)?;
            } else {
                for (var, value) in &report.assignment {
                    writeln!(io.stdout, "{var} {value}")?;
                }
                if let Some(ok) = satisfies {
                    writeln!(io.stderr, "circuit {}", if ok { "satisfied" } else { "NOT satisfied" })?;
                }
            }
            Ok(exit_for(satisfies != Some(false)))
        }
        Command::CheckClaims { delta, per_band, cross, json } => {
            let params = delta_params(&delta)?;
            let results = check_claims(&params, per_band, cross)?;
            let report = ClaimsJson {
                delta: format_rational(&params.delta),
                epsilon: format_rational(&params.epsilon),
                passed: results.iter().all(|r| r.claimed_ok()),
                statements: results
                    .iter()
                    .map(|r| ClaimJson {
                        gate: r.gate.name().to_string(),
                        number: r.number,
                        text: r.text.to_string(),
                        samples: r.samples,
                        claimed_failures: r.claimed_failures,
                        simulation_failures: r.simulation_failures,
                    })
                    .collect(),
            };
            if json.json {
                io.json(&report)?;
            } else {
                writeln!(io.stdout, "delta {} eps {}", report.delta, report.epsilon)?;
                for s in &report.statements {
                    writeln!(
                        io.stdout,
                        "{} {} {:<4} {} samples, {} outside claimed band, {} outside simulation band: {}",
                        s.gate,
                        s.number,
                        if s.claimed_failures == 0 { "ok" } else { "FAIL" },
                        s.samples,
                        s.claimed_failures,
                        s.simulation_failures,
                        s.text
                    )?;
                }
            }
            Ok(exit_for(report.passed))
        }
        Command::Example { c, out } => {
            let net = mutual_insurance(&parse_rational(&c)?)?;
            io.emit(out.as_deref(), &network_to_json(&net, None))?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["finclear"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn example_then_iterate() {
        let (code, net, _) = call(&["example", "--c", "1/4"], "");
        assert_eq!(code, 0);
        let (code, csv, err) = call(&["solve-iterate", "--eps", "1e-9"], &net);
        assert_eq!(code, 0, "{err}");
        assert!(csv.lines().any(|l| l.starts_with("2,0.5")));
        assert!(csv.lines().any(|l| l.starts_with("5,0.5")));
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = call(&["frobnicate"], "");
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn bad_network_is_input_error() {
        let (code, _, err) = call(&["check"], "{ not json");
        assert_eq!(code, 2);
        assert!(err.contains("input error"));
    }

    #[test]
    fn json_report_round_trips() {
        let (_, net, _) = call(&["example", "--c", "1/4"], "");
        let (code, text, _) = call(&["solve-iterate", "--json"], &net);
        assert_eq!(code, 0);
        let parsed: ClearingJson = serde_json::from_str(&text).unwrap();
        assert!(parsed.passed);
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    }

    #[test]
    fn mblp_requires_central_debtor() {
        let (_, net, _) = call(&["example", "--c", "1/4"], "");
        let (code, _, err) = call(&["solve-mblp"], &net);
        assert_eq!(code, 2);
        assert!(err.contains("property error"));
    }
}
