//! rotinv: reports over rotationally invariant qubit operators.
//!
//! Every subcommand prints either an aligned text report or, with --json, a
//! stable machine-readable envelope. JSON bytes depend only on the inputs and
//! the seed; wall-clock timing goes to stderr so reruns stay byte-identical.
//!
//! Exit codes: 0 success, 1 negative domain verdict or failed self-check,
//! 2 unusable input.

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rotinv_core as core;
use rotinv_core::{Error, Operator};

#[derive(Parser)]
#[command(
    name = "rotinv",
    version,
    about = "Sector structure, graded bases, realizability, phases, and ancilla lifts \
             for rotationally invariant qubit operators",
    after_help = "Every global flag can also be set through its environment variable."
)]
struct Cli {
    /// Relative tolerance for verdicts and residual checks.
    #[arg(long, global = true, default_value_t = 1e-8, env = "ROTINV_TOL")]
    tol: f64,

    /// Reject requests on more qubits than this.
    #[arg(long, global = true, env = "ROTINV_MAX_N")]
    max_n: Option<usize>,

    /// Emit a JSON report on stdout instead of text.
    #[arg(long, global = true, env = "ROTINV_JSON")]
    json: bool,

    /// Seed for randomized self-checks.
    #[arg(long, global = true, default_value_t = 0, env = "ROTINV_SEED")]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Angular momentum sector multiplicities and dimensions.
    Sectors {
        #[arg(long)]
        n: usize,
    },
    /// Integer eigenvalue table of the graded operator basis.
    Cltable {
        #[arg(long)]
        n: usize,
    },
    /// Decide whether k-local symmetric couplings can realize a Hamiltonian.
    Check {
        /// Hamiltonian spec: {"n":N,"terms":[{"coeff":c,"pairs":[[r,s],..]},..]}
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Dimension of the k-local symmetric evolution algebra.
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also run the numerical closure and compare with the formula.
        #[arg(long)]
        verify_closure: bool,
    },
    /// Sector and body phases accumulated along a piecewise evolution.
    Phases {
        /// Path spec: {"n":N,"segments":[{"duration":t,"terms":[..]},..]}
        #[arg(long)]
        input: PathBuf,
        /// Certify compatibility with k-local generation.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Lift a symmetric Hamiltonian onto two ancillas with exchange couplings.
    Synthesize {
        /// Hamiltonian spec, same format as `check`.
        #[arg(long)]
        input: PathBuf,
        /// Also test membership in the two-local closure on n+2 qubits.
        #[arg(long)]
        verify_closure: bool,
    },
    /// Run the embedded identity suite.
    Verify {
        /// "all" or one of: table, orthogonality, dimensions, commutator, ancilla.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Failures split by exit code: unusable input (2) versus a computation that
/// could not deliver (1).
enum Failure {
    Input(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged { .. } => Failure::Run(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CmdResult = Result<(serde_json::Value, String, bool), Failure>;

#[derive(Serialize)]
struct Settings {
    tol: f64,
    seed: u64,
    max_n: Option<usize>,
}

#[derive(Serialize)]
struct Report<'a> {
    command: String,
    inputs_digest: String,
    settings: &'a Settings,
    result: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let settings = Settings {
        tol: cli.tol,
        seed: cli.seed,
        max_n: cli.max_n,
    };

    let digest_material = match digest_material(&cli.command) {
        Ok(bytes) => bytes,
        Err(f) => return fail(f),
    };

    let outcome = run(&cli, &settings);
    let elapsed = started.elapsed();
    match outcome {
        Ok((result, text, verdict_ok)) => {
            let payload = if cli.json {
                let report = Report {
                    command: command_echo(),
                    inputs_digest: format!("sha256:{}", hex_digest(&digest_material)),
                    settings: &settings,
                    result,
                };
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                text
            };
            // A closed pipe (head, less quit early) is a normal way for the
            // reader to stop; exit quietly instead of panicking.
            if let Err(e) = writeln!(io::stdout(), "{payload}") {
                if e.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            eprintln!("completed in {:.1} ms", elapsed.as_secs_f64() * 1e3);
            if verdict_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::Input(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Run(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// The literal invocation, minus the binary path.
fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn hex_digest(material: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(material);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Bytes the inputs digest covers: file contents for file-driven commands,
/// the canonical parameter string otherwise.
fn digest_material(command: &Command) -> Result<Vec<u8>, Failure> {
    let read = |path: &PathBuf| -> Result<Vec<u8>, Failure> {
        std::fs::read(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
    };
    Ok(match command {
        Command::Sectors { n } => format!("sectors n={n}").into_bytes(),
        Command::Cltable { n } => format!("cltable n={n}").into_bytes(),
        Command::Check { input, k } => {
            let mut bytes = format!("check k={k}\n").into_bytes();
            bytes.extend(read(input)?);
            bytes
        }
        Command::Dim {
            n,
            k,
            verify_closure,
        } => format!("dim n={n} k={k} verify={verify_closure}").into_bytes(),
        Command::Phases { input, k } => {
            let mut bytes = format!("phases k={k:?}\n").into_bytes();
            bytes.extend(read(input)?);
            bytes
        }
        Command::Synthesize {
            input,
            verify_closure,
        } => {
            let mut bytes = format!("synthesize verify={verify_closure}\n").into_bytes();
            bytes.extend(read(input)?);
            bytes
        }
        Command::Verify { suite } => format!("verify suite={suite}").into_bytes(),
    })
}

fn cap_check(n: usize, settings: &Settings) -> Result<(), Failure> {
    if let Some(cap) = settings.max_n {
        if n > cap {
            return Err(Failure::Input(format!(
                "qubit count {n} exceeds the --max-n cap {cap}"
            )));
        }
    }
    Ok(())
}

fn read_to_string(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn j_label(twice_j: usize) -> String {
    if twice_j % 2 == 0 {
        (twice_j / 2).to_string()
    } else {
        format!("{twice_j}/2")
    }
}

fn run(cli: &Cli, settings: &Settings) -> CmdResult {
    match &cli.command {
        Command::Sectors { n } => run_sectors(*n, settings),
        Command::Cltable { n } => run_cltable(*n, settings),
        Command::Check { input, k } => run_check(input, *k, settings),
        Command::Dim {
            n,
            k,
            verify_closure,
        } => run_dim(*n, *k, *verify_closure, settings),
        Command::Phases { input, k } => run_phases(input, *k, settings),
        Command::Synthesize {
            input,
            verify_closure,
        } => run_synthesize(input, *verify_closure, settings),
        Command::Verify { suite } => run_verify(suite, settings),
    }
}

#[derive(Serialize)]
struct SectorEntry {
    twice_j: usize,
    mult: i128,
    trace: i128,
}

#[derive(Serialize)]
struct SectorsResult {
    n: usize,
    sectors: Vec<SectorEntry>,
    total_dimension: i128,
}

fn run_sectors(n: usize, settings: &Settings) -> CmdResult {
    cap_check(n, settings)?;
    let table = core::sector_table(n).map_err(Failure::from)?;
    let sectors: Vec<SectorEntry> = table
        .sectors
        .iter()
        .map(|s| SectorEntry {
            twice_j: s.twice_j,
            mult: s.multiplicity,
            trace: s.sector_trace,
        })
        .collect();
    let total: i128 = sectors.iter().map(|s| s.trace).sum();

    let mut text = format!("angular momentum sectors for n={n}\n");
    text += &format!(
        "{:>8} {:>6} {:>14} {:>12}\n",
        "twice_j", "j", "multiplicity", "dimension"
    );
    for s in &sectors {
        text += &format!(
            "{:>8} {:>6} {:>14} {:>12}\n",
            s.twice_j,
            j_label(s.twice_j),
            s.mult,
            s.trace
        );
    }
    text += &format!("total dimension {total} = 2^{n}");

    let result = serde_json::to_value(SectorsResult {
        n,
        sectors,
        total_dimension: total,
    })
    .expect("sector json");
    Ok((result, text, true))
}

#[derive(Serialize)]
struct ClRowOut {
    l: usize,
    eigenvalues: Vec<i128>,
    norm: i128,
    poly: Vec<i128>,
}

#[derive(Serialize)]
struct ClTableResult {
    n: usize,
    rows: Vec<ClRowOut>,
}

fn run_cltable(n: usize, settings: &Settings) -> CmdResult {
    cap_check(n, settings)?;
    let table = core::cl_table(n).map_err(Failure::from)?;
    let labels = core::sector_labels(n);

    let width = table
        .rows
        .iter()
        .flat_map(|r| r.eigenvalues.iter())
        .map(|c| c.to_string().len())
        .max()
        .unwrap_or(1)
        .max(5);
    let mut text = format!("c_l(j) eigenvalue table for n={n}\n");
    text += &format!("{:>6} |", "l \\ j");
    for &tj in &labels {
        text += &format!(" {:>width$}", j_label(tj));
    }
    text.push('\n');
    for row in &table.rows {
        text += &format!("{:>6} |", row.l);
        for c in &row.eigenvalues {
            text += &format!(" {:>width$}", c);
        }
        text.push('\n');
    }
    text += "squared norms:";
    for row in &table.rows {
        text += &format!(" l={}: {};", row.l, row.norm);
    }

    let rows: Vec<ClRowOut> = table
        .rows
        .iter()
        .map(|r| ClRowOut {
            l: r.l,
            eigenvalues: r.eigenvalues.clone(),
            norm: r.norm,
            poly: r.poly.clone(),
        })
        .collect();
    let result = serde_json::to_value(ClTableResult { n, rows }).expect("cltable json");
    Ok((result, text, true))
}

#[derive(Serialize)]
struct PairTrace {
    l: usize,
    trace: f64,
}

#[derive(Serialize)]
struct QEntry {
    l: usize,
    coeff: f64,
}

#[derive(Serialize)]
struct ChargeEntry {
    twice_j: usize,
    trace: f64,
}

#[derive(Serialize)]
struct CheckResult {
    n: usize,
    k: usize,
    tol: f64,
    charge: Vec<ChargeEntry>,
    q: Vec<QEntry>,
    obstructions: Vec<PairTrace>,
    indeterminate: Vec<usize>,
    h0_norm: f64,
    verdict: bool,
}

fn load_hamiltonian(path: &PathBuf, settings: &Settings) -> Result<Operator, Failure> {
    let text = read_to_string(path)?;
    let spec = core::HamiltonianSpec::from_json(&text).map_err(Failure::from)?;
    cap_check(spec.n, settings)?;
    spec.build().map_err(Failure::from)
}

fn run_check(input: &PathBuf, k: usize, settings: &Settings) -> CmdResult {
    let h = load_hamiltonian(input, settings)?;
    let report = core::check_realizable(&h, k, Some(settings.tol)).map_err(Failure::from)?;

    let mut text = format!(
        "realizability under {k}-local symmetric coupling: n={}, tol={:e}\n",
        report.n, report.tol
    );
    text += "sector traces:\n";
    for &(tj, v) in &report.charge.entries {
        text += &format!("  j={:<4} Tr(H P_j) = {v}\n", j_label(tj));
    }
    text += "graded coefficients:\n";
    for &(l, q) in &report.q {
        text += &format!("  l={l:<3} q = {q}\n");
    }
    if report.obstructions.is_empty() {
        text += "no grades above the reachable range\n";
    } else {
        text += "obstruction traces above the reachable range:\n";
        for &(l, t) in &report.obstructions {
            let scale = h.frobenius_norm().max(1e-300);
            let flag = if t.abs() > report.tol * scale {
                "  violation"
            } else {
                ""
            };
            text += &format!("  l={l:<3} Tr(H C_l) = {t}{flag}\n");
        }
    }
    if !report.indeterminate.is_empty() {
        text += &format!(
            "grades within a decade of tolerance: {:?}\n",
            report.indeterminate
        );
    }
    text += &format!(
        "verdict: {}",
        if report.verdict {
            "realizable"
        } else {
            "obstructed"
        }
    );

    let verdict = report.verdict;
    let result = serde_json::to_value(CheckResult {
        n: report.n,
        k: report.k,
        tol: report.tol,
        charge: report
            .charge
            .entries
            .iter()
            .map(|&(twice_j, trace)| ChargeEntry { twice_j, trace })
            .collect(),
        q: report
            .q
            .iter()
            .map(|&(l, coeff)| QEntry { l, coeff })
            .collect(),
        obstructions: report
            .obstructions
            .iter()
            .map(|&(l, trace)| PairTrace { l, trace })
            .collect(),
        indeterminate: report.indeterminate,
        h0_norm: report.h0_norm,
        verdict,
    })
    .expect("check json");
    Ok((result, text, verdict))
}

#[derive(Serialize)]
struct DimResult {
    n: usize,
    k: usize,
    formula: i128,
    computed: Option<usize>,
    converged: Option<bool>,
    rounds: Option<usize>,
    matches: Option<bool>,
}

fn run_dim(n: usize, k: usize, verify_closure: bool, settings: &Settings) -> CmdResult {
    cap_check(n, settings)?;
    if k < 2 || k > n {
        return Err(Failure::from(Error::LocalityRange { k, n }));
    }
    let formula = core::catalan(n) - (n / 2) as i128 + (k / 2) as i128;

    let mut text = format!("symmetric {k}-local algebra on n={n} qubits\n");
    text += &format!("formula dimension: {formula}");

    let (computed, converged, rounds, matches) = if verify_closure {
        let basis = core::closure_for(n, k, 1e-9).map_err(Failure::from)?;
        let computed = basis.dimension();
        let ok = basis.converged && computed as i128 == formula;
        text += &format!(
            "\ncomputed closure dimension: {computed} ({} after {} rounds)\nmatch: {}",
            if basis.converged {
                "converged"
            } else {
                "not converged"
            },
            basis.rounds,
            if ok { "yes" } else { "no" }
        );
        (
            Some(computed),
            Some(basis.converged),
            Some(basis.rounds),
            Some(ok),
        )
    } else {
        (None, None, None, None)
    };

    let verdict = matches.unwrap_or(true);
    let result = serde_json::to_value(DimResult {
        n,
        k,
        formula,
        computed,
        converged,
        rounds,
        matches,
    })
    .expect("dim json");
    Ok((result, text, verdict))
}

#[derive(Serialize)]
struct ThetaEntry {
    twice_j: usize,
    theta: f64,
}

#[derive(Serialize)]
struct PhiEntry {
    l: usize,
    phi: f64,
}

#[derive(Serialize)]
struct CertificateOut {
    k: usize,
    compatible: bool,
    violations: Vec<PhiEntry>,
}

#[derive(Serialize)]
struct PhasesResult {
    n: usize,
    segments: usize,
    theta: Vec<ThetaEntry>,
    phi: Vec<PhiEntry>,
    certificate: Option<CertificateOut>,
}

fn run_phases(input: &PathBuf, k: Option<usize>, settings: &Settings) -> CmdResult {
    let text_in = read_to_string(input)?;
    let path = core::PiecewisePath::from_json(&text_in).map_err(Failure::from)?;
    cap_check(path.n, settings)?;
    let phases = core::lbody_phases_from_path(&path).map_err(Failure::from)?;

    let mut text = format!(
        "phases along a {}-segment path on n={} qubits\n",
        path.segments.len(),
        path.n
    );
    text += "sector phases:\n";
    for &(tj, th) in &phases.theta {
        text += &format!("  j={:<4} theta = {th}\n", j_label(tj));
    }
    text += "body phases:\n";
    for &(l, ph) in &phases.phi {
        text += &format!("  l={l:<3} phi = {ph}\n");
    }

    let certificate = k.map(|k| {
        let violations: Vec<PhiEntry> = phases
            .phi
            .iter()
            .filter(|&&(l, ph)| l > k && ph.abs() >= settings.tol)
            .map(|&(l, phi)| PhiEntry { l, phi })
            .collect();
        CertificateOut {
            k,
            compatible: violations.is_empty(),
            violations,
        }
    });
    if let Some(cert) = &certificate {
        if cert.compatible {
            text += &format!("certificate: compatible with {}-local generation", cert.k);
        } else {
            text += &format!(
                "certificate: NOT compatible with {}-local generation;",
                cert.k
            );
            for v in &cert.violations {
                text += &format!(" phi_{} = {}", v.l, v.phi);
            }
        }
    } else {
        text.pop();
    }

    let verdict = certificate.as_ref().map(|c| c.compatible).unwrap_or(true);
    let result = serde_json::to_value(PhasesResult {
        n: path.n,
        segments: path.segments.len(),
        theta: phases
            .theta
            .iter()
            .map(|&(twice_j, theta)| ThetaEntry { twice_j, theta })
            .collect(),
        phi: phases
            .phi
            .iter()
            .map(|&(l, phi)| PhiEntry { l, phi })
            .collect(),
        certificate,
    })
    .expect("phases json");
    Ok((result, text, verdict))
}

#[derive(Serialize)]
struct SynthesizeResult {
    n: usize,
    lifted_qubits: usize,
    block_residual: f64,
    membership_residual: Option<f64>,
    program_l: Option<usize>,
    program: Option<Vec<String>>,
}

/// A spec is in monomial form when it is a single term whose exchange
/// factors touch pairwise disjoint sites.
fn monomial_body_label(spec: &core::HamiltonianSpec) -> Option<usize> {
    if spec.terms.len() != 1 {
        return None;
    }
    let pairs = &spec.terms[0].pairs;
    let mut seen = std::collections::BTreeSet::new();
    for &(r, s) in pairs {
        if !seen.insert(r) || !seen.insert(s) {
            return None;
        }
    }
    Some(2 * pairs.len())
}

fn run_synthesize(input: &PathBuf, verify_closure: bool, settings: &Settings) -> CmdResult {
    let text_in = read_to_string(input)?;
    let spec = core::HamiltonianSpec::from_json(&text_in).map_err(Failure::from)?;
    cap_check(spec.n, settings)?;
    let h = spec.build().map_err(Failure::from)?;

    let basis = if verify_closure {
        Some(core::closure_for(spec.n + 2, 2, 1e-9).map_err(Failure::from)?)
    } else {
        None
    };
    let synthesis = core::synthesize_with(&h, basis.as_ref()).map_err(Failure::from)?;

    let mut text = format!(
        "two-ancilla lift: n={} system onto {} qubits\n",
        synthesis.n,
        synthesis.n + 2
    );
    text += &format!("block action residual: {:e}\n", synthesis.block_residual);
    match synthesis.membership_residual {
        Some(r) => text += &format!("closure membership residual: {r:e}\n"),
        None => text += "closure membership: not checked (pass --verify-closure)\n",
    }

    let program_l = monomial_body_label(&spec).filter(|&l| l >= 4);
    let program = match program_l {
        Some(l) => {
            let prog = core::nested_commutator_program(l).map_err(Failure::from)?;
            let lines: Vec<String> = prog.to_text().lines().map(str::to_owned).collect();
            text += &format!(
                "nested commutator program for the canonical {l}-body monomial\n\
                 (sites in input order, ancillas printed a and b):\n"
            );
            for line in &lines {
                text += line;
                text.push('\n');
            }
            Some(lines)
        }
        None => None,
    };
    text.pop();

    let result = serde_json::to_value(SynthesizeResult {
        n: synthesis.n,
        lifted_qubits: synthesis.n + 2,
        block_residual: synthesis.block_residual,
        membership_residual: synthesis.membership_residual,
        program_l,
        program,
    })
    .expect("synthesize json");
    Ok((result, text, true))
}

#[derive(Serialize)]
struct SuiteCheck {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyResult {
    suite: String,
    checks: Vec<SuiteCheck>,
    passed: bool,
}

fn run_verify(suite: &str, settings: &Settings) -> CmdResult {
    let all = ["table", "orthogonality", "dimensions", "commutator", "ancilla"];
    let selected: Vec<&str> = if suite == "all" {
        all.to_vec()
    } else if all.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::Input(format!(
            "unknown suite {suite:?}; expected \"all\" or one of {all:?}"
        )));
    };

    let mut checks = Vec::new();
    for name in selected {
        let outcome = match name {
            "table" => check_table(),
            "orthogonality" => check_orthogonality(),
            "dimensions" => check_dimensions(),
            "commutator" => check_commutator(),
            "ancilla" => check_ancilla(settings.seed),
            _ => unreachable!(),
        };
        let (passed, detail) = match outcome {
            Ok(detail) => (true, detail),
            Err(detail) => (false, detail),
        };
        checks.push(SuiteCheck {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &checks {
        text += &format!(
            "{}: {} ({})\n",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.detail
        );
    }
    text += if passed {
        "suite: all checks passed"
    } else {
        "suite: FAILURES"
    };

    let result = serde_json::to_value(VerifyResult {
        suite: suite.to_string(),
        checks,
        passed,
    })
    .expect("verify json");
    Ok((result, text, passed))
}

fn check_table() -> Result<String, String> {
    let table = core::cl_table(10).map_err(|e| e.to_string())?;
    let expected: [(usize, [i128; 6]); 6] = [
        (0, [1, 1, 1, 1, 1, 1]),
        (2, [-15, -11, -3, 9, 25, 45]),
        (4, [150, 70, -42, -90, 70, 630]),
        (6, [-1050, -210, 462, -90, -1050, 3150]),
        (8, [4725, -315, -1323, 2565, -3675, 4725]),
        (10, [-10395, 3465, -2079, 1485, -1155, 945]),
    ];
    for (l, want) in expected {
        let row = table
            .row(l)
            .ok_or_else(|| format!("missing row l={l}"))?;
        if row.eigenvalues != want {
            return Err(format!("l={l}: got {:?}", row.eigenvalues));
        }
    }
    Ok("ten-qubit eigenvalue grid matches".into())
}

fn check_orthogonality() -> Result<String, String> {
    let n = 6;
    let table = core::cl_table(n).map_err(|e| e.to_string())?;
    for (i, row) in table.rows.iter().enumerate() {
        let a = core::cl_operator(n, row.l).map_err(|e| e.to_string())?;
        let self_overlap = core::hs_inner(&a, &a).re;
        let rel = (self_overlap - row.norm as f64).abs() / row.norm as f64;
        if rel > 1e-8 {
            return Err(format!("norm mismatch at l={}: rel {rel:e}", row.l));
        }
        for row2 in table.rows.iter().skip(i + 1) {
            let b = core::cl_operator(n, row2.l).map_err(|e| e.to_string())?;
            let cross = core::hs_inner(&a, &b).norm();
            if cross > 1e-8 {
                return Err(format!("l={} vs l={}: overlap {cross:e}", row.l, row2.l));
            }
        }
    }
    Ok("graded basis orthogonal with frozen norms at n=6".into())
}

fn check_dimensions() -> Result<String, String> {
    for n in 2..=5usize {
        for k in 2..=n {
            let (computed, formula) =
                core::closure_dimension(n, k).map_err(|e| e.to_string())?;
            if computed as i128 != formula {
                return Err(format!("n={n} k={k}: computed {computed}, formula {formula}"));
            }
        }
    }
    Ok("closure dimensions match the formula for n <= 5".into())
}

fn check_commutator() -> Result<String, String> {
    let program = core::nested_commutator_program(4).map_err(|e| e.to_string())?;
    let evaluated = program.evaluate().map_err(|e| e.to_string())?;
    let target = program.target().map_err(|e| e.to_string())?;
    let residual = evaluated.sub(&target).max_abs();
    if residual > 1e-12 {
        return Err(format!("base identity residual {residual:e}"));
    }
    Ok(format!("base identity residual {residual:e}"))
}

fn check_ancilla(seed: u64) -> Result<String, String> {
    let h = core::random_symmetric_hamiltonian(4, seed).map_err(|e| e.to_string())?;
    let synthesis = core::synthesize_with(&h, None).map_err(|e| e.to_string())?;
    if synthesis.block_residual > 1e-9 {
        return Err(format!("block residual {:e}", synthesis.block_residual));
    }
    let lifted = core::q_tilde(4, 4).map_err(|e| e.to_string())?;
    let system = core::q_monomial(4, 4).map_err(|e| e.to_string())?;
    let up = [
        core::Complex64::new(1.0, 0.0),
        core::Complex64::new(0.0, 0.0),
        core::Complex64::new(0.0, 0.0),
        core::Complex64::new(0.0, 0.0),
    ];
    let residual =
        core::block_action_residual(&lifted, &system, &up).map_err(|e| e.to_string())?;
    if residual > 1e-9 {
        return Err(format!("monomial lift residual {residual:e}"));
    }
    Ok(format!(
        "block residuals {:e} and {residual:e}",
        synthesis.block_residual
    ))
}
