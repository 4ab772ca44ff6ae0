use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use formring::error::{Error, Result};
use formring::form::{parse_form_ring, ParsedForm};
use formring::gens::eval;
use formring::group::{parse_group, FGroup};
use formring::io::{
    matrix_from_json, matrix_to_json, patch_report_to_json, read_json, reduction_to_json, vector_from_json, word_from_json,
    word_to_json,
};
use formring::reduce::{
    bfs_closure, commutator_containment_check, conjugate_into_e, gl_closure_comparison, gl_correspondence, patch_word,
    reduce_isotropic_unimodular, symplectic_order, Answer, BfsCaps, MembershipOracle,
};
use formring::ring::{parse_element, RingKind};
use formring::suites::{form_axiom_sweep, run_suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "formring", version, about = "Quadratic and Hermitian groups over small finite rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a form ring or group spec; with --catalog, sweep the built-in catalog.
    Validate {
        spec: Option<String>,
        #[arg(long)]
        catalog: bool,
    },
    /// Run a seeded property suite.
    Suite {
        #[arg(value_parser = formring::suites::SUITES)]
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Enumerate closures: BFS of the elementary group, GL embedding checks.
    #[command(subcommand)]
    Enum(EnumCmd),
    /// Elementary membership queries and commutator containment spot checks.
    #[command(subcommand)]
    Member(MemberCmd),
    /// Evaluate generator words and verify identities.
    #[command(subcommand)]
    Gens(GensCmd),
    /// Reduce an isotropic unimodular vector to the last basis vector.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Patch a polynomial matrix from local factorizations.
    #[command(subcommand)]
    Lg(LgCmd),
    /// Rewrite a conjugate as an elementary word.
    #[command(subcommand)]
    Normality(NormalityCmd),
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long)]
    group: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 16)]
    cap_exponent: u32,
    #[arg(long, default_value_t = 5)]
    word_len: usize,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Ideal generators for the diagonalization suite, comma separated (default: the Jacobson radical).
    #[arg(long, value_delimiter = ',')]
    ideal: Vec<String>,
}

#[derive(Subcommand)]
enum EnumCmd {
    /// Breadth-first closure of the elementary group.
    Bfs {
        #[arg(long)]
        group: String,
        #[arg(long = "cap-bfs", alias = "cap", default_value_t = 50_000_000)]
        cap: usize,
        /// Memory cap in MiB.
        #[arg(long, default_value_t = 2048)]
        cap_mib: usize,
    },
    /// Compare the GL(2n, R) elementary closure with the quadratic closure over the hyperbolic double.
    Gl {
        #[arg(long)]
        base: String,
        #[arg(long)]
        n: usize,
        #[arg(long = "cap-bfs", default_value_t = 50_000_000)]
        cap: usize,
        /// Also check generator correspondence and multiplicativity over all generator pairs.
        #[arg(long)]
        generators: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Bfs,
    Constructive,
    WordWitness,
}

#[derive(Subcommand)]
enum MemberCmd {
    /// Group membership diagnostic, plus elementary membership through an oracle.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = OracleArg::Constructive)]
        oracle: OracleArg,
        #[arg(long = "cap-bfs", default_value_t = 5_000_000)]
        cap: usize,
    },
    /// Commutators of θ(a/s) with elements ≡ I mod s^l, checked for elementary membership.
    Containment {
        #[arg(long)]
        group: String,
        #[arg(long)]
        s: String,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        l: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OracleArg::Constructive)]
        oracle: OracleArg,
        #[arg(long = "cap-bfs", default_value_t = 5_000_000)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum GensCmd {
    /// Evaluate a word to its matrix.
    Eval {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: PathBuf,
    },
    /// Run one of the identity suites.
    VerifyIdentities {
        #[arg(long, value_parser = ["split", "commutator", "key5", "key1", "key3"])]
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Carry an isotropic unimodular vector to e_2n.
    Vector {
        #[arg(long)]
        group: String,
        #[arg(long)]
        vector: PathBuf,
    },
}

#[derive(Subcommand)]
enum LgCmd {
    /// Patch a word over R[X] with value I at X = 0 from its localizations.
    Run {
        #[arg(long)]
        group: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        cap_exponent: u32,
    },
}

#[derive(Subcommand)]
enum NormalityCmd {
    /// Rewrite β·w·β⁻¹ as a generator word.
    Conjugate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        beta: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long, default_value_t = 16)]
        cap_exponent: u32,
    },
}

/// A report and its verdict code (0 pass, 1 fail, 2 unknown).
struct Outcome {
    report: Value,
    code: u8,
}

fn done(report: Value, code: u8) -> Result<Outcome> {
    Ok(Outcome { report, code })
}

fn group(spec: &str) -> Result<FGroup> {
    parse_group(spec)
}

fn suite_config(run: &RunArgs, g: &FGroup) -> Result<SuiteConfig> {
    Ok(SuiteConfig {
        seed: run.seed,
        cases: run.cases,
        cap_exponent: run.cap_exponent,
        word_len: run.word_len,
        degree: run.degree,
        ideal: run.ideal.iter().map(|x| parse_element(g.ring(), x)).collect::<Result<_>>()?,
    })
}

fn suite(name: &str, run: &RunArgs) -> Result<Outcome> {
    let g = group(&run.group)?;
    let rep = run_suite(name, &run.group, &suite_config(run, &g)?)?;
    let code = rep.exit_code() as u8;
    done(serde_json::to_value(&rep)?, code)
}

fn validate(spec: Option<&str>, catalog: bool) -> Result<Outcome> {
    if catalog {
        let rep = form_axiom_sweep()?;
        let code = u8::from(!rep.failures.is_empty());
        return done(serde_json::to_value(&rep)?, code);
    }
    let spec = spec.ok_or_else(|| Error::Descriptor("validate needs a spec or --catalog".into()))?;
    let (ring_spec, group_part) = match spec.split_once('/') {
        Some((r, g)) => (r, Some(g)),
        None => (spec, None),
    };
    let parsed = match parse_form_ring(ring_spec) {
        Ok(p) => p,
        Err(e) => return done(json!({"spec": spec, "valid": false, "error": e.kind(), "message": e.to_string()}), 1),
    };
    let f = match parsed {
        ParsedForm::Finite(f) => f,
        ParsedForm::Poly(p) => p.base.clone(),
    };
    let axioms = f.check_axioms();
    let mut rep = json!({
        "spec": spec,
        "valid": axioms.is_ok(),
        "ring_size": f.ring.size(),
        "commutative": f.ring.is_commutative(),
        "hyperbolic": matches!(f.ring.kind(), RingKind::Hyperbolic { .. }),
        "lambda": f.lambda,
        "lambda_set": f.lambda_set(),
        "lambda_min": f.lambda_min_set(),
        "lambda_max": f.lambda_max_set(),
    });
    if let Err(e) = &axioms {
        rep["error"] = json!(e.kind());
        rep["message"] = json!(e.to_string());
    }
    if group_part.is_some() {
        match group(spec) {
            Ok(g) => rep["group"] = json!({"flavor": format!("{:?}", g.flavor).to_lowercase(), "n": g.n, "dim": g.dim(), "a": g.a}),
            Err(e) => {
                rep["valid"] = json!(false);
                rep["error"] = json!(e.kind());
                rep["message"] = json!(e.to_string());
            }
        }
    }
    let code = u8::from(rep["valid"] != json!(true));
    done(rep, code)
}

fn oracle(g: &FGroup, which: OracleArg, cap: usize) -> MembershipOracle {
    match which {
        OracleArg::Bfs => bfs_closure(g, BfsCaps::elements(cap)),
        OracleArg::Constructive => MembershipOracle::constructive(g, 8 * g.dim() * g.dim()),
        OracleArg::WordWitness => MembershipOracle::word_witness(g),
    }
}

fn enumerate(cmd: &EnumCmd) -> Result<Outcome> {
    match cmd {
        EnumCmd::Bfs { group: spec, cap, cap_mib } => {
            let g = group(spec)?;
            let t = Instant::now();
            let o = bfs_closure(&g, BfsCaps { max_elements: *cap, max_bytes: cap_mib << 20 });
            let mut rep = json!({
                "group": g.spec(),
                "generators": o.generators.len(),
                "size": o.size(),
                "complete": o.complete(),
                "elapsed_ms": t.elapsed().as_millis() as u64,
            });
            // over a prime field with λ = −1 and Λ = R the closure is the full symplectic group
            if let RingKind::Zmod { n } = g.ring().kind() {
                let f = &g.alg;
                let symplectic = g.flavor == formring::group::Flavor::Quadratic
                    && (2..*n).all(|d| n % d != 0)
                    && f.ring.neg(f.lambda) == f.ring.one()
                    && f.lambda_set().len() == f.ring.size();
                if symplectic {
                    let expect = symplectic_order(g.n as u32, *n as u128);
                    rep["symplectic_order"] = json!(expect.to_string());
                    if o.complete() {
                        rep["matches_order"] = json!(o.size() as u128 == expect);
                    }
                }
            }
            let code = if !o.complete() { 2 } else if rep.get("matches_order") == Some(&json!(false)) { 1 } else { 0 };
            done(rep, code)
        }
        EnumCmd::Gl { base, n, cap, generators } => {
            let r = formring::form::parse_finite_form_ring(base)?.ring.clone();
            let cmp = gl_closure_comparison(&r, *n, BfsCaps::elements(*cap))?;
            let mut rep = json!({"comparison": cmp});
            let mut code = if !cmp.complete { 2 } else { u8::from(!cmp.equal) };
            if *generators {
                let c = gl_correspondence(&r, *n)?;
                if !c.passed() {
                    code = 1;
                }
                rep["generators"] = serde_json::to_value(&c)?;
            }
            done(rep, code)
        }
    }
}

fn answer_json(g: &FGroup, a: &Answer) -> (Value, u8) {
    match a {
        Answer::Yes(w) => (json!({"elementary": "yes", "witness": w.as_ref().map(|w| word_to_json(g, w))}), 0),
        Answer::No => (json!({"elementary": "no"}), 1),
        Answer::Unknown => (json!({"elementary": "unknown"}), 2),
    }
}

fn member(cmd: &MemberCmd) -> Result<Outcome> {
    match cmd {
        MemberCmd::Check { group: spec, matrix, oracle: which, cap } => {
            let g = group(spec)?;
            let m = matrix_from_json(&g, &read_json(matrix)?)?;
            let verdict = g.membership(&m);
            let mut rep = json!({"group": g.spec(), "member": verdict.member, "diagnostic": verdict.diagnostic});
            if !verdict.member {
                return done(rep, 1);
            }
            let o = oracle(&g, *which, *cap);
            let (a, code) = answer_json(&g, &o.contains(&m));
            rep["oracle"] = serde_json::to_value(o.mode)?;
            rep["result"] = a;
            done(rep, code)
        }
        MemberCmd::Containment { group: spec, s, l, samples, seed, oracle: which, cap } => {
            let g = group(spec)?;
            let s = parse_element(g.ring(), s)?;
            let o = oracle(&g, *which, *cap);
            let mut rng = formring::sample::rng(*seed);
            let tallies = commutator_containment_check(&o, s, l, *samples, &mut rng)?;
            let code = if tallies.iter().any(|t| t.fail > 0) {
                1
            } else if tallies.iter().any(|t| t.unknown > 0) {
                2
            } else {
                0
            };
            done(json!({"group": g.spec(), "s": s, "oracle": o.mode, "closure_complete": o.complete(), "per_l": tallies}), code)
        }
    }
}

fn gens(cmd: &GensCmd) -> Result<Outcome> {
    match cmd {
        GensCmd::Eval { group: spec, word } => {
            let g = group(spec)?;
            let w = word_from_json(&g, &read_json(word)?)?;
            let m = eval(&g, &w)?;
            done(json!({"group": g.spec(), "word": word_to_json(&g, &w), "matrix": matrix_to_json(&g, &m), "member": g.is_member(&m)}), 0)
        }
        GensCmd::VerifyIdentities { suite: name, run } => suite(name, run),
    }
}

fn reduce(cmd: &ReduceCmd) -> Result<Outcome> {
    let ReduceCmd::Vector { group: spec, vector } = cmd;
    let g = group(spec)?;
    let v = vector_from_json(&g, &read_json(vector)?)?;
    let r = reduce_isotropic_unimodular(&g, &v)?;
    let ok = formring::gens::eval_on_vector(&g, &r.word, &v)? == g.basis(g.dim() - 1);
    let mut rep = reduction_to_json(&g, &r);
    rep["verified"] = json!(ok);
    done(rep, u8::from(!ok))
}

fn lg(cmd: &LgCmd) -> Result<Outcome> {
    let LgCmd::Run { group: spec, input, cap_exponent } = cmd;
    let g = group(spec)?;
    let pg = g.over_poly();
    let w = word_from_json(&pg, &read_json(input)?)?;
    let rep = patch_word(&g, &w, *cap_exponent)?;
    let code = match rep.status {
        formring::reduce::PatchStatus::Success => 0,
        formring::reduce::PatchStatus::Failure(_) => 1,
        formring::reduce::PatchStatus::Unknown(_) => 2,
    };
    done(patch_report_to_json(&pg, &rep), code)
}

fn normality(cmd: &NormalityCmd) -> Result<Outcome> {
    let NormalityCmd::Conjugate { group: spec, beta, word, cap_exponent } = cmd;
    let g = group(spec)?;
    let bv = read_json(beta)?;
    // β as a matrix, or as a word
    let beta = match matrix_from_json(&g, &bv) {
        Ok(m) => m,
        Err(_) => eval(&g, &word_from_json(&g, &bv)?)?,
    };
    let a = word_from_json(&g, &read_json(word)?)?;
    let w = conjugate_into_e(&g, &beta, &a, *cap_exponent)?;
    let expect = g.mul(&g.mul(&beta, &eval(&g, &a)?), &g.inverse(&beta));
    let ok = eval(&g, &w)? == expect;
    done(json!({"group": g.spec(), "word": word_to_json(&g, &w), "verified": ok}), u8::from(!ok))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::Validate { spec, catalog } => validate(spec.as_deref(), *catalog),
        Cmd::Suite { name, run } => suite(name, run),
        Cmd::Enum(c) => enumerate(c),
        Cmd::Member(c) => member(c),
        Cmd::Gens(c) => gens(c),
        Cmd::Reduce(c) => reduce(c),
        Cmd::Lg(c) => lg(c),
        Cmd::Normality(c) => normality(c),
    }
}

fn emit(cli: &Cli, v: &Value) -> Result<()> {
    let Format::Json = cli.format;
    let text = serde_json::to_string_pretty(v)?;
    match &cli.out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // a closed pipe downstream is not an error of ours
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli).and_then(|o| emit(&cli, &o.report).map(|_| o.code)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(3 + e.code().clamp(0, 200) as u8)
        }
    }
}
