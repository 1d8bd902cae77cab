//! The `dgcyl` command line. [`run`] parses the arguments, runs one command, prints a summary
//! (or the report itself with `--format json`) and returns the exit code: 0 when every check
//! passes, 1 when a check fails, 2 for malformed input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::convolution::{def_complex, mc_residual, BinaryAlgebra, CofreeComplex};
use crate::cooperad::CooperadDoc;
use crate::cylinder::{describe_residual, verify_zigzag, CylAlgebra};
use crate::error::{Error, Result};
use crate::linalg::cohomology;
use crate::mapping_cylinder::LemmaDoc;
use crate::report::Report;
use crate::scenario::{cooperad_for, encode_for, load_cooperad, ScenarioDoc};
use crate::suites::{self, LinfParams, MapcylParams};
use crate::trees::{self, LabeledPlanarTree};

/// Default directory for reports when `--report` is not given.
pub const REPORT_DIR_ENV: &str = "DGCYL_REPORT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// Text, with trees drawn.
    AsciiArt,
}

#[derive(Debug, Parser)]
#[command(name = "dgcyl", version, about = "Exact checks for cylinder L-infinity algebras and deformation complexes")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the JSON report to this file.
    #[arg(long, global = true, env = REPORT_DIR_ENV, hide_env = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Labelled planar trees, shuffles and pitchforks.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Cooperad tables.
    #[command(subcommand)]
    Cooperad(CooperadCmd),
    /// Maurer-Cartan elements of binary algebras.
    #[command(subcommand)]
    Mc(McCmd),
    /// Deformation complexes of binary algebras.
    #[command(subcommand)]
    Def(DefCmd),
    /// The cylinder L-infinity algebra.
    #[command(subcommand)]
    Cyl(CylCmd),
    /// Mapping cylinders of pairs of chain maps.
    #[command(subcommand)]
    Mapcyl(MapcylCmd),
    /// Run one of the seeded property suites.
    Suite(SuiteArgs),
}

#[derive(Debug, Subcommand)]
pub enum TreesCmd {
    /// List trees: two-vertex classes, pitchforks of 𝔖𝔥(n, r), or reduced planar shapes.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        two_vertex: bool,
        #[arg(long, conflicts_with = "two_vertex")]
        r: Option<usize>,
    },
    /// Canonical representative of a tree given as nested JSON arrays.
    Canonicalize { tree: String },
    /// Insert the second tree into the `j`-th nodal vertex (preorder, from 1) of the first.
    Insert {
        tree: String,
        #[arg(long)]
        j: usize,
        other: String,
    },
    /// Tree counts and the insertion bijection up to `n` leaves.
    Verify {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CooperadCmd {
    /// Check a cooperad file (or `cocom`, `coass`) against the cooperad axioms.
    Validate {
        file: String,
        /// Truncation for the built-in cooperads.
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum McCmd {
    /// Encode an algebra file and evaluate its Maurer-Cartan residual.
    Check {
        algebra: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum DefCmd {
    /// Build the truncated deformation complex of an algebra file.
    Build {
        algebra: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Cohomology ranks of the truncated deformation complex.
    Cohomology {
        algebra: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CylCmd {
    /// The generalized Jacobi identities on random tuples.
    LinfCheck {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        min_degree: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        max_degree: i64,
    },
    /// Decode `Q_A + sF + Q_B` from a scenario file into its three equations.
    McCheck {
        scenario: PathBuf,
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// Check `Def(A) ← Def(A⇝B) → Def(B)` for the morphism of a scenario file.
    Zigzag {
        scenario: PathBuf,
        #[arg(long)]
        max_arity: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MapcylCmd {
    /// Random instances with quasi-isomorphisms by construction, or one explicit instance.
    Check {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Linf,
    Mc,
    Sf1,
    Strictness,
    Arity,
    Zigzag,
    Mapcyl,
    Combinatorics,
    Encoder,
}

#[derive(Debug, clap::Args)]
pub struct SuiteArgs {
    #[arg(value_enum)]
    pub name: SuiteName,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials, instances or cases; the suite's default when omitted.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub max_arity: Option<usize>,
}

/// What a command produced before it is wrapped into a [`Report`].
struct Outcome {
    passed: bool,
    skipped: Vec<String>,
    summary: Vec<String>,
    art: Vec<String>,
    result: Value,
}

impl Outcome {
    fn new(passed: bool, summary: Vec<String>, result: Value) -> Self {
        Outcome { passed, skipped: Vec::new(), summary, art: Vec::new(), result }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn read(path: &Path, input: &mut Vec<u8>) -> Result<String> {
    let s = std::fs::read_to_string(path)?;
    input.extend_from_slice(s.as_bytes());
    input.push(0);
    Ok(s)
}

fn parse_tree(s: &str) -> Result<LabeledPlanarTree> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    LabeledPlanarTree::from_json(&v)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn tree_listing(ts: &[LabeledPlanarTree]) -> (Vec<String>, Vec<String>, Value) {
    let lines = ts.iter().map(|t| t.to_json_string()).collect();
    let art = ts.iter().map(|t| format!("{}\n{}", t.to_json_string(), t.ascii_art())).collect();
    (lines, art, Value::Array(ts.iter().map(LabeledPlanarTree::to_json).collect()))
}

fn trees_cmd(cmd: &TreesCmd) -> Result<Outcome> {
    match cmd {
        TreesCmd::Enumerate { n, two_vertex, r } => {
            let (what, ts): (String, Vec<LabeledPlanarTree>) = if *two_vertex {
                ("two-vertex classes".into(), trees::enumerate_tree2_classes(*n).into_iter().map(|c| c.0).collect())
            } else if let Some(r) = r {
                let ts = trees::enumerate_sh(*n, *r).iter().map(trees::pitchfork_from_sh).collect::<Result<_>>()?;
                (format!("pitchforks of Sh({n}, {r})"), ts)
            } else {
                ("reduced planar shapes".into(), trees::reduced_planar_shapes(*n))
            };
            let (mut lines, art, list) = tree_listing(&ts);
            lines.insert(0, format!("{} {what} with {n} leaves", ts.len()));
            let mut o = Outcome::new(true, lines, json!({ "n": n, "kind": what, "count": ts.len(), "trees": list }));
            o.art = art;
            Ok(o)
        }
        TreesCmd::Canonicalize { tree } => {
            let t = parse_tree(tree)?;
            let c = trees::canonical_form(&t);
            let idempotent = trees::canonical_form(c.representative()) == c;
            let (lines, art, list) = tree_listing(std::slice::from_ref(c.representative()));
            let mut o = Outcome::new(idempotent, lines, json!({ "input": t.to_json(), "canonical": list[0], "idempotent": idempotent }));
            o.art = art;
            Ok(o)
        }
        TreesCmd::Insert { tree, j, other } => {
            let t = trees::insert(&parse_tree(tree)?, *j, &parse_tree(other)?)?;
            let (lines, art, list) = tree_listing(std::slice::from_ref(&t));
            let mut o = Outcome::new(true, lines, json!({ "j": j, "tree": list[0] }));
            o.art = art;
            Ok(o)
        }
        TreesCmd::Verify { n } => {
            let r = suites::combinatorics_suite(&suites::CombinatoricsParams { max_tree2: *n, max_sh: *n, max_insertion: *n });
            let mut lines = Vec::new();
            for c in &r.tree2 {
                lines.push(format!("Tree2({}) classes: {} (expected {}) {}", c.n, c.found, c.expected, verdict(c.found == c.expected)));
            }
            let sh_ok = r.sh.iter().all(|c| c.found == c.expected);
            lines.push(format!("Sh(n, r) = Stirling2(n, r) for n <= {n}: {}", verdict(sh_ok)));
            for i in &r.insertion {
                lines.push(format!("insertion bijection n = {}: {}", i.n, verdict(i.bijective)));
            }
            Ok(Outcome::new(r.passed, lines, to_value(&r)))
        }
    }
}

fn cooperad_cmd(cmd: &CooperadCmd, input: &mut Vec<u8>) -> Result<Outcome> {
    let CooperadCmd::Validate { file, max_arity } = cmd;
    let coop = match file.as_str() {
        "cocom" | "coass" => load_cooperad(file, *max_arity, None)?,
        path => std::sync::Arc::new(CooperadDoc::from_json_str(&read(Path::new(path), input)?)?.build()?),
    };
    match coop.validate() {
        Ok(s) => Ok(Outcome::new(
            true,
            vec![format!(
                "{} up to arity {}: {} trees, {} cuts, {} swaps checked: pass",
                coop.name(),
                s.max_arity,
                s.trees,
                s.cuts,
                s.swaps
            )],
            json!({ "name": coop.name(), "valid": true, "summary": to_value(&s) }),
        )),
        Err(e @ (Error::InvalidCooperad(_) | Error::NotEquivariant(_))) => Ok(Outcome::new(
            false,
            vec![format!("{}: FAIL: {e}", coop.name())],
            json!({ "name": coop.name(), "valid": false, "witness": e.to_string() }),
        )),
        Err(e) => Err(e),
    }
}

fn load_algebra(path: &Path, input: &mut Vec<u8>) -> Result<BinaryAlgebra> {
    BinaryAlgebra::from_json_str(&read(path, input)?)
}

fn mc_cmd(cmd: &McCmd, input: &mut Vec<u8>) -> Result<Outcome> {
    let McCmd::Check { algebra, max_arity } = cmd;
    let alg = load_algebra(algebra, input)?;
    let src = CofreeComplex::new(cooperad_for(alg.kind, *max_arity), &alg.complex);
    let res = mc_residual(&encode_for(&src, &alg)?)?;
    let nonzero: Vec<Value> = (0..res.values().len())
        .filter(|&w| !res.value(w).is_zero())
        .map(|w| {
            let (n, x, a) = src.cofree().rep(w);
            json!({ "arity": n, "operation": x, "inputs": a, "value": res.value(w).iter().map(|(i, c)| (i.to_string(), c.to_string())).collect::<BTreeMap<_, _>>() })
        })
        .collect();
    let defect = alg.axiom_defect();
    let mut lines = vec![format!("MC residual: {}", if nonzero.is_empty() { "0".to_string() } else { format!("nonzero on {} classes", nonzero.len()) })];
    if let Some(d) = &defect {
        lines.push(d.clone());
    }
    let passed = nonzero.is_empty();
    Ok(Outcome::new(passed, lines, json!({ "max_arity": max_arity, "residual_zero": passed, "axiom_defect": defect, "residual": nonzero })))
}

fn def_cmd(cmd: &DefCmd, input: &mut Vec<u8>) -> Result<Outcome> {
    let (DefCmd::Build { algebra, max_arity } | DefCmd::Cohomology { algebra, max_arity }) = cmd;
    let alg = load_algebra(algebra, input)?;
    let src = CofreeComplex::new(cooperad_for(alg.kind, *max_arity), &alg.complex);
    let def = def_complex(&encode_for(&src, &alg)?)?;
    let dims: BTreeMap<i64, usize> = def.complex.space().pieces().iter().map(|(&k, v)| (k, v.len())).collect();
    match cmd {
        DefCmd::Build { .. } => {
            let lines = vec![format!("Def truncated at arity {max_arity}: dimension {} by degree {dims:?}", def.basis.dim())];
            Ok(Outcome::new(
                true,
                lines,
                json!({ "max_arity": max_arity, "dimension": def.basis.dim(), "dims": to_value(&dims), "complex": to_value(&def.complex.differential()) }),
            ))
        }
        DefCmd::Cohomology { .. } => {
            let ranks = cohomology(&def.complex)?.ranks();
            let lines = vec![format!("cohomology ranks of Def truncated at arity {max_arity}: {ranks:?}")];
            Ok(Outcome::new(true, lines, json!({ "max_arity": max_arity, "dims": to_value(&dims), "ranks": to_value(&ranks) })))
        }
    }
}

fn load_scenario(path: &Path, input: &mut Vec<u8>) -> Result<ScenarioDoc> {
    ScenarioDoc::from_json_str(&read(path, input)?)
}

fn cyl_cmd(cmd: &CylCmd, input: &mut Vec<u8>) -> Result<Outcome> {
    match cmd {
        CylCmd::LinfCheck { trials, seed, max_arity, max_dim, min_degree, max_degree } => {
            if min_degree > max_degree {
                return Err(Error::Schema("--min-degree exceeds --max-degree".into()));
            }
            let sizes = (2..=(*max_arity).max(2)).collect();
            let p = LinfParams { seed: *seed, trials: *trials, max_arity: *max_arity, max_dim: *max_dim, min_degree: *min_degree, max_degree: *max_degree, sizes };
            let r = suites::linf_suite(&p)?;
            let mut lines: Vec<String> = r.by_size.iter().map(|(k, t)| format!("{k}: {} tuples, {} failures", t.checked, t.failed)).collect();
            lines.extend(r.cases.iter().filter(|c| c.residual != "0").map(|c| format!("FAIL {} {:?}: {}", c.cooperad, c.inputs, c.residual)));
            Ok(Outcome::new(r.passed, lines, to_value(&r)))
        }
        CylCmd::McCheck { scenario, max_arity } => {
            let doc = load_scenario(scenario, input)?;
            let inst = doc.instance(scenario.parent(), *max_arity)?;
            let alg = CylAlgebra::new(inst.spaces.clone());
            let u = inst.u()?;
            let res = alg.mc_residual(&u)?;
            let dec = alg.decode_mc(&u)?;
            let failures = dec.failures();
            let mut lines = vec![format!("Maurer-Cartan: {}", verdict(res.is_zero()))];
            lines.extend(failures.iter().map(|f| format!("  {f}")));
            if !res.is_zero() {
                lines.push(format!("  {}", describe_residual(&res)));
            }
            let result = json!({
                "cap": inst.spaces.cap(),
                "mc": res.is_zero(),
                "structure_a": dec.residual_a.is_zero(),
                "morphism": dec.residual_mixed.is_zero(),
                "structure_b": dec.residual_b.is_zero(),
                "failures": failures,
                "witness": if res.is_zero() { Value::Null } else { Value::String(describe_residual(&res)) },
            });
            Ok(Outcome::new(res.is_zero() && dec.is_mc(), lines, result))
        }
        CylCmd::Zigzag { scenario, max_arity } => {
            let doc = load_scenario(scenario, input)?;
            let inst = doc.instance(scenario.parent(), *max_arity)?;
            let r = verify_zigzag(&inst.q_a, &inst.q_b, &inst.f)?;
            let lines = vec![
                format!("F1 quasi-isomorphism: {}", r.f1_quasi_iso),
                format!("Def(A) ranks {:?}", r.def_a_ranks),
                format!("Def(A~>B) ranks {:?}", r.def_ab_ranks),
                format!("Def(B) ranks {:?}", r.def_b_ranks),
                format!("pi_A quasi-iso: {}, pi_B quasi-iso: {}", r.pi_a.quasi_iso, r.pi_b.quasi_iso),
                format!("verdict: {}", r.verdict),
            ];
            let mut o = Outcome::new(r.passed(), lines, to_value(&r));
            if !r.f1_quasi_iso {
                o.skipped.push("conclusion not asserted: F1 is not a quasi-isomorphism".into());
            }
            Ok(o)
        }
    }
}

fn mapcyl_cmd(cmd: &MapcylCmd, input: &mut Vec<u8>) -> Result<Outcome> {
    let MapcylCmd::Check { trials, seed, input: file } = cmd;
    if let Some(path) = file {
        let r = LemmaDoc::from_json_str(&read(path, input)?)?.check()?;
        let lines = vec![
            format!("f quasi-iso: {}, f~ quasi-iso: {}", r.f_quasi_iso, r.ft_quasi_iso),
            format!("pi_V quasi-iso: {}, pi_V~ quasi-iso: {}", r.pi_v_quasi_iso, r.pi_vt_quasi_iso),
            format!("{} witnesses, verdict: {}", r.witnesses.len(), r.verdict),
        ];
        let mut o = Outcome::new(r.passed(), lines, to_value(&r));
        if r.verdict == "hypothesis-violated" {
            o.skipped.push("witnesses not attempted: f or f~ is not a quasi-isomorphism".into());
        }
        return Ok(o);
    }
    let r = suites::mapcyl_suite(&MapcylParams { seed: *seed, trials: *trials, ..MapcylParams::default() })?;
    let failed = r.cases.iter().filter(|c| c.report.verdict != "pass").count();
    let lines = vec![format!("{} instances, {} witnesses, {failed} failures", r.cases.len(), r.witnesses)];
    Ok(Outcome::new(r.passed, lines, to_value(&r)))
}

fn suite_cmd(a: &SuiteArgs) -> Result<Outcome> {
    use suites::*;
    let seed = a.seed;
    let (passed, value) = match a.name {
        SuiteName::Linf => {
            let d = LinfParams::default();
            let r = linf_suite(&LinfParams { seed, trials: a.trials.unwrap_or(d.trials), max_arity: a.max_arity.unwrap_or(d.max_arity), ..d })?;
            (r.passed, to_value(&r))
        }
        SuiteName::Mc => {
            let d = McParams::default();
            let r = mc_suite(&McParams { seed, trials: a.trials.unwrap_or(d.trials), max_arity: a.max_arity.unwrap_or(d.max_arity) })?;
            (r.passed, to_value(&r))
        }
        SuiteName::Sf1 => {
            let d = Sf1Params::default();
            let r = sf1_suite(&Sf1Params { seed, trials: a.trials.unwrap_or(d.trials), max_arity: a.max_arity.unwrap_or(d.max_arity), ..d })?;
            (r.passed, to_value(&r))
        }
        SuiteName::Strictness => {
            let d = StrictParams::default();
            let r = strictness_suite(&StrictParams { seed, trials: a.trials.unwrap_or(d.trials), max_arity: a.max_arity.unwrap_or(d.max_arity), ..d })?;
            (r.passed, to_value(&r))
        }
        SuiteName::Arity => {
            let d = ArityParams::default();
            let r = arity_suite(&ArityParams { seed, instances: a.trials.unwrap_or(d.instances), max_arity: a.max_arity.unwrap_or(d.max_arity), ..d })?;
            (r.passed, to_value(&r))
        }
        SuiteName::Zigzag => {
            let d = ZigzagParams::default();
            let r = zigzag_suite(&ZigzagParams { seed, transports: a.trials.unwrap_or(d.transports), max_arity: a.max_arity.unwrap_or(d.max_arity) })?;
            (r.passed, to_value(&r))
        }
        SuiteName::Mapcyl => {
            let d = MapcylParams::default();
            let r = mapcyl_suite(&MapcylParams { seed, trials: a.trials.unwrap_or(d.trials), ..d })?;
            (r.passed, to_value(&r))
        }
        SuiteName::Combinatorics => {
            let r = combinatorics_suite(&CombinatoricsParams::default());
            (r.passed, to_value(&r))
        }
        SuiteName::Encoder => {
            let d = EncoderParams::default();
            let r = encoder_suite(&EncoderParams { seed, cases: a.trials.unwrap_or(d.cases), max_arity: a.max_arity.unwrap_or(d.max_arity) })?;
            (r.passed, to_value(&r))
        }
    };
    let lines = vec![format!("suite {:?} with seed {seed}: {}", a.name, verdict(passed))];
    Ok(Outcome::new(passed, lines, value))
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Trees(t) => format!(
            "trees {}",
            match t {
                TreesCmd::Enumerate { .. } => "enumerate",
                TreesCmd::Canonicalize { .. } => "canonicalize",
                TreesCmd::Insert { .. } => "insert",
                TreesCmd::Verify { .. } => "verify",
            }
        ),
        Command::Cooperad(_) => "cooperad validate".into(),
        Command::Mc(_) => "mc check".into(),
        Command::Def(DefCmd::Build { .. }) => "def build".into(),
        Command::Def(DefCmd::Cohomology { .. }) => "def cohomology".into(),
        Command::Cyl(CylCmd::LinfCheck { .. }) => "cyl linf-check".into(),
        Command::Cyl(CylCmd::McCheck { .. }) => "cyl mc-check".into(),
        Command::Cyl(CylCmd::Zigzag { .. }) => "cyl zigzag".into(),
        Command::Mapcyl(_) => "mapcyl check".into(),
        Command::Suite(a) => format!("suite {:?}", a.name).to_lowercase(),
    }
}

/// Malformed input exits with 2; anything else that stops a command is a failed check.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NotMaurerCartan(_) | Error::NotCoderivation(_) | Error::NotEquivariant(_) | Error::InvalidCooperad(_) => 1,
        _ => 2,
    }
}

/// Run the command line `args` (including the program name), writing the summary or report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    // the canonical command line enters the hash; the report path does not
    let mut input = format!("{:?}", cli.command).into_bytes();
    input.push(0);
    let outcome = match &cli.command {
        Command::Trees(c) => trees_cmd(c),
        Command::Cooperad(c) => cooperad_cmd(c, &mut input),
        Command::Mc(c) => mc_cmd(c, &mut input),
        Command::Def(c) => def_cmd(c, &mut input),
        Command::Cyl(c) => cyl_cmd(c, &mut input),
        Command::Mapcyl(c) => mapcyl_cmd(c, &mut input),
        Command::Suite(a) => suite_cmd(a),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let code = exit_code_for(&e);
            let _ = writeln!(err, "{name}: {e}");
            if code == 2 {
                return 2;
            }
            Outcome::new(false, vec![format!("FAIL: {e}")], json!({ "error": e.to_string() }))
        }
    };
    let report = Report::new(&name, &input, outcome.passed, outcome.skipped.clone(), outcome.result.clone());
    let json = report.to_json();
    if let Some(path) = &cli.report {
        let path = if path.is_dir() { path.join(format!("{}.json", name.replace(' ', "-"))) } else { path.clone() };
        if let Err(e) = std::fs::write(&path, &json) {
            let _ = writeln!(err, "cannot write report {}: {e}", path.display());
            return 2;
        }
    }
    let _ = match cli.format {
        Format::Json => write!(out, "{json}"),
        Format::Text | Format::AsciiArt => {
            let lines = if cli.format == Format::AsciiArt && !outcome.art.is_empty() { &outcome.art } else { &outcome.summary };
            let mut text = lines.join("\n");
            for s in &outcome.skipped {
                text.push_str(&format!("\nskipped: {s}"));
            }
            writeln!(out, "{text}\n{name}: {}", if outcome.passed { "pass" } else { "FAIL" })
        }
    };
    if outcome.passed {
        0
    } else {
        1
    }
}

/// [`run_with`] on standard output and standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
