//! Command-line front end. Every command prints one record
//! `{command, inputs, result, exact}` as JSON (default) or TSV.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error, 3 a `verify`
//! check failed.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::chern::{
    net_counts, net_invariants, unigonal_counts, unigonal_double_point, BaseClasses, SurfaceChernData, UnigonalTable,
};
use crate::discriminant::discriminant_group;
use crate::divisor::{delta, nl_vector_data, triangular_decomposition, MuVariant, NLKey};
use crate::lattice::{build_standard, orthogonal_complement, IntegralLattice, LatticeVector, StandardLattice};
use crate::matrix::IntMatrix;
use crate::orbit::{nl_components, ComponentOptions, Locus};
use crate::par::Strategy;
use crate::siegel::{
    chi10, e4e6_with, fit_weight10, independence_check, predict_nl, theta_coeff, CoeffTable, GenusTwoIndex,
    GenusTwoSeries, HalfIntegralTable, NlQuantity, ThetaFit,
};
use crate::snf::smith_normal_form;
use crate::verify::{run_all, run_criterion, VerifyReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_COMPUTE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "k3nl", version, about = "Exact lattice, Noether-Lefschetz and genus-2 Siegel form computations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lattice computations.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Noether-Lefschetz divisors and component counts.
    #[command(subcommand)]
    Nl(NlCmd),
    /// Enumerative cusp and binode counts.
    #[command(subcommand)]
    Enum(EnumCmd),
    /// Genus-2 Siegel modular forms.
    #[command(subcommand)]
    Siegel(SiegelCmd),
    /// Run the reproduction checklist.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct LatticeSource {
    /// Shipped lattice: U, E8neg, K3, LambdaG, LambdaA1, E7neg, Uperp.
    #[arg(long, conflicts_with = "file")]
    name: Option<String>,
    /// Genus, for LambdaG and LambdaA1.
    #[arg(long)]
    g: Option<u64>,
    /// Lattice file: `rank N`, N Gram rows, one line of labels.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Discriminant group and its quadratic form.
    Disc(LatticeSource),
    /// Orthogonal complement of vectors.
    Complement {
        #[command(flatten)]
        source: LatticeSource,
        /// A vector, either `c1,c2,...` or `label:coef,label:coef`. Repeatable.
        #[arg(long = "vector", required = true, allow_hyphen_values = true)]
        vectors: Vec<String>,
    },
    /// Smith normal form of a matrix or of a lattice's Gram matrix.
    Snf {
        /// Rows separated by `;`, entries by spaces or commas.
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        #[command(flatten)]
        source: LatticeSource,
    },
}

#[derive(Debug, Subcommand)]
enum NlCmd {
    /// Irreducible components of the nodal, A11 or A2 locus.
    Components {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        locus: Locus,
        /// Also find a witness vector for every component.
        #[arg(long)]
        witnesses: bool,
        /// Witness search bound (default 2g).
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Triangular decomposition of a divisor key.
    #[command(allow_negative_numbers = true)]
    Triangular {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value = "d-corrected")]
        variant: MuVariant,
    },
    /// Half-norm and discriminant class of a divisor key.
    #[command(name = "vector-data", allow_negative_numbers = true)]
    VectorData {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: i64,
    },
}

#[derive(Debug, Subcommand)]
enum EnumCmd {
    /// Counts for a net of curves.
    #[command(allow_negative_numbers = true)]
    Net {
        #[arg(long)]
        alpha2: i64,
        #[arg(long)]
        alphac1: i64,
        #[arg(long)]
        c1sq: i64,
        #[arg(long)]
        c2: i64,
        #[arg(long, default_value_t = 1)]
        degree: i64,
    },
    /// Counts for the unigonal family.
    Unigonal {
        /// Pushforward table, lines `name c0 c1 c2`.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum SiegelCmd {
    /// The Igusa cusp form from its product expansion.
    Chi10 {
        #[arg(long, default_value_t = 2)]
        trunc_k: i64,
        #[arg(long, default_value_t = 2)]
        trunc_m: i64,
        /// Report only these indices `k,l,m`. Repeatable.
        #[arg(long = "index", allow_hyphen_values = true)]
        indices: Vec<GenusTwoIndex>,
        /// Table of `m c(m)` lines.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// The Eisenstein product E4 E6.
    E4e6 {
        #[arg(long, default_value_t = 1)]
        trunc_k: i64,
        #[arg(long, default_value_t = 1)]
        trunc_m: i64,
        #[arg(long = "index", allow_hyphen_values = true)]
        indices: Vec<GenusTwoIndex>,
        #[arg(long)]
        e4: Option<PathBuf>,
        #[arg(long)]
        e6: Option<PathBuf>,
    },
    /// Fit `a E4 E6 + b chi10` to observations `k,l,m=value`, in order.
    Fit {
        #[arg(long = "obs", required = true, allow_hyphen_values = true)]
        observations: Vec<String>,
    },
    /// NL number predicted by a fit.
    #[command(allow_negative_numbers = true)]
    Predict {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        which: NlQuantity,
    },
    /// Whether a fit is independent of the hyperelliptic NL vector.
    #[command(allow_negative_numbers = true)]
    Independence {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run every criterion (the default).
    #[arg(long)]
    all: bool,
    /// Run a single criterion, 1 to 9.
    #[arg(long, conflicts_with = "all", value_parser = clap::value_parser!(u8).range(1..=9))]
    criterion: Option<u8>,
}

/// What a run produced: exit code and the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// A computation result before rendering.
struct Record {
    command: String,
    inputs: Value,
    result: Value,
    code: u8,
}

/// Failure that maps to exit code 2.
struct Failure(String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<Record, Failure>;

pub fn run(argv: &[String]) -> CliOutput {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CliOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => CliOutput { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::Parallel };
    let format = cli.format;
    let (name, outcome) = dispatch(cli.command, strategy, format);
    match outcome {
        Ok(rec) => CliOutput { code: rec.code, stdout: render(&rec, format), stderr: String::new() },
        Err(Failure(msg)) => {
            let err = json!({"command": name, "error": msg, "exact": true});
            CliOutput { code: EXIT_COMPUTE, stdout: String::new(), stderr: to_json(&err) }
        }
    }
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn render(rec: &Record, format: Format) -> String {
    match format {
        Format::Json => to_json(&json!({
            "command": rec.command,
            "inputs": rec.inputs,
            "result": rec.result,
            "exact": true,
        })),
        Format::Tsv => tsv(&rec.command, &rec.result),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            xs.iter().map(scalar).collect::<Vec<_>>().join(",")
        }
        other => other.to_string(),
    }
}

/// Scalars as `key<TAB>value` lines; arrays of objects as tables.
fn tsv(command: &str, result: &Value) -> String {
    let mut lines = vec![format!("command\t{command}")];
    let Value::Object(fields) = result else {
        lines.push(format!("result\t{}", scalar(result)));
        return lines.join("\n");
    };
    let mut tables = Vec::new();
    for (k, v) in fields {
        match v {
            Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => tables.push((k, rows)),
            _ => lines.push(format!("{k}\t{}", scalar(v))),
        }
    }
    for (name, rows) in tables {
        lines.push(String::new());
        lines.push(format!("# {name}"));
        let header: Vec<&String> = rows[0].as_object().expect("object rows").keys().collect();
        lines.push(header.iter().map(|h| h.as_str()).collect::<Vec<_>>().join("\t"));
        for row in rows {
            let obj = row.as_object().expect("object rows");
            lines.push(header.iter().map(|h| obj.get(*h).map(scalar).unwrap_or_default()).collect::<Vec<_>>().join("\t"));
        }
    }
    lines.join("\n")
}

fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

fn rat(x: &BigRational) -> Value {
    json!(x.to_string())
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| bigs(r)).collect())
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, Failure> {
    let bad = || Failure(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn load_lattice(src: &LatticeSource) -> std::result::Result<(String, IntegralLattice), Failure> {
    match (&src.name, &src.file) {
        (Some(name), None) => {
            let which: StandardLattice = name.parse()?;
            Ok((name.clone(), build_standard(which, src.g)?))
        }
        (None, Some(path)) => Ok((path.display().to_string(), IntegralLattice::from_text(&read(path)?)?)),
        _ => Err(Failure("give exactly one of --name or --file".into())),
    }
}

fn source_inputs(src: &LatticeSource) -> Value {
    json!({
        "name": src.name,
        "g": src.g,
        "file": src.file.as_ref().map(|p| p.display().to_string()),
    })
}

fn parse_vector(l: &IntegralLattice, s: &str) -> std::result::Result<LatticeVector, Failure> {
    if s.contains(':') {
        let mut terms = Vec::new();
        for part in s.split(',') {
            let (label, coef) =
                part.split_once(':').ok_or_else(|| Failure(format!("bad term `{part}`, expected label:coef")))?;
            let coef: i64 = coef.trim().parse().map_err(|_| Failure(format!("bad coefficient in `{part}`")))?;
            terms.push((coef, label.trim()));
        }
        Ok(l.vector(&terms)?)
    } else {
        let coords: std::result::Result<Vec<BigInt>, _> = s.split(',').map(|x| x.trim().parse::<BigInt>()).collect();
        let v = LatticeVector(coords.map_err(|_| Failure(format!("bad vector `{s}`")))?);
        l.check_len(&v)?;
        Ok(v)
    }
}

fn parse_matrix(s: &str) -> std::result::Result<IntMatrix, Failure> {
    let rows: Vec<Vec<BigInt>> = s
        .split(';')
        .map(|r| {
            r.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<BigInt>().map_err(|_| Failure(format!("bad matrix entry `{x}`"))))
                .collect()
        })
        .collect::<std::result::Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    IntMatrix::from_big_rows(rows, cols).ok_or_else(|| Failure("matrix rows have different lengths".into()))
}

fn record(command: &str, inputs: Value, result: Value) -> Outcome {
    Ok(Record { command: command.into(), inputs, result, code: EXIT_OK })
}

fn dispatch(cmd: Command, strategy: Strategy, format: Format) -> (String, Outcome) {
    match cmd {
        Command::Lattice(c) => lattice(c),
        Command::Nl(c) => nl(c, strategy),
        Command::Enum(c) => enumerative(c),
        Command::Siegel(c) => siegel(c, strategy),
        Command::Verify(a) => ("verify".into(), verify(a, strategy, format)),
    }
}

fn lattice(cmd: LatticeCmd) -> (String, Outcome) {
    match cmd {
        LatticeCmd::Disc(src) => ("lattice disc".into(), lattice_disc(&src)),
        LatticeCmd::Complement { source, vectors } => ("lattice complement".into(), lattice_complement(&source, &vectors)),
        LatticeCmd::Snf { matrix, source } => ("lattice snf".into(), lattice_snf(matrix.as_deref(), &source)),
    }
}

fn lattice_disc(src: &LatticeSource) -> Outcome {
    let (name, l) = load_lattice(src)?;
    let d = discriminant_group(&l)?;
    let generators: Vec<Value> = (0..d.invariant_factors().len())
        .map(|i| {
            let x = d.generator(i);
            json!({"order": big(&d.invariant_factors()[i]), "q": rat(&d.q(&x))})
        })
        .collect();
    record(
        "lattice disc",
        source_inputs(src),
        json!({
            "lattice": name,
            "rank": l.rank(),
            "det": big(&l.det()),
            "invariant_factors": bigs(d.invariant_factors()),
            "order": big(&d.order()),
            "generators": generators,
        }),
    )
}

fn lattice_complement(src: &LatticeSource, vectors: &[String]) -> Outcome {
    let (_, l) = load_lattice(src)?;
    let vs = vectors.iter().map(|s| parse_vector(&l, s)).collect::<std::result::Result<Vec<_>, _>>()?;
    let c = orthogonal_complement(&l, &vs)?;
    let mut inputs = source_inputs(src);
    inputs["vectors"] = json!(vectors);
    record(
        "lattice complement",
        inputs,
        json!({
            "rank": c.lattice.rank(),
            "det": big(&c.lattice.det()),
            "primitive": c.is_primitive(),
            "basis": matrix(&c.basis),
            "gram": matrix(c.lattice.gram()),
        }),
    )
}

fn lattice_snf(m: Option<&str>, src: &LatticeSource) -> Outcome {
    let mat = match m {
        Some(s) => parse_matrix(s)?,
        None => load_lattice(src)?.1.gram().clone(),
    };
    let s = smith_normal_form(&mat);
    let mut inputs = source_inputs(src);
    inputs["matrix"] = json!(m);
    record(
        "lattice snf",
        inputs,
        json!({
            "diagonal": bigs(&s.diagonal()),
            "rank": s.rank(),
            "d": matrix(&s.d),
            "u": matrix(&s.u),
            "v": matrix(&s.v),
        }),
    )
}

fn nl(cmd: NlCmd, strategy: Strategy) -> (String, Outcome) {
    match cmd {
        NlCmd::Components { g, locus, witnesses, bound } => {
            ("nl components".into(), nl_components_cmd(g, locus, witnesses, bound, strategy))
        }
        NlCmd::Triangular { g, d, n, variant } => ("nl triangular".into(), nl_triangular(g, d, n, variant)),
        NlCmd::VectorData { g, d, n } => ("nl vector-data".into(), nl_vector(g, d, n)),
    }
}

fn nl_components_cmd(g: u64, locus: Locus, witnesses: bool, bound: Option<u64>, strategy: Strategy) -> Outcome {
    let report = nl_components(g, locus, ComponentOptions { witnesses, bound, strategy })?;
    let components: Vec<Value> = report
        .components
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("label".into(), json!(c.label));
            o.insert("div".into(), big(&c.divisibility));
            o.insert("class".into(), bigs(&c.dual_class.0));
            o.insert("q".into(), rat(&c.q));
            if witnesses {
                o.insert("witness".into(), c.witness.as_ref().map_or(Value::Null, |w| bigs(&w.0)));
                o.insert("witness_k3".into(), c.witness_ambient.as_ref().map_or(Value::Null, |w| bigs(&w.0)));
            }
            Value::Object(o)
        })
        .collect();
    record(
        "nl components",
        json!({"g": g, "locus": locus, "witnesses": witnesses, "bound": bound}),
        json!({"g": g, "locus": locus, "count": report.count(), "components": components}),
    )
}

fn nl_triangular(g: i64, d: i64, n: i64, variant: MuVariant) -> Outcome {
    let key = NLKey::new(g, d, n)?;
    let terms = triangular_decomposition(&key, variant)?;
    record(
        "nl triangular",
        json!({"g": g, "d": d, "n": n, "variant": variant}),
        json!({
            "delta": big(&BigInt::from(delta(&key))),
            "terms": terms,
        }),
    )
}

fn nl_vector(g: i64, d: i64, n: i64) -> Outcome {
    let key = NLKey::new(g, d, n)?;
    let v = nl_vector_data(&key)?;
    record(
        "nl vector-data",
        json!({"g": g, "d": d, "n": n}),
        json!({
            "half_norm": v.half_norm.to_string(),
            "vector_norm": format!("{}", v.half_norm * 2),
            "disc_class": v.disc_class,
            "modulus": 2 * g - 2,
            "multiplicity_two": v.multiplicity_two,
        }),
    )
}

fn enumerative(cmd: EnumCmd) -> (String, Outcome) {
    match cmd {
        EnumCmd::Net { alpha2, alphac1, c1sq, c2, degree } => {
            ("enum net".into(), enum_net(SurfaceChernData { alpha2, alpha_c1: alphac1, c1sq, c2 }, degree))
        }
        EnumCmd::Unigonal { table } => ("enum unigonal".into(), enum_unigonal(table.as_deref())),
    }
}

fn enum_net(data: SurfaceChernData, degree: i64) -> Outcome {
    let (g, d, e) = net_invariants(&data)?;
    let (a2, a11) = net_counts(&data, degree)?;
    record(
        "enum net",
        json!({"alpha2": data.alpha2, "alphac1": data.alpha_c1, "c1sq": data.c1sq, "c2": data.c2, "degree": degree}),
        json!({"g": big(&g), "d": big(&d), "e": big(&e), "a2": big(&a2), "a11": big(&a11)}),
    )
}

fn enum_unigonal(path: Option<&Path>) -> Outcome {
    let table = match path {
        Some(p) => UnigonalTable::parse(&read(p)?)?,
        None => UnigonalTable::shipped(),
    };
    let (a2, a11) = unigonal_counts(&table)?;
    let dp = unigonal_double_point(&table)?;
    record(
        "enum unigonal",
        json!({"table": path.map(|p| p.display().to_string())}),
        json!({
            "a2": big(&a2),
            "double_point_degree": big(&dp),
            "a11": big(&a11),
            "delta_consistent": table.delta_defect(&BaseClasses::default()).is_zero(),
        }),
    )
}

fn coefficient_rows(s: &GenusTwoSeries, indices: &[GenusTwoIndex]) -> std::result::Result<Vec<Value>, Failure> {
    let row = |i: &GenusTwoIndex, v: &BigRational| json!({"k": i.k, "l": i.l, "m": i.m, "value": rat(v)});
    if indices.is_empty() {
        return Ok(s.iter().map(|(i, v)| row(i, v)).collect());
    }
    indices
        .iter()
        .map(|i| {
            if !s.truncation().contains(i) {
                return Err(Failure(format!("index {i} is outside the truncation")));
            }
            Ok(row(i, &s.coeff(i)))
        })
        .collect()
}

fn series_result(s: &GenusTwoSeries, indices: &[GenusTwoIndex]) -> std::result::Result<Value, Failure> {
    let t = s.truncation();
    Ok(json!({
        "trunc_k": t.k_max,
        "trunc_m": t.m_max,
        "trunc_l": t.l_max,
        "coefficients": coefficient_rows(s, indices)?,
    }))
}

fn index_strings(indices: &[GenusTwoIndex]) -> Value {
    json!(indices.iter().map(|i| format!("{},{},{}", i.k, i.l, i.m)).collect::<Vec<_>>())
}

fn parse_fit(a: &str, b: &str) -> std::result::Result<ThetaFit, Failure> {
    Ok(ThetaFit::new(parse_rational(a)?, parse_rational(b)?))
}

fn siegel(cmd: SiegelCmd, strategy: Strategy) -> (String, Outcome) {
    match cmd {
        SiegelCmd::Chi10 { trunc_k, trunc_m, indices, table } => {
            let run = || -> Outcome {
                let t = match &table {
                    Some(p) => HalfIntegralTable::parse(&read(p)?)?,
                    None => HalfIntegralTable::shipped(),
                };
                let s = chi10(&t, trunc_k, trunc_m, strategy)?;
                record(
                    "siegel chi10",
                    json!({"trunc_k": trunc_k, "trunc_m": trunc_m, "index": index_strings(&indices),
                           "table": table.as_ref().map(|p| p.display().to_string())}),
                    series_result(&s, &indices)?,
                )
            };
            ("siegel chi10".into(), run())
        }
        SiegelCmd::E4e6 { trunc_k, trunc_m, indices, e4, e6 } => {
            let run = || -> Outcome {
                let load = |p: &Option<PathBuf>, shipped: fn() -> CoeffTable| -> std::result::Result<CoeffTable, Failure> {
                    match p {
                        Some(p) => Ok(CoeffTable::parse(&read(p)?)?),
                        None => Ok(shipped()),
                    }
                };
                let s = e4e6_with(&load(&e4, CoeffTable::e4)?, &load(&e6, CoeffTable::e6)?, trunc_k, trunc_m, strategy)?;
                record(
                    "siegel e4e6",
                    json!({"trunc_k": trunc_k, "trunc_m": trunc_m, "index": index_strings(&indices),
                           "e4": e4.as_ref().map(|p| p.display().to_string()),
                           "e6": e6.as_ref().map(|p| p.display().to_string())}),
                    series_result(&s, &indices)?,
                )
            };
            ("siegel e4e6".into(), run())
        }
        SiegelCmd::Fit { observations } => ("siegel fit".into(), siegel_fit(&observations, strategy)),
        SiegelCmd::Predict { a, b, which } => {
            let run = || -> Outcome {
                let fit = parse_fit(&a, &b)?;
                let v = predict_nl(&fit, which, strategy)?;
                let i = which.index();
                record(
                    "siegel predict",
                    json!({"a": a, "b": b, "which": which}),
                    json!({"which": which, "index": format!("{},{},{}", i.k, i.l, i.m), "value": rat(&v)}),
                )
            };
            ("siegel predict".into(), run())
        }
        SiegelCmd::Independence { a, b } => {
            let run = || -> Outcome {
                let fit = parse_fit(&a, &b)?;
                let independent = independence_check(&fit, strategy)?;
                let (h2, h11) = net_counts(&SurfaceChernData::ANTICANONICAL_DOUBLE, 4)?;
                let cusp = theta_coeff(&fit, NlQuantity::Cuspidal.index(), strategy)?;
                let bin = theta_coeff(&fit, NlQuantity::Binodal.index(), strategy)?;
                record(
                    "siegel independence",
                    json!({"a": a, "b": b}),
                    json!({
                        "independent": independent,
                        "nl_vector": [rat(&cusp), rat(&bin)],
                        "hyperelliptic": [big(&h2), big(&h11)],
                    }),
                )
            };
            ("siegel independence".into(), run())
        }
    }
}

fn siegel_fit(observations: &[String], strategy: Strategy) -> Outcome {
    let obs = observations
        .iter()
        .map(|s| {
            let (i, v) = s.split_once('=').ok_or_else(|| Failure(format!("bad observation `{s}`, expected k,l,m=value")))?;
            let idx: GenusTwoIndex = i.parse().map_err(Failure)?;
            Ok((idx, parse_rational(v)?))
        })
        .collect::<std::result::Result<Vec<_>, Failure>>()?;
    let fit = fit_weight10(&obs, strategy)?;
    record(
        "siegel fit",
        json!({"obs": observations}),
        json!({"a": rat(&fit.a), "b": rat(&fit.b), "integral": fit.is_integral()}),
    )
}

fn verify(args: VerifyArgs, strategy: Strategy, format: Format) -> Outcome {
    let report = match args.criterion {
        Some(id) => {
            let c = run_criterion(id, strategy).ok_or_else(|| Failure(format!("no criterion {id}")))?;
            VerifyReport { passed: c.passed, criteria: vec![c] }
        }
        None => run_all(strategy),
    };
    let result = match format {
        Format::Json => serde_json::to_value(&report).map_err(|e| Failure(e.to_string()))?,
        Format::Tsv => {
            let rows: Vec<Value> = report
                .criteria
                .iter()
                .flat_map(|c| {
                    c.checks.iter().map(move |k| {
                        json!({"criterion": c.id, "check": k.name, "expected": k.expected, "actual": k.actual,
                               "status": if k.passed { "PASS" } else { "FAIL" }})
                    })
                })
                .collect();
            json!({"passed": report.passed, "checks": rows})
        }
    };
    Ok(Record {
        command: "verify".into(),
        inputs: json!({"all": args.criterion.is_none(), "criterion": args.criterion}),
        result,
        code: if report.passed { EXIT_OK } else { EXIT_MISMATCH },
    })
}
