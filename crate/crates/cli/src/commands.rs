use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use potb_core::arrays::{hadamard, oa_from_hadamard, oa_rao, q_augment, verify_strength2, StrengthViolation};
use potb_core::constructions::{canonicalize, catalog, construct, entry, Params, RecipeId};
use potb_core::gf::{cyclotomy_formula, cyclotomy_numbers, Field};
use potb_core::golden::{errata_diff, parse_table, table, Table};
use potb_core::plan::Plan;
use potb_core::verify::{full_report, Claim};
use serde::Serialize;

use crate::document::PlanDocument;
use crate::error::{exit, CliError};
use crate::render;
use crate::report::{ConstructionCheck, ErrataEntry, ReportDocument};

#[derive(Debug, Parser)]
#[command(name = "potb", version, about = "Generate and verify blocked main-effect plans orthogonal through the blocks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List recipes, their parameter constraints, presets and claims.
    Catalog {
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Build a plan from a recipe.
    Gen(GenArgs),
    /// Check a plan document against its claims.
    Verify(VerifyArgs),
    /// Independent checks exposed for cross-examination.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub s: Option<i64>,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub b: Option<i64>,
    #[arg(long)]
    pub c: Option<i64>,
    #[arg(long)]
    pub d: Option<i64>,
    #[arg(long)]
    pub delta: Option<i64>,
    #[arg(long)]
    pub h: Option<i64>,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub m: Option<i64>,
    /// Output path; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Which part of a multi-part recipe to write (0-based).
    #[arg(long, default_value_t = 0)]
    pub part: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    /// Claims to check instead of the document's own (repeatable).
    #[arg(long = "claim")]
    pub claims: Vec<String>,
    /// Where to write the JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// A block table to diff against: a file, or a recipe id with a
    /// built-in transcription.
    #[arg(long)]
    pub golden: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Oracle {
    /// Brute-force order-2 cyclotomy numbers next to the closed form.
    Cyclotomy {
        #[arg(long)]
        q: u64,
    },
    /// Check that an array document has strength 2.
    OaCheck { input: PathBuf },
    /// Recount the incidence matrices of a plan document.
    Recount {
        input: PathBuf,
        /// Only this factor pair, as `i,j`.
        #[arg(long)]
        pair: Option<String>,
    },
    /// Write an array document from a Hadamard matrix or Rao's construction.
    OaGen {
        /// Order of the Hadamard matrix.
        #[arg(long, conflicts_with = "rao")]
        hadamard: Option<usize>,
        /// `s,n` for OA(s^n, (s^n-1)/(s-1), s, 2).
        #[arg(long)]
        rao: Option<String>,
        /// Prepend the zero column (the augmented form).
        #[arg(long)]
        augment: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Catalog { id, json } => cmd_catalog(id.as_deref(), json, out),
        Command::Gen(args) => cmd_gen(&args, out),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Oracle(o) => cmd_oracle(o, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn write_or_emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => emit(out, text),
    }
}

pub fn read_document(path: &Path) -> Result<PlanDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    PlanDocument::from_json(&text)
}

#[derive(Serialize)]
struct CatalogJson {
    id: String,
    params: Vec<String>,
    constraints: String,
    claims: String,
    summary: String,
    presets: Vec<PresetJson>,
}

#[derive(Serialize)]
struct PresetJson {
    params: BTreeMap<String, i64>,
    claims: Vec<String>,
}

fn cmd_catalog(id: Option<&str>, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let entries = match id {
        Some(id) => vec![entry(id.parse::<RecipeId>()?)],
        None => catalog(),
    };
    if json {
        let items: Vec<CatalogJson> = entries
            .iter()
            .map(|e| CatalogJson {
                id: e.id.to_string(),
                params: e.params.iter().map(ToString::to_string).collect(),
                constraints: e.constraints.into(),
                claims: e.claims.into(),
                summary: e.summary.into(),
                presets: e
                    .presets
                    .iter()
                    .map(|p| PresetJson {
                        params: p.params.iter().map(|(k, v)| (k.to_string(), v)).collect(),
                        claims: p.claims.iter().map(ToString::to_string).collect(),
                    })
                    .collect(),
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&items).expect("catalog serializes");
        text.push('\n');
        emit(out, &text)?;
        return Ok(exit::PASS);
    }
    let mut text = String::new();
    for e in &entries {
        text.push_str(&format!("{}\n", e.id));
        text.push_str(&format!("  summary:     {}\n", e.summary));
        let params = if e.params.is_empty() { "none".to_string() } else { e.params.join(", ") };
        text.push_str(&format!("  params:      {params}\n"));
        text.push_str(&format!("  constraints: {}\n", e.constraints));
        text.push_str(&format!("  claims:      {}\n", e.claims));
        for p in &e.presets {
            let params = if p.params.is_empty() { "(defaults)".to_string() } else { p.params.to_string() };
            let extra: Vec<String> = p.claims.iter().map(ToString::to_string).collect();
            if extra.is_empty() {
                text.push_str(&format!("  preset:      {params}\n"));
            } else {
                text.push_str(&format!("  preset:      {params}  +{}\n", extra.join(", ")));
            }
        }
    }
    emit(out, &text)?;
    Ok(exit::PASS)
}

impl GenArgs {
    pub fn params(&self) -> Params {
        let mut p = Params::new();
        let flags = [
            ("s", self.s),
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("delta", self.delta),
            ("h", self.h),
            ("n", self.n),
            ("m", self.m),
        ];
        for (name, v) in flags {
            if let Some(v) = v {
                p.set(name, v);
            }
        }
        p
    }
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let id: RecipeId = args.id.parse()?;
    let result = construct(id, &args.params())?;
    let count = result.parts.len();
    let part = result.parts.get(args.part).ok_or_else(|| {
        CliError::new(exit::CONSTRAINT, format!("{id} has {count} part(s); --part {} is out of range", args.part))
    })?;
    if count > 1 {
        eprintln!("{id} has {count} parts; writing part {}", args.part);
    }
    let mut plan = part.plan.clone();
    if count > 1 {
        plan = plan.clone().with_provenance(format!("{} part {}", plan.provenance(), args.part));
    }
    let text = match args.format {
        Format::Json => PlanDocument::from_plan(&plan, Some((id, &result.params)), &part.claims).to_json(),
        Format::Table => render::table(&plan),
        Format::Csv => render::csv(&plan).map_err(|e| CliError::parse(format!("csv: {e}")))?,
    };
    write_or_emit(args.output.as_deref(), &text, out)?;
    Ok(exit::PASS)
}

fn load_golden(source: &str) -> Result<Table, CliError> {
    let path = Path::new(source);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return parse_table(&text).map_err(CliError::parse);
    }
    let id: RecipeId = source
        .parse()
        .map_err(|_| CliError::parse(format!("{source}: no such file and not a recipe id")))?;
    table(id).ok_or_else(|| CliError::parse(format!("no built-in table for {id}")))
}

fn construction_check(doc: &PlanDocument, plan: &Plan) -> Option<ConstructionCheck> {
    let c = doc.construction.as_ref()?;
    let rebuilt = c.id.parse::<RecipeId>().and_then(|id| {
        let mut params = Params::new();
        for (k, v) in &c.params {
            params.set(k, *v);
        }
        construct(id, &params)
    });
    Some(match rebuilt {
        Ok(r) => {
            let target = canonicalize(plan);
            let reproduces = r.parts.iter().any(|p| {
                let mut q = canonicalize(&p.plan);
                q = q.rename_factors(plan.factors().iter().map(|f| f.name.clone())).unwrap_or(q);
                q.with_provenance(String::new()) == target.clone().with_provenance(String::new())
            });
            ConstructionCheck { id: c.id.clone(), reproduces, error: None }
        }
        Err(e) => ConstructionCheck { id: c.id.clone(), reproduces: false, error: Some(e.to_string()) },
    })
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let doc = read_document(&args.input)?;
    let plan = doc.to_plan()?;
    let claims: Vec<Claim> = if args.claims.is_empty() {
        doc.parsed_claims()?
    } else {
        args.claims.iter().map(|c| c.parse::<Claim>().map_err(CliError::parse)).collect::<Result<_, _>>()?
    };
    let golden = args.golden.as_deref().map(load_golden).transpose()?;
    let report = full_report(&plan, &claims);
    let mut document = ReportDocument::new(&plan, &report);
    document.construction = construction_check(&doc, &plan);
    let errata = match &golden {
        Some(t) => Some(errata_diff(t, &plan).map_err(CliError::parse)?),
        None => None,
    };
    document.errata = errata.as_ref().map(ErrataEntry::from);

    let mut text = String::new();
    let name = if doc.name.is_empty() { args.input.display().to_string() } else { doc.name.clone() };
    text.push_str(&format!("plan {name}: {} blocks of size {}, {} factors\n", plan.num_blocks(), plan.block_size(), plan.num_factors()));
    let classes: Vec<String> = report
        .classes
        .iter()
        .map(|c| c.iter().map(|&i| plan.factors()[i].name.as_str()).collect::<Vec<_>>().join(","))
        .collect();
    text.push_str(&format!("classes: {{{}}}\n", classes.join("} {")));
    for c in &report.claims {
        text.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.claim, c.detail));
    }
    if let Some(c) = &document.construction {
        text.push_str(&format!("construction {}: {}\n", c.id, if c.reproduces { "reproduces" } else { "does not reproduce" }));
    }
    if let Some(e) = &errata {
        text.push_str(&format!("errata:\n{e}\n"));
    }
    emit(out, &text)?;
    if let Some(path) = &args.report {
        fs::write(path, document.to_json()).map_err(|e| CliError::io(path, e))?;
    }
    Ok(if report.all_claims_pass() { exit::PASS } else { exit::CLAIM_FAILURE })
}

fn cmd_oracle(o: Oracle, out: &mut dyn Write) -> Result<u8, CliError> {
    match o {
        Oracle::Cyclotomy { q } => {
            let field = Field::new(q)?;
            let brute = cyclotomy_numbers(&field)?;
            let t = (q - 1) / 2;
            let formula = cyclotomy_formula(t);
            let mut text = format!("q = {q}, t = {t}\n(i,j)  brute  formula\n");
            for i in 0..2 {
                for j in 0..2 {
                    text.push_str(&format!("({i},{j})  {:>5}  {:>7}\n", brute.get(i, j), formula.get(i, j)));
                }
            }
            let agree = brute == formula;
            text.push_str(&format!("agree: {}\n", if agree { "yes" } else { "no" }));
            emit(out, &text)?;
            Ok(if agree { exit::PASS } else { exit::CLAIM_FAILURE })
        }
        Oracle::OaCheck { input } => {
            let oa = read_document(&input)?.to_array()?;
            let check = verify_strength2(&oa);
            let shape = format!(
                "OA({}, {}, {}, 2){}",
                oa.n_runs(),
                oa.n_factors(),
                oa.symbols(),
                if oa.is_augmented() { " augmented" } else { "" }
            );
            let text = match &check.violation {
                None => format!("{shape}: strength 2 holds\n"),
                Some(StrengthViolation::ZeroColumn { run }) => format!("{shape}: run {run} is nonzero in the zero column\n"),
                Some(StrengthViolation::PairCounts { cols, counts, expected }) => format!(
                    "{shape}: columns {} and {} have pair counts {counts:?}, expected {}\n",
                    cols.0,
                    cols.1,
                    expected.map_or("a multiple of s^2 runs".to_string(), |e| e.to_string())
                ),
            };
            emit(out, &text)?;
            Ok(if check.holds { exit::PASS } else { exit::CLAIM_FAILURE })
        }
        Oracle::Recount { input, pair } => {
            let plan = read_document(&input)?.to_plan()?;
            let m = plan.num_factors();
            let pairs: Vec<(usize, usize)> = match pair {
                Some(p) => {
                    let ij: Vec<usize> = p
                        .split(',')
                        .map(|x| x.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| CliError::parse(format!("invalid pair {p:?}")))?;
                    match ij[..] {
                        [i, j] if i < m && j < m => vec![(i, j)],
                        _ => return Err(CliError::parse(format!("invalid pair {p:?} for {m} factors"))),
                    }
                }
                None => (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect(),
            };
            let rc = render::recount(&plan);
            let inc = plan.incidence();
            let labels = |i: usize| -> Vec<String> { plan.factors()[i].levels().iter().map(ToString::to_string).collect() };
            let mut text = String::new();
            let mut agree = true;
            for &(i, j) in &pairs {
                let n = &rc.n[&(i, j)];
                agree &= n == inc.n(i, j);
                let (a, b) = (&plan.factors()[i].name, &plan.factors()[j].name);
                text.push_str(&format!("N({a},{b})\n{}\n", render::labelled(n, &labels(i), &labels(j))));
            }
            let mut singles: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
            singles.sort_unstable();
            singles.dedup();
            for i in singles {
                agree &= &rc.l[i] == inc.l(i);
                let llt = rc.l[i].mul(&rc.l[i].transpose());
                text.push_str(&format!("L({}) L({})'\n{}\n", plan.factors()[i].name, plan.factors()[i].name, render::labelled(&llt, &labels(i), &labels(i))));
            }
            text.push_str(&format!("agrees with library incidence: {}\n", if agree { "yes" } else { "no" }));
            emit(out, &text)?;
            Ok(if agree { exit::PASS } else { exit::CLAIM_FAILURE })
        }
        Oracle::OaGen { hadamard: h, rao, augment, output } => {
            let (name, oa) = match (h, rao) {
                (Some(n), None) => (format!("hadamard({n})"), oa_from_hadamard(&hadamard(n)?)?),
                (None, Some(sn)) => {
                    let v: Vec<u32> = sn
                        .split(',')
                        .map(|x| x.trim().parse::<u32>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| CliError::parse(format!("invalid --rao {sn:?}")))?;
                    match v[..] {
                        [s, n] => (format!("rao({s},{n})"), oa_rao(s, n)?),
                        _ => return Err(CliError::parse(format!("invalid --rao {sn:?}, expected s,n"))),
                    }
                }
                _ => return Err(CliError::new(exit::CONSTRAINT, "give exactly one of --hadamard or --rao")),
            };
            let (name, oa) = if augment {
                let aug = if oa.n_factors() < 2 { oa.with_zero_column() } else { q_augment(&oa)? };
                (format!("{name}, augmented"), aug)
            } else {
                (name, oa)
            };
            write_or_emit(output.as_deref(), &PlanDocument::from_array(name, &oa).to_json(), out)?;
            Ok(exit::PASS)
        }
    }
}
