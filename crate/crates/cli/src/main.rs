//! `agq`: construct, verify, scan and reproduce Hermitian self-orthogonal codes.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agq_core::catalog::{self, CatalogEntry, ReproStatus, ScanSpec, TableId, Verdict};
use agq_core::codes::{self, Budget, CodeError};
use agq_core::constructions::{
    self, ConstructionError, ConstructionId, ConstructionRequest, EmbedPolicy, HermitianCase,
};
use agq_core::field::FieldTower;
use anyhow::{anyhow, Context};
use clap::{ArgGroup, Args, Parser, Subcommand};

const EXIT_REJECTED: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_PARSE: u8 = 4;

#[derive(Parser)]
#[command(name = "agq", version, about = "Hermitian self-orthogonal codes over GF(q²) and their quantum codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one code and certify it.
    Construct(ConstructArgs),
    /// Certify a generator matrix read from a file.
    Verify(VerifyArgs),
    /// Sweep a parameter grid and print a catalog.
    Scan(ScanArgs),
    /// Rerun the pinned recipes for a reproduction table.
    Reproduce {
        /// mds1 or mixed
        table: TableId,
    },
    /// Rewrite a matrix file in canonical form.
    Export(ExportArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("construction").required(true).args([
    "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10", "id",
])))]
struct ConstructArgs {
    #[arg(long)]
    c1: bool,
    #[arg(long)]
    c2: bool,
    #[arg(long)]
    c3: bool,
    #[arg(long)]
    c4: bool,
    #[arg(long)]
    c5: bool,
    #[arg(long)]
    c6: bool,
    /// Hermitian curve; pick the x-support with --case.
    #[arg(long)]
    c7: bool,
    #[arg(long)]
    c8: bool,
    #[arg(long)]
    c9: bool,
    #[arg(long)]
    c10: bool,
    /// Construction by name, e.g. C7-ii.
    #[arg(long)]
    id: Option<ConstructionId>,
    /// x-support for the Hermitian curve: i, ii or iii.
    #[arg(long, default_value = "i")]
    case: String,
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Target dimension for curve codes.
    #[arg(long)]
    dim: Option<u32>,
    /// Elliptic constant, as a field token.
    #[arg(long)]
    c: Option<String>,
    #[arg(long, default_value = "none")]
    embed: EmbedPolicy,
    /// Write the generator of the last certified code here.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ConstructArgs {
    fn id(&self) -> anyhow::Result<ConstructionId> {
        if let Some(id) = self.id {
            return Ok(id);
        }
        let case = match self.case.as_str() {
            "i" => HermitianCase::RootsOfUnity,
            "ii" => HermitianCase::CosetUnion,
            "iii" => HermitianCase::AffineGrid,
            other => return Err(anyhow!("unknown Hermitian case `{other}`")),
        };
        let flags = [
            (self.c1, ConstructionId::C1),
            (self.c2, ConstructionId::C2),
            (self.c3, ConstructionId::C3),
            (self.c4, ConstructionId::C4),
            (self.c5, ConstructionId::C5),
            (self.c6, ConstructionId::C6),
            (self.c7, ConstructionId::C7(case)),
            (self.c8, ConstructionId::C8),
            (self.c9, ConstructionId::C9),
            (self.c10, ConstructionId::C10),
        ];
        flags
            .into_iter()
            .find_map(|(set, id)| set.then_some(id))
            .ok_or_else(|| anyhow!("no construction selected"))
    }
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Rows omit the leading identity block.
    #[arg(long)]
    systematic_prefix: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Comma-separated construction names, e.g. C1,C5.
    #[arg(long, value_delimiter = ',', required = true)]
    ids: Vec<ConstructionId>,
    /// Comma-separated fields as p^m, e.g. 5^1,2^2.
    #[arg(long, value_delimiter = ',', required = true)]
    fields: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u32>>,
    #[arg(long, default_value = "none")]
    embed: EmbedPolicy,
    /// Write the catalog here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    file: PathBuf,
    #[arg(long)]
    systematic_prefix: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn print_json<T: serde::Serialize>(out: &mut impl Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn construct(args: ConstructArgs, budget: &Budget) -> anyhow::Result<u8> {
    let id = args.id()?;
    let f = FieldTower::new(args.p, args.m)?;
    let c = args.c.as_deref().map(|tok| f.parse_element(tok)).transpose()?;
    let request = ConstructionRequest {
        n: args.n,
        t: args.t,
        k: args.k,
        dim: args.dim,
        c,
        embed: args.embed,
        ..ConstructionRequest::new(id, args.p, args.m)
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let started = std::time::Instant::now();
    let outcome = match constructions::construct(&f, &request, budget) {
        Ok(outcome) => outcome,
        Err(e) => {
            let code = exit_for(&e);
            let entry = if code == EXIT_BUDGET {
                CatalogEntry::skipped(Some(request), e.to_string())
            } else {
                CatalogEntry::rejected(Some(request), e.to_string())
            };
            print_json(&mut out, &entry)?;
            eprintln!("agq: {e}");
            return Ok(code);
        }
    };
    for code in &outcome.chain {
        print_json(&mut out, &catalog::entry_for(&f, code, budget, started))?;
    }
    if let Some(stop) = &outcome.stopped {
        eprintln!("agq: embedding chain stopped: {stop}");
    }
    if let Some(path) = args.out {
        let text = codes::format_matrix(&f, outcome.last().generator());
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn exit_for(e: &ConstructionError) -> u8 {
    if e.is_budget() {
        EXIT_BUDGET
    } else if e.is_rejection() {
        EXIT_REJECTED
    } else {
        EXIT_PARSE
    }
}

fn read_matrix(path: &Path, systematic_prefix: bool) -> Result<(FieldTower, codes::Matrix), (u8, String)> {
    let text = fs::read_to_string(path).map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let (header, _) = codes::MatrixFile::read_header(&text).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let f = FieldTower::new(header.p, header.m()).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let (_, g) = codes::parse_matrix(&f, &text, systematic_prefix).map_err(|e| match e {
        CodeError::Parse { .. } => (EXIT_PARSE, format!("{}: {e}", path.display())),
        other => (EXIT_PARSE, other.to_string()),
    })?;
    Ok((f, g))
}

fn verify(args: VerifyArgs, budget: &Budget) -> anyhow::Result<u8> {
    let (f, g) = match read_matrix(&args.file, args.systematic_prefix) {
        Ok(x) => x,
        Err((code, msg)) => {
            eprintln!("agq: {msg}");
            return Ok(code);
        }
    };
    let entry = catalog::verify_matrix(&f, &g, Some(args.file.display().to_string()), budget);
    print_json(&mut io::stdout().lock(), &entry)?;
    Ok(match entry.verdict {
        Verdict::Certified => 0,
        Verdict::Rejected { .. } => EXIT_REJECTED,
        Verdict::Skipped { .. } => EXIT_BUDGET,
    })
}

fn parse_field(s: &str) -> anyhow::Result<(u32, u32)> {
    let (p, m) = s.split_once('^').unwrap_or((s, "1"));
    Ok((p.trim().parse()?, m.trim().parse()?))
}

fn scan(args: ScanArgs, budget: &Budget) -> anyhow::Result<u8> {
    let fields = args
        .fields
        .iter()
        .map(|s| parse_field(s).with_context(|| format!("bad field `{s}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let spec = ScanSpec {
        ids: args.ids,
        fields,
        n: args.n,
        t: args.t,
        k: args.k,
        embed: args.embed,
    };
    let report = catalog::scan(&spec, budget);
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    for check in &report.assumption1 {
        print_json(&mut sink, &serde_json::json!({ "assumption1": check }))?;
    }
    for entry in &report.entries {
        print_json(&mut sink, entry)?;
    }
    sink.flush()?;
    eprintln!(
        "agq: {} certified, {} rejected, {} skipped",
        report.entries.len(),
        report.rejected,
        report.skipped
    );
    Ok(0)
}

fn reproduce(table: TableId, budget: &Budget) -> anyhow::Result<u8> {
    let rows = catalog::reproduce(table, budget);
    let mut out = io::stdout().lock();
    let mut counts = [0usize; 3];
    for row in &rows {
        counts[match row.result {
            ReproStatus::Match => 0,
            ReproStatus::Unmatched { .. } => 1,
            ReproStatus::Skipped { .. } => 2,
        }] += 1;
        print_json(&mut out, row)?;
    }
    print_json(
        &mut out,
        &serde_json::json!({ "summary": { "match": counts[0], "unmatched": counts[1], "skipped": counts[2] } }),
    )?;
    Ok(0)
}

fn export(args: ExportArgs) -> anyhow::Result<u8> {
    let (f, g) = match read_matrix(&args.file, args.systematic_prefix) {
        Ok(x) => x,
        Err((code, msg)) => {
            eprintln!("agq: {msg}");
            return Ok(code);
        }
    };
    let text = codes::format_matrix(&f, &g);
    match args.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    let budget = Budget::from_env();
    let result = match cli.command {
        Command::Construct(args) => construct(args, &budget),
        Command::Verify(args) => verify(args, &budget),
        Command::Scan(args) => scan(args, &budget),
        Command::Reproduce { table } => reproduce(table, &budget),
        Command::Export(args) => export(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("agq: {e:#}");
            ExitCode::from(EXIT_PARSE)
        }
    }
}
