use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cogsheaf::bhcat::{build_bh_category, check_category_laws, BhError};
use cogsheaf::cog::{validate_cog, validate_morphism_to_group};
use cogsheaf::develop::{audit_certificate, develop, DevelopError};
use cogsheaf::exactlin::Field;
use cogsheaf::format::{
    bh_category_file, certificate_file, dev_report_file, sheaf_file_inline, to_json, Bundle, Document, FormatError, Loader,
};
use cogsheaf::groups::validate_hom;
use cogsheaf::report::ValidationReport;
use cogsheaf::scwol::{validate_scwol, ScwolError};
use cogsheaf::sheaf::{check_dev_properties, sheaf_from_morphism, validate_sheaf, Sheaf, SheafError};

#[derive(Parser)]
#[command(name = "cogsheaf", version, about = "Sheaves over complexes of groups and developability certificates")]
struct Cli {
    /// Field for matrix entries, `Q` or `Fp:p`; overrides the field named in files.
    #[arg(long, global = true)]
    field: Option<Field>,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// Where to write the command's output document.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable validator on each file.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Build a developability certificate from a bundle with a sheaf.
    Develop { bundle: PathBuf },
    /// Build the regular-representation sheaf of a bundle's morphism.
    SheafFromMorphism { bundle: PathBuf },
    /// Dump the B.H. category of a complex or bundle.
    BhCat {
        path: PathBuf,
        /// Include the full composition table.
        #[arg(long)]
        table: bool,
    },
    /// Report the dev properties of a sheaf or bundle.
    DevCheck { path: PathBuf },
    /// Write the built-in fixture bundles to `--out`.
    Fixtures,
}

enum Failure {
    Semantic(String),
    Input(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Semantic { .. } => Failure::Semantic(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<DevelopError> for Failure {
    fn from(e: DevelopError) -> Self {
        match e {
            DevelopError::InvalidInput(_) => Failure::Semantic(e.to_string()),
            DevelopError::Scwol(ScwolError::DisconnectedScwol(o)) => {
                Failure::Input(format!("DisconnectedScwol: {o} is unreachable from object 0"))
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<SheafError> for Failure {
    fn from(e: SheafError) -> Self {
        match e {
            SheafError::InvalidMorphism(_) | SheafError::InvalidSheaf(_) => Failure::Semantic(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<BhError> for Failure {
    fn from(e: BhError) -> Self {
        match e {
            BhError::InvalidComplex(_) => Failure::Semantic(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Ctx {
    loader: Loader,
    field: Option<Field>,
    report: ReportFormat,
    out: Option<PathBuf>,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<Document, Failure> {
        Ok(self.loader.load_path(path)?)
    }

    fn bundle(&mut self, path: &Path) -> Result<Bundle, Failure> {
        match self.load(path)? {
            Document::Bundle(b) => Ok(b),
            d => Err(Failure::Input(format!("{}: expected a bundle, found {}", path.display(), d.kind()))),
        }
    }

    fn write_out(&self, text: &str) -> Result<(), Failure> {
        if let Some(out) = &self.out {
            fs::write(out, text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
        }
        Ok(())
    }

    fn emit<T: Serialize>(&self, json: &T, text: impl FnOnce() -> String) {
        match self.report {
            ReportFormat::Json => print!("{}", to_json(json)),
            ReportFormat::Text => println!("{}", text()),
        }
    }
}

fn validate_document(doc: &Document) -> Vec<ValidationReport> {
    match doc {
        Document::Group(g) => {
            let mut r = ValidationReport::new(format!("group {}", g.name()));
            r.count("table", g.order() * g.order());
            vec![r]
        }
        Document::Hom(h) => vec![validate_hom(h, false)],
        Document::Scwol(s) | Document::CellComplex(_, s) => vec![validate_scwol(s)],
        Document::Complex(c) => vec![validate_cog(c)],
        Document::Morphism(m) => vec![validate_cog(m.source()), validate_morphism_to_group(m, false)],
        Document::Sheaf(f) => vec![validate_cog(f.complex()), validate_sheaf(f)],
        Document::Bundle(b) => {
            let mut rs = vec![validate_cog(&b.complex)];
            rs.extend(b.sheaf.iter().map(validate_sheaf));
            rs.extend(b.morphism.iter().map(|m| validate_morphism_to_group(m, false)));
            rs
        }
        Document::Certificate(c) => {
            let mut r = ValidationReport::new("certificate");
            for e in &c.transcript {
                r.count(&e.family, e.instances);
                if !e.passed {
                    r.push(&e.family, e.first_counterexample.clone().unwrap_or_default(), format!("{} failure(s)", e.failures));
                }
            }
            vec![r]
        }
        Document::DevReport(_) | Document::BhCategory(_) => Vec::new(),
    }
}

fn cmd_validate(ctx: &mut Ctx, paths: &[PathBuf]) -> Result<bool, Failure> {
    let mut all = true;
    let mut results = Vec::new();
    let mut text = Vec::new();
    for path in paths {
        let (kind, reports) = match ctx.loader.load_path(path) {
            Ok(doc) => (doc.kind(), validate_document(&doc)),
            Err(FormatError::Semantic { report, .. }) => ("group", vec![report]),
            Err(e) => return Err(e.into()),
        };
        let passed = reports.iter().all(ValidationReport::passed);
        all &= passed;
        text.push(format!("{} {} ({kind})", if passed { "PASS" } else { "FAIL" }, path.display()));
        for r in reports.iter().filter(|r| !r.passed()) {
            text.push(format!("  {}", r.to_string().replace('\n', "\n  ")));
        }
        results.push(json!({ "path": path.display().to_string(), "kind": kind, "passed": passed, "reports": reports }));
    }
    let doc = json!({ "passed": all, "files": results });
    ctx.write_out(&to_json(&doc))?;
    ctx.emit(&doc, || text.join("\n"));
    Ok(all)
}

fn sheaf_field(ctx: &Ctx, f: &Sheaf) -> Field {
    ctx.field.unwrap_or(f.field())
}

fn cmd_develop(ctx: &mut Ctx, path: &Path) -> Result<bool, Failure> {
    let b = ctx.bundle(path)?;
    let Some(f) = b.sheaf else {
        return Err(Failure::Input(format!("{}: bundle has no sheaf", path.display())));
    };
    let cert = develop(&b.complex, &f)?;
    let file = certificate_file(&cert, sheaf_field(ctx, &f));
    ctx.write_out(&to_json(&file))?;
    ctx.emit(&file, || {
        let mut lines = vec![format!("verdict: {}", cert.verdict)];
        if let Some(reason) = &cert.reason {
            lines.push(format!("reason: {reason}"));
        }
        lines.push(format!("base: {}", cert.base));
        lines.push(format!("tree: {:?}", cert.tree.iter().map(|a| a.0).collect::<Vec<_>>()));
        lines.push(cert.dev_report.to_string());
        lines.push(audit_certificate(&cert).to_string());
        for e in &cert.transcript {
            lines.push(format!("  {}: {} instance(s), {} failure(s)", e.family, e.instances, e.failures));
        }
        lines.join("\n")
    });
    Ok(cert.verdict)
}

fn cmd_sheaf_from_morphism(ctx: &mut Ctx, path: &Path) -> Result<bool, Failure> {
    let b = ctx.bundle(path)?;
    let Some(m) = b.morphism else {
        return Err(Failure::Input(format!("{}: bundle has no morphism", path.display())));
    };
    let field = ctx.field.unwrap_or(Field::Rational);
    let (f, warnings) = sheaf_from_morphism(&m, field)?;
    let report = check_dev_properties(&f)?;
    ctx.write_out(&to_json(&sheaf_file_inline(&f)))?;
    let doc = json!({ "dev_report": report, "warnings": warnings, "dims": f.dims() });
    ctx.emit(&doc, || format!("stalk dimension {}\n{report}\n{warnings}", m.target().order()));
    Ok(warnings.passed() && report.verdict())
}

fn cmd_bh_cat(ctx: &mut Ctx, path: &Path, table: bool) -> Result<bool, Failure> {
    let complex = match ctx.load(path)? {
        Document::Complex(c) => c,
        Document::Bundle(b) => b.complex,
        Document::Sheaf(f) => f.complex().clone(),
        Document::Morphism(m) => m.source().clone(),
        d => return Err(Failure::Input(format!("{}: no complex in a {} document", path.display(), d.kind()))),
    };
    let cat = build_bh_category(complex)?;
    let laws = check_category_laws(&cat);
    let file = bh_category_file(&cat, table);
    ctx.write_out(&to_json(&file))?;
    ctx.emit(&file, || format!("{} object(s), {} arrow(s)\n{laws}", cat.object_count(), cat.arrow_count()));
    Ok(laws.passed())
}

fn cmd_dev_check(ctx: &mut Ctx, path: &Path) -> Result<bool, Failure> {
    let f = match ctx.load(path)? {
        Document::Sheaf(f) => f,
        Document::Bundle(Bundle { sheaf: Some(f), .. }) => f,
        d => return Err(Failure::Input(format!("{}: no sheaf in a {} document", path.display(), d.kind()))),
    };
    let report = check_dev_properties(&f)?;
    let file = dev_report_file(&report);
    ctx.write_out(&to_json(&file))?;
    ctx.emit(&file, || format!("verdict: {}\n{report}", report.verdict()));
    Ok(report.verdict())
}

fn cmd_fixtures(ctx: &Ctx) -> Result<bool, Failure> {
    let Some(out) = &ctx.out else {
        return Err(Failure::Input("fixtures needs --out DIR".into()));
    };
    cogsheaf::fixtures::export_all(out).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    if ctx.report == ReportFormat::Text {
        println!("wrote fixtures to {}", out.display());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx { loader: Loader::with_field(cli.field), field: cli.field, report: cli.report, out: cli.out };
    let result = match &cli.command {
        Command::Validate { paths } => cmd_validate(&mut ctx, paths),
        Command::Develop { bundle } => cmd_develop(&mut ctx, bundle),
        Command::SheafFromMorphism { bundle } => cmd_sheaf_from_morphism(&mut ctx, bundle),
        Command::BhCat { path, table } => cmd_bh_cat(&mut ctx, path, *table),
        Command::DevCheck { path } => cmd_dev_check(&mut ctx, path),
        Command::Fixtures => cmd_fixtures(&ctx),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
