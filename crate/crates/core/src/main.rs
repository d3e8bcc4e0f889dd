use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use redinv::abgrp::{six_term_sequence, AbHom, FgAbelianGroup};
use redinv::catalogio::{self, Catalog, CatalogFile, ResultRecord};
use redinv::cech::{build_complex, cech_cohomology, contraction_check, CechInput};
use redinv::exactalg::{hnf, smith_decomposition, IntMatrix};
use redinv::report::{Check, Report};
use redinv::tres::{self, Provenance};
use redinv::{Error, ReductiveDatum, Result};

#[derive(Parser, Debug)]
#[command(name = "redinv", version, about = "Invariants of reductive groups from root data")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Catalog file used to resolve group names.
    #[arg(long, env = "REDINV_CATALOG", global = true)]
    catalog: Option<PathBuf>,
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ResolutionArg {
    Canonical,
    Pushout,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixOp {
    Snf,
    Hnf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CatalogAction {
    /// Recompute every stored value.
    Check,
    /// Print the catalog regenerated from the built-in group list.
    Build,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character group, Picard group, fundamental group and radical characters.
    Invariants { spec: String },
    /// The dual fundamental complex and its cohomology.
    Pi1d {
        spec: String,
        #[arg(long, value_enum, default_value_t = ResolutionArg::Canonical)]
        resolution: ResolutionArg,
    },
    /// Exactness checks for a short exact sequence file.
    CheckSes { file: PathBuf },
    /// Cohomology and homotopy checks for a Čech input file.
    Cech {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Smith or Hermite normal form of an integer matrix file.
    Matrix { op: MatrixOp, file: PathBuf },
    /// Validate the catalog against recomputed values.
    Catalog {
        #[arg(value_enum, default_value_t = CatalogAction::Check)]
        action: CatalogAction,
    },
    /// Randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Catalog { action: CatalogAction::Build } = cli.command {
        return match CatalogFile::from_specs(catalogio::DEFAULT_SPECS) {
            Ok(f) => {
                print!("{}", f.to_json());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    match run(&cli) {
        Ok(rec) => {
            emit(&rec, cli.format, cli.verbose);
            if rec.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::json!({ "error": e.to_string() })),
                Format::Human => eprintln!("error: {e}"),
            }
            ExitCode::from(2)
        }
    }
}

fn emit(rec: &ResultRecord, format: Format, verbose: u8) {
    if format == Format::Json {
        print!("{}", rec.to_json());
        return;
    }
    match rec.labels.get("file") {
        Some(f) => println!("{} {f}", rec.command),
        None => println!("{} {}", rec.command, rec.input.lines().next().unwrap_or("")),
    }
    for (k, v) in rec.labels.iter().filter(|(k, _)| *k != "file") {
        println!("  {k}: {v}");
    }
    for (k, g) in &rec.groups {
        println!("  {k}: {g}");
    }
    for (k, c) in &rec.complexes {
        println!("  {k}:");
        let sym = if k.ends_with(".terms") { "C" } else { "H" };
        for d in c {
            println!("    {sym}^{} = {}", d.degree, d.group);
        }
    }
    for (k, m) in &rec.matrices {
        println!("  {k}:");
        if m.rows() == 0 || m.cols() == 0 {
            println!("    ({} x {} zero matrix)", m.rows(), m.cols());
        }
        for row in m.to_rows() {
            let cells: Vec<String> = row.iter().map(BigInt::to_string).collect();
            println!("    [{}]", cells.join(", "));
        }
    }
    let failed: Vec<&Check> = rec.verdicts.iter().filter(|c| !c.pass).collect();
    for c in &rec.verdicts {
        if verbose > 0 || !c.pass {
            println!("  {} {}", c.name, if c.pass { "PASS" } else { "FAIL" });
        }
    }
    println!(
        "  {} of {} checks passed{}",
        rec.verdicts.len() - failed.len(),
        rec.verdicts.len(),
        if rec.verdicts.is_empty() { "" } else if failed.is_empty() { ": PASS" } else { ": FAIL" }
    );
    if !failed.is_empty() {
        eprintln!("{}", serde_json::to_string_pretty(&failed).expect("serializable"));
    }
}

fn catalog(cli: &Cli) -> Result<Catalog> {
    match &cli.catalog {
        Some(p) => catalogio::load_catalog(p),
        None => Ok(catalogio::shipped_catalog()),
    }
}

/// Catalog names first, then group spec strings.
fn resolve(cli: &Cli, spec: &str) -> Result<ReductiveDatum> {
    let cat = catalog(cli)?;
    match cat.get(spec.trim()) {
        Some(d) => Ok(d.clone()),
        None => ReductiveDatum::from_spec(spec),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::from)
}

fn run(cli: &Cli) -> Result<ResultRecord> {
    match &cli.command {
        Command::Invariants { spec } => cmd_invariants(cli, spec),
        Command::Pi1d { spec, resolution } => cmd_pi1d(cli, spec, *resolution),
        Command::CheckSes { file } => with_file(cmd_check_ses(&read(file)?), file),
        Command::Cech { file, max_degree } => with_file(cmd_cech(&read(file)?, *max_degree), file),
        Command::Matrix { op, file } => with_file(cmd_matrix(*op, &read(file)?), file),
        Command::Catalog { action } => cmd_catalog(cli, *action),
        Command::Selftest { seed, cases } => cmd_selftest(*seed, *cases),
    }
}

fn with_file(rec: Result<ResultRecord>, path: &std::path::Path) -> Result<ResultRecord> {
    let mut rec = rec?;
    rec.label("file", path.display().to_string());
    Ok(rec)
}

fn cmd_invariants(cli: &Cli, spec: &str) -> Result<ResultRecord> {
    let d = resolve(cli, spec)?;
    let mut rec = ResultRecord::new("invariants", spec);
    rec.label("name", d.name())
        .label("gamma_order", d.gamma().order().to_string())
        .label("semisimple_rank", d.semisimple_rank().to_string())
        .group("characters", d.character_group()?.invariants().clone())
        .group("pic", d.mu_dual()?.invariants().clone())
        .group("pi1", d.pi1()?.invariants().clone())
        .group("radical_characters", d.radical_characters()?.invariants().clone());
    rec.verdicts(&d.validate());
    Ok(rec)
}

fn cmd_pi1d(cli: &Cli, spec: &str, which: ResolutionArg) -> Result<ResultRecord> {
    let d = resolve(cli, spec)?;
    let kinds: &[Provenance] = match which {
        ResolutionArg::Canonical => &[Provenance::Canonical],
        ResolutionArg::Pushout => &[Provenance::Pushout],
        ResolutionArg::Both => &[Provenance::Canonical, Provenance::Pushout],
    };
    let input = format!("{spec}\n--resolution {}", format!("{which:?}").to_lowercase());
    let mut rec = ResultRecord::new("pi1d", input);
    let mut report = Report::new();
    let mut resolutions = Vec::new();
    for &k in kinds {
        let r = tres::resolution(&d, k)?;
        let c = r.pi1d();
        rec.complex(format!("{k}.terms"), c.term_invariants());
        rec.complex(format!("{k}.cohomology"), c.cohomology_invariants()?);
        rec.matrix(format!("{k}.differential"), r.rho_star.matrix().clone());
        let mut four = tres::four_term_check(&r)?;
        for ch in &mut four.checks {
            ch.name = format!("{k}.{}", ch.name);
        }
        report.extend(four);
        resolutions.push(r);
    }
    if let [a, b] = &resolutions[..] {
        let cmp = tres::compare_resolutions(&d, a, b)?;
        rec.label("comparison", cmp.verdict.to_string()).label("comparison_method", cmp.method);
        report.extend(cmp.report);
    }
    rec.verdicts(&report);
    Ok(rec)
}

fn cmd_check_ses(text: &str) -> Result<ResultRecord> {
    let s = catalogio::parse_ses(text)?;
    let out = tres::ses_to_complex_ses(&s)?;
    let mut rec = ResultRecord::new("check-ses", text);
    for (i, (label, inv)) in out.six.iter().enumerate() {
        rec.group(format!("sequence.{i}.{label}"), inv.clone());
    }
    if let Some(m) = out.restriction_on_characters {
        rec.matrix("restriction_on_characters", m);
    }
    rec.verdicts(&out.report);
    Ok(rec)
}

fn cmd_cech(text: &str, max_degree: usize) -> Result<ResultRecord> {
    let inp = catalogio::parse_cech(text)?;
    let c = build_complex(&inp, max_degree)?;
    let mut rec = ResultRecord::new("cech", format!("{text}\n--max-degree {max_degree}"));
    let h: Vec<(i32, redinv::Invariants)> = (0..max_degree)
        .map(|i| Ok((i as i32, cech_cohomology(&c, i)?.invariants().clone())))
        .collect::<Result<_>>()?;
    let mut report = contraction_check(&c)?;
    let (ker, coker) = (inp.phi.kernel()?.0, inp.phi.cokernel()?.0);
    if let Some((_, h0)) = h.first() {
        report.push(Check::from_bool("H0-is-kernel", h0 == ker.invariants(), || format!("{h0} vs {}", ker.invariants())));
    }
    if let Some((_, h1)) = h.get(1) {
        report.push(Check::from_bool("H1-is-cokernel", h1 == coker.invariants(), || {
            format!("{h1} vs {}", coker.invariants())
        }));
    }
    for (i, g) in h.iter().skip(2) {
        report.push(Check::from_bool(format!("H{i}-vanishes"), g.is_trivial(), || g.to_string()));
    }
    rec.complex("cech", h);
    rec.verdicts(&report);
    Ok(rec)
}

fn cmd_matrix(op: MatrixOp, text: &str) -> Result<ResultRecord> {
    let m = catalogio::parse_matrix(text)?;
    let mut rec = ResultRecord::new(format!("matrix {}", format!("{op:?}").to_lowercase()), text);
    let mut report = Report::new();
    match op {
        MatrixOp::Snf => {
            let s = smith_decomposition(&m);
            let ok = s.u.mul(&m).mul(&s.v) == s.d && s.u.is_unimodular() && s.v.is_unimodular();
            report.push(Check::from_bool("d-equals-u-m-v", ok, || "decomposition identity fails".into()));
            rec.matrix("d", s.d).matrix("u", s.u).matrix("v", s.v);
        }
        MatrixOp::Hnf => {
            let (h, u) = hnf(&m);
            let ok = u.mul(&m) == h && u.is_unimodular();
            report.push(Check::from_bool("h-equals-u-m", ok, || "decomposition identity fails".into()));
            rec.matrix("h", h).matrix("u", u);
        }
    }
    rec.verdicts(&report);
    Ok(rec)
}

fn cmd_catalog(cli: &Cli, action: CatalogAction) -> Result<ResultRecord> {
    match action {
        CatalogAction::Build => unreachable!("handled before dispatch"),
        CatalogAction::Check => {
            let cat = catalog(cli)?;
            let source = cli.catalog.as_ref().map_or("shipped".to_string(), |p| p.display().to_string());
            let mut rec = ResultRecord::new("catalog check", format!("{source}\n{}", cat.file.to_json()));
            for (e, _) in cat.iter() {
                rec.group(format!("{}.mu_dual", e.name), e.expected.mu_dual.clone());
            }
            rec.label("entries", cat.len().to_string());
            rec.verdicts(&catalogio::self_test(&cat)?);
            Ok(rec)
        }
    }
}

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::new(rows, cols, data).expect("sized")
}

fn cmd_selftest(seed: u64, cases: usize) -> Result<ResultRecord> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rec = ResultRecord::new("selftest", format!("--seed {seed} --cases {cases}"));
    let mut report = Report::new();

    let mut bad = Vec::new();
    for k in 0..cases {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = random_matrix(&mut rng, r, c, 9);
        let s = smith_decomposition(&m);
        let diag = s.d.to_rows();
        let chain = (1..r.min(c)).all(|i| {
            let (a, b) = (&diag[i - 1][i - 1], &diag[i][i]);
            (a == &BigInt::from(0) && b == &BigInt::from(0)) || (a != &BigInt::from(0) && (b % a) == BigInt::from(0))
        });
        if s.u.mul(&m).mul(&s.v) != s.d || !chain {
            bad.push(k);
        }
    }
    report.push(Check::from_bool("snf-decomposition", bad.is_empty(), || format!("cases {bad:?}")));

    let mut bad = Vec::new();
    for k in 0..cases {
        let dims: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=3)).collect();
        let u = random_matrix(&mut rng, dims[1], dims[0], 5);
        let v = random_matrix(&mut rng, dims[2], dims[1], 5);
        let (a, b, c) = (FgAbelianGroup::free(dims[0]), FgAbelianGroup::free(dims[1]), FgAbelianGroup::free(dims[2]));
        let ok = six_term_sequence(&AbHom::new(a, b.clone(), u)?, &AbHom::new(b, c, v)?)?.is_exact();
        if !ok {
            bad.push(k);
        }
    }
    report.push(Check::from_bool("six-term-exact", bad.is_empty(), || format!("cases {bad:?}")));

    let mut bad = Vec::new();
    for k in 0..cases {
        let fx = FgAbelianGroup::free(rng.gen_range(0..=2));
        let t = rng.gen_range(2..=6);
        let fg = FgAbelianGroup::direct_sum(&[&FgAbelianGroup::free(rng.gen_range(0..=1)), &FgAbelianGroup::cyclic(t)]);
        let phi = random_matrix(&mut rng, fg.ambient_rank(), fx.ambient_rank(), 5);
        let inp = CechInput::new(fx, fg, phi)?;
        let c = build_complex(&inp, 5)?;
        let mut ok = contraction_check(&c)?.all_pass();
        ok &= cech_cohomology(&c, 0)?.is_isomorphic(&inp.phi.kernel()?.0);
        ok &= cech_cohomology(&c, 1)?.is_isomorphic(&inp.phi.cokernel()?.0);
        for i in 2..5 {
            ok &= cech_cohomology(&c, i)?.is_trivial();
        }
        if !ok {
            bad.push(k);
        }
    }
    report.push(Check::from_bool("cech-cohomology", bad.is_empty(), || format!("cases {bad:?}")));

    rec.verdicts(&report);
    Ok(rec)
}
