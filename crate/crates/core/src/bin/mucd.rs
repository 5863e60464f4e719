use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use condorcet_domains::canon::{self, ClassKey};
use condorcet_domains::classify::{self, ClassRecord};
use condorcet_domains::domain::Domain;
use condorcet_domains::error::{Error, Result};
use condorcet_domains::files;
use condorcet_domains::laws::LawTables;
use condorcet_domains::oracle;
use condorcet_domains::schemes::{self, AlternatingVariant};
use condorcet_domains::search::{enumerate_mucds, SearchConfig};

#[derive(Parser)]
#[command(name = "mucd", about = "Enumerate and classify maximal unitary Condorcet domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all classes of one degree into a class file.
    Enumerate(EnumerateArgs),
    /// Classify a class file into the two CSV reports.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output path prefix for the CSV files.
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check the tree search against the brute-force oracle.
    Verify {
        #[arg(long)]
        degree: usize,
    },
    /// Construct a scheme domain and report its basic properties.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Canonicalize and deduplicate the domains of a class file.
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summary statistics of a class file.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    out: PathBuf,
    /// Depth of the parallel work split; picked automatically if omitted.
    #[arg(long)]
    frontier_depth: Option<usize>,
    /// Worker count; 0 means all available threads.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Acknowledge that degree 7 takes a very long time.
    #[arg(long)]
    i_have_time: bool,
    /// Checkpoint directory (mandatory for degree 7): the frontier and
    /// per-node partial results live here and runs resume where they left off.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Stop after completing this many unfinished frontier nodes
    /// (checkpointed runs only); resume later with the same command.
    #[arg(long)]
    max_nodes: Option<usize>,
}

#[derive(Subcommand)]
enum SchemeCommand {
    Alternating {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Black {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Replacement {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn flip_class_count(classes: &BTreeSet<Domain>) -> Result<usize> {
    let flips: Result<BTreeSet<Domain>> = classes
        .par_iter()
        .map(|d| ClassKey::of(d).map(|k| k.flip_canonical))
        .collect();
    Ok(flips?.len())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<()> {
    if args.degree == 7 {
        if !args.i_have_time {
            return Err(Error::Invariant(
                "degree 7 has 171,870,480 classes; pass --i-have-time and --checkpoint to proceed"
                    .into(),
            ));
        }
        if args.checkpoint.is_none() {
            return Err(Error::Invariant(
                "degree 7 requires --checkpoint so the run can resume".into(),
            ));
        }
    }
    let cfg = SearchConfig {
        precedence_prune: true,
        frontier_depth: args.frontier_depth,
        jobs: args.jobs,
    };
    let classes = if let Some(dir) = &args.checkpoint {
        match files::enumerate_checkpointed(args.degree, &cfg, dir, args.max_nodes)? {
            Some((classes, _)) => classes,
            None => {
                println!(
                    "checkpoint incomplete after --max-nodes budget; rerun to resume ({})",
                    dir.display()
                );
                return Ok(());
            }
        }
    } else {
        let out = enumerate_mucds(args.degree, &cfg)?;
        println!(
            "nodes={} forced={} pruned={} cut={} leaves={} frontier_depth={}",
            out.stats.nodes,
            out.stats.forced_steps,
            out.stats.pruned_precedence,
            out.stats.cut_non_maximal,
            out.stats.leaves,
            out.frontier_depth
        );
        out.classes
    };
    files::write_class_file(&args.out, args.degree, &classes)?;
    let max_size = classes.iter().map(Domain::len).max().unwrap_or(0);
    println!(
        "{} classes, {} flip classes, max size {}",
        classes.len(),
        flip_class_count(&classes)?,
        max_size
    );
    Ok(())
}

fn cmd_classify(input: PathBuf, out: PathBuf) -> Result<()> {
    let (degree, domains) = files::read_class_file(&input)?;
    let report = classify::classify_all(degree, &domains)?;
    let paths = files::write_reports(&out, &report)?;
    println!(
        "degree {} | {} classes, {} flip classes, max size {}",
        report.degree, report.total, report.flip_total, report.max_size
    );
    println!(
        "size moments: mean {:.4} variance {:.4} skewness {:.4}",
        report.mean_size, report.variance_size, report.skewness_size
    );
    println!(
        "reports: {} and {}",
        paths.properties.display(),
        paths.dual_intersections.display()
    );
    Ok(())
}

fn cmd_verify(degree: usize) -> Result<()> {
    if !(3..=4).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    let searched = enumerate_mucds(degree, &SearchConfig::default())?.classes;
    let brute = canon::dedup(oracle::maximal_unitary_cds(degree)?)?;
    let missing = brute.difference(&searched).count();
    let extra = searched.difference(&brute).count();
    if missing + extra > 0 {
        return Err(Error::VerifyMismatch { missing, extra });
    }
    println!(
        "degree {degree}: pass, {} = {} canonical classes",
        searched.len(),
        brute.len()
    );
    Ok(())
}

fn report_domain(d: &Domain, out: Option<PathBuf>) -> Result<()> {
    let degree = d.degree();
    let rec = ClassRecord::of(d)?;
    let maximal = if degree <= 6 {
        if LawTables::get(degree).is_maximal_cd(d) {
            "maximal"
        } else {
            "not maximal"
        }
    } else {
        "maximality unchecked"
    };
    println!("degree {degree}, size {}, {maximal}", d.len());
    println!(
        "connected={} peak_pit={} normal={} symmetric={} self_dual={} copious={} ample={} \
         fixing={} reducible={} arrow_sp={} usp={} nuspd={} sp_tree={} sp_star={} dual_intersection={}",
        rec.connected,
        rec.peak_pit,
        rec.normal,
        rec.symmetric,
        rec.self_dual,
        rec.copious,
        rec.ample,
        rec.fixing,
        rec.reducible,
        rec.arrow_sp,
        rec.usp,
        rec.nuspd,
        rec.sp_tree,
        rec.sp_star,
        rec.dual_intersection
    );
    let singleton: BTreeSet<Domain> = [d.clone()].into();
    match out {
        Some(path) => files::write_class_file(&path, degree, &singleton)?,
        None => print!("{}", files::render_class_file(degree, &singleton)),
    }
    Ok(())
}

fn cmd_scheme(cmd: SchemeCommand) -> Result<()> {
    match cmd {
        SchemeCommand::Alternating { degree, out } => {
            let d = schemes::alternating(degree, AlternatingVariant::A);
            report_domain(&d, out)
        }
        SchemeCommand::Black { degree, out } => {
            let d = schemes::black_single_peaked(degree);
            report_domain(&d, out)
        }
        SchemeCommand::Replacement { left, right, out } => {
            let (_, l) = files::read_class_file(&left)?;
            let (_, r) = files::read_class_file(&right)?;
            let d = schemes::replacement(&l[0], &r[0])?;
            report_domain(&d, out)
        }
    }
}

fn cmd_canon(input: PathBuf, out: PathBuf) -> Result<()> {
    let (degree, domains) = files::read_class_file(&input)?;
    let classes = canon::dedup(domains)?;
    files::write_class_file(&out, degree, &classes)?;
    println!("{} canonical classes", classes.len());
    Ok(())
}

fn cmd_stats(input: PathBuf) -> Result<()> {
    let (degree, domains) = files::read_class_file(&input)?;
    let mut by_size: std::collections::BTreeMap<usize, usize> = Default::default();
    for d in &domains {
        *by_size.entry(d.len()).or_default() += 1;
    }
    println!("degree {degree}, {} domains", domains.len());
    for (size, count) in by_size {
        println!("size {size}: {count}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Classify { input, out } => cmd_classify(input, out),
        Command::Verify { degree } => cmd_verify(degree),
        Command::Scheme(cmd) => cmd_scheme(cmd),
        Command::Canon { input, out } => cmd_canon(input, out),
        Command::Stats { input } => cmd_stats(input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
