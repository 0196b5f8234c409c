use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use eqsheaf::check::{run_suite, CheckReport, Suite, SuiteInput};
use eqsheaf::diagram::{colim_sheaf, example_fix, example_group_ring, sheafify, EqPresheaf};
use eqsheaf::group::DEFAULT_ORDER_CAP;
use eqsheaf::io::{parse_group_spec, subgroup_tower, BaseDoc, Document, LeveledDoc, SheafDoc, TowerDoc};
use eqsheaf::random::rng;
use eqsheaf::sheaf::constant_sheaf;
use eqsheaf::weyl::is_weyl;
use eqsheaf::{Error, FiniteEqSheaf, GroupRep, GroupTower, SpaceTower};

/// Equivariant sheaves over towers of finite groups.
#[derive(Parser)]
#[command(name = "eqsheaf", version)]
struct Cli {
    /// Largest group order to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    cap: usize,
    /// Attach wall-clock timings to check reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the subgroup-space tower of a group and print its level sizes.
    SubgroupSpace {
        /// cyclic:n, sym:n, dihedral:n, product:a,b or a group JSON file.
        group: String,
        /// Number of tower steps; defaults to a longest normal series.
        #[arg(long)]
        depth: Option<usize>,
        /// Directory for tower.json and tower.dot.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print this artifact instead of the level summary.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build one of the worked examples over a subgroup-space tower.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Group spec or tower JSON file.
        #[arg(long)]
        tower: String,
        #[arg(long)]
        depth: Option<usize>,
        /// Module for `fix` and `constant`.
        #[arg(long, value_enum, default_value_t = RepKind::Trivial)]
        rep: RepKind,
        /// Dimension of the trivial module.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// For `group-ring`: emit the sheafification instead of the presheaf.
        #[arg(long)]
        sheafify: bool,
        /// Output file; JSON goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite and stream JSON-lines reports.
    Check {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Group spec or tower JSON file; taken from the inputs when omitted.
        #[arg(long)]
        tower: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        /// Sheaf, presheaf or diagram documents to check.
        #[arg(long = "input")]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances on top of the inputs; 3 when there are no inputs.
        #[arg(long)]
        count: Option<usize>,
        /// Append reports here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a document.
    Show { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    GroupRing,
    Fix,
    Constant,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepKind {
    Trivial,
    Regular,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load_tower(spec: &str, depth: Option<usize>, cap: usize) -> Result<Arc<SpaceTower>, Error> {
    if spec.ends_with(".json") {
        match Document::read(Path::new(spec))? {
            Document::Tower(t) => return t.build(cap),
            _ => return Err(Error::Parse(format!("{spec} is not a tower document"))),
        }
    }
    subgroup_tower(&parse_group_spec(spec, cap)?, depth, cap)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn module(tower: &SpaceTower, rep: RepKind, dim: usize) -> GroupRep {
    let g = tower.groups().top();
    match rep {
        RepKind::Trivial => GroupRep::trivial(g, dim),
        RepKind::Regular => GroupRep::regular(g),
    }
}

fn subgroup_space(
    cli: &Cli,
    group: &str,
    depth: Option<usize>,
    out: Option<&Path>,
    format: Option<Format>,
) -> Result<ExitCode, Error> {
    let tower = subgroup_tower(&parse_group_spec(group, cli.cap)?, depth, cli.cap)?;
    let json = Document::Tower(TowerDoc::of(&tower)).to_json();
    let dot = tower.to_dot();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
        emit(&json, Some(&dir.join("tower.json")))?;
        emit(&dot, Some(&dir.join("tower.dot")))?;
    }
    match format {
        Some(Format::Json) => println!("{json}"),
        Some(Format::Dot) => print!("{dot}"),
        None => {
            for (k, x) in tower.levels().iter().enumerate() {
                println!("level {k}: |G|={} points={} orbits={}", x.group().order(), x.n_points(), x.orbits().len());
            }
            let sizes: Vec<String> = tower.levels().iter().map(|x| x.n_points().to_string()).collect();
            println!("sizes {}", sizes.join(","));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn example(
    cli: &Cli,
    name: ExampleName,
    tower: &str,
    depth: Option<usize>,
    rep: RepKind,
    dim: usize,
    sheafify_it: bool,
    out: Option<&Path>,
) -> Result<ExitCode, Error> {
    let tower = load_tower(tower, depth, cli.cap)?;
    let doc = match name {
        ExampleName::GroupRing => {
            let f = example_group_ring(&tower)?;
            let l = sheafify(&f)?;
            for r in colim_sheaf(&l.diagram)?.report {
                eprintln!("thread {:?}: dims {:?} stabilized from {:?}", r.thread, r.dims, r.stabilized_from);
            }
            if sheafify_it {
                Document::Sheaf(SheafDoc::of(&l.sheaf, BaseDoc::TowerTop { tower: TowerDoc::of(&tower) }))
            } else {
                Document::Presheaf(LeveledDoc::of_presheaf(&f))
            }
        }
        ExampleName::Fix => {
            let d = example_fix(&module(&tower, rep, dim), &tower)?;
            eprintln!("colimit stalk dims {:?}", colim_sheaf(&d)?.sheaf.dims());
            Document::Diagram(LeveledDoc::of_diagram(&d))
        }
        ExampleName::Constant => {
            let e = constant_sheaf(tower.top(), &module(&tower, rep, dim))?;
            eprintln!("stalk dims {:?}", e.dims());
            Document::Sheaf(SheafDoc::of(&e, BaseDoc::TowerTop { tower: TowerDoc::of(&tower) }))
        }
    };
    emit(&doc.to_json(), out)?;
    Ok(ExitCode::SUCCESS)
}

/// A depth-zero tower whose only level is the given space.
fn trivial_tower(e: &FiniteEqSheaf) -> Result<Arc<SpaceTower>, Error> {
    let g = e.base().group();
    let groups = GroupTower::from_normal_chain(g, &[g.trivial_subgroup()])?;
    Ok(Arc::new(SpaceTower::new(groups, vec![Arc::clone(e.base())], Vec::new())?))
}

struct Loaded {
    tower: Option<Arc<SpaceTower>>,
    sheaves: Vec<FiniteEqSheaf>,
    presheaves: Vec<EqPresheaf>,
    failures: Vec<CheckReport>,
}

fn load_inputs(cli: &Cli, suite: Suite, paths: &[PathBuf]) -> Result<Loaded, Error> {
    let mut loaded = Loaded { tower: None, sheaves: Vec::new(), presheaves: Vec::new(), failures: Vec::new() };
    let label = |p: &Path| format!("{}.load {}", suite.name(), p.display());
    for path in paths {
        let outcome = Document::read(path).and_then(|doc| match doc {
            Document::Sheaf(s) => {
                let (e, base) = s.build(cli.cap)?;
                let tower = match (base.tower, &s.base) {
                    (Some(t), _) => t,
                    (None, BaseDoc::SubgroupSpace { .. }) => subgroup_tower(e.base().group(), Some(0), cli.cap)?,
                    (None, _) => trivial_tower(&e)?,
                };
                loaded.sheaves.push(e);
                Ok(Some(tower))
            }
            Document::Presheaf(p) => {
                let f = p.build_presheaf(cli.cap)?;
                let t = Arc::clone(f.tower());
                loaded.presheaves.push(f);
                Ok(Some(t))
            }
            Document::Diagram(d) => {
                let d = d.build_diagram(cli.cap)?;
                loaded.sheaves.push(colim_sheaf(&d)?.sheaf);
                Ok(Some(Arc::clone(d.tower())))
            }
            Document::Tower(t) => Ok(Some(t.build(cli.cap)?)),
        });
        match outcome {
            Ok(Some(t)) => {
                if loaded.tower.is_none() {
                    loaded.tower = Some(t);
                }
            }
            Ok(None) => {}
            Err(e @ Error::Parse(_)) => return Err(e),
            Err(e) => loaded.failures.push(CheckReport::from_error(label(path), &e)),
        }
    }
    Ok(loaded)
}

#[allow(clippy::too_many_arguments)]
fn check(
    cli: &Cli,
    suite: Suite,
    tower: Option<&str>,
    depth: Option<usize>,
    inputs: &[PathBuf],
    seed: u64,
    count: Option<usize>,
    out: Option<&Path>,
) -> Result<ExitCode, Error> {
    let loaded = load_inputs(cli, suite, inputs)?;
    let mut reports = loaded.failures;
    let tower = match (tower, loaded.tower) {
        (Some(spec), _) => Some(load_tower(spec, depth, cli.cap)?),
        (None, t) => t,
    };
    if let Some(tower) = tower {
        // rebuild inputs over the suite's tower so bases match exactly
        let sheaves = loaded
            .sheaves
            .iter()
            .filter_map(|e| match eqsheaf::io::StalksDoc::of(e).build(tower.top()) {
                Ok(e) => Some(e),
                Err(err) => {
                    reports.push(CheckReport::from_error(format!("{}.base", suite.name()), &err));
                    None
                }
            })
            .collect();
        let default_count = if inputs.is_empty() { 3 } else { 0 };
        let mut input = SuiteInput {
            tower,
            sheaves,
            presheaves: loaded.presheaves,
            count: count.unwrap_or(default_count),
            rng: rng(seed),
        };
        reports.extend(run_suite(suite, &mut input, cli.timing));
    } else if reports.is_empty() {
        return Err(Error::Parse("no tower: pass --tower or an input document".into()));
    }
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    let lines: String = reports.iter().map(|r| serde_json::to_string(r).expect("reports serialize") + "\n").collect();
    match out {
        Some(p) => fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(p)
            .and_then(|mut f| f.write_all(lines.as_bytes()))
            .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?,
        None => print!("{lines}"),
    }
    Ok(if reports.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn show(cli: &Cli, file: &Path) -> Result<ExitCode, Error> {
    match Document::read(file)? {
        Document::Tower(t) => {
            println!("tower of depth {} over a group of degree {}", t.depth, t.group.degree);
            let tower = t.build(cli.cap)?;
            for (k, x) in tower.levels().iter().enumerate() {
                println!("level {k}: |G|={} points={} orbits={}", x.group().order(), x.n_points(), x.orbits().len());
            }
        }
        Document::Sheaf(s) => {
            let (e, _) = s.build(cli.cap)?;
            println!("sheaf on {} points, stalk dims {:?}", e.n_points(), e.dims());
            if e.base().subgroup_points().is_some() {
                println!("weyl: {}", is_weyl(&e)?);
            }
        }
        Document::Presheaf(p) => {
            let f = p.build_presheaf(cli.cap)?;
            println!("presheaf over a tower of depth {}", f.tower().depth());
            for (k, d) in f.dims().iter().enumerate() {
                println!("level {k}: {d:?}");
            }
            println!("level-discrete: {}", f.is_level_discrete());
        }
        Document::Diagram(d) => {
            let d = d.build_diagram(cli.cap)?;
            println!("diagram sheaf over a tower of depth {}", d.tower().depth());
            for (k, l) in d.levels().iter().enumerate() {
                println!("level {k}: {:?}", l.dims());
            }
            for r in colim_sheaf(&d)?.report {
                println!("thread {:?}: dims {:?} stabilized from {:?}", r.thread, r.dims, r.stabilized_from);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SubgroupSpace { group, depth, out, format } => {
            subgroup_space(&cli, group, *depth, out.as_deref(), *format)
        }
        Command::Example { name, tower, depth, rep, dim, sheafify, out } => {
            example(&cli, *name, tower, *depth, *rep, *dim, *sheafify, out.as_deref())
        }
        Command::Check { suite, tower, depth, inputs, seed, count, out } => {
            check(&cli, *suite, tower.as_deref(), *depth, inputs, *seed, *count, out.as_deref())
        }
        Command::Show { file } => show(&cli, file),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
