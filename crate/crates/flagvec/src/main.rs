//! Command-line front end: parse object files, compute vectors, inspect
//! link spaces, run experiments, and manage the on-disk space cache.
//! Exit status 2 marks input errors, 3 resource-guard stops, and 4
//! internal invariant failures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flagvec::algebra::vector::FormalVector;
use flagvec::error::{Error, Result};
use flagvec::experiments::{
    collision_scan, collision_scan_objects, cosphere_probe, hull_vertex_report,
    independence_of_vectors, independence_report, invariance_suite, ClassObject, ObjectClass,
    VectorKind,
};
use flagvec::formats::{parse_object, ParsedObject};
use flagvec::shelling::{LinkSpaceKey, Method};
use flagvec::spaces::LinkSpaces;

#[derive(Parser)]
#[command(name = "flagvec", version, about = "Exact shelling and flag vectors of finite vertex-and-cell objects")]
struct Cli {
    /// Directory holding cached link spaces.
    #[arg(
        long,
        global = true,
        env = "FLAGVEC_CACHE_DIR",
        default_value = ".flagvec-cache"
    )]
    cache_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the flag or shelling vector of one object file.
    Compute {
        /// Object file (igraph, origraph, bgraph, relation, or group).
        #[arg(long)]
        input: PathBuf,
        /// Which vector to compute.
        #[arg(long, value_enum)]
        vector: VectorArg,
        /// Engine: the literal sum over shellings or the subset recursion.
        #[arg(long, value_enum, default_value_t = MethodArg::Dp)]
        method: MethodArg,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one link space and print its dimension and residues.
    Linkspace {
        #[arg(long, value_enum)]
        kind: SpaceKindArg,
        /// Cell arity for graph kinds.
        #[arg(long)]
        i: Option<usize>,
        /// Tuple arity for the relation kind.
        #[arg(long)]
        n: Option<usize>,
        /// Removal depth (boundary and relation kinds).
        #[arg(long, default_value_t = 0)]
        depth: usize,
        /// Vertex count of the objects the space reduces.
        #[arg(long)]
        m: usize,
    },
    /// Run a batch experiment and emit its report.
    Experiment {
        #[command(subcommand)]
        experiment: ExperimentCommand,
    },
    /// Compute a group's flag vector, or compare two groups.
    Group {
        /// Group file: `group r=<m>` plus Cayley-table rows.
        #[arg(long)]
        input: PathBuf,
        /// Second group file; prints whether the flag vectors agree.
        #[arg(long, conflicts_with = "out")]
        compare: Option<PathBuf>,
        /// Output file for the vector; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Manage the on-disk link-space cache.
    Cache {
        #[command(subcommand)]
        action: CacheCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Rank and kernel certificates for a family of vectors.
    Independence {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_enum, default_value_t = VectorArg::Flag)]
        vector: VectorArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equal flag vectors of inequivalent objects.
    Collisions {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convex hull vertex status of each point among the others.
    Hull {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-stage co-sphericity probe.
    Cosphere {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded relabeling, engine-agreement, coefficient-sum, and
    /// quotient-soundness checks.
    Invariance {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CacheCommand {
    /// List cached link-space files.
    List,
    /// Delete cached link-space files.
    Clear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VectorArg {
    Flag,
    Shelling,
}

impl From<VectorArg> for VectorKind {
    fn from(arg: VectorArg) -> VectorKind {
        match arg {
            VectorArg::Flag => VectorKind::Flag,
            VectorArg::Shelling => VectorKind::Shelling,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Literal sum over all shellings.
    Naive,
    /// Memoized subset recursion.
    Dp,
}

impl From<MethodArg> for Method {
    fn from(arg: MethodArg) -> Method {
        match arg {
            MethodArg::Naive => Method::Naive,
            MethodArg::Dp => Method::SubsetDp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Igraph,
    Oriented,
    Boundary,
    Relation,
    Group,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceKindArg {
    Igraph,
    Oriented,
    Boundary,
    Relation,
}

/// Selects the objects an experiment ranges over: either an enumerated
/// class or explicit object files labeled `g0`, `g1`, ... in order.
#[derive(Args)]
struct ClassArgs {
    /// Kind of object class to enumerate.
    #[arg(long, value_enum, conflicts_with = "objects")]
    kind: Option<KindArg>,
    /// Cell arity for graph kinds.
    #[arg(long)]
    i: Option<usize>,
    /// Tuple arity for the relation kind.
    #[arg(long)]
    n: Option<usize>,
    /// Label length for the boundary kind.
    #[arg(long, default_value_t = 0)]
    depth: usize,
    /// Single vertex count; shorthand for equal bounds.
    #[arg(long, conflicts_with_all = ["r_min", "r_max"])]
    r: Option<usize>,
    #[arg(long, requires = "r_max")]
    r_min: Option<usize>,
    #[arg(long, requires = "r_min")]
    r_max: Option<usize>,
    /// Largest order for the group kind.
    #[arg(long)]
    max_order: Option<usize>,
    /// Explicit object files instead of an enumerated class.
    #[arg(long, num_args = 1..)]
    objects: Vec<PathBuf>,
}

enum Selection {
    Class(ObjectClass),
    Files(Vec<(String, ClassObject)>),
}

impl ClassArgs {
    fn selection(&self) -> Result<Selection> {
        if !self.objects.is_empty() {
            let mut labeled = Vec::new();
            for (idx, path) in self.objects.iter().enumerate() {
                labeled.push((format!("g{idx}"), parse_object(path)?.into_class_object()));
            }
            return Ok(Selection::Files(labeled));
        }
        let kind = self
            .kind
            .ok_or_else(|| Error::input("choose a class with --kind or files with --objects"))?;
        let (r_min, r_max) = match (self.r, self.r_min, self.r_max) {
            (Some(r), _, _) => (r, r),
            (None, Some(lo), Some(hi)) => (lo, hi),
            _ if kind == KindArg::Group => (0, 0),
            _ => {
                return Err(Error::input(
                    "give a vertex count with --r or a range with --r-min and --r-max",
                ))
            }
        };
        let arity = |flag: &str, value: Option<usize>| {
            value.ok_or_else(|| Error::input(format!("{flag} is required for this kind")))
        };
        Ok(Selection::Class(match kind {
            KindArg::Igraph => ObjectClass::IGraphs {
                i: arity("--i", self.i)?,
                r_min,
                r_max,
            },
            KindArg::Oriented => ObjectClass::OrientedGraphs {
                i: arity("--i", self.i)?,
                r_min,
                r_max,
            },
            KindArg::Boundary => ObjectClass::BoundaryGraphs {
                i: arity("--i", self.i)?,
                depth: self.depth,
                r_min,
                r_max,
            },
            KindArg::Relation => ObjectClass::Relations {
                n: arity("--n", self.n)?,
                r_min,
                r_max,
            },
            KindArg::Group => ObjectClass::Groups {
                max_order: arity("--max-order", self.max_order)?,
            },
        }))
    }

    fn description(&self) -> String {
        self.objects.iter().map(|p| p.display()).join(", ")
    }
}

/// Points for the hull and co-sphericity experiments: vector files, or
/// the vectors of an enumerated class.
#[derive(Args)]
struct PointArgs {
    /// Vector files, labeled `g0`, `g1`, ... in order.
    #[arg(long, num_args = 1.., conflicts_with = "kind")]
    vectors: Vec<PathBuf>,
    #[command(flatten)]
    class: ClassArgs,
    /// Which vector of each class member to use.
    #[arg(long = "vector", value_enum, default_value_t = VectorArg::Flag)]
    vector: VectorArg,
}

impl PointArgs {
    fn points(&self, spaces: &LinkSpaces) -> Result<Vec<(String, FormalVector)>> {
        if !self.vectors.is_empty() {
            let mut points = Vec::new();
            for (idx, path) in self.vectors.iter().enumerate() {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
                let v = FormalVector::from_text(&text)
                    .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
                points.push((format!("g{idx}"), v));
            }
            return Ok(points);
        }
        let kind = VectorKind::from(self.vector);
        match self.class.selection()? {
            Selection::Class(class) => {
                flagvec::experiments::class_vectors(&class, kind, spaces)
            }
            Selection::Files(labeled) => labeled
                .into_iter()
                .map(|(label, object)| Ok((label, object.vector(kind, spaces)?)))
                .collect(),
        }
    }
}

use itertools::Itertools;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let spaces = LinkSpaces::with_disk_cache(&cli.cache_dir);
    match cli.command {
        Command::Compute {
            input,
            vector,
            method,
            out,
        } => {
            let object = parse_object(&input)?.into_class_object();
            let v = object.vector_with(vector.into(), method.into(), &spaces)?;
            emit(out.as_deref(), &v.to_text())
        }
        Command::Linkspace { kind, i, n, depth, m } => {
            let key = space_key(kind, i, n, depth, m)?;
            emit(None, &describe_space(&key, &spaces)?)
        }
        Command::Experiment { experiment } => run_experiment(experiment, &spaces),
        Command::Group { input, compare, out } => {
            let first = group_vector(&input, &spaces)?;
            match compare {
                None => emit(out.as_deref(), &first.to_text()),
                Some(path) => {
                    let second = group_vector(&path, &spaces)?;
                    emit(
                        None,
                        if first == second { "identical\n" } else { "different\n" },
                    )
                }
            }
        }
        Command::Cache { action } => manage_cache(action, &cli.cache_dir),
    }
}

fn run_experiment(experiment: ExperimentCommand, spaces: &LinkSpaces) -> Result<()> {
    let (report, out) = match experiment {
        ExperimentCommand::Independence { class, vector, out } => {
            let kind = VectorKind::from(vector);
            let report = match class.selection()? {
                Selection::Class(class) => independence_report(&class, kind, spaces)?,
                Selection::Files(labeled) => {
                    let vectors = labeled
                        .iter()
                        .map(|(label, object)| {
                            Ok((label.clone(), object.vector(kind, spaces)?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    independence_of_vectors(&class.description(), kind.as_str(), &vectors)?
                }
            };
            (report, out)
        }
        ExperimentCommand::Collisions { class, out } => {
            let report = match class.selection()? {
                Selection::Class(class) => collision_scan(&class, spaces)?,
                Selection::Files(labeled) => {
                    let objects: Vec<ClassObject> =
                        labeled.into_iter().map(|(_, object)| object).collect();
                    collision_scan_objects(&class.description(), &objects, spaces)?
                }
            };
            (report, out)
        }
        ExperimentCommand::Hull { points, out } => {
            (hull_vertex_report(&points.points(spaces)?)?, out)
        }
        ExperimentCommand::Cosphere { points, out } => {
            (cosphere_probe(&points.points(spaces)?)?, out)
        }
        ExperimentCommand::Invariance { class, trials, seed, out } => {
            let Selection::Class(class) = class.selection()? else {
                return Err(Error::input(
                    "the invariance suite draws random members of a class; use --kind",
                ));
            };
            (invariance_suite(&class, trials, seed, spaces)?, out)
        }
    };
    emit(out.as_deref(), &report.to_text())
}

fn space_key(
    kind: SpaceKindArg,
    i: Option<usize>,
    n: Option<usize>,
    depth: usize,
    m: usize,
) -> Result<LinkSpaceKey> {
    let arity = |flag: &str, value: Option<usize>| {
        value.ok_or_else(|| Error::input(format!("{flag} is required for this kind")))
    };
    Ok(match kind {
        SpaceKindArg::Igraph => LinkSpaceKey::IGraph { i: arity("--i", i)?, m },
        SpaceKindArg::Oriented => LinkSpaceKey::Oriented { i: arity("--i", i)?, m },
        SpaceKindArg::Boundary => LinkSpaceKey::Boundary {
            i: arity("--i", i)?,
            depth,
            m,
        },
        SpaceKindArg::Relation => LinkSpaceKey::Relation {
            n: arity("--n", n)?,
            depth,
            m,
        },
    })
}

/// Dimension and basis of one link space, plus the residue of every
/// equivalence class of graphs with that shape.  Relation spaces skip
/// the residue listing; their generator family is budgeted rather than
/// exhaustive, and the budget is printed instead.
fn describe_space(key: &LinkSpaceKey, spaces: &LinkSpaces) -> Result<String> {
    let space = spaces.space(key)?;
    let mut out = String::new();
    let _ = writeln!(out, "space {key}");
    let _ = writeln!(out, "dimension {}", space.dimension());
    for atom in space.basis_names() {
        let _ = writeln!(out, "basis {atom}");
    }
    let class = match *key {
        LinkSpaceKey::IGraph { i, m } => Some(ObjectClass::igraphs(i, m)),
        LinkSpaceKey::Oriented { i, m } => Some(ObjectClass::oriented(i, m)),
        LinkSpaceKey::Boundary { i, depth, m } => Some(ObjectClass::boundary(i, depth, m)),
        LinkSpaceKey::Relation { .. } => None,
    };
    match class {
        None => {
            let budget = spaces.budget();
            let _ = writeln!(
                out,
                "budget max-relations {} rank-window {}",
                budget.max_relations, budget.rank_window
            );
        }
        Some(class) => match class.members() {
            Err(Error::Resource(msg)) => {
                let _ = writeln!(out, "residues skipped: {msg}");
            }
            Err(other) => return Err(other),
            Ok(members) => {
                for member in members {
                    let residue = space.project(&member.vector(VectorKind::Flag, spaces)?)?;
                    let _ = writeln!(
                        out,
                        "residue {}: {}",
                        member.describe(),
                        residue.render_inline()
                    );
                }
            }
        },
    }
    Ok(out)
}

fn group_vector(path: &Path, spaces: &LinkSpaces) -> Result<FormalVector> {
    let ParsedObject::Group(table) = parse_object(path)? else {
        return Err(Error::input(format!(
            "{} is not a group file",
            path.display()
        )));
    };
    ParsedObject::Group(table)
        .into_class_object()
        .vector(VectorKind::Flag, spaces)
}

fn manage_cache(action: CacheCommand, dir: &Path) -> Result<()> {
    let entries = |dir: &Path| -> Result<Vec<PathBuf>> {
        let mut files = Vec::new();
        let listing = match std::fs::read_dir(dir) {
            Ok(listing) => listing,
            Err(_) => return Ok(files),
        };
        for entry in listing {
            let path = entry
                .map_err(|e| Error::input(format!("cannot list {}: {e}", dir.display())))?
                .path();
            if path.extension().is_some_and(|ext| ext == "space") {
                files.push(path);
            }
        }
        files.sort();
        Ok(files)
    };
    match action {
        CacheCommand::List => {
            let mut out = format!("cache {}\n", dir.display());
            let files = entries(dir)?;
            if files.is_empty() {
                out.push_str("empty\n");
            }
            for path in files {
                let name = path.file_name().expect("cache files have names");
                let _ = writeln!(out, "{}", name.to_string_lossy());
            }
            emit(None, &out)
        }
        CacheCommand::Clear => {
            let files = entries(dir)?;
            let mut removed = 0usize;
            for path in files {
                std::fs::remove_file(&path)
                    .map_err(|e| Error::input(format!("cannot remove {}: {e}", path.display())))?;
                removed += 1;
            }
            emit(None, &format!("removed {removed} cached spaces\n"))
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display()))),
    }
}
