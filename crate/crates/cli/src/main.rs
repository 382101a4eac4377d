use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use toric_core::enumeration::{
    class_count, enumerate_reflexive_subpolytopes, match_reid, point_set_digest, quartic_polytope,
    NfCache,
};
use toric_core::fan::Fan;
use toric_core::formats::{
    emit_fan, emit_palp, emit_palp_matrix, emit_palp_points, parse_fan, parse_palp,
    parse_palp_points, KSDatabase,
};
use toric_core::linear_systems::{
    anticanonical_points, common_variable, is_quasismooth, wps_fan, MonomialSet, WeightSystem,
};
use toric_core::mirrors::{
    bhk_dual_group, bhk_weights, clarke_mirror, equivalence_witness, BHKMatrix,
};
use toric_core::par::Execution;
use toric_core::polytope::{convex_hull, normal_form, LatticePolytope};
use toric_core::reid::{classify_reid, reid_delta, reid_table, verify_reid};
use toric_core::IntVector;

#[derive(Parser)]
#[command(
    name = "toric",
    version,
    about = "Exact computations with lattice polytopes and toric fans"
)]
struct Cli {
    /// Worker threads; 1 runs everything on the main thread.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Queries on a polytope given as a PALP matrix file.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Weighted projective spaces; weights as comma-separated integers.
    #[command(subcommand)]
    Wps(WpsCmd),
    /// Reid's list of 95 weighted projective 3-spaces.
    #[command(subcommand)]
    Reid(ReidCmd),
    /// Reflexive sub-linear-systems of quartics in P^3.
    #[command(subcommand)]
    Quartics(QuarticsCmd),
    #[command(subcommand)]
    Mirror(MirrorCmd),
    /// Star-subdivide a fan until its rays span the lattice hull of the polar of DELTA.
    Resolve { fan: PathBuf, delta: PathBuf },
    /// Check that two fans and a point set satisfy the common-resolution hypotheses.
    Witness {
        fan1: PathBuf,
        fan2: PathBuf,
        xi: PathBuf,
        /// Skip building the star resolutions.
        #[arg(long)]
        no_resolve: bool,
    },
    /// External classification files of reflexive polytopes.
    #[command(subcommand)]
    Ksdb(KsdbCmd),
}

#[derive(Subcommand)]
enum PolytopeCmd {
    /// All lattice points.
    Points {
        file: PathBuf,
    },
    /// Vertices of the lattice hull of the polar.
    Polar {
        file: PathBuf,
    },
    Reflexive {
        file: PathBuf,
    },
    /// Canonical vertex matrix and its digest.
    Nf {
        file: PathBuf,
    },
    /// Whether two polytopes are related by a lattice automorphism.
    Iso {
        file1: PathBuf,
        file2: PathBuf,
    },
}

#[derive(Subcommand)]
enum WpsCmd {
    /// Hull of the anticanonical lattice points.
    Delta { weights: String },
    /// Fletcher's root/pointer criterion. It is sufficient for quasismoothness
    /// of the generic member, and also necessary for the complete system.
    Quasismooth {
        weights: String,
        /// Restrict to the monomials given as lattice points (PALP file).
        #[arg(long)]
        xi: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReidCmd {
    /// Reflexivity, Fletcher criterion and Gorenstein check for all 95 entries.
    Verify {
        #[arg(long)]
        json: bool,
    },
    /// Group the entries by normal form of their polytope.
    Classify,
}

#[derive(Subcommand)]
enum QuarticsCmd {
    Enumerate {
        /// Normal-form cache file, created if missing.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Print one line per hull.
        #[arg(long)]
        records: bool,
    },
    MatchReid {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MirrorCmd {
    /// Mirror rays and monomials for a fan and a set of lattice points.
    Clarke { fan: PathBuf, xi: PathBuf },
    /// Weights, Calabi-Yau condition and dual group of an exponent matrix.
    Bhk { matrix: PathBuf },
}

#[derive(Subcommand)]
enum KsdbCmd {
    /// Parse and validate a classification file.
    Ingest { file: PathBuf },
    /// Position of a polytope's class in a classification file.
    Index {
        #[arg(long)]
        db: PathBuf,
        polytope: Option<PathBuf>,
        /// Compare against the index column of Reid's table instead.
        #[arg(long)]
        reid: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_points(path: &Path) -> Result<Vec<IntVector>> {
    parse_palp_points(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_polytope(path: &Path) -> Result<LatticePolytope> {
    Ok(convex_hull(&read_points(path)?)?)
}

fn read_fan(path: &Path) -> Result<Fan> {
    parse_fan(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn weights(s: &str) -> Result<WeightSystem> {
    s.parse().with_context(|| format!("weights {s:?}"))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn open_cache(path: &Option<PathBuf>) -> Result<NfCache> {
    Ok(match path {
        Some(p) => NfCache::open(p).with_context(|| format!("cache {}", p.display()))?,
        None => NfCache::in_memory(),
    })
}

/// Returns whether every verification in the command passed.
fn run(cmd: Command, exec: Execution) -> Result<bool> {
    match cmd {
        Command::Polytope(c) => polytope(c),
        Command::Wps(c) => wps(c),
        Command::Reid(c) => reid(c, exec),
        Command::Quartics(c) => quartics(c, exec),
        Command::Mirror(c) => mirror(c),
        Command::Resolve { fan, delta } => {
            let f = read_fan(&fan)?;
            let d = read_polytope(&delta)?;
            let r = f.star_resolution(&d)?;
            println!("nabla equals target: true");
            println!("rays: {}", r.rays().len());
            println!("cones: {}", r.max_cones().len());
            print!("{}", emit_fan(&r));
            Ok(true)
        }
        Command::Witness {
            fan1,
            fan2,
            xi,
            no_resolve,
        } => {
            let (f1, f2) = (read_fan(&fan1)?, read_fan(&fan2)?);
            let w = equivalence_witness(&f1, &f2, &read_points(&xi)?, !no_resolve)?;
            for (i, c) in w.containments.iter().enumerate() {
                let p = &c.weakest_xi_pairing;
                let s = &c.weakest_facet_slack;
                println!(
                    "fan{}: min <m,u> = {} at m={} u={}",
                    i + 1,
                    p.value,
                    p.m,
                    p.u
                );
                println!(
                    "fan{}: min facet slack = {} at normal={} u={}",
                    i + 1,
                    s.value,
                    s.m,
                    s.u
                );
            }
            let p = &w.common_polytope;
            println!(
                "common polytope: {} vertices, {} lattice points",
                p.vertices().len(),
                p.lattice_points().len()
            );
            if let Some([r1, r2]) = &w.resolutions {
                println!(
                    "resolved fans: {} and {} rays, nabla equal: true",
                    r1.rays().len(),
                    r2.rays().len()
                );
            }
            print!("{}", emit_palp(p));
            Ok(true)
        }
        Command::Ksdb(c) => ksdb(c, exec),
    }
}

fn polytope(c: PolytopeCmd) -> Result<bool> {
    match c {
        PolytopeCmd::Points { file } => {
            let p = read_polytope(&file)?;
            println!("lattice points: {}", p.lattice_points().len());
            print!("{}", emit_palp_points(p.lattice_points()));
        }
        PolytopeCmd::Polar { file } => {
            let q = read_polytope(&file)?.polar_lattice_hull()?;
            print!("{}", emit_palp(&q));
        }
        PolytopeCmd::Reflexive { file } => {
            println!("reflexive: {}", read_polytope(&file)?.is_reflexive()?);
        }
        PolytopeCmd::Nf { file } => {
            let k = normal_form(&read_polytope(&file)?)?;
            print!("{}", emit_palp_matrix(k.canonical_matrix(), "normal form"));
            println!("digest: {}", k.digest_hex());
        }
        PolytopeCmd::Iso { file1, file2 } => {
            let a = normal_form(&read_polytope(&file1)?)?;
            let b = normal_form(&read_polytope(&file2)?)?;
            println!("isomorphic: {}", a == b);
        }
    }
    Ok(true)
}

fn wps(c: WpsCmd) -> Result<bool> {
    match c {
        WpsCmd::Delta { weights: w } => {
            let w = weights(&w)?;
            let fan = wps_fan(&w)?;
            let d = convex_hull(anticanonical_points(&fan)?.points())?;
            println!("weights: {w}");
            println!("rays: {}", join(fan.rays(), " "));
            println!("lattice points: {}", d.lattice_points().len());
            println!("reflexive: {}", d.is_reflexive()?);
            print!("{}", emit_palp(&d));
        }
        WpsCmd::Quasismooth { weights: w, xi } => {
            let w = weights(&w)?;
            let fan = wps_fan(&w)?;
            let set = match xi {
                Some(path) => MonomialSet::new(&fan, read_points(&path)?)?,
                None => anticanonical_points(&fan)?,
            };
            let v = is_quasismooth(&set);
            println!("weights: {w}");
            println!("monomials: {}", set.len());
            println!("criterion satisfied: {}", v.satisfied);
            if let Some(i) = v.violating {
                println!("violating subset: {{{}}}", join(i, ","));
            }
            match common_variable(&set) {
                Some(i) => println!("common variable: {i}"),
                None => println!("common variable: none"),
            }
        }
    }
    Ok(true)
}

fn reid(c: ReidCmd, exec: Execution) -> Result<bool> {
    match c {
        ReidCmd::Verify { json } => {
            let r = verify_reid(exec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                for c in &r.checks {
                    println!(
                        "{:>2} reflexive={} quasismooth={} gorenstein={} points={} vertices={}",
                        c.number,
                        c.reflexive,
                        c.quasismooth,
                        c.gorenstein,
                        c.lattice_points,
                        c.vertices
                    );
                }
                println!("reflexive: {}/95", r.reflexive_count());
                println!("criterion satisfied: {}/95", r.quasismooth_count());
                println!(
                    "gorenstein: {} ({})",
                    r.gorenstein_numbers().len(),
                    join(r.gorenstein_numbers(), ",")
                );
                println!("failures: {}", join(r.failures(), ","));
            }
            Ok(r.all_pass())
        }
        ReidCmd::Classify => {
            let c = classify_reid(exec)?;
            println!("{} classes", c.classes.len());
            for g in c.nontrivial_groups() {
                println!("group {{{}}}", join(g, ","));
            }
            Ok(true)
        }
    }
}

fn quartics(c: QuarticsCmd, exec: Execution) -> Result<bool> {
    let p = quartic_polytope();
    match c {
        QuarticsCmd::Enumerate { cache, records } => {
            let cache = open_cache(&cache)?;
            let recs = enumerate_reflexive_subpolytopes(&p, exec, &cache)?;
            println!("{} hulls, {} classes", recs.len(), class_count(&recs));
            if records {
                for r in &recs {
                    println!(
                        "hull points={} digest={} nf={}",
                        r.point_set.len(),
                        point_set_digest(&r.point_set),
                        r.nf.digest_hex()
                    );
                }
            }
        }
        QuarticsCmd::MatchReid { cache } => {
            let cache = open_cache(&cache)?;
            let mut recs = enumerate_reflexive_subpolytopes(&p, exec, &cache)?;
            let classification = classify_reid(exec)?;
            let m = match_reid(&mut recs, &classification);
            println!("matching hulls: {}", m.matched_hulls);
            println!("matched classes: {}", m.classes.len());
            println!(
                "families: {} ({})",
                m.families.len(),
                join(&m.families, ",")
            );
            println!("picard labels: {}", m.picard_labels.len());
            for l in &m.picard_labels {
                println!("  {l}");
            }
            for c in &m.classes {
                println!(
                    "class {{{}}} hulls={} example={}",
                    join(&c.members, ","),
                    c.hulls,
                    join(&c.example, " ")
                );
            }
        }
    }
    Ok(true)
}

fn mirror(c: MirrorCmd) -> Result<bool> {
    match c {
        MirrorCmd::Clarke { fan, xi } => {
            let d = clarke_mirror(&read_fan(&fan)?, &read_points(&xi)?)?;
            println!("mirror rays: {}", join(&d.mirror_rays, " "));
            println!("mirror monomials: {}", join(&d.mirror_monomials, " "));
            println!("dropped origin: {}", d.dropped_origin);
            println!("primitivized: {}", join(&d.primitivized, " "));
        }
        MirrorCmd::Bhk { matrix } => {
            let m = parse_palp(&read(&matrix)?)
                .with_context(|| format!("parsing {}", matrix.display()))?;
            let a = BHKMatrix::new(m.rows)?;
            for (name, a) in [("A", a.clone()), ("A^T", a.transpose())] {
                let w = bhk_weights(&a)?;
                println!("{name} weights: {}", w.weights);
                println!("{name} degree: {}", w.degree);
                println!("{name} calabi-yau: {}", w.calabi_yau);
                if w.calabi_yau {
                    println!("{name} dual group: ({})", join(bhk_dual_group(&a)?, ","));
                }
            }
        }
    }
    Ok(true)
}

fn ksdb(c: KsdbCmd, exec: Execution) -> Result<bool> {
    match c {
        KsdbCmd::Ingest { file } => {
            let db = KSDatabase::parse(&read(&file)?, exec)
                .with_context(|| format!("parsing {}", file.display()))?;
            println!("polytopes: {}", db.len());
            println!("dimension: {}", db.dim());
            Ok(true)
        }
        KsdbCmd::Index { db, polytope, reid } => {
            let db = KSDatabase::parse(&read(&db)?, exec)?;
            if let Some(path) = polytope {
                match db.index_of(&read_polytope(&path)?)? {
                    Some(i) => println!("index: {i}"),
                    None => println!("index: not found"),
                }
            }
            if reid {
                let mut mismatches = 0;
                for e in reid_table() {
                    let found = db.index_of(&reid_delta(e)?)?;
                    if found != Some(e.external_index as usize) {
                        mismatches += 1;
                        let f = found.map_or("not found".to_string(), |i| i.to_string());
                        println!(
                            "entry {}: table {} database {}",
                            e.number, e.external_index, f
                        );
                    }
                }
                println!("index mismatches: {mismatches}");
            }
            Ok(true)
        }
    }
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let exec = match cli.jobs {
        Some(0) => bail!("--jobs must be positive"),
        Some(1) => Execution::Sequential,
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()?;
            Execution::Parallel
        }
        None => Execution::default(),
    };
    Ok(if run(cli.command, exec)? {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
