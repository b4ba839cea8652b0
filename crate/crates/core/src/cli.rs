//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::certificate::{build_certificate, DeltaOptions};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, RVector};
use crate::instances::{InstanceSpec, STS2_GROUP};
use crate::ls::{self, iterate_emptiness, Operator};
use crate::par::Exec;
use crate::perm::PermGroup;
use crate::polytope::{HPolytope, VPolytope};
use crate::report::{self, Node};
use crate::sa::sa_emptiness;
use crate::theorem::run_theorem;

#[derive(Parser, Debug)]
#[command(name = "liftcollapse", version, about = "Exact SA / LS / LS0 emptiness for symmetric 0/1 polytopes")]
pub struct Cli {
    /// Largest dimension for brute-force vertex and hull enumeration.
    #[arg(long, global = true)]
    pub guard_vertices: Option<usize>,
    /// Pivot limit per LP.
    #[arg(long, global = true)]
    pub guard_pivots: Option<u64>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance as an H-representation.
    Gen(GenArgs),
    /// Individual checks; the exit code mirrors the answer.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Decide emptiness of the level-k Sherali-Adams relaxation.
    Sa(LevelArgs),
    /// Decide emptiness of k rounds of LS.
    Ls(LevelArgs),
    /// Decide emptiness of k rounds of LS0.
    Ls0(LevelArgs),
    /// Build and verify the explicit level-k certificate.
    Certify(CertifyArgs),
    /// Compare condition A with SA / LS / LS0 emptiness for k = 0..k_max.
    Theorem(TheoremArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Parity,
    CroppedCube,
    KnapsackCover,
    Sts,
    StsFace,
    OrbitHull,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    /// Seed points (V-representation) for orbit-hull.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Group file for orbit-hull.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Output path; sidecars `.grp` and `.obj` are written next to it.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    Feasible {
        polytope: PathBuf,
    },
    IntegerEmpty {
        polytope: PathBuf,
    },
    /// Does P meet every cube face fixing k coordinates?
    Faces {
        polytope: PathBuf,
        #[arg(long)]
        k: usize,
        /// Test only the canonical faces (valid under (k+1)-transitivity).
        #[arg(long)]
        canonical: bool,
    },
    Invariance {
        polytope: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
    Transitivity {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Debug)]
pub struct LevelArgs {
    pub polytope: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Write the witness (lifted vector or closure) here.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    pub polytope: PathBuf,
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Objective file to minimize on each face (`O n` then coefficients).
    #[arg(long)]
    pub objective: Option<PathBuf>,
    /// Accept a polytope with 0/1 points (integral Delta entries warn).
    #[arg(long)]
    pub not_integer_empty: bool,
    /// Feed the face rows to the LP in reverse order.
    #[arg(long)]
    pub reverse_rows: bool,
    /// Write the lifted vector here.
    #[arg(long)]
    pub ybar_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TheoremArgs {
    pub polytope: PathBuf,
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k_max: usize,
}

/// A report and whether the answer was affirmative.
#[derive(Debug)]
pub struct Outcome {
    pub report: Node,
    pub ok: bool,
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn load_polytope(path: &Path) -> Result<HPolytope> {
    HPolytope::parse(&read(path)?)
}

fn load_group(path: &Path) -> Result<PermGroup> {
    PermGroup::parse(&read(path)?)
}

fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

/// Parses `O n` followed by `n` rational coefficients.
pub fn parse_objective(text: &str) -> Result<RVector> {
    let toks: Vec<&str> = text.lines().filter(|l| !l.trim_start().starts_with('#')).flat_map(str::split_whitespace).collect();
    if toks.len() < 2 || toks[0] != "O" {
        return Err(Error::Parse { line: 1, msg: "expected header `O n`".into() });
    }
    let n: usize = toks[1].parse().map_err(|_| Error::Parse { line: 1, msg: "bad dimension".into() })?;
    if toks.len() != n + 2 {
        return Err(Error::Parse { line: 2, msg: format!("expected {n} coefficients") });
    }
    toks[2..].iter().map(|t| parse_rational(t).map_err(|msg| Error::Parse { line: 2, msg })).collect()
}

pub fn objective_text(c: &[crate::exact::Rational]) -> String {
    let body: Vec<String> = c.iter().map(fmt_rational).collect();
    format!("O {}\n{}\n", c.len(), body.join(" "))
}

impl Cli {
    pub fn limits(&self) -> Limits {
        let exec = if self.sequential { Exec::Sequential } else { Exec::default() };
        let mut l = Limits::default().with_exec(exec);
        if let Some(v) = self.guard_vertices {
            l.vertex_dim = v;
            l.hull_dim = v;
        }
        if let Some(p) = self.guard_pivots {
            l.lp.max_pivots = p;
        }
        l
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let limits = cli.limits();
    match &cli.command {
        Command::Gen(a) => gen(a, &limits),
        Command::Check { what } => check(what, &limits),
        Command::Sa(a) => {
            let p = load_polytope(&a.polytope)?;
            let d = sa_emptiness(&p, a.k, &limits)?;
            if let (Some(path), Some(y)) = (&a.witness_out, &d.witness) {
                write(path, &y.to_text())?;
            }
            Ok(Outcome { report: report::sa_node(&d), ok: true })
        }
        Command::Ls(a) => rounds(a, Operator::Ls, &limits),
        Command::Ls0(a) => rounds(a, Operator::Ls0, &limits),
        Command::Certify(a) => certify(a, &limits),
        Command::Theorem(a) => {
            let p = load_polytope(&a.polytope)?;
            let g = load_group(&a.group)?;
            let r = run_theorem(&p, &g, a.k_max, &limits)?;
            Ok(Outcome { ok: r.consistent(), report: report::theorem_node(&r) })
        }
    }
}

fn gen(a: &GenArgs, limits: &Limits) -> Result<Outcome> {
    let need_n = || a.n.ok_or_else(|| Error::InvalidArgument("--n is required for this family".into()));
    let spec = match a.family {
        Family::Parity => InstanceSpec::Parity { n: need_n()? },
        Family::CroppedCube => InstanceSpec::CroppedCube { n: need_n()? },
        Family::KnapsackCover => InstanceSpec::KnapsackCover { n: need_n()? },
        Family::Sts => InstanceSpec::Sts { n: need_n()? },
        Family::StsFace => InstanceSpec::StsOptimalFace,
        Family::OrbitHull => {
            let (Some(pts), Some(grp)) = (&a.points, &a.group) else {
                return Err(Error::InvalidArgument("orbit-hull needs --points and --group".into()));
            };
            let v = VPolytope::parse(&read(pts)?)?;
            InstanceSpec::OrbitHull { points: v.points().to_vec(), group: load_group(grp)? }
        }
    };
    let inst = spec.build(limits)?;
    let text = inst.polytope.to_text();
    let mut rep = Node::map()
        .with("instance", inst.name.as_str())
        .with("n", inst.polytope.n())
        .with("rows", inst.polytope.constraint_rows().len());
    match &a.out {
        Some(path) => {
            write(path, &text)?;
            let group_text = if matches!(a.family, Family::StsFace) || matches!(spec, InstanceSpec::Sts { n: 2 }) {
                STS2_GROUP.to_string()
            } else {
                inst.group.to_text()
            };
            write(&sidecar(path, ".grp"), &group_text)?;
            rep = rep.with("file", path.display().to_string());
            if let Some(c) = &inst.objective {
                write(&sidecar(path, ".obj"), &objective_text(c))?;
                rep = rep.with("objective", report::vector(c));
            }
        }
        None => rep = rep.with("h_representation", text),
    }
    Ok(Outcome { report: rep, ok: true })
}

fn check(what: &CheckCmd, limits: &Limits) -> Result<Outcome> {
    let (name, rep, ok) = match what {
        CheckCmd::Feasible { polytope } => {
            let out = load_polytope(polytope)?.is_feasible(&limits.lp)?;
            let ok = out.is_feasible();
            let mut n = Node::map();
            if let Some(x) = &out.point {
                n = n.with("point", report::vector(x));
            }
            ("feasible", n, ok)
        }
        CheckCmd::IntegerEmpty { polytope } => {
            let ok = load_polytope(polytope)?.is_integer_empty(limits)?;
            ("integer_empty", Node::map(), ok)
        }
        CheckCmd::Faces { polytope, k, canonical } => {
            let f = load_polytope(polytope)?.intersects_all_faces(*k, *canonical, limits)?;
            ("faces", report::faces_node(*k, *canonical, &f), f.holds)
        }
        CheckCmd::Invariance { polytope, group } => {
            let g = load_group(group)?;
            let r = load_polytope(polytope)?.certify_invariance(&g, limits)?;
            let mut n = Node::map().with("generators", g.generators().len());
            if let Some((gi, ri)) = r.counterexample {
                n = n.with("generator", gi + 1).with("row", ri + 1);
            }
            ("invariant", n, r.holds)
        }
        CheckCmd::Transitivity { group, k } => {
            let g = load_group(group)?;
            let ok = g.is_k_transitive(*k, limits.orbit_cap)?;
            ("transitive", Node::map().with("k", *k), ok)
        }
    };
    let rep = match rep {
        Node::Map(mut e) => {
            e.insert(0, (name.to_string(), Node::Bool(ok)));
            Node::Map(e)
        }
        other => other,
    };
    Ok(Outcome { report: rep, ok })
}

fn rounds(a: &LevelArgs, op: Operator, limits: &Limits) -> Result<Outcome> {
    let p = load_polytope(&a.polytope)?;
    let empties = iterate_emptiness(&p, op, a.k, limits)?;
    let list: Vec<Node> = empties
        .iter()
        .enumerate()
        .map(|(i, e)| Node::map().with("round", i + 1).with("empty", *e))
        .collect();
    let mut rep = Node::map()
        .with("operator", if op == Operator::Ls { "LS" } else { "LS0" })
        .with("k", a.k)
        .with("rounds", list)
        .with("empty", empties.last().copied().unwrap_or(false));
    if let Some(path) = &a.witness_out {
        let c = ls::closures(&p, op, a.k, limits)?.pop().unwrap();
        write(path, &c.to_text())?;
        rep = rep.with("closure_file", path.display().to_string());
    }
    Ok(Outcome { report: rep, ok: true })
}

fn certify(a: &CertifyArgs, limits: &Limits) -> Result<Outcome> {
    let p = load_polytope(&a.polytope)?;
    let g = load_group(&a.group)?;
    let degree = g.transitivity_degree(a.k + 1, limits.orbit_cap);
    if degree < a.k + 1 && degree < p.n() {
        return Err(Error::InvalidArgument(format!(
            "the group is only {degree}-transitive; level {} needs {}",
            a.k,
            a.k + 1
        )));
    }
    let objective = match &a.objective {
        Some(path) => Some(parse_objective(&read(path)?)?),
        None => None,
    };
    let opts = DeltaOptions { objective, allow_integral: a.not_integer_empty, reverse_rows: a.reverse_rows };
    match build_certificate(&p, a.k, &opts, limits) {
        Ok(c) => {
            if let Some(path) = &a.ybar_out {
                write(path, &c.ybar.to_text())?;
            }
            Ok(Outcome { report: report::certificate_node(&c), ok: true })
        }
        Err(Error::ConditionAFails(msg)) => Ok(Outcome {
            report: Node::map().with("k", a.k).with("condition_a", false).with("reason", msg),
            ok: false,
        }),
        Err(e) => Err(e),
    }
}

/// Exit code for an error: usage problems 2, guards 3, anything else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Parse { .. } | Error::Dimension(_) | Error::Io(_) => 2,
        e if e.is_resource() => 3,
        _ => 1,
    }
}
