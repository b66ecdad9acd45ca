use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use plumbroot_core::blowdown::blowdown_sequence;
use plumbroot_core::enumerate::DEFAULT_BUDGET;
use plumbroot_core::models::DEFAULT_MODEL_BUDGET;
use plumbroot_core::roots::graded_root;
use plumbroot_core::{GradedRoot, IntersectionForm, PlumbingGraph, RootOptions};
use serde::Serialize;

use crate::dot::root_to_dot;
use crate::error::{exit, Error};
use crate::format::parse_graph;
use crate::report;

const AFTER_HELP: &str = "\
Exit status:
  0  success, every check passed
  1  a check failed (the report names it and carries a witness)
  2  unreadable input, syntax error, invalid graph or bad argument
  3  the intersection form is not negative definite
  4  enumeration budget or level cap exceeded
  5  internal error";

#[derive(Debug, Parser)]
#[command(name = "plumbroot", version, about = "Lattice cohomology checks for negative definite plumbing trees")]
#[command(after_help = AFTER_HELP)]
pub struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RootArgs {
    /// Maximum number of lattice points held by one enumeration.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Refuse roots whose connectivity certificate needs a higher level.
    #[arg(long, allow_hyphen_values = true)]
    pub max_level: Option<i64>,
}

impl RootArgs {
    fn options(&self) -> RootOptions {
        RootOptions { budget: self.budget, max_level: self.max_level, ..RootOptions::default() }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the graph and check negative definiteness.
    Validate { graph: PathBuf },
    /// Graded root of chi_K, with a level table.
    Root {
        graph: PathBuf,
        /// `canonical` or evaluations such as `1,-1,3`.
        #[arg(long, default_value = "canonical", allow_hyphen_values = true)]
        class: String,
        /// Also write the root as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        root: RootArgs,
    },
    /// U-divisibility of psi_0 and the height of its tower.
    Rational {
        graph: PathBuf,
        /// Tower truncation; defaults to the faithful depth of the root.
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        root: RootArgs,
    },
    /// Greedy blowdown trace with proximity data.
    Blowdown { graph: PathBuf },
    /// Exceptional classes, their subset sums and the support of phi_0.
    Sset { graph: PathBuf },
    /// Run every check on the canonical class.
    Verify {
        graph: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        root: RootArgs,
    },
    /// Compare the three finite models on a cube around 0.
    ModelsCheck {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        radius: i64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_MODEL_BUDGET)]
        budget: usize,
    },
    /// Graded root as Graphviz DOT.
    ExportDot {
        graph: PathBuf,
        #[arg(long, default_value = "canonical", allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        root: RootArgs,
    },
}

fn read_graph(path: &Path) -> Result<PlumbingGraph, Error> {
    let io = |source| Error::Io { path: path.display().to_string(), source };
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
    } else {
        text = std::fs::read_to_string(path).map_err(io)?;
    }
    Ok(parse_graph(&text)?)
}

fn load(path: &Path) -> Result<(PlumbingGraph, IntersectionForm), Error> {
    let g = read_graph(path)?;
    let f = IntersectionForm::new(&g)?;
    Ok((g, f))
}

fn root_for(f: &IntersectionForm, class: &str, args: &RootArgs) -> Result<GradedRoot, Error> {
    let k = report::parse_class(f, class)?;
    Ok(graded_root(f, &k, &args.options())?)
}

struct Output<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    file: Option<&'a Path>,
}

impl Output<'_> {
    fn emit(&mut self, body: &str) -> Result<(), Error> {
        let (path, res) = match self.file {
            Some(p) => (p.display().to_string(), std::fs::write(p, body)),
            None => ("<stdout>".to_string(), self.out.write_all(body.as_bytes())),
        };
        res.map_err(|source| Error::Io { path, source })
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Error> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        self.emit(&s)
    }

    fn say(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", line.as_ref());
    }
}

fn level_table(o: &mut Output, root: &GradedRoot) {
    o.say(format!("{:>8}  {:>8}  sizes", "level", "vertices"));
    for (level, n) in root.level_counts().iter().rev() {
        let sizes: Vec<String> = root
            .vertices_at(*level)
            .map(|v| root.vertices[v].size.map_or("?".into(), |s| s.to_string()))
            .collect();
        o.say(format!("{level:>8}  {n:>8}  {}", sizes.join(" ")));
    }
}

fn execute(cli: &Cli, o: &mut Output) -> Result<i32, Error> {
    match &cli.command {
        Command::Validate { graph } => {
            let (g, f) = load(graph)?;
            let r = report::validate_report(&g, &f);
            o.say(format!("ok: {} vertices, det {}, |H| = {}", r.graph.vertices, r.graph.det, r.graph.h_order));
            o.json(&r)?;
        }
        Command::Root { graph, class, dot, root } => {
            let (_, f) = load(graph)?;
            let r = root_for(&f, class, root)?;
            level_table(o, &r);
            o.say(format!(
                "{} root: stable level {}, {} branch points{}",
                if r.is_single_chain() { "single chain" } else { "branched" },
                r.stable_level,
                r.branch_points(),
                if r.floor_level > r.min_level { format!(", levels below {} omitted", r.floor_level) } else { String::new() }
            ));
            if let Some(p) = dot {
                std::fs::write(p, root_to_dot(&r)).map_err(|source| Error::Io { path: p.display().to_string(), source })?;
            }
            o.json(&report::root_report(&r))?;
        }
        Command::Rational { graph, depth, root } => {
            let (_, f) = load(graph)?;
            let r = root_for(&f, "canonical", root)?;
            let rep = report::rational_report(&r, *depth)?;
            o.say(format!(
                "{}: psi0 {} Im U, height {}",
                if rep.single_chain { "rational" } else { "not rational" },
                if rep.psi0_in_im_u { "in" } else { "not in" },
                rep.height
            ));
            o.json(&rep)?;
        }
        Command::Blowdown { graph } => {
            let (g, f) = load(graph)?;
            let t = blowdown_sequence(&f)?;
            let rep = report::blowdown_report(&g, &t)?;
            o.say(format!("{} rounds, {} classes blown down", rep.rounds.len(), rep.classes.len()));
            o.json(&rep)?;
        }
        Command::Sset { graph } => {
            let (_, f) = load(graph)?;
            let rep = report::sset_report(&f, &blowdown_sequence(&f)?)?;
            o.say(format!("|D| = {}, |S| = {}, w = {}", rep.d_classes.len(), rep.size, rep.phi0_w));
            o.json(&rep)?;
        }
        Command::Verify { graph, depth, root } => {
            let (g, f) = load(graph)?;
            let r = root_for(&f, "canonical", root)?;
            let rep = report::verify(&g, &f, &r, *depth, root.budget)?;
            for c in &rep.checks {
                let w = c.witness.as_deref().map(|w| format!(" ({w})")).unwrap_or_default();
                o.say(format!("{:<28} {} {}{w}", c.name, if c.passed { "pass" } else { "FAIL" }, c.value));
            }
            o.json(&rep)?;
            if !rep.passed() {
                return Ok(exit::CHECK_FAILED);
            }
        }
        Command::ModelsCheck { graph, radius, depth, budget } => {
            let (_, f) = load(graph)?;
            if *radius < 0 {
                return Err(Error::Usage("--radius must be nonnegative".into()));
            }
            let rep = report::models_report(&f, *radius, *depth, *budget)?;
            o.say(format!(
                "{} points, dims: char {}, L {}, root {}",
                rep.points, rep.char_dim, rep.l_dim, rep.root_dim
            ));
            o.json(&rep)?;
            if !rep.passed() {
                return Ok(exit::CHECK_FAILED);
            }
        }
        Command::ExportDot { graph, class, root } => {
            let (_, f) = load(graph)?;
            let r = root_for(&f, class, root)?;
            o.say(format!("{} root vertices", r.vertices.len()));
            o.emit(&root_to_dot(&r))?;
        }
    }
    Ok(exit::OK)
}

/// Runs one command; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { exit::INPUT } else { exit::OK };
        }
    };
    let mut o = Output { out, err, file: cli.out.as_deref() };
    match execute(&cli, &mut o) {
        Ok(code) => code,
        Err(e) => {
            o.say(format!("error: {e}"));
            e.exit_code()
        }
    }
}
