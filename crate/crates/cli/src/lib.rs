//! Command-line front end: each subcommand renders a deterministic
//! `key: value` report and maps its verdict to an exit code.

use std::path::PathBuf;

use brane_core::contraction::{self, Condition2, ContractionMap};
use brane_core::geometry::{self, Ambient, Form, SubalgebraPresentation};
use brane_core::monomial::Monomial;
use brane_core::toric::{self, CentralVerdict, RStructure, SComparison};
use brane_core::{
    cancellativity_search, paths_equivalent, superpotential_relations, CancellativityVerdict,
    Equivalence, Error, Labeling, PathWord, RewriteSystem, TilingFile, TorusQuiver, DEFAULT_BUDGET,
};
use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "brane", version, about = "Superpotential algebras of brane tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Budget {
    /// Maximum number of paths explored per equivalence class.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the torus structure of a tiling.
    Validate { file: PathBuf },
    /// List the relation attached to each arrow.
    Relations { file: PathBuf },
    /// Decide whether two paths are equal in the algebra.
    Equiv {
        file: PathBuf,
        /// Arrow ids of the first path.
        #[arg(required = true)]
        p: Vec<String>,
        /// Arrow ids of the second path, after `--`.
        #[arg(last = true, required = true)]
        q: Vec<String>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Search for a failure of cancellation.
    CancelCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Contract arrows and print the resulting tiling.
    Contract {
        file: PathBuf,
        /// Arrows to contract; defaults to the file's `contract` lines.
        arrows: Vec<String>,
        /// Also delete 2-cycles of the contracted tiling.
        #[arg(long)]
        remove_two_cycles: bool,
    },
    /// Check that a contraction is adequate.
    Adequacy {
        file: PathBuf,
        arrows: Vec<String>,
        #[arg(long, default_value_t = 16)]
        len_bound: usize,
    },
    /// Compute the cycle rings S and R.
    Rings {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        len_bound: usize,
        /// Also certify central cycle families for the generators of R.
        #[arg(long)]
        central: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Geometry of R inside S, from a tiling or a direct ring description.
    Geometry(GeometryArgs),
    /// Run every check in sequence.
    FullReport {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 16)]
        len_bound: usize,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Args, Debug)]
struct GeometryArgs {
    /// Tiling whose rings define S and R.
    #[arg(conflicts_with_all = ["vars", "toric", "ideal", "adjoin", "points"])]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    len_bound: usize,
    /// Variables of the polynomial ring, comma separated.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Monomial generators of a toric S, comma separated.
    #[arg(long, value_delimiter = ',')]
    toric: Vec<String>,
    /// Generators of the ideal J in `R = k + J S`, or of I with `--adjoin`.
    #[arg(long, value_delimiter = ',')]
    ideal: Vec<String>,
    /// Generators of R' in `R = k[R', I S]`.
    #[arg(long, value_delimiter = ',', requires = "ideal")]
    adjoin: Vec<String>,
    /// Points to identify, e.g. `0,0;1,1`.
    #[arg(long, conflicts_with_all = ["toric", "ideal", "adjoin"])]
    points: Option<String>,
}

struct Out {
    text: String,
    code: i32,
}

impl Out {
    fn new() -> Self {
        Out {
            text: String::new(),
            code: EXIT_OK,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// Keeps the most severe of the codes seen.
    fn raise(&mut self, code: i32) {
        self.code = self.code.max(code);
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code with the report.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let mut out = Out::new();
    if let Err(e) = dispatch(cli.command, &mut out) {
        out.line(format!("error: {e}"));
        out.code = EXIT_INPUT;
    }
    (out.code, out.text)
}

fn dispatch(cmd: Command, out: &mut Out) -> Result<(), Error> {
    match cmd {
        Command::Validate { file } => {
            let (f, q) = load(&file)?;
            validate(&f, &q, out)
        }
        Command::Relations { file } => {
            let (_, q) = load(&file)?;
            relations(&q, out)
        }
        Command::Equiv { file, p, q, budget } => {
            let (_, quiver) = load(&file)?;
            equiv(&quiver, &p, &q, budget.budget, out)
        }
        Command::CancelCheck {
            file,
            max_len,
            budget,
        } => {
            let (_, q) = load(&file)?;
            cancel_check(&q, max_len, budget.budget, out)
        }
        Command::Contract {
            file,
            arrows,
            remove_two_cycles,
        } => {
            let (f, q) = load(&file)?;
            contract(&f, &q, &arrows, remove_two_cycles, out)
        }
        Command::Adequacy {
            file,
            arrows,
            len_bound,
        } => {
            let (f, q) = load(&file)?;
            let lab = require_labels(&f, &q)?;
            let cmap = contraction_of(&f, &q, &arrows)?;
            adequacy(&cmap, &lab, len_bound, out)
        }
        Command::Rings {
            file,
            len_bound,
            central,
            budget,
        } => {
            let (f, q) = load(&file)?;
            let lab = require_labels(&f, &q)?;
            let rings = rings(&q, &lab, len_bound, out);
            if central {
                central_elements(&q, &lab, &rings, len_bound, budget.budget, out)?;
            }
            Ok(())
        }
        Command::Geometry(args) => geometry_cmd(args, out),
        Command::FullReport {
            file,
            max_len,
            len_bound,
            budget,
        } => full_report(&file, max_len, len_bound, budget.budget, out),
    }
}

fn load(path: &PathBuf) -> Result<(TilingFile, TorusQuiver), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let f = TilingFile::parse(&text).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Malformed(format!("{}:{line}:{column}: {message}", path.display())),
        other => other,
    })?;
    let q = f.quiver()?;
    Ok((f, q))
}

fn require_labels(f: &TilingFile, q: &TorusQuiver) -> Result<Labeling, Error> {
    f.labeling(q)?
        .ok_or_else(|| Error::Malformed("tiling has neither labels nor grid coordinates".into()))
}

fn system(q: &TorusQuiver) -> Result<RewriteSystem, Error> {
    let rels = superpotential_relations(q)?;
    RewriteSystem::new(q, &rels)
}

fn ids(q: &TorusQuiver, arrows: &[usize]) -> String {
    arrows
        .iter()
        .map(|&a| q.arrow(a).id.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn validate(f: &TilingFile, q: &TorusQuiver, out: &mut Out) -> Result<(), Error> {
    let report = q.validate();
    out.line(format!("tiling: {}", q.name()));
    out.line(format!("vertices: {}", q.vertices().len()));
    out.line(format!("arrows: {}", q.arrows().len()));
    out.line(format!("faces: {}", q.faces().len()));
    out.line(format!("euler-characteristic: {}", q.euler_characteristic()));
    for v in &report.violations {
        out.line(format!("violation: {v}"));
    }
    out.line(format!("valid: {}", if report.ok() { "yes" } else { "no" }));
    if !report.ok() {
        out.raise(EXIT_FALSIFIED);
        return Ok(());
    }
    if let Some(lab) = f.labeling(q)? {
        let images = lab.face_images(q);
        match lab.sigma(q) {
            Some(s) if lab.is_sigma_uniform(q) => out.line(format!("sigma: {}", lab.format(&s))),
            _ => {
                let list: Vec<String> = images.iter().map(|m| lab.format(m)).collect();
                out.line(format!("sigma: not uniform ({})", list.join(", ")));
                out.raise(EXIT_FALSIFIED);
            }
        }
    }
    Ok(())
}

fn relations(q: &TorusQuiver, out: &mut Out) -> Result<(), Error> {
    for r in superpotential_relations(q)? {
        out.line(format!(
            "{}: {} = {}",
            q.arrow(r.witness).id,
            r.left.display(q),
            r.right.display(q)
        ));
    }
    Ok(())
}

fn parse_path(q: &TorusQuiver, ids: &[String]) -> Result<PathWord, Error> {
    if let [single] = ids {
        if let Some(v) = single.strip_prefix('@') {
            let v = q
                .vertex_index(v)
                .ok_or_else(|| Error::Malformed(format!("unknown vertex {v}")))?;
            return Ok(PathWord::empty(v));
        }
    }
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    PathWord::from_ids(q, &refs)
}

fn equiv(q: &TorusQuiver, p: &[String], r: &[String], budget: usize, out: &mut Out) -> Result<(), Error> {
    let (p, r) = (parse_path(q, p)?, parse_path(q, r)?);
    let sys = system(q)?;
    let verdict = paths_equivalent(q, &sys, &p, &r, budget);
    out.line(verdict.as_str());
    out.raise(match verdict {
        Equivalence::Equivalent => EXIT_OK,
        Equivalence::Inequivalent => EXIT_FALSIFIED,
        Equivalence::BudgetExceeded => EXIT_INCONCLUSIVE,
    });
    Ok(())
}

fn cancel_check(q: &TorusQuiver, max_len: usize, budget: usize, out: &mut Out) -> Result<(), Error> {
    let sys = system(q)?;
    out.line(format!("max-len: {max_len}"));
    match cancellativity_search(q, &sys, max_len, budget) {
        CancellativityVerdict::NoCounterexample { max_len } => {
            out.line(format!("no counterexample up to {max_len}"));
        }
        CancellativityVerdict::Counterexample(cx) => {
            let (pa, qa) = cx.extended(q);
            out.line(format!(
                "counterexample: p = {}, q = {}, arrow {} {}",
                cx.p.display(q),
                cx.q.display(q),
                q.arrow(cx.arrow).id,
                cx.side.as_str()
            ));
            out.line(format!("equal: {} = {}", pa.display(q), qa.display(q)));
            out.line(format!("not equal: {} != {}", cx.p.display(q), cx.q.display(q)));
            out.raise(EXIT_FALSIFIED);
        }
        CancellativityVerdict::Inconclusive { max_len, skipped } => {
            out.line(format!(
                "inconclusive up to {max_len}: {skipped} classes exceeded the budget"
            ));
            out.raise(EXIT_INCONCLUSIVE);
        }
    }
    Ok(())
}

fn contraction_of(f: &TilingFile, q: &TorusQuiver, arrows: &[String]) -> Result<ContractionMap, Error> {
    let arrows = if arrows.is_empty() { f.contracted() } else { arrows.to_vec() };
    if arrows.is_empty() {
        return Err(Error::Malformed("no arrows to contract".into()));
    }
    contraction::contract(q, &arrows)
}

fn contract(
    f: &TilingFile,
    q: &TorusQuiver,
    arrows: &[String],
    remove_two_cycles: bool,
    out: &mut Out,
) -> Result<(), Error> {
    let cmap = contraction_of(f, q, arrows)?;
    let labels = match f.labeling(q)? {
        Some(l) => cmap.push_labels(&l).ok(),
        None => None,
    };
    out.line(format!("contracted: {}", ids(q, &cmap.contracted)));
    for (v, id) in q.vertices().iter().enumerate() {
        let t = &cmap.target.vertices()[cmap.vertex_merge[v]];
        if t != id {
            out.line(format!("merged: {id} -> {t}"));
        }
    }
    let valid = cmap.target.validate().ok();
    out.line(format!("valid: {}", if valid { "yes" } else { "no" }));
    out.line("");
    out.text
        .push_str(&TilingFile::from_quiver(&cmap.target, labels.as_ref()).to_text());
    if remove_two_cycles {
        let removal = contraction::remove_two_cycles(&cmap.target);
        out.line("");
        for (a, path) in &removal.substitutions {
            out.line(format!("removed: {a} = {}", path.join(" ")));
        }
        out.line("");
        let reduced_labels = labels.as_ref().and_then(|l| {
            let by_id: Vec<(String, Monomial)> = removal
                .quiver
                .arrows()
                .iter()
                .map(|a| {
                    let i = cmap.target.arrow_index(&a.id).expect("surviving arrow");
                    (a.id.clone(), l.label(i).clone())
                })
                .collect();
            Labeling::new(&removal.quiver, l.variables().to_vec(), &by_id).ok()
        });
        out.text
            .push_str(&TilingFile::from_quiver(&removal.quiver, reduced_labels.as_ref()).to_text());
    }
    if !valid {
        out.raise(EXIT_FALSIFIED);
    }
    Ok(())
}

fn adequacy(cmap: &ContractionMap, source_labels: &Labeling, len_bound: usize, out: &mut Out) -> Result<(), Error> {
    let q = &cmap.source;
    let target_labels = cmap.push_labels(source_labels)?;
    let report = contraction::check_adequacy(cmap, &target_labels, len_bound)?;
    out.line(format!("len-bound: {len_bound}"));
    out.line(format!("contracted: {}", ids(q, &cmap.contracted)));
    out.line(format!("condition-1: {}", report.condition1.as_str()));
    let verdict = report.condition2.first().map(|(_, c)| c.clone());
    for (v, c) in &report.condition2 {
        out.line(format!("condition-2 at {v}: {}", c.as_str()));
    }
    match &verdict {
        Some(Condition2::Verified(ws)) => {
            for w in ws {
                out.line(format!(
                    "witness: {} image {} homology ({}, {})",
                    w.cycle.display(q),
                    target_labels.format(&w.image),
                    w.homology[0],
                    w.homology[1]
                ));
            }
            out.line("adequate: yes");
        }
        Some(Condition2::Failed { direction }) => {
            out.line(format!(
                "unreachable-direction: ({}, {})",
                direction[0], direction[1]
            ));
            out.line("adequate: no");
            out.raise(EXIT_FALSIFIED);
        }
        Some(Condition2::Inconclusive { len_bound }) => {
            out.line(format!("adequate: inconclusive at len-bound {len_bound}"));
            out.raise(EXIT_INCONCLUSIVE);
        }
        None => {}
    }
    Ok(())
}

fn rings(q: &TorusQuiver, lab: &Labeling, len_bound: usize, out: &mut Out) -> toric::Rings {
    let rings = toric::compute_rings(q, lab, len_bound);
    out.line(format!("len-bound: {len_bound}"));
    out.line(format!("complete-degree: {}", rings.s.complete_degree));
    out.line(rings.s_line());
    out.line(rings.r_line());
    if let RStructure::Generated(_) = rings.structure {
        out.line("R is not of the form k + J S up to the complete degree");
    }
    if rings.structure == RStructure::Inconclusive {
        out.raise(EXIT_INCONCLUSIVE);
    }
    rings
}

fn central_elements(
    q: &TorusQuiver,
    lab: &Labeling,
    rings: &toric::Rings,
    len_bound: usize,
    budget: usize,
    out: &mut Out,
) -> Result<(), Error> {
    let sys = system(q)?;
    let mut gammas: Vec<Monomial> = match &rings.structure {
        RStructure::KPlusIdeal(j) => j.clone(),
        _ => rings.r.generators.clone(),
    };
    if let Some(s) = lab.sigma(q) {
        if !gammas.contains(&s) {
            gammas.push(s);
        }
    }
    for c in toric::central_elements(q, &sys, lab, &gammas, len_bound, budget)? {
        let status = match c.verdict {
            CentralVerdict::Certified => "certified".to_string(),
            CentralVerdict::Missing(v) => format!("no cycle at {}", q.vertices()[v]),
            CentralVerdict::Failed(a) => {
                out.raise(EXIT_FALSIFIED);
                format!("fails at arrow {}", q.arrow(a).id)
            }
            CentralVerdict::Inconclusive(a) => {
                out.raise(EXIT_INCONCLUSIVE);
                format!("inconclusive at arrow {}", q.arrow(a).id)
            }
        };
        out.line(format!("central {}: {status}", lab.format(&c.gamma)));
        for cyc in &c.cycles {
            out.line(format!("  {}", cyc.display(q)));
        }
    }
    Ok(())
}

fn parse_monomials(texts: &[String], vars: &[String]) -> Result<Vec<Monomial>, Error> {
    texts.iter().map(|t| Monomial::parse(t.trim(), vars)).collect()
}

fn parse_points(text: &str) -> Result<Vec<Vec<Rational64>>, Error> {
    text.split(';')
        .map(|p| {
            p.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<Rational64>()
                        .map_err(|_| Error::Malformed(format!("bad coordinate {c:?}")))
                })
                .collect()
        })
        .collect()
}

fn presentation_from_rings(rings: &toric::Rings) -> Result<SubalgebraPresentation, Error> {
    let ambient = Ambient::Toric {
        variables: rings.s.variables.clone(),
        generators: rings.s.generators.clone(),
    };
    let n = rings.s.variables.len();
    let form = match &rings.structure {
        RStructure::KPlusIdeal(j) => Form::KPlusIdeal(j.clone()),
        RStructure::EqualToS => Form::KPlusIdeal(vec![Monomial::one(n)]),
        RStructure::Generated(_) | RStructure::Inconclusive => {
            return Err(Error::Unsupported("R has no presentation R = k + J S".into()))
        }
    };
    SubalgebraPresentation::new(ambient, form)
}

fn geometry_cmd(args: GeometryArgs, out: &mut Out) -> Result<(), Error> {
    let pres = if let Some(file) = &args.file {
        let (f, q) = load(file)?;
        let lab = require_labels(&f, &q)?;
        let rings = toric::compute_rings(&q, &lab, args.len_bound);
        out.line(format!("len-bound: {}", args.len_bound));
        presentation_from_rings(&rings).inspect_err(|_| out.raise(EXIT_INCONCLUSIVE))?
    } else {
        if args.vars.is_empty() {
            return Err(Error::Malformed("give a tiling or --vars".into()));
        }
        let vars = args.vars.clone();
        if let Some(points) = &args.points {
            geometry::finite_point_gluing(vars, parse_points(points)?)?
        } else {
            let ambient = if args.toric.is_empty() {
                Ambient::Polynomial {
                    variables: vars.clone(),
                }
            } else {
                Ambient::Toric {
                    generators: parse_monomials(&args.toric, &vars)?,
                    variables: vars.clone(),
                }
            };
            let ideal = parse_monomials(&args.ideal, &vars)?;
            let form = if args.adjoin.is_empty() {
                Form::KPlusIdeal(ideal)
            } else {
                Form::KAdjoin {
                    subalgebra: parse_monomials(&args.adjoin, &vars)?,
                    ideal,
                }
            };
            SubalgebraPresentation::new(ambient, form)?
        }
    };
    out.line(geometry::geometry_report(&pres).to_string());
    Ok(())
}

fn section(out: &mut Out, name: &str) {
    if !out.text.is_empty() {
        out.line("");
    }
    out.line(format!("[{name}]"));
}

/// Severity policy: an invalid tiling or a failed adequacy check is a
/// falsification; a found cancellation counterexample is reported but is an
/// expected outcome for contractible tilings and does not raise the code.
fn full_report(file: &PathBuf, max_len: usize, len_bound: usize, budget: usize, out: &mut Out) -> Result<(), Error> {
    let (f, q) = load(file)?;
    section(out, "validate");
    validate(&f, &q, out)?;
    if out.code != EXIT_OK {
        return Ok(());
    }
    section(out, "relations");
    relations(&q, out)?;
    section(out, "cancel-check");
    let before = out.code;
    cancel_check(&q, max_len, budget, out)?;
    if out.code == EXIT_FALSIFIED {
        out.code = before;
    }
    let lab = f.labeling(&q)?;
    let cmap = if f.contracted().is_empty() {
        None
    } else {
        section(out, "contract");
        contract(&f, &q, &[], false, out)?;
        Some(contraction_of(&f, &q, &[])?)
    };
    let Some(lab) = lab else {
        out.line("");
        out.line("no labels: rings and geometry skipped");
        return Ok(());
    };
    if let Some(cmap) = &cmap {
        section(out, "adequacy");
        adequacy(cmap, &lab, len_bound, out)?;
    }
    section(out, "rings");
    let rings = rings(&q, &lab, len_bound, out);
    central_elements(&q, &lab, &rings, len_bound, budget, out)?;
    if let Some(cmap) = &cmap {
        section(out, "compare-s");
        let target_labels = cmap.push_labels(&lab)?;
        let (cmp, _, target) = toric::compare_s_sprime(cmap, &lab, &target_labels, len_bound);
        out.line(format!("S' {}", &target.s_line()[2..]));
        match cmp {
            SComparison::Equal { degree } => out.line(format!("S = S' up to degree {degree}")),
            SComparison::Differ { witness, in_target } => {
                let side = if in_target { "S' \\ S" } else { "S \\ S'" };
                out.line(format!("S != S': {} in {side}", lab.format(&witness)));
            }
        }
    }
    section(out, "geometry");
    match presentation_from_rings(&rings) {
        Ok(pres) => out.line(geometry::geometry_report(&pres).to_string()),
        Err(e) => {
            out.line(format!("skipped: {e}"));
            out.raise(EXIT_INCONCLUSIVE);
        }
    }
    Ok(())
}
