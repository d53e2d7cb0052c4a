use std::fmt::Write as _;
use std::path::Path;

use scwol_core::coarse::asdim::DimensionProbe;
use scwol_core::coarse::propa::{interior_points, strictly_decreasing_to_zero};
use scwol_core::coarse::{
    ball_averaging_witness, check_certificate, check_witness, check_witness_at, dimension_bound_report, finite_union, probe_dimension,
    union_harness, AsdimCertificate, Rational, SearchLimits, SearchOutcome,
};
use scwol_core::complex::ComplexOfGroups;
use scwol_core::development::{check_prop1, develop_ball, group_ball, r_stabilizer, DevelopError};
use scwol_core::metric::FiniteMetricSpace;
use scwol_core::project::{Project, ProjectFile};
use scwol_core::report::ValidationReport;
use scwol_core::words::{display_letters, Pi1Presentation, WordEquality, WordError, DEFAULT_BUDGET};

use crate::union_config::{Mode, UnionConfig};
use crate::{CogCommand, Command, Format, WordCommand, WordOpts};

/// Why a command did not succeed, mapped onto the exit status.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Undecided(String),
    Violation(String),
    Limit(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Undecided(_) => 3,
            Failure::Violation(_) => 4,
            Failure::Limit(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Undecided(m) | Failure::Violation(m) | Failure::Limit(m) => m,
        }
    }
}

impl From<DevelopError> for Failure {
    fn from(e: DevelopError) -> Self {
        match e {
            DevelopError::Undecided { .. } => Failure::Undecided(e.to_string()),
            DevelopError::Inconsistent(_) => Failure::Violation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        match e {
            WordError::InvalidComplex(_) => Failure::Violation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { project, out } => validate(&project, out),
        Command::Skeleton { project, out } => skeleton(&project, out),
        Command::Cog { command: CogCommand::Validate { project, out } } => cog_validate(&project, out),
        Command::Cog { command: CogCommand::Induce { project, action } } => cog_induce(&project, action.as_deref()),
        Command::Word { command: WordCommand::Reduce { project, word, words } } => word_reduce(&project, &word, &words),
        Command::Word { command: WordCommand::Eq { project, u, v, words } } => word_eq(&project, &u, &v, &words),
        Command::Develop { project, radius, out, words } => develop(&project, radius, out, &words),
        Command::Stabilizer { project, radius, out, words } => stabilizer(&project, radius, out, &words),
        Command::Prop1Check { project, radius, out, words } => prop1(&project, radius, out, &words),
        Command::Ball { project, radius, out, words } => ball(&project, radius, out, &words),
        Command::Asdim { metric, n, scale, bound, node_limit, out } => asdim(&metric, n, scale, bound, limits(node_limit), out),
        Command::Propa { metric, nmax, k, center, radius, out } => propa(&metric, nmax, k, center.as_deref(), radius, out),
        Command::UnionCheck { config, node_limit } => union_check(&config, limits(node_limit)),
        Command::Report { project, radius, scale, bound, nmax, node_limit, words } => {
            report(&project, ReportArgs { radius, scale, bound, nmax, limits: limits(node_limit), budget: words.budget })
        }
    }
}

fn limits(node_limit: u64) -> SearchLimits {
    if node_limit == 0 {
        SearchLimits::unlimited()
    } else {
        SearchLimits { node_limit: Some(node_limit) }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Project, Failure> {
    Project::load(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_metric(path: &Path) -> Result<FiniteMetricSpace, Failure> {
    FiniteMetricSpace::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn unsupported(out: Format, what: &str) -> Failure {
    Failure::Input(format!("{what} has no {out:?} output").to_lowercase())
}

fn json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn print_report(r: &ValidationReport, out: Format) -> Outcome {
    match out {
        Format::Text => print!("{r}"),
        Format::Json => json(&serde_json::to_value(r).expect("reports serialize")),
        Format::Dot => return Err(unsupported(out, "validation")),
    }
    if r.is_valid() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} violation(s)", r.violations.len())))
    }
}

fn validate(path: &Path, out: Format) -> Outcome {
    print_report(&load(path)?.validate(), out)
}

fn skeleton(path: &Path, out: Format) -> Outcome {
    let project = load(path)?;
    let s = &project.scwol;
    match out {
        Format::Dot => print!("{}", s.to_dot(&project.name)),
        Format::Json => {
            let m = s.one_skeleton().map_err(|e| Failure::Input(e.to_string()))?;
            println!("{}", m.to_json());
        }
        Format::Text => {
            println!("vertices: {}", s.num_vertices());
            println!("edges: {}", s.num_edges());
            println!("dimension: {}", s.dimension());
            for a in s.edges() {
                println!("edge {}: {} -> {}", s.edge_name(a), s.vertex_name(s.init(a)), s.vertex_name(s.term(a)));
            }
            for (a, b, ab) in s.compositions() {
                println!("compose {} {} = {}", s.edge_name(a), s.edge_name(b), s.edge_name(ab));
            }
        }
    }
    Ok(())
}

fn complex(project: &Project) -> Result<ComplexOfGroups, Failure> {
    project.complex_of_groups().map_err(|e| Failure::Violation(e.to_string()))
}

fn cog_validate(path: &Path, out: Format) -> Outcome {
    let project = load(path)?;
    let r = project.scwol.validate();
    if !r.is_valid() {
        return print_report(&r, out);
    }
    let c = complex(&project)?;
    print_report(&c.validate(), out)
}

/// Merges the `[action]` table and any `[groups]` of `action` into the project file.
fn merge_action(project: &str, action: &str) -> Result<String, Failure> {
    let bad = |e: toml::de::Error| Failure::Input(e.to_string());
    let mut base: toml::Table = project.parse().map_err(bad)?;
    let extra: toml::Table = action.parse().map_err(bad)?;
    for (key, value) in extra {
        match (key.as_str(), value) {
            ("groups", toml::Value::Table(groups)) => {
                let entry = base.entry("groups").or_insert_with(|| toml::Value::Table(toml::Table::new()));
                let Some(t) = entry.as_table_mut() else {
                    return Err(Failure::Input("`groups` must be a table".into()));
                };
                t.extend(groups);
            }
            ("action", v) => {
                base.insert("action".into(), v);
            }
            (k, _) => return Err(Failure::Input(format!("unexpected key `{k}` in action file"))),
        }
    }
    Ok(toml::to_string(&base).expect("tables serialize"))
}

fn cog_induce(path: &Path, action: Option<&Path>) -> Outcome {
    let mut text = read(path)?;
    if let Some(a) = action {
        text = merge_action(&text, &read(a)?)?;
    }
    let project = Project::load(&text).map_err(|e| Failure::Input(e.to_string()))?;
    if project.action.is_none() {
        return Err(Failure::Input("no action declared".into()));
    }
    let r = project.validate();
    if !r.is_valid() {
        eprint!("{r}");
        return Err(Failure::Violation("the action is invalid".into()));
    }
    let induced = project.induced().map_err(|e| Failure::Violation(e.to_string()))?.expect("action present");
    let mut params = project.params.clone();
    params.base = None;
    let file = ProjectFile::from_complex(&format!("{}-quotient", project.name), &induced.complex, params);
    print!("{}", file.to_toml());
    Ok(())
}

struct Session {
    project: Project,
    presentation: Pi1Presentation,
    budget: usize,
}

fn session(path: &Path, words: Option<usize>) -> Result<Session, Failure> {
    let project = load(path)?;
    let r = project.validate();
    if !r.is_valid() {
        eprint!("{r}");
        return Err(Failure::Violation("the project does not satisfy the axioms".into()));
    }
    let c = complex(&project)?;
    let base = project.base_vertex(&c).map_err(|e| Failure::Input(e.to_string()))?;
    let presentation = Pi1Presentation::new(c, base)?;
    let budget = words.or(project.params.budget).unwrap_or(DEFAULT_BUDGET);
    Ok(Session { project, presentation, budget })
}

impl Session {
    fn radius(&self, flag: Option<u32>) -> u32 {
        flag.or(self.project.params.radius).unwrap_or(3)
    }
}

fn word_reduce(path: &Path, word: &str, opts: &WordOpts) -> Outcome {
    let s = session(path, opts.budget)?;
    let p = &s.presentation;
    let c = p.complex();
    let w = p.parse_loop(word)?;
    let r = p.reduce(&w, s.budget);
    println!("input: {}", w.display(c));
    println!("reduced: {}", r.word.display(c));
    println!("tree-form: {}", display_letters(&p.collapse(&r.word), c));
    println!("path-length: {}", r.word.path_length());
    println!("explored: {}", r.explored);
    if r.certified() {
        println!("status: certified");
        Ok(())
    } else {
        println!("status: budget-exhausted");
        Err(Failure::Undecided(format!("reduction not certified within {} words", s.budget)))
    }
}

fn word_eq(path: &Path, u: &str, v: &str, opts: &WordOpts) -> Outcome {
    let s = session(path, opts.budget)?;
    let p = &s.presentation;
    let (u, v) = (p.parse_loop(u)?, p.parse_loop(v)?);
    match p.word_equal(&u, &v, s.budget) {
        WordEquality::Equal => println!("equal"),
        WordEquality::NotEqual => println!("not-equal"),
        WordEquality::ReducedNonEmpty => {
            println!("undecided");
            return Err(Failure::Undecided("u v^-1 reduced to a nonempty word, which does not prove inequality in dimension 2".into()));
        }
        WordEquality::Undecided => {
            println!("undecided");
            return Err(Failure::Undecided(format!("no certified reduction within {} words", s.budget)));
        }
    }
    Ok(())
}

fn develop(path: &Path, radius: Option<u32>, out: Format, opts: &WordOpts) -> Outcome {
    let s = session(path, opts.budget)?;
    let p = &s.presentation;
    let ball = develop_ball(p, s.radius(radius), s.budget)?;
    match out {
        Format::Dot => print!("{}", ball.to_dot(p)),
        Format::Json => json(&ball.to_json(p)),
        Format::Text => {
            println!("radius: {}", ball.radius);
            println!("vertices: {}", ball.len());
            println!("edges: {}", ball.edges.len());
            println!("spheres: {}", join(&ball.sphere_sizes()));
            for i in 0..ball.len() {
                println!("vertex {i}: {} distance {}", ball.label(p, i), ball.distance[i]);
            }
            for e in &ball.edges {
                println!("edge {} -> {}: {}", e.init, e.term, p.scwol().edge_name(e.edge));
            }
        }
    }
    Ok(())
}

fn stabilizer(path: &Path, radius: Option<u32>, out: Format, opts: &WordOpts) -> Outcome {
    let s = session(path, opts.budget)?;
    let p = &s.presentation;
    let r = s.radius(radius);
    let ball = develop_ball(p, r, s.budget)?;
    let elements: Vec<String> = r_stabilizer(p, &ball, r, s.budget)?.iter().map(|w| w.display(p.complex()).to_string()).collect();
    match out {
        Format::Json => json(&serde_json::json!({ "radius": r, "size": elements.len(), "elements": elements })),
        Format::Text => {
            println!("radius: {r}");
            println!("size: {}", elements.len());
            for e in elements {
                println!("element: {e}");
            }
        }
        Format::Dot => return Err(unsupported(out, "stabilizer")),
    }
    Ok(())
}

fn prop1(path: &Path, radius: Option<u32>, out: Format, opts: &WordOpts) -> Outcome {
    let s = session(path, opts.budget)?;
    let r = check_prop1(&s.presentation, s.radius(radius), s.budget)?;
    match out {
        Format::Json => json(&serde_json::to_value(&r).expect("reports serialize")),
        Format::Text => {
            println!("radius: {}", r.radius);
            println!("stabilizer: {}", r.stabilizer_size);
            println!("short-loops: {}", r.short_loops);
            println!("undecided: {}", r.undecided.len());
            for w in &r.only_in_stabilizer {
                println!("only-in-stabilizer: {w}");
            }
            for w in &r.only_in_short_loops {
                println!("only-in-short-loops: {w}");
            }
            for w in &r.undecided {
                println!("undecided-word: {w}");
            }
            println!("holds: {}", r.holds());
        }
        Format::Dot => return Err(unsupported(out, "prop1-check")),
    }
    if !r.holds() {
        Err(Failure::Violation("the stabilizer and the short loops differ".into()))
    } else if !r.undecided.is_empty() {
        Err(Failure::Undecided(format!("{} words could not be certified", r.undecided.len())))
    } else {
        Ok(())
    }
}

fn ball(path: &Path, radius: Option<u32>, out: Format, opts: &WordOpts) -> Outcome {
    let s = session(path, opts.budget)?;
    let b = group_ball(&s.presentation, s.radius(radius), s.budget)?;
    match out {
        Format::Json => println!("{}", b.space.to_json()),
        Format::Text => {
            println!("radius: {}", b.radius);
            println!("points: {}", b.space.len());
            println!("diameter: {}", b.space.diameter());
            for (i, n) in b.norms.iter().enumerate() {
                println!("element {i}: {} norm {n}", b.space.label(i));
            }
        }
        Format::Dot => return Err(unsupported(out, "ball")),
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn certificate_text(x: &FiniteMetricSpace, c: &AsdimCertificate) -> String {
    let mut out = String::new();
    for (i, family) in c.families.iter().enumerate() {
        let sets: Vec<String> =
            family.iter().map(|set| format!("{{{}}}", set.iter().map(|&p| x.label(p)).collect::<Vec<_>>().join(", "))).collect();
        let _ = writeln!(out, "family {i}: {}", sets.join(" "));
    }
    out
}

fn asdim(path: &Path, n: usize, scale: u32, bound: u32, limits: SearchLimits, out: Format) -> Outcome {
    let x = load_metric(path)?;
    if scale == 0 || bound == 0 {
        return Err(Failure::Input("scale and bound must be positive".into()));
    }
    let outcome = scwol_core::coarse::find_asdim_certificate(&x, n, scale, bound, limits);
    let (name, cert) = match &outcome {
        SearchOutcome::Found(c) => ("found", Some(c)),
        SearchOutcome::Impossible => ("impossible", None),
        SearchOutcome::LimitReached { .. } => ("limit-reached", None),
    };
    match out {
        Format::Json => json(&serde_json::json!({
            "points": x.len(), "families": n + 1, "scale": scale, "bound": bound,
            "outcome": name, "certificate": cert,
        })),
        Format::Text => {
            println!("points: {}", x.len());
            println!("families: {}", n + 1);
            println!("scale: {scale}");
            println!("bound: {bound}");
            println!("outcome: {name}");
            if let Some(c) = cert {
                println!("max-diameter: {}", c.max_diameter(&x));
                print!("{}", certificate_text(&x, c));
            }
        }
        Format::Dot => return Err(unsupported(out, "asdim")),
    }
    match outcome {
        SearchOutcome::Found(c) => {
            let r = check_certificate(&x, &c, Some(n));
            if r.is_valid() {
                Ok(())
            } else {
                Err(Failure::Limit(format!("the search returned an invalid certificate:\n{r}")))
            }
        }
        SearchOutcome::Impossible => Err(Failure::Violation(format!("no certificate for n = {n} at (R, D) = ({scale}, {bound})"))),
        SearchOutcome::LimitReached { nodes } => Err(Failure::Limit(format!("search stopped after {nodes} nodes"))),
    }
}

fn find_point(x: &FiniteMetricSpace, name: &str) -> Result<usize, Failure> {
    x.labels()
        .iter()
        .position(|l| l == name)
        .or_else(|| name.parse::<usize>().ok().filter(|&i| i < x.len()))
        .ok_or_else(|| Failure::Input(format!("no point `{name}`")))
}

fn propa(path: &Path, nmax: u32, k: u32, center: Option<&str>, radius: Option<u32>, out: Format) -> Outcome {
    let x = load_metric(path)?;
    if nmax == 0 {
        return Err(Failure::Input("--nmax must be at least 1".into()));
    }
    let center = center.map(|c| find_point(&x, c)).transpose()?;
    let mut rows = Vec::new();
    for n in 1..=nmax {
        let w = ball_averaging_witness(&x, n);
        let check = match (center, radius) {
            (Some(c), Some(r)) => check_witness_at(&x, &w, k, &interior_points(&x, c, r, n)),
            _ => check_witness(&x, &w, k),
        };
        rows.push((n, check));
    }
    let values: Vec<Rational> = rows.iter().map(|(_, c)| c.max_variation).collect();
    let decreasing = strictly_decreasing_to_zero(&values);
    let conditions_ok = rows.iter().all(|(_, c)| c.support_ok && c.probability_ok);
    match out {
        Format::Json => {
            let profile: Vec<_> = rows.iter().map(|(n, c)| serde_json::json!({ "n": n, "check": c })).collect();
            json(&serde_json::json!({ "points": x.len(), "K": k, "profile": profile, "strictly_decreasing": decreasing }));
        }
        Format::Text => {
            println!("points: {}", x.len());
            println!("K: {k}");
            for (n, c) in &rows {
                let pair = c.worst_pair.map_or("-".to_string(), |(a, b)| format!("{} {}", x.label(a), x.label(b)));
                println!(
                    "n {n}: variation {} support {} probability {} worst {pair}",
                    c.max_variation,
                    ok(c.support_ok),
                    ok(c.probability_ok)
                );
            }
            println!("strictly-decreasing: {decreasing}");
        }
        Format::Dot => return Err(unsupported(out, "propa")),
    }
    if conditions_ok {
        Ok(())
    } else {
        Err(Failure::Violation("a witness violates the support or probability condition".into()))
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}

fn union_check(path: &Path, limits: SearchLimits) -> Outcome {
    let config = UnionConfig::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let x = config.space(dir).map_err(Failure::Input)?;
    let pieces: Vec<Vec<usize>> = config.pieces.iter().map(|p| p.points()).collect();
    if let Some(bad) = pieces.iter().flatten().find(|&&p| p >= x.len()) {
        return Err(Failure::Input(format!("point {bad} is out of range")));
    }
    println!("points: {}", x.len());
    println!("pieces: {}", pieces.len());
    println!("scale: {}", config.scale);
    println!("bound: {}", config.bound);
    match config.mode {
        Mode::Union => {
            let n = config.families.ok_or_else(|| Failure::Input("union mode needs `families`".into()))?;
            let small_r = config.r.ok_or_else(|| Failure::Input("union mode needs `r`".into()))?;
            let y_r = config.y_r.as_ref().map(|y| y.points()).unwrap_or_default();
            let report = union_harness(&x, &pieces, &y_r, n, config.scale, config.bound, small_r, limits);
            println!("mode: union");
            println!("families: {}", n + 1);
            print!("hypotheses: {}", report.hypotheses);
            match &report.conclusion {
                Some(c) => {
                    println!("conclusion: found");
                    println!("achieved-scale: {}", c.scale);
                    println!("achieved-bound: {}", c.bound);
                    print!("{}", certificate_text(&x, c));
                }
                None => println!("conclusion: none"),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Violation("the union harness failed".into()))
            }
        }
        Mode::Finite => {
            let report = finite_union(&x, &pieces, config.scale, config.bound, config.nmax.unwrap_or(3), limits);
            println!("mode: finite");
            let dims: Vec<String> = report.piece_dims.iter().map(|d| d.map_or("none".into(), |d| d.to_string())).collect();
            println!("piece-dimensions: {}", dims.join(" "));
            println!("union-dimension: {}", report.union_dim.map_or("none".into(), |d| d.to_string()));
            println!("union-bound: {}", report.union_bound.map_or("none".into(), |d| d.to_string()));
            println!("holds: {}", report.holds());
            if report.holds() {
                Ok(())
            } else {
                Err(Failure::Violation("the union did not reach the largest piece dimension".into()))
            }
        }
    }
}

pub struct ReportArgs {
    pub radius: Option<u32>,
    pub scale: Option<u32>,
    pub bound: Option<u32>,
    pub nmax: Option<u32>,
    pub limits: SearchLimits,
    pub budget: Option<usize>,
}

/// The worst status seen so far in a report.
#[derive(Default)]
struct Status {
    violation: Vec<String>,
    undecided: Vec<String>,
    limit: Vec<String>,
}

impl Status {
    fn finish(self) -> Outcome {
        if let Some(m) = self.violation.into_iter().next() {
            Err(Failure::Violation(m))
        } else if let Some(m) = self.undecided.into_iter().next() {
            Err(Failure::Undecided(m))
        } else if let Some(m) = self.limit.into_iter().next() {
            Err(Failure::Limit(m))
        } else {
            Ok(())
        }
    }

    fn absorb(&mut self, f: Failure) {
        match f {
            Failure::Input(m) | Failure::Violation(m) => self.violation.push(m),
            Failure::Undecided(m) => self.undecided.push(m),
            Failure::Limit(m) => self.limit.push(m),
        }
    }
}

fn probe_text(p: &DimensionProbe) -> String {
    let names: Vec<&str> = p
        .outcomes
        .iter()
        .map(|o| match o {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::Impossible => "impossible",
            SearchOutcome::LimitReached { .. } => "limit-reached",
        })
        .collect();
    names.join(" ")
}

fn profile_text(p: &[(u32, Rational)]) -> String {
    p.iter().map(|(_, v)| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs validate, develop, the stabilizer versus short-loop comparison, the asdim probe,
/// the bound report and the property A probe for every radius `0..=R`. Each radius block depends only on that radius, so
/// the output for a smaller `R` is a prefix of the output for a larger one.
fn report(path: &Path, args: ReportArgs) -> Outcome {
    let project = load(path)?;
    let params = project.params.clone();
    let validation = project.validate();
    println!("project: {}", project.name);
    if !validation.is_valid() {
        print!("validate: {validation}");
        return Err(Failure::Violation("the project does not satisfy the axioms".into()));
    }
    println!("validate: valid");
    let c = complex(&project)?;
    if !c.validate().is_valid() {
        print!("validate-complex: {}", c.validate());
        return Err(Failure::Violation("the complex of groups is invalid".into()));
    }
    let base = project.base_vertex(&c).map_err(|e| Failure::Input(e.to_string()))?;
    let scale = args.scale.or(params.scale).unwrap_or(3);
    let bound = args.bound.or(params.bound).unwrap_or(3 * scale);
    let nmax = args.nmax.or(params.nmax.map(|n| n as u32)).unwrap_or(8);
    let k = params.k.unwrap_or(1);
    let max_families = params.families.unwrap_or(2);
    let n_local = params.local_asdim.unwrap_or(0);
    let k_dev = params.development_asdim.unwrap_or(c.dimension());
    let radius = args.radius.or(params.radius).unwrap_or(3);
    let budget = args.budget.or(params.budget).unwrap_or(DEFAULT_BUDGET);
    let p = Pi1Presentation::new(c, base)?;
    println!("base: {}", p.scwol().vertex_name(base));
    println!("dimension: {}", p.dimension());
    println!("scale: {scale}");
    println!("bound: {bound}");
    println!("nmax: {nmax}");
    println!("K: {k}");
    println!("local-asdim: {n_local}");
    println!("development-asdim: {k_dev}");
    let mut status = Status::default();
    for r in 0..=radius {
        println!("[radius {r}]");
        if let Err(f) = report_block(&p, r, budget, scale, bound, nmax, k, max_families, (n_local, k_dev), args.limits, &mut status) {
            println!("error: {}", f.message());
            status.absorb(f);
            break;
        }
    }
    status.finish()
}

#[allow(clippy::too_many_arguments)]
fn report_block(
    p: &Pi1Presentation,
    r: u32,
    budget: usize,
    scale: u32,
    bound: u32,
    nmax: u32,
    k: u32,
    max_families: usize,
    (n_local, k_dev): (usize, usize),
    limits: SearchLimits,
    status: &mut Status,
) -> Outcome {
    let dev = develop_ball(p, r, budget)?;
    println!("develop.vertices: {}", dev.len());
    println!("develop.spheres: {}", join(&dev.sphere_sizes()));

    let prop = check_prop1(p, r, budget)?;
    println!("prop1.stabilizer: {}", prop.stabilizer_size);
    println!("prop1.short-loops: {}", prop.short_loops);
    println!("prop1.undecided: {}", prop.undecided.len());
    println!("prop1.holds: {}", prop.holds());
    if !prop.holds() {
        status.violation.push(format!("radius {r}: the stabilizer and the short loops differ"));
    } else if !prop.undecided.is_empty() {
        status.undecided.push(format!("radius {r}: {} words could not be certified", prop.undecided.len()));
    }

    let gb = group_ball(p, r, budget)?;
    println!("ball.points: {}", gb.space.len());
    println!("ball.diameter: {}", gb.space.diameter());
    let probe = probe_dimension(&gb.space, scale, bound, max_families, limits);
    println!("asdim.outcomes: {}", probe_text(&probe));
    match probe.achieved() {
        Some(m) => {
            println!("asdim.achieved: {m}");
            println!("asdim.minimal-proven: {}", probe.minimal_is_proven());
            let b = dimension_bound_report(n_local, k_dev, m);
            println!("bound.formula: ({} + 1)({} + 1) - 1 = {}", b.n, b.k, b.bound);
            println!("bound.sharp: {} + {} = {}", b.n, b.k, b.sharp_bound);
            println!("bound.within: {}", b.within_bound);
            println!("bound.within-sharp: {}", b.within_sharp_bound);
            if !b.within_bound {
                status.violation.push(format!("radius {r}: achieved {m} exceeds the bound {}", b.bound));
            }
        }
        None => {
            println!("asdim.achieved: none");
            if probe.outcomes.iter().any(|o| matches!(o, SearchOutcome::LimitReached { .. })) {
                status.limit.push(format!("radius {r}: the asdim search hit its node limit"));
            }
        }
    }

    let stab = r_stabilizer(p, &dev, r, budget)?;
    let mut pb = gb;
    let mut idx = pb.indices_of(&stab);
    if idx.len() < stab.len() {
        pb = group_ball(p, r + 1, budget)?;
        idx = pb.indices_of(&stab);
    }
    println!("propa.stabilizer: {}", stab.len());
    println!("propa.ball-radius: {}", pb.radius);
    if idx.len() < stab.len() {
        return Err(Failure::Violation(format!("W_{r} is not contained in the group ball of radius {}", r + 1)));
    }
    let sub = pb.space.subspace(&idx).map_err(|e| Failure::Input(e.to_string()))?;
    let mut conditions = true;
    let mut profile = |x: &FiniteMetricSpace| -> Vec<(u32, Rational)> {
        (1..=nmax)
            .map(|n| {
                let c = check_witness(x, &ball_averaging_witness(x, n), k);
                conditions &= c.support_ok && c.probability_ok;
                (n, c.max_variation)
            })
            .collect()
    };
    let sp = profile(&sub);
    let bp = profile(&pb.space);
    println!("propa.stabilizer-profile: {}", profile_text(&sp));
    println!("propa.ball-profile: {}", profile_text(&bp));
    if !conditions {
        status.violation.push(format!("radius {r}: a witness violates the support or probability condition"));
    }
    Ok(())
}
