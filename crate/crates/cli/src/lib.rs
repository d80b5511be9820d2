//! `toric-perf`: command dispatch and JSON reports.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use toric_perfectoid::cohomology::{
    batyrev_borisov_check, cohomology_with, demazure_vanishing_check, CohomologyOptions, CohomologyTable,
    Verdict,
};
use toric_perfectoid::divisor::{
    class_group, cocycle_class_equal, divisor_polytope, divisor_to_cocycle, is_basepoint_free, is_cartier,
    picard_group, pullback_by_power_map, TDivisor,
};
use toric_perfectoid::fan::named::{named_fan, NAMES};
use toric_perfectoid::fan::text::parse_fan;
use toric_perfectoid::lattice_linalg::rational::Rational;
use toric_perfectoid::lattice_linalg::{GroupElement, IntVector};
use toric_perfectoid::perfectoid::{
    cohomology_series, d_l, is_prime, perfectoid_bb, perfectoid_demazure, perfectoid_pic, LevelSeries,
    PerfectoidBundle, PerfectoidContext,
};
use toric_perfectoid::Fan;

pub const SCHEMA: &str = "toric-perf-report/1";

#[derive(Parser, Debug)]
#[command(
    name = "toric-perf",
    version,
    about = "Picard groups and line-bundle cohomology of toric varieties and their perfectoid covers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check that the input is a fan and report smoothness and completeness
    Validate(JobArgs),
    /// Class group Cl(X)
    Classgroup(JobArgs),
    /// Picard group and its index in the class group
    Picard(JobArgs),
    /// Monomial Čech cocycle of a Cartier divisor
    Cocycle(JobArgs),
    /// Divisor polytope P_D
    Polytope(JobArgs),
    /// Dimensions of H^i(X, O(D))
    Cohomology(JobArgs),
    /// Vanishing of higher cohomology for a basepoint-free divisor
    Demazure(JobArgs),
    /// Cohomology of O(-D) against interior points of P_D
    Bb(JobArgs),
    /// Picard group of the perfectoid cover
    PerfPic(JobArgs),
    /// Level-wise cohomology series of a perfectoid bundle
    PerfCohomology(JobArgs),
    /// Demazure vanishing along the tower
    PerfDemazure(JobArgs),
    /// Interior-point bases along the tower
    PerfBb(JobArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct JobArgs {
    /// `named:<NAME>` or a path to a fan document
    #[arg(long)]
    pub fan: String,
    /// Divisor coefficients in ray order, e.g. `-3,0,0`
    #[arg(long, allow_hyphen_values = true)]
    pub divisor: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub level: u32,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub nmax: u32,
    #[arg(long)]
    pub graded: bool,
    #[arg(long)]
    pub assume_trivialization: bool,
    #[arg(long)]
    pub modp_check: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    Classgroup,
    Picard,
    Cocycle,
    Polytope,
    Cohomology,
    Demazure,
    Bb,
    PerfPic,
    PerfCohomology,
    PerfDemazure,
    PerfBb,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Validate => "validate",
            CommandKind::Classgroup => "classgroup",
            CommandKind::Picard => "picard",
            CommandKind::Cocycle => "cocycle",
            CommandKind::Polytope => "polytope",
            CommandKind::Cohomology => "cohomology",
            CommandKind::Demazure => "demazure",
            CommandKind::Bb => "bb",
            CommandKind::PerfPic => "perf-pic",
            CommandKind::PerfCohomology => "perf-cohomology",
            CommandKind::PerfDemazure => "perf-demazure",
            CommandKind::PerfBb => "perf-bb",
        }
    }

    fn needs_divisor(self) -> bool {
        !matches!(
            self,
            CommandKind::Validate | CommandKind::Classgroup | CommandKind::Picard | CommandKind::PerfPic
        )
    }

    fn needs_prime(self) -> bool {
        matches!(
            self,
            CommandKind::PerfPic
                | CommandKind::PerfCohomology
                | CommandKind::PerfDemazure
                | CommandKind::PerfBb
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanSource {
    Named(String),
    File(PathBuf),
}

impl FanSource {
    pub fn parse(s: &str) -> FanSource {
        match s.strip_prefix("named:") {
            Some(name) => FanSource::Named(name.to_string()),
            None => FanSource::File(PathBuf::from(s)),
        }
    }
}

impl fmt::Display for FanSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanSource::Named(n) => write!(f, "named:{n}"),
            FanSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: CommandKind,
    pub fan: FanSource,
    pub divisor: Option<String>,
    pub p: Option<u64>,
    pub level: u32,
    pub degree: Option<usize>,
    pub nmax: u32,
    pub graded: bool,
    pub assume_trivialization: bool,
    pub modp_check: Option<u64>,
}

impl JobSpec {
    pub fn new(command: CommandKind, args: &JobArgs) -> JobSpec {
        JobSpec {
            command,
            fan: FanSource::parse(&args.fan),
            divisor: args.divisor.clone(),
            p: args.p,
            level: args.level,
            degree: args.degree,
            nmax: args.nmax,
            graded: args.graded,
            assume_trivialization: args.assume_trivialization,
            modp_check: args.modp_check,
        }
    }

    pub fn from_cli(cli: &Cli) -> JobSpec {
        use CommandKind as K;
        let (kind, args) = match &cli.command {
            Command::Validate(a) => (K::Validate, a),
            Command::Classgroup(a) => (K::Classgroup, a),
            Command::Picard(a) => (K::Picard, a),
            Command::Cocycle(a) => (K::Cocycle, a),
            Command::Polytope(a) => (K::Polytope, a),
            Command::Cohomology(a) => (K::Cohomology, a),
            Command::Demazure(a) => (K::Demazure, a),
            Command::Bb(a) => (K::Bb, a),
            Command::PerfPic(a) => (K::PerfPic, a),
            Command::PerfCohomology(a) => (K::PerfCohomology, a),
            Command::PerfDemazure(a) => (K::PerfDemazure, a),
            Command::PerfBb(a) => (K::PerfBb, a),
        };
        JobSpec::new(kind, args)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::InputError => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::CheckFailed => "check-failed",
            Status::InputError => "input-error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: CommandKind,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub status: Status,
    pub timing_ms: u128,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command.name(),
            "inputs": self.inputs,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "status": self.status.label(),
            "timing_ms": self.timing_ms as u64,
        })
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

/// An input problem, with the message for the report.
enum Failure {
    Input(String),
}

impl<E: fmt::Display> From<E> for Failure
where
    E: std::error::Error,
{
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

type Step<T> = std::result::Result<T, Failure>;

struct Ctx {
    diagnostics: Vec<String>,
    status: Status,
}

impl Ctx {
    fn fail_check(&mut self, msg: String) {
        self.diagnostics.push(msg);
        self.status = Status::CheckFailed;
    }

    fn verdict(&mut self, v: &Verdict) -> Value {
        match v {
            Verdict::Pass => {}
            Verdict::Fail(why) => self.fail_check(why.clone()),
            Verdict::NotApplicable(why) => self.diagnostics.push(format!("not applicable: {why}")),
        }
        json!(v.label())
    }
}

pub fn run(job: &JobSpec) -> Report {
    let start = Instant::now();
    let mut ctx = Ctx { diagnostics: Vec::new(), status: Status::Ok };
    let mut inputs = Map::new();
    inputs.insert("fan".into(), json!(job.fan.to_string()));
    if let Some(d) = &job.divisor {
        inputs.insert("divisor".into(), json!(d));
    }
    if let Some(p) = job.p {
        inputs.insert("p".into(), json!(p));
    }
    let results = match dispatch(job, &mut ctx, &mut inputs) {
        Ok(v) => v,
        Err(Failure::Input(msg)) => {
            ctx.diagnostics.push(msg);
            ctx.status = Status::InputError;
            Value::Null
        }
    };
    Report {
        command: job.command,
        inputs: Value::Object(inputs),
        results,
        diagnostics: ctx.diagnostics,
        status: ctx.status,
        timing_ms: start.elapsed().as_millis(),
    }
}

fn load_fan(src: &FanSource) -> Step<Fan> {
    match src {
        FanSource::Named(name) => {
            named_fan(name).ok_or_else(|| input(format!("unknown fan `{name}`; known: {}", NAMES.join(", "))))
        }
        FanSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_fan(&text)?)
        }
    }
}

fn parse_divisor(fan: &Fan, s: &str) -> Step<TDivisor> {
    let coeffs = s
        .split(',')
        .map(|x| x.trim().parse::<BigInt>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| input(format!("divisor `{s}` is not a comma-separated list of integers")))?;
    Ok(TDivisor::new(fan, IntVector(coeffs))?)
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn vector(v: &IntVector) -> Value {
    Value::Array(v.entries().iter().map(int).collect())
}

fn vectors(vs: &[IntVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

fn rational(x: &Rational) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        json!(x.to_string())
    }
}

fn rational_vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

fn element(g: &GroupElement) -> Value {
    json!({
        "free": g.free.iter().map(int).collect::<Vec<_>>(),
        "torsion": g.torsion.iter().map(int).collect::<Vec<_>>(),
    })
}

fn table(t: &CohomologyTable) -> Value {
    let mut dims = Map::new();
    for (i, d) in &t.dims {
        dims.insert(i.to_string(), json!(d));
    }
    let mut out = Map::new();
    out.insert("dims".into(), Value::Object(dims));
    if let Some(g) = &t.graded {
        let mut graded = Map::new();
        for (i, pieces) in g {
            let list: Vec<Value> =
                pieces.iter().map(|(m, k)| json!({"degree": vector(m), "dim": k})).collect();
            graded.insert(i.to_string(), Value::Array(list));
        }
        out.insert("graded".into(), Value::Object(graded));
    }
    if let Some(mp) = &t.modp {
        let dims: Map<String, Value> = mp.dims.iter().map(|(i, d)| (i.to_string(), json!(d))).collect();
        out.insert("modp_check".into(), json!({"p": mp.p, "dims": dims, "agrees": mp.agrees}));
    }
    Value::Object(out)
}

fn series(s: &LevelSeries, with_bases: bool) -> Value {
    let mut v = json!({
        "degree": s.degree,
        "dims": s.dims,
        "embeddings": s.embeddings,
        "verdict": s.verdict.label(),
    });
    if with_bases {
        v["bases"] = Value::Array(s.bases.iter().map(|b| vectors(b)).collect());
    }
    v
}

fn bundle(l: &PerfectoidBundle) -> Value {
    json!({
        "p": l.p(),
        "level": l.level(),
        "class": element(l.class()),
        "class_over_q": rational_vector(&l.rational_coordinates()),
        "representative": vector(l.representative().coeffs()),
    })
}

fn require_divisor(job: &JobSpec, fan: &Fan) -> Step<TDivisor> {
    let s =
        job.divisor.as_deref().ok_or_else(|| input(format!("`{}` needs --divisor", job.command.name())))?;
    parse_divisor(fan, s)
}

fn require_prime(job: &JobSpec) -> Step<u64> {
    let p = job.p.ok_or_else(|| input(format!("`{}` needs --p", job.command.name())))?;
    if !is_prime(p) {
        return Err(input(format!("--p {p} is not prime")));
    }
    Ok(p)
}

fn perfectoid_bundle(job: &JobSpec, fan: &Fan, d: &TDivisor) -> Step<PerfectoidBundle> {
    let p = require_prime(job)?;
    let ctx: Arc<PerfectoidContext> = if job.assume_trivialization {
        PerfectoidContext::assuming_trivialization(fan.clone(), p)?
    } else {
        PerfectoidContext::new(fan.clone(), p)?
    };
    Ok(ctx.from_divisor(d, job.level)?)
}

fn dispatch(job: &JobSpec, ctx: &mut Ctx, inputs: &mut Map<String, Value>) -> Step<Value> {
    let fan = load_fan(&job.fan)?;
    let labels: Vec<Value> = fan.rays().iter().enumerate().map(|(i, u)| json!(format!("D{i}={u}"))).collect();
    inputs.insert("ray_labels".into(), Value::Array(labels));

    let report = fan.validate();
    ctx.diagnostics.extend(report.diagnostics.iter().cloned());
    if job.command == CommandKind::Validate {
        if !report.valid {
            ctx.status = Status::InputError;
        }
        return Ok(json!({
            "valid": report.valid,
            "smooth": report.smooth,
            "complete": report.complete,
            "simplicial": report.simplicial,
            "rank": fan.rank(),
            "num_rays": fan.num_rays(),
            "num_max_cones": fan.max_cones().len(),
        }));
    }
    if !report.valid {
        return Err(input("fan is invalid"));
    }
    if job.command.needs_prime() {
        require_prime(job)?;
    }
    let d = if job.command.needs_divisor() {
        Some(require_divisor(job, &fan)?)
    } else {
        match &job.divisor {
            Some(s) => Some(parse_divisor(&fan, s)?),
            None => None,
        }
    };

    use CommandKind as K;
    match job.command {
        K::Validate => unreachable!("handled above"),
        K::Classgroup => {
            let cl = class_group(&fan)?;
            let mut v = json!({
                "description": cl.presentation.describe(),
                "free_rank": cl.presentation.free_rank,
                "invariant_factors": cl.presentation.invariant_factors.iter().map(int).collect::<Vec<_>>(),
            });
            if let Some(d) = &d {
                v["divisor_class"] = element(&cl.class_of(d));
            }
            Ok(v)
        }
        K::Picard => {
            let pic = picard_group(&fan)?;
            let mut v = json!({
                "description": pic.describe(),
                "free_rank": pic.presentation.free_rank,
                "invariant_factors": pic.presentation.invariant_factors.iter().map(int).collect::<Vec<_>>(),
                "class_group": pic.class_group.presentation.describe(),
                "index_in_class_group": pic.index_in_class_group().as_ref().map(int),
                "cartier_basis": vectors(&pic.cartier_basis.column_vectors()),
            });
            if let Some(d) = &d {
                v["divisor_class"] = match pic.class_of(d) {
                    Ok(g) => element(&g),
                    Err(_) => Value::Null,
                };
                v["divisor_is_cartier"] = json!(is_cartier(&fan, d).is_some());
            }
            Ok(v)
        }
        K::Cocycle => {
            let d = d.expect("required");
            let cocycle = divisor_to_cocycle(&fan, &d)?;
            let data = is_cartier(&fan, &d).expect("cocycle exists");
            let k = cocycle.num_cones();
            let mut entries = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    entries.push(json!({"i": i, "j": j, "m": vector(cocycle.entry(i, j))}));
                }
            }
            let check = cocycle.check(&fan);
            if let Err(why) = &check {
                ctx.fail_check(why.clone());
            }
            let mut v = json!({
                "witnesses": vectors(&data.witnesses),
                "entries": entries,
                "cocycle_check": check.is_ok(),
                "in_dual_cones": cocycle.in_dual_cones(&fan),
            });
            if let Some(t) = job.p {
                let t = BigInt::from(t);
                let pulled = pullback_by_power_map(&cocycle, &t);
                let direct = divisor_to_cocycle(&fan, &d.scaled(&t))?;
                let equal = cocycle_class_equal(&fan, &pulled, &direct);
                if !equal {
                    ctx.fail_check(format!(
                        "pullback by the {t}-power map differs from the cocycle of {t}·D"
                    ));
                }
                v["power_map"] = json!({"t": int(&t), "matches_scaled_divisor": equal});
            }
            Ok(v)
        }
        K::Polytope => {
            let d = d.expect("required");
            let p = divisor_polytope(&fan, &d)?;
            let points = p.lattice_points(false);
            let interior = p.lattice_points(true);
            Ok(json!({
                "dim": p.dim(),
                "vertices": p.vertices().iter().map(|v| rational_vector(v)).collect::<Vec<_>>(),
                "implicit_equalities": p.implicit_equalities(),
                "lattice_points": vectors(&points),
                "num_lattice_points": points.len(),
                "interior_points": vectors(&interior),
                "num_interior_points": interior.len(),
            }))
        }
        K::Cohomology => {
            let d = d.expect("required");
            let opts = CohomologyOptions { graded: job.graded, modp: job.modp_check };
            if let Some(q) = job.modp_check {
                if !is_prime(q) {
                    return Err(input(format!("--modp-check {q} is not prime")));
                }
            }
            let t = cohomology_with(&fan, &d, &opts)?;
            if let Some(mp) = &t.modp {
                if !mp.agrees {
                    ctx.fail_check(format!("ranks modulo {} disagree with the rational ranks", mp.p));
                }
            }
            let mut v = table(&t);
            v["cartier"] = json!(is_cartier(&fan, &d).is_some());
            Ok(v)
        }
        K::Demazure => {
            let d = d.expect("required");
            let verdict = demazure_vanishing_check(&fan, &d);
            let bpf = is_basepoint_free(&fan, &d).ok();
            Ok(json!({
                "verdict": ctx.verdict(&verdict),
                "basepoint_free": bpf,
            }))
        }
        K::Bb => {
            let d = d.expect("required");
            let r = batyrev_borisov_check(&fan, &d);
            Ok(json!({
                "verdict": ctx.verdict(&r.verdict),
                "polytope_dim": r.polytope_dim,
                "interior_points": vectors(&r.interior_points),
                "basis_degrees": vectors(&r.basis_degrees),
                "cohomology_of_negative": r.table.as_ref().map(table),
            }))
        }
        K::PerfPic => {
            let p = require_prime(job)?;
            let fan = fan.clone();
            let pp = if job.assume_trivialization {
                let ctx = PerfectoidContext::assuming_trivialization(fan, p)?;
                toric_perfectoid::perfectoid::localize_at_p(&ctx.pic().presentation, p)
            } else {
                perfectoid_pic(&fan, p)?
            };
            Ok(json!({
                "pic": pp.base,
                "perfectoid_pic": pp.describe(),
                "free_rank": pp.free_rank,
                "surviving_torsion": pp.torsion.iter().map(int).collect::<Vec<_>>(),
            }))
        }
        K::PerfCohomology => {
            let d = d.expect("required");
            let l = perfectoid_bundle(job, &fan, &d)?;
            let degrees: Vec<usize> = match job.degree {
                Some(i) => vec![i],
                None => (0..=fan.rank()).collect(),
            };
            let list = degrees
                .iter()
                .map(|&i| cohomology_series(&l, i, job.nmax).map(|s| series(&s, job.graded)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({
                "bundle": bundle(&l),
                "nmax": job.nmax,
                "series": list,
            }))
        }
        K::PerfDemazure => {
            let d = d.expect("required");
            let l = perfectoid_bundle(job, &fan, &d)?;
            let r = perfectoid_demazure(&l, job.nmax)?;
            Ok(json!({
                "bundle": bundle(&l),
                "verdict": ctx.verdict(&r.verdict),
                "basepoint_free_level": r.basepoint_free_level,
                "series": r.series.iter().map(|s| series(s, job.graded)).collect::<Vec<_>>(),
            }))
        }
        K::PerfBb => {
            let d = d.expect("required");
            let l = perfectoid_bundle(job, &fan, &d)?;
            let dl = d_l(&l)?;
            let r = perfectoid_bb(&l, job.nmax)?;
            let mut v = json!({
                "bundle": bundle(&l),
                "verdict": ctx.verdict(&r.verdict),
                "d_l": dl,
                "dims": r.dims,
                "interior_counts": r.interior_counts,
                "embeddings": r.embeddings,
                "truncated_basis": r.truncated_basis.iter().map(|m| rational_vector(m)).collect::<Vec<_>>(),
            });
            if job.graded {
                v["level_bases"] = Value::Array(r.level_bases.iter().map(|b| vectors(b)).collect());
            }
            Ok(v)
        }
    }
}
