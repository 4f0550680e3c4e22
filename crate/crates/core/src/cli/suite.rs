//! Check suites over resolved definitions and the JSON report.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use super::resolve::{Definitions, DiagramEntry, KMapEntry, MonoidEntry, RatMapEntry};
use crate::error::Error;
use crate::fpcat::IndObject;
use crate::fracfield::{open_of_spec_k, FractionFieldObject, KModule, OpenOfSpecK};
use crate::kernel::matrix::{Matrix, Ring};
use crate::monoid::integral::describe_pair;
use crate::monoid::{is_reduced, sample, DomainCheck};
use crate::scheme::{IntegralityReport, RationalMap, ZariskiDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MonoidAxioms,
    Integrality,
    FractionField,
    Scheme,
    #[serde(rename = "thm-1-1")]
    Thm11,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::MonoidAxioms, Suite::Integrality, Suite::FractionField, Suite::Scheme, Suite::Thm11, Suite::All];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MonoidAxioms => "monoid-axioms",
            Suite::Integrality => "integrality",
            Suite::FractionField => "fraction-field",
            Suite::Scheme => "scheme",
            Suite::Thm11 => "thm-1-1",
            Suite::All => "all",
        }
    }

    fn includes(self, part: Suite) -> bool {
        self == Suite::All || self == part
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite '{0}' (expected one of monoid-axioms, integrality, fraction-field, scheme, thm-1-1, all)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub degree_bound: usize,
    pub stage_bound: usize,
    /// Worker threads; 0 picks the available parallelism.
    pub threads: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: sample::DEFAULT_SEED,
            degree_bound: crate::kernel::DEFAULT_DEGREE_BOUND,
            stage_bound: crate::fpcat::DEFAULT_STAGE_BOUND,
            threads: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    OutOfHypothesis,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Counterexample, isomorphism or bound note; always present for fail and undecided.
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &str, status: Status, detail: impl Into<String>, witness: Option<String>) -> Self {
        Check { name: name.to_string(), status, detail: detail.into(), witness }
    }

    fn pass(name: &str, detail: impl Into<String>) -> Self {
        Self::new(name, Status::Pass, detail, None)
    }

    fn expect(name: &str, ok: bool, detail: impl Into<String>, witness: Option<String>) -> Self {
        let detail = detail.into();
        let witness = witness.or_else(|| (!ok).then(|| "declared expectation does not match".to_string()));
        Self::new(name, if ok { Status::Pass } else { Status::Fail }, detail, witness)
    }

    fn outside(name: &str, detail: impl Into<String>, witness: Option<String>) -> Self {
        Self::new(name, Status::OutOfHypothesis, detail, witness)
    }

    fn error(name: &str, e: &Error) -> Self {
        match e {
            Error::DegreeBoundExceeded { .. } | Error::Undecided { .. } => {
                Self::new(name, Status::Undecided, "bound reached before a decision", Some(e.to_string()))
            }
            _ => Self::new(name, Status::Fail, "error", Some(e.to_string())),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub out_of_hypothesis: usize,
    pub undecided: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckTiming {
    pub name: String,
    pub ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub checks: Vec<CheckTiming>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub version: u32,
    pub suite: Suite,
    pub seed: u64,
    pub degree_bound: usize,
    pub stage_bound: usize,
    pub summary: Summary,
    pub checks: Vec<Check>,
    pub timing: Timing,
}

#[derive(Serialize)]
struct Body<'a> {
    format: &'static str,
    version: u32,
    suite: Suite,
    seed: u64,
    degree_bound: usize,
    stage_bound: usize,
    summary: &'a Summary,
    checks: &'a [Check],
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Exit code of the command line tool.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if strict && self.summary.undecided > 0 {
            3
        } else {
            0
        }
    }

    /// Everything except timing; identical inputs give identical bytes.
    pub fn body_json(&self) -> String {
        let body = Body {
            format: self.format,
            version: self.version,
            suite: self.suite,
            seed: self.seed,
            degree_bound: self.degree_bound,
            stage_bound: self.stage_bound,
            summary: &self.summary,
            checks: &self.checks,
        };
        serde_json::to_string_pretty(&body).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

type Job<'a> = Box<dyn FnOnce() -> Vec<(Check, f64)> + Send + 'a>;

fn timed(f: impl FnOnce() -> Check) -> (Check, f64) {
    let t = Instant::now();
    let c = f();
    (c, t.elapsed().as_secs_f64() * 1e3)
}

fn built_or_skip<'a, T>(name: &str, b: &'a Result<T, Error>) -> Result<&'a T, Check> {
    b.as_ref().map_err(|e| Check::outside(name, "construction failed", Some(e.to_string())))
}

fn axioms_check(m: &MonoidEntry) -> Check {
    let name = format!("monoid-axioms/{}", m.name);
    match &m.monoid {
        Ok(obj) => {
            let list = |exact: bool| {
                let v: Vec<&str> = obj.axioms().iter().filter(|a| a.exact == exact).map(|a| a.name.as_str()).collect();
                v.join(", ")
            };
            let mut detail = obj.describe();
            let (ex, sa) = (list(true), list(false));
            if !ex.is_empty() {
                detail += &format!("; exact: {ex}");
            }
            if !sa.is_empty() {
                detail += &format!("; on a spanning set: {sa}");
            }
            let witness = m.expect_fail.then(|| "all axioms hold, but failure was declared".to_string());
            Check::expect(&name, !m.expect_fail, detail, witness)
        }
        Err(Error::AxiomFailure(bad)) => {
            Check::expect(&name, m.expect_fail, "construction rejected", Some(format!("failing: {bad}")))
        }
        Err(e) => Check::error(&name, e),
    }
}

fn integrality_checks(m: &MonoidEntry, opts: &SuiteOptions) -> Vec<Check> {
    let name = format!("integrality/{}", m.name);
    let obj = match built_or_skip(&name, &m.monoid) {
        Ok(o) => o,
        Err(c) => return vec![c],
    };
    let (endo, dc) = match obj.integrality_with_bound(opts.degree_bound) {
        Ok(x) => x,
        Err(e) => return vec![Check::error(&name, &e)],
    };
    let reduced = if is_reduced(&endo.ring) { "reduced" } else { "not reduced" };
    let mut out = Vec::new();
    let integral = dc.is_domain();
    let witness = match &dc {
        DomainCheck::Domain => None,
        DomainCheck::ZeroDivisors(a, b) => Some(describe_pair(&endo.ring, a, b)),
        DomainCheck::ZeroRing => Some("1 = 0".to_string()),
    };
    let detail = format!("E(A) = {}; {}, {reduced}", endo.ring.describe(), if integral { "integral" } else { "not integral" });
    out.push(Check::expect(&name, integral == m.expect_integral, detail, witness));

    let mono = format!("{name}/nonzero-endos-mono");
    if !integral || !obj.noetherian().is_certified() {
        out.push(Check::outside(&mono, "needs an integral Noetherian monoid", None));
    } else {
        out.push(match obj.check_nonzero_endos_mono(sample::DEFAULT_DEGREE_CAP, sample::DEFAULT_RANDOM_SAMPLES, opts.seed) {
            Ok(r) => match r.failure {
                None => Check::pass(&mono, format!("{} nonzero elements, every kernel is zero", r.tested)),
                Some(s) => Check::new(
                    &mono,
                    Status::Fail,
                    "multiplication has a kernel",
                    Some(format!("s = {}", endo.ring.display(&s))),
                ),
            },
            Err(e) => Check::error(&mono, &e),
        });
    }
    out
}

/// A seeded presentation over the field and the open `D(s)` of `Spec K`.
fn module_check(name: &str, k: &FractionFieldObject, seed: u64) -> Check {
    let field = k.field();
    let samples = sample::sample_elements(field, 2, 6, seed);
    if samples.len() < 6 {
        return Check::outside(name, "too few field elements to sample", None);
    }
    let rel = Matrix::from_vec(2, 3, samples[..6].to_vec());
    let result = (|| -> crate::error::Result<String> {
        let g = KModule::new(k, 2, rel.clone())?;
        let fr = g.free_rank()?;
        let rank = crate::kernel::snf::rank(&field.pid()?, &rel);
        if fr.rank != 2 - rank {
            return Err(Error::NotWellDefined(format!("free rank {} but 2 - rank = {}", fr.rank, 2 - rank)));
        }
        let s = sample::nonzero_samples(field, 2, 2, seed).pop().unwrap_or_else(|| field.one());
        let open = open_of_spec_k(k, &[s])?;
        if !matches!(open, OpenOfSpecK::Iso { .. }) {
            return Err(Error::NotWellDefined("a nonzero basic open of Spec K is not K".into()));
        }
        Ok(format!("coker of a 2x3 presentation is K^{}; D(s) = Spec K", fr.rank))
    })();
    match result {
        Ok(d) => Check::pass(name, d),
        Err(Error::UnsupportedRing(why)) => Check::outside(name, "module checks need a field with a presentation engine", Some(why)),
        Err(e) => Check::error(name, &e),
    }
}

fn fraction_checks(m: &MonoidEntry, opts: &SuiteOptions) -> Vec<Check> {
    let name = format!("fraction-field/{}", m.name);
    let obj = match built_or_skip(&name, &m.monoid) {
        Ok(o) => o,
        Err(c) => return vec![c],
    };
    let k = match FractionFieldObject::new(obj) {
        Ok(k) => k,
        Err(Error::NotIntegral(w)) => return vec![Check::outside(&name, "the monoid is not integral", Some(w))],
        Err(Error::UnsupportedRing(w)) => return vec![Check::outside(&name, "no Noetherian certificate", Some(w))],
        Err(e) => return vec![Check::error(&name, &e)],
    };
    let mut out = Vec::new();
    let (fwd, back) = k.certificate();
    out.push(match fwd.is_inverse_pair(back) {
        Ok(true) => Check::pass(
            &name,
            format!("Q(E(A)) = {}; E(K(A)) = {}; inverse isomorphisms checked on generators", k.field().describe(), k.endo_closed().ring.describe()),
        ),
        Ok(false) => Check::new(&name, Status::Fail, "certificate maps are not inverse", Some(fwd.describe())),
        Err(e) => Check::error(&name, &e),
    });
    let idem = format!("{name}/idempotence");
    out.push(match k.check_idempotence(opts.seed) {
        Ok(r) if r.holds() => Check::pass(&idem, format!("{} checks", r.checks.len())),
        Ok(r) => {
            let bad: Vec<String> = r.checks.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect();
            Check::new(&idem, Status::Fail, "idempotence fails", Some(bad.join(", ")))
        }
        Err(e) => Check::error(&idem, &e),
    });
    if let Some(r) = obj.ring() {
        let chain = format!("{name}/colimit-stage");
        out.push(stage_check(&chain, r, opts));
    }
    out.push(module_check(&format!("{name}/modules"), &k, opts.seed));
    out
}

/// In `A -s-> A -s-> ...`, the class of `1` at stage 0 equals `s` at stage 1
/// and is nonzero within the stage bound.
fn stage_check(name: &str, r: &crate::fpcat::ExplicitRing, opts: &SuiteOptions) -> Check {
    let samples = sample::nonzero_samples(r, 2, 2, opts.seed);
    let Some(s) = samples.iter().find(|s| !r.is_unit(s)).or(samples.first()).cloned() else {
        return Check::outside(name, "no nonzero element to sample", None);
    };
    let result = (|| -> crate::error::Result<bool> {
        let chain = IndObject::localization_chain(r, &s)?;
        let one = chain.element(0, vec![r.one()]);
        let equal = chain.elements_equal(&one, &chain.element(1, vec![s.clone()]), opts.stage_bound)?;
        let nonzero = !chain.is_zero_element(&one, opts.stage_bound)?;
        Ok(equal && nonzero)
    })();
    match result {
        Ok(true) => Check::pass(name, format!("1 = s in the colimit for s = {}", r.display(&s))),
        Ok(false) => Check::new(name, Status::Fail, "colimit classes disagree", Some(format!("s = {}", r.display(&s)))),
        Err(e) => Check::error(name, &e),
    }
}

fn zero_divisor_witness(x: &ZariskiDiagram, bound: usize) -> Option<String> {
    for i in x.nontrivial_charts() {
        if let Ok((endo, DomainCheck::ZeroDivisors(a, b))) = x.chart(i).monoid.integrality_with_bound(bound) {
            return Some(format!("{} in {}", describe_pair(&endo.ring, &a, &b), x.chart(i).name));
        }
    }
    None
}

fn diagram_integrality(d: &DiagramEntry, opts: &SuiteOptions) -> Check {
    let name = format!("integrality/{}", d.name);
    let x = match built_or_skip(&name, &d.diagram) {
        Ok(x) => x,
        Err(c) => return c,
    };
    match x.is_integral() {
        Ok(integral) => {
            let witness = (!integral).then(|| zero_divisor_witness(x, opts.degree_bound)).flatten();
            let detail = if integral { "every non-trivial chart is integral" } else { "a chart is not integral" };
            Check::expect(&name, integral == d.expect_integral, detail, witness)
        }
        Err(e) => Check::error(&name, &e),
    }
}

fn scheme_checks(d: &DiagramEntry, opts: &SuiteOptions) -> Vec<Check> {
    let base = format!("scheme/{}", d.name);
    let x = match &d.diagram {
        Ok(x) => x,
        Err(e) => return vec![Check::error(&format!("{base}/construction"), e)],
    };
    let mut out = Vec::new();
    let canonical = x.certificates().iter().filter(|c| matches!(c, crate::scheme::EdgeCertificate::Canonical)).count();
    out.push(Check::pass(
        &format!("{base}/construction"),
        format!(
            "{} charts, {} edges certified ({} canonical, {} up to isomorphism)",
            x.charts().len(),
            x.edges().len(),
            canonical,
            x.edges().len() - canonical
        ),
    ));
    let reduced = format!("{base}/reduced");
    out.push(match x.is_reduced() {
        Ok(r) => {
            let witness = (!r).then(|| nilpotent(x)).flatten();
            Check::expect(&reduced, r == d.expect_reduced, if r { "reduced" } else { "not reduced" }, witness)
        }
        Err(e) => Check::error(&reduced, &e),
    });
    let irr = x.is_irreducible();
    let witness = x
        .disjoint_pair()
        .map(|(i, j)| format!("{} and {} meet in a trivial chart", x.chart(i).name, x.chart(j).name));
    out.push(Check::expect(
        &format!("{base}/irreducible"),
        irr == d.expect_irreducible,
        if irr { "irreducible" } else { "reducible" },
        witness,
    ));
    let thm = format!("{base}/reduced-irreducible-integral");
    out.push(match x.check_reduced_irreducible_implies_integral() {
        Ok(IntegralityReport::Integral) => Check::pass(&thm, "reduced, irreducible and Noetherian, hence integral"),
        Ok(IntegralityReport::HypothesisFails { reason }) => Check::outside(&thm, "reducedness fails", Some(reason)),
        Ok(IntegralityReport::IrreducibilityFails { left, right, .. }) => {
            Check::outside(&thm, "irreducibility fails", Some(format!("{left} and {right} are disjoint")))
        }
        Err(e) => Check::error(&thm, &e),
    });
    let pb = format!("{base}/pullbacks");
    out.push(match x.check_pullbacks(opts.seed) {
        Ok(true) => Check::pass(&pb, "A_s (x) A_t = A_st on sampled pairs"),
        Ok(false) => Check::new(&pb, Status::Fail, "pullback mismatch", Some("sampled pair".into())),
        Err(e) => Check::error(&pb, &e),
    });
    let ff = format!("{base}/function-field");
    let gs = format!("{base}/global-sections");
    let integral = matches!(x.is_integral(), Ok(true)) && irr && !x.nontrivial_charts().is_empty();
    if !integral {
        out.push(Check::outside(&ff, "needs an integral diagram", None));
        out.push(Check::outside(&gs, "needs an integral diagram", None));
        return out;
    }
    out.push(match x.function_field() {
        Ok(f) => Check::pass(
            &ff,
            format!(
                "K(X) = {} from chart {}; {} edge isomorphisms certified",
                f.ring().describe(),
                x.chart(f.base).name,
                f.edge_isos.len()
            ),
        ),
        Err(e) => Check::error(&ff, &e),
    });
    out.push(global_sections_check(&gs, x, opts));
    out
}

fn nilpotent(x: &ZariskiDiagram) -> Option<String> {
    x.nontrivial_charts().into_iter().find_map(|i| {
        let r = x.chart(i).ring();
        crate::monoid::nilpotent_witness(r).map(|n| format!("{} is nilpotent in {}", r.display(&n), x.chart(i).name))
    })
}

fn global_sections_check(name: &str, x: &ZariskiDiagram, opts: &SuiteOptions) -> Check {
    let result = (|| -> crate::error::Result<String> {
        let g = x.global_sections_field()?;
        let k = g.k().clone();
        let samples = sample::sample_elements(&k, 2, 4, opts.seed);
        for f in &samples {
            let p = g.to_pair(x, f)?;
            if !k.eq_elem(&g.to_field(&p)?, f) || !g.equivalent(x, &p, &p)? || !g.models_agree(x, &p, &p)? {
                return Err(Error::NotWellDefined(format!("{} is not preserved by the pairs model", k.display(f))));
            }
        }
        Ok(format!("E(K(X)) = {} and the pairs model agree on {} elements", g.ring.describe(), samples.len()))
    })();
    match result {
        Ok(d) => Check::pass(name, d),
        Err(e) => Check::error(name, &e),
    }
}

fn ratmap_checks(r: &RatMapEntry) -> Vec<Check> {
    let base = format!("thm-1-1/{}", r.name);
    let dom = format!("{base}/dominance");
    let m = match &r.map {
        Ok(m) => m,
        Err(e) => return vec![Check::error(&dom, e)],
    };
    let mut out = Vec::new();
    match m.check_dominant() {
        Ok(()) => out.push(Check::expect(&dom, r.expect_dominant, "dominant", None)),
        Err(Error::NotDominant { open }) => {
            out.push(Check::expect(&dom, !r.expect_dominant, "not dominant", Some(format!("open {open} pulls back to Spec(0)"))));
            return out;
        }
        Err(e) => {
            out.push(Check::error(&dom, &e));
            return out;
        }
    }
    let rt = format!("{base}/round-trip");
    let result = (|| -> crate::error::Result<Check> {
        let g = m.to_k_morphism()?;
        let back = RationalMap::from_k_morphism(&m.target, &m.source, &g)?;
        if back.target_chart != m.target_chart {
            return Ok(Check::outside(&rt, "the round trip lands on another target chart", None));
        }
        Ok(if m.agrees_with(&back)? {
            Check::pass(&rt, format!("K-morphism {}; agrees on a common localization", g.describe()))
        } else {
            Check::new(&rt, Status::Fail, "round trip disagrees", Some(back.phi.describe()))
        })
    })();
    out.push(result.unwrap_or_else(|e| Check::error(&rt, &e)));
    out
}

fn kmap_check(k: &KMapEntry) -> Check {
    let name = format!("thm-1-1/{}/round-trip", k.name);
    let km = match &k.map {
        Ok(m) => m,
        Err(e) => return Check::error(&name, e),
    };
    let result = (|| -> crate::error::Result<Check> {
        let m = RationalMap::from_k_morphism(&km.source, &km.target, &km.g)?;
        let g2 = m.to_k_morphism()?;
        let open = format!("D({}) in {}", m.source.chart(m.source_chart).ring().display(&m.denom), m.source.chart(m.source_chart).name);
        Ok(if g2.agrees_with(&km.g) {
            Check::pass(&name, format!("rational map defined on {open}; reproduces {}", km.g.describe()))
        } else {
            Check::new(&name, Status::Fail, "round trip changes the morphism", Some(g2.describe()))
        })
    })();
    result.unwrap_or_else(|e| Check::error(&name, &e))
}

fn monoid_jobs<'a>(suite: Suite, m: &'a MonoidEntry, opts: SuiteOptions) -> Job<'a> {
    Box::new(move || {
        let mut out = Vec::new();
        if suite.includes(Suite::MonoidAxioms) {
            out.push(timed(|| axioms_check(m)));
        }
        if suite.includes(Suite::Integrality) {
            let t = Instant::now();
            let cs = integrality_checks(m, &opts);
            let ms = t.elapsed().as_secs_f64() * 1e3 / cs.len() as f64;
            out.extend(cs.into_iter().map(|c| (c, ms)));
        }
        if suite.includes(Suite::FractionField) {
            let t = Instant::now();
            let cs = fraction_checks(m, &opts);
            let ms = t.elapsed().as_secs_f64() * 1e3 / cs.len() as f64;
            out.extend(cs.into_iter().map(|c| (c, ms)));
        }
        out
    })
}

fn diagram_jobs<'a>(suite: Suite, d: &'a DiagramEntry, opts: SuiteOptions) -> Job<'a> {
    Box::new(move || {
        let mut out = Vec::new();
        if suite.includes(Suite::Integrality) {
            out.push(timed(|| diagram_integrality(d, &opts)));
        }
        if suite.includes(Suite::Scheme) {
            let t = Instant::now();
            let cs = scheme_checks(d, &opts);
            let ms = t.elapsed().as_secs_f64() * 1e3 / cs.len() as f64;
            out.extend(cs.into_iter().map(|c| (c, ms)));
        }
        out
    })
}

/// Runs every job, at most `threads` at a time, keeping job order.
fn run_jobs(jobs: Vec<Job<'_>>, threads: usize) -> Vec<(Check, f64)> {
    let n = jobs.len();
    let slots: Vec<Mutex<Option<Vec<(Check, f64)>>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let queue = Mutex::new(jobs.into_iter().enumerate().collect::<Vec<_>>().into_iter());
    let workers = threads.clamp(1, n.max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let next = queue.lock().expect("queue lock").next();
                let Some((i, job)) = next else { break };
                *slots[i].lock().expect("slot lock") = Some(job());
            });
        }
    });
    slots.into_iter().flat_map(|m| m.into_inner().expect("slot lock").unwrap_or_default()).collect()
}

/// Runs the named suite; check order follows declaration order.
pub fn run_suite(defs: &Definitions, suite: Suite, opts: &SuiteOptions) -> Report {
    let start = Instant::now();
    let opts = *opts;
    let mut jobs: Vec<Job<'_>> = Vec::new();
    if suite.includes(Suite::MonoidAxioms) || suite.includes(Suite::Integrality) || suite.includes(Suite::FractionField) {
        for m in &defs.monoids {
            jobs.push(monoid_jobs(suite, m, opts));
        }
    }
    if suite.includes(Suite::Integrality) || suite.includes(Suite::Scheme) {
        for d in &defs.diagrams {
            jobs.push(diagram_jobs(suite, d, opts));
        }
    }
    if suite.includes(Suite::Thm11) {
        for r in &defs.ratmaps {
            jobs.push(Box::new(move || {
                let t = Instant::now();
                let cs = ratmap_checks(r);
                let ms = t.elapsed().as_secs_f64() * 1e3 / cs.len().max(1) as f64;
                cs.into_iter().map(|c| (c, ms)).collect()
            }));
        }
        for k in &defs.kmaps {
            jobs.push(Box::new(move || vec![timed(|| kmap_check(k))]));
        }
    }
    let threads = if opts.threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        opts.threads
    };
    let results = run_jobs(jobs, threads);
    let mut summary = Summary::default();
    let mut checks = Vec::new();
    let mut timing = Timing::default();
    for (c, ms) in results {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::OutOfHypothesis => summary.out_of_hypothesis += 1,
            Status::Undecided => summary.undecided += 1,
        }
        timing.checks.push(CheckTiming { name: c.name.clone(), ms });
        checks.push(c);
    }
    timing.total_ms = start.elapsed().as_secs_f64() * 1e3;
    Report {
        format: "mscheme-report",
        version: super::parse::FORMAT_VERSION,
        suite,
        seed: opts.seed,
        degree_bound: opts.degree_bound,
        stage_bound: opts.stage_bound,
        summary,
        checks,
        timing,
    }
}
