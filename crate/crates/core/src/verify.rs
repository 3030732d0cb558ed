//! Seeded verification suites. Every identity of the construction is run
//! on sampled data and recorded as one [`CheckRecord`].
//!
//! Exact checks compare rational results and count failing samples. Float
//! checks compare a measured value against a bound. Reported checks are
//! measured the same way but never decide the overall outcome.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::Serialize;

use crate::bimodule::{sample_diagrams, CornerElement, Subobject};
use crate::category::{Morphism, TraceSide};
use crate::error::{Error, Result};
use crate::fock::{CreationSymbol, FockVector, DEFAULT_DEPTH};
use crate::gjs::{GradedElement, Gjs, DEFAULT_BOTTOM_BUDGET};
use crate::linalg::min_eigenvalue;
use crate::planar::PlanarPairing;
use crate::sampling::Sampler;
use crate::scalar::{int, to_f64, LoopParameter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CategoryIdentities,
    GjsProducts,
    TracesPositivity,
    Tower,
    Fock,
    Bimodules,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::CategoryIdentities,
        Suite::GjsProducts,
        Suite::TracesPositivity,
        Suite::Tower,
        Suite::Fock,
        Suite::Bimodules,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CategoryIdentities => "category-identities",
            Suite::GjsProducts => "gjs-products",
            Suite::TracesPositivity => "traces-positivity",
            Suite::Tower => "tower",
            Suite::Fock => "fock",
            Suite::Bimodules => "bimodules",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub delta: LoopParameter,
    /// Largest `l`, `r` (and category level) sampled.
    pub max_level: usize,
    /// Largest number of bottom strings sampled.
    pub max_bottom: usize,
    pub seed: u64,
    pub float_tol: f64,
    pub moment_p_max: usize,
    /// Bottom-string budget for moment computations.
    pub bottom_budget: usize,
    pub suites: Vec<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            delta: LoopParameter::parse("5/2").expect("5/2 is a valid loop value"),
            max_level: 3,
            max_bottom: 3,
            seed: 42,
            float_tol: 1e-7,
            moment_p_max: 64,
            bottom_budget: DEFAULT_BOTTOM_BUDGET,
            suites: Suite::ALL.to_vec(),
        }
    }
}

impl SuiteConfig {
    /// Default configuration at the given loop value; errors unless `δ > 2`.
    pub fn new(delta: &str) -> Result<Self> {
        Ok(Self {
            delta: LoopParameter::parse(delta)?,
            ..Self::default()
        })
    }

    pub fn with_suite_names<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        if !names.is_empty() {
            self.suites = names.iter().map(|n| n.as_ref().parse()).collect::<Result<_>>()?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.float_tol.is_nan() || self.float_tol <= 0.0 {
            return Err(Error::Config(format!("float tolerance must be positive, got {}", self.float_tol)));
        }
        if self.moment_p_max == 0 || !self.moment_p_max.is_power_of_two() {
            return Err(Error::MomentOrder(self.moment_p_max));
        }
        if self.max_level == 0 || self.max_bottom == 0 {
            return Err(Error::Config("max level and max bottom must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
    Reported,
}

/// Outcome of one check.
///
/// Exact checks set `residual` to the number of failing samples. Float and
/// reported checks set `value` to the measured quantity and `margin` to its
/// signed distance from the bound, so that `margin >= 0` means the bound
/// holds.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub anchor: String,
    pub mode: Mode,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl CheckRecord {
    pub fn gates(&self) -> bool {
        self.mode != Mode::Reported
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

impl Report {
    /// True when every exact and float check passed.
    pub fn gates_pass(&self) -> bool {
        self.records.iter().filter(|r| r.gates()).all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.gates() && !r.pass)
    }

    pub fn find(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.lines(true)
    }

    /// As [`to_json_lines`](Self::to_json_lines) with timing removed; equal
    /// configurations give byte-identical output.
    pub fn to_json_lines_untimed(&self) -> String {
        self.lines(false)
    }

    fn lines(&self, timed: bool) -> String {
        let mut out = String::new();
        for r in &self.records {
            let mut v = serde_json::to_value(r).expect("plain data");
            if !timed {
                v.as_object_mut().unwrap().remove("elapsed_ms");
            }
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

/// Runs the configured suites in order.
pub fn run_suites(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let mut runner = Runner {
        cfg,
        gjs: Gjs::new(cfg.delta.clone()).with_bottom_budget(cfg.bottom_budget),
        suite: Suite::CategoryIdentities,
        records: Vec::new(),
    };
    for suite in &cfg.suites {
        runner.suite = *suite;
        match suite {
            Suite::CategoryIdentities => category_identities(&mut runner),
            Suite::GjsProducts => gjs_products(&mut runner),
            Suite::TracesPositivity => traces_positivity(&mut runner),
            Suite::Tower => tower(&mut runner),
            Suite::Fock => fock(&mut runner),
            Suite::Bimodules => bimodules(&mut runner),
        }
    }
    Ok(Report {
        seed: cfg.seed,
        records: runner.records,
    })
}

/// One row of [`dimension_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub b: usize,
    pub l: usize,
    pub r: usize,
    pub dim: u64,
}

/// `dim V_{b,l,r}` for every triple with `b + l + r ≤ 2·max_n`.
pub fn dimension_table(max_n: usize) -> Result<Vec<DimensionRow>> {
    if max_n > 10 {
        return Err(Error::Config(format!("dimension table is limited to max_n <= 10, got {max_n}")));
    }
    let catalan = catalan_numbers(max_n);
    let mut rows = Vec::new();
    for total in 0..=2 * max_n {
        for b in 0..=total {
            for l in 0..=total - b {
                let r = total - b - l;
                let dim = if total % 2 == 0 { catalan[total / 2] } else { 0 };
                rows.push(DimensionRow { b, l, r, dim });
            }
        }
    }
    Ok(rows)
}

fn catalan_numbers(n: usize) -> Vec<u64> {
    let mut c = vec![1u64; n + 1];
    for k in 1..=n {
        c[k] = (0..k).map(|i| c[i] * c[k - 1 - i]).sum();
    }
    c
}

struct Tally {
    samples: usize,
    failures: usize,
}

fn tally(samples: usize, mut f: impl FnMut(usize) -> Result<bool>) -> Result<Tally> {
    let mut failures = 0;
    for i in 0..samples {
        if !f(i)? {
            failures += 1;
        }
    }
    Ok(Tally { samples, failures })
}

struct Measure {
    samples: usize,
    value: f64,
    bound: f64,
    /// `true` when the value must be at least the bound, `false` when at
    /// most.
    at_least: bool,
}

impl Measure {
    fn at_least(samples: usize, value: f64, bound: f64) -> Self {
        Self {
            samples,
            value,
            bound,
            at_least: true,
        }
    }

    fn at_most(samples: usize, value: f64, bound: f64) -> Self {
        Self {
            samples,
            value,
            bound,
            at_least: false,
        }
    }

    fn margin(&self) -> f64 {
        if self.at_least {
            self.value - self.bound
        } else {
            self.bound - self.value
        }
    }
}

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    gjs: Gjs,
    suite: Suite,
    records: Vec<CheckRecord>,
}

impl Runner<'_> {
    fn sampler(&self, name: &str) -> Sampler {
        // FNV-1a of the check name keeps each check's stream independent
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in name.bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        Sampler::new(self.cfg.seed ^ h)
    }

    fn push(&mut self, name: &str, anchor: &str, mode: Mode, start: Instant, fill: impl FnOnce(&mut CheckRecord)) {
        let mut record = CheckRecord {
            suite: self.suite,
            name: name.to_string(),
            anchor: anchor.to_string(),
            mode,
            samples: 0,
            residual: None,
            value: None,
            margin: None,
            pass: false,
            error: None,
            elapsed_ms: 0.0,
        };
        fill(&mut record);
        record.elapsed_ms = (start.elapsed().as_secs_f64() * 1e3 * 1000.0).round() / 1000.0;
        self.records.push(record);
    }

    fn exact(&mut self, name: &str, anchor: &str, f: impl FnOnce(&Gjs, &mut Sampler) -> Result<Tally>) {
        let mut sampler = self.sampler(name);
        let start = Instant::now();
        let outcome = f(&self.gjs, &mut sampler);
        self.push(name, anchor, Mode::Exact, start, |r| match outcome {
            Ok(t) => {
                r.samples = t.samples;
                r.residual = Some(t.failures as f64);
                r.pass = t.failures == 0;
            }
            Err(e) => r.error = Some(e.to_string()),
        });
    }

    fn measured(&mut self, mode: Mode, name: &str, anchor: &str, f: impl FnOnce(&Gjs, &mut Sampler) -> Result<Measure>) {
        let mut sampler = self.sampler(name);
        let start = Instant::now();
        let outcome = f(&self.gjs, &mut sampler);
        self.push(name, anchor, mode, start, |r| match outcome {
            Ok(m) => {
                r.samples = m.samples;
                r.value = Some(m.value);
                r.margin = Some(m.margin());
                r.pass = m.margin() >= 0.0;
            }
            Err(e) => r.error = Some(e.to_string()),
        });
    }

    fn float(&mut self, name: &str, anchor: &str, f: impl FnOnce(&Gjs, &mut Sampler) -> Result<Measure>) {
        self.measured(Mode::Float, name, anchor, f)
    }

    fn reported(&mut self, name: &str, anchor: &str, f: impl FnOnce(&Gjs, &mut Sampler) -> Result<Measure>) {
        self.measured(Mode::Reported, name, anchor, f)
    }
}

/// Levels `≤ max` all of one parity, so that morphisms between them exist.
fn levels<const N: usize>(s: &mut Sampler, max: usize) -> [usize; N] {
    use rand::Rng;
    let parity = s.rng().random_range(0..=1usize);
    let choices: Vec<usize> = (0..=max).filter(|n| n % 2 == parity).collect();
    let choices = if choices.is_empty() { vec![0] } else { choices };
    std::array::from_fn(|_| choices[s.rng().random_range(0..choices.len())])
}

fn pick(s: &mut Sampler, lo: usize, hi: usize) -> usize {
    use rand::Rng;
    s.rng().random_range(lo..=hi)
}

fn jones(g: &Gjs) -> Morphism {
    let cupcap = g.tl().compose(&Morphism::cup(), &Morphism::cap()).unwrap();
    cupcap.scale(g.delta().inverse())
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn category_identities(r: &mut Runner) {
    let max = r.cfg.max_level;
    let tol = r.cfg.float_tol;

    r.exact("zig-zag", "zig-zag equations", |g, _| {
        let tl = g.tl();
        tally(6, |n| {
            let (ev, coev) = tl.ev_coev(n);
            let id = Morphism::identity(n);
            let one = tl.compose(&ev.tensor(&id), &id.tensor(&coev))?;
            let other = tl.compose(&id.tensor(&ev), &coev.tensor(&id))?;
            Ok(one == id && other == id)
        })
    });

    r.exact("nested loops", "closed loops evaluate to the loop value", |g, _| {
        let tl = g.tl();
        tally(6, |n| {
            let (ev, _) = tl.ev_coev(n);
            let loops = tl.compose(&ev, &ev.dagger())?;
            Ok(loops == Morphism::from_term(PlanarPairing::empty(), g.delta().pow(n as i64)))
        })
    });

    r.exact("balancing", "left and right traces agree", |g, s| {
        tally(200, |_| {
            let n = pick(s, 0, 5);
            let f = s.morphism(n, n);
            Ok(g.tl().categorical_trace(&f, TraceSide::Left)? == g.tl().categorical_trace(&f, TraceSide::Right)?)
        })
    });

    r.exact("dagger", "dagger is an involutive anti-homomorphism", |g, s| {
        tally(50, |_| {
            let [a, b, c] = levels::<3>(s, max);
            let f = s.morphism(a, b);
            let h = s.morphism(b, c);
            let lhs = g.tl().compose(&h, &f)?.dagger();
            let rhs = g.tl().compose(&f.dagger(), &h.dagger())?;
            Ok(lhs == rhs && f.dagger().dagger() == f && f.tensor(&h).dagger() == f.dagger().tensor(&h.dagger()))
        })
    });

    r.exact("duals", "dual of a morphism", |g, s| {
        let tl = g.tl();
        tally(50, |_| {
            let [a, b, c] = levels::<3>(s, max);
            let f = s.morphism(b, c);
            let h = s.morphism(a, b);
            let twice = tl.dual_morphism(&tl.dual_morphism(&f)?)? == f;
            let composite = tl.dual_morphism(&tl.compose(&f, &h)?)? == tl.compose(&tl.dual_morphism(&h)?, &tl.dual_morphism(&f)?)?;
            let dagger = tl.dual_morphism(&f.dagger())? == tl.dual_morphism(&f)?.dagger();
            Ok(twice && composite && dagger)
        })
    });

    r.exact("frobenius reciprocity", "Frobenius reciprocity is a *-anti-isomorphism", |g, s| {
        let tl = g.tl();
        tally(200, |_| {
            let [k, m, n] = levels::<3>(s, max);
            let f = s.morphism(m, n);
            let h = s.morphism(k, m);
            let product = tl.frobenius_reciprocity(&tl.compose(&f, &h)?) == g.wedge(&tl.frobenius_reciprocity(&h), &tl.frobenius_reciprocity(&f));
            let star = tl.frobenius_reciprocity(&f.dagger()) == tl.frobenius_reciprocity(&f).star();
            Ok(product && star)
        })
    });

    r.exact("weight under reciprocity", "the weight restricts to the categorical trace", |g, s| {
        tally(50, |_| {
            let n = pick(s, 0, max);
            let f = s.morphism(n, n);
            Ok(g.weight_phi(&g.tl().frobenius_reciprocity(&f))? == g.tl().categorical_trace(&f, TraceSide::Right)?)
        })
    });

    r.float("gram positivity", "the trace is positive definite on hom spaces", |g, _| {
        let mut least = f64::INFINITY;
        for n in 0..=4 {
            least = least.min(g.tl().gns(n)?.gram_min_eigenvalue());
        }
        Ok(Measure::at_least(5, least, 1e-9))
    });

    r.float("C*-identity", "the GNS norm is a C*-norm", |g, s| {
        let mut worst: f64 = 0.0;
        for _ in 0..30 {
            let n = pick(s, 1, max);
            let gns = g.tl().gns(n)?;
            let f = s.morphism(n, n);
            let h = s.morphism(n, n);
            let norm = |x: &Morphism| -> Result<f64> { Ok(gns.geometry().operator_norm(&gns.leftmult(x)?)) };
            let nf = norm(&f)?;
            let nh = norm(&h)?;
            let star = norm(&g.tl().compose(&f.dagger(), &f)?)?;
            let product = norm(&g.tl().compose(&f, &h)?)?;
            worst = worst.max(relative_gap(star, nf * nf));
            worst = worst.max((product - nf * nh) / 1f64.max(nf * nh));
        }
        Ok(Measure::at_most(30, worst, tol))
    });

    r.float("reference norms", "norms of identities and the Jones idempotent", |g, _| {
        let tl = g.tl();
        let e = jones(g);
        let mut worst: f64 = 0.0;
        for n in 0..=3 {
            worst = worst.max((tl.operator_norm(&Morphism::identity(n), n)? - 1.0).abs());
        }
        worst = worst.max((tl.operator_norm(&e, 2)? - 1.0).abs());
        let cupcap = e.scale(g.delta().value());
        worst = worst.max((tl.operator_norm(&cupcap, 2)? - g.delta().as_f64()).abs());
        Ok(Measure::at_most(6, worst, 1e-9))
    });
}

fn gjs_products(r: &mut Runner) {
    let (mb, ml) = (r.cfg.max_bottom, r.cfg.max_level);

    r.exact("wedge associativity", "the graded product is associative", |g, s| {
        tally(100, |_| {
            let (x, y, z) = (s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml));
            Ok(g.wedge(&g.wedge(&x, &y), &z) == g.wedge(&x, &g.wedge(&y, &z)))
        })
    });

    r.exact("walker associativity", "the Walker product is associative", |g, s| {
        tally(100, |_| {
            let (x, y, z) = (s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml));
            Ok(g.walker(&g.walker(&x, &y), &z) == g.walker(&x, &g.walker(&y, &z)))
        })
    });

    r.exact("star anti-homomorphism", "the involution reverses both products", |g, s| {
        tally(100, |_| {
            let (x, y) = (s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml));
            let wedge = g.wedge(&x, &y).star() == g.wedge(&y.star(), &x.star());
            let walker = g.walker(&x, &y).star() == g.walker(&y.star(), &x.star());
            Ok(wedge && walker && x.star().star() == x)
        })
    });

    r.exact("walker representation", "the Walker action is a *-representation", |g, s| {
        tally(100, |_| {
            let (x, y) = (s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml));
            let (v, w) = (s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml));
            let multiplicative = g.walker(&x, &g.walker(&y, &v)) == g.walker(&g.walker(&x, &y), &v);
            let pairing = |a: &GradedElement, b: &GradedElement| g.voiculescu_trace(&g.expectation_onto_a(&g.walker(&a.star(), b)));
            let adjoint = pairing(&g.walker(&x, &v), &w) == pairing(&v, &g.walker(&x.star(), &w));
            Ok(multiplicative && adjoint)
        })
    });

    r.exact("walker leading term", "the Walker product deforms the graded product", |g, s| {
        tally(50, |_| {
            let (x, y) = (s.graded_in(mb, ml, ml), s.graded_in(mb, ml, ml));
            let a = s.graded_in(0, ml, ml);
            Ok(g.walker_term(&x, &y, 0) == g.wedge(&x, &y) && g.walker(&a, &y) == g.wedge(&a, &y) && g.walker(&x, &a) == g.wedge(&x, &a))
        })
    });

    r.exact("units and corners", "p_n are the units of the corners", |g, s| {
        tally(50, |_| {
            let x = s.graded_in(mb, ml, ml);
            let (n, m) = (pick(s, 0, ml), pick(s, 0, ml));
            let projected = g.corner_projection(&x, n, m);
            let corner = s.corner(n, m, mb);
            let b0 = s.corner(0, 0, mb);
            Ok(projected.lies_in_corner(n, m)
                && g.corner_projection(&projected, n, m) == projected
                && g.corner_projection(&corner, n, m) == corner
                && g.wedge(&b0, &GradedElement::unit()) == b0
                && g.wedge(&GradedElement::unit(), &b0) == b0)
        })
    });
}

/// All basis diagrams with `b + l + r ≤ max_total`.
fn all_diagrams(max_total: usize) -> Vec<GradedElement> {
    let mut out = Vec::new();
    for total in (0..=max_total).step_by(2) {
        for b in 0..=total {
            for l in 0..=total - b {
                let r = total - b - l;
                for p in PlanarPairing::enumerate(b, l + r) {
                    out.push(GradedElement::from_pairing(b, l, r, p).unwrap());
                }
            }
        }
    }
    out
}

/// Gram matrix `[Tr(d_i* ∧ d_j)]`.
pub fn trace_gram(g: &Gjs, diagrams: &[GradedElement]) -> DMatrix<f64> {
    let d = diagrams.len();
    let mut gram = DMatrix::zeros(d, d);
    for i in 0..d {
        let di = diagrams[i].star();
        for j in i..d {
            let v = to_f64(&g.voiculescu_trace(&g.wedge(&di, &diagrams[j])));
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    gram
}

fn traces_positivity(r: &mut Runner) {
    let (mb, ml) = (r.cfg.max_bottom, r.cfg.max_level);

    r.exact("wedge traciality", "the Voiculescu trace is tracial", |g, s| {
        tally(200, |_| {
            let (l, rr) = (pick(s, 0, ml), pick(s, 0, ml));
            let x = s.corner(l, rr, mb.max(1));
            let y = s.corner(rr, l, mb.max(1));
            Ok(g.voiculescu_trace(&g.wedge(&x, &y)) == g.voiculescu_trace(&g.wedge(&y, &x)))
        })
    });

    r.exact("walker traciality", "the weight composed with the expectation is tracial", |g, s| {
        tally(100, |_| {
            let (l, rr) = (pick(s, 0, ml), pick(s, 0, ml));
            let x = s.corner(l, rr, mb.max(1));
            let y = s.corner(rr, l, mb.max(1));
            let trace = |a: &GradedElement, b: &GradedElement| g.voiculescu_trace(&g.expectation_onto_a(&g.walker(a, b)));
            Ok(trace(&x, &y) == trace(&y, &x))
        })
    });

    r.float("trace positivity", "the Voiculescu trace is positive definite", |g, _| {
        let diagrams = all_diagrams(6);
        let gram = trace_gram(g, &diagrams);
        Ok(Measure::at_least(diagrams.len(), min_eigenvalue(&gram), 1e-9))
    });

    r.exact("normalized corner traces", "tr_n(p_n) = 1", |g, _| {
        tally(5, |n| Ok(g.normalized_trace(&GradedElement::projection(n), n)? == int(1)))
    });

    r.exact("reference traces", "loops in closed diagrams", |g, _| {
        let arc = GradedElement::from_pairing(2, 0, 0, PlanarPairing::new(2, 0, &[(0, 1)])?)?;
        let mut checks = vec![
            g.voiculescu_trace(&arc) == *g.delta().value(),
            g.weight_phi(&GradedElement::unit())? == int(1),
        ];
        for n in 0..=4 {
            checks.push(g.weight_phi(&GradedElement::projection(n))? == g.delta().pow(n as i64));
        }
        tally(checks.len(), |i| Ok(checks[i]))
    });
}

fn tower(r: &mut Runner) {
    let (mb, ml) = (r.cfg.max_bottom, r.cfg.max_level);
    let tol = r.cfg.float_tol;
    let p_max = r.cfg.moment_p_max;

    r.exact("iota homomorphism", "iota_n is a trace-compatible *-homomorphism", |g, s| {
        tally(20 * (ml + 1), |i| {
            let n = i % (ml + 1);
            let (x, y) = (s.corner(0, 0, mb), s.corner(0, 0, mb));
            let product = g.iota(&g.wedge(&x, &y), n)? == g.wedge(&g.iota(&x, n)?, &g.iota(&y, n)?);
            let star = g.iota(&x.star(), n)? == g.iota(&x, n)?.star();
            let trace = g.normalized_trace(&x, 0)? == g.normalized_trace(&g.iota(&x, n)?, n)?;
            Ok(product && star && trace)
        })
    });

    r.exact("conditional expectation", "E_n is a trace-preserving conditional expectation", |g, s| {
        tally(20 * ml, |i| {
            let n = 1 + i % ml;
            let m = s.corner(n, n, mb);
            let (a, b) = (s.corner(0, 0, mb), s.corner(0, 0, mb));
            let (ia, ib) = (g.iota(&a, n)?, g.iota(&b, n)?);
            let e = g.expectation_en(&m, n)?;
            let idempotent = g.expectation_en(&e, n)? == e;
            let fixes = g.expectation_en(&ia, n)? == ia;
            let sandwiched = g.wedge(&g.wedge(&ia, &m), &ib);
            let bimodular = g.expectation_en(&sandwiched, n)? == g.wedge(&g.wedge(&ia, &e), &ib);
            let trace = g.normalized_trace(&e, n)? == g.normalized_trace(&m, n)?;
            Ok(idempotent && fixes && bimodular && trace)
        })
    });

    let positive_samples = |g: &Gjs, s: &mut Sampler| -> Vec<(usize, GradedElement)> {
        (0..30)
            .map(|i| {
                let n = 1 + i % 2;
                let m = if n == 2 { 2 * pick(s, 0, 1) } else { 1 };
                let c = s.sector(0, m, n);
                (n, g.wedge(&c.star(), &c))
            })
            .collect()
    };

    r.float("pimsner-popa", "Pimsner-Popa inequality at the index bound", |g, s| {
        let mut least = f64::INFINITY;
        for (n, b) in positive_samples(g, s) {
            least = least.min(g.pimsner_popa_margin(&b, n, &g.delta().pow(-2 * n as i64))?);
        }
        Ok(Measure::at_least(30, least, -1e-8))
    });

    r.reported("pimsner-popa stated constant", "Pimsner-Popa inequality with constant delta^-n", |g, s| {
        let mut least = f64::INFINITY;
        for (n, b) in positive_samples(g, s) {
            least = least.min(g.pimsner_popa_margin(&b, n, &g.delta().pow(-(n as i64)))?);
        }
        Ok(Measure::at_least(30, least, -1e-8))
    });

    r.exact("relative commutant", "Gr_{0,n} commutes with iota_n of the ground corner", |g, s| {
        tally(50, |i| {
            let x = s.corner(0, 0, mb);
            let (a, n) = if i % 2 == 0 {
                (&s.sector(0, 0, 0) + &s.sector(0, 1, 1), 1)
            } else {
                let n = pick(s, 1, ml);
                (s.sector(0, n, n), n)
            };
            let ix = g.iota(&x, n)?;
            let commute = |a: &GradedElement, y: &GradedElement| g.wedge(a, y) == g.wedge(y, a);
            Ok(commute(&a, &ix))
        })
    });

    let ground = |s: &mut Sampler, level: usize| -> GradedElement {
        let mut a = GradedElement::zero();
        while a.is_zero() {
            for _ in 0..2 {
                let (_, l, r) = s.even_triple(0, level, level);
                a = &a + &s.sector(0, l, r);
            }
        }
        a
    };

    r.exact("level embedding", "level inclusions are *-homomorphisms", |g, s| {
        tally(50, |_| {
            let (a, b) = (ground(s, 2), ground(s, 2));
            let m = pick(s, 1, 2);
            let product = g.embed_level(&g.wedge(&a, &b), m)? == g.wedge(&g.embed_level(&a, m)?, &g.embed_level(&b, m)?);
            let star = g.embed_level(&a.star(), m)? == g.embed_level(&a, m)?.star();
            Ok(product && star)
        })
    });

    r.float("level embedding isometry", "level inclusions are isometric", |g, s| {
        let (low, high) = (g.ground_gns(2)?, g.ground_gns(3)?);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let a = ground(s, 2);
            let before = low.geometry().operator_norm(&low.leftmult(&a)?);
            let after = high.geometry().operator_norm(&high.leftmult(&g.embed_level(&a, 1)?)?);
            worst = worst.max(relative_gap(before, after));
        }
        Ok(Measure::at_most(20, worst, tol))
    });

    r.float("jones idempotent norm", "the Jones idempotent has norm one", |g, _| {
        let e = g.tl().frobenius_reciprocity(&jones(g));
        Ok(Measure::at_most(1, (g.ground_operator_norm(&e, 2)? - 1.0).abs(), tol))
    });

    r.float("jones moment estimate", "norm as the limit of trace moments", |g, _| {
        let e = g.tl().frobenius_reciprocity(&jones(g));
        let estimate = g.norm_estimate(&e, p_max)?.last().unwrap().estimate;
        let norm = g.ground_operator_norm(&e, 2)?;
        Ok(Measure::at_least(1, estimate / norm, 0.97))
    });

    r.float("moment monotonicity", "moment estimates increase to the norm", |g, s| {
        let mut worst = f64::INFINITY;
        for _ in 0..50 {
            let n = pick(s, 0, 2);
            let a = s.corner(n, n, 2);
            let per_power = 2 * a.max_bottom();
            let mut p = 1;
            while p < 8 && per_power * p * 2 <= g.bottom_budget() {
                p *= 2;
            }
            let est = g.norm_estimate(&a, p)?;
            for w in est.windows(2) {
                worst = worst.min((w[1].estimate - w[0].estimate) / 1f64.max(w[0].estimate));
            }
        }
        Ok(Measure::at_least(50, worst, -1e-12))
    });
}

fn fock(r: &mut Runner) {
    let ml = r.cfg.max_level;
    let depth = DEFAULT_DEPTH;
    // vectors stay two sectors below the depth so one creation never truncates
    let vb = depth - 2;

    let symbol = |s: &mut Sampler| -> GradedElement {
        let (l, rr) = loop {
            let (l, rr) = (pick(s, 0, ml), pick(s, 0, ml));
            if (1 + l + rr) % 2 == 0 {
                break (l, rr);
            }
        };
        s.sector(1, l, rr)
    };

    r.exact("pimsner relation", "annihilation after creation multiplies by the inner product", |g, s| {
        tally(50, |_| {
            let (xi, eta) = (CreationSymbol::new(symbol(s))?, CreationSymbol::new(symbol(s))?);
            let v = FockVector::from_element(depth, &s.graded_in(vb, ml, ml));
            let created = g.create(&eta, &v);
            if created.truncated() {
                return Ok(false);
            }
            let inner = g.inner_a(xi.element(), eta.element());
            let expected = FockVector::from_element(depth, &g.wedge(&inner, &v.to_element()));
            Ok(g.annihilate(&xi, &created) == expected)
        })
    });

    r.exact("vacuum", "creation and annihilation on the ground algebra", |g, s| {
        tally(20, |_| {
            let x = symbol(s);
            let xi = CreationSymbol::new(x.clone())?;
            let rr = x.sectors().next().unwrap().r;
            let vacuum = FockVector::vacuum(depth, &GradedElement::projection(rr));
            let created = g.create(&xi, &vacuum);
            let a = s.graded_in(0, ml, ml);
            Ok(created.sector(1) == x
                && g.annihilate(&xi, &vacuum).is_zero()
                && g.annihilate(&xi, &FockVector::vacuum(depth, &a)).is_zero()
                && g.annihilate(&xi, &created).sector(0) == g.inner_a(&x, &x))
        })
    });

    r.exact("creation adjoint", "creation and annihilation are adjoint", |g, s| {
        tally(50, |_| {
            let xi = CreationSymbol::new(symbol(s))?;
            let v = FockVector::from_element(depth, &s.graded_in(vb, ml, ml));
            let w = FockVector::from_element(depth, &s.graded_in(vb + 1, ml, ml));
            Ok(g.fock_inner(&g.create(&xi, &v), &w) == g.fock_inner(&v, &g.annihilate(&xi, &w)))
        })
    });

    r.exact("walker equals creation plus annihilation", "pi(xi) = L(xi) + L(xi)* on real vectors", |g, s| {
        tally(50, |_| {
            let eta = symbol(s);
            let xi = CreationSymbol::new(&eta + &eta.star())?;
            if !xi.is_self_adjoint() {
                return Ok(false);
            }
            let v = FockVector::from_element(depth, &s.graded_in(vb, ml, ml));
            let sum = g.create(&xi, &v).add(&g.annihilate(&xi, &v));
            let walker = FockVector::from_element(depth, &g.walker(xi.element(), &v.to_element()));
            Ok(!sum.truncated() && sum == walker)
        })
    });

    r.exact("sector identification", "U_{b,b'} is a unitary of right modules", |g, s| {
        tally(50, |_| {
            let (b, b2, b3) = (pick(s, 0, 2), pick(s, 0, 2), pick(s, 0, 2));
            let (l, m, n, k) = (pick(s, 0, ml), pick(s, 0, ml), pick(s, 0, ml), pick(s, 0, ml));
            let sample = |s: &mut Sampler, b: usize, l: usize, r: usize| {
                if (b + l + r) % 2 == 0 {
                    s.sector(b, l, r)
                } else {
                    s.sector(b, l, r + 1)
                }
            };
            let xi = sample(s, b, l, m);
            let m = xi.sectors().next().unwrap().r;
            let eta = sample(s, b2, m, n);
            let n = eta.sectors().next().unwrap().r;
            let zeta = sample(s, b3, n, k);
            let assoc = g.identify_sectors(&g.identify_sectors(&xi, &eta), &zeta) == g.identify_sectors(&xi, &g.identify_sectors(&eta, &zeta));
            let joined = g.identify_sectors(&xi, &eta);
            let unitary = g.inner_a(&joined, &joined) == g.inner_a(&eta, &g.wedge(&g.inner_a(&xi, &xi), &eta));
            let k2 = pick(s, 0, ml);
            let eta2 = sample(s, b2, m, k2);
            let adjoint = g.inner_a(&eta, &eta2).star() == g.inner_a(&eta2, &eta);
            let k3 = pick(s, 0, ml);
            let a = sample(s, 0, n, k3);
            let linear = g.inner_a(&eta2, &g.wedge(&eta, &a)) == g.wedge(&g.inner_a(&eta2, &eta), &a);
            Ok(assoc && unitary && adjoint && linear)
        })
    });
}

fn bimodules(r: &mut Runner) {
    let (mb, ml) = (r.cfg.max_bottom, r.cfg.max_level);
    let shapes: Vec<(usize, usize)> = (0..=3).flat_map(|t| (0..=t).map(move |l| (l, t - l))).collect();
    let elem = |s: &mut Sampler, l: usize, r: usize| CornerElement::new(l, r, s.corner(l, r, mb.max(1))).unwrap();
    let b0 = |s: &mut Sampler| CornerElement::new(0, 0, s.corner(0, 0, 2)).unwrap();

    r.exact("trace compatibility", "tr of right and left inner products agree", |g, s| {
        tally(200 * shapes.len(), |i| {
            let (l, rr) = shapes[i % shapes.len()];
            let (xi, eta) = (elem(s, l, rr), elem(s, l, rr));
            Ok(g.voiculescu_trace(g.right_inner(&xi, &eta)?.payload()) == g.voiculescu_trace(g.left_inner(&eta, &xi)?.payload()))
        })
    });

    r.exact("fusion isometry", "Psi_n is a B_0-bilinear unitary", |g, s| {
        tally(150, |i| {
            let factors = if i < 100 { 2 } else { 3 };
            let word: Vec<CornerElement> = (0..factors).map(|_| elem(s, 0, 1)).collect();
            let other: Vec<CornerElement> = (0..factors).map(|_| elem(s, 0, 1)).collect();
            let fused = g.right_inner(&g.fuse(&word)?, &g.fuse(&other)?)?;
            let mut nested = g.right_inner(&word[0], &other[0])?;
            for k in 1..factors {
                nested = g.right_inner(&word[k], &g.act_left(&nested, &other[k])?)?;
            }
            let b = b0(s);
            let balanced = g.fuse(&[g.act_right(&word[0], &b)?, word[1].clone()])? == g.fuse(&[word[0].clone(), g.act_left(&b, &word[1])?])?;
            Ok(fused == nested && balanced)
        })
    });

    r.exact("functor", "F is a bilinear dagger functor", |g, s| {
        tally(200, |_| {
            let [k, m, n] = levels::<3>(s, ml);
            let f = s.morphism(k, m);
            let h = s.morphism(m, n);
            let xi = elem(s, 0, k);
            let eta = elem(s, 0, m);
            let identity = g.functor_on_morphism(&Morphism::identity(k), &xi)? == xi;
            let composite = g.functor_on_morphism(&g.tl().compose(&h, &f)?, &xi)? == g.functor_on_morphism(&h, &g.functor_on_morphism(&f, &xi)?)?;
            let adjoint = g.right_inner(&g.functor_on_morphism(&f, &xi)?, &eta)? == g.right_inner(&xi, &g.functor_on_morphism(&f.dagger(), &eta)?)?;
            let (a, b) = (b0(s), b0(s));
            let bilinear = g.functor_on_morphism(&f, &g.act(&a, &xi, &b)?)? == g.act(&a, &g.functor_on_morphism(&f, &xi)?, &b)?;
            Ok(identity && composite && adjoint && bilinear)
        })
    });

    r.exact("faithful functor", "F recovers every morphism", |g, s| {
        tally(200, |_| {
            let [m, n] = levels::<2>(s, ml);
            let f = s.morphism(m, n);
            Ok(g.recover_morphism(&f)? == f)
        })
    });

    r.exact("tensorator naturality", "the tensorator of F is natural", |g, s| {
        tally(100, |_| {
            let [a, b] = levels::<2>(s, ml.min(2));
            let [c, d] = levels::<2>(s, ml.min(2));
            let (f, h) = (s.morphism(a, b), s.morphism(c, d));
            let (xi, eta) = (elem(s, 0, a), elem(s, 0, c));
            let lhs = g.tensorator(&g.functor_on_morphism(&f, &xi)?, &g.functor_on_morphism(&h, &eta)?)?;
            let rhs = g.functor_on_morphism(&f.tensor(&h), &g.tensorator(&xi, &eta)?)?;
            Ok(lhs == rhs)
        })
    });

    r.exact("actions", "left and right B_0 actions", |g, s| {
        tally(50, |_| {
            let (l, rr) = shapes[pick(s, 0, shapes.len() - 1)];
            let xi = elem(s, l, rr);
            let (a, a2, b) = (b0(s), b0(s), b0(s));
            let unit = CornerElement::unit();
            let trivial = g.act(&unit, &xi, &unit)? == xi;
            let product = CornerElement::new(0, 0, g.wedge(a.payload(), a2.payload()))?;
            let assoc = g.act_left(&product, &xi)? == g.act_left(&a, &g.act_left(&a2, &xi)?)?;
            let commute = g.act_left(&a, &g.act_right(&xi, &b)?)? == g.act_right(&g.act_left(&a, &xi)?, &b)?;
            Ok(trivial && assoc && commute)
        })
    });

    r.exact("inner products", "B_0-valued inner products", |g, s| {
        tally(50, |_| {
            let (l, rr) = shapes[pick(s, 0, shapes.len() - 1)];
            let (xi, eta, b) = (elem(s, l, rr), elem(s, l, rr), b0(s));
            let right = g.right_inner(&xi, &g.act_right(&eta, &b)?)?.payload().clone() == g.wedge(g.right_inner(&xi, &eta)?.payload(), b.payload());
            let right_sym = g.right_inner(&xi, &eta)?.star() == g.right_inner(&eta, &xi)?;
            let left = g.left_inner(&g.act_left(&b, &xi)?, &eta)?.payload().clone() == g.wedge(b.payload(), g.left_inner(&xi, &eta)?.payload());
            let left_sym = g.left_inner(&xi, &eta)?.star() == g.left_inner(&eta, &xi)?;
            Ok(right && right_sym && left && left_sym)
        })
    });

    r.exact("dot shift and conjugation", "phi(xi)* = phi^-1(xi*) and conjugate bimodules", |g, s| {
        tally(50, |_| {
            let xi = elem(s, 0, 1);
            let flipped = elem(s, 1, 0);
            let shift = xi.dot_shift(1)?.star() == xi.star().dot_shift(-1)?;
            let shift_back = flipped.dot_shift(-1)?.star() == flipped.star().dot_shift(1)?;
            let n = pick(s, 1, ml);
            let (x, y) = (elem(s, 0, n), elem(s, 0, n));
            let involution = x.conjugate()?.conjugate()? == x;
            let inner = g.right_inner(&x.conjugate()?, &y.conjugate()?)? == g.left_inner(&x, &y)?;
            Ok(shift && shift_back && involution && inner)
        })
    });

    r.exact("conjugation structure", "chi is monoidal and natural", |g, s| {
        tally(50, |_| {
            let [m, n] = levels::<2>(s, ml);
            let f = s.morphism(m, n);
            let xi = elem(s, 0, m);
            let width = pick(s, 1, 2);
            let eta = elem(s, 0, width);
            let natural = g.conj_structure(&g.functor_on_morphism(&f, &xi)?)? == g.functor_on_morphism(&f.mirror(), &g.conj_structure(&xi)?)?;
            let monoidal = g.conj_structure(&g.tensorator(&xi, &eta)?)? == g.tensorator(&g.conj_structure(&eta)?, &g.conj_structure(&xi)?)?;
            let involutive = g.conj_structure(&g.conj_structure(&xi)?)? == xi;
            Ok(natural && monoidal && involutive)
        })
    });

    r.float("L2 positivity", "the L2 inner product is positive definite", |g, _| {
        let diagrams = sample_diagrams((0, 1), 5);
        let d = diagrams.len();
        let mut gram = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                gram[(i, j)] = to_f64(&g.l2_inner(&diagrams[i], &diagrams[j])?);
            }
        }
        Ok(Measure::at_least(d, min_eigenvalue(&gram), 1e-9))
    });

    r.exact("L2 adjoint", "F(f) and F(f dagger) are adjoint for the L2 product", |g, s| {
        tally(50, |_| {
            let [m, n] = levels::<2>(s, ml);
            let f = s.morphism(m, n);
            let (xi, eta) = (elem(s, 0, m), elem(s, 0, n));
            Ok(g.l2_inner(&g.functor_on_morphism(&f, &xi)?, &eta)? == g.l2_inner(&xi, &g.functor_on_morphism(&f.dagger(), &eta)?)?)
        })
    });

    r.exact("minimality", "left and right traces agree on Gr_{0,n}", |g, _| {
        let mut cases = Vec::new();
        for n in 0..=ml {
            for p in PlanarPairing::enumerate(0, 2 * n) {
                cases.push((n, GradedElement::from_pairing(0, n, n, p)?));
            }
        }
        tally(cases.len(), |i| Ok(g.minimality_defect(&cases[i].1, cases[i].0)? .is_zero()))
    });

    r.exact("index", "the standard bimodule has index delta on both sides", |g, _| {
        let surrogate = g.index_surrogate()? == GradedElement::projection(1).scale(g.delta().value());
        let unit = [CornerElement::unit()];
        let ground = g.index_from_bases(&unit, &unit, 4)? == (Some(int(1)), Some(int(1)));
        let doubled = [CornerElement::unit().scale(&int(2))];
        let rejected = g.index_from_bases(&doubled, &unit, 4).is_err();
        let checks = [surrogate, ground, rejected];
        tally(checks.len(), |i| Ok(checks[i]))
    });

    r.exact("subobjects", "subobjects map to p-invariant submodules", |g, s| {
        let e = Subobject::new(g, jones(g))?;
        let ee = e.tensor(g, &e)?;
        tally(30, |i| {
            let (p, n) = if i % 2 == 0 { (&e, 2) } else { (&ee, 4) };
            let xi = elem(s, 0, n);
            let projected = p.project(g, &xi)?;
            Ok(p.contains(g, &projected)? && p.project(g, &projected)? == projected)
        })
    });

    r.reported("norm sandwich", "left and right module norms are equivalent", |g, s| {
        let mut worst = f64::INFINITY;
        let delta = g.delta().as_f64();
        for _ in 0..20 {
            let xi = CornerElement::new(0, 1, s.corner(0, 1, 1)).unwrap();
            let norm = |x: &CornerElement| -> Result<f64> {
                Ok(g.norm_estimate(x.payload(), 4)?.last().unwrap().estimate.sqrt())
            };
            let right = norm(&g.right_inner(&xi, &xi)?)?;
            let left = norm(&g.left_inner(&xi, &xi)?)?;
            let slack = (left - right / delta.sqrt()).min(right * delta.sqrt() - left);
            worst = worst.min(slack);
        }
        Ok(Measure::at_least(20, worst, 0.0))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_rows() {
        let table = dimension_table(3).unwrap();
        let dim = |b, l, r| table.iter().find(|row| (row.b, row.l, row.r) == (b, l, r)).unwrap().dim;
        assert_eq!(dim(0, 1, 1), 1);
        assert_eq!(dim(2, 1, 1), 2);
        assert_eq!(dim(1, 0, 0), 0);
        assert!(dimension_table(11).is_err());
        for row in &table {
            let count = if (row.b + row.l + row.r) % 2 == 0 {
                PlanarPairing::enumerate(row.b, row.l + row.r).len() as u64
            } else {
                0
            };
            assert_eq!(row.dim, count);
        }
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("bogus".parse::<Suite>(), Err(Error::UnknownSuite(_))));
        assert!(SuiteConfig::new("3/2").is_err());
    }

    #[test]
    fn fock_only() {
        let cfg = SuiteConfig::default().with_suite_names(&["fock"]).unwrap();
        let report = run_suites(&cfg).unwrap();
        assert!(!report.records.is_empty());
        assert!(report.records.iter().all(|r| r.suite == Suite::Fock));
        assert!(report.gates_pass(), "{}", report.to_json_lines());
    }
}
