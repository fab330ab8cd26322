//! Whole-curve analysis: runs the pipeline (places, group, lattice,
//! geometry, covering) and records a verdict per registered theorem check.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::OnceLock;

use serde::Serialize;

use crate::curve::{CurveSpec, GroupStructure, PlaceTable};
use crate::decoder::{covering_report, CoveringReport, BOUND_SLACK, INTEGER_SLACK};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::function_field::DivisorVector;
use crate::geometry::{
    decompose_generator, for_each_short_vector, generated_by_minimal, is_well_rounded,
    minimal_count_formula, minimal_vectors, minimum_distance, minimum_distance_formula,
    packing_density, MinimalVectorSet, MinimumDistance,
};
use crate::lattice::{basis, contains, coset_census, generators, report, CosetCensus, LatticeBasis, LatticeReport};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

/// Everything computed for one curve before the checks run. Stages that can
/// detect a theorem violation keep their `Result` so the owning check can
/// report it as a failure.
pub struct Evidence<'a> {
    pub table: &'a PlaceTable,
    pub group: GroupStructure,
    pub basis: Option<LatticeBasis>,
    pub lattice: Option<Result<LatticeReport>>,
    pub census: Option<Result<CosetCensus>>,
    pub minimum: Option<Result<MinimumDistance>>,
    pub minimal: Option<MinimalVectorSet>,
    pub covering: Option<Result<CoveringReport>>,
}

fn stage<T>(s: &Option<Result<T>>) -> Result<&T> {
    match s {
        Some(Ok(v)) => Ok(v),
        Some(Err(e)) => Err(e.clone()),
        None => Err(Error::Internal("stage was not computed".into())),
    }
}

fn present<T>(s: &Option<T>) -> Result<&T> {
    s.as_ref().ok_or_else(|| Error::Internal("stage was not computed".into()))
}

pub trait TheoremCheck: Send + Sync {
    fn id(&self) -> &'static str;

    /// Smallest n the statement covers.
    fn min_places(&self) -> usize;

    /// `Ok` means the statement held on this curve.
    fn run(&self, ev: &Evidence) -> Result<()>;
}

fn fail(id: &'static str, detail: impl Into<String>) -> Error {
    Error::violation(id, detail)
}

/// Nonzero lattice vectors of squared norm `norm`, by enumeration of A_{n-1}.
fn lattice_vectors_of_norm(t: &PlaceTable, b: &LatticeBasis, norm: i64) -> Result<BTreeSet<DivisorVector>> {
    let mut found = BTreeSet::new();
    let mut err = None;
    let _ = for_each_short_vector(t.n(), norm, norm, |v| match contains(t, b, v) {
        Ok(true) => {
            found.insert(DivisorVector(v.to_vec()));
            ControlFlow::Continue(())
        }
        Ok(false) => ControlFlow::Continue(()),
        Err(e) => {
            err = Some(e);
            ControlFlow::Break(())
        }
    });
    err.map_or(Ok(found), Err)
}

/// The minimum squared norm is 4 (6 when n = 3) and, for n = 3, the minimal
/// vectors are exactly the six listed ones.
pub struct MinimumDistanceCheck;

impl TheoremCheck for MinimumDistanceCheck {
    fn id(&self) -> &'static str {
        "Lemma3.1"
    }

    fn min_places(&self) -> usize {
        3
    }

    fn run(&self, ev: &Evidence) -> Result<()> {
        let id = self.id();
        let md = stage(&ev.minimum)?;
        let expect = minimum_distance_formula(ev.table.n())?;
        if md.d_squared != expect || md.witness.norm_squared() != expect {
            return Err(fail(id, format!("minimum {} != {expect}", md.d_squared)));
        }
        if ev.table.n() == 3 {
            let b = present(&ev.basis)?;
            let m = present(&ev.minimal)?;
            let brute = lattice_vectors_of_norm(ev.table, b, 6)?;
            if m.count() != 6 || brute.iter().ne(m.vectors().iter()) {
                return Err(fail(id, "n = 3 minimal set differs from the six listed vectors"));
            }
        }
        Ok(())
    }
}

/// The number of minimal vectors matches the closed form in (n, eps), and
/// the constructed set is every lattice vector of squared norm 4.
pub struct MinimalCountCheck;

impl TheoremCheck for MinimalCountCheck {
    fn id(&self) -> &'static str {
        "Thm3.2"
    }

    fn min_places(&self) -> usize {
        4
    }

    fn run(&self, ev: &Evidence) -> Result<()> {
        let id = self.id();
        let m = present(&ev.minimal)?;
        let b = present(&ev.basis)?;
        let formula = minimal_count_formula(ev.group.n, ev.group.epsilon)?;
        if m.count() != formula {
            return Err(fail(id, format!("{} minimal vectors, formula gives {formula}", m.count())));
        }
        let brute = lattice_vectors_of_norm(ev.table, b, 4)?;
        if brute.iter().ne(m.vectors().iter()) {
            return Err(fail(
                id,
                format!("enumeration finds {} norm-4 lattice vectors, constructed set has {}", brute.len(), m.count()),
            ));
        }
        Ok(())
    }
}

/// Minimal vectors span rank n - 1, generate the lattice, and every
/// non-minimal generator splits into two minimal vectors.
pub struct GenerationCheck;

impl TheoremCheck for GenerationCheck {
    fn id(&self) -> &'static str {
        "Thm3.3"
    }

    fn min_places(&self) -> usize {
        5
    }

    fn run(&self, ev: &Evidence) -> Result<()> {
        let id = self.id();
        let m = present(&ev.minimal)?;
        let b = present(&ev.basis)?;
        if !is_well_rounded(m) {
            return Err(fail(id, "minimal vectors do not span rank n - 1"));
        }
        if !generated_by_minimal(m, b) {
            return Err(fail(id, "HNF of the minimal vectors differs from the basis"));
        }
        for g in generators(ev.table) {
            if !m.contains(&g) {
                decompose_generator(ev.table, m, &g)?;
            }
        }
        Ok(())
    }
}

/// Sampled decodes stay inside the covering bound, and within sqrt(2) for
/// points of A_{n-1}.
pub struct CoveringCheck;

impl TheoremCheck for CoveringCheck {
    fn id(&self) -> &'static str {
        "Thm3.4"
    }

    fn min_places(&self) -> usize {
        3
    }

    fn run(&self, ev: &Evidence) -> Result<()> {
        let id = self.id();
        let c = stage(&ev.covering)?;
        if c.max_observed > c.bound + BOUND_SLACK {
            return Err(fail(id, format!("observed {} > bound {}", c.max_observed, c.bound)));
        }
        if c.a_n1_max > 2f64.sqrt() + INTEGER_SLACK {
            return Err(fail(id, format!("A_(n-1) decode distance {} > sqrt(2)", c.a_n1_max)));
        }
        Ok(())
    }
}

/// det^2 = n^3, so the index in A_{n-1} is n = h_F, and the quotient
/// A_{n-1}/L_P has n cosets separated by their group sums.
pub struct DeterminantCheck;

impl TheoremCheck for DeterminantCheck {
    fn id(&self) -> &'static str {
        "Eq1.3"
    }

    fn min_places(&self) -> usize {
        2
    }

    fn run(&self, ev: &Evidence) -> Result<()> {
        let id = self.id();
        let n = ev.table.n() as i128;
        let r = stage(&ev.lattice)?;
        let c = stage(&ev.census)?;
        if r.det_squared != n * n * n || r.index_in_an1 != n || !r.det_bound_ok {
            return Err(fail(id, format!("det^2 = {}, expected {}", r.det_squared, n * n * n)));
        }
        if c.cosets as i128 != n || c.distinct_group_values as i128 != n {
            return Err(fail(id, format!("{} cosets, {} group values", c.cosets, c.distinct_group_values)));
        }
        Ok(())
    }
}

pub struct CheckRegistry {
    checks: Vec<Box<dyn TheoremCheck>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry { checks: Vec::new() }
    }

    pub fn with_defaults() -> &'static CheckRegistry {
        static DEFAULT: OnceLock<CheckRegistry> = OnceLock::new();
        DEFAULT.get_or_init(|| {
            let mut r = CheckRegistry::empty();
            r.register(Box::new(MinimumDistanceCheck));
            r.register(Box::new(MinimalCountCheck));
            r.register(Box::new(GenerationCheck));
            r.register(Box::new(CoveringCheck));
            r.register(Box::new(DeterminantCheck));
            r
        })
    }

    /// Adds a check, replacing any with the same id.
    pub fn register(&mut self, check: Box<dyn TheoremCheck>) {
        self.checks.retain(|c| c.id() != check.id());
        self.checks.push(check);
    }

    pub fn get(&self, id: &str) -> Result<&dyn TheoremCheck> {
        self.checks
            .iter()
            .find(|c| c.id() == id)
            .map(|c| c.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "theorem check",
                name: id.to_string(),
            })
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.id()).collect()
    }

    /// Runs every check (or the named subset) and returns verdicts with the
    /// failure messages.
    pub fn run(
        &self,
        ev: &Evidence,
        only: Option<&[String]>,
    ) -> Result<(BTreeMap<&'static str, Verdict>, BTreeMap<&'static str, String>)> {
        if let Some(names) = only {
            for name in names {
                self.get(name)?;
            }
        }
        let mut verdicts = BTreeMap::new();
        let mut failures = BTreeMap::new();
        for c in &self.checks {
            if only.is_some_and(|names| !names.iter().any(|s| s == c.id())) {
                continue;
            }
            let v = if ev.table.n() < c.min_places() {
                Verdict::NotApplicable
            } else {
                match c.run(ev) {
                    Ok(()) => Verdict::Pass,
                    Err(e) => {
                        failures.insert(c.id(), e.to_string());
                        Verdict::Fail
                    }
                }
            };
            verdicts.insert(c.id(), v);
        }
        Ok((verdicts, failures))
    }
}

#[derive(Clone, Debug, Default)]
pub struct AnalysisOptions {
    pub samples: usize,
    pub seed: u64,
    /// Restrict to these check ids.
    pub checks: Option<Vec<String>>,
}

impl AnalysisOptions {
    pub fn new() -> Self {
        AnalysisOptions {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            checks: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub curve: CurveSpec,
    pub n: usize,
    pub epsilon: usize,
    pub d_squared: Option<i64>,
    pub minimal_count: Option<usize>,
    pub minimal_count_formula: Option<usize>,
    pub det_squared: Option<i128>,
    pub index: Option<i128>,
    #[serde(rename = "h_F")]
    pub h_f: usize,
    pub cosets: Option<usize>,
    pub well_rounded: Option<bool>,
    pub generated_by_minimal: Option<bool>,
    pub packing_density: Option<f64>,
    pub hasse_ok: bool,
    pub seed: u64,
    pub covering: Option<CoveringReport>,
    pub verdicts: BTreeMap<&'static str, Verdict>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub failures: BTreeMap<&'static str, String>,
}

impl AnalysisReport {
    /// All applicable verdicts passed.
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&v| v != Verdict::Fail)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let verdicts: Vec<String> = self
            .verdicts
            .iter()
            .map(|(k, v)| format!("{k}={}", v.as_str()))
            .collect();
        let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        format!(
            "{} n={} eps={} d2={} min={} det2={} {}",
            self.curve,
            self.n,
            self.epsilon,
            opt(self.d_squared.map(|x| x.to_string())),
            opt(self.minimal_count.map(|x| x.to_string())),
            opt(self.det_squared.map(|x| x.to_string())),
            verdicts.join(" ")
        )
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Sampling seed for one curve, derived from the master seed so curves get
/// independent streams regardless of scan order.
pub fn curve_seed(master: u64, spec: &CurveSpec) -> u64 {
    let mut h = splitmix64(master ^ spec.p);
    for c in spec.coeffs {
        h = splitmix64(h ^ c as u64);
    }
    h
}

/// Runs the pipeline on a curve spec. Invalid curves are errors; theorem
/// failures show up as `fail` verdicts.
pub fn analyze(spec: &CurveSpec, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let table = spec.build()?.enumerate_places();
    analyze_table(&table, opts)
}

pub fn analyze_table(t: &PlaceTable, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let spec = t.curve().spec();
    let n = t.n();
    let group = t.group_structure()?;
    let basis = if n >= 2 { Some(basis(t)?) } else { None };
    let minimal = if n >= 3 { Some(minimal_vectors(t)?) } else { None };
    let seed = curve_seed(opts.seed, &spec);
    let ev = Evidence {
        table: t,
        lattice: basis.as_ref().map(|b| report(t, b, &group)),
        census: basis.as_ref().map(|b| coset_census(t, b)),
        minimum: basis.as_ref().filter(|_| n >= 3).map(|b| minimum_distance(t, b)),
        covering: basis.as_ref().map(|_| covering_report(t, opts.samples, seed)),
        group,
        basis,
        minimal,
    };
    let (verdicts, failures) = CheckRegistry::with_defaults().run(&ev, opts.checks.as_deref())?;

    let lattice = ev.lattice.as_ref().and_then(|r| r.as_ref().ok());
    let d_squared = ev.minimum.as_ref().and_then(|r| r.as_ref().ok()).map(|m| m.d_squared);
    let det_squared = lattice.map(|r| r.det_squared);
    Ok(AnalysisReport {
        curve: spec,
        n,
        epsilon: ev.group.epsilon,
        d_squared,
        minimal_count: ev.minimal.as_ref().map(MinimalVectorSet::count),
        minimal_count_formula: (n >= 4)
            .then(|| minimal_count_formula(n, ev.group.epsilon).ok())
            .flatten(),
        det_squared,
        index: lattice.map(|r| r.index_in_an1),
        h_f: n,
        cosets: ev.census.as_ref().and_then(|r| r.as_ref().ok()).map(|c| c.cosets),
        well_rounded: ev.minimal.as_ref().map(is_well_rounded),
        generated_by_minimal: ev
            .minimal
            .as_ref()
            .zip(ev.basis.as_ref())
            .map(|(m, b)| generated_by_minimal(m, b)),
        packing_density: d_squared
            .zip(det_squared)
            .map(|(d2, det2)| packing_density(n, (d2 as f64).sqrt(), (det2 as f64).sqrt()).value),
        hasse_ok: t.hasse_ok(),
        seed: opts.seed,
        covering: ev.covering.and_then(Result::ok),
        verdicts,
        failures,
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Every valid curve (a3 != 0, square-free f) over each prime field with
/// p_min <= p <= p_max, in lexicographic order of (p, a3, a2, a1, a0).
pub fn scan_curves(p_min: u64, p_max: u64) -> Result<Vec<PlaceTable>> {
    if p_min < 3 || p_min > p_max {
        return Err(Error::BadRange(p_min, p_max));
    }
    let mut out = Vec::new();
    for p in (p_min..=p_max).filter(|&p| is_prime(p)) {
        let k = PrimeField::new(p)?;
        let m = p as i64;
        for a3 in 1..m {
            for a2 in 0..m {
                for a1 in 0..m {
                    for a0 in 0..m {
                        match crate::curve::Curve::new(&k, [a3, a2, a1, a0]) {
                            Ok(c) => out.push(c.enumerate_places()),
                            Err(Error::NotSquareFree) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Analyzes every scanned curve, optionally only those with `n` places.
pub fn scan(p_min: u64, p_max: u64, only_n: Option<usize>, opts: &AnalysisOptions) -> Result<Vec<AnalysisReport>> {
    scan_curves(p_min, p_max)?
        .iter()
        .filter(|t| only_n.is_none_or(|k| t.n() == k))
        .map(|t| analyze_table(t, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> CurveSpec {
        s.parse().unwrap()
    }

    fn quick() -> AnalysisOptions {
        AnalysisOptions {
            samples: 500,
            ..AnalysisOptions::new()
        }
    }

    #[test]
    fn analyze_examples() {
        let r = analyze(&spec("5:1,0,1,1"), &quick()).unwrap();
        assert_eq!((r.n, r.epsilon), (9, 1));
        assert_eq!(r.minimal_count, Some(108));
        assert_eq!(r.minimal_count_formula, Some(108));
        assert_eq!(r.det_squared, Some(729));
        assert_eq!(r.index, Some(9));
        assert_eq!(r.d_squared, Some(4));
        assert_eq!(r.well_rounded, Some(true));
        assert!(r.passed());
        assert!(r.verdicts.values().all(|&v| v == Verdict::Pass));
        assert_eq!(r.verdicts.len(), 5);

        let r = analyze(&spec("5:1,0,-1,0"), &quick()).unwrap();
        assert_eq!((r.n, r.epsilon, r.minimal_count), (8, 4, Some(76)));
        assert!(r.passed());

        assert_eq!(analyze(&spec("5:1,0,0,0"), &quick()).unwrap_err(), Error::NotSquareFree);
    }

    #[test]
    fn small_curves_are_not_applicable() {
        for t in scan_curves(3, 3).unwrap() {
            let r = analyze_table(&t, &quick()).unwrap();
            assert!(r.passed(), "{}", r.summary());
            if t.n() < 5 {
                assert_eq!(r.verdicts["Thm3.3"], Verdict::NotApplicable);
            }
            if t.n() < 3 {
                assert_eq!(r.d_squared, None);
                assert_eq!(r.verdicts["Lemma3.1"], Verdict::NotApplicable);
            }
        }
    }

    #[test]
    fn scan_order_and_filter() {
        let all = scan_curves(5, 5).unwrap();
        let specs: Vec<CurveSpec> = all.iter().map(|t| t.curve().spec()).collect();
        let mut sorted = specs.clone();
        sorted.sort();
        assert_eq!(specs, sorted);
        // square-free polynomials of degree 3 over F_q number (q - 1)(q^3 - q^2)
        assert_eq!(specs.len(), 4 * (125 - 25));
        let nine = scan(5, 5, Some(9), &quick()).unwrap();
        assert!(!nine.is_empty());
        assert!(nine.iter().all(|r| r.n == 9 && r.passed()));
        assert_eq!(scan_curves(4, 3).unwrap_err(), Error::BadRange(4, 3));
        assert_eq!(scan_curves(2, 5).unwrap_err(), Error::BadRange(2, 5));
        assert!(scan_curves(8, 10).unwrap().is_empty());
    }

    #[test]
    fn seeds_are_per_curve_and_reproducible() {
        let a = spec("7:1,0,3,2");
        let b = spec("7:1,0,3,3");
        assert_ne!(curve_seed(1, &a), curve_seed(1, &b));
        assert_ne!(curve_seed(1, &a), curve_seed(2, &a));
        let r1 = analyze(&a, &quick()).unwrap();
        let r2 = analyze(&a, &quick()).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.covering.unwrap().seed, curve_seed(1, &a));
    }

    #[test]
    fn check_selection() {
        let mut o = quick();
        o.checks = Some(vec!["Eq1.3".into()]);
        let r = analyze(&spec("5:1,0,1,1"), &o).unwrap();
        assert_eq!(r.verdicts.keys().copied().collect::<Vec<_>>(), vec!["Eq1.3"]);
        o.checks = Some(vec!["Thm9.9".into()]);
        assert!(matches!(analyze(&spec("5:1,0,1,1"), &o), Err(Error::UnknownName { .. })));
    }

    struct AlwaysFails;
    impl TheoremCheck for AlwaysFails {
        fn id(&self) -> &'static str {
            "Eq1.3"
        }
        fn min_places(&self) -> usize {
            0
        }
        fn run(&self, _: &Evidence) -> Result<()> {
            Err(fail("Eq1.3", "forced"))
        }
    }

    #[test]
    fn failing_check_is_reported() {
        let t = spec("5:1,0,1,1").build().unwrap().enumerate_places();
        let ev = Evidence {
            table: &t,
            group: t.group_structure().unwrap(),
            basis: None,
            lattice: None,
            census: None,
            minimum: None,
            minimal: None,
            covering: None,
        };
        let mut r = CheckRegistry::empty();
        r.register(Box::new(DeterminantCheck));
        let (v, f) = r.run(&ev, None).unwrap();
        // stages missing: the check cannot confirm the statement
        assert_eq!(v["Eq1.3"], Verdict::Fail);
        assert!(f["Eq1.3"].contains("not computed"));
        r.register(Box::new(AlwaysFails));
        assert_eq!(r.ids(), vec!["Eq1.3"]);
        let (_, f) = r.run(&ev, None).unwrap();
        assert!(f["Eq1.3"].contains("forced"));
    }
}
