//! Random instance generators, brute-force reference constructions, and the
//! property suite that runs every invariant of the library over generated
//! instances.

pub mod gen;
pub mod oracle;
mod properties;

use std::fmt::Write as _;
use std::ops::Range;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use gen::{gen_graph, gen_rule, Rng8};
pub use oracle::{oracle_pullback, oracle_pushout, oracle_wide_colimit, oracle_wide_limit};
pub use properties::{Property, Verdict, PROPERTIES};

/// Relative odds of the four kinds of rule items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleShape {
    pub deleted: u32,
    pub weak: u32,
    pub preserved: u32,
    pub added: u32,
}

impl Default for RuleShape {
    fn default() -> Self {
        RuleShape {
            deleted: 1,
            weak: 1,
            preserved: 2,
            added: 1,
        }
    }
}

impl RuleShape {
    /// Every item is kept: `L = K = I = R`.
    pub fn all_preserve() -> Self {
        RuleShape {
            deleted: 0,
            weak: 0,
            preserved: 1,
            added: 0,
        }
    }

    pub fn weights(&self) -> [u32; 4] {
        [self.deleted, self.weak, self.preserved, self.added]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    pub max_nodes: usize,
    pub max_edges: usize,
    pub label_alphabet: Vec<String>,
    pub rule_shape: RuleShape,
    /// Instances per property in [`run_property_suite`].
    pub iterations: u64,
    pub injective_matches: bool,
    /// Replace the dangling check of the pushout complement by silently
    /// dropping the offending edges. Only useful to see the suite fail.
    pub mutant: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_nodes: 6,
            max_edges: 8,
            label_alphabet: vec!["a".into(), "b".into()],
            rule_shape: RuleShape::default(),
            iterations: 100,
            injective_matches: true,
            mutant: false,
        }
    }
}

impl GenParams {
    pub fn with_seed(seed: u64) -> Self {
        GenParams {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.label_alphabet.is_empty() {
            return Err("label alphabet is empty".into());
        }
        if self.rule_shape.weights().iter().all(|&w| w == 0) {
            return Err("rule shape has no positive weight".into());
        }
        if self.max_nodes > 12 || self.max_edges > 16 {
            return Err("bounds above 12 nodes / 16 edges are not supported".into());
        }
        Ok(())
    }

    /// Node bound for generated rules, leaving room for two left-hand sides in one host.
    pub fn rule_nodes(&self) -> usize {
        (self.max_nodes / 2).min(3)
    }

    pub fn rule_edges(&self) -> usize {
        (self.max_edges / 2).min(3)
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// The generator for one instance; depends on nothing but its arguments.
pub fn instance_rng(seed: u64, family: &str, instance: u64) -> Rng8 {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(family).to_le_bytes());
    key[16..24].copy_from_slice(&instance.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub instance: u64,
    pub message: String,
}

/// Failures beyond this many are counted but not recorded.
pub const MAX_RECORDED_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    /// Instances where the generator found nothing suitable.
    pub skipped: u64,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl PropertyReport {
    fn merge(&mut self, other: &PropertyReport) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        self.failures.extend(other.failures.iter().cloned());
        self.failures.sort_by_key(|f| f.instance);
        self.failures.truncate(MAX_RECORDED_FAILURES);
        self.elapsed += other.elapsed;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> u64 {
        self.properties.iter().map(|p| p.failed).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Adds the counts of another run (e.g. another shard of instances) of the
    /// same seed; properties are matched by name.
    pub fn merge(&mut self, other: &SuiteReport) {
        for p in &other.properties {
            match self.properties.iter_mut().find(|q| q.name == p.name) {
                Some(q) => q.merge(p),
                None => self.properties.push(p.clone()),
            }
        }
    }

    /// One line per property, failures indented below it. Wall-clock times are
    /// included only on request since they differ between runs.
    pub fn render(&self, timings: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "property suite, seed {}", self.seed);
        for p in &self.properties {
            let status = if p.failed == 0 { "PASS" } else { "FAIL" };
            let _ = write!(
                out,
                "{status} {:<44} passed={} failed={} skipped={}",
                p.name, p.passed, p.failed, p.skipped
            );
            if timings {
                let _ = write!(out, " time={:.3}s", p.elapsed.as_secs_f64());
            }
            out.push('\n');
            for f in &p.failures {
                let _ = writeln!(out, "    instance {}: {}", f.instance, f.message);
            }
        }
        let total: u64 = self.properties.iter().map(|p| p.passed + p.failed).sum();
        let _ = write!(out, "{} checks, {} failed", total, self.failures());
        if timings {
            let secs: f64 = self.properties.iter().map(|p| p.elapsed.as_secs_f64()).sum();
            let _ = write!(out, ", {secs:.3}s total");
        }
        out.push('\n');
        out
    }
}

pub fn find_property(name: &str) -> Option<&'static Property> {
    PROPERTIES.iter().find(|p| p.name == name)
}

/// Runs one property on the given instance indices.
pub fn run_property(prop: &Property, params: &GenParams, instances: Range<u64>) -> PropertyReport {
    let start = Instant::now();
    let mut report = PropertyReport {
        name: prop.name.to_string(),
        passed: 0,
        failed: 0,
        skipped: 0,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for instance in instances {
        match prop.run_instance(params, instance) {
            Ok(()) => report.passed += 1,
            Err(Verdict::Skip(_)) => report.skipped += 1,
            Err(Verdict::Fail(message)) => {
                report.failed += 1;
                if report.failures.len() < MAX_RECORDED_FAILURES {
                    report.failures.push(Failure { instance, message });
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Every property over instances `0..params.iterations`, one thread per property.
pub fn run_property_suite(params: &GenParams) -> SuiteReport {
    let properties = std::thread::scope(|scope| {
        let handles: Vec<_> = PROPERTIES
            .iter()
            .map(|prop| scope.spawn(move || run_property(prop, params, 0..params.iterations)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("property thread")).collect()
    });
    SuiteReport {
        seed: params.seed,
        properties,
    }
}
