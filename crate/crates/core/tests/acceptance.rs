//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use hyperdyn::cli::{self, BatteryConfig, Overrides};
use hyperdyn::hyperspace::powerset_hyperspace;
use hyperdyn::metric::{check_metric_axioms, hausdorff_distance, ClosedSet};
use hyperdyn::properties::certificate::{validate_verdict, SystemRef};
use hyperdyn::properties::finite::check_dynamics;
use hyperdyn::properties::oracle::{brute_force_oracle, OracleBounds};
use hyperdyn::properties::{Budget, Property, Status, System, Verdict};
use hyperdyn::systems::{FiniteDynamics, Interval, ShiftSystem};
use hyperdyn::theorems::witness::{check_periodic_set, ShiftSets};
use hyperdyn::theorems::{
    check_corollary, check_lemma_exact, check_lemma_wm, check_theorem_main, combine_witnesses,
    find_periodic_point_in_cylinder, validate_report, Agreement, CombineMode, PeriodicSetWitness,
};
use hyperdyn::Rational;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

/// Certificates re-validated so far, and the failures among them.
#[derive(Default)]
struct Ledger {
    validated: usize,
    failures: Vec<String>,
}

impl Ledger {
    fn record(&mut self, what: impl FnOnce() -> String, result: Result<(), String>) {
        match result {
            Ok(()) => self.validated += 1,
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }

    fn verdict(&mut self, v: &Verdict<Rational>, p: Property, sys: SystemRef<'_, Rational>, what: &str) {
        if v.status().is_decided() {
            self.record(|| what.to_string(), validate_verdict(v, p, sys).map_err(|e| e.0));
        }
    }
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence(ledger: &mut Ledger) -> Outcome {
    let budget = Budget::default();
    let mut compared = 0;
    for n in [4usize, 5] {
        for map in common::all_maps(n) {
            let bounds = OracleBounds::for_size(n);
            for p in Property::ATOMIC {
                let fast: Verdict<Rational> = check_dynamics(&map, p, &budget);
                let slow: Verdict<Rational> = brute_force_oracle(&map, p, bounds).map_err(|e| e.to_string())?;
                ensure(fast.status() == slow.status(), || {
                    format!("{map:?} {p}: checker {} vs oracle {}", fast.status(), slow.status())
                })?;
                ledger.verdict(&fast, p, SystemRef::Finite(&map), "finite checker");
                ledger.verdict(&slow, p, SystemRef::Finite(&map), "oracle");
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} verdict pairs agree over 256 + 3125 maps"))
}

fn metric_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut triples = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let space = common::random_metric(&mut rng, n);
        ensure(check_metric_axioms(&space.rows()).is_pass(), || "base metric fails its axioms".into())?;
        let full = (1u64 << n) - 1;
        let pick = |rng: &mut ChaCha8Rng| ClosedSet::from_mask(n, rng.gen_range(1..=full)).unwrap();
        for _ in 0..40 {
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let d = |x: &ClosedSet, y: &ClosedSet| hausdorff_distance(x, y, &space).unwrap();
            let zero = common::rational(0, 1);
            ensure(d(&a, &a) == zero, || "d(A, A) != 0".into())?;
            ensure((d(&a, &b) == zero) == (a == b), || "d(A, B) = 0 for A != B".into())?;
            ensure(d(&a, &b) == d(&b, &a), || "asymmetric".into())?;
            ensure(d(&a, &c) <= d(&a, &b) + d(&b, &c), || "triangle inequality fails".into())?;
            ensure(d(&a, &b) >= zero, || "negative distance".into())?;
            triples += 1;
        }
    }
    Ok(format!("200 spaces, {triples} exact triples"))
}

fn harness_battery(ledger: &mut Ledger) -> Outcome {
    let budget = Budget::default();
    let mut decided = 0;
    for (name, sys, all_proved) in common::battery() {
        let expected = if all_proved { Status::Proved } else { Status::Refuted };
        for report in [
            check_theorem_main(&sys, &budget),
            check_lemma_wm(&sys, &budget),
            check_lemma_exact(&sys, &budget),
            check_corollary(&sys, &budget),
        ] {
            ensure(report.agreement == Agreement::Agree, || format!("{name} {}: {:?}", report.check, report.agreement))?;
            ensure(report.all(expected), || format!("{name} {}: {:?}", report.check, report.statuses()))?;
            match validate_report(&report, &sys, &budget) {
                Ok(k) => {
                    ledger.validated += k;
                    decided += k;
                }
                Err(e) => ledger.failures.push(format!("{name} {}: {}", report.check, e.0)),
            }
        }
    }
    Ok(format!("9 systems x 4 checks agree, {decided} decided verdicts re-validated"))
}

fn hyperspace_construction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut systems: Vec<System<Rational>> =
        common::battery().into_iter().map(|(_, s, _)| s).filter(|s| matches!(s, System::Finite(_))).collect();
    // one metric system at the size limit
    let space = common::random_metric(&mut rng, 10);
    let map = (0..10).map(|_| rng.gen_range(0..10)).collect();
    systems.push(System::Finite(hyperdyn::systems::FiniteSystem::new(space, map).unwrap()));
    let mut pairs = 0usize;
    for sys in &systems {
        let System::Finite(f) = sys else { unreachable!() };
        let n = f.len();
        let h = powerset_hyperspace(f, 16).map_err(|e| e.to_string())?;
        ensure(h.len() == (1 << n) - 1, || format!("{} states for {n} points", h.len()))?;
        let metric = h.to_finite_system();
        for s in 0..h.len() {
            let set = h.state_set(s);
            let pointwise = ClosedSet::new(n, set.iter().map(|x| f.step(x))).unwrap();
            ensure(h.state_set(h.image(s)) == pointwise, || format!("image of state {s} differs"))?;
            for t in 0..h.len() {
                let direct = hausdorff_distance(&set, &h.state_set(t), f.space()).unwrap();
                ensure(*metric.space().dist(s, t) == direct, || format!("distance ({s}, {t}) differs"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} systems, {pairs} state pairs", systems.len()))
}

fn proof_pipeline(ledger: &mut Ledger) -> Outcome {
    let mut opens = 0;
    for sft in [ShiftSystem::full(2), ShiftSystem::from_rows(&["11", "10"]).unwrap()] {
        let sets = ShiftSets(&sft);
        for level in 1..=3 {
            let words = sft.allowed_words(level).map_err(|e| e.to_string())?;
            let found: Vec<_> = words
                .iter()
                .map(|u| find_periodic_point_in_cylinder(&sft, u))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for mask in 1u64..1 << words.len() {
                let chosen: Vec<usize> = (0..words.len()).filter(|&i| mask >> i & 1 == 1).collect();
                let parts: Vec<PeriodicSetWitness<_>> = chosen
                    .iter()
                    .map(|&i| PeriodicSetWitness { z: vec![found[i].0.clone()], k: BigUint::from(found[i].1) })
                    .collect();
                let w = combine_witnesses(&sets, &parts, CombineMode::Product).map_err(|e| e.to_string())?;
                let product: BigUint = chosen.iter().map(|&i| BigUint::from(found[i].1)).product();
                ensure(w.k == product, || format!("k = {} but the periods multiply to {product}", w.k))?;
                let periodic = check_periodic_set(&sets, &w).map_err(|e| e.to_string());
                let inside = w.z.iter().all(|p| chosen.iter().any(|&i| p.in_cylinder(&words[i])));
                let meets = chosen.iter().all(|&i| w.z.iter().any(|p| p.in_cylinder(&words[i])));
                ledger.record(
                    || format!("pipeline witness at level {level}"),
                    periodic.and_then(|()| ensure(inside && meets, || "Z is not in the open".into())),
                );
                opens += 1;
            }
            let v = hyperdyn::hyperspace::vietoris_periodic_dense_bounded::<Rational>(&sft, level)
                .map_err(|e| e.to_string())?;
            ensure(v.is_proved(), || format!("level {level}: {:?}", v.status()))?;
            ledger.verdict(&v, Property::DensePeriodicPoints, SystemRef::ShiftHyper(&sft), "vietoris periodic sets");
        }
    }
    Ok(format!("{opens} basic opens"))
}

fn tent_exactness(ledger: &mut Ledger) -> Outcome {
    let System::Pl(tent) = common::tent() else { unreachable!() };
    let mut cells = 0;
    for m in 1..=6u32 {
        for j in 0..1u64 << m {
            let cell = Interval::<Rational>::dyadic(m, j);
            let steps = tent.steps_to_cover(&cell, 12).map_err(|e| e.to_string())?;
            ensure(steps == Some(m as usize), || format!("depth {m} cell {j}: {steps:?} steps"))?;
            cells += 1;
        }
    }
    let budget = Budget::default();
    let sys = common::tent();
    let report = check_corollary(&sys, &budget);
    ensure(report.conditions.iter().all(|c| c.primary.verdict.is_proved_at_resolution()), || {
        format!("corollary sides {:?}", report.statuses())
    })?;
    match validate_report(&report, &sys, &budget) {
        Ok(k) => ledger.validated += k,
        Err(e) => ledger.failures.push(format!("tent corollary: {}", e.0)),
    }
    Ok(format!("{cells} dyadic cells, corollary proved at resolution"))
}

fn config_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/battery.toml")
}

fn determinism(ledger: &mut Ledger) -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hyperdyn"))
            .args(["verify-theorems", "--format", "machine", "--config"])
            .arg(config_path())
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)))?;
    ensure(a.stdout == b.stdout, || "machine reports differ between runs".into())?;
    let battery = BatteryConfig::load(&config_path())
        .and_then(|c| c.validate(&Overrides::default()))
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8(a.stdout).map_err(|e| e.to_string())?;
    for line in text.lines() {
        match cli::revalidate_line(line, &battery) {
            Ok(k) => ledger.validated += k,
            Err(e) => ledger.failures.push(format!("report line: {e}")),
        }
    }
    Ok(format!("{} identical bytes, {} lines re-parsed", text.len(), text.lines().count()))
}

fn main() {
    let mut ledger = Ledger::default();
    let mut failed = 0;
    let mut report = |id: usize, name: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {:.0}s limit", limit.as_secs_f64())),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} [{id}] {name} ({:.2}s): {detail}", took.as_secs_f64());
    };
    let secs = Duration::from_secs;
    report(1, "oracle equivalence", secs(30), &mut || oracle_equivalence(&mut ledger));
    report(2, "metric suite", secs(5), &mut metric_suite);
    report(3, "equivalence harness battery", secs(60), &mut || harness_battery(&mut ledger));
    report(4, "hyperspace construction", secs(10), &mut hyperspace_construction);
    report(5, "constructive proof pipeline", secs(30), &mut || proof_pipeline(&mut ledger));
    report(6, "tent-map exactness", secs(10), &mut || tent_exactness(&mut ledger));
    report(7, "determinism", secs(60), &mut || determinism(&mut ledger));
    report(8, "witness re-validation", secs(1), &mut || {
        if ledger.failures.is_empty() && ledger.validated > 0 {
            Ok(format!("{} of {} certificates re-validate", ledger.validated, ledger.validated))
        } else {
            Err(format!("{} failures: {:?}", ledger.failures.len(), &ledger.failures[..ledger.failures.len().min(5)]))
        }
    });
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
