//! Named property suites over a tower, producing machine-readable pass/fail reports.

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::diagram::{
    adjunction_check_cg, counit_check, example_group_ring, product_disc, product_universal_check, pushforward_diagram,
    reconstruction_maps, sheafify_check, EqPresheaf,
};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::random::{random_map, random_presheaf, random_rep, random_sheaf};
use crate::rep::GroupRep;
use crate::sheaf::{biproduct, godement_resolution, sheaf_factorization, skyscraper_adjunction_check, FiniteEqSheaf};
use crate::tower::SpaceTower;
use crate::weyl::{
    is_weyl, stalk_weyl_rep, weyl_adjunction_check, weyl_functor, weyl_limit_check, weyl_pullback_check,
    weyl_skyscraper_from_quotient, weyl_violation,
};

/// One named check; a failure always carries at least one witness.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, pass: bool, witness: impl FnOnce() -> Value) -> CheckReport {
        CheckReport {
            check: check.into(),
            pass,
            witnesses: if pass { Vec::new() } else { vec![witness()] },
            millis: None,
        }
    }

    pub fn from_error(check: impl Into<String>, e: &Error) -> CheckReport {
        let witness = match e {
            Error::CocycleViolation { g_outer, g_inner, point } => {
                json!({"g_outer": g_outer, "g_inner": g_inner, "point": point, "error": e.to_string()})
            }
            Error::NotEquivariant { element, point } => {
                json!({"element": element, "point": point, "error": e.to_string()})
            }
            Error::NonInvertibleTranslation { generator, point } => {
                json!({"generator": generator, "point": point, "error": e.to_string()})
            }
            Error::InvalidStructureMap { level, point, reason } => {
                json!({"level": level, "point": point, "reason": reason})
            }
            other => json!({"error": other.to_string()}),
        };
        CheckReport { check: check.into(), pass: false, witnesses: vec![witness], millis: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Cocycle,
    Abelian,
    Adjunctions,
    Counit,
    SheafifyIdem,
    Weyl,
    Godement,
    DiscProduct,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Cocycle,
        Suite::Abelian,
        Suite::Adjunctions,
        Suite::Counit,
        Suite::SheafifyIdem,
        Suite::Weyl,
        Suite::Godement,
        Suite::DiscProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Abelian => "abelian",
            Suite::Adjunctions => "adjunctions",
            Suite::Counit => "counit",
            Suite::SheafifyIdem => "sheafify-idem",
            Suite::Weyl => "weyl",
            Suite::Godement => "godement",
            Suite::DiscProduct => "disc-product",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// What a suite runs on: supplied objects plus `count` random instances.
pub struct SuiteInput<R: Rng> {
    pub tower: Arc<SpaceTower>,
    /// Sheaves over the tower's top level.
    pub sheaves: Vec<FiniteEqSheaf>,
    pub presheaves: Vec<EqPresheaf>,
    pub count: usize,
    pub rng: R,
}

/// Accumulates instance outcomes into one report, keeping the first failure as witness.
struct Tally {
    name: String,
    witness: Option<Value>,
    instances: usize,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally { name: name.to_string(), witness: None, instances: 0 }
    }

    fn record(&mut self, outcome: Result<bool>, witness: impl FnOnce() -> Value) {
        self.instances += 1;
        if self.witness.is_some() {
            return;
        }
        match outcome {
            Ok(true) => {}
            Ok(false) => self.witness = Some(json!({"instance": self.instances - 1, "detail": witness()})),
            Err(e) => self.witness = Some(json!({"instance": self.instances - 1, "error": e.to_string()})),
        }
    }

    fn finish(self) -> CheckReport {
        let pass = self.witness.is_none();
        let w = self.witness;
        CheckReport::new(self.name, pass, || w.unwrap_or(Value::Null))
    }
}

fn sheaves<R: Rng>(input: &mut SuiteInput<R>) -> Vec<FiniteEqSheaf> {
    let mut out = input.sheaves.clone();
    for _ in 0..input.count {
        out.push(random_sheaf(&mut input.rng, input.tower.top(), 2));
    }
    out
}

pub fn run_suite<R: Rng>(suite: Suite, input: &mut SuiteInput<R>, timing: bool) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut reports = match suite {
        Suite::Cocycle => cocycle(input),
        Suite::Abelian => abelian(input),
        Suite::Adjunctions => adjunctions(input),
        Suite::Counit => counit(input),
        Suite::SheafifyIdem => sheafify_idem(input),
        Suite::Weyl => weyl(input),
        Suite::Godement => godement(input),
        Suite::DiscProduct => disc_product(input),
    };
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    if timing {
        let ms = start.elapsed().as_secs_f64() * 1e3 / reports.len().max(1) as f64;
        for r in &mut reports {
            r.millis = Some(ms);
        }
    }
    reports
}

/// Exhaustive `T(gh, x) = T(g, hx) T(h, x)` and `T(1, x) = 1`.
pub fn cocycle_witness(e: &FiniteEqSheaf) -> Option<(usize, usize, usize)> {
    let base = e.base();
    let g = base.group();
    for x in 0..base.n_points() {
        if !e.translation(g.identity(), x).is_identity() {
            return Some((g.identity(), g.identity(), x));
        }
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            for x in 0..base.n_points() {
                let lhs = e.translation(g.mul(a, b), x);
                if *lhs != e.translation(a, base.act(b, x)).mul(e.translation(b, x)) {
                    return Some((a, b, x));
                }
            }
        }
    }
    None
}

fn cocycle<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let mut t = Tally::new("cocycle.exhaustive");
    for e in sheaves(input) {
        let w = cocycle_witness(&e);
        t.record(
            Ok(w.is_none()),
            || json!({"g_outer": w.map(|w| w.0), "g_inner": w.map(|w| w.1), "point": w.map(|w| w.2)}),
        );
    }
    vec![t.finish()]
}

fn abelian<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let mut bi = Tally::new("abelian.biproduct");
    let mut fa = Tally::new("abelian.factorization");
    let base = Arc::clone(input.tower.top());
    let pool = sheaves(input);
    for i in 0..input.count.max(pool.len()) {
        let e = if pool.is_empty() { random_sheaf(&mut input.rng, &base, 2) } else { pool[i % pool.len()].clone() };
        let f = random_sheaf(&mut input.rng, &base, 2);
        bi.record(biproduct(&e, &f).map(|b| b.equations_hold()), || json!({"dims": [e.dims(), f.dims()]}));
        let m = random_map(&mut input.rng, &e, &f);
        fa.record(sheaf_factorization(&m).map(|x| x.verify(&m)), || json!({"dims": [e.dims(), f.dims()]}));
    }
    vec![bi.finish(), fa.finish()]
}

fn adjunctions<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let tower = Arc::clone(&input.tower);
    let base = Arc::clone(tower.top());
    let mut sky = Tally::new("adjunctions.stalk-skyscraper");
    let mut cg = Tally::new("adjunctions.change-of-group");
    let mut wy = Tally::new("adjunctions.weyl");
    for e in sheaves(input) {
        let x = input.rng.random_range(0..base.n_points());
        let stab = base.group().subgroup_group(&base.stabilizer(x));
        let m = random_rep(&mut input.rng, &stab, 2);
        sky.record(skyscraper_adjunction_check(&e, x, &m).map(|r| r.holds()), || json!({"point": x, "dims": e.dims()}));
        for k in 0..tower.depth() {
            let d = random_sheaf(&mut input.rng, tower.level(k), 2);
            let f = random_sheaf(&mut input.rng, tower.level(k + 1), 2);
            cg.record(adjunction_check_cg(&d, &f, tower.step(k)).map(|r| r.holds()), || json!({"step": k}));
        }
        if tower.is_subgroup_tower() {
            let w = weyl_functor(&random_sheaf(&mut input.rng, &base, 2)).map(|w| w.sheaf);
            let outcome =
                w.and_then(|w| weyl_adjunction_check(&w, &e)).map(|r| r.holds() && r.unit_iso && r.counit_mono);
            wy.record(outcome, || json!({"dims": e.dims()}));
        }
    }
    let mut out = vec![sky.finish(), cg.finish()];
    if tower.is_subgroup_tower() {
        out.push(wy.finish());
    }
    out
}

fn counit<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let tower = Arc::clone(&input.tower);
    let mut c = Tally::new("counit.iso");
    let mut r = Tally::new("counit.round-trip");
    for e in sheaves(input) {
        let report = counit_check(&e, &tower);
        let detail = report.as_ref().map(|r| json!(r)).unwrap_or(Value::Null);
        c.record(report.map(|r| r.holds()), || detail);
        let rt = pushforward_diagram(&e, &tower)
            .and_then(|d| reconstruction_maps(&d))
            .map(|ms| ms.iter().all(|m| m.is_iso()));
        r.record(rt, || json!({"dims": e.dims()}));
    }
    vec![c.finish(), r.finish()]
}

fn sheafify_idem<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let tower = Arc::clone(&input.tower);
    let mut t = Tally::new("sheafify.idempotent-factorization");
    let mut pool = input.presheaves.clone();
    for _ in 0..input.count {
        pool.push(random_presheaf(&mut input.rng, &tower));
    }
    for f in pool {
        let e = random_sheaf(&mut input.rng, tower.top(), 2);
        let report = sheafify_check(&f, &e);
        let detail = report.as_ref().map(|r| json!(r)).unwrap_or(Value::Null);
        t.record(report.map(|r| r.holds()), || detail);
    }
    vec![t.finish()]
}

fn weyl<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let tower = Arc::clone(&input.tower);
    if !tower.is_subgroup_tower() {
        return vec![CheckReport::from_error("weyl.base", &Error::WrongBase)];
    }
    let base = Arc::clone(tower.top());
    let mut mono = Tally::new("weyl.counit-mono");
    let mut unit = Tally::new("weyl.unit-iso");
    let mut fixed = Tally::new("weyl.is-weyl");
    let mut reps = Tally::new("weyl.stalk-reps");
    let mut sky = Tally::new("weyl.skyscrapers");
    let mut pull = Tally::new("weyl.pullback");
    let mut lim = Tally::new("weyl.limits");
    for e in sheaves(input) {
        let part = match weyl_functor(&e) {
            Ok(p) => p,
            Err(err) => return vec![CheckReport::from_error("weyl.functor", &err)],
        };
        mono.record(Ok(part.inclusion.is_mono()), || json!({"dims": e.dims()}));
        unit.record(weyl_functor(&part.sheaf).map(|w| w.inclusion.is_iso()), || json!({"dims": part.sheaf.dims()}));
        let v = weyl_violation(&part.sheaf);
        fixed.record(v.as_ref().map(Option::is_none).map_err(Clone::clone), || json!(v.clone().ok().flatten()));
        let bad = (0..base.n_points()).find(|&x| stalk_weyl_rep(&part.sheaf, x).is_err());
        reps.record(Ok(bad.is_none()), || json!({"point": bad}));

        let x = input.rng.random_range(0..base.n_points());
        let k = &base.subgroup_points().expect("subgroup tower")[x];
        let wg = base.group().weyl_group(k);
        let a = random_rep(&mut input.rng, &wg.weyl, 2);
        sky.record(weyl_skyscraper_from_quotient(&base, x, &a).and_then(|s| is_weyl(&s)), || json!({"point": x}));

        for step in 0..tower.depth() {
            let w = weyl_functor(&random_sheaf(&mut input.rng, tower.level(step), 2)).map(|w| w.sheaf);
            let r = w.and_then(|w| weyl_pullback_check(&w, tower.step(step)));
            pull.record(r.map(|r| r.source_weyl && r.pullback_weyl), || json!({"step": step}));
        }
        let f = random_sheaf(&mut input.rng, &base, 2);
        let (m1, m2) = (random_map(&mut input.rng, &e, &f), random_map(&mut input.rng, &e, &f));
        lim.record(weyl_limit_check(&m1, &m2).map(|r| r.holds()), || json!({"dims": [e.dims(), f.dims()]}));
    }
    vec![mono.finish(), unit.finish(), fixed.finish(), reps.finish(), sky.finish(), pull.finish(), lim.finish()]
}

fn godement<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let mut delta = Tally::new("godement.delta-mono");
    let mut term = Tally::new("godement.terminates");
    for e in sheaves(input) {
        match godement_resolution(&e, 4) {
            Ok(res) => {
                let ok = res.maps.first().is_none_or(|m| m.is_mono());
                delta.record(Ok(ok), || json!({"dims": e.dims()}));
                let zero_at_first = res.terms.len() <= 1 && res.cokernel_dims.iter().flatten().all(|&d| d == 0);
                term.record(Ok(zero_at_first), || json!({"cokernel_dims": res.cokernel_dims}));
            }
            Err(err) => {
                delta.record(Err(err.clone()), || Value::Null);
                term.record(Err(err), || Value::Null);
            }
        }
    }
    vec![delta.finish(), term.finish()]
}

/// Vectors fixed by every element of `N_k`, by direct elimination over all elements.
pub fn brute_force_fixed(e: &FiniteEqSheaf, x: usize, members: &[usize]) -> Subspace {
    let n = e.dim(x);
    let diffs: Vec<Matrix> = members.iter().map(|&g| e.translation(g, x).sub(&Matrix::identity(n))).collect();
    if diffs.is_empty() {
        return Subspace::whole(n);
    }
    Subspace::kernel_of(&Matrix::vstack(n, &diffs.iter().collect::<Vec<_>>()))
}

fn disc_product<R: Rng>(input: &mut SuiteInput<R>) -> Vec<CheckReport> {
    let tower = Arc::clone(&input.tower);
    let mut oracle = Tally::new("disc-product.oracle");
    let mut universal = Tally::new("disc-product.universal");
    let top = tower.groups().top();
    let rounds = input.count.max(1);
    for _ in 0..rounds {
        let mut family = input.presheaves.clone();
        family.push(random_presheaf(&mut input.rng, &tower));
        family.push(EqPresheaf::constant(&tower, &random_rep(&mut input.rng, top, 1)).expect("constant presheaf"));
        let p = match product_disc(&family) {
            Ok(p) => p,
            Err(err) => {
                oracle.record(Err(err), || Value::Null);
                continue;
            }
        };
        let sum = crate::diagram::presheaf_sum(&family).expect("common tower");
        let mut mismatch = None;
        for k in 0..=tower.depth() {
            let members = tower.groups().kernel(k).members().to_vec();
            for x in 0..tower.level(k).n_points() {
                let expected = brute_force_fixed(sum.level(k), x, &members).dim();
                if expected != p.product.level(k).dim(x) && mismatch.is_none() {
                    mismatch = Some((k, x, expected, p.product.level(k).dim(x)));
                }
            }
        }
        oracle.record(Ok(mismatch.is_none()), || json!({"level_point_expected_found": mismatch}));
        let mut tests = vec![EqPresheaf::constant(&tower, &GroupRep::trivial(top, 1)).expect("constant")];
        if tower.is_subgroup_tower() {
            tests.push(example_group_ring(&tower).expect("subgroup tower"));
        }
        let test = tests.choose(&mut input.rng).expect("nonempty").clone();
        universal.record(product_universal_check(&p, &family, &test), || json!({"dims": p.product.dims()}));
    }
    vec![oracle.finish(), universal.finish()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_ORDER_CAP;
    use crate::io::{parse_group_spec, subgroup_tower};
    use crate::random::rng;
    use crate::sheaf::constant_sheaf;

    fn input(spec: &str, count: usize) -> SuiteInput<rand_chacha::ChaCha8Rng> {
        let g = parse_group_spec(spec, DEFAULT_ORDER_CAP).unwrap();
        let tower = subgroup_tower(&g, None, DEFAULT_ORDER_CAP).unwrap();
        SuiteInput { tower, sheaves: Vec::new(), presheaves: Vec::new(), count, rng: rng(11) }
    }

    #[test]
    fn every_suite_passes_on_cyclic_four() {
        for suite in Suite::ALL {
            let mut inp = input("cyclic:4", 2);
            for r in run_suite(suite, &mut inp, false) {
                assert!(r.pass, "{suite:?}: {r:?}");
                assert!(r.witnesses.is_empty());
            }
        }
    }

    #[test]
    fn weyl_suite_on_constant_sheaf() {
        let mut inp = input("sym:3", 0);
        let top = Arc::clone(inp.tower.top());
        inp.sheaves.push(constant_sheaf(&top, &GroupRep::trivial(top.group(), 1)).unwrap());
        let reports = run_suite(Suite::Weyl, &mut inp, true);
        assert!(reports.iter().all(|r| r.pass && r.millis.is_some()));
    }

    #[test]
    fn failure_carries_witness() {
        let r = CheckReport::new("x", false, || json!({"point": 3}));
        assert_eq!(r.witnesses.len(), 1);
        let r = CheckReport::from_error("cocycle", &Error::CocycleViolation { g_outer: 1, g_inner: 2, point: 0 });
        assert_eq!(r.witnesses[0]["g_inner"], 2);
        assert_eq!("sheafify-idem".parse::<Suite>().unwrap(), Suite::SheafifyIdem);
        assert!("nope".parse::<Suite>().is_err());
    }
}
