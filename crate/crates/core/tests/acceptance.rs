//! End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::sync::Arc;
use std::time::Instant;

use eqsheaf::check::{brute_force_fixed, run_suite, CheckReport, Suite, SuiteInput};
use eqsheaf::diagram::{
    adjoint_structure_maps, colim_sheaf, counit_check, example_fix, presheaf_sum, product_disc, pushforward_diagram,
    reconstruction_maps, sheafify_check, EqPresheaf,
};
use eqsheaf::group::DEFAULT_ORDER_CAP;
use eqsheaf::io::{parse_group_spec, subgroup_tower};
use eqsheaf::linalg::{q, Matrix, Subspace};
use eqsheaf::random::{random_presheaf, random_sheaf, rng};
use eqsheaf::{FiniteGSpace, FiniteGroup, GroupRep, GroupTower, SpaceTower};

const SEED: u64 = 20240611;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn towers() -> Vec<(&'static str, Arc<SpaceTower>)> {
    ["cyclic:8", "sym:3"]
        .into_iter()
        .map(|spec| {
            let g = parse_group_spec(spec, DEFAULT_ORDER_CAP).expect("group");
            (spec, subgroup_tower(&g, None, DEFAULT_ORDER_CAP).expect("tower"))
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn subgroup_space_sizes() -> Outcome {
    let mut checked = 0;
    for p in [2usize, 3] {
        for n in 0..=6u32 {
            let g = Arc::new(FiniteGroup::cyclic(p.pow(n)).map_err(|e| e.to_string())?);
            let s = FiniteGSpace::subgroup_space(g, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
            ensure(s.n_points() == n as usize + 1, || format!("|S(Z/{p}^{n})| = {}", s.n_points()))?;
            checked += 1;
        }
    }
    for (p, q_, max) in [(2usize, 3usize, 3u32), (2, 5, 2), (3, 5, 2)] {
        for a in 0..=max {
            for b in 0..=max {
                let spec = format!("product:{},{}", p.pow(a), q_.pow(b));
                let g = parse_group_spec(&spec, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
                let s = FiniteGSpace::subgroup_space(g, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
                let expected = (a as usize + 1) * (b as usize + 1);
                ensure(s.n_points() == expected, || format!("|S({spec})| = {} != {expected}", s.n_points()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} groups"))
}

fn counit_iso() -> Outcome {
    let mut r = rng(SEED);
    let mut n = 0;
    for (spec, tower) in towers() {
        for i in 0..30 {
            let e = random_sheaf(&mut r, tower.top(), 3);
            let rep = counit_check(&e, &tower).map_err(|e| e.to_string())?;
            ensure(rep.counit_iso && rep.cocone_consistent, || format!("{spec} instance {i}: {rep:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} random sheaves"))
}

fn round_trip() -> Outcome {
    let mut r = rng(SEED + 1);
    let mut n = 0;
    for (spec, tower) in towers() {
        for i in 0..15 {
            let e = random_sheaf(&mut r, tower.top(), 3);
            let d = pushforward_diagram(&e, &tower).map_err(|e| e.to_string())?;
            let adj = adjoint_structure_maps(&d).map_err(|e| e.to_string())?;
            ensure(adj.iter().all(|(_, iso)| *iso), || format!("{spec} instance {i}: adjoint map not iso"))?;
            let rec = reconstruction_maps(&d).map_err(|e| e.to_string())?;
            ensure(rec.iter().all(|m| m.is_iso()), || format!("{spec} instance {i}: reconstruction not iso"))?;
            n += 1;
        }
    }
    Ok(format!("{n} diagram sheaves"))
}

fn sheafification() -> Outcome {
    let mut r = rng(SEED + 2);
    let mut n = 0;
    for (spec, tower) in towers() {
        for i in 0..8 {
            let f = random_presheaf(&mut r, &tower);
            let e = random_sheaf(&mut r, tower.top(), 2);
            let rep = sheafify_check(&f, &e).map_err(|e| e.to_string())?;
            ensure(rep.holds(), || format!("{spec} instance {i}: {rep:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} random presheaves"))
}

/// The Z/8 tower over one-point spaces with the family Q[Z/2^n] inflated to Z/8.
fn diagonal_first_level() -> Result<Option<usize>, String> {
    let g = Arc::new(FiniteGroup::cyclic(8).map_err(|e| e.to_string())?);
    let groups = GroupTower::normal_series(&g, None, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
    let levels = groups
        .levels()
        .iter()
        .map(|h| {
            let acts = vec![vec![0]; h.generator_indices().len()];
            FiniteGSpace::new(h.clone(), 1, &acts, None).map(Arc::new)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let tower = Arc::new(SpaceTower::new(groups.clone(), levels, vec![vec![0]; 3]).map_err(|e| e.to_string())?);
    let family = (0..=3)
        .map(|n| {
            let m = GroupRep::regular(groups.level(n)).pullback(groups.projection(n))?;
            EqPresheaf::constant(&tower, &m)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let p = product_disc(&family).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = p.product.dims().iter().map(|d| d[0]).collect();
    ensure(dims == [4, 7, 11, 15], || format!("product dims {dims:?}"))?;
    // sum of the identity basis vectors of each factor
    let mut diagonal = vec![q(0); 15];
    let mut off = 0;
    for n in 0..=3 {
        diagonal[off] = q(1);
        off += 1 << n;
    }
    Ok(p.fixed.iter().position(|level| level[0].contains(&diagonal)))
}

fn disc_product() -> Outcome {
    let mut r = rng(SEED + 3);
    let mut points = 0;
    for (spec, tower) in towers() {
        for i in 0..4 {
            let family = vec![random_presheaf(&mut r, &tower), random_presheaf(&mut r, &tower)];
            let p = product_disc(&family).map_err(|e| e.to_string())?;
            let sum = presheaf_sum(&family).map_err(|e| e.to_string())?;
            for k in 0..=tower.depth() {
                let members = tower.groups().kernel(k).members().to_vec();
                for x in 0..tower.level(k).n_points() {
                    let expected = brute_force_fixed(sum.level(k), x, &members).dim();
                    let found = p.product.level(k).dim(x);
                    ensure(expected == found, || {
                        format!("{spec} family {i} level {k} point {x}: {found} != {expected}")
                    })?;
                    points += 1;
                }
            }
        }
    }
    let first = diagonal_first_level()?;
    ensure(first == Some(3), || format!("diagonal first appears at {first:?}"))?;
    Ok(format!("{points} values match the oracle; diagonal first at level 3 of 3"))
}

fn suite_battery(suite: Suite, count: usize, seed: u64) -> Result<usize, String> {
    let mut checks = 0;
    for (spec, tower) in towers() {
        let mut input = SuiteInput { tower, sheaves: Vec::new(), presheaves: Vec::new(), count, rng: rng(seed) };
        let reports: Vec<CheckReport> = run_suite(suite, &mut input, false);
        for rep in &reports {
            ensure(rep.pass, || {
                format!("{spec} {}: {}", rep.check, serde_json::to_string(&rep.witnesses).unwrap_or_default())
            })?;
        }
        checks += reports.len();
    }
    Ok(checks)
}

fn abelian() -> Outcome {
    let n = suite_battery(Suite::Abelian, 50, SEED + 4)?;
    Ok(format!("{n} checks over 100 random maps"))
}

fn adjunctions() -> Outcome {
    let n = suite_battery(Suite::Adjunctions, 8, SEED + 5)?;
    Ok(format!("{n} checks, 16 random instances"))
}

fn weyl() -> Outcome {
    let n = suite_battery(Suite::Weyl, 8, SEED + 6)?;
    Ok(format!("{n} checks, 16 random instances"))
}

fn godement() -> Outcome {
    let n = suite_battery(Suite::Godement, 25, SEED + 7)?;
    Ok(format!("{n} checks over 50 random sheaves"))
}

fn fix_stalks() -> Outcome {
    let mut points = 0;
    for (spec, tower) in towers() {
        let g = tower.groups().top();
        let v = GroupRep::regular(g);
        let d = example_fix(&v, &tower).map_err(|e| e.to_string())?;
        let colim = colim_sheaf(&d).map_err(|e| e.to_string())?;
        let top = tower.top();
        let subs = top.subgroup_points().expect("subgroup space");
        // columns of `embed[x]` are the colimit stalk's basis inside V
        let embed: Vec<Matrix> = subs.iter().map(|k| v.fixed_subspace(k).basis().clone()).collect();
        for (x, k) in subs.iter().enumerate() {
            let oracle =
                brute_force_fixed(&eqsheaf::sheaf::constant_sheaf(top, &v).map_err(|e| e.to_string())?, x, k.members());
            ensure(colim.sheaf.dim(x) == oracle.dim(), || {
                format!("{spec} point {x}: dim {} != {}", colim.sheaf.dim(x), oracle.dim())
            })?;
            ensure(oracle.dim() == g.order() / k.order(), || format!("{spec} point {x}: oracle dim"))?;
            let image = Subspace::span(&embed[x]);
            ensure(image.dim() == oracle.dim() && image.contains_subspace(&oracle), || {
                format!("{spec} point {x}: image")
            })?;
            for gi in 0..g.order() {
                let gx = top.act(gi, x);
                let lhs = v.matrix(gi).mul(&embed[x]);
                let rhs = embed[gx].mul(colim.sheaf.translation(gi, x));
                ensure(lhs == rhs, || format!("{spec} point {x}: embedding not equivariant at element {gi}"))?;
            }
            points += 1;
        }
    }
    Ok(format!("{points} subgroup points, equivariant embeddings onto V^K"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("subgroup-space sizes", subgroup_space_sizes),
        ("counit isomorphism", counit_iso),
        ("round trip on the iso-subcategory", round_trip),
        ("sheafification idempotence and factorization", sheafification),
        ("disc-product oracle and diagonal", disc_product),
        ("abelian-category battery", abelian),
        ("adjunction batteries", adjunctions),
        ("weyl sheaves", weyl),
        ("godement resolution", godement),
        ("fixed-point stalks", fix_stalks),
    ];
    let mut failed = 0;
    let total = Instant::now();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
