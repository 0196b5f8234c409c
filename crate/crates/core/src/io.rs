//! JSON documents for groups, towers, sheaves, presheaves and diagram sheaves,
//! and the small group-spec language used on the command line.
//!
//! Rationals are written as `"p/q"` strings (or `"p"` when integral). Matrices are
//! lists of rows; column counts follow from the stalk dimensions.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramSheaf, EqPresheaf};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Permutation};
use crate::linalg::{format_q, parse_q, Matrix};
use crate::rep::QModule;
use crate::sheaf::FiniteEqSheaf;
use crate::tower::{FiniteGSpace, GroupTower, SpaceTower};
use crate::weyl::is_weyl;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub degree: usize,
    /// Generators as image lists on `0..degree`.
    pub generators: Vec<Vec<usize>>,
}

impl GroupDoc {
    pub fn of(g: &FiniteGroup) -> GroupDoc {
        GroupDoc { degree: g.degree(), generators: g.generators().iter().map(|p| p.images().to_vec()).collect() }
    }

    pub fn build(&self, cap: usize) -> Result<Arc<FiniteGroup>> {
        let gens = self.generators.iter().map(|g| Permutation::new(g.clone())).collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(FiniteGroup::generate(self.degree, gens, cap)?))
    }
}

/// `cyclic:n`, `sym:n`, `dihedral:n`, `product:a,b,...` (bare integers are cyclic), or a JSON file.
pub fn parse_group_spec(spec: &str, cap: usize) -> Result<Arc<FiniteGroup>> {
    let spec = spec.trim();
    if spec.ends_with(".json") || Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        let doc: GroupDoc = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        return doc.build(cap);
    }
    let number = |s: &str| -> Result<usize> {
        s.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| Error::Parse(format!("bad size {s:?}")))
    };
    let (kind, arg) = match spec.split_once(':') {
        Some(pair) => pair,
        None if spec.parse::<usize>().is_ok() => ("cyclic", spec),
        None => return Err(Error::Parse(format!("unknown group spec {spec:?}"))),
    };
    let group = match kind {
        "cyclic" => FiniteGroup::cyclic(number(arg)?)?,
        "sym" => FiniteGroup::symmetric(number(arg)?, cap)?,
        "dihedral" => FiniteGroup::dihedral(number(arg)?)?,
        "product" => {
            let factors = split_top_level(arg).iter().map(|f| parse_group_spec(f, cap)).collect::<Result<Vec<_>>>()?;
            let mut acc = FiniteGroup::trivial();
            for f in &factors {
                acc = FiniteGroup::direct_product(&acc, f, cap)?;
            }
            acc
        }
        _ => return Err(Error::Parse(format!("unknown group kind {kind:?}"))),
    };
    if group.order() > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(Arc::new(group))
}

/// Splits on commas, keeping nested `product:` arguments in brackets together.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter().map(|p| p.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']).to_string()).collect()
}

/// A subgroup-space tower is determined by its group and depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDoc {
    pub group: GroupDoc,
    pub depth: usize,
    /// Informational; ignored when loading.
    #[serde(default)]
    pub levels: Vec<LevelSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub group_order: usize,
    pub points: usize,
    pub orbits: usize,
    pub subgroup_orders: Vec<usize>,
}

pub fn subgroup_tower(group: &Arc<FiniteGroup>, depth: Option<usize>, cap: usize) -> Result<Arc<SpaceTower>> {
    let groups = GroupTower::normal_series(group, depth, cap)?;
    Ok(Arc::new(SpaceTower::subgroup_space_tower(groups, cap)?))
}

impl TowerDoc {
    pub fn of(tower: &SpaceTower) -> TowerDoc {
        let levels = tower
            .levels()
            .iter()
            .map(|x| LevelSummary {
                group_order: x.group().order(),
                points: x.n_points(),
                orbits: x.orbits().len(),
                subgroup_orders: x.subgroup_points().map(|s| s.iter().map(|h| h.order()).collect()).unwrap_or_default(),
            })
            .collect();
        TowerDoc { group: GroupDoc::of(tower.groups().top()), depth: tower.depth(), levels }
    }

    pub fn build(&self, cap: usize) -> Result<Arc<SpaceTower>> {
        subgroup_tower(&self.group.build(cap)?, Some(self.depth), cap)
    }
}

fn matrix_doc(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(format_q).collect()).collect()
}

fn matrix_from_doc(rows: usize, cols: usize, doc: &[Vec<String>]) -> Result<Matrix> {
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("expected a {rows}x{cols} matrix")));
    }
    let data = doc
        .iter()
        .map(|r| r.iter().map(|e| parse_q(e).ok_or_else(|| Error::Parse(format!("bad rational {e:?}")))).collect())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows, cols, data).ok_or_else(|| Error::Shape("ragged matrix".into()))
}

/// The base of a sheaf document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaseDoc {
    /// The top level of a subgroup-space tower.
    TowerTop {
        tower: TowerDoc,
    },
    SubgroupSpace {
        group: GroupDoc,
    },
    Explicit {
        group: GroupDoc,
        points: usize,
        generator_action: Vec<Vec<usize>>,
    },
}

/// A base space, with its tower when it is a tower's top level.
pub struct LoadedBase {
    pub space: Arc<FiniteGSpace>,
    pub tower: Option<Arc<SpaceTower>>,
}

impl BaseDoc {
    pub fn build(&self, cap: usize) -> Result<LoadedBase> {
        match self {
            BaseDoc::TowerTop { tower } => {
                let t = tower.build(cap)?;
                Ok(LoadedBase { space: Arc::clone(t.top()), tower: Some(t) })
            }
            BaseDoc::SubgroupSpace { group } => {
                let g = group.build(cap)?;
                Ok(LoadedBase { space: Arc::new(FiniteGSpace::subgroup_space(g, cap)?), tower: None })
            }
            BaseDoc::Explicit { group, points, generator_action } => {
                let g = group.build(cap)?;
                Ok(LoadedBase { space: Arc::new(FiniteGSpace::new(g, *points, generator_action, None)?), tower: None })
            }
        }
    }
}

/// Stalk dimensions and generator translations `translations[i][x]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalksDoc {
    pub stalks: Vec<usize>,
    pub translations: Vec<Vec<Vec<Vec<String>>>>,
}

impl StalksDoc {
    pub fn of(e: &FiniteEqSheaf) -> StalksDoc {
        StalksDoc {
            stalks: e.dims(),
            translations: e.generator_translations().iter().map(|per| per.iter().map(matrix_doc).collect()).collect(),
        }
    }

    pub fn build(&self, base: &Arc<FiniteGSpace>) -> Result<FiniteEqSheaf> {
        let n = base.n_points();
        if self.stalks.len() != n {
            return Err(Error::Shape(format!("{} stalks for {n} points", self.stalks.len())));
        }
        let gens = base.generator_action();
        if self.translations.len() != gens.len() {
            return Err(Error::Shape("one translation list per generator required".into()));
        }
        let translations = self
            .translations
            .iter()
            .zip(gens)
            .map(|(per, act)| {
                if per.len() != n {
                    return Err(Error::Shape("one translation per point required".into()));
                }
                per.iter()
                    .enumerate()
                    .map(|(x, m)| matrix_from_doc(self.stalks[act[x]], self.stalks[x], m))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteEqSheaf::new(Arc::clone(base), self.stalks.iter().map(|&d| QModule::new(d)).collect(), translations)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafDoc {
    pub base: BaseDoc,
    #[serde(flatten)]
    pub data: StalksDoc,
    /// Present only when the sheaf passed the Weyl test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<bool>,
}

impl SheafDoc {
    pub fn of(e: &FiniteEqSheaf, base: BaseDoc) -> SheafDoc {
        let weyl = match is_weyl(e) {
            Ok(true) => Some(true),
            _ => None,
        };
        SheafDoc { base, data: StalksDoc::of(e), weyl }
    }

    pub fn build(&self, cap: usize) -> Result<(FiniteEqSheaf, LoadedBase)> {
        let base = self.base.build(cap)?;
        let e = self.data.build(&base.space)?;
        if self.weyl == Some(true) && !is_weyl(&e)? {
            return Err(Error::NotKFixed { point: crate::weyl::weyl_violation(&e)?.map_or(0, |w| w.point) });
        }
        Ok((e, base))
    }
}

/// Levels and level-to-level maps over a subgroup-space tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeveledDoc {
    pub tower: TowerDoc,
    pub levels: Vec<StalksDoc>,
    /// `maps[k][x']` from level `k` to level `k + 1`.
    pub maps: Vec<Vec<Vec<Vec<String>>>>,
}

fn maps_doc(maps: &[crate::sheaf::SheafMap]) -> Vec<Vec<Vec<Vec<String>>>> {
    maps.iter().map(|m| m.maps().iter().map(matrix_doc).collect()).collect()
}

fn maps_from_doc(
    tower: &SpaceTower,
    levels: &[FiniteEqSheaf],
    doc: &[Vec<Vec<Vec<String>>>],
) -> Result<Vec<Vec<Matrix>>> {
    if doc.len() != tower.depth() {
        return Err(Error::Shape("one map list per step required".into()));
    }
    doc.iter()
        .enumerate()
        .map(|(k, per)| {
            let step = tower.step(k);
            if per.len() != step.fine().n_points() {
                return Err(Error::Shape(format!("step {k}: one map per point required")));
            }
            per.iter()
                .enumerate()
                .map(|(xp, m)| matrix_from_doc(levels[k + 1].dim(xp), levels[k].dim(step.map_point(xp)), m))
                .collect()
        })
        .collect()
}

impl LeveledDoc {
    pub fn of_presheaf(f: &EqPresheaf) -> LeveledDoc {
        LeveledDoc {
            tower: TowerDoc::of(f.tower()),
            levels: f.levels().iter().map(StalksDoc::of).collect(),
            maps: maps_doc(f.restrictions()),
        }
    }

    pub fn of_diagram(d: &DiagramSheaf) -> LeveledDoc {
        LeveledDoc {
            tower: TowerDoc::of(d.tower()),
            levels: d.levels().iter().map(StalksDoc::of).collect(),
            maps: maps_doc(d.structure_maps()),
        }
    }

    pub fn build_presheaf(&self, cap: usize) -> Result<EqPresheaf> {
        let tower = self.tower.build(cap)?;
        let levels =
            self.levels.iter().enumerate().map(|(k, l)| l.build(tower.inflated(k))).collect::<Result<Vec<_>>>()?;
        let maps = maps_from_doc(&tower, &levels, &self.maps)?;
        EqPresheaf::new(tower, levels, maps)
    }

    pub fn build_diagram(&self, cap: usize) -> Result<DiagramSheaf> {
        let tower = self.tower.build(cap)?;
        let levels =
            self.levels.iter().enumerate().map(|(k, l)| l.build(tower.level(k))).collect::<Result<Vec<_>>>()?;
        let maps = maps_from_doc(&tower, &levels, &self.maps)?;
        DiagramSheaf::new(tower, levels, maps)
    }
}

/// Any artifact written by the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Document {
    Tower(TowerDoc),
    Sheaf(SheafDoc),
    Presheaf(LeveledDoc),
    Diagram(LeveledDoc),
}

impl Document {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Document> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Document> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Document::from_json(&text)
    }
}
