//! JSON bundles of named categories, functors, modules and opcategory
//! structures.
//!
//! Maps are `{"table": [..]}` in FinSet and row-major `{"matrix": [[..]]}` in
//! FinVect, with rationals written `"p/q"` and residues mod p as integers.
//! Maps out of an empty object (and, in FinVect, into a zero space) are
//! unique and left out. Saved files have sorted keys and are byte-stable.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::encat::{LawReport, Module, Shape, VCat, VFunctor};
use crate::error::{KanError, Result};
use crate::frobenius::{check_counit, check_delta_naturality, NaturalityLevel, OpcatStructure};
use crate::groups::FiniteMonoid;
use crate::vbase::field::parse_rational;
use crate::vbase::{BaseCtx, Field, Mat, Scalar, VMap, VObj};

use super::config::ProbeConfig;

/// A matrix entry as written: an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Int(BigInt),
    Ratio(Scalar),
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Entry::Int(i) => match i64::try_from(i) {
                Ok(x) => s.serialize_i64(x),
                Err(_) => s.serialize_str(&i.to_string()),
            },
            Entry::Ratio(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        }
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Entry, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Entry;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Entry, E> {
                Ok(Entry::Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Entry, E> {
                Ok(Entry::Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Entry, E> {
                parse_rational(v).map(Entry::Ratio).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<Entry>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawField {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBase {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<RawField>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    objects: Vec<String>,
    hom: BTreeMap<String, usize>,
    #[serde(default)]
    comp: BTreeMap<String, RawMap>,
    #[serde(default)]
    id: BTreeMap<String, RawMap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctor {
    source: String,
    target: String,
    objects: BTreeMap<String, String>,
    #[serde(default)]
    maps: BTreeMap<String, RawMap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    category: String,
    values: BTreeMap<String, usize>,
    #[serde(default)]
    action: BTreeMap<String, RawMap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOpcat {
    category: String,
    level: String,
    #[serde(default)]
    delta: BTreeMap<String, RawMap>,
    #[serde(default)]
    epsilon: BTreeMap<String, RawMap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    base: RawBase,
    #[serde(default)]
    categories: BTreeMap<String, RawCategory>,
    #[serde(default)]
    functors: BTreeMap<String, RawFunctor>,
    #[serde(default)]
    copresheaves: BTreeMap<String, RawModule>,
    #[serde(default)]
    presheaves: BTreeMap<String, RawModule>,
    #[serde(default)]
    bimodules: BTreeMap<String, RawModule>,
    #[serde(default)]
    trimodules: BTreeMap<String, RawModule>,
    #[serde(default)]
    opcats: BTreeMap<String, RawOpcat>,
    #[serde(default)]
    probes: BTreeMap<String, ProbeConfig>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctorEntry {
    pub source: String,
    pub target: String,
    pub functor: VFunctor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleEntry {
    pub category: String,
    pub module: Module,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpcatEntry {
    pub category: String,
    pub op: OpcatStructure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bundle {
    pub base: BaseCtx,
    pub categories: BTreeMap<String, Arc<VCat>>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub copresheaves: BTreeMap<String, ModuleEntry>,
    pub presheaves: BTreeMap<String, ModuleEntry>,
    pub bimodules: BTreeMap<String, ModuleEntry>,
    pub trimodules: BTreeMap<String, ModuleEntry>,
    pub opcats: BTreeMap<String, OpcatEntry>,
    pub probes: BTreeMap<String, ProbeConfig>,
}

const MODULE_KINDS: [(&str, Shape); 4] = [
    ("copresheaf", Shape::Copresheaf),
    ("presheaf", Shape::Presheaf),
    ("bimodule", Shape::Bimodule),
    ("trimodule", Shape::TriModule),
];

fn level_name(level: NaturalityLevel) -> &'static str {
    match level {
        NaturalityLevel::Frobenius => "frobenius",
        NaturalityLevel::FullOpcat => "full-opcat",
    }
}

fn parse_level(s: &str) -> Result<NaturalityLevel> {
    match s {
        "frobenius" => Ok(NaturalityLevel::Frobenius),
        "full-opcat" => Ok(NaturalityLevel::FullOpcat),
        other => Err(KanError::Unresolved(format!("naturality level `{other}`"))),
    }
}

fn unique_map(v: BaseCtx, dom: VObj, cod: VObj) -> bool {
    dom.0 == 0 || (cod.0 == 0 && !v.is_finset())
}

fn encode_map(v: BaseCtx, m: &VMap) -> RawMap {
    match v {
        BaseCtx::FinSet => RawMap { table: Some(m.table().expect("FinSet map").to_vec()), matrix: None },
        BaseCtx::FinVect(field) => {
            let dense = m.matrix().expect("FinVect map").to_dense();
            let entry = |x: Scalar| match field {
                Field::Rationals => Entry::Ratio(x),
                Field::Prime(_) => Entry::Int(x.numer().clone()),
            };
            RawMap { table: None, matrix: Some(dense.into_iter().map(|row| row.into_iter().map(entry).collect()).collect()) }
        }
    }
}

fn decode_map(v: BaseCtx, raw: &RawMap, dom: VObj, cod: VObj, at: &str) -> Result<VMap> {
    let bad = |msg: String| KanError::Boundary(format!("{at}: {msg}"));
    match (v, raw) {
        (BaseCtx::FinSet, RawMap { table: Some(t), matrix: None }) => {
            VMap::from_table(dom, cod, t.clone()).map_err(|e| bad(e.to_string()))
        }
        (BaseCtx::FinVect(field), RawMap { table: None, matrix: Some(rows) }) => {
            if rows.len() != cod.0 || rows.iter().any(|r| r.len() != dom.0) {
                return Err(bad(format!("matrix is not {} x {}", cod.0, dom.0)));
            }
            let dense = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| {
                            let q = match e {
                                Entry::Int(i) => Scalar::from_integer(i.clone()),
                                Entry::Ratio(r) => r.clone(),
                            };
                            field.from_rational(&q)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            VMap::from_matrix(field, Mat::from_dense(cod.0, dom.0, &dense))
        }
        (BaseCtx::FinSet, _) => Err(bad("FinSet maps are written as tables".into())),
        (BaseCtx::FinVect(_), _) => Err(bad("FinVect maps are written as matrices".into())),
    }
}

fn map_lookup(v: BaseCtx, maps: &BTreeMap<String, RawMap>, key: &str, dom: VObj, cod: VObj, owner: &str) -> Result<VMap> {
    match maps.get(key) {
        Some(raw) => decode_map(v, raw, dom, cod, &format!("{owner} at `{key}`")),
        None if unique_map(v, dom, cod) => Ok(v.zero_map(dom, cod).unwrap_or_else(|_| v.from_initial(cod))),
        None => Err(KanError::Unresolved(format!("{owner}: missing map at `{key}`"))),
    }
}

fn put_map(v: BaseCtx, maps: &mut BTreeMap<String, RawMap>, key: String, m: &VMap) {
    if !unique_map(v, m.dom(), m.cod()) {
        maps.insert(key, encode_map(v, m));
    }
}

fn key(a: &VCat, objs: &[usize]) -> String {
    objs.iter().map(|&x| a.name(x)).collect::<Vec<_>>().join(",")
}

fn parse_key(a: &VCat, key: &str, arity: usize, owner: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != arity {
        return Err(KanError::Unresolved(format!("{owner}: key `{key}` should name {arity} objects")));
    }
    parts
        .iter()
        .map(|p| a.object(p).map_err(|_| KanError::Unresolved(format!("{owner}: unknown object `{p}`"))))
        .collect()
}

fn require_keys<T>(map: &BTreeMap<String, T>, expected: impl Iterator<Item = String>, owner: &str) -> Result<()> {
    let expected: Vec<String> = expected.collect();
    if let Some(k) = map.keys().find(|k| !expected.contains(k)) {
        return Err(KanError::Unresolved(format!("{owner}: unexpected key `{k}`")));
    }
    Ok(())
}

fn lawful(kind: &str, name: &str, report: &LawReport) -> Result<()> {
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(KanError::Unlawful(format!("{kind} `{name}`: {v}"))),
    }
}

fn parse_base(raw: &RawBase) -> Result<BaseCtx> {
    match (raw.kind.as_str(), &raw.field) {
        ("finset", None) => Ok(BaseCtx::FinSet),
        ("finvect", Some(RawField::Named(q))) if q == "Q" => Ok(BaseCtx::FinVect(Field::Rationals)),
        ("finvect", Some(RawField::Prime { fp })) => Ok(BaseCtx::FinVect(Field::prime(*fp)?)),
        (kind, field) => Err(KanError::Unresolved(format!("base {kind} with field {field:?}"))),
    }
}

fn encode_base(v: BaseCtx) -> RawBase {
    match v {
        BaseCtx::FinSet => RawBase { kind: "finset".into(), field: None },
        BaseCtx::FinVect(Field::Rationals) => RawBase { kind: "finvect".into(), field: Some(RawField::Named("Q".into())) },
        BaseCtx::FinVect(Field::Prime(p)) => RawBase { kind: "finvect".into(), field: Some(RawField::Prime { fp: p }) },
    }
}

fn module_tuples(m: &Module) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..m.tuple_count()).map(|i| m.tuple(i))
}

fn tuple_key(a: &VCat, t: &[usize], u: &[usize]) -> String {
    format!("{};{}", key(a, t), key(a, u))
}

impl Bundle {
    pub fn new(base: BaseCtx) -> Bundle {
        Bundle {
            base,
            categories: BTreeMap::new(),
            functors: BTreeMap::new(),
            copresheaves: BTreeMap::new(),
            presheaves: BTreeMap::new(),
            bimodules: BTreeMap::new(),
            trimodules: BTreeMap::new(),
            opcats: BTreeMap::new(),
            probes: BTreeMap::new(),
        }
    }

    fn modules(&self, shape: Shape) -> &BTreeMap<String, ModuleEntry> {
        match shape {
            Shape::Copresheaf => &self.copresheaves,
            Shape::Presheaf => &self.presheaves,
            Shape::Bimodule => &self.bimodules,
            _ => &self.trimodules,
        }
    }

    fn modules_mut(&mut self, shape: Shape) -> &mut BTreeMap<String, ModuleEntry> {
        match shape {
            Shape::Copresheaf => &mut self.copresheaves,
            Shape::Presheaf => &mut self.presheaves,
            Shape::Bimodule => &mut self.bimodules,
            _ => &mut self.trimodules,
        }
    }

    fn name_of_category(&self, a: &VCat) -> Result<String> {
        self.categories
            .iter()
            .find(|(_, c)| ***c == *a)
            .map(|(n, _)| n.clone())
            .ok_or_else(|| KanError::Unresolved("category not registered in the bundle".into()))
    }

    pub fn add_category(&mut self, name: &str, a: Arc<VCat>) -> Result<()> {
        if a.ctx() != self.base {
            return Err(KanError::CtxMismatch(format!("category `{name}` is not over the bundle base")));
        }
        if a.names().iter().any(|o| o.contains([',', ';'])) {
            return Err(KanError::Boundary(format!("object names of `{name}` may not contain `,` or `;`")));
        }
        self.categories.insert(name.into(), a);
        Ok(())
    }

    pub fn add_functor(&mut self, name: &str, functor: VFunctor) -> Result<()> {
        let source = self.name_of_category(functor.source())?;
        let target = self.name_of_category(functor.target())?;
        self.functors.insert(name.into(), FunctorEntry { source, target, functor });
        Ok(())
    }

    /// Register a copresheaf, presheaf, bimodule or trimodule by its shape.
    pub fn add_module(&mut self, name: &str, module: Module) -> Result<()> {
        if !MODULE_KINDS.iter().any(|(_, s)| *s == module.shape()) {
            return Err(KanError::Boundary(format!("module `{name}` has no bundle shape")));
        }
        let category = self.name_of_category(module.base())?;
        self.modules_mut(module.shape()).insert(name.into(), ModuleEntry { category, module });
        Ok(())
    }

    pub fn add_opcat(&mut self, name: &str, op: OpcatStructure) -> Result<()> {
        let category = self.name_of_category(op.base())?;
        self.opcats.insert(name.into(), OpcatEntry { category, op });
        Ok(())
    }

    pub fn category(&self, name: &str) -> Result<&Arc<VCat>> {
        self.categories.get(name).ok_or_else(|| KanError::Unresolved(format!("category `{name}`")))
    }

    pub fn functor(&self, name: &str) -> Result<&VFunctor> {
        self.functors.get(name).map(|e| &e.functor).ok_or_else(|| KanError::Unresolved(format!("functor `{name}`")))
    }

    pub fn module(&self, shape: Shape, name: &str) -> Result<&Module> {
        let kind = MODULE_KINDS.iter().find(|(_, s)| *s == shape).map_or("module", |(k, _)| k);
        self.modules(shape).get(name).map(|e| &e.module).ok_or_else(|| KanError::Unresolved(format!("{kind} `{name}`")))
    }

    pub fn opcat(&self, name: &str) -> Result<&OpcatStructure> {
        self.opcats.get(name).map(|e| &e.op).ok_or_else(|| KanError::Unresolved(format!("opcat `{name}`")))
    }

    pub fn probe(&self, name: &str) -> Result<&ProbeConfig> {
        self.probes.get(name).ok_or_else(|| KanError::Unresolved(format!("probe `{name}`")))
    }

    /// Parse, resolve names and run every law checker.
    pub fn from_json(text: &str) -> Result<Bundle> {
        let raw: RawBundle = serde_json::from_str(text)
            .map_err(|e| KanError::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
        let v = parse_base(&raw.base)?;
        let mut out = Bundle::new(v);
        for (name, rc) in &raw.categories {
            let a = resolve_category(v, name, rc)?;
            lawful("category", name, &a.check()?)?;
            out.add_category(name, Arc::new(a))?;
        }
        for (name, rf) in &raw.functors {
            let owner = format!("functor `{name}`");
            let source = out.category(&rf.source)?.clone();
            let target = out.category(&rf.target)?.clone();
            let objs = source
                .names()
                .iter()
                .map(|o| {
                    let image = rf.objects.get(o).ok_or_else(|| KanError::Unresolved(format!("{owner}: no image for `{o}`")))?;
                    target.object(image).map_err(|_| KanError::Unresolved(format!("{owner}: unknown object `{image}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            require_keys(&rf.objects, source.names().iter().cloned(), &owner)?;
            let n = source.n();
            require_keys(&rf.maps, (0..n * n).map(|i| key(&source, &[i / n, i % n])), &owner)?;
            let f = VFunctor::new(source.clone(), target.clone(), objs.clone(), |a, b| {
                let k = key(&source, &[a, b]);
                map_lookup(v, &rf.maps, &k, source.hom(a, b), target.hom(objs[a], objs[b]), &owner)
            })?;
            lawful("functor", name, &f.check()?)?;
            out.functors.insert(name.clone(), FunctorEntry { source: rf.source.clone(), target: rf.target.clone(), functor: f });
        }
        let groups = [&raw.copresheaves, &raw.presheaves, &raw.bimodules, &raw.trimodules];
        for ((kind, shape), group) in MODULE_KINDS.iter().zip(groups) {
            for (name, rm) in group {
                let owner = format!("{kind} `{name}`");
                let base = out.category(&rm.category)?.clone();
                let arity = match shape {
                    Shape::Copresheaf | Shape::Presheaf => 1,
                    Shape::Bimodule => 2,
                    _ => 3,
                };
                let mut values = BTreeMap::new();
                for (k, d) in &rm.values {
                    values.insert(parse_key(&base, k, arity, &owner)?, VObj(*d));
                }
                let value = |t: &[usize]| values.get(t).copied();
                let count = base.n().pow(arity as u32);
                let tuples: Vec<Vec<usize>> = (0..count).map(|i| crate::vbase::map::decode(i, &vec![base.n(); arity])).collect();
                if let Some(t) = tuples.iter().find(|t| value(t).is_none()) {
                    return Err(KanError::Unresolved(format!("{owner}: no value at `{}`", key(&base, t))));
                }
                let keys: Vec<String> =
                    tuples.iter().flat_map(|t| tuples.iter().map(|u| tuple_key(&base, t, u))).collect();
                require_keys(&rm.action, keys.into_iter(), &owner)?;
                let m = Module::with_shape(*shape, base.clone(), |t| value(t).unwrap_or(VObj(0)), |t, u| {
                    let dom = v.tensor_obj(hom_block(*shape, &base, t, u), value(t).unwrap_or(VObj(0)));
                    map_lookup(v, &rm.action, &tuple_key(&base, t, u), dom, value(u).unwrap_or(VObj(0)), &owner)
                })?;
                lawful(kind, name, &m.check()?)?;
                out.modules_mut(*shape).insert(name.clone(), ModuleEntry { category: rm.category.clone(), module: m });
            }
        }
        for (name, ro) in &raw.opcats {
            let owner = format!("opcat `{name}`");
            let a = out.category(&ro.category)?.clone();
            let n = a.n();
            let level = parse_level(&ro.level)?;
            require_keys(&ro.delta, (0..n * n * n).map(|i| key(&a, &[i / (n * n), (i / n) % n, i % n])), &owner)?;
            require_keys(&ro.epsilon, (0..n).map(|i| key(&a, &[i])), &owner)?;
            let op = OpcatStructure::new(
                a.clone(),
                |x, y, z| {
                    let cod = v.tensor_obj(a.hom(z, y), a.hom(x, z));
                    map_lookup(v, &ro.delta, &key(&a, &[x, y, z]), a.hom(x, y), cod, &owner)
                },
                |x| map_lookup(v, &ro.epsilon, &key(&a, &[x]), a.hom(x, x), v.unit_obj(), &owner),
                level,
            )?;
            lawful("opcat", name, &check_counit(&op)?)?;
            let nat = check_delta_naturality(&op)?;
            if !nat.certifies(level) {
                let first = [&nat.in_a, &nat.in_b, &nat.in_c, &nat.epsilon]
                    .into_iter()
                    .find_map(|r| r.violations.first().map(|x| x.to_string()))
                    .unwrap_or_default();
                return Err(KanError::Unlawful(format!("opcat `{name}` is not natural at level {}: {first}", ro.level)));
            }
            out.opcats.insert(name.clone(), OpcatEntry { category: ro.category.clone(), op });
        }
        out.probes = raw.probes;
        Ok(out)
    }

    fn to_raw(&self) -> RawBundle {
        let v = self.base;
        let categories = self
            .categories
            .iter()
            .map(|(name, a)| {
                let n = a.n();
                let mut hom = BTreeMap::new();
                let mut comp = BTreeMap::new();
                let mut id = BTreeMap::new();
                for x in 0..n {
                    put_map(v, &mut id, key(a, &[x]), a.ident(x));
                    for y in 0..n {
                        hom.insert(key(a, &[x, y]), a.hom(x, y).0);
                        for z in 0..n {
                            put_map(v, &mut comp, key(a, &[x, z, y]), a.comp(x, z, y));
                        }
                    }
                }
                (name.clone(), RawCategory { objects: a.names().to_vec(), hom, comp, id })
            })
            .collect();
        let functors = self
            .functors
            .iter()
            .map(|(name, e)| {
                let f = &e.functor;
                let (s, t) = (f.source(), f.target());
                let objects = (0..s.n()).map(|x| (s.name(x).to_string(), t.name(f.obj(x)).to_string())).collect();
                let mut maps = BTreeMap::new();
                for x in 0..s.n() {
                    for y in 0..s.n() {
                        put_map(v, &mut maps, key(s, &[x, y]), f.map(x, y));
                    }
                }
                (name.clone(), RawFunctor { source: e.source.clone(), target: e.target.clone(), objects, maps })
            })
            .collect();
        let raw_modules = |group: &BTreeMap<String, ModuleEntry>| -> BTreeMap<String, RawModule> {
            group
                .iter()
                .map(|(name, e)| {
                    let m = &e.module;
                    let a = m.base();
                    let mut values = BTreeMap::new();
                    let mut action = BTreeMap::new();
                    for t in module_tuples(m) {
                        values.insert(key(a, &t), m.value(&t).0);
                        for u in module_tuples(m) {
                            put_map(v, &mut action, tuple_key(a, &t, &u), m.action(&t, &u));
                        }
                    }
                    (name.clone(), RawModule { category: e.category.clone(), values, action })
                })
                .collect()
        };
        let opcats = self
            .opcats
            .iter()
            .map(|(name, e)| {
                let a = e.op.base();
                let n = a.n();
                let mut delta = BTreeMap::new();
                let mut epsilon = BTreeMap::new();
                for x in 0..n {
                    put_map(v, &mut epsilon, key(a, &[x]), e.op.epsilon(x));
                    for y in 0..n {
                        for z in 0..n {
                            put_map(v, &mut delta, key(a, &[x, y, z]), e.op.delta(x, y, z));
                        }
                    }
                }
                (name.clone(), RawOpcat { category: e.category.clone(), level: level_name(e.op.level).into(), delta, epsilon })
            })
            .collect();
        RawBundle {
            base: encode_base(v),
            categories,
            functors,
            copresheaves: raw_modules(&self.copresheaves),
            presheaves: raw_modules(&self.presheaves),
            bimodules: raw_modules(&self.bimodules),
            trimodules: raw_modules(&self.trimodules),
            opcats,
            probes: self.probes.clone(),
        }
    }

    /// Canonical text: sorted keys, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self.to_raw()).expect("bundle serializes");
        let mut text = serde_json::to_string_pretty(&value).expect("value prints");
        text.push('\n');
        text
    }
}

/// Domain hom factor of a module action, last leg first; every leg but
/// the last of a bimodule or trimodule is opposite.
fn hom_block(shape: Shape, a: &VCat, t: &[usize], u: &[usize]) -> VObj {
    let k = t.len();
    let factors: Vec<VObj> = (0..k)
        .rev()
        .map(|i| {
            let op = shape == Shape::Presheaf || (k > 1 && i + 1 < k);
            if op {
                a.hom(u[i], t[i])
            } else {
                a.hom(t[i], u[i])
            }
        })
        .collect();
    a.ctx().tensor_objs(&factors)
}

fn resolve_category(v: BaseCtx, name: &str, rc: &RawCategory) -> Result<VCat> {
    let owner = format!("category `{name}`");
    let names = rc.objects.clone();
    let index = |o: &str| names.iter().position(|x| x == o);
    for (i, o) in names.iter().enumerate() {
        if names[..i].contains(o) {
            return Err(KanError::Boundary(format!("{owner}: duplicate object `{o}`")));
        }
    }
    let n = names.len();
    let pair = |a: usize, b: usize| format!("{},{}", names[a], names[b]);
    for k in rc.hom.keys().chain(rc.comp.keys()).chain(rc.id.keys()) {
        if let Some(o) = k.split(',').find(|o| index(o).is_none()) {
            return Err(KanError::Unresolved(format!("{owner}: unknown object `{o}`")));
        }
    }
    let mut hom = vec![VObj(0); n * n];
    for a in 0..n {
        for b in 0..n {
            hom[a * n + b] = VObj(*rc.hom.get(&pair(a, b)).ok_or_else(|| KanError::Unresolved(format!("{owner}: no hom at `{}`", pair(a, b))))?);
        }
    }
    VCat::new(
        v,
        names.clone(),
        |a, b| hom[a * n + b],
        |a, c, b| {
            let k = format!("{},{},{}", names[a], names[c], names[b]);
            map_lookup(v, &rc.comp, &k, v.tensor_obj(hom[c * n + b], hom[a * n + c]), hom[a * n + b], &owner)
        },
        |a| map_lookup(v, &rc.id, &names[a], v.unit_obj(), hom[a * n + a], &owner),
    )
}

pub fn load(path: impl AsRef<Path>) -> Result<Bundle> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| KanError::Io(format!("{}: {e}", path.as_ref().display())))?;
    Bundle::from_json(&text)
}

pub fn save(bundle: &Bundle, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), bundle.to_json()).map_err(|e| KanError::Io(format!("{}: {e}", path.as_ref().display())))
}

/// Recover `M` from a trimodule `P(a,b,c) = [a·b = c]` on a discrete FinSet
/// category, with the unit read off as the two-sided identity.
pub fn monoid_of_trimodule(p: &Module) -> Result<FiniteMonoid> {
    let a = p.base();
    let n = a.n();
    if p.shape() != Shape::TriModule || !p.ctx().is_finset() {
        return Err(KanError::Boundary("expected a FinSet trimodule".into()));
    }
    let mut mul = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let hits: Vec<usize> = (0..n).filter(|&z| p.value(&[x, y, z]).0 > 0).collect();
            match hits.as_slice() {
                [z] if p.value(&[x, y, *z]).0 == 1 => mul[x][y] = *z,
                _ => {
                    return Err(KanError::InvalidTable(format!(
                        "P({},{},-) is not a single point at one object",
                        a.name(x),
                        a.name(y)
                    )))
                }
            }
        }
    }
    FiniteMonoid::new(a.names().to_vec(), mul)
}

/// The bundles shipped under `bundles/`, by file stem.
pub fn example_bundles() -> Result<Vec<(&'static str, Bundle)>> {
    use crate::encat::examples::{group_algebra, group_algebra_map, indiscrete, indiscrete_inclusion, z3_into_s3};
    use crate::encat::{generate_copresheaf, hom_bimodule, CopresheafSpec};
    use crate::frobenius::{group_algebra_frobenius, indiscrete_frobenius};
    use crate::groups::FiniteGroup;
    use crate::kancoend::monoid_promonoidal;

    let free1 = |a: &Arc<VCat>| generate_copresheaf(a, &CopresheafSpec::Free { gens: vec![1; a.n()] });
    let subgroup = |field: Field| -> Result<Bundle> {
        let (h, g, img) = z3_into_s3();
        let (a, op) = group_algebra_frobenius(&h, field)?;
        let c = Arc::new(group_algebra(&g, field)?);
        let mut b = Bundle::new(BaseCtx::FinVect(field));
        b.add_category("Z3", a.clone())?;
        b.add_category("S3", c.clone())?;
        b.add_functor("N", group_algebra_map(a.clone(), c, &h, &g, &img)?)?;
        b.add_functor("id", VFunctor::identity(a.clone()))?;
        b.add_opcat("D", op)?;
        b.add_module("f", free1(&a)?)?;
        b.probes.insert("default".into(), ProbeConfig::default());
        Ok(b)
    };
    let single = |g: &FiniteGroup, name: &str, field: Field| -> Result<Bundle> {
        let (a, op) = group_algebra_frobenius(g, field)?;
        let mut b = Bundle::new(BaseCtx::FinVect(field));
        b.add_category(name, a.clone())?;
        b.add_functor("id", VFunctor::identity(a.clone()))?;
        b.add_opcat("D", op)?;
        b.add_module("f", free1(&a)?)?;
        b.add_module("hom", hom_bimodule(&a)?)?;
        b.probes.insert("default".into(), ProbeConfig::default());
        Ok(b)
    };
    let monoid = |m: &FiniteMonoid| -> Result<Bundle> {
        let (a, p, j) = monoid_promonoidal(m)?;
        let mut b = Bundle::new(BaseCtx::FinSet);
        b.add_category("M", a)?;
        b.add_module("P", p)?;
        b.add_module("J", j)?;
        b.probes.insert("default".into(), ProbeConfig::default());
        Ok(b)
    };
    let q = Field::Rationals;
    let mut ind = Bundle::new(BaseCtx::FinVect(q));
    let (i2, op2) = indiscrete_frobenius(2, q)?;
    let i3 = Arc::new(indiscrete(3, q)?);
    ind.add_category("I2", i2.clone())?;
    ind.add_category("I3", i3.clone())?;
    ind.add_functor("N", indiscrete_inclusion(i2.clone(), i3, vec![0, 1])?)?;
    ind.add_functor("id", VFunctor::identity(i2.clone()))?;
    ind.add_opcat("D", op2)?;
    ind.add_module("f", free1(&i2)?)?;
    ind.probes.insert("default".into(), ProbeConfig::default());
    Ok(vec![
        ("z3_in_s3_q", subgroup(q)?),
        ("z3_in_s3_f3", subgroup(Field::prime(3)?)?),
        ("indiscrete_2_in_3", ind),
        ("z2_q", single(&FiniteGroup::cyclic(2), "Z2", q)?),
        ("z2_f2", single(&FiniteGroup::cyclic(2), "Z2", Field::prime(2)?)?),
        ("s3_q", single(&FiniteGroup::symmetric3(), "S3", q)?),
        ("cayley_z2", monoid(&FiniteMonoid::cyclic(2))?),
        ("cayley_left_zero", monoid(&FiniteMonoid::left_zero_with_unit())?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_round_trip() {
        for (name, b) in example_bundles().unwrap() {
            let text = b.to_json();
            let back = Bundle::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, b, "{name}");
            assert_eq!(back.to_json(), text, "{name}");
        }
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let text = "{\n  \"base\": {\"kind\": \"finvect\", \"field\": \"Q\"},\n  \"categories\": {\"A\": {\"objects\": [\"*\"], \"hom\": {\"*,*\": 1}, \"comp\": {\"*,*,*\": {\"matrix\": [[\"1/0\"]]}}, \"id\": {\"*\": {\"matrix\": [[\"1/1\"]]}}}}\n}";
        match Bundle::from_json(text) {
            Err(KanError::Parse { line, msg, .. }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("zero denominator"), "{msg}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_category_is_named() {
        let text = r#"{"base": {"kind": "finset"}, "copresheaves": {"f": {"category": "Nope", "values": {}}}}"#;
        match Bundle::from_json(text) {
            Err(KanError::Unresolved(msg)) => assert!(msg.contains("Nope"), "{msg}"),
            other => panic!("expected an unresolved reference, got {other:?}"),
        }
    }

    #[test]
    fn unlawful_category_is_rejected() {
        let text = example_bundles().unwrap()[3].1.to_json();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        // make the identity the non-trivial group element
        value["categories"]["Z2"]["id"]["*"]["matrix"] = serde_json::json!([["0/1"], ["1/1"]]);
        let broken = serde_json::to_string(&value).unwrap();
        assert!(matches!(Bundle::from_json(&broken), Err(KanError::Unlawful(_))));
    }

    #[test]
    fn monoid_is_recovered_from_its_trimodule() {
        let m = FiniteMonoid::left_zero_with_unit();
        let (_, p, _) = crate::kancoend::monoid_promonoidal(&m).unwrap();
        assert_eq!(monoid_of_trimodule(&p).unwrap().mul, m.mul);
    }
}
