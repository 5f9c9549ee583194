use std::sync::Arc;

use num_traits::{One, Zero};

use crate::encat::examples::{discrete, group_algebra, group_algebra_map, z3_into_s3};
use crate::encat::{
    corepresentable, ext_tensor, fix_leg, hom_bimodule, Bimodule, Copresheaf, Shape, VCat, VFunctor, VNat,
};
use crate::error::{KanError, Result};
use crate::frobenius::group_algebra_frobenius;
use crate::groups::{FiniteGroup, FiniteMonoid};
use crate::kancoend::{cayley, cayley_map, coend, coend_map, coyoneda_expand, lan, monoid_promonoidal, CoendResult};
use crate::vbase::{classify_map, is_iso, is_mono, BaseCtx, Field, Mat, VMap, VObj};

use super::config::ProbeConfig;
use super::probe::{cayley_target, sample_nats, conservativity_probe, lan_target};
use super::report::{Report, Witness};
use super::section2::{certify_section2, HYPOTHESES, PROBE, UNIT};

/// The group whose algebra `a` is: one object, composition and identity
/// permuting a basis.
pub fn group_of(a: &VCat) -> Option<FiniteGroup> {
    if a.n() != 1 || !matches!(a.ctx(), BaseCtx::FinVect(_)) {
        return None;
    }
    let n = a.hom(0, 0).0;
    let basis_index = |col: &[(usize, crate::vbase::Scalar)]| match col {
        [(r, s)] if s.is_one() => Some(*r),
        _ => None,
    };
    let comp = a.comp(0, 0, 0).matrix()?;
    let mul = (0..n)
        .map(|x| (0..n).map(|y| basis_index(comp.column(x * n + y))).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let unit = basis_index(a.ident(0).matrix()?.column(0))?;
    let group = FiniteGroup::new((0..n).map(|i| format!("g{i}")).collect(), mul).ok()?;
    (group.unit() == unit).then_some(group)
}

/// `s ↦ (1/|G|) Σ_g g·s·g⁻¹` on the single value of a bimodule over `k[G]`;
/// `None` when the characteristic divides `|G|`.
pub fn averaging(g: &FiniteGroup, field: Field, s: &Bimodule) -> Result<Option<VMap>> {
    let v = BaseCtx::FinVect(field);
    let Some(scale) = field.inv(&field.from_int(g.order() as i64)) else {
        return Ok(None);
    };
    let h = VObj(g.order());
    let val = s.value(&[0, 0]);
    let mut total = v.zero_map(val, val)?;
    for x in 0..g.order() {
        let conj = v.compose(
            s.action(&[0, 0], &[0, 0]),
            &v.tensor_all(&[&v.point(h, x), &v.point(h, g.inv[x]), &v.identity(val)])?,
        )?;
        total = v.add(&total, &conj)?;
    }
    Ok(Some(v.scale(&scale, &total)?))
}

/// A section of `q : ⊕_a S(a,a) -> ∫^a S(a,a)` commuting with the induced
/// maps of the given endomorphisms, by solving the linear system.
fn natural_section_search(field: Field, c: &CoendResult, endos: &[(Mat, Mat)]) -> Option<Mat> {
    let q = c.canonical_epi().matrix()?;
    let (r, m) = (q.rows(), q.ncols());
    let ir = Mat::identity(r);
    let im = Mat::identity(m);
    let mut blocks = vec![Mat::kron(field, &ir, q)];
    let mut rhs_cols: Vec<(usize, crate::vbase::Scalar)> = (0..r).map(|j| (j * r + j, field.one())).collect();
    let mut rows = r * r;
    for (phi, big_q) in endos {
        blocks.push(Mat::sub(field, &Mat::kron(field, &ir, phi), &Mat::kron(field, &big_q.transpose(), &im)));
        rows += m * r;
    }
    rhs_cols.sort_by_key(|e| e.0);
    let parts: Vec<&Mat> = blocks.iter().collect();
    let system = Mat::vstack(m * r, &parts);
    let rhs = Mat::from_columns(rows, vec![rhs_cols]);
    let x = crate::vbase::matrix::solve(field, &system, &rhs)?;
    let cols = (0..r)
        .map(|j| (0..m).filter_map(|i| {
            let e = x.get(j * m + i, 0);
            (!e.is_zero()).then_some((i, e))
        }).collect())
        .collect();
    Some(Mat::from_columns(m, cols))
}

/// Largest product of total dimensions for which bimodule maps are solved
/// for directly.
const DIRECT_NAT_LIMIT: usize = 512;

/// A battery bimodule, remembering `f` when it is `A(-,b) ⊗ f`.
#[derive(Clone, Debug)]
pub struct BimoduleEntry {
    pub name: String,
    pub module: Bimodule,
    pub factor: Option<Copresheaf>,
}

/// Bimodule battery for the splitting checks: the hom bimodule and
/// `A(-,b) ⊗ f` for nonzero battery members `f`.
pub fn bimodule_battery(a: &Arc<VCat>, cfg: &ProbeConfig) -> Result<Vec<BimoduleEntry>> {
    let mut out = vec![BimoduleEntry { name: "hom".into(), module: hom_bimodule(a)?, factor: None }];
    for (name, f) in cfg.battery(a)? {
        if f.values().iter().all(|x| x.0 == 0) {
            continue;
        }
        out.push(BimoduleEntry {
            name: format!("A(-,{})⊗{name}", a.name(0)),
            module: ext_tensor(&corepresentable(a, 0)?, &f)?,
            factor: Some(f),
        });
    }
    Ok(out)
}

/// Sampled bimodule maps `s -> t`: `id ⊗ α` between tensors by
/// corepresentables, a solved sample when the spaces are small, else none.
fn sample_bimodule_maps(a: &VCat, s: &BimoduleEntry, t: &BimoduleEntry, seed: u64, samples: usize) -> Result<Vec<VNat>> {
    let v = a.ctx();
    let n = a.n();
    if let (Some(f), Some(g)) = (&s.factor, &t.factor) {
        return sample_nats(f, g, seed, samples)?
            .into_iter()
            .map(|alpha| {
                let components = (0..n * n)
                    .map(|i| v.tensor(&v.identity(a.hom(i / n, 0)), &alpha.components[i % n]))
                    .collect::<Result<_>>()?;
                Ok(VNat { components })
            })
            .collect();
    }
    let size = |m: &Bimodule| m.values().iter().map(|x| x.0).sum::<usize>();
    if size(&s.module) * size(&t.module) > DIRECT_NAT_LIMIT {
        return Ok(Vec::new());
    }
    sample_nats(&s.module, &t.module, seed, samples)
}

/// Splitting of the canonical epi onto the coend: the averaging section for
/// group algebras in good characteristic, otherwise a searched section.
pub fn maschke_split(a: &Arc<VCat>, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new("splitting of the canonical epi onto the coend", format!("{} objects", a.n()), cfg)
        .informational("search");
    let v = a.ctx();
    let group = group_of(a);
    let battery = bimodule_battery(a, cfg)?;
    let coends: Vec<CoendResult> = battery.iter().map(|e| coend(&e.module)).collect::<Result<_>>()?;
    let averaging_sections: Vec<Option<VMap>> = match (&group, v) {
        (Some(g), BaseCtx::FinVect(field)) => battery
            .iter()
            .zip(&coends)
            .map(|(e, c)| Ok(averaging(g, field, &e.module)?.map(|avg| v.compose(&avg, c.section())).transpose()?))
            .collect::<Result<_>>()?,
        _ => vec![None; battery.len()],
    };
    for (idx, (entry, c)) in battery.iter().zip(&coends).enumerate() {
        let name = &entry.name;
        let q = c.canonical_epi();
        let sigma = match &averaging_sections[idx] {
            Some(sigma) => {
                let ok = v.compose(q, sigma)? == v.identity(c.apex);
                report.push("averaging", format!("q∘σ = id on {name}"), ok, format!("coend dimension {}", c.apex), Some(Witness::at(name.clone()).with("σ", sigma)));
                sigma.clone()
            }
            None => {
                let why = match (&group, v) {
                    (None, _) => "not a group algebra",
                    (Some(_), BaseCtx::FinVect(field)) if field.characteristic() != 0 => "characteristic divides the group order",
                    _ => "no averaging in this base",
                };
                report.not_applicable("averaging", format!("averaging section on {name}"), why);
                let section = classify_map(v, q)?.section.ok_or_else(|| KanError::FactorizationFailure("canonical epi has no section".into()))?;
                report.push("search", format!("some section of q on {name}"), v.compose(q, &section)? == v.identity(c.apex), "chosen section", None);
                section
            }
        };
        // naturality against sampled bimodule maps into every battery member
        let mut checked = 0;
        let mut bad = None;
        let mut endos = Vec::new();
        for (jdx, (target, ct)) in battery.iter().zip(&coends).enumerate() {
            let tname = &target.name;
            let tsigma = match &averaging_sections[jdx] {
                Some(s) => s.clone(),
                None if jdx == idx => sigma.clone(),
                None => continue,
            };
            let seed = cfg.derive(&format!("maschke/{name}/{tname}"));
            for phi in sample_bimodule_maps(a, entry, target, seed, cfg.samples)? {
                let diag: Vec<VMap> = (0..a.n()).map(|x| phi.components[entry.module.index(&[x, x])].clone()).collect();
                let induced = coend_map(v, c, ct, &diag)?;
                let spread = v.coproduct_map(&diag)?;
                checked += 1;
                let lhs = v.compose(&tsigma, &induced)?;
                let rhs = v.compose(&spread, &sigma)?;
                if jdx == idx {
                    if let (Some(pm), Some(qm)) = (spread.matrix(), induced.matrix()) {
                        endos.push((pm.clone(), qm.clone()));
                    }
                }
                if lhs != rhs && bad.is_none() {
                    bad = Some(Witness::at(format!("{name} -> {tname}")).with("σ'∘φ", &lhs).with("φ∘σ", &rhs));
                }
            }
        }
        let phase = if averaging_sections[idx].is_some() { "averaging" } else { "search" };
        let natural = bad.is_none();
        report.push(phase, format!("section natural on {name}"), natural, format!("{checked} sampled bimodule maps"), bad);
        if averaging_sections[idx].is_none() && !natural {
            match (v, natural_section_search(match v { BaseCtx::FinVect(f) => f, _ => Field::Rationals }, c, &endos)) {
                (BaseCtx::FinVect(_), Some(_)) => report.pass("search", format!("natural section search on {name}"), "found a section commuting with the sampled endomorphisms"),
                _ => report.not_applicable("search", format!("natural section search on {name}"), "none found"),
            }
        }
    }
    Ok(report)
}

/// The splitting route to the unit: with natural sections of the canonical
/// epis, `∫^a N ⊗ 1` is a regular mono, hence so is every unit component.
pub fn split_epi_pipeline(n: &VFunctor, cfg: &ProbeConfig) -> Result<Report> {
    let a = n.source();
    let v = a.ctx();
    let mut report = Report::new("left Kan extension conservativity via split coends", format!("{} -> {} objects", a.n(), n.target().n()), cfg)
        .hypotheses(HYPOTHESES);
    let mut bad = None;
    for x in 0..a.n() {
        for y in 0..a.n() {
            if !classify_map(v, n.map(x, y))?.regular_mono && bad.is_none() {
                bad = Some(Witness::at(format!("({},{})", a.name(x), a.name(y))).with("component", n.map(x, y)));
            }
        }
    }
    report.push(HYPOTHESES, "components of N are regular monos", bad.is_none(), "", bad);
    let (Some(g), BaseCtx::FinVect(field)) = (group_of(a), v) else {
        report.push(HYPOTHESES, "natural splitting available", false, "source is not a group algebra", None);
        return Ok(report);
    };
    if field.inv(&field.from_int(g.order() as i64)).is_none() {
        report.push(HYPOTHESES, "natural splitting available", false, "characteristic divides the group order", None);
        return Ok(report);
    }
    report.pass(HYPOTHESES, "natural splitting available", "averaging over the group");
    for (name, f) in cfg.battery(a)? {
        let lf = lan(n, &f)?;
        for b in 0..a.n() {
            let coyo = coyoneda_expand(&f, b)?;
            let t = fix_leg(&lf.integrand, 2, n.obj(b))?.as_shape(Shape::Bimodule, a.clone())?;
            let ct = coend(&t)?;
            let phi: Vec<VMap> = (0..a.n()).map(|x| v.tensor(n.map(x, b), &v.identity(f.val(x)))).collect::<Result<_>>()?;
            let top = coend_map(v, &coyo.coend, &ct, &phi)?;
            let sigma_s = v.compose(&averaging(&g, field, &coyo.integrand)?.expect("invertible order"), coyo.coend.section())?;
            let sigma_t = v.compose(&averaging(&g, field, &t)?.expect("invertible order"), ct.section())?;
            let spread = v.coproduct_map(&phi)?;
            let natural = v.compose(&sigma_t, &top)? == v.compose(&spread, &sigma_s)?;
            let monos = is_mono(v, &spread) && is_mono(v, &sigma_s);
            let eta = v.compose(&top, &coyo.to_coend)?;
            let same_unit = eta == lf.unit.components[b];
            let regular = classify_map(v, &eta)?.regular_mono;
            let ok = natural && monos && same_unit && regular;
            let w = Witness::at(format!("{name} at {}", a.name(b))).with("unit", &eta);
            report.push(UNIT, format!("unit regular mono on {name} at {}", a.name(b)), ok, format!("natural {natural}, monos {monos}, regular {regular}"), Some(w));
        }
    }
    Ok(report)
}

/// The iso `f c -> ∃_P f (e, c)` given by the cowedge leg at `a = c`.
fn unit_evaluation(m: &FiniteMonoid, p: &crate::encat::Module, f: &Copresheaf, coends: &[CoendResult], c: usize) -> Result<VMap> {
    let v = f.ctx();
    let n = m.order();
    let leg = &coends[m.unit * n + c].cowedge[c];
    let one = p.value(&[c, m.unit, c]);
    v.compose(leg, &v.tensor(&v.identity(f.val(c)), &v.point(one, 0))?)
}

/// Conservativity of the Cayley functor of a monoid, certified by the
/// retraction `ev_(e,-) ∘ ∃_P ≅ Id` and probed by sampling.
pub fn cayley_probe(m: &FiniteMonoid, cfg: &ProbeConfig) -> Result<Report> {
    let (a, p, j) = monoid_promonoidal(m)?;
    let mut report = Report::new("Cayley functor conservativity", format!("monoid of order {}", m.order()), cfg)
        .hypotheses(HYPOTHESES);
    report.law(HYPOTHESES, "promonoidal module lawful", &p.check()?);
    report.law(HYPOTHESES, "unit module lawful", &j.check()?);
    let battery = cfg.battery(&a)?;
    let images: Vec<Vec<CoendResult>> = battery.iter().map(|(_, f)| Ok(cayley(&p, f)?.1)).collect::<Result<_>>()?;
    let evals: Vec<Vec<VMap>> = battery
        .iter()
        .zip(&images)
        .map(|((_, f), cs)| (0..a.n()).map(|c| unit_evaluation(m, &p, f, cs, c)).collect())
        .collect::<Result<_>>()?;
    let v = a.ctx();
    for ((name, _), ev) in battery.iter().zip(&evals) {
        let bad = ev.iter().position(|x| !is_iso(v, x));
        let w = bad.map(|c| Witness::at(format!("{name} at {}", a.name(c))).with("evaluation", &ev[c]));
        report.push("retraction", format!("∃_P f (e,c) ≅ f c on {name}"), bad.is_none(), format!("{} objects", a.n()), w);
    }
    let mut checked = 0;
    let mut bad = None;
    for (i, (fname, f)) in battery.iter().enumerate() {
        for (k, (gname, g)) in battery.iter().enumerate() {
            let seed = cfg.derive(&format!("cayley/{fname}/{gname}"));
            for alpha in sample_nats(f, g, seed, cfg.samples)? {
                let image = cayley_map(&p, &images[i], &images[k], &alpha)?;
                for c in 0..a.n() {
                    checked += 1;
                    let lhs = v.compose(&evals[k][c], &alpha.components[c])?;
                    let rhs = v.compose(&image.components[m.unit * a.n() + c], &evals[i][c])?;
                    if lhs != rhs && bad.is_none() {
                        bad = Some(Witness::at(format!("{fname} -> {gname} at {}", a.name(c))).with("lhs", &lhs).with("rhs", &rhs));
                    }
                }
            }
        }
    }
    report.push("retraction", "evaluation iso natural in f", bad.is_none(), format!("{checked} squares"), bad);
    if report.phase_passed("retraction") {
        report.pass("conclusion", "conservative by retraction", "∃_P α iso ⇒ α ≅ ev_(e,-) ∃_P α iso");
    } else {
        report.push("conclusion", "conservative by retraction", false, "retraction failed", None);
    }
    let target = cayley_target(&p, &battery)?;
    conservativity_probe(&target, &battery, cfg, PROBE, &mut report)?;
    Ok(report)
}

/// A triple `(a, b, c)` with `A(a,b)` nonempty but `A(c,b) ⊗ A(a,c)` empty:
/// no map `δ_{a,b,c}` exists.
pub fn opcat_obstruction(a: &VCat) -> Option<(usize, usize, usize)> {
    if a.ctx() != BaseCtx::FinSet {
        return None;
    }
    let n = a.n();
    (0..n * n * n).map(|i| (i / (n * n), (i / n) % n, i % n)).find(|&(x, y, z)| {
        a.hom(x, y).0 > 0 && a.hom(z, y).0 * a.hom(x, z).0 == 0
    })
}

/// `k[Z/2] -> k` sending every group element to 1; not mono.
pub fn augmentation(field: Field) -> Result<VFunctor> {
    let g = FiniteGroup::cyclic(2);
    let source = Arc::new(group_algebra(&g, field)?);
    let target = Arc::new(group_algebra(&FiniteGroup::trivial(), field)?);
    let v = BaseCtx::FinVect(field);
    VFunctor::new(source, target, vec![0], |_, _| Ok(v.index_map(VObj(2), VObj(1), |_| 0)))
}

/// The sign representation of `Z/2` as a copresheaf on `k[Z/2]`.
pub fn sign_representation(a: &Arc<VCat>) -> Result<Copresheaf> {
    let field = a.ctx().field().ok_or_else(|| KanError::Boundary("sign representation needs a field".into()))?;
    let v = a.ctx();
    let minus = field.neg(&field.one());
    crate::encat::Module::with_shape(Shape::Copresheaf, a.clone(), |_| VObj(1), |_, _| {
        v.matrix_map(Mat::from_columns(1, vec![vec![(0, field.one())], vec![(0, minus.clone())]]))
    })
}

/// Instances where the sufficient conditions fail and conservativity holds
/// anyway, a control where both hold, and a non-mono functor where the
/// probe finds a counterexample.
pub fn falsify_necessity(cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new("sufficient conditions are not necessary", "discrete FinSet and group algebras", cfg);
    let a = discrete(2, BaseCtx::FinSet, None)?;
    match opcat_obstruction(&a) {
        Some((x, y, z)) => report.pass(
            "no opcategory",
            "2-object discrete FinSet category has no opcategory structure",
            format!("A({x},{y}) is a point but A({z},{y}) × A({x},{z}) is empty"),
        ),
        None => report.push("no opcategory", "2-object discrete FinSet category has no opcategory structure", false, "no obstruction found", None),
    }
    let cay = cayley_probe(&FiniteMonoid::cyclic(2), cfg)?;
    report.push(
        "conservative anyway",
        "Cayley functor on the same 2-object category is conservative",
        cay.is_certified(),
        format!("retraction verdict {:?}", cay.status()),
        None,
    );
    report.absorb("cayley", cay);

    let (h, g, img) = z3_into_s3();
    let q = Field::Rationals;
    let src = Arc::new(group_algebra(&h, q)?);
    let tgt = Arc::new(group_algebra(&g, q)?);
    let n = group_algebra_map(src, tgt, &h, &g, &img)?;
    let (_, op) = group_algebra_frobenius(&h, q)?;
    let control = certify_section2(&n, &op, cfg)?;
    report.push("control", "subgroup inclusion satisfies hypotheses and conclusion", control.is_certified(), format!("{:?}", control.status()), None);

    let aug = augmentation(q)?;
    let mut battery = cfg.battery(aug.source())?;
    battery.push(("sign".into(), sign_representation(aug.source())?));
    let mut probe = Report::new("probe", "augmentation", cfg);
    let target = lan_target(&aug, &battery)?;
    let stats = conservativity_probe(&target, &battery, cfg, PROBE, &mut probe)?;
    let w = probe.failures().next().and_then(|c| c.witness.clone());
    let detail = format!("{} violations among {} non-iso transformations", stats.violations, stats.non_iso);
    report.checks.push(super::report::Check {
        phase: "counterexample".into(),
        name: "non-mono augmentation is caught by the probe".into(),
        verdict: if stats.violations > 0 { super::report::Verdict::Pass } else { super::report::Verdict::Fail },
        detail,
        witness: w,
    });
    Ok(report)
}
