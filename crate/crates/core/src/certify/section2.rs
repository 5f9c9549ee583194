use rand::Rng;

use crate::encat::{check_natural, corepresentable, ext_tensor, tensor_by, Copresheaf, Module, VFunctor};
use crate::error::Result;
use crate::frobenius::{check_counit, check_delta_naturality, level_label, coretraction_check, opcat_map, NaturalityLevel, OpcatStructure};
use crate::kancoend::{coend_map, coyoneda_expand, interchange_can, lan};
use crate::rng::task_rng;
use crate::vbase::random::random_mono;
use crate::vbase::{classify_map, is_iso, BaseCtx, VMap, VObj};

use super::config::ProbeConfig;
use super::probe::{conservativity_probe, lan_target};
use super::report::{Report, Witness};

pub const HYPOTHESES: &str = "hypotheses";
pub const UNIT: &str = "unit";
pub const PROBE: &str = "probe";

fn instance_name(n: &VFunctor) -> String {
    format!("{} objects -> {} objects", n.source().n(), n.target().n())
}

/// Sampled closure checks: composites of regular monos and `m ⊗ X` are
/// regular monos.
pub fn regular_mono_closure(ctx: BaseCtx, cfg: &ProbeConfig, phase: &str, report: &mut Report) -> Result<()> {
    let mut rng = task_rng(cfg.seed, "regular-mono-closure");
    let mut composite_fail = None;
    let mut tensor_fail = None;
    for _ in 0..cfg.samples {
        let x = rng.gen_range(0..=3);
        let y = rng.gen_range(x..=3);
        let z = rng.gen_range(y..=3);
        let m1 = random_mono(ctx, VObj(x), VObj(y), &mut rng)?;
        let m2 = random_mono(ctx, VObj(y), VObj(z), &mut rng)?;
        let comp = ctx.compose(&m2, &m1)?;
        if !classify_map(ctx, &comp)?.regular_mono && composite_fail.is_none() {
            composite_fail = Some(Witness::at("composite").with("first", &m1).with("second", &m2));
        }
        let w = rng.gen_range(0..=3);
        let t = ctx.tensor(&m1, &ctx.identity(VObj(w)))?;
        if !classify_map(ctx, &t)?.regular_mono && tensor_fail.is_none() {
            tensor_fail = Some(Witness::at(format!("tensor with {w}")).with("mono", &m1));
        }
    }
    let n = cfg.samples;
    report.push(phase, "regular monos compose", composite_fail.is_none(), format!("{n} sampled pairs"), composite_fail);
    report.push(phase, "tensoring preserves regular monos", tensor_fail.is_none(), format!("{n} sampled pairs"), tensor_fail);
    Ok(())
}

/// Hypotheses on `N` and the opcategory structure, recorded under `phase`.
pub fn section2_hypotheses(n: &VFunctor, op: &OpcatStructure, cfg: &ProbeConfig, phase: &str, report: &mut Report) -> Result<()> {
    let a = n.source();
    let v = a.ctx();
    report.law(phase, "source category lawful", &a.check()?);
    report.law(phase, "target category lawful", &n.target().check()?);
    report.law(phase, "functor lawful", &n.check()?);
    let mut bad = None;
    for x in 0..a.n() {
        for y in 0..a.n() {
            let class = classify_map(v, n.map(x, y))?;
            if !class.regular_mono && bad.is_none() {
                bad = Some(Witness::at(format!("({},{})", a.name(x), a.name(y))).with("component", n.map(x, y)));
            }
        }
    }
    report.push(phase, "components of N are regular monos", bad.is_none(), format!("{} components", a.n() * a.n()), bad);
    regular_mono_closure(v, cfg, phase, report)?;
    if **op.base() != **a {
        report.push(phase, "opcategory structure on the source", false, "structure lives on another category", None);
        return Ok(());
    }
    report.law(phase, "counit", &check_counit(op)?);
    let nat = check_delta_naturality(op)?;
    let detail = format!("certified level {}, declared {}", level_label(nat.level), op.level);
    let witness = [&nat.in_a, &nat.in_b]
        .iter()
        .flat_map(|r| r.violations.first())
        .next()
        .map(|v| Witness::at(format!("{} at {}", v.law, v.at)));
    report.push(phase, "δ natural in a and b", nat.level.is_some(), detail, witness);
    Ok(())
}

/// Hypotheses, unit components and conservativity probes for `∃_N`.
pub fn certify_section2(n: &VFunctor, op: &OpcatStructure, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new("left Kan extension conservativity via opcategory structure", instance_name(n), cfg)
        .hypotheses(HYPOTHESES);
    section2_hypotheses(n, op, cfg, HYPOTHESES, &mut report)?;
    let battery = cfg.battery(n.source())?;
    unit_phase(n, &battery, UNIT, &mut report)?;
    let target = lan_target(n, &battery)?;
    conservativity_probe(&target, &battery, cfg, PROBE, &mut report)?;
    Ok(report)
}

/// Every unit component `η_{f,b}` over the battery must be a regular mono.
pub fn unit_phase(n: &VFunctor, battery: &[(String, Copresheaf)], phase: &str, report: &mut Report) -> Result<()> {
    let a = n.source();
    let v = a.ctx();
    for (name, f) in battery {
        let lf = lan(n, f)?;
        let restricted = crate::encat::restrict_along(n, &lf.value)?;
        report.law(phase, format!("unit natural on {name}"), &check_natural(f, &restricted, &lf.unit)?);
        let mut bad = None;
        for b in 0..a.n() {
            let eta = &lf.unit.components[b];
            let class = classify_map(v, eta)?;
            if !class.regular_mono && bad.is_none() {
                bad = Some(Witness::at(format!("{name} at {}", a.name(b))).with("unit", eta));
            }
        }
        report.push(phase, format!("unit regular mono on {name}"), bad.is_none(), format!("{} components", a.n()), bad);
    }
    Ok(())
}

fn cell(report: &mut Report, name: &str, lhs: VMap, rhs: VMap) {
    let ok = lhs == rhs;
    let w = Witness::at(name).with("lhs", &lhs).with("rhs", &rhs);
    report.push("cells", name, ok, if ok { "commutes" } else { "does not commute" }, Some(w));
}

/// Build every node and arrow of the opcat diagram for `f` at `b` (with
/// products over `x`) and report which cells commute.
pub fn replay_diagram(n: &VFunctor, op: &OpcatStructure, f: &Copresheaf, b: usize) -> Result<Report> {
    let a_cat = n.source();
    let c_cat = n.target();
    let v = f.ctx();
    let k = a_cat.n();
    let nb = n.obj(b);
    let cfg = ProbeConfig::default();
    let mut report = Report::new("opcat diagram replay", format!("{} at {}", instance_name(n), a_cat.name(b)), &cfg);
    let idf = |x: usize| v.identity(f.val(x));

    let coyo = coyoneda_expand(f, b)?;
    let lf = lan(n, f)?;
    let top_coend = &lf.coends[nb];
    let left_family: Vec<Module> = (0..k)
        .map(|x| ext_tensor(&tensor_by(a_cat.hom(x, b), &corepresentable(a_cat, x)?)?, f))
        .collect::<Result<_>>()?;
    let right_family: Vec<Module> = (0..k)
        .map(|x| ext_tensor(&tensor_by(c_cat.hom(n.obj(x), nb), &corepresentable(a_cat, x)?)?, f))
        .collect::<Result<_>>()?;
    let (can_l, whole_l, parts_l) = interchange_can(&left_family)?;
    let (can_r, whole_r, parts_r) = interchange_can(&right_family)?;

    let top_phi: Vec<VMap> = (0..k).map(|a| v.tensor(n.map(a, b), &idf(a))).collect::<Result<_>>()?;
    let top = coend_map(v, &coyo.coend, top_coend, &top_phi)?;

    let left_cowedge: Vec<VMap> = (0..k)
        .map(|a| {
            let dom = v.tensor_obj(a_cat.hom(a, b), f.val(a));
            let legs: Vec<VMap> = (0..k).map(|x| v.tensor(op.delta(a, b, x), &idf(a))).collect::<Result<_>>()?;
            v.compose(&whole_l.cowedge[a], &v.pair_from(dom, &legs)?)
        })
        .collect::<Result<_>>()?;
    let left_opcat = match coyo.coend.factor(v, whole_l.apex, &left_cowedge) {
        Ok(m) => m,
        Err(e) => {
            report.push("arrows", "left opcat arrow well defined", false, e.to_string(), None);
            return Ok(report);
        }
    };
    report.pass("arrows", "left opcat arrow well defined", "δ-cowedge factors through the coYoneda coend");

    let right_cowedge: Vec<VMap> = (0..k)
        .map(|a| {
            let na = n.obj(a);
            let hab = c_cat.hom(na, nb);
            let dom = v.tensor_obj(hab, f.val(a));
            let legs: Vec<VMap> = (0..k)
                .map(|x| {
                    let nx = n.obj(x);
                    let coev = v.compose(op.delta(a, a, x), a_cat.ident(a))?;
                    let insert = v.tensor_all(&[&v.identity(hab), &coev, &idf(a)])?;
                    let apply = v.tensor_all(&[&v.identity(hab), n.map(x, a), &v.identity(a_cat.hom(a, x)), &idf(a)])?;
                    let comp = v.tensor_all(&[c_cat.comp(nx, na, nb), &v.identity(a_cat.hom(a, x)), &idf(a)])?;
                    v.chain(&[&insert, &apply, &comp])
                })
                .collect::<Result<_>>()?;
            v.compose(&whole_r.cowedge[a], &v.pair_from(dom, &legs)?)
        })
        .collect::<Result<_>>()?;
    let right_opcat = match top_coend.factor(v, whole_r.apex, &right_cowedge) {
        Ok(m) => m,
        Err(e) => {
            report.push("arrows", "right opcat arrow well defined", false, e.to_string(), None);
            return Ok(report);
        }
    };
    report.pass("arrows", "right opcat arrow well defined", "coevaluation cowedge factors through the coend");

    let mid_phi: Vec<VMap> = (0..k)
        .map(|a| {
            let maps: Vec<VMap> = (0..k)
                .map(|x| v.tensor_all(&[n.map(x, b), &v.identity(a_cat.hom(a, x)), &idf(a)]))
                .collect::<Result<_>>()?;
            v.product_map(&maps)
        })
        .collect::<Result<_>>()?;
    let mid = coend_map(v, &whole_l, &whole_r, &mid_phi)?;
    let bottom_can = v.product_map(
        &(0..k)
            .map(|x| {
                let phi: Vec<VMap> = (0..k)
                    .map(|a| v.tensor_all(&[n.map(x, b), &v.identity(a_cat.hom(a, x)), &idf(a)]))
                    .collect::<Result<_>>()?;
                coend_map(v, &parts_l[x], &parts_r[x], &phi)
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let side_iso = |parts: &[crate::kancoend::CoendResult], hom: &dyn Fn(usize) -> VObj| -> Result<VMap> {
        let maps: Vec<VMap> = (0..k)
            .map(|x| {
                let cowedge: Vec<VMap> = (0..k)
                    .map(|a| v.tensor(&v.identity(hom(x)), f.act(a, x)))
                    .collect::<Result<_>>()?;
                parts[x].factor(v, v.tensor_obj(hom(x), f.val(x)), &cowedge)
            })
            .collect::<Result<_>>()?;
        v.product_map(&maps)
    };
    let iso_l = side_iso(&parts_l, &|x| a_cat.hom(x, b))?;
    let iso_r = side_iso(&parts_r, &|x| c_cat.hom(n.obj(x), nb))?;
    let om = opcat_map(op, f, b)?;
    let bottom = v.product_map(&(0..k).map(|x| v.tensor(n.map(x, b), &idf(x))).collect::<Result<Vec<_>>>()?)?;

    report.push("arrows", "coYoneda side iso", is_iso(v, &coyo.from_coend), "fb ≅ ∫^a A(a,b) ⊗ fa", None);
    report.push("arrows", "left Yoneda iso", is_iso(v, &iso_l), "∏_x ∫^a A(x,b) ⊗ A(a,x) ⊗ fa ≅ ∏_x A(x,b) ⊗ fx", None);
    report.push("arrows", "right Yoneda iso", is_iso(v, &iso_r), "∏_x ∫^a C(Nx,Nb) ⊗ A(a,x) ⊗ fa ≅ ∏_x C(Nx,Nb) ⊗ fx", None);
    report.law("arrows", "opcat map is a coretraction", &coretraction_check(op, f, b, &om)?);
    if op.level == NaturalityLevel::FullOpcat {
        report.push("arrows", "opcat map lands in the end", om.into_end.is_some(), "wedge condition on components", None);
    } else {
        report.not_applicable("arrows", "opcat map lands in the end", "Frobenius level: products only");
    }

    cell(&mut report, "top square", v.chain(&[&top, &right_opcat])?, v.chain(&[&left_opcat, &mid])?);
    cell(&mut report, "interchange square", v.chain(&[&mid, &can_r])?, v.chain(&[&can_l, &bottom_can])?);
    cell(&mut report, "bottom square", v.chain(&[&bottom_can, &iso_r])?, v.chain(&[&iso_l, &bottom])?);
    cell(
        &mut report,
        "left triangle",
        v.chain(&[&coyo.from_coend, &om.into_product])?,
        v.chain(&[&left_opcat, &can_l, &iso_l])?,
    );
    cell(
        &mut report,
        "outer rectangle",
        v.chain(&[&coyo.from_coend, &om.into_product, &bottom])?,
        v.chain(&[&top, &right_opcat, &can_r, &iso_r])?,
    );
    let unit = &lf.unit.components[b];
    cell(&mut report, "unit is top arrow after coYoneda", unit.clone(), v.compose(&top, &coyo.to_coend)?);
    let class = classify_map(v, &top)?;
    report.push("conclusion", "top arrow regular mono", class.regular_mono, "∫^a N ⊗ 1", Some(Witness::at("top").with("map", &top)));
    Ok(report)
}
