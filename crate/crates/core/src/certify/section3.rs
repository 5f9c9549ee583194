use crate::encat::{check_natural, zero_module, Module, VCat, VFunctor};
use crate::error::Result;
use crate::frobenius::{check_counit, check_delta_naturality, level_label, OpcatStructure};
use crate::kancoend::{dagger_map, l_functor, l_unit, n_yoneda, representable_family};
use crate::vbase::{classify_map, VObj};

use std::sync::Arc;

use super::config::ProbeConfig;
use super::probe::{conservativity_probe, l_target};
use super::report::{Report, Witness};
use super::section2::{certify_section2, HYPOTHESES, PROBE, UNIT};

/// Sizes of `X` tried in the canonical-map condition.
pub const DAGGER_SIZES: [usize; 3] = [1, 2, 3];

/// Conservativity of `L : [B^op,V] -> [C,V]` for a family `N̂` on legs
/// `[B, C]`, over a battery of functors on `B^op`.
pub fn certify_section3(
    nhat: &Module,
    op: Option<&OpcatStructure>,
    battery: &[(String, Module)],
    cfg: &ProbeConfig,
    instance: &str,
) -> Result<Report> {
    let mut report = Report::new("conservativity of L via the N-Yoneda adjunction", instance, cfg).hypotheses(HYPOTHESES);
    let b_cat = &nhat.legs()[0];
    let v = nhat.ctx();
    report.law(HYPOTHESES, "family lawful", &nhat.check()?);
    let mut bad = None;
    let mut isos = 0;
    let mut total = 0;
    for a in 0..b_cat.n() {
        for b in 0..b_cat.n() {
            for x in DAGGER_SIZES {
                let (m, class) = dagger_map(nhat, VObj(x), a, b)?;
                total += 1;
                isos += usize::from(class.iso);
                if !class.regular_mono && bad.is_none() {
                    bad = Some(Witness::at(format!("X = {x}, ({},{})", b_cat.name(a), b_cat.name(b))).with("map", &m));
                }
            }
        }
    }
    report.push(
        HYPOTHESES,
        "canonical map X ⊗ E(N̂b,N̂a) -> E(N̂b, X ⊗ N̂a) regular mono",
        bad.is_none(),
        format!("{total} instances, {isos} isos"),
        bad,
    );
    match op {
        Some(op) if **op.base() == **b_cat => {
            report.law(HYPOTHESES, "counit", &check_counit(op)?);
            let nat = check_delta_naturality(op)?;
            report.push(HYPOTHESES, "δ natural in a and b", nat.level.is_some(), format!("level {}", level_label(nat.level)), None);
        }
        Some(_) => report.push(HYPOTHESES, "opcategory structure on the index category", false, "structure lives elsewhere", None),
        None => report.not_applicable(HYPOTHESES, "opcategory structure", "none supplied"),
    }
    for (name, f) in battery {
        let l = l_functor(nhat, f)?;
        let y = n_yoneda(nhat, &l.value)?;
        let eta = l_unit(nhat, f, &l, &y)?;
        report.law(UNIT, format!("unit natural on {name}"), &check_natural(f, &y.value, &eta)?);
        let mut bad = None;
        for b in 0..b_cat.n() {
            let class = classify_map(v, &eta.components[b])?;
            if !class.regular_mono && bad.is_none() {
                bad = Some(Witness::at(format!("{name} at {}", b_cat.name(b))).with("unit", &eta.components[b]));
            }
        }
        report.push(UNIT, format!("unit regular mono on {name}"), bad.is_none(), format!("{} components", b_cat.n()), bad);
    }
    let target = l_target(nhat, battery)?;
    conservativity_probe(&target, battery, cfg, PROBE, &mut report)?;
    Ok(report)
}

/// Recover the extension along `N` from the family `N̂(a) = C(Na,-)` on
/// `B = A^op`, and compare with the direct pipeline.
pub fn certify_section3_recovery(n: &VFunctor, op: &OpcatStructure, cfg: &ProbeConfig) -> Result<Report> {
    let nhat = representable_family(n)?;
    let battery = cfg.battery(n.source())?;
    let op_b = op.opposite()?;
    let instance = format!("representable family of {} -> {} objects", n.source().n(), n.target().n());
    let mut report = certify_section3(&nhat, Some(&op_b), &battery, cfg, &instance)?;
    let direct = certify_section2(n, op, cfg)?;
    let agree = direct.status() == report.status();
    report.push(
        "recovery",
        "verdict agrees with the direct extension",
        agree,
        format!("direct {:?}, via family {:?}", direct.status(), report.status()),
        None,
    );
    let same_units = direct.phase_passed(UNIT) == report.phase_passed(UNIT);
    report.push("recovery", "unit verdicts agree", same_units, "regular-mono classification of every unit component", None);
    Ok(report)
}

/// The constant zero family on legs `[B, C]`.
pub fn zero_family(b: Arc<VCat>, c: Arc<VCat>) -> Result<Module> {
    zero_module(vec![b, c])
}
