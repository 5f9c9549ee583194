use crate::encat::{generate_nat, Module, VFunctor, VNat};
use crate::error::{KanError, Result};
use crate::kancoend::{cayley, cayley_map, l_functor, l_map, lan, lan_map, CoendResult, LResult, LanResult};
use crate::vbase::{is_iso, BaseCtx};

use super::config::ProbeConfig;
use super::report::{Report, Witness};

const MAX_ROUNDS: usize = 12;

/// A functor on a battery: the image of each member and of each
/// transformation between members.
pub struct ProbeTarget<'a> {
    pub name: String,
    image: Box<dyn Fn(usize, usize, &VNat) -> Result<VNat> + 'a>,
}

impl<'a> ProbeTarget<'a> {
    pub fn new(name: impl Into<String>, image: impl Fn(usize, usize, &VNat) -> Result<VNat> + 'a) -> ProbeTarget<'a> {
        ProbeTarget { name: name.into(), image: Box::new(image) }
    }

    pub fn image(&self, i: usize, j: usize, alpha: &VNat) -> Result<VNat> {
        (self.image)(i, j, alpha)
    }
}

/// `∃_N` on the battery.
pub fn lan_target<'a>(n: &'a VFunctor, battery: &[(String, Module)]) -> Result<ProbeTarget<'a>> {
    let lans: Vec<LanResult> = battery.iter().map(|(_, f)| lan(n, f)).collect::<Result<_>>()?;
    Ok(ProbeTarget::new("left Kan extension", move |i, j, a| lan_map(&lans[i], &lans[j], a)))
}

/// `L` on a presheaf battery.
pub fn l_target<'a>(nhat: &'a Module, battery: &[(String, Module)]) -> Result<ProbeTarget<'a>> {
    let ls: Vec<LResult> = battery.iter().map(|(_, f)| l_functor(nhat, f)).collect::<Result<_>>()?;
    Ok(ProbeTarget::new("L", move |i, j, a| l_map(nhat, &ls[i], &ls[j], a)))
}

/// `∃_P` on the battery.
pub fn cayley_target<'a>(p: &'a Module, battery: &[(String, Module)]) -> Result<ProbeTarget<'a>> {
    let cs: Vec<Vec<CoendResult>> = battery.iter().map(|(_, f)| Ok(cayley(p, f)?.1)).collect::<Result<_>>()?;
    Ok(ProbeTarget::new("Cayley functor", move |i, j, a| cayley_map(p, &cs[i], &cs[j], a)))
}

/// `generate_nat`, with an empty hom treated as no samples.
pub fn sample_nats(f: &Module, g: &Module, seed: u64, samples: usize) -> Result<Vec<VNat>> {
    match generate_nat(f, g, seed, samples) {
        Err(KanError::EmptySolution) => Ok(Vec::new()),
        other => other,
    }
}

pub fn nat_is_iso(ctx: BaseCtx, alpha: &VNat) -> bool {
    alpha.components.iter().all(|c| is_iso(ctx, c))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProbeStats {
    pub non_iso: usize,
    pub controls: usize,
    pub violations: usize,
}

/// Push sampled transformations between battery members through the target
/// and look for a non-iso whose image is iso (and an iso whose image is not).
/// Evidence only: a clean run proves nothing about unsampled transformations.
pub fn conservativity_probe(
    target: &ProbeTarget<'_>,
    battery: &[(String, Module)],
    cfg: &ProbeConfig,
    phase: &str,
    report: &mut Report,
) -> Result<ProbeStats> {
    let Some((_, first)) = battery.first() else {
        report.not_applicable(phase, "conservativity probe", "empty battery");
        return Ok(ProbeStats::default());
    };
    let v = first.ctx();
    let mut stats = ProbeStats::default();
    let mut seen: Vec<Vec<VNat>> = vec![Vec::new(); battery.len() * battery.len()];
    let mut first_violation: Option<Witness> = None;
    for round in 0..MAX_ROUNDS {
        let mut fresh = 0;
        for (i, (fname, f)) in battery.iter().enumerate() {
            for (j, (gname, g)) in battery.iter().enumerate() {
                let seed = cfg.derive(&format!("probe/{}/{fname}/{gname}/{round}", target.name));
                for alpha in sample_nats(f, g, seed, cfg.samples * (round + 2))? {
                    let pair = &mut seen[i * battery.len() + j];
                    if pair.contains(&alpha) {
                        continue;
                    }
                    fresh += 1;
                    let iso = nat_is_iso(v, &alpha);
                    let image = target.image(i, j, &alpha)?;
                    let image_iso = nat_is_iso(v, &image);
                    if iso {
                        stats.controls += 1;
                    } else {
                        stats.non_iso += 1;
                    }
                    if iso != image_iso {
                        stats.violations += 1;
                        if first_violation.is_none() {
                            let k = alpha.components.iter().position(|c| !is_iso(v, c)).unwrap_or(0);
                            let mut w = Witness::at(format!("{fname} -> {gname}, component {k}"))
                                .with("alpha", &alpha.components[k]);
                            for (c, m) in image.components.iter().enumerate() {
                                w = w.with(&format!("image[{c}]"), m);
                            }
                            first_violation = Some(w);
                        }
                    }
                    pair.push(alpha);
                }
            }
        }
        if stats.non_iso >= cfg.min_probes || fresh == 0 {
            break;
        }
    }
    let detail = format!(
        "{}: {} non-iso and {} iso transformations pushed through, {} violations",
        target.name, stats.non_iso, stats.controls, stats.violations
    );
    report.push(phase, "conservativity probe", stats.violations == 0, detail, first_violation);
    report.record(format!("{phase}.non_iso"), stats.non_iso as u64);
    report.record(format!("{phase}.controls"), stats.controls as u64);
    report.record(format!("{phase}.violations"), stats.violations as u64);
    Ok(stats)
}
