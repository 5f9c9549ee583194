use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::encat::{generate_copresheaf, zero_module, Copresheaf, CopresheafSpec, Shape, VCat};
use crate::error::Result;

/// Seed, sample counts and battery shape for a certification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub seed: u64,
    /// Transformations drawn per ordered pair of battery members per round.
    pub samples: usize,
    /// Probing continues in further rounds until this many non-iso
    /// transformations have been pushed through the functor.
    pub min_probes: usize,
    /// Largest generator count of a free battery member.
    pub max_gens: usize,
    /// Number of quotient-of-free members.
    pub quotients: usize,
}

impl Default for ProbeConfig {
    fn default() -> ProbeConfig {
        ProbeConfig { seed: 0, samples: 12, min_probes: 200, max_gens: 2, quotients: 1 }
    }
}

impl ProbeConfig {
    pub fn with_seed(seed: u64) -> ProbeConfig {
        ProbeConfig { seed, ..ProbeConfig::default() }
    }

    pub fn describe(&self) -> String {
        format!(
            "free(gens<={}), {} quotient(s), zero; {} nats/pair, >= {} non-iso probes",
            self.max_gens, self.quotients, self.samples, self.min_probes
        )
    }

    /// Seed for a named sub-task.
    pub fn derive(&self, task: &str) -> u64 {
        use rand::RngCore;
        crate::rng::task_rng(self.seed, task).next_u64()
    }

    /// The copresheaf battery on `a`: each representable, the free
    /// copresheaf on one generator everywhere, one on `max_gens` generators
    /// at the first object, quotients of free copresheaves, and zero.
    pub fn battery(&self, a: &Arc<VCat>) -> Result<Vec<(String, Copresheaf)>> {
        let n = a.n();
        let mut specs: Vec<(String, CopresheafSpec)> = Vec::new();
        for x in 0..n {
            let mut gens = vec![0; n];
            gens[x] = 1;
            specs.push((format!("rep({})", a.name(x)), CopresheafSpec::Free { gens }));
        }
        if n > 1 {
            specs.push(("free(1..)".into(), CopresheafSpec::Free { gens: vec![1; n] }));
        }
        if self.max_gens > 1 {
            let mut gens = vec![0; n];
            gens[0] = self.max_gens;
            specs.push((format!("free({})", self.max_gens), CopresheafSpec::Free { gens }));
        }
        for q in 0..self.quotients {
            let mut relations = vec![0; n];
            relations[q % n] = 1;
            let mut gens = vec![1; n];
            gens[q % n] = self.max_gens.max(2);
            let seed = self.derive(&format!("quotient/{q}"));
            specs.push((format!("quot{q}"), CopresheafSpec::QuotientOfFree { gens, relations, seed }));
        }
        let mut out = specs
            .into_iter()
            .map(|(name, spec)| Ok((name, generate_copresheaf(a, &spec)?)))
            .collect::<Result<Vec<_>>>()?;
        let zero = zero_module(vec![a.clone()])?.as_shape(Shape::Copresheaf, a.clone())?;
        out.push(("zero".into(), zero));
        Ok(out)
    }
}
