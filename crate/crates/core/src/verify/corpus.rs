//! The pinned verification corpus.
//!
//! `corpus/manifest.json` is compiled into the crate, so every build checks
//! the same functions. Random entries are expanded from seed blocks.

use serde::{Deserialize, Serialize};

use crate::catalog::{sample_catalog, CatalogEntry, FunctionSpec};
use crate::error::Result;
use crate::grid::StepFunction;

pub const DEFAULT_MANIFEST: &str = include_str!("../../corpus/manifest.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyPlan {
    pub seeds: u64,
    pub dims: Vec<usize>,
    pub depths: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteforcePlan {
    pub seeds: u64,
    pub depths: Vec<u32>,
    pub first_seed: u64,
}

/// `count` random-uniform functions with consecutive seeds, depths cycling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomBlock {
    pub dim: usize,
    pub count: u64,
    pub first_seed: u64,
    pub depths: Vec<u32>,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFunction {
    pub dim: usize,
    pub depth: u32,
    pub spec: FunctionSpec,
}

impl CorpusFunction {
    pub fn label(&self) -> String {
        format!("n{}J{}:{}", self.dim, self.depth, self.spec.label())
    }

    pub fn sample(&self) -> Result<StepFunction> {
        sample_catalog(&self.spec, &self.spec.grid(self.dim, self.depth)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub property: PropertyPlan,
    pub bruteforce: BruteforcePlan,
    pub differentiation_depth: u32,
    pub extremal_depths: Vec<u32>,
    pub random: Vec<RandomBlock>,
    pub functions: Vec<CorpusFunction>,
}

impl Manifest {
    pub fn pinned() -> Self {
        serde_json::from_str(DEFAULT_MANIFEST).expect("committed manifest parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Random blocks first, then the explicit functions.
    pub fn corpus(&self) -> Vec<CorpusFunction> {
        let mut out = Vec::new();
        for block in &self.random {
            for i in 0..block.count {
                let depth = block.depths[i as usize % block.depths.len()];
                let entry = CatalogEntry::RandomUniform { lo: block.lo, hi: block.hi, seed: block.first_seed + i };
                out.push(CorpusFunction { dim: block.dim, depth, spec: FunctionSpec::new(entry) });
            }
        }
        out.extend(self.functions.iter().cloned());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_corpus_shape() {
        let m = Manifest::pinned();
        let corpus = m.corpus();
        let one_d: Vec<_> = corpus.iter().filter(|c| c.dim == 1).collect();
        assert_eq!(one_d.len(), 100);
        assert!(one_d.iter().any(|c| c.spec.entry == CatalogEntry::LogReciprocal));
        assert!(one_d.iter().any(|c| c.spec.entry == CatalogEntry::JnExtremal));
        for c in &corpus {
            c.sample().unwrap();
        }
    }
}
