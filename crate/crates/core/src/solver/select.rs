use crate::dataset::Dataset;
use crate::properties::{AtomEvaluator, PropertyCache, PropertyEvaluator, Provenance};
use crate::speclang::{AssumptionSet, ValidatedSpec};

use super::{
    build_knowledge_base, AtomEvidence, ConflictWarning, InvalidReason, InvalidTest, SelectionOutcome, TestRequirement,
    ValidTest,
};

/// Evaluates each conjunction left to right, stopping at the first atom that
/// fails or cannot be decided. Tests with no atoms act as a fallback and are
/// valid only when nothing else is.
pub fn select_with(kb: &[TestRequirement], eval: &dyn AtomEvaluator) -> SelectionOutcome {
    let mut valid = Vec::new();
    let mut invalid = Vec::new();
    let mut fallbacks = Vec::new();
    for req in kb {
        if req.atoms.is_empty() {
            fallbacks.push(req);
            continue;
        }
        let mut evidence = Vec::with_capacity(req.atoms.len());
        let mut reason = None;
        for atom in &req.atoms {
            let text = eval.describe(atom);
            match eval.evaluate(atom) {
                Ok(value) if value.holds => evidence.push(AtomEvidence { atom: atom.clone(), text, value }),
                Ok(value) => {
                    reason = Some(InvalidReason::FailedAtom { atom: atom.clone(), text, value });
                    break;
                }
                Err(error) => {
                    reason = Some(InvalidReason::EvaluationError { atom: atom.clone(), text, error });
                    break;
                }
            }
        }
        match reason {
            None => valid.push(ValidTest { test: req.test, family: req.family, power_rank: req.power_rank, evidence }),
            Some(reason) => invalid.push(InvalidTest { test: req.test, family: req.family, reason }),
        }
    }
    let fallback = valid.is_empty() && !fallbacks.is_empty();
    for req in fallbacks {
        if fallback {
            valid.push(ValidTest { test: req.test, family: req.family, power_rank: req.power_rank, evidence: vec![] });
        } else {
            invalid.push(InvalidTest { test: req.test, family: req.family, reason: InvalidReason::FallbackNotNeeded });
        }
    }
    SelectionOutcome { valid, invalid, warnings: Vec::new(), fallback }
}

/// Selects tests for a spec over the full knowledge base and attaches
/// warnings for claims the data contradicts.
pub fn select_tests(spec: &ValidatedSpec, data: &Dataset) -> SelectionOutcome {
    let eval = PropertyEvaluator::new(spec, data);
    let mut outcome = select_with(&build_knowledge_base(), &eval);
    outcome.warnings = reconcile_assumptions(&spec.spec.assumptions, eval.cache());
    outcome
}

/// One warning per assumed property whose computed value disagrees.
pub fn reconcile_assumptions(assumptions: &AssumptionSet, cache: &PropertyCache) -> Vec<ConflictWarning> {
    if assumptions.claims.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for entry in cache.entries() {
        let (Ok(value), Some(computed)) = (&entry.value, &entry.computed) else { continue };
        if value.provenance != Provenance::Assumed || value.holds == computed.holds {
            continue;
        }
        let message = format!(
            "assumed {}, but the data give {} = {} ({})",
            value.detail, entry.property, computed.holds, computed.detail
        );
        out.push(ConflictWarning {
            property: entry.property,
            assumed: value.holds,
            computed: computed.clone(),
            message,
        });
    }
    out
}
