//! The default verification plan and a runner that executes it on a
//! thread pool with deterministic output order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::identities::{self, IdentityId};
use crate::qfactory::Convention;
use crate::report::VerificationReport;
use crate::theorems::{
    instantiate, verify_base_congruence, verify_claims, CongruenceClaim, Family, InstanceParams,
    DEFAULT_MAX_TRUNC,
};

pub const BASE_TRUNC: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_trunc: usize,
    /// Worker threads; 0 picks the number of cores.
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_trunc: DEFAULT_MAX_TRUNC,
            threads: 0,
        }
    }
}

/// `n_max` used when none is given: 300 for the fixed-spec families, 50 for
/// parametrised families at `beta = 0` and 5 beyond.
pub fn default_nmax(family: Family, beta: u32) -> usize {
    match family {
        Family::T35a | Family::T35b | Family::T37a | Family::T37b | Family::T38 | Family::T39 => {
            300
        }
        _ if beta == 0 => 50,
        _ => 5,
    }
}

/// Copies of a claim under each convention it should be checked with.
///
/// For `t = 2s` the three readings of the generating function differ, so
/// the squared product and unsquared oracle readings are added next to the
/// series one. The unsquared reading is recorded but does not gate. An
/// explicit `convention` replaces all of this with a single gating check.
pub fn expand_conventions(
    claim: &CongruenceClaim,
    convention: Option<Convention>,
) -> Vec<CongruenceClaim> {
    let gating = !claim.as_printed;
    match convention {
        Some(c) => vec![claim.clone().with_convention(c, gating)],
        None if claim.spec.is_self_paired() => Convention::ALL
            .into_iter()
            .map(|c| {
                let mut copy = claim
                    .clone()
                    .with_convention(c, gating && c != Convention::Unsquared);
                if c == Convention::Unsquared {
                    let extra = "unsquared reading, recorded only";
                    copy.note = Some(match copy.note.take() {
                        Some(n) => format!("{n}; {extra}"),
                        None => extra.to_string(),
                    });
                }
                copy
            })
            .collect(),
        None => vec![claim.clone().with_convention(Convention::Series, gating)],
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plan {
    pub identities: Vec<(IdentityId, usize)>,
    pub bases: Vec<(Family, InstanceParams, usize)>,
    pub claims: Vec<(CongruenceClaim, usize)>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.identities.len() + self.bases.len() + self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds every claim of a family instance, under the default conventions.
    pub fn add_theorem(
        &mut self,
        family: Family,
        params: InstanceParams,
        n_max: Option<usize>,
    ) -> Result<()> {
        self.add_theorem_with(family, params, n_max, None)
    }

    pub fn add_theorem_with(
        &mut self,
        family: Family,
        params: InstanceParams,
        n_max: Option<usize>,
        convention: Option<Convention>,
    ) -> Result<()> {
        let n_max = n_max.unwrap_or_else(|| default_nmax(family, params.beta));
        for claim in instantiate(family, &params)? {
            for c in expand_conventions(&claim, convention) {
                self.claims.push((c, n_max));
            }
        }
        Ok(())
    }
}

/// The desk-scale plan run by `verify all`.
pub fn default_plan() -> Result<Plan> {
    let mut plan = Plan {
        identities: IdentityId::catalog(),
        ..Default::default()
    };
    for alpha in [1, 2] {
        plan.bases
            .push((Family::T31, InstanceParams::alpha(alpha), BASE_TRUNC));
    }
    for alpha in [1, 3] {
        plan.bases
            .push((Family::T32, InstanceParams::alpha(alpha), BASE_TRUNC));
    }
    plan.bases
        .push((Family::T36b, InstanceParams::default(), BASE_TRUNC));

    for beta in [0, 1] {
        for (alpha, p) in [(1, 5), (2, 7), (2, 11)] {
            plan.add_theorem(Family::T31, InstanceParams::alpha_p(alpha, p, beta), None)?;
        }
        for (alpha, p) in [(1, 7), (3, 5)] {
            plan.add_theorem(Family::T32, InstanceParams::alpha_p(alpha, p, beta), None)?;
        }
    }
    for alpha in [2, 3] {
        plan.add_theorem(Family::T33, InstanceParams::alpha(alpha), None)?;
        plan.add_theorem(Family::T34, InstanceParams::alpha(alpha), None)?;
    }
    plan.add_theorem(Family::T35a, InstanceParams::default(), None)?;
    plan.add_theorem(Family::T35b, InstanceParams::default(), None)?;
    plan.add_theorem(Family::T35b, InstanceParams::default().printed(), None)?;
    for beta in [0, 1] {
        for family in [Family::T36a, Family::T36b] {
            plan.add_theorem(family, InstanceParams::prime(13, beta), None)?;
            plan.add_theorem(family, InstanceParams::prime(13, beta).printed(), None)?;
        }
    }
    for family in [Family::T37a, Family::T37b, Family::T38, Family::T39] {
        plan.add_theorem(family, InstanceParams::default(), None)?;
    }
    Ok(plan)
}

fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| (&a.id, a.convention).cmp(&(&b.id, b.convention)));
}

/// Executes a plan. Reports are sorted by id, then convention.
pub fn run_plan(plan: &Plan, options: RunOptions) -> Result<Vec<VerificationReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start thread pool: {e}")))?;
    pool.install(|| {
        let ceiling = options.max_trunc;
        let mut reports: Vec<VerificationReport> = plan
            .identities
            .par_iter()
            .map(|&(id, trunc)| {
                if trunc > ceiling {
                    let r = VerificationReport::new(id.to_string(), trunc, id.modulus());
                    return Ok(r.skipped(format!(
                        "required truncation {trunc} exceeds ceiling {ceiling}"
                    )));
                }
                identities::verify(id, trunc)
            })
            .collect::<Result<_>>()?;
        let bases: Vec<VerificationReport> = plan
            .bases
            .par_iter()
            .map(|(family, params, n_max)| verify_base_congruence(*family, params, *n_max, ceiling))
            .collect::<Result<_>>()?;
        reports.extend(bases);
        reports.extend(verify_claims(&plan.claims, ceiling)?);
        sort_reports(&mut reports);
        Ok(reports)
    })
}
