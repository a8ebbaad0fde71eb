//! Batches of checks: expansion of a configuration into concrete checks,
//! parallel execution with deterministic ordering, and the acceptance suite.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bessel::{self, Mode, SYMBOLIC_CAPACITY};
use crate::error::{Error, Result};
use crate::lfactors::verify_modulus_identity;
use crate::lgroup::{GroupSpec, Place};
use crate::report::{run_check, Params, VerificationReport};
use crate::wcf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    SingularVanishing,
    ParabolicDSum,
    SchurOracle,
    EpsilonOrbit,
    LiuNormalization,
    Cauchy,
    BesselEquivalence,
    KeyIdentity,
    RhsConstancy,
    ModulusIdentity,
    Proposition,
    Lquotient,
}

impl IdentityId {
    pub const ALL: [IdentityId; 12] = [
        IdentityId::SingularVanishing,
        IdentityId::ParabolicDSum,
        IdentityId::SchurOracle,
        IdentityId::EpsilonOrbit,
        IdentityId::LiuNormalization,
        IdentityId::Cauchy,
        IdentityId::BesselEquivalence,
        IdentityId::KeyIdentity,
        IdentityId::RhsConstancy,
        IdentityId::ModulusIdentity,
        IdentityId::Proposition,
        IdentityId::Lquotient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::SingularVanishing => "singular_vanishing",
            IdentityId::ParabolicDSum => "parabolic_d_sum",
            IdentityId::SchurOracle => "schur_oracle",
            IdentityId::EpsilonOrbit => "epsilon_orbit",
            IdentityId::LiuNormalization => "liu_normalization",
            IdentityId::Cauchy => "cauchy",
            IdentityId::BesselEquivalence => "bessel_equivalence",
            IdentityId::KeyIdentity => "key_identity",
            IdentityId::RhsConstancy => "rhs_constancy",
            IdentityId::ModulusIdentity => "modulus_identity",
            IdentityId::Proposition => "proposition",
            IdentityId::Lquotient => "lquotient",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown identity '{s}'")))
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "specialized" => Ok(Mode::Specialized),
            "numeric" => Ok(Mode::Numeric),
            _ => Err(Error::Precondition(format!("unknown mode '{s}'"))),
        }
    }
}

/// One fully determined check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    SingularVanishing { group: GroupSpec, bound: i64 },
    EpsilonOrbit { group: GroupSpec, bound: i64 },
    ParabolicDSum { group: GroupSpec },
    SchurOracle { k: usize, order: usize },
    LiuNormalization { m: usize, place: Place },
    Cauchy { r: usize, place: Place, order: usize },
    BesselEquivalence { r: usize, m: usize, place: Place, order: usize },
    KeyIdentity { r: usize, m: usize, place: Place, mode: Mode, trials: usize, seed: u64 },
    RhsConstancy { r: usize, m: usize, place: Place },
    ModulusIdentity { r: usize, m: usize, place: Place },
    Proposition { r: usize, m: usize, place: Place, order: usize },
    Lquotient { r: usize, m: usize, place: Place },
}

impl Check {
    pub fn identity(&self) -> IdentityId {
        match self {
            Check::SingularVanishing { .. } => IdentityId::SingularVanishing,
            Check::EpsilonOrbit { .. } => IdentityId::EpsilonOrbit,
            Check::ParabolicDSum { .. } => IdentityId::ParabolicDSum,
            Check::SchurOracle { .. } => IdentityId::SchurOracle,
            Check::LiuNormalization { .. } => IdentityId::LiuNormalization,
            Check::Cauchy { .. } => IdentityId::Cauchy,
            Check::BesselEquivalence { .. } => IdentityId::BesselEquivalence,
            Check::KeyIdentity { .. } => IdentityId::KeyIdentity,
            Check::RhsConstancy { .. } => IdentityId::RhsConstancy,
            Check::ModulusIdentity { .. } => IdentityId::ModulusIdentity,
            Check::Proposition { .. } => IdentityId::Proposition,
            Check::Lquotient { .. } => IdentityId::Lquotient,
        }
    }

    pub fn run(&self) -> VerificationReport {
        // group-level checks are bounded by the same capacity as the identities
        let capped = |group: &GroupSpec, f: &dyn Fn() -> VerificationReport| {
            if group.rank() > SYMBOLIC_CAPACITY {
                let params = Params { place: Some(group.place), ..Default::default() };
                return run_check(self.identity().name(), params, |_| {
                    Err(Error::CapacityExceeded { rank: group.rank(), bound: SYMBOLIC_CAPACITY })
                });
            }
            f()
        };
        match *self {
            Check::SingularVanishing { group, bound } => {
                capped(&group, &|| wcf::verify_singular_vanishing_box(&group, bound))
            }
            Check::EpsilonOrbit { group, bound } => capped(&group, &|| wcf::verify_epsilon_orbit_box(&group, bound)),
            Check::ParabolicDSum { group } => capped(&group, &|| wcf::verify_parabolic_d_sums(&group)),
            Check::SchurOracle { k, order } => {
                capped(&GroupSpec::unitary(k, Place::Split), &|| wcf::verify_schur_oracle(k, order))
            }
            Check::LiuNormalization { m, place } => bessel::verify_liu_normalization(m, place),
            Check::Cauchy { r, place, order } => bessel::verify_cauchy(r, place, order),
            Check::BesselEquivalence { r, m, place, order } => bessel::verify_lemma_equivalence(r, m, place, order),
            Check::KeyIdentity { r, m, place, mode, trials, seed } => {
                bessel::verify_key_identity(r, m, place, mode, trials, seed)
            }
            Check::RhsConstancy { r, m, place } => bessel::verify_rhs_constancy(r, m, place),
            Check::ModulusIdentity { r, m, place } => verify_modulus_identity(r, m, place),
            Check::Proposition { r, m, place, order } => bessel::verify_unramified_proposition(r, m, place, order),
            Check::Lquotient { r, m, place } => bessel::verify_lquotient_factorization(r, m, place),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub identities: Vec<IdentityId>,
    pub ranks: Vec<(usize, usize)>,
    pub places: Vec<Place>,
    pub order: usize,
    pub mode: Mode,
    pub trials: usize,
    pub seed: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            identities: IdentityId::ALL.to_vec(),
            ranks: vec![(1, 0)],
            places: vec![Place::Inert, Place::Split],
            order: 4,
            mode: Mode::Symbolic,
            trials: 10,
            seed: 0,
        }
    }
}

/// Weight box used by the character checks: `order`, capped at 3.
fn weight_box(order: usize) -> i64 {
    order.min(3) as i64
}

/// Concrete checks for each `(identity, rank, place)`, in that nesting
/// order, without duplicates. Group-level identities run on `U_{n+1}`.
pub fn expand(config: &CampaignConfig) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    let mut push = |c: Check| {
        if !out.contains(&c) {
            out.push(c);
        }
    };
    let (order, mode, trials, seed) = (config.order, config.mode, config.trials, config.seed);
    for &id in &config.identities {
        for &(r, m) in &config.ranks {
            let n1 = m + 2 * r + 1;
            for &place in &config.places {
                let group = GroupSpec::unitary(n1, place);
                match id {
                    IdentityId::SingularVanishing => {
                        push(Check::SingularVanishing { group, bound: weight_box(order) })
                    }
                    IdentityId::EpsilonOrbit => push(Check::EpsilonOrbit { group, bound: weight_box(order) }),
                    IdentityId::ParabolicDSum => push(Check::ParabolicDSum { group }),
                    IdentityId::SchurOracle => push(Check::SchurOracle { k: n1, order }),
                    IdentityId::LiuNormalization => push(Check::LiuNormalization { m, place }),
                    IdentityId::Cauchy => push(Check::Cauchy { r, place, order }),
                    IdentityId::BesselEquivalence => push(Check::BesselEquivalence { r, m, place, order }),
                    IdentityId::KeyIdentity => push(Check::KeyIdentity { r, m, place, mode, trials, seed }),
                    IdentityId::RhsConstancy => push(Check::RhsConstancy { r, m, place }),
                    IdentityId::ModulusIdentity => push(Check::ModulusIdentity { r, m, place }),
                    IdentityId::Proposition => push(Check::Proposition { r, m, place, order }),
                    IdentityId::Lquotient => push(Check::Lquotient { r, m, place }),
                }
            }
        }
    }
    out
}

/// Runs the checks in parallel. Reports come back ordered by identity id,
/// then by position in `checks`.
pub fn run_checks(checks: &[Check]) -> Vec<VerificationReport> {
    let mut reports: Vec<(&str, usize, VerificationReport)> =
        checks.par_iter().enumerate().map(|(i, c)| (c.identity().name(), i, c.run())).collect();
    reports.sort_by_key(|(id, i, _)| (*id, *i));
    reports.into_iter().map(|(_, _, r)| r).collect()
}

pub fn run_campaign(config: &CampaignConfig) -> Vec<VerificationReport> {
    run_checks(&expand(config))
}

/// One acceptance criterion: a batch of checks that must all pass within
/// the time budget.
#[derive(Clone, Debug)]
pub struct Criterion {
    pub number: usize,
    pub title: &'static str,
    pub budget_secs: u64,
    pub checks: Vec<Check>,
}

const BOTH: [Place; 2] = [Place::Inert, Place::Split];

pub const ACCEPTANCE_SEED: u64 = 20_240_601;

pub fn acceptance_suite() -> Vec<Criterion> {
    let mut suite = Vec::new();

    let mut c1 = Vec::new();
    for k in 1..=3 {
        c1.push(Check::SingularVanishing { group: GroupSpec::unitary(k, Place::Inert), bound: 3 });
        c1.push(Check::SingularVanishing { group: GroupSpec::linear(k, Place::Split), bound: 3 });
    }
    suite.push(Criterion { number: 1, title: "singular weights give vanishing sums", budget_secs: 60, checks: c1 });

    let mut c2 = Vec::new();
    for place in BOTH {
        c2.extend((1..=4).map(|l| Check::ParabolicDSum { group: GroupSpec::unitary(l, place) }));
        c2.extend((1..=2).map(|k| Check::ParabolicDSum { group: GroupSpec::linear(k, place) }));
    }
    suite.push(Criterion { number: 2, title: "parabolic D-factor sums", budget_secs: 120, checks: c2 });

    let c3 = (1..=4).map(|k| Check::SchurOracle { k, order: 4 }).collect();
    suite.push(Criterion { number: 3, title: "connected characters are Schur polynomials", budget_secs: 120, checks: c3 });

    let c4 = BOTH.iter().flat_map(|&place| (0..=2).map(move |m| Check::LiuNormalization { m, place })).collect();
    suite.push(Criterion { number: 4, title: "Weyl-sum normalization equals 1", budget_secs: 120, checks: c4 });

    // the r = 1 inert report includes the convention pin
    let c5 = BOTH.iter().flat_map(|&place| (1..=2).map(move |r| Check::Cauchy { r, place, order: 6 })).collect();
    suite.push(Criterion { number: 5, title: "Cauchy identity and the q_E convention", budget_secs: 60, checks: c5 });

    let c6 = BOTH
        .iter()
        .flat_map(|&place| [(1, 0), (1, 1)].map(|(r, m)| Check::BesselEquivalence { r, m, place, order: 4 }))
        .collect();
    suite.push(Criterion { number: 6, title: "two Bessel-value formulas agree", budget_secs: 300, checks: c6 });

    let mut c7 = Vec::new();
    for place in BOTH {
        for (r, m) in [(1, 0), (1, 1)] {
            for mode in [Mode::Symbolic, Mode::Specialized] {
                c7.push(Check::KeyIdentity { r, m, place, mode, trials: 0, seed: 0 });
            }
        }
        for (r, m) in [(2, 0), (2, 1)] {
            c7.push(Check::KeyIdentity { r, m, place, mode: Mode::Numeric, trials: 10, seed: ACCEPTANCE_SEED });
        }
    }
    suite.push(Criterion { number: 7, title: "key determinant identity", budget_secs: 600, checks: c7 });

    let c8 = BOTH.iter().map(|&place| Check::RhsConstancy { r: 1, m: 0, place }).collect();
    suite.push(Criterion { number: 8, title: "Weyl sum is constant in S_(n+1)", budget_secs: 60, checks: c8 });

    let mut c9 = Vec::new();
    for place in BOTH {
        for r in 0..=2 {
            c9.extend((0..=2).map(|m| Check::ModulusIdentity { r, m, place }));
        }
    }
    suite.push(Criterion { number: 9, title: "modulus characters combine to |det|", budget_secs: 10, checks: c9 });

    let c10 = BOTH
        .iter()
        .flat_map(|&place| [(1, 0, 4), (1, 1, 3)].map(|(r, m, order)| Check::Proposition { r, m, place, order }))
        .collect();
    suite.push(Criterion { number: 10, title: "zeta series equals the L-factor quotient", budget_secs: 600, checks: c10 });

    let c11 = BOTH.iter().map(|&place| Check::Lquotient { r: 1, m: 0, place }).collect();
    suite.push(Criterion { number: 11, title: "L-quotient factorization", budget_secs: 120, checks: c11 });

    suite
}

/// Every check of the acceptance suite, in criterion order.
pub fn acceptance_checks() -> Vec<Check> {
    acceptance_suite().into_iter().flat_map(|c| c.checks).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!("nope".parse::<IdentityId>().is_err());
        assert_eq!("numeric".parse::<Mode>().unwrap(), Mode::Numeric);
    }

    #[test]
    fn expansion_covers_every_identity() {
        let config = CampaignConfig { places: vec![Place::Inert], ..Default::default() };
        let checks = expand(&config);
        for id in IdentityId::ALL {
            assert!(checks.iter().any(|c| c.identity() == id), "{id}");
        }
        assert_eq!(checks.iter().filter(|c| c.identity() == IdentityId::Cauchy).count(), 1);
    }

    #[test]
    fn expansion_deduplicates() {
        let config = CampaignConfig {
            identities: vec![IdentityId::SchurOracle],
            places: vec![Place::Inert, Place::Split],
            ..Default::default()
        };
        assert_eq!(expand(&config).len(), 1);
    }

    #[test]
    fn reports_sorted_by_identity() {
        let checks = vec![
            Check::ModulusIdentity { r: 1, m: 0, place: Place::Inert },
            Check::LiuNormalization { m: 0, place: Place::Split },
            Check::ModulusIdentity { r: 0, m: 1, place: Place::Inert },
        ];
        let ids: Vec<String> = run_checks(&checks).into_iter().map(|r| r.identity_id).collect();
        assert_eq!(ids, ["liu_normalization", "modulus_identity", "modulus_identity"]);
    }

    #[test]
    fn oversized_groups_are_skipped() {
        let config = CampaignConfig {
            identities: vec![IdentityId::KeyIdentity, IdentityId::ParabolicDSum],
            ranks: vec![(0, 9)],
            places: vec![Place::Inert],
            ..Default::default()
        };
        for rep in run_campaign(&config) {
            assert_eq!(rep.status, crate::report::Status::Skipped, "{rep:?}");
        }
    }

    #[test]
    fn suite_has_eleven_criteria() {
        let suite = acceptance_suite();
        assert_eq!(suite.iter().map(|c| c.number).collect::<Vec<_>>(), (1..=11).collect::<Vec<_>>());
        assert!(suite.iter().all(|c| !c.checks.is_empty()));
    }
}
