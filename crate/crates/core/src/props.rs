//! Seeded randomized suites for the elementary-differential identities.
//!
//! Case `i` of a run with seed `s` draws from ChaCha8 seeded with `s` on
//! stream `i`, so every case can be replayed on its own.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bck::BckElement;
use crate::bseries::{
    check_composition, check_composition_m, check_graft_morphism, check_homomorphism, check_leibniz,
    check_phi_upsilon, check_transported, Character, MCharacter, PolyVectorField,
};
use crate::error::{Error, Result};
use crate::forests::{Enumerator, Forest, Tree};
use crate::mindex::{basis_m, MElement, MultiIndexForest};
use crate::poly::{random_rational, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// Simultaneous grafting against derivatives of differentials.
    Graft,
    /// Composition of tree B-series as jets.
    Compose,
    /// Composition of multi-index B-series under `⋆_M`.
    ComposeM,
    /// `Υ[u ⋆ v] = Υ[u] ∘ Υ[v]`.
    Hom,
    /// `Υ[Δ_⧢ u]{φ⊗ψ} = Υ[u]{φψ}`.
    Leibniz,
    /// Both identities on multi-indices.
    Transported,
    /// `Ῡ ∘ Φ = Υ` on trees.
    Phi,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Graft, Suite::Compose, Suite::ComposeM, Suite::Hom, Suite::Leibniz, Suite::Transported, Suite::Phi];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Graft => "graft",
            Suite::Compose => "compose",
            Suite::ComposeM => "compose-m",
            Suite::Hom => "hom",
            Suite::Leibniz => "leibniz",
            Suite::Transported => "transported",
            Suite::Phi => "phi",
        }
    }

    /// Size bound used when none is given.
    pub fn default_max_size(self) -> usize {
        match self {
            Suite::Graft | Suite::Hom | Suite::Transported => 3,
            Suite::Compose | Suite::ComposeM | Suite::Leibniz => 4,
            Suite::Phi => 5,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite '{}'", s)))
    }
}

/// Outcome of one randomized case; inputs are recorded only on failure.
#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub suite: String,
    pub case: u64,
    pub seed: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
}

pub fn summarize(suite: Suite, results: &[CaseResult]) -> SuiteSummary {
    let passed = results.iter().filter(|r| r.passed).count();
    SuiteSummary { suite: suite.name().to_string(), cases: results.len(), passed, failed: results.len() - passed }
}

fn pick<'a, T, R: Rng>(rng: &mut R, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

fn combination<R: Rng>(rng: &mut R, pool: &[Forest]) -> BckElement {
    let mut x = BckElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        x.add_term(pick(rng, pool).clone(), random_rational(rng));
    }
    x
}

fn m_combination<R: Rng>(rng: &mut R, pool: &[MultiIndexForest]) -> MElement {
    let mut x = MElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        x.add_term(pick(rng, pool).clone(), random_rational(rng));
    }
    x
}

fn field_text(f: &PolyVectorField) -> String {
    (1..=f.drivers() as u32)
        .map(|a| f.component(a).iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Pools of random inputs shared by the cases of one run.
struct Pools {
    forests2: Vec<Forest>,
    trees2: Vec<Tree>,
    trees1: Vec<Tree>,
    mforests: Vec<MultiIndexForest>,
}

impl Pools {
    fn new(n: usize) -> Pools {
        let mut e2 = Enumerator::new(2);
        Pools {
            forests2: e2.forests_up_to(n),
            trees2: e2.trees_up_to(n),
            trees1: Enumerator::new(1).trees_up_to(n),
            mforests: (0..=n).flat_map(basis_m).collect(),
        }
    }
}

fn run_case(suite: Suite, rng: &mut ChaCha8Rng, n: usize, pools: &Pools) -> Result<(bool, BTreeMap<String, String>)> {
    let mut inputs = BTreeMap::new();
    let mut note = |k: &str, v: String| {
        inputs.insert(k.to_string(), v);
    };
    let ok = match suite {
        Suite::Graft => {
            let f = PolyVectorField::random(rng, 2, 2, 3);
            let sigma = pick(rng, &pools.forests2).clone();
            let tau = pick(rng, &pools.trees2).clone();
            note("field", field_text(&f));
            note("sigma", sigma.to_string());
            note("tau", tau.to_string());
            check_graft_morphism(&sigma, &tau, &f)?
        }
        Suite::Compose => {
            let f = PolyVectorField::random(rng, 1, 1, 2);
            let z1 = Character::random(rng, 1, n);
            let z2 = Character::random(rng, 1, n);
            let y = vec![random_rational(rng)];
            note("field", field_text(&f));
            note("y", y[0].to_string());
            check_composition(&z1, &z2, &f, &y, n)?
        }
        Suite::ComposeM => {
            let f = PolyVectorField::random(rng, 1, 1, 2);
            let z1 = MCharacter::random(rng, n);
            let z2 = MCharacter::random(rng, n);
            let y = random_rational(rng);
            note("field", field_text(&f));
            note("y", y.to_string());
            check_composition_m(&z1, &z2, &f, &y, n)?
        }
        Suite::Hom => {
            let f = PolyVectorField::random(rng, 2, 2, 2);
            let u = combination(rng, &pools.forests2);
            let v = combination(rng, &pools.forests2);
            let psi = vec![Poly::random(rng, 2, 3), Poly::random(rng, 2, 3)];
            note("field", field_text(&f));
            note("u", u.to_string());
            note("v", v.to_string());
            note("psi", format!("{}, {}", psi[0], psi[1]));
            check_homomorphism(&u, &v, &f, &psi)?
        }
        Suite::Leibniz => {
            let f = PolyVectorField::random(rng, 2, 2, 2);
            let u = combination(rng, &pools.forests2);
            let phi = Poly::random(rng, 2, 3);
            let psi = Poly::random(rng, 2, 3);
            note("field", field_text(&f));
            note("u", u.to_string());
            note("phi", phi.to_string());
            note("psi", psi.to_string());
            check_leibniz(&u, &f, &phi, &psi)?
        }
        Suite::Transported => {
            let f = PolyVectorField::random(rng, 1, 1, 4);
            let u = m_combination(rng, &pools.mforests);
            let v = m_combination(rng, &pools.mforests);
            let phi = Poly::random(rng, 1, 4);
            let psi = Poly::random(rng, 1, 4);
            note("field", field_text(&f));
            note("u", u.to_string());
            note("v", v.to_string());
            note("phi", phi.to_string());
            note("psi", psi.to_string());
            let (hom, leib) = check_transported(&u, &v, &f, &phi, &psi)?;
            hom && leib
        }
        Suite::Phi => {
            let f = PolyVectorField::random(rng, 1, 1, 3);
            let tau = pick(rng, &pools.trees1).clone();
            note("field", field_text(&f));
            note("tau", tau.to_string());
            check_phi_upsilon(&tau, &f)?
        }
    };
    Ok((ok, inputs))
}

/// Runs `cases` seeded cases of `suite` with size bound `max_size`.
pub fn run_suite(suite: Suite, seed: u64, cases: u64, max_size: usize) -> Result<Vec<CaseResult>> {
    let pools = Pools::new(max_size);
    (0..cases)
        .map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(case);
            let (passed, inputs) = run_case(suite, &mut rng, max_size, &pools)?;
            Ok(CaseResult {
                suite: suite.name().to_string(),
                case,
                seed,
                passed,
                counterexample: (!passed).then_some(inputs),
            })
        })
        .collect()
}
