//! Certificate-producing checks: local irreducibility, indistinguishability
//! across bipartitions, and the type-I / type-II classification.
//!
//! The engine is sound but incomplete. A bipartition is certified only when
//! a subset of states restricts to a two-party core whose measurements on
//! both sides are forced to be trivial, with every other party acting as a
//! rider. Failure to certify is reported as `Unknown`, never as
//! distinguishability.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constructions::proof_blocks;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::oplm::{party_report, OplmReport};
use crate::states::StateSet;

/// Recorded in every certificate; names the rider hypothesis in force.
pub const RULE_VERSION: &str = "rider-nonorthogonal/1";

/// Largest set the general clique search will attempt.
pub const MAX_SEARCH_STATES: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    pub side_x: Vec<usize>,
    pub side_y: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_x: Vec<usize>, side_y: Vec<usize>, parties: usize) -> Result<Self> {
        let bp = Bipartition { side_x, side_y };
        bp.validate(parties)?;
        Ok(bp)
    }

    /// All 2^{n−1} − 1 bipartitions; party 0 is always on `side_x`.
    pub fn all(parties: usize) -> Vec<Bipartition> {
        if parties < 2 {
            return Vec::new();
        }
        (1u64..(1 << (parties - 1)))
            .map(|mask| {
                let (y, x): (Vec<usize>, Vec<usize>) =
                    (0..parties).partition(|&p| p > 0 && mask >> (p - 1) & 1 == 1);
                Bipartition { side_x: x, side_y: y }
            })
            .collect()
    }

    pub fn validate(&self, parties: usize) -> Result<()> {
        let x: BTreeSet<usize> = self.side_x.iter().copied().collect();
        let y: BTreeSet<usize> = self.side_y.iter().copied().collect();
        let ok = !x.is_empty()
            && !y.is_empty()
            && x.len() == self.side_x.len()
            && y.len() == self.side_y.len()
            && x.is_disjoint(&y)
            && x.len() + y.len() == parties
            && x.iter().chain(&y).all(|&p| p < parties);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParties(format!(
                "{:?}|{:?} is not a bipartition of {parties} parties",
                self.side_x, self.side_y
            )))
        }
    }

    pub fn separates(&self, p: usize, q: usize) -> bool {
        let px = self.side_x.contains(&p);
        let qx = self.side_x.contains(&q);
        px != qx && (px || self.side_y.contains(&p)) && (qx || self.side_y.contains(&q))
    }

    /// Text form such as `A|BC`.
    pub fn display(&self, parties: usize) -> String {
        let name = |p: &usize| crate::states::party_name(parties, *p);
        let x: Vec<String> = self.side_x.iter().map(name).collect();
        let y: Vec<String> = self.side_y.iter().map(name).collect();
        let sep = if parties > 3 { "," } else { "" };
        format!("{}|{}", x.join(sep), y.join(sep))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    StripIdentical,
    TwoPartyTrivialCore,
    NonorthogonalRider,
    /// Experimental: both sides of the bipartition, each merged into one
    /// party, admit only trivial measurements on the whole set.
    GroupedTriviality,
}

/// When may a party outside the core be ignored?
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RiderPredicate {
    /// Pairwise nonzero inner products within the subset.
    #[default]
    Nonorthogonal,
    /// Pairwise proportional factors only.
    Proportional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProportionalEntry {
    pub label: String,
    /// First index where the reference factor is nonzero.
    pub index: usize,
    pub reference_amplitude: String,
    pub amplitude: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapEntry {
    pub first: String,
    pub second: String,
    pub inner: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RiderEvidence {
    /// `reference_amplitude · f = amplitude · f_ref` for each listed state.
    Proportional {
        party: usize,
        reference: String,
        entries: Vec<ProportionalEntry>,
    },
    /// Nonzero inner product for every unordered pair of the subset.
    Overlaps {
        party: usize,
        entries: Vec<OverlapEntry>,
    },
}

impl RiderEvidence {
    pub fn party(&self) -> usize {
        match self {
            RiderEvidence::Proportional { party, .. } | RiderEvidence::Overlaps { party, .. } => {
                *party
            }
        }
    }
}

/// Summary of a triviality check on one core party.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreReport {
    /// Party index in the original set (or the side index for grouped cores).
    pub party: usize,
    /// Coordinates kept after restricting to the span of the subset's factors.
    pub support: Vec<usize>,
    pub unknown_dim: usize,
    pub solution_dim: usize,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCertificate {
    pub rule_version: String,
    pub ambient_order: u32,
    pub bipartition: Bipartition,
    pub rule: Rule,
    pub subset: Vec<String>,
    pub subset_digest: String,
    pub core_pair: (usize, usize),
    pub riders: Vec<RiderEvidence>,
    pub core_reports: Vec<CoreReport>,
    /// SHA-256 over the certificate with this field blank.
    pub seal: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    SearchExhausted,
    BudgetExhausted,
    /// The set exceeds the general search cap and no proof block applied.
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BipartitionOutcome {
    Certified { certificate: Box<RuleCertificate> },
    Unknown { reason: UnknownReason },
}

impl BipartitionOutcome {
    pub fn certificate(&self) -> Option<&RuleCertificate> {
        match self {
            BipartitionOutcome::Certified { certificate } => Some(certificate),
            BipartitionOutcome::Unknown { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionWitness {
    pub party: usize,
    pub index_subset: Vec<usize>,
    /// States whose factor on `party` lies inside the span of `index_subset`.
    pub inside: Vec<String>,
    pub outside: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Genuineness {
    ProvenGenuine,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Irreducibility {
    ProvenIrreducible,
    ReducibleWithWitness,
    /// Some party admits a nontrivial measurement but no basis-aligned split
    /// was found.
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GnlType {
    TypeI,
    TypeII,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionVerdict {
    pub bipartition: Bipartition,
    pub outcome: BipartitionOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub genuine: Genuineness,
    pub per_bipartition: Vec<BipartitionVerdict>,
    pub irreducible: Irreducibility,
    pub reduction: Option<ReductionWitness>,
    pub gnl_type: GnlType,
    /// Solution-space dimension of each single party's measurement constraints.
    pub party_solution_dims: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub rider: RiderPredicate,
    /// Try the experimental grouped-triviality rule when other rules fail.
    pub grouped_rule: bool,
    /// Wall-clock budget for the general subset search, per bipartition.
    pub budget: Option<Duration>,
    pub max_search_states: usize,
    /// Try the generator's own proof blocks before searching.
    pub use_provenance: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            rider: RiderPredicate::Nonorthogonal,
            grouped_rule: false,
            budget: None,
            max_search_states: MAX_SEARCH_STATES,
            use_provenance: true,
        }
    }
}

impl SearchOptions {
    /// Defaults, with the budget taken from `GNL_BUDGET_MS` when set.
    pub fn from_env() -> Self {
        let budget = std::env::var("GNL_BUDGET_MS")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map(Duration::from_millis);
        SearchOptions {
            budget,
            ..Self::default()
        }
    }
}

/// Per-party exact reports plus the irreducibility verdict they imply.
#[derive(Clone, Debug)]
pub struct IrreducibilityCheck {
    pub proven_irreducible: bool,
    pub reports: Vec<OplmReport>,
}

impl IrreducibilityCheck {
    pub fn nontrivial_parties(&self) -> Vec<usize> {
        self.reports
            .iter()
            .filter(|r| !r.trivial)
            .map(|r| r.party_group[0])
            .collect()
    }
}

pub fn check_irreducible(set: &StateSet) -> Result<IrreducibilityCheck> {
    let reports = (0..set.parties())
        .into_par_iter()
        .map(|p| party_report(set, &[p]))
        .collect::<Result<Vec<_>>>()?;
    Ok(IrreducibilityCheck {
        proven_irreducible: reports.iter().all(|r| r.trivial),
        reports,
    })
}

/// Basis-aligned split of one party's indices that every factor respects.
pub fn find_reduction(set: &StateSet) -> Option<ReductionWitness> {
    (0..set.parties()).find_map(|p| reduction_on(set, p))
}

fn reduction_on(set: &StateSet, party: usize) -> Option<ReductionWitness> {
    let dim = set.dims()[party];
    // union-find over basis indices, linking indices that share a support
    let mut parent: Vec<usize> = (0..dim).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let supports: Vec<Vec<usize>> = set.states().iter().map(|s| s.factors[party].support()).collect();
    let mut used = vec![false; dim];
    for sup in &supports {
        for &i in sup {
            used[i] = true;
            let (a, b) = (root(&mut parent, sup[0]), root(&mut parent, i));
            parent[a.max(b)] = a.min(b);
        }
    }
    let highest = (0..dim).rev().find(|&i| used[i])?;
    let r = root(&mut parent, highest);
    let t: Vec<usize> = (0..dim).filter(|&i| used[i] && root(&mut parent, i) == r).collect();
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for (s, sup) in set.states().iter().zip(&supports) {
        if root(&mut parent, sup[0]) == r {
            inside.push(s.label.clone());
        } else {
            outside.push(s.label.clone());
        }
    }
    (!outside.is_empty()).then_some(ReductionWitness {
        party,
        index_subset: t,
        inside,
        outside,
    })
}

/// Checks a reduction witness against a set from scratch.
pub fn verify_reduction(set: &StateSet, w: &ReductionWitness) -> Result<(), String> {
    if w.party >= set.parties() {
        return Err(format!("no party {}", w.party));
    }
    let dim = set.dims()[w.party];
    let t: BTreeSet<usize> = w.index_subset.iter().copied().collect();
    if t.is_empty() || t.len() >= dim || t.iter().any(|&i| i >= dim) {
        return Err("index subset must be a nonempty proper subset".into());
    }
    if w.inside.is_empty() || w.outside.is_empty() {
        return Err("both sides of the split must be nonempty".into());
    }
    let listed: BTreeSet<&str> = w.inside.iter().chain(&w.outside).map(String::as_str).collect();
    if listed.len() != set.len() || w.inside.len() + w.outside.len() != set.len() {
        return Err("split does not partition the set".into());
    }
    for (side, want_inside) in [(&w.inside, true), (&w.outside, false)] {
        for label in side {
            let s = set.state(label).ok_or_else(|| format!("unknown state {label}"))?;
            let sup = s.factors[w.party].support();
            if !sup.iter().all(|i| t.contains(i) == want_inside) {
                return Err(format!("state {label} straddles the split"));
            }
        }
    }
    Ok(())
}

fn digest_labels(labels: &[String]) -> String {
    hex::encode(Sha256::digest(labels.join("\n").as_bytes()))
}

fn seal_of(cert: &RuleCertificate) -> String {
    let mut blank = cert.clone();
    blank.seal = String::new();
    let bytes = serde_json::to_vec(&blank).expect("certificate serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// Core party report on the restriction of `sub` to (p, q), compressed to the
/// span of the factors. `which` is 0 for p, 1 for q.
fn core_reports(sub: &StateSet, core: (usize, usize)) -> Result<Option<Vec<CoreReport>>> {
    let mut pair = sub.select_parties(&[core.0, core.1])?;
    if !pair.check_mutual_orthogonality().is_orthogonal() {
        return Ok(None);
    }
    let mut supports = Vec::new();
    for k in 0..2 {
        let support = pair.party_support(k);
        pair = pair.compress_party(k, &support)?;
        supports.push(support);
    }
    let mut out = Vec::new();
    for (k, support) in supports.into_iter().enumerate() {
        let r = party_report(&pair, &[k])?;
        out.push(CoreReport {
            party: if k == 0 { core.0 } else { core.1 },
            support,
            unknown_dim: r.unknown_dim,
            solution_dim: r.solution_dim,
            trivial: r.trivial,
        });
    }
    Ok(Some(out))
}

/// Rider evidence for `party` over `sub`, or None if it is not a rider.
fn rider_evidence(sub: &StateSet, party: usize, predicate: RiderPredicate) -> Result<Option<(bool, RiderEvidence)>> {
    let states = sub.states();
    let first = &states[0];
    let mut prop = Vec::new();
    let mut proportional = true;
    for s in &states[1..] {
        match first.factors[party].proportionality(&s.factors[party]) {
            Some((index, a, b)) => prop.push(ProportionalEntry {
                label: s.label.clone(),
                index,
                reference_amplitude: a.to_literal(),
                amplitude: b.to_literal(),
            }),
            None => {
                proportional = false;
                break;
            }
        }
    }
    if proportional {
        return Ok(Some((
            true,
            RiderEvidence::Proportional {
                party,
                reference: first.label.clone(),
                entries: prop,
            },
        )));
    }
    if predicate == RiderPredicate::Proportional {
        return Ok(None);
    }
    let mut entries = Vec::new();
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            let inner = a.factors[party].inner(&b.factors[party])?;
            if inner.is_zero() {
                return Ok(None);
            }
            entries.push(OverlapEntry {
                first: a.label.clone(),
                second: b.label.clone(),
                inner: inner.to_literal(),
            });
        }
    }
    Ok(Some((false, RiderEvidence::Overlaps { party, entries })))
}

/// Attempts a certificate for one subset (given by state indices) and core.
fn try_certify(
    set: &StateSet,
    bp: &Bipartition,
    indices: &[usize],
    core: (usize, usize),
    predicate: RiderPredicate,
) -> Result<Option<RuleCertificate>> {
    if indices.len() < 2 || !bp.separates(core.0, core.1) {
        return Ok(None);
    }
    let labels: Vec<String> = indices.iter().map(|&i| set.states()[i].label.clone()).collect();
    let sub = set.subset(&labels)?;
    let mut riders = Vec::new();
    let mut all_proportional = true;
    for r in (0..set.parties()).filter(|&r| r != core.0 && r != core.1) {
        match rider_evidence(&sub, r, predicate)? {
            Some((prop, ev)) => {
                all_proportional &= prop;
                riders.push(ev);
            }
            None => return Ok(None),
        }
    }
    let Some(reports) = core_reports(&sub, core)? else {
        return Ok(None);
    };
    if !reports.iter().all(|r| r.trivial) {
        return Ok(None);
    }
    let rule = if riders.is_empty() {
        Rule::TwoPartyTrivialCore
    } else if all_proportional {
        Rule::StripIdentical
    } else {
        Rule::NonorthogonalRider
    };
    Ok(Some(seal(RuleCertificate {
        rule_version: RULE_VERSION.into(),
        ambient_order: set.ambient_order(),
        bipartition: bp.clone(),
        rule,
        subset_digest: digest_labels(&labels),
        subset: labels,
        core_pair: core,
        riders,
        core_reports: reports,
        seal: String::new(),
    })))
}

fn seal(mut cert: RuleCertificate) -> RuleCertificate {
    cert.seal = seal_of(&cert);
    cert
}

impl RuleCertificate {
    /// Recomputes the seal after the contents were edited.
    pub fn resealed(self) -> RuleCertificate {
        seal(self)
    }
}

fn try_grouped(set: &StateSet, bp: &Bipartition) -> Result<Option<RuleCertificate>> {
    let grouped = set.group_parties(&[bp.side_x.clone(), bp.side_y.clone()])?;
    let mut reports = Vec::new();
    for k in 0..2 {
        let r = party_report(&grouped, &[k])?;
        if !r.trivial {
            return Ok(None);
        }
        reports.push(CoreReport {
            party: k,
            support: (0..grouped.dims()[k]).collect(),
            unknown_dim: r.unknown_dim,
            solution_dim: r.solution_dim,
            trivial: true,
        });
    }
    let labels: Vec<String> = set.labels().iter().map(|s| s.to_string()).collect();
    Ok(Some(seal(RuleCertificate {
        rule_version: RULE_VERSION.into(),
        ambient_order: set.ambient_order(),
        bipartition: bp.clone(),
        rule: Rule::GroupedTriviality,
        subset_digest: digest_labels(&labels),
        subset: labels,
        core_pair: (0, 1),
        riders: Vec::new(),
        core_reports: reports,
        seal: String::new(),
    })))
}

/// Maximal cliques of a graph on ≤ 64 vertices given as adjacency masks.
fn maximal_cliques(adj: &[u64]) -> Vec<u64> {
    fn bk(r: u64, mut p: u64, mut x: u64, adj: &[u64], out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let bit = 1u64 << v;
            bk(r | bit, p & adj[v], x & adj[v], adj, out);
            p &= !bit;
            x |= bit;
            cand &= !bit;
        }
    }
    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    bk(0, all, 0, adj, &mut out);
    out
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Searches for a certificate for one bipartition.
pub fn certify_bipartition(set: &StateSet, bp: &Bipartition, opts: &SearchOptions) -> Result<BipartitionOutcome> {
    bp.validate(set.parties())?;
    let certified = |c: RuleCertificate| BipartitionOutcome::Certified {
        certificate: Box::new(c),
    };
    if opts.use_provenance {
        if let Some(spec) = set.provenance() {
            for block in proof_blocks(spec) {
                let Some(indices) = block
                    .labels
                    .iter()
                    .map(|l| set.index_of(l))
                    .collect::<Option<Vec<_>>>()
                else {
                    continue;
                };
                if let Some(c) = try_certify(set, bp, &indices, block.core, opts.rider)? {
                    return Ok(certified(c));
                }
            }
        }
    }

    let started = Instant::now();
    let out_of_time = || opts.budget.is_some_and(|b| started.elapsed() >= b);
    let n = set.len();
    let mut reason = UnknownReason::SearchExhausted;
    if n > opts.max_search_states.min(64) {
        reason = UnknownReason::TooLarge;
    } else {
        'cores: for &p in &bp.side_x {
            for &q in &bp.side_y {
                let core = (p.min(q), p.max(q));
                let riders: Vec<usize> = (0..set.parties()).filter(|&r| r != p && r != q).collect();
                let mut adj = vec![0u64; n];
                for i in 0..n {
                    for j in i + 1..n {
                        let (si, sj) = (&set.states()[i], &set.states()[j]);
                        let mut ok = true;
                        for &r in &riders {
                            let (a, b) = (&si.factors[r], &sj.factors[r]);
                            ok = match opts.rider {
                                RiderPredicate::Nonorthogonal => !a.inner(b)?.is_zero(),
                                RiderPredicate::Proportional => a.proportionality(b).is_some(),
                            };
                            if !ok {
                                break;
                            }
                        }
                        if ok {
                            adj[i] |= 1 << j;
                            adj[j] |= 1 << i;
                        }
                    }
                }
                let mut cliques: Vec<Vec<usize>> = maximal_cliques(&adj)
                    .into_iter()
                    .map(mask_indices)
                    .filter(|c| c.len() >= 2)
                    .collect();
                cliques.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
                for clique in cliques {
                    if out_of_time() {
                        reason = UnknownReason::BudgetExhausted;
                        break 'cores;
                    }
                    if let Some(c) = try_certify(set, bp, &clique, core, opts.rider)? {
                        return Ok(certified(c));
                    }
                }
            }
        }
    }
    if opts.grouped_rule && reason != UnknownReason::BudgetExhausted {
        if let Some(c) = try_grouped(set, bp)? {
            return Ok(certified(c));
        }
    }
    Ok(BipartitionOutcome::Unknown { reason })
}

pub fn classify(set: &StateSet, opts: &SearchOptions) -> Result<Classification> {
    let irr = check_irreducible(set)?;
    let per_bipartition = Bipartition::all(set.parties())
        .into_par_iter()
        .map(|bp| {
            certify_bipartition(set, &bp, opts).map(|outcome| BipartitionVerdict {
                bipartition: bp,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let genuine = if per_bipartition.iter().all(|v| v.outcome.certificate().is_some()) {
        Genuineness::ProvenGenuine
    } else {
        Genuineness::Unknown
    };
    let reduction = if irr.proven_irreducible {
        None
    } else {
        find_reduction(set)
    };
    let irreducible = match (irr.proven_irreducible, &reduction) {
        (true, _) => Irreducibility::ProvenIrreducible,
        (false, Some(_)) => Irreducibility::ReducibleWithWitness,
        (false, None) => Irreducibility::Undetermined,
    };
    let gnl_type = match (genuine, irreducible) {
        (Genuineness::ProvenGenuine, Irreducibility::ProvenIrreducible) => GnlType::TypeII,
        (Genuineness::ProvenGenuine, Irreducibility::ReducibleWithWitness) => GnlType::TypeI,
        _ => GnlType::Unknown,
    };
    Ok(Classification {
        genuine,
        per_bipartition,
        irreducible,
        reduction,
        gnl_type,
        party_solution_dims: irr.reports.iter().map(|r| r.solution_dim).collect(),
    })
}

/// Why a certificate failed re-validation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("certificate rejected: {0}")]
pub struct CertificateError(pub String);

fn reject<T>(msg: impl Into<String>) -> Result<T, CertificateError> {
    Err(CertificateError(msg.into()))
}

fn parse_amp(text: &str, order: u32) -> Result<Cyclotomic, CertificateError> {
    Cyclotomic::parse_literal(text, order).map_err(|e| CertificateError(e.to_string()))
}

/// Re-derives every claim of `cert` against `set` from scratch.
pub fn verify_certificate(set: &StateSet, cert: &RuleCertificate) -> Result<(), CertificateError> {
    let internal = |e: Error| CertificateError(e.to_string());
    if cert.rule_version != RULE_VERSION {
        return reject(format!("unsupported rule version {:?}", cert.rule_version));
    }
    if cert.seal != seal_of(cert) {
        return reject("seal does not match certificate contents");
    }
    if cert.ambient_order == 0 || !set.ambient_order().is_multiple_of(cert.ambient_order) {
        return reject("ambient order does not divide the set's order");
    }
    let n = set.parties();
    cert.bipartition.validate(n).map_err(internal)?;
    if cert.subset.len() < 2 {
        return reject("subset needs at least two states");
    }
    if cert.subset_digest != digest_labels(&cert.subset) {
        return reject("subset digest mismatch");
    }
    let distinct: BTreeSet<&String> = cert.subset.iter().collect();
    if distinct.len() != cert.subset.len() {
        return reject("duplicate labels in subset");
    }
    if let Some(l) = cert.subset.iter().find(|l| set.index_of(l).is_none()) {
        return reject(format!("unknown state {l}"));
    }
    let sub = set.subset(&cert.subset).map_err(internal)?;
    if !sub.check_mutual_orthogonality().is_orthogonal() {
        return reject("subset is not mutually orthogonal");
    }
    let order = set.ambient_order();

    if cert.rule == Rule::GroupedTriviality {
        let fresh = try_grouped(&sub, &cert.bipartition).map_err(internal)?;
        return match fresh {
            Some(f) if f.core_reports == cert.core_reports && cert.core_pair == (0, 1) && cert.riders.is_empty() => Ok(()),
            _ => reject("grouped triviality does not hold as recorded"),
        };
    }

    let (p, q) = cert.core_pair;
    if p >= q || q >= n {
        return reject("core pair must be two distinct parties in increasing order");
    }
    if !cert.bipartition.separates(p, q) {
        return reject("core parties lie on the same side");
    }
    let fresh = core_reports(&sub, (p, q))
        .map_err(internal)?
        .ok_or_else(|| CertificateError("core restriction is not orthogonal".into()))?;
    if fresh != cert.core_reports {
        return reject("recorded core reports differ from recomputation");
    }
    if !fresh.iter().all(|r| r.trivial && r.solution_dim == 1) {
        return reject("a core report is not trivial");
    }

    let want: Vec<usize> = (0..n).filter(|&r| r != p && r != q).collect();
    let got: Vec<usize> = cert.riders.iter().map(RiderEvidence::party).collect();
    if want != got {
        return reject("rider list does not cover exactly the non-core parties");
    }
    let mut all_proportional = true;
    for ev in &cert.riders {
        let prop = verify_rider(&sub, ev, order)?;
        let actually = rider_evidence(&sub, ev.party(), RiderPredicate::Proportional)
            .map_err(internal)?
            .is_some();
        if prop != actually {
            return reject("rider evidence kind does not match the factors");
        }
        all_proportional &= actually;
    }
    let rule = if cert.riders.is_empty() {
        Rule::TwoPartyTrivialCore
    } else if all_proportional {
        Rule::StripIdentical
    } else {
        Rule::NonorthogonalRider
    };
    if rule != cert.rule {
        return reject(format!("rule should be {rule:?}"));
    }
    Ok(())
}

/// Checks one rider's evidence; returns whether it was proportional evidence.
fn verify_rider(sub: &StateSet, ev: &RiderEvidence, order: u32) -> Result<bool, CertificateError> {
    let factor = |label: &str, party: usize| {
        sub.state(label)
            .map(|s| s.factors[party].clone())
            .ok_or_else(|| CertificateError(format!("unknown state {label}")))
    };
    match ev {
        RiderEvidence::Proportional {
            party,
            reference,
            entries,
        } => {
            let f0 = factor(reference, *party)?;
            let mut seen: BTreeSet<&str> = BTreeSet::from([reference.as_str()]);
            for e in entries {
                let f = factor(&e.label, *party)?;
                let a = parse_amp(&e.reference_amplitude, order)?;
                let b = parse_amp(&e.amplitude, order)?;
                if a.is_zero() || b.is_zero() {
                    return reject("zero proportionality amplitude");
                }
                if f0.amplitudes().get(e.index) != Some(&a) || f.amplitudes().get(e.index) != Some(&b) {
                    return reject(format!("amplitudes for {} do not match", e.label));
                }
                let ok = f0
                    .amplitudes()
                    .iter()
                    .zip(f.amplitudes())
                    .all(|(u, v)| &a * v == &b * u);
                if !ok {
                    return reject(format!("{} is not proportional to {reference}", e.label));
                }
                seen.insert(&e.label);
            }
            if seen.len() != sub.len() {
                return reject("proportionality evidence does not cover the subset");
            }
            Ok(true)
        }
        RiderEvidence::Overlaps { party, entries } => {
            let mut pairs = BTreeSet::new();
            for e in entries {
                let inner = factor(&e.first, *party)?
                    .inner(&factor(&e.second, *party)?)
                    .map_err(|e| CertificateError(e.to_string()))?;
                if inner.is_zero() || inner != parse_amp(&e.inner, order)? {
                    return reject(format!("overlap of {} and {} does not match", e.first, e.second));
                }
                let key = if e.first < e.second {
                    (e.first.clone(), e.second.clone())
                } else {
                    (e.second.clone(), e.first.clone())
                };
                pairs.insert(key);
            }
            let m = sub.len();
            if pairs.len() != m * (m - 1) / 2 {
                return reject("overlap evidence does not cover every pair");
            }
            Ok(false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartitions_of_three_and_four() {
        let b3 = Bipartition::all(3);
        assert_eq!(b3.len(), 3);
        assert_eq!(b3[0], Bipartition { side_x: vec![0, 2], side_y: vec![1] });
        assert_eq!(b3[2].display(3), "A|BC");
        assert_eq!(Bipartition::all(4).len(), 7);
        assert!(b3.iter().all(|b| b.validate(3).is_ok()));
        assert!(Bipartition::new(vec![0], vec![0, 1], 2).is_err());
    }

    #[test]
    fn cliques_of_small_graphs() {
        // path 0-1-2 plus isolated 3
        let adj = vec![0b010, 0b101, 0b010, 0];
        let mut c = maximal_cliques(&adj);
        c.sort();
        assert_eq!(c, vec![0b0011, 0b0110, 0b1000]);
    }
}
