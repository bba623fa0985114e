//! Generators for the orthogonal product-state families.
//!
//! Every generator checks its dimension constraints up front, emits states
//! labelled `phi_1`, `phi_2`, … in the canonical subscript order, and
//! validates mutual orthogonality before returning.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{ambient_order, root_of_unity, Cyclotomic};
use crate::error::{Error, Result};
use crate::states::{LocalFactor, ProductState, StateSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Fixed nine-state set in C³⊗C⁵.
    Fixed3x5,
    /// The 2d₂−1 state bipartite family.
    Bipartite,
    /// Fixed 18-state set in C⁴⊗C⁴⊗C⁶.
    Fixed4x4x6,
    Type1Tripartite,
    Type1Npartite,
    /// Fixed 14-state set in C³⊗C⁴⊗C⁵.
    Fixed3x4x5,
    Type2Tripartite,
    Type2Npartite,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Fixed3x5,
        Family::Bipartite,
        Family::Fixed4x4x6,
        Family::Type1Tripartite,
        Family::Type1Npartite,
        Family::Fixed3x4x5,
        Family::Type2Tripartite,
        Family::Type2Npartite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fixed3x5 => "fixed-3x5",
            Family::Bipartite => "bipartite",
            Family::Fixed4x4x6 => "fixed-4x4x6",
            Family::Type1Tripartite => "type1-tripartite",
            Family::Type1Npartite => "type1-npartite",
            Family::Fixed3x4x5 => "fixed-3x4x5",
            Family::Type2Tripartite => "type2-tripartite",
            Family::Type2Npartite => "type2-npartite",
        }
    }

    /// Dimensions of the fixed instances.
    pub fn fixed_dims(self) -> Option<&'static [usize]> {
        match self {
            Family::Fixed3x5 => Some(&[3, 5]),
            Family::Fixed4x4x6 => Some(&[4, 4, 6]),
            Family::Fixed3x4x5 => Some(&[3, 4, 5]),
            _ => None,
        }
    }

    /// The parameterized family a fixed instance belongs to.
    pub fn general(self) -> Family {
        match self {
            Family::Fixed3x5 => Family::Bipartite,
            Family::Fixed4x4x6 => Family::Type1Tripartite,
            Family::Fixed3x4x5 => Family::Type2Tripartite,
            f => f,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A family plus the dimensions it is instantiated at.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub family: Family,
    pub dims: Vec<usize>,
}

impl ConstructionSpec {
    pub fn new(family: Family, dims: Vec<usize>) -> Self {
        ConstructionSpec { family, dims }
    }

    /// Spec for a fixed instance, dims filled in.
    pub fn fixed(family: Family) -> Self {
        let dims = family.fixed_dims().map(<[usize]>::to_vec).unwrap_or_default();
        ConstructionSpec { family, dims }
    }

    pub fn check_admissible(&self) -> Result<()> {
        let d = &self.dims;
        let fail = |constraint: &str| {
            Err(Error::Inadmissible {
                family: self.family.name().to_string(),
                constraint: constraint.to_string(),
                dims: d.clone(),
            })
        };
        let sorted_from = |k: usize| d[k..].windows(2).all(|w| w[0] <= w[1]);
        match self.family {
            Family::Fixed3x5 | Family::Fixed4x4x6 | Family::Fixed3x4x5 => {
                let want = self.family.fixed_dims().unwrap();
                if d.as_slice() != want {
                    return fail(&format!("dims {want:?}"));
                }
            }
            Family::Bipartite => {
                if d.len() != 2 || d[0] < 3 || d[0] > d[1] {
                    return fail("3 <= d1 <= d2");
                }
            }
            Family::Type1Tripartite => {
                if d.len() != 3 || d[0] < 4 || d[0] - 1 > d[1] || d[1] > d[2] {
                    return fail("3 <= d1-1 <= d2 <= d3");
                }
            }
            Family::Type1Npartite => {
                if d.len() < 3 || d[0] < 4 || d[0] - 1 > d[1] || !sorted_from(1) {
                    return fail("n >= 3 and 3 <= d1-1 <= d2 <= ... <= dn");
                }
            }
            Family::Type2Tripartite => {
                if d.len() != 3 || d[0] < 3 || !sorted_from(0) {
                    return fail("3 <= d1 <= d2 <= d3");
                }
            }
            Family::Type2Npartite => {
                if d.len() < 4 || d[0] < 3 || !sorted_from(0) {
                    return fail("n >= 4 and 3 <= d1 <= d2 <= ... <= dn");
                }
            }
        }
        Ok(())
    }

    /// Closed-form number of states.
    pub fn expected_cardinality(&self) -> usize {
        let d = &self.dims;
        match self.family.general() {
            Family::Bipartite => 2 * d[1] - 1,
            Family::Type1Tripartite => 2 * (d[1] + d[2]) - 2,
            Family::Type2Tripartite => 2 * (d[1] + d[2]) - 4,
            Family::Type1Npartite | Family::Type2Npartite => {
                d[1..].iter().map(|&x| 2 * x - 1).sum()
            }
            _ => unreachable!("general() never returns a fixed family"),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        write!(f, "{}({})", self.family, dims.join(","))
    }
}

/// A subset of a generated set together with the two parties on which it
/// embeds a bipartite locally indistinguishable core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofBlock {
    pub labels: Vec<String>,
    pub core: (usize, usize),
}

fn label(k: usize) -> String {
    format!("phi_{k}")
}

/// Small factory for the ket shorthands used by the generators.
#[derive(Clone, Copy)]
struct Kets {
    order: u32,
}

impl Kets {
    fn basis(self, dim: usize, k: usize) -> LocalFactor {
        LocalFactor::basis(dim, k, self.order).expect("index within dim")
    }

    /// |a − b⟩
    fn minus(self, dim: usize, a: usize, b: usize) -> LocalFactor {
        LocalFactor::signed(dim, &[(a, 1), (b, -1)], self.order).expect("valid ket")
    }

    /// |a + b⟩
    fn plus(self, dim: usize, a: usize, b: usize) -> LocalFactor {
        LocalFactor::signed(dim, &[(a, 1), (b, 1)], self.order).expect("valid ket")
    }

    /// |0 + 1 + ⋯ + (count−1)⟩
    fn uniform(self, dim: usize, count: usize) -> LocalFactor {
        LocalFactor::uniform(dim, count, self.order).expect("valid ket")
    }

    /// |2⟩ + Σ_{t=1}^{len} ω_{len+1}^{s·t} |t + offset⟩
    fn eta(self, dim: usize, offset: usize, len: usize, s: usize) -> LocalFactor {
        let root = (len + 1) as u32;
        let mut terms = vec![(2, Cyclotomic::one(self.order))];
        for t in 1..=len {
            let w = root_of_unity(root, (s * t) as i64, self.order).expect("root order divides ambient");
            terms.push((t + offset, w));
        }
        LocalFactor::build(dim, &terms, self.order).expect("valid ket")
    }
}

/// The 2·d2 − 1 bipartite states in C^{d1}⊗C^{d2}, embedded in the lowest
/// coordinates of C^{dim_a}⊗C^{dim_b}, in canonical order.
fn bipartite_pairs(
    kets: Kets,
    d1: usize,
    d2: usize,
    dim_a: usize,
    dim_b: usize,
) -> Vec<(LocalFactor, LocalFactor)> {
    let mut out = Vec::with_capacity(2 * d2 - 1);
    for i in 1..d1 {
        out.push((kets.basis(dim_a, i), kets.minus(dim_b, 0, i)));
    }
    for i in 1..=d1 - 2 {
        out.push((kets.minus(dim_a, 0, i), kets.basis(dim_b, i + 1)));
    }
    // wrap-around arm: i = d1 − 1 pairs with m = 1
    out.push((kets.minus(dim_a, 0, d1 - 1), kets.basis(dim_b, 1)));
    for j in d1..d2 {
        out.push((kets.minus(dim_a, 0, 1), kets.basis(dim_b, j)));
    }
    for s in 1..=d2 - d1 {
        out.push((kets.plus(dim_a, 0, 1), kets.eta(dim_b, d1 - 1, d2 - d1, s)));
    }
    out.push((kets.uniform(dim_a, d1), kets.uniform(dim_b, d2)));
    debug_assert_eq!(out.len(), 2 * d2 - 1);
    out
}

/// Root orders used by `bipartite_pairs(d1, d2)`.
fn bipartite_roots(d1: usize, d2: usize) -> Option<u32> {
    (d2 > d1).then_some((d2 - d1 + 1) as u32)
}

fn finish(spec: &ConstructionSpec, order: u32, rows: Vec<Vec<LocalFactor>>) -> Result<StateSet> {
    let states = rows
        .into_iter()
        .enumerate()
        .map(|(k, factors)| ProductState::new(label(k + 1), factors))
        .collect();
    let set = StateSet::new(spec.dims.clone(), order, states, Some(spec.clone()))?;
    if set.len() != spec.expected_cardinality() {
        return Err(Error::Internal(format!(
            "{spec} produced {} states, expected {}",
            set.len(),
            spec.expected_cardinality()
        )));
    }
    Ok(set)
}

/// 2·d2 − 1 states in C^{d1}⊗C^{d2}, 3 ≤ d1 ≤ d2.
pub fn gen_bipartite(d1: usize, d2: usize) -> Result<StateSet> {
    let spec = ConstructionSpec::new(Family::Bipartite, vec![d1, d2]);
    spec.check_admissible()?;
    let order = ambient_order(bipartite_roots(d1, d2));
    let kets = Kets { order };
    let rows = bipartite_pairs(kets, d1, d2, d1, d2)
        .into_iter()
        .map(|(a, b)| vec![a, b])
        .collect();
    finish(&spec, order, rows)
}

/// 2(d2 + d3) − 2 states in C^{d1}⊗C^{d2}⊗C^{d3}, 3 ≤ d1 − 1 ≤ d2 ≤ d3.
pub fn gen_type1_tripartite(d1: usize, d2: usize, d3: usize) -> Result<StateSet> {
    let spec = ConstructionSpec::new(Family::Type1Tripartite, vec![d1, d2, d3]);
    spec.check_admissible()?;
    let order = ambient_order(bipartite_roots(d1 - 1, d2).into_iter().chain(bipartite_roots(d2, d3)));
    let kets = Kets { order };
    let mut rows = Vec::new();
    for (a, b) in bipartite_pairs(kets, d1 - 1, d2, d1, d2) {
        if a.support().iter().any(|&i| i > d1 - 2) {
            return Err(Error::Internal("first block leaks onto |d1-1> on party A".into()));
        }
        rows.push(vec![a, b, kets.basis(d3, 0)]);
    }
    for (b, c) in bipartite_pairs(kets, d2, d3, d2, d3) {
        rows.push(vec![kets.basis(d1, d1 - 1), b, c]);
    }
    finish(&spec, order, rows)
}

fn gen_npartite(spec: &ConstructionSpec) -> Result<StateSet> {
    let d = &spec.dims;
    let n = d.len();
    let type1 = spec.family == Family::Type1Npartite;
    let first_a = if type1 { d[0] - 1 } else { d[0] };
    let roots = bipartite_roots(first_a, d[1])
        .into_iter()
        .chain((2..n).filter_map(|k| bipartite_roots(d[1], d[k])));
    let order = ambient_order(roots);
    let kets = Kets { order };
    let mut rows = Vec::new();

    // G_1: core on (A1, A2); riders |0⟩ … |0⟩ |1⟩ on A3..An
    for (x, y) in bipartite_pairs(kets, first_a, d[1], d[0], d[1]) {
        let mut row = vec![x, y];
        for (p, &dim) in d.iter().enumerate().skip(2) {
            row.push(kets.basis(dim, usize::from(p == n - 1)));
        }
        rows.push(row);
    }
    // G_k, k = 2..n-1: core on (A2, A_{k+1})
    for k in 2..n {
        let core = k;
        for (x, z) in bipartite_pairs(kets, d[1], d[core], d[1], d[core]) {
            let mut row = Vec::with_capacity(n);
            for (p, &dim) in d.iter().enumerate() {
                let f = match p {
                    1 => x.clone(),
                    p if p == core => z.clone(),
                    0 if k == n - 1 && type1 => kets.basis(dim, d[0] - 1),
                    0 if k == n - 1 => kets.basis(dim, 0),
                    0 => kets.basis(dim, usize::from(k == 2)),
                    p => kets.basis(dim, usize::from(k >= 3 && p == k - 1)),
                };
                row.push(f);
            }
            rows.push(row);
        }
    }
    finish(spec, order, rows)
}

/// Σ_{i≥2} (2d_i − 1) states, n ≥ 3, 3 ≤ d1 − 1 ≤ d2 ≤ … ≤ dn; locally reducible.
pub fn gen_type1_npartite(dims: &[usize]) -> Result<StateSet> {
    let spec = ConstructionSpec::new(Family::Type1Npartite, dims.to_vec());
    spec.check_admissible()?;
    gen_npartite(&spec)
}

/// Σ_{i≥2} (2d_i − 1) states, n ≥ 4, 3 ≤ d1 ≤ d2 ≤ … ≤ dn.
pub fn gen_type2_npartite(dims: &[usize]) -> Result<StateSet> {
    let spec = ConstructionSpec::new(Family::Type2Npartite, dims.to_vec());
    spec.check_admissible()?;
    gen_npartite(&spec)
}

/// 2d2 + 2d3 − 4 states in C^{d1}⊗C^{d2}⊗C^{d3}, 3 ≤ d1 ≤ d2 ≤ d3.
pub fn gen_type2_tripartite(d1: usize, d2: usize, d3: usize) -> Result<StateSet> {
    let spec = ConstructionSpec::new(Family::Type2Tripartite, vec![d1, d2, d3]);
    spec.check_admissible()?;
    let order = ambient_order(bipartite_roots(d1, d2).into_iter().chain(bipartite_roots(d1, d3)));
    let kets = Kets { order };
    let mut rows = Vec::new();
    let pairs = bipartite_pairs(kets, d1, d2, d1, d2);
    let last = pairs.len() - 1;
    for (k, (a, b)) in pairs.into_iter().enumerate() {
        let c = if k == last {
            kets.uniform(d3, d3)
        } else {
            kets.basis(d3, 1)
        };
        rows.push(vec![a, b, c]);
    }
    let bplus = kets.plus(d2, 0, 1);
    for i in 1..d1 {
        rows.push(vec![kets.basis(d1, i), bplus.clone(), kets.minus(d3, 0, i)]);
    }
    // no wrap-around arm here: the first block's |0−(d1−1)⟩|1⟩|1⟩ plays that role
    for i in 1..=d1 - 2 {
        rows.push(vec![kets.minus(d1, 0, i), bplus.clone(), kets.basis(d3, i + 1)]);
    }
    for m in d1..d3 {
        rows.push(vec![kets.minus(d1, 0, 1), bplus.clone(), kets.basis(d3, m)]);
    }
    for s in 1..=d3 - d1 {
        rows.push(vec![
            kets.plus(d1, 0, 1),
            bplus.clone(),
            kets.eta(d3, d1 - 1, d3 - d1, s),
        ]);
    }
    finish(&spec, order, rows)
}

/// Dispatches on the family; fixed instances are emitted from their literal
/// listings and checked state-for-state against the parameterized generator.
pub fn gen_named(spec: &ConstructionSpec) -> Result<StateSet> {
    spec.check_admissible()?;
    let d = &spec.dims;
    match spec.family {
        Family::Bipartite => gen_bipartite(d[0], d[1]),
        Family::Type1Tripartite => gen_type1_tripartite(d[0], d[1], d[2]),
        Family::Type1Npartite => gen_type1_npartite(d),
        Family::Type2Tripartite => gen_type2_tripartite(d[0], d[1], d[2]),
        Family::Type2Npartite => gen_type2_npartite(d),
        fixed => {
            let listed = fixed_listing(fixed)?;
            let general = ConstructionSpec::new(fixed.general(), d.clone());
            let generated = gen_named(&general)?;
            compare_listings(fixed, &listed, &generated)?;
            Ok(listed.with_provenance(Some(spec.clone())))
        }
    }
}

fn compare_listings(family: Family, listed: &StateSet, generated: &StateSet) -> Result<()> {
    let drift = |label: &str| Error::ConstructionDrift {
        family: family.name().to_string(),
        label: label.to_string(),
    };
    if listed.len() != generated.len() || listed.ambient_order() != generated.ambient_order() {
        return Err(drift("<count>"));
    }
    for (a, b) in listed.states().iter().zip(generated.states()) {
        if a != b {
            return Err(drift(&a.label));
        }
    }
    Ok(())
}

/// One ket in a literal listing: (index, integer coefficient, power of ω₃).
type Term = (usize, i64, u32);

fn fixed_listing(family: Family) -> Result<StateSet> {
    const ORDER: u32 = 6;
    let factor = |dim: usize, terms: &[Term]| -> LocalFactor {
        let terms: Vec<_> = terms
            .iter()
            .map(|&(i, c, p)| {
                let w = root_of_unity(3, i64::from(p), ORDER).expect("3 divides 6");
                (i, &Cyclotomic::from_int(c, ORDER) * &w)
            })
            .collect();
        LocalFactor::build(dim, &terms, ORDER).expect("listed ket is valid")
    };
    let b = |k: usize| -> Vec<Term> { vec![(k, 1, 0)] };
    let m = |x: usize, y: usize| -> Vec<Term> { vec![(x, 1, 0), (y, -1, 0)] };
    let p = |x: usize, y: usize| -> Vec<Term> { vec![(x, 1, 0), (y, 1, 0)] };
    let u = |n: usize| -> Vec<Term> { (0..n).map(|i| (i, 1, 0)).collect() };
    let w = |x: usize, y: usize, z: usize, swap: bool| -> Vec<Term> {
        let (py, pz) = if swap { (2, 1) } else { (1, 2) };
        vec![(x, 1, 0), (y, 1, py), (z, 1, pz)]
    };

    let (dims, rows): (Vec<usize>, Vec<Vec<Vec<Term>>>) = match family {
        Family::Fixed3x5 => (
            vec![3, 5],
            vec![
                vec![b(1), m(0, 1)],
                vec![b(2), m(0, 2)],
                vec![m(0, 1), b(2)],
                vec![m(0, 2), b(1)],
                vec![m(0, 1), b(3)],
                vec![m(0, 1), b(4)],
                vec![p(0, 1), w(2, 3, 4, false)],
                vec![p(0, 1), w(2, 3, 4, true)],
                vec![u(3), u(5)],
            ],
        ),
        Family::Fixed4x4x6 => (
            vec![4, 4, 6],
            vec![
                vec![b(1), m(0, 1), b(0)],
                vec![b(2), m(0, 2), b(0)],
                vec![m(0, 1), b(2), b(0)],
                vec![m(0, 2), b(1), b(0)],
                vec![m(0, 1), b(3), b(0)],
                vec![p(0, 1), m(2, 3), b(0)],
                vec![u(3), u(4), b(0)],
                vec![b(3), b(1), m(0, 1)],
                vec![b(3), b(2), m(0, 2)],
                vec![b(3), b(3), m(0, 3)],
                vec![b(3), m(0, 1), b(2)],
                vec![b(3), m(0, 2), b(3)],
                vec![b(3), m(0, 3), b(1)],
                vec![b(3), m(0, 1), b(4)],
                vec![b(3), m(0, 1), b(5)],
                vec![b(3), p(0, 1), w(2, 4, 5, false)],
                vec![b(3), p(0, 1), w(2, 4, 5, true)],
                vec![b(3), u(4), u(6)],
            ],
        ),
        Family::Fixed3x4x5 => (
            vec![3, 4, 5],
            vec![
                vec![b(1), m(0, 1), b(1)],
                vec![b(2), m(0, 2), b(1)],
                vec![m(0, 1), b(2), b(1)],
                vec![m(0, 2), b(1), b(1)],
                vec![m(0, 1), b(3), b(1)],
                vec![p(0, 1), m(2, 3), b(1)],
                vec![u(3), u(4), u(5)],
                vec![b(1), p(0, 1), m(0, 1)],
                vec![b(2), p(0, 1), m(0, 2)],
                vec![m(0, 1), p(0, 1), b(2)],
                vec![m(0, 1), p(0, 1), b(3)],
                vec![m(0, 1), p(0, 1), b(4)],
                vec![p(0, 1), p(0, 1), w(2, 3, 4, false)],
                vec![p(0, 1), p(0, 1), w(2, 3, 4, true)],
            ],
        ),
        other => return Err(Error::UnknownFamily(format!("{other} has no fixed listing"))),
    };
    let states = rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let factors = row
                .iter()
                .zip(&dims)
                .map(|(terms, &dim)| factor(dim, terms))
                .collect();
            ProductState::new(label(k + 1), factors)
        })
        .collect();
    StateSet::new(dims, ORDER, states, None)
}

/// The state blocks used to argue indistinguishability, with their core
/// party pairs, for a generated set.
pub fn proof_blocks(spec: &ConstructionSpec) -> Vec<ProofBlock> {
    let d = &spec.dims;
    let range = |a: usize, b: usize| (a..=b).map(label).collect::<Vec<_>>();
    match spec.family.general() {
        Family::Bipartite => vec![ProofBlock {
            labels: range(1, 2 * d[1] - 1),
            core: (0, 1),
        }],
        Family::Type1Tripartite => vec![
            ProofBlock {
                labels: range(1, 2 * d[1] - 1),
                core: (0, 1),
            },
            ProofBlock {
                labels: range(2 * d[1], 2 * (d[1] + d[2]) - 2),
                core: (1, 2),
            },
        ],
        Family::Type2Tripartite => {
            let mut second = vec![label(2 * d[0] - 2)];
            second.extend(range(2 * d[1] - 1, 2 * (d[1] + d[2]) - 4));
            vec![
                ProofBlock {
                    labels: range(1, 2 * d[1] - 1),
                    core: (0, 1),
                },
                ProofBlock {
                    labels: second,
                    core: (0, 2),
                },
            ]
        }
        Family::Type1Npartite | Family::Type2Npartite => {
            let mut blocks = Vec::new();
            let mut start = 1;
            for (k, &dk) in d.iter().enumerate().skip(1) {
                let size = 2 * dk - 1;
                let core = if k == 1 { (0, 1) } else { (1, k) };
                blocks.push(ProofBlock {
                    labels: range(start, start + size - 1),
                    core,
                });
                start += size;
            }
            blocks
        }
        _ => unreachable!("general() never returns a fixed family"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(text: &str, order: u32) -> Cyclotomic {
        Cyclotomic::parse_literal(text, order).unwrap()
    }

    #[test]
    fn bipartite_3x3_hand_instance() {
        let s = gen_bipartite(3, 3).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.ambient_order(), 2);
        let k = Kets { order: 2 };
        let want = [
            (k.basis(3, 1), k.minus(3, 0, 1)),
            (k.basis(3, 2), k.minus(3, 0, 2)),
            (k.minus(3, 0, 1), k.basis(3, 2)),
            (k.minus(3, 0, 2), k.basis(3, 1)),
            (k.uniform(3, 3), k.uniform(3, 3)),
        ];
        for (st, (a, b)) in s.states().iter().zip(want) {
            assert_eq!(st.factors, vec![a, b]);
        }
    }

    #[test]
    fn fixed_instances_match_generators() {
        for fam in [Family::Fixed3x5, Family::Fixed4x4x6, Family::Fixed3x4x5] {
            let s = gen_named(&ConstructionSpec::fixed(fam)).unwrap();
            assert_eq!(s.provenance().unwrap().family, fam);
        }
        assert_eq!(gen_named(&ConstructionSpec::fixed(Family::Fixed3x5)).unwrap().len(), 9);
        assert_eq!(gen_named(&ConstructionSpec::fixed(Family::Fixed4x4x6)).unwrap().len(), 18);
        assert_eq!(gen_named(&ConstructionSpec::fixed(Family::Fixed3x4x5)).unwrap().len(), 14);
    }

    #[test]
    fn drift_is_reported() {
        let listed = fixed_listing(Family::Fixed3x5).unwrap();
        let other = gen_bipartite(3, 4).unwrap();
        assert!(matches!(
            compare_listings(Family::Fixed3x5, &listed, &other),
            Err(Error::ConstructionDrift { .. })
        ));
    }

    #[test]
    fn inadmissible_dims_are_errors() {
        assert!(gen_bipartite(2, 5).is_err());
        assert!(gen_bipartite(5, 4).is_err());
        assert!(gen_type1_tripartite(3, 4, 5).is_err());
        assert!(gen_type1_tripartite(5, 3, 6).is_err());
        assert!(gen_type2_tripartite(3, 5, 4).is_err());
        assert!(gen_type1_npartite(&[4, 3]).is_err());
        assert!(gen_type2_npartite(&[3, 3, 3]).is_err());
        assert!(gen_type2_npartite(&[3, 4, 3, 5]).is_err());
        let err = gen_type1_tripartite(3, 4, 5).unwrap_err().to_string();
        assert!(err.contains("3 <= d1-1 <= d2 <= d3"), "{err}");
    }

    #[test]
    fn npartite_small_instances() {
        let s = gen_type1_npartite(&[4, 4, 4]).unwrap();
        assert_eq!(s.len(), 14);
        // G1 = seven (3,4) bipartite states with rider |1⟩ on A3
        for st in &s.states()[..7] {
            assert_eq!(st.factors[2].support(), vec![1]);
            assert!(st.factors[0].support().iter().all(|&i| i <= 2));
        }
        for st in &s.states()[7..] {
            assert_eq!(st.factors[0].support(), vec![3]);
        }
        let t = gen_type2_npartite(&[3, 3, 3, 3]).unwrap();
        assert_eq!(t.len(), 15);
        for st in &t.states()[..5] {
            assert_eq!(st.factors[2].support(), vec![0]);
            assert_eq!(st.factors[3].support(), vec![1]);
        }
        for st in &t.states()[5..] {
            let sup = st.factors[0].support();
            assert!(sup == vec![0] || sup == vec![1], "{}", st.label);
        }
    }

    #[test]
    fn eta_uses_expected_roots() {
        let k = Kets { order: 6 };
        let e = k.eta(5, 2, 2, 1);
        assert_eq!(e.amplitudes()[3], root_of_unity(3, 1, 6).unwrap());
        assert_eq!(e.amplitudes()[4], root_of_unity(3, 2, 6).unwrap());
        assert_eq!(e.amplitudes()[2], cyc("1", 6));
    }

    #[test]
    fn proof_block_sizes() {
        let spec = ConstructionSpec::new(Family::Type2Tripartite, vec![3, 4, 5]);
        let blocks = proof_blocks(&spec);
        assert_eq!(blocks[0].labels.len(), 7);
        assert_eq!(blocks[1].labels[0], "phi_4");
        assert_eq!(blocks[1].labels.len(), 9);
        let spec = ConstructionSpec::new(Family::Type1Npartite, vec![4, 3, 3, 3]);
        let blocks = proof_blocks(&spec);
        assert_eq!(blocks.len(), 3);
        assert_eq!(blocks[2].labels.last().unwrap(), "phi_15");
        assert_eq!(blocks[2].core, (1, 3));
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("prop9".parse::<Family>().is_err());
    }
}
