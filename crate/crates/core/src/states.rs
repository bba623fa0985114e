//! Unnormalized local factors, product states and multiparty state sets.
//!
//! States follow the usual shorthand |i₁ ± i₂ ± …⟩ without the 1/√n factor;
//! every predicate built on top of these types is scale invariant.

use std::collections::BTreeSet;



use crate::constructions::ConstructionSpec;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// One party's vector, |u⟩ ∈ C^dim, with amplitudes in Q(ζ_N).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalFactor {
    amplitudes: Vec<Cyclotomic>,
}

impl LocalFactor {
    pub fn new(amplitudes: Vec<Cyclotomic>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch("empty local factor".into()));
        }
        let order = amplitudes[0].order();
        if let Some(bad) = amplitudes.iter().find(|a| a.order() != order) {
            return Err(Error::IncompatibleOrder {
                left: order,
                right: bad.order(),
            });
        }
        if amplitudes.iter().all(Cyclotomic::is_zero) {
            return Err(Error::ZeroFactor);
        }
        Ok(LocalFactor { amplitudes })
    }

    /// Σ coeff·|index⟩ over the given terms; repeated indices are summed.
    pub fn build(dim: usize, terms: &[(usize, Cyclotomic)], order: u32) -> Result<Self> {
        let mut amplitudes = vec![Cyclotomic::zero(order); dim];
        for (index, coeff) in terms {
            if *index >= dim {
                return Err(Error::IndexOutOfRange { index: *index, dim });
            }
            amplitudes[*index] = amplitudes[*index].checked_add(coeff)?;
        }
        Self::new(amplitudes)
    }

    /// Computational basis ket |k⟩.
    pub fn basis(dim: usize, k: usize, order: u32) -> Result<Self> {
        Self::build(dim, &[(k, Cyclotomic::one(order))], order)
    }

    /// |i₁ + s·i₂ + …⟩ with integer signs.
    pub fn signed(dim: usize, terms: &[(usize, i64)], order: u32) -> Result<Self> {
        let terms: Vec<_> = terms
            .iter()
            .map(|&(i, s)| (i, Cyclotomic::from_int(s, order)))
            .collect();
        Self::build(dim, &terms, order)
    }

    /// |0 + 1 + … + (count-1)⟩ padded to `dim`.
    pub fn uniform(dim: usize, count: usize, order: u32) -> Result<Self> {
        let terms: Vec<_> = (0..count).map(|i| (i, 1)).collect();
        Self::signed(dim, &terms, order)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn order(&self) -> u32 {
        self.amplitudes[0].order()
    }

    pub fn amplitudes(&self) -> &[Cyclotomic] {
        &self.amplitudes
    }

    /// Basis indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Nonzero (index, amplitude) pairs.
    pub fn terms(&self) -> Vec<(usize, &Cyclotomic)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .collect()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &LocalFactor) -> Result<Cyclotomic> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "local dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut acc = Cyclotomic::zero(self.order());
        for (u, v) in self.amplitudes.iter().zip(&other.amplitudes) {
            if u.is_zero() || v.is_zero() {
                continue;
            }
            acc = acc.checked_add(&u.conj().checked_mul(v)?)?;
        }
        Ok(acc)
    }

    /// |self⟩ ⊗ |other⟩ with `self` as the slow index.
    pub fn kron(&self, other: &LocalFactor) -> LocalFactor {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for u in &self.amplitudes {
            for v in &other.amplitudes {
                amplitudes.push(u * v);
            }
        }
        LocalFactor { amplitudes }
    }

    /// Multiplies every amplitude by `c` (nonzero).
    pub fn scaled(&self, c: &Cyclotomic) -> Result<LocalFactor> {
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|a| a.checked_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(amplitudes)
    }

    /// If the factors are proportional, returns `(k, self[k], other[k])` for
    /// the first index where `self` is nonzero; then `self[k]·other = other[k]·self`.
    pub fn proportionality(&self, other: &LocalFactor) -> Option<(usize, Cyclotomic, Cyclotomic)> {
        if self.dim() != other.dim() {
            return None;
        }
        let k = self.amplitudes.iter().position(|a| !a.is_zero())?;
        let (a, b) = (&self.amplitudes[k], &other.amplitudes[k]);
        if b.is_zero() {
            return None;
        }
        let ok = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(u, v)| (a * v) == (b * u));
        ok.then(|| (k, a.clone(), b.clone()))
    }

    /// Keeps only the listed coordinates; fails if support leaks outside them.
    pub fn compress(&self, indices: &[usize]) -> Result<LocalFactor> {
        let keep: BTreeSet<usize> = indices.iter().copied().collect();
        if let Some(out) = self.support().into_iter().find(|i| !keep.contains(i)) {
            return Err(Error::IndexOutOfRange {
                index: out,
                dim: indices.len(),
            });
        }
        Self::new(indices.iter().map(|&i| self.amplitudes[i].clone()).collect())
    }
}

/// A product state with a display label such as `phi_7`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub label: String,
    pub factors: Vec<LocalFactor>,
}

impl ProductState {
    pub fn new(label: impl Into<String>, factors: Vec<LocalFactor>) -> Self {
        ProductState {
            label: label.into(),
            factors,
        }
    }

    /// ⟨self|other⟩ = Π_k ⟨self_k|other_k⟩.
    pub fn inner(&self, other: &ProductState) -> Result<Cyclotomic> {
        if self.factors.len() != other.factors.len() {
            return Err(Error::InvalidParties(format!(
                "{} has {} parties, {} has {}",
                self.label,
                self.factors.len(),
                other.label,
                other.factors.len()
            )));
        }
        let mut acc = Cyclotomic::one(self.factors[0].order());
        for (u, v) in self.factors.iter().zip(&other.factors) {
            let f = u.inner(v)?;
            if f.is_zero() {
                return Ok(f);
            }
            acc = acc.checked_mul(&f)?;
        }
        Ok(acc)
    }

    /// Full flattened vector (leftmost party slowest).
    pub fn flatten(&self) -> LocalFactor {
        let mut it = self.factors.iter();
        let first = it.next().expect("product state without factors").clone();
        it.fold(first, |acc, f| acc.kron(f))
    }
}

/// Pairs with nonzero global inner product.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub violations: Vec<(String, String, Cyclotomic)>,
}

impl OrthogonalityReport {
    pub fn is_orthogonal(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Parties with local dimensions plus an ordered list of product states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    dims: Vec<usize>,
    ambient_order: u32,
    states: Vec<ProductState>,
    provenance: Option<ConstructionSpec>,
}

impl StateSet {
    /// Validated constructor: at least two parties of dimension ≥ 2 and a
    /// mutually orthogonal list.
    pub fn new(
        dims: Vec<usize>,
        ambient_order: u32,
        states: Vec<ProductState>,
        provenance: Option<ConstructionSpec>,
    ) -> Result<Self> {
        if dims.len() < 2 || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParties(format!(
                "need at least two parties of dimension >= 2, got {dims:?}"
            )));
        }
        let set = Self::from_parts(dims, ambient_order, states, provenance)?;
        if let Some((a, b, _)) = set.check_mutual_orthogonality().violations.into_iter().next() {
            return Err(Error::NotOrthogonal(a, b));
        }
        Ok(set)
    }

    /// Structural checks only; orthogonality is left to the caller.
    pub fn from_parts(
        dims: Vec<usize>,
        ambient_order: u32,
        states: Vec<ProductState>,
        provenance: Option<ConstructionSpec>,
    ) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParties(format!("bad dims {dims:?}")));
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s.label.as_str()) {
                return Err(Error::InvalidParties(format!("duplicate label {}", s.label)));
            }
            if s.factors.len() != dims.len() {
                return Err(Error::InvalidParties(format!(
                    "{} has {} factors for {} parties",
                    s.label,
                    s.factors.len(),
                    dims.len()
                )));
            }
            for (k, (f, &d)) in s.factors.iter().zip(&dims).enumerate() {
                if f.dim() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "{} party {k}: factor dim {} vs {d}",
                        s.label,
                        f.dim()
                    )));
                }
                if f.order() != ambient_order {
                    return Err(Error::IncompatibleOrder {
                        left: f.order(),
                        right: ambient_order,
                    });
                }
            }
        }
        Ok(StateSet {
            dims,
            ambient_order,
            states,
            provenance,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn ambient_order(&self) -> u32 {
        self.ambient_order
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn provenance(&self) -> Option<&ConstructionSpec> {
        self.provenance.as_ref()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.states.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s.label == label)
    }

    pub fn state(&self, label: &str) -> Option<&ProductState> {
        self.states.iter().find(|s| s.label == label)
    }

    pub fn with_provenance(mut self, provenance: Option<ConstructionSpec>) -> Self {
        self.provenance = provenance;
        self
    }

    /// Re-embeds every amplitude into Q(ζ_target).
    pub fn lift(&self, target: u32) -> Result<StateSet> {
        let states = self
            .states
            .iter()
            .map(|s| {
                let factors = s
                    .factors
                    .iter()
                    .map(|f| {
                        let amps = f
                            .amplitudes()
                            .iter()
                            .map(|a| a.lift(target))
                            .collect::<Result<Vec<_>>>()?;
                        LocalFactor::new(amps)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ProductState::new(s.label.clone(), factors))
            })
            .collect::<Result<Vec<_>>>()?;
        StateSet::from_parts(self.dims.clone(), target, states, self.provenance.clone())
    }

    pub fn check_mutual_orthogonality(&self) -> OrthogonalityReport {
        let mut violations = Vec::new();
        for (i, p) in self.states.iter().enumerate() {
            for q in &self.states[i + 1..] {
                let v = p.inner(q).expect("state set structure validated");
                if !v.is_zero() {
                    violations.push((p.label.clone(), q.label.clone(), v));
                }
            }
        }
        OrthogonalityReport { violations }
    }

    /// Sub-list of states with the given labels, in set order.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<StateSet> {
        let want: BTreeSet<&str> = labels.iter().map(AsRef::as_ref).collect();
        for l in &want {
            if self.index_of(l).is_none() {
                return Err(Error::InvalidParties(format!("unknown state label {l}")));
            }
        }
        let states = self
            .states
            .iter()
            .filter(|s| want.contains(s.label.as_str()))
            .cloned()
            .collect();
        StateSet::from_parts(self.dims.clone(), self.ambient_order, states, None)
    }

    /// Merges parties block-wise; each block becomes one party whose factor is
    /// the Kronecker product over the block in the given order.
    pub fn group_parties(&self, grouping: &[Vec<usize>]) -> Result<StateSet> {
        let n = self.parties();
        let mut seen = vec![false; n];
        for block in grouping {
            if block.is_empty() {
                return Err(Error::InvalidParties("empty block in grouping".into()));
            }
            for &p in block {
                if p >= n || seen[p] {
                    return Err(Error::InvalidParties(format!(
                        "grouping {grouping:?} is not a partition of 0..{n}"
                    )));
                }
                seen[p] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParties(format!(
                "grouping {grouping:?} is not a partition of 0..{n}"
            )));
        }
        self.merge_blocks(grouping)
    }

    /// Keeps only the listed parties (each as its own party, in the given
    /// order); the remaining factors are dropped.
    pub fn select_parties(&self, parties: &[usize]) -> Result<StateSet> {
        let blocks: Vec<Vec<usize>> = parties.iter().map(|&p| vec![p]).collect();
        let mut seen = BTreeSet::new();
        if parties.is_empty() || parties.iter().any(|&p| p >= self.parties() || !seen.insert(p)) {
            return Err(Error::InvalidParties(format!("bad party selection {parties:?}")));
        }
        self.merge_blocks(&blocks)
    }

    fn merge_blocks(&self, blocks: &[Vec<usize>]) -> Result<StateSet> {
        let dims = blocks
            .iter()
            .map(|b| b.iter().map(|&p| self.dims[p]).product())
            .collect();
        let states = self
            .states
            .iter()
            .map(|s| {
                let factors = blocks
                    .iter()
                    .map(|b| {
                        let first = s.factors[b[0]].clone();
                        b[1..].iter().fold(first, |acc, &p| acc.kron(&s.factors[p]))
                    })
                    .collect();
                ProductState::new(s.label.clone(), factors)
            })
            .collect();
        StateSet::from_parts(dims, self.ambient_order, states, None)
    }

    /// Removes `party` when its factors are pairwise proportional across the set.
    pub fn strip_party(&self, party: usize) -> Result<StateSet> {
        if party >= self.parties() {
            return Err(Error::InvalidParties(format!("no party {party}")));
        }
        if let Some(first) = self.states.first() {
            for s in &self.states[1..] {
                if first.factors[party].proportionality(&s.factors[party]).is_none() {
                    return Err(Error::NotStrippable {
                        party,
                        first: first.label.clone(),
                        second: s.label.clone(),
                    });
                }
            }
        }
        if self.parties() == 1 {
            return Err(Error::InvalidParties("cannot strip the only party".into()));
        }
        let keep: Vec<usize> = (0..self.parties()).filter(|&p| p != party).collect();
        self.select_parties(&keep)
    }

    /// Union of the basis supports of all factors on `party`.
    pub fn party_support(&self, party: usize) -> Vec<usize> {
        let mut all = BTreeSet::new();
        for s in &self.states {
            all.extend(s.factors[party].support());
        }
        all.into_iter().collect()
    }

    /// Restricts `party` to the coordinates in `indices` (which must contain
    /// every factor's support).
    pub fn compress_party(&self, party: usize, indices: &[usize]) -> Result<StateSet> {
        let mut dims = self.dims.clone();
        dims[party] = indices.len();
        let states = self
            .states
            .iter()
            .map(|s| {
                let mut factors = s.factors.clone();
                factors[party] = s.factors[party].compress(indices)?;
                Ok(ProductState::new(s.label.clone(), factors))
            })
            .collect::<Result<Vec<_>>>()?;
        StateSet::from_parts(dims, self.ambient_order, states, None)
    }
}

/// Display name of party `k` in an `n`-party system: A, B, C for up to three
/// parties, A1…An beyond that.
pub fn party_name(n: usize, k: usize) -> String {
    if n <= 3 {
        ["A", "B", "C"][k].to_string()
    } else {
        format!("A{}", k + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::root_of_unity;

    fn ket(dim: usize, terms: &[(usize, i64)]) -> LocalFactor {
        LocalFactor::signed(dim, terms, 6).unwrap()
    }

    #[test]
    fn build_factor_examples() {
        let f = ket(5, &[(0, 1), (1, -1)]);
        assert_eq!(f.support(), vec![0, 1]);
        assert_eq!(f.amplitudes()[1], Cyclotomic::from_int(-1, 6));
        let b = LocalFactor::basis(3, 2, 6).unwrap();
        assert_eq!(b.support(), vec![2]);
        let w = |s| root_of_unity(3, s, 6).unwrap();
        let eta = LocalFactor::build(5, &[(2, Cyclotomic::one(6)), (3, w(1)), (4, w(2))], 6).unwrap();
        assert_eq!(eta.support(), vec![2, 3, 4]);
    }

    #[test]
    fn build_factor_errors_and_duplicates() {
        assert!(matches!(
            LocalFactor::signed(3, &[(3, 1)], 2),
            Err(Error::IndexOutOfRange { index: 3, dim: 3 })
        ));
        assert!(matches!(
            LocalFactor::signed(3, &[(1, 1), (1, -1)], 2),
            Err(Error::ZeroFactor)
        ));
        let f = LocalFactor::signed(3, &[(1, 1), (1, 1)], 2).unwrap();
        assert_eq!(f.amplitudes()[1], Cyclotomic::from_int(2, 2));
    }

    #[test]
    fn factor_inner_products() {
        let plus = ket(5, &[(0, 1), (1, 1)]);
        let minus = ket(5, &[(0, 1), (1, -1)]);
        assert!(plus.inner(&minus).unwrap().is_zero());
        assert_eq!(minus.inner(&minus).unwrap(), Cyclotomic::from_int(2, 6));
        let w = |s| root_of_unity(3, s, 6).unwrap();
        let one = Cyclotomic::one(6);
        let e7 = LocalFactor::build(5, &[(2, one.clone()), (3, w(1)), (4, w(2))], 6).unwrap();
        let e8 = LocalFactor::build(5, &[(2, one), (3, w(2)), (4, w(1))], 6).unwrap();
        assert!(e7.inner(&e8).unwrap().is_zero());
        assert!(ket(3, &[(0, 1)]).inner(&ket(4, &[(0, 1)])).is_err());
    }

    #[test]
    fn orthogonality_report_flags_pairs() {
        let s = StateSet::from_parts(
            vec![2, 2],
            2,
            vec![
                ProductState::new("a", vec![ket2(&[(0, 1)]), ket2(&[(0, 1)])]),
                ProductState::new("b", vec![ket2(&[(0, 1)]), ket2(&[(0, 1), (1, 1)])]),
            ],
            None,
        )
        .unwrap();
        let r = s.check_mutual_orthogonality();
        assert_eq!(r.violations.len(), 1);
        assert!(r.violations[0].2.is_one());
        assert!(matches!(
            StateSet::new(s.dims().to_vec(), 2, s.states().to_vec(), None),
            Err(Error::NotOrthogonal(..))
        ));
    }

    fn ket2(terms: &[(usize, i64)]) -> LocalFactor {
        LocalFactor::signed(2, terms, 2).unwrap()
    }

    #[test]
    fn grouping_validates_partitions() {
        let s = StateSet::from_parts(
            vec![2, 2, 2],
            2,
            vec![ProductState::new(
                "x",
                vec![ket2(&[(0, 1)]), ket2(&[(1, 1)]), ket2(&[(0, 1), (1, -1)])],
            )],
            None,
        )
        .unwrap();
        assert!(s.group_parties(&[vec![0], vec![1]]).is_err());
        assert!(s.group_parties(&[vec![0, 1], vec![1, 2]]).is_err());
        assert!(s.group_parties(&[vec![0], vec![], vec![1, 2]]).is_err());
        let g = s.group_parties(&[vec![1, 2], vec![0]]).unwrap();
        assert_eq!(g.dims(), &[4, 2]);
        // |1⟩⊗|0-1⟩ = (0,0,1,-1) with the left party slow
        assert_eq!(g.states()[0].factors[0].support(), vec![2, 3]);
    }

    #[test]
    fn strip_single_state_always_succeeds() {
        let s = StateSet::from_parts(
            vec![2, 3],
            2,
            vec![ProductState::new("x", vec![ket2(&[(0, 1)]), LocalFactor::uniform(3, 3, 2).unwrap()])],
            None,
        )
        .unwrap();
        assert_eq!(s.strip_party(1).unwrap().dims(), &[2]);
        assert_eq!(s.strip_party(0).unwrap().dims(), &[3]);
    }

    #[test]
    fn proportional_factors() {
        let u = ket(3, &[(0, 1), (2, -1)]);
        let w = root_of_unity(3, 1, 6).unwrap();
        let v = u.scaled(&w).unwrap();
        assert!(u.proportionality(&v).is_some());
        assert!(u.proportionality(&ket(3, &[(0, 1), (2, 1)])).is_none());
    }

    #[test]
    fn party_names() {
        assert_eq!(party_name(3, 2), "C");
        assert_eq!(party_name(4, 0), "A1");
    }
}
