//! Orthogonality-preserving local measurements.
//!
//! For a party (or a group of parties merged into one) with local dimension
//! D, a POVM element E must satisfy ⟨ψ_i| E ⊗ I |ψ_j⟩ = 0 for every ordered
//! pair of distinct states. Treating the D² entries of E as unknowns gives a
//! linear system over Q(ζ_N); its solution space always contains the
//! identity. The measurement is forced to be trivial exactly when that space
//! is one-dimensional.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cyclotomic::{modulus_upper_bound, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::linalg::{self, annihilates};
use crate::states::{LocalFactor, StateSet};

/// Square matrix over Q(ζ_N), row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    dim: usize,
    entries: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn from_entries(dim: usize, entries: Vec<Cyclotomic>) -> Result<Self> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let order = entries[0].order();
        if entries.iter().any(|e| e.order() != order) {
            return Err(Error::DimensionMismatch("mixed cyclotomic orders".into()));
        }
        Ok(CycloMatrix { dim, entries })
    }

    pub fn identity(dim: usize, order: u32) -> Self {
        let mut entries = vec![Cyclotomic::zero(order); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Cyclotomic::one(order);
        }
        CycloMatrix { dim, entries }
    }

    /// |k⟩⟨k| for each k in `indices`, summed.
    pub fn projector(dim: usize, indices: &[usize], order: u32) -> Self {
        let mut m = Self::from_fn(dim, order, |_, _| Cyclotomic::zero(order));
        for &k in indices {
            m.entries[k * dim + k] = Cyclotomic::one(order);
        }
        m
    }

    fn from_fn(dim: usize, _order: u32, f: impl Fn(usize, usize) -> Cyclotomic) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        CycloMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.entries[0].order()
    }

    pub fn get(&self, r: usize, c: usize) -> &Cyclotomic {
        &self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, self.order(), |r, c| self.get(c, r).conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, self.order(), |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, self.order(), |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn scale(&self, s: &Cyclotomic) -> Self {
        Self::from_fn(self.dim, self.order(), |r, c| self.get(r, c) * s)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self::from_fn(self.dim, self.order(), |r, c| self.get(r, c).scale(q))
    }

    pub fn lift(&self, order: u32) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.lift(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|r| (r..self.dim).all(|c| *self.get(r, c) == self.get(c, r).conj()))
    }

    /// True when the matrix equals λ·I for some λ (including 0).
    pub fn is_scalar(&self) -> bool {
        let d = self.get(0, 0);
        (0..self.dim).all(|r| {
            (0..self.dim).all(|c| {
                if r == c {
                    self.get(r, c) == d
                } else {
                    self.get(r, c).is_zero()
                }
            })
        })
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |r, c| self.get(r, c).to_complex())
    }
}

/// Hermitian operator on one (possibly grouped) party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianOperator(CycloMatrix);

impl HermitianOperator {
    pub fn new(m: CycloMatrix) -> Result<Self> {
        if !m.is_hermitian() {
            return Err(Error::Internal("operator is not Hermitian".into()));
        }
        Ok(HermitianOperator(m))
    }

    pub fn matrix(&self) -> &CycloMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRow {
    /// Indices into the set's state list.
    pub pair: (usize, usize),
    /// Coefficient of E[r][c] at index r·D + c.
    pub coefficients: Vec<Cyclotomic>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub party_group: Vec<usize>,
    pub unknown_dim: usize,
    pub order: u32,
    pub labels: Vec<String>,
    pub rows: Vec<ConstraintRow>,
}

impl ConstraintSystem {
    /// Whether the D×D matrix `e` satisfies every row (lifting orders as needed).
    pub fn satisfied_by(&self, e: &CycloMatrix) -> Result<bool> {
        if e.dim() != self.unknown_dim {
            return Err(Error::DimensionMismatch(format!(
                "operator dim {} vs unknown dim {}",
                e.dim(),
                self.unknown_dim
            )));
        }
        let order = num_integer::lcm(self.order, e.order());
        let e = e.lift(order)?;
        let rows = self
            .rows
            .iter()
            .map(|r| r.coefficients.iter().map(|c| c.lift(order)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(annihilates(&rows, e.entries()))
    }

    fn dense_rows(&self) -> Vec<Vec<Cyclotomic>> {
        self.rows.iter().map(|r| r.coefficients.clone()).collect()
    }
}

/// One eliminated unknown and the constraint pair whose row introduced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub unknown: (usize, usize),
    pub pair: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OplmReport {
    pub party_group: Vec<usize>,
    pub unknown_dim: usize,
    pub solution_dim: usize,
    pub basis: Vec<CycloMatrix>,
    pub trivial: bool,
    pub witness: Option<HermitianOperator>,
    pub trace: Vec<TraceEntry>,
}

fn validate_group(set: &StateSet, party_group: &[usize]) -> Result<()> {
    let mut seen = vec![false; set.parties()];
    if party_group.is_empty() {
        return Err(Error::InvalidParties("empty party group".into()));
    }
    for &p in party_group {
        if p >= set.parties() || seen[p] {
            return Err(Error::InvalidParties(format!("bad party group {party_group:?}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Builds the orthogonality-preservation rows for E acting on `party_group`.
pub fn assemble(set: &StateSet, party_group: &[usize]) -> Result<ConstraintSystem> {
    validate_group(set, party_group)?;
    if let Some((a, b, _)) = set.check_mutual_orthogonality().violations.into_iter().next() {
        return Err(Error::NotOrthogonal(a, b));
    }
    let order = set.ambient_order();
    let others: Vec<usize> = (0..set.parties()).filter(|p| !party_group.contains(p)).collect();
    let local: Vec<LocalFactor> = set
        .states()
        .iter()
        .map(|s| {
            let first = s.factors[party_group[0]].clone();
            party_group[1..]
                .iter()
                .fold(first, |acc, &p| acc.kron(&s.factors[p]))
        })
        .collect();
    let dim = local.first().map_or_else(
        || party_group.iter().map(|&p| set.dims()[p]).product(),
        LocalFactor::dim,
    );
    let conj_local: Vec<Vec<Cyclotomic>> = local
        .iter()
        .map(|u| u.amplitudes().iter().map(Cyclotomic::conj).collect())
        .collect();

    let states = set.states();
    let mut rows = Vec::with_capacity(states.len() * states.len().saturating_sub(1));
    for (i, si) in states.iter().enumerate() {
        for (j, sj) in states.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut scalar = Cyclotomic::one(order);
            for &p in &others {
                let f = si.factors[p].inner(&sj.factors[p])?;
                scalar = &scalar * &f;
                if scalar.is_zero() {
                    break;
                }
            }
            let mut coefficients = vec![Cyclotomic::zero(order); dim * dim];
            if !scalar.is_zero() {
                for (r, ur) in conj_local[i].iter().enumerate() {
                    if ur.is_zero() {
                        continue;
                    }
                    let left = ur * &scalar;
                    for (c, vc) in local[j].amplitudes().iter().enumerate() {
                        if !vc.is_zero() {
                            coefficients[r * dim + c] = &left * vc;
                        }
                    }
                }
            }
            rows.push(ConstraintRow {
                pair: (i, j),
                coefficients,
            });
        }
    }
    Ok(ConstraintSystem {
        party_group: party_group.to_vec(),
        unknown_dim: dim,
        order,
        labels: set.labels().iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

/// Exact solution space of the constraints, with a witness when nontrivial.
pub fn solution_space(cs: &ConstraintSystem) -> Result<OplmReport> {
    let d = cs.unknown_dim;
    let columns = d * d;
    // the identity is always a solution, so rank ≤ D² − 1
    let elim = linalg::eliminate(&cs.dense_rows(), columns, 1);
    let vectors = elim.nullspace(cs.order);
    let basis: Vec<CycloMatrix> = vectors
        .into_iter()
        .map(|v| CycloMatrix::from_entries(d, v))
        .collect::<Result<_>>()?;
    let trace = elim
        .pivots
        .iter()
        .map(|pv| {
            let (i, j) = cs.rows[pv.source].pair;
            TraceEntry {
                unknown: (pv.column / d, pv.column % d),
                pair: (cs.labels[i].clone(), cs.labels[j].clone()),
            }
        })
        .collect();
    let solution_dim = basis.len();
    if solution_dim == 0 {
        return Err(Error::Internal("identity missing from the solution space".into()));
    }
    let trivial = solution_dim == 1;
    let mut report = OplmReport {
        party_group: cs.party_group.clone(),
        unknown_dim: d,
        solution_dim,
        basis,
        trivial,
        witness: None,
        trace,
    };
    if !trivial {
        report.witness = Some(witness(&report)?);
    }
    Ok(report)
}

/// `assemble` followed by `solution_space`.
pub fn party_report(set: &StateSet, party_group: &[usize]) -> Result<OplmReport> {
    solution_space(&assemble(set, party_group)?)
}

/// A purely imaginary nonzero element, lifting to Q(i) when the field is real.
fn imaginary_unit(order: u32) -> Cyclotomic {
    let order = if order <= 2 { 4 } else { order };
    let z = Cyclotomic::zeta_power(1, order);
    &z - &z.conj()
}

/// Hermitian, non-scalar element of a nontrivial solution space.
pub fn witness(report: &OplmReport) -> Result<HermitianOperator> {
    if report.solution_dim < 2 {
        return Err(Error::Internal("witness requested for a trivial report".into()));
    }
    for b in &report.basis {
        if b.is_scalar() {
            continue;
        }
        let adj = b.adjoint();
        let sym = b.add(&adj);
        if !sym.is_scalar() {
            return HermitianOperator::new(normalized(sym));
        }
        let tau = imaginary_unit(b.order());
        let anti = b.lift(tau.order())?.sub(&adj.lift(tau.order())?);
        let h = anti.scale(&tau);
        if !h.is_scalar() {
            return HermitianOperator::new(normalized(h));
        }
    }
    Err(Error::Internal(
        "solution space is not closed under adjoints".into(),
    ))
}

/// Shifts by the most common diagonal value (the result stays in the
/// solution space since I does), then makes the entries primitive with a
/// positive leading rational.
fn normalized(m: CycloMatrix) -> CycloMatrix {
    let dim = m.dim();
    let diag: Vec<&Cyclotomic> = (0..dim).map(|k| m.get(k, k)).collect();
    let shift = diag
        .iter()
        .max_by_key(|d| (diag.iter().filter(|e| **e == **d).count(), std::cmp::Reverse(diag.iter().position(|e| e == *d))))
        .map(|d| (*d).clone())
        .expect("nonempty matrix");
    let mut v = m.sub(&CycloMatrix::identity(dim, m.order()).scale(&shift)).entries;
    linalg::make_primitive(&mut v);
    if let Some(q) = v.iter().find(|x| !x.is_zero()).and_then(|x| x.as_rational()) {
        if q < &Rational::zero() {
            v = v.iter().map(|x| -x).collect();
        }
    }
    CycloMatrix { dim, entries: v }
}

/// Two-outcome POVM {½(I + εH), ½(I − εH)} built from a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPovm {
    pub epsilon: Rational,
    pub plus: CycloMatrix,
    pub minus: CycloMatrix,
}

/// ε = 1/(1 + ρ̄) with ρ̄ a Gershgorin bound on the spectral radius of H,
/// so both elements are positive semidefinite. The elements are checked
/// against every constraint row.
pub fn povm_from_witness(h: &HermitianOperator, cs: &ConstraintSystem) -> Result<WitnessPovm> {
    let m = h.matrix();
    let dim = m.dim();
    let rho = (0..dim)
        .map(|r| {
            (0..dim).fold(Rational::zero(), |acc, c| acc + modulus_upper_bound(m.get(r, c)))
        })
        .max()
        .unwrap_or_else(Rational::zero);
    let epsilon = (Rational::one() + rho).recip();
    let half = Rational::new(1.into(), 2.into());
    let id = CycloMatrix::identity(dim, m.order());
    let eh = m.scale_rational(&epsilon);
    let plus = id.add(&eh).scale_rational(&half);
    let minus = id.sub(&eh).scale_rational(&half);
    for e in [&plus, &minus] {
        if !cs.satisfied_by(e)? {
            return Err(Error::Internal("POVM element violates a constraint row".into()));
        }
    }
    Ok(WitnessPovm {
        epsilon,
        plus,
        minus,
    })
}

/// Complex row matrix of the system (zero rows dropped).
pub fn float_rows(cs: &ConstraintSystem) -> DMatrix<Complex64> {
    let nz: Vec<&ConstraintRow> = cs
        .rows
        .iter()
        .filter(|r| r.coefficients.iter().any(|c| !c.is_zero()))
        .collect();
    let cols = cs.unknown_dim * cs.unknown_dim;
    DMatrix::from_fn(nz.len(), cols, |i, j| nz[i].coefficients[j].to_complex())
}

/// Nullspace dimension from singular values, counting those at or below
/// `tol`·σ_max as zero.
pub fn float_solution_dim(cs: &ConstraintSystem, tol: f64) -> usize {
    let cols = cs.unknown_dim * cs.unknown_dim;
    let a = float_rows(cs);
    if a.nrows() == 0 {
        return cols;
    }
    let sv = a.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return cols;
    }
    let rank = sv.iter().filter(|&&s| s > tol * smax).count();
    cols - rank
}
