//! Fraction-free Gauss–Jordan elimination over Q(ζ_N).
//!
//! Only ring operations are used. Row updates take the form
//! `row ← p·row − a·pivot_row`, after which the row is rescaled by a
//! rational so its coefficients are coprime integers. Nullspace vectors are
//! read off the reduced rows with products of pivots instead of quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclotomic::{Cyclotomic, Rational};

/// A pivot row of the reduced system.
#[derive(Clone, Debug)]
pub struct Pivot {
    pub column: usize,
    pub row: Vec<Cyclotomic>,
    /// Index of the input row that introduced this pivot.
    pub source: usize,
}

#[derive(Clone, Debug)]
pub struct Elimination {
    pub columns: usize,
    pub pivots: Vec<Pivot>,
}

fn is_zero_row(row: &[Cyclotomic]) -> bool {
    row.iter().all(Cyclotomic::is_zero)
}

/// Rescales by a positive rational so that all coefficients are integers
/// with gcd 1.
pub fn make_primitive(row: &mut [Cyclotomic]) {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for x in row.iter() {
        for c in x.reduced_coeffs() {
            if !c.is_zero() {
                num_gcd = num_gcd.gcd(c.numer());
                den_lcm = den_lcm.lcm(c.denom());
            }
        }
    }
    if num_gcd.is_zero() || (num_gcd.is_one() && den_lcm.is_one()) {
        return;
    }
    let factor = Rational::new(den_lcm, num_gcd);
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = x.scale(&factor);
        }
    }
}

fn combine(p: &Cyclotomic, row: &[Cyclotomic], a: &Cyclotomic, pivot: &[Cyclotomic]) -> Vec<Cyclotomic> {
    row.iter()
        .zip(pivot)
        .map(|(x, y)| match (x.is_zero(), y.is_zero()) {
            (true, true) => x.clone(),
            (false, true) => p * x,
            (true, false) => -&(a * y),
            (false, false) => &(p * x) - &(a * y),
        })
        .collect()
}

impl Elimination {
    pub fn new(columns: usize) -> Self {
        Elimination {
            columns,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots and, if something survives,
    /// adds it as a new pivot. Returns whether the rank grew.
    pub fn push(&mut self, mut row: Vec<Cyclotomic>, source: usize) -> bool {
        debug_assert_eq!(row.len(), self.columns);
        if is_zero_row(&row) {
            return false;
        }
        make_primitive(&mut row);
        for pv in &self.pivots {
            let a = &row[pv.column];
            if a.is_zero() {
                continue;
            }
            let a = a.clone();
            row = combine(&pv.row[pv.column], &row, &a, &pv.row);
            make_primitive(&mut row);
        }
        let Some(column) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let p = row[column].clone();
        for pv in &mut self.pivots {
            let a = &pv.row[column];
            if a.is_zero() {
                continue;
            }
            let a = a.clone();
            pv.row = combine(&p, &pv.row, &a, &row);
            make_primitive(&mut pv.row);
        }
        self.pivots.push(Pivot {
            column,
            row,
            source,
        });
        true
    }

    /// Basis of the right nullspace of the rows pushed so far, one vector
    /// per free column, in increasing free-column order.
    pub fn nullspace(&self, order: u32) -> Vec<Vec<Cyclotomic>> {
        let mut is_pivot = vec![None; self.columns];
        for (k, pv) in self.pivots.iter().enumerate() {
            is_pivot[pv.column] = Some(k);
        }
        let mut basis = Vec::new();
        for free in (0..self.columns).filter(|&c| is_pivot[c].is_none()) {
            let involved: Vec<&Pivot> = self
                .pivots
                .iter()
                .filter(|pv| !pv.row[free].is_zero())
                .collect();
            let mut v = vec![Cyclotomic::zero(order); self.columns];
            v[free] = involved
                .iter()
                .fold(Cyclotomic::one(order), |acc, pv| &acc * &pv.row[pv.column]);
            for (k, pv) in involved.iter().enumerate() {
                let others = involved
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .fold(Cyclotomic::one(order), |acc, (_, q)| &acc * &q.row[q.column]);
                v[pv.column] = -&(&others * &pv.row[free]);
            }
            normalize_vector(&mut v);
            basis.push(v);
        }
        basis
    }
}

/// Primitive form, then scaled so that the first nonzero entry is 1 when
/// that entry is rational.
pub fn normalize_vector(v: &mut [Cyclotomic]) {
    make_primitive(v);
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if let Some(q) = first.as_rational() {
            let inv = q.recip();
            for x in v.iter_mut() {
                *x = x.scale(&inv);
            }
        }
    }
}

/// Reduces a full row list. Rows are visited sparsest first (stable on ties);
/// elimination stops early once the rank reaches `columns − min_nullity`.
pub fn eliminate(rows: &[Vec<Cyclotomic>], columns: usize, min_nullity: usize) -> Elimination {
    let mut order: Vec<usize> = (0..rows.len())
        .filter(|&i| !is_zero_row(&rows[i]))
        .collect();
    order.sort_by_key(|&i| rows[i].iter().filter(|x| !x.is_zero()).count());
    let cap = columns.saturating_sub(min_nullity);
    let mut elim = Elimination::new(columns);
    for i in order {
        if elim.rank() >= cap {
            break;
        }
        elim.push(rows[i].clone(), i);
    }
    elim
}

/// Whether `v` satisfies every row exactly.
pub fn annihilates(rows: &[Vec<Cyclotomic>], v: &[Cyclotomic]) -> bool {
    rows.iter().all(|row| {
        let mut acc = Cyclotomic::zero(v[0].order());
        for (a, x) in row.iter().zip(v) {
            if !a.is_zero() && !x.is_zero() {
                acc = &acc + &(a * x);
            }
        }
        acc.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Cyclotomic>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Cyclotomic::from_int(x, 2)).collect())
            .collect()
    }

    #[test]
    fn rational_rank_and_nullspace() {
        let rows = int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let e = eliminate(&rows, 3, 0);
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace(2);
        assert_eq!(ns.len(), 1);
        assert!(annihilates(&rows, &ns[0]));
        // (1, 1, -1) after normalization
        let want: Vec<_> = [1, 1, -1].iter().map(|&x| Cyclotomic::from_int(x, 2)).collect();
        assert_eq!(ns[0], want);
    }

    #[test]
    fn cyclotomic_vandermonde_rows() {
        // x1 + w x2 + w² x3 = 0, x1 + w² x2 + w x3 = 0 ⇒ x1 = x2 = x3
        let w = |k| Cyclotomic::zeta_power(k, 3);
        let rows = vec![vec![w(0), w(1), w(2)], vec![w(0), w(2), w(1)]];
        let e = eliminate(&rows, 3, 0);
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace(3);
        assert_eq!(ns[0], vec![w(0), w(0), w(0)]);
        // adding the all-ones row kills everything
        let mut full = rows.clone();
        full.push(vec![w(0), w(0), w(0)]);
        assert_eq!(eliminate(&full, 3, 0).rank(), 3);
    }

    #[test]
    fn early_stop_respects_min_nullity() {
        let rows = int_rows(&[&[1, -1, 0], &[0, 1, -1], &[1, 0, -1], &[2, -1, -1]]);
        let e = eliminate(&rows, 3, 1);
        assert_eq!(e.rank(), 2);
        assert!(annihilates(&rows, &e.nullspace(2)[0]));
    }

    #[test]
    fn empty_system_is_everything() {
        let e = eliminate(&[], 4, 0);
        assert_eq!(e.nullspace(2).len(), 4);
    }
}
