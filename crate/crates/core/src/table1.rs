//! Regression harness: regenerate each family over a dimension grid, check
//! the closed-form cardinality and the classification, and render a
//! comparison table.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{gen_named, ConstructionSpec, Family};
use crate::verdicts::{classify, GnlType, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    /// Every admissible dimension vector with max dim ≤ 6 and n ≤ 4.
    Small,
    /// Max dim ≤ 7 and n ≤ 5.
    Full,
}

impl Grid {
    fn bounds(self) -> (usize, usize) {
        match self {
            Grid::Small => (6, 4),
            Grid::Full => (7, 5),
        }
    }
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "small" => Ok(Grid::Small),
            "full" => Ok(Grid::Full),
            _ => Err(format!("unknown grid {s:?} (expected small or full)")),
        }
    }
}

/// One family row of the table.
#[derive(Clone, Copy, Debug)]
pub struct FamilyRow {
    pub family: Family,
    pub space: &'static str,
    pub cardinality: &'static str,
    pub expected: GnlType,
}

pub const FAMILY_ROWS: [FamilyRow; 4] = [
    FamilyRow {
        family: Family::Type1Tripartite,
        space: "C^d1⊗C^d2⊗C^d3, 3≤d1−1≤d2≤d3",
        cardinality: "2(d2+d3)−2",
        expected: GnlType::TypeI,
    },
    FamilyRow {
        family: Family::Type1Npartite,
        space: "⊗_{i=1}^n C^di, n≥3, 3≤d1−1≤d2≤…≤dn",
        cardinality: "Σ_{i=2}^n (2di−1)",
        expected: GnlType::TypeI,
    },
    FamilyRow {
        family: Family::Type2Tripartite,
        space: "C^d1⊗C^d2⊗C^d3, 3≤d1≤d2≤d3",
        cardinality: "2(d2+d3)−4",
        expected: GnlType::TypeII,
    },
    FamilyRow {
        family: Family::Type2Npartite,
        space: "⊗_{i=1}^n C^di, n≥4, 3≤d1≤d2≤…≤dn",
        cardinality: "Σ_{i=2}^n (2di−1)",
        expected: GnlType::TypeII,
    },
];

/// Earlier constructions, listed for comparison only (not recomputed).
pub const PRIOR_WORK: [(&str, &str, &str, &str); 7] = [
    ("earlier work", "C^4⊗C^4⊗C^4", "64", "Type I"),
    ("earlier work", "C^3⊗C^3⊗C^3", "27", "Type II"),
    ("earlier work", "C^4⊗C^4⊗C^4", "64", "Type II"),
    ("Li et al.", "C^x⊗C^y⊗C^z, x,z≥3, y≥4", "2x+4y+2z−8", "Type I"),
    ("Rout et al.", "C^4⊗C^3⊗C^3", "14", "Type II"),
    ("Rout et al.", "C^{m+2}⊗(C^3)^{⊗m}", "6m+2", "Type II"),
    ("Rout et al.", "C^6⊗C^5⊗C^5", "42", "Type II"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CellResult {
    pub family: Family,
    pub dims: Vec<usize>,
    pub expected_cardinality: usize,
    pub cardinality: usize,
    pub expected_type: GnlType,
    pub gnl_type: GnlType,
    pub error: Option<String>,
}

impl CellResult {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.cardinality == self.expected_cardinality
            && self.gnl_type == self.expected_type
    }

    pub fn name(&self) -> String {
        ConstructionSpec::new(self.family, self.dims.clone()).to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub grid: Grid,
    pub cells: Vec<CellResult>,
}

impl Table1Report {
    pub fn failures(&self) -> Vec<&CellResult> {
        self.cells.iter().filter(|c| !c.passed()).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<18} {:<42} {:<20} {:<8} cells", "construction", "space", "cardinality", "type");
        for row in FAMILY_ROWS {
            let cells: Vec<&CellResult> = self.cells.iter().filter(|c| c.family == row.family).collect();
            let ok = cells.iter().filter(|c| c.passed()).count();
            let _ = writeln!(
                out,
                "{:<18} {:<42} {:<20} {:<8} {ok}/{} verified",
                row.family.name(),
                row.space,
                row.cardinality,
                type_name(row.expected),
                cells.len()
            );
        }
        for (who, space, card, ty) in PRIOR_WORK {
            let _ = writeln!(out, "{who:<18} {space:<42} {card:<20} {ty:<8} (reference)");
        }
        for f in self.failures() {
            let _ = writeln!(
                out,
                "FAIL {}: cardinality {} (want {}), type {:?} (want {:?}){}",
                f.name(),
                f.cardinality,
                f.expected_cardinality,
                f.gnl_type,
                f.expected_type,
                f.error.as_ref().map(|e| format!(", error: {e}")).unwrap_or_default()
            );
        }
        out
    }
}

fn type_name(t: GnlType) -> &'static str {
    match t {
        GnlType::TypeI => "Type I",
        GnlType::TypeII => "Type II",
        GnlType::Unknown => "Unknown",
    }
}

/// Nondecreasing sequences of length `len` with entries in `lo..=hi`.
fn sorted_sequences(len: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in sorted_sequences(len - 1, first, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every admissible dimension vector for `family` within the grid bounds.
pub fn grid_cells(family: Family, grid: Grid) -> Vec<Vec<usize>> {
    let (max_dim, max_n) = grid.bounds();
    let lens: Vec<usize> = match family {
        Family::Type1Tripartite | Family::Type2Tripartite => vec![3],
        Family::Type1Npartite => (3..=max_n).collect(),
        Family::Type2Npartite => (4..=max_n).collect(),
        Family::Bipartite => vec![2],
        _ => vec![],
    };
    let mut cells = Vec::new();
    for n in lens {
        for d1 in 3..=max_dim {
            for rest in sorted_sequences(n - 1, 3, max_dim) {
                let mut dims = vec![d1];
                dims.extend(rest);
                if ConstructionSpec::new(family, dims.clone()).check_admissible().is_ok() {
                    cells.push(dims);
                }
            }
        }
    }
    cells
}

fn run_cell(family: Family, dims: Vec<usize>, expected_type: GnlType, opts: &SearchOptions) -> CellResult {
    let spec = ConstructionSpec::new(family, dims.clone());
    let expected_cardinality = spec.expected_cardinality();
    let mut cell = CellResult {
        family,
        dims,
        expected_cardinality,
        cardinality: 0,
        expected_type,
        gnl_type: GnlType::Unknown,
        error: None,
    };
    match gen_named(&spec).and_then(|set| {
        let c = classify(&set, opts)?;
        Ok((set.len(), c.gnl_type))
    }) {
        Ok((n, t)) => {
            cell.cardinality = n;
            cell.gnl_type = t;
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

pub fn run_table1(grid: Grid, opts: &SearchOptions) -> Table1Report {
    let jobs: Vec<(Family, Vec<usize>, GnlType)> = FAMILY_ROWS
        .iter()
        .flat_map(|row| {
            grid_cells(row.family, grid)
                .into_iter()
                .map(move |d| (row.family, d, row.expected))
        })
        .collect();
    let cells = jobs
        .into_par_iter()
        .map(|(f, d, t)| run_cell(f, d, t, opts))
        .collect();
    Table1Report { grid, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_cells() {
        let t2 = grid_cells(Family::Type2Tripartite, Grid::Small);
        assert_eq!(t2.len(), 20);
        assert!(t2.contains(&vec![3, 4, 5]));
        let t1 = grid_cells(Family::Type1Tripartite, Grid::Small);
        assert!(t1.contains(&vec![4, 4, 6]));
        assert!(!t1.contains(&vec![3, 4, 5]));
        assert!(t1.iter().all(|d| d[0] >= 4 && d[0] - 1 <= d[1]));
        let t4 = grid_cells(Family::Type2Npartite, Grid::Small);
        assert_eq!(t4.len(), 35);
        assert!(grid_cells(Family::Type1Npartite, Grid::Small).iter().any(|d| d.len() == 3));
    }
}
