//! Exact sparse Gaussian elimination over the rationals.
//!
//! Rows are inserted one at a time and reduced against the pivots found so far,
//! so tall systems (one equation per monomial) never materialize densely.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::scalar::Scalar;

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Row echelon basis of the row space seen so far. Every stored row has a
/// distinct leading column with leading entry 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_of: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot_of: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0;
        loop {
            let next = row.range(cursor..).find(|(c, _)| self.pivot_of.contains_key(c));
            let Some((&col, value)) = next else { break };
            let factor = value.clone();
            for (c, v) in &self.rows[self.pivot_of[&col]] {
                let entry = row.entry(*c).or_insert_with(Scalar::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    row.remove(c);
                }
            }
            cursor = col + 1;
        }
        row
    }

    /// Adds a row; returns true when it was independent of the previous ones.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut row = self.reduce(row);
        let Some((&lead, lead_value)) = row.iter().next() else {
            return false;
        };
        let inv = Scalar::one() / lead_value;
        for v in row.values_mut() {
            *v *= &inv;
        }
        self.pivot_of.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivot_of.keys().copied().collect()
    }

    /// Back substitution for the pivot variables given values of the free ones.
    /// `rhs(row)` supplies the constant term of each pivot row.
    fn back_substitute(&self, x: &mut [Scalar], rhs: impl Fn(&SparseRow) -> Scalar) {
        for (&col, &r) in self.pivot_of.iter().rev() {
            let row = &self.rows[r];
            let mut value = rhs(row);
            for (&c, v) in row.range(col + 1..self.ncols) {
                if !x[c].is_zero() {
                    value -= v * &x[c];
                }
            }
            x[col] = value;
        }
    }

    /// Basis of the null space, one vector per free column (in column order).
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        (0..self.ncols)
            .filter(|c| !self.pivot_of.contains_key(c))
            .map(|free| {
                let mut x = vec![Scalar::zero(); self.ncols];
                x[free] = Scalar::one();
                self.back_substitute(&mut x, |_| Scalar::zero());
                x
            })
            .collect()
    }
}

/// Null space basis of the matrix given by sparse rows.
pub fn kernel(rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(ncols);
    for row in rows {
        ech.insert(row);
    }
    ech.kernel()
}

pub fn rank(rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> usize {
    let mut ech = Echelon::new(ncols);
    for row in rows {
        ech.insert(row);
    }
    ech.rank()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// A particular solution with all free variables set to zero.
    pub values: Vec<Scalar>,
    pub unique: bool,
}

/// Solves `A x = b` for equations given as `(row, rhs)`. Returns `None` when
/// the system is inconsistent.
pub fn solve(
    equations: impl IntoIterator<Item = (SparseRow, Scalar)>,
    ncols: usize,
) -> Option<Solution> {
    // the right-hand side rides along as column `ncols`
    let mut ech = Echelon::new(ncols + 1);
    for (mut row, rhs) in equations {
        if !rhs.is_zero() {
            row.insert(ncols, rhs);
        }
        ech.insert(row);
    }
    if ech.pivot_of.contains_key(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols + 1];
    ech.back_substitute(&mut x, |row| row.get(&ncols).cloned().unwrap_or_else(Scalar::zero));
    x.truncate(ncols);
    Some(Solution { values: x, unique: ech.rank() == ncols })
}

/// Intersection of the column spans of `u` and `v` (both given as lists of
/// sparse column vectors in a common coordinate space). Returns a basis.
pub fn span_intersection(u: &[SparseRow], v: &[SparseRow]) -> Vec<SparseRow> {
    // kernel of [U | -V] in coordinates; each kernel vector (x, y) gives U x
    let mut coords: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (j, col) in u.iter().enumerate() {
        for (&r, val) in col {
            coords.entry(r).or_default().insert(j, val.clone());
        }
    }
    for (j, col) in v.iter().enumerate() {
        for (&r, val) in col {
            coords.entry(r).or_default().insert(u.len() + j, -val.clone());
        }
    }
    let null = kernel(coords.into_values(), u.len() + v.len());
    let mut basis = Echelon::new(usize::MAX);
    let mut out = Vec::new();
    for x in null {
        let mut image = SparseRow::new();
        for (j, col) in u.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (&r, val) in col {
                let e = image.entry(r).or_insert_with(Scalar::zero);
                *e += &x[j] * val;
            }
        }
        image.retain(|_, v| !v.is_zero());
        if basis.insert(image.clone()) {
            out.push(image);
        }
    }
    out
}
