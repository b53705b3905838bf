//! Reference implementation of the AND/OR matrix algebra on small dense
//! matrices. Everything here is intentionally naive — plain scans over an
//! n×n grid — and serves as the executable definition the production
//! executor is tested against.
//!
//! The semiring replaces arithmetic `×`/`+` with logical AND/OR, so a
//! matrix-vector product against a constant-`p` vector asks "does predicate
//! `p` occur in this row", and a diagonal-`p` matrix product marks the
//! positions where a cell equals `p`. Diagonal selector operands are never
//! materialized; they exist only to phrase selection as multiplication.

use crate::error::{Error, Result};
use crate::ingest::{EntityId, PredicateId, TripleSet};
use std::collections::BTreeSet;

/// Square predicate matrix. A cell holds the (possibly empty) set of
/// predicate ids between subject `i` and object `j` — RDF is a multigraph,
/// so "A(i,j) = p" is read as "some entry at (i,j) has value p".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    cells: Vec<Vec<PredicateId>>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, cells: vec![Vec::new(); n * n] }
    }

    /// Build from single-valued rows, 0 meaning an empty cell.
    pub fn from_rows(rows: &[&[PredicateId]]) -> Self {
        let n = rows.len();
        let mut m = DenseMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &p) in row.iter().enumerate() {
                if p != 0 {
                    m.insert(i, j, p);
                }
            }
        }
        m
    }

    pub fn from_triples(t: &TripleSet) -> Self {
        let mut m = DenseMatrix::zeros(t.n);
        for &(r, c, v) in &t.triples {
            m.insert(r as usize, c as usize, v);
        }
        m
    }

    pub fn insert(&mut self, i: usize, j: usize, p: PredicateId) {
        let cell = &mut self.cells[i * self.n + j];
        if !cell.contains(&p) {
            cell.push(p);
            cell.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has(&self, i: usize, j: usize, p: PredicateId) -> bool {
        self.cells[i * self.n + j].contains(&p)
    }

    pub fn cell(&self, i: usize, j: usize) -> &[PredicateId] {
        &self.cells[i * self.n + j]
    }
}

/// Fixed-length bit vector, the result shape of presence queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { bits: vec![false; len] }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        BitVector { bits: bits.iter().map(|&b| b != 0).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

/// Sparse 0/1 matrix marking candidate (subject, object) bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BindingMatrix {
    pub n: usize,
    pub nonzeros: BTreeSet<(EntityId, EntityId)>,
}

impl BindingMatrix {
    pub fn new(n: usize) -> Self {
        BindingMatrix { n, nonzeros: BTreeSet::new() }
    }

    pub fn from_pairs(n: usize, pairs: &[(EntityId, EntityId)]) -> Self {
        BindingMatrix { n, nonzeros: pairs.iter().copied().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.nonzeros.is_empty()
    }
}

/// Which side of the matrix a presence query scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Row,
    Column,
}

/// Edge direction relative to a center vertex in a grouped evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// Copy the selected rows, zeroing everything else — the effect of
/// multiplying by a one-hot diagonal selector from the left.
pub fn select_rows(a: &DenseMatrix, rows: &BTreeSet<usize>) -> Result<DenseMatrix> {
    check_indices(rows, a.n)?;
    let mut out = DenseMatrix::zeros(a.n);
    for &i in rows {
        for j in 0..a.n {
            for &p in a.cell(i, j) {
                out.insert(i, j, p);
            }
        }
    }
    Ok(out)
}

/// Column counterpart of [`select_rows`] (diagonal selector from the right).
pub fn select_cols(a: &DenseMatrix, cols: &BTreeSet<usize>) -> Result<DenseMatrix> {
    check_indices(cols, a.n)?;
    let mut out = DenseMatrix::zeros(a.n);
    for i in 0..a.n {
        for &j in cols {
            for &p in a.cell(i, j) {
                out.insert(i, j, p);
            }
        }
    }
    Ok(out)
}

fn check_indices(idx: &BTreeSet<usize>, n: usize) -> Result<()> {
    for &i in idx {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
    }
    Ok(())
}

/// Bit `i` is set iff predicate `p` occurs somewhere in row `i`
/// (orientation = Row) or column `i` (orientation = Column): the semiring
/// product of A (or its transpose) with the all-`p` vector.
pub fn rows_with_predicate(a: &DenseMatrix, p: PredicateId, orientation: Orientation) -> BitVector {
    let mut v = BitVector::zeros(a.n);
    for i in 0..a.n {
        let hit = (0..a.n).any(|j| match orientation {
            Orientation::Row => a.has(i, j, p),
            Orientation::Column => a.has(j, i, p),
        });
        v.set(i, hit);
    }
    v
}

/// All positions where `p` occurs: the product of the all-`p` diagonal with A.
pub fn predicate_positions(a: &DenseMatrix, p: PredicateId) -> BindingMatrix {
    let mut m = BindingMatrix::new(a.n);
    for i in 0..a.n {
        for j in 0..a.n {
            if a.has(i, j, p) {
                m.nonzeros.insert((i as EntityId, j as EntityId));
            }
        }
    }
    m
}

pub fn vec_and(x: &BitVector, y: &BitVector) -> Result<BitVector> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let mut out = BitVector::zeros(x.len());
    for i in 0..x.len() {
        out.set(i, x.get(i) && y.get(i));
    }
    Ok(out)
}

pub fn vec_or(x: &BitVector, y: &BitVector) -> Result<BitVector> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let mut out = BitVector::zeros(x.len());
    for i in 0..x.len() {
        out.set(i, x.get(i) || y.get(i));
    }
    Ok(out)
}

/// Evaluate a single triple pattern `?x p ?y`: identical to
/// [`predicate_positions`], kept as a named operation because it is the unit
/// the conjunctive evaluations build on.
pub fn eval_single_edge(a: &DenseMatrix, p: PredicateId) -> BindingMatrix {
    predicate_positions(a, p)
}

/// Evaluate `?y p ?z` given the bindings of `y` already captured as the
/// column support of `m_xy`: fold `m_xy`'s columns into a binding vector,
/// then match `p` on the selected rows only.
pub fn eval_chained_edge(
    m_xy: &BindingMatrix,
    a: &DenseMatrix,
    p_yz: PredicateId,
) -> Result<BindingMatrix> {
    if m_xy.n != a.n {
        return Err(Error::LengthMismatch { left: m_xy.n, right: a.n });
    }
    let mut v_y = BitVector::zeros(a.n);
    for &(_, y) in &m_xy.nonzeros {
        v_y.set(y as usize, true);
    }
    let mut out = BindingMatrix::new(a.n);
    for i in v_y.ones() {
        for j in 0..a.n {
            if a.has(i, j, p_yz) {
                out.nonzeros.insert((i as EntityId, j as EntityId));
            }
        }
    }
    Ok(out)
}

/// Grouped incident-edge evaluation: AND together the per-edge presence
/// vectors of every edge incident to the center (row presence for outgoing,
/// column presence for incoming), then emit per-edge binding matrices
/// restricted to the surviving center indices.
pub fn grouped_eval(
    a: &DenseMatrix,
    incident: &[(PredicateId, Direction)],
) -> Result<(BitVector, Vec<BindingMatrix>)> {
    if incident.is_empty() {
        return Err(Error::InvalidQuery("grouped evaluation needs at least one edge".into()));
    }
    let mut v = BitVector::from_bits(&vec![1u8; a.n]);
    for &(p, dir) in incident {
        let per_edge = match dir {
            Direction::Out => rows_with_predicate(a, p, Orientation::Row),
            Direction::In => rows_with_predicate(a, p, Orientation::Column),
        };
        v = vec_and(&v, &per_edge)?;
    }
    let mut matrices = Vec::with_capacity(incident.len());
    for &(p, dir) in incident {
        let mut m = BindingMatrix::new(a.n);
        for i in v.ones() {
            for j in 0..a.n {
                match dir {
                    Direction::Out if a.has(i, j, p) => {
                        m.nonzeros.insert((i as EntityId, j as EntityId));
                    }
                    Direction::In if a.has(j, i, p) => {
                        m.nonzeros.insert((j as EntityId, i as EntityId));
                    }
                    _ => {}
                }
            }
        }
        matrices.push(m);
    }
    Ok((v, matrices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    /// The 3×3 letter matrix used by every selection example, letters a..i
    /// encoded as 1..9.
    pub(crate) fn letters() -> DenseMatrix {
        DenseMatrix::from_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])
    }

    #[test]
    fn row_selection_keeps_rows_0_and_2() {
        let a = letters();
        let sel = select_rows(&a, &[0usize, 2].into_iter().collect()).unwrap();
        let expect = DenseMatrix::from_rows(&[&[1, 2, 3], &[0, 0, 0], &[7, 8, 9]]);
        assert_eq!(sel, expect);
    }

    #[test]
    fn column_selection_keeps_col_2() {
        let a = letters();
        let sel = select_cols(&a, &[2usize].into_iter().collect()).unwrap();
        let expect = DenseMatrix::from_rows(&[&[0, 0, 3], &[0, 0, 6], &[0, 0, 9]]);
        assert_eq!(sel, expect);
    }

    #[test]
    fn full_selection_is_identity() {
        let a = letters();
        let all: BTreeSet<usize> = (0..3).collect();
        assert_eq!(select_rows(&a, &all).unwrap(), a);
        assert_eq!(select_cols(&a, &all).unwrap(), a);
    }

    #[test]
    fn selection_rejects_out_of_range() {
        let a = letters();
        assert!(select_rows(&a, &[3usize].into_iter().collect()).is_err());
    }

    #[test]
    fn presence_of_b_by_row_and_column() {
        let a = letters();
        let b = 2;
        assert_eq!(rows_with_predicate(&a, b, Orientation::Row), BitVector::from_bits(&[1, 0, 0]));
        assert_eq!(
            rows_with_predicate(&a, b, Orientation::Column),
            BitVector::from_bits(&[0, 1, 0])
        );
        let zero = DenseMatrix::zeros(3);
        assert_eq!(rows_with_predicate(&zero, b, Orientation::Row), BitVector::zeros(3));
    }

    #[test]
    fn positions_of_c() {
        let a = letters();
        let m = predicate_positions(&a, 3);
        assert_eq!(m, BindingMatrix::from_pairs(3, &[(0, 2)]));
        assert!(predicate_positions(&a, 42).is_empty());
    }

    #[test]
    fn vector_and_or() {
        let x = BitVector::from_bits(&[1, 0, 1]);
        let y = BitVector::from_bits(&[0, 0, 1]);
        assert_eq!(vec_and(&x, &y).unwrap(), BitVector::from_bits(&[0, 0, 1]));
        assert_eq!(vec_or(&x, &y).unwrap(), BitVector::from_bits(&[1, 0, 1]));
        assert_eq!(vec_and(&x, &x).unwrap(), x);
        assert_eq!(vec_or(&x, &x).unwrap(), x);
        assert!(vec_and(&x, &BitVector::zeros(2)).is_err());
    }

    #[test]
    fn single_edge_on_fixture() {
        let (_, tset) = fixture::encoded();
        let a = DenseMatrix::from_triples(&tset);
        // actor(2): both actor entries leave Product0 (entity 2)
        let m = eval_single_edge(&a, 2);
        assert_eq!(m, BindingMatrix::from_pairs(8, &[(2, 0), (2, 5)]));
        // director(3): all five director entries
        let m = eval_single_edge(&a, 3);
        assert_eq!(
            m,
            BindingMatrix::from_pairs(8, &[(2, 1), (2, 4), (6, 3), (6, 5), (7, 5)])
        );
        assert!(eval_single_edge(&DenseMatrix::zeros(0), 1).is_empty());
        assert!(eval_single_edge(&a, 9).is_empty());
    }

    #[test]
    fn chained_edge_on_fixture() {
        let (_, tset) = fixture::encoded();
        let a = DenseMatrix::from_triples(&tset);
        // y bound to 1 only: follows leaving row 1 lands on 0
        let m_xy = BindingMatrix::from_pairs(8, &[(2, 1)]);
        let m = eval_chained_edge(&m_xy, &a, 1).unwrap();
        assert_eq!(m, BindingMatrix::from_pairs(8, &[(1, 0)]));
        // empty input stays empty
        let empty = BindingMatrix::new(8);
        assert!(eval_chained_edge(&empty, &a, 1).unwrap().is_empty());
        // actor positions chain into follows rows 0 and 5
        let m_xy = BindingMatrix::from_pairs(8, &[(2, 0), (2, 5)]);
        let m = eval_chained_edge(&m_xy, &a, 1).unwrap();
        assert_eq!(m, BindingMatrix::from_pairs(8, &[(0, 1), (5, 1)]));
    }

    #[test]
    fn grouped_eval_two_out_edges() {
        let (_, tset) = fixture::encoded();
        let a = DenseMatrix::from_triples(&tset);
        // center with out-edges actor and director: only Product0 carries both
        let (v, ms) =
            grouped_eval(&a, &[(2, Direction::Out), (3, Direction::Out)]).unwrap();
        assert_eq!(v.ones(), vec![2]);
        assert_eq!(ms[0], BindingMatrix::from_pairs(8, &[(2, 0), (2, 5)]));
        assert_eq!(ms[1], BindingMatrix::from_pairs(8, &[(2, 1), (2, 4)]));
    }

    #[test]
    fn grouped_eval_mixed_directions() {
        let (_, tset) = fixture::encoded();
        let a = DenseMatrix::from_triples(&tset);
        // in-director AND in-follows AND out-follows:
        //   col presence of 3 = {1,3,4,5}, col presence of 1 = {0,1,5},
        //   row presence of 1 = {0,1,4,5}  =>  {1,5}
        let (v, _) = grouped_eval(
            &a,
            &[(3, Direction::In), (1, Direction::In), (1, Direction::Out)],
        )
        .unwrap();
        assert_eq!(v.ones(), vec![1, 5]);
    }

    #[test]
    fn grouped_eval_single_edge_degenerates() {
        let (_, tset) = fixture::encoded();
        let a = DenseMatrix::from_triples(&tset);
        let (v, ms) = grouped_eval(&a, &[(2, Direction::Out)]).unwrap();
        assert_eq!(ms[0], eval_single_edge(&a, 2));
        assert_eq!(v.ones(), vec![2]);
        assert!(grouped_eval(&a, &[]).is_err());
    }
}
