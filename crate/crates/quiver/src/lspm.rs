//! Light-weight sparse matrix storage for the encoded RDF matrix.
//!
//! Two compressed layouts back the executor: a row-wise CSR for edges
//! evaluated along their direction and a column-wise CSC for edges evaluated
//! against it. Both drop entries whose predicate is outside the requested
//! keep-set, then drop empty rows (columns) entirely; a prefix "elimination
//! map" of length N+1 keeps O(1) translation from original to reduced
//! indices.

use crate::error::Result;
use crate::ingest::{EntityId, PredicateId, TripleSet};
use std::collections::BTreeSet;
use std::io::{self, Read, Write};

/// Row-wise storage. For original row `i`: non-empty iff
/// `row_map[i+1] - row_map[i] == 1`, in which case its entries live at
/// `row_ptr[row_map[i]] .. row_ptr[row_map[i]+1]` in `vals`/`cols`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LspmCsr {
    pub n: usize,
    /// Elimination prefix map, length N+1 (`Mr` in matrix terms).
    pub row_map: Vec<u32>,
    /// Reduced-row pointers, length R+1 (`Pr`).
    pub row_ptr: Vec<u32>,
    /// Predicate id per nonzero (`Val`).
    pub vals: Vec<PredicateId>,
    /// Original column index per nonzero (`Col`).
    pub cols: Vec<EntityId>,
}

/// Column-wise mirror of [`LspmCsr`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LspmCsc {
    pub n: usize,
    pub col_map: Vec<u32>,
    pub col_ptr: Vec<u32>,
    pub vals: Vec<PredicateId>,
    pub rows: Vec<EntityId>,
}

/// Keep only entries with `val` in `keep`, drop empty rows, store by rows.
/// Within a row, entries are ordered by ascending column, ties by value.
pub fn build_csr(t: &TripleSet, keep: &BTreeSet<PredicateId>) -> LspmCsr {
    let mut per_row: Vec<Vec<(EntityId, PredicateId)>> = vec![Vec::new(); t.n];
    for &(r, c, v) in &t.triples {
        if keep.contains(&v) {
            per_row[r as usize].push((c, v));
        }
    }
    let mut row_map = Vec::with_capacity(t.n + 1);
    row_map.push(0u32);
    let mut row_ptr = vec![0u32];
    let mut vals = Vec::new();
    let mut cols = Vec::new();
    for entries in per_row.iter_mut() {
        let prev = *row_map.last().unwrap();
        if entries.is_empty() {
            row_map.push(prev);
            continue;
        }
        row_map.push(prev + 1);
        entries.sort_unstable();
        for &(c, v) in entries.iter() {
            cols.push(c);
            vals.push(v);
        }
        row_ptr.push(vals.len() as u32);
    }
    LspmCsr { n: t.n, row_map, row_ptr, vals, cols }
}

/// Column-wise counterpart of [`build_csr`]; within a column, entries are
/// ordered by ascending row, ties by value.
pub fn build_csc(t: &TripleSet, keep: &BTreeSet<PredicateId>) -> LspmCsc {
    let mut per_col: Vec<Vec<(EntityId, PredicateId)>> = vec![Vec::new(); t.n];
    for &(r, c, v) in &t.triples {
        if keep.contains(&v) {
            per_col[c as usize].push((r, v));
        }
    }
    let mut col_map = Vec::with_capacity(t.n + 1);
    col_map.push(0u32);
    let mut col_ptr = vec![0u32];
    let mut vals = Vec::new();
    let mut rows = Vec::new();
    for entries in per_col.iter_mut() {
        let prev = *col_map.last().unwrap();
        if entries.is_empty() {
            col_map.push(prev);
            continue;
        }
        col_map.push(prev + 1);
        entries.sort_unstable();
        for &(r, v) in entries.iter() {
            rows.push(r);
            vals.push(v);
        }
        col_ptr.push(vals.len() as u32);
    }
    LspmCsc { n: t.n, col_map, col_ptr, vals, rows }
}

impl LspmCsr {
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Number of surviving (non-empty) rows.
    pub fn reduced_rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn row_exists(&self, orig_row: usize) -> bool {
        orig_row < self.n && self.row_map[orig_row + 1] - self.row_map[orig_row] == 1
    }

    /// Entries of an original row as (col, val), empty if eliminated.
    /// Panics if `orig_row >= n`.
    pub fn row_slice(&self, orig_row: usize) -> Vec<(EntityId, PredicateId)> {
        assert!(orig_row < self.n, "row {orig_row} out of range for n={}", self.n);
        if !self.row_exists(orig_row) {
            return Vec::new();
        }
        let r = self.row_map[orig_row] as usize;
        let (a, b) = (self.row_ptr[r] as usize, self.row_ptr[r + 1] as usize);
        (a..b).map(|k| (self.cols[k], self.vals[k])).collect()
    }

    /// Original ids of non-empty rows, ascending.
    pub fn surviving_rows(&self) -> Vec<EntityId> {
        (0..self.n).filter(|&i| self.row_exists(i)).map(|i| i as EntityId).collect()
    }
}

impl LspmCsc {
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn reduced_cols(&self) -> usize {
        self.col_ptr.len() - 1
    }

    pub fn col_exists(&self, orig_col: usize) -> bool {
        orig_col < self.n && self.col_map[orig_col + 1] - self.col_map[orig_col] == 1
    }

    /// Entries of an original column as (row, val), empty if eliminated.
    /// Panics if `orig_col >= n`.
    pub fn col_slice(&self, orig_col: usize) -> Vec<(EntityId, PredicateId)> {
        assert!(orig_col < self.n, "col {orig_col} out of range for n={}", self.n);
        if !self.col_exists(orig_col) {
            return Vec::new();
        }
        let c = self.col_map[orig_col] as usize;
        let (a, b) = (self.col_ptr[c] as usize, self.col_ptr[c + 1] as usize);
        (a..b).map(|k| (self.rows[k], self.vals[k])).collect()
    }

    pub fn surviving_cols(&self) -> Vec<EntityId> {
        (0..self.n).filter(|&i| self.col_exists(i)).map(|i| i as EntityId).collect()
    }
}

// Binary dump format used by the CLI cache: for each array, a little-endian
// u64 length followed by little-endian u32 elements; `n` is written first as
// a u64 of its own.

fn write_array<W: Write>(w: &mut W, arr: &[u32]) -> io::Result<()> {
    w.write_all(&(arr.len() as u64).to_le_bytes())?;
    for &x in arr {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

fn read_array<R: Read>(r: &mut R) -> io::Result<Vec<u32>> {
    let mut len8 = [0u8; 8];
    r.read_exact(&mut len8)?;
    let len = u64::from_le_bytes(len8) as usize;
    let mut out = Vec::with_capacity(len);
    let mut b4 = [0u8; 4];
    for _ in 0..len {
        r.read_exact(&mut b4)?;
        out.push(u32::from_le_bytes(b4));
    }
    Ok(out)
}

impl LspmCsr {
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        write_array(w, &self.row_map)?;
        write_array(w, &self.row_ptr)?;
        write_array(w, &self.vals)?;
        write_array(w, &self.cols)?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut n8 = [0u8; 8];
        r.read_exact(&mut n8)?;
        let n = u64::from_le_bytes(n8) as usize;
        Ok(LspmCsr {
            n,
            row_map: read_array(r)?,
            row_ptr: read_array(r)?,
            vals: read_array(r)?,
            cols: read_array(r)?,
        })
    }
}

impl LspmCsc {
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        write_array(w, &self.col_map)?;
        write_array(w, &self.col_ptr)?;
        write_array(w, &self.vals)?;
        write_array(w, &self.rows)?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut n8 = [0u8; 8];
        r.read_exact(&mut n8)?;
        let n = u64::from_le_bytes(n8) as usize;
        Ok(LspmCsc {
            n,
            col_map: read_array(r)?,
            col_ptr: read_array(r)?,
            vals: read_array(r)?,
            rows: read_array(r)?,
        })
    }
}
