//! Sparse exact linear algebra: vectors, semi-echelon spans, kernels and solving.

use std::collections::BTreeMap;

use crate::field::{Field, FieldElement};

/// Sparse vector as `(index, coefficient)` pairs, indices strictly increasing, no zeros.
pub type SparseVec = Vec<(usize, FieldElement)>;

pub fn unit(i: usize, field: Field) -> SparseVec {
    vec![(i, field.one())]
}

pub fn scale(v: &SparseVec, c: &FieldElement) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, a)| (*i, a * c)).collect()
}

/// `a + c * b`.
pub fn add_scaled(a: &SparseVec, c: &FieldElement, b: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let s = &a[i].1 + &(c * &b[j].1);
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn add(a: &SparseVec, b: &SparseVec, field: Field) -> SparseVec {
    add_scaled(a, &field.one(), b)
}

pub fn from_map(m: BTreeMap<usize, FieldElement>) -> SparseVec {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn accumulate(work: &mut BTreeMap<usize, FieldElement>, c: &FieldElement, v: &SparseVec) {
    for (j, a) in v {
        let t = c * a;
        match work.get_mut(j) {
            Some(e) => {
                *e = &*e + &t;
                if e.is_zero() {
                    work.remove(j);
                }
            }
            None => {
                work.insert(*j, t);
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

/// A subspace of `field^dim` held as rows with distinct leading indices, each leading
/// coefficient 1. Rows may carry a tag vector recording how they were produced, so that
/// reductions can report the combination used.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<Row>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field, dim: usize) -> Self {
        Echelon { field, dim, rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn from_vectors(field: Field, dim: usize, vs: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new(field, dim);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|r| &r.vec)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    fn reduce_work(&self, v: &SparseVec, want_comb: bool) -> (SparseVec, SparseVec) {
        let mut work: BTreeMap<usize, FieldElement> = v.iter().cloned().collect();
        let mut comb: BTreeMap<usize, FieldElement> = BTreeMap::new();
        let mut cursor = 0usize;
        loop {
            let hit = work
                .range(cursor..)
                .find_map(|(i, c)| self.pivot_row.get(i).map(|r| (*i, *r, c.clone())));
            let Some((idx, r, c)) = hit else { break };
            let row = &self.rows[r];
            accumulate(&mut work, &-&c, &row.vec);
            if want_comb {
                accumulate(&mut comb, &c, &row.tag);
            }
            cursor = idx + 1;
        }
        (from_map(work), from_map(comb))
    }

    /// Remainder of `v` after reduction; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_work(v, false).0
    }

    /// Remainder and the tag combination `c` with `v = remainder + sum c_k * (row with tag k)`.
    pub fn reduce_with_tags(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        self.reduce_work(v, true)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_all<'a>(&self, vs: impl IntoIterator<Item = &'a SparseVec>) -> bool {
        vs.into_iter().all(|v| self.contains(v))
    }

    fn push_reduced(&mut self, rem: SparseVec, tag: SparseVec) {
        let (p, lead) = rem[0].clone();
        let inv = lead.inv().expect("nonzero pivot");
        let vec = scale(&rem, &inv);
        let tag = scale(&tag, &inv);
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(Row { vec, tag });
    }

    /// Adds `v` to the span; returns true if it was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let rem = self.reduce(&v);
        if rem.is_empty() {
            return false;
        }
        self.push_reduced(rem, Vec::new());
        true
    }

    /// Adds `v` carrying `tag`. When `v` is dependent, returns `tag - combination`, the
    /// relation among tags that produced zero.
    pub fn insert_tagged(&mut self, v: SparseVec, tag: SparseVec) -> Option<SparseVec> {
        let (rem, comb) = self.reduce_with_tags(&v);
        let tag = add_scaled(&tag, &-&self.field.one(), &comb);
        if rem.is_empty() {
            return Some(tag);
        }
        self.push_reduced(rem, tag);
        None
    }

    /// Fully reduced basis sorted by pivot.
    pub fn rref(&self) -> Vec<SparseVec> {
        let mut order: Vec<(usize, usize)> = self.pivot_row.iter().map(|(p, r)| (*p, *r)).collect();
        order.sort();
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for &(p, r) in order.iter().rev() {
            let mut v = self.rows[r].vec.clone();
            let hits: Vec<(usize, FieldElement)> =
                v.iter().skip(1).filter(|(i, _)| done.contains_key(i)).cloned().collect();
            for (i, c) in hits {
                v = add_scaled(&v, &-&c, &done[&i]);
            }
            done.insert(p, v);
        }
        done.into_values().collect()
    }
}

/// Null space of the matrix given by its rows (each a sparse vector over `ncols` columns).
/// One basis vector per free column, ordered by that column; each has a 1 in its free column.
pub fn kernel(field: Field, ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let e = Echelon::from_vectors(field, ncols, rows);
    let rref = e.rref();
    let pivots: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // column f -> entries (pivot, coefficient) in that column
    let mut cols: BTreeMap<usize, Vec<(usize, FieldElement)>> = BTreeMap::new();
    for r in &rref {
        let p = r[0].0;
        for (j, c) in r.iter().skip(1) {
            cols.entry(*j).or_default().push((p, c.clone()));
        }
    }
    let mut out = Vec::new();
    for f in (0..ncols).filter(|f| !is_pivot[*f]) {
        let mut v: Vec<(usize, FieldElement)> = cols.get(&f).map(|es| es.iter().map(|(p, c)| (*p, -c)).collect()).unwrap_or_default();
        v.push((f, field.one()));
        v.sort_by_key(|t| t.0);
        out.push(v);
    }
    out
}

/// Transposes a list of column images into rows over `ncols = cols.len()`.
pub fn transpose(cols: &[SparseVec], nrows: usize) -> Vec<SparseVec> {
    let mut rows: Vec<SparseVec> = vec![Vec::new(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            rows[*i].push((j, c.clone()));
        }
    }
    rows
}

/// Some `x` with `sum x_k cols[k] = target`, if one exists.
pub fn solve(field: Field, dim: usize, cols: &[SparseVec], target: &SparseVec) -> Option<SparseVec> {
    let mut e = Echelon::new(field, dim);
    for (k, c) in cols.iter().enumerate() {
        e.insert_tagged(c.clone(), unit(k, field));
    }
    let (rem, comb) = e.reduce_with_tags(target);
    rem.is_empty().then_some(comb)
}

pub fn rank(field: Field, dim: usize, vs: impl IntoIterator<Item = SparseVec>) -> usize {
    Echelon::from_vectors(field, dim, vs).rank()
}

/// Applies the linear map with the given column images to `x`.
pub fn apply(cols: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut work = BTreeMap::new();
    for (k, c) in x {
        accumulate(&mut work, c, &cols[*k]);
    }
    from_map(work)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> SparseVec {
        let f = Field::Rationals;
        v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, f.from_i64(*c))).collect()
    }

    #[test]
    fn rank_and_containment() {
        let f = Field::Rationals;
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(q(&[1, 2, 3])));
        assert!(e.insert(q(&[2, 4, 7])));
        assert!(!e.insert(q(&[3, 6, 10])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&q(&[0, 0, 1])));
        assert!(!e.contains(&q(&[0, 1, 0])));
    }

    #[test]
    fn kernel_of_small_matrix() {
        let f = Field::Rationals;
        let rows = vec![q(&[1, 1, 0, 0]), q(&[0, 1, 1, 0])];
        let ker = kernel(f, 4, rows.clone());
        assert_eq!(ker.len(), 2);
        for k in &ker {
            for r in &rows {
                let dot = r.iter().fold(f.zero(), |acc, (i, c)| {
                    let kc = k.iter().find(|t| t.0 == *i).map(|t| t.1.clone()).unwrap_or(f.zero());
                    &acc + &(c * &kc)
                });
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn tagged_dependency_is_relation() {
        let f = Field::Rationals;
        let mut e = Echelon::new(f, 2);
        assert!(e.insert_tagged(q(&[1, 1]), unit(0, f)).is_none());
        assert!(e.insert_tagged(q(&[1, -1]), unit(1, f)).is_none());
        let rel = e.insert_tagged(q(&[3, 1]), unit(2, f)).unwrap();
        // 3,1 = 2*(1,1) + 1*(1,-1)
        assert_eq!(rel, q(&[-2, -1, 1]));
    }

    #[test]
    fn solve_finds_preimage() {
        let f = Field::Prime(7);
        let cols = vec![vec![(0, f.from_i64(2))], vec![(0, f.from_i64(1)), (1, f.from_i64(1))]];
        let x = solve(f, 2, &cols, &vec![(0, f.from_i64(3)), (1, f.from_i64(5))]).unwrap();
        assert_eq!(apply(&cols, &x), vec![(0, f.from_i64(3)), (1, f.from_i64(5))]);
        assert!(solve(f, 3, &cols, &vec![(2, f.one())]).is_none());
    }

    fn dot(a: &SparseVec, b: &SparseVec, f: Field) -> FieldElement {
        let mut acc = f.zero();
        for (i, c) in a {
            if let Some((_, d)) = b.iter().find(|t| t.0 == *i) {
                acc = &acc + &(c * d);
            }
        }
        acc
    }

    proptest! {
        #[test]
        fn rank_nullity(m in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6)) {
            let f = Field::Rationals;
            let rows: Vec<SparseVec> = m.iter().map(|r| q(r)).collect();
            let r = rank(f, 5, rows.clone());
            let ker = kernel(f, 5, rows.clone());
            prop_assert_eq!(r + ker.len(), 5);
            for k in &ker {
                for row in &rows {
                    prop_assert!(dot(row, k, f).is_zero());
                }
            }
            prop_assert_eq!(rank(f, 5, ker.clone()), ker.len());
        }

        #[test]
        fn rref_spans_same_space(m in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..5)) {
            let f = Field::Prime(101);
            let rows: Vec<SparseVec> = m.iter().map(|r| r.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, f.from_i64(*c))).collect()).collect();
            let e = Echelon::from_vectors(f, 4, rows.clone());
            let rr = e.rref();
            let e2 = Echelon::from_vectors(f, 4, rr.clone());
            prop_assert_eq!(e2.rank(), e.rank());
            for r in &rows {
                prop_assert!(e2.contains(r));
            }
        }
    }
}
