//! The quotient ring R = k[x_1..x_n]/I as a k-vector space with standard-monomial basis.
//!
//! Elements of R are sparse vectors over the basis indices. Basis monomials are ordered by
//! degree and, within a degree, descending in the monomial order, so each graded piece is a
//! contiguous index range. Graded rings that are not artinian are truncated at a horizon
//! degree; asking for anything beyond it is an error.

use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::linalg::{self, Echelon, SparseVec};
use crate::poly::{Monomial, MonomialOrder, Polynomial};

/// Element of R in basis coordinates.
pub type RElem = SparseVec;

const FULL_TABLE_LIMIT: usize = 700;

#[derive(Clone, Debug)]
pub struct QuotientRing {
    field: Field,
    names: Vec<String>,
    order: MonomialOrder,
    relations: Vec<Polynomial>,
    gb: GroebnerBasis,
    graded: bool,
    artinian: bool,
    horizon: usize,
    basis: Vec<Monomial>,
    degree_start: Vec<usize>,
    index: HashMap<Monomial, usize>,
    /// basis index -> (variable, parent index) with basis[i] = x_var * basis[parent]
    parent: Vec<Option<(usize, usize)>>,
    /// basis index -> per-variable product, `None` past the horizon
    var_mul: Vec<Vec<Option<RElem>>>,
    table: Option<Vec<Vec<Option<RElem>>>>,
}

/// Slack added to the regularity bound when truncating a graded non-artinian ring.
const HORIZON_SLACK: usize = 2;

impl QuotientRing {
    /// Builds R from relations; all terms of every relation must have degree at least 2.
    pub fn new(field: Field, names: Vec<String>, relations: Vec<Polynomial>, order: MonomialOrder) -> Result<Self> {
        Self::build(field, names, relations, order, None)
    }

    /// As [`QuotientRing::new`], truncating a non-artinian graded ring at `horizon` at least.
    pub fn with_horizon(field: Field, names: Vec<String>, relations: Vec<Polynomial>, order: MonomialOrder, horizon: usize) -> Result<Self> {
        Self::build(field, names, relations, order, Some(horizon))
    }

    fn build(field: Field, names: Vec<String>, relations: Vec<Polynomial>, order: MonomialOrder, horizon: Option<usize>) -> Result<Self> {
        let n = names.len();
        for (k, a) in names.iter().enumerate() {
            if names[..k].contains(a) {
                return Err(Error::InvalidInput(format!("duplicate variable `{a}`")));
            }
        }
        let relations: Vec<Polynomial> = relations.into_iter().filter(|p| !p.is_zero()).map(|p| p.with_order(order)).collect();
        for r in &relations {
            if r.nvars() != n {
                return Err(Error::ArityMismatch(r.nvars(), n));
            }
            if r.field() != field {
                return Err(Error::InvalidInput(format!("relation over {} in a ring over {field}", r.field())));
            }
            if r.min_degree().unwrap() < 2 {
                return Err(Error::InvalidInput(format!(
                    "relation `{}` has a term of degree below 2; presentations must be minimal",
                    r.format(&names)
                )));
            }
        }
        let gb = buchberger(field, n, &relations, order);
        let graded = relations.iter().all(|r| r.is_homogeneous());
        let lms = gb.leading_monomials();
        let artinian = (0..n).all(|v| lms.iter().any(|m| m.exps()[v] > 0 && m.degree() == m.exps()[v]));
        if !artinian && !graded {
            return Err(Error::NotArtinian("a presentation that is not homogeneous must define a finite-dimensional ring".into()));
        }
        let horizon = if artinian {
            usize::MAX
        } else {
            let reg = taylor_regularity_bound(&lms);
            horizon.unwrap_or(0).max(reg + HORIZON_SLACK)
        };
        let mut ring = QuotientRing {
            field,
            names,
            order,
            relations,
            gb,
            graded,
            artinian,
            horizon,
            basis: Vec::new(),
            degree_start: Vec::new(),
            index: HashMap::new(),
            parent: Vec::new(),
            var_mul: Vec::new(),
            table: None,
        };
        ring.enumerate_basis();
        ring.fill_var_mul();
        if ring.basis.len() <= FULL_TABLE_LIMIT {
            ring.fill_table();
        }
        if !ring.is_local() {
            return Err(Error::InvalidInput("the ring is not local: some variable is not nilpotent".into()));
        }
        Ok(ring)
    }

    fn enumerate_basis(&mut self) {
        let n = self.nvars();
        let one = Monomial::one(n);
        self.degree_start.push(0);
        self.index.insert(one.clone(), 0);
        self.basis.push(one);
        self.parent.push(None);
        let mut prev = 0..1;
        let mut d = 0;
        loop {
            d += 1;
            if !self.artinian && d > self.horizon {
                break;
            }
            let start = self.basis.len();
            self.degree_start.push(start);
            let mut fresh: Vec<(Monomial, (usize, usize))> = Vec::new();
            for p in prev.clone() {
                for v in 0..n {
                    let m = self.basis[p].mul_var(v);
                    if self.gb.is_standard(&m) && !fresh.iter().any(|(f, _)| *f == m) {
                        fresh.push((m, (v, p)));
                    }
                }
            }
            if fresh.is_empty() {
                self.degree_start.pop();
                break;
            }
            let order = self.order;
            fresh.sort_by(|a, b| order.cmp(&b.0, &a.0));
            for (m, par) in fresh {
                self.index.insert(m.clone(), self.basis.len());
                self.basis.push(m);
                self.parent.push(Some(par));
            }
            prev = start..self.basis.len();
        }
        self.degree_start.push(self.basis.len());
    }

    fn fill_var_mul(&mut self) {
        let n = self.nvars();
        let mut table = Vec::with_capacity(self.basis.len());
        for b in 0..self.basis.len() {
            let mut row = Vec::with_capacity(n);
            for v in 0..n {
                let m = self.basis[b].mul_var(v);
                if !self.artinian && m.degree() as usize > self.horizon {
                    row.push(None);
                    continue;
                }
                let e = match self.index.get(&m) {
                    Some(&i) => vec![(i, self.field.one())],
                    None => {
                        let p = Polynomial::monomial(self.field, self.order, m, self.field.one());
                        self.coords_of_normal(&self.gb.normal_form(&p)).expect("normal form within basis")
                    }
                };
                row.push(Some(e));
            }
            table.push(row);
        }
        self.var_mul = table;
    }

    fn fill_table(&mut self) {
        let nb = self.basis.len();
        let mut table: Vec<Vec<Option<RElem>>> = Vec::with_capacity(nb);
        for i in 0..nb {
            let row: Vec<Option<RElem>> = match self.parent[i] {
                None => (0..nb).map(|j| Some(vec![(j, self.field.one())])).collect(),
                Some((v, p)) => (0..nb).map(|j| table[p][j].as_ref().and_then(|e: &RElem| self.try_mul_var(v, e))).collect(),
            };
            table.push(row);
        }
        self.table = Some(table);
    }

    fn coords_of_normal(&self, p: &Polynomial) -> Option<RElem> {
        let mut out: RElem = Vec::with_capacity(p.terms().len());
        for (m, c) in p.terms() {
            out.push((*self.index.get(m)?, c.clone()));
        }
        out.sort_by_key(|t| t.0);
        Some(out)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn is_artinian(&self) -> bool {
        self.artinian
    }

    /// Largest degree with a known basis: the top degree when artinian, else the horizon.
    pub fn max_degree(&self) -> usize {
        self.degree_start.len() - 2
    }

    /// Top degree of an artinian ring.
    pub fn top_degree(&self) -> Option<usize> {
        self.artinian.then(|| self.max_degree())
    }

    pub fn horizon(&self) -> Option<usize> {
        (!self.artinian).then_some(self.horizon)
    }

    /// The same presentation with a horizon of at least `d` (a clone when already enough).
    pub fn extended_to(&self, d: usize) -> Result<QuotientRing> {
        if self.artinian || d <= self.horizon {
            return Ok(self.clone());
        }
        QuotientRing::with_horizon(self.field, self.names.clone(), self.relations.clone(), self.order, d)
    }

    /// The same ring presented with another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<QuotientRing> {
        let h = if self.artinian { None } else { Some(self.horizon) };
        Self::build(self.field, self.names.clone(), self.relations.clone(), order, h)
    }

    /// R with extra relations appended.
    pub fn with_relations(&self, extra: Vec<Polynomial>) -> Result<QuotientRing> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        QuotientRing::new(self.field, self.names.clone(), rels, self.order)
    }

    /// R / 𝔪^s, presented by adding every monomial of degree `s`.
    pub fn truncation(&self, s: u32) -> Result<QuotientRing> {
        let extra = Monomial::all_of_degree(self.nvars(), s)
            .into_iter()
            .map(|m| Polynomial::monomial(self.field, self.order, m, self.field.one()))
            .collect();
        self.with_relations(extra)
    }

    /// Number of basis monomials (up to the horizon when truncated).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_degree(&self, i: usize) -> usize {
        self.basis[i].degree() as usize
    }

    /// Index range of the standard monomials of degree `d` (empty past the top degree).
    pub fn degree_range(&self, d: usize) -> Result<Range<usize>> {
        if d + 2 <= self.degree_start.len() {
            return Ok(self.degree_start[d]..self.degree_start[d + 1]);
        }
        if self.artinian {
            let n = self.basis.len();
            Ok(n..n)
        } else {
            Err(Error::HorizonExceeded(d))
        }
    }

    /// Standard monomials of degree `d`.
    pub fn std_basis(&self, d: usize) -> Result<&[Monomial]> {
        Ok(&self.basis[self.degree_range(d)?])
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        (0..=self.max_degree()).map(|d| self.degree_range(d).unwrap().len()).collect()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn variable(&self, v: usize) -> RElem {
        match self.index.get(&Monomial::var(self.nvars(), v)) {
            Some(&i) => vec![(i, self.field.one())],
            None => Vec::new(),
        }
    }

    pub fn one(&self) -> RElem {
        vec![(0, self.field.one())]
    }

    /// Normal form of `p` in basis coordinates.
    pub fn elem(&self, p: &Polynomial) -> Result<RElem> {
        if p.nvars() != self.nvars() {
            return Err(Error::ArityMismatch(p.nvars(), self.nvars()));
        }
        let nf = self.gb.normal_form(p);
        if let Some(d) = nf.max_degree() {
            if !self.artinian && d as usize > self.horizon {
                return Err(Error::HorizonExceeded(d as usize));
            }
        }
        self.coords_of_normal(&nf).ok_or(Error::HorizonExceeded(self.max_degree() + 1))
    }

    pub fn to_poly(&self, e: &RElem) -> Polynomial {
        let terms = e.iter().map(|(i, c)| (self.basis[*i].clone(), c.clone())).collect();
        Polynomial::from_terms(self.field, self.nvars(), self.order, terms)
    }

    pub fn format(&self, e: &RElem) -> String {
        self.to_poly(e).format(&self.names)
    }

    fn try_mul_var(&self, v: usize, e: &RElem) -> Option<RElem> {
        let mut acc: RElem = Vec::new();
        for (i, c) in e {
            let p = self.var_mul[*i][v].as_ref()?;
            acc = linalg::add_scaled(&acc, c, p);
        }
        Some(acc)
    }

    /// `x_v * e`. Panics past the horizon of a truncated ring.
    pub fn mul_var(&self, v: usize, e: &RElem) -> RElem {
        self.try_mul_var(v, e).unwrap_or_else(|| panic!("product beyond the horizon of a truncated ring"))
    }

    /// Product of basis elements `i` and `j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> RElem {
        if let Some(t) = &self.table {
            return t[i][j].clone().unwrap_or_else(|| panic!("product beyond the horizon of a truncated ring"));
        }
        match self.parent[i] {
            None => vec![(j, self.field.one())],
            Some((v, p)) => self.mul_var(v, &self.mul_basis(p, j)),
        }
    }

    pub fn mul(&self, a: &RElem, b: &RElem) -> RElem {
        let mut acc = std::collections::BTreeMap::new();
        for (i, c) in a {
            for (j, d) in b {
                let cd = c * d;
                for (k, e) in self.mul_basis(*i, *j) {
                    let t = &cd * &e;
                    let slot = acc.entry(k).or_insert_with(|| self.field.zero());
                    *slot = &*slot + &t;
                }
            }
        }
        linalg::from_map(acc)
    }

    pub fn scale(&self, a: &RElem, c: &FieldElement) -> RElem {
        linalg::scale(a, c)
    }

    /// Constant term of `e` (coefficient of the basis element 1).
    pub fn constant_term(&self, e: &RElem) -> FieldElement {
        e.iter().find(|t| t.0 == 0).map(|t| t.1.clone()).unwrap_or_else(|| self.field.zero())
    }

    /// Lowest degree among the terms of `e`; for graded rings this is its 𝔪-adic order.
    pub fn min_degree(&self, e: &RElem) -> Option<usize> {
        e.iter().map(|(i, _)| self.basis_degree(*i)).min()
    }

    /// The maximal ideal is nilpotent; checked on variables through the power chain.
    fn is_local(&self) -> bool {
        if self.graded {
            return true;
        }
        let mut cur = self.power_basis_vectors(1);
        for _ in 0..=self.dim() {
            if cur.is_empty() {
                return true;
            }
            let next = self.mul_by_max_ideal(&cur);
            if next.len() == cur.len() {
                return false;
            }
            cur = next;
        }
        false
    }

    fn mul_by_max_ideal(&self, span: &[RElem]) -> Vec<RElem> {
        let mut e = Echelon::new(self.field, self.dim());
        for b in span {
            for v in 0..self.nvars() {
                e.insert(self.mul_var(v, b));
            }
        }
        e.rref()
    }

    fn power_basis_vectors(&self, t: usize) -> Vec<RElem> {
        if self.graded {
            let start = self.degree_start[t.min(self.degree_start.len() - 1)];
            return (start..self.dim()).map(|i| vec![(i, self.field.one())]).collect();
        }
        let mut cur: Vec<RElem> = (0..self.dim()).map(|i| vec![(i, self.field.one())]).collect();
        for _ in 0..t {
            cur = self.mul_by_max_ideal(&cur);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// A k-basis of 𝔪^t. For graded rings this is the standard monomials of degree at least
    /// `t`; otherwise an echelon basis of 𝔪·𝔪^{t-1}. Truncated rings need `t` past the horizon
    /// to be meaningful only up to the horizon, so they are rejected.
    pub fn power_ideal_basis(&self, t: usize) -> Result<Vec<RElem>> {
        if !self.artinian {
            return Err(Error::NotArtinian("𝔪^t of a ring that is not artinian is infinite-dimensional".into()));
        }
        Ok(self.power_basis_vectors(t))
    }

    /// True when 𝔪^t = 0.
    pub fn power_vanishes(&self, t: usize) -> bool {
        self.artinian && self.power_basis_vectors(t).is_empty()
    }

    /// Smallest `s` with 𝔪^s = 0 (artinian rings).
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.artinian {
            return None;
        }
        (0..=self.dim() + 1).find(|&s| self.power_vanishes(s))
    }

    /// A k-basis of the socle (0 : 𝔪).
    pub fn socle(&self) -> Result<Vec<RElem>> {
        if !self.artinian {
            return Err(Error::NotArtinian("socle of a ring that is not artinian".into()));
        }
        let n = self.nvars();
        let nb = self.dim();
        let cols: Vec<SparseVec> = (0..nb)
            .map(|b| {
                let mut col = Vec::new();
                for v in 0..n {
                    for (i, c) in &self.var_mul[b][v].clone().unwrap() {
                        col.push((v * nb + i, c.clone()));
                    }
                }
                col
            })
            .collect();
        let rows = linalg::transpose(&cols, n * nb);
        Ok(linalg::kernel(self.field, nb, rows))
    }

    /// max{j : I ⊆ n^j}, the smallest term degree over the relations.
    pub fn v_invariant(&self) -> Result<u32> {
        self.relations
            .iter()
            .filter_map(|r| r.min_degree())
            .min()
            .ok_or_else(|| Error::InvalidInput("v(R) is undefined for the zero ideal".into()))
    }

    /// Upper bound on j - i for nonzero Tor^Q_{i,j}(R, k).
    pub fn regularity_bound(&self) -> usize {
        match self.top_degree() {
            Some(t) => t,
            None => taylor_regularity_bound(&self.gb.leading_monomials()),
        }
    }

    /// Largest degree of a reduced Gröbner basis element (1 for the zero ideal).
    pub fn max_gb_degree(&self) -> usize {
        self.gb.elements().iter().filter_map(|g| g.max_degree()).max().unwrap_or(1) as usize
    }
}

/// max over nonempty subsets S of deg lcm(S) - |S|, from the Taylor resolution of the
/// monomial ideal; a cruder additive bound is used for large generating sets.
fn taylor_regularity_bound(lms: &[Monomial]) -> usize {
    if lms.is_empty() {
        return 0;
    }
    if lms.len() > 16 {
        return lms.iter().map(|m| m.degree() as usize - 1).sum();
    }
    let mut best = 0usize;
    for mask in 1u32..(1 << lms.len()) {
        let mut l = Monomial::one(lms[0].nvars());
        for (k, m) in lms.iter().enumerate() {
            if mask >> k & 1 == 1 {
                l = l.lcm(m);
            }
        }
        best = best.max(l.degree() as usize - mask.count_ones() as usize);
    }
    best
}
