//! The Koszul complex K = R<T_1..T_n> as a DG algebra and its homology.
//!
//! Exterior monomials are bitmasks. In homological degree `i` the coordinate of
//! `b * T_S` (basis monomial `b` of R, |S| = i) is `b * C(n, i) + rank(S)`, where
//! subsets of equal size are ranked by their increasing index lists in lex order. For a
//! graded ring the bidegree piece (i, j) is therefore a contiguous coordinate range.

use std::collections::BTreeMap;
use std::ops::Range;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{self, Echelon, SparseVec};
use crate::parse::{self, ExprAlgebra};
use crate::quotient::{QuotientRing, RElem};

/// Sign of moving `a` past `b` when concatenating exterior monomials: (-1)^{#{(s,t): s in a, t in b, s > t}}.
fn merge_sign(a: u32, b: u32) -> bool {
    let mut inv = 0;
    let mut rest = b;
    while rest != 0 {
        let t = rest.trailing_zeros();
        inv += (a >> (t + 1)).count_ones();
        rest &= rest - 1;
    }
    inv % 2 == 1
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask >> k & 1 == 1).collect()
}

/// Element of K: exterior monomial mask -> coefficient in R (normal form coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KoszulElement {
    terms: BTreeMap<u32, RElem>,
}

impl KoszulElement {
    pub fn zero() -> Self {
        KoszulElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &RElem)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Homological degree when every term has the same number of exterior variables.
    pub fn homological_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn add_term(&mut self, mask: u32, c: &RElem, field_one: &FieldElement, negate: bool) {
        if c.is_empty() {
            return;
        }
        let scale = if negate { -field_one } else { field_one.clone() };
        let cur = self.terms.remove(&mask).unwrap_or_default();
        let sum = linalg::add_scaled(&cur, &scale, c);
        if !sum.is_empty() {
            self.terms.insert(mask, sum);
        }
    }
}

/// The Koszul complex of a ring on its variables.
pub struct Koszul<'a> {
    ring: &'a QuotientRing,
    n: usize,
    by_degree: Vec<Vec<u32>>,
    rank: Vec<usize>,
}

pub type Bidegree = (usize, usize);

impl<'a> Koszul<'a> {
    pub fn new(ring: &'a QuotientRing) -> Self {
        let n = ring.nvars();
        assert!(n < 24, "too many variables for the exterior algebra");
        let mut by_degree: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for mask in 0u32..(1 << n) {
            by_degree[mask.count_ones() as usize].push(mask);
        }
        for list in &mut by_degree {
            list.sort_by_key(|m| indices(*m));
        }
        let mut rank = vec![0; 1 << n];
        for list in &by_degree {
            for (k, m) in list.iter().enumerate() {
                rank[*m as usize] = k;
            }
        }
        Koszul { ring, n, by_degree, rank }
    }

    pub fn ring(&self) -> &'a QuotientRing {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Exterior monomials of length `i` in coordinate order.
    pub fn exterior_basis(&self, i: usize) -> &[u32] {
        &self.by_degree[i]
    }

    pub fn binom(&self, i: usize) -> usize {
        self.by_degree.get(i).map_or(0, |l| l.len())
    }

    /// Dimension of K_i as a k-space (up to the horizon for truncated rings).
    pub fn dim(&self, i: usize) -> usize {
        self.ring.dim() * self.binom(i)
    }

    pub fn coord(&self, r: usize, mask: u32) -> usize {
        r * self.binom(mask.count_ones() as usize) + self.rank[mask as usize]
    }

    pub fn decode(&self, i: usize, coord: usize) -> (usize, u32) {
        let c = self.binom(i);
        (coord / c, self.by_degree[i][coord % c])
    }

    /// Coordinate range of K_{i,j} for a graded ring.
    pub fn piece_range(&self, i: usize, j: usize) -> Result<Range<usize>> {
        if !self.ring.is_graded() {
            return Err(Error::NotGraded("bidegree pieces need a graded ring".into()));
        }
        if j < i || i > self.n {
            return Ok(0..0);
        }
        let r = self.ring.degree_range(j - i)?;
        let c = self.binom(i);
        Ok(r.start * c..r.end * c)
    }

    pub fn to_vec(&self, x: &KoszulElement) -> (usize, SparseVec) {
        let i = x.homological_degree().unwrap_or(0);
        let mut v = Vec::new();
        for (mask, c) in &x.terms {
            assert_eq!(mask.count_ones() as usize, i, "element is not homogeneous in homological degree");
            for (r, a) in c {
                v.push((self.coord(*r, *mask), a.clone()));
            }
        }
        v.sort_by_key(|t| t.0);
        (i, v)
    }

    pub fn from_vec(&self, i: usize, v: &SparseVec) -> KoszulElement {
        let mut terms: BTreeMap<u32, RElem> = BTreeMap::new();
        for (k, a) in v {
            let (r, mask) = self.decode(i, *k);
            terms.entry(mask).or_default().push((r, a.clone()));
        }
        for c in terms.values_mut() {
            c.sort_by_key(|t| t.0);
        }
        KoszulElement { terms }
    }

    pub fn monomial(&self, coeff: RElem, mask: u32) -> KoszulElement {
        let mut terms = BTreeMap::new();
        if !coeff.is_empty() {
            terms.insert(mask, coeff);
        }
        KoszulElement { terms }
    }

    /// T_{k+1} (0-based `k`).
    pub fn generator(&self, k: usize) -> KoszulElement {
        self.monomial(self.ring.one(), 1 << k)
    }

    pub fn scalar(&self, c: RElem) -> KoszulElement {
        self.monomial(c, 0)
    }

    pub fn add(&self, a: &KoszulElement, b: &KoszulElement) -> KoszulElement {
        let one = self.ring.field().one();
        let mut out = a.clone();
        for (m, c) in &b.terms {
            out.add_term(*m, c, &one, false);
        }
        out
    }

    pub fn neg(&self, a: &KoszulElement) -> KoszulElement {
        let m1 = -&self.ring.field().one();
        KoszulElement { terms: a.terms.iter().map(|(m, c)| (*m, linalg::scale(c, &m1))).collect() }
    }

    pub fn sub(&self, a: &KoszulElement, b: &KoszulElement) -> KoszulElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &KoszulElement, c: &FieldElement) -> KoszulElement {
        let mut out = KoszulElement::zero();
        for (m, r) in &a.terms {
            let s = linalg::scale(r, c);
            if !s.is_empty() {
                out.terms.insert(*m, s);
            }
        }
        out
    }

    /// Product with the Koszul sign of the merging permutation.
    pub fn mul(&self, a: &KoszulElement, b: &KoszulElement) -> KoszulElement {
        let one = self.ring.field().one();
        let mut out = KoszulElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if ma & mb != 0 {
                    continue;
                }
                let prod = self.ring.mul(ca, cb);
                out.add_term(ma | mb, &prod, &one, merge_sign(*ma, *mb));
            }
        }
        out
    }

    /// ∂(a T_S) = Σ_m (-1)^{m+1} x_{s_m} a T_{S - s_m}.
    pub fn diff(&self, x: &KoszulElement) -> KoszulElement {
        let one = self.ring.field().one();
        let mut out = KoszulElement::zero();
        for (mask, c) in &x.terms {
            for (pos, s) in indices(*mask).into_iter().enumerate() {
                let img = self.ring.mul_var(s, c);
                out.add_term(mask & !(1 << s), &img, &one, pos % 2 == 1);
            }
        }
        out
    }

    /// Image under ∂ of the coordinate vector `e_k` of K_i, as a vector of K_{i-1}.
    fn diff_basis(&self, i: usize, k: usize) -> SparseVec {
        let (r, mask) = self.decode(i, k);
        let mut acc = BTreeMap::new();
        let one = self.ring.field().one();
        for (pos, s) in indices(mask).into_iter().enumerate() {
            let sign = if pos % 2 == 1 { -&one } else { one.clone() };
            let rest = mask & !(1 << s);
            for (b, a) in self.ring.mul_var(s, &vec![(r, one.clone())]) {
                let slot = acc.entry(self.coord(b, rest)).or_insert_with(|| self.ring.field().zero());
                *slot = &*slot + &(&a * &sign);
            }
        }
        linalg::from_map(acc)
    }

    pub fn diff_vec(&self, i: usize, v: &SparseVec) -> SparseVec {
        if i == 0 {
            return Vec::new();
        }
        let mut acc = BTreeMap::new();
        for (k, c) in v {
            for (t, a) in self.diff_basis(i, *k) {
                let slot = acc.entry(t).or_insert_with(|| self.ring.field().zero());
                *slot = &*slot + &(c * &a);
            }
        }
        linalg::from_map(acc)
    }

    /// Cycles inside the span of `basis` (vectors of K_i): a basis in echelon-friendly order.
    pub fn cycles_in(&self, i: usize, basis: &[SparseVec]) -> Vec<SparseVec> {
        if i == 0 {
            return basis.to_vec();
        }
        let images: Vec<SparseVec> = basis.iter().map(|b| self.diff_vec(i, b)).collect();
        let nrows = self.dim(i - 1);
        let rows = linalg::transpose(&images, nrows);
        let ker = linalg::kernel(self.ring.field(), basis.len(), rows.into_iter().filter(|r| !r.is_empty()));
        ker.iter().map(|c| combine(basis, c)).collect()
    }

    /// Echelon basis of ∂(span(basis)) for `basis` in K_i.
    pub fn boundaries_of(&self, i: usize, basis: &[SparseVec]) -> Vec<SparseVec> {
        if i == 0 || i > self.n {
            return Vec::new();
        }
        let images = basis.iter().map(|b| self.diff_vec(i, b));
        Echelon::from_vectors(self.ring.field(), self.dim(i - 1), images).rref()
    }

    fn unit_basis(&self, range: Range<usize>) -> Vec<SparseVec> {
        let one = self.ring.field().one();
        range.map(|k| vec![(k, one.clone())]).collect()
    }

    /// k-basis of K_{i,j}.
    pub fn component_basis(&self, i: usize, j: usize) -> Result<Vec<SparseVec>> {
        Ok(self.unit_basis(self.piece_range(i, j)?))
    }

    /// k-basis of 𝔪^t K_i (all internal degrees).
    pub fn filtered_piece(&self, t: usize, i: usize) -> Result<Vec<SparseVec>> {
        if i > self.n {
            return Ok(Vec::new());
        }
        let pw = self.ring.power_ideal_basis(t)?;
        let mut out = Vec::new();
        for b in &pw {
            for mask in &self.by_degree[i] {
                let mut v: SparseVec = b.iter().map(|(r, c)| (self.coord(*r, *mask), c.clone())).collect();
                v.sort_by_key(|x| x.0);
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Z(𝔪^t K)_i.
    pub fn filtered_cycles(&self, t: usize, i: usize) -> Result<Vec<SparseVec>> {
        Ok(self.cycles_in(i, &self.filtered_piece(t, i)?))
    }

    /// ∂(𝔪^t K_{i+1}), the boundaries B(𝔪^t K)_i.
    pub fn filtered_boundaries(&self, t: usize, i: usize) -> Result<Vec<SparseVec>> {
        Ok(self.boundaries_of(i + 1, &self.filtered_piece(t, i + 1)?))
    }

    /// Bidegree of a nonzero element of a graded ring, if it is bihomogeneous.
    pub fn bidegree(&self, x: &KoszulElement) -> Option<Bidegree> {
        let mut bd = None;
        for (mask, c) in &x.terms {
            for (r, _) in c {
                let i = mask.count_ones() as usize;
                let here = (i, i + self.ring.basis_degree(*r));
                match bd {
                    None => bd = Some(here),
                    Some(b) if b != here => return None,
                    _ => {}
                }
            }
        }
        bd
    }

    /// Text form such as `(a*c - b*d)*T1 + c^2*T3`.
    pub fn format(&self, x: &KoszulElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut masks: Vec<u32> = x.terms.keys().copied().collect();
        masks.sort_by_key(|m| (m.count_ones(), indices(*m)));
        let mut out = String::new();
        for (k, mask) in masks.iter().enumerate() {
            let c = &x.terms[mask];
            let ext: Vec<String> = indices(*mask).iter().map(|s| format!("T{}", s + 1)).collect();
            let p = self.ring.to_poly(c);
            let (neg, body) = if p.terms().len() == 1 {
                let (m, a) = &p.terms()[0];
                let neg = a.is_negative();
                let abs = if neg { -a } else { a.clone() };
                let mono = crate::poly::Polynomial::monomial(p.field(), p.order(), m.clone(), abs).format(self.ring.names());
                (neg, mono)
            } else {
                (false, format!("({})", p.format(self.ring.names())))
            };
            let term = if ext.is_empty() {
                body
            } else if body == "1" {
                ext.join("*")
            } else {
                format!("{body}*{}", ext.join("*"))
            };
            match (k, neg) {
                (0, true) => out.push_str(&format!("-{term}")),
                (0, false) => out.push_str(&term),
                (_, true) => out.push_str(&format!(" - {term}")),
                (_, false) => out.push_str(&format!(" + {term}")),
            }
        }
        out
    }

    /// Parses an expression in the ring variables and `T1..Tn`.
    pub fn parse(&self, src: &str) -> Result<KoszulElement> {
        let e = parse::parse_expr(src)?;
        Ok(parse::eval(&e, &KoszulContext { koszul: self, value: KoszulElement::zero() })?.value)
    }
}

fn combine(basis: &[SparseVec], c: &SparseVec) -> SparseVec {
    let mut acc: SparseVec = Vec::new();
    for (k, a) in c {
        acc = linalg::add_scaled(&acc, a, &basis[*k]);
    }
    acc
}

#[derive(Clone)]
struct KoszulContext<'k, 'a> {
    koszul: &'k Koszul<'a>,
    value: KoszulElement,
}

impl ExprAlgebra for KoszulContext<'_, '_> {
    fn constant(&self, num: &BigInt, den: &BigInt) -> Result<Self> {
        let ring = self.koszul.ring;
        let c = ring.field().from_ratio(num, den)?;
        Ok(KoszulContext { koszul: self.koszul, value: self.koszul.scalar(linalg::scale(&ring.one(), &c)) })
    }

    fn ident(&self, name: &str) -> Option<Self> {
        let ring = self.koszul.ring;
        let value = if let Some(v) = ring.names().iter().position(|n| n == name) {
            self.koszul.scalar(ring.variable(v))
        } else {
            let k: usize = name.strip_prefix('T')?.parse().ok()?;
            if k == 0 || k > self.koszul.n {
                return None;
            }
            self.koszul.generator(k - 1)
        };
        Some(KoszulContext { koszul: self.koszul, value })
    }

    fn add(&self, other: &Self) -> Self {
        KoszulContext { koszul: self.koszul, value: self.koszul.add(&self.value, &other.value) }
    }

    fn neg(&self) -> Self {
        KoszulContext { koszul: self.koszul, value: self.koszul.neg(&self.value) }
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        let ring = self.koszul.ring;
        if let Some(h) = ring.horizon() {
            let deg = |x: &KoszulElement| x.terms.values().flat_map(|c| c.iter().map(|(r, _)| ring.basis_degree(*r))).max().unwrap_or(0);
            if deg(&self.value) + deg(&other.value) > h {
                return Err(Error::HorizonExceeded(deg(&self.value) + deg(&other.value)));
            }
        }
        Ok(KoszulContext { koszul: self.koszul, value: self.koszul.mul(&self.value, &other.value) })
    }
}

/// Cycles, boundaries and homology representatives of one bidegree.
#[derive(Clone, Debug)]
pub struct HomologyPiece {
    pub bidegree: Bidegree,
    pub cycles: Vec<SparseVec>,
    pub boundaries: Vec<SparseVec>,
    pub representatives: Vec<SparseVec>,
    classes: Echelon,
}

impl HomologyPiece {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// A minimal algebra generator of the homology.
#[derive(Clone, Debug)]
pub struct HomologyGenerator {
    pub label: String,
    pub bidegree: Bidegree,
    pub cycle: KoszulElement,
}

/// The bigraded homology algebra of a graded ring.
pub struct HomologyAlgebra<'a> {
    koszul: Koszul<'a>,
    max_strand: usize,
    pieces: BTreeMap<Bidegree, HomologyPiece>,
    generators: Vec<HomologyGenerator>,
}

impl<'a> HomologyAlgebra<'a> {
    /// Computes every bidegree (i, j) with j - i at most the ring's regularity bound.
    pub fn compute(ring: &'a QuotientRing) -> Result<Self> {
        if !ring.is_graded() {
            return Err(Error::NotGraded("bigraded homology needs a graded ring".into()));
        }
        let koszul = Koszul::new(ring);
        let max_strand = ring.regularity_bound();
        if let Some(h) = ring.horizon() {
            if max_strand + 1 > h {
                return Err(Error::HorizonExceeded(max_strand + 1));
            }
        }
        let n = ring.nvars();
        let bidegrees: Vec<Bidegree> = (0..=n).flat_map(|i| (0..=max_strand).map(move |d| (i, i + d))).collect();
        let computed: Vec<HomologyPiece> = bidegrees.par_iter().map(|&(i, j)| koszul.homology_piece(i, j)).collect::<Result<_>>()?;
        let pieces = computed.into_iter().map(|p| (p.bidegree, p)).collect();
        let mut h = HomologyAlgebra { koszul, max_strand, pieces, generators: Vec::new() };
        h.generators = h.find_generators();
        Ok(h)
    }

    pub fn koszul(&self) -> &Koszul<'a> {
        &self.koszul
    }

    pub fn ring(&self) -> &'a QuotientRing {
        self.koszul.ring
    }

    pub fn max_strand(&self) -> usize {
        self.max_strand
    }

    pub fn piece(&self, bd: Bidegree) -> Option<&HomologyPiece> {
        self.pieces.get(&bd)
    }

    pub fn pieces(&self) -> impl Iterator<Item = &HomologyPiece> {
        self.pieces.values()
    }

    /// dim H_{i,j} (zero outside the computed range).
    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.pieces.get(&(i, j)).map_or(0, |p| p.dim())
    }

    /// Nonzero dimensions keyed by bidegree.
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.pieces.iter().filter(|(_, p)| p.dim() > 0).map(|(k, p)| (*k, p.dim())).collect()
    }

    /// Σ_j dim H_{i,j} for each i.
    pub fn total_dims(&self) -> Vec<usize> {
        let n = self.koszul.n;
        (0..=n).map(|i| self.pieces.iter().filter(|(k, _)| k.0 == i).map(|(_, p)| p.dim()).sum()).collect()
    }

    pub fn generators(&self) -> &[HomologyGenerator] {
        &self.generators
    }

    pub fn representative(&self, bd: Bidegree, k: usize) -> KoszulElement {
        self.koszul.from_vec(bd.0, &self.pieces[&bd].representatives[k])
    }

    /// Coordinates of [z] in the representative basis of its bidegree.
    pub fn class_of(&self, z: &KoszulElement) -> Result<(Bidegree, SparseVec)> {
        if !self.koszul.diff(z).is_zero() {
            return Err(Error::NotACycle(self.koszul.format(z)));
        }
        let Some(bd) = self.koszul.bidegree(z) else {
            if z.is_zero() {
                return Ok(((0, 0), Vec::new()));
            }
            return Err(Error::InvalidInput(format!("`{}` is not bihomogeneous", self.koszul.format(z))));
        };
        let (_, v) = self.koszul.to_vec(z);
        Ok((bd, self.class_of_vec(bd, &v)))
    }

    /// Class coordinates of a cycle vector known to lie in the given bidegree.
    pub fn class_of_vec(&self, bd: Bidegree, v: &SparseVec) -> SparseVec {
        match self.pieces.get(&bd) {
            Some(p) => {
                let (rem, comb) = p.classes.reduce_with_tags(v);
                assert!(rem.is_empty(), "vector is not a cycle of bidegree {bd:?}");
                comb
            }
            None => Vec::new(),
        }
    }

    /// Classes in bidegree `bd` of `g * h` for every representative `h` of `other`.
    fn products_with(&self, g: &KoszulElement, gbd: Bidegree, other: Bidegree) -> Vec<SparseVec> {
        let target = (gbd.0 + other.0, gbd.1 + other.1);
        if !self.pieces.contains_key(&target) {
            return Vec::new();
        }
        let Some(p) = self.pieces.get(&other) else { return Vec::new() };
        p.representatives
            .iter()
            .map(|h| {
                let prod = self.koszul.mul(g, &self.koszul.from_vec(other.0, h));
                let (_, v) = self.koszul.to_vec(&prod);
                self.class_of_vec(target, &v)
            })
            .collect()
    }

    /// Span (in class coordinates of `bd`) of Σ_g [g]·(classes of the complementary bidegree
    /// satisfying `cofactor_ok`).
    pub fn ideal_span(&self, gens: &[(KoszulElement, Bidegree)], bd: Bidegree, cofactor_ok: impl Fn(Bidegree) -> bool) -> Echelon {
        let field = self.ring().field();
        let mut e = Echelon::new(field, self.dim(bd.0, bd.1));
        for (g, gbd) in gens {
            if gbd.0 > bd.0 || gbd.1 > bd.1 {
                continue;
            }
            let other = (bd.0 - gbd.0, bd.1 - gbd.1);
            if other.1 < other.0 || !cofactor_ok(other) {
                continue;
            }
            for v in self.products_with(g, *gbd, other) {
                e.insert(v);
            }
        }
        e
    }

    fn find_generators(&self) -> Vec<HomologyGenerator> {
        let mut gens: Vec<HomologyGenerator> = Vec::new();
        let field = self.ring().field();
        for (&bd, piece) in &self.pieces {
            if bd == (0, 0) || piece.dim() == 0 {
                continue;
            }
            let current: Vec<(KoszulElement, Bidegree)> = gens.iter().map(|g| (g.cycle.clone(), g.bidegree)).collect();
            let mut dec = self.ideal_span(&current, bd, |o| o != (0, 0));
            for k in 0..piece.dim() {
                if dec.insert(linalg::unit(k, field)) {
                    gens.push(HomologyGenerator {
                        label: format!("G{}", gens.len()),
                        bidegree: bd,
                        cycle: self.koszul.from_vec(bd.0, &piece.representatives[k]),
                    });
                }
            }
        }
        gens
    }
}

impl Koszul<'_> {
    /// Z, B and representatives of H_{i,j}.
    pub fn homology_piece(&self, i: usize, j: usize) -> Result<HomologyPiece> {
        let field = self.ring.field();
        let source = self.component_basis(i, j)?;
        let cycles = self.cycles_in(i, &source);
        let boundaries = if i < self.n { self.boundaries_of(i + 1, &self.component_basis(i + 1, j)?) } else { Vec::new() };
        let mut classes = Echelon::new(field, self.dim(i));
        for b in &boundaries {
            classes.insert(b.clone());
        }
        let mut representatives = Vec::new();
        for z in &cycles {
            if classes.insert_tagged(z.clone(), linalg::unit(representatives.len(), field)).is_none() {
                representatives.push(z.clone());
            }
        }
        Ok(HomologyPiece { bidegree: (i, j), cycles, boundaries, representatives, classes })
    }
}
