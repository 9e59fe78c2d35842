//! Buchberger's algorithm and normal forms.

use std::cmp::Ordering;

use crate::field::Field;
use crate::poly::{Monomial, MonomialOrder, Polynomial};

/// A reduced Gröbner basis: monic, auto-reduced, sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    field: Field,
    nvars: usize,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| g.leading_monomial().unwrap().clone()).collect()
    }

    /// True when no leading monomial divides `m`.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.elements.iter().any(|g| g.leading_monomial().unwrap().divides(m))
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let p = if p.order() == self.order { p.clone() } else { p.with_order(self.order) };
        normal_form(&p, &self.elements)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }
}

/// Full reduction of `p` by `divisors` (each nonzero, any leading coefficient).
pub fn normal_form(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let (field, nvars, order) = (p.field(), p.nvars(), p.order());
    let mut rest = p.clone();
    let mut rem = Vec::new();
    while let Some((m, c)) = rest.leading().cloned() {
        let hit = divisors.iter().find(|g| g.leading_monomial().unwrap().divides(&m));
        match hit {
            Some(g) => {
                let (gm, gc) = g.leading().unwrap();
                let q = &c * &gc.inv().expect("nonzero leading coefficient");
                rest = rest.sub(&g.mul_term(&m.div(gm), &q));
            }
            None => {
                rem.push((m, c));
                rest = Polynomial::from_terms(field, nvars, order, rest.terms()[1..].to_vec());
            }
        }
    }
    Polynomial::from_terms(field, nvars, order, rem)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let a = f.mul_term(&l.div(fm), &fc.inv().unwrap());
    let b = g.mul_term(&l.div(gm), &gc.inv().unwrap());
    a.sub(&b)
}

/// Reduced Gröbner basis of the ideal generated by `gens` for `order`. Zero generators are ignored.
pub fn buchberger(field: Field, nvars: usize, gens: &[Polynomial], order: MonomialOrder) -> GroebnerBasis {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        let g = g.with_order(order);
        let r = normal_form(&g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j, basis[i].leading_monomial().unwrap().lcm(basis[j].leading_monomial().unwrap())));
        }
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by index
        let mut best = 0;
        for k in 1..pairs.len() {
            let c = order.cmp(&pairs[k].2, &pairs[best].2).then((pairs[k].0, pairs[k].1).cmp(&(pairs[best].0, pairs[best].1)));
            if c == Ordering::Less {
                best = k;
            }
        }
        let (i, j, _) = pairs.swap_remove(best);
        let (fi, fj) = (&basis[i], &basis[j]);
        if fi.leading_monomial().unwrap().is_coprime(fj.leading_monomial().unwrap()) {
            continue;
        }
        let r = normal_form(&s_polynomial(fi, fj), &basis);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        let k = basis.len();
        let lm = r.leading_monomial().unwrap().clone();
        basis.push(r);
        for i in 0..k {
            pairs.push((i, k, basis[i].leading_monomial().unwrap().lcm(&lm)));
        }
    }
    GroebnerBasis { field, nvars, order, elements: reduce_basis(basis, order) }
}

fn reduce_basis(basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let hm = h.leading_monomial().unwrap();
            l != k && hm.divides(lm) && (hm != lm || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, h)| h.clone()).collect();
        let g = &minimal[k];
        let (lm, lc) = g.leading().unwrap().clone();
        let tail = Polynomial::from_terms(g.field(), g.nvars(), order, g.terms()[1..].to_vec());
        let tail = normal_form(&tail, &others);
        let head = Polynomial::monomial(g.field(), order, lm, lc);
        out.push(head.add(&tail).monic());
    }
    out.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    out
}

/// Checks that every S-polynomial of `gb` reduces to zero.
pub fn satisfies_buchberger_criterion(gb: &GroebnerBasis) -> bool {
    let el = gb.elements();
    for j in 0..el.len() {
        for i in 0..j {
            if !normal_form(&s_polynomial(&el[i], &el[j]), el).is_zero() {
                return false;
            }
        }
    }
    true
}
