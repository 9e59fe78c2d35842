//! Stretched artinian local rings in normal form and the degree-one cycle F built from them.
//!
//! Variables are `t, z_1..z_p, w_1..w_q` with p = v - r and q = r - 1. When r != v the
//! relations are w_j w_l (j <= l), w_j z_i, w_j t, z_i t, t^h - a_ij^{-1} z_i z_j for
//! nonzero a_ij (i <= j) and z_i z_j for zero a_ij. When r = v they are w_j w_l, w_j t
//! and t^{h+1}.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, Rational};
use crate::koszul::{Koszul, KoszulElement};
use crate::linalg;
use crate::poly::{Monomial, MonomialOrder, Polynomial};
use crate::quotient::QuotientRing;

/// Coefficients of F, keyed by 1-based indices. Missing entries are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FCoefficients {
    /// w_i W_j, i < j <= q
    pub alpha: BTreeMap<(usize, usize), Rational>,
    /// w_j Z_i, keyed (i, j) with i <= p, j <= q
    pub beta: BTreeMap<(usize, usize), Rational>,
    /// w_i T
    pub gamma: BTreeMap<usize, Rational>,
    /// t Z_i
    pub delta: BTreeMap<usize, Rational>,
    /// t^{h-1} T - a_ij^{-1} z_i Z_j for nonzero a_ij
    pub eta: BTreeMap<(usize, usize), Rational>,
    /// z_i Z_j for zero a_ij
    pub theta: BTreeMap<(usize, usize), Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StretchedSpec {
    pub v: usize,
    pub r: usize,
    pub h: usize,
    /// symmetric p x p matrix, p = v - r
    pub a: Vec<Vec<Rational>>,
    pub coefficients: FCoefficients,
}

impl StretchedSpec {
    /// Spec with the default F coefficients: eta = 1 on every nonzero a_ij (i <= j).
    pub fn new(v: usize, r: usize, h: usize, a: Vec<Vec<Rational>>) -> Result<Self> {
        let mut s = StretchedSpec { v, r, h, a, coefficients: FCoefficients::default() };
        s.validate()?;
        for (i, j) in s.nonzero_pairs() {
            s.coefficients.eta.insert((i, j), Rational::one());
        }
        Ok(s)
    }

    pub fn p(&self) -> usize {
        self.v - self.r
    }

    pub fn q(&self) -> usize {
        self.r - 1
    }

    /// Pairs (i, j), 1-based, i <= j, with a_ij != 0.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs(false)
    }

    /// Pairs (i, j), 1-based, i <= j, with a_ij = 0.
    pub fn zero_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs(true)
    }

    fn pairs(&self, zero: bool) -> Vec<(usize, usize)> {
        let p = self.p();
        let mut out = Vec::new();
        for i in 0..p {
            for j in i..p {
                if self.a[i][j].is_zero() == zero {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.h < 3 {
            return bad(format!("h = {} but stretched builds need h >= 3", self.h));
        }
        if self.r < 1 || self.r > self.v {
            return bad(format!("need 1 <= r <= v, got r = {}, v = {}", self.r, self.v));
        }
        let p = self.p();
        if self.a.len() != p || self.a.iter().any(|row| row.len() != p) {
            return bad(format!("matrix must be {p} x {p}"));
        }
        for i in 0..p {
            for j in 0..p {
                if self.a[i][j] != self.a[j][i] {
                    return bad("matrix must be symmetric".into());
                }
            }
        }
        if p > 0 && !invertible(&self.a) {
            return bad("matrix (a_ij) must be invertible".into());
        }
        Ok(())
    }

    pub fn variable_names(&self) -> Vec<String> {
        let mut names = vec!["t".to_string()];
        let label = |c: &str, k: usize, count: usize| if count == 1 { c.to_string() } else { format!("{c}{k}") };
        for i in 1..=self.p() {
            names.push(label("z", i, self.p()));
        }
        for j in 1..=self.q() {
            names.push(label("w", j, self.q()));
        }
        names
    }

    /// The defining relations with integer coefficients.
    pub fn relations(&self, field: Field, order: MonomialOrder) -> Result<Vec<Polynomial>> {
        let (p, q) = (self.p(), self.q());
        let n = 1 + p + q;
        let t = 0;
        let z = |i: usize| i;
        let w = |j: usize| p + j;
        let mono = |vars: &[(usize, u32)]| {
            let mut e = vec![0u32; n];
            for (v, k) in vars {
                e[*v] += k;
            }
            Monomial::new(e)
        };
        let one = field.one();
        let single = |m: Monomial| Polynomial::monomial(field, order, m, one.clone());
        let mut rels = Vec::new();
        for j in 1..=q {
            for l in j..=q {
                rels.push(single(mono(&[(w(j), 1), (w(l), 1)])));
            }
        }
        if self.r == self.v {
            for j in 1..=q {
                rels.push(single(mono(&[(w(j), 1), (t, 1)])));
            }
            rels.push(single(mono(&[(t, self.h as u32 + 1)])));
            return Ok(rels);
        }
        for j in 1..=q {
            for i in 1..=p {
                rels.push(single(mono(&[(w(j), 1), (z(i), 1)])));
            }
        }
        for j in 1..=q {
            rels.push(single(mono(&[(w(j), 1), (t, 1)])));
        }
        for i in 1..=p {
            rels.push(single(mono(&[(z(i), 1), (t, 1)])));
        }
        for (i, j) in self.nonzero_pairs() {
            // a t^h - z_i z_j scaled to integers: num * t^h - den * z_i z_j
            let a = &self.a[i - 1][j - 1];
            let (num, den) = (a.numer(), a.denom());
            let th = Polynomial::monomial(field, order, mono(&[(t, self.h as u32)]), field.from_bigint(&num));
            let zz = Polynomial::monomial(field, order, mono(&[(z(i), 1), (z(j), 1)]), field.from_bigint(&den));
            rels.push(th.sub(&zz));
        }
        for (i, j) in self.zero_pairs() {
            rels.push(single(mono(&[(z(i), 1), (z(j), 1)])));
        }
        Ok(rels)
    }

    pub fn build(&self, field: Field) -> Result<QuotientRing> {
        self.validate()?;
        let order = MonomialOrder::GrevLex;
        QuotientRing::new(field, self.variable_names(), self.relations(field, order)?, order)
    }

    /// The cycle F assembled from the coefficients; fails unless some delta, eta or theta is nonzero.
    pub fn f_cycle(&self, ring: &QuotientRing) -> Result<KoszulElement> {
        if self.r == self.v {
            return Err(Error::Precondition("F is defined only when r != v".into()));
        }
        let c = &self.coefficients;
        let unit = |x: &Rational| !x.is_zero();
        if !(c.delta.values().any(unit) || c.eta.values().any(unit) || c.theta.values().any(unit)) {
            return Err(Error::Precondition("at least one delta, eta or theta coefficient must be a unit".into()));
        }
        let (p, q) = (self.p(), self.q());
        let field = ring.field();
        let k = Koszul::new(ring);
        let lift = |x: &Rational| -> Result<FieldElement> { field.from_rational(x) };
        let var = |v: usize| ring.variable(v);
        let (t, z, w) = (0usize, |i: usize| i, |j: usize| p + j);
        let term = |coeff: &FieldElement, r: Vec<(usize, FieldElement)>, ext: usize| -> KoszulElement {
            k.monomial(linalg::scale(&r, coeff), 1 << ext)
        };
        let mut f = KoszulElement::zero();
        for (&(i, j), x) in &c.alpha {
            check_index(i < j && j <= q, "alpha", (i, j))?;
            f = k.add(&f, &term(&lift(x)?, var(w(i)), w(j)));
        }
        for (&(i, j), x) in &c.beta {
            check_index(i >= 1 && i <= p && j >= 1 && j <= q, "beta", (i, j))?;
            f = k.add(&f, &term(&lift(x)?, var(w(j)), z(i)));
        }
        for (&i, x) in &c.gamma {
            check_index(i >= 1 && i <= q, "gamma", (i, i))?;
            f = k.add(&f, &term(&lift(x)?, var(w(i)), t));
        }
        for (&i, x) in &c.delta {
            check_index(i >= 1 && i <= p, "delta", (i, i))?;
            f = k.add(&f, &term(&lift(x)?, var(t), z(i)));
        }
        let t_pow = ring.elem(&Polynomial::monomial(field, ring.order(), Monomial::new({
            let mut e = vec![0; ring.nvars()];
            e[t] = self.h as u32 - 1;
            e
        }), field.one()))?;
        let nonzero_pairs = self.nonzero_pairs();
        for (&(i, j), x) in &c.eta {
            check_index(nonzero_pairs.contains(&(i, j)), "eta", (i, j))?;
            let ainv = lift(&self.a[i - 1][j - 1].inv().unwrap())?;
            let part = k.sub(&term(&field.one(), t_pow.clone(), t), &term(&ainv, var(z(i)), z(j)));
            f = k.add(&f, &k.scale(&part, &lift(x)?));
        }
        let zero_pairs = self.zero_pairs();
        for (&(i, j), x) in &c.theta {
            check_index(zero_pairs.contains(&(i, j)), "theta", (i, j))?;
            f = k.add(&f, &term(&lift(x)?, var(z(i)), z(j)));
        }
        if !k.diff(&f).is_zero() {
            return Err(Error::NotACycle(k.format(&f)));
        }
        Ok(f)
    }
}

fn check_index(ok: bool, name: &str, idx: (usize, usize)) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} coefficient index {idx:?} is out of range")))
    }
}

/// Exact determinant test over the rationals.
fn invertible(a: &[Vec<Rational>]) -> bool {
    let n = a.len();
    let f = Field::Rationals;
    let rows = a.iter().map(|row| {
        row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, FieldElement::Q(x.clone()))).collect()
    });
    linalg::rank(f, n, rows) == n
}

/// Parses a matrix written as rows separated by `;`, entries by `,` (e.g. `1,0;0,1`).
/// Entries are integers or fractions `p/q`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<Rational>>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    let e = e.trim();
                    let (num, den) = match e.split_once('/') {
                        Some((a, b)) => (a.trim(), b.trim()),
                        None => (e, "1"),
                    };
                    let num: BigInt = num.parse().map_err(|_| Error::InvalidInput(format!("bad matrix entry `{e}`")))?;
                    let den: BigInt = den.parse().map_err(|_| Error::InvalidInput(format!("bad matrix entry `{e}`")))?;
                    match Field::Rationals.from_ratio(&num, &den) {
                        Ok(FieldElement::Q(r)) => Ok(r),
                        _ => Err(Error::InvalidInput(format!("bad matrix entry `{e}`"))),
                    }
                })
                .collect()
        })
        .collect()
}

/// Checks of the normal-form axioms, as (name, passed) pairs.
pub fn structure_checks(spec: &StretchedSpec, ring: &QuotientRing) -> Result<Vec<(String, bool)>> {
    let field = ring.field();
    let h = spec.h;
    let mut out = Vec::new();
    let t_power = |e: usize| -> Result<Vec<(usize, FieldElement)>> {
        let mut ex = vec![0; ring.nvars()];
        ex[0] = e as u32;
        ring.elem(&Polynomial::monomial(field, ring.order(), Monomial::new(ex), field.one()))
    };
    let mut principal = true;
    for i in 2..=h + 1 {
        let pw = ring.power_ideal_basis(i)?;
        let expected: Vec<_> = (i..=h).map(t_power).collect::<Result<_>>()?;
        let span = linalg::Echelon::from_vectors(field, ring.dim(), pw.clone());
        principal &= pw.len() == expected.len() && span.contains_all(expected.iter());
    }
    out.push(("m^i = (t^i) for i >= 2".to_string(), principal));
    out.push((format!("m^{h} != 0 = m^{}", h + 1), !ring.power_vanishes(h) && ring.power_vanishes(h + 1)));
    out.push((format!("socle rank {}", spec.r), ring.socle()?.len() == spec.r));
    out.push((format!("embedding dimension {}", spec.v), ring.nvars() == spec.v && ring.v_invariant()? >= 2));
    out.push((format!("length {}", spec.v + h), ring.dim() == spec.v + h));
    Ok(out)
}
