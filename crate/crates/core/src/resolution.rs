//! Minimal free resolutions by linear algebra over k.
//!
//! A free module ⊕ R(-e_g) is the k-space with coordinates `g * dim R + b` for basis
//! element `b` of R. For graded rings every step is computed one internal degree at a
//! time; ungraded (artinian) rings use a single piece. Minimal generators of a submodule
//! K are a basis of K modulo 𝔪K.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::quotient::QuotientRing;

/// One differential: images of the generators of F_i in F_{i-1} (or in the ambient free
/// module for i = 0), together with the internal degrees of the generators.
#[derive(Clone, Debug)]
pub struct Step {
    pub degrees: Vec<usize>,
    pub images: Vec<SparseVec>,
}

#[derive(Clone, Debug)]
pub struct ResolutionData {
    ring: QuotientRing,
    graded: bool,
    ambient_degrees: Vec<usize>,
    steps: Vec<Step>,
}

/// β_{i,j}: homological degree -> internal degree -> count.
pub type GradedBetti = Vec<BTreeMap<usize, usize>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiNumbers {
    pub totals: Vec<usize>,
    pub graded: Option<GradedBetti>,
}

impl BettiNumbers {
    /// β_{i,j} = 0 whenever j != i + shift.
    pub fn is_linear(&self, shift: usize) -> Option<bool> {
        self.graded.as_ref().map(|g| g.iter().enumerate().all(|(i, row)| row.iter().all(|(j, c)| *c == 0 || *j == i + shift)))
    }
}

impl ResolutionData {
    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Betti numbers of the resolved module.
    pub fn betti(&self) -> BettiNumbers {
        let totals = self.steps.iter().map(|s| s.degrees.len()).collect();
        let graded = self.graded.then(|| {
            self.steps
                .iter()
                .map(|s| {
                    let mut row = BTreeMap::new();
                    for d in &s.degrees {
                        *row.entry(*d).or_insert(0) += 1;
                    }
                    row
                })
                .collect()
        });
        BettiNumbers { totals, graded }
    }

    /// Degrees of the generators of the free module F_i (i = -1 is the ambient module).
    fn degrees(&self, i: isize) -> &[usize] {
        if i < 0 {
            &self.ambient_degrees
        } else {
            &self.steps[i as usize].degrees
        }
    }

    /// Image of an element of F_i under the differential.
    pub fn apply(&self, i: usize, x: &SparseVec) -> SparseVec {
        map_free(&self.ring, &self.steps[i].images, x)
    }
}

/// r * v for a basis element r of R and v in a free module.
fn mul_basis_vec(ring: &QuotientRing, r: usize, v: &SparseVec) -> SparseVec {
    let d = ring.dim();
    let mut acc = BTreeMap::new();
    for (k, c) in v {
        let (g, b) = (k / d, k % d);
        for (e, a) in ring.mul_basis(r, b) {
            let slot = acc.entry(g * d + e).or_insert_with(|| ring.field().zero());
            *slot = &*slot + &(c * &a);
        }
    }
    linalg::from_map(acc)
}

fn mul_var_vec(ring: &QuotientRing, var: usize, v: &SparseVec) -> SparseVec {
    let d = ring.dim();
    let mut out: SparseVec = Vec::new();
    let mut by_gen: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (k, c) in v {
        by_gen.entry(k / d).or_default().push((k % d, c.clone()));
    }
    for (g, e) in by_gen {
        out.extend(ring.mul_var(var, &e).into_iter().map(|(b, c)| (g * d + b, c)));
    }
    out
}

/// The R-linear map sending generator g to `images[g]`, applied to `x`.
fn map_free(ring: &QuotientRing, images: &[SparseVec], x: &SparseVec) -> SparseVec {
    let d = ring.dim();
    let mut acc = BTreeMap::new();
    for (k, c) in x {
        let (g, b) = (k / d, k % d);
        for (e, a) in mul_basis_vec(ring, b, &images[g]) {
            let slot = acc.entry(e).or_insert_with(|| ring.field().zero());
            *slot = &*slot + &(c * &a);
        }
    }
    linalg::from_map(acc)
}

/// Coordinates of the free module with the given generator degrees lying in internal
/// degree `deg` (all coordinates when `deg` is `None`).
fn free_piece(ring: &QuotientRing, degrees: &[usize], deg: Option<usize>) -> Result<Vec<usize>> {
    let d = ring.dim();
    let mut out = Vec::new();
    for (g, e) in degrees.iter().enumerate() {
        let range = match deg {
            None => 0..d,
            Some(deg) if deg < *e => 0..0,
            Some(deg) => ring.degree_range(deg - e)?,
        };
        out.extend(range.map(|b| g * d + b));
    }
    Ok(out)
}

/// Options for [`resolve`].
struct Plan {
    graded: bool,
    /// Largest internal degree examined for the generators of F_i; without a cap every
    /// degree up to the top degree of the free module is examined.
    degree_cap: Option<Box<dyn Fn(usize) -> usize + Sync>>,
}

impl Plan {
    fn degrees(&self, ring: &QuotientRing, step: usize, lo: usize, top_shift: usize) -> Vec<Option<usize>> {
        if !self.graded {
            return vec![None];
        }
        let mut hi = top_shift + ring.max_degree();
        if let Some(cap) = &self.degree_cap {
            hi = hi.min(cap(step));
        }
        (lo..=hi).map(Some).collect()
    }
}

/// Minimal generators of the submodule spanned (as a k-space, already an R-submodule) by
/// the pieces of `kernel`, given per degree.
fn minimal_generators(ring: &QuotientRing, pieces: &BTreeMap<usize, Vec<SparseVec>>, graded: bool, ambient_dim: usize) -> Vec<(usize, SparseVec)> {
    let field = ring.field();
    let mut gens = Vec::new();
    for (&deg, piece) in pieces {
        let lower: &[SparseVec] = if graded {
            match deg.checked_sub(1).and_then(|p| pieces.get(&p)) {
                Some(l) => l,
                None => &[],
            }
        } else {
            piece
        };
        let mut span = Echelon::new(field, ambient_dim);
        for v in lower {
            for x in 0..ring.nvars() {
                span.insert(mul_var_vec(ring, x, v));
            }
        }
        for v in piece {
            if span.insert(v.clone()) {
                gens.push((deg, v.clone()));
            }
        }
    }
    gens
}

/// Resolves the submodule of the free module with generator degrees `ambient` spanned
/// over R by `gens` (each with its internal degree), through F_0..F_{steps-1}.
fn resolve(ring: QuotientRing, ambient: Vec<usize>, gens: Vec<(usize, SparseVec)>, steps: usize, plan: Plan) -> Result<ResolutionData> {
    let field = ring.field();
    let rd = ring.dim();
    // The k-span of the submodule: all r * g.
    let mut pieces: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
    {
        let lo = gens.iter().map(|g| g.0).min().unwrap_or(0);
        let hi = gens.iter().map(|g| g.0).max().unwrap_or(0);
        for deg in plan.degrees(&ring, 0, lo, hi) {
            let mut span = Echelon::new(field, ambient.len() * rd);
            for (e, g) in &gens {
                let range = match deg {
                    None => 0..rd,
                    Some(d) if d < *e => 0..0,
                    Some(d) => ring.degree_range(d - e)?,
                };
                for b in range {
                    span.insert(mul_basis_vec(&ring, b, g));
                }
            }
            pieces.insert(deg.unwrap_or(0), span.rref());
        }
    }
    let mut data = ResolutionData { ring, graded: plan.graded, ambient_degrees: ambient, steps: Vec::new() };
    let mut ambient_dim = data.ambient_degrees.len() * rd;
    for i in 0..steps {
        let mingens = minimal_generators(&data.ring, &pieces, plan.graded, ambient_dim);
        let step = Step { degrees: mingens.iter().map(|g| g.0).collect(), images: mingens.into_iter().map(|g| g.1).collect() };
        data.steps.push(step);
        if i + 1 == steps || data.steps[i].degrees.is_empty() {
            break;
        }
        // kernel of F_i -> F_{i-1}, degree by degree
        let degrees = data.steps[i].degrees.clone();
        let lo = degrees.iter().copied().min().unwrap_or(0);
        let hi = degrees.iter().copied().max().unwrap_or(0);
        let ring = &data.ring;
        let images = &data.steps[i].images;
        let target_dim = ambient_dim;
        let list = plan.degrees(ring, i + 1, lo, hi);
        let computed: Vec<(usize, Vec<SparseVec>)> = list
            .into_par_iter()
            .map(|deg| -> Result<(usize, Vec<SparseVec>)> {
                let coords = free_piece(ring, &degrees, deg)?;
                let cols: Vec<SparseVec> = coords.iter().map(|&k| map_free(ring, images, &vec![(k, field.one())])).collect();
                let rows = linalg::transpose(&cols, target_dim);
                let ker = linalg::kernel(field, coords.len(), rows.into_iter().filter(|r| !r.is_empty()));
                let vecs = ker.iter().map(|c| c.iter().map(|(k, a)| (coords[*k], a.clone())).collect()).collect();
                Ok((deg.unwrap_or(0), vecs))
            })
            .collect::<Result<_>>()?;
        pieces = computed.into_iter().collect();
        ambient_dim = degrees.len() * rd;
    }
    Ok(data)
}

fn check_limit(limit: i64) -> Result<usize> {
    usize::try_from(limit).map_err(|_| Error::InvalidInput(format!("limit must be non-negative, got {limit}")))
}

/// Plan for a graded ring. Artinian rings need no cap. A truncated ring is capped at
/// degree `first + i * D` for the generators of F_i, where D bounds the degrees of a
/// Gröbner basis: the generators of F_i for the resolution of k sit in degree at most
/// 1 + (i-1)(D-1), and the looser cap keeps linearity a computed fact rather than an
/// assumption.
fn plan_for(ring: &QuotientRing, first: usize) -> Plan {
    if !ring.is_graded() {
        return Plan { graded: false, degree_cap: None };
    }
    if ring.is_artinian() {
        return Plan { graded: true, degree_cap: None };
    }
    let slope = ring.max_gb_degree().max(2);
    Plan { graded: true, degree_cap: Some(Box::new(move |i| first + i * slope)) }
}

fn prepared_ring(ring: &QuotientRing, limit: usize, first: usize) -> Result<QuotientRing> {
    if ring.is_artinian() {
        return Ok(ring.clone());
    }
    if !ring.is_graded() {
        return Err(Error::NotArtinian("resolutions need an artinian or graded ring".into()));
    }
    let slope = ring.max_gb_degree().max(2);
    ring.extended_to(first + (limit + 1) * slope + 1)
}

/// Resolution of the ideal of R generated by `gens`, through F_{limit}. `first` is the
/// lowest degree of a generator.
fn resolve_ideal(ring: &QuotientRing, gens: Vec<(usize, SparseVec)>, limit: usize, first: usize) -> Result<ResolutionData> {
    let r = prepared_ring(ring, limit, first)?;
    let plan = plan_for(&r, first);
    resolve(r, vec![0], gens, limit + 1, plan)
}

/// Betti numbers of k over R, β_0..β_limit.
pub fn betti_numbers_k(ring: &QuotientRing, limit: i64) -> Result<BettiNumbers> {
    let limit = check_limit(limit)?;
    let mut totals = vec![1];
    let mut graded = ring.is_graded().then(|| vec![BTreeMap::from([(0usize, 1usize)])]);
    if limit == 0 || ring.nvars() == 0 {
        return Ok(BettiNumbers { totals, graded });
    }
    let m = resolve_ideal(ring, (0..ring.nvars()).map(|v| (1, ring.variable(v))).collect(), limit - 1, 1)?;
    let b = m.betti();
    totals.extend(b.totals);
    if let (Some(g), Some(mg)) = (graded.as_mut(), b.graded) {
        g.extend(mg);
    }
    Ok(BettiNumbers { totals, graded })
}

/// Minimal resolution of 𝔪^s through F_{limit}.
pub fn resolve_power(ring: &QuotientRing, s: usize, limit: usize) -> Result<ResolutionData> {
    let r = prepared_ring(ring, limit, s)?;
    let one = r.field().one();
    let gens: Vec<(usize, SparseVec)> = if r.is_graded() {
        r.degree_range(s)?.map(|b| (s, vec![(b, one.clone())])).collect()
    } else {
        r.power_ideal_basis(s)?.into_iter().map(|v| (0, v)).collect()
    };
    resolve_ideal(&r, gens, limit, s)
}

/// Minimal resolution of the ideal of an artinian R generated by arbitrary elements,
/// through F_{limit}. The grading is ignored, so the generators need not be homogeneous.
pub fn resolve_ideal_generated_by(ring: &QuotientRing, gens: &[SparseVec], limit: usize) -> Result<ResolutionData> {
    if !ring.is_artinian() {
        return Err(Error::NotArtinian("resolving an arbitrary ideal needs an artinian ring".into()));
    }
    let gens = gens.iter().filter(|g| !g.is_empty()).map(|g| (0, g.clone())).collect();
    resolve(ring.clone(), vec![0], gens, limit + 1, Plan { graded: false, degree_cap: None })
}

/// Graded Betti numbers of R over the polynomial ring, computed from a minimal resolution of
/// the defining ideal.
pub fn betti_table_over_polynomial_ring(ring: &QuotientRing) -> Result<GradedBetti> {
    if !ring.is_graded() {
        return Err(Error::NotGraded("the Betti table over the polynomial ring needs a graded ring".into()));
    }
    let n = ring.nvars();
    let reg = ring.regularity_bound();
    let horizon = n + reg + 2;
    let poly = QuotientRing::with_horizon(ring.field(), ring.names().to_vec(), Vec::new(), ring.order(), horizon)?;
    let gens: Vec<(usize, SparseVec)> = ring
        .relations()
        .iter()
        .map(|p| Ok((p.max_degree().unwrap() as usize, poly.elem(p)?)))
        .collect::<Result<_>>()?;
    let mut table: GradedBetti = vec![BTreeMap::from([(0usize, 1usize)])];
    if gens.is_empty() {
        return Ok(table);
    }
    let plan = Plan { graded: true, degree_cap: Some(Box::new(move |i| i + 1 + reg)) };
    let res = resolve(poly, vec![0], gens, n, plan)?;
    let b = res.betti().graded.unwrap();
    table.extend(b.into_iter().filter(|row| !row.is_empty()));
    Ok(table)
}

/// Per-degree evidence from lifting the inclusion 𝔪^s ⊆ 𝔪^b.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorMapDegree {
    pub degree: usize,
    pub source_rank: usize,
    pub target_rank: usize,
    /// rank of the lifted map reduced modulo 𝔪
    pub rank_mod_m: usize,
}

/// A choice of solution for each lifting system: given a particular solution and a basis
/// of the null space (both in the coordinates of the candidate basis), return the solution
/// to use.
pub type LiftChoice<'a> = dyn FnMut(&SparseVec, &[SparseVec]) -> SparseVec + 'a;

/// Lifts 𝔪^s ⊆ 𝔪^b to the minimal resolutions and reports, for i = 0..=limit, the rank of
/// Tor_i(𝔪^s, k) -> Tor_i(𝔪^b, k).
pub fn tor_map_ranks(ring: &QuotientRing, s: usize, b: usize, limit: usize, choose: &mut LiftChoice) -> Result<Vec<TorMapDegree>> {
    if !ring.is_artinian() && !ring.is_graded() {
        return Err(Error::NotArtinian("Tor maps need an artinian or graded ring".into()));
    }
    if b > s {
        return Err(Error::InvalidInput(format!("need s >= b, got s = {s}, b = {b}")));
    }
    // Resolve both powers over one ring so that coordinates agree.
    let base = prepared_ring(ring, limit, s)?;
    let src = resolve_power(&base, s, limit)?;
    let tgt = resolve_power(&base, b, limit)?;
    let r = src.ring();
    let field = r.field();
    let rd = r.dim();
    let mut lifts: Vec<Vec<SparseVec>> = Vec::new();
    let mut out = Vec::new();
    for i in 0..=limit {
        if i >= src.steps.len() || i >= tgt.steps.len() {
            break;
        }
        let src_gens = &src.steps[i];
        let tgt_degrees = tgt.degrees(i as isize);
        let dim = tgt.degrees(i as isize - 1).len() * rd;
        // one elimination per internal degree serves every generator of that degree
        let mut systems: BTreeMap<Option<usize>, (Vec<usize>, Echelon, Vec<SparseVec>)> = BTreeMap::new();
        let mut alpha = Vec::new();
        for (g, img) in src_gens.images.iter().enumerate() {
            // wanted: d_tgt(x) = alpha_{i-1}(d_src(e_g)), with alpha_{-1} the inclusion
            let target = if i == 0 { img.clone() } else { map_free(r, &lifts[i - 1], img) };
            let deg = src.graded.then_some(src_gens.degrees[g]);
            if !systems.contains_key(&deg) {
                let coords = free_piece(r, tgt_degrees, deg)?;
                let mut e = Echelon::new(field, dim);
                let mut null = Vec::new();
                for (n, &k) in coords.iter().enumerate() {
                    if let Some(rel) = e.insert_tagged(tgt.apply(i, &vec![(k, field.one())]), linalg::unit(n, field)) {
                        null.push(rel);
                    }
                }
                systems.insert(deg, (coords, e, null));
            }
            let (coords, e, null) = &systems[&deg];
            let (rem, particular) = e.reduce_with_tags(&target);
            if !rem.is_empty() {
                return Err(Error::InvalidInput("chain map lift failed; the resolutions are not exact".into()));
            }
            let x = choose(&particular, null);
            alpha.push(x.iter().map(|(k, a)| (coords[*k], a.clone())).collect::<SparseVec>());
        }
        // reduce modulo 𝔪: keep coefficients on the basis element 1 of each target generator
        let reduced: Vec<SparseVec> = alpha
            .iter()
            .map(|v| v.iter().filter(|(k, _)| k % rd == 0).map(|(k, a)| (k / rd, a.clone())).collect())
            .collect();
        out.push(TorMapDegree {
            degree: i,
            source_rank: src_gens.degrees.len(),
            target_rank: tgt.steps[i].degrees.len(),
            rank_mod_m: linalg::rank(field, tgt.steps[i].degrees.len(), reduced),
        });
        lifts.push(alpha);
    }
    Ok(out)
}

/// Whether Tor_i(𝔪^s, k) -> Tor_i(𝔪^b, k) vanishes for i = 0..=limit.
pub fn tor_map_vanishes(ring: &QuotientRing, s: usize, b: usize, limit: i64) -> Result<(bool, Vec<TorMapDegree>)> {
    let limit = check_limit(limit)?;
    let ranks = tor_map_ranks(ring, s, b, limit, &mut |p, _| p.clone())?;
    Ok((ranks.iter().all(|d| d.rank_mod_m == 0), ranks))
}

/// Whether every entry of every differential lies in 𝔪.
pub fn is_minimal(res: &ResolutionData) -> bool {
    let rd = res.ring.dim();
    res.steps.iter().skip(1).all(|s| s.images.iter().all(|v| v.iter().all(|(k, _)| k % rd != 0)))
}

/// Whether consecutive differentials compose to zero.
pub fn composes_to_zero(res: &ResolutionData) -> bool {
    (1..res.steps.len()).all(|i| res.steps[i].images.iter().all(|img| map_free(&res.ring, &res.steps[i - 1].images, img).is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ring;

    fn ring(text: &str) -> QuotientRing {
        parse_ring(text).unwrap().build().unwrap()
    }

    #[test]
    fn dual_numbers_are_periodic() {
        let r = ring("vars x\nideal:\nx^2\n");
        let b = betti_numbers_k(&r, 5).unwrap();
        assert_eq!(b.totals, vec![1; 6]);
        assert_eq!(b.is_linear(0), Some(true));
    }

    #[test]
    fn hypersurface_cubic_is_not_linear() {
        let r = ring("vars x\nideal:\nx^3\n");
        let b = betti_numbers_k(&r, 3).unwrap();
        assert_eq!(b.totals, vec![1; 4]);
        let g = b.graded.unwrap();
        assert_eq!(g[2], BTreeMap::from([(3, 1)]));
        assert_eq!(g[3], BTreeMap::from([(4, 1)]));
    }

    #[test]
    fn polynomial_ring_table() {
        let r = ring("vars x\nideal:\nx^2\n");
        let t = betti_table_over_polynomial_ring(&r).unwrap();
        assert_eq!(t, vec![BTreeMap::from([(0, 1)]), BTreeMap::from([(2, 1)])]);
    }

    #[test]
    fn identity_map_does_not_vanish() {
        let r = ring("vars x,y\nideal:\nx^2\ny^2\n");
        let (v, ranks) = tor_map_vanishes(&r, 1, 1, 2).unwrap();
        assert!(!v);
        assert_eq!(ranks[0].rank_mod_m, 2);
        assert!(tor_map_vanishes(&r, 1, 2, 1).is_err());
    }

    #[test]
    fn negative_limit_rejected() {
        let r = ring("vars x\nideal:\nx^2\n");
        assert!(matches!(betti_numbers_k(&r, -1), Err(Error::InvalidInput(_))));
    }
}
