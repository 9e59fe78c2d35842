//! Deciders for multiplicative conditions on Koszul homology.
//!
//! Every check returns a [`ConditionReport`]. Hypothesis failures are kept apart from
//! failures of the conclusion: the verdict is `HypothesesNotMet` whenever a hypothesis
//! check fails, even if the conclusion happens to hold.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::koszul::{Bidegree, HomologyAlgebra, Koszul, KoszulElement};
use crate::linalg::{self, Echelon, SparseVec};
use crate::poly::Monomial;
use crate::quotient::QuotientRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    HypothesesNotMet,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::HypothesesNotMet => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
}

/// Rank data for one piece: the piece passes iff `combined_rank == target_rank`, i.e.
/// the source lies in the target span.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceCertificate {
    pub homological_degree: usize,
    pub internal_degree: Option<usize>,
    pub source_dim: usize,
    pub target_rank: usize,
    pub combined_rank: usize,
    pub passed: bool,
}

/// An element of a source piece that is not in the target span (or a nonzero product).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub homological_degree: usize,
    pub internal_degree: Option<usize>,
    pub note: String,
    pub cycle: String,
    #[serde(skip)]
    pub element: KoszulElement,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub verdict: Verdict,
    pub hypotheses: Vec<HypothesisCheck>,
    pub pieces: Vec<PieceCertificate>,
    pub witnesses: Vec<Witness>,
}

impl ConditionReport {
    fn new(condition: String) -> Self {
        ConditionReport { condition, verdict: Verdict::Holds, hypotheses: Vec::new(), pieces: Vec::new(), witnesses: Vec::new() }
    }

    fn hypothesis(&mut self, name: impl Into<String>, passed: bool) {
        self.hypotheses.push(HypothesisCheck { name: name.into(), passed });
    }

    fn finish(mut self, conclusion: bool) -> Self {
        self.verdict = if self.hypotheses.iter().any(|h| !h.passed) {
            Verdict::HypothesesNotMet
        } else if conclusion {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

fn require_cycle(k: &Koszul, z: &KoszulElement) -> Result<()> {
    if k.diff(z).is_zero() {
        Ok(())
    } else {
        Err(Error::NotACycle(k.format(z)))
    }
}

fn bihomogeneous(k: &Koszul, z: &KoszulElement) -> Result<Option<Bidegree>> {
    if z.is_zero() {
        return Ok(None);
    }
    k.bidegree(z).map(Some).ok_or_else(|| Error::InvalidInput(format!("`{}` is not bihomogeneous", k.format(z))))
}

fn strand(bd: Bidegree) -> usize {
    bd.1 - bd.0
}

/// Whether z z' = 0 in K for every ordered pair, including z = z'.
pub fn check_trivial_products(k: &Koszul, cycles: &[(String, KoszulElement)]) -> Result<ConditionReport> {
    for (_, z) in cycles {
        require_cycle(k, z)?;
    }
    let mut report = ConditionReport::new("trivial products".into());
    for (la, a) in cycles {
        for (lb, b) in cycles {
            let prod = k.mul(a, b);
            if !prod.is_zero() {
                let bd = k.bidegree(&prod);
                report.witnesses.push(Witness {
                    homological_degree: prod.homological_degree().unwrap_or(0),
                    internal_degree: bd.map(|b| b.1),
                    note: format!("{la} * {lb} is nonzero"),
                    cycle: k.format(&prod),
                    element: prod,
                });
            }
        }
    }
    let ok = report.witnesses.is_empty();
    Ok(report.finish(ok))
}

/// Compares H_bd with the span `target` (class coordinates) and records the result.
fn compare_classes(h: &HomologyAlgebra, bd: Bidegree, target: &Echelon, report: &mut ConditionReport, note: &str) -> bool {
    let dim = h.dim(bd.0, bd.1);
    let field = h.ring().field();
    let mut combined = target.clone();
    let mut missing = None;
    for c in 0..dim {
        if combined.insert(linalg::unit(c, field)) && missing.is_none() {
            missing = Some(c);
        }
    }
    let passed = missing.is_none();
    report.pieces.push(PieceCertificate {
        homological_degree: bd.0,
        internal_degree: Some(bd.1),
        source_dim: dim,
        target_rank: target.rank(),
        combined_rank: combined.rank(),
        passed,
    });
    if let Some(c) = missing {
        let element = h.representative(bd, c);
        report.witnesses.push(Witness {
            homological_degree: bd.0,
            internal_degree: Some(bd.1),
            note: format!("class in H_{{{},{}}} {note}", bd.0, bd.1),
            cycle: h.koszul().format(&element),
            element,
        });
    }
    passed
}

fn generator_list(h: &HomologyAlgebra, classes: &[(String, KoszulElement)]) -> Result<Vec<(KoszulElement, Bidegree)>> {
    let k = h.koszul();
    let mut out = Vec::new();
    for (_, z) in classes {
        require_cycle(k, z)?;
        if let Some(bd) = bihomogeneous(k, z)? {
            out.push((z.clone(), bd));
        }
    }
    Ok(out)
}

/// Whether every class with j - i > 1 lies in the ideal of H generated by `classes`.
pub fn check_nonlinear_generated_by(h: &HomologyAlgebra, classes: &[(String, KoszulElement)]) -> Result<ConditionReport> {
    let gens = generator_list(h, classes)?;
    let mut report = ConditionReport::new("nonlinear strands generated".into());
    let mut ok = true;
    for (bd, _) in h.dims() {
        if strand(bd) > 1 {
            let span = h.ideal_span(&gens, bd, |_| true);
            ok &= compare_classes(h, bd, &span, &mut report, "outside the ideal of the given classes");
        }
    }
    Ok(report.finish(ok))
}

/// Graded condition Z_{t,b,s}: the cycles multiply trivially and every class of strand s
/// lies in Σ_z [z]·(classes of strand at least b).
pub fn check_z_graded(h: &HomologyAlgebra, t: usize, b: usize, s: usize, cycles: &[(String, KoszulElement)]) -> Result<ConditionReport> {
    let ring = h.ring();
    let k = h.koszul();
    let gens = generator_list(h, cycles)?;
    for ((label, z), (_, bd)) in cycles.iter().filter(|(_, z)| !z.is_zero()).zip(&gens) {
        if strand(*bd) < t {
            return Err(Error::Precondition(format!(
                "{label} = {} has strand degree {} < t = {t}",
                k.format(z),
                strand(*bd)
            )));
        }
    }
    let mut report = ConditionReport::new(format!("Z({t},{b},{s})"));
    let v = ring.v_invariant()? as usize;
    report.hypothesis(format!("v(R) = {v} >= t+1 = {}", t + 1), v >= t + 1);
    report.hypothesis(format!("t+1 = {} >= 2", t + 1), t >= 1);
    report.hypothesis(format!("s-t <= b <= s-1 (b = {b}, s = {s}, t = {t})"), s <= b + t && b + 1 <= s);
    report.hypothesis(format!("m^{} = 0", s + 1), ring.is_artinian() && ring.power_vanishes(s + 1));
    let trivial = check_trivial_products(k, cycles)?;
    let mut ok = trivial.holds();
    report.witnesses.extend(trivial.witnesses);
    for (bd, _) in h.dims() {
        if strand(bd) == s {
            let span = h.ideal_span(&gens, bd, |o| strand(o) >= b);
            ok &= compare_classes(h, bd, &span, &mut report, "outside the span of the products");
        }
    }
    Ok(report.finish(ok))
}

/// Graded condition P_{t,r}: every class of strand at least t lies in
/// [l]·(classes of strand at least t-1).
pub fn check_p_graded(h: &HomologyAlgebra, t: usize, r: usize, l: &KoszulElement) -> Result<ConditionReport> {
    let k = h.koszul();
    require_cycle(k, l)?;
    let lbd = bihomogeneous(k, l)?;
    if let Some(bd) = lbd {
        if bd.0 != r {
            return Err(Error::Precondition(format!("l has homological degree {} but r = {r}", bd.0)));
        }
    }
    let mut report = ConditionReport::new(format!("P({t},{r})"));
    report.hypothesis(format!("t = {t} >= 1"), t >= 1);
    let gens: Vec<(KoszulElement, Bidegree)> = lbd.map(|bd| (l.clone(), bd)).into_iter().collect();
    let mut ok = true;
    for (bd, _) in h.dims() {
        if strand(bd) >= t && bd != (0, 0) {
            let span = h.ideal_span(&gens, bd, |o| strand(o) + 1 >= t);
            ok &= compare_classes(h, bd, &span, &mut report, "not a multiple of [l]");
        }
    }
    Ok(report.finish(ok))
}

/// Condition P_{t,r} in the m-adic filtration: for every i,
/// Z(m^t K)_i ⊆ l·Z(m^{t-1} K)_{i-r} + ∂(m^{t-1} K_{i+1}).
pub fn check_p_local(ring: &QuotientRing, t: usize, r: usize, l: &KoszulElement) -> Result<ConditionReport> {
    let k = Koszul::new(ring);
    require_cycle(&k, l)?;
    if !l.is_zero() && l.homological_degree() != Some(r) {
        return Err(Error::Precondition(format!("l = {} is not homogeneous of homological degree {r}", k.format(l))));
    }
    if !ring.is_artinian() {
        return Err(Error::NotArtinian("the filtered condition needs an artinian ring".into()));
    }
    let mut report = ConditionReport::new(format!("P({t},{r}) local"));
    report.hypothesis(format!("t = {t} >= 1"), t >= 1);
    let field = ring.field();
    let mut ok = true;
    for i in 0..=ring.nvars() {
        let source = k.filtered_cycles(t, i)?;
        let mut target = Echelon::new(field, k.dim(i));
        if t >= 1 {
            if i >= r && !l.is_zero() {
                for z in k.filtered_cycles(t - 1, i - r)? {
                    let prod = k.mul(l, &k.from_vec(i - r, &z));
                    if !prod.is_zero() {
                        target.insert(k.to_vec(&prod).1);
                    }
                }
            }
            for b in k.filtered_boundaries(t - 1, i)? {
                target.insert(b);
            }
        }
        let target_rank = target.rank();
        let mut missing: Option<&SparseVec> = None;
        for z in &source {
            if target.insert(z.clone()) && missing.is_none() {
                missing = Some(z);
            }
        }
        let passed = missing.is_none();
        ok &= passed;
        report.pieces.push(PieceCertificate {
            homological_degree: i,
            internal_degree: None,
            source_dim: source.len(),
            target_rank,
            combined_rank: target.rank(),
            passed,
        });
        if let Some(z) = missing {
            let element = k.from_vec(i, z);
            report.witnesses.push(Witness {
                homological_degree: i,
                internal_degree: None,
                note: format!("cycle in m^{t} K_{i} outside l*Z(m^{} K) + B", t.saturating_sub(1)),
                cycle: k.format(&element),
                element,
            });
        }
    }
    Ok(report.finish(ok))
}

/// Sufficient condition for R to be Golod: n^{2t} ⊆ I ⊆ n^{t+1}, tested on the relations
/// and on the normal forms of all monomials of degree 2t.
pub fn lofwall_golod_test(ring: &QuotientRing, t: usize) -> Result<bool> {
    if ring.v_invariant()? < t as u32 + 1 {
        return Ok(false);
    }
    let gb = ring.gb();
    let field = ring.field();
    Ok(Monomial::all_of_degree(ring.nvars(), 2 * t as u32)
        .into_iter()
        .all(|m| gb.normal_form(&crate::poly::Polynomial::monomial(field, ring.order(), m, field.one())).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ring;

    fn ring(text: &str) -> QuotientRing {
        parse_ring(text).unwrap().build().unwrap()
    }

    #[test]
    fn lofwall_on_small_rings() {
        let r = ring("vars x\nideal:\nx^2\n");
        assert!(lofwall_golod_test(&r, 1).unwrap());
        let r = ring("vars x,y\nideal:\nx^2\ny^3\n");
        assert!(!lofwall_golod_test(&r, 1).unwrap());
    }

    #[test]
    fn zero_l_fails_when_deep_cycles_exist() {
        let r = ring("vars x\nideal:\nx^3\n");
        let k = Koszul::new(&r);
        let report = check_p_local(&r, 2, 1, &KoszulElement::zero()).unwrap();
        assert_eq!(report.verdict, Verdict::Fails);
        // x^2*T1 is a cycle in m^2 K_1, but ∂(m K_2) = 0 since n = 1
        assert_eq!(report.witnesses[0].cycle, "x^2*T1");
        assert!(k.diff(&report.witnesses[0].element).is_zero());
        let vacuous = check_p_local(&r, 3, 1, &KoszulElement::zero()).unwrap();
        assert!(vacuous.holds());
    }

    #[test]
    fn non_cycles_are_rejected() {
        let r = ring("vars x,y\nideal:\nx^2\ny^2\n");
        let k = Koszul::new(&r);
        let t1 = k.generator(0);
        assert!(matches!(check_trivial_products(&k, &[("a".into(), t1.clone())]), Err(Error::NotACycle(_))));
        assert!(matches!(check_p_local(&r, 1, 1, &t1), Err(Error::NotACycle(_))));
    }
}
