use koszulkit::koszul::HomologyAlgebra;
use koszulkit::parse::parse_ring;
use koszulkit::resolution::betti_numbers_k;
use koszulkit::series::{golod_formula_series, golod_quotient_series, rf_equal, stretched_series, IntPolynomial, RationalFunctionZ};
use koszulkit::{corpus, QuotientRing};
use num_bigint::BigInt;

fn ring(name: &str) -> QuotientRing {
    corpus::get(name).unwrap().build().unwrap()
}

/// Σ_i dim H_i z^i, internal degrees collapsed.
fn homology_polynomial(r: &QuotientRing) -> IntPolynomial {
    IntPolynomial::from_usize(&HomologyAlgebra::compute(r).unwrap().total_dims())
}

fn as_big(v: &[usize]) -> Vec<BigInt> {
    v.iter().map(|x| BigInt::from(*x)).collect()
}

#[test]
fn socle4_poincare_series() {
    let r = ring("socle4");
    let truncated = r.truncation(4).unwrap();
    let h = homology_polynomial(&truncated);
    assert_eq!(h, IntPolynomial::from_i64(&[1, 15, 30, 23, 7]));
    let s = r.nilpotency_index().unwrap() - 1;
    assert_eq!(s, 4);
    let a = r.power_ideal_basis(s).unwrap().len() as i64;
    assert_eq!(a, 2);
    let f = golod_formula_series(4, a, &h).unwrap();
    let expected = RationalFunctionZ::new(IntPolynomial::one_plus_z().pow(3), IntPolynomial::from_i64(&[1, -1, -12, -10, -1, 2])).unwrap();
    assert!(rf_equal(&f, &expected));
    assert_eq!(f.format(), "(1+z)^3/(1-z-12z^2-10z^3-z^4+2z^5)");
    let unreduced = RationalFunctionZ::new(IntPolynomial::one_plus_z().pow(4), IntPolynomial::from_i64(&[1, 0, -13, -22, -11, 1, 2])).unwrap();
    assert!(rf_equal(&f, &unreduced));
    let direct = betti_numbers_k(&r, 5).unwrap();
    assert_eq!(f.expand(5).unwrap(), as_big(&direct.totals));
    // the quotient alone is Golod: its own series comes from h
    let q = golod_quotient_series(4, &h).unwrap();
    let direct = betti_numbers_k(&truncated, 4).unwrap();
    assert_eq!(q.expand(4).unwrap(), as_big(&direct.totals));
}

#[test]
fn stretched_series_match_resolutions() {
    let b = betti_numbers_k(&ring("stretched323"), 4).unwrap();
    let f = stretched_series(3, 2).unwrap();
    assert_eq!(f.format(), "1/(1-3z+z^2)");
    assert_eq!(f.expand(4).unwrap(), as_big(&b.totals));
    let r = ring("stretched223");
    let b = betti_numbers_k(&r, 5).unwrap();
    let f = stretched_series(2, 2).unwrap();
    assert_eq!(f.format(), "1/(1-2z)");
    assert_eq!(f.expand(4).unwrap(), as_big(&b.totals[..5]));
    let g = golod_quotient_series(2, &homology_polynomial(&r)).unwrap();
    assert!(rf_equal(&f, &g));
    assert_eq!(g.expand(5).unwrap(), as_big(&b.totals));
}

#[test]
fn golod_quotient_of_the_square_of_the_maximal_ideal() {
    let r = parse_ring("vars x,y\nideal:\nx^2\nx*y\ny^2\n").unwrap().build().unwrap();
    let h = homology_polynomial(&r);
    assert_eq!(h, IntPolynomial::from_i64(&[1, 3, 2]));
    let f = golod_quotient_series(2, &h).unwrap();
    assert_eq!(f.format(), "1/(1-2z)");
    assert_eq!(f.expand(6).unwrap(), as_big(&betti_numbers_k(&r, 6).unwrap().totals));
}

#[test]
fn certified_formulas_expand_to_non_negative_coefficients() {
    let series = [
        golod_formula_series(4, 2, &IntPolynomial::from_i64(&[1, 15, 30, 23, 7])).unwrap(),
        stretched_series(3, 2).unwrap(),
        stretched_series(4, 1).unwrap(),
        stretched_series(2, 2).unwrap(),
    ];
    for f in series {
        assert!(f.expand(20).unwrap().iter().all(|c| *c >= BigInt::from(0)));
    }
}
