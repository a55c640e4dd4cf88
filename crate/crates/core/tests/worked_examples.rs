use expoly_core::expr::{lower_joint, lower_to_symbolic, lower_xpoly, lower_ypoly, parse_expression, render_laurent};
use expoly_core::sym::{
    critical_pair, derivation_du, discriminant, extract_exp_poly_roots, frequency_independence, is_squarefree,
    jacobian_det, euler_identity, laurent_gcd, monomial_shape_check, ratfunc_roots, separate_variable,
    squarefree_decompose, GaussRat, Independence, LaurentPoly, Monomial, RatFunc, ShapeCheck, UnitBasis, ZPoly,
};
use expoly_core::{ParseError, SymError};
use num_bigint::BigInt;
use num_rational::BigRational;

fn lower(s: &str) -> (LaurentPoly, UnitBasis) {
    lower_to_symbolic(&parse_expression(s).unwrap()).unwrap()
}

fn joint(srcs: &[&str]) -> (Vec<LaurentPoly>, UnitBasis) {
    let asts: Vec<_> = srcs.iter().map(|s| parse_expression(s).unwrap()).collect();
    lower_joint(&asts.iter().collect::<Vec<_>>()).unwrap()
}

fn zp(cs: &[(i64, i64)]) -> ZPoly {
    ZPoly::new(cs.iter().map(|&(a, b)| GaussRat::gaussian(a, b)).collect())
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn lowering_examples() {
    let (p, b) = lower("exp[z] + exp[2*z]");
    assert_eq!(b.freqs(), &[ZPoly::z()]);
    assert_eq!(render_laurent(&p, &b), "exp[z] + exp[z]^2");

    let (p, b) = lower("z^2 * exp[z^2] + 1/z");
    assert_eq!(b.freqs(), &[zp(&[(0, 0), (0, 0), (1, 0)])]);
    assert_eq!(p.coeff(&Monomial(vec![1])), RatFunc::from_poly(zp(&[(0, 0), (0, 0), (1, 0)])));
    assert_eq!(p.coeff(&Monomial(vec![0])), RatFunc::z().inv());

    let err = lower_to_symbolic(&parse_expression("exp[z+1]").unwrap()).unwrap_err();
    assert!(matches!(err, ParseError::NonzeroConstantFrequency { .. }));
}

#[test]
fn independence_examples() {
    let i1 = zp(&[(0, 0), (1, 1)]);
    assert_eq!(frequency_independence(&[ZPoly::z(), i1]), Independence::Independent);
    let two_z = zp(&[(0, 0), (2, 0)]);
    assert_eq!(frequency_independence(&[ZPoly::z(), two_z]), Independence::Dependent(ints(&[2, -1])));
    let z2 = zp(&[(0, 0), (0, 0), (1, 0)]);
    let z2z = zp(&[(0, 0), (1, 0), (1, 0)]);
    assert_eq!(frequency_independence(&[z2, z2z, ZPoly::z()]), Independence::Dependent(ints(&[1, -1, 1])));
}

#[test]
fn ring_examples() {
    let (ps, _) = joint(&["exp[z] + 1", "exp[z] - 1", "exp[2*z] - 1"]);
    assert_eq!(&ps[0] * &ps[1], ps[2]);
    assert_eq!(ps[2].div_exact(&ps[0]).unwrap(), ps[1]);

    let (ps, b) = joint(&["exp[z^2] + z", "exp[z]"]);
    let q = ps[0].div_exact(&ps[1]).unwrap();
    assert_eq!(render_laurent(&q, &b), "z*exp[z]^-1 + exp[z^2]*exp[z]^-1");

    let (ps, _) = joint(&["exp[z] + 1", "exp[z] + 2"]);
    assert!(matches!(ps[0].div_exact(&ps[1]), Err(SymError::NotDivisible { .. })));
}

#[test]
fn gcd_examples() {
    let (ps, b) = joint(&["exp[2*z] - 1", "exp[2*z] - 2*exp[z] + 1"]);
    let g = laurent_gcd(&ps[0], &ps[1]).unwrap();
    assert_eq!(render_laurent(&g, &b), "-1 + exp[z]");

    let (ps, _) = joint(&["exp[z^2] + 1", "exp[z] + 1"]);
    assert!(laurent_gcd(&ps[0], &ps[1]).unwrap().is_one());

    let (f, _) = lower("2*exp[z]^3 + z*exp[z]^2");
    let g = laurent_gcd(&f, &f).unwrap();
    let (expect, _) = lower("exp[z] + z/2");
    assert_eq!(g, expect);
}

#[test]
fn squarefree_examples() {
    let (f, b) = lower("(exp[z] - 1)^2 * (exp[z] + 1)");
    let sf = squarefree_decompose(&f).unwrap();
    let shown: Vec<(String, u32)> = sf.factors.iter().map(|(s, k)| (render_laurent(s, &b), *k)).collect();
    assert_eq!(shown, vec![("1 + exp[z]".to_string(), 1), ("-1 + exp[z]".to_string(), 2)]);

    let (f, b) = lower("exp[z^2]^3 * (exp[z] + z)");
    let sf = squarefree_decompose(&f).unwrap();
    assert_eq!(sf.factors.len(), 1);
    assert_eq!(render_laurent(&sf.factors[0].0, &b), "z + exp[z]");
    assert_eq!(sf.monomial, Monomial(vec![3, 0]));

    let (f, _) = lower("exp[z^2]^2 + exp[z]");
    assert!(is_squarefree(&f).unwrap());
}

#[test]
fn derivation_examples() {
    let (f, b) = lower("exp[z]^2 + z*exp[z]");
    let (expect, _) = lower("2*exp[z]^2 + (1 + z)*exp[z]");
    assert_eq!(derivation_du(&f, &b).unwrap(), expect);

    let (c, b) = lower("(3 + 2i)/5");
    assert!(derivation_du(&c, &b).unwrap().is_zero());

    let (f, b) = lower("exp[z^2]");
    let (expect, _) = lower("2*z*exp[z^2]");
    assert_eq!(derivation_du(&f, &b).unwrap(), expect);
}

#[test]
fn critical_pair_examples() {
    let (f, b) = lower("(exp[z] - 1)^2");
    let cp = critical_pair(&f, &b).unwrap();
    let (fbar, _) = lower("exp[z] - 1");
    assert_eq!(cp.fbar, fbar);
    assert!(cp.is_coprime());
    // Fhat carries the multiplicity: 2·D_u(u - 1) = 2u
    let (u2, _) = lower("2*exp[z]");
    assert_eq!(cp.fhat, u2);

    let (f, b) = lower("(exp[z^2] - 1) * (exp[z] - z)");
    let cp = critical_pair(&f, &b).unwrap();
    assert_eq!(cp.fhat, derivation_du(&f, &b).unwrap());
    let (expect, _) = lower("exp[z^2]*2*z*(exp[z] - z) + (exp[z^2] - 1)*(exp[z] - 1)");
    assert_eq!(cp.fhat, expect);
    assert!(cp.is_coprime());

    let (m, b) = lower("exp[z]^2");
    assert!(matches!(critical_pair(&m, &b), Err(SymError::MonomialInput)));
}

#[test]
fn discriminant_examples() {
    let (f, _) = lower_ypoly(&parse_expression("Y^2 + 3*z*Y + exp[z]").unwrap()).unwrap();
    let (expect, _) = lower("9*z^2 - 4*exp[z]");
    assert_eq!(discriminant(&f), expect);

    let (f, _) = lower_ypoly(&parse_expression("Y^2 - exp[z]").unwrap()).unwrap();
    assert_eq!(discriminant(&f), lower("4*exp[z]").0);

    let (f, _) = lower_ypoly(&parse_expression("Y^3 + exp[z]*Y + z").unwrap()).unwrap();
    assert_eq!(discriminant(&f), lower("-4*exp[z]^3 - 27*z^2").0);
}

#[test]
fn shape_examples() {
    let (d, _) = lower("4*z*exp[z]");
    assert_eq!(
        monomial_shape_check(&d, &[0]).unwrap(),
        ShapeCheck::Monomial { q: LaurentPoly::constant(1, RatFunc::z().scale(&GaussRat::from_int(4))), exponents: vec![1] }
    );
    let (d, _) = lower("exp[z]^2 + 1");
    assert_eq!(monomial_shape_check(&d, &[0]).unwrap(), ShapeCheck::Failure { var: 0, exponents: (0, 2) });
}

#[test]
fn separation_examples() {
    let (f, b) = lower_ypoly(&parse_expression("Y^2 - 2*z*Y + z^2 - exp[2*z]").unwrap()).unwrap();
    let sep = separate_variable(&f, &b, 0).unwrap();
    assert_eq!(sep.t, BigRational::new((-1).into(), 2.into()));
    assert_eq!(sep.s, BigRational::from_integer(1.into()));
    assert_eq!(sep.k, 2);
    assert_eq!(sep.refined_basis.freqs(), &[ZPoly::z()]);
    assert_eq!(render_laurent(&sep.shift, &sep.refined_basis), "-z*exp[z]^-1");
    assert_eq!(sep.recompose(), f.map_coeffs(|c| c.rescale_var(0, 2)));

    let (f, b) = lower_ypoly(&parse_expression("Y^2 - exp[2*z]").unwrap()).unwrap();
    let sep = separate_variable(&f, &b, 0).unwrap();
    assert_eq!(sep.t, BigRational::new((-1).into(), 2.into()));
    assert!(sep.shift.is_zero());
    assert_eq!(sep.reduced.lower_coeffs(), &[LaurentPoly::from_int(0, -1), LaurentPoly::zero(0)]);

    let (f, b) = lower_ypoly(&parse_expression("Y^2 - exp[z^2] - exp[z]").unwrap()).unwrap();
    assert!(matches!(separate_variable(&f, &b, 0), Err(SymError::Precondition(_))));
}

#[test]
fn ratfunc_root_examples() {
    let roots = |s: &str| {
        let (f, _) = lower_ypoly(&parse_expression(s).unwrap()).unwrap();
        let mut r: Vec<String> = ratfunc_roots(&f).unwrap().iter().map(ToString::to_string).collect();
        r.sort();
        r
    };
    assert_eq!(roots("Y^2 - z^2"), vec!["-z", "z"]);
    assert!(roots("Y^2 - z").is_empty());
    assert_eq!(roots("Y^2 - (2*z + 1)*Y + z^2 + z"), vec!["z", "z + 1"]);
}

#[test]
fn extraction_examples() {
    let (f, b) = lower_ypoly(&parse_expression("Y^2 - 2*z*Y + z^2 - exp[2*z]").unwrap()).unwrap();
    let roots = extract_exp_poly_roots(&f, &b).unwrap();
    let mut shown: Vec<String> = roots.iter().map(|r| render_laurent(&r.root, &r.basis)).collect();
    shown.sort();
    assert_eq!(shown, vec!["z + exp[z]", "z - exp[z]"]);

    let (f, b) = lower_ypoly(&parse_expression("Y^2 - 2*exp[z^3]*Y + exp[z^3]^2 - z*exp[2*z]").unwrap()).unwrap();
    assert_eq!(b.len(), 2);
    assert!(extract_exp_poly_roots(&f, &b).unwrap().is_empty());

    let (f, b) = lower_ypoly(&parse_expression("Y - exp[z] - z").unwrap()).unwrap();
    let roots = extract_exp_poly_roots(&f, &b).unwrap();
    assert_eq!(roots.len(), 1);
    assert_eq!(render_laurent(&roots[0].root, &roots[0].basis), "z + exp[z]");
}

#[test]
fn extraction_rejects_repeated_discriminant() {
    // Δ = 4(u - 1)²
    let (f, b) = lower_ypoly(&parse_expression("Y^2 - (exp[z] - 1)^2").unwrap()).unwrap();
    assert!(matches!(extract_exp_poly_roots(&f, &b), Err(SymError::HypothesisFailure(_))));
    // Δ = 0
    let (f, b) = lower_ypoly(&parse_expression("Y^2 - 2*exp[z]*Y + exp[2*z]").unwrap()).unwrap();
    assert!(discriminant(&f).is_zero());
    assert!(matches!(extract_exp_poly_roots(&f, &b), Err(SymError::HypothesisFailure(_))));
}

#[test]
fn jacobian_examples() {
    let x = |s: &str| lower_xpoly(&parse_expression(s).unwrap(), 0, 2).unwrap();
    assert!(jacobian_det(&[x("x0"), x("x1")]).unwrap().is_one());
    let g = jacobian_det(&[x("x0^2"), x("x0*x1 + x1^2")]).unwrap();
    assert_eq!(g, x("2*x0^2 + 4*x0*x1"));
    assert!(euler_identity(&x("x0*x1 + z*x1^2")).unwrap());
    assert!(matches!(euler_identity(&x("x0 + x1^2")), Err(SymError::NotHomogeneous(_))));
}
