mod common;

use common::*;
use gf_core::frame::{curvature, scalar_matrix};
use gf_core::oracle::CoordinateCurvature;
use gf_core::random::FormSampler;
use gf_core::spinor::*;
use gf_core::{Chart, Coframe, CoreError, FrameMetric, MatOrdForm, OrdForm};
use gf_symexpr::{is_zero_complex, CExpr, Domain, Expr};

fn sqrt_half() -> CExpr {
    CExpr::real(Expr::frac(1, 2).sqrt())
}

#[test]
fn soldering_in_cartesian_minkowski() {
    let g = minkowski_cartesian();
    let c = g.chart().clone();
    let x = to_spinor_coframe(&g.coframe, &g.eta, &exact()).unwrap();
    let h = sqrt_half();
    assert_eq!(*x.get(0, 0), (OrdForm::dx(&c, 0) + OrdForm::dx(&c, 3)).scale(&h));
    assert_eq!(*x.get(1, 1), (OrdForm::dx(&c, 0) - OrdForm::dx(&c, 3)).scale(&h));
    assert_eq!(*x.get(0, 1), (OrdForm::dx(&c, 1) - OrdForm::dx(&c, 2).mul_i()).scale(&h));
    assert_eq!(*x.get(1, 0), x.get(0, 1).conj());
}

#[test]
fn schwarzschild_spinor_coframe_reconstructs_line_element() {
    let g = schwarzschild();
    let x = to_spinor_coframe(&g.coframe, &g.eta, &exact()).unwrap();
    assert!(x.hermiticity_residual().is_zero());
    let res = line_element_residual(&x.theta, &g.coframe, &g.eta);
    assert!(res.iter().flatten().all(|z| z.is_zero()));
}

#[test]
fn euclidean_signature_is_rejected() {
    let c = cartesian(4);
    let cf = Coframe::new((0..4).map(|i| OrdForm::dx(&c, i)).collect()).unwrap();
    let err = to_spinor_coframe(&cf, &FrameMetric::euclidean(4), &exact()).unwrap_err();
    assert!(matches!(err, CoreError::Signature { .. }));
}

#[test]
fn split_and_recombine_are_inverse() {
    let g = schwarzschild();
    let ws = split_connection(&g.omega);
    assert!(ws.trace().is_zero());
    assert_eq!(recombine(&ws), g.omega);

    let c = cartesian(4);
    let eta = FrameMetric::lorentzian();
    let mut s = FormSampler::new(&c, 5);
    for deg in [0, 1, 2] {
        let m = s.so_form(&eta, deg);
        assert_eq!(recombine(&split_connection(&m)), m, "degree {deg}");
    }
}

#[test]
fn split_respects_products() {
    let c = cartesian(4);
    let eta = FrameMetric::lorentzian();
    let mut s = FormSampler::new(&c, 9);
    for _ in 0..3 {
        let w = s.so_form(&eta, 1);
        assert_eq!(split_connection(&curvature(&w)), spinor_curvature(&split_connection(&w)));
        let a = s.so_form(&eta, 0);
        let b = s.so_form(&eta, 0);
        let bracket = a.mul(&b).sub(&b.mul(&a));
        let (sa, sb) = (split_connection(&a), split_connection(&b));
        assert_eq!(split_connection(&bracket), sa.mul(&sb).sub(&sb.mul(&sa)));
    }
}

#[test]
fn schwarzschild_spinor_equations() {
    let g = schwarzschild();
    let x = to_spinor_coframe(&g.coframe, &g.eta, &exact()).unwrap();
    let ws = split_connection(&g.omega);
    assert!(spinor_first_cartan(&x, &ws, &ws.conj()).verdict(&exact()).is_proven_zero());
    let curv = spinor_curvature(&ws);
    assert_eq!(recombine(&curv), g.curvature);
    assert!(vacuum_residual(&curv, &x).verdict(&exact()).is_proven_zero());
    let b = spinor_bianchi(&curv, &x, &ws, &exact());
    assert!(b.first.is_proven_zero() && b.second.is_proven_zero());
}

#[test]
fn vacuum_residual_detects_matter() {
    for g in [flrw_radiation(), de_sitter()] {
        let x = to_spinor_coframe(&g.coframe, &g.eta, &exact()).unwrap();
        let ws = split_connection(&g.omega);
        assert!(spinor_first_cartan(&x, &ws, &ws.conj()).is_zero());
        let curv = spinor_curvature(&ws);
        assert!(vacuum_residual(&curv, &x).verdict(&sampled()).is_nonzero_like());
        let b = spinor_bianchi(&curv, &x, &ws, &exact());
        assert!(b.first.is_proven_zero() && b.second.is_proven_zero());
    }
}

#[test]
fn vacuum_residual_agrees_with_ricci() {
    for (g, vacuum) in [(schwarzschild(), true), (minkowski_spherical(), true), (flrw_radiation(), false)] {
        let x = to_spinor_coframe(&g.coframe, &g.eta, &exact()).unwrap();
        let curv = spinor_curvature(&split_connection(&g.omega));
        let spin = vacuum_residual(&curv, &x).verdict(&sampled());
        let ricci = CoordinateCurvature::new(&g.coframe, &g.eta).unwrap().ricci_verdict(&sampled(), &g.coframe);
        assert_eq!(spin.is_zero_like(), vacuum);
        assert_eq!(ricci.is_zero_like(), vacuum);
    }
}

#[test]
fn schwarzschild_psi2() {
    let g = schwarzschild();
    let (m, r) = (Expr::symbol("M"), Expr::symbol("r"));
    let expected = CExpr::real(-(&m / &r.powi(3)));
    let curv = spinor_curvature(&split_connection(&g.omega));
    let from_spinor = psi2_vacuum(&frame_riemann(&recombine(&curv), &g.coframe), &g.eta);
    assert!(is_zero_complex(&(&from_spinor - &expected), &exact(), g.chart().domain()).is_proven_zero());
    let oracle = CoordinateCurvature::new(&g.coframe, &g.eta).unwrap();
    let from_oracle = psi2_vacuum(&oracle.frame_riemann(&g.coframe), &g.eta);
    assert!(is_zero_complex(&(&from_oracle - &expected), &exact(), g.chart().domain()).is_proven_zero());
}

fn boost_z(chi: &Expr) -> Vec<Vec<CExpr>> {
    let half = Expr::frac(1, 2);
    let ch = CExpr::real(&half * &(chi.exp() + (-chi.clone()).exp()));
    let sh = CExpr::real(&half * &(chi.exp() - (-chi.clone()).exp()));
    let (o, z) = (CExpr::one(), CExpr::zero());
    vec![
        vec![ch.clone(), z.clone(), z.clone(), sh.clone()],
        vec![z.clone(), o.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), o.clone(), z.clone()],
        vec![sh, z.clone(), z, ch],
    ]
}

fn rotation_z(cos: Expr, sin: Expr) -> Vec<Vec<CExpr>> {
    let (o, z) = (CExpr::one(), CExpr::zero());
    let (c, s) = (CExpr::real(cos), CExpr::real(sin));
    vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), c.clone(), -s.clone(), z.clone()],
        vec![z.clone(), s, c, z.clone()],
        vec![z.clone(), z.clone(), z, o],
    ]
}

fn diag2(c: &gf_core::ChartRef, a: CExpr, b: CExpr) -> MatOrdForm {
    scalar_matrix(c, &[vec![a, CExpr::zero()], vec![CExpr::zero(), b]])
}

#[test]
fn lift_of_identity_and_full_turn() {
    let c = cartesian(4);
    let id = scalar_matrix(&c, &rotation_z(Expr::one(), Expr::zero()));
    let (s, _) = lorentz_to_sl2(&id, &exact()).unwrap();
    assert_eq!(s, diag2(&c, CExpr::one(), CExpr::one()));
    // a turn by 2π is the identity matrix again and lifts to +1, not −1
    let two_pi = scalar_matrix(&c, &rotation_z(Expr::one(), Expr::zero()));
    assert_eq!(lorentz_to_sl2(&two_pi, &exact()).unwrap().0, s);
}

#[test]
fn lift_of_z_boost() {
    let domain = Domain::new().with_range("chi", Some(Expr::int(-2)), Some(Expr::int(2)));
    let c = Chart::with_domain(
        ["t", "x", "y", "z"].iter().map(|s| s.to_string()).collect(),
        vec!["chi".into()],
        domain,
    )
    .unwrap();
    let chi = Expr::symbol("chi");
    let l = scalar_matrix(&c, &boost_z(&chi));
    let (s, _) = lorentz_to_sl2(&l, &sampled()).unwrap();
    let half = &chi * &Expr::frac(1, 2);
    let expected = diag2(&c, CExpr::real(half.exp()), CExpr::real((-half).exp()));
    assert!(s.sub(&expected).verdict(&sampled()).is_zero_like());
}

#[test]
fn lift_sign_tie_break() {
    let c = cartesian(4);
    // rotation by π about z: the lift ±diag(−i, i) has zero trace
    let l = scalar_matrix(&c, &rotation_z(Expr::int(-1), Expr::zero()));
    let (s, _) = lorentz_to_sl2(&l, &exact()).unwrap();
    assert_eq!(s, diag2(&c, CExpr::i(), -CExpr::i()));
    // rotation by 2π/3 has trace 2cos(π/3) > 0 on the chosen branch
    let l = scalar_matrix(&c, &rotation_z(Expr::frac(-1, 2), Expr::int(3).sqrt() * Expr::frac(1, 2)));
    let (s, _) = lorentz_to_sl2(&l, &exact()).unwrap();
    let tr = s.trace().scalar_value();
    assert_eq!(tr, CExpr::one());
}

#[test]
fn improper_transformations_are_rejected() {
    let c = cartesian(4);
    let mut p = rotation_z(Expr::one(), Expr::zero());
    p[3][3] = -CExpr::one();
    let err = lorentz_to_sl2(&scalar_matrix(&c, &p), &exact()).unwrap_err();
    assert!(matches!(err, CoreError::NotOrthochronous(_)));
    let mut t = rotation_z(Expr::one(), Expr::zero());
    t[0][0] = -CExpr::one();
    t[3][3] = -CExpr::one();
    let err = lorentz_to_sl2(&scalar_matrix(&c, &t), &exact()).unwrap_err();
    assert!(matches!(err, CoreError::NotOrthochronous(_)));
}

#[test]
fn spinor_gauge_covariance() {
    let g = schwarzschild();
    let c = g.chart().clone();
    let mut s = FormSampler::new(&c, 3);
    let eta = FrameMetric::lorentzian();
    for _ in 0..2 {
        let l = s.group_element(&eta, true);
        let (sl, _) = lorentz_to_sl2(&l, &exact()).unwrap();
        let moved: Vec<OrdForm> = (0..4).map(|a| l.mul(&g.theta()).get(a, 0).clone()).collect();
        let x1 = soldering(&moved);
        let x0 = soldering(g.coframe.forms());
        assert_eq!(x1, sl.mul(&x0).mul(&dagger(&sl)));
    }
}
