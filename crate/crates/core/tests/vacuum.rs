mod common;

use common::*;
use gf_core::frame::scalar_matrix;
use gf_core::genform::{lift_matrix, matrix_parts, times_m, times_mbar, times_mmbar};
use gf_core::oracle::CoordinateCurvature;
use gf_core::random::FormSampler;
use gf_core::spinor::*;
use gf_core::vacuum::*;
use gf_core::matrix::{invert_scalar, scalar_entries};
use gf_core::{CoreError, FormMatrix, FrameMetric, GenForm, Geometry, MatOrdForm, OrdForm};
use gf_symexpr::{CExpr, Expr, ZeroPolicy};

fn assert_vacuum_pipeline(g: &Geometry, policy: &ZeroPolicy) -> VacuumReport {
    let r = encode_vacuum(g, policy).unwrap();
    assert!(r.connection.flat.is_zero_like() && r.connection.flat_bar.is_zero_like());
    assert!(r.vacuum().is_zero_like(), "combined residual {:?}", r.combined);
    assert!(r.l_pair.inverse.is_proven_zero());
    assert!(r.l_pair.maurer_cartan.is_zero_like() && r.l_pair.maurer_cartan_bar.is_zero_like());
    assert!(r.l_pair.unit_determinant.is_proven_zero());
    for c in r.recovery.conditions.conditions() {
        assert!(c.holds(), "{} fails at {:?}", c.name, c.offending);
    }
    assert!(r.recovery.recovered());
    assert!(r.expansion.consistent());
    assert!(r.line_element.iter().all(|v| v.is_zero_like()));
    r
}

#[test]
fn minkowski_cartesian_is_trivial() {
    let g = minkowski_cartesian();
    let r = assert_vacuum_pipeline(&g, &exact());
    assert!(r.connection.a.is_zero());
    let half = CExpr::frac(-1, 2);
    let expected = times_m(&r.theta.theta).add(&times_mbar(&r.theta.theta)).scale(&half);
    assert_eq!(r.x, expected);
    assert_eq!(matrix_parts(&r.recovery.e).pi, r.theta.theta);
}

#[test]
fn minkowski_spherical_encodes() {
    let r = assert_vacuum_pipeline(&minkowski_spherical(), &exact());
    // ω ≠ 0 but Ω = 0, so A is ordinary
    assert!(matrix_parts(&r.connection.a).pi1.is_zero());
    assert!(!r.omega.is_zero());
}

#[test]
fn schwarzschild_encodes_exactly() {
    let r = assert_vacuum_pipeline(&schwarzschild(), &exact());
    assert!(r.connection.flat.is_proven_zero());
    assert!(!matrix_parts(&r.connection.a).pi1.is_zero());
    assert!(r.vacuum().is_proven_zero());
    assert!(r.recovery.matches_theta.as_ref().unwrap().is_proven_zero());
    assert!(r.expansion.agree.iter().all(|v| v.is_proven_zero()));
}

#[test]
fn kasner_and_pp_wave_encode() {
    assert_vacuum_pipeline(&kasner(), &exact());
    assert_vacuum_pipeline(&pp_wave(), &exact());
}

/// `Ω^a_b = ½ R^a_bcd θ^c θ^d` from the coordinate oracle, split to spinors.
fn oracle_spinor_curvature(g: &Geometry) -> MatOrdForm {
    let o = CoordinateCurvature::new(&g.coframe, &g.eta).unwrap();
    let r = o.frame_riemann(&g.coframe);
    let c = g.chart().clone();
    let omega = FormMatrix::from_fn(4, 4, |a, b| {
        let mut terms = Vec::new();
        for p in 0..4 {
            for q in (p + 1)..4 {
                terms.push(((1u8 << p) | (1u8 << q), r[a][b][p][q].clone()));
            }
        }
        g.coframe.assemble(&OrdForm::from_terms(&c, 2, terms))
    });
    split_connection(&omega)
}

#[test]
fn de_sitter_fails_only_through_curvature() {
    let g = de_sitter();
    let r = encode_vacuum(&g, &sampled()).unwrap();
    assert!(r.connection.flat.is_zero_like() && r.connection.flat_bar.is_zero_like());
    assert!(r.combined.ordinary.is_zero_like());
    assert!(r.combined.m.is_nonzero_like());
    assert!(r.combined.mbar.is_nonzero_like());
    // the m slot is Ω θ with Ω taken from the coordinate Riemann tensor
    let m_slot = matrix_parts(&r.combined.residual).pi1;
    let expected = oracle_spinor_curvature(&g).mul(&r.theta.theta);
    assert!(m_slot.sub(&expected).verdict(&sampled()).is_zero_like());
    // Λ = 3H²; with signature +−−− the Ricci tensor is −Λ g_μν
    let o = CoordinateCurvature::new(&g.coframe, &g.eta).unwrap();
    let lambda = Expr::int(3) * Expr::symbol("H") * Expr::symbol("H");
    for mu in 0..4 {
        for nu in 0..4 {
            let d = &o.ricci[mu][nu] + &(&lambda * &o.metric[mu][nu]);
            assert!(gf_symexpr::is_zero(&d, &sampled(), g.chart().domain()).is_zero_like());
        }
    }
    let c = &r.recovery.conditions;
    assert!(c.normal_form.holds() && c.covariant_mu.holds() && c.nu_relation.holds());
    assert!(!c.curvature_balance.holds());
    assert!(c.curvature_balance.offending.is_some());
    assert!(matrix_parts(&r.recovery.e).pitop.verdict(&sampled()).is_nonzero_like());
    assert!(!r.recovery.recovered());
}

#[test]
fn three_vacuum_tests_agree() {
    let cases = [
        (minkowski_cartesian(), true),
        (minkowski_spherical(), true),
        (schwarzschild(), true),
        (kasner(), true),
        (pp_wave(), true),
        (de_sitter(), false),
        (flrw_radiation(), false),
    ];
    for (k, (g, vacuum)) in cases.iter().enumerate() {
        let r = encode_vacuum(g, &sampled()).unwrap();
        let curv = spinor_curvature(&r.omega);
        let spinor = vacuum_residual(&curv, &r.theta).verdict(&sampled());
        let ricci = CoordinateCurvature::new(&g.coframe, &g.eta)
            .unwrap()
            .ricci_verdict(&sampled(), &g.coframe);
        assert_eq!(r.vacuum().is_zero_like(), *vacuum, "case {k}");
        assert_eq!(spinor.is_zero_like(), *vacuum, "case {k}");
        assert_eq!(ricci.is_zero_like(), *vacuum, "case {k}");
        // the first Bianchi identity ties the m and m̄ slots together
        assert_eq!(r.combined.m.is_zero_like(), r.combined.mbar.is_zero_like());
        assert!(r.connection.flat.is_zero_like());
    }
}

#[test]
fn expansion_matches_for_generic_mu_nu() {
    let c = cartesian(4);
    let eta = FrameMetric::lorentzian();
    let mut s = FormSampler::new(&c, 21);
    for _ in 0..2 {
        let ws = split_connection(&s.so_form(&eta, 1));
        // Hermitian μ and ν, as in the normal form of the coordinates
        let mu: MatOrdForm = FormMatrix::from_fn(2, 2, |_, _| s.ord_form(1));
        let mu = mu.add(&dagger(&mu));
        let nu: MatOrdForm = FormMatrix::from_fn(2, 2, |_, _| s.ord_form(2));
        let nu = nu.add(&dagger(&nu));
        let chk = expansion_check(&ws, &ws.conj(), &mu, &nu, &exact());
        assert!(chk.agree.iter().all(|v| v.is_proven_zero()), "{:?}", chk.agree);
    }
}

#[test]
fn translation_leaves_dx_unchanged() {
    let g = schwarzschild();
    let r = encode_vacuum(&g, &exact()).unwrap();
    let c = g.chart().clone();
    let mut s = FormSampler::new(&c, 4);
    let f = FormMatrix::from_fn(2, 2, |_, _| s.ord_form(0));
    let h = FormMatrix::from_fn(2, 2, |_, _| s.ord_form(1));
    let b = times_m(&f).add(&times_mmbar(&h));
    assert_eq!(b.degree(), -1);
    let moved = r.x.add(&b.d());
    assert_eq!(moved.d(), r.x.d());
}

#[test]
fn identity_poincare_transform_is_trivial() {
    let g = schwarzschild();
    let r = encode_vacuum(&g, &exact()).unwrap();
    let c = g.chart().clone();
    let id = scalar_matrix(&c, &[vec![CExpr::one(), CExpr::zero()], vec![CExpr::zero(), CExpr::one()]]);
    let [cl, _, clb, _] = spinor_closed_pair(&id).unwrap();
    let zero = FormMatrix::zeros(2, 2, &GenForm::one(&c), 0);
    assert_eq!(poincare_transform(&r.x, &cl, &clb, &zero, &exact()).unwrap(), r.x);
}

fn check_poincare_covariance(g: &Geometry, s: &MatOrdForm) {
    let policy = exact();
    let r = encode_vacuum(g, &policy).unwrap();
    let [cl, clinv, clb, _] = spinor_closed_pair(s).unwrap();
    assert!(cl.d().is_zero() && clb.d().is_zero());
    let id = FormMatrix::identity(2, &GenForm::one(g.chart()));
    assert_eq!(cl.mul(&clinv), id);
    let zero = FormMatrix::zeros(2, 2, &GenForm::one(g.chart()), 0);
    let x1 = poincare_transform(&r.x, &cl, &clb, &zero, &policy).unwrap();
    let (theta1, ws1) = spinor_gauge(&r.theta, &r.omega, s).unwrap();
    let l1 = build_l_pair(&ws1, &ws1.conj());
    let e1 = coframe_from_coords(&l1, &x1);
    assert!(e1.sub(&lift_matrix(&theta1.theta)).verdict(&policy).is_proven_zero());
    let (mu, nu) = vacuum_mu_nu(&r.theta, &r.omega, &r.omega.conj());
    let (mu1, nu1) = mu_nu_of(&x1);
    let (emu1, enu1) = gauge_mu_nu(s, &mu, &nu).unwrap();
    assert!(mu1.sub(&emu1).verdict(&policy).is_proven_zero());
    assert!(nu1.sub(&enu1).verdict(&policy).is_proven_zero());
    // the normal-form relation survives the transformation
    assert!(ordinariness(&x1, &ws1, &ws1.conj(), &policy).nu_relation.holds());
    if !s.d().is_zero() {
        // with +i on P̄ dP μ and −i on dP̄ P μ the relation would break
        let c = g.chart();
        let p = scalar_matrix(c, &invert_scalar(&scalar_entries(s)).unwrap());
        let flipped = primed(&p.conj(), &p.mul(&nu))
            .add(&primed(&p.conj(), &p.d().mul(&mu)).scale(&CExpr::i()))
            .sub(&primed(&p.conj().d(), &p.mul(&mu)).scale(&CExpr::i()));
        assert!(nu1.sub(&flipped).verdict(&policy).is_nonzero_like());
    }
    // and the translated coordinates still give the same coframe
    let mut smp = FormSampler::new(g.chart(), 8);
    let b = times_m(&FormMatrix::from_fn(2, 2, |_, _| smp.ord_form(0)));
    let x2 = poincare_transform(&r.x, &cl, &clb, &b.d(), &policy).unwrap();
    assert_eq!(coframe_from_coords(&l1, &x2), e1);
}

#[test]
fn constant_boost_on_schwarzschild() {
    let g = schwarzschild();
    let c = g.chart().clone();
    // z boost with e^{χ/2} = 2
    let s = scalar_matrix(&c, &[vec![CExpr::int(2), CExpr::zero()], vec![CExpr::zero(), CExpr::frac(1, 2)]]);
    check_poincare_covariance(&g, &s);
    // constant S: ω₁ = S⁻¹ ω S
    let sinv = scalar_matrix(&c, &[vec![CExpr::frac(1, 2), CExpr::zero()], vec![CExpr::zero(), CExpr::int(2)]]);
    let ws = split_connection(&g.omega);
    let (_, ws1) = spinor_gauge(&encode_vacuum(&g, &exact()).unwrap().theta, &ws, &s).unwrap();
    assert_eq!(ws1, sinv.mul(&ws).mul(&s));
}

#[test]
fn coordinate_dependent_rotation_on_minkowski() {
    let g = minkowski_spherical();
    let c = g.chart().clone();
    // S = exp(−i t σz / 2) built from cos and sin of t/2
    let half_t = Expr::symbol("t") * Expr::frac(1, 2);
    let e = CExpr::new(half_t.cos(), -half_t.sin());
    let s = scalar_matrix(&c, &[vec![e.clone(), CExpr::zero()], vec![CExpr::zero(), e.conj()]]);
    check_poincare_covariance(&g, &s);
}

#[test]
fn non_closed_inputs_are_rejected() {
    let g = schwarzschild();
    let r = encode_vacuum(&g, &exact()).unwrap();
    let c = g.chart().clone();
    let id = FormMatrix::identity(2, &GenForm::one(&c));
    let zero = FormMatrix::zeros(2, 2, &GenForm::one(&c), 0);
    let r_entries = FormMatrix::from_fn(2, 2, |i, j| if i == j { OrdForm::dx(&c, 0).scale_real(&Expr::symbol("r")) } else { OrdForm::zero(&c, 1) });
    let not_closed = id.add(&times_m(&r_entries));
    let err = poincare_transform(&r.x, &not_closed, &id, &zero, &exact()).unwrap_err();
    assert!(matches!(err, CoreError::NotClosed { .. }));
    let cp = lift_matrix(&FormMatrix::from_fn(2, 2, |_, _| OrdForm::real_scalar(&c, Expr::symbol("r"))));
    let err = poincare_transform(&r.x, &id, &id, &cp, &exact()).unwrap_err();
    assert!(matches!(err, CoreError::NotClosed { .. }));
}
