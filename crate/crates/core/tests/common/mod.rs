#![allow(dead_code)]

use gf_core::{Chart, ChartRef, Coframe, FrameMetric, Geometry, OrdForm};
use gf_symexpr::{Domain, Expr, ZeroPolicy};

pub fn exact() -> ZeroPolicy {
    ZeroPolicy::SymbolicOnly
}

pub fn sampled() -> ZeroPolicy {
    ZeroPolicy::WithSampling {
        seed: 7,
        samples: 8,
        tol: 1e-9,
    }
}

pub fn schwarzschild() -> Geometry {
    let domain = Domain::new()
        .with_range("M", Some(Expr::frac(1, 2)), Some(Expr::int(2)))
        .with_range("r", Some(Expr::int(2) * Expr::symbol("M")), Some(Expr::int(20)))
        .with_range("th", Some(Expr::frac(1, 10)), Some(Expr::int(3)));
    let c = Chart::with_domain(
        ["t", "r", "th", "ph"].iter().map(|s| s.to_string()).collect(),
        vec!["M".into()],
        domain,
    )
    .unwrap();
    let (r, th, m) = (Expr::symbol("r"), Expr::symbol("th"), Expr::symbol("M"));
    let f = (Expr::one() - Expr::int(2) * &m / &r).sqrt();
    let cf = Coframe::new(vec![
        OrdForm::dx(&c, 0).scale_real(&f),
        OrdForm::dx(&c, 2).scale_real(&r),
        OrdForm::dx(&c, 3).scale_real(&(&r * &th.sin())),
        OrdForm::dx(&c, 1).scale_real(&(Expr::one() / &f)),
    ])
    .unwrap();
    Geometry::new(cf, FrameMetric::lorentzian()).unwrap()
}

pub fn minkowski_spherical() -> Geometry {
    let c = Chart::new(&["t", "r", "th", "ph"]).unwrap();
    let (r, th) = (Expr::symbol("r"), Expr::symbol("th"));
    let cf = Coframe::new(vec![
        OrdForm::dx(&c, 0),
        OrdForm::dx(&c, 2).scale_real(&r),
        OrdForm::dx(&c, 3).scale_real(&(&r * &th.sin())),
        OrdForm::dx(&c, 1),
    ])
    .unwrap();
    Geometry::new(cf, FrameMetric::lorentzian()).unwrap()
}

pub fn cartesian(n: usize) -> ChartRef {
    let names = ["t", "x", "y", "z", "u", "v"];
    Chart::new(&names[..n]).unwrap()
}

/// Spatially flat radiation-era FLRW, `a = √t`.
pub fn flrw_radiation() -> Geometry {
    let domain = Domain::new().with_range("t", Some(Expr::frac(1, 2)), Some(Expr::int(3)));
    let c = Chart::with_domain(
        ["t", "x", "y", "z"].iter().map(|s| s.to_string()).collect(),
        vec![],
        domain,
    )
    .unwrap();
    let a = Expr::symbol("t").sqrt();
    let cf = Coframe::new(vec![
        OrdForm::dx(&c, 0),
        OrdForm::dx(&c, 1).scale_real(&a),
        OrdForm::dx(&c, 2).scale_real(&a),
        OrdForm::dx(&c, 3).scale_real(&a),
    ])
    .unwrap();
    Geometry::new(cf, FrameMetric::lorentzian()).unwrap()
}

pub fn minkowski_cartesian() -> Geometry {
    let c = cartesian(4);
    let cf = Coframe::new((0..4).map(|i| OrdForm::dx(&c, i)).collect()).unwrap();
    Geometry::new(cf, FrameMetric::lorentzian()).unwrap()
}

fn chart4(names: [&str; 4], params: &[&str], domain: Domain) -> ChartRef {
    Chart::with_domain(
        names.iter().map(|s| s.to_string()).collect(),
        params.iter().map(|s| s.to_string()).collect(),
        domain,
    )
    .unwrap()
}

/// Flat slicing, `a = e^{Ht}`.
pub fn de_sitter() -> Geometry {
    let domain = Domain::new()
        .with_range("H", Some(Expr::frac(1, 2)), Some(Expr::int(2)))
        .with_range("t", Some(Expr::int(-1)), Some(Expr::int(1)));
    let c = chart4(["t", "x", "y", "z"], &["H"], domain);
    let a = (Expr::symbol("H") * Expr::symbol("t")).exp();
    let cf = Coframe::new(vec![
        OrdForm::dx(&c, 0),
        OrdForm::dx(&c, 1).scale_real(&a),
        OrdForm::dx(&c, 2).scale_real(&a),
        OrdForm::dx(&c, 3).scale_real(&a),
    ])
    .unwrap();
    Geometry::new(cf, FrameMetric::lorentzian()).unwrap()
}

/// Exponents `(−1/3, 2/3, 2/3)`.
pub fn kasner() -> Geometry {
    let domain = Domain::new().with_range("t", Some(Expr::frac(1, 2)), Some(Expr::int(3)));
    let c = chart4(["t", "x", "y", "z"], &[], domain);
    let t = Expr::symbol("t");
    let p = |n: i64| t.pow_rational(&gf_symexpr::Coeff::new(n.into(), 3.into()));
    let cf = Coframe::new(vec![
        OrdForm::dx(&c, 0),
        OrdForm::dx(&c, 1).scale_real(&p(-1)),
        OrdForm::dx(&c, 2).scale_real(&p(2)),
        OrdForm::dx(&c, 3).scale_real(&p(2)),
    ])
    .unwrap();
    Geometry::new(cf, FrameMetric::lorentzian()).unwrap()
}

/// `2 du dv − (x² − y²) du² − dx² − dy²`.
pub fn pp_wave() -> Geometry {
    let c = chart4(["u", "v", "x", "y"], &[], Domain::new());
    let (x, y) = (Expr::symbol("x"), Expr::symbol("y"));
    let h = &x * &x - &y * &y;
    let k = Expr::frac(1, 2).sqrt();
    let p = Expr::one() - &h * Expr::frac(1, 2);
    let q = Expr::one() + &h * Expr::frac(1, 2);
    let cf = Coframe::new(vec![
        (OrdForm::dx(&c, 0).scale_real(&p) + OrdForm::dx(&c, 1)).scale_real(&k),
        OrdForm::dx(&c, 2),
        OrdForm::dx(&c, 3),
        (OrdForm::dx(&c, 0).scale_real(&q) - OrdForm::dx(&c, 1)).scale_real(&k),
    ])
    .unwrap();
    Geometry::new(cf, FrameMetric::lorentzian()).unwrap()
}
