//! Coordinate-basis metric, Christoffel symbols, Riemann and Ricci tensors.
//!
//! Shares nothing with the exterior-calculus path beyond the coframe matrix,
//! so it serves as an independent check of curvature and vacuum verdicts.
//! Conventions: `Γ^λ_μν = ½ g^{λσ}(∂_μ g_σν + ∂_ν g_σμ − ∂_σ g_μν)`,
//! `R^ρ_σμν = ∂_μ Γ^ρ_νσ − ∂_ν Γ^ρ_μσ + Γ^ρ_μλ Γ^λ_νσ − Γ^ρ_νλ Γ^λ_μσ`,
//! `R_σν = R^ρ_σρν`.

use gf_symexpr::{CExpr, Expr, ZeroPolicy, ZeroVerdict};

use crate::error::{CoreError, Result};
use crate::frame::{Coframe, FrameMetric};
use crate::matrix::invert_scalar;

pub struct CoordinateCurvature {
    pub metric: Vec<Vec<Expr>>,
    pub inverse: Vec<Vec<Expr>>,
    /// `christoffel[λ][μ][ν]`
    pub christoffel: Vec<Vec<Vec<Expr>>>,
    /// `riemann[ρ][σ][μ][ν]`
    pub riemann: Vec<Vec<Vec<Vec<Expr>>>>,
    pub ricci: Vec<Vec<Expr>>,
}

fn real_part(z: &CExpr, what: &str) -> Result<Expr> {
    if z.im.is_zero() {
        Ok(z.re.clone())
    } else {
        Err(CoreError::Metric(format!("{what} has an imaginary part")))
    }
}

/// `g_μν = Σ_a η_a E^a_μ E^a_ν`.
pub fn metric_from_coframe(coframe: &Coframe, eta: &FrameMetric) -> Result<Vec<Vec<Expr>>> {
    let n = coframe.len();
    let e = coframe.matrix();
    let mut g = vec![vec![Expr::zero(); n]; n];
    for (mu, row) in g.iter_mut().enumerate() {
        for (nu, entry) in row.iter_mut().enumerate() {
            let mut acc = CExpr::zero();
            for (a, ea) in e.iter().enumerate() {
                if !ea[mu].is_zero() && !ea[nu].is_zero() {
                    acc = acc + (&ea[mu] * &ea[nu]).scale(&Expr::int(eta.get(a)));
                }
            }
            *entry = real_part(&acc, "metric")?;
        }
    }
    Ok(g)
}

impl CoordinateCurvature {
    pub fn new(coframe: &Coframe, eta: &FrameMetric) -> Result<Self> {
        let chart = coframe.chart();
        let n = coframe.len();
        let metric = metric_from_coframe(coframe, eta)?;
        let cm: Vec<Vec<CExpr>> = metric
            .iter()
            .map(|r| r.iter().map(|x| CExpr::real(x.clone())).collect())
            .collect();
        let inverse: Vec<Vec<Expr>> = invert_scalar(&cm)?
            .iter()
            .map(|r| r.iter().map(|x| real_part(x, "inverse metric")).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let dg: Vec<Vec<Vec<Expr>>> = (0..n)
            .map(|k| {
                metric
                    .iter()
                    .map(|r| r.iter().map(|x| x.diff(chart.coord(k))).collect())
                    .collect()
            })
            .collect();
        let half = Expr::frac(1, 2);
        let mut christoffel = vec![vec![vec![Expr::zero(); n]; n]; n];
        for l in 0..n {
            for mu in 0..n {
                for nu in mu..n {
                    let mut acc = Expr::zero();
                    for s in 0..n {
                        if inverse[l][s].is_zero() {
                            continue;
                        }
                        let t = &dg[mu][s][nu] + &dg[nu][s][mu] - &dg[s][mu][nu];
                        if !t.is_zero() {
                            acc = acc + &inverse[l][s] * &t;
                        }
                    }
                    let v = &half * &acc;
                    christoffel[l][mu][nu] = v.clone();
                    christoffel[l][nu][mu] = v;
                }
            }
        }
        let mut riemann = vec![vec![vec![vec![Expr::zero(); n]; n]; n]; n];
        for r in 0..n {
            for s in 0..n {
                for mu in 0..n {
                    for nu in (mu + 1)..n {
                        let mut acc = christoffel[r][nu][s].diff(chart.coord(mu))
                            - christoffel[r][mu][s].diff(chart.coord(nu));
                        for l in 0..n {
                            acc = acc + &christoffel[r][mu][l] * &christoffel[l][nu][s]
                                - &christoffel[r][nu][l] * &christoffel[l][mu][s];
                        }
                        riemann[r][s][nu][mu] = -&acc;
                        riemann[r][s][mu][nu] = acc;
                    }
                }
            }
        }
        let ricci = (0..n)
            .map(|s| {
                (0..n)
                    .map(|nu| (0..n).map(|r| riemann[r][s][r][nu].clone()).sum())
                    .collect()
            })
            .collect();
        Ok(CoordinateCurvature {
            metric,
            inverse,
            christoffel,
            riemann,
            ricci,
        })
    }

    pub fn ricci_scalar(&self) -> Expr {
        let n = self.metric.len();
        let mut acc = Expr::zero();
        for a in 0..n {
            for b in 0..n {
                if !self.inverse[a][b].is_zero() {
                    acc = acc + &self.inverse[a][b] * &self.ricci[a][b];
                }
            }
        }
        acc
    }

    pub fn ricci_verdict(&self, policy: &ZeroPolicy, coframe: &Coframe) -> ZeroVerdict {
        let domain = coframe.chart().domain();
        ZeroVerdict::all(
            self.ricci
                .iter()
                .flatten()
                .map(|x| gf_symexpr::is_zero(x, policy, domain)),
        )
    }

    /// Frame components `R^a_bcd = E^a_ρ R^ρ_σμν e_b^σ e_c^μ e_d^ν`.
    pub fn frame_riemann(&self, coframe: &Coframe) -> Vec<Vec<Vec<Vec<CExpr>>>> {
        let n = self.metric.len();
        let e = coframe.matrix();
        let inv = coframe.inverse();
        // inv[μ][b] = e_b^μ
        let mut out = vec![vec![vec![vec![CExpr::zero(); n]; n]; n]; n];
        for (a, oa) in out.iter_mut().enumerate() {
            for (b, ob) in oa.iter_mut().enumerate() {
                for c in 0..n {
                    for d in (c + 1)..n {
                        let mut acc = CExpr::zero();
                        for r in 0..n {
                            if e[a][r].is_zero() {
                                continue;
                            }
                            for s in 0..n {
                                if inv[s][b].is_zero() {
                                    continue;
                                }
                                for mu in 0..n {
                                    if inv[mu][c].is_zero() {
                                        continue;
                                    }
                                    for nu in 0..n {
                                        if inv[nu][d].is_zero() || self.riemann[r][s][mu][nu].is_zero() {
                                            continue;
                                        }
                                        let w = &(&e[a][r] * &inv[s][b]) * &(&inv[mu][c] * &inv[nu][d]);
                                        acc = acc + w.scale(&self.riemann[r][s][mu][nu]);
                                    }
                                }
                            }
                        }
                        ob[d][c] = -acc.clone();
                        ob[c][d] = acc;
                    }
                }
            }
        }
        out
    }
}
