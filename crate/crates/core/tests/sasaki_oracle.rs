//! Compares the bundle connection against the Levi-Civita connection of the
//! Sasaki metric written in coordinates `(x¹, x², y¹, y²)` of `TM`, with
//! Christoffel symbols taken by finite differences and the result projected
//! onto `T₁M`.

use std::sync::Arc;

use sasaki_slant::bundle::{lift_curve, AngleProfile, BundleTangent, FiberCharacter, FiberField, LiftedCurve};
use sasaki_slant::curve::{BaseCurve, ExprCurve};
use sasaki_slant::surface::{contract_christoffel, make_surface, SurfaceChart, SurfaceKind};

type M4 = [[f64; 4]; 4];

fn sasaki4(chart: &SurfaceChart, z: [f64; 4]) -> M4 {
    let x = [z[0], z[1]];
    let y = [z[2], z[3]];
    let g = chart.metric(x).unwrap();
    let gam = chart.christoffel(x).unwrap();
    // vertical part of (dx, dy) is dy + M dx
    let mut m = [[0.0; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            m[k][i] = (0..2).map(|j| gam[k][i][j] * y[j]).sum();
        }
    }
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            // columns of the 2x4 maps dx -> horizontal, (dx,dy) -> vertical
            let col = |c: usize| -> ([f64; 2], [f64; 2]) {
                if c < 2 {
                    let mut e = [0.0; 2];
                    e[c] = 1.0;
                    (e, [m[0][c], m[1][c]])
                } else {
                    let mut e = [0.0; 2];
                    e[c - 2] = 1.0;
                    ([0.0; 2], e)
                }
            };
            let (ha, va) = col(a);
            let (hb, vb) = col(b);
            let mut s = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    s += g[i][j] * (ha[i] * hb[j] + va[i] * vb[j]);
                }
            }
            out[a][b] = s;
        }
    }
    out
}

fn inverse4(m: &M4) -> M4 {
    let mut a = [[0.0; 8]; 4];
    for i in 0..4 {
        a[i][..4].copy_from_slice(&m[i]);
        a[i][4 + i] = 1.0;
    }
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..4 {
            if r != c {
                let f = a[r][c];
                for k in 0..8 {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        out[i].copy_from_slice(&a[i][4..]);
    }
    out
}

fn christoffel4(chart: &SurfaceChart, z: [f64; 4]) -> [[[f64; 4]; 4]; 4] {
    let h = 1e-4;
    let mut dg = [[[0.0; 4]; 4]; 4];
    for c in 0..4 {
        let at = |s: f64| {
            let mut w = z;
            w[c] += s;
            sasaki4(chart, w)
        };
        let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
        for a in 0..4 {
            for b in 0..4 {
                dg[c][a][b] = (-p2[a][b] + 8.0 * p1[a][b] - 8.0 * m1[a][b] + m2[a][b]) / (12.0 * h);
            }
        }
    }
    let gi = inverse4(&sasaki4(chart, z));
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[a][b][c] = (0..4).map(|d| 0.5 * gi[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c])).sum();
            }
        }
    }
    out
}

fn to_coords(chart: &SurfaceChart, x: [f64; 2], y: [f64; 2], f: &BundleTangent) -> [f64; 4] {
    let gam = chart.christoffel(x).unwrap();
    let m = contract_christoffel(&gam, f.h, y);
    [f.h[0], f.h[1], f.t[0] - m[0], f.t[1] - m[1]]
}

fn oracle(l: &LiftedCurve, field: &dyn Fn(f64) -> BundleTangent, t: f64) -> BundleTangent {
    let chart = l.chart();
    let z = |s: f64| {
        let p = l.point(s).unwrap();
        let x = p.coords();
        [x[0], x[1], p.u[0], p.u[1]]
    };
    let fc = |s: f64| {
        let zz = z(s);
        to_coords(chart, [zz[0], zz[1]], [zz[2], zz[3]], &field(s))
    };
    let h = 1e-3;
    let d5 = |f: &dyn Fn(f64) -> [f64; 4]| {
        let (p2, p1, m1, m2) = (f(t + 2.0 * h), f(t + h), f(t - h), f(t - 2.0 * h));
        let mut o = [0.0; 4];
        for i in 0..4 {
            o[i] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
        }
        o
    };
    let zt = z(t);
    let vel = d5(&z);
    let df = d5(&fc);
    let f0 = fc(t);
    let gam4 = christoffel4(chart, zt);
    let mut r = df;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                r[a] += gam4[a][b][c] * vel[b] * f0[c];
            }
        }
    }
    let x = [zt[0], zt[1]];
    let u = [zt[2], zt[3]];
    let gam = chart.christoffel(x).unwrap();
    let m = contract_christoffel(&gam, [r[0], r[1]], u);
    let vert = [r[2] + m[0], r[3] + m[1]];
    let p = l.point(t).unwrap();
    BundleTangent { h: [r[0], r[1]], t: p.project(chart, vert).unwrap() }
}

fn lift(kind: SurfaceKind, u: &str, v: &str, range: [f64; 2]) -> LiftedCurve {
    let c = make_surface(kind).unwrap();
    let g: Arc<dyn BaseCurve> = Arc::new(ExprCurve::parse(u, v).unwrap());
    let x = FiberField::frame_angle(&c, g.clone(), range, FiberCharacter::Tangent, AngleProfile::Linear {
        a: 0.7,
        b: 0.3,
    })
    .unwrap();
    lift_curve(&c, g, range, x, 1e-9).unwrap()
}

fn compare(l: &LiftedCurve, t: f64) -> f64 {
    let tangent = |s: f64| l.tangent(s).unwrap();
    let other = |s: f64| {
        let p = l.point(s).unwrap();
        let v = p.project(l.chart(), [s, 0.5]).unwrap();
        BundleTangent { h: [s.cos(), 1.0], t: v }
    };
    let mut worst: f64 = 0.0;
    for field in [&tangent as &dyn Fn(f64) -> BundleTangent, &other] {
        let ours = l.nabla1(t, &|s| Ok(field(s))).unwrap();
        let theirs = oracle(l, field, t);
        let scale = theirs.max_abs().max(1.0);
        worst = worst.max((ours - theirs).max_abs() / scale);
    }
    worst
}

#[test]
fn de_sitter_connection_matches_coordinate_christoffels() {
    let l = lift(SurfaceKind::DeSitter { r: 1.0 }, "t", "0.3 + 0.2*t^2", [0.0, 1.0]);
    for t in [0.2, 0.5, 0.8] {
        let d = compare(&l, t);
        assert!(d < 1e-6, "t = {t}: {d:e}");
    }
}

#[test]
fn anti_de_sitter_connection_matches_coordinate_christoffels() {
    let l = lift(SurfaceKind::AntiDeSitter, "0.2 + 0.1*t", "t", [0.0, 1.0]);
    for t in [0.3, 0.7] {
        let d = compare(&l, t);
        assert!(d < 1e-6, "t = {t}: {d:e}");
    }
}

#[test]
fn flat_connection_matches_coordinate_christoffels() {
    let l = lift(SurfaceKind::FlatLorentz, "t", "0.4*t^2", [0.0, 1.0]);
    let d = compare(&l, 0.5);
    assert!(d < 1e-7, "{d:e}");
}

#[test]
fn bundle_connection_is_metric_compatible() {
    for (kind, u, v) in [
        (SurfaceKind::DeSitter { r: 1.0 }, "t", "0.3 + 0.2*t^2"),
        (SurfaceKind::AntiDeSitter, "0.2 + 0.1*t", "t"),
        (SurfaceKind::Sphere, "t", "0.4 + 0.1*t"),
    ] {
        let l = lift(kind, u, v, [0.0, 1.0]);
        let f = |s: f64| -> sasaki_slant::Result<BundleTangent> {
            let p = l.point(s)?;
            Ok(BundleTangent { h: [s.sin(), 1.0 - s], t: p.project(l.chart(), [1.0, s * s])? })
        };
        let g = |s: f64| -> sasaki_slant::Result<BundleTangent> {
            let p = l.point(s)?;
            Ok(BundleTangent { h: [0.5, s.cos()], t: p.project(l.chart(), [s, -0.7])? })
        };
        let inner = |s: f64| l.g1(s, &f(s).unwrap(), &g(s).unwrap()).unwrap();
        for t in [0.3, 0.6] {
            let h = 1e-3;
            let lhs = (-inner(t + 2.0 * h) + 8.0 * inner(t + h) - 8.0 * inner(t - h) + inner(t - 2.0 * h)) / (12.0 * h);
            let rhs = l.g1(t, &l.nabla1(t, &f).unwrap(), &g(t).unwrap()).unwrap()
                + l.g1(t, &f(t).unwrap(), &l.nabla1(t, &g).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-5, "{}: {lhs} vs {rhs}", l.chart().name());
        }
    }
}
