//! Finite-dimensional normed spaces: norms, dual norms, norming functionals,
//! one-sided derivatives, extreme points and sphere samples.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::check_dim;
use crate::linalg::{self, dot, norm2, Matrix};
use crate::{lp, operator, GeomError, Result, TAU_EQ, TAU_SAMP};

/// Largest dimension for which the 2^dim cube vertices are enumerated.
pub const MAX_CUBE_DIM: usize = 16;

const SPHERE_SEED: u64 = 0x5eed_0f_5be7e;

/// The two shipped radial gauges. Both unit balls are capsules: the convex
/// hull of two Euclidean unit balls centred at ±e_last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gauge {
    /// Square |x| ≤ 1, |y| ≤ 1 capped by unit half-discs centred at (0, ±1).
    Stadium2,
    /// Cylinder x² + y² ≤ 1, |z| ≤ 1 capped by unit half-balls centred at (0, 0, ±1).
    Cylcap3,
}

impl Gauge {
    pub fn dim(self) -> usize {
        match self {
            Gauge::Stadium2 => 2,
            Gauge::Cylcap3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gauge::Stadium2 => "stadium2",
            Gauge::Cylcap3 => "cylcap3",
        }
    }

    pub fn from_name(name: &str) -> Option<Gauge> {
        match name {
            "stadium2" => Some(Gauge::Stadium2),
            "cylcap3" => Some(Gauge::Cylcap3),
            _ => None,
        }
    }

    fn norm(self, v: &[f64]) -> f64 {
        let (rho, c) = match self {
            Gauge::Stadium2 => (v[0].abs(), v[1]),
            Gauge::Cylcap3 => (v[0].hypot(v[1]), v[2]),
        };
        if c.abs() <= rho {
            rho
        } else {
            (rho * rho + c * c) / (2.0 * c.abs())
        }
    }

    fn gradient(self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        let c = v[n - 1];
        let rho = norm2(&v[..n - 1]);
        let mut g = vec![0.0; n];
        if c.abs() <= rho {
            for i in 0..n - 1 {
                g[i] = v[i] / rho;
            }
        } else {
            for i in 0..n - 1 {
                g[i] = v[i] / c.abs();
            }
            g[n - 1] = c.signum() * (c * c - rho * rho) / (2.0 * c * c);
        }
        g
    }

    /// Point of the upper cap, which together with its negation carries every
    /// extreme point of the ball. `angles` are polar then azimuth.
    pub(crate) fn cap_point(self, polar: f64, azimuth: f64) -> Vec<f64> {
        match self {
            Gauge::Stadium2 => vec![polar.sin(), 1.0 + polar.cos()],
            Gauge::Cylcap3 => {
                let s = polar.sin();
                vec![s * azimuth.cos(), s * azimuth.sin(), 1.0 + polar.cos()]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// ℓ_p with p in [1, ∞]; `f64::INFINITY` is the max norm.
    Lp(f64),
    /// Gauge of the symmetric hull of the listed points.
    Polyhedral { vertices: Vec<Vec<f64>> },
    Radial(Gauge),
    /// Operator norm on codomain.dim × domain.dim matrices, flattened row-major.
    OperatorNorm { domain: Box<SpaceSpec>, codomain: Box<SpaceSpec> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    dim: usize,
    kind: NormKind,
    extreme: Option<Vec<Vec<f64>>>,
}

/// A linear functional acting by the standard pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector {
    pub coords: Vec<f64>,
}

impl Covector {
    pub fn new(coords: Vec<f64>) -> Self {
        Covector { coords }
    }

    pub fn apply(&self, v: &[f64]) -> f64 {
        dot(&self.coords, v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// A one-sided derivative estimate. `lo..=hi` always contains the true value;
/// `certified` means consecutive estimates agreed within the space tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirDeriv {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub certified: bool,
}

impl SpaceSpec {
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(GeomError::InvalidSpace("dimension must be positive".into()));
        }
        if !(p >= 1.0) {
            return Err(GeomError::InvalidSpace(format!("p = {p} is outside [1, inf]")));
        }
        let extreme = if p == 1.0 {
            let mut pts = Vec::with_capacity(2 * dim);
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; dim];
                    e[i] = s;
                    pts.push(e);
                }
            }
            Some(pts)
        } else if p == f64::INFINITY && dim <= MAX_CUBE_DIM {
            Some(
                (0..1usize << dim)
                    .map(|mask| (0..dim).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
                    .collect(),
            )
        } else {
            None
        };
        Ok(SpaceSpec { dim, kind: NormKind::Lp(p), extreme })
    }

    /// Panics if `dim == 0`.
    pub fn l1(dim: usize) -> Self {
        Self::lp(dim, 1.0).expect("positive dimension")
    }

    /// Panics if `dim == 0`.
    pub fn l2(dim: usize) -> Self {
        Self::lp(dim, 2.0).expect("positive dimension")
    }

    /// Panics if `dim == 0`.
    pub fn linf(dim: usize) -> Self {
        Self::lp(dim, f64::INFINITY).expect("positive dimension")
    }

    /// Norm whose unit ball is the hull of `vertices`. The list must be closed
    /// under negation and span the space; redundant points are tolerated.
    pub fn polyhedral(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, |v| v.len());
        if dim == 0 {
            return Err(GeomError::InvalidSpace("empty vertex list".into()));
        }
        for v in &vertices {
            check_dim(dim, v.len())?;
            if !v.iter().all(|a| a.is_finite()) {
                return Err(GeomError::InvalidSpace("non-finite vertex".into()));
            }
        }
        let scale = vertices.iter().map(|v| norm2(v)).fold(0.0, f64::max);
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12 * scale);
        for v in &vertices {
            let neg: Vec<f64> = v.iter().map(|a| -a).collect();
            if !vertices.iter().any(|w| close(w, &neg)) {
                return Err(GeomError::InvalidSpace("vertex set is not symmetric".into()));
            }
        }
        if Matrix::from_columns(&vertices)?.rank(1e-10) < dim {
            return Err(GeomError::InvalidSpace("vertices do not span the space".into()));
        }
        let mut unique: Vec<Vec<f64>> = Vec::new();
        for v in &vertices {
            if norm2(v) > 1e-12 * scale && !unique.iter().any(|w| close(w, v)) {
                unique.push(v.clone());
            }
        }
        // a point is extreme iff the hull of the others (with the origin) misses it
        let mut extreme = Vec::new();
        for (k, v) in unique.iter().enumerate() {
            let others: Vec<Vec<f64>> =
                unique.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, w)| w.clone()).collect();
            let inside = lp::gauge(&others, v).map_or(false, |(g, _)| g <= 1.0 + 1e-9);
            if !inside {
                extreme.push(v.clone());
            }
        }
        Ok(SpaceSpec { dim, kind: NormKind::Polyhedral { vertices }, extreme: Some(extreme) })
    }

    pub fn radial(gauge: Gauge) -> Self {
        SpaceSpec { dim: gauge.dim(), kind: NormKind::Radial(gauge), extreme: None }
    }

    pub fn stadium2() -> Self {
        Self::radial(Gauge::Stadium2)
    }

    pub fn cylcap3() -> Self {
        Self::radial(Gauge::Cylcap3)
    }

    /// The space of operators from `domain` to `codomain` under the operator norm.
    pub fn operator_space(domain: &SpaceSpec, codomain: &SpaceSpec) -> Result<Self> {
        if domain.is_operator_space() || codomain.is_operator_space() {
            return Err(GeomError::InvalidSpace("nested operator spaces are not supported".into()));
        }
        Ok(SpaceSpec {
            dim: domain.dim * codomain.dim,
            kind: NormKind::OperatorNorm { domain: Box::new(domain.clone()), codomain: Box::new(codomain.clone()) },
            extreme: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn is_operator_space(&self) -> bool {
        matches!(self.kind, NormKind::OperatorNorm { .. })
    }

    /// (domain, codomain) of an operator space.
    pub fn operator_factors(&self) -> Option<(&SpaceSpec, &SpaceSpec)> {
        match &self.kind {
            NormKind::OperatorNorm { domain, codomain } => Some((domain, codomain)),
            _ => None,
        }
    }

    /// True for ℓ_p with 1 < p < ∞.
    pub fn is_strictly_convex(&self) -> bool {
        matches!(self.kind, NormKind::Lp(p) if p > 1.0 && p < f64::INFINITY)
    }

    /// Relative tolerance of values computed in this space.
    pub fn tolerance(&self) -> f64 {
        match &self.kind {
            NormKind::OperatorNorm { domain, codomain } => {
                if operator::method_for(domain, codomain) == operator::NormMethod::Sampled {
                    TAU_SAMP
                } else {
                    TAU_EQ
                }
            }
            _ => TAU_EQ,
        }
    }

    /// Relative rounding noise of a single norm evaluation.
    pub(crate) fn noise(&self) -> f64 {
        match &self.kind {
            NormKind::OperatorNorm { domain, codomain } => {
                if operator::method_for(domain, codomain) == operator::NormMethod::Sampled {
                    1e-13
                } else {
                    1e-14
                }
            }
            NormKind::Polyhedral { .. } => 1e-14,
            _ => 8.0 * f64::EPSILON,
        }
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        check_dim(self.dim, v.len())?;
        if v.iter().all(|a| a.is_finite()) {
            Ok(())
        } else {
            Err(GeomError::UndefinedInput("non-finite coordinate"))
        }
    }

    /// ‖v‖.
    pub fn norm_eval(&self, v: &[f64]) -> Result<f64> {
        self.check(v)?;
        Ok(self.norm(v))
    }

    pub(crate) fn norm(&self, v: &[f64]) -> f64 {
        match &self.kind {
            NormKind::Lp(p) => lp_norm(v, *p),
            NormKind::Polyhedral { .. } => {
                if v.iter().all(|&a| a == 0.0) {
                    return 0.0;
                }
                let ext = self.extreme.as_deref().unwrap_or(&[]);
                lp::gauge(ext, v).map_or(f64::NAN, |(g, _)| g.max(0.0))
            }
            NormKind::Radial(g) => g.norm(v),
            NormKind::OperatorNorm { domain, codomain } => operator::norm_of_flat(domain, codomain, v).value,
        }
    }

    /// sup{f(x) : ‖x‖ ≤ 1}. Not available for operator spaces.
    pub fn dual_norm_eval(&self, f: &[f64]) -> Result<f64> {
        self.check(f)?;
        match &self.kind {
            NormKind::Lp(p) => Ok(lp_norm(f, conjugate(*p))),
            NormKind::Polyhedral { .. } => {
                let ext = self.extreme.as_deref().unwrap_or(&[]);
                Ok(ext.iter().map(|e| dot(f, e)).fold(0.0, f64::max))
            }
            // support function of the capsule: max over the two centres of f(c) + |f|₂
            NormKind::Radial(_) => Ok(f[self.dim - 1].abs() + norm2(f)),
            NormKind::OperatorNorm { .. } => Err(GeomError::Unsupported("dual norm of an operator space")),
        }
    }

    /// A dual-unit f with f(x) = ‖x‖.
    pub fn norming_functional(&self, x: &[f64]) -> Result<Covector> {
        self.check(x)?;
        if x.iter().all(|&a| a == 0.0) {
            return Err(GeomError::UndefinedInput("norming functional of the zero vector"));
        }
        let coords = match &self.kind {
            NormKind::Lp(p) => {
                let p = *p;
                if p == 1.0 {
                    x.iter().map(|&a| if a == 0.0 { 0.0 } else { a.signum() }).collect()
                } else if p == f64::INFINITY {
                    let mut best = 0;
                    for i in 1..x.len() {
                        if x[i].abs() > x[best].abs() {
                            best = i;
                        }
                    }
                    let mut f = vec![0.0; x.len()];
                    f[best] = x[best].signum();
                    f
                } else {
                    let n = lp_norm(x, p);
                    x.iter().map(|&a| a.signum() * (a.abs() / n).powf(p - 1.0)).collect()
                }
            }
            NormKind::Polyhedral { .. } => {
                let ext = self.extreme.as_deref().unwrap_or(&[]);
                lp::gauge(ext, x)
                    .map(|(_, f)| f)
                    .ok_or_else(|| GeomError::Inconsistency("polyhedral gauge program failed".into()))?
            }
            NormKind::Radial(g) => g.gradient(x),
            NormKind::OperatorNorm { domain, codomain } => {
                let r = operator::norm_of_flat(domain, codomain, x);
                let m = Matrix::new(codomain.dim, domain.dim, x.to_vec())?;
                let g = codomain.norming_functional(&m.mul_vec(&r.maximizer))?;
                Matrix::outer(&g.coords, &r.maximizer).into_vec()
            }
        };
        Ok(Covector { coords })
    }

    /// One-sided derivative of t ↦ ‖x + t y‖ at 0: `Plus` is the right
    /// derivative, `Minus` the left one.
    pub fn dir_deriv(&self, x: &[f64], y: &[f64], side: Side) -> Result<DirDeriv> {
        self.check(x)?;
        self.check(y)?;
        if x.iter().all(|&a| a == 0.0) {
            return Err(GeomError::UndefinedInput("derivative at the zero vector"));
        }
        match side {
            Side::Plus => Ok(self.right_derivative(x, y)),
            Side::Minus => {
                let neg: Vec<f64> = y.iter().map(|a| -a).collect();
                let d = self.right_derivative(x, &neg);
                Ok(DirDeriv { value: -d.value, lo: -d.hi, hi: -d.lo, certified: d.certified })
            }
        }
    }

    fn right_derivative(&self, x: &[f64], y: &[f64]) -> DirDeriv {
        let ny = self.norm(y);
        if ny == 0.0 {
            return DirDeriv { value: 0.0, lo: 0.0, hi: 0.0, certified: true };
        }
        let nx = self.norm(x);
        let s = nx / ny;
        let tol = self.tolerance() * ny;
        let noise = self.noise();
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut prev_q: Option<f64> = None;
        let mut prev_r: Option<f64> = None;
        let mut value = f64::NAN;
        for k in 10..=40 {
            let t = s * (2.0f64).powi(-k);
            if noise * (2.0f64).powi(k) * ny > tol && prev_q.is_some() {
                break;
            }
            let up = self.norm(&linalg::axpy(x, t, y));
            let down = self.norm(&linalg::axpy(x, -t, y));
            let q = (up - nx) / t;
            hi = hi.min(q);
            lo = lo.max((nx - down) / t);
            value = q;
            if let Some(pq) = prev_q {
                if (q - pq).abs() <= tol {
                    return DirDeriv { value: q, lo: lo.min(q), hi: hi.max(q), certified: true };
                }
                let r = 2.0 * q - pq;
                value = r.min(hi).max(lo);
                if let Some(pr) = prev_r {
                    if (r - pr).abs() <= tol {
                        return DirDeriv { value, lo, hi, certified: true };
                    }
                }
                prev_r = Some(r);
            }
            prev_q = Some(q);
        }
        DirDeriv { value, lo, hi, certified: false }
    }

    /// Extreme points of the unit ball, when they can be listed exactly.
    pub fn extreme_points(&self) -> Option<&[Vec<f64>]> {
        self.extreme.as_deref()
    }

    /// At least `resolution` unit vectors spread over the sphere, plus ±eᵢ.
    pub fn sphere_sample(&self, resolution: usize) -> Result<Vec<Vec<f64>>> {
        if resolution == 0 {
            return Err(GeomError::OutOfRange("resolution must be positive"));
        }
        let mut dirs = direction_sample(self.dim, resolution, SPHERE_SEED);
        for i in 0..self.dim {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; self.dim];
                e[i] = s;
                dirs.push(e);
            }
        }
        Ok(dirs
            .into_iter()
            .map(|d| {
                let n = self.norm(&d);
                linalg::scaled(&d, 1.0 / n)
            })
            .collect())
    }
}

/// Euclidean unit directions: an angular grid in the plane, a Fibonacci
/// lattice (made symmetric) in space, seeded Gaussian directions above.
pub(crate) fn direction_sample(dim: usize, resolution: usize, seed: u64) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..resolution)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / resolution as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let m = resolution.div_ceil(2);
            let golden = PI * (3.0 - 5.0f64.sqrt());
            let mut out = Vec::with_capacity(2 * m);
            for k in 0..m {
                let z = (k as f64 + 0.5) / m as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * k as f64;
                let p = vec![r * phi.cos(), r * phi.sin(), z];
                out.push(p.iter().map(|a| -a).collect());
                out.push(p);
            }
            out
        }
        _ => {
            let m = resolution.div_ceil(2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(2 * m);
            while out.len() < 2 * m {
                let g: Vec<f64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
                let n = norm2(&g);
                if n > 1e-8 {
                    let p = linalg::scaled(&g, 1.0 / n);
                    out.push(p.iter().map(|a| -a).collect());
                    out.push(p);
                }
            }
            out
        }
    }
}

/// Typical angular distance between neighbouring samples.
pub(crate) fn sample_spacing(dim: usize, count: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI / count as f64,
        3 => (4.0 * PI / count as f64).sqrt(),
        d => {
            // surface of S^{d-1} shared equally among the samples
            let area = sphere_area(d);
            (area / count as f64).powf(1.0 / (d as f64 - 1.0))
        }
    }
}

fn sphere_area(d: usize) -> f64 {
    // area of the unit sphere in R^d; stepping from R^n to R^{n+2} multiplies it by 2π/n
    let (mut a, mut n) = if d % 2 == 0 { (2.0 * PI, 2) } else { (4.0 * PI, 3) };
    while n < d {
        a *= 2.0 * PI / n as f64;
        n += 2;
    }
    a
}

pub(crate) fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p == f64::INFINITY {
        1.0
    } else {
        p / (p - 1.0)
    }
}

pub(crate) fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        v.iter().map(|a| a.abs()).sum()
    } else if p == 2.0 {
        norm2(v)
    } else if p == f64::INFINITY {
        v.iter().fold(0.0, |m, a| m.max(a.abs()))
    } else {
        let m = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * v.iter().map(|a| (a.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Ray-cast the stadium boundary directly from its pieces.
    fn stadium_ray_norm(v: [f64; 2]) -> f64 {
        let (a, b) = (v[0], v[1]);
        // boundary radius along direction v: smallest t > 0 with v/t on a piece
        let mut ts = Vec::new();
        // vertical sides |x| = 1 with |y| <= 1
        if a != 0.0 {
            let t = a.abs();
            if (b / t).abs() <= 1.0 + 1e-15 {
                ts.push(t);
            }
        }
        // caps x² + (y ∓ 1)² = 1 with |y| ≥ 1: solve quadratic in u = 1/t
        for c in [1.0, -1.0] {
            // (a u)² + (b u - c)² = 1  =>  (a²+b²)u² - 2bc u = 0
            let u = 2.0 * b * c / (a * a + b * b);
            if u > 0.0 && (b * u).abs() >= 1.0 - 1e-15 {
                ts.push(1.0 / u);
            }
        }
        ts.into_iter().fold(0.0, f64::max)
    }

    #[test]
    fn stadium_anchor_values() {
        let s = SpaceSpec::stadium2();
        for v in [[1.0, 1.0], [0.0, 2.0], [1.0, -1.0]] {
            assert_eq!(s.norm_eval(&v).unwrap(), 1.0);
        }
        assert_relative_eq!(s.norm_eval(&[1.05, 0.75]).unwrap(), 1.05, epsilon = 1e-15);
        for k in 0..360 {
            let t = k as f64 * PI / 180.0 + 0.01;
            let v = [1.7 * t.cos(), 1.7 * t.sin()];
            assert_relative_eq!(s.norm_eval(&v).unwrap(), stadium_ray_norm(v), epsilon = 1e-12);
        }
    }

    #[test]
    fn dual_norms_match_brute_force() {
        let box2 = SpaceSpec::polyhedral(vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ])
        .unwrap();
        assert_relative_eq!(box2.dual_norm_eval(&[1.0, 1.0]).unwrap(), 2.0);
        assert_relative_eq!(SpaceSpec::l1(3).dual_norm_eval(&[1.0, -1.0, 0.0]).unwrap(), 1.0);
        // stadium: grid over the boundary
        let s = SpaceSpec::stadium2();
        for f in [[0.0, 1.0], [1.0, 0.3], [-0.4, 2.0]] {
            let mut best = 0.0f64;
            for k in 0..200_000 {
                let t = 2.0 * PI * k as f64 / 200_000.0;
                let d = [t.cos(), t.sin()];
                let n = stadium_ray_norm(d);
                best = best.max((f[0] * d[0] + f[1] * d[1]) / n);
            }
            assert_relative_eq!(s.dual_norm_eval(&f).unwrap(), best, epsilon = 1e-8);
        }
    }

    #[test]
    fn norming_functionals() {
        let f = SpaceSpec::l2(2).norming_functional(&[3.0, 4.0]).unwrap();
        assert_relative_eq!(f.coords[0], 0.6);
        assert_relative_eq!(f.coords[1], 0.8);
        let f = SpaceSpec::linf(2).norming_functional(&[1.0, 0.5]).unwrap();
        assert_eq!(f.coords, vec![1.0, 0.0]);
        let f = SpaceSpec::l1(3).norming_functional(&[1.0, -2.0, 0.0]).unwrap();
        assert_eq!(&f.coords[..2], &[1.0, -1.0]);
        assert!(SpaceSpec::l2(2).norming_functional(&[0.0, 0.0]).is_err());
        for s in [SpaceSpec::stadium2(), SpaceSpec::cylcap3()] {
            let x: Vec<f64> = (0..s.dim()).map(|i| 0.3 + 0.4 * i as f64).collect();
            let f = s.norming_functional(&x).unwrap();
            assert_relative_eq!(f.apply(&x), s.norm_eval(&x).unwrap(), epsilon = 1e-14);
            assert_relative_eq!(s.dual_norm_eval(&f.coords).unwrap(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn derivative_examples() {
        let l2 = SpaceSpec::l2(2);
        let d = l2.dir_deriv(&[1.0, 0.0], &[0.0, 1.0], Side::Plus).unwrap();
        assert!(d.certified && d.value.abs() < 1e-9);
        let linf = SpaceSpec::linf(2);
        let p = linf.dir_deriv(&[1.0, 1.0], &[1.0, 0.0], Side::Plus).unwrap();
        let m = linf.dir_deriv(&[1.0, 1.0], &[1.0, 0.0], Side::Minus).unwrap();
        assert!((p.value - 1.0).abs() < 1e-9 && m.value.abs() < 1e-9);
        assert!(p.certified && m.certified);
        // smooth curved case against the analytic derivative
        let l4 = SpaceSpec::lp(3, 4.0).unwrap();
        let x = [0.5, -1.0, 0.25];
        let y = [0.3, 0.2, -1.0];
        let g = l4.norming_functional(&x).unwrap();
        let d = l4.dir_deriv(&x, &y, Side::Plus).unwrap();
        assert!(d.certified);
        assert!((d.value - g.apply(&y)).abs() < 1e-8);
    }

    #[test]
    fn extreme_points_and_pruning() {
        assert_eq!(SpaceSpec::l1(3).extreme_points().unwrap().len(), 6);
        assert_eq!(SpaceSpec::linf(2).extreme_points().unwrap().len(), 4);
        assert!(SpaceSpec::stadium2().extreme_points().is_none());
        let hexish = SpaceSpec::polyhedral(vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
            vec![0.25, 0.25],
            vec![-0.25, -0.25],
        ])
        .unwrap();
        assert_eq!(hexish.extreme_points().unwrap().len(), 4);
        assert!(SpaceSpec::polyhedral(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn sphere_samples_are_unit() {
        let l2 = SpaceSpec::l2(2);
        let pts = l2.sphere_sample(4).unwrap();
        for target in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]] {
            assert!(pts.iter().any(|p| (p[0] - target[0]).abs() < 1e-9 && (p[1] - target[1]).abs() < 1e-9));
        }
        let s = SpaceSpec::stadium2();
        for p in s.sphere_sample(4096).unwrap() {
            assert!((s.norm_eval(&p).unwrap() - 1.0).abs() < 1e-6);
        }
        let l1 = SpaceSpec::l1(3);
        let best = l1.sphere_sample(1000).unwrap().iter().map(|p| norm2(p)).fold(0.0, f64::max);
        assert!((best - 1.0).abs() < 1e-6);
        assert!(l1.sphere_sample(0).is_err());
    }

    #[test]
    fn sphere_area_recursion() {
        assert_relative_eq!(sphere_area(2), 2.0 * PI);
        assert_relative_eq!(sphere_area(3), 4.0 * PI);
        assert_relative_eq!(sphere_area(4), 2.0 * PI * PI);
    }
}
