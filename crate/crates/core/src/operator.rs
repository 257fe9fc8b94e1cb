//! Linear operators between normed spaces: operator norms, norm-attainment
//! sets, pointwise witnesses for operator-level relations, and the rank-one
//! constructions used to exhibit strongly orthogonal directions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::check_dim;
use crate::geometry::{Geometry, Verdict, Witness};
use crate::linalg::{self, axpy, norm2, scaled, Matrix};
use crate::search::golden_max;
use crate::space::{self, Covector, Gauge, NormKind, SpaceSpec};
use crate::{GeomError, Result, SB_SLACK};

/// How an operator norm was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    /// Maximum over the extreme points of the domain ball.
    Exact,
    /// Largest singular value, for Euclidean domain and codomain.
    Spectral,
    /// Dense boundary sampling followed by local golden-section refinement.
    Sampled,
}

impl NormMethod {
    pub fn name(self) -> &'static str {
        match self {
            NormMethod::Exact => "exact",
            NormMethod::Spectral => "spectral",
            NormMethod::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNormResult {
    pub value: f64,
    pub method: NormMethod,
    /// Unit vector of the domain with ‖T·maximizer‖ = value.
    pub maximizer: Vec<f64>,
    /// The value is the norm of an image of an actual unit vector, hence a lower bound.
    pub lower_certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    matrix: Matrix,
    domain: SpaceSpec,
    codomain: SpaceSpec,
}

pub(crate) fn method_for(domain: &SpaceSpec, codomain: &SpaceSpec) -> NormMethod {
    if domain.extreme_points().is_some() {
        NormMethod::Exact
    } else if matches!(domain.kind(), NormKind::Lp(p) if *p == 2.0)
        && matches!(codomain.kind(), NormKind::Lp(p) if *p == 2.0)
    {
        NormMethod::Spectral
    } else {
        NormMethod::Sampled
    }
}

fn samples_for(dim: usize) -> usize {
    match dim {
        2 => 4096,
        _ => 20_000,
    }
}

/// Operator norm of the codomain.dim × domain.dim matrix stored row-major in `flat`.
pub(crate) fn norm_of_flat(domain: &SpaceSpec, codomain: &SpaceSpec, flat: &[f64]) -> OperatorNormResult {
    let (n, m) = (domain.dim(), codomain.dim());
    let apply = |v: &[f64]| -> Vec<f64> { (0..m).map(|i| linalg::dot(&flat[i * n..(i + 1) * n], v)).collect() };
    let image = |v: &[f64]| codomain.norm(&apply(v));
    let method = method_for(domain, codomain);
    if flat.iter().all(|&a| a == 0.0) {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        let e = scaled(&e, 1.0 / domain.norm(&e));
        return OperatorNormResult { value: 0.0, method, maximizer: e, lower_certified: true };
    }
    let (maximizer, value) = match method {
        NormMethod::Exact => {
            let ext = domain.extreme_points().expect("exact path needs extreme points");
            let mut best = (ext[0].clone(), f64::NEG_INFINITY);
            for e in ext {
                let v = image(e);
                if v > best.1 {
                    best = (e.clone(), v);
                }
            }
            best
        }
        NormMethod::Spectral => {
            let mat = Matrix::new(m, n, flat.to_vec()).expect("shape checked by caller");
            let v = mat.svd().v.column(0);
            let val = norm2(&mat.mul_vec(&v));
            (v, val)
        }
        NormMethod::Sampled => match domain.kind() {
            NormKind::Radial(g) => sampled_radial(*g, &image),
            _ => sampled_generic(domain, &image),
        },
    };
    OperatorNormResult { value, method, maximizer, lower_certified: true }
}

/// Maximizes over the upper cap, which with its negation holds every extreme point.
fn sampled_radial(g: Gauge, image: &impl Fn(&[f64]) -> f64) -> (Vec<f64>, f64) {
    let half = 0.5 * PI;
    match g {
        Gauge::Stadium2 => {
            let count = 4096;
            let step = PI / count as f64;
            let f = |t: f64| image(&g.cap_point(t.clamp(-half, half), 0.0));
            let mut grid: Vec<(f64, f64)> = (0..=count)
                .map(|k| {
                    let t = -half + k as f64 * step;
                    (t, f(t))
                })
                .collect();
            grid.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));
            let mut best = grid[0];
            for &(t0, _) in grid.iter().take(8) {
                let a = (t0 - 2.0 * step).max(-half);
                let b = (t0 + 2.0 * step).min(half);
                let (t, v) = golden_max(f, a, b, 1e-13);
                if v > best.1 {
                    best = (t, v);
                }
                // golden never lands on the window ends; seams are attained there
                for e in [a, b] {
                    let v = f(e);
                    if v > best.1 {
                        best = (e, v);
                    }
                }
            }
            (g.cap_point(best.0.clamp(-half, half), 0.0), best.1)
        }
        Gauge::Cylcap3 => {
            let count = 20_000;
            let golden = PI * (3.0 - 5.0f64.sqrt());
            let f = |p: &[f64]| image(&g.cap_point(p[0].clamp(0.0, half), p[1]));
            let mut grid: Vec<(Vec<f64>, f64)> = (0..count)
                .map(|k| {
                    // equal-area rings on the unit hemisphere
                    let polar = (1.0 - (k as f64 + 0.5) / count as f64).acos();
                    let p = vec![polar, golden * k as f64];
                    let v = f(&p);
                    (p, v)
                })
                .collect();
            for k in 0..1024 {
                let p = vec![half, 2.0 * PI * k as f64 / 1024.0];
                let v = f(&p);
                grid.push((p, v));
            }
            grid.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));
            let spacing = (2.0 * PI / count as f64).sqrt();
            let mut best = grid[0].clone();
            for (p0, _) in grid.iter().take(8) {
                let (p, v) = coordinate_ascent(&f, p0.clone(), 2.0 * spacing);
                if v > best.1 {
                    best = (p, v);
                }
            }
            (g.cap_point(best.0[0].clamp(0.0, half), best.0[1]), best.1)
        }
    }
}

fn sampled_generic(domain: &SpaceSpec, image: &impl Fn(&[f64]) -> f64) -> (Vec<f64>, f64) {
    let dim = domain.dim();
    let count = samples_for(dim);
    let dirs = space::direction_sample(dim, count, 0xd1_5c0);
    let ratio = |d: &[f64]| {
        let n = domain.norm(d);
        if n == 0.0 {
            0.0
        } else {
            image(d) / n
        }
    };
    let mut scored: Vec<(usize, f64)> = dirs.iter().enumerate().map(|(i, d)| (i, ratio(d))).collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));
    let spacing = space::sample_spacing(dim, dirs.len());
    let mut best = (dirs[scored[0].0].clone(), scored[0].1);
    for &(i, _) in scored.iter().take(8) {
        let (d, v) = coordinate_ascent(&ratio, dirs[i].clone(), 2.0 * spacing);
        if v > best.1 {
            best = (d, v);
        }
    }
    let n = domain.norm(&best.0);
    let x = scaled(&best.0, 1.0 / n);
    let v = image(&x);
    (x, v)
}

/// Coordinate-wise golden-section ascent with an adaptive window.
fn coordinate_ascent(f: &impl Fn(&[f64]) -> f64, start: Vec<f64>, h0: f64) -> (Vec<f64>, f64) {
    let mut p = start;
    let mut val = f(&p);
    let mut h = h0;
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..p.len() {
            let (t, v) = golden_max(
                |t| {
                    let mut q = p.clone();
                    q[i] += t;
                    f(&q)
                },
                -h,
                h,
                h * 1e-6,
            );
            if v > val {
                p[i] += t;
                val = v;
                max_step = max_step.max(t.abs());
            }
        }
        h = (4.0 * max_step).clamp(h / 16.0, h);
        if h < 1e-14 {
            break;
        }
    }
    (p, val)
}

/// The space of operators from `domain` to `codomain`, normed by the operator norm.
pub fn op_space(domain: &SpaceSpec, codomain: &SpaceSpec) -> Result<SpaceSpec> {
    SpaceSpec::operator_space(domain, codomain)
}

impl LinearOperator {
    pub fn new(matrix: Matrix, domain: SpaceSpec, codomain: SpaceSpec) -> Result<Self> {
        check_dim(domain.dim(), matrix.cols())?;
        check_dim(codomain.dim(), matrix.rows())?;
        if !matrix.is_finite() {
            return Err(GeomError::UndefinedInput("non-finite matrix entry"));
        }
        if domain.is_operator_space() || codomain.is_operator_space() {
            return Err(GeomError::InvalidSpace("operators on operator spaces are not supported".into()));
        }
        Ok(LinearOperator { matrix, domain, codomain })
    }

    pub fn from_rows(rows: &[&[f64]], domain: SpaceSpec, codomain: SpaceSpec) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?, domain, codomain)
    }

    /// Rebuilds an operator from a point of `op_space(domain, codomain)`.
    pub fn from_flat(flat: &[f64], domain: &SpaceSpec, codomain: &SpaceSpec) -> Result<Self> {
        Self::new(Matrix::new(codomain.dim(), domain.dim(), flat.to_vec())?, domain.clone(), codomain.clone())
    }

    pub fn identity(space: &SpaceSpec) -> Self {
        LinearOperator { matrix: Matrix::identity(space.dim()), domain: space.clone(), codomain: space.clone() }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &SpaceSpec {
        &self.domain
    }

    pub fn codomain(&self) -> &SpaceSpec {
        &self.codomain
    }

    /// Row-major coordinates, i.e. the operator as a vector of its operator space.
    pub fn flat(&self) -> &[f64] {
        self.matrix.as_slice()
    }

    pub fn op_space(&self) -> SpaceSpec {
        SpaceSpec::operator_space(&self.domain, &self.codomain).expect("checked at construction")
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.domain.dim(), v.len())?;
        Ok(self.matrix.mul_vec(v))
    }

    pub fn operator_norm(&self) -> OperatorNormResult {
        norm_of_flat(&self.domain, &self.codomain, self.flat())
    }

    fn same_spaces(&self, other: &LinearOperator) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(GeomError::DimensionMismatch {
                expected: self.domain.dim() * self.codomain.dim(),
                got: other.domain.dim() * other.codomain.dim(),
            });
        }
        Ok(())
    }

    /// self + s·other.
    pub fn axpy(&self, s: f64, other: &LinearOperator) -> Result<LinearOperator> {
        self.same_spaces(other)?;
        Ok(LinearOperator {
            matrix: self.matrix.axpy(s, &other.matrix)?,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    pub fn scale(&self, s: f64) -> LinearOperator {
        LinearOperator { matrix: self.matrix.scale(s), domain: self.domain.clone(), codomain: self.codomain.clone() }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        if other.codomain != self.domain {
            return Err(GeomError::DimensionMismatch { expected: self.domain.dim(), got: other.codomain.dim() });
        }
        Ok(LinearOperator {
            matrix: self.matrix.mul(&other.matrix)?,
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    pub fn pow(&self, k: u32) -> Result<LinearOperator> {
        if self.domain != self.codomain {
            return Err(GeomError::InvalidSpace("powers need equal domain and codomain".into()));
        }
        Ok(LinearOperator { matrix: self.matrix.pow(k)?, domain: self.domain.clone(), codomain: self.codomain.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.flat().iter().all(|&a| a == 0.0)
    }

    /// Estimate of M_T = {x ∈ S_X : ‖Tx‖ = ‖T‖} at relative tolerance `tol`.
    pub fn attainment_set(&self, tol: f64) -> Result<NormAttainmentSet> {
        if !(tol > 0.0) {
            return Err(GeomError::OutOfRange("attainment tolerance must be positive"));
        }
        let dim = self.domain.dim();
        let result = self.operator_norm();
        let samples = self.domain.sphere_sample(samples_for(dim))?;
        let spacing = space::sample_spacing(dim, samples.len());
        let floor = result.value * (1.0 - tol);
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut values = Vec::new();
        for p in samples.into_iter().chain([result.maximizer.clone(), scaled(&result.maximizer, -1.0)]) {
            let v = self.codomain.norm(&self.matrix.mul_vec(&p));
            if v >= floor {
                points.push(p);
                values.push(v);
            }
        }
        let dirs: Vec<Vec<f64>> = points.iter().map(|p| scaled(p, 1.0 / norm2(p))).collect();
        let threshold = 2.0 * spacing;
        let index = DirectionIndex::new(&dirs, threshold);
        let mut uf = UnionFind::new(points.len());
        for i in 0..dirs.len() {
            for j in index.near(&dirs[i]) {
                if j > i && dist2(&dirs[i], &dirs[j]) <= threshold {
                    uf.union(i, j);
                }
            }
        }
        let mut label_of_root = BTreeMap::new();
        let labels: Vec<usize> = (0..points.len())
            .map(|i| {
                let r = uf.find(i);
                let next = label_of_root.len();
                *label_of_root.entry(r).or_insert(next)
            })
            .collect();
        let component_count = label_of_root.len();
        // identify each component with the one holding its antipodes
        let mut ident = UnionFind::new(component_count);
        for i in 0..dirs.len() {
            let neg = scaled(&dirs[i], -1.0);
            if let Some(j) = index.near(&neg).into_iter().find(|&j| dist2(&neg, &dirs[j]) <= threshold) {
                ident.union(labels[i], labels[j]);
            }
        }
        let identified_count = (0..component_count).filter(|&c| ident.find(c) == c).count();
        Ok(NormAttainmentSet {
            norm: result.value,
            tol,
            points,
            values,
            labels,
            component_count,
            identified_count,
            spacing,
        })
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Bucket grid over unit directions for neighbour queries in dims ≤ 3.
struct DirectionIndex {
    cell: f64,
    buckets: Option<BTreeMap<Vec<i64>, Vec<usize>>>,
    len: usize,
}

impl DirectionIndex {
    fn new(dirs: &[Vec<f64>], cell: f64) -> Self {
        let dim = dirs.first().map_or(0, |d| d.len());
        if dim > 3 {
            return DirectionIndex { cell, buckets: None, len: dirs.len() };
        }
        let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (i, d) in dirs.iter().enumerate() {
            buckets.entry(Self::key(d, cell)).or_default().push(i);
        }
        DirectionIndex { cell, buckets: Some(buckets), len: dirs.len() }
    }

    fn key(d: &[f64], cell: f64) -> Vec<i64> {
        d.iter().map(|a| (a / cell).floor() as i64).collect()
    }

    fn near(&self, d: &[f64]) -> Vec<usize> {
        let Some(buckets) = &self.buckets else {
            return (0..self.len).collect();
        };
        let base = Self::key(d, self.cell);
        let mut out = Vec::new();
        let dim = base.len();
        for code in 0..3usize.pow(dim as u32) {
            let mut key = base.clone();
            let mut c = code;
            for k in key.iter_mut() {
                *k += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(v) = buckets.get(&key) {
                out.extend_from_slice(v);
            }
        }
        out
    }
}

/// Sampled estimate of a norm-attainment set.
#[derive(Debug, Clone, PartialEq)]
pub struct NormAttainmentSet {
    /// ‖T‖ as computed by [`LinearOperator::operator_norm`].
    pub norm: f64,
    pub tol: f64,
    /// Unit vectors x with ‖Tx‖ ≥ ‖T‖(1 − tol), on the full sphere.
    pub points: Vec<Vec<f64>>,
    /// ‖Tx‖ for each point.
    pub values: Vec<f64>,
    /// Connected-component label of each point.
    pub labels: Vec<usize>,
    /// Components before identifying x with −x.
    pub component_count: usize,
    /// Components after identifying x with −x.
    pub identified_count: usize,
    /// Typical angular distance between samples; adjacency is twice this.
    pub spacing: f64,
}

impl NormAttainmentSet {
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Label of the component holding the point nearest to `x` in direction.
    pub fn component_of(&self, x: &[f64]) -> Option<usize> {
        let d = scaled(x, 1.0 / norm2(x));
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dist2(&scaled(p, 1.0 / norm2(p)), &d)))
            .filter(|&(_, dd)| dd <= 2.0 * self.spacing)
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(i, _)| self.labels[i])
    }
}

/// Verdict of the pointwise parallelism search together with its witness:
/// the best candidate x ∈ S_X and sign s maximizing
/// −max(‖T‖−‖Tx‖, ‖A‖−‖Ax‖, ‖Tx‖+‖Ax‖−‖Tx+sAx‖).
pub fn witness_parallel_verdict(t: &LinearOperator, a: &LinearOperator) -> Result<(Verdict, Option<(Vec<f64>, f64)>)> {
    t.same_spaces(a)?;
    let op = t.op_space();
    let tau = op.tolerance();
    let (x_space, y_space) = (t.domain(), t.codomain());
    let nt = t.operator_norm();
    let na = a.operator_norm();
    let mut cands: Vec<Vec<f64>> = vec![nt.maximizer.clone(), na.maximizer.clone()];
    for s in [1.0, -1.0] {
        cands.push(t.axpy(s, a)?.operator_norm().maximizer);
    }
    if let Some(ext) = x_space.extreme_points() {
        cands.extend(ext.iter().cloned());
    }
    let mt = t.attainment_set(1e-4)?;
    for p in &mt.points {
        if y_space.norm(&a.matrix.mul_vec(p)) >= na.value * (1.0 - 1e-4) {
            cands.push(p.clone());
        }
    }
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for x in cands {
        let nx = x_space.norm(&x);
        if nx == 0.0 {
            continue;
        }
        let x = scaled(&x, 1.0 / nx);
        let tx = t.matrix.mul_vec(&x);
        let ax = a.matrix.mul_vec(&x);
        let (ntx, nax) = (y_space.norm(&tx), y_space.norm(&ax));
        for s in [1.0, -1.0] {
            let sum = y_space.norm(&axpy(&tx, s, &ax));
            let worst = (nt.value - ntx).max(na.value - nax).max(ntx + nax - sum);
            if best.as_ref().map_or(true, |(m, _, _)| -worst > *m) {
                best = Some((-worst, x.clone(), s));
            }
        }
    }
    let tol = tau * (nt.value + na.value);
    let (margin, x, s) = best.expect("candidate list is never empty");
    let verdict = Verdict::decide(margin, tol, Some(Witness::Direction(x.clone())));
    let witness = if verdict.holds { Some((x, s)) } else { None };
    Ok((verdict, witness))
}

/// A unit x ∈ M_T ∩ M_A with Tx ∥ Ax, and the sign realizing it.
pub fn witness_parallel_pointwise(t: &LinearOperator, a: &LinearOperator) -> Result<Option<(Vec<f64>, f64)>> {
    witness_parallel_verdict(t, a).map(|(_, w)| w)
}

/// A unit x ∈ M_T with Tx ⊥_B Ax, searched by decreasing ‖Tx‖.
pub fn witness_birkhoff_pointwise(t: &LinearOperator, a: &LinearOperator) -> Result<Option<Vec<f64>>> {
    t.same_spaces(a)?;
    let op = t.op_space();
    let tau = op.tolerance();
    let nt = t.operator_norm();
    let (xs, ys) = (t.domain(), t.codomain());
    let mut cands: Vec<Vec<f64>> = vec![nt.maximizer.clone()];
    if !a.is_zero() && !t.is_zero() {
        // maximizers of T + (μ/2)A for μ inside the flat part of ‖T + μA‖ lie in M_T
        let iv = Geometry::new(&op).sublevel_interval(t.flat(), a.flat(), SB_SLACK)?;
        for mu in [0.5 * iv.hi, 0.5 * iv.lo, 0.25 * iv.hi, 0.25 * iv.lo] {
            if mu != 0.0 {
                cands.push(t.axpy(0.5 * mu, a)?.operator_norm().maximizer);
            }
        }
    }
    if let Some(ext) = xs.extreme_points() {
        cands.extend(ext.iter().cloned());
    }
    cands.extend(t.attainment_set(1e-4)?.points);
    let mut scored: Vec<(f64, Vec<f64>)> = cands
        .into_iter()
        .filter_map(|x| {
            let n = xs.norm(&x);
            (n > 0.0).then(|| {
                let x = scaled(&x, 1.0 / n);
                (ys.norm(&t.matrix.mul_vec(&x)), x)
            })
        })
        .filter(|(v, _)| *v >= nt.value * (1.0 - tau))
        .collect();
    scored.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap_or(core::cmp::Ordering::Equal));
    let geo = Geometry::with_tolerance(ys, tau);
    for (_, x) in scored {
        let tx = t.matrix.mul_vec(&x);
        let ax = a.matrix.mul_vec(&x);
        match geo.birkhoff(&tx, &ax) {
            Ok(v) if v.holds => return Ok(Some(x)),
            Ok(_) | Err(GeomError::Inconsistency(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// The operator z ↦ f(z)·y, divided by f(anchor) when an anchor is given so
/// that the anchor maps to y. Its kernel is ker f.
pub fn rank_one(
    y: &[f64],
    f: &Covector,
    anchor: Option<&[f64]>,
    domain: &SpaceSpec,
    codomain: &SpaceSpec,
) -> Result<LinearOperator> {
    check_dim(codomain.dim(), y.len())?;
    check_dim(domain.dim(), f.coords.len())?;
    if f.coords.iter().all(|&a| a == 0.0) {
        return Err(GeomError::UndefinedInput("rank-one operator from the zero functional"));
    }
    let scale = match anchor {
        Some(x) => {
            check_dim(domain.dim(), x.len())?;
            let fx = f.apply(x);
            if fx == 0.0 {
                return Err(GeomError::UndefinedInput("anchor lies in the kernel of the functional"));
            }
            1.0 / fx
        }
        None => 1.0,
    };
    LinearOperator::new(Matrix::outer(&scaled(y, scale), &f.coords), domain.clone(), codomain.clone())
}

/// Builds A with T ⊥_SB A: take x ∈ M_T, a direction y with Tx ⊥_SB y from
/// the kernel of a norming functional of Tx, and let A map x to y and the
/// kernel of a norming functional of x to 0. The result is verified in the
/// operator space before it is returned.
pub fn semi_rotund_witness(t: &LinearOperator) -> Result<LinearOperator> {
    if t.is_zero() {
        return Err(GeomError::UndefinedInput("the zero operator has no strongly orthogonal direction"));
    }
    let (xs, ys) = (t.domain(), t.codomain());
    let x = t.operator_norm().maximizer;
    let tx = t.matrix.mul_vec(&x);
    let g = ys.norming_functional(&tx)?;
    let gtx = g.apply(&tx);
    let geo = Geometry::new(ys);
    let mut chosen: Option<Vec<f64>> = None;
    let mut fallback: Option<Vec<f64>> = None;
    for s in ys.sphere_sample(256)? {
        let y = axpy(&s, -g.apply(&s) / gtx, &tx);
        let n = ys.norm(&y);
        if n <= 1e-6 {
            continue;
        }
        let y = scaled(&y, 1.0 / n);
        let v = geo.strong_birkhoff(&tx, &y)?;
        if v.holds && !v.marginal {
            chosen = Some(y);
            break;
        }
        if v.holds && fallback.is_none() {
            fallback = Some(y);
        }
    }
    let y = chosen.or(fallback).ok_or_else(|| {
        GeomError::ConstructionFailed(format!("no direction strongly orthogonal to Tx = {tx:?} was found"))
    })?;
    let f = xs.norming_functional(&x)?;
    let a = rank_one(&y, &f, Some(&x), xs, ys)?;
    let check = Geometry::new(&t.op_space()).strong_birkhoff(t.flat(), a.flat())?;
    if !check.holds {
        return Err(GeomError::ConstructionFailed(format!(
            "T is not strongly orthogonal to the rank-one candidate (margin {}, maximizer {x:?}, direction {y:?})",
            check.margin
        )));
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub eps: f64,
    /// Largest grid magnitude up to which every scanned λ (of either sign)
    /// had a witness; 0 when the smallest one already failed.
    pub lambda_eps: f64,
    /// (λ, y_λ) pairs with ‖Ty_λ + λAy_λ‖ > ‖T‖, for the λ that passed.
    pub witnesses: Vec<(f64, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Every row has a positive λ_ε.
    pub all_positive: bool,
}

/// For each ε, scans λ over ±`lambda_grid` for unit y within ε of M_T with
/// ‖Ty + λAy‖ > ‖T‖ beyond tolerance.
pub fn strong_orth_scan(
    t: &LinearOperator,
    a: &LinearOperator,
    eps_list: &[f64],
    lambda_grid: &[f64],
) -> Result<ScanReport> {
    t.same_spaces(a)?;
    if eps_list.is_empty() || lambda_grid.is_empty() {
        return Err(GeomError::UndefinedInput("scan grids must be nonempty"));
    }
    let (xs, ys) = (t.domain(), t.codomain());
    let tau = t.op_space().tolerance();
    let mt = t.attainment_set(1e-4)?;
    let nt = mt.norm;
    let stride = mt.points.len().div_ceil(256).max(1);
    let reps: Vec<&Vec<f64>> = mt.points.iter().step_by(stride).collect();
    let samples = xs.sphere_sample(samples_for(xs.dim()))?;
    let mut grid: Vec<f64> = lambda_grid.iter().map(|l| l.abs()).filter(|l| *l > 0.0).collect();
    grid.sort_by(|p, q| p.partial_cmp(q).unwrap());
    grid.dedup();
    let near = |y: &[f64], eps: f64| reps.iter().any(|r| xs.norm(&axpy(y, -1.0, r)) <= eps);
    let mut rows = Vec::new();
    for &eps in eps_list {
        let mut pool: Vec<Vec<f64>> = mt.points.clone();
        pool.extend(samples.iter().filter(|y| near(y, eps)).cloned());
        let mut lambda_eps = 0.0;
        let mut witnesses = Vec::new();
        'grid: for &mag in &grid {
            for l in [mag, -mag] {
                let op = t.axpy(l, a)?;
                let mut extra = op.operator_norm().maximizer;
                if !near(&extra, eps) {
                    extra = scaled(&extra, -1.0);
                }
                let head = near(&extra, eps).then_some(&extra);
                let hit = head
                    .into_iter()
                    .chain(pool.iter())
                    .find(|y| ys.norm(&op.matrix.mul_vec(y)) > nt * (1.0 + tau));
                match hit {
                    Some(y) => witnesses.push((l, y.clone())),
                    None => break 'grid,
                }
            }
            lambda_eps = mag;
        }
        rows.push(ScanRow { eps, lambda_eps, witnesses });
    }
    let all_positive = rows.iter().all(|r| r.lambda_eps > 0.0);
    Ok(ScanReport { rows, all_positive })
}
