//! Vector-level relations: Birkhoff–James orthogonality (plain, strong and
//! approximate), norm-parallelism and its approximate form, distance to
//! subspaces, functional certificates, semi-rotund and exposed points.
//!
//! Every predicate returns a [`Verdict`]. Its `margin` is the deciding
//! quantity minus its ideal threshold, so a relation holds when
//! `margin >= -tolerance`. Verdicts whose margin falls in
//! `[-3·tolerance, -tolerance/3)` are flagged `marginal`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::check_dim;
use crate::linalg::{self, axpy, norm2, scaled};
use crate::search::{bisect_boundary, golden_min};
use crate::space::{Covector, DirDeriv, NormKind, Side, SpaceSpec};
use crate::{lp, GeomError, Result, DELTA_SB, SB_SLACK};

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// The sign s with ‖x + s y‖ = ‖x‖ + ‖y‖.
    Sign(f64),
    /// A scalar λ, usually the line minimizer.
    Scalar(f64),
    Direction(Vec<f64>),
    Functional(Covector),
    Interval(SublevelInterval),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub margin: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub marginal: bool,
    /// Set on negative answers of existence searches that only covered a budget.
    pub budget_limited: bool,
}

impl Verdict {
    pub fn decide(margin: f64, tolerance: f64, witness: Option<Witness>) -> Verdict {
        Verdict {
            holds: margin >= -tolerance,
            margin,
            tolerance,
            witness,
            marginal: margin >= -3.0 * tolerance && margin < -tolerance / 3.0,
            budget_limited: false,
        }
    }

    fn trivial(tolerance: f64) -> Verdict {
        Verdict { holds: true, margin: 0.0, tolerance, witness: None, marginal: false, budget_limited: false }
    }
}

/// {λ : ‖x + λy‖ ≤ ‖x‖(1 + slack)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SublevelInterval {
    pub lo: f64,
    pub hi: f64,
    pub slack: f64,
}

impl SublevelInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Relations evaluated in one space with one relative tolerance.
#[derive(Debug, Clone, Copy)]
pub struct Geometry<'a> {
    space: &'a SpaceSpec,
    tau: f64,
}

impl<'a> Geometry<'a> {
    /// Uses the space's own tolerance.
    pub fn new(space: &'a SpaceSpec) -> Self {
        Geometry { space, tau: space.tolerance() }
    }

    pub fn with_tolerance(space: &'a SpaceSpec, tau: f64) -> Self {
        Geometry { space, tau }
    }

    pub fn space(&self) -> &'a SpaceSpec {
        self.space
    }

    pub fn tolerance(&self) -> f64 {
        self.tau
    }

    fn check(&self, v: &[f64]) -> Result<f64> {
        self.space.norm_eval(v)
    }

    fn phi(&self, x: &[f64], y: &[f64], l: f64) -> f64 {
        self.space.norm(&axpy(x, l, y))
    }

    /// Global minimizer and minimum of λ ↦ ‖x + λy‖.
    pub fn line_min(&self, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        if ny == 0.0 {
            return Err(GeomError::UndefinedInput("line search along the zero vector"));
        }
        if nx == 0.0 {
            return Ok((0.0, 0.0));
        }
        // ‖x + λy‖ > ‖x‖ once |λ| > 2‖x‖/‖y‖
        let s = nx / ny;
        let (l, v) = golden_min(|l| self.phi(x, y, l), -2.0 * s, 2.0 * s, 1e-12 * s);
        if v < nx {
            Ok((l, v))
        } else {
            Ok((0.0, nx))
        }
    }

    pub fn sublevel_interval(&self, x: &[f64], y: &[f64], slack: f64) -> Result<SublevelInterval> {
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        if nx == 0.0 || ny == 0.0 {
            return Err(GeomError::UndefinedInput("sublevel interval needs nonzero x and y"));
        }
        if !(slack >= 0.0) {
            return Err(GeomError::OutOfRange("slack must be nonnegative"));
        }
        let s = nx / ny;
        let level = nx * (1.0 + slack);
        let reach = (2.0 + slack) * s * 1.01;
        let inside = |l: f64| self.phi(x, y, l) <= level;
        let (hi, _) = bisect_boundary(inside, 0.0, reach, 1e-12 * s);
        let (lo, _) = bisect_boundary(inside, 0.0, -reach, 1e-12 * s);
        Ok(SublevelInterval { lo, hi, slack })
    }

    fn birkhoff_parts(&self, x: &[f64], y: &[f64]) -> Result<(Verdict, Option<(DirDeriv, DirDeriv)>)> {
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        let tol = self.tau * nx;
        if nx == 0.0 || ny == 0.0 {
            return Ok((Verdict::trivial(tol), None));
        }
        let (l, v) = self.line_min(x, y)?;
        let mut verdict = Verdict::decide(v - nx, tol, Some(Witness::Scalar(l)));
        let dp = self.space.dir_deriv(x, y, Side::Plus)?;
        let dm = self.space.dir_deriv(x, y, Side::Minus)?;
        let dtol = self.tau * ny;
        if dp.certified && dm.certified {
            let deriv_holds = dm.value <= dtol && dp.value >= -dtol;
            let deriv_clear_fail = dm.value > 3.0 * dtol || dp.value < -3.0 * dtol;
            if deriv_holds && verdict.margin < -3.0 * tol {
                return Err(GeomError::Inconsistency(alloc::format!(
                    "derivatives [{}, {}] admit orthogonality but the line minimum dips by {}",
                    dm.value,
                    dp.value,
                    -verdict.margin
                )));
            }
            if deriv_clear_fail && verdict.holds {
                verdict.marginal = true;
            }
        }
        Ok((verdict, Some((dp, dm))))
    }

    /// x ⊥_B y: ‖x + λy‖ ≥ ‖x‖ for every λ.
    pub fn birkhoff(&self, x: &[f64], y: &[f64]) -> Result<Verdict> {
        self.birkhoff_parts(x, y).map(|(v, _)| v)
    }

    /// x ⊥_SB y: ‖x + λy‖ > ‖x‖ for every λ ≠ 0. The margin is
    /// `DELTA_SB` minus the relative width of the sublevel interval, which for
    /// exactly evaluated norms is extrapolated to zero slack when it is wide.
    pub fn strong_birkhoff(&self, x: &[f64], y: &[f64]) -> Result<Verdict> {
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        if nx == 0.0 {
            return Err(GeomError::UndefinedInput("strong orthogonality of the zero vector"));
        }
        if ny == 0.0 {
            return Ok(Verdict::decide(-1.0, DELTA_SB, None));
        }
        let (b, derivs) = self.birkhoff_parts(x, y)?;
        if !b.holds {
            return Ok(Verdict { holds: false, ..b });
        }
        let dtol = self.tau * ny;
        let fast = derivs.map_or(false, |(dp, dm)| {
            dp.certified && dm.certified && dp.value > dtol && dm.value < -dtol
        });
        let iv = self.sublevel_interval(x, y, SB_SLACK)?;
        let mut w = iv.width() * ny / nx;
        if !fast && w > DELTA_SB && self.space.tolerance() <= crate::TAU_EQ {
            if let Some(w0) = self.width_at_zero_slack(x, y, nx / ny)? {
                w = w.min(w0);
            }
        }
        let holds = fast || w <= DELTA_SB;
        let marginal = b.marginal || (!fast && w >= 0.5 * DELTA_SB && w <= 2.0 * DELTA_SB);
        Ok(Verdict {
            holds,
            margin: DELTA_SB - w,
            tolerance: DELTA_SB,
            witness: Some(Witness::Interval(iv)),
            marginal,
            budget_limited: false,
        })
    }

    /// Relative sublevel width extrapolated to slack 0 from the widths at
    /// three slacks, assuming w(s) = w₀ + c·s^a. Contact of order k has
    /// a = 1/k and w₀ = 0, so a λ⁴ minimum does not pass for a flat segment.
    /// None when the widths are not strictly convex in log-slack.
    fn width_at_zero_slack(&self, x: &[f64], y: &[f64], scale: f64) -> Result<Option<f64>> {
        let mut w = [0.0; 3];
        for (slot, slack) in w.iter_mut().zip([1e-10, 1e-8, 1e-6]) {
            *slot = self.sublevel_interval(x, y, slack)?.width() / scale;
        }
        let (d1, d2) = (w[1] - w[0], w[2] - w[1]);
        if !(d1 > 0.0 && d2 > d1) {
            return Ok(None);
        }
        let tail = d1 / (d2 / d1 - 1.0);
        Ok(Some((w[0] - tail).max(0.0)))
    }

    /// x ⊥_D^ε y: ‖x + λy‖ ≥ √(1−ε²)‖x‖ for every λ. A holding verdict
    /// carries a functional certificate outside operator spaces.
    pub fn approx_birkhoff(&self, x: &[f64], y: &[f64], eps: f64) -> Result<Verdict> {
        check_eps(eps)?;
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        let tol = self.tau * nx;
        let thr = (1.0 - eps * eps).sqrt() * nx;
        if nx == 0.0 {
            return Ok(Verdict::trivial(tol));
        }
        if ny == 0.0 {
            return Ok(Verdict::decide(nx - thr, tol, None));
        }
        let (l, v) = self.line_min(x, y)?;
        let mut verdict = Verdict::decide(v - thr, tol, Some(Witness::Scalar(l)));
        if verdict.holds && !self.space.is_operator_space() {
            let f = self.certificate(x, y, thr, Bound::AtLeast)?;
            verdict.witness = Some(Witness::Functional(f));
        }
        Ok(verdict)
    }

    /// x ∥ y: ‖x + s y‖ = ‖x‖ + ‖y‖ for a sign s.
    pub fn parallel(&self, x: &[f64], y: &[f64]) -> Result<Verdict> {
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        let tol = self.tau * (nx + ny);
        if nx == 0.0 || ny == 0.0 {
            return Ok(Verdict::decide(0.0, tol, Some(Witness::Sign(1.0))));
        }
        let mut best = (f64::NEG_INFINITY, 1.0);
        for s in [1.0, -1.0] {
            let m = self.phi(x, y, s) - nx - ny;
            if m > best.0 {
                best = (m, s);
            }
        }
        Ok(Verdict::decide(best.0, tol, Some(Witness::Sign(best.1))))
    }

    /// x ∥^ε y: inf over μ of ‖x + μy‖ ≤ ε‖x‖.
    pub fn approx_parallel(&self, x: &[f64], y: &[f64], eps: f64) -> Result<Verdict> {
        check_eps(eps)?;
        let nx = self.check(x)?;
        let (l, v) = self.line_min(x, y)?;
        Ok(Verdict::decide(eps * nx - v, self.tau * nx, Some(Witness::Scalar(l))))
    }

    /// inf over h in span(basis) of ‖x + h‖.
    pub fn subspace_min(&self, x: &[f64], basis: &[Vec<f64>]) -> Result<f64> {
        let nx = self.check(x)?;
        let dim = self.space.dim();
        for b in basis {
            check_dim(dim, b.len())?;
        }
        if basis.len() >= dim {
            return Err(GeomError::UndefinedInput("basis must have fewer vectors than the dimension"));
        }
        if basis.is_empty() {
            return Ok(nx);
        }
        linalg::orthonormalize(basis).map_err(|_| GeomError::DependentBasis)?;
        if let Some(ext) = self.space.extreme_points() {
            return polyhedral_distance(ext, basis, x);
        }
        Ok(self.descend_subspace(x, basis, nx))
    }

    fn descend_subspace(&self, x: &[f64], basis: &[Vec<f64>], nx: f64) -> f64 {
        let k = basis.len();
        let eval = |c: &[f64]| {
            let mut v = x.to_vec();
            for (ci, b) in c.iter().zip(basis) {
                v = axpy(&v, *ci, b);
            }
            self.space.norm(&v)
        };
        let bnorm: Vec<f64> = basis.iter().map(|b| self.space.norm(b)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5b5_ace);
        let descend = |start: Vec<f64>, rng: &mut ChaCha8Rng| -> (Vec<f64>, f64) {
            let mut c = start;
            let mut val = eval(&c);
            for _ in 0..200 {
                let before = val;
                let mut dirs: Vec<Vec<f64>> = (0..k)
                    .map(|i| {
                        let mut e = vec![0.0; k];
                        e[i] = 1.0 / bnorm[i];
                        e
                    })
                    .collect();
                for _ in 0..k {
                    dirs.push((0..k).map(|i| crate::space::gaussian(rng) / bnorm[i]).collect());
                }
                for u in dirs {
                    let mut bu = vec![0.0; x.len()];
                    for (ui, b) in u.iter().zip(basis) {
                        bu = axpy(&bu, *ui, b);
                    }
                    let nbu = self.space.norm(&bu);
                    if nbu == 0.0 {
                        continue;
                    }
                    let reach = 2.0 * val / nbu;
                    let (t, v) = golden_min(|t| eval(&axpy(&c, t, &u)), -reach, reach, 1e-13 * reach);
                    if v < val {
                        c = axpy(&c, t, &u);
                        val = v;
                    }
                }
                if before - val <= 1e-15 * nx {
                    break;
                }
            }
            (c, val)
        };
        let mut best = descend(vec![0.0; k], &mut rng);
        for _ in 1..8 {
            let start: Vec<f64> = (0..k).map(|i| (rng.gen::<f64>() * 2.0 - 1.0) * nx / bnorm[i]).collect();
            let cand = descend(start, &mut rng);
            if cand.1 < best.1 {
                best = cand;
            }
        }
        if self.space.dim() <= 3 {
            // coarse grid around the incumbent; restart from any point that beats it
            for _ in 0..3 {
                let steps = 20i32;
                let mut improved: Option<(Vec<f64>, f64)> = None;
                let mut idx = vec![-steps; k];
                loop {
                    let c: Vec<f64> = (0..k)
                        .map(|i| best.0[i] + idx[i] as f64 / steps as f64 * 2.0 * nx / bnorm[i])
                        .collect();
                    let v = eval(&c);
                    if v < best.1 - self.tau * nx && improved.as_ref().map_or(true, |(_, iv)| v < *iv) {
                        improved = Some((c, v));
                    }
                    let mut j = 0;
                    while j < k {
                        idx[j] += 1;
                        if idx[j] <= steps {
                            break;
                        }
                        idx[j] = -steps;
                        j += 1;
                    }
                    if j == k {
                        break;
                    }
                }
                match improved {
                    Some((c, _)) => {
                        let cand = descend(c, &mut rng);
                        if cand.1 < best.1 {
                            best = cand;
                        }
                    }
                    None => break,
                }
            }
        }
        best.1
    }

    /// x ⊥_D^ε H for the hyperspace H spanned by `basis`. Both the distance
    /// and the functional vanishing on H are computed and must agree.
    pub fn hyperspace_approx_orth(&self, x: &[f64], basis: &[Vec<f64>], eps: f64) -> Result<Verdict> {
        check_eps(eps)?;
        let nx = self.check(x)?;
        let dim = self.space.dim();
        if nx == 0.0 {
            return Err(GeomError::UndefinedInput("hyperspace test needs nonzero x"));
        }
        if basis.len() + 1 != dim {
            return Err(GeomError::UndefinedInput("basis must span a hyperspace"));
        }
        let d = self.subspace_min(x, basis)?;
        let n = linalg::orthogonal_complement(basis, dim).map_err(|_| GeomError::DependentBasis)?;
        let dual = self.space.dual_norm_eval(&n)?;
        let mut f = scaled(&n, 1.0 / dual);
        if linalg::dot(&f, x) < 0.0 {
            f = scaled(&f, -1.0);
        }
        let f = Covector::new(f);
        let thr = (1.0 - eps * eps).sqrt() * nx;
        let tol = self.tau * nx;
        let by_distance = Verdict::decide(d - thr, tol, None);
        let by_functional = Verdict::decide(f.apply(x) - thr, tol, None);
        if by_distance.holds != by_functional.holds && !by_distance.marginal && !by_functional.marginal {
            return Err(GeomError::Inconsistency(alloc::format!(
                "distance {d} and functional value {} disagree",
                f.apply(x)
            )));
        }
        let mut verdict = by_distance;
        if verdict.holds {
            verdict.witness = Some(Witness::Functional(f));
        }
        Ok(verdict)
    }

    /// A dual-unit f with f(y) = 0 and f(x) = inf ‖x + λy‖. `bound` says
    /// how f(x) must compare with `target` for the certificate to be valid.
    fn certificate(&self, x: &[f64], y: &[f64], target: f64, bound: Bound) -> Result<Covector> {
        if self.space.is_operator_space() {
            return Err(GeomError::Unsupported("functional certificates in operator spaces"));
        }
        let nx = self.space.norm(x);
        let ny = self.space.norm(y);
        let dim = self.space.dim();
        let (l, d) = self.line_min(x, y)?;
        let f = if d <= self.tau * nx {
            if dim == 1 {
                return Err(GeomError::ConstructionFailed("no nonzero functional vanishes on a spanning y".into()));
            }
            let n = linalg::orthogonal_complement(&[y.to_vec()], dim)?;
            let dn = self.space.dual_norm_eval(&n)?;
            scaled(&n, 1.0 / dn)
        } else if let Some(ext) = self.space.extreme_points() {
            lp::maximize_free(x, ext, &[y.to_vec()])
                .ok_or_else(|| GeomError::Inconsistency("certificate program failed".into()))?
                .1
        } else if matches!(self.space.kind(), NormKind::Lp(p) if *p == f64::INFINITY) {
            return Err(GeomError::Unsupported("certificates for high-dimensional max norms"));
        } else {
            self.smooth_certificate(x, y, l, nx / ny)?
        };
        let f = Covector::new(f);
        let fy = f.apply(y);
        let fx = f.apply(x);
        let dual = self.space.dual_norm_eval(&f.coords)?;
        let tol = self.tau * nx;
        let ok_x = match bound {
            Bound::AtLeast => fx >= target - tol,
            Bound::Equal => (fx - d).abs() <= tol,
        };
        if fy.abs() > self.tau * ny || (dual - 1.0).abs() > self.tau || !ok_x {
            return Err(GeomError::Inconsistency(alloc::format!(
                "certificate check failed: f(x) = {fx}, f(y) = {fy}, dual norm {dual}, distance {d}"
            )));
        }
        Ok(f)
    }

    /// For differentiable norms: solve ∇‖x+λy‖·y = 0 by bisection (the map is
    /// nondecreasing in λ) and return the gradient there.
    fn smooth_certificate(&self, x: &[f64], y: &[f64], l0: f64, s: f64) -> Result<Vec<f64>> {
        let slope = |l: f64| -> Result<f64> {
            Ok(self.space.norming_functional(&axpy(x, l, y))?.apply(y))
        };
        let mut h = 1e-6 * s;
        let (mut lo, mut hi) = (l0 - h, l0 + h);
        for _ in 0..60 {
            if slope(lo)? <= 0.0 {
                break;
            }
            h *= 2.0;
            lo = l0 - h;
        }
        h = 1e-6 * s;
        for _ in 0..60 {
            if slope(hi)? >= 0.0 {
                break;
            }
            h *= 2.0;
            hi = l0 + h;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if slope(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (fl, fh) = (slope(lo)?, slope(hi)?);
        let at = if fl.abs() <= fh.abs() { lo } else { hi };
        Ok(self.space.norming_functional(&axpy(x, at, y))?.coords)
    }

    /// The functional of the approximate-orthogonality characterization,
    /// when x ⊥_D^ε y holds.
    pub fn orthogonality_certificate(&self, x: &[f64], y: &[f64], eps: f64) -> Result<Option<Covector>> {
        check_eps(eps)?;
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        if nx == 0.0 || ny == 0.0 {
            return Err(GeomError::UndefinedInput("certificates need nonzero x and y"));
        }
        let thr = (1.0 - eps * eps).sqrt() * nx;
        let (_, v) = self.line_min(x, y)?;
        if v - thr < -self.tau * nx {
            return Ok(None);
        }
        self.certificate(x, y, thr, Bound::AtLeast).map(Some)
    }

    /// The functional of the approximate-parallelism characterization,
    /// when x ∥^ε y holds.
    pub fn parallel_eps_certificate(&self, x: &[f64], y: &[f64], eps: f64) -> Result<Option<Covector>> {
        check_eps(eps)?;
        let nx = self.check(x)?;
        let ny = self.check(y)?;
        if nx == 0.0 || ny == 0.0 {
            return Err(GeomError::UndefinedInput("certificates need nonzero x and y"));
        }
        let (_, v) = self.line_min(x, y)?;
        if eps * nx - v < -self.tau * nx {
            return Ok(None);
        }
        self.certificate(x, y, v, Bound::Equal).map(Some)
    }

    /// Searches for y with x ⊥_SB y over `budget` sphere samples, trying each
    /// sample both raw and projected onto the kernel of a norming functional.
    pub fn semi_rotund_point(&self, x: &[f64], budget: usize) -> Result<Verdict> {
        let nx = self.check(x)?;
        if nx == 0.0 {
            return Err(GeomError::UndefinedInput("semi-rotundity of the zero vector"));
        }
        let f = self.space.norming_functional(x)?;
        let fx = f.apply(x);
        let samples = self.space.sphere_sample(budget)?;
        let mut best: Option<(f64, Vec<f64>, Verdict)> = None;
        let try_dir = |y: Vec<f64>, best: &mut Option<(f64, Vec<f64>, Verdict)>| -> Result<Option<Verdict>> {
            if norm2(&y) <= 1e-9 || !self.quick_birkhoff(x, &y, nx) {
                return Ok(None);
            }
            let v = self.strong_birkhoff(x, &y)?;
            if v.holds && !v.marginal {
                return Ok(Some(Verdict { witness: Some(Witness::Direction(y)), ..v }));
            }
            if v.holds || best.as_ref().map_or(true, |(m, _, _)| v.margin > *m) {
                *best = Some((v.margin, y, v));
            }
            Ok(None)
        };
        for s in &samples {
            let projected = axpy(s, -f.apply(s) / fx, x);
            if let Some(v) = try_dir(projected, &mut best)? {
                return Ok(v);
            }
            if let Some(v) = try_dir(s.clone(), &mut best)? {
                return Ok(v);
            }
        }
        // local refinement around the least-bad candidate
        if let Some((_, centre, _)) = best.clone() {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5e_a7c4);
            let scale = norm2(&centre);
            let mut radius = 0.1 * scale;
            for k in 0..budget.min(256) {
                let d: Vec<f64> = centre.iter().map(|c| c + radius * crate::space::gaussian(&mut rng)).collect();
                if let Some(v) = try_dir(d, &mut best)? {
                    return Ok(v);
                }
                if k % 32 == 31 {
                    radius *= 0.5;
                }
            }
        }
        let mut verdict = match best {
            Some((_, y, v)) => Verdict { holds: false, witness: Some(Witness::Direction(y)), ..v },
            None => Verdict::decide(-1.0, DELTA_SB, None),
        };
        verdict.holds = false;
        verdict.budget_limited = true;
        Ok(verdict)
    }

    /// Cheap necessary test for x ⊥_B y at a few step sizes.
    fn quick_birkhoff(&self, x: &[f64], y: &[f64], nx: f64) -> bool {
        let ny = self.space.norm(y);
        if ny == 0.0 {
            return false;
        }
        let s = nx / ny;
        let floor = nx * (1.0 - self.tau);
        [0.25, 1.0 / 64.0, 1.0 / 1024.0, 1.0 / 16384.0]
            .iter()
            .all(|&h| self.phi(x, y, h * s) >= floor && self.phi(x, y, -h * s) >= floor)
    }

    /// Whether the unit vector x is an exposed point of the unit ball.
    /// Margin is minus the max-coordinate distance to the nearest extreme point.
    pub fn exposed_point(&self, x: &[f64]) -> Result<Verdict> {
        let nx = self.check(x)?;
        let tol = crate::TAU_EQ;
        match self.space.kind() {
            NormKind::Radial(_) | NormKind::OperatorNorm { .. } => {
                return Err(GeomError::Unsupported("exposed-point test for this norm"))
            }
            _ => {}
        }
        if (nx - 1.0).abs() > crate::TAU_SAMP {
            return Err(GeomError::OutOfRange("exposed-point test needs a unit vector"));
        }
        let dist = match self.space.kind() {
            NormKind::Lp(p) if *p > 1.0 && *p < f64::INFINITY => 0.0,
            NormKind::Lp(p) if *p == 1.0 => {
                let mut i = 0;
                for j in 1..x.len() {
                    if x[j].abs() > x[i].abs() {
                        i = j;
                    }
                }
                let off = x.iter().enumerate().filter(|&(j, _)| j != i).fold(0.0f64, |m, (_, a)| m.max(a.abs()));
                (1.0 - x[i].abs()).abs().max(off)
            }
            NormKind::Lp(_) => x.iter().fold(0.0f64, |m, a| m.max((1.0 - a.abs()).abs())),
            _ => {
                let ext = self.space.extreme_points().unwrap_or(&[]);
                ext.iter()
                    .map(|e| e.iter().zip(x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
                    .fold(f64::INFINITY, f64::min)
            }
        };
        Ok(Verdict::decide(-dist, tol, None))
    }
}

#[derive(Clone, Copy)]
enum Bound {
    AtLeast,
    Equal,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(GeomError::OutOfRange("eps must lie in [0, 1)"))
    }
}

/// min Σμ subject to Σ μ_j e_j − Σ c_i b_i = x, μ ≥ 0.
fn polyhedral_distance(ext: &[Vec<f64>], basis: &[Vec<f64>], x: &[f64]) -> Result<f64> {
    let dim = x.len();
    let (m, k) = (ext.len(), basis.len());
    let a: Vec<Vec<f64>> = (0..dim)
        .map(|r| {
            let mut row = Vec::with_capacity(m + 2 * k);
            row.extend(ext.iter().map(|e| e[r]));
            row.extend(basis.iter().map(|b| -b[r]));
            row.extend(basis.iter().map(|b| b[r]));
            row
        })
        .collect();
    let mut c = vec![0.0; m + 2 * k];
    c[..m].iter_mut().for_each(|v| *v = 1.0);
    lp::minimize(&a, x, &c)
        .map(|s| s.value.max(0.0))
        .ok_or_else(|| GeomError::Inconsistency("distance program failed".into()))
}

pub fn line_min(space: &SpaceSpec, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    Geometry::new(space).line_min(x, y)
}

pub fn sublevel_interval(space: &SpaceSpec, x: &[f64], y: &[f64], slack: f64) -> Result<SublevelInterval> {
    Geometry::new(space).sublevel_interval(x, y, slack)
}

pub fn is_birkhoff(space: &SpaceSpec, x: &[f64], y: &[f64]) -> Result<Verdict> {
    Geometry::new(space).birkhoff(x, y)
}

pub fn is_strong_birkhoff(space: &SpaceSpec, x: &[f64], y: &[f64]) -> Result<Verdict> {
    Geometry::new(space).strong_birkhoff(x, y)
}

pub fn is_approx_birkhoff(space: &SpaceSpec, x: &[f64], y: &[f64], eps: f64) -> Result<Verdict> {
    Geometry::new(space).approx_birkhoff(x, y, eps)
}

pub fn is_parallel(space: &SpaceSpec, x: &[f64], y: &[f64]) -> Result<Verdict> {
    Geometry::new(space).parallel(x, y)
}

pub fn is_approx_parallel(space: &SpaceSpec, x: &[f64], y: &[f64], eps: f64) -> Result<Verdict> {
    Geometry::new(space).approx_parallel(x, y, eps)
}

pub fn subspace_min(space: &SpaceSpec, x: &[f64], basis: &[Vec<f64>]) -> Result<f64> {
    Geometry::new(space).subspace_min(x, basis)
}

pub fn is_hyperspace_approx_orth(space: &SpaceSpec, x: &[f64], basis: &[Vec<f64>], eps: f64) -> Result<Verdict> {
    Geometry::new(space).hyperspace_approx_orth(x, basis, eps)
}

pub fn orthogonality_certificate(space: &SpaceSpec, x: &[f64], y: &[f64], eps: f64) -> Result<Option<Covector>> {
    Geometry::new(space).orthogonality_certificate(x, y, eps)
}

pub fn parallel_eps_certificate(space: &SpaceSpec, x: &[f64], y: &[f64], eps: f64) -> Result<Option<Covector>> {
    Geometry::new(space).parallel_eps_certificate(x, y, eps)
}

pub fn is_semi_rotund_point(space: &SpaceSpec, x: &[f64], budget: usize) -> Result<Verdict> {
    Geometry::new(space).semi_rotund_point(x, budget)
}

pub fn is_exposed_point(space: &SpaceSpec, x: &[f64]) -> Result<Verdict> {
    Geometry::new(space).exposed_point(x)
}
