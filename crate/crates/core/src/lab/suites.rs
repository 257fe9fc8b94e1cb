//! Randomized property suites. Each trial evaluates both sides of an
//! implication or equivalence with independent code paths and reports a
//! failure only when they disagree outside the tolerance band.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::{
    idempotent_pair, nilpotent, random_operator, random_vector, rng_for, signed, trial_seed, uniform_matrix, Outcome,
    SuiteReport,
};
use crate::geometry::{self, Geometry, Verdict};
use crate::linalg::{axpy, dot, scaled, Matrix};
use crate::operator::{self, LinearOperator};
use crate::space::{Side, SpaceSpec};
use crate::{GeomError, Result};

fn verdict_line(name: &str, v: &Verdict) -> String {
    format!("{name}: holds={} margin={:e} tol={:e} marginal={}", v.holds, v.margin, v.tolerance, v.marginal)
}

/// Outcome when two verdicts must agree.
fn agreement(a: &Verdict, b: &Verdict) -> Outcome {
    if a.holds == b.holds {
        Outcome::Pass
    } else if a.marginal || b.marginal {
        Outcome::Marginal
    } else {
        Outcome::Fail
    }
}

/// Outcome when `premise ⇒ conclusion` must hold.
fn implication(premise: &Verdict, conclusion: &Verdict) -> Outcome {
    if !premise.holds || conclusion.holds {
        Outcome::Pass
    } else if premise.marginal || conclusion.marginal {
        Outcome::Marginal
    } else {
        Outcome::Fail
    }
}

/// T ∥ A in the operator space against the existence of x ∈ M_T ∩ M_A with
/// Tx ∥ Ax. Half of the trials are steered toward parallel pairs.
pub fn check_parallel_attainment(trials: usize, seed: u64, spaces: &[SpaceSpec]) -> Result<SuiteReport> {
    if spaces.is_empty() {
        return Err(GeomError::UndefinedInput("empty space list"));
    }
    let mut report = SuiteReport::new("parallel_attainment", seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let x = &spaces[i % spaces.len()];
        let mode = (i / spaces.len()) % 4;
        let result = (|| {
            let mut rng = rng_for(ts);
            let t = random_operator(&mut rng, x, x, 1.0)?;
            let a = match mode {
                0 | 1 => random_operator(&mut rng, x, x, 1.0)?,
                2 => {
                    let alpha = signed(&mut rng, 0.3, 2.0);
                    let delta = [0.0, 1e-3, 5e-2][rng.gen_range(0..3)];
                    let e = random_operator(&mut rng, x, x, 1.0)?;
                    t.scale(alpha).axpy(delta, &e)?
                }
                _ => {
                    // A x₀ = β T x₀ at a maximizer x₀ of T, and ‖A‖ is attained there
                    let x0 = t.operator_norm().maximizer;
                    let beta = signed(&mut rng, 0.3, 2.0);
                    let f = x.norming_functional(&x0)?;
                    operator::rank_one(&scaled(&t.apply(&x0)?, beta), &f, Some(&x0), x, x)?
                }
            };
            let op = t.op_space();
            let v_op = geometry::is_parallel(&op, t.flat(), a.flat())?;
            let (v_pw, _) = operator::witness_parallel_verdict(&t, &a)?;
            let outcome = agreement(&v_op, &v_pw);
            Ok((
                outcome,
                format!(
                    "space={:?} mode={mode} T={:?} A={:?} {} {}",
                    x.kind(),
                    t.flat(),
                    a.flat(),
                    verdict_line("operator", &v_op),
                    verdict_line("pointwise", &v_pw)
                ),
                v_op.holds,
            ))
        })();
        if let Ok((_, _, holds)) = &result {
            report.bump(if *holds { "parallel" } else { "not_parallel" });
        }
        report.record_result(i, ts, result.map(|(o, d, _)| (o, d)));
    }
    Ok(report.finish())
}

fn dependent(x: &[f64], y: &[f64]) -> bool {
    let s = Matrix::from_columns(&[x.to_vec(), y.to_vec()]).expect("equal lengths").singular_values();
    s[1] <= 1e-8 * s[0]
}

/// On strictly convex spaces parallelism coincides with linear dependence;
/// the square norm carries an independent parallel pair.
pub fn check_strict_convexity_parallelism(trials: usize, seed: u64) -> Result<SuiteReport> {
    let spaces = [SpaceSpec::l2(3), SpaceSpec::lp(3, 4.0)?];
    let mut report = SuiteReport::new("strict_convexity_parallelism", seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let space = &spaces[i % 2];
        let construct_dependent = (i / 2) % 2 == 1;
        let result = (|| {
            let mut rng = rng_for(ts);
            let x = random_vector(&mut rng, 3);
            let y = if construct_dependent { scaled(&x, signed(&mut rng, 0.1, 10.0)) } else { random_vector(&mut rng, 3) };
            let v = geometry::is_parallel(space, &x, &y)?;
            let dep = dependent(&x, &y);
            let outcome = if v.holds == dep {
                Outcome::Pass
            } else if v.marginal {
                Outcome::Marginal
            } else {
                Outcome::Fail
            };
            Ok((outcome, format!("space={:?} x={x:?} y={y:?} dependent={dep} {}", space.kind(), verdict_line("parallel", &v)), dep))
        })();
        if let Ok((_, _, dep)) = &result {
            report.bump(if *dep { "dependent" } else { "independent" });
        }
        report.record_result(i, ts, result.map(|(o, d, _)| (o, d)));
    }
    let sq = SpaceSpec::linf(2);
    let (x, y) = ([1.0, 1.0], [1.0, 0.0]);
    let named = geometry::is_parallel(&sq, &x, &y).map(|v| {
        let ok = v.holds && !dependent(&x, &y);
        (if ok { Outcome::Pass } else { Outcome::Fail }, format!("square pair: {}", verdict_line("parallel", &v)))
    });
    report.record_result(trials, seed, named);
    Ok(report.finish())
}

/// Distinct powers of a nilpotent operator on a strictly convex space are
/// never parallel; on ℓ₁³ the down-shift is parallel to its square.
pub fn check_nilpotent_nonparallel(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("nilpotent_nonparallel", seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let n = 3 + i % 2;
        let result = (|| {
            let a = nilpotent(&mut rng_for(ts), n)?;
            let op = a.op_space();
            let powers: Vec<LinearOperator> = (1..n as u32).map(|k| a.pow(k)).collect::<Result<_>>()?;
            let mut outcome = Outcome::Pass;
            let mut dump = format!("n={n} A={:?}", a.flat());
            for k in 0..powers.len() {
                for j in k + 1..powers.len() {
                    let v = geometry::is_parallel(&op, powers[k].flat(), powers[j].flat())?;
                    let o = if !v.holds {
                        Outcome::Pass
                    } else if v.marginal {
                        Outcome::Marginal
                    } else {
                        Outcome::Fail
                    };
                    if o != Outcome::Pass {
                        dump += &format!(" pair=({},{}) {}", k + 1, j + 1, verdict_line("parallel", &v));
                    }
                    outcome = outcome.max(o);
                }
            }
            Ok((outcome, dump))
        })();
        report.bump(if n == 3 { "n3" } else { "n4" });
        report.record_result(i, ts, result);
    }
    let a = super::l1_nilpotent();
    let named = a.pow(2).and_then(|a2| geometry::is_parallel(&a.op_space(), a.flat(), a2.flat())).map(|v| {
        (if v.holds { Outcome::Pass } else { Outcome::Fail }, format!("l1 down-shift: {}", verdict_line("parallel", &v)))
    });
    report.record_result(trials, seed, named);
    Ok(report.finish())
}

fn range_basis(m: &Matrix) -> Vec<Vec<f64>> {
    let svd = m.svd();
    let top = svd.sigma.first().copied().unwrap_or(0.0);
    (0..svd.sigma.len()).filter(|&k| top > 0.0 && svd.sigma[k] > 1e-8 * top).map(|k| svd.u.column(k)).collect()
}

/// dim(range A ∩ range B) = rank A + rank B − rank [A B], ranks taken at a
/// relative singular-value threshold of 1e−8.
pub fn range_intersection_dim(a: &Matrix, b: &Matrix) -> usize {
    let ba = range_basis(a);
    let bb = range_basis(b);
    if ba.is_empty() || bb.is_empty() {
        return 0;
    }
    let joint: Vec<Vec<f64>> = ba.iter().chain(&bb).cloned().collect();
    let r = Matrix::from_columns(&joint).expect("equal lengths").rank(1e-8);
    ba.len() + bb.len() - r
}

/// Parallel idempotents on a strictly convex space share a range vector; the
/// ℓ₁³ pair shows the hypothesis is needed.
pub fn check_idempotent_ranges(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("idempotent_ranges", seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let mode = i % 3;
        let result = (|| {
            let mut rng = rng_for(ts);
            let (a, b) = idempotent_pair(&mut rng, 3, mode == 2)?;
            let b = if mode == 1 { a.clone() } else { b };
            for m in [a.matrix(), b.matrix()] {
                if m.mul(m)?.sub(m)?.max_abs() > 1e-10 {
                    return Ok((Outcome::Fail, format!("generator produced a non-idempotent {:?}", m.as_slice()), false));
                }
            }
            let v = geometry::is_parallel(&a.op_space(), a.flat(), b.flat())?;
            let inter = range_intersection_dim(a.matrix(), b.matrix());
            let outcome = if !v.holds || inter >= 1 {
                Outcome::Pass
            } else if v.marginal {
                Outcome::Marginal
            } else {
                Outcome::Fail
            };
            Ok((outcome, format!("A={:?} B={:?} intersection={inter} {}", a.flat(), b.flat(), verdict_line("parallel", &v)), v.holds))
        })();
        if let Ok((_, _, holds)) = &result {
            report.bump(if *holds { "parallel" } else { "not_parallel" });
        }
        report.record_result(i, ts, result.map(|(o, d, _)| (o, d)));
    }
    let (a, b) = super::l1_idempotent_pair();
    let named = (|| {
        let exact = a.matrix().mul(a.matrix())? == *a.matrix() && b.matrix().mul(b.matrix())? == *b.matrix();
        let v = geometry::is_parallel(&a.op_space(), a.flat(), b.flat())?;
        let inter = range_intersection_dim(a.matrix(), b.matrix());
        let ok = exact && v.holds && inter == 0;
        Ok((
            if ok { Outcome::Pass } else { Outcome::Fail },
            format!("l1 idempotents: exact={exact} intersection={inter} {}", verdict_line("parallel", &v)),
        ))
    })();
    report.record_result(trials, seed, named);
    Ok(report.finish())
}

/// A with g(Az) = 0 for a norming functional g of T x₀, x₀ ∈ M_T; then
/// ‖T + λA‖ ≥ g(T x₀) = ‖T‖, and when T x₀ sits inside a flat face the
/// minimum is not strict.
fn face_preserving_pair(rng: &mut impl Rng, x: &SpaceSpec) -> Result<(LinearOperator, LinearOperator)> {
    let t = random_operator(rng, x, x, 1.0)?;
    let x0 = t.operator_norm().maximizer;
    let g = x.norming_functional(&t.apply(&x0)?)?.coords;
    let gg = dot(&g, &g);
    let r0 = uniform_matrix(rng, x.dim(), x.dim(), 1.0);
    let proj = Matrix::identity(x.dim()).sub(&Matrix::outer(&g, &g).scale(1.0 / gg))?;
    Ok((t, LinearOperator::new(proj.mul(&r0)?, x.clone(), x.clone())?))
}

/// T := T₀ + λ*A with λ* the line minimizer of ‖T₀ + λA‖, so that λ = 0
/// minimizes ‖T + λA‖.
fn shifted_pair(rng: &mut impl Rng, x: &SpaceSpec) -> Result<(LinearOperator, LinearOperator)> {
    let t0 = random_operator(rng, x, x, 1.0)?;
    let a = random_operator(rng, x, x, 1.0)?;
    let (l, _) = geometry::line_min(&t0.op_space(), t0.flat(), a.flat())?;
    Ok((t0.axpy(l, &a)?, a))
}

/// For Birkhoff–James orthogonal operators that are not strongly orthogonal,
/// some x ∈ M_T has Tx ⊥_B Ax. `trials` counts non-strong instances; strongly
/// orthogonal constructions are tallied and skipped.
pub fn check_orthogonality_split(trials: usize, seed: u64, spaces: &[SpaceSpec]) -> Result<SuiteReport> {
    if spaces.is_empty() {
        return Err(GeomError::UndefinedInput("empty space list"));
    }
    let mut report = SuiteReport::new("orthogonality_split", seed);
    let mut attempt = 0usize;
    let max_attempts = 50 * trials.max(1);
    while report.trials < trials && attempt < max_attempts {
        let ts = trial_seed(seed, attempt);
        let x = &spaces[attempt % spaces.len()];
        let shifted = (attempt / spaces.len()) % 2 == 1;
        attempt += 1;
        let mut rng = rng_for(ts);
        let pair = if shifted { shifted_pair(&mut rng, x) } else { face_preserving_pair(&mut rng, x) };
        let (t, a) = match pair {
            Ok(p) => p,
            Err(e) => {
                report.record(attempt - 1, ts, Outcome::Fail, || format!("construction error: {e}"));
                continue;
            }
        };
        let result = (|| -> Result<Option<(Verdict, Option<Option<Vec<f64>>>)>> {
            let op = t.op_space();
            let geo = Geometry::new(&op);
            let b = geo.birkhoff(t.flat(), a.flat())?;
            if !b.holds {
                return Ok(None);
            }
            let sb = geo.strong_birkhoff(t.flat(), a.flat())?;
            if sb.holds || sb.marginal {
                return Ok(Some((sb, None)));
            }
            Ok(Some((sb, Some(operator::witness_birkhoff_pointwise(&t, &a)?))))
        })();
        match result {
            Ok(None) => report.bump("not_birkhoff_skipped"),
            Ok(Some((sb, None))) => report.bump(if sb.holds { "strong_skipped" } else { "classification_marginal_skipped" }),
            Ok(Some((sb, Some(w)))) => {
                report.bump(if shifted { "shifted_non_strong" } else { "face_non_strong" });
                let outcome = if w.is_some() { Outcome::Pass } else { Outcome::Fail };
                report.record(attempt - 1, ts, outcome, || {
                    format!("space={:?} T={:?} A={:?} {}", x.kind(), t.flat(), a.flat(), verdict_line("strong", &sb))
                });
            }
            Err(e) => report.record(attempt - 1, ts, Outcome::Fail, || format!("error: {e}")),
        }
    }
    if report.trials < trials {
        let got = report.trials;
        report.record(attempt, seed, Outcome::Fail, || {
            format!("only {got} non-strong instances in {attempt} attempts")
        });
    }
    let (t, a) = super::square_pair();
    let named = geometry::is_strong_birkhoff(&t.op_space(), t.flat(), a.flat()).map(|v| {
        (if v.holds { Outcome::Pass } else { Outcome::Fail }, format!("square pair classified: {}", verdict_line("strong", &v)))
    });
    report.record_result(attempt + 1, seed, named);
    Ok(report.finish())
}

fn transfer_pairs() -> Vec<(SpaceSpec, SpaceSpec)> {
    let l4 = SpaceSpec::lp(3, 4.0).expect("valid exponent");
    vec![
        (SpaceSpec::l2(3), SpaceSpec::l2(3)),
        (SpaceSpec::l1(3), SpaceSpec::linf(3)),
        (SpaceSpec::linf(3), SpaceSpec::l1(3)),
        (SpaceSpec::l1(3), l4.clone()),
        (SpaceSpec::linf(3), SpaceSpec::l2(3)),
        (l4.clone(), l4),
        (SpaceSpec::stadium2(), SpaceSpec::stadium2()),
    ]
}

/// T compressed off a vertex x of the domain ball, which makes x attain the
/// norm exactly: T = T₀ ∘ (P + c(I − P)) with P = x fᵀ and f exposing x, so
/// every other vertex e has |f(e)| < 1. Domains without vertices, or factors
/// c that do not yet suffice, fall back to the computed maximizer of T₀.
fn attained_at(rng: &mut impl Rng, x: &SpaceSpec, y: &SpaceSpec) -> Result<(LinearOperator, Vec<f64>, bool)> {
    let t0 = random_operator(rng, x, y, 1.0)?;
    if let Some(ext) = x.extreme_points() {
        let v = ext[rng.gen_range(0..ext.len())].clone();
        // the average of the dual vertices active at v exposes v
        let f: Vec<f64> = match x.kind() {
            crate::space::NormKind::Lp(p) if p.is_infinite() => scaled(&v, 1.0 / x.dim() as f64),
            _ => x.norming_functional(&v)?.coords,
        };
        let p = Matrix::outer(&v, &f);
        let off = Matrix::identity(x.dim()).sub(&p)?;
        let mut c = 0.5;
        for _ in 0..20 {
            let t = LinearOperator::new(t0.matrix().mul(&p.axpy(c, &off)?)?, x.clone(), y.clone())?;
            let r = t.operator_norm();
            if r.value <= y.norm(&t.apply(&v)?) * (1.0 + 1e-15) {
                return Ok((t, v, false));
            }
            c *= 0.5;
        }
    }
    let r = t0.operator_norm();
    Ok((t0, r.maximizer, true))
}

/// For x ∈ M_T: x ∥^ε y ⇒ Tx ∥^ε Ty, and Tx ⊥_D^ε Ty ⇒ x ⊥_D^ε y.
pub fn check_monotone_transfer(trials: usize, seed: u64) -> Result<SuiteReport> {
    let pairs = transfer_pairs();
    let eps_grid = [0.0, 0.1, 0.5];
    let mut report = SuiteReport::new("monotone_transfer", seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let (xs, ys) = &pairs[i % pairs.len()];
        let kind = (i / pairs.len()) % 3;
        let result = (|| {
            let mut rng = rng_for(ts);
            let (t, x, fallback) = attained_at(&mut rng, xs, ys)?;
            let tx = t.apply(&x)?;
            let y = match kind {
                0 => random_vector(&mut rng, xs.dim()),
                1 => {
                    let noise = [0.0, 1e-3, 5e-2][rng.gen_range(0..3)];
                    axpy(&scaled(&x, signed(&mut rng, 0.2, 3.0)), noise, &random_vector(&mut rng, xs.dim()))
                }
                _ => {
                    // g(Ty) = 0 for a norming functional g of Tx
                    let g = ys.norming_functional(&tx)?;
                    let z = random_vector(&mut rng, xs.dim());
                    axpy(&z, -g.apply(&t.apply(&z)?) / g.apply(&tx), &x)
                }
            };
            let ty = t.apply(&y)?;
            if xs.norm(&y) == 0.0 || ys.norm(&ty) == 0.0 {
                return Ok((Outcome::Pass, String::new(), fallback, 0usize));
            }
            let mut outcome = Outcome::Pass;
            let mut dump = format!("domain={:?} codomain={:?} T={:?} x={x:?} y={y:?}", xs.kind(), ys.kind(), t.flat());
            let mut premises = 0;
            for &eps in &eps_grid {
                let p1 = geometry::is_approx_parallel(xs, &x, &y, eps)?;
                let c1 = geometry::is_approx_parallel(ys, &tx, &ty, eps)?;
                let p2 = geometry::is_approx_birkhoff(ys, &tx, &ty, eps)?;
                let c2 = geometry::is_approx_birkhoff(xs, &x, &y, eps)?;
                premises += p1.holds as usize + p2.holds as usize;
                for (name, p, c) in [("parallel", &p1, &c1), ("orthogonal", &p2, &c2)] {
                    let o = implication(p, c);
                    if o != Outcome::Pass {
                        dump += &format!(" eps={eps} {name}: {} {}", verdict_line("premise", p), verdict_line("conclusion", c));
                    }
                    outcome = outcome.max(o);
                }
            }
            Ok((outcome, dump, fallback, premises))
        })();
        if let Ok((_, _, fallback, premises)) = &result {
            if *fallback {
                report.bump("maximizer_fallback");
            }
            *report.counters.entry("premises_held".into()).or_insert(0) += premises;
        }
        report.record_result(i, ts, result.map(|(o, d, _, _)| (o, d)));
    }
    // y = x at ε = 0: x ∥⁰ x and Tx ∥⁰ Tx
    let (xs, ys) = (SpaceSpec::l1(3), SpaceSpec::linf(3));
    let named = (|| {
        let (t, x, _) = attained_at(&mut rng_for(seed), &xs, &ys)?;
        let tx = t.apply(&x)?;
        let a = geometry::is_approx_parallel(&xs, &x, &x, 0.0)?;
        let b = geometry::is_approx_parallel(&ys, &tx, &tx, 0.0)?;
        let ok = a.holds && b.holds;
        Ok((if ok { Outcome::Pass } else { Outcome::Fail }, format!("self pair: {} {}", verdict_line("x", &a), verdict_line("Tx", &b))))
    })();
    report.record_result(trials, seed, named);
    Ok(report.finish())
}

/// ⊥_B decided by the line minimum against the one-sided derivative test
/// ρ′₋(x, y) ≤ 0 ≤ ρ′₊(x, y) on random triples of one space.
pub fn check_birkhoff_oracles(trials: usize, seed: u64, space: &SpaceSpec) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("birkhoff_oracles", seed);
    let dim = space.dim();
    let tau = space.tolerance();
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let kind = i % 3;
        let result = (|| {
            let mut rng = rng_for(ts);
            let x = scaled(&random_vector(&mut rng, dim), rng.gen_range(0.2..5.0));
            let y = match kind {
                0 => random_vector(&mut rng, dim),
                _ => {
                    let f = space.norming_functional(&x)?;
                    let z = random_vector(&mut rng, dim);
                    let k = axpy(&z, -f.apply(&z) / f.apply(&x), &x);
                    if kind == 1 {
                        k
                    } else {
                        axpy(&k, signed(&mut rng, 1e-3, 1e-1), &x)
                    }
                }
            };
            let nx = space.norm(&x);
            let ny = space.norm(&y);
            if ny == 0.0 {
                return Ok((Outcome::Pass, String::new(), false));
            }
            let (_, v) = geometry::line_min(space, &x, &y)?;
            let m_min = v - nx;
            let tol = tau * nx;
            let dp = space.dir_deriv(&x, &y, Side::Plus)?;
            let dm = space.dir_deriv(&x, &y, Side::Minus)?;
            let m_der = dp.value.min(-dm.value);
            let dtol = tau * ny;
            let (h_min, h_der) = (m_min >= -tol, m_der >= -dtol);
            let outcome = if h_min == h_der {
                Outcome::Pass
            } else if m_min.abs() <= 3.0 * tol || m_der.abs() <= 3.0 * dtol {
                Outcome::Marginal
            } else {
                Outcome::Fail
            };
            Ok((
                outcome,
                format!(
                    "space={:?} x={x:?} y={y:?} min-margin={m_min:e} deriv=[{:e}, {:e}] certified=({}, {})",
                    space.kind(),
                    dm.value,
                    dp.value,
                    dm.certified,
                    dp.certified
                ),
                dp.certified && dm.certified,
            ))
        })();
        if let Ok((_, _, certified)) = &result {
            if !certified {
                report.bump("uncertified_derivative");
            }
        }
        report.record_result(i, ts, result.map(|(o, d, _)| (o, d)));
    }
    Ok(report.finish())
}
