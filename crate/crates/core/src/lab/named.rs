//! Fixed named instances and the checks that reproduce their known outcomes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{random_operator, rng_for, Outcome, SuiteReport};
use crate::geometry;
use crate::linalg::{norm2, scaled, Matrix};
use crate::operator::{self, LinearOperator, NormMethod};
use crate::space::SpaceSpec;
use crate::{GeomError, Result, DELTA_SB, SB_SLACK, TAU_EQ, TAU_SAMP};

/// Seed of the random parts of the reproductions.
pub const REPRODUCE_SEED: u64 = 2019;

/// Sub-check letters and names, in run order.
pub const SUBCHECKS: [(char, &str); 10] = [
    ('a', "square_parallel_pair"),
    ('b', "cube_semi_rotund_point"),
    ('c', "capped_cylinder_semi_rotund"),
    ('d', "l1_nilpotent_parallel_powers"),
    ('e', "l1_idempotents_disjoint_ranges"),
    ('f', "stadium_strong_orthogonality"),
    ('g', "square_two_component_attainment"),
    ('h', "cube_strong_orthogonality"),
    ('i', "euclidean_rank_one_parallel_identity"),
    ('j', "truncated_shift_plus_identity"),
];

fn op(rows: &[&[f64]], space: &SpaceSpec) -> LinearOperator {
    LinearOperator::from_rows(rows, space.clone(), space.clone()).expect("fixed shapes")
}

/// e₁ ↦ −e₂, e₂ ↦ −e₃, e₃ ↦ 0 on ℓ₁³.
pub fn l1_nilpotent() -> LinearOperator {
    op(&[&[0.0, 0.0, 0.0], &[-1.0, 0.0, 0.0], &[0.0, -1.0, 0.0]], &SpaceSpec::l1(3))
}

/// Two idempotents on ℓ₁³ that are parallel with ranges meeting only at 0.
pub fn l1_idempotent_pair() -> (LinearOperator, LinearOperator) {
    let x = SpaceSpec::l1(3);
    (
        op(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]], &x),
        op(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0]], &x),
    )
}

/// T(a, b) = (a, a) and a partner A on the stadium: strongly orthogonal as
/// operators, with no pointwise strong witness on the attainment face.
pub fn stadium_pair() -> (LinearOperator, LinearOperator) {
    let s = SpaceSpec::stadium2();
    (op(&[&[1.0, 0.0], &[1.0, 0.0]], &s), op(&[&[-0.5, 0.5], &[2.5, -0.5]], &s))
}

/// T(a, b) = (a, a) and A(a, b) = (−a, a) on ℓ∞².
pub fn square_pair() -> (LinearOperator, LinearOperator) {
    let s = SpaceSpec::linf(2);
    (op(&[&[1.0, 0.0], &[1.0, 0.0]], &s), op(&[&[-1.0, 0.0], &[1.0, 0.0]], &s))
}

/// T(x) = (x₁, x₁, x₁) and A(x) = (−x₂, x₂, x₂) on ℓ∞³.
pub fn cube_pair() -> (LinearOperator, LinearOperator) {
    let s = SpaceSpec::linf(3);
    (
        op(&[&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]], &s),
        op(&[&[0.0, -1.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0]], &s),
    )
}

/// The right shift on ℓ₂^{n+1}: eᵢ ↦ eᵢ₊₁, with the last basis vector sent to 0.
pub fn truncated_shift(n: usize) -> LinearOperator {
    let dim = n + 1;
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..n {
        m[(i + 1, i)] = 1.0;
    }
    let s = SpaceSpec::l2(dim);
    LinearOperator::new(m, s.clone(), s).expect("square")
}

type Check = Result<(bool, String)>;

fn square_parallel_pair() -> Check {
    let s = SpaceSpec::linf(2);
    let (x, y) = ([1.0, 1.0], [1.0, 0.0]);
    let par = geometry::is_parallel(&s, &x, &y)?;
    let approx = geometry::is_approx_parallel(&s, &x, &y, 0.0)?;
    let (_, d) = geometry::line_min(&s, &x, &y)?;
    let ok = par.holds && !approx.holds && (d - 1.0).abs() <= TAU_EQ;
    Ok((ok, format!("parallel={} approx0={} line_min={d}", par.holds, approx.holds)))
}

fn cube_semi_rotund_point() -> Check {
    let s = SpaceSpec::linf(3);
    let x = [1.0, 1.0, 0.0];
    let sr = geometry::is_semi_rotund_point(&s, &x, 10_000)?;
    let ex = geometry::is_exposed_point(&s, &x)?;
    Ok((sr.holds && !ex.holds, format!("semi_rotund={} witness={:?} exposed={}", sr.holds, sr.witness, ex.holds)))
}

fn capped_cylinder_semi_rotund() -> Check {
    let s = SpaceSpec::cylcap3();
    let mut rng = rng_for(REPRODUCE_SEED);
    let mut bad = Vec::new();
    for (k, p) in s.sphere_sample(64)?.into_iter().take(64).enumerate() {
        let scale = 0.25 + 4.0 * rand::Rng::gen::<f64>(&mut rng);
        let x = scaled(&p, scale);
        let v = geometry::is_semi_rotund_point(&s, &x, 2000)?;
        if !v.holds {
            bad.push((k, x));
        }
    }
    Ok((bad.is_empty(), format!("64 points, not semi-rotund: {bad:?}")))
}

fn l1_nilpotent_parallel_powers() -> Check {
    let a = l1_nilpotent();
    let a2 = a.pow(2)?;
    let a3 = a.pow(3)?;
    let (na, na2) = (a.operator_norm(), a2.operator_norm());
    let exact = na.method == NormMethod::Exact && na2.method == NormMethod::Exact;
    let norms = (na.value - 1.0).abs() <= TAU_EQ && (na2.value - 1.0).abs() <= TAU_EQ;
    let chain = a.matrix().max_abs() > 0.0 && a2.matrix().max_abs() > 0.0 && a3.matrix().max_abs() == 0.0;
    let par = geometry::is_parallel(&a.op_space(), a.flat(), a2.flat())?;
    let w = operator::witness_parallel_pointwise(&a, &a2)?;
    let witness_ok = w.as_ref().map_or(false, |(x, _)| (x[0].abs() - 1.0).abs() <= TAU_EQ && x[1] == 0.0 && x[2] == 0.0);
    Ok((
        exact && norms && chain && par.holds && witness_ok,
        format!("norms=({}, {}) exact={exact} A^3=0:{chain} parallel={} witness={w:?}", na.value, na2.value, par.holds),
    ))
}

fn l1_idempotents_disjoint_ranges() -> Check {
    let (a, b) = l1_idempotent_pair();
    let idem = a.matrix().mul(a.matrix())? == *a.matrix() && b.matrix().mul(b.matrix())? == *b.matrix();
    let par = geometry::is_parallel(&a.op_space(), a.flat(), b.flat())?;
    let inter = super::range_intersection_dim(a.matrix(), b.matrix());
    let w = operator::witness_parallel_pointwise(&a, &b)?;
    Ok((idem && par.holds && inter == 0, format!("idempotent={idem} parallel={} intersection={inter} witness={w:?}", par.holds)))
}

/// Slope range b/a of the attainment component containing `x`.
fn component_slopes(t: &LinearOperator, x: &[f64]) -> Result<(usize, f64, f64)> {
    let m = t.attainment_set(1e-4)?;
    let c = m.component_of(x).ok_or_else(|| GeomError::Inconsistency(format!("{x:?} is not in the attainment set")))?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (p, &l) in m.points.iter().zip(&m.labels) {
        if l == c {
            lo = lo.min(p[1] / p[0]);
            hi = hi.max(p[1] / p[0]);
        }
    }
    Ok((m.component_count, lo, hi))
}

fn stadium_strong_orthogonality() -> Check {
    let (t, a) = stadium_pair();
    let s = t.domain().clone();
    let n = t.operator_norm();
    let (_, lo, hi) = component_slopes(&t, &[1.0, 0.0])?;
    let spans = lo <= -1.0 + 0.01 && hi >= 1.0 - 0.01;
    let sb = geometry::is_strong_birkhoff(&t.op_space(), t.flat(), a.flat())?;
    let mut pointwise_strong = 0;
    for k in 0..200 {
        let x = [1.0, -1.0 + 2.0 * k as f64 / 199.0];
        let (tx, ax) = (t.apply(&x)?, a.apply(&x)?);
        let v = geometry::is_strong_birkhoff(&s, &tx, &ax)?;
        let iv = geometry::sublevel_interval(&s, &tx, &ax, SB_SLACK)?;
        if v.holds || iv.width() * s.norm(&ax) / s.norm(&tx) <= DELTA_SB {
            pointwise_strong += 1;
        }
    }
    let scan = operator::strong_orth_scan(&t, &a, &[0.1], &[1e-3, 1e-2, 5e-2])?;
    let ok = (n.value - 1.0).abs() <= TAU_SAMP && spans && sb.holds && pointwise_strong == 0 && scan.all_positive;
    Ok((
        ok,
        format!(
            "norm={} slopes=[{lo}, {hi}] strong={} pointwise_strong={pointwise_strong} scan_lambda={:?}",
            n.value,
            sb.holds,
            scan.rows.iter().map(|r| r.lambda_eps).collect::<Vec<_>>()
        ),
    ))
}

fn square_two_component_attainment() -> Check {
    let (t, a) = square_pair();
    let (count, lo, hi) = component_slopes(&t, &[1.0, 0.0])?;
    let sb = geometry::is_strong_birkhoff(&t.op_space(), t.flat(), a.flat())?;
    let scan = operator::strong_orth_scan(&t, &a, &[0.1], &[1e-3, 1e-2, 5e-2])?;
    let ok = count == 2 && (t.operator_norm().value - 1.0).abs() <= TAU_EQ && sb.holds && scan.all_positive;
    Ok((ok, format!("components={count} slopes=[{lo}, {hi}] strong={} scan={}", sb.holds, scan.all_positive)))
}

fn cube_strong_orthogonality() -> Check {
    let (t, a) = cube_pair();
    let x = [1.0, 1.0, 0.0];
    let s = t.domain().clone();
    let mut growth_ok = true;
    for l in [-0.5, -1e-3, 1e-3, 0.25, 2.0] {
        let v = s.norm(&t.axpy(l, &a)?.apply(&x)?);
        growth_ok &= (v - (1.0 + f64::abs(l))).abs() <= TAU_EQ;
    }
    let sb = geometry::is_strong_birkhoff(&t.op_space(), t.flat(), a.flat())?;
    Ok((growth_ok && sb.holds, format!("growth={growth_ok} strong={}", sb.holds)))
}

fn euclidean_rank_one_parallel_identity() -> Check {
    let x = SpaceSpec::l2(3);
    let x0 = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let f = x.norming_functional(&x0)?;
    let t = operator::rank_one(&x0, &f, Some(&x0), &x, &x)?;
    let id = LinearOperator::identity(&x);
    let sum = t.axpy(1.0, &id)?.operator_norm().value;
    let sv = Matrix::from_columns(&[t.flat().to_vec(), id.flat().to_vec()])?.singular_values();
    let independent = sv[1] > 1e-8 * sv[0];
    let par = geometry::is_parallel(&t.op_space(), t.flat(), id.flat())?;
    let mut rng = rng_for(REPRODUCE_SEED ^ 0x5eed);
    let domains = [SpaceSpec::l2(3), SpaceSpec::l1(3), SpaceSpec::linf(3)];
    let mut built = 0;
    let mut errors = Vec::new();
    for k in 0..20 {
        let d = &domains[k % domains.len()];
        let tk = random_operator(&mut rng, d, &x, 1.0)?;
        match operator::semi_rotund_witness(&tk) {
            Ok(ak) => {
                if geometry::is_strong_birkhoff(&tk.op_space(), tk.flat(), ak.flat())?.holds {
                    built += 1;
                }
            }
            Err(e) => errors.push(format!("{k}: {e}")),
        }
    }
    let ok = (sum - 2.0).abs() <= TAU_EQ && independent && par.holds && built == 20;
    Ok((ok, format!("‖T+I‖={sum} independent={independent} parallel={} witnesses={built}/20 errors={errors:?}", par.holds)))
}

fn truncated_shift_plus_identity() -> Check {
    let n = 100;
    let t = truncated_shift(n);
    let sum = t.axpy(1.0, &LinearOperator::identity(t.domain()))?;
    let value = sum.operator_norm().value;
    let bound = ((2.0 + 4.0 * (n as f64 - 1.0)) / n as f64).sqrt();
    let mut y = vec![0.0; n + 1];
    for v in y.iter_mut().take(n) {
        *v = 1.0 / (n as f64).sqrt();
    }
    let attained = norm2(&sum.apply(&y)?);
    let ok = value >= bound - 1e-6 && value <= 2.0 + TAU_EQ && (attained - bound).abs() <= 1e-12;
    Ok((ok, format!("‖T+I‖={value} lower bound={bound} test vector gives {attained}")))
}

/// Runs the named reproductions, or only the one with letter `only`.
pub fn reproduce_examples(only: Option<char>) -> Result<SuiteReport> {
    if let Some(c) = only {
        if !SUBCHECKS.iter().any(|(l, _)| *l == c) {
            return Err(GeomError::OutOfRange("sub-check letter must be in a..j"));
        }
    }
    let checks: [fn() -> Check; 10] = [
        square_parallel_pair,
        cube_semi_rotund_point,
        capped_cylinder_semi_rotund,
        l1_nilpotent_parallel_powers,
        l1_idempotents_disjoint_ranges,
        stadium_strong_orthogonality,
        square_two_component_attainment,
        cube_strong_orthogonality,
        euclidean_rank_one_parallel_identity,
        truncated_shift_plus_identity,
    ];
    let mut report = SuiteReport::new("reproduce", REPRODUCE_SEED);
    for (k, ((letter, name), check)) in SUBCHECKS.iter().zip(checks).enumerate() {
        if only.map_or(false, |c| c != *letter) {
            continue;
        }
        let result = check().map(|(ok, detail)| {
            (if ok { Outcome::Pass } else { Outcome::Fail }, format!("({letter}) {name}: {detail}"))
        });
        let result = result.map_err(|e| GeomError::Inconsistency(format!("({letter}) {name}: {e}")));
        report.bump(name);
        report.record_result(k, REPRODUCE_SEED, result);
    }
    Ok(report.finish())
}
