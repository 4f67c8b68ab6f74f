//! Curve-fitting toolkit: the L1 sweep cost, weighted linear-basis least
//! squares, bounded Nelder-Mead descent and minimal-parameter selection.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sim::Shots;

/// Named real-valued fit parameters.
pub type Params = BTreeMap<String, f64>;

/// One measured sweep point: convergence-parameter value, observable
/// estimate, standard error and shot budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: u32,
    pub value: f64,
    pub stderr: f64,
    pub shots: Shots,
}

/// A swept observable: rows ordered by strictly increasing parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    kind: String,
    rows: Vec<SweepRow>,
}

impl SweepSeries {
    pub fn new(kind: impl Into<String>, rows: Vec<SweepRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("sweep series"));
        }
        for w in rows.windows(2) {
            if w[1].param <= w[0].param {
                return Err(Error::InvalidArgument(
                    "sweep parameters must be strictly increasing".into(),
                ));
            }
        }
        for r in &rows {
            if r.stderr < 0.0 {
                return Err(Error::InvalidArgument("negative stderr".into()));
            }
            if r.shots.is_exact() && r.stderr != 0.0 {
                return Err(Error::InvalidArgument(
                    "exact rows must carry zero stderr".into(),
                ));
            }
        }
        Ok(SweepSeries {
            kind: kind.into(),
            rows,
        })
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn params(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.param).collect()
    }
}

/// A fit outcome: the recovered parameter map, its L1 cost on the input
/// series, the grid it was fitted on and a model tag.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: String,
    pub params: Params,
    pub cost: f64,
    pub grid: Vec<u32>,
}

/// L1 cost of a candidate parameter set: the summed absolute differences
/// between the measured observable and the equation-to-fit over the sweep.
pub fn cost<F>(series: &SweepSeries, fit_eq: F, values: &Params) -> Result<f64>
where
    F: Fn(u32, &Params) -> Result<f64>,
{
    let mut acc = 0.0;
    for row in series.rows() {
        acc += (row.value - fit_eq(row.param, values)?).abs();
    }
    Ok(acc)
}

/// Weighted least squares over a fixed function basis, via normal equations
/// with partial pivoting. Rows are weighted by `1/stderr^2` when every row
/// carries a positive stderr, and uniformly otherwise. The reported cost is
/// the L1 cost of the solution.
pub fn fit_linear_basis(
    series: &SweepSeries,
    basis: &[(&str, &dyn Fn(f64) -> f64)],
) -> Result<FitResult> {
    let nb = basis.len();
    let rows = series.rows();
    if rows.len() < nb {
        return Err(Error::Underdetermined {
            needed: nb,
            got: rows.len(),
        });
    }
    let weighted = rows.iter().all(|r| r.stderr > 0.0);
    let weights: Vec<f64> = rows
        .iter()
        .map(|r| if weighted { 1.0 / (r.stderr * r.stderr) } else { 1.0 })
        .collect();

    // normal equations: (A^T W A) x = A^T W y
    let design: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| basis.iter().map(|(_, f)| f(r.param as f64)).collect())
        .collect();
    let mut ata = vec![vec![0.0f64; nb]; nb];
    let mut aty = vec![0.0f64; nb];
    for (r, row) in design.iter().enumerate() {
        for i in 0..nb {
            aty[i] += weights[r] * row[i] * rows[r].value;
            for j in 0..nb {
                ata[i][j] += weights[r] * row[i] * row[j];
            }
        }
    }

    let x = solve_with_pivoting(ata, aty)?;
    let params: Params = basis
        .iter()
        .zip(&x)
        .map(|((name, _), v)| (name.to_string(), *v))
        .collect();
    let fit_eq = |p: u32, values: &Params| -> Result<f64> {
        let mut acc = 0.0;
        for (name, f) in basis {
            acc += values
                .get(*name)
                .ok_or_else(|| Error::MissingParam(name.to_string()))?
                * f(p as f64);
        }
        Ok(acc)
    };
    let cost = cost(series, fit_eq, &params)?;
    Ok(FitResult {
        model: series.kind().to_string(),
        params,
        cost,
        grid: series.params(),
    })
}

/// Gaussian elimination with partial pivoting; a vanishing pivot names the
/// dependent column.
fn solve_with_pivoting(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0, f64::max)
        .max(1e-300);
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pivot < 1e-12 * scale {
            return Err(Error::RankDeficient { column: col });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in (col + 1)..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for c in (col + 1)..n {
            acc -= a[col][c] * x[c];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}

/// Simplex convergence thresholds (the optimizer stops at whichever comes
/// first).
const SIMPLEX_DIAMETER_TOL: f64 = 1e-10;
const MAX_EVALS: usize = 20_000;

/// Box bounds per parameter name.
pub type Bounds = BTreeMap<String, (f64, f64)>;

/// Derivative-free descent of the L1 cost with box bounds.
///
/// Bounds are enforced through a smooth sine reparameterization rather than
/// clipping, so the inner simplex search is unconstrained. `restarts`
/// seeded perturbations of the initial point are explored on top of the
/// plain start; the best result wins (ties keep the earliest restart).
pub fn fit_nonlinear<F>(
    series: &SweepSeries,
    fit_eq: F,
    init: &Params,
    bounds: &Bounds,
    seed: u64,
    restarts: usize,
) -> Result<FitResult>
where
    F: Fn(u32, &Params) -> Result<f64>,
{
    let names: Vec<String> = init.keys().cloned().collect();
    if names.is_empty() {
        return Err(Error::EmptyInput("fit parameters"));
    }
    let mut lo = Vec::with_capacity(names.len());
    let mut hi = Vec::with_capacity(names.len());
    for name in &names {
        let (l, h) = *bounds
            .get(name)
            .ok_or_else(|| Error::MissingParam(name.clone()))?;
        if l > h {
            return Err(Error::InvalidBounds { lo: l, hi: h });
        }
        lo.push(l);
        hi.push(h);
    }
    let x0: Vec<f64> = names.iter().map(|n| init[n]).collect();
    for (i, x) in x0.iter().enumerate() {
        if *x < lo[i] - 1e-12 || *x > hi[i] + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "initial value for `{}` is outside its bounds",
                names[i]
            )));
        }
    }

    let to_native = |u: &[f64]| -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(i, ui)| {
                if hi[i] == lo[i] {
                    lo[i]
                } else {
                    lo[i] + (hi[i] - lo[i]) * (ui.sin() + 1.0) / 2.0
                }
            })
            .collect()
    };
    let to_internal = |x: &[f64]| -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, xi)| {
                if hi[i] == lo[i] {
                    0.0
                } else {
                    let frac = ((xi - lo[i]) / (hi[i] - lo[i])).clamp(0.0, 1.0);
                    (2.0 * frac - 1.0).asin()
                }
            })
            .collect()
    };

    let objective = |u: &[f64]| -> Result<f64> {
        let x = to_native(u);
        let values: Params = names.iter().cloned().zip(x).collect();
        cost(series, &fit_eq, &values)
    };

    let u_init = to_internal(&x0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for restart in 0..=restarts {
        let start: Vec<f64> = if restart == 0 {
            u_init.clone()
        } else {
            u_init
                .iter()
                .map(|u| u + rng.gen_range(-1.0..1.0))
                .collect()
        };
        let (u_min, f_min) = nelder_mead(&objective, &start)?;
        if best.as_ref().map_or(true, |(_, f)| f_min < *f) {
            best = Some((u_min, f_min));
        }
    }
    let (u_min, f_min) = best.unwrap();
    // restarts can only improve on the plain start, never lose to it
    let params: Params = names.iter().cloned().zip(to_native(&u_min)).collect();
    Ok(FitResult {
        model: series.kind().to_string(),
        params,
        cost: f_min,
        grid: series.params(),
    })
}

/// Standard Nelder-Mead on an unconstrained objective.
fn nelder_mead<F>(objective: &F, start: &[f64]) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink
    const INIT_STEP: f64 = 0.25;

    let n = start.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| -> Result<f64> {
        evals.set(evals.get() + 1);
        objective(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(start)?;
    simplex.push((start.to_vec(), f0));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += INIT_STEP;
        let f = eval(&x)?;
        simplex.push((x, f));
    }

    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < SIMPLEX_DIAMETER_TOL || evals.get() >= MAX_EVALS {
            return Ok(simplex.swap_remove(0));
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let fr = eval(&reflected)?;

        if fr < simplex[0].1 {
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + GAMMA * (r - c))
                .collect();
            let fe = eval(&expanded)?;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (toward, f_ref) = if fr < worst.1 {
                (&reflected, fr)
            } else {
                (&worst.0, worst.1)
            };
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(toward)
                .map(|(c, t)| c + RHO * (t - c))
                .collect();
            let fc = eval(&contracted)?;
            if fc < f_ref {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = best
                        .iter()
                        .zip(&entry.0)
                        .map(|(b, x)| b + SIGMA * (x - b))
                        .collect();
                    let fs = eval(&shrunk)?;
                    *entry = (shrunk, fs);
                }
            }
        }
    }
}

/// Smallest integer `p` in `[1, max_param]` with `err(p) <= epsilon`, by
/// linear scan (the error law need not be monotone).
pub fn select_min_parameter<F>(err: F, epsilon: f64, max_param: u32) -> Result<Option<u32>>
where
    F: Fn(u32) -> f64,
{
    if epsilon <= 0.0 {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    for p in 1..=max_param {
        if err(p) <= epsilon {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Default scan ceiling for [`select_min_parameter`].
pub const MAX_PARAM_DEFAULT: u32 = 1_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    fn series_from_fn(kind: &str, grid: &[u32], f: impl Fn(f64) -> f64) -> SweepSeries {
        let rows = grid
            .iter()
            .map(|&p| SweepRow {
                param: p,
                value: f(p as f64),
                stderr: 0.0,
                shots: Shots::Exact,
            })
            .collect();
        SweepSeries::new(kind, rows).unwrap()
    }

    #[test]
    fn cost_basics() {
        let s = series_from_fn("test", &[1, 2, 3], |n| 1.0 / n);
        let eq = |p: u32, v: &Params| Ok(v["a"] / p as f64);
        let mut values = Params::new();
        values.insert("a".into(), 1.0);
        assert_eq!(cost(&s, eq, &values).unwrap(), 0.0);
        values.insert("a".into(), 1.1);
        let expected = 0.1 * (1.0 + 0.5 + 1.0 / 3.0);
        assert!((cost(&s, eq, &values).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn series_validation() {
        assert!(SweepSeries::new("t", vec![]).is_err());
        let bad_order = vec![
            SweepRow { param: 2, value: 0.0, stderr: 0.0, shots: Shots::Exact },
            SweepRow { param: 2, value: 0.0, stderr: 0.0, shots: Shots::Exact },
        ];
        assert!(SweepSeries::new("t", bad_order).is_err());
        let bad_stderr = vec![SweepRow {
            param: 1,
            value: 0.0,
            stderr: 0.1,
            shots: Shots::Exact,
        }];
        assert!(SweepSeries::new("t", bad_stderr).is_err());
    }

    #[test]
    fn linear_fit_recovers_exact_coefficients() {
        let s = series_from_fn("test", &[2, 3, 4, 6, 8], |n| {
            0.3 + 0.01 / n + 0.002 / (n * n)
        });
        let one = |_: f64| 1.0;
        let inv = |n: f64| 1.0 / n;
        let inv2 = |n: f64| 1.0 / (n * n);
        let basis: Vec<(&str, &dyn Fn(f64) -> f64)> =
            vec![("c", &one), ("e1", &inv), ("e2", &inv2)];
        let fit = fit_linear_basis(&s, &basis).unwrap();
        assert!((fit.params["c"] - 0.3).abs() < 1e-9);
        assert!((fit.params["e1"] - 0.01).abs() < 1e-9);
        assert!((fit.params["e2"] - 0.002).abs() < 1e-9);
        assert!(fit.cost <= 1e-9 * s.rows().len() as f64);
    }

    #[test]
    fn linear_fit_flags_underdetermined_and_rank_deficient() {
        let s = series_from_fn("test", &[5], |n| 1.0 / n);
        let one = |_: f64| 1.0;
        let inv = |n: f64| 1.0 / n;
        let inv_again = |n: f64| 1.0 / n;
        let basis: Vec<(&str, &dyn Fn(f64) -> f64)> =
            vec![("a", &one), ("b", &inv), ("c", &inv_again)];
        assert!(matches!(
            fit_linear_basis(&s, &basis),
            Err(Error::Underdetermined { needed: 3, got: 1 })
        ));

        let s = series_from_fn("test", &[2, 3, 4, 5], |n| 1.0 / n);
        match fit_linear_basis(&s, &basis) {
            Err(Error::RankDeficient { column }) => assert_eq!(column, 2),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn nonlinear_fit_contract_and_bounds() {
        let s = series_from_fn("test", &[1, 2, 3, 4, 5, 6], |n| 0.4 + 0.2 / n);
        let eq = |p: u32, v: &Params| -> Result<f64> {
            Ok(v["c"] + v["a"] / p as f64)
        };
        let mut init = Params::new();
        init.insert("c".into(), 0.0);
        init.insert("a".into(), 0.0);
        let mut bounds = Bounds::new();
        bounds.insert("c".into(), (-1.0, 1.0));
        bounds.insert("a".into(), (-1.0, 1.0));
        let init_cost = cost(&s, eq, &init).unwrap();
        let fit = fit_nonlinear(&s, eq, &init, &bounds, 42, 4).unwrap();
        assert!(fit.cost <= init_cost);
        assert!((fit.params["c"] - 0.4).abs() < 1e-4);
        assert!((fit.params["a"] - 0.2).abs() < 1e-4);
        for v in fit.params.values() {
            assert!(*v >= -1.0 && *v <= 1.0);
        }

        // zero restarts is a single deterministic run
        let a = fit_nonlinear(&s, eq, &init, &bounds, 1, 0).unwrap();
        let b = fit_nonlinear(&s, eq, &init, &bounds, 2, 0).unwrap();
        assert_eq!(a.params, b.params);
    }

    #[test]
    fn nonlinear_fit_rejects_bad_input() {
        let s = series_from_fn("test", &[1, 2], |n| n);
        let eq = |_: u32, v: &Params| Ok(v["a"]);
        let mut init = Params::new();
        init.insert("a".into(), 0.0);
        let mut bounds = Bounds::new();
        bounds.insert("a".into(), (1.0, -1.0));
        assert!(matches!(
            fit_nonlinear(&s, eq, &init, &bounds, 0, 0),
            Err(Error::InvalidBounds { .. })
        ));
        bounds.insert("a".into(), (0.5, 1.0));
        assert!(fit_nonlinear(&s, eq, &init, &bounds, 0, 0).is_err());
    }

    #[test]
    fn min_parameter_selection() {
        let sel = |eps| select_min_parameter(|n| 0.01 / n as f64, eps, 1000).unwrap();
        assert_eq!(sel(0.002), Some(5));
        assert_eq!(sel(1.0), Some(1));

        let err = |n: u32| 0.01 / n as f64 + 0.0001 / (n as f64 * n as f64);
        assert_eq!(select_min_parameter(err, 1e-3, 1000).unwrap(), Some(11));

        assert_eq!(
            select_min_parameter(|_| 1.0, 0.5, 100).unwrap(),
            None
        );
        assert!(select_min_parameter(|_| 1.0, 0.0, 100).is_err());

        // returned p satisfies err(p) <= eps and every q < p fails
        let p = select_min_parameter(err, 1e-3, 1000).unwrap().unwrap();
        assert!(err(p) <= 1e-3);
        for q in 1..p {
            assert!(err(q) > 1e-3);
        }
    }
}
