//! End-to-end acceptance checks. Each criterion prints one line; the
//! suite fails if any criterion fails. Run with `--nocapture` to see the
//! lines on success.

use std::time::Instant;

use premia::{
    approximating_family, build_step_design, continuity_bound, distortion_premium,
    distortion_premium_analytic, premium, robust_premium_r1, robust_premium_rp, run_simulation,
    solve_qp, wasserstein, wasserstein_dp, apply_transform, BasisKind, Distortion, Distribution,
    EmpiricalDistribution, ParametricModel, PayoffTransform, RobustStatus, SimulationConfig,
    SplitMix64, DEFAULT_SEED,
};

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn sample(values: &[f64]) -> EmpiricalDistribution {
    EmpiricalDistribution::new(values.to_vec()).unwrap()
}

/// Nonnegative sample of size n with values of order one to ten.
fn random_sample(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u = rng.next_f64();
            10.0 * u * u
        })
        .collect()
}

fn criterion_1() -> Result<(), String> {
    let s = sample(&[1.0, 2.0, 3.0, 4.0]);
    let tail = distortion_premium(&s, &Distortion::avar(0.5).unwrap());
    ensure!((tail.value - 3.5).abs() < 1e-12, "tail expectation {}", tail.value);
    let id = distortion_premium(&s, &Distortion::identity());
    ensure!((id.value - 2.5).abs() < 1e-12, "identity premium {}", id.value);
    Ok(())
}

fn criterion_2() -> Result<(), String> {
    // premium under a power density equals the direct integral of
    // 1 - (empirical cdf)^s, summed segment by segment from zero
    let mut rng = SplitMix64::new(21);
    for &s in &[2.0, 3.0] {
        let h = Distortion::power(s).unwrap();
        for trial in 0..50 {
            let n = 1 + (rng.next_u64() % 200) as usize;
            let xs = {
                let mut v = random_sample(&mut rng, n);
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v
            };
            let premium = distortion_premium(&sample(&xs), &h).value;
            let mut oracle = 0.0;
            let mut prev = 0.0;
            for (i, &x) in xs.iter().enumerate() {
                let cdf = i as f64 / n as f64;
                oracle += (1.0 - cdf.powf(s)) * (x - prev);
                prev = x;
            }
            ensure!(
                (premium - oracle).abs() < 1e-10,
                "s={s} trial {trial}: premium {premium} vs oracle {oracle}"
            );
        }
    }
    let exp = ParametricModel::exponential(1.0).unwrap();
    let q = distortion_premium_analytic(&exp, &Distortion::power(2.0).unwrap())
        .map_err(|e| e.to_string())?;
    ensure!((q.value - 1.5).abs() < 1e-4, "exponential square premium {}", q.value);
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    let mut rng = SplitMix64::new(33);
    let mut xs = random_sample(&mut rng, 50);
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    for h in [Distortion::power(2.0).unwrap(), Distortion::avar(0.9).unwrap()] {
        let weights: Vec<f64> = (0..n)
            .map(|i| h.cdf((i + 1) as f64 / n as f64) - h.cdf(i as f64 / n as f64))
            .collect();
        let inner = |order: &[f64]| -> f64 {
            order.iter().zip(&weights).map(|(x, w)| x * w).sum()
        };
        let sorted_value = inner(&xs);
        let premium = distortion_premium(&sample(&xs), &h).value;
        ensure!(
            (sorted_value - premium).abs() < 1e-12,
            "sorted arrangement {sorted_value} vs premium {premium}"
        );
        let mut perm = xs.clone();
        for trial in 0..1000 {
            for i in (1..n).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            let rearranged = inner(&perm);
            ensure!(
                rearranged <= premium + 1e-12,
                "trial {trial}: rearranged {rearranged} exceeds premium {premium}"
            );
        }
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = SplitMix64::new(44);
    let cases = [
        (Distortion::avar(0.9).unwrap(), 1.0),
        (Distortion::power(3.0).unwrap(), 1.0),
        (Distortion::power(0.8).unwrap(), 2.0),
    ];
    for pair in 0..1000 {
        let f: Distribution = sample(&random_sample(&mut rng, 100)).into();
        let g: Distribution = sample(&random_sample(&mut rng, 100)).into();
        for (h, p) in &cases {
            let gap = (premium(&f, h).unwrap().value - premium(&g, h).unwrap().value).abs();
            let bound = continuity_bound(h, &f, &g, *p).map_err(|e| e.to_string())?;
            ensure!(
                gap <= bound + 1e-9,
                "pair {pair} ({h:?}, p={p}): gap {gap} exceeds bound {bound}"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(elapsed < 10.0, "continuity sweep took {elapsed:.1}s");
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    let layer = PayoffTransform::xl(1.0, 5.0).unwrap();
    let mut rng = SplitMix64::new(55);
    for pair in 0..500 {
        let f = sample(&random_sample(&mut rng, 80));
        let g = sample(&random_sample(&mut rng, 80));
        let tf: Distribution = apply_transform(&layer, &f).into();
        let tg: Distribution = apply_transform(&layer, &g).into();
        let f: Distribution = f.into();
        let g: Distribution = g.into();
        for r in [1.0, 2.0] {
            let original = wasserstein(&f, &g, r).unwrap();
            let image = wasserstein(&tf, &tg, r).unwrap();
            ensure!(
                image <= original + 1e-12,
                "pair {pair} r={r}: image distance {image} exceeds {original}"
            );
        }
    }
    Ok(())
}

fn criterion_6() -> Result<(), String> {
    let mut rng = SplitMix64::new(66);
    let base = sample(&random_sample(&mut rng, 400));
    let dist: Distribution = base.clone().into();
    let alpha = 0.9;
    let epsilon = 0.3;
    let h = Distortion::avar(alpha).unwrap();
    let pi = distortion_premium(&base, &h).value;
    let res = robust_premium_r1(&dist, &h, epsilon).map_err(|e| e.to_string())?;
    ensure!(res.status == RobustStatus::Attained, "status {:?}", res.status);
    let worst = res.worst_case.as_ref().ok_or("missing worst case")?;
    let target = pi + epsilon / (1.0 - alpha);
    let repriced = worst.premium(&h).map_err(|e| e.to_string())?;
    ensure!((repriced - target).abs() < 1e-8, "closed-form reprice {repriced} vs {target}");
    // materialize at the base's own size so midpoint quantiles hit the
    // order statistics exactly, then price the realized sample
    let realized = worst.materialize(400).map_err(|e| e.to_string())?;
    let realized_premium = distortion_premium(&realized, &h).value;
    ensure!(
        (realized_premium - target).abs() < 1e-8,
        "realized worst case prices to {realized_premium}, want {target}"
    );
    let moved = wasserstein(&dist, &realized.into(), 1.0).unwrap();
    ensure!((moved - epsilon).abs() < 1e-8, "transport cost {moved}, want {epsilon}");

    // unbounded density: the top-slab family increases without bound
    let wang = Distortion::wang(0.5).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for n in 2..=32 {
        let fam = approximating_family(&dist, epsilon, n).map_err(|e| e.to_string())?;
        let value = fam.premium(&wang).map_err(|e| e.to_string())?;
        ensure!(value > prev, "family value {value} at n={n} not above {prev}");
        prev = value;
    }
    Ok(())
}

fn criterion_7() -> Result<(), String> {
    let h = Distortion::power(2.0).unwrap();
    let epsilon = 0.25;
    let qnorm = 2.0 / 3.0f64.sqrt();
    let uniform: Distribution = ParametricModel::uniform(0.0, 1.0).unwrap().into();
    let pi = premium(&uniform, &h).unwrap().value;
    let res = robust_premium_rp(&uniform, &h, epsilon, 2.0).map_err(|e| e.to_string())?;
    ensure!(res.status == RobustStatus::Attained, "status {:?}", res.status);
    let target = pi + epsilon * qnorm;
    ensure!((res.value - target).abs() < 1e-9, "value {} vs {target}", res.value);
    let worst = res.worst_case.as_ref().ok_or("missing worst case")?;
    let repriced = worst.premium(&h).map_err(|e| e.to_string())?;
    ensure!((repriced - target).abs() < 1e-6, "reprice {repriced} vs {target}");
    let realized = worst.materialize(20_000).map_err(|e| e.to_string())?;
    let realized_premium = distortion_premium(&realized, &h).value;
    ensure!(
        (realized_premium - target).abs() < 1e-6,
        "realized worst case prices to {realized_premium}, want {target}"
    );

    // no feasible quantile perturbation beats the robust value
    let n = 2000;
    let base: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
    let emp = sample(&base);
    let emp_dist: Distribution = emp.clone().into();
    let emp_res = robust_premium_rp(&emp_dist, &h, epsilon, 2.0).map_err(|e| e.to_string())?;
    let mut rng = SplitMix64::new(77);
    for trial in 0..200 {
        let raw: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let scale = epsilon / (raw.iter().map(|d| d * d).sum::<f64>() / n as f64).sqrt();
        let shifted: Vec<f64> = base
            .iter()
            .zip(&raw)
            .map(|(x, d)| x + scale * d)
            .collect();
        let value = distortion_premium(&sample(&shifted), &h).value;
        ensure!(
            value <= emp_res.value + 1e-8,
            "trial {trial}: perturbed premium {value} exceeds robust value {}",
            emp_res.value
        );
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    let start = Instant::now();
    let config = SimulationConfig::default();
    let tail = run_simulation(
        &config,
        &Distortion::avar(0.9).unwrap(),
        &[(BasisKind::Step, 10)],
    )
    .map_err(|e| e.to_string())?;
    let objective = tail.fits[0].fit.objective;
    ensure!(objective <= 1e-10, "tail-expectation step fit objective {objective}");

    let cubic = run_simulation(
        &config,
        &Distortion::power(3.0).unwrap(),
        &[(BasisKind::Spline, 5)],
    )
    .map_err(|e| e.to_string())?;
    let objective = cubic.fits[0].fit.objective;
    let scale: f64 = cubic.observed_prices.iter().map(|p| p * p).sum();
    ensure!(
        objective <= 1e-6 * scale,
        "cubic spline fit objective {objective} vs allowance {}",
        1e-6 * scale
    );
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(elapsed < 60.0, "simulation study took {elapsed:.1}s");
    Ok(())
}

/// Exact minimum of the fitting objective over the lattice of feasible
/// coefficient vectors with pitch `delta`: nondecreasing, nonnegative,
/// mean one. The innermost coordinate is determined by the sum
/// constraint, so the scan is quadratic in the objective and solved in
/// closed form per line.
fn grid_search(price_rows: &[Vec<f64>], observed: &[f64], l: usize, delta: f64) -> f64 {
    let steps = (l as f64 / delta).round() as i64;
    let lambda = |m: i64| m as f64 * delta;
    let objective = |lam: &[f64]| -> f64 {
        price_rows
            .iter()
            .zip(observed)
            .map(|(row, &pi)| {
                let fitted: f64 = row.iter().zip(lam).map(|(p, l)| p * l).sum();
                (fitted - pi) * (fitted - pi)
            })
            .sum()
    };
    // minimize the one-dimensional quadratic t -> sum_j (d_j + e_j t)^2
    // over an integer interval: clamp the vertex, test its neighbors
    let line_min = |d: &[f64], e: &[f64], lo: i64, hi: i64| -> f64 {
        let num: f64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
        let den: f64 = e.iter().map(|b| b * b).sum();
        let vertex = if den > 0.0 { -num / den } else { lo as f64 };
        let mut best = f64::INFINITY;
        for t in [vertex.floor() as i64, vertex.ceil() as i64, lo, hi] {
            let t = t.clamp(lo, hi);
            let val: f64 = d
                .iter()
                .zip(e)
                .map(|(a, b)| {
                    let r = a + b * t as f64;
                    r * r
                })
                .sum();
            best = best.min(val);
        }
        best
    };
    let m = observed.len();
    match l {
        1 => objective(&[1.0]),
        2 => {
            // lambda_2 = 2 - lambda_1 with lambda_1 <= 1
            let d: Vec<f64> = (0..m)
                .map(|j| 2.0 * price_rows[j][1] - observed[j])
                .collect();
            let e: Vec<f64> = (0..m)
                .map(|j| delta * (price_rows[j][0] - price_rows[j][1]))
                .collect();
            line_min(&d, &e, 0, steps / 2)
        }
        3 => {
            let mut best = f64::INFINITY;
            for m1 in 0..=steps / 3 {
                // lambda_3 = 3 - lambda_1 - lambda_2, scan lambda_2
                let d: Vec<f64> = (0..m)
                    .map(|j| {
                        price_rows[j][0] * lambda(m1)
                            + price_rows[j][2] * (3.0 - lambda(m1))
                            - observed[j]
                    })
                    .collect();
                let e: Vec<f64> = (0..m)
                    .map(|j| delta * (price_rows[j][1] - price_rows[j][2]))
                    .collect();
                best = best.min(line_min(&d, &e, m1, (steps - m1) / 2));
            }
            best
        }
        4 => {
            let mut best = f64::INFINITY;
            for m1 in 0..=steps / 4 {
                for m2 in m1..=(steps - m1) / 3 {
                    let d: Vec<f64> = (0..m)
                        .map(|j| {
                            price_rows[j][0] * lambda(m1)
                                + price_rows[j][1] * lambda(m2)
                                + price_rows[j][3] * (4.0 - lambda(m1) - lambda(m2))
                                - observed[j]
                        })
                        .collect();
                    let e: Vec<f64> = (0..m)
                        .map(|j| delta * (price_rows[j][2] - price_rows[j][3]))
                        .collect();
                    best = best.min(line_min(&d, &e, m2, (steps - m1 - m2) / 2));
                }
            }
            best
        }
        _ => unreachable!("grid oracle sized for l <= 4"),
    }
}

fn criterion_9() -> Result<(), String> {
    let mut rng = SplitMix64::new(99);
    for instance in 0..100 {
        let l = 1 + (rng.next_u64() % 4) as usize;
        let m = 1 + (rng.next_u64() % 3) as usize;
        let n = l * (2 + (rng.next_u64() % 4) as usize);
        let samples: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.next_f64()).collect())
            .collect();
        let design = build_step_design(&samples, l).map_err(|e| e.to_string())?;
        // half the instances ask for exactly reachable prices, half for
        // noisy targets with a genuinely positive optimum
        let observed: Vec<f64> = if instance % 2 == 0 {
            let lam: Vec<f64> = {
                let mut raw: Vec<f64> = (0..l).map(|_| rng.next_f64()).collect();
                raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mean = raw.iter().sum::<f64>() / l as f64;
                raw.iter().map(|x| x / mean).collect()
            };
            design
                .price_rows()
                .iter()
                .map(|row| row.iter().zip(&lam).map(|(p, l)| p * l).sum())
                .collect()
        } else {
            (0..m).map(|_| rng.next_f64() * 2.0).collect()
        };
        let fit = solve_qp(&design, &observed).map_err(|e| e.to_string())?;
        let delta = 1e-3;
        let grid = grid_search(design.price_rows(), &observed, l, delta);
        ensure!(
            fit.objective <= grid + 1e-9,
            "instance {instance} (l={l}): solver {} worse than grid {grid}",
            fit.objective
        );
        ensure!(
            (fit.objective - grid).abs() <= 1e-4,
            "instance {instance} (l={l}): solver {} vs grid {grid}",
            fit.objective
        );
    }
    Ok(())
}

fn criterion_10() -> Result<(), String> {
    let mut rng = SplitMix64::new(110);
    for pair in 0..500 {
        let f: Distribution = sample(&random_sample(&mut rng, 60)).into();
        let g: Distribution = sample(&random_sample(&mut rng, 60)).into();
        for p in [2.0, 3.0] {
            let wp = wasserstein(&f, &g, p).unwrap();
            let wd = wasserstein_dp(&f, &g, p).unwrap();
            ensure!(
                wp.powf(p) <= wd + 1e-12,
                "pair {pair} p={p}: W^p {} above powered distance {wd}",
                wp.powf(p)
            );
            let envelope = 1.0
                + f.moment_norm(p).unwrap().powf(p - 1.0)
                + g.moment_norm(p).unwrap().powf(p - 1.0);
            ensure!(
                wd <= p * wp * envelope + 1e-9,
                "pair {pair} p={p}: powered distance {wd} above envelope {}",
                p * wp * envelope
            );
        }
    }
    Ok(())
}

fn criterion_11() -> Result<(), String> {
    let model = ParametricModel::gamma(2.0, 1.0).unwrap();
    let h = Distortion::avar(0.9).unwrap();
    let exact = distortion_premium_analytic(&model, &h)
        .map_err(|e| e.to_string())?
        .value;
    ensure!(
        (exact - 5.09423085049133).abs() < 1e-9,
        "model premium {exact} drifted from its reference value"
    );
    let mut rng = SplitMix64::new(DEFAULT_SEED);
    let losses = model.sample(&mut rng, 100_000).map_err(|e| e.to_string())?;
    let estimate = distortion_premium(&sample(&losses), &h).value;
    ensure!(
        (estimate - exact).abs() < 0.05,
        "empirical premium {estimate} vs exact {exact}"
    );
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Result<(), String>)> = vec![
        ("1 order-statistics pricing exactness", criterion_1),
        ("2 power premium against direct cdf integral", criterion_2),
        ("3 rearranged inner products never beat the premium", criterion_3),
        ("4 premium gaps within transport continuity bounds", criterion_4),
        ("5 excess-of-loss layer contracts transport distance", criterion_5),
        ("6 order-1 worst case priced, measured, and approached", criterion_6),
        ("7 order-2 worst case priced and undominated", criterion_7),
        ("8 simulation study recovers representable densities", criterion_8),
        ("9 constrained fit matches exhaustive grid search", criterion_9),
        ("10 powered-cost distance sandwich", criterion_10),
        ("11 empirical premium converges to the model premium", criterion_11),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(()) => println!("acceptance {name}: PASS"),
            Err(reason) => {
                failures += 1;
                println!("acceptance {name}: FAIL ({reason})");
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
