use pcycles_core::genfun::{
    coefficient, expected_diff_bound, find_m_star, find_witness, g_value, ratio, threshold, GValue,
};

/// Coefficients of `Σ_k u^k` with `u = (2x/(1-x)) · (δλy/(1-(1-δ)λy))`,
/// expanded as a truncated bivariate power series.
fn series_coefficients(lambda: f64, delta: f64, deg: usize) -> Vec<Vec<f64>> {
    let mut u = vec![vec![0.0; deg + 1]; deg + 1];
    for row in u.iter_mut().skip(1) {
        for (j, cell) in row.iter_mut().enumerate().skip(1) {
            *cell = 2.0 * delta * lambda * ((1.0 - delta) * lambda).powi(j as i32 - 1);
        }
    }
    let mul = |p: &Vec<Vec<f64>>, q: &Vec<Vec<f64>>| {
        let mut r = vec![vec![0.0; deg + 1]; deg + 1];
        for a in 0..=deg {
            for b in 0..=deg {
                if p[a][b] == 0.0 {
                    continue;
                }
                for c in 0..=deg - a {
                    for d in 0..=deg - b {
                        r[a + c][b + d] += p[a][b] * q[c][d];
                    }
                }
            }
        }
        r
    };
    let mut total = u.clone();
    let mut power = u.clone();
    for _ in 2..=deg {
        power = mul(&power, &u);
        for a in 0..=deg {
            for b in 0..=deg {
                total[a][b] += power[a][b];
            }
        }
    }
    total
}

#[test]
fn coefficients_match_the_series_expansion() {
    for &(lambda, delta) in &[(0.3, 0.5), (0.45, 1.0), (0.2, 0.1), (1.1, 0.75)] {
        let s = series_coefficients(lambda, delta, 12);
        for a in 1..=12u64 {
            for b in 1..=12u64 {
                let c = coefficient(lambda, delta, a, b).unwrap();
                let e = s[a as usize][b as usize];
                assert!((c - e).abs() <= 1e-12 * e.abs().max(1e-300) + 1e-15, "({lambda},{delta}) c[{a},{b}] {c} vs {e}");
            }
        }
    }
}

#[test]
fn threshold_is_the_smaller_root() {
    for i in 1..=99 {
        let delta = i as f64 / 99.0;
        let t = threshold(delta).unwrap();
        if (delta - 1.0 / 3.0).abs() < 1e-9 {
            continue;
        }
        let k = (3.0 * delta - 1.0).powi(2);
        let residual = k * t * t - (2.0 * delta + 2.0) * t + 1.0;
        assert!(residual.abs() < 1e-10, "delta {delta}: {residual}");
        let disc = ((delta + 1.0).powi(2) - k).sqrt();
        let other = (delta + 1.0 + disc) / k;
        assert!(t <= other);
    }
}

#[test]
fn witness_exists_exactly_below_threshold() {
    for i in 1..=20 {
        let delta = i as f64 / 20.0;
        let t = threshold(delta).unwrap();
        for j in 1..=40 {
            let lambda = 1.5 * t * j as f64 / 40.0;
            if (lambda - t).abs() < 1e-6 {
                continue;
            }
            let w = find_witness(lambda, delta);
            assert_eq!(w.is_some(), lambda < t, "lambda {lambda} delta {delta}");
            if let Some(w) = w {
                assert!(0.0 < w.x && w.x < 1.0 && 1.0 < w.y);
                if delta < 1.0 {
                    assert!(w.y < 1.0 / (lambda * (1.0 - delta)));
                }
                assert!(ratio(lambda, delta, w.x, w.y) < 1.0);
                let lhs = (1.0 + 2.0 * w.epsilon) * w.x.ln() + (1.0 - 2.0 * w.epsilon) * w.y.ln();
                assert!(lhs.abs() < 1e-9);
                assert!(expected_diff_bound(lambda, delta).is_some_and(f64::is_finite));
            } else {
                assert!(expected_diff_bound(lambda, delta).is_none());
            }
        }
    }
}

#[test]
fn partial_sums_converge_to_g() {
    let (lambda, delta, x, y) = (0.3, 0.5, 0.2, 1.5);
    let GValue::Finite(g) = g_value(lambda, delta, x, y).unwrap() else { panic!("diverges") };
    let mut sum = 0.0;
    for a in 1..=60u64 {
        for b in 1..=60u64 {
            sum += coefficient(lambda, delta, a, b).unwrap() * x.powi(a as i32) * y.powi(b as i32);
        }
    }
    assert!((sum - g).abs() < 1e-6, "{sum} vs {g}");
}

#[test]
fn m_star_is_the_first_supercritical_order() {
    for &(lambda, delta) in &[(0.6, 1.0), (1.2, 0.5), (0.5, 0.6), (0.36, 0.7)] {
        if let Some(m) = find_m_star(lambda, delta, 200).unwrap() {
            assert!(coefficient(lambda, delta, m, m).unwrap() > 1.0);
            for k in 1..m {
                assert!(coefficient(lambda, delta, k, k).unwrap() <= 1.0);
            }
        }
    }
    assert_eq!(find_m_star(0.4, 1.0, 500).unwrap(), None);
}

#[test]
fn coefficients_increase_with_lambda() {
    for a in 1..6u64 {
        for b in 1..6u64 {
            let mut prev = 0.0;
            for i in 1..20 {
                let c = coefficient(0.05 * i as f64, 0.6, a, b).unwrap();
                assert!(c > prev);
                prev = c;
            }
        }
    }
}
