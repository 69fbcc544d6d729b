//! Registry of analytic box-constrained test problems.
//!
//! Two built-in suites are provided: `default` (24 problems, dimensions 2 to
//! 12, a mix of convex, ill-conditioned, and multimodal objectives) and
//! `smoke` (4 small problems for fast end-to-end checks). Suite iteration
//! order is fixed: problems appear in the order they are registered below,
//! and every consumer that fans out over a suite reduces in that order.

use crate::error::Error;

/// A box-constrained minimization problem with a fixed start point.
#[derive(Debug, Clone)]
pub struct Problem {
    name: &'static str,
    lower: Vec<f64>,
    upper: Vec<f64>,
    start: Vec<f64>,
    /// Known lower bound on the objective over the box, for documentation
    /// and sanity checks only; never used as a convergence target.
    reference_minimum: Option<f64>,
    objective: fn(&[f64]) -> f64,
}

impl Problem {
    pub fn name(&self) -> &str {
        self.name
    }

    pub fn dimension(&self) -> usize {
        self.start.len()
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn reference_minimum(&self) -> Option<f64> {
        self.reference_minimum
    }

    /// Evaluates the objective, rejecting points of the wrong dimension.
    /// The objective itself is a pure function: identical inputs produce
    /// identical bit patterns.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, Error> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                problem: self.name.to_string(),
                expected: self.dimension(),
                got: x.len(),
            });
        }
        Ok((self.objective)(x))
    }

    /// Unchecked evaluation for hot loops that already guarantee the shape.
    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension());
        (self.objective)(x)
    }
}

/// An ordered collection of problems.
#[derive(Debug, Clone)]
pub struct ProblemSuite {
    name: String,
    problems: Vec<Problem>,
}

impl ProblemSuite {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn problems(&self) -> &[Problem] {
        &self.problems
    }

    pub fn len(&self) -> usize {
        self.problems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Looks up a built-in suite by name (`default` or `smoke`).
pub fn builtin_suite(name: &str) -> Result<ProblemSuite, Error> {
    match name {
        "default" => Ok(ProblemSuite {
            name: name.to_string(),
            problems: default_problems(),
        }),
        "smoke" => Ok(ProblemSuite {
            name: name.to_string(),
            problems: smoke_problems(),
        }),
        _ => Err(Error::UnknownSuite {
            name: name.to_string(),
            available: vec!["default".to_string(), "smoke".to_string()],
        }),
    }
}

fn problem(
    name: &'static str,
    bounds: &[(f64, f64)],
    start: &[f64],
    reference_minimum: Option<f64>,
    objective: fn(&[f64]) -> f64,
) -> Problem {
    assert_eq!(bounds.len(), start.len());
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        assert!(lo < hi, "{name}: empty box on coordinate {i}");
        assert!(
            start[i] >= lo && start[i] <= hi,
            "{name}: start outside the box on coordinate {i}"
        );
    }
    Problem {
        name,
        lower: bounds.iter().map(|b| b.0).collect(),
        upper: bounds.iter().map(|b| b.1).collect(),
        start: start.to_vec(),
        reference_minimum,
        objective,
    }
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    vec![(lo, hi); n]
}

fn default_problems() -> Vec<Problem> {
    vec![
        problem(
            "sphere-2",
            &uniform(-5.12, 5.12, 2),
            &[1.0, 1.0],
            Some(0.0),
            sphere,
        ),
        problem(
            "shifted-sphere-6",
            &uniform(-5.0, 5.0, 6),
            &[0.0; 6],
            Some(0.0),
            shifted_sphere,
        ),
        problem(
            "illcond-quadratic-10",
            &uniform(-10.0, 10.0, 10),
            &[2.0; 10],
            Some(0.0),
            illcond_quadratic,
        ),
        problem(
            "rosenbrock-2",
            &uniform(-2.048, 2.048, 2),
            &[-1.2, 1.0],
            Some(0.0),
            rosenbrock,
        ),
        problem(
            "rosenbrock-4",
            &uniform(-2.048, 2.048, 4),
            &[-1.2, 1.0, -1.2, 1.0],
            Some(0.0),
            rosenbrock,
        ),
        problem(
            "rosenbrock-8",
            &uniform(-2.048, 2.048, 8),
            &[-1.2, 1.0, -1.2, 1.0, -1.2, 1.0, -1.2, 1.0],
            Some(0.0),
            rosenbrock,
        ),
        problem(
            "six-hump-camel-2",
            &[(-3.0, 3.0), (-2.0, 2.0)],
            &[-1.5, 0.5],
            Some(-1.032),
            six_hump_camel,
        ),
        problem(
            "hartmann-6",
            &uniform(0.0, 1.0, 6),
            &[0.5; 6],
            Some(-3.323),
            hartmann6,
        ),
        problem(
            "beale-2",
            &uniform(-4.5, 4.5, 2),
            &[1.0, 1.0],
            Some(0.0),
            beale,
        ),
        problem(
            "booth-2",
            &uniform(-10.0, 10.0, 2),
            &[0.0, 0.0],
            Some(0.0),
            booth,
        ),
        problem(
            "matyas-2",
            &uniform(-10.0, 10.0, 2),
            &[6.0, -4.0],
            Some(0.0),
            matyas,
        ),
        problem(
            "branin-2",
            &[(-5.0, 10.0), (0.0, 15.0)],
            &[2.5, 12.5],
            Some(0.397),
            branin,
        ),
        problem(
            "goldstein-price-2",
            &uniform(-2.0, 2.0, 2),
            &[1.0, 1.0],
            Some(2.999),
            goldstein_price,
        ),
        problem(
            "styblinski-tang-5",
            &uniform(-5.0, 5.0, 5),
            &[0.0; 5],
            Some(-195.831),
            styblinski_tang,
        ),
        problem(
            "zakharov-6",
            &uniform(-5.0, 10.0, 6),
            &[1.0; 6],
            Some(0.0),
            zakharov,
        ),
        problem(
            "sum-powers-8",
            &uniform(-1.0, 1.0, 8),
            &[0.5, -0.5, 0.5, -0.5, 0.5, -0.5, 0.5, -0.5],
            Some(0.0),
            sum_powers,
        ),
        problem(
            "hyperellipsoid-12",
            &uniform(-5.0, 5.0, 12),
            &[1.0; 12],
            Some(0.0),
            hyperellipsoid,
        ),
        problem(
            "levy-4",
            &uniform(-10.0, 10.0, 4),
            &[-4.0, 3.0, -4.0, 3.0],
            Some(0.0),
            levy,
        ),
        problem(
            "ackley-3",
            &uniform(-32.768, 32.768, 3),
            &[3.0, -2.0, 4.0],
            Some(0.0),
            ackley,
        ),
        problem(
            "griewank-2",
            &uniform(-600.0, 600.0, 2),
            &[-60.0, 90.0],
            Some(0.0),
            griewank,
        ),
        problem(
            "powell-4",
            &uniform(-4.0, 5.0, 4),
            &[3.0, -1.0, 0.0, 1.0],
            Some(0.0),
            powell,
        ),
        problem(
            "dixon-price-4",
            &uniform(-10.0, 10.0, 4),
            &[2.0; 4],
            Some(0.0),
            dixon_price,
        ),
        problem(
            "trid-6",
            &uniform(-36.0, 36.0, 6),
            &[0.0; 6],
            Some(-50.0),
            trid,
        ),
        problem(
            "mccormick-2",
            &[(-1.5, 4.0), (-3.0, 4.0)],
            &[0.0, 0.0],
            Some(-1.92),
            mccormick,
        ),
    ]
}

fn smoke_problems() -> Vec<Problem> {
    let all = default_problems();
    ["sphere-2", "rosenbrock-2", "booth-2", "ackley-3"]
        .iter()
        .map(|name| {
            all.iter()
                .find(|p| p.name == *name)
                .expect("smoke problem missing from registry")
                .clone()
        })
        .collect()
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn shifted_sphere(x: &[f64]) -> f64 {
    const SHIFT: [f64; 6] = [0.5, -1.5, 2.0, -0.5, 1.0, -2.5];
    x.iter()
        .zip(SHIFT.iter())
        .map(|(v, c)| (v - c) * (v - c))
        .sum()
}

// Diagonal quadratic with condition number 1e4.
fn illcond_quadratic(x: &[f64]) -> f64 {
    let n = x.len();
    x.iter()
        .enumerate()
        .map(|(i, v)| 1e4f64.powf(i as f64 / (n - 1) as f64) * v * v)
        .sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let d = w[1] - w[0] * w[0];
            100.0 * d * d + (1.0 - w[0]) * (1.0 - w[0])
        })
        .sum()
}

fn six_hump_camel(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
}

fn hartmann6(x: &[f64]) -> f64 {
    const ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
    const A: [[f64; 6]; 4] = [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ];
    const P: [[f64; 6]; 4] = [
        [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
        [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
        [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
        [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
    ];
    -(0..4)
        .map(|i| {
            let e: f64 = (0..6)
                .map(|j| {
                    let d = x[j] - P[i][j];
                    A[i][j] * d * d
                })
                .sum();
            ALPHA[i] * (-e).exp()
        })
        .sum::<f64>()
}

fn beale(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let t1 = 1.5 - a + a * b;
    let t2 = 2.25 - a + a * b * b;
    let t3 = 2.625 - a + a * b * b * b;
    t1 * t1 + t2 * t2 + t3 * t3
}

fn booth(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let t1 = a + 2.0 * b - 7.0;
    let t2 = 2.0 * a + b - 5.0;
    t1 * t1 + t2 * t2
}

fn matyas(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    0.26 * (a * a + b * b) - 0.48 * a * b
}

fn branin(x: &[f64]) -> f64 {
    use std::f64::consts::PI;
    let (a, b) = (x[0], x[1]);
    let t = b - 5.1 / (4.0 * PI * PI) * a * a + 5.0 / PI * a - 6.0;
    t * t + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos() + 10.0
}

fn goldstein_price(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let u = a + b + 1.0;
    let v = 2.0 * a - 3.0 * b;
    let p = 1.0 + u * u * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    let q =
        30.0 + v * v * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    p * q
}

fn styblinski_tang(x: &[f64]) -> f64 {
    0.5 * x
        .iter()
        .map(|&v| v.powi(4) - 16.0 * v * v + 5.0 * v)
        .sum::<f64>()
}

fn zakharov(x: &[f64]) -> f64 {
    let s1: f64 = x.iter().map(|v| v * v).sum();
    let s2: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
        .sum();
    s1 + s2 * s2 + s2.powi(4)
}

fn sum_powers(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| v.abs().powi(i as i32 + 2))
        .sum()
}

fn hyperellipsoid(x: &[f64]) -> f64 {
    let mut prefix = 0.0;
    let mut total = 0.0;
    for &v in x {
        prefix += v;
        total += prefix * prefix;
    }
    total
}

fn levy(x: &[f64]) -> f64 {
    use std::f64::consts::PI;
    let w: Vec<f64> = x.iter().map(|&v| 1.0 + (v - 1.0) / 4.0).collect();
    let n = w.len();
    let mut total = (PI * w[0]).sin().powi(2);
    for wi in &w[..n - 1] {
        let d = wi - 1.0;
        total += d * d * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2));
    }
    let d = w[n - 1] - 1.0;
    total + d * d * (1.0 + (2.0 * PI * w[n - 1]).sin().powi(2))
}

fn ackley(x: &[f64]) -> f64 {
    use std::f64::consts::{E, PI};
    let n = x.len() as f64;
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    let mean_cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * rms).exp() - mean_cos.exp() + 20.0 + E
}

fn griewank(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let p: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    s - p + 1.0
}

fn powell(x: &[f64]) -> f64 {
    let t1 = x[0] + 10.0 * x[1];
    let t2 = x[2] - x[3];
    let t3 = x[1] - 2.0 * x[2];
    let t4 = x[0] - x[3];
    t1 * t1 + 5.0 * t2 * t2 + t3.powi(4) + 10.0 * t4.powi(4)
}

fn dixon_price(x: &[f64]) -> f64 {
    let mut total = (x[0] - 1.0) * (x[0] - 1.0);
    for i in 1..x.len() {
        let d = 2.0 * x[i] * x[i] - x[i - 1];
        total += (i + 1) as f64 * d * d;
    }
    total
}

fn trid(x: &[f64]) -> f64 {
    let s1: f64 = x.iter().map(|&v| (v - 1.0) * (v - 1.0)).sum();
    let s2: f64 = x.windows(2).map(|w| w[0] * w[1]).sum();
    s1 - s2
}

fn mccormick(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (a + b).sin() + (a - b) * (a - b) - 1.5 * a + 2.5 * b + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_shape() {
        let suite = builtin_suite("default").unwrap();
        assert!(suite.len() >= 20);
        let mut names = std::collections::BTreeSet::new();
        for p in suite.problems() {
            assert!((2..=12).contains(&p.dimension()), "{}", p.name());
            assert!(names.insert(p.name().to_string()), "duplicate {}", p.name());
            let (lo, hi) = p.bounds();
            for i in 0..p.dimension() {
                assert!(lo[i] < hi[i]);
                assert!(p.start()[i] >= lo[i] && p.start()[i] <= hi[i]);
            }
        }
    }

    #[test]
    fn smoke_suite_shape() {
        let suite = builtin_suite("smoke").unwrap();
        assert_eq!(suite.len(), 4);
        for p in suite.problems() {
            assert!(p.dimension() <= 3, "{}", p.name());
        }
    }

    #[test]
    fn unknown_suite_lists_available() {
        let err = builtin_suite("nightly").unwrap_err().to_string();
        assert!(err.contains("nightly"));
        assert!(err.contains("default"));
        assert!(err.contains("smoke"));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let suite = builtin_suite("smoke").unwrap();
        let p = &suite.problems()[0];
        assert!(p.evaluate(&[1.0, 2.0, 3.0]).is_err());
        assert!(p.evaluate(&[1.0, 2.0]).is_ok());
    }

    #[test]
    fn camel_start_value_matches_hand_evaluation() {
        // (4 - 2.1 a^2 + a^4/3) a^2 + a b + (-4 + 4 b^2) b^2 at (-1.5, 0.5):
        // (4 - 4.725 + 1.6875) * 2.25 - 0.75 + (-3) * 0.25 = 0.665625.
        let suite = builtin_suite("default").unwrap();
        let camel = suite
            .problems()
            .iter()
            .find(|p| p.name() == "six-hump-camel-2")
            .unwrap();
        let v = camel.evaluate(camel.start()).unwrap();
        assert!((v - 0.665625).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn booth_minimum_is_at_one_three() {
        let suite = builtin_suite("smoke").unwrap();
        let booth = suite
            .problems()
            .iter()
            .find(|p| p.name() == "booth-2")
            .unwrap();
        assert_eq!(booth.evaluate(&[1.0, 3.0]).unwrap(), 0.0);
        assert_eq!(booth.evaluate(&[0.0, 0.0]).unwrap(), 74.0);
    }

    #[test]
    fn evaluation_is_bitwise_deterministic() {
        let suite = builtin_suite("default").unwrap();
        for p in suite.problems() {
            let a = p.evaluate(p.start()).unwrap();
            let b = p.evaluate(p.start()).unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "{}", p.name());
        }
    }

    #[test]
    fn reference_minima_bound_sampled_values() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7e57bed);
        let suite = builtin_suite("default").unwrap();
        for p in suite.problems() {
            let Some(reference) = p.reference_minimum() else {
                continue;
            };
            let (lo, hi) = p.bounds();
            let mut x = vec![0.0; p.dimension()];
            for _ in 0..10_000 {
                for i in 0..x.len() {
                    x[i] = rng.random_range(lo[i]..=hi[i]);
                }
                let v = p.evaluate(&x).unwrap();
                assert!(
                    v >= reference,
                    "{}: sampled {v} below reference {reference}",
                    p.name()
                );
            }
        }
    }
}
