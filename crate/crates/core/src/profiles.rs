//! Performance and data profiles over solver measurement tables.
//!
//! A [`MeasureTable`] holds, for every (problem, solver) pair, the number of
//! evaluations the solver needed to reach the problem's convergence cut-off,
//! or a failure marker. Profiles are right-continuous staircases stored by
//! their jump points:
//!
//! - the performance profile of a solver at ratio `tau` is the fraction of
//!   problems on which its evaluation count is within a factor `tau` of the
//!   best solver's count (failures have infinite ratio and never count);
//! - the data profile at budget `nu` is the fraction of problems solved
//!   within `nu * (dimension + 1)` evaluations.
//!
//! Staircase areas are computed exactly from the jump points, with no
//! quadrature.

use crate::error::Error;

/// Problem identity as needed by profiles: name plus dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemTag {
    pub name: String,
    pub dimension: usize,
}

/// Evaluation counts (or failure) for every (problem, solver) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureTable {
    problems: Vec<ProblemTag>,
    solvers: Vec<String>,
    // Row-major: measures[p * solvers.len() + s].
    measures: Vec<Option<u64>>,
}

impl MeasureTable {
    /// Creates a table with every entry marked as failure; fill it with
    /// [`MeasureTable::set`]. Problem names and solver labels must be unique
    /// and non-empty.
    pub fn new(problems: Vec<ProblemTag>, solvers: Vec<String>) -> Self {
        assert!(!problems.is_empty(), "table needs at least one problem");
        assert!(!solvers.is_empty(), "table needs at least one solver");
        let mut names = std::collections::BTreeSet::new();
        for p in &problems {
            assert!(names.insert(&p.name), "duplicate problem {}", p.name);
        }
        let mut labels = std::collections::BTreeSet::new();
        for s in &solvers {
            assert!(!s.is_empty(), "empty solver label");
            assert!(labels.insert(s), "duplicate solver {s}");
        }
        let measures = vec![None; problems.len() * solvers.len()];
        MeasureTable {
            problems,
            solvers,
            measures,
        }
    }

    /// Builds a table from per-solver measurement columns aligned with
    /// `problems`.
    pub fn from_columns(
        problems: Vec<ProblemTag>,
        columns: Vec<(String, Vec<Option<u64>>)>,
    ) -> Self {
        let labels = columns.iter().map(|(l, _)| l.clone()).collect();
        let mut table = MeasureTable::new(problems, labels);
        for (s, (_, column)) in columns.iter().enumerate() {
            assert_eq!(column.len(), table.problems.len(), "ragged column");
            for (p, &measure) in column.iter().enumerate() {
                table.set(p, s, measure);
            }
        }
        table
    }

    pub fn set(&mut self, problem: usize, solver: usize, measure: Option<u64>) {
        if let Some(t) = measure {
            assert!(t >= 1, "evaluation counts start at 1");
        }
        let width = self.solvers.len();
        self.measures[problem * width + solver] = measure;
    }

    pub fn get(&self, problem: usize, solver: usize) -> Option<u64> {
        self.measures[problem * self.solvers.len() + solver]
    }

    pub fn problems(&self) -> &[ProblemTag] {
        &self.problems
    }

    pub fn solvers(&self) -> &[String] {
        &self.solvers
    }

    pub fn solver_index(&self, label: &str) -> Option<usize> {
        self.solvers.iter().position(|s| s == label)
    }

    /// Performance ratios `measure / best_measure` per (problem, solver).
    /// Failures map to infinity; on a problem where every solver fails, the
    /// whole row is infinite. On every other problem at least one solver
    /// attains ratio 1.
    pub fn performance_ratios(&self) -> Vec<Vec<f64>> {
        self.problems
            .iter()
            .enumerate()
            .map(|(p, _)| {
                let row_best = (0..self.solvers.len()).filter_map(|s| self.get(p, s)).min();
                (0..self.solvers.len())
                    .map(|s| match (self.get(p, s), row_best) {
                        (Some(t), Some(best)) => t as f64 / best as f64,
                        _ => f64::INFINITY,
                    })
                    .collect()
            })
            .collect()
    }
}

/// Which profile a curve is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Performance,
    Data,
}

impl ProfileKind {
    /// Label of the abscissa in emitted files.
    pub fn abscissa(self) -> &'static str {
        match self {
            ProfileKind::Performance => "tau",
            ProfileKind::Data => "nu",
        }
    }

    /// Smallest abscissa at which the profile is defined.
    fn domain_start(self) -> f64 {
        match self {
            ProfileKind::Performance => 1.0,
            ProfileKind::Data => 0.0,
        }
    }
}

/// A right-continuous staircase stored by its jump points: strictly
/// increasing abscissae paired with non-decreasing values in [0, 1], each an
/// integer multiple of 1/(number of problems). The curve is 0 before the
/// first jump.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    kind: ProfileKind,
    points: Vec<(f64, f64)>,
}

impl ProfileCurve {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Curve value at `x`: the value of the last jump at or before `x`.
    pub fn value_at(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|&(bx, _)| bx <= x);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].1
        }
    }
}

/// Smallest f64 `nu` satisfying `t <= nu * groups` under round-to-nearest.
///
/// The membership predicate is monotone in `nu` because f64 multiplication
/// by a positive constant is monotone, so placing the jump at the minimal
/// satisfying abscissa makes the staircase agree with the predicate at every
/// representable query point; the raw quotient `t / groups` can be off by an
/// ulp in either direction.
fn minimal_abscissa(t: u64, groups: f64) -> f64 {
    debug_assert!(t >= 1 && groups >= 1.0);
    let tf = t as f64;
    let mut nu = tf / groups;
    while nu * groups < tf {
        nu = nu.next_up();
    }
    loop {
        let prev = nu.next_down();
        if prev >= 0.0 && prev * groups >= tf {
            nu = prev;
        } else {
            break;
        }
    }
    nu
}

fn staircase_from_jumps(kind: ProfileKind, mut jumps: Vec<f64>, total: usize) -> ProfileCurve {
    jumps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut count = 0usize;
    let mut i = 0;
    while i < jumps.len() {
        let x = jumps[i];
        while i < jumps.len() && jumps[i] == x {
            count += 1;
            i += 1;
        }
        points.push((x, count as f64 / total as f64));
    }
    ProfileCurve { kind, points }
}

/// Performance profile of one solver. A solver that fails everywhere yields
/// a curve that is identically 0 (no jump points).
pub fn performance_profile(table: &MeasureTable, solver: &str) -> ProfileCurve {
    let s = table
        .solver_index(solver)
        .unwrap_or_else(|| panic!("solver `{solver}` not in table"));
    let ratios = table.performance_ratios();
    let jumps: Vec<f64> = ratios
        .iter()
        .map(|row| row[s])
        .filter(|r| r.is_finite())
        .collect();
    staircase_from_jumps(ProfileKind::Performance, jumps, table.problems.len())
}

/// Data profile of one solver: fraction of problems solved within
/// `nu * (dimension + 1)` evaluations. Problems where every solver fails
/// stay in the denominator.
pub fn data_profile(table: &MeasureTable, solver: &str) -> ProfileCurve {
    let s = table
        .solver_index(solver)
        .unwrap_or_else(|| panic!("solver `{solver}` not in table"));
    let jumps: Vec<f64> = table
        .problems
        .iter()
        .enumerate()
        .filter_map(|(p, tag)| {
            table
                .get(p, s)
                .map(|t| minimal_abscissa(t, (tag.dimension + 1) as f64))
        })
        .collect();
    staircase_from_jumps(ProfileKind::Data, jumps, table.problems.len())
}

fn check_window(kind: ProfileKind, lo: f64, hi: f64) -> Result<(), Error> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidWindow {
            lo,
            hi,
            reason: "bounds must be finite with lower strictly below upper".to_string(),
        });
    }
    if lo < kind.domain_start() {
        return Err(Error::InvalidWindow {
            lo,
            hi,
            reason: format!(
                "{} profiles are defined from {}",
                match kind {
                    ProfileKind::Performance => "performance",
                    ProfileKind::Data => "data",
                },
                kind.domain_start()
            ),
        });
    }
    Ok(())
}

/// Exact integral of the staircase over `[lo, hi]`, straight from the jump
/// points (each constant piece contributes value times clipped width).
pub fn staircase_area(curve: &ProfileCurve, lo: f64, hi: f64) -> Result<f64, Error> {
    check_window(curve.kind, lo, hi)?;
    let points = &curve.points;
    let mut area = 0.0;
    for i in 0..points.len() {
        let piece_lo = points[i].0.max(lo);
        let piece_hi = if i + 1 < points.len() {
            points[i + 1].0.min(hi)
        } else {
            hi
        };
        if piece_hi > piece_lo {
            area += points[i].1 * (piece_hi - piece_lo);
        }
    }
    Ok(area)
}

/// Output format for a single emitted curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Svg,
}

/// Renders one curve: CSV with header `x,value` and one row per jump point,
/// or a standalone SVG staircase plot over the curve's natural span. Numbers
/// use the shortest representation that parses back to the same value.
pub fn emit_curve(curve: &ProfileCurve, format: CurveFormat) -> String {
    match format {
        CurveFormat::Csv => {
            let mut out = String::from("x,value\n");
            for (x, v) in &curve.points {
                out.push_str(&format!("{x},{v}\n"));
            }
            out
        }
        CurveFormat::Svg => {
            let (lo, hi) = natural_span(std::slice::from_ref(curve));
            svg_document(&[("curve", curve)], lo, hi)
        }
    }
}

fn natural_span(curves: &[ProfileCurve]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for curve in curves {
        if let (Some(first), Some(last)) = (curve.points.first(), curve.points.last()) {
            lo = lo.min(first.0);
            hi = hi.max(last.0);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo, lo + 1.0)
    } else {
        (lo, hi)
    }
}

/// Shared-axis CSV for one or more curves of the same kind over a window:
/// header `tau,value_<label>,...` (or `nu,...`), a leading row at the window
/// start, then one row per jump point inside the window.
pub fn overlay_csv(curves: &[(&str, &ProfileCurve)], lo: f64, hi: f64) -> Result<String, Error> {
    let kind = common_kind(curves)?;
    check_window(kind, lo, hi)?;
    let mut out = String::new();
    out.push_str(kind.abscissa());
    for (label, _) in curves {
        out.push_str(&format!(",value_{label}"));
    }
    out.push('\n');
    for x in overlay_abscissae(curves, lo, hi) {
        out.push_str(&format!("{x}"));
        for (_, curve) in curves {
            out.push_str(&format!(",{}", curve.value_at(x)));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Standalone SVG staircase plot of one or more curves of the same kind over
/// a window; one polyline per curve.
pub fn overlay_svg(curves: &[(&str, &ProfileCurve)], lo: f64, hi: f64) -> Result<String, Error> {
    let kind = common_kind(curves)?;
    check_window(kind, lo, hi)?;
    Ok(svg_document(curves, lo, hi))
}

fn common_kind(curves: &[(&str, &ProfileCurve)]) -> Result<ProfileKind, Error> {
    let Some((_, first)) = curves.first() else {
        return Err(Error::InvalidArgument(
            "at least one curve is required".to_string(),
        ));
    };
    for (label, curve) in curves {
        if curve.kind != first.kind {
            return Err(Error::InvalidArgument(format!(
                "curve `{label}` differs in kind from the first curve"
            )));
        }
    }
    Ok(first.kind)
}

fn overlay_abscissae(curves: &[(&str, &ProfileCurve)], lo: f64, hi: f64) -> Vec<f64> {
    let mut xs = vec![lo];
    for (_, curve) in curves {
        for &(x, _) in &curve.points {
            if x > lo && x <= hi {
                xs.push(x);
            }
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    xs
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 420.0;
const SVG_MARGIN_LEFT: f64 = 56.0;
const SVG_MARGIN_RIGHT: f64 = 18.0;
const SVG_MARGIN_TOP: f64 = 18.0;
const SVG_MARGIN_BOTTOM: f64 = 44.0;
const SVG_PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
];

fn svg_document(curves: &[(&str, &ProfileCurve)], lo: f64, hi: f64) -> String {
    let plot_w = SVG_WIDTH - SVG_MARGIN_LEFT - SVG_MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - SVG_MARGIN_TOP - SVG_MARGIN_BOTTOM;
    let x_of = |x: f64| SVG_MARGIN_LEFT + (x - lo) / (hi - lo) * plot_w;
    let y_of = |v: f64| SVG_MARGIN_TOP + (1.0 - v) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" \
         viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>\n"
    ));
    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        x_of(lo),
        y_of(0.0),
        x_of(hi),
        y_of(0.0)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        x_of(lo),
        y_of(0.0),
        x_of(lo),
        y_of(1.0)
    ));
    // Ticks.
    for i in 0..=4 {
        let v = i as f64 / 4.0;
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            x_of(lo) - 4.0,
            y_of(v),
            x_of(lo),
            y_of(v)
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{v}</text>\n",
            x_of(lo) - 7.0,
            y_of(v) + 4.0
        ));
        let x = lo + (hi - lo) * v;
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            x_of(x),
            y_of(0.0),
            x_of(x),
            y_of(0.0) + 4.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x}</text>\n",
            x_of(x),
            y_of(0.0) + 18.0
        ));
    }
    let kind_label = curves
        .first()
        .map(|(_, c)| c.kind.abscissa())
        .unwrap_or("x");
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{kind_label}</text>\n",
        x_of(lo) + plot_w / 2.0,
        SVG_HEIGHT - 8.0
    ));
    svg.push_str(&format!(
        "  <text x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">fraction of problems</text>\n",
        SVG_MARGIN_TOP + plot_h / 2.0,
        SVG_MARGIN_TOP + plot_h / 2.0
    ));
    // One staircase polyline per curve.
    for (i, (label, curve)) in curves.iter().enumerate() {
        let color = SVG_PALETTE[i % SVG_PALETTE.len()];
        let mut pts = String::new();
        let mut value = curve.value_at(lo);
        pts.push_str(&format!("{:.2},{:.2} ", x_of(lo), y_of(value)));
        for &(x, v) in &curve.points {
            if x <= lo || x > hi {
                continue;
            }
            pts.push_str(&format!("{:.2},{:.2} ", x_of(x), y_of(value)));
            pts.push_str(&format!("{:.2},{:.2} ", x_of(x), y_of(v)));
            value = v;
        }
        pts.push_str(&format!("{:.2},{:.2}", x_of(hi), y_of(value)));
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{pts}\"/>\n"
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\">{label}</text>\n",
            SVG_MARGIN_LEFT + plot_w - 120.0,
            SVG_MARGIN_TOP + 16.0 + 16.0 * i as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(name: &str, dimension: usize) -> ProblemTag {
        ProblemTag {
            name: name.to_string(),
            dimension,
        }
    }

    fn two_by_two() -> MeasureTable {
        // measures: p1 -> (10, 20), p2 -> (30, 15)
        MeasureTable::from_columns(
            vec![tag("p1", 2), tag("p2", 2)],
            vec![
                ("s1".to_string(), vec![Some(10), Some(30)]),
                ("s2".to_string(), vec![Some(20), Some(15)]),
            ],
        )
    }

    #[test]
    fn performance_ratios_on_the_two_by_two_table() {
        let ratios = two_by_two().performance_ratios();
        assert_eq!(ratios[0], vec![1.0, 2.0]);
        assert_eq!(ratios[1], vec![2.0, 1.0]);
    }

    #[test]
    fn performance_profile_jumps_match_hand_computation() {
        let table = two_by_two();
        let curve = performance_profile(&table, "s1");
        assert_eq!(curve.points(), &[(1.0, 0.5), (2.0, 1.0)]);
        assert_eq!(curve.value_at(1.0), 0.5);
        assert_eq!(curve.value_at(1.9), 0.5);
        assert_eq!(curve.value_at(2.0), 1.0);
        assert_eq!(curve.value_at(50.0), 1.0);
    }

    #[test]
    fn every_solvable_problem_has_a_ratio_one_solver() {
        let table = two_by_two();
        let ratios = table.performance_ratios();
        for row in ratios {
            assert!(row.contains(&1.0));
        }
    }

    #[test]
    fn all_fail_solver_has_an_identically_zero_profile() {
        let table = MeasureTable::from_columns(
            vec![tag("p1", 2), tag("p2", 3)],
            vec![
                ("ok".to_string(), vec![Some(5), Some(7)]),
                ("broken".to_string(), vec![None, None]),
            ],
        );
        let curve = performance_profile(&table, "broken");
        assert!(curve.points().is_empty());
        assert_eq!(curve.value_at(1e9), 0.0);
        let data = data_profile(&table, "broken");
        assert!(data.points().is_empty());
    }

    #[test]
    fn all_fail_problem_stays_in_the_denominator() {
        let table = MeasureTable::from_columns(
            vec![tag("p1", 2), tag("p2", 2)],
            vec![
                ("a".to_string(), vec![Some(4), None]),
                ("b".to_string(), vec![Some(8), None]),
            ],
        );
        let curve = performance_profile(&table, "a");
        assert_eq!(curve.value_at(1e12), 0.5);
    }

    #[test]
    fn data_profile_jumps_match_hand_computation() {
        // Problems of dimension 2: groups of 3 evaluations. t = 3 and 9 give
        // jumps at nu = 1 and nu = 3.
        let table = MeasureTable::from_columns(
            vec![tag("p1", 2), tag("p2", 2)],
            vec![("s".to_string(), vec![Some(3), Some(9)])],
        );
        let curve = data_profile(&table, "s");
        assert_eq!(curve.points(), &[(1.0, 0.5), (3.0, 1.0)]);
        assert_eq!(curve.value_at(0.999), 0.0);
        assert_eq!(curve.value_at(1.0), 0.5);
        assert_eq!(curve.value_at(2.9), 0.5);
        assert_eq!(curve.value_at(3.0), 1.0);
    }

    #[test]
    fn minimal_abscissa_is_the_first_satisfying_float() {
        for t in [1u64, 2, 3, 5, 7, 10, 99, 100, 9999, 10_000] {
            for dim in 1usize..=12 {
                let groups = (dim + 1) as f64;
                let nu = minimal_abscissa(t, groups);
                let tf = t as f64;
                assert!(nu * groups >= tf, "t={t} dim={dim}");
                let prev = nu.next_down();
                assert!(prev * groups < tf, "t={t} dim={dim} not minimal");
            }
        }
    }

    #[test]
    fn staircase_area_single_rectangle() {
        let curve = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(0.0, 1.0)],
        };
        assert_eq!(staircase_area(&curve, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(staircase_area(&curve, 0.0, 2.5).unwrap(), 2.5);
    }

    #[test]
    fn staircase_area_two_steps() {
        let curve = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(0.0, 0.5), (2.0, 1.0)],
        };
        // 0.5 over [1, 2) plus 1.0 over [2, 3).
        assert_eq!(staircase_area(&curve, 1.0, 3.0).unwrap(), 1.5);
        // Window entirely before the first jump.
        let late = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(5.0, 1.0)],
        };
        assert_eq!(staircase_area(&late, 0.0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn staircase_area_empty_curve_is_zero() {
        let curve = ProfileCurve {
            kind: ProfileKind::Performance,
            points: vec![],
        };
        assert_eq!(staircase_area(&curve, 1.0, 20.0).unwrap(), 0.0);
    }

    #[test]
    fn windows_are_validated() {
        let curve = ProfileCurve {
            kind: ProfileKind::Performance,
            points: vec![(1.0, 1.0)],
        };
        assert!(staircase_area(&curve, 5.0, 5.0).is_err());
        assert!(staircase_area(&curve, 5.0, 2.0).is_err());
        assert!(staircase_area(&curve, 0.5, 2.0).is_err());
        let data = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(1.0, 1.0)],
        };
        assert!(staircase_area(&data, -1.0, 2.0).is_err());
        assert!(staircase_area(&data, 0.0, 2.0).is_ok());
    }

    #[test]
    fn csv_of_a_single_breakpoint_curve() {
        let curve = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(1.0, 1.0)],
        };
        assert_eq!(emit_curve(&curve, CurveFormat::Csv), "x,value\n1,1\n");
    }

    #[test]
    fn csv_of_an_empty_curve_is_header_only() {
        let curve = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![],
        };
        assert_eq!(emit_curve(&curve, CurveFormat::Csv), "x,value\n");
    }

    #[test]
    fn overlay_csv_names_columns_after_labels() {
        let a = ProfileCurve {
            kind: ProfileKind::Performance,
            points: vec![(1.0, 0.5), (2.0, 1.0)],
        };
        let b = ProfileCurve {
            kind: ProfileKind::Performance,
            points: vec![(1.0, 1.0)],
        };
        let csv = overlay_csv(&[("q0", &a), ("qP", &b)], 1.0, 4.0).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "tau,value_q0,value_qP");
        assert_eq!(lines.next().unwrap(), "1,0.5,1");
        assert_eq!(lines.next().unwrap(), "2,1,1");
        assert!(lines.next().is_none());
    }

    #[test]
    fn overlay_svg_has_one_polyline_per_curve() {
        let a = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(1.0, 0.5), (2.0, 1.0)],
        };
        let b = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(1.5, 1.0)],
        };
        let svg = overlay_svg(&[("q0", &a), ("qD", &b)], 0.0, 3.0).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("<svg"));
        assert!(svg.contains("</svg>"));
    }

    #[test]
    fn mixed_kind_overlays_are_rejected() {
        let a = ProfileCurve {
            kind: ProfileKind::Data,
            points: vec![(1.0, 1.0)],
        };
        let b = ProfileCurve {
            kind: ProfileKind::Performance,
            points: vec![(1.0, 1.0)],
        };
        assert!(overlay_csv(&[("a", &a), ("b", &b)], 1.0, 2.0).is_err());
    }
}
