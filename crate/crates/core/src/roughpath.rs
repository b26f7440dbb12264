//! Floating-point branched rough path lifts of smooth drivers, numerical
//! checks of the rough path axioms, and a B-series RDE stepper.
//!
//! Iterated integrals are computed by composite 4-point Gauss–Legendre
//! quadrature. Each cell carries a spectral integration matrix, so the
//! prefix integral `r ↦ ∫_s^r` is known at every node and nested integrals
//! reuse it directly.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::algebra::to_f64;
use crate::bck::{coproduct_forest, coproduct_tree};
use crate::bseries::{Differentials, PolyVectorField};
use crate::error::{Error, Result};
use crate::forests::{Enumerator, Forest, Tree};
use crate::poly::Poly;

/// Built-in smooth drivers `X: [0, T] → ℝ^d`.
#[derive(Clone, Debug, PartialEq)]
pub enum Driver {
    /// `X^α(t) = Σ_k c[α][k] t^k`.
    Poly(Vec<Vec<f64>>),
    /// `cos t, sin t, cos 2t, sin 2t, …` truncated to `d` components.
    Trig(usize),
    /// `X_t = t` in every component.
    Linear(usize),
    /// `X_t = 0`.
    Constant(usize),
}

impl Driver {
    pub fn dim(&self) -> usize {
        match self {
            Driver::Poly(c) => c.len(),
            Driver::Trig(d) | Driver::Linear(d) | Driver::Constant(d) => *d,
        }
    }

    pub fn value(&self, t: f64) -> Vec<f64> {
        match self {
            Driver::Poly(c) => c.iter().map(|cs| cs.iter().rev().fold(0.0, |acc, a| acc * t + a)).collect(),
            Driver::Trig(d) => (0..*d).map(|a| trig(a, t, false)).collect(),
            Driver::Linear(d) => vec![t; *d],
            Driver::Constant(d) => vec![0.0; *d],
        }
    }

    pub fn derivative(&self, t: f64) -> Vec<f64> {
        match self {
            Driver::Poly(c) => c
                .iter()
                .map(|cs| cs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, a)| acc * t + k as f64 * a))
                .collect(),
            Driver::Trig(d) => (0..*d).map(|a| trig(a, t, true)).collect(),
            Driver::Linear(d) => vec![1.0; *d],
            Driver::Constant(d) => vec![0.0; *d],
        }
    }
}

fn trig(a: usize, t: f64, deriv: bool) -> f64 {
    let w = (a / 2 + 1) as f64;
    match (a % 2 == 0, deriv) {
        (true, false) => (w * t).cos(),
        (true, true) => -w * (w * t).sin(),
        (false, false) => (w * t).sin(),
        (false, true) => w * (w * t).cos(),
    }
}

/// How a sampled path is read between grid points.
#[derive(Clone, Debug, PartialEq)]
pub enum Interpolation {
    /// The analytic driver the samples came from.
    Analytic(Driver),
    /// Straight lines between samples.
    Linear,
}

/// A driver sampled on an increasing grid of `[0, T]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
    interpolation: Interpolation,
}

impl SampledPath {
    pub fn from_driver(driver: Driver, horizon: f64, samples: usize) -> Result<Self> {
        if !(horizon > 0.0) || samples == 0 {
            return Err(Error::Dimension("need T > 0 and at least one sample interval".into()));
        }
        let times: Vec<f64> = (0..=samples).map(|i| horizon * i as f64 / samples as f64).collect();
        let values = times.iter().map(|&t| driver.value(t)).collect();
        Ok(SampledPath { times, values, interpolation: Interpolation::Analytic(driver) })
    }

    pub fn from_samples(times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(Error::Dimension("need matching times and values, at least two".into()));
        }
        if times[0] != 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Dimension("grid must start at 0 and increase strictly".into()));
        }
        let d = values[0].len();
        if d == 0 || values.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension("every sample needs the same positive dimension".into()));
        }
        Ok(SampledPath { times, values, interpolation: Interpolation::Linear })
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("non-empty grid")
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    fn cell(&self, t: f64) -> usize {
        match self.times.binary_search_by(|x| x.partial_cmp(&t).expect("finite time")) {
            Ok(i) => i.min(self.times.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.times.len() - 2),
        }
    }

    pub fn value(&self, t: f64) -> Vec<f64> {
        match &self.interpolation {
            Interpolation::Analytic(d) => d.value(t),
            Interpolation::Linear => {
                let i = self.cell(t);
                let w = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
                self.values[i].iter().zip(&self.values[i + 1]).map(|(a, b)| a + w * (b - a)).collect()
            }
        }
    }

    pub fn derivative(&self, t: f64) -> Vec<f64> {
        match &self.interpolation {
            Interpolation::Analytic(d) => d.derivative(t),
            Interpolation::Linear => {
                let i = self.cell(t);
                let h = self.times[i + 1] - self.times[i];
                self.values[i].iter().zip(&self.values[i + 1]).map(|(a, b)| (b - a) / h).collect()
            }
        }
    }

    /// Points in `(s, t)` where the path may fail to be smooth.
    fn breakpoints(&self, s: f64, t: f64) -> Vec<f64> {
        match self.interpolation {
            Interpolation::Analytic(_) => Vec::new(),
            Interpolation::Linear => self.times.iter().copied().filter(|&x| x > s && x < t).collect(),
        }
    }
}

const GL_X: [f64; 4] = [0.069_431_844_202_973_71, 0.330_009_478_207_571_87, 0.669_990_521_792_428_1, 0.930_568_155_797_026_3];
const GL_W: [f64; 4] = [0.173_927_422_568_726_93, 0.326_072_577_431_273_07, 0.326_072_577_431_273_07, 0.173_927_422_568_726_93];

/// `S[j][k] = ∫_0^{x_j} ℓ_k`, `ℓ_k` the Lagrange basis on the nodes.
fn spectral_matrix() -> [[f64; 4]; 4] {
    let mut s = [[0.0; 4]; 4];
    for k in 0..4 {
        let mut coeffs = vec![1.0];
        for m in (0..4).filter(|&m| m != k) {
            let denom = GL_X[k] - GL_X[m];
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c / denom;
                next[i] -= c * GL_X[m] / denom;
            }
            coeffs = next;
        }
        for j in 0..4 {
            s[j][k] = coeffs.iter().enumerate().map(|(i, c)| c * GL_X[j].powi(i as i32 + 1) / (i + 1) as f64).sum();
        }
    }
    s
}

/// Quadrature grid on `[s, t]`: cell boundaries and the interior nodes.
struct Grid {
    edges: Vec<f64>,
    nodes: Vec<[f64; 4]>,
}

impl Grid {
    fn new(s: f64, t: f64, max_cell: f64, breaks: &[f64]) -> Grid {
        let mut knots = vec![s];
        knots.extend_from_slice(breaks);
        knots.push(t);
        let mut edges = vec![s];
        for w in knots.windows(2) {
            let n = ((w[1] - w[0]) / max_cell).ceil().max(1.0) as usize;
            for i in 1..=n {
                edges.push(w[0] + (w[1] - w[0]) * i as f64 / n as f64);
            }
        }
        let nodes = edges
            .windows(2)
            .map(|w| {
                let h = w[1] - w[0];
                [w[0] + h * GL_X[0], w[0] + h * GL_X[1], w[0] + h * GL_X[2], w[0] + h * GL_X[3]]
            })
            .collect();
        Grid { edges, nodes }
    }
}


type Increments = Arc<BTreeMap<Tree, f64>>;

/// A branched rough path lift of a sampled driver, truncated at order `N`.
pub struct RoughLift {
    path: SampledPath,
    order: usize,
    max_cell: f64,
    spectral: [[f64; 4]; 4],
    cache: Mutex<BTreeMap<(u64, u64), Increments>>,
}

impl RoughLift {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn path(&self) -> &SampledPath {
        &self.path
    }

    pub fn alphabet(&self) -> u32 {
        self.path.dim() as u32
    }

    /// Values on all trees of size ≤ `N` for the pair `(s, t)`.
    pub fn increments(&self, s: f64, t: f64) -> Increments {
        let key = (s.to_bits(), t.to_bits());
        if let Some(v) = self.cache.lock().expect("lift cache").get(&key) {
            return v.clone();
        }
        let v = Arc::new(self.compute(s, t));
        self.cache.lock().expect("lift cache").insert(key, v.clone());
        v
    }

    fn compute(&self, s: f64, t: f64) -> BTreeMap<Tree, f64> {
        let grid = Grid::new(s, t, self.max_cell, &self.path.breakpoints(s, t));
        let dx: Vec<[Vec<f64>; 4]> = grid
            .nodes
            .iter()
            .map(|ns| [0, 1, 2, 3].map(|j| self.path.derivative(ns[j])))
            .collect();
        // `r ↦ ⟨X_{s,r}, τ⟩` at every quadrature node, per tree.
        let mut profiles: BTreeMap<Tree, Vec<[f64; 4]>> = BTreeMap::new();
        let mut out = BTreeMap::new();
        let trees = Enumerator::new(self.alphabet()).trees_up_to(self.order);
        for tree in trees {
            let alpha = tree.label() as usize - 1;
            let mut edges = vec![0.0; grid.edges.len()];
            let mut nodes = vec![[0.0; 4]; grid.nodes.len()];
            for c in 0..grid.nodes.len() {
                let h = grid.edges[c + 1] - grid.edges[c];
                let mut g = [0.0; 4];
                for j in 0..4 {
                    let branches: f64 = tree.children().iter().map(|ch| profiles[ch][c][j]).product();
                    g[j] = branches * dx[c][j][alpha];
                }
                for j in 0..4 {
                    nodes[c][j] = edges[c] + h * (0..4).map(|k| self.spectral[j][k] * g[k]).sum::<f64>();
                }
                edges[c + 1] = edges[c] + h * (0..4).map(|k| GL_W[k] * g[k]).sum::<f64>();
            }
            out.insert(tree.clone(), *edges.last().expect("non-empty grid"));
            profiles.insert(tree, nodes);
        }
        out
    }

    /// `⟨X_{s,t}, f⟩`, multiplicative over trees; `None` beyond the order.
    pub fn eval(&self, s: f64, t: f64, f: &Forest) -> Option<f64> {
        if f.trees().iter().any(|t| t.size() > self.order) {
            return None;
        }
        let inc = self.increments(s, t);
        Some(f.trees().iter().map(|tr| inc.get(tr).copied().unwrap_or(0.0)).product())
    }

    fn eval_tree(&self, s: f64, t: f64, tree: &Tree) -> f64 {
        self.increments(s, t).get(tree).copied().unwrap_or(0.0)
    }
}

/// Lifts `path` up to order `n ≤ 4`, with quadrature cells no longer than `max_cell`.
pub fn lift(path: SampledPath, n: usize, max_cell: f64) -> Result<RoughLift> {
    if n == 0 || n > 4 {
        return Err(Error::Unsupported(format!("lift order must be between 1 and 4, got {}", n)));
    }
    if !(max_cell > 0.0) {
        return Err(Error::Dimension("quadrature cell size must be positive".into()));
    }
    Ok(RoughLift { path, order: n, max_cell, spectral: spectral_matrix(), cache: Mutex::new(BTreeMap::new()) })
}

/// One `(s, t, forest, value)` record for export.
#[derive(Clone, Debug, Serialize)]
pub struct LiftRecord {
    pub s: f64,
    pub t: f64,
    pub forest: String,
    pub value: f64,
}

/// Values on all forests of size ≤ `max_size` for each pair.
pub fn lift_records(l: &RoughLift, pairs: &[(f64, f64)], max_size: usize) -> Vec<LiftRecord> {
    let forests = Enumerator::new(l.alphabet()).forests_up_to(max_size.min(l.order));
    let mut out = Vec::new();
    for &(s, t) in pairs {
        for f in &forests {
            if let Some(value) = l.eval(s, t, f) {
                out.push(LiftRecord { s, t, forest: f.to_string(), value });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ForestError {
    pub forest: String,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChenReport {
    pub entries: Vec<ForestError>,
    pub max_error: f64,
    pub passed: bool,
}

/// `|⟨X_{s,t}, h⟩ − ⟨X_{s,u} ⊗ X_{u,t}, Δh⟩|` over forests of size ≤ `max_size`.
pub fn check_chen(l: &RoughLift, s: f64, u: f64, t: f64, max_size: usize, tol: f64) -> ChenReport {
    let mut entries = Vec::new();
    for f in Enumerator::new(l.alphabet()).forests_up_to(max_size.min(l.order)) {
        let direct = l.eval(s, t, &f).expect("within order");
        let split: f64 = coproduct_forest(&f)
            .iter()
            .map(|((a, b), c)| to_f64(c) * l.eval(s, u, a).expect("within order") * l.eval(u, t, b).expect("within order"))
            .sum();
        entries.push(ForestError { forest: f.to_string(), error: (direct - split).abs() });
    }
    let max_error = entries.iter().map(|e| e.error).fold(0.0, f64::max);
    ChenReport { entries, max_error, passed: max_error <= tol }
}

#[derive(Clone, Debug, Serialize)]
pub struct HoelderRow {
    pub forest: String,
    pub sup_ratio: f64,
}

/// `sup |⟨X_{s,t}, h⟩| / |t − s|^{γ|h|}` over pairs from a uniform grid of
/// `points + 1` times on `[0, T]`.
pub fn check_hoelder(l: &RoughLift, gamma: f64, max_size: usize, points: usize) -> Vec<HoelderRow> {
    let horizon = l.path.horizon();
    let ts: Vec<f64> = (0..=points).map(|i| horizon * i as f64 / points as f64).collect();
    let mut rows = Vec::new();
    for f in Enumerator::new(l.alphabet()).forests_up_to(max_size.min(l.order)) {
        if f.is_unit() {
            continue;
        }
        let mut sup: f64 = 0.0;
        for (i, &s) in ts.iter().enumerate() {
            for &t in &ts[i + 1..] {
                let v = l.eval(s, t, &f).expect("within order").abs();
                sup = sup.max(v / (t - s).powf(gamma * f.size() as f64));
            }
        }
        rows.push(HoelderRow { forest: f.to_string(), sup_ratio: sup });
    }
    rows
}

/// Precomputed elementary differentials for repeated B-series steps.
pub struct Stepper {
    order: usize,
    terms: Vec<(Tree, f64, Vec<Poly>)>,
}

impl Stepper {
    pub fn new(f: &PolyVectorField, order: usize) -> Stepper {
        let mut diffs = Differentials::new(f);
        let terms = Enumerator::new(f.drivers() as u32)
            .trees_up_to(order)
            .into_iter()
            .map(|t| {
                let sym = to_f64(&crate::algebra::Rational::from_integer(t.symmetry_factor()));
                let polys = diffs.tree(&t);
                (t, sym, polys)
            })
            .collect();
        Stepper { order, terms }
    }

    /// `y + Σ_{|τ| ≤ N} Υ[τ](y)/S(τ) ⟨X_{s,t}, τ⟩` with `N` capped by the lift order.
    pub fn step(&self, y: &[f64], l: &RoughLift, s: f64, t: f64) -> Vec<f64> {
        let mut out = y.to_vec();
        for (tree, sym, polys) in &self.terms {
            if tree.size() > l.order {
                continue;
            }
            let x = l.eval_tree(s, t, tree);
            if x == 0.0 {
                continue;
            }
            for (o, p) in out.iter_mut().zip(polys) {
                *o += p.eval_f64(y) / sym * x;
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// One truncated B-series step from `s` to `t`.
pub fn rde_step(y: &[f64], l: &RoughLift, f: &PolyVectorField, s: f64, t: f64, n: usize) -> Vec<f64> {
    Stepper::new(f, n.min(l.order)).step(y, l, s, t)
}

/// Classical RK4 for `dY = Σ_α f_α(Y) dX^α`, with `substeps` steps on `[s, t]`.
pub fn reference_solve(y: &[f64], path: &SampledPath, f: &PolyVectorField, s: f64, t: f64, substeps: usize) -> Vec<f64> {
    let rhs = |r: f64, y: &[f64]| -> Vec<f64> {
        let dx = path.derivative(r);
        let mut v = vec![0.0; y.len()];
        for (a, &w) in dx.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (b, p) in f.component(a as u32 + 1).iter().enumerate() {
                v[b] += p.eval_f64(y) * w;
            }
        }
        v
    };
    let h = (t - s) / substeps as f64;
    let mut y = y.to_vec();
    let axpy = |y: &[f64], k: &[f64], c: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + c * b).collect() };
    for i in 0..substeps {
        let r = s + h * i as f64;
        let k1 = rhs(r, &y);
        let k2 = rhs(r + h / 2.0, &axpy(&y, &k1, h / 2.0));
        let k3 = rhs(r + h / 2.0, &axpy(&y, &k2, h / 2.0));
        let k4 = rhs(r + h, &axpy(&y, &k3, h));
        for b in 0..y.len() {
            y[b] += h / 6.0 * (k1[b] + 2.0 * k2[b] + 2.0 * k3[b] + k4[b]);
        }
    }
    y
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
}

/// Local error of one order-`n` step from `s` against the RK4 reference,
/// for each step length, and the fitted log-log slope.
pub fn measure_local_order(
    l: &RoughLift,
    f: &PolyVectorField,
    y0: &[f64],
    s: f64,
    n: usize,
    steps: &[f64],
) -> OrderReport {
    let stepper = Stepper::new(f, n.min(l.order));
    let errors: Vec<f64> = steps
        .iter()
        .map(|&h| {
            let approx = stepper.step(y0, l, s, s + h);
            let exact = reference_solve(y0, &l.path, f, s, s + h, 2000);
            norm(&approx.iter().zip(&exact).map(|(a, b)| a - b).collect::<Vec<_>>())
        })
        .collect();
    OrderReport { steps: steps.to_vec(), slope: loglog_slope(steps, &errors), errors }
}

#[derive(Clone, Debug, Serialize)]
pub struct RemainderRow {
    /// `1` for the solution row, otherwise the tree `h`.
    pub label: String,
    pub size: usize,
    /// Required slope `N − |h|` (times `γ = 1`).
    pub expected: f64,
    pub slope: f64,
    /// Largest remainder seen; slopes of negligible remainders are not fitted.
    pub max_remainder: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ControlledReport {
    pub rows: Vec<RemainderRow>,
    pub passed: bool,
}

/// Below this size a remainder counts as exactly zero.
const NEGLIGIBLE: f64 = 1e-13;

/// Builds `⟨h, Y_t⟩ = Υ[h](Y_t)/S(h)` along a fine B-series solution and
/// fits the slopes of the controlled-path remainders over dyadic `t − s`.
pub fn check_controlled(l: &RoughLift, f: &PolyVectorField, y0: &[f64], n: usize, tol: f64) -> ControlledReport {
    let horizon = l.path.horizon();
    let fine = Stepper::new(f, l.order);
    let solve_to = |t: f64| -> Vec<f64> {
        let k = ((t / horizon) * 512.0).ceil().max(1.0) as usize;
        let mut y = y0.to_vec();
        for i in 0..k {
            y = fine.step(&y, l, t * i as f64 / k as f64, t * (i + 1) as f64 / k as f64);
        }
        y
    };
    let trees = Enumerator::new(l.alphabet()).trees_up_to(n.saturating_sub(1));
    let mut diffs = Differentials::new(f);
    let coords = |diffs: &mut Differentials, tree: &Tree, y: &[f64]| -> Vec<f64> {
        let sym = to_f64(&crate::algebra::Rational::from_integer(tree.symmetry_factor()));
        diffs.tree(tree).iter().map(|p| p.eval_f64(y) / sym).collect()
    };

    let s = horizon / 4.0;
    let ys = solve_to(s);
    let gaps: Vec<f64> = (2..=7).map(|k| horizon / 2f64.powi(k)).collect();
    let yts: Vec<Vec<f64>> = gaps.iter().map(|g| solve_to(s + g)).collect();
    let mut rows = Vec::new();

    let fit = |label: String, size: usize, rems: Vec<f64>, rows: &mut Vec<RemainderRow>| {
        let expected = (n - size) as f64;
        let max_remainder = rems.iter().copied().fold(0.0, f64::max);
        let slope = if max_remainder < NEGLIGIBLE { f64::INFINITY } else { loglog_slope(&gaps, &rems) };
        rows.push(RemainderRow { label, size, expected, slope, max_remainder, passed: slope >= expected - tol });
    };

    let unit_rems: Vec<f64> = gaps
        .iter()
        .zip(&yts)
        .map(|(&g, yt)| {
            let mut pred = ys.clone();
            for tree in &trees {
                let c = coords(&mut diffs, tree, &ys);
                let x = l.eval_tree(s, s + g, tree);
                for (p, v) in pred.iter_mut().zip(&c) {
                    *p += v * x;
                }
            }
            norm(&yt.iter().zip(&pred).map(|(a, b)| a - b).collect::<Vec<_>>())
        })
        .collect();
    fit("1".into(), 0, unit_rems, &mut rows);

    for h in &trees {
        let rems: Vec<f64> = gaps
            .iter()
            .zip(&yts)
            .map(|(&g, yt)| {
                let mut pred = vec![0.0; y0.len()];
                for tree in &trees {
                    for ((left, right), c) in coproduct_tree(tree).iter() {
                        if right.trees() != std::slice::from_ref(h) {
                            continue;
                        }
                        let x = to_f64(c) * l.eval(s, s + g, left).expect("within order");
                        for (p, v) in pred.iter_mut().zip(coords(&mut diffs, tree, &ys)) {
                            *p += v * x;
                        }
                    }
                }
                let actual = coords(&mut diffs, h, yt);
                norm(&actual.iter().zip(&pred).map(|(a, b)| a - b).collect::<Vec<_>>())
            })
            .collect();
        fit(h.to_string(), h.size(), rems, &mut rows);
    }
    let passed = rows.iter().all(|r| r.passed);
    ControlledReport { rows, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::parse_forest;

    fn linear_lift() -> RoughLift {
        lift(SampledPath::from_driver(Driver::Linear(1), 1.0, 8).unwrap(), 4, 0.05).unwrap()
    }

    #[test]
    fn spectral_rows_integrate_polynomials() {
        let s = spectral_matrix();
        for j in 0..4 {
            let cubic: f64 = (0..4).map(|k| s[j][k] * GL_X[k].powi(3)).sum();
            assert!((cubic - GL_X[j].powi(4) / 4.0).abs() < 1e-14);
        }
        assert!((GL_W.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn iterated_integrals_of_time() {
        let l = linear_lift();
        let v = |s: &str| l.eval(0.2, 0.7, &parse_forest(s).unwrap()).unwrap();
        assert!((v("[1:]") - 0.5).abs() < 1e-14);
        assert!((v("[1:[1:]]") - 0.125).abs() < 1e-14);
        assert!((v("[1:] * [1:]") - 0.25).abs() < 1e-14);
        assert_eq!(v("1"), 1.0);
        assert!(l.eval(0.0, 1.0, &parse_forest("[1:[1:[1:[1:[1:]]]]]").unwrap()).is_none());
    }

    #[test]
    fn linear_interpolation_matches_a_sampled_line() {
        let p = SampledPath::from_samples(vec![0.0, 0.5, 1.0], vec![vec![0.0], vec![1.0], vec![1.0]]).unwrap();
        let l = lift(p, 2, 0.1).unwrap();
        let ladder = l.eval(0.0, 1.0, &parse_forest("[1:[1:]]").unwrap()).unwrap();
        assert!((ladder - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_field_does_not_move() {
        let f = PolyVectorField::scalar(Poly::zero(1)).unwrap();
        assert_eq!(rde_step(&[2.0], &linear_lift(), &f, 0.0, 0.5, 3), vec![2.0]);
    }
}
