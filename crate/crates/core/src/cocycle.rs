//! Degree-by-degree solver for the 1-cocycle equation
//! `Δ L(x) = (id ⊗ L) Δx + L(x) ⊗ 1` on a connected graded Hopf algebra.
//!
//! At input degree `d` the unknowns are the coefficients of `L` on the
//! degree-`d` basis, valued in the full degree-`d + 1` basis. Values of `L`
//! found at lower degrees are carried as linear forms in the free
//! parameters that survive so far, so each step solves one homogeneous
//! system in the new unknowns and the old parameters together.

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Basis, GradedVector, Rational, Tensor2};
use crate::forests::{Enumerator, Forest, Tree};
use crate::linalg::RationalMatrix;
use crate::mindex::{basis_m, coproduct_forest_m, MultiIndexForest};

/// A connected graded Hopf algebra presented by a basis and a coproduct.
pub trait GradedHopf {
    type B: Basis + Display;
    fn name(&self) -> String;
    fn unit(&self) -> Self::B;
    /// Basis of the degree-`n` component, in a fixed order.
    fn basis(&self, n: usize) -> Vec<Self::B>;
    fn coproduct(&self, x: &Self::B) -> Tensor2<Self::B, Self::B>;
    /// Product of two basis elements, which is again a basis element.
    fn mul(&self, a: &Self::B, b: &Self::B) -> Self::B;
}

/// Forests over the alphabet `1..=alphabet` with the BCK coproduct.
#[derive(Clone, Debug)]
pub struct BckHopf {
    pub alphabet: u32,
}

impl GradedHopf for BckHopf {
    type B = Forest;

    fn name(&self) -> String {
        format!("bck(d={})", self.alphabet)
    }

    fn unit(&self) -> Forest {
        Forest::unit()
    }

    fn basis(&self, n: usize) -> Vec<Forest> {
        Enumerator::new(self.alphabet).forests(n).to_vec()
    }

    fn coproduct(&self, x: &Forest) -> Tensor2<Forest, Forest> {
        crate::bck::coproduct_forest(x)
    }

    fn mul(&self, a: &Forest, b: &Forest) -> Forest {
        a.mul(b)
    }
}

/// Forests of populated multi-indices with `Δ^M`.
#[derive(Clone, Debug, Default)]
pub struct MindexHopf;

impl GradedHopf for MindexHopf {
    type B = MultiIndexForest;

    fn name(&self) -> String {
        "mindex".to_string()
    }

    fn unit(&self) -> MultiIndexForest {
        MultiIndexForest::unit()
    }

    fn basis(&self, n: usize) -> Vec<MultiIndexForest> {
        basis_m(n)
    }

    fn coproduct(&self, x: &MultiIndexForest) -> Tensor2<MultiIndexForest, MultiIndexForest> {
        coproduct_forest_m(x).expect("basis elements are populated")
    }

    fn mul(&self, a: &MultiIndexForest, b: &MultiIndexForest) -> MultiIndexForest {
        a.mul(b)
    }
}

/// Per-degree summary, also the machine-readable report format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    /// Degree of the target space, `d + 1` for inputs of degree `d`.
    pub degree: usize,
    pub num_unknowns: usize,
    pub num_equations: usize,
    pub solution_dim: usize,
    pub unit_coeff_forced_zero: bool,
}

/// Solution set `particular + span(kernel_basis)` of one step's system.
#[derive(Clone, Debug)]
pub struct AffineSolutionSet {
    pub particular: Vec<Rational>,
    pub kernel_basis: Vec<Vec<Rational>>,
    pub parameter_names: Vec<String>,
}

/// Everything assembled and solved at one degree.
#[derive(Clone, Debug)]
pub struct DegreeStep {
    pub report: DegreeReport,
    /// Columns: new unknowns first, then the parameters carried in.
    pub column_labels: Vec<String>,
    pub row_labels: Vec<String>,
    pub matrix: RationalMatrix,
    pub solutions: AffineSolutionSet,
}

/// Values of `L` as linear forms in the surviving parameters.
#[derive(Clone, Debug)]
pub struct LinearFamily<B: Ord> {
    pub num_params: usize,
    pub values: BTreeMap<B, BTreeMap<B, Vec<Rational>>>,
}

impl<B: Basis + Display> LinearFamily<B> {
    /// `L` at the parameter point `theta`.
    pub fn instantiate(&self, theta: &[Rational]) -> BTreeMap<B, GradedVector<B>> {
        self.values
            .iter()
            .map(|(x, ys)| {
                let v = ys
                    .iter()
                    .map(|(y, row)| (y.clone(), row.iter().zip(theta).fold(Rational::zero(), |acc, (a, b)| acc + a * b)))
                    .collect();
                (x.clone(), v)
            })
            .collect()
    }

    /// A parameter point where some coefficient of `L(unit)` equals one.
    pub fn unit_direction(&self, unit: &B) -> Option<Vec<Rational>> {
        let rows = self.values.get(unit)?;
        for row in rows.values() {
            if let Some(i) = row.iter().position(|x| !x.is_zero()) {
                let mut theta = vec![Rational::zero(); self.num_params];
                theta[i] = Rational::one() / &row[i];
                return Some(theta);
            }
        }
        None
    }

    fn unit_forced_zero(&self, unit: &B) -> bool {
        self.values.get(unit).map_or(true, |rows| rows.values().all(|r| r.iter().all(Zero::is_zero)))
    }

    /// Human-readable listing of the family.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (x, ys) in &self.values {
            let mut terms = Vec::new();
            for (y, row) in ys {
                let form = linear_form(row);
                if form != "0" {
                    terms.push(format!("({}) {}", form, y));
                }
            }
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            let _ = writeln!(s, "L({}) = {}", x, rhs);
        }
        s
    }
}

fn linear_form(row: &[Rational]) -> String {
    let v: GradedVector<usize> = row.iter().enumerate().map(|(i, c)| (i, c.clone())).collect();
    let mut s = String::new();
    crate::algebra::write_terms(&mut s, v.iter(), |i| format!("t{}", i)).expect("string write");
    s
}

/// A combination of equations whose sum reads `(coefficient of L(unit)) = 0`.
#[derive(Clone, Debug)]
pub struct ObstructionWitness {
    pub degree: usize,
    /// The forced coefficient: `L(unit)` on this basis element.
    pub target: String,
    /// The forced coefficient as a linear form in the parameters entering
    /// the obstructing degree.
    pub unit_form: Vec<Rational>,
    pub combination: Vec<(String, Rational)>,
    /// One multiplier per equation row of the obstructing degree.
    pub multipliers: Vec<Rational>,
}

impl ObstructionWitness {
    /// Recomputes `yᵀM` and checks it vanishes on the new unknowns and
    /// equals the unit-coefficient form on the parameters.
    pub fn verify(&self, step: &DegreeStep) -> bool {
        let n_new = step.report.num_unknowns;
        let Ok(combined) = step.matrix.transpose().mul_vec(&self.multipliers) else {
            return false;
        };
        combined[..n_new].iter().all(Zero::is_zero) && combined[n_new..] == self.unit_form[..]
    }
}

/// Outcome of [`cocycle_solve`].
#[derive(Clone, Debug)]
pub struct CocycleSolution<B: Ord> {
    pub algebra: String,
    pub max_degree: usize,
    pub steps: Vec<DegreeStep>,
    pub family: LinearFamily<B>,
    /// Whether a solution with `L(unit) ≠ 0` survives up to `max_degree`.
    pub unit_survives: bool,
    /// First target degree at which `L(unit)` is forced to vanish.
    pub obstruction_degree: Option<usize>,
    pub witness: Option<ObstructionWitness>,
}

impl<B: Ord> CocycleSolution<B> {
    pub fn reports(&self) -> Vec<DegreeReport> {
        self.steps.iter().map(|s| s.report.clone()).collect()
    }

    /// The step at which the obstruction appears.
    pub fn obstruction_step(&self) -> Option<&DegreeStep> {
        self.obstruction_degree.map(|d| &self.steps[d - 1])
    }

    pub fn verdict(&self) -> String {
        match self.obstruction_degree {
            Some(d) => format!("L(unit) forced to 0; obstruction at degree {}", d),
            None => format!("L(unit) != 0 remains feasible up to degree {}", self.max_degree),
        }
    }
}

type RowKey<B> = (B, B, B);

/// Solves the cocycle equation for target degrees `1..=max_degree`.
pub fn cocycle_solve<H: GradedHopf>(h: &H, max_degree: usize) -> CocycleSolution<H::B> {
    let unit = h.unit();
    let mut family: LinearFamily<H::B> = LinearFamily { num_params: 0, values: BTreeMap::new() };
    let mut steps = Vec::new();
    let mut obstruction_degree = None;
    let mut witness = None;

    for d in 0..max_degree {
        let inputs = h.basis(d);
        let outputs = h.basis(d + 1);
        let n_new = inputs.len() * outputs.len();
        let params = family.num_params;
        let col = |xi: usize, yi: usize| xi * outputs.len() + yi;
        let out_coproducts: Vec<_> = outputs.iter().map(|y| h.coproduct(y)).collect();

        let mut rows: BTreeMap<RowKey<H::B>, BTreeMap<usize, Rational>> = BTreeMap::new();
        let mut add = |key: RowKey<H::B>, c: usize, v: Rational| {
            let e = rows.entry(key).or_default().entry(c).or_insert_with(Rational::zero);
            *e += v;
        };
        for (xi, x) in inputs.iter().enumerate() {
            for (yi, y) in outputs.iter().enumerate() {
                for ((l, r), c) in out_coproducts[yi].iter() {
                    add((x.clone(), l.clone(), r.clone()), col(xi, yi), c.clone());
                }
                add((x.clone(), y.clone(), unit.clone()), col(xi, yi), -Rational::one());
            }
            for ((x1, x2), c) in h.coproduct(x).iter() {
                if x2 == x {
                    for (yi, y) in outputs.iter().enumerate() {
                        add((x.clone(), x1.clone(), y.clone()), col(xi, yi), -c.clone());
                    }
                } else if let Some(ys) = family.values.get(x2) {
                    for (y, prow) in ys {
                        for (j, p) in prow.iter().enumerate() {
                            if !p.is_zero() {
                                add((x.clone(), x1.clone(), y.clone()), n_new + j, -(c * p));
                            }
                        }
                    }
                }
            }
        }

        let mut matrix = RationalMatrix::zeros(0, n_new + params);
        let mut row_labels = Vec::new();
        for ((x, l, r), entries) in rows {
            let entries: Vec<_> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if entries.is_empty() {
                continue;
            }
            row_labels.push(format!("x = {}: coefficient of {} (x) {}", x, l, r));
            matrix.push_sparse(entries);
        }
        let kernel = matrix.kernel();
        let k = kernel.len();

        let mut column_labels = Vec::with_capacity(n_new + params);
        for x in &inputs {
            for y in &outputs {
                column_labels.push(format!("L({})[{}]", x, y));
            }
        }
        column_labels.extend((0..params).map(|j| format!("t{}", j)));

        let was_forced = family.unit_forced_zero(&unit);
        let old_unit_form: Option<Vec<Rational>> = family
            .values
            .get(&unit)
            .and_then(|rows| rows.values().find(|r| r.iter().any(|x| !x.is_zero())).cloned());
        let old_unit_target: Option<String> = family
            .values
            .get(&unit)
            .and_then(|rows| rows.iter().find(|(_, r)| r.iter().any(|x| !x.is_zero())).map(|(y, _)| y.to_string()));

        let mut values = BTreeMap::new();
        for (x, ys) in &family.values {
            let mut nys = BTreeMap::new();
            for (y, row) in ys {
                let nrow: Vec<Rational> = kernel
                    .iter()
                    .map(|kv| row.iter().enumerate().fold(Rational::zero(), |acc, (j, p)| acc + p * &kv[n_new + j]))
                    .collect();
                nys.insert(y.clone(), nrow);
            }
            values.insert(x.clone(), nys);
        }
        for (xi, x) in inputs.iter().enumerate() {
            let mut nys = BTreeMap::new();
            for (yi, y) in outputs.iter().enumerate() {
                nys.insert(y.clone(), kernel.iter().map(|kv| kv[col(xi, yi)].clone()).collect());
            }
            values.insert(x.clone(), nys);
        }
        family = LinearFamily { num_params: k, values };
        let forced = family.unit_forced_zero(&unit);

        if forced && !was_forced && obstruction_degree.is_none() {
            obstruction_degree = Some(d + 1);
            if let (Some(p), Some(target)) = (old_unit_form, old_unit_target) {
                let mut rhs = vec![Rational::zero(); n_new + params];
                rhs[n_new..].clone_from_slice(&p);
                if let Ok(Some(y)) = matrix.transpose().solve(&rhs) {
                    let combination = y
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (row_labels[i].clone(), c.clone()))
                        .collect();
                    witness = Some(ObstructionWitness {
                        degree: d + 1,
                        target,
                        unit_form: p,
                        combination,
                        multipliers: y,
                    });
                }
            }
        }

        let parameter_names = (0..k).map(|i| format!("t{}", i)).collect();
        steps.push(DegreeStep {
            report: DegreeReport {
                degree: d + 1,
                num_unknowns: n_new,
                num_equations: matrix.rows(),
                solution_dim: k,
                unit_coeff_forced_zero: forced,
            },
            column_labels,
            row_labels,
            solutions: AffineSolutionSet {
                particular: vec![Rational::zero(); n_new + params],
                kernel_basis: kernel,
                parameter_names,
            },
            matrix,
        });
    }

    let unit_survives = !family.unit_forced_zero(&unit);
    CocycleSolution {
        algebra: h.name(),
        max_degree,
        steps,
        family,
        unit_survives,
        obstruction_degree,
        witness,
    }
}

/// Renders the certificate: per-degree table, verdict, and either the
/// obstruction witness or the final parameter family.
pub fn certificate<B: Basis + Display>(sol: &CocycleSolution<B>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algebra: {}", sol.algebra);
    let _ = writeln!(s, "max degree: {}", sol.max_degree);
    let _ = writeln!(s, "degree  unknowns  equations  solution_dim  unit_forced_zero");
    for st in &sol.steps {
        let r = &st.report;
        let _ = writeln!(
            s,
            "{:>6}  {:>8}  {:>9}  {:>12}  {}",
            r.degree, r.num_unknowns, r.num_equations, r.solution_dim, r.unit_coeff_forced_zero
        );
    }
    let _ = writeln!(s, "verdict: {}", sol.verdict());
    match &sol.witness {
        Some(w) => {
            let _ = writeln!(
                s,
                "obstruction witness at degree {}: the combination below of the degree-{} equations,",
                w.degree, w.degree
            );
            let _ = writeln!(
                s,
                "written in the unknowns and parameters, reduces to ({}) = 0, where the left side is the coefficient of {} in L(unit).",
                linear_form(&w.unit_form),
                w.target
            );
            for (label, c) in &w.combination {
                let _ = writeln!(s, "  {:>8} * [{}]", c.to_string(), label);
            }
        }
        None => {
            let _ = writeln!(s, "final family ({} parameters):", sol.family.num_params);
            s.push_str(&sol.family.describe());
        }
    }
    s
}

/// Result of checking the cocycle identity.
#[derive(Clone, Debug)]
pub struct CocycleCheck<B: Ord> {
    pub holds: bool,
    /// First basis element where it fails, with `ΔL(x) − (id⊗L)Δx − L(x)⊗1`.
    pub counterexample: Option<(B, Tensor2<B, B>)>,
}

/// Checks `ΔL(x) = (id⊗L)Δx + L(x)⊗1` on every basis element of degree ≤ `n`.
pub fn verify_cocycle<H: GradedHopf>(
    h: &H,
    l: &dyn Fn(&H::B) -> GradedVector<H::B>,
    n: usize,
) -> CocycleCheck<H::B> {
    let unit = h.unit();
    for d in 0..=n {
        for x in h.basis(d) {
            let lx = l(&x);
            let mut defect: Tensor2<H::B, H::B> = Tensor2::zero();
            for (y, c) in lx.iter() {
                defect.add_scaled(&h.coproduct(y), c);
                defect.add_term((y.clone(), unit.clone()), -c.clone());
            }
            for ((x1, x2), c) in h.coproduct(&x).iter() {
                for (y, e) in l(x2).iter() {
                    defect.add_term((x1.clone(), y.clone()), -(c * e));
                }
            }
            if !defect.is_zero() {
                return CocycleCheck { holds: false, counterexample: Some((x, defect)) };
            }
        }
    }
    CocycleCheck { holds: true, counterexample: None }
}

/// The morphism `Λ` determined by `Λ(B⁺_α f) = L_α(Λ f)`, multiplicative on
/// forests, `Λ(1) = unit`.
pub fn lambda_from_cocycle<H: GradedHopf>(
    h: &H,
    l: &dyn Fn(u32, &H::B) -> GradedVector<H::B>,
    f: &Forest,
) -> GradedVector<H::B> {
    f.trees().iter().fold(GradedVector::basis(h.unit()), |acc, t| {
        let lt = lambda_tree(h, l, t);
        acc.bilinear(&lt, |a, b| GradedVector::basis(h.mul(a, b)))
    })
}

fn lambda_tree<H: GradedHopf>(h: &H, l: &dyn Fn(u32, &H::B) -> GradedVector<H::B>, t: &Tree) -> GradedVector<H::B> {
    lambda_from_cocycle(h, l, &t.branches()).map_linear(|x| l(t.label(), x))
}

impl fmt::Display for DegreeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "degree {}: {} unknowns, {} equations, solution dim {}, unit forced zero: {}",
            self.degree, self.num_unknowns, self.num_equations, self.solution_dim, self.unit_coeff_forced_zero
        )
    }
}
