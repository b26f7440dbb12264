//! Embedded reference data for the multi-index coproduct at degree ≤ 4 and
//! the checks that regenerate it.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{format_tensor, GradedVector, Rational};
use crate::error::{Error, Result};
use crate::linalg::{in_span, intersect_spans, span_equal, RationalMatrix};
use crate::mindex::{
    basis_m, parse_melement, parse_mindex, parse_mtensor, reduced_component, reduced_coproduct, MElement,
    MTensor, MultiIndexForest, Notation,
};

const TABLES: &str = include_str!("../data/tables.txt");
const DEGREE4: &str = include_str!("../data/degree4.txt");

/// One listed component `Δ̄_{m,n}(x)` of the reference tables.
#[derive(Clone, Debug)]
pub struct TableEntry {
    /// The row label in the compact letter notation.
    pub label: String,
    pub element: MultiIndexForest,
    pub m: usize,
    pub n: usize,
    pub expected: MTensor,
}

/// A regenerated table entry next to its reference value.
#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub entry: TableEntry,
    pub computed: MTensor,
}

impl EntryCheck {
    pub fn matches(&self) -> bool {
        self.computed == self.entry.expected
    }

    /// The part of the computed value absent from the reference.
    pub fn difference(&self) -> MTensor {
        self.computed.clone() - self.entry.expected.clone()
    }
}

fn data_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn bad(line: usize, msg: &str) -> Error {
    Error::Internal(format!("reference data line {}: {}", line + 1, msg))
}

/// The reference table entries, in file order.
pub fn table_entries() -> Result<Vec<TableEntry>> {
    let mut out = Vec::new();
    let mut row: Option<(String, MultiIndexForest)> = None;
    for (i, line) in data_lines(TABLES) {
        if let Some(rest) = line.strip_prefix("row ") {
            let (label, explicit) = rest.split_once('=').ok_or_else(|| bad(i, "expected '='"))?;
            row = Some((label.trim().to_string(), parse_mindex(explicit, Notation::Explicit)?));
            continue;
        }
        let (label, element) = row.clone().ok_or_else(|| bad(i, "component before any row"))?;
        let (mn, value) = line.trim().split_once(':').ok_or_else(|| bad(i, "expected ':'"))?;
        let (m, n) = mn.split_once(',').ok_or_else(|| bad(i, "expected 'm,n'"))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(i, "bad component index"));
        out.push(TableEntry {
            label,
            element,
            m: parse(m)?,
            n: parse(n)?,
            expected: parse_mtensor(value, Notation::Explicit)?,
        });
    }
    Ok(out)
}

/// Regenerates every reference table entry.
pub fn check_tables() -> Result<Vec<EntryCheck>> {
    table_entries()?
        .into_iter()
        .map(|entry| {
            let computed = reduced_component(entry.m, entry.n, &GradedVector::basis(entry.element.clone()))?;
            Ok(EntryCheck { entry, computed })
        })
        .collect()
}

/// Per-entry report lines, `ok` or `MISMATCH` with both values.
pub fn table_report(checks: &[EntryCheck]) -> String {
    let mut s = String::new();
    for c in checks {
        let e = &c.entry;
        if c.matches() {
            s.push_str(&format!("ok        {} [{}] {},{}: {}\n", e.label, e.element, e.m, e.n, format_tensor(&c.computed)));
        } else {
            s.push_str(&format!(
                "MISMATCH  {} [{}] {},{}\n  reference: {}\n  computed:  {}\n",
                e.label,
                e.element,
                e.m,
                e.n,
                format_tensor(&e.expected),
                format_tensor(&c.computed)
            ));
        }
    }
    s
}

/// Named elements and tensors from the degree-4 data file.
#[derive(Clone, Debug, Default)]
pub struct Degree4Data {
    pub elements: BTreeMap<String, MElement>,
    pub tensors: BTreeMap<String, MTensor>,
}

pub fn degree4_data() -> Result<Degree4Data> {
    let mut d = Degree4Data::default();
    for (i, line) in data_lines(DEGREE4) {
        let (name, value) = line.split_once('=').ok_or_else(|| bad(i, "expected '='"))?;
        let name = name.trim().to_string();
        if value.contains("(x)") || name.starts_with("dbar_") {
            d.tensors.insert(name, parse_mtensor(value, Notation::Explicit)?);
        } else {
            d.elements.insert(name, parse_melement(value, Notation::Explicit)?);
        }
    }
    Ok(d)
}

/// Matrix of `Δ̄_{m,n}` on the degree-`m + n` basis: one column per basis
/// element, one row per tensor appearing in some image.
pub fn component_matrix(m: usize, n: usize) -> Result<(RationalMatrix, Vec<MultiIndexForest>)> {
    let domain = basis_m(m + n);
    let images: Vec<MTensor> = domain
        .iter()
        .map(|x| reduced_component(m, n, &GradedVector::basis(x.clone())))
        .collect::<Result<_>>()?;
    let mut rows: BTreeMap<(MultiIndexForest, MultiIndexForest), Vec<(usize, Rational)>> = BTreeMap::new();
    for (j, img) in images.iter().enumerate() {
        for (key, c) in img.iter() {
            rows.entry(key.clone()).or_default().push((j, c.clone()));
        }
    }
    let mut mat = RationalMatrix::zeros(0, domain.len());
    for entries in rows.into_values() {
        mat.push_sparse(entries);
    }
    Ok((mat, domain))
}

/// Coordinates of `x` in the degree-`basis` ordering.
pub fn coordinates(x: &MElement, basis: &[MultiIndexForest]) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); basis.len()];
    for (b, c) in x.iter() {
        let i = basis
            .iter()
            .position(|y| y == b)
            .ok_or_else(|| Error::Dimension(format!("{} is not in the basis", b)))?;
        v[i] = c.clone();
    }
    Ok(v)
}

pub fn from_coordinates(v: &[Rational], basis: &[MultiIndexForest]) -> MElement {
    basis.iter().cloned().zip(v.iter().cloned()).collect()
}

/// A displayed reduced coproduct next to the recomputed one.
#[derive(Clone, Debug)]
pub struct DisplayCheck {
    pub name: String,
    pub expected: MTensor,
    pub computed: MTensor,
}

impl DisplayCheck {
    pub fn matches(&self) -> bool {
        self.expected == self.computed
    }
}

/// Comparison of the computed degree-4 kernels against the named vectors.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub basis: Vec<MultiIndexForest>,
    pub ker31: Vec<Vec<Rational>>,
    pub ker31_span_equal: bool,
    /// Names among `v1..v4` lying outside the computed kernel.
    pub ker31_outside: Vec<String>,
    pub intersection: Vec<Vec<Rational>>,
    pub intersection_span_equal: bool,
    /// Names among `w1, w2` lying outside the computed intersection.
    pub intersection_outside: Vec<String>,
    pub displays: Vec<DisplayCheck>,
}

impl KernelReport {
    pub fn all_match(&self) -> bool {
        self.ker31.len() == 4
            && self.ker31_span_equal
            && self.intersection.len() == 2
            && self.intersection_span_equal
            && self.displays.iter().all(DisplayCheck::matches)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let show = |vs: &[Vec<Rational>]| -> String {
            vs.iter().map(|v| format!("  {}\n", from_coordinates(v, &self.basis))).collect()
        };
        s.push_str(&format!("ker(reduced 3,1) at degree 4: dim {}\n", self.ker31.len()));
        s.push_str(&show(&self.ker31));
        s.push_str(&format!(
            "span-equal to v1..v4: {}{}\n",
            self.ker31_span_equal,
            outside(&self.ker31_outside)
        ));
        s.push_str(&format!("ker(reduced 2,2) & ker(reduced 3,1): dim {}\n", self.intersection.len()));
        s.push_str(&show(&self.intersection));
        s.push_str(&format!(
            "span-equal to w1, w2: {}{}\n",
            self.intersection_span_equal,
            outside(&self.intersection_outside)
        ));
        for d in &self.displays {
            if d.matches() {
                s.push_str(&format!("ok        reduced coproduct of {}: {}\n", d.name, format_tensor(&d.computed)));
            } else {
                s.push_str(&format!(
                    "MISMATCH  reduced coproduct of {}\n  reference: {}\n  computed:  {}\n",
                    d.name,
                    format_tensor(&d.expected),
                    format_tensor(&d.computed)
                ));
            }
        }
        s
    }
}

fn outside(names: &[String]) -> String {
    if names.is_empty() {
        String::new()
    } else {
        format!(" (outside: {})", names.join(", "))
    }
}

/// Recomputes the degree-4 kernels and the displayed reduced coproducts.
pub fn check_kernels() -> Result<KernelReport> {
    let data = degree4_data()?;
    let (m31, basis) = component_matrix(3, 1)?;
    let (m22, _) = component_matrix(2, 2)?;
    let dim = basis.len();
    let ker31 = crate::linalg::span_basis(&m31.kernel(), dim)?;
    let intersection = intersect_spans(&ker31, &m22.kernel(), dim)?;

    let named = |names: &[&str]| -> Result<Vec<(String, Vec<Rational>)>> {
        names
            .iter()
            .map(|n| {
                let x = data.elements.get(*n).ok_or_else(|| Error::Internal(format!("missing {}", n)))?;
                Ok((n.to_string(), coordinates(x, &basis)?))
            })
            .collect()
    };
    let vs = named(&["v1", "v2", "v3", "v4"])?;
    let ws = named(&["w1", "w2"])?;
    let vecs = |xs: &[(String, Vec<Rational>)]| xs.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>();
    let outside_of = |xs: &[(String, Vec<Rational>)], span: &[Vec<Rational>]| -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (n, v) in xs {
            if !in_span(v, span, dim)? {
                out.push(n.clone());
            }
        }
        Ok(out)
    };

    let mut displays = Vec::new();
    for name in ["w1", "w2", "nu_mu", "nu_lambda"] {
        let x = &data.elements[name];
        let expected = data
            .tensors
            .get(&format!("dbar_{}", name))
            .cloned()
            .ok_or_else(|| Error::Internal(format!("missing dbar_{}", name)))?;
        displays.push(DisplayCheck { name: name.to_string(), expected, computed: reduced_coproduct(x)? });
    }

    Ok(KernelReport {
        ker31_span_equal: span_equal(&ker31, &vecs(&vs), dim)?,
        ker31_outside: outside_of(&vs, &ker31)?,
        intersection_span_equal: span_equal(&intersection, &vecs(&ws), dim)?,
        intersection_outside: outside_of(&ws, &intersection)?,
        basis,
        ker31,
        intersection,
        displays,
    })
}
