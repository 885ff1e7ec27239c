//! Certified maximisation of a multilinear objective over a box with linear
//! constraints, by exhaustive evaluation on a uniform grid.
//!
//! Free variables range over `[0, B]`; the grid has the `R + 1` points `k B / R`
//! per axis. Symbols are affine in the free variables with integer coefficients
//! and offsets that are integer multiples of `B`, so in units of the step
//! `h = B / R` every symbol, constraint left-hand side and objective value is an
//! integer and the search is exact.
//!
//! Soundness: any feasible point lies within `h/2` per coordinate of a grid
//! point, which violates a constraint with free-variable coefficients `a` by at
//! most `|a|_1 / 2` steps. With at least that much slack the grid point is
//! sampled, and the mean value theorem bounds the objective gap by
//! `sum_u L_u h / 2`, where `L_u` bounds the `u`-th partial over the box.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, parse_rational, ratio, Rational};

/// Evaluation budget per search.
pub const MAX_EVALUATIONS: u128 = 1_000_000_000;

/// The partial-derivative bound quoted for the program, 2.52.
pub fn quoted_derivative_bound() -> Rational {
    ratio(63, 25)
}

pub fn default_box() -> Rational {
    ratio(21, 100)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(String, i64)>,
    pub sense: Sense,
    pub bound: Rational,
}

/// `offset * B + sum coeff * var` over free variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Affine {
    pub offset: i64,
    pub terms: Vec<(String, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridProblem {
    pub name: String,
    pub box_bound: Rational,
    free: Vec<String>,
    symbols: Vec<(String, Affine)>,
    constraints: Vec<LinearConstraint>,
    objective: Vec<Vec<String>>,
}

impl GridProblem {
    /// A problem whose free variables are also symbols of the same name.
    pub fn new(name: impl Into<String>, box_bound: Rational, free: &[&str]) -> Result<Self> {
        if !box_bound.is_positive() {
            return Err(Error::InvalidSpec("box bound must be positive".into()));
        }
        let mut p = GridProblem {
            name: name.into(),
            box_bound,
            free: Vec::new(),
            symbols: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
        };
        for &v in free {
            if p.symbol_index(v).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate variable `{v}`")));
            }
            p.free.push(v.to_string());
            p.symbols.push((
                v.to_string(),
                Affine {
                    offset: 0,
                    terms: vec![(v.to_string(), 1)],
                },
            ));
        }
        Ok(p)
    }

    pub fn define(&mut self, name: &str, value: Affine) -> Result<()> {
        if self.symbol_index(name).is_some() {
            return Err(Error::InvalidSpec(format!("symbol `{name}` defined twice")));
        }
        for (v, _) in &value.terms {
            if !self.free.contains(v) {
                return Err(Error::InvalidSpec(format!(
                    "symbol `{name}` uses `{v}`, which is not a free variable"
                )));
            }
        }
        self.symbols.push((name.to_string(), value));
        Ok(())
    }

    pub fn constrain(&mut self, c: LinearConstraint) -> Result<()> {
        for (s, _) in &c.terms {
            self.require_symbol(s)?;
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn add_monomial(&mut self, factors: &[&str]) -> Result<()> {
        for s in factors {
            self.require_symbol(s)?;
        }
        if let Some(first) = self.objective.first() {
            if first.len() != factors.len() {
                return Err(Error::InvalidSpec(
                    "objective monomials must share one degree".into(),
                ));
            }
        }
        self.objective
            .push(factors.iter().map(|s| s.to_string()).collect());
        Ok(())
    }

    fn require_symbol(&self, s: &str) -> Result<usize> {
        self.symbol_index(s)
            .ok_or_else(|| Error::InvalidSpec(format!("undeclared symbol `{s}`")))
    }

    fn symbol_index(&self, s: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == s)
    }

    pub fn free(&self) -> &[String] {
        &self.free
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[Vec<String>] {
        &self.objective
    }

    pub fn symbol_names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|(n, _)| n.as_str())
    }

    fn check_point(&self, point: &[Rational]) -> Result<()> {
        if point.len() != self.free.len() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, problem has {} free variables",
                point.len(),
                self.free.len()
            )));
        }
        Ok(())
    }

    /// Symbol values at a point given in free-variable order.
    pub fn symbol_values(&self, point: &[Rational]) -> Result<Vec<(String, Rational)>> {
        self.check_point(point)?;
        Ok(self
            .symbols
            .iter()
            .map(|(name, a)| {
                let mut v = int(a.offset) * &self.box_bound;
                for (var, c) in &a.terms {
                    let i = self.free.iter().position(|f| f == var).expect("checked");
                    v += int(*c) * &point[i];
                }
                (name.clone(), v)
            })
            .collect())
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let values: BTreeMap<String, Rational> = self.symbol_values(point)?.into_iter().collect();
        Ok(self
            .objective
            .iter()
            .map(|m| m.iter().fold(int(1), |acc, s| acc * &values[s]))
            .sum())
    }

    /// Exact feasibility: inside the box and every constraint satisfied.
    pub fn is_feasible(&self, point: &[Rational]) -> Result<bool> {
        self.check_point(point)?;
        if point
            .iter()
            .any(|x| x.is_negative() || *x > self.box_bound)
        {
            return Ok(false);
        }
        let values: BTreeMap<String, Rational> = self.symbol_values(point)?.into_iter().collect();
        Ok(self.constraints.iter().all(|c| {
            let lhs: Rational = c.terms.iter().map(|(s, a)| int(*a) * &values[s]).sum();
            match c.sense {
                Sense::Le => lhs <= c.bound,
                Sense::Ge => lhs >= c.bound,
            }
        }))
    }

    /// Free-variable coefficients of every constraint after substitution.
    fn constraint_coefficients(&self) -> Vec<(Vec<i64>, i64)> {
        self.constraints
            .iter()
            .map(|c| {
                let mut coef = vec![0i64; self.free.len()];
                let mut offset = 0i64;
                for (s, a) in &c.terms {
                    let (_, aff) = &self.symbols[self.symbol_index(s).expect("validated")];
                    offset += a * aff.offset;
                    for (var, b) in &aff.terms {
                        coef[self.free.iter().position(|f| f == var).expect("validated")] += a * b;
                    }
                }
                (coef, offset)
            })
            .collect()
    }

    fn symbol_coefficients(&self, s: usize) -> Vec<i64> {
        let mut coef = vec![0i64; self.free.len()];
        for (var, b) in &self.symbols[s].1.terms {
            coef[self.free.iter().position(|f| f == var).expect("validated")] += b;
        }
        coef
    }

    /// Sound slack per constraint in grid steps: half the 1-norm of its
    /// free-variable coefficients.
    pub fn required_slack(&self) -> Vec<Rational> {
        self.constraint_coefficients()
            .iter()
            .map(|(coef, _)| ratio(coef.iter().map(|a| a.abs()).sum::<i64>(), 2))
            .collect()
    }

    /// Largest `|value|` of each symbol over the box.
    fn symbol_magnitudes(&self) -> Vec<Rational> {
        (0..self.symbols.len())
            .map(|s| {
                let off = self.symbols[s].1.offset;
                let coef = self.symbol_coefficients(s);
                let hi = off + coef.iter().filter(|&&c| c > 0).sum::<i64>();
                let lo = off + coef.iter().filter(|&&c| c < 0).sum::<i64>();
                int(hi.abs().max(lo.abs())) * &self.box_bound
            })
            .collect()
    }

    /// Per free variable, a bound on the absolute partial derivative over the
    /// box: every occurrence of a symbol contributes `|coefficient|` times the
    /// product of the other factors' magnitude bounds.
    pub fn derivative_bounds(&self) -> Vec<Rational> {
        let mags = self.symbol_magnitudes();
        let coefs: Vec<Vec<i64>> = (0..self.symbols.len())
            .map(|s| self.symbol_coefficients(s))
            .collect();
        let mono: Vec<Vec<usize>> = self
            .objective
            .iter()
            .map(|m| m.iter().map(|s| self.symbol_index(s).expect("validated")).collect())
            .collect();
        (0..self.free.len())
            .map(|u| {
                let mut total = Rational::zero();
                for m in &mono {
                    for (k, &w) in m.iter().enumerate() {
                        let a = coefs[w][u].abs();
                        if a == 0 {
                            continue;
                        }
                        let rest = m
                            .iter()
                            .enumerate()
                            .filter(|&(l, _)| l != k)
                            .fold(int(1), |acc, (_, &x)| acc * &mags[x]);
                        total += int(a) * rest;
                    }
                }
                total
            })
            .collect()
    }
}

fn sym(kind: char, j: usize) -> String {
    format!("{kind}{}", (j - 1) % 5 + 1)
}

fn add_program_constraints(p: &mut GridProblem) -> Result<()> {
    let b = p.box_bound.clone();
    for j in 1..=5 {
        p.constrain(LinearConstraint {
            name: format!("cap{j}"),
            terms: vec![(sym('i', j), 1), (sym('o', j), 1), (sym('n', j), 1)],
            sense: Sense::Le,
            bound: b.clone(),
        })?;
    }
    for j in 1..=5 {
        let names = [
            sym('o', j),
            sym('i', j),
            sym('n', j + 1),
            sym('i', j + 1),
            sym('i', j + 2),
            sym('o', j + 2),
            sym('i', j + 3),
            sym('o', j + 3),
            sym('n', j + 4),
            sym('o', j + 4),
        ];
        p.constrain(LinearConstraint {
            name: format!("floor{j}"),
            terms: names.into_iter().map(|s| (s, 1)).collect(),
            sense: Sense::Ge,
            bound: ratio(17, 100),
        })?;
    }
    for kind in ['i', 'o', 'n'] {
        for j in 1..=5 {
            p.constrain(LinearConstraint {
                name: format!("nonneg_{}", sym(kind, j)),
                terms: vec![(sym(kind, j), 1)],
                sense: Sense::Ge,
                bound: Rational::zero(),
            })?;
        }
    }
    for j in 1..=5 {
        let terms = [
            [sym('o', j), sym('n', j + 1), sym('n', j + 2)],
            [sym('i', j), sym('o', j + 2), sym('n', j + 3)],
            [sym('n', j), sym('i', j + 1), sym('o', j + 3)],
            [sym('n', j), sym('n', j + 1), sym('i', j + 3)],
        ];
        for t in &terms {
            p.add_monomial(&[&t[0], &t[1], &t[2]])?;
        }
    }
    Ok(())
}

/// The full program over `i_j, o_j, n_j` (`j` in 1..=5, indices mod 5): each
/// class share is capped at 0.21 and every weighted neighbourhood sum is at
/// least 0.17.
pub fn standard_problem() -> GridProblem {
    let names: Vec<String> = ['i', 'o', 'n']
        .iter()
        .flat_map(|&k| (1..=5).map(move |j| sym(k, j)))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut p = GridProblem::new("standard", default_box(), &refs).expect("fixed names");
    add_program_constraints(&mut p).expect("fixed program");
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseDefinition {
    pub id: u32,
    pub free: Vec<String>,
    pub zero: Vec<String>,
}

const BUILTIN_CASES: &str = include_str!("../data/cases.txt");

pub fn builtin_cases() -> Vec<CaseDefinition> {
    parse_cases(BUILTIN_CASES).expect("bundled case file is valid")
}

/// Parses blocks `case <id>`, `free: <vars>`, `zero: <vars>`; together the two
/// lists must cover every `i_j` and `o_j` exactly once.
pub fn parse_cases(text: &str) -> Result<Vec<CaseDefinition>> {
    let mut cases: Vec<CaseDefinition> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(id) = line.strip_prefix("case") {
            let id: u32 = id
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad case id in `{line}`")))?;
            if cases.iter().any(|c| c.id == id) {
                return Err(Error::parse(line_no, format!("case {id} defined twice")));
            }
            cases.push(CaseDefinition {
                id,
                free: Vec::new(),
                zero: Vec::new(),
            });
            continue;
        }
        let current = cases
            .last_mut()
            .ok_or_else(|| Error::parse(line_no, "variable list before any `case` line"))?;
        let (key, vars) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, format!("expected `free:` or `zero:`, got `{line}`")))?;
        let vars: Vec<String> = vars.split_whitespace().map(str::to_string).collect();
        match key.trim() {
            "free" => current.free.extend(vars),
            "zero" => current.zero.extend(vars),
            other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
        }
    }
    let expected: Vec<String> = ['i', 'o']
        .iter()
        .flat_map(|&k| (1..=5).map(move |j| sym(k, j)))
        .collect();
    for c in &cases {
        let mut all: Vec<&String> = c.free.iter().chain(&c.zero).collect();
        all.sort();
        let mut want: Vec<&String> = expected.iter().collect();
        want.sort();
        if all != want {
            return Err(Error::parse(
                0,
                format!("case {} must list each of i1..i5, o1..o5 exactly once", c.id),
            ));
        }
    }
    Ok(cases)
}

/// The program restricted to one neighbourhood pattern: listed arcs are free,
/// the others are zero, and `n_j = B - i_j - o_j` (raising a non-neighbour
/// share never lowers the objective nor breaks a lower-bound constraint, so the
/// cap may be taken as tight).
pub fn restricted_case(id: u32) -> Result<GridProblem> {
    let case = builtin_cases()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(format!("no case {id} (expected 1..=4)")))?;
    restricted_problem(&case)
}

pub fn restricted_problem(case: &CaseDefinition) -> Result<GridProblem> {
    let refs: Vec<&str> = case.free.iter().map(String::as_str).collect();
    let mut p = GridProblem::new(format!("case-{}", case.id), default_box(), &refs)?;
    for z in &case.zero {
        p.define(z, Affine::default())?;
    }
    for j in 1..=5 {
        let mut terms = Vec::new();
        for kind in ['i', 'o'] {
            let s = sym(kind, j);
            if case.free.contains(&s) {
                terms.push((s, -1));
            }
        }
        p.define(&sym('n', j), Affine { offset: 1, terms })?;
    }
    add_program_constraints(&mut p)?;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slack {
    /// The sound minimum per constraint.
    Auto,
    /// The same number of grid steps on every constraint.
    Steps(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// `d * L * B / R` with `L` the larger of the symbolic bound and 2.52.
    Paper,
    /// `sum_u L_u * B / (2R)` with the symbolic per-variable bounds.
    Tight,
}

impl BoundMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundMode::Paper => "paper",
            BoundMode::Tight => "tight",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSample {
    pub resolution: u64,
    /// Slack per constraint, in grid steps.
    pub slack: Vec<Rational>,
    /// Largest objective among slack-feasible grid points, with its point
    /// (lexicographically smallest index among ties).
    pub best: Option<(Rational, Vec<Rational>)>,
    pub evaluated: u64,
    pub feasible: u64,
}

/// One integer line search result: best value, its index tuple, feasible count.
type LineBest = (Option<(i128, Vec<u64>)>, u64);

struct Compiled {
    d: usize,
    r: i64,
    /// symbol = off + coef . k, in steps
    sym_off: Vec<i64>,
    sym_coef: Vec<Vec<i64>>,
    /// constraint lhs = off + coef . k; feasible iff within [lo, hi]
    cons: Vec<(Vec<i64>, i64, i64, i64)>,
    mono: Vec<Vec<usize>>,
}

impl Compiled {
    fn new(p: &GridProblem, r: u64, slack: &[Rational]) -> Result<Self> {
        let r_i = r as i64;
        let steps = |x: &Rational| -> Rational { x * int(r_i) / &p.box_bound };
        let mut cons = Vec::new();
        for ((coef, off), (c, s)) in p
            .constraint_coefficients()
            .into_iter()
            .zip(p.constraints.iter().zip(slack))
        {
            let t = steps(&c.bound);
            let (lo, hi) = match c.sense {
                Sense::Ge => (to_i64((t - s).ceil())?, i64::MAX),
                Sense::Le => (i64::MIN, to_i64((t + s).floor())?),
            };
            cons.push((coef, off * r_i, lo, hi));
        }
        Ok(Compiled {
            d: p.free.len(),
            r: r_i,
            sym_off: p.symbols.iter().map(|(_, a)| a.offset * r_i).collect(),
            sym_coef: (0..p.symbols.len()).map(|s| p.symbol_coefficients(s)).collect(),
            cons,
            mono: p
                .objective
                .iter()
                .map(|m| m.iter().map(|s| p.symbol_index(s).expect("validated")).collect())
                .collect(),
        })
    }

    /// Scans the line with `prefix` fixed and the last coordinate free.
    fn scan_line(&self, prefix: &[u64], sym_base: &mut [i64], poly: &mut Vec<i128>) -> LineBest {
        let last = self.d - 1;
        let dot = |coef: &[i64]| -> i64 {
            coef[..last]
                .iter()
                .zip(prefix)
                .map(|(&a, &k)| a * k as i64)
                .sum()
        };
        let (mut lo, mut hi) = (0i64, self.r);
        for (coef, off, clo, chi) in &self.cons {
            let base = off + dot(coef);
            let a = coef[last];
            // clo <= base + a t <= chi
            if a == 0 {
                if base < *clo || base > *chi {
                    return (None, 0);
                }
                continue;
            }
            if *clo != i64::MIN {
                let need = clo - base;
                if a > 0 {
                    lo = lo.max(Integer::div_ceil(&need, &a));
                } else {
                    hi = hi.min(Integer::div_floor(&need, &a));
                }
            }
            if *chi != i64::MAX {
                let need = chi - base;
                if a > 0 {
                    hi = hi.min(Integer::div_floor(&need, &a));
                } else {
                    lo = lo.max(Integer::div_ceil(&need, &a));
                }
            }
            if lo > hi {
                return (None, 0);
            }
        }
        for (s, b) in sym_base.iter_mut().enumerate() {
            *b = self.sym_off[s] + dot(&self.sym_coef[s]);
        }
        // objective as a polynomial in the last coordinate
        poly.iter_mut().for_each(|c| *c = 0);
        let mut term: Vec<i128> = Vec::with_capacity(poly.len());
        for m in &self.mono {
            term.clear();
            term.push(1);
            for &s in m {
                let (b, c) = (sym_base[s] as i128, self.sym_coef[s][last] as i128);
                term.push(0);
                for i in (0..term.len()).rev() {
                    let lower = if i > 0 { term[i - 1] } else { 0 };
                    term[i] = term[i] * b + lower * c;
                }
            }
            for (acc, t) in poly.iter_mut().zip(&term) {
                *acc += t;
            }
        }
        let mut best: Option<(i128, i64)> = None;
        for t in lo..=hi {
            let tt = t as i128;
            let v = poly.iter().rev().fold(0i128, |acc, &c| acc * tt + c);
            if best.map_or(true, |(bv, _)| v > bv) {
                best = Some((v, t));
            }
        }
        let best = best.map(|(v, t)| {
            let mut idx = prefix.to_vec();
            idx.push(t as u64);
            (v, idx)
        });
        (best, (hi - lo + 1) as u64)
    }

    fn run(&self) -> LineBest {
        let lines_per_first = |first: u64| -> LineBest {
            let degree = self.mono.first().map_or(0, Vec::len);
            let mut poly = vec![0i128; degree + 1];
            let mut sym_base = vec![0i64; self.sym_off.len()];
            let mut prefix = vec![0u64; self.d - 1];
            if self.d >= 2 {
                prefix[0] = first;
            }
            let mut acc: LineBest = (None, 0);
            loop {
                let (best, feasible) = self.scan_line(&prefix, &mut sym_base, &mut poly);
                acc = merge_lines(acc, (best, feasible));
                // advance prefix[1..] as an odometer
                let mut i = prefix.len();
                loop {
                    if i <= 1 {
                        return acc;
                    }
                    i -= 1;
                    prefix[i] += 1;
                    if prefix[i] <= self.r as u64 {
                        break;
                    }
                    prefix[i] = 0;
                }
            }
        };
        if self.d >= 2 {
            let parts: Vec<LineBest> = (0..=self.r as u64)
                .into_par_iter()
                .map(lines_per_first)
                .collect();
            parts.into_iter().fold((None, 0), merge_lines)
        } else {
            lines_per_first(0)
        }
    }
}

/// Keeps the earlier candidate on ties, so merging in index order is lexicographic.
fn merge_lines(a: LineBest, b: LineBest) -> LineBest {
    let best = match (a.0, b.0) {
        (Some(x), Some(y)) => Some(if y.0 > x.0 { y } else { x }),
        (x, y) => x.or(y),
    };
    (best, a.1 + b.1)
}

fn to_i64(x: Rational) -> Result<i64> {
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::ResourceLimit("constraint threshold overflows 64 bits".into()))
}

fn resolve_slack(p: &GridProblem, slack: &Slack) -> Vec<Rational> {
    match slack {
        Slack::Auto => p.required_slack(),
        Slack::Steps(s) => vec![s.clone(); p.constraints.len()],
    }
}

pub fn grid_search(p: &GridProblem, resolution: u64, slack: &Slack) -> Result<GridSample> {
    if resolution < 2 {
        return Err(Error::OutOfRange(format!("resolution {resolution} (need R >= 2)")));
    }
    if p.objective.is_empty() {
        return Err(Error::InvalidSpec("empty objective".into()));
    }
    if let Slack::Steps(s) = slack {
        if s.is_negative() {
            return Err(Error::OutOfRange("negative slack".into()));
        }
    }
    let d = p.dimension();
    let points = (resolution as u128 + 1).checked_pow(d as u32);
    if points.map_or(true, |x| x > MAX_EVALUATIONS) {
        return Err(Error::Unsupported(format!(
            "{}^{d} grid points exceed the budget of {MAX_EVALUATIONS}",
            resolution + 1
        )));
    }
    let slack = resolve_slack(p, slack);
    let best = if d == 0 {
        // a single point; every symbol is constant
        let point: Vec<Rational> = Vec::new();
        let values = p.symbol_values(&point)?;
        let feasible = p.constraints.iter().zip(&slack).all(|(c, s)| {
            let lhs: Rational = c
                .terms
                .iter()
                .map(|(name, a)| {
                    int(*a) * &values.iter().find(|(n, _)| n == name).expect("declared").1
                })
                .sum();
            let tol = s * &p.box_bound / int(resolution as i64);
            match c.sense {
                Sense::Le => lhs <= &c.bound + tol,
                Sense::Ge => lhs >= &c.bound - tol,
            }
        });
        let value = p.evaluate(&point)?;
        (feasible.then_some((value, point)), u64::from(feasible))
    } else {
        let compiled = Compiled::new(p, resolution, &slack)?;
        let (best, feasible) = compiled.run();
        let h = &p.box_bound / int(resolution as i64);
        let degree = p.objective[0].len() as i32;
        let best = best.map(|(v, idx)| {
            let value = Rational::from_integer(BigInt::from(v)) * pow_rational(&h, degree);
            let point = idx.iter().map(|&k| int(k as i64) * &h).collect();
            (value, point)
        });
        (best, feasible)
    };
    Ok(GridSample {
        resolution,
        slack,
        best: best.0,
        evaluated: points.expect("checked") as u64,
        feasible: best.1,
    })
}

fn pow_rational(x: &Rational, e: i32) -> Rational {
    (0..e).fold(int(1), |acc, _| acc * x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCertificate {
    pub problem: String,
    pub box_bound: Rational,
    pub free: Vec<String>,
    pub resolution: u64,
    pub slack: Vec<(String, Rational)>,
    pub sampled_max: Option<Rational>,
    pub argmax: Option<Vec<Rational>>,
    pub evaluated: u64,
    pub feasible: u64,
    pub mode: BoundMode,
    /// Largest per-variable symbolic bound.
    pub derivative_bound_symbolic: Rational,
    /// Bound used in the certificate formula.
    pub derivative_bound: Rational,
    /// `None` when no grid point is slack-feasible, i.e. the program is infeasible.
    pub certified_bound: Option<Rational>,
}

pub fn certify(
    p: &GridProblem,
    resolution: u64,
    slack: &Slack,
    mode: BoundMode,
) -> Result<GridCertificate> {
    let required = p.required_slack();
    if let Slack::Steps(s) = slack {
        for (i, r) in required.iter().enumerate() {
            if s < r {
                return Err(Error::InsufficientSlack {
                    constraint: i,
                    given: fmt_rational(s),
                    required: fmt_rational(r),
                });
            }
        }
    }
    let sample = grid_search(p, resolution, slack)?;
    let per_var = p.derivative_bounds();
    let symbolic = per_var.iter().cloned().max().unwrap_or_else(Rational::zero);
    let h = &p.box_bound / int(resolution as i64);
    let (used, gap) = match mode {
        BoundMode::Paper => {
            let l = symbolic.clone().max(quoted_derivative_bound());
            let gap = int(p.dimension() as i64) * &l * &h;
            (l, gap)
        }
        BoundMode::Tight => {
            let gap = per_var.iter().sum::<Rational>() * &h / int(2);
            (symbolic.clone(), gap)
        }
    };
    let (sampled_max, argmax) = match sample.best {
        Some((v, pt)) => (Some(v), Some(pt)),
        None => (None, None),
    };
    Ok(GridCertificate {
        problem: p.name.clone(),
        box_bound: p.box_bound.clone(),
        free: p.free.clone(),
        resolution,
        slack: p
            .constraints
            .iter()
            .map(|c| c.name.clone())
            .zip(sample.slack)
            .collect(),
        certified_bound: sampled_max.as_ref().map(|v| v + &gap),
        sampled_max,
        argmax,
        evaluated: sample.evaluated,
        feasible: sample.feasible,
        mode,
        derivative_bound_symbolic: symbolic,
        derivative_bound: used,
    })
}

impl GridCertificate {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |r: &Option<Rational>| r.as_ref().map_or("none".to_string(), fmt_rational);
        let _ = writeln!(s, "problem {}", self.problem);
        let _ = writeln!(s, "box {}", fmt_rational(&self.box_bound));
        let _ = writeln!(s, "free {}", self.free.join(" "));
        let _ = writeln!(s, "resolution {}", self.resolution);
        for (name, v) in &self.slack {
            let _ = writeln!(s, "slack {name} {}", fmt_rational(v));
        }
        let _ = writeln!(s, "evaluated {}", self.evaluated);
        let _ = writeln!(s, "feasible {}", self.feasible);
        let _ = writeln!(s, "sampled_max {}", opt(&self.sampled_max));
        match &self.argmax {
            Some(pt) => {
                let coords: Vec<String> = self
                    .free
                    .iter()
                    .zip(pt)
                    .map(|(n, v)| format!("{n}={}", fmt_rational(v)))
                    .collect();
                let _ = writeln!(s, "argmax {}", coords.join(" "));
            }
            None => {
                let _ = writeln!(s, "argmax none");
            }
        }
        let _ = writeln!(s, "mode {}", self.mode.name());
        let _ = writeln!(
            s,
            "derivative_bound_symbolic {}",
            fmt_rational(&self.derivative_bound_symbolic)
        );
        let _ = writeln!(s, "derivative_bound {}", fmt_rational(&self.derivative_bound));
        let _ = writeln!(s, "certified_bound {}", opt(&self.certified_bound));
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut slack = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            if key == "slack" {
                let (name, v) = rest
                    .split_once(' ')
                    .ok_or_else(|| Error::parse(i + 1, "expected `slack <name> <p/q>`"))?;
                slack.push((name.to_string(), rat_at(i + 1, v)?));
            } else if fields.insert(key, (i + 1, rest.trim())).is_some() {
                return Err(Error::parse(i + 1, format!("duplicate field `{key}`")));
            }
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::parse(0, format!("missing field `{k}`")))
        };
        let opt_rat = |k: &str| -> Result<Option<Rational>> {
            let (line, v) = get(k)?;
            if v == "none" {
                Ok(None)
            } else {
                rat_at(line, v).map(Some)
            }
        };
        let num = |k: &str| -> Result<u64> {
            let (line, v) = get(k)?;
            v.parse()
                .map_err(|_| Error::parse(line, format!("bad integer `{v}`")))
        };
        let free: Vec<String> = get("free")?.1.split_whitespace().map(str::to_string).collect();
        let (am_line, am) = get("argmax")?;
        let argmax = if am == "none" {
            None
        } else {
            let mut pt = Vec::new();
            for (coord, name) in am.split_whitespace().zip(&free) {
                let (n, v) = coord
                    .split_once('=')
                    .ok_or_else(|| Error::parse(am_line, format!("bad coordinate `{coord}`")))?;
                if n != name {
                    return Err(Error::parse(am_line, format!("expected `{name}`, got `{n}`")));
                }
                pt.push(rat_at(am_line, v)?);
            }
            if pt.len() != free.len() {
                return Err(Error::parse(am_line, "argmax has the wrong number of coordinates"));
            }
            Some(pt)
        };
        let (mode_line, mode) = get("mode")?;
        Ok(GridCertificate {
            problem: get("problem")?.1.to_string(),
            box_bound: rat_at(get("box")?.0, get("box")?.1)?,
            free,
            resolution: num("resolution")?,
            slack,
            sampled_max: opt_rat("sampled_max")?,
            argmax,
            evaluated: num("evaluated")?,
            feasible: num("feasible")?,
            mode: match mode {
                "paper" => BoundMode::Paper,
                "tight" => BoundMode::Tight,
                other => return Err(Error::parse(mode_line, format!("unknown mode `{other}`"))),
            },
            derivative_bound_symbolic: rat_at(
                get("derivative_bound_symbolic")?.0,
                get("derivative_bound_symbolic")?.1,
            )?,
            derivative_bound: rat_at(get("derivative_bound")?.0, get("derivative_bound")?.1)?,
            certified_bound: opt_rat("certified_bound")?,
        })
    }
}

fn rat_at(line: usize, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|_| Error::parse(line, format!("bad rational `{s}`")))
}
