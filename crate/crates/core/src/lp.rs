//! Exact rational linear programming: two-phase simplex with Bland's rule.
//!
//! Normal form: every variable is shifted or reflected to be non-negative,
//! variables with equal bounds are substituted as constants, equality rows are
//! split into a `<=` and a `>=` row, and rows are signed so the right-hand side
//! is non-negative. `<=` rows start with a basic slack; `>=` rows get a surplus
//! and an artificial variable for phase one.

use crate::rational::{format_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Self { coeffs, relation, rhs }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Bounds `[lo, hi]`; `None` means unbounded on that side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Bounds {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Self { lo: Some(lo), hi: Some(hi) }
    }

    pub fn non_negative() -> Self {
        Self { lo: Some(Rational::zero()), hi: None }
    }

    pub fn free() -> Self {
        Self { lo: None, hi: None }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= x) && self.hi.as_ref().is_none_or(|hi| x <= hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub bounds: Vec<Bounds>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<(Vec<(usize, Rational)>, Sense)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Feasible(Vec<Rational>),
    Optimal { point: Vec<Rational>, value: Rational },
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible(p) | LpOutcome::Optimal { point: p, .. } => Some(p),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(variables: Vec<String>) -> Self {
        let n = variables.len();
        Self { variables, bounds: vec![Bounds::non_negative(); n], constraints: Vec::new(), objective: None }
    }

    pub fn add(&mut self, constraint: Constraint) -> &mut Self {
        self.constraints.push(constraint);
        self
    }

    /// True when `x` meets every bound and constraint exactly.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len()
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
            && self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn objective_value(&self, x: &[Rational]) -> Option<Rational> {
        self.objective.as_ref().map(|(coeffs, _)| coeffs.iter().map(|(j, c)| c * &x[*j]).sum())
    }

    fn check(&self) {
        let n = self.variables.len();
        assert_eq!(self.bounds.len(), n, "one bound per variable");
        let refs = self
            .constraints
            .iter()
            .flat_map(|c| c.coeffs.iter())
            .chain(self.objective.iter().flat_map(|(c, _)| c.iter()));
        for (j, _) in refs {
            assert!(*j < n, "coefficient references undeclared variable {j}");
        }
    }
}

/// How an original variable is recovered from the non-negative columns.
enum Column {
    Fixed(Rational),
    /// x = lo + t
    Shift(Rational, usize),
    /// x = hi - t
    Reflect(Rational, usize),
    /// x = t+ - t-
    Split(usize, usize),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs for maximisation; last entry is the objective value.
    obj: Vec<Rational>,
    names: Vec<String>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule to optimality; false when unbounded.
    fn optimise(&mut self, allowed: usize, trace: &mut Option<&mut dyn Write>, phase: u8) -> bool {
        let mut iteration = 0usize;
        loop {
            if let Some(out) = trace.as_mut() {
                let _ = out.write_all(self.render(phase, iteration).as_bytes());
            }
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let w = self.width();
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[w] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
            iteration += 1;
        }
    }

    fn render(&self, phase: u8, iteration: usize) -> String {
        let mut s = format!("phase {phase} iteration {iteration}\n");
        let w = self.width();
        let _ = writeln!(s, "basis | {} | rhs", self.names[..w].join(" "));
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            let _ = writeln!(s, "{} | {} | {}", self.names[b], cells[..w].join(" "), cells[w]);
        }
        let cells: Vec<String> = self.obj.iter().map(format_rational).collect();
        let _ = writeln!(s, "obj | {} | {}\n", cells[..w].join(" "), cells[w]);
        s
    }
}

/// Solves `lp` exactly. With an objective the result is `Optimal` or
/// `Unbounded`; without one it is `Feasible`. Every returned point satisfies
/// all constraints exactly.
pub fn lp_solve(lp: &LinearProgram) -> LpOutcome {
    lp_solve_traced(lp, None)
}

/// As [`lp_solve`], writing each tableau to `trace` in plain text.
pub fn lp_solve_traced(lp: &LinearProgram, mut trace: Option<&mut dyn Write>) -> LpOutcome {
    lp.check();
    let n = lp.variables.len();
    // Map original variables to non-negative structural columns.
    let mut columns = Vec::with_capacity(n);
    let mut names: Vec<String> = Vec::new();
    let mut upper: Vec<(usize, Rational)> = Vec::new();
    for (j, b) in lp.bounds.iter().enumerate() {
        let name = &lp.variables[j];
        match (&b.lo, &b.hi) {
            (Some(lo), Some(hi)) if lo > hi => return LpOutcome::Infeasible,
            (Some(lo), Some(hi)) if lo == hi => columns.push(Column::Fixed(lo.clone())),
            (Some(lo), hi) => {
                names.push(name.clone());
                if let Some(hi) = hi {
                    upper.push((names.len() - 1, hi - lo));
                }
                columns.push(Column::Shift(lo.clone(), names.len() - 1));
            }
            (None, Some(hi)) => {
                names.push(format!("-{name}"));
                columns.push(Column::Reflect(hi.clone(), names.len() - 1));
            }
            (None, None) => {
                names.push(format!("{name}+"));
                names.push(format!("{name}-"));
                columns.push(Column::Split(names.len() - 2, names.len() - 1));
            }
        }
    }
    let structural = names.len();
    // Rewrite a linear form over original variables as (coefficients, constant).
    let rewrite = |coeffs: &[(usize, Rational)]| -> (Vec<Rational>, Rational) {
        let mut row = vec![Rational::zero(); structural];
        let mut constant = Rational::zero();
        for (j, c) in coeffs {
            match &columns[*j] {
                Column::Fixed(v) => constant += c * v,
                Column::Shift(lo, t) => {
                    constant += c * lo;
                    row[*t] += c;
                }
                Column::Reflect(hi, t) => {
                    constant += c * hi;
                    row[*t] -= c;
                }
                Column::Split(p, q) => {
                    row[*p] += c;
                    row[*q] -= c;
                }
            }
        }
        (row, constant)
    };
    let mut le_rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut ge_rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut push = |row: Vec<Rational>, rel: Relation, rhs: Rational| {
        let (row, rel, rhs) = if rhs.is_negative() {
            let flipped = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (row.into_iter().map(|v| -v).collect(), flipped, -rhs)
        } else {
            (row, rel, rhs)
        };
        match rel {
            Relation::Le => le_rows.push((row, rhs)),
            Relation::Ge => ge_rows.push((row, rhs)),
            Relation::Eq => unreachable!("equalities are split before this point"),
        }
    };
    for c in &lp.constraints {
        let (row, constant) = rewrite(&c.coeffs);
        let rhs = &c.rhs - constant;
        if row.iter().all(Zero::is_zero) {
            let ok = match c.relation {
                Relation::Le => !rhs.is_negative(),
                Relation::Ge => !rhs.is_positive(),
                Relation::Eq => rhs.is_zero(),
            };
            if !ok {
                return LpOutcome::Infeasible;
            }
            continue;
        }
        match c.relation {
            Relation::Eq => {
                push(row.clone(), Relation::Le, rhs.clone());
                push(row, Relation::Ge, rhs);
            }
            rel => push(row, rel, rhs),
        }
    }
    for (t, width) in upper {
        let mut row = vec![Rational::zero(); structural];
        row[t] = Rational::one();
        push(row, Relation::Le, width);
    }
    // Columns: structural | slacks (one per <= row) | surpluses (one per >= row) | artificials.
    let (nl, ng) = (le_rows.len(), ge_rows.len());
    let real = structural + nl + ng;
    let width = real + ng;
    names.extend((0..nl).map(|i| format!("s{i}")));
    names.extend((0..ng).map(|i| format!("e{i}")));
    names.extend((0..ng).map(|i| format!("a{i}")));
    let mut rows = Vec::with_capacity(nl + ng);
    let mut basis = Vec::with_capacity(nl + ng);
    for (i, (coeffs, rhs)) in le_rows.into_iter().enumerate() {
        let mut row = coeffs;
        row.resize(width + 1, Rational::zero());
        row[structural + i] = Rational::one();
        row[width] = rhs;
        rows.push(row);
        basis.push(structural + i);
    }
    for (i, (coeffs, rhs)) in ge_rows.into_iter().enumerate() {
        let mut row = coeffs;
        row.resize(width + 1, Rational::zero());
        row[structural + nl + i] = -Rational::one();
        row[real + i] = Rational::one();
        row[width] = rhs;
        rows.push(row);
        basis.push(real + i);
    }
    // Phase one: maximise minus the sum of artificials.
    let mut obj = vec![Rational::zero(); width + 1];
    for row in rows.iter().skip(nl) {
        for (o, v) in obj.iter_mut().zip(row) {
            *o -= v;
        }
    }
    for o in obj.iter_mut().skip(real).take(ng) {
        *o = Rational::zero();
    }
    let mut tab = Tableau { rows, basis, obj, names };
    if ng > 0 {
        tab.optimise(real, &mut trace, 1);
        if tab.obj[width].is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= real {
                match (0..real).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
    for row in tab.rows.iter_mut() {
        row.drain(real..width);
    }
    tab.names.truncate(real);
    let value_column = real;
    let mut outcome_value = None;
    if let Some((coeffs, sense)) = &lp.objective {
        let (mut c, constant) = rewrite(coeffs);
        if *sense == Sense::Min {
            c.iter_mut().for_each(|v| *v = -v.clone());
        }
        let mut obj = vec![Rational::zero(); real + 1];
        for (o, v) in obj.iter_mut().zip(&c) {
            *o = -v.clone();
        }
        for (row, &b) in tab.rows.iter().zip(&tab.basis) {
            if !obj[b].is_zero() {
                let f = obj[b].clone();
                for (o, v) in obj.iter_mut().zip(row) {
                    *o -= &f * v;
                }
            }
        }
        tab.obj = obj;
        if !tab.optimise(real, &mut trace, 2) {
            return LpOutcome::Unbounded;
        }
        let value = if *sense == Sense::Min { -tab.obj[value_column].clone() } else { tab.obj[value_column].clone() };
        outcome_value = Some(value + constant);
    }
    let mut t = vec![Rational::zero(); structural];
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        if b < structural {
            t[b] = row[value_column].clone();
        }
    }
    let point: Vec<Rational> = columns
        .iter()
        .map(|col| match col {
            Column::Fixed(v) => v.clone(),
            Column::Shift(lo, j) => lo + &t[*j],
            Column::Reflect(hi, j) => hi - &t[*j],
            Column::Split(p, q) => &t[*p] - &t[*q],
        })
        .collect();
    debug_assert!(lp.satisfied_by(&point), "simplex returned an infeasible point");
    match outcome_value {
        Some(value) => LpOutcome::Optimal { point, value },
        None => LpOutcome::Feasible(point),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lp2() -> LinearProgram {
        LinearProgram::new(vec!["x".into(), "y".into()])
    }

    #[test]
    fn single_variable_max() {
        let mut lp = LinearProgram::new(vec!["x".into()]);
        lp.bounds[0] = Bounds::new(int(0), int(10));
        lp.add(Constraint::new(vec![(0, int(1))], Relation::Le, int(3)));
        lp.objective = Some((vec![(0, int(1))], Sense::Max));
        assert_eq!(lp_solve(&lp), LpOutcome::Optimal { point: vec![int(3)], value: int(3) });
    }

    #[test]
    fn infeasible_pair() {
        let mut lp = LinearProgram::new(vec!["x".into()]);
        lp.add(Constraint::new(vec![(0, int(1))], Relation::Ge, int(2)));
        lp.add(Constraint::new(vec![(0, int(1))], Relation::Le, int(1)));
        assert_eq!(lp_solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn two_dimensional_vertex() {
        let mut lp = lp2();
        lp.add(Constraint::new(vec![(0, int(1)), (1, int(2))], Relation::Le, int(4)));
        lp.add(Constraint::new(vec![(0, int(3)), (1, int(1))], Relation::Le, int(6)));
        lp.objective = Some((vec![(0, int(1)), (1, int(1))], Sense::Max));
        assert_eq!(lp_solve(&lp), LpOutcome::Optimal { point: vec![ratio(8, 5), ratio(6, 5)], value: ratio(14, 5) });
    }

    #[test]
    fn unbounded_and_free_variables() {
        let mut lp = lp2();
        lp.bounds = vec![Bounds::free(), Bounds::free()];
        lp.add(Constraint::new(vec![(0, int(1)), (1, int(-1))], Relation::Eq, int(-3)));
        lp.objective = Some((vec![(0, int(1))], Sense::Min));
        assert_eq!(lp_solve(&lp), LpOutcome::Unbounded);
        lp.add(Constraint::new(vec![(0, int(1))], Relation::Ge, int(-7)));
        assert_eq!(lp_solve(&lp), LpOutcome::Optimal { point: vec![int(-7), int(-4)], value: int(-7) });
    }

    #[test]
    fn fixed_and_reflected_bounds() {
        let mut lp = lp2();
        lp.bounds = vec![Bounds::new(int(2), int(2)), Bounds { lo: None, hi: Some(int(5)) }];
        lp.add(Constraint::new(vec![(0, int(1)), (1, int(1))], Relation::Ge, int(4)));
        lp.objective = Some((vec![(1, int(1))], Sense::Min));
        assert_eq!(lp_solve(&lp), LpOutcome::Optimal { point: vec![int(2), int(2)], value: int(2) });
    }

    #[test]
    fn feasibility_without_objective() {
        let mut lp = lp2();
        lp.bounds = vec![Bounds::new(int(0), int(1)); 2];
        lp.add(Constraint::new(vec![(0, int(2)), (1, int(-1))], Relation::Eq, ratio(1, 2)));
        let out = lp_solve(&lp);
        assert!(lp.satisfied_by(out.point().unwrap()));
    }

    #[test]
    fn trace_is_written() {
        let mut lp = lp2();
        lp.add(Constraint::new(vec![(0, int(1)), (1, int(1))], Relation::Ge, int(1)));
        lp.objective = Some((vec![(0, int(1)), (1, int(2))], Sense::Min));
        let mut buf: Vec<u8> = Vec::new();
        let out = lp_solve_traced(&lp, Some(&mut buf));
        assert_eq!(out, LpOutcome::Optimal { point: vec![int(1), int(0)], value: int(1) });
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("phase 1 iteration 0"));
        assert!(text.contains("phase 2"));
    }
}
