use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};

use super::atom_vertex_name;
use crate::error::{Error, Result};
use crate::query::CQ;

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Q,
    pub x: Vec<Q>,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pr) {
                    *v -= &f * pv;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pr) {
                *v -= &f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Maximises with Bland's rule over columns `< limit`. `false` when unbounded.
    fn run(&mut self, limit: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..limit).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(Q, usize, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((q, _, b)) => ratio < *q || (ratio == *q && self.basis[r] < *b),
                    };
                    if better {
                        best = Some((ratio, r, self.basis[r]));
                    }
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    /// Sets the objective row to reduced costs of `c` under the current basis.
    fn price(&mut self, c: &[Q]) {
        let width = self.obj.len();
        self.obj = (0..width).map(|j| c.get(j).cloned().unwrap_or_else(Q::zero)).collect();
        for r in 0..self.rows.len() {
            let cb = self.obj[self.basis[r]].clone();
            if !cb.is_zero() {
                for j in 0..width {
                    let d = &cb * &self.rows[r][j];
                    self.obj[j] -= d;
                }
            }
        }
    }
}

/// Exact two-phase simplex: maximise `c·x` subject to `A x ≤ b`, `x ≥ 0`.
pub fn solve_lp(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<LpSolution> {
    let (m, n) = (a.len(), c.len());
    let negative: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let art = negative.len();
    let width = n + m + art + 1;
    let rhs = width - 1;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Q::zero(); width];
        let sign = if b[i].is_negative() { -Q::one() } else { Q::one() };
        for j in 0..n {
            row[j] = &sign * &a[i][j];
        }
        row[n + i] = sign.clone();
        row[rhs] = &sign * &b[i];
        match negative.iter().position(|&k| k == i) {
            Some(k) => {
                row[n + m + k] = Q::one();
                basis.push(n + m + k);
            }
            None => basis.push(n + i),
        }
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        obj: vec![Q::zero(); width],
        basis,
    };
    if art > 0 {
        let mut phase1 = vec![Q::zero(); width - 1];
        for k in 0..art {
            phase1[n + m + k] = -Q::one();
        }
        t.price(&phase1);
        t.run(width - 1);
        if !t.obj[rhs].is_zero() {
            return Err(Error::Contract("linear program is infeasible".into()));
        }
        // Drive remaining artificials out of the basis, dropping redundant rows.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n + m {
                match (0..n + m).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in t.rows.iter_mut() {
            for k in 0..art {
                row[n + m + k] = Q::zero();
            }
        }
    }
    t.price(c);
    if !t.run(n + m) {
        return Err(Error::Contract("linear program is unbounded".into()));
    }
    let mut x = vec![Q::zero(); n];
    for (r, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rows[r][rhs].clone();
        }
    }
    let value = c.iter().zip(&x).fold(Q::zero(), |s, (ci, xi)| s + ci * xi);
    Ok(LpSolution { value, x })
}

/// Optimal weights with their objective value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingSolution {
    pub weights: BTreeMap<String, Q>,
    pub value: Q,
}

/// Maximise `∑ u_x` subject to `∑_{x ∈ vars(R)} u_x ≤ 1` for every atom.
pub fn fractional_vertex_packing_max(q: &CQ) -> PackingSolution {
    let vars = q.vars();
    let c = vec![Q::one(); vars.len()];
    let a: Vec<Vec<Q>> = q
        .atoms
        .iter()
        .map(|atom| vars.iter().map(|v| if atom.contains_var(v) { Q::one() } else { Q::zero() }).collect())
        .collect();
    let b = vec![Q::one(); a.len()];
    let sol = solve_lp(&c, &a, &b).expect("packing LP is feasible and bounded");
    PackingSolution {
        weights: vars.into_iter().zip(sol.x).collect(),
        value: sol.value,
    }
}

/// Minimise `∑ v_R` subject to `∑_{R ∋ x} v_R ≥ 1` for every variable.
/// Weights are keyed by atom vertex name (`R#i`).
pub fn fractional_edge_cover_min(q: &CQ) -> PackingSolution {
    let vars = q.vars();
    let c = vec![-Q::one(); q.atoms.len()];
    let a: Vec<Vec<Q>> = vars
        .iter()
        .map(|v| q.atoms.iter().map(|atom| if atom.contains_var(v) { -Q::one() } else { Q::zero() }).collect())
        .collect();
    let b = vec![-Q::one(); vars.len()];
    let sol = solve_lp(&c, &a, &b).expect("every variable occurs in some atom");
    PackingSolution {
        weights: q
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| atom_vertex_name(&a.relation, i + 1))
            .zip(sol.x)
            .collect(),
        value: -sol.value,
    }
}
