//! Exact two-phase simplex over the rationals (Bland's rule).

use num_traits::{One, Signed, Zero};

use super::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

/// Linear constraints over variables that are free unless marked
/// nonnegative.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    nvars: usize,
    nonneg: Vec<bool>,
    ge: Vec<(Vec<Rat>, Rat)>,
    eq: Vec<(Vec<Rat>, Rat)>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem {
            nvars,
            nonneg: vec![false; nvars],
            ge: Vec::new(),
            eq: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    /// `row · x >= rhs`
    pub fn add_ge(&mut self, row: Vec<Rat>, rhs: Rat) {
        assert_eq!(row.len(), self.nvars);
        self.ge.push((row, rhs));
    }

    /// `row · x = rhs`
    pub fn add_eq(&mut self, row: Vec<Rat>, rhs: Rat) {
        assert_eq!(row.len(), self.nvars);
        self.eq.push((row, rhs));
    }

    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        match self.minimize(&vec![Rat::zero(); self.nvars]) {
            LpOutcome::Optimal { point, .. } => Some(point),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
        }
    }

    pub fn maximize(&self, objective: &[Rat]) -> LpOutcome {
        let neg: Vec<Rat> = objective.iter().map(|c| -c).collect();
        match self.minimize(&neg) {
            LpOutcome::Optimal { point, value } => LpOutcome::Optimal { point, value: -value },
            other => other,
        }
    }

    pub fn minimize(&self, objective: &[Rat]) -> LpOutcome {
        assert_eq!(objective.len(), self.nvars);
        // Standard form columns: one per nonneg variable, two per free
        // variable, one slack per `>=` row.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.nvars);
        let mut ncols = 0;
        for j in 0..self.nvars {
            if self.nonneg[j] {
                col_of.push((ncols, None));
                ncols += 1;
            } else {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let first_slack = ncols;
        ncols += self.ge.len();

        let mut rows = Vec::with_capacity(self.ge.len() + self.eq.len());
        let mut rhs = Vec::with_capacity(rows.capacity());
        for (k, (row, b)) in self.ge.iter().chain(&self.eq).enumerate() {
            let mut r = vec![Rat::zero(); ncols];
            for (j, a) in row.iter().enumerate() {
                let (p, n) = col_of[j];
                r[p] = a.clone();
                if let Some(n) = n {
                    r[n] = -a.clone();
                }
            }
            if k < self.ge.len() {
                r[first_slack + k] = -Rat::one();
            }
            rows.push(r);
            rhs.push(b.clone());
        }
        let mut c = vec![Rat::zero(); ncols];
        for (j, cj) in objective.iter().enumerate() {
            let (p, n) = col_of[j];
            c[p] = cj.clone();
            if let Some(n) = n {
                c[n] = -cj.clone();
            }
        }

        let outcome = simplex_standard(&c, rows, rhs);
        match outcome {
            LpOutcome::Optimal { point, value } => {
                let x = col_of
                    .iter()
                    .map(|&(p, n)| match n {
                        Some(n) => &point[p] - &point[n],
                        None => point[p].clone(),
                    })
                    .collect();
                LpOutcome::Optimal { point: x, value }
            }
            other => other,
        }
    }
}

struct Tableau {
    /// m rows of `ncols` coefficients followed by the rhs.
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over columns `0..allowed`. Returns false when
    /// unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: usize) -> bool {
        loop {
            // Reduced costs c_j - c_B B^-1 A_j.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut red = cost[j].clone();
                for (i, row) in self.t.iter().enumerate() {
                    if !row[j].is_zero() {
                        red -= &cost[self.basis[i]] * &row[j];
                    }
                }
                red.is_negative()
            });
            let Some(e) = entering else { return true };
            let rhs = self.ncols;
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[e].is_positive() {
                    let ratio = &row[rhs] / &row[e];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
    }
}

/// minimize `c·x` subject to `rows·x = rhs`, `x >= 0`.
fn simplex_standard(c: &[Rat], mut rows: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> LpOutcome {
    let n = c.len();
    let m = rows.len();
    for (row, b) in rows.iter_mut().zip(rhs.iter_mut()) {
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            *b = -b.clone();
        }
    }
    // Phase 1: artificial columns n..n+m.
    let ncols = n + m;
    let t = rows
        .into_iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (mut row, b))| {
            row.resize(ncols, Rat::zero());
            row[n + i] = Rat::one();
            row.push(b);
            row
        })
        .collect();
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        ncols,
    };
    let mut phase1 = vec![Rat::zero(); ncols];
    for x in phase1.iter_mut().skip(n) {
        *x = Rat::one();
    }
    tab.optimize(&phase1, ncols);
    let infeasibility: Rat = tab
        .basis
        .iter()
        .zip(&tab.t)
        .filter(|(&b, _)| b >= n)
        .map(|(_, row)| row[ncols].clone())
        .sum();
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining (zero-valued) artificials out; drop redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    // Phase 2 restricted to the original columns.
    let mut cost = c.to_vec();
    cost.resize(ncols, Rat::zero());
    if !tab.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &b) in tab.t.iter().zip(&tab.basis) {
        if b < n {
            x[b] = row[ncols].clone();
        }
    }
    let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { point: x, value }
}
