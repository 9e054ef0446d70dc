//! Sparse multivariate polynomials over exact rationals, and polynomial
//! matrices with fraction-free rank computation.
//!
//! Monomials are exponent vectors keyed in a `BTreeMap`, so term order (and
//! therefore printing) is deterministic. Coefficients are never zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use crate::matrix::RatMatrix;
use crate::rat::Rat;

/// Sparse multivariate polynomial. `nvars` fixes the exponent-vector length.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(exps, Rat::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant term.
    pub fn constant_coeff(&self) -> Rat {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars, "eval arity mismatch");
        let mut acc = Rat::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += &term;
        }
        acc
    }

    /// Exact division; panics if `d` does not divide `self` exactly.
    /// Used by fraction-free elimination where divisibility is guaranteed.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "division by zero polynomial");
        assert_eq!(self.nvars, d.nvars);
        let (dlead_e, dlead_c) = d.terms.iter().next_back().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while !rem.is_zero() {
            let (rlead_e, rlead_c) = rem.terms.iter().next_back().unwrap();
            let qe: Option<Vec<u32>> = rlead_e
                .iter()
                .zip(dlead_e)
                .map(|(a, b)| a.checked_sub(*b))
                .collect();
            let qe = qe.expect("inexact polynomial division");
            let qc = rlead_c / dlead_c;
            let mut mono = Poly::zero(self.nvars);
            mono.insert_term(qe, qc);
            rem = &rem - &(&mono * d);
            quot = &quot + &mono;
        }
        quot
    }

    /// Render with the given variable names, deterministic term order
    /// (lexicographic in the exponent vectors, highest first).
    pub fn render(&self, vars: &[String]) -> String {
        assert_eq!(vars.len(), self.nvars, "render arity mismatch");
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        vars[v].clone()
                    } else {
                        format!("{}^{}", vars[v], e)
                    }
                })
                .collect();
            let abs = c.abs();
            let lead = if i == 0 {
                if c.is_negative() { "-" } else { "" }.to_string()
            } else if c.is_negative() {
                " - ".to_string()
            } else {
                " + ".to_string()
            };
            out.push_str(&lead);
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                let _ = write!(out, "{}*{}", abs, mono.join("*"));
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "mixed-arity polynomials");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "mixed-arity polynomials");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "mixed-arity polynomials");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&vars))
    }
}

/// Dense matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    pub fn from_rat(m: &RatMatrix, nvars: usize) -> Self {
        PolyMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            Poly::constant(nvars, m.at(i, j).clone())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Poly {
        &mut self.data[r * self.cols + c]
    }

    pub fn eval(&self, point: &[Rat]) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).eval(point))
    }

    /// Rank over the rational function field, by fraction-free (Bareiss)
    /// elimination with full pivoting. Equals the maximum rank over all
    /// rational specializations.
    pub fn poly_rank(&self) -> usize {
        let mut m = self.clone();
        let nvars = m.data.first().map_or(0, Poly::nvars);
        let mut prev_pivot = Poly::one(nvars);
        let mut rank = 0;
        let (rows, cols) = (m.rows, m.cols);
        while rank < rows && rank < cols {
            // Full pivoting: any nonzero polynomial entry will do.
            let mut pivot = None;
            'search: for r in rank..rows {
                for c in rank..cols {
                    if !m.at(r, c).is_zero() {
                        pivot = Some((r, c));
                        break 'search;
                    }
                }
            }
            let Some((pr, pc)) = pivot else { break };
            if pr != rank {
                for c in 0..cols {
                    m.data.swap(pr * cols + c, rank * cols + c);
                }
            }
            if pc != rank {
                for r in 0..rows {
                    m.data.swap(r * cols + pc, r * cols + rank);
                }
            }
            let piv = m.at(rank, rank).clone();
            for r in (rank + 1)..rows {
                for c in (rank + 1)..cols {
                    let num = &(m.at(rank, rank) * m.at(r, c)) - &(m.at(r, rank) * m.at(rank, c));
                    *m.at_mut(r, c) = num.div_exact(&prev_pivot);
                }
                *m.at_mut(r, rank) = Poly::zero(nvars);
            }
            prev_pivot = piv;
            rank += 1;
        }
        rank
    }
}
