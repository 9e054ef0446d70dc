//! Lie algebras given by structure constants, and the subspace calculus used
//! throughout the tableau machinery.
//!
//! Antisymmetry is built into the storage: constants are kept for index pairs
//! i < j only. The Jacobi identity is a validation step (`check_jacobi`), not
//! a construction invariant, so corrupted inputs can be loaded and diagnosed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::Poly;
use crate::rat::Rat;

/// Finite dimensional Lie algebra over the rationals, by structure constants.
#[derive(Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    /// (i, j) with i < j  ->  sparse [(k, c^k_ij)]
    structure: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl LieAlgebra {
    /// `brackets` lists (i, j, k, c^k_ij) with i < j; entries for the same
    /// (i, j, k) are rejected as ambiguous.
    pub fn new(
        dim: usize,
        basis_names: Vec<String>,
        brackets: Vec<(usize, usize, usize, Rat)>,
    ) -> Result<Self> {
        if basis_names.len() != dim {
            return Err(Error::InvalidInput(format!(
                "{} basis names for dimension {dim}",
                basis_names.len()
            )));
        }
        let mut structure: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for (i, j, k, c) in brackets {
            if i >= j {
                return Err(Error::InvalidInput(format!(
                    "structure constant with i >= j: ({i}, {j})"
                )));
            }
            if j >= dim || k >= dim {
                return Err(Error::InvalidInput(format!(
                    "structure constant index out of range: ({i}, {j}, {k})"
                )));
            }
            if c.is_zero() {
                continue;
            }
            let entry = structure.entry((i, j)).or_default();
            if entry.iter().any(|(k2, _)| *k2 == k) {
                return Err(Error::InvalidInput(format!(
                    "duplicate structure constant for ({i}, {j}, {k})"
                )));
            }
            entry.push((k, c));
        }
        for list in structure.values_mut() {
            list.sort_by_key(|(k, _)| *k);
        }
        Ok(LieAlgebra {
            dim,
            basis_names,
            structure,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        let names = (0..dim).map(|i| format!("e{i}")).collect();
        LieAlgebra::new(dim, names, Vec::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// [e_i, e_j] as a sparse vector, for arbitrary index order.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        if i == j {
            return Vec::new();
        }
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        match self.structure.get(&key) {
            None => Vec::new(),
            Some(list) if sign == 1 => list.clone(),
            Some(list) => list.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    /// [x, y] for dense coordinate vectors.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "bracket of vectors of length {} and {} in dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        let mut out = vec![Rat::zero(); self.dim];
        for (&(i, j), list) in &self.structure {
            let coef = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if coef.is_zero() {
                continue;
            }
            for (k, c) in list {
                out[*k] += &(c * &coef);
            }
        }
        Ok(out)
    }

    /// [x, y] for vectors with polynomial coordinates; used by the symbolic
    /// curvature and torsion checks.
    pub fn bracket_poly(&self, x: &[Poly], y: &[Poly], nvars: usize) -> Vec<Poly> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![Poly::zero(nvars); self.dim];
        for (&(i, j), list) in &self.structure {
            let coef = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if coef.is_zero() {
                continue;
            }
            for (k, c) in list {
                out[*k] = &out[*k] + &coef.scale(c);
            }
        }
        out
    }

    /// Matrix of ad_x : y -> [x, y] in the ambient basis.
    pub fn adjoint(&self, x: &[Rat]) -> Result<RatMatrix> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "adjoint of vector of length {} in dimension {}",
                x.len(),
                self.dim
            )));
        }
        let mut m = RatMatrix::zero(self.dim, self.dim);
        for j in 0..self.dim {
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket_basis(i, j) {
                    let add = xi * &c;
                    *m.at_mut(k, j) = m.at(k, j) + &add;
                }
            }
        }
        Ok(m)
    }

    /// Jacobi identity on all basis triples; returns the violating (i, j, k)
    /// triples, empty when the identity holds.
    pub fn check_jacobi(&self) -> Vec<(usize, usize, usize)> {
        let basis: Vec<Vec<Rat>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![Rat::zero(); self.dim];
                v[i] = Rat::one();
                v
            })
            .collect();
        let mut violations = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let ab_c = self
                        .bracket(&self.bracket(&basis[i], &basis[j]).unwrap(), &basis[k])
                        .unwrap();
                    let bc_a = self
                        .bracket(&self.bracket(&basis[j], &basis[k]).unwrap(), &basis[i])
                        .unwrap();
                    let ca_b = self
                        .bracket(&self.bracket(&basis[k], &basis[i]).unwrap(), &basis[j])
                        .unwrap();
                    let sum: Vec<Rat> = ab_c
                        .iter()
                        .zip(&bc_a)
                        .zip(&ca_b)
                        .map(|((a, b), c)| &(a + b) + c)
                        .collect();
                    if sum.iter().any(|v| !v.is_zero()) {
                        violations.push((i, j, k));
                    }
                }
            }
        }
        violations
    }

    /// Killing form B_ij = trace(ad_i . ad_j). Symmetric.
    pub fn killing_form(&self) -> RatMatrix {
        let ads: Vec<RatMatrix> = (0..self.dim)
            .map(|i| {
                let mut v = vec![Rat::zero(); self.dim];
                v[i] = Rat::one();
                self.adjoint(&v).unwrap()
            })
            .collect();
        let mut b = RatMatrix::zero(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let mut tr = Rat::zero();
                for r in 0..self.dim {
                    for t in 0..self.dim {
                        tr += &(ads[i].at(r, t) * ads[j].at(t, r));
                    }
                }
                *b.at_mut(i, j) = tr.clone();
                *b.at_mut(j, i) = tr;
            }
        }
        b
    }

    /// {X in carrier : [X, s] = 0 for every basis vector s of S}.
    pub fn centralizer(&self, carrier: &Subspace, s: &Subspace) -> Result<Subspace> {
        if carrier.ambient() != self.dim || s.ambient() != self.dim {
            return Err(Error::DimensionMismatch("centralizer ambient".into()));
        }
        let cdim = carrier.dim();
        if cdim == 0 || s.dim() == 0 {
            return Ok(carrier.clone());
        }
        // X = sum t_a v_a; constraints [X, s_b] = 0 stacked over all b.
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for sb in s.basis().row_vectors() {
            let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(cdim);
            for va in carrier.basis().row_vectors() {
                cols.push(self.bracket(&va, &sb)?);
            }
            for comp in 0..self.dim {
                rows.push(cols.iter().map(|col| col[comp].clone()).collect());
            }
        }
        let system = RatMatrix::from_rows(rows);
        let kernel = system.kernel();
        let mut vectors = Vec::new();
        for b in 0..kernel.cols() {
            let coeffs = kernel.col_vec(b);
            let mut v = vec![Rat::zero(); self.dim];
            for (a, va) in carrier.basis().row_vectors().iter().enumerate() {
                for (comp, val) in va.iter().enumerate() {
                    v[comp] += &(&coeffs[a] * val);
                }
            }
            vectors.push(v);
        }
        Ok(Subspace::from_vectors(self.dim, vectors))
    }

    /// {X : B(X, s) = 0 for all s in S} with B the Killing form.
    pub fn killing_orthogonal(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.dim {
            return Err(Error::DimensionMismatch("killing_orthogonal ambient".into()));
        }
        if s.dim() == 0 {
            return Ok(Subspace::full(self.dim));
        }
        let b = self.killing_form();
        let rows: Vec<Vec<Rat>> = s
            .basis()
            .row_vectors()
            .into_iter()
            .map(|sv| b.mul_vec(&sv))
            .collect();
        let system = RatMatrix::from_rows(rows);
        let kernel = system.kernel();
        let vectors = (0..kernel.cols()).map(|c| kernel.col_vec(c)).collect();
        Ok(Subspace::from_vectors(self.dim, vectors))
    }

    /// Structure constants rebased to `new_basis` (rows = new basis vectors,
    /// must be invertible). Names follow the new basis.
    pub fn rebased(&self, new_basis: &RatMatrix, names: Vec<String>) -> Result<LieAlgebra> {
        if new_basis.rows() != self.dim || new_basis.cols() != self.dim {
            return Err(Error::DimensionMismatch("rebased basis shape".into()));
        }
        // Coordinates in the new basis: v = B^T coords  =>  coords = (B^T)^-1 v.
        let bt = new_basis.transpose();
        let inv = bt
            .inverse()
            .ok_or_else(|| Error::InvalidInput("rebased: basis is singular".into()))?;
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let w = self.bracket(&new_basis.row_vec(i), &new_basis.row_vec(j))?;
                let coords = inv.mul_vec(&w);
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        brackets.push((i, j, k, c));
                    }
                }
            }
        }
        LieAlgebra::new(self.dim, names, brackets)
    }

    /// Direct sum; block structure constants, no cross brackets.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let dim = self.dim + other.dim;
        let mut names: Vec<String> = self.basis_names.iter().map(|n| format!("{n}.1")).collect();
        names.extend(other.basis_names.iter().map(|n| format!("{n}.2")));
        let mut brackets = Vec::new();
        for (&(i, j), list) in &self.structure {
            for (k, c) in list {
                brackets.push((i, j, *k, c.clone()));
            }
        }
        let off = self.dim;
        for (&(i, j), list) in &other.structure {
            for (k, c) in list {
                brackets.push((i + off, j + off, *k + off, c.clone()));
            }
        }
        LieAlgebra::new(dim, names, brackets).unwrap()
    }

    /// Flat (i, j, k, c) list sorted by (i, j, k); the JSON wire form.
    pub fn bracket_list(&self) -> Vec<(usize, usize, usize, Rat)> {
        let mut out = Vec::new();
        for (&(i, j), list) in &self.structure {
            for (k, c) in list {
                out.push((i, j, *k, c.clone()));
            }
        }
        out
    }
}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LieAlgebra(dim={}, {} brackets)", self.dim, self.bracket_list().len())
    }
}

#[derive(Serialize, Deserialize)]
struct LieAlgebraWire {
    dim: usize,
    basis: Vec<String>,
    brackets: Vec<(usize, usize, usize, Rat)>,
}

impl Serialize for LieAlgebra {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LieAlgebraWire {
            dim: self.dim,
            basis: self.basis_names.clone(),
            brackets: self.bracket_list(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = LieAlgebraWire::deserialize(deserializer)?;
        LieAlgebra::new(wire.dim, wire.basis, wire.brackets).map_err(serde::de::Error::custom)
    }
}

/// Linear subspace of a fixed ambient space, held in canonical reduced
/// echelon form: two subspaces are equal iff their matrices are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: RatMatrix, // rows = basis vectors, RREF with zero rows dropped
}

impl Subspace {
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Rat>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "subspace vector length mismatch");
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let (r, pivots) = RatMatrix::from_rows(vectors).rref();
        let basis = RatMatrix::from_fn(pivots.len(), ambient, |i, j| r.at(i, j).clone());
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RatMatrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RatMatrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// Remainder of v after reduction against the echelon basis; zero iff
    /// v lies in the subspace.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ambient, "reduce length mismatch");
        let mut w = v.to_vec();
        for row in 0..self.basis.rows() {
            let pivot_col = (0..self.ambient)
                .find(|&c| !self.basis.at(row, c).is_zero())
                .expect("no zero rows in canonical basis");
            if w[pivot_col].is_zero() {
                continue;
            }
            let factor = w[pivot_col].clone();
            for (c, wc) in w.iter_mut().enumerate() {
                let sub = &factor * self.basis.at(row, c);
                *wc = &*wc - &sub;
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Rat::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.row_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "sum ambient mismatch");
        let mut rows = self.basis.row_vectors();
        rows.extend(other.basis.row_vectors());
        Subspace::from_vectors(self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "intersect ambient mismatch");
        // x in both spans: x = a^T S = b^T T. Solve S^T a - T^T b = 0.
        let ds = self.dim();
        let dt = other.dim();
        if ds == 0 || dt == 0 {
            return Subspace::zero(self.ambient);
        }
        let system = RatMatrix::from_fn(self.ambient, ds + dt, |r, c| {
            if c < ds {
                self.basis.at(c, r).clone()
            } else {
                -other.basis.at(c - ds, r)
            }
        });
        let kernel = system.kernel();
        let mut vectors = Vec::new();
        for b in 0..kernel.cols() {
            let coeffs = kernel.col_vec(b);
            let mut v = vec![Rat::zero(); self.ambient];
            for (a, coeff) in coeffs.iter().take(ds).enumerate() {
                for (comp, vc) in v.iter_mut().enumerate() {
                    *vc += &(coeff * self.basis.at(a, comp));
                }
            }
            vectors.push(v);
        }
        Subspace::from_vectors(self.ambient, vectors)
    }

    /// Deterministic complement of `self` inside `t`: walk t's canonical
    /// basis in order and keep each vector that grows the span (echelon-
    /// greedy). Errors unless self is contained in t.
    pub fn complement_in(&self, t: &Subspace) -> Result<Vec<Vec<Rat>>> {
        if !t.contains_subspace(self) {
            return Err(Error::Precondition(
                "complement: subspace is not contained in the carrier".into(),
            ));
        }
        let mut span = self.clone();
        let mut picked = Vec::new();
        for v in t.basis.row_vectors() {
            if !span.contains(&v) {
                let mut rows = span.basis.row_vectors();
                rows.push(v.clone());
                span = Subspace::from_vectors(self.ambient, rows);
                picked.push(v);
            }
        }
        Ok(picked)
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.dim(), self.ambient)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceWire {
    ambient: usize,
    vectors: Vec<Vec<Rat>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceWire {
            ambient: self.ambient,
            vectors: self.basis.row_vectors(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SubspaceWire::deserialize(deserializer)?;
        for v in &wire.vectors {
            if v.len() != wire.ambient {
                return Err(serde::de::Error::custom("subspace vector length mismatch"));
            }
        }
        Ok(Subspace::from_vectors(wire.ambient, wire.vectors))
    }
}
