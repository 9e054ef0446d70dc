//! Tableaux inside Hom(a, b) for subspaces a, b of a Lie algebra: the
//! antisymmetrization map rho, first prolongation, flag filtrations and
//! Cartan characters, the involutivity test, and the symbolic curvature and
//! torsion conditions that make a subspace a tableau over the algebra.
//!
//! The two quantified conditions are checked for every element at once by
//! substituting Q = Q0 + p^eps Q_eps with symbolic fiber coordinates p and
//! demanding identically-zero polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Subspace};
use crate::matrix::RatMatrix;
use crate::poly::{Poly, PolyMatrix};
use crate::rat::Rat;

/// A subspace of Hom(a, b) presented by ordered generator matrices over the
/// chosen bases of a and b, with an optional affine base point.
#[derive(Clone, Debug)]
pub struct TableauSpec {
    pub algebra: LieAlgebra,
    pub a: Subspace,
    pub b: Subspace,
    /// Ordered basis of a (ambient vectors); generator columns refer to it.
    pub a_basis: Vec<Vec<Rat>>,
    /// Ordered basis of b (ambient vectors); generator rows refer to it.
    pub b_basis: Vec<Vec<Rat>>,
    /// Generators Q_eps, each h x k.
    pub generators: Vec<RatMatrix>,
    /// Optional affine base point Q0 (h x k).
    pub affine_base: Option<RatMatrix>,
    /// Fiber coordinate names, one per generator.
    pub coords: Vec<String>,
}

/// Full flag of a, by an ordered basis whose prefixes span the flag steps.
/// Vectors are in a-basis coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Flag {
    pub vectors: Vec<Vec<Rat>>,
    pub certificate: FlagCertificate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum FlagCertificate {
    /// All sampled trial flags agreed on the filtration dims.
    #[serde(rename = "randomized")]
    Randomized {
        seed: u64,
        trials: usize,
        attained: Vec<usize>,
    },
    /// Dims certified symbolically over the rational function field.
    #[serde(rename = "exact")]
    Exact { generic_dims: Vec<usize> },
}

/// How to search for a generic flag.
#[derive(Clone, Copy, Debug)]
pub enum FlagMode {
    Randomized { seed: u64, trials: usize },
    Exact { seed: u64 },
}

impl Default for FlagMode {
    fn default() -> Self {
        FlagMode::Randomized { seed: 0, trials: 32 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterReport {
    /// Count of generator 1-forms of the associated Pfaffian system,
    /// h + (dim g - k - h).
    pub s0: usize,
    /// s'_1 ... s'_k.
    pub characters: Vec<usize>,
    /// dim A_j(flag) for j = 0..k.
    pub filtration_dims: Vec<usize>,
    pub prolongation_dim: usize,
    pub involutive: bool,
    pub flag: Flag,
    /// True when A_k(flag) != 0; reported rather than assumed away.
    pub top_filtration_nonzero: bool,
}

/// Basis of the first prolongation: elements F of Hom(a, A) stored as m x k
/// coefficient matrices, F(A_i) = F[eps][i] Q_eps.
#[derive(Clone, Debug)]
pub struct ProlongationResult {
    pub basis: Vec<RatMatrix>,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum ConditionOutcome {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail { witness: ConditionWitness },
    #[serde(rename = "skipped")]
    Skipped { reason: String },
}

impl ConditionOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionOutcome::Pass)
    }
}

/// A nonzero polynomial coefficient exhibiting a condition failure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionWitness {
    /// Index pair (i, l) of the offending a-basis directions, 0-based.
    pub pair: (usize, usize),
    /// Which component carries the nonzero polynomial.
    pub component: String,
    /// The polynomial, rendered in the fiber coordinates.
    pub poly: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvolutionReport {
    pub involutive: bool,
    pub prolongation_dim: usize,
    /// s'_1 + 2 s'_2 + ... + k s'_k.
    pub weighted_character_sum: usize,
    /// The weighted sum also equals dim A + dim A_1 + ... + dim A_{k-1};
    /// checked, not assumed.
    pub sum_identity_holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition1: ConditionOutcome,
    pub condition2: ConditionOutcome,
    pub condition3: InvolutionReport,
    pub overall: bool,
}

impl TableauSpec {
    /// Dimension of a.
    pub fn k(&self) -> usize {
        self.a_basis.len()
    }

    /// Dimension of b.
    pub fn h(&self) -> usize {
        self.b_basis.len()
    }

    /// Number of generators = dim of the (linear part of the) tableau.
    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn is_affine(&self) -> bool {
        self.affine_base.as_ref().is_some_and(|q0| !q0.is_zero())
    }

    /// Structural validation: shapes, spans, independence, a and b disjoint.
    pub fn validate(&self) -> Result<()> {
        let n = self.algebra.dim();
        let (k, h, m) = (self.k(), self.h(), self.m());
        if self.a.ambient() != n || self.b.ambient() != n {
            return Err(Error::DimensionMismatch("subspace ambient != algebra dim".into()));
        }
        for v in self.a_basis.iter().chain(&self.b_basis) {
            if v.len() != n {
                return Err(Error::DimensionMismatch("basis vector length".into()));
            }
        }
        let a_span = Subspace::from_vectors(n, self.a_basis.clone());
        if a_span != self.a || a_span.dim() != k {
            return Err(Error::InvalidInput(
                "a_basis does not form a basis of a".into(),
            ));
        }
        let b_span = Subspace::from_vectors(n, self.b_basis.clone());
        if b_span != self.b || b_span.dim() != h {
            return Err(Error::InvalidInput(
                "b_basis does not form a basis of b".into(),
            ));
        }
        if self.a.intersect(&self.b).dim() != 0 {
            return Err(Error::InvalidInput("a and b intersect nontrivially".into()));
        }
        for q in &self.generators {
            if q.rows() != h || q.cols() != k {
                return Err(Error::DimensionMismatch(format!(
                    "generator shape {}x{}, expected {h}x{k}",
                    q.rows(),
                    q.cols()
                )));
            }
        }
        if let Some(q0) = &self.affine_base {
            if q0.rows() != h || q0.cols() != k {
                return Err(Error::DimensionMismatch("affine base shape".into()));
            }
        }
        if self.coords.len() != m {
            return Err(Error::InvalidInput("one coordinate name per generator".into()));
        }
        // Generators linearly independent as h*k vectors.
        if m > 0 {
            let stack = RatMatrix::from_rows(self.generators.iter().map(RatMatrix::flatten).collect());
            if stack.rank() != m {
                return Err(Error::InvalidInput("generators are linearly dependent".into()));
            }
        }
        Ok(())
    }

    /// Default coordinate names p1..pm.
    pub fn default_coords(m: usize) -> Vec<String> {
        (1..=m).map(|i| format!("p{i}")).collect()
    }

    /// Index pairs (i, l) with i < l, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let k = self.k();
        let mut out = Vec::new();
        for i in 0..k {
            for l in (i + 1)..k {
                out.push((i, l));
            }
        }
        out
    }

    /// Q as an h x k matrix of polynomials in the fiber coordinates:
    /// Q0 + p^eps Q_eps.
    pub fn q_poly(&self) -> PolyMatrix {
        let (h, k, m) = (self.h(), self.k(), self.m());
        PolyMatrix::from_fn(h, k, |j, i| {
            let mut p = match &self.affine_base {
                Some(q0) => Poly::constant(m, q0.at(j, i).clone()),
                None => Poly::zero(m),
            };
            for (eps, q) in self.generators.iter().enumerate() {
                let c = q.at(j, i);
                if !c.is_zero() {
                    p = &p + &Poly::var(m, eps).scale(c);
                }
            }
            p
        })
    }

    /// Matrix of rho : Hom(a, A) -> b (x) Lambda^2 a*.
    /// Rows are (pair, j) with row = pair_index * h + j; columns are
    /// (eps, i) with col = eps * k + i.
    /// rho(F)(A_i, A_l) = (F(A_i)(A_l) - F(A_l)(A_i)) / 2.
    pub fn rho_matrix(&self) -> RatMatrix {
        let (h, k, m) = (self.h(), self.k(), self.m());
        let pairs = self.pairs();
        let half = Rat::new(1, 2);
        let mut mat = RatMatrix::zero(pairs.len() * h, m * k);
        for (pi, &(i, l)) in pairs.iter().enumerate() {
            for j in 0..h {
                let row = pi * h + j;
                for eps in 0..m {
                    // F^eps_i contributes +(1/2) Q_eps[j][l]
                    let v = mat.at(row, eps * k + i) + &(&half * self.generators[eps].at(j, l));
                    *mat.at_mut(row, eps * k + i) = v;
                    // F^eps_l contributes -(1/2) Q_eps[j][i]
                    let v = mat.at(row, eps * k + l) - &(&half * self.generators[eps].at(j, i));
                    *mat.at_mut(row, eps * k + l) = v;
                }
            }
        }
        mat
    }

    /// Apply rho to F given as an m x k coefficient matrix. Output indexed
    /// like the rows of `rho_matrix`.
    pub fn rho(&self, f: &RatMatrix) -> Result<Vec<Rat>> {
        let (k, m) = (self.k(), self.m());
        if f.rows() != m || f.cols() != k {
            return Err(Error::DimensionMismatch(format!(
                "rho argument shape {}x{}, expected {m}x{k}",
                f.rows(),
                f.cols()
            )));
        }
        Ok(self.rho_matrix().mul_vec(&f.flatten()))
    }

    /// Image of rho as a subspace of the b (x) Lambda^2 a* coordinates.
    pub fn rho_image(&self) -> Subspace {
        let mat = self.rho_matrix();
        let cols = (0..mat.cols()).map(|c| mat.col_vec(c)).collect();
        Subspace::from_vectors(mat.rows(), cols)
    }

    /// First prolongation: kernel of rho, cross-checked against the
    /// symmetric-tensor intersection (A (x) a*) meet (b (x) S^2 a*).
    /// The two routes must agree; a mismatch is an internal error.
    pub fn prolongation(&self) -> ProlongationResult {
        let (h, k, m) = (self.h(), self.k(), self.m());
        let kernel = self.rho_matrix().kernel();
        let mut basis = Vec::with_capacity(kernel.cols());
        for c in 0..kernel.cols() {
            let flat = kernel.col_vec(c);
            basis.push(RatMatrix::from_fn(m, k, |eps, i| flat[eps * k + i].clone()));
        }

        // Independent route. Tensor coordinates G(A_i)[j][l] flattened as
        // (j * k + l) * k + i.
        let tensor_dim = h * k * k;
        let flat_idx = |j: usize, l: usize, i: usize| (j * k + l) * k + i;
        let mut hom_vectors = Vec::new();
        for q in &self.generators {
            for i in 0..k {
                let mut v = vec![Rat::zero(); tensor_dim];
                for j in 0..h {
                    for l in 0..k {
                        v[flat_idx(j, l, i)] = q.at(j, l).clone();
                    }
                }
                hom_vectors.push(v);
            }
        }
        let hom_side = Subspace::from_vectors(tensor_dim, hom_vectors);
        let mut sym_vectors = Vec::new();
        for j in 0..h {
            for i in 0..k {
                for l in i..k {
                    let mut v = vec![Rat::zero(); tensor_dim];
                    v[flat_idx(j, l, i)] = &v[flat_idx(j, l, i)] + &Rat::one();
                    v[flat_idx(j, i, l)] = &v[flat_idx(j, i, l)] + &Rat::one();
                    sym_vectors.push(v);
                }
            }
        }
        let sym_side = Subspace::from_vectors(tensor_dim, sym_vectors);
        let meet = hom_side.intersect(&sym_side);

        let mut pushed = Vec::new();
        for f in &basis {
            let mut v = vec![Rat::zero(); tensor_dim];
            for i in 0..k {
                for (eps, q) in self.generators.iter().enumerate() {
                    for j in 0..h {
                        for l in 0..k {
                            v[flat_idx(j, l, i)] += &(f.at(eps, i) * q.at(j, l));
                        }
                    }
                }
            }
            pushed.push(v);
        }
        let pushed_span = Subspace::from_vectors(tensor_dim, pushed);
        assert_eq!(
            pushed_span, meet,
            "prolongation routes disagree: kernel of rho vs symmetric intersection"
        );

        ProlongationResult {
            dim: basis.len(),
            basis,
        }
    }

    /// dim A_j(flag) for j = 0..k, where A_j = {Q in A : Q(v_1) = ... =
    /// Q(v_j) = 0}. Flag vectors are in a-basis coordinates.
    pub fn filtration_dims(&self, flag_vectors: &[Vec<Rat>]) -> Vec<usize> {
        let (h, m) = (self.h(), self.m());
        let mut dims = vec![m];
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for v in flag_vectors {
            // Q(v) = 0 adds h rows: sum_eps x_eps (Q_eps v)[j] = 0.
            let images: Vec<Vec<Rat>> = self.generators.iter().map(|q| q.mul_vec(v)).collect();
            for j in 0..h {
                rows.push(images.iter().map(|im| im[j].clone()).collect());
            }
            let rank = if rows.is_empty() || m == 0 {
                0
            } else {
                RatMatrix::from_rows(rows.clone()).rank()
            };
            dims.push(m - rank);
        }
        dims
    }

    /// Certified generic filtration dims: flag coordinates as indeterminates,
    /// ranks over the rational function field.
    fn generic_dims_exact(&self) -> Vec<usize> {
        let (h, k, m) = (self.h(), self.k(), self.m());
        let nlam = k * k; // lambda[i*k + c]: coordinate c of flag vector i
        let mut dims = vec![m];
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        for i in 0..k {
            for j in 0..h {
                let row: Vec<Poly> = (0..m)
                    .map(|eps| {
                        let mut p = Poly::zero(nlam);
                        for c in 0..k {
                            let coef = self.generators[eps].at(j, c);
                            if !coef.is_zero() {
                                p = &p + &Poly::var(nlam, i * k + c).scale(coef);
                            }
                        }
                        p
                    })
                    .collect();
                rows.push(row);
            }
            let rank = if rows.is_empty() || m == 0 {
                0
            } else {
                PolyMatrix::from_fn(rows.len(), m, |r, c| rows[r][c].clone()).poly_rank()
            };
            dims.push(m - rank);
        }
        dims
    }

    /// Search for a generic flag. Randomized mode accepts only when every
    /// trial agrees on the filtration dims and escalates to exact mode on
    /// any disagreement. Exact mode certifies the dims symbolically, then
    /// hunts for a small-integer witness flag attaining them.
    pub fn generic_flag(&self, mode: FlagMode) -> Result<Flag> {
        let k = self.k();
        if k == 1 {
            // The flag manifold is a point.
            let v = vec![vec![Rat::one()]];
            let dims = self.filtration_dims(&v);
            return Ok(Flag {
                vectors: v,
                certificate: FlagCertificate::Exact { generic_dims: dims },
            });
        }
        match mode {
            FlagMode::Randomized { seed, trials } => {
                let trials = trials.max(1);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut sampled: Vec<(Vec<Vec<Rat>>, Vec<usize>)> = Vec::new();
                for _ in 0..trials {
                    let flag = sample_flag(&mut rng, k);
                    let dims = self.filtration_dims(&flag);
                    sampled.push((flag, dims));
                }
                let all_agree = sampled.iter().all(|(_, d)| *d == sampled[0].1);
                if !all_agree {
                    return self.generic_flag(FlagMode::Exact { seed });
                }
                // Deterministic tie-break: lexicographically smallest basis.
                let (vectors, attained) = sampled
                    .into_iter()
                    .min_by(|(f1, _), (f2, _)| f1.cmp(f2))
                    .unwrap();
                Ok(Flag {
                    vectors,
                    certificate: FlagCertificate::Randomized {
                        seed,
                        trials,
                        attained,
                    },
                })
            }
            FlagMode::Exact { seed } => {
                let generic_dims = self.generic_dims_exact();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..200 {
                    let flag = sample_flag(&mut rng, k);
                    if self.filtration_dims(&flag) == generic_dims {
                        return Ok(Flag {
                            vectors: flag,
                            certificate: FlagCertificate::Exact { generic_dims },
                        });
                    }
                }
                Err(Error::FlagWitnessNotFound { dims: generic_dims })
            }
        }
    }

    /// Character report along a generic flag. Characters and prolongation of
    /// an affine tableau are those of its linear part.
    pub fn characters(&self, mode: FlagMode) -> Result<CharacterReport> {
        let flag = self.generic_flag(mode)?;
        let dims = self.filtration_dims(&flag.vectors);
        let k = self.k();
        let characters: Vec<usize> = (1..=k).map(|j| dims[j - 1] - dims[j]).collect();
        let prolongation_dim = self.prolongation().dim;
        let weighted: usize = characters.iter().enumerate().map(|(idx, s)| (idx + 1) * s).sum();
        Ok(CharacterReport {
            s0: self.algebra.dim() - k,
            characters,
            filtration_dims: dims.clone(),
            prolongation_dim,
            involutive: prolongation_dim == weighted,
            flag,
            top_filtration_nonzero: dims[k] != 0,
        })
    }

    /// Cartan's test on the tableau side: dim A^(1) <= s'_1 + 2 s'_2 + ...,
    /// equality iff involutive. Also verifies the identity expressing the
    /// weighted sum through the filtration dims.
    pub fn involution_test(&self, mode: FlagMode) -> Result<InvolutionReport> {
        let report = self.characters(mode)?;
        let weighted = report.weighted_character_sum();
        let k = self.k();
        let dims = &report.filtration_dims;
        let identity_rhs: usize = dims[..k].iter().sum();
        Ok(InvolutionReport {
            involutive: report.prolongation_dim == weighted,
            prolongation_dim: report.prolongation_dim,
            weighted_character_sum: weighted,
            // Holds exactly when A_k(flag) = 0; verified, not assumed.
            sum_identity_holds: weighted == identity_rhs,
        })
    }

    /// Ordered complement of a (+) b inside the algebra (echelon-greedy);
    /// the gamma-frame directions.
    pub fn complement_basis(&self) -> Result<Vec<Vec<Rat>>> {
        let ab = self.a.sum(&self.b);
        ab.complement_in(&Subspace::full(self.algebra.dim()))
    }

    /// Change into the adapted frame (a_basis, b_basis, complement): returns
    /// (frame rows, matrix sending ambient vectors to adapted coordinates).
    pub fn adapted_frame(&self) -> Result<(Vec<Vec<Rat>>, RatMatrix)> {
        self.adapted_frame_with(self.complement_basis()?)
    }

    /// Adapted frame with an explicitly chosen complement.
    pub fn adapted_frame_with(&self, complement: Vec<Vec<Rat>>) -> Result<(Vec<Vec<Rat>>, RatMatrix)> {
        let mut rows = self.a_basis.clone();
        rows.extend(self.b_basis.iter().cloned());
        rows.extend(complement);
        if rows.len() != self.algebra.dim() {
            return Err(Error::DimensionMismatch("adapted frame is not a basis".into()));
        }
        let frame = RatMatrix::from_rows(rows.clone());
        let to_coords = frame
            .transpose()
            .inverse()
            .ok_or_else(|| Error::InvalidInput("adapted frame is singular".into()))?;
        Ok((rows, to_coords))
    }

    /// For each pair (i < l): the bracket [A_i + Q(A_i), A_l + Q(A_l)] with
    /// symbolic Q, expressed in adapted coordinates (a-part, b-part,
    /// complement-part).
    pub fn symbolic_brackets(&self) -> Result<Vec<Vec<Poly>>> {
        let complement = self.complement_basis()?;
        self.symbolic_brackets_with(complement)
    }

    /// Same as `symbolic_brackets` but against a caller-chosen complement.
    pub fn symbolic_brackets_with(&self, complement: Vec<Vec<Rat>>) -> Result<Vec<Vec<Poly>>> {
        let n = self.algebra.dim();
        let m = self.m();
        let qp = self.q_poly();
        let (_, to_coords) = self.adapted_frame_with(complement)?;
        // Hatted frame vectors: A_i + sum_j Q[j][i] B_j, ambient Poly coords.
        let hats: Vec<Vec<Poly>> = (0..self.k())
            .map(|i| {
                let mut v: Vec<Poly> = self.a_basis[i]
                    .iter()
                    .map(|c| Poly::constant(m, c.clone()))
                    .collect();
                for (j, bj) in self.b_basis.iter().enumerate() {
                    for comp in 0..n {
                        if !bj[comp].is_zero() {
                            v[comp] = &v[comp] + &qp.at(j, i).scale(&bj[comp]);
                        }
                    }
                }
                v
            })
            .collect();
        let mut out = Vec::new();
        for &(i, l) in &self.pairs() {
            let w = self.algebra.bracket_poly(&hats[i], &hats[l], m);
            let coords: Vec<Poly> = (0..n)
                .map(|r| {
                    let mut acc = Poly::zero(m);
                    for (c, wc) in w.iter().enumerate() {
                        let coef = to_coords.at(r, c);
                        if !coef.is_zero() {
                            acc = &acc + &wc.scale(coef);
                        }
                    }
                    acc
                })
                .collect();
            out.push(coords);
        }
        Ok(out)
    }

    /// Condition (1): for every Q in the (affine) tableau the bracket
    /// [A + Q(A), A' + Q(A')] lies in a (+) b. Checked symbolically; the
    /// verdict is complement-independent (it tests a quotient condition).
    pub fn curvature_condition(&self) -> Result<ConditionOutcome> {
        let (k, h) = (self.k(), self.h());
        let pairs = self.pairs();
        let brackets = self.symbolic_brackets()?;
        for (pi, coords) in brackets.iter().enumerate() {
            for (t, poly) in coords.iter().enumerate().skip(k + h) {
                if !poly.is_zero() {
                    return Ok(ConditionOutcome::Fail {
                        witness: ConditionWitness {
                            pair: pairs[pi],
                            component: format!("gamma{}", t - k - h + 1),
                            poly: poly.render(&self.coords),
                        },
                    });
                }
            }
        }
        Ok(ConditionOutcome::Pass)
    }

    /// The torsion tau_Q for symbolic Q, indexed like the rows of
    /// `rho_matrix` (pair-major, then b-component). Meaningful only when
    /// condition (1) holds.
    pub fn symbolic_torsion(&self) -> Result<Vec<Poly>> {
        let (k, h, m) = (self.k(), self.h(), self.m());
        let qp = self.q_poly();
        let brackets = self.symbolic_brackets()?;
        let mut tau = Vec::with_capacity(brackets.len() * h);
        for coords in &brackets {
            let w_a = &coords[..k];
            let w_b = &coords[k..k + h];
            // tau^j = w_b^j - (Q w_a)^j
            for (j, wb) in w_b.iter().enumerate() {
                let mut q_wa = Poly::zero(m);
                for (i, wa) in w_a.iter().enumerate() {
                    q_wa = &q_wa + &(qp.at(j, i) * wa);
                }
                tau.push(wb - &q_wa);
            }
        }
        Ok(tau)
    }

    /// Condition (2): tau_Q lies in Im(rho) for every Q. Im(rho) is a fixed
    /// rational subspace, so the polynomial torsion is reduced against it
    /// coefficient-wise.
    pub fn torsion_condition(&self) -> Result<ConditionOutcome> {
        match self.curvature_condition()? {
            ConditionOutcome::Pass => {}
            _ => {
                return Err(Error::Precondition(
                    "torsion condition requires the curvature condition to hold".into(),
                ))
            }
        }
        let h = self.h();
        let tau = self.symbolic_torsion()?;
        let image = self.rho_image();
        let residual = reduce_poly_vector_mod_subspace(&tau, &image);
        for (idx, poly) in residual.iter().enumerate() {
            if !poly.is_zero() {
                let (pi, j) = (idx / h, idx % h);
                let (i, l) = self.pairs()[pi];
                return Ok(ConditionOutcome::Fail {
                    witness: ConditionWitness {
                        pair: (i, l),
                        component: format!("beta{} a{}^a{}", j + 1, i + 1, l + 1),
                        poly: poly.render(&self.coords),
                    },
                });
            }
        }
        Ok(ConditionOutcome::Pass)
    }

    /// Run all three conditions of the tableau definition and aggregate.
    pub fn is_tableau_over(&self, mode: FlagMode) -> Result<ConditionReport> {
        let condition1 = self.curvature_condition()?;
        let condition2 = if condition1.passed() {
            self.torsion_condition()?
        } else {
            ConditionOutcome::Skipped {
                reason: "curvature condition fails; torsion is undefined".into(),
            }
        };
        let condition3 = self.involution_test(mode)?;
        let overall = condition1.passed() && condition2.passed() && condition3.involutive;
        Ok(ConditionReport {
            condition1,
            condition2,
            condition3,
            overall,
        })
    }
}

impl CharacterReport {
    pub fn weighted_character_sum(&self) -> usize {
        self.characters
            .iter()
            .enumerate()
            .map(|(idx, s)| (idx + 1) * s)
            .sum()
    }
}

/// Reduce a vector of polynomials (one per ambient coordinate of `space`)
/// against the subspace, monomial by monomial; returns the residuals.
pub(crate) fn reduce_poly_vector_mod_subspace(polys: &[Poly], space: &Subspace) -> Vec<Poly> {
    assert_eq!(polys.len(), space.ambient());
    let nvars = polys.first().map_or(0, Poly::nvars);
    let mut monomials: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    for p in polys {
        for (e, _) in p.terms() {
            monomials.insert(e.clone());
        }
    }
    let mut residual = vec![Poly::zero(nvars); polys.len()];
    for mono in monomials {
        let coeff_vec: Vec<Rat> = polys.iter().map(|p| p.coeff(&mono)).collect();
        let rem = space.reduce(&coeff_vec);
        for (r, c) in residual.iter_mut().zip(rem) {
            if !c.is_zero() {
                *r = &*r + &monomial(nvars, &mono).scale(&c);
            }
        }
    }
    residual
}

fn monomial(nvars: usize, exps: &[u32]) -> Poly {
    let mut p = Poly::one(nvars);
    for (i, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            p = &p * &Poly::var(nvars, i);
        }
    }
    p
}

/// Random full flag: k x k integer matrix with entries in [-9, 9], resampled
/// until invertible.
fn sample_flag(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<Rat>> {
    loop {
        let flag: Vec<Vec<Rat>> = (0..k)
            .map(|_| (0..k).map(|_| Rat::from_int(rng.gen_range(-9..10))).collect())
            .collect();
        if RatMatrix::from_rows(flag.clone()).rank() == k {
            return flag;
        }
    }
}

// --- JSON wire form -------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AlgebraRef {
    Name(String),
    Inline(LieAlgebra),
}

#[derive(Serialize, Deserialize)]
struct TableauWire {
    algebra: AlgebraRef,
    a: Vec<Vec<Rat>>,
    b: Vec<Vec<Rat>>,
    a_basis: Vec<Vec<Rat>>,
    b_basis: Vec<Vec<Rat>>,
    generators: Vec<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    affine_base: Option<RatMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<String>>,
}

impl Serialize for TableauSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TableauWire {
            algebra: AlgebraRef::Inline(self.algebra.clone()),
            a: self.a.basis().row_vectors(),
            b: self.b.basis().row_vectors(),
            a_basis: self.a_basis.clone(),
            b_basis: self.b_basis.clone(),
            generators: self.generators.clone(),
            affine_base: self.affine_base.clone(),
            coords: Some(self.coords.clone()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TableauSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = TableauWire::deserialize(deserializer)?;
        let algebra = match wire.algebra {
            AlgebraRef::Inline(l) => l,
            AlgebraRef::Name(name) => catalog::lookup_algebra(&name)
                .ok_or_else(|| D::Error::custom(format!("unknown algebra reference {name:?}")))?,
        };
        let n = algebra.dim();
        let m = wire.generators.len();
        let spec = TableauSpec {
            algebra,
            a: Subspace::from_vectors(n, wire.a),
            b: Subspace::from_vectors(n, wire.b),
            a_basis: wire.a_basis,
            b_basis: wire.b_basis,
            generators: wire.generators,
            affine_base: wire.affine_base,
            coords: wire.coords.unwrap_or_else(|| TableauSpec::default_coords(m)),
        };
        spec.validate().map_err(D::Error::custom)?;
        Ok(spec)
    }
}
