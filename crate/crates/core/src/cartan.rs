//! Cartan tableaux from symmetric decompositions of semisimple Lie algebras:
//! decomposition verification, maximal abelian subspaces, regular elements,
//! the embedding of m into Hom(a, b) by X -> -ad_X, and the property suite
//! for the resulting tableau (characters, prolongation, mu-map).

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Subspace};
use crate::matrix::RatMatrix;
use crate::rat::Rat;
use crate::tableau::{ConditionReport, FlagMode, TableauSpec};

/// g = g0 (+) g1 with [g0,g0] in g0, [g0,g1] in g1, [g1,g1] in g0,
/// over a semisimple algebra (nondegenerate Killing form).
#[derive(Clone, Debug)]
pub struct SymmetricDecomposition {
    pub algebra: LieAlgebra,
    pub g0: Subspace,
    pub g1: Subspace,
}

/// Which requirement of a symmetric decomposition failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionViolation {
    /// g0 (+) g1 is not all of g, or they overlap.
    NotDirectSum,
    /// [g0, g0] not contained in g0 (witness basis pair).
    BracketG0G0 { pair: (usize, usize) },
    /// [g0, g1] not contained in g1.
    BracketG0G1 { pair: (usize, usize) },
    /// [g1, g1] not contained in g0.
    BracketG1G1 { pair: (usize, usize) },
    /// Killing form is degenerate: the algebra is not semisimple.
    KillingDegenerate { rank: usize },
}

impl std::fmt::Display for DecompositionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecompositionViolation::NotDirectSum => write!(f, "g0 (+) g1 is not a direct sum of g"),
            DecompositionViolation::BracketG0G0 { pair } => {
                write!(f, "[g0, g0] escapes g0 at basis pair {pair:?}")
            }
            DecompositionViolation::BracketG0G1 { pair } => {
                write!(f, "[g0, g1] escapes g1 at basis pair {pair:?}")
            }
            DecompositionViolation::BracketG1G1 { pair } => {
                write!(f, "[g1, g1] escapes g0 at basis pair {pair:?}")
            }
            DecompositionViolation::KillingDegenerate { rank } => {
                write!(f, "Killing form has rank {rank} < dim g")
            }
        }
    }
}

/// Why a candidate abelian subspace fails to be maximal abelian.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum MaximalityFailure {
    NotAbelian { pair: (usize, usize) },
    /// A vector of g1 outside a that commutes with all of a.
    NotMaximal { witness: Vec<Rat> },
}

/// The subspaces attached to a choice of maximal abelian a in g1.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub decomposition: SymmetricDecomposition,
    pub a: Subspace,
    /// m = a-perp (Killing) intersect g1.
    pub m: Subspace,
    /// b = g0 intersect (g0)_a-perp.
    pub b: Subspace,
    /// Deterministic complement of b in g0.
    pub n: Subspace,
    /// Ordered basis of a consisting of regular elements (ambient vectors).
    pub regular_basis: Vec<Vec<Rat>>,
    pub m_basis: Vec<Vec<Rat>>,
    pub b_basis: Vec<Vec<Rat>>,
    pub n_basis: Vec<Vec<Rat>>,
}

/// Report of the Cartan-tableau property suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanVerification {
    pub conditions: ConditionReport,
    pub dim_m: usize,
    pub characters: Vec<usize>,
    /// s'_1 = dim m and s'_j = 0 for j >= 2.
    pub characters_expected: bool,
    /// dim m^(1) = dim m.
    pub prolongation_matches: bool,
    pub mu_injective: bool,
    pub mu_image_in_prolongation: bool,
    pub mu_image_equals_prolongation: bool,
    pub overall: bool,
}

impl SymmetricDecomposition {
    /// Check the three bracket inclusions, directness, and semisimplicity.
    pub fn verify(&self) -> std::result::Result<(), DecompositionViolation> {
        let n = self.algebra.dim();
        if self.g0.sum(&self.g1).dim() != n || self.g0.intersect(&self.g1).dim() != 0 {
            return Err(DecompositionViolation::NotDirectSum);
        }
        let check = |left: &Subspace,
                     right: &Subspace,
                     target: &Subspace|
         -> std::result::Result<(), (usize, usize)> {
            for (i, x) in left.basis().row_vectors().iter().enumerate() {
                for (j, y) in right.basis().row_vectors().iter().enumerate() {
                    let w = self.algebra.bracket(x, y).expect("validated dims");
                    if !target.contains(&w) {
                        return Err((i, j));
                    }
                }
            }
            Ok(())
        };
        check(&self.g0, &self.g0, &self.g0)
            .map_err(|pair| DecompositionViolation::BracketG0G0 { pair })?;
        check(&self.g0, &self.g1, &self.g1)
            .map_err(|pair| DecompositionViolation::BracketG0G1 { pair })?;
        check(&self.g1, &self.g1, &self.g0)
            .map_err(|pair| DecompositionViolation::BracketG1G1 { pair })?;
        let rank = self.algebra.killing_form().rank();
        if rank != n {
            return Err(DecompositionViolation::KillingDegenerate { rank });
        }
        Ok(())
    }

    /// a must be abelian and equal to its own centralizer inside g1.
    pub fn check_maximal_abelian(
        &self,
        a: &Subspace,
    ) -> Result<std::result::Result<(), MaximalityFailure>> {
        if !self.g1.contains_subspace(a) {
            return Err(Error::Precondition("a is not contained in g1".into()));
        }
        let basis = a.basis().row_vectors();
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let w = self.algebra.bracket(&basis[i], &basis[j])?;
                if w.iter().any(|c| !c.is_zero()) {
                    return Ok(Err(MaximalityFailure::NotAbelian { pair: (i, j) }));
                }
            }
        }
        let centralizer = self.algebra.centralizer(&self.g1, a)?;
        if centralizer != *a {
            // Any centralizing vector outside a witnesses the extension.
            let witness = centralizer
                .basis()
                .row_vectors()
                .into_iter()
                .find(|v| !a.contains(v))
                .expect("centralizer differs from a, so some basis vector escapes");
            return Ok(Err(MaximalityFailure::NotMaximal { witness }));
        }
        Ok(Ok(()))
    }

    /// m, b, n for a chosen abelian a.
    pub fn attached_subspaces(&self, a: &Subspace) -> Result<(Subspace, Subspace, Subspace)> {
        let m = self.algebra.killing_orthogonal(a)?.intersect(&self.g1);
        let g0_a = self.algebra.centralizer(&self.g0, a)?;
        let b = self.algebra.killing_orthogonal(&g0_a)?.intersect(&self.g0);
        let n_basis = b.complement_in(&self.g0)?;
        let n = Subspace::from_vectors(self.algebra.dim(), n_basis);
        Ok((m, b, n))
    }

    /// Operational regularity of A in a: ad_A exchanges m and b bijectively.
    pub fn is_regular(&self, m: &Subspace, b: &Subspace, a_elem: &[Rat]) -> Result<bool> {
        if m.dim() != b.dim() {
            return Ok(false);
        }
        let maps_bijectively = |from: &Subspace, to: &Subspace| -> Result<bool> {
            let mut images = Vec::new();
            for x in from.basis().row_vectors() {
                let w = self.algebra.bracket(a_elem, &x)?;
                if !to.contains(&w) {
                    return Ok(false);
                }
                images.push(w);
            }
            if images.is_empty() {
                return Ok(true);
            }
            Ok(RatMatrix::from_rows(images).rank() == from.dim())
        };
        Ok(maps_bijectively(m, b)? && maps_bijectively(b, m)?)
    }

    /// Build the Cartan tableau: m embedded into Hom(a, b) by X -> -ad_X,
    /// over an ordered basis of a made of regular elements.
    pub fn build_cartan_tableau(&self, a: &Subspace) -> Result<(TableauSpec, CartanData)> {
        if let Err(violation) = self.verify() {
            return Err(Error::Precondition(format!(
                "not a symmetric decomposition: {violation}"
            )));
        }
        match self.check_maximal_abelian(a)? {
            Ok(()) => {}
            Err(MaximalityFailure::NotAbelian { pair }) => {
                return Err(Error::Precondition(format!(
                    "a is not abelian: basis pair {pair:?} has nonzero bracket"
                )))
            }
            Err(MaximalityFailure::NotMaximal { witness }) => {
                return Err(Error::Precondition(format!(
                    "a is not maximal abelian in g1; extension witness {witness:?}"
                )))
            }
        }
        let (m, b, n) = self.attached_subspaces(a)?;
        let regular_basis = self.regular_basis_search(a, &m, &b, 25)?;

        let m_basis = m.basis().row_vectors();
        let b_basis = b.basis().row_vectors();
        let n_basis = n.basis().row_vectors();
        let h = b_basis.len();
        let k = regular_basis.len();

        // Coordinates in b: solve against the stacked basis transpose.
        let b_t = RatMatrix::from_rows(b_basis.clone()).transpose();
        let mut generators = Vec::with_capacity(m_basis.len());
        for x in &m_basis {
            let mut q = RatMatrix::zero(h, k);
            for (i, a_i) in regular_basis.iter().enumerate() {
                // Q_X(A_i) = -[X, A_i]; lands in b for a symmetric pair.
                let w = self.algebra.bracket(x, a_i)?;
                let neg: Vec<Rat> = w.iter().map(|c| -c).collect();
                if !b.contains(&neg) {
                    return Err(Error::Precondition(
                        "-ad_X does not map a into b; setup is not symmetric".into(),
                    ));
                }
                let coords = b_t.solve(&neg).expect("membership verified above");
                for (j, c) in coords.into_iter().enumerate() {
                    *q.at_mut(j, i) = c;
                }
            }
            generators.push(q);
        }

        let coords = TableauSpec::default_coords(generators.len());
        let spec = TableauSpec {
            algebra: self.algebra.clone(),
            a: a.clone(),
            b: b.clone(),
            a_basis: regular_basis.clone(),
            b_basis: b_basis.clone(),
            generators,
            affine_base: None,
            coords,
        };
        spec.validate().map_err(|_| {
            Error::InvalidInput(
                "the embedding X -> -ad_X is not injective; non-regular setup".into(),
            )
        })?;
        let data = CartanData {
            decomposition: self.clone(),
            a: a.clone(),
            m,
            b,
            n,
            regular_basis,
            m_basis,
            b_basis,
            n_basis,
        };
        Ok((spec, data))
    }

    /// Deterministic search for k independent regular elements: iterate
    /// integer coordinate vectors over the echelon basis of a by increasing
    /// max-norm, coordinates descending within each shell.
    fn regular_basis_search(
        &self,
        a: &Subspace,
        m: &Subspace,
        b: &Subspace,
        bound: i64,
    ) -> Result<Vec<Vec<Rat>>> {
        let k = a.dim();
        if k == 0 {
            return Ok(Vec::new());
        }
        let a_basis = a.basis().row_vectors();
        let n = self.algebra.dim();
        let mut found: Vec<Vec<Rat>> = Vec::new();
        let mut span = Subspace::zero(n);
        for norm in 1..=bound {
            for coords in shell_vectors(k, norm) {
                let mut v = vec![Rat::zero(); n];
                for (c, av) in coords.iter().zip(&a_basis) {
                    for (comp, val) in av.iter().enumerate() {
                        v[comp] += &(&Rat::from_int(*c) * val);
                    }
                }
                if span.contains(&v) {
                    continue;
                }
                if self.is_regular(m, b, &v)? {
                    found.push(v.clone());
                    let mut rows = span.basis().row_vectors();
                    rows.push(v);
                    span = Subspace::from_vectors(n, rows);
                    if found.len() == k {
                        return Ok(found);
                    }
                }
            }
        }
        Err(Error::NoRegularBasis { bound })
    }
}

/// Verify the structural properties of a built Cartan tableau: the three
/// tableau conditions, the character profile (dim m, 0, ..., 0), the
/// prolongation dimension, and the mu-map lower bound.
pub fn verify_cartan_tableau(
    spec: &TableauSpec,
    data: &CartanData,
    mode: FlagMode,
) -> Result<CartanVerification> {
    let conditions = spec.is_tableau_over(mode)?;
    let report = spec.characters(mode)?;
    let dim_m = data.m.dim();
    let characters_expected = report.characters.first().copied().unwrap_or(0) == dim_m
        && report.characters.iter().skip(1).all(|&s| s == 0);
    let prolongation = spec.prolongation();
    let prolongation_matches = prolongation.dim == dim_m;

    // mu_X : a -> m defined by [mu_X(A_j), A_1] = [X, A_j].
    let k = spec.k();
    let m_count = data.m_basis.len();
    let algebra = &spec.algebra;
    let mut mu_injective = m_count == 0;
    let mut mu_vectors: Vec<Vec<Rat>> = Vec::new();
    let mut mu_in_prolongation = true;
    if m_count > 0 {
        // Matrix of the map c -> [sum c_mu X_mu, A_1], ambient target.
        let a1 = &data.regular_basis[0];
        let cols: Vec<Vec<Rat>> = data
            .m_basis
            .iter()
            .map(|x| algebra.bracket(x, a1).expect("validated"))
            .collect();
        let ad_matrix = RatMatrix::from_fn(algebra.dim(), m_count, |r, c| cols[c][r].clone());
        for x in &data.m_basis {
            // F in Hom(a, A): F[mu][j] = m-coordinates of mu_X(A_j).
            let mut f = RatMatrix::zero(m_count, k);
            for (j, aj) in data.regular_basis.iter().enumerate() {
                let rhs = algebra.bracket(x, aj)?;
                let coords = ad_matrix.solve(&rhs).ok_or_else(|| {
                    Error::Precondition("mu-map system unsolvable; A_1 is not regular".into())
                })?;
                for (mu, c) in coords.into_iter().enumerate() {
                    *f.at_mut(mu, j) = c;
                }
            }
            if !spec.rho(&f)?.iter().all(Rat::is_zero) {
                mu_in_prolongation = false;
            }
            mu_vectors.push(f.flatten());
        }
        mu_injective = RatMatrix::from_rows(mu_vectors.clone()).rank() == m_count;
    }
    let mu_span = Subspace::from_vectors(m_count * k, mu_vectors);
    let prolongation_span = Subspace::from_vectors(
        m_count * k,
        prolongation.basis.iter().map(RatMatrix::flatten).collect(),
    );
    let mu_image_equals_prolongation = mu_span == prolongation_span;

    let overall = conditions.overall
        && characters_expected
        && prolongation_matches
        && mu_injective
        && mu_in_prolongation
        && mu_image_equals_prolongation;
    Ok(CartanVerification {
        conditions,
        dim_m,
        characters: report.characters,
        characters_expected,
        prolongation_matches,
        mu_injective,
        mu_image_in_prolongation: mu_in_prolongation,
        mu_image_equals_prolongation,
        overall,
    })
}

/// Integer vectors of max-norm exactly `norm`, coordinates iterated from
/// +norm down to -norm, lexicographically by position.
fn shell_vectors(len: usize, norm: i64) -> Vec<Vec<i64>> {
    fn rec(pos: usize, len: usize, norm: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos == len {
            if current.iter().any(|&c| c.abs() == norm) {
                out.push(current.clone());
            }
            return;
        }
        let mut v = norm;
        loop {
            current[pos] = v;
            rec(pos + 1, len, norm, current, out);
            if v == -norm {
                break;
            }
            v -= 1;
        }
    }
    let mut out = Vec::new();
    rec(0, len, norm, &mut vec![0i64; len], &mut out);
    out
}

/// A decomposition together with the chosen maximal abelian subspace, the
/// unit of input for building a Cartan tableau. The "a" key is optional in
/// the wire form; building requires it.
#[derive(Clone, Debug)]
pub struct DecompositionInput {
    pub decomposition: SymmetricDecomposition,
    pub abelian: Option<Subspace>,
}

// --- JSON wire form -------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AlgebraRef {
    Name(String),
    Inline(LieAlgebra),
}

#[derive(Serialize, Deserialize)]
struct DecompositionWire {
    algebra: AlgebraRef,
    g0: Vec<Vec<Rat>>,
    g1: Vec<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<Vec<Vec<Rat>>>,
}

impl Serialize for DecompositionInput {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionWire {
            algebra: AlgebraRef::Inline(self.decomposition.algebra.clone()),
            g0: self.decomposition.g0.basis().row_vectors(),
            g1: self.decomposition.g1.basis().row_vectors(),
            a: self.abelian.as_ref().map(|a| a.basis().row_vectors()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DecompositionInput {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = DecompositionWire::deserialize(deserializer)?;
        let algebra = match wire.algebra {
            AlgebraRef::Inline(l) => l,
            AlgebraRef::Name(name) => catalog::lookup_algebra(&name)
                .ok_or_else(|| D::Error::custom(format!("unknown algebra reference {name:?}")))?,
        };
        let n = algebra.dim();
        Ok(DecompositionInput {
            decomposition: SymmetricDecomposition {
                algebra,
                g0: Subspace::from_vectors(n, wire.g0),
                g1: Subspace::from_vectors(n, wire.g1),
            },
            abelian: wire.a.map(|a| Subspace::from_vectors(n, a)),
        })
    }
}

impl Serialize for SymmetricDecomposition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionWire {
            algebra: AlgebraRef::Inline(self.algebra.clone()),
            g0: self.g0.basis().row_vectors(),
            g1: self.g1.basis().row_vectors(),
            a: None,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymmetricDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = DecompositionWire::deserialize(deserializer)?;
        let algebra = match wire.algebra {
            AlgebraRef::Inline(l) => l,
            AlgebraRef::Name(name) => catalog::lookup_algebra(&name)
                .ok_or_else(|| D::Error::custom(format!("unknown algebra reference {name:?}")))?,
        };
        let n = algebra.dim();
        Ok(SymmetricDecomposition {
            algebra,
            g0: Subspace::from_vectors(n, wire.g0),
            g1: Subspace::from_vectors(n, wire.g1),
        })
    }
}
