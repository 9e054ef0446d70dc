//! Built-in catalog: sl(4,R) in the frame adapted to generic hyperbolic
//! surfaces, the Fubini-Cartan tableau and its subtableaux (Godeaux-Rozet,
//! Demoulin, asymptotically-isothermic, and the affine Weingarten-like
//! family), plus small symmetric-space decompositions for Cartan tableaux.
//!
//! Every entry carries its expected invariants; the regression suite
//! recomputes them on each run.

use crate::cartan::SymmetricDecomposition;
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Subspace};
use crate::matrix::RatMatrix;
use crate::pfaffian::Coframe;
use crate::rat::Rat;
use crate::tableau::TableauSpec;

/// Expected invariants of a catalog tableau, used as golden values.
#[derive(Clone, Debug)]
pub struct ExpectedTableau {
    pub dim: usize,
    pub s0: usize,
    pub characters: Vec<usize>,
    pub prolongation_dim: usize,
}

#[derive(Clone, Debug)]
pub enum CatalogItem {
    Algebra(LieAlgebra),
    Tableau(TableauSpec),
    Decomposition {
        decomposition: SymmetricDecomposition,
        abelian: Subspace,
    },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub expected: Option<ExpectedTableau>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

pub fn entries() -> Vec<CatalogEntry> {
    let exp = |dim, s0, characters: &[usize], prolongation_dim| {
        Some(ExpectedTableau {
            dim,
            s0,
            characters: characters.to_vec(),
            prolongation_dim,
        })
    };
    vec![
        CatalogEntry {
            name: "sl4_wilczynski",
            summary: "sl(4,R) with the coframe adapted to generic hyperbolic surfaces",
            expected: None,
        },
        CatalogEntry {
            name: "fubini_cartan",
            summary: "6-dim tableau of generic hyperbolic surfaces in P^3",
            expected: exp(6, 13, &[5, 1], 7),
        },
        CatalogEntry {
            name: "godeaux_rozet_first",
            summary: "5-dim subtableau with r2 = 0 (Godeaux-Rozet surfaces)",
            expected: exp(5, 13, &[5, 0], 5),
        },
        CatalogEntry {
            name: "godeaux_rozet_second",
            summary: "5-dim subtableau with r1 = 0 (Godeaux-Rozet surfaces)",
            expected: exp(5, 13, &[5, 0], 5),
        },
        CatalogEntry {
            name: "demoulin",
            summary: "4-dim subtableau with r1 = r2 = 0 (Demoulin surfaces)",
            expected: exp(4, 13, &[4, 0], 4),
        },
        CatalogEntry {
            name: "asympt_isothermic",
            summary: "5-dim subtableau with p1 = p2 (asymptotically-isothermic)",
            expected: exp(5, 13, &[5, 0], 5),
        },
        CatalogEntry {
            name: "affine_weingarten",
            summary: "affine tableau p = t(3/5, 4/5) + (1, 1); linear-part invariants",
            expected: exp(5, 13, &[5, 0], 5),
        },
        CatalogEntry {
            name: "affine_constant_curvature",
            summary: "affine tableau with p1 + p2 = 2 (constant curvature c = 2)",
            expected: exp(5, 13, &[5, 0], 5),
        },
        CatalogEntry {
            name: "sl3_so3",
            summary: "sl(3,R) = so(3) (+) sym0(3), rank 2",
            expected: exp(3, 6, &[3, 0], 3),
        },
        CatalogEntry {
            name: "sl2_so2",
            summary: "sl(2,R) = so(2) (+) sym0(2), rank 1",
            expected: exp(1, 2, &[1], 1),
        },
        CatalogEntry {
            name: "sl2_so2_product",
            summary: "product of two copies of sl(2,R)/so(2), rank 2",
            expected: exp(2, 4, &[2, 0], 2),
        },
    ]
}

pub fn build(name: &str) -> Option<CatalogItem> {
    match name {
        "sl4_wilczynski" => Some(CatalogItem::Algebra(sl4_wilczynski().0)),
        "fubini_cartan" => Some(CatalogItem::Tableau(fubini_cartan())),
        "godeaux_rozet_first" => Some(CatalogItem::Tableau(godeaux_rozet(Side::First))),
        "godeaux_rozet_second" => Some(CatalogItem::Tableau(godeaux_rozet(Side::Second))),
        "demoulin" => Some(CatalogItem::Tableau(demoulin())),
        "asympt_isothermic" => Some(CatalogItem::Tableau(asympt_isothermic())),
        "affine_weingarten" => Some(CatalogItem::Tableau(
            affine_weingarten(
                Rat::new(3, 5),
                Rat::new(4, 5),
                Rat::from_int(1),
                Rat::from_int(1),
            )
            .expect("catalog parameters lie on the unit circle"),
        )),
        "affine_constant_curvature" => Some(CatalogItem::Tableau(affine_constant_curvature(
            Rat::from_int(2),
        ))),
        "sl3_so3" => Some(CatalogItem::Decomposition {
            decomposition: sl3_so3(),
            abelian: sl3_so3_abelian(),
        }),
        "sl2_so2" => Some(CatalogItem::Decomposition {
            decomposition: sl2_so2(),
            abelian: sl2_so2_abelian(),
        }),
        "sl2_so2_product" => Some(CatalogItem::Decomposition {
            decomposition: sl2_so2_product(),
            abelian: sl2_so2_product_abelian(),
        }),
        _ => None,
    }
}

/// Algebras addressable by name in JSON inputs ("algebra": "<name>").
pub fn lookup_algebra(name: &str) -> Option<LieAlgebra> {
    match name {
        "sl4_wilczynski" => Some(sl4_wilczynski().0),
        "sl2" => Some(sl2_standard()),
        "sl3" => Some(sl3_so3().algebra),
        "sl2_so2" => Some(sl2_so2().algebra),
        "sl3_so3" => Some(sl3_so3().algebra),
        "sl2_so2_product" => Some(sl2_so2_product().algebra),
        _ => None,
    }
}

// --- matrix helpers --------------------------------------------------------

fn em(n: usize, i: usize, j: usize) -> RatMatrix {
    let mut m = RatMatrix::zero(n, n);
    *m.at_mut(i, j) = Rat::one();
    m
}

fn unit(i: usize, n: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn span(ambient: usize, indices: &[usize]) -> Subspace {
    Subspace::from_vectors(ambient, indices.iter().map(|&i| unit(i, ambient)).collect())
}

/// Structure constants from an explicit matrix basis: each commutator is
/// re-expressed in the basis by exact solving. Panics if the span is not
/// closed under commutators (catalog data bug).
pub fn algebra_from_matrix_basis(size: usize, basis: &[RatMatrix], names: Vec<String>) -> LieAlgebra {
    let n = basis.len();
    let stacked = RatMatrix::from_fn(size * size, n, |r, c| {
        basis[c].at(r / size, r % size).clone()
    });
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let comm = &(&basis[i] * &basis[j]) - &(&basis[j] * &basis[i]);
            let flat = comm.flatten();
            let coords = stacked
                .solve(&flat)
                .expect("matrix basis is not closed under commutators");
            for (k, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    brackets.push((i, j, k, c));
                }
            }
        }
    }
    LieAlgebra::new(n, names, brackets).expect("catalog structure constants are well formed")
}

// --- sl(4,R) with the surface-adapted coframe ------------------------------

/// sl(4,R), dim 15, in the ordered basis (A1, A2, B1..B5, C1..C8) dual to
/// the coframe (alpha1, alpha2, beta1..beta5, gamma1..gamma8). Two index
/// slips in the classical coframe list are corrected so that the 15
/// functionals actually form a basis: beta5 is the (0,3) entry and gamma1
/// the (3,0) entry.
pub fn sl4_wilczynski() -> (LieAlgebra, Coframe) {
    let e = |i, j| em(4, i, j);
    let basis = vec![
        &(&e(1, 0) + &e(2, 1)) + &e(3, 2),        // A1
        &(&e(2, 0) + &e(1, 2)) + &e(3, 1),        // A2
        &e(0, 0) - &e(3, 3),                      // B1
        &e(1, 1) - &e(2, 2),                      // B2
        &e(0, 1) + &e(2, 3),                      // B3
        &e(0, 2) + &e(1, 3),                      // B4
        e(0, 3),                                  // B5
        e(3, 0),                                  // C1
        -&e(3, 1),                                // C2
        -&e(3, 2),                                // C3
        &e(2, 2) - &e(3, 3),                      // C4
        -&e(2, 1),                                // C5
        -&e(1, 2),                                // C6
        -&e(2, 3),                                // C7
        -&e(1, 3),                                // C8
    ];
    let names: Vec<String> = ["A1", "A2", "B1", "B2", "B3", "B4", "B5"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=8).map(|i| format!("C{i}")))
        .collect();
    let algebra = algebra_from_matrix_basis(4, &basis, names);
    let labels: Vec<String> = ["alpha1", "alpha2"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=5).map(|i| format!("beta{i}")))
        .chain((1..=8).map(|i| format!("gamma{i}")))
        .collect();
    let expressions: Vec<String> = [
        "theta^1_0",
        "theta^2_0",
        "theta^0_0",
        "theta^1_1",
        "theta^0_1",
        "theta^0_2",
        "theta^0_3",
        "theta^3_0",
        "theta^2_0 - theta^3_1",
        "theta^1_0 - theta^3_2",
        "theta^1_1 + theta^2_2",
        "theta^1_0 - theta^2_1",
        "theta^2_0 - theta^1_2",
        "theta^0_1 - theta^2_3",
        "theta^0_2 - theta^1_3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let adapted_basis = (0..15).map(|i| unit(i, 15)).collect();
    let coframe = Coframe {
        k: 2,
        h: 5,
        s: 8,
        labels,
        expressions,
        adapted_basis,
    };
    (algebra, coframe)
}

/// The six generator matrices of the Fubini-Cartan tableau, in the order
/// (q1, q2, p1, p2, r1, r2). Rows index (B1..B5), columns (A1, A2).
fn fubini_generators() -> Vec<RatMatrix> {
    let mut q1 = RatMatrix::zero(5, 2);
    *q1.at_mut(0, 0) = Rat::new(-3, 2);
    *q1.at_mut(1, 0) = Rat::new(1, 2);
    let mut q2 = RatMatrix::zero(5, 2);
    *q2.at_mut(0, 1) = Rat::new(3, 2);
    *q2.at_mut(1, 1) = Rat::new(1, 2);
    let mut p1 = RatMatrix::zero(5, 2);
    *p1.at_mut(3, 0) = Rat::one();
    let mut p2 = RatMatrix::zero(5, 2);
    *p2.at_mut(2, 1) = Rat::one();
    let mut r1 = RatMatrix::zero(5, 2);
    *r1.at_mut(2, 0) = Rat::one();
    *r1.at_mut(4, 1) = Rat::one();
    let mut r2 = RatMatrix::zero(5, 2);
    *r2.at_mut(4, 0) = Rat::one();
    *r2.at_mut(3, 1) = Rat::one();
    vec![q1, q2, p1, p2, r1, r2]
}

fn sl4_tableau(generators: Vec<RatMatrix>, coords: Vec<String>, affine_base: Option<RatMatrix>) -> TableauSpec {
    let (algebra, _) = sl4_wilczynski();
    let spec = TableauSpec {
        algebra,
        a: span(15, &[0, 1]),
        b: span(15, &[2, 3, 4, 5, 6]),
        a_basis: vec![unit(0, 15), unit(1, 15)],
        b_basis: (2..7).map(|i| unit(i, 15)).collect(),
        generators,
        affine_base,
        coords,
    };
    spec.validate().expect("catalog tableau is structurally valid");
    spec
}

/// The 6-dimensional Fubini-Cartan tableau over sl(4,R).
pub fn fubini_cartan() -> TableauSpec {
    let coords = ["q1", "q2", "p1", "p2", "r1", "r2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    sl4_tableau(fubini_generators(), coords, None)
}

/// Godeaux-Rozet subtableaux: first drops r2, second drops r1.
pub fn godeaux_rozet(side: Side) -> TableauSpec {
    let all = fubini_generators();
    let (keep, coords): (Vec<usize>, Vec<&str>) = match side {
        Side::First => (vec![0, 1, 2, 3, 4], vec!["q1", "q2", "p1", "p2", "r1"]),
        Side::Second => (vec![0, 1, 2, 3, 5], vec!["q1", "q2", "p1", "p2", "r2"]),
    };
    let generators = keep.into_iter().map(|i| all[i].clone()).collect();
    sl4_tableau(generators, coords.iter().map(|s| s.to_string()).collect(), None)
}

/// The 4-dimensional Demoulin subtableau (r1 = r2 = 0).
pub fn demoulin() -> TableauSpec {
    let all = fubini_generators();
    let generators = vec![all[0].clone(), all[1].clone(), all[2].clone(), all[3].clone()];
    let coords = ["q1", "q2", "p1", "p2"].iter().map(|s| s.to_string()).collect();
    sl4_tableau(generators, coords, None)
}

/// The 5-dimensional asymptotically-isothermic subtableau (p1 = p2); the two
/// p-generators merge into one.
pub fn asympt_isothermic() -> TableauSpec {
    let all = fubini_generators();
    let merged = &all[2] + &all[3];
    let generators = vec![all[0].clone(), all[1].clone(), merged, all[4].clone(), all[5].clone()];
    let coords = ["q1", "q2", "t", "r1", "r2"].iter().map(|s| s.to_string()).collect();
    sl4_tableau(generators, coords, None)
}

/// Affine tableau of surfaces whose p-invariants satisfy
/// p1 = t cos_a + b1, p2 = t sin_a + b2 for a rational point on the unit
/// circle. The linear part replaces the two p-generators by their
/// (cos_a, sin_a) combination; the affine base is b1 p1-gen + b2 p2-gen.
pub fn affine_weingarten(cos_a: Rat, sin_a: Rat, b1: Rat, b2: Rat) -> Result<TableauSpec> {
    let circle = &(&cos_a * &cos_a) + &(&sin_a * &sin_a);
    if !circle.is_one() {
        return Err(Error::InvalidInput(format!(
            "(cos_a, sin_a) must lie on the unit circle; got cos^2 + sin^2 = {circle}"
        )));
    }
    Ok(affine_line(cos_a, sin_a, b1, b2))
}

/// Affine tableau with p1 + p2 pinned to 1 + c/2 (constant curvature c):
/// the p-line has direction (1, -1), which no rational unit vector realizes,
/// so the direction is used unnormalized; the affine subspace is the same.
pub fn affine_constant_curvature(c: Rat) -> TableauSpec {
    let b = &(&Rat::from_int(2) + &c) * &Rat::new(1, 4); // b1 = b2, b1 + b2 = 1 + c/2
    affine_line(Rat::from_int(1), Rat::from_int(-1), b.clone(), b)
}

fn affine_line(d1: Rat, d2: Rat, b1: Rat, b2: Rat) -> TableauSpec {
    let all = fubini_generators();
    let dir = &all[2].scale(&d1) + &all[3].scale(&d2);
    let base = &all[2].scale(&b1) + &all[3].scale(&b2);
    let generators = vec![all[0].clone(), all[1].clone(), dir, all[4].clone(), all[5].clone()];
    let coords = ["q1", "q2", "t", "r1", "r2"].iter().map(|s| s.to_string()).collect();
    sl4_tableau(generators, coords, Some(base))
}

// --- small symmetric decompositions ----------------------------------------

/// sl(2,R) in the standard basis (e, h, f).
pub fn sl2_standard() -> LieAlgebra {
    let basis = vec![em(2, 0, 1), &em(2, 0, 0) - &em(2, 1, 1), em(2, 1, 0)];
    algebra_from_matrix_basis(2, &basis, vec!["e".into(), "h".into(), "f".into()])
}

/// sl(3,R) in the basis (D1, D2, S12, S13, S23, R12, R13, R23):
/// traceless diagonals, symmetric off-diagonals, antisymmetric rotations.
fn sl3_matrix_basis() -> Vec<RatMatrix> {
    let e = |i, j| em(3, i, j);
    vec![
        &e(0, 0) - &e(1, 1),  // D1 = diag(1,-1,0)
        &e(1, 1) - &e(2, 2),  // D2 = diag(0,1,-1)
        &e(0, 1) + &e(1, 0),  // S12
        &e(0, 2) + &e(2, 0),  // S13
        &e(1, 2) + &e(2, 1),  // S23
        &e(0, 1) - &e(1, 0),  // R12
        &e(0, 2) - &e(2, 0),  // R13
        &e(1, 2) - &e(2, 1),  // R23
    ]
}

/// sl(3,R) = so(3) (+) (symmetric traceless), rank 2.
pub fn sl3_so3() -> SymmetricDecomposition {
    let names = ["D1", "D2", "S12", "S13", "S23", "R12", "R13", "R23"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let algebra = algebra_from_matrix_basis(3, &sl3_matrix_basis(), names);
    SymmetricDecomposition {
        algebra,
        g0: span(8, &[5, 6, 7]),
        g1: span(8, &[0, 1, 2, 3, 4]),
    }
}

/// The diagonal traceless matrices, maximal abelian in sym0(3).
pub fn sl3_so3_abelian() -> Subspace {
    span(8, &[0, 1])
}

/// sl(2,R) = so(2) (+) sym0(2) in the basis (H, X, Y) =
/// (diag(1,-1), E01 + E10, E01 - E10), rank 1.
pub fn sl2_so2() -> SymmetricDecomposition {
    let e = |i, j| em(2, i, j);
    let basis = vec![
        &e(0, 0) - &e(1, 1),
        &e(0, 1) + &e(1, 0),
        &e(0, 1) - &e(1, 0),
    ];
    let names = ["H", "X", "Y"].iter().map(|s| s.to_string()).collect();
    let algebra = algebra_from_matrix_basis(2, &basis, names);
    SymmetricDecomposition {
        algebra,
        g0: span(3, &[2]),
        g1: span(3, &[0, 1]),
    }
}

pub fn sl2_so2_abelian() -> Subspace {
    span(3, &[0])
}

/// Two commuting copies of sl(2,R)/so(2); rank 2 with block-diagonal
/// structure constants.
pub fn sl2_so2_product() -> SymmetricDecomposition {
    let single = sl2_so2();
    let algebra = single.algebra.direct_sum(&single.algebra);
    SymmetricDecomposition {
        algebra,
        g0: span(6, &[2, 5]),
        g1: span(6, &[0, 1, 3, 4]),
    }
}

pub fn sl2_so2_product_abelian() -> Subspace {
    span(6, &[0, 3])
}
