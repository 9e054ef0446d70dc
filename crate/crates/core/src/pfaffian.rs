//! The linear Pfaffian system attached to a tableau on the configuration
//! space G x R^m: generator 1-forms, structure equations with torsion,
//! torsion absorption, reduced characters, and the involutivity cross-check
//! between the tableau side and the system side.
//!
//! Sign convention, recorded in every report: the coframe satisfies
//! d sigma^Z = -(1/2) c^Z_XY sigma^X ^ sigma^Y, i.e. d theta +
//! (1/2)[theta, theta] = 0. With this choice the alpha^i ^ alpha^l torsion
//! of eta^j equals minus the torsion 2-form tau of the tableau.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::matrix::RatMatrix;
use crate::poly::{Poly, PolyMatrix};
use crate::rat::Rat;
use crate::tableau::{FlagMode, TableauSpec};

pub const SIGN_CONVENTION: &str =
    "d sigma^Z = -(1/2) c^Z_{XY} sigma^X ^ sigma^Y; torsion T^j_{il} = -tau^j_{il}";

/// Dual coframe of an adapted basis (A_1..A_k, B_1..B_h, C_1..C_s).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Coframe {
    pub k: usize,
    pub h: usize,
    pub s: usize,
    /// alpha1..alphak, beta1..betah, gamma1..gammas.
    pub labels: Vec<String>,
    /// Human-readable description of each coframe element.
    pub expressions: Vec<String>,
    /// The adapted basis vectors the coframe is dual to (ambient rows).
    pub adapted_basis: Vec<Vec<Rat>>,
}

impl Coframe {
    pub fn alpha(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn beta(&self, j: usize) -> &str {
        &self.labels[self.k + j]
    }

    pub fn gamma(&self, a: usize) -> &str {
        &self.labels[self.k + self.h + a]
    }
}

/// The Pfaffian system (I, omega) of a tableau: generators
/// eta^j = beta^j - P^j_i alpha^i and the gamma^a, with independence
/// condition omega = alpha^1 ^ ... ^ alpha^k.
#[derive(Clone, Debug)]
pub struct PfaffianSystem {
    pub coframe: Coframe,
    /// P = Q0 + p^eps Q_eps as an h x k polynomial matrix.
    pub p_matrix: PolyMatrix,
    pub coords: Vec<String>,
    /// dim G + m.
    pub config_dim: usize,
    /// Structure constants rebased to the adapted frame.
    pub adapted_algebra: LieAlgebra,
    pub spec: TableauSpec,
}

/// Structure equations data: torsion polynomials and, after absorption, the
/// coframe change that kills them.
#[derive(Clone, Debug)]
pub struct StructureData {
    /// T^j_{il} for pairs i < l, stored pair-major then j
    /// (index = pair_index * h + j), polynomial in the fiber coordinates.
    pub torsion: Vec<Poly>,
    /// x^eps_i with pi^eps = dp^eps - x^eps_i alpha^i; None before
    /// absorption.
    pub absorption: Option<PolyMatrix>,
    pub absorbed: bool,
    /// Copies needed by downstream operations.
    pub generators: Vec<RatMatrix>,
    pub coords: Vec<String>,
    pub k: usize,
    pub h: usize,
}

/// Involutivity verdict combining the tableau-side and system-side counts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanTestReport {
    pub tableau_characters: Vec<usize>,
    pub reduced_characters: Vec<usize>,
    pub prolongation_dim: usize,
    /// Integral-element fiber dimensions at the sampled points.
    pub fiber_dims: Vec<usize>,
    pub weighted_character_sum: usize,
    /// (j, s_j) of the last nonzero character, 1-based; governs the
    /// generality of solutions and is reported, not interpreted.
    pub last_nonzero_character: Option<(usize, usize)>,
    pub characters_agree: bool,
    pub fiber_matches_prolongation: bool,
    pub involutive: bool,
    pub overall: bool,
}

/// Emit the Pfaffian system of a tableau. Callers are expected to have
/// checked the curvature and torsion conditions; emission itself is pure
/// bookkeeping and does not re-verify them.
pub fn emit_system(spec: &TableauSpec) -> Result<PfaffianSystem> {
    spec.validate()?;
    let (k, h) = (spec.k(), spec.h());
    let n = spec.algebra.dim();
    let s = n - k - h;
    let (frame_rows, _) = spec.adapted_frame()?;
    let labels: Vec<String> = (1..=k)
        .map(|i| format!("alpha{i}"))
        .chain((1..=h).map(|j| format!("beta{j}")))
        .chain((1..=s).map(|a| format!("gamma{a}")))
        .collect();
    let names = spec.algebra.basis_names();
    let expressions: Vec<String> = frame_rows
        .iter()
        .map(|v| format!("dual of {}", render_vector(v, names)))
        .collect();
    let frame = RatMatrix::from_rows(frame_rows.clone());
    let adapted_names: Vec<String> = (0..k)
        .map(|i| format!("A{}", i + 1))
        .chain((0..h).map(|j| format!("B{}", j + 1)))
        .chain((0..s).map(|a| format!("C{}", a + 1)))
        .collect();
    let adapted_algebra = spec.algebra.rebased(&frame, adapted_names)?;
    Ok(PfaffianSystem {
        coframe: Coframe {
            k,
            h,
            s,
            labels,
            expressions,
            adapted_basis: frame_rows,
        },
        p_matrix: spec.q_poly(),
        coords: spec.coords.clone(),
        config_dim: n + spec.m(),
        adapted_algebra,
        spec: spec.clone(),
    })
}

impl PfaffianSystem {
    /// Structure equations mod the algebraic ideal {eta, gamma}: extract the
    /// torsion T^j_{il} of each d eta^j and verify d gamma^a = 0 mod {I}.
    /// A nonzero d gamma reduction is exactly a curvature-condition failure
    /// seen from the system side and is reported as such.
    pub fn structure_equations(&self) -> Result<StructureData> {
        let (k, h, s) = (self.coframe.k, self.coframe.h, self.coframe.s);
        let n = k + h + s;
        let m = self.coords.len();
        let pairs = self.spec.pairs();

        // sigma^X mod {I} as a vector of alpha-coefficients (Poly).
        let substitution: Vec<Vec<Poly>> = (0..n)
            .map(|x| {
                if x < k {
                    (0..k)
                        .map(|a| {
                            if a == x {
                                Poly::one(m)
                            } else {
                                Poly::zero(m)
                            }
                        })
                        .collect()
                } else if x < k + h {
                    let j = x - k;
                    (0..k).map(|i| self.p_matrix.at(j, i).clone()).collect()
                } else {
                    vec![Poly::zero(m); k]
                }
            })
            .collect();

        // Reduced alpha^a ^ alpha^b coefficients of the group 2-form
        // -sum_{X<Y} g_XY sigma^X ^ sigma^Y.
        let reduce = |g: &dyn Fn(usize, usize) -> Poly| -> Vec<Poly> {
            let mut out = vec![Poly::zero(m); pairs.len()];
            for x in 0..n {
                for y in (x + 1)..n {
                    let coef = g(x, y);
                    if coef.is_zero() {
                        continue;
                    }
                    for (pi, &(a, b)) in pairs.iter().enumerate() {
                        let wedge = &(&substitution[x][a] * &substitution[y][b])
                            - &(&substitution[x][b] * &substitution[y][a]);
                        if !wedge.is_zero() {
                            out[pi] = &out[pi] - &(&coef * &wedge);
                        }
                    }
                }
            }
            out
        };

        // Structure constants in the adapted frame, as rational constants.
        let cc = |z: usize, x: usize, y: usize| -> Rat {
            self.adapted_algebra
                .bracket_basis(x, y)
                .into_iter()
                .find(|(t, _)| *t == z)
                .map(|(_, c)| c)
                .unwrap_or_else(Rat::zero)
        };

        // d gamma^a must vanish mod {I}.
        for a in 0..s {
            let z = k + h + a;
            let coeffs = reduce(&|x, y| Poly::constant(m, cc(z, x, y)));
            for (pi, poly) in coeffs.iter().enumerate() {
                if !poly.is_zero() {
                    let (i, l) = pairs[pi];
                    return Err(Error::Condition {
                        condition: 1,
                        detail: format!(
                            "d {} has nonzero reduction {} on alpha{}^alpha{}",
                            self.coframe.gamma(a),
                            poly.render(&self.coords),
                            i + 1,
                            l + 1
                        ),
                    });
                }
            }
        }

        // Torsion of d eta^j: the group part is d beta^j - P^j_i d alpha^i.
        let mut torsion = vec![Poly::zero(m); pairs.len() * h];
        for j in 0..h {
            let g = |x: usize, y: usize| -> Poly {
                let mut p = Poly::constant(m, cc(k + j, x, y));
                for i in 0..k {
                    let c = cc(i, x, y);
                    if !c.is_zero() {
                        p = &p - &self.p_matrix.at(j, i).scale(&c);
                    }
                }
                p
            };
            let coeffs = reduce(&g);
            for (pi, poly) in coeffs.into_iter().enumerate() {
                torsion[pi * h + j] = poly;
            }
        }

        Ok(StructureData {
            torsion,
            absorption: None,
            absorbed: false,
            generators: self.spec.generators.clone(),
            coords: self.coords.clone(),
            k,
            h,
        })
    }

    /// Reduced characters from the tableau matrix at a generic adapted basis
    /// order: s_1 + ... + s_j counts the independent 1-forms pi^j_i in the
    /// first j columns.
    pub fn reduced_characters(&self, sd: &StructureData, mode: FlagMode) -> Result<Vec<usize>> {
        if !sd.absorbed {
            return Err(Error::Precondition(
                "reduced characters require absorbed structure data".into(),
            ));
        }
        let flag = self.spec.generic_flag(mode)?;
        Ok(reduced_characters_for_flag(&self.spec, &flag.vectors))
    }

    /// Cartan's test from both sides: tableau characters and prolongation
    /// against reduced characters and integral-element fiber dimensions at
    /// `samples` random rational points.
    pub fn cartan_test(&self, mode: FlagMode, samples: usize, seed: u64) -> Result<CartanTestReport> {
        let report = self.spec.characters(mode)?;
        let sd = self.absorb_torsion(self.structure_equations()?)?;
        let reduced = self.reduced_characters(&sd, mode)?;
        let fiber_dims = self.fiber_dims(&sd, samples, seed)?;
        let weighted = report.weighted_character_sum();
        let characters_agree = report.characters == reduced;
        let fiber_matches = fiber_dims.iter().all(|&d| d == report.prolongation_dim);
        let involutive = report.prolongation_dim == weighted;
        let last_nonzero_character = report
            .characters
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &s)| s > 0)
            .map(|(j, &s)| (j + 1, s));
        Ok(CartanTestReport {
            tableau_characters: report.characters,
            reduced_characters: reduced,
            prolongation_dim: report.prolongation_dim,
            fiber_dims,
            weighted_character_sum: weighted,
            last_nonzero_character,
            characters_agree,
            fiber_matches_prolongation: fiber_matches,
            involutive,
            overall: characters_agree && fiber_matches && involutive,
        })
    }

    /// Solve the absorption equations: x^eps_i such that the transformed
    /// torsion vanishes identically. Zero torsion yields x = 0 (free
    /// variables are pinned to zero by the deterministic solver).
    pub fn absorb_torsion(&self, sd: StructureData) -> Result<StructureData> {
        let k = sd.k;
        let m = self.coords.len();
        let system = self.spec.rho_matrix().scale(&Rat::from_int(2));
        // Solve column-by-column over each monomial of the torsion.
        let mut monomials: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
        for t in &sd.torsion {
            for (e, _) in t.terms() {
                monomials.insert(e.clone());
            }
        }
        let mut x = PolyMatrix::zero(m, k, m);
        for mono in monomials {
            let rhs: Vec<Rat> = sd.torsion.iter().map(|t| t.coeff(&mono)).collect();
            let sol = system.solve(&rhs).ok_or_else(|| Error::Condition {
                condition: 2,
                detail: format!(
                    "torsion monomial {:?} is not absorbable: outside Im(rho)",
                    mono
                ),
            })?;
            for eps in 0..m {
                for i in 0..k {
                    let c = &sol[eps * k + i];
                    if !c.is_zero() {
                        let updated = x.at(eps, i) + &monomial_poly(m, &mono).scale(c);
                        *x.at_mut(eps, i) = updated;
                    }
                }
            }
        }
        // Residual check: T - L(x) must vanish identically.
        for (row, t) in sd.torsion.iter().enumerate() {
            let mut lx = Poly::zero(m);
            for eps in 0..m {
                for i in 0..k {
                    let c = system.at(row, eps * k + i);
                    if !c.is_zero() {
                        lx = &lx + &x.at(eps, i).scale(c);
                    }
                }
            }
            let residual = t - &lx;
            assert!(
                residual.is_zero(),
                "absorption residual nonzero after solving; solver bug"
            );
        }
        Ok(StructureData {
            absorption: Some(x),
            absorbed: true,
            ..sd
        })
    }

    /// Integral-element fiber dimension at random rational points: the
    /// solution space of the linear equations cut out by the structure
    /// equations at y. Errors if the equations are inconsistent at a sample
    /// (a torsion-condition failure).
    pub fn fiber_dims(&self, sd: &StructureData, samples: usize, seed: u64) -> Result<Vec<usize>> {
        let m = self.coords.len();
        let k = sd.k;
        let system = self.spec.rho_matrix().scale(&Rat::from_int(2));
        let nullity = m * k - system.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(samples);
        for _ in 0..samples {
            let point: Vec<Rat> = (0..m)
                .map(|_| Rat::new(rng.gen_range(-9..10), rng.gen_range(1..5)))
                .collect();
            let rhs: Vec<Rat> = sd.torsion.iter().map(|t| t.eval(&point)).collect();
            if system.solve(&rhs).is_none() {
                return Err(Error::Condition {
                    condition: 2,
                    detail: format!("integral-element equations inconsistent at p ={point:?}"),
                });
            }
            out.push(nullity);
        }
        Ok(out)
    }

    /// Plain-text rendering of the generators and independence condition.
    pub fn render_text(&self) -> String {
        let (k, h, s) = (self.coframe.k, self.coframe.h, self.coframe.s);
        let mut out = String::new();
        out.push_str(&format!(
            "configuration space: dim G + m = {} + {} = {}\n",
            self.config_dim - self.coords.len(),
            self.coords.len(),
            self.config_dim
        ));
        for j in 0..h {
            let mut line = format!("eta{} = {}", j + 1, self.coframe.beta(j));
            for i in 0..k {
                let coeff = -self.p_matrix.at(j, i);
                line.push_str(&term_text(&coeff, self.coframe.alpha(i), &self.coords));
            }
            out.push_str(&line);
            out.push('\n');
        }
        let gammas: Vec<&str> = (0..s).map(|a| self.coframe.gamma(a)).collect();
        out.push_str(&format!("gamma generators: {}\n", gammas.join(", ")));
        let alphas: Vec<&str> = (0..k).map(|i| self.coframe.alpha(i)).collect();
        out.push_str(&format!("omega = {} != 0\n", alphas.join(" ^ ")));
        out
    }

    /// LaTeX rendering of the eta generators, gamma list, and independence
    /// condition.
    pub fn render_latex(&self) -> String {
        let (k, h, s) = (self.coframe.k, self.coframe.h, self.coframe.s);
        let mut out = String::new();
        for j in 0..h {
            let mut line = format!("\\eta^{{{}}} = \\beta^{{{}}}", j + 1, j + 1);
            for i in 0..k {
                let coeff = -self.p_matrix.at(j, i);
                line.push_str(&term_latex(&coeff, &format!("\\alpha^{{{}}}", i + 1), &self.coords));
            }
            out.push_str(&line);
            out.push_str(" \\\\\n");
        }
        let gammas: Vec<String> = (1..=s).map(|a| format!("\\gamma^{{{a}}}")).collect();
        out.push_str(&format!("{} \\\\\n", gammas.join(", ")));
        let alphas: Vec<String> = (1..=k).map(|i| format!("\\alpha^{{{i}}}")).collect();
        out.push_str(&format!("\\omega = {} \\neq 0\n", alphas.join(" \\wedge ")));
        out
    }

    /// Structured JSON value of the emitted system.
    pub fn to_json(&self) -> serde_json::Value {
        let (k, h, s) = (self.coframe.k, self.coframe.h, self.coframe.s);
        let eta: Vec<serde_json::Value> = (0..h)
            .map(|j| {
                let coeffs: Vec<String> = (0..k)
                    .map(|i| (-self.p_matrix.at(j, i)).render(&self.coords))
                    .collect();
                serde_json::json!({
                    "label": format!("eta{}", j + 1),
                    "beta": self.coframe.beta(j),
                    "alpha_coefficients": coeffs,
                })
            })
            .collect();
        serde_json::json!({
            "config_dim": self.config_dim,
            "k": k,
            "h": h,
            "s": s,
            "coords": self.coords,
            "eta": eta,
            "gamma": (0..s).map(|a| self.coframe.gamma(a).to_string()).collect::<Vec<_>>(),
            "independence": (0..k).map(|i| self.coframe.alpha(i).to_string()).collect::<Vec<_>>().join(" ^ "),
            "coframe_labels": self.coframe.labels,
            "coframe_expressions": self.coframe.expressions,
        })
    }
}

impl StructureData {
    /// LaTeX rendering of the structure equations mod {I}: the dp-wedge
    /// part with its constant coefficients and the torsion 2-form of each
    /// eta, then the gamma equations.
    pub fn render_latex(&self) -> String {
        let (k, h) = (self.k, self.h);
        let pairs: Vec<(usize, usize)> = {
            let mut v = Vec::new();
            for i in 0..k {
                for l in (i + 1)..k {
                    v.push((i, l));
                }
            }
            v
        };
        let mut out = String::new();
        for j in 0..h {
            let mut line = format!("d\\eta^{{{}}} \\equiv", j + 1);
            let mut first = true;
            for (eps, q) in self.generators.iter().enumerate() {
                for i in 0..k {
                    let c = -q.at(j, i);
                    if c.is_zero() {
                        continue;
                    }
                    let abs = c.abs();
                    let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
                    let coeff = if abs.is_one() {
                        String::new()
                    } else if abs.denom() == &num_bigint::BigInt::from(1) {
                        format!("{abs}\\,")
                    } else {
                        format!("\\tfrac{{{}}}{{{}}}\\,", abs.numer(), abs.denom())
                    };
                    line.push_str(&format!(
                        " {sign}{}{coeff}d{} \\wedge \\alpha^{{{}}}",
                        if sign.is_empty() { "" } else { " " },
                        latex_symbol(&self.coords[eps]),
                        i + 1
                    ));
                    first = false;
                }
            }
            for (pi, &(a, b)) in pairs.iter().enumerate() {
                let t = &self.torsion[pi * h + j];
                if t.is_zero() {
                    continue;
                }
                let sign = if first { "" } else { "+ " };
                line.push_str(&format!(
                    " {sign}\\left({}\\right)\\alpha^{{{}}} \\wedge \\alpha^{{{}}}",
                    poly_latex(t, &self.coords),
                    a + 1,
                    b + 1
                ));
                first = false;
            }
            if first {
                line.push_str(" 0");
            }
            line.push_str(" \\mod \\{I\\} \\\\\n");
            out.push_str(&line);
        }
        out.push_str("d\\gamma^{a} \\equiv 0 \\mod \\{I\\}\n");
        out
    }

    /// Structured JSON of torsion and absorption, with the sign convention
    /// spelled out.
    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<(usize, usize)> = {
            let mut v = Vec::new();
            for i in 0..self.k {
                for l in (i + 1)..self.k {
                    v.push((i, l));
                }
            }
            v
        };
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(idx, t)| {
                let (pi, j) = (idx / self.h, idx % self.h);
                let (i, l) = pairs[pi];
                serde_json::json!({
                    "eta": format!("eta{}", j + 1),
                    "pair": [i + 1, l + 1],
                    "poly": t.render(&self.coords),
                })
            })
            .collect();
        let absorption = self.absorption.as_ref().map(|x| {
            (0..x.rows())
                .map(|eps| {
                    (0..x.cols())
                        .map(|i| x.at(eps, i).render(&self.coords))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        });
        serde_json::json!({
            "sign_convention": SIGN_CONVENTION,
            "torsion": torsion,
            "absorbed": self.absorbed,
            "absorption": absorption,
        })
    }
}

/// Column-rank counting of the tableau matrix in a given (generic) flag
/// basis: s_1 + ... + s_j = rank of the generator columns restricted to the
/// first j flag directions.
pub fn reduced_characters_for_flag(spec: &TableauSpec, flag_vectors: &[Vec<Rat>]) -> Vec<usize> {
    let (h, m) = (spec.h(), spec.m());
    let mut cumulative = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for v in flag_vectors {
        let images: Vec<Vec<Rat>> = spec.generators.iter().map(|q| q.mul_vec(v)).collect();
        for j in 0..h {
            rows.push(images.iter().map(|im| im[j].clone()).collect());
        }
        let rank = if rows.is_empty() || m == 0 {
            0
        } else {
            RatMatrix::from_rows(rows.clone()).rank()
        };
        cumulative.push(rank);
    }
    let mut out = Vec::with_capacity(cumulative.len());
    let mut prev = 0;
    for c in cumulative {
        out.push(c - prev);
        prev = c;
    }
    out
}

fn monomial_poly(nvars: usize, exps: &[u32]) -> Poly {
    let mut p = Poly::one(nvars);
    for (i, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            p = &p * &Poly::var(nvars, i);
        }
    }
    p
}

fn render_vector(v: &[Rat], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (c, name) in v.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        if c.is_one() {
            parts.push(name.clone());
        } else if (-c).is_one() {
            parts.push(format!("-{name}"));
        } else {
            parts.push(format!("{c}*{name}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Render `+ coeff*label` with sign folding; multi-term coefficients are
/// parenthesized.
fn term_text(coeff: &Poly, label: &str, coords: &[String]) -> String {
    if coeff.is_zero() {
        return String::new();
    }
    let terms: Vec<_> = coeff.terms().collect();
    if terms.len() == 1 {
        let (exps, c) = (&terms[0].0, terms[0].1);
        let mono = monomial_text(exps, coords);
        let abs = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if mono.is_empty() {
            format!(" {sign} {abs}*{label}")
        } else if abs.is_one() {
            format!(" {sign} {mono}*{label}")
        } else {
            format!(" {sign} {abs}*{mono}*{label}")
        }
    } else {
        format!(" + ({})*{}", coeff.render(coords), label)
    }
}

fn monomial_text(exps: &[u32], coords: &[String]) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| {
            if e == 1 {
                coords[v].clone()
            } else {
                format!("{}^{}", coords[v], e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn term_latex(coeff: &Poly, label: &str, coords: &[String]) -> String {
    if coeff.is_zero() {
        return String::new();
    }
    let terms: Vec<_> = coeff.terms().collect();
    if terms.len() == 1 {
        let (exps, c) = (&terms[0].0, terms[0].1);
        let mono = monomial_latex(exps, coords);
        let abs = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        let coeff_tex = if abs.is_one() && !mono.is_empty() {
            String::new()
        } else if abs.denom() == &num_bigint::BigInt::from(1) {
            format!("{abs}")
        } else {
            format!("\\tfrac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        format!(" {sign} {coeff_tex}{mono}{label}")
    } else {
        format!(" + \\left({}\\right){}", coeff.render(coords), label)
    }
}

/// Full polynomial in LaTeX: signed terms, \tfrac fractions, subscripted
/// variable names.
fn poly_latex(p: &Poly, coords: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (exps, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let mono = monomial_latex(exps, coords);
        let abs = c.abs();
        let sign = if idx == 0 {
            if c.is_negative() { "-" } else { "" }.to_string()
        } else if c.is_negative() {
            " - ".to_string()
        } else {
            " + ".to_string()
        };
        let coeff = if abs.is_one() && !mono.is_empty() {
            String::new()
        } else if abs.denom() == &num_bigint::BigInt::from(1) {
            format!("{abs}")
        } else {
            format!("\\tfrac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        out.push_str(&format!("{sign}{coeff}{mono}"));
    }
    out
}

fn monomial_latex(exps: &[u32], coords: &[String]) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| {
            let base = latex_symbol(&coords[v]);
            if e == 1 {
                base
            } else {
                format!("{base}^{{{e}}}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// q1 -> q_{1}, keeping plain names untouched.
fn latex_symbol(name: &str) -> String {
    let split = name.find(|c: char| c.is_ascii_digit());
    match split {
        Some(pos) if pos > 0 => format!("{}_{{{}}}", &name[..pos], &name[pos..]),
        _ => name.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::Subspace;
    use crate::tableau::reduce_poly_vector_mod_subspace;

    fn unit(i: usize, n: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        v[i] = Rat::one();
        v
    }

    fn zero_tableau_over_abelian() -> TableauSpec {
        TableauSpec {
            algebra: crate::lie::LieAlgebra::abelian(4),
            a: Subspace::from_vectors(4, vec![unit(0, 4), unit(1, 4)]),
            b: Subspace::from_vectors(4, vec![unit(2, 4), unit(3, 4)]),
            a_basis: vec![unit(0, 4), unit(1, 4)],
            b_basis: vec![unit(2, 4), unit(3, 4)],
            generators: vec![],
            affine_base: None,
            coords: vec![],
        }
    }

    #[test]
    fn zero_tableau_system_is_flat() {
        let spec = zero_tableau_over_abelian();
        let sys = emit_system(&spec).unwrap();
        assert_eq!(sys.config_dim, 4);
        let sd = sys.structure_equations().unwrap();
        assert!(sd.torsion.iter().all(Poly::is_zero));
        let sd = sys.absorb_torsion(sd).unwrap();
        assert!(sd.absorbed);
        // x = 0 is the deterministic solution for zero torsion.
        let x = sd.absorption.as_ref().unwrap();
        assert_eq!(x.rows(), 0);
        let text = sys.render_text();
        assert!(text.contains("omega = alpha1 ^ alpha2 != 0"));
    }

    #[test]
    fn torsion_agrees_with_tableau_tau_up_to_sign() {
        // Independent routes: structure-equation reduction vs the symbolic
        // bracket torsion. Convention: T = -tau.
        for spec in [
            catalog::fubini_cartan(),
            catalog::demoulin(),
            catalog::godeaux_rozet(catalog::Side::First),
            catalog::asympt_isothermic(),
        ] {
            let sys = emit_system(&spec).unwrap();
            let sd = sys.structure_equations().unwrap();
            let tau = spec.symbolic_torsion().unwrap();
            assert_eq!(sd.torsion.len(), tau.len());
            for (t, tv) in sd.torsion.iter().zip(&tau) {
                assert!((t + tv).is_zero(), "T != -tau: T = {t:?}, tau = {tv:?}");
            }
        }
    }

    #[test]
    fn dgamma_reduction_matches_curvature_condition() {
        // A corrupted tableau fails condition (1) both ways.
        let mut spec = catalog::fubini_cartan();
        let mut g = spec.generators[4].clone(); // r1 generator
        let b3 = g.at(2, 0).clone();
        let b5 = g.at(4, 0).clone();
        *g.at_mut(2, 0) = b5;
        *g.at_mut(4, 0) = b3;
        spec.generators[4] = g;
        spec.validate().unwrap();
        assert!(!spec.curvature_condition().unwrap().passed());
        let sys = emit_system(&spec).unwrap();
        match sys.structure_equations() {
            Err(Error::Condition { condition: 1, .. }) => {}
            other => panic!("expected a condition-1 failure, got {other:?}"),
        }
    }

    #[test]
    fn unabsorbable_torsion_agrees_with_the_tableau_verdict() {
        // [e0, e1] = e2 with a = span{e0, e1}, b = span{e2, e3} and the
        // single generator e3 (x) alpha1: the curvature condition holds
        // (the bracket lands in b) but the constant torsion points along
        // e2, outside Im(rho). Both routes must reject it.
        let algebra = crate::lie::LieAlgebra::new(
            4,
            vec!["a1".into(), "a2".into(), "b1".into(), "b2".into()],
            vec![(0, 1, 2, Rat::one())],
        )
        .unwrap();
        let spec = TableauSpec {
            algebra,
            a: Subspace::from_vectors(4, vec![unit(0, 4), unit(1, 4)]),
            b: Subspace::from_vectors(4, vec![unit(2, 4), unit(3, 4)]),
            a_basis: vec![unit(0, 4), unit(1, 4)],
            b_basis: vec![unit(2, 4), unit(3, 4)],
            generators: vec![RatMatrix::from_i64(&[&[0, 0], &[1, 0]])],
            affine_base: None,
            coords: TableauSpec::default_coords(1),
        };
        spec.validate().unwrap();
        assert!(spec.curvature_condition().unwrap().passed());
        assert!(!spec.torsion_condition().unwrap().passed());
        let sys = emit_system(&spec).unwrap();
        let sd = sys.structure_equations().unwrap();
        match sys.absorb_torsion(sd) {
            Err(Error::Condition { condition: 2, .. }) => {}
            other => panic!("expected a condition-2 failure, got {other:?}"),
        }
    }

    #[test]
    fn emitted_counts_for_the_sl3_cartan_tableau() {
        // dim g - k - h = 8 - 2 - 3 = 3 gamma generators next to 3 etas.
        let d = catalog::sl3_so3();
        let (spec, _) = d.build_cartan_tableau(&catalog::sl3_so3_abelian()).unwrap();
        let sys = emit_system(&spec).unwrap();
        assert_eq!((sys.coframe.k, sys.coframe.h, sys.coframe.s), (2, 3, 3));
        assert_eq!(sys.config_dim, 8 + 3);
    }

    #[test]
    fn zero_tableau_reduced_characters_vanish() {
        let spec = zero_tableau_over_abelian();
        let flag = vec![
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
        ];
        assert_eq!(reduced_characters_for_flag(&spec, &flag), vec![0, 0]);
    }

    #[test]
    fn reduced_characters_require_absorption() {
        let spec = catalog::fubini_cartan();
        let sys = emit_system(&spec).unwrap();
        let sd = sys.structure_equations().unwrap();
        assert!(matches!(
            sys.reduced_characters(&sd, FlagMode::default()),
            Err(Error::Precondition(_))
        ));
        let sd = sys.absorb_torsion(sd).unwrap();
        assert_eq!(sys.reduced_characters(&sd, FlagMode::default()).unwrap(), vec![5, 1]);
    }

    #[test]
    fn torsion_residual_reduction_is_consistent() {
        // After absorption the torsion lies in Im(rho) monomial by monomial.
        let spec = catalog::fubini_cartan();
        let sys = emit_system(&spec).unwrap();
        let sd = sys.structure_equations().unwrap();
        let image = spec.rho_image();
        let residual = reduce_poly_vector_mod_subspace(&sd.torsion, &image);
        assert!(residual.iter().all(Poly::is_zero));
        let sd = sys.absorb_torsion(sd).unwrap();
        assert!(sd.absorbed);
    }
}
