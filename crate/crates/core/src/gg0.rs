//! The compatibility PDE attached to a rank-k symmetric space: for maps
//! V from a into m,
//!
//! ```text
//! [A_i, V_{x_j}] - [A_j, V_{x_i}] = [[A_i, V], [A_j, V]]   (i < j),
//! ```
//!
//! together with its frame form theta_b = [theta_a, V], theta_m = theta_n
//! = 0. Emission is exact; the grid residual checker is the single place in
//! the library that uses floating point.

use serde::{Deserialize, Serialize};

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// One compatibility pair (i < j) of the PDE system in coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PdePair {
    pub i: usize,
    pub j: usize,
    /// ad_i[c][mu] = ambient component c of [A_i, X_mu]; multiplies
    /// dV^mu/dx_j on the left-hand side.
    pub ad_i: Vec<Vec<Rat>>,
    /// ad_j[c][mu], multiplies dV^mu/dx_i (with a minus sign).
    pub ad_j: Vec<Vec<Rat>>,
    /// quad[mu][nu] = ambient vector [[A_i, X_mu], [A_j, X_nu]].
    pub quad: Vec<Vec<Vec<Rat>>>,
}

/// The emitted system: frame form plus the structure-constant-expanded
/// coordinate PDE.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GG0System {
    pub k: usize,
    pub dim_m: usize,
    pub frame_equations: Vec<String>,
    pub independence: String,
    pub pairs: Vec<PdePair>,
    /// Names of the unknowns v1..v_{dim m} (coordinates over the m-basis).
    pub unknowns: Vec<String>,
}

/// Rectangular sample grid of an m-valued map on a box in a-coordinates.
#[derive(Clone, Debug)]
pub struct GG0Grid {
    /// One strictly increasing coordinate axis per a-direction.
    pub axes: Vec<Vec<f64>>,
    /// Row-major over the axes; innermost index is the m-coordinate.
    pub values: Vec<f64>,
    pub dim_m: usize,
}

/// Render the frame form and expand the coordinate PDE of the symmetric
/// space attached to `data`.
pub fn emit_gg0(data: &CartanData) -> Result<GG0System> {
    let algebra = &data.decomposition.algebra;
    let k = data.regular_basis.len();
    let dim_m = data.m_basis.len();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let columns_i: Vec<Vec<Rat>> = data
                .m_basis
                .iter()
                .map(|x| algebra.bracket(&data.regular_basis[i], x))
                .collect::<Result<_>>()?;
            let columns_j: Vec<Vec<Rat>> = data
                .m_basis
                .iter()
                .map(|x| algebra.bracket(&data.regular_basis[j], x))
                .collect::<Result<_>>()?;
            let to_matrix = |cols: &[Vec<Rat>]| -> Vec<Vec<Rat>> {
                (0..algebra.dim())
                    .map(|c| cols.iter().map(|col| col[c].clone()).collect())
                    .collect()
            };
            let mut quad = Vec::with_capacity(dim_m);
            for ci in &columns_i {
                let mut row = Vec::with_capacity(dim_m);
                for cj in &columns_j {
                    row.push(algebra.bracket(ci, cj)?);
                }
                quad.push(row);
            }
            pairs.push(PdePair {
                i,
                j,
                ad_i: to_matrix(&columns_i),
                ad_j: to_matrix(&columns_j),
                quad,
            });
        }
    }
    let alphas: Vec<String> = (1..=k).map(|i| format!("theta_a^{i}")).collect();
    Ok(GG0System {
        k,
        dim_m,
        frame_equations: vec![
            "theta_b = [theta_a, V]".into(),
            "theta_m = 0".into(),
            "theta_n = 0".into(),
        ],
        independence: format!("{} != 0", alphas.join(" ^ ")),
        pairs,
        unknowns: (1..=dim_m).map(|mu| format!("v{mu}")).collect(),
    })
}

impl GG0System {
    /// Human-readable coordinate equations, one line per pair and ambient
    /// component with a nonzero entry.
    pub fn render_text(&self, basis_names: &[String]) -> String {
        let mut out = String::new();
        for eq in &self.frame_equations {
            out.push_str(eq);
            out.push('\n');
        }
        out.push_str(&format!("independence: {}\n", self.independence));
        if self.pairs.is_empty() {
            out.push_str("no compatibility pairs (k < 2)\n");
            return out;
        }
        for pair in &self.pairs {
            out.push_str(&format!("pair (x{}, x{}):\n", pair.i + 1, pair.j + 1));
            for (c, basis_name) in basis_names.iter().enumerate() {
                let mut lhs = Vec::new();
                for (mu, name) in self.unknowns.iter().enumerate() {
                    let a = &pair.ad_i[c][mu];
                    if !a.is_zero() {
                        lhs.push(format!("{a}*d{name}/dx{}", pair.j + 1));
                    }
                    let b = &pair.ad_j[c][mu];
                    if !b.is_zero() {
                        lhs.push(format!("{}*d{name}/dx{}", -b, pair.i + 1));
                    }
                }
                let mut rhs = Vec::new();
                for mu in 0..self.dim_m {
                    for nu in 0..self.dim_m {
                        let q = &pair.quad[mu][nu][c];
                        if !q.is_zero() {
                            rhs.push(format!("{q}*v{}*v{}", mu + 1, nu + 1));
                        }
                    }
                }
                if lhs.is_empty() && rhs.is_empty() {
                    continue;
                }
                let join = |terms: Vec<String>| {
                    if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms.join(" + ").replace("+ -", "- ")
                    }
                };
                out.push_str(&format!(
                    "  [{basis_name}]: {} = {}\n",
                    join(lhs),
                    join(rhs)
                ));
            }
        }
        out
    }
}

impl GG0System {
    /// LaTeX form of the frame equations and independence condition.
    pub fn render_latex(&self) -> String {
        let alphas: Vec<String> = (1..=self.k)
            .map(|i| format!("\\theta_{{\\mathfrak a}}^{{{i}}}"))
            .collect();
        format!(
            "\\theta_{{\\mathfrak b}} = [\\theta_{{\\mathfrak a}}, V], \\quad \
             \\theta_{{\\mathfrak m}} = \\theta_{{\\mathfrak n}} = 0, \\quad \
             {} \\neq 0\n",
            alphas.join(" \\wedge ")
        )
    }
}

impl GG0Grid {
    /// Parse {"axes": [[...]], "V": nested arrays} where numbers may be
    /// JSON numbers or rational strings.
    pub fn from_json(value: &serde_json::Value, k: usize, dim_m: usize) -> Result<Self> {
        let axes_val = value
            .get("axes")
            .ok_or_else(|| Error::InvalidInput("grid JSON missing \"axes\"".into()))?;
        let axes_raw = axes_val
            .as_array()
            .ok_or_else(|| Error::InvalidInput("\"axes\" must be an array".into()))?;
        if axes_raw.len() != k {
            return Err(Error::InvalidInput(format!(
                "expected {k} axes, got {}",
                axes_raw.len()
            )));
        }
        let mut axes = Vec::with_capacity(k);
        for axis in axes_raw {
            let entries = axis
                .as_array()
                .ok_or_else(|| Error::InvalidInput("each axis must be an array".into()))?;
            if entries.len() < 3 {
                return Err(Error::Precondition("grid needs >= 3 points per axis".into()));
            }
            let mut coords = Vec::with_capacity(entries.len());
            for e in entries {
                coords.push(number_from_json(e)?);
            }
            if !coords.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidInput("axis values must be strictly increasing".into()));
            }
            axes.push(coords);
        }
        let v = value
            .get("V")
            .ok_or_else(|| Error::InvalidInput("grid JSON missing \"V\"".into()))?;
        let mut values = Vec::new();
        flatten_values(v, &axes, 0, dim_m, &mut values)?;
        Ok(GG0Grid {
            axes,
            values,
            dim_m,
        })
    }

    fn index(&self, idx: &[usize], mu: usize) -> f64 {
        let mut flat = 0;
        for (d, &i) in idx.iter().enumerate() {
            flat = flat * self.axes[d].len() + i;
        }
        self.values[flat * self.dim_m + mu]
    }

    fn value_at(&self, idx: &[usize]) -> Vec<f64> {
        (0..self.dim_m).map(|mu| self.index(idx, mu)).collect()
    }
}

fn number_from_json(v: &serde_json::Value) -> Result<f64> {
    if let Some(f) = v.as_f64() {
        return Ok(f);
    }
    if let Some(s) = v.as_str() {
        let r: Rat = s
            .parse()
            .map_err(|e| Error::InvalidInput(format!("bad grid number {s:?}: {e}")))?;
        return Ok(r.to_f64());
    }
    Err(Error::InvalidInput(format!("grid entry {v} is not a number")))
}

fn flatten_values(
    v: &serde_json::Value,
    axes: &[Vec<f64>],
    depth: usize,
    dim_m: usize,
    out: &mut Vec<f64>,
) -> Result<()> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("\"V\" nesting does not match the axes".into()))?;
    if depth == axes.len() {
        if arr.len() != dim_m {
            return Err(Error::InvalidInput(format!(
                "innermost V entries must have {dim_m} components, got {}",
                arr.len()
            )));
        }
        for e in arr {
            out.push(number_from_json(e)?);
        }
        return Ok(());
    }
    if arr.len() != axes[depth].len() {
        return Err(Error::InvalidInput(format!(
            "V has {} entries along axis {depth}, expected {}",
            arr.len(),
            axes[depth].len()
        )));
    }
    for e in arr {
        flatten_values(e, axes, depth + 1, dim_m, out)?;
    }
    Ok(())
}

/// Max-norm PDE residual per pair (i, j), by central finite differences on
/// interior grid points. Floating point by design; the caller supplies the
/// tolerance.
pub fn gg0_residual(data: &CartanData, grid: &GG0Grid) -> Result<Vec<((usize, usize), f64)>> {
    let system = emit_gg0(data)?;
    if grid.axes.len() != system.k || grid.dim_m != system.dim_m {
        return Err(Error::DimensionMismatch(
            "grid shape does not match the symmetric space".into(),
        ));
    }
    for axis in &grid.axes {
        if axis.len() < 3 {
            return Err(Error::Precondition("grid needs >= 3 points per axis".into()));
        }
    }
    let n = data.decomposition.algebra.dim();
    let to_f64_matrix =
        |m: &Vec<Vec<Rat>>| -> Vec<Vec<f64>> { m.iter().map(|r| r.iter().map(Rat::to_f64).collect()).collect() };
    let mut out = Vec::new();
    for pair in &system.pairs {
        let ad_i = to_f64_matrix(&pair.ad_i);
        let ad_j = to_f64_matrix(&pair.ad_j);
        let quad: Vec<Vec<Vec<f64>>> = pair
            .quad
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(Rat::to_f64).collect()).collect())
            .collect();
        let mut max_residual: f64 = 0.0;
        let shape: Vec<usize> = grid.axes.iter().map(Vec::len).collect();
        for idx in interior_points(&shape, pair.i, pair.j) {
            let dv_i = central_difference(grid, &idx, pair.i);
            let dv_j = central_difference(grid, &idx, pair.j);
            let v = grid.value_at(&idx);
            for c in 0..n {
                let mut lhs = 0.0;
                for mu in 0..grid.dim_m {
                    lhs += ad_i[c][mu] * dv_j[mu] - ad_j[c][mu] * dv_i[mu];
                }
                let mut rhs = 0.0;
                for mu in 0..grid.dim_m {
                    for nu in 0..grid.dim_m {
                        rhs += quad[mu][nu][c] * v[mu] * v[nu];
                    }
                }
                max_residual = max_residual.max((lhs - rhs).abs());
            }
        }
        out.push(((pair.i, pair.j), max_residual));
    }
    Ok(out)
}

/// Grid indices interior along the two differentiated axes, full range on
/// the others.
fn interior_points(shape: &[usize], axis_a: usize, axis_b: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; shape.len()];
    loop {
        let interior = |d: usize| idx[d] >= 1 && idx[d] + 1 < shape[d];
        if interior(axis_a) && interior(axis_b) {
            out.push(idx.clone());
        }
        // Odometer increment.
        let mut d = shape.len();
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

fn central_difference(grid: &GG0Grid, idx: &[usize], axis: usize) -> Vec<f64> {
    let mut up = idx.to_vec();
    up[axis] += 1;
    let mut down = idx.to_vec();
    down[axis] -= 1;
    let dx = grid.axes[axis][up[axis]] - grid.axes[axis][down[axis]];
    let upper = grid.value_at(&up);
    let lower = grid.value_at(&down);
    upper
        .iter()
        .zip(&lower)
        .map(|(u, l)| (u - l) / dx)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sl3_data() -> CartanData {
        let d = catalog::sl3_so3();
        let (_, data) = d.build_cartan_tableau(&catalog::sl3_so3_abelian()).unwrap();
        data
    }

    fn constant_grid(k: usize, dim_m: usize, points: usize, value: &[f64]) -> GG0Grid {
        let axes: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..points).map(|i| i as f64 * 0.1).collect())
            .collect();
        let cells: usize = axes.iter().map(Vec::len).product();
        let mut values = Vec::with_capacity(cells * dim_m);
        for _ in 0..cells {
            values.extend_from_slice(value);
        }
        GG0Grid {
            axes,
            values,
            dim_m,
        }
    }

    #[test]
    fn emit_counts_for_sl3() {
        let system = emit_gg0(&sl3_data()).unwrap();
        assert_eq!(system.k, 2);
        assert_eq!(system.dim_m, 3);
        assert_eq!(system.pairs.len(), 1);
        let text = system.render_text(sl3_data().decomposition.algebra.basis_names());
        assert!(text.contains("theta_b = [theta_a, V]"));
        assert!(text.contains("pair (x1, x2):"));
    }

    #[test]
    fn pde_coefficients_match_the_cartan_tableau_generators() {
        // The frame equation theta_b = [theta_a, V] is the eta = 0 part of
        // the emitted Pfaffian system: Q_mu(A_i) = [A_i, X_mu] in b-coords.
        let d = catalog::sl3_so3();
        let (spec, data) = d.build_cartan_tableau(&catalog::sl3_so3_abelian()).unwrap();
        let system = emit_gg0(&data).unwrap();
        let b_t = crate::matrix::RatMatrix::from_rows(data.b_basis.clone()).transpose();
        let pair = &system.pairs[0];
        for (mu, q) in spec.generators.iter().enumerate() {
            let col: Vec<Rat> = (0..b_t.rows()).map(|c| pair.ad_i[c][mu].clone()).collect();
            let coords = b_t.solve(&col).unwrap();
            for (j, coord) in coords.iter().enumerate() {
                assert_eq!(q.at(j, pair.i), coord, "generator {mu}, b-row {j}");
            }
        }
    }

    #[test]
    fn no_pairs_when_rank_one() {
        let d = catalog::sl2_so2();
        let (_, data) = d.build_cartan_tableau(&catalog::sl2_so2_abelian()).unwrap();
        let system = emit_gg0(&data).unwrap();
        assert!(system.pairs.is_empty());
    }

    #[test]
    fn product_blocks_do_not_couple() {
        let d = catalog::sl2_so2_product();
        let (_, data) = d
            .build_cartan_tableau(&catalog::sl2_so2_product_abelian())
            .unwrap();
        let system = emit_gg0(&data).unwrap();
        assert_eq!(system.pairs.len(), 1);
        let pair = &system.pairs[0];
        // Cross-block quadratic terms vanish: [[A_1, X_mu], [A_2, X_nu]] = 0
        // whenever mu, nu live in different blocks, and also within a block
        // since the other A acts by zero there.
        for mu in 0..2 {
            for nu in 0..2 {
                let all_zero = pair.quad[mu][nu].iter().all(Rat::is_zero);
                assert!(all_zero, "quad[{mu}][{nu}] should vanish for the product");
            }
        }
    }

    #[test]
    fn residual_zero_map_is_exactly_zero() {
        let data = sl3_data();
        let grid = constant_grid(2, 3, 4, &[0.0, 0.0, 0.0]);
        let residuals = gg0_residual(&data, &grid).unwrap();
        assert_eq!(residuals.len(), 1);
        assert_eq!(residuals[0].1, 0.0);
    }

    #[test]
    fn residual_constant_map_equals_quadratic_norm() {
        // V constant: derivatives vanish, residual = max |[[A_i,V],[A_j,V]]|.
        let data = sl3_data();
        let v = [1.0, 2.0, -1.0];
        let grid = constant_grid(2, 3, 3, &v);
        let residuals = gg0_residual(&data, &grid).unwrap();
        let system = emit_gg0(&data).unwrap();
        let pair = &system.pairs[0];
        let n = data.decomposition.algebra.dim();
        let mut expected: f64 = 0.0;
        for c in 0..n {
            let mut rhs = 0.0;
            for mu in 0..3 {
                for nu in 0..3 {
                    rhs += pair.quad[mu][nu][c].to_f64() * v[mu] * v[nu];
                }
            }
            expected = expected.max(rhs.abs());
        }
        assert!(expected > 0.0);
        assert!((residuals[0].1 - expected).abs() < 1e-12);
    }

    #[test]
    fn residual_vanishes_for_exact_linear_solution() {
        // Product of two rank-one blocks: V(x) = (c1 x1 + c2 x2) W with W
        // the block-2 direction of m and c_i the block-2 coefficient of the
        // regular A_i solves the system exactly (both sides vanish
        // pointwise). Central differences are exact on linear data, so the
        // residual is zero at any spacing.
        let d = catalog::sl2_so2_product();
        let (_, data) = d
            .build_cartan_tableau(&catalog::sl2_so2_product_abelian())
            .unwrap();
        // Catalog coordinates: e3 is the block-2 H; m-basis is (e1, e4).
        let c1 = data.regular_basis[0][3].to_f64();
        let c2 = data.regular_basis[1][3].to_f64();
        let axes: Vec<Vec<f64>> = vec![
            (0..5).map(|i| i as f64 * 0.25).collect(),
            (0..4).map(|i| i as f64 * 0.5).collect(),
        ];
        let mut values = Vec::new();
        for &x1 in &axes[0] {
            for &x2 in &axes[1] {
                values.extend_from_slice(&[0.0, 3.0 * (c1 * x1 + c2 * x2)]);
            }
        }
        let grid = GG0Grid {
            axes,
            values,
            dim_m: 2,
        };
        let residuals = gg0_residual(&data, &grid).unwrap();
        assert_eq!(residuals[0].1, 0.0);
    }

    #[test]
    fn grid_json_parsing() {
        let json: serde_json::Value = serde_json::json!({
            "axes": [[0.0, 0.5, 1.0], ["0", "1/2", "1"]],
            "V": [
                [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
                [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
                [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
            ],
        });
        let grid = GG0Grid::from_json(&json, 2, 3).unwrap();
        assert_eq!(grid.axes[1], vec![0.0, 0.5, 1.0]);
        assert_eq!(grid.values.len(), 27);
        // Too few points per axis is rejected.
        let bad = serde_json::json!({"axes": [[0.0, 1.0], [0.0, 0.5, 1.0]], "V": []});
        assert!(GG0Grid::from_json(&bad, 2, 3).is_err());
    }
}
