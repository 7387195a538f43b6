//! Freudenthal/Kuhn subdivision of each strategy simplex, and product cells.
//!
//! A point of the `d`-simplex at resolution `m` is stored by its integer
//! barycentric numerators `a_0, …, a_d` (summing to `m`). Cells come from the
//! staircase coordinates `z_k = a_k + … + a_d`, which satisfy
//! `m ≥ z_1 ≥ … ≥ z_d ≥ 0`; every Kuhn simplex of the unit-cube grid lying
//! inside that region is one cell.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile};
use crate::linalg::determinant;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    dim: usize,
    resolution: u32,
    vertices: Vec<Vec<u32>>,
    cells: Vec<Vec<usize>>,
    index: HashMap<Vec<u32>, usize>,
}

/// Subdivides the `dim`-simplex into `resolution^dim` cells.
pub fn triangulate(dim: usize, resolution: u32) -> Result<Triangulation> {
    if resolution == 0 {
        return Err(Error::ResolutionZero);
    }
    let m = resolution;
    let mut vertices = Vec::new();
    compositions(m, dim + 1, &mut Vec::with_capacity(dim + 1), &mut vertices);
    let index: HashMap<Vec<u32>, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();

    let mut cells = Vec::new();
    let perms = permutations(dim);
    let mut base = vec![0u32; dim];
    loop {
        for perm in &perms {
            let mut z = base.clone();
            let mut path = vec![z.clone()];
            for &axis in perm {
                z[axis] += 1;
                path.push(z.clone());
            }
            if path.iter().all(|p| staircase_ok(p, m)) {
                let mut cell: Vec<usize> =
                    path.iter().map(|p| index[&to_barycentric(p, m)]).collect();
                if dim >= 1 && orientation(&vertices, &cell, m) < 0 {
                    cell.swap(dim - 1, dim);
                }
                cells.push(cell);
            }
        }
        // next cube base, last axis fastest
        let mut j = dim;
        loop {
            if j == 0 {
                return Ok(Triangulation {
                    dim,
                    resolution,
                    vertices,
                    cells,
                    index,
                });
            }
            j -= 1;
            base[j] += 1;
            if base[j] < m {
                break;
            }
            base[j] = 0;
        }
    }
}

fn staircase_ok(z: &[u32], m: u32) -> bool {
    z.first().is_none_or(|&z1| z1 <= m) && z.windows(2).all(|w| w[0] >= w[1])
}

fn to_barycentric(z: &[u32], m: u32) -> Vec<u32> {
    let d = z.len();
    let mut out = Vec::with_capacity(d + 1);
    let mut prev = m;
    for &zk in z {
        out.push(prev - zk);
        prev = zk;
    }
    out.push(prev);
    debug_assert_eq!(out.len(), d + 1);
    out
}

/// Sign of the barycentric determinant of a cell.
fn orientation(vertices: &[Vec<u32>], cell: &[usize], m: u32) -> i32 {
    let rows: Vec<Vec<Rational>> = cell
        .iter()
        .map(|&v| {
            vertices[v]
                .iter()
                .map(|&a| Rational::new(BigInt::from(a), BigInt::from(m)))
                .collect()
        })
        .collect();
    let det = determinant(rows);
    if det.is_zero() {
        0
    } else if det > Rational::zero() {
        1
    } else {
        -1
    }
}

/// All compositions of `total` into `parts` nonnegative parts, lexicographic.
fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

impl Triangulation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Integer barycentric numerators of a vertex (denominator = resolution).
    pub fn numerators(&self, vertex: usize) -> &[u32] {
        &self.vertices[vertex]
    }

    pub fn vertex_point(&self, vertex: usize) -> Vec<Rational> {
        let m = BigInt::from(self.resolution);
        self.vertices[vertex]
            .iter()
            .map(|&a| Rational::new(BigInt::from(a), m.clone()))
            .collect()
    }

    pub fn vertex_index(&self, numerators: &[u32]) -> Option<usize> {
        self.index.get(numerators).copied()
    }

    pub fn cell(&self, cell: usize) -> &[usize] {
        &self.cells[cell]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Normalized signed volume of a cell (the whole simplex has volume 1).
    pub fn cell_volume(&self, cell: usize) -> Rational {
        let rows = self.cells[cell]
            .iter()
            .map(|&v| self.vertex_point(v))
            .collect();
        determinant(rows)
    }

    /// Cell containing a barycentric point: the first cell, in canonical
    /// order, whose closure contains it.
    pub fn locate(&self, point: &[Rational]) -> Option<usize> {
        (0..self.cells.len()).find(|&c| self.contains(c, point))
    }

    /// Whether the closed cell contains `point`, by solving for barycentric
    /// weights relative to the cell's vertices.
    pub fn contains(&self, cell: usize, point: &[Rational]) -> bool {
        let weights = self.cell_weights(cell, point);
        weights.iter().all(|w| *w >= Rational::zero())
    }

    /// Whether `point` lies strictly inside the cell.
    pub fn contains_interior(&self, cell: usize, point: &[Rational]) -> bool {
        let weights = self.cell_weights(cell, point);
        weights.iter().all(|w| *w > Rational::zero())
    }

    fn cell_weights(&self, cell: usize, point: &[Rational]) -> Vec<Rational> {
        // Cramer's rule on the (d+1)x(d+1) system Σ w_k v_k = point.
        let verts: Vec<Vec<Rational>> = self.cells[cell]
            .iter()
            .map(|&v| self.vertex_point(v))
            .collect();
        let det = determinant(verts.clone());
        (0..verts.len())
            .map(|k| {
                let mut rows = verts.clone();
                rows[k] = point.to_vec();
                determinant(rows) / det.clone()
            })
            .collect()
    }
}

/// The per-player triangulations that together partition the profile space.
#[derive(Debug, Clone)]
pub struct ProductGrid {
    tris: Vec<Triangulation>,
}

/// One cell of the product subdivision, identified with its vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCell {
    /// Position in canonical (lexicographic factor) order.
    pub index: usize,
    /// Per-player cell index into that player's triangulation.
    pub factor: Vec<usize>,
    /// Per vertex profile, per player: vertex index into that player's
    /// triangulation. Last player varies fastest.
    pub vertex_ids: Vec<Vec<usize>>,
    pub vertex_profiles: Vec<MixedProfile<Rational>>,
}

impl ProductGrid {
    pub fn new(shape: &[usize], resolutions: &[u32]) -> Result<Self> {
        if shape.len() != resolutions.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} resolutions for {} players",
                resolutions.len(),
                shape.len()
            )));
        }
        let tris = shape
            .iter()
            .zip(resolutions)
            .map(|(&k, &m)| triangulate(k - 1, m))
            .collect::<Result<_>>()?;
        Ok(ProductGrid { tris })
    }

    pub fn for_game<S: Scalar>(game: &Game<S>, resolutions: &[u32]) -> Result<Self> {
        ProductGrid::new(&game.shape(), resolutions)
    }

    pub fn triangulations(&self) -> &[Triangulation] {
        &self.tris
    }

    pub fn resolutions(&self) -> Vec<u32> {
        self.tris.iter().map(|t| t.resolution).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.tris.iter().map(Triangulation::cell_count).product()
    }

    /// Number of distinct vertex profiles, `∏_j C(m_j + d_j, d_j)`.
    pub fn vertex_profile_count(&self) -> usize {
        self.tris.iter().map(Triangulation::vertex_count).product()
    }

    pub fn factor_of(&self, mut index: usize) -> Vec<usize> {
        let mut factor = vec![0; self.tris.len()];
        for (j, t) in self.tris.iter().enumerate().rev() {
            factor[j] = index % t.cell_count();
            index /= t.cell_count();
        }
        factor
    }

    /// Vertex tuples of a product cell, last player fastest.
    pub fn cell_vertex_ids(&self, factor: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (t, &c) in self.tris.iter().zip(factor) {
            let verts = t.cell(c);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    verts.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Global id of a vertex profile (mixed radix over per-player vertex ids).
    pub fn vertex_key(&self, ids: &[usize]) -> usize {
        ids.iter()
            .zip(&self.tris)
            .fold(0, |acc, (&v, t)| acc * t.vertex_count() + v)
    }

    pub fn vertex_ids_of_key(&self, mut key: usize) -> Vec<usize> {
        let mut ids = vec![0; self.tris.len()];
        for (j, t) in self.tris.iter().enumerate().rev() {
            ids[j] = key % t.vertex_count();
            key /= t.vertex_count();
        }
        ids
    }

    pub fn vertex_profile(&self, ids: &[usize]) -> MixedProfile<Rational> {
        MixedProfile::new(
            ids.iter()
                .zip(&self.tris)
                .map(|(&v, t)| t.vertex_point(v))
                .collect(),
        )
    }

    pub fn cell(&self, index: usize) -> ProductCell {
        let factor = self.factor_of(index);
        let vertex_ids = self.cell_vertex_ids(&factor);
        let vertex_profiles = vertex_ids
            .iter()
            .map(|ids| self.vertex_profile(ids))
            .collect();
        ProductCell {
            index,
            factor,
            vertex_ids,
            vertex_profiles,
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = ProductCell> + '_ {
        (0..self.cell_count()).map(move |i| self.cell(i))
    }
}

/// All product cells of the game's profile space at the given per-player
/// resolutions, in lexicographic factor order.
pub fn product_cells<S: Scalar>(
    game: &Game<S>,
    resolutions: &[u32],
) -> Result<impl Iterator<Item = ProductCell>> {
    let grid = ProductGrid::for_game(game, resolutions)?;
    Ok((0..grid.cell_count()).map(move |i| grid.cell(i)))
}

/// Squared Euclidean diameter of a cell in the concatenated-coordinate
/// embedding, exact.
pub fn cell_diameter_squared(cell: &ProductCell) -> Rational {
    let mut best = Rational::zero();
    let profiles = &cell.vertex_profiles;
    for a in 0..profiles.len() {
        for b in a + 1..profiles.len() {
            let d2 = profiles[a]
                .dist
                .iter()
                .flatten()
                .zip(profiles[b].dist.iter().flatten())
                .fold(Rational::zero(), |acc, (x, y)| {
                    let diff = x - y;
                    acc + &diff * &diff
                });
            if d2 > best {
                best = d2;
            }
        }
    }
    best
}

pub fn cell_diameter(cell: &ProductCell) -> f64 {
    cell_diameter_squared(cell).to_f64().sqrt()
}

/// Upper bound on product-cell diameters for a game shape. Two vertices of a
/// Kuhn cell differ by at most one lattice step in each of the `d_j + 1`
/// barycentric coordinates, so a factor cell has squared diameter at most
/// `(d_j + 1)/m_j²`; the bound is `O(1/min_j m_j)`.
pub fn diameter_bound(shape: &[usize], resolutions: &[u32]) -> f64 {
    let sum: f64 = shape
        .iter()
        .zip(resolutions)
        .map(|(&k, &m)| k as f64 / (m as f64 * m as f64))
        .sum();
    sum.sqrt()
}
