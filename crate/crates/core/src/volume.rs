//! Volume of the subdivision under the root motion, single-player case.
//!
//! Every cell is pushed along `h(v, t) = (1 - t)·v + t·r(v)` vertex by vertex.
//! The signed volume of the moved cell is a polynomial in `t`; summing over
//! cells gives `g(t)`. Because the motion keeps every face of the simplex in
//! place, `g` is constant, so `g(1) = g(0) = 1` and some cell keeps positive
//! volume at `t = 1`, which forces its labels to be pairwise distinct.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile};
use crate::linalg::determinant;
use crate::root::root_label;
use crate::scalar::Rational;
use crate::subdivision::{triangulate, Triangulation};

/// Dense polynomial with exact coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `a + b·t`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Polynomial::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Determinant of a matrix of polynomials by cofactor expansion.
fn poly_determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    match n {
        0 => Polynomial::constant(Rational::one()),
        1 => m[0][0].clone(),
        _ => {
            let mut total = Polynomial::constant(Rational::zero());
            for col in 0..n {
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].mul(&poly_determinant(&minor));
                total = if col % 2 == 0 {
                    total.add(&term)
                } else {
                    total.add(&term.neg())
                };
            }
            total
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumePolynomial {
    pub resolution: u32,
    /// Signed-volume polynomial of each moved cell, in canonical cell order.
    pub per_cell: Vec<Polynomial>,
    /// `g(t)`.
    pub total: Polynomial,
    pub constant: bool,
    /// Cells whose moved volume is nonzero at `t = 1`.
    pub nonzero_at_one: Vec<usize>,
}

fn require_single_player(game: &Game<Rational>) -> Result<()> {
    match game.num_players() {
        1 => Ok(()),
        n => Err(Error::NotSinglePlayer(n)),
    }
}

fn vertex_labels(game: &Game<Rational>, tri: &Triangulation) -> Result<Vec<usize>> {
    (0..tri.vertex_count())
        .map(|v| Ok(root_label(game, &MixedProfile::new(vec![tri.vertex_point(v)]))?.0[0]))
        .collect()
}

/// Matrix whose rows are the moved vertices `(1-t)v + t·e_label`, entrywise
/// affine in `t`.
fn moved_rows(tri: &Triangulation, cell: usize, labels: &[usize]) -> Vec<Vec<Polynomial>> {
    tri.cell(cell)
        .iter()
        .map(|&v| {
            tri.vertex_point(v)
                .into_iter()
                .enumerate()
                .map(|(s, a)| {
                    let target = if s == labels[v] {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    let slope = target - &a;
                    Polynomial::linear(a, slope)
                })
                .collect()
        })
        .collect()
}

/// Signed volume of the moved cell at time `t`, normalized so the whole
/// simplex has volume 1. Computed directly from the moved vertices.
pub fn moved_cell_volume(
    game: &Game<Rational>,
    tri: &Triangulation,
    cell: usize,
    t: &Rational,
) -> Result<Rational> {
    require_single_player(game)?;
    check_shape(game, tri)?;
    if cell >= tri.cell_count() {
        return Err(Error::IndexOutOfRange(format!(
            "cell {cell} of {}",
            tri.cell_count()
        )));
    }
    let keep = Rational::one() - t;
    let rows = tri
        .cell(cell)
        .iter()
        .map(|&v| {
            let sigma = MixedProfile::new(vec![tri.vertex_point(v)]);
            let label = root_label(game, &sigma)?.0[0];
            Ok(sigma.dist[0]
                .iter()
                .enumerate()
                .map(|(s, a)| {
                    let moved = &keep * a;
                    if s == label {
                        moved + t
                    } else {
                        moved
                    }
                })
                .collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Ok(determinant(rows))
}

fn check_shape(game: &Game<Rational>, tri: &Triangulation) -> Result<()> {
    if tri.dim() + 1 != game.num_strategies(0) {
        return Err(Error::DimensionMismatch(format!(
            "triangulation of dimension {} for {} strategies",
            tri.dim(),
            game.num_strategies(0)
        )));
    }
    Ok(())
}

/// Exact coefficient form of `g(t)` at resolution `m`.
pub fn total_volume_polynomial(game: &Game<Rational>, m: u32) -> Result<VolumePolynomial> {
    require_single_player(game)?;
    let tri = triangulate(game.num_strategies(0) - 1, m)?;
    let labels = vertex_labels(game, &tri)?;
    let per_cell: Vec<Polynomial> = (0..tri.cell_count())
        .map(|c| poly_determinant(&moved_rows(&tri, c, &labels)))
        .collect();
    let total = per_cell
        .iter()
        .fold(Polynomial::constant(Rational::zero()), |acc, p| acc.add(p));
    let one = Rational::one();
    let nonzero_at_one = per_cell
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.eval(&one).is_zero())
        .map(|(c, _)| c)
        .collect();
    Ok(VolumePolynomial {
        resolution: m,
        constant: total.is_constant(),
        per_cell,
        total,
        nonzero_at_one,
    })
}

impl VolumePolynomial {
    /// Independent check of the coefficient form: sums direct moved-cell
    /// determinants at `dim + 2` sample times, interpolates them, and compares
    /// both the samples and the recovered coefficients.
    pub fn interpolation_check(&self, game: &Game<Rational>) -> Result<bool> {
        let tri = triangulate(game.num_strategies(0) - 1, self.resolution)?;
        let points: Vec<Rational> = (0..tri.dim() as i64 + 2)
            .map(|k| Rational::new(BigInt::from(k), BigInt::from(tri.dim() + 1)))
            .collect();
        let mut values = Vec::with_capacity(points.len());
        for t in &points {
            let mut sum = Rational::zero();
            for c in 0..tri.cell_count() {
                sum += moved_cell_volume(game, &tri, c, t)?;
            }
            values.push(sum);
        }
        if points
            .iter()
            .zip(&values)
            .any(|(t, v)| self.total.eval(t) != *v)
        {
            return Ok(false);
        }
        Ok(lagrange_coefficients(&points, &values) == self.total)
    }

    /// `t,g_total,cell_index,cell_value` rows at `samples + 1` evenly spaced times.
    pub fn samples_csv(&self, samples: u32) -> String {
        let mut out = String::from("t,g_total,cell_index,cell_value\n");
        for k in 0..=samples {
            let t = Rational::new(BigInt::from(k), BigInt::from(samples.max(1)));
            let g = self.total.eval(&t);
            for (c, p) in self.per_cell.iter().enumerate() {
                let _ = writeln!(out, "{t},{g},{c},{}", p.eval(&t));
            }
        }
        out
    }
}

/// Coefficients of the interpolating polynomial through `(x_k, y_k)`.
fn lagrange_coefficients(xs: &[Rational], ys: &[Rational]) -> Polynomial {
    let mut total = Polynomial::constant(Rational::zero());
    for (k, (xk, yk)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Polynomial::constant(yk.clone());
        for (j, xj) in xs.iter().enumerate() {
            if j != k {
                let denom = xk - xj;
                basis = basis.mul(&Polynomial::linear(-xj / &denom, Rational::one() / &denom));
            }
        }
        total = total.add(&basis);
    }
    total
}
