//! Dense LU factorisation with partial pivoting in arbitrary precision.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::Context;

/// Row-major square matrix of MPFR floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Float>,
}

impl Matrix {
    pub fn zeros(n: usize, ctx: &Context) -> Self {
        Matrix {
            n,
            data: vec![ctx.zero(); n * n],
        }
    }

    pub fn identity(n: usize, ctx: &Context) -> Self {
        let mut m = Matrix::zeros(n, ctx);
        for i in 0..n {
            m.data[i * n + i] = ctx.real(1);
        }
        m
    }

    pub fn from_fn<F>(n: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Float,
    {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Float) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Float] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// A·x at precision `prec`.
    pub fn mul_vec(&self, x: &[Float], prec: u32) -> Vec<Float> {
        (0..self.n)
            .map(|i| {
                let mut acc = Float::new(prec);
                for (a, xj) in self.row(i).iter().zip(x) {
                    acc += Float::with_val(prec, a * xj);
                }
                acc
            })
            .collect()
    }

    fn row_max_abs(&self, i: usize) -> Float {
        let prec = self.data.first().map_or(64, |x| x.prec());
        let mut best = Float::new(prec);
        for x in self.row(i) {
            let v = Float::with_val(prec, x.abs_ref());
            if v > best {
                best = v;
            }
        }
        best
    }
}

/// Packed L (unit lower) and U factors with the row permutation.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
}

/// PA = LU with scaled partial pivoting: each candidate is measured
/// against the largest entry of its original row, so systems whose rows
/// differ by many orders of magnitude pivot sensibly. A relative pivot
/// below 10^(−working digits) is reported as singular.
pub fn lu_decompose(a: &Matrix, ctx: &Context) -> Result<LuFactors> {
    let n = a.n;
    let prec = ctx.prec();
    let mut lu = Matrix::from_fn(n, |i, j| Float::with_val(prec, a.get(i, j)));
    let mut perm: Vec<usize> = (0..n).collect();
    let mut scale: Vec<Float> = (0..n).map(|i| a.row_max_abs(i)).collect();
    let eps = ctx.epsilon();

    for k in 0..n {
        let mut p = k;
        let mut best = Float::new(prec);
        for i in k..n {
            if scale[i].is_zero() {
                continue;
            }
            let v = Float::with_val(prec, lu.get(i, k).abs_ref()) / &scale[i];
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= eps {
            return Err(Error::SingularPivot {
                index: k,
                magnitude: format!("{:.6e}", best.to_f64()),
            });
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            scale.swap(k, p);
        }
        let pivot = lu.get(k, k).clone();
        for i in k + 1..n {
            let factor = Float::with_val(prec, lu.get(i, k) / &pivot);
            if factor.is_zero() {
                lu.set(i, k, factor);
                continue;
            }
            let (upper, lower) = lu.data.split_at_mut(i * n);
            let row_k = &upper[k * n..(k + 1) * n];
            let row_i = &mut lower[..n];
            for j in k + 1..n {
                row_i[j] -= Float::with_val(prec, &factor * &row_k[j]);
            }
            row_i[k] = factor;
        }
    }
    Ok(LuFactors { lu, perm })
}

impl LuFactors {
    pub fn solve(&self, b: &[Float], prec: u32) -> Vec<Float> {
        let n = self.lu.n;
        let mut y: Vec<Float> = self.perm.iter().map(|&p| Float::with_val(prec, &b[p])).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            for j in 0..i {
                let t = Float::with_val(prec, &row[j] * &y[j]);
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            for j in i + 1..n {
                let t = Float::with_val(prec, &row[j] * &y[j]);
                y[i] -= t;
            }
            y[i] /= &row[i];
        }
        y
    }
}

/// Solution of A·x = b with one pass of iterative refinement, the residual
/// being accumulated with twice the working bits.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub x: Vec<Float>,
    /// max_i |(A x − b)_i|
    pub residual: Float,
}

pub fn solve_refined(a: &Matrix, b: &[Float], ctx: &Context) -> Result<LinearSolution> {
    if b.len() != a.n {
        return Err(Error::Config(format!(
            "right-hand side has {} entries for a {}×{} matrix",
            b.len(),
            a.n,
            a.n
        )));
    }
    let prec = ctx.prec();
    let factors = lu_decompose(a, ctx)?;
    let mut x = factors.solve(b, prec);
    let r = residual_vector(a, &x, b, 2 * prec);
    let r: Vec<Float> = r.into_iter().map(|v| Float::with_val(prec, v)).collect();
    let dx = factors.solve(&r, prec);
    for (xi, d) in x.iter_mut().zip(&dx) {
        *xi -= d;
    }
    let residual = residual_vector(a, &x, b, 2 * prec)
        .into_iter()
        .map(|v| v.abs())
        .fold(
            Float::new(prec),
            |m, v| if v > m { Float::with_val(prec, v) } else { m },
        );
    Ok(LinearSolution { x, residual })
}

/// A x − b at `prec` bits.
pub fn residual_vector(a: &Matrix, x: &[Float], b: &[Float], prec: u32) -> Vec<Float> {
    a.mul_vec(x, prec)
        .into_iter()
        .zip(b)
        .map(|(ax, bi)| ax - Float::with_val(prec, bi))
        .collect()
}
