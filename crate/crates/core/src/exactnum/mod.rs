//! Exact scalars and the linear-algebra substrate.
//!
//! Every quantity derived from graph input — kernels, measures, distances,
//! transport costs, curvatures — is computed over arbitrary-precision
//! rationals, so comparisons downstream are exact equalities rather than
//! tolerance checks.  Floating point enters the codebase only in the
//! spectral module.

mod simplex;

pub use simplex::{
    solve_lp, Constraint, LinearProgram, LpError, LpSolution, Relation, Sense,
};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator (both maintained by the underlying representation).
pub type Rational = num_rational::BigRational;

/// The integer `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d` as an exact rational.
///
/// Panics if `d == 0`; intended for literals in code and tests.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest `f64` to an exact rational, for hand-off to the spectral module.
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational magnitude representable as f64")
}

/// Error produced when a rational literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub message: String,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse {:?} as a rational: {}", self.input, self.message)
    }
}

impl std::error::Error for ParseRationalError {}

fn parse_err(input: &str, message: &str) -> ParseRationalError {
    ParseRationalError {
        input: input.to_string(),
        message: message.to_string(),
    }
}

/// Parses an exact rational from an integer (`"3"`, `"-7"`), a fraction
/// (`"p/q"`), or a plain decimal (`"2.5"`, `".125"`) literal.
///
/// Decimals are converted exactly (`"2.5"` becomes `5/2`); exponent notation
/// is rejected so that no rounding can sneak in through input.
pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(parse_err(input, "empty literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| parse_err(input, "numerator is not an integer"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| parse_err(input, "denominator is not an integer"))?;
        if d.is_zero() {
            return Err(parse_err(input, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(parse_err(input, "no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(parse_err(input, "expected digits, optionally split by one '.'"));
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().expect("digit-checked integer part")
    };
    let mut denom = BigInt::from(1);
    for c in frac_part.chars() {
        numer = numer * 10 + c.to_digit(10).expect("digit-checked fraction part");
        denom *= 10;
    }
    Ok(Rational::new(numer * sign, denom))
}

/// Dense matrix of rationals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// The `n × n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rat(1));
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    ///
    /// Panics on ragged input; shapes are static facts of the callers here.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    /// Row `r` as a slice.
    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    /// Matrix-vector product `A v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for c in 0..self.cols {
                    let a = self.at(r, c);
                    if !a.is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Failure modes of the exact linear solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinSolveError {
    /// The system is inconsistent.
    NoSolution,
    /// The system is consistent but the solution is not unique.
    NonUnique,
    /// `b` does not match the row count of `a`.
    ShapeMismatch { rows: usize, rhs_len: usize },
}

impl fmt::Display for LinSolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinSolveError::NoSolution => write!(f, "linear system has no solution"),
            LinSolveError::NonUnique => write!(f, "linear system has no unique solution"),
            LinSolveError::ShapeMismatch { rows, rhs_len } => {
                write!(f, "matrix has {rows} rows but right-hand side has {rhs_len} entries")
            }
        }
    }
}

impl std::error::Error for LinSolveError {}

/// Solves `A x = b` exactly by Gauss–Jordan elimination.
///
/// `A` may be square or overdetermined; the result is the unique exact
/// solution when one exists.  Inconsistent systems report
/// [`LinSolveError::NoSolution`], consistent-but-underdetermined systems
/// report [`LinSolveError::NonUnique`].
pub fn solve_linear_system(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>, LinSolveError> {
    if a.rows() != b.len() {
        return Err(LinSolveError::ShapeMismatch {
            rows: a.rows(),
            rhs_len: b.len(),
        });
    }
    let rows = a.rows();
    let cols = a.cols();
    let mut aug: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pr) = (next_row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(next_row, pr);
        let inv = aug[next_row][col].recip();
        for entry in aug[next_row].iter_mut() {
            if !entry.is_zero() {
                *entry *= &inv;
            }
        }
        for r in 0..rows {
            if r != next_row && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in col..=cols {
                    if !aug[next_row][c].is_zero() {
                        let delta = &factor * &aug[next_row][c];
                        aug[r][c] -= delta;
                    }
                }
            }
        }
        pivot_cols.push(col);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }

    for row in aug.iter().skip(next_row) {
        if !row[cols].is_zero() {
            return Err(LinSolveError::NoSolution);
        }
    }
    if pivot_cols.len() < cols {
        return Err(LinSolveError::NonUnique);
    }
    let mut x = vec![Rational::zero(); cols];
    for (rank, &col) in pivot_cols.iter().enumerate() {
        x[col] = aug[rank][cols].clone();
    }
    Ok(x)
}

/// Absolute value, exported for call sites that work with `abs` on sums.
pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}
