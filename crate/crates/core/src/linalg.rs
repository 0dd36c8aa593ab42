//! Exact linear algebra over the rationals.
//!
//! Every routine here works with arbitrary-precision rationals so ranks,
//! null spaces and row-space membership are decided without any rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Converts an integer matrix into a rational one.
pub fn from_ints<I: Copy + Into<i64>>(rows: &[Vec<I>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| rat(x.into())).collect())
        .collect()
}

fn sub_scaled(row: &mut [Rational], factor: &Rational, other: &[Rational]) {
    for (x, y) in row.iter_mut().zip(other) {
        if !y.is_zero() {
            *x -= factor * y;
        }
    }
}

/// Row rank by forward elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut work: Vec<Vec<Rational>> = rows.to_vec();
    let width = work.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..work.len()).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(rank, pivot);
        let (head, tail) = work.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &prow[col];
            sub_scaled(row, &factor, prow);
        }
        rank += 1;
        if rank == work.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let space = RowSpace::new(rows);
    (space.echelon, space.pivots)
}

/// Basis of the right null space `{v : A v = 0}`, scaled to primitive
/// integer vectors.
pub fn integer_nullspace(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<i64>> {
    let space = RowSpace::new(rows);
    let mut basis = Vec::new();
    for free in (0..width).filter(|c| !space.pivots.contains(c)) {
        let mut v = vec![Rational::zero(); width];
        v[free] = Rational::one();
        for (row, &p) in space.echelon.iter().zip(&space.pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(primitive_integer_vector(&v));
    }
    basis
}

/// Scales a rational vector by the lcm of its denominators and divides out
/// the gcd of the result.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let gcd = if gcd.is_zero() { BigInt::one() } else { gcd };
    ints.iter()
        .map(|x| (x / &gcd).to_i64().expect("null-space entries fit in i64"))
        .collect()
}

/// Row space of a fixed, ordered list of source rows.
///
/// Rows are inserted in order; a row that is independent of the earlier ones
/// becomes a basis row. The echelon form is kept fully reduced, and each
/// echelon row records its expression as a combination of source rows, so a
/// member vector can be written back in terms of the original rows.
#[derive(Debug, Clone)]
pub struct RowSpace {
    width: usize,
    source_count: usize,
    echelon: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<Rational>>,
    basis_rows: Vec<usize>,
}

impl RowSpace {
    pub fn new(rows: &[Vec<Rational>]) -> Self {
        let width = rows.first().map_or(0, Vec::len);
        let mut space = Self {
            width,
            source_count: rows.len(),
            echelon: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            basis_rows: Vec::new(),
        };
        for (idx, row) in rows.iter().enumerate() {
            space.insert(idx, row);
        }
        space
    }

    fn insert(&mut self, idx: usize, row: &[Rational]) {
        let mut residual = row.to_vec();
        let mut combo = vec![Rational::zero(); self.source_count];
        combo[idx] = Rational::one();
        for ((erow, ecombo), &p) in self.echelon.iter().zip(&self.combos).zip(&self.pivots) {
            if residual[p].is_zero() {
                continue;
            }
            let f = residual[p].clone();
            sub_scaled(&mut residual, &f, erow);
            sub_scaled(&mut combo, &f, ecombo);
        }
        let Some(pivot) = residual.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let scale = residual[pivot].recip();
        for x in residual.iter_mut().chain(combo.iter_mut()) {
            *x *= &scale;
        }
        for (erow, ecombo) in self.echelon.iter_mut().zip(self.combos.iter_mut()) {
            if erow[pivot].is_zero() {
                continue;
            }
            let f = erow[pivot].clone();
            sub_scaled(erow, &f, &residual);
            sub_scaled(ecombo, &f, &combo);
        }
        // Keep rows sorted by pivot column.
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.echelon.insert(at, residual);
        self.combos.insert(at, combo);
        self.pivots.insert(at, pivot);
        self.basis_rows.push(idx);
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn echelon(&self) -> &[Vec<Rational>] {
        &self.echelon
    }

    /// Indices of the source rows that form the basis, in insertion order.
    pub fn basis_rows(&self) -> &[usize] {
        &self.basis_rows
    }

    /// Writes `target` as a combination of the source rows, if it lies in the
    /// row space. Only basis rows receive nonzero coefficients, so the
    /// combination is unique and deterministic.
    pub fn express(&self, target: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(target.len(), self.width, "target width mismatch");
        let mut residual = target.to_vec();
        let mut coeffs = vec![Rational::zero(); self.source_count];
        for ((erow, ecombo), &p) in self.echelon.iter().zip(&self.combos).zip(&self.pivots) {
            if residual[p].is_zero() {
                continue;
            }
            let f = residual[p].clone();
            sub_scaled(&mut residual, &f, erow);
            for (c, e) in coeffs.iter_mut().zip(ecombo) {
                if !e.is_zero() {
                    *c += &f * e;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, target: &[Rational]) -> bool {
        let mut residual = target.to_vec();
        for (erow, &p) in self.echelon.iter().zip(&self.pivots) {
            if residual[p].is_zero() {
                continue;
            }
            let f = residual[p].clone();
            sub_scaled(&mut residual, &f, erow);
        }
        residual.iter().all(Zero::is_zero)
    }

    /// The unique member of the row space that takes `values` on the pivot
    /// columns.
    pub fn member_from_pivots(&self, values: &[Rational]) -> Vec<Rational> {
        assert_eq!(values.len(), self.rank());
        let mut out = vec![Rational::zero(); self.width];
        for (v, erow) in values.iter().zip(&self.echelon) {
            if v.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(erow) {
                if !e.is_zero() {
                    *o += v * e;
                }
            }
        }
        out
    }
}
