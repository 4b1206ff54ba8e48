//! Exact LDLᵀ decision procedure for positive semidefiniteness over the rationals.
//!
//! Elimination runs fraction-free: the input is scaled by the least common multiple of
//! its denominators and the symmetric Schur complements are carried as integer
//! determinants (Bareiss' identity `W' = (p·W − w wᵀ)/p_prev` divides exactly). Only at
//! the end are `L` and `D` turned into canonical fractions, so no floating-point value
//! ever takes part in a proof.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{Rational, RationalMatrix};
use crate::error::Result;

/// Exact factorization `PᵀAP = L D Lᵀ` with `D ⪰ 0`.
#[derive(Clone, Debug)]
pub struct PsdProof {
    /// `permutation[k]` is the original index placed at position `k`.
    pub permutation: Vec<usize>,
    /// Unit lower-triangular factor in permuted coordinates.
    pub l: RationalMatrix,
    /// Nonnegative diagonal factor in permuted coordinates.
    pub d: Vec<Rational>,
}

impl PsdProof {
    /// Number of strictly positive pivots, i.e. the exact rank of `A`.
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| x.is_positive()).count()
    }

    /// Smallest diagonal entry of `D`.
    pub fn d_min(&self) -> Rational {
        self.d.iter().min().cloned().unwrap_or_else(Rational::zero)
    }

    /// Smallest strictly positive diagonal entry of `D`, if any.
    pub fn d_min_positive(&self) -> Option<Rational> {
        self.d.iter().filter(|x| x.is_positive()).min().cloned()
    }

    /// Exact replay: checks `D ≥ 0`, `L` unit lower triangular and `PᵀAP = LDLᵀ`.
    pub fn verify(&self, a: &RationalMatrix) -> bool {
        let n = self.d.len();
        if a.rows() != n || a.cols() != n || self.l.rows() != n || self.permutation.len() != n {
            return false;
        }
        if self.d.iter().any(|x| x.is_negative()) {
            return false;
        }
        for i in 0..n {
            if !self.l[(i, i)].is_one() || (i + 1..n).any(|j| !self.l[(i, j)].is_zero()) {
                return false;
            }
        }
        let p = &self.permutation;
        for i in 0..n {
            for j in 0..=i {
                let mut s = Rational::zero();
                for k in 0..=j {
                    if self.d[k].is_zero() || self.l[(i, k)].is_zero() || self.l[(j, k)].is_zero() {
                        continue;
                    }
                    s += &self.l[(i, k)] * &self.d[k] * &self.l[(j, k)];
                }
                if s != a[(p[i], p[j])] {
                    return false;
                }
            }
        }
        true
    }
}

/// A vector `w` with `wᵀAw < 0`, together with that exact value.
#[derive(Clone, Debug)]
pub struct NotPsdWitness {
    pub w: Vec<Rational>,
    pub value: Rational,
}

/// Result of the decision procedure.
#[derive(Clone, Debug)]
pub enum LdlOutcome {
    Psd(PsdProof),
    NotPsd(NotPsdWitness),
}

impl LdlOutcome {
    pub fn is_psd(&self) -> bool {
        matches!(self, LdlOutcome::Psd(_))
    }

    pub fn proof(&self) -> Option<&PsdProof> {
        match self {
            LdlOutcome::Psd(p) => Some(p),
            LdlOutcome::NotPsd(_) => None,
        }
    }
}

/// Decide `A ⪰ 0` exactly.
///
/// Pivoting brings the largest remaining Schur-complement diagonal to the front. A negative
/// diagonal, or a zero diagonal whose row is not zero, ends the factorization with a
/// [`NotPsdWitness`]; exhausting all positive pivots with a zero remainder yields a
/// [`PsdProof`]. When a witness of the form `e_i` or `e_i ± e_j` exists it is preferred;
/// otherwise the failing Schur-complement direction is lifted back to the original
/// coordinates.
pub fn exact_psd_ldl(a: &RationalMatrix) -> Result<LdlOutcome> {
    exact_psd_ldl_with_progress(a, |_, _| {})
}

/// Simplest witness of the form `e_i`, `e_i − e_j` or `e_i + e_j`, if one exists.
fn simple_witness(a: &RationalMatrix) -> Option<NotPsdWitness> {
    let n = a.rows();
    let unit = |entries: &[(usize, i64)]| {
        let mut w = vec![Rational::zero(); n];
        for &(i, s) in entries {
            w[i] = Rational::from_integer(BigInt::from(s));
        }
        w
    };
    if let Some(i) = (0..n).find(|&i| a[(i, i)].is_negative()) {
        return Some(NotPsdWitness { w: unit(&[(i, 1)]), value: a[(i, i)].clone() });
    }
    for i in 0..n {
        for j in i + 1..n {
            let base = &a[(i, i)] + &a[(j, j)];
            let cross = &a[(i, j)] + &a[(j, i)];
            for s in [-1i64, 1] {
                let value = if s < 0 { &base - &cross } else { &base + &cross };
                if value.is_negative() {
                    return Some(NotPsdWitness { w: unit(&[(i, 1), (j, s)]), value });
                }
            }
        }
    }
    None
}

/// [`exact_psd_ldl`] reporting `(pivots done, dimension)` every 50 pivots.
pub fn exact_psd_ldl_with_progress(
    a: &RationalMatrix,
    mut progress: impl FnMut(usize, usize),
) -> Result<LdlOutcome> {
    a.require_symmetric()?;
    let n = a.rows();
    let lcd = a.denominator_lcm();
    let lcd_q = Rational::from_integer(lcd.clone());

    // Upper-triangular integer storage of lcd·A; symmetric access through `idx`.
    let idx = |i: usize, j: usize| if i <= j { i * n + j } else { j * n + i };
    let mut w: Vec<BigInt> = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let q = &a[(i, j)];
            if !q.is_zero() {
                w[i * n + j] = q.numer() * (&lcd / q.denom());
            }
        }
    }

    let (mut active, zero_rows): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| (0..n).any(|j| !w[idx(i, j)].is_zero()));

    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut pivot_prev: Vec<BigInt> = Vec::new();
    let mut pivot_val: Vec<BigInt> = Vec::new();
    let mut columns: Vec<Vec<(usize, BigInt)>> = Vec::new();

    let fail = |w: NotPsdWitness| Ok(LdlOutcome::NotPsd(simple_witness(a).unwrap_or(w)));
    loop {
        if active.is_empty() {
            break;
        }
        // Negative diagonal of the current Schur complement.
        if let Some(&i) = active.iter().find(|&&i| w[idx(i, i)].is_negative()) {
            let witness =
                schur_witness(a, &lcd_q, &pivots, &pivot_prev, &pivot_val, &columns, &[(i, Rational::one())])?;
            return fail(witness);
        }
        // Zero diagonal with a nonzero row: 2×2 indefinite principal minor [[0, b], [b, c]].
        for &i in &active {
            if !w[idx(i, i)].is_zero() {
                continue;
            }
            if let Some(&j) = active.iter().find(|&&j| j != i && !w[idx(i, j)].is_zero()) {
                let scale = Rational::new(BigInt::one(), &prev * &lcd);
                let b = Rational::from_integer(w[idx(i, j)].clone()) * &scale;
                let c = Rational::from_integer(w[idx(j, j)].clone()) * &scale;
                let xi = -(c + Rational::one()) / (Rational::from_integer(BigInt::from(2)) * b);
                let witness = schur_witness(
                    a,
                    &lcd_q,
                    &pivots,
                    &pivot_prev,
                    &pivot_val,
                    &columns,
                    &[(i, xi), (j, Rational::one())],
                )?;
                return fail(witness);
            }
        }
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|(_, &x), (_, &y)| w[idx(x, x)].cmp(&w[idx(y, y)]).then(y.cmp(&x)))
            .expect("nonempty");
        if w[idx(p, p)].is_zero() {
            // Every remaining row is zero: the Schur complement vanishes.
            break;
        }
        active.remove(pos);
        let wpp = w[idx(p, p)].clone();
        let col: Vec<(usize, BigInt)> =
            active.iter().filter(|&&i| !w[idx(i, p)].is_zero()).map(|&i| (i, w[idx(i, p)].clone())).collect();

        // Bareiss update of the remaining symmetric block.
        let mut wip = vec![BigInt::zero(); active.len()];
        for (k, &i) in active.iter().enumerate() {
            wip[k] = w[idx(i, p)].clone();
        }
        for a_pos in 0..active.len() {
            let i = active[a_pos];
            for b_pos in a_pos..active.len() {
                let j = active[b_pos];
                let cell = idx(i, j);
                let cross = !wip[a_pos].is_zero() && !wip[b_pos].is_zero();
                if w[cell].is_zero() && !cross {
                    continue;
                }
                let mut v = &wpp * &w[cell];
                if cross {
                    v -= &wip[a_pos] * &wip[b_pos];
                }
                if !prev.is_one() {
                    v /= &prev;
                }
                w[cell] = v;
            }
        }
        pivots.push(p);
        pivot_prev.push(prev.clone());
        pivot_val.push(wpp.clone());
        columns.push(col);
        prev = wpp;
        if pivots.len() % 50 == 0 {
            progress(pivots.len(), n);
        }
    }

    // Assemble P, L, D.
    let mut permutation = pivots.clone();
    permutation.extend(active.iter().copied());
    permutation.extend(zero_rows.iter().copied());
    let mut position = vec![0usize; n];
    for (k, &orig) in permutation.iter().enumerate() {
        position[orig] = k;
    }
    let mut l = RationalMatrix::identity(n);
    let mut d = vec![Rational::zero(); n];
    for k in 0..pivots.len() {
        d[k] = Rational::new(pivot_val[k].clone(), &pivot_prev[k] * &lcd);
        for (i, wik) in &columns[k] {
            l[(position[*i], k)] = Rational::new(wik.clone(), pivot_val[k].clone());
        }
    }
    Ok(LdlOutcome::Psd(PsdProof { permutation, l, d }))
}

/// Lift a Schur-complement vector `x` (sparse, on non-pivot indices) to `w` with
/// `wᵀAw = xᵀSx`, by solving `A₁₁ y = A₁₂ x` on the pivot block and setting `w = (−y, x)`.
fn schur_witness(
    a: &RationalMatrix,
    lcd: &Rational,
    pivots: &[usize],
    pivot_prev: &[BigInt],
    pivot_val: &[BigInt],
    columns: &[Vec<(usize, BigInt)>],
    x: &[(usize, Rational)],
) -> Result<NotPsdWitness> {
    let n = a.rows();
    let m = pivots.len();
    let mut slot = vec![usize::MAX; n];
    for (k, &p) in pivots.iter().enumerate() {
        slot[p] = k;
    }
    // Dense L₁₁ over the pivot block (only needed on failure).
    let mut l11 = vec![vec![Rational::zero(); m]; m];
    for k in 0..m {
        l11[k][k] = Rational::one();
        for (i, wik) in &columns[k] {
            if slot[*i] != usize::MAX {
                l11[slot[*i]][k] = Rational::new(wik.clone(), pivot_val[k].clone());
            }
        }
    }
    let d: Vec<Rational> =
        (0..m).map(|k| Rational::new(pivot_val[k].clone(), &pivot_prev[k] * lcd.numer())).collect();
    // c = A₁₂ x
    let mut c: Vec<Rational> = pivots
        .iter()
        .map(|&p| x.iter().fold(Rational::zero(), |acc, (j, xj)| acc + &a[(p, *j)] * xj))
        .collect();
    // Forward substitution L z = c
    for i in 0..m {
        for k in 0..i {
            if !l11[i][k].is_zero() && !c[k].is_zero() {
                let t = &l11[i][k] * &c[k];
                c[i] -= t;
            }
        }
    }
    for (ci, di) in c.iter_mut().zip(&d) {
        *ci = &*ci / di;
    }
    // Back substitution Lᵀ y = z
    for i in (0..m).rev() {
        for k in i + 1..m {
            if !l11[k][i].is_zero() && !c[k].is_zero() {
                let t = &l11[k][i] * &c[k];
                c[i] -= t;
            }
        }
    }
    let mut w = vec![Rational::zero(); n];
    for (k, &p) in pivots.iter().enumerate() {
        w[p] = -c[k].clone();
    }
    for (j, xj) in x {
        w[*j] = xj.clone();
    }
    let value = a.quadratic_form(&w)?;
    Ok(NotPsdWitness { w, value })
}
