//! Smith and Hermite normal forms, integer kernels and linear solving.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::matrix::{Integer, Matrix};
use super::scalar;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl Snf {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Integer> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).filter(|d| !d.is_zero()).collect()
    }
}

#[derive(Clone, Copy, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub v: bool,
    pub vinv: bool,
    /// Enforce the divisibility chain on the diagonal.
    pub chain: bool,
}

pub(crate) struct Diagonal {
    /// Diagonal entries `0..min(m, n)`, nonnegative; nonzero ones come first.
    pub diag: Vec<Integer>,
    pub rank: usize,
    pub u: Option<Matrix>,
    pub v: Option<Matrix>,
    pub vinv: Option<Matrix>,
}

struct Elim<T> {
    a: Vec<Vec<T>>,
    m: usize,
    n: usize,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
    vinv: Option<Vec<Vec<T>>>,
}

fn ident<T: scalar::Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

fn row_axpy<T: scalar::Scalar>(rows: &mut [Vec<T>], i: usize, j: usize, c: &T) -> Option<()> {
    debug_assert_ne!(i, j);
    let (dst, src) = if i < j {
        let (lo, hi) = rows.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d = d.add(&c.mul(s)?)?;
        }
    }
    Some(())
}

impl<T: scalar::Scalar> Elim<T> {
    fn new(a: Vec<Vec<T>>, m: usize, n: usize, track: Track) -> Self {
        Elim { a, m, n, u: track.u.then(|| ident(m)), v: track.v.then(|| ident(n)), vinv: track.vinv.then(|| ident(n)) }
    }

    /// row_i += c · row_j
    fn row_add(&mut self, i: usize, j: usize, c: &T) -> Option<()> {
        row_axpy(&mut self.a, i, j, c)?;
        if let Some(u) = &mut self.u {
            row_axpy(u, i, j, c)?;
        }
        Some(())
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn row_neg(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.neg()?;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = x.neg()?;
            }
        }
        Some(())
    }

    /// col_i += c · col_j
    fn col_add(&mut self, i: usize, j: usize, c: &T) -> Option<()> {
        for r in self.a.iter_mut() {
            if !r[j].is_zero() {
                r[i] = r[i].add(&c.mul(&r[j])?)?;
            }
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                if !r[j].is_zero() {
                    r[i] = r[i].add(&c.mul(&r[j])?)?;
                }
            }
        }
        if let Some(vi) = &mut self.vinv {
            // inverse elementary operation acts on rows: row_j -= c · row_i
            row_axpy(vi, j, i, &c.neg()?)?;
        }
        Some(())
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                r.swap(i, j);
            }
        }
        if let Some(vi) = &mut self.vinv {
            vi.swap(i, j);
        }
    }

    fn col_neg(&mut self, i: usize) -> Option<()> {
        for r in self.a.iter_mut() {
            r[i] = r[i].neg()?;
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                r[i] = r[i].neg()?;
            }
        }
        if let Some(vi) = &mut self.vinv {
            for x in vi[i].iter_mut() {
                *x = x.neg()?;
            }
        }
        Some(())
    }

    fn min_in_submatrix(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !x.abs_lt(&self.a[bi][bj]) => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn min_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let cands = (t..self.m).map(|i| (i, t)).chain((t + 1..self.n).map(|j| (t, j)));
        for (i, j) in cands {
            let x = &self.a[i][j];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if !x.abs_lt(&self.a[bi][bj]) => {}
                _ => best = Some((i, j)),
            }
        }
        best
    }

    fn diagonalize(&mut self, chain: bool) -> Option<usize> {
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.min_in_submatrix(t) else {
                break;
            };
            if pi != t {
                self.row_swap(pi, t);
            }
            if pj != t {
                self.col_swap(pj, t);
            }
            loop {
                let mut dirty = false;
                for i in t + 1..self.m {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].quot(&self.a[t][t])?;
                        self.row_add(i, t, &q.neg()?)?;
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.n {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].quot(&self.a[t][t])?;
                        self.col_add(j, t, &q.neg()?)?;
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    let (pi, pj) = self.min_in_cross(t)?;
                    if pi != t {
                        self.row_swap(pi, t);
                    }
                    if pj != t {
                        self.col_swap(pj, t);
                    }
                    continue;
                }
                if chain {
                    let p = self.a[t][t].clone();
                    let bad = (t + 1..self.m).find(|&i| (t + 1..self.n).any(|j| !p.divides(&self.a[i][j])));
                    if let Some(i) = bad {
                        self.row_add(t, i, &T::one())?;
                        continue;
                    }
                }
                break;
            }
            if self.a[t][t].is_negative() {
                if self.u.is_some() || self.v.is_none() {
                    self.row_neg(t)?;
                } else {
                    self.col_neg(t)?;
                }
            }
            t += 1;
        }
        Some(t)
    }
}

fn run<T: scalar::Scalar>(a: &Matrix, track: Track) -> Option<Diagonal> {
    let (m, n) = (a.rows(), a.cols());
    let mut e = Elim::new(a.to_scalar::<T>()?, m, n, track);
    let rank = e.diagonalize(track.chain)?;
    let diag = (0..m.min(n)).map(|i| e.a[i][i].to_big()).collect();
    Some(Diagonal {
        diag,
        rank,
        u: e.u.map(|u| Matrix::from_scalar(&u, m)),
        v: e.v.map(|v| Matrix::from_scalar(&v, n)),
        vinv: e.vinv.map(|v| Matrix::from_scalar(&v, n)),
    })
}

pub(crate) fn diagonalize(a: &Matrix, track: Track) -> Diagonal {
    run::<i64>(a, track).or_else(|| run::<Integer>(a, track)).expect("big-integer elimination cannot overflow")
}

/// Smith normal form with both transforms.
pub fn smith_normal_form(a: &Matrix) -> Snf {
    let dg = diagonalize(a, Track { u: true, v: true, vinv: false, chain: true });
    let mut d = Matrix::zeros(a.rows(), a.cols());
    for (i, x) in dg.diag.iter().enumerate() {
        d.set(i, i, x.clone());
    }
    Snf { u: dg.u.unwrap(), d, v: dg.v.unwrap() }
}

/// Nonzero invariant factors of `a` (divisibility chain, all positive).
pub fn invariant_factors(a: &Matrix) -> Vec<Integer> {
    let dg = diagonalize(a, Track { chain: true, ..Track::default() });
    dg.diag.into_iter().take(dg.rank).collect()
}

fn floor_div<T: scalar::Scalar>(a: &T, b: &T) -> Option<T> {
    let q = a.quot(b)?;
    let r = a.sub(&q.mul(b)?)?;
    if !r.is_zero() && (r.is_negative() != b.is_negative()) {
        q.sub(&T::one())
    } else {
        Some(q)
    }
}

fn hermite_run<T: scalar::Scalar>(a: &Matrix) -> Option<Vec<Vec<T>>> {
    let mut rows = a.to_scalar::<T>()?;
    let n = a.cols();
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if !rows[i][c].abs_lt(&rows[b][c]) => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            rows.swap(b, r);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = rows[i][c].quot(&rows[r][c])?;
                    row_axpy(&mut rows, i, r, &q.neg()?)?;
                    clean &= rows[i][c].is_zero();
                }
            }
            if clean {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = x.neg()?;
                }
            }
            for i in 0..r {
                if !rows[i][c].is_zero() {
                    let q = floor_div(&rows[i][c], &rows[r][c])?;
                    row_axpy(&mut rows, i, r, &q.neg()?)?;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    Some(rows)
}

/// Row-style Hermite normal form: the nonzero rows spanning the same lattice
/// as the rows of `a`, in echelon form with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`. Unique for a given row lattice.
pub fn hermite_rows(a: &Matrix) -> Matrix {
    let n = a.cols();
    match hermite_run::<i64>(a) {
        Some(rows) => Matrix::from_scalar(&rows, n),
        None => {
            let rows = hermite_run::<Integer>(a).expect("big-integer elimination cannot overflow");
            Matrix::from_scalar(&rows, n)
        }
    }
}

/// Basis (as columns) of `{x ∈ Zⁿ : A·x = 0}`.
pub fn integer_kernel(a: &Matrix) -> Vec<Vec<Integer>> {
    let moduli = vec![Integer::zero(); a.rows()];
    kernel_mod(a, &moduli)
}

/// Basis (as columns) of `{x ∈ Zⁿ : (A·x)ᵢ ≡ 0 mod moduliᵢ}`; a modulus of
/// zero imposes equality, a modulus of one imposes nothing.
pub fn kernel_mod(a: &Matrix, moduli: &[Integer]) -> Vec<Vec<Integer>> {
    assert_eq!(a.rows(), moduli.len());
    let n = a.cols();
    let exact: Vec<usize> = (0..a.rows()).filter(|&i| moduli[i].is_zero()).collect();
    let torsion: Vec<usize> = (0..a.rows())
        .filter(|&i| !moduli[i].is_zero() && !moduli[i].is_one())
        .filter(|&i| a.row(i).iter().any(|x| !x.is_zero()))
        .collect();
    // exact part
    let mut basis = if exact.is_empty() {
        Matrix::identity(n)
    } else {
        let e = a.select_rows(&exact);
        let dg = diagonalize(&e, Track { v: true, ..Track::default() });
        let v = dg.v.unwrap();
        v.select_columns(&(dg.rank..n).collect::<Vec<_>>())
    };
    if torsion.is_empty() || basis.cols() == 0 {
        return basis.columns();
    }
    let lcm = torsion.iter().fold(Integer::one(), |acc, &i| acc.lcm(&moduli[i].abs()));
    let mut scaled = a.select_rows(&torsion);
    for (k, &i) in torsion.iter().enumerate() {
        let s = &lcm / moduli[i].abs();
        for j in 0..n {
            let x = scaled.get(k, j) * &s;
            scaled.set(k, j, x);
        }
    }
    let b = scaled.mul(&basis);
    let dg = diagonalize(&b, Track { v: true, ..Track::default() });
    let v = dg.v.unwrap();
    let k = basis.cols();
    let mut scale = Matrix::identity(k);
    for i in 0..dg.rank {
        let g = dg.diag[i].gcd(&lcm);
        scale.set(i, i, &lcm / g);
    }
    basis = basis.mul(&v).mul(&scale);
    basis.columns()
}

/// Solves `A·x = b` over the integers.
///
/// The returned solution is the canonical one obtained by reducing the HNF
/// parametrisation of the solution set, i.e. `x₀ + Σ tᵢ kᵢ` with the kernel
/// component removed via the kernel's Hermite basis. Coordinates are read
/// from the last one backwards, so `2x + 3y = 1` gives `(−1, 1)`.
pub fn solve_integer(a: &Matrix, b: &[Integer]) -> Option<Vec<Integer>> {
    assert_eq!(a.rows(), b.len());
    let (m, n) = (a.rows(), a.cols());
    let dg = diagonalize(a, Track { u: true, v: true, vinv: false, chain: false });
    let u = dg.u.unwrap();
    let v = dg.v.unwrap();
    let c = u.mul_vec(b);
    let mut y = vec![Integer::zero(); n];
    for i in 0..m {
        if i < dg.rank {
            let (q, r) = c[i].div_rem(&dg.diag[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    let x0 = v.mul_vec(&y);
    // canonical representative modulo the kernel lattice
    let kernel: Vec<Vec<Integer>> = (dg.rank..n).map(|j| v.column(j)).collect();
    if kernel.is_empty() {
        return Some(x0);
    }
    let rev = |v: &[Integer]| v.iter().rev().cloned().collect::<Vec<_>>();
    let kernel: Vec<Vec<Integer>> = kernel.iter().map(|k| rev(k)).collect();
    let kh = hermite_rows(&Matrix::from_rows(kernel, n));
    Some(rev(&reduce_by_echelon(&kh, rev(&x0))))
}

/// Reduces `x` modulo the row lattice of an echelon matrix so that the entry
/// in each pivot column lands in `[0, pivot)`.
pub(crate) fn reduce_by_echelon(h: &Matrix, mut x: Vec<Integer>) -> Vec<Integer> {
    for i in 0..h.rows() {
        let Some(p) = (0..h.cols()).find(|&j| !h.get(i, j).is_zero()) else {
            continue;
        };
        let q = x[p].div_floor(h.get(i, p));
        if !q.is_zero() {
            for j in 0..h.cols() {
                let d = h.get(i, j) * &q;
                x[j] -= d;
            }
        }
    }
    x
}
