//! Finite fields `F_{p^e}` (e ≤ 4) and dense exact linear algebra over them.
//!
//! An element of `F_{p^e}` is stored as its code `c_0 + c_1 p + … + c_{e-1} p^{e-1}`,
//! where `c_0 + c_1 t + …` is its residue modulo the defining polynomial. Codes below
//! `p` are exactly the prime subfield, so a prime-field value is literally the same
//! `Fq` in every extension.

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};

/// Largest field order accepted by [`Field::new`]; keeps log tables small.
pub const MAX_FIELD_ORDER: u32 = 1 << 20;
/// Largest field enumerated by [`Field::elements`].
pub const MAX_ENUMERATION: u32 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type FieldRef = Arc<Field>;

/// `F_{p^e}` with its defining modulus and multiplication tables.
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients from the constant term up (length e+1); empty for e = 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<FieldRef> {
        Self::new(p, 1)
    }

    /// `F_{p^e}` defined by the lexicographically smallest monic irreducible polynomial,
    /// comparing coefficient tuples `(c_0, c_1, …, c_{e-1})` from the constant term up.
    pub fn new(p: u32, e: u32) -> Result<FieldRef> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(1..=4).contains(&e) {
            return Err(Error::ExtensionDegree(e));
        }
        let q128 = (p as u128).pow(e);
        if q128 > MAX_FIELD_ORDER as u128 {
            return Err(Error::TooLarge {
                what: "field order",
                count: q128,
                limit: MAX_FIELD_ORDER as u128,
            });
        }
        let q = q128 as u32;
        let modulus = if e == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, e as usize)
        };
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            inv: vec![0; q as usize],
        };
        if e > 1 {
            field.build_log_tables();
            for a in 1..q {
                let la = field.log[a as usize];
                field.inv[a as usize] = field.exp[((q - 1 - la) % (q - 1)) as usize];
            }
        } else {
            for a in 1..p {
                field.inv[a as usize] = pow_mod(a as u64, (p - 2) as u64, p as u64) as u32;
            }
        }
        Ok(Arc::new(field))
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let prime_factors: Vec<u32> = (2..=order).filter(|&d| order.is_multiple_of(d) && is_prime(d)).collect();
        let g = (2..q)
            .find(|&g| {
                prime_factors
                    .iter()
                    .all(|&l| self.slow_pow(g, (order / l) as u64) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");
        self.exp = vec![0; order as usize];
        self.log = vec![0; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            self.exp[k as usize] = x;
            self.log[x as usize] = k;
            x = self.slow_mul(x, g);
        }
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.digits(Fq(a));
        let pb = self.digits(Fq(b));
        let mut prod = poly_mul(&pa, &pb, self.p);
        poly_rem(&mut prod, &self.modulus, self.p);
        self.from_digits(&prod).0
    }

    fn slow_pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients from the constant term up, including the leading 1.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.e == 1 {
            None
        } else {
            Some(&self.modulus)
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Human-readable descriptor, e.g. `F_9 = F_3[t]/(t^2+1)`.
    pub fn describe(&self) -> String {
        if self.e == 1 {
            return format!("F_{}", self.p);
        }
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if mono.is_empty() {
                terms.push(c.to_string());
            } else if c == 1 {
                terms.push(mono);
            } else {
                terms.push(format!("{c}{mono}"));
            }
        }
        format!("F_{} = F_{}[t]/({})", self.q, self.p, terms.join("+"))
    }

    pub fn descriptor_json(&self) -> Value {
        match self.modulus() {
            None => serde_json::json!({"p": self.p, "e": 1}),
            Some(m) => serde_json::json!({"p": self.p, "e": self.e, "modulus": m}),
        }
    }

    pub fn digits(&self, a: Fq) -> Vec<u32> {
        let mut x = a.0;
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Fq {
        let mut code = 0u32;
        for &c in d.iter().rev() {
            code = code * self.p + c % self.p;
        }
        Fq(code)
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.e == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut m, mut r) = (a.0, b.0, 1u32, 0u32);
        for _ in 0..self.e {
            let s = x % self.p + y % self.p;
            r += (if s >= self.p { s - self.p } else { s }) * m;
            x /= self.p;
            y /= self.p;
            m *= self.p;
        }
        Fq(r)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.e == 1 {
            return Fq(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut m, mut r) = (a.0, 1u32, 0u32);
        for _ in 0..self.e {
            let d = x % self.p;
            r += (if d == 0 { 0 } else { self.p - d }) * m;
            x /= self.p;
            m *= self.p;
        }
        Fq(r)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.e == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        let n = self.q - 1;
        Fq(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            None
        } else {
            Some(Fq(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, mut n: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// `dst += c·src`, the inner loop of elimination.
    #[inline]
    pub fn axpy(&self, dst: &mut [Fq], src: &[Fq], c: Fq) {
        if c.is_zero() {
            return;
        }
        if self.e == 1 {
            let p = self.p as u64;
            let c = c.0 as u64;
            for (d, s) in dst.iter_mut().zip(src) {
                if s.0 != 0 {
                    d.0 = ((d.0 as u64 + c * s.0 as u64) % p) as u32;
                }
            }
        } else {
            for (d, s) in dst.iter_mut().zip(src) {
                if s.0 != 0 {
                    *d = self.add(*d, self.mul(c, *s));
                }
            }
        }
    }

    /// All elements ordered by code, so the prime subfield comes first.
    pub fn elements(&self) -> Result<Vec<Fq>> {
        if self.q > MAX_ENUMERATION {
            return Err(Error::TooLarge {
                what: "field enumeration",
                count: self.q as u128,
                limit: MAX_ENUMERATION as u128,
            });
        }
        Ok((0..self.q).map(Fq).collect())
    }

    pub fn to_json(&self, a: Fq) -> Value {
        if self.e == 1 {
            Value::from(a.0)
        } else {
            Value::from(self.digits(a))
        }
    }

    /// Accepts an integer (reduced mod p) or a coefficient array of length ≤ e.
    pub fn from_json(&self, v: &Value) -> Result<Fq> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.from_int(x))
                .ok_or_else(|| Error::Parse(format!("field entry {n} is not an integer"))),
            Value::Array(a) => {
                if a.len() > self.e as usize {
                    return Err(Error::Parse(format!(
                        "coefficient array of length {} exceeds extension degree {}",
                        a.len(),
                        self.e
                    )));
                }
                let mut digits = Vec::with_capacity(a.len());
                for c in a {
                    let x = c
                        .as_i64()
                        .ok_or_else(|| Error::Parse(format!("coefficient {c} is not an integer")))?;
                    digits.push(x.rem_euclid(self.p as i64) as u32);
                }
                Ok(self.from_digits(&digits))
            }
            other => Err(Error::Parse(format!("cannot read field element from {other}"))),
        }
    }

    pub fn format(&self, a: Fq) -> String {
        if self.e == 1 {
            return a.0.to_string();
        }
        let d = self.digits(a);
        format!("[{}]", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn pow_mod(mut b: u64, mut n: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        n >>= 1;
    }
    acc
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Reduces `a` modulo the monic polynomial `m` in place, leaving `deg m` coefficients.
fn poly_rem(a: &mut Vec<u32>, m: &[u32], p: u32) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap_or(0);
        if lead != 0 {
            let shift = a.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                a[shift + i] = (a[shift + i] + (p - lead) * c) % p;
            }
        }
    }
    a.resize(dm, 0);
}

fn divides(factor: &[u32], f: &[u32], p: u32) -> bool {
    let mut r = f.to_vec();
    poly_rem(&mut r, factor, p);
    r.iter().all(|&c| c == 0)
}

/// Monic polynomials of degree d, coefficient tuples in lexicographic order.
fn monic_polys(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d as u32);
    (0..count).map(move |mut k| {
        let mut c = vec![0u32; d + 1];
        for i in (0..d).rev() {
            c[i] = (k % p as u64) as u32;
            k /= p as u64;
        }
        c[d] = 1;
        c
    })
}

pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    (1..=n / 2).all(|d| monic_polys(p, d).all(|g| !divides(&g, f, p)))
}

fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    monic_polys(p, e)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Dense row-major matrix over a [`Field`] supplied by the caller.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Fq::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fq>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    /// Matrix whose columns are the given vectors (each of length `n`).
    pub fn from_columns(n: usize, cols: &[Vec<Fq>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fq) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Result<Self> {
        let v: Vec<Vec<Fq>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        Self::from_rows(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Fq] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fq> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Fq] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn map(&self, f: impl Fn(Fq) -> Fq) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn add(&self, field: &Field, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, field: &Field, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn neg(&self, field: &Field) -> Self {
        self.map(|x| field.neg(x))
    }

    pub fn scale(&self, field: &Field, c: Fq) -> Self {
        self.map(|x| field.mul(c, x))
    }

    pub fn mul(&self, field: &Field, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let (src, dst) = (other.row(k), i * other.cols);
                field.axpy(&mut out.data[dst..dst + other.cols], src, a);
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &Field, v: &[Fq]) -> Vec<Fq> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fq::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    pub fn pow(&self, field: &Field, n: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(field, self);
        }
        acc
    }

    /// Kronecker product: entry ((i,k),(j,l)) = a_ij·b_kl, pairs in lexicographic order.
    pub fn kron(&self, field: &Field, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            let (i, k) = (r / other.rows, r % other.rows);
            let (j, l) = (c / other.cols, c % other.cols);
            field.mul(self.get(i, j), other.get(k, l))
        })
    }

    pub fn commutator(&self, field: &Field, other: &Self) -> Self {
        self.mul(field, other).sub(field, &other.mul(field, self))
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(blocks: &[Matrix]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

/// Result of Gauss–Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rank: usize,
    /// Pivot column of each nonzero row of `rref`.
    pub pivots: Vec<usize>,
    /// Reduced row echelon form, nonzero rows only.
    pub rref: Matrix,
    /// Right kernel basis: one vector per free column `f`, with 1 at `f` and zeros at other free columns.
    pub kernel: Vec<Vec<Fq>>,
}

pub fn row_reduce(field: &Field, a: &Matrix) -> Echelon {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let x = m.get(r, j);
            m.set(r, j, field.mul(inv, x));
        }
        let pivot_row: Vec<Fq> = m.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c);
            if !f.is_zero() {
                let nf = field.neg(f);
                let start = i * cols + c;
                field.axpy(&mut m.data[start..start + cols - c], &pivot_row, nf);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = r;
    m.data.truncate(rank * cols);
    m.rows = rank;
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let kernel = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Fq::ZERO; cols];
            v[f] = Fq::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(m.get(i, f));
            }
            v
        })
        .collect();
    Echelon {
        rank,
        pivots,
        rref: m,
        kernel,
    }
}

/// Rank without building the kernel.
pub fn rank(field: &Field, a: &Matrix) -> usize {
    if a.rows() > a.cols() {
        return row_reduce(field, &a.transpose()).rank;
    }
    row_reduce(field, a).rank
}

/// Some solution of `a·x = b`, or `None` if inconsistent.
pub fn solve(field: &Field, a: &Matrix, b: &[Fq]) -> Option<Vec<Fq>> {
    let mut aug = Matrix::zeros(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        aug.row_mut(i)[..a.cols()].copy_from_slice(a.row(i));
        aug.set(i, a.cols(), b[i]);
    }
    let ech = row_reduce(field, &aug);
    if ech.pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![Fq::ZERO; a.cols()];
    for (i, &pc) in ech.pivots.iter().enumerate() {
        x[pc] = ech.rref.get(i, a.cols());
    }
    Some(x)
}

pub fn inverse(field: &Field, a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    if !a.is_square() {
        return None;
    }
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        aug.row_mut(i)[..n].copy_from_slice(a.row(i));
        aug.set(i, n + i, Fq::ONE);
    }
    let ech = row_reduce(field, &aug);
    if ech.rank < n || ech.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| ech.rref.get(i, n + j)))
}

/// A subspace of `F^n` held as the reduced echelon basis of its span.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<Fq>]) -> Self {
        let m = if vectors.is_empty() {
            Matrix::zeros(0, ambient)
        } else {
            Matrix::from_rows(vectors).expect("vectors of equal length")
        };
        let ech = row_reduce(field, &m);
        Subspace {
            ambient,
            basis: ech.rref,
            pivots: ech.pivots,
        }
    }

    pub fn kernel_of(field: &Field, a: &Matrix) -> Self {
        Self::span(field, a.cols(), &row_reduce(field, a).kernel)
    }

    /// Column space of `a`.
    pub fn image_of(field: &Field, a: &Matrix) -> Self {
        Self::span(field, a.rows(), &a.transpose().to_rows())
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> Vec<Vec<Fq>> {
        self.basis.to_rows()
    }

    pub fn contains(&self, field: &Field, v: &[Fq]) -> bool {
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if !c.is_zero() {
                field.axpy(&mut w, self.basis.row(i), field.neg(c));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, field: &Field, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(field, other.basis.row(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_are_lexicographically_smallest() {
        assert!(Field::new(3, 1).unwrap().modulus().is_none());
        assert_eq!(Field::new(3, 2).unwrap().modulus().unwrap(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().modulus().unwrap(), &[1, 1, 1]);
        // t³+1 has the root 1, so (1,0,1) is the first irreducible tuple.
        assert_eq!(Field::new(2, 3).unwrap().modulus().unwrap(), &[1, 0, 1, 1]);
    }

    #[test]
    fn quadratic_modulus_matches_exhaustive_root_search() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let f = Field::new(p, 2).unwrap();
            let m = f.modulus().unwrap().to_vec();
            // A quadratic is irreducible iff it has no root; the chosen one is the first such.
            let has_root = |c0: u32, c1: u32| (0..p).any(|x| (x * x + c1 * x + c0).is_multiple_of(p));
            let first = (0..p)
                .flat_map(|c0| (0..p).map(move |c1| (c0, c1)))
                .find(|&(c0, c1)| !has_root(c0, c1))
                .unwrap();
            assert_eq!((m[0], m[1]), first, "p = {p}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(3, 5), Err(Error::ExtensionDegree(5))));
        assert!(matches!(Field::new(3, 0), Err(Error::ExtensionDegree(0))));
    }

    #[test]
    fn enumeration_order() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.elements().unwrap(), vec![Fq(0), Fq(1)]);
        let f9 = Field::new(3, 2).unwrap();
        let els = f9.elements().unwrap();
        assert_eq!(els.len(), 9);
        assert_eq!(&els[..3], &[Fq(0), Fq(1), Fq(2)]);
    }

    #[test]
    fn extension_arithmetic_is_consistent() {
        let f = Field::new(3, 2).unwrap();
        // t·t = −1 in F_3[t]/(t²+1); t has code 3.
        let t = Fq(3);
        assert_eq!(f.mul(t, t), f.from_int(-1));
        for a in 1..9 {
            let a = Fq(a);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
            assert_eq!(f.pow(a, 8), Fq::ONE);
        }
    }

    #[test]
    fn small_row_reductions() {
        let f3 = Field::prime(3).unwrap();
        let z = Matrix::zeros(3, 3);
        let e = row_reduce(&f3, &z);
        assert_eq!((e.rank, e.kernel.len()), (0, 3));

        let f5 = Field::prime(5).unwrap();
        let n = Matrix::from_ints(&f5, &[&[0, 1], &[0, 0]]).unwrap();
        let e = row_reduce(&f5, &n);
        assert_eq!(e.rank, 1);
        assert_eq!(e.kernel, vec![vec![Fq(1), Fq(0)]]);

        let empty = Matrix::zeros(0, 0);
        assert_eq!(row_reduce(&f5, &empty).rank, 0);
    }

    #[test]
    fn solve_and_inverse() {
        let f = Field::prime(7).unwrap();
        let a = Matrix::from_ints(&f, &[&[1, 2], &[3, 4]]).unwrap();
        let ai = inverse(&f, &a).unwrap();
        assert_eq!(a.mul(&f, &ai), Matrix::identity(2));
        let b = vec![Fq(1), Fq(0)];
        let x = solve(&f, &a, &b).unwrap();
        assert_eq!(a.mul_vec(&f, &x), b);
        let sing = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]).unwrap();
        assert!(inverse(&f, &sing).is_none());
        assert!(solve(&f, &sing, &[Fq(1), Fq(0)]).is_none());
    }

    #[test]
    fn json_round_trip() {
        let f = Field::new(5, 2).unwrap();
        for a in f.elements().unwrap() {
            assert_eq!(f.from_json(&f.to_json(a)).unwrap(), a);
        }
        let g = Field::prime(5).unwrap();
        assert_eq!(g.from_json(&serde_json::json!(-1)).unwrap(), Fq(4));
    }
}
