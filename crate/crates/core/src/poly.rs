//! Sparse polynomials over weighted-graded rings, polynomial matrices, substitutions
//! and fraction-free rank computation.
//!
//! Monomials are exponent vectors compared lexicographically. Iteration and
//! serialization list terms leading-first, i.e. in decreasing lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldRef, Fq, Matrix};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Fq>,
}

/// Outcome of a weighted homogeneity check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity {
    Zero,
    Degree(u64),
    NotHomogeneous,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Fq) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Fq::ONE)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Fq::ONE)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: Fq) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, field: &Field, terms: impl IntoIterator<Item = (Exponents, Fq)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(field, e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms leading-first.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, Fq)> {
        self.terms.iter().rev().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Fq {
        self.terms.get(exps).copied().unwrap_or(Fq::ZERO)
    }

    pub fn leading(&self) -> Option<(&Exponents, Fq)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// The constant term, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Fq> {
        match self.terms.len() {
            0 => Some(Fq::ZERO),
            1 => {
                let (e, &c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then_some(c)
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, field: &Field, exps: Exponents, c: Fq) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.nvars);
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, field: &Field, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(field, e.clone(), c);
        }
        out
    }

    pub fn add_assign(&mut self, field: &Field, other: &Poly) {
        for (e, &c) in &other.terms {
            self.add_term(field, e.clone(), c);
        }
    }

    pub fn neg(&self, field: &Field) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, field: &Field, other: &Poly) -> Poly {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &Field, c: Fq) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &x)| (e.clone(), field.mul(c, x))).collect(),
        }
    }

    pub fn mul(&self, field: &Field, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(field, e, field.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, field: &Field, n: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(field, &base);
            }
        }
        acc
    }

    /// Evaluates at a point whose entries live in `field`; coefficients are read in
    /// the same field (prime-subfield coefficients embed by code).
    pub fn eval(&self, field: &Field, point: &[Fq]) -> Result<Fq> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        Ok(self.eval_unchecked(field, point))
    }

    pub(crate) fn eval_unchecked(&self, field: &Field, point: &[Fq]) -> Fq {
        let mut acc = Fq::ZERO;
        for (e, &c) in &self.terms {
            let mut m = c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = field.mul(m, field.pow(point[i], k as u64));
                }
            }
            acc = field.add(acc, m);
        }
        acc
    }

    pub fn weighted_degree_of(exps: &[u32], weights: &[u32]) -> u64 {
        exps.iter().zip(weights).map(|(&a, &w)| a as u64 * w as u64).sum()
    }

    pub fn homogeneity(&self, weights: &[u32]) -> Homogeneity {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = Self::weighted_degree_of(e, weights);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Homogeneity::NotHomogeneous,
                _ => {}
            }
        }
        deg.map_or(Homogeneity::Zero, Homogeneity::Degree)
    }

    /// Replaces variable `i` by `images[i]`; all images share one variable count.
    pub fn substitute(&self, field: &Field, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let target = images.first().map_or(0, |p| p.nvars);
        let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero(target);
        for (e, &c) in &self.terms {
            let mut m = Poly::constant(target, c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = cache
                    .entry((i, k))
                    .or_insert_with(|| images[i].pow(field, k))
                    .clone();
                m = m.mul(field, &pw);
                if m.is_zero() {
                    break;
                }
            }
            out.add_assign(field, &m);
        }
        Ok(out)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, field: &Field, d: &Poly) -> Option<Poly> {
        let (ld, cd) = d.leading()?;
        let ld = ld.clone();
        let cinv = field.inv(cd)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((lr, cr)) = rem.leading() {
            if lr.iter().zip(&ld).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exponents = lr.iter().zip(&ld).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(self.nvars, e, field.mul(cr, cinv));
            rem = rem.sub(field, &t.mul(field, d));
            quot.add_assign(field, &t);
        }
        Some(quot)
    }

    /// Applies `f` to every coefficient (e.g. a Frobenius power).
    pub fn map_coeffs(&self, field: &Field, f: impl Fn(Fq) -> Fq) -> Poly {
        Poly::from_terms(self.nvars, field, self.terms.iter().map(|(e, &c)| (e.clone(), f(c))))
    }

    pub fn to_json(&self, field: &Field) -> Value {
        Value::Array(
            self.terms()
                .map(|(e, c)| json!({"exponents": e, "coeff": field.to_json(c)}))
                .collect(),
        )
    }

    pub fn from_json(field: &Field, nvars: usize, v: &Value) -> Result<Poly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial must be a list of terms".into()))?;
        let mut p = Poly::zero(nvars);
        for t in arr {
            let exps: Exponents = serde_json::from_value(t["exponents"].clone())?;
            if exps.len() != nvars {
                return Err(Error::Parse(format!("term has {} exponents, expected {nvars}", exps.len())));
            }
            p.add_term(field, exps, field.from_json(&t["coeff"])?);
        }
        Ok(p)
    }

    pub fn display(&self, field: &Field, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let coeff = field.format(c);
            parts.push(match (mono.is_empty(), c == Fq::ONE) {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", coeff, mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

/// A polynomial ring over `F_p` with positive variable weights and homogeneous relations.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedRing {
    pub field: FieldRef,
    pub names: Vec<String>,
    pub degrees: Vec<u32>,
    pub relations: Vec<Poly>,
}

pub type RingRef = Arc<WeightedRing>;

impl WeightedRing {
    pub fn new(field: FieldRef, names: Vec<String>, degrees: Vec<u32>, relations: Vec<Poly>) -> Result<Self> {
        if names.len() != degrees.len() {
            return Err(Error::Dimension("variable names and degrees differ in length".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::Parse("variable weights must be positive".into()));
        }
        for r in &relations {
            if r.nvars() != names.len() || r.homogeneity(&degrees) == Homogeneity::NotHomogeneous {
                return Err(Error::Parse("relations must be homogeneous in the ring variables".into()));
            }
        }
        Ok(WeightedRing {
            field,
            names,
            degrees,
            relations,
        })
    }

    /// Standard-graded `k[s,t]`, the coordinate ring of the projective line.
    pub fn p1(field: FieldRef) -> Self {
        WeightedRing {
            field,
            names: vec!["s".into(), "t".into()],
            degrees: vec![1, 1],
            relations: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i)
    }

    pub fn is_standard_p1(&self) -> bool {
        self.nvars() == 2 && self.degrees == [1, 1] && self.relations.is_empty()
    }

    pub fn homogeneous_degree(&self, f: &Poly) -> Homogeneity {
        f.homogeneity(&self.degrees)
    }

    pub fn monomial_basis(&self, d: u64) -> Vec<Exponents> {
        monomial_basis(&self.degrees, d)
    }

    pub fn display(&self, f: &Poly) -> String {
        f.display(&self.field, &self.names)
    }
}

/// All exponent vectors of weighted degree exactly `d`, in decreasing lexicographic order.
pub fn monomial_basis(weights: &[u32], d: u64) -> Vec<Exponents> {
    fn rec(weights: &[u32], i: usize, left: u64, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i] as u64;
        let max = left / w;
        for k in (0..=max).rev() {
            cur[i] = k as u32;
            rec(weights, i + 1, left - k * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; weights.len()];
    rec(weights, 0, d, &mut cur, &mut out);
    out
}

/// Dense matrix of polynomials in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            entries: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, nvars: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                debug_assert_eq!(p.nvars, nvars);
                entries.push(p);
            }
        }
        PolyMatrix {
            rows,
            cols,
            nvars,
            entries,
        }
    }

    /// `Σ_k coeff_k · A_k` for constant matrices `A_k`.
    pub fn from_terms(field: &Field, dim: usize, nvars: usize, terms: &[(Matrix, Poly)]) -> Self {
        let mut out = Self::zeros(dim, dim, nvars);
        for (a, f) in terms {
            if f.is_zero() || a.is_zero() {
                continue;
            }
            for i in 0..dim {
                for j in 0..dim {
                    let c = a.get(i, j);
                    if !c.is_zero() {
                        out.entries[i * dim + j].add_assign(field, &f.scale(field, c));
                    }
                }
            }
        }
        out
    }

    pub fn constant(a: &Matrix, nvars: usize) -> Self {
        Self::from_fn(a.rows(), a.cols(), nvars, |i, j| Poly::constant(nvars, a.get(i, j)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.nvars, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self, field: &Field) -> Self {
        Self::from_fn(self.rows, self.cols, self.nvars, |i, j| self.get(i, j).neg(field))
    }

    pub fn mul(&self, field: &Field, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "polynomial matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let prod = a.mul(field, b);
                        out.entries[i * other.cols + j].add_assign(field, &prod);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, field: &Field, n: u32) -> Self {
        let mut acc = Self::from_fn(self.rows, self.rows, self.nvars, |i, j| {
            if i == j {
                Poly::one(self.nvars)
            } else {
                Poly::zero(self.nvars)
            }
        });
        for _ in 0..n {
            acc = acc.mul(field, self);
        }
        acc
    }

    pub fn eval(&self, field: &Field, point: &[Fq]) -> Result<Matrix> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, matrix ring has {} variables",
                point.len(),
                self.nvars
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).eval_unchecked(field, point)
        }))
    }

    pub fn substitute_images(&self, field: &Field, images: &[Poly]) -> Result<Self> {
        let target = images.first().map_or(0, |p| p.nvars);
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.substitute(field, images)?);
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: target,
            entries,
        })
    }

    /// The constant matrix multiplying each monomial.
    pub fn coefficient_matrices(&self) -> BTreeMap<Exponents, Matrix> {
        let mut out: BTreeMap<Exponents, Matrix> = BTreeMap::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (e, c) in self.get(i, j).terms() {
                    out.entry(e.clone())
                        .or_insert_with(|| Matrix::zeros(self.rows, self.cols))
                        .set(i, j, c);
                }
            }
        }
        out
    }

    /// Common weighted degree of all nonzero entries; `Zero` for the zero matrix.
    pub fn entry_degree(&self, weights: &[u32]) -> Homogeneity {
        let mut deg = Homogeneity::Zero;
        for e in &self.entries {
            match (e.homogeneity(weights), deg) {
                (Homogeneity::Zero, _) => {}
                (Homogeneity::NotHomogeneous, _) => return Homogeneity::NotHomogeneous,
                (Homogeneity::Degree(d), Homogeneity::Zero) => deg = Homogeneity::Degree(d),
                (Homogeneity::Degree(d), Homogeneity::Degree(d0)) if d != d0 => {
                    return Homogeneity::NotHomogeneous
                }
                _ => {}
            }
        }
        deg
    }

    pub fn to_json(&self, field: &Field) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json(field)).collect()))
                .collect(),
        )
    }

    pub fn display(&self, ring: &WeightedRing) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| ring.display(self.get(i, j))).collect())
            .collect()
    }
}

/// A graded ring map given by the images of the source variables.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub source: RingRef,
    pub target: RingRef,
    pub images: Vec<Poly>,
    /// A source variable of degree d maps to a form of degree d·scale.
    pub scale: u32,
}

impl Substitution {
    pub fn new(source: RingRef, target: RingRef, images: Vec<Poly>, scale: u32) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::Dimension(format!(
                "{} images for {} source variables",
                images.len(),
                source.nvars()
            )));
        }
        for (i, im) in images.iter().enumerate() {
            if im.nvars() != target.nvars() {
                return Err(Error::Dimension("image lives in the wrong ring".into()));
            }
            let want = source.degrees[i] as u64 * scale as u64;
            match target.homogeneous_degree(im) {
                Homogeneity::Zero => {}
                Homogeneity::Degree(d) if d == want => {}
                _ => {
                    return Err(Error::Parse(format!(
                        "image of {} is not homogeneous of degree {want}",
                        source.names[i]
                    )))
                }
            }
        }
        Ok(Substitution {
            source,
            target,
            images,
            scale,
        })
    }

    pub fn identity(ring: RingRef) -> Self {
        let n = ring.nvars();
        Substitution {
            source: ring.clone(),
            target: ring,
            images: (0..n).map(|i| Poly::var(n, i)).collect(),
            scale: 1,
        }
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        f.substitute(&self.source.field, &self.images)
    }

    pub fn apply_matrix(&self, m: &PolyMatrix) -> Result<PolyMatrix> {
        if m.nvars() != self.source.nvars() {
            return Err(Error::Dimension("matrix ring differs from substitution source".into()));
        }
        m.substitute_images(&self.source.field, &self.images)
    }

    /// Image of a point of the target under the induced map on points.
    pub fn map_point(&self, field: &Field, point: &[Fq]) -> Result<Vec<Fq>> {
        self.images.iter().map(|im| im.eval(field, point)).collect()
    }
}

/// Rank over the fraction field by fraction-free (Bareiss) elimination with full pivoting.
///
/// The ring must be a domain: pass a matrix over a relation-free ring (or a chart).
pub fn generic_rank(field: &Field, m: &PolyMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Poly>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut prev = Poly::one(m.nvars());
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        // Prefer the sparsest nonzero pivot to limit growth.
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if !x.is_zero() && best.is_none_or(|(_, _, n)| x.num_terms() < n) {
                    best = Some((i, j, x.num_terms()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let piv = a[k][k].clone();
        for i in k + 1..rows {
            let aik = a[i][k].clone();
            for j in k + 1..cols {
                let t = piv.mul(field, &a[i][j]).sub(field, &aik.mul(field, &a[k][j]));
                a[i][j] = t
                    .div_exact(field, &prev)
                    .expect("Bareiss quotients are exact over a domain");
            }
            a[i][k] = Poly::zero(m.nvars());
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// [`generic_rank`] guarded against rings with relations.
pub fn generic_rank_in(ring: &WeightedRing, m: &PolyMatrix) -> Result<usize> {
    if !ring.relations.is_empty() {
        return Err(Error::Unsupported(
            "generic rank needs a relation-free ring; substitute a chart first".into(),
        ));
    }
    Ok(generic_rank(&ring.field, m))
}

impl fmt::Display for Homogeneity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homogeneity::Zero => write!(f, "zero"),
            Homogeneity::Degree(d) => write!(f, "{d}"),
            Homogeneity::NotHomogeneous => write!(f, "not homogeneous"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldRef {
        Field::prime(p).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let k = f(3);
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let rel = x.mul(&k, &y).add(&k, &z.pow(&k, 2));
        assert_eq!(rel.eval(&k, &[Fq(1), k.from_int(-1), Fq(1)]).unwrap(), Fq(0));
        assert_eq!(Poly::one(3).eval(&k, &[Fq(2), Fq(1), Fq(0)]).unwrap(), Fq(1));
        let x0 = Poly::var(1, 0).pow(&k, 3);
        assert_eq!(x0.eval(&k, &[Fq(2)]).unwrap(), Fq(2));
        assert!(rel.eval(&k, &[Fq(1)]).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        let k = f(3);
        let w = [1, 3];
        assert_eq!(Poly::var(2, 1).homogeneity(&w), Homogeneity::Degree(3));
        let g = Poly::var(2, 0)
            .mul(&k, &Poly::var(2, 1))
            .add(&k, &Poly::var(2, 0).pow(&k, 4));
        assert_eq!(g.homogeneity(&w), Homogeneity::Degree(4));
        let h = Poly::var(2, 0).add(&k, &Poly::var(2, 1));
        assert_eq!(h.homogeneity(&w), Homogeneity::NotHomogeneous);
        assert_eq!(Poly::zero(2).homogeneity(&w), Homogeneity::Zero);
    }

    #[test]
    fn monomial_basis_examples() {
        assert_eq!(monomial_basis(&[1, 1], 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_basis(&[1, 3], 3), vec![vec![3, 0], vec![0, 1]]);
        assert_eq!(monomial_basis(&[1, 3, 9], 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn exact_division() {
        let k = f(5);
        let s = Poly::var(2, 0);
        let t = Poly::var(2, 1);
        let a = s.add(&k, &t);
        let b = s.sub(&k, &t.scale(&k, Fq(2)));
        let prod = a.mul(&k, &b);
        assert_eq!(prod.div_exact(&k, &a).unwrap(), b);
        assert!(s.div_exact(&k, &t).is_none());
    }

    #[test]
    fn generic_rank_examples() {
        let k = f(3);
        assert_eq!(generic_rank(&k, &PolyMatrix::zeros(3, 3, 2)), 0);
        let s = Poly::var(2, 0);
        let sid = PolyMatrix::from_fn(4, 4, 2, |i, j| if i == j { s.clone() } else { Poly::zero(2) });
        assert_eq!(generic_rank(&k, &sid), 4);
    }

    #[test]
    fn json_round_trip() {
        let k = f(7);
        let p = Poly::from_terms(2, &k, [(vec![2, 0], Fq(3)), (vec![0, 1], Fq(6))]);
        let v = p.to_json(&k);
        assert_eq!(v[0]["exponents"], json!([2, 0]));
        assert_eq!(Poly::from_json(&k, 2, &v).unwrap(), p);
    }
}
