//! The global operator Θ of a module, its local specializations and Jordan types, and
//! point-scan analyses of constant rank.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{rank, Field, FieldRef, Fq, Matrix, Subspace};
use crate::group::{generic_chart, gl_degree_p_monomials, gl_monomial_name, sl2_divided_triples, divided_name, Family, GroupRef, Point};
use crate::poly::{generic_rank, Exponents, Homogeneity, Poly, PolyMatrix};
use crate::rep::ModuleRep;

/// Θ acting on `M ⊗ k[V(G)]`.
#[derive(Clone, Debug)]
pub struct ThetaMatrix {
    pub group: GroupRef,
    pub field: FieldRef,
    pub matrix: PolyMatrix,
    pub entry_degree: u64,
    coeffs: BTreeMap<Exponents, Matrix>,
}

/// `θ_v`, the evaluation of Θ at a point.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    pub field: FieldRef,
    pub matrix: Matrix,
    pub point: Option<Point>,
}

/// Block counts of a `p`-nilpotent operator: `counts[i]` blocks of size `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanType {
    counts: Vec<usize>,
}

fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    // Lucas: product of digit binomials.
    let (mut n, mut k, mut acc) = (n, k, 1u64);
    while k > 0 || n > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..b {
            c = c * (a - i) % p;
        }
        let mut d = 1u64;
        for i in 1..=b {
            d = d * i % p;
        }
        // d is a unit since b < p.
        let mut inv = 1u64;
        let mut e = p - 2;
        let mut base = d;
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc = acc * c % p * inv % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Multinomial coefficient `(Σ parts)! / Π parts!` reduced mod `p`.
pub fn multinomial_mod(parts: &[u64], p: u64) -> u64 {
    let mut total = 0u64;
    let mut acc = 1u64;
    for &x in parts {
        total += x;
        acc = acc * binomial_mod(total, x, p) % p;
    }
    acc
}

/// All `(i_0,…,i_{r-1})` with `Σ i_ℓ p^ℓ = n`.
fn weighted_compositions(p: u64, r: usize, n: u64) -> Vec<Vec<u64>> {
    fn rec(p: u64, l: usize, rest: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if l == 0 {
            cur.push(rest);
            out.push(cur.iter().rev().copied().collect());
            cur.pop();
            return;
        }
        let w = p.pow(l as u32);
        for i in 0..=rest / w {
            cur.push(i);
            rec(p, l - 1, rest - i * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, r - 1, n, &mut Vec::new(), &mut out);
    out
}

/// `theta_global`: the matrix of Θ for a module, built from the closed formula of its family.
pub fn theta_global(m: &ModuleRep) -> Result<ThetaMatrix> {
    m.validate()?;
    let g = m.group.clone();
    let k: &Field = &m.field;
    let nv = g.nvars();
    let n = m.dim();
    let p = g.p();
    let var = |i: usize| Poly::var(nv, i);
    let act = |name: &str| m.action(name).expect("generator of this family").clone();
    let mut terms: Vec<(Matrix, Poly)> = Vec::new();
    match &g.family {
        Family::MultiAdditive { .. } | Family::RestrictedLie(_) => {
            for (i, a) in m.actions().iter().enumerate() {
                terms.push((a.clone(), var(i)));
            }
        }
        Family::AdditiveKernel { r } => {
            let r = *r as usize;
            let top = (p as u64).pow(r as u32 - 1);
            for comp in weighted_compositions(p as u64, r, top) {
                let i: u64 = comp.iter().sum();
                let c = multinomial_mod(&comp, p as u64);
                if c == 0 {
                    continue;
                }
                let exps: Vec<u32> = comp.iter().map(|&x| x as u32).collect();
                let v = m.divided_monomial(i as u32);
                terms.push((v, Poly::monomial(nv, exps, k.from_int(c as i64))));
            }
        }
        Family::Sl2Height2 => {
            let pw = |i: usize, e: u32| Poly::monomial(nv, (0..6).map(|t| if t == i { e } else { 0 }).collect(), Fq::ONE);
            terms.push((act("e"), var(3)));
            terms.push((act("f"), var(4)));
            terms.push((act("h"), var(5)));
            terms.push((act("e(p)"), pw(0, p)));
            terms.push((act("f(p)"), pw(1, p)));
            terms.push((act("h(p)"), pw(2, p)));
            for (i, j, l) in sl2_divided_triples(p) {
                let mono = Poly::monomial(nv, vec![i, j, l, 0, 0, 0], Fq::ONE);
                terms.push((act(&divided_name(i, j, l)), mono));
            }
        }
        Family::GlHeight2 { n: gn } => {
            let gn = *gn as usize;
            let nn = gn * gn;
            for i in 0..gn {
                for j in 0..gn {
                    terms.push((act(&format!("E{}{}", i + 1, j + 1)), var(nn + i * gn + j)));
                }
            }
            for mono in gl_degree_p_monomials(gn, p) {
                let mut e = mono.clone();
                e.resize(2 * nn, 0);
                terms.push((act(&gl_monomial_name(&mono)), Poly::monomial(nv, e, Fq::ONE)));
            }
        }
    }
    let matrix = PolyMatrix::from_terms(k, n, nv, &terms);
    let entry_degree = g.theta_degree();
    let weights = g.coord_ring().degrees.clone();
    match matrix.entry_degree(&weights) {
        Homogeneity::Zero => {}
        Homogeneity::Degree(d) if d == entry_degree => {}
        h => {
            return Err(Error::Dimension(format!(
                "Θ entries have degree {h}, expected {entry_degree}"
            )))
        }
    }
    let coeffs = matrix.coefficient_matrices();
    Ok(ThetaMatrix {
        group: g,
        field: m.field.clone(),
        matrix,
        entry_degree,
        coeffs,
    })
}

/// The common field for evaluating a module over `module_field` at a point over `point_field`.
fn evaluation_field(module_field: &FieldRef, point_field: &FieldRef) -> Result<FieldRef> {
    if module_field.is_prime_field() && module_field.p() == point_field.p() {
        Ok(point_field.clone())
    } else if **module_field == **point_field || point_field.is_prime_field() {
        Ok(module_field.clone())
    } else {
        Err(Error::FieldMismatch(format!(
            "module over {} cannot be evaluated at a point over {}",
            module_field.describe(),
            point_field.describe()
        )))
    }
}

impl ThetaMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn p(&self) -> u32 {
        self.group.p()
    }

    /// `theta_local`: evaluate at a validated point.
    pub fn local(&self, v: &Point) -> Result<LocalOperator> {
        let v = self.group.validate_point(&v.field, &v.coords)?;
        let k = evaluation_field(&self.field, &v.field)?;
        let matrix = self.evaluate_unchecked(&k, &v.coords);
        Ok(LocalOperator {
            field: k,
            matrix,
            point: Some(v),
        })
    }

    fn evaluate_unchecked(&self, k: &Field, coords: &[Fq]) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (e, a) in &self.coeffs {
            let mut c = Fq::ONE;
            for (&x, &d) in coords.iter().zip(e) {
                if d > 0 {
                    c = k.mul(c, k.pow(x, d as u64));
                }
            }
            if !c.is_zero() {
                out = out.add(k, &a.scale(k, c));
            }
        }
        out
    }

    /// `Θ^j` as a polynomial matrix (no reduction modulo relations).
    pub fn power(&self, j: u32) -> PolyMatrix {
        self.matrix.pow(&self.field, j)
    }

    /// Coefficient matrices of `Θ^j`, one per monomial.
    pub fn power_coefficients(&self, j: u32) -> BTreeMap<Exponents, Matrix> {
        self.power(j).coefficient_matrices()
    }

    /// Fields to scan: `F_{p^e}` for `e ≤ max_ext`, or only the module field when it is an extension.
    pub fn scan_fields(&self, max_ext: u32) -> Result<Vec<FieldRef>> {
        if !self.field.is_prime_field() {
            return Ok(vec![self.field.clone()]);
        }
        (1..=max_ext.max(1)).map(|e| Field::new(self.p(), e)).collect()
    }

    /// Nonzero points over the scan fields, with a field-local index order.
    pub fn scan_points(&self, max_ext: u32) -> Result<Vec<Point>> {
        let mut pts = Vec::new();
        for f in self.scan_fields(max_ext)? {
            pts.extend(self.group.enumerate_points(&f, false)?);
        }
        Ok(pts)
    }

    /// `rank θ_v^j` for every point, in the given order.
    pub fn ranks_at(&self, points: &[Point], j: u32) -> Result<Vec<usize>> {
        points
            .par_iter()
            .map(|v| {
                let k = evaluation_field(&self.field, &v.field)?;
                let a = self.evaluate_unchecked(&k, &v.coords);
                Ok(rank(&k, &a.pow(&k, j)))
            })
            .collect()
    }

    pub fn jordan_types_at(&self, points: &[Point]) -> Result<Vec<JordanType>> {
        points
            .par_iter()
            .map(|v| {
                let k = evaluation_field(&self.field, &v.field)?;
                let a = self.evaluate_unchecked(&k, &v.coords);
                jordan_type_of(&k, &a, self.p())
            })
            .collect()
    }
}

impl JordanType {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        JordanType { counts }
    }

    /// `counts()[i]` is the number of blocks of size `i + 1`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn blocks(&self, size: usize) -> usize {
        if size == 0 {
            0
        } else {
            self.counts.get(size - 1).copied().unwrap_or(0)
        }
    }

    pub fn dim(&self) -> usize {
        self.counts.iter().enumerate().map(|(i, a)| (i + 1) * a).sum()
    }

    /// `rank N^j = Σ_{i>j} a_i (i − j)`.
    pub fn rank_of_power(&self, j: usize) -> usize {
        self.counts
            .iter()
            .enumerate()
            .filter(|(i, _)| i + 1 > j)
            .map(|(i, a)| a * (i + 1 - j))
            .sum()
    }

    /// Dimension of `Ker N^j / Im N^{p−j}`.
    pub fn subquotient_dim(&self, j: usize, p: usize) -> usize {
        let mut d: isize = 0;
        for (i0, &a) in self.counts.iter().enumerate() {
            let i = i0 + 1;
            let a = a as isize;
            d += if i <= j { (i as isize) * a } else { (j as isize) * a };
            if i + j > p {
                d -= (i + j - p) as isize * a;
            }
        }
        d.max(0) as usize
    }

    /// Whether every block has size `p`.
    pub fn is_free(&self, p: usize) -> bool {
        self.counts.iter().enumerate().all(|(i, &a)| a == 0 || i + 1 == p)
    }

    pub fn to_json(&self) -> Value {
        json!(self.counts)
    }
}

impl fmt::Display for JordanType {
    /// Largest blocks first, e.g. `2[2]+[1]`; the zero module prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.counts.iter().enumerate().rev() {
            match a {
                0 => {}
                1 => parts.push(format!("[{}]", i + 1)),
                _ => parts.push(format!("{a}[{}]", i + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Jordan type of a matrix `N` with `N^p = 0`, from the ranks of its powers.
pub fn jordan_type_of(k: &Field, n: &Matrix, p: u32) -> Result<JordanType> {
    if !n.is_square() {
        return Err(Error::Dimension("Jordan type of a non-square matrix".into()));
    }
    let d = n.rows();
    let mut ranks = vec![d];
    let mut pw = Matrix::identity(d);
    for _ in 1..=p {
        pw = pw.mul(k, n);
        ranks.push(rank(k, &pw));
    }
    if ranks[p as usize] != 0 {
        return Err(Error::NotNilpotent(p));
    }
    ranks.push(0);
    let counts = (1..=p as usize)
        .map(|i| ranks[i - 1] + ranks[i + 1] - 2 * ranks[i])
        .collect();
    Ok(JordanType { counts })
}

/// `jordan_type` of a local operator.
pub fn jordan_type(n: &LocalOperator) -> Result<JordanType> {
    jordan_type_of(&n.field, &n.matrix, n.field.p())
}

/// `local_jtype`: Jordan type of `θ_v` on `M`.
pub fn local_jtype(m: &ModuleRep, v: &Point) -> Result<JordanType> {
    jordan_type(&theta_global(m)?.local(v)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Constant rank; `certification` names what backs the claim.
    Constant { rank: usize, certification: String },
    NonConstant { witnesses: [(Point, usize); 2] },
    /// Every scanned point has this rank but the generic point was not certified.
    ConstantUpToScanDepth { rank: usize },
    /// The generic-point check fails but no point with a different rank was found.
    NonConstantUnwitnessed { scanned_rank: usize, reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Constant { .. } => "constant",
            Verdict::NonConstant { .. } => "non-constant",
            Verdict::ConstantUpToScanDepth { .. } => "constant-up-to-scan-depth",
            Verdict::NonConstantUnwitnessed { .. } => "non-constant-unwitnessed",
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Verdict::Constant { .. } | Verdict::ConstantUpToScanDepth { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            Verdict::Constant { rank, .. } | Verdict::ConstantUpToScanDepth { rank } => Some(*rank),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstancyReport {
    pub j: u32,
    pub generic_rank: Option<usize>,
    pub scanned_fields: Vec<FieldRef>,
    pub points_scanned: usize,
    /// Number of scanned points of each rank.
    pub rank_counts: BTreeMap<usize, usize>,
    /// Outcome of the two-degree comparison on `P¹`, when that chart exists.
    pub p1_certificate: Option<bool>,
    pub verdict: Verdict,
}

impl ConstancyReport {
    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            Verdict::Constant { rank, certification } => {
                json!({"kind": "constant", "rank": rank, "certification": certification})
            }
            Verdict::ConstantUpToScanDepth { rank } => json!({"kind": "constant-up-to-scan-depth", "rank": rank}),
            Verdict::NonConstant { witnesses } => json!({
                "kind": "non-constant",
                "witnesses": witnesses.iter().map(|(v, r)| json!({
                    "point": v.to_json(), "field": v.field.descriptor_json(), "rank": r
                })).collect::<Vec<_>>()
            }),
            Verdict::NonConstantUnwitnessed { scanned_rank, reason } => {
                json!({"kind": "non-constant-unwitnessed", "scanned_rank": scanned_rank, "reason": reason})
            }
        };
        json!({
            "j": self.j,
            "generic_rank": self.generic_rank,
            "scanned_fields": self.scanned_fields.iter().map(|f| f.descriptor_json()).collect::<Vec<_>>(),
            "points_scanned": self.points_scanned,
            "rank_counts": self.rank_counts.iter().map(|(r, c)| json!({"rank": r, "points": c})).collect::<Vec<_>>(),
            "p1_certificate": self.p1_certificate,
            "verdict": verdict,
        })
    }
}

/// Rank of `Θ^j` at the generic point, through a relation-free chart when one exists.
pub fn generic_power_rank(t: &ThetaMatrix, j: u32) -> Result<Option<usize>> {
    let Some(chart) = generic_chart(&t.group) else {
        return Ok(None);
    };
    let b = chart.apply_matrix(&t.matrix)?.pow(&t.field, j);
    Ok(Some(generic_rank(&t.field, &b)))
}

fn find_witness(points: &[Point], ranks: &[usize]) -> Option<[(Point, usize); 2]> {
    let lo = *ranks.iter().min()?;
    let hi = *ranks.iter().max()?;
    if lo == hi {
        return None;
    }
    let first = |r: usize| ranks.iter().position(|&x| x == r).expect("present");
    Some([(points[first(lo)].clone(), lo), (points[first(hi)].clone(), hi)])
}

/// Extra fields searched for a witness when the generic point disagrees with the scan.
const WITNESS_MAX_EXT: u32 = 4;
/// Candidate limit for the extra witness search.
const WITNESS_POINT_LIMIT: u128 = 2_000_000;

/// `constant_jrank_report`: ranks of `θ_v^j` over all nonzero points of `V(G)` with coordinates
/// in `F_{p^e}`, `e ≤ max_ext`, compared with the generic rank and, on `P¹`, with the
/// degree certificate.
pub fn constant_jrank_report(t: &ThetaMatrix, j: u32, max_ext: u32) -> Result<ConstancyReport> {
    if j == 0 || j >= t.p().max(2) {
        return Err(Error::Parse(format!("j = {j} must satisfy 1 ≤ j ≤ p − 1")));
    }
    let fields = t.scan_fields(max_ext)?;
    let mut points = Vec::new();
    for f in &fields {
        points.extend(t.group.enumerate_points(f, false)?);
    }
    let ranks = t.ranks_at(&points, j)?;
    let mut rank_counts = BTreeMap::new();
    for &r in &ranks {
        *rank_counts.entry(r).or_insert(0) += 1;
    }
    let generic = generic_power_rank(t, j)?;
    let p1_certificate = crate::bundle::p1_rank_certificate(t, j)?;
    let verdict = if let Some(w) = find_witness(&points, &ranks) {
        Verdict::NonConstant { witnesses: w }
    } else {
        let scanned = ranks.first().copied().unwrap_or(0);
        let generic_ok = generic.map(|g| g == scanned);
        match (generic_ok, p1_certificate) {
            (Some(false), _) | (_, Some(false)) => {
                let reason = if generic_ok == Some(false) {
                    format!("generic rank {} differs from scanned rank {scanned}", generic.unwrap_or(0))
                } else {
                    "kernel and saturated-image degrees on P¹ differ".to_string()
                };
                match deeper_witness(t, j, max_ext, scanned)? {
                    Some(w) => Verdict::NonConstant { witnesses: w },
                    None => Verdict::NonConstantUnwitnessed {
                        scanned_rank: scanned,
                        reason,
                    },
                }
            }
            (Some(true), Some(true)) => Verdict::Constant {
                rank: scanned,
                certification: "scan, generic rank and P¹ degree certificate".into(),
            },
            (Some(true), None) => Verdict::Constant {
                rank: scanned,
                certification: "scan and generic rank".into(),
            },
            (None, _) => Verdict::ConstantUpToScanDepth { rank: scanned },
        }
    };
    Ok(ConstancyReport {
        j,
        generic_rank: generic,
        scanned_fields: fields,
        points_scanned: points.len(),
        rank_counts,
        p1_certificate,
        verdict,
    })
}

fn deeper_witness(t: &ThetaMatrix, j: u32, max_ext: u32, scanned: usize) -> Result<Option<[(Point, usize); 2]>> {
    if !t.field.is_prime_field() {
        return Ok(None);
    }
    let base = t.group.enumerate_points(&Field::prime(t.p())?, false)?;
    let Some(ref0) = base.first().cloned() else {
        return Ok(None);
    };
    for e in max_ext + 1..=WITNESS_MAX_EXT {
        let f = Field::new(t.p(), e)?;
        if (f.order() as u128).pow(t.group.nvars() as u32) > WITNESS_POINT_LIMIT {
            break;
        }
        let pts = t.group.enumerate_points(&f, false)?;
        let ranks = t.ranks_at(&pts, j)?;
        if let Some(i) = ranks.iter().position(|&r| r != scanned) {
            return Ok(Some([(ref0, scanned), (pts[i].clone(), ranks[i])]));
        }
    }
    Ok(None)
}

/// `rank_variety_scan`: nonzero points over `field` where `θ_v` is not free.
pub fn rank_variety_scan(t: &ThetaMatrix, field: &FieldRef) -> Result<Vec<Point>> {
    let pts = t.group.enumerate_points(field, false)?;
    let types = t.jordan_types_at(&pts)?;
    let p = t.p() as usize;
    Ok(pts
        .into_iter()
        .zip(types)
        .filter(|(_, jt)| !(t.dim().is_multiple_of(p) && jt.is_free(p)))
        .map(|(v, _)| v)
        .collect())
}

/// Whether `θ_v` is free at every nonzero point over `F_p` and `F_{p²}`.
pub fn is_projective_by_scan(m: &ModuleRep) -> Result<bool> {
    let t = theta_global(m)?;
    let p = t.p() as usize;
    if !m.dim().is_multiple_of(p) {
        return Ok(false);
    }
    for f in t.scan_fields(2)? {
        if !rank_variety_scan(&t, &f)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of [`constant_kernel_image_property`].
#[derive(Clone, Debug)]
pub struct KernelImageReport {
    pub j: u32,
    /// The common kernel `Ker θ_v^j`, when it does not depend on `v`.
    pub constant_kernel: Option<Vec<Vec<Fq>>>,
    pub constant_image: Option<Vec<Vec<Fq>>>,
    pub points_scanned: usize,
}

impl KernelImageReport {
    pub fn to_json(&self, field: &Field) -> Value {
        let basis = |b: &Option<Vec<Vec<Fq>>>| {
            b.as_ref().map(|vs| {
                vs.iter()
                    .map(|v| v.iter().map(|&x| field.to_json(x)).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
        };
        json!({
            "j": self.j,
            "constant_kernel": self.constant_kernel.is_some(),
            "kernel_basis": basis(&self.constant_kernel),
            "constant_image": self.constant_image.is_some(),
            "image_basis": basis(&self.constant_image),
            "points_scanned": self.points_scanned,
        })
    }
}

/// `constant_kernel_image_property`: compares `Ker θ_v^j` and `Im θ_v^j` across the scan.
/// Subspaces are compared through their reduced echelon bases, which are field-independent.
pub fn constant_kernel_image_property(t: &ThetaMatrix, j: u32, max_ext: u32) -> Result<KernelImageReport> {
    let points = t.scan_points(max_ext)?;
    let spaces: Vec<(Vec<Vec<Fq>>, Vec<Vec<Fq>>)> = points
        .par_iter()
        .map(|v| {
            let k = evaluation_field(&t.field, &v.field)?;
            let a = t.evaluate_unchecked(&k, &v.coords).pow(&k, j);
            let ker = Subspace::kernel_of(&k, &a).basis();
            let img = Subspace::image_of(&k, &a).basis();
            Ok((ker, img))
        })
        .collect::<Result<_>>()?;
    let common = |sel: &dyn Fn(&(Vec<Vec<Fq>>, Vec<Vec<Fq>>)) -> &Vec<Vec<Fq>>| {
        let first = spaces.first().map(sel)?;
        spaces.iter().all(|s| sel(s) == first).then(|| first.clone())
    };
    Ok(KernelImageReport {
        j,
        constant_kernel: common(&|s| &s.0),
        constant_image: common(&|s| &s.1),
        points_scanned: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupScheme;
    use crate::rep::{duals_example, weyl_sl2, zigzag};

    #[test]
    fn lucas_multinomials() {
        assert_eq!(multinomial_mod(&[2, 1], 2), 1);
        assert_eq!(multinomial_mod(&[1, 1], 2), 0);
        assert_eq!(multinomial_mod(&[3, 0], 3), 1);
        assert_eq!(multinomial_mod(&[1, 2], 3), 0);
        assert_eq!(multinomial_mod(&[1, 1, 1], 5), 6 % 5);
    }

    #[test]
    fn sl2_natural_theta() {
        let g = GroupScheme::sl2(3).unwrap();
        let t = theta_global(&weyl_sl2(&g, 1).unwrap()).unwrap();
        let r = g.coord_ring();
        let shown = t.matrix.display(r);
        assert_eq!(shown, vec![vec!["2*z".to_string(), "y".into()], vec!["x".into(), "z".into()]]);
    }

    #[test]
    fn jordan_types_from_ranks() {
        let k = Field::prime(3).unwrap();
        let z = Matrix::zeros(3, 3);
        assert_eq!(jordan_type_of(&k, &z, 3).unwrap().to_string(), "3[1]");
        let mut b = Matrix::zeros(3, 3);
        b.set(1, 0, Fq::ONE);
        b.set(2, 1, Fq::ONE);
        assert_eq!(jordan_type_of(&k, &b, 3).unwrap().to_string(), "[3]");
        assert!(matches!(jordan_type_of(&k, &Matrix::identity(2), 3), Err(Error::NotNilpotent(3))));
        assert_eq!(JordanType::from_counts(vec![0, 0]).to_string(), "0");
    }

    #[test]
    fn local_operators() {
        let g = GroupScheme::sl2(3).unwrap();
        let v4 = weyl_sl2(&g, 4).unwrap();
        let k = g.field().clone();
        let e = g.validate_point(&k, &[Fq::ONE, Fq::ZERO, Fq::ZERO]).unwrap();
        assert_eq!(local_jtype(&v4, &e).unwrap().to_string(), "[3]+[2]");
        let t = theta_global(&v4).unwrap();
        assert_eq!(t.local(&e).unwrap().matrix, *v4.action("e").unwrap());
        let zero = g.validate_point(&k, &[Fq::ZERO; 3]).unwrap();
        assert!(t.local(&zero).unwrap().matrix.is_zero());
    }

    #[test]
    fn zigzag_is_constant() {
        let g = GroupScheme::multi_additive(3, 2).unwrap();
        let t = theta_global(&zigzag(&g, 2).unwrap()).unwrap();
        let rep = constant_jrank_report(&t, 1, 2).unwrap();
        assert_eq!(rep.verdict.rank(), Some(2));
        assert_eq!(rep.verdict.label(), "constant");
        for jt in t.jordan_types_at(&t.scan_points(1).unwrap()).unwrap() {
            assert_eq!(jt.to_string(), "2[2]+[1]");
        }
    }

    #[test]
    fn duals_kernel_image() {
        let g = GroupScheme::additive_kernel(3, 2).unwrap();
        let m = duals_example(&g).unwrap();
        let r = constant_kernel_image_property(&theta_global(&m).unwrap(), 1, 2).unwrap();
        assert_eq!(r.constant_kernel.as_ref().map(|b| b.len()), Some(2));
        assert!(r.constant_image.is_none());
        let d = m.dual().unwrap();
        let r = constant_kernel_image_property(&theta_global(&d).unwrap(), 1, 2).unwrap();
        assert!(r.constant_kernel.is_none());
        assert_eq!(r.constant_image.as_ref().map(|b| b.len()), Some(1));
    }
}
