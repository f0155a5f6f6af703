//! Graded kernels, images and subquotients of powers of Θ over the standard-graded
//! ring `k[s,t]` of `P¹`, their splitting types, and invariants derived from them.
//!
//! A graded free module is written `⊕ F(−a_c)`, generated in degrees `a_c`. A graded map
//! `⊕F(−a_c) → ⊕F(−b_r)` has entry `(r, c)` homogeneous of degree `a_c − b_r`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{row_reduce, Field, FieldRef, Fq, Matrix, Subspace};
use crate::group::{p1_chart, Family, GroupRef, Point};
use crate::poly::{generic_rank, Homogeneity, Poly, PolyMatrix, Substitution};
use crate::rep::{principal_indecomposable_sl2, ModuleRep};
use crate::theta::{constant_jrank_report, theta_global, ThetaMatrix};

/// Θ pulled back to `P¹`; every entry is homogeneous of degree `entry_degree`.
#[derive(Clone, Debug)]
pub struct P1Matrix {
    pub field: FieldRef,
    pub matrix: PolyMatrix,
    pub entry_degree: u64,
}

/// `restrict_p1`: substitutes a chart (by default the group's standard one) into Θ.
pub fn restrict_p1(t: &ThetaMatrix, chart: Option<&Substitution>) -> Result<P1Matrix> {
    let owned;
    let chart = match chart {
        Some(c) => c,
        None => {
            owned = p1_chart(&t.group).ok_or_else(|| {
                Error::Unsupported(format!("no standard P¹ chart for {}", t.group.name()))
            })?;
            &owned
        }
    };
    if !chart.target.is_standard_p1() {
        return Err(Error::Unsupported("chart target must be the standard-graded P¹".into()));
    }
    if chart.source.degrees != t.group.coord_ring().degrees || chart.source.nvars() != t.group.nvars() {
        return Err(Error::Dimension("chart source is not the coordinate ring of V(G)".into()));
    }
    let matrix = chart.apply_matrix(&t.matrix)?;
    Ok(P1Matrix {
        field: t.field.clone(),
        matrix,
        entry_degree: t.entry_degree * chart.scale as u64,
    })
}

impl P1Matrix {
    pub fn from_matrix(field: FieldRef, matrix: PolyMatrix) -> Result<Self> {
        if matrix.nvars() != 2 || matrix.rows() != matrix.cols() {
            return Err(Error::Dimension("expected a square matrix over k[s,t]".into()));
        }
        let entry_degree = match matrix.entry_degree(&[1, 1]) {
            Homogeneity::Degree(d) => d,
            Homogeneity::Zero => 0,
            Homogeneity::NotHomogeneous => {
                return Err(Error::Dimension("entries must share one homogeneous degree".into()))
            }
        };
        Ok(P1Matrix {
            field,
            matrix,
            entry_degree,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `B^j : F^n → F(j·d)^n` as a graded map.
    pub fn power_map(&self, j: u32) -> GradedMap {
        let n = self.dim();
        let jd = (j as u64 * self.entry_degree) as i64;
        GradedMap {
            field: self.field.clone(),
            src: vec![0; n],
            tgt: vec![-jd; n],
            matrix: self.matrix.pow(&self.field, j),
        }
    }

    /// `B^j : F(−j·d)^n → F^n`, whose image lives in the ambient `F^n`.
    pub fn image_map(&self, j: u32) -> GradedMap {
        let n = self.dim();
        let jd = (j as u64 * self.entry_degree) as i64;
        GradedMap {
            field: self.field.clone(),
            src: vec![jd; n],
            tgt: vec![0; n],
            matrix: self.matrix.pow(&self.field, j),
        }
    }

    /// Fiber at a point of `P¹`.
    pub fn fiber(&self, k: &Field, st: [Fq; 2]) -> Matrix {
        self.matrix.eval(k, &st).expect("two coordinates")
    }
}

/// A homogeneous map of graded free `k[s,t]`-modules.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub field: FieldRef,
    pub src: Vec<i64>,
    pub tgt: Vec<i64>,
    pub matrix: PolyMatrix,
}

impl GradedMap {
    pub fn new(field: FieldRef, src: Vec<i64>, tgt: Vec<i64>, matrix: PolyMatrix) -> Result<Self> {
        if matrix.rows() != tgt.len() || matrix.cols() != src.len() || matrix.nvars() != 2 {
            return Err(Error::Dimension("graded map shape does not match its degrees".into()));
        }
        for r in 0..tgt.len() {
            for c in 0..src.len() {
                let e = matrix.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let want = src[c] - tgt[r];
                match e.homogeneity(&[1, 1]) {
                    Homogeneity::Degree(d) if d as i64 == want => {}
                    _ => {
                        return Err(Error::Dimension(format!(
                            "entry ({r},{c}) should be homogeneous of degree {want}"
                        )))
                    }
                }
            }
        }
        Ok(GradedMap {
            field,
            src,
            tgt,
            matrix,
        })
    }

    /// The dual map `⊕F(b_r) → ⊕F(a_c)`.
    pub fn transpose(&self) -> GradedMap {
        GradedMap {
            field: self.field.clone(),
            src: self.tgt.iter().map(|b| -b).collect(),
            tgt: self.src.iter().map(|a| -a).collect(),
            matrix: self.matrix.transpose(),
        }
    }

    pub fn generic_rank(&self) -> usize {
        generic_rank(&self.field, &self.matrix)
    }
}

/// Homogeneous generators of a graded submodule of `⊕F(−a_c)`.
#[derive(Clone, Debug)]
pub struct GradedSubmodule {
    pub field: FieldRef,
    pub ambient: Vec<i64>,
    /// `(degree, components)`; component `c` is a form of degree `degree − a_c`.
    pub generators: Vec<(i64, Vec<Poly>)>,
    pub rank: usize,
    pub certified_free: bool,
    /// Highest degree searched.
    pub ceiling: i64,
}

impl GradedSubmodule {
    pub fn degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.0).collect()
    }

    pub fn to_json(&self) -> Value {
        let k: &Field = &self.field;
        json!({
            "ambient_degrees": self.ambient,
            "rank": self.rank,
            "certified_free": self.certified_free,
            "ceiling": self.ceiling,
            "generators": self.generators.iter().map(|(d, v)| json!({
                "degree": d,
                "components": v.iter().map(|f| f.to_json(k)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Coordinates of forms of degree `D − a_c` in a flattened vector; index `i` of a
/// component of degree `e` stands for `s^{e−i} t^i`.
struct Layout {
    offsets: Vec<usize>,
    degrees: Vec<i64>,
    total: usize,
}

impl Layout {
    fn new(shift: &[i64], d: i64) -> Self {
        let mut offsets = Vec::with_capacity(shift.len());
        let mut degrees = Vec::with_capacity(shift.len());
        let mut total = 0;
        for &a in shift {
            offsets.push(total);
            let e = d - a;
            degrees.push(e);
            if e >= 0 {
                total += (e + 1) as usize;
            }
        }
        Layout {
            offsets,
            degrees,
            total,
        }
    }

    /// Flattens `s^{u} t^{v} · comps` where `u + v = shift`.
    fn flatten(&self, comps: &[Poly], t_shift: usize) -> Vec<Fq> {
        let mut out = vec![Fq::ZERO; self.total];
        for (c, f) in comps.iter().enumerate() {
            for (e, coef) in f.terms() {
                let idx = e[1] as usize + t_shift;
                out[self.offsets[c] + idx] = coef;
            }
        }
        out
    }
}

/// Entry `(r, c)` as a list of `(t-exponent, coefficient)`.
fn entry_terms(m: &PolyMatrix) -> Vec<Vec<Vec<(usize, Fq)>>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| m.get(r, c).terms().map(|(e, x)| (e[1] as usize, x)).collect())
                .collect()
        })
        .collect()
}

/// The linear map `⊕_c S_{D−a_c} → ⊕_r S_{D−b_r}` induced in degree `D`.
fn degree_matrix(k: &Field, map: &GradedMap, terms: &[Vec<Vec<(usize, Fq)>>], d: i64) -> (Layout, Matrix) {
    let src = Layout::new(&map.src, d);
    let tgt = Layout::new(&map.tgt, d);
    let mut m = Matrix::zeros(tgt.total, src.total);
    for c in 0..map.src.len() {
        let e = src.degrees[c];
        if e < 0 {
            continue;
        }
        for r in 0..map.tgt.len() {
            if tgt.degrees[r] < 0 {
                continue;
            }
            for &(tl, coef) in &terms[r][c] {
                for i in 0..=e as usize {
                    let row = tgt.offsets[r] + i + tl;
                    let col = src.offsets[c] + i;
                    let v = k.add(m.get(row, col), coef);
                    m.set(row, col, v);
                }
            }
        }
    }
    (src, m)
}

/// Bound on the largest generator degree of `ker φ`, assuming the sum of all generator
/// degrees is at most `sum_bound`.
fn max_degree_bound(sum_bound: i64, min_a: i64, k: usize) -> i64 {
    sum_bound - (k as i64 - 1).max(0) * min_a
}

/// `Σ a_c` plus the `ρ` largest values of `−b_r`: an upper bound for the degree sum of
/// the kernel generators (the kernel has degree `−Σ a − c₁(image)`).
fn kernel_degree_sum_bound(map: &GradedMap, rho: usize) -> i64 {
    let mut negb: Vec<i64> = map.tgt.iter().map(|b| -b).collect();
    negb.sort_unstable_by(|a, b| b.cmp(a));
    map.src.iter().sum::<i64>() + negb.iter().take(rho).sum::<i64>()
}

/// `kernel_graded` for an arbitrary graded map.
pub fn kernel_of_map(map: &GradedMap) -> Result<GradedSubmodule> {
    let rho = map.generic_rank();
    let sum = kernel_degree_sum_bound(map, rho);
    kernel_with_sum_bound(map, rho, sum)
}

fn kernel_with_sum_bound(map: &GradedMap, rho: usize, sum_bound: i64) -> Result<GradedSubmodule> {
    let field = map.field.clone();
    let kf: &Field = &field;
    let kr = map.src.len() - rho;
    let min_a = map.src.iter().copied().min().unwrap_or(0);
    let mut result = GradedSubmodule {
        field: field.clone(),
        ambient: map.src.clone(),
        generators: Vec::new(),
        rank: kr,
        certified_free: kr == 0,
        ceiling: min_a,
    };
    if kr == 0 {
        return Ok(result);
    }
    let terms = entry_terms(&map.matrix);
    let bound = max_degree_bound(sum_bound, min_a, kr).max(min_a);
    // One retry with a doubled window, as a guard against a wrong rank.
    for ceiling in [bound + 1, min_a + 2 * (bound - min_a + 1)] {
        result.generators.clear();
        let mut hilbert_ok = 0;
        for d in min_a..=ceiling {
            let (layout, m) = degree_matrix(kf, map, &terms, d);
            if layout.total == 0 {
                continue;
            }
            let kernel = row_reduce(kf, &m).kernel;
            let generated: Vec<Vec<Fq>> = result
                .generators
                .iter()
                .flat_map(|(e, comps)| {
                    let shift = (d - e) as usize;
                    let lifted: Vec<Vec<Poly>> = (0..=shift)
                        .map(|i| {
                            comps
                                .iter()
                                .map(|f| f.mul(kf, &Poly::monomial(2, vec![(shift - i) as u32, i as u32], Fq::ONE)))
                                .collect()
                        })
                        .collect();
                    lifted.into_iter().map(|c| layout.flatten(&c, 0)).collect::<Vec<_>>()
                })
                .collect();
            let mut span = Subspace::span(kf, layout.total, &generated);
            let expected: i64 = result.generators.iter().map(|(e, _)| d - e + 1).sum();
            if span.dim() as i64 == expected && kernel.len() == span.dim() && result.generators.len() == kr {
                hilbert_ok += 1;
            }
            for v in kernel {
                if !span.contains(kf, &v) {
                    let mut basis = span.basis();
                    basis.push(v.clone());
                    span = Subspace::span(kf, layout.total, &basis);
                    result.generators.push((d, layout.unflatten_in(kf, &v)));
                }
            }
        }
        result.ceiling = ceiling;
        if result.generators.len() == kr && hilbert_ok >= 2 {
            result.certified_free = true;
            return Ok(result);
        }
    }
    Err(Error::Ceiling { ceiling: result.ceiling })
}

impl Layout {
    fn unflatten_in(&self, k: &Field, v: &[Fq]) -> Vec<Poly> {
        self.degrees
            .iter()
            .zip(&self.offsets)
            .map(|(&e, &off)| {
                if e < 0 {
                    return Poly::zero(2);
                }
                Poly::from_terms(
                    2,
                    k,
                    (0..=e as usize)
                        .filter(|&i| !v[off + i].is_zero())
                        .map(|i| (vec![(e as usize - i) as u32, i as u32], v[off + i])),
                )
            })
            .collect()
    }
}

/// `kernel_graded`: `Ker(B^j) ⊆ F^n`.
pub fn kernel_graded(b: &P1Matrix, j: u32) -> Result<GradedSubmodule> {
    kernel_of_map(&b.power_map(j))
}

/// `image_graded`: the columns of `B^j`, placed in degree `j·d`, reduced to a minimal set.
pub fn image_graded(b: &P1Matrix, j: u32) -> Result<GradedSubmodule> {
    let k: &Field = &b.field;
    let n = b.dim();
    let bj = b.matrix.pow(k, j);
    let jd = (j as u64 * b.entry_degree) as i64;
    let layout = Layout::new(&vec![0; n], jd);
    let mut span = Subspace::span(k, layout.total, &[]);
    let mut generators = Vec::new();
    for c in 0..n {
        let col: Vec<Poly> = (0..n).map(|r| bj.get(r, c).clone()).collect();
        if col.iter().all(Poly::is_zero) {
            continue;
        }
        let v = layout.flatten(&col, 0);
        if !span.contains(k, &v) {
            let mut basis = span.basis();
            basis.push(v);
            span = Subspace::span(k, layout.total, &basis);
            generators.push((jd, col));
        }
    }
    let rank = generic_rank(k, &bj);
    Ok(GradedSubmodule {
        field: b.field.clone(),
        ambient: vec![0; n],
        certified_free: generators.len() == rank,
        generators,
        rank,
        ceiling: jd,
    })
}

/// Kernel of `(B^j)ᵀ`, generators of degrees `h_l`; `O^n / (Im B^j)^sat` has degree `Σ h_l`.
fn transpose_kernel(b: &P1Matrix, j: u32) -> Result<GradedSubmodule> {
    kernel_of_map(&b.image_map(j).transpose())
}

/// The saturation of `Im B^j` in `F^n`, as the common kernel of the generators of `Ker (B^j)ᵀ`.
pub fn saturated_image(b: &P1Matrix, j: u32) -> Result<GradedSubmodule> {
    let n = b.dim();
    let w = transpose_kernel(b, j)?;
    let rows = w.generators.len();
    let rank = n - w.rank;
    if rows == 0 {
        // Generic rank n: the saturation is everything.
        let generators = (0..n)
            .map(|i| (0, (0..n).map(|r| if r == i { Poly::one(2) } else { Poly::zero(2) }).collect()))
            .collect();
        return Ok(GradedSubmodule {
            field: b.field.clone(),
            ambient: vec![0; n],
            generators,
            rank: n,
            certified_free: true,
            ceiling: 0,
        });
    }
    let c = PolyMatrix::from_fn(rows, n, 2, |l, col| w.generators[l].1[col].clone());
    let tgt = w.generators.iter().map(|g| -g.0).collect();
    let map = GradedMap::new(b.field.clone(), vec![0; n], tgt, c)?;
    let sum: i64 = w.generators.iter().map(|g| g.0).sum();
    let sat = kernel_with_sum_bound(&map, n - rank, sum)?;
    let got: i64 = sat.degrees().iter().sum();
    if got != sum {
        return Err(Error::Containment(format!(
            "saturated image has degree sum {got}, expected {sum}"
        )));
    }
    Ok(sat)
}

/// Sum of `−deg` of the image sheaf of `B^j : O(−jd)^n → O^n`, from the kernel generator degrees.
fn image_sheaf_degree(b: &P1Matrix, j: u32, kernel: &GradedSubmodule) -> i64 {
    let n = b.dim() as i64;
    let jd = (j as u64 * b.entry_degree) as i64;
    -n * jd + kernel.degrees().iter().map(|d| d + jd).sum::<i64>()
}

/// Whether `B^j` has constant rank on all of `P¹`: the image sheaf and its saturation have
/// the same degree exactly when no fiber drops rank.
pub fn constant_rank_certificate(b: &P1Matrix, j: u32) -> Result<bool> {
    let ker = kernel_graded(b, j)?;
    let img = image_sheaf_degree(b, j, &ker);
    let sat = -transpose_kernel(b, j)?.degrees().iter().sum::<i64>();
    Ok(img == sat)
}

/// The certificate above for Θ when `V(G)` has a standard `P¹` chart.
pub fn p1_rank_certificate(t: &ThetaMatrix, j: u32) -> Result<Option<bool>> {
    match p1_chart(&t.group) {
        Some(chart) => Ok(Some(constant_rank_certificate(&restrict_p1(t, Some(&chart))?, j)?)),
        None => Ok(None),
    }
}

/// `⊕ O(n_i)`, sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    pub twists: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut twists: Vec<i64>) -> Self {
        twists.sort_unstable();
        SplittingType { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    pub fn negated(&self) -> Self {
        Self::new(self.twists.iter().map(|x| -x).collect())
    }

    pub fn to_json(&self) -> Value {
        json!(self.twists)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twists.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.twists.iter().map(|d| format!("O({d})")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

/// `splitting_type`: a generator of degree `d` contributes `O(−d)`.
pub fn splitting_type(k: &GradedSubmodule) -> Result<SplittingType> {
    if !k.certified_free {
        return Err(Error::NotFree);
    }
    Ok(SplittingType::new(k.generators.iter().map(|g| -g.0).collect()))
}

/// Coordinates of a homogeneous element in the free basis of `basis`.
fn coordinates(k: &Field, basis: &GradedSubmodule, degree: i64, v: &[Poly]) -> Option<Vec<Poly>> {
    let shifts: Vec<i64> = basis.generators.iter().map(|g| g.0).collect();
    let unknowns = Layout::new(&shifts, degree);
    let target = Layout::new(&basis.ambient, degree);
    // Column for each unknown monomial coefficient.
    let mut cols = Vec::with_capacity(unknowns.total);
    for (e, comps) in &basis.generators {
        let span = degree - e;
        if span < 0 {
            continue;
        }
        for i in 0..=span as usize {
            let mono = Poly::monomial(2, vec![(span as usize - i) as u32, i as u32], Fq::ONE);
            let lifted: Vec<Poly> = comps.iter().map(|f| f.mul(k, &mono)).collect();
            cols.push(target.flatten(&lifted, 0));
        }
    }
    let a = Matrix::from_columns(target.total, &cols);
    let rhs = target.flatten(v, 0);
    let x = crate::field::solve(k, &a, &rhs)?;
    Some(unknowns.unflatten_in(k, &x))
}

/// Output of [`subquotient`].
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub a: u32,
    pub b: u32,
    /// Generic fiber dimension `dim Ker B^a − rank B^b`.
    pub fiber_rank: usize,
    pub kernel: GradedSubmodule,
    pub image: GradedSubmodule,
    pub splitting: SplittingType,
    /// Whether `Im B^b` is already saturated (its degree equals that of its saturation).
    pub image_saturated: bool,
    /// Fiber dimensions observed at points of `P¹` over the scanned fields.
    pub fiber_ranks: BTreeMap<usize, usize>,
}

impl Subquotient {
    pub fn degree(&self) -> i64 {
        self.splitting.degree()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a,
            "b": self.b,
            "fiber_rank": self.fiber_rank,
            "splitting": self.splitting.to_json(),
            "degree": self.degree(),
            "kernel_degrees": self.kernel.degrees(),
            "saturated_image_degrees": self.image.degrees(),
            "image_saturated": self.image_saturated,
            "fiber_ranks": self.fiber_ranks.iter().map(|(r, c)| json!({"rank": r, "points": c})).collect::<Vec<_>>(),
        })
    }
}

/// Nonzero points of `P¹` over `F_{p^e}`, one representative per line: `(1, t)` and `(0, 1)`.
pub fn p1_points(field: &FieldRef) -> Result<Vec<[Fq; 2]>> {
    let mut pts: Vec<[Fq; 2]> = field.elements()?.into_iter().map(|t| [Fq::ONE, t]).collect();
    pts.push([Fq::ZERO, Fq::ONE]);
    Ok(pts)
}

fn p1_scan_fields(b: &P1Matrix, max_ext: u32) -> Result<Vec<FieldRef>> {
    if !b.field.is_prime_field() {
        return Ok(vec![b.field.clone()]);
    }
    (1..=max_ext.max(1)).map(|e| Field::new(b.field.p(), e)).collect()
}

/// Ranks of `B^j` at the scanned points of `P¹`.
pub fn p1_fiber_ranks(b: &P1Matrix, j: u32, max_ext: u32) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for f in p1_scan_fields(b, max_ext)? {
        for st in p1_points(&f)? {
            out.push(crate::field::rank(&f, &b.fiber(&f, st).pow(&f, j)));
        }
    }
    Ok(out)
}

/// Subquotient `Ker B^a / (Im B^b)^sat`. Its dual is the kernel of the transpose of the
/// inclusion of the saturated image into the kernel, which yields the splitting.
pub fn subquotient(bm: &P1Matrix, a: u32, b: u32, max_ext: u32) -> Result<Subquotient> {
    let k: &Field = &bm.field;
    if !bm.matrix.pow(k, a + b).is_zero() {
        return Err(Error::Containment(format!("B^{} ≠ 0, so Im B^{b} ⊄ Ker B^{a}", a + b)));
    }
    let kernel = kernel_graded(bm, a)?;
    let image = saturated_image(bm, b)?;
    let img_ker = kernel_graded(bm, b)?;
    let image_saturated = image_sheaf_degree(bm, b, &img_ker) == -image.degrees().iter().sum::<i64>();
    let kr = kernel.generators.len();
    let m = image.generators.len();
    let fiber_rank = kr - m;
    // The inclusion ⊕F(−g_l) → ⊕F(−d_i), column l = coordinates of the l-th image generator.
    let mut cols = Vec::with_capacity(m);
    for (deg, v) in &image.generators {
        let c = coordinates(k, &kernel, *deg, v).ok_or_else(|| {
            Error::Containment("a saturated image generator is not in the kernel".into())
        })?;
        cols.push(c);
    }
    let splitting = if fiber_rank == 0 {
        SplittingType::new(Vec::new())
    } else if m == 0 {
        splitting_type(&kernel)?
    } else {
        let p = PolyMatrix::from_fn(kr, m, 2, |i, l| cols[l][i].clone());
        let incl = GradedMap::new(bm.field.clone(), image.degrees(), kernel.degrees(), p)?;
        let dual = kernel_of_map(&incl.transpose())?;
        if dual.generators.len() != fiber_rank {
            return Err(Error::Containment("saturated image is not a subbundle of the kernel".into()));
        }
        // Dual generators of degree e give O(−e) in the dual, so O(e) in the subquotient.
        splitting_type(&dual)?.negated()
    };
    let expected = -kernel.degrees().iter().sum::<i64>() + image.degrees().iter().sum::<i64>();
    if splitting.degree() != expected {
        return Err(Error::Containment(format!(
            "subquotient degree {} differs from kernel/image bookkeeping {expected}",
            splitting.degree()
        )));
    }
    let ra = p1_fiber_ranks(bm, a, max_ext)?;
    let rb = p1_fiber_ranks(bm, b, max_ext)?;
    let mut fiber_ranks = BTreeMap::new();
    for (x, y) in ra.iter().zip(&rb) {
        *fiber_ranks.entry(bm.dim() - x - y).or_insert(0) += 1;
    }
    Ok(Subquotient {
        a,
        b,
        fiber_rank,
        kernel,
        image,
        splitting,
        image_saturated,
        fiber_ranks,
    })
}

/// `subquotient_mj`: `M^[j] = Ker B^j / Im B^{p−j}`.
pub fn subquotient_mj(bm: &P1Matrix, j: u32, max_ext: u32) -> Result<Subquotient> {
    let p = bm.field.p();
    if j == 0 || j >= p.max(2) {
        return Err(Error::Parse(format!("j = {j} must satisfy 1 ≤ j ≤ p − 1")));
    }
    subquotient(bm, j, p - j, max_ext)
}

/// Splitting of `Coker B^j` modulo torsion, through `Coker^∨ = Ker (B^j)ᵀ`.
pub fn cokernel_splitting(b: &P1Matrix, j: u32) -> Result<SplittingType> {
    Ok(splitting_type(&transpose_kernel(b, j)?)?.negated())
}

/// Output of [`global_sections`].
#[derive(Clone, Debug)]
pub struct GlobalSections {
    pub basis: Vec<Vec<Fq>>,
    pub method: &'static str,
    pub warning: Option<String>,
}

impl GlobalSections {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `global_sections`: `{m : Θ^j(m ⊗ 1) = 0}`. Coefficients are read on a chart when the ring
/// has relations (the sl2 conic is injective on coordinate rings); without a chart the
/// common kernel over scanned points is used and flagged.
pub fn global_sections(t: &ThetaMatrix, j: u32) -> Result<GlobalSections> {
    let k: &Field = &t.field;
    let n = t.dim();
    let stack = |mats: Vec<Matrix>| {
        if mats.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::vstack(&mats)
        }
    };
    if t.group.coord_ring().relations.is_empty() {
        let m = stack(t.power_coefficients(j).into_values().collect());
        return Ok(GlobalSections {
            basis: Subspace::kernel_of(k, &m).basis(),
            method: "polynomial coefficients",
            warning: None,
        });
    }
    if let Some(chart) = crate::group::generic_chart(&t.group) {
        let b = chart.apply_matrix(&t.matrix)?.pow(k, j);
        let m = stack(b.coefficient_matrices().into_values().collect());
        return Ok(GlobalSections {
            basis: Subspace::kernel_of(k, &m).basis(),
            method: "chart coefficients",
            warning: None,
        });
    }
    let pts = t.scan_points(2)?;
    let mut mats = Vec::new();
    for v in &pts {
        let l = t.local(v)?;
        if *l.field != *t.field {
            continue;
        }
        mats.push(l.matrix.pow(k, j));
    }
    Ok(GlobalSections {
        basis: Subspace::kernel_of(k, &stack(mats)).basis(),
        method: "common kernel over scanned points",
        warning: Some("coordinate ring not known to be reduced; sections computed from points".into()),
    })
}

/// Output of [`projectivity_test`].
#[derive(Clone, Debug)]
pub struct ProjectivityReport {
    pub projective: bool,
    pub constant_rank_1: bool,
    pub constant_rank_p_minus_1: bool,
    pub subquotient_fibers_zero: bool,
    /// On a `P¹` chart: the generic fiber of `M^[1]` is zero and both ranks are certified.
    pub chart_check: Option<bool>,
    pub points_scanned: usize,
}

fn subquotient_fibers(t: &ThetaMatrix, j: u32, max_ext: u32) -> Result<(Vec<Point>, Vec<usize>)> {
    let p = t.p();
    let pts = t.scan_points(max_ext)?;
    let ra = t.ranks_at(&pts, j)?;
    let rb = t.ranks_at(&pts, p - j)?;
    let n = t.dim();
    Ok((pts, ra.iter().zip(&rb).map(|(x, y)| n - x - y).collect()))
}

/// `projectivity_test`.
pub fn projectivity_test(m: &ModuleRep, max_ext: u32) -> Result<ProjectivityReport> {
    let t = theta_global(m)?;
    let p = t.p();
    let c1 = constant_jrank_report(&t, 1, max_ext)?.verdict.is_constant();
    let cp = if p > 2 {
        constant_jrank_report(&t, p - 1, max_ext)?.verdict.is_constant()
    } else {
        c1
    };
    let (pts, fibers) = subquotient_fibers(&t, 1, max_ext)?;
    let zero = fibers.iter().all(|&f| f == 0);
    let chart_check = match p1_chart(&t.group) {
        Some(chart) => {
            let b = restrict_p1(&t, Some(&chart))?;
            let r1 = b.power_map(1).generic_rank();
            let rp = b.power_map(p - 1).generic_rank();
            let cert = constant_rank_certificate(&b, 1)? && constant_rank_certificate(&b, p - 1)?;
            Some(cert && m.dim() == r1 + rp)
        }
        None => None,
    };
    Ok(ProjectivityReport {
        projective: c1 && cp && zero && chart_check.unwrap_or(true),
        constant_rank_1: c1,
        constant_rank_p_minus_1: cp,
        subquotient_fibers_zero: zero,
        chart_check,
        points_scanned: pts.len(),
    })
}

/// Output of [`endotrivial_test`].
#[derive(Clone, Debug)]
pub struct EndotrivialReport {
    pub endotrivial: bool,
    pub constant_jordan_type: bool,
    /// Distinct fiber dimensions of `M^[1]` seen in the scan.
    pub subquotient_fiber_dims: Vec<usize>,
}

/// `endotrivial_test`: constant Jordan type and `M^[1]` of fiber dimension one.
pub fn endotrivial_test(m: &ModuleRep, max_ext: u32) -> Result<EndotrivialReport> {
    let t = theta_global(m)?;
    let pts = t.scan_points(max_ext)?;
    let types = t.jordan_types_at(&pts)?;
    let constant = types.windows(2).all(|w| w[0] == w[1]);
    let (_, fibers) = subquotient_fibers(&t, 1, max_ext)?;
    let mut dims: Vec<usize> = fibers.clone();
    dims.sort_unstable();
    dims.dedup();
    Ok(EndotrivialReport {
        endotrivial: constant && dims == [1],
        constant_jordan_type: constant,
        subquotient_fiber_dims: dims,
    })
}

/// Class of a bundle in `K_0(P¹)` with coordinates in the basis `a_0 = [O]`, `a_1 = [O(−1)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct K0Class {
    pub rank: i64,
    pub degree: i64,
    pub c0: i64,
    pub c1: i64,
}

impl K0Class {
    pub fn add(self, o: K0Class) -> K0Class {
        K0Class {
            rank: self.rank + o.rank,
            degree: self.degree + o.degree,
            c0: self.c0 + o.c0,
            c1: self.c1 + o.c1,
        }
    }

    pub fn scale(self, n: i64) -> K0Class {
        K0Class {
            rank: self.rank * n,
            degree: self.degree * n,
            c0: self.c0 * n,
            c1: self.c1 * n,
        }
    }

    /// Tensoring with `O(d)`.
    pub fn twist(self, d: i64) -> K0Class {
        K0Class {
            rank: self.rank,
            degree: self.degree + d * self.rank,
            c0: self.c0 + d * self.rank,
            c1: self.c1 - d * self.rank,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"rank": self.rank, "degree": self.degree, "coords": [self.c0, self.c1]})
    }
}

/// `k0_class`: `[O(−n)] = n·a_1 − (n−1)·a_0`.
pub fn k0_class(s: &SplittingType) -> K0Class {
    s.twists.iter().fold(
        K0Class {
            rank: 0,
            degree: 0,
            c0: 0,
            c1: 0,
        },
        |acc, &m| {
            let n = -m;
            acc.add(K0Class {
                rank: 1,
                degree: m,
                c0: -(n - 1),
                c1: n,
            })
        },
    )
}

/// `rho_kappa_matrix`: entry `(λ, j)` is `dim Γ(Ker Θ^j on P_λ)`, rows `λ = 0..p−1`, columns
/// `j = 1..p`; with this orientation the matrix is upper triangular.
pub fn rho_kappa_matrix(p: u32, seed: u64) -> Result<Vec<Vec<usize>>> {
    if p > 7 {
        return Err(Error::TooLarge {
            what: "rho-kappa prime",
            count: p as u128,
            limit: 7,
        });
    }
    let g = crate::group::GroupScheme::sl2(p)?;
    let mut rows = Vec::new();
    for lambda in 0..p {
        let pl = principal_indecomposable_sl2(&g, lambda, seed)?;
        let t = theta_global(&pl)?;
        let mut row = Vec::new();
        for j in 1..=p {
            row.push(global_sections(&t, j)?.dim());
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Whether the group supports endotriviality via `M^[1]` (it contains a rank-two elementary
/// subgroup or `G_a(2)`).
pub fn endotrivial_applicable(g: &GroupRef) -> bool {
    match &g.family {
        Family::MultiAdditive { r } => *r >= 2,
        Family::AdditiveKernel { r } => *r >= 2,
        Family::RestrictedLie(_) | Family::Sl2Height2 | Family::GlHeight2 { .. } => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupScheme;
    use crate::rep::{weyl_sl2, zigzag};

    fn sl2_b(p: u32, m: usize) -> P1Matrix {
        let g = GroupScheme::sl2(p).unwrap();
        restrict_p1(&theta_global(&weyl_sl2(&g, m).unwrap()).unwrap(), None).unwrap()
    }

    #[test]
    fn conic_pullback_of_natural_module() {
        let b = sl2_b(3, 1);
        let ring = crate::poly::WeightedRing::p1(b.field.clone());
        assert_eq!(
            b.matrix.display(&ring),
            vec![vec!["2*s*t".to_string(), "2*t^2".into()], vec!["s^2".into(), "s*t".into()]]
        );
        assert_eq!(b.entry_degree, 2);
    }

    #[test]
    fn weyl_kernels() {
        let k = kernel_graded(&sl2_b(3, 2), 1).unwrap();
        assert_eq!(k.degrees(), vec![2]);
        assert!(k.certified_free);
        let k4 = kernel_graded(&sl2_b(3, 4), 1).unwrap();
        assert_eq!(splitting_type(&k4).unwrap().twists, vec![-4, 0]);
        let z = kernel_graded(&sl2_b(3, 0), 1).unwrap();
        assert_eq!(splitting_type(&z).unwrap().twists, vec![0]);
    }

    #[test]
    fn zigzag_image_and_subquotient() {
        let g = GroupScheme::multi_additive(3, 2).unwrap();
        let x1 = zigzag(&g, 1).unwrap();
        let b = restrict_p1(&theta_global(&x1).unwrap(), None).unwrap();
        let im = image_graded(&b, 1).unwrap();
        assert_eq!(im.degrees(), vec![1, 1]);
        assert!(!im.certified_free);
        let sq = subquotient(&b, 1, 1, 2).unwrap();
        assert_eq!(sq.splitting.twists, vec![-1]);
        let d = x1.dual().unwrap();
        let bd = restrict_p1(&theta_global(&d).unwrap(), None).unwrap();
        assert_eq!(subquotient(&bd, 1, 1, 2).unwrap().splitting.twists, vec![1]);
    }

    #[test]
    fn certificates() {
        assert!(constant_rank_certificate(&sl2_b(3, 2), 1).unwrap());
        let g = GroupScheme::multi_additive(3, 2).unwrap();
        // u0 acting nontrivially and u1 by zero: rank drops on the line s = 0.
        let k = g.field().clone();
        let a = Matrix::from_ints(&k, &[&[0, 0], &[1, 0]]).unwrap();
        let m = ModuleRep::from_named(g, 2, &[("u0", a)]).unwrap();
        let b = restrict_p1(&theta_global(&m).unwrap(), None).unwrap();
        assert!(!constant_rank_certificate(&b, 1).unwrap());
    }

    #[test]
    fn k_classes() {
        let st = k0_class(&SplittingType::new(vec![-2]));
        assert_eq!((st.c0, st.c1, st.rank, st.degree), (-1, 2, 1, -2));
        let p0 = k0_class(&SplittingType::new(vec![-4, 0]));
        assert_eq!(p0, st.scale(2));
        assert_eq!(k0_class(&SplittingType::new(vec![])), st.scale(0));
    }
}
