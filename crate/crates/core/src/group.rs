//! Supported infinitesimal group schemes, the coordinate rings of their varieties of
//! one-parameter subgroups, point validation and enumeration, and standard charts.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldRef, Fq, Matrix};
use crate::poly::{Poly, RingRef, Substitution, WeightedRing};

/// Largest number of candidate tuples an enumeration may visit.
pub const MAX_CANDIDATES: u128 = 10_000_000;

/// A finite-dimensional restricted Lie algebra over `F_p` given by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub name: String,
    pub basis: Vec<String>,
    /// `bracket[i][j]` holds the coordinates of `[b_i, b_j]`.
    pub bracket: Vec<Vec<Vec<Fq>>>,
    /// Coordinates of `b_i^{[p]}`.
    pub ppower: Vec<Vec<Fq>>,
}

impl LieAlgebra {
    /// `sl_2` with basis `e, f, h`.
    pub fn sl2(field: &Field) -> Self {
        let n = 3;
        let zero = vec![Fq::ZERO; n];
        let unit = |k: usize, c: i64| {
            let mut v = zero.clone();
            v[k] = field.from_int(c);
            v
        };
        let mut bracket = vec![vec![zero.clone(); n]; n];
        // e = 0, f = 1, h = 2
        bracket[0][1] = unit(2, 1);
        bracket[1][0] = unit(2, -1);
        bracket[2][0] = unit(0, 2);
        bracket[0][2] = unit(0, -2);
        bracket[2][1] = unit(1, -2);
        bracket[1][2] = unit(1, 2);
        LieAlgebra {
            name: "sl2".into(),
            basis: vec!["e".into(), "f".into(), "h".into()],
            bracket,
            ppower: vec![zero.clone(), zero.clone(), unit(2, 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_sl2(&self, field: &Field) -> bool {
        *self == LieAlgebra::sl2(field)
    }

    /// `[a, b]` for coordinate vectors over a field containing `F_p`.
    pub fn bracket_vec(&self, field: &Field, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        let n = self.dim();
        let mut out = vec![Fq::ZERO; n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let c = field.mul(a[i], b[j]);
                field.axpy(&mut out, &self.bracket[i][j], c);
            }
        }
        out
    }

    /// The restricted `p`-th power of `Σ a_i b_i`, built up one basis term at a time.
    pub fn p_power_vec(&self, field: &Field, a: &[Fq]) -> Vec<Fq> {
        let p = field.p();
        let n = self.dim();
        let mut x = vec![Fq::ZERO; n];
        let mut xp = vec![Fq::ZERO; n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            let mut b = vec![Fq::ZERO; n];
            b[i] = a[i];
            let mut bp = vec![Fq::ZERO; n];
            field.axpy(&mut bp, &self.ppower[i], field.pow(a[i], p as u64));
            let s = self.jacobson_correction(field, &x, &b);
            for k in 0..n {
                xp[k] = field.add(field.add(xp[k], bp[k]), s[k]);
                x[k] = field.add(x[k], b[k]);
            }
        }
        xp
    }

    /// `Σ_i s_i(a,b)` where `i·s_i` is the coefficient of `λ^{i-1}` in `ad(λa+b)^{p-1}(a)`.
    fn jacobson_correction(&self, field: &Field, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        let p = field.p() as usize;
        let n = self.dim();
        // v[d] is the coefficient vector of λ^d.
        let mut v: Vec<Vec<Fq>> = vec![a.to_vec()];
        for _ in 0..p - 1 {
            let mut next = vec![vec![Fq::ZERO; n]; v.len() + 1];
            for (d, vd) in v.iter().enumerate() {
                let ba = self.bracket_vec(field, a, vd);
                let bb = self.bracket_vec(field, b, vd);
                field.axpy(&mut next[d + 1], &ba, Fq::ONE);
                field.axpy(&mut next[d], &bb, Fq::ONE);
            }
            v = next;
        }
        let mut out = vec![Fq::ZERO; n];
        for i in 1..p {
            let inv_i = field.inv(field.from_int(i as i64)).expect("i < p is a unit");
            field.axpy(&mut out, &v[i - 1], inv_i);
        }
        out
    }

    /// Generic `p`-th power with polynomial coordinates: the defining equations of the
    /// restricted nullcone (one homogeneous form of degree p per basis element).
    pub fn nullcone_relations(&self, field: &Field) -> Vec<Poly> {
        let n = self.dim();
        let p = field.p();
        let pbr = |a: &[Poly], b: &[Poly]| -> Vec<Poly> {
            let mut out = vec![Poly::zero(n + 1); n];
            for i in 0..n {
                for j in 0..n {
                    if a[i].is_zero() || b[j].is_zero() {
                        continue;
                    }
                    let prod = a[i].mul(field, &b[j]);
                    for (k, &c) in self.bracket[i][j].iter().enumerate() {
                        if !c.is_zero() {
                            out[k].add_assign(field, &prod.scale(field, c));
                        }
                    }
                }
            }
            out
        };
        // Variables X_0..X_{n-1} and an auxiliary λ in slot n.
        let lambda = Poly::var(n + 1, n);
        let mut x = vec![Poly::zero(n + 1); n];
        let mut xp = vec![Poly::zero(n + 1); n];
        for i in 0..n {
            let xi = Poly::var(n + 1, i);
            let mut b = vec![Poly::zero(n + 1); n];
            b[i] = xi.clone();
            let xip = xi.pow(field, p);
            for (k, &c) in self.ppower[i].iter().enumerate() {
                xp[k].add_assign(field, &xip.scale(field, c));
            }
            // ad(λx + b)^{p-1}(x) as a polynomial in λ.
            let la: Vec<Poly> = x.iter().map(|c| c.mul(field, &lambda)).collect();
            let sum: Vec<Poly> = la.iter().zip(&b).map(|(u, w)| u.add(field, w)).collect();
            let mut v = x.clone();
            for _ in 0..p - 1 {
                v = pbr(&sum, &v);
            }
            for comp in 0..n {
                for (e, c) in v[comp].terms() {
                    let d = e[n] as i64;
                    if d >= (p - 1) as i64 {
                        continue;
                    }
                    let inv_i = field.inv(field.from_int(d + 1)).expect("unit");
                    let mut e2 = e.clone();
                    e2[n] = 0;
                    xp[comp].add_term(field, e2, field.mul(c, inv_i));
                }
            }
            for k in 0..n {
                x[k] = x[k].add(field, &b[k]);
            }
        }
        xp.into_iter()
            .map(|f| Poly::from_terms(n, field, f.terms().map(|(e, c)| (e[..n].to_vec(), c))))
            .filter(|f| !f.is_zero())
            .collect()
    }

    /// Checks antisymmetry, the Jacobi identity and `[x^{[p]}, y] = ad_x^p(y)` on basis pairs.
    pub fn validate(&self, field: &Field) -> Result<()> {
        let n = self.dim();
        if self.bracket.len() != n || self.ppower.len() != n {
            return Err(Error::Parse("Lie algebra tables have the wrong size".into()));
        }
        let e = |i: usize| {
            let mut v = vec![Fq::ZERO; n];
            v[i] = Fq::ONE;
            v
        };
        for i in 0..n {
            if self.bracket[i][i].iter().any(|c| !c.is_zero()) {
                return Err(Error::InvalidModule(format!("[{0},{0}] ≠ 0", self.basis[i])));
            }
            for j in 0..n {
                let s: Vec<Fq> = self.bracket[i][j]
                    .iter()
                    .zip(&self.bracket[j][i])
                    .map(|(&a, &b)| field.add(a, b))
                    .collect();
                if s.iter().any(|c| !c.is_zero()) {
                    return Err(Error::InvalidModule(format!(
                        "antisymmetry fails for ({}, {})",
                        self.basis[i], self.basis[j]
                    )));
                }
                for k in 0..n {
                    let a = self.bracket_vec(field, &e(i), &self.bracket_vec(field, &e(j), &e(k)));
                    let b = self.bracket_vec(field, &e(j), &self.bracket_vec(field, &e(k), &e(i)));
                    let c = self.bracket_vec(field, &e(k), &self.bracket_vec(field, &e(i), &e(j)));
                    if (0..n).any(|t| !field.add(field.add(a[t], b[t]), c[t]).is_zero()) {
                        return Err(Error::InvalidModule(format!(
                            "Jacobi identity fails for ({}, {}, {})",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.bracket_vec(field, &self.ppower[i], &e(j));
                let mut rhs = e(j);
                for _ in 0..field.p() {
                    rhs = self.bracket_vec(field, &e(i), &rhs);
                }
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "[{0}^[p], {1}] ≠ ad({0})^p({1})",
                        self.basis[i], self.basis[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Families of infinitesimal group schemes handled by the engine.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// The Frobenius kernel `G_{a(r)}`.
    AdditiveKernel { r: u32 },
    /// `G_{a(1)}^{×r}`, the elementary abelian case.
    MultiAdditive { r: u32 },
    RestrictedLie(Arc<LieAlgebra>),
    Sl2Height2,
    GlHeight2 { n: u32 },
}

/// A group scheme over `F_p` together with the coordinate ring of `V(G)`.
#[derive(Debug)]
pub struct GroupScheme {
    pub family: Family,
    field: FieldRef,
    ring: RingRef,
}

pub type GroupRef = Arc<GroupScheme>;

/// A point of `V(G)` with coordinates in some finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub field: FieldRef,
    pub coords: Vec<Fq>,
}

impl Point {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(|&c| self.field.to_json(c)).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|&x| self.field.format(x)).collect();
        write!(f, "({})", c.join(","))
    }
}

fn names(prefix: &str, n: u32) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl GroupScheme {
    fn build(family: Family, p: u32) -> Result<GroupRef> {
        let field = Field::prime(p)?;
        let ring = Arc::new(Self::make_ring(&family, &field)?);
        Ok(Arc::new(GroupScheme { family, field, ring }))
    }

    pub fn additive_kernel(p: u32, r: u32) -> Result<GroupRef> {
        if r == 0 {
            return Err(Error::Parse("height must be at least 1".into()));
        }
        Self::build(Family::AdditiveKernel { r }, p)
    }

    pub fn multi_additive(p: u32, r: u32) -> Result<GroupRef> {
        if r == 0 {
            return Err(Error::Parse("rank must be at least 1".into()));
        }
        Self::build(Family::MultiAdditive { r }, p)
    }

    pub fn sl2(p: u32) -> Result<GroupRef> {
        let field = Field::prime(p)?;
        Self::build(Family::RestrictedLie(Arc::new(LieAlgebra::sl2(&field))), p)
    }

    pub fn lie(p: u32, alg: LieAlgebra) -> Result<GroupRef> {
        let field = Field::prime(p)?;
        alg.validate(&field)?;
        Self::build(Family::RestrictedLie(Arc::new(alg)), p)
    }

    pub fn sl2_height2(p: u32) -> Result<GroupRef> {
        Self::build(Family::Sl2Height2, p)
    }

    pub fn gl_height2(p: u32, n: u32) -> Result<GroupRef> {
        if !(1..=3).contains(&n) {
            return Err(Error::Unsupported(format!("GL_n height 2 needs 1 ≤ n ≤ 3, got {n}")));
        }
        Self::build(Family::GlHeight2 { n }, p)
    }

    fn make_ring(family: &Family, field: &FieldRef) -> Result<WeightedRing> {
        let p = field.p();
        let k: &Field = field;
        match family {
            Family::AdditiveKernel { r } => WeightedRing::new(
                field.clone(),
                names("x", *r),
                (0..*r).map(|i| p.pow(i)).collect(),
                Vec::new(),
            ),
            Family::MultiAdditive { r } => {
                WeightedRing::new(field.clone(), names("X", *r), vec![1; *r as usize], Vec::new())
            }
            Family::RestrictedLie(alg) => {
                let rels = if alg.is_sl2(k) {
                    let (x, y, z) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
                    vec![x.mul(k, &y).add(k, &z.pow(k, 2))]
                } else {
                    alg.nullcone_relations(k)
                };
                let names = alg.basis.iter().map(|b| format!("X_{b}")).collect::<Vec<_>>();
                let names = if alg.is_sl2(k) {
                    vec!["x".into(), "y".into(), "z".into()]
                } else {
                    names
                };
                WeightedRing::new(field.clone(), names, vec![1; alg.dim()], rels)
            }
            Family::Sl2Height2 => {
                let v = |i| Poly::var(6, i);
                let (x0, y0, z0, x1, y1, z1) = (v(0), v(1), v(2), v(3), v(4), v(5));
                let rels = vec![
                    x0.mul(k, &y0).add(k, &z0.pow(k, 2)),
                    x1.mul(k, &y1).add(k, &z1.pow(k, 2)),
                    x0.mul(k, &y1).sub(k, &x1.mul(k, &y0)),
                    z0.mul(k, &y1).sub(k, &z1.mul(k, &y0)),
                    x0.mul(k, &z1).sub(k, &x1.mul(k, &z0)),
                ];
                WeightedRing::new(
                    field.clone(),
                    ["x0", "y0", "z0", "x1", "y1", "z1"].iter().map(|s| s.to_string()).collect(),
                    vec![1, 1, 1, p, p, p],
                    rels,
                )
            }
            Family::GlHeight2 { n } => {
                let n = *n as usize;
                let nv = 2 * n * n;
                let mut names = Vec::new();
                for l in 0..2 {
                    for i in 0..n {
                        for j in 0..n {
                            names.push(format!("a{l}_{}{}", i + 1, j + 1));
                        }
                    }
                }
                let mat = |l: usize| {
                    crate::poly::PolyMatrix::from_fn(n, n, nv, |i, j| Poly::var(nv, l * n * n + i * n + j))
                };
                let (a0, a1) = (mat(0), mat(1));
                let mut rels = Vec::new();
                for m in [a0.pow(k, p), a1.pow(k, p)] {
                    rels.extend(m.entries().iter().filter(|e| !e.is_zero()).cloned());
                }
                let comm = a0.mul(k, &a1);
                let comm2 = a1.mul(k, &a0);
                for (x, y) in comm.entries().iter().zip(comm2.entries()) {
                    let d = x.sub(k, y);
                    if !d.is_zero() {
                        rels.push(d);
                    }
                }
                let degrees = (0..nv).map(|i| if i < n * n { 1 } else { p }).collect();
                WeightedRing::new(field.clone(), names, degrees, rels)
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// `coord_ring`: the graded coordinate ring of `V(G)` with its relations.
    pub fn coord_ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Height `r`, so that Θ has entries of degree `p^{r-1}`.
    pub fn height(&self) -> u32 {
        match &self.family {
            Family::AdditiveKernel { r } => *r,
            Family::MultiAdditive { .. } | Family::RestrictedLie(_) => 1,
            Family::Sl2Height2 | Family::GlHeight2 { .. } => 2,
        }
    }

    pub fn theta_degree(&self) -> u64 {
        (self.p() as u64).pow(self.height() - 1)
    }

    /// Whether the coordinate ring is known to be reduced (so global sections may be
    /// computed from the polynomial coefficients of Θ).
    pub fn reduced(&self) -> Option<bool> {
        match &self.family {
            Family::AdditiveKernel { .. } | Family::MultiAdditive { .. } => Some(true),
            Family::RestrictedLie(a) if a.is_sl2(&self.field) => Some(true),
            _ => None,
        }
    }

    pub fn is_sl2(&self) -> bool {
        matches!(&self.family, Family::RestrictedLie(a) if a.is_sl2(&self.field))
    }

    /// Names of the algebra generators whose action a module must provide.
    pub fn generators(&self) -> Vec<String> {
        match &self.family {
            Family::AdditiveKernel { r } | Family::MultiAdditive { r } => names("u", *r),
            Family::RestrictedLie(a) => a.basis.clone(),
            Family::Sl2Height2 => {
                let p = self.p();
                let mut g: Vec<String> = ["e", "f", "h", "e(p)", "f(p)", "h(p)"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                for (i, j, l) in sl2_divided_triples(p) {
                    g.push(divided_name(i, j, l));
                }
                g
            }
            Family::GlHeight2 { n } => {
                let n = *n as usize;
                let mut g = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        g.push(format!("E{}{}", i + 1, j + 1));
                    }
                }
                for m in gl_degree_p_monomials(n, self.p()) {
                    g.push(gl_monomial_name(&m));
                }
                g
            }
        }
    }

    /// Short name used on the command line and in reports.
    pub fn name(&self) -> String {
        match &self.family {
            Family::AdditiveKernel { r } => format!("ga{r}"),
            Family::MultiAdditive { r: 2 } => "ga1xga1".into(),
            Family::MultiAdditive { r } => format!("ga1x{r}"),
            Family::RestrictedLie(a) if a.is_sl2(&self.field) => "u_sl2".into(),
            Family::RestrictedLie(a) => format!("lie:{}", a.name),
            Family::Sl2Height2 => "sl2_2".into(),
            Family::GlHeight2 { n } => format!("gl{n}_2"),
        }
    }

    /// Parses a short group name such as `u_sl2`, `ga2`, `ga1xga1`, `ga1x4`, `sl2_2`, `gl2_2`.
    pub fn from_name(name: &str, p: u32) -> Result<GroupRef> {
        let bad = || Error::Parse(format!("unknown group '{name}'"));
        match name {
            "u_sl2" | "sl2" => Self::sl2(p),
            "ga1xga1" | "E" => Self::multi_additive(p, 2),
            "sl2_2" => Self::sl2_height2(p),
            _ => {
                if let Some(r) = name.strip_prefix("ga1x") {
                    return Self::multi_additive(p, r.parse().map_err(|_| bad())?);
                }
                if let Some(r) = name.strip_prefix("ga") {
                    return Self::additive_kernel(p, r.parse().map_err(|_| bad())?);
                }
                if let Some(rest) = name.strip_prefix("gl") {
                    let n = rest.strip_suffix("_2").ok_or_else(bad)?;
                    return Self::gl_height2(p, n.parse().map_err(|_| bad())?);
                }
                Err(bad())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.family {
            Family::RestrictedLie(a) if !a.is_sl2(&self.field) => {
                let k = &self.field;
                let mut brackets = Vec::new();
                for i in 0..a.dim() {
                    for j in i + 1..a.dim() {
                        let val = coords_to_map(k, &a.basis, &a.bracket[i][j]);
                        if !val.is_empty() {
                            brackets.push(json!({"a": a.basis[i], "b": a.basis[j], "value": val}));
                        }
                    }
                }
                let mut pp = Map::new();
                for i in 0..a.dim() {
                    let val = coords_to_map(k, &a.basis, &a.ppower[i]);
                    if !val.is_empty() {
                        pp.insert(a.basis[i].clone(), Value::Object(val));
                    }
                }
                json!({"family": "lie", "p": self.p(), "name": a.name, "basis": a.basis,
                       "brackets": brackets, "ppower": pp})
            }
            _ => json!({"family": self.name(), "p": self.p()}),
        }
    }

    /// Reads `{"family": name, "p": p}` or a custom Lie algebra
    /// `{"family":"lie","p":p,"basis":[…],"brackets":[{"a","b","value":{…}}],"ppower":{…}}`.
    pub fn from_json(v: &Value, p_default: Option<u32>) -> Result<GroupRef> {
        let p = match v.get("p").and_then(Value::as_u64) {
            Some(p) => p as u32,
            None => p_default.ok_or_else(|| Error::Parse("group descriptor needs a prime p".into()))?,
        };
        let fam = v
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("group descriptor needs a family".into()))?;
        if fam != "lie" {
            return Self::from_name(fam, p);
        }
        let field = Field::prime(p)?;
        let basis: Vec<String> = serde_json::from_value(
            v.get("basis").cloned().ok_or_else(|| Error::Parse("lie algebra needs a basis".into()))?,
        )?;
        let n = basis.len();
        let index = |s: &str| {
            basis
                .iter()
                .position(|b| b == s)
                .ok_or_else(|| Error::Parse(format!("unknown basis element '{s}'")))
        };
        let read_vec = |m: &Value| -> Result<Vec<Fq>> {
            let mut out = vec![Fq::ZERO; n];
            let obj = m.as_object().ok_or_else(|| Error::Parse("expected an object of coefficients".into()))?;
            for (k, c) in obj {
                out[index(k)?] = field.from_json(c)?;
            }
            Ok(out)
        };
        let mut bracket = vec![vec![vec![Fq::ZERO; n]; n]; n];
        for b in v.get("brackets").and_then(Value::as_array).into_iter().flatten() {
            let i = index(b["a"].as_str().unwrap_or(""))?;
            let j = index(b["b"].as_str().unwrap_or(""))?;
            let val = read_vec(&b["value"])?;
            bracket[j][i] = val.iter().map(|&c| field.neg(c)).collect();
            bracket[i][j] = val;
        }
        let mut ppower = vec![vec![Fq::ZERO; n]; n];
        if let Some(pp) = v.get("ppower").and_then(Value::as_object) {
            for (k, val) in pp {
                ppower[index(k)?] = read_vec(val)?;
            }
        }
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom").to_string();
        Self::lie(
            p,
            LieAlgebra {
                name,
                basis,
                bracket,
                ppower,
            },
        )
    }

    /// `validate_point`: checks that the coordinates define a point of `V(G)`.
    pub fn validate_point(&self, field: &FieldRef, coords: &[Fq]) -> Result<Point> {
        if field.p() != self.p() {
            return Err(Error::FieldMismatch(format!(
                "point field has characteristic {}, group has {}",
                field.p(),
                self.p()
            )));
        }
        if coords.len() != self.nvars() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, V(G) has {}",
                coords.len(),
                self.nvars()
            )));
        }
        if coords.iter().any(|c| c.0 >= field.order()) {
            return Err(Error::Parse("coordinate outside the field".into()));
        }
        let k: &Field = field;
        let p = self.p();
        match &self.family {
            Family::AdditiveKernel { .. } | Family::MultiAdditive { .. } => {}
            Family::RestrictedLie(a) => {
                if a.is_sl2(&self.field) {
                    let m = sl2_matrix(k, coords[0], coords[1], coords[2]);
                    if !m.pow(k, p).is_zero() {
                        return Err(Error::InvalidPoint(
                            "xy+z^2 (generic element not p-nilpotent)".into(),
                        ));
                    }
                } else {
                    for (idx, rel) in self.ring.relations.iter().enumerate() {
                        if !rel.eval_unchecked(k, coords).is_zero() {
                            return Err(Error::InvalidPoint(format!(
                                "x^[p] component {} ({})",
                                idx,
                                self.ring.display(rel)
                            )));
                        }
                    }
                }
            }
            Family::Sl2Height2 => {
                let a0 = sl2_matrix(k, coords[0], coords[1], coords[2]);
                let a1 = sl2_matrix(k, coords[3], coords[4], coords[5]);
                nilpotent_commuting(k, &a0, &a1, p)?;
            }
            Family::GlHeight2 { n } => {
                let (a0, a1) = gl_pair(*n as usize, coords);
                nilpotent_commuting(k, &a0, &a1, p)?;
            }
        }
        Ok(Point {
            field: field.clone(),
            coords: coords.to_vec(),
        })
    }

    /// Every point of `V(G)` with coordinates in `field`, in lexicographic code order.
    pub fn enumerate_points(&self, field: &FieldRef, include_zero: bool) -> Result<Vec<Point>> {
        let q = field.order() as u128;
        let k: &Field = field;
        let p = self.p();
        let mut out = match &self.family {
            Family::Sl2Height2 => {
                let nil = nilpotent_sl2_triples(k, p)?;
                let mut pts = Vec::new();
                for a in &nil {
                    for b in &nil {
                        let c: Vec<Fq> = a.iter().chain(b.iter()).copied().collect();
                        if self.validate_point(field, &c).is_ok() {
                            pts.push(c);
                        }
                    }
                }
                pts
            }
            Family::GlHeight2 { n } => {
                let n = *n as usize;
                let count = q.pow((n * n) as u32);
                check_count("GL_n nilpotent matrices", count)?;
                let nil: Vec<Vec<Fq>> = all_tuples(q as u32, n * n)
                    .filter(|c| {
                        let m = Matrix::from_fn(n, n, |i, j| c[i * n + j]);
                        m.pow(k, p).is_zero()
                    })
                    .collect();
                let mut pts = Vec::new();
                for a in &nil {
                    let ma = Matrix::from_fn(n, n, |i, j| a[i * n + j]);
                    for b in &nil {
                        let mb = Matrix::from_fn(n, n, |i, j| b[i * n + j]);
                        if ma.commutator(k, &mb).is_zero() {
                            pts.push(a.iter().chain(b.iter()).copied().collect());
                        }
                    }
                }
                pts
            }
            _ => {
                let count = q.pow(self.nvars() as u32);
                check_count("V(G) candidates", count)?;
                all_tuples(q as u32, self.nvars())
                    .filter(|c| self.validate_point(field, c).is_ok())
                    .collect()
            }
        };
        out.sort();
        if !include_zero {
            out.retain(|c| c.iter().any(|x| !x.is_zero()));
        }
        Ok(out
            .into_iter()
            .map(|coords| Point {
                field: field.clone(),
                coords,
            })
            .collect())
    }

    /// `frobenius_point_map`: `(a_0,…,a_{r-1}) ↦ (0,…,0, a_0^{p^s},…,a_{r-1-s}^{p^s})`.
    pub fn frobenius_point_map(&self, s: u32, v: &Point) -> Result<Point> {
        let r = self.height();
        let block = match &self.family {
            Family::AdditiveKernel { .. } => 1,
            Family::GlHeight2 { n } => (*n * *n) as usize,
            _ => {
                return Err(Error::Unsupported(
                    "Frobenius point map is defined for G_a(r) and GL_n(2)".into(),
                ))
            }
        };
        if s >= r {
            return Err(Error::Parse(format!("shift {s} must be below the height {r}")));
        }
        let k: &Field = &v.field;
        let e = (self.p() as u64).pow(s);
        let s = s as usize;
        let mut coords = vec![Fq::ZERO; v.coords.len()];
        for i in s..r as usize {
            for t in 0..block {
                coords[i * block + t] = k.pow(v.coords[(i - s) * block + t], e);
            }
        }
        self.validate_point(&v.field, &coords)
    }

    /// Evaluates the relation list exactly as printed in the literature for `SL_{2(2)}`,
    /// `(x_iy_i − z_i², x_0y_1 − x_1y_1, z_0y_1 − z_1y_0, x_0z_1 − x_1z_0)`, returning the
    /// names of the printed relations that fail at `coords`.
    pub fn printed_sl2_height2_relations(field: &Field, coords: &[Fq]) -> Vec<&'static str> {
        let (x0, y0, z0, x1, y1, z1) = (coords[0], coords[1], coords[2], coords[3], coords[4], coords[5]);
        let k = field;
        let checks = [
            ("x0y0-z0^2", k.sub(k.mul(x0, y0), k.mul(z0, z0))),
            ("x1y1-z1^2", k.sub(k.mul(x1, y1), k.mul(z1, z1))),
            ("x0y1-x1y1", k.sub(k.mul(x0, y1), k.mul(x1, y1))),
            ("z0y1-z1y0", k.sub(k.mul(z0, y1), k.mul(z1, y0))),
            ("x0z1-x1z0", k.sub(k.mul(x0, z1), k.mul(x1, z0))),
        ];
        checks.iter().filter(|(_, v)| !v.is_zero()).map(|(n, _)| *n).collect()
    }
}

fn coords_to_map(field: &Field, basis: &[String], v: &[Fq]) -> Map<String, Value> {
    let mut m = Map::new();
    for (b, &c) in basis.iter().zip(v) {
        if !c.is_zero() {
            m.insert(b.clone(), field.to_json(c));
        }
    }
    m
}

fn check_count(what: &'static str, count: u128) -> Result<()> {
    if count > MAX_CANDIDATES {
        return Err(Error::TooLarge {
            what,
            count,
            limit: MAX_CANDIDATES,
        });
    }
    Ok(())
}

/// All tuples of length `n` over codes `0..q`, lexicographic with the first entry most significant.
pub(crate) fn all_tuples(q: u32, n: usize) -> impl Iterator<Item = Vec<Fq>> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |mut k| {
        let mut c = vec![Fq::ZERO; n];
        for i in (0..n).rev() {
            c[i] = Fq((k % q as u64) as u32);
            k /= q as u64;
        }
        c
    })
}

/// `x e + y f + z h` in the natural representation: `[[z, x], [y, −z]]`.
pub fn sl2_matrix(field: &Field, x: Fq, y: Fq, z: Fq) -> Matrix {
    let mut m = Matrix::zeros(2, 2);
    m.set(0, 0, z);
    m.set(0, 1, x);
    m.set(1, 0, y);
    m.set(1, 1, field.neg(z));
    m
}

fn nilpotent_sl2_triples(field: &Field, p: u32) -> Result<Vec<Vec<Fq>>> {
    let q = field.order();
    check_count("sl2 triples", (q as u128).pow(3))?;
    Ok(all_tuples(q, 3)
        .filter(|c| sl2_matrix(field, c[0], c[1], c[2]).pow(field, p).is_zero())
        .collect())
}

fn gl_pair(n: usize, coords: &[Fq]) -> (Matrix, Matrix) {
    (
        Matrix::from_fn(n, n, |i, j| coords[i * n + j]),
        Matrix::from_fn(n, n, |i, j| coords[n * n + i * n + j]),
    )
}

fn nilpotent_commuting(field: &Field, a0: &Matrix, a1: &Matrix, p: u32) -> Result<()> {
    if !a0.pow(field, p).is_zero() {
        return Err(Error::InvalidPoint("alpha_0^p = 0".into()));
    }
    if !a1.pow(field, p).is_zero() {
        return Err(Error::InvalidPoint("alpha_1^p = 0".into()));
    }
    if !a0.commutator(field, a1).is_zero() {
        return Err(Error::InvalidPoint("[alpha_0, alpha_1] = 0".into()));
    }
    Ok(())
}

/// Triples `(i, j, l)` with `i + j + l = p` and each part below `p`.
pub fn sl2_divided_triples(p: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for i in 0..p {
        for j in 0..p {
            if i + j <= p && p - i - j < p {
                out.push((i, j, p - i - j));
            }
        }
    }
    out
}

/// Generator name of the divided product `e^(i) f^(j) (h choose l)`.
pub fn divided_name(i: u32, j: u32, l: u32) -> String {
    format!("e({i})f({j})h({l})")
}

/// Exponent vectors of total degree `p` in the `n²` entries of `α_0`, in decreasing lexicographic order.
pub fn gl_degree_p_monomials(n: usize, p: u32) -> Vec<Vec<u32>> {
    crate::poly::monomial_basis(&vec![1; n * n], p as u64)
}

pub fn gl_monomial_name(m: &[u32]) -> String {
    let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
    format!("D[{}]", parts.join(","))
}

/// `conic_chart_sl2`: `(x, y, z) ↦ (s², −t², st)` into `k[s,t]`, scaling degrees by 2.
pub fn conic_chart_sl2(p: u32) -> Result<Substitution> {
    if p == 2 {
        return Err(Error::Unsupported("the conic chart needs p odd".into()));
    }
    let g = GroupScheme::sl2(p)?;
    let k = g.field().clone();
    let target = Arc::new(WeightedRing::p1(k.clone()));
    let (s, t) = (Poly::var(2, 0), Poly::var(2, 1));
    let images = vec![s.pow(&k, 2), t.pow(&k, 2).neg(&k), s.mul(&k, &t)];
    Substitution::new(g.coord_ring().clone(), target, images, 2)
}

/// A relation-free parametrization of (a dense part of) `V(G)` usable for generic ranks,
/// together with whether its target is the standard-graded projective line.
pub fn generic_chart(g: &GroupScheme) -> Option<Substitution> {
    match &g.family {
        Family::AdditiveKernel { .. } | Family::MultiAdditive { .. } => {
            Some(Substitution::identity(g.coord_ring().clone()))
        }
        Family::RestrictedLie(_) if g.is_sl2() && g.p() > 2 => {
            let c = conic_chart_sl2(g.p()).ok()?;
            // Rebind the source to this group's ring instance.
            Some(Substitution {
                source: g.coord_ring().clone(),
                ..c
            })
        }
        _ => None,
    }
}

/// The chart onto the standard-graded `P¹` used for bundle computations.
pub fn p1_chart(g: &GroupScheme) -> Option<Substitution> {
    match &g.family {
        Family::MultiAdditive { r: 2 } => {
            let target = Arc::new(WeightedRing::p1(g.field().clone()));
            Some(Substitution {
                source: g.coord_ring().clone(),
                target,
                images: vec![Poly::var(2, 0), Poly::var(2, 1)],
                scale: 1,
            })
        }
        Family::RestrictedLie(_) if g.is_sl2() => generic_chart(g),
        _ => None,
    }
}

/// Embedding `G_{a(1)}^{×2} ⊂ G_{a(1)}^{×r}` on coordinate rings: keep the first two
/// coordinates and send the rest to zero.
pub fn restriction_to_first_plane(g: &GroupScheme) -> Result<Substitution> {
    let Family::MultiAdditive { r } = g.family else {
        return Err(Error::Unsupported("restriction needs G_a(1)^r".into()));
    };
    if r < 2 {
        return Err(Error::Unsupported("need r ≥ 2".into()));
    }
    let target = Arc::new(WeightedRing::p1(g.field().clone()));
    let images = (0..r as usize)
        .map(|i| if i < 2 { Poly::var(2, i) } else { Poly::zero(2) })
        .collect();
    Substitution::new(g.coord_ring().clone(), target, images, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Homogeneity;

    #[test]
    fn coordinate_rings() {
        let g = GroupScheme::sl2(3).unwrap();
        let r = g.coord_ring();
        assert_eq!(r.names, vec!["x", "y", "z"]);
        assert_eq!(r.degrees, vec![1, 1, 1]);
        assert_eq!(r.relations.len(), 1);
        assert_eq!(r.display(&r.relations[0]), "x*y + z^2");

        let a = GroupScheme::additive_kernel(3, 2).unwrap();
        assert_eq!(a.coord_ring().degrees, vec![1, 3]);
        assert!(a.coord_ring().relations.is_empty());

        let e = GroupScheme::multi_additive(3, 2).unwrap();
        assert_eq!(e.coord_ring().names, vec!["X0", "X1"]);
        assert_eq!(e.coord_ring().degrees, vec![1, 1]);
    }

    #[test]
    fn generator_degrees_are_powers_of_p() {
        for p in [2, 3, 5] {
            let groups = [
                GroupScheme::additive_kernel(p, 3).unwrap(),
                GroupScheme::multi_additive(p, 3).unwrap(),
                GroupScheme::sl2(p).unwrap(),
                GroupScheme::sl2_height2(p).unwrap(),
                GroupScheme::gl_height2(p, 2).unwrap(),
            ];
            for g in groups {
                let ring = g.coord_ring();
                for d in &ring.degrees {
                    let mut x = *d;
                    while x % p == 0 {
                        x /= p;
                    }
                    assert_eq!(x, 1, "{} degree {d}", g.name());
                }
                for rel in &ring.relations {
                    assert!(matches!(ring.homogeneous_degree(rel), Homogeneity::Degree(_)));
                }
            }
        }
    }

    #[test]
    fn generic_nullcone_relations_of_sl2() {
        // The generic p-th power of xe+yf+zh is (xy+z²)^{(p−1)/2}·(xe+yf+zh).
        for p in [3u32, 5] {
            let k = Field::prime(p).unwrap();
            let alg = LieAlgebra::sl2(&k);
            let rels = alg.nullcone_relations(&k);
            assert_eq!(rels.len(), 3);
            let (x, y, z) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
            let q = x.mul(&k, &y).add(&k, &z.pow(&k, 2)).pow(&k, (p - 1) / 2);
            assert_eq!(rels[0], q.mul(&k, &x));
            assert_eq!(rels[1], q.mul(&k, &y));
            assert_eq!(rels[2], q.mul(&k, &z));
            alg.validate(&k).unwrap();
        }
    }

    #[test]
    fn jacobson_matches_matrix_power() {
        let k = Field::prime(5).unwrap();
        let alg = LieAlgebra::sl2(&k);
        for c in all_tuples(5, 3).step_by(7) {
            let xp = alg.p_power_vec(&k, &c);
            let m = sl2_matrix(&k, c[0], c[1], c[2]).pow(&k, 5);
            assert_eq!(m, sl2_matrix(&k, xp[0], xp[1], xp[2]));
        }
    }

    #[test]
    fn point_validation() {
        let g = GroupScheme::sl2(3).unwrap();
        let k = g.field().clone();
        assert!(g.validate_point(&k, &[Fq(1), Fq(0), Fq(0)]).is_ok());
        assert!(matches!(
            g.validate_point(&k, &[Fq(1), Fq(1), Fq(0)]),
            Err(Error::InvalidPoint(_))
        ));
        let gl = GroupScheme::gl_height2(3, 2).unwrap();
        // (e, f) does not commute.
        let c = [0, 1, 0, 0, 0, 0, 1, 0].map(Fq);
        assert!(matches!(gl.validate_point(&k, &c), Err(Error::InvalidPoint(m)) if m.contains("alpha_0, alpha_1")));
    }

    #[test]
    fn enumeration_counts() {
        let g = GroupScheme::sl2(3).unwrap();
        let k = g.field().clone();
        assert_eq!(g.enumerate_points(&k, false).unwrap().len(), 8);
        let e = GroupScheme::multi_additive(2, 2).unwrap();
        assert_eq!(e.enumerate_points(e.field(), false).unwrap().len(), 3);
        let a = GroupScheme::additive_kernel(3, 2).unwrap();
        assert_eq!(a.enumerate_points(a.field(), false).unwrap().len(), 8);
        let f9 = Field::new(3, 2).unwrap();
        let small = g.enumerate_points(&k, true).unwrap();
        let big = g.enumerate_points(&f9, true).unwrap();
        assert!(small.iter().all(|pt| big.iter().any(|b| b.coords == pt.coords)));
    }

    #[test]
    fn frobenius_shift() {
        let g = GroupScheme::additive_kernel(3, 2).unwrap();
        let k = g.field().clone();
        let v = g.validate_point(&k, &[Fq(2), Fq(1)]).unwrap();
        assert_eq!(g.frobenius_point_map(1, &v).unwrap().coords, vec![Fq(0), Fq(2)]);
        assert_eq!(g.frobenius_point_map(0, &v).unwrap().coords, v.coords);
        let w = g.validate_point(&k, &[Fq(0), Fq(1)]).unwrap();
        assert_eq!(g.frobenius_point_map(1, &w).unwrap().coords, vec![Fq(0), Fq(0)]);
        assert!(g.frobenius_point_map(2, &v).is_err());
    }

    #[test]
    fn conic_chart() {
        let c = conic_chart_sl2(3).unwrap();
        let k = c.source.field.clone();
        let rel = &c.source.relations[0];
        assert!(c.apply(rel).unwrap().is_zero());
        assert_eq!(c.map_point(&k, &[Fq(1), Fq(0)]).unwrap(), vec![Fq(1), Fq(0), Fq(0)]);
        assert_eq!(c.map_point(&k, &[Fq(0), Fq(1)]).unwrap(), vec![Fq(0), Fq(2), Fq(0)]);
        assert!(conic_chart_sl2(2).is_err());
    }

    #[test]
    fn names_round_trip() {
        for name in ["u_sl2", "ga2", "ga1xga1", "ga1x4", "sl2_2", "gl2_2"] {
            let g = GroupScheme::from_name(name, 3).unwrap();
            assert_eq!(g.name(), name);
            let back = GroupScheme::from_json(&g.to_json(), None).unwrap();
            assert_eq!(back.name(), name);
        }
    }
}
