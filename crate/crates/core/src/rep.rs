//! Finite-dimensional modules given by action matrices of algebra generators,
//! constructors for standard examples, and direct-sum decomposition.
//!
//! Matrices act on column vectors: column `j` of `A_g` is `g·b_j`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{inverse, row_reduce, Field, FieldRef, Fq, Matrix, Subspace};
use crate::group::{
    gl_degree_p_monomials, Family, GroupRef, GroupScheme,
};
use crate::poly::{monomial_basis, Poly, PolyMatrix};

#[derive(Clone, Debug)]
pub struct ModuleRep {
    pub group: GroupRef,
    pub field: FieldRef,
    dim: usize,
    gens: Vec<String>,
    action: Vec<Matrix>,
}

impl PartialEq for ModuleRep {
    fn eq(&self, other: &Self) -> bool {
        self.group.name() == other.group.name()
            && *self.field == *other.field
            && self.action == other.action
    }
}

fn factorial_inv(field: &Field, n: u32) -> Fq {
    let mut f = Fq::ONE;
    for i in 2..=n {
        f = field.mul(f, field.from_int(i as i64));
    }
    field.inv(f).expect("factorials below p are units")
}

impl ModuleRep {
    /// Builds a module from one matrix per generator, in the order of `group.generators()`.
    pub fn new(group: GroupRef, field: FieldRef, action: Vec<Matrix>) -> Result<Self> {
        let gens = group.generators();
        if action.len() != gens.len() {
            return Err(Error::Dimension(format!(
                "{} action matrices for {} generators",
                action.len(),
                gens.len()
            )));
        }
        if field.p() != group.p() {
            return Err(Error::FieldMismatch("module field has the wrong characteristic".into()));
        }
        let dim = action.first().map_or(0, |a| a.rows());
        if action.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::Dimension("action matrices must be square of equal size".into()));
        }
        Ok(ModuleRep {
            group,
            field,
            dim,
            gens,
            action,
        })
    }

    /// Module over the prime field from named matrices; unnamed generators act by zero.
    pub fn from_named(group: GroupRef, dim: usize, named: &[(&str, Matrix)]) -> Result<Self> {
        let gens = group.generators();
        let mut action = vec![Matrix::zeros(dim, dim); gens.len()];
        for (name, m) in named {
            let i = gens
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator '{name}'")))?;
            action[i] = m.clone();
        }
        let field = group.field().clone();
        Self::new(group, field, action)
    }

    pub fn trivial(group: GroupRef, dim: usize) -> Self {
        let n = group.generators().len();
        let field = group.field().clone();
        Self::new(group, field, vec![Matrix::zeros(dim, dim); n]).expect("well-formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn action(&self, name: &str) -> Option<&Matrix> {
        self.gens.iter().position(|g| g == name).map(|i| &self.action[i])
    }

    fn act(&self, name: &str) -> &Matrix {
        self.action(name).expect("generator exists for this family")
    }

    /// `validate_module`: the first failing defining relation, if any.
    pub fn violation(&self) -> Option<String> {
        let k: &Field = &self.field;
        let p = k.p();
        match &self.group.family {
            Family::AdditiveKernel { .. } | Family::MultiAdditive { .. } => {
                for (i, a) in self.action.iter().enumerate() {
                    if !a.pow(k, p).is_zero() {
                        return Some(format!("nilpotency: {}^p ≠ 0", self.gens[i]));
                    }
                    for (j, b) in self.action.iter().enumerate().skip(i + 1) {
                        if !a.commutator(k, b).is_zero() {
                            return Some(format!("commutativity: [{}, {}] ≠ 0", self.gens[i], self.gens[j]));
                        }
                    }
                }
                None
            }
            Family::RestrictedLie(alg) => lie_violation(k, alg, &self.action),
            Family::Sl2Height2 => {
                let k1 = crate::group::LieAlgebra::sl2(k);
                let first = [self.act("e").clone(), self.act("f").clone(), self.act("h").clone()];
                if let Some(v) = lie_violation(k, &k1, &first) {
                    return Some(v);
                }
                for g in ["e(p)", "f(p)"] {
                    if !self.act(g).pow(k, p).is_zero() {
                        return Some(format!("nilpotency: {g}^p ≠ 0"));
                    }
                }
                None
            }
            Family::GlHeight2 { n } => {
                let n = *n as usize;
                let e = |i: usize, j: usize| self.act(&format!("E{}{}", i + 1, j + 1));
                for i in 0..n {
                    for j in 0..n {
                        let pw = e(i, j).pow(k, p);
                        let want = if i == j { e(i, j).clone() } else { Matrix::zeros(self.dim, self.dim) };
                        if pw != want {
                            return Some(format!("restriction: E{}{}^p", i + 1, j + 1));
                        }
                        for a in 0..n {
                            for b in 0..n {
                                let lhs = e(i, j).commutator(k, e(a, b));
                                let mut rhs = Matrix::zeros(self.dim, self.dim);
                                if j == a {
                                    rhs = rhs.add(k, e(i, b));
                                }
                                if b == i {
                                    rhs = rhs.sub(k, e(a, j));
                                }
                                if lhs != rhs {
                                    return Some(format!(
                                        "gl_n bracket [E{}{}, E{}{}]",
                                        i + 1,
                                        j + 1,
                                        a + 1,
                                        b + 1
                                    ));
                                }
                            }
                        }
                    }
                }
                None
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.violation() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidModule(v)),
        }
    }

    fn with_actions(&self, dim: usize, action: Vec<Matrix>) -> Self {
        ModuleRep {
            group: self.group.clone(),
            field: self.field.clone(),
            dim,
            gens: self.gens.clone(),
            action,
        }
    }

    fn primitive(&self) -> bool {
        matches!(
            self.group.family,
            Family::MultiAdditive { .. } | Family::RestrictedLie(_) | Family::AdditiveKernel { r: 1 }
        )
    }

    /// `dual_module`: generator `g` acts by `−A_gᵀ`.
    pub fn dual(&self) -> Result<Self> {
        match self.group.family {
            Family::AdditiveKernel { .. } | Family::MultiAdditive { .. } | Family::RestrictedLie(_) => {}
            _ => return Err(Error::Unsupported("duals need an additive or Lie family".into())),
        }
        let k: &Field = &self.field;
        Ok(self.with_actions(self.dim, self.action.iter().map(|a| a.transpose().neg(k)).collect()))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| Matrix::block_diag(&[a, b]))
            .collect();
        Ok(self.with_actions(self.dim + other.dim, action))
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.gens != other.gens || self.group.name() != other.group.name() {
            return Err(Error::Unsupported("modules over different algebras".into()));
        }
        if *self.field != *other.field {
            return Err(Error::FieldMismatch("modules over different fields".into()));
        }
        Ok(())
    }

    /// `tensor_module`: primitive generators act by `A⊗1 + 1⊗B`; for `G_a(r)` the
    /// generator `u_ℓ` uses the coproduct `Δ(v_n) = Σ_{a+b=n} v_a ⊗ v_b` with `n = p^ℓ`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let k: &Field = &self.field;
        let (i1, i2) = (Matrix::identity(self.dim), Matrix::identity(other.dim));
        if self.primitive() {
            let action = self
                .action
                .iter()
                .zip(&other.action)
                .map(|(a, b)| a.kron(k, &i2).add(k, &i1.kron(k, b)))
                .collect();
            return Ok(self.with_actions(self.dim * other.dim, action));
        }
        match self.group.family {
            Family::AdditiveKernel { r } => {
                let p = k.p();
                let action = (0..r)
                    .map(|l| {
                        let n = p.pow(l);
                        let mut acc = Matrix::zeros(self.dim * other.dim, self.dim * other.dim);
                        for a in 0..=n {
                            let va = self.divided_monomial(a);
                            let vb = other.divided_monomial(n - a);
                            acc = acc.add(k, &va.kron(k, &vb));
                        }
                        acc
                    })
                    .collect();
                Ok(self.with_actions(self.dim * other.dim, action))
            }
            _ => Err(Error::Unsupported("tensor products need a Hopf structure on the generators".into())),
        }
    }

    /// `v_a = Π_ℓ A_{u_ℓ}^{j_ℓ} / j_ℓ!` for the base-p digits `j` of `a` (additive families).
    pub fn divided_monomial(&self, a: u32) -> Matrix {
        let k: &Field = &self.field;
        let p = k.p();
        let mut m = Matrix::identity(self.dim);
        let mut x = a;
        let mut l = 0;
        while x > 0 {
            let j = x % p;
            if j > 0 {
                if l >= self.action.len() {
                    return Matrix::zeros(self.dim, self.dim);
                }
                m = m.mul(k, &self.action[l].pow(k, j)).scale(k, factorial_inv(k, j));
            }
            x /= p;
            l += 1;
        }
        m
    }

    /// `submodule_generated`: closes the span under all generators; basis is the reduced echelon basis.
    pub fn submodule_generated(&self, vectors: &[Vec<Fq>]) -> Result<(Self, Subspace)> {
        let k: &Field = &self.field;
        if vectors.iter().any(|v| v.len() != self.dim) {
            return Err(Error::Dimension("vector length differs from module dimension".into()));
        }
        let mut span = Subspace::span(k, self.dim, vectors);
        loop {
            let basis = span.basis();
            let mut new = basis.clone();
            for b in &basis {
                for a in &self.action {
                    let w = a.mul_vec(k, b);
                    if !span.contains(k, &w) {
                        new.push(w);
                    }
                }
            }
            if new.len() == basis.len() {
                break;
            }
            span = Subspace::span(k, self.dim, &new);
        }
        let sub = self.restrict_to(&span);
        Ok((sub, span))
    }

    /// Action on an invariant subspace in its echelon basis.
    pub fn restrict_to(&self, span: &Subspace) -> Self {
        let k: &Field = &self.field;
        let basis = span.basis();
        let pivots: Vec<usize> = basis
            .iter()
            .map(|b| b.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero"))
            .collect();
        let d = basis.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut m = Matrix::zeros(d, d);
                for (j, b) in basis.iter().enumerate() {
                    let w = a.mul_vec(k, b);
                    for (i, &pc) in pivots.iter().enumerate() {
                        m.set(i, j, w[pc]);
                    }
                }
                m
            })
            .collect();
        self.with_actions(d, action)
    }

    /// Quotient by the submodule generated by `vectors`; the basis is the images of the
    /// standard basis vectors at non-pivot positions.
    pub fn quotient_by(&self, vectors: &[Vec<Fq>]) -> Result<Self> {
        let k: &Field = &self.field;
        let (_, span) = self.submodule_generated(vectors)?;
        let basis = span.basis();
        let pivots: Vec<usize> = basis
            .iter()
            .map(|b| b.iter().position(|x| !x.is_zero()).expect("nonzero"))
            .collect();
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let reduce = |mut w: Vec<Fq>| {
            for (b, &pc) in basis.iter().zip(&pivots) {
                let c = w[pc];
                if !c.is_zero() {
                    k.axpy(&mut w, b, k.neg(c));
                }
            }
            w
        };
        let d = free.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut m = Matrix::zeros(d, d);
                for (j, &c) in free.iter().enumerate() {
                    let w = reduce(a.column(c));
                    for (i, &r) in free.iter().enumerate() {
                        m.set(i, j, w[r]);
                    }
                }
                m
            })
            .collect();
        Ok(self.with_actions(d, action))
    }

    /// Change of basis: the module acting on the columns of `p` (assumed invertible).
    pub fn conjugate(&self, p: &Matrix) -> Result<Self> {
        let k: &Field = &self.field;
        let pi = inverse(k, p).ok_or_else(|| Error::Dimension("basis change is singular".into()))?;
        Ok(self.with_actions(self.dim, self.action.iter().map(|a| pi.mul(k, &a.mul(k, p))).collect()))
    }

    /// The same matrices read over a larger field; only allowed from the prime field.
    pub fn extend_scalars(&self, field: &FieldRef) -> Result<Self> {
        if **field == *self.field {
            return Ok(self.clone());
        }
        if !self.field.is_prime_field() || field.p() != self.field.p() {
            return Err(Error::FieldMismatch("scalars extend only from the prime field".into()));
        }
        Ok(ModuleRep {
            field: field.clone(),
            ..self.clone()
        })
    }

    /// `symmetric_power`: primitive generators act as derivations on degree-d monomials.
    pub fn symmetric_power(&self, d: u32) -> Result<Self> {
        if !self.primitive() {
            return Err(Error::Unsupported("symmetric powers need primitive generators".into()));
        }
        let k: &Field = &self.field;
        let basis = monomial_basis(&vec![1; self.dim], d as u64);
        let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let n = basis.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut m = Matrix::zeros(n, n);
                for (col, mono) in basis.iter().enumerate() {
                    // g(x^mono) = Σ_i mono_i x^{mono - e_i} g(x_i)
                    for i in 0..self.dim {
                        if mono[i] == 0 {
                            continue;
                        }
                        let mult = k.from_int(mono[i] as i64);
                        for r in 0..self.dim {
                            let c = a.get(r, i);
                            if c.is_zero() {
                                continue;
                            }
                            let mut target = mono.clone();
                            target[i] -= 1;
                            target[r] += 1;
                            let row = index[&target];
                            let v = k.add(m.get(row, col), k.mul(mult, c));
                            m.set(row, col, v);
                        }
                    }
                }
                m
            })
            .collect();
        Ok(self.with_actions(n, action))
    }

    /// `frobenius_twist_gar`: `u_i` acts as `u_{i-s}` did (entries raised to `p^s`), and `u_i`, `i < s`, by 0.
    pub fn frobenius_twist(&self, s: u32) -> Result<Self> {
        let Family::AdditiveKernel { r } = self.group.family else {
            return Err(Error::Unsupported("Frobenius twists are defined here for G_a(r)".into()));
        };
        if s >= r {
            return Err(Error::Parse(format!("twist {s} must be below the height {r}")));
        }
        let k: &Field = &self.field;
        let e = (k.p() as u64).pow(s);
        let action = (0..r as usize)
            .map(|i| {
                if i < s as usize {
                    Matrix::zeros(self.dim, self.dim)
                } else {
                    self.action[i - s as usize].map(|x| k.pow(x, e))
                }
            })
            .collect();
        Ok(self.with_actions(self.dim, action))
    }

    /// Basis of the invariants `{m : g·m = 0 for all generators}`.
    pub fn invariants(&self) -> Subspace {
        let k: &Field = &self.field;
        let stacked = Matrix::vstack(&self.action);
        Subspace::kernel_of(k, &stacked)
    }

    pub fn to_json(&self) -> Value {
        let k: &Field = &self.field;
        let mut action = Map::new();
        for (g, a) in self.gens.iter().zip(&self.action) {
            let rows: Vec<Value> = (0..a.rows())
                .map(|i| Value::Array(a.row(i).iter().map(|&x| k.to_json(x)).collect()))
                .collect();
            action.insert(g.clone(), Value::Array(rows));
        }
        let mut v = json!({"algebra": self.group.to_json(), "dim": self.dim, "action": action});
        if !k.is_prime_field() {
            v["field"] = k.descriptor_json();
        }
        v
    }

    /// Reads `{"algebra":{…},"dim":n,"action":{"g":[[…]],…}}`; every generator must be present.
    pub fn from_json(v: &Value, p_default: Option<u32>) -> Result<Self> {
        let alg = v.get("algebra").ok_or_else(|| Error::Parse("module needs an algebra".into()))?;
        let group = GroupScheme::from_json(alg, p_default)?;
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("module needs a dimension".into()))? as usize;
        let field = match v.get("field") {
            Some(f) => {
                let e = f.get("e").and_then(Value::as_u64).unwrap_or(1) as u32;
                Field::new(group.p(), e)?
            }
            None => group.field().clone(),
        };
        let action_obj = v
            .get("action")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("module needs an action object".into()))?;
        let gens = group.generators();
        if let Some(extra) = action_obj.keys().find(|key| !gens.contains(key)) {
            return Err(Error::Parse(format!("unknown generator '{extra}'")));
        }
        let mut action = Vec::new();
        for g in &gens {
            let rows = action_obj
                .get(g)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing action matrix for '{g}'")))?;
            if rows.len() != dim {
                return Err(Error::Dimension(format!("matrix for '{g}' has {} rows, expected {dim}", rows.len())));
            }
            let mut m = Matrix::zeros(dim, dim);
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == dim)
                    .ok_or_else(|| Error::Dimension(format!("row {i} of '{g}' must have {dim} entries")))?;
                for (j, x) in row.iter().enumerate() {
                    m.set(i, j, field.from_json(x)?);
                }
            }
            action.push(m);
        }
        let m = Self::new(group, field, action)?;
        m.validate()?;
        Ok(m)
    }
}

fn lie_violation(k: &Field, alg: &crate::group::LieAlgebra, action: &[Matrix]) -> Option<String> {
    let n = alg.dim();
    let p = k.p();
    let dim = action.first().map_or(0, |a| a.rows());
    let combo = |v: &[Fq]| {
        let mut m = Matrix::zeros(dim, dim);
        for (i, &c) in v.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(k, &action[i].scale(k, c));
            }
        }
        m
    };
    for i in 0..n {
        for j in i + 1..n {
            if action[i].commutator(k, &action[j]) != combo(&alg.bracket[i][j]) {
                return Some(format!("bracket [{}, {}]", alg.basis[i], alg.basis[j]));
            }
        }
        if action[i].pow(k, p) != combo(&alg.ppower[i]) {
            return Some(format!("p-power of {}", alg.basis[i]));
        }
    }
    None
}

fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, Fq::ONE);
    m
}

/// The regular module `kG` for `G = G_{a(1)}^{×r}` or `G_{a(r)}`: basis `u^a`, `0 ≤ a_i < p`,
/// ordered as base-p numbers with `a_0` most significant (see [`regular_index`]).
pub fn regular_module(group: &GroupRef) -> Result<ModuleRep> {
    let r = match group.family {
        Family::MultiAdditive { r } | Family::AdditiveKernel { r } => r as usize,
        _ => return Err(Error::Unsupported("regular module is built for additive families".into())),
    };
    let p = group.p();
    let basis: Vec<Vec<u32>> = crate::group::all_tuples(p, r)
        .map(|c| c.iter().map(|x| x.0).collect())
        .collect();
    let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = basis.len();
    let action = (0..r)
        .map(|g| {
            let mut m = Matrix::zeros(n, n);
            for (col, mono) in basis.iter().enumerate() {
                if mono[g] + 1 < p {
                    let mut t = mono.clone();
                    t[g] += 1;
                    m.set(index[&t], col, Fq::ONE);
                }
            }
            m
        })
        .collect();
    ModuleRep::new(group.clone(), group.field().clone(), action)
}

/// Index of the basis monomial `u^mono` in [`regular_module`].
pub fn regular_index(p: u32, mono: &[u32]) -> usize {
    mono.iter().fold(0usize, |acc, &a| acc * p as usize + a as usize)
}

/// `construct_zigzag`: basis `v_0..v_n, b_1..b_n` with `u_1·v_i = b_{i+1}` (i < n) and `u_0·v_i = b_i` (i ≥ 1).
pub fn zigzag(group: &GroupRef, n: usize) -> Result<ModuleRep> {
    if !matches!(group.family, Family::MultiAdditive { r: 2 }) {
        return Err(Error::Unsupported("zig-zag modules live over G_a(1)×G_a(1)".into()));
    }
    if n == 0 {
        return Err(Error::Parse("zig-zag length must be at least 1".into()));
    }
    let d = 2 * n + 1;
    let v = |i: usize| i;
    let b = |i: usize| n + i; // b_1 is index n+1
    let mut x = Matrix::zeros(d, d);
    let mut y = Matrix::zeros(d, d);
    for i in 0..=n {
        if i >= 1 {
            x.set(b(i), v(i), Fq::ONE);
        }
        if i < n {
            y.set(b(i + 1), v(i), Fq::ONE);
        }
    }
    ModuleRep::from_named(group.clone(), d, &[("u0", x), ("u1", y)])
}

/// `construct_weyl_sl2`: `h v_i = (2i−m)v_i`, `f v_i = (m−i+1)v_{i−1}`, `e v_i = (i+1)v_{i+1}`.
pub fn weyl_sl2(group: &GroupRef, m: usize) -> Result<ModuleRep> {
    if !group.is_sl2() {
        return Err(Error::Unsupported("Weyl modules are built for sl2".into()));
    }
    let k = group.field().clone();
    let d = m + 1;
    let mut e = Matrix::zeros(d, d);
    let mut f = Matrix::zeros(d, d);
    let mut h = Matrix::zeros(d, d);
    for i in 0..d {
        h.set(i, i, k.from_int(2 * i as i64 - m as i64));
        if i >= 1 {
            f.set(i - 1, i, k.from_int((m - i + 1) as i64));
        }
        if i + 1 < d {
            e.set(i + 1, i, k.from_int(i as i64 + 1));
        }
    }
    ModuleRep::from_named(group.clone(), d, &[("e", e), ("f", f), ("h", h)])
}

/// The adjoint representation of a restricted Lie algebra.
pub fn adjoint(group: &GroupRef) -> Result<ModuleRep> {
    let Family::RestrictedLie(alg) = &group.family else {
        return Err(Error::Unsupported("adjoint module needs a Lie algebra".into()));
    };
    let k = group.field().clone();
    let n = alg.dim();
    let action = (0..n)
        .map(|i| {
            let mut unit = vec![Fq::ZERO; n];
            unit[i] = Fq::ONE;
            let cols: Vec<Vec<Fq>> = (0..n)
                .map(|j| {
                    let mut ej = vec![Fq::ZERO; n];
                    ej[j] = Fq::ONE;
                    alg.bracket_vec(&k, &unit, &ej)
                })
                .collect();
            Matrix::from_columns(n, &cols)
        })
        .collect();
    ModuleRep::new(group.clone(), k, action)
}

/// `construct_syzygy_E2`: the submodule of `(kE)^n` generated by the standard generators of `Ω^n k`.
pub fn syzygy_e2(group: &GroupRef, n: usize) -> Result<ModuleRep> {
    if !matches!(group.family, Family::MultiAdditive { r: 2 }) {
        return Err(Error::Unsupported("syzygies are built over G_a(1)×G_a(1)".into()));
    }
    if n == 0 {
        return Err(Error::Parse("syzygy degree must be at least 1".into()));
    }
    let p = group.p();
    let k = group.field().clone();
    let reg = regular_module(group)?;
    let mut free = reg.clone();
    for _ in 1..n {
        free = free.direct_sum(&reg)?;
    }
    let block = (p * p) as usize;
    let dim = n * block;
    // Element c·x^a y^b placed in the free summand `slot` (0-based).
    let term = |v: &mut Vec<Fq>, slot: usize, a: u32, b: u32, c: i64| {
        let idx = slot * block + regular_index(p, &[a, b]);
        v[idx] = k.add(v[idx], k.from_int(c));
    };
    let mut gens = Vec::new();
    let (lo, hi) = (1u32, p - 1); // exponents 1 and p−1
    let even = n.is_multiple_of(2);
    let mut first = vec![Fq::ZERO; dim];
    term(&mut first, 0, if even { hi } else { lo }, 0, 1);
    gens.push(first);
    for i in 1..n {
        // Connects a_i and a_{i+1}: y^? a_i − x^? a_{i+1}.
        let odd_i = i % 2 == 1;
        let (ey, ex) = match (even, odd_i) {
            (true, true) => (lo, lo),
            (true, false) => (hi, hi),
            (false, true) => (lo, hi),
            (false, false) => (hi, lo),
        };
        let mut g = vec![Fq::ZERO; dim];
        term(&mut g, i - 1, 0, ey, 1);
        term(&mut g, i, ex, 0, -1);
        gens.push(g);
    }
    let mut last = vec![Fq::ZERO; dim];
    term(&mut last, n - 1, 0, if even { hi } else { lo }, 1);
    gens.push(last);
    Ok(free.submodule_generated(&gens)?.0)
}

/// The three-dimensional `G_a(2)`-module with `u_0 m_1 = m_2`, `u_1 m_1 = m_3`.
pub fn duals_example(group: &GroupRef) -> Result<ModuleRep> {
    if !matches!(group.family, Family::AdditiveKernel { r: 2 }) {
        return Err(Error::Unsupported("this example lives over G_a(2)".into()));
    }
    let (u0, u1) = (elementary(3, 1, 0), elementary(3, 2, 0));
    ModuleRep::from_named(group.clone(), 3, &[("u0", u0), ("u1", u1)])
}

/// Its dual drawn directly: `u_1 n_1 = n_3`, `u_0 n_2 = n_3`.
pub fn duals_example_dual(group: &GroupRef) -> Result<ModuleRep> {
    if !matches!(group.family, Family::AdditiveKernel { r: 2 }) {
        return Err(Error::Unsupported("this example lives over G_a(2)".into()));
    }
    let (u0, u1) = (elementary(3, 2, 1), elementary(3, 2, 0));
    ModuleRep::from_named(group.clone(), 3, &[("u0", u0), ("u1", u1)])
}

/// The natural two-dimensional `SL_{2(2)}`-module; all divided-power generators act by 0.
pub fn sl2_height2_natural(group: &GroupRef) -> Result<ModuleRep> {
    if !matches!(group.family, Family::Sl2Height2) {
        return Err(Error::Unsupported("expected SL2 of height 2".into()));
    }
    let k = group.field().clone();
    let e = elementary(2, 0, 1);
    let f = elementary(2, 1, 0);
    let mut h = Matrix::zeros(2, 2);
    h.set(0, 0, Fq::ONE);
    h.set(1, 1, k.from_int(-1));
    ModuleRep::from_named(group.clone(), 2, &[("e", e), ("f", f), ("h", h)])
}

/// Polynomial `GL_n`-modules restricted to `GL_{n(2)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlPolynomial {
    Natural,
    Tensor(u32),
    Symmetric(u32),
}

/// Builds `V`, `V^{⊗d}` or `S^d V` by reading off the `T^p` coefficient of the action of
/// `exp(α_0 T)·exp(α_1 T^p)`; the `α_1`-linear part gives the `E_ij`, the rest the `D[m]`.
pub fn gl_polynomial_module(group: &GroupRef, kind: GlPolynomial) -> Result<ModuleRep> {
    let Family::GlHeight2 { n } = group.family else {
        return Err(Error::Unsupported("expected GL_n of height 2".into()));
    };
    let n = n as usize;
    let k = group.field().clone();
    let p = k.p();
    let nn = n * n;
    // Variables: α_0 entries, α_1 entries, then T.
    let nv = 2 * nn + 1;
    let tvar = 2 * nn;
    let trunc = |f: &Poly| Poly::from_terms(nv, &k, f.terms().filter(|(e, _)| e[tvar] <= p).map(|(e, c)| (e.clone(), c)));
    let mat = |l: usize| PolyMatrix::from_fn(n, n, nv, |i, j| Poly::var(nv, l * nn + i * n + j));
    let tpow = |d: u32| Poly::var(nv, tvar).pow(&k, d);
    let scalar_mat = |f: &Poly| PolyMatrix::from_fn(n, n, nv, |i, j| if i == j { f.clone() } else { Poly::zero(nv) });
    let madd = |a: &PolyMatrix, b: &PolyMatrix| PolyMatrix::from_fn(n, n, nv, |i, j| a.get(i, j).add(&k, b.get(i, j)));
    let mscale = |a: &PolyMatrix, f: &Poly| PolyMatrix::from_fn(a.rows(), a.cols(), nv, |i, j| trunc(&a.get(i, j).mul(&k, f)));
    // exp(α_0 T) truncated below T^p, times (1 + α_1 T^p).
    let a0 = mat(0);
    let mut g = scalar_mat(&Poly::one(nv));
    let mut pw = scalar_mat(&Poly::one(nv));
    for a in 1..p {
        pw = pw.mul(&k, &a0);
        let c = Poly::constant(nv, factorial_inv(&k, a)).mul(&k, &tpow(a));
        g = madd(&g, &mscale(&pw, &c));
    }
    let g = {
        let corr = mscale(&mat(1), &tpow(p));
        let prod = g.mul(&k, &madd(&scalar_mat(&Poly::one(nv)), &corr));
        PolyMatrix::from_fn(n, n, nv, |i, j| trunc(prod.get(i, j)))
    };
    let rho: PolyMatrix = match kind {
        GlPolynomial::Natural => g.clone(),
        GlPolynomial::Tensor(d) => {
            if d == 0 {
                return Err(Error::Parse("tensor power needs d ≥ 1".into()));
            }
            let mut acc = g.clone();
            for _ in 1..d {
                acc = poly_kron(&k, &acc, &g, &trunc);
            }
            acc
        }
        GlPolynomial::Symmetric(d) => {
            if d == 0 {
                return Err(Error::Parse("symmetric power needs d ≥ 1".into()));
            }
            poly_symmetric_power(&k, &g, d, &trunc)
        }
    };
    let dim = rho.rows();
    // Coefficient of T^p.
    let mut e_mats = vec![Matrix::zeros(dim, dim); nn];
    let monos = gl_degree_p_monomials(n, p);
    let mut d_mats: BTreeMap<Vec<u32>, Matrix> = monos.iter().map(|m| (m.clone(), Matrix::zeros(dim, dim))).collect();
    for i in 0..dim {
        for j in 0..dim {
            for (e, c) in rho.get(i, j).terms() {
                if e[tvar] != p {
                    continue;
                }
                let a1_deg: u32 = e[nn..2 * nn].iter().sum();
                if a1_deg == 1 {
                    let idx = (nn..2 * nn).find(|&t| e[t] == 1).expect("one α_1 entry") - nn;
                    e_mats[idx].set(i, j, c);
                } else if a1_deg == 0 {
                    let m = e[..nn].to_vec();
                    d_mats
                        .get_mut(&m)
                        .ok_or_else(|| Error::Dimension("unexpected monomial in θ".into()))?
                        .set(i, j, c);
                } else {
                    return Err(Error::Dimension("θ has a term of higher α_1 degree".into()));
                }
            }
        }
    }
    let mut action = e_mats;
    action.extend(monos.iter().map(|m| d_mats.remove(m).expect("listed monomial")));
    let module = ModuleRep::new(group.clone(), k, action)?;
    module.validate()?;
    Ok(module)
}

fn poly_kron(k: &Field, a: &PolyMatrix, b: &PolyMatrix, trunc: &dyn Fn(&Poly) -> Poly) -> PolyMatrix {
    PolyMatrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), a.nvars(), |r, c| {
        let (i, kk) = (r / b.rows(), r % b.rows());
        let (j, l) = (c / b.cols(), c % b.cols());
        trunc(&a.get(i, j).mul(k, b.get(kk, l)))
    })
}

fn poly_symmetric_power(k: &Field, g: &PolyMatrix, d: u32, trunc: &dyn Fn(&Poly) -> Poly) -> PolyMatrix {
    let n = g.rows();
    let nv = g.nvars();
    let basis = monomial_basis(&vec![1; n], d as u64);
    let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = PolyMatrix::zeros(basis.len(), basis.len(), nv);
    for (col, mono) in basis.iter().enumerate() {
        // Π_j (Σ_i g_ij x_i)^{mono_j}, expanded as a map from monomials in x to coefficients.
        let mut acc: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        acc.insert(vec![0; n], Poly::one(nv));
        for j in 0..n {
            for _ in 0..mono[j] {
                let mut next: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
                for (m, c) in &acc {
                    for i in 0..n {
                        let gij = g.get(i, j);
                        if gij.is_zero() {
                            continue;
                        }
                        let mut m2 = m.clone();
                        m2[i] += 1;
                        let term = trunc(&c.mul(k, gij));
                        next.entry(m2).or_insert_with(|| Poly::zero(nv)).add_assign(k, &term);
                    }
                }
                acc = next;
            }
        }
        for (m, c) in acc {
            if !c.is_zero() {
                out.set(index[&m], col, c);
            }
        }
    }
    out
}

/// An indecomposable summand with its embedding into the original module.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: ModuleRep,
    /// Columns span the summand inside the ambient module.
    pub inclusion: Matrix,
}

/// Outcome of [`decompose_summands`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    /// Field over which the splitting was found.
    pub field: FieldRef,
    pub seed: u64,
    /// Every summand has a local endomorphism algebra (scalar + nilpotent).
    pub certified: bool,
}

/// Basis of `End_G(M)`, solving `X A_g = A_g X` for all generators.
pub fn endomorphism_basis(m: &ModuleRep) -> Vec<Matrix> {
    let k: &Field = &m.field;
    let n = m.dim();
    let gens: Vec<&Matrix> = m.actions().iter().filter(|a| !a.is_zero()).collect();
    if gens.is_empty() {
        return (0..n * n).map(|t| elementary(n, t / n, t % n)).collect();
    }
    // Unknown X_{ab} at index a*n+b; equation (XA − AX)_{ij} = Σ_l X_il A_lj − A_il X_lj.
    let mut sys = Matrix::zeros(gens.len() * n * n, n * n);
    for (g, a) in gens.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = g * n * n + i * n + j;
                for l in 0..n {
                    let alj = a.get(l, j);
                    if !alj.is_zero() {
                        let c = sys.get(row, i * n + l);
                        sys.set(row, i * n + l, k.add(c, alj));
                    }
                    let ail = a.get(i, l);
                    if !ail.is_zero() {
                        let c = sys.get(row, l * n + j);
                        sys.set(row, l * n + j, k.sub(c, ail));
                    }
                }
            }
        }
    }
    row_reduce(k, &sys)
        .kernel
        .into_iter()
        .map(|v| Matrix::from_fn(n, n, |i, j| v[i * n + j]))
        .collect()
}

/// Whether `End` is local: each basis element is `λ + nilpotent` and the nilpotent parts
/// span a nilpotent ideal.
pub fn endomorphisms_local(k: &Field, basis: &[Matrix], n: usize) -> bool {
    let mut nil = Vec::new();
    for b in basis {
        let Some(lambda) = single_eigenvalue(k, b, n) else {
            return false;
        };
        let shifted = b.sub(k, &Matrix::identity(n).scale(k, lambda));
        if !shifted.is_zero() {
            nil.push(shifted);
        }
    }
    // Powers of the span must reach zero within n steps.
    let flat = |ms: &[Matrix]| Subspace::span(k, n * n, &ms.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>());
    let base = flat(&nil);
    let mut cur = base.clone();
    for _ in 0..=n {
        if cur.dim() == 0 {
            return true;
        }
        let mut prods = Vec::new();
        for x in cur.basis() {
            let xm = Matrix::from_fn(n, n, |i, j| x[i * n + j]);
            for y in &nil {
                prods.push(xm.mul(k, y));
            }
        }
        let next = flat(&prods);
        if !base.contains_subspace(k, &next) {
            return false;
        }
        cur = next;
    }
    cur.dim() == 0
}

fn single_eigenvalue(k: &Field, b: &Matrix, n: usize) -> Option<Fq> {
    // Trace/n is the only candidate when n is a unit; otherwise search.
    let els = k.elements().ok()?;
    els.into_iter().find(|&l| {
        let s = b.sub(k, &Matrix::identity(n).scale(k, l));
        s.pow(k, n as u32).is_zero()
    })
}

fn random_endomorphism(k: &Field, basis: &[Matrix], n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut phi = Matrix::zeros(n, n);
    for b in basis {
        let c = Fq(rng.gen_range(0..k.order()));
        phi = phi.add(k, &b.scale(k, c));
    }
    phi
}

/// Splits by a Fitting decomposition of `φ − λ`; returns `(kernel part, image part)` bases.
fn fitting_split(k: &Field, phi: &Matrix, n: usize) -> Option<(Vec<Vec<Fq>>, Vec<Vec<Fq>>)> {
    for l in k.elements().ok()? {
        let s = phi.sub(k, &Matrix::identity(n).scale(k, l));
        let sn = s.pow(k, n as u32);
        let ech = row_reduce(k, &sn);
        if ech.rank > 0 && ech.rank < n {
            let ker = ech.kernel.clone();
            let img = Subspace::image_of(k, &sn).basis();
            return Some((ker, img));
        }
    }
    None
}

const SPLIT_ATTEMPTS: usize = 24;

fn decompose_rec(m: &ModuleRep, rng: &mut ChaCha8Rng, out: &mut Vec<Summand>, basis: Matrix) -> bool {
    let k: &Field = &m.field;
    let n = m.dim();
    if n <= 1 {
        out.push(Summand {
            module: m.clone(),
            inclusion: basis,
        });
        return true;
    }
    let end = endomorphism_basis(m);
    if end.len() == 1 || endomorphisms_local(k, &end, n) {
        out.push(Summand {
            module: m.clone(),
            inclusion: basis,
        });
        return true;
    }
    for _ in 0..SPLIT_ATTEMPTS {
        let phi = random_endomorphism(k, &end, n, rng);
        if let Some((ker, img)) = fitting_split(k, &phi, n) {
            let cols: Vec<Vec<Fq>> = ker.iter().chain(img.iter()).cloned().collect();
            let p = Matrix::from_columns(n, &cols);
            let conj = m.conjugate(&p).expect("Fitting decomposition is a direct sum");
            let kd = ker.len();
            let part = |lo: usize, hi: usize| {
                let idx: Vec<usize> = (lo..hi).collect();
                let action = conj.actions().iter().map(|a| a.submatrix(&idx, &idx)).collect();
                let sub = conj.with_actions(hi - lo, action);
                let inc = basis.mul(k, &p.submatrix(&(0..n).collect::<Vec<_>>(), &idx));
                (sub, inc)
            };
            let (m1, i1) = part(0, kd);
            let (m2, i2) = part(kd, n);
            let c1 = decompose_rec(&m1, rng, out, i1);
            let c2 = decompose_rec(&m2, rng, out, i2);
            return c1 && c2;
        }
    }
    out.push(Summand {
        module: m.clone(),
        inclusion: basis,
    });
    false
}

/// `decompose_summands`: seeded MeatAxe-style splitting into indecomposables. When some
/// piece cannot be certified over the module field, the computation is repeated over
/// `F_{p^e}` for growing `e`.
pub fn decompose_summands(m: &ModuleRep, seed: u64) -> Result<Decomposition> {
    let mut last = None;
    let start = m.field.degree();
    for e in start..=4 {
        let field = if e == start { m.field.clone() } else { Field::new(m.field.p(), e)? };
        let mm = m.extend_scalars(&field)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        let ok = decompose_rec(&mm, &mut rng, &mut out, Matrix::identity(m.dim()));
        out.sort_by(|a, b| b.module.dim().cmp(&a.module.dim()));
        let d = Decomposition {
            summands: out,
            field,
            seed,
            certified: ok,
        };
        if ok {
            return Ok(d);
        }
        last = Some(d);
        if !m.field.is_prime_field() {
            break;
        }
    }
    last.ok_or_else(|| Error::Decomposition("no decomposition attempt ran".into()))
}

/// Whether some nonzero `v` spans a copy of `S_λ`: `e v = 0`, `h v = λ v`, `f^{λ+1} v = 0`.
pub fn contains_simple_sl2(m: &ModuleRep, lambda: u32) -> bool {
    let k: &Field = &m.field;
    let n = m.dim();
    let (e, f, h) = (m.act("e"), m.act("f"), m.act("h"));
    let shifted = h.sub(k, &Matrix::identity(n).scale(k, k.from_int(lambda as i64)));
    let sys = Matrix::vstack(&[e.clone(), shifted, f.pow(k, lambda + 1)]);
    row_reduce(k, &sys).rank < n
}

/// `principal_indecomposable_sl2`: `P_λ` as the `2p`-dimensional summand of `St ⊗ V_{p−1−λ}`
/// containing `S_λ` (the Steinberg module itself when `λ = p − 1`).
pub fn principal_indecomposable_sl2(group: &GroupRef, lambda: u32, seed: u64) -> Result<ModuleRep> {
    let p = group.p();
    if lambda >= p {
        return Err(Error::Parse(format!("λ = {lambda} must be below p = {p}")));
    }
    let st = weyl_sl2(group, (p - 1) as usize)?;
    if lambda == p - 1 {
        return Ok(st);
    }
    let v = weyl_sl2(group, (p - 1 - lambda) as usize)?;
    let t = st.tensor(&v)?;
    let dec = decompose_summands(&t, seed)?;
    let found = dec
        .summands
        .into_iter()
        .map(|s| s.module)
        .find(|s| s.dim() == 2 * p as usize && s.field.is_prime_field() && contains_simple_sl2(s, lambda));
    let pm = found.ok_or_else(|| {
        Error::Decomposition(format!("no {}-dimensional summand containing S_{lambda}", 2 * p))
    })?;
    if !crate::theta::is_projective_by_scan(&pm)? {
        return Err(Error::Decomposition(format!("summand for λ = {lambda} is not projective")));
    }
    Ok(pm)
}

/// `M₁ ⊠ M₂` over `G_a(1)^{r₁+r₂}`: the first `r₁` generators act on the left factor and
/// the rest on the right one.
pub fn external_product(m1: &ModuleRep, m2: &ModuleRep) -> Result<ModuleRep> {
    let (Family::MultiAdditive { r: r1 }, Family::MultiAdditive { r: r2 }) = (&m1.group.family, &m2.group.family)
    else {
        return Err(Error::Unsupported("external products are built for G_a(1)^r factors".into()));
    };
    if m1.field != m2.field {
        return Err(Error::FieldMismatch("factors are over different fields".into()));
    }
    let k: &Field = &m1.field;
    let group = GroupScheme::multi_additive(k.p(), r1 + r2)?;
    let (i1, i2) = (Matrix::identity(m1.dim), Matrix::identity(m2.dim));
    let action = m1
        .action
        .iter()
        .map(|a| a.kron(k, &i2))
        .chain(m2.action.iter().map(|b| i1.kron(k, b)))
        .collect();
    ModuleRep::new(group, m1.field.clone(), action)
}

/// Random modules for property tests: subquotients of sums of regular modules (additive
/// families) or of tensor products of Weyl modules (sl2).
pub fn random_module(group: &GroupRef, rng: &mut ChaCha8Rng, max_dim: usize) -> Result<ModuleRep> {
    let k = group.field().clone();
    let ambient = match &group.family {
        Family::MultiAdditive { .. } | Family::AdditiveKernel { .. } => {
            let reg = regular_module(group)?;
            if reg.dim() * 2 <= max_dim.max(reg.dim()) && rng.gen_bool(0.5) {
                reg.direct_sum(&reg)?
            } else {
                reg
            }
        }
        Family::RestrictedLie(_) if group.is_sl2() => {
            let p = group.p() as usize;
            let a = rng.gen_range(0..p);
            let b = rng.gen_range(0..p);
            let m = weyl_sl2(group, a)?.tensor(&weyl_sl2(group, b)?)?;
            if m.dim() > max_dim {
                weyl_sl2(group, rng.gen_range(0..2 * p - 1))?
            } else {
                m
            }
        }
        _ => return Err(Error::Unsupported("random modules for this family".into())),
    };
    let n = ambient.dim();
    let rand_vec = |rng: &mut ChaCha8Rng| (0..n).map(|_| Fq(rng.gen_range(0..k.order()))).collect::<Vec<_>>();
    let gens: Vec<Vec<Fq>> = (0..rng.gen_range(1..=2)).map(|_| rand_vec(rng)).collect();
    let (sub, _) = ambient.submodule_generated(&gens)?;
    if sub.dim() <= 1 {
        return Ok(sub);
    }
    let m = if rng.gen_bool(0.5) {
        let v = (0..sub.dim()).map(|_| Fq(rng.gen_range(0..k.order()))).collect::<Vec<_>>();
        sub.quotient_by(&[v])?
    } else {
        sub
    };
    if m.dim() > max_dim {
        return m.quotient_by(&[(0..m.dim()).map(|i| if i == 0 { Fq::ONE } else { Fq::ZERO }).collect()]);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_sl2_module_is_valid() {
        let g = GroupScheme::sl2(3).unwrap();
        let k = g.field().clone();
        let e = Matrix::from_ints(&k, &[&[0, 1], &[0, 0]]).unwrap();
        let f = Matrix::from_ints(&k, &[&[0, 0], &[1, 0]]).unwrap();
        let h = Matrix::from_ints(&k, &[&[1, 0], &[0, -1]]).unwrap();
        let m = ModuleRep::from_named(g.clone(), 2, &[("e", e), ("f", f), ("h", h)]).unwrap();
        assert!(m.violation().is_none());
        for mm in 0..6 {
            assert!(weyl_sl2(&g, mm).unwrap().violation().is_none(), "V_{mm}");
        }
    }

    #[test]
    fn violations_are_reported() {
        let g = GroupScheme::multi_additive(3, 2).unwrap();
        assert!(ModuleRep::trivial(g.clone(), 3).violation().is_none());
        let k = g.field().clone();
        let a = Matrix::from_ints(&k, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]).unwrap();
        let b = Matrix::from_ints(&k, &[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap();
        let m = ModuleRep::from_named(g, 3, &[("u0", a), ("u1", b)]).unwrap();
        assert!(m.violation().unwrap().starts_with("commutativity"));
    }

    #[test]
    fn duals() {
        let g = GroupScheme::multi_additive(3, 2).unwrap();
        let x = zigzag(&g, 1).unwrap();
        let d = x.dual().unwrap();
        assert_eq!(d.dual().unwrap(), x);
        assert!(d.violation().is_none());
        let t = ModuleRep::trivial(g.clone(), 2);
        assert_eq!(t.dual().unwrap(), t);
        let s = GroupScheme::sl2_height2(3).unwrap();
        assert!(sl2_height2_natural(&s).unwrap().dual().is_err());
    }

    #[test]
    fn tensor_of_natural_modules() {
        let g = GroupScheme::sl2(3).unwrap();
        let k = g.field().clone();
        let v1 = weyl_sl2(&g, 1).unwrap();
        let t = v1.tensor(&v1).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(t.violation().is_none());
        let h = t.action("h").unwrap();
        let mut diag: Vec<i64> = (0..4).map(|i| h.get(i, i).0 as i64).collect();
        diag.sort();
        let mut want: Vec<i64> = [2, 0, 0, -2].iter().map(|&x| k.from_int(x).0 as i64).collect();
        want.sort();
        assert_eq!(diag, want);
        let triv = ModuleRep::trivial(g.clone(), 1);
        assert_eq!(triv.tensor(&v1).unwrap(), v1);
    }

    #[test]
    fn additive_kernel_tensor_is_a_module() {
        let g = GroupScheme::additive_kernel(3, 2).unwrap();
        let m = duals_example(&g).unwrap();
        let t = m.tensor(&m.dual().unwrap()).unwrap();
        assert!(t.violation().is_none());
        let reg = regular_module(&g).unwrap();
        assert!(reg.tensor(&m).unwrap().violation().is_none());
    }

    #[test]
    fn augmentation_ideal() {
        let g = GroupScheme::multi_additive(2, 2).unwrap();
        let reg = regular_module(&g).unwrap();
        let x = reg.actions()[0].column(0);
        let y = reg.actions()[1].column(0);
        let (sub, _) = reg.submodule_generated(&[x, y]).unwrap();
        assert_eq!(sub.dim(), 3);
        let (zero, _) = reg.submodule_generated(&[vec![Fq::ZERO; 4]]).unwrap();
        assert_eq!(zero.dim(), 0);
        let all: Vec<Vec<Fq>> = Matrix::identity(4).to_rows();
        assert_eq!(reg.submodule_generated(&all).unwrap().0, reg);
    }

    #[test]
    fn syzygy_dimensions_follow_the_resolution() {
        for p in [2u32, 3] {
            let g = GroupScheme::multi_additive(p, 2).unwrap();
            let mut prev = 1usize;
            for n in 1..=4usize {
                let m = syzygy_e2(&g, n).unwrap();
                assert!(m.violation().is_none());
                assert_eq!(m.dim() + prev, n * (p * p) as usize, "p={p} n={n}");
                prev = m.dim();
            }
        }
    }

    #[test]
    fn symmetric_powers() {
        let g = GroupScheme::sl2(5).unwrap();
        let v2 = weyl_sl2(&g, 2).unwrap();
        assert_eq!(v2.symmetric_power(1).unwrap(), v2);
        let s5 = v2.symmetric_power(5).unwrap();
        assert_eq!(s5.dim(), 21);
        assert!(s5.violation().is_none());
        let k = ModuleRep::trivial(g, 1);
        assert_eq!(k.symmetric_power(4).unwrap().dim(), 1);
    }

    #[test]
    fn frobenius_twist_basics() {
        let g = GroupScheme::additive_kernel(3, 2).unwrap();
        let m = duals_example(&g).unwrap();
        assert_eq!(m.frobenius_twist(0).unwrap(), m);
        let t = m.frobenius_twist(1).unwrap();
        assert!(t.actions()[0].is_zero());
        assert_eq!(t.actions()[1], m.actions()[0]);
        assert!(m.frobenius_twist(2).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let g = GroupScheme::sl2(3).unwrap();
        let v1 = weyl_sl2(&g, 1).unwrap();
        let d = decompose_summands(&v1, 1).unwrap();
        assert_eq!(d.summands.len(), 1);
        let kk = ModuleRep::trivial(g.clone(), 2);
        let d = decompose_summands(&kk, 1).unwrap();
        assert_eq!(d.summands.iter().map(|s| s.module.dim()).collect::<Vec<_>>(), vec![1, 1]);
        let st = weyl_sl2(&g, 2).unwrap();
        let t = st.tensor(&weyl_sl2(&g, 2).unwrap()).unwrap();
        let d = decompose_summands(&t, 7).unwrap();
        assert!(d.certified);
        assert_eq!(d.summands.iter().map(|s| s.module.dim()).collect::<Vec<_>>(), vec![6, 3]);
        for s in &d.summands {
            assert!(s.module.violation().is_none());
        }
    }

    #[test]
    fn gl_modules() {
        let g = GroupScheme::gl_height2(3, 2).unwrap();
        let v = gl_polynomial_module(&g, GlPolynomial::Natural).unwrap();
        assert_eq!(v.dim(), 2);
        assert!(v.actions()[4..].iter().all(|m| m.is_zero()));
        let t = gl_polynomial_module(&g, GlPolynomial::Tensor(2)).unwrap();
        assert_eq!(t.dim(), 4);
        let s = gl_polynomial_module(&g, GlPolynomial::Symmetric(2)).unwrap();
        assert_eq!(s.dim(), 3);
    }
}
