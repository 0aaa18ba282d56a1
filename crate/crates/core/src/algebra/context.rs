//! Scalar contexts: the polynomial rings (modulo substitution relations, with
//! named derivations) that every coefficient lives in.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::scalar::GaussRat;
use crate::error::{Error, Result};

pub type Mono = Vec<u16>;
pub type Terms = BTreeMap<Mono, GaussRat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Takes a rational value at every sample point.
    Coordinate,
    /// Symbolic function with first derivatives available as generators.
    Formal,
    /// First derivative `derivation(base)` of a formal symbol.
    Derivative { base: usize, derivation: usize },
    /// Algebraic constant, fixed by its relation (e.g. `s^2 = 1/2`).
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
}

/// `gen^degree = tail`, with every tail term of lower degree in `gen`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub gen: usize,
    pub degree: u16,
    pub tail: Terms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivEntry {
    Value(Terms),
    Forbidden,
}

#[derive(Debug, PartialEq, Eq)]
pub struct ScalarContext {
    pub name: String,
    pub gens: Vec<Generator>,
    /// Display/monomial-order priority, highest first.
    pub priority: Vec<usize>,
    pub relations: Vec<Relation>,
    pub derivations: Vec<String>,
    /// `table[d][g]` is the image of generator `g` under derivation `d`.
    pub table: Vec<Vec<DerivEntry>>,
}

pub fn unit_mono(n: usize, g: usize, e: u16) -> Mono {
    let mut m = vec![0; n];
    m[g] = e;
    m
}

pub fn const_terms(n: usize, c: GaussRat) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert(vec![0; n], c);
    }
    t
}

pub(crate) fn add_term(t: &mut Terms, m: Mono, c: GaussRat) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&m) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                t.remove(&m);
            }
        }
        None => {
            t.insert(m, c);
        }
    }
}

pub(crate) fn mul_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            add_term(&mut out, m, ca * cb);
        }
    }
    out
}

impl ScalarContext {
    /// A bare context with generators only (no relations, zero derivations).
    pub fn with_generators(name: &str, gens: Vec<Generator>, derivations: Vec<String>) -> Arc<Self> {
        let n = gens.len();
        let table = derivations.iter().map(|_| default_entries(&gens, n)).collect();
        Arc::new(ScalarContext { name: name.to_string(), priority: (0..n).collect(), gens, relations: Vec::new(), derivations, table })
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn derivation_index(&self, name: &str) -> Option<usize> {
        self.derivations.iter().position(|d| d == name)
    }

    pub fn has_formal(&self) -> bool {
        self.gens.iter().any(|g| matches!(g.kind, GenKind::Formal | GenKind::Derivative { .. }))
    }

    /// Same ring: identical allocation or identical presentation.
    pub fn compatible(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    /// Finalize a context from its generator skeleton: install relations,
    /// a priority order, and derivation images, then validate.
    pub fn finish(
        skeleton: &ScalarContext,
        priority: Option<Vec<usize>>,
        relations: Vec<Relation>,
        entries: Vec<(usize, usize, Terms)>,
    ) -> Result<Arc<Self>> {
        let n = skeleton.ngens();
        let mut table: Vec<Vec<DerivEntry>> = skeleton.derivations.iter().map(|_| default_entries(&skeleton.gens, n)).collect();
        for (d, g, t) in entries {
            if matches!(skeleton.gens[g].kind, GenKind::Derivative { .. }) {
                return Err(Error::InvalidContext(format!(
                    "derivative symbol `{}` cannot carry a derivation entry",
                    skeleton.gens[g].name
                )));
            }
            table[d][g] = DerivEntry::Value(t);
        }
        let priority = priority.unwrap_or_else(|| (0..n).collect());
        let ctx = ScalarContext {
            name: skeleton.name.clone(),
            gens: skeleton.gens.clone(),
            priority,
            relations,
            derivations: skeleton.derivations.clone(),
            table,
        };
        ctx.validate()?;
        Ok(Arc::new(ctx))
    }

    fn validate(&self) -> Result<()> {
        let n = self.ngens();
        let mut seen = vec![false; n];
        for r in &self.relations {
            if r.degree == 0 {
                return Err(Error::InvalidContext("relation of degree 0".into()));
            }
            if seen[r.gen] {
                return Err(Error::InvalidContext(format!("two relations lead with `{}`", self.gens[r.gen].name)));
            }
            seen[r.gen] = true;
        }
        for r in &self.relations {
            for m in r.tail.keys() {
                for other in &self.relations {
                    if m[other.gen] >= other.degree {
                        return Err(Error::InvalidContext(format!("relation for `{}` is not in substitution form", self.gens[r.gen].name)));
                    }
                }
            }
        }
        let mut sorted = self.priority.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidContext("priority list is not a permutation".into()));
        }
        // each derivation must kill every relation
        for d in 0..self.derivations.len() {
            for r in &self.relations {
                let mut rel = r.tail.iter().map(|(m, c)| (m.clone(), -c)).collect::<Terms>();
                add_term(&mut rel, unit_mono(n, r.gen, r.degree), GaussRat::one());
                let dr = self.derive_terms(d, &rel)?;
                if !dr.is_empty() {
                    return Err(Error::InvalidContext(format!(
                        "derivation `{}` does not preserve the relation for `{}`",
                        self.derivations[d], self.gens[r.gen].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Reduce modulo the substitution relations.
    pub fn reduce(&self, t: Terms) -> Terms {
        if self.relations.is_empty() {
            return t;
        }
        let mut out = Terms::new();
        let mut work: Vec<(Mono, GaussRat)> = t.into_iter().collect();
        while let Some((m, c)) = work.pop() {
            match self.relations.iter().find(|r| m[r.gen] >= r.degree) {
                None => add_term(&mut out, m, c),
                Some(r) => {
                    let mut rest = m.clone();
                    rest[r.gen] -= r.degree;
                    for (tm, tc) in &r.tail {
                        let nm: Mono = rest.iter().zip(tm).map(|(a, b)| a + b).collect();
                        work.push((nm, &c * tc));
                    }
                }
            }
        }
        out
    }

    /// Apply derivation `d` (Leibniz extension of the table), reduced.
    pub fn derive_terms(&self, d: usize, t: &Terms) -> Result<Terms> {
        let n = self.ngens();
        let mut out = Terms::new();
        for (m, c) in t {
            for g in 0..n {
                let e = m[g];
                if e == 0 {
                    continue;
                }
                match &self.table[d][g] {
                    DerivEntry::Forbidden => {
                        return Err(Error::SecondOrderDerivativeRequired {
                            derivation: self.derivations[d].clone(),
                            symbol: self.gens[g].name.clone(),
                        })
                    }
                    DerivEntry::Value(img) => {
                        if img.is_empty() {
                            continue;
                        }
                        let mut rest = m.clone();
                        rest[g] -= 1;
                        let coef = c * &GaussRat::from_int(e as i64);
                        for (im, ic) in img {
                            let nm: Mono = rest.iter().zip(im).map(|(a, b)| a + b).collect();
                            add_term(&mut out, nm, &coef * ic);
                        }
                    }
                }
            }
        }
        Ok(self.reduce(out))
    }

    /// Graded order key used for display: higher total degree first, then
    /// exponents compared in priority order.
    pub fn order_key(&self, m: &Mono) -> (u32, Vec<u16>) {
        let deg = m.iter().map(|&e| e as u32).sum();
        (deg, self.priority.iter().map(|&g| m[g]).collect())
    }
}

fn default_entries(gens: &[Generator], n: usize) -> Vec<DerivEntry> {
    gens.iter()
        .map(|g| match g.kind {
            GenKind::Derivative { .. } => DerivEntry::Forbidden,
            _ => DerivEntry::Value(Terms::new()),
        })
        .inspect(|_| debug_assert!(n == gens.len()))
        .collect()
}
