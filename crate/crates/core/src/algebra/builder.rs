use std::sync::Arc;

use super::context::{add_term, GenKind, Generator, Relation, ScalarContext, Terms};
use super::expr::{eval_scalar, parse_expr, Expr};
use super::poly::{FunctionElement, Point};
use super::scalar::GaussRat;
use crate::error::{Error, Result};

/// Declarative description of a scalar context.
#[derive(Clone, Debug, Default)]
pub struct ContextBuilder {
    pub name: String,
    pub coords: Vec<String>,
    pub formals: Vec<String>,
    pub constants: Vec<String>,
    pub derivations: Vec<String>,
    pub priority: Option<Vec<String>>,
    pub relations: Vec<(String, u16, Expr)>,
    pub entries: Vec<(String, String, Expr)>,
}

impl ContextBuilder {
    pub fn new(name: &str) -> Self {
        ContextBuilder { name: name.to_string(), ..Default::default() }
    }

    pub fn coords(mut self, names: &[&str]) -> Self {
        self.coords.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn formals(mut self, names: &[&str]) -> Self {
        self.formals.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn constants(mut self, names: &[&str]) -> Self {
        self.constants.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn derivations(mut self, names: &[&str]) -> Self {
        self.derivations.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn priority(mut self, names: &[&str]) -> Self {
        self.priority = Some(names.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn relation(mut self, gen: &str, degree: u16, tail: &str) -> Result<Self> {
        self.relations.push((gen.to_string(), degree, parse_expr(tail)?));
        Ok(self)
    }

    pub fn entry(mut self, derivation: &str, gen: &str, image: &str) -> Result<Self> {
        self.entries.push((derivation.to_string(), gen.to_string(), parse_expr(image)?));
        Ok(self)
    }

    /// Generator list in storage order: coordinates, formal symbols, their
    /// first derivatives, then constants.
    fn generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.coords.iter().map(|n| Generator { name: n.clone(), kind: GenKind::Coordinate }).collect();
        let nc = gens.len();
        for f in &self.formals {
            gens.push(Generator { name: f.clone(), kind: GenKind::Formal });
        }
        for (k, f) in self.formals.iter().enumerate() {
            for (d, dn) in self.derivations.iter().enumerate() {
                gens.push(Generator { name: format!("{}({})", dn, f), kind: GenKind::Derivative { base: nc + k, derivation: d } });
            }
        }
        for c in &self.constants {
            gens.push(Generator { name: c.clone(), kind: GenKind::Constant });
        }
        gens
    }

    pub fn build(&self) -> Result<Arc<ScalarContext>> {
        let gens = self.generators();
        for (k, g) in gens.iter().enumerate() {
            if gens[..k].iter().any(|h| h.name == g.name) || g.name == "i" {
                return Err(Error::InvalidContext(format!("duplicate or reserved symbol `{}`", g.name)));
            }
        }
        let skel = ScalarContext::with_generators(&self.name, gens.clone(), self.derivations.clone());
        let idx = |n: &str| skel.gen_index(n).ok_or_else(|| Error::UnknownSymbol(n.to_string()));

        let priority = match &self.priority {
            None => {
                // default: declared order, later symbols first is not assumed
                None
            }
            Some(p) => {
                let mut order = Vec::new();
                for n in p {
                    order.push(idx(n)?);
                }
                for g in 0..gens.len() {
                    if !order.contains(&g) {
                        order.push(g);
                    }
                }
                Some(order)
            }
        };

        let mut relations = Vec::new();
        for (g, deg, tail) in &self.relations {
            let gi = idx(g)?;
            let t = eval_scalar(tail, &skel)?;
            relations.push(Relation { gen: gi, degree: *deg, tail: t.terms().clone() });
        }

        let mut entries = Vec::new();
        for (d, g, img) in &self.entries {
            let di = skel.derivation_index(d).ok_or_else(|| Error::UnknownDerivation(d.clone()))?;
            let gi = idx(g)?;
            if !matches!(gens[gi].kind, GenKind::Coordinate | GenKind::Formal) {
                return Err(Error::InvalidContext(format!(
                    "derivation entries are only declared for coordinates and formal symbols, not `{}`",
                    g
                )));
            }
            entries.push((di, gi, eval_scalar(img, &skel)?.terms().clone()));
        }
        for (g, gen) in gens.iter().enumerate() {
            if gen.kind != GenKind::Formal {
                continue;
            }
            for (di, dn) in self.derivations.iter().enumerate() {
                if entries.iter().any(|(d, h, _)| *d == di && *h == g) {
                    continue;
                }
                let target = idx(&format!("{}({})", dn, gen.name))?;
                let mut t = Terms::new();
                add_term(&mut t, super::context::unit_mono(gens.len(), target, 1), GaussRat::one());
                entries.push((di, g, t));
            }
        }
        ScalarContext::finish(&skel, priority, relations, entries)
    }
}

impl ScalarContext {
    /// Does the point assign every coordinate and satisfy every relation
    /// (evaluated before reduction)?
    pub fn check_point(self: &Arc<Self>, p: &Point) -> Result<()> {
        for (g, gen) in self.gens.iter().enumerate() {
            if gen.kind == GenKind::Coordinate && !p.values.contains_key(&g) {
                return Err(Error::validation(format!("sample point leaves `{}` unassigned", gen.name)));
            }
            if gen.kind == GenKind::Constant && p.values.contains_key(&g) {
                return Err(Error::validation(format!("sample point assigns constant `{}`", gen.name)));
            }
        }
        for r in &self.relations {
            let mut lhs = Terms::new();
            add_term(&mut lhs, super::context::unit_mono(self.ngens(), r.gen, r.degree), GaussRat::one());
            // substitute into unreduced terms, then reduce what is left
            let sub = |t: &Terms| -> Terms {
                let mut out = Terms::new();
                for (m, c) in t {
                    let mut coef = c.clone();
                    let mut nm = m.clone();
                    for (&g, v) in &p.values {
                        if nm[g] > 0 {
                            coef = &coef * &v.pow(nm[g] as u32);
                            nm[g] = 0;
                        }
                    }
                    add_term(&mut out, nm, coef);
                }
                out
            };
            let a = FunctionElement::from_terms(self, sub(&lhs));
            let b = FunctionElement::from_terms(self, sub(&r.tail));
            if a != b {
                return Err(Error::validation(format!("sample point violates the relation for `{}`", self.gens[r.gen].name)));
            }
        }
        Ok(())
    }

    /// Parse `name=value` assignments into a point.
    pub fn point_from_assignments(self: &Arc<Self>, items: &[(String, Expr)]) -> Result<Point> {
        let mut p = Point::new();
        for (n, e) in items {
            let g = self.gen_index(n).ok_or_else(|| Error::UnknownSymbol(n.clone()))?;
            p.set(g, super::expr::eval_const(e)?);
        }
        Ok(p)
    }
}
