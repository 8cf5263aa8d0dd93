use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Psi,
    PsiConj,
    Delta,
    Epsilon,
}

impl FactorKind {
    pub fn keyword(self) -> &'static str {
        match self {
            FactorKind::Psi => "psi",
            FactorKind::PsiConj => "psi*",
            FactorKind::Delta => "delta",
            FactorKind::Epsilon => "eps",
        }
    }

    pub fn is_state(self) -> bool {
        matches!(self, FactorKind::Psi | FactorKind::PsiConj)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub indices: Vec<String>,
}

impl Factor {
    pub fn new(kind: FactorKind, indices: &[&str]) -> Self {
        Factor {
            kind,
            indices: indices.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.keyword(), self.indices.join(","))
    }
}

/// Product of `ψ`, `ψ*`, `δ` and `ε` factors with every index summed.
/// Position `p` of a `ψ`/`ψ*` factor binds its index to party `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContractionExpr {
    factors: Vec<Factor>,
    slot_count: usize,
}

/// Where an index occurs: `(factor position, slot inside the factor)`.
type Occurrence = (usize, usize);

impl ContractionExpr {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        let slot_count = factors
            .iter()
            .find(|f| f.kind.is_state())
            .map(|f| f.indices.len())
            .ok_or_else(|| Error::SlotArity("expression has no psi factor".into()))?;
        if slot_count == 0 {
            return Err(Error::SlotArity("psi factor without indices".into()));
        }
        for f in &factors {
            if f.kind.is_state() && f.indices.len() != slot_count {
                return Err(Error::SlotArity(format!(
                    "`{f}` has {} indices, the first psi factor has {slot_count}",
                    f.indices.len()
                )));
            }
            if !f.kind.is_state() && f.indices.len() != 2 {
                return Err(Error::SlotArity(format!(
                    "`{f}` must carry exactly 2 indices"
                )));
            }
        }
        let expr = ContractionExpr {
            factors,
            slot_count,
        };
        for (name, occ) in expr.occurrences_ordered() {
            if occ.len() != 2 {
                return Err(Error::IndexArity {
                    index: name.to_string(),
                    count: occ.len(),
                });
            }
        }
        Ok(expr)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of parties the expression binds.
    pub fn slot_count(&self) -> usize {
        self.slot_count
    }

    /// `(#ψ, #ψ*)`.
    pub fn degree(&self) -> (usize, usize) {
        let count = |k| self.factors.iter().filter(|f| f.kind == k).count();
        (count(FactorKind::Psi), count(FactorKind::PsiConj))
    }

    /// Equal numbers of `ψ` and `ψ*`. Unbalanced expressions are allowed but
    /// not invariant under the full local unitary group.
    pub fn is_degree_balanced(&self) -> bool {
        let (a, b) = self.degree();
        a == b
    }

    /// Index names in order of first appearance with their occurrences.
    pub(crate) fn occurrences_ordered(&self) -> Vec<(&str, Vec<Occurrence>)> {
        let mut order: Vec<&str> = Vec::new();
        let mut map: HashMap<&str, Vec<Occurrence>> = HashMap::new();
        for (fi, f) in self.factors.iter().enumerate() {
            for (si, name) in f.indices.iter().enumerate() {
                let entry = map.entry(name.as_str()).or_default();
                if entry.is_empty() {
                    order.push(name);
                }
                entry.push((fi, si));
            }
        }
        order
            .into_iter()
            .map(|n| (n, map.remove(n).unwrap()))
            .collect()
    }

    /// Resolves the dimension every index runs over for a state with the
    /// given party dims. `δ` and `ε` propagate dimensions between their two
    /// indices; `ε` requires dimension 2.
    pub fn index_dims(&self, dims: &[usize]) -> Result<HashMap<String, usize>> {
        if dims.len() != self.slot_count {
            return Err(Error::DimensionMismatch(format!(
                "expression binds {} parties, state has {}",
                self.slot_count,
                dims.len()
            )));
        }
        let occ = self.occurrences_ordered();
        let names: Vec<&str> = occ.iter().map(|(n, _)| *n).collect();
        let id: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();

        // union-find over indices joined by δ/ε
        let mut parent: Vec<usize> = (0..names.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for f in self.factors.iter().filter(|f| !f.kind.is_state()) {
            let a = find(&mut parent, id[f.indices[0].as_str()]);
            let b = find(&mut parent, id[f.indices[1].as_str()]);
            parent[a] = b;
        }

        let mut bound: HashMap<usize, (usize, &str)> = HashMap::new();
        for f in self.factors.iter().filter(|f| f.kind.is_state()) {
            for (slot, name) in f.indices.iter().enumerate() {
                let root = find(&mut parent, id[name.as_str()]);
                match bound.get(&root) {
                    Some(&(d, other)) if d != dims[slot] => {
                        return Err(Error::DimensionMismatch(format!(
                            "index `{name}` runs over {} values but is joined to `{other}` with {d}",
                            dims[slot]
                        )));
                    }
                    Some(_) => {}
                    None => {
                        bound.insert(root, (dims[slot], name));
                    }
                }
            }
        }

        let mut eps_roots = Vec::new();
        for f in self.factors.iter().filter(|f| f.kind == FactorKind::Epsilon) {
            for name in &f.indices {
                let root = find(&mut parent, id[name.as_str()]);
                if let Some(&(d, _)) = bound.get(&root) {
                    if d != 2 {
                        return Err(Error::EpsDimension {
                            index: name.clone(),
                            dim: d,
                        });
                    }
                }
                eps_roots.push(root);
            }
        }

        let mut out = HashMap::new();
        for name in names {
            let root = find(&mut parent, id[name]);
            let d = match bound.get(&root) {
                Some(&(d, _)) => d,
                None if eps_roots.contains(&root) => 2,
                None => {
                    return Err(Error::DimensionMismatch(format!(
                        "index `{name}` is not bound to any party"
                    )))
                }
            };
            out.insert(name.to_string(), d);
        }
        Ok(out)
    }

    /// Checks whether the expression is written in simple form: equal numbers
    /// of `ψ` and `ψ*`, no `ε`, and every contraction (direct or through one
    /// `δ`) joins a `ψ` index to a `ψ*` index at the same slot.
    pub fn simple_form(&self) -> SimpleFormReport {
        match self.first_simple_violation() {
            None => SimpleFormReport {
                simple: true,
                diagnostic: None,
            },
            Some(d) => SimpleFormReport {
                simple: false,
                diagnostic: Some(d),
            },
        }
    }

    fn first_simple_violation(&self) -> Option<String> {
        let (np, nc) = self.degree();
        if np != nc {
            return Some(format!("{np} psi factors but {nc} psi* factors"));
        }
        if let Some(f) = self
            .factors
            .iter()
            .find(|f| f.kind == FactorKind::Epsilon)
        {
            return Some(format!("`{f}` is an eps contraction"));
        }
        let occ: HashMap<&str, Vec<Occurrence>> = self.occurrences_ordered().into_iter().collect();
        let other_end = |name: &str, here: Occurrence| -> Occurrence {
            *occ[name].iter().find(|&&o| o != here).unwrap()
        };
        // endpoints of each contraction, in factor order
        for (fi, f) in self.factors.iter().enumerate() {
            match f.kind {
                FactorKind::Delta => {
                    let a = other_end(&f.indices[0], (fi, 0));
                    let b = other_end(&f.indices[1], (fi, 1));
                    for (name, end) in [(&f.indices[0], a), (&f.indices[1], b)] {
                        if !self.factors[end.0].kind.is_state() {
                            return Some(format!(
                                "`{f}` joins index `{name}` to another delta"
                            ));
                        }
                    }
                    if let Some(msg) = self.pair_violation(a, b, &f.to_string()) {
                        return Some(msg);
                    }
                }
                FactorKind::Psi | FactorKind::PsiConj => {
                    for (si, name) in f.indices.iter().enumerate() {
                        let end = other_end(name, (fi, si));
                        if !self.factors[end.0].kind.is_state() {
                            continue;
                        }
                        if let Some(msg) =
                            self.pair_violation((fi, si), end, &format!("index `{name}`"))
                        {
                            return Some(msg);
                        }
                    }
                }
                FactorKind::Epsilon => unreachable!(),
            }
        }
        None
    }

    fn pair_violation(&self, a: Occurrence, b: Occurrence, what: &str) -> Option<String> {
        let (ka, kb) = (self.factors[a.0].kind, self.factors[b.0].kind);
        if ka == kb {
            return Some(format!(
                "{what} contracts {} with {}",
                ka.keyword(),
                kb.keyword()
            ));
        }
        if a.1 != b.1 {
            return Some(format!(
                "{what} joins slot {} to slot {}",
                a.1 + 1,
                b.1 + 1
            ));
        }
        None
    }
}

impl fmt::Display for ContractionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(Factor::to_string).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleFormReport {
    pub simple: bool,
    /// First violation found, when not simple.
    pub diagnostic: Option<String>,
}
