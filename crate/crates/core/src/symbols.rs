//! Variable inventory shared by every polynomial of a corpus.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::AlgebraError;

static NEXT_TABLE_ID: AtomicU32 = AtomicU32::new(1);

/// Index of a variable in its [`SymbolTable`]. The derived order is the
/// declaration order, which is also the variable order used by the
/// graded-lexicographic monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u16);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Ordinary ring variable (λ₂, ω₂₂¹, α, ...). Derivations need an explicit rule.
    Base,
    /// Member of a jet family `x, x', x'', ...`; the default derivation shifts the order.
    Jet,
    /// Stand-in for a derivative or a named coefficient (dλ, L, M₁, ...).
    Auxiliary,
}

impl Role {
    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "base" => Some(Role::Base),
            "jet" => Some(Role::Jet),
            "auxiliary" | "aux" => Some(Role::Auxiliary),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Base => "base",
            Role::Jet => "jet",
            Role::Auxiliary => "auxiliary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolEntry {
    pub base: String,
    pub order: u32,
    pub role: Role,
}

impl SymbolEntry {
    /// Printed name: base followed by one apostrophe per jet order.
    pub fn display_name(&self) -> String {
        let mut s = self.base.clone();
        for _ in 0..self.order {
            s.push('\'');
        }
        s
    }
}

/// Ordered list of variables. Every [`crate::poly::Poly`] remembers the id of
/// the table it was built against so that mixing tables is detected.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    id: u32,
    entries: Vec<SymbolEntry>,
    index: HashMap<(String, u32), VarId>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable {
            id: NEXT_TABLE_ID.fetch_add(1, Ordering::Relaxed),
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn declare(&mut self, base: &str, order: u32, role: Role) -> Result<VarId, AlgebraError> {
        if !is_identifier(base) {
            return Err(AlgebraError::InvalidSymbol(base.to_string()));
        }
        let key = (base.to_string(), order);
        if self.index.contains_key(&key) {
            return Err(AlgebraError::DuplicateSymbol(display(base, order)));
        }
        if self.entries.len() >= u16::MAX as usize {
            return Err(AlgebraError::InvalidSymbol("symbol table full".into()));
        }
        let id = VarId(self.entries.len() as u16);
        self.entries.push(SymbolEntry {
            base: base.to_string(),
            order,
            role,
        });
        self.index.insert(key, id);
        Ok(id)
    }

    /// Declares `base, base', ..., base` with `max_order` apostrophes as a jet family.
    pub fn declare_jet(&mut self, base: &str, max_order: u32) -> Result<Vec<VarId>, AlgebraError> {
        (0..=max_order)
            .map(|k| self.declare(base, k, Role::Jet))
            .collect()
    }

    pub fn lookup(&self, base: &str, order: u32) -> Option<VarId> {
        self.index.get(&(base.to_string(), order)).copied()
    }

    /// Looks up a printed name such as `lam''`.
    pub fn lookup_name(&self, name: &str) -> Option<VarId> {
        let base = name.trim_end_matches('\'');
        let order = (name.len() - base.len()) as u32;
        self.lookup(base, order)
    }

    pub fn entry(&self, v: VarId) -> &SymbolEntry {
        &self.entries[v.index()]
    }

    pub fn name(&self, v: VarId) -> String {
        self.entry(v).display_name()
    }

    pub fn entries(&self) -> impl Iterator<Item = (VarId, &SymbolEntry)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| (VarId(i as u16), e))
    }

    /// The default jet rule target: same base, one order higher.
    pub fn jet_successor(&self, v: VarId) -> Option<VarId> {
        let e = self.entry(v);
        if e.role != Role::Jet {
            return None;
        }
        self.lookup(&e.base, e.order + 1)
    }
}

fn display(base: &str, order: u32) -> String {
    let mut s = base.to_string();
    s.extend(std::iter::repeat_n('\'', order as usize));
    s
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_family_is_ordered_and_shiftable() {
        let mut t = SymbolTable::new();
        let lam = t.declare_jet("lam", 3).unwrap();
        let x = t.declare("x", 0, Role::Base).unwrap();
        assert_eq!(lam.len(), 4);
        assert!(lam[0] < lam[3] && lam[3] < x);
        assert_eq!(t.jet_successor(lam[1]), Some(lam[2]));
        assert_eq!(t.jet_successor(lam[3]), None);
        assert_eq!(t.jet_successor(x), None);
        assert_eq!(t.lookup_name("lam''"), Some(lam[2]));
        assert_eq!(t.name(lam[2]), "lam''");
    }

    #[test]
    fn duplicates_rejected() {
        let mut t = SymbolTable::new();
        t.declare("a", 0, Role::Base).unwrap();
        assert!(matches!(
            t.declare("a", 0, Role::Auxiliary),
            Err(AlgebraError::DuplicateSymbol(_))
        ));
        assert!(t.declare("1a", 0, Role::Base).is_err());
    }
}
