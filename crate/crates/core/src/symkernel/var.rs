//! Process-wide interning of parameter names.
//!
//! A `Var` is a small integer handle. Handles are ordered by first-intern
//! time, which fixes the lexicographic monomial order used for division;
//! printing sorts by name instead so output never depends on intern order.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

struct Interner {
    names: Vec<&'static str>,
    index: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static CELL: OnceLock<RwLock<Interner>> = OnceLock::new();
    CELL.get_or_init(|| {
        RwLock::new(Interner {
            names: Vec::new(),
            index: HashMap::new(),
        })
    })
}

impl Var {
    pub fn new(name: &str) -> Var {
        if let Some(&id) = interner().read().unwrap().index.get(name) {
            return Var(id);
        }
        let mut w = interner().write().unwrap();
        if let Some(&id) = w.index.get(name) {
            return Var(id);
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        let id = w.names.len() as u32;
        w.names.push(leaked);
        w.index.insert(leaked, id);
        Var(id)
    }

    pub fn name(self) -> &'static str {
        interner().read().unwrap().names[self.0 as usize]
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
