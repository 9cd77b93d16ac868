//! Abstract syntax for the supported PDDL fragment. The printer in the
//! parser module emits a normal form of these values, and parsing that
//! output yields the same AST.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedName {
    pub name: String,
    /// `object` when the source leaves the entry untyped.
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub param_types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    pub pre: Vec<Atom>,
    /// `(= a b)` preconditions, compiled away during grounding.
    pub eq_pre: Vec<(Term, Term)>,
    pub add: Vec<Atom>,
    pub del: Vec<Atom>,
    /// From `(increase (total-cost) n)`; defaults to 1 at grounding when absent.
    pub cost: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub requirements: Vec<String>,
    /// Type name paired with its declared parent.
    pub types: Vec<(String, String)>,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<ActionSchema>,
    pub has_total_cost: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<GroundAtom>,
    pub goal: Vec<GroundAtom>,
    /// A `(:metric minimize (total-cost))` section was present.
    pub metric_total_cost: bool,
}
