//! Recursive-descent parser over s-expressions, plus a printer whose output
//! parses back to the same AST.
//!
//! Rejections are deliberate and loud: unsupported requirements name the
//! offender, and unsupported constructs (negative preconditions,
//! disjunctions, quantifiers, conditional effects) fail with their position
//! instead of being skipped.

use super::ast::*;
use super::lexer::{lex, Tok, TokKind};
use super::PddlError;

const SUPPORTED_REQS: [&str; 4] = [":strips", ":typing", ":action-costs", ":equality"];

#[derive(Debug, Clone)]
enum SExpr {
    Atom(String, (u32, u32)),
    List(Vec<SExpr>, (u32, u32)),
}

impl SExpr {
    fn pos(&self) -> (u32, u32) {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            _ => None,
        }
    }

    fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            _ => None,
        }
    }

    fn expect_list(&self, what: &str) -> Result<&[SExpr], PddlError> {
        self.as_list()
            .ok_or_else(|| PddlError::at(self.pos(), format!("expected {what} (a list)")))
    }

    fn expect_atom(&self, what: &str) -> Result<&str, PddlError> {
        self.as_atom()
            .ok_or_else(|| PddlError::at(self.pos(), format!("expected {what} (a symbol)")))
    }
}

fn parse_sexpr(toks: &[Tok], i: &mut usize) -> Result<SExpr, PddlError> {
    match toks.get(*i) {
        None => {
            let last = toks.last().map(Tok::pos).unwrap_or((1, 1));
            Err(PddlError::at(last, "unexpected end of input"))
        }
        Some(t) => match &t.kind {
            TokKind::Sym(s) => {
                *i += 1;
                Ok(SExpr::Atom(s.clone(), t.pos()))
            }
            TokKind::RParen => Err(PddlError::at(t.pos(), "unexpected `)`")),
            TokKind::LParen => {
                let open = t.pos();
                *i += 1;
                let mut items = Vec::new();
                loop {
                    match toks.get(*i) {
                        None => return Err(PddlError::at(open, "unclosed `(`")),
                        Some(t) if t.kind == TokKind::RParen => {
                            *i += 1;
                            return Ok(SExpr::List(items, open));
                        }
                        Some(_) => items.push(parse_sexpr(toks, i)?),
                    }
                }
            }
        },
    }
}

fn parse_single(src: &str) -> Result<SExpr, PddlError> {
    let toks = lex(src)?;
    let mut i = 0;
    let e = parse_sexpr(&toks, &mut i)?;
    if let Some(t) = toks.get(i) {
        return Err(PddlError::at(t.pos(), "trailing tokens after top-level form"));
    }
    Ok(e)
}

/// `a b - t c - t2 d` style lists; untyped entries default to `object`.
fn parse_typed_names(items: &[SExpr], pos: (u32, u32)) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let sym = items[i].expect_atom("a name in a typed list")?;
        if sym == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| PddlError::at(pos, "dangling `-` in typed list"))?
                .expect_atom("a type name")?;
            if pending.is_empty() {
                return Err(PddlError::at(items[i].pos(), "`-` with no names before it"));
            }
            for name in pending.drain(..) {
                out.push(TypedName { name, ty: ty.to_string() });
            }
            i += 2;
        } else {
            pending.push(sym.to_string());
            i += 1;
        }
    }
    for name in pending {
        out.push(TypedName { name, ty: "object".to_string() });
    }
    Ok(out)
}

fn parse_term(s: &str) -> Term {
    if let Some(v) = s.strip_prefix('?') {
        Term::Var(v.to_string())
    } else {
        Term::Const(s.to_string())
    }
}

fn parse_atom(items: &[SExpr], pos: (u32, u32)) -> Result<Atom, PddlError> {
    let pred = items
        .first()
        .ok_or_else(|| PddlError::at(pos, "empty atom"))?
        .expect_atom("a predicate name")?;
    let mut args = Vec::new();
    for it in &items[1..] {
        args.push(parse_term(it.expect_atom("an argument")?));
    }
    Ok(Atom { pred: pred.to_string(), args })
}

/// Conjunctive positive precondition, with `=` split out for compilation.
fn parse_precondition(
    e: &SExpr,
    pre: &mut Vec<Atom>,
    eq: &mut Vec<(Term, Term)>,
) -> Result<(), PddlError> {
    let items = e.expect_list("a precondition")?;
    match items.first().and_then(SExpr::as_atom) {
        Some("and") => {
            for sub in &items[1..] {
                parse_precondition(sub, pre, eq)?;
            }
            Ok(())
        }
        Some("not") => Err(PddlError::at(
            e.pos(),
            "negative preconditions are not supported (requires :negative-preconditions)",
        )),
        Some(op @ ("or" | "imply" | "exists" | "forall" | "when")) => Err(PddlError::at(
            e.pos(),
            format!("`{op}` is not supported in this STRIPS fragment"),
        )),
        Some("=") => {
            if items.len() != 3 {
                return Err(PddlError::at(e.pos(), "`=` takes exactly two arguments"));
            }
            let a = parse_term(items[1].expect_atom("a term")?);
            let b = parse_term(items[2].expect_atom("a term")?);
            eq.push((a, b));
            Ok(())
        }
        Some(_) => {
            pre.push(parse_atom(items, e.pos())?);
            Ok(())
        }
        None => Err(PddlError::at(e.pos(), "empty precondition")),
    }
}

/// Conjunctive effect: positive and negative literals plus one or more
/// `(increase (total-cost) n)` entries, which accumulate into the cost.
fn parse_effect(
    e: &SExpr,
    add: &mut Vec<Atom>,
    del: &mut Vec<Atom>,
    cost: &mut Option<u32>,
) -> Result<(), PddlError> {
    let items = e.expect_list("an effect")?;
    match items.first().and_then(SExpr::as_atom) {
        Some("and") => {
            for sub in &items[1..] {
                parse_effect(sub, add, del, cost)?;
            }
            Ok(())
        }
        Some("not") => {
            if items.len() != 2 {
                return Err(PddlError::at(e.pos(), "`not` takes exactly one atom"));
            }
            let inner = items[1].expect_list("an atom under `not`")?;
            let atom = parse_atom(inner, items[1].pos())?;
            if atom.pred == "=" {
                return Err(PddlError::at(e.pos(), "`=` cannot appear in effects"));
            }
            del.push(atom);
            Ok(())
        }
        Some("increase") => {
            if items.len() != 3 {
                return Err(PddlError::at(e.pos(), "`increase` takes a fluent and an amount"));
            }
            let fluent = items[1].expect_list("`(total-cost)`")?;
            if fluent.len() != 1 || fluent[0].as_atom() != Some("total-cost") {
                return Err(PddlError::at(
                    items[1].pos(),
                    "only the `total-cost` fluent is supported",
                ));
            }
            let n: u32 = items[2]
                .expect_atom("a non-negative integer")?
                .parse()
                .map_err(|_| {
                    PddlError::at(items[2].pos(), "action costs must be non-negative integers")
                })?;
            *cost = Some(cost.unwrap_or(0) + n);
            Ok(())
        }
        Some(op @ ("when" | "forall")) => Err(PddlError::at(
            e.pos(),
            format!("`{op}` effects are not supported in this STRIPS fragment"),
        )),
        Some("=") => Err(PddlError::at(e.pos(), "`=` cannot appear in effects")),
        Some(_) => {
            add.push(parse_atom(items, e.pos())?);
            Ok(())
        }
        None => Err(PddlError::at(e.pos(), "empty effect")),
    }
}

fn check_requirements(items: &[SExpr]) -> Result<Vec<String>, PddlError> {
    let mut reqs = Vec::new();
    for it in items {
        let r = it.expect_atom("a requirement flag")?;
        if !SUPPORTED_REQS.contains(&r) {
            return Err(PddlError::UnsupportedRequirement { req: r.to_string() });
        }
        reqs.push(r.to_string());
    }
    Ok(reqs)
}

pub fn parse_domain(src: &str) -> Result<Domain, PddlError> {
    let top = parse_single(src)?;
    let items = top.expect_list("`(define ...)`")?;
    if items.first().and_then(SExpr::as_atom) != Some("define") {
        return Err(PddlError::at(top.pos(), "expected `(define (domain ...) ...)`"));
    }
    let head = items
        .get(1)
        .ok_or_else(|| PddlError::at(top.pos(), "missing `(domain name)`"))?
        .expect_list("`(domain name)`")?;
    if head.first().and_then(SExpr::as_atom) != Some("domain") || head.len() != 2 {
        return Err(PddlError::at(items[1].pos(), "expected `(domain name)`"));
    }
    let mut d = Domain {
        name: head[1].expect_atom("the domain name")?.to_string(),
        requirements: Vec::new(),
        types: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
        has_total_cost: false,
    };

    for sec in &items[2..] {
        let body = sec.expect_list("a domain section")?;
        let key = body
            .first()
            .ok_or_else(|| PddlError::at(sec.pos(), "empty domain section"))?
            .expect_atom("a section keyword")?;
        match key {
            ":requirements" => d.requirements = check_requirements(&body[1..])?,
            ":types" => {
                for tn in parse_typed_names(&body[1..], sec.pos())? {
                    d.types.push((tn.name, tn.ty));
                }
            }
            ":constants" => d.constants = parse_typed_names(&body[1..], sec.pos())?,
            ":predicates" => {
                for p in &body[1..] {
                    let decl = p.expect_list("a predicate declaration")?;
                    let name = decl
                        .first()
                        .ok_or_else(|| PddlError::at(p.pos(), "empty predicate declaration"))?
                        .expect_atom("a predicate name")?;
                    let params = parse_typed_names(&decl[1..], p.pos())?;
                    d.predicates.push(PredicateDecl {
                        name: name.to_string(),
                        param_types: params.into_iter().map(|t| t.ty).collect(),
                    });
                }
            }
            ":functions" => {
                // Only the total-cost fluent exists in this fragment.
                for f in &body[1..] {
                    if f.as_atom() == Some("-") || f.as_atom() == Some("number") {
                        continue;
                    }
                    let decl = f.expect_list("a function declaration")?;
                    if decl.len() != 1 || decl[0].as_atom() != Some("total-cost") {
                        return Err(PddlError::at(
                            f.pos(),
                            "only the `total-cost` fluent is supported",
                        ));
                    }
                    d.has_total_cost = true;
                }
            }
            ":action" => {
                let mut name = None;
                let mut params = Vec::new();
                let mut pre = Vec::new();
                let mut eq_pre = Vec::new();
                let mut add = Vec::new();
                let mut del = Vec::new();
                let mut cost = None;
                let mut i = 1;
                name.replace(
                    body.get(i)
                        .ok_or_else(|| PddlError::at(sec.pos(), "action without a name"))?
                        .expect_atom("the action name")?
                        .to_string(),
                );
                i += 1;
                while i < body.len() {
                    let kw = body[i].expect_atom("an action keyword")?;
                    let val = body
                        .get(i + 1)
                        .ok_or_else(|| PddlError::at(body[i].pos(), format!("{kw} without a value")))?;
                    match kw {
                        ":parameters" => {
                            let list = val.expect_list("the parameter list")?;
                            params = parse_typed_names(list, val.pos())?;
                            // parameters are variables; strip the `?` so they
                            // match Term::Var spellings
                            for p in &mut params {
                                match p.name.strip_prefix('?') {
                                    Some(base) => p.name = base.to_string(),
                                    None => {
                                        return Err(PddlError::at(
                                            val.pos(),
                                            format!("parameter {} must start with `?`", p.name),
                                        ))
                                    }
                                }
                            }
                        }
                        ":precondition" => parse_precondition(val, &mut pre, &mut eq_pre)?,
                        ":effect" => parse_effect(val, &mut add, &mut del, &mut cost)?,
                        other => {
                            return Err(PddlError::at(
                                body[i].pos(),
                                format!("unsupported action keyword {other}"),
                            ))
                        }
                    }
                    i += 2;
                }
                d.actions.push(ActionSchema {
                    name: name.unwrap(),
                    params,
                    pre,
                    eq_pre,
                    add,
                    del,
                    cost,
                });
            }
            other => {
                return Err(PddlError::at(
                    sec.pos(),
                    format!("unsupported domain section {other}"),
                ))
            }
        }
    }
    validate_domain(&d)?;
    Ok(d)
}

pub fn parse_problem(src: &str) -> Result<Problem, PddlError> {
    let top = parse_single(src)?;
    let items = top.expect_list("`(define ...)`")?;
    if items.first().and_then(SExpr::as_atom) != Some("define") {
        return Err(PddlError::at(top.pos(), "expected `(define (problem ...) ...)`"));
    }
    let head = items
        .get(1)
        .ok_or_else(|| PddlError::at(top.pos(), "missing `(problem name)`"))?
        .expect_list("`(problem name)`")?;
    if head.first().and_then(SExpr::as_atom) != Some("problem") || head.len() != 2 {
        return Err(PddlError::at(items[1].pos(), "expected `(problem name)`"));
    }
    let mut p = Problem {
        name: head[1].expect_atom("the problem name")?.to_string(),
        domain: String::new(),
        objects: Vec::new(),
        init: Vec::new(),
        goal: Vec::new(),
        metric_total_cost: false,
    };

    for sec in &items[2..] {
        let body = sec.expect_list("a problem section")?;
        let key = body
            .first()
            .ok_or_else(|| PddlError::at(sec.pos(), "empty problem section"))?
            .expect_atom("a section keyword")?;
        match key {
            ":domain" => {
                p.domain = body
                    .get(1)
                    .ok_or_else(|| PddlError::at(sec.pos(), ":domain without a name"))?
                    .expect_atom("the domain name")?
                    .to_string();
            }
            ":requirements" => {
                check_requirements(&body[1..])?;
            }
            ":objects" => p.objects = parse_typed_names(&body[1..], sec.pos())?,
            ":init" => {
                for lit in &body[1..] {
                    let atom = lit.expect_list("an init literal")?;
                    match atom.first().and_then(SExpr::as_atom) {
                        Some("=") => continue, // (= (total-cost) 0), tolerated
                        Some("not") => {
                            return Err(PddlError::at(
                                lit.pos(),
                                "negated init literals are not supported",
                            ))
                        }
                        _ => p.init.push(ground_atom(atom, lit.pos())?),
                    }
                }
            }
            ":goal" => {
                let goal = body
                    .get(1)
                    .ok_or_else(|| PddlError::at(sec.pos(), "empty :goal section"))?;
                collect_goal(goal, &mut p.goal)?;
            }
            ":metric" => {
                // only `minimize (total-cost)` can occur in this fragment
                let ok = body.len() == 3
                    && body[1].as_atom() == Some("minimize")
                    && body[2].as_list().is_some_and(|f| {
                        f.len() == 1 && f[0].as_atom() == Some("total-cost")
                    });
                if !ok {
                    return Err(PddlError::at(
                        sec.pos(),
                        "only `(:metric minimize (total-cost))` is supported",
                    ));
                }
                p.metric_total_cost = true;
            }
            other => {
                return Err(PddlError::at(
                    sec.pos(),
                    format!("unsupported problem section {other}"),
                ))
            }
        }
    }
    if p.domain.is_empty() {
        return Err(PddlError::at(top.pos(), "problem has no :domain section"));
    }
    Ok(p)
}

fn ground_atom(items: &[SExpr], pos: (u32, u32)) -> Result<GroundAtom, PddlError> {
    let a = parse_atom(items, pos)?;
    let mut args = Vec::new();
    for t in a.args {
        match t {
            Term::Const(c) => args.push(c),
            Term::Var(v) => {
                return Err(PddlError::at(pos, format!("variable ?{v} in a ground literal")))
            }
        }
    }
    Ok(GroundAtom { pred: a.pred, args })
}

/// Goals are conjunctions of positive ground literals; anything else fails.
fn collect_goal(e: &SExpr, out: &mut Vec<GroundAtom>) -> Result<(), PddlError> {
    let items = e.expect_list("a goal")?;
    match items.first().and_then(SExpr::as_atom) {
        Some("and") => {
            for sub in &items[1..] {
                collect_goal(sub, out)?;
            }
            Ok(())
        }
        Some(op @ ("not" | "or" | "imply" | "exists" | "forall" | "=")) => Err(PddlError::at(
            e.pos(),
            format!("goals are conjunctions of positive ground literals; `{op}` is not supported"),
        )),
        Some(_) => {
            out.push(ground_atom(items, e.pos())?);
            Ok(())
        }
        None => Err(PddlError::at(e.pos(), "empty goal conjunct")),
    }
}

/// Domain-internal checks: declared types, declared predicates with matching
/// arity, bound variables, distinct parameter names.
fn validate_domain(d: &Domain) -> Result<(), PddlError> {
    let mut types: Vec<&str> = vec!["object"];
    for (t, _) in &d.types {
        types.push(t);
    }
    let type_known = |t: &str| types.contains(&t);
    for (t, parent) in &d.types {
        if !type_known(parent) {
            return Err(PddlError::Ground(format!(
                "domain {}: type {t} has undeclared parent {parent}",
                d.name
            )));
        }
    }
    for tn in &d.constants {
        if !type_known(&tn.ty) {
            return Err(PddlError::Ground(format!(
                "domain {}: constant {} has undeclared type {}",
                d.name, tn.name, tn.ty
            )));
        }
    }
    let arity = |pred: &str| -> Option<usize> {
        d.predicates.iter().find(|p| p.name == pred).map(|p| p.param_types.len())
    };
    for p in &d.predicates {
        for ty in &p.param_types {
            if !type_known(ty) {
                return Err(PddlError::Ground(format!(
                    "predicate {}: undeclared type {ty}",
                    p.name
                )));
            }
        }
    }
    for a in &d.actions {
        let mut seen = Vec::new();
        for tn in &a.params {
            if seen.contains(&&tn.name) {
                return Err(PddlError::Ground(format!(
                    "action {}: duplicate parameter ?{}",
                    a.name, tn.name
                )));
            }
            seen.push(&tn.name);
            if !type_known(&tn.ty) {
                return Err(PddlError::Ground(format!(
                    "action {}: undeclared type {}",
                    a.name, tn.ty
                )));
            }
        }
        let check_atoms = |atoms: &[Atom], where_: &str| -> Result<(), PddlError> {
            for atom in atoms {
                match arity(&atom.pred) {
                    None => {
                        return Err(PddlError::Ground(format!(
                            "action {}: undeclared predicate {} in {where_}",
                            a.name, atom.pred
                        )))
                    }
                    Some(n) if n != atom.args.len() => {
                        return Err(PddlError::Ground(format!(
                            "action {}: predicate {} expects {n} arguments, got {}",
                            a.name,
                            atom.pred,
                            atom.args.len()
                        )))
                    }
                    _ => {}
                }
                for t in &atom.args {
                    if let Term::Var(v) = t {
                        if !a.params.iter().any(|p| &p.name == v) {
                            return Err(PddlError::Ground(format!(
                                "action {}: unbound variable ?{v}",
                                a.name
                            )));
                        }
                    }
                }
            }
            Ok(())
        };
        check_atoms(&a.pre, "preconditions")?;
        check_atoms(&a.add, "effects")?;
        check_atoms(&a.del, "effects")?;
        for (x, y) in &a.eq_pre {
            for t in [x, y] {
                if let Term::Var(v) = t {
                    if !a.params.iter().any(|p| &p.name == v) {
                        return Err(PddlError::Ground(format!(
                            "action {}: unbound variable ?{v} in `=`",
                            a.name
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn fmt_typed(out: &mut String, names: &[TypedName]) {
    for tn in names {
        out.push_str(&format!(" {} - {}", tn.name, tn.ty));
    }
}

fn fmt_term(t: &Term) -> String {
    match t {
        Term::Var(v) => format!("?{v}"),
        Term::Const(c) => c.clone(),
    }
}

fn fmt_atom(a: &Atom) -> String {
    let mut s = format!("({}", a.pred);
    for t in &a.args {
        s.push(' ');
        s.push_str(&fmt_term(t));
    }
    s.push(')');
    s
}

/// Normal-form printer; `parse_domain(print_domain(d)) == d`.
pub fn print_domain(d: &Domain) -> String {
    let mut out = format!("(define (domain {})\n", d.name);
    if !d.requirements.is_empty() {
        out.push_str(&format!("  (:requirements {})\n", d.requirements.join(" ")));
    }
    if !d.types.is_empty() {
        out.push_str("  (:types");
        for (t, parent) in &d.types {
            out.push_str(&format!(" {t} - {parent}"));
        }
        out.push_str(")\n");
    }
    if !d.constants.is_empty() {
        out.push_str("  (:constants");
        fmt_typed(&mut out, &d.constants);
        out.push_str(")\n");
    }
    out.push_str("  (:predicates");
    for p in &d.predicates {
        out.push_str(&format!("\n    ({}", p.name));
        for (i, ty) in p.param_types.iter().enumerate() {
            out.push_str(&format!(" ?x{i} - {ty}"));
        }
        out.push(')');
    }
    out.push_str(")\n");
    if d.has_total_cost {
        out.push_str("  (:functions (total-cost))\n");
    }
    for a in &d.actions {
        out.push_str(&format!("  (:action {}\n    :parameters (", a.name));
        let params: Vec<String> =
            a.params.iter().map(|p| format!("?{} - {}", p.name, p.ty)).collect();
        out.push_str(&params.join(" "));
        out.push_str(")\n    :precondition (and");
        for atom in &a.pre {
            out.push(' ');
            out.push_str(&fmt_atom(atom));
        }
        for (x, y) in &a.eq_pre {
            out.push_str(&format!(" (= {} {})", fmt_term(x), fmt_term(y)));
        }
        out.push_str(")\n    :effect (and");
        for atom in &a.add {
            out.push(' ');
            out.push_str(&fmt_atom(atom));
        }
        for atom in &a.del {
            out.push_str(&format!(" (not {})", fmt_atom(atom)));
        }
        if let Some(c) = a.cost {
            out.push_str(&format!(" (increase (total-cost) {c})"));
        }
        out.push_str("))\n");
    }
    out.push_str(")\n");
    out
}

/// Normal-form printer; `parse_problem(print_problem(p)) == p`.
pub fn print_problem(p: &Problem) -> String {
    let mut out = format!("(define (problem {})\n  (:domain {})\n", p.name, p.domain);
    if !p.objects.is_empty() {
        out.push_str("  (:objects");
        fmt_typed(&mut out, &p.objects);
        out.push_str(")\n");
    }
    out.push_str("  (:init");
    for ga in &p.init {
        out.push_str(&format!(" ({})", ground_atom_body(ga)));
    }
    out.push_str(")\n  (:goal (and");
    for ga in &p.goal {
        out.push_str(&format!(" ({})", ground_atom_body(ga)));
    }
    out.push_str("))\n");
    if p.metric_total_cost {
        out.push_str("  (:metric minimize (total-cost))\n");
    }
    out.push_str(")\n");
    out
}

fn ground_atom_body(ga: &GroundAtom) -> String {
    let mut s = ga.pred.clone();
    for a in &ga.args {
        s.push(' ');
        s.push_str(a);
    }
    s
}
