//! Canonical text rendering. Parsing the output reproduces the tree
//! exactly, which the round-trip property tests pin down.

use super::{NodeExpr, PathExpr};
use alloc::format;
use alloc::string::String;

// Binding strength, loosest first. Implication never prints (parsed
// trees are desugared), so the loosest printed level is union.
const UNION: u8 = 1;
const INTERSECT: u8 = 2;
const CONCAT: u8 = 3;
const PREFIX: u8 = 4;
const POSTFIX: u8 = 5;
const ATOM: u8 = 6;

fn quoted(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

/// A label prints bare when it lexes back as one identifier token and is
/// not a keyword; otherwise quoted.
fn label(s: &str) -> String {
    let mut chars = s.chars();
    let bare = match chars.next() {
        Some(c) if super::parse::is_ident_start_char(c) => {
            chars.all(super::parse::is_ident_continue_char) && s != "_" && s != "eps"
        }
        _ => false,
    };
    if bare {
        String::from(s)
    } else {
        quoted(s)
    }
}

fn path_level(p: &PathExpr) -> u8 {
    match p {
        PathExpr::Union(..) => UNION,
        PathExpr::Intersect(..) => INTERSECT,
        PathExpr::Concat(..) => CONCAT,
        PathExpr::Complement(..) => PREFIX,
        PathExpr::Star(..) | PathExpr::Repeat(..) => POSTFIX,
        PathExpr::Epsilon
        | PathExpr::Wildcard
        | PathExpr::Label(_)
        | PathExpr::Inverse(_)
        | PathExpr::NodeTest(_) => ATOM,
    }
}

fn node_level(n: &NodeExpr) -> u8 {
    match n {
        NodeExpr::Or(..) => UNION,
        NodeExpr::And(..) => INTERSECT,
        NodeExpr::Not(..) => PREFIX,
        NodeExpr::DataEq(_)
        | NodeExpr::DataNeq(_)
        | NodeExpr::Exists(_)
        | NodeExpr::ExistsEq(..)
        | NodeExpr::ExistsNeq(..) => ATOM,
    }
}

fn path_into(p: &PathExpr, min: u8, out: &mut String) {
    let level = path_level(p);
    if level < min {
        out.push('(');
        path_into(p, 0, out);
        out.push(')');
        return;
    }
    match p {
        PathExpr::Epsilon => out.push_str("eps"),
        PathExpr::Wildcard => out.push('_'),
        PathExpr::Label(l) => out.push_str(&label(l.as_str())),
        PathExpr::Inverse(l) => {
            out.push_str(&label(l.as_str()));
            out.push_str("^-");
        }
        PathExpr::Concat(a, b) => {
            path_into(a, CONCAT, out);
            out.push('.');
            path_into(b, CONCAT + 1, out);
        }
        PathExpr::Union(a, b) => {
            path_into(a, UNION, out);
            out.push_str(" + ");
            path_into(b, UNION + 1, out);
        }
        PathExpr::Intersect(a, b) => {
            path_into(a, INTERSECT, out);
            out.push_str(" & ");
            path_into(b, INTERSECT + 1, out);
        }
        PathExpr::Star(a) => {
            path_into(a, POSTFIX, out);
            out.push('*');
        }
        PathExpr::Repeat(a, n, m) => {
            path_into(a, POSTFIX, out);
            out.push_str(&format!("{{{n},{m}}}"));
        }
        PathExpr::Complement(a) => {
            out.push('!');
            path_into(a, PREFIX, out);
        }
        PathExpr::NodeTest(inner) => {
            out.push('[');
            node_into(inner, 0, out);
            out.push(']');
        }
    }
}

fn node_into(n: &NodeExpr, min: u8, out: &mut String) {
    let level = node_level(n);
    if level < min {
        out.push('(');
        node_into(n, 0, out);
        out.push(')');
        return;
    }
    match n {
        NodeExpr::DataEq(v) => {
            out.push('=');
            out.push_str(&quoted(v.as_str()));
        }
        NodeExpr::DataNeq(v) => {
            out.push_str("!=");
            out.push_str(&quoted(v.as_str()));
        }
        NodeExpr::Not(a) => {
            out.push('!');
            // `!` immediately followed by `=` would lex as `!=`; keep the
            // negation of an equality test parenthesized.
            if matches!(**a, NodeExpr::DataEq(_)) {
                out.push('(');
                node_into(a, 0, out);
                out.push(')');
            } else {
                node_into(a, PREFIX, out);
            }
        }
        NodeExpr::Or(a, b) => {
            node_into(a, UNION, out);
            out.push_str(" + ");
            node_into(b, UNION + 1, out);
        }
        NodeExpr::And(a, b) => {
            node_into(a, INTERSECT, out);
            out.push_str(" & ");
            node_into(b, INTERSECT + 1, out);
        }
        NodeExpr::Exists(p) => {
            out.push('<');
            path_into(p, 0, out);
            out.push('>');
        }
        NodeExpr::ExistsEq(a, b) => {
            out.push('<');
            path_into(a, 0, out);
            out.push_str(" = ");
            path_into(b, 0, out);
            out.push('>');
        }
        NodeExpr::ExistsNeq(a, b) => {
            out.push('<');
            path_into(a, 0, out);
            out.push_str(" != ");
            path_into(b, 0, out);
            out.push('>');
        }
    }
}

pub fn pretty_path(p: &PathExpr) -> String {
    let mut out = String::new();
    path_into(p, 0, &mut out);
    out
}

pub fn pretty_node(n: &NodeExpr) -> String {
    let mut out = String::new();
    node_into(n, 0, &mut out);
    out
}
