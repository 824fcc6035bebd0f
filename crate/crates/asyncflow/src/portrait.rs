//! State portraits in Graphviz DOT.
//!
//! One node `s<bits>` per state in packed order; unstable characters are
//! wrapped in `<U>…</U>`. Each unstable coordinate `i` contributes a solid
//! arrow labelled `i` to the state reached by firing `i` alone. When two or
//! more coordinates are unstable, a dashed arrow labelled `*` points to
//! `Φ(μ)`, the full-fire successor, which no single arrow reaches.

use std::fmt::Write as _;

use asyncflow_core::{FireVector, StateVector, TransitionFunction};

/// Largest arity rendered without a readability warning.
pub const PORTRAIT_SOFT_MAX_ARITY: u8 = 6;

pub struct Portrait {
    pub dot: String,
    pub warning: Option<String>,
}

fn node_id(mu: StateVector) -> String {
    format!("s{mu}")
}

pub fn export_portrait(phi: &TransitionFunction, name: &str) -> Portrait {
    let n = phi.arity();
    let mut dot = String::new();
    let title = name.replace('\\', "\\\\").replace('"', "\\\"");
    let _ = writeln!(dot, "digraph \"{title}\" {{");
    let _ = writeln!(dot, "  node [shape=plaintext, fontname=\"monospace\"];");
    for mu in phi.states() {
        let y = phi.apply(mu).expect("same arity");
        let mut label = String::new();
        let text = mu.to_string();
        for (i, c) in text.chars().enumerate() {
            if mu.get(i as u8 + 1) != y.get(i as u8 + 1) {
                let _ = write!(label, "<U>{c}</U>");
            } else {
                label.push(c);
            }
        }
        let _ = writeln!(dot, "  {} [label=<{label}>];", node_id(mu));
    }
    for mu in phi.states() {
        let y = phi.apply(mu).expect("same arity");
        let unstable = phi.unstable_set(mu).expect("same arity");
        for i in unstable.coordinates() {
            let to = phi.restrict(FireVector::single(n, i), mu).expect("same arity");
            let _ = writeln!(dot, "  {} -> {} [label=\"{i}\"];", node_id(mu), node_id(to));
        }
        if unstable.len() >= 2 {
            let _ = writeln!(dot, "  {} -> {} [label=\"*\", style=dashed];", node_id(mu), node_id(y));
        }
    }
    dot.push_str("}\n");
    let warning = (n > PORTRAIT_SOFT_MAX_ARITY)
        .then(|| format!("portrait has {} nodes; arity {n} exceeds {PORTRAIT_SOFT_MAX_ARITY}", 1u64 << n));
    Portrait { dot, warning }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(dot: &str) -> Vec<&str> {
        dot.lines().filter(|l| l.contains("->")).map(str::trim).collect()
    }

    #[test]
    fn constant_portrait() {
        let phi = TransitionFunction::constant("11".parse().unwrap());
        let p = export_portrait(&phi, "const");
        assert!(p.dot.contains("s00 [label=<<U>0</U><U>0</U>>];"));
        assert!(p.dot.contains("s11 [label=<11>];"));
        assert_eq!(
            edges(&p.dot),
            [
                "s00 -> s10 [label=\"1\"];",
                "s00 -> s01 [label=\"2\"];",
                "s00 -> s11 [label=\"*\", style=dashed];",
                "s10 -> s11 [label=\"2\"];",
                "s01 -> s11 [label=\"1\"];",
            ]
        );
        assert!(p.warning.is_none());
    }

    #[test]
    fn identity_and_toggle() {
        let p = export_portrait(&TransitionFunction::identity(3), "id");
        assert!(edges(&p.dot).is_empty() && !p.dot.contains("<U>"));
        let f3 = TransitionFunction::from_fn(2, |mu| mu.with(2, !mu.get(2))).unwrap();
        assert_eq!(
            edges(&export_portrait(&f3, "f3").dot),
            [
                "s00 -> s01 [label=\"2\"];",
                "s10 -> s11 [label=\"2\"];",
                "s01 -> s00 [label=\"2\"];",
                "s11 -> s10 [label=\"2\"];",
            ]
        );
        assert!(export_portrait(&TransitionFunction::identity(7), "big").warning.is_some());
    }
}
