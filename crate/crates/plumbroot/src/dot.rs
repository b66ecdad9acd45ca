//! Graphviz rendering of a graded root.

use std::fmt::Write as _;

use plumbroot_core::GradedRoot;

/// Plain DOT, one node per root vertex, higher levels drawn on top. The
/// trunk through the vertex of `0` is drawn bold.
pub fn root_to_dot(root: &GradedRoot) -> String {
    let trunk = root.trunk();
    let mut out = String::from("digraph graded_root {\n  rankdir=BT;\n  node [shape=circle, fontsize=10];\n");
    for (i, v) in root.vertices.iter().enumerate() {
        let size = v.size.map_or_else(|| "?".to_string(), |s| s.to_string());
        let style = if trunk.contains(&i) { ", color=red, penwidth=2" } else { "" };
        writeln!(out, "  v{i} [label=\"level={}, size={size}\"{style}];", v.level).unwrap();
    }
    for (i, v) in root.vertices.iter().enumerate() {
        if let Some(p) = v.parent {
            let style = if trunk.contains(&i) { " [color=red, penwidth=2]" } else { "" };
            writeln!(out, "  v{i} -> v{p}{style};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use plumbroot_core::roots::canonical_root;
    use plumbroot_core::{corpus, IntersectionForm};

    #[test]
    fn chain_has_one_node_per_level() {
        let root = canonical_root(&IntersectionForm::new(&corpus::single(-1)).unwrap()).unwrap();
        let dot = root_to_dot(&root);
        let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
        let levels = (root.top_level - root.floor_level + 1) as usize;
        assert_eq!(nodes, levels);
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), levels - 1);
    }
}
