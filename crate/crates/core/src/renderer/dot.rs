use super::{MindMap, NodeKind};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// GraphViz text. Nodes and edges are sorted so equal maps give equal text.
pub fn export_mindmap_dot(map: &MindMap) -> String {
    let mut out = String::from("digraph mindmap {\n");
    let mut nodes: Vec<_> = map.nodes.iter().collect();
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    for n in nodes {
        let shape = match n.kind {
            NodeKind::Predicate => "diamond",
            NodeKind::Subject => "box",
            NodeKind::Object => "ellipse",
        };
        out.push_str(&format!("  {} [label={}, shape={shape}];\n", quote(&n.id), quote(&n.label)));
    }
    let mut edges: Vec<_> = map.edges.iter().collect();
    edges.sort();
    for e in edges {
        out.push_str(&format!("  {} -> {} [label={}];\n", quote(&e.from), quote(&e.to), quote(&e.label)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::renderer::{MindMapEdge, MindMapNode};

    #[test]
    fn empty_map() {
        assert_eq!(export_mindmap_dot(&MindMap::default()), "digraph mindmap {\n}\n");
    }

    #[test]
    fn escapes_quotes() {
        let map = MindMap {
            nodes: vec![MindMapNode { id: "a\"b".into(), label: "x\\y".into(), kind: NodeKind::Object }],
            edges: vec![MindMapEdge { from: "a\"b".into(), to: "a\"b".into(), label: "L".into() }],
        };
        let dot = export_mindmap_dot(&map);
        assert!(dot.contains(r#""a\"b" [label="x\\y", shape=ellipse];"#));
        assert!(dot.contains(r#""a\"b" -> "a\"b" [label="L"];"#));
    }
}
