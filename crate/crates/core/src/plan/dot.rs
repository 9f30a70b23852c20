use super::Plan;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn label(p: &Plan) -> String {
    match p {
        Plan::Scan { relation, attrs, .. } => format!("{relation}({})", attrs.join(", ")),
        Plan::Select { preds, .. } => {
            let ps: Vec<String> = preds.iter().map(|p| p.to_string()).collect();
            format!("σ {}", ps.join(" ∧ "))
        }
        Plan::Project { attrs, .. } => format!("π {}", attrs.join(", ")),
        Plan::HProject { attrs, graph, .. } => {
            let es: Vec<String> = graph.named_edges().iter().map(|(a, b)| format!("{a}≠{b}")).collect();
            format!("π^H {}\\n{{{}}}  φ={}", attrs.join(", "), es.join(", "), graph.phi())
        }
        Plan::Join { on, .. } => {
            let cs: Vec<String> = on.iter().map(|(a, b)| format!("{a}={b}")).collect();
            format!("⋈ {}", cs.join(", "))
        }
        Plan::Product { .. } => "×".to_string(),
    }
}

/// Graphviz rendering; H-projection nodes show their edges and φ(H).
pub fn to_dot(plan: &Plan) -> String {
    let mut out = String::from("digraph plan {\n  node [shape=box, fontname=\"monospace\"];\n");
    let id = |path: &[usize]| {
        if path.is_empty() {
            "n".to_string()
        } else {
            format!("n_{}", path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("_"))
        }
    };
    plan.visit(&mut |node, path| {
        let shape = if matches!(node, Plan::HProject { .. }) { ", style=bold" } else { "" };
        out.push_str(&format!("  {} [label=\"{}\"{shape}];\n", id(path), escape(&label(node)).replace("\\\\n", "\\n")));
        for i in 0..node.children().len() {
            let mut c = path.clone();
            c.push(i);
            out.push_str(&format!("  {} -> {};\n", id(path), id(&c)));
        }
    });
    out.push_str("}\n");
    out
}
