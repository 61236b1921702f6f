//! JSON and Graphviz renderings of diagrams.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramError, Generator, Node};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum JsonNode {
    Seq {
        dom: usize,
        cod: usize,
        left: Box<JsonNode>,
        right: Box<JsonNode>,
    },
    Par {
        dom: usize,
        cod: usize,
        top: Box<JsonNode>,
        bottom: Box<JsonNode>,
    },
    Gen {
        name: String,
        dom: usize,
        cod: usize,
    },
}

const EMPTY_NAME: &str = "empty";

fn to_json(d: &Diagram) -> JsonNode {
    match d.node() {
        Node::Empty => JsonNode::Gen {
            name: EMPTY_NAME.to_string(),
            dom: 0,
            cod: 0,
        },
        Node::Gen(g) => JsonNode::Gen {
            name: g.name().to_string(),
            dom: d.dom(),
            cod: d.cod(),
        },
        Node::Seq(a, b) => JsonNode::Seq {
            dom: d.dom(),
            cod: d.cod(),
            left: Box::new(to_json(a)),
            right: Box::new(to_json(b)),
        },
        Node::Par(a, b) => JsonNode::Par {
            dom: d.dom(),
            cod: d.cod(),
            top: Box::new(to_json(a)),
            bottom: Box::new(to_json(b)),
        },
    }
}

fn from_json(j: &JsonNode) -> Result<Diagram, DiagramError> {
    let (d, dom, cod) = match j {
        JsonNode::Gen { name, dom, cod } => {
            let d = if name == EMPTY_NAME {
                Diagram::empty()
            } else {
                let g = Generator::from_name(name)
                    .ok_or_else(|| DiagramError::Json(format!("unknown generator `{name}`")))?;
                Diagram::gen(g)
            };
            (d, *dom, *cod)
        }
        JsonNode::Seq {
            dom,
            cod,
            left,
            right,
        } => (Diagram::seq(&from_json(left)?, &from_json(right)?)?, *dom, *cod),
        JsonNode::Par {
            dom,
            cod,
            top,
            bottom,
        } => (Diagram::par(&from_json(top)?, &from_json(bottom)?), *dom, *cod),
    };
    if (d.dom(), d.cod()) != (dom, cod) {
        return Err(DiagramError::Json(format!(
            "node declares {dom} -> {cod} but is {} -> {}",
            d.dom(),
            d.cod()
        )));
    }
    Ok(d)
}

/// Serializes the term tree; every node carries explicit `dom`/`cod`.
pub fn emit_json(d: &Diagram) -> String {
    serde_json::to_string_pretty(&to_json(d)).expect("diagram JSON is always serializable")
}

/// Reads a term tree written by [`emit_json`], checking declared widths.
pub fn parse_json(text: &str) -> Result<Diagram, DiagramError> {
    let j: JsonNode = serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))?;
    from_json(&j)
}

#[derive(Clone, Copy)]
enum End {
    Input(usize),
    Port { node: usize, port: usize },
}

impl End {
    fn id(self) -> String {
        match self {
            End::Input(i) => format!("in{i}"),
            End::Port { node, .. } => format!("g{node}"),
        }
    }
}

struct Graph {
    nodes: Vec<Generator>,
    edges: Vec<(End, usize, usize)>,
}

impl Graph {
    fn walk(&mut self, d: &Diagram, inputs: Vec<End>) -> Vec<End> {
        match d.node() {
            Node::Empty => inputs,
            Node::Gen(Generator::Identity) => inputs,
            Node::Gen(Generator::Swap) => vec![inputs[1], inputs[0]],
            Node::Gen(g) => {
                let node = self.nodes.len();
                self.nodes.push(*g);
                for (port, src) in inputs.into_iter().enumerate() {
                    self.edges.push((src, node, port));
                }
                (0..g.arity().1).map(|port| End::Port { node, port }).collect()
            }
            Node::Seq(a, b) => {
                let mid = self.walk(a, inputs);
                self.walk(b, mid)
            }
            Node::Par(a, b) => {
                let mut top = inputs;
                let bottom = top.split_off(a.dom());
                let mut out = self.walk(a, top);
                out.extend(self.walk(b, bottom));
                out
            }
        }
    }
}

/// A left-to-right Graphviz port graph: one node per generator occurrence;
/// identities and swaps become plain wiring.
pub fn emit_dot(d: &Diagram) -> String {
    let mut g = Graph {
        nodes: Vec::new(),
        edges: Vec::new(),
    };
    let outputs = g.walk(d, (0..d.dom()).map(End::Input).collect());

    let mut s = String::new();
    s.push_str("digraph diagram {\n  rankdir=LR;\n  node [shape=circle, width=0.3, fixedsize=true, fontsize=8];\n");
    for i in 0..d.dom() {
        let _ = writeln!(s, "  in{i} [shape=plaintext, label=\"{i}\"];");
    }
    for j in 0..d.cod() {
        let _ = writeln!(s, "  out{j} [shape=plaintext, label=\"{j}\"];");
    }
    for (k, gen) in g.nodes.iter().enumerate() {
        let style = if gen.is_black() {
            "style=filled, fillcolor=black, fontcolor=white"
        } else {
            "style=filled, fillcolor=white"
        };
        let _ = writeln!(s, "  g{k} [label=\"{}\", {style}];", gen.name());
    }
    if d.dom() > 0 {
        let ins: Vec<String> = (0..d.dom()).map(|i| format!("in{i}")).collect();
        let _ = writeln!(s, "  {{ rank=source; {}; }}", ins.join("; "));
    }
    if d.cod() > 0 {
        let outs: Vec<String> = (0..d.cod()).map(|j| format!("out{j}")).collect();
        let _ = writeln!(s, "  {{ rank=sink; {}; }}", outs.join("; "));
    }
    for (src, node, port) in &g.edges {
        let _ = writeln!(s, "  {} -> g{node} [{}headlabel=\"{port}\"];", src.id(), tail_label(*src));
    }
    for (j, src) in outputs.iter().enumerate() {
        let _ = writeln!(s, "  {} -> out{j} [{}arrowhead=none];", src.id(), tail_label(*src));
    }
    s.push_str("}\n");
    s
}

fn tail_label(e: End) -> String {
    match e {
        End::Port { port, .. } => format!("taillabel=\"{port}\", "),
        End::Input(_) => String::new(),
    }
}
