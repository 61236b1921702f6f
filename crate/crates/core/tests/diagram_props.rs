mod common;

use std::collections::HashMap;

use common::*;
use sata::diagram::{emit_json, emit_sd, parse_json, parse_sd, spider, BoolMatrix, Node};
use sata::{interpret, Diagram, Generator, MonRel};

#[test]
fn widths_are_coherent() {
    let mut rng = rng(1);
    for _ in 0..500 {
        let dom = rand::Rng::gen_range(&mut rng, 0..=3);
        let d = random_diagram(&mut rng, dom, 12);
        assert!(d.check_widths());
    }
}

#[test]
fn text_and_json_round_trip() {
    let mut rng = rng(2);
    for _ in 0..500 {
        let dom = rand::Rng::gen_range(&mut rng, 0..=3);
        let d = random_diagram(&mut rng, dom, 12);
        let text = emit_sd(&d);
        let back = parse_sd(&text).unwrap();
        assert_eq!((back.dom(), back.cod()), (d.dom(), d.cod()), "{text}");
        assert_eq!(emit_sd(&back), text);
        assert_eq!(oracle(&back), oracle(&d), "{text}");
        assert!(parse_json(&emit_json(&d)).unwrap() == d, "{text}");
    }
}

fn spider_rel(m: usize, n: usize) -> MonRel {
    let full = (1u64 << m) - 1;
    MonRel::from_fn(m, n, |x, y| x != full || y != 0).unwrap()
}

#[test]
fn spider_fusion() {
    for m in 0..=4 {
        for n in 0..=4 {
            for k in 0..=4 {
                for k2 in 0..=4 {
                    let left = par(&spider(m, k + 1), &Diagram::identity(k2));
                    let right = par(&Diagram::identity(k), &spider(k2 + 1, n));
                    let fused = interpret(&seq(&left, &right)).unwrap();
                    assert_eq!(fused, spider_rel(m + k2, n + k), "{m} {n} {k} {k2}");
                    assert_eq!(interpret(&spider(m + k2, n + k)).unwrap(), fused);
                }
            }
        }
    }
}

/// Vertices are boundary ports and generator instances; edges are wires.
/// Returns `(vertices, edges)`.
fn port_graph(d: &Diagram) -> (usize, Vec<(usize, usize)>) {
    fn walk(d: &Diagram, inputs: Vec<usize>, next: &mut usize, edges: &mut Vec<(usize, usize)>) -> Vec<usize> {
        match d.node() {
            Node::Empty => vec![],
            Node::Gen(Generator::Identity) => inputs,
            Node::Gen(Generator::Swap) => vec![inputs[1], inputs[0]],
            Node::Gen(g) => {
                let v = *next;
                *next += 1;
                for u in inputs {
                    edges.push((u, v));
                }
                vec![v; g.arity().1]
            }
            Node::Seq(a, b) => {
                let mid = walk(a, inputs, next, edges);
                walk(b, mid, next, edges)
            }
            Node::Par(a, b) => {
                let rest = inputs[a.dom()..].to_vec();
                let mut out = walk(a, inputs[..a.dom()].to_vec(), next, edges);
                out.extend(walk(b, rest, next, edges));
                out
            }
        }
    }
    let mut next = d.dom();
    let mut edges = Vec::new();
    let outs = walk(d, (0..d.dom()).collect(), &mut next, &mut edges);
    for u in outs {
        edges.push((u, next));
        next += 1;
    }
    (next, edges)
}

fn is_tree(vertices: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    edges.len() + 1 == vertices
}

#[test]
fn connected_white_trees_are_spiders() {
    let pool = [Generator::Conj, Generator::Unit, Generator::Coconj, Generator::Counit, Generator::Swap];
    let mut rng = rng(3);
    let mut checked = 0;
    let mut shapes = HashMap::new();
    while checked < 400 {
        let dom = rand::Rng::gen_range(&mut rng, 0..=3);
        let d = random_diagram_over(&mut rng, dom, 8, &pool);
        if d.dom() + d.cod() > 5 || d.size() == 0 {
            continue;
        }
        let (v, e) = port_graph(&d);
        if !is_tree(v, &e) {
            continue;
        }
        let expect = spider_rel(d.dom(), d.cod());
        assert_eq!(oracle(&d), pairs_of(&expect), "{}", emit_sd(&d));
        assert_eq!(interpret(&d).unwrap(), expect);
        *shapes.entry((d.dom(), d.cod())).or_insert(0) += 1;
        checked += 1;
    }
    assert!(shapes.len() >= 8, "{shapes:?}");
}

#[test]
fn matrix_diagrams_are_faithful() {
    for rows in 0..=3 {
        for cols in 0..=3 {
            let cells = rows * cols;
            let mut black = HashMap::new();
            let mut white = HashMap::new();
            for bits in 0u32..1 << cells {
                let entries: Vec<bool> = (0..cells).map(|i| bits >> i & 1 == 1).collect();
                let a = BoolMatrix::new(rows, cols, entries).unwrap();
                let rb = interpret(&a.black_diagram()).unwrap();
                let expect_black = MonRel::from_fn(cols, rows, |x, y| {
                    (0..rows).all(|r| {
                        let body = a.row_support(r).iter().all(|&c| x >> c & 1 == 1);
                        !body || y >> r & 1 == 1
                    })
                })
                .unwrap();
                assert_eq!(rb, expect_black);
                let rw = interpret(&a.white_diagram()).unwrap();
                let expect_white = MonRel::from_fn(rows, cols, |u, y| {
                    (0..rows).all(|r| u >> r & 1 == 0 || (0..cols).any(|c| a.get(r, c) && y >> c & 1 == 1))
                })
                .unwrap();
                assert_eq!(rw, expect_white);
                assert!(black.insert(rb.table().clone(), bits).is_none(), "{rows}x{cols}");
                assert!(white.insert(rw.table().clone(), bits).is_none(), "{rows}x{cols}");
            }
        }
    }
}

#[test]
fn snake_is_identity() {
    let id = Diagram::identity(1);
    let d = seq(&par(&sata::diagram::cup(), &id), &par(&id, &sata::diagram::cap()));
    assert_eq!(interpret(&d).unwrap(), MonRel::order(1));
}
