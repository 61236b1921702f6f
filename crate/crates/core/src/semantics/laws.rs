//! The named laws of the calculus, each checked by interpretation.

use serde::Serialize;

use super::{verify_equation, Interpreter};
use crate::diagram::{
    cap, cocopy_n, coconj_n, conj_n, copy_n, cup, parse_sd, spider, Diagram, Generator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Eq,
    Leq,
}

#[derive(Debug, Clone)]
pub struct Law {
    pub name: String,
    pub lhs: Diagram,
    pub rhs: Diagram,
    pub mode: Mode,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawOutcome {
    pub name: String,
    pub mode: Mode,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn sd(text: &str) -> Diagram {
    parse_sd(text).unwrap_or_else(|e| panic!("law text `{text}`: {e}"))
}

fn seq(a: &Diagram, b: &Diagram) -> Diagram {
    Diagram::seq(a, b).expect("law diagrams are well typed")
}

fn tensor(parts: &[Diagram]) -> Diagram {
    parts
        .iter()
        .fold(Diagram::empty(), |acc, d| Diagram::par(&acc, d))
}

fn power(d: &Diagram, k: usize) -> Diagram {
    tensor(&vec![d.clone(); k])
}

struct Suite(Vec<Law>);

impl Suite {
    fn add(&mut self, name: impl Into<String>, lhs: Diagram, rhs: Diagram, mode: Mode) {
        self.0.push(Law {
            name: name.into(),
            lhs,
            rhs,
            mode,
        });
    }

    fn eq(&mut self, name: impl Into<String>, lhs: &str, rhs: &str) {
        self.add(name, sd(lhs), sd(rhs), Mode::Eq);
    }

    fn leq(&mut self, name: impl Into<String>, lhs: &str, rhs: &str) {
        self.add(name, sd(lhs), sd(rhs), Mode::Leq);
    }

    /// Associativity, unitality and commutativity of a monoid.
    fn monoid(&mut self, family: &str, mult: &str, unit: &str) {
        self.eq(
            format!("{family}/assoc"),
            &format!("({mult} * id) ; {mult}"),
            &format!("(id * {mult}) ; {mult}"),
        );
        self.eq(format!("{family}/unit-left"), &format!("({unit} * id) ; {mult}"), "id");
        self.eq(format!("{family}/unit-right"), &format!("(id * {unit}) ; {mult}"), "id");
        self.eq(format!("{family}/comm"), &format!("swap ; {mult}"), mult);
    }

    fn comonoid(&mut self, family: &str, comult: &str, counit: &str) {
        self.eq(
            format!("{family}/coassoc"),
            &format!("{comult} ; ({comult} * id)"),
            &format!("{comult} ; (id * {comult})"),
        );
        self.eq(format!("{family}/counit-left"), &format!("{comult} ; ({counit} * id)"), "id");
        self.eq(format!("{family}/counit-right"), &format!("{comult} ; (id * {counit})"), "id");
        self.eq(format!("{family}/cocomm"), &format!("{comult} ; swap"), comult);
    }

    /// The four bimonoid laws for monoid `(mult, unit)` and comonoid
    /// `(comult, counit)`.
    fn bimonoid(&mut self, family: &str, mult: &str, unit: &str, comult: &str, counit: &str) {
        self.eq(
            format!("{family}/mult-comult"),
            &format!("{mult} ; {comult}"),
            &format!("({comult} * {comult}) ; (id * swap * id) ; ({mult} * {mult})"),
        );
        self.eq(format!("{family}/unit-comult"), &format!("{unit} ; {comult}"), &format!("{unit} * {unit}"));
        self.eq(format!("{family}/mult-counit"), &format!("{mult} ; {counit}"), &format!("{counit} * {counit}"));
        self.eq(format!("{family}/unit-counit"), &format!("{unit} ; {counit}"), "");
    }

    /// `left -| right`: `id <= left ; right` and `right ; left <= id`.
    fn adjunction(&mut self, left: Generator, right: Generator) {
        let (l, r) = (Diagram::gen(left), Diagram::gen(right));
        let name = format!("adjunction/{}-{}", left.name(), right.name());
        self.add(
            format!("{name}/unit"),
            Diagram::identity(l.dom()),
            seq(&l, &r),
            Mode::Leq,
        );
        self.add(
            format!("{name}/counit"),
            seq(&r, &l),
            Diagram::identity(r.dom()),
            Mode::Leq,
        );
    }
}

/// Wires `i * n + j` (input `i`, copy `j`) to `j * k + i`.
fn transpose_permutation(k: usize, n: usize) -> Diagram {
    let p: Vec<usize> = (0..k * n).map(|w| (w % n) * k + w / n).collect();
    Diagram::permutation(&p).expect("transpose is a bijection")
}

/// `mult_k ; comult_n = comult_n^k ; transpose ; mult_k^n`.
fn generalized_bialgebra(
    mult: fn(usize) -> Diagram,
    comult: fn(usize) -> Diagram,
    k: usize,
    n: usize,
) -> (Diagram, Diagram) {
    let lhs = seq(&mult(k), &comult(n));
    let rhs = seq(
        &seq(&power(&comult(n), k), &transpose_permutation(k, n)),
        &power(&mult(k), n),
    );
    (lhs, rhs)
}

/// Every law checked by the soundness suite.
pub fn standard_laws() -> Vec<Law> {
    let mut s = Suite(Vec::new());

    s.comonoid("black-comonoid", "copy", "discard");
    s.monoid("black-monoid", "cocopy", "codiscard");
    s.monoid("white-monoid", "conj", "unit");
    s.comonoid("white-comonoid", "coconj", "counit");

    s.eq("white-frobenius/left", "(coconj * id) ; (id * conj)", "conj ; coconj");
    s.eq("white-frobenius/right", "(id * coconj) ; (conj * id)", "conj ; coconj");

    s.bimonoid("bimonoid/conj-copy", "conj", "unit", "copy", "discard");
    s.bimonoid("bimonoid/cocopy-coconj", "cocopy", "codiscard", "coconj", "counit");
    s.bimonoid("bimonoid/cocopy-copy", "cocopy", "codiscard", "copy", "discard");
    s.eq(
        "distributivity/conj-over-cocopy",
        "(id * cocopy) ; conj",
        "(copy * id * id) ; (id * swap * id) ; (conj * conj) ; cocopy",
    );

    use Generator::*;
    for (l, r) in [
        (Conj, Copy),
        (Copy, Cocopy),
        (Cocopy, Coconj),
        (Unit, Discard),
        (Discard, Codiscard),
        (Codiscard, Counit),
    ] {
        s.adjunction(l, r);
    }

    s.eq("loop/coconj-conj", "coconj ; conj", "discard ; codiscard");
    for m in 0..=2 {
        for n in 0..=2 {
            let looped = seq(
                &seq(
                    &Diagram::par(&Diagram::identity(m), &cup()),
                    &Diagram::par(&spider(m + 1, n + 1), &Diagram::identity(1)),
                ),
                &Diagram::par(&Diagram::identity(n), &cap()),
            );
            let top = seq(&power(&Diagram::gen(Discard), m), &power(&Diagram::gen(Codiscard), n));
            s.add(format!("loop/spider-{m}-{n}"), looped, top, Mode::Eq);
        }
    }

    s.add(
        "snake/left",
        seq(
            &Diagram::par(&cup(), &Diagram::identity(1)),
            &Diagram::par(&Diagram::identity(1), &cap()),
        ),
        Diagram::identity(1),
        Mode::Eq,
    );
    s.add(
        "snake/right",
        seq(
            &Diagram::par(&Diagram::identity(1), &cup()),
            &Diagram::par(&cap(), &Diagram::identity(1)),
        ),
        Diagram::identity(1),
        Mode::Eq,
    );

    for m in 0..=3 {
        for n in 0..=3 {
            for k in 0..=3 {
                for k2 in 0..=3 {
                    let lhs = seq(
                        &Diagram::par(&spider(m, k + 1), &Diagram::identity(k2)),
                        &Diagram::par(&Diagram::identity(k), &spider(1 + k2, n)),
                    );
                    s.add(
                        format!("spider-fusion/{m}-{n}-{k}-{k2}"),
                        lhs,
                        spider(m + k2, k + n),
                        Mode::Eq,
                    );
                }
            }
        }
    }

    s.eq("unit-absorbs/unit-cocopy", "(unit * id) ; cocopy", "discard ; unit");
    s.eq("unit-absorbs/codiscard-conj", "(codiscard * id) ; conj", "discard ; codiscard");
    s.eq("unit-absorbs/copy-counit", "copy ; (counit * id)", "counit ; codiscard");
    s.eq("unit-absorbs/coconj-discard", "coconj ; (discard * id)", "discard ; codiscard");

    s.eq("idempotent/copy-conj", "copy ; conj", "id");
    s.eq("idempotent/coconj-cocopy", "coconj ; cocopy", "id");
    s.eq("idempotent/copy-cocopy", "copy ; cocopy", "id");
    s.leq("idempotent/copy-conj-leq", "copy ; conj", "id");

    type Fold = fn(usize) -> Diagram;
    let families: [(&str, Fold, Fold); 3] = [
        ("cocopy-copy", cocopy_n, copy_n),
        ("conj-copy", conj_n, copy_n),
        ("cocopy-coconj", cocopy_n, coconj_n),
    ];
    for (family, mult, comult) in families {
        for k in 0..=3 {
            for n in 0..=3 {
                let (lhs, rhs) = generalized_bialgebra(mult, comult, k, n);
                s.add(format!("bialgebra/{family}-{k}-{n}"), lhs, rhs, Mode::Eq);
            }
        }
    }

    s.0
}

/// Checks every law in [`standard_laws`] under `interp`.
pub fn verify_laws(interp: &Interpreter) -> Vec<LawOutcome> {
    standard_laws()
        .into_iter()
        .map(|law| {
            let result = verify_equation(interp, &law.lhs, &law.rhs, law.mode);
            LawOutcome {
                name: law.name,
                mode: law.mode,
                passed: matches!(result, Ok(true)),
                error: result.err().map(|e| e.to_string()),
            }
        })
        .collect()
}
