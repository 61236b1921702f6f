//! String diagrams over the Boolean generators, their monotone-relation
//! semantics, a complete decision procedure via normal forms, and two
//! applications: CNF satisfiability and definite logic programs.

pub mod bits;
pub mod diagram;
pub mod logicprog;
pub mod normalform;
pub mod sat;
pub mod semantics;

pub use diagram::{Diagram, DiagramError, Generator};
pub use semantics::{interpret, Interpreter, MonFunc, MonRel, SemanticsError};
