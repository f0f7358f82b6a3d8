//! Scenario syntax tree and its canonical printer.

use std::fmt::{self, Display, Formatter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl Display for Location {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioAst {
    pub statements: Vec<Statement>,
}

impl ScenarioAst {
    /// Statements without their source locations, for structural comparison.
    pub fn nodes(&self) -> Vec<&Stmt> {
        self.statements.iter().map(|s| &s.node).collect()
    }

    pub fn checks(&self) -> impl Iterator<Item = (&Location, &Check)> {
        self.statements.iter().filter_map(|s| match &s.node {
            Stmt::Check(c) => Some((&s.loc, c)),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub loc: Location,
    pub node: Stmt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Space { name: String, expr: SpaceExpr },
    Map { name: String, expr: MapExpr },
    Check(Check),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceExpr {
    Ref(String),
    Builder { name: String, args: Vec<u64> },
    Product(String, String),
    Dsum(String, String),
    Scramble { space: String, seed: Option<u64> },
    Vertices { rows: Vec<Vec<String>>, unit: Vec<String> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapExpr {
    Matrix(Vec<Vec<String>>),
    Identity(String),
    Swap(String),
    Cnot,
    Product(String, String),
    Ctrl { control: String, target: String, maps: Vec<String> },
    Element { space: String, index: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckExpr {
    Decompose(SpaceExpr),
    Transitive(SpaceExpr),
    Group(SpaceExpr),
    Theorem1(SpaceExpr),
    Theorem2(SpaceExpr),
    Lri { map: String, on: SpaceExpr },
    Broadcaster { map: String, on: SpaceExpr, at: u64 },
    Theorem3 { map: String, on: SpaceExpr },
    Distributivity(String, String, String),
    Entangled { on: SpaceExpr, state: Vec<String> },
}

impl CheckExpr {
    pub fn kind(&self) -> &'static str {
        match self {
            CheckExpr::Decompose(_) => "decompose",
            CheckExpr::Transitive(_) => "transitive",
            CheckExpr::Group(_) => "group",
            CheckExpr::Theorem1(_) => "theorem1",
            CheckExpr::Theorem2(_) => "theorem2",
            CheckExpr::Lri { .. } => "lri",
            CheckExpr::Broadcaster { .. } => "broadcaster",
            CheckExpr::Theorem3 { .. } => "theorem3",
            CheckExpr::Distributivity(..) => "distributivity",
            CheckExpr::Entangled { .. } => "entangled",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub expr: CheckExpr,
    pub expect: Option<Expect>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expect {
    Int(u64),
    Bool(bool),
    Word(String),
}

fn list<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

fn matrix(f: &mut Formatter<'_>, rows: &[Vec<String>]) -> fmt::Result {
    write!(f, "[")?;
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        list(f, r)?;
    }
    write!(f, "]")
}

impl Display for SpaceExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Ref(n) => write!(f, "{n}"),
            SpaceExpr::Builder { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            SpaceExpr::Product(a, b) => write!(f, "product({a}, {b})"),
            SpaceExpr::Dsum(a, b) => write!(f, "dsum({a}, {b})"),
            SpaceExpr::Scramble { space, seed: Some(s) } => write!(f, "scramble({space}, {s})"),
            SpaceExpr::Scramble { space, seed: None } => write!(f, "scramble({space})"),
            SpaceExpr::Vertices { rows, unit } => {
                write!(f, "vertices ")?;
                matrix(f, rows)?;
                write!(f, " unit ")?;
                list(f, unit)
            }
        }
    }
}

impl Display for MapExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Matrix(rows) => matrix(f, rows),
            MapExpr::Identity(s) => write!(f, "identity({s})"),
            MapExpr::Swap(s) => write!(f, "swap({s})"),
            MapExpr::Cnot => write!(f, "cnot()"),
            MapExpr::Product(x, y) => write!(f, "product({x}, {y})"),
            MapExpr::Ctrl { control, target, maps } => {
                write!(f, "ctrl({control}, {target}, ")?;
                list(f, maps)?;
                write!(f, ")")
            }
            MapExpr::Element { space, index } => write!(f, "element({space}, {index})"),
        }
    }
}

impl Display for Expect {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Int(n) => write!(f, "{n}"),
            Expect::Bool(b) => write!(f, "{b}"),
            Expect::Word(w) => write!(f, "{w}"),
        }
    }
}

impl Display for Check {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "check {}", self.expr.kind())?;
        match &self.expr {
            CheckExpr::Decompose(s)
            | CheckExpr::Transitive(s)
            | CheckExpr::Group(s)
            | CheckExpr::Theorem1(s) => write!(f, " {s}")?,
            CheckExpr::Theorem2(s) => write!(f, " on {s}")?,
            CheckExpr::Lri { map, on } | CheckExpr::Theorem3 { map, on } => write!(f, " {map} on {on}")?,
            CheckExpr::Broadcaster { map, on, at } => write!(f, " {map} on {on} at {at}")?,
            CheckExpr::Distributivity(a, b, c) => write!(f, " {a} {b} {c}")?,
            CheckExpr::Entangled { on, state } => {
                write!(f, " {on} ")?;
                list(f, state)?;
            }
        }
        if let Some(e) = &self.expect {
            write!(f, " expect {e}")?;
        }
        Ok(())
    }
}

impl Display for Stmt {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Space { name, expr } => write!(f, "space {name} = {expr}"),
            Stmt::Map { name, expr } => write!(f, "map {name} = {expr}"),
            Stmt::Check(c) => write!(f, "{c}"),
        }
    }
}

impl Display for ScenarioAst {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.node)?;
        }
        Ok(())
    }
}
