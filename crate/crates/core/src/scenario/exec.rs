//! Evaluates a parsed scenario into a report.

use std::collections::HashMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::decompose::{classical_subsystem, irreducible_components, spaces_isomorphic_with_budget, DecomposeError};
use crate::dynamics::{is_reversible_map, is_transitive, reversible_maps, DynamicsError, SymmetryGroup};
use crate::geometry::{Field, HullMembership, Matrix};
use crate::interactions::maps::{cnot, controlled_map, identity_map, product_map, swap_map};
use crate::interactions::{
    broadcast_f_map, component_indicator_effects, conditional_structure, extract_decomposition, is_trivial_lri,
    lri_decompose, nondisturbing_measurement, partial_broadcaster, verify_theorem2, InteractionError, LocalGroups,
    LriWitness, Theorem2Verdict,
};
use crate::statespace::{
    cross, cube, direct_sum, distributivity_reshuffle, gbit, house, is_entangled, min_tensor, point, polygon, scramble,
    simplex, space_to_json, SpaceError, StateSpace,
};

use super::ast::{Check, CheckExpr, Expect, MapExpr, ScenarioAst, SpaceExpr, Stmt};
use super::report::{CheckRecord, Report, Verdict};
use super::Config;

/// Why a check could not produce a verdict of its own.
enum Failure {
    Error(String),
    Budget(String),
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            _ => Failure::Error(e.to_string()),
        }
    }
}

impl From<InteractionError> for Failure {
    fn from(e: InteractionError) -> Self {
        match e {
            InteractionError::Dynamics(d) => d.into(),
            InteractionError::Decompose(DecomposeError::Dynamics(d)) => d.into(),
            _ => Failure::Error(e.to_string()),
        }
    }
}

impl From<DecomposeError> for Failure {
    fn from(e: DecomposeError) -> Self {
        match e {
            DecomposeError::Dynamics(d) => d.into(),
            _ => Failure::Error(e.to_string()),
        }
    }
}

impl From<SpaceError> for Failure {
    fn from(e: SpaceError) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Error(e)
    }
}

type Outcome = Result<(Verdict, Value), Failure>;

fn vector<F: Field>(v: &[F]) -> Value {
    Value::from(v.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn matrix<F: Field>(m: &Matrix<F>) -> Value {
    Value::from(m.to_rows().iter().map(|r| vector(r)).collect::<Vec<_>>())
}

fn witness_json<F: Field>(w: &LriWitness<F>) -> Value {
    let family = |maps: &[crate::dynamics::ReversibleMap<F>]| -> Value {
        maps.iter().map(|m| json!({"perm": m.perm, "matrix": matrix(&m.matrix)})).collect()
    };
    json!({
        "matrix": matrix(&w.matrix),
        "perm": w.perm,
        "x": family(&w.x),
        "y": family(&w.y),
        "trivial": is_trivial_lri(w),
        "verified": w.verify(),
    })
}

/// Compares an observation with the expectation, defaulting to `default`.
fn judge(expect: &Option<Expect>, default: Expect, observed: &Expect) -> Verdict {
    if expect.as_ref().unwrap_or(&default) == observed {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn parse_numbers<F: Field>(xs: &[String]) -> Result<Vec<F>, String> {
    xs.iter().map(|s| F::parse_scalar(s).map_err(|e| e.to_string())).collect()
}

enum Value2<F: Field> {
    Space(StateSpace<F>),
    Map(Matrix<F>),
}

pub(super) struct Executor<'c, F: Field> {
    config: &'c Config,
    env: HashMap<String, Result<Value2<F>, String>>,
    groups: Vec<SymmetryGroup<F>>,
}

impl<'c, F: Field> Executor<'c, F> {
    pub(super) fn new(config: &'c Config) -> Self {
        Executor { config, env: HashMap::new(), groups: Vec::new() }
    }

    fn lookup(&self, name: &str) -> Result<&Value2<F>, String> {
        match self.env.get(name) {
            Some(Ok(v)) => Ok(v),
            Some(Err(e)) => Err(format!("'{name}' failed to evaluate: {e}")),
            None => Err(format!("undefined identifier '{name}'")),
        }
    }

    fn space(&self, name: &str) -> Result<StateSpace<F>, String> {
        match self.lookup(name)? {
            Value2::Space(s) => Ok(s.clone()),
            Value2::Map(_) => Err(format!("'{name}' is not a space")),
        }
    }

    fn map(&self, name: &str) -> Result<Matrix<F>, String> {
        match self.lookup(name)? {
            Value2::Map(m) => Ok(m.clone()),
            Value2::Space(_) => Err(format!("'{name}' is not a map")),
        }
    }

    fn group(&mut self, space: &StateSpace<F>) -> Result<SymmetryGroup<F>, Failure> {
        if let Some(g) = self.groups.iter().find(|g| g.space() == space) {
            return Ok(g.clone());
        }
        let g = reversible_maps(space, self.config.budget)?;
        self.groups.push(g.clone());
        Ok(g)
    }

    fn local_groups(&mut self, space: &StateSpace<F>) -> Result<LocalGroups<F>, Failure> {
        let (a, b) = space
            .tensor_factors()
            .ok_or_else(|| format!("'{}' is not a product of two spaces", space.label()))?;
        let (a, b) = (a.clone(), b.clone());
        Ok(LocalGroups::new(self.group(&a)?, self.group(&b)?))
    }

    fn eval_space(&self, expr: &SpaceExpr) -> Result<StateSpace<F>, String> {
        Ok(match expr {
            SpaceExpr::Ref(n) => self.space(n)?,
            SpaceExpr::Builder { name, args } => {
                let n = args.first().copied().unwrap_or(0) as usize;
                match name.as_str() {
                    "simplex" => simplex(n),
                    "point" => point(),
                    "gbit" => gbit(),
                    "cube" if n >= 1 => cube(n),
                    "cross" if n >= 1 => cross(n),
                    "house" => house(),
                    "polygon" => polygon(n).map_err(|e| e.to_string())?,
                    _ => return Err(format!("{name}({n}) is not defined")),
                }
            }
            SpaceExpr::Product(a, b) => min_tensor(&self.space(a)?, &self.space(b)?),
            SpaceExpr::Dsum(a, b) => direct_sum(&self.space(a)?, &self.space(b)?),
            SpaceExpr::Scramble { space, seed } => {
                let s = self.space(space)?;
                let seed = seed.unwrap_or(self.config.seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                scramble(&s, &mut rng).map_err(|e| e.to_string())?.0
            }
            SpaceExpr::Vertices { rows, unit } => {
                let vertices = rows.iter().map(|r| parse_numbers(r)).collect::<Result<Vec<_>, _>>()?;
                StateSpace::new(vertices, parse_numbers(unit)?, "vertices").map_err(|e| e.to_string())?
            }
        })
    }

    fn eval_map(&mut self, expr: &MapExpr) -> Result<Matrix<F>, Failure> {
        Ok(match expr {
            MapExpr::Matrix(rows) => {
                let rows = rows.iter().map(|r| parse_numbers(r)).collect::<Result<Vec<Vec<F>>, _>>()?;
                if rows.iter().any(|r| r.len() != rows[0].len()) {
                    return Err(Failure::Error("matrix rows have different lengths".into()));
                }
                Matrix::from_rows(&rows)
            }
            MapExpr::Identity(s) => identity_map(&self.space(s)?),
            MapExpr::Swap(s) => swap_map(self.space(s)?.ambient_dim()),
            MapExpr::Cnot => cnot(),
            MapExpr::Product(x, y) => product_map(&self.map(x)?, &self.map(y)?),
            MapExpr::Ctrl { control, target, maps } => {
                let maps = maps.iter().map(|m| self.map(m)).collect::<Result<Vec<_>, _>>()?;
                controlled_map(&self.space(control)?, &self.space(target)?, &maps)?
            }
            MapExpr::Element { space, index } => {
                let g = self.group(&self.space(space)?)?;
                let k = *index as usize;
                if k >= g.order() {
                    return Err(Failure::Error(format!("group of '{space}' has only {} elements", g.order())));
                }
                g.element(k).matrix.clone()
            }
        })
    }

    pub(super) fn run(mut self, ast: &ScenarioAst, name: &str) -> Report {
        let mut checks = Vec::new();
        for st in &ast.statements {
            let id = format!("L{}", st.loc.line);
            let start = Instant::now();
            let (kind, outcome): (&str, Outcome) = match &st.node {
                Stmt::Space { name, expr } => {
                    let v = self.eval_space(expr).map(|s| Value2::Space(s.relabeled(name.clone())));
                    let failed = v.as_ref().err().cloned();
                    self.env.insert(name.clone(), v);
                    match failed {
                        Some(e) => ("space", Err(Failure::Error(e))),
                        None => continue,
                    }
                }
                Stmt::Map { name, expr } => match self.eval_map(expr) {
                    Ok(m) => {
                        self.env.insert(name.clone(), Ok(Value2::Map(m)));
                        continue;
                    }
                    Err(f) => {
                        let msg = match &f {
                            Failure::Error(m) | Failure::Budget(m) => m.clone(),
                        };
                        self.env.insert(name.clone(), Err(msg));
                        ("map", Err(f))
                    }
                },
                Stmt::Check(c) => (c.expr.kind(), self.check(c)),
            };
            let (verdict, certificate) = match outcome {
                Ok(vc) => vc,
                Err(Failure::Error(e)) => (Verdict::Error, json!({ "error": e })),
                Err(Failure::Budget(e)) => (Verdict::BudgetExceeded, json!({ "error": e })),
            };
            checks.push(CheckRecord {
                id,
                kind: kind.to_string(),
                verdict,
                certificate,
                millis: start.elapsed().as_millis() as u64,
            });
        }
        Report {
            scenario: name.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            mode: F::MODE.to_string(),
            checks,
        }
    }

    fn check(&mut self, c: &Check) -> Outcome {
        match &c.expr {
            CheckExpr::Decompose(s) => self.decompose(&self.eval_space(s)?, &c.expect),
            CheckExpr::Transitive(s) => {
                let space = self.eval_space(s)?;
                let g = self.group(&space)?;
                let t = is_transitive(&g);
                let cert = json!({"transitive": t, "orbits": g.orbits(), "group_order": g.order()});
                Ok((judge(&c.expect, Expect::Bool(true), &Expect::Bool(t)), cert))
            }
            CheckExpr::Group(s) => {
                let space = self.eval_space(s)?;
                let g = self.group(&space)?;
                let generators: Vec<Value> = g
                    .generators()
                    .iter()
                    .map(|&k| json!({"perm": g.element(k).perm, "matrix": matrix(&g.element(k).matrix)}))
                    .collect();
                let verified = g.elements().iter().all(|e| is_reversible_map(&space, &e.matrix));
                let perms: Vec<&Vec<usize>> = g.elements().iter().map(|e| &e.perm).collect();
                let cert = json!({"order": g.order(), "generators": generators, "perms": perms, "verified": verified});
                let observed = Expect::Int(g.order() as u64);
                let verdict = if !verified { Verdict::Fail } else { judge(&c.expect, observed.clone(), &observed) };
                Ok((verdict, cert))
            }
            CheckExpr::Theorem1(s) => self.theorem1(&self.eval_space(s)?, &c.expect),
            CheckExpr::Theorem2(s) => {
                let space = self.eval_space(s)?;
                let groups = self.local_groups(&space)?;
                let r = verify_theorem2(&groups, self.config.budget)?;
                let mut verdict = match r.verdict {
                    Theorem2Verdict::Pass => Verdict::Pass,
                    Theorem2Verdict::Fail => Verdict::Fail,
                    Theorem2Verdict::Inapplicable => Verdict::Inapplicable,
                    Theorem2Verdict::BudgetExceeded => Verdict::BudgetExceeded,
                };
                match &c.expect {
                    Some(Expect::Int(n)) if verdict == Verdict::Pass && r.total as u64 != *n => verdict = Verdict::Fail,
                    Some(Expect::Word(w)) if w == "inapplicable" => {
                        verdict = if verdict == Verdict::Inapplicable { Verdict::Pass } else { Verdict::Fail }
                    }
                    _ => {}
                }
                let cert = json!({
                    "lris": r.total,
                    "trivial": r.trivial,
                    "broadcasters_checked": r.broadcasters_checked,
                    "nodes": r.nodes,
                    "counterexample": r.counterexample.as_ref().map(witness_json),
                    "reason": r.reason,
                });
                Ok((verdict, cert))
            }
            CheckExpr::Lri { map, on } => {
                let t = self.map(map)?;
                let space = self.eval_space(on)?;
                let groups = self.local_groups(&space)?;
                let w = lri_decompose(&t, &groups)?;
                let observed = match &w {
                    None => "none",
                    Some(w) if is_trivial_lri(w) => "trivial",
                    Some(_) => "nontrivial",
                };
                let expected = match &c.expect {
                    Some(Expect::Word(e)) => e.as_str(),
                    _ => "witness",
                };
                let ok = expected == observed || (expected == "witness" && observed != "none");
                let verified = w.as_ref().is_none_or(|w| w.verify());
                let verdict = if ok && verified { Verdict::Pass } else { Verdict::Fail };
                Ok((verdict, json!({"witness": w.as_ref().map(witness_json), "observed": observed})))
            }
            CheckExpr::Broadcaster { map, on, at } => {
                let t = self.map(map)?;
                let space = self.eval_space(on)?;
                let groups = self.local_groups(&space)?;
                let Some(w) = lri_decompose(&t, &groups)? else {
                    return Ok((Verdict::Fail, json!({"witness": null})));
                };
                let pb = partial_broadcaster(&w, *at as usize)?;
                let f = broadcast_f_map(&pb)?;
                let effects = component_indicator_effects(pb.other());
                let mf = nondisturbing_measurement(&pb, &effects)?;
                let dec = extract_decomposition(&mf)?;
                let discard = pb.discard_identity_holds();
                let complete = mf.is_complete();
                let decomposes = dec.is_some();
                let observed = if decomposes { "decomposes" } else { "trivial" };
                let ok = match &c.expect {
                    Some(Expect::Word(e)) => e == observed,
                    _ => true,
                };
                let cert = json!({
                    "broadcaster": matrix(&pb.matrix),
                    "discard_identity": discard,
                    "f_map": f.images.iter().map(|v| vector(v)).collect::<Vec<_>>(),
                    "f_pure": f.all_pure(),
                    "effects": effects.iter().map(|e| vector(e)).collect::<Vec<_>>(),
                    "measurement": mf.maps.iter().map(matrix).collect::<Vec<_>>(),
                    "complete": complete,
                    "decomposition": dec.map(|d| d.blocks()),
                });
                let verdict = if discard && complete && ok { Verdict::Pass } else { Verdict::Fail };
                Ok((verdict, cert))
            }
            CheckExpr::Theorem3 { map, on } => {
                let t = self.map(map)?;
                let space = self.eval_space(on)?;
                let groups = self.local_groups(&space)?;
                if lri_decompose(&t, &groups)?.is_none() {
                    return Ok((Verdict::Inapplicable, json!({"reason": "map admits no interaction witness"})));
                }
                let Some(bs) = conditional_structure(&t, &groups)? else {
                    let verdict = judge(&c.expect, Expect::Word("preserving or permuting".into()), &Expect::Word("none".into()));
                    return Ok((verdict, json!({"blocks": null})));
                };
                let blocks: Vec<Value> = bs
                    .blocks
                    .iter()
                    .map(|b| json!({"source": b.source, "target": b.target, "x": matrix(&b.x.matrix), "y": matrix(&b.y.matrix)}))
                    .collect();
                let reassembles = bs.verify();
                let observed = if bs.is_block_preserving() { "preserving" } else { "permuting" };
                let ok = match &c.expect {
                    Some(Expect::Word(e)) => e == observed,
                    _ => true,
                };
                let cert = json!({"blocks": blocks, "reassembles": reassembles, "block_preserving": bs.is_block_preserving()});
                Ok((if ok && reassembles { Verdict::Pass } else { Verdict::Fail }, cert))
            }
            CheckExpr::Distributivity(a, b, cc) => {
                let (a, b, cc) = (self.space(a)?, self.space(b)?, self.space(cc)?);
                let lhs = min_tensor(&a, &direct_sum(&b, &cc));
                let rhs = direct_sum(&min_tensor(&a, &b), &min_tensor(&a, &cc));
                let shuffle = distributivity_reshuffle(a.ambient_dim(), b.ambient_dim(), cc.ambient_dim());
                let mut moved: Vec<Vec<F>> = lhs
                    .vertices()
                    .iter()
                    .map(|v| {
                        let mut w = vec![F::zero(); v.len()];
                        for (k, x) in v.iter().enumerate() {
                            w[shuffle[k]] = x.clone();
                        }
                        w
                    })
                    .collect();
                moved.sort_by(|x, y| crate::geometry::matrix::lex_cmp(x, y));
                let agree = moved == rhs.sorted_vertices();
                let cert = json!({"vertices": moved.len(), "agree": agree});
                Ok((judge(&c.expect, Expect::Bool(true), &Expect::Bool(agree)), cert))
            }
            CheckExpr::Entangled { on, state } => {
                let space = self.eval_space(on)?;
                let (a, b) = space
                    .tensor_factors()
                    .ok_or_else(|| format!("'{}' is not a product of two spaces", space.label()))?;
                let s: Vec<F> = parse_numbers(state)?;
                let v = is_entangled(&s, a, b)?;
                let verified = v.certificate.verify(&s, space.vertices());
                let cert = match &v.certificate {
                    HullMembership::Member { weights } => json!({"entangled": false, "weights": vector(weights), "verified": verified}),
                    HullMembership::Separated { covector, max } => json!({
                        "entangled": true,
                        "covector": vector(covector),
                        "max": max.to_string(),
                        "verified": verified,
                    }),
                };
                let verdict = if verified { judge(&c.expect, Expect::Bool(true), &Expect::Bool(v.entangled)) } else { Verdict::Fail };
                Ok((verdict, cert))
            }
        }
    }

    fn decompose(&mut self, space: &StateSpace<F>, expect: &Option<Expect>) -> Outcome {
        let dec = irreducible_components(space);
        let iso = spaces_isomorphic_with_budget(&dec.reassemble(), space, self.config.budget)?;
        let reassembles = iso.as_ref().is_some_and(|i| i.verify());
        let cert = json!({
            "components": dec.len(),
            "blocks": dec.blocks(),
            "ranks": dec.components().iter().map(|c| c.rank()).collect::<Vec<_>>(),
            "bases": dec.components().iter().map(|c| matrix(&c.basis)).collect::<Vec<_>>(),
            "reassembly_isomorphic": reassembles,
        });
        let observed = Expect::Int(dec.len() as u64);
        let verdict = if reassembles { judge(expect, observed.clone(), &observed) } else { Verdict::Fail };
        Ok((verdict, cert))
    }

    fn theorem1(&mut self, space: &StateSpace<F>, expect: &Option<Expect>) -> Outcome {
        let g = self.group(space)?;
        if !is_transitive(&g) {
            return Ok((Verdict::Inapplicable, json!({"transitive": false, "orbits": g.orbits()})));
        }
        let Some(cs) = classical_subsystem(space, &g)? else {
            let verdict = judge(expect, Expect::Word("none".into()), &Expect::Word("none".into()));
            return Ok((verdict, json!({"transitive": true, "decomposable": false})));
        };
        let verified = cs.iso.verify();
        let cert = json!({
            "transitive": true,
            "decomposable": true,
            "n": cs.n,
            "component": serde_json::to_value(space_to_json(&cs.component)).expect("space serializes"),
            "iso": matrix(&cs.iso.matrix),
            "perm": cs.iso.perm,
            "verified": verified,
        });
        let observed = Expect::Int(cs.n as u64);
        let verdict = if verified { judge(expect, observed.clone(), &observed) } else { Verdict::Fail };
        Ok((verdict, cert))
    }
}
