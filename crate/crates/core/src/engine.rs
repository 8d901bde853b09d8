//! Goal-directed proof search for closed transitions.
//!
//! A goal is a pair (closed term, action). Each goal owns the set of targets
//! proved so far, each with one proof tree. Goals reached through positive
//! premises are solved together as a least fixpoint; a goal reached through a
//! negative premise is first solved to completion in a nested round, which is
//! sound exactly when the specification is stratified. A nested round that
//! runs into a goal still under evaluation signals a negative cycle and is
//! reported as `NonStratified`.
//!
//! Terms are kept in canonical alpha form, so goals, targets and LTS states
//! are identified up to renaming of bound variables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Lts;
use crate::stratify::{stratify, Stratification};
use crate::term::{canonical, free_vars, match_term, substitute, unfold, Signature, Substitution, Term};
use crate::tss::{Literal, TransitionRule, Tss};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Goals whose term is deeper than this abort the search.
    pub max_depth: usize,
    /// Upper bound on distinct goals.
    pub max_goals: usize,
    /// Upper bound on the size of the guessing universe.
    pub max_universe: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_depth: 64,
            max_goals: 200_000,
            max_universe: 5_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Instance of expanded rule `index` under `substitution`.
    Rule { index: usize, substitution: Substitution },
    /// A recursion inherits the transition of its unfolding.
    Unfold,
    /// A negative literal, justified by the completed search of its goal.
    Refusal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Literal,
    pub justification: Justification,
    pub premises: Vec<Arc<ProofTree>>,
}

impl ProofTree {
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(|p| p.height()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    fn render(&self, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = match &self.justification {
            Justification::Rule { index, .. } => format!("rule {index}"),
            Justification::Unfold => "unfold".to_string(),
            Justification::Refusal => "refusal".to_string(),
        };
        writeln!(f, "{:indent$}{}   [{}]", "", self.conclusion, how, indent = indent)?;
        for p in &self.premises {
            p.render(indent + 2, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(0, f)
    }
}

/// One derived transition with its witness.
#[derive(Debug, Clone)]
pub struct Transition {
    pub action: String,
    pub target: Term,
    pub proof: Arc<ProofTree>,
}

#[derive(Debug, Clone)]
enum Step {
    Positive(usize),
    Negative(usize),
    Guess(String),
}

#[derive(Debug, Clone)]
struct Plan {
    rule: TransitionRule,
    steps: Vec<Step>,
    guesses: bool,
}

type Goal = (Term, String);

#[derive(Debug, Default)]
struct Entry {
    results: Vec<(Term, Arc<ProofTree>)>,
    targets: BTreeSet<Term>,
    complete: bool,
    dependents: BTreeSet<Goal>,
}

pub struct Engine {
    tss: Tss,
    rules: Vec<Plan>,
    by_label: BTreeMap<String, Vec<usize>>,
    stratification: Stratification,
    config: EngineConfig,
    table: BTreeMap<Goal, Entry>,
    dirty: BTreeSet<Goal>,
    solving: Vec<Goal>,
    evaluating: Vec<Goal>,
    universe: Option<Vec<Term>>,
    approximate: bool,
}

fn canon(t: &Term) -> Term {
    if t.contains_rec() {
        canonical(t)
    } else {
        t.clone()
    }
}

impl Engine {
    pub fn new(tss: &Tss) -> Result<Self> {
        Self::with_config(tss, EngineConfig::default())
    }

    pub fn with_config(tss: &Tss, config: EngineConfig) -> Result<Self> {
        tss.validate()?;
        let stratification = stratify(tss).ok_or(Error::NonStratified)?;
        let expanded = tss.expanded_rules();
        let concluded: BTreeSet<&str> = expanded.iter().map(|r| r.conclusion.label.as_str()).collect();
        let mut rules = Vec::new();
        let mut by_label: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for rule in &expanded {
            // A positive premise whose label no rule concludes can never hold.
            let dead = rule
                .premises
                .iter()
                .any(|p| p.is_positive() && !concluded.contains(p.label.as_str()));
            let plan = if dead {
                Plan {
                    rule: rule.clone(),
                    steps: Vec::new(),
                    guesses: false,
                }
            } else {
                plan_rule(rule, tss.guess_depth.is_some())?
            };
            if !dead {
                by_label.entry(rule.conclusion.label.clone()).or_default().push(rules.len());
            }
            rules.push(plan);
        }
        Ok(Engine {
            tss: tss.clone(),
            rules,
            by_label,
            stratification,
            config,
            table: BTreeMap::new(),
            dirty: BTreeSet::new(),
            solving: Vec::new(),
            evaluating: Vec::new(),
            universe: None,
            approximate: false,
        })
    }

    pub fn tss(&self) -> &Tss {
        &self.tss
    }

    pub fn stratification(&self) -> &Stratification {
        &self.stratification
    }

    /// The expanded rule a proof node refers to.
    pub fn rule(&self, index: usize) -> &TransitionRule {
        &self.rules[index].rule
    }

    pub fn expanded_rules(&self) -> Vec<TransitionRule> {
        self.rules.iter().map(|p| p.rule.clone()).collect()
    }

    /// True once some rule variable was instantiated from a finite universe
    /// that does not contain every closed term.
    pub fn approximate(&self) -> bool {
        self.approximate
    }

    /// Whether some live rule instantiates variables by guessing.
    pub fn uses_guessing(&self) -> bool {
        self.by_label.values().flatten().any(|i| self.rules[*i].guesses)
    }

    pub fn goal_count(&self) -> usize {
        self.table.len()
    }

    /// All transitions of the closed term `p`, sorted by action then target.
    pub fn transitions(&mut self, p: &Term) -> Result<Vec<Transition>> {
        if !p.is_closed() {
            return Err(Error::NotClosed(p.to_string()));
        }
        self.tss.signature.check(p)?;
        let p = canon(p);
        let labels: Vec<String> = self.tss.actions.iter().cloned().collect();
        let mut out = Vec::new();
        for a in labels {
            out.extend(self.transitions_on(&p, &a)?);
        }
        Ok(out)
    }

    /// Transitions of `p` labelled `a`.
    pub fn transitions_on(&mut self, p: &Term, a: &str) -> Result<Vec<Transition>> {
        let goal = (canon(p), a.to_string());
        self.solve(&goal)?;
        let entry = &self.table[&goal];
        let mut out: Vec<Transition> = entry
            .results
            .iter()
            .map(|(t, proof)| Transition {
                action: a.to_string(),
                target: t.clone(),
                proof: proof.clone(),
            })
            .collect();
        out.sort_by(|x, y| x.target.cmp(&y.target));
        Ok(out)
    }

    /// Whether `p -a->` holds (after complete search).
    pub fn can(&mut self, p: &Term, a: &str) -> Result<bool> {
        Ok(!self.transitions_on(p, a)?.is_empty())
    }

    fn register(&mut self, goal: &Goal) -> Result<bool> {
        if self.table.contains_key(goal) {
            return Ok(false);
        }
        if goal.0.depth() > self.config.max_depth {
            return Err(Error::SearchBudgetExceeded(format!(
                "term depth {} exceeds {}",
                goal.0.depth(),
                self.config.max_depth
            )));
        }
        if self.table.len() >= self.config.max_goals {
            return Err(Error::SearchBudgetExceeded(format!("more than {} goals", self.config.max_goals)));
        }
        self.table.insert(goal.clone(), Entry::default());
        Ok(true)
    }

    fn is_complete(&self, goal: &Goal) -> bool {
        self.table.get(goal).is_some_and(|e| e.complete)
    }

    /// Runs the fixpoint for `goal` and everything it depends on positively.
    fn solve(&mut self, goal: &Goal) -> Result<()> {
        if self.is_complete(goal) {
            return Ok(());
        }
        if self.solving.contains(goal) || self.evaluating.contains(goal) {
            return Err(Error::NonStratified);
        }
        self.register(goal)?;
        self.solving.push(goal.clone());
        let result = self.run_round(goal);
        self.solving.pop();
        result
    }

    fn run_round(&mut self, root: &Goal) -> Result<()> {
        let mut members: BTreeSet<Goal> = BTreeSet::from([root.clone()]);
        let mut queue: VecDeque<Goal> = VecDeque::from([root.clone()]);
        let mut queued: BTreeSet<Goal> = BTreeSet::from([root.clone()]);
        loop {
            while let Some(g) = queue.pop_front() {
                queued.remove(&g);
                self.dirty.remove(&g);
                if self.is_complete(&g) {
                    continue;
                }
                if self.evaluating.contains(&g) {
                    return Err(Error::NonStratified);
                }
                let discovered = self.evaluate(&g)?;
                for d in discovered {
                    if !self.is_complete(&d) && members.insert(d.clone()) && queued.insert(d.clone()) {
                        queue.push_back(d);
                    }
                }
            }
            let pending: Vec<Goal> = self.dirty.iter().filter(|g| members.contains(*g)).cloned().collect();
            if pending.is_empty() {
                break;
            }
            for g in pending {
                if queued.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
        for g in &members {
            if let Some(e) = self.table.get_mut(g) {
                e.complete = true;
            }
        }
        Ok(())
    }

    fn add_result(&mut self, goal: &Goal, target: Term, proof: Arc<ProofTree>) {
        let entry = self.table.get_mut(goal).expect("registered goal");
        if entry.targets.insert(target.clone()) {
            entry.results.push((target, proof));
            let deps: Vec<Goal> = entry.dependents.iter().cloned().collect();
            for d in deps {
                if !self.is_complete(&d) {
                    self.dirty.insert(d);
                }
            }
        }
    }

    /// Subgoal reached through a positive premise; returns whether it is new
    /// to the current round.
    fn depend(&mut self, sub: &Goal, on_behalf: &Goal, discovered: &mut Vec<Goal>) -> Result<()> {
        self.register(sub)?;
        let entry = self.table.get_mut(sub).expect("registered");
        entry.dependents.insert(on_behalf.clone());
        if !entry.complete {
            discovered.push(sub.clone());
        }
        Ok(())
    }

    /// Applies every rule to `goal` once, using current results of subgoals.
    fn evaluate(&mut self, goal: &Goal) -> Result<Vec<Goal>> {
        let mut discovered = Vec::new();
        let (term, label) = goal;
        if self.tss.recursion_unfolding {
            if let Some(u) = unfold(term) {
                let sub = (canon(&u), label.clone());
                self.depend(&sub, goal, &mut discovered)?;
                let n = self.table[&sub].results.len();
                for i in 0..n {
                    let (target, proof) = self.table[&sub].results[i].clone();
                    let tree = Arc::new(ProofTree {
                        conclusion: Literal::positive(term.clone(), label, target.clone()),
                        justification: Justification::Unfold,
                        premises: vec![proof],
                    });
                    self.add_result(goal, target, tree);
                }
            }
        }
        let indices = self.by_label.get(label).cloned().unwrap_or_default();
        for idx in indices {
            let mut sigma = Substitution::new();
            if !match_term(&self.rules[idx].rule.conclusion.source, term, &mut sigma) {
                continue;
            }
            let mut children = vec![None; self.rules[idx].rule.premises.len()];
            self.run_steps(idx, 0, sigma, &mut children, goal, &mut discovered)?;
        }
        Ok(discovered)
    }

    fn run_steps(
        &mut self,
        idx: usize,
        step: usize,
        sigma: Substitution,
        children: &mut Vec<Option<Arc<ProofTree>>>,
        goal: &Goal,
        discovered: &mut Vec<Goal>,
    ) -> Result<()> {
        let plan = &self.rules[idx];
        if step == plan.steps.len() {
            let concl = &plan.rule.conclusion;
            let target = canon(&substitute(concl.target.as_ref().expect("positive"), &sigma));
            let tree = Arc::new(ProofTree {
                conclusion: Literal::positive(goal.0.clone(), &goal.1, target.clone()),
                justification: Justification::Rule {
                    index: idx,
                    substitution: sigma,
                },
                premises: children.iter().map(|c| c.clone().expect("every premise proved")).collect(),
            });
            self.add_result(goal, target, tree);
            return Ok(());
        }
        match plan.steps[step].clone() {
            Step::Positive(i) => {
                let prem = plan.rule.premises[i].clone();
                let sub = (canon(&substitute(&prem.source, &sigma)), prem.label.clone());
                self.depend(&sub, goal, discovered)?;
                let pattern = prem.target.expect("positive premise");
                let mut k = 0;
                while k < self.table[&sub].results.len() {
                    let (target, proof) = self.table[&sub].results[k].clone();
                    k += 1;
                    let mut extended = sigma.clone();
                    if match_term(&pattern, &target, &mut extended) {
                        children[i] = Some(proof);
                        self.run_steps(idx, step + 1, extended, children, goal, discovered)?;
                    }
                }
                children[i] = None;
            }
            Step::Negative(i) => {
                let prem = plan.rule.premises[i].clone();
                let sub = (canon(&substitute(&prem.source, &sigma)), prem.label.clone());
                self.evaluating.push(goal.clone());
                let solved = self.solve(&sub);
                self.evaluating.pop();
                solved?;
                if self.table[&sub].results.is_empty() {
                    children[i] = Some(Arc::new(ProofTree {
                        conclusion: Literal::negative(sub.0.clone(), &sub.1),
                        justification: Justification::Refusal,
                        premises: Vec::new(),
                    }));
                    self.run_steps(idx, step + 1, sigma, children, goal, discovered)?;
                    children[i] = None;
                }
            }
            Step::Guess(var) => {
                let universe = self.universe()?;
                if !universe_is_exhaustive(&self.tss) {
                    self.approximate = true;
                }
                for value in universe {
                    let mut extended = sigma.clone();
                    extended.insert(var.clone(), value);
                    self.run_steps(idx, step + 1, extended, children, goal, discovered)?;
                }
            }
        }
        Ok(())
    }

    /// Closed terms of depth at most the configured guessing depth.
    fn universe(&mut self) -> Result<Vec<Term>> {
        if let Some(u) = &self.universe {
            return Ok(u.clone());
        }
        let depth = self.tss.guess_depth.unwrap_or(1);
        let u = closed_terms(&self.tss.signature, depth, self.config.max_universe).ok_or_else(|| {
            Error::SearchBudgetExceeded(format!(
                "more than {} closed terms of depth {depth}",
                self.config.max_universe
            ))
        })?;
        self.universe = Some(u.clone());
        Ok(u)
    }

    /// Breadth-first exploration from `roots`, keeping at most `bound` states.
    pub fn lts(&mut self, roots: &[Term], bound: usize) -> Result<ExploredLts> {
        let mut order: Vec<Term> = Vec::new();
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        let mut queue = VecDeque::new();
        let mut truncated = false;
        for r in roots {
            let r = canon(r);
            if seen.contains(&r) {
                continue;
            }
            if seen.len() >= bound {
                truncated = true;
                break;
            }
            seen.insert(r.clone());
            order.push(r.clone());
            queue.push_back(r);
        }
        let mut edges: BTreeSet<(Term, String, Term)> = BTreeSet::new();
        while let Some(s) = queue.pop_front() {
            for tr in self.transitions(&s)? {
                if !seen.contains(&tr.target) {
                    if seen.len() >= bound {
                        truncated = true;
                        continue;
                    }
                    seen.insert(tr.target.clone());
                    order.push(tr.target.clone());
                    queue.push_back(tr.target.clone());
                }
                edges.insert((s.clone(), tr.action, tr.target));
            }
        }
        Ok(ExploredLts {
            states: order,
            edges,
            actions: self.tss.actions.clone(),
            truncated,
        })
    }
}

/// Reachable states of a term-labelled LTS, in discovery order.
#[derive(Debug, Clone)]
pub struct ExploredLts {
    pub states: Vec<Term>,
    pub edges: BTreeSet<(Term, String, Term)>,
    pub actions: BTreeSet<String>,
    pub truncated: bool,
}

impl ExploredLts {
    /// The LTS with states named by the printed form of their terms.
    pub fn to_lts(&self) -> Lts {
        Lts {
            states: self.states.iter().map(Term::to_string).collect(),
            actions: self.actions.clone(),
            edges: self
                .edges
                .iter()
                .map(|(s, a, t)| (s.to_string(), a.clone(), t.to_string()))
                .collect(),
            truncated: self.truncated,
        }
    }
}

/// Orders the premises so that each source is determined before it is
/// searched. Variables that matching cannot determine become guesses, which
/// are only allowed when the specification enables them.
fn plan_rule(rule: &TransitionRule, allow_guess: bool) -> Result<Plan> {
    let mut bound = free_vars(&rule.conclusion.source);
    let mut pending: Vec<usize> = (0..rule.premises.len()).collect();
    let mut steps = Vec::new();
    let mut guesses = false;
    let refuse = |var: &str| Error::UnboundRuleVariable {
        rule: rule.to_string(),
        var: var.to_string(),
    };
    while !pending.is_empty() {
        let ready = |i: &usize| free_vars(&rule.premises[*i].source).is_subset(&bound);
        let pick = pending
            .iter()
            .position(|i| !rule.premises[*i].is_positive() && ready(i))
            .or_else(|| pending.iter().position(|i| rule.premises[*i].is_positive() && ready(i)));
        match pick {
            Some(k) => {
                let i = pending.remove(k);
                let prem = &rule.premises[i];
                if let Some(t) = &prem.target {
                    bound.extend(free_vars(t));
                    steps.push(Step::Positive(i));
                } else {
                    steps.push(Step::Negative(i));
                }
            }
            None => {
                // Guess the first undetermined variable of the earliest premise.
                let var = pending
                    .iter()
                    .flat_map(|i| free_vars(&rule.premises[*i].source))
                    .find(|v| !bound.contains(v))
                    .expect("some premise is blocked by a variable");
                if !allow_guess {
                    return Err(refuse(&var));
                }
                guesses = true;
                bound.insert(var.clone());
                steps.push(Step::Guess(var));
            }
        }
    }
    for v in free_vars(rule.conclusion.target.as_ref().expect("positive conclusion")) {
        if !bound.contains(&v) {
            if !allow_guess {
                return Err(refuse(&v));
            }
            guesses = true;
            bound.insert(v.clone());
            steps.push(Step::Guess(v));
        }
    }
    Ok(Plan {
        rule: rule.clone(),
        steps,
        guesses,
    })
}

/// Whether the guessing universe covers every closed term: only constants
/// are declared and recursion terms do not act.
fn universe_is_exhaustive(tss: &Tss) -> bool {
    !tss.recursion_unfolding && tss.signature.iter().all(|(_, n)| n == 0)
}

/// All closed recursion-free terms of depth at most `depth`, by increasing
/// depth; `None` if there are more than `cap`.
pub fn closed_terms(sig: &Signature, depth: usize, cap: usize) -> Option<Vec<Term>> {
    let mut layers: Vec<Vec<Term>> = Vec::new();
    let mut all: Vec<Term> = Vec::new();
    for d in 1..=depth {
        let mut layer = Vec::new();
        for (f, n) in sig.iter() {
            if n == 0 {
                if d == 1 {
                    layer.push(Term::constant(f));
                }
                continue;
            }
            if d == 1 {
                continue;
            }
            // Argument tuples over all shallower terms with at least one of depth d-1.
            let shallower: Vec<&Term> = all.iter().collect();
            let newest: BTreeSet<&Term> = layers[d - 2].iter().collect();
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in 0..n {
                let mut next = Vec::new();
                for t in &tuples {
                    for a in &shallower {
                        let mut t2 = t.clone();
                        t2.push((*a).clone());
                        next.push(t2);
                        if next.len() > cap.saturating_mul(n + 1) {
                            return None;
                        }
                    }
                }
                tuples = next;
            }
            for args in tuples {
                if args.iter().any(|a| newest.contains(a)) {
                    layer.push(Term::app(f, args));
                    if all.len() + layer.len() > cap {
                        return None;
                    }
                }
            }
        }
        all.extend(layer.iter().cloned());
        layers.push(layer);
    }
    Some(all)
}

/// Transitions of a closed term with one proof each.
pub fn derive_transitions(tss: &Tss, p: &Term) -> Result<Vec<Transition>> {
    Engine::new(tss)?.transitions(p)
}

/// LTS reachable from `roots` with at most `bound` states.
pub fn specified_lts(tss: &Tss, roots: &[Term], bound: usize) -> Result<Lts> {
    Ok(Engine::new(tss)?.lts(roots, bound)?.to_lts())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Transition,
    Refusal,
    Undetermined,
}

/// For each sampled term and action: provable, refuted, or left open by
/// the search budget.
pub fn completeness_check(tss: &Tss, sample: &[Term]) -> Result<Vec<(Term, String, Completeness)>> {
    let mut engine = Engine::new(tss)?;
    let mut out = Vec::new();
    for p in sample {
        for a in tss.actions.iter() {
            let verdict = match engine.transitions_on(p, a) {
                Ok(ts) if ts.is_empty() => Completeness::Refusal,
                Ok(_) => Completeness::Transition,
                Err(Error::SearchBudgetExceeded(_)) => Completeness::Undetermined,
                Err(e) => return Err(e),
            };
            out.push((p.clone(), a.clone(), verdict));
        }
    }
    Ok(out)
}

/// Independent replay of a proof tree against the expanded rules.
///
/// Internal nodes must be substitution instances of the rule they cite, with
/// children in premise order. Refusal leaves are checked with `refuted`,
/// which decides whether a negative literal holds.
pub fn validate_proof(
    rules: &[TransitionRule],
    unfolding: bool,
    tree: &ProofTree,
    refuted: &mut dyn FnMut(&Term, &str) -> bool,
) -> std::result::Result<(), String> {
    let conclusion = &tree.conclusion;
    match &tree.justification {
        Justification::Refusal => {
            if conclusion.is_positive() || !tree.premises.is_empty() {
                return Err(format!("refusal node {conclusion} is malformed"));
            }
            if !refuted(&conclusion.source, &conclusion.label) {
                return Err(format!("{conclusion} does not hold"));
            }
            Ok(())
        }
        Justification::Unfold => {
            if !unfolding {
                return Err("unfolding used but not enabled".into());
            }
            let [child] = tree.premises.as_slice() else {
                return Err("unfold node needs exactly one premise".into());
            };
            let u = unfold(&conclusion.source).ok_or("unfold node on a non-recursion term")?;
            let c = &child.conclusion;
            let same_target = match (&c.target, &conclusion.target) {
                (Some(x), Some(y)) => crate::term::alpha_eq(x, y),
                _ => false,
            };
            if !crate::term::alpha_eq(&c.source, &u) || c.label != conclusion.label || !same_target {
                return Err(format!("unfold premise {c} does not match {conclusion}"));
            }
            validate_proof(rules, unfolding, child, refuted)
        }
        Justification::Rule { index, substitution } => {
            let rule = rules.get(*index).ok_or_else(|| format!("no rule {index}"))?;
            let inst = rule.conclusion.substitute(substitution);
            if !literal_alpha_eq(&inst, conclusion) {
                return Err(format!("{conclusion} is not an instance of rule {index} ({inst})"));
            }
            if rule.premises.len() != tree.premises.len() {
                return Err(format!("rule {index} has {} premises", rule.premises.len()));
            }
            for (prem, child) in rule.premises.iter().zip(&tree.premises) {
                let want = prem.substitute(substitution);
                if !want.source.is_closed() {
                    return Err(format!("premise {want} is not closed"));
                }
                if !literal_alpha_eq(&want, &child.conclusion) {
                    return Err(format!("premise {} does not prove {want}", child.conclusion));
                }
                validate_proof(rules, unfolding, child, refuted)?;
            }
            Ok(())
        }
    }
}

fn literal_alpha_eq(x: &Literal, y: &Literal) -> bool {
    x.label == y.label
        && crate::term::alpha_eq(&x.source, &y.source)
        && match (&x.target, &y.target) {
            (Some(a), Some(b)) => crate::term::alpha_eq(a, b),
            (None, None) => true,
            _ => false,
        }
}
