use std::time::{Duration, Instant};

use super::heuristic::BranchingHeuristic;
use crate::cnf::{Assignment, Clause, CnfFormula, Literal, VarValue};

/// Index of a clause in the solver's clause database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseRef(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    NoConflict,
    Conflict(ClauseRef),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    Decision,
    Clause(ClauseRef),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrailEntry {
    pub literal: Literal,
    pub level: usize,
    pub reason: Reason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitReason {
    MaxDecisions,
    Timeout,
    /// The heuristic returned no decision or an already assigned variable.
    NoDecision,
}

impl std::fmt::Display for LimitReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LimitReason::MaxDecisions => "max-decisions",
            LimitReason::Timeout => "timeout",
            LimitReason::NoDecision => "no-decision",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Assignment),
    Unsat,
    Unknown(LimitReason),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Unknown(_) => "UNKNOWN",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_decisions: Option<u64>,
    pub timeout: Option<Duration>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }

    pub fn decisions(n: u64) -> Self {
        Limits {
            max_decisions: Some(n),
            timeout: None,
        }
    }

    pub fn timeout(t: Duration) -> Self {
        Limits {
            max_decisions: None,
            timeout: Some(t),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub learned_clauses: u64,
    pub restarts: u64,
    pub deleted_clauses: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: SolveStats,
}

/// Optional search features. Both are off by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverConfig {
    /// Restart on a Luby schedule scaled by this many conflicts.
    pub restart_base: Option<u64>,
    /// Halve the deletable learned clauses whenever their count reaches this limit.
    pub max_learned: Option<usize>,
}

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Literal>,
    learned: bool,
    deleted: bool,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: ClauseRef,
    blocker: Literal,
}

#[inline]
fn lit_code(l: Literal) -> usize {
    2 * l.index() + l.is_negated() as usize
}

/// Trail, decision levels, watch lists and the clause database of a CDCL search.
///
/// Every clause of two or more literals keeps its two watched literals at positions
/// 0 and 1. A clause that is the reason for an implied literal holds that literal at
/// position 0.
#[derive(Debug, Clone)]
pub struct SolverState {
    formula: CnfFormula,
    clauses: Vec<ClauseData>,
    /// Indexed by literal code: clauses watching that literal, visited when it becomes false.
    watches: Vec<Vec<Watcher>>,
    assigns: Assignment,
    level: Vec<usize>,
    reason: Vec<Option<ClauseRef>>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    trail: Vec<Literal>,
    trail_lim: Vec<usize>,
    qhead: usize,
    root_conflict: bool,
    num_learned: usize,
    config: SolverConfig,
    stats: SolveStats,
}

impl SolverState {
    pub fn new(formula: &CnfFormula) -> Self {
        Self::with_config(formula, SolverConfig::default())
    }

    pub fn with_config(formula: &CnfFormula, config: SolverConfig) -> Self {
        let n = formula.num_vars();
        let mut state = SolverState {
            formula: formula.clone(),
            clauses: Vec::with_capacity(formula.num_clauses()),
            watches: vec![Vec::new(); 2 * n],
            assigns: Assignment::new(n),
            level: vec![0; n],
            reason: vec![None; n],
            phase: vec![false; n],
            seen: vec![false; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            root_conflict: false,
            num_learned: 0,
            config,
            stats: SolveStats::default(),
        };
        for clause in formula.clauses() {
            state.add_original(clause.literals());
        }
        state
    }

    fn add_original(&mut self, lits: &[Literal]) {
        let mut lits = lits.to_vec();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return; // tautology
        }
        let cref = ClauseRef(self.clauses.len());
        self.clauses.push(ClauseData {
            lits: lits.clone(),
            learned: false,
            deleted: false,
        });
        if lits.len() == 1 {
            match self.lit_value(lits[0]) {
                VarValue::False => self.root_conflict = true,
                VarValue::Unassigned => self.enqueue(lits[0], Some(cref)),
                VarValue::True => {}
            }
        } else {
            self.attach(cref);
        }
    }

    fn attach(&mut self, cref: ClauseRef) {
        let lits = &self.clauses[cref.0].lits;
        let (w0, w1) = (lits[0], lits[1]);
        self.watches[lit_code(w0)].push(Watcher { cref, blocker: w1 });
        self.watches[lit_code(w1)].push(Watcher { cref, blocker: w0 });
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn num_vars(&self) -> usize {
        self.formula.num_vars()
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assigns
    }

    pub fn value(&self, var: u32) -> VarValue {
        self.assigns.get(var)
    }

    #[inline]
    pub fn lit_value(&self, l: Literal) -> VarValue {
        let v = self.assigns.values()[l.index()];
        if l.is_negated() {
            v.flip()
        } else {
            v
        }
    }

    pub fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Decision level of an assigned variable.
    pub fn var_level(&self, var: u32) -> Option<usize> {
        (self.value(var) != VarValue::Unassigned).then(|| self.level[var as usize - 1])
    }

    /// Last value a variable held before it was unassigned; `false` until then.
    pub fn saved_phase(&self, var: u32) -> bool {
        self.phase[var as usize - 1]
    }

    pub fn trail(&self) -> Vec<TrailEntry> {
        self.trail
            .iter()
            .map(|&l| {
                let i = l.index();
                TrailEntry {
                    literal: l,
                    level: self.level[i],
                    reason: self.reason[i].map_or(Reason::Decision, Reason::Clause),
                }
            })
            .collect()
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    pub fn clause(&self, cref: ClauseRef) -> &[Literal] {
        &self.clauses[cref.0].lits
    }

    pub fn is_learned(&self, cref: ClauseRef) -> bool {
        self.clauses[cref.0].learned
    }

    /// Learned clauses currently in the database.
    pub fn learned_clauses(&self) -> impl Iterator<Item = &[Literal]> {
        self.clauses
            .iter()
            .filter(|c| c.learned && !c.deleted)
            .map(|c| c.lits.as_slice())
    }

    pub fn num_learned(&self) -> usize {
        self.num_learned
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    pub fn all_assigned(&self) -> bool {
        self.trail.len() == self.num_vars()
    }

    fn enqueue(&mut self, lit: Literal, reason: Option<ClauseRef>) {
        let i = lit.index();
        debug_assert_eq!(self.assigns.values()[i], VarValue::Unassigned);
        self.assigns.set(lit.var(), VarValue::from_bool(!lit.is_negated()));
        self.level[i] = self.decision_level();
        self.reason[i] = reason;
        self.trail.push(lit);
    }

    /// Opens a new decision level and assigns `lit` as a decision.
    pub fn decide(&mut self, lit: Literal) {
        assert_eq!(self.lit_value(lit), VarValue::Unassigned);
        self.trail_lim.push(self.trail.len());
        self.enqueue(lit, None);
    }

    /// Unit propagation to a fixpoint over the two-watched-literal lists.
    pub fn propagate(&mut self) -> Propagation {
        if self.root_conflict {
            return Propagation::Conflict(self.empty_conflict_ref());
        }
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[lit_code(false_lit)]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.clauses[w.cref.0].deleted {
                    continue;
                }
                if self.lit_value(w.blocker) == VarValue::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let lits = &mut self.clauses[w.cref.0].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let first_value = {
                    let v = self.assigns.values()[first.index()];
                    if first.is_negated() {
                        v.flip()
                    } else {
                        v
                    }
                };
                let kept = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && first_value == VarValue::True {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                for k in 2..lits.len() {
                    let cand = lits[k];
                    let v = self.assigns.values()[cand.index()];
                    let cand_value = if cand.is_negated() { v.flip() } else { v };
                    if cand_value != VarValue::False {
                        lits.swap(1, k);
                        self.watches[lit_code(cand)].push(kept);
                        continue 'watchers;
                    }
                }
                ws[j] = kept;
                j += 1;
                if first_value == VarValue::False {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                    self.stats.propagations += 1;
                }
            }
            ws.truncate(j);
            self.watches[lit_code(false_lit)] = ws;
            if let Some(cref) = conflict {
                self.qhead = self.trail.len();
                return Propagation::Conflict(cref);
            }
        }
        Propagation::NoConflict
    }

    fn empty_conflict_ref(&self) -> ClauseRef {
        // The first original unit clause that is falsified at the root.
        self.clauses
            .iter()
            .position(|c| c.lits.len() == 1 && self.lit_value(c.lits[0]) == VarValue::False)
            .map(ClauseRef)
            .unwrap_or(ClauseRef(0))
    }

    /// 1-UIP conflict analysis. Returns the learned clause, with the asserting
    /// literal first and a literal of the backjump level second, together with the
    /// backjump level (0 for a unit clause).
    ///
    /// Must be called at decision level >= 1 with a clause that is falsified.
    pub fn analyze_conflict(&mut self, conflict: ClauseRef) -> (Clause, usize) {
        let current = self.decision_level();
        assert!(current > 0, "conflict analysis needs a decision level >= 1");
        let mut learned: Vec<Literal> = vec![Literal::positive(1)];
        let mut pending = 0usize;
        let mut cref = conflict;
        let mut uip: Option<Literal> = None;
        let mut idx = self.trail.len();

        loop {
            let skip = usize::from(uip.is_some());
            for k in skip..self.clauses[cref.0].lits.len() {
                let q = self.clauses[cref.0].lits[k];
                let v = q.index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].index()] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.index()] = false;
            pending -= 1;
            uip = Some(p);
            if pending == 0 {
                break;
            }
            cref = self.reason[p.index()].expect("implied literal has a reason");
        }
        learned[0] = !uip.expect("at least one current-level literal");
        for l in &learned[1..] {
            self.seen[l.index()] = false;
        }

        let mut backjump = 0;
        if learned.len() > 1 {
            let mut best = 1;
            for k in 2..learned.len() {
                if self.level[learned[k].index()] > self.level[learned[best].index()] {
                    best = k;
                }
            }
            learned.swap(1, best);
            backjump = self.level[learned[1].index()];
        }
        (Clause::new(learned).expect("nonempty"), backjump)
    }

    /// Unassigns every trail entry above `level`.
    pub fn backjump(&mut self, level: usize) {
        self.backjump_with(level, |_| {});
    }

    fn backjump_with(&mut self, level: usize, mut on_unassign: impl FnMut(u32)) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for k in (start..self.trail.len()).rev() {
            let lit = self.trail[k];
            let i = lit.index();
            self.phase[i] = !lit.is_negated();
            self.assigns.set(lit.var(), VarValue::Unassigned);
            self.reason[i] = None;
            on_unassign(lit.var());
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = self.trail.len();
    }

    /// Adds a learned clause produced by [`Self::analyze_conflict`] after the
    /// backjump and asserts its first literal.
    pub fn add_learned(&mut self, learned: Clause) {
        let lits = learned.literals().to_vec();
        let cref = ClauseRef(self.clauses.len());
        let asserting = lits[0];
        let unit = lits.len() == 1;
        self.clauses.push(ClauseData {
            lits,
            learned: true,
            deleted: false,
        });
        self.num_learned += 1;
        self.stats.learned_clauses += 1;
        if !unit {
            self.attach(cref);
        }
        self.enqueue(asserting, Some(cref));
    }

    fn is_locked(&self, cref: ClauseRef) -> bool {
        let first = self.clauses[cref.0].lits[0];
        self.lit_value(first) == VarValue::True && self.reason[first.index()] == Some(cref)
    }

    /// Deletes the longer half of the unlocked learned clauses.
    fn reduce_learned(&mut self) {
        let mut candidates: Vec<ClauseRef> = (0..self.clauses.len())
            .map(ClauseRef)
            .filter(|&c| {
                let d = &self.clauses[c.0];
                d.learned && !d.deleted && d.lits.len() > 2 && !self.is_locked(c)
            })
            .collect();
        candidates.sort_by_key(|c| (std::cmp::Reverse(self.clauses[c.0].lits.len()), c.0));
        for c in candidates.iter().take(candidates.len() / 2) {
            let d = &mut self.clauses[c.0];
            d.deleted = true;
            d.lits.clear();
            d.lits.shrink_to_fit();
            self.num_learned -= 1;
            self.stats.deleted_clauses += 1;
        }
        for ws in &mut self.watches {
            ws.retain(|w| !self.clauses[w.cref.0].deleted);
        }
    }

    fn model_checks(&self) -> bool {
        self.assigns.is_total() && self.formula.is_satisfied_by(&self.assigns)
    }

    /// Runs the search to completion or until a limit fires.
    pub fn solve(&mut self, heuristic: &mut dyn BranchingHeuristic, limits: Limits) -> SolveOutcome {
        let start = Instant::now();
        let deadline = limits.timeout.map(|t| start + t);
        let verdict = self.search(heuristic, limits.max_decisions, deadline);
        self.stats.wall_time = start.elapsed();
        if let Verdict::Sat(model) = &verdict {
            assert!(
                self.formula.is_satisfied_by(model),
                "solver produced a model that falsifies the input formula"
            );
        }
        SolveOutcome {
            verdict,
            stats: self.stats,
        }
    }

    fn search(
        &mut self,
        h: &mut dyn BranchingHeuristic,
        max_decisions: Option<u64>,
        deadline: Option<Instant>,
    ) -> Verdict {
        if self.root_conflict || self.propagate() != Propagation::NoConflict {
            return Verdict::Unsat;
        }
        h.init(self);
        let mut luby_index = 0u32;
        let mut conflicts_until_restart = self.config.restart_base.map(|b| b * luby(luby_index));

        loop {
            if self.all_assigned() {
                debug_assert!(self.model_checks());
                return Verdict::Sat(self.assigns.clone());
            }
            if max_decisions.is_some_and(|m| self.stats.decisions >= m) {
                return Verdict::Unknown(LimitReason::MaxDecisions);
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return Verdict::Unknown(LimitReason::Timeout);
            }

            let Some(decision) = h.pick(self) else {
                return Verdict::Unknown(LimitReason::NoDecision);
            };
            if decision.var == 0
                || decision.var as usize > self.num_vars()
                || self.value(decision.var) != VarValue::Unassigned
            {
                return Verdict::Unknown(LimitReason::NoDecision);
            }
            self.stats.decisions += 1;
            self.decide(decision.literal());

            let mut outcome = self.propagate();
            h.on_decision_propagated(self, outcome != Propagation::NoConflict);

            while let Propagation::Conflict(cref) = outcome {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    return Verdict::Unsat;
                }
                let (learned, level) = self.analyze_conflict(cref);
                h.on_conflict(&learned);
                self.backjump_with(level, |v| h.on_unassign(v));
                self.add_learned(learned);

                if let Some(left) = conflicts_until_restart.as_mut() {
                    *left = left.saturating_sub(1);
                    if *left == 0 {
                        luby_index += 1;
                        *left = self.config.restart_base.unwrap_or(1) * luby(luby_index);
                        self.stats.restarts += 1;
                        self.backjump_with(0, |v| h.on_unassign(v));
                    }
                }
                if let Some(max) = self.config.max_learned {
                    if self.num_learned >= max {
                        self.reduce_learned();
                    }
                }
                outcome = self.propagate();
                if outcome == Propagation::NoConflict
                    && deadline.is_some_and(|d| Instant::now() >= d)
                {
                    return Verdict::Unknown(LimitReason::Timeout);
                }
            }
        }
    }
}

/// Luby sequence 1, 1, 2, 1, 1, 2, 4, ... (0-based index).
fn luby(mut i: u32) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i as u64 + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = i as u64;
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    i = seq;
    1u64 << i
}

/// Solves `f` from scratch with the given heuristic.
pub fn solve(f: &CnfFormula, heuristic: &mut dyn BranchingHeuristic, limits: Limits) -> SolveOutcome {
    SolverState::new(f).solve(heuristic, limits)
}
